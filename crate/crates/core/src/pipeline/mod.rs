//! Cycle orchestration, configuration and the trajectory log.

pub mod config;
pub mod engine;
pub mod run;
pub mod trajectory;

pub use config::PipelineConfig;
pub use engine::{CycleOutput, CycleReport, CycleRunner, Engine, Scheduled, StageTime, StageTimings};
pub use run::{run, run_paths, RunPaths, RunSummary};
pub use trajectory::{read_trajectory, read_truth, write_trajectory, zoom_accuracy, CycleTruth, TrajectoryEntry};
