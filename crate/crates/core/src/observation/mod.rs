//! Per-frame binary observations (native motion detector plus ingested
//! detection streams) and their accumulation over a short window.

pub mod accumulate;
pub mod detections;
pub mod metrics;
pub mod mog;
pub mod motion;

pub use accumulate::{accumulate, AccumulatorState, DEFAULT_OMEGA};
pub use detections::{
    rasterize, rasterize_to_grid, DetectionRecord, DetectionStream, ObservationKind,
    DEFAULT_MIN_CONFIDENCE,
};
pub use metrics::{evaluate_prf, PixelCounts, Prf, PrfAverage};
pub use mog::{MogModel, MogParams};
pub use motion::{detect_motion, MotionDetector, DEFAULT_MOTION_SCALE};
