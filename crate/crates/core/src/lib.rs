//! Automatic zoom for high-resolution surveillance streams.
//!
//! Each cycle of `delta` frames the engine looks at the first `omega` frames,
//! fuses motion / human / face observations into a sensitivity map, masks it
//! with the user's relevance map and a decaying coverage penalty, picks the
//! most sensitive region, tracks it for the rest of the cycle and eases a
//! virtual camera in and out of it.

pub mod components;
pub mod error;
pub mod frame;
pub mod fusion;
pub mod geometry;
pub mod io;
pub mod map;
pub mod observation;
pub mod pipeline;
pub mod roi;
pub mod synth;
pub mod tracking;
pub mod zoom;

pub use error::{Error, Result};
pub use frame::Frame;
pub use fusion::{decision_map, fuse, FusionWeights, PenaltyState, UserMask};
pub use geometry::{adjust_aspect, clamp_rect, scale_rect, Rect};
pub use map::ScalarMap;
pub use observation::{DetectionRecord, DetectionStream, ObservationKind};
pub use pipeline::{Engine, PipelineConfig, TrajectoryEntry};
pub use roi::{extract_candidates, select_target, CandidateRoi, RoiParams};
pub use tracking::{init_tracker, track_step, TrackerParams, TrackerState};
pub use zoom::{hermite, render, schedule_params, AbSchedule, ParamSmoother, Phase, ZoomParams};
