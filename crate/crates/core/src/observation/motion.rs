//! Motion observation: downscale, background-subtract, clean up with a 3x3
//! opening, box the connected blobs and paint the boxes back at full size.

use std::borrow::Cow;

use crate::frame::Frame;
use crate::geometry::{clamp_rect, round_half_up, scale_rect, Rect};
use crate::map::ScalarMap;
use crate::observation::mog::{MogModel, MogParams};

/// Default analysis downscale for the motion detector.
pub const DEFAULT_MOTION_SCALE: f64 = 0.6;

#[derive(Debug, Clone)]
pub struct MotionDetector {
    model: MogModel,
    scale: f64,
}

impl MotionDetector {
    pub fn new(params: MogParams, scale: f64) -> Self {
        assert!(scale > 0.0 && scale <= 1.0, "motion scale must be in (0, 1]");
        MotionDetector {
            model: MogModel::new(params),
            scale,
        }
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn model(&self) -> &MogModel {
        &self.model
    }

    /// Size of the downscaled analysis image for a frame of `w x h`.
    pub fn analysis_dims(scale: f64, w: usize, h: usize) -> (usize, usize) {
        (
            (round_half_up(w as f64 * scale) as usize).max(1),
            (round_half_up(h as f64 * scale) as usize).max(1),
        )
    }

    /// Foreground rectangles on the downscaled analysis image.
    pub fn detect_analysis_rects(&mut self, frame: &Frame) -> Vec<Rect> {
        let (w, h) = frame.dims();
        let small: Cow<'_, Frame> = if self.scale < 1.0 {
            let (sw, sh) = Self::analysis_dims(self.scale, w, h);
            Cow::Owned(frame.resize(sw, sh))
        } else {
            Cow::Borrowed(frame)
        };
        self.model.apply(&small).erode3().dilate3().component_boxes()
    }

    /// Foreground rectangles in full-resolution coordinates.
    pub fn detect_rects(&mut self, frame: &Frame) -> Vec<Rect> {
        let (w, h) = frame.dims();
        self.detect_analysis_rects(frame)
            .into_iter()
            .map(|b| clamp_rect(scale_rect(b, 1.0 / self.scale), w, h))
            .collect()
    }

    /// Binary motion map at full resolution.
    pub fn detect(&mut self, frame: &Frame) -> ScalarMap {
        let mut map = ScalarMap::zeros(frame.width(), frame.height());
        for r in self.detect_rects(frame) {
            map.fill_rect(&r, 1.0);
        }
        map
    }
}

/// Functional form of [`MotionDetector::detect`]: consumes the model and
/// returns it updated alongside the full-resolution motion map.
pub fn detect_motion(frame: &Frame, model: MogModel, scale: f64) -> (ScalarMap, MogModel) {
    let mut detector = MotionDetector { model, scale };
    assert!(scale > 0.0 && scale <= 1.0, "motion scale must be in (0, 1]");
    let map = detector.detect(frame);
    (map, detector.model)
}
