//! Candidate regions from the decision map and choice of the cycle's target.

use std::cmp::Ordering;

use serde::Serialize;

use crate::components::Mask;
use crate::geometry::{adjust_aspect, clamp_rect, Rect};
use crate::map::ScalarMap;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CandidateRoi {
    pub rect: Rect,
    /// Sum of the (unthresholded) decision map inside `rect`.
    pub score: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoiParams {
    pub threshold: f64,
    /// Boxes closer than this (Chebyshev gap, pixels) are merged.
    pub merge_dist: i32,
    /// Boxes smaller than this many pixels are dropped after merging.
    pub min_area: i64,
}

pub const DEFAULT_THRESHOLD: f64 = 0.2;
pub const DEFAULT_MERGE_DIST: i32 = 16;
pub const DEFAULT_MIN_AREA_FRACTION: f64 = 0.0005;

impl RoiParams {
    /// Defaults for a map of the given size.
    pub fn for_map(width: usize, height: usize) -> Self {
        RoiParams {
            threshold: DEFAULT_THRESHOLD,
            merge_dist: DEFAULT_MERGE_DIST,
            min_area: (DEFAULT_MIN_AREA_FRACTION * (width * height) as f64).round() as i64,
        }
    }
}

/// Merges boxes whose gap is below `merge_dist` into their joint bounding
/// box, repeating until no pair qualifies. The result is sorted in raster
/// order of the top-left corner.
pub fn merge_boxes(mut boxes: Vec<Rect>, merge_dist: i32) -> Vec<Rect> {
    'outer: loop {
        for i in 0..boxes.len() {
            for j in i + 1..boxes.len() {
                if boxes[i].gap(&boxes[j]) < merge_dist {
                    let b = boxes.swap_remove(j);
                    boxes[i] = boxes[i].union(&b);
                    continue 'outer;
                }
            }
        }
        break;
    }
    boxes.sort_by_key(|r| (r.y, r.x, r.w, r.h));
    boxes
}

/// Thresholds the decision map, boxes its 8-connected blobs, merges nearby
/// boxes, drops tiny ones and ranks the rest by their decision-map sum
/// (ties: larger area first, then raster order).
pub fn extract_candidates(decision: &ScalarMap, params: &RoiParams) -> Vec<CandidateRoi> {
    assert!(
        params.threshold > 0.0 && params.threshold < 1.0,
        "threshold must be in (0, 1)"
    );
    let mask = Mask::from_bits(
        decision.width(),
        decision.height(),
        decision.to_mask(params.threshold),
    );
    let mut candidates: Vec<CandidateRoi> = merge_boxes(mask.component_boxes(), params.merge_dist)
        .into_iter()
        .filter(|r| r.area() >= params.min_area)
        .map(|rect| CandidateRoi {
            rect,
            score: decision.sum_rect(&rect),
        })
        .collect();
    candidates.sort_by(rank);
    candidates
}

fn rank(a: &CandidateRoi, b: &CandidateRoi) -> Ordering {
    b.score
        .total_cmp(&a.score)
        .then(b.rect.area().cmp(&a.rect.area()))
        .then((a.rect.y, a.rect.x).cmp(&(b.rect.y, b.rect.x)))
}

/// Head candidate, grown to `target_aspect` and clamped to the frame. `None`
/// when there are no candidates.
pub fn select_target(
    candidates: &[CandidateRoi],
    target_aspect: f64,
    frame_w: usize,
    frame_h: usize,
) -> Option<Rect> {
    let head = candidates.first()?;
    Some(clamp_rect(
        adjust_aspect(head.rect, target_aspect, frame_w, frame_h),
        frame_w,
        frame_h,
    ))
}
