//! Pixel-level precision / recall / F1 of a binary prediction against a
//! binary ground truth.

use serde::Serialize;

use crate::error::Result;
use crate::map::ScalarMap;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PixelCounts {
    pub tp: u64,
    pub fp: u64,
    pub fn_: u64,
}

impl PixelCounts {
    /// Both maps are binarized at 0.5.
    pub fn count(pred: &ScalarMap, truth: &ScalarMap) -> Result<Self> {
        pred.ensure_dims(truth)?;
        let mut c = PixelCounts::default();
        for (&p, &t) in pred.values().iter().zip(truth.values()) {
            match (p >= 0.5, t >= 0.5) {
                (true, true) => c.tp += 1,
                (true, false) => c.fp += 1,
                (false, true) => c.fn_ += 1,
                (false, false) => {}
            }
        }
        Ok(c)
    }

    /// An empty denominator scores 1 when the other mask is empty as well
    /// (nothing to find, nothing claimed), 0 otherwise.
    pub fn prf(&self) -> Prf {
        let precision = if self.tp + self.fp == 0 {
            if self.fn_ == 0 { 1.0 } else { 0.0 }
        } else {
            self.tp as f64 / (self.tp + self.fp) as f64
        };
        let recall = if self.tp + self.fn_ == 0 {
            if self.fp == 0 { 1.0 } else { 0.0 }
        } else {
            self.tp as f64 / (self.tp + self.fn_) as f64
        };
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        Prf {
            precision,
            recall,
            f1,
        }
    }
}

pub fn evaluate_prf(pred: &ScalarMap, truth: &ScalarMap) -> Result<Prf> {
    Ok(PixelCounts::count(pred, truth)?.prf())
}

/// Running mean of per-frame scores, as used when scoring a whole clip.
#[derive(Debug, Clone, Default)]
pub struct PrfAverage {
    sum_p: f64,
    sum_r: f64,
    sum_f: f64,
    frames: usize,
}

impl PrfAverage {
    pub fn add(&mut self, prf: Prf) {
        self.sum_p += prf.precision;
        self.sum_r += prf.recall;
        self.sum_f += prf.f1;
        self.frames += 1;
    }

    pub fn frames(&self) -> usize {
        self.frames
    }

    pub fn mean(&self) -> Option<Prf> {
        (self.frames > 0).then(|| {
            let n = self.frames as f64;
            Prf {
                precision: self.sum_p / n,
                recall: self.sum_r / n,
                f1: self.sum_f / n,
            }
        })
    }
}
