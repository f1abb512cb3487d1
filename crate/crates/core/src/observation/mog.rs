//! Per-pixel Gaussian mixture background model.
//!
//! Each pixel keeps up to `components` isotropic RGB Gaussians ordered by
//! weight. A pixel is background when it matches one of the leading
//! components whose cumulative weight stays below `background_ratio`.
//! Unmatched samples replace the weakest component, which is how stale modes
//! get pruned with a fixed component budget.

use crate::components::Mask;
use crate::frame::Frame;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MogParams {
    pub components: usize,
    pub learning_rate: f32,
    /// Match radius in standard deviations of the per-channel RMS distance.
    pub variance_threshold: f32,
    pub initial_variance: f32,
    pub min_variance: f32,
    pub max_variance: f32,
    pub background_ratio: f32,
}

impl Default for MogParams {
    fn default() -> Self {
        MogParams {
            components: 4,
            learning_rate: 0.005,
            variance_threshold: 2.5,
            initial_variance: 15.0,
            min_variance: 4.0,
            max_variance: 75.0,
            background_ratio: 0.9,
        }
    }
}

#[derive(Debug, Clone)]
pub struct MogModel {
    params: MogParams,
    width: usize,
    height: usize,
    weights: Vec<f32>,
    means: Vec<f32>,
    variances: Vec<f32>,
    active: Vec<u8>,
    frames_seen: u64,
}

impl MogModel {
    pub fn new(params: MogParams) -> Self {
        assert!(params.components >= 1 && params.components <= 255);
        assert!(params.learning_rate > 0.0 && params.learning_rate < 1.0);
        MogModel {
            params,
            width: 0,
            height: 0,
            weights: Vec::new(),
            means: Vec::new(),
            variances: Vec::new(),
            active: Vec::new(),
            frames_seen: 0,
        }
    }

    pub fn params(&self) -> &MogParams {
        &self.params
    }

    pub fn frames_seen(&self) -> u64 {
        self.frames_seen
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    /// Weights of the active components at a pixel, strongest first.
    pub fn weights_at(&self, x: usize, y: usize) -> &[f32] {
        let p = y * self.width + x;
        let k = self.params.components;
        &self.weights[p * k..p * k + self.active[p] as usize]
    }

    fn reset(&mut self, frame: &Frame) {
        let (w, h) = frame.dims();
        let k = self.params.components;
        let n = w * h;
        self.width = w;
        self.height = h;
        self.weights = vec![0.0; n * k];
        self.means = vec![0.0; n * k * 3];
        self.variances = vec![self.params.initial_variance; n * k];
        self.active = vec![1; n];
        for (p, px) in frame.data().chunks_exact(3).enumerate() {
            self.weights[p * k] = 1.0;
            for (m, &v) in self.means[p * k * 3..p * k * 3 + 3].iter_mut().zip(px) {
                *m = v as f32;
            }
        }
        self.frames_seen = 1;
    }

    /// Classifies every pixel of `frame` and folds it into the model. The
    /// first frame (or a frame of different size) seeds the model and is
    /// reported as all background.
    pub fn apply(&mut self, frame: &Frame) -> Mask {
        if self.frames_seen == 0 || frame.dims() != (self.width, self.height) {
            self.reset(frame);
            return Mask::new(self.width, self.height);
        }
        self.frames_seen += 1;

        let k = self.params.components;
        let MogParams {
            learning_rate: alpha,
            variance_threshold,
            initial_variance,
            min_variance,
            max_variance,
            background_ratio,
            ..
        } = self.params;
        let thr2 = variance_threshold * variance_threshold;

        let mut fg = vec![false; self.width * self.height];
        for (p, px) in frame.data().chunks_exact(3).enumerate() {
            let sample = [px[0] as f32, px[1] as f32, px[2] as f32];
            let weights = &mut self.weights[p * k..(p + 1) * k];
            let means = &mut self.means[p * k * 3..(p + 1) * k * 3];
            let vars = &mut self.variances[p * k..(p + 1) * k];
            let active = &mut self.active[p];
            let n = *active as usize;

            let mut matched = None;
            let mut background = false;
            let mut cumulative = 0.0f32;
            for m in 0..n {
                let mu = &means[m * 3..m * 3 + 3];
                let d0 = sample[0] - mu[0];
                let d1 = sample[1] - mu[1];
                let d2 = sample[2] - mu[2];
                let dist2 = (d0 * d0 + d1 * d1 + d2 * d2) / 3.0;
                if dist2 < thr2 * vars[m] {
                    background = cumulative < background_ratio;
                    matched = Some((m, dist2));
                    break;
                }
                cumulative += weights[m];
            }
            fg[p] = !background;

            for w in weights[..n].iter_mut() {
                *w *= 1.0 - alpha;
            }
            let touched = match matched {
                Some((m, dist2)) => {
                    weights[m] += alpha;
                    let rho = (alpha / weights[m]).min(1.0);
                    for c in 0..3 {
                        means[m * 3 + c] += rho * (sample[c] - means[m * 3 + c]);
                    }
                    vars[m] = (vars[m] + rho * (dist2 - vars[m])).clamp(min_variance, max_variance);
                    m
                }
                None => {
                    let slot = if n < k {
                        *active += 1;
                        n
                    } else {
                        k - 1
                    };
                    weights[slot] = alpha;
                    means[slot * 3..slot * 3 + 3].copy_from_slice(&sample);
                    vars[slot] = initial_variance;
                    slot
                }
            };

            let n = *active as usize;
            let total: f32 = weights[..n].iter().sum();
            for w in weights[..n].iter_mut() {
                *w /= total;
            }
            // Keep components sorted by weight: only the touched one can have moved up.
            let mut i = touched;
            while i > 0 && weights[i] > weights[i - 1] {
                weights.swap(i, i - 1);
                vars.swap(i, i - 1);
                for c in 0..3 {
                    means.swap(i * 3 + c, (i - 1) * 3 + c);
                }
                i -= 1;
            }
        }
        Mask::from_bits(self.width, self.height, fg)
    }
}
