//! Fixed-size mean-shift tracker over kernel-weighted RGB histograms.
//!
//! The window size is frozen at initialization; only its center moves. Each
//! step hill-climbs the Bhattacharyya coefficient between the target model
//! and the candidate histogram under the window.

use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::geometry::{clamp_rect, Rect};

pub const BINS_PER_CHANNEL: usize = 16;
const BIN_SHIFT: u32 = 4;
pub const HISTOGRAM_BINS: usize = BINS_PER_CHANNEL * BINS_PER_CHANNEL * BINS_PER_CHANNEL;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelProfile {
    /// `1 - r^2` inside the unit ellipse inscribed in the window.
    Epanechnikov,
    /// Every pixel of the window weighs the same.
    Flat,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackerParams {
    pub kernel: KernelProfile,
    pub max_iterations: usize,
    /// Convergence threshold on the per-iteration shift, in pixels.
    pub epsilon: f64,
}

impl Default for TrackerParams {
    fn default() -> Self {
        TrackerParams {
            kernel: KernelProfile::Epanechnikov,
            max_iterations: 20,
            epsilon: 1.0,
        }
    }
}

#[inline]
fn bin_of(px: [u8; 3]) -> usize {
    ((px[0] as usize >> BIN_SHIFT) * BINS_PER_CHANNEL + (px[1] as usize >> BIN_SHIFT)) * BINS_PER_CHANNEL
        + (px[2] as usize >> BIN_SHIFT)
}

/// Normalized color histogram (sums to 1 unless the window had no weight).
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram(pub Vec<f64>);

impl Histogram {
    pub fn bhattacharyya(&self, other: &Histogram) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&p, &q)| (p * q).sqrt())
            .sum()
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }
}

/// Kernel weight of the pixel at `(px, py)` for a `w x h` window centered at
/// `(cx, cy)`; pixel centers sit at half-integer positions.
#[inline]
fn kernel_weight(kernel: KernelProfile, px: usize, py: usize, cx: f64, cy: f64, w: f64, h: f64) -> f64 {
    match kernel {
        KernelProfile::Flat => 1.0,
        KernelProfile::Epanechnikov => {
            let dx = (px as f64 + 0.5 - cx) / (w / 2.0);
            let dy = (py as f64 + 0.5 - cy) / (h / 2.0);
            (1.0 - (dx * dx + dy * dy)).max(0.0)
        }
    }
}

#[derive(Debug, Clone)]
pub struct TrackerState {
    target: Histogram,
    params: TrackerParams,
    width: i32,
    height: i32,
    center: (f64, f64),
    frame_dims: (usize, usize),
}

impl TrackerState {
    pub fn target_histogram(&self) -> &Histogram {
        &self.target
    }

    /// Current window.
    pub fn rect(&self) -> Rect {
        clamp_rect(
            Rect::centered_at(self.center.0, self.center.1, self.width, self.height),
            self.frame_dims.0,
            self.frame_dims.1,
        )
    }

    fn window(&self, center: (f64, f64)) -> Rect {
        clamp_rect(
            Rect::centered_at(center.0, center.1, self.width, self.height),
            self.frame_dims.0,
            self.frame_dims.1,
        )
    }

    /// Keeps the window fully inside the frame.
    fn clamp_center(&self, c: (f64, f64)) -> (f64, f64) {
        let (fw, fh) = (self.frame_dims.0 as f64, self.frame_dims.1 as f64);
        let (hw, hh) = (self.width as f64 / 2.0, self.height as f64 / 2.0);
        (c.0.clamp(hw, (fw - hw).max(hw)), c.1.clamp(hh, (fh - hh).max(hh)))
    }

    fn histogram_at(&self, frame: &Frame, center: (f64, f64)) -> Histogram {
        histogram(frame, &self.window(center), center, self.params.kernel)
    }

    /// One mean-shift location update from `center`. `None` when no pixel in
    /// the window carries weight (complete appearance loss).
    fn shift(&self, frame: &Frame, center: (f64, f64), candidate: &Histogram) -> Option<(f64, f64)> {
        let win = self.window(center);
        let (w, h) = (self.width as f64, self.height as f64);
        let (mut sx, mut sy, mut sw) = (0.0, 0.0, 0.0);
        for py in win.y as usize..win.bottom() as usize {
            for px in win.x as usize..win.right() as usize {
                if kernel_weight(self.params.kernel, px, py, center.0, center.1, w, h) <= 0.0 {
                    continue;
                }
                let u = bin_of(frame.pixel(px, py));
                let p = candidate.0[u];
                if p <= 0.0 {
                    continue;
                }
                let wi = (self.target.0[u] / p).sqrt();
                sx += wi * (px as f64 + 0.5);
                sy += wi * (py as f64 + 0.5);
                sw += wi;
            }
        }
        (sw > 0.0).then(|| (sx / sw, sy / sw))
    }

    /// Runs mean-shift iterations on `frame` and returns the new window.
    pub fn step(&mut self, frame: &Frame) -> Rect {
        assert_eq!(frame.dims(), self.frame_dims, "frame size changed mid-track");
        let mut y0 = self.center;
        for _ in 0..self.params.max_iterations {
            let p0 = self.histogram_at(frame, y0);
            let rho0 = p0.bhattacharyya(&self.target);
            let Some(raw) = self.shift(frame, y0, &p0) else {
                break;
            };
            let mut y1 = self.clamp_center(raw);
            // Halve the step while similarity drops (bounded).
            for _ in 0..8 {
                let rho1 = self.histogram_at(frame, y1).bhattacharyya(&self.target);
                if rho1 >= rho0 || dist(y0, y1) < self.params.epsilon {
                    break;
                }
                y1 = ((y0.0 + y1.0) / 2.0, (y0.1 + y1.1) / 2.0);
            }
            let moved = dist(y0, y1);
            y0 = y1;
            if moved < self.params.epsilon {
                break;
            }
        }
        self.center = y0;
        self.rect()
    }
}

fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
}

/// Kernel-weighted, normalized histogram of `window` with the kernel centered
/// at `center`.
pub fn histogram(frame: &Frame, window: &Rect, center: (f64, f64), kernel: KernelProfile) -> Histogram {
    let mut bins = vec![0.0; HISTOGRAM_BINS];
    let (w, h) = (window.w as f64, window.h as f64);
    let mut total = 0.0;
    for py in window.y.max(0) as usize..(window.bottom() as usize).min(frame.height()) {
        for px in window.x.max(0) as usize..(window.right() as usize).min(frame.width()) {
            let k = kernel_weight(kernel, px, py, center.0, center.1, w, h);
            if k > 0.0 {
                bins[bin_of(frame.pixel(px, py))] += k;
                total += k;
            }
        }
    }
    if total > 0.0 {
        bins.iter_mut().for_each(|b| *b /= total);
    }
    Histogram(bins)
}

pub fn init_tracker(frame: &Frame, rect: Rect, params: TrackerParams) -> Result<TrackerState> {
    if rect.w < 2 || rect.h < 2 {
        return Err(Error::DegenerateWindow { w: rect.w, h: rect.h });
    }
    if !rect.fits_in(frame.width(), frame.height()) {
        return Err(Error::InvalidArgument(format!(
            "tracking window {rect:?} outside the {}x{} frame",
            frame.width(),
            frame.height()
        )));
    }
    let center = rect.center();
    Ok(TrackerState {
        target: histogram(frame, &rect, center, params.kernel),
        params,
        width: rect.w,
        height: rect.h,
        center,
        frame_dims: frame.dims(),
    })
}

/// Functional form of [`TrackerState::step`].
pub fn track_step(mut state: TrackerState, frame: &Frame) -> (TrackerState, Rect) {
    let r = state.step(frame);
    (state, r)
}
