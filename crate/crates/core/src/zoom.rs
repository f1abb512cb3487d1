//! Virtual camera: AB zoom schedule, cubic Hermite easing between the full
//! view and the target, median smoothing of tracked targets, and rendering.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::geometry::{clamp_rect, round_half_up, Rect};

/// View window: center and size in input-frame pixels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZoomParams {
    pub cx: f64,
    pub cy: f64,
    pub vw: f64,
    pub vh: f64,
}

impl ZoomParams {
    pub fn from_rect(r: &Rect) -> Self {
        let (cx, cy) = r.center();
        ZoomParams {
            cx,
            cy,
            vw: r.w as f64,
            vh: r.h as f64,
        }
    }

    /// Largest window with aspect `out_w / out_h` inside the frame, centered.
    /// Equals the whole frame when the aspects agree.
    pub fn full_view(frame_w: usize, frame_h: usize, out_w: usize, out_h: usize) -> Self {
        let aspect = out_w as f64 / out_h as f64;
        let (fw, fh) = (frame_w as f64, frame_h as f64);
        let (vw, vh) = if fw / fh > aspect {
            (fh * aspect, fh)
        } else {
            (fw, fw / aspect)
        };
        ZoomParams {
            cx: fw / 2.0,
            cy: fh / 2.0,
            vw,
            vh,
        }
    }

    /// Integer crop rect, clamped into the frame.
    pub fn to_rect(&self, frame_w: usize, frame_h: usize) -> Rect {
        let w = (round_half_up(self.vw) as i32).max(1);
        let h = (round_half_up(self.vh) as i32).max(1);
        clamp_rect(Rect::centered_at(self.cx, self.cy, w, h), frame_w, frame_h)
    }

    /// Shifts the center so the window lies inside the frame; the size is
    /// kept unless it exceeds the frame.
    pub fn clamped(&self, frame_w: usize, frame_h: usize) -> Self {
        let (fw, fh) = (frame_w as f64, frame_h as f64);
        let vw = self.vw.min(fw);
        let vh = self.vh.min(fh);
        ZoomParams {
            cx: self.cx.clamp(vw / 2.0, fw - vw / 2.0),
            cy: self.cy.clamp(vh / 2.0, fh - vh / 2.0),
            vw,
            vh,
        }
    }

    fn fields(&self) -> [f64; 4] {
        [self.cx, self.cy, self.vw, self.vh]
    }

    fn from_fields(f: [f64; 4]) -> Self {
        ZoomParams {
            cx: f[0],
            cy: f[1],
            vw: f[2],
            vh: f[3],
        }
    }
}

/// Cubic Hermite interpolation with zero end tangents:
/// `a0 (2f^3 - 3f^2 + 1) + a1 (-2f^3 + 3f^2)`.
pub fn hermite(a0: f64, a1: f64, f: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&f) {
        return Err(Error::InvalidArgument(format!("interpolation position {f} outside [0, 1]")));
    }
    let f2 = f * f;
    let f3 = f2 * f;
    Ok(a0 * (2.0 * f3 - 3.0 * f2 + 1.0) + a1 * (-2.0 * f3 + 3.0 * f2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Full,
    ZoomIn,
    Hold,
    ZoomOut,
}

pub const DEFAULT_A_PCT: f64 = 20.0;
pub const DEFAULT_B_PCT: f64 = 30.0;

/// Per-cycle phase layout: full view for A%, zoom in over B%, hold for A%,
/// zoom out over the remainder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbSchedule {
    cycle_len: usize,
    a_pct: f64,
    b_pct: f64,
    lengths: [usize; 4],
}

impl AbSchedule {
    pub fn new(cycle_len: usize, a_pct: f64, b_pct: f64) -> Result<Self> {
        if !(a_pct > 0.0 && b_pct > 0.0 && 2.0 * (a_pct + b_pct) <= 100.0 + 1e-9) {
            return Err(Error::InvalidArgument(format!(
                "AB schedule needs A, B > 0 and 2A + 2B <= 100 (got A={a_pct}, B={b_pct})"
            )));
        }
        let a = (a_pct * cycle_len as f64 / 100.0).floor() as usize;
        let b = (b_pct * cycle_len as f64 / 100.0).floor() as usize;
        Ok(AbSchedule {
            cycle_len,
            a_pct,
            b_pct,
            lengths: [a, b, a, cycle_len - 2 * a - b],
        })
    }

    pub fn with_defaults(cycle_len: usize) -> Self {
        AbSchedule::new(cycle_len, DEFAULT_A_PCT, DEFAULT_B_PCT).expect("defaults are valid")
    }

    pub fn cycle_len(&self) -> usize {
        self.cycle_len
    }

    pub fn a_pct(&self) -> f64 {
        self.a_pct
    }

    pub fn b_pct(&self) -> f64 {
        self.b_pct
    }

    /// Frame counts of full, zoom-in, hold and zoom-out.
    pub fn phase_lengths(&self) -> [usize; 4] {
        self.lengths
    }

    /// First frame of the given phase.
    pub fn phase_start(&self, phase: Phase) -> usize {
        let i = phase_index(phase);
        self.lengths[..i].iter().sum()
    }

    /// Phase of a frame and its interpolation position within that phase
    /// (0 on the phase's first frame, 1 on its last).
    pub fn locate(&self, frame_in_cycle: usize) -> (Phase, f64) {
        assert!(frame_in_cycle < self.cycle_len, "frame {frame_in_cycle} beyond cycle");
        let mut start = 0;
        for (i, &len) in self.lengths.iter().enumerate() {
            if frame_in_cycle < start + len {
                let f = if len > 1 {
                    (frame_in_cycle - start) as f64 / (len - 1) as f64
                } else {
                    1.0
                };
                return (PHASES[i], f);
            }
            start += len;
        }
        unreachable!("phase lengths sum to the cycle length")
    }
}

const PHASES: [Phase; 4] = [Phase::Full, Phase::ZoomIn, Phase::Hold, Phase::ZoomOut];

fn phase_index(p: Phase) -> usize {
    PHASES.iter().position(|&q| q == p).expect("known phase")
}

/// View for one frame of the cycle; every field is eased independently.
pub fn schedule_params(
    sched: &AbSchedule,
    frame_in_cycle: usize,
    full_view: &ZoomParams,
    target: &ZoomParams,
) -> ZoomParams {
    let (phase, f) = sched.locate(frame_in_cycle);
    let ease = |from: &ZoomParams, to: &ZoomParams| {
        let (a, b) = (from.fields(), to.fields());
        ZoomParams::from_fields(std::array::from_fn(|i| {
            hermite(a[i], b[i], f).expect("phase position lies in [0, 1]")
        }))
    };
    match phase {
        Phase::Full => *full_view,
        Phase::ZoomIn => ease(full_view, target),
        Phase::Hold => *target,
        Phase::ZoomOut => ease(target, full_view),
    }
}

pub const DEFAULT_SMOOTHER_WINDOW: usize = 5;

/// Per-field running median over the last `window` parameter sets.
#[derive(Debug, Clone)]
pub struct ParamSmoother {
    window: usize,
    history: VecDeque<ZoomParams>,
}

impl ParamSmoother {
    pub fn new(window: usize) -> Self {
        assert!(window >= 1, "smoother window must be at least 1");
        ParamSmoother {
            window,
            history: VecDeque::with_capacity(window),
        }
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn reset(&mut self) {
        self.history.clear();
    }

    /// Pushes `p` and returns the per-field median of the retained values
    /// (mean of the middle pair for even counts).
    pub fn push(&mut self, p: ZoomParams) -> ZoomParams {
        self.history.push_back(p);
        if self.history.len() > self.window {
            self.history.pop_front();
        }
        ZoomParams::from_fields(std::array::from_fn(|i| {
            let mut v: Vec<f64> = self.history.iter().map(|p| p.fields()[i]).collect();
            v.sort_by(f64::total_cmp);
            let n = v.len();
            if n % 2 == 1 {
                v[n / 2]
            } else {
                (v[n / 2 - 1] + v[n / 2]) / 2.0
            }
        }))
    }
}

/// Moves the target's center onto the tracked rect (size unchanged) and
/// passes the result through the median smoother.
pub fn refine_target(
    current_target: &ZoomParams,
    tracked: &Rect,
    smoother: &mut ParamSmoother,
) -> ZoomParams {
    let (cx, cy) = tracked.center();
    smoother.push(ZoomParams {
        cx,
        cy,
        vw: current_target.vw,
        vh: current_target.vh,
    })
}

/// Crops the (clamped) view window and scales it to `out_w x out_h`.
pub fn render(frame: &Frame, params: &ZoomParams, out_w: usize, out_h: usize) -> Frame {
    let rect = params.to_rect(frame.width(), frame.height());
    frame.crop_resize(&rect, out_w, out_h)
}
