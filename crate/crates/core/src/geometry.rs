//! Pixel rectangles and the handful of operations every stage needs on them.

use serde::{Deserialize, Serialize};

/// Round half up (towards +inf), used for every real to pixel conversion.
#[inline]
pub fn round_half_up(v: f64) -> i64 {
    (v + 0.5).floor() as i64
}

/// Axis-aligned pixel rectangle. `x`/`y` are the top-left corner, `w`/`h` are
/// always at least 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rect {
    pub x: i32,
    pub y: i32,
    pub w: i32,
    pub h: i32,
}

impl Rect {
    /// Panics if `w` or `h` is below 1.
    pub fn new(x: i32, y: i32, w: i32, h: i32) -> Self {
        assert!(w >= 1 && h >= 1, "rect size must be positive, got {w}x{h}");
        Rect { x, y, w, h }
    }

    /// Smallest rect covering the half-open pixel span `[x0, x1) x [y0, y1)`.
    pub fn from_corners(x0: i32, y0: i32, x1: i32, y1: i32) -> Self {
        Rect::new(x0, y0, (x1 - x0).max(1), (y1 - y0).max(1))
    }

    pub fn right(&self) -> i32 {
        self.x + self.w
    }

    pub fn bottom(&self) -> i32 {
        self.y + self.h
    }

    pub fn area(&self) -> i64 {
        self.w as i64 * self.h as i64
    }

    pub fn aspect(&self) -> f64 {
        self.w as f64 / self.h as f64
    }

    /// Continuous center, `x + w/2`.
    pub fn center(&self) -> (f64, f64) {
        (
            self.x as f64 + self.w as f64 / 2.0,
            self.y as f64 + self.h as f64 / 2.0,
        )
    }

    /// Rect of the given size whose continuous center is closest to `(cx, cy)`.
    pub fn centered_at(cx: f64, cy: f64, w: i32, h: i32) -> Self {
        Rect::new(
            round_half_up(cx - w as f64 / 2.0) as i32,
            round_half_up(cy - h as f64 / 2.0) as i32,
            w,
            h,
        )
    }

    pub fn contains_point(&self, px: i32, py: i32) -> bool {
        px >= self.x && px < self.right() && py >= self.y && py < self.bottom()
    }

    pub fn contains(&self, other: &Rect) -> bool {
        other.x >= self.x
            && other.y >= self.y
            && other.right() <= self.right()
            && other.bottom() <= self.bottom()
    }

    pub fn intersection(&self, other: &Rect) -> Option<Rect> {
        let x0 = self.x.max(other.x);
        let y0 = self.y.max(other.y);
        let x1 = self.right().min(other.right());
        let y1 = self.bottom().min(other.bottom());
        (x1 > x0 && y1 > y0).then(|| Rect::from_corners(x0, y0, x1, y1))
    }

    /// Joint bounding box.
    pub fn union(&self, other: &Rect) -> Rect {
        Rect::from_corners(
            self.x.min(other.x),
            self.y.min(other.y),
            self.right().max(other.right()),
            self.bottom().max(other.bottom()),
        )
    }

    pub fn iou(&self, other: &Rect) -> f64 {
        let inter = self.intersection(other).map_or(0, |r| r.area());
        let union = self.area() + other.area() - inter;
        inter as f64 / union as f64
    }

    /// Chebyshev gap between the two boundaries; zero when they touch or overlap.
    pub fn gap(&self, other: &Rect) -> i32 {
        let gx = (other.x - self.right()).max(self.x - other.right()).max(0);
        let gy = (other.y - self.bottom()).max(self.y - other.bottom()).max(0);
        gx.max(gy)
    }

    pub fn fits_in(&self, frame_w: usize, frame_h: usize) -> bool {
        self.x >= 0
            && self.y >= 0
            && self.right() as i64 <= frame_w as i64
            && self.bottom() as i64 <= frame_h as i64
    }
}

/// Moves `r` inside a `frame_w x frame_h` frame, shrinking a dimension only
/// when it is larger than the frame itself.
pub fn clamp_rect(r: Rect, frame_w: usize, frame_h: usize) -> Rect {
    let (x, w) = clamp_span(r.x, r.w, frame_w as i32);
    let (y, h) = clamp_span(r.y, r.h, frame_h as i32);
    Rect { x, y, w, h }
}

fn clamp_span(start: i32, len: i32, limit: i32) -> (i32, i32) {
    let limit = limit.max(1);
    let len = len.clamp(1, limit);
    (start.clamp(0, limit - len), len)
}

/// Grows `r` symmetrically about its center until its aspect ratio matches
/// `target_aspect`, then clamps it into the frame.
///
/// Width grows when the rect is too narrow, height when it is too wide. If the
/// grown rect cannot fit in the frame it is replaced by the largest rect of the
/// target aspect that does, centered on `r`.
pub fn adjust_aspect(r: Rect, target_aspect: f64, frame_w: usize, frame_h: usize) -> Rect {
    assert!(target_aspect > 0.0, "target aspect must be positive");
    let phi = r.aspect();
    let (mut w, mut h) = if phi < target_aspect {
        ((round_half_up(r.h as f64 * target_aspect) as i32).max(r.w), r.h)
    } else if phi > target_aspect {
        (r.w, (round_half_up(r.w as f64 / target_aspect) as i32).max(r.h))
    } else {
        (r.w, r.h)
    };

    let (fw, fh) = (frame_w.max(1) as i32, frame_h.max(1) as i32);
    if w > fw || h > fh {
        if fw as f64 / target_aspect <= fh as f64 {
            w = fw;
            h = (round_half_up(fw as f64 / target_aspect) as i32).clamp(1, fh);
        } else {
            h = fh;
            w = (round_half_up(fh as f64 * target_aspect) as i32).clamp(1, fw);
        }
    }

    let x = r.x - (w - r.w).div_euclid(2);
    let y = r.y - (h - r.h).div_euclid(2);
    clamp_rect(Rect { x, y, w, h }, frame_w, frame_h)
}

/// Multiplies every field by `factor`, rounding half up; sizes stay at least 1.
pub fn scale_rect(r: Rect, factor: f64) -> Rect {
    assert!(factor > 0.0, "scale factor must be positive");
    let s = |v: i32| round_half_up(v as f64 * factor) as i32;
    Rect {
        x: s(r.x),
        y: s(r.y),
        w: s(r.w).max(1),
        h: s(r.h).max(1),
    }
}
