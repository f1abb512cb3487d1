//! Seeded synthetic scenes: a static textured background with solid
//! rectangles moving over it. Used by tests, benchmarks and `szoom synth`.

use std::ops::Range;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::frame::Frame;
use crate::geometry::{round_half_up, Rect};
use crate::io::{FrameSource, RawStreamWriter};
use crate::map::ScalarMap;
use crate::observation::{DetectionRecord, ObservationKind};

/// Top-left corner of an object over time.
#[derive(Debug, Clone, PartialEq)]
pub enum ObjectPath {
    Static { x: f64, y: f64 },
    Linear { x0: f64, y0: f64, vx: f64, vy: f64 },
    /// `(frame, x, y)` sorted by frame; linear in between, held outside.
    Keyframes(Vec<(u64, f64, f64)>),
}

impl ObjectPath {
    pub fn at(&self, t: u64) -> (f64, f64) {
        match self {
            ObjectPath::Static { x, y } => (*x, *y),
            ObjectPath::Linear { x0, y0, vx, vy } => (x0 + vx * t as f64, y0 + vy * t as f64),
            ObjectPath::Keyframes(keys) => {
                let Some(&(f0, x0, y0)) = keys.first() else {
                    return (0.0, 0.0);
                };
                if t <= f0 {
                    return (x0, y0);
                }
                for pair in keys.windows(2) {
                    let ((fa, xa, ya), (fb, xb, yb)) = (pair[0], pair[1]);
                    if t <= fb {
                        let s = (t - fa) as f64 / (fb - fa).max(1) as f64;
                        return (xa + (xb - xa) * s, ya + (yb - ya) * s);
                    }
                }
                let &(_, x, y) = keys.last().expect("non-empty");
                (x, y)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SceneObject {
    pub w: i32,
    pub h: i32,
    pub color: [u8; 3],
    pub path: ObjectPath,
    /// Frames on which the object is drawn.
    pub visible: Range<u64>,
}

impl SceneObject {
    pub fn new(w: i32, h: i32, color: [u8; 3], path: ObjectPath) -> Self {
        SceneObject {
            w,
            h,
            color,
            path,
            visible: 0..u64::MAX,
        }
    }

    pub fn visible(mut self, frames: Range<u64>) -> Self {
        self.visible = frames;
        self
    }

    /// Unclipped rectangle at frame `t`, if visible.
    pub fn rect_at(&self, t: u64) -> Option<Rect> {
        if !self.visible.contains(&t) {
            return None;
        }
        let (x, y) = self.path.at(t);
        Some(Rect::new(round_half_up(x) as i32, round_half_up(y) as i32, self.w, self.h))
    }
}

#[derive(Debug, Clone)]
pub struct Scene {
    width: usize,
    height: usize,
    seed: u64,
    background: Frame,
    /// Per-pixel, per-frame uniform noise amplitude.
    pub noise: u8,
    pub objects: Vec<SceneObject>,
}

impl Scene {
    /// Background of 8x8 blocks with muted random colors.
    pub fn new(width: usize, height: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (bw, bh) = (width.div_ceil(8), height.div_ceil(8));
        let blocks: Vec<[u8; 3]> = (0..bw * bh)
            .map(|_| {
                let base: u8 = rng.random_range(70..130);
                [
                    base.saturating_add(rng.random_range(0..12)),
                    base.saturating_add(rng.random_range(0..12)),
                    base.saturating_add(rng.random_range(0..12)),
                ]
            })
            .collect();
        let mut background = Frame::new(width, height, 0);
        for y in 0..height {
            for x in 0..width {
                background.set_pixel(x, y, blocks[(y / 8) * bw + x / 8]);
            }
        }
        Scene {
            width,
            height,
            seed,
            background,
            noise: 0,
            objects: Vec::new(),
        }
    }

    pub fn with_object(mut self, object: SceneObject) -> Self {
        self.objects.push(object);
        self
    }

    pub fn with_noise(mut self, amplitude: u8) -> Self {
        self.noise = amplitude;
        self
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Visible part of object `i` at frame `t`.
    pub fn object_rect(&self, i: usize, t: u64) -> Option<Rect> {
        self.objects[i]
            .rect_at(t)?
            .intersection(&Rect::new(0, 0, self.width as i32, self.height as i32))
    }

    pub fn frame(&self, t: u64) -> Frame {
        let mut f = self.background.clone();
        f.index = t;
        for (i, o) in self.objects.iter().enumerate() {
            if let Some(r) = self.object_rect(i, t) {
                f.fill_rect(&r, o.color);
            }
        }
        if self.noise > 0 {
            let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ t.wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let a = self.noise as i16;
            let mut data = f.into_raw();
            for v in &mut data {
                *v = (*v as i16 + rng.random_range(-a..=a)).clamp(0, 255) as u8;
            }
            f = Frame::from_raw(self.width, self.height, t, data).expect("same size");
        }
        f
    }

    pub fn frames(&self, range: Range<u64>) -> impl Iterator<Item = Frame> + '_ {
        range.map(move |t| self.frame(t))
    }

    /// Union of all visible objects at frame `t`.
    pub fn truth_mask(&self, t: u64) -> ScalarMap {
        let mut m = ScalarMap::zeros(self.width, self.height);
        for i in 0..self.objects.len() {
            if let Some(r) = self.object_rect(i, t) {
                m.fill_rect(&r, 1.0);
            }
        }
        m
    }

    /// Perfect detections of the given objects, one record per visible frame.
    pub fn detections(&self, kind: &ObservationKind, objects: &[usize], frames: Range<u64>) -> Vec<DetectionRecord> {
        let mut out = Vec::new();
        for t in frames {
            for &i in objects {
                if let Some(rect) = self.object_rect(i, t) {
                    out.push(DetectionRecord {
                        frame: t,
                        kind: kind.clone(),
                        rect,
                        confidence: 1.0,
                    });
                }
            }
        }
        out
    }

    /// The first `count` frames as a [`FrameSource`].
    pub fn source(&self, count: u64) -> SceneSource {
        SceneSource {
            scene: self.clone(),
            next: 0,
            count,
        }
    }

    pub fn write_raw(&self, path: &Path, count: u64) -> Result<()> {
        let mut w = RawStreamWriter::create(path, self.width, self.height, count as usize)?;
        for f in self.frames(0..count) {
            w.write_frame(&f)?;
        }
        w.finish()?;
        Ok(())
    }
}

pub struct SceneSource {
    scene: Scene,
    next: u64,
    count: u64,
}

impl Iterator for SceneSource {
    type Item = Result<Frame>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.next >= self.count {
            return None;
        }
        self.next += 1;
        Some(Ok(self.scene.frame(self.next - 1)))
    }
}

impl FrameSource for SceneSource {
    fn dims(&self) -> (usize, usize) {
        self.scene.dims()
    }

    fn frame_count(&self) -> usize {
        self.count as usize
    }
}
