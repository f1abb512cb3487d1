//! Binary-mask helpers: 3x3 erosion/dilation and bounding boxes of
//! 8-connected components.

use crate::geometry::Rect;

/// Row-major binary mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mask {
    pub width: usize,
    pub height: usize,
    pub bits: Vec<bool>,
}

impl Mask {
    pub fn new(width: usize, height: usize) -> Self {
        Mask {
            width,
            height,
            bits: vec![false; width * height],
        }
    }

    pub fn from_bits(width: usize, height: usize, bits: Vec<bool>) -> Self {
        assert_eq!(bits.len(), width * height);
        Mask { width, height, bits }
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.bits[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: bool) {
        self.bits[y * self.width + x] = v;
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// 3x3 erosion. Out-of-bounds neighbours are ignored, so the frame edge
    /// does not erode.
    pub fn erode3(&self) -> Mask {
        self.separable(|a, b| a && b)
    }

    /// 3x3 dilation.
    pub fn dilate3(&self) -> Mask {
        self.separable(|a, b| a || b)
    }

    fn separable(&self, op: impl Fn(bool, bool) -> bool) -> Mask {
        let (w, h) = (self.width, self.height);
        let mut horiz = vec![false; w * h];
        for y in 0..h {
            let row = &self.bits[y * w..(y + 1) * w];
            let out = &mut horiz[y * w..(y + 1) * w];
            for x in 0..w {
                let mut v = row[x];
                if x > 0 {
                    v = op(v, row[x - 1]);
                }
                if x + 1 < w {
                    v = op(v, row[x + 1]);
                }
                out[x] = v;
            }
        }
        let mut bits = vec![false; w * h];
        for y in 0..h {
            for x in 0..w {
                let mut v = horiz[y * w + x];
                if y > 0 {
                    v = op(v, horiz[(y - 1) * w + x]);
                }
                if y + 1 < h {
                    v = op(v, horiz[(y + 1) * w + x]);
                }
                bits[y * w + x] = v;
            }
        }
        Mask { width: w, height: h, bits }
    }

    /// Bounding boxes of all 8-connected foreground components, in raster
    /// order of each component's first pixel.
    pub fn component_boxes(&self) -> Vec<Rect> {
        let (w, h) = (self.width, self.height);
        let mut seen = vec![false; w * h];
        let mut boxes = Vec::new();
        let mut stack = Vec::new();
        for start in 0..w * h {
            if !self.bits[start] || seen[start] {
                continue;
            }
            seen[start] = true;
            stack.push(start);
            let (mut x0, mut y0, mut x1, mut y1) = (w, h, 0, 0);
            while let Some(i) = stack.pop() {
                let (x, y) = (i % w, i / w);
                x0 = x0.min(x);
                y0 = y0.min(y);
                x1 = x1.max(x);
                y1 = y1.max(y);
                for ny in y.saturating_sub(1)..=(y + 1).min(h - 1) {
                    for nx in x.saturating_sub(1)..=(x + 1).min(w - 1) {
                        let j = ny * w + nx;
                        if self.bits[j] && !seen[j] {
                            seen[j] = true;
                            stack.push(j);
                        }
                    }
                }
            }
            boxes.push(Rect::from_corners(
                x0 as i32,
                y0 as i32,
                x1 as i32 + 1,
                y1 as i32 + 1,
            ));
        }
        boxes
    }
}
