//! Dense per-pixel maps with values in `[0, 1]`.
//!
//! The same container carries binary observations, accumulated observations,
//! sensitivity, penalty, user and decision maps. Every constructor and mutator
//! clamps into `[0, 1]` (NaN becomes 0), so callers can rely on the range.

use crate::error::{Error, Result};
use crate::geometry::Rect;

#[derive(Debug, Clone, PartialEq)]
pub struct ScalarMap {
    width: usize,
    height: usize,
    values: Vec<f64>,
}

#[inline]
fn unit(v: f64) -> f64 {
    if v.is_nan() {
        0.0
    } else {
        v.clamp(0.0, 1.0)
    }
}

impl ScalarMap {
    pub fn zeros(width: usize, height: usize) -> Self {
        Self::filled(width, height, 0.0)
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Self {
        ScalarMap {
            width,
            height,
            values: vec![unit(value); width * height],
        }
    }

    pub fn from_values(width: usize, height: usize, mut values: Vec<f64>) -> Result<Self> {
        if values.len() != width * height {
            return Err(Error::InvalidArgument(format!(
                "{} values for a {width}x{height} map",
                values.len()
            )));
        }
        values.iter_mut().for_each(|v| *v = unit(*v));
        Ok(ScalarMap {
            width,
            height,
            values,
        })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut values = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                values.push(unit(f(x, y)));
            }
        }
        ScalarMap {
            width,
            height,
            values,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.values[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: f64) {
        self.values[y * self.width + x] = unit(v);
    }

    pub fn ensure_dims(&self, other: &ScalarMap) -> Result<()> {
        if self.dims() != other.dims() {
            return Err(Error::dims(self.dims(), other.dims()));
        }
        Ok(())
    }

    /// Sets every pixel of `rect` (clipped to the map) to `value`.
    pub fn fill_rect(&mut self, rect: &Rect, value: f64) {
        let Some((x0, y0, x1, y1)) = self.clip(rect) else {
            return;
        };
        let v = unit(value);
        for y in y0..y1 {
            self.values[y * self.width + x0..y * self.width + x1].fill(v);
        }
    }

    /// Sum of values inside `rect`, clipped to the map.
    pub fn sum_rect(&self, rect: &Rect) -> f64 {
        let Some((x0, y0, x1, y1)) = self.clip(rect) else {
            return 0.0;
        };
        (y0..y1)
            .map(|y| self.values[y * self.width + x0..y * self.width + x1].iter().sum::<f64>())
            .sum()
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// 1.0 where the value is at least `threshold`, 0.0 elsewhere.
    pub fn binarize(&self, threshold: f64) -> ScalarMap {
        ScalarMap {
            width: self.width,
            height: self.height,
            values: self
                .values
                .iter()
                .map(|&v| if v >= threshold { 1.0 } else { 0.0 })
                .collect(),
        }
    }

    pub fn to_mask(&self, threshold: f64) -> Vec<bool> {
        self.values.iter().map(|&v| v >= threshold).collect()
    }

    pub fn from_mask(width: usize, height: usize, mask: &[bool]) -> Self {
        assert_eq!(mask.len(), width * height);
        ScalarMap {
            width,
            height,
            values: mask.iter().map(|&m| if m { 1.0 } else { 0.0 }).collect(),
        }
    }

    /// Per-pixel combination of two equally sized maps.
    pub fn zip_with(&self, other: &ScalarMap, f: impl Fn(f64, f64) -> f64) -> Result<ScalarMap> {
        self.ensure_dims(other)?;
        Ok(ScalarMap {
            width: self.width,
            height: self.height,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| unit(f(a, b)))
                .collect(),
        })
    }

    pub fn map_in_place(&mut self, f: impl Fn(usize, usize, f64) -> f64) {
        let w = self.width;
        for (i, v) in self.values.iter_mut().enumerate() {
            *v = unit(f(i % w, i / w, *v));
        }
    }

    /// Nearest-neighbour resample to `width x height`.
    pub fn resize_nearest(&self, width: usize, height: usize) -> ScalarMap {
        if (width, height) == self.dims() {
            return self.clone();
        }
        let sx = self.width as f64 / width as f64;
        let sy = self.height as f64 / height as f64;
        ScalarMap::from_fn(width, height, |x, y| {
            let src_x = (((x as f64 + 0.5) * sx) as usize).min(self.width - 1);
            let src_y = (((y as f64 + 0.5) * sy) as usize).min(self.height - 1);
            self.get(src_x, src_y)
        })
    }

    /// Bilinear sample at continuous pixel coordinates (pixel centers at
    /// integer positions); coordinates outside the map are clamped to the edge.
    pub fn sample_bilinear(&self, x: f64, y: f64) -> f64 {
        let x = x.clamp(0.0, (self.width - 1) as f64);
        let y = y.clamp(0.0, (self.height - 1) as f64);
        let (x0, y0) = (x.floor() as usize, y.floor() as usize);
        let (x1, y1) = ((x0 + 1).min(self.width - 1), (y0 + 1).min(self.height - 1));
        let (fx, fy) = (x - x0 as f64, y - y0 as f64);
        let top = self.get(x0, y0) * (1.0 - fx) + self.get(x1, y0) * fx;
        let bottom = self.get(x0, y1) * (1.0 - fx) + self.get(x1, y1) * fx;
        top * (1.0 - fy) + bottom * fy
    }

    fn clip(&self, rect: &Rect) -> Option<(usize, usize, usize, usize)> {
        let x0 = rect.x.max(0) as usize;
        let y0 = rect.y.max(0) as usize;
        let x1 = (rect.right().max(0) as usize).min(self.width);
        let y1 = (rect.bottom().max(0) as usize).min(self.height);
        (x1 > x0 && y1 > y0).then_some((x0, y0, x1, y1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_are_clamped() {
        let m = ScalarMap::from_values(2, 1, vec![-0.5, 3.0]).unwrap();
        assert_eq!(m.values(), &[0.0, 1.0]);
        let mut m = ScalarMap::zeros(2, 2);
        m.set(1, 1, f64::NAN);
        assert_eq!(m.get(1, 1), 0.0);
        assert!(ScalarMap::from_values(2, 2, vec![0.0; 3]).is_err());
    }

    #[test]
    fn rect_fill_and_sum_clip() {
        let mut m = ScalarMap::zeros(4, 4);
        m.fill_rect(&Rect::new(-1, -1, 3, 3), 1.0);
        assert_eq!(m.sum(), 4.0);
        assert_eq!(m.sum_rect(&Rect::new(1, 1, 10, 10)), 1.0);
        assert_eq!(m.sum_rect(&Rect::new(10, 10, 2, 2)), 0.0);
    }

    #[test]
    fn nearest_resize_keeps_blocks() {
        let mut m = ScalarMap::zeros(4, 4);
        m.fill_rect(&Rect::new(0, 0, 2, 2), 1.0);
        let big = m.resize_nearest(8, 8);
        assert_eq!(big.sum(), 16.0);
        assert_eq!(big.get(3, 3), 1.0);
        assert_eq!(big.get(4, 4), 0.0);
    }

    #[test]
    fn bilinear_midpoint() {
        let m = ScalarMap::from_values(2, 1, vec![0.0, 1.0]).unwrap();
        assert!((m.sample_bilinear(0.25, 0.0) - 0.25).abs() < 1e-12);
        assert_eq!(m.sample_bilinear(5.0, 0.0), 1.0);
    }
}
