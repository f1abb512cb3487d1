//! 8-bit RGB frames and the bilinear resampler shared by the motion
//! detector (downscaling) and the renderer (crop + scale).

use crate::error::{Error, Result};
use crate::geometry::{clamp_rect, Rect};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    width: usize,
    height: usize,
    /// Position in the input stream, starting at 0.
    pub index: u64,
    data: Vec<u8>,
}

impl Frame {
    pub fn new(width: usize, height: usize, index: u64) -> Self {
        Frame {
            width,
            height,
            index,
            data: vec![0; width * height * 3],
        }
    }

    pub fn filled(width: usize, height: usize, index: u64, rgb: [u8; 3]) -> Self {
        let mut f = Frame::new(width, height, index);
        f.data.chunks_exact_mut(3).for_each(|px| px.copy_from_slice(&rgb));
        f
    }

    /// `data` is row-major interleaved RGB.
    pub fn from_raw(width: usize, height: usize, index: u64, data: Vec<u8>) -> Result<Self> {
        if data.len() != width * height * 3 {
            return Err(Error::InvalidArgument(format!(
                "{} bytes for a {width}x{height} RGB frame",
                data.len()
            )));
        }
        Ok(Frame {
            width,
            height,
            index,
            data,
        })
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

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn into_raw(self) -> Vec<u8> {
        self.data
    }

    #[inline]
    pub fn pixel(&self, x: usize, y: usize) -> [u8; 3] {
        let i = (y * self.width + x) * 3;
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    #[inline]
    pub fn set_pixel(&mut self, x: usize, y: usize, rgb: [u8; 3]) {
        let i = (y * self.width + x) * 3;
        self.data[i..i + 3].copy_from_slice(&rgb);
    }

    pub fn fill_rect(&mut self, rect: &Rect, rgb: [u8; 3]) {
        let x0 = rect.x.max(0) as usize;
        let y0 = rect.y.max(0) as usize;
        let x1 = (rect.right().max(0) as usize).min(self.width);
        let y1 = (rect.bottom().max(0) as usize).min(self.height);
        for y in y0..y1 {
            for x in x0..x1 {
                self.set_pixel(x, y, rgb);
            }
        }
    }

    pub fn full_rect(&self) -> Rect {
        Rect::new(0, 0, self.width as i32, self.height as i32)
    }

    /// Whole-frame bilinear resize.
    pub fn resize(&self, out_w: usize, out_h: usize) -> Frame {
        self.crop_resize(&self.full_rect(), out_w, out_h)
    }

    /// Crops `rect` (clamped into the frame) and resamples it bilinearly to
    /// `out_w x out_h`. Sample positions use pixel-center alignment, so equal
    /// crop and output sizes copy pixels exactly.
    pub fn crop_resize(&self, rect: &Rect, out_w: usize, out_h: usize) -> Frame {
        let crop = clamp_rect(*rect, self.width, self.height);
        let xs = axis_taps(crop.x as usize, crop.w as usize, out_w);
        let ys = axis_taps(crop.y as usize, crop.h as usize, out_h);
        let (cx0, cw) = (crop.x as usize * 3, crop.w as usize * 3);
        let mut out = Frame::new(out_w, out_h, self.index);
        let stride = self.width * 3;
        // Vertical pass into a fixed-point row, then horizontal taps.
        let mut blended = vec![0u16; cw];
        for (oy, tap) in ys.iter().enumerate() {
            let row0 = &self.data[tap.i0 * stride + cx0..tap.i0 * stride + cx0 + cw];
            let row1 = &self.data[tap.i1 * stride + cx0..tap.i1 * stride + cx0 + cw];
            let (w0, w1) = ((ONE - tap.frac) as u16, tap.frac as u16);
            for ((b, &a), &d) in blended.iter_mut().zip(row0).zip(row1) {
                *b = a as u16 * w0 + d as u16 * w1;
            }
            let dst = &mut out.data[oy * out_w * 3..(oy + 1) * out_w * 3];
            for (px, tap) in dst.chunks_exact_mut(3).zip(&xs) {
                let j0 = (tap.i0 - crop.x as usize) * 3;
                let j1 = (tap.i1 - crop.x as usize) * 3;
                let (w0, w1) = (ONE - tap.frac, tap.frac);
                let (a, b) = (&blended[j0..j0 + 3], &blended[j1..j1 + 3]);
                for c in 0..3 {
                    px[c] = ((a[c] as u32 * w0 + b[c] as u32 * w1 + HALF) >> (2 * FRAC_BITS)) as u8;
                }
            }
        }
        out
    }
}

const FRAC_BITS: u32 = 8;
const ONE: u32 = 1 << FRAC_BITS;
const HALF: u32 = 1 << (2 * FRAC_BITS - 1);

struct Tap {
    i0: usize,
    i1: usize,
    /// Weight of `i1` in units of `1 / ONE`.
    frac: u32,
}

/// Source index pair and fractional weight for each output sample along one axis.
fn axis_taps(start: usize, len: usize, out_len: usize) -> Vec<Tap> {
    let scale = len as f64 / out_len as f64;
    let last = (start + len - 1) as f64;
    (0..out_len)
        .map(|o| {
            let src = (start as f64 + (o as f64 + 0.5) * scale - 0.5).clamp(start as f64, last);
            let i0 = src.floor() as usize;
            Tap {
                i0,
                i1: (i0 + 1).min(start + len - 1),
                frac: ((src - i0 as f64) * ONE as f64).round() as u32,
            }
        })
        .collect()
}

impl From<&Frame> for image::RgbImage {
    fn from(f: &Frame) -> Self {
        image::RgbImage::from_raw(f.width as u32, f.height as u32, f.data.clone())
            .expect("frame buffer size matches its dimensions")
    }
}

impl Frame {
    pub fn from_image(img: image::RgbImage, index: u64) -> Frame {
        let (w, h) = img.dimensions();
        Frame {
            width: w as usize,
            height: h as usize,
            index,
            data: img.into_raw(),
        }
    }
}
