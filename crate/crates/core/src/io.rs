//! Frame sources, output images and mask files.
//!
//! Two input forms are accepted: a directory of numbered image files, and a
//! raw planar stream:
//!
//! ```text
//! SZRAW1\n
//! <width> <height> <count>\n
//! count x (R plane, G plane, B plane), width*height bytes each
//! ```

use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::map::ScalarMap;
use crate::observation::{Prf, PrfAverage, PixelCounts};

pub const RAW_MAGIC: &str = "SZRAW1";

const IMAGE_EXTENSIONS: [&str; 5] = ["png", "ppm", "pgm", "pnm", "pbm"];

/// A finite, ordered sequence of equally sized frames.
pub trait FrameSource: Iterator<Item = Result<Frame>> + Send {
    fn dims(&self) -> (usize, usize);
    /// Total number of frames in the source.
    fn frame_count(&self) -> usize;
}

fn numeric_key(path: &Path) -> (u64, String) {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let digits: String = stem
        .chars()
        .rev()
        .skip_while(|c| !c.is_ascii_digit())
        .take_while(|c| c.is_ascii_digit())
        .collect::<Vec<_>>()
        .into_iter()
        .rev()
        .collect();
    (digits.parse().unwrap_or(u64::MAX), stem)
}

/// Image files in `dir`, ordered by the last run of digits in their names.
pub fn list_images(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| Error::input(dir, e.to_string()))? {
        let path = entry?.path();
        let ext = path
            .extension()
            .map(|e| e.to_string_lossy().to_ascii_lowercase())
            .unwrap_or_default();
        if path.is_file() && IMAGE_EXTENSIONS.contains(&ext.as_str()) {
            files.push(path);
        }
    }
    files.sort_by_key(|p| numeric_key(p));
    Ok(files)
}

pub fn load_frame(path: &Path, index: u64) -> Result<Frame> {
    let img = image::open(path).map_err(|e| Error::input(path, e.to_string()))?;
    Ok(Frame::from_image(img.to_rgb8(), index))
}

pub fn save_png(frame: &Frame, path: &Path) -> Result<()> {
    image::RgbImage::from(frame)
        .save_with_format(path, image::ImageFormat::Png)
        .map_err(|e| Error::input(path, e.to_string()))
}

pub struct ImageDirSource {
    files: Vec<PathBuf>,
    next: usize,
    dims: (usize, usize),
}

impl ImageDirSource {
    pub fn open(dir: &Path) -> Result<Self> {
        let files = list_images(dir)?;
        let first = files
            .first()
            .ok_or_else(|| Error::input(dir, "no image files"))?;
        let dims = image::image_dimensions(first).map_err(|e| Error::input(first, e.to_string()))?;
        Ok(ImageDirSource {
            files,
            next: 0,
            dims: (dims.0 as usize, dims.1 as usize),
        })
    }
}

impl Iterator for ImageDirSource {
    type Item = Result<Frame>;

    fn next(&mut self) -> Option<Self::Item> {
        let path = self.files.get(self.next)?;
        let index = self.next as u64;
        self.next += 1;
        Some(load_frame(path, index).and_then(|f| {
            if f.dims() != self.dims {
                Err(Error::input(path, format!("frame is {}x{}, expected {}x{}", f.width(), f.height(), self.dims.0, self.dims.1)))
            } else {
                Ok(f)
            }
        }))
    }
}

impl FrameSource for ImageDirSource {
    fn dims(&self) -> (usize, usize) {
        self.dims
    }

    fn frame_count(&self) -> usize {
        self.files.len()
    }
}

pub struct RawStreamReader<R> {
    reader: R,
    path: PathBuf,
    dims: (usize, usize),
    count: usize,
    next: usize,
}

impl RawStreamReader<BufReader<File>> {
    pub fn open(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::input(path, e.to_string()))?;
        Self::new(BufReader::new(file), path)
    }
}

impl<R: BufRead> RawStreamReader<R> {
    pub fn new(mut reader: R, path: impl Into<PathBuf>) -> Result<Self> {
        let path = path.into();
        let mut magic = String::new();
        reader.read_line(&mut magic)?;
        if magic.trim_end() != RAW_MAGIC {
            return Err(Error::input(&path, "not a raw frame stream (bad magic)"));
        }
        let mut header = String::new();
        reader.read_line(&mut header)?;
        let fields: Vec<usize> = header
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::input(&path, format!("bad header `{}`", header.trim_end())))?;
        let [w, h, count] = fields[..] else {
            return Err(Error::input(&path, format!("bad header `{}`", header.trim_end())));
        };
        if w == 0 || h == 0 {
            return Err(Error::input(&path, "empty frame size"));
        }
        Ok(RawStreamReader {
            reader,
            path,
            dims: (w, h),
            count,
            next: 0,
        })
    }

    fn read_frame(&mut self) -> Result<Frame> {
        let (w, h) = self.dims;
        let plane = w * h;
        let mut planar = vec![0u8; plane * 3];
        self.reader
            .read_exact(&mut planar)
            .map_err(|e| Error::input(&self.path, format!("frame {}: {e}", self.next)))?;
        let mut data = vec![0u8; plane * 3];
        for i in 0..plane {
            data[i * 3] = planar[i];
            data[i * 3 + 1] = planar[plane + i];
            data[i * 3 + 2] = planar[2 * plane + i];
        }
        Frame::from_raw(w, h, self.next as u64, data)
    }
}

impl<R: BufRead> Iterator for RawStreamReader<R> {
    type Item = Result<Frame>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.next >= self.count {
            return None;
        }
        let frame = self.read_frame();
        self.next += 1;
        if frame.is_err() {
            self.next = self.count;
        }
        Some(frame)
    }
}

impl<R: BufRead + Send> FrameSource for RawStreamReader<R> {
    fn dims(&self) -> (usize, usize) {
        self.dims
    }

    fn frame_count(&self) -> usize {
        self.count
    }
}

pub struct RawStreamWriter<W: Write> {
    out: W,
    dims: (usize, usize),
    remaining: usize,
}

impl RawStreamWriter<BufWriter<File>> {
    pub fn create(path: &Path, width: usize, height: usize, count: usize) -> Result<Self> {
        let file = File::create(path).map_err(|e| Error::input(path, e.to_string()))?;
        Self::new(BufWriter::new(file), width, height, count)
    }
}

impl<W: Write> RawStreamWriter<W> {
    pub fn new(mut out: W, width: usize, height: usize, count: usize) -> Result<Self> {
        writeln!(out, "{RAW_MAGIC}")?;
        writeln!(out, "{width} {height} {count}")?;
        Ok(RawStreamWriter {
            out,
            dims: (width, height),
            remaining: count,
        })
    }

    pub fn write_frame(&mut self, frame: &Frame) -> Result<()> {
        if frame.dims() != self.dims {
            return Err(Error::dims(self.dims, frame.dims()));
        }
        if self.remaining == 0 {
            return Err(Error::InvalidArgument("more frames than declared in the header".into()));
        }
        for c in 0..3 {
            let plane: Vec<u8> = frame.data().iter().skip(c).step_by(3).copied().collect();
            self.out.write_all(&plane)?;
        }
        self.remaining -= 1;
        Ok(())
    }

    pub fn finish(mut self) -> Result<W> {
        if self.remaining != 0 {
            return Err(Error::InvalidArgument(format!("{} declared frames not written", self.remaining)));
        }
        self.out.flush()?;
        Ok(self.out)
    }
}

/// Opens a directory as an image sequence and anything else as a raw stream.
pub fn open_source(path: &Path) -> Result<Box<dyn FrameSource>> {
    if path.is_dir() {
        Ok(Box::new(ImageDirSource::open(path)?))
    } else {
        Ok(Box::new(RawStreamReader::open(path)?))
    }
}

/// Single-channel mask image: nonzero pixels are 1.
pub fn load_mask(path: &Path) -> Result<ScalarMap> {
    let img = image::open(path).map_err(|e| Error::input(path, e.to_string()))?.to_luma8();
    let (w, h) = img.dimensions();
    let bits: Vec<bool> = img.into_raw().into_iter().map(|v| v != 0).collect();
    Ok(ScalarMap::from_mask(w as usize, h as usize, &bits))
}

/// Writes a binary map as an 8-bit PNG (255 where the value is at least 0.5).
pub fn save_mask(map: &ScalarMap, path: &Path) -> Result<()> {
    let data = map.to_mask(0.5).into_iter().map(|b| if b { 255 } else { 0 }).collect();
    image::GrayImage::from_raw(map.width() as u32, map.height() as u32, data)
        .expect("mask buffer matches dimensions")
        .save_with_format(path, image::ImageFormat::Png)
        .map_err(|e| Error::input(path, e.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct PrfReport {
    /// Mean of the per-frame scores.
    pub mean: Prf,
    /// Scores over all pixels of all frames pooled together.
    pub pooled: Prf,
    pub frames: usize,
}

/// Pixel-level precision / recall / F1 between two directories of masks,
/// paired by file name.
pub fn evaluate_mask_dirs(pred: &Path, truth: &Path) -> Result<PrfReport> {
    let truth_files = list_images(truth)?;
    if truth_files.is_empty() {
        return Err(Error::input(truth, "no mask files"));
    }
    let mut average = PrfAverage::default();
    let mut pooled = PixelCounts::default();
    for t in &truth_files {
        let name = t.file_name().expect("listed files have names");
        let p = pred.join(name);
        if !p.is_file() {
            return Err(Error::input(&p, "prediction missing for truth mask"));
        }
        let counts = PixelCounts::count(&load_mask(&p)?, &load_mask(t)?)
            .map_err(|e| Error::input(&p, e.to_string()))?;
        average.add(counts.prf());
        pooled.tp += counts.tp;
        pooled.fp += counts.fp;
        pooled.fn_ += counts.fn_;
    }
    Ok(PrfReport {
        mean: average.mean().expect("at least one frame"),
        pooled: pooled.prf(),
        frames: average.frames(),
    })
}
