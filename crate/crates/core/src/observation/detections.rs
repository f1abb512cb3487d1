//! Detection records, the JSON Lines stream they arrive in, and their
//! rasterization into binary observation maps.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{scale_rect, Rect};
use crate::map::ScalarMap;

/// Label of a semantic observation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "String", into = "String")]
pub enum ObservationKind {
    Motion,
    Human,
    Face,
    Custom(String),
}

impl ObservationKind {
    pub fn as_str(&self) -> &str {
        match self {
            ObservationKind::Motion => "motion",
            ObservationKind::Human => "human",
            ObservationKind::Face => "face",
            ObservationKind::Custom(s) => s,
        }
    }
}

impl From<&str> for ObservationKind {
    fn from(s: &str) -> Self {
        match s {
            "motion" => ObservationKind::Motion,
            "human" => ObservationKind::Human,
            "face" => ObservationKind::Face,
            other => ObservationKind::Custom(other.to_string()),
        }
    }
}

impl From<String> for ObservationKind {
    fn from(s: String) -> Self {
        ObservationKind::from(s.as_str())
    }
}

impl From<ObservationKind> for String {
    fn from(k: ObservationKind) -> Self {
        k.as_str().to_string()
    }
}

impl fmt::Display for ObservationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One detector hit in full-resolution frame coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectionRecord {
    pub frame: u64,
    pub kind: ObservationKind,
    pub rect: Rect,
    pub confidence: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireRecord {
    frame: u64,
    kind: String,
    x: i32,
    y: i32,
    w: i32,
    h: i32,
    confidence: f64,
}

impl From<&DetectionRecord> for WireRecord {
    fn from(r: &DetectionRecord) -> Self {
        WireRecord {
            frame: r.frame,
            kind: r.kind.to_string(),
            x: r.rect.x,
            y: r.rect.y,
            w: r.rect.w,
            h: r.rect.h,
            confidence: r.confidence,
        }
    }
}

/// Default confidence at or above which a record counts as a detection.
pub const DEFAULT_MIN_CONFIDENCE: f64 = 0.5;

/// Parsed detection stream, grouped by frame.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DetectionStream {
    by_frame: BTreeMap<u64, Vec<DetectionRecord>>,
}

impl DetectionStream {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records must already be sorted by frame.
    pub fn from_records(records: impl IntoIterator<Item = DetectionRecord>) -> Result<Self> {
        let mut stream = DetectionStream::new();
        let mut last = None;
        for (i, r) in records.into_iter().enumerate() {
            if last.is_some_and(|l| r.frame < l) {
                return Err(Error::DetectionStream {
                    line: i + 1,
                    message: format!("frame {} after frame {}", r.frame, last.unwrap()),
                });
            }
            last = Some(r.frame);
            stream.by_frame.entry(r.frame).or_default().push(r);
        }
        Ok(stream)
    }

    /// Parses JSON Lines; blank lines are skipped. Errors carry the 1-based
    /// line number of the first offending record.
    pub fn parse(reader: impl BufRead) -> Result<Self> {
        let mut stream = DetectionStream::new();
        let mut last_frame: Option<u64> = None;
        for (i, line) in reader.lines().enumerate() {
            let line_no = i + 1;
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let bad = |message: String| Error::DetectionStream {
                line: line_no,
                message,
            };
            let wire: WireRecord =
                serde_json::from_str(&line).map_err(|e| bad(e.to_string()))?;
            if wire.w < 1 || wire.h < 1 {
                return Err(bad(format!("non-positive size {}x{}", wire.w, wire.h)));
            }
            if !(0.0..=1.0).contains(&wire.confidence) {
                return Err(bad(format!("confidence {} outside [0, 1]", wire.confidence)));
            }
            if let Some(prev) = last_frame {
                if wire.frame < prev {
                    return Err(bad(format!(
                        "records out of order: frame {} after frame {prev}",
                        wire.frame
                    )));
                }
            }
            last_frame = Some(wire.frame);
            stream.by_frame.entry(wire.frame).or_default().push(DetectionRecord {
                frame: wire.frame,
                kind: ObservationKind::from(wire.kind),
                rect: Rect::new(wire.x, wire.y, wire.w, wire.h),
                confidence: wire.confidence,
            });
        }
        Ok(stream)
    }

    pub fn write(&self, mut out: impl Write) -> Result<()> {
        for r in self.records() {
            serde_json::to_writer(&mut out, &WireRecord::from(r))?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn records(&self) -> impl Iterator<Item = &DetectionRecord> {
        self.by_frame.values().flatten()
    }

    pub fn len(&self) -> usize {
        self.by_frame.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Kinds present anywhere in the stream, sorted.
    pub fn kinds(&self) -> Vec<ObservationKind> {
        let mut kinds: Vec<_> = self.records().map(|r| r.kind.clone()).collect();
        kinds.sort();
        kinds.dedup();
        kinds
    }

    pub fn for_frame(&self, frame: u64, kind: &ObservationKind) -> Vec<DetectionRecord> {
        self.by_frame
            .get(&frame)
            .map(|rs| rs.iter().filter(|r| &r.kind == kind).cloned().collect())
            .unwrap_or_default()
    }

    /// Checks every rect overlaps a `frame_w x frame_h` frame.
    pub fn validate_against(&self, frame_w: usize, frame_h: usize) -> Result<()> {
        let frame = Rect::new(0, 0, frame_w as i32, frame_h as i32);
        for (i, r) in self.records().enumerate() {
            if r.rect.intersection(&frame).is_none() {
                return Err(Error::DetectionStream {
                    line: i + 1,
                    message: format!("rect {:?} lies outside the {frame_w}x{frame_h} frame", r.rect),
                });
            }
        }
        Ok(())
    }
}

/// Binary map at full frame resolution: 1 inside the union of the records'
/// rects, 0 elsewhere. Records below [`DEFAULT_MIN_CONFIDENCE`] are dropped;
/// the remaining confidences play no further role.
pub fn rasterize(records: &[DetectionRecord], frame_w: usize, frame_h: usize) -> Result<ScalarMap> {
    rasterize_to_grid(records, frame_w, frame_h, frame_w, frame_h, DEFAULT_MIN_CONFIDENCE)
}

/// Like [`rasterize`], but draws into a `grid_w x grid_h` map covering the
/// same field of view (rects are rescaled).
pub fn rasterize_to_grid(
    records: &[DetectionRecord],
    frame_w: usize,
    frame_h: usize,
    grid_w: usize,
    grid_h: usize,
    min_confidence: f64,
) -> Result<ScalarMap> {
    if let Some(first) = records.first() {
        if let Some(odd) = records
            .iter()
            .find(|r| r.frame != first.frame || r.kind != first.kind)
        {
            return Err(Error::MixedBatch(format!(
                "frame {} kind {} vs frame {} kind {}",
                first.frame, first.kind, odd.frame, odd.kind
            )));
        }
    }
    let frame = Rect::new(0, 0, frame_w as i32, frame_h as i32);
    let scale = grid_w as f64 / frame_w as f64;
    let mut map = ScalarMap::zeros(grid_w, grid_h);
    for r in records {
        let Some(clipped) = r.rect.intersection(&frame) else {
            return Err(Error::InvalidArgument(format!(
                "detection {:?} on frame {} lies outside the {frame_w}x{frame_h} frame",
                r.rect, r.frame
            )));
        };
        if r.confidence < min_confidence {
            continue;
        }
        let cell = if grid_w == frame_w { clipped } else { scale_rect(clipped, scale) };
        map.fill_rect(&cell, 1.0);
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(frame: u64, kind: &str, rect: Rect) -> DetectionRecord {
        DetectionRecord {
            frame,
            kind: kind.into(),
            rect,
            confidence: 1.0,
        }
    }

    #[test]
    fn rasterize_single_rect() {
        let m = rasterize(&[rec(0, "human", Rect::new(0, 0, 2, 2))], 4, 4).unwrap();
        assert_eq!(m.sum(), 4.0);
        assert_eq!(m.get(1, 1), 1.0);
        assert_eq!(m.get(2, 2), 0.0);
    }

    #[test]
    fn rasterize_empty_is_zero() {
        assert_eq!(rasterize(&[], 4, 4).unwrap().sum(), 0.0);
    }

    #[test]
    fn rasterize_union_area_matches_membership_count() {
        let a = Rect::new(2, 3, 10, 6);
        let b = Rect::new(7, 5, 8, 9);
        let m = rasterize(&[rec(0, "human", a), rec(0, "human", b)], 20, 20).unwrap();
        let mut brute = 0;
        for y in 0..20 {
            for x in 0..20 {
                if a.contains_point(x, y) || b.contains_point(x, y) {
                    brute += 1;
                }
            }
        }
        let inter = a.intersection(&b).unwrap().area();
        assert_eq!(brute as i64, a.area() + b.area() - inter);
        assert_eq!(m.sum(), brute as f64);
    }

    #[test]
    fn rasterize_rejects_mixed_batches_and_outside_rects() {
        let mixed = [rec(0, "human", Rect::new(0, 0, 2, 2)), rec(1, "human", Rect::new(0, 0, 2, 2))];
        assert!(matches!(rasterize(&mixed, 4, 4), Err(Error::MixedBatch(_))));
        let kinds = [rec(0, "human", Rect::new(0, 0, 2, 2)), rec(0, "face", Rect::new(0, 0, 2, 2))];
        assert!(matches!(rasterize(&kinds, 4, 4), Err(Error::MixedBatch(_))));
        assert!(rasterize(&[rec(0, "human", Rect::new(10, 10, 2, 2))], 4, 4).is_err());
    }

    #[test]
    fn low_confidence_dropped() {
        let mut r = rec(0, "face", Rect::new(0, 0, 2, 2));
        r.confidence = 0.3;
        assert_eq!(rasterize(&[r], 4, 4).unwrap().sum(), 0.0);
    }

    #[test]
    fn parse_and_write_round_trip() {
        let text = "{\"frame\":0,\"kind\":\"human\",\"x\":1,\"y\":2,\"w\":3,\"h\":4,\"confidence\":0.9}\n\
                    \n\
                    {\"frame\":2,\"kind\":\"car\",\"x\":0,\"y\":0,\"w\":5,\"h\":5,\"confidence\":1.0}\n";
        let s = DetectionStream::parse(text.as_bytes()).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.for_frame(2, &"car".into())[0].kind, ObservationKind::Custom("car".into()));
        assert_eq!(s.kinds(), vec![ObservationKind::Human, ObservationKind::Custom("car".into())]);
        let mut buf = Vec::new();
        s.write(&mut buf).unwrap();
        assert_eq!(DetectionStream::parse(buf.as_slice()).unwrap(), s);
    }

    #[test]
    fn parse_reports_out_of_order_line() {
        let text = "{\"frame\":3,\"kind\":\"human\",\"x\":1,\"y\":2,\"w\":3,\"h\":4,\"confidence\":0.9}\n\
                    {\"frame\":5,\"kind\":\"human\",\"x\":1,\"y\":2,\"w\":3,\"h\":4,\"confidence\":0.9}\n\
                    {\"frame\":4,\"kind\":\"human\",\"x\":1,\"y\":2,\"w\":3,\"h\":4,\"confidence\":0.9}\n";
        match DetectionStream::parse(text.as_bytes()) {
            Err(Error::DetectionStream { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parse_rejects_bad_fields() {
        for bad in [
            "{\"frame\":0,\"kind\":\"human\",\"x\":1,\"y\":2,\"w\":0,\"h\":4,\"confidence\":0.9}",
            "{\"frame\":0,\"kind\":\"human\",\"x\":1,\"y\":2,\"w\":3,\"h\":4,\"confidence\":1.5}",
            "{\"frame\":0,\"kind\":\"human\",\"x\":1,\"y\":2,\"w\":3,\"h\":4}",
            "not json",
        ] {
            assert!(matches!(
                DetectionStream::parse(bad.as_bytes()),
                Err(Error::DetectionStream { line: 1, .. })
            ));
        }
    }
}
