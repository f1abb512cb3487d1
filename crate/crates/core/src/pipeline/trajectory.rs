//! Per-frame zoom log (JSON Lines) and the zoom accuracy metric computed
//! from it.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{round_half_up, Rect};
use crate::zoom::{Phase, ZoomParams};

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryEntry {
    pub frame: u64,
    pub cycle: u64,
    pub phase: Phase,
    pub view: ZoomParams,
    /// Target selected for the cycle (full resolution), if any.
    pub target: Option<Rect>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TrajectoryLine {
    frame: u64,
    cycle: u64,
    phase: Phase,
    cx: f64,
    cy: f64,
    vw: f64,
    vh: f64,
    target: Option<Rect>,
}

impl TrajectoryEntry {
    /// Integer view window as presented (the view is already inside the frame).
    pub fn view_rect(&self) -> Rect {
        let w = (round_half_up(self.view.vw) as i32).max(1);
        let h = (round_half_up(self.view.vh) as i32).max(1);
        Rect::centered_at(self.view.cx, self.view.cy, w, h)
    }

    pub fn write_line(&self, mut out: impl Write) -> Result<()> {
        let line = TrajectoryLine {
            frame: self.frame,
            cycle: self.cycle,
            phase: self.phase,
            cx: self.view.cx,
            cy: self.view.cy,
            vw: self.view.vw,
            vh: self.view.vh,
            target: self.target,
        };
        serde_json::to_writer(&mut out, &line)?;
        out.write_all(b"\n")?;
        Ok(())
    }

    pub fn parse_line(text: &str) -> Result<Self> {
        let l: TrajectoryLine = serde_json::from_str(text)?;
        Ok(TrajectoryEntry {
            frame: l.frame,
            cycle: l.cycle,
            phase: l.phase,
            view: ZoomParams {
                cx: l.cx,
                cy: l.cy,
                vw: l.vw,
                vh: l.vh,
            },
            target: l.target,
        })
    }
}

pub fn write_trajectory(entries: &[TrajectoryEntry], mut out: impl Write) -> Result<()> {
    for e in entries {
        e.write_line(&mut out)?;
    }
    Ok(())
}

pub fn read_trajectory(reader: impl BufRead) -> Result<Vec<TrajectoryEntry>> {
    let mut entries = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        entries.push(TrajectoryEntry::parse_line(&line).map_err(|e| {
            Error::InvalidArgument(format!("trajectory line {}: {e}", i + 1))
        })?);
    }
    Ok(entries)
}

/// Ground-truth object box for one cycle, taken at the end of its hold phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleTruth {
    pub cycle: u64,
    pub x: i32,
    pub y: i32,
    pub w: i32,
    pub h: i32,
}

impl CycleTruth {
    pub fn rect(&self) -> Rect {
        Rect::new(self.x, self.y, self.w, self.h)
    }
}

pub fn read_truth(reader: impl BufRead) -> Result<Vec<(u64, Rect)>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let t: CycleTruth = serde_json::from_str(&line)
            .map_err(|e| Error::InvalidArgument(format!("truth line {}: {e}", i + 1)))?;
        if t.w < 1 || t.h < 1 {
            return Err(Error::InvalidArgument(format!("truth line {}: empty box", i + 1)));
        }
        out.push((t.cycle, t.rect()));
    }
    Ok(out)
}

/// Fraction of zoom operations (cycles with a target) whose ground-truth
/// box is fully inside the view shown on the last hold frame. With no zoom
/// operations the ratio is vacuously 1.
pub fn zoom_accuracy(trajectory: &[TrajectoryEntry], truth: &[(u64, Rect)]) -> Result<f64> {
    let mut hold_end: BTreeMap<u64, &TrajectoryEntry> = BTreeMap::new();
    for e in trajectory {
        if e.target.is_some() && e.phase == Phase::Hold {
            hold_end
                .entry(e.cycle)
                .and_modify(|cur| {
                    if e.frame > cur.frame {
                        *cur = e
                    }
                })
                .or_insert(e);
        }
    }
    if hold_end.is_empty() {
        return Ok(1.0);
    }
    let truth: BTreeMap<u64, Rect> = truth.iter().copied().collect();
    let mut correct = 0usize;
    for (cycle, entry) in &hold_end {
        let boxed = truth.get(cycle).ok_or(Error::MissingTruth(*cycle))?;
        if entry.view_rect().contains(boxed) {
            correct += 1;
        }
    }
    Ok(correct as f64 / hold_end.len() as f64)
}
