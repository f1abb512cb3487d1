//! Whole-stream driver: ingest, analysis and rendering run on their own
//! threads joined by bounded channels; frame order is preserved throughout.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::mpsc::{sync_channel, Receiver, SyncSender};
use std::thread;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::fusion::UserMask;
use crate::io::{load_mask, open_source, save_png, FrameSource};
use crate::observation::DetectionStream;
use crate::pipeline::config::PipelineConfig;
use crate::pipeline::engine::{CycleReport, Engine, Scheduled, StageTime, StageTimings};
use crate::pipeline::trajectory::TrajectoryEntry;
use crate::zoom::render;

const QUEUE_DEPTH: usize = 16;

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct MeanTimings {
    pub detect_ms: f64,
    pub select_ms: f64,
    pub track_ms: f64,
    pub render_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub frames: usize,
    pub cycles: usize,
    pub targets: usize,
    pub mean_timings: MeanTimings,
    pub cycle_reports: Vec<CycleReport>,
}

fn cycle_lengths(total: usize, delta: usize) -> Vec<usize> {
    let mut lens = vec![delta; total / delta];
    if !total.is_multiple_of(delta) {
        lens.push(total % delta);
    }
    lens
}

fn ingest(source: Box<dyn FrameSource + '_>, tx: SyncSender<Result<Frame>>) {
    for item in source {
        let failed = item.is_err();
        if tx.send(item).is_err() || failed {
            return;
        }
    }
}

fn analyze(
    mut engine: Engine,
    total: usize,
    rx: Receiver<Result<Frame>>,
    tx: SyncSender<Scheduled>,
) -> Result<(Vec<CycleReport>, StageTimings)> {
    let mut reports = Vec::new();
    'cycles: for len in cycle_lengths(total, engine.cycle_len()) {
        let mut runner = engine.begin_cycle(len);
        for _ in 0..len {
            let frame = rx
                .recv()
                .map_err(|_| Error::InvalidArgument("input ended before its declared frame count".into()))??;
            for s in runner.push(frame)? {
                if tx.send(s).is_err() {
                    break 'cycles;
                }
            }
        }
        reports.push(runner.finish()?);
    }
    Ok((reports, *engine.timings()))
}

/// Runs the engine over every frame of `source`, handing each rendered
/// output frame and its trajectory entry to `sink` in order.
pub fn run(
    config: PipelineConfig,
    source: Box<dyn FrameSource + '_>,
    detections: DetectionStream,
    user_mask: Option<UserMask>,
    mut sink: impl FnMut(&TrajectoryEntry, &Frame) -> Result<()>,
) -> Result<RunSummary> {
    let (w, h) = source.dims();
    let total = source.frame_count();
    let (out_w, out_h) = (config.out_w, config.out_h);
    let engine = Engine::new(config, w, h, detections, user_mask)?;

    let (frame_tx, frame_rx) = sync_channel(QUEUE_DEPTH);
    let (sched_tx, sched_rx) = sync_channel::<Scheduled>(QUEUE_DEPTH);
    thread::scope(|scope| {
        scope.spawn(move || ingest(source, frame_tx));
        let analysis = scope.spawn(move || analyze(engine, total, frame_rx, sched_tx));

        let mut render_time = StageTime::default();
        let mut frames = 0usize;
        let mut sink_result = Ok(());
        for s in sched_rx {
            let started = Instant::now();
            let out = render(&s.frame, &s.entry.view, out_w, out_h);
            render_time.add(started.elapsed());
            if let Err(e) = sink(&s.entry, &out) {
                sink_result = Err(e);
                break;
            }
            frames += 1;
        }
        let analysis = analysis.join().expect("analysis thread panicked");
        sink_result?;
        let (reports, timings) = analysis?;
        if frames != total {
            return Err(Error::InvalidArgument(format!("rendered {frames} of {total} frames")));
        }
        Ok(RunSummary {
            frames,
            cycles: reports.len(),
            targets: reports.iter().filter(|r| r.selected.is_some()).count(),
            mean_timings: MeanTimings {
                detect_ms: timings.detect.mean_ms(),
                select_ms: timings.select.mean_ms(),
                track_ms: timings.track.mean_ms(),
                render_ms: render_time.mean_ms(),
            },
            cycle_reports: reports,
        })
    })
}

/// File locations for [`run_paths`]. Absent detections mean motion only;
/// an absent mask marks everything relevant.
#[derive(Debug, Clone, Default)]
pub struct RunPaths {
    pub input: PathBuf,
    pub detections: Option<PathBuf>,
    pub mask: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
    pub trajectory: Option<PathBuf>,
}

/// File-level wrapper around [`run`]: output frames go to
/// `<out_dir>/<frame:06>.png` and the summary to `<out_dir>/summary.json`.
pub fn run_paths(config: PipelineConfig, paths: &RunPaths) -> Result<RunSummary> {
    let source = open_source(&paths.input)?;
    let detections = match &paths.detections {
        Some(p) => {
            let f = File::open(p).map_err(|e| Error::input(p, e.to_string()))?;
            DetectionStream::parse(BufReader::new(f)).map_err(|e| Error::input(p, e.to_string()))?
        }
        None => DetectionStream::default(),
    };
    let mask = match &paths.mask {
        Some(p) => Some(UserMask::new(&load_mask(p)?)),
        None => None,
    };
    if let Some(dir) = &paths.out_dir {
        fs::create_dir_all(dir).map_err(|e| Error::input(dir, e.to_string()))?;
    }
    let mut trajectory = match &paths.trajectory {
        Some(p) => Some(BufWriter::new(File::create(p).map_err(|e| Error::input(p, e.to_string()))?)),
        None => None,
    };
    let out_dir = paths.out_dir.as_deref();
    let summary = run(config, source, detections, mask, |entry, frame| {
        if let Some(t) = trajectory.as_mut() {
            entry.write_line(t)?;
        }
        if let Some(dir) = out_dir {
            save_png(frame, &dir.join(format!("{:06}.png", entry.frame)))?;
        }
        Ok(())
    })?;
    if let Some(mut t) = trajectory {
        t.flush()?;
    }
    if let Some(dir) = out_dir {
        write_summary(&summary, &dir.join("summary.json"))?;
    }
    Ok(summary)
}

pub fn write_summary(summary: &RunSummary, path: &Path) -> Result<()> {
    let mut f = BufWriter::new(File::create(path).map_err(|e| Error::input(path, e.to_string()))?);
    serde_json::to_writer_pretty(&mut f, summary)?;
    f.write_all(b"\n")?;
    f.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_split() {
        assert_eq!(cycle_lengths(300, 150), vec![150, 150]);
        assert_eq!(cycle_lengths(310, 150), vec![150, 150, 10]);
        assert_eq!(cycle_lengths(20, 150), vec![20]);
        assert!(cycle_lengths(0, 150).is_empty());
    }
}
