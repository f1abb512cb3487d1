//! The per-cycle loop: analyze the first frames, pick a target, track it and
//! schedule the virtual camera, then penalize the region that was shown.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::fusion::{decision_map, fuse, PenaltyState, UserMask};
use crate::geometry::{clamp_rect, scale_rect, Rect};
use crate::map::ScalarMap;
use crate::observation::{rasterize_to_grid, AccumulatorState, DetectionStream, MotionDetector, ObservationKind};
use crate::pipeline::config::PipelineConfig;
use crate::pipeline::trajectory::TrajectoryEntry;
use crate::roi::{extract_candidates, select_target, RoiParams};
use crate::tracking::{init_tracker, TrackerState};
use crate::zoom::{refine_target, render, schedule_params, AbSchedule, ParamSmoother, Phase, ZoomParams};

/// Accumulated wall time and call count of one stage.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct StageTime {
    pub total: Duration,
    pub calls: u64,
}

impl StageTime {
    pub fn add(&mut self, d: Duration) {
        self.total += d;
        self.calls += 1;
    }

    pub fn mean_ms(&self) -> f64 {
        if self.calls == 0 {
            0.0
        } else {
            self.total.as_secs_f64() * 1e3 / self.calls as f64
        }
    }
}

#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct StageTimings {
    pub detect: StageTime,
    pub select: StageTime,
    pub track: StageTime,
}

/// What happened in one cycle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CycleReport {
    pub cycle: u64,
    pub first_frame: u64,
    pub frames: usize,
    pub candidates: usize,
    /// Aspect-adjusted target at full resolution.
    pub selected: Option<Rect>,
    /// Target window moved along with the tracker, on the cycle's last frame.
    pub final_tracked: Option<Rect>,
}

/// An input frame paired with the view to present for it.
#[derive(Debug, Clone)]
pub struct Scheduled {
    pub entry: TrajectoryEntry,
    pub frame: Frame,
}

/// Long-lived pipeline state shared across cycles.
pub struct Engine {
    config: PipelineConfig,
    frame_w: usize,
    frame_h: usize,
    grid_w: usize,
    grid_h: usize,
    motion: MotionDetector,
    detections: DetectionStream,
    user: UserMask,
    penalty: PenaltyState,
    full_view: ZoomParams,
    roi: RoiParams,
    cycle: u64,
    last_frame: Option<u64>,
    timings: StageTimings,
}

impl Engine {
    /// `user_mask` may be given at frame or analysis resolution.
    pub fn new(
        config: PipelineConfig,
        frame_w: usize,
        frame_h: usize,
        detections: DetectionStream,
        user_mask: Option<UserMask>,
    ) -> Result<Self> {
        config.validate()?;
        if frame_w == 0 || frame_h == 0 {
            return Err(Error::InvalidArgument("empty frames".into()));
        }
        let (grid_w, grid_h) = MotionDetector::analysis_dims(config.motion_scale, frame_w, frame_h);
        let user = match user_mask {
            None => UserMask::all_relevant(grid_w, grid_h),
            Some(m) if m.map().dims() == (grid_w, grid_h) => m,
            Some(m) if m.map().dims() == (frame_w, frame_h) => m.resized(grid_w, grid_h),
            Some(m) => return Err(Error::dims((frame_w, frame_h), m.map().dims())),
        };
        detections.validate_against(frame_w, frame_h)?;
        let roi = RoiParams {
            threshold: config.threshold,
            merge_dist: config.merge_dist,
            min_area: (config.min_area_frac * (grid_w * grid_h) as f64).round() as i64,
        };
        Ok(Engine {
            motion: MotionDetector::new(config.mog, config.motion_scale),
            penalty: PenaltyState::new(grid_w, grid_h, config.alpha),
            full_view: ZoomParams::full_view(frame_w, frame_h, config.out_w, config.out_h),
            config,
            frame_w,
            frame_h,
            grid_w,
            grid_h,
            detections,
            user,
            roi,
            cycle: 0,
            last_frame: None,
            timings: StageTimings::default(),
        })
    }

    pub fn config(&self) -> &PipelineConfig {
        &self.config
    }

    pub fn cycle_len(&self) -> usize {
        self.config.delta_frames()
    }

    pub fn frame_dims(&self) -> (usize, usize) {
        (self.frame_w, self.frame_h)
    }

    pub fn grid_dims(&self) -> (usize, usize) {
        (self.grid_w, self.grid_h)
    }

    pub fn penalty(&self) -> &PenaltyState {
        &self.penalty
    }

    pub fn full_view(&self) -> ZoomParams {
        self.full_view
    }

    pub fn timings(&self) -> &StageTimings {
        &self.timings
    }

    pub fn cycles_done(&self) -> u64 {
        self.cycle
    }

    /// Starts a cycle of `len` frames. Cycles shorter than the configured
    /// length (the tail of the stream) show the full view only.
    pub fn begin_cycle(&mut self, len: usize) -> CycleRunner<'_> {
        let full = len >= self.cycle_len();
        let kinds = self.config.kinds();
        let accumulators = kinds
            .iter()
            .map(|k| (k.clone(), AccumulatorState::new(k.clone(), self.config.omega_for(k))))
            .collect();
        let analysis_len = if full {
            kinds.iter().map(|k| self.config.omega_for(k)).max().unwrap_or(0).min(len)
        } else {
            0
        };
        CycleRunner {
            schedule: AbSchedule::new(len.max(1), self.config.a_pct, self.config.b_pct)
                .expect("validated in config"),
            smoother: ParamSmoother::new(self.config.smoother_window),
            engine: self,
            len,
            pos: 0,
            first_frame: None,
            analysis_len,
            accumulators,
            buffered: Vec::new(),
            decided: analysis_len == 0,
            candidates: 0,
            target: None,
            tracker: None,
            tracked: None,
        }
    }

    /// Processes exactly one cycle's worth of frames and renders them.
    pub fn run_cycle(&mut self, frames: Vec<Frame>) -> Result<CycleOutput> {
        let (out_w, out_h) = (self.config.out_w, self.config.out_h);
        let mut runner = self.begin_cycle(frames.len());
        let mut scheduled = Vec::with_capacity(frames.len());
        for f in frames {
            scheduled.extend(runner.push(f)?);
        }
        let report = runner.finish()?;
        let (entries, rendered) = scheduled
            .into_iter()
            .map(|s| {
                let out = render(&s.frame, &s.entry.view, out_w, out_h);
                (s.entry, out)
            })
            .unzip();
        Ok(CycleOutput {
            frames: rendered,
            entries,
            report,
        })
    }

    fn observe(&mut self, frame: &Frame, pos: usize, accumulators: &mut BTreeMap<ObservationKind, AccumulatorState>) -> Result<()> {
        let started = Instant::now();
        for (kind, acc) in accumulators.iter_mut() {
            if pos >= acc.omega() {
                continue;
            }
            let map = match kind {
                ObservationKind::Motion => {
                    let mut map = ScalarMap::zeros(self.grid_w, self.grid_h);
                    for r in self.motion.detect_analysis_rects(frame) {
                        map.fill_rect(&r, 1.0);
                    }
                    map
                }
                other => rasterize_to_grid(
                    &self.detections.for_frame(frame.index, other),
                    self.frame_w,
                    self.frame_h,
                    self.grid_w,
                    self.grid_h,
                    self.config.min_confidence,
                )?,
            };
            acc.push(&map)?;
        }
        self.timings.detect.add(started.elapsed());
        Ok(())
    }

    /// Candidate count and, if any, the head candidate (full resolution)
    /// with its aspect-adjusted target.
    fn decide(
        &mut self,
        accumulators: &BTreeMap<ObservationKind, AccumulatorState>,
    ) -> Result<(usize, Option<(Rect, Rect)>)> {
        let started = Instant::now();
        let observations: BTreeMap<_, _> = accumulators
            .iter()
            .map(|(k, acc)| {
                let map = if acc.is_empty() {
                    ScalarMap::zeros(self.grid_w, self.grid_h)
                } else {
                    acc.current()
                };
                (k.clone(), map)
            })
            .collect();
        let sensitivity = fuse(&observations, &self.config.weights)?;
        let decision = decision_map(&sensitivity, &self.user, &self.penalty)?;
        let candidates = extract_candidates(&decision, &self.roi);
        let to_full = self.frame_w as f64 / self.grid_w as f64;
        let full_res: Vec<_> = candidates
            .iter()
            .map(|c| crate::roi::CandidateRoi {
                rect: clamp_rect(scale_rect(c.rect, to_full), self.frame_w, self.frame_h),
                score: c.score,
            })
            .collect();
        let target = select_target(&full_res, self.config.out_aspect(), self.frame_w, self.frame_h)
            .filter(|r| r.w >= 2 && r.h >= 2)
            .map(|t| (full_res[0].rect, t));
        self.timings.select.add(started.elapsed());
        Ok((candidates.len(), target))
    }
}

pub struct CycleOutput {
    pub frames: Vec<Frame>,
    pub entries: Vec<TrajectoryEntry>,
    pub report: CycleReport,
}

struct ActiveTarget {
    params: ZoomParams,
    /// Window the tracker was started on.
    roi: Rect,
}

/// One cycle in progress. Frames go in one at a time; scheduled frames come
/// out once the cycle's target is known (after the analysis window).
pub struct CycleRunner<'a> {
    engine: &'a mut Engine,
    schedule: AbSchedule,
    smoother: ParamSmoother,
    len: usize,
    pos: usize,
    first_frame: Option<u64>,
    analysis_len: usize,
    accumulators: BTreeMap<ObservationKind, AccumulatorState>,
    buffered: Vec<(usize, Frame)>,
    decided: bool,
    candidates: usize,
    target: Option<(Rect, ActiveTarget)>,
    tracker: Option<TrackerState>,
    tracked: Option<Rect>,
}

impl CycleRunner<'_> {
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn push(&mut self, frame: Frame) -> Result<Vec<Scheduled>> {
        if self.pos >= self.len {
            return Err(Error::InvalidArgument(format!("cycle already has {} frames", self.len)));
        }
        if frame.dims() != self.engine.frame_dims() {
            return Err(Error::dims(self.engine.frame_dims(), frame.dims()));
        }
        if let Some(last) = self.engine.last_frame {
            if frame.index <= last {
                return Err(Error::InvalidArgument(format!(
                    "frame index {} does not follow {last}",
                    frame.index
                )));
            }
        }
        self.engine.last_frame = Some(frame.index);
        self.first_frame.get_or_insert(frame.index);
        let pos = self.pos;
        self.pos += 1;

        if self.decided {
            return Ok(vec![self.schedule_frame(pos, frame, true)]);
        }

        self.engine.observe(&frame, pos, &mut self.accumulators)?;
        self.buffered.push((pos, frame));
        if pos + 1 < self.analysis_len {
            return Ok(Vec::new());
        }

        let (count, target) = self.engine.decide(&self.accumulators)?;
        self.candidates = count;
        self.decided = true;
        if let Some((roi, rect)) = target {
            let (_, last) = self.buffered.last().expect("analysis frame buffered");
            let roi = if roi.w >= 2 && roi.h >= 2 { roi } else { rect };
            self.tracker = Some(init_tracker(last, roi, self.engine.config.tracker)?);
            self.tracked = Some(rect);
            self.target = Some((
                rect,
                ActiveTarget {
                    params: ZoomParams::from_rect(&rect),
                    roi,
                },
            ));
        }
        let buffered = std::mem::take(&mut self.buffered);
        Ok(buffered
            .into_iter()
            .map(|(p, f)| self.schedule_frame(p, f, false))
            .collect())
    }

    fn schedule_frame(&mut self, pos: usize, frame: Frame, track: bool) -> Scheduled {
        let cycle = self.engine.cycle;
        let (fw, fh) = self.engine.frame_dims();
        let full_view = self.engine.full_view;
        let (phase, view, target) = match (&self.target, &mut self.tracker) {
            (Some((rect, active)), Some(tracker)) => {
                let tracked = if track {
                    let started = Instant::now();
                    let r = tracker.step(&frame);
                    self.engine.timings.track.add(started.elapsed());
                    let moved = Rect::new(rect.x + r.x - active.roi.x, rect.y + r.y - active.roi.y, rect.w, rect.h);
                    clamp_rect(moved, fw, fh)
                } else {
                    *rect
                };
                self.tracked = Some(tracked);
                let refined = refine_target(&active.params, &tracked, &mut self.smoother).clamped(fw, fh);
                let view = schedule_params(&self.schedule, pos, &full_view, &refined).clamped(fw, fh);
                (self.schedule.locate(pos).0, view, Some(*rect))
            }
            _ => (Phase::Full, full_view, None),
        };
        Scheduled {
            entry: TrajectoryEntry {
                frame: frame.index,
                cycle,
                phase,
                view,
                target,
            },
            frame,
        }
    }

    /// Closes the cycle: penalizes the region shown on its last frame (or
    /// just decays the penalty when nothing was shown).
    pub fn finish(self) -> Result<CycleReport> {
        if self.pos != self.len {
            return Err(Error::InvalidArgument(format!(
                "cycle finished after {} of {} frames",
                self.pos, self.len
            )));
        }
        let engine = self.engine;
        let cycle = engine.cycle;
        let selected = self.target.as_ref().map(|(r, _)| *r);
        let final_tracked = selected.and(self.tracked);
        match final_tracked {
            Some(r) => {
                let on_grid = scale_rect(r, engine.config.motion_scale);
                engine.penalty.apply_cycle(&on_grid, cycle);
            }
            None if self.analysis_len > 0 => engine.penalty.decay(),
            None => {}
        }
        engine.cycle += 1;
        Ok(CycleReport {
            cycle,
            first_frame: self.first_frame.unwrap_or(0),
            frames: self.len,
            candidates: self.candidates,
            selected,
            final_tracked,
        })
    }
}
