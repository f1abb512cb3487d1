//! Pipeline configuration and its flat `key = value` text format.
//!
//! ```text
//! # comments and blank lines are ignored
//! fps = 30
//! delta_seconds = 5
//! omega = 4
//! omega.face = 6
//! weight.motion = 0.46
//! weight.human = 0.53
//! weight.face = 0.01
//! ```
//!
//! Unknown keys are rejected.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fusion::{FusionWeights, DEFAULT_ALPHA};
use crate::geometry::round_half_up;
use crate::observation::{MogParams, ObservationKind, DEFAULT_MIN_CONFIDENCE, DEFAULT_MOTION_SCALE, DEFAULT_OMEGA};
use crate::roi::{DEFAULT_MERGE_DIST, DEFAULT_MIN_AREA_FRACTION, DEFAULT_THRESHOLD};
use crate::tracking::TrackerParams;
use crate::zoom::{DEFAULT_A_PCT, DEFAULT_B_PCT, DEFAULT_SMOOTHER_WINDOW};

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    /// Accumulation window, frames, for every kind without an override.
    pub omega: usize,
    pub omega_overrides: BTreeMap<ObservationKind, usize>,
    pub delta_seconds: f64,
    pub fps: f64,
    pub alpha: f64,
    pub weights: FusionWeights,
    pub threshold: f64,
    /// Candidate merge distance at analysis resolution.
    pub merge_dist: i32,
    /// Minimum candidate area as a fraction of the analysis grid.
    pub min_area_frac: f64,
    pub motion_scale: f64,
    /// Downscale the detection sidecar uses for the human detector; recorded,
    /// not applied by the engine.
    pub human_scale: f64,
    pub out_w: usize,
    pub out_h: usize,
    pub seed: u64,
    pub a_pct: f64,
    pub b_pct: f64,
    pub smoother_window: usize,
    pub min_confidence: f64,
    pub mog: MogParams,
    pub tracker: TrackerParams,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            omega: DEFAULT_OMEGA,
            omega_overrides: BTreeMap::new(),
            delta_seconds: 5.0,
            fps: 30.0,
            alpha: DEFAULT_ALPHA,
            weights: FusionWeights::default(),
            threshold: DEFAULT_THRESHOLD,
            merge_dist: DEFAULT_MERGE_DIST,
            min_area_frac: DEFAULT_MIN_AREA_FRACTION,
            motion_scale: DEFAULT_MOTION_SCALE,
            human_scale: 0.8,
            out_w: 384,
            out_h: 216,
            seed: 0,
            a_pct: DEFAULT_A_PCT,
            b_pct: DEFAULT_B_PCT,
            smoother_window: DEFAULT_SMOOTHER_WINDOW,
            min_confidence: DEFAULT_MIN_CONFIDENCE,
            mog: MogParams::default(),
            tracker: TrackerParams::default(),
        }
    }
}

fn parse_num<T: FromStr>(line: usize, key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| Error::Config {
        line,
        message: format!("invalid value `{value}` for `{key}`"),
    })
}

impl PipelineConfig {
    /// Cycle length in frames.
    pub fn delta_frames(&self) -> usize {
        round_half_up(self.delta_seconds * self.fps).max(0) as usize
    }

    pub fn omega_for(&self, kind: &ObservationKind) -> usize {
        self.omega_overrides.get(kind).copied().unwrap_or(self.omega)
    }

    /// Kinds that take part in fusion, in weight-table order.
    pub fn kinds(&self) -> Vec<ObservationKind> {
        self.weights.iter().map(|(k, _)| k.clone()).collect()
    }

    pub fn out_aspect(&self) -> f64 {
        self.out_w as f64 / self.out_h as f64
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        if self.fps.is_nan() || self.fps <= 0.0 || self.delta_seconds.is_nan() || self.delta_seconds <= 0.0 || self.delta_frames() == 0 {
            return bad(format!("cycle of {}s at {} fps has no frames", self.delta_seconds, self.fps));
        }
        if self.omega == 0 || self.omega_overrides.values().any(|&o| o == 0) {
            return bad("omega must be at least 1".into());
        }
        let kinds = self.kinds();
        let max_omega = kinds.iter().map(|k| self.omega_for(k)).max().unwrap_or(self.omega);
        if max_omega * kinds.len().max(1) > self.delta_frames() {
            return bad(format!(
                "omega ({max_omega}) x {} kinds exceeds the {}-frame cycle",
                kinds.len(),
                self.delta_frames()
            ));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return bad(format!("alpha {} outside [0, 1]", self.alpha));
        }
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            return bad(format!("threshold {} outside (0, 1)", self.threshold));
        }
        if !(self.motion_scale > 0.0 && self.motion_scale <= 1.0) {
            return bad(format!("motion_scale {} outside (0, 1]", self.motion_scale));
        }
        if !(self.human_scale > 0.0 && self.human_scale <= 1.0) {
            return bad(format!("human_scale {} outside (0, 1]", self.human_scale));
        }
        if self.out_w == 0 || self.out_h == 0 {
            return bad("output size must be positive".into());
        }
        if self.smoother_window == 0 {
            return bad("smoother_window must be at least 1".into());
        }
        if self.merge_dist < 0 || self.min_area_frac < 0.0 {
            return bad("merge_dist and min_area_frac must be non-negative".into());
        }
        if !(self.mog.learning_rate > 0.0 && self.mog.learning_rate < 1.0) || self.mog.components == 0 {
            return bad("mog.learning_rate must be in (0, 1) and mog.components >= 1".into());
        }
        crate::zoom::AbSchedule::new(self.delta_frames(), self.a_pct, self.b_pct)?;
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = PipelineConfig::default();
        let mut weights: BTreeMap<ObservationKind, f64> =
            cfg.weights.iter().map(|(k, w)| (k.clone(), w)).collect();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(Error::Config {
                    line,
                    message: format!("expected `key = value`, got `{content}`"),
                });
            };
            let (key, value) = (key.trim(), value.trim());
            match key {
                "omega" => cfg.omega = parse_num(line, key, value)?,
                "delta_seconds" => cfg.delta_seconds = parse_num(line, key, value)?,
                "fps" => cfg.fps = parse_num(line, key, value)?,
                "alpha" => cfg.alpha = parse_num(line, key, value)?,
                "threshold" => cfg.threshold = parse_num(line, key, value)?,
                "merge_dist" => cfg.merge_dist = parse_num(line, key, value)?,
                "min_area_frac" => cfg.min_area_frac = parse_num(line, key, value)?,
                "motion_scale" => cfg.motion_scale = parse_num(line, key, value)?,
                "human_scale" => cfg.human_scale = parse_num(line, key, value)?,
                "out_w" => cfg.out_w = parse_num(line, key, value)?,
                "out_h" => cfg.out_h = parse_num(line, key, value)?,
                "seed" => cfg.seed = parse_num(line, key, value)?,
                "a_pct" => cfg.a_pct = parse_num(line, key, value)?,
                "b_pct" => cfg.b_pct = parse_num(line, key, value)?,
                "smoother_window" => cfg.smoother_window = parse_num(line, key, value)?,
                "min_confidence" => cfg.min_confidence = parse_num(line, key, value)?,
                "mog.components" => cfg.mog.components = parse_num(line, key, value)?,
                "mog.learning_rate" => cfg.mog.learning_rate = parse_num(line, key, value)?,
                "mog.variance_threshold" => cfg.mog.variance_threshold = parse_num(line, key, value)?,
                "mog.initial_variance" => cfg.mog.initial_variance = parse_num(line, key, value)?,
                "mog.background_ratio" => cfg.mog.background_ratio = parse_num(line, key, value)?,
                "tracker.max_iterations" => cfg.tracker.max_iterations = parse_num(line, key, value)?,
                "tracker.epsilon" => cfg.tracker.epsilon = parse_num(line, key, value)?,
                _ => {
                    if let Some(kind) = key.strip_prefix("weight.").filter(|k| !k.is_empty()) {
                        weights.insert(kind.into(), parse_num(line, key, value)?);
                    } else if let Some(kind) = key.strip_prefix("omega.").filter(|k| !k.is_empty()) {
                        cfg.omega_overrides.insert(kind.into(), parse_num(line, key, value)?);
                    } else {
                        return Err(Error::Config {
                            line,
                            message: format!("unknown key `{key}`"),
                        });
                    }
                }
            }
        }
        weights.retain(|_, w| *w > 0.0);
        cfg.weights = FusionWeights::new(weights).map_err(|e| Error::Config {
            line: 0,
            message: e.to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::input(path, e.to_string()))?;
        Self::parse(&text)
    }

    /// Renders the configuration in the text format accepted by [`parse`](Self::parse).
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| writeln!(s, "{k} = {v}").expect("writing to a String");
        kv("omega", self.omega.to_string());
        for (k, o) in &self.omega_overrides {
            kv(&format!("omega.{k}"), o.to_string());
        }
        kv("delta_seconds", self.delta_seconds.to_string());
        kv("fps", self.fps.to_string());
        kv("alpha", self.alpha.to_string());
        for (k, w) in self.weights.iter() {
            kv(&format!("weight.{k}"), w.to_string());
        }
        kv("threshold", self.threshold.to_string());
        kv("merge_dist", self.merge_dist.to_string());
        kv("min_area_frac", self.min_area_frac.to_string());
        kv("motion_scale", self.motion_scale.to_string());
        kv("human_scale", self.human_scale.to_string());
        kv("out_w", self.out_w.to_string());
        kv("out_h", self.out_h.to_string());
        kv("seed", self.seed.to_string());
        kv("a_pct", self.a_pct.to_string());
        kv("b_pct", self.b_pct.to_string());
        kv("smoother_window", self.smoother_window.to_string());
        kv("min_confidence", self.min_confidence.to_string());
        kv("mog.components", self.mog.components.to_string());
        kv("mog.learning_rate", self.mog.learning_rate.to_string());
        kv("mog.variance_threshold", self.mog.variance_threshold.to_string());
        kv("mog.initial_variance", self.mog.initial_variance.to_string());
        kv("mog.background_ratio", self.mog.background_ratio.to_string());
        kv("tracker.max_iterations", self.tracker.max_iterations.to_string());
        kv("tracker.epsilon", self.tracker.epsilon.to_string());
        s
    }
}
