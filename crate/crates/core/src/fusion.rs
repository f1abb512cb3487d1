//! Sensitivity fusion, the fair-coverage penalty map, user relevance mask and
//! the resulting decision map.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::Rect;
use crate::map::ScalarMap;
use crate::observation::ObservationKind;

/// Convex fusion weights, one per observation kind. Always normalized to sum 1.
#[derive(Debug, Clone, PartialEq)]
pub struct FusionWeights {
    weights: BTreeMap<ObservationKind, f64>,
}

impl FusionWeights {
    pub fn new(weights: impl IntoIterator<Item = (ObservationKind, f64)>) -> Result<Self> {
        let weights: BTreeMap<_, _> = weights.into_iter().collect();
        if let Some((k, w)) = weights.iter().find(|(_, w)| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidArgument(format!("weight for `{k}` is {w}")));
        }
        let total: f64 = weights.values().sum();
        if total <= 0.0 {
            return Err(Error::InvalidArgument("fusion weights sum to zero".into()));
        }
        Ok(FusionWeights {
            weights: weights.into_iter().map(|(k, w)| (k, w / total)).collect(),
        })
    }

    pub fn get(&self, kind: &ObservationKind) -> Option<f64> {
        self.weights.get(kind).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ObservationKind, f64)> {
        self.weights.iter().map(|(k, &w)| (k, w))
    }
}

impl Default for FusionWeights {
    /// Motion 0.46, human 0.53, face 0.01.
    fn default() -> Self {
        FusionWeights::new([
            (ObservationKind::Motion, 0.46),
            (ObservationKind::Human, 0.53),
            (ObservationKind::Face, 0.01),
        ])
        .expect("default weights are valid")
    }
}

/// Weighted sum of the accumulated observation maps.
pub fn fuse(
    observations: &BTreeMap<ObservationKind, ScalarMap>,
    weights: &FusionWeights,
) -> Result<ScalarMap> {
    let mut iter = observations.iter();
    let Some((_, first)) = iter.next() else {
        return Err(Error::InvalidArgument("no observations to fuse".into()));
    };
    let (w, h) = first.dims();
    let mut acc = vec![0.0f64; w * h];
    for (kind, map) in observations {
        let c = weights
            .get(kind)
            .ok_or_else(|| Error::MissingWeight(kind.to_string()))?;
        first.ensure_dims(map)?;
        for (a, &v) in acc.iter_mut().zip(map.values()) {
            *a += c * v;
        }
    }
    ScalarMap::from_values(w, h, acc)
}

/// One Gaussian added to the penalty map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PenaltyRecord {
    pub cycle: u64,
    pub mu_x: f64,
    pub mu_y: f64,
    pub sigma_x: f64,
    pub sigma_y: f64,
}

/// Default per-cycle decay of the penalty map.
pub const DEFAULT_ALPHA: f64 = 0.3;

/// Decaying sum of Gaussians over recently shown regions.
#[derive(Debug, Clone)]
pub struct PenaltyState {
    map: ScalarMap,
    alpha: f64,
    history: Vec<PenaltyRecord>,
}

impl PenaltyState {
    pub fn new(width: usize, height: usize, alpha: f64) -> Self {
        assert!((0.0..=1.0).contains(&alpha), "alpha must be in [0, 1]");
        PenaltyState {
            map: ScalarMap::zeros(width, height),
            alpha,
            history: Vec::new(),
        }
    }

    pub fn map(&self) -> &ScalarMap {
        &self.map
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn history(&self) -> &[PenaltyRecord] {
        &self.history
    }

    /// `P <- clamp(alpha * P + G)` with `G` an unnormalized (peak 1) Gaussian
    /// centered on `selected` with sigmas of half its width and height.
    /// Pixels are sampled at integer coordinates.
    pub fn apply_cycle(&mut self, selected: &Rect, cycle: u64) {
        let (mu_x, mu_y) = selected.center();
        let sigma_x = selected.w as f64 / 2.0;
        let sigma_y = selected.h as f64 / 2.0;
        let gx: Vec<f64> = (0..self.map.width())
            .map(|x| (-(x as f64 - mu_x).powi(2) / (2.0 * sigma_x * sigma_x)).exp())
            .collect();
        let gy: Vec<f64> = (0..self.map.height())
            .map(|y| (-(y as f64 - mu_y).powi(2) / (2.0 * sigma_y * sigma_y)).exp())
            .collect();
        let alpha = self.alpha;
        self.map.map_in_place(|x, y, p| alpha * p + gx[x] * gy[y]);
        self.history.push(PenaltyRecord {
            cycle,
            mu_x,
            mu_y,
            sigma_x,
            sigma_y,
        });
    }

    /// Decay without adding a Gaussian, for cycles that showed no target.
    pub fn decay(&mut self) {
        let alpha = self.alpha;
        self.map.map_in_place(|_, _, p| alpha * p);
    }
}

/// Functional form of [`PenaltyState::apply_cycle`].
pub fn apply_penalty_cycle(mut state: PenaltyState, selected: &Rect) -> PenaltyState {
    let cycle = state.history.last().map_or(0, |r| r.cycle + 1);
    state.apply_cycle(selected, cycle);
    state
}

/// Binary relevance mask: 1 = relevant, 0 = ignore.
#[derive(Debug, Clone, PartialEq)]
pub struct UserMask {
    map: ScalarMap,
}

impl UserMask {
    /// Values at or above 0.5 become 1, the rest 0.
    pub fn new(map: &ScalarMap) -> Self {
        UserMask {
            map: map.binarize(0.5),
        }
    }

    pub fn all_relevant(width: usize, height: usize) -> Self {
        UserMask {
            map: ScalarMap::filled(width, height, 1.0),
        }
    }

    pub fn map(&self) -> &ScalarMap {
        &self.map
    }

    pub fn resized(&self, width: usize, height: usize) -> Self {
        UserMask {
            map: self.map.resize_nearest(width, height),
        }
    }
}

/// `(1 - P) * (U * I)` per pixel.
pub fn decision_map(
    sensitivity: &ScalarMap,
    user: &UserMask,
    penalty: &PenaltyState,
) -> Result<ScalarMap> {
    sensitivity.ensure_dims(user.map())?;
    sensitivity.ensure_dims(penalty.map())?;
    let values = sensitivity
        .values()
        .iter()
        .zip(user.map().values())
        .zip(penalty.map().values())
        .map(|((&i, &u), &p)| (1.0 - p) * (u * i))
        .collect();
    ScalarMap::from_values(sensitivity.width(), sensitivity.height(), values)
}
