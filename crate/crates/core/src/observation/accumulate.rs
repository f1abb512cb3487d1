//! Persistence of binary observations over a sliding window of `omega` frames.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::map::ScalarMap;
use crate::observation::ObservationKind;

/// Default window length.
pub const DEFAULT_OMEGA: usize = 4;

/// Sliding window of the most recent binary maps for one observation kind.
///
/// The output is the per-pixel mean over the maps currently held, so before
/// `omega` maps have arrived it averages over the frames seen so far.
#[derive(Debug, Clone)]
pub struct AccumulatorState {
    kind: ObservationKind,
    omega: usize,
    dims: Option<(usize, usize)>,
    window: VecDeque<Vec<bool>>,
    counts: Vec<u32>,
}

impl AccumulatorState {
    pub fn new(kind: ObservationKind, omega: usize) -> Self {
        assert!(omega >= 1, "omega must be at least 1");
        AccumulatorState {
            kind,
            omega,
            dims: None,
            window: VecDeque::with_capacity(omega),
            counts: Vec::new(),
        }
    }

    pub fn kind(&self) -> &ObservationKind {
        &self.kind
    }

    pub fn omega(&self) -> usize {
        self.omega
    }

    /// Number of maps currently in the window.
    pub fn len(&self) -> usize {
        self.window.len()
    }

    pub fn is_empty(&self) -> bool {
        self.window.is_empty()
    }

    pub fn reset(&mut self) {
        self.window.clear();
        self.counts.iter_mut().for_each(|c| *c = 0);
    }

    /// Adds a binary map (values >= 0.5 count as 1) and returns the updated
    /// accumulated map.
    pub fn push(&mut self, map: &ScalarMap) -> Result<ScalarMap> {
        match self.dims {
            Some(d) if d != map.dims() => return Err(Error::dims(d, map.dims())),
            Some(_) => {}
            None => {
                self.dims = Some(map.dims());
                self.counts = vec![0; map.width() * map.height()];
            }
        }
        let bits = map.to_mask(0.5);
        for (c, &b) in self.counts.iter_mut().zip(&bits) {
            *c += b as u32;
        }
        self.window.push_back(bits);
        if self.window.len() > self.omega {
            let old = self.window.pop_front().expect("window is non-empty");
            for (c, &b) in self.counts.iter_mut().zip(&old) {
                *c -= b as u32;
            }
        }
        Ok(self.current())
    }

    /// Mean over the maps in the window; all zeros before the first push.
    pub fn current(&self) -> ScalarMap {
        let (w, h) = self.dims.unwrap_or((0, 0));
        let n = self.window.len().max(1) as f64;
        let values = self.counts.iter().map(|&c| c as f64 / n).collect();
        ScalarMap::from_values(w, h, values).expect("counts match map size")
    }
}

/// Functional form of [`AccumulatorState::push`].
pub fn accumulate(
    mut state: AccumulatorState,
    new_map: &ScalarMap,
) -> Result<(ScalarMap, AccumulatorState)> {
    let out = state.push(new_map)?;
    Ok((out, state))
}
