//! Uniform time grids with an explicit units flag.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Whether samples and grid spacing are in SI units (seconds, sqrt(W)) or in
/// the dimensionless units of the normalized Manakov system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    Physical,
    Normalized,
}

/// Uniform sampling grid: `n` samples at `t_start + i * dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t_start: f64,
    dt: f64,
    n: usize,
    units: Units,
}

impl TimeGrid {
    pub fn new(t_start: f64, dt: f64, n: usize, units: Units) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() || !t_start.is_finite() {
            return Err(Error::InvalidParam(format!("bad grid spacing dt = {dt}")));
        }
        if n < 2 {
            return Err(Error::InvalidParam(format!("grid needs >= 2 samples, got {n}")));
        }
        Ok(Self { t_start, dt, n, units })
    }

    /// Grid spanning `duration` with the sample set symmetric about t = 0
    /// (samples at the cell midpoints, so t_start + t_last = 0). Scattering
    /// boundary conditions reference both grid ends; keeping them symmetric
    /// keeps the forward and inverse transforms on the same time origin.
    pub fn centered(duration: f64, n: usize, units: Units) -> Result<Self> {
        let dt = duration / n as f64;
        Self::new(-duration / 2.0 + dt / 2.0, dt, n, units)
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false // n >= 2 by construction
    }

    pub fn units(&self) -> Units {
        self.units
    }

    /// Time of sample `i`.
    pub fn t(&self, i: usize) -> f64 {
        self.t_start + i as f64 * self.dt
    }

    /// Time of the last sample.
    pub fn t_last(&self) -> f64 {
        self.t(self.n - 1)
    }

    /// Total duration `n * dt` (one sample period past the last sample).
    pub fn duration(&self) -> f64 {
        self.n as f64 * self.dt
    }

    pub fn sample_rate(&self) -> f64 {
        1.0 / self.dt
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.t(i))
    }

    /// Same sampling with a different units flag and scale: `t -> t / scale`.
    pub(crate) fn rescaled(&self, scale: f64, units: Units) -> Self {
        Self {
            t_start: self.t_start / scale,
            dt: self.dt / scale,
            n: self.n,
            units,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_degenerate_grids() {
        assert!(TimeGrid::new(0.0, 0.0, 16, Units::Normalized).is_err());
        assert!(TimeGrid::new(0.0, -1.0, 16, Units::Normalized).is_err());
        assert!(TimeGrid::new(0.0, 1.0, 1, Units::Normalized).is_err());
    }

    #[test]
    fn centered_grid_symmetry() {
        let g = TimeGrid::centered(8.0, 16, Units::Normalized).unwrap();
        assert_eq!(g.len(), 16);
        assert!((g.duration() - 8.0).abs() < 1e-15);
        // sample set is symmetric about zero
        assert!((g.t(0) + g.t_last()).abs() < 1e-12);
        assert!((g.t(0) + 3.75).abs() < 1e-12);
    }
}
