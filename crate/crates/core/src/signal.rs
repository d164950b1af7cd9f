//! Dual-polarization sampled field.

use crate::error::{Error, Result};
use crate::grid::{TimeGrid, Units};
use crate::Complex;

/// Two complex sample sequences on a shared time grid: the field
/// q = (q1, q2). Samples are sqrt(W) when physical, dimensionless when
/// normalized.
#[derive(Debug, Clone, PartialEq)]
pub struct DualPolSignal {
    grid: TimeGrid,
    pol: [Vec<Complex>; 2],
}

impl DualPolSignal {
    pub fn new(grid: TimeGrid, pol1: Vec<Complex>, pol2: Vec<Complex>) -> Result<Self> {
        for p in [&pol1, &pol2] {
            if p.len() != grid.len() {
                return Err(Error::LengthMismatch {
                    expected: grid.len(),
                    found: p.len(),
                });
            }
        }
        Ok(Self { grid, pol: [pol1, pol2] })
    }

    pub fn zeros(grid: TimeGrid) -> Self {
        let z = vec![Complex::default(); grid.len()];
        Self { grid, pol: [z.clone(), z] }
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn units(&self) -> Units {
        self.grid.units()
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn pol(&self, j: usize) -> &[Complex] {
        &self.pol[j]
    }

    pub fn pol_mut(&mut self, j: usize) -> &mut [Complex] {
        &mut self.pol[j]
    }

    pub fn into_pols(self) -> (TimeGrid, Vec<Complex>, Vec<Complex>) {
        let [p1, p2] = self.pol;
        (self.grid, p1, p2)
    }

    /// Instantaneous squared magnitude |q1|^2 + |q2|^2 at sample `i`.
    pub fn intensity(&self, i: usize) -> f64 {
        self.pol[0][i].norm_sqr() + self.pol[1][i].norm_sqr()
    }

    /// Trapezoidal quadrature of |q1|^2 + |q2|^2 over the grid.
    /// Joules when physical, dimensionless when normalized.
    pub fn energy(&self) -> f64 {
        let n = self.len();
        let mut acc = 0.0;
        for i in 0..n {
            let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
            acc += w * self.intensity(i);
        }
        acc * self.grid.dt()
    }

    /// Mean power: energy over grid duration (W when physical).
    pub fn mean_power(&self) -> f64 {
        self.energy() / self.grid.duration()
    }

    /// Largest |q| over both polarizations.
    pub fn peak_amplitude(&self) -> f64 {
        (0..self.len())
            .map(|i| self.intensity(i))
            .fold(0.0_f64, f64::max)
            .sqrt()
    }

    /// Multiply both polarizations by a complex factor.
    pub fn scale(&mut self, g: Complex) {
        for p in &mut self.pol {
            for s in p.iter_mut() {
                *s *= g;
            }
        }
    }

    /// Extract samples [start, start + len) as a new signal on `grid`,
    /// which must have the same dt.
    pub fn window(&self, start: usize, grid: TimeGrid) -> Result<Self> {
        let len = grid.len();
        if start + len > self.len() {
            return Err(Error::LengthMismatch {
                expected: start + len,
                found: self.len(),
            });
        }
        if (grid.dt() - self.grid.dt()).abs() > 1e-12 * self.grid.dt() {
            return Err(Error::InvalidParam("window grid dt differs from signal dt".into()));
        }
        Ok(Self {
            grid,
            pol: [
                self.pol[0][start..start + len].to_vec(),
                self.pol[1][start..start + len].to_vec(),
            ],
        })
    }
}
