//! Nonlinear spectrum containers and the lambda grid used for synthesis.

use crate::error::{Error, Result};
use crate::fourier::fft_freqs;
use crate::grid::TimeGrid;
use crate::Complex;

/// One discrete (solitonic) spectral component: an eigenvalue in the upper
/// half plane with its 2-vector scattering coefficient b.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscreteMode {
    pub lambda: Complex,
    pub b: [Complex; 2],
}

impl DiscreteMode {
    pub fn new(lambda: Complex, b: [Complex; 2]) -> Result<Self> {
        if !(lambda.im > 0.0) {
            return Err(Error::InvalidParam(format!(
                "discrete eigenvalue must lie in the upper half plane, got {lambda}"
            )));
        }
        Ok(Self { lambda, b })
    }

    pub fn b_norm(&self) -> f64 {
        (self.b[0].norm_sqr() + self.b[1].norm_sqr()).sqrt()
    }

    /// Temporal center of the solitonic component this mode generates from
    /// vacuum: t0 = ln ||b|| / (2 Im lambda).
    pub fn soliton_center(&self) -> f64 {
        self.b_norm().ln() / (2.0 * self.lambda.im)
    }
}

/// Continuous part rho(lambda) on a real grid plus discrete modes.
#[derive(Debug, Clone, PartialEq)]
pub struct NonlinearSpectrum {
    pub lambda_grid: Vec<f64>,
    pub rho: [Vec<Complex>; 2],
    pub discrete: Vec<DiscreteMode>,
}

impl NonlinearSpectrum {
    pub fn new(
        lambda_grid: Vec<f64>,
        rho: [Vec<Complex>; 2],
        discrete: Vec<DiscreteMode>,
    ) -> Result<Self> {
        for r in &rho {
            if r.len() != lambda_grid.len() {
                return Err(Error::LengthMismatch {
                    expected: lambda_grid.len(),
                    found: r.len(),
                });
            }
        }
        Ok(Self { lambda_grid, rho, discrete })
    }

    /// Energy carried by the continuous part:
    /// (1/pi) integral ln(1 + |rho1|^2 + |rho2|^2) d lambda (trapezoidal).
    pub fn continuous_energy(&self) -> f64 {
        continuous_energy(&self.lambda_grid, &self.rho)
    }

    /// Energy carried by the discrete part: 4 sum Im(lambda_k).
    pub fn discrete_energy(&self) -> f64 {
        self.discrete.iter().map(|m| 4.0 * m.lambda.im).sum()
    }
}

pub fn continuous_energy(lambda_grid: &[f64], rho: &[Vec<Complex>; 2]) -> f64 {
    let n = lambda_grid.len();
    if n < 2 {
        return 0.0;
    }
    let mut acc = 0.0;
    let f = |i: usize| (1.0 + rho[0][i].norm_sqr() + rho[1][i].norm_sqr()).ln();
    for i in 0..n - 1 {
        acc += 0.5 * (f(i) + f(i + 1)) * (lambda_grid[i + 1] - lambda_grid[i]);
    }
    acc / std::f64::consts::PI
}

/// Spectral grid tying nonlinear frequencies lambda = -pi f to the FFT bins
/// of a time grid, restricted to |f| <= f_max. Lambdas are ascending, so the
/// associated linear-frequency bins run descending.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaGrid {
    grid: TimeGrid,
    lambdas: Vec<f64>,
    bins: Vec<usize>, // index into ascending-frequency (shifted) arrays
}

impl LambdaGrid {
    pub fn new(grid: &TimeGrid, f_max: f64) -> Result<Self> {
        if !(f_max > 0.0) {
            return Err(Error::InvalidParam(format!("f_max must be positive, got {f_max}")));
        }
        let freqs = fft_freqs(grid);
        let mut pairs: Vec<(f64, usize)> = freqs
            .iter()
            .enumerate()
            .filter(|(_, f)| f.abs() <= f_max)
            .map(|(m, &f)| (-std::f64::consts::PI * f, m))
            .collect();
        if pairs.len() < 2 {
            return Err(Error::InvalidParam(
                "f_max below the grid's frequency resolution".into(),
            ));
        }
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let (lambdas, bins) = pairs.into_iter().unzip();
        Ok(Self { grid: *grid, lambdas, bins })
    }

    pub fn time_grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    /// Map rho on this grid to the full-length linear spectrum
    /// S_j(f) = -conj(rho_j(-pi f)), zero outside the grid.
    pub fn to_linear_spectrum(&self, rho: &[Vec<Complex>; 2]) -> [Vec<Complex>; 2] {
        let mut out = [
            vec![Complex::default(); self.grid.len()],
            vec![Complex::default(); self.grid.len()],
        ];
        for j in 0..2 {
            for (i, &m) in self.bins.iter().enumerate() {
                out[j][m] = -rho[j][i].conj();
            }
        }
        out
    }

    /// Inverse of [`Self::to_linear_spectrum`]: sample the linear spectrum
    /// onto this lambda grid as rho_j(lambda) = -conj(S_j(-lambda/pi)).
    pub fn from_linear_spectrum(&self, spectrum: &[Vec<Complex>; 2]) -> [Vec<Complex>; 2] {
        let mut rho = [
            vec![Complex::default(); self.len()],
            vec![Complex::default(); self.len()],
        ];
        for j in 0..2 {
            for (i, &m) in self.bins.iter().enumerate() {
                rho[j][i] = -spectrum[j][m].conj();
            }
        }
        rho
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Units;

    #[test]
    fn lambda_grid_is_ascending_and_symmetric() {
        let g = TimeGrid::centered(32.0, 128, Units::Normalized).unwrap();
        let lg = LambdaGrid::new(&g, 1.0).unwrap();
        let l = lg.lambdas();
        assert!(l.windows(2).all(|w| w[1] > w[0]));
        assert!(l[0] < 0.0 && *l.last().unwrap() > 0.0);
        // lambda = -pi f: max |lambda| <= pi * f_max
        assert!(l.iter().all(|x| x.abs() <= std::f64::consts::PI + 1e-12));
    }

    #[test]
    fn linear_map_round_trip() {
        let g = TimeGrid::centered(32.0, 64, Units::Normalized).unwrap();
        let lg = LambdaGrid::new(&g, 0.8).unwrap();
        let rho = [
            (0..lg.len()).map(|i| Complex::new(i as f64, -0.5)).collect::<Vec<_>>(),
            (0..lg.len()).map(|i| Complex::new(0.1, i as f64 * 0.2)).collect::<Vec<_>>(),
        ];
        let spec = lg.to_linear_spectrum(&rho);
        let back = lg.from_linear_spectrum(&spec);
        for j in 0..2 {
            for (a, b) in rho[j].iter().zip(&back[j]) {
                assert!((a - b).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn discrete_mode_rejects_lower_half_plane() {
        assert!(DiscreteMode::new(Complex::new(0.1, -0.2), [Complex::default(); 2]).is_err());
        assert!(DiscreteMode::new(Complex::new(0.0, 0.3), [Complex::default(); 2]).is_ok());
    }

    #[test]
    fn soliton_center_formula() {
        let m = DiscreteMode::new(
            Complex::new(0.0, 0.3),
            [Complex::new(5.0, 0.0), Complex::new(0.0, 5.0)],
        )
        .unwrap();
        // ||b|| = 5 sqrt(2) -> t0 = ln(5 sqrt 2) / 0.6
        assert!((m.soliton_center() - (5.0 * 2f64.sqrt()).ln() / 0.6).abs() < 1e-12);
    }
}
