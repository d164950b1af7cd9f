//! FFT helpers scaled as continuous Fourier transforms on a [`TimeGrid`].
//!
//! Conventions: X(f) = integral x(t) exp(-2 pi i f t) dt and its inverse
//! x(t) = integral X(f) exp(+2 pi i f t) df, approximated by the grid sums.
//! Frequency axes are returned in ascending (fftshifted) order.

use crate::grid::TimeGrid;
use crate::Complex;
use rustfft::{Fft, FftPlanner};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

type PlanKey = (usize, bool); // (length, inverse)

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    static PLANS: OnceLock<Mutex<HashMap<PlanKey, Arc<dyn Fft<f64>>>>> = OnceLock::new();
    let cache = PLANS.get_or_init(|| Mutex::new(HashMap::new()));
    let mut cache = cache.lock().unwrap();
    cache
        .entry((n, inverse))
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            if inverse {
                planner.plan_fft_inverse(n)
            } else {
                planner.plan_fft_forward(n)
            }
        })
        .clone()
}

/// Unnormalized in-place FFT (sum x_n exp(-2 pi i k n / N)).
pub fn fft_in_place(x: &mut [Complex]) {
    plan(x.len(), false).process(x);
}

/// In-place inverse FFT normalized by 1/N.
pub fn ifft_in_place(x: &mut [Complex]) {
    plan(x.len(), true).process(x);
    let scale = 1.0 / x.len() as f64;
    for v in x.iter_mut() {
        *v *= scale;
    }
}

/// Frequencies of the shifted FFT bins, ascending: (k - N/2) / (N dt).
pub fn fft_freqs(grid: &TimeGrid) -> Vec<f64> {
    let n = grid.len();
    let df = 1.0 / (n as f64 * grid.dt());
    (0..n).map(|k| (k as f64 - (n / 2) as f64) * df).collect()
}

/// Angular frequencies in natural (unshifted) FFT order, for split-step use.
pub fn angular_freqs_unshifted(n: usize, dt: f64) -> Vec<f64> {
    let dw = 2.0 * std::f64::consts::PI / (n as f64 * dt);
    (0..n)
        .map(|k| {
            let k = if k <= (n - 1) / 2 { k as isize } else { k as isize - n as isize };
            k as f64 * dw
        })
        .collect()
}

/// Continuous-scaled forward transform sampled at [`fft_freqs`].
pub fn forward_ft(grid: &TimeGrid, x: &[Complex]) -> Vec<Complex> {
    assert_eq!(x.len(), grid.len());
    let n = grid.len();
    // Pre-twiddle by (-1)^n shifts the output to centered bins.
    let mut y: Vec<Complex> = x
        .iter()
        .enumerate()
        .map(|(i, &v)| if i % 2 == 0 { v } else { -v })
        .collect();
    fft_in_place(&mut y);
    let dt = grid.dt();
    let t0 = grid.t_start();
    for (m, f) in fft_freqs(grid).into_iter().enumerate() {
        let phase = Complex::from_polar(dt, -2.0 * std::f64::consts::PI * f * t0);
        y[m] *= phase;
    }
    debug_assert_eq!(y.len(), n);
    y
}

/// Inverse of [`forward_ft`]: reconstruct time samples from centered bins.
pub fn inverse_ft(grid: &TimeGrid, spectrum: &[Complex]) -> Vec<Complex> {
    assert_eq!(spectrum.len(), grid.len());
    let n = grid.len();
    let t0 = grid.t_start();
    let mut z: Vec<Complex> = fft_freqs(grid)
        .into_iter()
        .zip(spectrum)
        .map(|(f, &s)| s * Complex::from_polar(1.0, 2.0 * std::f64::consts::PI * f * t0))
        .collect();
    plan(n, true).process(&mut z);
    let df = 1.0 / (n as f64 * grid.dt());
    for (i, v) in z.iter_mut().enumerate() {
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        *v *= sign * df;
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Units;

    #[test]
    fn round_trip_is_identity() {
        let grid = TimeGrid::centered(12.8, 160, Units::Normalized).unwrap();
        let x: Vec<Complex> = grid
            .times()
            .map(|t| Complex::new((-t * t / 3.0).exp(), 0.2 * t.sin()))
            .collect();
        let spec = forward_ft(&grid, &x);
        let back = inverse_ft(&grid, &spec);
        for (a, b) in x.iter().zip(&back) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn gaussian_transform_matches_closed_form() {
        // x(t) = exp(-a t^2) has X(f) = sqrt(pi/a) exp(-(pi f)^2 / a).
        let a = 0.7;
        let grid = TimeGrid::centered(40.0, 512, Units::Normalized).unwrap();
        let x: Vec<Complex> = grid.times().map(|t| Complex::new((-a * t * t).exp(), 0.0)).collect();
        let spec = forward_ft(&grid, &x);
        for (f, s) in fft_freqs(&grid).into_iter().zip(&spec) {
            let expect = (std::f64::consts::PI / a).sqrt()
                * (-(std::f64::consts::PI * f).powi(2) / a).exp();
            assert!(
                (s.re - expect).abs() < 1e-9 && s.im.abs() < 1e-9,
                "f = {f}: got {s}, expected {expect}"
            );
        }
    }

    #[test]
    fn parseval_energy_balance() {
        let grid = TimeGrid::centered(20.0, 256, Units::Normalized).unwrap();
        let x: Vec<Complex> = grid
            .times()
            .map(|t| Complex::new((-t * t).exp(), (0.5 * t).cos() * (-t * t / 2.0).exp()))
            .collect();
        let e_time: f64 = x.iter().map(|v| v.norm_sqr()).sum::<f64>() * grid.dt();
        let spec = forward_ft(&grid, &x);
        let df = 1.0 / grid.duration();
        let e_freq: f64 = spec.iter().map(|v| v.norm_sqr()).sum::<f64>() * df;
        assert!((e_time - e_freq).abs() < 1e-10 * e_time);
    }
}
