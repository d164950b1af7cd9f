//! Physical <-> normalized unit conversions for the Manakov system.
//!
//! The change of variables is
//!
//!   q_j = A_j / sqrt(P),   t_n = t / T0,   z = -l / L,
//!
//! with P = |beta2| / ((8/9) gamma T0^2) and L = 2 T0^2 / |beta2|.
//! T0 is the free normalization parameter.

use crate::error::{Error, Result};
use crate::grid::Units;
use crate::signal::DualPolSignal;
use crate::{Complex, SPEED_OF_LIGHT};
use serde::{Deserialize, Serialize};

/// Normalization constants tying the fiber to the dimensionless model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizationParams {
    /// Free time scale T0 (s).
    t0: f64,
    /// Group velocity dispersion (s^2/m), negative in the anomalous regime.
    beta2: f64,
    /// Kerr coefficient (1/(W m)).
    gamma: f64,
}

/// beta2 (s^2/m) from the dispersion parameter D (ps/nm/km) at carrier
/// wavelength lambda_c (m): beta2 = -D lambda_c^2 / (2 pi c).
pub fn beta2_from_dispersion(d_ps_nm_km: f64, lambda_c_m: f64) -> f64 {
    let d_si = d_ps_nm_km * 1e-6; // s/m^2
    -d_si * lambda_c_m * lambda_c_m / (2.0 * std::f64::consts::PI * SPEED_OF_LIGHT)
}

impl NormalizationParams {
    pub fn new(t0: f64, beta2: f64, gamma: f64) -> Result<Self> {
        if !(t0 > 0.0) {
            return Err(Error::InvalidParam(format!("T0 must be positive, got {t0}")));
        }
        if !(beta2 < 0.0) {
            return Err(Error::InvalidParam(format!(
                "beta2 must be negative (anomalous dispersion), got {beta2}"
            )));
        }
        if !(gamma > 0.0) {
            return Err(Error::InvalidParam(format!("gamma must be positive, got {gamma}")));
        }
        Ok(Self { t0, beta2, gamma })
    }

    /// From the dispersion parameter in engineering units.
    pub fn from_fiber(t0_s: f64, d_ps_nm_km: f64, gamma_per_w_km: f64, lambda_c_m: f64) -> Result<Self> {
        Self::new(
            t0_s,
            beta2_from_dispersion(d_ps_nm_km, lambda_c_m),
            gamma_per_w_km * 1e-3,
        )
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn beta2(&self) -> f64 {
        self.beta2
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Power scale P = |beta2| / ((8/9) gamma T0^2) (W).
    pub fn power_scale(&self) -> f64 {
        self.beta2.abs() / ((8.0 / 9.0) * self.gamma * self.t0 * self.t0)
    }

    /// Length scale L = 2 T0^2 / |beta2| (m).
    pub fn length_scale(&self) -> f64 {
        2.0 * self.t0 * self.t0 / self.beta2.abs()
    }

    /// Energy carried by one normalized energy unit: P * T0 (J).
    pub fn energy_scale(&self) -> f64 {
        self.power_scale() * self.t0
    }
}

/// Physical -> normalized: A_j / sqrt(P) on the grid t / T0.
pub fn normalize(signal: &DualPolSignal, params: &NormalizationParams) -> Result<DualPolSignal> {
    convert(signal, params, Units::Physical, Units::Normalized)
}

/// Normalized -> physical: exact inverse of [`normalize`].
pub fn denormalize(signal: &DualPolSignal, params: &NormalizationParams) -> Result<DualPolSignal> {
    convert(signal, params, Units::Normalized, Units::Physical)
}

fn convert(
    signal: &DualPolSignal,
    params: &NormalizationParams,
    from: Units,
    to: Units,
) -> Result<DualPolSignal> {
    if signal.units() != from {
        return Err(Error::UnitsMismatch {
            expected: from,
            found: signal.units(),
        });
    }
    let sqrt_p = params.power_scale().sqrt();
    let (amp, tscale) = match to {
        Units::Normalized => (1.0 / sqrt_p, params.t0),
        Units::Physical => (sqrt_p, 1.0 / params.t0),
    };
    let grid = signal.grid().rescaled(tscale, to);
    let map = |p: &[Complex]| p.iter().map(|&s| s * amp).collect::<Vec<_>>();
    DualPolSignal::new(grid, map(signal.pol(0)), map(signal.pol(1)))
}

/// Normalized propagation coordinate z = -l / L for a physical length l (m).
pub fn map_distance(physical_length_m: f64, params: &NormalizationParams) -> f64 {
    -physical_length_m / params.length_scale()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::TimeGrid;
    use proptest::prelude::*;

    /// Paper-configuration normalization constants.
    pub(crate) fn paper_params() -> NormalizationParams {
        NormalizationParams::from_fiber(244e-12, 22.0, 0.6, 1550e-9).unwrap()
    }

    #[test]
    fn paper_scales_match_arithmetic() {
        let p = paper_params();
        // beta2 = -D lambda^2/(2 pi c) ~ -28.1 ps^2/km
        assert!((p.beta2() * 1e27 - -28.06).abs() < 0.1, "beta2 = {}", p.beta2());
        // P ~ 0.88 mW
        assert!((p.power_scale() * 1e3 - 0.884).abs() < 0.005, "P = {}", p.power_scale());
        // L ~ 4.24e6 m
        assert!((p.length_scale() / 1e6 - 4.243).abs() < 0.01, "L = {}", p.length_scale());
    }

    #[test]
    fn map_distance_values() {
        let p = paper_params();
        assert_eq!(map_distance(0.0, &p), 0.0);
        let l = p.length_scale();
        assert!((map_distance(l, &p) + 1.0).abs() < 1e-15);
        assert!((map_distance(3.2e6, &p) + 0.754).abs() < 1e-3);
        assert!(map_distance(1.0, &p) < 0.0);
    }

    #[test]
    fn zero_signal_stays_zero() {
        let p = paper_params();
        let g = TimeGrid::centered(8e-9, 128, Units::Physical).unwrap();
        let s = DualPolSignal::zeros(g);
        let n = normalize(&s, &p).unwrap();
        assert_eq!(n.energy(), 0.0);
        assert_eq!(n.units(), Units::Normalized);
    }

    #[test]
    fn wrong_units_flag_is_rejected() {
        let p = paper_params();
        let g = TimeGrid::centered(8.0, 128, Units::Normalized).unwrap();
        let s = DualPolSignal::zeros(g);
        assert!(matches!(
            normalize(&s, &p),
            Err(Error::UnitsMismatch { .. })
        ));
    }

    proptest! {
        /// normalize and denormalize are exact inverses, and energy maps as
        /// E_phys = E_norm * P * T0.
        #[test]
        fn round_trip_and_energy_scaling(seed in 0u64..1000) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let p = paper_params();
            let g = TimeGrid::centered(8e-9, 256, Units::Physical).unwrap();
            let mut s = DualPolSignal::zeros(g);
            for j in 0..2 {
                for x in s.pol_mut(j) {
                    *x = Complex::new(rng.gen_range(-1e-2..1e-2), rng.gen_range(-1e-2..1e-2));
                }
            }
            let n = normalize(&s, &p).unwrap();
            let back = denormalize(&n, &p).unwrap();
            let e = s.energy();
            prop_assert!((back.energy() - e).abs() <= 1e-12 * e.max(1e-300));
            for j in 0..2 {
                for (a, b) in s.pol(j).iter().zip(back.pol(j)) {
                    prop_assert!((a - b).norm() <= 1e-12 * a.norm().max(1e-12));
                }
            }
            // energy scaling law
            prop_assert!((e - n.energy() * p.energy_scale()).abs() <= 1e-9 * e.max(1e-300));
        }
    }
}
