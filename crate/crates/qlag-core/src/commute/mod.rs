//! The complex combined singlet commutation function w̃(q,p|q′,q″).
//!
//! For one cell the spectral sum over eigenstates gives
//! e^{w̃} = Σ_n e^{−βE_n} φ_n(q) φ̌_n(p) / e^{ipq/ħ}, with φ̌ the direct
//! (non-FFT) Fourier transform of the eigenfunction. The stored quantity is
//! the logarithm w̃ itself: its real part is the Monte Carlo umbrella
//! exponent and both parts interpolate far more gently than e^{w̃}, whose
//! core behavior requires a delicate cancelation between large terms.
//!
//! Tables hold p ≥ 0 only; negative momenta are served by conjugation. The
//! imaginary part is unwrapped along the momentum axis (and along the p = 0
//! base line in q) so that linear interpolation never straddles a 2π jump.

mod baseline;
mod plane;
mod table;

pub use baseline::{fit_harmonic_cell, harmonic_baseline_table, harmonic_cell_eigenset, HarmonicFit};
pub use plane::{build_cell_plane, combined_w_point, momentum_projection, CellPlane};
pub use table::{
    build_commutation_table, interpolate_w, BuildStats, CommutationTable, CommutationTableSpec,
};

use crate::error::CoreError;
use crate::Result;
use alloc::format;
use num_traits::Float;

/// Uniform momentum grid on [0, p_max] with p_max set by a kinetic-energy cap
/// β·p_max²/2m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumGrid {
    pub p_max: f64,
    pub n_points: usize,
}

impl MomentumGrid {
    /// Grid reaching the kinetic cap `beta_k_max` (in units of 1/β).
    pub fn from_kinetic_cap(beta: f64, beta_k_max: f64, n_points: usize, mass: f64) -> Result<Self> {
        if !(beta > 0.0) || !(beta_k_max > 0.0) {
            return Err(CoreError::Param("beta and kinetic cap must be positive".into()));
        }
        let g = MomentumGrid { p_max: (2.0 * mass * beta_k_max / beta).sqrt(), n_points };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_points < 32 {
            return Err(CoreError::Param(format!(
                "momentum grid needs at least 32 points, got {}",
                self.n_points
            )));
        }
        if !(self.p_max > 0.0) || !self.p_max.is_finite() {
            return Err(CoreError::Param("p_max must be positive".into()));
        }
        Ok(())
    }

    pub fn spacing(&self) -> f64 {
        self.p_max / (self.n_points - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        self.spacing() * i as f64
    }

    /// Bracketing index and fraction for |p|; `None` beyond the cap.
    pub fn locate(&self, p_abs: f64) -> Option<(usize, f64)> {
        if !(0.0..=self.p_max).contains(&p_abs) {
            return None;
        }
        let t = p_abs / self.spacing();
        let mut i = t as usize;
        if i >= self.n_points - 1 {
            i = self.n_points - 2;
        }
        Some((i, t - i as f64))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kinetic_cap_fixes_pmax() {
        let g = MomentumGrid::from_kinetic_cap(14.0, 50.0, 64, 1.0).unwrap();
        assert!((14.0 * g.p_max * g.p_max / 2.0 - 50.0).abs() < 1e-12);
        assert!(MomentumGrid::from_kinetic_cap(14.0, 50.0, 16, 1.0).is_err());
    }

    #[test]
    fn locate_brackets() {
        let g = MomentumGrid { p_max: 3.0, n_points: 61 };
        let (i, f) = g.locate(1.23).unwrap();
        assert!((g.point(i) + f * g.spacing() - 1.23).abs() < 1e-12);
        assert!(g.locate(3.2).is_none());
        assert_eq!(g.locate(3.0).unwrap().0, g.n_points - 2);
    }
}
