//! Reduced-unit model parameters.
//!
//! Internally ε = r_e = m = 1 throughout. The two dimensionless inputs are
//! the de Broglie parameter Λ = 2^{1/6}·ħ/(r_e·√(mε)) and the relative trap
//! frequency ω·r_e·√(m/ε); everything else is derived from them.

use crate::error::CoreError;
use crate::Result;
use alloc::format;
use num_traits::Float;

/// Physical constants of the trapped Lennard-Jones chain in reduced units.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    /// Lennard-Jones well depth (1 in reduced units).
    pub epsilon: f64,
    /// Lennard-Jones minimum position (1 in reduced units).
    pub r_e: f64,
    /// Particle mass (1 in reduced units).
    pub mass: f64,
    /// Reduced Planck constant, Λ·r_e·√(mε)/2^{1/6}.
    pub hbar: f64,
    /// Trap angular frequency.
    pub omega: f64,
    /// Inverse temperature 1/k_BT.
    pub beta: f64,
    /// System span; particles live on [-L/2, L/2].
    pub length: f64,
    /// Core cutoff: grids stop a distance r_min from each frozen neighbor.
    pub r_min: f64,
    /// Fraction of a pair potential assigned to each partner's local field.
    /// ½ for identical masses; m_k/(m_j+m_k) in general.
    pub pair_share: f64,
}

impl ModelParams {
    /// Thermal energy scale ħω.
    pub fn hbar_omega(&self) -> f64 {
        self.hbar * self.omega
    }

    /// Dimensionless temperature label βħω.
    pub fn beta_hw(&self) -> f64 {
        self.beta * self.hbar_omega()
    }

    /// Curvature frequency of the pair potential at its minimum,
    /// ω_LJ = √(u″(r_e)/m) with u″(r_e) = 72·ε/r_e².
    pub fn omega_lj(&self) -> f64 {
        (72.0 * self.epsilon / (self.mass * self.r_e * self.r_e)).sqrt()
    }

    /// Returns a copy with the inverse temperature replaced.
    pub fn with_beta(&self, beta: f64) -> Result<ModelParams> {
        if !(beta > 0.0) {
            return Err(CoreError::Param(format!("beta must be positive, got {beta}")));
        }
        let mut p = self.clone();
        p.beta = beta;
        Ok(p)
    }

    /// Returns a copy with β set from the dimensionless label βħω.
    pub fn with_beta_hw(&self, beta_hw: f64) -> Result<ModelParams> {
        self.with_beta(beta_hw / self.hbar_omega())
    }

    /// Returns a copy with system span and core cutoff replaced.
    pub fn with_box_geometry(&self, length: f64, r_min: f64) -> Result<ModelParams> {
        let mut p = self.clone();
        p.length = length;
        p.r_min = r_min;
        p.validate()?;
        Ok(p)
    }

    /// Checks every invariant the rest of the crate relies on.
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("epsilon", self.epsilon),
            ("r_e", self.r_e),
            ("mass", self.mass),
            ("hbar", self.hbar),
            ("omega", self.omega),
            ("beta", self.beta),
            ("length", self.length),
            ("r_min", self.r_min),
            ("pair_share", self.pair_share),
        ];
        for (name, v) in fields {
            if !(v > 0.0) || !v.is_finite() {
                return Err(CoreError::Param(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if self.r_min >= self.r_e {
            return Err(CoreError::Param(format!(
                "r_min must be below r_e ({} >= {})",
                self.r_min, self.r_e
            )));
        }
        if self.length < 8.0 * self.r_e {
            return Err(CoreError::Param(format!(
                "system span too small: L = {} < 8 r_e",
                self.length
            )));
        }
        Ok(())
    }
}

/// Builds the reduced-unit constants from the de Broglie parameter and the
/// relative trap frequency. ε = r_e = m = 1, ħ = λ/2^{1/6}, ω = ω_rel;
/// β defaults to 1 and is replaced per run.
pub fn derive_reduced_units(lambda_db: f64, omega_rel: f64) -> Result<ModelParams> {
    if !(lambda_db > 0.0) || !lambda_db.is_finite() {
        return Err(CoreError::Param(format!("lambda_dB must be positive, got {lambda_db}")));
    }
    if !(omega_rel > 0.0) || !omega_rel.is_finite() {
        return Err(CoreError::Param(format!("omega_rel must be positive, got {omega_rel}")));
    }
    let p = ModelParams {
        epsilon: 1.0,
        r_e: 1.0,
        mass: 1.0,
        hbar: lambda_db / f64::powf(2.0, 1.0 / 6.0),
        omega: omega_rel,
        beta: 1.0,
        length: 10.0,
        r_min: 0.75,
        pair_share: 0.5,
    };
    p.validate()?;
    Ok(p)
}

/// The standard parameter point used throughout: Λ = 0.16, ω_rel = 1/2.
pub fn standard_params() -> ModelParams {
    derive_reduced_units(0.16, 0.5).expect("standard parameters are valid")
}
