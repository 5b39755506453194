//! Trap and pair potentials, effective local fields, and classical
//! Hamiltonians of the ordered 1D chain.
//!
//! The local field felt by one particle carries half of each pair potential
//! (the share is `pair_share` in general) so that the summed singlet fields
//! plus the beyond-nearest-neighbor potential reproduce the exact total
//! potential for every configuration.

use crate::error::CoreError;
use crate::params::ModelParams;
use crate::Result;
use alloc::format;
use alloc::vec::Vec;

/// Harmonic trap potential ½·m·ω²·r².
pub fn sho_potential(r: f64, params: &ModelParams) -> f64 {
    0.5 * params.mass * params.omega * params.omega * r * r
}

/// Lennard-Jones pair potential ε·[(r_e/d)¹² − 2(r_e/d)⁶], minimum −ε at d = r_e.
pub fn lj_pair(d: f64, params: &ModelParams) -> Result<f64> {
    if !(d > 0.0) {
        return Err(CoreError::Domain(format!("pair separation must be positive, got {d}")));
    }
    let s6 = libm::pow(params.r_e / d, 6.0);
    Ok(params.epsilon * (s6 * s6 - 2.0 * s6))
}

/// First derivative of the pair potential with respect to separation.
pub fn lj_pair_deriv(d: f64, params: &ModelParams) -> Result<f64> {
    if !(d > 0.0) {
        return Err(CoreError::Domain(format!("pair separation must be positive, got {d}")));
    }
    let s6 = libm::pow(params.r_e / d, 6.0);
    Ok(params.epsilon * (-12.0 * s6 * s6 + 12.0 * s6) / d)
}

/// Second derivative of the pair potential with respect to separation.
pub fn lj_pair_second_deriv(d: f64, params: &ModelParams) -> Result<f64> {
    if !(d > 0.0) {
        return Err(CoreError::Domain(format!("pair separation must be positive, got {d}")));
    }
    let s6 = libm::pow(params.r_e / d, 6.0);
    Ok(params.epsilon * (156.0 * s6 * s6 - 84.0 * s6) / (d * d))
}

/// Frozen-neighbor positions bracketing one particle. Interior particles have
/// both; chain ends have one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeighborContext {
    /// Left neighbor position q′ (below the particle), if any.
    pub left: Option<f64>,
    /// Right neighbor position q″ (above the particle), if any.
    pub right: Option<f64>,
}

impl NeighborContext {
    /// Interior context with neighbors on both sides.
    pub fn interior(left: f64, right: f64) -> Self {
        NeighborContext { left: Some(left), right: Some(right) }
    }

    /// Terminal context for the leftmost particle (right neighbor only).
    pub fn terminal_left(right: f64) -> Self {
        NeighborContext { left: None, right: Some(right) }
    }

    /// Terminal context for the rightmost particle (left neighbor only).
    pub fn terminal_right(left: f64) -> Self {
        NeighborContext { left: Some(left), right: None }
    }

    /// Context with no neighbors at all: the bare trap. Physical chains never
    /// produce this, but the trap-only case is the analytic benchmark.
    pub fn free() -> Self {
        NeighborContext { left: None, right: None }
    }

    /// Checks the bracketing invariants against the model geometry: at least
    /// one neighbor present, and an interior gap of at least 2·r_min.
    pub fn validate(&self, params: &ModelParams) -> Result<()> {
        match (self.left, self.right) {
            (None, None) => Err(CoreError::Param("context must carry at least one neighbor".into())),
            (Some(l), Some(r)) if r - l < 2.0 * params.r_min => Err(CoreError::Param(format!(
                "neighbor gap {} below 2 r_min = {}",
                r - l,
                2.0 * params.r_min
            ))),
            _ => Ok(()),
        }
    }
}

/// Effective local field u(r|q′,q″): trap plus the neighbor pair potentials
/// weighted by `pair_share`.
pub fn local_field(r: f64, ctx: &NeighborContext, params: &ModelParams) -> Result<f64> {
    let mut u = sho_potential(r, params);
    if let Some(l) = ctx.left {
        if r <= l {
            return Err(CoreError::Domain(format!("r = {r} not above left neighbor {l}")));
        }
        u += params.pair_share * lj_pair(r - l, params)?;
    }
    if let Some(rt) = ctx.right {
        if r >= rt {
            return Err(CoreError::Domain(format!("r = {r} not below right neighbor {rt}")));
        }
        u += params.pair_share * lj_pair(rt - r, params)?;
    }
    Ok(u)
}

/// First and second derivatives of the pair-only part of the local field,
/// u₂(r|q′,q″) = share·[u⁽²⁾(r−q′) + u⁽²⁾(q″−r)]. The trap is excluded.
pub fn pair_field_derivs(r: f64, ctx: &NeighborContext, params: &ModelParams) -> Result<(f64, f64)> {
    let mut d1 = 0.0;
    let mut d2 = 0.0;
    if let Some(l) = ctx.left {
        d1 += params.pair_share * lj_pair_deriv(r - l, params)?;
        d2 += params.pair_share * lj_pair_second_deriv(r - l, params)?;
    }
    if let Some(rt) = ctx.right {
        d1 -= params.pair_share * lj_pair_deriv(rt - r, params)?;
        d2 += params.pair_share * lj_pair_second_deriv(rt - r, params)?;
    }
    Ok((d1, d2))
}

/// Classical singlet Hamiltonian H⁽¹⁾(q,p|q′,q″) = p²/2m + u(q|q′,q″).
pub fn singlet_hamiltonian(q: f64, p: f64, ctx: &NeighborContext, params: &ModelParams) -> Result<f64> {
    Ok(p * p / (2.0 * params.mass) + local_field(q, ctx, params)?)
}

/// An ordered phase-space configuration q₁ < q₂ < … < q_N with momenta.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseConfig {
    /// Strictly ascending particle positions.
    pub positions: Vec<f64>,
    /// Particle momenta.
    pub momenta: Vec<f64>,
}

impl PhaseConfig {
    /// Validates ordering, box membership, and N ≥ 2.
    pub fn new(positions: Vec<f64>, momenta: Vec<f64>, params: &ModelParams) -> Result<Self> {
        if positions.len() < 2 {
            return Err(CoreError::Param(format!("need at least 2 particles, got {}", positions.len())));
        }
        if positions.len() != momenta.len() {
            return Err(CoreError::Param("positions and momenta lengths differ".into()));
        }
        let half = params.length / 2.0;
        for w in positions.windows(2) {
            if !(w[1] > w[0]) {
                return Err(CoreError::Param(format!("positions not strictly ascending: {} !< {}", w[0], w[1])));
            }
        }
        for &q in &positions {
            if q < -half || q > half {
                return Err(CoreError::Param(format!("position {q} outside [-L/2, L/2]")));
            }
        }
        Ok(PhaseConfig { positions, momenta })
    }

    /// Number of particles.
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    /// True when the configuration is empty (never for validated configs).
    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Neighbor context of particle `j`: its immediate neighbors in the chain.
    pub fn context_of(&self, j: usize) -> NeighborContext {
        NeighborContext {
            left: if j > 0 { Some(self.positions[j - 1]) } else { None },
            right: if j + 1 < self.len() { Some(self.positions[j + 1]) } else { None },
        }
    }
}

/// Pair interactions beyond nearest neighbors: Σ_j Σ_{k≥j+2} u⁽²⁾(q_k − q_j).
pub fn nnn_potential(config: &PhaseConfig, params: &ModelParams) -> f64 {
    let q = &config.positions;
    let mut u = 0.0;
    for j in 0..q.len() {
        for k in (j + 2)..q.len() {
            // ordered config: q[k] - q[j] >= 2 r_min > 0
            u += lj_pair(q[k] - q[j], params).expect("ordered separations are positive");
        }
    }
    u
}

/// Total potential energy of the configuration: trap plus every pair.
pub fn total_potential(config: &PhaseConfig, params: &ModelParams) -> f64 {
    let q = &config.positions;
    let mut u: f64 = q.iter().map(|&qi| sho_potential(qi, params)).sum();
    for j in 0..q.len() {
        for k in (j + 1)..q.len() {
            u += lj_pair(q[k] - q[j], params).expect("ordered separations are positive");
        }
    }
    u
}

/// Total classical Hamiltonian H = Σ p²/2m + U(q).
pub fn total_hamiltonian(config: &PhaseConfig, params: &ModelParams) -> f64 {
    let kinetic: f64 = config.momenta.iter().map(|&p| p * p / (2.0 * params.mass)).sum();
    kinetic + total_potential(config, params)
}
