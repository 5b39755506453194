//! Temperature-dependent quadratic correction to the singlet Hamiltonian.
//!
//! The corrected operator adds (βħ²/4m)·u₂″ to the potential and a
//! first-derivative term (βħ²/2m)·u₂′·∂ᵣ, where u₂ is the pair-only part of
//! the local field. The operator is assembled and identity-checked but never
//! feeds the production tables: the derivative term breaks symmetry and its
//! spectrum is not guaranteed real.

use super::{assemble_hamiltonian, SpatialGrid};
use crate::error::CoreError;
use crate::params::ModelParams;
use crate::potential::{lj_pair, lj_pair_deriv, lj_pair_second_deriv, pair_field_derivs, NeighborContext};
use crate::Result;
use alloc::vec;
use alloc::vec::Vec;

/// General tridiagonal matrix: `sup[i]` couples row i to i+1, `sub[i]` couples
/// row i+1 to i.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralTridiag {
    pub diag: Vec<f64>,
    pub sub: Vec<f64>,
    pub sup: Vec<f64>,
}

/// Assembles the quadratic-corrected operator on the interior grid nodes with
/// centered differences for the first-derivative term.
pub fn assemble_quadratic_hamiltonian(
    ctx: &NeighborContext,
    grid: &SpatialGrid,
    beta: f64,
    params: &ModelParams,
) -> Result<GeneralTridiag> {
    if !(beta >= 0.0) {
        return Err(CoreError::Param("beta must be non-negative".into()));
    }
    let base = assemble_hamiltonian(ctx, grid, params)?;
    let h = grid.spacing();
    let m = base.dim();
    let hb2 = params.hbar * params.hbar / params.mass;
    let mut diag = base.diag.clone();
    let mut sup = base.off.clone();
    let mut sub = base.off.clone();
    for i in 0..m {
        let r = grid.point(i + 1);
        let (d1, d2) = pair_field_derivs(r, ctx, params)?;
        diag[i] += beta * hb2 / 4.0 * d2;
        let grad = beta * hb2 / 2.0 * d1 / (2.0 * h);
        if i < m - 1 {
            sup[i] += grad;
        }
        if i > 0 {
            sub[i - 1] -= grad;
        }
    }
    Ok(GeneralTridiag { diag, sub, sup })
}

/// Pair-only half-weighted local field of particle `j` against every other
/// particle of the frozen configuration, with first and second derivatives.
fn pair_local_field_all(j: usize, r_j: f64, q: &[f64], params: &ModelParams) -> Result<(f64, f64, f64)> {
    let mut u = 0.0;
    let mut d1 = 0.0;
    let mut d2 = 0.0;
    for (k, &qk) in q.iter().enumerate() {
        if k == j {
            continue;
        }
        let d = (r_j - qk).abs();
        let sign = if r_j >= qk { 1.0 } else { -1.0 };
        u += params.pair_share * lj_pair(d, params)?;
        d1 += params.pair_share * lj_pair_deriv(d, params)? * sign;
        d2 += params.pair_share * lj_pair_second_deriv(d, params)?;
    }
    Ok((u, d1, d2))
}

/// Max-norm residual of the quadratic-order operator identity for a small
/// frozen chain: both Hamiltonians are applied twice to `test_fn` by nested
/// centered differences with stencil spacing `h`, the difference is evaluated
/// at r = q and compared against the closed-form correction.
///
/// The verification uses the untruncated local field (every pair shared), so
/// the identity is exact up to discretization for any small N.
pub fn verify_quadratic_identity<F>(positions: &[f64], test_fn: F, h: f64, params: &ModelParams) -> Result<f64>
where
    F: Fn(&[f64]) -> f64,
{
    let n = positions.len();
    if !(2..=3).contains(&n) {
        return Err(CoreError::Param("identity check is for chains of 2 or 3 particles".into()));
    }
    if !(h > 0.0) {
        return Err(CoreError::Param("stencil spacing must be positive".into()));
    }
    for w in positions.windows(2) {
        if !(w[1] > w[0]) {
            return Err(CoreError::Param("positions must be ascending".into()));
        }
    }

    let sho = |r: f64| 0.5 * params.mass * params.omega * params.omega * r * r;
    let u_exact = |r: &[f64]| -> f64 {
        let mut u: f64 = r.iter().map(|&x| sho(x)).sum();
        for a in 0..n {
            for b in (a + 1)..n {
                u += lj_pair((r[b] - r[a]).abs().max(1e-12), params).expect("positive separation");
            }
        }
        u
    };
    let u_local = |r: &[f64]| -> f64 {
        let mut u: f64 = r.iter().map(|&x| sho(x)).sum();
        for (j, &rj) in r.iter().enumerate() {
            u += pair_local_field_all(j, rj, positions, params).expect("positive separation").0;
        }
        u
    };

    let kin = -params.hbar * params.hbar / (2.0 * params.mass);
    let apply = |u: &dyn Fn(&[f64]) -> f64, f: &dyn Fn(&[f64]) -> f64, x: &[f64]| -> f64 {
        let fx = f(x);
        let mut lap = -2.0 * n as f64 * fx;
        let mut y = x.to_vec();
        for j in 0..n {
            y[j] = x[j] + h;
            lap += f(&y);
            y[j] = x[j] - h;
            lap += f(&y);
            y[j] = x[j];
        }
        kin * lap / (h * h) + u(x) * fx
    };

    let h2 = |u: &'_ dyn Fn(&[f64]) -> f64, x: &[f64]| -> f64 {
        let inner = |y: &[f64]| apply(u, &test_fn, y);
        apply(u, &inner, x)
    };

    let lhs = h2(&u_exact, positions) - h2(&u_local, positions);

    // closed-form −2·Δ⁽²⁾ψ at r = q
    let hb2 = params.hbar * params.hbar / params.mass;
    let mut rhs = 0.0;
    let psi0 = test_fn(positions);
    let mut y = positions.to_vec();
    for j in 0..n {
        let (_, d1, d2) = pair_local_field_all(j, positions[j], positions, params)?;
        y[j] = positions[j] + h;
        let fp = test_fn(&y);
        y[j] = positions[j] - h;
        let fm = test_fn(&y);
        y[j] = positions[j];
        let dpsi = (fp - fm) / (2.0 * h);
        rhs += hb2 / 4.0 * d2 * psi0 + hb2 / 2.0 * d1 * dpsi;
    }
    rhs *= -2.0;

    Ok((lhs - rhs).abs())
}
