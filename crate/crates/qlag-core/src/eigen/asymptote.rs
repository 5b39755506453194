//! Analytic behavior of the eigenfunction deep in the repulsive core.
//!
//! In the core the eigenfunction has the form ψ(r) = g(r)·exp(a·(r_e/r)⁵)
//! with a = −√(2mεr_e²/25ħ²) and g a power series starting at (r/r_e)³ whose
//! coefficients obey a three-term recurrence. The decay constant also
//! controls the combined commutation function near a frozen neighbor, with ε
//! replaced by the shared pair weight ε/2.

use crate::params::ModelParams;
use alloc::vec;
use alloc::vec::Vec;
use num_traits::Float;

/// Core decay constant −√(2·m·ε_eff·r_e²/(25·ħ²)) for a core of depth ε_eff.
pub fn core_decay_constant(eps_eff: f64, params: &ModelParams) -> f64 {
    -(2.0 * params.mass * eps_eff * params.r_e * params.r_e / (25.0 * params.hbar * params.hbar)).sqrt()
}

/// Power-series coefficients g_0..g_{n_terms−1} of the core ansatz for the
/// full pair potential at energy `energy`. g_n = 0 below n = 3 and g_3 = 1
/// fixes the homogeneous scale.
pub fn core_asymptote_coeffs(energy: f64, n_terms: usize, params: &ModelParams) -> Vec<f64> {
    let mut g = vec![0.0_f64; n_terms];
    if n_terms > 3 {
        g[3] = 1.0;
    }
    let a = core_decay_constant(params.epsilon, params);
    let re2 = params.r_e * params.r_e;
    let c6 = 4.0 * params.mass * params.epsilon * re2 / (params.hbar * params.hbar);
    let ce = 2.0 * params.mass * energy * re2 / (params.hbar * params.hbar);
    for idx in 4..n_terms {
        let n = idx as f64 - 7.0;
        let mut v = c6 * g[idx - 1];
        if idx >= 5 {
            v += (n + 2.0) * (n + 1.0) * g[idx - 5];
        }
        if idx >= 7 {
            v += ce * g[idx - 7];
        }
        g[idx] = v / (10.0 * a * (n + 4.0));
    }
    g
}

/// Evaluates the truncated core ansatz ψ(r) = Σ g_n (r/r_e)ⁿ · exp(a(r_e/r)⁵).
pub fn core_asymptote_eval(coeffs: &[f64], r: f64, params: &ModelParams) -> f64 {
    let t = r / params.r_e;
    let mut series = 0.0;
    let mut tn = 1.0;
    for &g in coeffs {
        series += g * tn;
        tn *= t;
    }
    let a = core_decay_constant(params.epsilon, params);
    series * libm::exp(a * libm::pow(params.r_e / r, 5.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::standard_params;
    use crate::potential::lj_pair;

    #[test]
    fn low_coefficients_fixed_by_construction() {
        let p = standard_params();
        let g = core_asymptote_coeffs(-0.5, 12, &p);
        assert_eq!(&g[..3], &[0.0, 0.0, 0.0]);
        assert_eq!(g[3], 1.0);
    }

    #[test]
    fn decay_constant_values() {
        let p = standard_params();
        let a_full = core_decay_constant(p.epsilon, &p);
        let a_half = core_decay_constant(0.5 * p.epsilon, &p);
        assert!((a_full + 1.98424).abs() < 1e-4);
        assert!((a_half + 1.40307).abs() < 1e-4);
    }

    #[test]
    fn resubstitution_residual_vanishes_with_more_terms() {
        // finite-difference residual of the eigenvalue equation at r = r_e/2
        let p = standard_params();
        let energy = -0.5 * p.epsilon;
        let r0 = 0.5 * p.r_e;
        let h = 1e-5;
        let residual = |n_terms: usize| -> f64 {
            let g = core_asymptote_coeffs(energy, n_terms, &p);
            let psi0 = core_asymptote_eval(&g, r0, &p);
            let psip = core_asymptote_eval(&g, r0 + h, &p);
            let psim = core_asymptote_eval(&g, r0 - h, &p);
            let d2 = (psip - 2.0 * psi0 + psim) / (h * h);
            let res = -p.hbar * p.hbar / (2.0 * p.mass) * d2 + lj_pair(r0, &p).unwrap() * psi0
                - energy * psi0;
            let scale = (lj_pair(r0, &p).unwrap() * psi0).abs() + (energy * psi0).abs();
            res.abs() / scale
        };
        let (r20, r30, r40) = (residual(20), residual(30), residual(40));
        assert!(r30 < r20, "residual should fall: {r20} -> {r30}");
        assert!(r40 < r30, "residual should fall: {r30} -> {r40}");
        assert!(r40 < 1e-4, "converged residual too large: {r40}");
    }
}
