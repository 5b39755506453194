//! Force-relaxation eigensolver.
//!
//! Minimizes the energy expectation value state by state: the update
//! direction at each grid point is the residual force −(Hφ − λφ), the step is
//! the exact line-search optimum in the two-dimensional span of φ and the
//! force, and a Gram-Schmidt projection keeps each state orthogonal to the
//! converged ones. Kept as a cross-check against the direct solver.

use super::tridiag::SymTridiag;
use super::{EigenSet, SpatialGrid};
use crate::error::CoreError;
use crate::Result;
use alloc::vec;
use alloc::vec::Vec;
use num_traits::Float;

/// Iteration controls for the relaxation solver.
#[derive(Debug, Clone, Copy)]
pub struct RelaxOptions {
    pub max_iterations: usize,
    pub residual_tol: f64,
}

impl Default for RelaxOptions {
    fn default() -> Self {
        RelaxOptions { max_iterations: 10_000, residual_tol: 1e-9 }
    }
}

/// Lowest `n_states` eigenpairs by relaxation.
pub fn solve_states_relaxation(
    matrix: &SymTridiag,
    grid: &SpatialGrid,
    n_states: usize,
    opts: RelaxOptions,
) -> Result<EigenSet> {
    let m = matrix.dim();
    if m != grid.n_points - 2 {
        return Err(CoreError::Param("matrix dimension does not match grid".into()));
    }
    if n_states == 0 || 2 * n_states > grid.n_points {
        return Err(CoreError::Param("state count exceeds half the grid".into()));
    }
    let scale = {
        let (lo, hi) = matrix.gershgorin_bounds();
        lo.abs().max(hi.abs()).max(1.0)
    };

    let mut states: Vec<Vec<f64>> = Vec::with_capacity(n_states);
    let mut energies = Vec::with_capacity(n_states);
    let mut open_residuals = Vec::new();

    for s in 0..n_states {
        // particle-in-a-box mode as the initial guess
        let mut phi: Vec<f64> = (0..m)
            .map(|i| libm::sin((s as f64 + 1.0) * core::f64::consts::PI * (i as f64 + 1.0) / (m as f64 + 1.0)))
            .collect();
        orthogonalize(&mut phi, &states);
        normalize(&mut phi);

        let mut hphi = vec![0.0; m];
        let mut lambda = 0.0;
        let mut converged = false;
        for _ in 0..opts.max_iterations {
            matrix.mul_vec(&phi, &mut hphi);
            lambda = dot(&phi, &hphi);
            // residual force
            let mut force: Vec<f64> = hphi.iter().zip(&phi).map(|(h, p)| h - lambda * p).collect();
            let res = dot(&force, &force).sqrt();
            if res < opts.residual_tol * scale {
                converged = true;
                break;
            }
            orthogonalize(&mut force, &states);
            // project out the phi component and normalize the search direction
            let c = dot(&force, &phi);
            for (f, p) in force.iter_mut().zip(&phi) {
                *f -= c * p;
            }
            let fnorm = dot(&force, &force).sqrt();
            if fnorm < 1e-300 {
                converged = true;
                break;
            }
            force.iter_mut().for_each(|f| *f /= fnorm);
            // exact Rayleigh minimization in span{phi, force}
            let mut hf = vec![0.0; m];
            matrix.mul_vec(&force, &mut hf);
            let h11 = lambda;
            let h12 = dot(&phi, &hf);
            let h22 = dot(&force, &hf);
            let theta = 0.5 * libm::atan2(2.0 * h12, h11 - h22);
            // the two stationary mixtures; pick the lower Rayleigh quotient
            let (c1, s1) = (libm::cos(theta), libm::sin(theta));
            let e1 = c1 * c1 * h11 + 2.0 * c1 * s1 * h12 + s1 * s1 * h22;
            let (c2, s2) = (-s1, c1);
            let e2 = c2 * c2 * h11 + 2.0 * c2 * s2 * h12 + s2 * s2 * h22;
            let (ca, sa) = if e1 <= e2 { (c1, s1) } else { (c2, s2) };
            for (p, f) in phi.iter_mut().zip(&force) {
                *p = ca * *p + sa * *f;
            }
            orthogonalize(&mut phi, &states);
            normalize(&mut phi);
        }
        if !converged {
            matrix.mul_vec(&phi, &mut hphi);
            lambda = dot(&phi, &hphi);
            let res: f64 = hphi
                .iter()
                .zip(&phi)
                .map(|(h, p)| (h - lambda * p) * (h - lambda * p))
                .sum::<f64>()
                .sqrt();
            open_residuals.push(res);
        }
        energies.push(lambda);
        states.push(phi);
    }

    if !open_residuals.is_empty() {
        return Err(CoreError::Convergence { residuals: open_residuals });
    }

    // relaxation finds states in guess order; sort by energy before embedding
    let mut order: Vec<usize> = (0..n_states).collect();
    order.sort_by(|&a, &b| energies[a].partial_cmp(&energies[b]).expect("finite energies"));
    let energies: Vec<f64> = order.iter().map(|&i| energies[i]).collect();
    let states: Vec<Vec<f64>> = order.iter().map(|&i| states[i].clone()).collect();
    EigenSet::from_interior_vectors(energies, &states, *grid)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &mut [f64]) {
    let n = dot(v, v).sqrt();
    v.iter_mut().for_each(|x| *x /= n);
}

fn orthogonalize(v: &mut [f64], basis: &[Vec<f64>]) {
    for b in basis {
        let c = dot(v, b);
        for (vi, bi) in v.iter_mut().zip(b) {
            *vi -= c * bi;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::{assemble_hamiltonian, solve_states};
    use crate::params::standard_params;
    use crate::potential::NeighborContext;

    #[test]
    fn relaxation_agrees_with_direct_on_sho() {
        let p = standard_params();
        let ell = (p.hbar / (p.mass * p.omega)).sqrt();
        let grid = SpatialGrid::new(-8.0 * ell, 8.0 * ell, 120).unwrap();
        let m = assemble_hamiltonian(&NeighborContext::free(), &grid, &p).unwrap();
        let direct = solve_states(&m, &grid, 6).unwrap();
        let relaxed = solve_states_relaxation(&m, &grid, 6, RelaxOptions::default()).unwrap();
        for n in 0..6 {
            let rel = ((direct.energy(n) - relaxed.energy(n)) / direct.energy(n)).abs();
            assert!(rel < 1e-6, "n={n}: {rel}");
        }
    }
}
