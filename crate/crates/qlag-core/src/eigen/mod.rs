//! Single-particle Schrödinger eigenproblems in the effective local field.
//!
//! Each neighbor pair (q′, q″) defines a band q′+r_min ≤ r ≤ q″−r_min. The
//! Hamiltonian is discretized with a three-point Laplacian and zero boundary
//! values, and the lowest states are obtained either by direct tridiagonal
//! diagonalization (default) or by the force-relaxation iteration kept as a
//! cross-check.

pub mod asymptote;
pub mod quad;
mod relax;
mod table;
mod tridiag;

pub use relax::{solve_states_relaxation, RelaxOptions};
pub use table::{
    build_eigen_table, cell_ids, solve_cell, CellFailure, CellId, EigenTable, EigenTableSpec,
    NeighborGrids, UniformAxis,
};
pub use tridiag::SymTridiag;

use crate::error::CoreError;
use crate::params::ModelParams;
use crate::potential::{local_field, NeighborContext};
use crate::Result;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use num_traits::Float;

/// Uniform spatial grid including both endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialGrid {
    pub r_lo: f64,
    pub r_hi: f64,
    pub n_points: usize,
}

impl SpatialGrid {
    pub fn new(r_lo: f64, r_hi: f64, n_points: usize) -> Result<Self> {
        let g = SpatialGrid { r_lo, r_hi, n_points };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_points < 16 {
            return Err(CoreError::Param(format!("grid needs at least 16 points, got {}", self.n_points)));
        }
        if !(self.spacing() > 0.0) || !self.spacing().is_finite() {
            return Err(CoreError::Param(format!(
                "grid spacing must be positive ({} .. {})",
                self.r_lo, self.r_hi
            )));
        }
        Ok(())
    }

    pub fn spacing(&self) -> f64 {
        (self.r_hi - self.r_lo) / (self.n_points - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        self.r_lo + self.spacing() * i as f64
    }

    /// Index of the grid node nearest to `r`, with its distance.
    pub fn nearest(&self, r: f64) -> (usize, f64) {
        let x = (r - self.r_lo) / self.spacing();
        let i = libm::round(x.max(0.0)) as usize;
        let i = i.min(self.n_points - 1);
        (i, (r - self.point(i)).abs())
    }
}

/// Discretized Hamiltonian on the interior nodes of `grid`: diagonal
/// ħ²/(m h²) + u(r_i|ctx), constant off-diagonal −ħ²/(2m h²), Dirichlet
/// zeros at the two endpoints.
pub fn assemble_hamiltonian(
    ctx: &NeighborContext,
    grid: &SpatialGrid,
    params: &ModelParams,
) -> Result<SymTridiag> {
    grid.validate()?;
    if let (Some(l), Some(r)) = (ctx.left, ctx.right) {
        if r - l < 2.0 * params.r_min {
            return Err(CoreError::Domain(format!(
                "band narrower than 2 r_min: gap {} < {}",
                r - l,
                2.0 * params.r_min
            )));
        }
    }
    let h = grid.spacing();
    let kin = params.hbar * params.hbar / (params.mass * h * h);
    let m = grid.n_points - 2;
    let mut diag = Vec::with_capacity(m);
    for i in 1..=m {
        diag.push(kin + local_field(grid.point(i), ctx, params)?);
    }
    Ok(SymTridiag { diag, off: vec![-0.5 * kin; m - 1] })
}

/// Eigenvalues and real eigenfunctions on a spatial grid. Wavefunctions are
/// stored state-major over the full grid (endpoint values are zero) and
/// normalized so the trapezoid quadrature of φ² is one.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSet {
    energies: Vec<f64>,
    wavefunctions: Vec<f64>,
    grid: SpatialGrid,
}

impl EigenSet {
    /// Assembles a set from interior-node eigenvectors, embedding the zero
    /// boundary values, fixing signs, and normalizing on the grid.
    pub fn from_interior_vectors(
        energies: Vec<f64>,
        interior: &[Vec<f64>],
        grid: SpatialGrid,
    ) -> Result<Self> {
        let n_points = grid.n_points;
        let h = grid.spacing();
        let mut wavefunctions = vec![0.0_f64; energies.len() * n_points];
        for (s, vec_int) in interior.iter().enumerate() {
            if vec_int.len() != n_points - 2 {
                return Err(CoreError::Param("interior vector length mismatch".into()));
            }
            let row = &mut wavefunctions[s * n_points..(s + 1) * n_points];
            row[1..n_points - 1].copy_from_slice(vec_int);
            // deterministic sign: largest-magnitude component positive
            let mut imax = 0;
            let mut vmax = 0.0_f64;
            for (i, &v) in row.iter().enumerate() {
                if v.abs() > vmax {
                    vmax = v.abs();
                    imax = i;
                }
            }
            let mut scale = 1.0 / (h * row.iter().map(|v| v * v).sum::<f64>()).sqrt();
            if row[imax] < 0.0 {
                scale = -scale;
            }
            row.iter_mut().for_each(|v| *v *= scale);
        }
        let set = EigenSet { energies, wavefunctions, grid };
        set.check_ordering()?;
        Ok(set)
    }

    fn check_ordering(&self) -> Result<()> {
        for w in self.energies.windows(2) {
            if w[1] < w[0] {
                return Err(CoreError::Param("energies not ascending".into()));
            }
        }
        Ok(())
    }

    pub fn n_states(&self) -> usize {
        self.energies.len()
    }

    pub fn grid(&self) -> &SpatialGrid {
        &self.grid
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn energy(&self, n: usize) -> f64 {
        self.energies[n]
    }

    /// Wavefunction of state `n` over the full grid.
    pub fn state(&self, n: usize) -> &[f64] {
        &self.wavefunctions[n * self.grid.n_points..(n + 1) * self.grid.n_points]
    }

    /// Raw state-major wavefunction storage.
    pub fn wavefunction_data(&self) -> &[f64] {
        &self.wavefunctions
    }

    /// Rebuilds a set from already-normalized storage (used by file loaders).
    pub fn from_raw(energies: Vec<f64>, wavefunctions: Vec<f64>, grid: SpatialGrid) -> Result<Self> {
        if wavefunctions.len() != energies.len() * grid.n_points {
            return Err(CoreError::Format("wavefunction storage size mismatch".into()));
        }
        let set = EigenSet { energies, wavefunctions, grid };
        set.check_ordering()?;
        Ok(set)
    }

    /// Largest deviation of ⟨φ_m|φ_n⟩ from δ_mn under trapezoid quadrature.
    pub fn orthonormality_residual(&self) -> f64 {
        let h = self.grid.spacing();
        let mut worst = 0.0_f64;
        for a in 0..self.n_states() {
            for b in a..self.n_states() {
                let dot: f64 = self.state(a).iter().zip(self.state(b)).map(|(x, y)| x * y).sum();
                let expect = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((h * dot - expect).abs());
            }
        }
        worst
    }
}

/// Lowest `n_states` eigenpairs of the assembled matrix by direct
/// diagonalization. The grid supplies the boundary embedding.
pub fn solve_states(matrix: &SymTridiag, grid: &SpatialGrid, n_states: usize) -> Result<EigenSet> {
    if matrix.dim() != grid.n_points - 2 {
        return Err(CoreError::Param("matrix dimension does not match grid".into()));
    }
    if n_states == 0 || 2 * n_states > grid.n_points {
        return Err(CoreError::Param(format!(
            "state count {} exceeds half the grid ({} points)",
            n_states, grid.n_points
        )));
    }
    // full QL on production-sized cells, targeted bisection on fine grids
    let (values, vectors) = if matrix.dim() <= 600 || n_states * 8 > matrix.dim() {
        let (mut values, mut vectors) = matrix.eig_all()?;
        values.truncate(n_states);
        vectors.truncate(n_states);
        (values, vectors)
    } else {
        matrix.lowest_states(n_states)?
    };
    EigenSet::from_interior_vectors(values, &vectors, *grid)
}

/// Analytic harmonic-oscillator reference energy (n+½)·ħω.
pub fn sho_reference(n: usize, params: &ModelParams) -> f64 {
    (n as f64 + 0.5) * params.hbar_omega()
}

/// Band limits for a neighbor context: [q′+r_min, q″−r_min], falling back to
/// ±L/2 on missing sides. Returns `None` when the band is empty.
pub fn band_limits(ctx: &NeighborContext, params: &ModelParams) -> Option<(f64, f64)> {
    let lo = ctx.left.map(|l| l + params.r_min).unwrap_or(-0.5 * params.length);
    let hi = ctx.right.map(|r| r - params.r_min).unwrap_or(0.5 * params.length);
    if hi - lo > 1e-9 {
        Some((lo, hi))
    } else {
        None
    }
}


/// Test-support oracle: lowest eigenvalues by pure Sturm bisection, sharing no
/// code path with the QL solver.
#[doc(hidden)]
pub fn tridiag_oracle_eigvals(t: &SymTridiag, k: usize) -> Vec<f64> {
    let (mut glo, mut ghi) = t.gershgorin_bounds();
    glo -= 1.0;
    ghi += 1.0;
    let mut out = Vec::with_capacity(k);
    for idx in 0..k {
        let (mut lo, mut hi) = (glo, ghi);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if t.count_below(mid) > idx {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        out.push(0.5 * (lo + hi));
    }
    out
}
