//! Eigenstate tables over the neighbor-position grids.
//!
//! Interior cells are indexed by (q′, q″) pairs; terminal cells by the single
//! present neighbor. Cells whose band is narrower than 2·r_min are stored as
//! absent. Cell solves are independent, so a caller may farm out
//! [`solve_cell`] jobs and reassemble with [`EigenTable::from_cells`].

use super::{assemble_hamiltonian, band_limits, solve_states, EigenSet, SpatialGrid};
use crate::error::CoreError;
use crate::params::ModelParams;
use crate::potential::NeighborContext;
use crate::Result;
use alloc::format;
use alloc::vec::Vec;

/// Uniform axis of neighbor positions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformAxis {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl UniformAxis {
    pub fn spacing(&self) -> f64 {
        (self.hi - self.lo) / (self.n - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        self.lo + self.spacing() * i as f64
    }

    /// Bracketing index and fractional offset for interpolation.
    pub fn locate(&self, x: f64) -> Option<(usize, f64)> {
        if !(x >= self.lo && x <= self.hi) {
            return None;
        }
        let t = (x - self.lo) / self.spacing();
        let mut i = t as usize;
        if i >= self.n - 1 {
            i = self.n - 2;
        }
        Some((i, t - i as f64))
    }
}

/// Left-neighbor and right-neighbor grids: q′ ∈ [−L/2, L/2−r_e],
/// q″ ∈ [−L/2+r_e, L/2].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeighborGrids {
    pub left: UniformAxis,
    pub right: UniformAxis,
}

impl NeighborGrids {
    pub fn new(params: &ModelParams, n_left: usize, n_right: usize) -> Result<Self> {
        if n_left < 2 || n_right < 2 {
            return Err(CoreError::Param("neighbor grids need at least 2 points".into()));
        }
        let half = 0.5 * params.length;
        Ok(NeighborGrids {
            left: UniformAxis { lo: -half, hi: half - params.r_e, n: n_left },
            right: UniformAxis { lo: -half + params.r_e, hi: half, n: n_right },
        })
    }
}

/// Grid dimensions of an eigen table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenTableSpec {
    pub n_r: usize,
    pub n_states: usize,
    pub n_left: usize,
    pub n_right: usize,
}

impl EigenTableSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_r < 16 || self.n_left < 2 || self.n_right < 2 {
            return Err(CoreError::Param("table grid dimensions too small".into()));
        }
        if self.n_states == 0 || 2 * self.n_states > self.n_r {
            return Err(CoreError::Param(format!(
                "state count {} exceeds half the r-grid {}",
                self.n_states, self.n_r
            )));
        }
        Ok(())
    }
}

/// Identifies one eigenproblem cell in the table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellId {
    /// Two frozen neighbors at (left index, right index).
    Interior(usize, usize),
    /// Leftmost particle; index on the right-neighbor grid.
    TerminalLeft(usize),
    /// Rightmost particle; index on the left-neighbor grid.
    TerminalRight(usize),
}

/// A per-cell solve failure kept alongside the table.
#[derive(Debug, Clone)]
pub struct CellFailure {
    pub cell: CellId,
    pub error: CoreError,
}

/// Eigenstates for every feasible neighbor cell.
#[derive(Debug, Clone)]
pub struct EigenTable {
    params: ModelParams,
    spec: EigenTableSpec,
    grids: NeighborGrids,
    interior: Vec<Option<EigenSet>>,
    terminal_left: Vec<Option<EigenSet>>,
    terminal_right: Vec<Option<EigenSet>>,
    failures: Vec<CellFailure>,
}

impl EigenTable {
    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn spec(&self) -> &EigenTableSpec {
        &self.spec
    }

    pub fn grids(&self) -> &NeighborGrids {
        &self.grids
    }

    pub fn interior(&self, i: usize, j: usize) -> Option<&EigenSet> {
        self.interior[i * self.spec.n_right + j].as_ref()
    }

    pub fn terminal_left(&self, j: usize) -> Option<&EigenSet> {
        self.terminal_left[j].as_ref()
    }

    pub fn terminal_right(&self, i: usize) -> Option<&EigenSet> {
        self.terminal_right[i].as_ref()
    }

    pub fn failures(&self) -> &[CellFailure] {
        &self.failures
    }

    /// Number of feasible interior cells.
    pub fn feasible_interior(&self) -> usize {
        self.interior.iter().filter(|c| c.is_some()).count()
    }

    /// Assembles a table from per-cell results in any order.
    pub fn from_cells(
        params: ModelParams,
        spec: EigenTableSpec,
        cells: impl IntoIterator<Item = (CellId, Result<Option<EigenSet>>)>,
    ) -> Result<EigenTable> {
        spec.validate()?;
        params.validate()?;
        let grids = NeighborGrids::new(&params, spec.n_left, spec.n_right)?;
        let mut table = EigenTable {
            params,
            spec,
            grids,
            interior: alloc::vec![None; spec.n_left * spec.n_right],
            terminal_left: alloc::vec![None; spec.n_right],
            terminal_right: alloc::vec![None; spec.n_left],
            failures: Vec::new(),
        };
        for (id, outcome) in cells {
            match outcome {
                Ok(set) => match id {
                    CellId::Interior(i, j) => table.interior[i * spec.n_right + j] = set,
                    CellId::TerminalLeft(j) => table.terminal_left[j] = set,
                    CellId::TerminalRight(i) => table.terminal_right[i] = set,
                },
                Err(error) => table.failures.push(CellFailure { cell: id, error }),
            }
        }
        Ok(table)
    }
}

/// Every cell id of a table, interior cells first in row-major (q′, q″) order.
pub fn cell_ids(spec: &EigenTableSpec) -> Vec<CellId> {
    let mut ids = Vec::with_capacity(spec.n_left * spec.n_right + spec.n_left + spec.n_right);
    for i in 0..spec.n_left {
        for j in 0..spec.n_right {
            ids.push(CellId::Interior(i, j));
        }
    }
    for j in 0..spec.n_right {
        ids.push(CellId::TerminalLeft(j));
    }
    for i in 0..spec.n_left {
        ids.push(CellId::TerminalRight(i));
    }
    ids
}

/// Neighbor context of a cell.
pub fn cell_context(id: CellId, grids: &NeighborGrids) -> NeighborContext {
    match id {
        CellId::Interior(i, j) => NeighborContext::interior(grids.left.point(i), grids.right.point(j)),
        CellId::TerminalLeft(j) => NeighborContext::terminal_left(grids.right.point(j)),
        CellId::TerminalRight(i) => NeighborContext::terminal_right(grids.left.point(i)),
    }
}

/// Solves one cell. `Ok(None)` marks an infeasible band.
pub fn solve_cell(
    id: CellId,
    params: &ModelParams,
    spec: &EigenTableSpec,
    grids: &NeighborGrids,
) -> Result<Option<EigenSet>> {
    let ctx = cell_context(id, grids);
    if let (Some(l), Some(r)) = (ctx.left, ctx.right) {
        if r - l < 2.0 * params.r_min {
            return Ok(None);
        }
    }
    let Some((lo, hi)) = band_limits(&ctx, params) else {
        return Ok(None);
    };
    let grid = SpatialGrid::new(lo, hi, spec.n_r)?;
    let matrix = assemble_hamiltonian(&ctx, &grid, params)?;
    Ok(Some(solve_states(&matrix, &grid, spec.n_states)?))
}

/// Builds the full table serially. Callers wanting parallelism should map
/// [`cell_ids`] through [`solve_cell`] themselves and use
/// [`EigenTable::from_cells`].
pub fn build_eigen_table(params: &ModelParams, spec: EigenTableSpec) -> Result<EigenTable> {
    spec.validate()?;
    let grids = NeighborGrids::new(params, spec.n_left, spec.n_right)?;
    let cells = cell_ids(&spec)
        .into_iter()
        .map(|id| (id, solve_cell(id, params, &spec, &grids)))
        .collect::<Vec<_>>();
    EigenTable::from_cells(params.clone(), spec, cells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::standard_params;
    use crate::potential::{lj_pair, local_field};
    use num_traits::Float;

    fn small_spec() -> EigenTableSpec {
        EigenTableSpec { n_r: 48, n_states: 12, n_left: 10, n_right: 10 }
    }

    #[test]
    fn cell_count_matches_feasible_pairs() {
        let p = standard_params();
        let spec = small_spec();
        let table = build_eigen_table(&p, spec).unwrap();
        let grids = table.grids();
        let mut feasible = 0;
        for i in 0..spec.n_left {
            for j in 0..spec.n_right {
                if grids.right.point(j) - grids.left.point(i) >= 2.0 * p.r_min {
                    feasible += 1;
                    assert!(table.interior(i, j).is_some(), "cell ({i},{j}) missing");
                } else {
                    assert!(table.interior(i, j).is_none(), "cell ({i},{j}) should be absent");
                }
            }
        }
        assert_eq!(table.feasible_interior(), feasible);
        assert!(table.failures().is_empty());
    }

    #[test]
    fn mirror_symmetry_of_interior_energies() {
        let p = standard_params();
        let spec = EigenTableSpec { n_r: 64, n_states: 8, n_left: 9, n_right: 9 };
        let table = build_eigen_table(&p, spec).unwrap();
        let grids = table.grids();
        // q' axis spans [-5, 4], q'' axis [-4, 5]: index i on the left axis
        // mirrors to index (n-1-i) on the right axis
        for i in 0..spec.n_left {
            for j in 0..spec.n_right {
                let (Some(a), Some(b)) = (table.interior(i, j), table.interior(spec.n_left - 1 - j, spec.n_right - 1 - i))
                else {
                    continue;
                };
                let ql = grids.left.point(i);
                let qr = grids.right.point(j);
                let mql = grids.left.point(spec.n_left - 1 - j);
                let mqr = grids.right.point(spec.n_right - 1 - i);
                assert!((mql + qr).abs() < 1e-12 && (mqr + ql).abs() < 1e-12);
                for n in 0..spec.n_states {
                    let rel = ((a.energy(n) - b.energy(n)) / a.energy(n).abs().max(1e-12)).abs();
                    assert!(rel < 1e-9, "cell ({i},{j}) state {n}: {rel}");
                }
            }
        }
    }

    #[test]
    fn wide_band_ground_state_approaches_single_well_placement() {
        let p = standard_params();
        // one frozen neighbor far to the left: the particle settles near the
        // trap centre where the pair tail is negligible
        let ctx = NeighborContext::terminal_right(-25.0);
        let params = p.with_box_geometry(52.0, 0.75).unwrap();
        let (lo, hi) = band_limits(&ctx, &params).unwrap();
        let grid = SpatialGrid::new(lo, hi, 1200).unwrap();
        let m = assemble_hamiltonian(&ctx, &grid, &params).unwrap();
        let set = solve_states(&m, &grid, 1).unwrap();
        // oracle: minimum over placements of trap + half pair tail, plus SHO
        // zero-point motion
        let mut umin = f64::INFINITY;
        let mut r = lo + 1e-3;
        while r < hi {
            umin = umin.min(local_field(r, &ctx, &params).unwrap());
            r += 1e-3;
        }
        let expect = umin + 0.5 * params.hbar_omega();
        assert!((set.energy(0) - expect).abs() < 2e-4, "{} vs {}", set.energy(0), expect);
        let _ = lj_pair(1.0, &params);
    }

    #[test]
    fn relaxation_matches_direct_on_random_cells() {
        use rand::Rng;
        let p = standard_params();
        let mut rng = crate::mc::seeded_rng(9);
        for _ in 0..10 {
            let ql = -4.0 + 3.0 * rng.gen::<f64>();
            let qr = ql + 2.0 + 2.5 * rng.gen::<f64>();
            let ctx = NeighborContext::interior(ql, qr);
            let (lo, hi) = band_limits(&ctx, &p).unwrap();
            let grid = SpatialGrid::new(lo, hi, 100).unwrap();
            let m = assemble_hamiltonian(&ctx, &grid, &p).unwrap();
            let direct = solve_states(&m, &grid, 20).unwrap();
            let relaxed =
                crate::eigen::solve_states_relaxation(&m, &grid, 20, crate::eigen::RelaxOptions::default())
                    .unwrap();
            for n in 0..20 {
                let rel = ((direct.energy(n) - relaxed.energy(n)) / direct.energy(n).abs()).abs();
                assert!(rel < 1e-6, "cell ({ql:.3},{qr:.3}) state {n}: rel {rel}");
            }
        }
    }
}
