//! Per-cell evaluation of the combined commutation function.

use super::MomentumGrid;
use crate::eigen::{EigenSet, SpatialGrid};
use crate::error::CoreError;
use crate::params::ModelParams;
use crate::Result;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
use num_traits::Float;

/// Magnitudes below this flag a node as absent rather than storing ±∞.
const UNDERFLOW_FLOOR: f64 = 1e-300;

/// Direct Fourier transform of a grid wavefunction: trapezoid quadrature of
/// φ(r)·e^{ipr/ħ}. Real wavefunctions make the conjugation immaterial.
pub fn momentum_projection(phi: &[f64], grid: &SpatialGrid, p: f64, params: &ModelParams) -> Complex64 {
    let h = grid.spacing();
    let n = grid.n_points;
    debug_assert_eq!(phi.len(), n);
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, &f) in phi.iter().enumerate() {
        let w = if i == 0 || i == n - 1 { 0.5 * h } else { h };
        let arg = p * grid.point(i) / params.hbar;
        acc += Complex64::new(libm::cos(arg), libm::sin(arg)) * (w * f);
    }
    acc
}

/// The combined commutation function of one cell: w̃ values on the interior
/// grid nodes × the momentum grid (q-major), with the imaginary part
/// unwrapped along p and along the p = 0 base line.
#[derive(Debug, Clone, PartialEq)]
pub struct CellPlane {
    pub n_q: usize,
    pub n_p: usize,
    values: Vec<Complex64>,
    flagged: u32,
}

impl CellPlane {
    pub fn value(&self, iq: usize, ip: usize) -> Complex64 {
        self.values[iq * self.n_p + ip]
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn flagged(&self) -> u32 {
        self.flagged
    }

    pub fn from_raw(n_q: usize, n_p: usize, values: Vec<Complex64>, flagged: u32) -> Result<Self> {
        if values.len() != n_q * n_p {
            return Err(CoreError::Format("cell plane size mismatch".into()));
        }
        Ok(CellPlane { n_q, n_p, values, flagged })
    }
}

/// w̃ at a single phase-space point of a cell. `q` must lie on an interior
/// grid node. Principal-branch logarithm; table builds unwrap separately.
pub fn combined_w_point(
    eigs: &EigenSet,
    beta: f64,
    q: f64,
    p: f64,
    params: &ModelParams,
) -> Result<Complex64> {
    let grid = eigs.grid();
    let (iq, dist) = grid.nearest(q);
    if dist > 1e-9 * grid.spacing().max(1.0) {
        return Err(CoreError::Domain(format!("q = {q} is not a grid node")));
    }
    if iq == 0 || iq == grid.n_points - 1 {
        return Err(CoreError::Domain("q at a boundary node carries no weight".into()));
    }
    let e0 = eigs.energy(0);
    let mut z = Complex64::new(0.0, 0.0);
    for n in 0..eigs.n_states() {
        let damp = libm::exp(-beta * (eigs.energy(n) - e0));
        let phiq = eigs.state(n)[iq];
        if damp * phiq.abs() == 0.0 {
            continue;
        }
        z += momentum_projection(eigs.state(n), grid, p, params) * (damp * phiq);
    }
    // divide out <q|p> = e^{ipq/ħ}
    let arg = -p * q / params.hbar;
    z *= Complex64::new(libm::cos(arg), libm::sin(arg));
    let mag = z.norm();
    if !(mag > UNDERFLOW_FLOOR) || !mag.is_finite() {
        return Err(CoreError::OutOfSupport);
    }
    Ok(Complex64::new(libm::log(mag) - beta * e0, libm::atan2(z.im, z.re)))
}

/// Builds the full (q, p) plane of one cell.
pub fn build_cell_plane(
    eigs: &EigenSet,
    beta: f64,
    p_grid: &MomentumGrid,
    params: &ModelParams,
) -> Result<CellPlane> {
    p_grid.validate()?;
    if !(beta > 0.0) {
        return Err(CoreError::Param("beta must be positive".into()));
    }
    let grid = eigs.grid();
    let n_pts = grid.n_points;
    let n_q = n_pts - 2;
    let n_p = p_grid.n_points;
    let n_states = eigs.n_states();
    let e0 = eigs.energy(0);
    let h = grid.spacing();

    // damped wavefunction samples, q-major: bphi[iq][n] = e^{-β(E_n-E_0)} φ_n(q_iq)
    let mut bphi = vec![0.0_f64; n_q * n_states];
    for n in 0..n_states {
        let damp = libm::exp(-beta * (eigs.energy(n) - e0));
        let phi = eigs.state(n);
        for iq in 0..n_q {
            bphi[iq * n_states + n] = damp * phi[iq + 1];
        }
    }

    // Fourier transforms, p-major: ft[ip][n]
    let mut ft = vec![Complex64::new(0.0, 0.0); n_p * n_states];
    let mut phase = vec![Complex64::new(0.0, 0.0); n_pts];
    for ip in 0..n_p {
        let p = p_grid.point(ip);
        for (i, ph) in phase.iter_mut().enumerate() {
            let arg = p * grid.point(i) / params.hbar;
            *ph = Complex64::new(libm::cos(arg), libm::sin(arg));
        }
        for n in 0..n_states {
            let phi = eigs.state(n);
            let mut re = 0.0;
            let mut im = 0.0;
            // trapezoid weights collapse to h: endpoint values are zero
            for i in 1..n_pts - 1 {
                re += phi[i] * phase[i].re;
                im += phi[i] * phase[i].im;
            }
            ft[ip * n_states + n] = Complex64::new(re * h, im * h);
        }
    }

    let mut values = vec![Complex64::new(0.0, 0.0); n_q * n_p];
    let mut flagged = 0u32;
    for iq in 0..n_q {
        let q = grid.point(iq + 1);
        let brow = &bphi[iq * n_states..(iq + 1) * n_states];
        for ip in 0..n_p {
            let p = p_grid.point(ip);
            let frow = &ft[ip * n_states..(ip + 1) * n_states];
            let mut re = 0.0;
            let mut im = 0.0;
            for n in 0..n_states {
                re += brow[n] * frow[n].re;
                im += brow[n] * frow[n].im;
            }
            let arg = -p * q / params.hbar;
            let rot = Complex64::new(libm::cos(arg), libm::sin(arg));
            let z = Complex64::new(re, im) * rot;
            let mag = z.norm();
            values[iq * n_p + ip] = if mag > UNDERFLOW_FLOOR && mag.is_finite() {
                Complex64::new(libm::log(mag) - beta * e0, libm::atan2(z.im, z.re))
            } else {
                flagged += 1;
                Complex64::new(f64::NAN, f64::NAN)
            };
        }
    }

    unwrap_phases(&mut values, n_q, n_p);
    Ok(CellPlane { n_q, n_p, values, flagged })
}

/// Removes 2π jumps: first along the p = 0 column in q, then along each
/// q-line in p starting from that base.
fn unwrap_phases(values: &mut [Complex64], n_q: usize, n_p: usize) {
    let two_pi = 2.0 * core::f64::consts::PI;
    let mut prev_base = 0.0_f64;
    for iq in 0..n_q {
        let base_idx = iq * n_p;
        if values[base_idx].im.is_nan() {
            continue;
        }
        let mut base = values[base_idx].im;
        base -= two_pi * libm::round((base - prev_base) / two_pi);
        values[base_idx] = Complex64::new(values[base_idx].re, base);
        prev_base = base;
        let mut prev = base;
        for ip in 1..n_p {
            let idx = base_idx + ip;
            if values[idx].im.is_nan() {
                continue;
            }
            let mut im = values[idx].im;
            im -= two_pi * libm::round((im - prev) / two_pi);
            values[idx] = Complex64::new(values[idx].re, im);
            prev = im;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::{assemble_hamiltonian, solve_states, SpatialGrid};
    use crate::params::standard_params;
    use crate::potential::NeighborContext;

    fn sho_set(n_points: usize, n_states: usize) -> (crate::params::ModelParams, EigenSet) {
        let p = standard_params();
        let ell = (p.hbar / (p.mass * p.omega)).sqrt();
        let grid = SpatialGrid::new(-9.0 * ell, 9.0 * ell, n_points).unwrap();
        let m = assemble_hamiltonian(&NeighborContext::free(), &grid, &p).unwrap();
        let set = solve_states(&m, &grid, n_states).unwrap();
        (p, set)
    }

    #[test]
    fn projection_at_zero_momentum_is_the_real_integral() {
        let (p, set) = sho_set(240, 3);
        for n in 0..3 {
            let proj = momentum_projection(set.state(n), set.grid(), 0.0, &p);
            let h = set.grid().spacing();
            let direct: f64 = set.state(n).iter().sum::<f64>() * h;
            assert!((proj.re - direct).abs() < 1e-12);
            assert!(proj.im.abs() < 1e-12);
        }
    }

    #[test]
    fn projection_of_gaussian_ground_state_is_gaussian() {
        let (p, set) = sho_set(400, 1);
        // analytic transform of (mω/πħ)^{1/4} e^{-mωq²/2ħ}:
        // (4πħ/mω)^{1/4} e^{-p²/(2mωħ)}
        let alpha = p.mass * p.omega / p.hbar;
        let norm = libm::pow(4.0 * core::f64::consts::PI / alpha, 0.25);
        for &pm in &[0.0, 0.1, 0.25, 0.5, 0.9] {
            let expect = norm * libm::exp(-pm * pm / (2.0 * p.mass * p.omega * p.hbar));
            let got = momentum_projection(set.state(0), set.grid(), pm, &p);
            assert!((got.re - expect).abs() < 2e-4, "p={pm}: {} vs {expect}", got.re);
            assert!(got.im.abs() < 1e-10);
        }
    }

    #[test]
    fn parseval_within_tolerance() {
        let (p, set) = sho_set(400, 1);
        // ∫|φ̌(p)|² dp / 2πħ over a range comfortably covering the support
        let alpha = p.mass * p.omega / p.hbar;
        let p_hi = 10.0 * (alpha * p.hbar * p.hbar).sqrt();
        let n = 2001;
        let dp = 2.0 * p_hi / (n - 1) as f64;
        let mut acc = 0.0;
        for i in 0..n {
            let pm = -p_hi + dp * i as f64;
            let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
            acc += w * momentum_projection(set.state(0), set.grid(), pm, &p).norm_sqr();
        }
        acc *= dp / (2.0 * core::f64::consts::PI * p.hbar);
        assert!((acc - 1.0).abs() < 1e-4, "Parseval sum {acc}");
    }

    #[test]
    fn point_and_plane_agree() {
        let (p, set) = sho_set(120, 30);
        let beta = 1.0 / p.hbar_omega();
        let p_grid = MomentumGrid::from_kinetic_cap(beta, 50.0, 48, p.mass).unwrap();
        let plane = build_cell_plane(&set, beta, &p_grid, &p).unwrap();
        assert_eq!(plane.flagged(), 0);
        for &(iq, ip) in &[(4usize, 0usize), (40, 7), (59, 20), (90, 47)] {
            let q = set.grid().point(iq + 1);
            let pm = p_grid.point(ip);
            let direct = combined_w_point(&set, beta, q, pm, &p).unwrap();
            let stored = plane.value(iq, ip);
            assert!((direct.re - stored.re).abs() < 1e-10);
            // phases may differ by full turns after unwrapping
            let d = direct.im - stored.im;
            let wrapped = d - 2.0 * core::f64::consts::PI * libm::round(d / (2.0 * core::f64::consts::PI));
            assert!(wrapped.abs() < 1e-10);
        }
    }

    #[test]
    fn hermiticity_under_momentum_reversal() {
        let p = standard_params();
        let ctx = NeighborContext::interior(-p.r_e, p.r_e);
        let (lo, hi) = crate::eigen::band_limits(&ctx, &p).unwrap();
        let grid = SpatialGrid::new(lo, hi, 90).unwrap();
        let m = assemble_hamiltonian(&ctx, &grid, &p).unwrap();
        let set = solve_states(&m, &grid, 30).unwrap();
        let beta = 0.5 / p.hbar_omega();
        for &(iq, pm) in &[(10usize, 0.4), (44, 1.3), (70, 2.2)] {
            let q = grid.point(iq + 1);
            let a = combined_w_point(&set, beta, q, pm, &p).unwrap();
            let b = combined_w_point(&set, beta, q, -pm, &p).unwrap();
            assert!((a.re - b.re).abs() < 1e-12);
            assert!((a.im + b.im).abs() < 1e-12);
        }
    }

    #[test]
    fn parity_of_symmetric_cell() {
        let p = standard_params();
        let ctx = NeighborContext::interior(-p.r_e, p.r_e);
        let (lo, hi) = crate::eigen::band_limits(&ctx, &p).unwrap();
        let grid = SpatialGrid::new(lo, hi, 91).unwrap();
        let m = assemble_hamiltonian(&ctx, &grid, &p).unwrap();
        let set = solve_states(&m, &grid, 30).unwrap();
        let beta = 0.5 / p.hbar_omega();
        for &(iq, pm) in &[(8usize, 0.7), (30, 1.9)] {
            let q = grid.point(iq + 1);
            let qm = -q;
            let a = combined_w_point(&set, beta, q, pm, &p).unwrap();
            let b = combined_w_point(&set, beta, qm, -pm, &p).unwrap();
            assert!((a.re - b.re).abs() < 1e-10, "Re not even under (q,p)->(-q,-p)");
        }
    }

    #[test]
    fn sho_plane_matches_hermite_oracle_and_peaks_at_origin() {
        let (p, set) = sho_set(280, 60);
        let beta = 0.5 / p.hbar_omega();
        let p_grid = MomentumGrid::from_kinetic_cap(beta, 50.0, 80, p.mass).unwrap();
        let plane = build_cell_plane(&set, beta, &p_grid, &p).unwrap();
        let grid = set.grid();

        // peak of Re[e^{w̃}] sits at (q,p) = (0,0) and decays monotonically
        // along both axes near the origin
        let (iq0, _) = grid.nearest(0.0);
        let weight = |iq: usize, ip: usize| {
            let w = plane.value(iq - 1, ip);
            libm::exp(w.re) * libm::cos(w.im)
        };
        let center = weight(iq0, 0);
        let mut best = f64::NEG_INFINITY;
        for iq in (1..grid.n_points - 1).step_by(7) {
            for ip in (0..p_grid.n_points).step_by(5) {
                best = best.max(weight(iq, ip));
            }
        }
        assert!(center >= best - 1e-12, "peak not at the origin: {center} < {best}");
        assert!(weight(iq0 + 12, 0) < center);
        assert!(weight(iq0, 9) < center);

        // quantitative check against direct Hermite-function summation
        let oracle = |q: f64, pm: f64| -> Complex64 {
            let alpha = (p.mass * p.omega / p.hbar).sqrt();
            let x = alpha * q;
            let k = pm / (p.hbar * alpha);
            let norm0 = libm::pow(alpha * alpha / core::f64::consts::PI, 0.25);
            let gq = norm0 * libm::exp(-0.5 * x * x);
            let gp = norm0 * libm::exp(-0.5 * k * k);
            // ψ̌_n(p) = (√(2π)/α)·iⁿ·ψ_n(k): Hermite functions are Fourier
            // eigenfunctions
            let ft_norm = (2.0 * core::f64::consts::PI).sqrt() / alpha;
            let mut hq = (gq, 0.0);
            let mut hp = (gp, 0.0);
            let mut z = Complex64::new(0.0, 0.0);
            for n in 0..60usize {
                let (pq, pp) = (hq.0, hp.0);
                let inow = match n % 4 {
                    0 => Complex64::new(1.0, 0.0),
                    1 => Complex64::new(0.0, 1.0),
                    2 => Complex64::new(-1.0, 0.0),
                    _ => Complex64::new(0.0, -1.0),
                };
                let damp = libm::exp(-beta * p.hbar_omega() * n as f64);
                z += inow * (damp * pq * pp * ft_norm);
                // orthonormal recurrence ψ_{n+1} = √(2/(n+1)) x ψ_n − √(n/(n+1)) ψ_{n−1}
                let a = (2.0 / (n as f64 + 1.0)).sqrt();
                let b = (n as f64 / (n as f64 + 1.0)).sqrt();
                hq = (a * x * hq.0 - b * hq.1, hq.0);
                hp = (a * k * hp.0 - b * hp.1, hp.0);
            }
            let arg = -pm * q / p.hbar;
            z *= Complex64::new(libm::cos(arg), libm::sin(arg));
            Complex64::new(libm::log(z.norm()) - beta * 0.5 * p.hbar_omega(), libm::atan2(z.im, z.re))
        };
        for &(iq, ip) in &[(139usize, 0usize), (120, 6), (160, 12), (100, 3)] {
            let q = grid.point(iq + 1);
            let pm = p_grid.point(ip);
            let got = plane.value(iq, ip);
            let want = oracle(q, pm);
            assert!((got.re - want.re).abs() < 5e-3, "Re at ({q},{pm}): {} vs {}", got.re, want.re);
            let d = got.im - want.im;
            let wrapped = d - 2.0 * core::f64::consts::PI * libm::round(d / (2.0 * core::f64::consts::PI));
            assert!(wrapped.abs() < 5e-3, "Im at ({q},{pm})");
        }
    }
}
