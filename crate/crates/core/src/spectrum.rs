//! Dirichlet spectrum of `H^(+)` from exact 2×2 transfer matrices.
//!
//! In each region the potential is constant, so `(ψ, ψ')` is carried across
//! it by a trigonometric block (field-free regions) or a hyperbolic block
//! with `κ` / `κ*` (inside the well). Starting from `ψ(-L) = 0, ψ'(-L) = 1`
//! the secular function is `F(E) = ψ(L)`; its zeros are the eigenvalues.
//!
//! For real `E` the PT mirror `conj ψ(-x)` of the left solution is the right
//! solution, and equating their Wronskians at `x = -L`, `0` and `L` gives
//! `F(E) = 2 Re[ψ(0) conj ψ'(0)]`, which is real. The scan uses this form.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{make_problem, EnergyLevel, ProblemParams, Region, RegionTag};
use crate::numerics::{brent_root, csinc, csinhc, golden_min};

pub type Mat2 = [[Complex64; 2]; 2];

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagatorStep {
    pub region: Region,
    /// `k = sqrt(E)` in the field-free regions, `sqrt(V - E)` (that is `κ*`
    /// in L1 and `κ` in R1 for real `E`) inside the well.
    pub local_wavenumber: Complex64,
    /// Maps `(ψ, ψ')` at the left edge of the region to the right edge.
    pub matrix: Mat2,
}

impl PropagatorStep {
    pub fn determinant(&self) -> Complex64 {
        let m = &self.matrix;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        let m = &self.matrix;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }
}

fn step_for(region: Region, energy: Complex64, potential: Complex64) -> PropagatorStep {
    let d = region.width();
    if region.tag.is_outer() {
        // cos/sin block with k = sqrt(E)
        let k = energy.sqrt();
        let kd = k * d;
        let (c, sn) = (kd.cos(), kd.sin());
        PropagatorStep {
            region,
            local_wavenumber: k,
            matrix: [[c, csinc(kd) * d], [-k * sn, c]],
        }
    } else {
        // cosh/sinh block with mu = sqrt(V - E)
        let mu = (potential - energy).sqrt();
        let md = mu * d;
        let (c, sh) = (md.cosh(), md.sinh());
        PropagatorStep {
            region,
            local_wavenumber: mu,
            matrix: [[c, csinhc(md) * d], [mu * sh, c]],
        }
    }
}

/// The four propagators L2, L1, R1, R2 at (possibly complex) energy.
pub fn propagators(energy: Complex64, p: &ProblemParams) -> [PropagatorStep; 4] {
    p.regions().map(|r| step_for(r, energy, p.vplus_in(r.tag)))
}

/// `(ψ, ψ')` at the right edge of `upto`, for `ψ(-L) = 0, ψ'(-L) = 1`.
fn shoot(energy: Complex64, p: &ProblemParams, upto: RegionTag) -> [Complex64; 2] {
    let mut v = [ZERO, ONE];
    for region in p.regions() {
        v = step_for(region, energy, p.vplus_in(region.tag)).apply(v);
        if region.tag == upto {
            break;
        }
    }
    v
}

/// `F(E) = ψ_E(L)`; entire in `E`, zero exactly at the Dirichlet eigenvalues.
pub fn secular_function(energy: Complex64, p: &ProblemParams) -> Complex64 {
    shoot(energy, p, RegionTag::R2)[0]
}

/// `F(E)` for real `E` via the symmetric product at the origin.
pub fn secular_symmetric(energy: f64, p: &ProblemParams) -> f64 {
    let [psi, dpsi] = shoot(Complex64::new(energy, 0.0), p, RegionTag::L1);
    2.0 * (psi * dpsi.conj()).re
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    Unbroken,
    BrokenDetected,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub params: ProblemParams,
    pub levels: Vec<EnergyLevel>,
    pub secular_residuals: Vec<f64>,
    pub regime: Regime,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumOptions {
    /// Required accuracy of each root in `E`.
    pub tol: f64,
    /// Scan spacing as a fraction of `(π / 2L)²`.
    pub scan_step: f64,
    /// Two roots closer than this fraction of `(π / 2L)²` count as coalesced.
    pub coalescence_gap: f64,
}

pub const DEFAULT_TOL: f64 = 1e-10;

impl Default for SpectrumOptions {
    fn default() -> Self {
        SpectrumOptions {
            tol: DEFAULT_TOL,
            scan_step: 1.0 / 8.0,
            coalescence_gap: 1e-6,
        }
    }
}

/// Lowest `n_levels` real eigenvalues of `H^(+)`.
///
/// Fails with [`Error::Coalescence`] when the lowest levels are not all real
/// and well separated, i.e. when PT symmetry is broken among them.
pub fn solve_spectrum(p: &ProblemParams, n_levels: usize, tol: f64) -> Result<SpectrumReport> {
    solve_spectrum_with(
        p,
        n_levels,
        &SpectrumOptions {
            tol,
            ..SpectrumOptions::default()
        },
    )
}

pub fn solve_spectrum_with(p: &ProblemParams, n_levels: usize, opts: &SpectrumOptions) -> Result<SpectrumReport> {
    if n_levels == 0 {
        return Err(Error::Domain("n_levels >= 1 violated".into()));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::Domain("tol > 0 violated".into()));
    }
    let scale = p.energy_scale();
    let roots = lowest_real_roots(p, n_levels + 1, opts)?;
    let min_gap = roots
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    let energy_cut = 0.5 * (roots[n_levels - 1] + roots[n_levels]);
    let coalesced = |total| Error::Coalescence {
        real_roots: roots.clone(),
        real_roots_below_cut: n_levels,
        total_roots_below_cut: total,
        energy_cut,
        min_gap,
    };
    if min_gap < opts.coalescence_gap * scale {
        return Err(coalesced(n_levels));
    }
    let total = count_eigenvalues_below(p, energy_cut)?;
    if total != n_levels {
        return Err(coalesced(total));
    }

    let g = p.coupling();
    let levels = roots[..n_levels]
        .iter()
        .enumerate()
        .map(|(n, &e)| EnergyLevel::new(n, e, g))
        .collect::<Result<Vec<_>>>()?;
    let secular_residuals = levels
        .iter()
        .map(|lvl| secular_function(Complex64::new(lvl.energy, 0.0), p).norm())
        .collect();
    Ok(SpectrumReport {
        params: *p,
        levels,
        secular_residuals,
        regime: Regime::Unbroken,
    })
}

/// Lowest `count` real zeros of the secular function, ascending.
///
/// Scans upward from `(π / 2L)² / 2` (no eigenvalue has a smaller real
/// part). Sign changes are polished with Brent's method; a local minimum of
/// `|F|` without a sign change is refined by golden-section search to catch
/// closely spaced pairs that fall inside one scan interval.
pub fn lowest_real_roots(p: &ProblemParams, count: usize, opts: &SpectrumOptions) -> Result<Vec<f64>> {
    let scale = p.energy_scale();
    let step = opts.scan_step * scale;
    let xtol = opts.tol.min(1e-14 * scale).max(f64::MIN_POSITIVE);
    let f = |e: f64| secular_symmetric(e, p);
    let polish = |a: f64, b: f64| {
        brent_root(f, a, b, xtol).ok_or_else(|| Error::Solver(format!("lost bracket [{a}, {b}]")))
    };

    let mut roots: Vec<f64> = Vec::with_capacity(count);
    let mut e0 = 0.5 * scale;
    let mut f0 = f(e0);
    // previous sample, for the local-minimum test
    let mut prev: Option<(f64, f64)> = None;
    // far above where `count` levels of any unbroken configuration can sit
    let e_max = 4.0 * scale * ((count + 8) as f64).powi(2) + 4.0 * p.coupling();
    while roots.len() < count && e0 < e_max {
        let e1 = e0 + step;
        let f1 = f(e1);
        if f0 == 0.0 {
            roots.push(e0);
        } else if f0.signum() != f1.signum() && f1 != 0.0 {
            roots.push(polish(e0, e1)?);
        } else if let Some((em, fm)) = prev {
            // f(em), f(e0), f(e1) share a sign and |f(e0)| is a local minimum
            let sgn = f0.signum();
            if fm.signum() == sgn && f1.signum() == sgn && f0.abs() < fm.abs() && f0.abs() < f1.abs() {
                let (xm, fx) = golden_min(|e| sgn * f(e), em, e1, 1e-15 * scale.max(e1));
                if fx < 0.0 {
                    let mut pair = [polish(em, xm)?, polish(xm, e1)?];
                    pair.sort_by(f64::total_cmp);
                    roots.extend(pair);
                }
            }
        }
        prev = Some((e0, f0));
        e0 = e1;
        f0 = f1;
    }
    if roots.len() < count {
        return Err(Error::Solver(format!("found only {} of {count} real roots", roots.len())));
    }
    roots.sort_by(f64::total_cmp);
    roots.truncate(count);
    Ok(roots)
}

/// Number of eigenvalues (real or complex, with multiplicity) whose real part
/// lies below `energy_cut`, from the winding number of `F` around a rectangle
/// that encloses them: `Re E >= (π/2L)²` and `|Im E| <= g` hold for every
/// eigenvalue because `V` is purely imaginary and bounded by `g`.
pub fn count_eigenvalues_below(p: &ProblemParams, energy_cut: f64) -> Result<usize> {
    let scale = p.energy_scale();
    let left = 0.5 * scale;
    if energy_cut <= left {
        return Ok(0);
    }
    let half_height = p.coupling() + scale;
    let corners = [
        Complex64::new(left, -half_height),
        Complex64::new(energy_cut, -half_height),
        Complex64::new(energy_cut, half_height),
        Complex64::new(left, half_height),
    ];
    let f = |z: Complex64| secular_function(z, p);
    let mut total = 0.0;
    for i in 0..4 {
        let (a, b) = (corners[i], corners[(i + 1) % 4]);
        const PIECES: usize = 32;
        let mut za = a;
        let mut fa = f(za);
        for j in 1..=PIECES {
            let zb = a + (b - a) * (j as f64 / PIECES as f64);
            let fb = f(zb);
            total += phase_change(&f, za, zb, fa, fb, 0)?;
            za = zb;
            fa = fb;
        }
    }
    let winding = total / (2.0 * PI);
    let rounded = winding.round();
    if (winding - rounded).abs() > 0.05 || rounded < 0.0 {
        return Err(Error::Solver(format!("non-integer winding number {winding}")));
    }
    Ok(rounded as usize)
}

fn phase_change<F: Fn(Complex64) -> Complex64>(
    f: &F,
    za: Complex64,
    zb: Complex64,
    fa: Complex64,
    fb: Complex64,
    depth: u32,
) -> Result<f64> {
    if fa == ZERO || fb == ZERO {
        return Err(Error::Solver("secular function vanishes on the counting contour".into()));
    }
    let d = (fb / fa).arg();
    if d.abs() < PI / 6.0 {
        return Ok(d);
    }
    if depth > 48 {
        return Err(Error::Solver("phase unwrapping did not resolve".into()));
    }
    let zm = 0.5 * (za + zb);
    let fm = f(zm);
    Ok(phase_change(f, za, zm, fa, fm, depth + 1)? + phase_change(f, zm, zb, fm, fb, depth + 1)?)
}

/// Whether the two lowest eigenvalues are real and distinct.
pub fn lowest_pair_is_real(p: &ProblemParams) -> Result<bool> {
    match solve_spectrum(p, 2, DEFAULT_TOL) {
        Ok(_) => Ok(true),
        Err(Error::Coalescence { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Coupling at which the lowest pair of levels leaves the real axis, by
/// bisection on [`lowest_pair_is_real`] over `[0, g_hi]`.
pub fn critical_coupling(box_half_width: f64, well_half_width: f64, g_hi: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::Domain("tol > 0 violated".into()));
    }
    let base = make_problem(box_half_width, well_half_width, 0.0)?;
    let at = |g: f64| base.with_coupling(g).and_then(|p| lowest_pair_is_real(&p));
    if at(g_hi)? {
        return Err(Error::BelowBreaking { g_hi });
    }
    let (mut lo, mut hi) = (0.0, g_hi);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if at(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
