//! Brute-force reference: second-order finite differences on the Dirichlet
//! box, independent of every closed form in the crate.
//!
//! The Hamiltonian `-d²/dx² + V` becomes the complex symmetric tridiagonal
//! matrix `(-ψ_{j+1} + 2ψ_j - ψ_{j-1}) / h² + V_j ψ_j` on the interior nodes
//! `x_j = -L + j h`, `h = 2L / (N + 1)`. `V_j` is the average of `V` over the
//! cell `[x_j - h/2, x_j + h/2]`, integrated piecewise between the model's
//! discontinuities. Plain nodal sampling of a step potential only converges
//! at first order; see [`Sampling`].

pub mod golden;
pub mod tridiag;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{make_problem, ProblemParams};

pub use tridiag::symmetric_tridiagonal_eigenvalues;

pub const MIN_GRID_POINTS: usize = 200;

/// Uniform interior grid of the box `(-L, L)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    #[serde(rename = "N")]
    pub n: usize,
    pub h: f64,
    #[serde(rename = "L")]
    pub box_half_width: f64,
}

impl Grid {
    pub fn new(box_half_width: f64, n: usize) -> Result<Self> {
        if n == 0 || !(box_half_width > 0.0) {
            return Err(Error::Domain("grid needs N >= 1 and L > 0".into()));
        }
        Ok(Grid {
            n,
            h: 2.0 * box_half_width / (n as f64 + 1.0),
            box_half_width,
        })
    }

    /// Grid whose spacing is as close as possible to `h`.
    pub fn with_spacing(box_half_width: f64, h: f64) -> Result<Self> {
        let n = (2.0 * box_half_width / h).round() as usize;
        Grid::new(box_half_width, n.saturating_sub(1).max(1))
    }

    #[inline]
    pub fn node(&self, j: usize) -> f64 {
        -self.box_half_width + self.h * (j + 1) as f64
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|j| self.node(j))
    }
}

/// How the potential enters the diagonal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampling {
    /// Cell averages, split at the discontinuities `-l, 0, l`.
    CellAverage,
    /// Point values at the nodes.
    Nodal,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleSpectrum {
    /// Lowest eigenvalues, sorted by real part.
    pub eigenvalues: Vec<Complex64>,
    /// `|E(N, 2N)_extrapolated - E(2N)|` when extrapolated.
    pub error_estimates: Option<Vec<f64>>,
    #[serde(skip)]
    pub eigenvectors: Option<Vec<Vec<Complex64>>>,
    pub grid: Grid,
    pub extrapolated: bool,
}

// 4-point Gauss-Legendre on [-1, 1]
const GAUSS_NODES: [f64; 4] = [
    -0.861_136_311_594_052_6,
    -0.339_981_043_584_856_3,
    0.339_981_043_584_856_3,
    0.861_136_311_594_052_6,
];
const GAUSS_WEIGHTS: [f64; 4] = [
    0.347_854_845_137_453_9,
    0.652_145_154_862_546_1,
    0.652_145_154_862_546_1,
    0.347_854_845_137_453_9,
];

fn checked<F: Fn(f64) -> Complex64>(potential: &F, x: f64) -> Result<Complex64> {
    let v = potential(x);
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinitePotential { x })
    }
}

/// Potential on the grid nodes according to `sampling`.
pub fn sample_potential<F: Fn(f64) -> Complex64>(
    potential: &F,
    p: &ProblemParams,
    grid: &Grid,
    sampling: Sampling,
) -> Result<Vec<Complex64>> {
    let bps = p.breakpoints();
    grid.nodes()
        .map(|x| match sampling {
            Sampling::Nodal => checked(potential, x),
            Sampling::CellAverage => {
                let (a, b) = (x - 0.5 * grid.h, x + 0.5 * grid.h);
                let mut cuts = vec![a];
                cuts.extend(bps.iter().copied().filter(|&c| a < c && c < b));
                cuts.push(b);
                let mut total = Complex64::new(0.0, 0.0);
                for w in cuts.windows(2) {
                    let (mid, half) = (0.5 * (w[0] + w[1]), 0.5 * (w[1] - w[0]));
                    for (t, wt) in GAUSS_NODES.iter().zip(GAUSS_WEIGHTS) {
                        total += checked(potential, mid + half * t)? * (wt * half);
                    }
                }
                Ok(total / grid.h)
            }
        })
        .collect()
}

fn sort_by_real(v: &mut [Complex64]) {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// Lowest `n_levels` finite-difference eigenvalues on an `N`-point grid,
/// cell-averaged potential.
pub fn fd_spectrum<F: Fn(f64) -> Complex64>(
    potential: F,
    p: &ProblemParams,
    n: usize,
    n_levels: usize,
) -> Result<OracleSpectrum> {
    fd_spectrum_with(&potential, p, n, n_levels, Sampling::CellAverage, false)
}

pub fn fd_spectrum_with<F: Fn(f64) -> Complex64>(
    potential: &F,
    p: &ProblemParams,
    n: usize,
    n_levels: usize,
    sampling: Sampling,
    with_vectors: bool,
) -> Result<OracleSpectrum> {
    if n < MIN_GRID_POINTS {
        return Err(Error::Domain(format!("N >= {MIN_GRID_POINTS} violated: N = {n}")));
    }
    if n_levels == 0 || n_levels > n {
        return Err(Error::Domain(format!("need 1 <= n_levels <= N, got {n_levels}")));
    }
    let grid = Grid::new(p.box_half_width(), n)?;
    let inv_h2 = 1.0 / (grid.h * grid.h);
    let diag: Vec<Complex64> = sample_potential(potential, p, &grid, sampling)?
        .into_iter()
        .map(|v| v + 2.0 * inv_h2)
        .collect();
    let off = vec![Complex64::new(-inv_h2, 0.0); n - 1];
    let mut all = symmetric_tridiagonal_eigenvalues(&diag, &off)?;
    sort_by_real(&mut all);
    all.truncate(n_levels);
    let eigenvectors = with_vectors.then(|| {
        all.iter()
            .map(|&lambda| inverse_iteration(&diag, &off, lambda))
            .collect()
    });
    Ok(OracleSpectrum {
        eigenvalues: all,
        error_estimates: None,
        eigenvectors,
        grid,
        extrapolated: false,
    })
}

fn inverse_iteration(diag: &[Complex64], off: &[Complex64], lambda: Complex64) -> Vec<Complex64> {
    let shift = lambda + Complex64::new(1e-9, 1e-9) * (1.0 + lambda.norm());
    let n = diag.len();
    let mut v = vec![Complex64::new(1.0, 0.0); n];
    for _ in 0..4 {
        v = tridiag::solve_shifted(diag, off, shift, &v);
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|z| *z /= norm);
    }
    v
}

/// Eliminates the `h²` error term between two grids.
pub fn richardson(coarse: Complex64, h_coarse: f64, fine: Complex64, h_fine: f64) -> Complex64 {
    let (a, b) = (h_coarse * h_coarse, h_fine * h_fine);
    (a * fine - b * coarse) / (a - b)
}

/// Richardson-extrapolated spectrum from grids with `N` and `2N` points.
pub fn fd_spectrum_extrapolated<F: Fn(f64) -> Complex64>(
    potential: F,
    p: &ProblemParams,
    n: usize,
    n_levels: usize,
) -> Result<OracleSpectrum> {
    let coarse = fd_spectrum_with(&potential, p, n, n_levels, Sampling::CellAverage, false)?;
    let fine = fd_spectrum_with(&potential, p, 2 * n, n_levels, Sampling::CellAverage, false)?;
    let (hc, hf) = (coarse.grid.h, fine.grid.h);
    let eigenvalues: Vec<Complex64> = coarse
        .eigenvalues
        .iter()
        .zip(&fine.eigenvalues)
        .map(|(&c, &f)| richardson(c, hc, f, hf))
        .collect();
    let error_estimates = eigenvalues
        .iter()
        .zip(&fine.eigenvalues)
        .map(|(e, f)| (e - f).norm())
        .collect();
    Ok(OracleSpectrum {
        eigenvalues,
        error_estimates: Some(error_estimates),
        eigenvectors: None,
        grid: fine.grid,
        extrapolated: true,
    })
}

/// `max |-ψ'' + (V - E) ψ| / max |ψ|` over grid nodes farther than
/// `margin · h` from `±L` and from the discontinuities, with `ψ''` from the
/// three-point stencil of width `h`.
pub fn ode_residual<P, V>(psi: P, energy: f64, potential: V, grid: &Grid, p: &ProblemParams, margin: f64) -> f64
where
    P: Fn(f64) -> Complex64,
    V: Fn(f64) -> Complex64,
{
    let h = grid.h;
    let big_l = grid.box_half_width;
    let excluded = |x: f64| {
        (x + big_l).abs() <= margin * h
            || (big_l - x).abs() <= margin * h
            || p.breakpoints().iter().any(|b| (x - b).abs() <= margin * h)
    };
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for x in grid.nodes().filter(|&x| !excluded(x)) {
        let (left, mid, right) = (psi(x - h), psi(x), psi(x + h));
        let second = (left - 2.0 * mid + right) / (h * h);
        let r = -second + (potential(x) - energy) * mid;
        worst = worst.max(r.norm());
        scale = scale.max(mid.norm());
    }
    if scale == 0.0 {
        f64::INFINITY
    } else {
        worst / scale
    }
}

/// Whether the two lowest finite-difference eigenvalues of `V^(+)` are real
/// (imaginary parts below `1e-6 (π/2L)²`).
pub fn fd_lowest_pair_is_real(p: &ProblemParams, n: usize) -> Result<bool> {
    let spec = fd_spectrum(|x| vplus_sampler(p, x), p, n, 2)?;
    let threshold = 1e-6 * p.energy_scale();
    Ok(spec.eigenvalues.iter().all(|e| e.im.abs() < threshold))
}

/// `V^(+)` as a plain sampler, without the crate's region bookkeeping.
pub fn vplus_sampler(p: &ProblemParams, x: f64) -> Complex64 {
    let l = p.well_half_width();
    if x.abs() < l && x != 0.0 {
        Complex64::new(0.0, p.coupling() * x.signum())
    } else {
        Complex64::new(0.0, 0.0)
    }
}

/// Critical coupling of the `N`-point discretisation by bisection on
/// [`fd_lowest_pair_is_real`].
pub fn fd_critical_coupling(box_half_width: f64, well_half_width: f64, g_hi: f64, n: usize, tol: f64) -> Result<f64> {
    let base = make_problem(box_half_width, well_half_width, 0.0)?;
    let at = |g: f64| base.with_coupling(g).and_then(|p| fd_lowest_pair_is_real(&p, n));
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

/// Critical coupling extrapolated from `N` and `2N` point grids.
/// Returns `(extrapolated, coarse, fine)`.
pub fn fd_critical_coupling_extrapolated(
    box_half_width: f64,
    well_half_width: f64,
    g_hi: f64,
    n: usize,
    tol: f64,
) -> Result<(f64, f64, f64)> {
    let coarse = fd_critical_coupling(box_half_width, well_half_width, g_hi, n, tol)?;
    let fine = fd_critical_coupling(box_half_width, well_half_width, g_hi, 2 * n, tol)?;
    let hc = Grid::new(box_half_width, n)?.h;
    let hf = Grid::new(box_half_width, 2 * n)?.h;
    let ext = richardson(coarse.into(), hc, fine.into(), hf).re;
    Ok((ext, coarse, fine))
}
