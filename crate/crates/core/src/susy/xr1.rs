//! The complex shift `x_R1` of the inner superpotential branch.
//!
//! Two independent routes:
//!
//! * closed form `x_R1 = atanh(z) / κ`, with `z` the matching ratio and the
//!   `atanh` branch followed continuously from `g = 0`;
//! * Newton on the real pair
//!   `sinh X cosh X / (sinh² X + cos² Y) = Nr / D`,
//!   `sin Y cos Y / (sinh² X + cos² Y) = Ni / D`,
//!   with `X = s x_r - t x_i`, `Y = t x_r + s x_i`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{EnergyLevel, ProblemParams};
use crate::spectrum::{lowest_real_roots, SpectrumOptions};

use super::state::matching_ratio;

/// Required agreement between the closed form and Newton.
pub const AGREEMENT_TOL: f64 = 1e-10;
/// Disagreement above which the solve is rejected.
pub const MISMATCH_TOL: f64 = 1e-8;

const TRACK_STEPS: usize = 32;
const MAX_TRACK_DEPTH: u32 = 12;
const MAX_ZETA_JUMP: f64 = 0.25;

/// Coefficients of the real pair at a level.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Coefficients {
    nr: f64,
    ni: f64,
    d: f64,
    s: f64,
    t: f64,
}

impl Coefficients {
    fn new(p: &ProblemParams, level: &EnergyLevel) -> Self {
        let (big_l, l) = (p.box_half_width(), p.well_half_width());
        let (k, s, t) = (level.k, level.s, level.t);
        let (s2, c2) = (2.0 * k * (big_l - l)).sin_cos();
        let (sh, ch) = ((2.0 * s * l).sinh(), (2.0 * s * l).cosh());
        let (sn, cs) = (2.0 * t * l).sin_cos();
        let p1 = -s * s * c2 + t * t;
        let p2 = s * s - t * t * c2;
        Coefficients {
            nr: p1 * sh + k * s * s2 * ch,
            ni: p2 * sn - k * t * s2 * cs,
            d: p1 * ch + p2 * cs + k * s2 * (s * sh + t * sn),
            s,
            t,
        }
    }

    /// Left sides minus right sides of the real pair.
    fn residual(&self, x_r1: Complex64) -> Complex64 {
        let x = self.s * x_r1.re - self.t * x_r1.im;
        let y = self.t * x_r1.re + self.s * x_r1.im;
        let den = x.cosh().powi(2) * y.cos().powi(2) + x.sinh().powi(2) * y.sin().powi(2);
        Complex64::new(
            x.sinh() * x.cosh() / den - self.nr / self.d,
            y.sin() * y.cos() / den - self.ni / self.d,
        )
    }
}

/// The real pair evaluated at a solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct XR1System {
    #[serde(rename = "X")]
    pub x: f64,
    #[serde(rename = "Y")]
    pub y: f64,
    #[serde(rename = "Nr")]
    pub nr: f64,
    #[serde(rename = "Ni")]
    pub ni: f64,
    #[serde(rename = "D")]
    pub d: f64,
    /// Absolute residuals of the two equations.
    pub residuals: [f64; 2],
}

impl XR1System {
    pub fn new(p: &ProblemParams, level: &EnergyLevel, x_r1: Complex64) -> Self {
        let c = Coefficients::new(p, level);
        let r = c.residual(x_r1);
        XR1System {
            x: c.s * x_r1.re - c.t * x_r1.im,
            y: c.t * x_r1.re + c.s * x_r1.im,
            nr: c.nr,
            ni: c.ni,
            d: c.d,
            residuals: [r.re.abs(), r.im.abs()],
        }
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals[0].max(self.residuals[1])
    }
}

/// Outcome of the dual solve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct XR1Solution {
    pub x_r1: Complex64,
    pub closed_form: Complex64,
    pub newton: Complex64,
    /// `m` in `atanh(z) + i π m` relative to the principal branch.
    pub branch: i64,
    pub agreement: f64,
    pub system: XR1System,
}

/// `z` such that `tanh(κ x_R1) = z`.
pub fn tanh_target(p: &ProblemParams, level: &EnergyLevel) -> Complex64 {
    let (num, den) = matching_ratio(p, level);
    num / den
}

fn nearest_branch(w: Complex64, reference: Complex64) -> (Complex64, i64) {
    let m = ((reference.im - w.im) / std::f64::consts::PI).round();
    (w + Complex64::new(0.0, std::f64::consts::PI * m), m as i64)
}

fn ground_level(p: &ProblemParams) -> Result<EnergyLevel> {
    let e = lowest_real_roots(p, 1, &SpectrumOptions::default())?[0];
    EnergyLevel::new(0, e, p.coupling())
}

/// Continues `ζ` from coupling `g_a` to `g_b`, halving the step while
/// the nearest branch still jumps.
fn track(p: &ProblemParams, g_a: f64, zeta_a: Complex64, g_b: f64, depth: u32) -> Result<Complex64> {
    let pb = p.with_coupling(g_b)?;
    let w = tanh_target(&pb, &ground_level(&pb)?).atanh();
    let (zeta_b, _) = nearest_branch(w, zeta_a);
    if (zeta_b - zeta_a).norm() <= MAX_ZETA_JUMP || depth >= MAX_TRACK_DEPTH {
        return Ok(zeta_b);
    }
    let mid = 0.5 * (g_a + g_b);
    let zeta_mid = track(p, g_a, zeta_a, mid, depth + 1)?;
    track(p, mid, zeta_mid, g_b, depth + 1)
}

/// `ζ = κ x_R1` followed from `g = 0` to the level's coupling.
fn tracked_zeta(p: &ProblemParams, level0: &EnergyLevel) -> Result<(Complex64, i64)> {
    let g = p.coupling();
    let z_final = tanh_target(p, level0).atanh();
    if g == 0.0 {
        return Ok((z_final, 0));
    }
    let start = ground_level(&p.with_coupling(0.0)?)?;
    let mut zeta = tanh_target(&p.with_coupling(0.0)?, &start).atanh();

    for i in 1..TRACK_STEPS {
        let g_a = g * (i - 1) as f64 / TRACK_STEPS as f64;
        let g_b = g * i as f64 / TRACK_STEPS as f64;
        zeta = track(p, g_a, zeta, g_b, 0)?;
    }
    let (zeta_final, m) = nearest_branch(z_final, zeta);
    Ok((zeta_final, m))
}

/// Newton in `x_R1` on the real pair, seeded at `seed`.
fn newton(coeffs: &Coefficients, kappa: Complex64, seed: Complex64) -> Complex64 {
    let scale = 1.0 + (coeffs.nr.abs() + coeffs.ni.abs()) / coeffs.d.abs();
    let resid = |x: Complex64| coeffs.residual(x);
    let mut x = seed;
    let mut r = resid(x);
    for _ in 0..60 {
        if r.norm() < 1e-15 * scale {
            break;
        }
        // d/dx tanh(κ x) = κ sech²(κ x); the real pair is that map split
        // into real and imaginary parts.
        let jac = kappa / (kappa * x).cosh().powi(2);
        let dx = -r / jac;
        let mut lambda = 1.0;
        loop {
            let trial = x + lambda * dx;
            let rt = resid(trial);
            if rt.norm() < r.norm() || lambda < 1e-6 {
                x = trial;
                r = rt;
                break;
            }
            lambda *= 0.5;
        }
    }
    x
}

/// Solves for `x_R1` both ways and insists they agree.
pub fn solve_xr1(p: &ProblemParams, level0: &EnergyLevel) -> Result<XR1Solution> {
    let kappa = level0.kappa;
    let (zeta, branch) = tracked_zeta(p, level0)?;
    let closed_form = zeta / kappa;
    let coeffs = Coefficients::new(p, level0);
    // offset the seed by 1% of the branch spacing so Newton converges on its own
    let offset = Complex64::from_polar(0.01 * std::f64::consts::PI / kappa.norm(), std::f64::consts::FRAC_PI_4);
    let newton = newton(&coeffs, kappa, closed_form + offset);
    let agreement = (newton - closed_form).norm() / (1.0 + closed_form.norm());
    if !(agreement <= MISMATCH_TOL) {
        return Err(Error::BranchMismatch { difference: agreement });
    }
    Ok(XR1Solution {
        x_r1: closed_form,
        closed_form,
        newton,
        branch,
        agreement,
        system: XR1System::new(p, level0, closed_form),
    })
}
