//! Reference forms for the two degenerate geometries.
//!
//! * `l → 0`: the well disappears and the partner is that of the empty box,
//!   `V⁻ = 2k₀² csc²[k₀(x + L)]` with `k₀ = π / 2L`.
//! * `l → L`: no field-free regions remain. With `ψ_R1 ∝ sinh[κ(L - x)]`
//!   the only matching condition left is at the origin,
//!   `Re[κ coth(κL)] = 0`, and
//!   `V⁻ = 2κ² csch²[κ(x - L)] + ig` on `x > 0`, its PT image on `x < 0`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{interior_grid, make_problem, EnergyLevel, ProblemParams};
use crate::numerics::{brent_root, max_of};
use crate::susy::{partner_potential, superpotential, Factorization};

/// `l / L` at or below which the small-well comparison applies.
pub const SMALL_WELL_RATIO: f64 = 1e-4;
/// `(L - l) / L` at or below which the full-well comparison applies.
pub const FULL_WELL_GAP: f64 = 1e-6;
/// Fraction of `L` kept clear of the walls when comparing profiles.
pub const COMPARISON_MARGIN: f64 = 0.05;

/// `W` of the empty box, `-k₀ cot[k₀(x + L)]`.
pub fn box_superpotential(x: f64, box_half_width: f64) -> f64 {
    let k0 = std::f64::consts::PI / (2.0 * box_half_width);
    -k0 / (k0 * (x + box_half_width)).tan()
}

/// `V⁻` of the empty box, `2k₀² csc²[k₀(x + L)]`.
pub fn box_partner_potential(x: f64, box_half_width: f64) -> f64 {
    let k0 = std::f64::consts::PI / (2.0 * box_half_width);
    2.0 * k0 * k0 / (k0 * (x + box_half_width)).sin().powi(2)
}

/// The `l = L` problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SingleDiscontinuity {
    #[serde(rename = "L")]
    pub box_half_width: f64,
    pub g: f64,
    pub level0: EnergyLevel,
    /// `L - iπ/(2κ₀)`, the shift that turns `-κ tanh` into `-κ coth`.
    pub x_r1: Complex64,
}

/// `Re[κ coth(κL)]` at real `E`.
pub fn full_well_quantization(energy: f64, box_half_width: f64, g: f64) -> f64 {
    let (_, _, kappa) = crate::model::decompose_kappa(energy, g);
    (kappa * (kappa * box_half_width).cosh() / (kappa * box_half_width).sinh()).re
}

/// Lowest level of the `l = L` problem.
pub fn single_discontinuity(box_half_width: f64, g: f64) -> Result<SingleDiscontinuity> {
    // validates L and g; l is irrelevant here
    make_problem(box_half_width, 0.5 * box_half_width, g)?;
    let scale = (std::f64::consts::PI / (2.0 * box_half_width)).powi(2);
    let f = |e: f64| full_well_quantization(e, box_half_width, g);
    let step = scale / 16.0;
    let e_max = 64.0 * scale + 4.0 * g;
    let mut a = 0.25 * scale;
    let mut fa = f(a);
    while a < e_max {
        let b = a + step;
        let fb = f(b);
        if fa.signum() != fb.signum() {
            if let Some(root) = brent_root(f, a, b, 1e-14 * b) {
                // discard sign changes through poles
                if f(root).abs() < 1e-6 * (1.0 + fa.abs().min(fb.abs())) {
                    let level0 = EnergyLevel::new(0, root, g)?;
                    let x_r1 = box_half_width - Complex64::new(0.0, std::f64::consts::PI) / (2.0 * level0.kappa);
                    return Ok(SingleDiscontinuity {
                        box_half_width,
                        g,
                        level0,
                        x_r1,
                    });
                }
            }
        }
        a = b;
        fa = fb;
    }
    Err(Error::Solver(format!(
        "no real level of the l = L problem below {e_max} (g = {g})"
    )))
}

impl SingleDiscontinuity {
    pub fn superpotential(&self, x: f64) -> Complex64 {
        let big_l = self.box_half_width;
        if x >= 0.0 {
            let q = self.level0.kappa;
            let u = q * (x - big_l);
            -q * u.cosh() / u.sinh()
        } else {
            let q = self.level0.kappa.conj();
            let u = q * (-x - big_l);
            q * u.cosh() / u.sinh()
        }
    }

    pub fn partner_potential(&self, x: f64) -> Complex64 {
        let big_l = self.box_half_width;
        if x >= 0.0 {
            let q = self.level0.kappa;
            2.0 * q * q / (q * (x - big_l)).sinh().powi(2) + Complex64::new(0.0, self.g)
        } else {
            let q = self.level0.kappa.conj();
            2.0 * q * q / (q * (x + big_l)).sinh().powi(2) - Complex64::new(0.0, self.g)
        }
    }
}

/// Interior sample points used for the limit comparisons.
pub fn comparison_points(p: &ProblemParams, samples: usize) -> Vec<f64> {
    let big_l = p.box_half_width();
    interior_grid(big_l, samples, COMPARISON_MARGIN * big_l)
}

/// `max |V⁻ - 2k₀² csc²[k₀(x + L)]|` over the comparison points.
pub fn small_well_deviation(fac: &Factorization, samples: usize) -> Result<f64> {
    let big_l = fac.params.box_half_width();
    let mut worst: f64 = 0.0;
    for x in comparison_points(&fac.params, samples) {
        let v = partner_potential(x, fac)?;
        worst = worst.max((v - box_partner_potential(x, big_l)).norm());
    }
    Ok(worst)
}

/// `max |V⁻ - V⁻_single|` over the comparison points, plus the same for `W`.
pub fn full_well_deviation(fac: &Factorization, samples: usize) -> Result<(f64, f64)> {
    let p = &fac.params;
    let reference = single_discontinuity(p.box_half_width(), p.coupling())?;
    let pts = comparison_points(p, samples);
    let dv = max_of(
        pts.iter()
            .map(|&x| (partner_potential(x, fac).unwrap_or_default() - reference.partner_potential(x)).norm()),
    );
    let dw = max_of(
        pts.iter()
            .map(|&x| (superpotential(x, fac).unwrap_or_default() - reference.superpotential(x)).norm()),
    );
    Ok((dv, dw))
}

/// Which limit, if any, a geometry is close enough to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LimitCase {
    SmallWell,
    FullWell,
}

pub fn limit_case(p: &ProblemParams) -> Option<LimitCase> {
    let (big_l, l) = (p.box_half_width(), p.well_half_width());
    if l <= SMALL_WELL_RATIO * big_l {
        Some(LimitCase::SmallWell)
    } else if big_l - l <= FULL_WELL_GAP * big_l {
        Some(LimitCase::FullWell)
    } else {
        None
    }
}
