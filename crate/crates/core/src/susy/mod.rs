//! Factorization `H^(+) - D_0 = A⁺A` around the ground state.
//!
//! With `W = -ψ₀'/ψ₀` the pair `V^(±) - D_0 = W² ∓ W'` holds region by
//! region:
//!
//! ```text
//! L2: W = -k₀ cot[k₀(x + L)]            V⁻ = 2k₀² csc²[k₀(x + L)]
//! L1: W = -κ₀* tanh[κ₀*(x + x_L1)]      V⁻ = -2κ₀*² sech²[κ₀*(x + x_L1)] - ig
//! R1: W = -κ₀ tanh[κ₀(x - x_R1)]        V⁻ = -2κ₀² sech²[κ₀(x - x_R1)] + ig
//! R2: W = -k₀ cot[k₀(x - L)]            V⁻ = 2k₀² csc²[k₀(x - L)]
//! ```
//!
//! `V⁻` here is the bare partner potential, so `H^(-) = -d² + V⁻ - D_0`.

pub mod state;
pub mod xr1;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Result;
use crate::model::{EnergyLevel, ProblemParams, RegionTag};
use crate::numerics::ctanh;
use crate::spectrum::solve_spectrum;

pub use state::{ground_state_plus, plus_eigenstate, ExcitedStatePlus, GroundStatePlus, PlusEigenstate};
pub use xr1::{solve_xr1, tanh_target, XR1Solution, XR1System};

/// Everything needed to evaluate `W` and `V⁻`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Factorization {
    pub params: ProblemParams,
    pub level0: EnergyLevel,
    #[serde(rename = "D0")]
    pub d0: f64,
    #[serde(rename = "x_L2")]
    pub x_l2: f64,
    #[serde(rename = "x_R2")]
    pub x_r2: f64,
    #[serde(rename = "x_R1")]
    pub x_r1: Complex64,
    #[serde(rename = "x_L1")]
    pub x_l1: Complex64,
    pub xr1: XR1Solution,
}

/// Builds the factorization from the `n = 0` level.
pub fn factorize(p: &ProblemParams, level0: &EnergyLevel) -> Result<Factorization> {
    // the ground state must exist; this also rejects off-shell energies
    ground_state_plus(p, level0)?;
    let xr1 = solve_xr1(p, level0)?;
    let big_l = p.box_half_width();
    let k0 = level0.k;
    let half = std::f64::consts::PI / (2.0 * k0);
    Ok(Factorization {
        params: *p,
        level0: *level0,
        d0: level0.energy,
        x_l2: big_l + half,
        x_r2: big_l - half,
        x_r1: xr1.x_r1,
        x_l1: xr1.x_r1.conj(),
        xr1,
    })
}

/// Solves for the ground level and factorizes.
pub fn factorize_problem(p: &ProblemParams, tol: f64) -> Result<Factorization> {
    let report = solve_spectrum(p, 1, tol)?;
    factorize(p, &report.levels[0])
}

/// Which member of the pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Partner {
    Plus,
    Minus,
}

impl Factorization {
    /// Copy with a different `x_R1`, for probing sensitivity.
    pub fn with_x_r1(&self, x_r1: Complex64) -> Self {
        Factorization {
            x_r1,
            x_l1: x_r1.conj(),
            ..*self
        }
    }

    fn kappa(&self, tag: RegionTag) -> Complex64 {
        if tag == RegionTag::L1 {
            self.level0.kappa.conj()
        } else {
            self.level0.kappa
        }
    }

    /// `(W, W')` of the `tag` branch; `x` may sit on the closure of the
    /// region but not on `±L`.
    pub fn superpotential_branch(&self, tag: RegionTag, x: f64) -> (Complex64, Complex64) {
        let big_l = self.params.box_half_width();
        let k0 = self.level0.k;
        match tag {
            RegionTag::L2 | RegionTag::R2 => {
                let u = if tag == RegionTag::L2 { x + big_l } else { x - big_l };
                let (s, c) = (k0 * u).sin_cos();
                let w = -k0 * c / s;
                (w.into(), (k0 * k0 / (s * s)).into())
            }
            RegionTag::L1 | RegionTag::R1 => {
                let q = self.kappa(tag);
                let shift = if tag == RegionTag::L1 { -self.x_l1 } else { self.x_r1 };
                let arg = q * (x - shift);
                let sech2 = 1.0 / arg.cosh().powi(2);
                (-q * ctanh(arg), -q * q * sech2)
            }
        }
    }

    /// Bare `V⁻` of the `tag` branch.
    pub fn partner_branch(&self, tag: RegionTag, x: f64) -> Complex64 {
        let big_l = self.params.box_half_width();
        let k0 = self.level0.k;
        match tag {
            RegionTag::L2 | RegionTag::R2 => {
                let u = if tag == RegionTag::L2 { x + big_l } else { x - big_l };
                (2.0 * k0 * k0 / (k0 * u).sin().powi(2)).into()
            }
            RegionTag::L1 | RegionTag::R1 => {
                let q = self.kappa(tag);
                let shift = if tag == RegionTag::L1 { -self.x_l1 } else { self.x_r1 };
                let sech2 = 1.0 / (q * (x - shift)).cosh().powi(2);
                -2.0 * q * q * sech2 + self.params.vplus_in(tag)
            }
        }
    }

    /// `W` in the literal tangent form with `x_L2`, `x_R2` for the outer
    /// regions; equal to [`superpotential`] up to rounding.
    pub fn superpotential_tan_form(&self, x: f64) -> Result<Complex64> {
        self.params.check_open_box(x)?;
        let k0 = self.level0.k;
        Ok(match self.params.locate(x)? {
            RegionTag::L2 => (k0 * (k0 * (x + self.x_l2)).tan()).into(),
            RegionTag::R2 => (k0 * (k0 * (x - self.x_r2)).tan()).into(),
            tag => self.superpotential_branch(tag, x).0,
        })
    }
}

/// `W(x)` for `-L < x < L`.
pub fn superpotential(x: f64, fac: &Factorization) -> Result<Complex64> {
    fac.params.check_open_box(x)?;
    Ok(fac.superpotential_branch(fac.params.locate(x)?, x).0)
}

/// Bare `V⁻(x)` for `-L < x < L`.
pub fn partner_potential(x: f64, fac: &Factorization) -> Result<Complex64> {
    fac.params.check_open_box(x)?;
    Ok(fac.partner_branch(fac.params.locate(x)?, x))
}

const JUMP_PAIRS: [(RegionTag, RegionTag); 3] = [
    (RegionTag::L2, RegionTag::L1),
    (RegionTag::L1, RegionTag::R1),
    (RegionTag::R1, RegionTag::R2),
];

/// `(V⁻(x_i-), V⁻(x_i+))` at `x_i = -l, 0, l`, from the branch forms
/// evaluated exactly at the breakpoints.
pub fn partner_one_sided(fac: &Factorization) -> [(Complex64, Complex64); 3] {
    let bps = fac.params.breakpoints();
    std::array::from_fn(|i| {
        let (left, right) = JUMP_PAIRS[i];
        (fac.partner_branch(left, bps[i]), fac.partner_branch(right, bps[i]))
    })
}

/// `(W(x_i-), W(x_i+))` at `x_i = -l, 0, l`.
pub fn superpotential_one_sided(fac: &Factorization) -> [(Complex64, Complex64); 3] {
    let bps = fac.params.breakpoints();
    std::array::from_fn(|i| {
        let (left, right) = JUMP_PAIRS[i];
        (
            fac.superpotential_branch(left, bps[i]).0,
            fac.superpotential_branch(right, bps[i]).0,
        )
    })
}

/// `V⁻(x_i+) - V⁻(x_i-)` at `x_i = -l, 0, l`.
pub fn potential_jumps(fac: &Factorization) -> [Complex64; 3] {
    partner_one_sided(fac).map(|(a, b)| b - a)
}

/// Jumps of `V^(+)` at the same points: `(-ig, 2ig, -ig)`.
pub fn vplus_jumps(p: &ProblemParams) -> [Complex64; 3] {
    std::array::from_fn(|i| {
        let (left, right) = JUMP_PAIRS[i];
        p.vplus_in(right) - p.vplus_in(left)
    })
}

/// Jumps of `W` at `-l, 0, l`.
pub fn superpotential_jumps(fac: &Factorization) -> [Complex64; 3] {
    superpotential_one_sided(fac).map(|(a, b)| b - a)
}

/// Conditioning above which identities evaluated at `±l` are left unjudged.
pub const EDGE_CONDITIONING_LIMIT: f64 = 1e4;

/// Roundoff amplification of the closed forms at `x = ±l`, `|W(l)| / |κ₀|`.
/// Of order one unless a field-free region is very thin, where `W(l)`
/// grows like `1 / (L - l)` and the branch values cancel catastrophically.
pub fn edge_conditioning(fac: &Factorization) -> f64 {
    let w = fac.superpotential_branch(RegionTag::R2, fac.params.well_half_width()).0;
    (w.norm() / fac.level0.kappa.norm()).max(1.0)
}

/// Reason string when the `±l` identities cannot be judged in double
/// precision.
pub fn edge_skip_reason(fac: &Factorization) -> Option<String> {
    let c = edge_conditioning(fac);
    (c > EDGE_CONDITIONING_LIMIT).then(|| format!("ill-conditioned at ±l (amplification {c:.1e})"))
}

/// Residuals of the identities that pin `x_R1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConstraintResiduals {
    /// `|κ tanh(κ x_R1) + κ* tanh(κ* x_R1*)|`.
    pub c1: f64,
    /// `|κ*² - κ² + 2ig|`.
    pub c2: f64,
    /// `κ tanh[κ(l - x_R1)] + k cot[k(L - l)] = 0` multiplied through by
    /// `cosh[κ(l - x_R1)] sin[k(L - l)]`, relative to the two terms.
    pub outer_matching: f64,
    /// `|tanh(κ x_R1) - z|`.
    pub tanh_target: f64,
}

pub fn constraint_residuals(fac: &Factorization) -> ConstraintResiduals {
    let p = &fac.params;
    let (big_l, l, g) = (p.box_half_width(), p.well_half_width(), p.coupling());
    let (k, kappa) = (fac.level0.k, fac.level0.kappa);
    let x = fac.x_r1;
    let kc = kappa.conj();
    let a = kappa * (l - x);
    let (sin_t, cos_t) = (k * (big_l - l)).sin_cos();
    let (t1, t2) = (kappa * a.sinh() * sin_t, k * a.cosh() * cos_t);
    ConstraintResiduals {
        c1: (kappa * ctanh(kappa * x) + kc * ctanh(kc * x.conj())).norm(),
        c2: (kc * kc - kappa * kappa + Complex64::new(0.0, 2.0 * g)).norm(),
        outer_matching: (t1 + t2).norm() / (t1.norm() + t2.norm()),
        tanh_target: (ctanh(kappa * x) - tanh_target(p, &fac.level0)).norm(),
    }
}

/// `|κ*² - κ² + 2ig|` for any level.
pub fn c2_residual(level: &EnergyLevel) -> f64 {
    let kc = level.kappa.conj();
    (kc * kc - level.kappa * level.kappa + Complex64::new(0.0, 2.0 * level.coupling())).norm()
}

/// `max |ψ₀' + W ψ₀|` over `points`, with both factors taken from the
/// closed forms.
pub fn zero_mode_residual(fac: &Factorization, gs: &GroundStatePlus, points: &[f64]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &x in points {
        let tag = fac.params.locate(x)?;
        fac.params.check_open_box(x)?;
        let (psi, dpsi) = gs.branch(tag, x);
        let (w, _) = fac.superpotential_branch(tag, x);
        worst = worst.max((dpsi + w * psi).norm());
    }
    Ok(worst)
}

/// `max |V^(±) - D_0 - W² ± W'|` over `points`, with `W'` from a central
/// difference of step `h`. Points closer than `10 h` to a breakpoint are
/// skipped.
pub fn riccati_residual(fac: &Factorization, sign: Partner, points: &[f64], h: f64) -> Result<f64> {
    let p = &fac.params;
    let mut worst: f64 = 0.0;
    for &x in points {
        if p.breakpoints().iter().any(|b| (x - b).abs() <= 10.0 * h) {
            continue;
        }
        let w = superpotential(x, fac)?;
        let dw = (superpotential(x + h, fac)? - superpotential(x - h, fac)?) / (2.0 * h);
        let lhs = match sign {
            Partner::Plus => crate::model::eval_vplus(x, p)? - fac.d0,
            Partner::Minus => partner_potential(x, fac)? - fac.d0,
        };
        let rhs = match sign {
            Partner::Plus => w * w - dw,
            Partner::Minus => w * w + dw,
        };
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{interior_grid, make_problem};
    use crate::oracle::{fd_spectrum_with, Grid, Sampling};

    fn fac(l: f64, g: f64) -> Factorization {
        factorize_problem(&make_problem(1.0, l, g).unwrap(), 1e-12).unwrap()
    }

    #[test]
    fn outer_constants() {
        let f = fac(0.5, 2.0);
        let k0 = f.level0.k;
        assert_eq!(f.x_l2, 1.0 + std::f64::consts::PI / (2.0 * k0));
        assert_eq!(f.x_r2, 1.0 - std::f64::consts::PI / (2.0 * k0));
        assert_eq!(f.x_l1, f.x_r1.conj());
        assert_eq!(f.d0, f.level0.energy);
        for x in [-0.9, -0.7, 0.55, 0.95] {
            let a = superpotential(x, &f).unwrap();
            let b = f.superpotential_tan_form(x).unwrap();
            assert!((a - b).norm() < 1e-12 * (1.0 + a.norm()));
        }
    }

    #[test]
    fn hermitian_superpotential_is_global_cot() {
        let f = fac(0.5, 0.0);
        let k0 = f.level0.k;
        for x in [-0.8, -0.25, 0.0, 0.25, 0.5, 0.8] {
            let exact = -k0 / (k0 * (x + 1.0)).tan();
            assert!((superpotential(x, &f).unwrap() - exact).norm() < 1e-10, "x={x}");
        }
        let jumps = superpotential_jumps(&f);
        assert!(jumps.iter().all(|j| j.norm() < 1e-10));
        assert!(potential_jumps(&f).iter().all(|j| j.norm() < 1e-10));
    }

    #[test]
    fn superpotential_endpoint_and_domain() {
        let f = fac(0.5, 2.0);
        assert!(superpotential(-1.0 + 1e-6, &f).unwrap().norm() > 1e5);
        assert!(superpotential(1.0, &f).is_err());
        assert!(partner_potential(-1.0, &f).is_err());
    }

    #[test]
    fn continuity_of_w_and_jumps_of_v() {
        let f = fac(0.5, 2.0);
        for j in superpotential_jumps(&f) {
            assert!(j.norm() < 1e-10, "{j}");
        }
        let g = 2.0;
        let expected = [
            Complex64::new(0.0, g),
            Complex64::new(0.0, -2.0 * g),
            Complex64::new(0.0, g),
        ];
        let jumps = potential_jumps(&f);
        let plus = vplus_jumps(&f.params);
        for i in 0..3 {
            assert!((jumps[i] - expected[i]).norm() < 1e-10, "{i}: {}", jumps[i]);
            assert!((jumps[i] + plus[i]).norm() < 1e-10);
        }
    }

    #[test]
    fn pt_symmetry_of_w_and_v() {
        let f = fac(0.5, 2.0);
        for x in interior_grid(1.0, 1000, 1e-3) {
            let w = superpotential(x, &f).unwrap();
            let wm = superpotential(-x, &f).unwrap();
            assert!((w + wm.conj()).norm() < 1e-10 * (1.0 + w.norm()), "x={x}");
            let v = partner_potential(x, &f).unwrap();
            let vm = partner_potential(-x, &f).unwrap();
            assert!((v - vm.conj()).norm() < 1e-10 * (1.0 + v.norm()), "x={x}");
        }
    }

    #[test]
    fn csc_minimum_at_quarter_period() {
        let f = fac(0.5, 2.0);
        let k0 = f.level0.k;
        // x_R2 lies outside R2 here; the branch form still applies
        let v = f.partner_branch(RegionTag::R2, f.x_r2);
        assert!((v - 2.0 * k0 * k0).norm() < 1e-12);
    }

    #[test]
    fn constraints_hold() {
        for (l, g) in [(0.5, 2.0), (0.25, 1.0), (0.75, 3.0)] {
            let f = fac(l, g);
            let c = constraint_residuals(&f);
            assert!(c.c1 < 1e-10 && c.c2 < 1e-10 && c.outer_matching < 1e-10 && c.tanh_target < 1e-10, "{c:?}");
        }
    }

    #[test]
    fn zero_mode_is_annihilated() {
        for (g, tol) in [(2.0, 1e-9), (0.0, 1e-12)] {
            let f = fac(0.5, g);
            let gs = ground_state_plus(&f.params, &f.level0).unwrap();
            let pts = interior_grid(1.0, 1000, 1e-3);
            let r = zero_mode_residual(&f, &gs, &pts).unwrap();
            assert!(r < tol * gs.sup_norm(1000), "g={g}: {r}");
        }
        let f = fac(0.5, 2.0);
        let gs = ground_state_plus(&f.params, &f.level0).unwrap();
        let bad = f.with_x_r1(f.x_r1 + 0.01);
        let r1: Vec<f64> = interior_grid(1.0, 1000, 1e-3).into_iter().filter(|x| *x > 0.0 && *x < 0.5).collect();
        assert!(zero_mode_residual(&bad, &gs, &r1).unwrap() > 1e-3);
    }

    #[test]
    fn riccati_pair() {
        let f = fac(0.5, 2.0);
        let pts = interior_grid(1.0, 1000, 0.2);
        for sign in [Partner::Plus, Partner::Minus] {
            let r = riccati_residual(&f, sign, &pts, 1e-5).unwrap();
            assert!(r < 1e-6, "{sign:?}: {r}");
        }
    }

    #[test]
    fn ground_state_overlaps_oracle_vector() {
        let f = fac(0.5, 2.0);
        let gs = ground_state_plus(&f.params, &f.level0).unwrap();
        let p = f.params;
        let spec = fd_spectrum_with(&|x| crate::oracle::vplus_sampler(&p, x), &p, 2000, 1, Sampling::CellAverage, true)
            .unwrap();
        let vec = &spec.eigenvectors.as_ref().unwrap()[0];
        let grid = Grid::new(1.0, 2000).unwrap();
        let exact: Vec<Complex64> = grid.nodes().map(|x| gs.value(x).unwrap()).collect();
        // unconjugated overlap, normalized: |<u, v>|² / (|u|²|v|²)
        let dot: Complex64 = exact.iter().zip(vec).map(|(a, b)| a.conj() * b).sum();
        let na: f64 = exact.iter().map(|a| a.norm_sqr()).sum();
        let nb: f64 = vec.iter().map(|a| a.norm_sqr()).sum();
        let overlap = dot.norm_sqr() / (na * nb);
        assert!(overlap > 1.0 - 1e-4, "{overlap}");
    }
}
