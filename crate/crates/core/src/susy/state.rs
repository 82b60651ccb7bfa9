//! Closed-form eigenfunctions of `H^(+)`.
//!
//! ```text
//! R2:  A sin[k (L - x)]                       L2:  A* sin[k (L + x)]
//! R1:  B cosh(κ x) + i C/(κ l) sinh(κ x)      L1:  B cosh(κ* x) + i C/(κ* l) sinh(κ* x)
//! ```
//!
//! with `B`, `C` real, so `ψ(x) = conj ψ(-x)` and value and slope are
//! automatically continuous at the origin. Matching at `x = l` fixes `A`
//! and `C / B`; `C` comes out real only when `E` is an eigenvalue.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{interior_grid, EnergyLevel, ProblemParams, RegionTag};
use crate::numerics::max_of;

/// Threshold on `|Im C| / (1 + |C|)` above which the input energy is
/// rejected as not being an eigenvalue.
pub const REALNESS_THRESHOLD: f64 = 1e-9;

/// Relative size of `k cos θ + κ coth(κl) sin θ` below which the state is
/// treated as having `ψ(0) = 0` (odd Hermitian levels).
const DEGENERATE_B: f64 = 1e-8;

/// One eigenfunction of `H^(+)` in the closed form above.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlusEigenstate {
    pub params: ProblemParams,
    pub level: EnergyLevel,
    pub a: Complex64,
    pub b: f64,
    pub c: f64,
    /// `|Im C| / (1 + |C|)` before the imaginary part was dropped.
    pub realness_residual: f64,
}

/// Ground state `ψ^(+)_0`.
pub type GroundStatePlus = PlusEigenstate;
/// Excited state `ψ^(+)_{n+1}`.
pub type ExcitedStatePlus = PlusEigenstate;

/// Right side of `tanh(κ x_R1) = (k cot[k(L-l)] coth(κl) + κ) / (k cot[k(L-l)] + κ coth(κl))`,
/// multiplied through by `sin[k(L-l)]` so it stays finite when `k(L-l)`
/// hits a multiple of `π`.
pub fn matching_ratio(p: &ProblemParams, level: &EnergyLevel) -> (Complex64, Complex64) {
    let (big_l, l) = (p.box_half_width(), p.well_half_width());
    let (k, kappa) = (level.k, level.kappa);
    let theta = k * (big_l - l);
    let (sin_t, cos_t) = theta.sin_cos();
    let coth = (kappa * l).cosh() / (kappa * l).sinh();
    let num = k * cos_t * coth + kappa * sin_t;
    let den = k * cos_t + kappa * coth * sin_t;
    (num, den)
}

/// The state of energy `level` with `B = 1`.
pub fn plus_eigenstate(p: &ProblemParams, level: &EnergyLevel) -> Result<PlusEigenstate> {
    let (big_l, l) = (p.box_half_width(), p.well_half_width());
    let (k, kappa) = (level.k, level.kappa);
    let theta = k * (big_l - l);
    let (num, den) = matching_ratio(p, level);
    let i = Complex64::i();

    let (b, c_complex) = if den.norm() > DEGENERATE_B * (num.norm() + kappa.norm()) {
        (1.0, i * kappa * l * num / den)
    } else {
        // ψ(0) = 0: only the sinh part survives; pick C = 1 with the phase
        // that makes it real.
        (0.0, Complex64::new(1.0, 0.0))
    };
    let realness_residual = c_complex.im.abs() / (1.0 + c_complex.norm());
    if !(realness_residual <= REALNESS_THRESHOLD) {
        return Err(Error::MatchingFailure {
            energy: level.energy,
            imag: c_complex.im,
            threshold: REALNESS_THRESHOLD,
        });
    }
    let c = c_complex.re;

    let a = if b == 1.0 {
        // A = B κ csc[k(L-l)] csch(κl) / (k cot[k(L-l)] + κ coth(κl))
        kappa / ((kappa * l).sinh() * den)
    } else {
        let (sin_t, cos_t) = theta.sin_cos();
        let psi_l = i * c / (kappa * l) * (kappa * l).sinh();
        let dpsi_l = i * c / l * (kappa * l).cosh();
        psi_l * sin_t - dpsi_l * cos_t / k
    };

    Ok(PlusEigenstate {
        params: *p,
        level: *level,
        a,
        b,
        c,
        realness_residual,
    })
}

/// `ψ^(+)_0` from the `n = 0` level.
pub fn ground_state_plus(p: &ProblemParams, level0: &EnergyLevel) -> Result<GroundStatePlus> {
    if level0.n != 0 {
        return Err(Error::Domain(format!("ground state needs level n = 0, got {}", level0.n)));
    }
    plus_eigenstate(p, level0)
}

impl PlusEigenstate {
    /// `(ψ, ψ')` of the `tag` branch at `x`, which may sit on the closure of
    /// the region.
    pub fn branch(&self, tag: RegionTag, x: f64) -> (Complex64, Complex64) {
        let big_l = self.params.box_half_width();
        let l = self.params.well_half_width();
        let (k, kappa) = (self.level.k, self.level.kappa);
        let i = Complex64::i();
        match tag {
            RegionTag::R2 => {
                let (s, c) = (k * (big_l - x)).sin_cos();
                (self.a * s, -k * self.a * c)
            }
            RegionTag::L2 => {
                let (s, c) = (k * (big_l + x)).sin_cos();
                let a = self.a.conj();
                (a * s, k * a * c)
            }
            RegionTag::R1 | RegionTag::L1 => {
                let q = if tag == RegionTag::R1 { kappa } else { kappa.conj() };
                let (sh, ch) = ((q * x).sinh(), (q * x).cosh());
                let odd = i * self.c / (q * l);
                (self.b * ch + odd * sh, self.b * q * sh + odd * q * ch)
            }
        }
    }

    pub fn value(&self, x: f64) -> Result<Complex64> {
        Ok(self.branch(self.params.locate(x)?, x).0)
    }

    pub fn derivative(&self, x: f64) -> Result<Complex64> {
        Ok(self.branch(self.params.locate(x)?, x).1)
    }

    /// `ψ''` from the equation itself, `(V - E) ψ`.
    pub fn second_derivative(&self, x: f64) -> Result<Complex64> {
        let tag = self.params.locate(x)?;
        Ok((self.params.vplus_in(tag) - self.level.energy) * self.branch(tag, x).0)
    }

    /// `max |ψ|` over `samples` points in the box.
    pub fn sup_norm(&self, samples: usize) -> f64 {
        let big_l = self.params.box_half_width();
        max_of(
            interior_grid(big_l, samples, 0.0)
                .into_iter()
                .map(|x| self.value(x).map(|v| v.norm()).unwrap_or(0.0)),
        )
    }

    /// Relative value and slope mismatches at `-l`, `0`, `l`.
    pub fn continuity_residuals(&self) -> [(f64, f64); 3] {
        let l = self.params.well_half_width();
        let scale = self.sup_norm(401).max(f64::MIN_POSITIVE);
        let kscale = scale * (self.level.k + self.level.kappa.norm());
        let gap = |left: RegionTag, right: RegionTag, x: f64| {
            let (a, da) = self.branch(left, x);
            let (b, db) = self.branch(right, x);
            ((a - b).norm() / scale, (da - db).norm() / kscale)
        };
        [
            gap(RegionTag::L2, RegionTag::L1, -l),
            gap(RegionTag::L1, RegionTag::R1, 0.0),
            gap(RegionTag::R1, RegionTag::R2, l),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::make_problem;
    use crate::spectrum::solve_spectrum;

    fn levels(l: f64, g: f64, n: usize) -> (ProblemParams, Vec<EnergyLevel>) {
        let p = make_problem(1.0, l, g).unwrap();
        (p, solve_spectrum(&p, n, 1e-10).unwrap().levels)
    }

    #[test]
    fn literal_constants_match_stable_forms() {
        let (p, lv) = levels(0.5, 2.0, 1);
        let lvl = lv[0];
        let (big_l, l) = (1.0, 0.5);
        let (k, kappa) = (lvl.k, lvl.kappa);
        let cot = 1.0 / (k * (big_l - l)).tan();
        let coth = 1.0 / (kappa * l).tanh();
        let den = k * cot + kappa * coth;
        let a_lit = kappa / (k * (big_l - l)).sin() / (kappa * l).sinh() / den;
        let c_lit = Complex64::i() * kappa * l * (k * cot * coth + kappa) / den;
        let gs = ground_state_plus(&p, &lvl).unwrap();
        assert!((gs.a - a_lit).norm() < 1e-12 * a_lit.norm());
        assert!((gs.c - c_lit.re).abs() < 1e-12);
        assert!(c_lit.im.abs() < 1e-10);
    }

    #[test]
    fn hermitian_ground_state_is_even_and_real() {
        let (p, lv) = levels(0.5, 0.0, 1);
        let gs = ground_state_plus(&p, &lv[0]).unwrap();
        assert!(gs.c.abs() < 1e-9);
        assert!(gs.a.im.abs() < 1e-12);
        for x in [-0.9, -0.3, 0.2, 0.7] {
            let v = gs.value(x).unwrap();
            assert!(v.im.abs() < 1e-12);
            assert!((v - gs.value(-x).unwrap()).norm() < 1e-12);
            let exact = (std::f64::consts::FRAC_PI_2 * x).cos();
            assert!((v.re - exact).abs() < 1e-9, "{v} vs {exact}");
        }
    }

    #[test]
    fn hermitian_first_excited_is_odd() {
        let (p, lv) = levels(0.5, 0.0, 2);
        let st = plus_eigenstate(&p, &lv[1]).unwrap();
        assert_eq!(st.b, 0.0);
        let scale = st.sup_norm(401);
        for x in [-0.9, -0.3, 0.2, 0.7] {
            let v = st.value(x).unwrap();
            assert!((v + st.value(-x).unwrap()).norm() < 1e-10 * scale);
        }
        for (v, d) in st.continuity_residuals() {
            assert!(v < 1e-9 && d < 1e-9, "{v} {d}");
        }
    }

    #[test]
    fn continuity_and_pt_symmetry() {
        let (p, lv) = levels(0.5, 2.0, 3);
        for lvl in &lv {
            let st = plus_eigenstate(&p, lvl).unwrap();
            for (v, d) in st.continuity_residuals() {
                assert!(v < 1e-10 && d < 1e-10, "n={} {v} {d}", lvl.n);
            }
            for x in [-0.95, -0.6, -0.25, 0.1, 0.45, 0.8] {
                let a = st.value(x).unwrap();
                let b = st.value(-x).unwrap().conj();
                assert!((a - b).norm() < 1e-12 * st.sup_norm(101));
            }
        }
    }

    #[test]
    fn wrong_energy_is_a_matching_failure() {
        let (p, lv) = levels(0.5, 2.0, 1);
        let wrong = EnergyLevel::new(0, lv[0].energy + 0.1, 2.0).unwrap();
        let err = ground_state_plus(&p, &wrong).unwrap_err();
        assert!(matches!(err, Error::MatchingFailure { .. }), "{err}");
        assert!(ground_state_plus(&p, &EnergyLevel { n: 1, ..lv[0] }).is_err());
    }
}
