//! Eigenfunctions of `H^(-)` from `ψ⁻_n = C⁻ (d/dx + W) ψ⁺_{n+1}`.
//!
//! The cot/coth factors of the closed forms multiply vanishing sin/sinh
//! factors at `±L` and at the origin, so every branch is evaluated in the
//! expanded product form (`sin·cot → cos`).

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{interior_grid, EnergyLevel, ProblemParams, RegionTag};
use crate::numerics::{ctanh, max_of, sin_cot};
use crate::report::VerificationReport;
use crate::susy::{c2_residual, constraint_residuals, edge_skip_reason, plus_eigenstate, ExcitedStatePlus, Factorization, PlusEigenstate};

/// Threshold used by [`check_matching`] and at construction.
pub const MATCHING_THRESHOLD: f64 = 1e-8;

/// `ψ⁺_{n+1}` for `n + 1 >= 1`.
pub fn excited_state_plus(p: &ProblemParams, level: &EnergyLevel) -> Result<ExcitedStatePlus> {
    if level.n == 0 {
        return Err(Error::Domain("excited state needs level n >= 1".into()));
    }
    plus_eigenstate(p, level)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PartnerEigenfunction {
    pub n: usize,
    /// Level `E^(+)_{n+1}` of the state the intertwiner acts on.
    pub level: EnergyLevel,
    /// Shared constant of all four regions.
    pub c_minus: Complex64,
    #[serde(skip)]
    pub state: PlusEigenstate,
    #[serde(skip)]
    pub fac: Factorization,
}

/// `(d/dx + W) ψ` and its derivative on branch `tag`, expanded so that no
/// `0·∞` appears.
pub fn intertwine_branch(fac: &Factorization, st: &PlusEigenstate, tag: RegionTag, x: f64) -> (Complex64, Complex64) {
    let p = &fac.params;
    let big_l = p.box_half_width();
    let l = p.well_half_width();
    let k0 = fac.level0.k;
    let k = st.level.k;
    let i = Complex64::i();
    let value = match tag {
        RegionTag::R2 => {
            let u = big_l - x;
            st.a * (-k * (k * u).cos() + k0 * sin_cot(k, k0, u))
        }
        RegionTag::L2 => {
            let u = big_l + x;
            st.a.conj() * (k * (k * u).cos() - k0 * sin_cot(k, k0, u))
        }
        RegionTag::R1 | RegionTag::L1 => {
            let (q, q0, shift) = if tag == RegionTag::R1 {
                (st.level.kappa, fac.level0.kappa, fac.x_r1)
            } else {
                (st.level.kappa.conj(), fac.level0.kappa.conj(), -fac.x_l1)
            };
            let th = ctanh(q0 * (x - shift));
            let (sh, ch) = ((q * x).sinh(), (q * x).cosh());
            st.b * (q * sh - q0 * th * ch) + i * st.c / (q * l) * (q * ch - q0 * th * sh)
        }
    };
    // (ψ' + W ψ)' = (V⁺ - E) ψ + W' ψ + W ψ'
    let (psi, dpsi) = st.branch(tag, x);
    let (w, dw) = fac.superpotential_branch(tag, x);
    let second = (p.vplus_in(tag) - st.level.energy) * psi;
    (value, second + dw * psi + w * dpsi)
}

/// Builds `ψ⁻_n` with `C⁻ = i` and checks the boundary and continuity
/// conditions.
pub fn partner_eigenfunction(n: usize, fac: &Factorization, ex: &ExcitedStatePlus) -> Result<PartnerEigenfunction> {
    let pe = partner_eigenfunction_unchecked(n, fac, ex, Complex64::i())?;
    let edge_ok = edge_skip_reason(fac).is_none();
    for (name, residual) in pe.interface_residuals() {
        if !edge_ok && name.ends_with("l)") {
            continue;
        }
        if !(residual <= MATCHING_THRESHOLD) {
            return Err(Error::ContinuityViolation {
                interface: name.to_string(),
                residual,
            });
        }
    }
    Ok(pe)
}

/// Same as [`partner_eigenfunction`] with a chosen constant and no checks.
pub fn partner_eigenfunction_unchecked(
    n: usize,
    fac: &Factorization,
    ex: &ExcitedStatePlus,
    c_minus: Complex64,
) -> Result<PartnerEigenfunction> {
    if ex.params != fac.params {
        return Err(Error::Domain("state and factorization belong to different problems".into()));
    }
    if ex.level.n != n + 1 {
        return Err(Error::Domain(format!(
            "partner level {n} needs the H+ level {}, got {}",
            n + 1,
            ex.level.n
        )));
    }
    Ok(PartnerEigenfunction {
        n,
        level: ex.level,
        c_minus,
        state: *ex,
        fac: *fac,
    })
}

impl PartnerEigenfunction {
    /// The four regional constants; all equal by construction.
    pub fn regional_constants(&self) -> [Complex64; 4] {
        [self.c_minus; 4]
    }

    /// Eigenvalue of `H^(-) = -d² + V⁻ - D_0`.
    pub fn energy(&self) -> f64 {
        self.level.energy - self.fac.d0
    }

    pub fn branch(&self, tag: RegionTag, x: f64) -> (Complex64, Complex64) {
        let (v, d) = intertwine_branch(&self.fac, &self.state, tag, x);
        (self.c_minus * v, self.c_minus * d)
    }

    /// `ψ⁻_n(x)` for `|x| <= L`.
    pub fn value(&self, x: f64) -> Result<Complex64> {
        Ok(self.branch(self.fac.params.locate(x)?, x).0)
    }

    /// `ψ⁻_n'(x)` for `|x| < L`.
    pub fn derivative(&self, x: f64) -> Result<Complex64> {
        self.fac.params.check_open_box(x)?;
        Ok(self.branch(self.fac.params.locate(x)?, x).1)
    }

    pub fn sup_norm(&self, samples: usize) -> f64 {
        let big_l = self.fac.params.box_half_width();
        max_of(
            interior_grid(big_l, samples, 0.0)
                .into_iter()
                .map(|x| self.value(x).map(|v| v.norm()).unwrap_or(0.0)),
        )
    }

    /// Relative Dirichlet and continuity residuals, in the order
    /// `psi(-L)`, `psi(L)`, then value and slope at `-l`, `0`, `l`.
    pub fn interface_residuals(&self) -> Vec<(&'static str, f64)> {
        let p = &self.fac.params;
        let (big_l, l) = (p.box_half_width(), p.well_half_width());
        let scale = self.sup_norm(801).max(f64::MIN_POSITIVE);
        let kscale = scale * (self.level.k + self.level.kappa.norm() + self.fac.level0.k);
        let mut out = vec![
            ("dirichlet(-L)", self.branch(RegionTag::L2, -big_l).0.norm() / scale),
            ("dirichlet(L)", self.branch(RegionTag::R2, big_l).0.norm() / scale),
        ];
        let pairs = [
            ("-l", RegionTag::L2, RegionTag::L1, -l),
            ("0", RegionTag::L1, RegionTag::R1, 0.0),
            ("l", RegionTag::R1, RegionTag::R2, l),
        ];
        let names = [
            ("value(-l)", "slope(-l)"),
            ("value(0)", "slope(0)"),
            ("value(l)", "slope(l)"),
        ];
        for ((_, left, right, x), (vn, dn)) in pairs.into_iter().zip(names) {
            let (a, da) = self.branch(left, x);
            let (b, db) = self.branch(right, x);
            out.push((vn, (a - b).norm() / scale));
            out.push((dn, (da - db).norm() / kscale));
        }
        out
    }

    /// `max |ψ(x) - conj ψ(-x)| / max |ψ|` over `samples` points.
    pub fn pt_residual(&self, samples: usize) -> f64 {
        let big_l = self.fac.params.box_half_width();
        let scale = self.sup_norm(samples).max(f64::MIN_POSITIVE);
        max_of(interior_grid(big_l, samples, 0.0).into_iter().map(|x| {
            let a = self.value(x).unwrap_or_default();
            let b = self.value(-x).unwrap_or_default();
            (a - b.conj()).norm()
        })) / scale
    }
}

/// Residual report for the boundary, continuity, constraint and symmetry
/// conditions, each at [`MATCHING_THRESHOLD`].
pub fn check_matching(pe: &PartnerEigenfunction, fac: &Factorization) -> VerificationReport {
    let mut report = VerificationReport::new();
    let pe = PartnerEigenfunction { fac: *fac, ..*pe };
    let edge = edge_skip_reason(fac);
    for (name, r) in pe.interface_residuals() {
        let reason = edge.as_deref().filter(|_| name.ends_with("l)"));
        report.check_unless(reason, format!("partner[{}].{name}", pe.n), r, MATCHING_THRESHOLD);
    }
    let c = constraint_residuals(fac);
    report.check("constraint.c1", c.c1, MATCHING_THRESHOLD);
    report.check("constraint.c2(0)", c.c2, MATCHING_THRESHOLD);
    report.check(format!("constraint.c2({})", pe.level.n), c2_residual(&pe.level), MATCHING_THRESHOLD);
    report.check_unless(edge.as_deref(), "constraint.outer_matching", c.outer_matching, MATCHING_THRESHOLD);
    // κ_{n+1}² - κ_0² = k_0² - k_{n+1}²
    let (q, q0) = (pe.level.kappa, fac.level0.kappa);
    let (k, k0) = (pe.level.k, fac.level0.k);
    let rel = (q * q - q0 * q0 - (k0 * k0 - k * k)).norm() / (1.0 + k * k);
    report.check(format!("constraint.kappa_k({})", pe.level.n), rel, MATCHING_THRESHOLD);
    report.check(format!("partner[{}].pt_symmetry", pe.n), pe.pt_residual(1000), MATCHING_THRESHOLD);
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::make_problem;
    use crate::oracle::{ode_residual, Grid};
    use crate::spectrum::solve_spectrum;
    use crate::susy::{factorize, ground_state_plus, partner_potential, superpotential};

    fn setup(g: f64, levels: usize) -> (Factorization, Vec<EnergyLevel>) {
        let p = make_problem(1.0, 0.5, g).unwrap();
        let lv = solve_spectrum(&p, levels, 1e-12).unwrap().levels;
        (factorize(&p, &lv[0]).unwrap(), lv)
    }

    fn partner(fac: &Factorization, lv: &[EnergyLevel], n: usize) -> PartnerEigenfunction {
        let ex = excited_state_plus(&fac.params, &lv[n + 1]).unwrap();
        partner_eigenfunction(n, fac, &ex).unwrap()
    }

    #[test]
    fn excited_state_requires_positive_index() {
        let (fac, lv) = setup(2.0, 2);
        assert!(excited_state_plus(&fac.params, &lv[0]).is_err());
        let wrong = EnergyLevel::new(1, lv[1].energy + 0.1, 2.0).unwrap();
        assert!(matches!(
            excited_state_plus(&fac.params, &wrong),
            Err(Error::MatchingFailure { .. })
        ));
    }

    #[test]
    fn boundary_and_continuity() {
        let (fac, lv) = setup(2.0, 4);
        for n in 0..3 {
            let pe = partner(&fac, &lv, n);
            let report = check_matching(&pe, &fac);
            assert!(report.all_passed(), "{:?}", report.failures().collect::<Vec<_>>());
            assert!(pe.value(-1.0 + 1e-8).unwrap().norm() < 1e-6 * pe.sup_norm(1000));
            assert!(pe.regional_constants().iter().all(|c| *c == Complex64::i()));
        }
    }

    #[test]
    fn hermitian_partner_is_real_up_to_phase() {
        let (fac, lv) = setup(0.0, 3);
        let pe = partner(&fac, &lv, 0);
        assert!(check_matching(&pe, &fac).all_passed());
        let scale = pe.sup_norm(400);
        let r = pe.value(0.3).unwrap();
        let phase = r / r.norm();
        for x in interior_grid(1.0, 50, 0.01) {
            let v = pe.value(x).unwrap() / phase;
            assert!(v.im.abs() < 1e-10 * scale, "x={x}: {v}");
        }
    }

    #[test]
    fn matches_direct_intertwiner() {
        let (fac, lv) = setup(2.0, 3);
        let pe = partner(&fac, &lv, 1);
        let st = pe.state;
        for x in interior_grid(1.0, 200, 0.01) {
            if fac.params.breakpoints().iter().any(|b| (x - b).abs() < 1e-3) {
                continue;
            }
            let direct = st.derivative(x).unwrap() + superpotential(x, &fac).unwrap() * st.value(x).unwrap();
            let ratio = pe.value(x).unwrap() / direct;
            assert!((ratio - Complex64::i()).norm() < 1e-8, "x={x}: {ratio}");
        }
    }

    #[test]
    fn zero_mode_is_annihilated() {
        let (fac, _) = setup(2.0, 1);
        let gs = ground_state_plus(&fac.params, &fac.level0).unwrap();
        let worst = max_of(interior_grid(1.0, 1000, 1e-3).into_iter().map(|x| {
            let tag = fac.params.locate(x).unwrap();
            intertwine_branch(&fac, &gs, tag, x).0.norm()
        }));
        assert!(worst < 1e-9 * gs.sup_norm(1000), "{worst}");
    }

    #[test]
    fn pt_symmetry_needs_imaginary_constant() {
        let (fac, lv) = setup(2.0, 2);
        let ex = excited_state_plus(&fac.params, &lv[1]).unwrap();
        let good = partner_eigenfunction(0, &fac, &ex).unwrap();
        assert!(good.pt_residual(1000) < 1e-9);
        let real = partner_eigenfunction_unchecked(0, &fac, &ex, Complex64::new(1.0, 0.0)).unwrap();
        assert!(real.pt_residual(1000) > 0.1);
    }

    #[test]
    fn perturbed_shift_breaks_slope_at_origin() {
        let (fac, lv) = setup(2.0, 2);
        let pe = partner(&fac, &lv, 0);
        let bad = fac.with_x_r1(fac.x_r1 + 0.01);
        let report = check_matching(&pe, &bad);
        assert!(!report.get("partner[0].slope(0)").unwrap().passed);
        let ex = excited_state_plus(&bad.params, &lv[1]).unwrap();
        assert!(matches!(
            partner_eigenfunction(0, &bad, &ex),
            Err(Error::ContinuityViolation { .. })
        ));
    }

    #[test]
    fn satisfies_partner_equation() {
        let (fac, lv) = setup(2.0, 3);
        let grid = Grid::with_spacing(1.0, 1e-4).unwrap();
        for n in 0..2 {
            let pe = partner(&fac, &lv, n);
            let r = ode_residual(
                |x| pe.value(x).unwrap(),
                pe.energy(),
                |x| partner_potential(x, &fac).unwrap() - fac.d0,
                &grid,
                &fac.params,
                10.0,
            );
            assert!(r < 1e-5, "n={n}: {r}");
        }
    }
}
