//! The full check battery for one parameter set.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Result;
use crate::limits::{full_well_deviation, limit_case, small_well_deviation, LimitCase};
use crate::model::{interior_grid, EnergyLevel, ProblemParams};
use crate::oracle::{fd_spectrum_extrapolated, ode_residual, vplus_sampler, Grid, OracleSpectrum};
use crate::partner::{check_matching, excited_state_plus, partner_eigenfunction, PartnerEigenfunction};
use crate::report::VerificationReport;
use crate::spectrum::solve_spectrum;
use crate::susy::{
    constraint_residuals, edge_skip_reason, factorize, ground_state_plus, partner_one_sided, partner_potential, riccati_residual,
    superpotential, superpotential_one_sided, vplus_jumps, zero_mode_residual, Factorization, Partner,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifyOptions {
    /// Number of partner levels to build and compare.
    pub partner_levels: usize,
    /// Coarse oracle grid; the fine grid doubles it.
    pub oracle_grid: usize,
    pub tol: f64,
    /// Interior sample count for pointwise checks.
    pub samples: usize,
    /// Run the finite-difference comparisons.
    pub with_oracle: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            partner_levels: 3,
            oracle_grid: 2000,
            tol: 1e-12,
            samples: 1000,
            with_oracle: true,
        }
    }
}

pub const RICCATI_STEP: f64 = 1e-5;
pub const RICCATI_THRESHOLD: f64 = 1e-6;
/// Fraction of `L` kept clear of the walls in the Riccati check.
pub const RICCATI_MARGIN: f64 = 0.2;
pub const ODE_STEP: f64 = 1e-4;
pub const ODE_THRESHOLD: f64 = 1e-5;
/// Fraction of `L` around the walls and breakpoints left out of the ODE check.
pub const ODE_MARGIN: f64 = 0.01;
pub const PLUS_ORACLE_THRESHOLD: f64 = 1e-5;
pub const PARTNER_ORACLE_THRESHOLD: f64 = 1e-4;
pub const LIMIT_THRESHOLD: f64 = 1e-4;

#[derive(Debug, Clone, Serialize)]
pub struct VerifyOutcome {
    pub factorization: Factorization,
    pub levels: Vec<EnergyLevel>,
    pub report: VerificationReport,
    pub plus_oracle: Option<OracleSpectrum>,
    pub partner_oracle: Option<OracleSpectrum>,
    pub limit: Option<LimitCase>,
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

/// Runs every check. Errors only when the pipeline cannot be built at all
/// (invalid input, broken regime); failed checks land in the report.
pub fn verify(p: &ProblemParams, opts: &VerifyOptions) -> Result<VerifyOutcome> {
    let big_l = p.box_half_width();
    let g = p.coupling();
    let spectrum = solve_spectrum(p, opts.partner_levels + 1, opts.tol)?;
    let levels = spectrum.levels.clone();
    let fac = factorize(p, &levels[0])?;
    let mut report = VerificationReport::new();

    for (lvl, r) in levels.iter().zip(&spectrum.secular_residuals) {
        report.check(format!("spectrum.secular[{}]", lvl.n), *r, 1e-8);
    }

    let gs = ground_state_plus(p, &levels[0])?;
    report.check("ground.realness", gs.realness_residual, 1e-9);
    for ((v, d), at) in gs.continuity_residuals().into_iter().zip(["-l", "0", "l"]) {
        report.check(format!("ground.value({at})"), v, 1e-10);
        report.check(format!("ground.slope({at})"), d, 1e-10);
    }

    report.check("xr1.agreement", fac.xr1.agreement, 1e-10);
    report.check("xr1.real_system", fac.xr1.system.max_residual(), 1e-9);
    let c = constraint_residuals(&fac);
    report.check("xr1.c1", c.c1, 1e-10);
    report.check("xr1.c2", c.c2, 1e-10);
    let edge = edge_skip_reason(&fac);
    report.check_unless(edge.as_deref(), "xr1.outer_matching", c.outer_matching, 1e-10);
    report.check("xr1.tanh_target", c.tanh_target, 1e-10);

    let pts = interior_grid(big_l, opts.samples, 1e-3 * big_l);
    let zm = zero_mode_residual(&fac, &gs, &pts)? / gs.sup_norm(opts.samples);
    report.check("zero_mode", zm, 1e-9);

    let riccati_pts = interior_grid(big_l, opts.samples, RICCATI_MARGIN * big_l);
    report.check(
        "riccati.plus",
        riccati_residual(&fac, Partner::Plus, &riccati_pts, RICCATI_STEP)?,
        RICCATI_THRESHOLD,
    );
    report.check(
        "riccati.minus",
        riccati_residual(&fac, Partner::Minus, &riccati_pts, RICCATI_STEP)?,
        RICCATI_THRESHOLD,
    );

    let mut w_pt: f64 = 0.0;
    let mut v_pt: f64 = 0.0;
    for &x in &pts {
        let (w, wm) = (superpotential(x, &fac)?, superpotential(-x, &fac)?);
        w_pt = w_pt.max((w + wm.conj()).norm() / (1.0 + w.norm()));
        let (v, vm) = (partner_potential(x, &fac)?, partner_potential(-x, &fac)?);
        v_pt = v_pt.max((v - vm.conj()).norm() / (1.0 + v.norm()));
    }
    report.check("symmetry.w_antisymmetric", w_pt, 1e-10);
    report.check("symmetry.vminus_symmetric", v_pt, 1e-10);

    // residuals relative to the one-sided values, which reach 1e18 when
    // a field-free region is only 1e-9 wide
    let ws = superpotential_one_sided(&fac);
    let vs = partner_one_sided(&fac);
    let pj = vplus_jumps(p);
    let expected = [
        Complex64::new(0.0, g),
        Complex64::new(0.0, -2.0 * g),
        Complex64::new(0.0, g),
    ];
    for (i, at) in ["-l", "0", "l"].into_iter().enumerate() {
        let reason = edge.as_deref().filter(|_| i != 1);
        let (w_minus, w_plus) = ws[i];
        let w_scale = 1.0 + w_minus.norm() + w_plus.norm();
        report.check_unless(reason, format!("continuity.w({at})"), (w_plus - w_minus).norm() / w_scale, 1e-8);
        let (v_minus, v_plus) = vs[i];
        let v_scale = 1.0 + v_minus.norm() + v_plus.norm();
        let jump = v_plus - v_minus;
        report.check_unless(reason, format!("jump.vminus({at})"), (jump - expected[i]).norm() / v_scale, 1e-10);
        report.check_unless(reason, format!("jump.sum({at})"), (jump + pj[i]).norm() / v_scale, 1e-10);
    }

    let mut partners: Vec<PartnerEigenfunction> = Vec::new();
    for n in 0..opts.partner_levels {
        let built = excited_state_plus(p, &levels[n + 1]).and_then(|ex| partner_eigenfunction(n, &fac, &ex));
        match built {
            Ok(pe) => {
                report.extend(check_matching(&pe, &fac));
                partners.push(pe);
            }
            Err(_) => report.fail(format!("partner[{n}].construct")),
        }
    }
    let ode_grid = Grid::with_spacing(big_l, ODE_STEP)?;
    for pe in partners.iter().take(2) {
        let r = ode_residual(
            |x| pe.value(x).unwrap_or_default(),
            pe.energy(),
            |x| partner_potential(x, &fac).unwrap_or_default() - fac.d0,
            &ode_grid,
            p,
            ODE_MARGIN * big_l / ODE_STEP,
        );
        report.check(format!("partner[{}].ode", pe.n), r, ODE_THRESHOLD);
    }

    let (mut plus_oracle, mut partner_oracle) = (None, None);
    if opts.with_oracle {
        let count = 3.min(levels.len());
        let plus = fd_spectrum_extrapolated(|x| vplus_sampler(p, x), p, opts.oracle_grid, count)?;
        for (lvl, e) in levels.iter().zip(&plus.eigenvalues) {
            report.check(
                format!("oracle.plus[{}]", lvl.n),
                rel(*e, lvl.energy.into()),
                PLUS_ORACLE_THRESHOLD,
            );
        }
        plus_oracle = Some(plus);

        let count = opts.partner_levels.min(3);
        let d0 = fac.d0;
        let minus = fd_spectrum_extrapolated(
            |x| partner_potential(x, &fac).unwrap_or(Complex64::new(f64::NAN, 0.0)) - d0,
            p,
            opts.oracle_grid,
            count,
        )?;
        for (n, e) in minus.eigenvalues.iter().enumerate() {
            let target = levels[n + 1].energy - d0;
            report.check(format!("oracle.minus[{n}]"), rel(*e, target.into()), PARTNER_ORACLE_THRESHOLD);
        }
        partner_oracle = Some(minus);
    }

    let limit = limit_case(p);
    match limit {
        Some(LimitCase::SmallWell) => {
            report.check("limit.small_well", small_well_deviation(&fac, opts.samples)?, LIMIT_THRESHOLD);
        }
        Some(LimitCase::FullWell) => match full_well_deviation(&fac, opts.samples) {
            Ok((dv, dw)) => {
                report.check("limit.full_well.vminus", dv, LIMIT_THRESHOLD);
                report.check("limit.full_well.w", dw, LIMIT_THRESHOLD);
            }
            Err(_) => report.fail("limit.full_well"),
        },
        None => {}
    }

    Ok(VerifyOutcome {
        factorization: fac,
        levels,
        report,
        plus_oracle,
        partner_oracle,
        limit,
    })
}
