//! The five subcommands. Each returns an exit code and a rendered report.

use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};

use ptsusy::model::interior_grid;
use ptsusy::partner::{check_matching, excited_state_plus, partner_eigenfunction};
use ptsusy::spectrum::critical_coupling;
use ptsusy::susy::{constraint_residuals, factorize, partner_potential, potential_jumps, superpotential, superpotential_jumps};
use ptsusy::verify::{verify, VerifyOptions};
use ptsusy::{eval_vplus, solve_spectrum, Error, ProblemParams, VerificationReport};

use crate::config::{RunConfig, ScanConfig};
use crate::error::CliError;
use crate::output::{complex, num, to_value, Document, Rendered, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_BROKEN: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

/// Fraction of `L` left out at each wall when sampling curves.
pub const SAMPLE_MARGIN: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub rendered: Rendered,
}

fn params_json(cfg: &RunConfig) -> Value {
    let p = &cfg.params;
    json!({
        "L": p.box_half_width(),
        "l": p.well_half_width(),
        "g": p.coupling(),
        "n": cfg.n_levels,
        "grid": cfg.grid_points,
        "tol": cfg.tolerance,
    })
}

fn params_meta(table: &mut Table, p: &ProblemParams) {
    table
        .meta("L", num(p.box_half_width()))
        .meta("l", num(p.well_half_width()))
        .meta("g", num(p.coupling()));
}

fn pair(z: Complex64) -> Value {
    json!([z.re, z.im])
}

/// Report for parameters where the lowest levels have coalesced.
fn broken(cfg: &RunConfig, err: &Error) -> Outcome {
    let Error::Coalescence {
        real_roots,
        real_roots_below_cut,
        total_roots_below_cut,
        energy_cut,
        min_gap,
    } = err
    else {
        unreachable!("broken() is only called with coalescence errors")
    };
    let results = json!({
        "regime": "broken-detected",
        "message": err.to_string(),
        "real_roots": real_roots,
        "real_roots_below_cut": real_roots_below_cut,
        "total_roots_below_cut": total_roots_below_cut,
        "energy_cut": energy_cut,
        "min_gap": min_gap,
    });
    let mut table = Table::new(["index", "real_root"]);
    params_meta(&mut table, &cfg.params);
    table
        .meta("regime", "broken-detected")
        .meta("total_roots_below_cut", total_roots_below_cut.to_string())
        .meta("energy_cut", num(*energy_cut));
    for (i, e) in real_roots.iter().enumerate() {
        table.push(vec![i.to_string(), num(*e)]);
    }
    Outcome {
        code: EXIT_BROKEN,
        rendered: Rendered {
            document: Document::new(params_json(cfg), results, json!({})),
            table,
        },
    }
}

/// Runs `body`, turning coalescence into the exit-2 report.
fn guarded(cfg: &RunConfig, body: impl FnOnce() -> Result<Outcome, CliError>) -> Result<Outcome, CliError> {
    match body() {
        Err(CliError::Core(e)) if e.is_coalescence() => Ok(broken(cfg, &e)),
        other => other,
    }
}

pub fn spectrum(cfg: &RunConfig) -> Result<Outcome, CliError> {
    guarded(cfg, || {
        let report = solve_spectrum(&cfg.params, cfg.n_levels, cfg.tolerance)?;
        let results = json!({
            "regime": report.regime,
            "levels": report.levels,
        });
        let residuals = json!({ "secular": report.secular_residuals });
        let mut table = Table::new(["n", "E", "k", "s", "t", "re_kappa", "im_kappa", "secular_residual"]);
        params_meta(&mut table, &cfg.params);
        table.meta("regime", "unbroken");
        for (lvl, r) in report.levels.iter().zip(&report.secular_residuals) {
            table.push(vec![
                lvl.n.to_string(),
                num(lvl.energy),
                num(lvl.k),
                num(lvl.s),
                num(lvl.t),
                num(lvl.kappa.re),
                num(lvl.kappa.im),
                num(*r),
            ]);
        }
        Ok(Outcome {
            code: EXIT_OK,
            rendered: Rendered {
                document: Document::new(params_json(cfg), results, residuals),
                table,
            },
        })
    })
}

pub fn factorize_cmd(cfg: &RunConfig) -> Result<Outcome, CliError> {
    guarded(cfg, || {
        let p = &cfg.params;
        let levels = solve_spectrum(p, 1, cfg.tolerance)?.levels;
        let fac = factorize(p, &levels[0])?;
        let big_l = p.box_half_width();
        let xs = interior_grid(big_l, cfg.grid_points, SAMPLE_MARGIN * big_l);
        const COLUMNS: [&str; 7] = ["x", "re_W", "im_W", "re_Vminus", "im_Vminus", "re_Vplus", "im_Vplus"];
        let mut cols: [Vec<f64>; 7] = Default::default();
        for &x in &xs {
            let (w, vm, vp) = (superpotential(x, &fac)?, partner_potential(x, &fac)?, eval_vplus(x, p)?);
            for (c, v) in cols.iter_mut().zip([x, w.re, w.im, vm.re, vm.im, vp.re, vp.im]) {
                c.push(v);
            }
        }
        let jumps = potential_jumps(&fac);
        let w_jumps = superpotential_jumps(&fac);
        let constraints = constraint_residuals(&fac);

        let mut samples = serde_json::Map::new();
        for (name, c) in COLUMNS.iter().zip(&cols) {
            samples.insert((*name).to_string(), to_value(c));
        }
        let results = json!({
            "regime": "unbroken",
            "level0": fac.level0,
            "D0": fac.d0,
            "x_R1": pair(fac.x_r1),
            "x_L1": pair(fac.x_l1),
            "x_R2": fac.x_r2,
            "x_L2": fac.x_l2,
            "branch": fac.xr1.branch,
            "jump_points": p.breakpoints(),
            "jumps": jumps.map(pair),
            "W_jumps": w_jumps.map(pair),
            "sample_count": xs.len(),
            "samples": samples,
        });
        let residuals = json!({
            "xr1_agreement": fac.xr1.agreement,
            "xr1_real_system": fac.xr1.system.max_residual(),
            "c1": constraints.c1,
            "c2": constraints.c2,
            "outer_matching": constraints.outer_matching,
            "tanh_target": constraints.tanh_target,
        });

        let mut table = Table::new(COLUMNS);
        params_meta(&mut table, p);
        table
            .meta("D0", num(fac.d0))
            .meta("x_R1", complex(fac.x_r1))
            .meta("jump_points", p.breakpoints().map(num).join(" "))
            .meta("jumps", jumps.map(complex).join(" "));
        for i in 0..xs.len() {
            table.push(cols.iter().map(|c| num(c[i])).collect());
        }
        Ok(Outcome {
            code: EXIT_OK,
            rendered: Rendered {
                document: Document::new(params_json(cfg), results, residuals),
                table,
            },
        })
    })
}

pub fn partner_cmd(cfg: &RunConfig) -> Result<Outcome, CliError> {
    guarded(cfg, || {
        let p = &cfg.params;
        let levels = solve_spectrum(p, cfg.n_levels + 1, cfg.tolerance)?.levels;
        let fac = factorize(p, &levels[0])?;
        let mut partners = Vec::new();
        let mut report = VerificationReport::new();
        for n in 0..cfg.n_levels {
            let ex = excited_state_plus(p, &levels[n + 1])?;
            let pe = partner_eigenfunction(n, &fac, &ex)?;
            report.extend(check_matching(&pe, &fac));
            partners.push(pe);
        }
        let big_l = p.box_half_width();
        let xs = interior_grid(big_l, cfg.grid_points, SAMPLE_MARGIN * big_l);

        let mut header = vec!["x".to_string()];
        for pe in &partners {
            header.push(format!("re_psi{}", pe.n));
            header.push(format!("im_psi{}", pe.n));
        }
        let mut table = Table::new(header.clone());
        params_meta(&mut table, p);
        table.meta("D0", num(fac.d0));
        let mut cols: Vec<Vec<f64>> = vec![Vec::with_capacity(xs.len()); header.len()];
        for &x in &xs {
            let mut row = vec![x];
            for pe in &partners {
                let v = pe.value(x)?;
                row.extend([v.re, v.im]);
            }
            table.push(row.iter().map(|&v| num(v)).collect());
            for (c, v) in cols.iter_mut().zip(row) {
                c.push(v);
            }
        }
        for pe in &partners {
            table.meta(format!("E_minus[{}]", pe.n), num(pe.energy()));
        }

        let states: Vec<Value> = partners
            .iter()
            .map(|pe| {
                json!({
                    "n": pe.n,
                    "E_minus": pe.energy(),
                    "E_plus": pe.level.energy,
                    "c_minus": pair(pe.c_minus),
                    "regional_constants": pe.regional_constants().map(pair),
                })
            })
            .collect();
        let mut samples = serde_json::Map::new();
        for (name, c) in header.iter().zip(&cols) {
            samples.insert(name.clone(), to_value(c));
        }
        let results = json!({
            "regime": "unbroken",
            "D0": fac.d0,
            "all_passed": report.all_passed(),
            "states": states,
            "samples": samples,
        });
        let code = if report.all_passed() { EXIT_OK } else { EXIT_VERIFY };
        Ok(Outcome {
            code,
            rendered: Rendered {
                document: Document::new(params_json(cfg), results, to_value(&report.items)),
                table,
            },
        })
    })
}

pub fn verify_cmd(cfg: &RunConfig) -> Result<Outcome, CliError> {
    guarded(cfg, || {
        let opts = VerifyOptions {
            partner_levels: cfg.n_levels,
            oracle_grid: cfg.grid_points,
            tol: cfg.tolerance,
            ..VerifyOptions::default()
        };
        let out = verify(&cfg.params, &opts)?;
        let passed = out.report.all_passed();
        let eigen = |s: &Option<ptsusy::oracle::OracleSpectrum>| {
            s.as_ref().map(|s| {
                json!({
                    "eigenvalues": s.eigenvalues.iter().map(|&e| pair(e)).collect::<Vec<_>>(),
                    "error_estimates": s.error_estimates,
                })
            })
        };
        let results = json!({
            "regime": "unbroken",
            "all_passed": passed,
            "failures": out.report.failures().map(|c| c.name.clone()).collect::<Vec<_>>(),
            "skipped": out.report.skipped().map(|c| c.name.clone()).collect::<Vec<_>>(),
            "limit": out.limit,
            "D0": out.factorization.d0,
            "x_R1": pair(out.factorization.x_r1),
            "levels": out.levels,
            "oracle_plus": eigen(&out.plus_oracle),
            "oracle_minus": eigen(&out.partner_oracle),
        });
        let mut table = Table::new(["check", "residual", "threshold", "passed", "skipped"]);
        params_meta(&mut table, &cfg.params);
        table.meta("all_passed", passed.to_string());
        for c in &out.report.items {
            table.push(vec![
                c.name.clone(),
                num(c.residual),
                num(c.threshold),
                c.passed.to_string(),
                c.skipped.clone().unwrap_or_default(),
            ]);
        }
        Ok(Outcome {
            code: if passed { EXIT_OK } else { EXIT_VERIFY },
            rendered: Rendered {
                document: Document::new(params_json(cfg), results, to_value(&out.report.items)),
                table,
            },
        })
    })
}

/// One `gc-scan` row; `Err` carries the reason instead of a number.
fn scan_row(cfg: &ScanConfig, l: f64) -> Result<f64, String> {
    critical_coupling(cfg.big_l, l, cfg.g_hi, cfg.tolerance).map_err(|e| e.to_string())
}

pub fn gc_scan(cfg: &ScanConfig) -> Result<Outcome, CliError> {
    let rows: Vec<(f64, Result<f64, String>)> = cfg.ls.par_iter().map(|&l| (l, scan_row(cfg, l))).collect();
    let ok: Vec<f64> = rows.iter().filter_map(|(_, r)| r.as_ref().ok().copied()).collect();
    let non_increasing = ok.windows(2).all(|w| w[1] <= w[0]);

    let mut table = Table::new(["l", "g_c", "status", "error"]);
    table
        .meta("L", num(cfg.big_l))
        .meta("g_hi", num(cfg.g_hi))
        .meta("tol", num(cfg.tolerance))
        .meta("g_c_non_increasing", non_increasing.to_string());
    let mut json_rows = Vec::new();
    for (l, r) in &rows {
        match r {
            Ok(g_c) => {
                table.push(vec![num(*l), num(*g_c), "ok".into(), String::new()]);
                json_rows.push(json!({"l": l, "g_c": g_c, "status": "ok"}));
            }
            Err(msg) => {
                table.push(vec![num(*l), String::new(), "error".into(), msg.clone()]);
                json_rows.push(json!({"l": l, "g_c": null, "status": "error", "error": msg}));
            }
        }
    }
    let params = json!({"L": cfg.big_l, "ls": cfg.ls, "g_hi": cfg.g_hi, "tol": cfg.tolerance});
    let results = json!({"rows": json_rows, "g_c_non_increasing": non_increasing});
    Ok(Outcome {
        code: EXIT_OK,
        rendered: Rendered {
            document: Document::new(params, results, json!({})),
            table,
        },
    })
}
