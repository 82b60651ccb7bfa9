//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use ptsusy::limits::{full_well_deviation, small_well_deviation};
use ptsusy::model::interior_grid;
use ptsusy::oracle::golden::{GoldenFile, GoldenKind};
use ptsusy::oracle::{fd_spectrum_extrapolated, ode_residual, vplus_sampler, Grid};
use ptsusy::partner::{excited_state_plus, partner_eigenfunction};
use ptsusy::spectrum::critical_coupling;
use ptsusy::susy::{
    constraint_residuals, factorize, factorize_problem, ground_state_plus, partner_potential, potential_jumps,
    riccati_residual, superpotential, vplus_jumps, zero_mode_residual, Factorization, Partner,
};
use ptsusy::verify::{ODE_MARGIN, ODE_STEP, RICCATI_MARGIN, RICCATI_STEP};
use ptsusy::{make_problem, solve_spectrum, ProblemParams};

type Outcome = Result<String, String>;

const PI: f64 = std::f64::consts::PI;

fn reference() -> ProblemParams {
    make_problem(1.0, 0.5, 2.0).unwrap()
}

fn reference_fac() -> Factorization {
    factorize_problem(&reference(), 1e-13).unwrap()
}

fn judge(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within_time(limit: Duration, start: Instant, worst: f64, threshold: f64, what: &str) -> Outcome {
    let elapsed = start.elapsed();
    judge(
        worst < threshold && elapsed < limit,
        format!("{what} {worst:.3e} < {threshold:e}, {:.2?} < {limit:?}", elapsed),
    )
}

fn hermitian_limit() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for l in [0.1, 0.25, 0.5, 0.75, 0.9] {
        let levels = solve_spectrum(&make_problem(1.0, l, 0.0).map_err(|e| e.to_string())?, 8, 1e-13)
            .map_err(|e| e.to_string())?
            .levels;
        for lvl in &levels {
            let exact = ((lvl.n + 1) as f64 * PI / 2.0).powi(2);
            worst = worst.max((lvl.energy - exact).abs());
        }
    }
    within_time(Duration::from_secs(1), start, worst, 1e-8, "max |E_n - ((n+1)π/2L)²|")
}

fn oracle_plus() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for (l, g) in [(0.5, 1.0), (0.5, 2.0), (0.25, 2.0)] {
        let p = make_problem(1.0, l, g).unwrap();
        let levels = solve_spectrum(&p, 3, 1e-13).map_err(|e| e.to_string())?.levels;
        let fd = fd_spectrum_extrapolated(|x| vplus_sampler(&p, x), &p, 2000, 3).map_err(|e| e.to_string())?;
        for (lvl, e) in levels.iter().zip(&fd.eigenvalues) {
            worst = worst.max((e - Complex64::from(lvl.energy)).norm() / lvl.energy);
        }
    }
    within_time(Duration::from_secs(120), start, worst, 1e-5, "max relative deviation")
}

fn zero_mode() -> Outcome {
    let fac = reference_fac();
    let gs = ground_state_plus(&fac.params, &fac.level0).map_err(|e| e.to_string())?;
    let pts = interior_grid(1.0, 1000, 1e-3);
    let r = zero_mode_residual(&fac, &gs, &pts).map_err(|e| e.to_string())? / gs.sup_norm(1000);
    judge(r < 1e-9, format!("max |(d/dx + W)ψ₀| / max |ψ₀| = {r:.3e} < 1e-9"))
}

fn riccati() -> Outcome {
    let fac = reference_fac();
    let pts = interior_grid(1.0, 1000, RICCATI_MARGIN);
    let plus = riccati_residual(&fac, Partner::Plus, &pts, RICCATI_STEP).map_err(|e| e.to_string())?;
    let minus = riccati_residual(&fac, Partner::Minus, &pts, RICCATI_STEP).map_err(|e| e.to_string())?;
    judge(
        plus < 1e-6 && minus < 1e-6,
        format!("V+ {plus:.3e}, V- {minus:.3e} < 1e-6"),
    )
}

fn jump_algebra() -> Outcome {
    let fac = reference_fac();
    let g = fac.params.coupling();
    let jumps = potential_jumps(&fac);
    let plus = vplus_jumps(&fac.params);
    let expected = [Complex64::new(0.0, g), Complex64::new(0.0, -2.0 * g), Complex64::new(0.0, g)];
    let dev = (0..3).map(|i| (jumps[i] - expected[i]).norm()).fold(0.0, f64::max);
    let sum = (0..3).map(|i| (jumps[i] + plus[i]).norm()).fold(0.0, f64::max);
    judge(
        dev < 1e-10 && sum < 1e-10,
        format!("|ΔV- - (ig, -2ig, ig)| = {dev:.3e}, |ΔV- + ΔV+| = {sum:.3e} < 1e-10"),
    )
}

fn symmetries() -> Outcome {
    let fac = reference_fac();
    let (mut w_dev, mut v_dev): (f64, f64) = (0.0, 0.0);
    for x in interior_grid(1.0, 1000, 1e-3) {
        let (w, wm) = (superpotential(x, &fac).unwrap(), superpotential(-x, &fac).unwrap());
        w_dev = w_dev.max((w + wm.conj()).norm());
        let (v, vm) = (partner_potential(x, &fac).unwrap(), partner_potential(-x, &fac).unwrap());
        v_dev = v_dev.max((v - vm.conj()).norm());
    }
    judge(
        w_dev < 1e-10 && v_dev < 1e-10,
        format!("W {w_dev:.3e}, V- {v_dev:.3e} < 1e-10"),
    )
}

fn xr1_dual_solve() -> Outcome {
    let mut worst = [0.0f64; 4];
    for (l, g) in [(0.5, 2.0), (0.25, 2.0), (0.5, 1.0)] {
        let fac = factorize_problem(&make_problem(1.0, l, g).unwrap(), 1e-13).map_err(|e| e.to_string())?;
        let c = constraint_residuals(&fac);
        for (w, r) in worst.iter_mut().zip([fac.xr1.agreement, c.c1, c.c2, c.outer_matching]) {
            *w = w.max(r);
        }
    }
    judge(
        worst.iter().all(|&r| r < 1e-10),
        format!(
            "agreement {:.3e}, C1 {:.3e}, C2 {:.3e}, outer matching {:.3e} < 1e-10",
            worst[0], worst[1], worst[2], worst[3]
        ),
    )
}

fn isospectrality() -> Outcome {
    let start = Instant::now();
    let p = reference();
    let levels = solve_spectrum(&p, 4, 1e-13).map_err(|e| e.to_string())?.levels;
    let fac = factorize(&p, &levels[0]).map_err(|e| e.to_string())?;
    let fd = fd_spectrum_extrapolated(
        |x| partner_potential(x, &fac).unwrap_or(Complex64::new(f64::NAN, 0.0)) - fac.d0,
        &p,
        2000,
        3,
    )
    .map_err(|e| e.to_string())?;
    let worst = fd
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(n, e)| {
            let target = levels[n + 1].energy - levels[0].energy;
            (e - Complex64::from(target)).norm() / target
        })
        .fold(0.0, f64::max);
    within_time(Duration::from_secs(120), start, worst, 1e-4, "max relative deviation")
}

fn partner_eigenfunctions() -> Outcome {
    let p = reference();
    let levels = solve_spectrum(&p, 3, 1e-13).map_err(|e| e.to_string())?.levels;
    let fac = factorize(&p, &levels[0]).map_err(|e| e.to_string())?;
    let grid = Grid::with_spacing(1.0, ODE_STEP).map_err(|e| e.to_string())?;
    let (mut ode, mut matching): (f64, f64) = (0.0, 0.0);
    for n in 0..2 {
        let ex = excited_state_plus(&p, &levels[n + 1]).map_err(|e| e.to_string())?;
        let pe = partner_eigenfunction(n, &fac, &ex).map_err(|e| e.to_string())?;
        let r = ode_residual(
            |x| pe.value(x).unwrap_or_default(),
            pe.energy(),
            |x| partner_potential(x, &fac).unwrap_or_default() - fac.d0,
            &grid,
            &p,
            ODE_MARGIN / ODE_STEP,
        );
        ode = ode.max(r);
        let items = pe.interface_residuals();
        if items.len() != 8 {
            return Err(format!("expected 2 Dirichlet + 6 continuity residuals, got {}", items.len()));
        }
        matching = items.iter().map(|(_, r)| *r).fold(matching, f64::max);
    }
    judge(
        ode < 1e-5 && matching < 1e-8,
        format!("ODE {ode:.3e} < 1e-5, Dirichlet/continuity {matching:.3e} < 1e-8"),
    )
}

fn limits() -> Outcome {
    let small = factorize_problem(&make_problem(1.0, 1e-6, 2.0).unwrap(), 1e-13).map_err(|e| e.to_string())?;
    let ds = small_well_deviation(&small, 1000).map_err(|e| e.to_string())?;
    let full =
        factorize_problem(&make_problem(1.0, 1.0 - 1e-9, 2.0).unwrap(), 1e-13).map_err(|e| e.to_string())?;
    let (dv, dw) = full_well_deviation(&full, 1000).map_err(|e| e.to_string())?;
    judge(
        ds < 1e-4 && dv < 1e-4,
        format!("l → 0: {ds:.3e}, l → L: V- {dv:.3e} (W {dw:.3e}) < 1e-4"),
    )
}

fn coalescence() -> Outcome {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/golden/goldens.json");
    let golden = GoldenFile::load(path).map_err(|e| e.to_string())?;
    let frozen = golden
        .find(GoldenKind::CriticalCoupling, 1.0, 0.5, None)
        .and_then(|r| r.critical_coupling)
        .ok_or("no g_c golden for L = 1, l = 0.5")?;
    let g_c = critical_coupling(1.0, 0.5, 20.0, 1e-10).map_err(|e| e.to_string())?;
    let g = format!("{}", 1.01 * g_c);
    let out = Command::new(env!("CARGO_BIN_EXE_ptsusy"))
        .args(["spectrum", "--L", "1", "--l", "0.5", "--g", &g])
        .output()
        .map_err(|e| e.to_string())?;
    let code = out.status.code();
    let broken = String::from_utf8_lossy(&out.stdout).contains("\"broken-detected\"");
    let dev = (g_c - frozen).abs();
    judge(
        dev < 1e-4 && code == Some(2) && broken,
        format!("g_c = {g_c:.10} vs golden {frozen:.10} (|Δ| = {dev:.3e} < 1e-4); spectrum at 1.01 g_c exit {code:?}, broken-detected = {broken}"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("Hermitian limit", hermitian_limit),
        ("oracle agreement for H(+)", oracle_plus),
        ("zero mode", zero_mode),
        ("Riccati pair", riccati),
        ("jump algebra", jump_algebra),
        ("symmetries", symmetries),
        ("x_R1 dual solve and constraints", xr1_dual_solve),
        ("partner isospectrality", isospectrality),
        ("partner eigenfunctions", partner_eigenfunctions),
        ("limits", limits),
        ("coalescence", coalescence),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (tag, detail) = match check() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} {:>2}. {name}: {detail}", i + 1);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
