//! Rebuilds `tests/golden/goldens.json` from the finite-difference oracle.
//!
//! `cargo run --release -p ptsusy-core --example regenerate_goldens`

use std::path::PathBuf;

use num_complex::Complex64;
use ptsusy::oracle::golden::{GoldenFile, GoldenKind, GoldenRecord};
use ptsusy::oracle::{fd_critical_coupling_extrapolated, fd_spectrum_extrapolated, vplus_sampler, OracleSpectrum};
use ptsusy::susy::{factorize_problem, partner_potential};
use ptsusy::{make_problem, Result};

const N: usize = 2000;
const LEVELS: usize = 4;
const GC_N: usize = 1000;
const GC_TOL: f64 = 1e-9;

fn spectrum_record(kind: GoldenKind, big_l: f64, l: f64, g: f64, spec: &OracleSpectrum) -> GoldenRecord {
    GoldenRecord {
        kind,
        box_half_width: big_l,
        well_half_width: l,
        coupling: Some(g),
        grid_points: vec![N, 2 * N],
        extrapolated: true,
        eigenvalues: spec.eigenvalues.iter().map(|e| [e.re, e.im]).collect(),
        error_estimates: spec.error_estimates.clone().unwrap_or_default(),
        critical_coupling: None,
        critical_coupling_per_grid: vec![],
    }
}

fn main() -> Result<()> {
    let mut records = Vec::new();
    for (big_l, l, g) in [(1.0, 0.5, 1.0), (1.0, 0.5, 2.0), (1.0, 0.25, 2.0)] {
        let p = make_problem(big_l, l, g)?;
        let spec = fd_spectrum_extrapolated(|x| vplus_sampler(&p, x), &p, N, LEVELS)?;
        eprintln!("V+ {p}: {:?}", spec.eigenvalues);
        records.push(spectrum_record(GoldenKind::VplusSpectrum, big_l, l, g, &spec));
    }

    let p = make_problem(1.0, 0.5, 2.0)?;
    let fac = factorize_problem(&p, 1e-12)?;
    let spec = fd_spectrum_extrapolated(
        |x| partner_potential(x, &fac).unwrap_or(Complex64::new(f64::NAN, 0.0)) - fac.d0,
        &p,
        N,
        LEVELS - 1,
    )?;
    eprintln!("V- {p}: {:?}", spec.eigenvalues);
    records.push(spectrum_record(GoldenKind::VminusSpectrum, 1.0, 0.5, 2.0, &spec));

    for (big_l, l, g_hi) in [(1.0, 0.5, 20.0), (1.0, 1.0 - 1e-9, 20.0)] {
        let (ext, coarse, fine) = fd_critical_coupling_extrapolated(big_l, l, g_hi, GC_N, GC_TOL)?;
        eprintln!("g_c L={big_l} l={l}: {ext} ({coarse}, {fine})");
        records.push(GoldenRecord {
            kind: GoldenKind::CriticalCoupling,
            box_half_width: big_l,
            well_half_width: l,
            coupling: None,
            grid_points: vec![GC_N, 2 * GC_N],
            extrapolated: true,
            eigenvalues: vec![],
            error_estimates: vec![(ext - fine).abs()],
            critical_coupling: Some(ext),
            critical_coupling_per_grid: vec![coarse, fine],
        });
    }

    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/goldens.json");
    GoldenFile::new(records).save(&path)?;
    eprintln!("wrote {}", path.display());
    Ok(())
}
