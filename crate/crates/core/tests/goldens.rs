use std::path::PathBuf;

use num_complex::Complex64;
use ptsusy::oracle::golden::{GoldenFile, GoldenKind};
use ptsusy::spectrum::critical_coupling;
use ptsusy::susy::factorize_problem;
use ptsusy::{make_problem, solve_spectrum};

fn goldens() -> GoldenFile {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/goldens.json");
    GoldenFile::load(path).expect("golden file present; regenerate with the regenerate_goldens example")
}

#[test]
fn vplus_levels_match_oracle_goldens() {
    let file = goldens();
    for (l, g) in [(0.5, 1.0), (0.5, 2.0), (0.25, 2.0)] {
        let rec = file.find(GoldenKind::VplusSpectrum, 1.0, l, Some(g)).unwrap();
        let levels = solve_spectrum(&make_problem(1.0, l, g).unwrap(), 3, 1e-12).unwrap().levels;
        for (lvl, e) in levels.iter().zip(rec.eigenvalues()) {
            let rel = (e - Complex64::from(lvl.energy)).norm() / lvl.energy;
            assert!(rel < 1e-5, "l={l} g={g} n={}: {rel:e}", lvl.n);
        }
    }
}

#[test]
fn vminus_levels_match_oracle_goldens() {
    let rec_file = goldens();
    let rec = rec_file.find(GoldenKind::VminusSpectrum, 1.0, 0.5, Some(2.0)).unwrap();
    let levels = solve_spectrum(&make_problem(1.0, 0.5, 2.0).unwrap(), 4, 1e-12).unwrap().levels;
    for (n, e) in rec.eigenvalues().iter().enumerate() {
        let target = levels[n + 1].energy - levels[0].energy;
        let rel = (e - Complex64::from(target)).norm() / target;
        assert!(rel < 1e-4, "n={n}: {rel:e}");
    }
}

#[test]
fn critical_coupling_matches_oracle_golden() {
    let file = goldens();
    let g_c = file
        .find(GoldenKind::CriticalCoupling, 1.0, 0.5, None)
        .and_then(|r| r.critical_coupling)
        .unwrap();
    let ours = critical_coupling(1.0, 0.5, 20.0, 1e-9).unwrap();
    assert!((ours - g_c).abs() < 1e-4, "{ours} vs {g_c}");
}

#[test]
fn reference_point_prototype_values() {
    let p = make_problem(1.0, 0.5, 2.0).unwrap();
    let levels = solve_spectrum(&p, 4, 1e-13).unwrap().levels;
    let frozen = [2.674648660766251, 9.713022889047275, 22.229184120287012, 39.44032217830293];
    for (lvl, e) in levels.iter().zip(frozen) {
        assert!((lvl.energy - e).abs() < 1e-9 * e, "n={}: {} vs {e}", lvl.n, lvl.energy);
    }
    let fac = factorize_problem(&p, 1e-13).unwrap();
    let x_r1 = Complex64::new(0.16771023009206465, -0.20315686251292836);
    assert!((fac.x_r1 - x_r1).norm() < 1e-9, "{}", fac.x_r1);
    assert!((fac.x_l1 - x_r1.conj()).norm() < 1e-9);
}

#[test]
fn reference_point_ground_state_constant() {
    let p = make_problem(1.0, 0.5, 2.0).unwrap();
    let levels = solve_spectrum(&p, 1, 1e-13).unwrap().levels;
    let gs = ptsusy::susy::ground_state_plus(&p, &levels[0]).unwrap();
    assert_eq!(gs.b, 1.0);
    assert!((gs.c - -0.41569354693941).abs() < 1e-10, "{}", gs.c);
}
