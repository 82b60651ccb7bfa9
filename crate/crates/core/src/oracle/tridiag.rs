//! Eigenvalues of complex symmetric tridiagonal matrices.
//!
//! Implicit QL with Wilkinson shifts carried out in complex arithmetic. The
//! rotations are complex orthogonal (`c² + s² = 1`), which keeps the matrix
//! complex symmetric and tridiagonal throughout, so all `N` eigenvalues cost
//! `O(N²)` work.

use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_SWEEPS_PER_EIGENVALUE: usize = 120;

/// All eigenvalues of the symmetric tridiagonal matrix with diagonal `diag`
/// and off-diagonal `off` (`off[i]` couples `i` and `i + 1`).
pub fn symmetric_tridiagonal_eigenvalues(diag: &[Complex64], off: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = diag.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    if off.len() + 1 != n {
        return Err(Error::Domain(format!(
            "off-diagonal length {} does not match dimension {n}",
            off.len()
        )));
    }
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(Complex64::new(0.0, 0.0));
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);

    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].norm() + d[m + 1].norm();
                if e[m].norm() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_SWEEPS_PER_EIGENVALUE {
                return Err(Error::Solver(format!("QL did not converge for eigenvalue {l}")));
            }
            // Wilkinson shift from the leading 2×2 block
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let r = (g * g + one).sqrt();
            let denom = if (g + r).norm() >= (g - r).norm() { g + r } else { g - r };
            g = d[m] - d[l] + e[l] / denom;

            let (mut s, mut c, mut p) = (one, one, zero);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                let r = (f * f + g * g).sqrt();
                e[i + 1] = r;
                if r.norm() == 0.0 {
                    d[i + 1] -= p;
                    e[m] = zero;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                let r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = zero;
        }
    }
    if d.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Solver("QL produced non-finite eigenvalues".into()));
    }
    Ok(d)
}

/// Solves `(T - shift) x = rhs` for symmetric tridiagonal `T` by Gaussian
/// elimination without pivoting.
pub fn solve_shifted(diag: &[Complex64], off: &[Complex64], shift: Complex64, rhs: &[Complex64]) -> Vec<Complex64> {
    let n = diag.len();
    let mut c = vec![Complex64::new(0.0, 0.0); n];
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    let tiny = Complex64::new(1e-300, 0.0);
    let mut piv = diag[0] - shift;
    if piv.norm() == 0.0 {
        piv = tiny;
    }
    x[0] = rhs[0] / piv;
    for i in 1..n {
        c[i - 1] = off[i - 1] / piv;
        piv = diag[i] - shift - off[i - 1] * c[i - 1];
        if piv.norm() == 0.0 {
            piv = tiny;
        }
        x[i] = (rhs[i] - off[i - 1] * x[i - 1]) / piv;
    }
    for i in (0..n - 1).rev() {
        let next = x[i + 1];
        x[i] -= c[i] * next;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn matches_dense_schur() {
        let n = 160;
        let h = 2.0 / (n as f64 + 1.0);
        let diag: Vec<Complex64> = (1..=n)
            .map(|j| {
                let x = -1.0 + h * j as f64;
                let v = if x.abs() < 0.5 { Complex64::new(0.0, 2.0 * x.signum()) } else { Complex64::new(0.0, 0.0) };
                2.0 / (h * h) + v
            })
            .collect();
        let off = vec![Complex64::new(-1.0 / (h * h), 0.0); n - 1];
        let ql = sorted(symmetric_tridiagonal_eigenvalues(&diag, &off).unwrap());

        let dense = DMatrix::<Complex64>::from_fn(n, n, |i, j| {
            if i == j {
                diag[i]
            } else if i.abs_diff(j) == 1 {
                off[0]
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let reference = sorted(dense.eigenvalues().unwrap().iter().copied().collect());
        for (a, b) in ql.iter().zip(&reference).take(20) {
            assert!((a - b).norm() < 1e-8 * (1.0 + b.norm()), "{a} vs {b}");
        }
        let trace: Complex64 = diag.iter().sum();
        let sum: Complex64 = ql.iter().sum();
        assert!((trace - sum).norm() < 1e-9 * trace.norm());
    }

    #[test]
    fn small_complex_symmetric() {
        let diag = [Complex64::new(1.0, 1.0), Complex64::new(2.0, -0.5), Complex64::new(0.0, 0.3)];
        let off = [Complex64::new(0.5, 0.2), Complex64::new(-1.0, 0.1)];
        let ql = sorted(symmetric_tridiagonal_eigenvalues(&diag, &off).unwrap());
        let dense = DMatrix::<Complex64>::from_row_slice(
            3,
            3,
            &[diag[0], off[0], 0.0.into(), off[0], diag[1], off[1], 0.0.into(), off[1], diag[2]],
        );
        let reference = sorted(dense.eigenvalues().unwrap().iter().copied().collect());
        for (a, b) in ql.iter().zip(&reference) {
            assert!((a - b).norm() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn shifted_solve_inverts() {
        let diag = vec![Complex64::new(4.0, 1.0); 6];
        let off = vec![Complex64::new(-1.0, 0.2); 5];
        let rhs: Vec<Complex64> = (0..6).map(|i| Complex64::new(i as f64, 1.0)).collect();
        let shift = Complex64::new(0.5, -0.1);
        let x = solve_shifted(&diag, &off, shift, &rhs);
        for i in 0..6 {
            let mut y = (diag[i] - shift) * x[i];
            if i > 0 {
                y += off[i - 1] * x[i - 1];
            }
            if i < 5 {
                y += off[i] * x[i + 1];
            }
            assert!((y - rhs[i]).norm() < 1e-12);
        }
    }
}
