//! Small dense linear-algebra helpers shared by both estimation engines.
//!
//! Symmetric solves go through Cholesky; when a factorization fails the
//! Gram matrix gets a ridge of `1e-10 * trace / k` on the diagonal and one
//! retry. Callers are told whether the ridge fired so runs can record it.

use crate::error::{Error, Result};
use nalgebra::{Cholesky, DMatrix, Dyn};

pub const RIDGE_REL: f64 = 1e-10;

/// Cholesky of a symmetric positive-definite matrix with the ridge fallback.
/// Returns the factorization and whether the ridge was applied.
pub fn cholesky_ridge(a: &DMatrix<f64>, context: &str) -> Result<(Cholesky<f64, Dyn>, bool)> {
    if let Some(chol) = Cholesky::new(a.clone()) {
        return Ok((chol, false));
    }
    let k = a.nrows();
    let ridge = RIDGE_REL * a.trace() / k as f64;
    let mut b = a.clone();
    for i in 0..k {
        b[(i, i)] += ridge;
    }
    match Cholesky::new(b) {
        Some(chol) => Ok((chol, true)),
        None => Err(Error::SingularSystem {
            context: context.to_string(),
        }),
    }
}

/// Solves `A X = B` for symmetric positive-definite `A`.
pub fn solve_spd(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    context: &str,
) -> Result<(DMatrix<f64>, bool)> {
    let (chol, ridged) = cholesky_ridge(a, context)?;
    Ok((chol.solve(b), ridged))
}

/// Forces exact symmetry on a nearly-symmetric matrix.
pub fn symmetrize(a: &mut DMatrix<f64>) {
    let n = a.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let v = 0.5 * (a[(i, j)] + a[(j, i)]);
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
}

/// Linear-interpolation quantile (R type 7) of an unsorted sample.
pub fn quantile(values: &[f64], p: f64) -> f64 {
    assert!(!values.is_empty(), "quantile of empty sample");
    assert!((0.0..=1.0).contains(&p), "quantile level out of range");
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    quantile_sorted(&sorted, p)
}

/// Same as [`quantile`] but assumes `sorted` is ascending; O(1).
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let pos = p * (n - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

/// Standard-normal quantile function (inverse CDF) by Acklam's rational
/// approximation; absolute error below 1.2e-9 over (0, 1), ample for
/// interval critical values.
pub fn normal_quantile(p: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0, "normal quantile needs p in (0, 1)");
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383_577_518_672_69e2,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;

    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    }
}

/// Spectral radius of a (generally non-symmetric) square matrix, used for
/// companion-matrix stability checks.
pub fn spectral_radius(a: &DMatrix<f64>) -> f64 {
    if a.nrows() == 0 {
        return 0.0;
    }
    a.complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}
