//! Moore-Penrose pseudoinverse and symmetric eigendecomposition.
//!
//! Both are Jacobi-style iterations, which are plenty for the small matrices
//! they are applied to (coefficient covariance matrices, K <= a few dozen).

use super::matrix::Matrix;
use super::solve::RANK_TOLERANCE;
use super::NumericError;

/// Moore-Penrose pseudoinverse via one-sided Jacobi SVD.
///
/// Singular values below [`RANK_TOLERANCE`] times the largest are treated as
/// zero and excluded from the inverse rather than blown up.
pub fn pseudoinverse(m: &Matrix) -> Result<Matrix, NumericError> {
    if m.rows() < m.cols() {
        return Ok(pseudoinverse(&m.transpose())?.transpose());
    }
    let (u, sigma, v) = svd(m);
    let max_sigma = sigma.iter().cloned().fold(0.0, f64::max);
    let cutoff = RANK_TOLERANCE * max_sigma;

    // pinv = V diag(1/sigma) U'
    let n = m.cols();
    let rows = m.rows();
    let mut out = Matrix::zeros(n, rows);
    for (k, &s) in sigma.iter().enumerate() {
        if s <= cutoff || s == 0.0 {
            continue;
        }
        let inv = 1.0 / s;
        for i in 0..n {
            let vik = v.get(i, k) * inv;
            if vik == 0.0 {
                continue;
            }
            for j in 0..rows {
                out.set(i, j, out.get(i, j) + vik * u.get(j, k));
            }
        }
    }
    Ok(out)
}

/// One-sided Jacobi SVD of `a` (rows >= cols): returns (U, sigma, V) with
/// `a = U diag(sigma) V'`, sigma sorted descending, U rows x cols, V cols x cols.
fn svd(a: &Matrix) -> (Matrix, Vec<f64>, Matrix) {
    let n = a.rows();
    let p = a.cols();
    let mut w = a.clone();
    let mut v = Matrix::identity(p);

    let eps = 1e-14;
    for _sweep in 0..60 {
        let mut rotated = false;
        for i in 0..p {
            for j in i + 1..p {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = 0.0;
                for r in 0..n {
                    let wi = w.get(r, i);
                    let wj = w.get(r, j);
                    alpha += wi * wi;
                    beta += wj * wj;
                    gamma += wi * wj;
                }
                if gamma == 0.0 || gamma * gamma <= eps * eps * alpha * beta {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for r in 0..n {
                    let wi = w.get(r, i);
                    let wj = w.get(r, j);
                    w.set(r, i, c * wi - s * wj);
                    w.set(r, j, s * wi + c * wj);
                }
                for r in 0..p {
                    let vi = v.get(r, i);
                    let vj = v.get(r, j);
                    v.set(r, i, c * vi - s * vj);
                    v.set(r, j, s * vi + c * vj);
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let sigma: Vec<f64> = (0..p)
        .map(|c| (0..n).map(|r| w.get(r, c).powi(2)).sum::<f64>().sqrt())
        .collect();

    // Sort singular values descending, permuting the factors along.
    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|&x, &y| sigma[y].partial_cmp(&sigma[x]).unwrap());
    let mut u = Matrix::zeros(n, p);
    let mut v_sorted = Matrix::zeros(p, p);
    let mut sigma_sorted = vec![0.0; p];
    for (dst, &src) in order.iter().enumerate() {
        sigma_sorted[dst] = sigma[src];
        let s = sigma[src];
        for r in 0..n {
            u.set(r, dst, if s > 0.0 { w.get(r, src) / s } else { 0.0 });
        }
        for r in 0..p {
            v_sorted.set(r, dst, v.get(r, src));
        }
    }
    (u, sigma_sorted, v_sorted)
}

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Returns `(eigenvalues, Q)` with `m = Q diag(eigenvalues) Q'`; eigenvalues
/// are sorted descending. The input is symmetrized first, so slightly
/// asymmetric inputs (covariance differences) are accepted.
pub fn symmetric_eigen(m: &Matrix) -> Result<(Vec<f64>, Matrix), NumericError> {
    if m.rows() != m.cols() {
        return Err(NumericError::DimensionMismatch(format!(
            "eigendecomposition requires a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    let mut a = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            a.set(i, j, 0.5 * (m.get(i, j) + m.get(j, i)));
        }
    }
    let mut q = Matrix::identity(n);

    for _sweep in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off += a.get(i, j).powi(2);
            }
        }
        if off.sqrt() <= 1e-14 * (a.norm() + 1e-300) {
            break;
        }
        for p in 0..n {
            for r in p + 1..n {
                let apr = a.get(p, r);
                if apr == 0.0 {
                    continue;
                }
                let app = a.get(p, p);
                let arr = a.get(r, r);
                let theta = (arr - app) / (2.0 * apr);
                let t = theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akr = a.get(k, r);
                    a.set(k, p, c * akp - s * akr);
                    a.set(k, r, s * akp + c * akr);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let ark = a.get(r, k);
                    a.set(p, k, c * apk - s * ark);
                    a.set(r, k, s * apk + c * ark);
                }
                for k in 0..n {
                    let qkp = q.get(k, p);
                    let qkr = q.get(k, r);
                    q.set(k, p, c * qkp - s * qkr);
                    q.set(k, r, s * qkp + c * qkr);
                }
            }
        }
    }

    let mut pairs: Vec<(f64, usize)> = (0..n).map(|i| (a.get(i, i), i)).collect();
    pairs.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap());
    let eigenvalues: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (dst, &(_, src)) in pairs.iter().enumerate() {
        for r in 0..n {
            vectors.set(r, dst, q.get(r, src));
        }
    }
    Ok((eigenvalues, vectors))
}

/// Pseudoinverse of a (nearly) positive-semidefinite symmetric matrix with
/// negative and near-zero eigenvalues clipped to zero before inversion.
///
/// Guarantees the resulting quadratic form `q' out q` is nonnegative.
pub fn clipped_psd_pseudoinverse(m: &Matrix) -> Result<Matrix, NumericError> {
    let (eigenvalues, q) = symmetric_eigen(m)?;
    let n = m.rows();
    let max_abs = eigenvalues.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let cutoff = RANK_TOLERANCE * max_abs;
    let mut out = Matrix::zeros(n, n);
    for (k, &lambda) in eigenvalues.iter().enumerate() {
        if lambda <= cutoff {
            continue;
        }
        let inv = 1.0 / lambda;
        for i in 0..n {
            let qik = q.get(i, k) * inv;
            for j in 0..n {
                out.set(i, j, out.get(i, j) + qik * q.get(j, k));
            }
        }
    }
    Ok(out)
}
