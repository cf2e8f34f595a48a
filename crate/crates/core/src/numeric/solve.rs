//! Least-squares solver built on Householder QR with column pivoting.

use super::matrix::Matrix;
use super::NumericError;

/// Relative cutoff below which a pivot is treated as numerically zero.
/// The pivoted R diagonal is the usual proxy for the singular values here;
/// panels in this crate are small and well conditioned, so a fixed relative
/// threshold is reproducible.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// Output of [`solve_least_squares`].
#[derive(Debug, Clone)]
pub struct LeastSquaresFit {
    /// Minimizer of `||y - X b||^2`, length = `X.cols()`.
    pub coefficients: Vec<f64>,
    /// `X * coefficients`.
    pub fitted: Vec<f64>,
    /// `y - fitted`, computed directly from the inputs.
    pub residuals: Vec<f64>,
    /// `(X'X)^-1`, reconstructed from the R factor.
    pub xtx_inverse: Matrix,
    /// Residual sum of squares.
    pub rss: f64,
}

/// Solves `min_b ||y - X b||^2` by Householder QR with column pivoting.
///
/// Requires strictly more rows than columns. Fails with
/// [`NumericError::RankDeficient`] when any pivoted diagonal of R falls below
/// [`RANK_TOLERANCE`] times the leading one.
pub fn solve_least_squares(x: &Matrix, y: &[f64]) -> Result<LeastSquaresFit, NumericError> {
    let n = x.rows();
    let p = x.cols();
    if y.len() != n {
        return Err(NumericError::DimensionMismatch(format!(
            "design has {n} rows but response has {} entries",
            y.len()
        )));
    }
    if n <= p {
        return Err(NumericError::DimensionMismatch(format!(
            "need more rows than columns, got {n} rows and {p} columns"
        )));
    }
    for (i, v) in y.iter().enumerate() {
        if !v.is_finite() {
            return Err(NumericError::NonFinite { row: i, col: 0 });
        }
    }

    // Working copies: `a` is reduced in place to R, `qty` carries Q'y.
    let mut a = x.clone();
    let mut qty = y.to_vec();
    let mut piv: Vec<usize> = (0..p).collect();

    for j in 0..p {
        // Pivot on the remaining column with the largest trailing norm.
        let mut best = j;
        let mut best_norm = 0.0;
        for c in j..p {
            let mut s = 0.0;
            for r in j..n {
                let v = a.get(r, c);
                s += v * v;
            }
            if s > best_norm {
                best_norm = s;
                best = c;
            }
        }
        if best != j {
            for r in 0..n {
                let tmp = a.get(r, j);
                a.set(r, j, a.get(r, best));
                a.set(r, best, tmp);
            }
            piv.swap(j, best);
        }
        if best_norm == 0.0 {
            return Err(NumericError::RankDeficient { rank: j, cols: p });
        }

        // Householder reflection annihilating column j below the diagonal.
        let norm = best_norm.sqrt();
        let ajj = a.get(j, j);
        let alpha = if ajj >= 0.0 { -norm } else { norm };
        let mut v = vec![0.0; n - j];
        v[0] = ajj - alpha;
        for r in j + 1..n {
            v[r - j] = a.get(r, j);
        }
        let vtv: f64 = v.iter().map(|t| t * t).sum();
        if vtv > 0.0 {
            let scale = 2.0 / vtv;
            for c in j..p {
                let mut dot = 0.0;
                for r in j..n {
                    dot += v[r - j] * a.get(r, c);
                }
                let dot = dot * scale;
                for r in j..n {
                    a.set(r, c, a.get(r, c) - dot * v[r - j]);
                }
            }
            let mut dot = 0.0;
            for r in j..n {
                dot += v[r - j] * qty[r];
            }
            let dot = dot * scale;
            for r in j..n {
                qty[r] -= dot * v[r - j];
            }
        }
        a.set(j, j, alpha);
        for r in j + 1..n {
            a.set(r, j, 0.0);
        }
    }

    // Rank check on the pivoted diagonal.
    let lead = a.get(0, 0).abs();
    for j in 0..p {
        if a.get(j, j).abs() < RANK_TOLERANCE * lead {
            return Err(NumericError::RankDeficient { rank: j, cols: p });
        }
    }

    // Back-substitution: R b_piv = (Q'y)[..p].
    let mut beta_piv = vec![0.0; p];
    for j in (0..p).rev() {
        let mut s = qty[j];
        for c in j + 1..p {
            s -= a.get(j, c) * beta_piv[c];
        }
        beta_piv[j] = s / a.get(j, j);
    }
    let mut coefficients = vec![0.0; p];
    for j in 0..p {
        coefficients[piv[j]] = beta_piv[j];
    }

    // (X'X)^-1 = P R^-1 R^-T P'.
    let rinv = invert_upper_triangular(&a, p);
    let mut xtx_inverse = Matrix::zeros(p, p);
    for i in 0..p {
        for j in i..p {
            let mut s = 0.0;
            for k in j..p {
                s += rinv.get(i, k) * rinv.get(j, k);
            }
            xtx_inverse.set(piv[i], piv[j], s);
            xtx_inverse.set(piv[j], piv[i], s);
        }
    }

    let fitted = x.matvec(&coefficients)?;
    let residuals: Vec<f64> = y.iter().zip(&fitted).map(|(yi, fi)| yi - fi).collect();
    let rss = residuals.iter().map(|r| r * r).sum();

    Ok(LeastSquaresFit {
        coefficients,
        fitted,
        residuals,
        xtx_inverse,
        rss,
    })
}

/// Inverts the upper-triangular leading p x p block of `r`.
fn invert_upper_triangular(r: &Matrix, p: usize) -> Matrix {
    let mut inv = Matrix::zeros(p, p);
    for col in 0..p {
        let mut e = vec![0.0; p];
        e[col] = 1.0;
        for j in (0..=col).rev() {
            let mut s = e[j];
            for k in j + 1..=col {
                s -= r.get(j, k) * inv.get(k, col);
            }
            inv.set(j, col, s / r.get(j, j));
        }
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn intercept_only_returns_mean() {
        let x = Matrix::new(3, 1, vec![1.0, 1.0, 1.0]).unwrap();
        let fit = solve_least_squares(&x, &[1.0, 2.0, 3.0]).unwrap();
        assert!((fit.coefficients[0] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn exact_line_has_zero_rss() {
        let x = Matrix::new(
            5,
            2,
            vec![1.0, 1.0, 1.0, 2.0, 1.0, 3.0, 1.0, 4.0, 1.0, 5.0],
        )
        .unwrap();
        let y = [2.0, 4.0, 6.0, 8.0, 10.0];
        let fit = solve_least_squares(&x, &y).unwrap();
        assert!(fit.coefficients[0].abs() < 1e-10);
        assert!((fit.coefficients[1] - 2.0).abs() < 1e-10);
        assert!(fit.rss < 1e-18);
    }

    #[test]
    fn duplicate_columns_are_rank_deficient() {
        let x = Matrix::new(4, 2, vec![1.0, 1.0, 2.0, 2.0, 3.0, 3.0, 4.0, 4.0]).unwrap();
        let err = solve_least_squares(&x, &[1.0, 2.0, 3.0, 4.0]).unwrap_err();
        assert!(matches!(err, NumericError::RankDeficient { cols: 2, .. }));
    }

    #[test]
    fn rejects_mismatched_response_length() {
        let x = Matrix::new(3, 1, vec![1.0, 1.0, 1.0]).unwrap();
        assert!(solve_least_squares(&x, &[1.0, 2.0]).is_err());
    }

    #[test]
    fn residuals_are_orthogonal_to_design() {
        let x = Matrix::new(
            6,
            2,
            vec![1.0, 0.3, 1.0, -1.2, 1.0, 2.5, 1.0, 0.9, 1.0, -0.4, 1.0, 1.7],
        )
        .unwrap();
        let y = [0.5, -1.0, 3.2, 1.1, 0.2, 2.0];
        let fit = solve_least_squares(&x, &y).unwrap();
        let xt = x.transpose();
        let xr = xt.matvec(&fit.residuals).unwrap();
        let ynorm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        let bound = 1e-8 * x.norm() * ynorm;
        for v in xr {
            assert!(v.abs() <= bound, "X'r = {v} exceeds bound {bound}");
        }
    }
}
