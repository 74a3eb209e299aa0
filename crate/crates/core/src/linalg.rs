//! Dense linear solves: exact Gaussian elimination over any [`Scalar`], and
//! SVD least squares for `f64`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Solve the square system `a x = b` by Gaussian elimination with partial
/// pivoting on magnitude. Exact over rationals.
pub fn solve<S: Scalar>(mut a: Vec<Vec<S>>, mut b: Vec<S>) -> Result<Vec<S>> {
    let n = b.len();
    assert!(a.len() == n && a.iter().all(|row| row.len() == n), "square system expected");
    for col in 0..n {
        let pivot = (col..n)
            .filter(|&r| !a[r][col].is_zero())
            .max_by(|&r, &s| a[r][col].magnitude().total_cmp(&a[s][col].magnitude()))
            .ok_or(Error::SingularSystem)?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone() / a[col][col].clone();
            for c in col..n {
                let v = a[col][c].clone();
                a[r][c] = a[r][c].clone() - f.clone() * v;
            }
            let v = b[col].clone();
            b[r] = b[r].clone() - f * v;
        }
    }
    let mut x = vec![S::zero(); n];
    for r in (0..n).rev() {
        let mut acc = b[r].clone();
        for c in r + 1..n {
            acc = acc - a[r][c].clone() * x[c].clone();
        }
        x[r] = acc / a[r][r].clone();
    }
    Ok(x)
}

/// Determinant by elimination; exact over rationals.
pub fn determinant<S: Scalar>(mut a: Vec<Vec<S>>) -> S {
    let n = a.len();
    let mut det = S::one();
    for col in 0..n {
        let Some(pivot) = (col..n)
            .filter(|&r| !a[r][col].is_zero())
            .max_by(|&r, &s| a[r][col].magnitude().total_cmp(&a[s][col].magnitude()))
        else {
            return S::zero();
        };
        if pivot != col {
            a.swap(col, pivot);
            det = -det;
        }
        det = det * a[col][col].clone();
        for r in col + 1..n {
            let f = a[r][col].clone() / a[col][col].clone();
            for c in col..n {
                let v = a[col][c].clone();
                a[r][c] = a[r][c].clone() - f.clone() * v;
            }
        }
    }
    det
}

/// Least-squares solution of `a x ≈ b` with its singular values (descending).
pub fn lstsq(a: &DMatrix<f64>, b: &DVector<f64>) -> Result<(DVector<f64>, Vec<f64>)> {
    let svd = a.clone().svd(true, true);
    let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    let eps = sv.first().copied().unwrap_or(0.0) * f64::EPSILON * (a.nrows().max(a.ncols()) as f64);
    let x = svd.solve(b, eps).map_err(|e| Error::InvalidInput(e.to_string()))?;
    Ok((x, sv))
}

/// Singular values, descending.
pub fn singular_values(a: &DMatrix<f64>) -> Vec<f64> {
    let mut sv: Vec<f64> = a.singular_values().iter().copied().collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    sv
}

/// 2-norm condition number from singular values; infinite when singular.
pub fn condition(sv: &[f64]) -> f64 {
    match (sv.first(), sv.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        _ => f64::INFINITY,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, ratio, Rat};

    #[test]
    fn exact_solve() {
        let a = vec![vec![rat(0), rat(1)], vec![rat(2), rat(3)]];
        let x = solve(a, vec![rat(5), rat(7)]).unwrap();
        assert_eq!(x, vec![ratio(-4, 1), rat(5)]);
        let singular: Vec<Vec<Rat>> = vec![vec![rat(1), rat(2)], vec![rat(2), rat(4)]];
        assert_eq!(solve(singular, vec![rat(1), rat(1)]), Err(Error::SingularSystem));
    }

    #[test]
    fn determinant_with_row_swap() {
        let a = vec![vec![rat(0), rat(1)], vec![rat(-1), rat(0)]];
        assert_eq!(determinant(a), rat(1));
        assert_eq!(determinant(vec![vec![2.0, 4.0], vec![1.0, 2.0]]), 0.0);
    }

    #[test]
    fn overdetermined_least_squares() {
        let a = DMatrix::from_row_slice(3, 1, &[1.0, 1.0, 1.0]);
        let b = DVector::from_vec(vec![1.0, 2.0, 3.0]);
        let (x, sv) = lstsq(&a, &b).unwrap();
        assert!((x[0] - 2.0).abs() < 1e-14);
        assert!((sv[0] - 3f64.sqrt()).abs() < 1e-14);
    }
}
