//! Small dense linear algebra helpers: Gaussian solve and symmetric
//! eigenvalues via cyclic Jacobi. Dimensions in this crate are tiny, so
//! simple dense routines are enough.

// Index-based loops match the matrix arithmetic here.
#![allow(clippy::needless_range_loop)]

use crate::scalar::Real;

/// Solve A x = b for square A by Gaussian elimination with partial pivoting.
/// Returns None when A is (numerically) singular.
pub fn solve_square<F: Real>(a: &[Vec<F>], b: &[F]) -> Option<Vec<F>> {
    let n = a.len();
    debug_assert!(a.iter().all(|row| row.len() == n));
    debug_assert_eq!(b.len(), n);
    let mut m: Vec<Vec<F>> = a.to_vec();
    let mut rhs = b.to_vec();

    for col in 0..n {
        let mut piv = col;
        for row in col + 1..n {
            if m[row][col].abs() > m[piv][col].abs() {
                piv = row;
            }
        }
        if m[piv][col].abs() <= F::PIVOT_TOL {
            return None;
        }
        m.swap(col, piv);
        rhs.swap(col, piv);
        let d = m[col][col];
        for row in 0..n {
            if row == col {
                continue;
            }
            let factor = m[row][col] / d;
            if factor != F::zero() {
                for k in col..n {
                    let v = m[col][k];
                    m[row][k] = m[row][k] - factor * v;
                }
                let r = rhs[col];
                rhs[row] = rhs[row] - factor * r;
            }
        }
    }
    Some((0..n).map(|i| rhs[i] / m[i][i]).collect())
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
pub fn symmetric_eigenvalues<F: Real>(a: &[Vec<F>]) -> Vec<F> {
    let n = a.len();
    let mut m: Vec<Vec<F>> = a.to_vec();
    if n == 0 {
        return Vec::new();
    }
    let scale = m
        .iter()
        .flat_map(|row| row.iter())
        .fold(F::zero(), |acc, &v| if v.abs() > acc { v.abs() } else { acc });
    if scale == F::zero() {
        return vec![F::zero(); n];
    }
    let tol = F::TIGHT_TOL * scale;
    for _sweep in 0..100 {
        let mut off = F::zero();
        for i in 0..n {
            for j in i + 1..n {
                off = off + m[i][j].abs();
            }
        }
        if off <= tol {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if m[p][q].abs() <= tol * F::of(1e-3) {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (F::of(2.0) * m[p][q]);
                let t = {
                    let sign = if theta >= F::zero() { F::one() } else { -F::one() };
                    sign / (theta.abs() + (theta * theta + F::one()).sqrt())
                };
                let c = F::one() / (t * t + F::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k][p];
                    let mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p][k];
                    let mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
            }
        }
    }
    (0..n).map(|i| m[i][i]).collect()
}

/// Least eigenvalue of a symmetric matrix (for positive-semidefiniteness
/// checks).
pub fn min_eigenvalue<F: Real>(a: &[Vec<F>]) -> F {
    symmetric_eigenvalues(a)
        .into_iter()
        .fold(F::infinity(), |acc, v| if v < acc { v } else { acc })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_2x2() {
        let a: Vec<Vec<f64>> = vec![vec![2.0, 1.0], vec![1.0, 3.0]];
        let b = vec![5.0, 10.0];
        let x = solve_square(&a, &b).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-12);
        assert!((x[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn singular_detected() {
        let a: Vec<Vec<f64>> = vec![vec![1.0, 2.0], vec![2.0, 4.0]];
        assert!(solve_square(&a, &[1.0, 2.0]).is_none());
    }

    #[test]
    fn eigenvalues_of_diagonal() {
        let a: Vec<Vec<f64>> = vec![vec![3.0, 0.0], vec![0.0, -1.0]];
        let mut ev = symmetric_eigenvalues(&a);
        ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
        assert!((ev[0] + 1.0).abs() < 1e-10);
        assert!((ev[1] - 3.0).abs() < 1e-10);
    }

    #[test]
    fn eigenvalues_symmetric() {
        // [[2,1],[1,2]] has eigenvalues 1 and 3.
        let a: Vec<Vec<f64>> = vec![vec![2.0, 1.0], vec![1.0, 2.0]];
        let mut ev = symmetric_eigenvalues(&a);
        ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
        assert!((ev[0] - 1.0).abs() < 1e-9);
        assert!((ev[1] - 3.0).abs() < 1e-9);
        assert!((min_eigenvalue(&a) - 1.0).abs() < 1e-9);
    }
}
