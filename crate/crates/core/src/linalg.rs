//! Exact Gaussian elimination over ℚ.

use alloc::vec::Vec;

use num_traits::Zero;

use crate::rational::{self, Rational};
use crate::{Error, Result};

/// Solves `A x = b` for square nonsingular `A` (rows of equal length).
pub fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Result<Vec<Rational>> {
    let n = a.len();
    if b.len() != n || a.iter().any(|r| r.len() != n) {
        return Err(Error::SizeMismatch { expected: n, found: b.len() });
    }
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(Error::Singular)?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = rational::one() / &a[col][col];
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] * &inv;
            let (pivot_row, row) = pick_rows(&mut a, col, r);
            for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= &factor * p;
            }
            let v = &factor * &b[col];
            b[r] -= v;
        }
    }
    Ok((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

/// Row `p` shared and row `r` mutable, `p ≠ r`.
fn pick_rows(a: &mut [Vec<Rational>], p: usize, r: usize) -> (&[Rational], &mut [Rational]) {
    if p < r {
        let (lo, hi) = a.split_at_mut(r);
        (&lo[p], &mut hi[0])
    } else {
        let (lo, hi) = a.split_at_mut(p);
        (&hi[0], &mut lo[r])
    }
}

/// Determinant by Gaussian elimination over ℚ.
pub fn determinant(mut a: Vec<Vec<Rational>>) -> Rational {
    let n = a.len();
    let mut det = rational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return rational::zero();
        };
        if pivot != col {
            a.swap(col, pivot);
            det = -det;
        }
        det *= &a[col][col];
        let inv = rational::one() / &a[col][col];
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] * &inv;
            let (pivot_row, row) = pick_rows(&mut a, col, r);
            for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= &factor * p;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use alloc::vec;

    #[test]
    fn small_system() {
        let a = vec![vec![int(2), int(1)], vec![int(1), int(3)]];
        let x = solve(a.clone(), vec![int(3), int(5)]).unwrap();
        assert_eq!(x, vec![ratio(4, 5), ratio(7, 5)]);
        assert_eq!(determinant(a), int(5));
        assert_eq!(solve(vec![vec![int(1), int(2)], vec![int(2), int(4)]], vec![int(1), int(2)]), Err(Error::Singular));
    }
}
