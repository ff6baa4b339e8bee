//! Exact integer linear algebra: fraction-free determinants and ranks over
//! arbitrary-precision integers. Used wherever a sign decision must not be
//! left to floating point.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// Determinant of a square matrix by Bareiss fraction-free elimination.
/// Every intermediate division is exact.
pub fn determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    debug_assert!(m.iter().all(|row| row.len() == n));
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(pivot_row) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, pivot_row);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Rank over the rationals by integer row reduction with gcd normalization.
pub fn rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut r = 0usize;
    for c in 0..cols {
        let Some(pivot_row) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pivot_row);
        let pivot = m[r][c].clone();
        for i in r + 1..rows {
            if m[i][c].is_zero() {
                continue;
            }
            let factor = m[i][c].clone();
            for j in c..cols {
                m[i][j] = &m[i][j] * &pivot - &factor * &m[r][j];
            }
            normalize_row(&mut m[i]);
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

fn normalize_row(row: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for v in row.iter() {
        if !v.is_zero() {
            g = g.gcd(v);
        }
        if g.is_one() {
            return;
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for v in row.iter_mut() {
        *v = &*v / &g;
    }
}

/// Convenience wrapper for small signed integer matrices.
pub fn determinant_i64(m: &[Vec<i64>]) -> BigInt {
    determinant(
        m.iter()
            .map(|row| row.iter().map(|&v| BigInt::from(v)).collect())
            .collect(),
    )
}
