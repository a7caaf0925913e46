//! Exact Gaussian elimination over the rationals.
//!
//! Signature matrices are tiny (a handful of columns, a few dozen rows), so
//! arbitrary-precision rationals cost nothing and rule out any rounding
//! question in rank and decode computations.

use num::{BigInt, BigRational, Zero};

pub fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn rat_u(v: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Rank of a row-listed matrix.
pub fn rank(rows: &[Vec<BigRational>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        for i in (r + 1)..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &pivot;
            for j in c..cols {
                let sub = &f * &m[r][j];
                m[i][j] -= sub;
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinSolve {
    Unique(Vec<BigRational>),
    Inconsistent,
    Underdetermined,
}

/// Solves `a x = b` exactly for a column-count of unknowns, where `a` has one
/// row per equation (typically overdetermined).
pub fn solve(a: &[Vec<BigRational>], b: &[BigRational]) -> LinSolve {
    assert_eq!(a.len(), b.len());
    let vars = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();

    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..vars {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        for i in 0..m.len() {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &pivot;
            for j in c..=vars {
                let sub = &f * &m[r][j];
                m[i][j] -= sub;
            }
        }
        pivots.push((r, c));
        r += 1;
        if r == m.len() {
            break;
        }
    }

    if m.iter().skip(r).any(|row| !row[vars].is_zero()) {
        return LinSolve::Inconsistent;
    }
    if pivots.len() < vars {
        return LinSolve::Underdetermined;
    }
    let mut x = vec![BigRational::zero(); vars];
    for (row, col) in pivots {
        x[col] = &m[row][vars] / &m[row][col];
    }
    LinSolve::Unique(x)
}
