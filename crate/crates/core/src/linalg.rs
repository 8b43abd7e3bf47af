//! Exact dense linear algebra over the rationals.

use num_traits::Zero;

use crate::rational::Rational;

/// Solves `A w = b` exactly by Gauss-Jordan elimination, where `A` has the
/// given columns. Returns one solution (free variables set to zero), or
/// `None` when the system is inconsistent.
pub fn solve(columns: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let rows = rhs.len();
    let cols = columns.len();
    debug_assert!(columns.iter().all(|c| c.len() == rows));
    // augmented matrix, row-major
    let mut a: Vec<Vec<Rational>> = (0..rows)
        .map(|r| {
            let mut row: Vec<Rational> = columns.iter().map(|c| c[r].clone()).collect();
            row.push(rhs[r].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = Rational::from_integer(1.into()) / &a[r][c];
        for e in a[r].iter_mut() {
            *e *= &inv;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (e, pv) in row.iter_mut().zip(&pivot_row) {
                    if !pv.is_zero() {
                        *e -= &f * pv;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if a[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut w = vec![Rational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        w[c] = a[i][cols].clone();
    }
    Some(w)
}

/// Rank of the matrix with the given columns.
pub fn rank(columns: &[Vec<Rational>]) -> usize {
    let rows = columns.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<Rational>> = columns.to_vec();
    let mut r = 0;
    for row in 0..rows {
        let Some(p) = (r..a.len()).find(|&j| !a[j][row].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let pivot = a[r].clone();
        for col in a.iter_mut().skip(r + 1) {
            if !col[row].is_zero() {
                let f = &col[row] / &pivot[row];
                for (e, pv) in col.iter_mut().zip(&pivot) {
                    *e -= &f * pv;
                }
            }
        }
        r += 1;
    }
    r
}
