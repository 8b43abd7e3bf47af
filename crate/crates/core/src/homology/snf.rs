//! Smith normal form of sparse integer matrices.
//!
//! Elimination first runs sparsely in `i64`, repeatedly pivoting on a unit
//! entry of least Markowitz cost (each such step contributes an invariant
//! factor 1 and removes a row and a column). Whatever is left when no unit
//! entry remains, or when the next step would overflow, is diagonalized
//! densely with arbitrary-precision integers.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::chain::SparseMatrix;

/// Nonzero invariant factors `d_1 | d_2 | ...`, all positive.
pub fn smith_normal_form(a: &SparseMatrix) -> Vec<BigInt> {
    let (units, rest) = sparse_unit_elimination(a);
    let mut diag = dense_diagonal(rest);
    normalize_chain(&mut diag);
    let mut out = vec![BigInt::one(); units];
    // the dense block may itself contain units, keep the chain sorted
    out.extend(diag);
    out.sort();
    out
}

struct Work {
    cols: BTreeMap<u32, BTreeMap<u32, i64>>,
    rows: BTreeMap<u32, BTreeSet<u32>>,
}

impl Work {
    fn new(a: &SparseMatrix) -> Self {
        let mut cols = BTreeMap::new();
        let mut rows: BTreeMap<u32, BTreeSet<u32>> = BTreeMap::new();
        for (j, col) in a.columns().iter().enumerate() {
            if col.is_empty() {
                continue;
            }
            let map: BTreeMap<u32, i64> = col.iter().copied().collect();
            for &(r, _) in col {
                rows.entry(r).or_default().insert(j as u32);
            }
            cols.insert(j as u32, map);
        }
        Work { cols, rows }
    }

    /// The unit entry with least `(row count - 1) * (col count - 1)`.
    fn best_unit(&self) -> Option<(u32, u32, i64)> {
        let mut best: Option<(usize, u32, u32, i64)> = None;
        for (&j, col) in &self.cols {
            let cc = col.len() - 1;
            for (&r, &v) in col {
                if v.abs() != 1 {
                    continue;
                }
                let cost = (self.rows[&r].len() - 1) * cc;
                if best.as_ref().is_none_or(|b| cost < b.0) {
                    best = Some((cost, r, j, v));
                    if cost == 0 {
                        return Some((r, j, v));
                    }
                }
            }
        }
        best.map(|(_, r, j, v)| (r, j, v))
    }

    /// Clears row `r` with column operations against pivot column `pj`,
    /// then drops the pivot's row and column. Returns false, leaving the
    /// matrix untouched, if any entry would overflow.
    fn pivot(&mut self, r: u32, pj: u32, u: i64) -> bool {
        let pivot_col = self.cols[&pj].clone();
        let targets: Vec<u32> = self.rows[&r].iter().copied().filter(|&j| j != pj).collect();
        let mut updated = Vec::with_capacity(targets.len());
        for &j in &targets {
            let mut col = self.cols[&j].clone();
            // column_j -= (a_rj / u) * column_pj, u = ±1
            let f = col[&r] * u;
            for (&i, &pv) in &pivot_col {
                let Some(delta) = f.checked_mul(pv) else {
                    return false;
                };
                let entry = col.entry(i).or_insert(0);
                let Some(v) = entry.checked_sub(delta) else {
                    return false;
                };
                *entry = v;
            }
            updated.push((j, col));
        }
        for (j, col) in updated {
            let old: Vec<u32> = self.cols[&j].keys().copied().collect();
            for i in old {
                if col.get(&i).is_none_or(|v| *v == 0) {
                    self.rows.get_mut(&i).expect("row present").remove(&j);
                }
            }
            let col: BTreeMap<u32, i64> = col.into_iter().filter(|&(_, v)| v != 0).collect();
            for &i in col.keys() {
                self.rows.entry(i).or_default().insert(j);
            }
            if col.is_empty() {
                self.cols.remove(&j);
            } else {
                self.cols.insert(j, col);
            }
        }
        // row r now meets only the pivot column; row operations clear the
        // rest of the pivot column without touching anything else
        let removed = self.cols.remove(&pj).expect("pivot column present");
        for i in removed.keys() {
            let set = self.rows.get_mut(i).expect("row present");
            set.remove(&pj);
            if set.is_empty() {
                self.rows.remove(i);
            }
        }
        self.rows.remove(&r);
        true
    }
}

/// Returns the number of unit pivots taken and the remaining block, dense.
fn sparse_unit_elimination(a: &SparseMatrix) -> (usize, Vec<Vec<BigInt>>) {
    let mut w = Work::new(a);
    let mut units = 0;
    while let Some((r, j, u)) = w.best_unit() {
        if !w.pivot(r, j, u) {
            break;
        }
        units += 1;
    }
    let row_ids: Vec<u32> = w.rows.keys().copied().collect();
    let col_ids: Vec<u32> = w.cols.keys().copied().collect();
    let mut dense = vec![vec![BigInt::zero(); col_ids.len()]; row_ids.len()];
    for (cj, j) in col_ids.iter().enumerate() {
        for (i, v) in &w.cols[j] {
            let ri = row_ids.binary_search(i).expect("row listed");
            dense[ri][cj] = BigInt::from(*v);
        }
    }
    (units, dense)
}

/// Diagonalizes with unimodular row and column operations; returns the
/// nonzero diagonal (absolute values), not yet a divisibility chain.
fn dense_diagonal(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero magnitude in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, v) in row.iter().enumerate().skip(t) {
                if !v.is_zero() && best.is_none_or(|(bi, bj)| v.abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj);
        }
        let mut clean = true;
        let p = a[t][t].clone();
        for i in t + 1..rows {
            if a[i][t].is_zero() {
                continue;
            }
            let q = a[i][t].div_floor(&p);
            let (top, rest) = a.split_at_mut(i);
            let pivot_row = &top[t];
            for (x, y) in rest[0].iter_mut().zip(pivot_row).skip(t) {
                *x -= &q * y;
            }
            clean &= rest[0][t].is_zero();
        }
        for j in t + 1..cols {
            if a[t][j].is_zero() {
                continue;
            }
            let q = a[t][j].div_floor(&p);
            for row in a.iter_mut().skip(t) {
                let y = row[t].clone();
                row[j] -= &q * y;
            }
            clean &= a[t][j].is_zero();
        }
        if clean {
            diag.push(p.abs());
            t += 1;
        }
        // otherwise a smaller remainder appeared; pick it as the new pivot
    }
    diag
}

/// Rewrites a diagonal into a divisibility chain with the same cokernel.
fn normalize_chain(diag: &mut [BigInt]) {
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            let g = diag[i].gcd(&diag[j]);
            let l = diag[i].lcm(&diag[j]);
            diag[i] = g;
            diag[j] = l;
        }
    }
}
