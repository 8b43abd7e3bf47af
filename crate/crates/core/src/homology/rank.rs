//! Matrix ranks over the rationals and over prime fields.

use num_bigint::BigInt;
use num_traits::Zero;

use super::chain::{ChainComplex, SparseMatrix};

/// Three distinct primes below `2^31` used for modular rational ranks.
pub const RANK_PRIMES: [u64; 3] = [2_147_483_647, 2_147_483_629, 2_147_483_587];

/// Matrices with at most this many entries get an exact fraction-free
/// elimination; larger ones use modular ranks.
pub const DENSE_RANK_MAX_ENTRIES: usize = 250_000;

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn to_mod(v: i64, p: u64) -> u64 {
    v.rem_euclid(p as i64) as u64
}

fn inverse(a: u64, p: u64) -> u64 {
    // Fermat: a^(p-2)
    let (mut base, mut exp, mut acc) = (a % p, p - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// `a - f * b` on sorted sparse vectors modulo `p`.
fn axpy(a: &[(u32, u64)], f: u64, b: &[(u32, u64)], p: u64) -> Vec<(u32, u64)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ra = a.get(i).map_or(u32::MAX, |e| e.0);
        let rb = b.get(j).map_or(u32::MAX, |e| e.0);
        if ra < rb {
            out.push(a[i]);
            i += 1;
        } else if rb < ra {
            out.push((rb, (p - f * b[j].1 % p) % p));
            j += 1;
        } else {
            let v = (a[i].1 + p - f * b[j].1 % p) % p;
            if v != 0 {
                out.push((ra, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Column reduction modulo `p`, eliminating by the lowest nonzero row.
/// Columns flagged in `skip` are known to reduce to zero and are ignored.
/// Returns the rank and the pivot rows.
fn reduce_mod_p(m: &SparseMatrix, p: u64, skip: Option<&[bool]>) -> (usize, Vec<u32>) {
    let mut owner: Vec<u32> = vec![u32::MAX; m.rows()];
    let mut reduced: Vec<Vec<(u32, u64)>> = Vec::new();
    let mut lows = Vec::new();
    for j in 0..m.cols() {
        if skip.is_some_and(|s| s[j]) {
            continue;
        }
        let mut col: Vec<(u32, u64)> = m
            .column(j)
            .iter()
            .map(|&(r, v)| (r, to_mod(v, p)))
            .filter(|&(_, v)| v != 0)
            .collect();
        while let Some(&(low, v)) = col.last() {
            let o = owner[low as usize];
            if o == u32::MAX {
                let inv = inverse(v, p);
                for e in &mut col {
                    e.1 = e.1 * inv % p;
                }
                owner[low as usize] = reduced.len() as u32;
                reduced.push(col);
                lows.push(low);
                break;
            }
            col = axpy(&col, v, &reduced[o as usize], p);
        }
    }
    (reduced.len(), lows)
}

pub fn rank_mod_p(m: &SparseMatrix, p: u64) -> usize {
    assert!(
        is_prime(p) && p < 1 << 32,
        "modulus must be a prime below 2^32"
    );
    reduce_mod_p(m, p, None).0
}

/// Ranks of `∂_1, ..., ∂_top` modulo `p`, top degree first so that pivot
/// rows of `∂_{d+1}` can be skipped as columns of `∂_d`.
pub fn chain_ranks_mod_p(c: &ChainComplex, p: u64) -> Vec<usize> {
    assert!(
        is_prime(p) && p < 1 << 32,
        "modulus must be a prime below 2^32"
    );
    let bs = c.boundaries();
    let mut ranks = vec![0; bs.len()];
    let mut cleared: Option<Vec<bool>> = None;
    for d in (0..bs.len()).rev() {
        let (rank, lows) = reduce_mod_p(&bs[d], p, cleared.as_deref());
        ranks[d] = rank;
        let mut next = vec![false; bs[d].rows()];
        for low in lows {
            next[low as usize] = true;
        }
        cleared = Some(next);
    }
    ranks
}

fn dense_i128(m: &SparseMatrix) -> Vec<Vec<i128>> {
    m.to_dense()
        .into_iter()
        .map(|r| r.into_iter().map(i128::from).collect())
        .collect()
}

/// Fraction-free Gaussian elimination in `i128`; `None` on overflow.
fn bareiss_i128(mut a: Vec<Vec<i128>>, cols: usize) -> Option<usize> {
    let rows = a.len();
    let mut prev: i128 = 1;
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| a[i][col] != 0) else {
            continue;
        };
        a.swap(rank, p);
        let (top, rest) = a.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        let pv = pivot_row[col];
        for row in rest.iter_mut() {
            let f = row[col];
            for j in col + 1..cols {
                let num = row[j]
                    .checked_mul(pv)?
                    .checked_sub(f.checked_mul(pivot_row[j])?)?;
                row[j] = num / prev;
            }
            row[col] = 0;
        }
        prev = pv;
        rank += 1;
    }
    Some(rank)
}

fn bareiss_big(m: &SparseMatrix) -> usize {
    let mut a: Vec<Vec<BigInt>> = m
        .to_dense()
        .into_iter()
        .map(|r| r.into_iter().map(BigInt::from).collect())
        .collect();
    let (rows, cols) = (m.rows(), m.cols());
    let mut prev = BigInt::from(1);
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let (top, rest) = a.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        let pv = pivot_row[col].clone();
        for row in rest.iter_mut() {
            let f = row[col].clone();
            for j in col + 1..cols {
                let num = &row[j] * &pv - &f * &pivot_row[j];
                row[j] = num / &prev;
            }
            row[col] = BigInt::zero();
        }
        prev = pv;
        rank += 1;
    }
    rank
}

/// Exact rational rank by fraction-free elimination, falling back to
/// arbitrary precision if `i128` would overflow.
pub fn rational_rank_exact(m: &SparseMatrix) -> usize {
    bareiss_i128(dense_i128(m), m.cols()).unwrap_or_else(|| bareiss_big(m))
}
