//! Homology of the State Complex over the rationals, prime fields and the
//! integers, and its comparison with the closed form.
//!
//! For `n >= 2` the closed form is `H_0 = Z`; for even `m` with
//! `2 <= m <= n - 1`, `H_m = Z^C(n-1,m) ⊕ (Z/2)^t` with
//! `t = Σ_{i=0}^{n-m-2} C(n-1,i)`; every other group vanishes.

pub mod chain;
pub mod rank;
pub mod snf;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

pub use chain::{boundary_matrices, boundary_matrices_with, ChainComplex, SparseMatrix};
pub use rank::{chain_ranks_mod_p, is_prime, rank_mod_p, rational_rank_exact, RANK_PRIMES};
pub use snf::smith_normal_form;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::state_complex::{build_state_complex_with, euler_characteristic};

/// Integer SNF runs by default on matrices with at most this many entries,
/// which covers every boundary of `St_n` for `n <= 5`.
pub const DEFAULT_SNF_MAX_ENTRIES: usize = 250_000;

/// Default largest `n` for which `verify_homology` runs the integer SNF.
pub const DEFAULT_SNF_MAX_N: usize = 5;

/// A finitely generated abelian group `Z^betti ⊕ (Z/2)^torsion2 ⊕ ...`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HomologyGroup {
    pub betti: usize,
    pub torsion2: usize,
    /// Remaining cyclic summands as prime-power orders.
    pub other_torsion: Vec<u64>,
}

impl HomologyGroup {
    pub fn free(betti: usize) -> Self {
        HomologyGroup {
            betti,
            ..Default::default()
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.betti == 0 && self.torsion2 == 0 && self.other_torsion.is_empty()
    }

    /// Adds the cyclic summand `Z/d`, split into prime powers.
    fn add_cyclic(&mut self, d: &BigInt) {
        let mut rest = d.clone();
        let mut p = BigInt::from(2);
        while &p * &p <= rest {
            let mut q = BigInt::one();
            while (&rest % &p).to_u8() == Some(0) {
                rest /= &p;
                q *= &p;
            }
            if !q.is_one() {
                self.push_prime_power(&q);
            }
            p += 1;
        }
        if rest > BigInt::one() {
            self.push_prime_power(&rest);
        }
    }

    fn push_prime_power(&mut self, q: &BigInt) {
        if q == &BigInt::from(2) {
            self.torsion2 += 1;
        } else {
            self.other_torsion.push(q.to_u64().unwrap_or(u64::MAX));
        }
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.betti {
            0 => {}
            1 => parts.push("Z".to_string()),
            b => parts.push(format!("Z^{b}")),
        }
        match self.torsion2 {
            0 => {}
            1 => parts.push("Z/2".to_string()),
            t => parts.push(format!("(Z/2)^{t}")),
        }
        parts.extend(self.other_torsion.iter().map(|q| format!("Z/{q}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// The predicted `H_m` of the `n`-th curvature set.
pub fn closed_form_homology(n: usize, m: usize) -> Result<HomologyGroup> {
    if n < 2 {
        return Err(Error::InvalidRange(format!(
            "closed form needs n >= 2, got {n}"
        )));
    }
    if m == 0 {
        return Ok(HomologyGroup::free(1));
    }
    if m % 2 == 1 || m > n - 1 {
        return Ok(HomologyGroup::default());
    }
    let torsion2 = if n >= m + 2 {
        (0..=n - m - 2).map(|i| binomial(n - 1, i)).sum()
    } else {
        0
    };
    Ok(HomologyGroup {
        betti: binomial(n - 1, m),
        torsion2,
        other_torsion: Vec::new(),
    })
}

/// Ranks of `∂_1, ..., ∂_top` over `Q` (`p = 0`) or `GF(p)`.
///
/// Rational ranks are exact for matrices up to [`rank::DENSE_RANK_MAX_ENTRIES`]
/// entries; larger ones take the rank modulo each of [`RANK_PRIMES`] and
/// fail with `RankDisagreement` unless all three agree.
pub fn boundary_ranks(c: &ChainComplex, p: u64, exec: Execution) -> Result<Vec<usize>> {
    if p == 0 {
        let modular = exec.map(&RANK_PRIMES, |&q| chain_ranks_mod_p(c, q));
        let exact: Vec<Option<usize>> = exec.map(c.boundaries(), |b| {
            (b.rows() * b.cols() <= rank::DENSE_RANK_MAX_ENTRIES).then(|| rational_rank_exact(b))
        });
        let mut ranks = Vec::with_capacity(exact.len());
        for (d, exact) in exact.into_iter().enumerate() {
            let first = modular[0][d];
            if modular.iter().any(|r| r[d] != first) {
                return Err(Error::RankDisagreement(format!(
                    "rank of boundary {} modulo {:?}: {:?}",
                    d + 1,
                    RANK_PRIMES,
                    modular.iter().map(|r| r[d]).collect::<Vec<_>>()
                )));
            }
            if let Some(e) = exact {
                if e != first {
                    return Err(Error::RankDisagreement(format!(
                        "boundary {}: exact rank {e}, modular rank {first}",
                        d + 1
                    )));
                }
            }
            ranks.push(first);
        }
        Ok(ranks)
    } else if is_prime(p) && p < 1 << 32 {
        Ok(chain_ranks_mod_p(c, p))
    } else {
        Err(Error::InvalidRange(format!(
            "coefficient field must be 0 or a prime below 2^32, got {p}"
        )))
    }
}

fn betti_from_ranks(dims: &[usize], ranks: &[usize]) -> Vec<usize> {
    (0..dims.len())
        .map(|d| {
            let out = if d == 0 { 0 } else { ranks[d - 1] };
            let into = ranks.get(d).copied().unwrap_or(0);
            dims[d] - out - into
        })
        .collect()
}

/// `β_d = dim C_d - rank ∂_d - rank ∂_{d+1}` over `Q` (`p = 0`) or `GF(p)`.
pub fn betti_over_field(c: &ChainComplex, p: u64) -> Result<Vec<usize>> {
    Ok(betti_from_ranks(
        c.dims(),
        &boundary_ranks(c, p, Execution::default())?,
    ))
}

pub fn integer_homology(c: &ChainComplex) -> Result<Vec<HomologyGroup>> {
    integer_homology_with(c, Some(DEFAULT_SNF_MAX_ENTRIES), Execution::default())
}

/// Integer homology from the Smith normal forms of all boundaries. Fails
/// with `SizeLimitExceeded` if a boundary has more than `max_entries`
/// entries (`None` lifts the cap).
pub fn integer_homology_with(
    c: &ChainComplex,
    max_entries: Option<usize>,
    exec: Execution,
) -> Result<Vec<HomologyGroup>> {
    if let Some(limit) = max_entries {
        if let Some(b) = c.boundaries().iter().find(|b| b.rows() * b.cols() > limit) {
            return Err(Error::SizeLimitExceeded {
                what: "boundary matrix entries for Smith normal form".into(),
                size: b.rows() * b.cols(),
                limit,
            });
        }
    }
    let factors = exec.map(c.boundaries(), smith_normal_form);
    let dims = c.dims();
    let ranks: Vec<usize> = factors.iter().map(Vec::len).collect();
    let betti = betti_from_ranks(dims, &ranks);
    Ok((0..dims.len())
        .map(|d| {
            let mut g = HomologyGroup::free(betti[d]);
            if let Some(f) = factors.get(d) {
                for x in f.iter().filter(|x| !x.is_one()) {
                    g.add_cyclic(x);
                }
            }
            g
        })
        .collect())
}

/// Options for [`verify_homology_with`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOptions {
    /// Run the integer SNF when `n` is at most this.
    pub snf_max_n: usize,
    /// Small primes whose field Betti numbers are compared with the
    /// closed form; 2 and 3 by default.
    pub primes: Vec<u64>,
    pub execution: Execution,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            snf_max_n: DEFAULT_SNF_MAX_N,
            primes: vec![2, 3],
            execution: Execution::default(),
        }
    }
}

/// Pass/fail per check for one degree; `None` when the check did not run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeChecks {
    /// Rational Betti number equals the closed form.
    pub q: bool,
    /// `dim H_d(GF(2)) = β_d + t_d + t_{d-1}` with `t` from the closed form.
    pub gf2: Option<bool>,
    /// `dim H_d(GF(3)) = β_d`, i.e. no 3-torsion.
    pub gf3: Option<bool>,
    /// Integer group equals the closed form exactly.
    pub snf: Option<bool>,
    /// Number of `Z/2` summands equals the closed form.
    pub torsion2: bool,
}

impl DegreeChecks {
    pub fn passed(&self) -> bool {
        self.q
            && self.torsion2
            && [self.gf2, self.gf3, self.snf]
                .iter()
                .all(|c| c.unwrap_or(true))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeReport {
    pub degree: usize,
    pub betti: usize,
    /// From the SNF when it ran, otherwise the number of invariant factors
    /// of `∂_{d+1}` divisible by 2 (rational rank minus `GF(2)` rank).
    pub torsion2: usize,
    /// `dim H_d` over each probed prime field, in `primes` order.
    pub field_dims: Vec<(u64, usize)>,
    /// The integer group, when the SNF ran.
    pub group: Option<HomologyGroup>,
    pub expected: HomologyGroup,
    pub checks: DegreeChecks,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyReport {
    pub n: usize,
    pub chain_dims: Vec<usize>,
    pub square_zero: bool,
    /// `Σ (-1)^d dim C_d`.
    pub euler_characteristic: i64,
    /// Euler characteristic agrees with `2^(n-2)`, with the alternating sum
    /// of rational Betti numbers, and with that over each prime field.
    pub euler_consistent: bool,
    pub snf_ran: bool,
    /// No SNF invariant factor has a prime other than 2.
    pub only_two_torsion: Option<bool>,
    pub degrees: Vec<DegreeReport>,
    pub passed: bool,
}

pub fn verify_homology(n: usize) -> Result<HomologyReport> {
    verify_homology_with(n, &VerifyOptions::default())
}

/// Builds `St_n`, computes its homology over `Q`, the probed prime fields
/// and (within the cap) the integers, and compares with the closed form.
pub fn verify_homology_with(n: usize, opts: &VerifyOptions) -> Result<HomologyReport> {
    if n < 2 {
        return Err(Error::InvalidRange(format!(
            "homology verification needs n >= 2, got {n}"
        )));
    }
    if let Some(&p) = opts.primes.iter().find(|&&p| !is_prime(p) || p >= 1 << 32) {
        return Err(Error::InvalidRange(format!("{p} is not a usable prime")));
    }
    let exec = opts.execution;
    let (k, _) = build_state_complex_with(n, exec)?;
    let c = boundary_matrices_with(&k, exec)?;
    let dims = c.dims().to_vec();

    let run_snf = n <= opts.snf_max_n;
    let ((q_ranks, field_ranks), integer) = exec.join(
        || {
            exec.join(
                || boundary_ranks(&c, 0, exec),
                || exec.map(&opts.primes, |&p| chain_ranks_mod_p(&c, p)),
            )
        },
        || run_snf.then(|| integer_homology_with(&c, None, exec)),
    );
    let q_ranks = q_ranks?;
    let integer = integer.transpose()?;
    let q_betti = betti_from_ranks(&dims, &q_ranks);
    let field_betti: Vec<Vec<usize>> = field_ranks
        .iter()
        .map(|r| betti_from_ranks(&dims, r))
        .collect();
    let gf2_ranks = opts
        .primes
        .iter()
        .position(|&p| p == 2)
        .map(|i| &field_ranks[i])
        .cloned()
        .unwrap_or_else(|| chain_ranks_mod_p(&c, 2));

    let expected: Vec<HomologyGroup> = (0..dims.len())
        .map(|d| closed_form_homology(n, d))
        .collect::<Result<_>>()?;
    let t = |d: usize| expected.get(d).map_or(0, |g| g.torsion2);

    let mut degrees = Vec::with_capacity(dims.len());
    for d in 0..dims.len() {
        let defect = q_ranks.get(d).copied().unwrap_or(0) - gf2_ranks.get(d).copied().unwrap_or(0);
        let group = integer.as_ref().map(|g| g[d].clone());
        let torsion2 = group.as_ref().map_or(defect, |g| g.torsion2);
        let field_dims: Vec<(u64, usize)> = opts
            .primes
            .iter()
            .zip(&field_betti)
            .map(|(&p, b)| (p, b[d]))
            .collect();
        let dim_over = |p: u64| field_dims.iter().find(|(q, _)| *q == p).map(|&(_, v)| v);
        let prev_t = if d == 0 { 0 } else { t(d - 1) };
        let checks = DegreeChecks {
            q: q_betti[d] == expected[d].betti,
            gf2: dim_over(2).map(|v| v == q_betti[d] + t(d) + prev_t),
            gf3: dim_over(3).map(|v| v == q_betti[d]),
            snf: group.as_ref().map(|g| g == &expected[d]),
            torsion2: torsion2 == expected[d].torsion2,
        };
        degrees.push(DegreeReport {
            degree: d,
            betti: q_betti[d],
            torsion2,
            field_dims,
            group,
            expected: expected[d].clone(),
            checks,
        });
    }

    let alternating = |b: &[usize]| -> i64 {
        b.iter()
            .enumerate()
            .map(|(d, &x)| if d % 2 == 0 { x as i64 } else { -(x as i64) })
            .sum()
    };
    let chi = c.euler_characteristic();
    let euler_consistent = BigInt::from(chi) == euler_characteristic(&k)
        && chi == 1i64 << (n - 2)
        && alternating(&q_betti) == chi
        && field_betti.iter().all(|b| alternating(b) == chi);
    let only_two_torsion = integer
        .as_ref()
        .map(|groups| groups.iter().all(|g| g.other_torsion.is_empty()));
    let passed = c.square_zero()
        && euler_consistent
        && only_two_torsion.unwrap_or(true)
        && degrees.iter().all(|d| d.checks.passed());
    Ok(HomologyReport {
        n,
        chain_dims: dims,
        square_zero: c.square_zero(),
        euler_characteristic: chi,
        euler_consistent,
        snf_ran: run_snf,
        only_two_torsion,
        degrees,
        passed,
    })
}
