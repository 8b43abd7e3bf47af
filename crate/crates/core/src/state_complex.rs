//! The State Complex: the abstract simplicial complex whose simplices are
//! the vertex sets `V(c)` of all cluster structures on `n` points.
//!
//! Vertices are the sign patterns `(+1, ±1, ..., ±1)`, indexed by their
//! bit string read as an unsigned integer (bit `i - 1` set when coordinate
//! `i` is `-1`, coordinates 0-based). Since every such pattern is a vertex,
//! the vertex index of a pattern is simply its bits.

use std::collections::HashSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::circle::{realize_matrix, Configuration, DistanceMatrix};
use crate::cluster::{
    induced_cluster, phi, reverse_barycentric, transpose, vertex_set, BarycentricPoint,
    ClusterStructure,
};
use crate::error::{Error, Result};
use crate::exec::Execution;

/// Largest `n` for which the full complex is materialized. Simplices are
/// packed as one byte per vertex into a `u64`.
pub const MAX_BUILD_N: usize = 8;

/// Default cap for the quadratic pairwise-intersection check.
pub const DEFAULT_INTERSECTION_CHECK_MAX_N: usize = 5;

/// A vertex of the State Complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignVertex {
    n: usize,
    bits: u64,
}

impl SignVertex {
    pub fn new(n: usize, bits: u64) -> Result<Self> {
        if n == 0 || n > 64 || (n < 65 && bits >> (n - 1) != 0) {
            return Err(Error::InvalidRange(format!(
                "bits {bits:#b} do not fit n = {n}"
            )));
        }
        Ok(SignVertex { n, bits })
    }

    pub fn from_signs(signs: &[i8]) -> Result<Self> {
        if signs.first() != Some(&1) {
            return Err(Error::InvalidRange(
                "first coordinate of a vertex must be +1".into(),
            ));
        }
        let bits =
            signs[1..].iter().enumerate().fold(
                0u64,
                |acc, (i, &s)| if s < 0 { acc | (1 << i) } else { acc },
            );
        SignVertex::new(signs.len(), bits)
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn index(&self) -> usize {
        self.bits as usize
    }

    pub fn signs(&self) -> Vec<i8> {
        let mut out = Vec::with_capacity(self.n);
        out.push(1);
        out.extend((0..self.n - 1).map(|i| if self.bits >> i & 1 == 1 { -1 } else { 1 }));
        out
    }
}

impl fmt::Display for SignVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in self.signs() {
            f.write_str(if s > 0 { "+" } else { "-" })?;
        }
        Ok(())
    }
}

fn pack(tuple: &[usize]) -> u64 {
    debug_assert!(tuple.len() <= 8 && tuple.iter().all(|&v| v < 256));
    let mut key = 0u64;
    for &v in tuple {
        key = key << 8 | v as u64;
    }
    key
}

fn unpack(key: u64, len: usize) -> Vec<usize> {
    (0..len)
        .map(|i| (key >> (8 * (len - 1 - i)) & 0xff) as usize)
        .collect()
}

/// An abstract simplicial complex on the sign vertices of `n` points.
///
/// Simplices of dimension `d` are sorted `(d+1)`-tuples of vertex indices,
/// stored packed and in ascending lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    n: usize,
    faces: Vec<Vec<u64>>,
    labels: Option<Vec<Vec<i8>>>,
}

impl SimplicialComplex {
    /// Builds a complex from explicit tuples. Tuples are sorted and
    /// deduplicated; no closure is enforced (see [`verify_complex`]).
    pub fn from_simplices(n: usize, simplices: &[Vec<usize>]) -> Result<Self> {
        if n == 0 || n > MAX_BUILD_N + 1 {
            return Err(Error::InvalidRange(format!(
                "n = {n} outside 1..={}",
                MAX_BUILD_N + 1
            )));
        }
        let mut faces: Vec<Vec<u64>> = Vec::new();
        for s in simplices {
            if s.is_empty() || s.len() > 8 || s.iter().any(|&v| v >= 256) {
                return Err(Error::InvalidRange(format!("unsupported simplex {s:?}")));
            }
            let mut sorted = s.clone();
            sorted.sort_unstable();
            let d = sorted.len() - 1;
            if faces.len() <= d {
                faces.resize(d + 1, Vec::new());
            }
            faces[d].push(pack(&sorted));
        }
        for list in &mut faces {
            list.sort_unstable();
            list.dedup();
        }
        Ok(SimplicialComplex {
            n,
            faces,
            labels: None,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_vertices(&self) -> usize {
        1 << (self.n - 1)
    }

    pub fn vertex(&self, index: usize) -> SignVertex {
        SignVertex::new(self.n, index as u64).expect("vertex index in range")
    }

    pub fn vertices(&self) -> Vec<SignVertex> {
        (0..self.num_vertices()).map(|i| self.vertex(i)).collect()
    }

    /// Highest dimension with at least one simplex.
    pub fn dim(&self) -> Option<usize> {
        self.faces.iter().rposition(|f| !f.is_empty())
    }

    pub fn count(&self, d: usize) -> usize {
        self.faces.get(d).map_or(0, Vec::len)
    }

    pub fn f_vector(&self) -> Vec<usize> {
        match self.dim() {
            Some(top) => (0..=top).map(|d| self.count(d)).collect(),
            None => Vec::new(),
        }
    }

    pub fn simplex(&self, d: usize, index: usize) -> Vec<usize> {
        unpack(self.faces[d][index], d + 1)
    }

    pub fn simplices(&self, d: usize) -> impl Iterator<Item = Vec<usize>> + '_ {
        self.faces
            .get(d)
            .into_iter()
            .flatten()
            .map(move |&key| unpack(key, d + 1))
    }

    /// Position of a sorted tuple within its dimension.
    pub fn index_of(&self, tuple: &[usize]) -> Option<usize> {
        if tuple.is_empty() || tuple.len() > 8 || tuple.iter().any(|&v| v >= 256) {
            return None;
        }
        self.faces
            .get(tuple.len() - 1)?
            .binary_search(&pack(tuple))
            .ok()
    }

    pub fn contains(&self, tuple: &[usize]) -> bool {
        self.index_of(tuple).is_some()
    }

    /// The provenance label of a simplex: the lexicographically smaller of
    /// the two cluster structures `{c, transpose(c)}` sharing it.
    pub fn label(&self, d: usize, index: usize) -> Option<ClusterStructure> {
        let labels = self.labels.as_ref()?;
        let n = self.n;
        let values = labels[d][index * n..(index + 1) * n]
            .iter()
            .map(|&v| v as i32)
            .collect();
        Some(ClusterStructure::from_trusted(d + 1, values))
    }

    pub fn has_labels(&self) -> bool {
        self.labels.is_some()
    }
}

/// Everything observed while assembling the complex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildStats {
    /// Number of cluster structures enumerated per simplex dimension.
    pub raw_structures: Vec<u64>,
    /// Simplices kept after merging structures with equal vertex sets.
    pub simplices: Vec<u64>,
    /// Groups that were not exactly `{c, transpose(c)}` with `c != transpose(c)`
    /// (or a single structure in dimension 0).
    pub pairing_violations: Vec<String>,
}

/// Lexicographic stream of all `(m, n)`-cluster structures.
pub struct ClusterEnumerator {
    n: usize,
    m: usize,
    domain: Vec<i32>,
    choice: Vec<usize>,
    counts: Vec<usize>,
    started: bool,
    done: bool,
}

impl ClusterEnumerator {
    fn new(n: usize, m: usize) -> Self {
        let m_i = m as i32;
        let domain: Vec<i32> = (-m_i..=-1).chain(1..=m_i).collect();
        let mut counts = vec![0; m + 1];
        counts[1] = 1;
        ClusterEnumerator {
            n,
            m,
            domain,
            choice: vec![0; n],
            counts,
            started: false,
            done: false,
        }
    }

    fn missing(&self) -> usize {
        (1..=self.m).filter(|&k| self.counts[k] == 0).count()
    }

    fn magnitude(&self, slot: usize) -> usize {
        self.domain[slot].unsigned_abs() as usize
    }

    /// Tries domain slots `from..` at `pos`; leaves the first feasible one assigned.
    fn assign_from(&mut self, pos: usize, from: usize) -> bool {
        for slot in from..self.domain.len() {
            let mag = self.magnitude(slot);
            self.counts[mag] += 1;
            if self.missing() <= self.n - 1 - pos {
                self.choice[pos] = slot;
                return true;
            }
            self.counts[mag] -= 1;
        }
        false
    }

    fn fill(&mut self, from_pos: usize) {
        for pos in from_pos..self.n {
            let ok = self.assign_from(pos, 0);
            debug_assert!(ok, "a feasible prefix always completes");
        }
    }

    fn current(&self) -> ClusterStructure {
        let mut values = Vec::with_capacity(self.n);
        values.push(1);
        values.extend(self.choice[1..].iter().map(|&s| self.domain[s]));
        ClusterStructure::from_trusted(self.m, values)
    }

    fn advance(&mut self) -> bool {
        for pos in (1..self.n).rev() {
            let slot = self.choice[pos];
            let mag = self.magnitude(slot);
            self.counts[mag] -= 1;
            if self.assign_from(pos, slot + 1) {
                self.fill(pos + 1);
                return true;
            }
        }
        false
    }
}

impl Iterator for ClusterEnumerator {
    type Item = ClusterStructure;

    fn next(&mut self) -> Option<ClusterStructure> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            if self.missing() > self.n - 1 {
                self.done = true;
                return None;
            }
            self.fill(1);
            return Some(self.current());
        }
        if self.advance() {
            Some(self.current())
        } else {
            self.done = true;
            None
        }
    }
}

/// All `(m, n)`-cluster structures in lexicographic order of their values.
pub fn enumerate_cluster_structures(n: usize, m: usize) -> Result<ClusterEnumerator> {
    if n == 0 || m == 0 || m > n {
        return Err(Error::InvalidRange(format!(
            "need 1 <= m <= n, got n = {n}, m = {m}"
        )));
    }
    Ok(ClusterEnumerator::new(n, m))
}

/// Sorted vertex indices of `V(c)`.
pub fn simplex_vertices(c: &ClusterStructure) -> Vec<usize> {
    let mut idx: Vec<usize> = vertex_set(c)
        .iter()
        .map(|s| SignVertex::from_signs(s).expect("vertex signs").index())
        .collect();
    idx.sort_unstable();
    idx
}

pub fn build_state_complex(n: usize) -> Result<SimplicialComplex> {
    build_state_complex_with(n, Execution::default()).map(|(k, _)| k)
}

/// Enumerates every cluster structure, inserts its vertex set, and merges
/// structures with equal vertex sets, recording how the merges fell out.
///
/// Work is split by the sign pattern of coordinates `2..n`; the output does
/// not depend on the execution strategy.
pub fn build_state_complex_with(
    n: usize,
    exec: Execution,
) -> Result<(SimplicialComplex, BuildStats)> {
    if n == 0 || n > MAX_BUILD_N {
        return Err(Error::SizeLimitExceeded {
            what: "state complex order n".into(),
            size: n,
            limit: MAX_BUILD_N,
        });
    }
    let mut faces = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    let mut stats = BuildStats {
        raw_structures: Vec::with_capacity(n),
        simplices: Vec::with_capacity(n),
        pairing_violations: Vec::new(),
    };
    for m in 1..=n {
        // |c| patterns for this m; each combines with every sign pattern
        let patterns: Vec<Vec<u8>> = enumerate_cluster_structures(n, m)?
            .filter(|c| c.values().iter().all(|&v| v > 0))
            .map(|c| c.values().iter().map(|&v| v as u8).collect())
            .collect();
        // above[p][k-1]: bitmask of coordinates with |c| > k
        let above: Vec<Vec<u64>> = patterns
            .iter()
            .map(|mags| {
                (1..=m)
                    .map(|k| {
                        mags[1..].iter().enumerate().fold(0u64, |acc, (i, &mag)| {
                            if mag as usize > k {
                                acc | 1 << i
                            } else {
                                acc
                            }
                        })
                    })
                    .collect()
            })
            .collect();
        let sign_patterns = 1usize << (n - 1);
        let chunks: Vec<Vec<(u64, u32, u32)>> = exec.map_range(sign_patterns, |signs| {
            let s = signs as u64;
            let mut out = Vec::with_capacity(patterns.len());
            let mut verts = [0u64; 8];
            for (p, masks) in above.iter().enumerate() {
                for (slot, mask) in verts.iter_mut().zip(masks) {
                    *slot = s ^ mask;
                }
                let tuple = &mut verts[..m];
                tuple.sort_unstable();
                let key = tuple.iter().fold(0u64, |acc, &v| acc << 8 | v);
                out.push((key, p as u32, signs as u32));
            }
            out
        });
        let mut items: Vec<(u64, u32, u32)> = chunks.into_iter().flatten().collect();
        stats.raw_structures.push(items.len() as u64);
        sort_items(&mut items, exec);

        let structure = |p: u32, signs: u32| -> Vec<i8> {
            patterns[p as usize]
                .iter()
                .enumerate()
                .map(|(i, &mag)| {
                    if i > 0 && signs >> (i - 1) & 1 == 1 {
                        -(mag as i8)
                    } else {
                        mag as i8
                    }
                })
                .collect()
        };

        let mut keys = Vec::new();
        let mut dim_labels = Vec::new();
        let mut start = 0;
        while start < items.len() {
            let key = items[start].0;
            let mut end = start + 1;
            while end < items.len() && items[end].0 == key {
                end += 1;
            }
            let group: Vec<Vec<i8>> = items[start..end]
                .iter()
                .map(|&(_, p, s)| structure(p, s))
                .collect();
            let tuple = unpack(key, m);
            if tuple.windows(2).any(|w| w[0] == w[1]) && stats.pairing_violations.len() < 32 {
                stats
                    .pairing_violations
                    .push(format!("repeated vertex in {tuple:?}"));
            }
            let as_cluster = |v: &Vec<i8>| {
                ClusterStructure::from_trusted(m, v.iter().map(|&x| x as i32).collect())
            };
            let paired = if m == 1 {
                group.len() == 1
            } else {
                group.len() == 2 && {
                    let (a, b) = (as_cluster(&group[0]), as_cluster(&group[1]));
                    a != b && transpose(&a) == b
                }
            };
            if !paired && stats.pairing_violations.len() < 32 {
                stats
                    .pairing_violations
                    .push(format!("simplex {tuple:?} shared by {group:?}"));
            }
            keys.push(key);
            let label = group.iter().min().expect("nonempty group");
            dim_labels.extend_from_slice(label);
            start = end;
        }
        stats.simplices.push(keys.len() as u64);
        faces.push(keys);
        labels.push(dim_labels);
    }
    Ok((
        SimplicialComplex {
            n,
            faces,
            labels: Some(labels),
        },
        stats,
    ))
}

fn sort_items(items: &mut [(u64, u32, u32)], exec: Execution) {
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::slice::ParallelSliceMut;
        items.par_sort_unstable();
        return;
    }
    let _ = exec;
    items.sort_unstable();
}

/// Stirling number of the second kind via `S(n+1,k) = k S(n,k) + S(n,k-1)`.
pub fn stirling2(n: usize, k: usize) -> Result<BigUint> {
    if k > n {
        return Err(Error::InvalidRange(format!("S({n},{k}) needs k <= n")));
    }
    let mut row = vec![BigUint::one()]; // S(0, 0)
    for size in 1..=n {
        let mut next = vec![BigUint::zero(); size + 1];
        for j in 1..=size {
            let carried = if j < size {
                &row[j] * BigUint::from(j)
            } else {
                BigUint::zero()
            };
            next[j] = carried + &row[j - 1];
        }
        row = next;
    }
    Ok(row[k].clone())
}

fn factorial(m: usize) -> BigUint {
    (1..=m).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// Closed-form face numbers `[f(n,0), ..., f(n,n-1)]`.
pub fn f_vector(n: usize) -> Result<Vec<BigUint>> {
    if n == 0 {
        return Err(Error::InvalidRange("n must be at least 1".into()));
    }
    if n == 1 {
        return Ok(vec![BigUint::one()]);
    }
    let scale = BigUint::one() << (n - 2);
    let mut out = vec![BigUint::one() << (n - 1)];
    for m in 1..n {
        out.push(&scale * factorial(m) * stirling2(n, m + 1)?);
    }
    Ok(out)
}

/// Number of `(m, n)`-cluster structures: `2^(n-1) (m-1)! S(n, m)`.
pub fn cluster_structure_count(n: usize, m: usize) -> Result<BigUint> {
    if n == 0 || m == 0 || m > n {
        return Err(Error::InvalidRange(format!(
            "need 1 <= m <= n, got n = {n}, m = {m}"
        )));
    }
    Ok((BigUint::one() << (n - 1)) * factorial(m - 1) * stirling2(n, m)?)
}

pub fn euler_characteristic(k: &SimplicialComplex) -> BigInt {
    k.f_vector()
        .iter()
        .enumerate()
        .fold(BigInt::zero(), |acc, (d, &f)| {
            if d % 2 == 0 {
                acc + BigInt::from(f)
            } else {
                acc - BigInt::from(f)
            }
        })
}

/// The unique minimal simplex containing a realizable matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocatedSimplex {
    /// Sorted vertex indices.
    pub vertices: Vec<usize>,
    /// The lexicographically smaller of the two cluster structures whose
    /// vertex set is this simplex.
    pub label: ClusterStructure,
    /// Weights of `V(label)` in order `v^(1), ..., v^(m)`; all positive.
    pub barycentric: BarycentricPoint,
    /// `phi(label, barycentric)`, a normalized realization of the matrix.
    pub configuration: Configuration,
}

pub fn minimal_simplex(m: &DistanceMatrix) -> Result<LocatedSimplex> {
    let x = realize_matrix(m)?;
    let (c, t) = induced_cluster(&x)?;
    let vertices = simplex_vertices(&c);
    let ct = transpose(&c);
    let (label, barycentric, configuration) = if ct < c {
        let tr = reverse_barycentric(&t);
        let y = phi(&ct, &tr)?;
        (ct, tr, y)
    } else {
        (c, t, x)
    };
    Ok(LocatedSimplex {
        vertices,
        label,
        barycentric,
        configuration,
    })
}

/// Result of [`verify_complex`].
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexReport {
    pub violations: Vec<String>,
    pub intersections_checked: bool,
}

impl ComplexReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn verify_complex(k: &SimplicialComplex) -> ComplexReport {
    verify_complex_with(k, DEFAULT_INTERSECTION_CHECK_MAX_N)
}

/// Checks closure under faces, tuple well-formedness and dimension bounds;
/// for `n <= intersection_max_n` also checks every pairwise intersection.
pub fn verify_complex_with(k: &SimplicialComplex, intersection_max_n: usize) -> ComplexReport {
    let mut report = ComplexReport::default();
    let nv = k.num_vertices();
    if let Some(top) = k.dim() {
        if top + 1 > k.n() {
            report
                .violations
                .push(format!("dimension {top} exceeds n - 1 = {}", k.n() - 1));
        }
    }
    for d in 0..k.faces.len() {
        for s in k.simplices(d) {
            if s.windows(2).any(|w| w[0] >= w[1]) {
                report
                    .violations
                    .push(format!("tuple {s:?} is not strictly increasing"));
            }
            if s.iter().any(|&v| v >= nv) {
                report
                    .violations
                    .push(format!("tuple {s:?} uses a vertex outside 0..{nv}"));
            }
            if d > 0 {
                for skip in 0..s.len() {
                    let facet: Vec<usize> = s
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != skip)
                        .map(|(_, &v)| v)
                        .collect();
                    if !k.contains(&facet) {
                        report
                            .violations
                            .push(format!("face {facet:?} of {s:?} is missing"));
                    }
                }
            }
        }
    }
    if k.n() <= intersection_max_n && nv <= 64 {
        report.intersections_checked = true;
        let masks: Vec<u64> = (0..k.faces.len())
            .flat_map(|d| k.simplices(d).collect::<Vec<_>>())
            .map(|s| s.iter().fold(0u64, |acc, &v| acc | 1 << v))
            .collect();
        let present: HashSet<u64> = masks.iter().copied().collect();
        'outer: for (i, a) in masks.iter().enumerate() {
            for b in &masks[i + 1..] {
                let common = a & b;
                if common != 0 && !present.contains(&common) {
                    report.violations.push(format!(
                        "intersection {:?} of two simplices is not a simplex",
                        (0..nv).filter(|v| common >> v & 1 == 1).collect::<Vec<_>>()
                    ));
                    if report.violations.len() > 64 {
                        break 'outer;
                    }
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::distance_matrix;
    use crate::rational::rat;

    fn big(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    /// Brute force: count set partitions of `0..n` into `k` blocks via
    /// restricted growth strings.
    fn partitions_brute(n: usize, k: usize) -> u64 {
        fn go(pos: usize, n: usize, k: usize, max: usize) -> u64 {
            if pos == n {
                return (max == k) as u64;
            }
            (0..=max.min(k - 1))
                .map(|b| go(pos + 1, n, k, max.max(b + 1)))
                .sum()
        }
        if n == 0 {
            return (k == 0) as u64;
        }
        if k == 0 {
            return 0;
        }
        go(0, n, k, 0)
    }

    #[test]
    fn stirling_matches_brute_force() {
        assert_eq!(stirling2(3, 2).unwrap(), BigUint::from(3u32));
        assert_eq!(stirling2(4, 2).unwrap(), BigUint::from(7u32));
        for n in 0..=9 {
            assert_eq!(stirling2(n, n).unwrap(), BigUint::one());
            for k in 0..=n {
                assert_eq!(
                    stirling2(n, k).unwrap(),
                    BigUint::from(partitions_brute(n, k)),
                    "S({n},{k})"
                );
            }
        }
        assert!(stirling2(2, 3).is_err());
    }

    #[test]
    fn f_vector_examples() {
        assert_eq!(f_vector(3).unwrap(), big(&[4, 6, 4]));
        assert_eq!(f_vector(4).unwrap(), big(&[8, 28, 48, 24]));
        assert_eq!(f_vector(2).unwrap(), big(&[2, 1]));
        assert_eq!(f_vector(1).unwrap(), big(&[1]));
    }

    #[test]
    fn enumeration_counts_and_order() {
        assert_eq!(enumerate_cluster_structures(3, 1).unwrap().count(), 4);
        assert_eq!(enumerate_cluster_structures(3, 2).unwrap().count(), 12);
        assert_eq!(enumerate_cluster_structures(3, 3).unwrap().count(), 8);
        assert_eq!(enumerate_cluster_structures(1, 1).unwrap().count(), 1);
        assert!(enumerate_cluster_structures(3, 4).is_err());
        assert!(enumerate_cluster_structures(3, 0).is_err());
        for n in 1..=6 {
            for m in 1..=n {
                let all: Vec<_> = enumerate_cluster_structures(n, m).unwrap().collect();
                assert!(all.windows(2).all(|w| w[0].values() < w[1].values()));
                assert!(all.iter().all(|c| c.validate().is_ok()));
                assert_eq!(
                    BigUint::from(all.len()),
                    cluster_structure_count(n, m).unwrap()
                );
            }
        }
    }

    #[test]
    fn enumeration_matches_filtered_product() {
        // brute force over every value list, keeping the valid ones
        let n = 4;
        for m in 1..=n {
            let dom: Vec<i32> = (-(m as i32)..=m as i32).filter(|&v| v != 0).collect();
            let mut brute = Vec::new();
            for a in &dom {
                for b in &dom {
                    for c in &dom {
                        if let Ok(cs) = ClusterStructure::new(m, vec![1, *a, *b, *c]) {
                            brute.push(cs);
                        }
                    }
                }
            }
            let ours: Vec<_> = enumerate_cluster_structures(n, m).unwrap().collect();
            assert_eq!(ours, brute);
        }
    }

    #[test]
    fn build_small_complexes() {
        let k3 = build_state_complex(3).unwrap();
        assert_eq!(k3.f_vector(), vec![4, 6, 4]);
        let k2 = build_state_complex(2).unwrap();
        assert_eq!(k2.f_vector(), vec![2, 1]);
        assert_eq!(k2.simplex(1, 0), vec![0, 1]);
        let k1 = build_state_complex(1).unwrap();
        assert_eq!(k1.f_vector(), vec![1]);
        assert_eq!(euler_characteristic(&k1), BigInt::one());
        let (k4, stats) = build_state_complex_with(4, Execution::Sequential).unwrap();
        assert_eq!(k4.f_vector(), vec![8, 28, 48, 24]);
        assert!(stats.pairing_violations.is_empty());
        assert_eq!(stats.raw_structures, vec![8, 56, 96, 48]);
        assert!(build_state_complex(0).is_err());
        assert!(build_state_complex(9).is_err());
    }

    #[test]
    fn euler_examples() {
        assert_eq!(
            euler_characteristic(&build_state_complex(3).unwrap()),
            BigInt::from(2)
        );
        assert_eq!(
            euler_characteristic(&build_state_complex(4).unwrap()),
            BigInt::from(4)
        );
        assert_eq!(
            euler_characteristic(&build_state_complex(2).unwrap()),
            BigInt::one()
        );
    }

    #[test]
    fn execution_strategies_agree() {
        for n in 1..=6 {
            let a = build_state_complex_with(n, Execution::Sequential).unwrap();
            let b = build_state_complex_with(n, Execution::Parallel).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn labels_are_lex_min_of_pair() {
        let k = build_state_complex(3).unwrap();
        let labels: Vec<String> = (0..k.count(2))
            .map(|i| k.label(2, i).unwrap().to_string())
            .collect();
        // f1 < f2, f4 < f3, f6 < f5, f7 < f8 in lexicographic order
        let mut expected = vec!["(+1,-2,+3)", "(+1,-3,-2)", "(+1,-2,-3)", "(+1,-3,+2)"];
        expected.sort();
        let mut got = labels.clone();
        got.sort();
        assert_eq!(got, expected);
    }

    #[test]
    fn sign_vertex_round_trip() {
        let v = SignVertex::from_signs(&[1, -1, 1, -1]).unwrap();
        assert_eq!(v.bits(), 0b101);
        assert_eq!(v.signs(), vec![1, -1, 1, -1]);
        assert_eq!(v.to_string(), "+-+-");
        assert!(SignVertex::from_signs(&[-1, 1]).is_err());
        assert!(SignVertex::new(3, 4).is_err());
    }

    #[test]
    fn minimal_simplex_examples() {
        let from_rows = |rows: &[[(i64, i64); 3]]| {
            DistanceMatrix::from_rows(
                rows.iter()
                    .map(|r| r.iter().map(|&(p, q)| rat(p, q)).collect())
                    .collect(),
            )
            .unwrap()
        };
        let m1 = from_rows(&[
            [(0, 1), (1, 1), (1, 1)],
            [(1, 1), (0, 1), (0, 1)],
            [(1, 1), (0, 1), (0, 1)],
        ]);
        let loc = minimal_simplex(&m1).unwrap();
        // (+--) has bits 0b11
        assert_eq!(loc.vertices, vec![3]);
        assert_eq!(loc.barycentric.coords(), &[rat(1, 1)]);

        let f1 = from_rows(&[
            [(0, 1), (2, 3), (7, 12)],
            [(2, 3), (0, 1), (3, 4)],
            [(7, 12), (3, 4), (0, 1)],
        ]);
        let loc = minimal_simplex(&f1).unwrap();
        // (++-) = 0b10, (+--) = 0b11, (+-+) = 0b01
        assert_eq!(loc.vertices, vec![1, 2, 3]);
        assert_eq!(loc.label.values(), &[1, -2, 3]);
        assert_eq!(
            loc.barycentric.coords(),
            &[rat(1, 3), rat(1, 4), rat(5, 12)]
        );
        assert_eq!(distance_matrix(&loc.configuration), f1);

        let edge = from_rows(&[
            [(0, 1), (1, 2), (1, 1)],
            [(1, 2), (0, 1), (1, 2)],
            [(1, 1), (1, 2), (0, 1)],
        ]);
        let loc = minimal_simplex(&edge).unwrap();
        assert_eq!(loc.vertices, vec![2, 3]);
        assert_eq!(loc.label.values(), &[1, -2, -1]);
        assert_eq!(loc.barycentric.coords(), &[rat(1, 2), rat(1, 2)]);
        assert_eq!(distance_matrix(&loc.configuration), edge);

        let bad = from_rows(&[
            [(0, 1), (1, 1), (1, 1)],
            [(1, 1), (0, 1), (1, 1)],
            [(1, 1), (1, 1), (0, 1)],
        ]);
        assert_eq!(minimal_simplex(&bad), Err(Error::NotRealizable));
    }

    #[test]
    fn verify_examples() {
        assert!(verify_complex(&build_state_complex(3).unwrap()).is_ok());
        let broken = SimplicialComplex::from_simplices(
            3,
            &[
                vec![0],
                vec![1],
                vec![2],
                vec![0, 1],
                vec![1, 2],
                vec![0, 1, 2],
            ],
        )
        .unwrap();
        let report = verify_complex(&broken);
        assert_eq!(report.violations.len(), 1, "{:?}", report.violations);
        assert!(report.violations[0].contains("[0, 2]"));
        let report = verify_complex(&build_state_complex(5).unwrap());
        assert!(report.is_ok() && report.intersections_checked);
    }

    #[test]
    fn one_skeleton_is_complete() {
        for n in 2..=6 {
            let k = build_state_complex(n).unwrap();
            let nv = k.num_vertices();
            assert_eq!(k.count(1), nv * (nv - 1) / 2);
        }
    }
}
