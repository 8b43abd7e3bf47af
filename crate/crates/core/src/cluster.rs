//! Cluster structures and the parameterizations built from them.
//!
//! A cluster structure `c` on `n` points with `m` degrees of freedom is a
//! list of nonzero integers with `c[0] = +1` and `|c|` onto `1..=m`. Its
//! magnitude says which of the `m` folded cluster positions a point occupies
//! and its sign whether the point sits there or at the antipode.
//!
//! Cluster numbers, vertex numbers `k` and index sets `I` are 1-based
//! because they are the values stored in `c`. Point indices are 0-based.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::circle::{chirality, distance_matrix, fold, CirclePoint, Configuration, DistanceMatrix};
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i32>", into = "Vec<i32>")]
pub struct ClusterStructure {
    // field order makes the derived ordering lexicographic in the values
    values: Vec<i32>,
    m: usize,
}

impl ClusterStructure {
    /// Validates against an explicit number of degrees of freedom.
    pub fn new(m: usize, values: Vec<i32>) -> Result<Self> {
        let c = ClusterStructure { m, values };
        c.validate()?;
        Ok(c)
    }

    /// Infers `m` as the largest magnitude.
    pub fn from_values(values: Vec<i32>) -> Result<Self> {
        let m = values
            .iter()
            .map(|v| v.unsigned_abs() as usize)
            .max()
            .unwrap_or(0);
        Self::new(m, values)
    }

    /// Constructor for values already known to be valid.
    pub(crate) fn from_trusted(m: usize, values: Vec<i32>) -> Self {
        debug_assert!(ClusterStructure {
            m,
            values: values.clone()
        }
        .validate()
        .is_ok());
        ClusterStructure { m, values }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |why: String| Err(Error::InvalidClusterStructure(why));
        if self.values.is_empty() {
            return bad("no points".into());
        }
        if self.m == 0 || self.m > self.values.len() {
            return bad(format!(
                "m = {} must lie in 1..={}",
                self.m,
                self.values.len()
            ));
        }
        if self.values[0] != 1 {
            return bad(format!("c(1) = {} but must be +1", self.values[0]));
        }
        let mut hit = vec![false; self.m];
        for (i, &v) in self.values.iter().enumerate() {
            let mag = v.unsigned_abs() as usize;
            if v == 0 || mag > self.m {
                return bad(format!("c({}) = {v} is outside ±1..±{}", i + 1, self.m));
            }
            hit[mag - 1] = true;
        }
        if let Some(missing) = hit.iter().position(|h| !h) {
            return bad(format!(
                "|c| is not onto: cluster {} is never used",
                missing + 1
            ));
        }
        Ok(())
    }

    /// Number of points.
    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// Degrees of freedom.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn values(&self) -> &[i32] {
        &self.values
    }

    fn magnitude(&self, i: usize) -> usize {
        self.values[i].unsigned_abs() as usize
    }

    fn sign(&self, i: usize) -> i32 {
        self.values[i].signum()
    }
}

impl TryFrom<Vec<i32>> for ClusterStructure {
    type Error = Error;

    fn try_from(values: Vec<i32>) -> Result<Self> {
        ClusterStructure::from_values(values)
    }
}

impl From<ClusterStructure> for Vec<i32> {
    fn from(c: ClusterStructure) -> Self {
        c.values
    }
}

impl fmt::Display for ClusterStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v:+}")?;
        }
        f.write_str(")")
    }
}

/// A point of the standard simplex: nonnegative coordinates summing to 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawBarycentric", into = "RawBarycentric")]
pub struct BarycentricPoint {
    coords: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct RawBarycentric(#[serde(with = "crate::rational::serde_str::vec")] Vec<Rational>);

impl TryFrom<RawBarycentric> for BarycentricPoint {
    type Error = Error;
    fn try_from(raw: RawBarycentric) -> Result<Self> {
        BarycentricPoint::new(raw.0)
    }
}

impl From<BarycentricPoint> for RawBarycentric {
    fn from(t: BarycentricPoint) -> Self {
        RawBarycentric(t.coords)
    }
}

impl BarycentricPoint {
    pub fn new(coords: Vec<Rational>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidBarycentric("no coordinates".into()));
        }
        if let Some(bad) = coords
            .iter()
            .find(|t| t.is_negative() || **t > Rational::one())
        {
            return Err(Error::InvalidBarycentric(format!(
                "coordinate {bad} outside [0,1]"
            )));
        }
        let sum: Rational = coords.iter().sum();
        if !sum.is_one() {
            return Err(Error::InvalidBarycentric(format!(
                "coordinates sum to {sum}"
            )));
        }
        Ok(BarycentricPoint { coords })
    }

    /// The `k`-th corner (1-based) of the simplex with `m` coordinates.
    pub fn corner(m: usize, k: usize) -> Result<Self> {
        if k == 0 || k > m {
            return Err(Error::IndexOutOfRange { index: k, max: m });
        }
        let mut coords = vec![Rational::zero(); m];
        coords[k - 1] = Rational::one();
        Ok(BarycentricPoint { coords })
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_interior(&self) -> bool {
        self.coords.iter().all(|t| t.is_positive())
    }

    /// 1-based indices of the positive coordinates.
    pub fn support(&self) -> Vec<usize> {
        (1..=self.coords.len())
            .filter(|&k| self.coords[k - 1].is_positive())
            .collect()
    }
}

impl fmt::Display for BarycentricPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|t| t.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// `S_j(t) = t_1 + ... + t_{j-1}`, for `1 <= j <= m + 1`.
pub fn prefix_sum(t: &BarycentricPoint, j: usize) -> Result<Rational> {
    let m = t.dim();
    if j == 0 || j > m + 1 {
        return Err(Error::IndexOutOfRange {
            index: j,
            max: m + 1,
        });
    }
    Ok(t.coords[..j - 1].iter().sum())
}

fn prefix_sums(t: &BarycentricPoint) -> Vec<Rational> {
    let mut sums = Vec::with_capacity(t.dim() + 1);
    let mut acc = Rational::zero();
    sums.push(acc.clone());
    for c in &t.coords {
        acc += c;
        sums.push(acc.clone());
    }
    sums
}

fn check_dims(c: &ClusterStructure, t: &BarycentricPoint) -> Result<()> {
    if c.m != t.dim() {
        return Err(Error::DimensionMismatch {
            expected: c.m,
            found: t.dim(),
        });
    }
    Ok(())
}

/// The configuration `Phi_c(t)`: point `i` at angle `S_{|c(i)|}(t)`, moved
/// to the antipode when `c(i) < 0`.
pub fn phi(c: &ClusterStructure, t: &BarycentricPoint) -> Result<Configuration> {
    check_dims(c, t)?;
    let sums = prefix_sums(t);
    let points = (0..c.n())
        .map(|i| {
            let p = CirclePoint::new(sums[c.magnitude(i) - 1].clone());
            if c.sign(i) < 0 {
                p.antipode()
            } else {
                p
            }
        })
        .collect();
    Configuration::new(points)
}

/// The cluster structure induced by a normalized configuration, together
/// with the (strictly positive) barycentric point `t` with `phi(c, t) = x`.
pub fn induced_cluster(x: &Configuration) -> Result<(ClusterStructure, BarycentricPoint)> {
    if !x.is_normalized() {
        return Err(Error::NotNormalized);
    }
    let folded = fold(x);
    let mut distinct: Vec<&Rational> = folded.points().iter().map(CirclePoint::angle).collect();
    distinct.sort();
    distinct.dedup();
    let m = distinct.len();
    let values = x
        .points()
        .iter()
        .zip(folded.points())
        .map(|(p, f)| {
            let j = distinct
                .binary_search(&f.angle())
                .expect("folded value present")
                + 1;
            chirality(p) as i32 * j as i32
        })
        .collect();
    let mut coords: Vec<Rational> = distinct.windows(2).map(|w| w[1] - w[0]).collect();
    coords.push(Rational::one() - distinct[m - 1]);
    Ok((
        ClusterStructure::from_trusted(m, values),
        BarycentricPoint::new(coords)?,
    ))
}

/// Sign pattern of `v^(k)(c)`: entry `i` is `sign(c(i))` when
/// `|c(i)| <= k` and `-sign(c(i))` otherwise.
pub fn vertex_signs(c: &ClusterStructure, k: usize) -> Result<Vec<i8>> {
    if k == 0 || k > c.m {
        return Err(Error::IndexOutOfRange { index: k, max: c.m });
    }
    Ok((0..c.n())
        .map(|i| {
            let s = c.sign(i) as i8;
            if c.magnitude(i) <= k {
                s
            } else {
                -s
            }
        })
        .collect())
}

/// Converts a sign pattern to a configuration with angles in `{0, 1}`.
pub fn signs_to_configuration(signs: &[i8]) -> Configuration {
    Configuration::from_angles(signs.iter().map(|&s| {
        if s > 0 {
            Rational::zero()
        } else {
            Rational::one()
        }
    }))
    .expect("sign pattern is nonempty")
}

/// The `k`-th vertex `v^(k)(c) = phi(c, t^(k))`.
pub fn vertex(c: &ClusterStructure, k: usize) -> Result<Configuration> {
    Ok(signs_to_configuration(&vertex_signs(c, k)?))
}

/// `[v^(1)(c), ..., v^(m)(c)]` as sign patterns.
pub fn vertex_set(c: &ClusterStructure) -> Vec<Vec<i8>> {
    (1..=c.m)
        .map(|k| vertex_signs(c, k).expect("k within 1..=m"))
        .collect()
}

/// The restriction `c_I` to a strictly increasing index set `I`.
pub fn restrict(c: &ClusterStructure, index_set: &[usize]) -> Result<ClusterStructure> {
    if index_set.is_empty() {
        return Err(Error::EmptyIndexSet);
    }
    if let Some(&bad) = index_set.iter().find(|&&k| k == 0 || k > c.m) {
        return Err(Error::IndexOutOfRange {
            index: bad,
            max: c.m,
        });
    }
    if index_set.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidRange(
            "index set must be strictly increasing".into(),
        ));
    }
    let last = *index_set.last().expect("nonempty");
    let values = (0..c.n())
        .map(|i| {
            let mag = c.magnitude(i);
            let sign = c.sign(i);
            if mag > last {
                -sign
            } else {
                // first j with mag <= k_j; k_{j-1} < mag follows
                let j = index_set.partition_point(|&k| k < mag) + 1;
                sign * j as i32
            }
        })
        .collect();
    Ok(ClusterStructure::from_trusted(index_set.len(), values))
}

/// The transpose `rho . c`, the other structure sharing `V(c)`.
pub fn transpose(c: &ClusterStructure) -> ClusterStructure {
    let m = c.m as i32;
    let values = c
        .values
        .iter()
        .map(|&v| {
            if v.abs() == 1 {
                v
            } else {
                -v.signum() * (m + 2 - v.abs())
            }
        })
        .collect();
    ClusterStructure::from_trusted(c.m, values)
}

pub fn reverse_barycentric(t: &BarycentricPoint) -> BarycentricPoint {
    BarycentricPoint {
        coords: t.coords.iter().rev().cloned().collect(),
    }
}

/// Distance between points `i` and `j` of `phi(c, t)` read off from the
/// prefix sums, without building the configuration.
pub fn predicted_distance(
    c: &ClusterStructure,
    t: &BarycentricPoint,
    i: usize,
    j: usize,
) -> Result<Rational> {
    check_dims(c, t)?;
    for idx in [i, j] {
        if idx >= c.n() {
            return Err(Error::IndexOutOfRange {
                index: idx,
                max: c.n() - 1,
            });
        }
    }
    let gap = (prefix_sum(t, c.magnitude(j))? - prefix_sum(t, c.magnitude(i))?).abs();
    Ok(if c.sign(i) == c.sign(j) {
        gap
    } else {
        Rational::one() - gap
    })
}

/// `[(t_k, D(v^(k)(c)))]`; the weighted sum is `D(phi(c, t))`.
pub fn convex_decomposition(
    c: &ClusterStructure,
    t: &BarycentricPoint,
) -> Result<Vec<(Rational, DistanceMatrix)>> {
    check_dims(c, t)?;
    Ok((1..=c.m)
        .map(|k| {
            let v = vertex(c, k).expect("k within 1..=m");
            (t.coords[k - 1].clone(), distance_matrix(&v))
        })
        .collect())
}

/// `sum_k w_k * M_k`, entrywise and exact.
pub fn weighted_sum(terms: &[(Rational, DistanceMatrix)]) -> Result<DistanceMatrix> {
    let n = terms
        .first()
        .map(|(_, m)| m.n())
        .ok_or_else(|| Error::InvalidRange("empty combination".into()))?;
    let mut acc = vec![Rational::zero(); n * n];
    for (w, m) in terms {
        if m.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: m.n(),
            });
        }
        for (a, e) in acc.iter_mut().zip(m.entries()) {
            if !e.is_zero() {
                *a += w * e;
            }
        }
    }
    DistanceMatrix::new(n, acc)
}
