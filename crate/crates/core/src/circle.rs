//! Exact geometry of the unit circle.
//!
//! A point is stored as an angle `r` in `[0, 2)` denoting `exp(i*pi*r)`, so
//! every distance, rotation and reflection is an exact rational operation.
//! Negating a point (`z -> -z`) adds 1 to its angle; the reflection
//! `z -> 1/z` negates the angle.
//!
//! Point indices in this module are 0-based.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{in_unit_interval, int, mod2, parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CirclePoint {
    #[serde(with = "crate::rational::serde_str")]
    angle: Rational,
}

impl CirclePoint {
    pub fn new(angle: Rational) -> Self {
        CirclePoint {
            angle: mod2(&angle),
        }
    }

    pub fn origin() -> Self {
        CirclePoint {
            angle: Rational::zero(),
        }
    }

    /// Angle in units of pi, always in `[0, 2)`.
    pub fn angle(&self) -> &Rational {
        &self.angle
    }

    pub fn antipode(&self) -> Self {
        CirclePoint::new(&self.angle + Rational::one())
    }

    /// `z -> 1/z`.
    pub fn reflect(&self) -> Self {
        CirclePoint::new(-&self.angle)
    }

    pub fn rotate(&self, by: &Rational) -> Self {
        CirclePoint::new(&self.angle + by)
    }
}

impl fmt::Display for CirclePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.angle)
    }
}

/// An ordered tuple of points, i.e. a point of the n-torus.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Configuration {
    points: Vec<CirclePoint>,
}

impl Configuration {
    pub fn new(points: Vec<CirclePoint>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidRange(
                "a configuration needs at least one point".into(),
            ));
        }
        Ok(Configuration { points })
    }

    /// Builds from raw angles (units of pi), reducing each modulo 2.
    pub fn from_angles<I: IntoIterator<Item = Rational>>(angles: I) -> Result<Self> {
        Self::new(angles.into_iter().map(CirclePoint::new).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[CirclePoint] {
        &self.points
    }

    pub fn angles(&self) -> Vec<Rational> {
        self.points.iter().map(|p| p.angle().clone()).collect()
    }

    pub fn is_normalized(&self) -> bool {
        self.points[0].angle().is_zero()
    }

    /// Componentwise reflection `rho`.
    pub fn reflect(&self) -> Self {
        Configuration {
            points: self.points.iter().map(CirclePoint::reflect).collect(),
        }
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.points.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl FromStr for Configuration {
    type Err = Error;

    /// One line of whitespace-separated rationals.
    fn from_str(s: &str) -> Result<Self> {
        let angles = s
            .split_whitespace()
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()?;
        Configuration::from_angles(angles)
    }
}

/// Symmetric matrix of geodesic distances in units of pi, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DistanceMatrix {
    n: usize,
    entries: Vec<Rational>,
}

impl DistanceMatrix {
    /// Validates symmetry, zero diagonal and entries in `[0, 1]`.
    pub fn new(n: usize, entries: Vec<Rational>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidMatrix("matrix must be at least 1x1".into()));
        }
        if entries.len() != n * n {
            return Err(Error::InvalidMatrix(format!(
                "expected {} entries, found {}",
                n * n,
                entries.len()
            )));
        }
        for i in 0..n {
            if !entries[i * n + i].is_zero() {
                return Err(Error::InvalidMatrix(format!(
                    "diagonal entry {i} is not zero"
                )));
            }
            for j in 0..n {
                let e = &entries[i * n + j];
                if !in_unit_interval(e) {
                    return Err(Error::InvalidMatrix(format!(
                        "entry ({i},{j}) = {e} outside [0,1]"
                    )));
                }
                if *e != entries[j * n + i] {
                    return Err(Error::InvalidMatrix(format!(
                        "entries ({i},{j}) and ({j},{i}) differ"
                    )));
                }
            }
        }
        Ok(DistanceMatrix { n, entries })
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidMatrix("rows must all have length n".into()));
        }
        Self::new(n, rows.into_iter().flatten().collect())
    }

    pub fn zero(n: usize) -> Self {
        DistanceMatrix {
            n,
            entries: vec![Rational::zero(); n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    /// Upper-triangle entries `(i < j)` in row order.
    pub fn upper_triangle(&self) -> Vec<&Rational> {
        let mut out = Vec::with_capacity(self.n * (self.n - 1) / 2);
        for i in 0..self.n {
            for j in i + 1..self.n {
                out.push(self.get(i, j));
            }
        }
        out
    }
}

impl fmt::Display for DistanceMatrix {
    /// The text format: `n` on the first line, then `n` rows.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.n)?;
        for row in self.entries.chunks(self.n) {
            let line: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for DistanceMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty input".into()))?;
        let n: usize = header
            .parse()
            .map_err(|_| Error::Parse(format!("bad size line {header:?}")))?;
        let mut entries = Vec::with_capacity(n * n);
        for row in 0..n {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("missing row {}", row + 1)))?;
            let values = line
                .split_whitespace()
                .map(parse_rational)
                .collect::<Result<Vec<_>>>()?;
            if values.len() != n {
                return Err(Error::Parse(format!(
                    "row {} has {} entries, expected {n}",
                    row + 1,
                    values.len()
                )));
            }
            entries.extend(values);
        }
        if lines.next().is_some() {
            return Err(Error::Parse("trailing data after matrix".into()));
        }
        DistanceMatrix::new(n, entries)
    }
}

/// An element of O(2): optional reflection `rho`, then a rotation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Isometry {
    #[serde(with = "crate::rational::serde_str")]
    rotation: Rational,
    reflect: bool,
}

impl Isometry {
    pub fn new(rotation: Rational, reflect: bool) -> Self {
        Isometry {
            rotation: mod2(&rotation),
            reflect,
        }
    }

    pub fn identity() -> Self {
        Self::new(Rational::zero(), false)
    }

    pub fn reflection() -> Self {
        Self::new(Rational::zero(), true)
    }

    pub fn rotation(&self) -> &Rational {
        &self.rotation
    }

    pub fn reflects(&self) -> bool {
        self.reflect
    }

    pub fn apply_point(&self, p: &CirclePoint) -> CirclePoint {
        let base = if self.reflect { p.reflect() } else { p.clone() };
        base.rotate(&self.rotation)
    }

    /// `self` after `first`.
    pub fn compose(&self, first: &Isometry) -> Isometry {
        let inner = if self.reflect {
            -&first.rotation
        } else {
            first.rotation.clone()
        };
        Isometry::new(&self.rotation + inner, self.reflect ^ first.reflect)
    }
}

/// Geodesic distance in units of pi, in `[0, 1]`.
pub fn geodesic_distance(p: &CirclePoint, q: &CirclePoint) -> Rational {
    let delta = mod2(&(p.angle() - q.angle()));
    let other = int(2) - &delta;
    if delta <= other {
        delta
    } else {
        other
    }
}

pub fn distance_matrix(x: &Configuration) -> DistanceMatrix {
    let n = x.len();
    let mut entries = vec![Rational::zero(); n * n];
    for i in 0..n {
        for j in i + 1..n {
            let d = geodesic_distance(&x.points[i], &x.points[j]);
            entries[j * n + i] = d.clone();
            entries[i * n + j] = d;
        }
    }
    DistanceMatrix { n, entries }
}

pub fn apply_isometry(tau: &Isometry, x: &Configuration) -> Configuration {
    Configuration {
        points: x.points.iter().map(|p| tau.apply_point(p)).collect(),
    }
}

/// Finds `tau` with `tau(x) = y`. Such a `tau` exists exactly when the
/// distance matrices agree, and it is then pinned down by where `x_1` goes
/// and whether orientation flips, so only two candidates need testing.
pub fn recover_isometry(x: &Configuration, y: &Configuration) -> Result<Isometry> {
    if x.len() != y.len() {
        return Err(Error::MatricesDiffer);
    }
    let (x1, y1) = (x.points[0].angle(), y.points[0].angle());
    let candidates = [Isometry::new(y1 - x1, false), Isometry::new(y1 + x1, true)];
    candidates
        .into_iter()
        .find(|tau| apply_isometry(tau, x) == *y)
        .ok_or(Error::MatricesDiffer)
}

/// Rotates so the first point sits at angle 0.
pub fn normalize(x: &Configuration) -> Configuration {
    let shift = -x.points[0].angle();
    Configuration {
        points: x.points.iter().map(|p| p.rotate(&shift)).collect(),
    }
}

/// `+1` when the angle lies in `[0, 1)`, `-1` on `[1, 2)`.
pub fn chirality(p: &CirclePoint) -> i8 {
    if *p.angle() < Rational::one() {
        1
    } else {
        -1
    }
}

/// Folds every point into the half-open semicircle starting at the first
/// point: points whose angle relative to `x_1` lies in `[1, 2)` are replaced
/// by their antipodes.
pub fn fold(x: &Configuration) -> Configuration {
    let base = x.points[0].angle();
    Configuration {
        points: x
            .points
            .iter()
            .map(|p| {
                let relative = CirclePoint::new(p.angle() - base);
                if chirality(&relative) < 0 {
                    p.antipode()
                } else {
                    p.clone()
                }
            })
            .collect(),
    }
}

/// Returns a normalized configuration realizing `m`. Of the two
/// reflection-related solutions, the one placing the first point not equal
/// or antipodal to `x_1` in the upper semicircle is returned.
pub fn realize_matrix(m: &DistanceMatrix) -> Result<Configuration> {
    let n = m.n();
    let one = Rational::one();
    let anchor = (1..n).find(|&i| {
        let d = m.get(0, i);
        !d.is_zero() && *d != one
    });
    let mut angles: Vec<Rational> = Vec::with_capacity(n);
    angles.push(Rational::zero());
    for i in 1..n {
        let d = m.get(0, i).clone();
        let angle = match anchor {
            Some(a) if a != i => {
                let plus = CirclePoint::new(d.clone());
                let minus = CirclePoint::new(-d);
                let target = CirclePoint::new(m.get(0, a).clone());
                if geodesic_distance(&plus, &target) == *m.get(i, a) {
                    plus.angle().clone()
                } else if geodesic_distance(&minus, &target) == *m.get(i, a) {
                    minus.angle().clone()
                } else {
                    return Err(Error::NotRealizable);
                }
            }
            _ => d,
        };
        angles.push(angle);
    }
    let x = Configuration::from_angles(angles)?;
    if distance_matrix(&x) != *m {
        return Err(Error::NotRealizable);
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn cfg(angles: &[(i64, i64)]) -> Configuration {
        Configuration::from_angles(angles.iter().map(|&(p, q)| rat(p, q))).unwrap()
    }

    fn matrix(rows: &[&[(i64, i64)]]) -> DistanceMatrix {
        DistanceMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&(p, q)| rat(p, q)).collect())
                .collect(),
        )
        .unwrap()
    }

    fn pt(p: i64, q: i64) -> CirclePoint {
        CirclePoint::new(rat(p, q))
    }

    #[test]
    fn geodesic_examples() {
        assert_eq!(geodesic_distance(&pt(0, 1), &pt(0, 1)), rat(0, 1));
        assert_eq!(geodesic_distance(&pt(0, 1), &pt(1, 2)), rat(1, 2));
        let d = geodesic_distance(&pt(1, 4), &pt(7, 4));
        assert_eq!(d, rat(1, 2));
        // float cross-check: arccos of the dot product
        let (a, b) = (0.25 * std::f64::consts::PI, 1.75 * std::f64::consts::PI);
        let dot = a.cos() * b.cos() + a.sin() * b.sin();
        assert!((dot.acos() / std::f64::consts::PI - 0.5).abs() < 1e-12);
    }

    #[test]
    fn distance_matrix_examples() {
        let m = distance_matrix(&cfg(&[(0, 1), (1, 1), (1, 1)]));
        assert_eq!(
            m,
            matrix(&[
                &[(0, 1), (1, 1), (1, 1)],
                &[(1, 1), (0, 1), (0, 1)],
                &[(1, 1), (0, 1), (0, 1)]
            ])
        );
        assert_eq!(distance_matrix(&cfg(&[(0, 1)])), DistanceMatrix::zero(1));
        let m = distance_matrix(&cfg(&[(0, 1), (4, 3), (7, 12)]));
        assert_eq!(m, f1_matrix());
    }

    fn f1_matrix() -> DistanceMatrix {
        matrix(&[
            &[(0, 1), (2, 3), (7, 12)],
            &[(2, 3), (0, 1), (3, 4)],
            &[(7, 12), (3, 4), (0, 1)],
        ])
    }

    #[test]
    fn isometry_examples() {
        let x = cfg(&[(0, 1), (1, 2)]);
        assert_eq!(
            apply_isometry(&Isometry::new(rat(1, 2), false), &x),
            cfg(&[(1, 2), (1, 1)])
        );
        assert_eq!(
            apply_isometry(&Isometry::reflection(), &x),
            cfg(&[(0, 1), (3, 2)])
        );
        let x = cfg(&[(0, 1), (4, 3), (7, 12)]);
        let y = apply_isometry(&Isometry::new(rat(1, 3), true), &x);
        assert_eq!(y, cfg(&[(1, 3), (1, 1), (7, 4)]));
        assert_eq!(distance_matrix(&y), distance_matrix(&x));
    }

    #[test]
    fn compose_matches_sequential_application() {
        let x = cfg(&[(0, 1), (4, 3), (7, 12), (5, 7)]);
        let a = Isometry::new(rat(1, 3), true);
        let b = Isometry::new(rat(5, 4), true);
        let c = Isometry::new(rat(2, 9), false);
        for (outer, inner) in [(&a, &b), (&b, &c), (&c, &a), (&a, &a)] {
            assert_eq!(
                apply_isometry(&outer.compose(inner), &x),
                apply_isometry(outer, &apply_isometry(inner, &x))
            );
        }
    }

    #[test]
    fn recover_examples() {
        let x = cfg(&[(0, 1), (1, 2)]);
        assert_eq!(
            recover_isometry(&x, &cfg(&[(1, 2), (1, 1)])).unwrap(),
            Isometry::new(rat(1, 2), false)
        );
        assert_eq!(
            recover_isometry(&x, &cfg(&[(0, 1), (3, 2)])).unwrap(),
            Isometry::reflection()
        );
        let x = cfg(&[(0, 1), (4, 3), (7, 12)]);
        let tau = Isometry::new(rat(3, 5), true);
        let y = apply_isometry(&tau, &x);
        let found = recover_isometry(&x, &y).unwrap();
        assert_eq!(apply_isometry(&found, &x), y);
        assert_eq!(
            recover_isometry(&x, &cfg(&[(0, 1), (1, 3), (1, 2)])),
            Err(Error::MatricesDiffer)
        );
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize(&cfg(&[(1, 3), (5, 3)])), cfg(&[(0, 1), (4, 3)]));
        assert_eq!(normalize(&cfg(&[(0, 1), (1, 2)])), cfg(&[(0, 1), (1, 2)]));
        assert_eq!(
            normalize(&cfg(&[(7, 4), (1, 4), (1, 1)])),
            cfg(&[(0, 1), (1, 2), (5, 4)])
        );
    }

    #[test]
    fn chirality_examples() {
        assert_eq!(chirality(&pt(0, 1)), 1);
        assert_eq!(chirality(&pt(1, 1)), -1);
        assert_eq!(chirality(&pt(1, 2)), 1);
        assert_eq!(chirality(&pt(3, 2)), -1);
    }

    #[test]
    fn fold_examples() {
        assert_eq!(
            fold(&cfg(&[(0, 1), (1, 1), (1, 1)])),
            cfg(&[(0, 1), (0, 1), (0, 1)])
        );
        assert_eq!(
            fold(&cfg(&[(0, 1), (4, 3), (7, 12)])),
            cfg(&[(0, 1), (1, 3), (7, 12)])
        );
        assert_eq!(
            fold(&cfg(&[(1, 2), (3, 2), (1, 1)])),
            cfg(&[(1, 2), (1, 2), (1, 1)])
        );
    }

    #[test]
    fn realize_examples() {
        let m1 = matrix(&[
            &[(0, 1), (1, 1), (1, 1)],
            &[(1, 1), (0, 1), (0, 1)],
            &[(1, 1), (0, 1), (0, 1)],
        ]);
        assert_eq!(realize_matrix(&m1).unwrap(), cfg(&[(0, 1), (1, 1), (1, 1)]));
        let x = realize_matrix(&f1_matrix()).unwrap();
        assert!(x == cfg(&[(0, 1), (4, 3), (7, 12)]) || x == cfg(&[(0, 1), (2, 3), (17, 12)]));
        assert_eq!(x, cfg(&[(0, 1), (2, 3), (17, 12)]));
        let bad = matrix(&[
            &[(0, 1), (1, 1), (1, 1)],
            &[(1, 1), (0, 1), (1, 1)],
            &[(1, 1), (1, 1), (0, 1)],
        ]);
        assert_eq!(realize_matrix(&bad), Err(Error::NotRealizable));
    }

    #[test]
    fn realize_rejects_triangle_violation() {
        // d12 = d13 = 1/4 forces d23 in {0, 1/2}
        let m = matrix(&[
            &[(0, 1), (1, 4), (1, 4)],
            &[(1, 4), (0, 1), (1, 3)],
            &[(1, 4), (1, 3), (0, 1)],
        ]);
        assert_eq!(realize_matrix(&m), Err(Error::NotRealizable));
    }

    #[test]
    fn matrix_validation() {
        assert!(DistanceMatrix::new(2, vec![rat(0, 1), rat(1, 2), rat(1, 3), rat(0, 1)]).is_err());
        assert!(DistanceMatrix::new(2, vec![rat(1, 2), rat(1, 2), rat(1, 2), rat(0, 1)]).is_err());
        assert!(DistanceMatrix::new(2, vec![rat(0, 1), rat(3, 2), rat(3, 2), rat(0, 1)]).is_err());
        assert!(DistanceMatrix::new(0, vec![]).is_err());
    }

    #[test]
    fn text_format_round_trip() {
        let m = f1_matrix();
        let text = m.to_string();
        assert_eq!(text, "3\n0 2/3 7/12\n2/3 0 3/4\n7/12 3/4 0\n");
        assert_eq!(text.parse::<DistanceMatrix>().unwrap(), m);
        assert!("2\n0 1\n".parse::<DistanceMatrix>().is_err());
        assert!("2\n0 1\n1 0 0\n".parse::<DistanceMatrix>().is_err());
        let x: Configuration = "0 4/3 7/12".parse().unwrap();
        assert_eq!(x.to_string(), "0 4/3 7/12");
    }
}
