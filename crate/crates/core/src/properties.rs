//! A seeded, reproducible suite of identities relating configurations,
//! cluster structures and distance matrices.
//!
//! Random data is exact: angles and barycentric weights are rationals whose
//! denominators are drawn up to a configurable bound. Sample `i` for size
//! `n` uses its own ChaCha stream, so results do not depend on the
//! execution strategy.

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circle::{
    apply_isometry, distance_matrix, geodesic_distance, normalize, realize_matrix,
    recover_isometry, Configuration, DistanceMatrix, Isometry,
};
use crate::cluster::{
    convex_decomposition, induced_cluster, phi, predicted_distance, restrict, reverse_barycentric,
    signs_to_configuration, vertex_set, weighted_sum, BarycentricPoint, ClusterStructure,
};
use crate::elliptope::{elliptope_membership, PSD_TOL};
use crate::error::Result;
use crate::exec::Execution;
use crate::linalg;
use crate::rational::Rational;
use crate::state_complex::{build_state_complex_with, minimal_simplex};

/// Swappable operations, so that the suite can be shown to catch a
/// deliberately broken implementation.
#[derive(Clone, Copy)]
pub struct Operations {
    pub transpose: fn(&ClusterStructure) -> ClusterStructure,
}

impl Default for Operations {
    fn default() -> Self {
        Operations {
            transpose: crate::cluster::transpose,
        }
    }
}

impl Operations {
    /// A transpose that forgets to flip signs.
    pub fn with_sign_flipped_transpose() -> Self {
        fn broken(c: &ClusterStructure) -> ClusterStructure {
            let m = c.m() as i32;
            let values = c
                .values()
                .iter()
                .map(|&v| {
                    if v.abs() == 1 {
                        v
                    } else {
                        v.signum() * (m + 2 - v.abs())
                    }
                })
                .collect();
            ClusterStructure::from_trusted(c.m(), values)
        }
        Operations { transpose: broken }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub sizes: Vec<usize>,
    pub samples: usize,
    pub seed: u64,
    /// Largest denominator of random angles and weights.
    pub max_denominator: u64,
    /// Random isometries applied per sampled configuration.
    pub isometries: usize,
    pub execution: Execution,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            sizes: (2..=7).collect(),
            samples: 1000,
            seed: 7,
            max_denominator: 1000,
            isometries: 100,
            execution: Execution::default(),
        }
    }
}

/// The identities checked on every sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    /// `D(phi(c, t)) = Σ t_k D(v^(k)(c))`.
    ConvexDecomposition,
    /// `induced_cluster(phi(c, t)) = (c, t)` for interior `t`.
    RoundTrip,
    /// Boundary `t` collapses onto the restriction to its support.
    BoundaryCollapse,
    /// Transpose with reversed weights realizes the reflection.
    Equivariance,
    /// Distances predicted from prefix sums match the configuration.
    PredictedDistance,
    /// Symmetry, zero diagonal and triangle inequality.
    MetricAxioms,
    /// Distance matrices are invariant under isometries.
    IsometryInvariance,
    /// The isometry between matched configurations is recovered.
    IsometryRecovery,
    /// Realizing a distance matrix returns `x` or its reflection.
    Realization,
    /// Cosines of distances are PSD of rank at most 2.
    Elliptope,
}

impl Property {
    pub const ALL: [Property; 10] = [
        Property::ConvexDecomposition,
        Property::RoundTrip,
        Property::BoundaryCollapse,
        Property::Equivariance,
        Property::PredictedDistance,
        Property::MetricAxioms,
        Property::IsometryInvariance,
        Property::IsometryRecovery,
        Property::Realization,
        Property::Elliptope,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::ConvexDecomposition => "convex-decomposition",
            Property::RoundTrip => "round-trip",
            Property::BoundaryCollapse => "boundary-collapse",
            Property::Equivariance => "equivariance",
            Property::PredictedDistance => "predicted-distance",
            Property::MetricAxioms => "metric-axioms",
            Property::IsometryInvariance => "isometry-invariance",
            Property::IsometryRecovery => "isometry-recovery",
            Property::Realization => "realization",
            Property::Elliptope => "elliptope",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyOutcome {
    pub property: Property,
    pub n: usize,
    pub checked: usize,
    pub failures: usize,
    /// The first failing sample, described well enough to reproduce.
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub outcomes: Vec<PropertyOutcome>,
    pub passed: bool,
}

impl SuiteReport {
    pub fn failures(&self) -> usize {
        self.outcomes.iter().map(|o| o.failures).sum()
    }

    /// Outcomes of one property summed over sizes.
    pub fn total(&self, p: Property) -> (usize, usize) {
        self.outcomes
            .iter()
            .filter(|o| o.property == p)
            .fold((0, 0), |(c, f), o| (c + o.checked, f + o.failures))
    }
}

/// The generator for sample `index` of size `n`.
pub fn sample_rng(seed: u64, n: usize, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((n as u64) << 40 | index as u64);
    rng
}

/// `n` angles sharing one random denominator `q <= max_den`, with the
/// first point at 0.
pub fn random_configuration<R: Rng>(rng: &mut R, n: usize, max_den: u64) -> Configuration {
    let q = rng.random_range(1..=max_den.max(1)) as i64;
    let angles = (0..n).map(|i| {
        if i == 0 {
            Rational::zero()
        } else {
            Rational::new(rng.random_range(0..2 * q).into(), q.into())
        }
    });
    Configuration::from_angles(angles).expect("n >= 1")
}

pub fn random_cluster_structure<R: Rng>(rng: &mut R, n: usize, m: usize) -> ClusterStructure {
    assert!(1 <= m && m <= n);
    let mut positions: Vec<usize> = (1..n).collect();
    positions.shuffle(rng);
    let mut mags = vec![1usize; n];
    for (slot, &pos) in positions.iter().enumerate() {
        mags[pos] = if slot < m - 1 {
            slot + 2
        } else {
            rng.random_range(1..=m)
        };
    }
    let values = mags
        .iter()
        .enumerate()
        .map(|(i, &g)| {
            if i > 0 && rng.random_bool(0.5) {
                -(g as i32)
            } else {
                g as i32
            }
        })
        .collect();
    ClusterStructure::from_trusted(m, values)
}

/// Weights on `support` (1-based) with common random denominator; every
/// supported coordinate is positive.
pub fn random_barycentric<R: Rng>(
    rng: &mut R,
    m: usize,
    support: &[usize],
    max_den: u64,
) -> BarycentricPoint {
    let cap = max_den.max(1) as i64;
    let weights: Vec<i64> = (1..=m)
        .map(|k| {
            if support.contains(&k) {
                rng.random_range(1..=cap)
            } else {
                0
            }
        })
        .collect();
    let total: i64 = weights.iter().sum();
    BarycentricPoint::new(
        weights
            .iter()
            .map(|&w| Rational::new(w.into(), total.into()))
            .collect(),
    )
    .expect("weights sum to one")
}

pub fn random_isometry<R: Rng>(rng: &mut R, max_den: u64) -> Isometry {
    let q = rng.random_range(1..=max_den.max(1)) as i64;
    Isometry::new(
        Rational::new(rng.random_range(0..2 * q).into(), q.into()),
        rng.random_bool(0.5),
    )
}

/// Per-sample results: `Some(witness)` for each failing property.
type SampleResult = Vec<(Property, Option<String>)>;

fn check(p: Property, ok: bool, witness: impl FnOnce() -> String) -> (Property, Option<String>) {
    (p, (!ok).then(witness))
}

fn run_sample(n: usize, index: usize, cfg: &SuiteConfig, ops: &Operations) -> SampleResult {
    let mut rng = sample_rng(cfg.seed, n, index);
    let den = cfg.max_denominator;
    let mut out = Vec::with_capacity(Property::ALL.len());

    // cluster-structure identities
    let m = rng.random_range(1..=n);
    let c = random_cluster_structure(&mut rng, n, m);
    let all: Vec<usize> = (1..=m).collect();
    let t = random_barycentric(&mut rng, m, &all, den);
    let x = phi(&c, &t).expect("dimensions match");
    let dx = distance_matrix(&x);
    let ct = || format!("c = {c}, t = {t}");

    let convex = convex_decomposition(&c, &t).and_then(|terms| weighted_sum(&terms));
    out.push(check(
        Property::ConvexDecomposition,
        convex.as_ref() == Ok(&dx),
        ct,
    ));

    let induced = induced_cluster(&x);
    out.push(check(
        Property::RoundTrip,
        induced.as_ref().is_ok_and(|(c2, t2)| c2 == &c && t2 == &t),
        ct,
    ));

    out.push(check(
        Property::BoundaryCollapse,
        boundary_collapse(&mut rng, &c, den),
        ct,
    ));

    let tc = (ops.transpose)(&c);
    let equivariant = phi(&tc, &reverse_barycentric(&t)).is_ok_and(|y| y == x.reflect())
        && (ops.transpose)(&tc) == c
        && vertex_set(&tc).into_iter().rev().eq(vertex_set(&c))
        && induced_cluster(&x.reflect()).is_ok_and(|(cr, _)| cr == tc);
    out.push(check(Property::Equivariance, equivariant, ct));

    let predicted = (0..n)
        .all(|i| (0..n).all(|j| predicted_distance(&c, &t, i, j).as_ref() == Ok(dx.get(i, j))));
    out.push(check(Property::PredictedDistance, predicted, ct));

    // configuration identities
    let y = random_configuration(&mut rng, n, den);
    let dy = distance_matrix(&y);
    let cfg_witness = || format!("x = {y}");
    let metric = (0..n).all(|i| {
        dy.get(i, i).is_zero()
            && (0..n).all(|j| {
                dy.get(i, j) == dy.get(j, i)
                    && (0..n).all(|k| dy.get(i, k) <= &(dy.get(i, j) + dy.get(j, k)))
            })
    }) && (0..n).all(|i| {
        (0..n).all(|j| &geodesic_distance(&y.points()[i], &y.points()[j]) == dy.get(i, j))
    });
    out.push(check(Property::MetricAxioms, metric, cfg_witness));

    let mut invariant = true;
    let mut recovered = true;
    let mut iso_witness = None;
    for _ in 0..cfg.isometries {
        let tau = random_isometry(&mut rng, den);
        let z = apply_isometry(&tau, &y);
        if distance_matrix(&z) != dy {
            invariant = false;
            iso_witness.get_or_insert_with(|| format!("x = {y}, tau = {tau:?}"));
        }
        if !recover_isometry(&y, &z).is_ok_and(|s| apply_isometry(&s, &y) == z) {
            recovered = false;
            iso_witness.get_or_insert_with(|| format!("x = {y}, tau = {tau:?}"));
        }
    }
    let iso_witness = iso_witness.unwrap_or_default();
    out.push(check(Property::IsometryInvariance, invariant, || {
        iso_witness.clone()
    }));
    out.push(check(Property::IsometryRecovery, recovered, || {
        iso_witness.clone()
    }));

    let yn = normalize(&y);
    let realized = realize_matrix(&dy).is_ok_and(|r| r == yn || r == yn.reflect());
    out.push(check(Property::Realization, realized, cfg_witness));

    let member = elliptope_membership(&dy, PSD_TOL);
    out.push(check(
        Property::Elliptope,
        member.psd && member.rank <= 2,
        || {
            format!(
                "x = {y}, min_eig = {}, rank = {}",
                member.min_eig, member.rank
            )
        },
    ));
    out
}

/// Picks a random proper support `I` and checks both halves of the
/// collapse: the induced structure is `c_I` with the compressed weights,
/// and `phi(c_I, s) = phi(c, t)`.
fn boundary_collapse<R: Rng>(rng: &mut R, c: &ClusterStructure, den: u64) -> bool {
    let m = c.m();
    if m < 2 {
        return true;
    }
    let size = rng.random_range(1..m);
    let mut support: Vec<usize> = (1..=m).collect();
    support.shuffle(rng);
    support.truncate(size);
    support.sort_unstable();
    let t = random_barycentric(rng, m, &support, den);
    let Ok(x) = phi(c, &t) else { return false };
    let Ok(ci) = restrict(c, &support) else {
        return false;
    };
    let s = BarycentricPoint::new(support.iter().map(|&k| t.coords()[k - 1].clone()).collect())
        .expect("support weights sum to one");
    induced_cluster(&x).is_ok_and(|(c2, t2)| c2 == ci && t2 == s)
        && phi(&ci, &s).is_ok_and(|y| y == x)
}

pub fn run_property_suite(cfg: &SuiteConfig) -> SuiteReport {
    run_property_suite_with(cfg, &Operations::default())
}

pub fn run_property_suite_with(cfg: &SuiteConfig, ops: &Operations) -> SuiteReport {
    let mut outcomes = Vec::new();
    for &n in &cfg.sizes {
        let results = cfg
            .execution
            .map_range(cfg.samples, |i| run_sample(n, i, cfg, ops));
        for (slot, &p) in Property::ALL.iter().enumerate() {
            let mut outcome = PropertyOutcome {
                property: p,
                n,
                checked: results.len(),
                failures: 0,
                witness: None,
            };
            for (i, r) in results.iter().enumerate() {
                if let Some(w) = &r[slot].1 {
                    outcome.failures += 1;
                    outcome
                        .witness
                        .get_or_insert_with(|| format!("sample {i}: {w}"));
                }
            }
            outcomes.push(outcome);
        }
    }
    let passed = outcomes.iter().all(|o| o.failures == 0);
    SuiteReport {
        config: cfg.clone(),
        outcomes,
        passed,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalityOutcome {
    pub n: usize,
    pub samples: usize,
    /// Simplices whose closed hull contained a sample, summed over samples.
    pub containing_simplices: usize,
    pub failures: usize,
    pub witness: Option<String>,
}

/// For random matrices of `K_n`, checks that the located simplex carries
/// the matrix with positive weights and is a face of every simplex of
/// `St_n` whose closed hull contains it. Hull membership is decided by an
/// exact solve against the simplex's vertex matrices.
pub fn check_minimal_simplex(
    n: usize,
    samples: usize,
    seed: u64,
    max_den: u64,
    exec: Execution,
) -> Result<MinimalityOutcome> {
    let (k, _) = build_state_complex_with(n, exec)?;
    let upper =
        |d: &DistanceMatrix| -> Vec<Rational> { d.upper_triangle().into_iter().cloned().collect() };
    let vertex_vec: Vec<Vec<Rational>> = (0..k.num_vertices())
        .map(|v| {
            let mut col = upper(&distance_matrix(&signs_to_configuration(
                &k.vertex(v).signs(),
            )));
            col.push(Rational::one());
            col
        })
        .collect();
    let simplices: Vec<Vec<usize>> = (0..n)
        .flat_map(|d| k.simplices(d).collect::<Vec<_>>())
        .collect();
    let degenerate: Vec<&Vec<usize>> = simplices
        .iter()
        .filter(|s| {
            let cols: Vec<Vec<Rational>> = s.iter().map(|&v| vertex_vec[v].clone()).collect();
            linalg::rank(&cols) != s.len()
        })
        .collect();
    if let Some(s) = degenerate.first() {
        return Ok(MinimalityOutcome {
            n,
            samples: 0,
            containing_simplices: 0,
            failures: degenerate.len(),
            witness: Some(format!("vertex matrices of {s:?} are affinely dependent")),
        });
    }

    let results: Vec<(usize, Option<String>)> = exec.map_range(samples, |i| {
        let mut rng = sample_rng(seed, n, i);
        let x = random_configuration(&mut rng, n, max_den);
        let d = distance_matrix(&x);
        let loc = match minimal_simplex(&d) {
            Ok(l) => l,
            Err(e) => return (0, Some(format!("x = {x}: {e}"))),
        };
        let mut rhs = upper(&d);
        rhs.push(Rational::one());
        let weights = |s: &[usize]| -> Option<Vec<Rational>> {
            let cols: Vec<Vec<Rational>> = s.iter().map(|&v| vertex_vec[v].clone()).collect();
            linalg::solve(&cols, &rhs)
        };
        let positive =
            weights(&loc.vertices).is_some_and(|w| w.iter().all(|v| v > &Rational::zero()));
        if !positive {
            return (
                0,
                Some(format!(
                    "x = {x}: located simplex {:?} does not carry the matrix",
                    loc.vertices
                )),
            );
        }
        let mut containing = 0;
        for s in &simplices {
            if weights(s).is_some_and(|w| w.iter().all(|v| v >= &Rational::zero())) {
                containing += 1;
                if !loc.vertices.iter().all(|v| s.contains(v)) {
                    return (
                        containing,
                        Some(format!(
                            "x = {x}: {:?} is not a face of {s:?}",
                            loc.vertices
                        )),
                    );
                }
            }
        }
        (containing, None)
    });
    let failures = results.iter().filter(|r| r.1.is_some()).count();
    Ok(MinimalityOutcome {
        n,
        samples,
        containing_simplices: results.iter().map(|r| r.0).sum(),
        failures,
        witness: results.into_iter().find_map(|r| r.1),
    })
}
