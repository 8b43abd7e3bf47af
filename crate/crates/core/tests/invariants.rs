//! Property-based checks of the geometric and combinatorial invariants.

use curvature::circle::{
    apply_isometry, distance_matrix, fold, geodesic_distance, normalize, realize_matrix,
    recover_isometry, CirclePoint, Configuration, Isometry,
};
use curvature::cluster::{
    convex_decomposition, induced_cluster, phi, predicted_distance, restrict, reverse_barycentric,
    transpose, vertex_set, weighted_sum, BarycentricPoint, ClusterStructure,
};
use curvature::elliptope::{
    chordal_to_geodesic, cosine_transform, elliptope_membership, geodesic_to_chordal, PSD_TOL,
};
use curvature::rational::Rational;
use curvature::state_complex::{minimal_simplex, simplex_vertices};
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;

fn rational(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

/// `n` angles over a shared denominator; small denominators make
/// coincident and antipodal points common.
fn configuration(max_n: usize) -> impl Strategy<Value = Configuration> {
    (1..=max_n, 1i64..=60).prop_flat_map(|(n, q)| {
        prop::collection::vec(0..2 * q, n).prop_map(move |nums| {
            Configuration::from_angles(nums.into_iter().map(|k| rational(k, q))).unwrap()
        })
    })
}

fn isometry() -> impl Strategy<Value = Isometry> {
    (1i64..=60, any::<bool>())
        .prop_flat_map(|(q, r)| (0..2 * q).prop_map(move |k| Isometry::new(rational(k, q), r)))
}

/// A cluster structure from arbitrary labels: magnitudes are the dense
/// ranks of the labels, with point 0 holding the smallest.
fn cluster_structure(max_n: usize) -> impl Strategy<Value = ClusterStructure> {
    (1..=max_n).prop_flat_map(|n| {
        (
            prop::collection::vec(1..=n as u8, n - 1),
            prop::collection::vec(any::<bool>(), n - 1),
        )
            .prop_map(|(labels, flips)| {
                let mut distinct: Vec<u8> = labels.clone();
                distinct.push(0);
                distinct.sort_unstable();
                distinct.dedup();
                let mut values = vec![1];
                for (l, f) in labels.iter().zip(flips) {
                    let mag = distinct.binary_search(l).unwrap() as i32 + 1;
                    values.push(if f { -mag } else { mag });
                }
                ClusterStructure::from_values(values).unwrap()
            })
    })
}

/// Weights with a shared denominator; `zeros` marks coordinates forced to 0.
fn weights(m: usize, zeros: Vec<bool>, raw: Vec<i64>) -> Option<BarycentricPoint> {
    let w: Vec<i64> = raw
        .iter()
        .zip(&zeros)
        .map(|(&v, &z)| if z { 0 } else { v })
        .collect();
    let total: i64 = w.iter().sum();
    if total == 0 {
        return None;
    }
    debug_assert_eq!(w.len(), m);
    BarycentricPoint::new(w.into_iter().map(|v| rational(v, total)).collect()).ok()
}

fn structure_and_interior(
    max_n: usize,
) -> impl Strategy<Value = (ClusterStructure, BarycentricPoint)> {
    cluster_structure(max_n).prop_flat_map(|c| {
        let m = c.m();
        prop::collection::vec(1i64..=50, m)
            .prop_map(move |raw| (c.clone(), weights(m, vec![false; m], raw).unwrap()))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn metric_axioms(x in configuration(7)) {
        let d = distance_matrix(&x);
        let n = x.len();
        for i in 0..n {
            prop_assert!(d.get(i, i).is_zero());
            for j in 0..n {
                prop_assert_eq!(d.get(i, j), d.get(j, i));
                prop_assert!(d.get(i, j) <= &Rational::one());
                for k in 0..n {
                    prop_assert!(d.get(i, k) <= &(d.get(i, j) + d.get(j, k)));
                }
            }
        }
    }

    #[test]
    fn isometries_preserve_distances(x in configuration(8), tau in isometry()) {
        let y = apply_isometry(&tau, &x);
        prop_assert_eq!(distance_matrix(&y), distance_matrix(&x));
        let found = recover_isometry(&x, &y).unwrap();
        prop_assert_eq!(apply_isometry(&found, &x), y);
    }

    #[test]
    fn isometry_composition(x in configuration(6), a in isometry(), b in isometry()) {
        let composed = apply_isometry(&b.compose(&a), &x);
        prop_assert_eq!(composed, apply_isometry(&b, &apply_isometry(&a, &x)));
    }

    #[test]
    fn equal_matrices_mean_equal_or_reflected(x in configuration(6), tau in isometry()) {
        let (xn, yn) = (normalize(&x), normalize(&apply_isometry(&tau, &x)));
        prop_assert!(yn == xn || yn == xn.reflect());
    }

    #[test]
    fn realization_round_trip(x in configuration(8)) {
        let xn = normalize(&x);
        let r = realize_matrix(&distance_matrix(&x)).unwrap();
        prop_assert!(r == xn || r == xn.reflect());
    }

    #[test]
    fn fold_lands_in_half_turn(x in configuration(8)) {
        let base = x.points()[0].angle().clone();
        for p in fold(&x).points() {
            let rel = CirclePoint::new(p.angle() - &base);
            prop_assert!(rel.angle() < &Rational::one());
        }
    }

    #[test]
    fn cluster_round_trip((c, t) in structure_and_interior(7)) {
        let x = phi(&c, &t).unwrap();
        prop_assert!(x.is_normalized());
        prop_assert_eq!(induced_cluster(&x).unwrap(), (c, t));
    }

    #[test]
    fn boundary_collapse(
        c in cluster_structure(7),
        raw in prop::collection::vec(1i64..=50, 7),
        zeros in prop::collection::vec(any::<bool>(), 7),
    ) {
        let m = c.m();
        prop_assume!(m >= 2);
        let zeros = zeros[..m].to_vec();
        prop_assume!(zeros.iter().any(|&z| z) && zeros.iter().any(|&z| !z));
        let t = weights(m, zeros.clone(), raw[..m].to_vec()).unwrap();
        let support: Vec<usize> = (1..=m).filter(|&k| !zeros[k - 1]).collect();
        let ci = restrict(&c, &support).unwrap();
        let s = BarycentricPoint::new(support.iter().map(|&k| t.coords()[k - 1].clone()).collect()).unwrap();
        let x = phi(&c, &t).unwrap();
        prop_assert_eq!(phi(&ci, &s).unwrap(), x.clone());
        prop_assert_eq!(induced_cluster(&x).unwrap(), (ci, s));
    }

    #[test]
    fn transpose_equivariance((c, t) in structure_and_interior(7)) {
        let tc = transpose(&c);
        prop_assert_eq!(transpose(&tc), c.clone());
        prop_assert_eq!(phi(&tc, &reverse_barycentric(&t)).unwrap(), phi(&c, &t).unwrap().reflect());
        let mut reversed = vertex_set(&c);
        reversed.reverse();
        prop_assert_eq!(vertex_set(&tc), reversed);
        let x = phi(&c, &t).unwrap();
        prop_assert_eq!(induced_cluster(&x.reflect()).unwrap().0, tc.clone());
        if c.m() >= 2 {
            prop_assert_ne!(tc, c);
        }
    }

    #[test]
    fn convex_identity_and_prediction((c, t) in structure_and_interior(7)) {
        let d = distance_matrix(&phi(&c, &t).unwrap());
        prop_assert_eq!(weighted_sum(&convex_decomposition(&c, &t).unwrap()).unwrap(), d.clone());
        for i in 0..c.n() {
            for j in 0..c.n() {
                prop_assert_eq!(&predicted_distance(&c, &t, i, j).unwrap(), d.get(i, j));
            }
        }
    }

    #[test]
    fn parameterization_is_injective(
        c in cluster_structure(6),
        a in prop::collection::vec(1i64..=40, 6),
        b in prop::collection::vec(1i64..=40, 6),
    ) {
        let m = c.m();
        let s = weights(m, vec![false; m], a[..m].to_vec()).unwrap();
        let t = weights(m, vec![false; m], b[..m].to_vec()).unwrap();
        prop_assume!(s != t);
        let (x, y) = (phi(&c, &s).unwrap(), phi(&c, &t).unwrap());
        prop_assert_ne!(&x, &y);
        prop_assert_ne!(distance_matrix(&x), distance_matrix(&y));
    }

    #[test]
    fn located_simplex_carries_the_matrix(x in configuration(7)) {
        let d = distance_matrix(&x);
        let loc = minimal_simplex(&d).unwrap();
        prop_assert_eq!(distance_matrix(&loc.configuration), d);
        prop_assert!(loc.barycentric.is_interior());
        prop_assert_eq!(simplex_vertices(&loc.label), loc.vertices.clone());
        prop_assert!(transpose(&loc.label) > loc.label || loc.label.m() == 1);
    }

    #[test]
    fn cosines_form_low_rank_gram_matrices(x in configuration(12)) {
        let d = distance_matrix(&x);
        let r = elliptope_membership(&d, PSD_TOL);
        prop_assert!(r.psd, "min eigenvalue {}", r.min_eig);
        prop_assert!(r.rank <= 2);
        // independent oracle: dot products of the unit vectors
        let c = cosine_transform(&d);
        let unit: Vec<(f64, f64)> = x
            .angles()
            .iter()
            .map(|a| {
                let th = std::f64::consts::PI * a.to_f64().unwrap();
                (th.cos(), th.sin())
            })
            .collect();
        for (i, u) in unit.iter().enumerate() {
            for (j, v) in unit.iter().enumerate() {
                prop_assert!((c.get(i, j) - (u.0 * v.0 + u.1 * v.1)).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn chord_round_trip(x in configuration(8)) {
        let d = distance_matrix(&x);
        let chords = geodesic_to_chordal(&d);
        let back = chordal_to_geodesic(&chords);
        let unit: Vec<(f64, f64)> = x
            .angles()
            .iter()
            .map(|a| {
                let th = std::f64::consts::PI * a.to_f64().unwrap();
                (th.cos(), th.sin())
            })
            .collect();
        for i in 0..x.len() {
            for j in 0..x.len() {
                prop_assert!((back[(i, j)] - d.get(i, j).to_f64().unwrap()).abs() <= 1e-12);
                let (u, v) = (unit[i], unit[j]);
                let euclid = ((u.0 - v.0).powi(2) + (u.1 - v.1).powi(2)).sqrt();
                prop_assert!((chords[(i, j)] - euclid).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn geodesic_is_symmetric_under_antipodes(x in configuration(2)) {
        let p = &x.points()[0];
        let q = x.points().last().unwrap();
        prop_assert_eq!(geodesic_distance(p, q), geodesic_distance(&p.antipode(), &q.antipode()));
        prop_assert_eq!(
            geodesic_distance(p, &q.antipode()),
            Rational::one() - geodesic_distance(p, q)
        );
    }
}
