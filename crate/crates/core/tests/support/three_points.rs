//! Golden tables for the State Complex on three points: every cluster
//! structure with its vertex set and symbolic distance pattern, with checks
//! that report the first mismatch.

#![allow(dead_code)]

use std::collections::BTreeSet;

use curvature::cluster::{phi, transpose, vertex, vertex_set, BarycentricPoint, ClusterStructure};
use curvature::rational::{int, rat, Rational};
use curvature::state_complex::{
    build_state_complex, enumerate_cluster_structures, simplex_vertices,
};
use curvature::{distance_matrix, euler_characteristic};

/// A symbolic entry `a_1 t_1 + ... + a_m t_m + b*pi` (pi = 1 in our units).
#[derive(Clone, Copy)]
pub struct Sym(&'static [i64], i64);

const Z: Sym = Sym(&[], 0);
const PI: Sym = Sym(&[], 1);

fn t(idx: &'static [i64]) -> Sym {
    Sym(idx, 0)
}

impl Sym {
    fn eval(&self, ts: &[Rational]) -> Rational {
        self.0
            .iter()
            .map(|&k| ts[k as usize - 1].clone())
            .sum::<Rational>()
            + int(self.1)
    }
}

pub struct Row {
    pub name: &'static str,
    pub c: [i32; 3],
    pub vertices: [&'static str; 3],
    pub d12: Sym,
    pub d13: Sym,
    pub d23: Sym,
}

fn signs(s: &str) -> Vec<i8> {
    s.chars().map(|ch| if ch == '+' { 1 } else { -1 }).collect()
}

#[rustfmt::skip]
pub fn triangles() -> Vec<Row> {
    vec![
        Row { name: "f1", c: [1, -2, 3], vertices: ["++-", "+--", "+-+"], d12: t(&[2, 3]), d13: t(&[1, 2]), d23: t(&[1, 3]) },
        Row { name: "f2", c: [1, 3, -2], vertices: ["+-+", "+--", "++-"], d12: t(&[1, 2]), d13: t(&[2, 3]), d23: t(&[1, 3]) },
        Row { name: "f3", c: [1, 2, 3], vertices: ["+--", "++-", "+++"], d12: t(&[1]), d13: t(&[1, 2]), d23: t(&[2]) },
        Row { name: "f4", c: [1, -3, -2], vertices: ["+++", "++-", "+--"], d12: t(&[3]), d13: t(&[2, 3]), d23: t(&[2]) },
        Row { name: "f5", c: [1, 3, 2], vertices: ["+--", "+-+", "+++"], d12: t(&[1, 2]), d13: t(&[1]), d23: t(&[2]) },
        Row { name: "f6", c: [1, -2, -3], vertices: ["+++", "+-+", "+--"], d12: t(&[2, 3]), d13: t(&[3]), d23: t(&[2]) },
        Row { name: "f7", c: [1, -3, 2], vertices: ["++-", "+++", "+-+"], d12: t(&[3]), d13: t(&[1]), d23: t(&[1, 3]) },
        Row { name: "f8", c: [1, 2, -3], vertices: ["+-+", "+++", "++-"], d12: t(&[1]), d13: t(&[3]), d23: t(&[1, 3]) },
    ]
}

#[rustfmt::skip]
pub fn edges() -> Vec<Row> {
    vec![
        Row { name: "e1", c: [1, 2, -1], vertices: ["+--", "++-", ""], d12: t(&[1]), d13: PI, d23: t(&[2]) },
        Row { name: "e2", c: [1, -2, -1], vertices: ["++-", "+--", ""], d12: t(&[2]), d13: PI, d23: t(&[1]) },
        Row { name: "e3", c: [1, -1, 2], vertices: ["+--", "+-+", ""], d12: PI, d13: t(&[1]), d23: t(&[2]) },
        Row { name: "e4", c: [1, -1, -2], vertices: ["+-+", "+--", ""], d12: PI, d13: t(&[2]), d23: t(&[1]) },
        Row { name: "e5", c: [1, -2, 2], vertices: ["++-", "+-+", ""], d12: t(&[2]), d13: t(&[1]), d23: PI },
        Row { name: "e6", c: [1, 2, -2], vertices: ["+-+", "++-", ""], d12: t(&[1]), d13: t(&[2]), d23: PI },
        Row { name: "e7", c: [1, 2, 2], vertices: ["+--", "+++", ""], d12: t(&[1]), d13: t(&[1]), d23: Z },
        Row { name: "e8", c: [1, -2, -2], vertices: ["+++", "+--", ""], d12: t(&[2]), d13: t(&[2]), d23: Z },
        Row { name: "e9", c: [1, 1, 2], vertices: ["++-", "+++", ""], d12: Z, d13: t(&[1]), d23: t(&[1]) },
        Row { name: "e10", c: [1, 1, -2], vertices: ["+++", "++-", ""], d12: Z, d13: t(&[2]), d23: t(&[2]) },
        Row { name: "e11", c: [1, 2, 1], vertices: ["+-+", "+++", ""], d12: t(&[1]), d13: Z, d23: t(&[1]) },
        Row { name: "e12", c: [1, -2, 1], vertices: ["+++", "+-+", ""], d12: t(&[2]), d13: Z, d23: t(&[2]) },
    ]
}

pub fn vertex_rows() -> Vec<([i32; 3], &'static str)> {
    vec![
        ([1, -1, -1], "+--"),
        ([1, 1, -1], "++-"),
        ([1, -1, 1], "+-+"),
        ([1, 1, 1], "+++"),
    ]
}

/// Interior sample weights, deliberately asymmetric.
fn samples(m: usize) -> Vec<Vec<Rational>> {
    match m {
        2 => vec![
            vec![rat(1, 3), rat(2, 3)],
            vec![rat(5, 7), rat(2, 7)],
            vec![rat(1, 2), rat(1, 2)],
        ],
        3 => vec![
            vec![rat(1, 3), rat(1, 4), rat(5, 12)],
            vec![rat(1, 10), rat(3, 10), rat(3, 5)],
            vec![rat(7, 11), rat(2, 11), rat(2, 11)],
        ],
        _ => unreachable!(),
    }
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

pub fn check_rows(rows: &[Row], m: usize) -> Result<(), String> {
    for row in rows {
        let c =
            ClusterStructure::new(m, row.c.to_vec()).map_err(|e| format!("{}: {e}", row.name))?;
        let want: Vec<Vec<i8>> = row.vertices[..m].iter().map(|s| signs(s)).collect();
        ensure!(vertex_set(&c) == want, "{} vertex set", row.name);
        for ts in samples(m) {
            let x = phi(&c, &BarycentricPoint::new(ts.clone()).unwrap()).unwrap();
            let d = distance_matrix(&x);
            for (i, j, sym) in [(0, 1, row.d12), (0, 2, row.d13), (1, 2, row.d23)] {
                ensure!(
                    d.get(i, j) == &sym.eval(&ts),
                    "{} d{}{} at {ts:?}",
                    row.name,
                    i + 1,
                    j + 1
                );
            }
        }
    }
    Ok(())
}

pub fn check_vertex_rows() -> Result<(), String> {
    for (values, sig) in vertex_rows() {
        let c = ClusterStructure::new(1, values.to_vec()).unwrap();
        ensure!(vertex_set(&c) == vec![signs(sig)], "vertex {sig}");
        let x = phi(&c, &BarycentricPoint::new(vec![int(1)]).unwrap()).unwrap();
        ensure!(
            distance_matrix(&x) == distance_matrix(&vertex(&c, 1).unwrap()),
            "vertex {sig} matrix"
        );
    }
    Ok(())
}

pub fn check_enumeration() -> Result<(), String> {
    let as_set = |rows: Vec<[i32; 3]>| {
        rows.into_iter()
            .map(|c| c.to_vec())
            .collect::<BTreeSet<_>>()
    };
    let enumerated = |m| {
        enumerate_cluster_structures(3, m)
            .unwrap()
            .map(|c| c.values().to_vec())
            .collect::<BTreeSet<_>>()
    };
    ensure!(
        enumerated(1) == as_set(vertex_rows().into_iter().map(|r| r.0).collect()),
        "vertex rows"
    );
    ensure!(
        enumerated(2) == as_set(edges().iter().map(|r| r.c).collect()),
        "edge rows"
    );
    ensure!(
        enumerated(3) == as_set(triangles().iter().map(|r| r.c).collect()),
        "triangle rows"
    );
    Ok(())
}

pub fn check_transpose_pairs() -> Result<(), String> {
    for (rows, m) in [(triangles(), 3), (edges(), 2)] {
        let mut simplices = BTreeSet::new();
        for pair in rows.chunks(2) {
            let a = ClusterStructure::new(m, pair[0].c.to_vec()).unwrap();
            let b = ClusterStructure::new(m, pair[1].c.to_vec()).unwrap();
            ensure!(
                transpose(&a) == b && transpose(&b) == a,
                "{} / {} not transposes",
                pair[0].name,
                pair[1].name
            );
            ensure!(
                simplex_vertices(&a) == simplex_vertices(&b),
                "{} / {} vertex sets",
                pair[0].name,
                pair[1].name
            );
            simplices.insert(simplex_vertices(&a));
        }
        ensure!(
            simplices.len() == rows.len() / 2,
            "{} rows merge to {} simplices",
            rows.len(),
            simplices.len()
        );
    }
    Ok(())
}

pub fn check_complex() -> Result<(), String> {
    let k = build_state_complex(3).map_err(|e| e.to_string())?;
    ensure!(k.f_vector() == vec![4, 6, 4], "f-vector {:?}", k.f_vector());
    ensure!(euler_characteristic(&k) == 2.into(), "Euler characteristic");
    for (rows, m) in [(triangles(), 3), (edges(), 2)] {
        let from_rows: BTreeSet<Vec<usize>> = rows
            .iter()
            .map(|r| simplex_vertices(&ClusterStructure::new(m, r.c.to_vec()).unwrap()))
            .collect();
        let built: BTreeSet<Vec<usize>> = k.simplices(m - 1).collect();
        ensure!(from_rows == built, "dimension {} simplices", m - 1);
    }
    Ok(())
}

/// Every check above, in order.
pub fn check_all() -> Result<(), String> {
    check_vertex_rows()?;
    check_rows(&edges(), 2)?;
    check_rows(&triangles(), 3)?;
    check_enumeration()?;
    check_transpose_pairs()?;
    check_complex()
}
