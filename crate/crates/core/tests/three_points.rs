//! Golden tables for the State Complex on three points.

mod support;

use support::three_points::*;

#[test]
fn vertex_rows_match() {
    check_vertex_rows().unwrap();
}

#[test]
fn edge_rows() {
    check_rows(&edges(), 2).unwrap();
}

#[test]
fn triangle_rows() {
    check_rows(&triangles(), 3).unwrap();
}

#[test]
fn rows_are_exactly_the_enumeration() {
    check_enumeration().unwrap();
}

#[test]
fn transpose_pairs_share_simplices() {
    check_transpose_pairs().unwrap();
}

#[test]
fn complex_matches_tables() {
    check_complex().unwrap();
}
