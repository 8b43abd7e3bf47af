//! Entrywise cosines of distance matrices and membership in the elliptope
//! (positive semidefinite matrices with unit diagonal).
//!
//! For points `z_i = exp(i*pi*r_i)` the matrix `cos(pi * d_ij)` is the Gram
//! matrix of the unit vectors `z_i` in the plane, so it is positive
//! semidefinite of rank at most 2. This is the only floating-point module.
//!
//! The Euclidean chord subtending a geodesic angle `a` is `2 sin(a/2)`,
//! with inverse `2 arcsin(c/2)`. Some statements of this correspondence
//! write the two functions the other way round; the chord formula here is
//! checked against the dot-product geometry in the tests.

use nalgebra::{DMatrix, SymmetricEigen};
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::circle::DistanceMatrix;
use crate::error::{Error, Result};

/// Smallest eigenvalue still accepted as nonnegative.
pub const PSD_TOL: f64 = 1e-9;
/// Eigenvalues above this count toward the numerical rank.
pub const RANK_TOL: f64 = 1e-8;
/// Allowed asymmetry and deviation of the diagonal from 1.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// A candidate member of the elliptope: symmetric, unit diagonal, entries
/// in `[-1, 1]`, all up to [`SYMMETRY_TOL`].
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    matrix: DMatrix<f64>,
}

impl CorrelationMatrix {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidMatrix(format!(
                "{}x{} matrix is not square",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        check_symmetric(&matrix)?;
        let n = matrix.nrows();
        for i in 0..n {
            if (matrix[(i, i)] - 1.0).abs() > SYMMETRY_TOL {
                return Err(Error::InvalidMatrix(format!(
                    "diagonal entry {i} is {}",
                    matrix[(i, i)]
                )));
            }
        }
        if let Some(v) = matrix
            .iter()
            .find(|v| v.is_nan() || v.abs() > 1.0 + SYMMETRY_TOL)
        {
            return Err(Error::InvalidMatrix(format!("entry {v} outside [-1, 1]")));
        }
        Ok(CorrelationMatrix { matrix })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidMatrix("rows must have length n".into()));
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.matrix[(i, j)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }
}

fn check_symmetric(a: &DMatrix<f64>) -> Result<()> {
    if !a.is_square() {
        return Err(Error::NotSymmetric);
    }
    let n = a.nrows();
    for i in 0..n {
        for j in i + 1..n {
            if (a[(i, j)] - a[(j, i)]).abs() > SYMMETRY_TOL {
                return Err(Error::NotSymmetric);
            }
        }
    }
    Ok(())
}

fn to_f64(d: &crate::rational::Rational) -> f64 {
    d.to_f64().expect("finite rational")
}

/// `cos(pi * d_ij)` entrywise, with an exact unit diagonal.
pub fn cosine_transform(m: &DistanceMatrix) -> CorrelationMatrix {
    let n = m.n();
    let matrix = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            1.0
        } else {
            (std::f64::consts::PI * to_f64(m.get(i, j))).cos()
        }
    });
    CorrelationMatrix::new(matrix).expect("cosines of a distance matrix form a correlation matrix")
}

/// Eigenvalues of a symmetric matrix in ascending order.
pub fn eigenvalues(a: &DMatrix<f64>) -> Result<Vec<f64>> {
    check_symmetric(a)?;
    let mut ev: Vec<f64> = SymmetricEigen::new(a.clone())
        .eigenvalues
        .iter()
        .copied()
        .collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Whether the smallest eigenvalue is at least `-tol`, with that eigenvalue
/// as witness.
pub fn is_psd(a: &DMatrix<f64>, tol: f64) -> Result<(bool, f64)> {
    let min = eigenvalues(a)?.first().copied().unwrap_or(0.0);
    Ok((min >= -tol, min))
}

/// Number of eigenvalues above `rank_tol`; fails unless `a` is PSD at
/// [`PSD_TOL`].
pub fn gram_rank(a: &DMatrix<f64>, rank_tol: f64) -> Result<usize> {
    let ev = eigenvalues(a)?;
    let min = ev.first().copied().unwrap_or(0.0);
    if min < -PSD_TOL {
        return Err(Error::NotPsd(min));
    }
    Ok(ev.iter().filter(|&&v| v > rank_tol).count())
}

/// Chord lengths `2 sin(pi * d_ij / 2)` of a geodesic distance matrix.
pub fn geodesic_to_chordal(m: &DistanceMatrix) -> DMatrix<f64> {
    let n = m.n();
    DMatrix::from_fn(n, n, |i, j| {
        2.0 * (std::f64::consts::FRAC_PI_2 * to_f64(m.get(i, j))).sin()
    })
}

/// Inverse of [`geodesic_to_chordal`]: `2 arcsin(c/2) / pi`, in units of pi.
pub fn chordal_to_geodesic(c: &DMatrix<f64>) -> DMatrix<f64> {
    c.map(|v| 2.0 * (v / 2.0).clamp(-1.0, 1.0).asin() / std::f64::consts::PI)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub psd: bool,
    pub min_eig: f64,
    /// Eigenvalues above the rank threshold (counted even when not PSD).
    pub rank: usize,
}

/// PSD and rank evidence for `cos(pi * M)` at the given PSD tolerance.
pub fn elliptope_membership(m: &DistanceMatrix, tol: f64) -> MembershipReport {
    let c = cosine_transform(m);
    let ev = eigenvalues(c.matrix()).expect("correlation matrices are symmetric");
    let min_eig = ev.first().copied().unwrap_or(0.0);
    MembershipReport {
        psd: min_eig >= -tol,
        min_eig,
        rank: ev.iter().filter(|&&v| v > RANK_TOL).count(),
    }
}
