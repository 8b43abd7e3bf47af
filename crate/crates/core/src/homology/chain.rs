//! Sparse integer matrices and simplicial chain complexes.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::state_complex::SimplicialComplex;

/// A column-major sparse integer matrix; each column is sorted by row and
/// holds no explicit zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<Vec<(u32, i64)>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    /// Builds from columns of `(row, value)` pairs in any order.
    pub fn from_columns(rows: usize, columns: Vec<Vec<(u32, i64)>>) -> Result<Self> {
        let cols = columns.len();
        let mut out = Vec::with_capacity(cols);
        for mut col in columns {
            col.sort_unstable_by_key(|&(r, _)| r);
            if col.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(Error::InvalidMatrix(
                    "repeated row in a sparse column".into(),
                ));
            }
            if let Some(&(r, _)) = col.iter().find(|&&(r, _)| r as usize >= rows) {
                return Err(Error::IndexOutOfRange {
                    index: r as usize,
                    max: rows.saturating_sub(1),
                });
            }
            col.retain(|&(_, v)| v != 0);
            out.push(col);
        }
        Ok(SparseMatrix {
            rows,
            cols,
            columns: out,
        })
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::InvalidMatrix("ragged rows".into()));
        }
        let columns = (0..ncols)
            .map(|j| {
                (0..nrows)
                    .filter(|&i| rows[i][j] != 0)
                    .map(|i| (i as u32, rows[i][j]))
                    .collect()
            })
            .collect();
        Self::from_columns(nrows, columns)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> &[(u32, i64)] {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[Vec<(u32, i64)>] {
        &self.columns
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![0; self.cols]; self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for &(i, v) in col {
                out[i as usize][j] = v;
            }
        }
        out
    }

    /// `(row, col, value)` for every nonzero, column by column.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(j, col)| col.iter().map(move |&(i, v)| (i as usize, j, v)))
    }

    /// Coordinate text format: a `rows cols nnz` header, then one
    /// `row col value` triple per line (0-based).
    pub fn to_triplet_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.rows, self.cols, self.nnz());
        for (i, j, v) in self.triplets() {
            writeln!(out, "{i} {j} {v}").expect("writing to a string");
        }
        out
    }

    /// The product `self * other`, used for the square-zero check.
    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let columns = other
            .columns
            .iter()
            .map(|col| {
                let mut acc: HashMap<u32, i64> = HashMap::new();
                for &(k, b) in col {
                    for &(i, a) in &self.columns[k as usize] {
                        *acc.entry(i).or_insert(0) += a * b;
                    }
                }
                acc.into_iter().filter(|&(_, v)| v != 0).collect()
            })
            .collect();
        Self::from_columns(self.rows, columns)
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }
}

/// Simplicial chain complex `C_top -> ... -> C_0` with integer boundaries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplex {
    dims: Vec<usize>,
    /// `boundaries[d - 1]` is `∂_d : C_d -> C_{d-1}`.
    boundaries: Vec<SparseMatrix>,
    square_zero: bool,
}

impl ChainComplex {
    /// Assembles a complex from explicit boundaries, checking shapes and
    /// recording whether consecutive boundaries compose to zero.
    pub fn new(dims: Vec<usize>, boundaries: Vec<SparseMatrix>) -> Result<Self> {
        if boundaries.len() + 1 != dims.len().max(1) {
            return Err(Error::DimensionMismatch {
                expected: dims.len().saturating_sub(1),
                found: boundaries.len(),
            });
        }
        for (d, b) in boundaries.iter().enumerate() {
            if b.rows() != dims[d] || b.cols() != dims[d + 1] {
                return Err(Error::DimensionMismatch {
                    expected: dims[d + 1],
                    found: b.cols(),
                });
            }
        }
        let square_zero = boundaries
            .windows(2)
            .all(|w| w[0].mul(&w[1]).map(|p| p.is_zero()).unwrap_or(false));
        Ok(ChainComplex {
            dims,
            boundaries,
            square_zero,
        })
    }

    /// Ranks of the chain groups `C_0, C_1, ...`.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// `∂_d` for `1 <= d <= top`.
    pub fn boundary(&self, d: usize) -> Option<&SparseMatrix> {
        d.checked_sub(1).and_then(|i| self.boundaries.get(i))
    }

    pub fn boundaries(&self) -> &[SparseMatrix] {
        &self.boundaries
    }

    pub fn square_zero(&self) -> bool {
        self.square_zero
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }
}

pub fn boundary_matrices(k: &SimplicialComplex) -> Result<ChainComplex> {
    boundary_matrices_with(k, Execution::default())
}

/// `∂[v_0..v_d] = Σ_i (-1)^i [v_0..v̂_i..v_d]` on sorted tuples; rows and
/// columns follow the complex's simplex order in each dimension.
pub fn boundary_matrices_with(k: &SimplicialComplex, exec: Execution) -> Result<ChainComplex> {
    let dims = k.f_vector();
    let mut boundaries = Vec::new();
    for d in 1..dims.len() {
        let columns: Vec<Result<Vec<(u32, i64)>>> = exec.map_range(dims[d], |j| {
            let s = k.simplex(d, j);
            let mut col = Vec::with_capacity(d + 1);
            for skip in 0..=d {
                let face: Vec<usize> = s
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &v)| v)
                    .collect();
                let row = k.index_of(&face).ok_or_else(|| {
                    Error::InvalidRange(format!("face {face:?} of {s:?} missing"))
                })?;
                col.push((row as u32, if skip % 2 == 0 { 1 } else { -1 }));
            }
            Ok(col)
        });
        let columns = columns.into_iter().collect::<Result<Vec<_>>>()?;
        boundaries.push(SparseMatrix::from_columns(dims[d - 1], columns)?);
    }
    ChainComplex::new(dims, boundaries)
}
