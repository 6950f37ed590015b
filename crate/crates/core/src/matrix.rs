//! Dense max-plus matrices.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut, Range};

use crate::error::{Error, Result};
use crate::interval::Sense;
use crate::scalar::ExtScalar;

/// A dense `rows × cols` matrix of [`ExtScalar`], stored row-major.
///
/// Vectors are `n × 1` matrices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TMatrix {
    rows: usize,
    cols: usize,
    data: Vec<ExtScalar>,
}

/// Which extremal solution [`fixpoint_extreme`] is asked for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FixOrder {
    /// Greatest element of `{x : x ≤ A ⊗ x ⊕ b}`.
    Leq,
    /// Least element of `{x : x ≥ A ⊗ x ⊕ b}`.
    Geq,
}

impl TMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<ExtScalar>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                context: "matrix data",
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(TMatrix { rows, cols, data })
    }

    pub fn filled(rows: usize, cols: usize, value: ExtScalar) -> Self {
        TMatrix {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    /// The null matrix `O`, all entries `-∞`.
    pub fn null(rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, ExtScalar::Bottom)
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::null(n, n);
        for i in 0..n {
            m[(i, i)] = ExtScalar::one();
        }
        m
    }

    /// Builds a matrix from rows; ragged input is a dimension mismatch.
    /// `from_rows(vec![])` is the `0 × 0` matrix.
    pub fn from_rows(rows: Vec<Vec<ExtScalar>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let n_rows = rows.len();
        let mut data = Vec::with_capacity(n_rows * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    context: "matrix row length",
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(TMatrix {
            rows: n_rows,
            cols,
            data,
        })
    }

    /// Column vector.
    pub fn column(values: Vec<ExtScalar>) -> Self {
        TMatrix {
            rows: values.len(),
            cols: 1,
            data: values,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> Option<ExtScalar> {
        (i < self.rows && j < self.cols).then(|| self.data[i * self.cols + j])
    }

    pub fn row(&self, i: usize) -> &[ExtScalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [ExtScalar] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column_values(&self, j: usize) -> Vec<ExtScalar> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<ExtScalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn as_slice(&self) -> &[ExtScalar] {
        &self.data
    }

    pub fn is_null(&self) -> bool {
        self.data.iter().all(ExtScalar::is_bottom)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::null(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    /// `A_{IJ}`: the entries at the given row and column indices, in order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                data.push(self[(i, j)]);
            }
        }
        TMatrix {
            rows: rows.len(),
            cols: cols.len(),
            data,
        }
    }

    /// `A ⊗ B`.
    pub fn mat_mul(&self, other: &TMatrix) -> Result<TMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                context: "matrix product",
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::null(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_bottom() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other[(k, j)];
                    let cell = &mut out.data[i * other.cols + j];
                    *cell = cell.oplus(a.otimes(b));
                }
            }
        }
        Ok(out)
    }

    /// `A ⊕ B`, entrywise maximum.
    pub fn oplus(&self, other: &TMatrix) -> Result<TMatrix> {
        self.check_same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.oplus(*b))
            .collect();
        Ok(TMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// Entrywise `A ≥ B`.
    pub fn geq(&self, other: &TMatrix) -> Result<bool> {
        self.check_same_shape(other)?;
        Ok(self.data.iter().zip(&other.data).all(|(a, b)| a >= b))
    }

    /// Entrywise `A ≤ B`.
    pub fn leq(&self, other: &TMatrix) -> Result<bool> {
        other.geq(self)
    }

    /// Entrywise `≥` restricted to row `i` of both matrices.
    pub fn row_geq(&self, i: usize, other: &TMatrix) -> Result<bool> {
        self.check_same_shape(other)?;
        Ok(self.row(i).iter().zip(other.row(i)).all(|(a, b)| a >= b))
    }

    fn check_same_shape(&self, other: &TMatrix) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch {
                context: "entrywise operation",
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        Ok(())
    }

    fn check_square(&self) -> Result<usize> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(self.rows)
    }
}

impl Index<(usize, usize)> for TMatrix {
    type Output = ExtScalar;

    fn index(&self, (i, j): (usize, usize)) -> &ExtScalar {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for TMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut ExtScalar {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

/// `A ⊕ A² ⊕ … ⊕ Aⁿ` for a square `n × n` matrix.
fn path_closure(a: &TMatrix) -> Result<TMatrix> {
    let n = a.check_square()?;
    let mut power = a.clone();
    let mut sum = a.clone();
    for _ in 1..n {
        power = power.mat_mul(a)?;
        sum = sum.oplus(&power)?;
    }
    Ok(sum)
}

/// Whether `A^{⊗k}` tends to the null matrix, i.e. every circuit of the
/// weighted graph of `A` has weight `< 0`.
///
/// Any nonnegative circuit contains an elementary one of length at most `n`,
/// which shows up on the diagonal of `A ⊕ … ⊕ Aⁿ`.
pub fn converges_to_null(a: &TMatrix) -> Result<bool> {
    let n = a.check_square()?;
    let closure = path_closure(a)?;
    Ok((0..n).all(|i| closure[(i, i)] < ExtScalar::one()))
}

/// `A* = I ⊕ A ⊕ … ⊕ A^{n-1}`.
pub fn kleene_star(a: &TMatrix) -> Result<TMatrix> {
    let n = a.check_square()?;
    if !converges_to_null(a)? {
        return Err(Error::Divergent);
    }
    let mut power = TMatrix::identity(n);
    let mut sum = TMatrix::identity(n);
    for _ in 1..n {
        power = power.mat_mul(a)?;
        sum = sum.oplus(&power)?;
    }
    Ok(sum)
}

/// Solution `A* ⊗ b` of `x = A ⊗ x ⊕ b`.
///
/// When `A` has only negative circuits the fixpoint is unique, so it is both
/// the greatest sub-solution and the least super-solution; `order` only
/// documents which one the caller relies on.
pub fn fixpoint_extreme(a: &TMatrix, b: &TMatrix, order: FixOrder) -> Result<TMatrix> {
    let _ = order;
    let star = kleene_star(a)?;
    star.mat_mul(b)
}

/// Zeroes (sets to `-∞` in both matrices) every row `i` where `l_i ≥ w_i`
/// entrywise in min mode, `l_i ≤ w_i` in max mode.
pub fn set_rows_to_zero(l: &TMatrix, w: &TMatrix, mode: Sense) -> Result<(TMatrix, TMatrix)> {
    l.check_same_shape(w)?;
    let (mut l, mut w) = (l.clone(), w.clone());
    let rows = l.rows;
    zero_satisfied_rows(&mut l, &mut w, mode, 0..rows);
    Ok((l, w))
}

/// In-place [`set_rows_to_zero`] over a row range. Shapes must agree.
pub(crate) fn zero_satisfied_rows(l: &mut TMatrix, w: &mut TMatrix, mode: Sense, rows: Range<usize>) {
    debug_assert_eq!(l.shape(), w.shape());
    for i in rows {
        let satisfied = l.row(i).iter().zip(w.row(i)).all(|(a, b)| match mode {
            Sense::Min => a >= b,
            Sense::Max => a <= b,
        });
        if satisfied {
            l.row_mut(i).fill(ExtScalar::Bottom);
            w.row_mut(i).fill(ExtScalar::Bottom);
        }
    }
}
