//! Exact integer matrix algebra for the semitensor product.
//!
//! Two representations live here. [`DenseMatrix`] is a plain row-major
//! matrix of nonnegative integers and is used to evaluate the semitensor
//! product generically. [`LogicalMatrix`] is the compressed form of a 0/1
//! matrix with exactly one 1 per column, written `δ_n[i₁,…,i_s]`; every
//! structure matrix of a network is stored this way and most products of
//! logical matrices reduce to index lookups.
//!
//! All indices accepted or returned by public methods of [`LogicalMatrix`]
//! are 1-based, matching the δ-notation.

use std::fmt;

use num_integer::Integer;
use thiserror::Error;

/// Default upper bound on the number of cells a dense result may have.
pub const DEFAULT_MAX_CELLS: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StpError {
    #[error("a {rows}x{cols} matrix exceeds the limit of {max_cells} cells")]
    TooLarge {
        rows: usize,
        cols: usize,
        max_cells: usize,
    },
    #[error("matrix dimensions must be positive, got {rows}x{cols}")]
    ZeroDimension { rows: usize, cols: usize },
    #[error("expected {expected} entries for the given shape, got {actual}")]
    EntryCount { expected: usize, actual: usize },
    #[error("column {column} is not a standard basis vector")]
    NotLogical { column: usize },
    #[error("index {index} is outside 1..={bound}")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("cannot multiply a {0}x{1} matrix by a {2}x{3} matrix")]
    NotConformable(usize, usize, usize, usize),
}

/// Size limits applied before any dense allocation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_cells: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_cells: DEFAULT_MAX_CELLS,
        }
    }
}

impl Limits {
    fn check(&self, rows: Option<usize>, cols: Option<usize>) -> Result<(usize, usize), StpError> {
        let (rows, cols) = match (rows, cols) {
            (Some(r), Some(c)) => (r, c),
            _ => {
                return Err(StpError::TooLarge {
                    rows: rows.unwrap_or(usize::MAX),
                    cols: cols.unwrap_or(usize::MAX),
                    max_cells: self.max_cells,
                })
            }
        };
        match rows.checked_mul(cols) {
            Some(cells) if cells <= self.max_cells => Ok((rows, cols)),
            _ => Err(StpError::TooLarge {
                rows,
                cols,
                max_cells: self.max_cells,
            }),
        }
    }

    /// Kronecker product `a ⊗ b`.
    pub fn kron(&self, a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix, StpError> {
        let (rows, cols) = self.check(a.rows.checked_mul(b.rows), a.cols.checked_mul(b.cols))?;
        let mut data = vec![0u64; rows * cols];
        for ar in 0..a.rows {
            for ac in 0..a.cols {
                let s = a.get(ar, ac);
                if s == 0 {
                    continue;
                }
                for br in 0..b.rows {
                    let row = ar * b.rows + br;
                    for bc in 0..b.cols {
                        data[row * cols + ac * b.cols + bc] = s * b.get(br, bc);
                    }
                }
            }
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    /// Semitensor product `(a ⊗ I_{α/n})(b ⊗ I_{α/p})` with `α = lcm(n, p)`,
    /// where `n` is the column count of `a` and `p` the row count of `b`.
    pub fn stp(&self, a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix, StpError> {
        if a.cols == b.rows {
            return self.matmul(a, b);
        }
        let alpha = a.cols.lcm(&b.rows);
        let left = self.kron(a, &DenseMatrix::identity(alpha / a.cols))?;
        let right = self.kron(b, &DenseMatrix::identity(alpha / b.rows))?;
        self.matmul(&left, &right)
    }

    /// Conventional matrix product.
    pub fn matmul(&self, a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix, StpError> {
        if a.cols != b.rows {
            return Err(StpError::NotConformable(a.rows, a.cols, b.rows, b.cols));
        }
        let (rows, cols) = self.check(Some(a.rows), Some(b.cols))?;
        let mut data = vec![0u64; rows * cols];
        for r in 0..rows {
            for k in 0..a.cols {
                let s = a.get(r, k);
                if s == 0 {
                    continue;
                }
                for c in 0..cols {
                    data[r * cols + c] += s * b.get(k, c);
                }
            }
        }
        Ok(DenseMatrix { rows, cols, data })
    }
}

/// Kronecker product under the default [`Limits`].
pub fn kron(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix, StpError> {
    Limits::default().kron(a, b)
}

/// Semitensor product under the default [`Limits`].
pub fn stp(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix, StpError> {
    Limits::default().stp(a, b)
}

/// Left-to-right semitensor product of a chain of factors.
pub fn stp_chain<'a, I>(factors: I) -> Result<DenseMatrix, StpError>
where
    I: IntoIterator<Item = &'a DenseMatrix>,
{
    let mut iter = factors.into_iter();
    let first = iter
        .next()
        .ok_or(StpError::ZeroDimension { rows: 0, cols: 0 })?
        .clone();
    iter.try_fold(first, |acc, m| stp(&acc, m))
}

/// Row-major matrix with nonnegative integer entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<u64>) -> Result<Self, StpError> {
        if rows == 0 || cols == 0 {
            return Err(StpError::ZeroDimension { rows, cols });
        }
        let expected = rows.checked_mul(cols).ok_or(StpError::TooLarge {
            rows,
            cols,
            max_cells: usize::MAX,
        })?;
        if data.len() != expected {
            return Err(StpError::EntryCount {
                expected,
                actual: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from its rows. Panics on ragged or empty input; meant
    /// for literals.
    pub fn from_rows<R: AsRef<[u64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        assert!(!rows.is_empty() && cols > 0, "empty matrix literal");
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.as_ref().len(), cols, "ragged matrix literal");
            data.extend_from_slice(r.as_ref());
        }
        Self {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0);
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// The all-ones column vector `1_k`.
    pub fn ones_column(k: usize) -> Self {
        Self {
            rows: k,
            cols: 1,
            data: vec![1; k],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry at 0-based `(row, col)`.
    pub fn get(&self, row: usize, col: usize) -> u64 {
        self.data[row * self.cols + col]
    }

    pub(crate) fn get_mut(&mut self, row: usize, col: usize) -> &mut u64 {
        &mut self.data[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[u64] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut data = vec![0; self.data.len()];
        for r in 0..self.rows {
            for c in 0..self.cols {
                data[c * self.rows + r] = self.get(r, c);
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn column_sums(&self) -> Vec<u64> {
        (0..self.cols)
            .map(|c| (0..self.rows).map(|r| self.get(r, c)).sum())
            .collect()
    }

    /// Converts to compressed form; every column must be a standard basis
    /// vector.
    pub fn compress(&self) -> Result<LogicalMatrix, StpError> {
        let mut cols = Vec::with_capacity(self.cols);
        for c in 0..self.cols {
            let mut hit = None;
            for r in 0..self.rows {
                match self.get(r, c) {
                    0 => {}
                    1 if hit.is_none() => hit = Some(r),
                    _ => return Err(StpError::NotLogical { column: c + 1 }),
                }
            }
            cols.push(hit.ok_or(StpError::NotLogical { column: c + 1 })?);
        }
        Ok(LogicalMatrix {
            rows: self.rows,
            cols,
        })
    }
}

impl fmt::Display for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(u64::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// A logical matrix `δ_n[i₁,…,i_s]`: `n` rows and one standard basis vector
/// per column.
///
/// Column indices are kept 0-based internally; the public surface is
/// 1-based throughout.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LogicalMatrix {
    rows: usize,
    cols: Vec<usize>,
}

impl LogicalMatrix {
    /// Builds `δ_rows[indices…]` from 1-based column indices.
    pub fn new(rows: usize, indices: &[usize]) -> Result<Self, StpError> {
        if rows == 0 || indices.is_empty() {
            return Err(StpError::ZeroDimension {
                rows,
                cols: indices.len(),
            });
        }
        let cols = indices
            .iter()
            .map(|&i| {
                if (1..=rows).contains(&i) {
                    Ok(i - 1)
                } else {
                    Err(StpError::IndexOutOfRange {
                        index: i,
                        bound: rows,
                    })
                }
            })
            .collect::<Result<_, _>>()?;
        Ok(Self { rows, cols })
    }

    /// Builds from 0-based indices already known to be in range.
    pub(crate) fn from_zero_based(rows: usize, cols: Vec<usize>) -> Self {
        debug_assert!(rows > 0 && !cols.is_empty());
        debug_assert!(cols.iter().all(|&c| c < rows));
        Self { rows, cols }
    }

    /// The basis vector `δ_n^i` as a one-column logical matrix.
    pub fn delta(n: usize, i: usize) -> Result<Self, StpError> {
        Self::new(n, &[i])
    }

    pub fn identity(n: usize) -> Self {
        Self::from_zero_based(n, (0..n).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols.len()
    }

    /// 1-based column indices.
    pub fn indices(&self) -> Vec<usize> {
        self.cols.iter().map(|c| c + 1).collect()
    }

    pub(crate) fn raw(&self) -> &[usize] {
        &self.cols
    }

    /// Row index (1-based) of the 1 in column `col` (1-based). This is
    /// `L ⋉ δ^col` read off directly.
    pub fn column(&self, col: usize) -> Result<usize, StpError> {
        if col == 0 || col > self.cols.len() {
            return Err(StpError::IndexOutOfRange {
                index: col,
                bound: self.cols.len(),
            });
        }
        Ok(self.cols[col - 1] + 1)
    }

    pub fn expand(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.rows, self.cols.len());
        for (c, &r) in self.cols.iter().enumerate() {
            *m.get_mut(r, c) = 1;
        }
        m
    }

    /// Conventional product `self · other`; the result is again logical.
    pub fn compose(&self, other: &LogicalMatrix) -> Result<LogicalMatrix, StpError> {
        if self.cols.len() != other.rows {
            return Err(StpError::NotConformable(
                self.rows,
                self.cols.len(),
                other.rows,
                other.cols.len(),
            ));
        }
        Ok(Self::from_zero_based(
            self.rows,
            other.cols.iter().map(|&c| self.cols[c]).collect(),
        ))
    }

    /// Kronecker product of two logical matrices.
    pub fn kron(&self, other: &LogicalMatrix) -> LogicalMatrix {
        let mut cols = Vec::with_capacity(self.cols.len() * other.cols.len());
        for &a in &self.cols {
            for &b in &other.cols {
                cols.push(a * other.rows + b);
            }
        }
        Self::from_zero_based(self.rows * other.rows, cols)
    }

    /// Distinct column indices (1-based), ascending.
    pub fn column_set(&self) -> Vec<usize> {
        let mut set: Vec<usize> = self.indices();
        set.sort_unstable();
        set.dedup();
        set
    }
}

impl fmt::Display for LogicalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx: Vec<String> = self.cols.iter().map(|c| (c + 1).to_string()).collect();
        write!(f, "δ{}[{}]", self.rows, idx.join(","))
    }
}

/// 1-based column selector lookup: `l ⋉ δ^col_selector`.
pub fn logical_stp_column(l: &LogicalMatrix, col_selector: usize) -> Result<usize, StpError> {
    l.column(col_selector)
}

/// The swap matrix `W_[m,n] = [I_n⊗δ_m¹, …, I_n⊗δ_m^m]`, which satisfies
/// `W_[m,n] ⋉ p ⋉ q = q ⋉ p` for `p ∈ Δ_m`, `q ∈ Δ_n`.
pub fn swap_matrix(m: usize, n: usize) -> LogicalMatrix {
    assert!(m > 0 && n > 0, "swap matrix dimensions must be positive");
    let mut cols = Vec::with_capacity(m * n);
    for i in 0..m {
        for k in 0..n {
            cols.push(k * m + i);
        }
    }
    LogicalMatrix::from_zero_based(m * n, cols)
}

/// The power-reducing matrix `δ_k¹ ⊕ ⋯ ⊕ δ_k^k` (k²×k), which satisfies
/// `p ⋉ p = M ⋉ p` for `p ∈ Δ_k`.
pub fn power_reducing_matrix(k: usize) -> LogicalMatrix {
    assert!(k > 0, "power-reducing matrix dimension must be positive");
    LogicalMatrix::from_zero_based(k * k, (0..k).map(|i| i * k + i).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(n: usize, idx: &[usize]) -> DenseMatrix {
        LogicalMatrix::new(n, idx).unwrap().expand()
    }

    #[test]
    fn kron_examples() {
        let i2 = DenseMatrix::identity(2);
        assert_eq!(kron(&i2, &i2).unwrap(), DenseMatrix::identity(4));
        assert_eq!(kron(&d(2, &[1]), &d(2, &[2])).unwrap(), d(4, &[2]));
        let a = DenseMatrix::from_rows(&[[1, 2], [3, 4]]);
        let b = DenseMatrix::from_rows(&[[0, 1], [1, 0]]);
        let expected =
            DenseMatrix::from_rows(&[[0, 1, 0, 2], [1, 0, 2, 0], [0, 3, 0, 4], [3, 0, 4, 0]]);
        assert_eq!(kron(&a, &b).unwrap(), expected);
    }

    #[test]
    fn kron_respects_cell_limit() {
        let limits = Limits { max_cells: 15 };
        let i2 = DenseMatrix::identity(2);
        assert!(matches!(
            limits.kron(&i2, &i2),
            Err(StpError::TooLarge {
                rows: 4,
                cols: 4,
                ..
            })
        ));
        let big = DenseMatrix::identity(1 << 10);
        assert!(matches!(
            kron(&big, &DenseMatrix::identity(2)),
            Err(StpError::TooLarge { .. })
        ));
    }

    #[test]
    fn stp_examples() {
        let l = d(4, &[2, 2, 1, 3, 4, 4, 2, 2]);
        let lx = stp(&l, &d(4, &[1])).unwrap();
        assert_eq!((lx.rows(), lx.cols()), (4, 2));
        assert_eq!(stp(&lx, &d(2, &[1])).unwrap(), d(4, &[2]));
        assert_eq!(stp(&d(2, &[1]), &d(2, &[2])).unwrap(), d(4, &[2]));

        let a = DenseMatrix::from_rows(&[[1, 2], [3, 4]]);
        let b = DenseMatrix::from_rows(&[[5, 6], [7, 8]]);
        assert_eq!(
            stp(&a, &b).unwrap(),
            DenseMatrix::from_rows(&[[19, 22], [43, 50]])
        );
    }

    #[test]
    fn swap_and_power_reducing_examples() {
        assert_eq!(swap_matrix(2, 2).indices(), vec![1, 3, 2, 4]);
        assert_eq!(swap_matrix(1, 3), LogicalMatrix::identity(3));
        let pq = stp(&d(2, &[1]), &d(2, &[2])).unwrap();
        assert_eq!(stp(&swap_matrix(2, 2).expand(), &pq).unwrap(), d(4, &[3]));

        let m2 = power_reducing_matrix(2);
        assert_eq!((m2.rows(), m2.indices()), (4, vec![1, 4]));
        assert_eq!(power_reducing_matrix(1), LogicalMatrix::identity(1));
    }

    #[test]
    fn compress_expand() {
        assert_eq!(d(2, &[1, 2]), DenseMatrix::identity(2));
        assert_eq!(
            DenseMatrix::identity(3).compress().unwrap().indices(),
            vec![1, 2, 3]
        );
        let m = DenseMatrix::from_rows(&[[1, 1], [0, 0]]);
        assert_eq!(m.compress().unwrap().indices(), vec![1, 1]);
        let bad = DenseMatrix::from_rows(&[[1, 1], [0, 1]]);
        assert_eq!(bad.compress(), Err(StpError::NotLogical { column: 2 }));
        let zero = DenseMatrix::from_rows(&[[0], [0]]);
        assert_eq!(zero.compress(), Err(StpError::NotLogical { column: 1 }));
        let two = DenseMatrix::from_rows(&[[2], [0]]);
        assert!(two.compress().is_err());
    }

    #[test]
    fn column_lookup() {
        let l = LogicalMatrix::new(4, &[2, 2, 1, 3, 4, 4, 2, 2]).unwrap();
        assert_eq!(logical_stp_column(&l, 3), Ok(1));
        assert_eq!(
            logical_stp_column(&l, 9),
            Err(StpError::IndexOutOfRange { index: 9, bound: 8 })
        );
        assert_eq!(
            logical_stp_column(&l, 0).unwrap_err(),
            StpError::IndexOutOfRange { index: 0, bound: 8 }
        );
        let id = LogicalMatrix::identity(5);
        for j in 1..=5 {
            assert_eq!(logical_stp_column(&id, j), Ok(j));
        }
    }

    #[test]
    fn logical_constructor_rejects_bad_indices() {
        assert_eq!(
            LogicalMatrix::new(2, &[1, 3]),
            Err(StpError::IndexOutOfRange { index: 3, bound: 2 })
        );
        assert!(LogicalMatrix::new(2, &[0]).is_err());
        assert!(LogicalMatrix::new(2, &[]).is_err());
    }

    #[test]
    fn logical_kron_and_compose_match_dense() {
        let a = LogicalMatrix::new(3, &[2, 1]).unwrap();
        let b = LogicalMatrix::new(2, &[2, 2, 1]).unwrap();
        assert_eq!(a.kron(&b).expand(), kron(&a.expand(), &b.expand()).unwrap());
        let c = LogicalMatrix::new(2, &[2, 1, 1]).unwrap();
        assert_eq!(
            a.compose(&c).unwrap().expand(),
            stp(&a.expand(), &c.expand()).unwrap()
        );
        assert!(a.compose(&a).is_err());
    }

    #[test]
    fn display() {
        let l = LogicalMatrix::new(4, &[1, 3]).unwrap();
        assert_eq!(l.to_string(), "δ4[1,3]");
    }
}
