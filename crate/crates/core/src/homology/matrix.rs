use crate::scalar::Scalar;

/// Column-major sparse matrix; each column is sorted by row with no
/// explicit zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix<S> {
    rows: usize,
    cols: usize,
    columns: Vec<Vec<(usize, S)>>,
}

impl<S: Scalar> SparseMatrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    /// Builds a matrix from `(row, col, value)` triples; repeated positions
    /// are summed. Panics on out-of-range indices.
    pub fn from_triplets(rows: usize, cols: usize, entries: impl IntoIterator<Item = (usize, usize, S)>) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (r, c, x) in entries {
            m.add_entry(r, c, x);
        }
        m
    }

    pub fn add_entry(&mut self, row: usize, col: usize, value: S) {
        assert!(row < self.rows && col < self.cols, "entry ({row}, {col}) outside {}x{}", self.rows, self.cols);
        let column = &mut self.columns[col];
        match column.binary_search_by_key(&row, |(r, _)| *r) {
            Ok(pos) => {
                let v = column[pos].1.clone() + value;
                if v.is_zero() {
                    column.remove(pos);
                } else {
                    column[pos].1 = v;
                }
            }
            Err(pos) => {
                if !value.is_zero() {
                    column.insert(pos, (row, value));
                }
            }
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, c: usize) -> &[(usize, S)] {
        &self.columns[c]
    }

    pub fn columns(&self) -> &[Vec<(usize, S)>] {
        &self.columns
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn get(&self, row: usize, col: usize) -> S {
        self.columns[col]
            .binary_search_by_key(&row, |(r, _)| *r)
            .map(|pos| self.columns[col][pos].1.clone())
            .unwrap_or_else(|_| S::zero())
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &S)> {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, x)| (*r, c, x)))
    }

    /// `self * other`, both sparse.
    pub fn mul(&self, other: &SparseMatrix<S>) -> SparseMatrix<S> {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = SparseMatrix::zeros(self.rows, other.cols);
        for (c, col) in other.columns.iter().enumerate() {
            for (k, y) in col {
                for (r, x) in &self.columns[*k] {
                    out.add_entry(*r, c, x.clone() * y.clone());
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> SparseMatrix<T> {
        let mut out = SparseMatrix::zeros(self.rows, self.cols);
        for (r, c, x) in self.entries() {
            out.add_entry(r, c, f(x));
        }
        out
    }
}
