use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use num_traits::{One, Zero};

use super::ring::{Int, Ring};

static DENSITY_THRESHOLD: AtomicU64 = AtomicU64::new(0x3FD0_0000_0000_0000); // 0.25

/// Fraction of nonzero entries at or above which matrices are stored densely.
pub fn density_threshold() -> f64 {
    f64::from_bits(DENSITY_THRESHOLD.load(Ordering::Relaxed))
}

/// Storage only; results never depend on this setting.
pub fn set_density_threshold(t: f64) {
    DENSITY_THRESHOLD.store(t.clamp(0.0, 1.0).to_bits(), Ordering::Relaxed);
}

#[derive(Clone, Debug)]
enum Store {
    /// Row-major.
    Dense(Vec<Int>),
    /// Per column, sorted by row, no explicit zeros.
    Sparse(Vec<Vec<(usize, Int)>>),
}

/// Exact matrix over a [`Ring`].
///
/// Over Q the entries are integers; every rational matrix is a scalar multiple of one.
#[derive(Clone, Debug)]
pub struct Matrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    store: Store,
}

impl Matrix {
    pub fn zeros(ring: Ring, rows: usize, cols: usize) -> Matrix {
        Matrix { ring, rows, cols, store: Store::Sparse(vec![Vec::new(); cols]) }
    }

    pub fn identity(ring: Ring, n: usize) -> Matrix {
        Matrix::from_columns(ring, n, (0..n).map(|i| vec![(i, Int::one())]).collect())
    }

    /// Build from column lists; entries are reduced, duplicates summed, zeros dropped.
    pub fn from_columns(ring: Ring, rows: usize, cols: Vec<Vec<(usize, Int)>>) -> Matrix {
        let ncols = cols.len();
        let cols = cols
            .into_iter()
            .map(|mut c| {
                c.sort_by_key(|e| e.0);
                let mut out: Vec<(usize, Int)> = Vec::with_capacity(c.len());
                for (r, v) in c {
                    assert!(r < rows, "row index {r} out of range {rows}");
                    match out.last_mut() {
                        Some(last) if last.0 == r => last.1 += v,
                        _ => out.push((r, v)),
                    }
                }
                out.into_iter()
                    .map(|(r, v)| (r, ring.reduce(v)))
                    .filter(|(_, v)| !v.is_zero())
                    .collect()
            })
            .collect();
        Matrix { ring, rows, cols: ncols, store: Store::Sparse(cols) }.settle()
    }

    pub fn from_triplets(
        ring: Ring,
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, Int)>,
    ) -> Matrix {
        let mut cs = vec![Vec::new(); cols];
        for (r, c, v) in entries {
            cs[c].push((r, v));
        }
        Matrix::from_columns(ring, rows, cs)
    }

    pub fn from_rows(ring: Ring, rows: &[Vec<Int>]) -> Matrix {
        let nr = rows.len();
        let nc = rows.first().map_or(0, |r| r.len());
        let mut cs = vec![Vec::new(); nc];
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), nc, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    cs[j].push((i, v.clone()));
                }
            }
        }
        Matrix::from_columns(ring, nr, cs)
    }

    pub fn from_i64_rows(ring: Ring, rows: &[Vec<i64>]) -> Matrix {
        let rows: Vec<Vec<Int>> = rows.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect();
        Matrix::from_rows(ring, &rows)
    }

    pub fn column_vector(ring: Ring, v: &[Int]) -> Matrix {
        Matrix::from_columns(
            ring,
            v.len(),
            vec![v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()],
        )
    }

    fn settle(self) -> Matrix {
        let cells = self.rows * self.cols;
        if cells == 0 {
            return Matrix { store: Store::Sparse(vec![Vec::new(); self.cols]), ..self };
        }
        let dense_wanted = self.nnz() as f64 / cells as f64 >= density_threshold();
        match (&self.store, dense_wanted) {
            (Store::Sparse(cs), true) => {
                let mut d = vec![Int::zero(); cells];
                for (j, c) in cs.iter().enumerate() {
                    for (i, v) in c {
                        d[i * self.cols + j] = v.clone();
                    }
                }
                Matrix { store: Store::Dense(d), ..self }
            }
            (Store::Dense(_), false) => {
                let cs = self.columns();
                Matrix { store: Store::Sparse(cs), ..self }
            }
            _ => self,
        }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn is_dense(&self) -> bool {
        matches!(self.store, Store::Dense(_))
    }

    pub fn nnz(&self) -> usize {
        match &self.store {
            Store::Dense(d) => d.iter().filter(|v| !v.is_zero()).count(),
            Store::Sparse(cs) => cs.iter().map(|c| c.len()).sum(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.nnz() == 0
    }

    pub fn get(&self, r: usize, c: usize) -> Int {
        assert!(r < self.rows && c < self.cols);
        match &self.store {
            Store::Dense(d) => d[r * self.cols + c].clone(),
            Store::Sparse(cs) => match cs[c].binary_search_by_key(&r, |e| e.0) {
                Ok(k) => cs[c][k].1.clone(),
                Err(_) => Int::zero(),
            },
        }
    }

    /// Nonzero entries of column `c`, sorted by row.
    pub fn col(&self, c: usize) -> Vec<(usize, Int)> {
        match &self.store {
            Store::Dense(d) => (0..self.rows)
                .filter_map(|r| {
                    let v = &d[r * self.cols + c];
                    (!v.is_zero()).then(|| (r, v.clone()))
                })
                .collect(),
            Store::Sparse(cs) => cs[c].clone(),
        }
    }

    pub fn columns(&self) -> Vec<Vec<(usize, Int)>> {
        match &self.store {
            Store::Sparse(cs) => cs.clone(),
            Store::Dense(_) => (0..self.cols).map(|c| self.col(c)).collect(),
        }
    }

    /// Nonzero entries of every row, sorted by column.
    pub fn row_lists(&self) -> Vec<Vec<(usize, Int)>> {
        let mut rs = vec![Vec::new(); self.rows];
        for (j, c) in self.columns().into_iter().enumerate() {
            for (i, v) in c {
                rs[i].push((j, v));
            }
        }
        rs
    }

    pub fn to_dense_rows(&self) -> Vec<Vec<Int>> {
        let mut out = vec![vec![Int::zero(); self.cols]; self.rows];
        for (j, c) in self.columns().into_iter().enumerate() {
            for (i, v) in c {
                out[i][j] = v;
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_columns(self.ring, self.cols, self.row_lists())
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let a = self.columns();
        let mut acc = vec![Int::zero(); self.rows];
        let mut touched = vec![false; self.rows];
        let mut out = Vec::with_capacity(other.cols);
        for bc in other.columns() {
            let mut idx = Vec::new();
            for (k, bv) in &bc {
                for (i, av) in &a[*k] {
                    if !touched[*i] {
                        touched[*i] = true;
                        idx.push(*i);
                    }
                    acc[*i] += av * bv;
                }
            }
            let mut col = Vec::with_capacity(idx.len());
            for i in idx {
                touched[i] = false;
                let v = std::mem::take(&mut acc[i]);
                col.push((i, v));
            }
            out.push(col);
        }
        Matrix::from_columns(self.ring, self.rows, out)
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let cs = self
            .columns()
            .into_iter()
            .zip(other.columns())
            .map(|(mut a, b)| {
                a.extend(b);
                a
            })
            .collect();
        Matrix::from_columns(self.ring, self.rows, cs)
    }

    pub fn scale(&self, s: &Int) -> Matrix {
        let cs = self
            .columns()
            .into_iter()
            .map(|c| c.into_iter().map(|(i, v)| (i, v * s)).collect())
            .collect();
        Matrix::from_columns(self.ring, self.rows, cs)
    }

    pub fn neg(&self) -> Matrix {
        self.scale(&Int::from(-1))
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.add(&other.neg())
    }

    /// Kronecker product with row/column index (i, k) ↦ i·rows(b) + k.
    pub fn kron(&self, b: &Matrix) -> Matrix {
        let ac = self.columns();
        let bc = b.columns();
        let mut cs = Vec::with_capacity(self.cols * b.cols);
        for ca in &ac {
            for cb in &bc {
                let mut c = Vec::with_capacity(ca.len() * cb.len());
                for (i, x) in ca {
                    for (k, y) in cb {
                        c.push((i * b.rows + k, x * y));
                    }
                }
                cs.push(c);
            }
        }
        Matrix::from_columns(self.ring, self.rows * b.rows, cs)
    }

    pub fn hstack(parts: &[&Matrix]) -> Matrix {
        let ring = parts[0].ring;
        let rows = parts[0].rows;
        let mut cs = Vec::new();
        for p in parts {
            assert_eq!(p.rows, rows);
            cs.extend(p.columns());
        }
        Matrix::from_columns(ring, rows, cs)
    }

    pub fn vstack(parts: &[&Matrix]) -> Matrix {
        let ring = parts[0].ring;
        let cols = parts[0].cols;
        let mut cs = vec![Vec::new(); cols];
        let mut off = 0;
        for p in parts {
            assert_eq!(p.cols, cols);
            for (j, c) in p.columns().into_iter().enumerate() {
                cs[j].extend(c.into_iter().map(|(i, v)| (i + off, v)));
            }
            off += p.rows;
        }
        Matrix::from_columns(ring, off, cs)
    }

    pub fn block_diag(parts: &[&Matrix], ring: Ring) -> Matrix {
        let rows: usize = parts.iter().map(|p| p.rows).sum();
        let mut cs = Vec::new();
        let mut off = 0;
        for p in parts {
            for c in p.columns() {
                cs.push(c.into_iter().map(|(i, v)| (i + off, v)).collect());
            }
            off += p.rows;
        }
        Matrix::from_columns(ring, rows, cs)
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        let cs = idx.iter().map(|&j| self.col(j)).collect();
        Matrix::from_columns(self.ring, self.rows, cs)
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut pos = vec![usize::MAX; self.rows];
        for (k, &i) in idx.iter().enumerate() {
            pos[i] = k;
        }
        let cs = self
            .columns()
            .into_iter()
            .map(|c| c.into_iter().filter(|(i, _)| pos[*i] != usize::MAX).map(|(i, v)| (pos[i], v)).collect())
            .collect();
        Matrix::from_columns(self.ring, idx.len(), cs)
    }

    /// Same entries read in another ring (e.g. Z → F_p reduction).
    pub fn change_ring(&self, ring: Ring) -> Matrix {
        Matrix::from_columns(ring, self.rows, self.columns())
    }

    /// Entries mapped through `f` (results are reduced into the ring).
    pub fn map_entries(&self, f: impl Fn(&Int) -> Int) -> Matrix {
        let cs = self
            .columns()
            .into_iter()
            .map(|c| c.into_iter().map(|(i, v)| (i, f(&v))).collect())
            .collect();
        Matrix::from_columns(self.ring, self.rows, cs)
    }
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Matrix) -> bool {
        self.ring == other.ring
            && self.rows == other.rows
            && self.cols == other.cols
            && self.columns() == other.columns()
    }
}
impl Eq for Matrix {}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.to_dense_rows() {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}
