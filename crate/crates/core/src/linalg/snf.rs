//! Smith normal form.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::Matrix;
use super::ring::{Int, Ring};
use crate::error::{Error, Result};

/// Smith decomposition `U·M·V = diag(factors, 0, …)`.
#[derive(Clone, Debug)]
pub struct Snf {
    /// Nonzero diagonal entries, each dividing the next.
    pub factors: Vec<Int>,
    pub u: Matrix,
    pub v: Matrix,
}

struct Work {
    a: Vec<Vec<Int>>,
    u: Option<Vec<Vec<Int>>>,
    v: Option<Vec<Vec<Int>>>,
    r: usize,
    c: usize,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            self.a.swap(i, j);
            if let Some(u) = &mut self.u {
                u.swap(i, j);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            for row in &mut self.a {
                row.swap(i, j);
            }
            if let Some(v) = &mut self.v {
                for row in v {
                    row.swap(i, j);
                }
            }
        }
    }

    /// row_dst += q·row_src
    fn add_row(&mut self, dst: usize, src: usize, q: &Int) {
        let (s, d) = pair(&mut self.a, src, dst);
        for (x, y) in d.iter_mut().zip(s.iter()) {
            if !y.is_zero() {
                *x += q * y;
            }
        }
        if let Some(u) = &mut self.u {
            let (s, d) = pair(u, src, dst);
            for (x, y) in d.iter_mut().zip(s.iter()) {
                if !y.is_zero() {
                    *x += q * y;
                }
            }
        }
    }

    /// col_dst += q·col_src
    fn add_col(&mut self, dst: usize, src: usize, q: &Int) {
        for row in &mut self.a {
            if !row[src].is_zero() {
                let t = q * &row[src];
                row[dst] += t;
            }
        }
        if let Some(v) = &mut self.v {
            for row in v {
                if !row[src].is_zero() {
                    let t = q * &row[src];
                    row[dst] += t;
                }
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.a[i] {
            *x = -std::mem::take(x);
        }
        if let Some(u) = &mut self.u {
            for x in &mut u[i] {
                *x = -std::mem::take(x);
            }
        }
    }

    /// Smallest nonzero |entry| in the trailing block, ties broken by (row, col).
    fn pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, Int)> = None;
        for i in t..self.r {
            for j in t..self.c {
                let x = &self.a[i][j];
                if x.is_zero() {
                    continue;
                }
                let ax = x.abs();
                if best.as_ref().map_or(true, |b| ax < b.2) {
                    best = Some((i, j, ax));
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    fn run(&mut self) -> Vec<Int> {
        let mut factors = Vec::new();
        let mut t = 0;
        while t < self.r.min(self.c) {
            let Some((pi, pj)) = self.pivot(t) else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let mut dirty = false;
                for i in t + 1..self.r {
                    if !self.a[i][t].is_zero() {
                        let q = -self.a[i][t].div_floor(&self.a[t][t]);
                        self.add_row(i, t, &q);
                        dirty |= !self.a[i][t].is_zero();
                    }
                }
                for j in t + 1..self.c {
                    if !self.a[t][j].is_zero() {
                        let q = -self.a[t][j].div_floor(&self.a[t][t]);
                        self.add_col(j, t, &q);
                        dirty |= !self.a[t][j].is_zero();
                    }
                }
                if dirty {
                    let (pi, pj) = self.pivot(t).expect("nonzero block");
                    self.swap_rows(t, pi);
                    self.swap_cols(t, pj);
                    continue;
                }
                let p = self.a[t][t].clone();
                let bad = (t + 1..self.r).find(|&i| (t + 1..self.c).any(|j| !self.a[i][j].is_multiple_of(&p)));
                match bad {
                    Some(i) => self.add_row(t, i, &Int::one()),
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                self.negate_row(t);
            }
            factors.push(self.a[t][t].clone());
            t += 1;
        }
        factors
    }
}

fn pair<T>(v: &mut [T], src: usize, dst: usize) -> (&T, &mut T) {
    assert_ne!(src, dst);
    if src < dst {
        let (a, b) = v.split_at_mut(dst);
        (&a[src], &mut b[0])
    } else {
        let (a, b) = v.split_at_mut(src);
        (&b[0], &mut a[dst])
    }
}

fn identity_rows(n: usize) -> Vec<Vec<Int>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Int::one() } else { Int::zero() }).collect())
        .collect()
}

/// Smith normal form of an integer matrix with unimodular transforms.
pub fn smith_normal_form(m: &Matrix) -> Result<Snf> {
    if m.ring() != Ring::Integers {
        return Err(Error::UnsupportedRing(format!("Smith normal form needs Z, got {}", m.ring())));
    }
    let (r, c) = (m.rows(), m.cols());
    let mut w = Work { a: m.to_dense_rows(), u: Some(identity_rows(r)), v: Some(identity_rows(c)), r, c };
    let factors = w.run();
    Ok(Snf {
        factors,
        u: Matrix::from_rows(Ring::Integers, &w.u.unwrap()).resized(r, r),
        v: Matrix::from_rows(Ring::Integers, &w.v.unwrap()).resized(c, c),
    })
}

/// Nonzero invariant factors of a dense integer matrix, no transforms.
pub(crate) fn dense_factors(a: Vec<Vec<Int>>) -> Vec<Int> {
    let r = a.len();
    let c = a.first().map_or(0, |x| x.len());
    let mut w = Work { a, u: None, v: None, r, c };
    w.run()
}

impl Matrix {
    /// `from_rows` loses the shape of empty matrices; restore it.
    pub(crate) fn resized(self, rows: usize, cols: usize) -> Matrix {
        if self.rows() == rows && self.cols() == cols {
            self
        } else {
            assert!(self.is_zero());
            Matrix::zeros(self.ring(), rows, cols)
        }
    }
}
