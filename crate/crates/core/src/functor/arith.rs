use std::collections::HashMap;
use std::fmt::Debug;

use num_traits::{One, Pow, Zero};

use crate::linalg::{Int, Matrix, Ring};

/// Coefficient arithmetic for functor evaluation: plain ring scalars or polynomials over the ring.
pub trait Arith {
    type E: Clone + PartialEq + Debug;

    fn ring(&self) -> Ring;
    fn zero(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn from_int(&self, n: &Int) -> Self::E;
    /// The q-th power of every coefficient's argument, q a power of the characteristic.
    fn frobenius(&self, a: &Self::E, q: u64) -> Self::E;

    fn one(&self) -> Self::E {
        self.from_int(&Int::one())
    }

    fn scale_int(&self, a: &Self::E, n: &Int) -> Self::E {
        self.mul(a, &self.from_int(n))
    }
}

/// Ring scalars, reduced modulo p over prime fields.
#[derive(Clone, Copy, Debug)]
pub struct Scalars(pub Ring);

impl Arith for Scalars {
    type E = Int;

    fn ring(&self) -> Ring {
        self.0
    }
    fn zero(&self) -> Int {
        Int::zero()
    }
    fn is_zero(&self, a: &Int) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Int, b: &Int) -> Int {
        self.0.reduce(a + b)
    }
    fn mul(&self, a: &Int, b: &Int) -> Int {
        self.0.reduce(a * b)
    }
    fn from_int(&self, n: &Int) -> Int {
        self.0.reduce(n.clone())
    }
    fn frobenius(&self, a: &Int, q: u64) -> Int {
        match self.0 {
            Ring::PrimeField(p) => a.modpow(&Int::from(q), &Int::from(p)),
            _ => Pow::pow(a, q as u32),
        }
    }
}

/// Number of polynomial variables; exponents are stored in one byte each.
pub const MAX_VARS: usize = 16;

/// Packed exponent vector: byte i is the exponent of variable i.
pub type Monomial = u128;

pub fn monomial_var(i: usize) -> Monomial {
    assert!(i < MAX_VARS, "at most {MAX_VARS} polynomial variables");
    1u128 << (8 * i)
}

pub fn monomial_exponent(m: Monomial, i: usize) -> u32 {
    ((m >> (8 * i)) & 0xff) as u32
}

/// Sparse polynomial, terms sorted by monomial, no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly(pub Vec<(Monomial, Int)>);

impl Poly {
    pub fn var(i: usize) -> Poly {
        Poly(vec![(monomial_var(i), Int::one())])
    }

    pub fn terms(&self) -> &[(Monomial, Int)] {
        &self.0
    }

    /// Coefficient of the monomial `m`.
    pub fn coeff(&self, m: Monomial) -> Int {
        match self.0.binary_search_by(|t| t.0.cmp(&m)) {
            Ok(i) => self.0[i].1.clone(),
            Err(_) => Int::zero(),
        }
    }
}

/// Polynomials in up to [`MAX_VARS`] variables over a ring, for generic-matrix evaluation.
///
/// Total degrees stay below 256 because every entry is homogeneous of the functor degree.
#[derive(Clone, Copy, Debug)]
pub struct Polys(pub Ring);

impl Arith for Polys {
    type E = Poly;

    fn ring(&self) -> Ring {
        self.0
    }
    fn zero(&self) -> Poly {
        Poly::default()
    }
    fn is_zero(&self, a: &Poly) -> bool {
        a.0.is_empty()
    }
    fn add(&self, a: &Poly, b: &Poly) -> Poly {
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::with_capacity(a.0.len() + b.0.len());
        while i < a.0.len() || j < b.0.len() {
            if j == b.0.len() || (i < a.0.len() && a.0[i].0 < b.0[j].0) {
                out.push(a.0[i].clone());
                i += 1;
            } else if i == a.0.len() || b.0[j].0 < a.0[i].0 {
                out.push(b.0[j].clone());
                j += 1;
            } else {
                let c = self.0.reduce(&a.0[i].1 + &b.0[j].1);
                if !c.is_zero() {
                    out.push((a.0[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        Poly(out)
    }
    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        if a.0.is_empty() || b.0.is_empty() {
            return Poly::default();
        }
        let mut acc: HashMap<Monomial, Int> = HashMap::with_capacity(a.0.len() * b.0.len());
        for (ma, ca) in &a.0 {
            for (mb, cb) in &b.0 {
                *acc.entry(ma + mb).or_insert_with(Int::zero) += ca * cb;
            }
        }
        let mut out: Vec<(Monomial, Int)> = acc
            .into_iter()
            .map(|(m, c)| (m, self.0.reduce(c)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        out.sort_unstable_by(|x, y| x.0.cmp(&y.0));
        Poly(out)
    }
    fn from_int(&self, n: &Int) -> Poly {
        let c = self.0.reduce(n.clone());
        if c.is_zero() {
            Poly::default()
        } else {
            Poly(vec![(0, c)])
        }
    }
    fn frobenius(&self, a: &Poly, q: u64) -> Poly {
        let s = Scalars(self.0);
        let mut out: Vec<(Monomial, Int)> = a
            .0
            .iter()
            .map(|(m, c)| {
                let mut e: Monomial = 0;
                for i in 0..MAX_VARS {
                    let x = monomial_exponent(*m, i) as u64 * q;
                    assert!(x < 256, "exponent overflow in Frobenius twist");
                    e |= (x as u128) << (8 * i);
                }
                (e, s.frobenius(c, q))
            })
            .collect();
        out.sort_unstable_by(|x, y| x.0.cmp(&y.0));
        Poly(out)
    }
}

/// Column-sparse matrix over an [`Arith`] coefficient domain.
#[derive(Clone, Debug, PartialEq)]
pub struct GMat<E> {
    pub rows: usize,
    pub cols: Vec<Vec<(usize, E)>>,
}

impl<E: Clone + PartialEq + Debug> GMat<E> {
    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn from_matrix<A: Arith<E = E>>(ar: &A, m: &Matrix) -> GMat<E> {
        GMat {
            rows: m.rows(),
            cols: m
                .columns()
                .into_iter()
                .map(|c| c.into_iter().map(|(i, x)| (i, ar.from_int(&x))).filter(|(_, x)| !ar.is_zero(x)).collect())
                .collect(),
        }
    }

    pub fn identity<A: Arith<E = E>>(ar: &A, n: usize) -> GMat<E> {
        GMat { rows: n, cols: (0..n).map(|i| vec![(i, ar.one())]).collect() }
    }

    pub fn transpose(&self) -> GMat<E> {
        let mut cols: Vec<Vec<(usize, E)>> = vec![Vec::new(); self.rows];
        for (j, c) in self.cols.iter().enumerate() {
            for (i, x) in c {
                cols[*i].push((j, x.clone()));
            }
        }
        GMat { rows: self.cols.len(), cols }
    }

    pub fn map<A: Arith<E = E>>(&self, ar: &A, f: impl Fn(&E) -> E) -> GMat<E> {
        GMat {
            rows: self.rows,
            cols: self
                .cols
                .iter()
                .map(|c| c.iter().map(|(i, x)| (*i, f(x))).filter(|(_, x)| !ar.is_zero(x)).collect())
                .collect(),
        }
    }

    /// Entry (r, c) or zero.
    pub fn get<A: Arith<E = E>>(&self, ar: &A, r: usize, c: usize) -> E {
        self.cols[c].iter().find(|(i, _)| *i == r).map(|(_, x)| x.clone()).unwrap_or_else(|| ar.zero())
    }
}

/// Build a column from accumulated (row, value) pairs.
pub fn collect_column<A: Arith>(ar: &A, acc: HashMap<usize, A::E>) -> Vec<(usize, A::E)> {
    let mut v: Vec<(usize, A::E)> = acc.into_iter().filter(|(_, x)| !ar.is_zero(x)).collect();
    v.sort_unstable_by_key(|t| t.0);
    v
}

pub fn gmul<A: Arith>(ar: &A, a: &GMat<A::E>, b: &GMat<A::E>) -> GMat<A::E> {
    assert_eq!(a.ncols(), b.rows, "shape mismatch in product");
    let cols = b
        .cols
        .iter()
        .map(|bc| {
            let mut acc: HashMap<usize, A::E> = HashMap::new();
            for (k, bk) in bc {
                for (i, aik) in &a.cols[*k] {
                    let t = ar.mul(aik, bk);
                    match acc.get_mut(i) {
                        Some(v) => *v = ar.add(v, &t),
                        None => {
                            acc.insert(*i, t);
                        }
                    }
                }
            }
            collect_column(ar, acc)
        })
        .collect();
    GMat { rows: a.rows, cols }
}

/// Kronecker product; row index i·rows(b) + k.
pub fn gkron<A: Arith>(ar: &A, a: &GMat<A::E>, b: &GMat<A::E>) -> GMat<A::E> {
    let mut cols = Vec::with_capacity(a.ncols() * b.ncols());
    for ac in &a.cols {
        for bc in &b.cols {
            let mut c = Vec::with_capacity(ac.len() * bc.len());
            for (i, x) in ac {
                for (k, y) in bc {
                    let v = ar.mul(x, y);
                    if !ar.is_zero(&v) {
                        c.push((i * b.rows + k, v));
                    }
                }
            }
            cols.push(c);
        }
    }
    GMat { rows: a.rows * b.rows, cols }
}

/// Convert a scalar generic matrix back to a [`Matrix`].
pub fn to_matrix(ring: Ring, g: &GMat<Int>) -> Matrix {
    Matrix::from_columns(ring, g.rows, g.cols.clone())
}
