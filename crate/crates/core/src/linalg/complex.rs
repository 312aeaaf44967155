//! Bounded chain complexes of free modules and their homology.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};

use super::hermite::{rank, smith_factors};
use super::matrix::Matrix;
use super::ring::{Int, Ring};

/// Homological complex `d_q: C_q → C_{q−1}` with finite support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplexData {
    pub ring: Ring,
    pub ranks: BTreeMap<i64, usize>,
    /// `differentials[q]` has shape `rank(q−1) × rank(q)`; absent entries are zero.
    pub differentials: BTreeMap<i64, Matrix>,
}

impl ChainComplexData {
    pub fn new(ring: Ring) -> ChainComplexData {
        ChainComplexData { ring, ranks: BTreeMap::new(), differentials: BTreeMap::new() }
    }

    pub fn rank(&self, q: i64) -> usize {
        self.ranks.get(&q).copied().unwrap_or(0)
    }

    /// The differential out of degree q, materialized as zero when absent.
    pub fn differential(&self, q: i64) -> Matrix {
        self.differentials
            .get(&q)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.ring, self.rank(q - 1), self.rank(q)))
    }

    pub fn set_rank(&mut self, q: i64, r: usize) {
        if r == 0 {
            self.ranks.remove(&q);
        } else {
            self.ranks.insert(q, r);
        }
    }

    pub fn set_differential(&mut self, q: i64, d: Matrix) {
        assert_eq!((d.rows(), d.cols()), (self.rank(q - 1), self.rank(q)), "differential shape at degree {q}");
        if d.is_zero() {
            self.differentials.remove(&q);
        } else {
            self.differentials.insert(q, d);
        }
    }

    /// Degrees carrying a nonzero module.
    pub fn support(&self) -> Option<(i64, i64)> {
        Some((*self.ranks.keys().next()?, *self.ranks.keys().next_back()?))
    }

    /// Whether every composite `d_q ∘ d_{q+1}` vanishes.
    pub fn is_complex(&self) -> bool {
        self.differentials.keys().all(|&q| {
            let a = self.differential(q);
            let b = self.differential(q + 1);
            a.mul(&b).is_zero()
        })
    }

    /// Same integer matrices read over another ring.
    pub fn change_ring(&self, ring: Ring) -> ChainComplexData {
        ChainComplexData {
            ring,
            ranks: self.ranks.clone(),
            differentials: self.differentials.iter().map(|(q, d)| (*q, d.change_ring(ring))).filter(|(_, d)| !d.is_zero()).collect(),
        }
    }

    /// Cochain view: degree q here becomes degree −q.
    pub fn from_cochain(ring: Ring, ranks: &BTreeMap<i64, usize>, up: &BTreeMap<i64, Matrix>) -> ChainComplexData {
        let mut c = ChainComplexData::new(ring);
        for (q, r) in ranks {
            c.set_rank(-q, *r);
        }
        for (q, d) in up {
            c.set_differential(-q, d.clone());
        }
        c
    }

    pub fn homology(&self, q: i64) -> Homology {
        homology(self, q)
    }

    pub fn homology_all(&self) -> GradedModule {
        let mut g = GradedModule::new(self.ring);
        let Some((lo, hi)) = self.support() else { return g };
        let mut cache: BTreeMap<i64, (usize, Vec<Int>)> = BTreeMap::new();
        for q in lo..=hi + 1 {
            cache.insert(q, differential_data(self, q));
        }
        for q in lo..=hi {
            let (rq, _) = &cache[&q];
            let (rq1, f1) = &cache[&(q + 1)];
            let free = self.rank(q) - rq - rq1;
            g.set(q, free, torsion_of(self.ring, f1));
        }
        g
    }
}

fn differential_data(c: &ChainComplexData, q: i64) -> (usize, Vec<Int>) {
    match c.differentials.get(&q) {
        None => (0, Vec::new()),
        Some(d) => match c.ring {
            Ring::Integers => {
                let f = smith_factors(d);
                (f.len(), f)
            }
            _ => (rank(d), Vec::new()),
        },
    }
}

fn torsion_of(ring: Ring, factors: &[Int]) -> Vec<Int> {
    if ring != Ring::Integers {
        return Vec::new();
    }
    let mut t: Vec<Int> = factors.iter().filter(|f| !f.is_one()).cloned().collect();
    t.sort();
    t
}

/// One homology group: free rank plus torsion invariant factors.
#[derive(Clone, Debug, PartialEq, Eq, Default, PartialOrd, Ord)]
pub struct Homology {
    pub free_rank: usize,
    pub torsion: Vec<Int>,
}

impl Homology {
    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for Homology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 { "k".to_string() } else { format!("k^{}", self.free_rank) });
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

pub fn homology(c: &ChainComplexData, q: i64) -> Homology {
    let (rq, _) = differential_data(c, q);
    let (rq1, f1) = differential_data(c, q + 1);
    Homology { free_rank: c.rank(q) - rq - rq1, torsion: torsion_of(c.ring, &f1) }
}

/// Degree-indexed homology data; only nonzero degrees are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedModule {
    pub ring: Ring,
    pub degrees: BTreeMap<i64, Homology>,
}

fn normalize_chain(mut t: Vec<Int>) -> Vec<Int> {
    // Re-derive a divisibility chain from arbitrary cyclic factors via prime-power regrouping.
    t.retain(|x| !x.is_one() && !x.is_zero());
    let mut pp: BTreeMap<Int, Vec<Int>> = BTreeMap::new();
    for x in t {
        for (p, e) in factorize(&x) {
            pp.entry(p.clone()).or_default().push(num_traits::pow(p, e));
        }
    }
    let len = pp.values().map(|v| v.len()).max().unwrap_or(0);
    let mut chain = vec![Int::one(); len];
    for (_, mut v) in pp {
        v.sort();
        let off = len - v.len();
        for (i, q) in v.into_iter().enumerate() {
            chain[off + i] *= q;
        }
    }
    chain
}

/// Prime factorization by trial division (torsion orders are small).
pub fn factorize(n: &Int) -> Vec<(Int, usize)> {
    let mut n = n.clone();
    if n < Int::zero() {
        n = -n;
    }
    let mut out = Vec::new();
    let mut p = Int::from(2);
    while &p * &p <= n {
        let mut e = 0;
        while n.is_multiple_of(&p) {
            n /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
        p += 1;
    }
    if n > Int::one() {
        out.push((n, 1));
    }
    out
}

impl GradedModule {
    pub fn new(ring: Ring) -> GradedModule {
        GradedModule { ring, degrees: BTreeMap::new() }
    }

    /// Set degree q; torsion is normalized into a divisibility chain and dropped over fields.
    pub fn set(&mut self, q: i64, free_rank: usize, torsion: Vec<Int>) {
        let torsion = if self.ring == Ring::Integers { normalize_chain(torsion) } else { Vec::new() };
        let h = Homology { free_rank, torsion };
        if h.is_zero() {
            self.degrees.remove(&q);
        } else {
            self.degrees.insert(q, h);
        }
    }

    pub fn get(&self, q: i64) -> Homology {
        self.degrees.get(&q).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.degrees.is_empty()
    }

    /// Total free rank over all degrees.
    pub fn total_rank(&self) -> usize {
        self.degrees.values().map(|h| h.free_rank).sum()
    }

    /// Regrade by an arbitrary injective degree map (e.g. q ↦ nd − q).
    pub fn regrade(&self, f: impl Fn(i64) -> i64) -> GradedModule {
        GradedModule { ring: self.ring, degrees: self.degrees.iter().map(|(q, h)| (f(*q), h.clone())).collect() }
    }

    pub fn shift(&self, k: i64) -> GradedModule {
        self.regrade(|q| q + k)
    }

    /// The p-primary part of the torsion (free part dropped).
    pub fn p_primary(&self, p: u64) -> GradedModule {
        let mut g = GradedModule::new(self.ring);
        let pi = Int::from(p);
        for (q, h) in &self.degrees {
            let t: Vec<Int> = h
                .torsion
                .iter()
                .map(|x| {
                    let mut y = Int::one();
                    let mut x = x.clone();
                    while x.is_multiple_of(&pi) {
                        x /= &pi;
                        y *= &pi;
                    }
                    y
                })
                .collect();
            g.set(*q, 0, t);
        }
        g
    }

    /// Dimensions of homology of C ⊗ F_p from integral data (universal coefficients).
    pub fn base_change_fp(&self, p: u64) -> GradedModule {
        assert_eq!(self.ring, Ring::Integers);
        let pi = Int::from(p);
        let count = |h: &Homology| h.torsion.iter().filter(|x| x.is_multiple_of(&pi)).count();
        let mut g = GradedModule::new(Ring::PrimeField(p));
        let mut qs: Vec<i64> = self.degrees.keys().copied().collect();
        qs.extend(self.degrees.keys().map(|q| q + 1));
        qs.sort_unstable();
        qs.dedup();
        for q in qs {
            let dim = self.get(q).free_rank + count(&self.get(q)) + count(&self.get(q - 1));
            g.set(q, dim, Vec::new());
        }
        g
    }

    /// Rational dimensions.
    pub fn rationalize(&self) -> GradedModule {
        let mut g = GradedModule::new(Ring::Rationals);
        for (q, h) in &self.degrees {
            g.set(*q, h.free_rank, Vec::new());
        }
        g
    }
}

impl fmt::Display for GradedModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degrees.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.degrees.iter().map(|(q, h)| format!("{q}: {h}")).collect();
        write!(f, "{}", parts.join(", "))
    }
}
