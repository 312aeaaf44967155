//! The normalized multicomplex of F(K(n₁) ⊠ ⋯ ⊠ K(n_k) ⊗ k^m) on nondegenerate monomial labels.
//!
//! An atom is a basis vector of K(n₁)_{q₁} ⊗ ⋯ ⊗ k^m: one jump mask per direction and a color.
//! Faces send atoms to atoms or zero, so every monomial functor acts by a signed partial
//! permutation with multiplicities. Degenerate labels span D, and C/D is the normalized complex.

use std::collections::{BTreeMap, HashMap};

use super::shape::{Atom, Shape};
use crate::combinatorics::{permutations, perm_sign, subsets};
use crate::error::{Error, Result};
use crate::linalg::{image_basis, solve, ChainComplexData, Int, Matrix, Ring};

pub const MAX_DIRECTIONS: usize = 6;
pub const MAX_POSITIONS: usize = 16;
const COLOR_SHIFT: u32 = 96;

pub fn mask(a: Atom, r: usize) -> u32 {
    ((a >> (16 * r)) & 0xffff) as u32
}

pub fn color(a: Atom) -> usize {
    ((a >> COLOR_SHIFT) & 0xffff) as usize
}

fn with_mask(a: Atom, r: usize, m: u32) -> Atom {
    (a & !(0xffffu128 << (16 * r))) | ((m as u128) << (16 * r))
}

/// Face d_i on a jump mask at level q (positions 1..q are bits 0..q−1).
pub fn face_mask(m: u32, q: usize, i: usize) -> Option<u32> {
    if i == 0 {
        if m & 1 != 0 {
            return None;
        }
        return Some(m >> 1);
    }
    if i == q {
        if m & (1 << (q - 1)) != 0 {
            return None;
        }
        return Some(m);
    }
    let a = m & (1 << (i - 1)) != 0;
    let b = m & (1 << i) != 0;
    if a && b {
        return None;
    }
    let low = m & ((1 << (i - 1)) - 1);
    let high = (m >> (i + 1)) << i;
    Some(low | high | (u32::from(a || b) << (i - 1)))
}

/// Size guard for the enumeration.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    pub limit: u128,
    pub used: u128,
}

impl Budget {
    pub fn new(limit: u128) -> Budget {
        Budget { limit, used: 0 }
    }

    fn charge(&mut self, n: u128) -> Result<()> {
        self.used += n;
        if self.used > self.limit {
            return Err(Error::BudgetExceeded { estimate: self.used, budget: self.limit });
        }
        Ok(())
    }
}

/// Geometry of the model: sphere dimensions per direction and the color multiset.
#[derive(Clone, Debug)]
pub struct Model {
    pub dirs: Vec<usize>,
    /// Number of atoms of each color in every label.
    pub colors: Vec<usize>,
    pub width: usize,
}

pub type MultiDegree = Vec<usize>;

/// Labels of one multidegree with reverse lookup.
#[derive(Clone, Debug, Default)]
pub struct LabelSet {
    pub labels: Vec<Vec<Atom>>,
    pub index: HashMap<Vec<Atom>, usize>,
}

impl LabelSet {
    fn from_labels(mut labels: Vec<Vec<Atom>>) -> LabelSet {
        labels.sort();
        labels.dedup();
        let index = labels.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();
        LabelSet { labels, index }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

fn full(q: usize) -> u32 {
    if q == 0 {
        0
    } else {
        (1u32 << q) - 1
    }
}

fn lowest(m: u32) -> u32 {
    if m == 0 {
        u32::MAX
    } else {
        m.trailing_zeros()
    }
}

impl Model {
    pub fn new(dirs: Vec<usize>, colors: Vec<usize>) -> Result<Model> {
        if dirs.is_empty() || dirs.len() > MAX_DIRECTIONS || dirs.iter().any(|&n| n == 0) {
            return Err(Error::InvalidArguments(format!("unsupported sphere directions {dirs:?}")));
        }
        let width = colors.iter().sum();
        for &n in &dirs {
            if n * width > MAX_POSITIONS {
                return Err(Error::InvalidArguments(format!(
                    "height {n} with {width} atoms exceeds {MAX_POSITIONS} simplicial positions; use more directions"
                )));
            }
        }
        Ok(Model { dirs, colors, width })
    }

    /// All multidegrees that can carry nondegenerate labels.
    pub fn multidegrees(&self) -> Vec<MultiDegree> {
        let mut out = vec![Vec::new()];
        for &n in &self.dirs {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..=n * self.width).map(move |q| {
                        let mut w = v.clone();
                        w.push(q);
                        w
                    })
                })
                .collect();
        }
        out
    }

    fn atoms(&self, qs: &[usize]) -> Vec<Atom> {
        let mut out: Vec<Atom> = Vec::new();
        let mut partial: Vec<Atom> = vec![0];
        for (r, (&q, &n)) in qs.iter().zip(&self.dirs).enumerate() {
            let masks: Vec<u32> = subsets(q, n).into_iter().map(|s| s.iter().fold(0u32, |a, &b| a | (1 << b))).collect();
            partial = partial.iter().flat_map(|&a| masks.iter().map(move |&m| with_mask(a, r, m))).collect();
        }
        for (c, &cnt) in self.colors.iter().enumerate() {
            if cnt > 0 {
                out.extend(partial.iter().map(|&a| a | ((c as u128) << COLOR_SHIFT)));
            }
        }
        out.sort_by_key(|&a| (lowest(mask(a, 0)), a));
        out
    }

    /// Atom multisets of the right color content covering every position in every direction.
    fn contents(&self, qs: &[usize], budget: &mut Budget) -> Result<Vec<Vec<Atom>>> {
        let atoms = self.atoms(qs);
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(self.width);
        let mut covered = vec![0u32; self.dirs.len()];
        let mut left = self.colors.clone();
        self.rec(qs, &atoms, 0, &mut cur, &mut covered, &mut left, &mut out, budget)?;
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn rec(
        &self,
        qs: &[usize],
        atoms: &[Atom],
        start: usize,
        cur: &mut Vec<Atom>,
        covered: &mut Vec<u32>,
        left: &mut Vec<usize>,
        out: &mut Vec<Vec<Atom>>,
        budget: &mut Budget,
    ) -> Result<()> {
        let remaining = self.width - cur.len();
        for (r, &q) in qs.iter().enumerate() {
            let missing = (full(q) & !covered[r]).count_ones() as usize;
            if missing > remaining * self.dirs[r] {
                return Ok(());
            }
        }
        if remaining == 0 {
            budget.charge(1)?;
            out.push(cur.clone());
            return Ok(());
        }
        let gap = lowest(full(qs[0]) & !covered[0]);
        for i in start..atoms.len() {
            let a = atoms[i];
            if gap != u32::MAX && lowest(mask(a, 0)) > gap {
                break;
            }
            let c = color(a);
            if left[c] == 0 {
                continue;
            }
            left[c] -= 1;
            let saved = covered.clone();
            for r in 0..qs.len() {
                covered[r] |= mask(a, r);
            }
            cur.push(a);
            self.rec(qs, atoms, i, cur, covered, left, out, budget)?;
            cur.pop();
            *covered = saved;
            left[c] += 1;
        }
        Ok(())
    }

    pub fn nondegenerate(&self, qs: &[usize], label: &[Atom]) -> bool {
        (0..qs.len()).all(|r| label.iter().fold(0u32, |acc, &a| acc | mask(a, r)) == full(qs[r]))
    }

    /// Nondegenerate canonical labels of `shape` in multidegree `qs`.
    pub fn labels(&self, shape: &Shape, qs: &[usize], budget: &mut Budget) -> Result<LabelSet> {
        let mut labels = Vec::new();
        for content in self.contents(qs, budget)? {
            let mut w = content;
            w.sort_unstable();
            loop {
                if let Some(l) = shape.canonical(&w) {
                    labels.push(l);
                }
                if !next_permutation(&mut w) {
                    break;
                }
            }
        }
        let set = LabelSet::from_labels(labels);
        budget.charge(set.len() as u128)?;
        Ok(set)
    }

    /// Image of a label under face i in direction r, as (target label, coefficient).
    pub fn face(&self, shape: &Shape, label: &[Atom], r: usize, q: usize, i: usize, modulus: Option<u64>) -> Option<(Vec<Atom>, i128)> {
        let mut tgt = Vec::with_capacity(label.len());
        for &a in label {
            tgt.push(with_mask(a, r, face_mask(mask(a, r), q, i)?));
        }
        shape.apply(label, &tgt, modulus)
    }
}

/// Lexicographic successor; false when `w` was the last permutation.
pub fn next_permutation<T: Ord>(w: &mut [T]) -> bool {
    let n = w.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (1..n).rev().find(|&i| w[i - 1] < w[i]) else { return false };
    let j = (i..n).rev().find(|&j| w[j] > w[i - 1]).unwrap();
    w.swap(i - 1, j);
    w[i..].reverse();
    true
}

/// A total complex assembled from a multicomplex, with the bookkeeping needed for chain maps.
pub struct Assembled {
    pub complex: ChainComplexData,
    /// For each total degree, the multidegrees in order with their row offsets.
    pub layout: BTreeMap<usize, Vec<(MultiDegree, usize)>>,
    pub labels: HashMap<MultiDegree, LabelSet>,
}

fn sign_of(x: i128) -> i64 {
    if x % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Total complex of the normalized multicomplex with the sign (−1)^{q₁+⋯+q_{r−1}} on the r-th differential.
pub fn assemble(model: &Model, shape: &Shape, ring: Ring, budget: &mut Budget) -> Result<Assembled> {
    let modulus = match ring {
        Ring::PrimeField(p) => Some(p),
        _ => None,
    };
    let mut labels: HashMap<MultiDegree, LabelSet> = HashMap::new();
    for qs in model.multidegrees() {
        let set = model.labels(shape, &qs, budget)?;
        if !set.is_empty() {
            labels.insert(qs, set);
        }
    }
    let mut layout: BTreeMap<usize, Vec<(MultiDegree, usize)>> = BTreeMap::new();
    let mut keys: Vec<&MultiDegree> = labels.keys().collect();
    keys.sort();
    let mut totals: BTreeMap<usize, usize> = BTreeMap::new();
    for qs in keys {
        let t: usize = qs.iter().sum();
        let off = totals.entry(t).or_insert(0);
        layout.entry(t).or_default().push((qs.clone(), *off));
        *off += labels[qs].len();
    }
    let mut complex = ChainComplexData::new(ring);
    for (&t, &r) in &totals {
        complex.set_rank(t as i64, r);
    }
    for (&t, blocks) in &layout {
        if t == 0 || !totals.contains_key(&(t - 1)) {
            continue;
        }
        let tgt_layout: HashMap<&MultiDegree, usize> = layout[&(t - 1)].iter().map(|(q, o)| (q, *o)).collect();
        let mut trip: Vec<(usize, usize, Int)> = Vec::new();
        for (qs, off) in blocks {
            let src = &labels[qs];
            let mut prefix = 0usize;
            for r in 0..qs.len() {
                let q = qs[r];
                let outer = sign_of(prefix as i128);
                prefix += q;
                if q == 0 {
                    continue;
                }
                let mut tq = qs.clone();
                tq[r] -= 1;
                let (Some(tset), Some(&toff)) = (labels.get(&tq), tgt_layout.get(&tq)) else { continue };
                for (j, l) in src.labels.iter().enumerate() {
                    let mut acc: HashMap<usize, i128> = HashMap::new();
                    for i in 0..=q {
                        if let Some((img, c)) = model.face(shape, l, r, q, i, modulus) {
                            if let Some(&row) = tset.index.get(&img) {
                                *acc.entry(row).or_insert(0) += c * sign_of(i as i128) as i128 * outer as i128;
                            }
                        }
                    }
                    for (row, c) in acc {
                        if c != 0 {
                            trip.push((toff + row, off + j, Int::from(c)));
                        }
                    }
                }
            }
        }
        complex.set_differential(t as i64, Matrix::from_triplets(ring, totals[&(t - 1)], totals[&t], trip));
    }
    Ok(Assembled { complex, layout, labels })
}

/// Expansion of one block of a generator map into words with signs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockKind {
    Wedge,
    Div,
    Sym,
}

fn expand(kind: BlockKind, block: &[Atom]) -> Vec<(Vec<Atom>, i64)> {
    match kind {
        BlockKind::Wedge => permutations(block.len())
            .into_iter()
            .map(|p| (p.iter().map(|&i| block[i]).collect(), perm_sign(&p)))
            .collect(),
        BlockKind::Div => {
            let mut w = block.to_vec();
            w.sort();
            let mut out = vec![(w.clone(), 1)];
            while next_permutation(&mut w) {
                out.push((w.clone(), 1));
            }
            out
        }
        BlockKind::Sym => panic!("no natural section of a symmetric power"),
    }
}

fn project(kind: BlockKind, w: &mut [Atom]) -> Option<i64> {
    match kind {
        BlockKind::Sym => {
            w.sort();
            Some(1)
        }
        BlockKind::Wedge => {
            let mut sign = 1;
            for i in 1..w.len() {
                let mut j = i;
                while j > 0 && w[j - 1] > w[j] {
                    w.swap(j - 1, j);
                    sign = -sign;
                    j -= 1;
                }
            }
            if w.windows(2).any(|p| p[0] == p[1]) {
                None
            } else {
                Some(sign)
            }
        }
        BlockKind::Div => panic!("no natural projection onto a divided power"),
    }
}

/// Generator map between two block-monomial functors, on words of atoms.
#[derive(Clone, Debug)]
pub struct GeneratorMap {
    pub src: Vec<(BlockKind, usize)>,
    pub sigma: Vec<usize>,
    pub tgt: Vec<(BlockKind, usize)>,
}

impl GeneratorMap {
    pub fn shape(blocks: &[(BlockKind, usize)]) -> Shape {
        let leaf = |k: BlockKind, d: usize| match k {
            _ if d == 1 => Shape::Leaf,
            BlockKind::Wedge => Shape::Wedge(d, Box::new(Shape::Leaf)),
            BlockKind::Div => Shape::Div(d, Box::new(Shape::Leaf)),
            BlockKind::Sym => Shape::Sym(d, Box::new(Shape::Leaf)),
        };
        Shape::Tensor(blocks.iter().map(|&(k, d)| leaf(k, d)).collect())
    }

    /// Image of a source label as (target label, coefficient) pairs.
    pub fn image(&self, label: &[Atom]) -> Vec<(Vec<Atom>, i64)> {
        let mut words: Vec<(Vec<Atom>, i64)> = vec![(Vec::new(), 1)];
        let mut pos = 0;
        for &(k, d) in &self.src {
            let ex = expand(k, &label[pos..pos + d]);
            pos += d;
            words = words
                .iter()
                .flat_map(|(w, c)| {
                    ex.iter().map(move |(x, e)| {
                        let mut v = w.clone();
                        v.extend_from_slice(x);
                        (v, c * e)
                    })
                })
                .collect();
        }
        let n = label.len();
        let mut acc: HashMap<Vec<Atom>, i64> = HashMap::new();
        for (v, c) in words {
            let mut w = vec![0; n];
            for k in 0..n {
                w[self.sigma[k] - 1] = v[k];
            }
            let mut coef = c;
            let mut pos = 0;
            let mut ok = true;
            for &(k, d) in &self.tgt {
                match project(k, &mut w[pos..pos + d]) {
                    Some(s) => coef *= s,
                    None => {
                        ok = false;
                        break;
                    }
                }
                pos += d;
            }
            if ok {
                *acc.entry(w).or_insert(0) += coef;
            }
        }
        let mut out: Vec<(Vec<Atom>, i64)> = acc.into_iter().filter(|x| x.1 != 0).collect();
        out.sort();
        out
    }
}

/// Subcomplex of `tgt` spanned by the image of the generator chain map from `src`.
pub fn image_complex(src: &Assembled, tgt: &Assembled, g: &GeneratorMap, ring: Ring) -> Result<ChainComplexData> {
    let mut bases: BTreeMap<usize, Matrix> = BTreeMap::new();
    for (&t, blocks) in &tgt.layout {
        let rows = tgt.complex.rank(t as i64);
        let tl: HashMap<&MultiDegree, usize> = blocks.iter().map(|(q, o)| (q, *o)).collect();
        let mut trip = Vec::new();
        let mut cols = 0;
        if let Some(sblocks) = src.layout.get(&t) {
            for (qs, soff) in sblocks {
                let Some(&toff) = tl.get(qs) else { continue };
                let tset = &tgt.labels[qs];
                for (j, l) in src.labels[qs].labels.iter().enumerate() {
                    for (img, c) in g.image(l) {
                        let row = tset.index.get(&img).ok_or_else(|| Error::Internal("generator image outside target labels".into()))?;
                        trip.push((toff + row, soff + j, Int::from(c)));
                    }
                }
            }
            cols = src.complex.rank(t as i64);
        }
        let m = Matrix::from_triplets(ring, rows, cols, trip);
        bases.insert(t, image_basis(&m));
    }
    let mut out = ChainComplexData::new(ring);
    for (&t, b) in &bases {
        out.set_rank(t as i64, b.cols());
    }
    for (&t, b) in &bases {
        if t == 0 || b.cols() == 0 {
            continue;
        }
        let Some(lower) = bases.get(&(t - 1)) else { continue };
        if lower.cols() == 0 {
            continue;
        }
        let img = tgt.complex.differential(t as i64).mul(b);
        let s = solve(lower, &img).map_err(|e| Error::Internal(format!("image is not a subcomplex: {e}")))?;
        out.set_differential(t as i64, s.x);
    }
    Ok(out)
}
