use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};

use crate::combinatorics::{basis, perm_sign, permutations, sigma_lambda, subsets, LabelKind, Partition};
use crate::error::{internal, Result};
use crate::linalg::{image_basis, left_inverse, Int, Matrix, Ring};

/// Ordered basis of a tensor product of monomial functors at rank m, with reverse lookup.
pub struct BlockBasis {
    pub kinds: Vec<(LabelKind, usize)>,
    pub factors: Vec<Vec<Vec<usize>>>,
    lookup: Vec<HashMap<Vec<usize>, usize>>,
}

impl BlockBasis {
    pub fn new(kinds: &[(LabelKind, usize)], m: usize) -> BlockBasis {
        let factors: Vec<Vec<Vec<usize>>> =
            kinds.iter().map(|&(k, d)| basis(k, d, m).into_iter().map(|l| l.data).collect()).collect();
        let lookup = factors
            .iter()
            .map(|f| f.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect())
            .collect();
        BlockBasis { kinds: kinds.to_vec(), factors, lookup }
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(|f| f.len()).product()
    }

    /// Block labels of basis vector `idx` (Kronecker order, last block fastest).
    pub fn labels(&self, mut idx: usize) -> Vec<&[usize]> {
        let mut out = vec![&[][..]; self.factors.len()];
        for (b, f) in self.factors.iter().enumerate().rev() {
            out[b] = &f[idx % f.len()];
            idx /= f.len();
        }
        out
    }

    pub fn index(&self, labels: &[Vec<usize>]) -> Option<usize> {
        let mut idx = 0;
        for (b, l) in labels.iter().enumerate() {
            idx = idx * self.factors[b].len() + *self.lookup[b].get(l)?;
        }
        Some(idx)
    }
}

/// Words of `⊗^d` (with coefficients) that a monomial basis vector embeds as.
fn expand_block(kind: LabelKind, label: &[usize]) -> Vec<(Vec<usize>, i64)> {
    match kind {
        LabelKind::TensorWord => vec![(label.to_vec(), 1)],
        LabelKind::Wedge => permutations(label.len())
            .into_iter()
            .map(|p| (p.iter().map(|&i| label[i]).collect(), perm_sign(&p)))
            .collect(),
        LabelKind::Div => {
            let mut seen: Vec<Vec<usize>> = permutations(label.len())
                .into_iter()
                .map(|p| p.iter().map(|&i| label[i]).collect())
                .collect();
            seen.sort();
            seen.dedup();
            seen.into_iter().map(|w| (w, 1)).collect()
        }
        LabelKind::Sym => panic!("symmetric powers do not embed naturally into tensor powers"),
    }
}

/// Sort a word with the sign of the sorting permutation; `None` if it has a repeat.
pub(crate) fn sort_signed(w: &[usize]) -> Option<(Vec<usize>, i64)> {
    let mut v = w.to_vec();
    let mut sign = 1;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|p| p[0] == p[1]) {
        return None;
    }
    Some((v, sign))
}

fn project_block(kind: LabelKind, w: &[usize]) -> Option<(Vec<usize>, i64)> {
    match kind {
        LabelKind::TensorWord => Some((w.to_vec(), 1)),
        LabelKind::Sym => {
            let mut v = w.to_vec();
            v.sort_unstable();
            Some((v, 1))
        }
        LabelKind::Wedge => sort_signed(w),
        LabelKind::Div => panic!("tensor powers do not project naturally onto divided powers"),
    }
}

/// Composite `X^α ↪ ⊗^d →σ→ ⊗^d ↠ Y^β` at rank m, where source position k lands at σ(k) (1-based).
pub fn generator_map(src: &[(LabelKind, usize)], sigma: &[usize], tgt: &[(LabelKind, usize)], m: usize) -> Matrix {
    let sb = BlockBasis::new(src, m);
    let tb = BlockBasis::new(tgt, m);
    let d: usize = src.iter().map(|b| b.1).sum();
    let mut cols = Vec::with_capacity(sb.dim());
    for s in 0..sb.dim() {
        let labels = sb.labels(s);
        let mut words: Vec<(Vec<usize>, i64)> = vec![(Vec::new(), 1)];
        for (b, l) in labels.iter().enumerate() {
            let ex = expand_block(src[b].0, l);
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
        let mut acc: HashMap<usize, i64> = HashMap::new();
        for (v, c) in words {
            let mut w = vec![0; d];
            for k in 0..d {
                w[sigma[k] - 1] = v[k];
            }
            let mut pos = 0;
            let mut out = Vec::with_capacity(tgt.len());
            let mut coef = c;
            let mut dead = false;
            for &(kind, size) in tgt {
                match project_block(kind, &w[pos..pos + size]) {
                    Some((l, e)) => {
                        out.push(l);
                        coef *= e;
                    }
                    None => {
                        dead = true;
                        break;
                    }
                }
                pos += size;
            }
            if !dead {
                *acc.entry(tb.index(&out).expect("target label")).or_insert(0) += coef;
            }
        }
        let mut col: Vec<(usize, Int)> = acc.into_iter().filter(|x| x.1 != 0).map(|(i, c)| (i, Int::from(c))).collect();
        col.sort_by_key(|x| x.0);
        cols.push(col);
    }
    Matrix::from_columns(Ring::Integers, tb.dim(), cols)
}

fn blocks(kind: LabelKind, parts: &[usize]) -> Vec<(LabelKind, usize)> {
    parts.iter().map(|&x| (kind, x)).collect()
}

/// d_λ : Λ^{λ'}(k^m) → S^λ(k^m) over Z.
pub fn schur_generator(lambda: &Partition, m: usize) -> Matrix {
    generator_map(
        &blocks(LabelKind::Wedge, lambda.conjugate().parts()),
        &sigma_lambda(lambda),
        &blocks(LabelKind::Sym, lambda.parts()),
        m,
    )
}

/// Γ^λ(k^m) → Λ^{λ'}(k^m) over Z, whose image is W_λ.
pub fn weyl_generator(lambda: &Partition, m: usize) -> Matrix {
    let conj = lambda.conjugate();
    generator_map(&blocks(LabelKind::Div, lambda.parts()), &sigma_lambda(&conj), &blocks(LabelKind::Wedge, conj.parts()), m)
}

/// The tuples μ = (λ₁,…,λᵢ+k,λᵢ₊₁−k,…) indexing the source of []_λ, with their (i, k).
pub fn abw_summands(lambda: &Partition) -> Vec<(usize, usize, Vec<usize>)> {
    let l = lambda.parts();
    let mut out = Vec::new();
    for i in 0..l.len().saturating_sub(1) {
        for k in 1..=l[i + 1] {
            let mut mu = l.to_vec();
            mu[i] += k;
            mu[i + 1] -= k;
            out.push((i, k, mu));
        }
    }
    out
}

/// []_λ : ⊕_μ Λ^μ(k^m) → Λ^λ(k^m) over Z; each component is (comultiplication ⊗ 1) then (1 ⊗ multiplication).
pub fn abw_presentation(lambda: &Partition, m: usize) -> Matrix {
    let tgt = blocks(LabelKind::Wedge, lambda.parts());
    let tb = BlockBasis::new(&tgt, m);
    let mut cols = Vec::new();
    for (i, _, mu) in abw_summands(lambda) {
        let sb = BlockBasis::new(&blocks(LabelKind::Wedge, &mu), m);
        for s in 0..sb.dim() {
            let labels: Vec<Vec<usize>> = sb.labels(s).iter().map(|x| x.to_vec()).collect();
            let big = &labels[i];
            let mut acc: HashMap<usize, i64> = HashMap::new();
            for first in subsets(big.len(), lambda.parts()[i]) {
                let rest: Vec<usize> = (0..big.len()).filter(|x| !first.contains(x)).collect();
                let mut shuffle = first.clone();
                shuffle.extend(&rest);
                let sgn = perm_sign(&shuffle);
                let a: Vec<usize> = first.iter().map(|&x| big[x]).collect();
                let mut merged: Vec<usize> = rest.iter().map(|&x| big[x]).collect();
                merged.extend(&labels[i + 1]);
                let Some((b, sgn2)) = sort_signed(&merged) else { continue };
                let mut out = labels.clone();
                out[i] = a;
                out[i + 1] = b;
                *acc.entry(tb.index(&out).expect("target label")).or_insert(0) += sgn * sgn2;
            }
            let mut col: Vec<(usize, Int)> = acc.into_iter().filter(|x| x.1 != 0).map(|(i, c)| (i, Int::from(c))).collect();
            col.sort_by_key(|x| x.0);
            cols.push(col);
        }
    }
    Matrix::from_columns(Ring::Integers, tb.dim(), cols)
}

/// Koszul differential Λ^a ⊗ S^b → Λ^{a−1} ⊗ S^{b+1} at rank m over Z.
pub fn koszul_differential(a: usize, b: usize, m: usize) -> Matrix {
    let sb = BlockBasis::new(&[(LabelKind::Wedge, a), (LabelKind::Sym, b)], m);
    let tb = BlockBasis::new(&[(LabelKind::Wedge, a.saturating_sub(1)), (LabelKind::Sym, b + 1)], m);
    let mut cols = Vec::with_capacity(sb.dim());
    for s in 0..sb.dim() {
        let l = sb.labels(s);
        let mut col = Vec::new();
        if a > 0 {
            for j in 0..a {
                let mut w: Vec<usize> = l[0].to_vec();
                let x = w.remove(j);
                let sign = if (a - 1 - j) % 2 == 0 { 1 } else { -1 };
                let mut sy = l[1].to_vec();
                sy.push(x);
                sy.sort_unstable();
                col.push((tb.index(&[w, sy]).unwrap(), Int::from(sign)));
            }
        }
        col.sort_by_key(|x| x.0);
        cols.push(col);
    }
    Matrix::from_columns(Ring::Integers, tb.dim(), cols)
}

/// Pure integral basis of an image-defined functor at one rank, with an integral left inverse.
#[derive(Debug)]
pub struct ImageBasis {
    pub embedding: Matrix,
    pub left_inverse: Matrix,
}

type BasisKey = (bool, Partition, usize);

fn cache() -> &'static Mutex<HashMap<BasisKey, Arc<ImageBasis>>> {
    static CACHE: OnceLock<Mutex<HashMap<BasisKey, Arc<ImageBasis>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn compute_basis(weyl: bool, lambda: &Partition, m: usize) -> Result<ImageBasis> {
    let g = if weyl { weyl_generator(lambda, m) } else { schur_generator(lambda, m) };
    let embedding = image_basis(&g);
    let left_inverse = if embedding.cols() == 0 {
        Matrix::zeros(Ring::Integers, 0, embedding.rows())
    } else {
        left_inverse(&embedding).ok_or_else(|| internal(format!("image of the generator map for {lambda} is not pure")))?
    };
    Ok(ImageBasis { embedding, left_inverse })
}

/// Hermite basis of S_λ(Z^m) inside S^λ(Z^m) (or of W_λ(Z^m) inside Λ^{λ'}(Z^m)), memoized.
pub fn image_basis_of(weyl: bool, lambda: &Partition, m: usize) -> Result<Arc<ImageBasis>> {
    let key = (weyl, lambda.clone(), m);
    if let Some(b) = cache().lock().unwrap().get(&key) {
        return Ok(b.clone());
    }
    let b = Arc::new(compute_basis(weyl, lambda, m)?);
    cache().lock().unwrap().insert(key, b.clone());
    Ok(b)
}

/// Same as [`image_basis_of`] but never touching the memo cache.
pub fn image_basis_uncached(weyl: bool, lambda: &Partition, m: usize) -> Result<ImageBasis> {
    compute_basis(weyl, lambda, m)
}

/// Number of semistandard tableaux of shape λ with entries ≤ m (hook-content formula).
pub fn schur_dimension(lambda: &Partition, m: usize) -> usize {
    let conj = lambda.conjugate();
    let mut num = Int::one();
    let mut den = Int::one();
    for (i, &row) in lambda.parts().iter().enumerate() {
        for j in 0..row {
            let content = m as i64 + j as i64 - i as i64;
            if content <= 0 {
                return 0;
            }
            num *= Int::from(content);
            den *= Int::from(row - j + conj.parts()[j] - i - 1);
        }
    }
    let q = num / den;
    if q.is_zero() {
        0
    } else {
        q.try_into().expect("dimension fits in usize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rank, smith_factors, ChainComplexData};

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn generator_ranks_match_tableau_counts() {
        for d in 1..=4 {
            for l in Partition::all(d) {
                for m in 1..=3 {
                    assert_eq!(rank(&schur_generator(&l, m)), schur_dimension(&l, m), "S {l} {m}");
                    assert_eq!(rank(&weyl_generator(&l, m)), schur_dimension(&l, m), "W {l} {m}");
                }
            }
        }
        assert_eq!(schur_dimension(&p(&[3, 1]), 2), 3);
    }

    #[test]
    fn extreme_generators() {
        // λ = (d): multiplication ⊗^d → S^d.
        let g = schur_generator(&p(&[2]), 2);
        assert_eq!(g.to_dense_rows(), Matrix::from_i64_rows(Ring::Integers, &[vec![1, 0, 0, 0], vec![0, 1, 1, 0], vec![0, 0, 0, 1]]).to_dense_rows());
        // λ = (1,1): comultiplication Λ² ↪ ⊗².
        let g = schur_generator(&p(&[1, 1]), 2);
        assert_eq!(g.col(0), vec![(1, Int::from(1)), (2, Int::from(-1))]);
    }

    #[test]
    fn abw_cokernel_is_conjugate_schur() {
        for l in [p(&[2, 1]), p(&[3, 1]), p(&[2, 2]), p(&[2, 1, 1])] {
            for m in 1..=3 {
                let a = abw_presentation(&l, m);
                let r = a.rows() - rank(&a);
                assert_eq!(r, schur_dimension(&l.conjugate(), m), "{l} {m}");
                assert!(smith_factors(&a).iter().all(|f| f.is_one()), "torsion-free cokernel");
            }
        }
    }

    #[test]
    fn schur_bases_are_pure() {
        for l in Partition::all(3) {
            let b = image_basis_of(false, &l, 3).unwrap();
            assert_eq!(b.left_inverse.mul(&b.embedding), Matrix::identity(Ring::Integers, b.embedding.cols()));
        }
    }

    #[test]
    fn koszul_exact() {
        for d in 1..=4 {
            for m in 1..=4 {
                let mut c = ChainComplexData::new(Ring::Integers);
                for a in 0..=d {
                    let dims = koszul_differential(a, d - a, m);
                    c.set_rank(a as i64, dims.cols());
                    if a > 0 {
                        c.set_differential(a as i64, dims);
                    }
                }
                assert!(c.is_complex());
                assert!(c.homology_all().is_zero(), "d={d} m={m}");
            }
        }
    }
}
