use std::collections::HashMap;

use super::arith::{collect_column, gkron, gmul, to_matrix, Arith, GMat, Scalars};
use super::expr::FunctorExpr;
use super::schur::{image_basis_of, schur_dimension};
use crate::combinatorics::{binomial, compositions, multisets, subsets, Partition};
use crate::error::{Error, Result};
use crate::linalg::{Int, Matrix, Ring};

fn index_of(labels: Vec<Vec<usize>>) -> HashMap<Vec<usize>, usize> {
    labels.into_iter().enumerate().map(|(i, l)| (l, i)).collect()
}

fn accumulate<A: Arith>(ar: &A, acc: &mut HashMap<Vec<usize>, A::E>, key: Vec<usize>, val: A::E) {
    match acc.get_mut(&key) {
        Some(v) => *v = ar.add(v, &val),
        None => {
            acc.insert(key, val);
        }
    }
}

fn finish<A: Arith>(ar: &A, state: HashMap<Vec<usize>, A::E>, index: &HashMap<Vec<usize>, usize>) -> Vec<(usize, A::E)> {
    collect_column(ar, state.into_iter().map(|(k, v)| (index[&k], v)).collect())
}

fn sym_eval<A: Arith>(ar: &A, f: &GMat<A::E>, d: usize) -> GMat<A::E> {
    let index = index_of(multisets(f.rows, d));
    let cols = multisets(f.ncols(), d)
        .into_iter()
        .map(|s| {
            let mut state: HashMap<Vec<usize>, A::E> = HashMap::from([(Vec::new(), ar.one())]);
            for &j in &s {
                let mut next = HashMap::new();
                for (w, c) in &state {
                    for (i, x) in &f.cols[j] {
                        let mut w2 = w.clone();
                        let pos = w2.partition_point(|y| y <= i);
                        w2.insert(pos, *i);
                        accumulate(ar, &mut next, w2, ar.mul(c, x));
                    }
                }
                state = next;
            }
            finish(ar, state, &index)
        })
        .collect();
    GMat { rows: index.len(), cols }
}

fn wedge_eval<A: Arith>(ar: &A, f: &GMat<A::E>, d: usize) -> GMat<A::E> {
    let index = index_of(subsets(f.rows, d));
    let minus = ar.from_int(&Int::from(-1));
    let cols = subsets(f.ncols(), d)
        .into_iter()
        .map(|s| {
            let mut state: HashMap<Vec<usize>, A::E> = HashMap::from([(Vec::new(), ar.one())]);
            for &j in &s {
                let mut next = HashMap::new();
                for (w, c) in &state {
                    for (i, x) in &f.cols[j] {
                        if w.binary_search(i).is_ok() {
                            continue;
                        }
                        let pos = w.partition_point(|y| y < i);
                        let mut w2 = w.clone();
                        w2.insert(pos, *i);
                        let mut v = ar.mul(c, x);
                        if (w.len() - pos) % 2 == 1 {
                            v = ar.mul(&v, &minus);
                        }
                        accumulate(ar, &mut next, w2, v);
                    }
                }
                state = next;
            }
            finish(ar, state, &index)
        })
        .collect();
    GMat { rows: index.len(), cols }
}

fn power<A: Arith>(ar: &A, x: &A::E, k: usize) -> A::E {
    let mut r = ar.one();
    for _ in 0..k {
        r = ar.mul(&r, x);
    }
    r
}

fn div_eval<A: Arith>(ar: &A, f: &GMat<A::E>, d: usize) -> GMat<A::E> {
    let index = index_of(multisets(f.rows, d));
    let cols = multisets(f.ncols(), d)
        .into_iter()
        .map(|s| {
            let mut groups: Vec<(usize, usize)> = Vec::new();
            for &j in &s {
                match groups.last_mut() {
                    Some((g, a)) if *g == j => *a += 1,
                    _ => groups.push((j, 1)),
                }
            }
            let mut state: HashMap<Vec<usize>, A::E> = HashMap::from([(Vec::new(), ar.one())]);
            for (j, a) in groups {
                let entries = &f.cols[j];
                let alphas = compositions(a, entries.len());
                let mut next = HashMap::new();
                for (w, c) in &state {
                    for alpha in &alphas {
                        let mut v = c.clone();
                        let mut w2 = w.clone();
                        for (t, &k) in alpha.iter().enumerate() {
                            if k == 0 {
                                continue;
                            }
                            let (i, x) = &entries[t];
                            let have = w.iter().filter(|y| *y == i).count();
                            v = ar.mul(&v, &power(ar, x, k));
                            v = ar.scale_int(&v, &Int::from(binomial(have + k, k)));
                            w2.extend(std::iter::repeat(*i).take(k));
                        }
                        if ar.is_zero(&v) {
                            continue;
                        }
                        w2.sort_unstable();
                        accumulate(ar, &mut next, w2, v);
                    }
                }
                state = next;
            }
            finish(ar, state, &index)
        })
        .collect();
    GMat { rows: index.len(), cols }
}

fn unit<A: Arith>(ar: &A) -> GMat<A::E> {
    GMat::identity(ar, 1)
}

fn tensor_power<A: Arith>(ar: &A, f: &GMat<A::E>, d: usize) -> GMat<A::E> {
    let mut out = unit(ar);
    for _ in 0..d {
        out = gkron(ar, &out, f);
    }
    out
}

fn image_eval<A: Arith>(ar: &A, weyl: bool, lambda: &Partition, f: &GMat<A::E>) -> Result<GMat<A::E>> {
    if lambda.is_empty() {
        return Ok(unit(ar));
    }
    let ambient: Vec<FunctorExpr> = if weyl {
        lambda.conjugate().parts().iter().map(|&x| FunctorExpr::Wedge(x)).collect()
    } else {
        lambda.parts().iter().map(|&x| FunctorExpr::Sym(x)).collect()
    };
    let big = eval_generic(ar, &FunctorExpr::Tensor(ambient), f)?;
    let src = image_basis_of(weyl, lambda, f.ncols())?;
    let tgt = image_basis_of(weyl, lambda, f.rows)?;
    let e = GMat::from_matrix(ar, &src.embedding);
    let l = GMat::from_matrix(ar, &tgt.left_inverse);
    Ok(gmul(ar, &l, &gmul(ar, &big, &e)))
}

/// F(f) for a generic-coefficient matrix `f`: k^a → k^b (a = columns, b = rows).
pub fn eval_generic<A: Arith>(ar: &A, e: &FunctorExpr, f: &GMat<A::E>) -> Result<GMat<A::E>> {
    use FunctorExpr::*;
    Ok(match e {
        Const => unit(ar),
        Sym(d) => sym_eval(ar, f, *d),
        Wedge(d) => wedge_eval(ar, f, *d),
        Div(d) => div_eval(ar, f, *d),
        TensorPower(d) => tensor_power(ar, f, *d),
        Tensor(fs) => {
            let mut out = unit(ar);
            for g in fs {
                out = gkron(ar, &out, &eval_generic(ar, g, f)?);
            }
            out
        }
        Compose(a, b) => eval_generic(ar, a, &eval_generic(ar, b, f)?)?,
        Dual(g) => eval_generic(ar, g, &f.transpose())?.transpose(),
        Schur(l) => image_eval(ar, false, l, f)?,
        Weyl(l) => image_eval(ar, true, l, f)?,
        Twist(r) => {
            let Ring::PrimeField(p) = ar.ring() else {
                return Err(Error::UnsupportedRing(format!("Tw[{r}] over {}", ar.ring())));
            };
            let q = p.pow(*r);
            f.map(ar, |x| ar.frobenius(x, q))
        }
        Param(g, r) => {
            let id = GMat::identity(ar, *r);
            eval_generic(ar, g, &gkron(ar, &id, f))?
        }
    })
}

/// Matrix of F(f): F(k^a) → F(k^b) in the canonical bases.
pub fn eval_map(e: &FunctorExpr, f: &Matrix) -> Result<Matrix> {
    let ring = f.ring();
    e.check_ring(ring)?;
    let ar = Scalars(ring);
    let g = eval_generic(&ar, e, &GMat::from_matrix(&ar, f))?;
    Ok(to_matrix(ring, &g))
}

/// F♯(f) = F(fᵀ)ᵀ.
pub fn dual_eval(e: &FunctorExpr, f: &Matrix) -> Result<Matrix> {
    Ok(eval_map(e, &f.transpose())?.transpose())
}

/// I^{(r)}(f): entries raised to the p^r-th power.
pub fn twist_eval(r: u32, f: &Matrix) -> Result<Matrix> {
    eval_map(&FunctorExpr::Twist(r), f)
}

/// dim F(k^m).
pub fn dimension(e: &FunctorExpr, m: usize, ring: Ring) -> Result<usize> {
    use FunctorExpr::*;
    e.check_ring(ring)?;
    let c = |n: u128| usize::try_from(n).map_err(|_| Error::BudgetExceeded { estimate: n, budget: usize::MAX as u128 });
    Ok(match e {
        Const => 1,
        Sym(d) | Div(d) => {
            if m == 0 {
                usize::from(*d == 0)
            } else {
                c(binomial(m + d - 1, *d))?
            }
        }
        Wedge(d) => c(binomial(m, *d))?,
        TensorPower(d) => c((m as u128).pow(*d as u32))?,
        Tensor(fs) => fs.iter().map(|g| dimension(g, m, ring)).product::<Result<usize>>()?,
        Compose(a, b) => dimension(a, dimension(b, m, ring)?, ring)?,
        Dual(g) => dimension(g, m, ring)?,
        Schur(l) | Weyl(l) => schur_dimension(l, m),
        Twist(_) => m,
        Param(g, r) => dimension(g, r * m, ring)?,
    })
}

/// A functor evaluated at k^m together with a description of its basis.
#[derive(Clone, Debug)]
pub struct EvaluatedFunctor {
    pub expr: FunctorExpr,
    pub rank: usize,
    pub dim: usize,
    /// For Schur and Weyl functors, the Hermite embedding into the ambient monomial functor.
    pub embedding: Option<Matrix>,
}

pub fn evaluate(e: &FunctorExpr, m: usize, ring: Ring) -> Result<EvaluatedFunctor> {
    let dim = dimension(e, m, ring)?;
    let embedding = match e {
        FunctorExpr::Schur(l) if !l.is_empty() => Some(image_basis_of(false, l, m)?.embedding.change_ring(ring)),
        FunctorExpr::Weyl(l) if !l.is_empty() => Some(image_basis_of(true, l, m)?.embedding.change_ring(ring)),
        _ => None,
    };
    Ok(EvaluatedFunctor { expr: e.clone(), rank: m, dim, embedding })
}

/// Identity check helper: F(id_m).
pub fn eval_identity(e: &FunctorExpr, m: usize, ring: Ring) -> Result<Matrix> {
    eval_map(e, &Matrix::identity(ring, m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(rows: &[Vec<i64>]) -> Matrix {
        Matrix::from_i64_rows(Ring::Integers, rows)
    }

    fn fe(s: &str) -> FunctorExpr {
        s.parse().unwrap()
    }

    #[test]
    fn dimensions() {
        assert_eq!(dimension(&fe("S[3]"), 2, Ring::Integers).unwrap(), 4);
        assert_eq!(dimension(&fe("S[2] o S[2]"), 2, Ring::Integers).unwrap(), 6);
        assert_eq!(dimension(&fe("Schur[2,1]"), 2, Ring::Integers).unwrap(), 2);
        assert!(dimension(&fe("Tw[1]"), 2, Ring::Rationals).is_err());
        for s in ["S[2] * W[2]", "G[2] o W[2]", "Schur[2,1]", "Weyl[3,1]", "Param(S[2],2)", "Dual(T[2])", "k"] {
            for m in 0..=3 {
                let e = fe(s);
                assert_eq!(eval_identity(&e, m, Ring::Integers).unwrap().cols(), dimension(&e, m, Ring::Integers).unwrap(), "{s} {m}");
            }
        }
    }

    #[test]
    fn sym_and_div_examples() {
        let f = z(&[vec![2, 0], vec![0, 3]]);
        let s2 = eval_map(&fe("S[2]"), &f).unwrap();
        assert_eq!(s2, z(&[vec![4, 0, 0], vec![0, 6, 0], vec![0, 0, 9]]));
        let g = z(&[vec![1], vec![1]]);
        let g2 = eval_map(&fe("G[2]"), &g).unwrap();
        assert_eq!(g2, z(&[vec![1], vec![1], vec![1]]));
        let t2 = eval_map(&fe("T[2]"), &f).unwrap();
        assert_eq!(t2, f.kron(&f));
    }

    #[test]
    fn duals() {
        let fs = crate::combinatorics::words(2, 4);
        for w in fs {
            let f = z(&[vec![w[0] as i64, w[1] as i64], vec![w[2] as i64, w[3] as i64]]);
            for d in 1..=3 {
                let ds = eval_map(&FunctorExpr::dual(FunctorExpr::Sym(d)), &f).unwrap();
                assert_eq!(ds, eval_map(&FunctorExpr::Div(d), &f).unwrap());
            }
            let dw = dual_eval(&fe("W[2]"), &f).unwrap();
            assert_eq!(dw, eval_map(&fe("W[2]"), &f).unwrap());
            let dd = eval_map(&fe("Dual(Dual(Schur[2,1]))"), &f).unwrap();
            assert_eq!(dd, eval_map(&fe("Schur[2,1]"), &f).unwrap());
        }
    }

    #[test]
    fn twist() {
        let f3 = Ring::PrimeField(3);
        let a = Matrix::from_i64_rows(f3, &[vec![2]]);
        assert_eq!(twist_eval(1, &a).unwrap(), a);
        assert!(twist_eval(1, &z(&[vec![2]])).is_err());
        assert_eq!(fe("Tw[1]").degree(f3).unwrap(), 3);
    }

    #[test]
    fn schur_maps_are_functorial() {
        let f = z(&[vec![1, 2], vec![0, 1], vec![3, -1]]);
        let g = z(&[vec![1, 0, 2], vec![-1, 1, 1]]);
        for s in ["Schur[2,1]", "Weyl[2,1]", "Schur[3,1]", "Weyl[2,2]"] {
            let e = fe(s);
            let lhs = eval_map(&e, &g.mul(&f)).unwrap();
            let rhs = eval_map(&e, &g).unwrap().mul(&eval_map(&e, &f).unwrap());
            assert_eq!(lhs, rhs, "{s}");
        }
    }
}
