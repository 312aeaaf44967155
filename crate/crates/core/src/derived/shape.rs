//! Canonical labels of monomial functors applied to a module with a distinguished basis.
//!
//! A label is a flat word of atoms; the shape tree says how to cut it into blocks.

use crate::error::{Error, Result};
use crate::functor::FunctorExpr;

pub type Atom = u128;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    Leaf,
    Const,
    Sym(usize, Box<Shape>),
    Wedge(usize, Box<Shape>),
    Div(usize, Box<Shape>),
    Word(usize, Box<Shape>),
    Tensor(Vec<Shape>),
    /// Frobenius twist with exponent q = p^r: coefficients are raised to the q-th power.
    Twist(u64, Box<Shape>),
}

impl Shape {
    /// Number of atoms in a label.
    pub fn width(&self) -> usize {
        match self {
            Shape::Leaf => 1,
            Shape::Const => 0,
            Shape::Sym(d, c) | Shape::Wedge(d, c) | Shape::Div(d, c) | Shape::Word(d, c) => d * c.width(),
            Shape::Tensor(cs) => cs.iter().map(|c| c.width()).sum(),
            Shape::Twist(_, c) => c.width(),
        }
    }

    /// Compile a dual-free expression without Schur, Weyl or Param nodes.
    pub fn compile(e: &FunctorExpr, p: u64) -> Result<Shape> {
        Self::compile_at(e, p, Shape::Leaf)
    }

    fn compile_at(e: &FunctorExpr, p: u64, leaf: Shape) -> Result<Shape> {
        use FunctorExpr::*;
        Ok(match e {
            Const => Shape::Const,
            Sym(1) | Div(1) | Wedge(1) | TensorPower(1) => leaf,
            Sym(d) => Shape::Sym(*d, Box::new(leaf)),
            Wedge(d) => Shape::Wedge(*d, Box::new(leaf)),
            Div(d) => Shape::Div(*d, Box::new(leaf)),
            TensorPower(d) => Shape::Word(*d, Box::new(leaf)),
            Tensor(fs) => Shape::Tensor(fs.iter().map(|f| Self::compile_at(f, p, leaf.clone())).collect::<Result<_>>()?),
            Compose(f, g) => Self::compile_at(f, p, Self::compile_at(g, p, leaf)?)?,
            Twist(r) => {
                if p == 0 {
                    return Err(Error::UnsupportedRing("Frobenius twist needs a prime field".into()));
                }
                Shape::Twist(p.pow(*r), Box::new(leaf))
            }
            Schur(l) | Weyl(l) if l.weight() == 1 => leaf,
            Schur(l) | Weyl(l) if l.is_empty() => Shape::Const,
            Dual(_) | Schur(_) | Weyl(_) | Param(..) => {
                return Err(Error::InvalidArguments(format!("{e} has no monomial shape")));
            }
        })
    }

    /// Canonical form of an arbitrary word, or `None` when it is zero (repeated exterior factor).
    pub fn canonical(&self, w: &[Atom]) -> Option<Vec<Atom>> {
        let mut out = Vec::with_capacity(w.len());
        self.canon_into(w, &mut out).then_some(out)
    }

    fn canon_into(&self, w: &[Atom], out: &mut Vec<Atom>) -> bool {
        match self {
            Shape::Leaf => {
                out.push(w[0]);
                true
            }
            Shape::Const => true,
            Shape::Twist(_, c) => c.canon_into(w, out),
            Shape::Tensor(cs) => {
                let mut pos = 0;
                for c in cs {
                    let k = c.width();
                    if !c.canon_into(&w[pos..pos + k], out) {
                        return false;
                    }
                    pos += k;
                }
                true
            }
            Shape::Word(d, c) | Shape::Sym(d, c) | Shape::Div(d, c) | Shape::Wedge(d, c) => {
                let k = c.width();
                let mut blocks = Vec::with_capacity(*d);
                for b in 0..*d {
                    let mut v = Vec::with_capacity(k);
                    if !c.canon_into(&w[b * k..(b + 1) * k], &mut v) {
                        return false;
                    }
                    blocks.push(v);
                }
                match self {
                    Shape::Word(..) => {}
                    Shape::Wedge(..) => {
                        blocks.sort();
                        if blocks.windows(2).any(|p| p[0] == p[1]) {
                            return false;
                        }
                    }
                    _ => blocks.sort(),
                }
                for b in blocks {
                    out.extend(b);
                }
                true
            }
        }
    }

    /// Image of the canonical label `src` under the atom map whose values are `tgt` (positionwise).
    ///
    /// Returns the canonical target label and the coefficient, or `None` if the image is zero.
    pub fn apply(&self, src: &[Atom], tgt: &[Atom], modulus: Option<u64>) -> Option<(Vec<Atom>, i128)> {
        let mut out = Vec::with_capacity(tgt.len());
        let c = self.apply_into(src, tgt, modulus, &mut out)?;
        Some((out, c))
    }

    fn apply_into(&self, src: &[Atom], tgt: &[Atom], modulus: Option<u64>, out: &mut Vec<Atom>) -> Option<i128> {
        let red = |x: i128| match modulus {
            Some(p) => x.rem_euclid(p as i128),
            None => x,
        };
        match self {
            Shape::Leaf => {
                out.push(tgt[0]);
                Some(1)
            }
            Shape::Const => Some(1),
            Shape::Twist(q, c) => {
                let x = c.apply_into(src, tgt, modulus, out)?;
                let mut r: i128 = 1;
                for _ in 0..*q {
                    r = red(r.checked_mul(x).expect("coefficient overflow"));
                }
                Some(r)
            }
            Shape::Tensor(cs) => {
                let mut pos = 0;
                let mut coef: i128 = 1;
                for c in cs {
                    let k = c.width();
                    coef = red(coef * c.apply_into(&src[pos..pos + k], &tgt[pos..pos + k], modulus, out)?);
                    pos += k;
                }
                Some(coef)
            }
            Shape::Word(d, c) | Shape::Sym(d, c) | Shape::Div(d, c) | Shape::Wedge(d, c) => {
                let k = c.width();
                let mut coef: i128 = 1;
                let mut blocks = Vec::with_capacity(*d);
                for b in 0..*d {
                    let mut v = Vec::with_capacity(k);
                    coef = red(coef.checked_mul(c.apply_into(&src[b * k..(b + 1) * k], &tgt[b * k..(b + 1) * k], modulus, &mut v)?).expect("coefficient overflow"));
                    blocks.push(v);
                }
                match self {
                    Shape::Word(..) => {}
                    Shape::Sym(..) => blocks.sort(),
                    Shape::Wedge(..) => {
                        let mut sign = 1;
                        for i in 1..blocks.len() {
                            let mut j = i;
                            while j > 0 && blocks[j - 1] > blocks[j] {
                                blocks.swap(j - 1, j);
                                sign = -sign;
                                j -= 1;
                            }
                        }
                        if blocks.windows(2).any(|p| p[0] == p[1]) {
                            return None;
                        }
                        coef = red(coef * sign);
                    }
                    Shape::Div(..) => {
                        blocks.sort();
                        let mut num: i128 = 1;
                        for run in runs(&blocks) {
                            num = num.checked_mul(fact(run)).expect("coefficient overflow");
                        }
                        let src_blocks: Vec<&[Atom]> = (0..*d).map(|b| &src[b * k..(b + 1) * k]).collect();
                        let mut den: i128 = 1;
                        for run in runs(&src_blocks) {
                            den *= fact(run);
                        }
                        coef = red(coef.checked_mul(num / den).expect("coefficient overflow"));
                    }
                    _ => unreachable!(),
                }
                if coef == 0 {
                    return None;
                }
                for b in blocks {
                    out.extend(b);
                }
                Some(coef)
            }
        }
    }
}

fn runs<T: PartialEq>(v: &[T]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < v.len() {
        let mut j = i;
        while j < v.len() && v[j] == v[i] {
            j += 1;
        }
        out.push(j - i);
        i = j;
    }
    out
}

fn fact(n: usize) -> i128 {
    (1..=n as i128).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compile_and_width() {
        let e: FunctorExpr = "S[2] o W[2] * G[3]".parse().unwrap();
        let s = Shape::compile(&e, 0).unwrap();
        assert_eq!(s.width(), 7);
        let t: FunctorExpr = "S[2] o Tw[1]".parse().unwrap();
        assert_eq!(Shape::compile(&t, 3).unwrap().width(), 2);
        assert!(Shape::compile(&t, 0).is_err());
    }

    #[test]
    fn canonical_forms() {
        let w = Shape::Wedge(3, Box::new(Shape::Leaf));
        assert_eq!(w.canonical(&[3, 1, 2]), Some(vec![1, 2, 3]));
        assert_eq!(w.canonical(&[3, 1, 3]), None);
        let ss = Shape::Sym(2, Box::new(Shape::Sym(2, Box::new(Shape::Leaf))));
        assert_eq!(ss.canonical(&[4, 3, 2, 1]), Some(vec![1, 2, 3, 4]));
        assert_eq!(ss.canonical(&[4, 1, 3, 2]), Some(vec![1, 4, 2, 3]));
    }

    #[test]
    fn apply_coefficients() {
        let g = Shape::Div(2, Box::new(Shape::Leaf));
        assert_eq!(g.apply(&[1, 2], &[5, 5], None), Some((vec![5, 5], 2)));
        assert_eq!(g.apply(&[1, 1], &[5, 5], None), Some((vec![5, 5], 1)));
        let w = Shape::Wedge(2, Box::new(Shape::Leaf));
        assert_eq!(w.apply(&[1, 2], &[6, 5], None), Some((vec![5, 6], -1)));
        assert_eq!(w.apply(&[1, 2], &[5, 5], None), None);
        assert_eq!(g.apply(&[1, 2], &[5, 5], Some(2)), None);
    }
}
