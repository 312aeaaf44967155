use std::fmt;
use std::str::FromStr;

use crate::combinatorics::Partition;
use crate::error::{Error, Result};
use crate::linalg::Ring;

/// Syntax tree of a homogeneous strict polynomial functor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FunctorExpr {
    /// The constant functor k (degree 0).
    Const,
    Sym(usize),
    Wedge(usize),
    Div(usize),
    TensorPower(usize),
    Tensor(Vec<FunctorExpr>),
    /// `Compose(F, G)` is F∘G.
    Compose(Box<FunctorExpr>, Box<FunctorExpr>),
    Dual(Box<FunctorExpr>),
    Schur(Partition),
    Weyl(Partition),
    /// Frobenius twist I^{(r)}.
    Twist(u32),
    /// W ↦ F(k^r ⊗ W).
    Param(Box<FunctorExpr>, usize),
}

use FunctorExpr::*;

impl FunctorExpr {
    pub fn compose(f: FunctorExpr, g: FunctorExpr) -> FunctorExpr {
        Compose(Box::new(f), Box::new(g))
    }

    pub fn dual(f: FunctorExpr) -> FunctorExpr {
        Dual(Box::new(f))
    }

    pub fn param(f: FunctorExpr, r: usize) -> FunctorExpr {
        Param(Box::new(f), r)
    }

    /// Degree in characteristic `p` (p = 0 for Z and Q).
    pub fn degree_char(&self, p: u64) -> Result<usize> {
        Ok(match self {
            Const => 0,
            Sym(d) | Wedge(d) | Div(d) | TensorPower(d) => *d,
            Tensor(fs) => fs.iter().map(|f| f.degree_char(p)).sum::<Result<usize>>()?,
            Compose(f, g) => f.degree_char(p)? * g.degree_char(p)?,
            Dual(f) | Param(f, _) => f.degree_char(p)?,
            Schur(l) | Weyl(l) => l.weight(),
            Twist(r) => {
                if p == 0 {
                    return Err(Error::UnsupportedRing("Frobenius twist needs a prime field".into()));
                }
                (p as usize).pow(*r)
            }
        })
    }

    pub fn degree(&self, ring: Ring) -> Result<usize> {
        self.degree_char(ring.characteristic())
    }

    pub fn contains_twist(&self) -> bool {
        match self {
            Twist(_) => true,
            Tensor(fs) => fs.iter().any(|f| f.contains_twist()),
            Compose(f, g) => f.contains_twist() || g.contains_twist(),
            Dual(f) | Param(f, _) => f.contains_twist(),
            _ => false,
        }
    }

    /// Ring compatibility: twists need a prime field.
    pub fn check_ring(&self, ring: Ring) -> Result<()> {
        if self.contains_twist() && !matches!(ring, Ring::PrimeField(_)) {
            return Err(Error::UnsupportedRing(format!("{self} requires a prime field, got {ring}")));
        }
        Ok(())
    }

    /// Rewrite duals away through the canonical isomorphisms S♯=Γ, Γ♯=S, Λ♯=Λ, ⊗♯=⊗, S_λ♯=W_λ.
    ///
    /// Returns `None` when a dual cannot be pushed to the leaves.
    pub fn without_duals(&self) -> Option<FunctorExpr> {
        fn go(e: &FunctorExpr, dual: bool) -> Option<FunctorExpr> {
            Some(match e {
                Const => Const,
                Sym(d) => if dual { Div(*d) } else { Sym(*d) },
                Div(d) => if dual { Sym(*d) } else { Div(*d) },
                Wedge(d) => Wedge(*d),
                TensorPower(d) => TensorPower(*d),
                Twist(r) => Twist(*r),
                Schur(l) => if dual { Weyl(l.clone()) } else { Schur(l.clone()) },
                Weyl(l) => if dual { Schur(l.clone()) } else { Weyl(l.clone()) },
                Tensor(fs) => Tensor(fs.iter().map(|f| go(f, dual)).collect::<Option<Vec<_>>>()?),
                Compose(f, g) => Compose(Box::new(go(f, dual)?), Box::new(go(g, dual)?)),
                Param(f, r) => Param(Box::new(go(f, dual)?), *r),
                Dual(f) => go(f, !dual)?,
            })
        }
        go(self, false)
    }
}

impl fmt::Display for FunctorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Const => write!(f, "k"),
            Sym(d) => write!(f, "S[{d}]"),
            Wedge(d) => write!(f, "W[{d}]"),
            Div(d) => write!(f, "G[{d}]"),
            TensorPower(d) => write!(f, "T[{d}]"),
            Schur(l) => write!(f, "Schur[{l}]"),
            Weyl(l) => write!(f, "Weyl[{l}]"),
            Twist(r) => write!(f, "Tw[{r}]"),
            Dual(g) => write!(f, "Dual({g})"),
            Param(g, r) => write!(f, "Param({g},{r})"),
            Tensor(fs) => {
                if fs.is_empty() {
                    return write!(f, "k");
                }
                let parts: Vec<String> = fs
                    .iter()
                    .map(|g| if matches!(g, Tensor(_)) { format!("({g})") } else { g.to_string() })
                    .collect();
                write!(f, "{}", parts.join(" * "))
            }
            Compose(a, b) => {
                let wrap = |g: &FunctorExpr, left: bool| {
                    if matches!(g, Tensor(_)) || (left && matches!(g, Compose(..))) {
                        format!("({g})")
                    } else {
                        g.to_string()
                    }
                };
                write!(f, "{} o {}", wrap(a, true), wrap(b, false))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(usize),
    Sym(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_alphabetic() {
                i += 1;
            }
            out.push(Tok::Ident(cs[st..i].iter().collect()));
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let t: String = cs[st..i].iter().collect();
            out.push(Tok::Num(t.parse().map_err(|_| Error::Parse(format!("number too large: {t}")))?));
        } else if "[](),*∘⊗".contains(c) {
            out.push(Tok::Sym(match c {
                '∘' => 'o',
                '⊗' => '*',
                c => c,
            }));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?} in {s:?}")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, c: char) -> Result<()> {
        match self.next() {
            Some(Tok::Sym(x)) if x == c => Ok(()),
            t => Err(Error::Parse(format!("expected {c:?}, found {t:?}"))),
        }
    }

    fn number(&mut self) -> Result<usize> {
        match self.next() {
            Some(Tok::Num(n)) => Ok(n),
            t => Err(Error::Parse(format!("expected a number, found {t:?}"))),
        }
    }

    fn is_compose(&self) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == "o") || matches!(self.peek(), Some(Tok::Sym('o')))
    }

    fn expr(&mut self) -> Result<FunctorExpr> {
        let mut fs = vec![self.term()?];
        while matches!(self.peek(), Some(Tok::Sym('*'))) {
            self.pos += 1;
            fs.push(self.term()?);
        }
        Ok(if fs.len() == 1 { fs.pop().unwrap() } else { Tensor(fs) })
    }

    fn term(&mut self) -> Result<FunctorExpr> {
        let a = self.atom()?;
        if self.is_compose() {
            self.pos += 1;
            let b = self.term()?;
            return Ok(FunctorExpr::compose(a, b));
        }
        Ok(a)
    }

    fn bracket_number(&mut self) -> Result<usize> {
        self.expect('[')?;
        let n = self.number()?;
        self.expect(']')?;
        Ok(n)
    }

    fn bracket_partition(&mut self) -> Result<Partition> {
        self.expect('[')?;
        let mut parts = vec![self.number()?];
        while matches!(self.peek(), Some(Tok::Sym(','))) {
            self.pos += 1;
            parts.push(self.number()?);
        }
        self.expect(']')?;
        if parts == [0] {
            return Ok(Partition::empty());
        }
        Partition::new(parts).map_err(|e| Error::Parse(e.to_string()))
    }

    fn atom(&mut self) -> Result<FunctorExpr> {
        match self.next() {
            Some(Tok::Sym('(')) => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Ident(id)) => match id.as_str() {
                "S" => Ok(Sym(self.bracket_number()?)),
                "W" => Ok(Wedge(self.bracket_number()?)),
                "G" => Ok(Div(self.bracket_number()?)),
                "T" => Ok(TensorPower(self.bracket_number()?)),
                "Tw" => Ok(Twist(self.bracket_number()? as u32)),
                "Schur" => Ok(Schur(self.bracket_partition()?)),
                "Weyl" => Ok(Weyl(self.bracket_partition()?)),
                "k" | "Const" => Ok(Const),
                "Dual" => {
                    self.expect('(')?;
                    let e = self.expr()?;
                    self.expect(')')?;
                    Ok(FunctorExpr::dual(e))
                }
                "Param" => {
                    self.expect('(')?;
                    let e = self.expr()?;
                    self.expect(',')?;
                    let r = self.number()?;
                    self.expect(')')?;
                    Ok(FunctorExpr::param(e, r))
                }
                other => Err(Error::Parse(format!("unknown functor {other:?}"))),
            },
            t => Err(Error::Parse(format!("unexpected token {t:?}"))),
        }
    }
}

impl FromStr for FunctorExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<FunctorExpr> {
        let mut p = Parser { toks: tokenize(s)?, pos: 0 };
        let e = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(Error::Parse(format!("trailing input in {s:?}")));
        }
        Ok(e)
    }
}
