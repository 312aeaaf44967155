//! Partitions, p-cores, tableau permutations, shuffles and monomial bases.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Weakly decreasing sequence of positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Partition> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.iter().any(|&x| x == 0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidArguments(format!("{parts:?} is not a partition")));
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Partition {
        Partition { parts: Vec::new() }
    }

    /// `(d)`
    pub fn row(d: usize) -> Partition {
        Partition { parts: if d == 0 { vec![] } else { vec![d] } }
    }

    /// `(1^d)`
    pub fn column(d: usize) -> Partition {
        Partition { parts: vec![1; d] }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn weight(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn conjugate(&self) -> Partition {
        let first = self.parts.first().copied().unwrap_or(0);
        let parts = (0..first).map(|j| self.parts.iter().filter(|&&x| x > j).count()).collect();
        Partition { parts }
    }

    /// All partitions of `d` in reverse lexicographic order ((d) first).
    pub fn all(d: usize) -> Vec<Partition> {
        fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition { parts: cur.clone() });
                return;
            }
            for x in (1..=rest.min(max)).rev() {
                cur.push(x);
                rec(rest - x, x, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(d, d, &mut Vec::new(), &mut out);
        out
    }

    /// First-column hook lengths.
    pub fn beta_numbers(&self) -> Vec<usize> {
        let k = self.parts.len();
        self.parts.iter().enumerate().map(|(i, &x)| x + k - 1 - i).collect()
    }

    fn from_beta(mut beta: Vec<usize>) -> Partition {
        beta.sort_unstable_by(|a, b| b.cmp(a));
        let k = beta.len();
        let parts = beta.iter().enumerate().map(|(i, &b)| b - (k - 1 - i)).collect();
        Partition::new(parts).expect("beta numbers give a partition")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "0");
        }
        let s: Vec<String> = self.parts.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Partition> {
        let s = s.trim();
        if s == "0" || s.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad partition {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// p-core by sliding beads up the runners of the p-abacus.
pub fn p_core(lambda: &Partition, p: usize) -> Partition {
    assert!(p >= 2);
    let beta = lambda.beta_numbers();
    let mut counts = vec![0usize; p];
    for b in &beta {
        counts[b % p] += 1;
    }
    let mut moved = Vec::with_capacity(beta.len());
    for (r, &c) in counts.iter().enumerate() {
        for k in 0..c {
            moved.push(r + k * p);
        }
    }
    Partition::from_beta(moved)
}

/// Every partition obtained by removing one rim hook of length `p`.
pub fn rim_hook_removals(lambda: &Partition, p: usize) -> Vec<Partition> {
    let parts = lambda.parts();
    let conj = lambda.conjugate();
    let mut out = Vec::new();
    for i in 0..parts.len() {
        for j in 0..parts[i] {
            let leg = conj.parts()[j] - 1 - i;
            let arm = parts[i] - 1 - j;
            if arm + leg + 1 != p {
                continue;
            }
            let last = i + leg;
            let mut np = parts.to_vec();
            for r in i..last {
                np[r] = parts[r + 1] - 1;
            }
            np[last] = j;
            out.push(Partition::new(np).expect("rim hook removal leaves a partition"));
        }
    }
    out
}

/// p-core by repeated rim-hook removal, choosing the first or last removable hook.
pub fn p_core_by_rim_hooks(lambda: &Partition, p: usize, take_last: bool) -> Partition {
    let mut cur = lambda.clone();
    loop {
        let opts = rim_hook_removals(&cur, p);
        let next = if take_last { opts.last() } else { opts.first() };
        match next {
            Some(n) => cur = n.clone(),
            None => return cur,
        }
    }
}

/// Column reading of the standard row filling of the diagram of λ (one-line, 1-based).
///
/// In the map d_λ, tensor position k of Λ^{λ'} (column-major order) is sent to position σ(k).
pub fn sigma_lambda(lambda: &Partition) -> Vec<usize> {
    let parts = lambda.parts();
    let mut start = Vec::with_capacity(parts.len());
    let mut acc = 0;
    for &x in parts {
        start.push(acc);
        acc += x;
    }
    let mut out = Vec::with_capacity(acc);
    for j in 0..parts.first().copied().unwrap_or(0) {
        for (i, &x) in parts.iter().enumerate() {
            if x > j {
                out.push(start[i] + j + 1);
            }
        }
    }
    out
}

/// Sign of a permutation given in one-line notation (0- or 1-based).
pub fn perm_sign(perm: &[usize]) -> i64 {
    let mut inv = 0usize;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (0..n).collect();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else { return out };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

/// A (p,q)-shuffle: `perm` (1-based one-line) increasing on the first p and on the last q slots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shuffle {
    pub perm: Vec<usize>,
    pub sign: i64,
}

/// All (p,q)-shuffles in lexicographic order of their one-line notation.
pub fn shuffles(p: usize, q: usize) -> Vec<Shuffle> {
    let n = p + q;
    subsets(n, p)
        .into_iter()
        .map(|first| {
            let mut perm: Vec<usize> = first.iter().map(|x| x + 1).collect();
            perm.extend((0..n).filter(|x| !first.contains(x)).map(|x| x + 1));
            let sign = perm_sign(&perm);
            Shuffle { perm, sign }
        })
        .collect()
}

/// Strictly increasing `k`-subsets of `0..n`, lexicographic.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let need = k - cur.len();
        for x in start..n {
            if n - x < need {
                break;
            }
            cur.push(x);
            rec(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Weakly increasing length-`k` words over `0..n`, lexicographic.
pub fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            cur.push(x);
            rec(x, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// All length-`k` words over `0..n`, lexicographic.
pub fn words(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..n).map(move |x| {
                    let mut v = w.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out
}

/// Weak compositions of `d` into `n` parts, in decreasing lexicographic order.
pub fn compositions(d: usize, n: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, slots: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if slots == 1 {
            cur.push(rest);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for x in (0..=rest).rev() {
            cur.push(x);
            rec(rest - x, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(d, n, &mut Vec::new(), &mut out);
    out
}

/// Compositions of `d` with positive parts, in decreasing lexicographic order.
pub fn positive_compositions(d: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for x in (1..=rest).rev() {
            cur.push(x);
            rec(rest - x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, &mut Vec::new(), &mut out);
    out
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r
}

pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// Kind of monomial basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LabelKind {
    Sym,
    Wedge,
    Div,
    TensorWord,
}

/// One basis vector of S^d, Λ^d, Γ^d or ⊗^d of k^m; `data` is 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisLabel {
    pub kind: LabelKind,
    pub data: Vec<usize>,
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx: Vec<String> = self.data.iter().map(|x| (x + 1).to_string()).collect();
        let sep = match self.kind {
            LabelKind::Sym => "·",
            LabelKind::Wedge => "∧",
            LabelKind::Div => "·γ",
            LabelKind::TensorWord => "⊗",
        };
        write!(f, "{}", idx.join(sep))
    }
}

/// Canonical lexicographic basis of the monomial functor of degree `d` at rank `m`.
pub fn basis(kind: LabelKind, d: usize, m: usize) -> Vec<BasisLabel> {
    let data = match kind {
        LabelKind::Sym | LabelKind::Div => multisets(m, d),
        LabelKind::Wedge => subsets(m, d),
        LabelKind::TensorWord => words(m, d),
    };
    data.into_iter().map(|data| BasisLabel { kind, data }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn conjugates() {
        assert_eq!(p(&[3, 1]).conjugate(), p(&[2, 1, 1]));
        assert_eq!(Partition::column(4).conjugate(), Partition::row(4));
        assert_eq!(p(&[2, 1]).conjugate(), p(&[2, 1]));
    }

    #[test]
    fn cores() {
        assert_eq!(p_core(&Partition::column(5), 3), p(&[1, 1]));
        assert_eq!(p_core(&Partition::row(5), 3), p(&[2]));
        assert_eq!(p_core(&p(&[2, 1]), 3), Partition::empty());
        assert_eq!(p_core(&p(&[2, 1]), 2), p(&[2, 1]));
        assert_eq!(p_core(&Partition::row(3), 2), p(&[1]));
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma_lambda(&Partition::row(4)), vec![1, 2, 3, 4]);
        assert_eq!(sigma_lambda(&Partition::column(3)), vec![1, 2, 3]);
        assert_eq!(sigma_lambda(&p(&[2, 1])), vec![1, 3, 2]);
        assert_eq!(sigma_lambda(&p(&[3, 1])), vec![1, 4, 2, 3]);
    }

    #[test]
    fn shuffle_examples() {
        let s = shuffles(1, 1);
        assert_eq!(s.iter().map(|x| x.sign).collect::<Vec<_>>(), vec![1, -1]);
        assert_eq!(shuffles(0, 3).len(), 1);
        assert_eq!(shuffles(0, 3)[0].perm, vec![1, 2, 3]);
        assert_eq!(shuffles(2, 1).len(), 3);
    }

    #[test]
    fn basis_examples() {
        assert_eq!(basis(LabelKind::Sym, 2, 2).len(), 3);
        assert_eq!(basis(LabelKind::Wedge, 2, 2).len(), 1);
        assert_eq!(basis(LabelKind::Div, 3, 1).len(), 1);
        assert_eq!(basis(LabelKind::Sym, 2, 2)[1].data, vec![0, 1]);
    }

    #[test]
    fn partition_strings() {
        assert_eq!("2,1".parse::<Partition>().unwrap(), p(&[2, 1]));
        assert_eq!("0".parse::<Partition>().unwrap(), Partition::empty());
        assert_eq!(Partition::empty().to_string(), "0");
        assert!("1,2".parse::<Partition>().is_err());
    }

    #[test]
    fn compositions_count() {
        assert_eq!(compositions(3, 3).len(), 10);
        assert_eq!(compositions(3, 3)[0], vec![3, 0, 0]);
        assert_eq!(positive_compositions(3).len(), 4);
    }
}
