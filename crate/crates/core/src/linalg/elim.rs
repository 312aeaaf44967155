//! Sparse Gaussian elimination kernels used for ranks and invariant factors.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_traits::{One, Signed, Zero};

use super::ring::Int;
use super::snf::dense_factors;

type Row<V> = Vec<(usize, V)>;

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

pub(crate) fn invmod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

/// `dst - f·src` over F_p, both sorted by column.
fn axpy_mod(dst: &[(usize, u64)], f: u64, src: &[(usize, u64)], p: u64) -> Row<u64> {
    let mut out = Vec::with_capacity(dst.len() + src.len());
    let (mut i, mut j) = (0, 0);
    while i < dst.len() || j < src.len() {
        let ci = dst.get(i).map_or(usize::MAX, |e| e.0);
        let cj = src.get(j).map_or(usize::MAX, |e| e.0);
        if ci < cj {
            out.push(dst[i]);
            i += 1;
        } else if cj < ci {
            let v = (p - mulmod(f, src[j].1, p)) % p;
            if v != 0 {
                out.push((cj, v));
            }
            j += 1;
        } else {
            let v = (dst[i].1 + p - mulmod(f, src[j].1, p)) % p;
            if v != 0 {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn axpy_int(dst: &[(usize, Int)], f: &Int, src: &[(usize, Int)]) -> Row<Int> {
    let mut out = Vec::with_capacity(dst.len() + src.len());
    let (mut i, mut j) = (0, 0);
    while i < dst.len() || j < src.len() {
        let ci = dst.get(i).map_or(usize::MAX, |e| e.0);
        let cj = src.get(j).map_or(usize::MAX, |e| e.0);
        if ci < cj {
            out.push(dst[i].clone());
            i += 1;
        } else if cj < ci {
            out.push((cj, -(f * &src[j].1)));
            j += 1;
        } else {
            let v = &dst[i].1 - f * &src[j].1;
            if !v.is_zero() {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

struct Pattern {
    col_rows: Vec<Vec<usize>>,
    col_count: Vec<usize>,
    col_dead: Vec<bool>,
}

impl Pattern {
    fn new<V>(rows: &[Row<V>], ncols: usize) -> Pattern {
        let mut col_rows = vec![Vec::new(); ncols];
        let mut col_count = vec![0; ncols];
        for (r, row) in rows.iter().enumerate() {
            for (c, _) in row {
                col_rows[*c].push(r);
                col_count[*c] += 1;
            }
        }
        Pattern { col_rows, col_count, col_dead: vec![false; ncols] }
    }

    fn replace<V>(&mut self, r: usize, old: &Row<V>, new: &Row<V>) {
        for (c, _) in old {
            self.col_count[*c] -= 1;
        }
        for (c, _) in new {
            self.col_count[*c] += 1;
        }
        // New columns need a back-reference; duplicates are filtered on use.
        let mut i = 0;
        for (c, _) in new {
            while i < old.len() && old[i].0 < *c {
                i += 1;
            }
            if i >= old.len() || old[i].0 != *c {
                self.col_rows[*c].push(r);
            }
        }
    }

    fn holders<V>(&mut self, c: usize, rows: &[Row<V>], alive: &[bool]) -> Vec<usize> {
        let mut v = std::mem::take(&mut self.col_rows[c]);
        v.sort_unstable();
        v.dedup();
        v.retain(|&r| alive[r] && rows[r].binary_search_by_key(&c, |e| e.0).is_ok());
        self.col_rows[c] = v.clone();
        v
    }
}

/// Rank over F_p of a matrix given by sparse rows.
pub(crate) fn rank_mod_p(mut rows: Vec<Row<u64>>, ncols: usize, p: u64) -> usize {
    let mut pat = Pattern::new(&rows, ncols);
    let mut alive = vec![true; rows.len()];
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> =
        rows.iter().enumerate().map(|(r, row)| Reverse((row.len(), r))).collect();
    let mut rank = 0;
    while let Some(Reverse((len, r))) = heap.pop() {
        if !alive[r] || rows[r].len() != len {
            continue;
        }
        if len == 0 {
            alive[r] = false;
            continue;
        }
        let &(pc, pv) = rows[r]
            .iter()
            .min_by_key(|(c, _)| (pat.col_count[*c], *c))
            .expect("nonempty row");
        alive[r] = false;
        let pivot_row = std::mem::take(&mut rows[r]);
        for (c, _) in &pivot_row {
            pat.col_count[*c] -= 1;
        }
        let inv = invmod(pv, p);
        for k in pat.holders(pc, &rows, &alive) {
            let akc = rows[k][rows[k].binary_search_by_key(&pc, |e| e.0).unwrap()].1;
            let f = mulmod(akc, inv, p);
            let new = axpy_mod(&rows[k], f, &pivot_row, p);
            pat.replace(k, &rows[k], &new);
            rows[k] = new;
            heap.push(Reverse((rows[k].len(), k)));
        }
        pat.col_dead[pc] = true;
        rank += 1;
    }
    rank
}

/// Nonzero invariant factors (including units) of an integer matrix given by sparse rows.
///
/// Unit pivots are eliminated sparsely; the residue is handed to the dense Smith routine.
pub(crate) fn smith_factors_sparse(mut rows: Vec<Row<Int>>, ncols: usize) -> Vec<Int> {
    let mut pat = Pattern::new(&rows, ncols);
    let mut alive = vec![true; rows.len()];
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> =
        rows.iter().enumerate().map(|(r, row)| Reverse((row.len(), r))).collect();
    let mut units = 0usize;
    while let Some(Reverse((len, r))) = heap.pop() {
        if !alive[r] || rows[r].len() != len {
            continue;
        }
        if len == 0 {
            alive[r] = false;
            continue;
        }
        let pick = rows[r]
            .iter()
            .filter(|(_, v)| v.abs().is_one())
            .min_by_key(|(c, _)| (pat.col_count[*c], *c))
            .map(|(c, v)| (*c, v.clone()));
        let Some((pc, pv)) = pick else { continue };
        alive[r] = false;
        let pivot_row = std::mem::take(&mut rows[r]);
        for (c, _) in &pivot_row {
            pat.col_count[*c] -= 1;
        }
        for k in pat.holders(pc, &rows, &alive) {
            let akc = &rows[k][rows[k].binary_search_by_key(&pc, |e| e.0).unwrap()].1;
            let f = akc * &pv;
            let new = axpy_int(&rows[k], &f, &pivot_row);
            pat.replace(k, &rows[k], &new);
            rows[k] = new;
            heap.push(Reverse((rows[k].len(), k)));
        }
        pat.col_dead[pc] = true;
        units += 1;
    }
    let rest: Vec<&Row<Int>> = rows.iter().enumerate().filter(|(r, row)| alive[*r] && !row.is_empty()).map(|(_, row)| row).collect();
    let mut factors = vec![Int::one(); units];
    if !rest.is_empty() {
        let mut cols: Vec<usize> = rest.iter().flat_map(|row| row.iter().map(|e| e.0)).collect();
        cols.sort_unstable();
        cols.dedup();
        let mut dense = vec![vec![Int::zero(); cols.len()]; rest.len()];
        for (i, row) in rest.iter().enumerate() {
            for (c, v) in row.iter() {
                let j = cols.binary_search(c).unwrap();
                dense[i][j] = v.clone();
            }
        }
        factors.extend(dense_factors(dense));
    }
    factors
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_mod_small() {
        let rows = vec![vec![(0, 1), (1, 1)], vec![(0, 1), (1, 1)], vec![(1, 2)]];
        assert_eq!(rank_mod_p(rows.clone(), 2, 3), 2);
        assert_eq!(rank_mod_p(vec![vec![(0, 2)]], 1, 2), 1);
    }

    #[test]
    fn factors_with_residue() {
        let i = |x: i64| Int::from(x);
        let rows = vec![vec![(0, i(2)), (1, i(4))], vec![(0, i(6)), (1, i(8))]];
        assert_eq!(smith_factors_sparse(rows, 2), vec![i(2), i(4)]);
        let rows = vec![vec![(0, i(1)), (1, i(2))], vec![(0, i(3)), (1, i(4))]];
        assert_eq!(smith_factors_sparse(rows, 2), vec![i(1), i(2)]);
    }
}
