//! Hermite forms, kernels, images and linear solves.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use super::elim::{invmod, rank_mod_p, smith_factors_sparse};
use super::matrix::Matrix;
use super::ring::{Int, Ring};

/// Column-style echelon data: `A·U = H`, columns of H beyond `pivots.len()` vanish.
pub(crate) struct Echelon {
    /// Columns of H (dense, length = rows).
    pub h: Vec<Vec<Int>>,
    /// Topmost nonzero row of each nonzero column, strictly increasing.
    pub pivots: Vec<usize>,
    /// Columns of U (dense, length = cols) when requested.
    pub u: Option<Vec<Vec<Int>>>,
}

fn dense_cols(a: &Matrix) -> Vec<Vec<Int>> {
    let mut out = vec![vec![Int::zero(); a.rows()]; a.cols()];
    for (j, c) in a.columns().into_iter().enumerate() {
        for (i, v) in c {
            out[j][i] = v;
        }
    }
    out
}

fn unit_cols(n: usize) -> Vec<Vec<Int>> {
    (0..n)
        .map(|j| (0..n).map(|i| if i == j { Int::one() } else { Int::zero() }).collect())
        .collect()
}

fn col_axpy(cols: &mut [Vec<Int>], dst: usize, src: usize, q: &Int) {
    if q.is_zero() {
        return;
    }
    let (s, d) = if src < dst {
        let (a, b) = cols.split_at_mut(dst);
        (&a[src], &mut b[0])
    } else {
        let (a, b) = cols.split_at_mut(src);
        (&b[0], &mut a[dst])
    };
    for (x, y) in d.iter_mut().zip(s.iter()) {
        if !y.is_zero() {
            *x -= q * y;
        }
    }
}

/// Column Hermite normal form over Z.
pub(crate) fn hnf_z(a: &Matrix, track: bool) -> Echelon {
    let rows = a.rows();
    let n = a.cols();
    let mut h = dense_cols(a);
    let mut u = track.then(|| unit_cols(n));
    let mut pivots = Vec::new();
    let mut k = 0;
    for i in 0..rows {
        if k == n {
            break;
        }
        loop {
            let best = (k..n)
                .filter(|&j| !h[j][i].is_zero())
                .min_by(|&x, &y| h[x][i].abs().cmp(&h[y][i].abs()).then(x.cmp(&y)));
            let Some(j0) = best else { break };
            h.swap(k, j0);
            if let Some(u) = &mut u {
                u.swap(k, j0);
            }
            let mut clean = true;
            for j in k + 1..n {
                if h[j][i].is_zero() {
                    continue;
                }
                let q = h[j][i].div_floor(&h[k][i]);
                col_axpy(&mut h, j, k, &q);
                if let Some(u) = &mut u {
                    col_axpy(u, j, k, &q);
                }
                clean &= h[j][i].is_zero();
            }
            if clean {
                break;
            }
        }
        if h[k][i].is_zero() {
            continue;
        }
        if h[k][i].is_negative() {
            for x in h[k].iter_mut() {
                *x = -std::mem::take(x);
            }
            if let Some(u) = &mut u {
                for x in u[k].iter_mut() {
                    *x = -std::mem::take(x);
                }
            }
        }
        for j in 0..k {
            let q = h[j][i].div_floor(&h[k][i]);
            col_axpy(&mut h, j, k, &q);
            if let Some(u) = &mut u {
                col_axpy(u, j, k, &q);
            }
        }
        pivots.push(i);
        k += 1;
    }
    Echelon { h, pivots, u }
}

/// Reduced column echelon form over F_p.
pub(crate) fn echelon_fp(a: &Matrix, p: u64, track: bool) -> Echelon {
    let rows = a.rows();
    let n = a.cols();
    let to_u = |c: Vec<Int>| -> Vec<u64> { c.into_iter().map(|x| x.mod_floor(&Int::from(p)).to_u64().unwrap()).collect() };
    let mut h: Vec<Vec<u64>> = dense_cols(a).into_iter().map(to_u).collect();
    let mut u: Option<Vec<Vec<u64>>> = track.then(|| unit_cols(n).into_iter().map(to_u).collect());
    let mulm = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
    let axpy = |cols: &mut Vec<Vec<u64>>, dst: usize, src: usize, q: u64| {
        if q == 0 {
            return;
        }
        let s = cols[src].clone();
        for (x, y) in cols[dst].iter_mut().zip(s) {
            if y != 0 {
                *x = (*x + p - mulm(q, y)) % p;
            }
        }
    };
    let mut pivots = Vec::new();
    let mut k = 0;
    for i in 0..rows {
        if k == n {
            break;
        }
        let Some(j0) = (k..n).find(|&j| h[j][i] != 0) else { continue };
        h.swap(k, j0);
        if let Some(u) = &mut u {
            u.swap(k, j0);
        }
        let inv = invmod(h[k][i], p);
        for x in h[k].iter_mut() {
            *x = mulm(*x, inv);
        }
        if let Some(u) = &mut u {
            for x in u[k].iter_mut() {
                *x = mulm(*x, inv);
            }
        }
        for j in 0..n {
            if j != k && h[j][i] != 0 {
                let q = h[j][i];
                axpy(&mut h, j, k, q);
                if let Some(u) = &mut u {
                    axpy(u, j, k, q);
                }
            }
        }
        pivots.push(i);
        k += 1;
    }
    let back = |c: Vec<u64>| -> Vec<Int> { c.into_iter().map(Int::from).collect() };
    Echelon { h: h.into_iter().map(back).collect(), pivots, u: u.map(|u| u.into_iter().map(back).collect()) }
}

pub(crate) fn echelon(a: &Matrix, track: bool) -> Echelon {
    match a.ring() {
        Ring::PrimeField(p) => echelon_fp(a, p, track),
        _ => hnf_z(a, track),
    }
}

fn cols_to_matrix(ring: Ring, rows: usize, cols: &[Vec<Int>]) -> Matrix {
    Matrix::from_columns(
        ring,
        rows,
        cols.iter()
            .map(|c| c.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, v)| (i, v.clone())).collect())
            .collect(),
    )
}

/// Columns forming the column Hermite normal form of the column span (reduced echelon over F_p).
pub fn image_basis(a: &Matrix) -> Matrix {
    let e = echelon(a, false);
    cols_to_matrix(a.ring(), a.rows(), &e.h[..e.pivots.len()])
}

/// Lattice basis (Hermite form) of the kernel; saturated over Z.
pub fn kernel_basis(a: &Matrix) -> Matrix {
    let e = echelon(a, true);
    let u = e.u.unwrap();
    let k = cols_to_matrix(a.ring(), a.cols(), &u[e.pivots.len()..]);
    image_basis(&k)
}

/// Rank over the matrix ring (over Q and Z this is the rank of the integer matrix).
pub fn rank(a: &Matrix) -> usize {
    match a.ring() {
        Ring::PrimeField(p) => rank_mod_p(to_u64_rows(a, p), a.cols(), p),
        _ => smith_factors(a).len(),
    }
}

pub(crate) fn to_u64_rows(a: &Matrix, p: u64) -> Vec<Vec<(usize, u64)>> {
    let pm = Int::from(p);
    a.row_lists()
        .into_iter()
        .map(|r| r.into_iter().map(|(c, v)| (c, v.mod_floor(&pm).to_u64().unwrap())).filter(|e| e.1 != 0).collect())
        .collect()
}

/// Nonzero invariant factors of an integer matrix (sparse unit elimination, dense residue).
pub fn smith_factors(a: &Matrix) -> Vec<Int> {
    smith_factors_sparse(a.row_lists(), a.cols())
}

/// A linear system with no solution over the matrix ring.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("no solution over {ring} (solvable over Q: {solvable_over_q})")]
pub struct NoSolution {
    pub ring: Ring,
    /// Unsolvable over Z (always true when the ring is Z).
    pub unsolvable_over_z: bool,
    /// Whether the same integer system has a rational solution.
    pub solvable_over_q: bool,
}

/// Solution `x / denominator` of `A·x = b` (denominator is 1 except over Q).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solved {
    pub x: Matrix,
    pub denominator: Int,
}

fn solve_rational(e: &Echelon, b: &[Int]) -> Option<Vec<BigRational>> {
    let k = e.pivots.len();
    let mut y: Vec<BigRational> = Vec::with_capacity(k);
    for (j, &pr) in e.pivots.iter().enumerate() {
        let mut s = BigRational::from_integer(b[pr].clone());
        for (l, yl) in y.iter().enumerate() {
            s -= yl * BigRational::from_integer(e.h[l][pr].clone());
        }
        y.push(s / BigRational::from_integer(e.h[j][pr].clone()));
    }
    for (i, bi) in b.iter().enumerate() {
        let mut s = BigRational::zero();
        for (l, yl) in y.iter().enumerate() {
            s += yl * BigRational::from_integer(e.h[l][i].clone());
        }
        if s != BigRational::from_integer(bi.clone()) {
            return None;
        }
    }
    let u = e.u.as_ref().unwrap();
    let n = u.len();
    let mut x = vec![BigRational::zero(); n];
    for (l, yl) in y.iter().enumerate() {
        for i in 0..n {
            if !u[l][i].is_zero() {
                x[i] += yl * BigRational::from_integer(u[l][i].clone());
            }
        }
    }
    Some(x)
}

fn solve_fp(e: &Echelon, b: &[Int], p: u64) -> Option<Vec<Int>> {
    let pm = Int::from(p);
    let y: Vec<Int> = e.pivots.iter().map(|&pr| b[pr].mod_floor(&pm)).collect();
    for (i, bi) in b.iter().enumerate() {
        let mut s = Int::zero();
        for (l, yl) in y.iter().enumerate() {
            s += yl * &e.h[l][i];
        }
        if !(s - bi).mod_floor(&pm).is_zero() {
            return None;
        }
    }
    let u = e.u.as_ref().unwrap();
    let n = u.len();
    let mut x = vec![Int::zero(); n];
    for (l, yl) in y.iter().enumerate() {
        for i in 0..n {
            x[i] += yl * &u[l][i];
        }
    }
    Some(x.into_iter().map(|v| v.mod_floor(&pm)).collect())
}

/// Solve `A·X = B` column by column.
pub fn solve(a: &Matrix, b: &Matrix) -> Result<Solved, NoSolution> {
    assert_eq!(a.rows(), b.rows(), "shape mismatch in solve");
    let ring = a.ring();
    let e = echelon(a, true);
    let bcols = dense_cols(b);
    match ring {
        Ring::PrimeField(p) => {
            let mut xs = Vec::new();
            for bc in &bcols {
                let x = solve_fp(&e, bc, p).ok_or(NoSolution { ring, unsolvable_over_z: true, solvable_over_q: false })?;
                xs.push(x);
            }
            Ok(Solved { x: cols_to_matrix(ring, a.cols(), &xs), denominator: Int::one() })
        }
        _ => {
            let mut sols = Vec::new();
            for bc in &bcols {
                match solve_rational(&e, bc) {
                    Some(x) => sols.push(x),
                    None => return Err(NoSolution { ring, unsolvable_over_z: true, solvable_over_q: false }),
                }
            }
            let den = sols.iter().flatten().fold(Int::one(), |acc, q| acc.lcm(q.denom()));
            if ring == Ring::Integers && !den.is_one() {
                return Err(NoSolution { ring, unsolvable_over_z: true, solvable_over_q: true });
            }
            let xs: Vec<Vec<Int>> = sols
                .iter()
                .map(|c| c.iter().map(|q| q.numer() * (&den / q.denom())).collect())
                .collect();
            Ok(Solved { x: cols_to_matrix(ring, a.cols(), &xs), denominator: den })
        }
    }
}

/// Integer (or field) matrix `L` with `L·E = I` for a pure embedding `E`.
pub fn left_inverse(e: &Matrix) -> Option<Matrix> {
    let k = e.cols();
    let t = e.transpose();
    let ech = echelon(&t, true);
    if ech.pivots.len() != k {
        return None;
    }
    for (j, &pr) in ech.pivots.iter().enumerate() {
        if pr != j || !ech.h[j][j].is_one() {
            return None;
        }
        if (0..k).any(|i| i != j && !ech.h[j][i].is_zero()) {
            return None;
        }
    }
    let u = ech.u.unwrap();
    Some(cols_to_matrix(e.ring(), e.rows(), &u[..k]).transpose())
}

/// Over Z: whether the column span is a saturated sublattice of full column rank.
pub fn is_pure(e: &Matrix) -> bool {
    let f = smith_factors(e);
    f.len() == e.cols() && f.iter().all(|x| x.is_one())
}

/// Product of the Hermite pivots: the covolume of the column lattice inside its saturation span.
pub fn lattice_determinant(a: &Matrix) -> BigInt {
    smith_factors(a).into_iter().fold(Int::one(), |acc, x| acc * x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(rows: &[Vec<i64>]) -> Matrix {
        Matrix::from_i64_rows(Ring::Integers, rows)
    }

    #[test]
    fn solve_examples() {
        let s = solve(&z(&[vec![2]]), &z(&[vec![4]])).unwrap();
        assert_eq!(s.x, z(&[vec![2]]));
        let e = solve(&z(&[vec![2]]), &z(&[vec![3]])).unwrap_err();
        assert!(e.unsolvable_over_z && e.solvable_over_q);
        let q = Matrix::from_i64_rows(Ring::Rationals, &[vec![2]]);
        let s = solve(&q, &Matrix::from_i64_rows(Ring::Rationals, &[vec![3]])).unwrap();
        assert_eq!((s.x.get(0, 0), s.denominator), (Int::from(3), Int::from(2)));
        let e = solve(&z(&[vec![1], vec![1]]), &z(&[vec![1], vec![2]])).unwrap_err();
        assert!(!e.solvable_over_q);
    }

    #[test]
    fn hermite_basis_of_example() {
        let h = image_basis(&z(&[vec![2, 4], vec![6, 8]]));
        assert_eq!(h.cols(), 2);
        assert_eq!(h, z(&[vec![2, 0], vec![2, 4]]));
        assert_eq!(lattice_determinant(&h), Int::from(8));
    }

    #[test]
    fn kernel_is_saturated() {
        let a = z(&[vec![2, 4, 6]]);
        let k = kernel_basis(&a);
        assert_eq!(k.cols(), 2);
        assert!(a.mul(&k).is_zero());
        assert!(is_pure(&k));
    }

    #[test]
    fn left_inverse_of_pure() {
        let e = z(&[vec![1, 0], vec![2, 1], vec![3, 5]]);
        let l = left_inverse(&e).unwrap();
        assert_eq!(l.mul(&e), Matrix::identity(Ring::Integers, 2));
        assert!(left_inverse(&z(&[vec![2], vec![4]])).is_none());
    }

    #[test]
    fn field_echelon() {
        let a = Matrix::from_i64_rows(Ring::PrimeField(3), &[vec![1, 2], vec![2, 1]]);
        assert_eq!(rank(&a), 1);
        let k = kernel_basis(&a);
        assert_eq!(k.cols(), 1);
        assert!(a.mul(&k).is_zero());
    }
}
