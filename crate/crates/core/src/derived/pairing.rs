use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::functor::FunctorExpr;
use crate::linalg::{image_basis, kernel_basis, smith_normal_form, solve, ChainComplexData, Int, Matrix, Ring};
use crate::simplicial::{apply_functor, chains, k_n, shuffle_map, tensor_complex};

/// Generators of H_q(C) and the map from cycles to class coordinates.
#[derive(Clone, Debug)]
pub struct HomologyPresentation {
    pub ring: Ring,
    /// Order of each generator, 0 for a free generator.
    pub invariants: Vec<Int>,
    /// Cycle representatives, one column per generator.
    pub generators: Matrix,
    kernel: Matrix,
    transform: Matrix,
}

impl HomologyPresentation {
    /// Class coordinates of the cycles given as columns (torsion coordinates reduced).
    pub fn classify(&self, z: &Matrix) -> Result<Matrix> {
        if self.kernel.cols() == 0 {
            return Ok(Matrix::zeros(self.ring, 0, z.cols()));
        }
        let y = solve(&self.kernel, z).map_err(|e| Error::Internal(format!("not a cycle: {e}")))?;
        let c = self.transform.mul(&y.x);
        let rows = c.to_dense_rows();
        let reduced: Vec<Vec<Int>> = rows
            .into_iter()
            .zip(&self.invariants)
            .map(|(r, d)| if d.is_zero() { r } else { r.into_iter().map(|x| x.mod_floor(d)).collect() })
            .collect();
        Ok(if reduced.is_empty() { Matrix::zeros(self.ring, 0, z.cols()) } else { Matrix::from_rows(self.ring, &reduced) })
    }
}

use num_integer::Integer;

/// Presentation of H_q(C) with cycle representatives.
pub fn homology_presentation(c: &ChainComplexData, q: i64) -> Result<HomologyPresentation> {
    let ring = c.ring;
    let n = c.rank(q);
    let kernel = if c.rank(q - 1) == 0 { Matrix::identity(ring, n) } else { kernel_basis(&c.differential(q)) };
    let k = kernel.cols();
    let bnd = c.differential(q + 1);
    let y = if k == 0 || bnd.cols() == 0 {
        Matrix::zeros(ring, k, 0)
    } else {
        solve(&kernel, &bnd).map_err(|e| Error::Internal(format!("boundary outside cycles: {e}")))?.x
    };
    match ring {
        Ring::Integers => {
            let snf = smith_normal_form(&y)?;
            let uinv = solve(&snf.u, &Matrix::identity(ring, k)).map_err(|e| Error::Internal(e.to_string()))?.x;
            let keep: Vec<usize> = (0..k).filter(|&i| snf.factors.get(i).map_or(true, |f| !f.is_one())).collect();
            let invariants = keep.iter().map(|&i| snf.factors.get(i).cloned().unwrap_or_else(Int::zero)).collect();
            Ok(HomologyPresentation {
                ring,
                invariants,
                generators: kernel.mul(&uinv.select_cols(&keep)),
                transform: snf.u.select_rows(&keep),
                kernel,
            })
        }
        _ => {
            let p = image_basis(&y);
            let pivots: Vec<usize> = (0..p.cols()).map(|j| p.col(j).first().map(|e| e.0).unwrap()).collect();
            let free: Vec<usize> = (0..k).filter(|i| !pivots.contains(i)).collect();
            let comp = Matrix::identity(ring, k).select_cols(&free);
            let full = Matrix::hstack(&[&p, &comp]);
            let inv = solve(&full, &Matrix::identity(ring, k)).map_err(|e| Error::Internal(e.to_string()))?.x;
            let rows: Vec<usize> = (p.cols()..k).collect();
            Ok(HomologyPresentation {
                ring,
                invariants: vec![Int::zero(); free.len()],
                generators: kernel.mul(&comp),
                transform: inv.select_rows(&rows),
                kernel,
            })
        }
    }
}

/// L_pF(k^m;n) ⊗ L_qG(k^m;n) → L_{p+q}(F⊗G)(k^m;n) induced by the shuffle map.
///
/// Columns are indexed by pairs of generators (i of F, j of G) as i·(#G) + j; rows by
/// generators of the target presentation.
pub fn pairing(f: &FunctorExpr, g: &FunctorExpr, ring: Ring, m: usize, n: usize, p: usize, q: usize) -> Result<Matrix> {
    let top = p + q + 1;
    let k = k_n(n, top, ring);
    let x = apply_functor(f, &k, m, top)?;
    let y = apply_functor(g, &k, m, top)?;
    let w = apply_functor(&FunctorExpr::Tensor(vec![f.clone(), g.clone()]), &k, m, top)?;
    let cx = chains(&x, false)?;
    let cy = chains(&y, false)?;
    let cw = chains(&w, false)?;
    let hx = homology_presentation(&cx, p as i64)?;
    let hy = homology_presentation(&cy, q as i64)?;
    let hw = homology_presentation(&cw, (p + q) as i64)?;
    let nabla = shuffle_map(&x, &y, p + q);
    let tc = tensor_complex(&cx, &cy, p + q);
    let start = tc.offsets[p + q].iter().find(|o| o.0 == p).unwrap().1;
    let width = x.ranks[p] * y.ranks[q];
    let idx: Vec<usize> = (start..start + width).collect();
    let block = nabla[p + q].select_cols(&idx);
    let mut cols = Vec::new();
    for i in 0..hx.generators.cols() {
        for j in 0..hy.generators.cols() {
            let v = hx.generators.select_cols(&[i]).kron(&hy.generators.select_cols(&[j]));
            cols.push(block.mul(&v));
        }
    }
    if cols.is_empty() {
        return Ok(Matrix::zeros(ring, hw.invariants.len(), 0));
    }
    let refs: Vec<&Matrix> = cols.iter().collect();
    hw.classify(&Matrix::hstack(&refs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rank;

    #[test]
    fn presentation_of_torsion() {
        let mut c = ChainComplexData::new(Ring::Integers);
        c.set_rank(0, 1);
        c.set_rank(1, 1);
        c.set_differential(1, Matrix::from_i64_rows(Ring::Integers, &[vec![2]]));
        let h = homology_presentation(&c, 0).unwrap();
        assert_eq!(h.invariants, vec![Int::from(2)]);
        let cls = h.classify(&Matrix::from_i64_rows(Ring::Integers, &[vec![3]])).unwrap();
        assert_eq!(cls.get(0, 0), Int::from(1));
    }

    #[test]
    fn linear_pairing_is_iso() {
        let s1 = FunctorExpr::Sym(1);
        for ring in [Ring::Integers, Ring::PrimeField(2)] {
            let m = pairing(&s1, &s1, ring, 2, 1, 1, 1).unwrap();
            assert_eq!((m.rows(), m.cols()), (4, 4));
            assert_eq!(rank(&m), 4);
            if ring == Ring::Integers {
                assert!(crate::linalg::smith_factors(&m).iter().all(|f| f.is_one()));
            }
        }
    }

    #[test]
    fn unit() {
        let m = pairing(&FunctorExpr::Const, &FunctorExpr::Sym(1), Ring::Rationals, 2, 1, 0, 1).unwrap();
        assert_eq!(m.rows(), 2);
        assert_eq!(rank(&m), 2);
    }
}
