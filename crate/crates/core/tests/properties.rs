use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use spf_core::combinatorics::{
    binomial, compositions, factorial, multisets, p_core, p_core_by_rim_hooks, perm_sign, permutations, subsets, Partition,
};
use spf_core::derived::{derived_functors, derived_functors_generic, DerivedRequest, DEFAULT_BUDGET};
use spf_core::functor::{dimension, eval_identity, eval_map, FunctorExpr};
use spf_core::linalg::{kernel_basis, smith_normal_form, ChainComplexData, Int, Matrix, Ring};
use spf_core::simplicial::{apply_functor, chains, dold_kan, k_n, normalized_basis};

fn fe(s: &str) -> FunctorExpr {
    s.parse().unwrap()
}

fn small_matrix(rows: usize, cols: usize, bound: i64) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-bound..=bound, rows * cols).prop_map(move |v| {
        let rows_v: Vec<Vec<i64>> = v.chunks(cols.max(1)).take(rows).map(|c| c.to_vec()).collect();
        if cols == 0 {
            Matrix::zeros(Ring::Integers, rows, 0)
        } else {
            Matrix::from_i64_rows(Ring::Integers, &rows_v)
        }
    })
}

fn shaped_matrix(max: usize, bound: i64) -> impl Strategy<Value = Matrix> {
    (1..=max, 1..=max).prop_flat_map(move |(r, c)| small_matrix(r, c, bound))
}

/// C_0 ← C_1 ← C_2 over Z with d_2 factoring through ker d_1.
fn integer_complex() -> impl Strategy<Value = ChainComplexData> {
    (1usize..=4, 1usize..=4, 1usize..=3)
        .prop_flat_map(|(r0, r1, r2)| (small_matrix(r0, r1, 3), Just(r2), prop::collection::vec(-3i64..=3, 16)))
        .prop_map(|(d1, r2, coeffs)| {
            let k = kernel_basis(&d1);
            let mix: Vec<Vec<i64>> = (0..k.cols()).map(|i| (0..r2).map(|j| coeffs[(i * r2 + j) % 16]).collect()).collect();
            let d2 = if k.cols() == 0 {
                Matrix::zeros(Ring::Integers, d1.cols(), r2)
            } else {
                k.mul(&Matrix::from_i64_rows(Ring::Integers, &mix))
            };
            let mut c = ChainComplexData::new(Ring::Integers);
            c.set_rank(0, d1.rows());
            c.set_rank(1, d1.cols());
            c.set_rank(2, r2);
            c.set_differential(1, d1);
            c.set_differential(2, d2);
            c
        })
}

fn partition() -> impl Strategy<Value = Partition> {
    prop::collection::vec(1usize..=5, 0..=5).prop_map(|mut v| {
        v.sort_unstable_by(|a, b| b.cmp(a));
        Partition::new(v).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn smith_form_diagonalizes_with_divisibility(a in shaped_matrix(5, 6)) {
        let s = smith_normal_form(&a).unwrap();
        let d = s.u.mul(&a).mul(&s.v);
        for r in 0..d.rows() {
            for c in 0..d.cols() {
                let want = if r == c && r < s.factors.len() { s.factors[r].clone() } else { Int::zero() };
                prop_assert_eq!(d.get(r, c), want);
            }
        }
        for w in s.factors.windows(2) {
            prop_assert!(w[1].is_multiple_of(&w[0]));
        }
        prop_assert!(s.factors.iter().all(|f| f.is_positive()));
        let total: Int = s.factors.iter().product();
        let rank = spf_core::linalg::rank(&a);
        prop_assert_eq!(rank, s.factors.len());
        prop_assert!(!total.is_zero() || s.factors.is_empty());
    }

    #[test]
    fn smith_transforms_are_unimodular(a in shaped_matrix(4, 5)) {
        let s = smith_normal_form(&a).unwrap();
        for t in [&s.u, &s.v] {
            let f = smith_normal_form(t).unwrap().factors;
            prop_assert_eq!(f.len(), t.rows());
            prop_assert!(f.iter().all(|x| x.is_one()));
        }
    }

    #[test]
    fn chain_complexes_square_to_zero_and_keep_euler_characteristic(c in integer_complex()) {
        prop_assert!(c.is_complex());
        let h = c.homology_all();
        let chi_c: i64 = (0..=2).map(|q| if q % 2 == 0 { c.rank(q) as i64 } else { -(c.rank(q) as i64) }).sum();
        let chi_h: i64 = (0..=2).map(|q| {
            let r = h.get(q).free_rank as i64;
            if q % 2 == 0 { r } else { -r }
        }).sum();
        prop_assert_eq!(chi_c, chi_h);
    }

    #[test]
    fn universal_coefficients(c in integer_complex(), p in prop::sample::select(vec![2u64, 3, 5])) {
        let integral = c.homology_all();
        let direct = c.change_ring(Ring::PrimeField(p)).homology_all();
        prop_assert_eq!(direct, integral.base_change_fp(p));
        let rational = c.change_ring(Ring::Rationals).homology_all();
        prop_assert_eq!(rational, integral.rationalize());
    }

    #[test]
    fn conjugation_is_an_involution(l in partition()) {
        prop_assert_eq!(l.conjugate().conjugate(), l.clone());
        prop_assert_eq!(l.conjugate().weight(), l.weight());
    }

    #[test]
    fn cores_from_abacus_and_rim_hooks_agree(l in partition(), p in 2usize..=5) {
        let core = p_core(&l, p);
        prop_assert_eq!(p_core_by_rim_hooks(&l, p, false), core.clone());
        prop_assert_eq!(p_core_by_rim_hooks(&l, p, true), core.clone());
        prop_assert_eq!((l.weight() - core.weight()) % p, 0);
        prop_assert_eq!(p_core(&core, p), core);
    }

    #[test]
    fn enumerations_have_binomial_sizes(n in 0usize..=5, k in 0usize..=4) {
        prop_assert_eq!(subsets(n, k).len() as u128, binomial(n, k));
        prop_assert_eq!(multisets(n, k).len() as u128, if n == 0 { u128::from(k == 0) } else { binomial(n + k - 1, k) });
        if n > 0 {
            prop_assert_eq!(compositions(k, n).len() as u128, binomial(k + n - 1, n - 1));
        }
    }

    #[test]
    fn permutation_sign_is_multiplicative(n in 1usize..=5, i in 0usize..120, j in 0usize..120) {
        let perms = permutations(n);
        prop_assert_eq!(perms.len() as u128, factorial(n));
        let (a, b) = (&perms[i % perms.len()], &perms[j % perms.len()]);
        let ab: Vec<usize> = (0..n).map(|x| a[b[x]]).collect();
        prop_assert_eq!(perm_sign(&ab), perm_sign(a) * perm_sign(b));
    }
}

const FUNCTORS: [&str; 12] = [
    "S[2]", "W[2]", "G[2]", "T[2]", "S[3]", "G[3]", "Schur[2,1]", "Weyl[2,1]", "Dual(T[2])", "Param(S[2],2)", "S[1]*W[2]",
    "S[2] o W[2]",
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn functors_preserve_composition(
        name in prop::sample::select(FUNCTORS.to_vec()),
        a in small_matrix(2, 3, 2),
        b in small_matrix(3, 2, 2),
    ) {
        let f = fe(name);
        let lhs = eval_map(&f, &a.mul(&b)).unwrap();
        let rhs = eval_map(&f, &a).unwrap().mul(&eval_map(&f, &b).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn functors_preserve_identities(name in prop::sample::select(FUNCTORS.to_vec()), m in 1usize..=3) {
        let f = fe(name);
        let id = eval_identity(&f, m, Ring::Integers).unwrap();
        prop_assert_eq!(id.clone(), Matrix::identity(Ring::Integers, dimension(&f, m, Ring::Integers).unwrap()));
        prop_assert_eq!(eval_map(&f, &Matrix::identity(Ring::Integers, m)).unwrap(), id);
    }

    #[test]
    fn functors_reduce_mod_p(name in prop::sample::select(FUNCTORS.to_vec()), a in small_matrix(3, 2, 4), p in prop::sample::select(vec![2u64, 3])) {
        let f = fe(name);
        if f.check_ring(Ring::PrimeField(p)).is_ok() {
            let over_z = eval_map(&f, &a).unwrap().change_ring(Ring::PrimeField(p));
            let over_fp = eval_map(&f, &a.change_ring(Ring::PrimeField(p))).unwrap();
            prop_assert_eq!(over_z, over_fp);
        }
    }

    #[test]
    fn dold_kan_is_simplicial_and_normalizes_back(c in integer_complex()) {
        let x = dold_kan(&c, 4);
        prop_assert!(x.satisfies_identities(), "{:?}", x.identity_violation());
        let n = chains(&x, true).unwrap();
        let u = chains(&x, false).unwrap();
        prop_assert!(n.is_complex() && u.is_complex());
        let mut h = c.homology_all();
        h.degrees.retain(|&q, _| q < 4);
        let mut hn = n.homology_all();
        hn.degrees.retain(|&q, _| q < 4);
        let mut hu = u.homology_all();
        hu.degrees.retain(|&q, _| q < 4);
        prop_assert_eq!(&hn, &h);
        prop_assert_eq!(&hu, &h);
    }
}

#[test]
fn functors_of_eilenberg_maclane_objects_are_simplicial() {
    for ring in [Ring::Integers, Ring::PrimeField(2), Ring::PrimeField(3)] {
        for n in 1..=2 {
            for name in ["S[2]", "W[2]", "G[2]", "T[2]"] {
                let f = fe(name);
                let q_max = 2 * n + 1;
                let x = apply_functor(&f, &k_n(n, q_max, ring), 1, q_max).unwrap();
                assert!(x.satisfies_identities(), "{name}(K({n})) over {ring}: {:?}", x.identity_violation());
            }
        }
    }
}

#[test]
fn normalized_chains_vanish_outside_the_window() {
    for n in 1..=2 {
        for (name, d) in [("S[2]", 2), ("W[2]", 2), ("G[2]", 2), ("T[2]", 2), ("S[3]", 3)] {
            if n * d + 1 > 5 {
                continue;
            }
            let q_max = n * d + 1;
            let x = apply_functor(&fe(name), &k_n(n, q_max, Ring::Integers), 1, q_max).unwrap();
            for q in 0..=q_max {
                let r = normalized_basis(&x, q).cols();
                if q < n || q > n * d {
                    assert_eq!(r, 0, "N_{q} {name}(K({n}))");
                }
            }
        }
    }
}

#[test]
fn normalized_and_unnormalized_chains_are_quasi_isomorphic() {
    for (name, n) in [("S[2]", 1), ("G[2]", 1), ("W[2]", 2), ("Schur[2,1]", 1)] {
        let f = fe(name);
        let d = f.degree(Ring::Integers).unwrap();
        let q_max = n * d + 1;
        let x = apply_functor(&f, &k_n(n, q_max, Ring::Integers), 1, q_max).unwrap();
        let mut hn = chains(&x, true).unwrap().homology_all();
        let mut hu = chains(&x, false).unwrap().homology_all();
        hn.degrees.retain(|&q, _| q < q_max as i64);
        hu.degrees.retain(|&q, _| q < q_max as i64);
        assert_eq!(hn, hu, "{name} at height {n}");
    }
}

#[test]
fn model_and_generic_engines_agree() {
    for ring in [Ring::Integers, Ring::PrimeField(2), Ring::PrimeField(3)] {
        for (name, m, n) in [("S[2]", 2, 1), ("G[2]", 2, 1), ("W[2]", 1, 2), ("T[2]", 1, 2), ("S[3]", 1, 1), ("Weyl[2,1]", 2, 1)] {
            let f = fe(name);
            let model = derived_functors(&DerivedRequest::new(f.clone(), ring, m, n)).unwrap();
            let generic = derived_functors_generic(&f, ring, m, n, DEFAULT_BUDGET).unwrap();
            assert_eq!(model, generic, "L_*{name}(k^{m}; {n}) over {ring}");
        }
    }
}

#[test]
fn negation_does_not_change_smith_factors() {
    let a = Matrix::from_i64_rows(Ring::Integers, &[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
    let f = smith_normal_form(&a).unwrap().factors;
    let g = smith_normal_form(&a.neg()).unwrap().factors;
    assert_eq!(f, g);
    assert_eq!(f, vec![Int::from(2), Int::from(6), Int::from(12)]);
    assert!(f.iter().all(|x| !x.is_negative()));
}
