use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::Ratio;
use proptest::prelude::*;

use qschur::algebra::{tau_alg, Terms};
use qschur::bases::is_unitriangular;
use qschur::coeffs::{enumerate_st, h_st, StMode};
use qschur::fforacle::FqSpace;
use qschur::permat::{a_st, cond_star, enumerate_xi, leq_alg, member, to_cxi};
use qschur::qpoly::{bar_poly, qbinom};
use qschur::stab::mult_kdot;
use qschur::{Algebra, AlgebraType, Element, IndexSet, PeriodicMatrix, Poly};

fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec((-6i64..=6, -4i64..=4), 0..6)
        .prop_map(|t| Poly::from_terms(t.into_iter().map(|(e, c)| (e, BigInt::from(c)))))
}

/// Entries `(i, j, v)` with `i` in one period and `|i - j| <= 2`.
fn small_matrix(n: i64) -> impl Strategy<Value = PeriodicMatrix> {
    prop::collection::vec((1..=n, -2i64..=2, 1i64..=2), 0..5)
        .prop_map(move |e| PeriodicMatrix::from_entries(n, e.into_iter().map(|(i, k, v)| (i, i + k, v))))
}

fn fibers_pairs(mats: &[PeriodicMatrix]) -> impl Iterator<Item = (&PeriodicMatrix, &PeriodicMatrix)> {
    mats.iter()
        .flat_map(move |a| mats.iter().map(move |b| (a, b)))
        .filter(|(a, b)| a.ro() == b.ro() && a.co() == b.co())
}

#[test]
fn qbinom_pascal() {
    for a in -8..=8 {
        for b in 1..=8 {
            let first = &(&Poly::v(2 * b) * &qbinom(a - 1, b)) + &qbinom(a - 1, b - 1);
            let second = &qbinom(a - 1, b) + &(&Poly::v(2 * (a - b)) * &qbinom(a - 1, b - 1));
            assert_eq!(qbinom(a, b), first, "a={a} b={b}");
            assert_eq!(qbinom(a, b), second, "a={a} b={b}");
        }
    }
}

#[test]
fn qbinom_counts_subspaces() {
    for q in [2u8, 3] {
        for a in 0..=6usize {
            let sp = FqSpace::new(q, a).unwrap();
            for b in 0..=a {
                let count = sp.enum_subspaces(b).unwrap().len();
                let val = qbinom(a as i64, b as i64).eval_q(&BigInt::from(q));
                assert_eq!(val, Some(Ratio::from_integer(BigInt::from(count))), "q={q} a={a} b={b}");
            }
        }
    }
}

#[test]
fn p_shift_keeps_order() {
    for ty in AlgebraType::ALL {
        let mats = enumerate_xi(4, 2, 2, ty);
        for (a, b) in fibers_pairs(&mats) {
            let base = leq_alg(a, b).unwrap();
            for p in [2, 4] {
                assert_eq!(leq_alg(&a.p_shift(p, ty), &b.p_shift(p, ty)).unwrap(), base);
            }
        }
    }
}

#[test]
fn tau_is_order_isomorphism() {
    for d in 1..=3 {
        let mats = enumerate_xi(4, d, 2, AlgebraType::Ji);
        for (a, b) in fibers_pairs(&mats) {
            assert_eq!(leq_alg(a, b).unwrap(), leq_alg(&a.tau(), &b.tau()).unwrap());
        }
    }
}

#[test]
fn shifted_exponents_are_integers() {
    let tris = enumerate_xi(4, 2, 1, AlgebraType::C);
    for a in enumerate_xi(4, 2, 2, AlgebraType::C) {
        for b in tris.iter().filter(|b| b.co() == a.ro()) {
            let al = b.tri_alpha().unwrap();
            for p in enumerate_st(&a, &al, StMode::Finite) {
                assert!(h_st(&a, &al, &p.s, &p.t, &p.target).is_ok());
            }
        }
    }
}

#[test]
fn monomial_elements_are_bar_invariant() {
    let alg = Algebra::finite(4);
    for ty in [AlgebraType::C, AlgebraType::Ji] {
        for a in enumerate_xi(4, 2, 2, ty) {
            let m = alg.monomial_terms(&a, ty).unwrap();
            assert_eq!(alg.bar_terms(&m).unwrap(), m);
        }
    }
}

#[test]
fn tau_preserves_finite_canonical_basis() {
    let alg = Algebra::finite(4);
    for d in 1..=2 {
        for a in enumerate_xi(4, d, 2, AlgebraType::Ji) {
            let c = alg.canonical(&a, AlgebraType::Ji, Some(d)).unwrap();
            let ct = alg.canonical(&a.tau(), AlgebraType::Ij, Some(d)).unwrap();
            assert_eq!(tau_alg(&c), ct);
        }
    }
}

#[test]
fn stable_canonical_is_unitriangular() {
    let alg = Algebra::stable(4, AlgebraType::C);
    let a = PeriodicMatrix::from_entries(4, [(0, 0, -1), (1, 1, -2), (3, 3, -2), (2, 2, 1), (1, 3, 1), (-1, -3, 1)]);
    assert!(member(&a, IndexSet::XiTilde(AlgebraType::C)));
    let c = alg.canonical_terms(&a).unwrap();
    assert!(is_unitriangular(&c, &a));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bar_is_involution(p in poly()) {
        prop_assert_eq!(bar_poly(&bar_poly(&p)), p);
    }

    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
    }

    #[test]
    fn bar_is_multiplicative(a in poly(), b in poly()) {
        prop_assert_eq!(bar_poly(&(&a * &b)), &bar_poly(&a) * &bar_poly(&b));
    }

    #[test]
    fn xi_membership_via_shift(m in small_matrix(4), d0 in 0i64..3, d2 in 0i64..3) {
        let sym = PeriodicMatrix::from_entries(4, m.entries().iter().flat_map(|&(i, j, v)| [(i, j, v), (-i, -j, v)]));
        let a = sym.add(&PeriodicMatrix::from_entries(4, [(0, 0, 2 * d0 + 1), (2, 2, 2 * d2 + 1)]));
        let size = to_cxi(&a).size();
        if size % 2 == 0 {
            let d = size / 2;
            prop_assert_eq!(member(&a, IndexSet::Xi(AlgebraType::C, d)), member(&to_cxi(&a), IndexSet::XiC(d)));
        }
    }

    #[test]
    fn star_iff_symmetric(idx in 0usize..1000, s in small_matrix(4), t in small_matrix(4)) {
        let mats = enumerate_xi(4, 2, 2, AlgebraType::C);
        let a = &mats[idx % mats.len()];
        prop_assert_eq!(a_st(a, &s, &t).is_symmetric(), cond_star(&s, &t));
    }

    #[test]
    fn star_pairs_give_symmetric_targets(idx in 0usize..1000, s in small_matrix(4)) {
        // t = s mirrored through (i, j) -> (-i-1, -j) satisfies the star condition
        let t = PeriodicMatrix::from_entries(4, s.entries().iter().map(|&(i, j, v)| (-i - 1, -j, v)));
        prop_assert!(cond_star(&s, &t));
        let mats = enumerate_xi(4, 2, 2, AlgebraType::C);
        prop_assert!(a_st(&mats[idx % mats.len()], &s, &t).is_symmetric());
    }

    #[test]
    fn stable_diagonal_is_identity(ty_i in 0usize..4, idx in 0usize..1000) {
        let ty = AlgebraType::ALL[ty_i];
        let mats = enumerate_xi(4, 2, 2, ty);
        let a = mats[idx % mats.len()].p_shift(-4, ty);
        let x = mult_kdot(&PeriodicMatrix::diag(&a.ro()), &a, ty).unwrap();
        let mut want = Terms::new();
        want.insert(a.clone(), Poly::one());
        prop_assert_eq!(x.terms, want);
    }

    #[test]
    fn bar_respects_products(idx in 0usize..1000, pick in 0usize..1000) {
        let alg = Algebra::finite(4);
        let mats = enumerate_xi(4, 2, 2, AlgebraType::C);
        let a = &mats[idx % mats.len()];
        let tris: Vec<_> = enumerate_xi(4, 2, 1, AlgebraType::C).into_iter().filter(|b| b.co() == a.ro()).collect();
        let b = &tris[pick % tris.len()];
        let x = Element::basis(AlgebraType::C, Some(2), b);
        let y = Element::basis(AlgebraType::C, Some(2), a);
        let lhs = alg.bar(&alg.mult(&x, &y).unwrap()).unwrap();
        let rhs = alg.mult(&alg.bar(&x).unwrap(), &alg.bar(&y).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn ii_is_the_overlap_of_ji_and_ij() {
    let ji: BTreeSet<_> = enumerate_xi(4, 2, 2, AlgebraType::Ji).into_iter().collect();
    let ij: BTreeSet<_> = enumerate_xi(4, 2, 2, AlgebraType::Ij).into_iter().collect();
    let ii: BTreeSet<_> = enumerate_xi(4, 2, 2, AlgebraType::Ii).into_iter().collect();
    assert_eq!(ji.intersection(&ij).cloned().collect::<BTreeSet<_>>(), ii);
}
