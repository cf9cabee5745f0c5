mod common;

use common::oracle::{membership, Answer};
use common::{poly, ring};
use proptest::prelude::*;
use tamecheck_core::ideal::{
    eliminate, ideal_member, is_standard_basis, local_dim_zero, saturate, standard_basis,
    DimVerdict, Engine, Ideal, MonomialOrdering,
};
use tamecheck_core::parse::parse_in_ring;
use tamecheck_core::poly::{Monomial, Polynomial, Ring};

use std::sync::Arc;

fn xyz() -> Arc<Ring> {
    ring(&["x", "y", "z"])
}

fn gens(r: Arc<Ring>, max: usize) -> impl Strategy<Value = Vec<Polynomial>> {
    prop::collection::vec(poly(r, 3, 3), 1..=max)
        .prop_map(|v| v.into_iter().filter(|g| !g.is_zero()).collect::<Vec<_>>())
        .prop_filter("at least one generator", |v| !v.is_empty())
}

fn contains_all(i: &Ideal, ps: &[Polynomial], eng: &Engine) -> bool {
    ps.iter().all(|g| ideal_member(g, i, false, eng).unwrap())
}

proptest! {
    #![proptest_config(common::config(48))]

    #[test]
    fn returned_bases_pass_the_s_pair_check(g in gens(xyz(), 3)) {
        let eng = Engine::default();
        let i = Ideal::new(&xyz(), g).unwrap();
        for ord in [MonomialOrdering::DegRevLex, MonomialOrdering::NegDegRevLex] {
            let b = standard_basis(&i, &ord, &eng).unwrap();
            prop_assert!(is_standard_basis(&b, &ord, &eng).unwrap());
        }
    }

    #[test]
    fn membership_agrees_with_linear_algebra(g in gens(xyz(), 3), c in prop::collection::vec(poly(xyz(), 1, 2), 3), f in poly(xyz(), 3, 3)) {
        let r = xyz();
        let eng = Engine::default();
        let i = Ideal::new(&r, g.clone()).unwrap();
        // a combination with low-degree cofactors is always a member
        let mut comb = Polynomial::zero(&r);
        for (ci, gi) in c.iter().zip(&g) {
            comb = &comb + &(ci * gi);
        }
        prop_assert!(ideal_member(&comb, &i, false, &eng).unwrap());
        prop_assert_eq!(membership(&comb, &g, &r, 1), Answer::Member);
        match membership(&f, &g, &r, 2) {
            Answer::Member => prop_assert!(ideal_member(&f, &i, false, &eng).unwrap()),
            Answer::NonMember => prop_assert!(!ideal_member(&f, &i, false, &eng).unwrap()),
            Answer::Inconclusive => {}
        }
    }

    #[test]
    fn saturation_is_monotone_and_idempotent(g in gens(xyz(), 2), h in poly(xyz(), 2, 2)) {
        prop_assume!(!h.is_zero() && !h.is_constant());
        let r = xyz();
        let eng = Engine::default();
        let i = Ideal::new(&r, g.clone()).unwrap();
        let j = Ideal::new(&r, vec![h]).unwrap();
        let s = saturate(&i, &j, &eng).unwrap();
        prop_assert!(contains_all(&s, &g, &eng));
        let s2 = saturate(&s, &j, &eng).unwrap();
        prop_assert!(contains_all(&s2, s.generators(), &eng));
        prop_assert!(contains_all(&s, s2.generators(), &eng));
    }

    #[test]
    fn eliminants_lie_in_the_ideal(g in gens(xyz(), 3), v in 0usize..3) {
        let r = xyz();
        let eng = Engine::default();
        let i = Ideal::new(&r, g).unwrap();
        let e = eliminate(&i, &[v], &eng).unwrap();
        for p in e.generators() {
            prop_assert!(ideal_member(&p.embed(&r).unwrap(), &i, false, &eng).unwrap());
        }
    }

    #[test]
    fn dim_zero_certificates_are_local_members(g in gens(ring(&["x", "y"]), 3)) {
        let r = ring(&["x", "y"]);
        let eng = Engine::default();
        let i = Ideal::new(&r, g).unwrap();
        if let DimVerdict::DimZeroAtOrigin { pure_powers } = local_dim_zero(&i, &eng).unwrap() {
            prop_assert_eq!(pure_powers.len(), 2);
            // the colength is at most the product of the pure-power exponents, and the
            // maximal ideal raised to the colength lies in the ideal
            let colength: u16 = pure_powers.iter().map(|&(_, e)| e).product();
            for v in 0..2 {
                let mut exps = vec![0u16; 2];
                exps[v] = colength;
                let m = Polynomial::term(&r, Monomial::new(exps), tamecheck_core::poly::rat(1));
                prop_assert!(ideal_member(&m, &i, true, &eng).unwrap());
            }
        }
    }
}

#[test]
fn cuspidal_parametrization() {
    // (u - s^2, v - s^3) with s eliminated: v^2 - u^3
    let r = ring(&["s", "u", "v"]);
    let eng = Engine::default();
    let i = Ideal::new(
        &r,
        ["u - s^2", "v - s^3"].map(|t| parse_in_ring(t, &r).unwrap()),
    )
    .unwrap();
    let e = eliminate(&i, &[0], &eng).unwrap();
    let want = parse_in_ring("v^2 - u^3", e.ring()).unwrap();
    assert_eq!(e.generators().len(), 1);
    assert_eq!(e.generators()[0].normalized(), want.normalized());
}

#[test]
fn oracle_sanity() {
    let r = ring(&["x", "y"]);
    let g = ["x^2", "x*y"].map(|t| parse_in_ring(t, &r).unwrap());
    let f = |t: &str| parse_in_ring(t, &r).unwrap();
    assert_eq!(membership(&f("x^2*y + 3*x*y^2"), &g, &r, 2), Answer::Member);
    assert_eq!(membership(&f("y^2"), &g, &r, 2), Answer::NonMember);
    assert_eq!(membership(&f("x"), &g, &r, 2), Answer::NonMember);
}
