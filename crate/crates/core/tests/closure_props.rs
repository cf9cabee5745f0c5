mod common;

use std::sync::Arc;

use common::{germ, ring};
use proptest::prelude::*;
use tamecheck_core::closure::{
    arc_falsify, closure_certificate, closure_member, ArcCatalog, ClosureOptions, ClosureOutcome,
};
use tamecheck_core::exec::ExecMode;
use tamecheck_core::ideal::{ideal_member, Engine, Ideal};
use tamecheck_core::parse::{parse_in_ring, parse_rational};
use tamecheck_core::poly::{Polynomial, Rational, Ring};
use tamecheck_core::verdict::ClosureCertificate;

fn xy() -> Arc<Ring> {
    ring(&["x", "y"])
}

fn opts(mode: ExecMode) -> ClosureOptions {
    ClosureOptions {
        max_m: 3,
        max_weight: 3,
        max_arc_terms: 2,
        mode,
    }
}

fn origin() -> Vec<Rational> {
    vec![Rational::from_integer(0.into()); 2]
}

fn gens() -> impl Strategy<Value = Vec<Polynomial>> {
    prop::collection::vec(germ(xy(), 2, 3), 1..=2)
        .prop_map(|v| v.into_iter().filter(|g| !g.is_zero()).collect::<Vec<_>>())
        .prop_filter("nonzero generators", |v| !v.is_empty())
}

/// Expands a certificate from its strings: `unit · f(x + b)^m` against
/// `Σ cofactor · Π g(x + b)`.
fn re_expand(c: &ClosureCertificate) -> bool {
    let r = Ring::new(c.vars.iter().cloned()).unwrap();
    let base: Vec<Rational> = c.base.iter().map(|t| parse_rational(t).unwrap()).collect();
    let p = |t: &str| parse_in_ring(t, &r).unwrap().translate(&base).unwrap();
    let unit = parse_in_ring(&c.unit, &r).unwrap();
    if unit.constant_term() == Rational::from_integer(0.into()) {
        return false;
    }
    let g: Vec<Polynomial> = c.generators.iter().map(|t| p(t)).collect();
    let lhs = &unit * &p(&c.f).pow(c.m);
    let mut rhs = Polynomial::zero(&r);
    for pc in &c.cofactors {
        if pc.product.len() != c.m as usize {
            return false;
        }
        let mut term = parse_in_ring(&pc.cofactor, &r).unwrap();
        for &i in &pc.product {
            term = &term * &g[i];
        }
        rhs = &rhs + &term;
    }
    lhs == rhs
}

proptest! {
    #![proptest_config(common::config(32))]

    #[test]
    fn modes_agree(f in germ(xy(), 3, 3), g in gens()) {
        let eng = Engine::default();
        let a = closure_member(&f, &g, &origin(), &[], &opts(ExecMode::Sequential), &eng).unwrap();
        let b = closure_member(&f, &g, &origin(), &[], &opts(ExecMode::Parallel), &eng).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn outcomes_carry_checkable_evidence(f in germ(xy(), 3, 3), g in gens()) {
        let eng = Engine::default();
        let o = opts(ExecMode::Sequential);
        match closure_member(&f, &g, &origin(), &[], &o, &eng).unwrap() {
            ClosureOutcome::Certified(c) => {
                prop_assert!(re_expand(&c));
                // no arc can see f vanish to lower order than the ideal
                let catalog = ArcCatalog::new(2, o.max_weight, o.max_arc_terms);
                prop_assert!(arc_falsify(&f, &g, &origin(), &catalog, &[], o.mode).unwrap().is_none());
            }
            ClosureOutcome::Refuted(w) => {
                prop_assert!(w.verify().is_ok());
                prop_assert!(w.ord_j.is_none_or(|j| w.ord_f < j));
                prop_assert!(closure_certificate(&f, &g, &origin(), o.max_m, &eng).unwrap().is_none());
            }
            ClosureOutcome::Unknown(notes) => prop_assert!(!notes.is_empty()),
        }
    }

    #[test]
    fn ideal_members_are_certified_with_m_one(c in prop::collection::vec(germ(xy(), 1, 2), 2), g in gens()) {
        let r = xy();
        let eng = Engine::default();
        let mut f = Polynomial::zero(&r);
        for (ci, gi) in c.iter().zip(&g) {
            f = &f + &(ci * gi);
        }
        let i = Ideal::new(&r, g.clone()).unwrap();
        prop_assert!(ideal_member(&f, &i, true, &eng).unwrap());
        match closure_member(&f, &g, &origin(), &[], &opts(ExecMode::Sequential), &eng).unwrap() {
            ClosureOutcome::Certified(cert) => {
                prop_assert_eq!(cert.m, 1);
                prop_assert!(re_expand(&cert));
            }
            other => prop_assert!(false, "expected a certificate, got {other:?}"),
        }
    }

    #[test]
    fn repeated_runs_are_identical(f in germ(xy(), 3, 3), g in gens()) {
        let o = opts(ExecMode::Parallel);
        let a = closure_member(&f, &g, &origin(), &[], &o, &Engine::default()).unwrap();
        let b = closure_member(&f, &g, &origin(), &[], &o, &Engine::default()).unwrap();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn classic_closures() {
    let r = xy();
    let p = |t: &str| parse_in_ring(t, &r).unwrap();
    let eng = Engine::default();
    let o = opts(ExecMode::Sequential);
    // x*y is integral over (x^2, y^2) but not a member
    let g = [p("x^2"), p("y^2")];
    match closure_member(&p("x*y"), &g, &origin(), &[], &o, &eng).unwrap() {
        ClosureOutcome::Certified(c) => {
            assert_eq!(c.m, 2);
            assert!(re_expand(&c));
        }
        other => panic!("{other:?}"),
    }
    // x is not: along (s, 0) it has order 1 against 2
    match closure_member(&p("x"), &g, &origin(), &[], &o, &eng).unwrap() {
        ClosureOutcome::Refuted(w) => assert_eq!((w.ord_f, w.ord_j), (1, Some(2))),
        other => panic!("{other:?}"),
    }
}
