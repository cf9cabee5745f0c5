mod common;

use common::{poly, ring};
use proptest::prelude::*;
use tamecheck_core::parse::{parse_in_ring, parse_polynomial};
use tamecheck_core::poly::{
    arc_order, rat, t_expansion, ParamArc, Polynomial, UniPoly, VarContext,
};

fn xyz() -> std::sync::Arc<tamecheck_core::poly::Ring> {
    ring(&["x", "y", "z"])
}

/// Arcs through the origin: each coordinate is `c1 s^a + c2 s^b`.
fn arc() -> impl Strategy<Value = ParamArc> {
    let coord = (-2i64..=2, 1usize..=3, -2i64..=2, 1usize..=4).prop_map(|(c1, a, c2, b)| {
        UniPoly::monomial(rat(c1), a).add(&UniPoly::monomial(rat(c2), b))
    });
    prop::collection::vec(coord, 3).prop_map(ParamArc::new)
}

fn order(p: &Polynomial, a: &ParamArc) -> Option<usize> {
    arc_order(p, a).unwrap().order
}

proptest! {
    #![proptest_config(common::config(96))]

    #[test]
    fn ring_axioms(a in poly(xyz(), 3, 4), b in poly(xyz(), 3, 4), c in poly(xyz(), 2, 3)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn leibniz(a in poly(xyz(), 3, 4), b in poly(xyz(), 3, 4), v in 0usize..3) {
        let lhs = (&a * &b).diff(v);
        let rhs = &(&a * &b.diff(v)) + &(&b * &a.diff(v));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn arc_order_is_a_valuation(a in poly(xyz(), 3, 4), b in poly(xyz(), 3, 4), mu in arc()) {
        let (oa, ob) = (order(&a, &mu), order(&b, &mu));
        let prod = order(&(&a * &b), &mu);
        match (oa, ob) {
            (Some(x), Some(y)) => prop_assert_eq!(prod, Some(x + y)),
            _ => prop_assert_eq!(prod, None),
        }
        if let Some(k) = order(&(&a + &b), &mu) {
            prop_assert!(oa.is_none_or(|x| k >= x.min(ob.unwrap_or(x))));
            prop_assert!(ob.is_none_or(|y| k >= y.min(oa.unwrap_or(y))));
        }
    }

    #[test]
    fn t_expansion_reconstructs(f in poly(ring(&["x", "y", "t"]), 4, 6)) {
        let ctx = VarContext::new(&["x", "y"], "t").unwrap();
        // drop constant terms of the t-coefficients so that the expansion is valid
        let full = ctx.full_ring().clone();
        let f = f.embed(&full).unwrap();
        let keep: Vec<_> = f
            .terms()
            .filter(|(m, _)| m.exps()[0] + m.exps()[1] > 0)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        let f = Polynomial::from_terms(&full, keep);
        let fs = t_expansion(&f, &ctx).unwrap();
        let t = Polynomial::var(&full, 2);
        let mut back = Polynomial::zero(&full);
        for (j, fj) in fs.iter().enumerate() {
            prop_assert_eq!(fj.nvars(), 2);
            back = &back + &(&fj.embed(&full).unwrap() * &t.pow(j as u32));
        }
        prop_assert_eq!(back, f);
    }

    #[test]
    fn render_parse_round_trip(a in poly(xyz(), 4, 6)) {
        let back = parse_in_ring(&a.to_string(), a.ring()).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn parse_of_product_is_product_of_parses(a in poly(xyz(), 3, 4), b in poly(xyz(), 3, 4)) {
        let r = xyz();
        let text = format!("({})*({})", a, b);
        prop_assert_eq!(parse_in_ring(&text, &r).unwrap(), &a * &b);
    }
}

#[test]
fn line_deformation_expands() {
    // y^2 (x^2 - (y - t)^2) = x^2 y^2 - y^4 + 2 t y^3 - t^2 y^2
    let ctx = VarContext::new(&["x", "y"], "t").unwrap();
    let f = parse_polynomial("y^2*(x^2-(y-t)^2)", &ctx).unwrap();
    let expected = parse_polynomial("x^2*y^2 - y^4 + 2*t*y^3 - t^2*y^2", &ctx).unwrap();
    assert_eq!(f, expected);
    let fs = t_expansion(&f, &ctx).unwrap();
    let s = ctx.spatial_ring();
    let want = ["x^2*y^2 - y^4", "2*y^3", "-y^2"].map(|w| parse_in_ring(w, s).unwrap());
    assert_eq!(fs, want.to_vec());
}

#[test]
fn quintic_coefficients() {
    let ctx = VarContext::new(&["z1", "z2", "z3"], "t").unwrap();
    let f = parse_polynomial("z1^5+z2^5+z1^6*z2^6*z3^2+t*z1^3*z2^3", &ctx).unwrap();
    let fs = t_expansion(&f, &ctx).unwrap();
    let s = ctx.spatial_ring();
    assert_eq!(fs[0], parse_in_ring("z1^5+z2^5+z1^6*z2^6*z3^2", s).unwrap());
    assert_eq!(fs[1], parse_in_ring("z1^3*z2^3", s).unwrap());
    assert_eq!(fs.len(), 2);
}
