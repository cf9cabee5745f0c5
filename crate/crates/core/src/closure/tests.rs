use super::*;
use crate::germ::build_singular_loci;
use crate::ideal::Budget;
use crate::parse::{parse_in_ring, parse_polynomial};
use crate::poly::{rat, VarContext};
use crate::verdict::{parse_arc, Status};

fn loci(vars: &[&str], f: &str) -> SingularLoci {
    let ctx = VarContext::new(vars, "t").unwrap();
    let f = parse_polynomial(f, &ctx).unwrap();
    build_singular_loci(&ctx, &f).unwrap()
}

fn polys(ring: &Arc<Ring>, src: &[&str]) -> Vec<Polynomial> {
    src.iter()
        .map(|s| parse_in_ring(s, ring).unwrap())
        .collect()
}

fn eng() -> Engine {
    Engine::new(Budget::default())
}

#[test]
fn xy_is_integral_over_squares() {
    // (xy)^2 = x^2 y^2 ∈ (x^2, y^2)^2
    let r = Ring::new(["x", "y"]).unwrap();
    let g = polys(&r, &["x^2", "y^2"]);
    let f = parse_in_ring("x*y", &r).unwrap();
    let origin = vec![rat(0), rat(0)];
    let out = closure_member(&f, &g, &origin, &[], &ClosureOptions::default(), &eng()).unwrap();
    let ClosureOutcome::Certified(c) = out else {
        panic!("{out:?}")
    };
    assert_eq!(c.m, 2);
    c.verify().unwrap();
}

#[test]
fn x_is_not_integral_over_square() {
    let r = Ring::new(["x", "y"]).unwrap();
    let g = polys(&r, &["x^2", "y"]);
    let f = parse_in_ring("x", &r).unwrap();
    let origin = vec![rat(0), rat(0)];
    let out = closure_member(&f, &g, &origin, &[], &ClosureOptions::default(), &eng()).unwrap();
    let ClosureOutcome::Refuted(w) = out else {
        panic!("{out:?}")
    };
    let arc = parse_arc(&w.arc).unwrap();
    // recompute the orders directly
    let of = arc_order(&f, &arc).unwrap().order.unwrap();
    assert_eq!(of, w.ord_f);
    for gi in &g {
        assert!(arc_order(gi, &arc).unwrap().order.is_none_or(|k| k > of));
    }
}

#[test]
fn base_point_is_respected() {
    // at (1, 0) the generator x - 1 vanishes but y does not matter
    let r = Ring::new(["x", "y"]).unwrap();
    let g = polys(&r, &["(x-1)^2"]);
    let f = parse_in_ring("x-1", &r).unwrap();
    let base = vec![rat(1), rat(0)];
    let out = closure_member(&f, &g, &base, &[], &ClosureOptions::default(), &eng()).unwrap();
    let ClosureOutcome::Refuted(w) = out else {
        panic!("{out:?}")
    };
    let arc = parse_arc(&w.arc).unwrap();
    assert_eq!(arc.base_point(), base);
    let f2 = parse_in_ring("(x-1)^3", &r).unwrap();
    let out = closure_member(&f2, &g, &base, &[], &ClosureOptions::default(), &eng()).unwrap();
    assert!(matches!(out, ClosureOutcome::Certified(_)));
}

#[test]
fn avoid_rejects_arcs_inside_its_zero_set() {
    // f = x is not integral over (x^2) but every witness arc lies in {y = 0} only if
    // forced; with avoid = (x) the arc must have x ≠ 0 as well
    let r = Ring::new(["x", "y"]).unwrap();
    let g = polys(&r, &["x^2"]);
    let f = parse_in_ring("x", &r).unwrap();
    let avoid = polys(&r, &["x"]);
    let origin = vec![rat(0), rat(0)];
    let cat = ArcCatalog::new(2, 2, 2);
    let w = arc_falsify(&f, &g, &origin, &cat, &avoid, ExecMode::Sequential)
        .unwrap()
        .unwrap();
    let arc = parse_arc(&w.arc).unwrap();
    assert!(!arc_compose(&avoid[0], &arc).unwrap().is_zero());
    let avoid_all = polys(&r, &["x*y - x*y"]);
    assert!(avoid_all.iter().all(|p| p.is_zero()));
}

#[test]
fn modes_find_the_same_witness() {
    let r = Ring::new(["x", "y", "z"]).unwrap();
    let g = polys(&r, &["x^3", "y^2 - z^3", "z^4"]);
    let f = parse_in_ring("x*y", &r).unwrap();
    let origin = vec![rat(0); 3];
    let cat = ArcCatalog::new(3, 3, 3);
    let a = arc_falsify(&f, &g, &origin, &cat, &[], ExecMode::Sequential).unwrap();
    let b = arc_falsify(&f, &g, &origin, &cat, &[], ExecMode::Parallel).unwrap();
    assert_eq!(a, b);
}

#[test]
fn jacobian_criterion_for_cusp_family() {
    // x^3 + y^2 + t*x^2: d/dx f_1 = 2x, and x is not in the closure of (x^2, y)
    let l = loci(&["x", "y"], "x^3+y^2+t*x^2");
    let v = jacobian_criterion(&l, &ClosureOptions::default(), &eng());
    assert_eq!(v.status, Status::Fails);
    v.verify().unwrap();
    // x^3 + y^2 + t*x*y: d/dx f_1 = y ∈ (3x^2, 2y)
    let l = loci(&["x", "y"], "x^3+y^2+t*x^3");
    let v = jacobian_criterion(&l, &ClosureOptions::default(), &eng());
    assert!(v.binding_holds(), "{v:?}");
    v.verify().unwrap();
}

#[test]
fn isolated_singularity_makes_cond_vacuous() {
    let l = loci(&["x", "y"], "x^2+y^2+t*x");
    let v = check_cond(&l, &[], &ClosureOptions::default(), &eng());
    assert!(v.binding_holds());
}

#[test]
fn sampled_points_lie_on_the_set() {
    let r = Ring::new(["x", "y"]).unwrap();
    let on = polys(&r, &["y"]);
    let pts = sample_base_points(2, &[vec![rat(3), rat(0)], vec![rat(1), rat(1)]], &on).unwrap();
    assert_eq!(
        pts,
        vec![
            vec![rat(3), rat(0)],
            vec![rat(1), rat(0)],
            vec![rat(-1), rat(0)]
        ]
    );
}

#[test]
fn lemma_diagnostics_on_line() {
    // F = x^2 + t*x^3: along x = s, t = s the coefficient f_1 = x^3 has order 3 > κ = 1
    let l = loci(&["x"], "x^2+t*x^3");
    let arc = parse_arc(&["s".to_string(), "s".to_string()]).unwrap();
    let d = order_lemma_diagnostics(&l, &arc).unwrap();
    assert!(d.applicable);
    assert_eq!(d.kappa, Some(1));
    assert_eq!(d.coefficients, vec![(1, Some(3), true)]);
    assert_eq!(d.full_partial_order, Some(1));
}
