use super::*;
use crate::corpus;
use crate::parse::parse_problem_file;
use crate::verdict::Evidence;

fn verdicts(pairs: &[(Check, Verdict)]) -> Verdicts {
    let mut v = Verdicts::default();
    for (c, x) in pairs {
        let slot = match c {
            Check::Cond0 => &mut v.cond0,
            Check::Cond => &mut v.cond,
            Check::Cond2 => &mut v.cond2,
            Check::Jacobian => &mut v.jacobian,
            Check::Tame => &mut v.tame,
        };
        *slot = Some(x.clone());
    }
    v
}

fn violations(a: &[AuditEntry]) -> usize {
    a.iter()
        .filter(|e| e.status == AuditStatus::Violation)
        .count()
}

#[test]
fn failing_premise_never_violates() {
    let v = verdicts(&[
        (Check::Cond2, Verdict::fails("")),
        (Check::Cond, Verdict::holds("")),
    ]);
    assert_eq!(violations(&implication_audit(&v, None, &[])), 0);
}

#[test]
fn jacobian_holds_tame_fails_is_a_violation() {
    let v = verdicts(&[
        (Check::Jacobian, Verdict::holds("")),
        (Check::Tame, Verdict::fails("")),
    ]);
    let a = implication_audit(&v, None, &[]);
    assert_eq!(violations(&a), 1);
    let e = a
        .iter()
        .find(|e| e.status == AuditStatus::Violation)
        .unwrap();
    assert_eq!(
        (e.premise.as_str(), e.conclusion.as_str()),
        ("jacobian", "tame")
    );
}

#[test]
fn qualified_holds_is_not_binding() {
    let v = verdicts(&[
        (
            Check::Cond,
            Verdict::holds("").with_qualifier(Qualifier::OnSample),
        ),
        (Check::Tame, Verdict::fails("")),
    ]);
    assert_eq!(violations(&implication_audit(&v, None, &[])), 0);
}

#[test]
fn cond2_requires_equal_singular_germs() {
    let v = verdicts(&[(Check::Cond2, Verdict::holds(""))]);
    assert_eq!(violations(&implication_audit(&v, Some(false), &[])), 1);
    assert_eq!(violations(&implication_audit(&v, Some(true), &[])), 0);
}

#[test]
fn audit_lists_every_implication() {
    let a = implication_audit(&Verdicts::default(), None, &[]);
    assert_eq!(a.len(), 8);
}

#[test]
fn options_reject_zero_caps() {
    let o = AnalysisOptions {
        max_power: 0,
        ..AnalysisOptions::default()
    };
    assert!(o.validate().is_err());
    assert_eq!("cond2".parse::<Check>().unwrap(), Check::Cond2);
    assert!("cond3".parse::<Check>().is_err());
}

#[test]
fn radial_problem_is_clean() {
    let p = parse_problem_file("vars = x y\nparam = t\nF = x^2+y^2\n").unwrap();
    let r = analyze(&p, &AnalysisOptions::default()).unwrap();
    for (c, v) in r.verdicts.iter() {
        assert_eq!(v.status, Status::Holds, "{}", c.name());
    }
    assert!(verify_report(&r).ok());
}

#[test]
fn json_round_trip() {
    let p = corpus::find("lines").unwrap().problem().unwrap();
    let r = analyze(&p, &AnalysisOptions::default()).unwrap();
    let text = render_json(&r);
    let back = parse_json(&text).unwrap();
    assert_eq!(back, r);
    assert_eq!(render_json(&back), text);
    let keys: Vec<String> = serde_json::from_str::<serde_json::Value>(&text)
        .unwrap()
        .as_object()
        .unwrap()
        .keys()
        .cloned()
        .collect();
    for k in [
        "problem",
        "loci",
        "discriminant",
        "milnor_set",
        "verdicts",
        "audit",
        "budgets",
    ] {
        assert!(keys.iter().any(|x| x == k), "{k}");
    }
}

#[test]
fn subset_of_checks() {
    let p = corpus::find("umbrella").unwrap().problem().unwrap();
    let o = AnalysisOptions {
        checks: vec![Check::Cond0],
        ..AnalysisOptions::default()
    };
    let r = analyze(&p, &o).unwrap();
    assert!(r.verdicts.cond0.is_some() && r.verdicts.tame.is_none());
    assert!(r.discriminant.generators.is_empty());
    assert!(render_text(&r).contains("cond0"));
}

#[test]
fn tampered_report_is_rejected() {
    let p = corpus::find("umbrella").unwrap().problem().unwrap();
    let mut r = analyze(&p, &AnalysisOptions::default()).unwrap();
    let Some(Evidence::ArcWitness(w)) = r.verdicts.cond.as_mut().unwrap().evidence.first_mut()
    else {
        panic!("cond should fail with an arc")
    };
    w.ord_f += 1;
    assert!(!verify_report(&r).ok());
}
