//! Three-valued verdicts and the evidence objects that back them. Evidence is stored
//! as strings so that a report can be re-checked without the analysis state.

use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parse::{parse_rational, parse_tokens, tokenize};
use crate::poly::{
    arc_compose, fmt_rational, Monomial, ParamArc, Polynomial, Rational, Ring, UniPoly,
};

/// Exponent cap used when re-parsing evidence; larger than the input cap since
/// cofactors and arcs may carry higher powers.
const EVIDENCE_MAX_EXPONENT: u32 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Holds,
    Fails,
    Undetermined,
}

/// Refinements of a verdict that make it non-binding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Qualifier {
    /// HOLDS only for the Zariski-saturated Milnor set.
    WithCaveat,
    /// HOLDS at every sampled base point, which may not cover the locus.
    OnSample,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qualifier: Option<Qualifier>,
    pub scope: String,
    pub evidence: Vec<Evidence>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Verdict {
    pub fn new(status: Status, scope: impl Into<String>) -> Self {
        Verdict {
            status,
            qualifier: None,
            scope: scope.into(),
            evidence: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn holds(scope: impl Into<String>) -> Self {
        Self::new(Status::Holds, scope)
    }

    pub fn fails(scope: impl Into<String>) -> Self {
        Self::new(Status::Fails, scope)
    }

    pub fn undetermined(scope: impl Into<String>) -> Self {
        Self::new(Status::Undetermined, scope)
    }

    /// Verdict for a stage that ran out of budget.
    pub fn from_error(scope: impl Into<String>, err: &Error) -> Self {
        let mut v = Self::undetermined(scope);
        v.notes.push(err.to_string());
        v
    }

    pub fn with_evidence(mut self, e: Evidence) -> Self {
        self.evidence.push(e);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn with_qualifier(mut self, q: Qualifier) -> Self {
        self.qualifier = Some(q);
        self
    }

    /// HOLDS or FAILS without a qualifier; only these constrain the implication audit.
    pub fn is_binding(&self) -> bool {
        self.status != Status::Undetermined && self.qualifier.is_none()
    }

    pub fn binding_holds(&self) -> bool {
        self.is_binding() && self.status == Status::Holds
    }

    pub fn binding_fails(&self) -> bool {
        self.is_binding() && self.status == Status::Fails
    }

    /// Label such as `HOLDS`, `HOLDS (with-caveat)`.
    pub fn label(&self) -> String {
        let s = match self.status {
            Status::Holds => "HOLDS",
            Status::Fails => "FAILS",
            Status::Undetermined => "UNDETERMINED",
        };
        match self.qualifier {
            Some(Qualifier::WithCaveat) => format!("{s} (with-caveat)"),
            Some(Qualifier::OnSample) => format!("{s} (on-sample)"),
            None => s.to_string(),
        }
    }

    /// Re-checks every evidence item exactly.
    pub fn verify(&self) -> std::result::Result<(), String> {
        for (k, e) in self.evidence.iter().enumerate() {
            e.verify().map_err(|m| format!("evidence #{k}: {m}"))?;
        }
        match self.status {
            Status::Fails if self.evidence.iter().all(|e| !e.is_refutation()) => {
                Err("FAILS verdict without a witness".into())
            }
            _ => Ok(()),
        }
    }
}

/// One cofactor of a closure certificate, attached to the product of the generators
/// listed (with repetition) in `product`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductCofactor {
    pub product: Vec<usize>,
    pub cofactor: String,
}

/// `unit · f^m = Σ cofactor · Π g` in coordinates centred at `base`: each of `f` and the
/// generators is composed with `x ↦ x + base` first, and `unit` does not vanish at 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureCertificate {
    pub vars: Vec<String>,
    pub base: Vec<String>,
    pub f: String,
    pub generators: Vec<String>,
    pub m: u32,
    pub unit: String,
    pub cofactors: Vec<ProductCofactor>,
}

/// `ord_s f(arc) < min_g ord_s g(arc)`; when `avoid` is nonempty some avoid polynomial
/// does not vanish identically along the arc.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcWitness {
    pub vars: Vec<String>,
    pub f: String,
    pub generators: Vec<String>,
    pub arc: Vec<String>,
    pub ord_f: usize,
    /// `None` when every generator vanishes identically along the arc.
    pub ord_j: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub avoid: Vec<String>,
}

/// A line `s ↦ s · direction` through the origin on which every `vanishing` polynomial is
/// identically zero and, if `nonvanishing` is nonempty, one of those is not.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineWitness {
    pub vars: Vec<String>,
    pub direction: Vec<String>,
    pub vanishing: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub nonvanishing: Vec<String>,
}

/// `unit · f^power = Σ cofactors_k · generators_k` with `unit(0) ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalMembership {
    pub vars: Vec<String>,
    pub f: String,
    pub power: u32,
    pub generators: Vec<String>,
    pub unit: String,
    pub cofactors: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Evidence {
    ClosureCertificate(ClosureCertificate),
    ArcWitness(ArcWitness),
    LineWitness(LineWitness),
    LocalMembership(LocalMembership),
}

impl Evidence {
    fn is_refutation(&self) -> bool {
        matches!(self, Evidence::ArcWitness(_) | Evidence::LineWitness(_))
    }

    /// One-line description for text reports.
    pub fn summary(&self) -> String {
        match self {
            Evidence::ClosureCertificate(c) => format!(
                "certificate: ({})^{} in J^{} at ({}), {} cofactors",
                c.f,
                c.m,
                c.m,
                c.base.join(", "),
                c.cofactors.len()
            ),
            Evidence::ArcWitness(w) => format!(
                "arc ({}): ord f = {} < ord J = {}",
                w.arc.join(", "),
                w.ord_f,
                w.ord_j.map_or("inf".to_string(), |k| k.to_string())
            ),
            Evidence::LineWitness(w) => format!("line through ({})", w.direction.join(", ")),
            Evidence::LocalMembership(c) => format!("({})^{} in the local ideal", c.f, c.power),
        }
    }

    pub fn verify(&self) -> std::result::Result<(), String> {
        let r = match self {
            Evidence::ClosureCertificate(c) => c.verify(),
            Evidence::ArcWitness(w) => w.verify(),
            Evidence::LineWitness(w) => w.verify(),
            Evidence::LocalMembership(c) => c.verify(),
        };
        r.map_err(|e| e.to_string())
    }
}

fn ring_of(vars: &[String]) -> Result<Arc<Ring>> {
    Ring::new(vars.iter().cloned())
}

fn parse(text: &str, ring: &Arc<Ring>) -> Result<Polynomial> {
    parse_tokens(&tokenize(text)?, ring, EVIDENCE_MAX_EXPONENT)
}

fn parse_all(texts: &[String], ring: &Arc<Ring>) -> Result<Vec<Polynomial>> {
    texts.iter().map(|t| parse(t, ring)).collect()
}

fn parse_point(texts: &[String]) -> Result<Vec<Rational>> {
    texts.iter().map(|t| parse_rational(t)).collect()
}

fn fail(msg: impl Into<String>) -> Error {
    Error::Inconsistency(msg.into())
}

/// Reads an arc written as polynomials in `s`.
pub fn parse_arc(coords: &[String]) -> Result<ParamArc> {
    let sring = Ring::new(["s"])?;
    let cs: Result<Vec<UniPoly>> = coords
        .iter()
        .map(|c| UniPoly::from_univariate(&parse(c, &sring)?))
        .collect();
    Ok(ParamArc::new(cs?))
}

pub fn render_arc(arc: &ParamArc) -> Vec<String> {
    arc.coords().iter().map(|c| c.render("s")).collect()
}

pub fn render_point(p: &[Rational]) -> Vec<String> {
    p.iter().map(fmt_rational).collect()
}

pub fn render_polys(ps: &[Polynomial]) -> Vec<String> {
    ps.iter().map(|p| p.to_string()).collect()
}

/// Product of the generators indexed by `product`.
pub fn product_of(gens: &[Polynomial], product: &[usize], ring: &Arc<Ring>) -> Result<Polynomial> {
    let mut acc = Polynomial::one(ring);
    for &i in product {
        let g = gens
            .get(i)
            .ok_or_else(|| fail(format!("generator index {i} out of range")))?;
        acc = &acc * g;
    }
    Ok(acc)
}

impl ClosureCertificate {
    pub fn verify(&self) -> Result<()> {
        let ring = ring_of(&self.vars)?;
        let base = parse_point(&self.base)?;
        if base.len() != ring.len() {
            return Err(fail("base point arity"));
        }
        let f = parse(&self.f, &ring)?.translate(&base)?;
        let gens: Result<Vec<_>> = parse_all(&self.generators, &ring)?
            .iter()
            .map(|g| g.translate(&base))
            .collect();
        let gens = gens?;
        let unit = parse(&self.unit, &ring)?;
        if unit.constant_term().is_zero() {
            return Err(fail("certificate unit vanishes at the base point"));
        }
        if self.m == 0 {
            return Err(fail("certificate power must be positive"));
        }
        let mut rhs = Polynomial::zero(&ring);
        for pc in &self.cofactors {
            if pc.product.len() != self.m as usize {
                return Err(fail("cofactor product of the wrong length"));
            }
            let c = parse(&pc.cofactor, &ring)?;
            rhs = &rhs + &(&c * &product_of(&gens, &pc.product, &ring)?);
        }
        if &unit * &f.pow(self.m) != rhs {
            return Err(fail(format!(
                "closure certificate with m = {} does not re-expand",
                self.m
            )));
        }
        Ok(())
    }
}

impl ArcWitness {
    pub fn verify(&self) -> Result<()> {
        let ring = ring_of(&self.vars)?;
        let arc = parse_arc(&self.arc)?;
        if arc.dim() != ring.len() {
            return Err(fail("arc arity"));
        }
        let f = parse(&self.f, &ring)?;
        let ord_f = arc_compose(&f, &arc)?.order();
        if ord_f != Some(self.ord_f) {
            return Err(fail(format!(
                "recomputed ord f = {ord_f:?}, recorded {}",
                self.ord_f
            )));
        }
        let mut ord_j: Option<usize> = None;
        for g in parse_all(&self.generators, &ring)? {
            if let Some(k) = arc_compose(&g, &arc)?.order() {
                ord_j = Some(ord_j.map_or(k, |j| j.min(k)));
            }
        }
        if ord_j != self.ord_j {
            return Err(fail(format!(
                "recomputed ord J = {ord_j:?}, recorded {:?}",
                self.ord_j
            )));
        }
        if ord_j.is_some_and(|j| self.ord_f >= j) {
            return Err(fail("arc does not violate the order inequality"));
        }
        if !self.avoid.is_empty() {
            let avoid = parse_all(&self.avoid, &ring)?;
            let mut escapes = false;
            for a in &avoid {
                if !arc_compose(a, &arc)?.is_zero() {
                    escapes = true;
                    break;
                }
            }
            if !escapes {
                return Err(fail("arc lies inside the excluded set"));
            }
        }
        Ok(())
    }
}

impl LineWitness {
    pub fn arc(direction: &[Rational]) -> ParamArc {
        ParamArc::new(
            direction
                .iter()
                .map(|c| UniPoly::monomial(c.clone(), 1))
                .collect(),
        )
    }

    pub fn verify(&self) -> Result<()> {
        let ring = ring_of(&self.vars)?;
        let dir = parse_point(&self.direction)?;
        if dir.len() != ring.len() || dir.iter().all(Zero::is_zero) {
            return Err(fail(
                "line direction must be a nonzero vector of the right arity",
            ));
        }
        let arc = Self::arc(&dir);
        for g in parse_all(&self.vanishing, &ring)? {
            if !arc_compose(&g, &arc)?.is_zero() {
                return Err(fail(format!("`{g}` does not vanish along the line")));
            }
        }
        if !self.nonvanishing.is_empty() {
            let mut any = false;
            for g in parse_all(&self.nonvanishing, &ring)? {
                any |= !arc_compose(&g, &arc)?.is_zero();
            }
            if !any {
                return Err(fail("every separating polynomial vanishes along the line"));
            }
        }
        Ok(())
    }
}

impl LocalMembership {
    pub fn verify(&self) -> Result<()> {
        let ring = ring_of(&self.vars)?;
        let f = parse(&self.f, &ring)?;
        let gens = parse_all(&self.generators, &ring)?;
        let cof = parse_all(&self.cofactors, &ring)?;
        let unit = parse(&self.unit, &ring)?;
        if cof.len() != gens.len() {
            return Err(fail("cofactor count differs from generator count"));
        }
        if unit.constant_term().is_zero() {
            return Err(fail("unit vanishes at the origin"));
        }
        let mut rhs = Polynomial::zero(&ring);
        for (c, g) in cof.iter().zip(&gens) {
            rhs = &rhs + &(c * g);
        }
        if &unit * &f.pow(self.power) != rhs {
            return Err(fail("local membership identity does not re-expand"));
        }
        Ok(())
    }
}

/// Monomial `x_i^e` in `ring`.
pub(crate) fn pure_power(ring: &Arc<Ring>, i: usize, e: u16) -> Polynomial {
    let mut exps = vec![0u16; ring.len()];
    exps[i] = e;
    Polynomial::term(ring, Monomial::new(exps), Rational::from_integer(1.into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_in_ring;

    fn s(v: &[&str]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn closure_certificate_for_xy_in_square() {
        // (xy)^2 = 1 * x^2 * y^2, products of generators (x^2, y^2)
        let c = ClosureCertificate {
            vars: s(&["x", "y"]),
            base: s(&["0", "0"]),
            f: "x*y".into(),
            generators: s(&["x^2", "y^2"]),
            m: 2,
            unit: "1".into(),
            cofactors: vec![ProductCofactor {
                product: vec![0, 1],
                cofactor: "1".into(),
            }],
        };
        assert!(c.verify().is_ok());
        let mut bad = c.clone();
        bad.m = 1;
        assert!(bad.verify().is_err());
    }

    #[test]
    fn translated_certificate() {
        // at base (1, 0): f = y, J = (x*y); locally x is a unit at x = 1
        let c = ClosureCertificate {
            vars: s(&["x", "y"]),
            base: s(&["1", "0"]),
            f: "y".into(),
            generators: s(&["x*y"]),
            m: 1,
            unit: "x + 1".into(),
            cofactors: vec![ProductCofactor {
                product: vec![0],
                cofactor: "1".into(),
            }],
        };
        assert!(c.verify().is_ok());
    }

    #[test]
    fn arc_witness_checks_orders_and_avoid_set() {
        let w = ArcWitness {
            vars: s(&["x", "y"]),
            f: "6*y^2".into(),
            generators: s(&["2*x*y^2", "2*x^2*y - 4*y^3"]),
            arc: s(&["s", "s"]),
            ord_f: 2,
            ord_j: Some(3),
            avoid: vec![],
        };
        assert!(w.verify().is_ok());
        let mut inside = w.clone();
        inside.avoid = s(&["x - y"]);
        assert!(inside.verify().is_err());
        let mut wrong = w;
        wrong.ord_j = Some(2);
        assert!(wrong.verify().is_err());
    }

    #[test]
    fn line_witness() {
        let w = LineWitness {
            vars: s(&["x", "y", "z", "t"]),
            direction: s(&["0", "0", "1", "0"]),
            vanishing: s(&["x", "y", "t", "x*z"]),
            nonvanishing: vec![],
        };
        assert!(w.verify().is_ok());
        let mut bad = w;
        bad.vanishing.push("z".into());
        assert!(bad.verify().is_err());
    }

    #[test]
    fn local_membership_identity() {
        let r = Ring::new(["x"]).unwrap();
        let f = parse_in_ring("x", &r).unwrap();
        let g = parse_in_ring("x + x^2", &r).unwrap();
        let c = LocalMembership {
            vars: s(&["x"]),
            f: f.to_string(),
            power: 1,
            generators: vec![g.to_string()],
            unit: "1 + x".into(),
            cofactors: s(&["1"]),
        };
        assert!(c.verify().is_ok());
    }

    #[test]
    fn binding_rules() {
        assert!(Verdict::holds("x").is_binding());
        assert!(!Verdict::holds("x")
            .with_qualifier(Qualifier::WithCaveat)
            .is_binding());
        assert!(!Verdict::undetermined("x").is_binding());
        assert!(Verdict::fails("x").verify().is_err());
    }
}
