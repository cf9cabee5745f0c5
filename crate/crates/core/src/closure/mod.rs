//! Integral-closure membership (certificates `f^m ∈ J^m`, refutation by arcs) and the
//! metric conditions built on it.

pub mod catalog;
mod screen;

use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{self, ExecMode};
use crate::germ::SingularLoci;
use crate::ideal::{binomial, local_dim_zero, multisets, DimVerdict, Engine, LocalCertifier};
use crate::poly::{
    arc_compose, arc_order, fmt_rational, t_expansion, ParamArc, Polynomial, Rational, Ring,
};
use crate::verdict::{
    product_of, render_arc, render_point, render_polys, ArcWitness, ClosureCertificate, Evidence,
    ProductCofactor, Qualifier, Verdict,
};
pub use catalog::{ArcCatalog, CatalogBlock, CoordOption};
use screen::{ModPoly, Screen};

/// Truncation order for the modular screen.
const SCREEN_TRUNCATION: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureOptions {
    pub max_m: u32,
    pub max_weight: u32,
    pub max_arc_terms: u32,
    pub mode: ExecMode,
}

impl Default for ClosureOptions {
    fn default() -> Self {
        ClosureOptions {
            max_m: 6,
            max_weight: 4,
            max_arc_terms: 4,
            mode: ExecMode::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClosureOutcome {
    Certified(ClosureCertificate),
    Refuted(ArcWitness),
    Unknown(Vec<String>),
}

impl ClosureOutcome {
    pub fn into_verdict(self, scope: impl Into<String>) -> Verdict {
        match self {
            ClosureOutcome::Certified(c) => {
                Verdict::holds(scope).with_evidence(Evidence::ClosureCertificate(c))
            }
            ClosureOutcome::Refuted(w) => {
                Verdict::fails(scope).with_evidence(Evidence::ArcWitness(w))
            }
            ClosureOutcome::Unknown(notes) => {
                let mut v = Verdict::undetermined(scope);
                v.notes = notes;
                v
            }
        }
    }
}

fn names(ring: &Arc<Ring>) -> Vec<String> {
    ring.names().to_vec()
}

fn render_tuple(p: &[Rational]) -> String {
    format!(
        "({})",
        p.iter().map(fmt_rational).collect::<Vec<_>>().join(", ")
    )
}

/// Problem data for one closure query, translated so that the base point is the origin.
struct Query<'a> {
    ring: Arc<Ring>,
    f: &'a Polynomial,
    gens: &'a [Polynomial],
    avoid: &'a [Polynomial],
    base: &'a [Rational],
    ft: Polynomial,
    gt: Vec<Polynomial>,
    avoid_t: Vec<Polynomial>,
}

impl<'a> Query<'a> {
    fn new(
        f: &'a Polynomial,
        gens: &'a [Polynomial],
        base: &'a [Rational],
        avoid: &'a [Polynomial],
    ) -> Result<Self> {
        let ring = f.ring().clone();
        if base.len() != ring.len() {
            return Err(Error::ContextMismatch("base point arity".into()));
        }
        let tr = |ps: &[Polynomial]| -> Result<Vec<Polynomial>> {
            ps.iter().map(|g| g.translate(base)).collect()
        };
        Ok(Query {
            ft: f.translate(base)?,
            gt: tr(gens)?,
            avoid_t: tr(avoid)?,
            ring,
            f,
            gens,
            avoid,
            base,
        })
    }

    /// `f^m ∈ J^m` in the local ring at the base point.
    fn certify(&self, m: u32, eng: &Engine) -> Result<Option<ClosureCertificate>> {
        let k = self.gt.len();
        let wrap = |unit: Polynomial, cofactors: Vec<ProductCofactor>, m: u32| ClosureCertificate {
            vars: names(&self.ring),
            base: render_point(self.base),
            f: self.f.to_string(),
            generators: render_polys(self.gens),
            m,
            unit: unit.to_string(),
            cofactors,
        };
        if self.ft.is_zero() {
            return Ok(Some(wrap(Polynomial::one(&self.ring), vec![], 1)));
        }
        if k == 0 {
            return Ok(None);
        }
        let count = binomial(k + m as usize - 1, m as usize);
        if count > eng.budget.max_generators {
            return Err(Error::Budget(format!(
                "J^{m} has {count} products (cap {})",
                eng.budget.max_generators
            )));
        }
        let index = multisets(k, m as usize);
        let products: Result<Vec<Polynomial>> = index
            .iter()
            .map(|ms| product_of(&self.gt, ms, &self.ring))
            .collect();
        let products = products?;
        let certifier = LocalCertifier::new(&self.ring, &products, eng)?;
        let Some(cert) = certifier.certify(&self.ft.pow(m), eng)? else {
            return Ok(None);
        };
        let cofactors = index
            .into_iter()
            .zip(cert.cofactors)
            .filter(|(_, c)| !c.is_zero())
            .map(|(product, c)| ProductCofactor {
                product,
                cofactor: c.to_string(),
            })
            .collect();
        Ok(Some(wrap(cert.unit, cofactors, m)))
    }

    /// First catalog arc with complexity in `lo..=hi` violating the order inequality.
    fn search(
        &self,
        catalog: &ArcCatalog,
        lo: u32,
        hi: u32,
        mode: ExecMode,
    ) -> Result<Option<ArcWitness>> {
        let fm = ModPoly::new(&self.ft);
        let gm: Vec<ModPoly> = self.gt.iter().map(ModPoly::new).collect();
        let refs: Vec<&ModPoly> = std::iter::once(&fm).chain(gm.iter()).collect();
        let screen = Screen::new(catalog, &refs, SCREEN_TRUNCATION);
        for block in catalog.blocks(hi).filter(|b| b.complexity >= lo) {
            let hit = exec::find_first(&block.arcs, mode, |idx| {
                if !screen.candidate(&fm, &gm, idx) {
                    return None;
                }
                self.confirm(&catalog.arc(idx)).ok().flatten()
            });
            if let Some((offsets, ord_f, ord_j)) = hit {
                let arc = ParamArc::based_at(self.base, offsets.coords().to_vec())?;
                return Ok(Some(ArcWitness {
                    vars: names(&self.ring),
                    f: self.f.to_string(),
                    generators: render_polys(self.gens),
                    arc: render_arc(&arc),
                    ord_f,
                    ord_j,
                    avoid: render_polys(self.avoid),
                }));
            }
        }
        Ok(None)
    }

    /// Exact check of an offset arc.
    fn confirm(&self, arc: &ParamArc) -> Result<Option<(ParamArc, usize, Option<usize>)>> {
        let Some(of) = arc_order(&self.ft, arc)?.order else {
            return Ok(None);
        };
        let mut oj: Option<usize> = None;
        for g in &self.gt {
            if let Some(k) = arc_order(g, arc)?.order {
                if k <= of {
                    return Ok(None);
                }
                oj = Some(oj.map_or(k, |j| j.min(k)));
            }
        }
        if !self.avoid_t.is_empty() {
            let mut escapes = false;
            for a in &self.avoid_t {
                if !arc_compose(a, arc)?.is_zero() {
                    escapes = true;
                    break;
                }
            }
            if !escapes {
                return Ok(None);
            }
        }
        Ok(Some((arc.clone(), of, oj)))
    }
}

fn budget_note(stage: &str, e: &Error) -> Result<String> {
    if e.is_budget() {
        Ok(format!("{stage}: {e}"))
    } else {
        Err(e.clone())
    }
}

/// Whether `f` lies in the integral closure of `(gens)` at `base`, in stages: `m = 1`,
/// arcs with at most two terms, `m = 2..max_m`, then the rest of the arc catalog.
/// When `avoid` is nonempty, witness arcs must leave its zero set.
pub fn closure_member(
    f: &Polynomial,
    gens: &[Polynomial],
    base: &[Rational],
    avoid: &[Polynomial],
    opts: &ClosureOptions,
    eng: &Engine,
) -> Result<ClosureOutcome> {
    let q = Query::new(f, gens, base, avoid)?;
    let catalog = ArcCatalog::new(q.ring.len(), opts.max_weight, opts.max_arc_terms);
    let mut notes = Vec::new();
    let certify = |m: u32, notes: &mut Vec<String>| -> Result<Option<ClosureCertificate>> {
        match q.certify(m, eng) {
            Ok(c) => Ok(c),
            Err(e) => {
                notes.push(budget_note(&format!("certificate with m = {m}"), &e)?);
                Ok(None)
            }
        }
    };
    if let Some(c) = certify(1, &mut notes)? {
        return Ok(ClosureOutcome::Certified(c));
    }
    let early = opts.max_arc_terms.min(2);
    if let Some(w) = q.search(&catalog, 1, early, opts.mode)? {
        return Ok(ClosureOutcome::Refuted(w));
    }
    for m in 2..=opts.max_m {
        if let Some(c) = certify(m, &mut notes)? {
            return Ok(ClosureOutcome::Certified(c));
        }
        if !notes.is_empty() {
            break;
        }
    }
    if opts.max_arc_terms > early {
        if let Some(w) = q.search(&catalog, early + 1, opts.max_arc_terms, opts.mode)? {
            return Ok(ClosureOutcome::Refuted(w));
        }
    }
    notes.push(format!(
        "no certificate with m <= {} and no violating arc among {} catalog arcs",
        opts.max_m,
        catalog.count(opts.max_arc_terms)
    ));
    Ok(ClosureOutcome::Unknown(notes))
}

/// Certificate-only variant of [`closure_member`].
pub fn closure_certificate(
    f: &Polynomial,
    gens: &[Polynomial],
    base: &[Rational],
    max_m: u32,
    eng: &Engine,
) -> Result<Option<ClosureCertificate>> {
    let q = Query::new(f, gens, base, &[])?;
    for m in 1..=max_m {
        match q.certify(m, eng) {
            Ok(Some(c)) => return Ok(Some(c)),
            Ok(None) => {}
            Err(e) if e.is_budget() => return Ok(None),
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

/// Smallest `k <= max_k` with `g^k ∈ (gens)` locally at `base`, as an `m = 1` certificate
/// for `g^k`. The local standard basis is built once.
pub fn power_certificate(
    g: &Polynomial,
    gens: &[Polynomial],
    base: &[Rational],
    max_k: u32,
    eng: &Engine,
) -> Result<Option<ClosureCertificate>> {
    let q = Query::new(g, gens, base, &[])?;
    let certifier = match LocalCertifier::new(&q.ring, &q.gt, eng) {
        Ok(c) => c,
        Err(e) if e.is_budget() => return Ok(None),
        Err(e) => return Err(e),
    };
    let mut power = Polynomial::one(&q.ring);
    for k in 1..=max_k {
        power = &power * &q.ft;
        let cert = match certifier.certify(&power, eng) {
            Ok(c) => c,
            Err(e) if e.is_budget() => return Ok(None),
            Err(e) => return Err(e),
        };
        if let Some(cert) = cert {
            let cofactors = cert
                .cofactors
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| ProductCofactor {
                    product: vec![i],
                    cofactor: c.to_string(),
                })
                .collect();
            return Ok(Some(ClosureCertificate {
                vars: names(&q.ring),
                base: render_point(base),
                f: g.pow(k).to_string(),
                generators: render_polys(gens),
                m: 1,
                unit: cert.unit.to_string(),
                cofactors,
            }));
        }
    }
    Ok(None)
}

/// First catalog arc (in enumeration order) through `base` along which `f` has smaller
/// order than every generator and, when `avoid` is nonempty, leaves `Z(avoid)`.
pub fn arc_falsify(
    f: &Polynomial,
    gens: &[Polynomial],
    base: &[Rational],
    catalog: &ArcCatalog,
    avoid: &[Polynomial],
    mode: ExecMode,
) -> Result<Option<ArcWitness>> {
    let q = Query::new(f, gens, base, avoid)?;
    q.search(catalog, 1, catalog.max_terms, mode)
}

/// Sampled base points: user witnesses first, then `+e_i` and `-e_i`, keeping those on
/// which every polynomial of `on` vanishes; the origin is never included.
pub fn sample_base_points(
    n: usize,
    witness_points: &[Vec<Rational>],
    on: &[Polynomial],
) -> Result<Vec<Vec<Rational>>> {
    let mut candidates: Vec<Vec<Rational>> = witness_points.to_vec();
    for i in 0..n {
        for sign in [1i64, -1] {
            let mut p = vec![Rational::zero(); n];
            p[i] = Rational::from_integer(sign.into());
            candidates.push(p);
        }
    }
    let mut out: Vec<Vec<Rational>> = Vec::new();
    for p in candidates {
        if p.len() != n || p.iter().all(Zero::is_zero) || out.contains(&p) {
            continue;
        }
        let mut on_set = true;
        for g in on {
            if !g.evaluate(&p)?.is_zero() {
                on_set = false;
                break;
            }
        }
        if on_set {
            out.push(p);
        }
    }
    Ok(out)
}

fn origin_in(gens: &[Polynomial]) -> bool {
    gens.iter().all(|g| g.constant_term().is_zero())
}

fn lift(p: &[Rational]) -> Vec<Rational> {
    let mut v = p.to_vec();
    v.push(Rational::zero());
    v
}

/// `cond`: near every `x0 ∈ Sing F0 \ {0}`, `|∂F/∂t| ≤ c ‖∂F/∂x‖` off `Sing F̃`.
pub fn check_cond(
    loci: &SingularLoci,
    witness_points: &[Vec<Rational>],
    opts: &ClosureOptions,
    eng: &Engine,
) -> Verdict {
    let scope = "points of Sing F0 other than the origin";
    cond_inner(loci, witness_points, opts, eng).unwrap_or_else(|e| Verdict::from_error(scope, &e))
}

fn cond_inner(
    loci: &SingularLoci,
    witness_points: &[Vec<Rational>],
    opts: &ClosureOptions,
    eng: &Engine,
) -> Result<Verdict> {
    let n = loci.ctx.n();
    let dt = loci.f.diff(n);
    let partials = loci.sing_ftilde.generators().to_vec();
    let f0_gens = loci.sing_f0.generators().to_vec();
    if !origin_in(&f0_gens)
        || local_dim_zero(&loci.sing_f0, eng)? != DimVerdict::PositiveDimensional
    {
        return Ok(Verdict::holds("Sing F0 \\ {0} is empty near the origin").with_note("vacuous"));
    }
    let origin = vec![Rational::zero(); n + 1];
    if let Some(c) = closure_certificate(&dt, &partials, &origin, opts.max_m, eng)? {
        return Ok(Verdict::holds(
            "a neighbourhood of the origin, hence every nearby point of Sing F0",
        )
        .with_evidence(Evidence::ClosureCertificate(c)));
    }
    let points = sample_base_points(n, witness_points, &f0_gens)?;
    if points.is_empty() {
        return Ok(Verdict::undetermined("no sampled point of Sing F0 \\ {0}"));
    }
    let mut holds = Vec::new();
    let mut pending = Vec::new();
    for p in &points {
        let base = lift(p);
        let at = format!("at x0 = {}", render_tuple(p));
        match closure_member(&dt, &partials, &base, &partials, opts, eng)? {
            ClosureOutcome::Refuted(w) => {
                return Ok(Verdict::fails(at).with_evidence(Evidence::ArcWitness(w)));
            }
            ClosureOutcome::Certified(c) => holds.push(Evidence::ClosureCertificate(c)),
            ClosureOutcome::Unknown(notes) => pending.push(format!("{at}: {}", notes.join("; "))),
        }
    }
    let sampled = points
        .iter()
        .map(|p| render_tuple(p))
        .collect::<Vec<_>>()
        .join(", ");
    if !pending.is_empty() {
        let mut v = Verdict::undetermined(format!("sampled points {sampled}"));
        v.notes = pending;
        v.evidence = holds;
        return Ok(v);
    }
    let mut v =
        Verdict::holds(format!("sampled points {sampled}")).with_qualifier(Qualifier::OnSample);
    v.evidence = holds;
    Ok(v)
}

/// `cond2`: near every `x0 ∈ Sing F0 ∩ {∂F/∂t(x, 0) = 0}`, `|∂F/∂t| ≤ c ‖∂F/∂x‖`.
pub fn check_cond2(
    loci: &SingularLoci,
    witness_points: &[Vec<Rational>],
    opts: &ClosureOptions,
    eng: &Engine,
) -> Verdict {
    let scope = "points of Sing F0 where dF/dt vanishes at t = 0";
    cond2_inner(loci, witness_points, opts, eng).unwrap_or_else(|e| Verdict::from_error(scope, &e))
}

fn cond2_inner(
    loci: &SingularLoci,
    witness_points: &[Vec<Rational>],
    opts: &ClosureOptions,
    eng: &Engine,
) -> Result<Verdict> {
    let n = loci.ctx.n();
    let dt = loci.f.diff(n);
    let partials = loci.sing_ftilde.generators().to_vec();
    let mut on: Vec<Polynomial> = loci.sing_f0.generators().to_vec();
    on.push(loci.dt_f_at_0.clone());
    if !origin_in(&on) {
        return Ok(Verdict::holds("the locus is empty near the origin").with_note("vacuous"));
    }
    let origin = vec![Rational::zero(); n + 1];
    let at_origin = closure_member(&dt, &partials, &origin, &[], opts, eng)?;
    match at_origin {
        ClosureOutcome::Certified(c) => Ok(Verdict::holds("a neighbourhood of the origin")
            .with_evidence(Evidence::ClosureCertificate(c))),
        ClosureOutcome::Refuted(w) => {
            Ok(Verdict::fails("at the origin").with_evidence(Evidence::ArcWitness(w)))
        }
        ClosureOutcome::Unknown(notes) => {
            for p in sample_base_points(n, witness_points, &on)? {
                if let ClosureOutcome::Refuted(w) =
                    closure_member(&dt, &partials, &lift(&p), &[], opts, eng)?
                {
                    return Ok(Verdict::fails(format!("at x0 = {}", render_tuple(&p)))
                        .with_evidence(Evidence::ArcWitness(w)));
                }
            }
            let mut v = Verdict::undetermined("at the origin");
            v.notes = notes;
            Ok(v)
        }
    }
}

/// `∂_i f_j ∈ closure((∂f_0))` at the origin for every `j ≥ 1` and every spatial `i`.
pub fn jacobian_criterion(loci: &SingularLoci, opts: &ClosureOptions, eng: &Engine) -> Verdict {
    let scope = "coefficients f_j (j >= 1) of the expansion in t, at the origin";
    jacobian_inner(loci, opts, eng).unwrap_or_else(|e| Verdict::from_error(scope, &e))
}

fn jacobian_inner(loci: &SingularLoci, opts: &ClosureOptions, eng: &Engine) -> Result<Verdict> {
    let scope = "coefficients f_j (j >= 1) of the expansion in t, at the origin";
    let n = loci.ctx.n();
    let coeffs = t_expansion(&loci.f, &loci.ctx)?;
    let j_gens = loci.sing_f0.generators().to_vec();
    let origin = vec![Rational::zero(); n];
    let mut certs = Vec::new();
    let mut pending = Vec::new();
    let names = loci.ctx.spatial_vars();
    for (j, fj) in coeffs.iter().enumerate().skip(1) {
        for i in 0..n {
            let d = fj.diff(i);
            if d.is_zero() {
                continue;
            }
            let label = format!("d/d{} f_{j}", names[i]);
            match closure_member(&d, &j_gens, &origin, &[], opts, eng)? {
                ClosureOutcome::Certified(c) => certs.push(Evidence::ClosureCertificate(c)),
                ClosureOutcome::Refuted(w) => {
                    return Ok(
                        Verdict::fails(format!("{label} is not in the closure of (dF0)"))
                            .with_evidence(Evidence::ArcWitness(w)),
                    );
                }
                ClosureOutcome::Unknown(notes) => {
                    pending.push(format!("{label}: {}", notes.join("; ")))
                }
            }
        }
    }
    if coeffs.len() <= 1 {
        return Ok(Verdict::holds(scope).with_note("F does not depend on the parameter"));
    }
    let mut v = if pending.is_empty() {
        Verdict::holds(scope)
    } else {
        let mut v = Verdict::undetermined(scope);
        v.notes = pending;
        v
    };
    v.evidence = certs;
    Ok(v)
}

/// Orders along an arc used to sanity-check a Jacobian-criterion HOLDS.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaDiagnostics {
    /// False when the arc does not start on `Sing f_0`.
    pub applicable: bool,
    /// `min_l ord ∂_l f_0(x(s))`.
    pub kappa: Option<usize>,
    /// `(j, ord f_j(x(s)), ord > κ)` for `j ≥ 1`.
    pub coefficients: Vec<(usize, Option<usize>, bool)>,
    /// `ord ∂F/∂x_l(x(s), t(s))` for a minimizing `l`.
    pub full_partial_order: Option<usize>,
}

/// `arc` lives in `(x, t)`; its spatial part must start on `Sing f_0`.
pub fn order_lemma_diagnostics(loci: &SingularLoci, arc: &ParamArc) -> Result<LemmaDiagnostics> {
    let n = loci.ctx.n();
    if arc.dim() != n + 1 {
        return Err(Error::ContextMismatch(
            "diagnostic arc must live in (x, t)".into(),
        ));
    }
    let spatial = ParamArc::new(arc.coords()[..n].to_vec());
    let x0 = spatial.base_point();
    let partials0: Vec<Polynomial> = (0..n).map(|i| loci.f0.diff(i)).collect();
    let mut applicable = true;
    for g in &partials0 {
        if !g.evaluate(&x0)?.is_zero() {
            applicable = false;
        }
    }
    if !applicable {
        return Ok(LemmaDiagnostics {
            applicable,
            kappa: None,
            coefficients: vec![],
            full_partial_order: None,
        });
    }
    let mut kappa: Option<(usize, usize)> = None;
    for (l, g) in partials0.iter().enumerate() {
        if let Some(k) = arc_order(g, &spatial)?.order {
            if kappa.is_none_or(|(_, best)| k < best) {
                kappa = Some((l, k));
            }
        }
    }
    let coeffs = t_expansion(&loci.f, &loci.ctx)?;
    let mut coefficients = Vec::new();
    for (j, fj) in coeffs.iter().enumerate().skip(1) {
        let o = arc_order(fj, &spatial)?.order;
        let exceeds = match (o, kappa) {
            (None, _) => true,
            (Some(a), Some((_, k))) => a > k,
            (Some(_), None) => false,
        };
        coefficients.push((j, o, exceeds));
    }
    let full_partial_order = match kappa {
        Some((l, _)) => arc_order(&loci.f.diff(l), arc)?.order,
        None => None,
    };
    Ok(LemmaDiagnostics {
        applicable,
        kappa: kappa.map(|k| k.1),
        coefficients,
        full_partial_order,
    })
}

#[cfg(test)]
mod tests;
