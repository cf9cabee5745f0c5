//! Singular loci of a deformation, the slice condition on them, the discriminant,
//! the Milnor set and the tameness check.

use std::sync::Arc;

use num_traits::Zero;

use crate::error::Result;
use crate::ideal::{
    germ_radical_member, ideal_member, local_dim_zero, saturate, DimVerdict, Engine, Ideal,
    LocalCertifier,
};
use crate::poly::{arc_compose, rat, ratio, Monomial, Polynomial, Rational, Ring, VarContext};
use crate::verdict::{
    pure_power, render_point, render_polys, Evidence, LineWitness, LocalMembership, Qualifier,
    Verdict,
};

/// Largest power tried when certifying radical membership explicitly.
const MAX_RADICAL_POWER: u32 = 8;

#[derive(Clone, Debug)]
pub struct SingularLoci {
    pub ctx: VarContext,
    pub f: Polynomial,
    /// `F(x, 0)` over the spatial ring.
    pub f0: Polynomial,
    /// Partials of `F_0`, spatial ring.
    pub sing_f0: Ideal,
    /// All `n + 1` partials of `F`.
    pub sing_f: Ideal,
    /// The `n` spatial partials of `F`.
    pub sing_ftilde: Ideal,
    /// `∂F/∂t` at `t = 0`, spatial ring.
    pub dt_f_at_0: Polynomial,
}

pub fn build_singular_loci(ctx: &VarContext, f: &Polynomial) -> Result<SingularLoci> {
    let n = ctx.n();
    let full = ctx.full_ring();
    let spatial = ctx.spatial_ring();
    let f = f.embed(full)?;
    let zero = Rational::zero();
    let f0 = f.specialize(n, &zero).embed_dropping(spatial);
    let partials: Vec<Polynomial> = (0..=n).map(|i| f.diff(i)).collect();
    let sing_ftilde = Ideal::new(full, partials[..n].iter().cloned())?;
    let sing_f = Ideal::new(full, partials.iter().cloned())?;
    let sing_f0 = Ideal::new(spatial, (0..n).map(|i| f0.diff(i)))?;
    let dt_f_at_0 = partials[n].specialize(n, &zero).embed_dropping(spatial);
    Ok(SingularLoci {
        ctx: ctx.clone(),
        f,
        f0,
        sing_f0,
        sing_f,
        sing_ftilde,
        dt_f_at_0,
    })
}

/// Nonzero directions with entries in `{0, ±1, ±2, ±1/2}` (only `{0, ±1}` when `n > 4`),
/// one per line through the origin, in a fixed order.
pub fn sample_directions(n: usize) -> Vec<Vec<Rational>> {
    let values: Vec<Rational> = if n > 4 {
        vec![rat(0), rat(1), rat(-1)]
    } else {
        vec![
            rat(0),
            rat(1),
            rat(-1),
            rat(2),
            rat(-2),
            ratio(1, 2),
            ratio(-1, 2),
        ]
    };
    let mut out: Vec<Vec<Rational>> = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        let w: Vec<Rational> = idx.iter().map(|&i| values[i].clone()).collect();
        if let Some(lead) = w.iter().find(|c| !c.is_zero()) {
            let normal: Vec<Rational> = w.iter().map(|c| c / lead).collect();
            if !out.contains(&normal) {
                out.push(normal);
            }
        }
        let mut k = n;
        loop {
            if k == 0 {
                out.sort_by_key(|w| w.iter().filter(|c| !c.is_zero()).count());
                return out;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < values.len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

fn vanishes_on_line(gens: &[Polynomial], dir: &[Rational]) -> Result<bool> {
    let arc = LineWitness::arc(dir);
    for g in gens {
        if !arc_compose(g, &arc)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn names(ring: &Arc<Ring>) -> Vec<String> {
    ring.names().to_vec()
}

/// Equality of the `t = 0` slices of `Sing F` and `Sing F̃` as set germs.
pub fn check_cond0(loci: &SingularLoci, eng: &Engine) -> Verdict {
    let scope = "set germs at the origin of the t = 0 slices";
    match cond0_inner(loci, eng) {
        Ok(v) => v,
        Err(e) => Verdict::from_error(scope, &e),
    }
}

fn cond0_inner(loci: &SingularLoci, eng: &Engine) -> Result<Verdict> {
    let scope = "set germs at the origin of the t = 0 slices";
    let g = &loci.dt_f_at_0;
    let spatial = loci.ctx.spatial_ring();
    // the slice of Sing F is Sing F0 cut by dF/dt(x, 0)
    if g.is_zero() {
        return Ok(Verdict::holds(scope).with_note("dF/dt vanishes identically at t = 0"));
    }
    let gens = loci.sing_f0.generators().to_vec();
    let certifier = LocalCertifier::new(spatial, &gens, eng)?;
    for k in 1..=MAX_RADICAL_POWER {
        let gk = g.pow(k);
        if let Some(cert) = certifier.certify(&gk, eng)? {
            return Ok(
                Verdict::holds(scope).with_evidence(Evidence::LocalMembership(LocalMembership {
                    vars: names(spatial),
                    f: g.to_string(),
                    power: k,
                    generators: render_polys(&gens),
                    unit: cert.unit.to_string(),
                    cofactors: render_polys(&cert.cofactors),
                })),
            );
        }
    }
    if germ_radical_member(g, &loci.sing_f0, eng)? {
        return Ok(Verdict::holds(scope).with_note(format!(
            "radical membership decided by saturation; no explicit power up to {MAX_RADICAL_POWER}"
        )));
    }
    for dir in sample_directions(loci.ctx.n()) {
        if vanishes_on_line(&gens, &dir)? && !vanishes_on_line(std::slice::from_ref(g), &dir)? {
            return Ok(
                Verdict::fails(scope).with_evidence(Evidence::LineWitness(LineWitness {
                    vars: names(spatial),
                    direction: render_point(&dir),
                    vanishing: render_polys(&gens),
                    nonvanishing: vec![g.to_string()],
                })),
            );
        }
    }
    Ok(Verdict::undetermined(scope).with_note(
        "the complex slices differ but no real line of Sing F0 separating them was found",
    ))
}

/// `Δ`: the Zariski closure of `F̃(Sing F̃)` in the target plane `(u, v)`.
#[derive(Clone, Debug)]
pub struct Discriminant {
    pub ideal: Ideal,
    /// Generators composed with `u ↦ F, v ↦ t`, over the full ring.
    pub pullback: Vec<Polynomial>,
}

pub fn discriminant(loci: &SingularLoci, eng: &Engine) -> Result<Discriminant> {
    let full = loci.ctx.full_ring();
    let n = loci.ctx.n();
    let ext = full.extended(&["u", "v"]);
    let (u, v) = (Polynomial::var(&ext, n + 1), Polynomial::var(&ext, n + 2));
    let mut gens: Vec<Polynomial> = Vec::new();
    for g in loci.sing_ftilde.generators() {
        gens.push(g.embed(&ext)?);
    }
    gens.push(&u - &loci.f.embed(&ext)?);
    gens.push(&v - &Polynomial::var(&ext, n));
    let drop: Vec<usize> = (0..=n).collect();
    let ideal = crate::ideal::eliminate(&Ideal::new(&ext, gens)?, &drop, eng)?;
    let images = [loci.f.clone(), Polynomial::var(full, n)];
    let pullback: Result<Vec<Polynomial>> = ideal
        .generators()
        .iter()
        .map(|g| g.substitute(&images, full))
        .collect();
    Ok(Discriminant {
        ideal,
        pullback: pullback?,
    })
}

#[derive(Clone, Debug)]
pub struct MilnorSet {
    pub minors: Ideal,
    /// Pullbacks of the discriminant generators with repeated monomial factors and
    /// factors that are units at the origin removed.
    pub saturators: Vec<Polynomial>,
    /// `minors : (saturators)^∞`; `None` when the budget ran out.
    pub saturated: Option<Ideal>,
    /// Saturation strictly enlarged the minors ideal.
    pub removed: Option<bool>,
    pub note: Option<String>,
}

/// The minors `x_i ∂_j F − x_j ∂_i F`, `i < j`.
pub fn milnor_minors(loci: &SingularLoci) -> Result<Ideal> {
    let full = loci.ctx.full_ring();
    let n = loci.ctx.n();
    let partials = loci.sing_ftilde_partials();
    let mut minors = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let xi = Polynomial::var(full, i);
            let xj = Polynomial::var(full, j);
            minors.push(&(&xi * &partials[j]) - &(&xj * &partials[i]));
        }
    }
    Ideal::new(full, minors)
}

impl SingularLoci {
    fn sing_ftilde_partials(&self) -> Vec<Polynomial> {
        (0..self.ctx.n()).map(|i| self.f.diff(i)).collect()
    }

    /// `Sing F0`'s generators over the full ring.
    pub fn sing_f0_lifted(&self) -> Result<Vec<Polynomial>> {
        self.sing_f0
            .generators()
            .iter()
            .map(|g| g.embed(self.ctx.full_ring()))
            .collect()
    }
}

/// `u^a v^b h ↦ u^min(a,1) v^min(b,1) h`, dropping `h` when `h(0) ≠ 0`. The saturation
/// by the result has the same germ at the origin and contains the true one globally.
fn germ_saturator(g: &Polynomial) -> Polynomial {
    let ring = g.ring();
    let nv = ring.len();
    let low: Vec<u16> = (0..nv)
        .map(|i| g.terms().map(|(m, _)| m.exp(i)).min().unwrap_or(0))
        .collect();
    let content = Monomial::new(low.iter().copied());
    let h = Polynomial::from_terms(
        ring,
        g.terms()
            .map(|(m, c)| (m.div(&content).unwrap(), c.clone())),
    );
    let radical = Monomial::new(low.iter().map(|&e| e.min(1)));
    let mono = Polynomial::term(ring, radical, rat(1));
    if h.constant_term().is_zero() {
        &mono * &h
    } else {
        mono
    }
}

/// The Milnor set `closure(Z(minors) \ F̃⁻¹(Δ))`. A saturation that exceeds the budget
/// is reported through `saturated = None`.
pub fn milnor_set(loci: &SingularLoci, disc: &Discriminant, eng: &Engine) -> Result<MilnorSet> {
    let full = loci.ctx.full_ring();
    let minors = milnor_minors(loci)?;
    let images = [loci.f.clone(), Polynomial::var(full, loci.ctx.n())];
    let mut saturators = Vec::new();
    for g in disc.ideal.generators() {
        let s = germ_saturator(g).substitute(&images, full)?;
        if !saturators.contains(&s) {
            saturators.push(s);
        }
    }
    let by = Ideal::new(full, saturators.iter().cloned())?;
    let mut out = MilnorSet {
        minors: minors.clone(),
        saturators,
        saturated: None,
        removed: None,
        note: None,
    };
    let saturated = match saturate(&minors, &by, eng) {
        Ok(s) => s,
        Err(e) if e.is_budget() => {
            out.note = Some(format!("saturation abandoned: {e}"));
            return Ok(out);
        }
        Err(e) => return Err(e),
    };
    let mut removed = false;
    for g in saturated.generators() {
        if !ideal_member(g, &minors, false, eng)? {
            removed = true;
            break;
        }
    }
    out.saturated = Some(saturated);
    out.removed = Some(removed);
    Ok(out)
}

/// Explicit local certificate that `(gens)` is zero-dimensional (or the unit ideal) at the origin.
fn dim_certificates(
    ring: &Arc<Ring>,
    gens: &[Polynomial],
    dim: &DimVerdict,
    eng: &Engine,
) -> Result<Vec<Evidence>> {
    let certifier = LocalCertifier::new(ring, gens, eng)?;
    let targets: Vec<Polynomial> = match dim {
        DimVerdict::EmptyAtOrigin => vec![Polynomial::one(ring)],
        DimVerdict::DimZeroAtOrigin { pure_powers } => {
            // the quotient is finite-dimensional; x_i^d lies in the ideal once d exceeds its length
            pure_powers
                .iter()
                .map(|&(i, e)| pure_power(ring, i, e))
                .collect()
        }
        DimVerdict::PositiveDimensional => return Ok(Vec::new()),
    };
    let bound = quotient_length(&certifier.leading_monomials(), ring.len());
    let mut out = Vec::new();
    for target in targets {
        let mut power = 1;
        loop {
            let f = target.pow(power);
            if let Some(c) = certifier.certify(&f, eng)? {
                out.push(Evidence::LocalMembership(LocalMembership {
                    vars: names(ring),
                    f: target.to_string(),
                    power,
                    generators: render_polys(gens),
                    unit: c.unit.to_string(),
                    cofactors: render_polys(&c.cofactors),
                }));
                break;
            }
            power += 1;
            let deg = target.total_degree().unwrap_or(0) * power;
            if power > 64 || deg as usize > bound.saturating_add(1) {
                return Err(crate::error::Error::Inconsistency(format!(
                    "no power of {target} lies in a zero-dimensional ideal"
                )));
            }
        }
    }
    Ok(out)
}

/// Upper bound for the length of the local quotient: the box cut out by the pure powers
/// among the leading monomials.
fn quotient_length(lms: &[crate::poly::Monomial], n: usize) -> usize {
    let mut caps = vec![usize::MAX; n];
    for m in lms {
        if let Some((i, e)) = m.pure_power() {
            caps[i] = caps[i].min(e as usize);
        }
    }
    caps.iter().fold(1usize, |acc, &c| acc.saturating_mul(c))
}

/// Tameness: the Milnor set meets `{t = 0} ∩ Sing F0` only at the origin.
pub fn check_tame(
    loci: &SingularLoci,
    milnor: &MilnorSet,
    witness_points: &[Vec<Rational>],
    eng: &Engine,
) -> Verdict {
    match tame_inner(loci, milnor, witness_points, eng) {
        Ok(v) => v,
        Err(e) => Verdict::from_error(TAME_SCOPE, &e),
    }
}

const TAME_SCOPE: &str = "germ at the origin of M ∩ {t = 0} ∩ Sing F0";

/// Caps for the line-by-line fallback.
const MAX_LINE_PRODUCTS: usize = 64;
/// Each point test may spend this fraction of the stage's work budget.
const POINT_TEST_SHARE: usize = 10;

fn tame_inner(
    loci: &SingularLoci,
    milnor: &MilnorSet,
    witness_points: &[Vec<Rational>],
    eng: &Engine,
) -> Result<Verdict> {
    let full = loci.ctx.full_ring();
    let n = loci.ctx.n();
    let t = Polynomial::var(full, n);
    let base: Vec<Polynomial> = std::iter::once(t).chain(loci.sing_f0_lifted()?).collect();
    let u_ideal = milnor.minors.with(base.iter().cloned())?;

    // before any saturation: Z(minors) already contains the Milnor set
    let dim_u = local_dim_zero(&u_ideal, eng)?;
    if dim_u != DimVerdict::PositiveDimensional {
        let ev = dim_certificates(full, u_ideal.generators(), &dim_u, eng)?;
        let mut v = Verdict::holds(TAME_SCOPE);
        v.evidence = ev;
        return Ok(v.with_note("already isolated before removing the discriminant pullback"));
    }

    let mut candidates: Vec<Vec<Rational>> = witness_points
        .iter()
        .filter(|p| p.iter().any(|c| !c.is_zero()))
        .cloned()
        .collect();
    candidates.extend(sample_directions(n));
    for d in candidates.iter_mut() {
        d.push(Rational::zero());
    }

    let Some(saturated) = &milnor.saturated else {
        return tame_by_lines(loci, milnor, &u_ideal, &candidates, eng);
    };
    let t_ideal = saturated.with(base.iter().cloned())?;
    let dim_t = local_dim_zero(&t_ideal, eng)?;
    if dim_t != DimVerdict::PositiveDimensional {
        let ev = dim_certificates(full, t_ideal.generators(), &dim_t, eng)?;
        let mut v = Verdict::holds(TAME_SCOPE).with_qualifier(Qualifier::WithCaveat);
        v.evidence = ev;
        return Ok(v.with_note(
            "isolated only after saturating by the Zariski closure of the discriminant pullback",
        ));
    }

    let t_gens: Vec<Polynomial> = t_ideal.generators().to_vec();
    for dir in candidates {
        if vanishes_on_line(&t_gens, &dir)? {
            let mut vanishing = t_gens.clone();
            vanishing.extend(u_ideal.generators().iter().cloned());
            return Ok(
                Verdict::fails(TAME_SCOPE).with_evidence(Evidence::LineWitness(LineWitness {
                    vars: names(full),
                    direction: render_point(&dir),
                    vanishing: render_polys(&vanishing),
                    nonvanishing: vec![],
                })),
            );
        }
    }
    Ok(Verdict::undetermined(TAME_SCOPE).with_note(
        "the intersection is positive-dimensional at the origin but contains no sampled real line",
    ))
}

/// Fallback when the saturation is out of budget. `M` is Zariski closed, so a line
/// through the origin with one point outside `M` meets it in finitely many points. A
/// point `p` is outside `M` when a power of every saturator lies in the minors ideal
/// locally at `p`. If moreover the lines cover `Z(U)` near the origin, the germ is `{0}`.
fn tame_by_lines(
    loci: &SingularLoci,
    milnor: &MilnorSet,
    u_ideal: &Ideal,
    candidates: &[Vec<Rational>],
    eng: &Engine,
) -> Result<Verdict> {
    let full = loci.ctx.full_ring();
    let u_gens = u_ideal.generators().to_vec();
    let minors = milnor.minors.generators().to_vec();
    let mut lines = Vec::new();
    let mut evidence = Vec::new();
    let mut notes: Vec<String> = milnor.note.iter().cloned().collect();
    for dir in candidates {
        if !vanishes_on_line(&u_gens, dir)? || lines.contains(dir) {
            continue;
        }
        // generic points of the line avoid the discriminant pullback, so the line lies in M
        if !vanishes_on_line(&milnor.saturators, dir)? {
            return Ok(
                Verdict::fails(TAME_SCOPE).with_evidence(Evidence::LineWitness(LineWitness {
                    vars: names(full),
                    direction: render_point(dir),
                    vanishing: render_polys(&u_gens),
                    nonvanishing: render_polys(&milnor.saturators),
                })),
            );
        }
        for g in &milnor.saturators {
            let sub = eng.child(eng.budget.max_work / POINT_TEST_SHARE);
            let found = crate::closure::power_certificate(g, &minors, dir, MAX_RADICAL_POWER, &sub);
            eng.absorb(sub.usage());
            let Some(c) = found? else {
                notes.push(format!(
                    "could not show that the line through ({}) leaves the Milnor set",
                    render_point(dir).join(", ")
                ));
                let mut v = Verdict::undetermined(TAME_SCOPE);
                v.notes = notes;
                return Ok(v);
            };
            evidence.push(Evidence::ClosureCertificate(c));
        }
        lines.push(dir.clone());
    }
    if lines.is_empty() {
        notes.push("no sampled line lies in Z(U)".into());
        let mut v = Verdict::undetermined(TAME_SCOPE);
        v.notes = notes;
        return Ok(v);
    }
    notes.push(format!(
        "each of the {} sampled lines in Z(U) leaves the Milnor set",
        lines.len()
    ));
    let mut v = match cover_certificates(full, &u_gens, &lines, eng)? {
        Some(cover) => {
            evidence.extend(cover);
            notes.push("the sampled lines cover Z(U) near the origin".into());
            Verdict::holds(TAME_SCOPE).with_qualifier(Qualifier::WithCaveat)
        }
        None => Verdict::holds(TAME_SCOPE).with_qualifier(Qualifier::OnSample),
    };
    v.evidence = evidence;
    v.notes = notes;
    Ok(v)
}

/// Certificates that every product of linear forms, one vanishing on each line, has a
/// power in `(u_gens)` locally; `None` if one is missing or there are too many products.
fn cover_certificates(
    ring: &Arc<Ring>,
    u_gens: &[Polynomial],
    lines: &[Vec<Rational>],
    eng: &Engine,
) -> Result<Option<Vec<Evidence>>> {
    let forms: Vec<Vec<Polynomial>> = lines.iter().map(|d| line_forms(ring, d)).collect();
    let count = forms
        .iter()
        .try_fold(1usize, |acc, f| acc.checked_mul(f.len()));
    if count.is_none_or(|c| c > MAX_LINE_PRODUCTS) {
        return Ok(None);
    }
    let mut products = vec![Polynomial::one(ring)];
    for fs in &forms {
        products = products
            .iter()
            .flat_map(|p| fs.iter().map(move |f| p * f))
            .collect();
    }
    let certifier = LocalCertifier::new(ring, u_gens, eng)?;
    let mut out = Vec::new();
    for q in products {
        let mut done = false;
        for k in 1..=MAX_RADICAL_POWER {
            if let Some(c) = certifier.certify(&q.pow(k), eng)? {
                out.push(Evidence::LocalMembership(LocalMembership {
                    vars: names(ring),
                    f: q.to_string(),
                    power: k,
                    generators: render_polys(u_gens),
                    unit: c.unit.to_string(),
                    cofactors: render_polys(&c.cofactors),
                }));
                done = true;
                break;
            }
        }
        if !done {
            return Ok(None);
        }
    }
    Ok(Some(out))
}

/// Linear forms cutting out the line through `dir` (whose first nonzero entry is a pivot).
fn line_forms(ring: &Arc<Ring>, dir: &[Rational]) -> Vec<Polynomial> {
    let Some(p) = dir.iter().position(|c| !c.is_zero()) else {
        return (0..dir.len()).map(|i| Polynomial::var(ring, i)).collect();
    };
    let xp = Polynomial::var(ring, p);
    (0..dir.len())
        .filter(|&i| i != p)
        .map(|i| &Polynomial::var(ring, i) - &xp.scale(&(&dir[i] / &dir[p])))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::ideal_equal_radical;
    use crate::parse::parse_polynomial;
    use crate::verdict::Status;

    fn loci(vars: &[&str], f: &str) -> SingularLoci {
        let ctx = VarContext::new(vars, "t").unwrap();
        let f = parse_polynomial(f, &ctx).unwrap();
        build_singular_loci(&ctx, &f).unwrap()
    }

    #[test]
    fn square_has_trivial_loci() {
        let l = loci(&["x"], "x^2");
        assert_eq!(l.sing_f0.generators()[0].to_string(), "2*x");
        assert_eq!(l.sing_ftilde.generators()[0].to_string(), "2*x");
    }

    #[test]
    fn directions_are_normalized_and_distinct() {
        let d = sample_directions(2);
        assert!(d
            .iter()
            .all(|w| w.iter().find(|c| !c.is_zero()).unwrap() == &rat(1)));
        assert_eq!(d[0], vec![rat(0), rat(1)]);
        let mut sorted = d.clone();
        sorted.dedup();
        assert_eq!(sorted.len(), d.len());
    }

    #[test]
    fn cond0_fails_for_linear_parameter_term() {
        let l = loci(&["x", "y"], "x^2 + t*y");
        let v = check_cond0(&l, &Engine::default());
        assert_eq!(v.status, Status::Fails);
        v.verify().unwrap();
    }

    #[test]
    fn radial_deformation_is_tame() {
        let l = loci(&["x", "y"], "x^2 + y^2");
        let eng = Engine::default();
        let d = discriminant(&l, &eng).unwrap();
        let m = milnor_set(&l, &d, &eng).unwrap();
        assert!(m.minors.is_zero());
        let v = check_tame(&l, &m, &[], &eng);
        assert_eq!(v.status, Status::Holds);
        assert!(v.is_binding());
        v.verify().unwrap();
    }

    #[test]
    fn discriminant_pullback_vanishes_on_critical_locus() {
        let l = loci(&["x", "y"], "y^2*(x^2 - (y - t)^2)");
        let eng = Engine::default();
        let d = discriminant(&l, &eng).unwrap();
        for g in &d.pullback {
            assert!(crate::ideal::radical_member(g, &l.sing_ftilde, &eng).unwrap());
        }
        let target = Ideal::new(
            d.ideal.ring(),
            [crate::parse::parse_in_ring("u*(16*u + v^4)", d.ideal.ring()).unwrap()],
        )
        .unwrap();
        assert!(ideal_equal_radical(&d.ideal, &target, &eng).unwrap());
    }
}
