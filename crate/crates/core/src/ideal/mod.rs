//! Ideals over `Q[x]`: Gröbner and local standard bases, membership, elimination,
//! saturation, radical tests and local dimension at the origin.

mod buchberger;
mod mora;
mod ordering;
mod sorted;

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

pub use ordering::MonomialOrdering;

use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial, Ring};
use sorted::SPoly;

/// Caps on the work a single analysis stage may spend.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_pairs: usize,
    pub max_degree: u32,
    pub max_reductions: usize,
    pub max_generators: usize,
    /// Cap on term operations inside reductions, a proxy for running time.
    pub max_work: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_pairs: 200_000,
            max_degree: 60,
            max_reductions: 5_000_000,
            max_generators: 5_000,
            max_work: 20_000_000,
        }
    }
}

impl Budget {
    pub fn scaled(&self, k: usize) -> Budget {
        Budget {
            max_pairs: self.max_pairs.saturating_mul(k),
            max_degree: self.max_degree.saturating_mul(k as u32),
            max_reductions: self.max_reductions.saturating_mul(k),
            max_generators: self.max_generators.saturating_mul(k),
            max_work: self.max_work.saturating_mul(k),
        }
    }
}

/// Work counters shared by every computation charged to one budget.
#[derive(Debug)]
pub struct Engine {
    pub budget: Budget,
    pairs: AtomicUsize,
    reductions: AtomicUsize,
    work: AtomicUsize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Usage {
    pub pairs: usize,
    pub reductions: usize,
    pub work: usize,
}

impl Engine {
    pub fn new(budget: Budget) -> Self {
        Engine {
            budget,
            pairs: AtomicUsize::new(0),
            reductions: AtomicUsize::new(0),
            work: AtomicUsize::new(0),
        }
    }

    pub fn usage(&self) -> Usage {
        Usage {
            pairs: self.pairs.load(AtomicOrdering::Relaxed),
            reductions: self.reductions.load(AtomicOrdering::Relaxed),
            work: self.work.load(AtomicOrdering::Relaxed),
        }
    }

    /// Fresh engine for one sub-computation whose work is capped at `max_work`; fold its
    /// usage back with [`Engine::absorb`].
    pub fn child(&self, max_work: usize) -> Engine {
        Engine::new(Budget {
            max_work: max_work.min(self.budget.max_work),
            ..self.budget
        })
    }

    /// Adds the usage of a finished child engine, without checking the caps.
    pub fn absorb(&self, used: Usage) {
        self.pairs.fetch_add(used.pairs, AtomicOrdering::Relaxed);
        self.reductions
            .fetch_add(used.reductions, AtomicOrdering::Relaxed);
        self.work.fetch_add(used.work, AtomicOrdering::Relaxed);
    }

    pub(crate) fn count_pair(&self) -> Result<()> {
        let used = self.pairs.fetch_add(1, AtomicOrdering::Relaxed) + 1;
        if used > self.budget.max_pairs {
            return Err(Error::Budget(format!(
                "more than {} critical pairs",
                self.budget.max_pairs
            )));
        }
        Ok(())
    }

    /// Charges `steps` reduction steps costing `work` term operations in total.
    pub(crate) fn count_reductions(&self, steps: usize, work: usize) -> Result<()> {
        let used = self.reductions.fetch_add(steps, AtomicOrdering::Relaxed) + steps;
        if used > self.budget.max_reductions {
            return Err(Error::Budget(format!(
                "more than {} reduction steps",
                self.budget.max_reductions
            )));
        }
        let used = self.work.fetch_add(work, AtomicOrdering::Relaxed) + work;
        if used > self.budget.max_work {
            return Err(Error::Budget(format!(
                "more than {} term operations",
                self.budget.max_work
            )));
        }
        Ok(())
    }
}

impl Default for Engine {
    fn default() -> Self {
        Engine::new(Budget::default())
    }
}

/// Leading monomial of a nonzero polynomial.
pub fn leading_monomial(p: &Polynomial, ord: &MonomialOrdering) -> Option<Monomial> {
    p.terms()
        .map(|(m, _)| m)
        .max_by(|a, b| ord.cmp(a, b))
        .cloned()
}

/// A finitely generated ideal with a per-ordering basis cache.
#[derive(Debug)]
pub struct Ideal {
    ring: Arc<Ring>,
    gens: Vec<Polynomial>,
    cache: Mutex<BTreeMap<MonomialOrdering, Arc<Vec<Polynomial>>>>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        Ideal {
            ring: self.ring.clone(),
            gens: self.gens.clone(),
            cache: Mutex::new(self.cache.lock().unwrap().clone()),
        }
    }
}

impl PartialEq for Ideal {
    /// Syntactic equality of generator lists.
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.gens == other.gens
    }
}

impl Ideal {
    /// Zero generators are dropped; the rest must live in `ring`.
    pub fn new(ring: &Arc<Ring>, gens: impl IntoIterator<Item = Polynomial>) -> Result<Ideal> {
        let mut out = Vec::new();
        for g in gens {
            if g.ring() != ring {
                return Err(Error::ContextMismatch(
                    "generator from a different ring".into(),
                ));
            }
            if !g.is_zero() && !out.contains(&g) {
                out.push(g);
            }
        }
        Ok(Ideal {
            ring: ring.clone(),
            gens: out,
            cache: Mutex::new(BTreeMap::new()),
        })
    }

    pub fn zero(ring: &Arc<Ring>) -> Ideal {
        Ideal::new(ring, []).unwrap()
    }

    pub fn unit(ring: &Arc<Ring>) -> Ideal {
        Ideal::new(ring, [Polynomial::one(ring)]).unwrap()
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    /// `self + other` (generator concatenation).
    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        let other = other.embed(&self.ring)?;
        Ideal::new(&self.ring, self.gens.iter().cloned().chain(other.gens))
    }

    pub fn with(&self, extra: impl IntoIterator<Item = Polynomial>) -> Result<Ideal> {
        Ideal::new(&self.ring, self.gens.iter().cloned().chain(extra))
    }

    pub fn embed(&self, target: &Arc<Ring>) -> Result<Ideal> {
        let gens: Result<Vec<_>> = self.gens.iter().map(|g| g.embed(target)).collect();
        Ideal::new(target, gens?)
    }

    /// Image under an affine translation `x -> x + x0` of the leading variables.
    pub fn translate(&self, x0: &[crate::poly::Rational]) -> Result<Ideal> {
        let gens: Result<Vec<_>> = self.gens.iter().map(|g| g.translate(x0)).collect();
        Ideal::new(&self.ring, gens?)
    }

    fn cached(&self, ord: &MonomialOrdering) -> Option<Arc<Vec<Polynomial>>> {
        self.cache.lock().unwrap().get(ord).cloned()
    }
}

/// Reduced Gröbner basis (global orderings) or standard basis (local ordering).
pub fn standard_basis(
    ideal: &Ideal,
    ord: &MonomialOrdering,
    eng: &Engine,
) -> Result<Arc<Vec<Polynomial>>> {
    if let Some(b) = ideal.cached(ord) {
        return Ok(b);
    }
    let basis = if ord.is_local() {
        mora::local_standard_basis(&ideal.gens, &ideal.ring, false, eng)?.polynomials()
    } else {
        buchberger::groebner_basis(&ideal.gens, &ideal.ring, ord, eng)?
    };
    let basis = Arc::new(basis);
    ideal
        .cache
        .lock()
        .unwrap()
        .entry(ord.clone())
        .or_insert_with(|| basis.clone());
    Ok(basis)
}

fn local_basis_of(polys: &[Polynomial], ring: &Arc<Ring>) -> mora::LocalBasis {
    let elems = polys
        .iter()
        .map(|p| {
            let (q, _) = SPoly::from_poly(p, &MonomialOrdering::NegDegRevLex);
            let ecart = q.ecart();
            mora::LocalElem {
                p: q,
                ecart,
                rep: None,
            }
        })
        .collect();
    mora::LocalBasis {
        ring: ring.clone(),
        ngens: 0,
        elems,
    }
}

/// Normal form of `f` against a standard basis for `ord`. The remainder is determined
/// up to a nonzero constant factor (global) or a unit of the local ring (local).
pub fn normal_form(
    f: &Polynomial,
    basis: &[Polynomial],
    ord: &MonomialOrdering,
    eng: &Engine,
) -> Result<Polynomial> {
    let ring = f.ring();
    if ord.is_local() {
        let lb = local_basis_of(basis, ring);
        Ok(mora::local_reduce(f, &lb, false, eng)?.remainder)
    } else {
        let (q, factor) = SPoly::from_poly(f, ord);
        let reducers: Vec<SPoly> = basis.iter().map(|g| SPoly::from_poly(g, ord).0).collect();
        let refs: Vec<&SPoly> = reducers.iter().collect();
        let r = buchberger::reduce_full(q, &refs, ord, eng)?;
        Ok(r.to_poly(ring).scale(&factor))
    }
}

/// `f ∈ I` in `Q[x]`, or in the local ring at the origin when `local` is set.
pub fn ideal_member(f: &Polynomial, ideal: &Ideal, local: bool, eng: &Engine) -> Result<bool> {
    if f.is_zero() {
        return Ok(true);
    }
    let ord = if local {
        MonomialOrdering::NegDegRevLex
    } else {
        MonomialOrdering::DegRevLex
    };
    let f = f.embed(&ideal.ring)?;
    let basis = standard_basis(ideal, &ord, eng)?;
    Ok(normal_form(&f, &basis, &ord, eng)?.is_zero())
}

/// `I ∩ Q[remaining variables]`, returned over the smaller ring.
pub fn eliminate(ideal: &Ideal, drop: &[usize], eng: &Engine) -> Result<Ideal> {
    let n = ideal.ring.len();
    let ord = MonomialOrdering::eliminating(n, drop);
    let basis = standard_basis(ideal, &ord, eng)?;
    let target = ideal.ring.without(drop);
    let kept = basis
        .iter()
        .filter(|g| drop.iter().all(|&v| !g.involves(v)))
        .map(|g| g.embed_dropping(&target));
    Ideal::new(&target, kept)
}

/// Adds fresh variables in front of the block to eliminate; returns the ring and their indices.
fn with_fresh(ring: &Arc<Ring>, names: &[&str]) -> (Arc<Ring>, Vec<usize>) {
    let ext = ring.extended(names);
    let idx = (ring.len()..ext.len()).collect();
    (ext, idx)
}

/// `I ∩ J` via `s·I + (1 − s)·J`.
pub fn intersect(a: &Ideal, b: &Ideal, eng: &Engine) -> Result<Ideal> {
    let b = b.embed(&a.ring)?;
    if a.is_zero() || b.is_zero() {
        return Ok(Ideal::zero(&a.ring));
    }
    let (ext, idx) = with_fresh(&a.ring, &["s"]);
    let s = Polynomial::var(&ext, idx[0]);
    let one_minus_s = &Polynomial::one(&ext) - &s;
    let mut gens = Vec::new();
    for g in a.generators() {
        gens.push(&s * &g.embed(&ext)?);
    }
    for g in b.generators() {
        gens.push(&one_minus_s * &g.embed(&ext)?);
    }
    let big = Ideal::new(&ext, gens)?;
    eliminate(&big, &idx, eng)?.embed(&a.ring)
}

/// `I : g^∞` via `(I + (1 − w·g)) ∩ Q[x]`.
pub fn saturate_by(ideal: &Ideal, g: &Polynomial, eng: &Engine) -> Result<Ideal> {
    let g = g.embed(&ideal.ring)?;
    if g.is_zero() {
        return Ok(Ideal::unit(&ideal.ring));
    }
    if g.is_constant() {
        return Ok(ideal.clone());
    }
    let (ext, idx) = with_fresh(&ideal.ring, &["w"]);
    let w = Polynomial::var(&ext, idx[0]);
    let rab = &Polynomial::one(&ext) - &(&w * &g.embed(&ext)?);
    let big = ideal.embed(&ext)?.with([rab])?;
    eliminate(&big, &idx, eng)?.embed(&ideal.ring)
}

/// `I : J^∞`, the intersection of `I : g^∞` over the generators `g` of `J`.
pub fn saturate(ideal: &Ideal, by: &Ideal, eng: &Engine) -> Result<Ideal> {
    let by = by.embed(&ideal.ring)?;
    let mut acc: Option<Ideal> = None;
    for g in by.generators() {
        let s = saturate_by(ideal, g, eng)?;
        acc = Some(match acc {
            None => s,
            Some(prev) => intersect(&prev, &s, eng)?,
        });
    }
    // I : (0)^∞ is the whole ring
    Ok(acc.unwrap_or_else(|| Ideal::unit(&ideal.ring)))
}

/// All `m`-fold products of generators, deduplicated.
pub fn ideal_power(ideal: &Ideal, m: u32, eng: &Engine) -> Result<Ideal> {
    if m == 0 {
        return Err(Error::Validation("ideal power needs m >= 1".into()));
    }
    let k = ideal.gens.len();
    let count = binomial(k + m as usize - 1, m as usize);
    if count > eng.budget.max_generators {
        return Err(Error::Budget(format!(
            "power {m} of an ideal with {k} generators has {count} products (cap {})",
            eng.budget.max_generators
        )));
    }
    let products: Vec<Polynomial> = multisets(k, m as usize)
        .into_iter()
        .map(|ms| {
            ms.iter().fold(Polynomial::one(&ideal.ring), |acc, &i| {
                &acc * &ideal.gens[i]
            })
        })
        .collect();
    Ideal::new(&ideal.ring, products)
}

pub(crate) fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Nondecreasing index sequences of length `m` over `0..k`, in lexicographic order.
pub(crate) fn multisets(k: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k == 0 {
        return out;
    }
    let mut cur = vec![0usize; m];
    loop {
        out.push(cur.clone());
        let mut pos = m;
        while pos > 0 && cur[pos - 1] == k - 1 {
            pos -= 1;
        }
        if pos == 0 {
            return out;
        }
        let v = cur[pos - 1] + 1;
        for c in &mut cur[pos - 1..] {
            *c = v;
        }
    }
}

/// `f` vanishes on the complex zero set of `I`.
pub fn radical_member(f: &Polynomial, ideal: &Ideal, eng: &Engine) -> Result<bool> {
    let f = f.embed(&ideal.ring)?;
    if f.is_zero() {
        return Ok(true);
    }
    let (ext, idx) = with_fresh(&ideal.ring, &["w"]);
    let w = Polynomial::var(&ext, idx[0]);
    let rab = &Polynomial::one(&ext) - &(&w * &f.embed(&ext)?);
    let big = ideal.embed(&ext)?.with([rab])?;
    let basis = standard_basis(&big, &MonomialOrdering::DegRevLex, eng)?;
    Ok(basis.len() == 1 && basis[0].is_constant())
}

/// Every generator of each ideal lies in the radical of the other.
pub fn ideal_equal_radical(a: &Ideal, b: &Ideal, eng: &Engine) -> Result<bool> {
    let b = b.embed(&a.ring)?;
    for g in a.generators() {
        if !radical_member(g, &b, eng)? {
            return Ok(false);
        }
    }
    for g in b.generators() {
        if !radical_member(g, a, eng)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `f` vanishes on the zero set of `I` near the origin: some element of `I : f^∞`
/// is a unit at the origin.
pub fn germ_radical_member(f: &Polynomial, ideal: &Ideal, eng: &Engine) -> Result<bool> {
    let f = f.embed(&ideal.ring)?;
    if f.is_zero() {
        return Ok(true);
    }
    let sat = saturate_by(ideal, &f, eng)?;
    Ok(sat
        .generators()
        .iter()
        .any(|g| !g.constant_term().is_zero()))
}

/// Equality of the zero-set germs at the origin.
pub fn germ_equal_radical(a: &Ideal, b: &Ideal, eng: &Engine) -> Result<bool> {
    Ok(germ_radical_witness(a, b, eng)?.is_none())
}

/// First generator (of either ideal) that fails germ radical membership in the other,
/// tagged with `true` when it comes from `a`.
pub fn germ_radical_witness(
    a: &Ideal,
    b: &Ideal,
    eng: &Engine,
) -> Result<Option<(bool, Polynomial)>> {
    let b = b.embed(&a.ring)?;
    for g in a.generators() {
        if !germ_radical_member(g, &b, eng)? {
            return Ok(Some((true, g.clone())));
        }
    }
    for g in b.generators() {
        if !germ_radical_member(g, a, eng)? {
            return Ok(Some((false, g.clone())));
        }
    }
    Ok(None)
}

/// Dimension of the zero-set germ at the origin.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "value", rename_all = "kebab-case")]
pub enum DimVerdict {
    /// Pure powers `(variable index, exponent)` found among the leading monomials.
    DimZeroAtOrigin {
        pure_powers: Vec<(usize, u16)>,
    },
    PositiveDimensional,
    EmptyAtOrigin,
}

pub fn local_dim_zero(ideal: &Ideal, eng: &Engine) -> Result<DimVerdict> {
    let n = ideal.ring.len();
    if ideal.is_zero() {
        return Ok(DimVerdict::PositiveDimensional);
    }
    let basis = standard_basis(ideal, &MonomialOrdering::NegDegRevLex, eng)?;
    let lms: Vec<Monomial> = basis
        .iter()
        .filter_map(|p| leading_monomial(p, &MonomialOrdering::NegDegRevLex))
        .collect();
    if lms.iter().any(|m| m.is_one()) {
        return Ok(DimVerdict::EmptyAtOrigin);
    }
    let mut best: Vec<Option<u16>> = vec![None; n];
    for m in &lms {
        if let Some((i, e)) = m.pure_power() {
            if best[i].is_none_or(|b| e < b) {
                best[i] = Some(e);
            }
        }
    }
    if best.iter().all(|b| b.is_some()) {
        Ok(DimVerdict::DimZeroAtOrigin {
            pure_powers: best
                .into_iter()
                .enumerate()
                .map(|(i, e)| (i, e.unwrap()))
                .collect(),
        })
    } else {
        Ok(DimVerdict::PositiveDimensional)
    }
}

/// `unit · f = Σ cofactors_k · gens_k` with `unit(0) ≠ 0`: a proof that `f` lies in the
/// ideal generated by `gens` in the local ring at the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalCertificate {
    pub unit: Polynomial,
    pub cofactors: Vec<Polynomial>,
}

impl LocalCertificate {
    /// Exact re-expansion of the identity.
    pub fn verify(&self, f: &Polynomial, gens: &[Polynomial]) -> bool {
        if self.unit.constant_term().is_zero() || self.cofactors.len() != gens.len() {
            return false;
        }
        let mut rhs = Polynomial::zero(f.ring());
        for (c, g) in self.cofactors.iter().zip(gens) {
            rhs = &rhs + &(c * g);
        }
        &self.unit * f == rhs
    }
}

/// Local standard basis of `(gens)`, reusable for many membership certificates. Membership
/// is decided on an untracked basis; the tracked one is built on the first positive answer.
pub struct LocalCertifier {
    gens: Vec<Polynomial>,
    basis: mora::LocalBasis,
    tracked: OnceLock<mora::LocalBasis>,
}

impl LocalCertifier {
    pub fn new(ring: &Arc<Ring>, gens: &[Polynomial], eng: &Engine) -> Result<Self> {
        let basis = mora::local_standard_basis(gens, ring, false, eng)?;
        Ok(LocalCertifier {
            gens: gens.to_vec(),
            basis,
            tracked: OnceLock::new(),
        })
    }

    /// Certificate for `f ∈ (gens)` in the local ring at the origin, or `None`.
    pub fn certify(&self, f: &Polynomial, eng: &Engine) -> Result<Option<LocalCertificate>> {
        if !mora::local_reduce(f, &self.basis, false, eng)?
            .remainder
            .is_zero()
        {
            return Ok(None);
        }
        let tracked = match self.tracked.get() {
            Some(b) => b,
            None => {
                let b = mora::local_standard_basis(&self.gens, &self.basis.ring, true, eng)?;
                self.tracked.get_or_init(|| b)
            }
        };
        let red = mora::local_reduce(f, tracked, true, eng)?;
        if !red.remainder.is_zero() {
            return Err(Error::Inconsistency(
                "tracked and untracked local bases disagree".into(),
            ));
        }
        let cert = LocalCertificate {
            unit: red.unit,
            cofactors: red.cofactors.expect("tracked reduction"),
        };
        if !cert.verify(f, &self.gens) {
            return Err(Error::Inconsistency(
                "local membership certificate does not re-expand".into(),
            ));
        }
        Ok(Some(cert))
    }

    /// Leading monomials of the local standard basis.
    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.basis.leading_monomials()
    }
}

/// Local membership of `f` in `(gens)` at the origin, with an explicit certificate.
pub fn local_member_certificate(
    f: &Polynomial,
    gens: &[Polynomial],
    eng: &Engine,
) -> Result<Option<LocalCertificate>> {
    LocalCertifier::new(f.ring(), gens, eng)?.certify(f, eng)
}

/// Checks that every S-polynomial of `basis` reduces to zero against it.
pub fn is_standard_basis(
    basis: &[Polynomial],
    ord: &MonomialOrdering,
    eng: &Engine,
) -> Result<bool> {
    if basis.is_empty() {
        return Ok(true);
    }
    let ring = basis[0].ring();
    let sp: Vec<SPoly> = basis.iter().map(|g| SPoly::from_poly(g, ord).0).collect();
    if ord.is_local() {
        return mora::is_standard_basis(&local_basis_of(basis, ring), eng);
    }
    let refs: Vec<&SPoly> = sp.iter().collect();
    for i in 0..sp.len() {
        for j in i + 1..sp.len() {
            let s = buchberger::s_poly(&sp[i], &sp[j], ord);
            if !s.is_zero() && !buchberger::reduce_full(s, &refs, ord, eng)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
