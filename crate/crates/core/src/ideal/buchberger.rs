//! Buchberger's algorithm for global orderings with the Gebauer–Möller pair update.

use std::sync::Arc;

use super::ordering::MonomialOrdering;
use super::sorted::{cancel_factors, SPoly};
use super::Engine;
use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial, Ring};

struct Elem {
    p: SPoly,
    sugar: u32,
    active: bool,
}

#[derive(Clone)]
pub(crate) struct Pair {
    pub i: usize,
    pub j: usize,
    pub lcm: Monomial,
    pub sugar: u32,
}

/// Gebauer–Möller update after adding element `h`. `product_criterion` must be
/// off for local orderings.
pub(crate) fn gm_update(
    pairs: &mut Vec<Pair>,
    lms: &[Monomial],
    active: &[bool],
    sugars: &[u32],
    h: usize,
    product_criterion: bool,
) {
    let lm_h = &lms[h];
    let mut candidates: Vec<Pair> = (0..h)
        .filter(|&g| active[g])
        .map(|g| {
            let lcm = lm_h.lcm(&lms[g]);
            let d = lcm.degree();
            let sugar = (sugars[h] + d - lm_h.degree()).max(sugars[g] + d - lms[g].degree());
            Pair {
                i: g,
                j: h,
                lcm,
                sugar,
            }
        })
        .collect();

    // chain criterion among the new pairs
    let mut kept: Vec<Pair> = Vec::new();
    let mut k = 0;
    while k < candidates.len() {
        let p = candidates[k].clone();
        let coprime = lms[p.i].is_coprime(lm_h);
        let dominated = candidates[k + 1..]
            .iter()
            .chain(kept.iter())
            .any(|q| q.lcm.divides(&p.lcm));
        if (product_criterion && coprime) || !dominated {
            kept.push(p);
        }
        k += 1;
    }
    candidates.clear();
    let new_pairs: Vec<Pair> = kept
        .into_iter()
        .filter(|p| !(product_criterion && lms[p.i].is_coprime(lm_h)))
        .collect();

    // chain criterion on old pairs
    pairs.retain(|p| {
        !(lm_h.divides(&p.lcm) && lm_h.lcm(&lms[p.i]) != p.lcm && lm_h.lcm(&lms[p.j]) != p.lcm)
    });
    pairs.extend(new_pairs);
}

pub(crate) fn select_pair(pairs: &mut Vec<Pair>, ord: &MonomialOrdering) -> Option<Pair> {
    if pairs.is_empty() {
        return None;
    }
    let mut best = 0;
    for k in 1..pairs.len() {
        let (a, b) = (&pairs[k], &pairs[best]);
        let better = a.sugar < b.sugar
            || (a.sugar == b.sugar && ord.cmp(&a.lcm, &b.lcm) == std::cmp::Ordering::Less);
        if better {
            best = k;
        }
    }
    Some(pairs.swap_remove(best))
}

pub(crate) fn s_poly(f: &SPoly, g: &SPoly, ord: &MonomialOrdering) -> SPoly {
    let lcm = f.lm().lcm(g.lm());
    let mf = lcm.div(f.lm()).unwrap();
    let mg = lcm.div(g.lm()).unwrap();
    let (a, b) = cancel_factors(f.lc(), g.lc());
    // a*mf*f - b*mg*g
    let mut left = SPoly {
        terms: f
            .terms
            .iter()
            .map(|(m, c)| (m.mul(&mf), c.clone()))
            .collect(),
    };
    left = left.lin_comb(&a, &b, &mg, g, ord);
    left.make_primitive();
    left
}

/// Reduction steps are charged to the budget in batches of this size.
pub(crate) const CHARGE_EVERY: usize = 64;

/// Term operations of one reduction step, weighted by coefficient size in words.
pub(crate) fn reduction_cost(h: &SPoly, g: &SPoly) -> usize {
    let words = 1 + (h.lc().bits() + g.lc().bits()) as usize / 64;
    (h.terms.len() + g.terms.len()) * words
}

/// Full reduction of `f` modulo the given reducers (global orderings).
pub(crate) fn reduce_full(
    f: SPoly,
    reducers: &[&SPoly],
    ord: &MonomialOrdering,
    eng: &Engine,
) -> Result<SPoly> {
    let mut h = f;
    let mut done = SPoly::zero();
    let mut steps = 0usize;
    let mut work = 0usize;
    while !h.is_zero() {
        let lm = h.lm().clone();
        match reducers.iter().find(|g| g.lm().divides(&lm)) {
            Some(g) => {
                let m = lm.div(g.lm()).unwrap();
                work += reduction_cost(&h, g);
                let (a, b) = cancel_factors(h.lc(), g.lc());
                h = h.lin_comb(&a, &b, &m, g, ord);
                done.scale(&a);
                steps += 1;
                if steps.is_multiple_of(16) {
                    normalize_pair(&mut done, &mut h);
                }
                if steps.is_multiple_of(CHARGE_EVERY) {
                    eng.count_reductions(CHARGE_EVERY, std::mem::take(&mut work))?;
                }
            }
            None => {
                let t = h.terms.remove(0);
                done.terms.push(t);
            }
        }
    }
    eng.count_reductions(steps % CHARGE_EVERY, work)?;
    done.make_primitive();
    Ok(done)
}

// Removes the common content of the finished and pending parts.
fn normalize_pair(done: &mut SPoly, h: &mut SPoly) {
    use num_integer::Integer;
    use num_traits::{One, Zero};
    let mut g = num_bigint::BigInt::zero();
    for (_, c) in done.terms.iter().chain(h.terms.iter()) {
        g = g.gcd(c);
        if g.is_one() {
            return;
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for (_, c) in done.terms.iter_mut().chain(h.terms.iter_mut()) {
        *c = &*c / &g;
    }
}

/// Reduced Gröbner basis of `gens` for a global ordering.
pub(crate) fn groebner_basis(
    gens: &[Polynomial],
    ring: &Arc<Ring>,
    ord: &MonomialOrdering,
    eng: &Engine,
) -> Result<Vec<Polynomial>> {
    debug_assert!(!ord.is_local());
    let mut elems: Vec<Elem> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    let add = |elems: &mut Vec<Elem>, pairs: &mut Vec<Pair>, p: SPoly, sugar: u32| -> Result<()> {
        if p.max_degree() > eng.budget.max_degree {
            return Err(Error::Budget(format!(
                "basis element of degree {} exceeds the degree cap {}",
                p.max_degree(),
                eng.budget.max_degree
            )));
        }
        let h = elems.len();
        let lm_h = p.lm().clone();
        elems.push(Elem {
            p,
            sugar,
            active: true,
        });
        let lms: Vec<Monomial> = elems.iter().map(|e| e.p.lm().clone()).collect();
        let active: Vec<bool> = elems.iter().map(|e| e.active).collect();
        let sugars: Vec<u32> = elems.iter().map(|e| e.sugar).collect();
        gm_update(pairs, &lms, &active, &sugars, h, true);
        for e in elems[..h].iter_mut() {
            if e.active && lm_h.divides(e.p.lm()) {
                e.active = false;
            }
        }
        Ok(())
    };

    for g in gens {
        if g.is_zero() {
            continue;
        }
        let (sp, _) = SPoly::from_poly(g, ord);
        let sugar = sp.max_degree();
        let reducers: Vec<&SPoly> = elems.iter().filter(|e| e.active).map(|e| &e.p).collect();
        let r = reduce_full(sp, &reducers, ord, eng)?;
        if !r.is_zero() {
            if r.lm().is_one() {
                return Ok(vec![Polynomial::one(ring)]);
            }
            add(&mut elems, &mut pairs, r, sugar)?;
        }
    }

    while let Some(pair) = select_pair(&mut pairs, ord) {
        eng.count_pair()?;
        let s = s_poly(&elems[pair.i].p, &elems[pair.j].p, ord);
        if s.is_zero() {
            continue;
        }
        let reducers: Vec<&SPoly> = elems.iter().filter(|e| e.active).map(|e| &e.p).collect();
        let r = reduce_full(s, &reducers, ord, eng)?;
        if !r.is_zero() {
            if r.lm().is_one() {
                return Ok(vec![Polynomial::one(ring)]);
            }
            add(&mut elems, &mut pairs, r, pair.sugar)?;
        }
    }

    // interreduce the minimal basis; leading terms are untouched since no other
    // leading monomial divides them
    let minimal: Vec<SPoly> = elems
        .into_iter()
        .filter(|e| e.active)
        .map(|e| e.p)
        .collect();
    let mut reduced: Vec<(Monomial, Polynomial)> = Vec::with_capacity(minimal.len());
    for (k, g) in minimal.iter().enumerate() {
        let others: Vec<&SPoly> = minimal
            .iter()
            .enumerate()
            .filter(|(l, _)| *l != k)
            .map(|(_, p)| p)
            .collect();
        let r = reduce_full(g.clone(), &others, ord, eng)?;
        reduced.push((r.lm().clone(), r.to_monic_poly(ring)));
    }
    reduced.sort_by(|a, b| ord.cmp(&b.0, &a.0));
    Ok(reduced.into_iter().map(|(_, p)| p).collect())
}
