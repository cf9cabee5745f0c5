//! Local standard bases (negdegrevlex) via Mora's tangent-cone normal form.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use super::buchberger::{gm_update, reduction_cost, select_pair, Pair, CHARGE_EVERY};
use super::ordering::MonomialOrdering;
use super::sorted::{cancel_factors, SPoly};
use super::Engine;
use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial, Rational, Ring};

const LOCAL: MonomialOrdering = MonomialOrdering::NegDegRevLex;

/// A local standard-basis element, optionally with its expression in the generators.
#[derive(Clone, Debug)]
pub(crate) struct LocalElem {
    pub p: SPoly,
    pub ecart: u32,
    pub rep: Option<Vec<Polynomial>>,
}

#[derive(Clone, Debug)]
pub(crate) struct LocalBasis {
    pub ring: Arc<Ring>,
    pub ngens: usize,
    pub elems: Vec<LocalElem>,
}

impl LocalBasis {
    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.elems.iter().map(|e| e.p.lm().clone()).collect()
    }

    pub fn polynomials(&self) -> Vec<Polynomial> {
        self.elems.iter().map(|e| e.p.to_poly(&self.ring)).collect()
    }
}

/// Running remainder `h = u * input + sum_k c_k * gen_k`.
struct Tracked {
    h: SPoly,
    u: Polynomial,
    c: Option<Vec<Polynomial>>,
}

enum Reducer<'a> {
    Basis(&'a LocalElem),
    Prior(SPoly, u32, Polynomial, Option<Vec<Polynomial>>),
}

impl Reducer<'_> {
    fn poly(&self) -> &SPoly {
        match self {
            Reducer::Basis(e) => &e.p,
            Reducer::Prior(p, ..) => p,
        }
    }

    fn ecart(&self) -> u32 {
        match self {
            Reducer::Basis(e) => e.ecart,
            Reducer::Prior(_, e, ..) => *e,
        }
    }
}

/// Estimated cost of one `scaled_combination` and the rescaling that follows, in the
/// units of `reduction_cost`; rational normalisation makes it quadratic in the word size.
fn combination_cost(a: &BigInt, x: &Polynomial, b: &BigInt, y: &Polynomial) -> usize {
    let coeff_bits = |p: &Polynomial| {
        p.terms()
            .next()
            .map_or(0, |(_, c)| c.numer().bits() + c.denom().bits())
    };
    let words = 1 + (a.bits() + b.bits() + coeff_bits(x).max(coeff_bits(y))) as usize / 64;
    (x.num_terms() + y.num_terms()) * words * words
}

fn scaled_combination(
    a: &BigInt,
    x: &Polynomial,
    b: &BigInt,
    m: &Monomial,
    y: &Polynomial,
    work: &mut usize,
) -> Polynomial {
    *work += combination_cost(a, x, b, y);
    let mut out = x.scale(&Rational::from_integer(a.clone()));
    out.add_scaled(&Rational::from_integer(-b.clone()), m, y);
    out
}

/// Mora's normal form of the tracked remainder against `basis`.
fn nf_mora(mut st: Tracked, basis: &LocalBasis, eng: &Engine) -> Result<Tracked> {
    let mut extra: Vec<Reducer> = Vec::new();
    let mut steps = 0usize;
    let mut work = 0usize;
    let track = st.c.is_some();
    loop {
        if st.h.is_zero() {
            break;
        }
        let lm = st.h.lm().clone();
        let mut best: Option<(u32, usize, bool)> = None;
        for (k, e) in basis.elems.iter().enumerate() {
            if e.p.lm().divides(&lm) && best.is_none_or(|(ec, ..)| e.ecart < ec) {
                best = Some((e.ecart, k, false));
            }
        }
        for (k, r) in extra.iter().enumerate() {
            if r.poly().lm().divides(&lm) && best.is_none_or(|(ec, ..)| r.ecart() < ec) {
                best = Some((r.ecart(), k, true));
            }
        }
        let Some((g_ecart, idx, is_extra)) = best else {
            break;
        };
        let h_ecart = st.h.ecart();
        if g_ecart > h_ecart {
            extra.push(Reducer::Prior(
                st.h.clone(),
                h_ecart,
                st.u.clone(),
                st.c.clone(),
            ));
        }
        let reducer = if is_extra {
            &extra[idx]
        } else {
            &Reducer::Basis(&basis.elems[idx])
        };
        let g = reducer.poly();
        let m = lm.div(g.lm()).expect("divisibility checked");
        let (a, b) = cancel_factors(st.h.lc(), g.lc());
        work += reduction_cost(&st.h, g);
        let mut h = st.h.lin_comb(&a, &b, &m, g, &LOCAL);
        let (u, c) = match reducer {
            Reducer::Basis(e) => {
                let u = st.u.scale(&Rational::from_integer(a.clone()));
                let c: Option<Vec<Polynomial>> = if track {
                    let rep = e.rep.as_ref().expect("tracked basis");
                    Some(
                        st.c.as_ref()
                            .unwrap()
                            .iter()
                            .zip(rep)
                            .map(|(ck, rk)| scaled_combination(&a, ck, &b, &m, rk, &mut work))
                            .collect(),
                    )
                } else {
                    None
                };
                (u, c)
            }
            Reducer::Prior(_, _, gu, gc) => {
                let u = scaled_combination(&a, &st.u, &b, &m, gu, &mut work);
                let c: Option<Vec<Polynomial>> = if track {
                    Some(
                        st.c.as_ref()
                            .unwrap()
                            .iter()
                            .zip(gc.as_ref().unwrap())
                            .map(|(ck, gk)| scaled_combination(&a, ck, &b, &m, gk, &mut work))
                            .collect(),
                    )
                } else {
                    None
                };
                (u, c)
            }
        };
        let content = h.make_primitive();
        let inv = Rational::new(BigInt::one(), content);
        st = Tracked {
            h,
            u: u.scale(&inv),
            c: c.map(|v| v.iter().map(|p| p.scale(&inv)).collect()),
        };
        steps += 1;
        if steps.is_multiple_of(CHARGE_EVERY) {
            eng.count_reductions(CHARGE_EVERY, std::mem::take(&mut work))?;
        }
    }
    eng.count_reductions(steps % CHARGE_EVERY, work)?;
    Ok(st)
}

fn unit_vector(ring: &Arc<Ring>, n: usize, k: usize, scale: &Rational) -> Vec<Polynomial> {
    (0..n)
        .map(|i| {
            if i == k {
                Polynomial::constant(ring, scale.clone())
            } else {
                Polynomial::zero(ring)
            }
        })
        .collect()
}

/// Standard basis of the ideal generated by `gens` in the local ring at the origin.
pub(crate) fn local_standard_basis(
    gens: &[Polynomial],
    ring: &Arc<Ring>,
    track: bool,
    eng: &Engine,
) -> Result<LocalBasis> {
    let ngens = gens.len();
    let mut basis = LocalBasis {
        ring: ring.clone(),
        ngens,
        elems: Vec::new(),
    };
    let mut pairs: Vec<Pair> = Vec::new();
    let mut sugars: Vec<u32> = Vec::new();

    let push = |basis: &mut LocalBasis,
                pairs: &mut Vec<Pair>,
                sugars: &mut Vec<u32>,
                e: LocalElem|
     -> Result<bool> {
        if e.p.max_degree() > eng.budget.max_degree {
            return Err(Error::Budget(format!(
                "standard-basis element of degree {} exceeds the degree cap {}",
                e.p.max_degree(),
                eng.budget.max_degree
            )));
        }
        let unit = e.p.lm().is_one();
        sugars.push(e.p.max_degree());
        basis.elems.push(e);
        let lms = basis.leading_monomials();
        let active = vec![true; lms.len()];
        gm_update(pairs, &lms, &active, sugars, lms.len() - 1, false);
        Ok(unit)
    };

    for (k, g) in gens.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        let (q, factor) = SPoly::from_poly(g, &LOCAL);
        let rep = track.then(|| unit_vector(ring, ngens, k, &factor.recip()));
        let ecart = q.ecart();
        if push(
            &mut basis,
            &mut pairs,
            &mut sugars,
            LocalElem { p: q, ecart, rep },
        )? {
            return Ok(keep_unit(basis));
        }
    }

    while let Some(pair) = select_pair(&mut pairs, &LOCAL) {
        eng.count_pair()?;
        let (fi, fj) = (&basis.elems[pair.i], &basis.elems[pair.j]);
        let lcm = pair.lcm.clone();
        let mi = lcm.div(fi.p.lm()).unwrap();
        let mj = lcm.div(fj.p.lm()).unwrap();
        let (a, b) = cancel_factors(fi.p.lc(), fj.p.lc());
        let left = SPoly {
            terms: fi
                .p
                .terms
                .iter()
                .map(|(m, c)| (m.mul(&mi), c.clone()))
                .collect(),
        };
        let mut s = left.lin_comb(&a, &b, &mj, &fj.p, &LOCAL);
        if s.is_zero() {
            continue;
        }
        let content = s.make_primitive();
        let inv = Rational::new(BigInt::one(), content);
        let rep_s: Option<Vec<Polynomial>> = if track {
            let (ri, rj) = (fi.rep.as_ref().unwrap(), fj.rep.as_ref().unwrap());
            Some(
                ri.iter()
                    .zip(rj)
                    .map(|(x, y)| {
                        let mut out = Polynomial::zero(ring);
                        out.add_scaled(&Rational::from_integer(a.clone()), &mi, x);
                        out.add_scaled(&Rational::from_integer(-b.clone()), &mj, y);
                        out.scale(&inv)
                    })
                    .collect(),
            )
        } else {
            None
        };
        let st = Tracked {
            h: s,
            u: Polynomial::one(ring),
            c: track.then(|| vec![Polynomial::zero(ring); ngens]),
        };
        let st = nf_mora(st, &basis, eng)?;
        if st.h.is_zero() {
            continue;
        }
        let rep = rep_s.map(|rs| {
            rs.iter()
                .zip(st.c.as_ref().unwrap())
                .map(|(r, c)| &(&st.u * r) + c)
                .collect()
        });
        let ecart = st.h.ecart();
        if push(
            &mut basis,
            &mut pairs,
            &mut sugars,
            LocalElem {
                p: st.h,
                ecart,
                rep,
            },
        )? {
            return Ok(keep_unit(basis));
        }
    }
    Ok(basis)
}

fn keep_unit(mut basis: LocalBasis) -> LocalBasis {
    let k = basis.elems.iter().position(|e| e.p.lm().is_one()).unwrap();
    let e = basis.elems.swap_remove(k);
    basis.elems = vec![e];
    basis
}

/// Result of a local normal form: `unit * f = sum_k cofactors_k * gen_k + remainder`.
pub(crate) struct LocalReduction {
    pub remainder: Polynomial,
    pub unit: Polynomial,
    pub cofactors: Option<Vec<Polynomial>>,
}

pub(crate) fn local_reduce(
    f: &Polynomial,
    basis: &LocalBasis,
    track: bool,
    eng: &Engine,
) -> Result<LocalReduction> {
    let ring = &basis.ring;
    if f.is_zero() {
        return Ok(LocalReduction {
            remainder: f.clone(),
            unit: Polynomial::one(ring),
            cofactors: track.then(|| vec![Polynomial::zero(ring); basis.ngens]),
        });
    }
    let (q, factor) = SPoly::from_poly(f, &LOCAL);
    let st = Tracked {
        h: q,
        u: Polynomial::constant(ring, factor.recip()),
        c: track.then(|| vec![Polynomial::zero(ring); basis.ngens]),
    };
    let st = nf_mora(st, basis, eng)?;
    // h = u f + sum c gen  =>  u f = -sum c gen + h
    let h = st.h.to_poly(ring);
    let cof = st.c.map(|c| c.iter().map(|p| -p).collect());
    Ok(LocalReduction {
        remainder: h,
        unit: st.u,
        cofactors: cof,
    })
}

/// Every S-polynomial of the basis has local normal form zero.
pub(crate) fn is_standard_basis(basis: &LocalBasis, eng: &Engine) -> Result<bool> {
    let n = basis.elems.len();
    for i in 0..n {
        for j in i + 1..n {
            let (fi, fj) = (&basis.elems[i].p, &basis.elems[j].p);
            let s = super::buchberger::s_poly(fi, fj, &LOCAL);
            if s.is_zero() {
                continue;
            }
            let st = Tracked {
                h: s,
                u: Polynomial::one(&basis.ring),
                c: None,
            };
            if !nf_mora(st, basis, eng)?.h.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
