//! Term lists sorted by a monomial ordering, with primitive integer coefficients.

use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::ordering::MonomialOrdering;
use crate::poly::{Monomial, Polynomial, Rational, Ring};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct SPoly {
    /// Descending in the ordering the polynomial was built for.
    pub terms: Vec<(Monomial, BigInt)>,
}

impl SPoly {
    pub fn zero() -> Self {
        SPoly { terms: Vec::new() }
    }

    /// Returns `(q, factor)` with `p = factor * q` and `q` primitive.
    pub fn from_poly(p: &Polynomial, ord: &MonomialOrdering) -> (SPoly, Rational) {
        let mut den = BigInt::one();
        for (_, c) in p.terms() {
            den = den.lcm(c.denom());
        }
        let mut terms: Vec<(Monomial, BigInt)> = p
            .terms()
            .map(|(m, c)| {
                (
                    m.clone(),
                    (c * Rational::from_integer(den.clone())).to_integer(),
                )
            })
            .collect();
        terms.sort_by(|a, b| ord.cmp(&b.0, &a.0));
        let mut q = SPoly { terms };
        let content = q.make_primitive();
        (q, Rational::new(content, den))
    }

    pub fn to_poly(&self, ring: &Arc<Ring>) -> Polynomial {
        Polynomial::from_terms(
            ring,
            self.terms
                .iter()
                .map(|(m, c)| (m.clone(), Rational::from_integer(c.clone()))),
        )
    }

    /// Monic rational image.
    pub fn to_monic_poly(&self, ring: &Arc<Ring>) -> Polynomial {
        let lc = Rational::from_integer(self.lc().clone());
        self.to_poly(ring).scale(&lc.recip())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    pub fn lc(&self) -> &BigInt {
        &self.terms[0].1
    }

    pub fn max_degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|(m, _)| m.degree())
            .max()
            .unwrap_or(0)
    }

    /// `max degree - degree of the leading monomial`.
    pub fn ecart(&self) -> u32 {
        self.max_degree() - self.lm().degree()
    }

    /// Divides by the content and makes the leading coefficient positive; returns the
    /// signed factor removed.
    pub fn make_primitive(&mut self) -> BigInt {
        if self.terms.is_empty() {
            return BigInt::one();
        }
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        if self.terms[0].1.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for (_, c) in &mut self.terms {
                *c = &*c / &g;
            }
        }
        g
    }

    pub fn scale(&mut self, a: &BigInt) {
        if a.is_one() {
            return;
        }
        for (_, c) in &mut self.terms {
            *c *= a;
        }
    }

    /// `a * self - b * m * g`, merging the two sorted term lists.
    pub fn lin_comb(
        &self,
        a: &BigInt,
        b: &BigInt,
        m: &Monomial,
        g: &SPoly,
        ord: &MonomialOrdering,
    ) -> SPoly {
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let mut i = 0;
        let mut shifted = g.terms.iter().map(|(gm, gc)| (gm.mul(m), gc));
        let mut next = shifted.next();
        while i < self.terms.len() || next.is_some() {
            let take = match (&self.terms.get(i), &next) {
                (Some(_), None) => Ordering::Greater,
                (None, Some(_)) => Ordering::Less,
                (Some((sm, _)), Some((gm, _))) => ord.cmp(sm, gm),
                (None, None) => unreachable!(),
            };
            match take {
                Ordering::Greater => {
                    let (sm, sc) = &self.terms[i];
                    out.push((sm.clone(), a * sc));
                    i += 1;
                }
                Ordering::Less => {
                    let (gm, gc) = next.take().unwrap();
                    out.push((gm, -(b * gc)));
                    next = shifted.next();
                }
                Ordering::Equal => {
                    let (gm, gc) = next.take().unwrap();
                    let c = a * &self.terms[i].1 - b * gc;
                    if !c.is_zero() {
                        out.push((gm, c));
                    }
                    i += 1;
                    next = shifted.next();
                }
            }
        }
        SPoly { terms: out }
    }
}

/// Cofactors `(a, b)` with `a * c1 = b * c2 + 0` eliminating a term: `a = c2/g`, `b = c1/g`.
pub(crate) fn cancel_factors(c1: &BigInt, c2: &BigInt) -> (BigInt, BigInt) {
    let g = c1.gcd(c2);
    let (mut a, mut b) = (c2 / &g, c1 / &g);
    if a.is_negative() {
        a = -a;
        b = -b;
    }
    (a, b)
}
