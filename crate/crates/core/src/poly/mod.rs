//! Exact sparse multivariate polynomials over the rationals.

mod arc;
mod context;
mod monomial;

pub use arc::{arc_compose, arc_order, ArcOrder, ParamArc, UniPoly};
pub use context::{t_expansion, VarContext};
pub use monomial::Monomial;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Ordered list of variable names a polynomial lives over.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ring {
    names: Vec<String>,
}

impl Ring {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Arc<Ring>> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, a) in names.iter().enumerate() {
            if a.is_empty() {
                return Err(Error::Validation("empty variable name".into()));
            }
            if names[..i].contains(a) {
                return Err(Error::Validation(format!("duplicate variable `{a}`")));
            }
        }
        Ok(Arc::new(Ring { names }))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Appends fresh variables, renaming them with a numeric suffix on clashes.
    pub fn extended(&self, extra: &[&str]) -> Arc<Ring> {
        let mut names = self.names.clone();
        for base in extra {
            let mut candidate = base.to_string();
            let mut k = 1;
            while names.contains(&candidate) {
                candidate = format!("{base}{k}");
                k += 1;
            }
            names.push(candidate);
        }
        Arc::new(Ring { names })
    }

    pub fn without(&self, drop: &[usize]) -> Arc<Ring> {
        let names = self
            .names
            .iter()
            .enumerate()
            .filter(|(i, _)| !drop.contains(i))
            .map(|(_, n)| n.clone())
            .collect();
        Arc::new(Ring { names })
    }
}

/// A polynomial in canonical form: no zero coefficients, no duplicate monomials.
#[derive(Clone, Debug)]
pub struct Polynomial {
    ring: Arc<Ring>,
    terms: BTreeMap<Monomial, Rational>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring)
            && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl Polynomial {
    pub fn zero(ring: &Arc<Ring>) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &Arc<Ring>, c: Rational) -> Self {
        Self::term(ring, Monomial::one(ring.len()), c)
    }

    pub fn one(ring: &Arc<Ring>) -> Self {
        Self::constant(ring, Rational::one())
    }

    pub fn var(ring: &Arc<Ring>, i: usize) -> Self {
        Self::term(ring, Monomial::var(ring.len(), i), Rational::one())
    }

    pub fn var_named(ring: &Arc<Ring>, name: &str) -> Result<Self> {
        let i = ring
            .index_of(name)
            .ok_or_else(|| Error::ContextMismatch(format!("unknown variable `{name}`")))?;
        Ok(Self::var(ring, i))
    }

    pub fn term(ring: &Arc<Ring>, m: Monomial, c: Rational) -> Self {
        debug_assert_eq!(m.nvars(), ring.len());
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn from_terms(
        ring: &Arc<Ring>,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Self {
        let mut p = Self::zero(ring);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.ring.len()
    }

    /// Terms in ascending lexicographic exponent order.
    pub fn terms(
        &self,
    ) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&Monomial::one(self.nvars()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms
            .keys()
            .map(|m| m.exp(var) as u32)
            .max()
            .unwrap_or(0)
    }

    pub fn involves(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.exp(var) > 0)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += c * m * other`
    pub fn add_scaled(&mut self, c: &Rational, m: &Monomial, other: &Polynomial) {
        if c.is_zero() {
            return;
        }
        for (om, oc) in &other.terms {
            self.add_term(om.mul(m), oc * c);
        }
    }

    fn check_ring(&self, other: &Polynomial) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::ContextMismatch(format!(
                "[{}] vs [{}]",
                self.ring.names.join(","),
                other.ring.names.join(",")
            )))
        }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        let mut out = Polynomial::zero(&self.ring);
        for (m, c) in &other.terms {
            out.add_scaled(c, m, self);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut result = Polynomial::one(&self.ring);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Formal partial derivative with respect to variable `var`.
    pub fn diff(&self, var: usize) -> Polynomial {
        let mut out = Polynomial::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.exp(var);
            if e > 0 {
                let mut exps = m.exps().to_vec();
                exps[var] -= 1;
                out.add_term(Monomial::new(exps), c * rat(e as i64));
            }
        }
        out
    }

    /// Composition: variable `i` is replaced by `images[i]`, which all live in `target`.
    pub fn substitute(&self, images: &[Polynomial], target: &Arc<Ring>) -> Result<Polynomial> {
        if images.len() != self.nvars() {
            return Err(Error::ContextMismatch(format!(
                "substitution has {} images for {} variables",
                images.len(),
                self.nvars()
            )));
        }
        for img in images {
            if img.ring != *target {
                return Err(Error::ContextMismatch("substitution image ring".into()));
            }
        }
        // cache powers per variable
        let mut powers: Vec<Vec<Polynomial>> = images
            .iter()
            .map(|img| vec![Polynomial::one(target), img.clone()])
            .collect();
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut acc = Polynomial::constant(target, c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let e = e as usize;
                while powers[i].len() <= e {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                acc = &acc * &powers[i][e];
            }
            for (am, ac) in acc.terms {
                out.add_term(am, ac);
            }
        }
        Ok(out)
    }

    /// Replaces selected variables by polynomials of the same ring; others are kept.
    pub fn substitute_some(&self, assignment: &[(usize, Polynomial)]) -> Result<Polynomial> {
        let images: Vec<Polynomial> = (0..self.nvars())
            .map(|i| {
                assignment
                    .iter()
                    .find(|(v, _)| *v == i)
                    .map(|(_, p)| p.clone())
                    .unwrap_or_else(|| Polynomial::var(&self.ring, i))
            })
            .collect();
        self.substitute(&images, &self.ring)
    }

    /// Sets variable `var` to the constant `value`.
    pub fn specialize(&self, var: usize, value: &Rational) -> Polynomial {
        let mut out = Polynomial::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.exp(var);
            let mut exps = m.exps().to_vec();
            exps[var] = 0;
            let factor = if e == 0 {
                Rational::one()
            } else {
                num_traits::pow(value.clone(), e as usize)
            };
            out.add_term(Monomial::new(exps), c * factor);
        }
        out
    }

    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.nvars() {
            return Err(Error::ContextMismatch(format!(
                "point of arity {} for {} variables",
                point.len(),
                self.nvars()
            )));
        }
        let mut sum = Rational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    v *= num_traits::pow(point[i].clone(), e as usize);
                }
            }
            sum += v;
        }
        Ok(sum)
    }

    /// Returns `p(x + x0)` where `x0` shifts the first `x0.len()` variables.
    pub fn translate(&self, x0: &[Rational]) -> Result<Polynomial> {
        if x0.len() > self.nvars() {
            return Err(Error::ContextMismatch(format!(
                "translation point of arity {} for {} variables",
                x0.len(),
                self.nvars()
            )));
        }
        if x0.iter().all(Zero::is_zero) {
            return Ok(self.clone());
        }
        let images: Vec<Polynomial> = (0..self.nvars())
            .map(|i| {
                let v = Polynomial::var(&self.ring, i);
                match x0.get(i) {
                    Some(a) if !a.is_zero() => &v + &Polynomial::constant(&self.ring, a.clone()),
                    _ => v,
                }
            })
            .collect();
        self.substitute(&images, &self.ring)
    }

    /// Re-expresses the polynomial over `target`, matching variables by name.
    pub fn embed(&self, target: &Arc<Ring>) -> Result<Polynomial> {
        if *target == self.ring {
            return Ok(Polynomial {
                ring: target.clone(),
                terms: self.terms.clone(),
            });
        }
        let map: Vec<Option<usize>> = self.ring.names.iter().map(|n| target.index_of(n)).collect();
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut exps = vec![0u16; target.len()];
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => exps[j] += e,
                    None => {
                        return Err(Error::ContextMismatch(format!(
                            "variable `{}` missing from target ring",
                            self.ring.names[i]
                        )))
                    }
                }
            }
            out.add_term(Monomial::new(exps), c.clone());
        }
        Ok(out)
    }

    /// Coefficients `c_j` with `self = sum_j var^j * c_j`, each free of `var`.
    pub fn coefficients_in(&self, var: usize) -> Vec<Polynomial> {
        let d = self.degree_in(var) as usize;
        let mut out = vec![Polynomial::zero(&self.ring); d + 1];
        for (m, c) in &self.terms {
            let e = m.exp(var) as usize;
            let mut exps = m.exps().to_vec();
            exps[var] = 0;
            out[e].add_term(Monomial::new(exps), c.clone());
        }
        out
    }

    /// Divides out the gcd of numerators and lcm of denominators; keeps sign.
    pub fn primitive(&self) -> Polynomial {
        use num_integer::Integer;
        if self.is_zero() {
            return self.clone();
        }
        let mut g = BigInt::zero();
        let mut l = BigInt::one();
        for c in self.terms.values() {
            g = g.gcd(c.numer());
            l = l.lcm(c.denom());
        }
        let factor = Rational::new(l, g);
        self.scale(&factor)
    }

    /// Leading coefficient sign-normalized, content-free copy (for display/dedup).
    pub fn normalized(&self) -> Polynomial {
        let p = self.primitive();
        match p.terms.iter().next_back() {
            Some((_, c)) if c.is_negative() => -&p,
            _ => p,
        }
    }

    pub fn max_abs_exponent(&self) -> u16 {
        self.terms
            .keys()
            .flat_map(|m| m.exps().iter().copied())
            .max()
            .unwrap_or(0)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(rhs)
            .expect("polynomial ring mismatch in addition")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.check_ring(rhs)
            .expect("polynomial ring mismatch in subtraction");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs)
            .expect("polynomial ring mismatch in multiplication")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

pub(crate) fn fmt_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Graded reverse lexicographic comparison, used for canonical display order.
pub(crate) fn degrevlex_cmp(a: &Monomial, b: &Monomial) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    match a.degree().cmp(&b.degree()) {
        Ordering::Equal => {
            for (x, y) in a.exps().iter().zip(b.exps()).rev() {
                if x != y {
                    return y.cmp(x);
                }
            }
            Ordering::Equal
        }
        o => o,
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<(&Monomial, &Rational)> = self.terms.iter().collect();
        terms.sort_by(|a, b| degrevlex_cmp(b.0, a.0));
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mono = m.render(self.ring.names());
            if mono.is_empty() {
                write!(f, "{}", fmt_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{}*{mono}", fmt_rational(&abs))?;
            }
        }
        Ok(())
    }
}
