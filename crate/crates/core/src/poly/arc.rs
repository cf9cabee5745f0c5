use std::fmt;

use num_traits::{One, Signed, Zero};

use super::{fmt_rational, Monomial, Polynomial, Rational};
use crate::error::{Error, Result};

/// Dense univariate polynomial in the arc parameter `s`; index `i` holds the coefficient of `s^i`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UniPoly(Vec<Rational>);

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly(coeffs)
    }

    pub fn zero() -> Self {
        UniPoly(Vec::new())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `c * s^k`
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut v = vec![Rational::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    /// Dense copy of a polynomial in a single variable.
    pub fn from_univariate(p: &Polynomial) -> Result<Self> {
        if p.nvars() != 1 {
            return Err(Error::ContextMismatch(
                "expected a univariate polynomial".into(),
            ));
        }
        let mut v = Vec::new();
        for (m, c) in p.terms() {
            let k = m.exp(0) as usize;
            if v.len() <= k {
                v.resize(k + 1, Rational::zero());
            }
            v[k] = c.clone();
        }
        Ok(UniPoly::new(v))
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn value_at_zero(&self) -> Rational {
        self.0.first().cloned().unwrap_or_else(Rational::zero)
    }

    /// Lowest exponent with nonzero coefficient; `None` for the zero polynomial.
    pub fn order(&self) -> Option<usize> {
        self.0.iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.0.len().max(other.0.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.0.get(i);
            let b = other.0.get(i);
            v.push(match (a, b) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        UniPoly::new(v)
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut v = vec![Rational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] += a * b;
                }
            }
        }
        UniPoly::new(v)
    }

    pub fn add_constant(&self, c: &Rational) -> UniPoly {
        let mut v = self.0.clone();
        if v.is_empty() {
            v.push(Rational::zero());
        }
        v[0] += c;
        UniPoly::new(v)
    }

    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        let mut first = true;
        for (k, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if first {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            first = false;
            let abs = c.abs();
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            if mono.is_empty() {
                out.push_str(&fmt_rational(&abs));
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{}*{mono}", fmt_rational(&abs)));
            }
        }
        out
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("s"))
    }
}

/// Polynomial curve `s -> (c_1(s), .., c_m(s))`; its base point is the value at `s = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamArc {
    coords: Vec<UniPoly>,
}

impl ParamArc {
    pub fn new(coords: Vec<UniPoly>) -> Self {
        ParamArc { coords }
    }

    /// Arc `base + offsets(s)`; the offsets must vanish at `s = 0`.
    pub fn based_at(base: &[Rational], offsets: Vec<UniPoly>) -> Result<Self> {
        if base.len() != offsets.len() {
            return Err(Error::ContextMismatch("arc base point arity".into()));
        }
        if offsets.iter().any(|c| !c.value_at_zero().is_zero()) {
            return Err(Error::Validation("arc offsets must vanish at s = 0".into()));
        }
        Ok(ParamArc {
            coords: offsets
                .iter()
                .zip(base)
                .map(|(c, b)| c.add_constant(b))
                .collect(),
        })
    }

    pub fn coords(&self) -> &[UniPoly] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn base_point(&self) -> Vec<Rational> {
        self.coords.iter().map(UniPoly::value_at_zero).collect()
    }

    pub fn is_germ_at_origin(&self) -> bool {
        self.coords.iter().all(|c| c.value_at_zero().is_zero())
    }
}

/// Exact order of a composite `p(mu(s))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcOrder {
    /// `None` encodes +infinity (identically zero composite).
    pub order: Option<usize>,
    pub leading_coeff: Rational,
}

impl ArcOrder {
    pub fn of(u: &UniPoly) -> Self {
        match u.order() {
            Some(k) => ArcOrder {
                order: Some(k),
                leading_coeff: u.coeffs()[k].clone(),
            },
            None => ArcOrder {
                order: None,
                leading_coeff: Rational::zero(),
            },
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.order.is_none()
    }
}

/// Composite `p(mu(s))`, evaluated Horner-style one variable at a time.
pub fn arc_compose(p: &Polynomial, mu: &ParamArc) -> Result<UniPoly> {
    if p.nvars() != mu.dim() {
        return Err(Error::ContextMismatch(format!(
            "arc of dimension {} for polynomial in {} variables",
            mu.dim(),
            p.nvars()
        )));
    }
    let terms: Vec<(&Monomial, &Rational)> = p.terms().collect();
    Ok(horner(&terms, 0, mu.coords()))
}

pub fn arc_order(p: &Polynomial, mu: &ParamArc) -> Result<ArcOrder> {
    Ok(ArcOrder::of(&arc_compose(p, mu)?))
}

// `terms` are sorted lexicographically by exponent vector, so terms sharing the
// exponents of variables `< var` are contiguous and grouped by `exp(var)` ascending.
fn horner(terms: &[(&Monomial, &Rational)], var: usize, coords: &[UniPoly]) -> UniPoly {
    if terms.is_empty() {
        return UniPoly::zero();
    }
    if var == coords.len() {
        debug_assert_eq!(terms.len(), 1);
        return UniPoly::constant(terms[0].1.clone());
    }
    let mut groups: Vec<(u16, &[(&Monomial, &Rational)])> = Vec::new();
    let mut start = 0;
    while start < terms.len() {
        let e = terms[start].0.exp(var);
        let mut end = start + 1;
        while end < terms.len() && terms[end].0.exp(var) == e {
            end += 1;
        }
        groups.push((e, &terms[start..end]));
        start = end;
    }
    let coord = &coords[var];
    let mut acc = UniPoly::zero();
    let mut current = groups.last().map(|g| g.0).unwrap_or(0);
    for (e, group) in groups.iter().rev() {
        while current > *e {
            acc = acc.mul(coord);
            current -= 1;
        }
        acc = acc.add(&horner(group, var + 1, coords));
    }
    while current > 0 {
        acc = acc.mul(coord);
        current -= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, Ring};

    fn s() -> UniPoly {
        UniPoly::monomial(rat(1), 1)
    }

    #[test]
    fn compose_xy_along_s_s2() {
        let r = Ring::new(["x", "y", "t"]).unwrap();
        let p = &Polynomial::var(&r, 0) * &Polynomial::var(&r, 1);
        let mu = ParamArc::new(vec![s(), UniPoly::monomial(rat(1), 2), UniPoly::zero()]);
        assert_eq!(arc_compose(&p, &mu).unwrap(), UniPoly::monomial(rat(1), 3));
    }

    #[test]
    fn zero_arc_gives_constant_term() {
        let r = Ring::new(["x", "y"]).unwrap();
        let p = &Polynomial::var(&r, 0) + &Polynomial::constant(&r, rat(5));
        let mu = ParamArc::new(vec![UniPoly::zero(), UniPoly::zero()]);
        assert_eq!(arc_compose(&p, &mu).unwrap(), UniPoly::constant(rat(5)));
        let z = Polynomial::zero(&r);
        assert!(arc_order(&z, &mu).unwrap().is_infinite());
    }

    #[test]
    fn based_arc_requires_vanishing_offsets() {
        assert!(ParamArc::based_at(&[rat(1)], vec![UniPoly::constant(rat(1))]).is_err());
        let a = ParamArc::based_at(&[rat(1)], vec![s()]).unwrap();
        assert_eq!(a.base_point(), vec![rat(1)]);
        assert!(!a.is_germ_at_origin());
    }

    #[test]
    fn render_parameter_polynomial() {
        let u = UniPoly::new(vec![rat(0), rat(2), rat(-1)]);
        assert_eq!(u.render("s"), "-s^2 + 2*s");
    }
}
