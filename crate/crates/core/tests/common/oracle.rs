//! Brute-force ideal membership by linear algebra: `f ∈ (g_1, ..., g_k)` with cofactors of
//! degree at most `d` iff `f` lies in the span of `m * g_i` over monomials `m` of degree `<= d`.

use std::sync::Arc;

use tamecheck_core::poly::{Monomial, Polynomial, Rational, Ring};

/// Row-echelon span of polynomials viewed as coefficient vectors.
pub struct Span {
    rows: Vec<(Monomial, Polynomial)>,
}

impl Span {
    pub fn new() -> Self {
        Span { rows: Vec::new() }
    }

    fn reduce(&self, mut v: Polynomial) -> Polynomial {
        for (pivot, row) in &self.rows {
            let c = v.coefficient(pivot);
            if c != Rational::from_integer(0.into()) {
                v.add_scaled(&-c, &Monomial::one(v.nvars()), row);
            }
        }
        v
    }

    pub fn insert(&mut self, v: Polynomial) {
        let v = self.reduce(v);
        let Some((pivot, c)) = v.terms().next().map(|(m, c)| (m.clone(), c.clone())) else {
            return;
        };
        let row = v.scale(&c.recip());
        self.rows.push((pivot, row));
    }

    pub fn contains(&self, v: &Polynomial) -> bool {
        self.reduce(v.clone()).is_zero()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

pub fn monomials_up_to(nvars: usize, d: u32) -> Vec<Monomial> {
    let mut out = vec![Monomial::one(nvars)];
    let mut frontier = out.clone();
    for _ in 0..d {
        let mut next = Vec::new();
        for m in &frontier {
            for i in 0..nvars {
                let x = m.mul(&Monomial::var(nvars, i));
                if !next.contains(&x) {
                    next.push(x);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Whether `f = Σ c_i g_i` with every `deg c_i <= d`.
pub fn member_with_degree(f: &Polynomial, gens: &[Polynomial], ring: &Arc<Ring>, d: u32) -> bool {
    let mut span = Span::new();
    for m in monomials_up_to(ring.len(), d) {
        let mono = Polynomial::term(ring, m, Rational::from_integer(1.into()));
        for g in gens {
            span.insert(&mono * g);
        }
    }
    span.contains(f)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Answer {
    Member,
    NonMember,
    Inconclusive,
}

/// For homogeneous generators and homogeneous `f` the degree bound `deg f - min deg g_i` is
/// exact, so the answer is conclusive both ways. Otherwise the bound is swept up to
/// `max_d` and only a positive answer is conclusive.
pub fn membership(f: &Polynomial, gens: &[Polynomial], ring: &Arc<Ring>, max_d: u32) -> Answer {
    if f.is_zero() {
        return Answer::Member;
    }
    let homogeneous = |p: &Polynomial| {
        let mut ds = p.terms().map(|(m, _)| m.degree());
        let first = ds.next();
        ds.all(|d| Some(d) == first)
    };
    if homogeneous(f) && gens.iter().all(homogeneous) {
        let df = f.total_degree().unwrap();
        let dmin = gens
            .iter()
            .filter_map(|g| g.total_degree())
            .min()
            .unwrap_or(0);
        if dmin > df {
            return Answer::NonMember;
        }
        return if member_with_degree(f, gens, ring, df - dmin) {
            Answer::Member
        } else {
            Answer::NonMember
        };
    }
    for d in 0..=max_d {
        if member_with_degree(f, gens, ring, d) {
            return Answer::Member;
        }
    }
    Answer::Inconclusive
}
