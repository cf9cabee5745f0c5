//! Seeded generators of small random polynomials, ideals and deformation problems, used by
//! the property suites, the fuzzing harness and the benchmarks.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::parse::DeformationProblem;
use crate::poly::{ratio, Monomial, Polynomial, Ring, VarContext};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape of a random sparse polynomial.
#[derive(Clone, Copy, Debug)]
pub struct PolyShape {
    pub min_degree: u32,
    pub max_degree: u32,
    pub max_terms: usize,
    /// Coefficients are `p / q` with `1 <= |p| <= max_coeff` and `q` in `1..=max_denom`.
    pub max_coeff: i64,
    pub max_denom: i64,
}

impl Default for PolyShape {
    fn default() -> Self {
        PolyShape {
            min_degree: 0,
            max_degree: 3,
            max_terms: 4,
            max_coeff: 5,
            max_denom: 1,
        }
    }
}

/// Every monomial in `nvars` variables with total degree in `lo..=hi`, in a fixed order.
pub fn monomials_in_degrees(nvars: usize, lo: u32, hi: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut exps = vec![0u16; nvars];
    fn rec(i: usize, left: u32, exps: &mut Vec<u16>, lo: u32, hi: u32, out: &mut Vec<Monomial>) {
        if i == exps.len() {
            let d: u32 = exps.iter().map(|&e| e as u32).sum();
            if d >= lo && d <= hi {
                out.push(Monomial::new(exps.iter().copied()));
            }
            return;
        }
        for e in 0..=left {
            exps[i] = e as u16;
            rec(i + 1, left - e, exps, lo, hi, out);
        }
        exps[i] = 0;
    }
    rec(0, hi, &mut exps, lo, hi, &mut out);
    out
}

fn coefficient(rng: &mut SeededRng, shape: &PolyShape) -> crate::poly::Rational {
    let p = rng.gen_range(1..=shape.max_coeff) * if rng.gen_bool(0.5) { 1 } else { -1 };
    let q = rng.gen_range(1..=shape.max_denom.max(1));
    ratio(p, q)
}

pub fn random_polynomial(rng: &mut SeededRng, ring: &Arc<Ring>, shape: &PolyShape) -> Polynomial {
    let pool = monomials_in_degrees(ring.len(), shape.min_degree, shape.max_degree);
    let k = rng.gen_range(1..=shape.max_terms.min(pool.len()).max(1));
    let picked: Vec<&Monomial> = pool.choose_multiple(rng, k).collect();
    let terms = picked
        .into_iter()
        .map(|m| (m.clone(), coefficient(rng, shape)));
    Polynomial::from_terms(ring, terms.collect::<Vec<_>>())
}

/// `count` nonzero generators; `count` itself is drawn from `1..=max_gens`.
pub fn random_generators(
    rng: &mut SeededRng,
    ring: &Arc<Ring>,
    max_gens: usize,
    shape: &PolyShape,
) -> Vec<Polynomial> {
    let count = rng.gen_range(1..=max_gens);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let g = random_polynomial(rng, ring, shape);
        if !g.is_zero() {
            out.push(g);
        }
    }
    out
}

/// Shape of a random deformation `F(x, t)`.
#[derive(Clone, Copy, Debug)]
pub struct ProblemShape {
    pub max_vars: usize,
    pub max_degree: u32,
    pub max_terms: usize,
    pub max_t_degree: u32,
}

impl Default for ProblemShape {
    fn default() -> Self {
        ProblemShape {
            max_vars: 3,
            max_degree: 4,
            max_terms: 4,
            max_t_degree: 2,
        }
    }
}

const VAR_NAMES: [&str; 3] = ["x", "y", "z"];

/// A deformation with a singular `F0` at the origin: every term has spatial degree at
/// least 2, so `F(0, t) = 0` and `dF0(0) = 0`.
pub fn random_problem(rng: &mut SeededRng, shape: &ProblemShape) -> DeformationProblem {
    let n = rng.gen_range(1..=shape.max_vars.min(VAR_NAMES.len()));
    let ctx = VarContext::new(&VAR_NAMES[..n], "t").expect("fixed names");
    let full = ctx.full_ring().clone();
    let spatial = monomials_in_degrees(n, 2, shape.max_degree);
    let coeff = PolyShape {
        max_coeff: 3,
        ..PolyShape::default()
    };
    loop {
        let k = rng.gen_range(1..=shape.max_terms);
        let mut f = Polynomial::zero(&full);
        for i in 0..k {
            let m = spatial.choose(rng).expect("nonempty pool");
            // the first term stays at t = 0 so that F0 is not identically zero
            let room = shape.max_degree - m.degree();
            let b = if i == 0 {
                0
            } else {
                rng.gen_range(0..=room.min(shape.max_t_degree))
            };
            let exps = m.exps().iter().copied().chain(std::iter::once(b as u16));
            f.add_term(Monomial::new(exps), coefficient(rng, &coeff));
        }
        if f.is_zero() || f.specialize(n, &crate::poly::rat(0)).is_zero() {
            continue;
        }
        return DeformationProblem::new(ctx.clone(), f, vec![])
            .expect("F(0, t) = 0 by construction");
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_pool_counts() {
        // C(2 + 2, 2) = 6 monomials of degree <= 2 in two variables
        assert_eq!(monomials_in_degrees(2, 0, 2).len(), 6);
        assert_eq!(monomials_in_degrees(3, 2, 2).len(), 6);
    }

    #[test]
    fn same_seed_same_problem() {
        let a = random_problem(&mut rng(7), &ProblemShape::default());
        let b = random_problem(&mut rng(7), &ProblemShape::default());
        assert_eq!(a, b);
        assert!(a
            .f
            .terms()
            .all(|(m, _)| m.exps()[..a.n()].iter().map(|&e| e as u32).sum::<u32>() >= 2));
    }
}
