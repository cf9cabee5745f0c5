//! Fast rejection of catalog arcs: orders of composites computed modulo the prime
//! `2^61 − 1` on truncated series. A surviving arc is re-checked exactly, so a
//! modular accident can only hide a witness, never create one.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::catalog::ArcCatalog;
use crate::poly::{Polynomial, Rational};

const P: u64 = (1 << 61) - 1;

fn mul(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn add(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= P {
        s - P
    } else {
        s
    }
}

fn pow(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a);
        }
        a = mul(a, a);
        e >>= 1;
    }
    r
}

fn reduce(n: &BigInt) -> u64 {
    let p = BigInt::from(P);
    n.mod_floor(&p).to_u64().unwrap()
}

/// Image of a rational modulo `P`, or `None` when the denominator vanishes there.
fn to_mod(c: &Rational) -> Option<u64> {
    let d = reduce(c.denom());
    if d == 0 {
        return None;
    }
    Some(mul(reduce(c.numer()), pow(d, P - 2)))
}

/// Sparse series `Σ c_k s^k`, exponents ascending, truncated below `trunc`.
type Series = Vec<(u32, u64)>;

fn series_mul(a: &Series, b: &Series, trunc: u32, out: &mut Series) {
    out.clear();
    for &(ea, ca) in a {
        if ea >= trunc {
            break;
        }
        for &(eb, cb) in b {
            let e = ea + eb;
            if e >= trunc {
                break;
            }
            out.push((e, mul(ca, cb)));
        }
    }
    out.sort_unstable_by_key(|t| t.0);
    let mut merged: Series = Vec::with_capacity(out.len());
    for &(e, c) in out.iter() {
        match merged.last_mut() {
            Some(last) if last.0 == e => last.1 = add(last.1, c),
            _ => merged.push((e, c)),
        }
    }
    merged.retain(|t| t.1 != 0);
    *out = merged;
}

/// A polynomial prepared for modular composition.
#[derive(Clone, Debug)]
pub struct ModPoly {
    terms: Vec<(Vec<u16>, u64)>,
    exact: bool,
}

impl ModPoly {
    pub fn new(p: &Polynomial) -> Self {
        let mut exact = true;
        let terms = p
            .terms()
            .filter_map(|(m, c)| match to_mod(c) {
                Some(0) => None,
                Some(v) => Some((m.exps().to_vec(), v)),
                None => {
                    exact = false;
                    None
                }
            })
            .collect();
        ModPoly { terms, exact }
    }

    fn max_exponent(&self) -> u16 {
        self.terms
            .iter()
            .flat_map(|t| t.0.iter().copied())
            .max()
            .unwrap_or(0)
    }
}

/// Powers of every catalog option as truncated modular series.
pub struct Screen {
    trunc: u32,
    /// `powers[option][e]`
    powers: Vec<Vec<Series>>,
    min_weight: Vec<u32>,
}

impl Screen {
    pub fn new(catalog: &ArcCatalog, polys: &[&ModPoly], trunc: u32) -> Self {
        let max_e = polys.iter().map(|p| p.max_exponent()).max().unwrap_or(0) as usize;
        let mut powers = Vec::with_capacity(catalog.options().len());
        let mut min_weight = Vec::with_capacity(catalog.options().len());
        let mut scratch = Series::new();
        for o in catalog.options() {
            let base: Series = o
                .terms
                .iter()
                .map(|(w, c)| (*w, to_mod(c).expect("catalog coefficients are small")))
                .collect();
            let mut ps: Vec<Series> = vec![vec![(0, 1)]];
            for e in 1..=max_e {
                series_mul(&ps[e - 1], &base, trunc, &mut scratch);
                ps.push(scratch.clone());
            }
            min_weight.push(o.terms.first().map_or(u32::MAX, |t| t.0));
            powers.push(ps);
        }
        Screen {
            trunc,
            powers,
            min_weight,
        }
    }

    /// Lowest index `< limit` with a nonzero coefficient of `p(arc)` modulo `P`.
    pub fn order_below(&self, p: &ModPoly, arc: &[u16], limit: u32) -> Option<u32> {
        let limit = limit.min(self.trunc);
        let mut acc: Vec<u64> = vec![0; limit as usize];
        let mut cur = Series::new();
        let mut next = Series::new();
        'terms: for (exps, c) in &p.terms {
            let mut low = 0u32;
            for (i, &e) in exps.iter().enumerate() {
                if e > 0 {
                    let w = self.min_weight[arc[i] as usize];
                    if w == u32::MAX {
                        continue 'terms;
                    }
                    low = low.saturating_add(w * e as u32);
                }
            }
            if low >= limit {
                continue;
            }
            cur.clear();
            cur.push((0, *c));
            for (i, &e) in exps.iter().enumerate() {
                if e > 0 {
                    series_mul(
                        &cur,
                        &self.powers[arc[i] as usize][e as usize],
                        limit,
                        &mut next,
                    );
                    std::mem::swap(&mut cur, &mut next);
                    if cur.is_empty() {
                        continue 'terms;
                    }
                }
            }
            for &(k, v) in &cur {
                acc[k as usize] = add(acc[k as usize], v);
            }
        }
        acc.iter().position(|&v| v != 0).map(|k| k as u32)
    }

    /// Whether `f` may have strictly smaller order than every generator along `arc`.
    pub fn candidate(&self, f: &ModPoly, gens: &[ModPoly], arc: &[u16]) -> bool {
        if !f.exact || gens.iter().any(|g| !g.exact) {
            return true;
        }
        let Some(of) = self.order_below(f, arc, self.trunc) else {
            return false;
        };
        gens.iter()
            .all(|g| self.order_below(g, arc, of + 1).is_none())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_in_ring;
    use crate::poly::{arc_order, Ring};
    use num_traits::Zero;

    #[test]
    fn modular_order_matches_exact_order() {
        let r = Ring::new(["x", "y", "t"]).unwrap();
        let cat = ArcCatalog::new(3, 2, 3);
        let polys: Vec<Polynomial> = ["x^2*y - 3*y^3 + t*x", "2*x*y^2 - y^2*t", "x^3 - 1/2*y^2"]
            .iter()
            .map(|s| parse_in_ring(s, &r).unwrap())
            .collect();
        let mods: Vec<ModPoly> = polys.iter().map(ModPoly::new).collect();
        let refs: Vec<&ModPoly> = mods.iter().collect();
        let screen = Screen::new(&cat, &refs, 64);
        for block in cat.blocks(3) {
            for a in block.arcs.iter().step_by(7) {
                let arc = cat.arc(a);
                for (p, m) in polys.iter().zip(&mods) {
                    let exact = arc_order(p, &arc).unwrap().order.map(|k| k as u32);
                    assert_eq!(screen.order_below(m, a, 64), exact);
                }
            }
        }
    }

    #[test]
    fn rational_images() {
        assert_eq!(mul(to_mod(&crate::poly::ratio(1, 2)).unwrap(), 2), 1);
        assert!(to_mod(&Rational::zero()) == Some(0));
    }
}
