//! Deterministic catalog of polynomial test arcs through the origin.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};

use crate::poly::{rat, ratio, ParamArc, Rational, UniPoly};

/// One coordinate `Σ c_k s^{w_k}` of an arc, vanishing at `s = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordOption {
    /// `(weight, coefficient)`, weights ascending, coefficients nonzero.
    pub terms: Vec<(u32, Rational)>,
    /// 0 for the zero coordinate, 1 for `±s^w`, 2 for two-term combinations.
    pub complexity: u32,
}

impl CoordOption {
    pub fn max_weight(&self) -> u32 {
        self.terms.iter().map(|t| t.0).max().unwrap_or(0)
    }

    pub fn series(&self) -> UniPoly {
        self.terms.iter().fold(UniPoly::zero(), |acc, (w, c)| {
            acc.add(&UniPoly::monomial(c.clone(), *w as usize))
        })
    }

    fn sort_key(&self) -> (u32, u32, Vec<(u32, Rational)>) {
        (self.complexity, self.max_weight(), self.terms.clone())
    }
}

fn cmp_terms(a: &[(u32, Rational)], b: &[(u32, Rational)]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = x.0.cmp(&y.0).then_with(|| {
            // positive before negative, then by magnitude
            let (sx, sy) = (x.1.is_negative(), y.1.is_negative());
            sx.cmp(&sy).then_with(|| x.1.abs().cmp(&y.1.abs()))
        });
        if o != Ordering::Equal {
            return o;
        }
    }
    a.len().cmp(&b.len())
}

/// Per-coordinate options for weights up to `max_weight`, sorted by complexity,
/// maximal weight, then terms.
pub fn coordinate_options(max_weight: u32) -> Vec<CoordOption> {
    let coeffs = [rat(1), rat(-1), rat(2), rat(-2), ratio(1, 2), ratio(-1, 2)];
    let mut out = vec![CoordOption {
        terms: vec![],
        complexity: 0,
    }];
    let push = |out: &mut Vec<CoordOption>, opt: CoordOption| {
        if !out.iter().any(|o| o.terms == opt.terms) {
            out.push(opt);
        }
    };
    for w in 1..=max_weight {
        for c in [rat(1), rat(-1)] {
            push(
                &mut out,
                CoordOption {
                    terms: vec![(w, c)],
                    complexity: 1,
                },
            );
        }
    }
    for w in 1..=max_weight {
        for w2 in w..=max_weight {
            for c in &coeffs {
                for c2 in &coeffs {
                    let terms = if w == w2 {
                        let sum = c + c2;
                        if sum.is_zero() {
                            continue;
                        }
                        vec![(w, sum)]
                    } else {
                        vec![(w, c.clone()), (w2, c2.clone())]
                    };
                    push(
                        &mut out,
                        CoordOption {
                            terms,
                            complexity: 2,
                        },
                    );
                }
            }
        }
    }
    out.sort_by(|a, b| {
        let (ka, kb) = (a.sort_key(), b.sort_key());
        ka.0.cmp(&kb.0)
            .then(ka.1.cmp(&kb.1))
            .then_with(|| cmp_terms(&ka.2, &kb.2))
    });
    out
}

/// All arcs of dimension `dim` whose total complexity is at most `max_terms`, enumerated
/// in graded order: total complexity, then maximal weight, then lexicographically by
/// coordinate option.
#[derive(Clone, Debug)]
pub struct ArcCatalog {
    pub dim: usize,
    pub max_weight: u32,
    pub max_terms: u32,
    options: Vec<CoordOption>,
}

/// A block of the catalog sharing total complexity and maximal weight.
#[derive(Clone, Debug)]
pub struct CatalogBlock {
    pub complexity: u32,
    pub max_weight: u32,
    /// Each entry lists one option index per coordinate.
    pub arcs: Vec<Vec<u16>>,
}

impl ArcCatalog {
    pub fn new(dim: usize, max_weight: u32, max_terms: u32) -> Self {
        ArcCatalog {
            dim,
            max_weight,
            max_terms,
            options: coordinate_options(max_weight),
        }
    }

    pub fn options(&self) -> &[CoordOption] {
        &self.options
    }

    /// Offset arc for an index tuple.
    pub fn arc(&self, idx: &[u16]) -> ParamArc {
        ParamArc::new(
            idx.iter()
                .map(|&i| self.options[i as usize].series())
                .collect(),
        )
    }

    /// Blocks in enumeration order, restricted to complexity `<= limit`.
    pub fn blocks(&self, limit: u32) -> impl Iterator<Item = CatalogBlock> + '_ {
        let limit = limit.min(self.max_terms);
        (1..=limit).flat_map(move |k| {
            (1..=self.max_weight).filter_map(move |w| {
                let mut arcs = Vec::new();
                let mut cur = Vec::with_capacity(self.dim);
                self.fill(k, w, false, &mut cur, &mut arcs);
                (!arcs.is_empty()).then_some(CatalogBlock {
                    complexity: k,
                    max_weight: w,
                    arcs,
                })
            })
        })
    }

    /// Number of arcs with complexity `<= limit`.
    pub fn count(&self, limit: u32) -> usize {
        self.blocks(limit).map(|b| b.arcs.len()).sum()
    }

    fn fill(&self, remaining: u32, w: u32, hit: bool, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        let pos = cur.len();
        if pos == self.dim {
            if remaining == 0 && hit {
                out.push(cur.clone());
            }
            return;
        }
        // the remaining coordinates can absorb at most 2 each
        let left = (self.dim - pos - 1) as u32;
        for (i, o) in self.options.iter().enumerate() {
            if o.complexity > remaining || o.max_weight() > w {
                continue;
            }
            if remaining - o.complexity > 2 * left {
                continue;
            }
            cur.push(i as u16);
            self.fill(
                remaining - o.complexity,
                w,
                hit || o.max_weight() == w,
                cur,
                out,
            );
            cur.pop();
        }
    }
}
