use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::poly::Monomial;

/// Monomial orderings used by the standard-basis engine.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MonomialOrdering {
    /// Graded reverse lexicographic (global).
    DegRevLex,
    /// Two-block elimination ordering: the flagged variables form the first
    /// block; degrevlex inside each block (global).
    Elimination(Vec<bool>),
    /// Negative degree reverse lexicographic (local: `1` is the largest monomial).
    NegDegRevLex,
}

fn revlex_tiebreak(a: &[u16], b: &[u16]) -> Ordering {
    for (x, y) in a.iter().zip(b).rev() {
        if x != y {
            return y.cmp(x);
        }
    }
    Ordering::Equal
}

fn degrevlex(a: &[u16], b: &[u16]) -> Ordering {
    let da: u32 = a.iter().map(|&e| e as u32).sum();
    let db: u32 = b.iter().map(|&e| e as u32).sum();
    da.cmp(&db).then_with(|| revlex_tiebreak(a, b))
}

// degrevlex restricted to the variables whose mask entry equals `block`
fn block_cmp(a: &[u16], b: &[u16], mask: &[bool], block: bool) -> Ordering {
    let (mut da, mut db) = (0u32, 0u32);
    for ((&x, &y), &f) in a.iter().zip(b).zip(mask) {
        if f == block {
            da += x as u32;
            db += y as u32;
        }
    }
    if da != db {
        return da.cmp(&db);
    }
    for ((&x, &y), &f) in a.iter().zip(b).zip(mask).rev() {
        if f == block && x != y {
            return y.cmp(&x);
        }
    }
    Ordering::Equal
}

impl MonomialOrdering {
    pub fn is_local(&self) -> bool {
        matches!(self, MonomialOrdering::NegDegRevLex)
    }

    pub fn eliminating(nvars: usize, drop: &[usize]) -> Self {
        MonomialOrdering::Elimination((0..nvars).map(|i| drop.contains(&i)).collect())
    }

    /// Compares two monomials; `Greater` means `a` is the larger one.
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let (a, b) = (a.exps(), b.exps());
        match self {
            MonomialOrdering::DegRevLex => degrevlex(a, b),
            MonomialOrdering::NegDegRevLex => {
                let da: u32 = a.iter().map(|&e| e as u32).sum();
                let db: u32 = b.iter().map(|&e| e as u32).sum();
                db.cmp(&da).then_with(|| revlex_tiebreak(a, b))
            }
            MonomialOrdering::Elimination(mask) => {
                block_cmp(a, b, mask, true).then_with(|| block_cmp(a, b, mask, false))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u16]) -> Monomial {
        Monomial::new(e.iter().copied())
    }

    #[test]
    fn local_ordering_puts_one_on_top() {
        let o = MonomialOrdering::NegDegRevLex;
        assert_eq!(o.cmp(&m(&[0, 0]), &m(&[1, 0])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[1, 0]), &m(&[2, 0])), Ordering::Greater);
        assert!(o.is_local());
    }

    #[test]
    fn degrevlex_basics() {
        let o = MonomialOrdering::DegRevLex;
        assert_eq!(o.cmp(&m(&[2, 0, 0]), &m(&[1, 1, 0])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[1, 0, 1]), &m(&[0, 2, 0])), Ordering::Less);
        assert_eq!(o.cmp(&m(&[0, 0, 2]), &m(&[1, 0, 0])), Ordering::Greater);
    }

    #[test]
    fn elimination_block_dominates() {
        let o = MonomialOrdering::eliminating(3, &[0]);
        assert_eq!(o.cmp(&m(&[1, 0, 0]), &m(&[0, 5, 5])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[0, 2, 0]), &m(&[0, 1, 0])), Ordering::Greater);
    }
}
