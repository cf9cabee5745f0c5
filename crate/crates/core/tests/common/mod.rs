#![allow(dead_code)]

pub mod oracle;

use std::sync::Arc;

use proptest::prelude::*;
use tamecheck_core::poly::{ratio, Monomial, Polynomial, Ring};

pub fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

pub fn ring(names: &[&str]) -> Arc<Ring> {
    Ring::new(names.iter().copied()).unwrap()
}

/// Sparse polynomials over `ring` with at most `terms` terms of degree at most `deg`.
pub fn poly(ring: Arc<Ring>, deg: u16, terms: usize) -> impl Strategy<Value = Polynomial> {
    let n = ring.len();
    let term = (prop::collection::vec(0..=deg, n), -6i64..=6, 1i64..=3);
    prop::collection::vec(term, 0..=terms).prop_map(move |ts| {
        let ts = ts
            .into_iter()
            .filter(|(e, _, _)| e.iter().map(|&x| x as u32).sum::<u32>() <= deg as u32)
            .filter(|(_, p, _)| *p != 0)
            .map(|(e, p, q)| (Monomial::new(e), ratio(p, q)));
        Polynomial::from_terms(&ring, ts.collect::<Vec<_>>())
    })
}

/// Like [`poly`], without a constant term, so the result vanishes at the origin.
pub fn germ(ring: Arc<Ring>, deg: u16, terms: usize) -> impl Strategy<Value = Polynomial> {
    poly(ring.clone(), deg, terms).prop_map(move |p| {
        let ts = p
            .terms()
            .filter(|(m, _)| m.degree() > 0)
            .map(|(m, c)| (m.clone(), c.clone()));
        Polynomial::from_terms(&ring, ts.collect::<Vec<_>>())
    })
}
