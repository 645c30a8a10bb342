//! Random ring and polynomial generators shared by the property tests.

use std::sync::Arc;

use bordism_core::gf2ring::{GeneratorSpec, Gf2Poly, Monomial, RingPresentation};
use proptest::prelude::*;

/// (degree, truncation) per generator plus a degree cap.
pub fn ring_params() -> impl Strategy<Value = (Vec<(u32, u32)>, u32)> {
    (
        prop::collection::vec((1u32..=3, 1u32..=5), 1..=3),
        0u32..=10,
    )
}

pub fn build_ring(gens: &[(u32, u32)], cap: u32) -> Arc<RingPresentation> {
    let specs = gens
        .iter()
        .enumerate()
        .map(|(i, &(d, t))| GeneratorSpec::new(format!("x{i}"), d, t).unwrap())
        .collect();
    RingPresentation::new(specs, cap).unwrap()
}

pub fn random_poly(ring: &Arc<RingPresentation>, exps: &[Vec<u32>]) -> Gf2Poly {
    let t: Vec<u32> = ring.generators().iter().map(|g| g.truncation).collect();
    let monos: Vec<Monomial> = exps
        .iter()
        .map(|e| Monomial::new(e.iter().zip(&t).map(|(x, t)| x % t).collect()))
        .collect();
    Gf2Poly::sum_of(ring, &monos).unwrap()
}

pub fn exps_strategy() -> impl Strategy<Value = Vec<Vec<u32>>> {
    prop::collection::vec(prop::collection::vec(0u32..5, 3), 0..8)
}

/// Pascal's triangle mod 2, rows `0..=rows`.
pub fn pascal_mod2(rows: usize) -> Vec<Vec<bool>> {
    let mut tri = vec![vec![true]];
    for r in 1..=rows {
        let prev = &tri[r - 1];
        let row = (0..=r)
            .map(|s| {
                let left = s > 0 && prev[s - 1];
                let right = s < r && prev[s];
                left ^ right
            })
            .collect();
        tri.push(row);
    }
    tri
}
