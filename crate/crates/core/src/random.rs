//! Reproducible random digraphs.
//!
//! The generator is a 64-bit linear congruential generator,
//! `state ← state · 6364136223846793005 + 1442695040888963407 (mod 2^64)`,
//! seeded with `state = seed`. Each draw advances the state once and yields
//! `u = (state >> 11) / 2^53`, a uniform double in `[0, 1)`.
//!
//! [`random_digraph`] visits the candidate edges `(i, j)` with `i` outer and
//! `j` inner, both ascending over `1..=n` (loops included), and keeps an edge
//! when its draw satisfies `u < p`.

use crate::graph::Digraph;
use crate::multiset::Edge;

pub const LCG_MULTIPLIER: u64 = 6364136223846793005;
pub const LCG_INCREMENT: u64 = 1442695040888963407;

#[derive(Debug, Clone)]
pub struct Lcg {
    state: u64,
}

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Lcg { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_mul(LCG_MULTIPLIER).wrapping_add(LCG_INCREMENT);
        self.state
    }

    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}

/// A digraph on `n ≥ 1` vertices with each of the `n²` possible edges present
/// independently with probability `p`.
pub fn random_digraph(n: usize, p: f64, seed: u64) -> Digraph {
    random_digraph_from(n, p, &mut Lcg::new(seed))
}

/// Like [`random_digraph`], continuing an existing stream.
pub fn random_digraph_from(n: usize, p: f64, rng: &mut Lcg) -> Digraph {
    let mut g = Digraph::empty(n).expect("at least one vertex");
    for i in 1..=n {
        for j in 1..=n {
            if rng.next_f64() < p {
                g.add_edge(Edge::new(i, j)).expect("fresh edge within range");
            }
        }
    }
    g
}
