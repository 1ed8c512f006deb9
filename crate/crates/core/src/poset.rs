//! The hike poset and its incidence algebra.
//!
//! Closed hikes are ordered by division (`d | c` when `c = d c'` with `c'`
//! closed), and the division extends to open hikes by closed divisors. The
//! incidence functions live here: the Möbius-like `μ` and its open extension
//! `μ_ij`, its Dirichlet inverse `β`, the walk-counting functions `f_ij`, and
//! the self-avoiding decomposition sums that express `β` and `f_ij` in terms of
//! self-avoiding factors.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::multiset::{Edge, EdgeMultiset, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PosetError {
    #[error("`{0}` is not a hike")]
    NotAHike(EdgeMultiset),
    #[error("`{0}` is not a closed hike")]
    NotClosed(EdgeMultiset),
    #[error("the hike must be non-empty")]
    EmptyHike,
}

/// Classification of an edge multiset by its degree balance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HikeClass {
    NotAHike,
    /// Product of simple cycles; includes the trivial hike `1`.
    Closed,
    /// Simple walk from `source` to `target` times simple cycles.
    Open {
        source: VertexId,
        target: VertexId,
    },
}

/// A balanced multiset decomposes into simple cycles, hence is a closed hike.
/// Imbalance `+1` at `v_i` and `-1` at `v_j` (and zero elsewhere) means that
/// adding `w[j,i]` balances it, which is exactly an open hike from `v_i` to
/// `v_j`. Anything else is not a hike.
pub fn classify(m: &EdgeMultiset) -> HikeClass {
    let (mut source, mut target) = (None, None);
    for (v, &b) in m.balance().iter().enumerate() {
        match b {
            0 => {}
            1 if source.is_none() => source = Some(v),
            -1 if target.is_none() => target = Some(v),
            _ => return HikeClass::NotAHike,
        }
    }
    match (source, target) {
        (None, None) => HikeClass::Closed,
        (Some(source), Some(target)) => HikeClass::Open { source, target },
        _ => HikeClass::NotAHike,
    }
}

pub fn is_closed(m: &EdgeMultiset) -> bool {
    classify(m) == HikeClass::Closed
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HikeStats {
    /// `ℓ(h)`, the degree.
    pub length: usize,
    /// `n(h)`, weakly connected components of the edge-induced multigraph.
    pub components: usize,
    /// `V(h)`, sorted.
    pub vertices: Vec<VertexId>,
    pub self_avoiding: bool,
}

pub fn stats(m: &EdgeMultiset) -> Result<HikeStats, PosetError> {
    let class = classify(m);
    if class == HikeClass::NotAHike {
        return Err(PosetError::NotAHike(m.clone()));
    }
    let vertices = m.vertices();
    let length = m.degree();
    let self_avoiding = match class {
        HikeClass::Open { .. } => vertices.len() == length + 1,
        _ => vertices.len() == length,
    };
    Ok(HikeStats {
        length,
        components: component_count(m, &vertices),
        vertices,
        self_avoiding,
    })
}

fn component_count(m: &EdgeMultiset, vertices: &[VertexId]) -> usize {
    let index = |v: VertexId| vertices.binary_search(&v).expect("vertex of the multiset");
    let mut parent: Vec<usize> = (0..vertices.len()).collect();
    fn root(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut components = vertices.len();
    for e in m.edges() {
        let (a, b) = (root(&mut parent, index(e.tail)), root(&mut parent, index(e.head)));
        if a != b {
            parent[a] = b;
            components -= 1;
        }
    }
    components
}

fn sign(exponent: usize) -> i64 {
    if exponent.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn require_closed(c: &EdgeMultiset) -> Result<(), PosetError> {
    match classify(c) {
        HikeClass::Closed => Ok(()),
        HikeClass::NotAHike => Err(PosetError::NotAHike(c.clone())),
        HikeClass::Open { .. } => Err(PosetError::NotClosed(c.clone())),
    }
}

fn require_hike(h: &EdgeMultiset) -> Result<HikeClass, PosetError> {
    match classify(h) {
        HikeClass::NotAHike => Err(PosetError::NotAHike(h.clone())),
        class => Ok(class),
    }
}

/// Identity of the Dirichlet convolution: `δ(1) = 1`, zero elsewhere.
pub fn delta(c: &EdgeMultiset) -> Result<i64, PosetError> {
    require_closed(c)?;
    Ok(if c.is_empty() { 1 } else { 0 })
}

/// `μ(c) = (-1)^{n(c)}` for self-avoiding closed `c` (so `μ(1) = 1`), else 0.
pub fn mu(c: &EdgeMultiset) -> Result<i64, PosetError> {
    require_closed(c)?;
    let s = stats(c)?;
    Ok(if s.self_avoiding { sign(s.components) } else { 0 })
}

/// The extension of `μ` to hikes with end-vertices, `μ_ij(h) = -μ(h w[j,i])`:
///
/// * `i != j`: `(-1)^{n(h)+1}` when `h` is a self-avoiding hike from `v_i` to `v_j`;
/// * `i == j`: `(-1)^{n(h)}` when `h` is closed, self-avoiding and misses `v_i`;
/// * zero otherwise.
pub fn mu_ij(h: &EdgeMultiset, i: VertexId, j: VertexId) -> Result<i64, PosetError> {
    let class = require_hike(h)?;
    let s = stats(h)?;
    if !s.self_avoiding {
        return Ok(0);
    }
    Ok(match class {
        HikeClass::Open { source, target } if i != j && (source, target) == (i, j) => sign(s.components + 1),
        HikeClass::Closed if i == j && s.vertices.binary_search(&i).is_err() => sign(s.components),
        _ => 0,
    })
}

fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

fn multinomial(parts: &[u32]) -> BigUint {
    let total: u32 = parts.iter().sum();
    parts.iter().fold(factorial(total), |acc, &p| acc / factorial(p))
}

/// `β(c) = Π_i τ_i(c)! / (τ_i1(c)! ⋯ τ_iN(c)!)`: for each vertex, the number of
/// orderings of its outgoing edges counted with multiplicity.
pub fn beta_closed_form(c: &EdgeMultiset) -> Result<BigUint, PosetError> {
    require_closed(c)?;
    let mut by_tail: BTreeMap<VertexId, Vec<u32>> = BTreeMap::new();
    for (e, m) in c {
        by_tail.entry(e.tail).or_default().push(m);
    }
    Ok(by_tail
        .values()
        .fold(BigUint::one(), |acc, parts| acc * multinomial(parts)))
}

/// `β` as the Dirichlet inverse of `μ`: `β(1) = 1` and
/// `β(c) = -Σ_{d | c, d ≠ 1} μ(d) β(c/d)`.
pub fn beta_by_inversion(c: &EdgeMultiset) -> Result<BigInt, PosetError> {
    beta_by_inversion_with(c, &mu)
}

/// [`beta_by_inversion`] against an arbitrary `μ`.
pub fn beta_by_inversion_with(
    c: &EdgeMultiset,
    mu: &dyn Fn(&EdgeMultiset) -> Result<i64, PosetError>,
) -> Result<BigInt, PosetError> {
    require_closed(c)?;
    let mut memo = BTreeMap::new();
    inverse_of(c, mu, &mut memo)
}

pub(crate) fn inverse_of(
    c: &EdgeMultiset,
    mu: &dyn Fn(&EdgeMultiset) -> Result<i64, PosetError>,
    memo: &mut BTreeMap<EdgeMultiset, BigInt>,
) -> Result<BigInt, PosetError> {
    if c.is_empty() {
        return Ok(BigInt::one());
    }
    if let Some(v) = memo.get(c) {
        return Ok(v.clone());
    }
    let mut acc = BigInt::zero();
    for d in closed_divisors_unchecked(c) {
        if d.is_empty() {
            continue;
        }
        let m = mu(&d)?;
        if m == 0 {
            continue;
        }
        let quotient = c.divide(&d).expect("divisor");
        acc -= BigInt::from(m) * inverse_of(&quotient, mu, memo)?;
    }
    memo.insert(c.clone(), acc.clone());
    Ok(acc)
}

/// Closed sub-multisets `d` of `h`, including `1` and (for closed `h`) `h`.
/// The quotient `h/d` has the same class and end-vertices as `h`.
pub fn closed_divisors(h: &EdgeMultiset) -> Result<Vec<EdgeMultiset>, PosetError> {
    require_hike(h)?;
    Ok(closed_divisors_unchecked(h))
}

/// Walks the sub-multiplicity vectors of `h` while tracking the degree
/// balance, materializing only the balanced ones.
pub(crate) fn closed_divisors_unchecked(h: &EdgeMultiset) -> Vec<EdgeMultiset> {
    struct Search<'a> {
        items: &'a [(Edge, u32)],
        counts: Vec<u32>,
        balance: Vec<i64>,
        unbalanced: usize,
        out: Vec<EdgeMultiset>,
    }
    impl Search<'_> {
        fn shift(&mut self, v: VertexId, by: i64) {
            let before = self.balance[v] != 0;
            self.balance[v] += by;
            let after = self.balance[v] != 0;
            match (before, after) {
                (false, true) => self.unbalanced += 1,
                (true, false) => self.unbalanced -= 1,
                _ => {}
            }
        }

        fn go(&mut self, idx: usize) {
            if idx == self.items.len() {
                if self.unbalanced == 0 {
                    let counts = self.items.iter().zip(&self.counts).map(|(&(e, _), &c)| (e, c));
                    self.out.push(EdgeMultiset::from_counts(counts));
                }
                return;
            }
            let (edge, max) = self.items[idx];
            for c in 0..=max {
                if c > 0 {
                    self.shift(edge.tail, 1);
                    self.shift(edge.head, -1);
                }
                self.counts[idx] = c;
                self.go(idx + 1);
            }
            for _ in 0..max {
                self.shift(edge.tail, -1);
                self.shift(edge.head, 1);
            }
            self.counts[idx] = 0;
        }
    }
    let items: Vec<(Edge, u32)> = h.iter().collect();
    let mut search = Search {
        items: &items,
        counts: alloc::vec![0; items.len()],
        balance: alloc::vec![0; h.max_vertex() + 1],
        unbalanced: 0,
        out: Vec::new(),
    };
    search.go(0);
    let mut out = search.out;
    out.sort_by_cached_key(|d| (d.degree(), alloc::string::ToString::to_string(d)));
    out
}

/// Self-avoiding closed divisors other than `1`: the only divisors on which
/// `μ` is non-zero.
pub fn self_avoiding_closed_divisors(h: &EdgeMultiset) -> Vec<EdgeMultiset> {
    h.simple_submultisets()
        .into_iter()
        .filter(|d| !d.is_empty() && is_closed(d) && d.vertices().len() == d.degree())
        .collect()
}

/// A function on hikes with values in the integers, composable through
/// [`dirichlet_convolve`]. Partial functions return an error off their domain.
pub trait IncidenceFunction {
    fn eval(&self, h: &EdgeMultiset) -> Result<BigInt, PosetError>;
}

impl<F> IncidenceFunction for F
where
    F: Fn(&EdgeMultiset) -> Result<BigInt, PosetError>,
{
    fn eval(&self, h: &EdgeMultiset) -> Result<BigInt, PosetError> {
        self(h)
    }
}

/// `δ` on closed hikes.
#[derive(Debug, Clone, Copy)]
pub struct Delta;
/// `μ` on closed hikes.
#[derive(Debug, Clone, Copy)]
pub struct Mu;
/// `β` on closed hikes (closed form).
#[derive(Debug, Clone, Copy)]
pub struct Beta;
/// `μ_ij` on all hikes.
#[derive(Debug, Clone, Copy)]
pub struct MuIJ(pub VertexId, pub VertexId);
/// `f_ij` on all edge multisets.
#[derive(Debug, Clone, Copy)]
pub struct Walks(pub VertexId, pub VertexId);

impl IncidenceFunction for Delta {
    fn eval(&self, h: &EdgeMultiset) -> Result<BigInt, PosetError> {
        delta(h).map(BigInt::from)
    }
}

impl IncidenceFunction for Mu {
    fn eval(&self, h: &EdgeMultiset) -> Result<BigInt, PosetError> {
        mu(h).map(BigInt::from)
    }
}

impl IncidenceFunction for Beta {
    fn eval(&self, h: &EdgeMultiset) -> Result<BigInt, PosetError> {
        beta_closed_form(h).map(BigInt::from)
    }
}

impl IncidenceFunction for MuIJ {
    fn eval(&self, h: &EdgeMultiset) -> Result<BigInt, PosetError> {
        mu_ij(h, self.0, self.1).map(BigInt::from)
    }
}

impl IncidenceFunction for Walks {
    fn eval(&self, h: &EdgeMultiset) -> Result<BigInt, PosetError> {
        Ok(count_representations(h, self.0, self.1).into())
    }
}

/// Non-zero terms `F(d)·G(h/d)` of the convolution, keyed by divisor `d`.
pub fn dirichlet_terms<F, G>(f: &F, g: &G, h: &EdgeMultiset) -> Result<Vec<(EdgeMultiset, BigInt)>, PosetError>
where
    F: IncidenceFunction + ?Sized,
    G: IncidenceFunction + ?Sized,
{
    require_hike(h)?;
    let mut terms = Vec::new();
    for d in closed_divisors_unchecked(h) {
        let quotient = h.divide(&d).expect("divisor");
        let value = f.eval(&d)? * g.eval(&quotient)?;
        if !value.is_zero() {
            terms.push((d, value));
        }
    }
    Ok(terms)
}

/// `(F ∗ G)(h) = Σ_{d | h, d closed} F(d) G(h/d)`. `F` is evaluated on closed
/// hikes only; for open `h` the arguments do not commute.
pub fn dirichlet_convolve<F, G>(f: &F, g: &G, h: &EdgeMultiset) -> Result<BigInt, PosetError>
where
    F: IncidenceFunction + ?Sized,
    G: IncidenceFunction + ?Sized,
{
    Ok(dirichlet_terms(f, g, h)?.into_iter().map(|(_, v)| v).sum())
}

/// `f_ij(h)`: the number of ways to traverse all of `h` as a contiguous edge
/// sequence from `v_i` to `v_j`, copies of the same edge being
/// indistinguishable. Zero when `h` is not a walk from `v_i` to `v_j`;
/// `f_ii(1) = 1`.
pub fn count_representations(h: &EdgeMultiset, i: VertexId, j: VertexId) -> BigUint {
    if h.is_empty() {
        return if i == j { BigUint::one() } else { BigUint::zero() };
    }
    let compatible = match classify(h) {
        HikeClass::Open { source, target } => (source, target) == (i, j),
        HikeClass::Closed => i == j && h.touches(i),
        HikeClass::NotAHike => false,
    };
    if !compatible {
        return BigUint::zero();
    }
    let edges: Vec<Edge> = h.edges().collect();
    let mut remaining: Vec<u32> = h.iter().map(|(_, m)| m).collect();
    let mut memo = BTreeMap::new();
    trails(&edges, &mut remaining, h.degree(), i, j, &mut memo)
}

fn trails(
    edges: &[Edge],
    remaining: &mut Vec<u32>,
    left: usize,
    at: VertexId,
    end: VertexId,
    memo: &mut BTreeMap<(VertexId, Vec<u32>), BigUint>,
) -> BigUint {
    if left == 0 {
        return if at == end { BigUint::one() } else { BigUint::zero() };
    }
    let key = (at, remaining.clone());
    if let Some(v) = memo.get(&key) {
        return v.clone();
    }
    let mut total = BigUint::zero();
    for idx in 0..edges.len() {
        if edges[idx].tail != at || remaining[idx] == 0 {
            continue;
        }
        remaining[idx] -= 1;
        total += trails(edges, remaining, left - 1, edges[idx].head, end, memo);
        remaining[idx] += 1;
    }
    memo.insert(key, total.clone());
    total
}

/// Membership in `S_ij`: for `i != j` a self-avoiding hike from `v_i` to
/// `v_j`; for `i == j` a non-empty self-avoiding closed hike through `v_i`.
pub fn is_self_avoiding_between(p: &EdgeMultiset, i: VertexId, j: VertexId) -> bool {
    if p.is_empty() {
        return false;
    }
    let endpoints_ok = match classify(p) {
        HikeClass::Open { source, target } => (source, target) == (i, j),
        HikeClass::Closed => i == j && p.touches(i),
        HikeClass::NotAHike => false,
    };
    endpoints_ok && stats(p).map(|s| s.self_avoiding).unwrap_or(false)
}

/// `n'(s) = n(s) + 1`.
fn shifted_components(s: &EdgeMultiset) -> usize {
    stats(s).map(|st| st.components + 1).unwrap_or(0)
}

/// Signed count of ordered factorizations of a closed hike into non-empty
/// self-avoiding closed hikes, `Σ_{s_1⋯s_p = c} (-1)^{n'(s_1)+⋯+n'(s_p)}`,
/// with value 1 on the trivial hike.
pub(crate) struct ClosedDecompositions {
    memo: BTreeMap<EdgeMultiset, BigInt>,
}

impl ClosedDecompositions {
    pub(crate) fn new() -> Self {
        ClosedDecompositions { memo: BTreeMap::new() }
    }

    pub(crate) fn signed_count(&mut self, c: &EdgeMultiset) -> BigInt {
        if c.is_empty() {
            return BigInt::one();
        }
        if let Some(v) = self.memo.get(c) {
            return v.clone();
        }
        let mut acc = BigInt::zero();
        for first in self_avoiding_closed_divisors(c) {
            let rest = c.divide(&first).expect("divisor");
            let tail = self.signed_count(&rest);
            if !tail.is_zero() {
                acc += BigInt::from(sign(shifted_components(&first))) * tail;
            }
        }
        self.memo.insert(c.clone(), acc.clone());
        acc
    }
}

/// `β(c)` from the decompositions of `c` into self-avoiding closed factors,
/// `Σ_{s_1⋯s_p = c} (-1)^{n'(s_1)+⋯+n'(s_p)}` over ordered tuples.
pub fn beta_by_decompositions(c: &EdgeMultiset) -> Result<BigInt, PosetError> {
    require_closed(c)?;
    Ok(ClosedDecompositions::new().signed_count(c))
}

/// Contributions to the self-avoiding decomposition sum of `h`, grouped by
/// the final factor `p ∈ S_ij`: each entry is
/// `(p, (-1)^{n'(p)} Σ_{s_1⋯s_k = h/p} (-1)^{n'(s_1)+⋯+n'(s_k)})`.
pub fn self_avoiding_decomposition_terms(
    h: &EdgeMultiset,
    i: VertexId,
    j: VertexId,
) -> Result<Vec<(EdgeMultiset, BigInt)>, PosetError> {
    require_hike(h)?;
    if h.is_empty() {
        return Err(PosetError::EmptyHike);
    }
    let mut decompositions = ClosedDecompositions::new();
    Ok(decomposition_terms_with(h, i, j, &mut decompositions))
}

pub(crate) fn decomposition_terms_with(
    h: &EdgeMultiset,
    i: VertexId,
    j: VertexId,
    decompositions: &mut ClosedDecompositions,
) -> Vec<(EdgeMultiset, BigInt)> {
    let mut terms = Vec::new();
    for p in h.simple_submultisets() {
        if !is_self_avoiding_between(&p, i, j) {
            continue;
        }
        let rest = h.divide(&p).expect("sub-multiset");
        if !is_closed(&rest) {
            continue;
        }
        let value = BigInt::from(sign(shifted_components(&p))) * decompositions.signed_count(&rest);
        if !value.is_zero() {
            terms.push((p, value));
        }
    }
    terms
}

/// The decomposition sums of `h` for every pair `(i, j)` at once, keyed by
/// pair; absent pairs sum to zero. Each candidate final factor `p` is
/// classified once and credited to the pairs whose `S_ij` contains it.
pub(crate) fn decomposition_sums_all_pairs(
    h: &EdgeMultiset,
    decompositions: &mut ClosedDecompositions,
) -> BTreeMap<(VertexId, VertexId), BigInt> {
    let mut sums: BTreeMap<(VertexId, VertexId), BigInt> = BTreeMap::new();
    for p in h.simple_submultisets() {
        if p.is_empty() {
            continue;
        }
        let class = classify(&p);
        let Ok(s) = stats(&p) else { continue };
        if !s.self_avoiding {
            continue;
        }
        let rest = h.divide(&p).expect("sub-multiset");
        if !is_closed(&rest) {
            continue;
        }
        let value = BigInt::from(sign(s.components + 1)) * decompositions.signed_count(&rest);
        if value.is_zero() {
            continue;
        }
        match class {
            HikeClass::Open { source, target } => *sums.entry((source, target)).or_default() += &value,
            HikeClass::Closed => {
                for &v in &s.vertices {
                    *sums.entry((v, v)).or_default() += &value;
                }
            }
            HikeClass::NotAHike => {}
        }
    }
    sums
}

/// `Σ (-1)^{n'(s_1)+⋯+n'(s_k)+n'(p)}` over all self-avoiding decompositions
/// `s_1⋯s_k p = h` with `s_m` non-empty self-avoiding closed hikes and
/// `p ∈ S_ij`, ordered tuples counted separately. Equals `f_ij(h)`.
pub fn self_avoiding_decomposition_sum(h: &EdgeMultiset, i: VertexId, j: VertexId) -> Result<BigInt, PosetError> {
    Ok(self_avoiding_decomposition_terms(h, i, j)?
        .into_iter()
        .map(|(_, v)| v)
        .sum())
}
