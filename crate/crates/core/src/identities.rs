//! Exhaustive checks of the hike identities on one digraph, over every hike
//! (or every degree) up to a length bound.
//!
//! Each suite stops at its first mismatch and reports it with the offending
//! monomial, matrix entry and degree. The kernels `μ`, `β` and the composition
//! sign can be swapped for corrupted versions to confirm that the suites
//! actually detect errors.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::charpoly::{
    m_ell_from, m_tilde_ell_from, phi_by_composition_enumeration, phi_sequence_with_part_sign, psi_by_determinant,
    psi_by_trace_recursion, psi_sequence_by_cycles, CharpolyError,
};
use crate::graph::{enumerate_hikes, enumerate_self_avoiding_hikes, Digraph};
use crate::matrix::{identity_minus_adjacency, MatrixError, PolyMatrix};
use crate::multiset::{EdgeMultiset, VertexId};
use crate::poly::Polynomial;
use crate::poset::{
    beta_closed_form, closed_divisors_unchecked, count_representations, decomposition_sums_all_pairs, delta,
    inverse_of, is_closed, mu, mu_ij, stats, ClosedDecompositions, PosetError,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Identity {
    /// `μ_ij = μ ∗ f_ij` on every hike and pair.
    Theorem1,
    /// `β ∗ μ = δ`, `β` by inversion and by decompositions equal the closed
    /// form, and `f_ij = β ∗ μ_ij`.
    Theorem2,
    /// The self-avoiding decomposition sum equals `f_ij`.
    Theorem3,
    /// `Σ_{ℓ≤L} M^(ℓ) = adj(I - W)` up to degree `L`, and the entries of
    /// `M^(ℓ)` and `M̃^(ℓ)` equal their brute-force hike sums.
    Lemma1,
    /// `W^ℓ = Σ φ_k M^(ℓ-k)`, and `φ_k` from compositions equals `Σ β(c) c`.
    Corollary1,
    /// `Σ_{k≤N} ψ_k W^{N-k} = 0`, and `M^(ℓ) = 0` for `ℓ ≥ N`.
    CayleyHamilton,
    /// `ψ_k` from cycle packings, the determinant and the trace recursion agree.
    TraceRecursion,
    /// `M^(ℓ) W = W M^(ℓ)`.
    Commutation,
}

impl Identity {
    pub const ALL: [Identity; 8] = [
        Identity::Theorem1,
        Identity::Theorem2,
        Identity::Theorem3,
        Identity::Lemma1,
        Identity::Corollary1,
        Identity::CayleyHamilton,
        Identity::TraceRecursion,
        Identity::Commutation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::Theorem1 => "theorem1",
            Identity::Theorem2 => "theorem2",
            Identity::Theorem3 => "theorem3",
            Identity::Lemma1 => "lemma1",
            Identity::Corollary1 => "corollary1",
            Identity::CayleyHamilton => "cayley-hamilton",
            Identity::TraceRecursion => "trace-recursion",
            Identity::Commutation => "commutation",
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown identity `{0}`")]
pub struct UnknownIdentity(pub String);

impl FromStr for Identity {
    type Err = UnknownIdentity;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Identity::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| UnknownIdentity(s.into()))
    }
}

pub type MuFn = fn(&EdgeMultiset) -> Result<i64, PosetError>;
pub type BetaFn = fn(&EdgeMultiset) -> Result<BigUint, PosetError>;

/// The primitive functions the suites are built on.
#[derive(Debug, Clone, Copy)]
pub struct Kernels {
    pub mu: MuFn,
    pub beta: BetaFn,
    /// Sign attached to every part in the composition formula for `φ_k`.
    pub composition_sign: i64,
}

impl Default for Kernels {
    fn default() -> Self {
        Kernels {
            mu,
            beta: beta_closed_form,
            composition_sign: -1,
        }
    }
}

/// Deliberate kernel faults for negative controls.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Corruption {
    /// `μ(c) = (-1)^{n(c)+1}` on non-trivial self-avoiding `c`.
    MuSign,
    /// `β(c) = Π_i τ_i(c)!`, dropping the per-edge factorials.
    BetaMultinomial,
    /// `+1` instead of `-1` per composition part.
    CompositionSign,
}

impl Corruption {
    pub const ALL: [Corruption; 3] = [
        Corruption::MuSign,
        Corruption::BetaMultinomial,
        Corruption::CompositionSign,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Corruption::MuSign => "mu",
            Corruption::BetaMultinomial => "beta",
            Corruption::CompositionSign => "phi-sign",
        }
    }

    pub fn kernels(self) -> Kernels {
        let mut k = Kernels::default();
        match self {
            Corruption::MuSign => k.mu = mu_with_flipped_sign,
            Corruption::BetaMultinomial => k.beta = beta_without_edge_factorials,
            Corruption::CompositionSign => k.composition_sign = 1,
        }
        k
    }
}

impl FromStr for Corruption {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Corruption::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| alloc::format!("unknown corruption `{s}`"))
    }
}

fn mu_with_flipped_sign(c: &EdgeMultiset) -> Result<i64, PosetError> {
    let m = mu(c)?;
    Ok(if c.is_empty() { m } else { -m })
}

fn beta_without_edge_factorials(c: &EdgeMultiset) -> Result<BigUint, PosetError> {
    beta_closed_form(c)?;
    let mut out_degree: BTreeMap<VertexId, u32> = BTreeMap::new();
    for (e, m) in c {
        *out_degree.entry(e.tail).or_default() += m;
    }
    Ok(out_degree
        .values()
        .map(|&t| (1..=t).fold(BigUint::one(), |acc, k| acc * k))
        .product())
}

#[derive(Debug, Clone, Copy)]
pub struct SuiteConfig {
    /// Largest hike length (and matrix degree) checked.
    pub max_len: usize,
    pub kernels: Kernels,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            max_len: 6,
            kernels: Kernels::default(),
        }
    }
}

/// A failed check: at `monomial` (of total degree `degree`), in matrix entry
/// or vertex pair `entry` when there is one, `expected` and `actual` differ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub check: &'static str,
    pub degree: usize,
    pub entry: Option<(VertexId, VertexId)>,
    pub monomial: EdgeMultiset,
    pub expected: BigInt,
    pub actual: BigInt,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at degree {}", self.check, self.degree)?;
        if let Some((i, j)) = self.entry {
            write!(f, ", entry ({i},{j})")?;
        }
        write!(
            f,
            ", monomial {}: expected {}, got {}",
            self.monomial, self.expected, self.actual
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteOutcome {
    pub identity: Identity,
    /// Number of scalar, polynomial or matrix equalities evaluated.
    pub instances: u64,
    pub counterexample: Option<Mismatch>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IdentityError {
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Charpoly(#[from] CharpolyError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

struct Checker {
    instances: u64,
    counterexample: Option<Mismatch>,
}

impl Checker {
    fn new() -> Self {
        Checker {
            instances: 0,
            counterexample: None,
        }
    }

    fn failed(&self) -> bool {
        self.counterexample.is_some()
    }

    fn scalar(
        &mut self,
        check: &'static str,
        monomial: &EdgeMultiset,
        entry: Option<(VertexId, VertexId)>,
        expected: &BigInt,
        actual: &BigInt,
    ) {
        self.instances += 1;
        if expected != actual && !self.failed() {
            self.counterexample = Some(Mismatch {
                check,
                degree: monomial.degree(),
                entry,
                monomial: monomial.clone(),
                expected: expected.clone(),
                actual: actual.clone(),
            });
        }
    }

    fn poly(
        &mut self,
        check: &'static str,
        degree: usize,
        entry: Option<(VertexId, VertexId)>,
        expected: &Polynomial,
        actual: &Polynomial,
    ) {
        self.instances += 1;
        if self.failed() {
            return;
        }
        if let Some((monomial, exp, act)) = expected.first_difference(actual) {
            self.counterexample = Some(Mismatch {
                check,
                degree,
                entry,
                monomial,
                expected: exp,
                actual: act,
            });
        }
    }

    fn matrix(&mut self, check: &'static str, degree: usize, expected: &PolyMatrix, actual: &PolyMatrix) {
        self.instances += (expected.dim() * expected.dim()) as u64;
        if self.failed() {
            return;
        }
        if let Some(d) = expected.first_difference(actual) {
            self.counterexample = Some(Mismatch {
                check,
                degree,
                entry: Some((d.row + 1, d.col + 1)),
                monomial: d.monomial,
                expected: d.lhs,
                actual: d.rhs,
            });
        }
    }

    fn finish(self, identity: Identity) -> SuiteOutcome {
        SuiteOutcome {
            identity,
            instances: self.instances,
            counterexample: self.counterexample,
        }
    }
}

/// Runs one identity suite on `g`.
pub fn run_identity(identity: Identity, g: &Digraph, config: &SuiteConfig) -> Result<SuiteOutcome, IdentityError> {
    let mut checker = Checker::new();
    match identity {
        Identity::Theorem1 => theorem1(g, config, &mut checker)?,
        Identity::Theorem2 => theorem2(g, config, &mut checker)?,
        Identity::Theorem3 => theorem3(g, config, &mut checker),
        Identity::Lemma1 => lemma1(g, config, &mut checker)?,
        Identity::Corollary1 => corollary1(g, config, &mut checker),
        Identity::CayleyHamilton => cayley_hamilton(g, config, &mut checker),
        Identity::TraceRecursion => trace_recursion(g, &mut checker)?,
        Identity::Commutation => commutation(g, &mut checker),
    }
    Ok(checker.finish(identity))
}

/// Runs every suite in [`Identity::ALL`] order.
pub fn run_all(g: &Digraph, config: &SuiteConfig) -> Result<Vec<SuiteOutcome>, IdentityError> {
    Identity::ALL
        .into_iter()
        .map(|id| run_identity(id, g, config))
        .collect()
}

fn hikes_up_to(g: &Digraph, max_len: usize) -> Vec<EdgeMultiset> {
    (0..=max_len).flat_map(|ell| enumerate_hikes(g, ell, None)).collect()
}

fn pairs(n: usize) -> impl Iterator<Item = (VertexId, VertexId)> {
    (1..=n).flat_map(move |i| (1..=n).map(move |j| (i, j)))
}

/// Values of a pair-indexed function on one hike, row-major over `(i, j)`.
struct PairTable {
    n: usize,
    cache: BTreeMap<EdgeMultiset, Vec<BigInt>>,
}

impl PairTable {
    fn new(n: usize) -> Self {
        PairTable {
            n,
            cache: BTreeMap::new(),
        }
    }

    fn get<F>(&mut self, h: &EdgeMultiset, mut f: F) -> Result<&[BigInt], PosetError>
    where
        F: FnMut(VertexId, VertexId) -> Result<BigInt, PosetError>,
    {
        if !self.cache.contains_key(h) {
            let values = pairs(self.n).map(|(i, j)| f(i, j)).collect::<Result<Vec<_>, _>>()?;
            self.cache.insert(h.clone(), values);
        }
        Ok(&self.cache[h])
    }
}

fn walk_table<'a>(table: &'a mut PairTable, h: &EdgeMultiset) -> &'a [BigInt] {
    table
        .get(h, |i, j| Ok(count_representations(h, i, j).into()))
        .expect("walk counts are total")
}

fn closed_divisors_with_quotients(h: &EdgeMultiset) -> Vec<(EdgeMultiset, EdgeMultiset)> {
    closed_divisors_unchecked(h)
        .into_iter()
        .map(|d| {
            let q = h.divide(&d).expect("sub-multiset");
            (d, q)
        })
        .collect()
}

fn theorem1(g: &Digraph, config: &SuiteConfig, checker: &mut Checker) -> Result<(), IdentityError> {
    let n = g.n_vertices();
    let mut walks = PairTable::new(n);
    for h in hikes_up_to(g, config.max_len) {
        let mut convolution = alloc::vec![BigInt::zero(); n * n];
        for (d, q) in closed_divisors_with_quotients(&h) {
            let m = (config.kernels.mu)(&d)?;
            if m == 0 {
                continue;
            }
            let m = BigInt::from(m);
            for (acc, f) in convolution.iter_mut().zip(walk_table(&mut walks, &q)) {
                if !f.is_zero() {
                    *acc += &m * f;
                }
            }
        }
        for ((i, j), actual) in pairs(n).zip(&convolution) {
            let expected = BigInt::from(mu_ij(&h, i, j)?);
            checker.scalar("mu * f_ij = mu_ij", &h, Some((i, j)), &expected, actual);
        }
        if checker.failed() {
            break;
        }
    }
    Ok(())
}

fn theorem2(g: &Digraph, config: &SuiteConfig, checker: &mut Checker) -> Result<(), IdentityError> {
    let n = g.n_vertices();
    let kernels = config.kernels;
    let mu_kernel = |c: &EdgeMultiset| (kernels.mu)(c);
    let mut inverse_memo = BTreeMap::new();
    let mut decompositions = ClosedDecompositions::new();
    let mut walks = PairTable::new(n);
    let mut open_mu = PairTable::new(n);
    for h in hikes_up_to(g, config.max_len) {
        let divisors = closed_divisors_with_quotients(&h);
        if is_closed(&h) {
            let mut convolution = BigInt::zero();
            for (d, q) in &divisors {
                convolution += BigInt::from((kernels.beta)(d)?) * BigInt::from((kernels.mu)(q)?);
            }
            checker.scalar("beta * mu = delta", &h, None, &BigInt::from(delta(&h)?), &convolution);
            let beta = BigInt::from((kernels.beta)(&h)?);
            let inverted = inverse_of(&h, &mu_kernel, &mut inverse_memo)?;
            checker.scalar("beta by inversion = closed form", &h, None, &beta, &inverted);
            let decomposed = decompositions.signed_count(&h);
            checker.scalar("beta by decompositions = closed form", &h, None, &beta, &decomposed);
        }
        let mut convolution = alloc::vec![BigInt::zero(); n * n];
        for (d, q) in &divisors {
            let b = BigInt::from((kernels.beta)(d)?);
            let values = open_mu.get(q, |i, j| mu_ij(q, i, j).map(BigInt::from))?;
            for (acc, m) in convolution.iter_mut().zip(values) {
                if !m.is_zero() {
                    *acc += &b * m;
                }
            }
        }
        let expected = walk_table(&mut walks, &h);
        for (((i, j), actual), expected) in pairs(n).zip(&convolution).zip(expected) {
            checker.scalar("beta * mu_ij = f_ij", &h, Some((i, j)), expected, actual);
        }
        if checker.failed() {
            break;
        }
    }
    Ok(())
}

fn theorem3(g: &Digraph, config: &SuiteConfig, checker: &mut Checker) {
    let n = g.n_vertices();
    let mut decompositions = ClosedDecompositions::new();
    let mut walks = PairTable::new(n);
    for h in hikes_up_to(g, config.max_len) {
        if h.is_empty() {
            continue;
        }
        let sums = decomposition_sums_all_pairs(&h, &mut decompositions);
        let expected = walk_table(&mut walks, &h);
        for ((i, j), expected) in pairs(n).zip(expected) {
            let actual = sums.get(&(i, j)).cloned().unwrap_or_default();
            checker.scalar(
                "self-avoiding decomposition sum = f_ij",
                &h,
                Some((i, j)),
                expected,
                &actual,
            );
        }
        if checker.failed() {
            break;
        }
    }
}

fn sign_of_components(h: &EdgeMultiset) -> BigInt {
    let components = stats(h).expect("hike").components;
    if components.is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

fn lemma1(g: &Digraph, config: &SuiteConfig, checker: &mut Checker) -> Result<(), IdentityError> {
    let n = g.n_vertices();
    let max_len = config.max_len;
    let psi = psi_sequence_by_cycles(g);
    let powers = PolyMatrix::adjacency(g).powers(max_len);

    let adjugate = identity_minus_adjacency(g).adjugate()?.truncate(max_len);
    let mut partial = PolyMatrix::zero(n);
    for ell in 0..=max_len {
        partial = &partial + &m_ell_from(&psi, &powers, ell);
    }
    checker.matrix("sum of M^(l) = adj(I - W)", max_len, &adjugate, &partial);

    for ell in 0..=max_len {
        let m = m_ell_from(&psi, &powers, ell);
        let mut brute = PolyMatrix::zero(n);
        for h in enumerate_hikes(g, ell, None) {
            let poly = Polynomial::monomial(h.clone());
            for (i, j) in pairs(n) {
                let coeff = mu_ij(&h, i, j)?;
                if coeff != 0 {
                    let entry = brute.get(i - 1, j - 1) + &poly.scale(&BigInt::from(coeff));
                    brute.set(i - 1, j - 1, entry);
                }
            }
        }
        checker.matrix("M^(l) = sum of mu_ij(h) h", ell, &brute, &m);
        if checker.failed() {
            return Ok(());
        }
    }

    for ell in 1..=max_len {
        let tilde = m_tilde_ell_from(&psi, &powers, ell);
        let brute = PolyMatrix::from_fn(n, |r, c| {
            Polynomial::from_terms(
                enumerate_self_avoiding_hikes(g, ell, r + 1, c + 1)
                    .into_iter()
                    .map(|h| {
                        let s = sign_of_components(&h);
                        (h, s)
                    }),
            )
        });
        checker.matrix("M~(l) = signed self-avoiding hike sum", ell, &brute, &tilde);
        let scaled = psi.get(ell).scale(&BigInt::from(ell));
        checker.poly("tr M~(l) = l psi_l", ell, None, &scaled, &tilde.trace());
        if checker.failed() {
            break;
        }
    }
    Ok(())
}

fn corollary1(g: &Digraph, config: &SuiteConfig, checker: &mut Checker) {
    let n = g.n_vertices();
    let max_len = config.max_len;
    let psi = psi_sequence_by_cycles(g);
    let powers = PolyMatrix::adjacency(g).powers(max_len);
    let phi = phi_sequence_with_part_sign(&psi, max_len, config.kernels.composition_sign);

    for k in 0..=max_len {
        let by_beta = Polynomial::from_terms(enumerate_hikes(g, k, None).into_iter().filter(is_closed).map(|c| {
            let b = BigInt::from((config.kernels.beta)(&c).expect("closed hike"));
            (c, b)
        }));
        checker.poly(
            "phi_k by compositions = sum of beta(c) c",
            k,
            None,
            &by_beta,
            phi.get(k),
        );
        let enumerated = phi_by_composition_enumeration(&psi, k);
        checker.poly(
            "phi_k recurrence = composition enumeration",
            k,
            None,
            &enumerated,
            phi.get(k),
        );
    }

    let m: Vec<PolyMatrix> = (0..=max_len).map(|ell| m_ell_from(&psi, &powers, ell)).collect();
    for ell in 0..=max_len {
        let mut expansion = PolyMatrix::zero(n);
        for k in 0..=ell {
            if !phi.get(k).is_zero() {
                expansion = &expansion + &m[ell - k].scale(phi.get(k));
            }
        }
        checker.matrix("W^l = sum of phi_k M^(l-k)", ell, &powers[ell], &expansion);
        if checker.failed() {
            break;
        }
    }
}

fn cayley_hamilton(g: &Digraph, config: &SuiteConfig, checker: &mut Checker) {
    let n = g.n_vertices();
    let top = n.max(config.max_len);
    let psi = psi_sequence_by_cycles(g);
    let powers = PolyMatrix::adjacency(g).powers(top);
    let zero = PolyMatrix::zero(n);
    for ell in n..=top {
        checker.matrix("sum of psi_k W^(l-k) = 0", ell, &zero, &m_ell_from(&psi, &powers, ell));
    }
}

fn trace_recursion(g: &Digraph, checker: &mut Checker) -> Result<(), IdentityError> {
    let cycles = psi_sequence_by_cycles(g);
    let determinant = psi_by_determinant(g)?;
    let traces = psi_by_trace_recursion(g)?;
    for k in 0..=g.n_vertices() {
        checker.poly(
            "psi_k by cycles = by determinant",
            k,
            None,
            cycles.get(k),
            determinant.get(k),
        );
        checker.poly(
            "psi_k by cycles = by trace recursion",
            k,
            None,
            cycles.get(k),
            traces.get(k),
        );
    }
    Ok(())
}

fn commutation(g: &Digraph, checker: &mut Checker) {
    let n = g.n_vertices();
    let psi = psi_sequence_by_cycles(g);
    let powers = PolyMatrix::adjacency(g).powers(n + 1);
    let w = &powers[1];
    for ell in 0..=n {
        let m = m_ell_from(&psi, &powers, ell);
        checker.matrix("M^(l) W = W M^(l)", ell + 1, &(w * &m), &(&m * w));
    }
}
