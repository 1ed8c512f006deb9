//! Coefficients `ψ_k` of `det(I - W)` by three independent routes, their
//! series inverse `φ_k`, and the matrices `M^(ℓ)` and `M̃^(ℓ)`.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::One;

use crate::graph::{enumerate_closed_hikes, simple_cycles, Digraph};
use crate::matrix::{identity_minus_adjacency, EntryDifference, MatrixError, PolyMatrix, MAX_SYMBOLIC_DIMENSION};
use crate::poly::{Monomial, Polynomial};
use crate::poset::beta_closed_form;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CharpolyError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("trace recursion: a degree-{degree} coefficient is not divisible by {degree}")]
    InexactDivision { degree: usize },
}

/// `ψ_0, ..., ψ_N`; `ψ_k = 0` beyond the stored range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsiSequence {
    psi: Vec<Polynomial>,
    zero: Polynomial,
}

impl PsiSequence {
    pub fn new(psi: Vec<Polynomial>) -> Self {
        PsiSequence {
            psi,
            zero: Polynomial::zero(),
        }
    }

    pub fn get(&self, k: usize) -> &Polynomial {
        self.psi.get(k).unwrap_or(&self.zero)
    }

    /// Index of the last stored coefficient.
    pub fn max_degree(&self) -> usize {
        self.psi.len().saturating_sub(1)
    }

    pub fn as_slice(&self) -> &[Polynomial] {
        &self.psi
    }

    /// `Σ_k ψ_k = det(I - W)`.
    pub fn sum(&self) -> Polynomial {
        self.psi.iter().fold(Polynomial::zero(), |acc, p| acc + p.clone())
    }
}

/// `φ_0, ..., φ_K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiSequence {
    phi: Vec<Polynomial>,
    zero: Polynomial,
}

impl PhiSequence {
    pub fn new(phi: Vec<Polynomial>) -> Self {
        PhiSequence {
            phi,
            zero: Polynomial::zero(),
        }
    }

    pub fn get(&self, k: usize) -> &Polynomial {
        self.phi.get(k).unwrap_or(&self.zero)
    }

    pub fn max_degree(&self) -> usize {
        self.phi.len().saturating_sub(1)
    }

    pub fn as_slice(&self) -> &[Polynomial] {
        &self.phi
    }
}

/// Sets of pairwise vertex-disjoint simple cycles, by total length up to
/// `max_len`, each contributing `(-1)^{#cycles}` times its product.
fn cycle_packings(g: &Digraph, max_len: usize) -> Vec<Polynomial> {
    let cycles: Vec<(u64, Monomial)> = simple_cycles(g)
        .into_iter()
        .map(|c| (c.vertices().iter().fold(0u64, |mask, &v| mask | 1 << v), c))
        .filter(|(_, c)| c.degree() <= max_len)
        .collect();
    let mut out = alloc::vec![Polynomial::zero(); max_len + 1];
    out[0] = Polynomial::one();

    fn extend(
        cycles: &[(u64, Monomial)],
        from: usize,
        used: u64,
        product: &Monomial,
        negative: bool,
        max_len: usize,
        out: &mut [Polynomial],
    ) {
        for idx in from..cycles.len() {
            let (mask, cycle) = &cycles[idx];
            if used & mask != 0 || product.degree() + cycle.degree() > max_len {
                continue;
            }
            let next = product.mul(cycle);
            let coeff = if negative { BigInt::one() } else { -BigInt::one() };
            out[next.degree()].add_term(next.clone(), coeff);
            extend(cycles, idx + 1, used | mask, &next, !negative, max_len, out);
        }
    }
    extend(&cycles, 0, 0, &Monomial::one(), false, max_len, &mut out);
    out
}

/// `ψ_k` as the signed sum over sets of vertex-disjoint simple cycles of
/// total length `k`.
pub fn psi_by_cycles(g: &Digraph, k: usize) -> Polynomial {
    if k > g.n_vertices() {
        return Polynomial::zero();
    }
    cycle_packings(g, k).swap_remove(k)
}

/// `ψ_0, ..., ψ_N` from cycle packings.
pub fn psi_sequence_by_cycles(g: &Digraph) -> PsiSequence {
    PsiSequence::new(cycle_packings(g, g.n_vertices()))
}

/// `ψ_k` as the degree-`k` part of `det(I - W)`.
pub fn psi_by_determinant(g: &Digraph) -> Result<PsiSequence, CharpolyError> {
    let det = identity_minus_adjacency(g).determinant()?;
    Ok(PsiSequence::new(
        (0..=g.n_vertices()).map(|k| det.homogeneous_part(k)).collect(),
    ))
}

/// `ψ_ℓ = -(1/ℓ) Σ_{k<ℓ} ψ_k tr(W^{ℓ-k})`.
pub fn psi_by_trace_recursion(g: &Digraph) -> Result<PsiSequence, CharpolyError> {
    let n = g.n_vertices();
    if n > MAX_SYMBOLIC_DIMENSION {
        return Err(MatrixError::DimensionTooLarge {
            n,
            limit: MAX_SYMBOLIC_DIMENSION,
        }
        .into());
    }
    let traces: Vec<Polynomial> = PolyMatrix::adjacency(g)
        .powers(n)
        .iter()
        .map(PolyMatrix::trace)
        .collect();
    let mut psi = alloc::vec![Polynomial::one()];
    for ell in 1..=n {
        let mut acc = Polynomial::zero();
        for (k, p) in psi.iter().enumerate() {
            acc += &(p * &traces[ell - k]);
        }
        let next = acc
            .div_exact(&BigInt::from(ell))
            .ok_or(CharpolyError::InexactDivision { degree: ell })?;
        psi.push(-next);
    }
    Ok(PsiSequence::new(psi))
}

/// `φ_k = Σ_{k_1+…+k_p=k} (-1)^p ψ_{k_1}⋯ψ_{k_p}` over ordered compositions.
pub fn phi_by_compositions(psi: &PsiSequence, k: usize) -> Polynomial {
    phi_sequence_by_compositions(psi, k).phi.swap_remove(k)
}

/// `φ_0, ..., φ_max` by the recurrence `φ_k = -Σ_{m=1}^{k} ψ_m φ_{k-m}`.
pub fn phi_sequence_by_compositions(psi: &PsiSequence, max: usize) -> PhiSequence {
    phi_sequence_with_part_sign(psi, max, -1)
}

/// The composition recurrence with `part_sign` in place of the `-1`
/// attached to every part.
pub fn phi_sequence_with_part_sign(psi: &PsiSequence, max: usize, part_sign: i64) -> PhiSequence {
    let sign = BigInt::from(part_sign);
    let mut phi: Vec<Polynomial> = alloc::vec![Polynomial::one()];
    for k in 1..=max {
        let mut acc = Polynomial::zero();
        for m in 1..=k {
            let psi_m = psi.get(m);
            if !psi_m.is_zero() {
                acc += &(psi_m * &phi[k - m]);
            }
        }
        phi.push(acc.scale(&sign));
    }
    PhiSequence::new(phi)
}

/// `φ_k` by listing every composition of `k` and multiplying out; an oracle
/// for [`phi_by_compositions`], exponential in `k`.
pub fn phi_by_composition_enumeration(psi: &PsiSequence, k: usize) -> Polynomial {
    fn go(psi: &PsiSequence, left: usize, negative: bool, product: &Polynomial, out: &mut Polynomial) {
        if left == 0 {
            *out += &if negative { -product } else { product.clone() };
            return;
        }
        for part in 1..=left {
            let psi_part = psi.get(part);
            if psi_part.is_zero() {
                continue;
            }
            go(psi, left - part, !negative, &(product * psi_part), out);
        }
    }
    let mut out = Polynomial::zero();
    go(psi, k, false, &Polynomial::one(), &mut out);
    out
}

/// `φ_k = Σ β(c) c` over the closed hikes `c` of length `k`.
pub fn phi_by_beta(g: &Digraph, k: usize) -> Polynomial {
    Polynomial::from_terms(enumerate_closed_hikes(g, k).into_iter().map(|c| {
        let beta = BigInt::from(beta_closed_form(&c).expect("closed hike"));
        (c, beta)
    }))
}

/// `M^(ℓ) = Σ_{k=0}^{ℓ} ψ_k W^{ℓ-k}`, given `powers[m] = W^m` for `m ≤ ℓ`.
pub fn m_ell_from(psi: &PsiSequence, powers: &[PolyMatrix], ell: usize) -> PolyMatrix {
    let n = powers[0].dim();
    let mut acc = PolyMatrix::zero(n);
    for k in 0..=ell.min(psi.max_degree()) {
        let psi_k = psi.get(k);
        if !psi_k.is_zero() {
            acc = &acc + &powers[ell - k].scale(psi_k);
        }
    }
    acc
}

/// `M̃^(ℓ) = -Σ_{k=0}^{ℓ-1} ψ_k W^{ℓ-k}`, given `powers[m] = W^m` for `m ≤ ℓ`.
pub fn m_tilde_ell_from(psi: &PsiSequence, powers: &[PolyMatrix], ell: usize) -> PolyMatrix {
    let n = powers[0].dim();
    let mut acc = PolyMatrix::zero(n);
    for k in 0..ell.min(psi.max_degree() + 1) {
        let psi_k = psi.get(k);
        if !psi_k.is_zero() {
            acc = &acc - &powers[ell - k].scale(psi_k);
        }
    }
    acc
}

/// `M^(ℓ)`, whose `(i,j)` entry is `Σ_h μ_ij(h) h` over hikes of length `ℓ`.
pub fn m_ell(g: &Digraph, ell: usize) -> PolyMatrix {
    let powers = PolyMatrix::adjacency(g).powers(ell);
    m_ell_from(&psi_sequence_by_cycles(g), &powers, ell)
}

/// `M̃^(ℓ) = ψ_ℓ I - M^(ℓ)`, whose `(i,j)` entry is `Σ (-1)^{n(h)} h` over
/// the self-avoiding hikes of length `ℓ` from `v_i` to `v_j`. Zero for `ℓ = 0`.
pub fn m_tilde_ell(g: &Digraph, ell: usize) -> PolyMatrix {
    let powers = PolyMatrix::adjacency(g).powers(ell);
    m_tilde_ell_from(&psi_sequence_by_cycles(g), &powers, ell)
}

/// Both sides of `W^ℓ = Σ_{k=0}^{ℓ} φ_k M^(ℓ-k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerIdentityReport {
    pub ell: usize,
    pub power: PolyMatrix,
    pub expansion: PolyMatrix,
    pub difference: Option<EntryDifference>,
}

impl PowerIdentityReport {
    pub fn holds(&self) -> bool {
        self.difference.is_none()
    }
}

pub fn inverse_power_identity(g: &Digraph, ell: usize) -> PowerIdentityReport {
    let powers = PolyMatrix::adjacency(g).powers(ell);
    let psi = psi_sequence_by_cycles(g);
    let phi = phi_sequence_by_compositions(&psi, ell);
    let mut expansion = PolyMatrix::zero(g.n_vertices());
    for k in 0..=ell {
        let phi_k = phi.get(k);
        if !phi_k.is_zero() {
            expansion = &expansion + &m_ell_from(&psi, &powers, ell - k).scale(phi_k);
        }
    }
    let power = powers[ell].clone();
    let difference = power.first_difference(&expansion);
    PowerIdentityReport {
        ell,
        power,
        expansion,
        difference,
    }
}
