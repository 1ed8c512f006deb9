//! Exact polynomials in the formal edge variables `w[i,j]`, with
//! arbitrary-precision integer coefficients.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::multiset::{Edge, EdgeMultiset};

/// A monomial is an edge multiset; its degree is the hike length.
pub type Monomial = EdgeMultiset;

/// Finite integer combination of monomials. Zero coefficients are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, BigInt>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Polynomial::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Polynomial::term(c, Monomial::one())
    }

    pub fn monomial(m: Monomial) -> Self {
        Polynomial::term(BigInt::one(), m)
    }

    pub fn variable(edge: Edge) -> Self {
        Polynomial::monomial(Monomial::from_edge(edge))
    }

    pub fn term(coeff: BigInt, m: Monomial) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(m, coeff);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigInt)>>(terms: I) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    /// Adds `coeff * m` in place.
    pub fn add_term(&mut self, m: Monomial, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        use alloc::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(slot) => {
                slot.insert(coeff);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += coeff;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    /// Highest term degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_homogeneous(&self, k: usize) -> bool {
        self.terms.keys().all(|m| m.degree() == k)
    }

    /// The degree-`k` part.
    pub fn homogeneous_part(&self, k: usize) -> Polynomial {
        self.filter_terms(|m| m.degree() == k)
    }

    /// Drops every term of degree above `max_degree`.
    pub fn truncate(&self, max_degree: usize) -> Polynomial {
        self.filter_terms(|m| m.degree() <= max_degree)
    }

    fn filter_terms<F: Fn(&Monomial) -> bool>(&self, keep: F) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, factor: &BigInt) -> Polynomial {
        if factor.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * factor)).collect(),
        }
    }

    /// Divides every coefficient by `d`, or `None` if some division is inexact.
    pub fn div_exact(&self, d: &BigInt) -> Option<Polynomial> {
        if d.is_zero() {
            return None;
        }
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            if !(c % d).is_zero() {
                return None;
            }
            terms.insert(m.clone(), c / d);
        }
        Some(Polynomial { terms })
    }

    /// Exact product, discarding terms above `max_degree` when given.
    pub fn mul_truncated(&self, other: &Polynomial, max_degree: Option<usize>) -> Polynomial {
        let mut out = Polynomial::zero();
        for (ma, ca) in &self.terms {
            let da = ma.degree();
            for (mb, cb) in &other.terms {
                if let Some(max) = max_degree {
                    if da + mb.degree() > max {
                        continue;
                    }
                }
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    /// Terms in canonical order: by degree, then by monomial text.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &BigInt)> {
        let mut keyed: Vec<(usize, String, &Monomial, &BigInt)> = self
            .terms
            .iter()
            .map(|(m, c)| (m.degree(), m.to_string(), m, c))
            .collect();
        keyed.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
        keyed.into_iter().map(|(_, _, m, c)| (m, c)).collect()
    }

    /// The monomial where `self` and `other` first disagree in canonical order,
    /// with both coefficients.
    pub fn first_difference(&self, other: &Polynomial) -> Option<(Monomial, BigInt, BigInt)> {
        let diff = self - other;
        let (m, _) = diff.sorted_terms().into_iter().next()?;
        Some((m.clone(), self.coeff(m), other.coeff(m)))
    }
}

/// Canonical text: terms sorted by `(degree, monomial text)`, each printed as
/// an explicitly signed integer coefficient, then `*` and the monomial factors
/// unless the term is constant: `+1-1*w[1,2]*w[2,1]`, `+2*w[1,2]^2*w[2,3]`.
/// The zero polynomial prints `0`.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (m, c) in self.sorted_terms() {
            let sign = if c.is_negative() { '-' } else { '+' };
            let mag = c.abs();
            if m.is_empty() {
                write!(f, "{sign}{mag}")?;
            } else {
                write!(f, "{sign}{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(mut self) -> Polynomial {
        for c in self.terms.values_mut() {
            *c = -core::mem::take(c);
        }
        self
    }
}

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&Polynomial> for Polynomial {
    fn sub_assign(&mut self, rhs: &Polynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c);
        }
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.mul_truncated(rhs, None)
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(mut self, rhs: Polynomial) -> Polynomial {
        self += &rhs;
        self
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(mut self, rhs: Polynomial) -> Polynomial {
        self -= &rhs;
        self
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl From<Monomial> for Polynomial {
    fn from(m: Monomial) -> Self {
        Polynomial::monomial(m)
    }
}
