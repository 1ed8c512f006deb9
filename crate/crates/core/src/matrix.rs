//! Dense square matrices of polynomials: `W`, its powers, `I - W`,
//! determinants and adjugates.
//!
//! Indices are 0-based here; row `r` corresponds to vertex `v_{r+1}`.

use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};

use num_bigint::BigInt;

use crate::graph::Digraph;
use crate::poly::{Monomial, Polynomial};

/// Largest dimension accepted by [`PolyMatrix::determinant`] and
/// [`PolyMatrix::adjugate`].
pub const MAX_SYMBOLIC_DIMENSION: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatrixError {
    #[error("dimension {n} exceeds the symbolic limit of {limit}")]
    DimensionTooLarge { n: usize, limit: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    n: usize,
    entries: Vec<Polynomial>,
}

/// Where two matrices first disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntryDifference {
    pub row: usize,
    pub col: usize,
    pub monomial: Monomial,
    pub lhs: BigInt,
    pub rhs: BigInt,
}

impl PolyMatrix {
    pub fn zero(n: usize) -> Self {
        PolyMatrix {
            n,
            entries: alloc::vec![Polynomial::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = PolyMatrix::zero(n);
        for r in 0..n {
            m.set(r, r, Polynomial::one());
        }
        m
    }

    pub fn from_fn<F: FnMut(usize, usize) -> Polynomial>(n: usize, mut f: F) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                entries.push(f(r, c));
            }
        }
        PolyMatrix { n, entries }
    }

    /// The weighted adjacency matrix `W` of `g`: entry `(i,j)` is `w[i,j]`
    /// when the edge exists and zero otherwise.
    pub fn adjacency(g: &Digraph) -> Self {
        let mut m = PolyMatrix::zero(g.n_vertices());
        for &e in g.edges() {
            m.set(e.tail - 1, e.head - 1, Polynomial::variable(e));
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> &Polynomial {
        &self.entries[row * self.n + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Polynomial) {
        self.entries[row * self.n + col] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Polynomial::is_zero)
    }

    pub fn trace(&self) -> Polynomial {
        let mut t = Polynomial::zero();
        for r in 0..self.n {
            t += self.get(r, r);
        }
        t
    }

    pub fn scale(&self, factor: &Polynomial) -> PolyMatrix {
        PolyMatrix {
            n: self.n,
            entries: self.entries.iter().map(|p| p * factor).collect(),
        }
    }

    pub fn truncate(&self, max_degree: usize) -> PolyMatrix {
        PolyMatrix {
            n: self.n,
            entries: self.entries.iter().map(|p| p.truncate(max_degree)).collect(),
        }
    }

    pub fn mul_truncated(&self, other: &PolyMatrix, max_degree: Option<usize>) -> PolyMatrix {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let n = self.n;
        PolyMatrix::from_fn(n, |r, c| {
            let mut acc = Polynomial::zero();
            for k in 0..n {
                let (a, b) = (self.get(r, k), other.get(k, c));
                if !a.is_zero() && !b.is_zero() {
                    acc += &a.mul_truncated(b, max_degree);
                }
            }
            acc
        })
    }

    /// `self^ell`, with `self^0 = I`.
    pub fn power(&self, ell: usize) -> PolyMatrix {
        let mut acc = PolyMatrix::identity(self.n);
        for _ in 0..ell {
            acc = &acc * self;
        }
        acc
    }

    /// Successive powers `self^0, .., self^max`.
    pub fn powers(&self, max: usize) -> Vec<PolyMatrix> {
        let mut out = Vec::with_capacity(max + 1);
        out.push(PolyMatrix::identity(self.n));
        for k in 1..=max {
            let next = &out[k - 1] * self;
            out.push(next);
        }
        out
    }

    fn check_dimension(&self) -> Result<(), MatrixError> {
        if self.n > MAX_SYMBOLIC_DIMENSION {
            return Err(MatrixError::DimensionTooLarge {
                n: self.n,
                limit: MAX_SYMBOLIC_DIMENSION,
            });
        }
        Ok(())
    }

    pub fn determinant(&self) -> Result<Polynomial, MatrixError> {
        self.check_dimension()?;
        Ok(self.determinant_unbounded())
    }

    /// Laplace expansion along rows, memoized on the set of used columns:
    /// `partial[S]` is the signed sum over injective assignments of the first
    /// `|S|` rows onto the columns `S`. Costs `O(2^n n)` polynomial products.
    pub fn determinant_unbounded(&self) -> Polynomial {
        let n = self.n;
        if n == 0 {
            return Polynomial::one();
        }
        let mut partial: Vec<Option<Polynomial>> = alloc::vec![None; 1 << n];
        partial[0] = Some(Polynomial::one());
        for mask in 0usize..(1 << n) {
            let Some(acc) = partial[mask].take() else {
                continue;
            };
            let row = mask.count_ones() as usize;
            if row == n {
                partial[mask] = Some(acc);
                continue;
            }
            if !acc.is_zero() {
                for col in 0..n {
                    if mask & (1 << col) != 0 {
                        continue;
                    }
                    let entry = self.get(row, col);
                    if entry.is_zero() {
                        continue;
                    }
                    // Inversions added by placing `col` after the used columns above it.
                    let inversions = (mask >> (col + 1)).count_ones();
                    let mut term = &acc * entry;
                    if inversions % 2 == 1 {
                        term = -term;
                    }
                    let slot = partial[mask | (1 << col)].get_or_insert_with(Polynomial::zero);
                    *slot += &term;
                }
            }
        }
        partial[(1 << n) - 1].take().unwrap_or_default()
    }

    /// `B^{(ji)}`: `self` with entry `(j,i)` set to one and the rest of
    /// column `i` and row `j` set to zero.
    pub fn cofactor_matrix(&self, j: usize, i: usize) -> PolyMatrix {
        let mut b = self.clone();
        for k in 0..self.n {
            b.set(k, i, Polynomial::zero());
            b.set(j, k, Polynomial::zero());
        }
        b.set(j, i, Polynomial::one());
        b
    }

    /// `adj(B)_{ij} = det(B^{(ji)})`.
    pub fn adjugate(&self) -> Result<PolyMatrix, MatrixError> {
        self.check_dimension()?;
        Ok(self.adjugate_unbounded())
    }

    pub fn adjugate_unbounded(&self) -> PolyMatrix {
        PolyMatrix::from_fn(self.n, |i, j| self.cofactor_matrix(j, i).determinant_unbounded())
    }

    /// First differing entry in row-major order and its first differing
    /// monomial in canonical order.
    pub fn first_difference(&self, other: &PolyMatrix) -> Option<EntryDifference> {
        assert_eq!(self.n, other.n, "dimension mismatch");
        for row in 0..self.n {
            for col in 0..self.n {
                if let Some((monomial, lhs, rhs)) = self.get(row, col).first_difference(other.get(row, col)) {
                    return Some(EntryDifference {
                        row,
                        col,
                        monomial,
                        lhs,
                        rhs,
                    });
                }
            }
        }
        None
    }

    /// Non-zero entries as `(row, col, polynomial)`, row-major.
    pub fn nonzero_entries(&self) -> impl Iterator<Item = (usize, usize, &Polynomial)> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(move |(idx, p)| (idx / self.n, idx % self.n, p))
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Polynomial)> {
        self.entries
            .iter()
            .enumerate()
            .map(move |(idx, p)| (idx / self.n, idx % self.n, p))
    }
}

impl Mul for &PolyMatrix {
    type Output = PolyMatrix;
    fn mul(self, rhs: &PolyMatrix) -> PolyMatrix {
        self.mul_truncated(rhs, None)
    }
}

impl Add for &PolyMatrix {
    type Output = PolyMatrix;
    fn add(self, rhs: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        PolyMatrix {
            n: self.n,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &PolyMatrix {
    type Output = PolyMatrix;
    fn sub(self, rhs: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        PolyMatrix {
            n: self.n,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

/// `I - W` for the graph `g`.
pub fn identity_minus_adjacency(g: &Digraph) -> PolyMatrix {
    let n = g.n_vertices();
    &PolyMatrix::identity(n) - &PolyMatrix::adjacency(g)
}

/// Whether `p` is a constant equal to `c`.
pub fn is_constant(p: &Polynomial, c: i64) -> bool {
    if c == 0 {
        return p.is_zero();
    }
    p.len() == 1 && p.coeff(&Monomial::one()) == BigInt::from(c)
}
