//! JSON renderings of polynomials and matrices.
//!
//! A polynomial is `{"terms": [{"coeff": "-2", "factors": [[i, j, m], ...]}]}`
//! with terms in canonical text order and coefficients as decimal strings, so
//! arbitrarily large values survive any JSON reader.

use hikes_core::{Edge, EdgeMultiset, Monomial, PolyMatrix, Polynomial};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

/// One factor `w[i,j]^m` as `[i, j, m]`.
pub type FactorJson = [usize; 3];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: String,
    pub factors: Vec<FactorJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialJson {
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryJson {
    pub row: usize,
    pub col: usize,
    pub poly: PolynomialJson,
}

/// Every entry of a square matrix, row-major, 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub entries: Vec<EntryJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SchemaError {
    #[error("coefficient `{0}` is not a decimal integer")]
    Coefficient(String),
    #[error("factor {0:?} needs 1-based vertices and a positive multiplicity")]
    Factor(FactorJson),
    #[error("monomial {0} appears twice")]
    DuplicateMonomial(Monomial),
    #[error("zero coefficient on {0}")]
    ZeroCoefficient(Monomial),
    #[error("matrix entries must list all {dim}x{dim} positions row-major")]
    MatrixShape { dim: usize },
}

pub fn monomial_to_json(m: &Monomial) -> Vec<FactorJson> {
    m.iter().map(|(e, mult)| [e.tail, e.head, mult as usize]).collect()
}

pub fn monomial_from_json(factors: &[FactorJson]) -> Result<Monomial, SchemaError> {
    let mut counts = Vec::with_capacity(factors.len());
    for &f in factors {
        let [i, j, m] = f;
        let mult = u32::try_from(m).map_err(|_| SchemaError::Factor(f))?;
        if i == 0 || j == 0 || mult == 0 {
            return Err(SchemaError::Factor(f));
        }
        counts.push((Edge::new(i, j), mult));
    }
    Ok(EdgeMultiset::from_counts(counts))
}

impl From<&Polynomial> for PolynomialJson {
    fn from(p: &Polynomial) -> Self {
        let terms = p
            .sorted_terms()
            .into_iter()
            .map(|(m, c)| TermJson {
                coeff: c.to_string(),
                factors: monomial_to_json(m),
            })
            .collect();
        PolynomialJson { terms }
    }
}

impl TryFrom<&PolynomialJson> for Polynomial {
    type Error = SchemaError;

    fn try_from(json: &PolynomialJson) -> Result<Self, Self::Error> {
        let mut p = Polynomial::zero();
        for term in &json.terms {
            let coeff: BigInt = term
                .coeff
                .parse()
                .map_err(|_| SchemaError::Coefficient(term.coeff.clone()))?;
            let m = monomial_from_json(&term.factors)?;
            if coeff == BigInt::default() {
                return Err(SchemaError::ZeroCoefficient(m));
            }
            if p.coeff(&m) != BigInt::default() {
                return Err(SchemaError::DuplicateMonomial(m));
            }
            p.add_term(m, coeff);
        }
        Ok(p)
    }
}

impl From<&PolyMatrix> for MatrixJson {
    fn from(a: &PolyMatrix) -> Self {
        let entries = a
            .entries()
            .map(|(r, c, p)| EntryJson {
                row: r + 1,
                col: c + 1,
                poly: p.into(),
            })
            .collect();
        MatrixJson { dim: a.dim(), entries }
    }
}

impl TryFrom<&MatrixJson> for PolyMatrix {
    type Error = SchemaError;

    fn try_from(json: &MatrixJson) -> Result<Self, Self::Error> {
        let n = json.dim;
        let in_order = json.entries.len() == n * n
            && json
                .entries
                .iter()
                .enumerate()
                .all(|(k, e)| (e.row, e.col) == (k / n + 1, k % n + 1));
        if !in_order {
            return Err(SchemaError::MatrixShape { dim: n });
        }
        let mut a = PolyMatrix::zero(n);
        for e in &json.entries {
            a.set(e.row - 1, e.col - 1, Polynomial::try_from(&e.poly)?);
        }
        Ok(a)
    }
}
