//! Exact walk and hike calculus on small directed graphs.
//!
//! Edge multisets double as monomials in the formal variables `w[i,j]`.
//! [`poset`] holds the incidence functions on hikes, [`charpoly`] the
//! coefficients of `det(I - W)` and the self-avoiding hike matrices, and
//! [`identities`] exhaustive checks tying them together.
#![no_std]
extern crate alloc;

pub mod charpoly;
pub mod graph;
pub mod identities;
pub mod matrix;
pub mod multiset;
pub mod poly;
pub mod poset;
pub mod random;

pub use graph::{parse_digraph, Digraph, GraphError, ParseError};
pub use matrix::{MatrixError, PolyMatrix};
pub use multiset::{Edge, EdgeMultiset, LiteralError, VertexId};
pub use poly::{Monomial, Polynomial};
pub use poset::{HikeClass, PosetError};
