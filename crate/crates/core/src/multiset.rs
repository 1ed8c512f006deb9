//! Edge multisets: the monomials `w[i1,j1]*...*w[il,jl]` that represent walks
//! and hikes once the order of the edges is forgotten.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

/// 1-based vertex index.
pub type VertexId = usize;

/// A directed edge `tail -> head`, the formal variable `w[tail,head]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub tail: VertexId,
    pub head: VertexId,
}

impl Edge {
    pub const fn new(tail: VertexId, head: VertexId) -> Self {
        Edge { tail, head }
    }

    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }

    pub fn reversed(&self) -> Edge {
        Edge::new(self.head, self.tail)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w[{},{}]", self.tail, self.head)
    }
}

impl From<(VertexId, VertexId)> for Edge {
    fn from((tail, head): (VertexId, VertexId)) -> Self {
        Edge::new(tail, head)
    }
}

/// A finite multiset of edges with strictly positive multiplicities.
///
/// Entries are kept sorted by `(tail, head)`, so two multisets compare equal
/// exactly when their multiplicity maps agree. The empty multiset is the
/// trivial closed hike `1`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeMultiset {
    entries: Vec<(Edge, u32)>,
}

impl EdgeMultiset {
    /// The trivial hike `1`.
    pub fn one() -> Self {
        EdgeMultiset::default()
    }

    pub fn from_edge(edge: Edge) -> Self {
        EdgeMultiset {
            entries: alloc::vec![(edge, 1)],
        }
    }

    /// Builds a multiset from `(edge, multiplicity)` pairs in any order.
    /// Repeated edges accumulate and zero multiplicities are dropped.
    pub fn from_counts<I: IntoIterator<Item = (Edge, u32)>>(counts: I) -> Self {
        let mut entries: Vec<(Edge, u32)> = counts.into_iter().filter(|&(_, m)| m > 0).collect();
        entries.sort_unstable_by_key(|&(e, _)| e);
        let mut merged: Vec<(Edge, u32)> = Vec::with_capacity(entries.len());
        for (edge, m) in entries {
            match merged.last_mut() {
                Some((last, count)) if *last == edge => *count += m,
                _ => merged.push((edge, m)),
            }
        }
        EdgeMultiset { entries: merged }
    }

    pub fn from_edges<I, E>(edges: I) -> Self
    where
        I: IntoIterator<Item = E>,
        E: Into<Edge>,
    {
        Self::from_counts(edges.into_iter().map(|e| (e.into(), 1)))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Total number of edges counted with multiplicity (the hike length).
    pub fn degree(&self) -> usize {
        self.entries.iter().map(|&(_, m)| m as usize).sum()
    }

    /// Number of distinct edges.
    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn multiplicity(&self, edge: Edge) -> u32 {
        self.entries
            .binary_search_by_key(&edge, |&(e, _)| e)
            .map(|idx| self.entries[idx].1)
            .unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Edge, u32)> + '_ {
        self.entries.iter().copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.entries.iter().map(|&(e, _)| e)
    }

    /// True when every multiplicity is one.
    pub fn is_simple(&self) -> bool {
        self.entries.iter().all(|&(_, m)| m == 1)
    }

    /// Vertices crossed by the multiset, sorted ascending.
    pub fn vertices(&self) -> Vec<VertexId> {
        let set: BTreeSet<VertexId> = self.entries.iter().flat_map(|&(e, _)| [e.tail, e.head]).collect();
        set.into_iter().collect()
    }

    pub fn touches(&self, v: VertexId) -> bool {
        self.entries.iter().any(|&(e, _)| e.tail == v || e.head == v)
    }

    pub fn max_vertex(&self) -> VertexId {
        self.entries.iter().map(|&(e, _)| e.tail.max(e.head)).max().unwrap_or(0)
    }

    /// Monomial product: multiplicities add.
    pub fn mul(&self, other: &EdgeMultiset) -> EdgeMultiset {
        let mut entries = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&(ea, ma)), Some(&&(eb, mb))) => {
                    if ea < eb {
                        entries.push((ea, ma));
                        a.next();
                    } else if eb < ea {
                        entries.push((eb, mb));
                        b.next();
                    } else {
                        entries.push((ea, ma + mb));
                        a.next();
                        b.next();
                    }
                }
                (Some(&&x), None) => {
                    entries.push(x);
                    a.next();
                }
                (None, Some(&&y)) => {
                    entries.push(y);
                    b.next();
                }
                (None, None) => break,
            }
        }
        EdgeMultiset { entries }
    }

    pub fn with_edge(&self, edge: Edge) -> EdgeMultiset {
        self.mul(&EdgeMultiset::from_edge(edge))
    }

    pub fn pow(&self, k: u32) -> EdgeMultiset {
        EdgeMultiset {
            entries: if k == 0 {
                Vec::new()
            } else {
                self.entries.iter().map(|&(e, m)| (e, m * k)).collect()
            },
        }
    }

    /// `self / divisor`, or `None` when `divisor` is not a sub-multiset.
    pub fn divide(&self, divisor: &EdgeMultiset) -> Option<EdgeMultiset> {
        let mut entries = Vec::with_capacity(self.entries.len());
        let mut d = divisor.entries.iter().peekable();
        for &(edge, m) in &self.entries {
            let mut take = 0;
            if let Some(&&(de, dm)) = d.peek() {
                if de < edge {
                    return None;
                }
                if de == edge {
                    take = dm;
                    d.next();
                }
            }
            if take > m {
                return None;
            }
            if m > take {
                entries.push((edge, m - take));
            }
        }
        if d.next().is_some() {
            return None;
        }
        Some(EdgeMultiset { entries })
    }

    pub fn is_divisible_by(&self, divisor: &EdgeMultiset) -> bool {
        divisor.entries.iter().all(|&(e, m)| self.multiplicity(e) >= m)
    }

    /// Every sub-multiset, including `1` and `self`; there are
    /// `prod(multiplicity + 1)` of them.
    pub fn submultisets(&self) -> Vec<EdgeMultiset> {
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(self.entries.len());
        self.collect_submultisets(0, &mut current, &mut out, u32::MAX);
        out
    }

    /// Sub-multisets whose multiplicities are all at most one.
    pub fn simple_submultisets(&self) -> Vec<EdgeMultiset> {
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(self.entries.len());
        self.collect_submultisets(0, &mut current, &mut out, 1);
        out
    }

    fn collect_submultisets(&self, idx: usize, current: &mut Vec<(Edge, u32)>, out: &mut Vec<EdgeMultiset>, cap: u32) {
        if idx == self.entries.len() {
            out.push(EdgeMultiset {
                entries: current.clone(),
            });
            return;
        }
        let (edge, m) = self.entries[idx];
        self.collect_submultisets(idx + 1, current, out, cap);
        for k in 1..=m.min(cap) {
            current.push((edge, k));
            self.collect_submultisets(idx + 1, current, out, cap);
            current.pop();
        }
    }

    /// `out-degree - in-degree` per vertex, indexed by vertex id (index 0 unused).
    pub fn balance(&self) -> Vec<i64> {
        let mut balance = alloc::vec![0i64; self.max_vertex() + 1];
        for &(e, m) in &self.entries {
            balance[e.tail] += m as i64;
            balance[e.head] -= m as i64;
        }
        balance
    }
}

impl<'a> IntoIterator for &'a EdgeMultiset {
    type Item = (Edge, u32);
    type IntoIter = core::iter::Copied<core::slice::Iter<'a, (Edge, u32)>>;

    fn into_iter(self) -> Self::IntoIter {
        self.entries.iter().copied()
    }
}

/// Canonical monomial text: factors `w[i,j]` or `w[i,j]^m` joined by `*`,
/// sorted by `(tail, head)`. The empty multiset renders as `1`.
impl fmt::Display for EdgeMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return f.write_str("1");
        }
        for (idx, &(edge, m)) in self.entries.iter().enumerate() {
            if idx > 0 {
                f.write_str("*")?;
            }
            write!(f, "{edge}")?;
            if m > 1 {
                write!(f, "^{m}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LiteralError {
    #[error("malformed factor `{0}`: expected `i>j` or `i>j^m`")]
    MalformedFactor(alloc::string::String),
    #[error("vertex ids are 1-based, got 0 in `{0}`")]
    ZeroVertex(alloc::string::String),
    #[error("multiplicity must be positive in `{0}`")]
    ZeroMultiplicity(alloc::string::String),
}

/// Parses the hike literal format: comma-separated factors `i>j` with an
/// optional `^m` multiplicity, whitespace ignored. `""` and `"1"` denote the
/// trivial hike.
impl FromStr for EdgeMultiset {
    type Err = LiteralError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: alloc::string::String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() || compact == "1" {
            return Ok(EdgeMultiset::one());
        }
        let mut counts = Vec::new();
        for factor in compact.split(',') {
            let bad = || LiteralError::MalformedFactor(factor.into());
            let (edge_part, mult) = match factor.split_once('^') {
                Some((e, m)) => (e, m.parse::<u32>().map_err(|_| bad())?),
                None => (factor, 1),
            };
            let (tail, head) = edge_part.split_once('>').ok_or_else(bad)?;
            let tail: VertexId = tail.parse().map_err(|_| bad())?;
            let head: VertexId = head.parse().map_err(|_| bad())?;
            if tail == 0 || head == 0 {
                return Err(LiteralError::ZeroVertex(factor.into()));
            }
            if mult == 0 {
                return Err(LiteralError::ZeroMultiplicity(factor.into()));
            }
            counts.push((Edge::new(tail, head), mult));
        }
        Ok(EdgeMultiset::from_counts(counts))
    }
}
