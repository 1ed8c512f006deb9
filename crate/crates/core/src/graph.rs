//! Digraphs and the combinatorial ground sets built on them: simple cycles,
//! hikes and self-avoiding hikes.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::str::FromStr;

use crate::multiset::{Edge, EdgeMultiset, VertexId};
use crate::poset::{classify, stats, HikeClass};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("a digraph needs at least one vertex")]
    NoVertices,
    #[error("vertex {vertex} is outside 1..={n}")]
    VertexOutOfRange { vertex: VertexId, n: usize },
    #[error("duplicate edge {0}")]
    DuplicateEdge(Edge),
}

/// A rejected graph file, with its 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: {source}")]
    Graph { line: usize, source: GraphError },
}

impl ParseError {
    pub fn line(&self) -> usize {
        match self {
            ParseError::Malformed { line, .. } | ParseError::Graph { line, .. } => *line,
        }
    }
}

/// Parses the edge-list format: the first significant line holds `N`, every
/// further one `"i j"` (two 1-based vertices separated by one space). Empty
/// lines and lines starting with `#` are skipped.
pub fn parse_digraph(text: &str) -> Result<Digraph, ParseError> {
    let malformed = |line, reason: &str| ParseError::Malformed {
        line,
        reason: reason.into(),
    };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(idx, l)| (idx + 1, l.strip_suffix('\r').unwrap_or(l)))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (line, header) = lines.next().ok_or_else(|| malformed(1, "missing vertex count"))?;
    let n = parse_count(header).ok_or_else(|| malformed(line, "expected the vertex count N"))?;
    let mut g = Digraph::empty(n).map_err(|source| ParseError::Graph { line, source })?;
    for (line, text) in lines {
        let (tail, head) = text
            .split_once(' ')
            .and_then(|(a, b)| Some((parse_count(a)?, parse_count(b)?)))
            .ok_or_else(|| malformed(line, "expected \"i j\""))?;
        g.add_edge(Edge::new(tail, head))
            .map_err(|source| ParseError::Graph { line, source })?;
    }
    Ok(g)
}

fn parse_count(s: &str) -> Option<usize> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

impl FromStr for Digraph {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_digraph(s)
    }
}

/// A digraph on vertices `1..=n`. Loops are allowed, parallel edges are not,
/// so each ordered pair carries at most one formal variable `w[i,j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    edges: Vec<Edge>,
}

impl Digraph {
    pub fn new<I, E>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = E>,
        E: Into<Edge>,
    {
        let mut g = Digraph::empty(n)?;
        for e in edges {
            g.add_edge(e.into())?;
        }
        Ok(g)
    }

    /// `n` isolated vertices.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::NoVertices);
        }
        Ok(Digraph { n, edges: Vec::new() })
    }

    pub fn add_edge(&mut self, edge: Edge) -> Result<(), GraphError> {
        for v in [edge.tail, edge.head] {
            if v == 0 || v > self.n {
                return Err(GraphError::VertexOutOfRange { vertex: v, n: self.n });
            }
        }
        match self.edges.binary_search(&edge) {
            Ok(_) => Err(GraphError::DuplicateEdge(edge)),
            Err(pos) => {
                self.edges.insert(pos, edge);
                Ok(())
            }
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    /// Edges in lexicographic `(tail, head)` order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn has_edge(&self, tail: VertexId, head: VertexId) -> bool {
        self.edges.binary_search(&Edge::new(tail, head)).is_ok()
    }

    pub fn successors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.edges.iter().filter(move |e| e.tail == v).map(|e| e.head)
    }

    /// Whether every edge of `m` belongs to this graph.
    pub fn hosts(&self, m: &EdgeMultiset) -> bool {
        m.edges().all(|e| self.has_edge(e.tail, e.head))
    }
}

fn sort_canonical(list: &mut [EdgeMultiset]) {
    list.sort_by_cached_key(|m| m.to_string());
}

/// All simple cycles (loops included), each as a multiset with unit
/// multiplicities, in canonical text order.
///
/// Johnson's elementary-circuit search: for each start vertex `s`, search the
/// strongly connected component of `s` in the subgraph induced by `{s..n}`,
/// with the usual blocked-set bookkeeping.
pub fn simple_cycles(g: &Digraph) -> Vec<EdgeMultiset> {
    let n = g.n_vertices();
    let adjacency: Vec<Vec<VertexId>> = (0..=n)
        .map(|v| if v == 0 { Vec::new() } else { g.successors(v).collect() })
        .collect();

    let mut cycles = Vec::new();
    for s in 1..=n {
        let component = scc_containing(&adjacency, s);
        let allowed: Vec<bool> = (0..=n).map(|v| component.contains(&v)).collect();

        let mut search = CircuitSearch {
            adjacency: &adjacency,
            allowed: &allowed,
            start: s,
            blocked: alloc::vec![false; n + 1],
            blocked_by: alloc::vec![Vec::new(); n + 1],
            stack: Vec::new(),
            out: &mut cycles,
        };
        search.circuit(s);
    }
    sort_canonical(&mut cycles);
    cycles
}

struct CircuitSearch<'a> {
    adjacency: &'a [Vec<VertexId>],
    allowed: &'a [bool],
    start: VertexId,
    blocked: Vec<bool>,
    blocked_by: Vec<Vec<VertexId>>,
    stack: Vec<VertexId>,
    out: &'a mut Vec<EdgeMultiset>,
}

impl CircuitSearch<'_> {
    fn circuit(&mut self, v: VertexId) -> bool {
        let mut found = false;
        self.stack.push(v);
        self.blocked[v] = true;
        for idx in 0..self.adjacency[v].len() {
            let w = self.adjacency[v][idx];
            if !self.allowed[w] {
                continue;
            }
            if w == self.start {
                let mut edges: Vec<Edge> = self.stack.windows(2).map(|p| Edge::new(p[0], p[1])).collect();
                edges.push(Edge::new(v, self.start));
                self.out.push(EdgeMultiset::from_edges(edges));
                found = true;
            } else if !self.blocked[w] && self.circuit(w) {
                found = true;
            }
        }
        if found {
            self.unblock(v);
        } else {
            for idx in 0..self.adjacency[v].len() {
                let w = self.adjacency[v][idx];
                if self.allowed[w] && !self.blocked_by[w].contains(&v) {
                    self.blocked_by[w].push(v);
                }
            }
        }
        self.stack.pop();
        found
    }

    fn unblock(&mut self, v: VertexId) {
        self.blocked[v] = false;
        let waiting = core::mem::take(&mut self.blocked_by[v]);
        for w in waiting {
            if self.blocked[w] {
                self.unblock(w);
            }
        }
    }
}

/// Vertices of the strongly connected component of `s` in the subgraph
/// induced by `{s, s+1, .., n}`.
fn scc_containing(adjacency: &[Vec<VertexId>], s: VertexId) -> Vec<VertexId> {
    let n = adjacency.len() - 1;
    let reach = |forward: bool| -> Vec<bool> {
        let mut seen = alloc::vec![false; n + 1];
        let mut stack = alloc::vec![s];
        seen[s] = true;
        while let Some(v) = stack.pop() {
            for u in s..=n {
                if seen[u] {
                    continue;
                }
                let linked = if forward {
                    adjacency[v].contains(&u)
                } else {
                    adjacency[u].contains(&v)
                };
                if linked {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen
    };
    let (fwd, bwd) = (reach(true), reach(false));
    (s..=n).filter(|&v| fwd[v] && bwd[v]).collect()
}

/// Target degree balance for a multiset enumeration.
#[derive(Clone, Copy)]
enum Target {
    Closed,
    Open(VertexId, VertexId),
    AnyHike,
}

/// Visits every multiset of `ell` edges from `edges` (with multiplicity at
/// most `max_mult`) whose degree balance can still reach `target`.
fn for_each_multiset<F: FnMut(&[u32])>(
    n: usize,
    edges: &[Edge],
    ell: usize,
    max_mult: u32,
    target: Target,
    mut visit: F,
) {
    let mut goal = alloc::vec![0i64; n + 1];
    let slack = match target {
        Target::Closed => 0,
        Target::Open(i, j) => {
            goal[i] += 1;
            goal[j] -= 1;
            0
        }
        Target::AnyHike => 2,
    };
    let mut counts = alloc::vec![0u32; edges.len()];
    let mut balance = alloc::vec![0i64; n + 1];
    let distance: i64 = goal.iter().map(|g| g.abs()).sum();

    struct Walker<'a, F> {
        edges: &'a [Edge],
        goal: &'a [i64],
        counts: &'a mut [u32],
        balance: &'a mut [i64],
        max_mult: u32,
        slack: i64,
        visit: &'a mut F,
    }

    impl<F: FnMut(&[u32])> Walker<'_, F> {
        fn go(&mut self, from: usize, remaining: usize, distance: i64) {
            if distance > 2 * remaining as i64 + self.slack {
                return;
            }
            if remaining == 0 {
                (self.visit)(self.counts);
                return;
            }
            for idx in from..self.edges.len() {
                if self.counts[idx] == self.max_mult {
                    continue;
                }
                let e = self.edges[idx];
                let mut d = distance;
                for (v, delta) in [(e.tail, 1i64), (e.head, -1i64)] {
                    let before = (self.balance[v] - self.goal[v]).abs();
                    self.balance[v] += delta;
                    d += (self.balance[v] - self.goal[v]).abs() - before;
                }
                self.counts[idx] += 1;
                self.go(idx, remaining - 1, d);
                self.counts[idx] -= 1;
                self.balance[e.tail] -= 1;
                self.balance[e.head] += 1;
            }
        }
    }

    let mut walker = Walker {
        edges,
        goal: &goal,
        counts: &mut counts,
        balance: &mut balance,
        max_mult,
        slack,
        visit: &mut visit,
    };
    walker.go(0, ell, distance);
}

fn multiset_from_counts(edges: &[Edge], counts: &[u32]) -> EdgeMultiset {
    EdgeMultiset::from_counts(edges.iter().copied().zip(counts.iter().copied()))
}

/// All hikes of length `ell` over the edges of `g`.
///
/// With `endpoints = Some((i, j))` and `i != j`, only the open hikes from
/// `v_i` to `v_j`; with `i == j`, every closed hike of length `ell`.
pub fn enumerate_hikes(g: &Digraph, ell: usize, endpoints: Option<(VertexId, VertexId)>) -> Vec<EdgeMultiset> {
    let target = match endpoints {
        None => Target::AnyHike,
        Some((i, j)) if i == j => Target::Closed,
        Some((i, j)) => {
            if i == 0 || j == 0 || i > g.n_vertices() || j > g.n_vertices() {
                return Vec::new();
            }
            Target::Open(i, j)
        }
    };
    let mut out = Vec::new();
    for_each_multiset(g.n_vertices(), g.edges(), ell, u32::MAX, target, |counts| {
        let m = multiset_from_counts(g.edges(), counts);
        let keep = match (classify(&m), endpoints) {
            (HikeClass::NotAHike, _) => false,
            (_, None) => true,
            (HikeClass::Closed, Some((i, j))) => i == j,
            (HikeClass::Open { source, target }, Some((i, j))) => (source, target) == (i, j),
        };
        if keep {
            out.push(m);
        }
    });
    sort_canonical(&mut out);
    out
}

/// All closed hikes of length `ell`; `[1]` for `ell = 0`.
pub fn enumerate_closed_hikes(g: &Digraph, ell: usize) -> Vec<EdgeMultiset> {
    enumerate_hikes(g, ell, Some((1, 1)))
}

/// The self-avoiding hikes of length `ell` from `v_i` to `v_j`.
///
/// For `i != j` these are open hikes with `|V(h)| = ell + 1`. For `i == j`
/// they are the non-empty self-avoiding closed hikes that cross `v_i`, which
/// is the summation set of the diagonal of the signed self-avoiding hike
/// matrix.
pub fn enumerate_self_avoiding_hikes(g: &Digraph, ell: usize, i: VertexId, j: VertexId) -> Vec<EdgeMultiset> {
    let n = g.n_vertices();
    if ell > n || i == 0 || j == 0 || i > n || j > n || (i == j && ell == 0) {
        return Vec::new();
    }
    let target = if i == j { Target::Closed } else { Target::Open(i, j) };
    let mut out = Vec::new();
    for_each_multiset(n, g.edges(), ell, 1, target, |counts| {
        let m = multiset_from_counts(g.edges(), counts);
        let class_ok = match classify(&m) {
            HikeClass::Closed => i == j && m.touches(i),
            HikeClass::Open { source, target } => (source, target) == (i, j),
            HikeClass::NotAHike => false,
        };
        if class_ok && stats(&m).map(|s| s.self_avoiding).unwrap_or(false) {
            out.push(m);
        }
    });
    sort_canonical(&mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_files() {
        let g = parse_digraph("3\n1 2\n2 3\n3 1\n").unwrap();
        assert_eq!(g, Digraph::new(3, [(1, 2), (2, 3), (3, 1)]).unwrap());
        let g = parse_digraph("# triangle\n3\n\n1 2\n# back edge\n2 1").unwrap();
        assert_eq!(g.edges().len(), 2);
        assert_eq!(
            parse_digraph("2\n1 3\n"),
            Err(ParseError::Graph {
                line: 2,
                source: GraphError::VertexOutOfRange { vertex: 3, n: 2 }
            })
        );
        assert_eq!(
            parse_digraph("2\n1 2\n1 2\n"),
            Err(ParseError::Graph {
                line: 3,
                source: GraphError::DuplicateEdge(Edge::new(1, 2))
            })
        );
        for bad in ["", "x\n", "2\n1  2\n", "2\n1,2\n", "2\n-1 2\n", "2\n1 2 3\n"] {
            assert!(
                matches!(parse_digraph(bad), Err(ParseError::Malformed { .. })),
                "{bad:?}"
            );
        }
        assert_eq!(parse_digraph("3\n1 2\n2 x\n").unwrap_err().line(), 3);
        assert!(matches!(
            parse_digraph("0\n"),
            Err(ParseError::Graph {
                source: GraphError::NoVertices,
                ..
            })
        ));
    }
    use alloc::collections::BTreeSet;

    fn ms(s: &str) -> EdgeMultiset {
        s.parse().unwrap()
    }

    fn triangle() -> Digraph {
        Digraph::new(3, [(1, 2), (2, 3), (3, 1)]).unwrap()
    }

    fn two_disjoint_cycles() -> Digraph {
        Digraph::new(7, [(1, 2), (2, 3), (3, 4), (4, 1), (5, 6), (6, 7), (7, 5)]).unwrap()
    }

    #[test]
    fn construction_errors() {
        assert_eq!(Digraph::new(0, [(1, 1)]), Err(GraphError::NoVertices));
        assert_eq!(
            Digraph::new(2, [(1, 3)]),
            Err(GraphError::VertexOutOfRange { vertex: 3, n: 2 })
        );
        assert_eq!(
            Digraph::new(2, [(1, 2), (1, 2)]),
            Err(GraphError::DuplicateEdge(Edge::new(1, 2)))
        );
    }

    #[test]
    fn triangle_has_one_cycle() {
        assert_eq!(simple_cycles(&triangle()), [ms("1>2,2>3,3>1")]);
    }

    #[test]
    fn disjoint_cycles_graph_has_two_cycles() {
        let cycles = simple_cycles(&two_disjoint_cycles());
        assert_eq!(cycles.len(), 2);
        assert!(cycles.contains(&ms("1>2,2>3,3>4,4>1")));
        assert!(cycles.contains(&ms("5>6,6>7,7>5")));
    }

    #[test]
    fn loops_and_backtrack_are_cycles() {
        let g = Digraph::new(2, [(1, 2), (2, 1), (1, 1), (2, 2)]).unwrap();
        let got: BTreeSet<_> = simple_cycles(&g).into_iter().collect();
        let want: BTreeSet<_> = [ms("1>1"), ms("2>2"), ms("1>2,2>1")].into_iter().collect();
        assert_eq!(got, want);
    }

    #[test]
    fn complete_digraph_cycle_count() {
        // K4 with loops: 4 loops + 6 two-cycles + 8 three-cycles + 6 four-cycles.
        let edges: Vec<(usize, usize)> = (1..=4).flat_map(|i| (1..=4).map(move |j| (i, j))).collect();
        let g = Digraph::new(4, edges).unwrap();
        assert_eq!(simple_cycles(&g).len(), 24);
    }

    #[test]
    fn empty_length_gives_trivial_hike() {
        assert_eq!(enumerate_hikes(&triangle(), 0, None), [EdgeMultiset::one()]);
        assert_eq!(enumerate_hikes(&triangle(), 0, Some((1, 1))), [EdgeMultiset::one()]);
        assert!(enumerate_hikes(&triangle(), 0, Some((1, 2))).is_empty());
    }

    #[test]
    fn covering_hike_of_disjoint_cycles() {
        let hikes = enumerate_hikes(&two_disjoint_cycles(), 7, Some((1, 1)));
        assert_eq!(hikes, [ms("1>2,2>3,3>4,4>1,5>6,6>7,7>5")]);
    }

    #[test]
    fn triangle_paths() {
        assert_eq!(enumerate_hikes(&triangle(), 2, Some((1, 3))), [ms("1>2,2>3")]);
    }

    #[test]
    fn self_avoiding_examples() {
        let two_cycles = Digraph::new(5, [(1, 2), (2, 3), (3, 1), (2, 4), (4, 5), (5, 2)]).unwrap();
        assert_eq!(enumerate_self_avoiding_hikes(&two_cycles, 3, 1, 1), [ms("1>2,2>3,3>1")]);
        assert_eq!(enumerate_self_avoiding_hikes(&two_cycles, 3, 2, 2).len(), 2);

        let path_and_cycle = Digraph::new(5, [(1, 2), (3, 4), (4, 5), (5, 3)]).unwrap();
        assert_eq!(
            enumerate_self_avoiding_hikes(&path_and_cycle, 4, 1, 2),
            [ms("1>2,3>4,4>5,5>3")]
        );
        for ell in 6..9 {
            assert!(enumerate_self_avoiding_hikes(&path_and_cycle, ell, 1, 2).is_empty());
        }
    }

    #[test]
    fn output_is_sorted_and_duplicate_free() {
        let edges: Vec<(usize, usize)> = (1..=3).flat_map(|i| (1..=3).map(move |j| (i, j))).collect();
        let g = Digraph::new(3, edges).unwrap();
        let hikes = enumerate_hikes(&g, 4, None);
        let texts: Vec<_> = hikes.iter().map(|m| m.to_string()).collect();
        let mut sorted = texts.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(texts, sorted);
        assert!(hikes.iter().all(|h| g.hosts(h) && h.degree() == 4));
    }
}
