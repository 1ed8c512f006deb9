use std::collections::BTreeSet;

use hikes_core::charpoly::{
    inverse_power_identity, m_tilde_ell, phi_by_beta, phi_by_compositions, psi_by_trace_recursion,
    psi_sequence_by_cycles,
};
use hikes_core::graph::{enumerate_hikes, simple_cycles};
use hikes_core::poset::{
    beta_closed_form, classify, count_representations, dirichlet_convolve, stats, Delta, HikeClass, IncidenceFunction,
    MuIJ, Walks,
};
use hikes_core::random::random_digraph;
use hikes_core::{Digraph, Edge, EdgeMultiset, PolyMatrix, Polynomial};
use num_bigint::BigInt;
use proptest::prelude::*;

fn small_polynomial() -> impl Strategy<Value = Polynomial> {
    let term = (prop::collection::vec((1usize..=3, 1usize..=3), 0..3), -3i64..=3);
    prop::collection::vec(term, 0..4).prop_map(|terms| {
        Polynomial::from_terms(
            terms
                .into_iter()
                .map(|(edges, c)| (EdgeMultiset::from_edges(edges), BigInt::from(c))),
        )
    })
}

fn digraph(max_n: usize) -> impl Strategy<Value = Digraph> {
    (1..=max_n, any::<u64>()).prop_map(|(n, seed)| random_digraph(n, 0.5, seed))
}

fn multiset(max_vertex: usize, max_len: usize) -> impl Strategy<Value = EdgeMultiset> {
    prop::collection::vec((1..=max_vertex, 1..=max_vertex), 0..=max_len).prop_map(EdgeMultiset::from_edges)
}

/// Closed hikes built as products of simple cycles of a random graph.
fn closed_hike() -> impl Strategy<Value = EdgeMultiset> {
    (digraph(4), prop::collection::vec(any::<prop::sample::Index>(), 0..4)).prop_map(|(g, picks)| {
        let cycles = simple_cycles(&g);
        picks
            .iter()
            .filter(|_| !cycles.is_empty())
            .fold(EdgeMultiset::one(), |acc, idx| {
                acc.mul(&cycles[idx.index(cycles.len())])
            })
    })
}

/// Every simple cycle by brute force over vertex sequences starting at their
/// smallest vertex.
fn brute_force_cycles(g: &Digraph) -> BTreeSet<EdgeMultiset> {
    fn extend(g: &Digraph, path: &mut Vec<usize>, out: &mut BTreeSet<EdgeMultiset>) {
        let (start, last) = (path[0], *path.last().unwrap());
        if g.has_edge(last, start) {
            let edges = path
                .windows(2)
                .map(|w| Edge::new(w[0], w[1]))
                .chain([Edge::new(last, start)]);
            out.insert(EdgeMultiset::from_edges(edges));
        }
        for next in start + 1..=g.n_vertices() {
            if !path.contains(&next) && g.has_edge(last, next) {
                path.push(next);
                extend(g, path, out);
                path.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    for v in 1..=g.n_vertices() {
        extend(g, &mut vec![v], &mut out);
    }
    out
}

/// Whether `m` splits into simple cycles, by removing a cycle through its
/// smallest edge in every possible way.
fn splits_into_cycles(m: &EdgeMultiset) -> bool {
    let Some(first) = m.edges().next() else { return true };
    let mut found = false;
    let mut path = vec![first.tail, first.head];
    fn close(m: &EdgeMultiset, path: &mut Vec<usize>, found: &mut bool) {
        if *found {
            return;
        }
        let (start, last) = (path[0], *path.last().unwrap());
        let cycle = |path: &[usize]| {
            let closing = if path.len() == 1 {
                vec![Edge::new(start, start)]
            } else {
                vec![Edge::new(last, start)]
            };
            let edges = path.windows(2).map(|w| Edge::new(w[0], w[1])).chain(closing);
            EdgeMultiset::from_edges(edges)
        };
        if last == start {
            // A loop.
            let c = EdgeMultiset::from_edge(Edge::new(start, start));
            if let Some(rest) = m.divide(&c) {
                *found |= splits_into_cycles(&rest);
            }
            return;
        }
        if let Some(rest) = m.divide(&cycle(path)) {
            if splits_into_cycles(&rest) {
                *found = true;
                return;
            }
        }
        for e in m.edges() {
            if e.tail == last && e.head != start && !path.contains(&e.head) {
                path.push(e.head);
                close(m, path, found);
                path.pop();
            }
        }
    }
    if first.is_loop() {
        path.pop();
        path.push(first.tail);
    }
    close(m, &mut path, &mut found);
    found
}

/// Independent hike test: `m` is a simple path from `v_i` to `v_j` times
/// simple cycles (closed when the path is empty), found by search.
fn factorization(m: &EdgeMultiset) -> HikeClass {
    if splits_into_cycles(m) {
        return HikeClass::Closed;
    }
    let vertices = m.vertices();
    for &i in &vertices {
        let mut hit = None;
        let mut path = vec![i];
        fn walk(m: &EdgeMultiset, path: &mut Vec<usize>, hit: &mut Option<(usize, usize)>) {
            if hit.is_some() {
                return;
            }
            if path.len() > 1 {
                let p = EdgeMultiset::from_edges(path.windows(2).map(|w| Edge::new(w[0], w[1])));
                if let Some(rest) = m.divide(&p) {
                    if splits_into_cycles(&rest) {
                        *hit = Some((path[0], *path.last().unwrap()));
                        return;
                    }
                }
            }
            let last = *path.last().unwrap();
            for e in m.edges() {
                if e.tail == last && !path.contains(&e.head) {
                    path.push(e.head);
                    walk(m, path, hit);
                    path.pop();
                }
            }
        }
        walk(m, &mut path, &mut hit);
        if let Some((source, target)) = hit {
            return HikeClass::Open { source, target };
        }
    }
    HikeClass::NotAHike
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polynomial_product_is_associative_and_commutative(a in small_polynomial(), b in small_polynomial(), c in small_polynomial()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn matrix_powers_add_exponents(g in digraph(5), a in 0usize..=3, b in 0usize..=3) {
        let w = PolyMatrix::adjacency(&g);
        prop_assert_eq!(w.power(a + b), &w.power(a) * &w.power(b));
    }

    #[test]
    fn adjugate_inverts_up_to_determinant(g in digraph(4)) {
        let b = PolyMatrix::adjacency(&g);
        let det = b.determinant().unwrap();
        let scaled = PolyMatrix::identity(g.n_vertices()).scale(&det);
        let adj = b.adjugate().unwrap();
        prop_assert_eq!(&adj * &b, scaled.clone());
        prop_assert_eq!(&b * &adj, scaled);
    }

    #[test]
    fn classification_matches_factorization_search(m in multiset(4, 6)) {
        prop_assert_eq!(classify(&m), factorization(&m), "{}", m);
    }

    #[test]
    fn enumerated_hikes_factorize(g in digraph(4), ell in 0usize..=5) {
        for h in enumerate_hikes(&g, ell, None) {
            prop_assert_eq!(classify(&h), factorization(&h), "{}", h);
        }
    }

    #[test]
    fn johnson_matches_brute_force(g in digraph(6)) {
        let found: BTreeSet<_> = simple_cycles(&g).into_iter().collect();
        prop_assert_eq!(found, brute_force_cycles(&g));
    }

    #[test]
    fn open_hikes_close_with_the_reverse_edge(g in digraph(4), ell in 0usize..=4, i in 1usize..=4, j in 1usize..=4) {
        prop_assume!(i != j && i <= g.n_vertices() && j <= g.n_vertices() && g.has_edge(j, i));
        let open: BTreeSet<_> = enumerate_hikes(&g, ell, Some((i, j))).into_iter().collect();
        let closing: BTreeSet<_> = enumerate_hikes(&g, ell, None)
            .into_iter()
            .filter(|m| classify(&m.with_edge(Edge::new(j, i))) == HikeClass::Closed)
            .collect();
        prop_assert_eq!(open, closing);
    }

    #[test]
    fn beta_grows_under_multiplication(c1 in closed_hike(), c2 in closed_hike()) {
        let product = beta_closed_form(&c1.mul(&c2)).unwrap();
        let (b1, b2) = (beta_closed_form(&c1).unwrap(), beta_closed_form(&c2).unwrap());
        prop_assert!(product >= b1.clone().max(b2.clone()));
        let disjoint = c1.vertices().iter().all(|v| !c2.touches(*v));
        if disjoint {
            prop_assert_eq!(product, b1 * b2);
        }
    }

    #[test]
    fn open_walks_have_one_endpoint_pair(m in multiset(4, 6)) {
        if let HikeClass::Open { .. } = classify(&m) {
            let nonzero = (1..=4)
                .flat_map(|i| (1..=4).map(move |j| (i, j)))
                .filter(|&(i, j)| count_representations(&m, i, j) != 0u32.into())
                .count();
            prop_assert!(nonzero <= 1);
        }
    }

    #[test]
    fn delta_is_the_convolution_identity(m in multiset(4, 5), i in 1usize..=4, j in 1usize..=4) {
        prop_assume!(classify(&m) != HikeClass::NotAHike);
        prop_assert_eq!(dirichlet_convolve(&Delta, &Walks(i, j), &m).unwrap(), Walks(i, j).eval(&m).unwrap());
        prop_assert_eq!(dirichlet_convolve(&Delta, &MuIJ(i, j), &m).unwrap(), MuIJ(i, j).eval(&m).unwrap());
    }

    #[test]
    fn signed_self_avoiding_matrix_support(g in digraph(5), ell in 1usize..=5) {
        let tilde = m_tilde_ell(&g, ell);
        for (r, c, p) in tilde.nonzero_entries() {
            for (h, coeff) in p.terms() {
                let s = stats(h).unwrap();
                prop_assert!(s.self_avoiding);
                let expected = if r == c {
                    classify(h) == HikeClass::Closed && h.touches(r + 1)
                } else {
                    classify(h) == HikeClass::Open { source: r + 1, target: c + 1 }
                };
                prop_assert!(expected, "{} in entry ({}, {})", h, r + 1, c + 1);
                let sign = if s.components.is_multiple_of(2) { 1 } else { -1 };
                prop_assert_eq!(coeff, &BigInt::from(sign));
            }
        }
    }

    #[test]
    fn trace_recursion_agrees_with_cycles(g in digraph(6)) {
        prop_assert_eq!(psi_by_trace_recursion(&g).unwrap(), psi_sequence_by_cycles(&g));
    }

    #[test]
    fn powers_expand_through_phi(g in digraph(5), ell in 0usize..=6) {
        let report = inverse_power_identity(&g, ell);
        prop_assert!(report.holds(), "{:?}", report.difference);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn phi_by_beta_matches_compositions(g in digraph(5)) {
        let psi = psi_sequence_by_cycles(&g);
        for k in 0..=8 {
            prop_assert_eq!(phi_by_beta(&g, k), phi_by_compositions(&psi, k), "k = {}", k);
        }
    }
}

#[test]
fn factorization_oracle_recognizes_each_class() {
    let ms = |s: &str| s.parse::<EdgeMultiset>().unwrap();
    assert_eq!(factorization(&ms("1>2,2>3,3>1,2>4,4>5,5>2")), HikeClass::Closed);
    assert_eq!(factorization(&ms("1>1^2,2>2")), HikeClass::Closed);
    assert_eq!(
        factorization(&ms("1>2,3>4,4>5,5>3")),
        HikeClass::Open { source: 1, target: 2 }
    );
    assert_eq!(
        factorization(&ms("1>1^2,1>2,2>3,3>2")),
        HikeClass::Open { source: 1, target: 2 }
    );
    assert_eq!(factorization(&ms("1>2,3>4")), HikeClass::NotAHike);
    assert_eq!(factorization(&ms("1>2^2")), HikeClass::NotAHike);
}
