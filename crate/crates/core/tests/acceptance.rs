//! Acceptance gate: golden values, exhaustive identity suites on random
//! digraphs, and negative controls. Prints one PASS/FAIL line per criterion
//! and exits non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use hikes_core::identities::{run_all, run_identity, Corruption, Identity, SuiteConfig, SuiteOutcome};
use hikes_core::poset::{
    beta_by_decompositions, beta_by_inversion, beta_closed_form, closed_divisors, count_representations,
    dirichlet_convolve, dirichlet_terms, mu, mu_ij, self_avoiding_decomposition_sum, self_avoiding_decomposition_terms,
    Beta, Mu, MuIJ, Walks,
};
use hikes_core::random::{random_digraph_from, Lcg};
use hikes_core::{Digraph, Edge, EdgeMultiset};
use num_bigint::{BigInt, BigUint};

const SEED: u64 = 20240601;
const GRAPHS: usize = 60;
const MAX_LEN: usize = 6;

struct Gate {
    failures: usize,
}

impl Gate {
    fn report(&mut self, name: &str, result: Result<String, String>) {
        match result {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(detail) => {
                self.failures += 1;
                println!("FAIL {name}: {detail}");
            }
        }
    }
}

fn ms(s: &str) -> EdgeMultiset {
    s.parse().expect("hike literal")
}

fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

fn uint(v: u64) -> BigUint {
    BigUint::from(v)
}

/// Collects the first few failed equalities of a criterion.
#[derive(Default)]
struct Expect {
    checks: usize,
    errors: Vec<String>,
}

impl Expect {
    fn eq<T: PartialEq + std::fmt::Display>(&mut self, what: impl std::fmt::Display, actual: T, expected: T) {
        self.checks += 1;
        if actual != expected && self.errors.len() < 5 {
            self.errors.push(format!("{what} = {actual}, expected {expected}"));
        }
    }

    fn finish(self) -> Result<String, String> {
        if self.errors.is_empty() {
            Ok(format!("{} equalities", self.checks))
        } else {
            Err(self.errors.join("; "))
        }
    }
}

fn f(h: &EdgeMultiset, i: usize, j: usize) -> BigUint {
    count_representations(h, i, j)
}

fn all_betas(e: &mut Expect, label: &str, h: &EdgeMultiset, expected: u64) {
    e.eq(
        format!("beta({label}) closed form"),
        beta_closed_form(h).unwrap(),
        uint(expected),
    );
    e.eq(
        format!("beta({label}) by inversion"),
        beta_by_inversion(h).unwrap(),
        int(expected as i64),
    );
    e.eq(
        format!("beta({label}) by decompositions"),
        beta_by_decompositions(h).unwrap(),
        int(expected as i64),
    );
}

fn disjoint_cycles() -> Result<String, String> {
    let h = ms("1>2,2>3,3>4,4>1,5>6,6>7,7>5");
    let mut e = Expect::default();
    for i in 1..=7 {
        for j in 1..=7 {
            e.eq(format!("f_{i}{j}(h)"), f(&h, i, j), uint(0));
        }
    }
    e.eq("mu(h)", mu(&h).unwrap(), 1);
    all_betas(&mut e, "h", &h, 1);
    e.eq(
        "(mu * f_11)(h)",
        dirichlet_convolve(&Mu, &Walks(1, 1), &h).unwrap(),
        int(0),
    );
    e.eq(
        "(beta * mu_11)(h)",
        dirichlet_convolve(&Beta, &MuIJ(1, 1), &h).unwrap(),
        int(0),
    );
    e.eq("closed divisors of h", closed_divisors(&h).unwrap().len(), 4);
    e.finish()
}

fn shared_vertex() -> Result<String, String> {
    let h = ms("1>2,2>3,3>1,2>4,4>5,5>2");
    let mut e = Expect::default();
    e.eq("f_22(h)", f(&h, 2, 2), uint(2));
    for i in [1, 3, 4, 5] {
        e.eq(format!("f_{i}{i}(h)"), f(&h, i, i), uint(1));
    }
    e.eq("mu(h)", mu(&h).unwrap(), 0);
    all_betas(&mut e, "h", &h, 2);
    e.eq(
        "(mu * f_22)(h)",
        dirichlet_convolve(&Mu, &Walks(2, 2), &h).unwrap(),
        int(0),
    );
    e.eq(
        "(beta * mu_11)(h)",
        dirichlet_convolve(&Beta, &MuIJ(1, 1), &h).unwrap(),
        int(1),
    );
    e.finish()
}

fn two_squares() -> Result<String, String> {
    let h = ms("1>2,2>3,3>4,4>1,6>2,2>5,5>4,4>6");
    let mut e = Expect::default();
    for i in [1, 3, 5, 6] {
        e.eq(format!("f_{i}{i}(h)"), f(&h, i, i), uint(2));
    }
    for i in [2, 4] {
        e.eq(format!("f_{i}{i}(h)"), f(&h, i, i), uint(4));
    }
    all_betas(&mut e, "h", &h, 4);
    e.eq(
        "(mu * f_11)(h)",
        dirichlet_convolve(&Mu, &Walks(1, 1), &h).unwrap(),
        int(0),
    );
    e.eq(
        "(beta * mu_22)(h)",
        dirichlet_convolve(&Beta, &MuIJ(2, 2), &h).unwrap(),
        int(4),
    );
    e.finish()
}

fn braided() -> Result<String, String> {
    let h = ms("1>2,2>3,3>5,5>6,6>4,4>1,2>5,5>4,4>2");
    let mut e = Expect::default();
    for i in [1, 3, 6] {
        e.eq(format!("f_{i}{i}(h)"), f(&h, i, i), uint(4));
    }
    for i in [2, 4, 5] {
        e.eq(format!("f_{i}{i}(h)"), f(&h, i, i), uint(8));
    }
    all_betas(&mut e, "h", &h, 8);
    e.eq(
        "non-trivial closed divisors of h",
        closed_divisors(&h).unwrap().len() - 2,
        8,
    );

    // mu_22(h) = 8 - 1 - 1 - 1 - 1 - 1 - 1 - 1 - 1 = 0
    let mut terms: Vec<BigInt> = dirichlet_terms(&Mu, &Walks(2, 2), &h)
        .unwrap()
        .into_iter()
        .map(|(_, v)| v)
        .collect();
    terms.sort();
    let mut printed = vec![int(-1); 8];
    printed.push(int(8));
    e.eq("terms of (mu * f_22)(h)", format!("{terms:?}"), format!("{printed:?}"));
    e.eq("(mu * f_22)(h)", terms.iter().sum::<BigInt>(), int(0));
    e.eq("mu_22(h)", mu_ij(&h, 2, 2).unwrap(), 0);

    // f_11(h) = 8 - 1 - 1 - 1 - 1 = 4
    let mut terms: Vec<BigInt> = dirichlet_terms(&Beta, &MuIJ(1, 1), &h)
        .unwrap()
        .into_iter()
        .map(|(_, v)| v)
        .collect();
    terms.sort();
    let mut printed = vec![int(-1); 4];
    printed.push(int(8));
    e.eq(
        "terms of (beta * mu_11)(h)",
        format!("{terms:?}"),
        format!("{printed:?}"),
    );
    e.eq("(beta * mu_11)(h)", terms.iter().sum::<BigInt>(), int(4));
    e.finish()
}

/// Two opposite cycles crossing at every vertex of `1..=n`, drawn as `n`
/// consecutive back-and-forth pairs.
fn crossing_cycles(n: usize) -> EdgeMultiset {
    EdgeMultiset::from_edges((1..=n).flat_map(|k| {
        let next = k % n + 1;
        [Edge::new(k, next), Edge::new(next, k)]
    }))
}

fn binomial(n: u64, k: u64) -> i64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1i64, |acc, t| acc * (n - t) as i64 / (t + 1) as i64)
}

fn bidirected_ring() -> Result<String, String> {
    let mut e = Expect::default();
    for n in 3..=8usize {
        let h = crossing_cycles(n);
        for i in 1..=n {
            e.eq(format!("n={n}: f_{i}{i}(h)"), f(&h, i, i), uint(2 * n as u64));
            e.eq(
                format!("n={n}: (beta * mu_{i}{i})(h)"),
                dirichlet_convolve(&Beta, &MuIJ(i, i), &h).unwrap(),
                int(2 * n as i64),
            );
            e.eq(
                format!("n={n}: (mu * f_{i}{i})(h)"),
                dirichlet_convolve(&Mu, &Walks(i, i), &h).unwrap(),
                int(0),
            );
            for j in 1..=n {
                e.eq(format!("n={n}: mu_{i}{j}(h)"), mu_ij(&h, i, j).unwrap(), 0);
                if i != j {
                    e.eq(format!("n={n}: f_{i}{j}(h)"), f(&h, i, j), uint(0));
                }
            }
        }
        e.eq(format!("n={n}: mu(h)"), mu(&h).unwrap(), 0);
        all_betas(&mut e, &format!("h, n={n}"), &h, 1 << n);
    }
    for n in 2..=10u64 {
        let sum: i64 = (0..=(n - 1) / 2)
            .map(|p| binomial(n - p - 1, p) * if p % 2 == 0 { 1 } else { -1 } * (1i64 << (n - 2 * p)))
            .sum();
        e.eq(format!("n={n}: binomial sum"), sum, 2 * n as i64);
    }
    e.finish()
}

fn loops(n: usize) -> EdgeMultiset {
    EdgeMultiset::from_edges((1..=n).map(|k| Edge::new(k, k)))
}

fn loops_only() -> Result<String, String> {
    let mut e = Expect::default();
    for n in 2..=6 {
        let h = loops(n);
        all_betas(&mut e, &format!("h, n={n}"), &h, 1);
        for i in 1..=n {
            e.eq(
                format!("n={n}: decomposition sum (ii)={i}"),
                self_avoiding_decomposition_sum(&h, i, i).unwrap(),
                int(0),
            );
            e.eq(format!("n={n}: f_{i}{i}(h)"), f(&h, i, i), uint(0));
        }
    }
    e.finish()
}

fn ring_with_loops() -> Result<String, String> {
    let mut e = Expect::default();
    for n in 2..=6 {
        let c0 = EdgeMultiset::from_edges((1..=n).map(|k| Edge::new(k, k % n + 1)));
        let h = loops(n).mul(&c0);
        all_betas(&mut e, &format!("h, n={n}"), &h, 1 << n);
        for i in 1..=n {
            e.eq(
                format!("n={n}: decomposition sum ({i},{i})"),
                self_avoiding_decomposition_sum(&h, i, i).unwrap(),
                int(2),
            );
            e.eq(format!("n={n}: f_{i}{i}(h)"), f(&h, i, i), uint(2));
            let grouped: BTreeMap<EdgeMultiset, BigInt> = self_avoiding_decomposition_terms(&h, i, i)
                .unwrap()
                .into_iter()
                .collect();
            let by_cycle = grouped.get(&c0).cloned().unwrap_or_default();
            e.eq(format!("n={n}, i={i}: sub-sum with p = c0"), by_cycle, int(1));
            let by_loop = grouped
                .get(&EdgeMultiset::from_edge(Edge::new(i, i)))
                .cloned()
                .unwrap_or_default();
            e.eq(
                format!("n={n}, i={i}: sub-sum with p = w[i,i]"),
                by_loop,
                int(1 << (n - 1)),
            );
            let quotient = h.divide(&EdgeMultiset::from_edge(Edge::new(i, i))).unwrap();
            e.eq(
                format!("n={n}, i={i}: beta(h / w[i,i])"),
                beta_closed_form(&quotient).unwrap(),
                uint(1 << (n - 1)),
            );
        }
    }
    e.finish()
}

fn hub_walk() -> Result<String, String> {
    let w = ms("1>9,9>3,3>2,2>9,9>5,5>4,4>9,9>7,7>6,6>9,9>8");
    let c = ms("9>5,5>4,4>9,9>7,7>6,6>9");
    let mut e = Expect::default();
    e.eq("length of w", w.degree(), 11);
    e.eq("f_18(w)", f(&w, 1, 8), uint(6));
    e.eq("f_99(c)", f(&c, 9, 9), uint(2));
    for i in [4, 5, 6, 7] {
        e.eq(format!("f_{i}{i}(c)"), f(&c, i, i), uint(1));
    }
    e.finish()
}

type Check = fn() -> Result<String, String>;

fn random_graphs() -> Vec<Digraph> {
    let mut rng = Lcg::new(SEED);
    (0..GRAPHS)
        .map(|k| random_digraph_from([3, 4, 5, 5][k % 4], 0.5, &mut rng))
        .collect()
}

/// Runs every suite on every graph, fanning graphs out over threads.
fn suites_on(graphs: &[Digraph], config: &SuiteConfig) -> Vec<Vec<SuiteOutcome>> {
    let workers = std::thread::available_parallelism()
        .map_or(4, |n| n.get())
        .min(graphs.len().max(1));
    let chunk = graphs.len().div_ceil(workers);
    std::thread::scope(|scope| {
        let handles: Vec<_> = graphs
            .chunks(chunk.max(1))
            .map(|part| {
                scope.spawn(move || {
                    part.iter()
                        .map(|g| run_all(g, config).expect("suite error"))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    })
}

fn property_suites(gate: &mut Gate) -> Duration {
    let graphs = random_graphs();
    let start = Instant::now();
    let config = SuiteConfig {
        max_len: MAX_LEN,
        ..SuiteConfig::default()
    };
    let outcomes = suites_on(&graphs, &config);
    let elapsed = start.elapsed();
    for (idx, identity) in Identity::ALL.into_iter().enumerate() {
        let mut instances = 0;
        let mut failure = None;
        for (g, per_graph) in graphs.iter().zip(&outcomes) {
            let outcome = &per_graph[idx];
            instances += outcome.instances;
            if let (None, Some(m)) = (&failure, &outcome.counterexample) {
                failure = Some(format!(
                    "graph with edges {:?}: {m}",
                    g.edges().iter().map(ToString::to_string).collect::<Vec<_>>()
                ));
            }
        }
        let result = match failure {
            None => Ok(format!("{} graphs, {instances} checks", graphs.len())),
            Some(f) => Err(f),
        };
        gate.report(&format!("properties/{identity}"), result);
    }
    let hikes_checked = graphs.iter().all(|g| g.n_vertices() <= 5);
    gate.report(
        "properties/coverage",
        if graphs.len() >= 50 && hikes_checked {
            Ok(format!(
                "{} digraphs, N <= 5, p = 0.5, seed {SEED}, hikes of length <= {MAX_LEN}",
                graphs.len()
            ))
        } else {
            Err(format!("only {} digraphs", graphs.len()))
        },
    );
    elapsed
}

fn negative_controls(gate: &mut Gate) {
    let graphs = random_graphs();
    for corruption in Corruption::ALL {
        let config = SuiteConfig {
            max_len: MAX_LEN,
            kernels: corruption.kernels(),
        };
        let mut found = None;
        'search: for g in &graphs {
            for identity in Identity::ALL {
                let outcome = run_identity(identity, g, &config).expect("suite error");
                if let Some(m) = outcome.counterexample {
                    found = Some((identity, m));
                    break 'search;
                }
            }
        }
        let result = match found {
            Some((identity, m)) if !m.monomial.is_empty() => Ok(format!("{identity} fails: {m}")),
            Some((identity, m)) => Err(format!("{identity} fails without a monomial witness: {m}")),
            None => Err("no suite noticed the corruption".into()),
        };
        gate.report(&format!("negative-control/{}", corruption.name()), result);
    }
}

fn main() -> ExitCode {
    let mut gate = Gate { failures: 0 };

    let start = Instant::now();
    let golden: [(&str, Check); 8] = [
        ("disjoint-cycles", disjoint_cycles),
        ("shared-vertex", shared_vertex),
        ("two-squares", two_squares),
        ("braided", braided),
        ("bidirected-ring", bidirected_ring),
        ("loops-only", loops_only),
        ("ring-with-loops", ring_with_loops),
        ("hub-walk", hub_walk),
    ];
    for (name, check) in golden {
        let t = Instant::now();
        let result = check().map(|detail| format!("{detail} in {:.1?}", t.elapsed()));
        gate.report(&format!("golden/{name}"), result);
    }
    let golden = start.elapsed();
    gate.report(
        "golden/time",
        if golden < Duration::from_secs(1) {
            Ok(format!("{golden:.2?} < 1 s"))
        } else {
            Err(format!("{golden:.2?} >= 1 s"))
        },
    );

    let elapsed = property_suites(&mut gate);
    gate.report(
        "properties/time",
        if elapsed < Duration::from_secs(60) {
            Ok(format!("{elapsed:.2?} < 60 s"))
        } else {
            Err(format!("{elapsed:.2?} >= 60 s"))
        },
    );

    negative_controls(&mut gate);

    if gate.failures == 0 {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} criteria failed", gate.failures);
        ExitCode::FAILURE
    }
}
