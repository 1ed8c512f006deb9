//! Runs identity suites on one graph and assembles a report.

use std::fmt;
use std::thread;
use std::time::Instant;

use hikes_core::identities::{run_identity, Corruption, Identity, IdentityError, Kernels, Mismatch, SuiteConfig};
use hikes_core::Digraph;
use serde::{Deserialize, Serialize};

use crate::json::{monomial_to_json, FactorJson};

/// Where the graph came from, enough to rebuild it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GraphSource {
    File { path: String },
    Random { n: usize, p: f64, seed: u64 },
}

impl fmt::Display for GraphSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSource::File { path } => f.write_str(path),
            GraphSource::Random { n, p, seed } => write!(f, "--random {n} {p} --seed {seed}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub source: GraphSource,
    pub vertices: usize,
    pub edges: Vec<[usize; 2]>,
}

impl GraphSummary {
    pub fn new(g: &Digraph, source: GraphSource) -> Self {
        GraphSummary {
            source,
            vertices: g.n_vertices(),
            edges: g.edges().iter().map(|e| [e.tail, e.head]).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub check: String,
    pub degree: usize,
    /// Matrix entry or vertex pair, 1-based, when the check has one.
    pub entry: Option<[usize; 2]>,
    pub monomial: Vec<FactorJson>,
    /// Canonical text of `monomial`.
    pub monomial_text: String,
    pub expected: String,
    pub actual: String,
}

impl From<&Mismatch> for Counterexample {
    fn from(m: &Mismatch) -> Self {
        Counterexample {
            check: m.check.to_string(),
            degree: m.degree,
            entry: m.entry.map(|(i, j)| [i, j]),
            monomial: monomial_to_json(&m.monomial),
            monomial_text: m.monomial.to_string(),
            expected: m.expected.to_string(),
            actual: m.actual.to_string(),
        }
    }
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at degree {}", self.check, self.degree)?;
        if let Some([i, j]) = self.entry {
            write!(f, ", entry ({i},{j})")?;
        }
        write!(
            f,
            ", monomial {}: expected {}, got {}",
            self.monomial_text, self.expected, self.actual
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub name: String,
    pub status: Status,
    pub instances: u64,
    pub wall_time_us: u64,
    pub counterexample: Option<Counterexample>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub graph: GraphSummary,
    pub max_len: usize,
    pub corruption: Option<String>,
    pub passed: bool,
    /// Sorted by name.
    pub identities: Vec<IdentityReport>,
}

impl VerifyReport {
    pub fn failures(&self) -> usize {
        self.identities.iter().filter(|r| r.status == Status::Fail).count()
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = &self.graph;
        writeln!(
            f,
            "graph: {} ({} vertices, {} edges)",
            g.source,
            g.vertices,
            g.edges.len()
        )?;
        write!(f, "max length: {}", self.max_len)?;
        if let Some(c) = &self.corruption {
            write!(f, ", corrupted kernel: {c}")?;
        }
        writeln!(f)?;
        for r in &self.identities {
            let status = match r.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
            };
            write!(
                f,
                "{status} {} ({} instances, {:.1} ms)",
                r.name,
                r.instances,
                r.wall_time_us as f64 / 1e3
            )?;
            if let Some(c) = &r.counterexample {
                write!(f, ": {c}")?;
            }
            writeln!(f)?;
        }
        match self.failures() {
            0 => write!(f, "{0} of {0} identities hold", self.identities.len()),
            k => write!(f, "{k} of {} identities fail", self.identities.len()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub max_len: usize,
    pub identities: Vec<Identity>,
    pub corruption: Option<Corruption>,
}

/// Runs each selected suite on its own thread.
pub fn verify(g: &Digraph, source: GraphSource, options: &VerifyOptions) -> Result<VerifyReport, IdentityError> {
    let config = SuiteConfig {
        max_len: options.max_len,
        kernels: options.corruption.map_or_else(Kernels::default, Corruption::kernels),
    };
    let mut identities = options.identities.clone();
    identities.sort();
    identities.dedup();

    let outcomes = thread::scope(|s| {
        let handles: Vec<_> = identities
            .iter()
            .map(|&id| {
                s.spawn(move || {
                    let start = Instant::now();
                    run_identity(id, g, &config).map(|o| (o, start.elapsed()))
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("identity suite panicked"))
            .collect::<Result<Vec<_>, _>>()
    })?;

    let mut reports: Vec<IdentityReport> = outcomes
        .into_iter()
        .map(|(o, elapsed)| IdentityReport {
            name: o.identity.name().to_string(),
            status: if o.passed() { Status::Pass } else { Status::Fail },
            instances: o.instances,
            wall_time_us: u64::try_from(elapsed.as_micros()).unwrap_or(u64::MAX),
            counterexample: o.counterexample.as_ref().map(Counterexample::from),
        })
        .collect();
    reports.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(VerifyReport {
        graph: GraphSummary::new(g, source),
        max_len: options.max_len,
        corruption: options.corruption.map(|c| c.name().to_string()),
        passed: reports.iter().all(|r| r.status == Status::Pass),
        identities: reports,
    })
}
