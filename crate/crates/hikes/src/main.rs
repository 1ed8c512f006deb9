use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hikes::guard::{self, GuardError};
use hikes::json::{monomial_to_json, MatrixJson, PolynomialJson};
use hikes::verify::{verify, GraphSource, VerifyOptions};
use hikes::{load_graph, LoadError};
use hikes_core::charpoly::{m_ell, m_tilde_ell, phi_by_compositions, psi_by_cycles, psi_sequence_by_cycles};
use hikes_core::graph::enumerate_self_avoiding_hikes;
use hikes_core::identities::{Corruption, Identity, IdentityError};
use hikes_core::poset::{
    beta_closed_form, classify, closed_divisors, count_representations, mu, mu_ij, self_avoiding_decomposition_terms,
    HikeClass, PosetError,
};
use hikes_core::random::random_digraph;
use hikes_core::{Digraph, EdgeMultiset, MatrixError, PolyMatrix, Polynomial, VertexId};
use serde_json::{json, Value};

/// Exact walk and hike calculus on small digraphs.
#[derive(Parser)]
#[command(name = "hikes", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Lift the limits of 10 vertices, 20 edges and length 10.
    #[arg(long, global = true)]
    unsafe_large: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Coefficients ψ_k of det(λI - W), one per line.
    Psi {
        #[command(flatten)]
        graph: GraphArgs,
        /// Print only ψ_K.
        #[arg(long, value_name = "K")]
        k: Option<usize>,
    },
    /// Coefficients φ_k of 1/det(I - W), one per line.
    Phi {
        #[command(flatten)]
        graph: GraphArgs,
        /// Print only φ_K.
        #[arg(long, value_name = "K")]
        k: Option<usize>,
    },
    /// The self-avoiding hike matrix M^(ℓ), or its signed form with --tilde.
    Mell {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        tilde: bool,
    },
    /// The walk matrix W^ℓ, or one entry of it.
    Walks {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        ell: usize,
        #[command(flatten)]
        pair: Pair,
    },
    /// Self-avoiding hikes of length ℓ, for one vertex pair or all of them.
    Sah {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        ell: usize,
        #[command(flatten)]
        pair: Pair,
    },
    /// Evaluates a hike function on a literal such as "1>2,2>3^2".
    Eval {
        function: EvalFn,
        hike: String,
        #[command(flatten)]
        pair: Pair,
    },
    /// Runs identity suites over every hike up to a length bound.
    Verify {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = 6)]
        max_len: usize,
        /// Comma-separated suite names, or "all".
        #[arg(long, default_value = "all")]
        identities: String,
        #[arg(long, hide = true)]
        corrupt: Option<Corruption>,
    },
}

#[derive(Args)]
struct GraphArgs {
    /// Graph file: N on the first line, then one "i j" edge per line.
    #[arg(required_unless_present = "random")]
    graph: Option<PathBuf>,
    /// Random digraph with N vertices and edge probability P.
    #[arg(long, num_args = 2..=3, value_names = ["N", "P", "SEED"], conflicts_with = "graph")]
    random: Option<Vec<String>>,
    #[arg(long, requires = "random")]
    seed: Option<u64>,
}

#[derive(Args)]
struct Pair {
    #[arg(long = "from", value_name = "I")]
    from: Option<VertexId>,
    #[arg(long = "to", value_name = "J")]
    to: Option<VertexId>,
}

#[derive(Clone, Copy, ValueEnum)]
enum EvalFn {
    /// β(c) for a closed hike.
    Beta,
    /// μ(c) for a closed hike.
    Mu,
    /// f_ij(h), the number of walks from v_i to v_j using exactly h.
    F,
    /// μ_ij(h).
    Muij,
    /// Closed hikes dividing h.
    Divisors,
    /// Self-avoiding decomposition terms of h for the pair (i, j).
    Decomp,
}

enum Failure {
    Input(String),
    Guard(String),
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<PosetError> for Failure {
    fn from(e: PosetError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<GuardError> for Failure {
    fn from(e: GuardError) -> Self {
        Failure::Guard(e.to_string())
    }
}

impl From<IdentityError> for Failure {
    fn from(e: IdentityError) -> Self {
        match e {
            IdentityError::Matrix(MatrixError::DimensionTooLarge { .. }) => Failure::Guard(e.to_string()),
            e => Failure::Input(e.to_string()),
        }
    }
}

struct Session {
    json: bool,
    unsafe_large: bool,
}

impl Session {
    fn length(&self, what: &'static str, value: usize) -> Result<(), Failure> {
        if !self.unsafe_large {
            guard::check_length(what, value)?;
        }
        Ok(())
    }

    fn graph(&self, args: &GraphArgs) -> Result<(Digraph, GraphSource), Failure> {
        let (g, source) = match (&args.graph, &args.random) {
            (_, Some(values)) => {
                let (n, p, seed) = random_spec(values, args.seed)?;
                if n == 0 {
                    return Err(Failure::Input("--random needs at least one vertex".into()));
                }
                if n > guard::MAX_VERTICES && !self.unsafe_large {
                    return Err(GuardError::TooManyVertices { n }.into());
                }
                (random_digraph(n, p, seed), GraphSource::Random { n, p, seed })
            }
            (Some(path), None) => {
                let source = GraphSource::File {
                    path: path.display().to_string(),
                };
                (load_graph(path)?, source)
            }
            (None, None) => unreachable!("clap requires a graph or --random"),
        };
        if !self.unsafe_large {
            guard::check_graph(&g)?;
        }
        Ok((g, source))
    }

    /// Write errors (a closed pipe, typically) are ignored.
    fn print(&self, text: impl std::fmt::Display, value: Value) {
        let mut out = std::io::stdout().lock();
        let _ = if self.json {
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&value).expect("JSON values serialize")
            )
        } else {
            writeln!(out, "{text}")
        };
    }
}

fn random_spec(values: &[String], seed: Option<u64>) -> Result<(usize, f64, u64), Failure> {
    let bad = |what: &str, v: &str| Failure::Input(format!("--random: invalid {what} `{v}`"));
    let n = values[0].parse().map_err(|_| bad("vertex count", &values[0]))?;
    let p: f64 = values[1].parse().map_err(|_| bad("probability", &values[1]))?;
    if !(0.0..=1.0).contains(&p) {
        return Err(bad("probability", &values[1]));
    }
    let seed = match (values.get(2), seed) {
        (Some(_), Some(_)) => return Err(Failure::Input("give the seed either inline or with --seed".into())),
        (Some(v), None) => v.parse().map_err(|_| bad("seed", v))?,
        (None, s) => s.unwrap_or(0),
    };
    Ok((n, p, seed))
}

fn pair_in(pair: &Pair, n: Option<usize>) -> Result<Option<(VertexId, VertexId)>, Failure> {
    let (i, j) = match (pair.from, pair.to) {
        (None, None) => return Ok(None),
        (Some(i), Some(j)) => (i, j),
        _ => return Err(Failure::Input("--from and --to go together".into())),
    };
    for v in [i, j] {
        if v == 0 || n.is_some_and(|n| v > n) {
            return Err(Failure::Input(format!("vertex {v} is not in the graph")));
        }
    }
    Ok(Some((i, j)))
}

fn polys_json(ps: &[Polynomial]) -> Value {
    json!(ps.iter().map(PolynomialJson::from).collect::<Vec<_>>())
}

fn matrix_text(a: &PolyMatrix) -> String {
    let lines: Vec<String> = a
        .entries()
        .map(|(r, c, p)| format!("({},{}): {p}", r + 1, c + 1))
        .collect();
    lines.join("\n")
}

fn lines<T: std::fmt::Display>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join("\n")
}

fn coefficient_sequence(
    s: &Session,
    name: &str,
    n: usize,
    k: Option<usize>,
    coeff: impl Fn(usize) -> Polynomial,
) -> Result<(), Failure> {
    let degrees: Vec<usize> = match k {
        Some(k) => vec![k],
        None => (0..=n).collect(),
    };
    let polys: Vec<Polynomial> = degrees.iter().map(|&d| coeff(d)).collect();
    let value = match k {
        Some(k) => json!({ "k": k, name: PolynomialJson::from(&polys[0]) }),
        None => json!({ name: polys_json(&polys) }),
    };
    s.print(lines(&polys), value);
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    let s = Session {
        json: cli.json,
        unsafe_large: cli.unsafe_large,
    };
    match cli.command {
        Command::Psi { graph, k } => {
            let (g, _) = s.graph(&graph)?;
            let n = g.n_vertices();
            coefficient_sequence(&s, "psi", n, k, |d| psi_by_cycles(&g, d))?;
        }
        Command::Phi { graph, k } => {
            let (g, _) = s.graph(&graph)?;
            let n = g.n_vertices();
            s.length("k", k.unwrap_or(n))?;
            let psi = psi_sequence_by_cycles(&g);
            coefficient_sequence(&s, "phi", n, k, |d| phi_by_compositions(&psi, d))?;
        }
        Command::Mell { graph, ell, tilde } => {
            let (g, _) = s.graph(&graph)?;
            s.length("ell", ell)?;
            let a = if tilde { m_tilde_ell(&g, ell) } else { m_ell(&g, ell) };
            s.print(
                matrix_text(&a),
                json!({ "ell": ell, "tilde": tilde, "matrix": MatrixJson::from(&a) }),
            );
        }
        Command::Walks { graph, ell, pair } => {
            let (g, _) = s.graph(&graph)?;
            s.length("ell", ell)?;
            let pair = pair_in(&pair, Some(g.n_vertices()))?;
            let w = PolyMatrix::adjacency(&g).power(ell);
            match pair {
                Some((i, j)) => {
                    let p = w.get(i - 1, j - 1);
                    s.print(
                        format!("({i},{j}): {p}"),
                        json!({ "ell": ell, "from": i, "to": j, "poly": PolynomialJson::from(p) }),
                    );
                }
                None => s.print(matrix_text(&w), json!({ "ell": ell, "matrix": MatrixJson::from(&w) })),
            }
        }
        Command::Sah { graph, ell, pair } => {
            let (g, _) = s.graph(&graph)?;
            s.length("ell", ell)?;
            let n = g.n_vertices();
            let pairs: Vec<(VertexId, VertexId)> = match pair_in(&pair, Some(n))? {
                Some(p) => vec![p],
                None => (1..=n).flat_map(|i| (1..=n).map(move |j| (i, j))).collect(),
            };
            let single = pairs.len() == 1;
            let mut text = Vec::new();
            let mut rows = Vec::new();
            for (i, j) in pairs {
                for h in enumerate_self_avoiding_hikes(&g, ell, i, j) {
                    text.push(if single {
                        h.to_string()
                    } else {
                        format!("({i},{j}): {h}")
                    });
                    rows.push(json!({ "from": i, "to": j, "hike": monomial_to_json(&h), "text": h.to_string() }));
                }
            }
            s.print(text.join("\n"), json!({ "ell": ell, "hikes": rows }));
        }
        Command::Eval { function, hike, pair } => eval(&s, function, &hike, &pair)?,
        Command::Verify {
            graph,
            max_len,
            identities,
            corrupt,
        } => {
            let (g, source) = s.graph(&graph)?;
            s.length("max-len", max_len)?;
            let identities = parse_identities(&identities)?;
            let options = VerifyOptions {
                max_len,
                identities,
                corruption: corrupt,
            };
            let report = verify(&g, source, &options)?;
            s.print(&report, serde_json::to_value(&report).expect("reports serialize"));
            if !report.passed {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_identities(list: &str) -> Result<Vec<Identity>, Failure> {
    let mut out = Vec::new();
    for name in list.split(',').map(str::trim) {
        if name == "all" {
            out.extend(Identity::ALL);
        } else {
            out.push(name.parse().map_err(|e: hikes_core::identities::UnknownIdentity| {
                Failure::Input(format!("unknown identity `{}`", e.0))
            })?);
        }
    }
    Ok(out)
}

fn eval(s: &Session, function: EvalFn, literal: &str, pair: &Pair) -> Result<(), Failure> {
    let h: EdgeMultiset = literal
        .parse()
        .map_err(|e: hikes_core::LiteralError| Failure::Input(e.to_string()))?;
    if classify(&h) == HikeClass::NotAHike {
        return Err(PosetError::NotAHike(h).into());
    }
    let pair = pair_in(pair, None)?;
    let need_pair = || pair.ok_or_else(|| Failure::Input("this function needs --from and --to".into()));
    match function {
        EvalFn::Beta => {
            let v = beta_closed_form(&h)?;
            s.print(&v, json!(v.to_string()));
        }
        EvalFn::Mu => {
            let v = mu(&h)?;
            s.print(v, json!(v));
        }
        EvalFn::F => {
            let (i, j) = need_pair()?;
            let v = count_representations(&h, i, j);
            s.print(&v, json!(v.to_string()));
        }
        EvalFn::Muij => {
            let (i, j) = need_pair()?;
            let v = mu_ij(&h, i, j)?;
            s.print(v, json!(v));
        }
        EvalFn::Divisors => {
            let ds = closed_divisors(&h)?;
            let rows: Vec<Value> = ds.iter().map(|d| json!(monomial_to_json(d))).collect();
            s.print(lines(&ds), json!(rows));
        }
        EvalFn::Decomp => {
            let (i, j) = need_pair()?;
            let terms = self_avoiding_decomposition_terms(&h, i, j)?;
            let text: Vec<String> = terms.iter().map(|(p, c)| format!("{p}: {c}")).collect();
            let rows: Vec<Value> = terms
                .iter()
                .map(|(p, c)| json!({ "p": monomial_to_json(p), "text": p.to_string(), "sum": c.to_string() }))
                .collect();
            s.print(text.join("\n"), json!(rows));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Guard(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
