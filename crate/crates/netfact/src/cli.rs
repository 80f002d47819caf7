//! Command-line front end: every subcommand is a thin wrapper around one
//! library operation, reading the crate's text formats and emitting
//! deterministic output (identical inputs and seeds give identical bytes).
//!
//! Exit codes: 0 success or a positive verdict, 1 a sound negative verdict
//! (not transitive / nothing found), 2 inconclusive (a budget ran out),
//! 3 usage error, 4 input or runtime error.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::constructions::{
    alegre_graph, diffset_digraph, hoffman_singleton_graph, kautz_table, parse_diffset_params,
    search_diffsets, search_report_json, ConstructionError, DiffSearchConfig,
};
use crate::coset::{build_coset_graph, coset_factorization, parse_coset_spec, petersen_spec};
use crate::digraph::{parse_edge_list, random_regular, to_dot, write_edge_list, Digraph};
use crate::factorize::{
    dot_with_factors, one_factorization, parse_factorization, verify_factorization,
    write_factorization, Factorization,
};
use crate::groupoid::{
    canonical_extension, cayley_graph, check_axioms, groupoid_from_factorization,
    parse_groupoid_csv, raw_from_full, raw_from_partial, tree_like_labeling, write_groupoid_csv,
    PartialGroupoid,
};
use crate::spanfact::{
    find_spanning_factorization_with, greedy_schedule, is_vertex_transitive, parse_wordset,
    verify_schedule, write_schedule_json, write_wordset, SearchConfig, SpanSearch,
    SpanningFactorization, VtDecision,
};

type BoxError = Box<dyn std::error::Error>;
type CliResult = Result<i32, BoxError>;

/// Run the CLI with the given arguments; returns the process exit code.
pub fn run<I: IntoIterator<Item = String>>(args: I) -> i32 {
    let argv: Vec<String> = std::iter::once("netfact".to_string()).chain(args).collect();
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 3 } else { 0 };
        }
    };
    match dispatch(cli.cmd) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {}", err);
            4
        }
    }
}

#[derive(Parser)]
#[command(
    name = "netfact",
    about = "Regular digraphs: named constructions, 1-factorizations, spanning \
             word sets, vertex-transitivity, groupoid tables, coset digraphs, \
             and the degree-2 difference-set search."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a named digraph as an edge list (plus optional factor/DOT files).
    Gen {
        #[command(subcommand)]
        target: GenTarget,
    },
    /// Decompose a regular digraph into d one-factors.
    Factorize {
        /// Edge-list file.
        input: PathBuf,
        /// Factorization output path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for a factorization whose tree word set is spanning.
    Spanning {
        /// Edge-list file.
        input: PathBuf,
        /// Maximum number of factorizations to examine.
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
        /// Also try alternative tree-growing orders at the root for each
        /// candidate factorization.
        #[arg(long)]
        alternate_roots: bool,
        /// Factorization output path (stdout when omitted).
        #[arg(long)]
        factors: Option<PathBuf>,
        /// Word-set output path (stdout when omitted).
        #[arg(long)]
        words: Option<PathBuf>,
    },
    /// Assign conflict-free times to a word set (JSON schedule).
    Schedule {
        /// Word-set file.
        words: PathBuf,
        /// Factorization file; when given, the schedule is verified against
        /// the full spanning-walk constraints.
        #[arg(long)]
        factors: Option<PathBuf>,
        /// Schedule output path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide whether a digraph is vertex-transitive.
    CheckVt {
        /// Edge-list file.
        input: PathBuf,
        /// Maximum number of factorizations to examine before falling back.
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
        /// Emit the verdict as JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Multiplication-table operations.
    Groupoid {
        #[command(subcommand)]
        op: GroupoidOp,
    },
    /// Exhaustive difference-set search over n = a*b up to the shift renaming.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        /// Annotate the report with whether this diameter was reached.
        #[arg(long)]
        target: Option<usize>,
        /// Maximum number of (pi, v) pairs to enumerate.
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
        /// Worker threads for the permutation scan.
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Also quotient candidate classes by negation of Z_n.
        #[arg(long)]
        negation_symmetry: bool,
        /// Report output path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render an edge list as DOT (optionally colored by factors).
    ExportDot {
        /// Edge-list file.
        input: PathBuf,
        /// Factorization file used for edge colors.
        #[arg(long)]
        factors: Option<PathBuf>,
        /// DOT output path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Output options shared by the generators.
#[derive(Args)]
struct EmitOpts {
    /// Edge-list output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the factorization here (when the construction defines one).
    #[arg(long)]
    factors: Option<PathBuf>,
    /// Also write a DOT rendering here.
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GenTarget {
    /// 6-vertex Kautz digraph from the 2-generator table.
    Kautz {
        #[command(flatten)]
        emit: EmitOpts,
    },
    /// Degree-7 Moore graph on 2p^2 vertices (p = 5: 50 vertices).
    Hs {
        #[arg(long, default_value_t = 5)]
        p: usize,
        #[command(flatten)]
        emit: EmitOpts,
    },
    /// 25-vertex degree-2 diameter-4 digraph.
    Alegre {
        #[command(flatten)]
        emit: EmitOpts,
    },
    /// Coset digraph of the order-20 group spec (or a spec file).
    PetersenCoset {
        /// Coset spec file; the built-in order-20 spec when omitted.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[command(flatten)]
        emit: EmitOpts,
    },
    /// Degree-2 digraph from a difference-set parameter file.
    Diffset {
        /// Parameter file ("n a b" / "pi:" / "v:" lines).
        #[arg(long)]
        params: PathBuf,
        #[command(flatten)]
        emit: EmitOpts,
    },
    /// Directed n-cycle.
    Cycle {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        emit: EmitOpts,
    },
    /// Random regular digraph (test corpus; deterministic per seed).
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        emit: EmitOpts,
    },
}

#[derive(Subcommand)]
enum GroupoidOp {
    /// Factorize a digraph and read the factors as a partial table.
    FromGraph {
        /// Edge-list file.
        input: PathBuf,
        /// Vertex to relabel as the identity element.
        #[arg(long, default_value_t = 0)]
        root: usize,
        /// Table CSV output path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Complete a partial table by walking its tree labels.
    Extend {
        /// Table CSV file (generator columns).
        input: PathBuf,
        /// Full-table CSV output path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report which table axioms hold (exit 1 when a core axiom fails).
    Axioms {
        /// Table CSV file.
        input: PathBuf,
        /// Emit the report as JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Draw the Cayley graph of a partial table.
    Cayley {
        /// Table CSV file (generator columns).
        input: PathBuf,
        #[command(flatten)]
        emit: EmitOpts,
    },
}

fn read_text(path: &Path) -> Result<String, BoxError> {
    fs::read_to_string(path).map_err(|e| format!("{}: {}", path.display(), e).into())
}

fn write_out(out: &Option<PathBuf>, text: &str) -> Result<(), BoxError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| format!("{}: {}", path.display(), e))?,
        None => print!("{}", text),
    }
    Ok(())
}

fn emit_graph(g: &Digraph, f: Option<&Factorization>, emit: &EmitOpts) -> Result<(), BoxError> {
    write_out(&emit.out, &write_edge_list(g))?;
    if let Some(path) = &emit.factors {
        let f =
            f.ok_or("this construction has no canonical factorization; run `netfact factorize`")?;
        fs::write(path, write_factorization(f))
            .map_err(|e| format!("{}: {}", path.display(), e))?;
    }
    if let Some(path) = &emit.dot {
        let text = match f {
            Some(f) => dot_with_factors(f),
            None => to_dot(g, &|_| None),
        };
        fs::write(path, text).map_err(|e| format!("{}: {}", path.display(), e))?;
    }
    Ok(())
}

fn dispatch(cmd: Cmd) -> CliResult {
    match cmd {
        Cmd::Gen { target } => cmd_gen(target),
        Cmd::Factorize { input, out } => {
            let g = parse_edge_list(&read_text(&input)?)?;
            let f = one_factorization(&g)?;
            verify_factorization(&g, &f)?;
            write_out(&out, &write_factorization(&f))?;
            Ok(0)
        }
        Cmd::Spanning {
            input,
            budget,
            alternate_roots,
            factors,
            words,
        } => {
            let g = parse_edge_list(&read_text(&input)?)?;
            let cfg = SearchConfig {
                budget,
                widen_tie_breaks: alternate_roots,
                ..SearchConfig::default()
            };
            match find_spanning_factorization_with(&g, &cfg) {
                SpanSearch::Found(sf) => {
                    write_out(&factors, &write_factorization(sf.factorization()))?;
                    write_out(&words, &write_wordset(sf.wordset()))?;
                    Ok(0)
                }
                SpanSearch::NotFound { examined } => {
                    eprintln!(
                        "no spanning factorization: all {} candidates exhausted",
                        examined
                    );
                    Ok(1)
                }
                SpanSearch::Inconclusive { examined } => {
                    eprintln!("inconclusive after {} candidates; raise --budget", examined);
                    Ok(2)
                }
            }
        }
        Cmd::Schedule {
            words,
            factors,
            out,
        } => {
            let ws = parse_wordset(&read_text(&words)?)?;
            let schedule = greedy_schedule(&ws);
            if let Some(path) = factors {
                let f = parse_factorization(&read_text(&path)?)?;
                let sf = SpanningFactorization::new(f, ws)?;
                verify_schedule(&sf, &schedule)
                    .map_err(|v| format!("schedule verification failed: {}", v))?;
            }
            write_out(&out, &(write_schedule_json(&schedule) + "\n"))?;
            Ok(0)
        }
        Cmd::CheckVt {
            input,
            budget,
            json,
        } => {
            let g = parse_edge_list(&read_text(&input)?)?;
            match is_vertex_transitive(&g, budget) {
                VtDecision::Transitive { maps } => {
                    if json {
                        println!(
                            "{}",
                            serde_json::json!({"verdict": "found", "generators": maps.len()})
                        );
                    } else {
                        println!("vertex-transitive: {} generating automorphisms", maps.len());
                    }
                    Ok(0)
                }
                VtDecision::NotTransitive => {
                    if json {
                        println!("{}", serde_json::json!({"verdict": "not-transitive"}));
                    } else {
                        println!("not vertex-transitive (search space exhausted)");
                    }
                    Ok(1)
                }
                VtDecision::Inconclusive { examined } => {
                    if json {
                        println!(
                            "{}",
                            serde_json::json!({"verdict": "inconclusive", "examined": examined})
                        );
                    } else {
                        println!("inconclusive after {} candidates; raise --budget", examined);
                    }
                    Ok(2)
                }
            }
        }
        Cmd::Groupoid { op } => cmd_groupoid(op),
        Cmd::Search {
            n,
            a,
            b,
            target,
            budget,
            workers,
            negation_symmetry,
            out,
        } => {
            let cfg = DiffSearchConfig {
                budget,
                workers,
                negation_symmetry,
            };
            match search_diffsets(n, a, b, target, &cfg) {
                Ok(report) => {
                    write_out(&out, &(search_report_json(&report) + "\n"))?;
                    let hit = report.best_diameter.is_some() && report.target_met != Some(false);
                    Ok(if hit { 0 } else { 1 })
                }
                Err(ConstructionError::SearchBudgetExceeded(partial)) => {
                    write_out(&out, &(search_report_json(&partial) + "\n"))?;
                    eprintln!("search budget exhausted; raise --budget");
                    Ok(2)
                }
                Err(e) => Err(e.into()),
            }
        }
        Cmd::ExportDot {
            input,
            factors,
            out,
        } => {
            let g = parse_edge_list(&read_text(&input)?)?;
            let text = match factors {
                Some(path) => {
                    let f = parse_factorization(&read_text(&path)?)?;
                    verify_factorization(&g, &f)?;
                    dot_with_factors(&f)
                }
                None => to_dot(&g, &|_| None),
            };
            write_out(&out, &text)?;
            Ok(0)
        }
    }
}

fn cmd_gen(target: GenTarget) -> CliResult {
    match target {
        GenTarget::Kautz { emit } => {
            let (g, f) = cayley_graph(&kautz_table())?;
            emit_graph(&g, Some(&f), &emit)?;
            Ok(0)
        }
        GenTarget::Hs { p, emit } => {
            let g = hoffman_singleton_graph(p)?;
            emit_graph(&g, None, &emit)?;
            Ok(0)
        }
        GenTarget::Alegre { emit } => {
            let (g, f) = alegre_graph();
            emit_graph(&g, Some(&f), &emit)?;
            Ok(0)
        }
        GenTarget::PetersenCoset { spec, emit } => {
            let spec = match spec {
                Some(path) => parse_coset_spec(&read_text(&path)?)?,
                None => petersen_spec(),
            };
            let graph = build_coset_graph(&spec)?;
            let f = if emit.factors.is_some() || emit.dot.is_some() {
                Some(coset_factorization(&spec)?)
            } else {
                None
            };
            emit_graph(graph.digraph(), f.as_ref(), &emit)?;
            Ok(0)
        }
        GenTarget::Diffset { params, emit } => {
            let p = parse_diffset_params(&read_text(&params)?)?;
            let (g, f) = diffset_digraph(&p)?;
            emit_graph(&g, Some(&f), &emit)?;
            Ok(0)
        }
        GenTarget::Cycle { n, emit } => {
            if n < 2 {
                return Err("a directed cycle needs n >= 2".into());
            }
            let f = Factorization::new(n, vec![(0..n).map(|i| (i + 1) % n).collect()])?;
            let g = f.to_digraph()?;
            emit_graph(&g, Some(&f), &emit)?;
            Ok(0)
        }
        GenTarget::Random { n, d, seed, emit } => {
            if n < 2 || d == 0 || d > n - 1 {
                return Err("random regular digraphs need n >= 2 and 1 <= d <= n-1".into());
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = random_regular(n, d, &mut rng);
            emit_graph(&g, None, &emit)?;
            Ok(0)
        }
    }
}

fn cmd_groupoid(op: GroupoidOp) -> CliResult {
    match op {
        GroupoidOp::FromGraph { input, root, out } => {
            let g = parse_edge_list(&read_text(&input)?)?;
            if root >= g.n() {
                return Err(format!("root {} out of range for {} vertices", root, g.n()).into());
            }
            let f = one_factorization(&g)?;
            let (pg, _labels) = groupoid_from_factorization(&f, root)?;
            write_out(&out, &write_groupoid_csv(&raw_from_partial(&pg)))?;
            Ok(0)
        }
        GroupoidOp::Extend { input, out } => {
            let raw = parse_groupoid_csv(&read_text(&input)?)?;
            let pg = PartialGroupoid::new(raw.gen_ids, raw.rows)?;
            let labeling = tree_like_labeling(&pg)?;
            let fg = canonical_extension(&pg, &labeling.labels)?;
            write_out(&out, &write_groupoid_csv(&raw_from_full(&fg)))?;
            Ok(0)
        }
        GroupoidOp::Axioms { input, json } => {
            let raw = parse_groupoid_csv(&read_text(&input)?)?;
            let report = check_axioms(&raw);
            let fmt = |v: &Option<crate::groupoid::AxiomViolation>| match v {
                None => serde_json::Value::Null,
                Some(violation) => serde_json::Value::String(violation.to_string()),
            };
            if json {
                println!(
                    "{}",
                    serde_json::json!({
                        "left_identity": fmt(&report.left_identity),
                        "no_self_product": fmt(&report.no_self_product),
                        "right_cancellation": fmt(&report.right_cancellation),
                        "left_cancellation_on_generators":
                            fmt(&report.left_cancellation_on_generators),
                        "core_ok": report.core_ok(),
                    })
                );
            } else {
                let line = |name: &str, v: &Option<crate::groupoid::AxiomViolation>| match v {
                    None => println!("{}: ok", name),
                    Some(violation) => println!("{}: FAIL ({})", name, violation),
                };
                line("left identity", &report.left_identity);
                line("no self product", &report.no_self_product);
                line("right cancellation", &report.right_cancellation);
                line(
                    "left cancellation on generators",
                    &report.left_cancellation_on_generators,
                );
            }
            Ok(if report.core_ok() { 0 } else { 1 })
        }
        GroupoidOp::Cayley { input, emit } => {
            let raw = parse_groupoid_csv(&read_text(&input)?)?;
            let pg = PartialGroupoid::new(raw.gen_ids, raw.rows)?;
            let (g, f) = cayley_graph(&pg)?;
            emit_graph(&g, Some(&f), &emit)?;
            Ok(0)
        }
    }
}
