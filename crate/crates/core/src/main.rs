//! Command-line front end: constructions, spectra, invariant checks,
//! perturbations, quotients, and exhaustive verification, with
//! deterministic JSON output.

use clap::{Args, Parser, Subcommand, ValueEnum};
use sgext::search::{ScanOptions, VerifyModes, VerifyOptions};
use sgext::{constructions, invariants, perturb, search, sg1, spectra};
use std::path::PathBuf;
use std::time::Instant;

type CliResult<T> = Result<T, String>;

#[derive(Parser)]
#[command(
    name = "sgext",
    version,
    about = "Spectral and extremal analysis of signed graphs",
    max_term_width = 100
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a named construction as SG1 text
    Gen {
        #[command(subcommand)]
        what: GenCommand,
    },
    /// Eigenvalues, index, and spectral radius of a graph
    Spectrum {
        /// Input graph in SG1 format ('-' for stdin)
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        /// Include the exact integer characteristic polynomial
        #[arg(long)]
        charpoly: bool,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Invariant checks
    Check {
        #[command(subcommand)]
        what: CheckCommand,
    },
    /// Apply a perturbation and report the index change with diagnosis
    Perturb(PerturbArgs),
    /// Quotient matrix of an equitable vertex partition
    Quotient {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        /// Blocks as comma-separated vertices joined by '/' (e.g. 0/1/2,3/4,5)
        #[arg(long)]
        blocks: String,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Exhaustive enumeration checks at small order
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum GenCommand {
    /// Complete graph on n-1 vertices plus a vertex attached by one
    /// negative and r-2 positive edges
    Gamma {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// All-positive complete multipartite graph with near-equal parts
    Turan {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Homogeneous complete graph
    Complete {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "plus")]
        sign: SignArg,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Complete graph with exactly one negative edge
    UnbalancedComplete {
        #[arg(long)]
        k: usize,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SignArg {
    Plus,
    Minus,
}

#[derive(Subcommand)]
enum CheckCommand {
    /// Balance with a verifiable certificate
    Balanced {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Absence of unbalanced complete subgraphs of order k
    Free {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Eigenvalue bounds from clique data and the underlying graph
    Bounds {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Spectral radius / index coincidence hypotheses
    RadiusIndex {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long)]
        r: usize,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct PerturbArgs {
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    #[arg(long, value_enum)]
    kind: PerturbKind,
    /// Edge list for the edge-set kinds, e.g. "0-2,1-3"
    #[arg(long)]
    edges: Option<String>,
    /// Pivot vertex for rotate/swap
    #[arg(long)]
    i: Option<usize>,
    #[arg(long)]
    j: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum PerturbKind {
    AddPositive,
    RemoveNegative,
    FlipNegative,
    RotatePositive,
    SwapSigns,
}

#[derive(Args)]
struct VerifyArgs {
    /// Which checks to run
    #[arg(long, value_enum, default_value = "all")]
    mode: VerifyMode,
    /// Single order (sets both ends of the range)
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 4)]
    n_min: usize,
    #[arg(long, default_value_t = 6)]
    n_max: usize,
    /// Single forbidden-order parameter (sets both ends of the range)
    #[arg(long)]
    r: Option<usize>,
    #[arg(long, default_value_t = 3)]
    r_min: usize,
    #[arg(long)]
    r_max: Option<usize>,
    /// Seed for the randomized suites
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Trials per randomized suite
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    /// Worker threads for the scans
    #[arg(long)]
    jobs: Option<usize>,
    /// Base path for resumable scan checkpoints (one file per scan is derived)
    #[arg(long, value_name = "FILE")]
    cache: Option<PathBuf>,
    /// Allow the expensive order-7 spectral scan
    #[arg(long)]
    force: bool,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyMode {
    All,
    Edges,
    Index,
    C3,
    Lemmas,
    Perturb,
}

fn main() {
    let cli = Cli::parse();
    let start = Instant::now();
    let code = match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            2
        }
    };
    eprintln!("completed in {} ms", start.elapsed().as_millis());
    std::process::exit(code);
}

fn run(cli: Cli) -> CliResult<i32> {
    match cli.command {
        Command::Gen { what } => run_gen(what),
        Command::Spectrum {
            input,
            charpoly,
            out,
        } => run_spectrum(&input, charpoly, &out),
        Command::Check { what } => run_check(what),
        Command::Perturb(args) => run_perturb(&args),
        Command::Quotient { input, blocks, out } => run_quotient(&input, &blocks, &out),
        Command::Verify(args) => run_verify(&args),
    }
}

fn read_graph(path: &PathBuf) -> CliResult<sgext::SignedGraph> {
    let text = if path.as_os_str() == "-" {
        let mut buf = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut buf)
            .map_err(|e| format!("cannot read stdin: {e}"))?;
        buf
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?
    };
    sg1::parse(&text).map_err(|e| e.to_string())
}

fn write_output(text: &str, out: &Option<PathBuf>) -> CliResult<()> {
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Rounds every JSON float to 12 significant digits so identical
/// invocations serialize byte-identically; integers (including exact
/// polynomial coefficients wider than 64 bits) pass through untouched.
fn round_floats(value: &mut serde_json::Value) {
    match value {
        serde_json::Value::Number(n) => {
            if !n.is_i64() && !n.is_u64() {
                let repr = n.to_string();
                if repr.contains(['.', 'e', 'E']) {
                    if let Some(f) = n.as_f64() {
                        let rounded: f64 = format!("{f:.11e}").parse().expect("rounded float");
                        if let Some(num) = serde_json::Number::from_f64(rounded) {
                            *value = serde_json::Value::Number(num);
                        }
                    }
                }
            }
        }
        serde_json::Value::Array(items) => items.iter_mut().for_each(round_floats),
        serde_json::Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

fn emit_document<T: serde::Serialize>(result: &T, out: &Option<PathBuf>) -> CliResult<()> {
    #[derive(serde::Serialize)]
    struct ReportDocument<'a, T: serde::Serialize> {
        schema_version: &'static str,
        command: Vec<String>,
        result: &'a T,
    }
    let doc = ReportDocument {
        schema_version: "1",
        command: std::env::args().skip(1).collect(),
        result,
    };
    let mut value = serde_json::to_value(&doc).map_err(|e| e.to_string())?;
    round_floats(&mut value);
    let text = serde_json::to_string_pretty(&value).map_err(|e| e.to_string())? + "\n";
    write_output(&text, out)
}

fn run_gen(what: GenCommand) -> CliResult<i32> {
    let (graph, out) = match what {
        GenCommand::Gamma { n, r, out } => (
            constructions::gamma_construction(n, r).map_err(|e| e.to_string())?,
            out,
        ),
        GenCommand::Turan { n, r, out } => (
            constructions::turan_graph(n, r)
                .map_err(|e| e.to_string())?
                .0,
            out,
        ),
        GenCommand::Complete { n, sign, out } => {
            let s = match sign {
                SignArg::Plus => 1,
                SignArg::Minus => -1,
            };
            (
                constructions::complete(n, s).map_err(|e| e.to_string())?,
                out,
            )
        }
        GenCommand::UnbalancedComplete { k, out } => (
            constructions::unbalanced_complete(k).map_err(|e| e.to_string())?,
            out,
        ),
    };
    write_output(&sg1::emit(&graph), &out)?;
    Ok(0)
}

fn run_spectrum(input: &PathBuf, charpoly: bool, out: &Option<PathBuf>) -> CliResult<i32> {
    #[derive(serde::Serialize)]
    struct CharPolyOut {
        coefficients: Vec<i128>,
        pretty: String,
    }
    #[derive(serde::Serialize)]
    struct SpectrumOut {
        order: usize,
        edges: usize,
        eigenvalues: Vec<f64>,
        index: Option<f64>,
        spectral_radius: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        char_poly: Option<CharPolyOut>,
    }
    let g = read_graph(input)?;
    let spectrum = spectra::spectrum(&g);
    let char_poly = if charpoly {
        let m = sgext::IntMatrix::from(&g.adjacency_matrix());
        let p = spectra::char_poly(&m).map_err(|e| e.to_string())?;
        Some(CharPolyOut {
            coefficients: p.coeffs().to_vec(),
            pretty: p.to_string(),
        })
    } else {
        None
    };
    let result = SpectrumOut {
        order: g.order(),
        edges: g.edge_count(),
        eigenvalues: spectrum.values().to_vec(),
        index: (!spectrum.is_empty()).then(|| spectrum.index()),
        spectral_radius: (!spectrum.is_empty()).then(|| spectrum.spectral_radius()),
        char_poly,
    };
    emit_document(&result, out)?;
    Ok(0)
}

fn run_check(what: CheckCommand) -> CliResult<i32> {
    match what {
        CheckCommand::Balanced { input, out } => {
            #[derive(serde::Serialize)]
            struct BalancedOut {
                balanced: bool,
                #[serde(skip_serializing_if = "Option::is_none")]
                switch_set: Option<Vec<usize>>,
                #[serde(skip_serializing_if = "Option::is_none")]
                negative_cycle: Option<Vec<usize>>,
            }
            let g = read_graph(&input)?;
            let (balanced, certificate) = invariants::is_balanced(&g);
            let result = match certificate {
                invariants::BalanceCertificate::SwitchingToAllPositive(set) => BalancedOut {
                    balanced,
                    switch_set: Some(set.iter().collect()),
                    negative_cycle: None,
                },
                invariants::BalanceCertificate::NegativeCycle(cycle) => BalancedOut {
                    balanced,
                    switch_set: None,
                    negative_cycle: Some(cycle),
                },
            };
            emit_document(&result, &out)?;
            Ok(0)
        }
        CheckCommand::Free { input, k, out } => {
            #[derive(serde::Serialize)]
            struct FreeOut {
                k: usize,
                free: bool,
                witness: Option<Vec<usize>>,
            }
            let g = read_graph(&input)?;
            let witness = invariants::find_unbalanced_complete(&g, k).map_err(|e| e.to_string())?;
            let result = FreeOut {
                k,
                free: witness.is_none(),
                witness,
            };
            emit_document(&result, &out)?;
            Ok(0)
        }
        CheckCommand::Bounds { input, out } => {
            #[derive(serde::Serialize)]
            struct BoundOut {
                name: &'static str,
                bound: f64,
                holds: bool,
            }
            #[derive(serde::Serialize)]
            struct BoundsOut {
                order: usize,
                index: f64,
                clique_number: usize,
                balanced_clique_number: usize,
                underlying_index: f64,
                bounds: Vec<BoundOut>,
            }
            let g = read_graph(&input)?;
            if g.order() == 0 {
                return Err("bounds require at least one vertex".into());
            }
            let lambda = spectra::index(&g);
            let n = g.order() as f64;
            let omega = invariants::clique_number(&g);
            let omega_b = invariants::balanced_clique_number(&g);
            let underlying = spectra::index(&g.underlying());
            let mk = |name, bound| BoundOut {
                name,
                bound,
                holds: lambda <= bound + 1e-9,
            };
            let result = BoundsOut {
                order: g.order(),
                index: lambda,
                clique_number: omega,
                balanced_clique_number: omega_b,
                underlying_index: underlying,
                bounds: vec![
                    mk("clique_ratio", n * (1.0 - 1.0 / omega as f64)),
                    mk("balanced_clique_ratio", n * (1.0 - 1.0 / omega_b as f64)),
                    mk("underlying_index", underlying),
                    mk("order_minus_one", n - 1.0),
                ],
            };
            emit_document(&result, &out)?;
            Ok(0)
        }
        CheckCommand::RadiusIndex { input, r, out } => {
            let g = read_graph(&input)?;
            let result = invariants::check_radius_equals_index(&g, r).map_err(|e| e.to_string())?;
            emit_document(&result, &out)?;
            Ok(0)
        }
    }
}

fn parse_edge_list(text: &str) -> CliResult<Vec<(usize, usize)>> {
    text.split(',')
        .map(|part| {
            let (a, b) = part
                .trim()
                .split_once('-')
                .ok_or_else(|| format!("bad edge `{part}` (want u-v)"))?;
            let u = a
                .trim()
                .parse::<usize>()
                .map_err(|_| format!("bad vertex `{a}`"))?;
            let v = b
                .trim()
                .parse::<usize>()
                .map_err(|_| format!("bad vertex `{b}`"))?;
            Ok((u, v))
        })
        .collect()
}

fn run_perturb(args: &PerturbArgs) -> CliResult<i32> {
    let g = read_graph(&args.input)?;
    let edge_kinds = |edges: &Option<String>| -> CliResult<Vec<(usize, usize)>> {
        let text = edges.as_ref().ok_or("this kind needs --edges")?;
        parse_edge_list(text)
    };
    let triple = || -> CliResult<(usize, usize, usize)> {
        match (args.i, args.j, args.k) {
            (Some(i), Some(j), Some(k)) => Ok((i, j, k)),
            _ => Err("this kind needs --i, --j, and --k".into()),
        }
    };
    let perturbation = match args.kind {
        PerturbKind::AddPositive => perturb::Perturbation::AddPositive(edge_kinds(&args.edges)?),
        PerturbKind::RemoveNegative => {
            perturb::Perturbation::RemoveNegative(edge_kinds(&args.edges)?)
        }
        PerturbKind::FlipNegative => perturb::Perturbation::FlipNegative(edge_kinds(&args.edges)?),
        PerturbKind::RotatePositive => {
            let (i, j, k) = triple()?;
            perturb::Perturbation::RotatePositive { i, j, k }
        }
        PerturbKind::SwapSigns => {
            let (i, j, k) = triple()?;
            perturb::Perturbation::SwapSigns { i, j, k }
        }
    };
    let after = perturb::apply(&g, &perturbation).map_err(|e| e.to_string())?;
    let diagnosis = perturb::equality_diagnosis(&g, &perturbation).map_err(|e| e.to_string())?;
    #[derive(serde::Serialize)]
    struct PerturbOut {
        kind: &'static str,
        lambda_before: f64,
        lambda_after: f64,
        result_sg1: String,
        diagnosis: perturb::EqualityDiagnosis,
    }
    let result = PerturbOut {
        kind: perturbation.kind_name(),
        lambda_before: diagnosis.lambda_before,
        lambda_after: diagnosis.lambda_after,
        result_sg1: sg1::emit(&after),
        diagnosis,
    };
    emit_document(&result, &args.out)?;
    Ok(0)
}

fn parse_blocks(text: &str) -> CliResult<Vec<Vec<usize>>> {
    text.split('/')
        .map(|block| {
            block
                .split(',')
                .map(|v| {
                    v.trim()
                        .parse::<usize>()
                        .map_err(|_| format!("bad vertex `{v}` in blocks"))
                })
                .collect()
        })
        .collect()
}

fn run_quotient(input: &PathBuf, blocks: &str, out: &Option<PathBuf>) -> CliResult<i32> {
    let g = read_graph(input)?;
    let partition =
        sgext::Partition::new(g.order(), parse_blocks(blocks)?).map_err(|e| e.to_string())?;
    let m = g.adjacency_matrix();
    let q = spectra::quotient_matrix(&m, &partition).map_err(|e| e.to_string())?;
    let qs = spectra::quotient_spectrum(&m, &partition).map_err(|e| e.to_string())?;
    let full = spectra::eigenvalues(&m);
    let contained = qs
        .values()
        .iter()
        .all(|&lam| full.values().iter().any(|&mu| (mu - lam).abs() <= 1e-8));
    #[derive(serde::Serialize)]
    struct QuotientOut {
        blocks: Vec<Vec<usize>>,
        quotient: Vec<Vec<i128>>,
        eigenvalues: Vec<f64>,
        eigenvalues_contained_in_spectrum: bool,
    }
    let k = q.order();
    let result = QuotientOut {
        blocks: partition.blocks().to_vec(),
        quotient: (0..k)
            .map(|i| (0..k).map(|j| q.get(i, j)).collect())
            .collect(),
        eigenvalues: qs.values().to_vec(),
        eigenvalues_contained_in_spectrum: contained,
    };
    emit_document(&result, out)?;
    Ok(0)
}

fn run_verify(args: &VerifyArgs) -> CliResult<i32> {
    let modes = match args.mode {
        VerifyMode::All => VerifyModes::all(),
        VerifyMode::Edges => VerifyModes {
            edges: true,
            ..none_modes()
        },
        VerifyMode::Index => VerifyModes {
            index: true,
            ..none_modes()
        },
        VerifyMode::C3 => VerifyModes {
            c3: true,
            ..none_modes()
        },
        VerifyMode::Lemmas => VerifyModes {
            lemmas: true,
            ..none_modes()
        },
        VerifyMode::Perturb => VerifyModes {
            perturbations: true,
            ..none_modes()
        },
    };
    let (n_min, n_max) = match args.n {
        Some(n) => (n, n),
        None => (args.n_min, args.n_max),
    };
    let (r_min, r_max) = match args.r {
        Some(r) => (r, Some(r)),
        None => (args.r_min, args.r_max),
    };
    let opts = VerifyOptions {
        n_min,
        n_max,
        r_min,
        r_max,
        modes,
        seed: args.seed,
        trials: args.trials,
        scan: ScanOptions {
            jobs: args.jobs,
            cache_path: args.cache.clone(),
            allow_heavy: args.force,
        },
    };
    let summary = search::verify_all(&opts).map_err(|e| e.to_string())?;
    for report in summary.edge_reports.iter().chain(&summary.c3_edge_reports) {
        let family = match report.forbidden {
            search::Forbidden::UnbalancedComplete { order } => {
                format!("unbalanced K{order}-free")
            }
            search::Forbidden::NegativeTriangle => "negative-triangle-free".into(),
        };
        eprintln!(
            "edge bound  n={} {family}: {} (max {:?}, {} maximizer class(es))",
            report.n,
            pass_str(report.passed),
            report.best_edges,
            report.maximizers.len()
        );
    }
    for report in summary
        .index_reports
        .iter()
        .chain(&summary.c3_radius_reports)
    {
        let family = match report.forbidden {
            search::Forbidden::UnbalancedComplete { order } => {
                format!("unbalanced K{order}-free")
            }
            search::Forbidden::NegativeTriangle => "negative-triangle-free".into(),
        };
        eprintln!(
            "{:?} bound n={} {family}: {} (max {:?})",
            report.objective,
            report.n,
            pass_str(report.passed),
            report.best_value
        );
    }
    if let Some(lemmas) = &summary.lemma_sweeps {
        for sweep in &lemmas.sweeps {
            eprintln!(
                "sweep {}: {} ({} checked, {} violation(s))",
                sweep.name,
                pass_str(sweep.violations == 0),
                sweep.checked,
                sweep.violations
            );
        }
        eprintln!(
            "non-negative eigenvector trials: {}",
            pass_str(lemmas.nonneg.passed)
        );
    }
    if let Some(trials) = &summary.perturbation {
        eprintln!("perturbation trials: {}", pass_str(trials.passed));
    }
    emit_document(&summary, &args.out)?;
    Ok(if summary.passed { 0 } else { 1 })
}

fn pass_str(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn none_modes() -> VerifyModes {
    VerifyModes {
        edges: false,
        index: false,
        c3: false,
        lemmas: false,
        perturbations: false,
    }
}
