//! `slowcolor`: solve, verify, construct, sweep and play the slow coloring
//! game from the command line.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 resource cap or
//! timeout, 3 a checked claim failed.

mod family;
mod play;
mod source;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use slowcolor::connectivity::disjoint_paths;
use slowcolor::forest::{beta_context, build_forest_traced, split_betas};
use slowcolor::solver::{self, closed_form_complete, closed_form_path, closed_form_star, MemoTable, DEFAULT_CAP};
use slowcolor::strategy::{adversarial_sweep, lister_3k_strategy, shared_solver};
use slowcolor::verify::{self, run_suite, verify_all, verify_claim, Summary};
use slowcolor::{
    ClaimId, Graph, Role, SolveError, SolveOptions, Solver, TheoremReport, Verdict, VerifyError,
    VerifyOptions,
};

#[derive(Parser)]
#[command(name = "slowcolor", version, about = "Exact analysis of the slow coloring game")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact game value and an optimal opening mark.
    Solve(SolveArgs),
    /// Check a claim on a graph or a whole suite.
    Verify(VerifyArgs),
    /// Build the {1,3}-forest certificate after a Painter deletion.
    Construct(ConstructArgs),
    /// Play against the exact engine on the terminal.
    Play(PlayArgs),
    /// Solve (or check a claim on) every graph of a family.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct Common {
    /// Largest vertex count the exact solver accepts.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,
    /// Abort exact searches after this many milliseconds.
    #[arg(long)]
    timeout_ms: Option<u64>,
    /// Disable the split into connected components.
    #[arg(long)]
    strict: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

impl Common {
    fn solve_options(&self) -> SolveOptions {
        let mut opts = if self.strict { SolveOptions::strict() } else { SolveOptions::default() };
        opts = opts.with_cap(self.cap);
        if let Some(ms) = self.timeout_ms {
            opts = opts.with_timeout(Duration::from_millis(ms));
        }
        opts
    }
}

#[derive(Args)]
struct SolveArgs {
    /// Builtin name (prism, cube, petersen, path:n, star:n, cycle:n, complete:n,
    /// empty:n, bipartite:a,b) or a graph file.
    #[arg(long)]
    graph: String,
    /// Load and save the memo table here.
    #[arg(long)]
    memo_cache: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct VerifyArgs {
    /// main, nonsharp, tree-char, mpw, lemma-kconn, forest-pipeline or all.
    claim: String,
    #[arg(long, required_unless_present = "suite")]
    graph: Option<String>,
    #[arg(long)]
    k: Option<usize>,
    /// Named instance battery (currently: standard).
    #[arg(long, conflicts_with = "graph")]
    suite: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Maximum (opening, reply) branches enumerated per report.
    #[arg(long, default_value_t = 100_000)]
    budget: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long)]
    graph: String,
    /// Painter's deletion, by label or index, e.g. "3,4".
    #[arg(long, default_value = "")]
    delete: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum HumanRole {
    Lister,
    Painter,
}

#[derive(Args)]
struct PlayArgs {
    #[arg(long)]
    graph: String,
    /// The side you play; the engine takes the other.
    #[arg(long, value_enum, default_value_t = HumanRole::Painter)]
    role: HumanRole,
    /// k for the 3n/2 + k comparison at the end.
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Write the transcript here when the game ends or input runs out.
    #[arg(long)]
    transcript: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SweepArgs {
    /// Family spec, e.g. path:1..8, trees:7, graphs:5, gnp:7:0.5:100, random-trees:9:50.
    #[arg(long)]
    sweep: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Check this claim on each graph instead of only solving it.
    #[arg(long)]
    claim: Option<String>,
    /// Play the 3k Lister against every Painter line on each graph.
    #[arg(long, conflicts_with = "claim")]
    adversarial: bool,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = 100_000)]
    budget: usize,
    #[command(flatten)]
    common: Common,
}

/// Failure classes, one per nonzero exit code.
enum Failure {
    Input(anyhow::Error),
    Resource(anyhow::Error),
    Verification(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::Resource(_) => 2,
            Failure::Verification(_) => 3,
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        // caps and timeouts anywhere in the chain are resource failures
        for cause in e.chain() {
            if let Some(SolveError::CapExceeded { .. } | SolveError::Timeout { .. }) = cause.downcast_ref::<SolveError>() {
                return Failure::Resource(e);
            }
            if let Some(VerifyError::Solve(SolveError::CapExceeded { .. } | SolveError::Timeout { .. })) =
                cause.downcast_ref::<VerifyError>()
            {
                return Failure::Resource(e);
            }
        }
        Failure::Input(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.into())
    }
}

type Outcome = Result<(), Failure>;

fn emit<T: Serialize>(value: &T, format: Format, text: impl FnOnce() -> String) -> io::Result<()> {
    let mut out = io::stdout().lock();
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, value).map_err(io::Error::other)?;
            writeln!(out)
        }
        Format::Text => write!(out, "{}", text()),
    }
}

#[derive(Serialize)]
struct SolveOutput {
    graph: String,
    n: usize,
    edges: usize,
    value: u32,
    best_opening: slowcolor::VertexSet,
    best_opening_labels: String,
    states_memoized: usize,
    nodes_expanded: u64,
}

fn cmd_solve(args: SolveArgs) -> Outcome {
    let inst = source::resolve(&args.graph)?;
    let g = &inst.graph;
    let mut solver = Solver::for_graph(g, args.common.solve_options()).context("solver")?;
    if let Some(path) = args.memo_cache.as_ref().filter(|p| p.exists()) {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        match MemoTable::from_json(g, &text) {
            Ok(memo) => solver = solver.with_memo(memo).context("memo cache")?,
            Err(e) => log::warn!("ignoring memo cache {}: {e}", path.display()),
        }
    }
    let result = solver.solve().context("solve")?;
    if let Some(path) = &args.memo_cache {
        fs::write(path, solver.memo().to_json()).with_context(|| format!("writing {}", path.display()))?;
    }
    let out = SolveOutput {
        graph: inst.name.clone(),
        n: g.n(),
        edges: g.edge_count(),
        value: result.value,
        best_opening: result.best_opening,
        best_opening_labels: g.format_set(result.best_opening),
        states_memoized: result.stats.states_memoized,
        nodes_expanded: result.stats.nodes_expanded,
    };
    emit(&out, args.common.format, || {
        format!(
            "{}: value {} (n = {}), optimal opening {}\n{} states memoized\n",
            out.graph, out.value, out.n, out.best_opening_labels, out.states_memoized
        )
    })?;
    Ok(())
}

/// 3 if anything failed, 2 if anything was skipped for lack of budget.
fn verdict_status(reports: &[TheoremReport]) -> Outcome {
    let failed: Vec<String> =
        reports.iter().filter(|r| r.verdict == Verdict::Fails).map(|r| format!("{} on {}", r.claim, r.instance)).collect();
    if !failed.is_empty() {
        return Err(Failure::Verification(format!("claims failed: {}", failed.join(", "))));
    }
    let skipped = reports.iter().filter(|r| r.verdict == Verdict::Skipped).count();
    if skipped > 0 {
        return Err(Failure::Resource(anyhow!("{skipped} report(s) skipped for lack of budget")));
    }
    Ok(())
}

fn render(reports: &[TheoremReport]) -> String {
    let mut s: String = reports.iter().map(|r| r.to_string()).collect();
    let sum = Summary::of(reports);
    s.push_str(&format!(
        "summary: {} hold, {} fail, {} not applicable, {} skipped\n",
        sum.holds, sum.fails, sum.hypotheses_unmet, sum.skipped
    ));
    s
}

fn cmd_verify(args: VerifyArgs) -> Outcome {
    let claim = match args.claim.as_str() {
        "all" => None,
        other => Some(other.parse::<ClaimId>().map_err(|e| Failure::Input(e.into()))?),
    };
    let opts = VerifyOptions { solve: args.common.solve_options(), budget: args.budget };
    if let Some(suite) = &args.suite {
        let mut report = run_suite(suite, args.seed, &opts).context("suite")?;
        if let Some(c) = claim {
            report.reports.retain(|r| r.claim == c);
            report.summary = Summary::of(&report.reports);
        }
        emit(&report, args.common.format, || render(&report.reports))?;
        return verdict_status(&report.reports);
    }
    let inst = source::resolve(args.graph.as_deref().expect("clap requires --graph without --suite"))?;
    let reports = match claim {
        None => verify_all(&inst, args.k, &opts).context("verify")?,
        Some(c) => vec![verify_claim(c, &inst, args.k, &opts).context("verify")?],
    };
    match claim {
        Some(_) => emit(&reports[0], args.common.format, || render(&reports))?,
        None => emit(&reports, args.common.format, || render(&reports))?,
    }
    verdict_status(&reports)
}

fn labeled_edges(g: &Graph, edges: &slowcolor::EdgeSet) -> Vec<[String; 2]> {
    edges.iter().map(|(u, v)| [g.label(u), g.label(v)]).collect()
}

fn cmd_construct(args: ConstructArgs) -> Outcome {
    let inst = source::resolve(&args.graph)?;
    let g = &inst.graph;
    let d = g.parse_vertex_set(&args.delete).context("--delete")?;
    let matching = inst.perfect_matching().ok_or_else(|| anyhow!("{} has no perfect matching", inst.name))?;
    let ctx = beta_context(g, &matching, d).context("deletion set")?;
    let (work, split_off) = if ctx.betas.len() % 2 == 1 {
        let v = ctx.betas.first().expect("odd count is nonzero");
        (ctx.without_beta(v), Some(v))
    } else {
        (ctx.clone(), None)
    };
    let (a, b) = split_betas(work.betas).context("split")?;
    let paths = disjoint_paths(g, work.alive, a, b, a.len())
        .map_err(|e| Failure::Verification(format!("no vertex-disjoint A-B paths: {e}")))?;
    let built = build_forest_traced(&work, &paths).context("forest")?;
    let out = json!({
        "graph": inst.name,
        "matching": matching,
        "deleted": d,
        "context": ctx,
        "split_off": split_off,
        "sources": a,
        "sinks": b,
        "paths": paths,
        "combined": built.combined,
        "stripped_cycles": built.stripped_cycles,
        "certificate": built.certificate,
        "certificate_labels": labeled_edges(g, &built.certificate.edges),
    });
    let check = built.certificate.check(g);
    emit(&out, args.format, || {
        let mut s = format!("deleted {}, beta-vertices {}\n", g.format_set(d), g.format_set(ctx.betas));
        if let Some(v) = split_off {
            s.push_str(&format!("split off beta-vertex {}\n", g.label(v)));
        }
        let edges: Vec<String> = labeled_edges(g, &built.certificate.edges).iter().map(|[u, v]| format!("{u}-{v}")).collect();
        s.push_str(&format!("certificate: {}\n", edges.join(" ")));
        s
    })?;
    check.map_err(|e| Failure::Verification(format!("certificate invalid: {e}")))
}

fn cmd_play(args: PlayArgs) -> Outcome {
    let inst = source::resolve(&args.graph)?;
    let g = &inst.graph;
    let human = match args.role {
        HumanRole::Lister => Role::Lister,
        HumanRole::Painter => Role::Painter,
    };
    let solver = shared_solver(g, args.common.solve_options()).context("solver")?;
    let stdin = io::stdin();
    let mut input = stdin.lock();
    let mut out = io::stdout().lock();
    let ending = play::run(g, human, solver.clone(), &mut input, &mut out)?;
    let (transcript, finished) = match ending {
        play::Ending::Finished(t) => (t, true),
        play::Ending::Aborted(t) => (t, false),
    };
    if let Some(path) = &args.transcript {
        fs::write(path, serde_json::to_string_pretty(&transcript).expect("transcripts serialize"))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    if !finished {
        writeln!(out, "input ended; partial transcript after {} round(s)", transcript.moves.len())?;
        return Err(Failure::Input(anyhow!("input ended before the game finished")));
    }
    let value = solver.lock().unwrap_or_else(|e| e.into_inner()).value(g.vertices()).context("solve")?;
    writeln!(out, "game value {value}")?;
    let main = verify::verify_main_theorem(&inst, args.k, &VerifyOptions::default());
    if matches!(main, Ok(r) if r.verdict != Verdict::HypothesesUnmet) {
        let bound = 3 * g.n() / 2 + args.k;
        let met = transcript.score >= bound;
        writeln!(out, "bound 3n/2 + k = {bound}: {}", if met { "met" } else { "not met" })?;
    }
    Ok(())
}

#[derive(Serialize)]
struct SweepRow {
    graph: String,
    n: usize,
    edges: usize,
    value: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    closed_form: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn closed_form(name: &str, n: usize) -> Option<u32> {
    match name.split_once(':')?.0 {
        "path" => Some(closed_form_path(n)),
        "star" => Some(closed_form_star(n)),
        "complete" => Some(closed_form_complete(n)),
        "empty" => Some(n as u32),
        _ => None,
    }
}

fn cmd_sweep(args: SweepArgs) -> Outcome {
    let family = family::expand(&args.sweep, args.seed)?;
    let opts = VerifyOptions { solve: args.common.solve_options(), budget: args.budget };
    if let Some(claim) = &args.claim {
        let claim: ClaimId = claim.parse().map_err(|e: VerifyError| Failure::Input(e.into()))?;
        let mut reports = Vec::new();
        for inst in &family {
            match verify_claim(claim, inst, args.k, &opts) {
                Ok(r) => reports.push(r),
                Err(VerifyError::Precondition(why)) => log::info!("{}: {why}", inst.name),
                Err(e) => return Err(anyhow::Error::from(e).into()),
            }
        }
        emit(&reports, args.common.format, || render(&reports))?;
        return verdict_status(&reports);
    }
    if args.adversarial {
        let k = args.k.unwrap_or(1);
        let mut rows = Vec::new();
        let mut failed = Vec::new();
        for inst in &family {
            let g = &inst.graph;
            let Some(m) = inst.perfect_matching() else {
                log::info!("{}: no perfect matching", inst.name);
                continue;
            };
            let solver = shared_solver(g, opts.solve.clone()).context("solver")?;
            let lister = match lister_3k_strategy(g, &m, k, solver) {
                Ok(l) => l,
                Err(e) => {
                    log::info!("{}: {e}", inst.name);
                    continue;
                }
            };
            let report = adversarial_sweep(g, &lister, args.budget).context("sweep")?;
            let bound = 3 * g.n() / 2 + k;
            if report.complete && report.min_score < bound {
                failed.push(inst.name.clone());
            }
            rows.push(json!({"graph": inst.name, "bound": bound, "sweep": report}));
        }
        emit(&rows, args.common.format, || {
            rows.iter()
                .map(|r| {
                    format!(
                        "{}: min {} over {} branches (bound {}), coverage {}\n",
                        r["graph"].as_str().unwrap_or_default(),
                        r["sweep"]["min_score"],
                        r["sweep"]["branches"],
                        r["bound"],
                        r["sweep"]["coverage"]
                    )
                })
                .collect()
        })?;
        if !failed.is_empty() {
            return Err(Failure::Verification(format!("3k Lister fell below 3n/2 + k on {}", failed.join(", "))));
        }
        return Ok(());
    }
    let mut rows = Vec::new();
    let mut capped = false;
    for inst in &family {
        let g = &inst.graph;
        let (value, error) = match solver::solve(g, &opts.solve) {
            Ok(r) => (Some(r.value), None),
            Err(e @ (SolveError::CapExceeded { .. } | SolveError::Timeout { .. })) => {
                capped = true;
                (None, Some(e.to_string()))
            }
            Err(e) => return Err(anyhow::Error::from(e).into()),
        };
        rows.push(SweepRow {
            graph: inst.name.clone(),
            n: g.n(),
            edges: g.edge_count(),
            value,
            closed_form: closed_form(&inst.name, g.n()),
            error,
        });
    }
    emit(&rows, args.common.format, || {
        rows.iter()
            .map(|r| {
                let value = r.value.map_or_else(|| "-".to_string(), |v| v.to_string());
                let cf = r.closed_form.map(|c| format!(" (closed form {c})")).unwrap_or_default();
                format!("{}: n={} m={} value {}{}\n", r.graph, r.n, r.edges, value, cf)
            })
            .collect()
    })?;
    let mismatched: Vec<&str> = rows
        .iter()
        .filter(|r| matches!((r.value, r.closed_form), (Some(v), Some(c)) if v != c))
        .map(|r| r.graph.as_str())
        .collect();
    if !mismatched.is_empty() {
        return Err(Failure::Verification(format!("closed form disagrees on {}", mismatched.join(", "))));
    }
    if capped {
        return Err(Failure::Resource(anyhow!("some graphs exceeded the solver cap or timeout")));
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Construct(a) => cmd_construct(a),
        Command::Play(a) => cmd_play(a),
        Command::Sweep(a) => cmd_sweep(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Input(e) | Failure::Resource(e) => eprintln!("error: {e:#}"),
                Failure::Verification(msg) => eprintln!("verification failed: {msg}"),
            }
            ExitCode::from(f.code())
        }
    }
}
