//! `bsstar`: construct bubble-sort star graphs, measure their distance
//! structure, and build or check decycling certificates.
//!
//! Exit codes: 0 success, 1 a verification or cross-check failed, 2 bad
//! usage or unparseable input, 3 a resource limit was hit (memory budget,
//! solver cap, search budget).

use std::fmt;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use bsstar::decycle::{self, DecyclingCertificate};
use bsstar::exact::{self, ExactOutcome, ExactResult, DEFAULT_VERTEX_CAP};
use bsstar::graph::{self, BubbleSortStarGraph, BuildOptions};
use bsstar::metrics;
use bsstar::perm::factorial;
use bsstar::{Error, Permutation, VertexId};

/// Environment override for the cached-adjacency memory budget, in bytes.
const MEMORY_BUDGET_VAR: &str = "BSSTAR_MEMORY_BUDGET";

#[derive(Parser)]
#[command(
    name = "bsstar",
    version,
    about = "Bubble-sort star graphs: distances, diameters, decycling certificates"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// Enumerate neighbors on the fly instead of caching the adjacency table
    #[arg(long, global = true, conflicts_with = "cached")]
    implicit: bool,

    /// Cache the full adjacency table (the default)
    #[arg(long, global = true)]
    cached: bool,

    /// Raise or lower the graph dimension cap (default 10)
    #[arg(long, global = true, value_name = "N")]
    cap_override: Option<usize>,

    /// Seed for randomized cross-checks; core results never depend on it
    #[arg(long, global = true, value_name = "SEED", default_value_t = 0xB5)]
    seed: u64,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Print decycling-number bounds (and the exact value for n <= 5)
    Bounds {
        /// Graph dimension
        n: usize,
    },

    /// Build a decycling certificate
    Construct {
        /// Graph dimension
        n: usize,
        /// Odd base permutation; defaults to the identity with its last two
        /// symbols swapped
        #[arg(long, value_name = "PERM")]
        base: Option<Permutation>,
        /// Write the certificate here; without this it goes to stdout
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },

    /// Check a decycling certificate against the graph it names
    Verify {
        /// Certificate file produced by `construct`
        #[arg(long, value_name = "FILE")]
        cert: PathBuf,
        /// Also require the reserved set to be distance-4 independent
        #[arg(long)]
        deep: bool,
    },

    /// Shortest-path distance between two permutations
    Distance {
        /// Graph dimension
        n: usize,
        #[arg(long, value_name = "PERM")]
        from: Permutation,
        #[arg(long, value_name = "PERM")]
        to: Permutation,
    },

    /// Graph diameter by breadth-first search
    Diameter {
        /// Graph dimension
        n: usize,
        /// Also BFS this many random vertices and compare eccentricities
        #[arg(long, value_name = "SAMPLES")]
        cross_check: Option<usize>,
    },

    /// Transposition route from the k-rotation of a base back to the base
    Route {
        /// Graph dimension
        n: usize,
        /// Rotation offset, 1 <= k < n
        #[arg(long)]
        k: usize,
        /// Base permutation (defaults to the identity)
        #[arg(long, value_name = "PERM")]
        base: Option<Permutation>,
    },

    /// Exact minimum decycling set by branch and bound (small graphs only)
    Exact {
        /// Graph dimension to solve
        #[arg(
            value_name = "N",
            required_unless_present = "edge_list",
            conflicts_with = "edge_list"
        )]
        n: Option<usize>,
        /// Solve the graph in this edge-list file instead
        #[arg(long, value_name = "FILE")]
        edge_list: Option<PathBuf>,
        /// Largest removal-set size to consider
        #[arg(long, value_name = "SIZE")]
        budget: Option<usize>,
        /// Vertex-count cap for the solver (default 24)
        #[arg(long, value_name = "VERTICES")]
        cap: Option<usize>,
    },

    /// Write the graph as DOT or an edge list
    Export {
        /// Graph dimension
        n: usize,
        /// Output layout
        #[arg(value_enum, value_name = "FORMAT")]
        kind: ExportKind,
        /// Write here instead of stdout
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        /// Allow DOT output beyond the readability limit (n > 6)
        #[arg(long)]
        force: bool,
    },

    /// Check that a set of permutations is pairwise distance-k independent
    IndependentCheck {
        /// Permutations to test, as digit strings
        #[arg(
            value_name = "PERM",
            required_unless_present = "cert",
            conflicts_with = "cert"
        )]
        members: Vec<Permutation>,
        /// Take the members from this certificate's reserved list
        #[arg(long, value_name = "FILE")]
        cert: Option<PathBuf>,
        /// Required pairwise distance
        #[arg(long, default_value_t = 4)]
        k: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportKind {
    Dot,
    Edgelist,
}

/// Anything that stops a command before it can report a result.
enum Failure {
    Core(Error),
    Usage(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Core(e) => match e {
                Error::MemoryBudgetExceeded { .. }
                | Error::CacheUnsupported { .. }
                | Error::SolverCapExceeded { .. }
                | Error::Io(_) => 3,
                _ => 2,
            },
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Core(e) => e.fmt(f),
            Failure::Usage(msg) => f.write_str(msg),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Core(Error::Io(e))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.code())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    let g = &cli.global;
    match cli.command {
        Command::Bounds { n } => cmd_bounds(n, g),
        Command::Construct { n, base, out } => cmd_construct(n, base, out.as_deref(), g),
        Command::Verify { cert, deep } => cmd_verify(&cert, deep, g),
        Command::Distance { n, from, to } => cmd_distance(n, &from, &to, g),
        Command::Diameter { n, cross_check } => cmd_diameter(n, cross_check, g),
        Command::Route { n, k, base } => cmd_route(n, k, base, g),
        Command::Exact {
            n,
            edge_list,
            budget,
            cap,
        } => cmd_exact(n, edge_list.as_deref(), budget, cap, g),
        Command::Export {
            n,
            kind,
            out,
            force,
        } => cmd_export(n, kind, out.as_deref(), force, g),
        Command::IndependentCheck { members, cert, k } => {
            cmd_independent_check(members, cert.as_deref(), k, g)
        }
    }
}

fn build_graph(n: usize, g: &GlobalArgs) -> Result<BubbleSortStarGraph, Failure> {
    let mut options = if g.implicit {
        BuildOptions::implicit()
    } else {
        BuildOptions::cached()
    };
    if let Some(cap) = g.cap_override {
        options = options.with_cap(cap);
    }
    if let Some(budget) = memory_budget_from_env()? {
        options.memory_budget_bytes = budget;
    }
    Ok(BubbleSortStarGraph::build(n, options)?)
}

fn memory_budget_from_env() -> Result<Option<u64>, Failure> {
    match std::env::var(MEMORY_BUDGET_VAR) {
        Ok(raw) => raw.trim().parse().map(Some).map_err(|_| {
            Failure::Usage(format!(
                "{MEMORY_BUDGET_VAR} must be a byte count, got {raw:?}"
            ))
        }),
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(Failure::Usage(format!("{MEMORY_BUDGET_VAR}: {e}"))),
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

/// Write to stdout, treating a vanished reader (broken pipe, say the user
/// piped into `head`) as harmless instead of a panic.
fn write_stdout(bytes: &[u8]) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(bytes).and_then(|()| out.flush());
}

/// Print the whole result at once, in the selected format.
fn emit(format: Format, table: String, value: serde_json::Value) {
    match format {
        Format::Table => write_stdout(table.as_bytes()),
        Format::Json => {
            let body = serde_json::to_string_pretty(&value).expect("serializable value");
            write_stdout(format!("{body}\n").as_bytes());
        }
    }
}

fn cmd_bounds(n: usize, g: &GlobalArgs) -> Result<ExitCode, Failure> {
    let report = decycle::bounds_report(n)?;
    let mut t = String::new();
    writeln!(t, "dimension        {n}").unwrap();
    writeln!(t, "vertices         {}", factorial(n)).unwrap();
    writeln!(t, "lower bound      {}", report.lower).unwrap();
    writeln!(t, "upper (built)    {}", report.upper_constructive).unwrap();
    writeln!(t, "upper (trivial)  {}", report.upper_trivial).unwrap();
    match report.exact {
        Some(d) => writeln!(t, "D({n}) = {d} (exact)").unwrap(),
        None => writeln!(
            t,
            "{} <= D({n}) <= {}",
            report.lower, report.upper_constructive
        )
        .unwrap(),
    }
    let value = serde_json::to_value(&report).map_err(Error::from)?;
    emit(g.format, t, value);
    Ok(ExitCode::SUCCESS)
}

fn cmd_construct(
    n: usize,
    base: Option<Permutation>,
    out: Option<&Path>,
    g: &GlobalArgs,
) -> Result<ExitCode, Failure> {
    let cert = decycle::construct(n, base.as_ref())?;
    let body = cert.to_json()?;
    match out {
        None => write_stdout(format!("{body}\n").as_bytes()),
        Some(path) => {
            fs::write(path, format!("{body}\n"))?;
            let mut t = String::new();
            writeln!(t, "method         {}", cert.method).unwrap();
            writeln!(t, "base           {}", cert.base).unwrap();
            writeln!(t, "reserved       {}", cert.reserved.len()).unwrap();
            writeln!(t, "removed_count  {}", cert.removed_count).unwrap();
            writeln!(t, "written        {}", path.display()).unwrap();
            emit(
                g.format,
                t,
                json!({
                    "n": n,
                    "method": cert.method,
                    "base": cert.base,
                    "reserved": cert.reserved.len(),
                    "removed_count": cert.removed_count,
                    "path": path.display().to_string(),
                }),
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(cert_path: &Path, deep: bool, g: &GlobalArgs) -> Result<ExitCode, Failure> {
    let cert = DecyclingCertificate::from_json(&read_text(cert_path)?)?;
    let graph = build_graph(cert.n, g)?;
    let report = decycle::verify_certificate(&graph, &cert, deep)?;
    let mut t = String::new();
    for check in &report.checks {
        let tag = if check.passed { "PASS" } else { "FAIL" };
        writeln!(t, "[{tag}] {}: {}", check.name, check.detail).unwrap();
    }
    if report.passed() {
        writeln!(t, "VERIFY PASS ({} checks)", report.checks.len()).unwrap();
    } else {
        let failed = report.failures().count();
        writeln!(
            t,
            "VERIFY FAIL ({failed} of {} checks)",
            report.checks.len()
        )
        .unwrap();
    }
    let passed = report.passed();
    let value = serde_json::to_value(&report).map_err(Error::from)?;
    emit(g.format, t, value);
    Ok(if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_distance(
    n: usize,
    from: &Permutation,
    to: &Permutation,
    g: &GlobalArgs,
) -> Result<ExitCode, Failure> {
    for p in [from, to] {
        if p.n() != n {
            return Err(Failure::Usage(format!(
                "permutation {p} has {} symbols, expected {n}",
                p.n()
            )));
        }
    }
    let graph = build_graph(n, g)?;
    let d = metrics::distance(&graph, graph.vertex_of(from)?, graph.vertex_of(to)?)?;
    emit(
        g.format,
        format!("d({from}, {to}) = {d}\n"),
        json!({ "n": n, "from": from, "to": to, "distance": d }),
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_diameter(n: usize, cross_check: Option<usize>, g: &GlobalArgs) -> Result<ExitCode, Failure> {
    let graph = build_graph(n, g)?;
    let d = metrics::diameter(&graph)?;
    let mut t = String::new();
    writeln!(t, "diameter  {d}").unwrap();
    let mut agrees = true;
    let mut sampled = serde_json::Value::Null;
    if let Some(samples) = cross_check {
        // Vertex transitivity makes every eccentricity equal the diameter,
        // so random sources give an independent check, not just a bound.
        let eccs = metrics::sampled_eccentricities(&graph, samples, g.seed)?;
        for &(v, ecc) in &eccs {
            if ecc != d {
                agrees = false;
                writeln!(
                    t,
                    "MISMATCH  vertex {v} has eccentricity {ecc}, expected {d}"
                )
                .unwrap();
            }
        }
        if agrees {
            writeln!(
                t,
                "cross-check  {samples} sampled eccentricities all equal {d}"
            )
            .unwrap();
        }
        sampled = json!({
            "samples": samples,
            "seed": g.seed,
            "agrees": agrees,
        });
    }
    emit(
        g.format,
        t,
        json!({ "n": n, "diameter": d, "cross_check": sampled }),
    );
    Ok(if agrees {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_route(
    n: usize,
    k: usize,
    base: Option<Permutation>,
    g: &GlobalArgs,
) -> Result<ExitCode, Failure> {
    let base = match base {
        Some(b) if b.n() != n => {
            return Err(Failure::Usage(format!(
                "base {b} has {} symbols, expected {n}",
                b.n()
            )))
        }
        Some(b) => b,
        None => Permutation::identity(n)?,
    };
    let plan = metrics::rotation_route(&base, k)?;
    let formula = metrics::rotation_distance_formula(n, k)?;
    let replayed = plan.verify();
    let agrees = replayed && plan.len() as u32 == formula;
    let mut t = String::new();
    writeln!(t, "start    {}", plan.start).unwrap();
    writeln!(t, "target   {}", plan.target).unwrap();
    writeln!(t, "moves    {}", plan.move_strings().join(" ")).unwrap();
    writeln!(t, "length   {}", plan.len()).unwrap();
    writeln!(t, "formula  {formula}").unwrap();
    if !replayed {
        writeln!(t, "MISMATCH  replaying the moves does not reach the target").unwrap();
    } else if agrees {
        writeln!(t, "route length matches the distance formula").unwrap();
    } else {
        writeln!(
            t,
            "MISMATCH  route length {} differs from formula value {formula}",
            plan.len()
        )
        .unwrap();
    }
    emit(
        g.format,
        t,
        json!({
            "n": n,
            "k": k,
            "start": plan.start,
            "target": plan.target,
            "moves": plan.move_strings(),
            "length": plan.len(),
            "formula": formula,
            "agrees": agrees,
        }),
    );
    Ok(if agrees {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_exact(
    n: Option<usize>,
    edge_list: Option<&Path>,
    budget: Option<usize>,
    cap: Option<usize>,
    g: &GlobalArgs,
) -> Result<ExitCode, Failure> {
    let cap = cap.unwrap_or(DEFAULT_VERTEX_CAP);
    let result: ExactResult = match (n, edge_list) {
        (Some(n), None) => {
            let graph = build_graph(n, g)?;
            exact::exact_fvs_with_cap(&graph, budget, cap)?
        }
        (None, Some(path)) => {
            let (vertices, edges) = graph::parse_edge_list(&read_text(path)?)?;
            if vertices > cap {
                return Err(Error::SolverCapExceeded { vertices, cap }.into());
            }
            exact::exact_fvs_generic(vertices, &edges, budget)?
        }
        // clap enforces exactly one of the two sources.
        _ => unreachable!("argument parsing guarantees one input source"),
    };
    let mut t = String::new();
    writeln!(t, "vertices        {}", result.vertices).unwrap();
    writeln!(t, "edges           {}", result.edges).unwrap();
    writeln!(t, "nodes explored  {}", result.nodes_explored).unwrap();
    writeln!(t, "elapsed         {:.3}s", result.elapsed.as_secs_f64()).unwrap();
    let code = match &result.outcome {
        ExactOutcome::Optimal {
            optimum,
            optimal_set,
        } => {
            writeln!(t, "minimum decycling number: {optimum}").unwrap();
            let ranks: Vec<String> = optimal_set.iter().map(|v| v.to_string()).collect();
            writeln!(t, "removal set     {}", ranks.join(" ")).unwrap();
            ExitCode::SUCCESS
        }
        ExactOutcome::BudgetExhausted { budget } => {
            writeln!(t, "no solution within budget {budget}").unwrap();
            ExitCode::from(3)
        }
    };
    let value = serde_json::to_value(&result).map_err(Error::from)?;
    emit(g.format, t, value);
    Ok(code)
}

fn cmd_export(
    n: usize,
    kind: ExportKind,
    out: Option<&Path>,
    force: bool,
    g: &GlobalArgs,
) -> Result<ExitCode, Failure> {
    let graph = build_graph(n, g)?;
    let mut buf = Vec::new();
    match kind {
        ExportKind::Dot => graph.write_dot(&mut buf, force)?,
        ExportKind::Edgelist => graph.write_edge_list(&mut buf)?,
    }
    match out {
        None => write_stdout(&buf),
        Some(path) => {
            fs::write(path, &buf).map_err(Error::from)?;
            emit(
                g.format,
                format!("wrote {} bytes to {}\n", buf.len(), path.display()),
                json!({ "n": n, "bytes": buf.len(), "path": path.display().to_string() }),
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_independent_check(
    members: Vec<Permutation>,
    cert: Option<&Path>,
    k: u32,
    g: &GlobalArgs,
) -> Result<ExitCode, Failure> {
    let members = match cert {
        Some(path) => DecyclingCertificate::from_json(&read_text(path)?)?.reserved,
        None => members,
    };
    let Some(first) = members.first() else {
        return Err(Failure::Usage("no permutations to check".into()));
    };
    let n = first.n();
    if let Some(other) = members.iter().find(|p| p.n() != n) {
        return Err(Failure::Usage(format!(
            "mixed dimensions: {first} has {n} symbols but {other} has {}",
            other.n()
        )));
    }
    let graph = build_graph(n, g)?;
    let ids: Vec<VertexId> = members
        .iter()
        .map(|p| graph.vertex_of(p))
        .collect::<Result<_, _>>()?;
    let report = metrics::is_distance_k_independent(&graph, &ids, k)?;
    let mut t = String::new();
    writeln!(t, "members       {}", members.len()).unwrap();
    writeln!(t, "required      {k}").unwrap();
    let witness = match report.witness {
        Some((a, b, d)) => {
            let pa = graph.permutation_of(a)?;
            let pb = graph.permutation_of(b)?;
            writeln!(t, "min distance  {} at d({pa}, {pb})", d).unwrap();
            json!({ "a": pa, "b": pb, "distance": d })
        }
        None => serde_json::Value::Null,
    };
    writeln!(
        t,
        "independent: {}",
        if report.independent { "yes" } else { "no" }
    )
    .unwrap();
    emit(
        g.format,
        t,
        json!({
            "n": n,
            "k": k,
            "members": members.len(),
            "independent": report.independent,
            "min_distance": report.min_distance,
            "witness": witness,
        }),
    );
    Ok(if report.independent {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
