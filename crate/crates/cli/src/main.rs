//! Command-line front end: build and export planes, construct arcs and
//! certificates, tabulate bounds, run searches, and verify certificates.
//!
//! Exit codes: 0 success/valid, 1 invalid certificate or violated axiom,
//! 2 usage error, 3 search budget exhausted.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use noninc::arcs::{self, ArcConstruction, ArcError};
use noninc::bounds::{bound_csv, figure_csv};
use noninc::gf::FieldTable;
use noninc::plane::Plane;
use noninc::search::{
    exact_f, greedy_heuristic, verify_certificate, NonincidenceCertificate, SearchConfig,
    SearchStatus, DEFAULT_NODE_BUDGET,
};

#[derive(Parser)]
#[command(
    name = "noninc",
    version,
    about = "Projective planes, maximal arcs, and extremal nonincident point/line sets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build PG(2,q), or validate an imported incidence matrix
    Plane(PlaneArgs),
    /// Construct a Denniston maximal (s,2^u)-arc in PG(2,2^v)
    Arc(ArcArgs),
    /// Tabulate the nonincidence bound per order as CSV
    Bound {
        /// Largest order to tabulate
        #[arg(long)]
        q_max: u64,
    },
    /// Search a plane for large nonincident point/line sets
    Search(SearchArgs),
    /// Check a certificate file against a plane
    Verify {
        /// Plane: an order q for PG(2,q), or a path to an incidence file
        #[arg(long)]
        plane: String,
        /// Certificate file to verify
        #[arg(long)]
        cert: PathBuf,
    },
    /// Emit the bound curve and the diagonal as CSV
    Figure {
        /// Plane order
        #[arg(long)]
        q: u64,
        /// Largest s to tabulate
        #[arg(long)]
        s_max: u64,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct PlaneSource {
    /// Order of the plane to construct (prime power)
    #[arg(long)]
    q: Option<u64>,
    /// Incidence matrix file to import and validate
    #[arg(long)]
    import: Option<PathBuf>,
}

#[derive(Args)]
struct PlaneArgs {
    #[command(flatten)]
    source: PlaneSource,
    /// Write the incidence matrix to this file
    #[arg(long)]
    export: Option<PathBuf>,
}

#[derive(Args)]
struct ArcArgs {
    /// Field exponent: the arc lives in PG(2,2^v)
    #[arg(long)]
    v: u32,
    /// Arc degree exponent: lines meet the arc in 0 or 2^u points
    #[arg(long)]
    u: u32,
    /// Write the nonincidence certificate here (requires u = v/2)
    #[arg(long)]
    cert: Option<PathBuf>,
    /// Largest plane order the construction may build
    #[arg(long, default_value_t = arcs::DEFAULT_ORDER_CAP)]
    max_order: u32,
}

#[derive(Args)]
struct SearchArgs {
    #[command(flatten)]
    source: PlaneSource,
    /// Exact branch-and-bound (the default)
    #[arg(long, conflicts_with = "heuristic")]
    exact: bool,
    /// Seeded greedy heuristic instead of exact search
    #[arg(long)]
    heuristic: bool,
    /// Number of heuristic seeds to sweep
    #[arg(long, default_value_t = 10, requires = "heuristic")]
    seeds: u64,
    /// Write the best certificate found to this file
    #[arg(long)]
    cert: Option<PathBuf>,
    /// Branch-and-bound node budget
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    budget: u64,
    /// Worker threads for the exact search
    #[arg(long, env = "NONINC_THREADS", default_value_t = 1)]
    threads: usize,
    /// Allow scheduling-dependent certificates (values stay exact)
    #[arg(long)]
    nondeterministic: bool,
}

/// Failure classes aligned with the exit-code contract.
enum Failure {
    Usage(String),
    Invalid(String),
    Budget(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Invalid(_) => 1,
            Failure::Budget(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Invalid(m) | Failure::Budget(m) => m,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Plane(args) => cmd_plane(args),
        Command::Arc(args) => cmd_arc(args),
        Command::Bound { q_max } => {
            if q_max < 2 {
                return Err(Failure::Usage("--q-max must be at least 2".into()));
            }
            print!("{}", bound_csv(q_max));
            Ok(())
        }
        Command::Search(args) => cmd_search(args),
        Command::Verify { plane, cert } => cmd_verify(&plane, &cert),
        Command::Figure { q, s_max } => {
            if q < 2 {
                return Err(Failure::Usage("--q must be at least 2".into()));
            }
            print!("{}", figure_csv(q, s_max));
            Ok(())
        }
    }
}

/// q = p^k for prime p, or nothing.
fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q {
        if q.is_multiple_of(p) {
            break;
        }
        p += 1;
    }
    if p * p > q {
        return Some((q, 1));
    }
    let mut m = q;
    let mut k = 0u32;
    while m.is_multiple_of(p) {
        m /= p;
        k += 1;
    }
    (m == 1).then_some((p, k))
}

fn build_pg2(q: u64) -> Result<Plane, Failure> {
    let (p, k) =
        prime_power(q).ok_or_else(|| Failure::Usage(format!("q = {q} is not a prime power")))?;
    let field = FieldTable::build(p, k, None)
        .map_err(|e| Failure::Usage(format!("cannot build GF({q}): {e}")))?;
    Ok(Plane::build_pg2(&field))
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents)
        .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn import_plane(path: &Path) -> Result<Plane, Failure> {
    let text = read_file(path)?;
    Plane::from_incidence_text(&text).map_err(|e| Failure::Invalid(e.to_string()))
}

fn load_plane(source: &PlaneSource) -> Result<Plane, Failure> {
    match (source.q, &source.import) {
        (Some(q), None) => build_pg2(q),
        (None, Some(path)) => import_plane(path),
        _ => unreachable!("clap enforces exactly one plane source"),
    }
}

fn cmd_plane(args: PlaneArgs) -> Result<(), Failure> {
    let plane = load_plane(&args.source)?;
    let q = plane.q();
    println!("plane of order q = {q}");
    println!(
        "points = {n}, lines = {n}, points per line = {}",
        q + 1,
        n = plane.size()
    );
    println!("reference = {}", plane.reference());
    if let Some(path) = &args.export {
        write_file(path, &plane.to_incidence_text())?;
        eprintln!("wrote incidence matrix to {}", path.display());
    }
    Ok(())
}

fn arc_failure(err: ArcError) -> Failure {
    match err {
        ArcError::BadParameters(_) => Failure::Usage(err.to_string()),
        _ => Failure::Invalid(err.to_string()),
    }
}

fn cmd_arc(args: ArcArgs) -> Result<(), Failure> {
    let (plane, arc) =
        arcs::denniston_arc_capped(args.v, args.u, args.max_order).map_err(arc_failure)?;
    let check = arcs::verify_maximal_arc(&plane, arc.points())
        .map_err(|e| Failure::Invalid(e.to_string()))?;
    println!(
        "denniston arc in PG(2,{}): s = {}, beta = {}",
        plane.q(),
        arc.size(),
        arc.beta()
    );
    println!(
        "external lines = {}, secant lines = {}",
        check.external, check.secant
    );
    if let ArcConstruction::Denniston { b, basis, .. } = arc.construction() {
        let basis = basis
            .iter()
            .map(u32::to_string)
            .collect::<Vec<_>>()
            .join(",");
        println!("construction: b = {b}, H basis = {basis}");
    }
    if let Some(path) = &args.cert {
        let cert = arcs::nonincident_from_arc(&plane, &arc).map_err(arc_failure)?;
        write_file(path, &cert.to_text())?;
        eprintln!("wrote certificate to {}", path.display());
    }
    Ok(())
}

fn cmd_search(args: SearchArgs) -> Result<(), Failure> {
    let plane = load_plane(&args.source)?;
    if args.heuristic {
        let mut best: Option<NonincidenceCertificate> = None;
        for seed in 0..args.seeds.max(1) {
            let cert = greedy_heuristic(&plane, seed);
            if best.as_ref().is_none_or(|b| cert.size() > b.size()) {
                best = Some(cert);
            }
        }
        let best = best.expect("at least one seed runs");
        println!("f>={} heuristic seeds={}", best.size(), args.seeds.max(1));
        if let Some(path) = &args.cert {
            write_file(path, &best.to_text())?;
            eprintln!("wrote certificate to {}", path.display());
        }
        return Ok(());
    }

    let cfg = SearchConfig {
        node_budget: args.budget,
        workers: args.threads.max(1),
        deterministic: !args.nondeterministic,
        initial: None,
    };
    let result = exact_f(&plane, &cfg).map_err(|e| Failure::Usage(e.to_string()))?;
    let status = match result.status {
        SearchStatus::Proven => "proven",
        SearchStatus::BudgetExhausted => "budget_exhausted",
    };
    println!("f={} {status}", result.value);
    eprintln!("nodes = {}", result.nodes);
    if let Some(path) = &args.cert {
        write_file(path, &result.certificate.to_text())?;
        eprintln!("wrote certificate to {}", path.display());
    }
    if result.status == SearchStatus::BudgetExhausted {
        return Err(Failure::Budget(format!(
            "node budget {} exhausted; best incumbent f>={}",
            args.budget, result.value
        )));
    }
    Ok(())
}

fn cmd_verify(plane_spec: &str, cert_path: &Path) -> Result<(), Failure> {
    let plane = match plane_spec.parse::<u64>() {
        Ok(q) => build_pg2(q)?,
        Err(_) => import_plane(Path::new(plane_spec))?,
    };
    let text = read_file(cert_path)?;
    let cert = NonincidenceCertificate::from_text(&plane, &text)
        .map_err(|e| Failure::Invalid(e.to_string()))?;
    match verify_certificate(&plane, &cert) {
        Ok(true) => {
            println!(
                "valid: {} points and {} lines mutually nonincident",
                cert.points().len(),
                cert.lines().len()
            );
            Ok(())
        }
        Ok(false) => Err(Failure::Invalid(
            "certificate does not verify: sizes disagree or an incidence is present".into(),
        )),
        Err(e) => Err(Failure::Invalid(e.to_string())),
    }
}
