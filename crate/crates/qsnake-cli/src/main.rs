//! Command-line surface over the core library: cluster expansions as JSON,
//! matching lattices as DOT, level tables and fixed-point tables as CSV, and
//! the identity suites as pass/fail reports.
//!
//! Exit codes: 0 on success, 1 when a verification or route check fails,
//! 2 on bad arguments. Results go to stdout, diagnostics to stderr, and any
//! fixed invocation produces byte-identical output.

use clap::{Args, Parser, Subcommand, ValueEnum};
use qsnake_core::kronecker::{self, Kronecker, KroneckerGraph, H_CONVENTION};
use qsnake_core::snake::{demo_graph, MatchingLattice, Side};
use qsnake_core::stembridge;
use qsnake_core::typea::{self, TypeA, TypeAError};
use std::process::ExitCode;

/// Everything is exact, so the only limit is enumeration size; matching
/// counts grow like the even-index Fibonacci numbers, and 12 keeps a single
/// expansion near 2*10^5 matchings.
const N_BOUND: usize = 12;
/// Lattices are emitted node by node; past this the DOT output stops being
/// something a human or a layout engine wants to see.
const LATTICE_BOUND: usize = 8;
/// Interval expansions enumerate subsets of the interval.
const PATH_BOUND: usize = 16;

#[derive(Parser)]
#[command(
    name = "qsnake",
    version,
    about = "Exact quantum cluster expansions, matching lattices, and identity checks"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print a cluster variable expansion as JSON.
    #[command(subcommand)]
    Expand(ExpandCmd),
    /// Print a matching lattice in DOT format.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Run identity suites and print one pass/fail line per check.
    Verify(VerifyArgs),
    /// Print the level table of a Kronecker snake graph as CSV.
    Table(TableArgs),
    /// Print the q = -1 fixed-point table as CSV.
    Stembridge(StembridgeArgs),
    /// Print the companion element s_N as JSON.
    Bps(BpsArgs),
}

#[derive(Subcommand)]
enum ExpandCmd {
    /// The Kronecker variable x_{N+3} over the initial quantum torus.
    Kronecker(ExpandKroneckerArgs),
    /// An interval variable of an oriented type A path.
    Typea(ExpandTypeaArgs),
}

#[derive(Args)]
struct ExpandKroneckerArgs {
    /// Expands x_{N+3}.
    #[arg(long)]
    n: usize,
    /// Which construction to use.
    #[arg(long, value_enum, conflicts_with = "all_routes")]
    route: Option<Route>,
    /// Emit every route plus an "equal" field; exit 1 if they disagree.
    #[arg(long)]
    all_routes: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Route {
    /// Closed formula with quantum binomial coefficients.
    Qbinom,
    /// Weighted perfect matchings of the snake graph.
    Matchings,
    /// Seed mutation along the exchange sequence.
    Mutation,
}

#[derive(Args)]
struct ExpandTypeaArgs {
    /// Orientation word over '<' and '>', one character per internal edge
    /// (empty for the one-vertex path).
    #[arg(long, allow_hyphen_values = true)]
    orient: String,
    /// Interval "a..b" with 1 <= a <= b <= number of vertices.
    #[arg(long)]
    interval: String,
}

#[derive(Subcommand)]
enum LatticeCmd {
    /// Lattice of the odd-family graph G_N (2N+1 tiles).
    #[command(alias = "kronecker-G")]
    KroneckerG {
        #[arg(long)]
        n: usize,
    },
    /// The 11-matching demonstration graph.
    Demo,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    suite: Suite,
    /// Size bound passed to the n-indexed checks; a few expensive checks cap
    /// their own bound lower and say so in their line.
    #[arg(long = "n-max", default_value_t = 6)]
    n_max: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    All,
    Seed,
    Kronecker,
    Typea,
    Stembridge,
}

#[derive(Args)]
struct TableArgs {
    /// Graph family: g has 2N+1 tiles, h has 2N.
    #[arg(long, value_enum, default_value_t = Family::G)]
    family: Family,
    #[arg(long)]
    n: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    G,
    H,
}

#[derive(Args)]
struct StembridgeArgs {
    #[arg(long = "n-max", default_value_t = 6)]
    n_max: usize,
}

#[derive(Args)]
struct BpsArgs {
    #[arg(long)]
    n: usize,
}

fn main() -> ExitCode {
    match Cli::parse().cmd {
        Cmd::Expand(ExpandCmd::Kronecker(a)) => expand_kronecker(a),
        Cmd::Expand(ExpandCmd::Typea(a)) => expand_typea(a),
        Cmd::Lattice(LatticeCmd::KroneckerG { n }) => lattice_kronecker_g(n),
        Cmd::Lattice(LatticeCmd::Demo) => lattice_demo(),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Table(a) => cmd_table(a),
        Cmd::Stembridge(a) => cmd_stembridge(a),
        Cmd::Bps(a) => cmd_bps(a),
    }
}

fn usage(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn failure(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(1)
}

fn expand_kronecker(a: ExpandKroneckerArgs) -> ExitCode {
    if a.n > N_BOUND {
        return usage(&format!("--n must be at most {N_BOUND}"));
    }
    let kr = Kronecker::new();
    let mutation = match kr.x_elem(a.n as i64 + 3) {
        Ok(x) => x,
        Err(e) => return failure(&e.to_string()),
    };
    if a.all_routes {
        let qb = kr.x_via_qbinom(a.n);
        let pm = kr.x_via_matchings(a.n);
        let equal = qb == pm && pm == mutation;
        println!(
            "{{\"qbinom\":{},\"matchings\":{},\"mutation\":{},\"equal\":{}}}",
            qb.to_json_string(),
            pm.to_json_string(),
            mutation.to_json_string(),
            equal
        );
        if equal {
            ExitCode::SUCCESS
        } else {
            failure("expansion routes disagree")
        }
    } else {
        let x = match a.route.unwrap_or(Route::Qbinom) {
            Route::Qbinom => kr.x_via_qbinom(a.n),
            Route::Matchings => kr.x_via_matchings(a.n),
            Route::Mutation => mutation,
        };
        println!("{}", x.to_json_string());
        ExitCode::SUCCESS
    }
}

fn parse_interval(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("interval must look like \"a..b\", got {s:?}"))?;
    let a: usize = a.trim().parse().map_err(|_| format!("bad interval endpoint {a:?}"))?;
    let b: usize = b.trim().parse().map_err(|_| format!("bad interval endpoint {b:?}"))?;
    Ok((a, b))
}

fn expand_typea(args: ExpandTypeaArgs) -> ExitCode {
    if args.orient.len() + 1 > PATH_BOUND {
        return usage(&format!("orientation word limited to {} characters", PATH_BOUND - 1));
    }
    let (a, b) = match parse_interval(&args.interval) {
        Ok(p) => p,
        Err(m) => return usage(&m),
    };
    let ta = match TypeA::new(&args.orient) {
        Ok(t) => t,
        Err(e) => return usage(&e.to_string()),
    };
    match ta.expand_arc(a, b) {
        Ok(x) => {
            println!("{}", x.to_json_string());
            ExitCode::SUCCESS
        }
        Err(e @ TypeAError::BadInterval { .. }) => usage(&e.to_string()),
        Err(e) => failure(&e.to_string()),
    }
}

fn lattice_kronecker_g(n: usize) -> ExitCode {
    if n > LATTICE_BOUND {
        return usage(&format!("--n must be at most {LATTICE_BOUND}"));
    }
    let kg = KroneckerGraph::g(n);
    match MatchingLattice::build(kg.graph(), kg.p_min()) {
        Ok(lat) => {
            print!("{}", lat.to_dot());
            ExitCode::SUCCESS
        }
        Err(e) => failure(&e.to_string()),
    }
}

fn lattice_demo() -> ExitCode {
    let g = demo_graph();
    let min = match g.boundary_matching_containing(0, Side::W) {
        Ok(m) => m,
        Err(e) => return failure(&e.to_string()),
    };
    match MatchingLattice::build(&g, &min) {
        Ok(lat) => {
            print!("{}", lat.to_dot());
            ExitCode::SUCCESS
        }
        Err(e) => failure(&e.to_string()),
    }
}

type Check = (String, Box<dyn FnOnce() -> Result<(), String>>);

fn seed_checks(n_max: usize) -> Vec<Check> {
    let len = n_max.min(6);
    vec![
        (
            format!("seed/kronecker-words (len <= {len})"),
            Box::new(move || kronecker::verify_seed_structure_sequences(&Kronecker::new(), len)),
        ),
        (
            format!("seed/path-words (len <= {len})"),
            Box::new(move || typea::verify_path_seed_structure(len)),
        ),
    ]
}

fn kronecker_checks(n_max: usize) -> Vec<Check> {
    let swap = n_max.min(6);
    let neg = n_max.min(5);
    let mut checks: Vec<Check> = Vec::new();
    let mut push = |name: String, f: Box<dyn FnOnce() -> Result<(), String>>| {
        checks.push((name, f));
    };
    push(
        format!("kronecker/route-agreement (n <= {n_max})"),
        Box::new(move || kronecker::verify_route_agreement(&Kronecker::new(), n_max)),
    );
    push(
        format!("kronecker/exchange-relations (n <= {n_max})"),
        Box::new(move || kronecker::verify_exchange_relations(&Kronecker::new(), n_max)),
    );
    push(
        format!("kronecker/torus-recursions (n <= {n_max})"),
        Box::new(move || {
            let kr = Kronecker::new();
            let s_of = |n: usize| kr.s_via_qbinom(n);
            kronecker::verify_torus_recursions(&kr, n_max, &s_of)
        }),
    );
    push(
        format!("kronecker/coefficient-recursions (n <= {n_max})"),
        Box::new(move || kronecker::verify_coefficient_recursions(n_max)),
    );
    push(
        format!("kronecker/level-tables (n <= {n_max})"),
        Box::new(move || kronecker::verify_level_tables(n_max)),
    );
    push(
        format!("kronecker/level-counts (n <= {n_max})"),
        Box::new(move || kronecker::verify_level_counts(n_max)),
    );
    push(
        "kronecker/s1-ground-truth".to_string(),
        Box::new(|| kronecker::verify_s1_ground_truth(&Kronecker::new())),
    );
    push(
        format!("kronecker/commutation-exponents (n <= {n_max})"),
        Box::new(move || kronecker::verify_commutation_exponents(&Kronecker::new(), n_max)),
    );
    push(
        format!("kronecker/bar-invariance (n <= {n_max})"),
        Box::new(move || kronecker::verify_bar_invariance(n_max)),
    );
    push(
        format!("kronecker/degree-vectors (n <= {n_max})"),
        Box::new(move || kronecker::verify_nu_formula(n_max)),
    );
    push(
        format!("kronecker/weight2-twist-neighbors (n <= {n_max})"),
        Box::new(move || kronecker::verify_weight2_twist_neighbors(n_max)),
    );
    push(
        format!("kronecker/g-degrees (n <= {n_max})"),
        Box::new(move || kronecker::verify_g_degrees(&Kronecker::new(), n_max)),
    );
    push(
        format!("kronecker/swap-symmetry (j <= {swap})"),
        Box::new(move || kronecker::verify_swap_symmetry(&Kronecker::new(), swap)),
    );
    push(
        format!("kronecker/classical-limits (n <= {n_max})"),
        Box::new(move || kronecker::verify_classical_limits(&Kronecker::new(), n_max)),
    );
    push(
        format!("kronecker/negative-side-matchings (n <= {neg})"),
        Box::new(move || kronecker::verify_x_neg_matchings(&Kronecker::new(), neg)),
    );
    push(
        "kronecker/h-convention-resolution".to_string(),
        Box::new(|| {
            let conv = kronecker::resolve_h_convention(&Kronecker::new())?;
            if conv == H_CONVENTION {
                Ok(())
            } else {
                Err("resolved convention differs from the built-in one".to_string())
            }
        }),
    );
    checks
}

fn typea_checks(n_max: usize) -> Vec<Check> {
    let ident = n_max.min(8);
    let expand = n_max.min(5);
    vec![
        (
            format!("typea/component-identity (n <= {ident})"),
            Box::new(move || {
                for n in 1..=ident {
                    typea::verify_interval_component_identity(n)?;
                }
                Ok(())
            }),
        ),
        (
            format!("typea/expansions-vs-walk (n <= {expand})"),
            Box::new(move || {
                for n in 1..=expand {
                    typea::verify_path_expansions(n)?;
                }
                Ok(())
            }),
        ),
        (
            format!("typea/compatibility (n <= {ident})"),
            Box::new(move || typea::verify_path_compatibility(ident)),
        ),
    ]
}

fn stembridge_checks(n_max: usize) -> Vec<Check> {
    vec![(
        format!("stembridge/fixed-points (n <= {n_max})"),
        Box::new(move || stembridge::verify_phenomenon(n_max).map(|_| ())),
    )]
}

fn cmd_verify(a: VerifyArgs) -> ExitCode {
    if a.n_max > N_BOUND {
        return usage(&format!("--n-max must be at most {N_BOUND}"));
    }
    let mut checks: Vec<Check> = Vec::new();
    if matches!(a.suite, Suite::All | Suite::Seed) {
        checks.extend(seed_checks(a.n_max));
    }
    if matches!(a.suite, Suite::All | Suite::Kronecker) {
        checks.extend(kronecker_checks(a.n_max));
    }
    if matches!(a.suite, Suite::All | Suite::Typea) {
        checks.extend(typea_checks(a.n_max));
    }
    if matches!(a.suite, Suite::All | Suite::Stembridge) {
        checks.extend(stembridge_checks(a.n_max));
    }
    let total = checks.len();
    let mut failed = 0usize;
    for (name, run) in checks {
        match run() {
            Ok(()) => println!("pass {name}"),
            Err(e) => {
                failed += 1;
                println!("FAIL {name}: {e}");
            }
        }
    }
    let plural = if total == 1 { "" } else { "s" };
    if failed == 0 {
        eprintln!("all {total} check{plural} passed");
        ExitCode::SUCCESS
    } else {
        eprintln!("{failed} of {total} check{plural} failed");
        ExitCode::from(1)
    }
}

fn cmd_table(a: TableArgs) -> ExitCode {
    if a.n > N_BOUND {
        return usage(&format!("--n must be at most {N_BOUND}"));
    }
    let kg = match a.family {
        Family::G => KroneckerGraph::g(a.n),
        Family::H => KroneckerGraph::h(a.n, H_CONVENTION),
    };
    let levels = kg.level_sets();
    let coeffs = kg.coefficient_table();
    println!("p,r,level_size,twist_polynomial");
    for ((p, r), members) in &levels {
        let poly = &coeffs[&(*p, *r)];
        println!("{p},{r},{},{poly}", members.len());
    }
    ExitCode::SUCCESS
}

fn cmd_stembridge(a: StembridgeArgs) -> ExitCode {
    if a.n_max > N_BOUND {
        return usage(&format!("--n-max must be at most {N_BOUND}"));
    }
    match stembridge::csv_table(a.n_max) {
        Ok(csv) => {
            print!("{csv}");
            ExitCode::SUCCESS
        }
        Err(e) => failure(&e),
    }
}

fn cmd_bps(a: BpsArgs) -> ExitCode {
    if a.n > N_BOUND {
        return usage(&format!("--n must be at most {N_BOUND}"));
    }
    println!("{}", Kronecker::new().s_via_qbinom(a.n).to_json_string());
    ExitCode::SUCCESS
}
