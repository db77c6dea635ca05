//! `torus-homotopy`: construct, classify, and verify equivariant
//! torus-to-sphere maps and their topological jump curves from the command
//! line.
//!
//! Exit codes follow a fixed contract:
//!
//! - `0` — success;
//! - `2` — domain rejection: the requested invariant violates its parity
//!   law, or a family parameter is singular;
//! - `64` — usage error (bad flags, malformed values, invalid grid size);
//! - `70` — numerical failure (a measurement or detection failed after one
//!   automatic grid refinement, or a verification suite found a mismatch).
//!
//! All successful commands print a single deterministic JSON report (or a
//! plain pass/fail table for `verify`) on stdout; diagnostics go to stderr.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use torus_homotopy::degree_invariants::{
    degree_pair, degree_triple, DegreeError, DegreePair, DegreeTriple, MeasuredPair, MeasuredTriple,
};
use torus_homotopy::jump_curves::{
    degree_flip_jump, general_jump_type1, general_jump_type2, rank_n_jump, verify_jump, JumpCurve,
    JumpError, JumpReport,
};
use torus_homotopy::map_constructors::{
    physics_map, realize_pair, realize_triple, weierstrass::weierstrass_maps, MapError, TorusMap,
};
use torus_homotopy::torus_geometry::{
    Grid, InvolutionKind, SampleGrid, SampledMapJson, TorusPoint,
};

/// Measurement grid (per side) when neither `--grid` nor the environment
/// variable is given.
const DEFAULT_MEASURE_GRID: usize = 256;
/// Singular-set detection grid (per side) when none is given.
const DEFAULT_JUMP_GRID: usize = 512;
/// Environment variable overriding the default grid size.
const GRID_ENV: &str = "TORUS_HOMOTOPY_GRID";

const EXIT_DOMAIN: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_NUMERIC: u8 = 70;

// ---------------------------------------------------------------------------
// Command-line grammar
// ---------------------------------------------------------------------------

#[derive(Parser)]
#[command(
    name = "torus-homotopy",
    version,
    about = "Equivariant torus-map invariants, realizations, and jump-curve verification",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct an equivariant map realizing a degree triple or pair,
    /// re-measure it, and optionally export its samples.
    Realize(RealizeArgs),
    /// Measure the complete invariant of a builtin map or a sampled-map
    /// JSON file.
    Classify(ClassifyArgs),
    /// Build a jump curve between two endpoint invariants and verify its
    /// singular set at t = 0.
    Jump(JumpArgs),
    /// Run a named verification suite and print a pass/fail table.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct RealizeArgs {
    /// Realize a type I invariant (requires --triple).
    #[arg(long = "type-i", conflicts_with = "type_ii")]
    type_i: bool,
    /// Realize a type II invariant (requires --pair).
    #[arg(long = "type-ii")]
    type_ii: bool,
    /// Degree triple d0,d,d1 (type I).
    #[arg(long, value_parser = parse_triple, allow_hyphen_values = true, conflicts_with = "pair")]
    triple: Option<DegreeTriple>,
    /// Degree pair dC,d (type II).
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    pair: Option<DegreePair>,
    /// Measurement grid size per side (power of two, at least 16).
    #[arg(long)]
    grid: Option<usize>,
    /// Write the realized map's samples to this path.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Sample export format (with --output).
    #[arg(long, value_enum, default_value_t = ExportFormat::Json)]
    format: ExportFormat,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Builtin map to classify.
    #[arg(long, value_enum, conflicts_with = "input")]
    builtin: Option<Builtin>,
    /// Band parameter t (builtin `physics` only).
    #[arg(long, allow_hyphen_values = true)]
    t: Option<f64>,
    /// Covering index m (builtin `physics` only).
    #[arg(long)]
    m: Option<u32>,
    /// Sampled-map JSON file ({kind, n, samples}) to classify instead of a
    /// builtin; the map is evaluated by nearest-sample lookup.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Measurement grid size per side (power of two, at least 16);
    /// defaults to the file's own grid for --input.
    #[arg(long)]
    grid: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Builtin {
    /// Weierstrass ℘ on the square lattice, via the Riemann-sphere chart.
    WeierstrassP,
    /// Weierstrass ℘′ on the square lattice.
    WeierstrassPPrime,
    /// The two-band lattice family (requires --t and --m).
    Physics,
}

#[derive(Args)]
struct JumpArgs {
    /// Endpoints are type I triples d0,d,d1 (default for 3-entry values).
    #[arg(long = "type-i", conflicts_with = "type_ii")]
    type_i: bool,
    /// Endpoints are type II pairs dC,d.
    #[arg(long = "type-ii")]
    type_ii: bool,
    /// Invariant of the endpoint at t = −1.
    #[arg(long, value_parser = parse_int_list, allow_hyphen_values = true)]
    from: IntList,
    /// Invariant of the endpoint at t = +1.
    #[arg(long, value_parser = parse_int_list, allow_hyphen_values = true)]
    to: IntList,
    /// Block-embed the family into rank-by-rank hermitian matrices
    /// (rank = p + q; endpoints then have eigenvalue signature (p, q)).
    #[arg(long)]
    rank: Option<usize>,
    /// Positive-eigenvalue count of the block embedding.
    #[arg(long)]
    p: Option<usize>,
    /// Negative-eigenvalue count of the block embedding.
    #[arg(long)]
    q: Option<usize>,
    /// Detection grid size per side (power of two, at least 16).
    #[arg(long)]
    grid: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite to run: parity, weierstrass, or jumps.
    suite: String,
    /// Grid size per side for the suite's measurements.
    #[arg(long)]
    grid: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ExportFormat {
    Json,
    Csv,
}

/// Comma-separated integer list (newtype so clap treats it as one value).
#[derive(Clone, Debug)]
struct IntList(Vec<i64>);

fn parse_int_list(s: &str) -> Result<IntList, String> {
    s.split(',')
        .map(|part| {
            part.trim()
                .parse::<i64>()
                .map_err(|_| format!("`{part}` is not an integer"))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(IntList)
}

fn parse_triple(s: &str) -> Result<DegreeTriple, String> {
    match parse_int_list(s)?.0[..] {
        [d0, d, d1] => Ok(DegreeTriple::new(d0, d, d1)),
        ref other => Err(format!(
            "expected three comma-separated integers d0,d,d1, got {}",
            other.len()
        )),
    }
}

fn parse_pair(s: &str) -> Result<DegreePair, String> {
    match parse_int_list(s)?.0[..] {
        [d_c, d] => Ok(DegreePair::new(d_c, d)),
        ref other => Err(format!(
            "expected two comma-separated integers dC,d, got {}",
            other.len()
        )),
    }
}

// ---------------------------------------------------------------------------
// Failure plumbing
// ---------------------------------------------------------------------------

/// A command failure, carrying the exit code contract.
enum Failure {
    /// Exit 2: mathematically impossible request.
    Domain(String),
    /// Exit 64: the invocation itself is malformed.
    Usage(String),
    /// Exit 70: a numerical computation failed or disagreed.
    Numeric(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Domain(_) => EXIT_DOMAIN,
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Numeric(_) => EXIT_NUMERIC,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Domain(m) | Failure::Usage(m) | Failure::Numeric(m) => m,
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// Maps a construction error: parity violations and singular parameters are
/// domain rejections, everything else is numerical.
fn construction_failure(e: MapError) -> Failure {
    match e {
        MapError::NotRealizable { .. } => Failure::Domain(format!(
            "{e}; realizable invariants need d ≡ d0 + d1 (mod 2) for triples and d ≡ dC (mod 2) for pairs"
        )),
        MapError::NormalizationUndefined { .. } => Failure::Domain(e.to_string()),
        other => Failure::Numeric(other.to_string()),
    }
}

/// Maps a measurement error after refinement was already attempted.
fn measurement_failure(e: DegreeError) -> Failure {
    match e {
        DegreeError::NotEquivariant { .. } => Failure::Domain(e.to_string()),
        DegreeError::NotRealizable { .. } => Failure::Domain(e.to_string()),
        other => Failure::Numeric(other.to_string()),
    }
}

// ---------------------------------------------------------------------------
// Grid resolution
// ---------------------------------------------------------------------------

/// Resolves the grid size with precedence flag > environment > default and
/// validates the power-of-two contract.
fn resolve_grid(flag: Option<usize>, default_n: usize) -> Result<usize, Failure> {
    let n = match flag {
        Some(n) => n,
        None => match std::env::var(GRID_ENV) {
            Ok(raw) => raw
                .trim()
                .parse::<usize>()
                .map_err(|_| usage(format!("{GRID_ENV} must be an integer, got `{raw}`")))?,
            Err(std::env::VarError::NotPresent) => default_n,
            Err(e) => return Err(usage(format!("cannot read {GRID_ENV}: {e}"))),
        },
    };
    if n < 16 || !n.is_power_of_two() {
        return Err(usage(format!(
            "grid size must be a power of two and at least 16, got {n}"
        )));
    }
    Ok(n)
}

// ---------------------------------------------------------------------------
// Measurement with one automatic refinement
// ---------------------------------------------------------------------------

/// Measures a triple, doubling the grid once if the first pass reports the
/// resolution as too coarse.
fn measure_triple_refined(
    eval: impl Fn(TorusPoint) -> torus_homotopy::torus_geometry::SphereVec + Copy,
    n: usize,
) -> Result<MeasuredTriple, Failure> {
    match degree_triple(eval, Grid::new(n)) {
        Ok(m) => Ok(m),
        Err(DegreeError::ResolutionTooCoarse { .. }) => {
            eprintln!("note: grid {n} too coarse, retrying at {}", 2 * n);
            degree_triple(eval, Grid::new(2 * n)).map_err(measurement_failure)
        }
        Err(e) => Err(measurement_failure(e)),
    }
}

/// Measures a pair, doubling the grid once on a coarse-resolution report.
fn measure_pair_refined(
    eval: impl Fn(TorusPoint) -> torus_homotopy::torus_geometry::SphereVec + Copy,
    n: usize,
) -> Result<MeasuredPair, Failure> {
    match degree_pair(eval, Grid::new(n)) {
        Ok(m) => Ok(m),
        Err(DegreeError::ResolutionTooCoarse { .. }) => {
            eprintln!("note: grid {n} too coarse, retrying at {}", 2 * n);
            degree_pair(eval, Grid::new(2 * n)).map_err(measurement_failure)
        }
        Err(e) => Err(measurement_failure(e)),
    }
}

// ---------------------------------------------------------------------------
// JSON reports
// ---------------------------------------------------------------------------

#[derive(Serialize)]
#[serde(untagged)]
enum Invariant {
    Triple(DegreeTriple),
    Pair(DegreePair),
}

#[derive(Serialize)]
#[serde(untagged)]
enum Measured {
    Triple(MeasuredTriple),
    Pair(MeasuredPair),
}

#[derive(Serialize)]
struct RealizeReport {
    command: &'static str,
    involution: InvolutionKind,
    requested: Invariant,
    #[serde(flatten)]
    measured: Measured,
    matches: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    samples_written: Option<String>,
}

#[derive(Serialize)]
struct ClassifyReport {
    command: &'static str,
    source: String,
    involution: InvolutionKind,
    #[serde(flatten)]
    measured: Measured,
}

/// Prints a report as pretty JSON on stdout (field order is fixed by the
/// struct, so repeated runs emit identical bytes).
fn emit<T: Serialize>(report: &T) {
    let json = serde_json::to_string_pretty(report).expect("report serialization is infallible");
    println!("{json}");
}

// ---------------------------------------------------------------------------
// realize
// ---------------------------------------------------------------------------

enum Requested {
    Triple(DegreeTriple),
    Pair(DegreePair),
}

fn requested_invariant(args: &RealizeArgs) -> Result<Requested, Failure> {
    if args.type_i && args.pair.is_some() {
        return Err(usage("--type-i takes --triple d0,d,d1, not --pair"));
    }
    if args.type_ii && args.triple.is_some() {
        return Err(usage("--type-ii takes --pair dC,d, not --triple"));
    }
    match (args.triple, args.pair) {
        (Some(t), None) => Ok(Requested::Triple(t)),
        (None, Some(p)) => Ok(Requested::Pair(p)),
        (None, None) => Err(usage(
            "provide --triple d0,d,d1 (type I) or --pair dC,d (type II)",
        )),
        (Some(_), Some(_)) => unreachable!("clap rejects --triple with --pair"),
    }
}

fn cmd_realize(args: RealizeArgs) -> Result<(), Failure> {
    let requested = requested_invariant(&args)?;
    let n = resolve_grid(args.grid, DEFAULT_MEASURE_GRID)?;
    let (map, requested, measured, matches) = match requested {
        Requested::Triple(t) => {
            let map = realize_triple(&t).map_err(construction_failure)?;
            let m = measure_triple_refined(|p| map.eval(p), n)?;
            let matches = m.triple == t;
            (map, Invariant::Triple(t), Measured::Triple(m), matches)
        }
        Requested::Pair(pair) => {
            let map = realize_pair(&pair).map_err(construction_failure)?;
            let m = measure_pair_refined(|p| map.eval(p), n)?;
            let matches = m.pair == pair;
            (map, Invariant::Pair(pair), Measured::Pair(m), matches)
        }
    };
    let samples_written = export_samples(&map, n, args.output.as_deref(), args.format)?;
    let report = RealizeReport {
        command: "realize",
        involution: map.involution,
        requested,
        measured,
        matches,
        samples_written,
    };
    emit(&report);
    if matches {
        Ok(())
    } else {
        Err(Failure::Numeric(
            "measured invariant disagrees with the requested one".into(),
        ))
    }
}

fn export_samples(
    map: &TorusMap,
    n: usize,
    output: Option<&std::path::Path>,
    format: ExportFormat,
) -> Result<Option<String>, Failure> {
    let Some(path) = output else {
        return Ok(None);
    };
    let sampled = SampledMapJson::from_kernel(map.involution, |p| map.eval(p), Grid::new(n));
    let payload = match format {
        ExportFormat::Json => {
            let mut s =
                serde_json::to_string_pretty(&sampled).expect("sample serialization is infallible");
            s.push('\n');
            s
        }
        ExportFormat::Csv => sampled.to_csv(),
    };
    std::fs::write(path, payload)
        .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
    Ok(Some(path.display().to_string()))
}

// ---------------------------------------------------------------------------
// classify
// ---------------------------------------------------------------------------

fn cmd_classify(args: ClassifyArgs) -> Result<(), Failure> {
    match (&args.builtin, &args.input) {
        (Some(builtin), None) => classify_builtin(*builtin, &args),
        (None, Some(path)) => classify_file(path.clone(), args.grid),
        (None, None) => Err(usage("provide --builtin NAME or --input FILE")),
        (Some(_), Some(_)) => unreachable!("clap rejects --builtin with --input"),
    }
}

fn classify_builtin(builtin: Builtin, args: &ClassifyArgs) -> Result<(), Failure> {
    if !matches!(builtin, Builtin::Physics) && (args.t.is_some() || args.m.is_some()) {
        return Err(usage("--t and --m apply only to --builtin physics"));
    }
    let n = resolve_grid(args.grid, DEFAULT_MEASURE_GRID)?;
    let (source, map) = match builtin {
        Builtin::WeierstrassP => ("builtin:weierstrass-p".to_string(), weierstrass_maps().p),
        Builtin::WeierstrassPPrime => (
            "builtin:weierstrass-p-prime".to_string(),
            weierstrass_maps().p_prime,
        ),
        Builtin::Physics => {
            let t = args
                .t
                .ok_or_else(|| usage("--builtin physics requires --t"))?;
            let m = args
                .m
                .ok_or_else(|| usage("--builtin physics requires --m"))?;
            if m == 0 {
                return Err(usage("the covering index --m must be at least 1"));
            }
            let family = physics_map(t, m);
            let map = family.normalized().map_err(construction_failure)?;
            (format!("builtin:physics(t={t}, m={m})"), map)
        }
    };
    let measured = match map.involution {
        InvolutionKind::TypeI => Measured::Triple(measure_triple_refined(|p| map.eval(p), n)?),
        InvolutionKind::TypeII => Measured::Pair(measure_pair_refined(|p| map.eval(p), n)?),
    };
    emit(&ClassifyReport {
        command: "classify",
        source,
        involution: map.involution,
        measured,
    });
    Ok(())
}

fn classify_file(path: PathBuf, grid_flag: Option<usize>) -> Result<(), Failure> {
    let raw = std::fs::read_to_string(&path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let parsed: SampledMapJson = serde_json::from_str(&raw).map_err(|e| {
        usage(format!(
            "{} is not a sampled-map JSON file: {e}",
            path.display()
        ))
    })?;
    if parsed.n < 4 || parsed.samples.len() != parsed.n * parsed.n {
        return Err(usage(format!(
            "{}: expected n ≥ 4 with n² sample rows, got n = {} with {} rows",
            path.display(),
            parsed.n,
            parsed.samples.len()
        )));
    }
    let n = resolve_grid(grid_flag, parsed.n.max(16))?;
    let kind = parsed.kind;
    let samples = parsed.to_sample_grid();
    let eval = nearest_sample(&samples);
    let measured = match kind {
        InvolutionKind::TypeI => Measured::Triple(measure_triple_refined(eval, n)?),
        InvolutionKind::TypeII => Measured::Pair(measure_pair_refined(eval, n)?),
    };
    emit(&ClassifyReport {
        command: "classify",
        source: path.display().to_string(),
        involution: kind,
        measured,
    });
    Ok(())
}

/// Nearest-sample evaluation of a stored grid: exact on the grid's own
/// points, piecewise constant between them, and wrap-around at the seams.
fn nearest_sample(
    samples: &SampleGrid,
) -> impl Fn(TorusPoint) -> torus_homotopy::torus_geometry::SphereVec + Copy + '_ {
    let n = samples.n;
    move |p: TorusPoint| {
        let i = (p.x * n as f64).round() as usize % n;
        let j = (p.y * n as f64).round() as usize % n;
        samples.value(i, j)
    }
}

// ---------------------------------------------------------------------------
// jump
// ---------------------------------------------------------------------------

fn cmd_jump(args: JumpArgs) -> Result<(), Failure> {
    let n = resolve_grid(args.grid, DEFAULT_JUMP_GRID)?;
    let curve = build_jump_curve(&args)?;
    let report = verify_jump_refined(&curve, n)?;
    emit(&report);
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Numeric(format!(
            "jump verification failed: {}",
            report.verdict
        )))
    }
}

fn endpoint_triples(args: &JumpArgs) -> Result<(DegreeTriple, DegreeTriple), Failure> {
    let as_triple = |list: &IntList, which: &str| match list.0[..] {
        [d0, d, d1] => Ok(DegreeTriple::new(d0, d, d1)),
        ref other => Err(usage(format!(
            "--{which} needs three integers d0,d,d1, got {}",
            other.len()
        ))),
    };
    Ok((as_triple(&args.from, "from")?, as_triple(&args.to, "to")?))
}

fn endpoint_pairs(args: &JumpArgs) -> Result<(DegreePair, DegreePair), Failure> {
    let as_pair = |list: &IntList, which: &str| match list.0[..] {
        [d_c, d] => Ok(DegreePair::new(d_c, d)),
        ref other => Err(usage(format!(
            "--{which} needs two integers dC,d, got {}",
            other.len()
        ))),
    };
    Ok((as_pair(&args.from, "from")?, as_pair(&args.to, "to")?))
}

fn build_jump_curve(args: &JumpArgs) -> Result<JumpCurve, Failure> {
    let block = match (args.rank, args.p, args.q) {
        (None, None, None) => None,
        (rank, Some(p), Some(q)) => {
            if let Some(r) = rank {
                if r != p + q {
                    return Err(usage(format!("--rank {r} contradicts --p {p} --q {q}")));
                }
            }
            if p >= 1 && q >= 1 && p + q <= 2 {
                return Err(usage(
                    "a block-embedded jump needs rank p + q ≥ 3; use a plain type-i jump for rank 2",
                ));
            }
            Some((p, q))
        }
        _ => {
            return Err(usage(
                "block embedding needs both --p and --q (with p + q = rank)",
            ))
        }
    };
    if block.is_some() && args.type_ii {
        return Err(usage("rank-n jumps are type I; drop --type-ii"));
    }
    let curve = if let Some((p, q)) = block {
        let (minus, plus) = endpoint_triples(args)?;
        rank_n_jump(&minus, &plus, p, q)
    } else {
        let type_ii = args.type_ii || (!args.type_i && args.from.0.len() == 2);
        if type_ii {
            let (minus, plus) = endpoint_pairs(args)?;
            general_jump_type2(&minus, &plus)
        } else {
            let (minus, plus) = endpoint_triples(args)?;
            general_jump_type1(&minus, &plus)
        }
    };
    curve.map_err(jump_failure)
}

fn jump_failure(e: JumpError) -> Failure {
    match e {
        JumpError::Map(m) => construction_failure(m),
        JumpError::Matrix(m) => usage(m.to_string()),
        JumpError::Degree(d) => measurement_failure(d),
        coarse @ JumpError::ResolutionTooCoarse { .. } => Failure::Numeric(coarse.to_string()),
    }
}

/// Verifies a jump curve, doubling the grid once if detection or endpoint
/// measurement reports the resolution as too coarse.
fn verify_jump_refined(curve: &JumpCurve, n: usize) -> Result<JumpReport, Failure> {
    let coarse = |e: &JumpError| {
        matches!(
            e,
            JumpError::ResolutionTooCoarse { .. }
                | JumpError::Degree(DegreeError::ResolutionTooCoarse { .. })
        )
    };
    match verify_jump(curve, Grid::new(n)) {
        Ok(report) => Ok(report),
        Err(e) if coarse(&e) => {
            eprintln!("note: grid {n} too coarse ({e}), retrying at {}", 2 * n);
            verify_jump(curve, Grid::new(2 * n)).map_err(jump_failure)
        }
        Err(e) => Err(jump_failure(e)),
    }
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct SuiteRow {
    name: String,
    passed: bool,
    detail: String,
}

fn row(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> SuiteRow {
    SuiteRow {
        name: name.into(),
        passed,
        detail: detail.into(),
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<(), Failure> {
    let (rows, suite) = match args.suite.as_str() {
        "parity" => (suite_parity(resolve_grid(args.grid, 128)?), "parity"),
        "weierstrass" => (
            suite_weierstrass(resolve_grid(args.grid, DEFAULT_MEASURE_GRID)?),
            "weierstrass",
        ),
        "jumps" => (suite_jumps(resolve_grid(args.grid, 128)?), "jumps"),
        other => {
            return Err(usage(format!(
                "unknown suite `{other}`; available: parity, weierstrass, jumps"
            )))
        }
    };
    println!("suite: {suite}");
    let mut failed = 0usize;
    for r in &rows {
        let tag = if r.passed { "PASS" } else { "FAIL" };
        println!("{tag}  {}: {}", r.name, r.detail);
        if !r.passed {
            failed += 1;
        }
    }
    println!("{} passed, {failed} failed", rows.len() - failed);
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Numeric(format!(
            "suite {suite}: {failed} of {} checks failed",
            rows.len()
        )))
    }
}

/// Parity sweep: over a window of candidate invariants, the parity predicate,
/// the constructor, and the measured invariant must all agree.
fn suite_parity(n: usize) -> Vec<SuiteRow> {
    use torus_homotopy::degree_invariants::{realizable_pair, realizable_triple};

    let grid = Grid::new(n);
    let mut rows = Vec::new();

    let mut realized = 0usize;
    let mut failure: Option<String> = None;
    'triples: for d0 in -2..=2 {
        for d in -2..=2 {
            for d1 in -2..=2 {
                let t = DegreeTriple::new(d0, d, d1);
                let admissible = realizable_triple(&t);
                if admissible != ((t.d - t.d0 - t.d1) % 2 == 0) {
                    failure = Some(format!("parity predicate wrong on {t}"));
                    break 'triples;
                }
                match realize_triple(&t) {
                    Ok(map) => {
                        if !admissible {
                            failure = Some(format!("constructor accepted inadmissible {t}"));
                            break 'triples;
                        }
                        match map.measure_triple(grid) {
                            Ok(m) if m.triple == t => realized += 1,
                            Ok(m) => {
                                failure = Some(format!("{t} measured as {}", m.triple));
                                break 'triples;
                            }
                            Err(e) => {
                                failure = Some(format!("{t} measurement failed: {e}"));
                                break 'triples;
                            }
                        }
                    }
                    Err(MapError::NotRealizable { .. }) if !admissible => {}
                    Err(e) => {
                        failure = Some(format!("constructor rejected {t}: {e}"));
                        break 'triples;
                    }
                }
            }
        }
    }
    rows.push(match failure {
        None => row(
            "type-i sweep d0,d,d1 in [-2,2]",
            true,
            format!("{realized} realizable triples constructed and measured exactly"),
        ),
        Some(why) => row("type-i sweep d0,d,d1 in [-2,2]", false, why),
    });

    let mut realized = 0usize;
    let mut failure: Option<String> = None;
    'pairs: for d_c in -2..=2 {
        for d in -2..=2 {
            let pair = DegreePair::new(d_c, d);
            let admissible = realizable_pair(&pair);
            if admissible != ((pair.d - pair.d_c) % 2 == 0) {
                failure = Some(format!("parity predicate wrong on {pair}"));
                break 'pairs;
            }
            match realize_pair(&pair) {
                Ok(map) => {
                    if !admissible {
                        failure = Some(format!("constructor accepted inadmissible {pair}"));
                        break 'pairs;
                    }
                    match map.measure_pair(grid) {
                        Ok(m) if m.pair == pair => realized += 1,
                        Ok(m) => {
                            failure = Some(format!("{pair} measured as {}", m.pair));
                            break 'pairs;
                        }
                        Err(e) => {
                            failure = Some(format!("{pair} measurement failed: {e}"));
                            break 'pairs;
                        }
                    }
                }
                Err(MapError::NotRealizable { .. }) if !admissible => {}
                Err(e) => {
                    failure = Some(format!("constructor rejected {pair}: {e}"));
                    break 'pairs;
                }
            }
        }
    }
    rows.push(match failure {
        None => row(
            "type-ii sweep dC,d in [-2,2]",
            true,
            format!("{realized} realizable pairs constructed and measured exactly"),
        ),
        Some(why) => row("type-ii sweep dC,d in [-2,2]", false, why),
    });

    rows
}

/// Weierstrass suite: the four meromorphic builtins measure to their known
/// invariants.
fn suite_weierstrass(n: usize) -> Vec<SuiteRow> {
    let grid = Grid::new(n);
    let maps = weierstrass_maps();
    let mut rows = Vec::new();

    let triple_cases = [
        ("weierstrass-p", &maps.p, DegreeTriple::new(0, 2, 0)),
        (
            "weierstrass-p-prime",
            &maps.p_prime,
            DegreeTriple::new(1, 3, 0),
        ),
    ];
    for (name, map, want) in triple_cases {
        let detail = match map.measure_triple(grid) {
            Ok(m) if m.triple == want => Ok(format!("measures {want}")),
            Ok(m) => Err(format!("measured {} instead of {want}", m.triple)),
            Err(e) => Err(format!("measurement failed: {e}")),
        };
        rows.push(match detail {
            Ok(d) => row(name, true, d),
            Err(d) => row(name, false, d),
        });
    }

    let pair_cases = [
        (
            "weierstrass-p (type-ii quotient)",
            &maps.i_p,
            DegreePair::new(0, 2),
        ),
        (
            "weierstrass-p-prime (type-ii quotient)",
            &maps.rotated_p_prime,
            DegreePair::new(1, 3),
        ),
    ];
    for (name, map, want) in pair_cases {
        let detail = match map.measure_pair(grid) {
            Ok(m) if m.pair == want => Ok(format!("measures {want}")),
            Ok(m) => Err(format!("measured {} instead of {want}", m.pair)),
            Err(e) => Err(format!("measurement failed: {e}")),
        };
        rows.push(match detail {
            Ok(d) => row(name, true, d),
            Err(d) => row(name, false, d),
        });
    }

    rows
}

/// Jump suite: representative curves of every constructor verify with their
/// predicted singular counts.
fn suite_jumps(n: usize) -> Vec<SuiteRow> {
    let grid = Grid::new(n);
    let mut rows = Vec::new();

    let mut check = |name: &str, curve: Result<JumpCurve, JumpError>, want: usize| {
        let outcome = curve
            .map_err(|e| format!("construction failed: {e}"))
            .and_then(|c| verify_jump(&c, grid).map_err(|e| format!("verification failed: {e}")))
            .and_then(|report| {
                if report.passed() && report.detected.len() == want {
                    Ok(format!(
                        "{want} singular points, verdict {}",
                        report.verdict
                    ))
                } else {
                    Err(format!(
                        "verdict {}, {} points detected ({want} expected)",
                        report.verdict,
                        report.detected.len()
                    ))
                }
            });
        rows.push(match outcome {
            Ok(d) => row(name, true, d),
            Err(d) => row(name, false, d),
        });
    };

    check("degree flip (1,0)", Ok(degree_flip_jump(1, 0)), 2);
    check(
        "type-i jump <1|1|0> -> <1|3|0>",
        general_jump_type1(&DegreeTriple::new(1, 1, 0), &DegreeTriple::new(1, 3, 0)),
        2,
    );
    check(
        "type-ii jump <0|0> -> <1|1>",
        general_jump_type2(&DegreePair::new(0, 0), &DegreePair::new(1, 1)),
        1,
    );
    check(
        "rank-3 jump (p,q)=(2,1) <0|0|0> -> <0|2|0>",
        rank_n_jump(
            &DegreeTriple::new(0, 0, 0),
            &DegreeTriple::new(0, 2, 0),
            2,
            1,
        ),
        2,
    );

    rows
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Realize(args) => cmd_realize(args),
        Command::Classify(args) => cmd_classify(args),
        Command::Jump(args) => cmd_jump(args),
        Command::Verify(args) => cmd_verify(args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests print on stdout and succeed; real
            // parse errors print on stderr and exit with the usage code.
            let is_help = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            e.print().expect("error message written");
            return if is_help {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_USAGE)
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
