//! Command-line front end.
//!
//! Conventions shared by every subcommand: machine-readable artifacts
//! (JSON, CSV, or a binary series cache) go to stdout or to `--output`;
//! progress notes go to stderr; JSON artifacts carry a `generated_at`
//! unix timestamp and are otherwise deterministic. Exit code 0 means the
//! requested check passed or the artifact was produced, 1 means a check
//! ran to completion and failed (refuted congruence, failed identity,
//! inadmissible input), 2 means the invocation itself was unusable.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use crate::engine::{
    compose_crt, identity_suite, mod3_families, parity_families, parity_scan, search_hecke_primes,
    specialize_minimal, specialize_proposition, verify_family_with_series, CongruenceFamily,
    EngineError, FamilyConstruction, Provenance, DEFAULT_CHECK_PRIME, DEFAULT_IDENTITY_TRUNCATION,
};
use crate::etaq::{gordon_hughes, sturm_bound, EtaError, EtaQuotient};
use crate::fpseries::{
    cache, eta_quotient_expansion, regular_partition_series, FpSeries, SeriesError,
};
use crate::hecke::{verify_vanishing, CertStatus, HeckeError};

#[derive(Parser)]
#[command(
    name = "regulus",
    version,
    about = "k-regular partition congruences via q-series and Hecke operators"
)]
pub struct Cli {
    /// Worker threads for parallel sweeps (also REGULUS_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print b_k(n) mod m for n < limit.
    Bk(BkArgs),
    /// Admissibility, cusp orders and Sturm data of an eta quotient.
    Eta(EtaArgs),
    /// Sturm bound for a weight on Gamma_0(level).
    Sturm {
        #[arg(long)]
        weight: u64,
        #[arg(long)]
        level: u64,
    },
    /// Certify vanishing of F | T(l) for one family and one prime.
    Hecke(HeckeArgs),
    /// Sweep a prime range, certifying T(l) for each usable prime.
    Search(SearchArgs),
    /// Emit congruence families implied by a certified prime.
    Specialize(SpecializeArgs),
    /// Check b_k(A n + B) == 0 (mod m) directly against the series.
    VerifyAp(VerifyApArgs),
    /// Mod 3 families of b4 at an admissible prime.
    Mod3(Mod3Args),
    /// Mod 2 (parity) families of b4, and the triangular-number scan.
    Parity(ParityArgs),
    /// Run the identity battery.
    Identities(IdentityArgs),
    /// Intersect two congruence families with coprime moduli.
    Compose(ComposeArgs),
}

#[derive(Args)]
struct BkArgs {
    #[arg(long)]
    k: u64,
    #[arg(long)]
    modulus: u64,
    /// Number of coefficients (indices 0..limit).
    #[arg(long)]
    limit: usize,
    #[arg(long, value_enum, default_value_t = BkFormat::Csv)]
    format: BkFormat,
    /// Write the artifact here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Reuse/populate a binary series cache at this path.
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BkFormat {
    Csv,
    Json,
    /// Binary cache file (requires --output).
    Cache,
}

#[derive(Args)]
struct EtaArgs {
    /// Quotient as delta:exponent pairs, e.g. "8:3,16:-4,32:5".
    #[arg(long)]
    quotient: String,
    #[arg(long)]
    level: u64,
    /// Also expand the quotient mod this modulus.
    #[arg(long, requires = "truncate")]
    modulus: Option<u64>,
    /// Expansion length.
    #[arg(long, requires = "modulus")]
    truncate: Option<usize>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyKind {
    B4,
    B6,
}

impl FamilyKind {
    fn reg_k(self) -> u64 {
        match self {
            FamilyKind::B4 => 4,
            FamilyKind::B6 => 6,
        }
    }
}

#[derive(Args)]
struct HeckeArgs {
    #[arg(long, value_enum)]
    family: FamilyKind,
    #[arg(long)]
    m: u64,
    #[arg(long)]
    l: u64,
    /// Check through the full Sturm bound; the certificate can verify.
    #[arg(long, conflicts_with = "bound")]
    full: bool,
    /// Quick prefix bound; the certificate stays partial.
    #[arg(long, default_value_t = 1000)]
    bound: u64,
    /// Write the certificate here instead of stdout.
    #[arg(long)]
    cert: Option<PathBuf>,
    /// Reuse/populate a binary series cache at this path.
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, value_enum)]
    family: FamilyKind,
    #[arg(long)]
    m: u64,
    /// Lower end of the prime range (inclusive).
    #[arg(long)]
    lmin: u64,
    /// Upper end of the prime range (exclusive).
    #[arg(long)]
    lmax: u64,
    /// Vanishing bound per prime; certificates verify only at the Sturm
    /// bound or beyond.
    #[arg(long, conflicts_with = "full")]
    bound: Option<u64>,
    /// Shorthand for --bound <sturm bound>.
    #[arg(long)]
    full: bool,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SpecializeArgs {
    #[arg(long, value_enum)]
    family: FamilyKind,
    #[arg(long)]
    m: u64,
    #[arg(long)]
    l: u64,
    /// Emit the full fan of offsets j = 1..l-1 instead of the minimal one.
    #[arg(long, conflicts_with = "j")]
    all: bool,
    /// Emit the single offset at this j.
    #[arg(long)]
    j: Option<u64>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyApArgs {
    #[arg(long)]
    k: u64,
    #[arg(long)]
    modulus: u64,
    #[arg(long)]
    a: u64,
    #[arg(long)]
    b: u64,
    #[arg(long)]
    nmax: u64,
    #[arg(long)]
    cache: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct Mod3Args {
    #[arg(long)]
    l: u64,
    /// Also verify every emitted family for n <= this.
    #[arg(long)]
    verify: Option<u64>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ParityArgs {
    #[arg(long)]
    m: u64,
    /// Also scan b4 parity against triangular numbers up to this n.
    #[arg(long)]
    scan: Option<u64>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct IdentityArgs {
    #[arg(long, default_value_t = DEFAULT_IDENTITY_TRUNCATION)]
    n: usize,
    #[arg(long, default_value_t = DEFAULT_CHECK_PRIME)]
    check_prime: u64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ComposeArgs {
    /// JSON file holding one congruence family.
    #[arg(long)]
    left: PathBuf,
    /// JSON file holding one congruence family.
    #[arg(long)]
    right: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Hecke(#[from] HeckeError),
    #[error(transparent)]
    Eta(#[from] EtaError),
    #[error(transparent)]
    Cache(#[from] cache::CacheError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    BadFamilyFile {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Usage(String),
}

pub fn run(cli: Cli) -> i32 {
    init_threads(cli.threads);
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn init_threads(flag: Option<usize>) {
    let n = flag.or_else(|| {
        std::env::var("REGULUS_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(n) = n.filter(|&n| n > 0) {
        // Errors only if a global pool already exists; that pool wins.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
}

fn unix_now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Stamp `generated_at` and write pretty JSON to the output path or stdout.
fn emit_json(mut value: Value, output: Option<&Path>) -> Result<(), CliError> {
    if let Value::Object(map) = &mut value {
        map.insert("generated_at".into(), json!(unix_now()));
    }
    let mut text = serde_json::to_string_pretty(&value)?;
    text.push('\n');
    emit_text(&text, output)
}

fn emit_text(text: &str, output: Option<&Path>) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Fetch the partition series from a cache file when it is usable,
/// computing and refreshing the cache otherwise.
fn load_or_compute_series(
    k: u64,
    m: u64,
    needed: usize,
    cache_path: Option<&Path>,
) -> Result<FpSeries, CliError> {
    if let Some(path) = cache_path {
        if path.exists() {
            match cache::read_series(path) {
                Ok(s) if s.modulus() == m && s.len() >= needed => {
                    eprintln!("cache hit: {} ({} terms)", path.display(), s.len());
                    return Ok(s);
                }
                Ok(s) => eprintln!(
                    "cache at {} has modulus {} and {} terms; need {} terms mod {}, recomputing",
                    path.display(),
                    s.modulus(),
                    s.len(),
                    needed,
                    m
                ),
                Err(e) => eprintln!("cache at {} unusable ({e}); recomputing", path.display()),
            }
        }
    }
    eprintln!("computing b{k} series mod {m} to {needed} terms");
    let s = regular_partition_series(k, m, needed)?;
    if let Some(path) = cache_path {
        match cache::write_series(path, &s) {
            Ok(()) => eprintln!("cached {} terms at {}", s.len(), path.display()),
            Err(e) => eprintln!("cache not written: {e}"),
        }
    }
    Ok(s)
}

fn dispatch(cmd: Command) -> Result<i32, CliError> {
    match cmd {
        Command::Bk(args) => cmd_bk(args),
        Command::Eta(args) => cmd_eta(args),
        Command::Sturm { weight, level } => {
            println!("{}", sturm_bound(weight, level));
            Ok(0)
        }
        Command::Hecke(args) => cmd_hecke(args),
        Command::Search(args) => cmd_search(args),
        Command::Specialize(args) => cmd_specialize(args),
        Command::VerifyAp(args) => cmd_verify_ap(args),
        Command::Mod3(args) => cmd_mod3(args),
        Command::Parity(args) => cmd_parity(args),
        Command::Identities(args) => cmd_identities(args),
        Command::Compose(args) => cmd_compose(args),
    }
}

fn cmd_bk(args: BkArgs) -> Result<i32, CliError> {
    if args.limit == 0 {
        return Err(CliError::Usage("--limit must be at least 1".into()));
    }
    let series = load_or_compute_series(args.k, args.modulus, args.limit, args.cache.as_deref())?;
    let series = series.truncated(args.limit)?;
    match args.format {
        BkFormat::Csv => {
            let mut text = String::with_capacity(args.limit * 8);
            for (n, v) in series.iter_u64().enumerate() {
                text.push_str(&format!("{n},{v}\n"));
            }
            emit_text(&text, args.output.as_deref())?;
        }
        BkFormat::Json => {
            emit_json(
                json!({
                    "reg_k": args.k,
                    "modulus": args.modulus,
                    "limit": args.limit,
                    "values": series.to_u64_vec(),
                }),
                args.output.as_deref(),
            )?;
        }
        BkFormat::Cache => {
            let path = args.output.ok_or_else(|| {
                CliError::Usage("--format cache writes binary; give --output".into())
            })?;
            cache::write_series(&path, &series)?;
            eprintln!("wrote {} terms to {}", series.len(), path.display());
        }
    }
    Ok(0)
}

fn cmd_eta(args: EtaArgs) -> Result<i32, CliError> {
    let quotient: EtaQuotient = args.quotient.parse()?;
    let mut obj = json!({
        "quotient": quotient.to_string(),
        "level": args.level,
        "prefactor24": quotient.prefactor24(),
    });
    let admissible = match gordon_hughes(&quotient, args.level) {
        Ok(space) => {
            obj["admissible"] = json!(true);
            obj["space"] = json!(space);
            obj["sturm_bound"] = json!(sturm_bound(space.weight, space.level));
            true
        }
        Err(e) => {
            obj["admissible"] = json!(false);
            obj["rejection"] = json!(e.to_string());
            false
        }
    };
    if let Ok(rows) = quotient.cusp_table(args.level) {
        obj["cusp_table"] = rows
            .iter()
            .map(|r| {
                json!({
                    "denominator": r.denominator,
                    "multiplicity": r.multiplicity,
                    "order": r.order.to_string(),
                })
            })
            .collect();
        obj["holomorphic"] = json!(quotient.is_holomorphic(args.level)?);
        obj["cuspidal"] = json!(quotient.is_cuspidal(args.level)?);
        obj["valence_ok"] = json!(quotient.valence_check(args.level)?);
    }
    if let (Some(modulus), Some(truncate)) = (args.modulus, args.truncate) {
        let exp = eta_quotient_expansion(&quotient, modulus, truncate)?;
        obj["expansion"] = json!({
            "modulus": modulus,
            "prefactor24": exp.prefactor24,
            "coefficients": exp.series.to_u64_vec(),
        });
    }
    emit_json(obj, args.output.as_deref())?;
    Ok(if admissible { 0 } else { 1 })
}

fn construction(kind: FamilyKind, m: u64) -> Result<FamilyConstruction, CliError> {
    let fc = FamilyConstruction::new(kind.reg_k(), m)?;
    if let Some(note) = fc.caveat() {
        eprintln!("note: {note}");
    }
    Ok(fc)
}

fn cmd_hecke(args: HeckeArgs) -> Result<i32, CliError> {
    let fc = construction(args.family, args.m)?;
    let bound = if args.full {
        fc.sturm_bound()
    } else {
        args.bound
    };
    let needed = usize::try_from(fc.required_truncation(args.l, bound))
        .map_err(|_| CliError::Usage("bound is too large for this address space".into()))?;
    let base = load_or_compute_series(fc.reg_k, fc.m, needed, args.cache.as_deref())?;
    let form_len = usize::try_from(args.l as u128 * bound as u128 + 1)
        .map_err(|_| CliError::Usage("bound is too large for this address space".into()))?;
    eprintln!("building F to {form_len} terms and applying T({})", args.l);
    let form = fc.build_form_from(&base, form_len)?;
    let cert = verify_vanishing(&form, args.l, bound)?;
    let status = cert.status;
    let checked_to = cert.checked_to;
    emit_json(serde_json::to_value(&cert)?, args.cert.as_deref())?;
    if args.cert.is_some() {
        eprintln!("certificate: {:?}", status);
    }
    Ok(match status {
        CertStatus::Verified => 0,
        CertStatus::Refuted => 1,
        CertStatus::Partial if checked_to == bound => 0,
        CertStatus::Partial => 1,
    })
}

fn cmd_search(args: SearchArgs) -> Result<i32, CliError> {
    let fc = construction(args.family, args.m)?;
    let bound = if args.full {
        fc.sturm_bound()
    } else {
        args.bound
            .ok_or_else(|| CliError::Usage("give --bound or --full".into()))?
    };
    eprintln!(
        "sweeping primes in [{}, {}) at bound {bound}",
        args.lmin, args.lmax
    );
    let report = search_hecke_primes(&fc, args.lmin, args.lmax, bound)?;
    eprintln!(
        "verified {}, refuted {}, partial {}, skipped {}",
        report.verified.len(),
        report.refuted.len(),
        report.partial.len(),
        report.skipped.len()
    );
    emit_json(serde_json::to_value(&report)?, args.output.as_deref())?;
    Ok(0)
}

fn cmd_specialize(args: SpecializeArgs) -> Result<i32, CliError> {
    let fc = construction(args.family, args.m)?;
    if args.all {
        let fams = specialize_proposition(&fc, args.l)?;
        emit_json(
            json!({ "l": args.l, "families": fams }),
            args.output.as_deref(),
        )?;
    } else if let Some(j) = args.j {
        let fams = specialize_proposition(&fc, args.l)?;
        let fam = fams
            .into_iter()
            .find(|f| matches!(f.provenance, Provenance::HeckeSpecialized { j: Some(jj), .. } if jj == j))
            .ok_or_else(|| CliError::Usage(format!("j must be in [1, {}]", args.l - 1)))?;
        emit_json(serde_json::to_value(&fam)?, args.output.as_deref())?;
    } else {
        let fam = specialize_minimal(&fc, args.l)?;
        emit_json(serde_json::to_value(&fam)?, args.output.as_deref())?;
    }
    Ok(0)
}

fn cmd_verify_ap(args: VerifyApArgs) -> Result<i32, CliError> {
    let fam = CongruenceFamily {
        reg_k: args.k,
        modulus: args.modulus,
        a: args.a,
        b: args.b,
        provenance: Provenance::PaperExample,
    };
    let needed = (args.a as u128)
        .checked_mul(args.nmax as u128)
        .and_then(|t| t.checked_add(args.b as u128 + 1))
        .and_then(|t| usize::try_from(t).ok())
        .ok_or_else(|| CliError::Usage("A * nmax + B does not fit in memory".into()))?;
    let series = load_or_compute_series(args.k, args.modulus, needed, args.cache.as_deref())?;
    let series = series.truncated(needed)?;
    let outcome = verify_family_with_series(&fam, &series)?;
    let holds = outcome.holds();
    emit_json(
        json!({
            "reg_k": args.k,
            "modulus": args.modulus,
            "A": args.a,
            "B": args.b,
            "n_max": args.nmax,
            "outcome": outcome,
        }),
        args.output.as_deref(),
    )?;
    Ok(if holds { 0 } else { 1 })
}

fn cmd_mod3(args: Mod3Args) -> Result<i32, CliError> {
    let fams = match mod3_families(args.l) {
        Ok(f) => f,
        Err(EngineError::Mod3Inadmissible { l, symbol }) => {
            emit_json(
                json!({
                    "l": l,
                    "admissible": false,
                    "kronecker_minus6": symbol,
                }),
                args.output.as_deref(),
            )?;
            return Ok(1);
        }
        Err(e) => return Err(e.into()),
    };
    let mut obj = json!({
        "l": args.l,
        "admissible": true,
        "families": fams,
    });
    let mut all_hold = true;
    if let Some(nmax) = args.verify {
        let top = fams.iter().map(|f| f.a * nmax + f.b).max().unwrap() + 1;
        let series = load_or_compute_series(4, 3, top as usize, None)?;
        let mut failures = Vec::new();
        for fam in &fams {
            let check = verify_family_with_series(fam, &series)?;
            if !check.holds() {
                all_hold = false;
                failures.push(json!({ "family": fam, "outcome": check }));
            }
        }
        obj["verification"] = json!({
            "n_max": nmax,
            "all_hold": all_hold,
            "failures": failures,
        });
    }
    emit_json(obj, args.output.as_deref())?;
    Ok(if all_hold { 0 } else { 1 })
}

fn cmd_parity(args: ParityArgs) -> Result<i32, CliError> {
    let fams = parity_families(args.m)?;
    let mut obj = json!({
        "m": args.m,
        "families": fams,
    });
    let mut ok = true;
    if let Some(limit) = args.scan {
        let outcome = parity_scan(limit)?;
        ok = outcome.holds();
        obj["scan"] = json!({ "limit": limit, "outcome": outcome });
    }
    emit_json(obj, args.output.as_deref())?;
    Ok(if ok { 0 } else { 1 })
}

fn cmd_identities(args: IdentityArgs) -> Result<i32, CliError> {
    let results = identity_suite(args.n, args.check_prime)?;
    let all_passed = results.iter().all(|r| r.passed());
    emit_json(
        json!({
            "truncation": args.n,
            "check_prime": args.check_prime,
            "all_passed": all_passed,
            "results": results,
        }),
        args.output.as_deref(),
    )?;
    Ok(if all_passed { 0 } else { 1 })
}

fn read_family(path: &Path) -> Result<CongruenceFamily, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::BadFamilyFile {
        path: path.to_path_buf(),
        source,
    })
}

fn cmd_compose(args: ComposeArgs) -> Result<i32, CliError> {
    let left = read_family(&args.left)?;
    let right = read_family(&args.right)?;
    match compose_crt(&left, &right) {
        Ok(fam) => {
            emit_json(serde_json::to_value(&fam)?, args.output.as_deref())?;
            Ok(0)
        }
        Err(
            e @ (EngineError::CrtDisjoint { .. }
            | EngineError::CrtMismatchedK { .. }
            | EngineError::CrtModuliNotCoprime { .. }),
        ) => {
            emit_json(
                json!({ "composed": false, "reason": e.to_string() }),
                args.output.as_deref(),
            )?;
            Ok(1)
        }
        Err(e) => Err(e.into()),
    }
}
