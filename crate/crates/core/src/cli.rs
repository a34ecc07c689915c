//! Command-line front end. Every subcommand prints a JSON report to stdout
//! (and to `--out` when given) and maps the outcome to an exit code.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::acceptance::{check_minors, pinned_count, run_all, AcceptanceConfig};
use crate::enumerate::{
    default_jobs, derive_ef, sample_ef, verify_ef_cover_exhaustive, verify_extraneous_properties, verify_main_theorem,
    EnumConfig,
};
use crate::error::{Error, Result};
use crate::modring::Modulus;
use crate::polysys::{
    build_augmented_system, numeric_bottom_right, verify_decomposition_certificate, PolyFile, QIdeal, DEFAULT_PRIMES,
};
use crate::report::Report;
use crate::statevector::random_teleport_trial;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "cliffordlab", version, about = "Verification toolkit for two-qudit third-level gates")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScanCheck {
    /// Every point of T satisfies the semi-Clifford minors.
    Main,
    /// No point of T lies on an extraneous component.
    Extraneous,
    /// Every point of T has E = 0 or F = 0.
    EfCover,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Enumerate T(Z_d) and check every point.
    VerifyMain {
        #[arg(short, default_value_t = 3)]
        d: u64,
        /// Worker threads (default: $CLIFFORDLAB_JOBS or all cores).
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Permit d = 5 (about 2 million points).
        #[arg(long)]
        allow_large: bool,
        #[arg(long, value_enum, default_value_t = ScanCheck::Main)]
        check: ScanCheck,
    },
    /// Derive E and F by fraction-free elimination.
    DeriveEf {
        #[arg(long)]
        out: Option<PathBuf>,
        /// Seed for the numerical spot check.
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Check that all order-6 minors of the linear system vanish.
    CheckMinors {
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        prime: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded random check of the E/F cover at any odd prime.
    SampleEf {
        #[arg(short, default_value_t = 7)]
        d: u64,
        #[arg(short, default_value_t = 100_000)]
        n: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify I = C_1 ∩ … ∩ C_k over Q and Z_p.
    VerifyCertificate {
        #[arg(long)]
        ideal: PathBuf,
        #[arg(long, num_args = 1.., required = true)]
        components: Vec<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        primes: Option<Vec<u64>>,
        #[arg(long)]
        exact_cofactors: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate the semi-Clifford teleportation circuit on random instances.
    TeleportDemo {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(short, default_value_t = 3)]
        d: u64,
        #[arg(long, default_value_t = 1)]
        instances: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the full acceptance suite.
    Selftest {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parses `argv` (including the program name), runs, and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn enum_config(jobs: Option<usize>, allow_large: bool) -> Result<EnumConfig> {
    let jobs = match jobs {
        Some(0) => return Err(Error::Parse("--jobs must be at least 1".into())),
        Some(j) => j,
        None => default_jobs(),
    };
    Ok(EnumConfig { jobs, allow_large })
}

/// Writes to stdout, ignoring a closed pipe.
fn say(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn read_ideal(path: &Path) -> Result<QIdeal> {
    PolyFile::read(path).and_then(|f| f.to_ideal()).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn emit(report: &Report, out: Option<&PathBuf>) -> Result<i32> {
    say(&report.to_json());
    if let Some(path) = out {
        report.write(path)?;
    }
    Ok(report.exit_code())
}

fn execute(cmd: Command) -> Result<i32> {
    match cmd {
        Command::VerifyMain { d, jobs, out, allow_large, check } => {
            let m = Modulus::new(d)?;
            let cfg = enum_config(jobs, allow_large)?;
            let rep = match check {
                ScanCheck::Main => verify_main_theorem(m, &cfg)?,
                ScanCheck::Extraneous => verify_extraneous_properties(m, &cfg)?,
                ScanCheck::EfCover => verify_ef_cover_exhaustive(m, &cfg, &derive_ef()?)?,
            };
            let mut report = rep.to_report();
            if let Some(pin) = pinned_count(m.value()) {
                report = report.detail("pinned_T_count", pin.t_count);
                if pin.t_count != rep.t_count {
                    report.fail_with(format!("T_count {} differs from pinned {}", rep.t_count, pin.t_count));
                }
            }
            emit(&report, out.as_ref())
        }
        Command::DeriveEf { out, seed } => derive_ef_report(seed, out.as_ref()),
        Command::CheckMinors { samples, prime, seed, out } => {
            let start = Instant::now();
            let c = check_minors(samples, prime, seed)?;
            let mut report = Report::new("minors").detail("minor_count", c.minor_count).detail("prime", c.prime);
            report = report.detail("samples", c.samples).detail("full_rank_points", c.full_rank_points);
            report.seed = Some(seed);
            for &i in &c.nonzero_minors {
                report.fail_with(format!("minor {i} is not identically zero"));
            }
            if c.full_rank_points > 0 {
                report.fail_with(format!("{} sample points with a nonzero minor", c.full_rank_points));
            }
            report.notes.push(c.summary());
            report.elapsed_ms = start.elapsed().as_millis() as u64;
            emit(&report, out.as_ref())
        }
        Command::SampleEf { d, n, seed, out } => {
            let m = Modulus::new(d)?;
            let (rep, stats) = sample_ef(m, n, seed, &derive_ef()?)?;
            let mut report = rep.to_report().detail("stats", &stats);
            if stats.consistent < n {
                report.fail_with(format!("only {} of {n} consistent samples found", stats.consistent));
            }
            emit(&report, out.as_ref())
        }
        Command::VerifyCertificate { ideal, components, primes, exact_cofactors, out } => {
            let start = Instant::now();
            let primes = primes.unwrap_or_else(|| DEFAULT_PRIMES.to_vec());
            let ideal = read_ideal(&ideal)?;
            let comps = components.iter().map(|p| read_ideal(p)).collect::<Result<Vec<_>>>()?;
            let cert = verify_decomposition_certificate(&ideal, &comps, &primes, exact_cofactors)?;
            let mut report = Report::new("certificate")
                .detail("domains", &cert.domains)
                .detail("components", cert.components)
                .detail("memberships_checked", cert.memberships_checked);
            if let Some(ex) = &cert.exact_cofactors {
                report = report.detail("exact_cofactors", ex);
            }
            for f in &cert.failures {
                report.fail_with(f);
            }
            report.elapsed_ms = start.elapsed().as_millis() as u64;
            emit(&report, out.as_ref())
        }
        Command::TeleportDemo { seed, d, instances, out } => {
            let start = Instant::now();
            let m = Modulus::new(d)?;
            if m.value() > 7 {
                return Err(Error::DimensionTooLarge { d: m.value(), limit: 7 });
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut report = Report::new("teleport");
            report.d = Some(m.value());
            report.seed = Some(seed);
            let mut trials = Vec::with_capacity(instances);
            for k in 0..instances {
                let trial = random_teleport_trial(m, &mut rng)?;
                if !trial.passed(1e-9) {
                    report.fail_with(json!({ "instance": k, "trial": &trial }));
                }
                trials.push(trial);
            }
            report = report.detail("prng", "ChaCha8").detail("trials", &trials);
            report.elapsed_ms = start.elapsed().as_millis() as u64;
            emit(&report, out.as_ref())
        }
        Command::Selftest { seed, jobs, out } => {
            let start = Instant::now();
            let cfg = AcceptanceConfig { seed, enumeration: enum_config(jobs, false)? };
            let mut report = Report::new("selftest");
            report.seed = Some(seed);
            let mut rows = Vec::new();
            for r in run_all(&cfg) {
                say(&r.to_string());
                if !r.passed {
                    report.fail_with(json!({ "criterion": r.id, "name": r.name, "detail": &r.detail }));
                }
                rows.push(r);
            }
            let passed = rows.iter().filter(|r| r.passed).count();
            say(&format!("{passed}/{} criteria passed", rows.len()));
            report = report.detail("criteria", &rows);
            report.elapsed_ms = start.elapsed().as_millis() as u64;
            if let Some(path) = &out {
                report.write(path)?;
            }
            Ok(report.exit_code())
        }
    }
}

fn derive_ef_report(seed: u64, out: Option<&PathBuf>) -> Result<i32> {
    let start = Instant::now();
    let ef = derive_ef()?;
    let (vars, aug) = build_augmented_system(true);
    let names = vars.names();
    // Spot check E/F against the numerical Schur complement.
    let p = Modulus::new(10_007)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut checked, mut mismatches) = (0u32, Vec::new());
    for _ in 0..200 {
        let point: Vec<u32> = (0..vars.len()).map(|_| rng.random_range(0..p.value())).collect();
        let Some(ratio) = ef.ratio_mod(p, &point)? else {
            continue;
        };
        checked += 1;
        let numeric = numeric_bottom_right(&aug.eval_mod(p, &point)?, &ef.pivots, ef.last_row);
        if numeric != Some(ratio) {
            mismatches.push(point);
        }
    }
    let mut report = Report::new("derive-ef")
        .detail("E", ef.e.format_with(names))
        .detail("F", ef.f.format_with(names))
        .detail("E_terms", ef.e.len())
        .detail("E_degree", ef.e.total_degree())
        .detail("F_terms", ef.f.len())
        .detail("F_degree", ef.f.total_degree())
        .detail("e_scale", ef.e_scale.to_string())
        .detail("f_scale", ef.f_scale.to_string())
        .detail("pivots", &ef.pivots)
        .detail("last_row", ef.last_row)
        .detail("polys", PolyFile::from_polys(&vars, &[ef.e.clone(), ef.f.clone()]))
        .detail("spot_checks", checked);
    report.seed = Some(seed);
    for pt in mismatches {
        report.fail_with(json!({ "point": pt, "reason": "E/F differs from the Schur complement mod 10007" }));
    }
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    emit(&report, out)
}
