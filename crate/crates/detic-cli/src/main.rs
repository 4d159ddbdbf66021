//! `detic` — capacity regions of two-user linear deterministic
//! interference channels, rate-split codec demos, random linear network
//! coding over double-unicast networks, and brute-force verification
//! suites.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input error,
//! 3 randomization budget exhausted, 4 infeasible rate request.

mod formats;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use detic::oracle::{self, ConcatRankSpec};
use detic::ratesplit::{self, build_codec, channel_split_bounds, find_split};
use detic::region::{capacity_region_form, RatePair, RegionForm};
use detic::{netcode, ChannelQuadruple, Error, FieldSpec, Matrix};

use formats::{
    ChannelFile, ComparisonRepr, CutsRepr, NetcodeFile, Provenance, RegionFile,
};

pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }

    pub fn budget(message: impl Into<String>) -> Self {
        CliError {
            code: 3,
            message: message.into(),
        }
    }

    pub fn infeasible(message: impl Into<String>) -> Self {
        CliError {
            code: 4,
            message: message.into(),
        }
    }

    pub fn failed(message: impl Into<String>) -> Self {
        CliError {
            code: 1,
            message: message.into(),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "detic",
    version,
    about = "Exact capacity regions for two-user linear deterministic interference channels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FormArg {
    /// Instantiate the sum bounds from the padded cross-matrix ranks.
    Theorem,
    /// Instantiate them from the decomposition (zero-forced) ranks.
    Reduced,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the capacity region of a channel file.
    Region {
        /// Channel JSON file.
        #[arg(long)]
        channel: PathBuf,
        #[arg(long, value_enum, default_value_t = FormArg::Theorem)]
        form: FormArg,
        /// Write the region JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate random linear network coding on a double-unicast network.
    Netcode {
        /// Network JSON file.
        #[arg(long)]
        network: PathBuf,
        /// Prime field size for the coding coefficients.
        #[arg(long)]
        field: u64,
        /// Seed for the coefficient draws (default: DETIC_SEED or 0).
        #[arg(long)]
        seed: Option<u64>,
        /// Also emit the baseline hulls and containment verdicts.
        #[arg(long)]
        compare: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a codec for a rate pair and run one verified round trip.
    Demo {
        #[arg(long)]
        channel: PathBuf,
        /// Integer target rates, e.g. `--rate 1,2`.
        #[arg(long)]
        rate: String,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run a verification suite; nonzero exit on any violation.
    Verify {
        /// One of: rank-identities, concat-rank, entropy-bound,
        /// subspace-count, achievability.
        #[arg(long)]
        suite: String,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn run(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Region { channel, form, out } => cmd_region(&channel, form, out.as_deref()),
        Command::Netcode {
            network,
            field,
            seed,
            compare,
            out,
        } => cmd_netcode(&network, field, seed, compare, out.as_deref()),
        Command::Demo {
            channel,
            rate,
            seed,
        } => cmd_demo(&channel, &rate, seed),
        Command::Verify {
            suite,
            trials,
            seed,
        } => cmd_verify(&suite, trials, seed),
    }
}

fn resolve_seed(flag: Option<u64>) -> u64 {
    flag.or_else(|| {
        std::env::var("DETIC_SEED")
            .ok()
            .and_then(|s| s.parse().ok())
    })
    .unwrap_or(0)
}

fn read_input(path: &Path) -> Result<(String, String), CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    let hash = Sha256::digest(&bytes)
        .iter()
        .fold(String::new(), |mut acc, b| {
            let _ = write!(acc, "{b:02x}");
            acc
        });
    let text = String::from_utf8(bytes)
        .map_err(|_| CliError::input(format!("{} is not UTF-8", path.display())))?;
    Ok((text, hash))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        None => {
            println!("{text}");
            Ok(())
        }
        Some(path) => std::fs::write(path, format!("{text}\n"))
            .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display()))),
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serialization cannot fail")
}

fn cmd_region(channel: &Path, form: FormArg, out: Option<&Path>) -> Result<(), CliError> {
    let (text, hash) = read_input(channel)?;
    let file = ChannelFile::parse(&text)?;
    let ch = file.to_channel()?;
    let (reduced, _) = ch.reduce();
    let region = capacity_region_form(
        &reduced,
        match form {
            FormArg::Theorem => RegionForm::Theorem,
            FormArg::Reduced => RegionForm::Reduced,
        },
    );
    let file = RegionFile::from_region(
        &region,
        Provenance {
            command: format!("region --form {form:?}").to_lowercase(),
            seed: None,
            input_hash: hash,
        },
    );
    emit(out, &to_json(&file))
}

fn cmd_netcode(
    network: &Path,
    field: u64,
    seed: Option<u64>,
    compare: bool,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let (text, hash) = read_input(network)?;
    let net = netcode::parse_network(&text).map_err(|e| CliError::input(e.to_string()))?;
    let field = FieldSpec::prime(field).map_err(|e| CliError::input(e.to_string()))?;
    let seed = resolve_seed(seed);

    let budget = 64;
    let real = match netcode::rlnc_transfer(&net, field, seed, budget) {
        Ok(real) => real,
        Err(Error::RetryBudget { attempts, detail }) => {
            return Err(CliError::budget(format!(
                "rank verification failed after {attempts} attempts ({detail})"
            )));
        }
        Err(e) => return Err(CliError::input(e.to_string())),
    };
    let region = match netcode::nc_region(&real) {
        Ok(r) => r,
        Err(Error::CutRankMismatch(msg)) => {
            return Err(CliError::budget(format!(
                "realization inconsistent with min-cuts: {msg}; retry with another seed or a larger field"
            )));
        }
        Err(e) => return Err(CliError::failed(e.to_string())),
    };

    let comparison = if compare {
        let report = netcode::containment_check(&real)
            .map_err(|e| CliError::failed(e.to_string()))?;
        let as_vertex =
            |v: &Option<RatePair>| v.as_ref().map(|p| [p.r1.to_string(), p.r2.to_string()]);
        Some(ComparisonRepr {
            baselines_contained: true,
            precoding_hull: report
                .hull_precoding
                .inequalities()
                .iter()
                .map(Into::into)
                .collect(),
            rate_exchange_hull: report
                .hull_rate_exchange
                .inequalities()
                .iter()
                .map(Into::into)
                .collect(),
            strict_beyond_precoding: as_vertex(&report.strict_beyond_precoding),
            strict_beyond_rate_exchange: as_vertex(&report.strict_beyond_rate_exchange),
        })
    } else {
        None
    };

    let file = NetcodeFile {
        cuts: CutsRepr::from(&real.cuts),
        attempts: real.attempts,
        inequalities: region.inequalities().iter().map(Into::into).collect(),
        vertices: formats::vertices_repr(&region),
        comparison,
        provenance: Provenance {
            command: "netcode".into(),
            seed: Some(seed),
            input_hash: hash,
        },
    };
    emit(out, &to_json(&file))
}

fn cmd_demo(channel: &Path, rate: &str, seed: Option<u64>) -> Result<(), CliError> {
    let (text, _) = read_input(channel)?;
    let file = ChannelFile::parse(&text)?;
    let ch = file.to_channel()?;
    let (reduced, _) = ch.reduce();
    let (r1, r2) = rate
        .split_once(',')
        .and_then(|(a, b)| Some((a.trim().parse::<usize>().ok()?, b.trim().parse::<usize>().ok()?)))
        .ok_or_else(|| CliError::input(format!("cannot parse rate {rate:?}; expected R1,R2")))?;
    let seed = resolve_seed(seed);

    let region = detic::region::capacity_region(&reduced);
    println!("channel: {}x{} -> {} / {} outputs over {:?}",
        reduced.m1(), reduced.m2(), reduced.n1(), reduced.n2(), reduced.field());
    println!("capacity region:");
    for ineq in region.inequalities() {
        println!("  {ineq}");
    }
    let bounds = channel_split_bounds(&reduced).map_err(|e| CliError::failed(e.to_string()))?;
    let Some(split) = find_split(&bounds, r1, r2) else {
        return Err(CliError::infeasible(format!(
            "infeasible split: rate ({r1}, {r2}) is outside the region"
        )));
    };
    println!(
        "rate ({r1}, {r2}) split: common/private = ({}, {}) and ({}, {})",
        split.r1c, split.r1p, split.r2c, split.r2p
    );
    let codec = match build_codec(&reduced, split, seed, ratesplit::DEFAULT_RETRY_BUDGET) {
        Ok(c) => c,
        Err(Error::RetryBudget { attempts, detail }) => {
            return Err(CliError::budget(format!(
                "codec draw failed after {attempts} attempts ({detail})"
            )));
        }
        Err(e) => return Err(CliError::failed(e.to_string())),
    };
    println!("spreading matrices (drawn with seed {seed}, attempt {}):", codec.attempts);
    for (name, m) in [
        ("E1c", &codec.e1c),
        ("E1p", &codec.e1p),
        ("E2c", &codec.e2c),
        ("E2p", &codec.e2p),
    ] {
        println!("  {name} ({}x{}):\n{}", m.rows(), m.cols(), indent(m));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xD1CE);
    let msgs = ratesplit::MessageVectors::random(reduced.field(), &split, &mut rng);
    println!("messages d1 = {}, d2 = {}", row(&msgs.d1), row(&msgs.d2));
    let (x1, x2) = codec.encode(&msgs).map_err(|e| CliError::failed(e.to_string()))?;
    println!("inputs   x1 = {}, x2 = {}", row(&x1), row(&x2));
    let (y1, y2) =
        ratesplit::transmit(&reduced, &x1, &x2).map_err(|e| CliError::failed(e.to_string()))?;
    println!("outputs  y1 = {}, y2 = {}", row(&y1), row(&y2));
    let (d1c, d1p, d2c_at1) = codec
        .decode_rx1(&y1)
        .map_err(|e| CliError::failed(e.to_string()))?;
    let (d2c, d2p, d1c_at2) = codec
        .decode_rx2(&y2)
        .map_err(|e| CliError::failed(e.to_string()))?;
    println!(
        "decoded  rx1: own common {}, own private {}, other common {}",
        row(&d1c),
        row(&d1p),
        row(&d2c_at1)
    );
    println!(
        "decoded  rx2: own common {}, own private {}, other common {}",
        row(&d2c),
        row(&d2p),
        row(&d1c_at2)
    );
    if ratesplit::round_trip_exact(&reduced, &codec, &msgs)
        .map_err(|e| CliError::failed(e.to_string()))?
    {
        println!("PASS");
        Ok(())
    } else {
        Err(CliError::failed("FAIL: decoded symbols differ"))
    }
}

fn indent(m: &Matrix) -> String {
    format!("{m}")
        .lines()
        .map(|l| format!("    {l}"))
        .collect::<Vec<_>>()
        .join("\n")
}

fn row(m: &Matrix) -> String {
    let entries: Vec<String> = (0..m.rows()).map(|i| m.get(i, 0).to_string()).collect();
    format!("({})", entries.join(", "))
}

fn cmd_verify(suite: &str, trials: Option<u64>, seed: Option<u64>) -> Result<(), CliError> {
    let seed = resolve_seed(seed);
    match suite {
        "rank-identities" => {
            let trials = trials.unwrap_or(1000);
            let fields = [
                FieldSpec::prime(2).expect("prime"),
                FieldSpec::prime(3).expect("prime"),
                FieldSpec::prime(7).expect("prime"),
                FieldSpec::prime(257).expect("prime"),
                FieldSpec::Rational,
            ];
            let report = oracle::rank_identity_suite(trials, 4, &fields, seed);
            println!(
                "rank-identities: {} trials, {} violations",
                report.trials,
                report.violations.len()
            );
            if report.passed() {
                Ok(())
            } else {
                for v in report.violations.iter().take(5) {
                    eprintln!("{v}");
                }
                Err(CliError::failed("rank identity violations"))
            }
        }
        "concat-rank" => {
            let trials = trials.unwrap_or(2000);
            let spec = ConcatRankSpec {
                ambient: 2,
                widths: [2, 2, 0],
                ranks: [2, 2, 0],
                draws: [1, 1, 0],
            };
            let mut bad = false;
            let mut last_failure = None;
            for q in [7u64, 101, 1009] {
                let report = oracle::concat_rank_trial(&spec, q, trials, seed)
                    .map_err(|e| CliError::failed(e.to_string()))?;
                let (lo, hi) = report.wilson_interval(1.96);
                let floor = 1.0 - 5.0 / q as f64;
                let failures = report.trials - report.successes;
                println!(
                    "concat-rank q={q}: success {}/{} (wilson 95% [{lo:.4}, {hi:.4}], floor {floor:.4})",
                    report.successes, report.trials
                );
                if !report.meets_floor(q, 5.0) {
                    bad = true;
                }
                if let Some(prev) = last_failure {
                    if failures >= prev {
                        bad = true;
                    }
                }
                last_failure = Some(failures);
            }
            if bad {
                Err(CliError::failed("concat-rank trend violated"))
            } else {
                Ok(())
            }
        }
        "entropy-bound" => {
            let per_pair = trials.unwrap_or(100);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut violations = 0u64;
            let mut checked = 0u64;
            for (q, l) in [(2u64, 6usize), (3, 4), (5, 3), (7, 3), (11, 2), (101, 2)] {
                let field = FieldSpec::prime(q).expect("prime");
                for _ in 0..per_pair {
                    let a = Matrix::random(field, rng.gen_range(1..=l), l, &mut rng);
                    let b = Matrix::random(field, rng.gen_range(1..=l), l, &mut rng);
                    let check = oracle::entropy_bound_check(&a, &b)
                        .map_err(|e| CliError::failed(e.to_string()))?;
                    checked += 1;
                    if !check.pass {
                        violations += 1;
                    }
                }
            }
            println!("entropy-bound: {checked} checks, {violations} violations");
            if violations == 0 {
                Ok(())
            } else {
                Err(CliError::failed("entropy bound violated"))
            }
        }
        "subspace-count" => {
            let table = oracle::subspace_count_check(4, &[2, 3])
                .map_err(|e| CliError::failed(e.to_string()))?;
            println!(
                "subspace-count: {} (l, k, q) cases match the closed form, 0 violations",
                table.len()
            );
            Ok(())
        }
        "achievability" => {
            let channels = trials.unwrap_or(10);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let field = FieldSpec::prime(257).expect("prime");
            let mut points = 0;
            for i in 0..channels {
                let dims = (
                    rng.gen_range(1..=4),
                    rng.gen_range(1..=4),
                    rng.gen_range(1..=4),
                    rng.gen_range(1..=4),
                );
                let (ch, _) = ChannelQuadruple::random(field, dims, &mut rng).reduce();
                let report = oracle::achievability_sweep(&ch, seed.wrapping_add(i))
                    .map_err(|e| CliError::failed(e.to_string()))?;
                points += report.trials;
                if !report.passed() {
                    for v in report.violations.iter().take(3) {
                        eprintln!("{v}");
                    }
                    return Err(CliError::failed("achievability sweep failed"));
                }
            }
            println!("achievability: {channels} channels, {points} lattice points, 0 violations");
            Ok(())
        }
        other => Err(CliError::input(format!(
            "unknown suite {other:?}; expected rank-identities, concat-rank, entropy-bound, subspace-count or achievability"
        ))),
    }
}
