use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_bigint::{BigInt, BigUint};

use ostrowski::experiments::{
    emit_report, joint_count, lemma_checks, mu_decay_report, partition_report, render,
    scaling_study, ExpSumReport, Format, Report, ScalingParams, ScalingTarget, SuiteConfig,
};
use ostrowski::numeration::{decode, encode, s_alpha, s_q, AlphaParams, DigitString};
use ostrowski::spectra::{joint_exp_sum, mu_sequence, Angle};
use ostrowski::Error;

#[derive(Parser, Debug)]
#[command(
    name = "ostrowski",
    version,
    about = "Ostrowski digit sums and joint equidistribution experiments"
)]
struct Cli {
    /// Partial quotient m of α = [0; 1, m, 1, m, ...] (default 2).
    #[arg(long, global = true)]
    m: Option<u32>,
    /// Base q of the ordinary digit sum (default 2).
    #[arg(long, global = true)]
    q: Option<u32>,
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Report format: json or csv (default json).
    #[arg(long, global = true)]
    format: Option<String>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for randomized checks (default 0).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Config file with key=value lines or a JSON object; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Ostrowski digits of n, lowest index first.
    Encode { n: BigUint },
    /// Value of a comma-separated digit string, lowest index first.
    Decode { digits: String },
    /// S_α(n) and S_q(n).
    Digitsum { n: BigInt },
    /// Check that the sets R_k(u) tile [0, 1) for k in [k-min, k-max].
    VerifyPartition {
        #[arg(long)]
        k_min: usize,
        #[arg(long)]
        k_max: Option<usize>,
    },
    /// Residue-class counts of (S_q(n) mod m1, S_α(n) mod m2) over n < N.
    JointCount {
        #[arg(long)]
        n: String,
        #[arg(long, default_value_t = 3)]
        m1: u32,
        #[arg(long, default_value_t = 3)]
        m2: u32,
    },
    /// Σ_{n<N} e(θ S_q(n) + γ S_α(n)).
    ExpSum {
        #[arg(long)]
        n: String,
        #[arg(long, allow_hyphen_values = true)]
        theta: Angle,
        #[arg(long, allow_hyphen_values = true)]
        gamma: Angle,
    },
    /// The averages μ_k and their contraction.
    MuDecay {
        #[arg(long, allow_hyphen_values = true)]
        gamma: Angle,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        beta: Angle,
        #[arg(long)]
        k: usize,
    },
    /// Log-log slope of a target quantity over a grid of N.
    Scaling {
        #[arg(long)]
        target: ScalingTarget,
        /// Comma-separated N values, e.g. 1e4,1e5,1e6.
        #[arg(long)]
        grid: String,
        #[arg(long, default_value_t = 3)]
        m1: u32,
        #[arg(long, default_value_t = 3)]
        m2: u32,
        #[arg(long, default_value = "1/3", allow_hyphen_values = true)]
        theta: Angle,
        #[arg(long, default_value = "1/3", allow_hyphen_values = true)]
        gamma: Angle,
        #[arg(long, default_value_t = 1)]
        k1: u32,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        a: Angle,
    },
    /// Numerical checks of the auxiliary inequalities.
    CheckLemmas {
        #[arg(long, default_value_t = 200)]
        sequences: usize,
        #[arg(long, default_value = "20000")]
        n: String,
    },
}

struct Settings {
    m: u32,
    q: u32,
    out: Option<PathBuf>,
    format: Format,
    threads: Option<usize>,
    seed: u64,
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Parameter(msg.into())
}

/// Reads `key=value` lines (with `#` comments) or a JSON object into strings.
fn read_config(path: &Path) -> Result<BTreeMap<String, String>, Error> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let bad = |message: String| Error::Config {
        path: path.to_path_buf(),
        message,
    };
    let mut out = BTreeMap::new();
    if text.trim_start().starts_with('{') {
        let value: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
        let obj = value
            .as_object()
            .ok_or_else(|| bad("expected a JSON object".into()))?;
        for (k, v) in obj {
            let s = match v {
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Number(_) | serde_json::Value::Bool(_) => v.to_string(),
                _ => return Err(bad(format!("unsupported value for `{k}`"))),
            };
            out.insert(k.clone(), s);
        }
    } else {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("line {}: expected key=value", i + 1)))?;
            out.insert(k.trim().to_string(), v.trim().to_string());
        }
    }
    const KEYS: [&str; 6] = ["m", "q", "out", "format", "threads", "seed"];
    if let Some(k) = out.keys().find(|k| !KEYS.contains(&k.as_str())) {
        return Err(bad(format!("unknown key `{k}`")));
    }
    Ok(out)
}

fn settings(cli: &Cli) -> Result<Settings, Error> {
    let file = match &cli.config {
        Some(p) => read_config(p)?,
        None => BTreeMap::new(),
    };
    fn from_file<T: std::str::FromStr>(
        file: &BTreeMap<String, String>,
        key: &str,
    ) -> Result<Option<T>, Error> {
        file.get(key)
            .map(|v| {
                v.parse()
                    .map_err(|_| usage(format!("config value `{key}={v}` is invalid")))
            })
            .transpose()
    }
    let format = match cli.format.clone().or_else(|| file.get("format").cloned()) {
        Some(f) => f.parse()?,
        None => Format::Json,
    };
    Ok(Settings {
        m: cli.m.or(from_file(&file, "m")?).unwrap_or(2),
        q: cli.q.or(from_file(&file, "q")?).unwrap_or(2),
        out: cli.out.clone().or(from_file(&file, "out")?),
        format,
        threads: cli.threads.or(from_file(&file, "threads")?),
        seed: cli.seed.or(from_file(&file, "seed")?).unwrap_or(0),
    })
}

/// Parses a count written as an integer or in `1e7` notation.
fn parse_count(s: &str) -> Result<u64, Error> {
    let s = s.trim().replace('_', "");
    if let Ok(n) = s.parse::<u64>() {
        return Ok(n);
    }
    if let Some((mant, exp)) = s.split_once(['e', 'E']) {
        if let (Ok(a), Ok(b)) = (mant.parse::<u64>(), exp.parse::<u32>()) {
            if let Some(n) = 10u64.checked_pow(b).and_then(|p| p.checked_mul(a)) {
                return Ok(n);
            }
        }
    }
    Err(usage(format!("`{s}` is not a non-negative integer count")))
}

enum Outcome {
    Text(String),
    Report(Box<Report>),
}

fn report(r: Report) -> Outcome {
    Outcome::Report(Box::new(r))
}

fn run(cli: &Cli, st: &Settings) -> Result<Outcome, Error> {
    let (m, q) = (st.m, st.q);
    Ok(match &cli.command {
        Command::Encode { n } => {
            let ds = encode(n, m)?;
            let digits: Vec<String> = ds.digits().iter().map(u32::to_string).collect();
            Outcome::Text(digits.join(","))
        }
        Command::Decode { digits } => {
            let parsed = digits
                .split(',')
                .map(|d| {
                    d.trim()
                        .parse::<u32>()
                        .map_err(|_| usage(format!("bad digit `{d}`")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let ds = DigitString::new(AlphaParams::new(m)?, parsed)?;
            Outcome::Text(decode(&ds)?.to_string())
        }
        Command::Digitsum { n } => Outcome::Text(format!(
            "S_alpha = {}\nS_q = {}",
            s_alpha(n, m)?,
            s_q(n, q)?
        )),
        Command::VerifyPartition { k_min, k_max } => {
            let hi = k_max.unwrap_or(*k_min);
            if hi < *k_min {
                return Err(usage("k-max must not be below k-min"));
            }
            let reports = (*k_min..=hi)
                .map(|k| partition_report(m, k))
                .collect::<Result<Vec<_>, _>>()?;
            report(Report::Partition(reports))
        }
        Command::JointCount { n, m1, m2 } => report(Report::JointCount(joint_count(
            parse_count(n)?,
            q,
            m,
            *m1,
            *m2,
        )?)),
        Command::ExpSum { n, theta, gamma } => {
            let n = parse_count(n)?;
            let value = joint_exp_sum(n, q, m, *theta, *gamma)?;
            report(Report::ExpSum(ExpSumReport {
                n,
                q,
                m,
                theta: *theta,
                gamma: *gamma,
                value,
            }))
        }
        Command::MuDecay { gamma, beta, k } => {
            let seq = mu_sequence(m, *gamma, *beta, *k)?;
            report(Report::MuDecay(mu_decay_report(seq)?))
        }
        Command::Scaling {
            target,
            grid,
            m1,
            m2,
            theta,
            gamma,
            k1,
            a,
        } => {
            let grid = grid
                .split(',')
                .map(parse_count)
                .collect::<Result<Vec<_>, _>>()?;
            let params = ScalingParams {
                q,
                m,
                m1: *m1,
                m2: *m2,
                theta: *theta,
                gamma: *gamma,
                k1: *k1,
                a: *a,
            };
            report(Report::Scaling(scaling_study(&grid, *target, params)?))
        }
        Command::CheckLemmas { sequences, n } => {
            let cfg = SuiteConfig {
                q,
                m,
                seed: st.seed,
                sequences: *sequences,
                n: parse_count(n)?,
            };
            report(Report::Checks(lemma_checks(cfg)?))
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let st = match settings(&cli) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(n) = st.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: cannot set up {n} threads: {e}");
            return ExitCode::from(2);
        }
    }
    let outcome = match run(&cli, &st) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let (text, passed) = match &outcome {
        Outcome::Text(t) => (format!("{t}\n"), true),
        Outcome::Report(r) => match render(r, st.format) {
            Ok(t) => (t, r.passed()),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        },
    };
    let written = match (&st.out, &outcome) {
        (Some(path), Outcome::Report(r)) => emit_report(r, st.format, path),
        (Some(path), Outcome::Text(_)) => fs::write(path, &text).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        }),
        (None, _) => {
            print!("{text}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if passed {
        ExitCode::SUCCESS
    } else {
        if let Some(path) = &st.out {
            eprintln!("check failed; see {}", path.display());
        }
        ExitCode::from(1)
    }
}
