use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use relhecke::affine::AffinePermutation;
use relhecke::borel::{self, Side};
use relhecke::hecke::HeckeElement;
use relhecke::iwahori::{self, DecoratedMatching, ModuleElement};
use relhecke::quiver::{self, DimVector, Multisegment, SamplingConfig, SamplingMode};
use relhecke::suites::{self, Suite, SuiteParams};

const PRIME_VAR: &str = "RELHECKE_PRIME";

#[derive(Parser)]
#[command(name = "relhecke", version, about = "Relative affine Hecke module workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    #[value(name = "X", alias = "x")]
    X,
    Dual,
}

#[derive(Subcommand)]
enum Command {
    /// Weak order on Borel orbits (X) or relevant cosets (dual).
    Orbits {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "X")]
        side: SideArg,
        /// Write the Hasse diagram in DOT format.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Act by a Hecke algebra element on a module element.
    Act {
        #[arg(long)]
        n: usize,
        /// `{"N":..,"terms":[..]}` or a single `{"N":..,"window":[..]}`.
        #[arg(long)]
        element: String,
        /// `{"n":..,"terms":[..]}` or a single `{"n":..,"pairs":[..]}`.
        #[arg(long)]
        on: String,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, value_parser = parse_suite)]
        suite: Suite,
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        bound: Option<i64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        prime: Option<u64>,
        #[arg(long, default_value_t = 500)]
        trials: usize,
    },
    /// Distinction verdict for a multisegment `[[a,b],..]`.
    Distinguish {
        #[arg(long)]
        multisegment: String,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long)]
        prime: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "rank-stratified")]
        sampling: SamplingArg,
        /// Write the closure order on the sampled orbits in DOT format.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Closure order on all multisegments with a dimension vector.
    Poset {
        #[arg(long)]
        dims: String,
        #[arg(long)]
        dot: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SamplingArg {
    Uniform,
    RankStratified,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: suites::SuiteError| e.to_string())
}

#[derive(serde::Deserialize)]
#[serde(untagged)]
enum ElementArg {
    Sum(HeckeElement),
    Basis(AffinePermutation),
}

#[derive(serde::Deserialize)]
#[serde(untagged)]
enum VectorArg {
    Sum(ModuleElement),
    Basis(DecoratedMatching),
}

/// Outcome of a subcommand: JSON for standard output and whether it passed.
type Outcome = Result<(serde_json::Value, bool), String>;

fn default_prime(flag: Option<u64>) -> Result<u64, String> {
    if let Some(p) = flag {
        return Ok(p);
    }
    match std::env::var(PRIME_VAR) {
        Ok(v) => v.trim().parse().map_err(|_| format!("{PRIME_VAR}={v:?} is not an integer")),
        Err(_) => Ok(quiver::DEFAULT_PRIME),
    }
}

fn parse_json<T: serde::de::DeserializeOwned>(what: &str, s: &str) -> Result<T, String> {
    serde_json::from_str(s).map_err(|e| format!("invalid {what}: {e}"))
}

fn write_dot(path: &PathBuf, dot: &str) -> Result<(), String> {
    fs::write(path, dot).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn orbits(n: usize, side: SideArg, dot: Option<PathBuf>) -> Outcome {
    if n == 0 || n > borel::MAX_POSET_N {
        return Err(format!("orbits accepts 1 <= n <= {}", borel::MAX_POSET_N));
    }
    let side = match side {
        SideArg::X => Side::X,
        SideArg::Dual => Side::DualRelevant,
    };
    let poset = borel::weak_order(n, side).map_err(|e| e.to_string())?;
    if let Some(path) = dot {
        write_dot(&path, &poset.to_dot(&format!("weak_order_n{n}")))?;
    }
    Ok((json!({ "n": n, "side": side, "count": poset.len(), "poset": poset }), true))
}

fn act(n: usize, element: &str, on: &str) -> Outcome {
    let h = match parse_json::<ElementArg>("element", element)? {
        ElementArg::Sum(h) => h,
        ElementArg::Basis(w) => HeckeElement::basis(w),
    };
    let e = match parse_json::<VectorArg>("module element", on)? {
        VectorArg::Sum(e) => e,
        VectorArg::Basis(x) => ModuleElement::basis(x),
    };
    if h.rank() != 2 * n || e.n() != n {
        return Err(format!("--n {n} needs a rank {} element and a module element with n = {n}", 2 * n));
    }
    let image = iwahori::act_hecke(&h, &e).map_err(|err| err.to_string())?;
    Ok((serde_json::to_value(&image).unwrap(), true))
}

fn verify(suite: Suite, params: SuiteParams) -> Outcome {
    let report = suites::run_suite(suite, &params).map_err(|e| e.to_string())?;
    eprintln!(
        "{}: n = {}, {} cases, {} failures, {:.2?}",
        report.suite,
        report.n,
        report.cases,
        report.failures.len(),
        report.wall_time
    );
    let passed = report.passed();
    Ok((serde_json::to_value(&report).unwrap(), passed))
}

fn distinguish(ms: &str, config: SamplingConfig, dot: Option<PathBuf>) -> Outcome {
    let ms: Multisegment = parse_json("multisegment", ms)?;
    let report = quiver::distinction_verdict(&ms, &config).map_err(|e| e.to_string())?;
    if let Some(path) = dot {
        let poset = report.eps_s_poset.clone().unwrap_or_else(|| relhecke::poset::Poset::new(Vec::new(), Vec::new()));
        write_dot(&path, &poset.to_dot("eps_s"))?;
    }
    let verdict = serde_json::to_value(report.verdict).unwrap();
    eprintln!("{}: {} ({})", report.multisegment, verdict.as_str().unwrap_or_default(), report.reason);
    Ok((serde_json::to_value(&report).unwrap(), true))
}

const MAX_POSET_DIM: usize = 12;

fn poset(dims: &str, dot: &PathBuf) -> Outcome {
    let raw: Vec<usize> = parse_json("dimension vector", dims)?;
    let dims = DimVector::new(raw);
    if dims.total() > MAX_POSET_DIM {
        return Err(format!("poset accepts total dimension <= {MAX_POSET_DIM}"));
    }
    let elements = quiver::multisegments_with_dims(&dims);
    let poset = quiver::closure_poset(&elements).map_err(|e| e.to_string())?;
    write_dot(dot, &poset.to_dot("closure_order"))?;
    Ok((json!({ "dims": dims, "count": poset.len(), "poset": poset }), true))
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Orbits { n, side, dot } => orbits(n, side, dot),
        Command::Act { n, element, on } => act(n, &element, &on),
        Command::Verify { suite, n, bound, seed, prime, trials } => {
            let prime = default_prime(prime)?;
            verify(suite, SuiteParams { n, bound, seed, prime, trials })
        }
        Command::Distinguish { multisegment, trials, prime, seed, sampling, dot } => {
            let mode = match sampling {
                SamplingArg::Uniform => SamplingMode::Uniform,
                SamplingArg::RankStratified => SamplingMode::RankStratified,
            };
            let config = SamplingConfig { trials, prime: default_prime(prime)?, seed, mode };
            distinguish(&multisegment, config, dot)
        }
        Command::Poset { dims, dot } => poset(&dims, &dot),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok((value, passed)) => {
            // a closed pipe on stdout is not an error worth reporting
            let _ = writeln!(std::io::stdout().lock(), "{}", serde_json::to_string_pretty(&value).unwrap());
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
