use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use xlab::asymptotics::{run_sweep, schedule, write_sweep_csv, write_sweep_dat};
use xlab::christoffel::{lambda, ComputeOptions, Method};
use xlab::measure::{EvalPoint, MeasureSpec};
use xlab::measure_file::{self, parse_eval_point};
use xlab::potential::{write_equilibrium_csv, EquilibriumDensity};
use xlab::quadrature::DEFAULT_NODES_PER_DEGREE;
use xlab::scalar::Precision;
use xlab::verify::{run_suite, Suite};
use xlab::{Error, Result};

/// Christoffel functions of jump-weight measures on curves and their
/// asymptotics.
#[derive(Parser)]
#[command(name = "xlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Computes lambda_n(mu, z) for one degree.
    Lambda {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "kernel")]
        method: Method,
        #[arg(long)]
        json: bool,
    },
    /// Sweeps n lambda_n over a geometric schedule and writes a CSV.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 8)]
        n_min: usize,
        #[arg(long, default_value_t = 512)]
        n_max: usize,
        #[arg(long, default_value_t = 1.25)]
        ratio: f64,
        /// Fit L + c1/n + c2/n^2 to the last rows.
        #[arg(long)]
        extrapolate: bool,
        #[arg(long, default_value = "kernel")]
        method: Method,
        /// CSV destination; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write a whitespace-separated .dat next to the CSV.
        #[arg(long, requires = "out")]
        dat: bool,
        /// Print the full result as JSON (needs --out).
        #[arg(long, requires = "out")]
        json: bool,
    },
    /// Samples the equilibrium density of the support.
    Equilibrium {
        #[arg(long)]
        measure: PathBuf,
        #[arg(long, default_value_t = 256)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs a verification suite (or `all`).
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    measure: PathBuf,
    /// `re,im` or `auto-jump`; defaults to the file's eval.z0. `lambda`
    /// also accepts points off the support.
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    /// Working precision in bits (53 or up to 128); automatic when omitted.
    #[arg(long)]
    precision: Option<u32>,
    #[arg(long, default_value_t = DEFAULT_NODES_PER_DEGREE)]
    nodes_per_degree: usize,
}

impl Common {
    fn measure(&self) -> Result<MeasureSpec> {
        let mu = measure_file::load(&self.measure)?;
        match &self.z {
            Some(z) => mu.at(parse_eval_point(z)?),
            None => Ok(mu),
        }
    }

    fn options(&self) -> Result<ComputeOptions> {
        Ok(ComputeOptions {
            precision: match self.precision {
                Some(bits) => Precision::from_bits(bits)?,
                None => Precision::Auto,
            },
            nodes_per_degree: self.nodes_per_degree,
            ..ComputeOptions::default()
        })
    }
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Lambda {
            common,
            n,
            method,
            json,
        } => {
            let mu = measure_file::load(&common.measure)?;
            let z = match common.z.as_deref().map(parse_eval_point).transpose()? {
                Some(EvalPoint::Point(z)) => z,
                Some(EvalPoint::AutoJump) => mu.at(EvalPoint::AutoJump)?.z0()?.z,
                None => mu.z0()?.z,
            };
            let v = lambda(&mu, n, z, method, &common.options()?)?;
            if json {
                let out = json!({
                    "n": v.n,
                    "z": [v.z.re, v.z.im],
                    "lambda_n": v.lambda,
                    "n_lambda_n": n as f64 * v.lambda,
                    "method": v.method.name(),
                    "precision_bits": v.precision_bits,
                    "anchor_residual": v.anchor_residual,
                });
                println!("{out:#}");
            } else {
                println!("lambda_{n}({}) = {:.16e}", v.z, v.lambda);
                println!("n lambda_n = {:.16e}", n as f64 * v.lambda);
                println!("method {}, {} bits", v.method.name(), v.precision_bits);
                if let Some(r) = v.anchor_residual {
                    println!("|P(z) - 1| = {r:.3e}");
                }
            }
            Ok(true)
        }
        Command::Sweep {
            common,
            n_min,
            n_max,
            ratio,
            extrapolate,
            method,
            out,
            dat,
            json,
        } => {
            let mu = common.measure()?;
            let mut result = run_sweep(&mu, &schedule(n_min, n_max, ratio)?, method, &common.options()?)?;
            if extrapolate {
                result.extrapolate()?;
            }
            let mut w = output(out.as_deref())?;
            write_sweep_csv(&mut w, &result)?;
            w.flush()?;
            if dat {
                if let Some(p) = &out {
                    let mut d = BufWriter::new(File::create(p.with_extension("dat"))?);
                    write_sweep_dat(&mut d, &result)?;
                    d.flush()?;
                }
            }
            for r in result.rows.iter().filter(|r| !r.ok()) {
                eprintln!("warning: n={} failed: {}", r.n, r.failure.as_deref().unwrap_or(""));
            }
            if result.last_ok().is_none() {
                return Err(Error::InsufficientData { needed: 1, got: 0 });
            }
            if json {
                println!("{}", serde_json::to_string_pretty(&result).expect("sweep result serializes"));
            } else if out.is_some() {
                println!("predicted limit {:.10}", result.predicted.value);
                if let Some(r) = result.last_ok() {
                    println!("n={} n lambda_n {:.10} (relative error {:.3e})", r.n, r.n_lambda_n, r.relative_error);
                }
                if let Some(e) = &result.extrapolation {
                    let flag = if e.flagged { " [fit rejected, last raw value]" } else { "" };
                    println!("extrapolated {:.10}{flag}; {}", e.limit, e.fit_model);
                }
            }
            Ok(true)
        }
        Command::Equilibrium { measure, samples, out } => {
            let mu = measure_file::load(&measure)?;
            let samples = EquilibriumDensity::new(mu.support())?.sample(samples)?;
            let mut w = output(out.as_deref())?;
            write_equilibrium_csv(&mut w, &samples)?;
            w.flush()?;
            Ok(true)
        }
        Command::Verify { suite, tol, json } => {
            let suites = if suite == "all" {
                Suite::ALL.to_vec()
            } else {
                vec![suite.parse::<Suite>()?]
            };
            let mut reports = Vec::new();
            for s in suites {
                let report = run_suite(s, tol)?;
                if !json {
                    print!("{report}");
                }
                reports.push(report);
            }
            if json {
                println!("{}", serde_json::to_string_pretty(&reports).expect("reports serialize"));
            }
            Ok(reports.iter().all(|r| r.passed))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
