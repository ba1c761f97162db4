use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use permrow::analysis::{
    f_test_oneway, load_coverage_csv, load_grouped_csv, t_test_two_sample, write_estimates_csv,
    TTestVariant,
};
use permrow::simulation::{run_monte_carlo_with, SimulationConfig};
use permrow::theory::{
    classify_snr, feasible_condition11, minimax_rate_extreme, minimax_rate_phase, rate_psi,
    RateTarget, SignalIndices,
};
use permrow::{estimate, EstimateOptions, Error, Method, Result, SignConvention, SvdOptions};

#[derive(Parser)]
#[command(name = "permrow", version, about = "Extreme-column and log-PTR estimation for permuted monotone matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate thetaR, thetaL and range for every sample of a coverage CSV.
    Estimate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, default_value = "spectral")]
        method: Method,
        #[arg(long, value_enum, default_value_t = SignArg::RowMajority)]
        sign: SignArg,
        /// Also write ptr = exp(range).
        #[arg(long)]
        exp: bool,
        /// Trim fraction for the irep method.
        #[arg(long)]
        trim: Option<f64>,
    },
    /// Run a Monte Carlo risk study and write one row per replicate.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        reps: usize,
        #[arg(long)]
        seed: u64,
        /// CSV output, or the full JSON report if the name ends in `.json`.
        #[arg(long)]
        output: PathBuf,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Evaluate the minimax-rate formulas.
    Rates {
        #[arg(long)]
        t: f64,
        #[arg(long)]
        beta_r: f64,
        #[arg(long)]
        beta_l: Option<f64>,
        #[arg(long)]
        sigma: f64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: usize,
    },
    /// Compare groups of estimated values (sampleId,group,value).
    Compare {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = TestArg::F)]
        test: TestArg,
        #[arg(long, value_enum, default_value_t = VariantArg::Welch)]
        variant: VariantArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SignArg {
    RowMajority,
    FirstNegative,
}

#[derive(Clone, Copy, ValueEnum)]
enum TestArg {
    F,
    T,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Welch,
    Pooled,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("permrow: {e}");
            ExitCode::from(if e.is_numerical() { 3 } else { 2 })
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Estimate {
            input,
            output,
            method,
            sign,
            exp,
            trim,
        } => cmd_estimate(&input, &output, method, sign, exp, trim),
        Command::Simulate {
            config,
            reps,
            seed,
            output,
            threads,
        } => cmd_simulate(&config, reps, seed, &output, threads),
        Command::Rates {
            t,
            beta_r,
            beta_l,
            sigma,
            n,
            p,
        } => print_json(&cmd_rates(t, beta_r, beta_l, sigma, n, p)?),
        Command::Compare {
            input,
            test,
            variant,
        } => print_json(&cmd_compare(&input, test, variant)?),
    }
}

fn print_json(value: &Value) -> Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn cmd_estimate(
    input: &Path,
    output: &Path,
    method: Method,
    sign: SignArg,
    exp: bool,
    trim: Option<f64>,
) -> Result<()> {
    let table = load_coverage_csv(input)?;
    let convention = match sign {
        SignArg::RowMajority => SignConvention::RowMajoritySign,
        SignArg::FirstNegative => SignConvention::FirstNonzeroNegative,
    };
    let mut opts = EstimateOptions {
        svd: SvdOptions::with_convention(convention),
        ..EstimateOptions::default()
    };
    if let Some(trim) = trim {
        opts.trim_fraction = trim;
    }
    let est = estimate(&table.values, method, &opts)?;
    write_estimates_csv(output, &est, &table.sample_ids, exp)
}

fn cmd_simulate(
    config: &Path,
    reps: usize,
    seed: u64,
    output: &Path,
    threads: Option<usize>,
) -> Result<()> {
    let mut cfg: SimulationConfig = serde_json::from_reader(File::open(config)?)?;
    cfg.scenario.seed = seed;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(k) = threads {
        if k == 0 {
            return Err(Error::InvalidArgument("--threads must be at least 1".into()));
        }
        pool = pool.num_threads(k);
    }
    let pool = pool
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot start thread pool: {e}")))?;
    let report =
        pool.install(|| run_monte_carlo_with(&cfg.scenario, &cfg.estimators, reps, &cfg.run_options()))?;

    let mut out = BufWriter::new(File::create(output)?);
    if output.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        serde_json::to_writer_pretty(&mut out, &report)?;
        writeln!(out)?;
    } else {
        report.write_csv(&mut out)?;
    }
    out.flush()?;
    Ok(())
}

fn cmd_rates(t: f64, beta_r: f64, beta_l: Option<f64>, sigma: f64, n: usize, p: usize) -> Result<Value> {
    if n == 0 || p < 2 {
        return Err(Error::InvalidArgument(format!("need n >= 1 and p >= 2, got n={n}, p={p}")));
    }
    let idx = SignalIndices {
        t,
        beta_r,
        beta_l: beta_l.unwrap_or(0.0),
        sigma,
    };
    idx.validate()?;
    let mut out = json!({
        "psi": rate_psi(n, p),
        "rate": minimax_rate_extreme(&idx, RateTarget::Right, n, p),
        "phaseRate": minimax_rate_phase(&idx, RateTarget::Right, n, p),
        "regime": classify_snr(t, sigma, n, p),
        "condition11": feasible_condition11(&idx, n, p),
    });
    if beta_l.is_some() {
        out["rateLeft"] = json!(minimax_rate_extreme(&idx, RateTarget::Left, n, p));
        out["rateRange"] = json!(minimax_rate_extreme(&idx, RateTarget::Range, n, p));
    }
    Ok(out)
}

fn cmd_compare(input: &Path, test: TestArg, variant: VariantArg) -> Result<Value> {
    let groups = load_grouped_csv(input)?;
    let variant = match variant {
        VariantArg::Welch => TTestVariant::Welch,
        VariantArg::Pooled => TTestVariant::Pooled,
    };
    let labels: Vec<&str> = groups.groups.iter().map(|(l, _)| l.as_str()).collect();
    let sizes: Vec<usize> = groups.groups.iter().map(|(_, v)| v.len()).collect();
    match test {
        TestArg::F => {
            let r = f_test_oneway(&groups)?;
            Ok(json!({
                "test": "f",
                "groups": labels,
                "sizes": sizes,
                "f": r.f,
                "df1": r.df1,
                "df2": r.df2,
                "pValue": r.p_value,
            }))
        }
        TestArg::T => {
            if groups.groups.len() < 2 {
                return Err(Error::InvalidArgument(format!(
                    "need at least 2 groups, got {}",
                    groups.groups.len()
                )));
            }
            let mut pairs = Vec::new();
            for i in 0..groups.groups.len() {
                for j in i + 1..groups.groups.len() {
                    let (a, x) = &groups.groups[i];
                    let (b, y) = &groups.groups[j];
                    let r = t_test_two_sample(x, y, variant)?;
                    pairs.push(json!({
                        "first": a,
                        "second": b,
                        "t": r.t,
                        "df": r.df,
                        "pValue": r.p_value,
                    }));
                }
            }
            Ok(json!({
                "test": "t",
                "variant": variant,
                "groups": labels,
                "sizes": sizes,
                "comparisons": pairs,
            }))
        }
    }
}
