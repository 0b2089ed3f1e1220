//! Command-line front end. Exit codes: 0 success / holds, 1 fails, 2 inconclusive,
//! 3 bad input, 4 computation error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use renyi_lab::experiment::{
    check_command, dist_csv, dist_table, edgeworth_csv, emit, hermite_csv, parse_alpha, run_experiment, zoo_list,
    Check, CheckOptions, Distance, ExperimentConfig, Format,
};
use renyi_lab::{Error, GridConfig, ModelSpec};

#[derive(Parser)]
#[command(name = "renyi-lab", version, about = "Rényi-divergence CLT laboratory")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Common {
    /// Model: `kind`, `kind:key=value,...`, a JSON object, or `@file.json`
    #[arg(long)]
    model: Option<String>,
    /// Grid as HALF_WIDTHxPOINTS, e.g. 12x16384
    #[arg(long)]
    grid: Option<String>,
    /// Output file (stdout if absent)
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or json
    #[arg(long)]
    format: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// D_α and T_α between Z_n and N(0, 1)
    Dist {
        #[command(flatten)]
        common: Common,
        /// Comma-separated orders; 1 gives KL, `inf` gives D_∞
        #[arg(long, default_value = "0.5,1,2")]
        alpha: String,
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
    /// Distance to normality along n with fitted and predicted leading constants
    Rate {
        #[command(flatten)]
        common: Common,
        /// chi2, kl or tinf
        #[arg(long)]
        distance: Option<String>,
        /// Comma-separated, strictly increasing
        #[arg(long)]
        n: Option<String>,
        /// JSON experiment config; flags override its fields
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Normal moments c_k = E H_k(X)
    Hermite {
        #[command(flatten)]
        common: Common,
        #[arg(long = "K", default_value_t = 40)]
        k: usize,
        /// Same as --out
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// p_n next to φ and the Edgeworth density φ_m
    Edgeworth {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 16)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        m: usize,
        /// Emit every k-th grid node
        #[arg(long, default_value_t = 16)]
        stride: usize,
    },
    /// Strict subgaussianity (or the separation property)
    CheckSubgauss {
        #[command(flatten)]
        check: CheckArgs,
        #[arg(long)]
        sigma2: Option<f64>,
        /// Check the separation property instead
        #[arg(long)]
        separation: bool,
        /// t₀ values for --separation
        #[arg(long, default_value = "0.5,1,2")]
        t0: String,
    },
    /// Conditions for the CLT in D_∞
    CheckCltDinf {
        #[command(flatten)]
        check: CheckArgs,
    },
    /// Model catalogue
    Zoo {
        /// Only `list` is supported
        #[arg(default_value = "list")]
        action: String,
    },
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    model: String,
    /// t-range LO:HI
    #[arg(long, default_value = "0:50")]
    range: String,
    #[arg(long, default_value_t = 20_000)]
    samples: usize,
    /// Work from the discretized density only
    #[arg(long)]
    numeric_only: bool,
    /// Also write the JSON report here
    #[arg(long)]
    json: Option<PathBuf>,
}

/// Failure with its exit code.
struct Fail(u8, String);

fn bad(e: impl std::fmt::Display) -> Fail {
    Fail(3, e.to_string())
}

fn op(e: Error) -> Fail {
    match e {
        Error::Parse(_) => Fail(3, e.to_string()),
        _ => Fail(4, e.to_string()),
    }
}

fn model_spec(s: &str) -> Result<ModelSpec, Fail> {
    if let Some(path) = s.strip_prefix('@') {
        let text = std::fs::read_to_string(path).map_err(|e| bad(format!("{path}: {e}")))?;
        return ModelSpec::parse(&text).map_err(bad);
    }
    ModelSpec::parse(s).map_err(bad)
}

fn required_model(c: &Common) -> Result<ModelSpec, Fail> {
    model_spec(c.model.as_deref().ok_or_else(|| bad("--model is required"))?)
}

fn grid(s: &Option<String>) -> Result<GridConfig, Fail> {
    let Some(s) = s else { return Ok(GridConfig::default()) };
    let (w, n) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| bad(format!("grid '{s}' is not WxN")))?;
    let w: f64 = w
        .trim()
        .parse()
        .map_err(|_| bad(format!("bad grid half width '{w}'")))?;
    let n: usize = n
        .trim()
        .parse()
        .map_err(|_| bad(format!("bad grid point count '{n}'")))?;
    GridConfig::new(w, n).map_err(bad)
}

fn list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, Fail> {
    s.split(',')
        .map(|x| x.trim().parse().map_err(|_| bad(format!("bad {what} '{x}'"))))
        .collect()
}

fn range(s: &str) -> Result<(f64, f64), Fail> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| bad(format!("range '{s}' is not LO:HI")))?;
    let p = |v: &str| {
        v.trim()
            .parse::<f64>()
            .map_err(|_| bad(format!("bad range bound '{v}'")))
    };
    Ok((p(a)?, p(b)?))
}

fn write_out(out: &Option<PathBuf>, text: &str) -> Result<(), Fail> {
    match out {
        Some(_) => emit(out, text).map_err(op),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn format(c: &Common) -> Result<Format, Fail> {
    c.format
        .as_deref()
        .map(Format::parse)
        .transpose()
        .map_err(bad)
        .map(Option::unwrap_or_default)
}

fn run_check(a: &CheckArgs, which: Check, sigma2: Option<f64>, t0: Vec<f64>) -> Result<u8, Fail> {
    let spec = model_spec(&a.model)?;
    let opts = CheckOptions {
        range: range(&a.range)?,
        samples: a.samples,
        sigma2,
        numeric_only: a.numeric_only,
        t0,
    };
    let rep = check_command(&spec, which, &opts).map_err(op)?;
    let text = serde_json::to_string_pretty(&rep).map_err(|e| Fail(4, e.to_string()))? + "\n";
    emit(&a.json, &text).map_err(op)?;
    print!("{text}");
    Ok(rep.verdict.exit_code() as u8)
}

fn run(cli: Cli) -> Result<u8, Fail> {
    match cli.cmd {
        Cmd::Dist { common, alpha, n } => {
            let spec = required_model(&common)?;
            let alphas = alpha
                .split(',')
                .map(parse_alpha)
                .collect::<Result<Vec<_>, _>>()
                .map_err(bad)?;
            let rows = dist_table(&spec, &alphas, n, &grid(&common.grid)?).map_err(op)?;
            let text = match format(&common)? {
                Format::Csv => dist_csv(&rows),
                Format::Json => serde_json::to_string_pretty(&rows).map_err(|e| Fail(4, e.to_string()))? + "\n",
            };
            write_out(&common.out, &text)?;
        }
        Cmd::Rate {
            common,
            distance,
            n,
            config,
        } => {
            let mut cfg = match &config {
                Some(path) => {
                    let text = std::fs::read_to_string(path).map_err(|e| bad(format!("{}: {e}", path.display())))?;
                    serde_json::from_str::<ExperimentConfig>(&text).map_err(bad)?
                }
                None => ExperimentConfig {
                    model: required_model(&common)?,
                    distance: Distance::Chi2,
                    n_values: vec![8, 16, 32, 64],
                    grid: GridConfig::default(),
                    output: None,
                    format: Format::Csv,
                },
            };
            if let Some(m) = &common.model {
                cfg.model = model_spec(m)?;
            }
            if let Some(d) = &distance {
                cfg.distance = Distance::parse(d).map_err(bad)?;
            }
            if let Some(n) = &n {
                cfg.n_values = list(n, "n")?;
            }
            if common.grid.is_some() {
                cfg.grid = grid(&common.grid)?;
            }
            if common.out.is_some() {
                cfg.output = common.out.clone();
            }
            if common.format.is_some() {
                cfg.format = format(&common)?;
            }
            cfg.validate().map_err(bad)?;
            let text = run_experiment(&cfg).map_err(op)?;
            if cfg.output.is_none() {
                print!("{text}");
            }
        }
        Cmd::Hermite { common, k, emit } => {
            let spec = required_model(&common)?;
            let text = hermite_csv(&spec, k).map_err(op)?;
            write_out(&emit.or(common.out), &text)?;
        }
        Cmd::Edgeworth { common, n, m, stride } => {
            let spec = required_model(&common)?;
            let text = edgeworth_csv(&spec, n, m, &grid(&common.grid)?, stride).map_err(op)?;
            write_out(&common.out, &text)?;
        }
        Cmd::CheckSubgauss {
            check,
            sigma2,
            separation,
            t0,
        } => {
            let which = if separation { Check::Separation } else { Check::Subgauss };
            return run_check(&check, which, sigma2, list(&t0, "t0")?);
        }
        Cmd::CheckCltDinf { check } => return run_check(&check, Check::Dinf, None, Vec::new()),
        Cmd::Zoo { action } => {
            if action != "list" {
                return Err(bad(format!("unknown zoo action '{action}'")));
            }
            print!("{}", zoo_list());
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    if let Some(t) = std::env::var("RENYI_LAB_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global();
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
