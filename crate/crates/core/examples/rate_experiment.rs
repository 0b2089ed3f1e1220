//! Rate experiment: χ²(Z_n, Z)·n^k against the predicted leading constant.
//!
//! cargo run --example rate_experiment

use renyi_lab::experiment::{rate_csv, rate_experiment, Distance, ExperimentConfig, Format};
use renyi_lab::{GridConfig, ModelSpec, Result};

pub fn run() -> Result<()> {
    for (spec, distance) in [
        ("uniform", Distance::Chi2),
        ("bernoulli_gauss", Distance::Kl),
        ("uniform", Distance::Tinf),
    ] {
        let cfg = ExperimentConfig {
            model: ModelSpec::parse(spec)?,
            distance,
            n_values: vec![4, 8, 16, 32],
            grid: GridConfig::new(12.0, 1 << 13)?,
            output: None,
            format: Format::Csv,
        };
        let report = rate_experiment(&cfg)?;
        match (report.power, report.predicted_constant) {
            (Some(k), Some(c)) => println!("# {spec}, {}: value ≈ {c:.6}/n^{k}", distance.name()),
            _ => println!("# {spec}, {}: no leading term predicted", distance.name()),
        }
        print!("{}", rate_csv(&report));
        println!();
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
