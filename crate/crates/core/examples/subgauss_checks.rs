//! Strict subgaussianity, the separation property and subgaussian constants.
//!
//! cargo run --example subgauss_checks

use renyi_lab::subgauss::{
    bernoulli_subgauss_constant, numeric_subgauss_constant, profile, separation_check, strict_subgauss_check,
};
use renyi_lab::{make_model, ModelSpec, Result};

pub fn run() -> Result<()> {
    println!("{:<28} {:>14} {:>12}", "model", "strict", "separation");
    for spec in [
        "uniform",
        "bernoulli_sym",
        "bernoulli_asym:p=0.2",
        "power_density:d=1",
        "sin_power:m=4",
        "bernoulli_gauss",
    ] {
        let model = make_model(&ModelSpec::parse(spec)?)?.standardized();
        let prof = profile(&model, (0.0, 30.0), 6000)?;
        let strict = strict_subgauss_check(&prof, 1.0);
        let sep = separation_check(&prof, &[0.5, 1.0, 2.0]);
        println!(
            "{spec:<28} {:>14} {:>12}",
            format!("{:?}", strict.verdict),
            format!("{:?}", sep.verdict)
        );
    }

    // σ² = sup 2K(t)/t² for the standardized Bernoulli law: closed form vs scan
    println!();
    for p in [0.5, 0.3, 0.1, 0.01] {
        let model = make_model(&ModelSpec::with("bernoulli_asym", serde_json::json!({ "p": p })))?;
        let k = model.laplace()?.k.clone();
        let scan = numeric_subgauss_constant(|t| k(t), 60.0, 60_000);
        // the closed form is for the unscaled law; Z = (ξ − p)/√(pq)
        let exact = bernoulli_subgauss_constant(p)? / (p * (1.0 - p));
        println!("p = {p:<5} σ² = {exact:.10} (scan {scan:.10})");
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
