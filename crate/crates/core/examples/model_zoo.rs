//! Every model in the zoo with its first cumulants and expansion constants.
//!
//! cargo run --example model_zoo

use renyi_lab::edgeworth::{expansion_constants, predicted_rate};
use renyi_lab::experiment::zoo_list;
use renyi_lab::{make_model, ModelSpec, Result};

pub fn run() -> Result<()> {
    print!("{}", zoo_list());
    println!();
    println!(
        "{:<22} {:>9} {:>10} {:>10} {:>18} {:>18}",
        "model", "variance", "γ₃", "γ₄", "D(Z_n‖Z) ≈", "χ²(Z_n, Z) ≈"
    );
    for kind in [
        "normal",
        "uniform",
        "bernoulli_sym",
        "bernoulli_asym",
        "bernoulli_sum",
        "gauss_scale_mixture",
        "power_density",
        "bernoulli_gauss",
        "trig_periodic",
        "sin_power",
        "counterexample",
    ] {
        let m = make_model(&ModelSpec::named(kind))?;
        let g = m.cumulants()?.standardized();
        let c = expansion_constants(&g)?;
        let rate = |d: &str| match predicted_rate(d, &c) {
            Some((k, c)) => format!("{c:.5e}/n^{k}"),
            None => "—".into(),
        };
        println!(
            "{kind:<22} {:>9.5} {:>10.5} {:>10.5} {:>18} {:>18}",
            m.variance(),
            g.gamma(3),
            g.gamma(4),
            rate("kl"),
            rate("chi2")
        );
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
