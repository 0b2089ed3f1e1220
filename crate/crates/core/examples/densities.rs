//! Densities of normalized sums Z_n = (X_1 + … + X_n)/√n on a grid.
//!
//! cargo run --example densities

use renyi_lab::density::{entropy, wasserstein2};
use renyi_lab::special::std_normal_pdf;
use renyi_lab::{make_model, normalized_sum_density, GridConfig, GridDensity, ModelSpec, Result};

pub fn run() -> Result<()> {
    let cfg = GridConfig::new(12.0, 1 << 13)?;
    let phi = GridDensity::standard_normal(&cfg);
    let h_phi = entropy(&phi);
    for spec in ["uniform", "power_density:d=1", "gauss_scale_mixture"] {
        let model = make_model(&ModelSpec::parse(spec)?)?.standardized();
        println!("{spec}");
        println!(
            "{:>4} {:>12} {:>12} {:>12} {:>12}",
            "n", "variance", "h(φ)−h(p_n)", "sup|p_n−φ|", "W₂"
        );
        for n in [1, 2, 4, 8, 16] {
            let p = normalized_sum_density(&model, n, &cfg)?;
            let sup = (0..p.len())
                .map(|i| (p.values[i] - std_normal_pdf(p.x(i))).abs())
                .fold(0.0, f64::max);
            println!(
                "{n:>4} {:>12.8} {:>12.3e} {:>12.3e} {:>12.3e}",
                p.variance(),
                h_phi - entropy(&p),
                sup,
                wasserstein2(&p, &phi)
            );
        }
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
