//! Edgeworth densities φ_m against the exact density of Z_n.
//!
//! cargo run --example edgeworth

use renyi_lab::edgeworth::{expansion_constants, q_polynomial, EdgeworthExpansion};
use renyi_lab::{make_model, normalized_sum_density, GridConfig, ModelSpec, Result};

pub fn run() -> Result<()> {
    let model = make_model(&ModelSpec::named("bernoulli_gauss"))?;
    let gamma = model.cumulants()?;
    for nu in 1..=3 {
        let q = q_polynomial(nu, &gamma)?;
        println!("q_{nu} in Hermite form: {:?}", q.hermite);
    }
    let c = expansion_constants(&gamma)?;
    println!("D(Z_n‖Z) ≈ {:.6}/n, χ²(Z_n, Z) ≈ {:.6}/n", c.entropy_c1, c.chi2_c1);

    let cfg = GridConfig::default();
    println!("{:>4} {:>12} {:>12} {:>12} {:>12}", "n", "m=2 (φ)", "m=3", "m=4", "m=5");
    for n in [4, 16, 64] {
        let p = normalized_sum_density(&model, n, &cfg)?;
        let mut row = format!("{n:>4}");
        for m in 2..=5 {
            let e = EdgeworthExpansion::new(&gamma, m)?;
            let sup = (0..p.len())
                .map(|i| (p.values[i] - e.density(p.x(i), n)).abs())
                .fold(0.0, f64::max);
            row += &format!(" {sup:>12.3e}");
        }
        println!("{row}");
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
