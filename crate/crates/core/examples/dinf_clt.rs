//! Which laws satisfy the CLT in D_∞: the A(t) = t²/2 − K(t) criterion,
//! next to T_∞(p_n‖φ) on the grid. For the counterexample c ≈ 5e−14, so its
//! obstruction sits far below anything a grid resolves.
//!
//! cargo run --example dinf_clt

use renyi_lab::divergence::infinite_order;
use renyi_lab::subgauss::{dinf_clt_check, profile};
use renyi_lab::{make_model, normalized_sum_density, GridConfig, GridDensity, ModelSpec, Result};

pub fn run() -> Result<()> {
    let cfg = GridConfig::default();
    let phi = GridDensity::standard_normal(&cfg);
    for spec in ["uniform", "power_density:d=1", "sin_power:m=4", "counterexample"] {
        let model = make_model(&ModelSpec::parse(spec)?)?.standardized();
        let rep = dinf_clt_check(&profile(&model, (0.0, 40.0), 20_000)?);
        println!("{spec}: {:?}, A = 0 at {:?}", rep.verdict, rep.zero_set);
        if model.has_density() {
            let t: Vec<String> = [4, 16, 64]
                .iter()
                .map(|&n| {
                    let p = normalized_sum_density(&model, n, &cfg)?;
                    Ok(format!("n={n}: {:.3e}", infinite_order(&p, &phi)?.t_inf.value()))
                })
                .collect::<Result<_>>()?;
            println!("    T_∞ {}", t.join(", "));
        }
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
