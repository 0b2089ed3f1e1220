//! The whole family of distances between Z_n and N(0, 1) for one model.
//!
//! cargo run --example divergences

use renyi_lab::divergence::{infinite_order, kl, pearson_vajda, relative_fisher, renyi_tsallis, tv_hellinger};
use renyi_lab::{make_model, normalized_sum_density, GridConfig, GridDensity, ModelSpec, Result};

pub fn run() -> Result<()> {
    let cfg = GridConfig::new(12.0, 1 << 13)?;
    let phi = GridDensity::standard_normal(&cfg);
    let model = make_model(&ModelSpec::named("uniform"))?;
    for n in [1, 4] {
        let p = normalized_sum_density(&model, n, &cfg)?;
        println!("uniform, n = {n}");
        println!("  {:>6} {:>14} {:>14}", "α", "D_α", "T_α");
        for alpha in [0.25, 0.5, 0.75, 1.5, 2.0, 4.0] {
            let r = renyi_tsallis(&p, &phi, alpha)?;
            println!("  {alpha:>6} {:>14.6e} {:>14.6e}", r.d.value(), r.t.value());
        }
        let d = kl(&p, &phi)?.value.value();
        let dinf = infinite_order(&p, &phi)?;
        let (tv, hel) = tv_hellinger(&p, &phi)?;
        println!("  KL           {d:.6e}");
        println!(
            "  D_∞          {:.6e} (sup of p/φ at x = {:.3})",
            dinf.d_inf.value(),
            dinf.argmax
        );
        println!("  TV, H        {tv:.6e}, {hel:.6e}");
        println!("  χ_2          {:.6e}", pearson_vajda(&p, &phi, 2.0)?.value.value());
        println!("  Pinsker      TV²/2 = {:.3e} ≤ D = {d:.3e}", 0.5 * tv * tv);
        match relative_fisher(&p, &phi) {
            Ok(i) => println!("  log-Sobolev  D = {d:.3e} ≤ I/2 = {:.3e}", 0.5 * i),
            // n = 1: the uniform density jumps, so I(p‖φ) = ∞
            Err(e) => println!("  relative Fisher information: {e}"),
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
