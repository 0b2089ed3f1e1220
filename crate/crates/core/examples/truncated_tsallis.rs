//! Tsallis distance restricted to the window |x| ≤ √(2(s − 1) log n).
//!
//! cargo run --example truncated_tsallis

use renyi_lab::edgeworth::truncated_tsallis;
use renyi_lab::{make_model, normalized_sum_density, GridConfig, ModelSpec, Result};

pub fn run() -> Result<()> {
    let model = make_model(&ModelSpec::named("uniform"))?;
    let gamma = model.cumulants()?;
    let cfg = GridConfig::default();
    println!("{:>4} {:>8} {:>14} {:>14} {:>8}", "n", "M", "I_2", "leading", "ratio");
    for n in [8, 16, 32, 64] {
        let p = normalized_sum_density(&model, n, &cfg)?;
        let r = truncated_tsallis(&p, 2.0, 4, n, Some(&gamma))?;
        let lead = r.leading_term.unwrap_or(f64::NAN);
        println!(
            "{n:>4} {:>8.4} {:>14.6e} {lead:>14.6e} {:>8.4}",
            r.window,
            r.value,
            r.value / lead
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
