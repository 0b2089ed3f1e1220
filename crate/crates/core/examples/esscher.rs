//! Esscher tilts of a density: mean K′(h), variance K″(h) and the critical zone.
//!
//! cargo run --example esscher

use renyi_lab::subgauss::{critical_zone, esscher, esscher_stats, profile};
use renyi_lab::{discretize, make_model, GridConfig, ModelSpec, Result};

pub fn run() -> Result<()> {
    let model = make_model(&ModelSpec::named("sin_power"))?;
    let prof = profile(&model, (0.0, 12.0), 12_000)?;
    let p = discretize(&model, &GridConfig::new(16.0, 1 << 13)?)?;
    println!(
        "{:>5} {:>12} {:>12} {:>12} {:>12}",
        "h", "K′(h)", "grid mean", "K″(h)", "grid var"
    );
    for h in [0.0, 0.5, 1.0, 2.0, 3.0] {
        let q = esscher(&p, h)?;
        let (m, v) = esscher_stats(&prof, h);
        println!("{h:>5} {m:>12.8} {:>12.8} {v:>12.8} {:>12.8}", q.mean(), q.variance());
    }
    // near the zeros of A the tilted laws stay close to N(h, 1)
    // A is periodic with amplitude ≈ c, so the zone splits only once 1/(n − 1) < c
    for n in [100, 1000, 10_000] {
        let zone = critical_zone(&prof, n, 1.0)?;
        let show: Vec<String> = zone.iter().take(4).map(|(a, b)| format!("[{a:.3}, {b:.3}]")).collect();
        println!(
            "A(t) ≤ 1/(n − 1), n = {n}: {} intervals {} …",
            zone.len(),
            show.join(" ")
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
