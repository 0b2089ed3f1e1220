//! Gaussian scale mixtures: χ²(Z_n, Z) is finite exactly when n > 1/(4κ) for a
//! mixing law with P(ξ ≤ ε) ∝ ε^κ.
//!
//! cargo run --example mixture_chi2

use renyi_lab::zoo::{gauss_scale_mixture, mixture_chi2, mixture_finiteness, MixingLaw, ScaleTail};
use renyi_lab::Result;

pub fn run() -> Result<()> {
    let law = MixingLaw {
        atoms: vec![(0.5, 0.5), (1.5, 0.5)],
        tail: None,
    };
    println!("two atoms: χ²(X, Z) = {}", mixture_chi2(&law)?);
    let m = law.moment(2);
    println!(
        "χ²(Z_n, Z)·n² → 3(m − 1)²/8 = {:.6} (m = E ξ² = {m})",
        3.0 * (m - 1.0) * (m - 1.0) / 8.0
    );

    // ξ with density ∝ ε^{κ−1} on (0, 1 + 1/κ) has mean 1
    for kappa in [0.05, 0.1, 0.3] {
        let law = MixingLaw {
            atoms: vec![],
            tail: Some(ScaleTail {
                kappa,
                eps_max: 1.0 + 1.0 / kappa,
                weight: 1.0,
            }),
        };
        let model = gauss_scale_mixture(&law)?;
        let first = (1..=20).find(|&n| mixture_finiteness(kappa, 1.0, n).unwrap_or(false));
        println!(
            "κ = {kappa}: variance {:.6}, χ²(Z_n, Z) < ∞ from n = {first:?}",
            model.variance()
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
