//! ψ(t) = e^{−t²/2} E e^{tX} = 1 − cP(t) with a trigonometric polynomial P:
//! the interior zeros of P decide the CLT in D_∞.
//!
//! cargo run --example periodic_criterion

use std::f64::consts::PI;

use renyi_lab::subgauss::periodic_clt_check;
use renyi_lab::trig::TrigPoly;
use renyi_lab::zoo::counterexample_poly;
use renyi_lab::{make_model, ModelSpec, Result};

pub fn run() -> Result<()> {
    let polys = [
        ("sin⁶t", TrigPoly::sin_power(6)),
        ("sin⁴t", TrigPoly::sin_power(4)),
        ("sin⁴t·cos²t", TrigPoly::sin_power(4).mul(&TrigPoly::cos_t().pow(2))),
        ("(1 − 4sin²t)²sin⁴t", counterexample_poly()),
    ];
    for (name, p) in polys {
        let r = periodic_clt_check(&p, None)?;
        println!(
            "{name:<22} period {:.4}  {:?}  zeros {:?}",
            p.period(),
            r.class,
            r.report.zero_set
        );
    }
    let p = counterexample_poly();
    println!(
        "counterexample: P(π/6) = {:.2e}, P″(π/6) = {}",
        p.eval(PI / 6.0),
        p.derivative(2).eval(PI / 6.0)
    );

    // the largest c keeping (1 − cQ)φ a density
    for spec in ["sin_power:m=4", "sin_power:m=6", "counterexample"] {
        let m = make_model(&ModelSpec::parse(spec)?)?;
        let per = m.periodic.as_ref().expect("periodic model");
        println!("{spec:<16} c_max = {:.6e}", per.c_max);
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
