//! The family f(t) = e^{−t²/2}(1 − αt² + βt⁴): characteristic function or not,
//! strictly subgaussian or not.
//!
//! cargo run --example quartic_family

use renyi_lab::subgauss::quartic_classify;

pub fn run() -> renyi_lab::Result<()> {
    let alphas = [0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0];
    print!("{:>6}", "β \\ α");
    for a in alphas {
        print!("{a:>6}");
    }
    println!("   (S strictly subgaussian, c characteristic function, . neither)");
    for beta in [0.0, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5] {
        print!("{beta:>6}");
        for a in alphas {
            let c = quartic_classify(a, beta);
            let mark = if c.is_strictly_subgaussian {
                "S"
            } else if c.is_characteristic_function {
                "c"
            } else {
                "."
            };
            print!("{mark:>6}");
        }
        println!();
    }
    let c = quartic_classify(1.0, 0.25);
    println!("zeros of 1 − t² + t⁴/4: {:?}", c.zeros);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
