// The test-function corpus and the classical check ∫ φ̂(u) du = 2π φ(0).

use std::f64::consts::PI;

use qdelta::testfn::{classical_delta_check, corpus, fourier_transform};
use qdelta::QuadAccuracy;

pub fn run_example() -> qdelta::Result<()> {
    let acc = QuadAccuracy::default();
    for phi in corpus() {
        let hat1 = fourier_transform(&phi, 1.0, &acc)?;
        print!(
            "{:>16}: phi(0) = {:.6}, phi_hat(1) = {:+.10}",
            phi.name(),
            phi.value_at_zero(),
            hat1.re
        );
        if phi.in_class() {
            let v = classical_delta_check(&phi, &acc)?;
            println!(
                ", int phi_hat = {v:.12} (2 pi phi(0) = {:.12})",
                2.0 * PI * phi.value_at_zero()
            );
        } else {
            println!(" (not rapidly decreasing; skipped)");
        }
    }
    Ok(())
}

fn main() -> qdelta::Result<()> {
    run_example()
}
