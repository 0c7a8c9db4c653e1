// ∫₀^{π/2} sin(bθ) cos^{b−1}θ / sinθ dθ = π/2 across q, including the
// strongly singular and strongly oscillating ends of the range.

use std::f64::consts::{FRAC_PI_2, SQRT_2};

use qdelta::deltaseq::{cq_consistency, iq_value};
use qdelta::{QIndex, QuadAccuracy};

pub fn run_example() -> qdelta::Result<()> {
    let acc = QuadAccuracy::default();
    for qv in [1.01, 1.2, 1.0 + 1.0 / SQRT_2, 1.5, 1.8, 1.99] {
        let q = QIndex::new(qv)?;
        let v = iq_value(q, &acc)?;
        println!(
            "q = {qv:.6}: I_q = {v:.15}, |I_q - pi/2| = {:.1e}, c_q discrepancy {:.1e}",
            (v - FRAC_PI_2).abs(),
            cq_consistency(q, &acc)?
        );
    }
    Ok(())
}

fn main() -> qdelta::Result<()> {
    run_example()
}
