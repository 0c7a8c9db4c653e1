// Tsallis entropy of sampled densities and its Shannon limit.

use std::f64::consts::{E, PI};

use qdelta::qfunc::{tsallis_entropy, EntropyIndex, SampledDensity};
use qdelta::QIndex;

pub fn run_example() -> qdelta::Result<()> {
    let uniform = SampledDensity::from_fn(0.0, 2.0, 2001, |_| 0.5)?;
    let normal = SampledDensity::from_fn(-12.0, 12.0, 4001, |x| {
        (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
    })?;

    for (name, d, shannon) in [
        ("uniform[0,2]", &uniform, 2f64.ln()),
        ("standard normal", &normal, 0.5 * (2.0 * PI * E).ln()),
    ] {
        println!(
            "{name}: Shannon {:.12} (exact {shannon:.12})",
            tsallis_entropy(d, EntropyIndex::Shannon)?
        );
        for qv in [1.5, 1.1, 1.001, 1.0001] {
            let h = tsallis_entropy(d, EntropyIndex::Tsallis(QIndex::new(qv)?))?;
            println!("  q = {qv}: H_q = {h:.12}");
        }
    }
    Ok(())
}

fn main() -> qdelta::Result<()> {
    run_example()
}
