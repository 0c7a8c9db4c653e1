// The truncated kernel K_{q,L}, its pairing with test functions, and the
// convergence of the pairing to (2π/(2−q))·φ(0).

use qdelta::deltaseq::{
    delta_convergence, envelope_decay, kernel_closed_form, kernel_numeric, KernelParams,
};
use qdelta::testfn::by_name;
use qdelta::{QIndex, QuadAccuracy};

pub fn run_example() -> qdelta::Result<()> {
    let acc = QuadAccuracy::default();

    let p = KernelParams::new(QIndex::new(1.3)?, 20.0)?;
    for x in [0.0, 0.05, 0.5, 3.0] {
        let numeric = kernel_numeric(p, x, &acc)?;
        println!(
            "K(q=1.3, L=20, x={x}): closed form {:+.12}, quadrature {:+.12}",
            kernel_closed_form(p, x),
            numeric.re
        );
    }

    for qv in [1.25, 1.5, 1.9] {
        let fit = envelope_decay(QIndex::new(qv)?, 1.0, &[100.0, 200.0, 400.0, 800.0, 1600.0])?;
        println!(
            "q = {qv}: |K(1)| ~ L^{:.4} (expected {:.4}){}",
            fit.exponent,
            fit.expected,
            if fit.rate_limited {
                ", rate-limited"
            } else {
                ""
            }
        );
    }

    let schedule = [10.0, 100.0, 1000.0, 10000.0];
    for (qv, name) in [(1.5, "gaussian"), (1.25, "bump"), (1.25, "hermite-damped")] {
        let report = delta_convergence(QIndex::new(qv)?, &by_name(name)?, &schedule, &acc)?;
        print!("{report}");
    }
    Ok(())
}

fn main() -> qdelta::Result<()> {
    run_example()
}
