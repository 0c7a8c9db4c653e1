// The four quadrature engines on integrals with known values.

use std::f64::consts::PI;

use qdelta::quad::{
    integrate_adaptive, integrate_double_exponential, integrate_real_line, laguerre_rule, TailBound,
};
use qdelta::QuadAccuracy;

pub fn run_example() -> qdelta::Result<()> {
    let acc = QuadAccuracy::default();

    let g = integrate_adaptive(|x: f64| (-x * x).exp(), -8.0, 8.0, &acc)?;
    println!(
        "Gauss-Kronrod: int e^(-x^2) on [-8,8] = {:.15} (err est {:.1e}, {} evals), sqrt(pi) = {:.15}",
        g.value,
        g.err_estimate,
        g.evaluations,
        PI.sqrt()
    );

    let de = integrate_double_exponential(|x: f64| x.powf(-0.5), 0.0, 1.0, &acc)?;
    println!(
        "tanh-sinh: int x^(-1/2) on [0,1] = {:.15} ({} evals)",
        de.value, de.evaluations
    );

    let tail = TailBound::Algebraic {
        amplitude: 1.0,
        power: 4.0,
    };
    let line = integrate_real_line(|x: f64| (1.0 + x * x).powi(-2), &acc, Some(&tail))?;
    println!(
        "real line: int (1+x^2)^-2 = {:.14} (pi/2 = {:.14})",
        line.value,
        PI / 2.0
    );

    // w^3 against w^(1/2) e^(-w): Gamma(4.5)
    let rule = laguerre_rule(0.5, 16)?;
    let m = rule.integrate(|w| w.powi(3));
    println!(
        "Gauss-Laguerre (alpha 0.5, 16 nodes): {:.15}, Gamma(4.5) = {:.15}",
        m,
        105.0 / 16.0 * PI.sqrt()
    );
    Ok(())
}

fn main() -> qdelta::Result<()> {
    run_example()
}
