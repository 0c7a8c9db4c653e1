// e_q(−iut) as a Gamma-mixture expectation, the exchanged pairing route,
// and the generalized Boltzmann factor of a Gamma mixture.

use num_complex::Complex64;
use qdelta::superstat::{bc_factor, qexp_pairing, superstat_qexp, superstat_route, MixtureSpec};
use qdelta::testfn::by_name;
use qdelta::{q_exponential, QIndex, QuadAccuracy};

pub fn run_example() -> qdelta::Result<()> {
    let acc = QuadAccuracy::default();
    let q = QIndex::new(1.5)?;

    println!("E_W[exp(-iut(q-1)W)] against e_q(-iut), q = 1.5, u = 1:");
    for t in [0.5, 2.0, 6.0, 20.0] {
        let exact = q_exponential(q, Complex64::new(0.0, -t))?;
        let row: Vec<String> = [16, 64, 256]
            .iter()
            .map(|&n| {
                let v = superstat_qexp(q, 1.0, t, n).unwrap();
                format!("n={n}: {:.2e}", (v - exact).norm())
            })
            .collect();
        println!("  t = {t:>4}: {}", row.join(", "));
    }

    let g = by_name("gaussian")?;
    for u in [0.5, 2.0] {
        let direct = qexp_pairing(q, u, &g, &acc)?;
        let route = superstat_route(q, u, &g, 128, &acc)?;
        println!(
            "pairing at u = {u}: direct {:.12}, via E_W {:.12}",
            direct.re, route.re
        );
    }

    let (k, theta) = (3.0, 0.5);
    let mix = MixtureSpec::gamma(k, theta)?;
    let b0 = bc_factor(&mix, 0.0, &acc)?;
    for e in [0.0, 1.0, 4.0] {
        let b = bc_factor(&mix, e, &acc)?;
        println!(
            "B({e}) / B(0) = {:.12}, (1 + theta E)^-(k-1) = {:.12}",
            b / b0,
            (1.0 + theta * e).powf(1.0 - k)
        );
    }
    Ok(())
}

fn main() -> qdelta::Result<()> {
    run_example()
}
