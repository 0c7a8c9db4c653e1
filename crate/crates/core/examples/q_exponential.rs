// The complex q-exponential, its modulus law and the q → 1 limit.

use num_complex::Complex64;
use qdelta::qfunc::{q_exp_modulus, q_exponential_real};
use qdelta::{q_exponential, QIndex};

pub fn run_example() -> qdelta::Result<()> {
    let q = QIndex::new(1.5)?;
    println!(
        "q = {q}: shape 1/(q-1) = {}, c_q = {:.12}",
        q.shape(),
        q.cq()
    );

    for z in [
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, -1.0),
        Complex64::new(-2.0, 0.5),
        Complex64::new(1.0, 3.0),
    ] {
        println!("e_q({z}) = {:.15}", q_exponential(q, z)?);
    }

    // |e_q(-iut)| = (1 + (q-1)^2 u^2 t^2)^(-1/(2(q-1)))
    let v = q_exponential(q, Complex64::new(0.0, -2.0 * 3.0))?;
    println!(
        "|e_q(-6i)| = {:.15} vs {:.15}",
        v.norm(),
        q_exp_modulus(q, 2.0, 3.0)
    );

    // the real axis right of the cut, and the branch cut itself
    println!("e_q(1.9) = {:.6}", q_exponential_real(q, 1.9)?);
    match q_exponential(q, Complex64::new(2.5, 0.0)) {
        Err(e) => println!("e_q(2.5): {e}"),
        Ok(v) => println!("e_q(2.5) = {v}"),
    }

    for qv in [1.01, 1.001, 1.0001] {
        let q = QIndex::new(qv)?;
        let gap = (-30..=30)
            .map(|k| {
                let x = k as f64 / 10.0;
                (q_exponential_real(q, x).unwrap() - x.exp()).abs()
            })
            .fold(0.0, f64::max);
        println!("q = {qv}: sup |e_q(x) - e^x| on [-3, 3] = {gap:.3e}");
    }
    Ok(())
}

fn main() -> qdelta::Result<()> {
    run_example()
}
