//! Acceptance criteria, one PASS/FAIL line each. Tolerances are fixed here;
//! the process exits non-zero if any criterion fails.

use std::f64::consts::{E, FRAC_PI_2, PI, SQRT_2};
use std::time::Instant;

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};

use qdelta::deltaseq::{
    delta_convergence_with_gate, envelope_decay, iq_value, kernel_closed_form, kernel_numeric,
    ConvergenceGate, KernelParams,
};
use qdelta::qfunc::{
    gamma_ratio_constant, q_exp_modulus, q_exponential_real, tsallis_entropy, EntropyIndex,
    SampledDensity,
};
use qdelta::quad::integrate_adaptive;
use qdelta::superstat::superstat_qexp;
use qdelta::testfn::{by_name, classical_delta_check, corpus};
use qdelta::{q_exponential, QIndex, QuadAccuracy, Result};

struct Verdict {
    passed: bool,
    detail: String,
}

fn q(v: f64) -> QIndex {
    QIndex::new(v).expect("valid q")
}

fn grid_q() -> Vec<f64> {
    (1..=9).map(|k| 1.0 + 0.1 * k as f64).collect()
}

/// 1. I_q = π/2 within 1e−8 for 25 q in (1.01, 1.99), under 30 s.
fn iq_universality() -> Result<Verdict> {
    let mut qs: Vec<f64> = (0..20).map(|k| 1.01 + 0.98 * k as f64 / 19.0).collect();
    qs.extend([
        1.0 + 1.0 / SQRT_2,
        1.0 + 1.0 / PI,
        1.0 + 1.0 / E,
        (1.0 + 5f64.sqrt()) / 2.0,
        3f64.sqrt() - 0.5,
    ]);
    let acc = QuadAccuracy::default();
    let start = Instant::now();
    let mut worst = (0.0, 0.0);
    for &qv in &qs {
        let err = (iq_value(q(qv), &acc)? - FRAC_PI_2).abs();
        if err >= worst.0 {
            worst = (err, qv);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Ok(Verdict {
        passed: qs.len() == 25 && worst.0 <= 1e-8 && secs < 30.0,
        detail: format!(
            "{} q values, max |I_q - pi/2| = {:.2e} at q = {:.6}, {secs:.2} s",
            qs.len(),
            worst.0,
            worst.1
        ),
    })
}

/// 2. |E_W[e^{−iut(q−1)W}] − e_q(−iut)| ≤ 1e−8 at order 256 wherever
///    |ut(q−1)| ≤ 10.
fn superstat_identity() -> Result<Verdict> {
    let mut worst = (0.0, 0.0, 0, 0);
    let mut points = 0;
    for qv in grid_q() {
        for u in -5..=5 {
            for t in -5..=5 {
                let (uf, tf) = (u as f64, t as f64);
                if (uf * tf * (qv - 1.0)).abs() > 10.0 {
                    continue;
                }
                let mixed = superstat_qexp(q(qv), uf, tf, 256)?;
                let exact = q_exponential(q(qv), Complex64::new(0.0, -uf * tf))?;
                let err = (mixed - exact).norm();
                points += 1;
                if err > worst.0 {
                    worst = (err, qv, u, t);
                }
            }
        }
    }
    Ok(Verdict {
        passed: worst.0 <= 1e-8,
        detail: format!(
            "{points} points, max error {:.2e} at q = {:.1}, u = {}, t = {}",
            worst.0, worst.1, worst.2, worst.3
        ),
    })
}

/// 3. Pairing converges to (2π/(2−q))·φ(0): final |pair − target| ≤
///    1e−3·(1 + |target|), errors non-increasing up to one 10% inversion.
fn delta_convergence_check() -> Result<Verdict> {
    let acc = QuadAccuracy::default();
    let schedule = [10.0, 100.0, 1000.0, 10000.0];
    let mut failures = Vec::new();
    let mut cases = 0;
    for name in ["gaussian", "scaled-gaussian", "bump", "hermite-damped"] {
        let phi = by_name(name)?;
        for qv in [1.25, 1.5, 1.75] {
            let report = delta_convergence_with_gate(
                q(qv),
                &phi,
                &schedule,
                ConvergenceGate::Scaled(1e-3),
                &acc,
            )?;
            cases += 1;
            if !report.passed {
                let last = report.rows.last().expect("rows");
                failures.push(format!(
                    "{name}@{qv} err {:.2e}{}",
                    last.abs_err,
                    if report.rate_limited {
                        " (rate-limited)"
                    } else {
                        ""
                    }
                ));
            }
        }
    }
    Ok(Verdict {
        passed: failures.is_empty(),
        detail: format!(
            "{}/{cases} cases pass{}",
            cases - failures.len(),
            if failures.is_empty() {
                String::new()
            } else {
                format!("; failing: {}", failures.join(", "))
            }
        ),
    })
}

/// 4. Closed-form kernel equals the brute-force integral within 1e−9
///    relative, measured against the integral's absolute mass where the
///    kernel value itself cancels to near zero.
fn kernel_oracle() -> Result<Verdict> {
    let acc = QuadAccuracy::default()
        .with_abs_tol(1e-13)
        .with_rel_tol(1e-11);
    let mut worst = (0.0, 0.0, 0.0, 0.0);
    let mut plain_ok = 0;
    let mut points = 0;
    for qv in grid_q() {
        for l in [1.0, 10.0, 100.0] {
            let p = KernelParams::new(q(qv), l)?;
            for x in [0.1, -0.1, 1.0, -1.0, 5.0, -5.0] {
                let numeric = kernel_numeric(p, x, &acc)?.re;
                let closed = kernel_closed_form(p, x);
                let mass =
                    integrate_adaptive(|k: f64| q_exp_modulus(q(qv), k, x), -l, l, &acc)?.value;
                let diff = (numeric - closed).abs();
                let rel = diff / closed.abs().max(mass);
                points += 1;
                if diff <= 1e-9 * closed.abs() {
                    plain_ok += 1;
                }
                if rel >= worst.0 {
                    worst = (rel, qv, l, x);
                }
            }
        }
    }
    Ok(Verdict {
        passed: worst.0 <= 1e-9,
        detail: format!(
            "{points} points, max relative gap {:.2e} at q = {:.1}, L = {}, x = {} ({plain_ok} also within 1e-9 of |K|)",
            worst.0, worst.1, worst.2, worst.3
        ),
    })
}

/// 5. ∫ φ̂ = 2π·φ(0) within 1e−8 for every rapidly decreasing corpus member.
fn classical_baseline() -> Result<Verdict> {
    let acc = QuadAccuracy::default();
    let mut worst = (0.0, String::new());
    let mut members = 0;
    for phi in corpus().into_iter().filter(|p| p.in_class()) {
        let err = (classical_delta_check(&phi, &acc)? - 2.0 * PI * phi.value_at_zero()).abs();
        members += 1;
        if err >= worst.0 {
            worst = (err, phi.name().to_owned());
        }
    }
    Ok(Verdict {
        passed: worst.0 <= 1e-8,
        detail: format!("{members} members, max error {:.2e} ({})", worst.0, worst.1),
    })
}

/// 6. Γ-ratio constant equals 1/(2−q) within 1e−12 for 50 random q.
fn gamma_ratio() -> Result<Verdict> {
    let mut rng = rand::rngs::StdRng::seed_from_u64(0x5eed);
    let mut worst = (0.0, 0.0);
    for _ in 0..50 {
        let qv: f64 = rng.random_range(1.01..1.99);
        let qi = q(qv);
        let err = (gamma_ratio_constant(qi) - 1.0 / (2.0 - qv)).abs();
        if err >= worst.0 {
            worst = (err, qv);
        }
    }
    Ok(Verdict {
        passed: worst.0 <= 1e-12,
        detail: format!("50 draws, max error {:.2e} at q = {:.6}", worst.0, worst.1),
    })
}

/// 7. Fitted decay of |K(1)| in L is −(2−q)/(q−1) within 10% for
///    q ∈ {1.25, 1.5}; q = 1.9 is reported as rate-limited.
fn envelope_law() -> Result<Verdict> {
    let ls = [100.0, 200.0, 400.0, 800.0, 1600.0];
    let mut parts = Vec::new();
    let mut passed = true;
    for qv in [1.25, 1.5] {
        let fit = envelope_decay(q(qv), 1.0, &ls)?;
        let rel = ((fit.exponent - fit.expected) / fit.expected).abs();
        passed &= rel <= 0.1;
        parts.push(format!(
            "q={qv}: {:.4} vs {:.4}",
            fit.exponent, fit.expected
        ));
    }
    let slow = envelope_decay(q(1.9), 1.0, &ls)?;
    passed &= slow.rate_limited;
    parts.push(format!(
        "q=1.9: {:.4} vs {:.4} ({})",
        slow.exponent,
        slow.expected,
        if slow.rate_limited {
            "rate-limited"
        } else {
            "not flagged"
        }
    ));
    Ok(Verdict {
        passed,
        detail: parts.join("; "),
    })
}

/// 8. sup_{[−3,3]} |e_q(x) − e^x| shrinks linearly in q−1, and
///    H_q(uniform[0,2]) is within 1e−3 of ln 2 at q = 1.0001.
fn q_to_one() -> Result<Verdict> {
    let qs = [1.01, 1.001, 1.0001];
    let mut ratios = Vec::new();
    for &qv in &qs {
        let mut gap = 0f64;
        for k in -300..=300 {
            let x = k as f64 / 100.0;
            gap = gap.max((q_exponential_real(q(qv), x)? - x.exp()).abs());
        }
        ratios.push(gap / (qv - 1.0));
    }
    let spread = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        / ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let linear = spread < 1.1;

    let uniform = SampledDensity::from_fn(0.0, 2.0, 20001, |_| 0.5)?;
    let h = tsallis_entropy(&uniform, EntropyIndex::Tsallis(q(1.0001)))?;
    let entropy_ok = (h - 2f64.ln()).abs() <= 1e-3;
    Ok(Verdict {
        passed: linear && entropy_ok,
        detail: format!(
            "gap/(q-1) = {:.4}, {:.4}, {:.4}; H_q(uniform[0,2]) = {h:.6} (ln 2 = {:.6})",
            ratios[0],
            ratios[1],
            ratios[2],
            2f64.ln()
        ),
    })
}

type Criterion = (&'static str, fn() -> Result<Verdict>);

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 I_q universality", iq_universality),
        ("2 superstatistics identity", superstat_identity),
        (
            "3 delta convergence to c_q phi(0)",
            delta_convergence_check,
        ),
        ("4 closed-form kernel vs quadrature", kernel_oracle),
        ("5 classical baseline", classical_baseline),
        ("6 Gamma-ratio constant", gamma_ratio),
        ("7 envelope decay law", envelope_law),
        ("8 q -> 1 continuity", q_to_one),
    ];
    println!("\nrunning {} acceptance criteria", criteria.len());
    let mut failed = 0;
    for (name, check) in criteria {
        let (ok, detail) = match check() {
            Ok(v) => (v.passed, v.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failed += 1;
        }
        println!("{} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    }
    println!(
        "\nacceptance: {} passed, {failed} failed\n",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
