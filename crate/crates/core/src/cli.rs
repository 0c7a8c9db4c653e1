//! Batch verification front-end used by the `qdelta` binary.
//!
//! Every command renders either CSV (round-trip precision, fixed columns) or
//! an aligned table. Exit codes: 0 all gates pass, 1 a gate failed, 2 usage
//! error, 3 numerical error.

use std::f64::consts::{FRAC_PI_2, PI};
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::deltaseq::{delta_convergence_with_gate, iq_value, ConvergenceGate};
use crate::qfunc::{tsallis_entropy, EntropyIndex, SampledDensity};
use crate::superstat::superstat_qexp;
use crate::testfn::{by_name, classical_delta_check, corpus, TestFunction};
use crate::{q_exponential, ComplexVal, QIndex, QuadAccuracy};

#[derive(Parser, Debug)]
#[command(
    name = "qdelta",
    version,
    about = "Numerical checks for q-exponential delta representations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug)]
pub struct CommonArgs {
    /// Write the report here (atomically) instead of standard output
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    pub format: Format,
    #[arg(long, global = true)]
    pub abs_tol: Option<f64>,
    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,
    #[arg(long, global = true)]
    pub max_subdivisions: Option<usize>,
    /// Upper bound on worker threads for sweeps
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum CliCommand {
    /// Evaluate e_q(z). CSV columns: q,z_re,z_im,re,im
    Eval {
        #[arg(long)]
        q: f64,
        /// Complex argument such as 0, -1.5, 2i or 0.5-1e-3i
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
    /// Sweep the I_q integral. CSV columns: q,value,abs_err (against pi/2)
    Iq {
        /// start:stop:step (inclusive) or a comma list
        #[arg(long, default_value = "1.1:1.9:0.1")]
        q_grid: String,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Kernel pairing against c_q phi(0) over an L schedule.
    /// CSV columns: q,L,pairing,target,abs_err,rel_err
    Delta {
        #[arg(long)]
        q: f64,
        #[arg(long, default_value = "gaussian")]
        testfn: String,
        #[arg(
            long = "L-schedule",
            alias = "l-schedule",
            default_value = "10,100,1000,10000"
        )]
        l_schedule: String,
        /// Gate |pair - target| <= tol (1 + |target|) instead of the default
        /// relative/absolute gate
        #[arg(long)]
        scaled_gate: Option<f64>,
    },
    /// Max |E_W[exp(-iut(q-1)W)] - e_q(-iut)| over integer u, t.
    /// CSV columns: q,max_abs_err,u,t,points
    SuperstatCheck {
        #[arg(long, default_value = "1.1:1.9:0.1")]
        q_grid: String,
        #[arg(long, default_value_t = 256)]
        order: usize,
        /// u and t range over the integers in [-span, span]
        #[arg(long, default_value_t = 5)]
        span: i32,
        /// Skip pairs with |ut(q-1)| above this
        #[arg(long, default_value_t = 10.0)]
        max_phase: f64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Integral of the Fourier transform against 2 pi phi(0).
    /// CSV columns: testfn,value,target,abs_err
    Baseline {
        /// A corpus name; defaults to every rapidly decreasing member
        #[arg(long)]
        testfn: Option<String>,
    },
    /// Tsallis (or Shannon, without --q) entropy of a sampled density.
    /// CSV columns: density,q,entropy
    Entropy {
        /// uniform:A:B or normal:MU:SIGMA
        #[arg(long, default_value = "uniform:0:2")]
        density: String,
        #[arg(long)]
        q: Option<f64>,
        #[arg(long, default_value_t = 20001)]
        points: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Table,
}

/// Densities the `entropy` command can sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DensitySpec {
    Uniform { a: f64, b: f64 },
    Normal { mu: f64, sigma: f64 },
}

impl DensitySpec {
    pub fn parse(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let nums = |xs: &[&str]| -> Result<Vec<f64>, String> {
            xs.iter()
                .map(|x| {
                    x.trim()
                        .parse::<f64>()
                        .map_err(|e| format!("bad number `{x}`: {e}"))
                })
                .collect()
        };
        match parts.as_slice() {
            ["uniform", rest @ ..] if rest.len() == 2 => {
                let v = nums(rest)?;
                if !(v[0].is_finite() && v[1].is_finite() && v[1] > v[0]) {
                    return Err(format!("uniform needs finite A < B, got {s}"));
                }
                Ok(DensitySpec::Uniform { a: v[0], b: v[1] })
            }
            ["normal", rest @ ..] if rest.len() == 2 => {
                let v = nums(rest)?;
                if !(v[0].is_finite() && v[1].is_finite() && v[1] > 0.0) {
                    return Err(format!("normal needs finite MU and SIGMA > 0, got {s}"));
                }
                Ok(DensitySpec::Normal {
                    mu: v[0],
                    sigma: v[1],
                })
            }
            _ => Err(format!(
                "unknown density `{s}`; expected uniform:A:B or normal:MU:SIGMA"
            )),
        }
    }

    pub fn name(&self) -> String {
        match *self {
            DensitySpec::Uniform { a, b } => format!("uniform:{a}:{b}"),
            DensitySpec::Normal { mu, sigma } => format!("normal:{mu}:{sigma}"),
        }
    }

    pub fn sample(&self, points: usize) -> crate::Result<SampledDensity> {
        match *self {
            DensitySpec::Uniform { a, b } => {
                SampledDensity::from_fn(a, b, points, |_| 1.0 / (b - a))
            }
            DensitySpec::Normal { mu, sigma } => {
                let norm = 1.0 / (sigma * (2.0 * PI).sqrt());
                SampledDensity::from_fn(mu - 12.0 * sigma, mu + 12.0 * sigma, points, |x| {
                    let s = (x - mu) / sigma;
                    norm * (-0.5 * s * s).exp()
                })
            }
        }
    }
}

/// A validated command.
#[derive(Debug, Clone)]
pub enum Command {
    Eval {
        q: QIndex,
        z: ComplexVal,
    },
    Iq {
        grid: Vec<QIndex>,
        tol: f64,
    },
    Delta {
        q: QIndex,
        testfn: TestFunction,
        schedule: Vec<f64>,
        gate: ConvergenceGate,
    },
    SuperstatCheck {
        grid: Vec<QIndex>,
        order: usize,
        span: i32,
        max_phase: f64,
        tol: f64,
    },
    Baseline {
        testfns: Vec<TestFunction>,
    },
    Entropy {
        density: DensitySpec,
        index: EntropyIndex,
        points: usize,
    },
}

/// Everything needed for one run; construction validates all inputs so that
/// usage errors surface before any computation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub acc: QuadAccuracy,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub threads: Option<usize>,
}

fn q_index(v: f64) -> Result<QIndex, String> {
    QIndex::new(v).map_err(|e| e.to_string())
}

impl TryFrom<Cli> for RunConfig {
    type Error = String;

    fn try_from(cli: Cli) -> Result<Self, String> {
        let c = cli.common;
        let mut acc = QuadAccuracy::default();
        if let Some(t) = c.abs_tol {
            acc = acc.with_abs_tol(t);
        }
        if let Some(t) = c.rel_tol {
            acc = acc.with_rel_tol(t);
        }
        if let Some(n) = c.max_subdivisions {
            acc = acc.with_max_subdivisions(n);
        }
        acc.validate().map_err(|e| e.to_string())?;
        if c.threads == Some(0) {
            return Err("--threads must be at least 1".into());
        }
        let positive_tol = |t: f64, flag: &str| {
            if t > 0.0 && t.is_finite() {
                Ok(t)
            } else {
                Err(format!("{flag} must be positive, got {t}"))
            }
        };

        let command = match cli.command {
            CliCommand::Eval { q, z } => Command::Eval {
                q: q_index(q)?,
                z: parse_complex(&z)?,
            },
            CliCommand::Iq { q_grid, tol } => Command::Iq {
                grid: parse_q_grid(&q_grid)?,
                tol: positive_tol(tol, "--tol")?,
            },
            CliCommand::Delta {
                q,
                testfn,
                l_schedule,
                scaled_gate,
            } => Command::Delta {
                q: q_index(q)?,
                testfn: by_name(&testfn).map_err(|e| e.to_string())?,
                schedule: parse_schedule(&l_schedule)?,
                gate: match scaled_gate {
                    Some(t) => ConvergenceGate::Scaled(positive_tol(t, "--scaled-gate")?),
                    None => ConvergenceGate::Default,
                },
            },
            CliCommand::SuperstatCheck {
                q_grid,
                order,
                span,
                max_phase,
                tol,
            } => {
                if span < 0 {
                    return Err(format!("--span must be nonnegative, got {span}"));
                }
                Command::SuperstatCheck {
                    grid: parse_q_grid(&q_grid)?,
                    order,
                    span,
                    max_phase: positive_tol(max_phase, "--max-phase")?,
                    tol: positive_tol(tol, "--tol")?,
                }
            }
            CliCommand::Baseline { testfn } => Command::Baseline {
                testfns: match testfn {
                    Some(name) => vec![by_name(&name).map_err(|e| e.to_string())?],
                    None => corpus().into_iter().filter(|f| f.in_class()).collect(),
                },
            },
            CliCommand::Entropy { density, q, points } => Command::Entropy {
                density: DensitySpec::parse(&density)?,
                index: match q {
                    Some(q) => EntropyIndex::Tsallis(q_index(q)?),
                    None => EntropyIndex::Shannon,
                },
                points,
            },
        };
        Ok(RunConfig {
            command,
            acc,
            output: c.output,
            format: c.format,
            threads: c.threads,
        })
    }
}

/// Parses `a`, `bi`, `a+bi`, `a-bi`, `i` or `-i`.
pub fn parse_complex(s: &str) -> Result<ComplexVal, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = |e: std::num::ParseFloatError| format!("bad complex number `{s}`: {e}");
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Complex64::new(t.parse().map_err(bad)?, 0.0));
    };
    // the sign that starts the imaginary part: not leading, not an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (body[..k].parse().map_err(bad)?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => x.parse().map_err(bad)?,
    };
    Ok(Complex64::new(re, im))
}

/// `start:stop:step`, inclusive of `stop` within half a step, or `a,b,c`.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, String> {
    let num = |x: &str| {
        x.trim()
            .parse::<f64>()
            .map_err(|e| format!("bad number `{x}` in `{s}`: {e}"))
    };
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, step] = parts.as_slice() else {
            return Err(format!("grid `{s}` must look like start:stop:step"));
        };
        let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
        if !(start.is_finite() && stop.is_finite() && step > 0.0 && step.is_finite()) {
            return Err(format!(
                "grid `{s}` needs finite bounds and a positive step"
            ));
        }
        if stop < start {
            return Err(format!("grid `{s}` has stop below start"));
        }
        let n = ((stop - start) / step + 0.5).floor();
        if n > 1e6 {
            return Err(format!("grid `{s}` has more than a million points"));
        }
        Ok((0..=n as usize).map(|k| start + k as f64 * step).collect())
    } else {
        s.split(',').map(num).collect()
    }
}

fn parse_q_grid(s: &str) -> Result<Vec<QIndex>, String> {
    let grid = parse_grid(s)?;
    if grid.is_empty() {
        return Err("empty q grid".into());
    }
    grid.into_iter().map(q_index).collect()
}

fn parse_schedule(s: &str) -> Result<Vec<f64>, String> {
    let ls = parse_grid(s)?;
    if ls.len() < 3 {
        return Err(format!(
            "L schedule needs at least 3 entries, got {}",
            ls.len()
        ));
    }
    if ls.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
        return Err(format!("L schedule entries must be positive: {s}"));
    }
    if ls.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(format!("L schedule must be strictly increasing: {s}"));
    }
    Ok(ls)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Pass = 0,
    GateFailed = 1,
    Usage = 2,
    Numerical = 3,
}

/// A rendered report, its status and an optional diagnostic for stderr.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: String,
    pub status: ExitStatus,
    pub diagnostic: Option<String>,
}

#[derive(Debug, Clone)]
enum Cell {
    Num(f64),
    Text(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => format!("{v:.16e}"),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn human(&self) -> String {
        match self {
            Cell::Num(v) if *v == 0.0 => "0".into(),
            Cell::Num(v) if (1e-3..1e7).contains(&v.abs()) => {
                let s = format!("{v:.10}");
                s.trim_end_matches('0').trim_end_matches('.').to_owned()
            }
            Cell::Num(v) => format!("{v:.6e}"),
            Cell::Text(s) => s.clone(),
            Cell::Empty => "-".into(),
        }
    }
}

struct Table {
    header: &'static [&'static str],
    rows: Vec<Vec<Cell>>,
    footer: Vec<String>,
    error: Option<String>,
}

impl Table {
    fn new(header: &'static [&'static str]) -> Self {
        Self {
            header,
            rows: Vec::new(),
            footer: Vec::new(),
            error: None,
        }
    }

    fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Csv => {
                out.push_str(&self.header.join(","));
                out.push('\n');
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                    out.push_str(&cells.join(","));
                    out.push('\n');
                }
                if let Some(e) = &self.error {
                    let _ = writeln!(out, "error,{}", e.replace([',', '\n'], ";"));
                }
            }
            Format::Table => {
                let cells: Vec<Vec<String>> = self
                    .rows
                    .iter()
                    .map(|r| r.iter().map(Cell::human).collect())
                    .collect();
                let widths: Vec<usize> = (0..self.header.len())
                    .map(|j| {
                        cells
                            .iter()
                            .map(|r| r[j].len())
                            .chain([self.header[j].len()])
                            .max()
                            .unwrap_or(0)
                    })
                    .collect();
                let line = |items: &[String]| {
                    let padded: Vec<String> = items
                        .iter()
                        .zip(&widths)
                        .map(|(s, w)| format!("{s:>w$}"))
                        .collect();
                    padded.join("  ")
                };
                let header: Vec<String> = self.header.iter().map(|s| s.to_string()).collect();
                let _ = writeln!(out, "{}", line(&header));
                for r in &cells {
                    let _ = writeln!(out, "{}", line(r));
                }
                for f in &self.footer {
                    let _ = writeln!(out, "{f}");
                }
                if let Some(e) = &self.error {
                    let _ = writeln!(out, "error: {e}");
                }
            }
        }
        out
    }
}

fn fmt_complex(v: ComplexVal) -> String {
    let sign = if v.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{sign}{}i", v.re, v.im.abs())
}

/// Appends rows in order up to the first failure, which becomes the error
/// trailer.
fn fill<R>(
    table: &mut Table,
    rows: Vec<Result<R, String>>,
    mut to_cells: impl FnMut(R) -> Vec<Cell>,
) {
    for r in rows {
        match r {
            Ok(v) => table.rows.push(to_cells(v)),
            Err(e) => {
                table.error = Some(e);
                return;
            }
        }
    }
}

fn finish(table: Table, format: Format, passed: bool) -> Outcome {
    let status = if table.error.is_some() {
        ExitStatus::Numerical
    } else if passed {
        ExitStatus::Pass
    } else {
        ExitStatus::GateFailed
    };
    Outcome {
        report: table.render(format),
        diagnostic: table.error.clone(),
        status,
    }
}

/// `(q, max_abs_err, u, t, points)`
type SuperstatRow = (f64, f64, i32, i32, usize);

/// Executes a validated configuration. Sweep entries run in parallel on the
/// current rayon pool; rows are assembled in input order.
pub fn run(config: &RunConfig) -> Outcome {
    let acc = &config.acc;
    let format = config.format;
    match &config.command {
        Command::Eval { q, z } => match q_exponential(*q, *z) {
            Ok(v) => {
                let report = match format {
                    Format::Csv => {
                        let mut t = Table::new(&["q", "z_re", "z_im", "re", "im"]);
                        t.rows
                            .push([q.value(), z.re, z.im, v.re, v.im].map(Cell::Num).to_vec());
                        t.render(format)
                    }
                    Format::Table => format!("{}\n", fmt_complex(v)),
                };
                Outcome {
                    report,
                    status: ExitStatus::Pass,
                    diagnostic: None,
                }
            }
            Err(e) => {
                let mut t = Table::new(&["q", "z_re", "z_im", "re", "im"]);
                t.error = Some(format!(
                    "q_exponential(q={}, z={}): {e}",
                    q.value(),
                    fmt_complex(*z)
                ));
                finish(t, format, false)
            }
        },

        Command::Iq { grid, tol } => {
            let rows: Vec<Result<(f64, f64), String>> = grid
                .par_iter()
                .map(|&q| {
                    iq_value(q, acc)
                        .map(|v| (q.value(), v))
                        .map_err(|e| format!("iq_value(q={}): {e}", q.value()))
                })
                .collect();
            let mut t = Table::new(&["q", "value", "abs_err"]);
            let mut passed = true;
            fill(&mut t, rows, |(q, v)| {
                let err = (v - FRAC_PI_2).abs();
                passed &= err <= *tol;
                vec![Cell::Num(q), Cell::Num(v), Cell::Num(err)]
            });
            let worst = t
                .rows
                .iter()
                .filter_map(|r| match r[2] {
                    Cell::Num(e) => Some(e),
                    _ => None,
                })
                .fold(0.0, f64::max);
            t.footer.push(format!(
                "max |value - pi/2| = {worst:.3e} (tolerance {tol:e})"
            ));
            finish(t, format, passed)
        }

        Command::Delta {
            q,
            testfn,
            schedule,
            gate,
        } => {
            let mut t = Table::new(&["q", "L", "pairing", "target", "abs_err", "rel_err"]);
            match delta_convergence_with_gate(*q, testfn, schedule, *gate, acc) {
                Ok(report) => {
                    for r in &report.rows {
                        t.rows.push(vec![
                            Cell::Num(report.q),
                            Cell::Num(r.l),
                            Cell::Num(r.pairing),
                            Cell::Num(r.target),
                            Cell::Num(r.abs_err),
                            r.rel_err.map_or(Cell::Empty, Cell::Num),
                        ]);
                    }
                    let rate = report
                        .fitted_rate
                        .map_or_else(|| "-".to_owned(), |r| format!("{r:.4}"));
                    t.footer.push(format!(
                        "phi = {}; fitted rate {rate}; {}{}",
                        report.phi_name,
                        if report.passed { "passed" } else { "FAILED" },
                        if report.rate_limited {
                            " (rate-limited)"
                        } else {
                            ""
                        }
                    ));
                    finish(t, format, report.passed)
                }
                Err(e) => {
                    t.error = Some(format!(
                        "delta_convergence(q={}, testfn={}, L={schedule:?}): {e}",
                        q.value(),
                        testfn.name()
                    ));
                    finish(t, format, false)
                }
            }
        }

        Command::SuperstatCheck {
            grid,
            order,
            span,
            max_phase,
            tol,
        } => {
            let rows: Vec<Result<SuperstatRow, String>> = grid
                .par_iter()
                .map(|&q| {
                    let mut worst = (0.0, 0, 0);
                    let mut points = 0;
                    for u in -span..=*span {
                        for s in -span..=*span {
                            let (uf, tf) = (u as f64, s as f64);
                            if (uf * tf * (q.value() - 1.0)).abs() > *max_phase {
                                continue;
                            }
                            let fail = |e: crate::Error| {
                                format!(
                                    "superstat_qexp(q={}, u={u}, t={s}, order={order}): {e}",
                                    q.value()
                                )
                            };
                            let mixed = superstat_qexp(q, uf, tf, *order).map_err(fail)?;
                            let exact =
                                q_exponential(q, Complex64::new(0.0, -uf * tf)).map_err(fail)?;
                            let err = (mixed - exact).norm();
                            points += 1;
                            if err > worst.0 {
                                worst = (err, u, s);
                            }
                        }
                    }
                    Ok((q.value(), worst.0, worst.1, worst.2, points))
                })
                .collect();
            let mut t = Table::new(&["q", "max_abs_err", "u", "t", "points"]);
            let mut overall = 0f64;
            fill(&mut t, rows, |(q, err, u, s, n)| {
                overall = overall.max(err);
                vec![
                    Cell::Num(q),
                    Cell::Num(err),
                    Cell::Text(u.to_string()),
                    Cell::Text(s.to_string()),
                    Cell::Text(n.to_string()),
                ]
            });
            t.footer.push(format!(
                "max identity error {overall:.3e} at order {order} (tolerance {tol:e})"
            ));
            finish(t, format, overall <= *tol)
        }

        Command::Baseline { testfns } => {
            let rows: Vec<Result<(String, f64, f64), String>> = testfns
                .par_iter()
                .map(|phi| {
                    classical_delta_check(phi, acc)
                        .map(|v| (phi.name().to_owned(), v, 2.0 * PI * phi.value_at_zero()))
                        .map_err(|e| format!("classical_delta_check(testfn={}): {e}", phi.name()))
                })
                .collect();
            let mut t = Table::new(&["testfn", "value", "target", "abs_err"]);
            let mut passed = true;
            fill(&mut t, rows, |(name, v, target)| {
                let err = (v - target).abs();
                passed &= err <= BASELINE_TOL * (1.0 + target.abs() / (2.0 * PI));
                vec![
                    Cell::Text(name),
                    Cell::Num(v),
                    Cell::Num(target),
                    Cell::Num(err),
                ]
            });
            finish(t, format, passed)
        }

        Command::Entropy {
            density,
            index,
            points,
        } => {
            let mut t = Table::new(&["density", "q", "entropy"]);
            let q = match index {
                EntropyIndex::Shannon => 1.0,
                EntropyIndex::Tsallis(q) => q.value(),
            };
            match density
                .sample(*points)
                .and_then(|d| tsallis_entropy(&d, *index))
            {
                Ok(h) => t
                    .rows
                    .push(vec![Cell::Text(density.name()), Cell::Num(q), Cell::Num(h)]),
                Err(e) => {
                    t.error = Some(format!(
                        "tsallis_entropy(density={}, q={q}, points={points}): {e}",
                        density.name()
                    ))
                }
            }
            finish(t, format, true)
        }
    }
}

// |∫φ̂ − 2πφ(0)| ≤ 1e−8·(1 + |φ(0)|)
const BASELINE_TOL: f64 = 1e-8;

/// Writes `content` to `path` through a temporary file in the same
/// directory, so readers never observe a partial report.
pub fn write_atomic(path: &Path, content: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(content.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Parses `args`, runs, writes the report and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitStatus::Usage as i32
            } else {
                0
            };
        }
    };
    let config = match RunConfig::try_from(cli) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("qdelta: {msg}");
            return ExitStatus::Usage as i32;
        }
    };

    let outcome = match config.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| run(&config)),
            Err(e) => {
                eprintln!("qdelta: cannot start {n} threads: {e}");
                return ExitStatus::Numerical as i32;
            }
        },
        None => run(&config),
    };

    let written = match &config.output {
        Some(path) => write_atomic(path, &outcome.report)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(outcome.report.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| format!("cannot write report: {e}"))
        }
    };
    if let Some(d) = &outcome.diagnostic {
        eprintln!("qdelta: {d}");
    }
    if let Err(e) = written {
        eprintln!("qdelta: {e}");
        return ExitStatus::Numerical as i32;
    }
    outcome.status as i32
}
