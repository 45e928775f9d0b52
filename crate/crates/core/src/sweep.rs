//! Parameter sweeps over `z = x e^{iπ·θ/π}` grids and their CSV form.
//!
//! Rows are produced target-major, then x-major, then θ-minor, whatever the
//! number of worker threads.

use std::f64::consts::{LN_10, PI};
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::amplitude::{AmplitudeSpec, BuiltinAmplitude, DEFAULT_DELTA};
use crate::error::{invalid, Error, Result};
use crate::expansion::{watson_sum_with_delta, EvalPoint};
use crate::expintegral::{e1_expansion, e1_optimal_index, superasymptotic_estimate};
use crate::oracle::{reference_value, DEFAULT_TOL};

/// What a sweep evaluates: a Laplace integral with a builtin amplitude, or
/// the optimally truncated exponential-integral expansion (`e1`, real x only).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Target {
    Amplitude(BuiltinAmplitude),
    E1,
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Amplitude(kind) => kind.fmt(f),
            Target::E1 => f.write_str("e1"),
        }
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim().eq_ignore_ascii_case("e1") {
            Ok(Target::E1)
        } else {
            s.parse().map(Target::Amplitude)
        }
    }
}

/// `points` equally spaced values of θ/π from `start` to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaGrid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl ThetaGrid {
    pub fn new(start: f64, stop: f64, points: usize) -> Self {
        ThetaGrid { start, stop, points }
    }

    pub fn values(&self) -> Vec<f64> {
        match self.points {
            0 => Vec::new(),
            1 => vec![self.start],
            n => {
                let step = (self.stop - self.start) / (n - 1) as f64;
                (0..n)
                    .map(|k| if k == n - 1 { self.stop } else { self.start + step * k as f64 })
                    .collect()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub targets: Vec<Target>,
    pub r: f64,
    pub x_values: Vec<f64>,
    /// In units of π.
    pub theta: ThetaGrid,
    pub delta: f64,
    pub tol: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Preset::Fig1a.config()
    }
}

/// The baked-in sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// `U(1/2, 3/4)` amplitude, `r = 0.8`, `x = 5, 10, 15, 20`.
    Fig1a,
    /// Struve amplitude on the same grid.
    Fig1b,
    /// Simple pole at `e^{-iψ}`, `ψ = 0.1π, 0.4π`, `x = 20`.
    Fig2a,
    /// Square-root branch point at `e^{-iψ}`, `ψ = 0.1π, 0.4π`, `x = 20`.
    Fig2b,
    /// Exponential integral at its optimal index, `x = 1, 2, …, 30`.
    E1,
    /// `f(t) = 1`, whose Watson series is exact.
    Trivial,
}

impl Preset {
    pub const ALL: [Preset; 6] = [Preset::Fig1a, Preset::Fig1b, Preset::Fig2a, Preset::Fig2b, Preset::E1, Preset::Trivial];

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Fig1a => "fig1a",
            Preset::Fig1b => "fig1b",
            Preset::Fig2a => "fig2a",
            Preset::Fig2b => "fig2b",
            Preset::E1 => "e1",
            Preset::Trivial => "trivial",
        }
    }

    pub fn config(&self) -> SweepConfig {
        let one = |k| vec![Target::Amplitude(k)];
        let both = |f: fn(f64) -> BuiltinAmplitude| vec![Target::Amplitude(f(0.1 * PI)), Target::Amplitude(f(0.4 * PI))];
        let (targets, x_values) = match self {
            Preset::Fig1a => (
                one(BuiltinAmplitude::ConfluentU {
                    a: Complex64::new(0.5, 0.0),
                    b: Complex64::new(0.75, 0.0),
                }),
                vec![5.0, 10.0, 15.0, 20.0],
            ),
            Preset::Fig1b => (one(BuiltinAmplitude::StruveK0), vec![5.0, 10.0, 15.0, 20.0]),
            Preset::Fig2a => (both(|psi| BuiltinAmplitude::Pole { psi }), vec![20.0]),
            Preset::Fig2b => (both(|psi| BuiltinAmplitude::SqrtBranch { psi }), vec![20.0]),
            Preset::E1 => (vec![Target::E1], (1..=30).map(f64::from).collect()),
            Preset::Trivial => (one(BuiltinAmplitude::Constant), vec![5.0, 10.0, 15.0, 20.0]),
        };
        let theta = if *self == Preset::E1 {
            ThetaGrid::new(0.0, 0.0, 1)
        } else {
            ThetaGrid::new(0.0, 0.48, 49)
        };
        SweepConfig {
            targets,
            r: 0.8,
            x_values,
            theta,
            delta: DEFAULT_DELTA,
            tol: DEFAULT_TOL,
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| invalid("preset", format!("unknown preset {s:?}")))
    }
}

impl SweepConfig {
    /// Checks every field; errors name the offending one.
    pub fn validate(&self) -> Result<()> {
        if self.targets.is_empty() {
            return Err(invalid("spec", "no amplitude given"));
        }
        if !(self.delta > 0.0 && self.delta < 0.5 * PI) {
            return Err(invalid("delta", format!("needs 0 < delta < pi/2, got {}", self.delta)));
        }
        if !(self.tol > 0.0) {
            return Err(invalid("tol", format!("must be positive, got {}", self.tol)));
        }
        if self.x_values.is_empty() {
            return Err(invalid("x", "no x values given"));
        }
        if let Some(x) = self.x_values.iter().find(|x| !(**x > 0.0 && x.is_finite())) {
            return Err(invalid("x", format!("values must be positive, got {x}")));
        }
        if self.theta.points == 0 {
            return Err(invalid("points", "need at least one theta point"));
        }
        let limit = 0.5 - self.delta / PI + 1e-12;
        for t in [self.theta.start, self.theta.stop] {
            if !(t.abs() <= limit) {
                return Err(invalid(
                    "theta-range",
                    format!("theta/pi = {t} outside [-{0}, {0}] for delta = {1}", 0.5 - self.delta / PI, self.delta),
                ));
            }
        }
        for target in &self.targets {
            if let Target::Amplitude(kind) = target {
                let spec = AmplitudeSpec::builtin(*kind)?;
                if !(self.r > 0.0 && self.r < spec.radius) {
                    return Err(invalid(
                        "r",
                        format!("{kind} needs 0 < r < {}, got {}", spec.radius, self.r),
                    ));
                }
            }
        }
        Ok(())
    }

    /// The grid points in output order.
    pub fn points(&self) -> Vec<(Target, f64, f64)> {
        let thetas = self.theta.values();
        let mut out = Vec::new();
        for target in &self.targets {
            for &x in &self.x_values {
                match target {
                    Target::E1 => out.push((*target, x, 0.0)),
                    Target::Amplitude(_) => out.extend(thetas.iter().map(|&t| (*target, x, t))),
                }
            }
        }
        out
    }
}

/// One grid point of a sweep. Numeric fields are empty when the point failed,
/// in which case `error` holds the reason.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub spec: String,
    pub x: f64,
    pub theta_over_pi: f64,
    pub n_star: Option<usize>,
    pub partial_re: Option<f64>,
    pub partial_im: Option<f64>,
    pub oracle_re: Option<f64>,
    pub oracle_im: Option<f64>,
    pub abs_remainder: Option<f64>,
    pub log10_abs_remainder: Option<f64>,
    pub envelope_alg: Option<f64>,
    pub envelope_sing: Option<f64>,
    /// `log₁₀(|R| / envelope_alg)`, i.e. `log₁₀(e^{r|z|} |R|)` for amplitudes.
    pub log10_scaled_remainder_alg: Option<f64>,
    /// `log₁₀(e^{|z| ρ cos(θ-ψ)} |R|)` for the first singularity of the amplitude.
    pub log10_scaled_remainder_sing: Option<f64>,
    pub error: Option<String>,
}

pub const COLUMNS: [&str; 15] = [
    "spec",
    "x",
    "theta_over_pi",
    "n_star",
    "partial_re",
    "partial_im",
    "oracle_re",
    "oracle_im",
    "abs_remainder",
    "log10_abs_remainder",
    "envelope_alg",
    "envelope_sing",
    "log10_scaled_remainder_alg",
    "log10_scaled_remainder_sing",
    "error",
];

impl SweepRecord {
    fn failed(spec: String, x: f64, theta_over_pi: f64, err: Error) -> Self {
        SweepRecord {
            spec,
            x,
            theta_over_pi,
            n_star: None,
            partial_re: None,
            partial_im: None,
            oracle_re: None,
            oracle_im: None,
            abs_remainder: None,
            log10_abs_remainder: None,
            envelope_alg: None,
            envelope_sing: None,
            log10_scaled_remainder_alg: None,
            log10_scaled_remainder_sing: None,
            error: Some(err.to_string()),
        }
    }

    pub fn partial(&self) -> Option<Complex64> {
        Some(Complex64::new(self.partial_re?, self.partial_im?))
    }

    pub fn oracle(&self) -> Option<Complex64> {
        Some(Complex64::new(self.oracle_re?, self.oracle_im?))
    }
}

/// Evaluates one grid point. Failures become records with an error message.
pub fn evaluate_point(target: Target, x: f64, theta_over_pi: f64, r: f64, delta: f64, tol: f64) -> SweepRecord {
    let name = target.to_string();
    let result = match target {
        Target::Amplitude(kind) => amplitude_point(kind, x, theta_over_pi, r, delta, tol),
        Target::E1 => e1_point(x),
    };
    match result {
        Ok(mut record) => {
            record.spec = name;
            record
        }
        Err(e) => SweepRecord::failed(name, x, theta_over_pi, e),
    }
}

fn amplitude_point(kind: BuiltinAmplitude, x: f64, theta_over_pi: f64, r: f64, delta: f64, tol: f64) -> Result<SweepRecord> {
    let spec = AmplitudeSpec::builtin(kind)?;
    let point = EvalPoint::new(x, theta_over_pi * PI, delta)?;
    let z = point.z();
    let expansion = watson_sum_with_delta(&spec, z, r, delta)?;
    let oracle = reference_value(&spec, z, tol)?.value;
    let abs_r = (oracle - expansion.value).norm();
    let log_r = abs_r.log10();
    let sing = spec
        .singularities
        .first()
        .map(|s| log_r + x * s.rho * (point.theta + s.phi).cos() / LN_10);
    Ok(SweepRecord {
        spec: String::new(),
        x,
        theta_over_pi,
        n_star: Some(expansion.n_star),
        partial_re: Some(expansion.value.re),
        partial_im: Some(expansion.value.im),
        oracle_re: Some(oracle.re),
        oracle_im: Some(oracle.im),
        abs_remainder: Some(abs_r),
        log10_abs_remainder: Some(log_r),
        envelope_alg: Some(expansion.envelope_alg),
        envelope_sing: Some(expansion.envelope_sing),
        log10_scaled_remainder_alg: Some(log_r + r * x / LN_10),
        log10_scaled_remainder_sing: sing,
        error: None,
    })
}

fn e1_point(x: f64) -> Result<SweepRecord> {
    let n = e1_optimal_index(x);
    let e = e1_expansion(x, n)?;
    let estimate = superasymptotic_estimate(x)?;
    let abs_r = e.remainder.abs();
    Ok(SweepRecord {
        spec: String::new(),
        x,
        theta_over_pi: 0.0,
        n_star: Some(n),
        partial_re: Some(e.partial_sum),
        partial_im: Some(0.0),
        oracle_re: Some(e.partial_sum + e.remainder),
        oracle_im: Some(0.0),
        abs_remainder: Some(abs_r),
        log10_abs_remainder: Some(abs_r.log10()),
        envelope_alg: Some(estimate),
        envelope_sing: Some(0.0),
        log10_scaled_remainder_alg: Some((abs_r / estimate).log10()),
        log10_scaled_remainder_sing: None,
        error: None,
    })
}

/// Runs a validated sweep on `jobs` worker threads (`None`: rayon's default).
pub fn run_sweep(config: &SweepConfig, jobs: Option<usize>) -> Result<Vec<SweepRecord>> {
    config.validate()?;
    let points = config.points();
    let eval = |&(t, x, th): &(Target, f64, f64)| evaluate_point(t, x, th, config.r, config.delta, config.tol);
    match jobs {
        Some(0) => Err(invalid("jobs", "must be at least 1")),
        Some(1) => Ok(points.iter().map(eval).collect()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| invalid("jobs", e.to_string()))?;
            Ok(pool.install(|| points.par_iter().map(eval).collect()))
        }
        None => Ok(points.par_iter().map(eval).collect()),
    }
}

/// 17 significant digits, so that parsing restores the exact double.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt<T>(v: &Option<T>, f: impl Fn(&T) -> String) -> String {
    v.as_ref().map(f).unwrap_or_default()
}

pub fn write_csv<W: Write>(records: &[SweepRecord], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(COLUMNS)?;
    for rec in records {
        let num = |v: &Option<f64>| opt(v, |x| format_float(*x));
        w.write_record([
            rec.spec.clone(),
            format_float(rec.x),
            format_float(rec.theta_over_pi),
            opt(&rec.n_star, |n| n.to_string()),
            num(&rec.partial_re),
            num(&rec.partial_im),
            num(&rec.oracle_re),
            num(&rec.oracle_im),
            num(&rec.abs_remainder),
            num(&rec.log10_abs_remainder),
            num(&rec.envelope_alg),
            num(&rec.envelope_sing),
            num(&rec.log10_scaled_remainder_alg),
            num(&rec.log10_scaled_remainder_sing),
            rec.error.clone().unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<SweepRecord>> {
    let mut rd = csv::Reader::from_reader(input);
    let header = rd.headers()?.clone();
    if header.iter().ne(COLUMNS) {
        return Err(Error::Format {
            line: 1,
            detail: format!("unexpected header {:?}", header.iter().collect::<Vec<_>>()),
        });
    }
    let mut out = Vec::new();
    for row in rd.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line());
        let bad = |col: &str, v: &str| Error::Format {
            line,
            detail: format!("column {col}: cannot parse {v:?}"),
        };
        let num = |k: usize| -> Result<Option<f64>> {
            match &row[k] {
                "" => Ok(None),
                v => v.parse().map(Some).map_err(|_| bad(COLUMNS[k], v)),
            }
        };
        let req = |k: usize| -> Result<f64> { num(k)?.ok_or_else(|| bad(COLUMNS[k], "")) };
        out.push(SweepRecord {
            spec: row[0].to_string(),
            x: req(1)?,
            theta_over_pi: req(2)?,
            n_star: match &row[3] {
                "" => None,
                v => Some(v.parse().map_err(|_| bad(COLUMNS[3], v))?),
            },
            partial_re: num(4)?,
            partial_im: num(5)?,
            oracle_re: num(6)?,
            oracle_im: num(7)?,
            abs_remainder: num(8)?,
            log10_abs_remainder: num(9)?,
            envelope_alg: num(10)?,
            envelope_sing: num(11)?,
            log10_scaled_remainder_alg: num(12)?,
            log10_scaled_remainder_sing: num(13)?,
            error: match &row[14] {
                "" => None,
                v => Some(v.to_string()),
            },
        });
    }
    Ok(out)
}
