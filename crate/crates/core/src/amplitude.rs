//! Amplitude functions `f(t)` of Laplace integrals `∫₀^∞ e^{-zt} f(t) dt`.
//!
//! An amplitude is described by its small-`t` expansion
//! `f(t) = Σ cₙ t^{(n+β)/μ - 1}` (convergent for `|t| < R`), a closed form used
//! by the quadrature oracle, growth constants `|f(t)| ≤ A e^{σ|t|}` and the
//! singularities that the expansion's error term has to account for.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{domain, invalid, Error, Result};

/// Default angular margin δ of the sector `|arg z| ≤ π/2 - δ`.
pub const DEFAULT_DELTA: f64 = 0.02 * PI;

/// Relative exclusion radius around singular points of the closed forms.
pub const SINGULARITY_EPS: f64 = 1e-8;

/// Rising factorial (a)ₙ = a (a+1) ⋯ (a+n-1).
pub fn pochhammer(a: Complex64, n: u32) -> Complex64 {
    (0..n).fold(Complex64::new(1.0, 0.0), |acc, k| acc * (a + k as f64))
}

/// Local behaviour of an amplitude at a singular point `t₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SingularityKind {
    /// `f(t) ~ residue / (t - t₀)`.
    SimplePole { residue: Complex64 },
    /// `f(t₀ + u) ~ strength · (-u / t₀)^{-1/2}` (principal root).
    SqrtBranch { strength: Complex64 },
}

/// A singular point `t₀ = ρ e^{iφ}` off the positive real axis.
///
/// `φ < 0` is the fourth-quadrant case, crossed by the rotated path once
/// `arg z` exceeds `-φ`; `φ > 0` is its mirror image.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Singularity {
    pub rho: f64,
    pub phi: f64,
    pub kind: SingularityKind,
}

impl Singularity {
    pub fn location(&self) -> Complex64 {
        Complex64::from_polar(self.rho, self.phi)
    }
}

/// The closed-form amplitudes shipped with the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BuiltinAmplitude {
    /// `t^{a-1} (1+t)^{-b}`, so that `I(z) = Γ(a) U(a, a-b+1, z)`.
    ConfluentU { a: Complex64, b: Complex64 },
    /// `(1+t²)^{-1/2}`, so that `I(z) = (π/2) K₀(z)` with K₀ the Struve function.
    StruveK0,
    /// `1 / (e^{-iψ} - t)`: simple pole at `e^{-iψ}`.
    Pole { psi: f64 },
    /// `(1 - t e^{iψ})^{-1/2}`: square-root branch point at `e^{-iψ}`.
    SqrtBranch { psi: f64 },
    /// `f(t) = 1`: the expansion terminates after one term.
    Constant,
}

impl fmt::Display for BuiltinAmplitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuiltinAmplitude::ConfluentU { a, b } if a.im == 0.0 && b.im == 0.0 => write!(f, "u:{},{}", a.re, b.re),
            BuiltinAmplitude::ConfluentU { a, b } => write!(f, "u:{}{:+}i,{}{:+}i", a.re, a.im, b.re, b.im),
            BuiltinAmplitude::StruveK0 => write!(f, "struve"),
            BuiltinAmplitude::Pole { psi } => write!(f, "pole:{}", in_pi_units(*psi)),
            BuiltinAmplitude::SqrtBranch { psi } => write!(f, "sqrt:{}", in_pi_units(*psi)),
            BuiltinAmplitude::Constant => write!(f, "constant"),
        }
    }
}

fn in_pi_units(angle: f64) -> f64 {
    (angle / PI * 1e12).round() / 1e12
}

fn parse_complex(text: &str) -> Option<Complex64> {
    let t = text.trim();
    if let Ok(re) = t.parse::<f64>() {
        return Some(Complex64::new(re, 0.0));
    }
    let body = t.strip_suffix('i')?;
    // split at the last sign that is not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => {
            let re = body[..k].parse::<f64>().ok()?;
            let im = match &body[k..] {
                "+" => 1.0,
                "-" => -1.0,
                s => s.parse::<f64>().ok()?,
            };
            Some(Complex64::new(re, im))
        }
        None => {
            let im = match body {
                "" | "+" => 1.0,
                "-" => -1.0,
                s => s.parse::<f64>().ok()?,
            };
            Some(Complex64::new(0.0, im))
        }
    }
}

/// Parses the names printed by `Display`: `u:a,b` (complex parameters as
/// `1.5`, `0.3+2i`), `struve`, `pole:ψ/π`, `sqrt:ψ/π`, `constant`.
impl FromStr for BuiltinAmplitude {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |detail: &str| invalid("spec", format!("{detail} in {s:?}"));
        let (name, args) = match s.split_once(':') {
            Some((n, a)) => (n.trim(), Some(a.trim())),
            None => (s, None),
        };
        let angle = |args: Option<&str>| -> Result<f64> {
            let a = args.ok_or_else(|| bad("missing angle ψ/π"))?;
            let v: f64 = a.parse().map_err(|_| bad("angle is not a number"))?;
            Ok(v * PI)
        };
        match name.to_ascii_lowercase().as_str() {
            "u" => {
                let a = args.ok_or_else(|| bad("missing parameters a,b"))?;
                let (pa, pb) = a.split_once(',').ok_or_else(|| bad("expected two parameters a,b"))?;
                let a = parse_complex(pa).ok_or_else(|| bad("parameter a is not a number"))?;
                let b = parse_complex(pb).ok_or_else(|| bad("parameter b is not a number"))?;
                Ok(BuiltinAmplitude::ConfluentU { a, b })
            }
            "struve" if args.is_none() => Ok(BuiltinAmplitude::StruveK0),
            "constant" if args.is_none() => Ok(BuiltinAmplitude::Constant),
            "pole" => Ok(BuiltinAmplitude::Pole { psi: angle(args)? }),
            "sqrt" => Ok(BuiltinAmplitude::SqrtBranch { psi: angle(args)? }),
            _ => Err(bad("unknown amplitude")),
        }
    }
}

/// Full description of an amplitude function.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeSpec {
    pub mu: f64,
    pub beta: Complex64,
    /// Radius of convergence of the small-`t` expansion.
    pub radius: f64,
    pub growth_a: f64,
    pub growth_sigma: f64,
    pub sector_alpha1: f64,
    pub sector_alpha2: f64,
    pub singularities: Vec<Singularity>,
    kind: BuiltinAmplitude,
    scale: Complex64,
}

fn check_psi(psi: f64) -> Result<()> {
    if psi > 0.0 && psi < 0.5 * PI {
        Ok(())
    } else {
        Err(invalid("psi", format!("must satisfy 0 < psi < pi/2, got {psi}")))
    }
}

impl AmplitudeSpec {
    pub fn builtin(kind: BuiltinAmplitude) -> Result<Self> {
        let one = Complex64::new(1.0, 0.0);
        let spec = match kind {
            BuiltinAmplitude::ConfluentU { a, b } => {
                if !(a.re > 0.0) {
                    return Err(invalid("a", format!("needs Re(a) > 0, got {a}")));
                }
                let (growth_a, growth_sigma) = if b.re >= 0.0 {
                    ((0.5 * PI * b.im.abs()).exp(), 0.0)
                } else {
                    ((0.5 * PI * b.im.abs()).exp(), -b.re)
                };
                AmplitudeSpec {
                    mu: 1.0,
                    beta: a,
                    radius: 1.0,
                    growth_a,
                    growth_sigma,
                    sector_alpha1: PI,
                    sector_alpha2: PI,
                    // t = -1 lies outside the right half-plane.
                    singularities: Vec::new(),
                    kind,
                    scale: one,
                }
            }
            BuiltinAmplitude::StruveK0 => AmplitudeSpec {
                mu: 0.5,
                beta: Complex64::new(0.5, 0.0),
                radius: 1.0,
                growth_a: 1.0 / (2.0 * DEFAULT_DELTA).sin().sqrt(),
                growth_sigma: 0.0,
                sector_alpha1: 0.5 * PI,
                sector_alpha2: 0.5 * PI,
                // t = ±i sit on the boundary of the sector.
                singularities: Vec::new(),
                kind,
                scale: one,
            },
            BuiltinAmplitude::Pole { psi } => {
                check_psi(psi)?;
                AmplitudeSpec {
                    mu: 1.0,
                    beta: one,
                    radius: 1.0,
                    growth_a: 1.0 / DEFAULT_DELTA.sin(),
                    growth_sigma: 0.0,
                    sector_alpha1: PI,
                    sector_alpha2: PI,
                    singularities: vec![Singularity {
                        rho: 1.0,
                        phi: -psi,
                        kind: SingularityKind::SimplePole { residue: -one },
                    }],
                    kind,
                    scale: one,
                }
            }
            BuiltinAmplitude::SqrtBranch { psi } => {
                check_psi(psi)?;
                AmplitudeSpec {
                    mu: 1.0,
                    beta: one,
                    radius: 1.0,
                    growth_a: 1.0 / DEFAULT_DELTA.sin().sqrt(),
                    growth_sigma: 0.0,
                    sector_alpha1: PI,
                    sector_alpha2: PI,
                    singularities: vec![Singularity {
                        rho: 1.0,
                        phi: -psi,
                        kind: SingularityKind::SqrtBranch { strength: one },
                    }],
                    kind,
                    scale: one,
                }
            }
            BuiltinAmplitude::Constant => AmplitudeSpec {
                mu: 1.0,
                beta: one,
                radius: f64::INFINITY,
                growth_a: 1.0,
                growth_sigma: 0.0,
                sector_alpha1: PI,
                sector_alpha2: PI,
                singularities: Vec::new(),
                kind,
                scale: one,
            },
        };
        Ok(spec)
    }

    pub fn kind(&self) -> BuiltinAmplitude {
        self.kind
    }

    /// The same amplitude multiplied by a complex constant.
    pub fn scaled(&self, factor: Complex64) -> Self {
        let mut out = self.clone();
        out.scale *= factor;
        out.growth_a *= factor.norm();
        for s in &mut out.singularities {
            s.kind = match s.kind {
                SingularityKind::SimplePole { residue } => SingularityKind::SimplePole { residue: residue * factor },
                SingularityKind::SqrtBranch { strength } => SingularityKind::SqrtBranch { strength: strength * factor },
            };
        }
        out
    }

    /// Exponent `(n+β)/μ` of the n-th Watson term.
    pub fn exponent(&self, n: usize) -> Complex64 {
        (self.beta + n as f64) / self.mu
    }

    /// Power of `t` at the origin: `f(t) ~ t^{β/μ - 1}`.
    pub fn origin_power(&self) -> Complex64 {
        self.beta / self.mu - 1.0
    }

    /// Factor turning `I(z)` into the classical function the builtin is
    /// named after (`1/Γ(a)` for the confluent U case, 1 otherwise).
    pub fn named_function_factor(&self) -> Result<Complex64> {
        match self.kind {
            BuiltinAmplitude::ConfluentU { a, .. } => Ok(1.0 / crate::incgamma::gamma_complete(a)?),
            _ => Ok(Complex64::new(1.0, 0.0)),
        }
    }

    /// Coefficient `cₙ`.
    pub fn coefficient(&self, n: usize) -> Complex64 {
        self.coefficients(n + 1)[n]
    }

    /// The first `count` coefficients `c₀ … c_{count-1}`.
    pub fn coefficients(&self, count: usize) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(count);
        let mut c = self.scale;
        match self.kind {
            BuiltinAmplitude::ConfluentU { b, .. } => {
                for n in 0..count {
                    out.push(c);
                    c *= -(b + n as f64) / (n as f64 + 1.0);
                }
            }
            BuiltinAmplitude::StruveK0 => {
                for n in 0..count {
                    out.push(c);
                    c *= -(n as f64 + 0.5) / (n as f64 + 1.0);
                }
            }
            BuiltinAmplitude::Pole { psi } => {
                let w = Complex64::from_polar(1.0, psi);
                c *= w;
                for _ in 0..count {
                    out.push(c);
                    c *= w;
                }
            }
            BuiltinAmplitude::SqrtBranch { psi } => {
                let w = Complex64::from_polar(1.0, psi);
                for n in 0..count {
                    out.push(c);
                    c *= w * (n as f64 + 0.5) / (n as f64 + 1.0);
                }
            }
            BuiltinAmplitude::Constant => {
                out.extend((0..count).map(|n| if n == 0 { c } else { Complex64::new(0.0, 0.0) }));
            }
        }
        out
    }

    /// Points where the closed form is singular, including those the
    /// singularity list omits because they lie outside the tracked sector.
    fn singular_points(&self) -> Vec<Complex64> {
        let mut pts: Vec<Complex64> = self.singularities.iter().map(Singularity::location).collect();
        match self.kind {
            BuiltinAmplitude::ConfluentU { .. } => pts.push(Complex64::new(-1.0, 0.0)),
            BuiltinAmplitude::StruveK0 => {
                pts.push(Complex64::new(0.0, 1.0));
                pts.push(Complex64::new(0.0, -1.0));
            }
            _ => {}
        }
        pts
    }

    fn check_point(&self, t: Complex64) -> Result<()> {
        if !(t.re.is_finite() && t.im.is_finite()) {
            return Err(domain("evaluate_amplitude", format!("non-finite point {t}")));
        }
        let arg = t.arg();
        if t.norm() > 0.0 && (arg < -self.sector_alpha1 || arg > self.sector_alpha2) {
            return Err(domain("evaluate_amplitude", format!("t = {t} is outside the sector")));
        }
        for p in self.singular_points() {
            let min = SINGULARITY_EPS * p.norm();
            let distance = (t - p).norm();
            if distance < min {
                return Err(Error::NearSingularity { distance, min });
            }
        }
        if t.norm() == 0.0 && self.origin_power().re < 0.0 {
            return Err(Error::NearSingularity { distance: 0.0, min: 0.0 });
        }
        Ok(())
    }

    /// `f(t) t^{1 - β/μ}`: the part of the amplitude that is analytic at the
    /// origin. Equal to `f` whenever `β = μ`.
    pub fn regular_part(&self, t: Complex64) -> Result<Complex64> {
        self.check_point(t)?;
        Ok(self.scale * self.regular_unchecked(t))
    }

    fn regular_unchecked(&self, t: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        match self.kind {
            BuiltinAmplitude::ConfluentU { b, .. } => (one + t).powc(-b),
            BuiltinAmplitude::StruveK0 => 1.0 / (one + t * t).sqrt(),
            BuiltinAmplitude::Pole { psi } => 1.0 / (Complex64::from_polar(1.0, -psi) - t),
            BuiltinAmplitude::SqrtBranch { psi } => 1.0 / (one - t * Complex64::from_polar(1.0, psi)).sqrt(),
            BuiltinAmplitude::Constant => one,
        }
    }

    /// Closed-form `f(t)` on principal branches.
    pub fn evaluate(&self, t: Complex64) -> Result<Complex64> {
        self.check_point(t)?;
        let h = self.scale * self.regular_unchecked(t);
        let s = self.origin_power();
        if s == Complex64::new(0.0, 0.0) {
            Ok(h)
        } else {
            Ok(h * t.powc(s))
        }
    }
}

/// Convenience wrapper for [`AmplitudeSpec::evaluate`].
pub fn evaluate_amplitude(spec: &AmplitudeSpec, t: Complex64) -> Result<Complex64> {
    spec.evaluate(t)
}

/// Convenience wrapper for [`AmplitudeSpec::builtin`].
pub fn builtin_spec(kind: BuiltinAmplitude) -> Result<AmplitudeSpec> {
    AmplitudeSpec::builtin(kind)
}
