//! Optimally truncated Watson expansions.
//!
//! For `I(z) = ∫₀^∞ e^{-zt} f(t) dt` with `f(t) = Σ cₙ t^{(n+β)/μ-1}` on
//! `|t| < R`, truncating the Watson series
//!
//! ```text
//! I(z) ≈ Σ_{n ≤ n*} cₙ Γ((n+β)/μ) z^{-(n+β)/μ},   n* = ⌊μ r |z| + μ - Re β⌋
//! ```
//!
//! for a fixed `0 < r < R` leaves a remainder of order `e^{-r|z|}` in
//! `|arg z| ≤ π/2 - δ`. A singularity `t₀ = ρ e^{-iψ}` of `f` with `0 < ψ < π/2`
//! adds a term of order `e^{-|z| ρ cos(θ-ψ)}` once `θ = arg z` passes `ψ`.
//!
//! The module also provides the convergent rewrite
//! `I(z) = Σₙ cₙ γ((n+β)/μ, r|z|) z^{-(n+β)/μ} + J` used to check the
//! expansion against an independent reconstruction.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::amplitude::{AmplitudeSpec, Singularity, SingularityKind, DEFAULT_DELTA};
use crate::error::{invalid, Error, Result};
use crate::incgamma::{ln_gamma, ln_gamma_lower, ln_gamma_upper};
use crate::quadrature::Integrator;
use crate::sum::CompensatedSum;

/// A point `z = x e^{iθ}` of the sector `|θ| ≤ π/2 - δ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalPoint {
    pub x: f64,
    pub theta: f64,
    pub delta: f64,
}

impl EvalPoint {
    pub fn new(x: f64, theta: f64, delta: f64) -> Result<Self> {
        if !(x > 0.0 && x.is_finite()) {
            return Err(invalid("x", format!("must be positive, got {x}")));
        }
        if !(delta > 0.0) {
            return Err(invalid("delta", format!("must be positive, got {delta}")));
        }
        if theta.abs() + delta > 0.5 * PI + 1e-12 {
            return Err(Error::OutsideSector { theta });
        }
        Ok(EvalPoint { x, theta, delta })
    }

    pub fn z(&self) -> Complex64 {
        Complex64::from_polar(self.x, self.theta)
    }
}

/// Result of an optimally truncated Watson sum.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedExpansion {
    pub n_star: usize,
    pub value: Complex64,
    pub terms: Vec<Complex64>,
    /// `e^{-r|z|}`
    pub envelope_alg: f64,
    /// Sum of the moduli of the singularity contributions switched on at `arg z`.
    pub envelope_sing: f64,
}

/// `n* = ⌊μ r x + μ - Re β⌋`, clamped at zero.
pub fn truncation_index(mu: f64, beta: Complex64, r: f64, x: f64) -> usize {
    let raw = (mu * r * x + mu - beta.re).floor();
    if raw > 0.0 {
        raw as usize
    } else {
        0
    }
}

fn check_inputs(spec: &AmplitudeSpec, z: Complex64, r: f64) -> Result<()> {
    let theta = z.arg();
    if !(z.norm() > 0.0) || theta.abs() >= 0.5 * PI {
        return Err(Error::OutsideSector { theta });
    }
    if !(r > 0.0 && r < spec.radius) {
        return Err(invalid("r", format!("needs 0 < r < R = {}, got {r}", spec.radius)));
    }
    Ok(())
}

/// `ln z` on the principal branch, as `ln|z| + i arg z`.
fn ln_z(z: Complex64) -> Complex64 {
    Complex64::new(z.norm().ln(), z.arg())
}

/// The first `count` terms `cₙ Γ((n+β)/μ) z^{-(n+β)/μ}` of the full Watson
/// series, formed in log space.
pub fn series_terms(spec: &AmplitudeSpec, z: Complex64, count: usize) -> Result<Vec<Complex64>> {
    let lz = ln_z(z);
    spec.coefficients(count)
        .into_iter()
        .enumerate()
        .map(|(n, c)| {
            if c == Complex64::new(0.0, 0.0) {
                return Ok(c);
            }
            let a = spec.exponent(n);
            Ok(c * (ln_gamma(a)? - a * lz).exp())
        })
        .collect()
}

/// Truncated Watson sum at the optimal index, with the default margin δ
/// for the singularity switch.
pub fn watson_sum(spec: &AmplitudeSpec, z: Complex64, r: f64) -> Result<TruncatedExpansion> {
    watson_sum_with_delta(spec, z, r, DEFAULT_DELTA)
}

pub fn watson_sum_with_delta(spec: &AmplitudeSpec, z: Complex64, r: f64, delta: f64) -> Result<TruncatedExpansion> {
    check_inputs(spec, z, r)?;
    let n_star = truncation_index(spec.mu, spec.beta, r, z.norm());
    let terms = series_terms(spec, z, n_star + 1)?;
    let value = terms.iter().copied().collect::<CompensatedSum>().value();
    let (envelope_alg, envelope_sing) = remainder_envelope(spec, z, r, delta)?;
    Ok(TruncatedExpansion {
        n_star,
        value,
        terms,
        envelope_alg,
        envelope_sing,
    })
}

/// `Σ_{n<n_terms} cₙ γ((n+β)/μ, r|z|) z^{-(n+β)/μ}`.
///
/// Summation stops early once `|cₙ| μ r^{(n+Re β)/μ} / (n + Re β)`, a bound on
/// the modulus of the n-th term, drops below `1e-16` of the partial sum.
pub fn hadamard_sum(spec: &AmplitudeSpec, z: Complex64, r: f64, n_terms: usize) -> Result<Complex64> {
    check_inputs(spec, z, r)?;
    let x = z.norm();
    let lz = ln_z(z);
    let mut acc = CompensatedSum::new();
    for (n, c) in spec.coefficients(n_terms).into_iter().enumerate() {
        let re_exp = (n as f64 + spec.beta.re) / spec.mu;
        let bound = c.norm() * spec.mu * r.powf(re_exp) / (n as f64 + spec.beta.re);
        if bound.is_finite() && bound < 1e-16 * acc.value().norm() {
            break;
        }
        if c == Complex64::new(0.0, 0.0) {
            continue;
        }
        let a = spec.exponent(n);
        acc.add(c * (ln_gamma_lower(a, r * x)?.0 - a * lz).exp());
    }
    Ok(acc.value())
}

/// `Σ_{n≤n*} cₙ Γ((n+β)/μ, r|z|) z^{-(n+β)/μ}`: the part of the Watson sum that
/// the convergent rewrite does not contain.
pub fn upper_head_sum(spec: &AmplitudeSpec, z: Complex64, r: f64) -> Result<Complex64> {
    check_inputs(spec, z, r)?;
    let x = z.norm();
    let lz = ln_z(z);
    let n_star = truncation_index(spec.mu, spec.beta, r, x);
    let mut acc = CompensatedSum::new();
    for (n, c) in spec.coefficients(n_star + 1).into_iter().enumerate() {
        if c == Complex64::new(0.0, 0.0) {
            continue;
        }
        let a = spec.exponent(n);
        acc.add(c * (ln_gamma_upper(a, r * x)?.0 - a * lz).exp());
    }
    Ok(acc.value())
}

/// Which contour the tail integral was evaluated on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailPath {
    /// The ray `t = τ e^{-iθ}`, `τ ≥ r`.
    Ray,
    /// The horizontal line from `r e^{-iθ}` to `r e^{-iθ} + ∞`, used when
    /// the ray runs into a singularity.
    Displaced,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailIntegral {
    pub value: Complex64,
    pub abs_error_estimate: f64,
    pub path: TailPath,
}

/// Rays closer than this (relative to ρ) to a singular point are replaced by
/// the displaced path.
const DISPLACE_EPS: f64 = 1e-3;

/// Smallest `T ≥ start` with `ln_prefactor + power ln T - rate T ≤ ln_target`.
pub(crate) fn decay_cutoff(start: f64, rate: f64, ln_prefactor: f64, power: f64, ln_target: f64) -> f64 {
    let g = |t: f64| ln_prefactor + power * t.max(1e-300).ln() - rate * t;
    let mut t = start.max(1.0) + (ln_prefactor - ln_target).max(0.0) / rate;
    while g(t) > ln_target {
        t *= 1.5;
    }
    t
}

/// Tail integral `J = ∫_{r e^{-iθ}}^{∞ e^{-iθ}} e^{-zt} f(t) dt` along the
/// rotated ray, or along the displaced path when the ray meets a singularity.
pub fn tail_integral_j(spec: &AmplitudeSpec, z: Complex64, r: f64) -> Result<TailIntegral> {
    check_inputs(spec, z, r)?;
    let x = z.norm();
    let theta = z.arg();
    let s = spec.origin_power();
    let blocked = spec
        .singularities
        .iter()
        .any(|sg| (sg.phi + theta).abs() < 0.5 * PI && sg.rho * (sg.phi + theta).sin().abs() < DISPLACE_EPS * sg.rho);
    let path = if blocked { TailPath::Displaced } else { TailPath::Ray };
    let integrator = Integrator::new(0.0, 1e-12);
    let dir = Complex64::from_polar(1.0, -theta);
    let start = dir * r;
    let ln_growth = spec.growth_a.max(1.0).ln() + 0.5 * PI * s.im.abs();
    // Cut off where the integrand bound is 1e-16 of its value at the start.
    let ln_target = -r * x - 37.0;
    let point = |t: Complex64| -> Complex64 {
        match spec.evaluate(t) {
            Ok(f) => (-z * t).exp() * f,
            Err(_) => Complex64::new(0.0, 0.0),
        }
    };
    let result = match path {
        TailPath::Ray => {
            let decay = x - spec.growth_sigma;
            if !(decay > 0.0) {
                return Err(invalid("z", "|z| must exceed the growth rate sigma"));
            }
            let end = decay_cutoff(r, decay, ln_growth, s.re.max(0.0), ln_target);
            let mut breaks = vec![r, end];
            for sg in &spec.singularities {
                let along = sg.rho * (sg.phi + theta).cos();
                if along > r && along < end {
                    breaks.push(along);
                }
            }
            breaks.sort_by(f64::total_cmp);
            integrator.integrate_pieces(|tau| point(dir * tau) * dir, &breaks)?
        }
        TailPath::Displaced => {
            let decay = x * theta.cos() - spec.growth_sigma;
            if !(decay > 0.0) {
                return Err(invalid("z", "Re(z) must exceed the growth rate sigma"));
            }
            let end = decay_cutoff(0.0, decay, ln_growth - r * x + spec.growth_sigma * r, s.re.max(0.0), ln_target);
            let mut breaks = vec![0.0, end];
            for sg in &spec.singularities {
                let along = (sg.location() - start).re;
                if along > 0.0 && along < end {
                    breaks.push(along);
                }
            }
            breaks.sort_by(f64::total_cmp);
            integrator.integrate_pieces(|u| point(start + u), &breaks)?
        }
    };
    Ok(TailIntegral {
        value: result.value,
        abs_error_estimate: result.abs_error_estimate,
        path,
    })
}

/// Switch of the singularity term in the remainder, for a singular point at
/// angle `-ψ`: 0 for `θ ≤ ψ`, 1 for `θ > ψ` (on the band `ψ < θ < ψ + δ`
/// the switch is taken as already on).
///
/// The margin only shapes the proven statement; the returned value does not
/// depend on it.
pub fn upsilon(theta: f64, psi: f64, _delta: f64) -> u8 {
    if theta <= psi {
        0
    } else {
        1
    }
}

fn upsilon_for(sing: &Singularity, theta: f64, delta: f64) -> u8 {
    if sing.phi < 0.0 {
        upsilon(theta, -sing.phi, delta)
    } else {
        upsilon(-theta, sing.phi, delta)
    }
}

/// Contribution picked up when the integration path is rotated across `sing`.
///
/// A pole with residue ρ₀ gives `∓2πi ρ₀ e^{-z t₀}` and a square-root branch
/// point of strength k gives `∓2i k e^{-z t₀} √(π t₀ / z)`, the upper sign for
/// the fourth-quadrant case. For the builtin pole `1/(e^{-iψ} - t)` this is
/// `2πi e^{-z e^{-iψ}}`.
pub fn singularity_contribution(sing: &Singularity, z: Complex64) -> Complex64 {
    let t0 = sing.location();
    let orientation = if sing.phi < 0.0 { 1.0 } else { -1.0 };
    let e = (-z * t0).exp();
    match sing.kind {
        SingularityKind::SimplePole { residue } => Complex64::new(0.0, -2.0 * PI * orientation) * residue * e,
        SingularityKind::SqrtBranch { strength } => {
            Complex64::new(0.0, 2.0 * orientation) * strength * e * (PI * t0 / z).sqrt()
        }
    }
}

/// Sum of the contributions of every singularity strictly crossed when the
/// path of integration is rotated from the positive real axis to `arg t = -arg z`.
pub fn crossed_contribution(spec: &AmplitudeSpec, z: Complex64) -> Complex64 {
    let theta = z.arg();
    spec.singularities
        .iter()
        .filter(|s| (s.phi < 0.0 && theta > -s.phi) || (s.phi > 0.0 && -theta > s.phi))
        .map(|s| singularity_contribution(s, z))
        .sum()
}

/// Angle `ψ + arccos(r/ρ)` past which the singularity term outweighs `e^{-r|z|}`.
pub fn significance_threshold(r: f64, rho: f64, psi: f64) -> Result<f64> {
    if !(r > 0.0 && r < rho) {
        return Err(invalid("r", format!("threshold needs 0 < r < rho, got r = {r}, rho = {rho}")));
    }
    Ok(psi + (r / rho).acos())
}

/// The two envelope scales `(e^{-r|z|}, Σ Υ |singularity contribution|)`.
pub fn remainder_envelope(spec: &AmplitudeSpec, z: Complex64, r: f64, delta: f64) -> Result<(f64, f64)> {
    check_inputs(spec, z, r)?;
    let theta = z.arg();
    let alg = (-r * z.norm()).exp();
    let sing = spec
        .singularities
        .iter()
        .filter(|s| upsilon_for(s, theta, delta) == 1)
        .map(|s| singularity_contribution(s, z).norm())
        .fold(0.0, |acc, m| acc + m);
    Ok((alg, sing))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amplitude::{pochhammer, BuiltinAmplitude};
    use crate::incgamma::gamma_complete;
    use crate::oracle::{reference_value, DEFAULT_TOL};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn spec(kind: BuiltinAmplitude) -> AmplitudeSpec {
        AmplitudeSpec::builtin(kind).unwrap()
    }

    fn close(a: Complex64, b: Complex64, rel: f64) -> bool {
        (a - b).norm() <= rel * b.norm().max(1e-300)
    }

    #[test]
    fn truncation_indices() {
        assert_eq!(truncation_index(1.0, c(1.0, 0.0), 0.8, 20.0), 16);
        assert_eq!(truncation_index(0.5, c(0.5, 0.0), 0.8, 10.0), 4);
        assert_eq!(truncation_index(1.0, c(0.5, 0.0), 0.8, 20.0), 16);
        assert_eq!(truncation_index(1.0, c(3.0, 0.0), 0.8, 1.0), 0);
    }

    #[test]
    fn constant_amplitude_sums_to_one_over_z() {
        let s = spec(BuiltinAmplitude::Constant);
        for z in [c(3.0, 0.0), c(5.0, 4.0), c(0.7, -2.0)] {
            let e = watson_sum(&s, z, 0.8).unwrap();
            assert!(close(e.value, 1.0 / z, 1e-15), "{z}: {}", e.value);
        }
    }

    #[test]
    fn confluent_u_matches_explicit_series() {
        let s = spec(BuiltinAmplitude::ConfluentU { a: c(0.5, 0.0), b: c(0.75, 0.0) });
        let z = c(10.0, 0.0);
        let e = watson_sum(&s, z, 0.8).unwrap();
        assert_eq!(e.n_star, 8);
        let g = gamma_complete(c(0.5, 0.0)).unwrap();
        let mut expected = c(0.0, 0.0);
        for n in 0..=8u32 {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let fact: f64 = (1..=n).map(f64::from).product();
            let term = sign * pochhammer(c(0.5, 0.0), n) * pochhammer(c(0.75, 0.0), n) / (fact * 10f64.powi(n as i32));
            expected += term;
            assert!(close(e.terms[n as usize], term * g / z.sqrt(), 1e-13), "term {n}");
        }
        assert!(close(e.value, expected * g / z.sqrt(), 1e-14));
    }

    #[test]
    fn struve_matches_explicit_series() {
        let s = spec(BuiltinAmplitude::StruveK0);
        let z = c(10.0, 0.0);
        let e = watson_sum(&s, z, 0.8).unwrap();
        assert_eq!(e.n_star, 4);
        let expected: Complex64 = (0..=4u32)
            .map(|n| {
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                let p = pochhammer(c(0.5, 0.0), n);
                0.5 * sign * p * p / (0.5 * z).powi(2 * n as i32 + 1)
            })
            .sum();
        assert!(close(e.value, expected, 1e-14), "{} vs {expected}", e.value);
    }

    #[test]
    fn value_is_compensated_sum_of_terms() {
        let s = spec(BuiltinAmplitude::Pole { psi: 0.1 * PI });
        let e = watson_sum(&s, Complex64::from_polar(20.0, 0.3 * PI), 0.8).unwrap();
        assert_eq!(e.terms.len(), e.n_star + 1);
        let total: f64 = e.terms.iter().map(|t| t.norm()).sum();
        let naive: Complex64 = e.terms.iter().sum();
        assert!((e.value - naive).norm() < 1e-15 * total);
    }

    #[test]
    fn conjugation_symmetry_for_real_coefficients() {
        for kind in [BuiltinAmplitude::ConfluentU { a: c(0.5, 0.0), b: c(0.75, 0.0) }, BuiltinAmplitude::StruveK0] {
            let s = spec(kind);
            for (x, th) in [(5.0, 0.2), (10.0, 0.37), (20.0, 0.45)] {
                let z = Complex64::from_polar(x, th * PI);
                let up = watson_sum(&s, z, 0.8).unwrap().value;
                let down = watson_sum(&s, z.conj(), 0.8).unwrap().value;
                assert_eq!(up.conj(), down, "{kind} at {z}");
            }
        }
    }

    #[test]
    fn rejects_points_outside_sector_and_large_r() {
        let s = spec(BuiltinAmplitude::StruveK0);
        assert!(matches!(watson_sum(&s, c(-1.0, 1.0), 0.8), Err(Error::OutsideSector { .. })));
        assert!(watson_sum(&s, c(0.0, 3.0), 0.8).is_err());
        assert!(watson_sum(&s, c(10.0, 0.0), 1.0).is_err());
        assert!(EvalPoint::new(10.0, 0.49 * PI, 0.02 * PI).is_err());
        assert!(EvalPoint::new(10.0, 0.48 * PI, 0.02 * PI).is_ok());
        assert!(EvalPoint::new(-1.0, 0.0, 0.02 * PI).is_err());
    }

    #[test]
    fn hadamard_constant_closed_form() {
        let s = spec(BuiltinAmplitude::Constant);
        for z in [c(10.0, 0.0), Complex64::from_polar(7.0, 0.4 * PI)] {
            let h = hadamard_sum(&s, z, 0.8, 50).unwrap();
            let expected = (1.0 - (-0.8 * z.norm()).exp()) / z;
            assert!(close(h, expected, 1e-14), "{h} vs {expected}");
        }
    }

    #[test]
    fn hadamard_tends_to_full_watson_sum() {
        // γ → Γ termwise once r|z| is large.
        let s = spec(BuiltinAmplitude::ConfluentU { a: c(0.5, 0.0), b: c(0.75, 0.0) });
        let z = c(200.0, 0.0);
        let h = hadamard_sum(&s, z, 0.5, 12).unwrap();
        let terms = series_terms(&s, z, 12).unwrap();
        let w: Complex64 = terms.iter().sum();
        assert!(close(h, w, 1e-13), "{h} vs {w}");
    }

    #[test]
    fn tail_of_constant_closed_form() {
        let s = spec(BuiltinAmplitude::Constant);
        let j = tail_integral_j(&s, c(10.0, 0.0), 0.8).unwrap();
        assert_eq!(j.path, TailPath::Ray);
        assert!(close(j.value, c((-8.0f64).exp() / 10.0, 0.0), 1e-12));
    }

    #[test]
    fn pole_reconstruction_with_many_terms() {
        let s = spec(BuiltinAmplitude::Pole { psi: 0.1 * PI });
        let z = c(20.0, 0.0);
        let reference = reference_value(&s, z, DEFAULT_TOL).unwrap().value;
        let j = tail_integral_j(&s, z, 0.8).unwrap();
        let h = hadamard_sum(&s, z, 0.8, 120).unwrap();
        assert!((h - (reference - j.value)).norm() < 1e-10);
    }

    #[test]
    fn displaced_path_on_the_singular_ray() {
        let psi = 0.1 * PI;
        let s = spec(BuiltinAmplitude::Pole { psi });
        let z = Complex64::from_polar(20.0, psi);
        let j = tail_integral_j(&s, z, 0.8).unwrap();
        assert_eq!(j.path, TailPath::Displaced);
        assert!(j.value.norm().is_finite());
        // On the displaced path nothing is crossed, so the rewrite closes.
        let reference = reference_value(&s, z, DEFAULT_TOL).unwrap().value;
        let h = hadamard_sum(&s, z, 0.8, 200).unwrap();
        assert!((h + j.value - reference).norm() < 1e-9 * reference.norm());

        let far = tail_integral_j(&s, Complex64::from_polar(20.0, 0.45 * PI), 0.8).unwrap();
        assert_eq!(far.path, TailPath::Ray);
        assert!(far.value.norm().is_finite());
    }

    #[test]
    fn upsilon_switch() {
        assert_eq!(upsilon(0.0, 0.1 * PI, 0.01 * PI), 0);
        assert_eq!(upsilon(0.45 * PI, 0.1 * PI, 0.01 * PI), 1);
        assert_eq!(upsilon(0.1 * PI, 0.1 * PI, 0.01 * PI), 0);
        assert_eq!(upsilon(0.105 * PI, 0.1 * PI, 0.01 * PI), 1);
        assert_eq!(upsilon(-0.4 * PI, 0.1 * PI, 0.01 * PI), 0);
    }

    #[test]
    fn pole_contribution_is_residue_term() {
        let psi = 0.1 * PI;
        let s = spec(BuiltinAmplitude::Pole { psi });
        let sing = s.singularities[0];
        for (x, th) in [(20.0, 0.45 * PI), (8.0, 0.2), (20.0, psi)] {
            let z = Complex64::from_polar(x, th);
            let got = singularity_contribution(&sing, z);
            let expected = c(0.0, 2.0 * PI) * (-z * Complex64::from_polar(1.0, -psi)).exp();
            assert!(close(got, expected, 1e-14));
            let modulus = 2.0 * PI * (-x * (th - psi).cos()).exp();
            assert!((got.norm() - modulus).abs() <= 1e-13 * modulus);
        }
    }

    #[test]
    fn branch_contribution_modulus() {
        let psi = 0.1 * PI;
        let s = spec(BuiltinAmplitude::SqrtBranch { psi });
        let z = Complex64::from_polar(20.0, 0.45 * PI);
        let got = singularity_contribution(&s.singularities[0], z);
        let t0 = Complex64::from_polar(1.0, -psi);
        let expected = c(0.0, 2.0) * (-z * t0).exp() * (PI / (z * Complex64::from_polar(1.0, psi))).sqrt();
        assert!(close(got, expected, 1e-14));
        let modulus = 2.0 * (PI / 20.0).sqrt() * (-20.0 * (0.35 * PI).cos()).exp();
        assert!((got.norm() - modulus).abs() <= 1e-13 * modulus);
    }

    #[test]
    fn crossed_contribution_only_past_the_singular_angle() {
        let s = spec(BuiltinAmplitude::Pole { psi: 0.1 * PI });
        assert_eq!(crossed_contribution(&s, Complex64::from_polar(20.0, 0.05 * PI)), c(0.0, 0.0));
        assert_eq!(crossed_contribution(&s, Complex64::from_polar(20.0, -0.3 * PI)), c(0.0, 0.0));
        assert!(crossed_contribution(&s, Complex64::from_polar(20.0, 0.3 * PI)).norm() > 0.0);
    }

    #[test]
    fn thresholds() {
        let t = significance_threshold(0.8, 1.0, 0.1 * PI).unwrap();
        assert!((t / PI - 0.305).abs() < 1e-3, "{}", t / PI);
        let t = significance_threshold(0.8, 1.0, 0.4 * PI).unwrap();
        assert!((t / PI - 0.605).abs() < 1e-3 && t > 0.5 * PI);
        let t = significance_threshold(1.0 - 1e-12, 1.0, 0.3).unwrap();
        assert!((t - 0.3).abs() < 1e-5);
        assert!(significance_threshold(1.0, 1.0, 0.3).is_err());
        assert!(significance_threshold(1.2, 1.0, 0.3).is_err());
    }

    #[test]
    fn envelope_examples() {
        let s = spec(BuiltinAmplitude::StruveK0);
        let (alg, sing) = remainder_envelope(&s, c(10.0, 0.0), 0.8, DEFAULT_DELTA).unwrap();
        assert!((alg - (-8.0f64).exp()).abs() < 1e-18 && sing == 0.0);

        let z = Complex64::from_polar(20.0, 0.45 * PI);
        let near = spec(BuiltinAmplitude::Pole { psi: 0.1 * PI });
        let (alg, sing) = remainder_envelope(&near, z, 0.8, DEFAULT_DELTA).unwrap();
        assert!((alg - (-16.0f64).exp()).abs() < 1e-20);
        let expected = 2.0 * PI * (-20.0 * (0.35 * PI).cos()).exp();
        assert!((sing - expected).abs() < 1e-12 * expected);
        assert!(sing > alg);

        let far = spec(BuiltinAmplitude::Pole { psi: 0.4 * PI });
        let (alg, sing) = remainder_envelope(&far, z, 0.8, DEFAULT_DELTA).unwrap();
        assert!(alg > sing && sing > 0.0);
        let (_, sing) = remainder_envelope(&far, Complex64::from_polar(20.0, 0.3 * PI), 0.8, DEFAULT_DELTA).unwrap();
        assert_eq!(sing, 0.0);
    }

    #[test]
    fn split_identity() {
        for kind in [
            BuiltinAmplitude::ConfluentU { a: c(0.5, 0.0), b: c(0.75, 0.0) },
            BuiltinAmplitude::StruveK0,
            BuiltinAmplitude::Pole { psi: 0.1 * PI },
            BuiltinAmplitude::SqrtBranch { psi: 0.4 * PI },
        ] {
            let s = spec(kind);
            for (x, th) in [(5.0, 0.0), (10.0, 0.3 * PI), (20.0, -0.2 * PI)] {
                let z = Complex64::from_polar(x, th);
                let n_star = truncation_index(s.mu, s.beta, 0.8, x);
                let w = watson_sum(&s, z, 0.8).unwrap().value;
                let upper = upper_head_sum(&s, z, 0.8).unwrap();
                let head = hadamard_sum(&s, z, 0.8, n_star + 1).unwrap();
                assert!(close(w - upper, head, 1e-12), "{kind} at {z}");
            }
        }
    }

    #[test]
    fn minimum_term_near_limit_index() {
        for kind in [BuiltinAmplitude::ConfluentU { a: c(0.5, 0.0), b: c(0.75, 0.0) }, BuiltinAmplitude::StruveK0] {
            let s = spec(kind);
            for x in [5.0, 10.0, 20.0] {
                let terms = series_terms(&s, c(x, 0.0), 80).unwrap();
                let argmin = (0..terms.len())
                    .filter(|&n| terms[n].norm() > 0.0)
                    .min_by(|&i, &j| terms[i].norm().total_cmp(&terms[j].norm()))
                    .unwrap();
                let limit = truncation_index(s.mu, s.beta, s.radius * (1.0 - 1e-12), x);
                assert!((argmin as i64 - limit as i64).abs() <= 2, "{kind} x={x}: {argmin} vs {limit}");
            }
        }
    }
}
