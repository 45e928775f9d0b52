//! Reference values of `I(z) = ∫₀^∞ e^{-zt} f(t) dt` by adaptive quadrature
//! along the positive real axis.
//!
//! The contour is never rotated: every builtin singularity lies off the
//! positive real axis, so the reference is independent of the crossing
//! contributions the expansion has to account for.

use num_complex::Complex64;

use crate::amplitude::AmplitudeSpec;
use crate::error::{invalid, Result};
use crate::expansion::{decay_cutoff, watson_sum};
use crate::quadrature::{Integrator, QuadratureResult};

/// Default relative tolerance of the reference quadrature.
pub const DEFAULT_TOL: f64 = 1e-13;

/// Reference value of the Laplace integral at relative tolerance `tol`.
///
/// On `[0, t₁]` the substitution `t = u^{1/p}`, `p = Re β / μ`, absorbs the
/// `t^{β/μ-1}` behaviour at the origin. The range is truncated at `T` with
/// `A e^{-(Re z - σ) T} < 1e-18`, and the analytic bound on the discarded tail
/// is added to the error estimate.
pub fn reference_value(spec: &AmplitudeSpec, z: Complex64, tol: f64) -> Result<QuadratureResult> {
    if !(tol > 0.0) {
        return Err(invalid("tol", format!("must be positive, got {tol}")));
    }
    let decay = z.re - spec.growth_sigma;
    if !(decay > 0.0) {
        return Err(invalid("z", format!("needs Re(z) > sigma = {}, got z = {z}", spec.growth_sigma)));
    }
    let s = spec.origin_power();
    let p = spec.beta.re / spec.mu;
    let ln_growth = spec.growth_a.max(1.0).ln();
    let power = s.re.max(0.0);
    let end = decay_cutoff(1.0, decay, ln_growth, power, (1e-18f64).ln());
    let split = (4.0 / z.norm()).min(1.0);

    let integrator = Integrator::new(1e-300, tol);
    let integrand = |t: f64| -> Complex64 {
        match spec.regular_part(Complex64::new(t, 0.0)) {
            Ok(h) => h * (-z * t).exp(),
            Err(_) => Complex64::new(0.0, 0.0),
        }
    };

    // f(t) dt = (1/p) u^{i Im(β)/Re(β)} h(u^{1/p}) du
    let twist = Complex64::new(0.0, spec.beta.im / spec.beta.re);
    let head = integrator.integrate(
        |u: f64| {
            if u <= 0.0 {
                return if twist == Complex64::new(0.0, 0.0) { integrand(0.0) / p } else { Complex64::new(0.0, 0.0) };
            }
            let t = u.powf(1.0 / p);
            let w = if twist == Complex64::new(0.0, 0.0) { Complex64::new(1.0, 0.0) } else { (twist * u.ln()).exp() };
            integrand(t) * w / p
        },
        0.0,
        split.powf(p),
    )?;

    let sing_power = |t: f64| -> Complex64 {
        if s == Complex64::new(0.0, 0.0) {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(t, 0.0).powc(s)
        }
    };
    let mut breaks = vec![split];
    let mut b = split;
    while b * 4.0 < end {
        b *= 4.0;
        breaks.push(b);
    }
    breaks.push(end);
    let body = integrator.integrate_pieces(|t| integrand(t) * sing_power(t), &breaks)?;

    let tail_bound = (ln_growth + power * end.ln() - decay * end).exp() / decay;
    Ok(QuadratureResult {
        value: head.value + body.value,
        abs_error_estimate: head.abs_error_estimate + body.abs_error_estimate + tail_bound,
        evaluations: head.evaluations + body.evaluations,
    })
}

/// `R_{n*}(z) = I(z) - Σ_{n≤n*} cₙ Γ((n+β)/μ) z^{-(n+β)/μ}` with the reference
/// at the default tolerance.
pub fn measured_remainder(spec: &AmplitudeSpec, z: Complex64, r: f64) -> Result<Complex64> {
    measured_remainder_with_tol(spec, z, r, DEFAULT_TOL)
}

pub fn measured_remainder_with_tol(spec: &AmplitudeSpec, z: Complex64, r: f64, tol: f64) -> Result<Complex64> {
    let expansion = watson_sum(spec, z, r)?;
    let reference = reference_value(spec, z, tol)?;
    Ok(reference.value - expansion.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amplitude::BuiltinAmplitude;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn spec(kind: BuiltinAmplitude) -> AmplitudeSpec {
        AmplitudeSpec::builtin(kind).unwrap()
    }

    /// Struve K₀ = H₀ - Y₀ from the ascending series of both functions.
    fn struve_k0_series(x: f64) -> f64 {
        let q = 0.25 * x * x;
        let mut h0 = 0.0;
        let mut term = x / 2.0 / (0.25 * PI); // (x/2) / Γ(3/2)²
        for k in 0..60 {
            h0 += term;
            let g = k as f64 + 1.5;
            term *= -q / (g * g);
        }

        let euler = 0.577_215_664_901_532_9;
        let (mut j0, mut s, mut t, mut harmonic) = (0.0, 0.0, 1.0, 0.0);
        for k in 0..60 {
            if k > 0 {
                t *= -q / (k * k) as f64;
                harmonic += 1.0 / k as f64;
            }
            j0 += t;
            s -= harmonic * t;
        }
        let y0 = 2.0 / PI * (((x / 2.0).ln() + euler) * j0 + s);
        h0 - y0
    }

    #[test]
    fn constant_amplitude_gives_one_over_z() {
        let s = spec(BuiltinAmplitude::Constant);
        for z in [c(1.0, 0.0), c(10.0, 0.0), Complex64::from_polar(20.0, 0.47 * PI)] {
            let r = reference_value(&s, z, DEFAULT_TOL).unwrap();
            assert!((r.value - 1.0 / z).norm() < 1e-14 / z.norm(), "{z}: {}", r.value);
            assert!(r.abs_error_estimate >= 0.0 && r.evaluations > 0);
        }
    }

    #[test]
    fn struve_against_series() {
        let s = spec(BuiltinAmplitude::StruveK0);
        for x in [1.0, 3.0] {
            let got = reference_value(&s, c(x, 0.0), DEFAULT_TOL).unwrap().value;
            let expected = 0.5 * PI * struve_k0_series(x);
            assert!((got.re - expected).abs() < 1e-12 * expected && got.im.abs() < 1e-15, "{x}: {got} vs {expected}");
        }
    }

    #[test]
    fn two_precisions_agree() {
        let s = spec(BuiltinAmplitude::ConfluentU { a: c(0.5, 0.0), b: c(0.75, 0.0) });
        let z = c(5.0, 0.0);
        let tol = 1e-11;
        let coarse = reference_value(&s, z, tol).unwrap().value;
        let fine = reference_value(&s, z, tol / 100.0).unwrap().value;
        assert!((coarse - fine).norm() < 3.0 * tol * fine.norm());
    }

    #[test]
    fn linear_in_the_amplitude() {
        let s = spec(BuiltinAmplitude::Pole { psi: 0.1 * PI });
        let z = Complex64::from_polar(10.0, 0.25 * PI);
        let base = reference_value(&s, z, DEFAULT_TOL).unwrap().value;
        for k in [c(2.0, -1.0), c(-0.3, 0.7), c(1e3, 5.0)] {
            let scaled = reference_value(&s.scaled(k), z, DEFAULT_TOL).unwrap().value;
            assert!((scaled - k * base).norm() < 1e-13 * (k * base).norm());
        }
    }

    #[test]
    fn conjugate_amplitude_conjugate_reference() {
        let z = Complex64::from_polar(10.0, 0.2 * PI);
        let s = spec(BuiltinAmplitude::StruveK0);
        let up = reference_value(&s, z, DEFAULT_TOL).unwrap().value;
        let down = reference_value(&s, z.conj(), DEFAULT_TOL).unwrap().value;
        assert!((up.conj() - down).norm() < 1e-15);
    }

    #[test]
    fn rejects_bad_inputs() {
        let s = spec(BuiltinAmplitude::Constant);
        assert!(reference_value(&s, c(1.0, 0.0), 0.0).is_err());
        assert!(reference_value(&s, c(-1.0, 0.0), DEFAULT_TOL).is_err());
    }

    #[test]
    fn measured_remainder_examples() {
        let s = spec(BuiltinAmplitude::Constant);
        assert!(measured_remainder(&s, c(7.0, 3.0), 0.8).unwrap().norm() < 1e-14);

        let s = spec(BuiltinAmplitude::StruveK0);
        let r = measured_remainder(&s, c(10.0, 0.0), 0.8).unwrap().norm();
        let e = (-8.0f64).exp();
        assert!(r < e * 101.5 && r > e / 101.5, "{r}");

        let s = spec(BuiltinAmplitude::Pole { psi: 0.1 * PI });
        let r = measured_remainder(&s, Complex64::from_polar(20.0, 0.45 * PI), 0.8).unwrap().norm();
        let scaled = r * (20.0 * (0.35 * PI).cos()).exp();
        assert!((scaled.log10() - (2.0 * PI).log10()).abs() < 0.05, "{scaled}");
    }
}
