//! Superasymptotics of the scaled exponential integral
//! `𝓔(x) = x eˣ E₁(x) = x ∫₀^∞ e^{-xt} / (1+t) dt`.
//!
//! Expanding `1/(1+t)` and integrating termwise gives
//! `𝓔(x) = Σ_{k<n} (-1)^k k!/x^k + Rₙ(x)` with
//! `Rₙ(x) = (-1)ⁿ x ∫₀^∞ tⁿ e^{-xt} / (1+t) dt`, bounded by the first neglected
//! term `n!/xⁿ` and of the same sign. Truncating at the least term `N = ⌊x⌋` leaves
//! `|R_N| ≲ (2πx)^{1/2} e^{-x}`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::incgamma::ln_gamma;
use crate::quadrature::Integrator;
use crate::sum::compensated_sum_real;

/// Truncated expansion of `𝓔(x)` after `n` terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct E1Expansion {
    pub x: f64,
    pub n: usize,
    pub partial_sum: f64,
    pub remainder: f64,
    pub least_term_index: usize,
}

fn check_x(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(invalid("x", format!("must be positive, got {x}")))
    }
}

fn ln_factorial(n: usize) -> f64 {
    ln_gamma(Complex64::new(n as f64 + 1.0, 0.0)).map(|v| v.re).unwrap_or(f64::INFINITY)
}

/// The k-th series term `(-1)^k k! / x^k`.
pub fn e1_term(x: f64, k: usize) -> f64 {
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    sign * (ln_factorial(k) - k as f64 * x.ln()).exp()
}

/// `Σ_{k<n} (-1)^k k! / x^k`.
pub fn e1_partial_sum(x: f64, n: usize) -> f64 {
    compensated_sum_real((0..n).map(|k| e1_term(x, k)))
}

/// `Rₙ(x) = (-1)ⁿ x ∫₀^∞ tⁿ e^{-xt} / (1+t) dt` by quadrature.
pub fn e1_remainder_integral(x: f64, n: usize) -> Result<f64> {
    check_x(x)?;
    let nf = n as f64;
    let peak = nf / x;
    // Integrand scaled by its maximum over t of tⁿ e^{-xt}.
    let ln_max = if n == 0 { 0.0 } else { nf * peak.ln() - nf };
    let ln_g = |t: f64| if n == 0 { -x * t } else { nf * t.ln() - x * t };
    let mut end = peak + 1.0 / x;
    while ln_g(end) - ln_max > -45.0 {
        end += (nf.sqrt() + 1.0) / x;
    }
    let width = (nf.sqrt() + 1.0) / x;
    let mut breaks = vec![0.0];
    for k in [-3.0, -1.0, 0.0, 1.0, 3.0] {
        let b = peak + k * width;
        if b > 0.0 && b < end {
            breaks.push(b);
        }
    }
    breaks.push(end);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let res = Integrator::new(0.0, 1e-14).integrate_pieces(
        |t| {
            if t <= 0.0 {
                return Complex64::new(if n == 0 { 1.0 } else { 0.0 }, 0.0);
            }
            Complex64::new((ln_g(t) - ln_max).exp() / (1.0 + t), 0.0)
        },
        &breaks,
    )?;
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * x * res.value.re * ln_max.exp())
}

/// `𝓔(x) = x eˣ E₁(x)` by quadrature of `x ∫₀^∞ e^{-xt} / (1+t) dt`.
pub fn script_e(x: f64) -> Result<f64> {
    e1_remainder_integral(x, 0)
}

/// Index of the least term of the series: `⌊x⌋`, or `x - 1` when `x` is an
/// integer and the terms `k = x - 1` and `k = x` tie.
pub fn e1_optimal_index(x: f64) -> usize {
    let f = x.floor();
    if f == x && x >= 1.0 {
        (x - 1.0) as usize
    } else if f > 0.0 {
        f as usize
    } else {
        0
    }
}

/// `(2πx)^{1/2} e^{-x}`.
pub fn superasymptotic_estimate(x: f64) -> Result<f64> {
    if !(x >= 1.0) {
        return Err(invalid("x", format!("estimate needs x >= 1, got {x}")));
    }
    Ok((2.0 * PI * x).sqrt() * (-x).exp())
}

/// Converging-factor estimate `uₙ / (1 - e^{-iα})` of the optimal remainder
/// when the nearest singularity of the amplitude lies at angle α.
pub fn jeffreys_estimate(u_n: Complex64, alpha: f64) -> Result<Complex64> {
    let denom = Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, -alpha);
    if denom.norm() < 1e-12 {
        return Err(invalid("alpha", format!("alpha must not be a multiple of 2 pi, got {alpha}")));
    }
    Ok(u_n / denom)
}

/// Partial sum, remainder and least-term index after `n` terms.
pub fn e1_expansion(x: f64, n: usize) -> Result<E1Expansion> {
    Ok(E1Expansion {
        x,
        n,
        partial_sum: e1_partial_sum(x, n),
        remainder: e1_remainder_integral(x, n)?,
        least_term_index: e1_optimal_index(x),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    // E₁ by its convergent series; independent of the quadrature path.
    fn script_e_series(x: f64) -> f64 {
        let euler = 0.577_215_664_901_532_9;
        let mut sum = 0.0;
        let mut term = 1.0;
        for k in 1..200 {
            term *= -x / k as f64;
            sum += term / k as f64;
        }
        let e1 = -euler - x.ln() - sum;
        x * x.exp() * e1
    }

    #[test]
    fn script_e_values() {
        assert!((script_e(1.0).unwrap() - script_e_series(1.0)).abs() < 1e-13);
        assert!((script_e(5.0).unwrap() - script_e_series(5.0)).abs() < 1e-12);
        assert!((script_e(1.0).unwrap() - 0.5963).abs() < 1e-4);
        assert!((script_e(5.0).unwrap() - 0.8521).abs() < 1e-4);
        assert!((script_e(1e4).unwrap() - 1.0).abs() < 2e-4);
    }

    #[test]
    fn partial_sums() {
        assert_eq!(e1_partial_sum(3.0, 0), 0.0);
        assert_eq!(e1_partial_sum(3.0, 1), 1.0);
        assert!((e1_partial_sum(5.0, 3) - 0.88).abs() < 1e-15);
    }

    #[test]
    fn remainder_edge_cases() {
        assert!((e1_remainder_integral(3.0, 0).unwrap() - script_e(3.0).unwrap()).abs() < 1e-15);
        let r = e1_remainder_integral(5.0, 5).unwrap();
        assert!(r < 0.0 && r.abs() < 120.0 / 3125.0);
    }

    #[test]
    fn optimal_index() {
        assert_eq!(e1_optimal_index(5.3), 5);
        assert_eq!(e1_optimal_index(0.4), 0);
        assert_eq!(e1_optimal_index(7.0), 6);
    }

    #[test]
    fn estimate_values() {
        let e = superasymptotic_estimate(10.0).unwrap();
        assert!((e - (20.0 * PI).sqrt() * (-10f64).exp()).abs() < 1e-18);
        assert!((e - 3.60e-4).abs() < 1e-6);
        assert!(superasymptotic_estimate(0.5).is_err());
    }

    #[test]
    fn estimate_tracks_least_term() {
        for x in [50.0f64, 100.0] {
            let least = (ln_factorial(x as usize) - x * x.ln()).exp();
            let ratio = superasymptotic_estimate(x).unwrap() / least;
            assert!((ratio - 1.0).abs() < 2.0 / (12.0 * x), "x={x} ratio={ratio}");
        }
    }

    #[test]
    fn jeffreys_values() {
        let u = Complex64::new(0.3, -0.2);
        assert!((jeffreys_estimate(u, PI).unwrap() - u / 2.0).norm() < 1e-16);
        assert!((jeffreys_estimate(u, 0.5 * PI).unwrap() - u / Complex64::new(1.0, 1.0)).norm() < 1e-16);
        assert!(jeffreys_estimate(u, 0.0).is_err());
        assert!(jeffreys_estimate(u, 2.0 * PI).is_err());
    }

    #[test]
    fn expansion_record() {
        let e = e1_expansion(7.5, 7).unwrap();
        assert_eq!(e.least_term_index, 7);
        assert!((e.partial_sum + e.remainder - script_e(7.5).unwrap()).abs() < 1e-13);
    }
}
