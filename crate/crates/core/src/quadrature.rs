//! Globally adaptive Gauss-Legendre quadrature for complex-valued integrands.
//!
//! Every panel is integrated with the 20-point and the 10-point rule; the
//! 20-point value is kept and the difference of the two serves as a
//! (pessimistic) error estimate. The panel with the largest estimate is
//! bisected until the global tolerance is met.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sum::CompensatedSum;

/// Value and error estimate of a one-dimensional integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: Complex64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
}

struct Rule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1] by Newton
/// iteration on the Legendre recurrence.
fn gauss_legendre(n: usize) -> Rule {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    Rule { nodes, weights }
}

fn rules() -> &'static (Rule, Rule) {
    static RULES: OnceLock<(Rule, Rule)> = OnceLock::new();
    RULES.get_or_init(|| (gauss_legendre(20), gauss_legendre(10)))
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn panel<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Panel {
    let (high, low) = rules();
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let hi: Complex64 = high
        .nodes
        .iter()
        .zip(&high.weights)
        .map(|(x, w)| f(c + h * x) * *w)
        .sum::<Complex64>()
        * h;
    let lo: Complex64 = low
        .nodes
        .iter()
        .zip(&low.weights)
        .map(|(x, w)| f(c + h * x) * *w)
        .sum::<Complex64>()
        * h;
    Panel {
        a,
        b,
        value: hi,
        error: (hi - lo).norm(),
    }
}

const EVALS_PER_PANEL: usize = 30;

/// Adaptive integrator with an absolute/relative hybrid tolerance.
#[derive(Debug, Clone, Copy)]
pub struct Integrator {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl Default for Integrator {
    fn default() -> Self {
        Integrator {
            abs_tol: 0.0,
            rel_tol: 1e-13,
            max_panels: 20_000,
        }
    }
}

impl Integrator {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Self {
        Integrator {
            abs_tol,
            rel_tol,
            ..Default::default()
        }
    }

    /// Integrate `f` over `[a, b]`.
    pub fn integrate<F: Fn(f64) -> Complex64>(&self, f: F, a: f64, b: f64) -> Result<QuadratureResult> {
        self.integrate_pieces(f, &[a, b])
    }

    /// Integrate `f` over consecutive panels delimited by `breaks`, which
    /// must be sorted. Breakpoints are a good place to put peaks and kinks.
    pub fn integrate_pieces<F: Fn(f64) -> Complex64>(&self, f: F, breaks: &[f64]) -> Result<QuadratureResult> {
        let mut heap = BinaryHeap::new();
        let mut evaluations = 0;
        for w in breaks.windows(2) {
            if w[1] > w[0] {
                heap.push(panel(&f, w[0], w[1]));
                evaluations += EVALS_PER_PANEL;
            }
        }
        if heap.is_empty() {
            return Ok(QuadratureResult {
                value: Complex64::new(0.0, 0.0),
                abs_error_estimate: 0.0,
                evaluations: 1,
            });
        }
        let mut exhausted: Vec<Panel> = Vec::new();
        loop {
            let (value, error) = totals(heap.iter().chain(exhausted.iter()));
            let target = self.abs_tol.max(self.rel_tol * value.norm());
            if error <= target {
                return Ok(QuadratureResult {
                    value,
                    abs_error_estimate: error,
                    evaluations,
                });
            }
            let worst = match heap.pop() {
                Some(p) => p,
                None => {
                    return Err(Error::Quadrature {
                        estimate: error,
                        intervals: exhausted.len(),
                    })
                }
            };
            let mid = 0.5 * (worst.a + worst.b);
            if heap.len() + exhausted.len() + 2 > self.max_panels {
                return Err(Error::Quadrature {
                    estimate: error,
                    intervals: heap.len() + exhausted.len() + 1,
                });
            }
            if mid <= worst.a || mid >= worst.b || (worst.b - worst.a) < 1e-15 * worst.a.abs().max(worst.b.abs()) {
                exhausted.push(worst);
                continue;
            }
            let left = panel(&f, worst.a, mid);
            let right = panel(&f, mid, worst.b);
            evaluations += 2 * EVALS_PER_PANEL;
            // The split panels agree with their parent to within roundoff:
            // further bisection cannot improve this region.
            let refined = (left.value + right.value - worst.value).norm();
            if refined <= 4.0 * f64::EPSILON * (left.value.norm() + right.value.norm()) && left.error + right.error >= worst.error {
                exhausted.push(Panel {
                    error: refined,
                    ..worst
                });
                continue;
            }
            heap.push(left);
            heap.push(right);
        }
    }
}

fn totals<'a, I: Iterator<Item = &'a Panel>>(panels: I) -> (Complex64, f64) {
    let mut acc = CompensatedSum::new();
    let mut err = 0.0;
    for p in panels {
        acc.add(p.value);
        err += p.error;
    }
    (acc.value(), err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_weights_sum_to_two() {
        let (high, low) = rules();
        assert!((high.weights.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        assert!((low.weights.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn twenty_point_rule_is_exact_for_degree_39() {
        let r = Integrator::default()
            .integrate(|x| Complex64::new(x.powi(38), x.powi(39)), -1.0, 1.0)
            .unwrap();
        assert!((r.value.re - 2.0 / 39.0).abs() < 1e-15);
        assert!(r.value.im.abs() < 1e-15);
    }

    #[test]
    fn oscillatory_exponential() {
        let z = Complex64::new(3.0, 19.0);
        let r = Integrator::new(0.0, 1e-14)
            .integrate(|t| (-z * t).exp(), 0.0, 20.0)
            .unwrap();
        let exact = (Complex64::new(1.0, 0.0) - (-z * 20.0).exp()) / z;
        assert!((r.value - exact).norm() < 1e-15);
    }

    #[test]
    fn endpoint_singularity_is_integrable() {
        let r = Integrator::new(1e-10, 0.0)
            .integrate(|t| Complex64::new(1.0 / t.sqrt(), 0.0), 0.0, 1.0)
            .unwrap();
        assert!((r.value.re - 2.0).abs() < 1e-8, "{}", r.value);
    }

    #[test]
    fn empty_interval() {
        let r = Integrator::default().integrate(|_| Complex64::new(1.0, 0.0), 2.0, 2.0).unwrap();
        assert_eq!(r.value, Complex64::new(0.0, 0.0));
    }
}
