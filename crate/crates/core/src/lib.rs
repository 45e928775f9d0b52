//! Laplace integrals `I(z) = ∫₀^∞ e^{-zt} f(t) dt` by optimally truncated
//! Watson's-lemma expansions, with exponentially small error envelopes and a
//! quadrature reference to check them against.
//!
//! ```
//! use num_complex::Complex64;
//! use watson::amplitude::{AmplitudeSpec, BuiltinAmplitude};
//! use watson::expansion::watson_sum;
//! use watson::oracle::measured_remainder;
//!
//! let spec = AmplitudeSpec::builtin(BuiltinAmplitude::Pole { psi: 0.4 }).unwrap();
//! let z = Complex64::from_polar(15.0, 0.2);
//! let e = watson_sum(&spec, z, 0.8).unwrap();
//! let r = measured_remainder(&spec, z, 0.8).unwrap().norm();
//! assert!(r < e.envelope_alg + e.envelope_sing);
//! ```

pub mod amplitude;
pub mod error;
pub mod expansion;
pub mod expintegral;
pub mod incgamma;
pub mod oracle;
pub mod quadrature;
pub mod sum;
pub mod sweep;
pub mod verify;

// The guide's code blocks run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/amplitudes.md")]
    pub struct Amplitudes;
    #[doc = include_str!("../../../book/src/truncation.md")]
    pub struct Truncation;
    #[doc = include_str!("../../../book/src/singularities.md")]
    pub struct Singularities;
    #[doc = include_str!("../../../book/src/reference.md")]
    pub struct Reference;
    #[doc = include_str!("../../../book/src/incomplete-gamma.md")]
    pub struct IncompleteGamma;
    #[doc = include_str!("../../../book/src/exponential-integral.md")]
    pub struct ExponentialIntegral;
    #[doc = include_str!("../../../book/src/sweeps.md")]
    pub struct Sweeps;
    #[doc = include_str!("../../../book/src/verification.md")]
    pub struct Verification;
}
