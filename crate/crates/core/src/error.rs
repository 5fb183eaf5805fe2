//! Crate-wide error type.
//!
//! Most variants signal that an input left the validity domain of an
//! operation (poles, degenerate parameters, non-generic monodromy data).
//! `NonDivisible` is special: it fires when an exact polynomial division
//! leaves a remainder, which would falsify a polynomiality identity rather
//! than indicate a bad input.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("exact polynomial division left a nonzero remainder: {0}")]
    NonDivisible(String),
    #[error("denominator vanishes at the evaluation point (|den| = {abs_den:e}, threshold {threshold:e})")]
    PoleHit { abs_den: f64, threshold: f64 },
    #[error("parameter m lies in Z + 1/2; a factor in a denominator vanishes")]
    HalfIntegerM,
    #[error("Gamma function pole at z = {re} + {im}i")]
    GammaPole { re: f64, im: f64 },
    #[error("combined power of two has non-integer exponent {0}; exact mode unavailable")]
    NonExactPower(String),
    #[error("denominator of the Backlund transform vanishes identically")]
    DegenerateDenominator,
    #[error("residue/derivative {value} at {location} is not within {tol:e} of a classified target")]
    UnclassifiedSingularity {
        location: String,
        value: String,
        tol: f64,
    },
    #[error("series initial value must be nonzero")]
    ZeroInitialValue,
    #[error("quadrature did not stabilize under node doubling: {0}")]
    QuadratureDivergence(String),
    #[error("series truncation budget exceeded: {0}")]
    TruncationBudgetExceeded(String),
    #[error("lambda in {{0, 1}} degenerates the sigma recurrence")]
    DegenerateLambda,
    #[error("root branches collided while tracking along the path: {0}")]
    BranchTrackingFailure(String),
    #[error("monodromy parameters are not generic: {0}")]
    NonGeneric(String),
    #[error("Re(mu) in {{0, +1/2, -1/2}} is outside the leading-term formula's domain")]
    ExcludedReMu,
    #[error("Barnes G argument at a non-positive integer")]
    BarnesZero,
}

pub type Result<T> = std::result::Result<T, Error>;
