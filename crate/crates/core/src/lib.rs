//! Rational solutions of Painleve-III(D6), their confluence to the
//! Painleve-III(D8) transcendent, and the machinery needed to cross-validate
//! both: exact rational-polynomial arithmetic, Umemura polynomial recurrences,
//! Backlund transformations, Maclaurin-series solvers with a majorant radius
//! bound, Bessel-kernel Fredholm determinants with their sigma-form, monodromy
//! manifolds on both cubics, and large-parameter asymptotic evaluators.
//!
//! Every closed-form evaluator is paired with at least one independent route
//! (exact recurrence, product formula, quadrature, or series) so the library
//! doubles as a numerical verification suite; `verify` collects those
//! cross-checks and the CLI exposes them as `painleve3 verify`.

pub mod asymptotics;
pub mod backlund;
pub mod cli;
pub mod error;
pub mod exact;
pub mod fredholm;
pub mod hifloat;
pub mod monodromy;
pub mod quad;
pub mod series;
pub mod specfun;
pub mod tolerances;
pub mod umemura;
pub mod verify;

pub use error::{Error, Result};

/// Complex double, the floating backbone for every non-exact computation.
pub type C64 = num::complex::Complex64;
