//! Every tolerance and threshold used by the verification suite, pinned in
//! one place. Exact checks have no tolerance at all: they compare big
//! rationals for equality.

/// Relative tolerance for the Gamma-formula route of u_n(0; m) against the
/// exact product (criterion: three-way origin values).
pub const ORIGIN_GAMMA_REL: f64 = 1e-12;

/// Cross-route agreement of the two log-determinant discretizations on
/// |r| <= 1.
pub const DET_CROSS_ROUTE: f64 = 1e-10;

/// |ln D_1(r) + r/4| at lambda = 1.
pub const DET_LAMBDA_ONE: f64 = 1e-12;

/// sigma-form residual bound at r in {0.5, 1, 2, 4}.
pub const SIGMA_FORM_RESIDUAL: f64 = 1e-8;

/// Determinant route vs Maclaurin series for U(z; 1/4) on the |z| <= 0.1 grid.
pub const U_RECONSTRUCTION: f64 = 1e-8;

/// Least-squares decay rate demanded of the convergence trends.
pub const TREND_MIN_RATE: f64 = 0.7;

/// gap(j = 32) must be at most gap(j = 4) divided by this factor.
pub const CONFLUENCE_J32_FACTOR: f64 = 4.0;

/// Barnes-G asymptotic ratio deviation bound at j = 20.
pub const BARNES_RATIO_AT_20: f64 = 0.05;

/// Relative D6/D8 cubic residual bound for seeded generic draws.
pub const CUBIC_RESIDUAL: f64 = 1e-10;

/// Cyclic-condition deviation bound (relative to factor magnitudes).
pub const CYCLIC_RESIDUAL: f64 = 1e-12;

/// Eigenvector-relation residual bound (relative to matrix magnitudes).
pub const EIGEN_RESIDUAL: f64 = 1e-12;

/// Match of the large-x expansion of H_n + u_n p_n / x at x = 10^3.
pub const TAU_EXPANSION_AT_1E3: f64 = 1e-10;

/// Float-route fallback bound for the moment-determinant identity.
pub const WRONSKIAN_FLOAT: f64 = 1e-10;

/// Number of seeded generic monodromy draws in the algebra criterion.
pub const MONODROMY_DRAWS: usize = 100;
