//! Numerical tolerances shared across the crate.

/// Structural checks: hermiticity, unit trace, completeness of effects.
pub const VALIDATE: f64 = 1e-12;

/// Cross-checks between independent computational routes.
pub const ORACLE: f64 = 1e-10;

/// Smallest eigenvalue accepted for a density matrix.
pub const POSITIVITY: f64 = -1e-10;

/// Off-diagonal Frobenius mass at which Jacobi sweeps stop.
pub const JACOBI: f64 = 1e-13;

/// Outcome probabilities below this are treated as impossible branches.
pub const OUTCOME_FLOOR: f64 = 1e-14;

/// Slack used in place of an exact zero slack so a saturated stage stays
/// strictly on the detecting side of its threshold.
pub const ZERO_SLACK_NUDGE: f64 = 1e-9;
