//! Initial two-qubit state families.
//!
//! Basis order is |00>, |01>, |10>, |11>; `|ψ⁺> = (|01> + |10>)/√2` and
//! `|φ⁺> = (|00> + |11>)/√2`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{ComplexMatrix, DensityMatrix, C64};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StateFamily {
    /// `|ψ⁺><ψ⁺|`, identical to `Werner { p: 1 }`.
    BellPsiPlus,
    /// `p|ψ⁺><ψ⁺| + (1 − p) 𝕀/4`, `p ∈ (0, 1]`.
    Werner { p: f64 },
    /// `p|φ⁺><φ⁺| + (1 − p)/2 (|01><01| + |10><10|)`, `p ∈ (0, 1]`.
    ColoredNoise { p: f64 },
    /// `cos θ|01> + sin θ|10>`, `θ ∈ (0, π/4)`.
    PureNonMax { theta: f64 },
}

/// Parameterised families used for the non-sequential comparisons.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Werner,
    ColoredNoise,
    PureNonMax,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 3] = [FamilyKind::Werner, FamilyKind::ColoredNoise, FamilyKind::PureNonMax];

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Werner => "werner",
            FamilyKind::ColoredNoise => "colored",
            FamilyKind::PureNonMax => "pure",
        }
    }

    pub fn with_parameter(self, x: f64) -> StateFamily {
        match self {
            FamilyKind::Werner => StateFamily::Werner { p: x },
            FamilyKind::ColoredNoise => StateFamily::ColoredNoise { p: x },
            FamilyKind::PureNonMax => StateFamily::PureNonMax { theta: x },
        }
    }

    /// Open/closed parameter interval `(lo, hi)`; `hi` is included except
    /// for the pure family.
    pub fn parameter_range(self) -> (f64, f64) {
        match self {
            FamilyKind::Werner | FamilyKind::ColoredNoise => (0.0, 1.0),
            FamilyKind::PureNonMax => (0.0, FRAC_PI_4),
        }
    }

    /// Inverts the closed-form concurrence.
    pub fn parameter_for_concurrence(self, c: f64) -> Result<f64> {
        if !(c > 0.0 && c < 1.0) {
            return Err(Error::ParameterOutOfRange {
                name: "concurrence",
                value: c,
                range: "(0, 1)",
            });
        }
        Ok(match self {
            FamilyKind::Werner => (2.0 * c + 1.0) / 3.0,
            FamilyKind::ColoredNoise => (c + 1.0) / 2.0,
            FamilyKind::PureNonMax => c.asin() / 2.0,
        })
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn out_of_range(name: &'static str, value: f64, range: &'static str) -> Error {
    Error::ParameterOutOfRange { name, value, range }
}

pub(crate) fn psi_plus_vec() -> [C64; 4] {
    let s = C64::new(FRAC_1_SQRT_2, 0.0);
    let z = C64::new(0.0, 0.0);
    [z, s, s, z]
}

pub(crate) fn phi_plus_vec() -> [C64; 4] {
    let s = C64::new(FRAC_1_SQRT_2, 0.0);
    let z = C64::new(0.0, 0.0);
    [s, z, z, s]
}

impl StateFamily {
    pub fn kind(&self) -> Option<FamilyKind> {
        match self {
            StateFamily::BellPsiPlus => None,
            StateFamily::Werner { .. } => Some(FamilyKind::Werner),
            StateFamily::ColoredNoise { .. } => Some(FamilyKind::ColoredNoise),
            StateFamily::PureNonMax { .. } => Some(FamilyKind::PureNonMax),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            StateFamily::BellPsiPlus => "bell",
            StateFamily::Werner { .. } => "werner",
            StateFamily::ColoredNoise { .. } => "colored",
            StateFamily::PureNonMax { .. } => "pure",
        }
    }

    pub fn parameter(&self) -> Option<f64> {
        match *self {
            StateFamily::BellPsiPlus => None,
            StateFamily::Werner { p } | StateFamily::ColoredNoise { p } => Some(p),
            StateFamily::PureNonMax { theta } => Some(theta),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            StateFamily::BellPsiPlus => Ok(()),
            StateFamily::Werner { p } | StateFamily::ColoredNoise { p } => {
                if p > 0.0 && p <= 1.0 {
                    Ok(())
                } else {
                    Err(out_of_range("p", p, "(0, 1]"))
                }
            }
            StateFamily::PureNonMax { theta } => {
                if theta > 0.0 && theta < FRAC_PI_4 {
                    Ok(())
                } else {
                    Err(out_of_range("theta", theta, "(0, pi/4)"))
                }
            }
        }
    }

    pub fn build(&self) -> Result<DensityMatrix> {
        self.validate()?;
        let m = match *self {
            StateFamily::BellPsiPlus => ComplexMatrix::outer(&psi_plus_vec())?,
            StateFamily::Werner { p } => {
                let bell = ComplexMatrix::outer(&psi_plus_vec())?.scale(p);
                &bell + &ComplexMatrix::identity(4)?.scale((1.0 - p) / 4.0)
            }
            StateFamily::ColoredNoise { p } => {
                let mut m = ComplexMatrix::outer(&phi_plus_vec())?.scale(p);
                let noise = C64::new((1.0 - p) / 2.0, 0.0);
                m.set(1, 1, m.get(1, 1) + noise);
                m.set(2, 2, m.get(2, 2) + noise);
                m
            }
            StateFamily::PureNonMax { theta } => {
                let z = C64::new(0.0, 0.0);
                ComplexMatrix::outer(&[z, C64::new(theta.cos(), 0.0), C64::new(theta.sin(), 0.0), z])?
            }
        };
        DensityMatrix::new(m)
    }

    /// Concurrence from the family's closed form.
    pub fn concurrence_closed_form(&self) -> Result<f64> {
        self.validate()?;
        Ok(match *self {
            StateFamily::BellPsiPlus => 1.0,
            StateFamily::Werner { p } => ((3.0 * p - 1.0) / 2.0).max(0.0),
            StateFamily::ColoredNoise { p } => (2.0 * p - 1.0).max(0.0),
            StateFamily::PureNonMax { theta } => (2.0 * theta).sin(),
        })
    }
}

impl fmt::Display for StateFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            StateFamily::BellPsiPlus => write!(f, "bell"),
            StateFamily::Werner { p } => write!(f, "werner(p={p})"),
            StateFamily::ColoredNoise { p } => write!(f, "colored(p={p})"),
            StateFamily::PureNonMax { theta } => write!(f, "pure(theta={theta})"),
        }
    }
}
