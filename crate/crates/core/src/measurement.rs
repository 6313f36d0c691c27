//! Unsharp dichotomic spin measurements.
//!
//! An observable along `n̂` with sharpness `λ ∈ (0, 1]` has effects
//! `E± = λ P± + (1 − λ)/2 · 𝕀`, where `P±` project onto the `±1`
//! eigenspaces of `σ·n̂`. Its robustness of measurement equals `λ`, and its
//! pointer satisfies `F² + G² = 1` with `G = λ`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{self, spin_along, tensor, ComplexMatrix, DensityMatrix, Pauli};
use crate::tolerance;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub const ALL: [Outcome; 2] = [Outcome::Plus, Outcome::Minus];

    pub fn sign(self) -> f64 {
        match self {
            Outcome::Plus => 1.0,
            Outcome::Minus => -1.0,
        }
    }
}

/// Which qubit of a two-qubit state a local operation acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Wing {
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnsharpObservable {
    direction: [f64; 3],
    sharpness: f64,
}

impl UnsharpObservable {
    pub fn new(direction: [f64; 3], sharpness: f64) -> Result<Self> {
        let norm = direction.iter().map(|x| x * x).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > tolerance::VALIDATE {
            return Err(Error::NotUnitVector(norm));
        }
        check_sharpness("sharpness", sharpness)?;
        Ok(Self {
            direction,
            sharpness,
        })
    }

    /// Observable along a coordinate axis.
    pub fn along(axis: Pauli, sharpness: f64) -> Result<Self> {
        let direction = match axis {
            Pauli::X => [1.0, 0.0, 0.0],
            Pauli::Y => [0.0, 1.0, 0.0],
            Pauli::Z => [0.0, 0.0, 1.0],
            Pauli::I => return Err(Error::NotUnitVector(0.0)),
        };
        Self::new(direction, sharpness)
    }

    pub fn direction(&self) -> [f64; 3] {
        self.direction
    }

    pub fn sharpness(&self) -> f64 {
        self.sharpness
    }

    /// Sharp eigenprojector `P± = (𝕀 ± σ·n̂)/2`.
    pub fn projector(&self, outcome: Outcome) -> ComplexMatrix {
        let id = ComplexMatrix::identity(2).expect("dim 2");
        let s = spin_along(self.direction).scale(outcome.sign());
        (&id + &s).scale(0.5)
    }

    pub fn effect(&self, outcome: Outcome) -> ComplexMatrix {
        let id = ComplexMatrix::identity(2).expect("dim 2");
        let lam = self.sharpness;
        &self.projector(outcome).scale(lam) + &id.scale((1.0 - lam) / 2.0)
    }

    /// `√E` from the spectral form `√((1+λ)/2) P± + √((1−λ)/2) P∓`.
    pub fn sqrt_effect(&self, outcome: Outcome) -> ComplexMatrix {
        let lam = self.sharpness;
        let other = match outcome {
            Outcome::Plus => Outcome::Minus,
            Outcome::Minus => Outcome::Plus,
        };
        &self.projector(outcome).scale(((1.0 + lam) / 2.0).sqrt())
            + &self.projector(other).scale(((1.0 - lam) / 2.0).max(0.0).sqrt())
    }

    /// `Tr(ρE₊) − Tr(ρE₋)`, equal to `λ⟨σ·n̂⟩`.
    pub fn expectation(&self, rho: &DensityMatrix) -> Result<f64> {
        let plus = qcore::expectation(&self.effect(Outcome::Plus), rho)?;
        let minus = qcore::expectation(&self.effect(Outcome::Minus), rho)?;
        Ok(plus - minus)
    }

    /// Lüders update `√E ρ √E / Tr(ρE)` on a single qubit.
    pub fn luders_update(&self, outcome: Outcome, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != 2 {
            return Err(Error::DimensionMismatch(rho.dim(), 2));
        }
        conditioned(&self.sqrt_effect(outcome), rho)
    }

    /// Lüders update acting on one wing of a two-qubit state.
    pub fn luders_update_on(
        &self,
        wing: Wing,
        outcome: Outcome,
        rho: &DensityMatrix,
    ) -> Result<DensityMatrix> {
        if rho.dim() != 4 {
            return Err(Error::DimensionMismatch(rho.dim(), 4));
        }
        conditioned(&local(wing, &self.sqrt_effect(outcome))?, rho)
    }

    /// `Σᵢ ‖Eᵢ‖∞ − 1` computed from operator norms.
    pub fn rom(&self) -> Result<f64> {
        let mut total = -1.0;
        for o in Outcome::ALL {
            total += qcore::operator_norm(&self.effect(o))?;
        }
        Ok(total)
    }

    pub fn pointer_tradeoff(&self) -> PointerTradeoff {
        PointerTradeoff {
            quality: (1.0 - self.sharpness * self.sharpness).max(0.0).sqrt(),
            precision: self.sharpness,
        }
    }
}

pub(crate) fn check_sharpness(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value <= 1.0 {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange {
            name,
            value,
            range: "(0, 1]",
        })
    }
}

/// Embeds a single-qubit operator on one wing: `K ⊗ 𝕀` or `𝕀 ⊗ K`.
pub fn local(wing: Wing, k: &ComplexMatrix) -> Result<ComplexMatrix> {
    let id = ComplexMatrix::identity(2)?;
    match wing {
        Wing::A => tensor(k, &id),
        Wing::B => tensor(&id, k),
    }
}

fn conditioned(kraus: &ComplexMatrix, rho: &DensityMatrix) -> Result<DensityMatrix> {
    let post = kraus.sandwich(rho.matrix());
    let prob = post.trace().re;
    if prob <= tolerance::OUTCOME_FLOOR {
        return Err(Error::ImpossibleOutcome(prob));
    }
    DensityMatrix::new(post.scale(1.0 / prob))
}

/// Pointer quality `F` and precision `G` of a weak measurement.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointerTradeoff {
    pub quality: f64,
    pub precision: f64,
}

impl PointerTradeoff {
    pub fn defect(&self) -> f64 {
        (self.quality * self.quality + self.precision * self.precision - 1.0).abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{eigen_hermitian, C64};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn ket(v: [f64; 2]) -> DensityMatrix {
        DensityMatrix::pure(&[C64::new(v[0], 0.0), C64::new(v[1], 0.0)]).unwrap()
    }

    fn unit(theta: f64, phi: f64) -> [f64; 3] {
        [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]
    }

    #[test]
    fn constructor_validates() {
        assert!(matches!(
            UnsharpObservable::new([1.0, 1.0, 0.0], 0.5),
            Err(Error::NotUnitVector(_))
        ));
        assert!(UnsharpObservable::new([0.0, 0.0, 1.0], 0.0).is_err());
        assert!(UnsharpObservable::new([0.0, 0.0, 1.0], 1.2).is_err());
        assert!(UnsharpObservable::along(Pauli::I, 0.5).is_err());
    }

    #[test]
    fn sharp_effect_is_projector() {
        let obs = UnsharpObservable::along(Pauli::Z, 1.0).unwrap();
        let want = ComplexMatrix::from_real(2, &[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(obs.effect(Outcome::Plus).max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn effect_spectrum() {
        let obs = UnsharpObservable::new(unit(0.3, 1.1), 0.73).unwrap();
        let e = eigen_hermitian(&obs.effect(Outcome::Plus)).unwrap();
        assert_abs_diff_eq!(e.values[0], 0.135, epsilon = 1e-12);
        assert_abs_diff_eq!(e.values[1], 0.865, epsilon = 1e-12);
    }

    #[test]
    fn unsharp_expectation_examples() {
        let z = UnsharpObservable::along(Pauli::Z, 0.5).unwrap();
        assert_abs_diff_eq!(z.expectation(&ket([1.0, 0.0])).unwrap(), 0.5, epsilon = 1e-12);
        let mixed = DensityMatrix::maximally_mixed(2).unwrap();
        assert_abs_diff_eq!(z.expectation(&mixed).unwrap(), 0.0, epsilon = 1e-12);
        let x = UnsharpObservable::along(Pauli::X, 0.79).unwrap();
        let plus = ket([1.0, 1.0]);
        assert_abs_diff_eq!(x.expectation(&plus).unwrap(), 0.79, epsilon = 1e-12);
    }

    #[test]
    fn luders_examples() {
        let sharp = UnsharpObservable::along(Pauli::Z, 1.0).unwrap();
        let zero = ket([1.0, 0.0]);
        let out = sharp.luders_update(Outcome::Plus, &zero).unwrap();
        assert!(out.matrix().max_abs_diff(zero.matrix()) < 1e-15);

        let weak = UnsharpObservable::new(unit(0.7, 0.2), 1e-6).unwrap();
        let rho = ket([0.6, 0.8]);
        let out = weak.luders_update(Outcome::Minus, &rho).unwrap();
        assert!(out.trace_distance(&rho).unwrap() < 1e-6);

        let obs = UnsharpObservable::along(Pauli::Z, 0.6).unwrap();
        let mixed = DensityMatrix::maximally_mixed(2).unwrap();
        let out = obs.luders_update(Outcome::Plus, &mixed).unwrap();
        let want = ComplexMatrix::from_real(2, &[0.8, 0.0, 0.0, 0.2]).unwrap();
        assert!(out.matrix().max_abs_diff(&want) < 1e-12);
    }

    #[test]
    fn impossible_branch_is_error() {
        let sharp = UnsharpObservable::along(Pauli::Z, 1.0).unwrap();
        let one = ket([0.0, 1.0]);
        assert!(matches!(
            sharp.luders_update(Outcome::Plus, &one),
            Err(Error::ImpossibleOutcome(_))
        ));
        let two = DensityMatrix::maximally_mixed(4).unwrap();
        assert!(sharp.luders_update(Outcome::Plus, &two).is_err());
    }

    #[test]
    fn rom_examples() {
        for (lam, want) in [(1.0, 1.0), (0.80, 0.80)] {
            let obs = UnsharpObservable::along(Pauli::X, lam).unwrap();
            assert_abs_diff_eq!(obs.rom().unwrap(), want, epsilon = 1e-12);
        }
    }

    #[test]
    fn pointer_examples() {
        let t = UnsharpObservable::along(Pauli::Z, 1.0).unwrap().pointer_tradeoff();
        assert_eq!((t.quality, t.precision), (0.0, 1.0));
        let t = UnsharpObservable::along(Pauli::Z, 0.6).unwrap().pointer_tradeoff();
        assert_abs_diff_eq!(t.quality, 0.8, epsilon = 1e-15);
        assert_abs_diff_eq!(t.precision, 0.6, epsilon = 1e-15);
    }

    #[test]
    fn local_update_on_wing() {
        // Measuring Bob's qubit of |01> along z with outcome - leaves |01>
        let z = C64::new(0.0, 0.0);
        let o = C64::new(1.0, 0.0);
        let rho = DensityMatrix::pure(&[z, o, z, z]).unwrap();
        let obs = UnsharpObservable::along(Pauli::Z, 0.9).unwrap();
        let out = obs.luders_update_on(Wing::B, Outcome::Minus, &rho).unwrap();
        assert!(out.matrix().max_abs_diff(rho.matrix()) < 1e-12);
        assert!(obs.luders_update_on(Wing::A, Outcome::Plus, &DensityMatrix::maximally_mixed(2).unwrap()).is_err());
    }

    fn random_qubit_state(a: f64, b: f64, c: f64, w: f64) -> DensityMatrix {
        let n = unit(a, b);
        let r = w * c.abs().min(1.0);
        let m = &ComplexMatrix::identity(2).unwrap().scale(0.5) + &spin_along([n[0] * r, n[1] * r, n[2] * r]).scale(0.5);
        DensityMatrix::new(m).unwrap()
    }

    proptest! {
        #[test]
        fn effects_complete_and_positive(theta in 0.0..std::f64::consts::PI, phi in 0.0..6.3f64, lam in 1e-6..=1.0f64) {
            let obs = UnsharpObservable::new(unit(theta, phi), lam).unwrap();
            let sum = &obs.effect(Outcome::Plus) + &obs.effect(Outcome::Minus);
            prop_assert!(sum.max_abs_diff(&ComplexMatrix::identity(2).unwrap()) < 1e-12);
            for o in Outcome::ALL {
                let e = eigen_hermitian(&obs.effect(o)).unwrap();
                prop_assert!(e.values[0] >= -1e-12);
                // √E squared is E
                let r = obs.sqrt_effect(o);
                prop_assert!((&r * &r).max_abs_diff(&obs.effect(o)) < 1e-12);
            }
            // Eq. 7 route (operator norms) against Eq. 8 (λ)
            prop_assert!((obs.rom().unwrap() - lam).abs() < 1e-12);
            prop_assert!(obs.pointer_tradeoff().defect() < 1e-12);
        }

        #[test]
        fn unconditioned_map_is_trace_preserving(
            theta in 0.0..std::f64::consts::PI, phi in 0.0..6.3f64, lam in 1e-6..=1.0f64,
            a in 0.0..3.2f64, b in 0.0..6.3f64, c in 0.0..1.0f64, w in 0.0..1.0f64,
        ) {
            let obs = UnsharpObservable::new(unit(theta, phi), lam).unwrap();
            let rho = random_qubit_state(a, b, c, w);
            let mut total = ComplexMatrix::zeros(2).unwrap();
            for o in Outcome::ALL {
                total = &total + &obs.sqrt_effect(o).sandwich(rho.matrix());
            }
            prop_assert!((total.trace().re - 1.0).abs() < 1e-12);
            // unsharp expectation is λ times the sharp one
            let sharp = qcore::expectation(&spin_along(obs.direction()), &rho).unwrap();
            prop_assert!((obs.expectation(&rho).unwrap() - lam * sharp).abs() < 1e-12);
        }

        #[test]
        fn sharp_update_is_projective_collapse(
            theta in 0.0..std::f64::consts::PI, phi in 0.0..6.3f64,
            a in 0.0..3.2f64, b in 0.0..6.3f64, c in 0.0..1.0f64, w in 0.0..0.9f64,
        ) {
            let obs = UnsharpObservable::new(unit(theta, phi), 1.0).unwrap();
            let rho = random_qubit_state(a, b, c, w);
            for o in Outcome::ALL {
                let p = obs.projector(o);
                let collapsed = p.sandwich(rho.matrix());
                let want = DensityMatrix::new(collapsed.scale(1.0 / collapsed.trace().re)).unwrap();
                let got = obs.luders_update(o, &rho).unwrap();
                prop_assert!(got.trace_distance(&want).unwrap() < 1e-12);
            }
        }

        #[test]
        fn rom_is_monotone(l1 in 1e-6..=1.0f64, l2 in 1e-6..=1.0f64) {
            let (lo, hi) = if l1 <= l2 { (l1, l2) } else { (l2, l1) };
            let a = UnsharpObservable::along(Pauli::Y, lo).unwrap().rom().unwrap();
            let b = UnsharpObservable::along(Pauli::Y, hi).unwrap().rom().unwrap();
            prop_assert!(a <= b + 1e-12);
        }
    }
}
