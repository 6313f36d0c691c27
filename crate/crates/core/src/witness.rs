//! Entanglement witnesses in the two-qubit Pauli basis.
//!
//! A witness is stored as real weights `c[i][j]` on `σᵢ ⊗ σⱼ` with
//! `σ₀ = 𝕀`. Unsharp measurement by the two wings with sharpness `ξ` and
//! `λ` rescales correlation terms by `ξλ`, Alice-local terms by `ξ` and
//! Bob-local terms by `λ`; the identity weight is unchanged.

use std::sync::LazyLock;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measurement::check_sharpness;
use crate::qcore::{
    self, eigen_hermitian, partial_transpose_b, pauli, tensor, tensor_vec, trace_product, ComplexMatrix,
    DensityMatrix, Pauli, C64,
};
use crate::states::StateFamily;
use crate::tolerance;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessOperator {
    coefficients: [[f64; 4]; 4],
    modulation: Option<(f64, f64)>,
}

/// Expectation of a witness split by which wings its terms touch.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WitnessParts {
    pub identity: f64,
    pub local_a: f64,
    pub local_b: f64,
    pub correlation: f64,
}

impl WitnessParts {
    pub fn modulated(&self, xi: f64, lambda: f64) -> f64 {
        self.identity + xi * self.local_a + lambda * self.local_b + xi * lambda * self.correlation
    }
}

impl WitnessOperator {
    pub fn from_coefficients(coefficients: [[f64; 4]; 4]) -> Self {
        Self {
            coefficients,
            modulation: None,
        }
    }

    pub fn zero() -> Self {
        Self::from_coefficients([[0.0; 4]; 4])
    }

    /// `¼(𝕀⊗𝕀 + σz⊗σz − σx⊗σx − σy⊗σy)`, optimal for `|ψ⁺>`.
    pub fn psi_plus() -> Self {
        let mut c = [[0.0; 4]; 4];
        c[0][0] = 0.25;
        c[3][3] = 0.25;
        c[1][1] = -0.25;
        c[2][2] = -0.25;
        Self::from_coefficients(c)
    }

    /// `¼(𝕀⊗𝕀 − σx⊗σx + σy⊗σy − σz⊗σz)`, optimal for the colored-noise family.
    pub fn phi_colored() -> Self {
        let mut c = [[0.0; 4]; 4];
        c[0][0] = 0.25;
        c[1][1] = -0.25;
        c[2][2] = 0.25;
        c[3][3] = -0.25;
        Self::from_coefficients(c)
    }

    /// The witness each state family is paired with.
    pub fn for_family(family: &StateFamily) -> Self {
        match family {
            StateFamily::ColoredNoise { .. } => Self::phi_colored(),
            _ => Self::psi_plus(),
        }
    }

    /// Pauli decomposition `c_ij = Tr(M σᵢ⊗σⱼ)/4` of a Hermitian 4x4 operator.
    pub fn from_matrix(m: &ComplexMatrix) -> Result<Self> {
        if m.dim() != 4 {
            return Err(Error::DimensionMismatch(m.dim(), 4));
        }
        let defect = m.hermiticity_defect();
        if defect > tolerance::VALIDATE {
            return Err(Error::NotHermitian(defect));
        }
        let mut c = [[0.0; 4]; 4];
        for a in Pauli::ALL {
            for b in Pauli::ALL {
                let basis = &pauli_basis()[a.index()][b.index()];
                c[a.index()][b.index()] = trace_product(m, basis)?.re / 4.0;
            }
        }
        Ok(Self::from_coefficients(c))
    }

    /// Witness `(|v><v|)^{T_B}` from the unique negative eigenvector `v` of `ρ^{T_B}`.
    pub fn from_state(rho: &DensityMatrix) -> Result<Self> {
        let pt = partial_transpose_b(rho.matrix())?;
        let eig = eigen_hermitian(&pt)?;
        let negatives: Vec<usize> = eig
            .values
            .iter()
            .enumerate()
            .filter(|(_, &x)| x < -tolerance::ORACLE)
            .map(|(i, _)| i)
            .collect();
        match negatives.len() {
            0 => Err(Error::PositivePartialTranspose),
            1 => {
                let projector = ComplexMatrix::outer(&eig.vectors[negatives[0]])?;
                Self::from_matrix(&partial_transpose_b(&projector)?)
            }
            n => Err(Error::DegenerateNegativeSpectrum(n)),
        }
    }

    pub fn coefficients(&self) -> &[[f64; 4]; 4] {
        &self.coefficients
    }

    pub fn modulation(&self) -> Option<(f64, f64)> {
        self.modulation
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(4).expect("dim 4");
        for a in Pauli::ALL {
            for b in Pauli::ALL {
                let w = self.coefficients[a.index()][b.index()];
                if w != 0.0 {
                    m = &m + &pauli_basis()[a.index()][b.index()].scale(w);
                }
            }
        }
        m
    }

    /// Coefficients after sharpness scaling, without the single-modulation guard.
    pub fn scaled_coefficients(&self, xi: f64, lambda: f64) -> [[f64; 4]; 4] {
        let mut c = self.coefficients;
        for (i, row) in c.iter_mut().enumerate() {
            for (j, w) in row.iter_mut().enumerate() {
                if i != 0 {
                    *w *= xi;
                }
                if j != 0 {
                    *w *= lambda;
                }
            }
        }
        c
    }

    /// `W^{(ξ,λ)}`; the one-sided form is `ξ = 1`.
    pub fn modulate(&self, xi: f64, lambda: f64) -> Result<Self> {
        if self.modulation.is_some() {
            return Err(Error::AlreadyModulated);
        }
        check_sharpness("xi", xi)?;
        check_sharpness("lambda", lambda)?;
        Ok(Self {
            coefficients: self.scaled_coefficients(xi, lambda),
            modulation: Some((xi, lambda)),
        })
    }

    pub fn expectation(&self, rho: &DensityMatrix) -> Result<f64> {
        qcore::expectation(&self.to_matrix(), rho)
    }

    /// Expectation split into identity, local and correlation contributions.
    pub fn parts(&self, rho: &DensityMatrix) -> Result<WitnessParts> {
        let mut parts = WitnessParts {
            identity: 0.0,
            local_a: 0.0,
            local_b: 0.0,
            correlation: 0.0,
        };
        for a in Pauli::ALL {
            for b in Pauli::ALL {
                let w = self.coefficients[a.index()][b.index()];
                if w == 0.0 {
                    continue;
                }
                let v = w * trace_product(&pauli_basis()[a.index()][b.index()], rho.matrix())?.re;
                match (a, b) {
                    (Pauli::I, Pauli::I) => parts.identity += v,
                    (_, Pauli::I) => parts.local_a += v,
                    (Pauli::I, _) => parts.local_b += v,
                    _ => parts.correlation += v,
                }
            }
        }
        Ok(parts)
    }

    /// Largest absolute coefficient difference.
    pub fn coefficient_distance(&self, other: &Self) -> f64 {
        self.coefficients
            .iter()
            .flatten()
            .zip(other.coefficients.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Minimum expectation over `samples` Haar-random pure product states.
    pub fn separability_floor<R: Rng + ?Sized>(&self, samples: usize, rng: &mut R) -> f64 {
        let m = self.to_matrix();
        let mut floor = f64::INFINITY;
        for _ in 0..samples.max(1) {
            let psi = tensor_vec(&haar_qubit(rng), &haar_qubit(rng));
            let v: C64 = psi.iter().zip(m.apply(&psi)).map(|(a, b)| a.conj() * b).sum();
            floor = floor.min(v.re);
        }
        floor
    }
}

/// `σᵢ ⊗ σⱼ` for all sixteen Pauli pairs.
pub fn pauli_basis() -> &'static [[ComplexMatrix; 4]; 4] {
    static BASIS: LazyLock<[[ComplexMatrix; 4]; 4]> = LazyLock::new(|| {
        Pauli::ALL.map(|a| Pauli::ALL.map(|b| tensor(&pauli(a), &pauli(b)).expect("dim 4")))
    });
    &BASIS
}

/// Haar-random pure qubit state: uniform point on the Bloch sphere.
pub fn haar_qubit<R: Rng + ?Sized>(rng: &mut R) -> [C64; 2] {
    let cos_theta: f64 = rng.gen_range(-1.0..=1.0);
    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let half = cos_theta.acos() / 2.0;
    [C64::new(half.cos(), 0.0), C64::from_polar(half.sin(), phi)]
}
