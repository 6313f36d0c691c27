//! Dense complex linear algebra for one- and two-qubit operators.

mod eigen;
mod entanglement;

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerance;

pub use eigen::{eigen_hermitian, operator_norm, singular_values, Eigen};
pub use entanglement::{concurrence_wootters, partial_transpose_b};

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Square complex matrix of dimension 2 or 4, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<C64>,
}

fn check_dim(dim: usize) -> Result<()> {
    match dim {
        2 | 4 => Ok(()),
        d => Err(Error::InvalidDimension(d)),
    }
}

impl ComplexMatrix {
    pub fn new(dim: usize, entries: Vec<C64>) -> Result<Self> {
        check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(Error::EntryCount {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        Ok(Self { dim, entries })
    }

    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        Self::new(dim, entries.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            entries: vec![ZERO; dim * dim],
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m.entries[i * dim + i] = ONE;
        }
        Ok(m)
    }

    /// `|v><v|` for a state vector `v`.
    pub fn outer(v: &[C64]) -> Result<Self> {
        let dim = v.len();
        check_dim(dim)?;
        let mut entries = Vec::with_capacity(dim * dim);
        for a in v {
            for b in v {
                entries.push(a * b.conj());
            }
        }
        Ok(Self { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: C64) {
        self.entries[row * self.dim + col] = value;
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut entries = vec![ZERO; n * n];
        for r in 0..n {
            for c in 0..n {
                entries[c * n + r] = self.entries[r * n + c].conj();
            }
        }
        Self { dim: n, entries }
    }

    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn scale(&self, k: f64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * k).collect(),
        }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from hermiticity.
    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim, "dimension mismatch");
        (0..self.dim)
            .map(|r| (0..self.dim).map(|c| self.get(r, c) * v[c]).sum())
            .collect()
    }

    /// `M A M†`, the sandwich used by Lüders-type updates.
    pub fn sandwich(&self, a: &Self) -> Self {
        &(self * a) * &self.adjoint()
    }

    /// Trace distance `½‖A − B‖₁` between Hermitian operators.
    pub fn trace_distance(&self, other: &Self) -> Result<f64> {
        let diff = self - other;
        let eig = eigen_hermitian(&diff)?;
        Ok(0.5 * eig.values.iter().map(|x| x.abs()).sum::<f64>())
    }
}

impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut entries = vec![ZERO; n * n];
        for r in 0..n {
            for k in 0..n {
                let a = self.entries[r * n + k];
                if a == ZERO {
                    continue;
                }
                for c in 0..n {
                    entries[r * n + c] += a * rhs.entries[k * n + c];
                }
            }
        }
        ComplexMatrix { dim: n, entries }
    }
}

impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|c| {
                    let z = self.get(r, c);
                    format!("{:+.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Single-qubit Pauli operators and the identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
    pub const AXES: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn matrix(self) -> ComplexMatrix {
        pauli(self)
    }
}

/// The 2x2 matrix for a Pauli axis or the identity.
pub fn pauli(axis: Pauli) -> ComplexMatrix {
    let i = C64::new(0.0, 1.0);
    let entries = match axis {
        Pauli::I => vec![ONE, ZERO, ZERO, ONE],
        Pauli::X => vec![ZERO, ONE, ONE, ZERO],
        Pauli::Y => vec![ZERO, -i, i, ZERO],
        Pauli::Z => vec![ONE, ZERO, ZERO, -ONE],
    };
    ComplexMatrix { dim: 2, entries }
}

/// `σ·n̂` for a real 3-vector `n`.
pub fn spin_along(n: [f64; 3]) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2).expect("dim 2");
    for (axis, &w) in Pauli::AXES.iter().zip(n.iter()) {
        m = &m + &pauli(*axis).scale(w);
    }
    m
}

/// Kronecker product. Results wider than two qubits are rejected.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.dim * b.dim;
    check_dim(n)?;
    let mut entries = vec![ZERO; n * n];
    for ar in 0..a.dim {
        for ac in 0..a.dim {
            let x = a.get(ar, ac);
            for br in 0..b.dim {
                for bc in 0..b.dim {
                    entries[(ar * b.dim + br) * n + ac * b.dim + bc] = x * b.get(br, bc);
                }
            }
        }
    }
    Ok(ComplexMatrix { dim: n, entries })
}

/// Kronecker product of two state vectors.
pub fn tensor_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

/// `Tr(obs · ρ)` for a Hermitian observable.
pub fn expectation(obs: &ComplexMatrix, rho: &DensityMatrix) -> Result<f64> {
    let defect = obs.hermiticity_defect();
    if defect > tolerance::VALIDATE {
        return Err(Error::NotHermitian(defect));
    }
    Ok(trace_product(obs, rho.matrix())?.re)
}

/// `Tr(A·B)` without forming the product.
pub fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<C64> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch(a.dim, b.dim));
    }
    let n = a.dim;
    let mut acc = ZERO;
    for r in 0..n {
        for k in 0..n {
            acc += a.entries[r * n + k] * b.entries[k * n + r];
        }
    }
    Ok(acc)
}

/// A validated density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let defect = matrix.hermiticity_defect();
        if defect > tolerance::VALIDATE {
            return Err(Error::NotHermitian(defect));
        }
        let tr = matrix.trace();
        if (tr - ONE).norm() > tolerance::VALIDATE {
            return Err(Error::NotUnitTrace(tr.re));
        }
        let eig = eigen_hermitian(&matrix)?;
        let min = eig.values[0];
        if min < tolerance::POSITIVITY {
            return Err(Error::NotPositive(min));
        }
        Ok(Self { matrix })
    }

    /// Pure state `|ψ><ψ|`; `psi` is normalised first.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let v: Vec<C64> = psi.iter().map(|z| z / norm).collect();
        Self::new(ComplexMatrix::outer(&v)?)
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        Self::new(ComplexMatrix::identity(dim)?.scale(1.0 / dim as f64))
    }

    pub fn product(a: &DensityMatrix, b: &DensityMatrix) -> Result<Self> {
        Self::new(tensor(&a.matrix, &b.matrix)?)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn trace_distance(&self, other: &DensityMatrix) -> Result<f64> {
        self.matrix.trace_distance(&other.matrix)
    }
}

impl AsRef<ComplexMatrix> for DensityMatrix {
    fn as_ref(&self) -> &ComplexMatrix {
        &self.matrix
    }
}
