use super::eigen::{eigen_hermitian, singular_values};
use super::{pauli, tensor, ComplexMatrix, DensityMatrix, Pauli};
use crate::error::{Error, Result};

/// Transposes the second-qubit indices of a 4x4 operator.
///
/// Basis order is |00>, |01>, |10>, |11>, so entry `(2a+b, 2a'+b')` moves
/// to `(2a+b', 2a'+b)`.
pub fn partial_transpose_b(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if m.dim() != 4 {
        return Err(Error::DimensionMismatch(m.dim(), 4));
    }
    let mut out = ComplexMatrix::zeros(4)?;
    for a in 0..2 {
        for b in 0..2 {
            for a2 in 0..2 {
                for b2 in 0..2 {
                    out.set(2 * a + b2, 2 * a2 + b, m.get(2 * a + b, 2 * a2 + b2));
                }
            }
        }
    }
    Ok(out)
}

/// Wootters concurrence `max(0, s₁ − s₂ − s₃ − s₄)`.
///
/// With `ρ = B B†` from the spectral decomposition, the `sᵢ` are the
/// singular values of `τ = Bᵀ (σy⊗σy) B`, which equal the square roots of
/// the eigenvalues of `√ρ ρ̃ √ρ`.
pub fn concurrence_wootters(rho: &DensityMatrix) -> Result<f64> {
    let m = rho.matrix();
    if m.dim() != 4 {
        return Err(Error::DimensionMismatch(m.dim(), 4));
    }
    let yy = tensor(&pauli(Pauli::Y), &pauli(Pauli::Y))?;
    let eig = eigen_hermitian(m)?;
    let mut b = ComplexMatrix::zeros(4)?;
    for (k, (val, vec)) in eig.values.iter().zip(&eig.vectors).enumerate() {
        let w = val.max(0.0).sqrt();
        for (r, z) in vec.iter().enumerate() {
            b.set(r, k, z * w);
        }
    }
    let bt = ComplexMatrix::new(4, (0..16).map(|i| b.get(i % 4, i / 4)).collect())?;
    let tau = &(&bt * &yy) * &b;
    let s = singular_values(&tau)?;
    Ok((s[0] - s[1] - s[2] - s[3]).clamp(0.0, 1.0))
}
