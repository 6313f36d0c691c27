//! Cyclic Jacobi eigensolver for small Hermitian matrices.

use super::{ComplexMatrix, C64, ZERO};
use crate::error::{Error, Result};
use crate::tolerance;

const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition `M = V Λ V†` with ascending eigenvalues.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<f64>,
    /// `vectors[k]` is the normalised eigenvector for `values[k]`.
    pub vectors: Vec<Vec<C64>>,
}

impl Eigen {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.values.len();
        let mut m = ComplexMatrix::zeros(n).expect("valid dim");
        for (val, v) in self.values.iter().zip(&self.vectors) {
            let p = ComplexMatrix::outer(v).expect("valid dim");
            m = &m + &p.scale(*val);
        }
        m
    }
}

fn off_diagonal_mass(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                s += a.get(r, c).norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Diagonalises a Hermitian matrix by cyclic complex Jacobi rotations.
pub fn eigen_hermitian(m: &ComplexMatrix) -> Result<Eigen> {
    let defect = m.hermiticity_defect();
    if defect > tolerance::VALIDATE {
        return Err(Error::NotHermitian(defect));
    }
    let n = m.dim();
    // symmetrise away round-off
    let mut a = (m + &m.adjoint()).scale(0.5);
    let mut v = ComplexMatrix::identity(n)?;
    let scale = a.entries().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(1.0);

    let mut sweeps = 0;
    while off_diagonal_mass(&a) > tolerance::JACOBI * scale {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence(off_diagonal_mass(&a)));
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let g = a.get(p, q);
                let mag = g.norm();
                if mag < 1e-300 {
                    continue;
                }
                let phase = g / mag;
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // J = diag(1, e^{-iφ}) · [[c, s], [-s, c]] on the (p, q) plane
                let mut j = ComplexMatrix::identity(n)?;
                j.set(p, p, C64::new(c, 0.0));
                j.set(p, q, C64::new(s, 0.0));
                j.set(q, p, -phase.conj() * s);
                j.set(q, q, phase.conj() * c);
                a = &(&j.adjoint() * &a) * &j;
                a.set(p, q, ZERO);
                a.set(q, p, ZERO);
                v = &v * &j;
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &k| a.get(i, i).re.total_cmp(&a.get(k, k).re));
    let values = order.iter().map(|&i| a.get(i, i).re).collect();
    let vectors = order
        .iter()
        .map(|&i| (0..n).map(|r| v.get(r, i)).collect())
        .collect();
    Ok(Eigen { values, vectors })
}

/// Spectral norm: the largest eigenvalue of `√(M†M)`.
pub fn operator_norm(m: &ComplexMatrix) -> Result<f64> {
    let gram = &m.adjoint() * m;
    let eig = eigen_hermitian(&gram)?;
    Ok(eig.values.last().copied().unwrap_or(0.0).max(0.0).sqrt())
}

/// Singular values in descending order, by one-sided (Hestenes) Jacobi.
///
/// Works on the columns directly, so small singular values keep an
/// absolute error near machine precision instead of its square root.
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let n = m.dim();
    let mut cols: Vec<Vec<C64>> = (0..n).map(|c| (0..n).map(|r| m.get(r, c)).collect()).collect();
    let dot = |a: &[C64], b: &[C64]| -> C64 { a.iter().zip(b).map(|(x, y)| x.conj() * y).sum() };
    for sweep in 0.. {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha = dot(&cols[p], &cols[p]).re;
                let beta = dot(&cols[q], &cols[q]).re;
                let gamma = dot(&cols[p], &cols[q]);
                let g = gamma.norm();
                if g <= 1e-15 * (alpha * beta).sqrt() || g < 1e-300 {
                    continue;
                }
                rotated = true;
                let phase = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (left, right) = cols.split_at_mut(q);
                for (x, y) in left[p].iter_mut().zip(right[0].iter_mut()) {
                    let (u, v) = (*x, *y * phase);
                    *x = u * c - v * s;
                    *y = u * s + v * c;
                }
            }
        }
        if !rotated {
            break;
        }
        if sweep == MAX_SWEEPS {
            return Err(Error::NoConvergence(f64::NAN));
        }
    }
    let mut values: Vec<f64> = cols.iter().map(|c| dot(c, c).re.sqrt()).collect();
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}
