//! Generalized Gell-Mann generators of SU(d) and the bidirectional map
//! between trace-one Hermitian matrices and their Bloch coordinates.
//!
//! The basis is fixed in the eigenbasis of the von Neumann measurement,
//! with the *middle* level distinguished by the diagonal generators:
//! `λ3 = diag(1, 0, -1)` and `λ8 = diag(1, -2, 1)/√3`.  All index
//! conventions downstream (symmetry transformations in particular)
//! reference this ordering.

use nalgebra::{DMatrix, Matrix3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SQRT_3: f64 = 1.732_050_807_568_877_2;

pub type CMat3 = Matrix3<Complex64>;

/// A complex square matrix validated to be Hermitian.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    entries: DMatrix<Complex64>,
}

impl HermitianMatrix {
    /// Wraps a matrix, checking Hermiticity entrywise to 1e-12.
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::InvalidState("matrix is not square".into()));
        }
        for i in 0..entries.nrows() {
            for j in 0..=i {
                let d = entries[(i, j)] - entries[(j, i)].conj();
                if d.norm() > 1e-12 {
                    return Err(Error::InvalidState(format!(
                        "matrix is not Hermitian at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(Self { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    /// Frobenius inner product tr(AB) of two Hermitian matrices (real).
    pub fn frobenius_product(&self, other: &Self) -> f64 {
        (&self.entries * &other.entries).trace().re
    }
}

/// A 3x3 statistical operator in the measurement eigenbasis.
///
/// `new` enforces the invariants (Hermitian, unit trace, eigenvalues
/// above -1e-10).  Values produced by [`rho_from_bloch`] are Hermitian
/// and trace-one by construction but are *not* positivity-checked;
/// membership of the Bloch vector in the Bloch body is a separate
/// predicate (`bloch_geometry::chi_b`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    m: CMat3,
}

impl DensityMatrix {
    pub fn new(m: CMat3) -> Result<Self> {
        let rho = Self { m };
        rho.validate()?;
        Ok(rho)
    }

    /// Diagonal statistical operator from a probability vector.
    pub fn from_diagonal(p: [f64; 3]) -> Self {
        let mut m = CMat3::zeros();
        for i in 0..3 {
            m[(i, i)] = Complex64::new(p[i], 0.0);
        }
        Self { m }
    }

    pub(crate) fn from_matrix_unchecked(m: CMat3) -> Self {
        Self { m }
    }

    pub fn matrix(&self) -> &CMat3 {
        &self.m
    }

    pub fn validate(&self) -> Result<()> {
        for i in 0..3 {
            for j in 0..=i {
                if (self.m[(i, j)] - self.m[(j, i)].conj()).norm() > 1e-12 {
                    return Err(Error::InvalidState("density matrix is not Hermitian".into()));
                }
            }
        }
        if (self.m.trace().re - 1.0).abs() > 1e-12 || self.m.trace().im.abs() > 1e-12 {
            return Err(Error::InvalidState("density matrix trace is not 1".into()));
        }
        if self.min_eigenvalue() < -1e-10 {
            return Err(Error::InvalidState(
                "density matrix has a negative eigenvalue".into(),
            ));
        }
        Ok(())
    }

    /// Smallest eigenvalue, via Hermitian eigendecomposition.
    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_min_eigenvalue(&DMatrix::from_fn(3, 3, |i, j| self.m[(i, j)]))
    }

    pub fn diagonal(&self) -> [f64; 3] {
        [self.m[(0, 0)].re, self.m[(1, 1)].re, self.m[(2, 2)].re]
    }
}

/// Smallest eigenvalue of a Hermitian matrix, computed through the
/// real-symmetric embedding [[Re, −Im], [Im, Re]], whose spectrum is
/// that of the Hermitian matrix with doubled multiplicity.  (The
/// symmetric eigensolver is only reliable for real matrices.)
pub fn hermitian_min_eigenvalue(m: &DMatrix<Complex64>) -> f64 {
    let d = m.nrows();
    assert!(m.is_square());
    let mut s = nalgebra::DMatrix::<f64>::zeros(2 * d, 2 * d);
    for i in 0..d {
        for j in 0..d {
            s[(i, j)] = m[(i, j)].re;
            s[(i + d, j + d)] = m[(i, j)].re;
            s[(i, j + d)] = -m[(i, j)].im;
            s[(i + d, j)] = m[(i, j)].im;
        }
    }
    s.symmetric_eigenvalues()
        .iter()
        .fold(f64::INFINITY, |a, &b| a.min(b))
}

/// Point of R^8 parametrizing a trace-one Hermitian operator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector(pub [f64; 8]);

impl BlochVector {
    pub fn zero() -> Self {
        Self([0.0; 8])
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum()
    }

    pub fn distance_sq(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }
}

fn basis_unit(d: usize, i: usize, j: usize, v: Complex64) -> DMatrix<Complex64> {
    let mut m = DMatrix::zeros(d, d);
    m[(i, j)] = v;
    m[(j, i)] = v.conj();
    m
}

/// The d²−1 generalized Gell-Mann generators: Hermitian, traceless,
/// tr(λᵢλⱼ) = 2δᵢⱼ.  For d = 2 these are the Pauli matrices; for d = 3
/// the convention distinguishes the middle level, so λ3 = diag(1, 0, −1)
/// and λ8 = diag(1, −2, 1)/√3.
pub fn gellmann_basis(d: usize) -> Result<Vec<HermitianMatrix>> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let mut out = Vec::with_capacity(d * d - 1);
    for k in 1..d {
        for j in 0..k {
            out.push(HermitianMatrix {
                entries: basis_unit(d, j, k, Complex64::new(1.0, 0.0)),
            });
            out.push(HermitianMatrix {
                entries: basis_unit(d, j, k, Complex64::new(0.0, -1.0)),
            });
        }
        // Diagonal generator following the off-diagonal pairs of column k.
        let l = k; // 1..d-1
        let norm = (2.0 / (l as f64 * (l + 1) as f64)).sqrt();
        let mut diag = vec![0.0; d];
        for m in 0..l {
            diag[m] = norm;
        }
        diag[l] = -(l as f64) * norm;
        if d == 3 {
            // Middle-level convention: the distinguished level sits in the
            // second slot, so the diagonal entries of slots 2 and 3 swap.
            diag.swap(1, 2);
        }
        let mut m = DMatrix::zeros(d, d);
        for (i, v) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(*v, 0.0);
        }
        out.push(HermitianMatrix { entries: m });
    }
    Ok(out)
}

/// ρ(x) = I/3 + ½ Σ xⱼ λⱼ, written out entrywise.  Positivity is NOT
/// checked here.
pub fn rho_from_bloch(x: &BlochVector) -> DensityMatrix {
    let [x1, x2, x3, x4, x5, x6, x7, x8] = x.0;
    let t = 1.0 / 3.0;
    let c = Complex64::new;
    let m = CMat3::new(
        c(t + 0.5 * (x3 + x8 / SQRT_3), 0.0),
        c(0.5 * x1, -0.5 * x2),
        c(0.5 * x4, -0.5 * x5),
        c(0.5 * x1, 0.5 * x2),
        c(t - x8 / SQRT_3, 0.0),
        c(0.5 * x6, -0.5 * x7),
        c(0.5 * x4, 0.5 * x5),
        c(0.5 * x6, 0.5 * x7),
        c(t + 0.5 * (-x3 + x8 / SQRT_3), 0.0),
    );
    DensityMatrix::from_matrix_unchecked(m)
}

/// xⱼ = tr(λⱼ ρ) for a Hermitian unit-trace matrix.
pub fn bloch_from_rho(rho: &CMat3) -> Result<BlochVector> {
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > 1e-9 || tr.im.abs() > 1e-9 {
        return Err(Error::InvalidState(format!(
            "trace {} is not 1 within 1e-9",
            tr.re
        )));
    }
    Ok(BlochVector([
        2.0 * rho[(0, 1)].re,
        2.0 * rho[(1, 0)].im,
        rho[(0, 0)].re - rho[(2, 2)].re,
        2.0 * rho[(0, 2)].re,
        2.0 * rho[(2, 0)].im,
        2.0 * rho[(1, 2)].re,
        2.0 * rho[(2, 1)].im,
        (rho[(0, 0)].re - 2.0 * rho[(1, 1)].re + rho[(2, 2)].re) / SQRT_3,
    ]))
}
