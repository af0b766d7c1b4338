//! Parametrized single-qubit projective bases and the product dephasing channel.
//!
//! Site `j` is measured in the basis `{R_j|0>, R_j|1>}` with
//! `R(theta, phi) = cos(theta) I + i sin(theta) cos(phi) Y + i sin(theta) sin(phi) X`.
//! The measured Bloch axis is `(-sin 2theta cos phi, sin 2theta sin phi, cos 2theta)`,
//! so the unordered projector pair is unchanged by `theta -> theta + pi/2` and by
//! `(theta, phi) -> (pi/2 - theta, phi + pi)`. Angles are stored in the
//! fundamental domain `theta in [0, pi/2]`, `phi in [0, pi)`.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;
use serde::Serialize;

use crate::qstate::DensityMatrix;
use crate::{Error, Result};

/// Per-qubit measurement angles `(theta_j, phi_j)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct AngleSet(Vec<(f64, f64)>);

impl AngleSet {
    /// Normalizes every pair into the fundamental domain.
    pub fn new(pairs: Vec<(f64, f64)>) -> Self {
        Self(pairs.into_iter().map(|(t, p)| normalize_pair(t, p)).collect())
    }

    /// Computational basis on every qubit.
    pub fn zeros(n: usize) -> Self {
        Self(vec![(0.0, 0.0); n])
    }

    pub fn uniform(n: usize, theta: f64, phi: f64) -> Self {
        Self::new(vec![(theta, phi); n])
    }

    /// Reads `[theta_0, phi_0, theta_1, phi_1, ...]`.
    pub fn from_flat(flat: &[f64]) -> Self {
        Self::new(flat.chunks_exact(2).map(|c| (c[0], c[1])).collect())
    }

    pub fn to_flat(&self) -> Vec<f64> {
        self.0.iter().flat_map(|&(t, p)| [t, p]).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pairs(&self) -> &[(f64, f64)] {
        &self.0
    }

    /// Angles of the listed qubits, in the listed order.
    pub fn restrict(&self, qubits: &[usize]) -> Result<Self> {
        qubits
            .iter()
            .map(|&q| {
                self.0.get(q).copied().ok_or(Error::IndexOutOfRange {
                    index: q,
                    n_qubits: self.0.len(),
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }

    pub(crate) fn rotations(&self) -> Vec<Matrix2<Complex64>> {
        self.0.iter().map(|&(t, p)| site_rotation(t, p)).collect()
    }
}

/// Maps `(theta, phi)` into `theta in [0, pi/2]`, `phi in [0, pi)` without
/// changing the projector pair.
pub fn normalize_pair(theta: f64, phi: f64) -> (f64, f64) {
    let mut t = theta.rem_euclid(FRAC_PI_2);
    let mut p = phi.rem_euclid(2.0 * PI);
    if p >= PI {
        p -= PI;
        t = FRAC_PI_2 - t;
    }
    // rem_euclid can return the modulus itself for tiny negative inputs
    if p >= PI {
        p = 0.0;
    }
    (t, p)
}

/// Single-site rotation `R(theta, phi)`.
pub fn site_rotation(theta: f64, phi: f64) -> Matrix2<Complex64> {
    let (s, c) = theta.sin_cos();
    let e = Complex64::from_polar(s, phi);
    Matrix2::new(Complex64::new(c, 0.0), e, -e.conj(), Complex64::new(c, 0.0))
}

/// The projector pair `{R|0><0|R^dagger, R|1><1|R^dagger}`.
pub fn site_basis(theta: f64, phi: f64) -> [Matrix2<Complex64>; 2] {
    let r = site_rotation(theta, phi);
    let v0 = r.column(0);
    let v1 = r.column(1);
    [v0 * v0.adjoint(), v1 * v1.adjoint()]
}

/// `R = R_0 (x) R_1 (x) ... (x) R_{n-1}` as a dense matrix.
pub fn product_rotation(angles: &AngleSet) -> DMatrix<Complex64> {
    angles.rotations().iter().fold(
        DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0)),
        |acc, r| {
            let site = DMatrix::from_column_slice(2, 2, r.as_slice());
            acc.kronecker(&site)
        },
    )
}

/// Applies `U` to qubit `site` of an `n`-qubit amplitude vector in place.
pub(crate) fn apply_site(amps: &mut [Complex64], site: usize, n: usize, u: &Matrix2<Complex64>) {
    let mask = 1usize << (n - 1 - site);
    for i0 in 0..amps.len() {
        if i0 & mask != 0 {
            continue;
        }
        let i1 = i0 | mask;
        let (a0, a1) = (amps[i0], amps[i1]);
        amps[i0] = u[(0, 0)] * a0 + u[(0, 1)] * a1;
        amps[i1] = u[(1, 0)] * a0 + u[(1, 1)] * a1;
    }
}

fn check_angles(rho: &DensityMatrix, angles: &AngleSet) -> Result<()> {
    if angles.len() != rho.n_qubits() {
        return Err(Error::AngleCountMismatch {
            expected: rho.n_qubits(),
            found: angles.len(),
        });
    }
    Ok(())
}

/// Outcome distribution `diag(R^dagger rho R)` of the product measurement.
pub fn rotated_diagonal(rho: &DensityMatrix, angles: &AngleSet) -> Result<Vec<f64>> {
    check_angles(rho, angles)?;
    let r = product_rotation(angles);
    let m = rho.matrix();
    let dim = rho.dim();
    // (R^dagger rho R)_kk = sum_ij conj(R_ik) rho_ij R_jk
    let rho_r = m * &r;
    Ok((0..dim)
        .map(|k| {
            (0..dim)
                .map(|i| r[(i, k)].conj() * rho_r[(i, k)])
                .sum::<Complex64>()
                .re
        })
        .collect())
}

/// Non-selective product measurement `Phi(rho) = sum_k Pi_k rho Pi_k`,
/// computed as `R diag(R^dagger rho R) R^dagger`.
pub fn dephase(rho: &DensityMatrix, angles: &AngleSet) -> Result<DensityMatrix> {
    let diag = rotated_diagonal(rho, angles)?;
    let r = product_rotation(angles);
    let scaled = DMatrix::from_fn(r.nrows(), r.ncols(), |i, k| r[(i, k)] * diag[k]);
    Ok(DensityMatrix::from_valid(scaled * r.adjoint()))
}
