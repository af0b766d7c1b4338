//! Dense density matrices on qubit registers and the entropic primitives.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::{Error, Result};

/// Max-abs deviation from Hermiticity accepted for a state.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Accepted deviation of the trace from one.
pub const TRACE_TOL: f64 = 1e-10;
/// Eigenvalues in `[EIGEN_FLOOR, 0)` are clamped to zero; lower ones are rejected.
pub const EIGEN_FLOOR: f64 = -1e-10;

/// Hermitian, positive-semidefinite, unit-trace operator on `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    matrix: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Validates `matrix` and stores its Hermitian part.
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        let n_qubits = register_size(&matrix)?;
        let deviation = hermitian_deviation(&matrix);
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian(deviation));
        }
        let matrix = hermitize(&matrix);
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::BadTrace(trace));
        }
        let rho = Self { n_qubits, matrix };
        let min = rho.raw_eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min < EIGEN_FLOOR {
            return Err(Error::NegativeEigenvalue(min));
        }
        Ok(rho)
    }

    /// Rank-one state `|psi><psi|`; the amplitudes are normalized here.
    pub fn from_pure(amplitudes: &[Complex64]) -> Result<Self> {
        let dim = amplitudes.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::InvalidState(format!(
                "state vector length {dim} is not a power of two >= 2"
            )));
        }
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::InvalidState("state vector has zero norm".into()));
        }
        let v = DVector::from_iterator(dim, amplitudes.iter().map(|a| a / norm));
        let matrix = &v * v.adjoint();
        Ok(Self::from_valid(matrix))
    }

    /// `I / 2^n`.
    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        let matrix = DMatrix::from_diagonal_element(dim, dim, Complex64::new(1.0 / dim as f64, 0.0));
        Self { n_qubits, matrix }
    }

    /// Builds a state from a matrix the caller already knows to be valid
    /// (partial traces, channels, Gram constructions). Hermitizes only.
    pub(crate) fn from_valid(matrix: DMatrix<Complex64>) -> Self {
        let n_qubits = matrix.nrows().trailing_zeros() as usize;
        Self {
            n_qubits,
            matrix: hermitize(&matrix),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Eigenvalues in ascending order, clamped into `[0, 1]`.
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.raw_eigenvalues()
            .into_iter()
            .map(|l| l.clamp(0.0, 1.0))
            .collect()
    }

    fn raw_eigenvalues(&self) -> Vec<f64> {
        let mut values: Vec<f64> = hermitian_eigen(&self.matrix).0.iter().copied().collect();
        values.sort_by(f64::total_cmp);
        values
    }

    /// Eigenpairs with weight above `cutoff`, ordered by descending weight.
    pub fn spectrum(&self, cutoff: f64) -> Vec<(f64, DVector<Complex64>)> {
        let (values, vectors) = hermitian_eigen(&self.matrix);
        let mut pairs: Vec<(f64, DVector<Complex64>)> = values
            .iter()
            .enumerate()
            .filter(|(_, &l)| l > cutoff)
            .map(|(i, &l)| (l, vectors.column(i).into_owned()))
            .collect();
        pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
        pairs
    }

    /// `<psi| rho |psi>` for a normalized `psi`.
    pub fn fidelity_with_pure(&self, psi: &[Complex64]) -> Result<f64> {
        if psi.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: psi.len(),
            });
        }
        let v = DVector::from_column_slice(psi);
        Ok((v.adjoint() * &self.matrix * &v)[(0, 0)].re)
    }

    /// `U rho U^dagger` for a unitary `U` of matching dimension.
    pub fn conjugate_by(&self, unitary: &DMatrix<Complex64>) -> Result<Self> {
        if unitary.nrows() != self.dim() || unitary.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: unitary.nrows(),
            });
        }
        Ok(Self::from_valid(unitary * &self.matrix * unitary.adjoint()))
    }

    /// Relabels qubits: qubit `i` of the result is qubit `order[i]` of `self`.
    pub fn permute_qubits(&self, order: &[usize]) -> Result<Self> {
        let n = self.n_qubits;
        if order.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: order.len(),
            });
        }
        let mut seen = vec![false; n];
        for &q in order {
            if q >= n {
                return Err(Error::IndexOutOfRange { index: q, n_qubits: n });
            }
            if std::mem::replace(&mut seen[q], true) {
                return Err(Error::DuplicateIndex(q));
            }
        }
        let dim = self.dim();
        let source: Vec<usize> = (0..dim)
            .map(|idx| {
                (0..n).fold(0, |acc, i| {
                    let bit = (idx >> (n - 1 - i)) & 1;
                    acc | (bit << (n - 1 - order[i]))
                })
            })
            .collect();
        let matrix = DMatrix::from_fn(dim, dim, |r, c| self.matrix[(source[r], source[c])]);
        Ok(Self { n_qubits: n, matrix })
    }

    /// Max-abs entrywise difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        max_abs_diff(&self.matrix, &other.matrix)
    }
}

fn register_size(matrix: &DMatrix<Complex64>) -> Result<usize> {
    let dim = matrix.nrows();
    if matrix.ncols() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: matrix.ncols(),
        });
    }
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::InvalidState(format!(
            "dimension {dim} is not a power of two >= 2"
        )));
    }
    Ok(dim.trailing_zeros() as usize)
}

/// Ordered set of distinct qubit positions, stored in ascending order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(transparent)]
pub struct QubitSubset(Vec<usize>);

impl QubitSubset {
    pub fn new(mut indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::EmptySubset);
        }
        indices.sort_unstable();
        if let Some(w) = indices.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateIndex(w[0]));
        }
        Ok(Self(indices))
    }

    pub fn single(index: usize) -> Self {
        Self(vec![index])
    }

    /// `start..end` as a subset; panics if empty.
    pub fn range(start: usize, end: usize) -> Self {
        assert!(start < end, "empty qubit range");
        Self((start..end).collect())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, q: usize) -> bool {
        self.0.binary_search(&q).is_ok()
    }

    pub(crate) fn check_within(&self, n_qubits: usize) -> Result<()> {
        match self.0.last() {
            Some(&q) if q >= n_qubits => Err(Error::IndexOutOfRange { index: q, n_qubits }),
            _ => Ok(()),
        }
    }
}

/// Global basis-index offsets of every local index on `qubits` within an
/// `n`-qubit register.
pub(crate) fn index_offsets(qubits: &[usize], n: usize) -> Vec<usize> {
    let k = qubits.len();
    (0..1usize << k)
        .map(|local| {
            qubits.iter().enumerate().fold(0, |acc, (i, &q)| {
                let bit = (local >> (k - 1 - i)) & 1;
                acc | (bit << (n - 1 - q))
            })
        })
        .collect()
}

/// Reduced state on `keep`; qubit order of the result follows `keep`.
pub fn partial_trace(rho: &DensityMatrix, keep: &QubitSubset) -> Result<DensityMatrix> {
    let n = rho.n_qubits;
    keep.check_within(n)?;
    if keep.len() == n {
        return Ok(rho.clone());
    }
    let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(*q)).collect();
    let kept_off = index_offsets(keep.indices(), n);
    let traced_off = index_offsets(&traced, n);
    let dk = kept_off.len();
    let m = &rho.matrix;
    let out = DMatrix::from_fn(dk, dk, |a, b| {
        traced_off
            .iter()
            .map(|&t| m[(kept_off[a] | t, kept_off[b] | t)])
            .sum::<Complex64>()
    });
    Ok(DensityMatrix::from_valid(out))
}

/// `-sum p log2 p` with `0 log 0 = 0`.
pub fn shannon_entropy(probabilities: &[f64]) -> f64 {
    probabilities
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum()
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    matrix_entropy(&rho.matrix)
}

/// Entropy of a raw matrix, validating Hermiticity and the eigenvalue floor.
pub(crate) fn matrix_entropy(m: &DMatrix<Complex64>) -> Result<f64> {
    let deviation = hermitian_deviation(m);
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian(deviation));
    }
    let (values, _) = hermitian_eigen(m);
    let mut clamped = Vec::with_capacity(values.len());
    for &l in values.iter() {
        if l < EIGEN_FLOOR {
            return Err(Error::NegativeEigenvalue(l));
        }
        clamped.push(l.max(0.0));
    }
    Ok(shannon_entropy(&clamped))
}

pub(crate) fn hermitize(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    (m + m.adjoint()).scale(0.5)
}

pub(crate) fn hermitian_deviation(m: &DMatrix<Complex64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for r in 0..n {
        for c in r..n {
            worst = worst.max((m[(r, c)] - m[(c, r)].conj()).norm());
        }
    }
    worst
}

/// Eigen-decomposition of the Hermitian part of `m` (eigenvalues unsorted).
pub(crate) fn hermitian_eigen(m: &DMatrix<Complex64>) -> (DVector<f64>, DMatrix<Complex64>) {
    let eig = SymmetricEigen::new(hermitize(m));
    (eig.eigenvalues, eig.eigenvectors)
}

pub(crate) fn max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn bell() -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        DensityMatrix::from_pure(&[c(s), c(0.0), c(0.0), c(s)]).unwrap()
    }

    fn ghz(n: usize) -> DensityMatrix {
        let mut amps = vec![c(0.0); 1 << n];
        amps[0] = c(1.0);
        amps[(1 << n) - 1] = c(1.0);
        DensityMatrix::from_pure(&amps).unwrap()
    }

    #[test]
    fn bell_marginal_is_maximally_mixed() {
        let reduced = partial_trace(&bell(), &QubitSubset::single(0)).unwrap();
        assert!(reduced.max_abs_diff(&DensityMatrix::maximally_mixed(1)) < 1e-15);
    }

    #[test]
    fn product_factor_survives_trace() {
        let rho_b = DMatrix::from_row_slice(
            2,
            2,
            &[c(0.7), Complex64::new(0.1, -0.2), Complex64::new(0.1, 0.2), c(0.3)],
        );
        let zero = DMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(0.0)]);
        let joint = DensityMatrix::new(zero.kronecker(&rho_b)).unwrap();
        let reduced = partial_trace(&joint, &QubitSubset::single(1)).unwrap();
        assert!(max_abs_diff(reduced.matrix(), &rho_b) < 1e-15);
    }

    #[test]
    fn ghz3_two_qubit_marginal() {
        let reduced = partial_trace(&ghz(3), &QubitSubset::new(vec![0, 1]).unwrap()).unwrap();
        let mut expected = DMatrix::zeros(4, 4);
        expected[(0, 0)] = c(0.5);
        expected[(3, 3)] = c(0.5);
        assert!(max_abs_diff(reduced.matrix(), &expected) < 1e-15);
    }

    #[test]
    fn partial_trace_errors() {
        assert_eq!(QubitSubset::new(vec![]), Err(Error::EmptySubset));
        assert_eq!(QubitSubset::new(vec![1, 1]), Err(Error::DuplicateIndex(1)));
        assert!(matches!(
            partial_trace(&bell(), &QubitSubset::single(2)),
            Err(Error::IndexOutOfRange { index: 2, n_qubits: 2 })
        ));
    }

    #[test]
    fn entropy_examples() {
        for n in 1..=4 {
            let s = von_neumann_entropy(&DensityMatrix::maximally_mixed(n)).unwrap();
            assert!(close(s, n as f64, 1e-12));
        }
        assert!(von_neumann_entropy(&ghz(3)).unwrap().abs() < 1e-12);
        let d = DMatrix::from_diagonal(&DVector::from_vec(vec![c(0.25), c(0.75)]));
        let s = von_neumann_entropy(&DensityMatrix::new(d).unwrap()).unwrap();
        // -(1/4)log2(1/4) - (3/4)log2(3/4)
        assert!(close(s, 0.811_278_124_459_132_8, 1e-12));
    }

    #[test]
    fn rejects_invalid_matrices() {
        let mut m = DMatrix::from_diagonal(&DVector::from_vec(vec![c(0.5), c(0.5)]));
        m[(0, 1)] = c(0.1);
        assert!(matches!(DensityMatrix::new(m.clone()), Err(Error::NotHermitian(_))));
        assert!(matches!(matrix_entropy(&m), Err(Error::NotHermitian(_))));
        let d = DMatrix::from_diagonal(&DVector::from_vec(vec![c(0.6), c(0.6)]));
        assert!(matches!(DensityMatrix::new(d), Err(Error::BadTrace(_))));
        let d = DMatrix::from_diagonal(&DVector::from_vec(vec![c(1.1), c(-0.1)]));
        assert!(matches!(DensityMatrix::new(d), Err(Error::NegativeEigenvalue(_))));
        let d = DMatrix::from_diagonal(&DVector::from_vec(vec![c(1.0), c(0.0), c(0.0)]));
        assert!(matches!(DensityMatrix::new(d), Err(Error::InvalidState(_))));
    }

    #[test]
    fn tiny_negative_eigenvalues_are_clamped() {
        let d = DMatrix::from_diagonal(&DVector::from_vec(vec![c(1.0 + 5e-11), c(-5e-11)]));
        let rho = DensityMatrix::new(d).unwrap();
        assert_eq!(rho.eigenvalues()[0], 0.0);
        assert!(von_neumann_entropy(&rho).unwrap().abs() < 1e-9);
    }

    #[test]
    fn permutation_moves_qubits() {
        // |01> becomes |10> under a swap.
        let rho = DensityMatrix::from_pure(&[c(0.0), c(1.0), c(0.0), c(0.0)]).unwrap();
        let swapped = rho.permute_qubits(&[1, 0]).unwrap();
        assert_eq!(swapped.matrix()[(2, 2)], c(1.0));
    }
}
