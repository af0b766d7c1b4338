//! State families: GHZ, W, their mixtures with white noise, and seeded random
//! mixed states.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::qstate::DensityMatrix;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Ghz,
    W,
    /// `(1 - mu) I / 2^N + mu |GHZ><GHZ|`
    WernerGhz,
    /// `(1 - mu) I / 2^N + mu |W><W|`
    MixedW,
    /// Hilbert-Schmidt-induced random state of given rank.
    Random,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Ghz => "ghz",
            Family::W => "w",
            Family::WernerGhz => "werner-ghz",
            Family::MixedW => "mixed-w",
            Family::Random => "random",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "ghz" => Ok(Family::Ghz),
            "w" => Ok(Family::W),
            "werner-ghz" => Ok(Family::WernerGhz),
            "mixed-w" => Ok(Family::MixedW),
            "random" => Ok(Family::Random),
            other => Err(Error::InvalidState(format!("unknown state family `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateSpec {
    pub family: Family,
    pub n_qubits: usize,
    /// Mixing weight of the pure component (mixtures only).
    pub mu: f64,
    /// Rank of random states.
    pub rank: usize,
    pub seed: u64,
}

impl StateSpec {
    pub fn new(family: Family, n_qubits: usize) -> Self {
        Self {
            family,
            n_qubits,
            mu: 1.0,
            rank: 1,
            seed: 0,
        }
    }

    pub fn ghz(n: usize) -> Self {
        Self::new(Family::Ghz, n)
    }

    pub fn w(n: usize) -> Self {
        Self::new(Family::W, n)
    }

    pub fn werner_ghz(n: usize, mu: f64) -> Self {
        Self {
            mu,
            ..Self::new(Family::WernerGhz, n)
        }
    }

    pub fn mixed_w(n: usize, mu: f64) -> Self {
        Self {
            mu,
            ..Self::new(Family::MixedW, n)
        }
    }

    pub fn random(n: usize, rank: usize, seed: u64) -> Self {
        Self {
            rank,
            seed,
            ..Self::new(Family::Random, n)
        }
    }
}

/// Largest register the dense representation is built for.
pub const MAX_QUBITS: usize = 12;

fn ghz_amplitudes(n: usize) -> Vec<Complex64> {
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    amps[0] = Complex64::new(1.0, 0.0);
    amps[(1 << n) - 1] = Complex64::new(1.0, 0.0);
    amps
}

fn w_amplitudes(n: usize) -> Vec<Complex64> {
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    for q in 0..n {
        amps[1 << q] = Complex64::new(1.0, 0.0);
    }
    amps
}

fn white_noise_mixture(n: usize, mu: f64, amps: &[Complex64]) -> DensityMatrix {
    let pure = DensityMatrix::from_pure(amps).expect("family vectors are nonzero");
    let dim = 1usize << n;
    let noise = (1.0 - mu) / dim as f64;
    let m = pure.matrix().scale(mu) + DMatrix::from_diagonal_element(dim, dim, Complex64::new(noise, 0.0));
    DensityMatrix::from_valid(m)
}

pub fn make_state(spec: &StateSpec) -> Result<DensityMatrix> {
    let n = spec.n_qubits;
    if !(2..=MAX_QUBITS).contains(&n) {
        return Err(Error::InvalidState(format!(
            "n_qubits must lie in 2..={MAX_QUBITS}, got {n}"
        )));
    }
    let mixture = matches!(spec.family, Family::WernerGhz | Family::MixedW);
    if mixture && !(0.0..=1.0).contains(&spec.mu) {
        return Err(Error::InvalidState(format!("mu must lie in [0, 1], got {}", spec.mu)));
    }
    match spec.family {
        Family::Ghz => DensityMatrix::from_pure(&ghz_amplitudes(n)),
        Family::W => DensityMatrix::from_pure(&w_amplitudes(n)),
        Family::WernerGhz => Ok(white_noise_mixture(n, spec.mu, &ghz_amplitudes(n))),
        Family::MixedW => Ok(white_noise_mixture(n, spec.mu, &w_amplitudes(n))),
        Family::Random => random_density(n, spec.rank, spec.seed),
    }
}

/// `rho = G G^dagger / tr(G G^dagger)` with `G` a `2^n x rank` matrix of
/// independent standard complex Gaussians, drawn from a seeded ChaCha stream.
pub fn random_density(n: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::InvalidState(format!("n_qubits must lie in 1..={MAX_QUBITS}, got {n}")));
    }
    let dim = 1usize << n;
    if rank == 0 || rank > dim {
        return Err(Error::InvalidState(format!("rank must lie in 1..={dim}, got {rank}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = DMatrix::from_fn(dim, rank, |_, _| {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        Complex64::new(re, im)
    });
    let gram = &g * g.adjoint();
    let trace = gram.trace().re;
    Ok(DensityMatrix::from_valid(gram.unscale(trace)))
}

fn xlog2x(x: f64) -> f64 {
    if x > 0.0 {
        x * x.log2()
    } else {
        0.0
    }
}

/// Total-correlation bracket of the mixed-W closed form: the loss of
/// correlation of the `N`-qubit mixed W state measured in the computational basis.
fn mixed_w_total_bracket(n: f64, mu: f64) -> f64 {
    let a = (1.0 - mu) / 2f64.powf(n);
    (n - 1.0) * xlog2x(a) - n * xlog2x(a + mu / n) + xlog2x(a + mu)
}

/// Pair bracket: the loss of correlation of one two-qubit marginal of the
/// mixed W state measured in the computational basis.
fn mixed_w_pair_bracket(n: f64, mu: f64) -> f64 {
    let f = (1.0 - mu) / 4.0;
    xlog2x(f) + xlog2x(f + 2.0 * mu / n) - 2.0 * xlog2x(f + mu / n)
}

/// Residual-GQD closed form for the mixed W state, evaluated term by term as
/// published: total bracket **plus** `(N - 1)` times the pair bracket.
pub fn mixed_w_residual_closed_form(n: usize, mu: f64) -> f64 {
    let n = n as f64;
    mixed_w_total_bracket(n, mu) + (n - 1.0) * mixed_w_pair_bracket(n, mu)
}

/// Diagnostic companion of [`mixed_w_residual_closed_form`]: the residual if
/// every term were measured in the computational basis, i.e. total bracket
/// **minus** `(N - 1)` pair brackets.
pub fn mixed_w_residual_z_basis(n: usize, mu: f64) -> f64 {
    let n = n as f64;
    mixed_w_total_bracket(n, mu) - (n - 1.0) * mixed_w_pair_bracket(n, mu)
}
