//! Shared helpers for integration tests: a coarse-grid GQD oracle that is
//! independent of the library's minimization evaluator, and PASS/FAIL output.

#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, PI};

use gqdlab::{mutual_information, partial_trace, Complex64, DensityMatrix, Partition, QubitSubset};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Points per angle of the coarse grid.
pub const GRID: usize = 8;
/// Measured-qubit count up to which the grid is enumerated exhaustively.
pub const FULL_GRID_MAX_QUBITS: usize = 4;
/// Grid points sampled for larger registers.
pub const SAMPLED_POINTS: usize = 20_000;

/// Prints one PASS/FAIL line and returns `ok`.
pub fn verdict(criterion: &str, ok: bool, detail: &str) -> bool {
    println!("[{}] {criterion}: {detail}", if ok { "PASS" } else { "FAIL" });
    ok
}

fn angle(i: usize) -> (f64, f64) {
    let (t, p) = (i / GRID, i % GRID);
    (t as f64 * FRAC_PI_2 / GRID as f64, p as f64 * PI / GRID as f64)
}

/// Measurement vectors `u|0>`, `u|1>` of the rotation with angles `(theta, phi)`,
/// written out from the parametrization `cos(theta) I + i sin(theta)(cos(phi) Y + sin(phi) X)`.
fn basis(theta: f64, phi: f64) -> [[Complex64; 2]; 2] {
    let (s, c) = theta.sin_cos();
    let e = Complex64::from_polar(s, phi);
    // columns of [[c, s e^{i phi}], [-s e^{-i phi}, c]]
    [[Complex64::new(c, 0.0), -e.conj()], [e, Complex64::new(c, 0.0)]]
}

/// Conditional (unnormalized) states of the remaining qubits after the leading
/// qubit of each `h x h` row-major matrix in `level` is found along `b[0]` or
/// `b[1]`. Writes `2 * level.len() / h^2` matrices of size `h/2` into `out`.
fn condition(level: &[Complex64], h: usize, b: &[[Complex64; 2]; 2], out: &mut [Complex64]) {
    let g = h / 2;
    for (mi, m) in level.chunks_exact(h * h).enumerate() {
        for (bi, v) in b.iter().enumerate() {
            let dst = &mut out[(2 * mi + bi) * g * g..(2 * mi + bi + 1) * g * g];
            dst.fill(Complex64::new(0.0, 0.0));
            for i in 0..2 {
                for j in 0..2 {
                    let w = v[i].conj() * v[j];
                    for r in 0..g {
                        for c in 0..g {
                            dst[r * g + c] += w * m[(i * g + r) * h + j * g + c];
                        }
                    }
                }
            }
        }
    }
}

fn outcome_distribution(rho: &DMatrix<Complex64>, angles: &[(f64, f64)]) -> Vec<f64> {
    let mut h = rho.nrows();
    let mut level: Vec<Complex64> = rho.transpose().iter().copied().collect();
    for &(t, p) in angles {
        let mut next = vec![Complex64::new(0.0, 0.0); level.len() / 2];
        condition(&level, h, &basis(t, p), &mut next);
        level = next;
        h /= 2;
    }
    level.iter().map(|z| z.re.max(0.0)).collect()
}

fn entropy(p: &[f64]) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum()
}

/// Classical multi-information of `p` over blocks given as outcome-index maps.
struct Blocks {
    maps: Vec<(usize, Vec<usize>)>,
    scratch: Vec<f64>,
}

impl Blocks {
    fn new(k: usize, blocks: &[Vec<usize>]) -> Self {
        let maps: Vec<(usize, Vec<usize>)> = blocks
            .iter()
            .map(|b| {
                let map = (0..1usize << k)
                    .map(|idx| b.iter().fold(0, |acc, &q| (acc << 1) | ((idx >> (k - 1 - q)) & 1)))
                    .collect();
                (1 << b.len(), map)
            })
            .collect();
        let scratch = vec![0.0; 1 << k];
        Self { maps, scratch }
    }

    fn mutual_info(&mut self, p: &[f64]) -> f64 {
        let mut total = -entropy(p);
        for (size, map) in &self.maps {
            let m = &mut self.scratch[..*size];
            m.fill(0.0);
            for (pk, &key) in p.iter().zip(map) {
                m[key] += pk;
            }
            total += entropy(m);
        }
        total
    }
}

/// Exhaustive search over the angle grid of every site from `depth` on;
/// returns the largest classical multi-information.
fn best_below(bufs: &mut [Vec<Complex64>], depth: usize, k: usize, bases: &[[[Complex64; 2]; 2]], blocks: &mut Blocks, p: &mut [f64]) -> f64 {
    let h = 1usize << (k - depth);
    let mut best = f64::NEG_INFINITY;
    for b in bases {
        if depth + 1 == k {
            for (mi, m) in bufs[depth].chunks_exact(4).enumerate() {
                for (bi, v) in b.iter().enumerate() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for i in 0..2 {
                        for j in 0..2 {
                            acc += v[i].conj() * v[j] * m[i * 2 + j];
                        }
                    }
                    p[2 * mi + bi] = acc.re.max(0.0);
                }
            }
            best = best.max(blocks.mutual_info(p));
        } else {
            let (head, tail) = bufs.split_at_mut(depth + 1);
            condition(&head[depth], h, b, &mut tail[0]);
            best = best.max(best_below(bufs, depth + 1, k, bases, blocks, p));
        }
    }
    best
}

/// Minimum of the loss of correlation over the `8 x 8` per-qubit angle grid
/// (exhaustive up to [`FULL_GRID_MAX_QUBITS`] measured qubits, otherwise a
/// seeded sample of [`SAMPLED_POINTS`] grid points).
pub fn coarse_grid_minimum(rho: &DensityMatrix, blocks: &[Vec<usize>]) -> f64 {
    if blocks.len() < 2 {
        return 0.0;
    }
    let partition = Partition::from_blocks(blocks.to_vec()).unwrap();
    let union = partition.union();
    let reduced = if union.len() == rho.n_qubits() {
        rho.clone()
    } else {
        partial_trace(rho, &QubitSubset::new(union.clone()).unwrap()).unwrap()
    };
    let local: Vec<Vec<usize>> = blocks
        .iter()
        .map(|b| b.iter().map(|q| union.binary_search(q).unwrap()).collect())
        .collect();
    let mi = mutual_information(rho, &partition).unwrap();
    let k = union.len();
    let m = reduced.matrix().clone();
    let mut blocks = Blocks::new(k, &local);
    let best = if k <= FULL_GRID_MAX_QUBITS {
        // theta = 0 gives the same basis for every phi
        let bases: Vec<_> = (0..GRID * GRID)
            .filter(|i| i / GRID > 0 || i % GRID == 0)
            .map(|i| {
                let (t, p) = angle(i);
                basis(t, p)
            })
            .collect();
        let mut bufs: Vec<Vec<Complex64>> = (0..k)
            .map(|s| vec![Complex64::new(0.0, 0.0); (1 << s) << (2 * (k - s))])
            .collect();
        bufs[0] = m.transpose().iter().copied().collect();
        let mut p = vec![0.0; 1 << k];
        best_below(&mut bufs, 0, k, &bases, &mut blocks, &mut p)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x6772_6964);
        (0..SAMPLED_POINTS)
            .map(|_| {
                let angles: Vec<(f64, f64)> = (0..k).map(|_| angle(rng.random_range(0..GRID * GRID))).collect();
                blocks.mutual_info(&outcome_distribution(&m, &angles))
            })
            .fold(f64::NEG_INFINITY, f64::max)
    };
    mi - best
}

/// Tally of optimizer-versus-grid checks.
#[derive(Debug, Default)]
pub struct OracleTally {
    pub calls: usize,
    pub sampled: usize,
    pub worst_excess: f64,
    pub failures: Vec<String>,
}

impl OracleTally {
    pub fn check(&mut self, label: &str, rho: &DensityMatrix, blocks: &[Vec<usize>], value: f64) {
        let grid = coarse_grid_minimum(rho, blocks);
        let union: usize = blocks.iter().map(Vec::len).sum();
        self.calls += 1;
        if union > FULL_GRID_MAX_QUBITS {
            self.sampled += 1;
        }
        let excess = value - grid;
        if self.calls == 1 || excess > self.worst_excess {
            self.worst_excess = excess;
        }
        if excess > 1e-6 {
            self.failures.push(format!("{label}: gqd {value:.9} > grid {grid:.9}"));
        }
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn summary(&self) -> String {
        format!(
            "{} gqd calls vs 8-point grid ({} sampled), worst excess {:+.2e}{}",
            self.calls,
            self.sampled,
            self.worst_excess,
            if self.failures.is_empty() { String::new() } else { format!("; {:?}", self.failures) }
        )
    }
}
