//! Derivative-free local minimization (Nelder-Mead simplex) and a
//! deterministic multi-start driver.

use rayon::prelude::*;

#[derive(Debug, Clone, Copy)]
pub struct NelderMead {
    pub max_iterations: usize,
    /// Spread of function values across the simplex at convergence.
    pub f_tol: f64,
    /// Largest vertex distance from the best vertex at convergence.
    pub x_tol: f64,
    pub initial_step: f64,
}

impl Default for NelderMead {
    fn default() -> Self {
        Self {
            max_iterations: 2000,
            f_tol: 1e-8,
            x_tol: 1e-4,
            initial_step: 0.3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalMinimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub iterations: usize,
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

impl NelderMead {
    /// Minimizes `f` from `x0`. After the first convergence the simplex is
    /// rebuilt once around the best point with a smaller step, which catches
    /// premature collapse onto a non-stationary point.
    pub fn minimize<F>(&self, mut f: F, x0: &[f64]) -> LocalMinimum
    where
        F: FnMut(&[f64]) -> f64,
    {
        let first = self.run(&mut f, x0, self.initial_step, self.max_iterations);
        if !first.converged {
            return first;
        }
        let budget = self.max_iterations.saturating_sub(first.iterations).max(1);
        let second = self.run(&mut f, &first.x, self.initial_step * 0.1, budget);
        let evaluations = first.evaluations + second.evaluations;
        let iterations = first.iterations + second.iterations;
        if second.value <= first.value {
            LocalMinimum {
                evaluations,
                iterations,
                ..second
            }
        } else {
            LocalMinimum {
                evaluations,
                iterations,
                ..first
            }
        }
    }

    fn run<F>(&self, f: &mut F, x0: &[f64], step: f64, max_iterations: usize) -> LocalMinimum
    where
        F: FnMut(&[f64]) -> f64,
    {
        let dim = x0.len();
        let mut evaluations = 0usize;
        let mut eval = |x: &[f64], count: &mut usize| {
            *count += 1;
            let v = f(x);
            if v.is_nan() {
                f64::INFINITY
            } else {
                v
            }
        };

        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
        simplex.push((x0.to_vec(), eval(x0, &mut evaluations)));
        for i in 0..dim {
            let mut x = x0.to_vec();
            x[i] += step;
            let v = eval(&x, &mut evaluations);
            simplex.push((x, v));
        }

        let mut iterations = 0;
        let mut converged = false;
        while iterations < max_iterations {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let best = simplex[0].1;
            let worst = simplex[dim].1;
            let spread = worst - best;
            let size = simplex[1..]
                .iter()
                .flat_map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
                .fold(0.0, f64::max);
            if spread <= self.f_tol && size <= self.x_tol {
                converged = true;
                break;
            }
            iterations += 1;

            let centroid: Vec<f64> = (0..dim)
                .map(|k| simplex[..dim].iter().map(|(x, _)| x[k]).sum::<f64>() / dim as f64)
                .collect();
            let toward = |coef: f64, worst_x: &[f64]| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(worst_x)
                    .map(|(c, w)| c + coef * (c - w))
                    .collect()
            };

            let worst_x = simplex[dim].0.clone();
            let xr = toward(REFLECT, &worst_x);
            let fr = eval(&xr, &mut evaluations);
            if fr < best {
                let xe = toward(EXPAND, &worst_x);
                let fe = eval(&xe, &mut evaluations);
                simplex[dim] = if fe < fr { (xe, fe) } else { (xr, fr) };
                continue;
            }
            if fr < simplex[dim - 1].1 {
                simplex[dim] = (xr, fr);
                continue;
            }
            let (xc, fc) = if fr < worst {
                let xc = toward(CONTRACT, &worst_x);
                let fc = eval(&xc, &mut evaluations);
                (xc, fc)
            } else {
                let xc = toward(-CONTRACT, &worst_x);
                let fc = eval(&xc, &mut evaluations);
                (xc, fc)
            };
            if fc < worst.min(fr) {
                simplex[dim] = (xc, fc);
                continue;
            }
            let anchor = simplex[0].0.clone();
            for vertex in simplex.iter_mut().skip(1) {
                let x: Vec<f64> = anchor
                    .iter()
                    .zip(&vertex.0)
                    .map(|(a, v)| a + SHRINK * (v - a))
                    .collect();
                let v = eval(&x, &mut evaluations);
                *vertex = (x, v);
            }
        }
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (x, value) = simplex.swap_remove(0);
        LocalMinimum {
            x,
            value,
            evaluations,
            iterations,
            converged,
        }
    }
}

/// Runs one local search per start, concurrently; results keep start order.
pub fn multi_start<F>(method: &NelderMead, f: F, starts: &[Vec<f64>]) -> Vec<LocalMinimum>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    starts
        .par_iter()
        .map(|x0| method.minimize(&f, x0))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rosenbrock(x: &[f64]) -> f64 {
        (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2)
    }

    #[test]
    fn finds_rosenbrock_minimum() {
        let nm = NelderMead {
            max_iterations: 5000,
            f_tol: 1e-14,
            x_tol: 1e-8,
            initial_step: 0.5,
        };
        let r = nm.minimize(rosenbrock, &[-1.2, 1.0]);
        assert!(r.converged);
        assert!(r.value < 1e-10, "{r:?}");
        assert!((r.x[0] - 1.0).abs() < 1e-4 && (r.x[1] - 1.0).abs() < 1e-4);
    }

    #[test]
    fn quadratic_in_many_dimensions() {
        let f = |x: &[f64]| x.iter().enumerate().map(|(i, v)| (i + 1) as f64 * (v - 0.3).powi(2)).sum::<f64>();
        let r = NelderMead::default().minimize(f, &[0.0; 8]);
        assert!(r.value < 1e-7, "{r:?}");
    }

    #[test]
    fn reports_non_convergence_when_budget_is_tiny() {
        let nm = NelderMead {
            max_iterations: 3,
            ..NelderMead::default()
        };
        let r = nm.minimize(rosenbrock, &[-1.2, 1.0]);
        assert!(!r.converged);
        assert_eq!(r.iterations, 3);
    }

    #[test]
    fn nan_is_treated_as_worst() {
        let f = |x: &[f64]| if x[0] < 0.0 { f64::NAN } else { (x[0] - 1.0).powi(2) };
        let r = NelderMead::default().minimize(f, &[0.5]);
        assert!((r.x[0] - 1.0).abs() < 1e-3);
    }

    #[test]
    fn multi_start_is_ordered_and_deterministic() {
        let starts = vec![vec![-1.2, 1.0], vec![2.0, 2.0], vec![0.0, 0.0]];
        let a = multi_start(&NelderMead::default(), rosenbrock, &starts);
        let b = multi_start(&NelderMead::default(), rosenbrock, &starts);
        assert_eq!(a, b);
        let serial: Vec<_> = starts.iter().map(|s| NelderMead::default().minimize(rosenbrock, s)).collect();
        assert_eq!(a, serial);
    }
}
