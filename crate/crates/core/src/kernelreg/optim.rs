//! Box-constrained Nelder-Mead simplex search.

use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq)]
pub struct NelderMead {
    pub max_evals: usize,
    /// Converged once every vertex is within this distance (max-norm) of the
    /// best one...
    pub xatol: f64,
    /// ...and their objective values are within `fatol + frtol * |f_best|`.
    pub fatol: f64,
    pub frtol: f64,
    pub initial_step: f64,
    pub lower: f64,
    pub upper: f64,
    /// Stop as soon as a value at or below this is found.
    pub target: f64,
}

impl Default for NelderMead {
    fn default() -> Self {
        NelderMead {
            max_evals: 2000,
            xatol: 1e-6,
            fatol: 1e-300,
            frtol: 1e-10,
            initial_step: 1.0,
            lower: f64::NEG_INFINITY,
            upper: f64::INFINITY,
            target: f64::NEG_INFINITY,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub f: f64,
    pub evals: usize,
    pub converged: bool,
}

impl NelderMead {
    fn clamp(&self, x: &mut [f64]) {
        for v in x {
            *v = v.clamp(self.lower, self.upper);
        }
    }

    /// Minimizes `f` from `x0`. The returned point is never worse than `x0`.
    pub fn minimize<F>(&self, mut f: F, x0: &[f64]) -> Minimum
    where
        F: FnMut(&[f64]) -> f64,
    {
        let dim = x0.len();
        let mut evals = 0usize;
        let mut eval = |x: &[f64], evals: &mut usize| {
            *evals += 1;
            let v = f(x);
            if v.is_nan() {
                f64::INFINITY
            } else {
                v
            }
        };

        let mut start = x0.to_vec();
        self.clamp(&mut start);
        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
        let f0 = eval(&start, &mut evals);
        simplex.push((start.clone(), f0));
        for i in 0..dim {
            let mut v = start.clone();
            v[i] += self.initial_step;
            if v[i] > self.upper {
                v[i] = start[i] - self.initial_step;
            }
            self.clamp(&mut v);
            let fv = eval(&v, &mut evals);
            simplex.push((v, fv));
        }

        let mut converged = false;
        loop {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let (best_x, best_f) = (&simplex[0].0, simplex[0].1);
            let x_spread = simplex[1..]
                .iter()
                .flat_map(|(v, _)| v.iter().zip(best_x).map(|(a, b)| (a - b).abs()))
                .fold(0.0, f64::max);
            let f_spread = simplex[1..]
                .iter()
                .map(|(_, fv)| (fv - best_f).abs())
                .fold(0.0, f64::max);
            if best_f <= self.target {
                break;
            }
            if x_spread <= self.xatol && f_spread <= self.fatol + self.frtol * best_f.abs() {
                converged = true;
                break;
            }
            if evals >= self.max_evals {
                break;
            }

            let worst = dim;
            let mut centroid = alloc::vec![0.0; dim];
            for (v, _) in &simplex[..worst] {
                for (c, x) in centroid.iter_mut().zip(v) {
                    *c += x / dim as f64;
                }
            }
            let towards = |t: f64| -> Vec<f64> {
                let mut p: Vec<f64> = centroid
                    .iter()
                    .zip(&simplex[worst].0)
                    .map(|(c, w)| c + t * (w - c))
                    .collect();
                self.clamp(&mut p);
                p
            };

            let reflected = towards(-1.0);
            let fr = eval(&reflected, &mut evals);
            if fr < simplex[0].1 {
                let expanded = towards(-2.0);
                let fe = eval(&expanded, &mut evals);
                simplex[worst] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
                continue;
            }
            if fr < simplex[worst - 1].1 {
                simplex[worst] = (reflected, fr);
                continue;
            }
            let (contracted, fc) = if fr < simplex[worst].1 {
                let c = towards(-0.5);
                let fc = eval(&c, &mut evals);
                (c, fc)
            } else {
                let c = towards(0.5);
                let fc = eval(&c, &mut evals);
                (c, fc)
            };
            if fc < simplex[worst].1.min(fr) {
                simplex[worst] = (contracted, fc);
                continue;
            }
            let best = simplex[0].0.clone();
            for (v, fv) in simplex.iter_mut().skip(1) {
                for (x, b) in v.iter_mut().zip(&best) {
                    *x = b + 0.5 * (*x - b);
                }
                *fv = eval(v, &mut evals);
            }
        }

        let (x, f) = simplex.swap_remove(0);
        Minimum {
            x,
            f,
            evals,
            converged,
        }
    }
}
