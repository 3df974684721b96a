use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::PiecewisePolynomial;
use crate::error::{QaaError, Result};

const EXCHANGE_POINTS: usize = 4097;
const REPORT_POINTS: usize = 10_001;
const LSQ_POINTS: usize = 64;
const MAX_ITERATIONS: usize = 50;
const DEFECT_TOLERANCE: f64 = 0.1;
pub const MAX_DEGREE: usize = 7;
pub const MAX_PIECES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub degree: usize,
    pub pieces: usize,
    pub n_bits: usize,
    pub eps: f64,
}

/// Quality of a fit, measured on a dense grid in function units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    /// Per subdomain, after coefficient rounding.
    pub max_abs_error: Vec<f64>,
    pub target_eps: f64,
    /// Exchange iterations per subdomain.
    pub iterations: Vec<usize>,
    pub within_target: bool,
}

impl FitReport {
    pub fn worst(&self) -> f64 {
        self.max_abs_error.iter().copied().fold(0.0, f64::max)
    }
}

/// Activation functions accepted by the fitter CLI. `alpha` is the
/// negative-side slope of `mrelu`.
pub fn named_function(name: &str, alpha: f64) -> Option<Box<dyn Fn(f64) -> f64>> {
    match name {
        "sigmoid" => Some(Box::new(|x: f64| 1.0 / (1.0 + (-x).exp()))),
        "tanh" => Some(Box::new(f64::tanh)),
        "mrelu" => Some(Box::new(move |x: f64| if x >= 0.0 { x } else { alpha * x })),
        "identity" => Some(Box::new(|x: f64| x)),
        _ => None,
    }
}

fn horner(c: &[f64], u: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * u + a)
}

fn unit_grid(points: usize) -> Vec<f64> {
    (0..points).map(|k| k as f64 / (points - 1) as f64).collect()
}

/// Chebyshev points of the first kind mapped to `[0, 1]`.
fn chebyshev_grid(points: usize) -> Vec<f64> {
    (0..points)
        .map(|k| 0.5 * (1.0 - ((2 * k + 1) as f64 * PI / (2 * points) as f64).cos()))
        .collect()
}

/// Solves `Σ c_i u_k^i + (-1)^k E = g_k` on the reference.
fn levelled_solve(reference: &[(f64, f64)], degree: usize) -> Option<Vec<f64>> {
    let size = degree + 2;
    let a = DMatrix::from_fn(size, size, |k, i| {
        if i <= degree {
            reference[k].0.powi(i as i32)
        } else if k % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    });
    let b = DVector::from_iterator(size, reference.iter().map(|r| r.1));
    let x = a.lu().solve(&b)?;
    Some(x.as_slice()[..=degree].to_vec())
}

/// Largest error in each run of constant sign, then trimmed to `want`
/// alternating points keeping the global maximum.
fn alternating_extrema(errors: &[f64], want: usize) -> Vec<usize> {
    let mut picks: Vec<usize> = Vec::new();
    for (k, &e) in errors.iter().enumerate() {
        if e == 0.0 {
            continue;
        }
        match picks.last() {
            Some(&last) if errors[last].signum() == e.signum() => {
                if e.abs() > errors[last].abs() {
                    *picks.last_mut().unwrap() = k;
                }
            }
            _ => picks.push(k),
        }
    }
    while picks.len() > want {
        let (pos, _) = picks
            .iter()
            .enumerate()
            .min_by(|a, b| errors[*a.1].abs().total_cmp(&errors[*b.1].abs()))
            .unwrap();
        let last = picks.len() - 1;
        if pos == 0 || pos == last || picks.len() - 2 < want {
            let end = if errors[picks[0]].abs() < errors[picks[last]].abs() { 0 } else { last };
            picks.remove(end);
        } else {
            let drop = if errors[picks[pos - 1]].abs() < errors[picks[pos + 1]].abs() { pos - 1 } else { pos + 1 };
            picks.remove(pos.max(drop));
            picks.remove(pos.min(drop));
        }
    }
    picks
}

/// Minimax polynomial of `degree` for samples of `g` on `[0, 1]` by the
/// exchange algorithm. Returns coefficients (constant first) and the
/// number of levelled solves.
fn remez(grid: &[f64], values: &[f64], degree: usize) -> (Vec<f64>, usize) {
    if degree == 0 {
        let hi = values.iter().copied().fold(f64::MIN, f64::max);
        let lo = values.iter().copied().fold(f64::MAX, f64::min);
        return (vec![0.5 * (hi + lo)], 0);
    }
    let sample = |u: f64| {
        let k = ((u * (grid.len() - 1) as f64).round() as usize).min(grid.len() - 1);
        (grid[k], values[k])
    };
    let mut reference: Vec<(f64, f64)> =
        (0..degree + 2).map(|k| sample(0.5 * (1.0 - (k as f64 * PI / (degree + 1) as f64).cos()))).collect();
    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS {
        let Some(c) = levelled_solve(&reference, degree) else { break };
        iterations += 1;
        let errors: Vec<f64> = grid.iter().zip(values).map(|(&u, &v)| v - horner(&c, u)).collect();
        let max_err = errors.iter().fold(0.0f64, |m, e| m.max(e.abs()));
        if best.as_ref().is_none_or(|(_, e)| max_err < *e) {
            best = Some((c, max_err));
        }
        if max_err < 1e-15 {
            break;
        }
        let picks = alternating_extrema(&errors, degree + 2);
        if picks.len() < degree + 2 {
            break;
        }
        let min_ext = picks.iter().fold(f64::MAX, |m, &k| m.min(errors[k].abs()));
        if (max_err - min_ext) / max_err < DEFECT_TOLERANCE {
            break;
        }
        reference = picks.iter().map(|&k| (grid[k], values[k])).collect();
    }
    let coeffs = best.map(|b| b.0).unwrap_or_else(|| vec![0.0; degree + 1]);
    (coeffs, iterations)
}

/// Rounds coefficients to `n_bits`, largest magnitude first, refitting the
/// still-free ones by least squares after each rounding.
fn round_coefficients(coeffs: &[f64], target: &dyn Fn(f64) -> f64, n_bits: usize) -> Vec<i64> {
    let one = (1u64 << n_bits) as f64;
    let limit = (1i64 << n_bits) - 1;
    let grid = chebyshev_grid(LSQ_POINTS);
    let targets: Vec<f64> = grid.iter().map(|&u| target(u)).collect();
    let mut a = coeffs.to_vec();
    let mut fixed: Vec<Option<i64>> = vec![None; a.len()];

    loop {
        let free: Vec<usize> = (0..a.len()).filter(|&i| fixed[i].is_none()).collect();
        let Some(&i) = free.iter().max_by(|&&x, &&y| a[x].abs().total_cmp(&a[y].abs())) else { break };
        let q = ((a[i] * one).round() as i64).clamp(-limit, limit);
        fixed[i] = Some(q);
        a[i] = q as f64 / one;

        let free: Vec<usize> = free.into_iter().filter(|&k| k != i).collect();
        if free.is_empty() {
            continue;
        }
        let m = DMatrix::from_fn(grid.len(), free.len(), |r, c| grid[r].powi(free[c] as i32));
        let rhs = DVector::from_iterator(
            grid.len(),
            grid.iter().zip(&targets).map(|(&u, &t)| {
                t - (0..a.len()).filter_map(|k| fixed[k].map(|_| a[k] * u.powi(k as i32))).sum::<f64>()
            }),
        );
        if let Ok(sol) = m.svd(true, true).solve(&rhs, 1e-14) {
            for (c, &k) in free.iter().enumerate() {
                a[k] = sol[c];
            }
        }
    }
    let sequential: Vec<i64> = fixed.into_iter().map(|q| q.unwrap()).collect();

    // Plain rounding wins ties: same error with fewer nonzero terms.
    let direct: Vec<i64> = coeffs.iter().map(|c| ((c * one).round() as i64).clamp(-limit, limit)).collect();
    let dense = unit_grid(EXCHANGE_POINTS);
    let worst = |q: &[i64]| {
        let c: Vec<f64> = q.iter().map(|&v| v as f64 / one).collect();
        dense.iter().map(|&u| (target(u) - horner(&c, u)).abs()).fold(0.0, f64::max)
    };
    if worst(&sequential) < worst(&direct) * (1.0 - 1e-9) {
        sequential
    } else {
        direct
    }
}

fn check_options(domain: (f64, f64), o: &FitOptions) -> Result<()> {
    let (lo, hi) = domain;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(QaaError::InvalidParameter(format!("domain [{lo}, {hi}] is not a finite interval")));
    }
    if o.degree > MAX_DEGREE {
        return Err(QaaError::InvalidParameter(format!("degree {} above {MAX_DEGREE}", o.degree)));
    }
    if !(1..=MAX_PIECES).contains(&o.pieces) {
        return Err(QaaError::InvalidParameter(format!("pieces = {} outside 1..={MAX_PIECES}", o.pieces)));
    }
    if !(2..=30).contains(&o.n_bits) {
        return Err(QaaError::InvalidParameter(format!("n_bits = {} outside 2..=30", o.n_bits)));
    }
    if !(o.eps.is_finite() && o.eps > 0.0) {
        return Err(QaaError::InvalidParameter(format!("eps = {} must be positive", o.eps)));
    }
    Ok(())
}

/// Piecewise fit of `f` over `domain` split into equal subdomains. Values
/// and coefficients are divided by a power-of-two output scale when they
/// would not fit below 1.
pub fn fit(f: &dyn Fn(f64) -> f64, domain: (f64, f64), opts: &FitOptions) -> Result<(PiecewisePolynomial, FitReport)> {
    check_options(domain, opts)?;
    let (lo, hi) = domain;
    let pieces = opts.pieces;
    let width = (hi - lo) / pieces as f64;
    let mut breakpoints: Vec<f64> = (0..pieces).map(|j| lo + j as f64 * width).collect();
    breakpoints.push(hi);

    let grid = unit_grid(EXCHANGE_POINTS);
    let mut raw = Vec::with_capacity(pieces);
    let mut iterations = Vec::with_capacity(pieces);
    let mut peak = 0.0f64;
    for j in 0..pieces {
        let (a, b) = (breakpoints[j], breakpoints[j + 1]);
        let mut values = Vec::with_capacity(grid.len());
        for &u in &grid {
            let x = a + u * (b - a);
            let v = f(x);
            if !v.is_finite() {
                return Err(QaaError::Unbounded(x));
            }
            values.push(v);
        }
        let (c, it) = remez(&grid, &values, opts.degree);
        peak = c.iter().chain(&values).fold(peak, |m, v| m.max(v.abs()));
        raw.push(c);
        iterations.push(it);
    }

    // Peaks up to 1 are left to coefficient clamping.
    let ceiling = 1.0 - 2f64.powi(-(opts.n_bits as i32));
    let mut scale = 1.0;
    if peak > 1.0 + 1e-9 {
        while peak / scale > ceiling {
            scale *= 2.0;
        }
    }

    let mut rows = Vec::with_capacity(pieces);
    for (j, c) in raw.iter().enumerate() {
        let (a, b) = (breakpoints[j], breakpoints[j + 1]);
        let scaled: Vec<f64> = c.iter().map(|v| v / scale).collect();
        let target = |u: f64| f(a + u * (b - a)) / scale;
        rows.push(round_coefficients(&scaled, &target, opts.n_bits));
    }
    let poly = PiecewisePolynomial::with_scale(breakpoints, opts.degree, opts.n_bits, rows, scale)?;

    let max_abs_error: Vec<f64> = (0..pieces)
        .map(|j| {
            let (a, b) = (poly.breakpoints()[j], poly.breakpoints()[j + 1]);
            (0..REPORT_POINTS)
                .map(|k| {
                    let u = k as f64 / REPORT_POINTS as f64;
                    (poly.eval_piece(j, u) * scale - f(a + u * (b - a))).abs()
                })
                .fold(0.0, f64::max)
        })
        .collect();
    let within_target = max_abs_error.iter().all(|&e| e <= opts.eps);
    Ok((poly, FitReport { max_abs_error, target_eps: opts.eps, iterations, within_target }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn remez_recovers_cubic_exactly() {
        let grid = unit_grid(513);
        let values: Vec<f64> = grid.iter().map(|&u| 0.1 - 0.3 * u + 0.2 * u * u * u).collect();
        let (c, _) = remez(&grid, &values, 3);
        for (got, want) in c.iter().zip([0.1, -0.3, 0.0, 0.2]) {
            assert!((got - want).abs() < 1e-9);
        }
    }

    #[test]
    fn remez_equioscillates_on_exp() {
        // Minimax linear error for e^u on [0, 1] is known in closed form.
        let grid = unit_grid(EXCHANGE_POINTS);
        let values: Vec<f64> = grid.iter().map(|&u| u.exp()).collect();
        let (c, _) = remez(&grid, &values, 1);
        let slope = std::f64::consts::E - 1.0;
        let xi = slope.ln();
        let best = 0.5 * (1.0 + slope - slope * xi) - 1.0;
        let err = grid.iter().map(|&u| (u.exp() - horner(&c, u)).abs()).fold(0.0, f64::max);
        assert!((err - best.abs()).abs() / best.abs() < 0.1, "{err} vs {best}");
    }

    #[test]
    fn extrema_alternate() {
        let e = [0.1, 0.3, -0.2, -0.5, 0.4, 0.05, -0.01, 0.6];
        let p = alternating_extrema(&e, 3);
        assert_eq!(p.len(), 3);
        for w in p.windows(2) {
            assert!(e[w[0]].signum() != e[w[1]].signum());
        }
        assert!(p.contains(&7));
    }

    #[test]
    fn identity_fits_exactly() {
        let f = named_function("identity", 0.0).unwrap();
        let (p, r) = fit(&*f, (0.0, 0.5), &FitOptions { degree: 1, pieces: 1, n_bits: 4, eps: 1e-3 }).unwrap();
        assert_eq!(p.row(0), &[0, 8]);
        assert!(r.worst() < 1e-15);
    }

    #[test]
    fn unit_identity_clamps() {
        let f = |x: f64| x;
        let (p, r) = fit(&f, (0.0, 1.0), &FitOptions { degree: 1, pieces: 1, n_bits: 8, eps: 1e-2 }).unwrap();
        assert_eq!(p.output_scale(), 1.0);
        assert_eq!(p.row(0)[1], 255);
        assert!(r.worst() <= 2f64.powi(-8));
    }

    #[test]
    fn constant_rounds_once() {
        let f = |_: f64| 0.3;
        let (p, r) = fit(&f, (0.0, 1.0), &FitOptions { degree: 3, pieces: 2, n_bits: 6, eps: 1e-2 }).unwrap();
        for j in 0..2 {
            assert_eq!(p.row(j), &[19, 0, 0, 0]);
        }
        assert!(r.worst() <= 2f64.powi(-7));
    }

    #[test]
    fn scale_for_large_values() {
        let f = |x: f64| 3.0 * x;
        let (p, r) = fit(&f, (0.0, 1.0), &FitOptions { degree: 1, pieces: 1, n_bits: 8, eps: 1e-2 }).unwrap();
        assert_eq!(p.output_scale(), 4.0);
        assert!(r.within_target);
    }

    #[test]
    fn rejects_bad_input() {
        let f = |x: f64| 1.0 / x;
        let o = FitOptions { degree: 1, pieces: 2, n_bits: 8, eps: 1e-2 };
        assert!(matches!(fit(&f, (-1.0, 1.0), &o), Err(QaaError::Unbounded(_))));
        assert!(fit(&f, (1.0, 1.0), &o).is_err());
        assert!(fit(&f, (1.0, 2.0), &FitOptions { degree: 9, ..o }).is_err());
        assert!(named_function("relu6", 0.1).is_none());
    }
}
