//! Least-squares fit of the cumulative-Gaussian sigmoid
//! `d(k) ≈ Φ((log10 k − μ) / σ)` to a rank-diversity curve.
//!
//! Protocol:
//! 1. Points are grouped into logarithmic rank bins, [`BINS_PER_DECADE`] per
//!    decade. Each group contributes one residual: the mean of the model over
//!    the group's ranks minus the mean of the observed `d` over the same ranks.
//! 2. Initial `(μ, σ)` from a probit line: regress `Φ⁻¹(d̄)` on mean
//!    `log10 k` with `d̄` clamped to `[1/(2T), 1 − 1/(2T)]`.
//! 3. Damped Gauss–Newton on the `d` scale until the full step is shorter
//!    than [`STEP_TOL`] or [`MAX_ITER`] iterations pass. Each step is halved
//!    up to [`MAX_HALVINGS`] times while the loss does not decrease.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rankdiv::RankDiversityCurve;
use crate::special::{normal_cdf, normal_pdf, normal_quantile};

pub const BINS_PER_DECADE: f64 = 25.0;
pub const STEP_TOL: f64 = 1e-9;
pub const MAX_ITER: u32 = 200;
pub const MAX_HALVINGS: u32 = 30;
pub const MIN_POINTS: usize = 8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FitError {
    #[error("sigma must be positive, got {0}")]
    NonPositiveSigma(f64),
    #[error("rank must be positive, got {0}")]
    InvalidRank(f64),
    #[error("curve has {0} points, at least 8 are needed")]
    TooFewPoints(usize),
    #[error("degenerate curve: every clamped value lies on one side of 1/2")]
    Degenerate,
    #[error("non-finite value in input")]
    NonFinite,
}

/// Fitted `(μ, σ)` in log10-rank units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SigmoidParams {
    pub mu: f64,
    pub sigma: f64,
    /// Root mean square of the group residuals.
    pub rmse: f64,
    /// Number of fitted (grouped) points.
    pub n_points: usize,
}

impl SigmoidParams {
    pub fn predict(&self, k: f64) -> f64 {
        normal_cdf((k.log10() - self.mu) / self.sigma)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SigmoidFit {
    pub params: SigmoidParams,
    /// False when the iteration cap was hit; `params` then holds the best
    /// point found.
    pub converged: bool,
    pub iterations: u32,
}

/// `Φ((log10 k − μ) / σ)`.
pub fn sigmoid_eval(mu: f64, sigma: f64, k: f64) -> Result<f64, FitError> {
    if !(sigma > 0.0) {
        return Err(FitError::NonPositiveSigma(sigma));
    }
    if !(k > 0.0) {
        return Err(FitError::InvalidRank(k));
    }
    Ok(normal_cdf((k.log10() - mu) / sigma))
}

/// Ranks of one log bin and the mean observed value over them.
#[derive(Debug, Clone)]
struct Group {
    log_ranks: Vec<f64>,
    mean_d: f64,
}

/// The grouped least-squares problem. Exposed for gradient checks.
#[derive(Debug, Clone)]
pub struct FitProblem {
    groups: Vec<Group>,
    clamp: f64,
}

impl FitProblem {
    /// Groups `(rank, d)` samples; `bins` is the curve's `T`, used for the
    /// probit clamp.
    pub fn new(samples: &[(f64, f64)], bins: u32) -> Result<Self, FitError> {
        if samples
            .iter()
            .any(|&(k, d)| !k.is_finite() || !d.is_finite())
        {
            return Err(FitError::NonFinite);
        }
        if let Some(&(k, _)) = samples.iter().find(|(k, _)| !(*k > 0.0)) {
            return Err(FitError::InvalidRank(k));
        }
        if samples.len() < MIN_POINTS {
            return Err(FitError::TooFewPoints(samples.len()));
        }
        let clamp = 1.0 / (2.0 * f64::from(bins.max(1)));
        let clamped = |d: f64| d.clamp(clamp, 1.0 - clamp);
        let below = samples.iter().any(|&(_, d)| clamped(d) < 0.5);
        let above = samples.iter().any(|&(_, d)| clamped(d) > 0.5);
        if !(below && above) {
            return Err(FitError::Degenerate);
        }

        let mut sorted: Vec<(f64, f64)> = samples.iter().map(|&(k, d)| (k.log10(), d)).collect();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut groups: Vec<Group> = Vec::new();
        let mut current_key = i64::MIN;
        let mut sum_d = 0.0;
        for (x, d) in sorted {
            // Nudge so exact powers of ten land in their own bin despite
            // rounding in log10.
            let key = (x * BINS_PER_DECADE + 1e-9).floor() as i64;
            if key != current_key {
                if let Some(g) = groups.last_mut() {
                    g.mean_d = sum_d / g.log_ranks.len() as f64;
                }
                groups.push(Group {
                    log_ranks: Vec::new(),
                    mean_d: 0.0,
                });
                current_key = key;
                sum_d = 0.0;
            }
            let g = groups.last_mut().expect("group pushed above");
            g.log_ranks.push(x);
            sum_d += d;
        }
        if let Some(g) = groups.last_mut() {
            g.mean_d = sum_d / g.log_ranks.len() as f64;
        }
        Ok(FitProblem { groups, clamp })
    }

    pub fn n_points(&self) -> usize {
        self.groups.len()
    }

    /// Sum of squared group residuals.
    pub fn loss(&self, mu: f64, sigma: f64) -> f64 {
        self.groups
            .iter()
            .map(|g| {
                let r = group_model(g, mu, sigma) - g.mean_d;
                r * r
            })
            .sum()
    }

    /// Analytic gradient of [`FitProblem::loss`].
    pub fn gradient(&self, mu: f64, sigma: f64) -> [f64; 2] {
        let mut grad = [0.0; 2];
        for g in &self.groups {
            let (m, dmu, dsigma) = group_model_jac(g, mu, sigma);
            let r = m - g.mean_d;
            grad[0] += 2.0 * r * dmu;
            grad[1] += 2.0 * r * dsigma;
        }
        grad
    }

    fn initial_guess(&self) -> (f64, f64) {
        let pts: Vec<(f64, f64)> = self
            .groups
            .iter()
            .map(|g| {
                let x = g.log_ranks.iter().sum::<f64>() / g.log_ranks.len() as f64;
                let d = g.mean_d.clamp(self.clamp, 1.0 - self.clamp);
                (x, normal_quantile(d))
            })
            .collect();
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
        if slope > 0.0 && slope.is_finite() {
            let intercept = my - slope * mx;
            (-intercept / slope, 1.0 / slope)
        } else {
            let x_lo = pts.first().map_or(0.0, |p| p.0);
            let x_hi = pts.last().map_or(1.0, |p| p.0);
            let crossing = self
                .groups
                .iter()
                .zip(&pts)
                .find(|(g, _)| g.mean_d >= 0.5)
                .map_or(0.5 * (x_lo + x_hi), |(_, p)| p.0);
            (crossing, ((x_hi - x_lo) / 4.0).max(0.1))
        }
    }

    /// Runs the damped Gauss–Newton iteration from the probit start.
    pub fn solve(&self) -> SigmoidFit {
        let (mut mu, mut sigma) = self.initial_guess();
        let mut loss = self.loss(mu, sigma);
        let mut converged = false;
        let mut iterations = 0;
        while iterations < MAX_ITER {
            iterations += 1;
            let (mut a11, mut a12, mut a22, mut b1, mut b2) = (0.0, 0.0, 0.0, 0.0, 0.0);
            for g in &self.groups {
                let (m, jm, js) = group_model_jac(g, mu, sigma);
                let r = m - g.mean_d;
                a11 += jm * jm;
                a12 += jm * js;
                a22 += js * js;
                b1 -= jm * r;
                b2 -= js * r;
            }
            let det = a11 * a22 - a12 * a12;
            if !(det.abs() > 0.0) || !det.is_finite() {
                break;
            }
            let step_mu = (a22 * b1 - a12 * b2) / det;
            let step_sigma = (a11 * b2 - a12 * b1) / det;
            let full_step = step_mu.hypot(step_sigma);

            let mut alpha = 1.0;
            let mut accepted = None;
            for _ in 0..=MAX_HALVINGS {
                let cand_sigma = sigma + alpha * step_sigma;
                if cand_sigma > 0.0 {
                    let cand_mu = mu + alpha * step_mu;
                    let cand_loss = self.loss(cand_mu, cand_sigma);
                    if cand_loss <= loss {
                        accepted = Some((cand_mu, cand_sigma, cand_loss));
                        break;
                    }
                }
                alpha *= 0.5;
            }
            // The applied step is what matters: near an ill-conditioned
            // optimum the raw step is rounding noise that the line search
            // shrinks away.
            let applied = match accepted {
                Some((m, s, l)) => {
                    mu = m;
                    sigma = s;
                    loss = l;
                    alpha * full_step
                }
                None => 0.0,
            };
            if applied < STEP_TOL {
                converged = true;
                break;
            }
        }
        SigmoidFit {
            params: SigmoidParams {
                mu,
                sigma,
                rmse: (loss / self.n_points() as f64).sqrt(),
                n_points: self.n_points(),
            },
            converged,
            iterations,
        }
    }
}

fn group_model(g: &Group, mu: f64, sigma: f64) -> f64 {
    let sum: f64 = g
        .log_ranks
        .iter()
        .map(|&x| normal_cdf((x - mu) / sigma))
        .sum();
    sum / g.log_ranks.len() as f64
}

/// Group model value and its partial derivatives in `(μ, σ)`.
fn group_model_jac(g: &Group, mu: f64, sigma: f64) -> (f64, f64, f64) {
    let (mut m, mut dmu, mut dsigma) = (0.0, 0.0, 0.0);
    for &x in &g.log_ranks {
        let z = (x - mu) / sigma;
        let pdf = normal_pdf(z);
        m += normal_cdf(z);
        dmu -= pdf / sigma;
        dsigma -= pdf * z / sigma;
    }
    let n = g.log_ranks.len() as f64;
    (m / n, dmu / n, dsigma / n)
}

/// Fits `(rank, d)` samples; `bins` is the `T` of the source curve.
pub fn fit_sigmoid_samples(samples: &[(f64, f64)], bins: u32) -> Result<SigmoidFit, FitError> {
    Ok(FitProblem::new(samples, bins)?.solve())
}

pub fn fit_sigmoid(curve: &RankDiversityCurve) -> Result<SigmoidFit, FitError> {
    let samples: Vec<(f64, f64)> = curve.points().map(|(k, d)| (k as f64, d)).collect();
    fit_sigmoid_samples(&samples, curve.bins())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model_samples(mu: f64, sigma: f64, ranks: impl Iterator<Item = f64>) -> Vec<(f64, f64)> {
        ranks.map(|k| (k, sigmoid_eval(mu, sigma, k).unwrap())).collect()
    }

    #[test]
    fn eval_reference_points() {
        assert!((sigmoid_eval(2.0, 0.5, 100.0).unwrap() - 0.5).abs() < 1e-15);
        let k = 10f64.powf(2.5);
        assert!((sigmoid_eval(2.0, 0.5, k).unwrap() - 0.841_344_746_068_543).abs() < 1e-9);
        let k = 10f64.powf(2.0 + 8.0 * 0.5);
        assert!(sigmoid_eval(2.0, 0.5, k).unwrap() >= 1.0 - 1e-12);
        assert!(matches!(
            sigmoid_eval(0.0, 0.0, 1.0),
            Err(FitError::NonPositiveSigma(_))
        ));
        assert!(sigmoid_eval(0.0, -1.0, 1.0).is_err());
    }

    #[test]
    fn recovers_noiseless_model() {
        let s = model_samples(2.0, 0.5, (1..=10_000).map(f64::from));
        let fit = fit_sigmoid_samples(&s, 1000).unwrap();
        assert!(fit.converged);
        assert!((fit.params.mu - 2.0).abs() < 1e-6, "{:?}", fit);
        assert!((fit.params.sigma - 0.5).abs() < 1e-6, "{:?}", fit);
        assert!(fit.params.rmse < 1e-9);
    }

    #[test]
    fn degenerate_curves_rejected() {
        let ones: Vec<(f64, f64)> = (1..=50).map(|k| (f64::from(k), 1.0)).collect();
        assert_eq!(fit_sigmoid_samples(&ones, 10).unwrap_err(), FitError::Degenerate);
        let few: Vec<(f64, f64)> = (1..=7).map(|k| (f64::from(k), 0.1 * f64::from(k))).collect();
        assert_eq!(fit_sigmoid_samples(&few, 10).unwrap_err(), FitError::TooFewPoints(7));
    }

    #[test]
    fn grouping_is_logarithmic() {
        let s = model_samples(1.0, 0.5, (1..=1000).map(f64::from));
        let p = FitProblem::new(&s, 10).unwrap();
        // ranks 1..9 fill 9 distinct bins, the next two decades 25 each,
        // and k = 1000 opens a new one.
        assert_eq!(p.n_points(), 9 + 25 + 25 + 1);
    }
}
