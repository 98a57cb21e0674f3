//! Single-feature logistic regression of match outcome on rating difference.
//!
//! The model is `P(y = 1 | x) = 1 / (1 + exp(-(b0 + b1 x)))`, fitted by
//! maximizing the Bernoulli log-likelihood with Newton-Raphson from (0, 0).
//! With one feature the gradient and Hessian are closed-form, so convergence
//! is quadratic and a fit takes a handful of iterations. Standard errors come
//! from the inverse observed Fisher information at the optimum; two-sided
//! p-values from the standard normal via a complementary error function.

use thiserror::Error;

/// Newton-Raphson iteration cap.
pub const MAX_ITERATIONS: usize = 100;
/// Converged when every score (gradient) component is below this...
pub const GRADIENT_TOLERANCE: f64 = 1e-10;
/// ...or when the parameter step is below this.
pub const STEP_TOLERANCE: f64 = 1e-10;
/// A coefficient walking past this magnitude mid-iteration means the classes
/// are (quasi-)separable and the MLE does not exist.
pub const SEPARATION_BOUND: f64 = 1e3;

#[derive(Debug, Error, PartialEq)]
pub enum FitError {
    #[error("need at least 2 points to fit, got {0}")]
    TooFewPoints(usize),
    #[error("labels are single-class (all-positive: {0}); both outcomes must be present")]
    SingleClass(bool),
    #[error("perfect separation detected: coefficients diverged past {SEPARATION_BOUND}")]
    Separation,
    #[error("degenerate design: feature has no variation")]
    DegenerateDesign,
    #[error("cannot evaluate metrics on an empty point set")]
    EmptyEvaluation,
    #[error("threshold must lie strictly between 0 and 1, got {0}")]
    InvalidThreshold(f64),
    #[error("feature values must be finite")]
    NonFiniteFeature,
}

/// One observation: rating difference and whether player 1 won.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabeledPoint {
    pub x: f64,
    pub y: bool,
}

impl LabeledPoint {
    pub fn new(x: f64, y: bool) -> Self {
        Self { x, y }
    }
}

/// A fitted logistic model with Wald inference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogisticModel {
    pub beta_0: f64,
    pub beta_1: f64,
    pub se_0: f64,
    pub se_1: f64,
    pub z_0: f64,
    pub z_1: f64,
    pub p_0: f64,
    pub p_1: f64,
    pub n_obs: usize,
    pub converged: bool,
}

impl LogisticModel {
    /// Win probability for player 1 at rating difference `x`.
    pub fn predict_prob(&self, x: f64) -> f64 {
        sigmoid(self.beta_0 + self.beta_1 * x)
    }
}

/// Confusion counts and derived rates at a fixed threshold. The positive
/// class is "player 1 wins".
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassificationMetrics {
    pub true_pos: usize,
    pub false_pos: usize,
    pub true_neg: usize,
    pub false_neg: usize,
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

#[inline]
fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Bernoulli log-likelihood of the data at `(beta_0, beta_1)`.
pub fn log_likelihood(points: &[LabeledPoint], beta_0: f64, beta_1: f64) -> f64 {
    points
        .iter()
        .map(|p| {
            let z = beta_0 + beta_1 * p.x;
            let y = if p.y { 1.0 } else { 0.0 };
            // y*z - ln(1 + e^z), with the stable form for large |z|.
            let log1pexp = if z > 0.0 {
                z + (-z).exp().ln_1p()
            } else {
                z.exp().ln_1p()
            };
            y * z - log1pexp
        })
        .sum()
}

/// Score (gradient of the log-likelihood): `(sum(y - p), sum(x (y - p)))`.
pub fn score_gradient(points: &[LabeledPoint], beta_0: f64, beta_1: f64) -> (f64, f64) {
    let mut g0 = 0.0;
    let mut g1 = 0.0;
    for p in points {
        let resid = (if p.y { 1.0 } else { 0.0 }) - sigmoid(beta_0 + beta_1 * p.x);
        g0 += resid;
        g1 += p.x * resid;
    }
    (g0, g1)
}

/// Observed Fisher information entries `(sum w, sum w x, sum w x^2)` with
/// `w = p (1 - p)`.
fn information(points: &[LabeledPoint], beta_0: f64, beta_1: f64) -> (f64, f64, f64) {
    let mut sw = 0.0;
    let mut swx = 0.0;
    let mut swx2 = 0.0;
    for p in points {
        let prob = sigmoid(beta_0 + beta_1 * p.x);
        let w = prob * (1.0 - prob);
        sw += w;
        swx += w * p.x;
        swx2 += w * p.x * p.x;
    }
    (sw, swx, swx2)
}

/// Two-sided standard-normal p-value for a z-statistic: `erfc(|z| / sqrt 2)`.
pub fn two_sided_p_value(z: f64) -> f64 {
    erfc(z.abs() / std::f64::consts::SQRT_2)
}

/// Complementary error function via the rational Chebyshev approximation of
/// Press et al., Numerical Recipes (erfcc): relative error below 1.2e-7
/// everywhere, ample for Wald p-values.
pub fn erfc(x: f64) -> f64 {
    let z = x.abs();
    let t = 1.0 / (1.0 + 0.5 * z);
    let poly = -z * z - 1.26551223
        + t * (1.00002368
            + t * (0.37409196
                + t * (0.09678418
                    + t * (-0.18628806
                        + t * (0.27886807
                            + t * (-1.13520398
                                + t * (1.48851587 + t * (-0.82215223 + t * 0.17087277))))))));
    let ans = t * poly.exp();
    if x >= 0.0 {
        ans
    } else {
        2.0 - ans
    }
}

/// Fits the model by Newton-Raphson from (0, 0).
///
/// Returns `converged = false` (with the partial estimate) if the iteration
/// cap is hit; separation and single-class inputs are hard errors.
pub fn fit_logistic(points: &[LabeledPoint]) -> Result<LogisticModel, FitError> {
    if points.len() < 2 {
        return Err(FitError::TooFewPoints(points.len()));
    }
    if points.iter().any(|p| !p.x.is_finite()) {
        return Err(FitError::NonFiniteFeature);
    }
    let positives = points.iter().filter(|p| p.y).count();
    if positives == 0 || positives == points.len() {
        return Err(FitError::SingleClass(positives > 0));
    }
    if points.iter().all(|p| p.x == points[0].x) {
        return Err(FitError::DegenerateDesign);
    }

    let mut beta_0 = 0.0;
    let mut beta_1 = 0.0;
    let mut converged = false;
    for _ in 0..MAX_ITERATIONS {
        let (g0, g1) = score_gradient(points, beta_0, beta_1);
        if g0.abs().max(g1.abs()) < GRADIENT_TOLERANCE {
            converged = true;
            break;
        }
        let (sw, swx, swx2) = information(points, beta_0, beta_1);
        let det = sw * swx2 - swx * swx;
        // The feature varies, so a collapsing information matrix means the
        // predicted probabilities are saturating: (quasi-)separation.
        if !det.is_finite() || det <= 1e-12 * sw.max(1.0) * swx2.max(1.0) {
            return Err(FitError::Separation);
        }
        let step_0 = (swx2 * g0 - swx * g1) / det;
        let step_1 = (sw * g1 - swx * g0) / det;
        beta_0 += step_0;
        beta_1 += step_1;
        if beta_0.abs() > SEPARATION_BOUND || beta_1.abs() > SEPARATION_BOUND {
            return Err(FitError::Separation);
        }
        if step_0.abs().max(step_1.abs()) < STEP_TOLERANCE {
            converged = true;
            break;
        }
    }

    let (sw, swx, swx2) = information(points, beta_0, beta_1);
    let det = sw * swx2 - swx * swx;
    if !det.is_finite() || det <= 0.0 {
        return Err(FitError::Separation);
    }
    let se_0 = (swx2 / det).sqrt();
    let se_1 = (sw / det).sqrt();
    let z_0 = beta_0 / se_0;
    let z_1 = beta_1 / se_1;
    Ok(LogisticModel {
        beta_0,
        beta_1,
        se_0,
        se_1,
        z_0,
        z_1,
        p_0: two_sided_p_value(z_0),
        p_1: two_sided_p_value(z_1),
        n_obs: points.len(),
        converged,
    })
}

/// Confusion counts and rates of threshold predictions on a point set.
/// Predicts 1 exactly when `predict_prob(x) >= threshold`.
pub fn evaluate_metrics(
    model: &LogisticModel,
    points: &[LabeledPoint],
    threshold: f64,
) -> Result<ClassificationMetrics, FitError> {
    if points.is_empty() {
        return Err(FitError::EmptyEvaluation);
    }
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(FitError::InvalidThreshold(threshold));
    }
    let mut tp = 0usize;
    let mut fp = 0usize;
    let mut tn = 0usize;
    let mut fneg = 0usize;
    for p in points {
        let predicted = model.predict_prob(p.x) >= threshold;
        match (predicted, p.y) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, false) => tn += 1,
            (false, true) => fneg += 1,
        }
    }
    let total = points.len() as f64;
    let precision = if tp + fp > 0 {
        tp as f64 / (tp + fp) as f64
    } else {
        0.0
    };
    let recall = if tp + fneg > 0 {
        tp as f64 / (tp + fneg) as f64
    } else {
        0.0
    };
    let f1 = if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    };
    Ok(ClassificationMetrics {
        true_pos: tp,
        false_pos: fp,
        true_neg: tn,
        false_neg: fneg,
        accuracy: (tp + tn) as f64 / total,
        precision,
        recall,
        f1,
    })
}
