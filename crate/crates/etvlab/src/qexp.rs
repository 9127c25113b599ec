//! The q-exponential distribution family, its q-logarithm linearization, and
//! the grid fit used to describe pooled ETV frequency distributions.
//!
//! The density is `p(x) = p0 * [1 - (1-q) x/x0]^(1/(1-q))` with the
//! normalization `p0 = (2-q)/x0`, truncated to zero where the bracket goes
//! negative. Applying the q-logarithm `ln_q(x) = (x^(1-q) - 1)/(1-q)` to the
//! density gives a straight line in `x`, which is what the fit exploits: scan
//! q on a fine grid, solve the weighted least-squares line in q-log space in
//! closed form, and keep the q with the best weighted goodness of fit.

use thiserror::Error;

use crate::stats::PooledDistribution;

/// Below this distance from 1, q is treated as exactly 1 (the ordinary
/// exponential / natural-logarithm limit).
const Q_ONE_EPS: f64 = 1e-9;

/// Parameters of a q-exponential density. `p0` is derived from the
/// normalization condition and therefore never stored.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QExpParams {
    pub q: f64,
    pub x0: f64,
}

impl QExpParams {
    pub fn new(q: f64, x0: f64) -> Self {
        assert!(q < 2.0, "q must be below 2 for a normalizable density");
        assert!(x0 > 0.0, "x0 must be positive");
        Self { q, x0 }
    }

    /// Normalization constant `p0 = (2 - q) / x0`.
    pub fn p0(&self) -> f64 {
        (2.0 - self.q) / self.x0
    }
}

/// Result of fitting a q-exponential to a pooled distribution.
#[derive(Clone, Copy, Debug)]
pub struct QExpFit {
    pub params: QExpParams,
    /// Power-law tail exponent `1/(q-1)`; only meaningful for q > 1.
    pub gamma: f64,
    /// Weighted coefficient of determination of the fitted line in q-log space.
    pub score: f64,
}

#[derive(Debug, Error, PartialEq)]
pub enum FitError {
    #[error("need at least 3 support points with positive frequency, found {0}")]
    TooFewPoints(usize),
    #[error("all frequencies are equal; the fit is degenerate")]
    DegenerateFrequencies,
    #[error("no q in the search grid produced admissible parameters")]
    NoAdmissibleParameters,
}

/// Evaluate the q-exponential density at `x >= 0`.
///
/// Returns 0 outside the support, i.e. where `1 - (1-q) x/x0 < 0`.
pub fn q_exponential(params: &QExpParams, x: f64) -> f64 {
    let QExpParams { q, x0 } = *params;
    let p0 = params.p0();
    if (q - 1.0).abs() < Q_ONE_EPS {
        return p0 * (-x / x0).exp();
    }
    let u = (1.0 - q) * x / x0;
    let base = 1.0 - u;
    if base < 0.0 {
        return 0.0;
    }
    // exp(ln1p(-u)/(1-q)) is numerically stable for q near 1.
    p0 * ((-u).ln_1p() / (1.0 - q)).exp()
}

/// The q-logarithm `ln_q(x) = (x^(1-q) - 1)/(1-q)`, with `ln_1 = ln`.
///
/// Inverse of the q-exponential function on its support.
pub fn q_logarithm(q: f64, x: f64) -> f64 {
    assert!(x > 0.0, "q_logarithm is only defined for positive x");
    if (q - 1.0).abs() < Q_ONE_EPS {
        return x.ln();
    }
    ((1.0 - q) * x.ln()).exp_m1() / (1.0 - q)
}

/// The straight line obtained by q-logging the density:
/// `ln_q p(x) = ln_q p0 - [1 + (1-q) ln_q p0] * x / x0`.
pub fn linearized_form(params: &QExpParams, x: f64) -> f64 {
    let QExpParams { q, x0 } = *params;
    let lnq_p0 = q_logarithm(q, params.p0());
    lnq_p0 - (1.0 + (1.0 - q) * lnq_p0) * x / x0
}

/// Power-law tail exponent `gamma = 1/(q-1)` for q > 1.
pub fn gamma_of(q: f64) -> f64 {
    assert!(q > 1.0, "the power-law exponent requires q > 1");
    1.0 / (q - 1.0)
}

/// Fit (q, x0) to a pooled ETV distribution.
///
/// For each q on the grid 1.001..=1.999 (step 0.001) the frequencies are
/// q-logged and a weighted least-squares line is solved in closed form, with
/// weights proportional to the pooled counts so high-frequency points anchor
/// the fit. `x0` is recovered from the slope and intercept, `p0` from the
/// normalization. The q with the highest weighted R^2 wins.
pub fn fit(dist: &PooledDistribution) -> Result<QExpFit, FitError> {
    let pts = dist.frequencies();
    if pts.len() < 3 {
        return Err(FitError::TooFewPoints(pts.len()));
    }
    let first = pts[0].1;
    if pts.iter().all(|&(_, f)| f == first) {
        return Err(FitError::DegenerateFrequencies);
    }

    let xs: Vec<f64> = pts.iter().map(|&(x, _)| x as f64).collect();
    let ws: Vec<f64> = pts.iter().map(|&(_, f)| f).collect();

    let mut best: Option<(f64, f64, f64)> = None; // (score, q, x0)
    for step in 1..=999 {
        let q = 1.0 + step as f64 * 0.001;
        let ys: Vec<f64> = pts.iter().map(|&(_, f)| q_logarithm(q, f)).collect();

        let (mut sw, mut swx, mut swy, mut swxx, mut swxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for i in 0..xs.len() {
            let (w, x, y) = (ws[i], xs[i], ys[i]);
            sw += w;
            swx += w * x;
            swy += w * y;
            swxx += w * x * x;
            swxy += w * x * y;
        }
        let denom = sw * swxx - swx * swx;
        if denom <= 0.0 {
            continue;
        }
        let slope = (sw * swxy - swx * swy) / denom;
        let intercept = (swy - slope * swx) / sw;

        let x0 = -(1.0 + (1.0 - q) * intercept) / slope;
        if !(x0 > 0.0) || !x0.is_finite() {
            continue;
        }

        let y_mean = swy / sw;
        let (mut sse, mut sst) = (0.0, 0.0);
        for i in 0..xs.len() {
            let r = ys[i] - (intercept + slope * xs[i]);
            sse += ws[i] * r * r;
            let d = ys[i] - y_mean;
            sst += ws[i] * d * d;
        }
        if sst <= 0.0 {
            continue;
        }
        let score = 1.0 - sse / sst;
        if best.map_or(true, |(s, _, _)| score > s) {
            best = Some((score, q, x0));
        }
    }

    let (score, q, x0) = best.ok_or(FitError::NoAdmissibleParameters)?;
    Ok(QExpFit {
        params: QExpParams::new(q, x0),
        gamma: gamma_of(q),
        score,
    })
}
