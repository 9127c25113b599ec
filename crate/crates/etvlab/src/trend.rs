//! Power-trend fitting of metric time series: `f(t) = a * t^b + c`.
//!
//! The exponent b is found by a coarse grid over [-4, 0) refined with a
//! golden-section search, with (a, c) solved in closed form at each probe.
//! The reported regression value R is the Pearson correlation between the
//! fitted and observed values.

use std::fmt;

use thiserror::Error;

/// Metrics whose time evolution gets a power-trend fit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Metric {
    Etv,
    X0,
    Q,
    Gamma,
}

impl Metric {
    pub const ALL: [Metric; 4] = [Metric::Etv, Metric::X0, Metric::Q, Metric::Gamma];
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Metric::Etv => "ETV",
            Metric::X0 => "x0",
            Metric::Q => "q",
            Metric::Gamma => "gamma",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum TrendError {
    #[error("need at least 4 checkpoints, got {0}")]
    TooFewPoints(usize),
    #[error("checkpoints must be strictly increasing and at least 1")]
    BadCheckpoints,
    #[error("checkpoint and value counts differ: {checkpoints} vs {values}")]
    LengthMismatch { checkpoints: usize, values: usize },
    #[error("series must share identical checkpoints")]
    MismatchedSeries,
}

/// One metric sampled at increasing generation checkpoints.
#[derive(Clone, Debug)]
pub struct MetricSeries {
    pub metric: Metric,
    checkpoints: Vec<u32>,
    values: Vec<f64>,
}

impl MetricSeries {
    pub fn new(metric: Metric, checkpoints: Vec<u32>, values: Vec<f64>) -> Result<Self, TrendError> {
        if checkpoints.len() != values.len() {
            return Err(TrendError::LengthMismatch {
                checkpoints: checkpoints.len(),
                values: values.len(),
            });
        }
        if checkpoints.len() < 4 {
            return Err(TrendError::TooFewPoints(checkpoints.len()));
        }
        if checkpoints[0] < 1 || checkpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(TrendError::BadCheckpoints);
        }
        Ok(Self {
            metric,
            checkpoints,
            values,
        })
    }

    pub fn checkpoints(&self) -> &[u32] {
        &self.checkpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Fitted parameters of `f(t) = a * t^b + c` plus the regression value R.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerTrendParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub r: f64,
}

impl PowerTrendParams {
    pub fn eval(&self, t: f64) -> f64 {
        self.a * t.powf(self.b) + self.c
    }
}

const B_MIN: f64 = -4.0;
const B_MAX: f64 = -0.001;
const B_STEP: f64 = 0.001;

/// Fit the power trend to a validated series.
pub fn fit_trend(series: &MetricSeries) -> PowerTrendParams {
    let ts: Vec<f64> = series.checkpoints.iter().map(|&t| f64::from(t)).collect();
    fit_power_trend(&ts, &series.values)
}

/// Low-level fit over raw `(t, y)` samples; the result does not depend on
/// the order of the points.
pub fn fit_power_trend(ts: &[f64], ys: &[f64]) -> PowerTrendParams {
    assert_eq!(ts.len(), ys.len());
    assert!(ts.len() >= 4, "need at least 4 points");
    assert!(ts.iter().all(|&t| t >= 1.0), "checkpoints start at t = 1");

    if ys.iter().all(|&y| y == ys[0]) {
        // Constant series: flat line by convention.
        return PowerTrendParams {
            a: 0.0,
            b: -1.0,
            c: ys[0],
            r: 1.0,
        };
    }

    let sse_of = |b: f64| linear_ls(ts, ys, b).2;

    let steps = ((B_MAX - B_MIN) / B_STEP).round() as usize;
    let mut best_b = B_MAX;
    let mut best_sse = f64::INFINITY;
    for k in 0..=steps {
        let b = B_MIN + k as f64 * B_STEP;
        let sse = sse_of(b);
        if sse < best_sse {
            best_sse = sse;
            best_b = b;
        }
    }
    let lo = (best_b - B_STEP).max(B_MIN);
    let hi = (best_b + B_STEP).min(B_MAX);
    let b = golden_min(sse_of, lo, hi, 1e-12);

    let (a, c, _) = linear_ls(ts, ys, b);
    let fitted: Vec<f64> = ts.iter().map(|&t| a * t.powf(b) + c).collect();
    PowerTrendParams {
        a,
        b,
        c,
        r: pearson(&fitted, ys),
    }
}

/// Closed-form least squares for (a, c) at fixed exponent b; returns the
/// residual sum of squares as well.
fn linear_ls(ts: &[f64], ys: &[f64], b: f64) -> (f64, f64, f64) {
    let n = ts.len() as f64;
    let (mut su, mut sy, mut suu, mut suy) = (0.0, 0.0, 0.0, 0.0);
    for (&t, &y) in ts.iter().zip(ys) {
        let u = t.powf(b);
        su += u;
        sy += y;
        suu += u * u;
        suy += u * y;
    }
    let denom = n * suu - su * su;
    if denom.abs() < 1e-12 * n * suu.max(1e-300) {
        return (0.0, sy / n, f64::INFINITY);
    }
    let a = (n * suy - su * sy) / denom;
    let c = (sy - a * su) / n;
    let sse = ts
        .iter()
        .zip(ys)
        .map(|(&t, &y)| {
            let r = a * t.powf(b) + c - y;
            r * r
        })
        .sum();
    (a, c, sse)
}

fn golden_min<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    const INVPHI: f64 = 0.618_033_988_749_895;
    let mut x1 = hi - INVPHI * (hi - lo);
    let mut x2 = lo + INVPHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INVPHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INVPHI * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

/// Pearson correlation; 0 when either side has no variance.
pub fn pearson(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return 0.0;
    }
    sxy / (sxx * syy).sqrt()
}

/// Pairwise Pearson correlation of metric series sharing one checkpoint set.
#[derive(Clone, Copy, Debug)]
pub struct PairCorrelation {
    pub first: Metric,
    pub second: Metric,
    pub r: f64,
}

pub fn correlation_signs(series: &[MetricSeries]) -> Result<Vec<PairCorrelation>, TrendError> {
    for s in series.iter().skip(1) {
        if s.checkpoints != series[0].checkpoints {
            return Err(TrendError::MismatchedSeries);
        }
    }
    let mut pairs = Vec::new();
    for i in 0..series.len() {
        for j in (i + 1)..series.len() {
            pairs.push(PairCorrelation {
                first: series[i].metric,
                second: series[j].metric,
                r: pearson(&series[i].values, &series[j].values),
            });
        }
    }
    Ok(pairs)
}
