//! Binomial proportion intervals.

use serde::Serialize;

use crate::special::normal_quantile;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }
}

/// A numeric value with its Monte Carlo standard error (zero when exact).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            std_error: 0.0,
        }
    }

    /// Sample mean and standard error of the mean.
    pub fn from_moments(sum: f64, sum_sq: f64, n: usize) -> Self {
        let n = n as f64;
        let mean = sum / n;
        let var = ((sum_sq / n - mean * mean) * n / (n - 1.0).max(1.0)).max(0.0);
        Self {
            value: mean,
            std_error: (var / n).sqrt(),
        }
    }
}

/// Wilson score interval for `successes` out of `trials` at confidence `level`.
/// Zero trials give the uninformative interval `[0, 1]`.
pub fn wilson_interval(successes: u64, trials: u64, level: f64) -> Interval {
    if trials == 0 {
        return Interval { lo: 0.0, hi: 1.0 };
    }
    let z = normal_quantile(1.0 - 0.5 * (1.0 - level));
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    // clamp so the point estimate is always inside despite rounding
    Interval {
        lo: (center - half).max(0.0).min(p),
        hi: (center + half).min(1.0).max(p),
    }
}

/// Two-sided z value for a confidence level.
pub fn z_value(level: f64) -> f64 {
    normal_quantile(1.0 - 0.5 * (1.0 - level))
}
