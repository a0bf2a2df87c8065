//! Catalog of univariate heavy-tailed claim laws.
//!
//! Class membership is curated from known analytic facts about each family,
//! not inferred from data. [`matuszewska_bounds`] is a finite-scale
//! diagnostic only.

use rand::distr::Open01;
use rand::Rng;

use crate::error::{Error, Result};
use crate::special::{normal_quantile, normal_sf};

/// Membership flags for the heavy-tailed classes, ordered by the chain
/// `R ⊂ C ⊂ D∩L ⊂ S ⊂ L` together with `R ⊂ P_D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassTags {
    pub regularly_varying: bool,
    pub consistently_varying: bool,
    pub dominated: bool,
    pub long_tailed: bool,
    pub subexponential: bool,
    pub positively_decreasing: bool,
}

impl ClassTags {
    /// Validated constructor; rejects combinations that break the inclusions.
    pub fn new(
        regularly_varying: bool,
        consistently_varying: bool,
        dominated: bool,
        long_tailed: bool,
        subexponential: bool,
        positively_decreasing: bool,
    ) -> Result<Self> {
        let tags = Self {
            regularly_varying,
            consistently_varying,
            dominated,
            long_tailed,
            subexponential,
            positively_decreasing,
        };
        tags.check()?;
        Ok(tags)
    }

    fn check(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::param(format!("class tags violate inclusion: {m}")));
        if self.regularly_varying && !self.consistently_varying {
            return bad("R but not C");
        }
        if self.regularly_varying && !self.positively_decreasing {
            return bad("R but not P_D");
        }
        if self.consistently_varying && !(self.dominated && self.long_tailed) {
            return bad("C but not D∩L");
        }
        if self.dominated && self.long_tailed && !self.subexponential {
            return bad("D∩L but not S");
        }
        if self.subexponential && !self.long_tailed {
            return bad("S but not L");
        }
        Ok(())
    }

    /// Tags shared by every member of `tags`.
    pub fn meet<'a>(tags: impl IntoIterator<Item = &'a ClassTags>) -> ClassTags {
        let mut out = ClassTags {
            regularly_varying: true,
            consistently_varying: true,
            dominated: true,
            long_tailed: true,
            subexponential: true,
            positively_decreasing: true,
        };
        for t in tags {
            out.regularly_varying &= t.regularly_varying;
            out.consistently_varying &= t.consistently_varying;
            out.dominated &= t.dominated;
            out.long_tailed &= t.long_tailed;
            out.subexponential &= t.subexponential;
            out.positively_decreasing &= t.positively_decreasing;
        }
        out
    }
}

/// Upper and lower Matuszewska indices where analytically known.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Matuszewska {
    Finite { lower: f64, upper: f64 },
    /// Tails lighter than every power: both indices are `+∞`.
    Unbounded,
}

impl Matuszewska {
    pub fn lower(&self) -> f64 {
        match self {
            Matuszewska::Finite { lower, .. } => *lower,
            Matuszewska::Unbounded => f64::INFINITY,
        }
    }

    pub fn upper(&self) -> f64 {
        match self {
            Matuszewska::Finite { upper, .. } => *upper,
            Matuszewska::Unbounded => f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailDistribution {
    /// Survival `(scale/x)^alpha` for `x ≥ scale`.
    Pareto { alpha: f64, scale: f64 },
    /// Survival `exp(−(x/scale)^shape)` with `shape ∈ (0, 1)`.
    HeavyWeibull { shape: f64, scale: f64 },
    Lognormal { mu: f64, sigma: f64 },
    /// Survival `(1 + x³)^{-1}`.
    CubicSurvival,
    /// Survival `(1 + x)^{-1}`.
    HarmonicSurvival,
}

impl TailDistribution {
    pub fn pareto(alpha: f64, scale: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::param(format!("pareto alpha = {alpha} must be > 0")));
        }
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::param(format!("pareto scale = {scale} must be > 0")));
        }
        Ok(Self::Pareto { alpha, scale })
    }

    pub fn heavy_weibull(shape: f64, scale: f64) -> Result<Self> {
        if !(shape > 0.0 && shape < 1.0) {
            return Err(Error::param(format!("heavy weibull shape = {shape} must lie in (0, 1)")));
        }
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::param(format!("heavy weibull scale = {scale} must be > 0")));
        }
        Ok(Self::HeavyWeibull { shape, scale })
    }

    pub fn lognormal(mu: f64, sigma: f64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(Error::param("lognormal mu must be finite"));
        }
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::param(format!("lognormal sigma = {sigma} must be > 0")));
        }
        Ok(Self::Lognormal { mu, sigma })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Pareto { .. } => "pareto",
            Self::HeavyWeibull { .. } => "heavy_weibull",
            Self::Lognormal { .. } => "lognormal",
            Self::CubicSurvival => "cubic_survival",
            Self::HarmonicSurvival => "harmonic_survival",
        }
    }

    pub fn survival(&self, x: f64) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        if x <= 0.0 {
            return 1.0;
        }
        match *self {
            Self::Pareto { alpha, scale } => {
                if x <= scale {
                    1.0
                } else {
                    (scale / x).powf(alpha)
                }
            }
            Self::HeavyWeibull { shape, scale } => (-(x / scale).powf(shape)).exp(),
            Self::Lognormal { mu, sigma } => normal_sf((x.ln() - mu) / sigma),
            Self::CubicSurvival => 1.0 / (1.0 + x * x * x),
            Self::HarmonicSurvival => 1.0 / (1.0 + x),
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        1.0 - self.survival(x)
    }

    /// Lebesgue density; zero off the support.
    pub fn density(&self, x: f64) -> f64 {
        if !(x > 0.0) {
            return 0.0;
        }
        match *self {
            Self::Pareto { alpha, scale } => {
                if x < scale {
                    0.0
                } else {
                    alpha / x * (scale / x).powf(alpha)
                }
            }
            Self::HeavyWeibull { shape, scale } => {
                let z = (x / scale).powf(shape);
                shape / x * z * (-z).exp()
            }
            Self::Lognormal { mu, sigma } => {
                let z = (x.ln() - mu) / sigma;
                (-0.5 * z * z).exp() / (x * sigma * (2.0 * std::f64::consts::PI).sqrt())
            }
            Self::CubicSurvival => {
                let c = 1.0 + x * x * x;
                3.0 * x * x / (c * c)
            }
            Self::HarmonicSurvival => 1.0 / ((1.0 + x) * (1.0 + x)),
        }
    }

    /// Inverse of the survival function: `survival(quantile(u)) = u`.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::OutOfDomain(format!("quantile level {u} outside (0, 1)")));
        }
        Ok(self.quantile_unchecked(u))
    }

    /// Survival inverse for `u ∈ (0, 1]`.
    #[inline]
    pub fn quantile_unchecked(&self, u: f64) -> f64 {
        match *self {
            Self::Pareto { alpha, scale } => scale * u.powf(-1.0 / alpha),
            Self::HeavyWeibull { shape, scale } => scale * (-u.ln()).powf(1.0 / shape),
            Self::Lognormal { mu, sigma } => (mu - sigma * normal_quantile(u)).exp(),
            Self::CubicSurvival => ((1.0 - u) / u).cbrt(),
            Self::HarmonicSurvival => (1.0 - u) / u,
        }
    }

    /// Inverse-transform draw.
    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.sample(Open01);
        self.quantile_unchecked(u)
    }

    /// Left end of the support; the survival function has a kink there for Pareto.
    pub fn support_start(&self) -> f64 {
        match *self {
            Self::Pareto { scale, .. } => scale,
            _ => 0.0,
        }
    }

    pub fn mean(&self) -> Option<f64> {
        match *self {
            Self::Pareto { alpha, scale } if alpha > 1.0 => Some(alpha * scale / (alpha - 1.0)),
            Self::Pareto { .. } => None,
            Self::HeavyWeibull { shape, scale } => {
                Some(scale * statrs::function::gamma::gamma(1.0 + 1.0 / shape))
            }
            Self::Lognormal { mu, sigma } => Some((mu + 0.5 * sigma * sigma).exp()),
            Self::CubicSurvival => Some(2.0 * std::f64::consts::PI / (3.0 * 3f64.sqrt())),
            Self::HarmonicSurvival => None,
        }
    }

    pub fn class_tags(&self) -> ClassTags {
        let rv = ClassTags {
            regularly_varying: true,
            consistently_varying: true,
            dominated: true,
            long_tailed: true,
            subexponential: true,
            positively_decreasing: true,
        };
        let sub_not_d = ClassTags {
            regularly_varying: false,
            consistently_varying: false,
            dominated: false,
            long_tailed: true,
            subexponential: true,
            positively_decreasing: true,
        };
        match self {
            Self::Pareto { .. } | Self::CubicSurvival | Self::HarmonicSurvival => rv,
            Self::HeavyWeibull { .. } | Self::Lognormal { .. } => sub_not_d,
        }
    }

    pub fn matuszewska(&self) -> Matuszewska {
        match self.regular_variation() {
            Some((alpha, _)) => Matuszewska::Finite {
                lower: alpha,
                upper: alpha,
            },
            None => Matuszewska::Unbounded,
        }
    }

    /// `(α, c)` with `survival(x) ~ c·x^{-α}`, for regularly varying members.
    pub fn regular_variation(&self) -> Option<(f64, f64)> {
        match *self {
            Self::Pareto { alpha, scale } => Some((alpha, scale.powf(alpha))),
            Self::CubicSurvival => Some((3.0, 1.0)),
            Self::HarmonicSurvival => Some((1.0, 1.0)),
            Self::HeavyWeibull { .. } | Self::Lognormal { .. } => None,
        }
    }
}

/// Finite-scale Matuszewska index estimates `(J⁻, J⁺)`.
///
/// At the largest `x` of `x_grid`, each `y` in `y_grid` gives
/// `−log(survival(yx)/survival(x)) / log y`; the lower estimate is the
/// minimum over `y`, the upper estimate the maximum.
pub fn matuszewska_bounds(dist: &TailDistribution, y_grid: &[f64], x_grid: &[f64]) -> Result<(f64, f64)> {
    if y_grid.is_empty() || x_grid.is_empty() {
        return Err(Error::param("matuszewska grids must be non-empty"));
    }
    if y_grid.iter().any(|y| !(*y > 1.0)) {
        return Err(Error::param("matuszewska y grid values must exceed 1"));
    }
    if x_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::param("matuszewska x grid must be increasing"));
    }
    let x = *x_grid.last().unwrap();
    let base = dist.survival(x);
    let mut lower = f64::INFINITY;
    let mut upper = f64::NEG_INFINITY;
    for &y in y_grid {
        let s = dist.survival(y * x);
        if !(s >= f64::MIN_POSITIVE) || !(base >= f64::MIN_POSITIVE) {
            return Err(Error::Numerical(format!(
                "survival underflow at x = {x}, y = {y}; shrink the x grid"
            )));
        }
        let j = -(s / base).ln() / y.ln();
        lower = lower.min(j);
        upper = upper.max(j);
    }
    Ok((lower, upper))
}
