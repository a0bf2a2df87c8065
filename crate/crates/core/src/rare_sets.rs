//! Rare target sets and their scalarization.
//!
//! Every set here is open, increasing, has a convex complement and keeps the
//! origin outside its closure. For such a set `A` the scalarization
//! `Z_A = sup{u > 0 : z ∈ uA}` turns entrance events into tail events:
//! `z ∈ xA` iff `Z_A(z) > x`. Only a parametric catalog with closed-form
//! scalarizations is supported.

use crate::error::{Error, Result};

const SUM_TOL: f64 = 1e-12;

/// `{y : l·y > b}` with `l ≥ 0`, `Σ l = 1`, `b > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfSpace {
    weights: Vec<f64>,
    level: f64,
}

impl HalfSpace {
    pub fn new(weights: Vec<f64>, level: f64) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::param("half-space needs at least one weight"));
        }
        if let Some((i, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(w.is_finite() && **w >= 0.0))
        {
            return Err(Error::param(format!("half-space weight l[{i}] = {w} must be >= 0")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > SUM_TOL {
            return Err(Error::param(format!("half-space weights sum to {total}, not 1")));
        }
        if !(level.is_finite() && level > 0.0) {
            return Err(Error::param(format!("half-space level b = {level} must be > 0")));
        }
        Ok(Self { weights, level })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn level(&self) -> f64 {
        self.level
    }

    #[inline]
    fn index(&self, z: &[f64]) -> f64 {
        let dot: f64 = self.weights.iter().zip(z).map(|(l, v)| l * v).sum();
        dot / self.level
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RareSet {
    /// `{y : y_i > b_i for some i}`.
    MaxExceed(Vec<f64>),
    HalfSpace(HalfSpace),
    /// `(b, ∞)` in dimension one.
    Ray(f64),
    /// Union of half-spaces sharing one dimension.
    PolyhedralUnion(Vec<HalfSpace>),
}

impl RareSet {
    pub fn max_exceed(b: Vec<f64>) -> Result<Self> {
        if b.is_empty() {
            return Err(Error::param("max-exceed set needs at least one level"));
        }
        if let Some((i, v)) = b
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v > 0.0))
        {
            return Err(Error::param(format!("max-exceed level b[{i}] = {v} must be > 0")));
        }
        Ok(RareSet::MaxExceed(b))
    }

    pub fn half_space(l: Vec<f64>, b: f64) -> Result<Self> {
        Ok(RareSet::HalfSpace(HalfSpace::new(l, b)?))
    }

    pub fn ray(b: f64) -> Result<Self> {
        if !(b.is_finite() && b > 0.0) {
            return Err(Error::param(format!("ray level b = {b} must be > 0")));
        }
        Ok(RareSet::Ray(b))
    }

    /// A finite union of half-spaces. The complement is an intersection of
    /// convex sets containing the origin, so the union stays in the family.
    pub fn polyhedral_union(members: Vec<HalfSpace>) -> Result<Self> {
        let first = members
            .first()
            .ok_or_else(|| Error::param("polyhedral union needs at least one half-space"))?;
        let d = first.weights.len();
        for m in &members {
            if m.weights.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: m.weights.len(),
                });
            }
        }
        Ok(RareSet::PolyhedralUnion(members))
    }

    pub fn dim(&self) -> usize {
        match self {
            RareSet::MaxExceed(b) => b.len(),
            RareSet::HalfSpace(h) => h.weights.len(),
            RareSet::Ray(_) => 1,
            RareSet::PolyhedralUnion(m) => m[0].weights.len(),
        }
    }

    /// Smallest scale parameter of the set (the `b` values).
    pub fn min_scale(&self) -> f64 {
        match self {
            RareSet::MaxExceed(b) => b.iter().copied().fold(f64::INFINITY, f64::min),
            RareSet::HalfSpace(h) => h.level,
            RareSet::Ray(b) => *b,
            RareSet::PolyhedralUnion(m) => m.iter().map(|h| h.level).fold(f64::INFINITY, f64::min),
        }
    }

    /// Coordinates that can move a vector into the set.
    pub fn active_components(&self) -> Vec<bool> {
        match self {
            RareSet::MaxExceed(b) => vec![true; b.len()],
            RareSet::HalfSpace(h) => h.weights.iter().map(|w| *w > 0.0).collect(),
            RareSet::Ray(_) => vec![true],
            RareSet::PolyhedralUnion(m) => {
                let mut act = vec![false; m[0].weights.len()];
                for h in m {
                    for (a, w) in act.iter_mut().zip(&h.weights) {
                        *a |= *w > 0.0;
                    }
                }
                act
            }
        }
    }

    /// `Z_A(z) = sup{u : z ∈ uA}`.
    pub fn z_index(&self, z: &[f64]) -> Result<f64> {
        self.check_vector(z)?;
        Ok(self.z_index_unchecked(z))
    }

    /// Closed-form scalarization without argument checks.
    ///
    /// The formulas extend linearly to vectors with negative entries, which
    /// is what the ruin module relies on for surplus-shifted vectors.
    #[inline]
    pub fn z_index_unchecked(&self, z: &[f64]) -> f64 {
        match self {
            RareSet::MaxExceed(b) => z
                .iter()
                .zip(b)
                .map(|(v, b)| v / b)
                .fold(f64::NEG_INFINITY, f64::max),
            RareSet::HalfSpace(h) => h.index(z),
            RareSet::Ray(b) => z[0] / b,
            RareSet::PolyhedralUnion(m) => m
                .iter()
                .map(|h| h.index(z))
                .fold(f64::NEG_INFINITY, f64::max),
        }
    }

    /// `z ∈ xA`, i.e. `Z_A(z) > x`. Strict because the set is open.
    pub fn contains(&self, x: f64, z: &[f64]) -> Result<bool> {
        if !(x > 0.0) {
            return Err(Error::OutOfDomain(format!("scale x = {x} must be > 0")));
        }
        Ok(self.z_index(z)? > x)
    }

    /// Direct membership test `y ∈ A` from the defining inequalities.
    pub fn contains_point(&self, y: &[f64]) -> bool {
        match self {
            RareSet::MaxExceed(b) => y.iter().zip(b).any(|(v, b)| v > b),
            RareSet::HalfSpace(h) => {
                let dot: f64 = h.weights.iter().zip(y).map(|(l, v)| l * v).sum();
                dot > h.level
            }
            RareSet::Ray(b) => y[0] > *b,
            RareSet::PolyhedralUnion(m) => m.iter().any(|h| {
                let dot: f64 = h.weights.iter().zip(y).map(|(l, v)| l * v).sum();
                dot > h.level
            }),
        }
    }

    fn check_vector(&self, z: &[f64]) -> Result<()> {
        if z.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: z.len(),
            });
        }
        if let Some((index, value)) = z.iter().enumerate().find(|(_, v)| !(**v >= 0.0)) {
            return Err(Error::NegativeComponent {
                index,
                value: *value,
            });
        }
        Ok(())
    }
}

/// Ruin sets for surplus vectors: open, decreasing, scale-insensitive, with
/// the origin on the boundary.
#[derive(Debug, Clone, PartialEq)]
pub enum RuinSet {
    /// Some line has negative surplus.
    AnyLineNegative,
    /// The weighted total surplus is negative.
    WeightedSumNegative(Vec<f64>),
}

impl RuinSet {
    pub fn weighted_sum(weights: Vec<f64>) -> Result<Self> {
        // same admissibility as half-space weights
        HalfSpace::new(weights.clone(), 1.0)?;
        Ok(RuinSet::WeightedSumNegative(weights))
    }

    pub fn label(&self) -> &'static str {
        match self {
            RuinSet::AnyLineNegative => "or",
            RuinSet::WeightedSumNegative(_) => "sum",
        }
    }

    pub fn contains(&self, surplus: &[f64]) -> bool {
        match self {
            RuinSet::AnyLineNegative => surplus.iter().any(|u| *u < 0.0),
            RuinSet::WeightedSumNegative(w) => {
                w.iter().zip(surplus).map(|(w, u)| w * u).sum::<f64>() < 0.0
            }
        }
    }
}

/// Maps a ruin set `L` and capital allocation `l` to the rare set `A = l − L`.
pub fn from_ruin_set(ruin: &RuinSet, alloc: &[f64]) -> Result<RareSet> {
    if alloc.is_empty() {
        return Err(Error::param("allocation must be non-empty"));
    }
    if let Some((i, a)) = alloc
        .iter()
        .enumerate()
        .find(|(_, a)| !(a.is_finite() && **a > 0.0))
    {
        return Err(Error::param(format!("allocation l[{i}] = {a} must be > 0")));
    }
    let total: f64 = alloc.iter().sum();
    if (total - 1.0).abs() > SUM_TOL {
        return Err(Error::param(format!("allocation sums to {total}, not 1")));
    }
    match ruin {
        RuinSet::AnyLineNegative => {
            if alloc.len() == 1 {
                RareSet::ray(alloc[0])
            } else {
                RareSet::max_exceed(alloc.to_vec())
            }
        }
        RuinSet::WeightedSumNegative(w) => {
            if w.len() != alloc.len() {
                return Err(Error::DimensionMismatch {
                    expected: alloc.len(),
                    got: w.len(),
                });
            }
            // w·(l − z) < 0  <=>  w·z > w·l
            let level: f64 = w.iter().zip(alloc).map(|(w, a)| w * a).sum();
            if alloc.len() == 1 {
                RareSet::ray(level)
            } else {
                RareSet::half_space(w.clone(), level)
            }
        }
    }
}
