//! Claim-vector laws and dependence between successive claim vectors.
//!
//! Components inside one vector are independent with per-component marginals.
//! Successive vectors are either independent, or coupled in consecutive
//! blocks of two: `(X^(2k−1), X^(2k))` share an FGM copula whose only
//! dependence sits in the full `2d`-tuple, or (for the cubic pair example)
//! component `i` of the two vectors has joint survival `(1 + x³ + y)^{-1}`.
//! Blocks are independent of each other.

use rand::distr::Open01;
use rand::Rng;

use crate::error::{Error, Result};
use crate::heavy_tails::{ClassTags, TailDistribution};
use crate::quadrature::integrate_pieces;
use crate::rare_sets::RareSet;
use crate::stats::{wilson_interval, Interval};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InterDependence {
    Iid,
    FgmChain { theta: f64 },
    CubicPair,
}

impl InterDependence {
    pub fn name(&self) -> &'static str {
        match self {
            InterDependence::Iid => "iid",
            InterDependence::FgmChain { .. } => "fgm_chain",
            InterDependence::CubicPair => "cubic_pair",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClaimModel {
    marginals: Vec<TailDistribution>,
    inter: InterDependence,
}

impl ClaimModel {
    /// Independent vectors with independent components.
    pub fn iid(marginals: Vec<TailDistribution>) -> Result<Self> {
        if marginals.is_empty() {
            return Err(Error::param("claim vectors need at least one component"));
        }
        Ok(Self {
            marginals,
            inter: InterDependence::Iid,
        })
    }

    /// FGM-linked consecutive pairs with common marginal `marginal`.
    pub fn fgm_chain(d: usize, marginal: TailDistribution, theta: f64) -> Result<Self> {
        if d == 0 {
            return Err(Error::param("claim vectors need at least one component"));
        }
        if !(-1.0..=1.0).contains(&theta) {
            return Err(Error::param(format!("FGM theta = {theta} outside [-1, 1]")));
        }
        Ok(Self {
            marginals: vec![marginal; d],
            inter: InterDependence::FgmChain { theta },
        })
    }

    /// Odd vectors have cubic-survival components, even vectors harmonic
    /// ones; matching components of a pair have joint survival
    /// `(1 + x³ + y)^{-1}`.
    pub fn cubic_pair(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::param("claim vectors need at least one component"));
        }
        Ok(Self {
            marginals: vec![TailDistribution::CubicSurvival; d],
            inter: InterDependence::CubicPair,
        })
    }

    pub fn dim(&self) -> usize {
        self.marginals.len()
    }

    pub fn inter(&self) -> InterDependence {
        self.inter
    }

    /// Component laws of odd-indexed vectors (all vectors unless cubic pair).
    pub fn marginals(&self) -> &[TailDistribution] {
        &self.marginals
    }

    /// Whether every claim vector has the same law.
    pub fn identically_distributed(&self) -> bool {
        !matches!(self.inter, InterDependence::CubicPair)
    }

    /// Regression dependence of the scalarized sequence. Holds for the FGM
    /// chain because its copula density is bounded by `1 + |θ|`.
    pub fn regression_dependent(&self) -> bool {
        matches!(self.inter, InterDependence::Iid | InterDependence::FgmChain { .. })
    }

    /// Quasi-asymptotic independence of the scalarized sequence.
    pub fn quasi_asymptotically_independent(&self) -> bool {
        true
    }

    /// Catalog class of the scalarized law `F_A`: the classes shared by all
    /// components that can move a vector into `set`.
    pub fn scalarized_tags(&self, set: &RareSet) -> Result<ClassTags> {
        self.check_set(set)?;
        let active = set.active_components();
        let tags: Vec<ClassTags> = self
            .marginals
            .iter()
            .zip(&active)
            .filter(|(_, a)| **a)
            .map(|(m, _)| m.class_tags())
            .collect();
        Ok(ClassTags::meet(&tags))
    }

    /// Matuszewska indices `(J⁻, J⁺)` of `F_A` from the catalog: the heaviest
    /// active component dominates the tail.
    pub fn scalarized_indices(&self, set: &RareSet) -> Result<(f64, f64)> {
        self.check_set(set)?;
        let active = set.active_components();
        let (mut lo, mut hi) = (f64::INFINITY, f64::INFINITY);
        for (m, a) in self.marginals.iter().zip(&active) {
            if *a {
                let j = m.matuszewska();
                lo = lo.min(j.lower());
                hi = hi.min(j.upper());
            }
        }
        Ok((lo, hi))
    }

    fn check_set(&self, set: &RareSet) -> Result<()> {
        if set.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: set.dim(),
            });
        }
        Ok(())
    }

    /// Samples `n` consecutive claim vectors of one sequence.
    pub fn sample_sequence<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<ClaimSequence> {
        if n == 0 {
            return Err(Error::param("sequence length must be at least 1"));
        }
        let mut data = Vec::new();
        self.fill_sequence(n, rng, &mut data);
        Ok(ClaimSequence { d: self.dim(), data })
    }

    /// Writes `n` vectors, row-major, into `out` (cleared first).
    pub fn fill_sequence<R: Rng + ?Sized>(&self, n: usize, rng: &mut R, out: &mut Vec<f64>) {
        let d = self.dim();
        out.clear();
        out.resize(n * d, 0.0);
        match self.inter {
            InterDependence::Iid => {
                for row in out.chunks_exact_mut(d) {
                    for (v, m) in row.iter_mut().zip(&self.marginals) {
                        *v = m.sample(rng);
                    }
                }
            }
            InterDependence::FgmChain { theta } => {
                let g = self.marginals[0];
                for block in out.chunks_mut(2 * d) {
                    if block.len() == 2 * d {
                        sample_fgm_block(theta, rng, block);
                        for v in block.iter_mut() {
                            *v = g.quantile_unchecked(*v);
                        }
                    } else {
                        // trailing unpaired vector: any proper sub-tuple is independent
                        for v in block.iter_mut() {
                            *v = g.sample(rng);
                        }
                    }
                }
            }
            InterDependence::CubicPair => {
                for block in out.chunks_mut(2 * d) {
                    let (first, second) = block.split_at_mut(d);
                    for i in 0..d {
                        let u: f64 = rng.sample(Open01);
                        let x = ((1.0 - u) / u).cbrt();
                        first[i] = x;
                        if let Some(y) = second.get_mut(i) {
                            let w: f64 = rng.sample(Open01);
                            let base = 1.0 + x * x * x;
                            // P[Y > y | X = x] = ((1 + x³)/(1 + x³ + y))²
                            *y = base / w.sqrt() - base;
                        }
                    }
                }
            }
        }
    }

    /// `F̄_A(x) = P[Z_A(X) > x]` in closed form or by one-dimensional quadrature.
    pub fn scalarized_survival(&self, set: &RareSet, x: f64, rel_tol: f64) -> Result<f64> {
        self.check_set(set)?;
        if !self.identically_distributed() {
            return Err(Error::Unsupported(
                "scalarized law of the cubic pair alternates between vectors; use Monte Carlo".into(),
            ));
        }
        if x <= 0.0 {
            return Ok(1.0);
        }
        match set {
            RareSet::Ray(b) => Ok(self.marginals[0].survival(x * b)),
            RareSet::MaxExceed(b) => {
                // 1 − Π F_i(x b_i), evaluated without cancellation
                let log_cdf: f64 = self
                    .marginals
                    .iter()
                    .zip(b)
                    .map(|(m, b)| (-m.survival(x * b)).ln_1p())
                    .sum();
                Ok(-log_cdf.exp_m1())
            }
            RareSet::HalfSpace(h) => {
                let active: Vec<(f64, &TailDistribution)> = h
                    .weights()
                    .iter()
                    .zip(&self.marginals)
                    .filter(|(w, _)| **w > 0.0)
                    .map(|(w, m)| (*w, m))
                    .collect();
                let t = x * h.level();
                match active.as_slice() {
                    [(w, m)] => Ok(m.survival(t / w)),
                    [(w1, m1), (w2, m2)] => Ok(weighted_pair_tail(m1, *w1, m2, *w2, t, rel_tol)),
                    _ => Err(Error::Unsupported(format!(
                        "half-space with {} active components has no quadrature form; use Monte Carlo",
                        active.len()
                    ))),
                }
            }
            RareSet::PolyhedralUnion(members) => {
                if self.dim() == 1 {
                    let level = members
                        .iter()
                        .map(|h| h.level() / h.weights()[0])
                        .fold(f64::INFINITY, f64::min);
                    Ok(self.marginals[0].survival(x * level))
                } else {
                    Err(Error::Unsupported(
                        "polyhedral union scalarized law is only analytic in dimension one".into(),
                    ))
                }
            }
        }
    }

    /// Analytic `(qai_ratio, rd_violation_ratio)` at level `x` for the cubic
    /// pair under a max-exceed set (or a ray).
    pub fn cubic_pair_ratios(&self, set: &RareSet, x: f64) -> Result<PairRatios> {
        if self.inter != InterDependence::CubicPair {
            return Err(Error::Unsupported(
                "analytic pair ratios exist only for the cubic pair; use empirical_pair_ratios".into(),
            ));
        }
        self.check_set(set)?;
        let b: Vec<f64> = match set {
            RareSet::MaxExceed(b) => b.clone(),
            RareSet::Ray(b) => vec![*b],
            _ => {
                return Err(Error::Unsupported(
                    "cubic pair ratios are available for max-exceed sets only".into(),
                ))
            }
        };
        if !(x > 0.0) {
            return Err(Error::OutOfDomain(format!("level x = {x} must be > 0")));
        }
        let joint = cubic_pair_joint_exceedance(&b, x, x);
        let (px, py) = cubic_pair_marginal_exceedance(&b, x);
        Ok(PairRatios {
            qai: joint / (px + py),
            rd_violation: joint / px,
        })
    }

    /// Empirical pair ratios from `n_pairs` sampled `(X^(1), X^(2))` blocks.
    pub fn empirical_pair_ratios<R: Rng + ?Sized>(
        &self,
        set: &RareSet,
        x: f64,
        n_pairs: usize,
        ci_level: f64,
        rng: &mut R,
    ) -> Result<EmpiricalPairRatios> {
        self.check_set(set)?;
        let d = self.dim();
        let mut buf = Vec::with_capacity(2 * d);
        let (mut cx, mut cy, mut joint) = (0u64, 0u64, 0u64);
        for _ in 0..n_pairs {
            self.fill_sequence(2, rng, &mut buf);
            let ex = set.z_index_unchecked(&buf[..d]) > x;
            let ey = set.z_index_unchecked(&buf[d..]) > x;
            cx += ex as u64;
            cy += ey as u64;
            joint += (ex && ey) as u64;
        }
        if cx == 0 {
            return Err(Error::NoExceedances(format!(
                "no first-vector exceedances of x = {x} in {n_pairs} pairs"
            )));
        }
        Ok(EmpiricalPairRatios {
            qai: joint as f64 / (cx + cy) as f64,
            qai_interval: wilson_interval(joint, cx + cy, ci_level),
            rd_violation: joint as f64 / cx as f64,
            rd_interval: wilson_interval(joint, cx, ci_level),
            joint_count: joint,
            first_count: cx,
            second_count: cy,
            reliable: joint >= 20 && cx >= 20,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairRatios {
    /// `P[X_A > x, Y_A > x] / (P[X_A > x] + P[Y_A > x])`.
    pub qai: f64,
    /// `P[X_A > x, Y_A > x] / P[X_A > x]`.
    pub rd_violation: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmpiricalPairRatios {
    pub qai: f64,
    pub qai_interval: Interval,
    pub rd_violation: f64,
    pub rd_interval: Interval,
    pub joint_count: u64,
    pub first_count: u64,
    pub second_count: u64,
    /// False when fewer than 20 exceedances back a ratio.
    pub reliable: bool,
}

/// Flat row-major storage of a claim-vector sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct ClaimSequence {
    d: usize,
    data: Vec<f64>,
}

impl ClaimSequence {
    pub fn len(&self) -> usize {
        self.data.len() / self.d
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn vector(&self, i: usize) -> &[f64] {
        &self.data[i * self.d..(i + 1) * self.d]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.d)
    }
}

/// Fills `out` (length `2d`) with survival-scale uniforms `V` whose joint
/// CDF is `Π v_i (1 + θ Π (1 − v_i))`. The first `2d − 1` coordinates are
/// independent; the last is drawn from its conditional law by inverting
/// `v + a(v − v²)`, `a = θ Π_{j<2d} (1 − 2v_j)`.
fn sample_fgm_block<R: Rng + ?Sized>(theta: f64, rng: &mut R, out: &mut [f64]) {
    let (last, head) = out.split_last_mut().expect("non-empty block");
    let mut k = 1.0;
    for v in head.iter_mut() {
        *v = rng.sample(Open01);
        k *= 1.0 - 2.0 * *v;
    }
    let w: f64 = rng.sample(Open01);
    *last = fgm_conditional_inverse(theta * k, w);
}

/// Root in `[0, 1]` of `v + a(v − v²) = w` for `|a| ≤ 1`.
pub(crate) fn fgm_conditional_inverse(a: f64, w: f64) -> f64 {
    if a.abs() < 1e-12 {
        return w;
    }
    let b = 1.0 + a;
    let disc = (b * b - 4.0 * a * w).max(0.0);
    // stable form of (b − √disc)/(2a)
    2.0 * w / (b + disc.sqrt())
}

/// `P[X_1 > x_1, …, X_n > x_n]` for FGM-coupled components with common
/// marginal `g`: `Π Ḡ(x_i) (1 + θ Π G(x_i))`.
pub fn fgm_joint_survival_all(theta: f64, g: &TailDistribution, args: &[f64]) -> Result<f64> {
    if !(-1.0..=1.0).contains(&theta) {
        return Err(Error::param(format!("FGM theta = {theta} outside [-1, 1]")));
    }
    if let Some((index, value)) = args.iter().enumerate().find(|(_, v)| !(**v >= 0.0)) {
        return Err(Error::NegativeComponent {
            index,
            value: *value,
        });
    }
    let mut surv = 1.0;
    let mut cdf = 1.0;
    for &a in args {
        let s = if a.is_infinite() { 0.0 } else { g.survival(a) };
        surv *= s;
        cdf *= 1.0 - s;
    }
    Ok(surv * (1.0 + theta * cdf))
}

/// Joint survival of one FGM-linked pair of two-dimensional vectors.
pub fn fgm_joint_survival(theta: f64, g: &TailDistribution, x1: f64, x2: f64, y1: f64, y2: f64) -> Result<f64> {
    fgm_joint_survival_all(theta, g, &[x1, x2, y1, y2])
}

/// `P[X_A > x, Y_A > y]` for the cubic pair under `MaxExceed(b)`:
/// inclusion–exclusion with independence across components.
fn cubic_pair_joint_exceedance(b: &[f64], x: f64, y: f64) -> f64 {
    // 1 − Π(1 − s_x) − Π(1 − s_y) + Π(1 − s_x − s_y + s_xy), regrouped as
    // P[some X exceeds] − Π(1 − s_y)·(1 − Π(1 − (s_x − s_xy)/(1 − s_y)))
    let mut log_none_x = 0.0;
    let mut none_y = 1.0;
    let mut log_ratio = 0.0;
    let mut none_both = 1.0;
    for &bi in b {
        let c = 1.0 + (bi * x).powi(3);
        let t = bi * y;
        let sx = 1.0 / c;
        let not_y = t / (1.0 + t);
        let x_only = t / (c * (c + t));
        log_none_x += (-sx).ln_1p();
        none_y *= not_y;
        none_both *= not_y - x_only;
        if not_y > 0.0 {
            log_ratio += (-x_only / not_y).ln_1p();
        }
    }
    let any_x = -log_none_x.exp_m1();
    if none_y > 0.0 {
        any_x + none_y * log_ratio.exp_m1()
    } else {
        any_x + none_both
    }
}

fn cubic_pair_marginal_exceedance(b: &[f64], x: f64) -> (f64, f64) {
    // log-space products keep tiny exceedance probabilities from cancelling
    let (mut log_none_x, mut log_none_y) = (0.0f64, 0.0f64);
    for &bi in b {
        let s = bi * x;
        log_none_x += (-1.0 / (1.0 + s * s * s)).ln_1p();
        log_none_y += (-1.0 / (1.0 + s)).ln_1p();
    }
    (-log_none_x.exp_m1(), -log_none_y.exp_m1())
}

/// `P[aX + cY > t]` for independent nonnegative `X ~ m1`, `Y ~ m2`.
///
/// The sum can only exceed `t` if one term exceeds `t/2`. Splitting on which
/// one does and writing `w` for the distance of the big term from `t`:
///
/// `P = S_X(t/a) + F_X(t/2a) S_Y(t/c)
///    + ∫_0^{t/2} [S_Y(w/c) f_X((t−w)/a)/a + (S_X(w/a) − S_X(t/2a)) f_Y((t−w)/c)/c] dw`.
///
/// The integrand only varies on the scale of the small term, so the pieces
/// are geometric in `w` with breaks at the support kinks.
pub(crate) fn weighted_pair_tail(
    m1: &TailDistribution,
    a: f64,
    m2: &TailDistribution,
    c: f64,
    t: f64,
    rel_tol: f64,
) -> f64 {
    if t <= 0.0 {
        return 1.0;
    }
    let half = 0.5 * t;
    let s_half = m1.survival(half / a);
    let closed = m1.survival(t / a) + (1.0 - s_half) * m2.survival(t / c);
    let mut breaks = vec![0.0, half];
    for k in [a * m1.support_start(), c * m2.support_start(), t - a * m1.support_start(), t - c * m2.support_start()] {
        if k > 0.0 && k < half {
            breaks.push(k);
        }
    }
    let floor = breaks.iter().copied().filter(|b| *b > 0.0 && *b < half).fold(half * 1e-12, f64::min);
    let mut w = half;
    while w > floor {
        w *= 0.5;
        breaks.push(w);
    }
    breaks.sort_by(|x, y| x.partial_cmp(y).unwrap());
    breaks.dedup();
    let mut integrand = |w: f64| {
        m2.survival(w / c) * m1.density((t - w) / a) / a
            + (m1.survival(w / a) - s_half).max(0.0) * m2.density((t - w) / c) / c
    };
    closed + integrate_pieces(&mut integrand, &breaks, rel_tol)
}
