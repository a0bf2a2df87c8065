//! Asymptotic entrance probabilities: the renewal integral of the single-claim
//! entrance probability, its multivariate regularly varying closed form, and
//! the limit law of the entrance time.
//!
//! Each asymptotic relation only holds under a set of hypotheses. They are
//! grouped into three modes:
//!
//! * `FiniteSubexponential`: finite horizon, regression-dependent claims with
//!   subexponential scalarized law, non-decreasing returns;
//! * `FiniteConsistent`: finite horizon, quasi-asymptotically independent
//!   claims with consistently varying scalarized law, returns bounded below;
//! * `Infinite`: infinite horizon, quasi-asymptotically independent claims in
//!   `C ∩ P_D`, discount summability.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use serde::Serialize;

use crate::dependence::ClaimModel;
use crate::error::{Error, Result};
use crate::processes::{check_discount_summability, choose_summability_exponents, RenewalSpec, ReturnProcess, Summability};
use crate::quadrature::{integrate_pieces, GaussHermite};
use crate::rare_sets::RareSet;
use crate::stats::Estimate;

/// Multivariate regular variation of the claim vector: reference tail
/// `Ḡ(x) = x^{-α} ∧ 1` and limit measure value `μ(A)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MrvSpec {
    pub alpha: f64,
    pub mu_a: f64,
}

impl MrvSpec {
    pub fn new(alpha: f64, mu_a: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::param(format!("MRV index α = {alpha} must be positive")));
        }
        if !(mu_a >= 0.0 && mu_a.is_finite()) {
            return Err(Error::param(format!("μ(A) = {mu_a} must be finite and ≥ 0")));
        }
        Ok(Self { alpha, mu_a })
    }

    /// `Ḡ(x) = x^{-α} ∧ 1`.
    pub fn reference_tail(&self, x: f64) -> f64 {
        if x <= 1.0 {
            1.0
        } else {
            x.powf(-self.alpha)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub claim: ClaimModel,
    pub set: RareSet,
    pub renewal: RenewalSpec,
    pub ret: ReturnProcess,
    pub mrv: Option<MrvSpec>,
}

impl ModelSpec {
    pub fn new(claim: ClaimModel, set: RareSet, renewal: RenewalSpec, ret: ReturnProcess) -> Result<Self> {
        if claim.dim() != set.dim() {
            return Err(Error::DimensionMismatch {
                expected: claim.dim(),
                got: set.dim(),
            });
        }
        Ok(Self {
            claim,
            set,
            renewal,
            ret,
            mrv: None,
        })
    }

    pub fn with_mrv(mut self, mrv: MrvSpec) -> Self {
        self.mrv = Some(mrv);
        self
    }

    pub fn dim(&self) -> usize {
        self.claim.dim()
    }

    /// Matuszewska indices of the scalarized claim law.
    pub fn tail_indices(&self) -> Result<(f64, f64)> {
        self.claim.scalarized_indices(&self.set)
    }
}

/// `μ(A) = Σ c_i Z_A(e_i)^α` for independent components with tail weights
/// `c_i = lim F̄_i(x)/Ḡ(x)`: the limit measure of independent regularly
/// varying components lives on the coordinate axes.
pub fn mrv_mu(weights: &[f64], alpha: f64, set: &RareSet) -> Result<f64> {
    if weights.len() != set.dim() {
        return Err(Error::DimensionMismatch {
            expected: set.dim(),
            got: weights.len(),
        });
    }
    if !(alpha > 0.0) || weights.iter().any(|c| !(*c >= 0.0)) {
        return Err(Error::param("MRV needs α > 0 and nonnegative tail weights"));
    }
    let d = set.dim();
    let mut unit = vec![0.0; d];
    let mut mu = 0.0;
    for (i, c) in weights.iter().enumerate() {
        unit.fill(0.0);
        unit[i] = 1.0;
        let z = set.z_index_unchecked(&unit);
        if *c > 0.0 && z > 0.0 {
            mu += c * z.powf(alpha);
        }
    }
    Ok(mu)
}

/// Derives the MRV description from the catalog when every component that
/// can reach the set is regularly varying; lighter components get weight 0.
pub fn infer_mrv(claim: &ClaimModel, set: &RareSet) -> Result<MrvSpec> {
    if !claim.identically_distributed() {
        return Err(Error::Unsupported(
            "claim vectors alternate laws; no common limit measure".into(),
        ));
    }
    let active = set.active_components();
    let mut alpha = f64::INFINITY;
    for (m, a) in claim.marginals().iter().zip(&active) {
        if *a {
            if let Some((idx, _)) = m.regular_variation() {
                alpha = alpha.min(idx);
            }
        }
    }
    if !alpha.is_finite() {
        return Err(Error::Unsupported(
            "no active component is regularly varying".into(),
        ));
    }
    let weights: Vec<f64> = claim
        .marginals()
        .iter()
        .zip(&active)
        .map(|(m, a)| match m.regular_variation() {
            Some((idx, c)) if *a && idx == alpha => c,
            _ => 0.0,
        })
        .collect();
    MrvSpec::new(alpha, mrv_mu(&weights, alpha, set)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremMode {
    FiniteSubexponential,
    FiniteConsistent,
    Infinite,
}

impl TheoremMode {
    pub fn name(&self) -> &'static str {
        match self {
            TheoremMode::FiniteSubexponential => "subexponential",
            TheoremMode::FiniteConsistent => "consistent",
            TheoremMode::Infinite => "infinite",
        }
    }

    pub fn describe(&self) -> &'static str {
        match self {
            TheoremMode::FiniteSubexponential => {
                "finite horizon, regression-dependent subexponential claims, non-decreasing returns"
            }
            TheoremMode::FiniteConsistent => {
                "finite horizon, quasi-asymptotically independent consistently varying claims, returns bounded below"
            }
            TheoremMode::Infinite => {
                "infinite horizon, quasi-asymptotically independent claims in C ∩ P_D, discount summability"
            }
        }
    }
}

impl fmt::Display for TheoremMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Requested mode; `Auto` picks the first mode whose hypotheses hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeRequest {
    Auto,
    Fixed(TheoremMode),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HypothesisCheck {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

impl HypothesisCheck {
    fn new(name: &str, holds: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            holds,
            detail: detail.into(),
        }
    }
}

/// All hypotheses of one mode, evaluated for one model.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeReport {
    pub mode: TheoremMode,
    pub checks: Vec<HypothesisCheck>,
    /// Present for the infinite mode when discount summability was evaluated.
    pub summability: Option<Summability>,
}

impl ModeReport {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    /// Hypothesis error naming the first failed check.
    pub fn to_error(&self) -> Option<Error> {
        self.checks.iter().find(|c| !c.holds).map(|c| {
            Error::hypothesis(
                c.name.clone(),
                format!("{} (required by the {} mode)", c.detail, self.mode.name()),
            )
        })
    }
}

/// Exponents used for the discount-summability check; `None` picks them.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Exponents {
    pub p1: Option<f64>,
    pub p2: Option<f64>,
}

/// Evaluates every hypothesis of `mode` for `model` on horizon `horizon`
/// (ignored by the infinite mode).
pub fn check_mode(model: &ModelSpec, mode: TheoremMode, horizon: f64, exponents: Exponents) -> Result<ModeReport> {
    let claim = &model.claim;
    let tags = claim.scalarized_tags(&model.set)?;
    let mut checks = vec![HypothesisCheck::new(
        "identically distributed claims",
        claim.identically_distributed(),
        if claim.identically_distributed() {
            "all claim vectors share one law".to_string()
        } else {
            format!("{} claim vectors alternate between two laws", claim.inter().name())
        },
    )];
    let mut summability = None;
    match mode {
        TheoremMode::FiniteSubexponential => {
            checks.push(HypothesisCheck::new(
                "regression dependence",
                claim.regression_dependent(),
                format!("{} inter-vector dependence", claim.inter().name()),
            ));
            checks.push(HypothesisCheck::new(
                "subexponential claims",
                tags.subexponential,
                format!("scalarized claim law {} subexponential", if tags.subexponential { "is" } else { "is not" }),
            ));
            let nd = model.ret.non_decreasing();
            checks.push(HypothesisCheck::new(
                "non-decreasing returns",
                nd,
                format!("{} returns {} non-decreasing paths", model.ret.name(), if nd { "have" } else { "do not have" }),
            ));
        }
        TheoremMode::FiniteConsistent => {
            checks.push(HypothesisCheck::new(
                "quasi-asymptotic independence",
                claim.quasi_asymptotically_independent(),
                format!("{} inter-vector dependence", claim.inter().name()),
            ));
            checks.push(HypothesisCheck::new(
                "consistently varying claims",
                tags.consistently_varying,
                format!(
                    "scalarized claim law {} consistently varying",
                    if tags.consistently_varying { "is" } else { "is not" }
                ),
            ));
            let lb = model.ret.bounded_below(horizon);
            checks.push(HypothesisCheck::new(
                "bounded-below returns",
                lb.holds,
                match lb.k_t {
                    Some(k) => format!("inf ξ(t) ≥ -{k} on [0, {horizon}]"),
                    None => format!(
                        "{} returns are unbounded below; use the infinite mode",
                        model.ret.name()
                    ),
                },
            ));
        }
        TheoremMode::Infinite => {
            checks.push(HypothesisCheck::new(
                "quasi-asymptotic independence",
                claim.quasi_asymptotically_independent(),
                format!("{} inter-vector dependence", claim.inter().name()),
            ));
            let cpd = tags.consistently_varying && tags.positively_decreasing;
            checks.push(HypothesisCheck::new(
                "consistently varying and positively decreasing claims",
                cpd,
                format!("scalarized claim law {} in C ∩ P_D", if cpd { "is" } else { "is not" }),
            ));
            let (j_minus, j_plus) = model.tail_indices()?;
            let check = match (exponents.p1, exponents.p2) {
                (Some(p1), Some(p2)) => check_discount_summability(&model.ret, &model.renewal, p1, p2, j_minus, j_plus),
                _ if j_plus.is_finite() && j_minus > 0.0 => {
                    choose_summability_exponents(&model.ret, &model.renewal, j_minus, j_plus)
                }
                _ => Err(Error::hypothesis(
                    "discount summability",
                    format!("Matuszewska indices ({j_minus}, {j_plus}) are not finite and positive"),
                )),
            };
            match check {
                Ok(s) => {
                    checks.push(HypothesisCheck::new("discount summability", s.holds, s.detail.clone()));
                    summability = Some(s);
                }
                Err(Error::Hypothesis { detail, .. }) => {
                    checks.push(HypothesisCheck::new("discount summability", false, detail));
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok(ModeReport {
        mode,
        checks,
        summability,
    })
}

/// Resolves a mode request. Finite horizons try the consistent mode before
/// the subexponential one; an infinite horizon only admits the infinite mode.
pub fn select_mode(model: &ModelSpec, request: ModeRequest, horizon: f64, exponents: Exponents) -> Result<ModeReport> {
    let candidates: Vec<TheoremMode> = match request {
        ModeRequest::Fixed(m) => vec![m],
        ModeRequest::Auto if horizon.is_infinite() => vec![TheoremMode::Infinite],
        ModeRequest::Auto => vec![TheoremMode::FiniteConsistent, TheoremMode::FiniteSubexponential],
    };
    let mut first_failure = None;
    for mode in candidates {
        if horizon.is_infinite() != (mode == TheoremMode::Infinite) {
            return Err(Error::Config(format!(
                "mode {} does not match horizon {horizon}",
                mode.name()
            )));
        }
        let report = check_mode(model, mode, horizon, exponents)?;
        if report.holds() {
            return Ok(report);
        }
        first_failure.get_or_insert(report);
    }
    Err(first_failure
        .and_then(|r| r.to_error())
        .unwrap_or_else(|| Error::hypothesis("mode selection", "no mode applies")))
}

/// Numerical settings for the asymptotic integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticOptions {
    /// Relative tolerance of the outer renewal integral.
    pub rel_tol: f64,
    pub gauss_hermite_nodes: usize,
    /// Draws of `ξ(s)` for returns without a closed-form law; 0 disables.
    pub inner_draws: usize,
    pub inner_seed: u64,
}

impl Default for AsymptoticOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            gauss_hermite_nodes: 64,
            inner_draws: 100_000,
            inner_seed: 0x1a7e_c0de,
        }
    }
}

/// Per-path quadrature tolerance under simulated returns, where the Monte
/// Carlo error dominates.
const INNER_PATH_TOL: f64 = 1e-6;

/// Evaluates `s ↦ P[X e^{−ξ(s)} ∈ xA] = E[F̄_A(x e^{ξ(s)})]` for one model.
pub struct SingleClaimEntrance<'a> {
    model: &'a ModelSpec,
    rel_tol: f64,
    kind: InnerLaw,
}

enum InnerLaw {
    Exact,
    Gaussian(GaussHermite),
    /// Simulated compound Poisson jump paths shared by every `s`.
    Simulated { paths: Vec<Vec<(f64, f64)>>, drift: f64 },
}

impl<'a> SingleClaimEntrance<'a> {
    /// `horizon` bounds the `s` values that will be requested.
    pub fn new(model: &'a ModelSpec, horizon: f64, opts: &AsymptoticOptions) -> Result<Self> {
        // probe the scalarized law once so unsupported pairs fail early
        model.claim.scalarized_survival(&model.set, 1.0, opts.rel_tol)?;
        let kind = match model.ret {
            ReturnProcess::Deterministic { .. } => InnerLaw::Exact,
            ReturnProcess::Brownian { sigma, .. } if sigma == 0.0 => InnerLaw::Exact,
            ReturnProcess::Brownian { .. } => InnerLaw::Gaussian(GaussHermite::new(opts.gauss_hermite_nodes)),
            ReturnProcess::CompoundPoisson { drift, rate, jump } => {
                if opts.inner_draws == 0 {
                    return Err(Error::Unsupported(
                        "compound Poisson returns need inner Monte Carlo draws".into(),
                    ));
                }
                if !horizon.is_finite() {
                    return Err(Error::param("inner Monte Carlo needs a finite horizon"));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(opts.inner_seed);
                let mut paths = Vec::with_capacity(opts.inner_draws);
                for _ in 0..opts.inner_draws {
                    let mut path = Vec::new();
                    if rate > 0.0 {
                        let gaps = Exp::new(rate).expect("positive rate");
                        let (mut t, mut level) = (0.0, 0.0);
                        loop {
                            t += gaps.sample(&mut rng);
                            if t > horizon {
                                break;
                            }
                            level += jump.sample(&mut rng);
                            path.push((t, level));
                        }
                    }
                    paths.push(path);
                }
                InnerLaw::Simulated { paths, drift }
            }
        };
        Ok(Self {
            model,
            rel_tol: opts.rel_tol,
            kind,
        })
    }

    fn tail(&self, y: f64) -> f64 {
        self.model
            .claim
            .scalarized_survival(&self.model.set, y, self.rel_tol)
            .expect("probed at construction")
    }

    /// Value and Monte Carlo standard error at `(x, s)`.
    pub fn eval(&self, x: f64, s: f64) -> Estimate {
        match (&self.kind, self.model.ret) {
            (InnerLaw::Exact, ReturnProcess::Deterministic { r }) => Estimate::exact(self.tail(x * (r * s).exp())),
            (InnerLaw::Exact, ReturnProcess::Brownian { mu, .. }) => Estimate::exact(self.tail(x * (mu * s).exp())),
            (InnerLaw::Gaussian(gh), ReturnProcess::Brownian { mu, sigma }) => {
                if s <= 0.0 {
                    return Estimate::exact(self.tail(x));
                }
                Estimate::exact(gh.normal_expectation(mu * s, sigma * s.sqrt(), |y| self.tail(x * y.exp())))
            }
            (InnerLaw::Simulated { paths, drift }, _) => {
                let (mut sum, mut sum_sq) = (0.0, 0.0);
                for path in paths {
                    let k = path.partition_point(|(t, _)| *t <= s);
                    let level = if k == 0 { 0.0 } else { path[k - 1].1 };
                    let v = self.tail(x * (drift * s + level).exp());
                    sum += v;
                    sum_sq += v * v;
                }
                Estimate::from_moments(sum, sum_sq, paths.len())
            }
            _ => unreachable!("inner law matches return process"),
        }
    }
}

impl SingleClaimEntrance<'_> {
    /// `E[∫_0^T F̄_A(x e^{ξ(s)}) λ(ds)]` averaged over the simulated return
    /// paths. `ξ` is smooth between jumps, so each path is integrated piece by
    /// piece; renewals without a density pair every path with one arrival path.
    fn path_average(&self, paths: &[Vec<(f64, f64)>], drift: f64, x: f64, horizon: f64, seed: u64) -> Estimate {
        let renewal = &self.model.renewal;
        let has_density = renewal.renewal_density(horizon).is_some();
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
        let mut arrivals = Vec::new();
        let (mut sum, mut sum_sq) = (0.0, 0.0);
        for path in paths {
            let v = if has_density {
                let mut total = 0.0;
                let (mut lo, mut level) = (0.0, 0.0);
                for k in 0..=path.len() {
                    let hi = path.get(k).map_or(horizon, |p| p.0);
                    let mut f = |s: f64| {
                        self.tail(x * (drift * s + level).exp()) * renewal.renewal_density(s).expect("has density")
                    };
                    total += integrate_pieces(&mut f, &[lo, hi], INNER_PATH_TOL);
                    if let Some(&(t, l)) = path.get(k) {
                        (lo, level) = (t, l);
                    }
                }
                total
            } else {
                renewal.sample_arrivals(horizon, &mut rng, &mut arrivals);
                arrivals
                    .iter()
                    .map(|&s| {
                        let k = path.partition_point(|(t, _)| *t <= s);
                        let level = if k == 0 { 0.0 } else { path[k - 1].1 };
                        self.tail(x * (drift * s + level).exp())
                    })
                    .sum()
            };
            sum += v;
            sum_sq += v * v;
        }
        Estimate::from_moments(sum, sum_sq, paths.len())
    }
}

/// `P[X e^{−ξ(s)} ∈ xA]` at a single point.
pub fn single_claim_entrance(model: &ModelSpec, x: f64, s: f64, opts: &AsymptoticOptions) -> Result<Estimate> {
    if !(x > 0.0) || !(s >= 0.0) {
        return Err(Error::OutOfDomain(format!("need x > 0 and s ≥ 0, got x = {x}, s = {s}")));
    }
    Ok(SingleClaimEntrance::new(model, s.max(1e-12), opts)?.eval(x, s))
}

/// `∫_0^T P[X e^{−ξ(s)} ∈ xA] λ(ds)` without any hypothesis check.
pub fn entrance_integral(model: &ModelSpec, x: f64, horizon: f64, opts: &AsymptoticOptions) -> Result<Estimate> {
    if !(x > 0.0) {
        return Err(Error::OutOfDomain(format!("level x = {x} must be > 0")));
    }
    if !(horizon >= 0.0 && horizon.is_finite()) {
        return Err(Error::param(format!("finite horizon required, got {horizon}")));
    }
    if horizon == 0.0 {
        return Ok(Estimate::exact(0.0));
    }
    let inner = SingleClaimEntrance::new(model, horizon, opts)?;
    if let InnerLaw::Simulated { paths, drift } = &inner.kind {
        return Ok(inner.path_average(paths, *drift, x, horizon, opts.inner_seed));
    }
    let mut var_bound = 0.0;
    let value = model.renewal.integrate(
        |s| {
            let e = inner.eval(x, s);
            var_bound = e.std_error.max(var_bound);
            e.value
        },
        horizon,
        opts.rel_tol,
    );
    // the inner error is at most its largest pointwise σ times the renewal mass
    let mass = model.renewal.renewal_function(horizon)?.value;
    Ok(Estimate {
        value: value.value,
        std_error: (value.std_error.powi(2) + (var_bound * mass).powi(2)).sqrt(),
    })
}

/// Finite-horizon asymptotic entrance probability under a verified finite mode.
pub fn asymptotic_entrance_finite(
    model: &ModelSpec,
    x: f64,
    horizon: f64,
    request: ModeRequest,
    opts: &AsymptoticOptions,
) -> Result<Estimate> {
    select_mode(model, request, horizon, Exponents::default())?;
    entrance_integral(model, x, horizon, opts)
}

#[derive(Debug, Clone, PartialEq)]
pub struct InfiniteAsymptotic {
    pub value: Estimate,
    /// Truncation horizon `T*`.
    pub horizon: f64,
    /// Relative remainder bound of the discounted renewal mass beyond `T*`.
    pub tail_bound: f64,
    pub summability: Summability,
}

/// Truncation horizon for infinite-horizon runs, from discount summability.
pub fn truncation_horizon(model: &ModelSpec, exponents: Exponents) -> Result<Summability> {
    let report = check_mode(model, TheoremMode::Infinite, f64::INFINITY, exponents)?;
    match report.summability {
        Some(s) if s.holds => Ok(s),
        _ => Err(report
            .to_error()
            .unwrap_or_else(|| Error::hypothesis("discount summability", "not evaluated"))),
    }
}

/// Infinite-horizon asymptotic entrance probability: the integral up to the
/// truncation horizon plus the reported relative remainder bound.
pub fn asymptotic_entrance_infinite(
    model: &ModelSpec,
    x: f64,
    exponents: Exponents,
    unchecked: bool,
    opts: &AsymptoticOptions,
) -> Result<InfiniteAsymptotic> {
    let report = check_mode(model, TheoremMode::Infinite, f64::INFINITY, exponents)?;
    if !unchecked {
        if let Some(e) = report.to_error() {
            return Err(e);
        }
    }
    let summability = report.summability.filter(|s| s.holds).ok_or_else(|| {
        Error::hypothesis("discount summability", "no truncation horizon without summable discounts")
    })?;
    let horizon = summability.truncation_horizon.expect("set when summability holds");
    let value = entrance_integral(model, x, horizon, opts)?;
    Ok(InfiniteAsymptotic {
        value,
        horizon,
        tail_bound: summability.truncation_bound.unwrap_or(f64::NAN),
        summability,
    })
}

/// `μ(A) Ḡ(x) ∫_0^T e^{s φ(α)} λ(ds)`; `T = ∞` requires `φ(α) < 0`.
pub fn mrv_closed_form(model: &ModelSpec, x: f64, horizon: f64) -> Result<f64> {
    let mrv = model
        .mrv
        .ok_or_else(|| Error::param("model has no MRV description"))?;
    if mrv.mu_a == 0.0 {
        return Ok(0.0);
    }
    let phi = model.ret.laplace_exponent(mrv.alpha)?;
    if horizon.is_infinite() && phi >= 0.0 {
        return Err(Error::hypothesis(
            "discount summability",
            format!("φ(α) = {phi} ≥ 0 makes the infinite-horizon integral diverge"),
        ));
    }
    let mass = model.renewal.discounted_mass(phi, horizon)?;
    Ok(mrv.mu_a * mrv.reference_tail(x) * mass.value)
}

/// Limit law of the first entrance time for Poisson arrivals and constant
/// force of interest: `1 − e^{−αrT}`.
pub fn entrance_time_cdf(alpha: f64, r: f64, t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        -(-alpha * r * t).exp_m1()
    }
}

/// Limit law of the first entrance time given entrance before `horizon`,
/// for an MRV model: `∫_0^t e^{sφ(α)} λ(ds) / ∫_0^T e^{sφ(α)} λ(ds)`.
pub fn entrance_time_limit(model: &ModelSpec, t: f64, horizon: f64) -> Result<f64> {
    let mrv = model
        .mrv
        .ok_or_else(|| Error::param("entrance-time limit law needs an MRV description"))?;
    let phi = model.ret.laplace_exponent(mrv.alpha)?;
    let total = model.renewal.discounted_mass(phi, horizon)?.value;
    let part = model.renewal.discounted_mass(phi, t.min(horizon))?.value;
    Ok(part / total)
}
