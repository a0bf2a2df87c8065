//! Claim-arrival renewal processes and investment log-return processes.

use rand::distr::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Poisson, StandardNormal};

use crate::error::{Error, Result};
use crate::quadrature::integrate_pieces;
use crate::special::poisson_pmf;
use crate::stats::Estimate;

/// Paths used when a renewal quantity has no closed form.
const RENEWAL_MC_PATHS: usize = 1_000_000;
const RENEWAL_MC_SEED: u64 = 0x5e_ed0f_7e4e;

/// Claim-arrival counting process with i.i.d. interarrival times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RenewalSpec {
    Poisson { rate: f64 },
    /// Gamma interarrivals with integer shape.
    Erlang { shape: u32, rate: f64 },
    Uniform { low: f64, high: f64 },
}

impl RenewalSpec {
    pub fn poisson(rate: f64) -> Result<Self> {
        if !(rate > 0.0 && rate.is_finite()) {
            return Err(Error::param(format!("Poisson rate = {rate} must be positive")));
        }
        Ok(Self::Poisson { rate })
    }

    pub fn erlang(shape: u32, rate: f64) -> Result<Self> {
        if shape == 0 || !(rate > 0.0 && rate.is_finite()) {
            return Err(Error::param(format!("Erlang({shape}, {rate}) needs shape ≥ 1 and rate > 0")));
        }
        Ok(Self::Erlang { shape, rate })
    }

    pub fn uniform(low: f64, high: f64) -> Result<Self> {
        if !(low >= 0.0 && high > low && high.is_finite()) {
            return Err(Error::param(format!("uniform interarrivals need 0 ≤ low < high, got [{low}, {high}]")));
        }
        Ok(Self::Uniform { low, high })
    }

    pub fn mean_interarrival(&self) -> f64 {
        match *self {
            Self::Poisson { rate } => 1.0 / rate,
            Self::Erlang { shape, rate } => shape as f64 / rate,
            Self::Uniform { low, high } => 0.5 * (low + high),
        }
    }

    #[inline]
    pub fn sample_interarrival<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            Self::Poisson { rate } => Exp::new(rate).expect("validated rate").sample(rng),
            Self::Erlang { shape, rate } => {
                let exp = Exp::new(rate).expect("validated rate");
                (0..shape).map(|_| exp.sample(rng)).sum()
            }
            Self::Uniform { low, high } => {
                let u: f64 = rng.sample(Open01);
                low + (high - low) * u
            }
        }
    }

    /// Arrival epochs in `(0, horizon]`, increasing, written into `out`.
    pub fn sample_arrivals<R: Rng + ?Sized>(&self, horizon: f64, rng: &mut R, out: &mut Vec<f64>) {
        out.clear();
        let mut t = 0.0;
        loop {
            t += self.sample_interarrival(rng);
            if t > horizon {
                break;
            }
            out.push(t);
        }
    }

    /// `E[e^{φ τ₁}]` for `φ ≤ 0`.
    pub fn interarrival_mgf(&self, phi: f64) -> f64 {
        match *self {
            Self::Poisson { rate } => rate / (rate - phi),
            Self::Erlang { shape, rate } => (rate / (rate - phi)).powi(shape as i32),
            Self::Uniform { low, high } => {
                if phi == 0.0 {
                    1.0
                } else {
                    ((phi * high).exp() - (phi * low).exp()) / (phi * (high - low))
                }
            }
        }
    }

    /// Renewal function `λ(t) = E[N(t)]`.
    pub fn renewal_function(&self, t: f64) -> Result<Estimate> {
        if !(t >= 0.0) {
            return Err(Error::OutOfDomain(format!("renewal function at t = {t}")));
        }
        let value = match *self {
            Self::Poisson { rate } => Estimate::exact(rate * t),
            // Σ_i P[Γ(ik) ≤ t] = E[⌊M/k⌋] with M ~ Poisson(βt)
            Self::Erlang { shape, rate } => {
                let mean = rate * t;
                let k = shape as u64;
                let upper = (mean + 40.0 * mean.sqrt() + 60.0).ceil() as u64;
                let total = (k..=upper).map(|m| (m / k) as f64 * poisson_pmf(m, mean)).sum();
                Estimate::exact(total)
            }
            Self::Uniform { .. } => {
                let mut rng = ChaCha8Rng::seed_from_u64(RENEWAL_MC_SEED);
                let (mut sum, mut sum_sq) = (0.0, 0.0);
                for _ in 0..RENEWAL_MC_PATHS {
                    let mut n = 0u64;
                    let mut s = 0.0;
                    loop {
                        s += self.sample_interarrival(&mut rng);
                        if s > t {
                            break;
                        }
                        n += 1;
                    }
                    sum += n as f64;
                    sum_sq += (n * n) as f64;
                }
                Estimate::from_moments(sum, sum_sq, RENEWAL_MC_PATHS)
            }
        };
        if !value.value.is_finite() {
            return Err(Error::Numerical(format!("renewal function at t = {t} is not finite")));
        }
        Ok(value)
    }

    /// Renewal density `dλ/ds`, where it has a closed form.
    pub fn renewal_density(&self, s: f64) -> Option<f64> {
        match *self {
            Self::Poisson { rate } => Some(rate),
            Self::Erlang { shape, rate } => {
                if s < 0.0 {
                    return Some(0.0);
                }
                // (λ/k) Σ_j ω^j e^{−λ(1−ω^j)s} over the k-th roots of unity ω^j
                let k = shape as f64;
                let total: f64 = (0..shape)
                    .map(|j| {
                        let theta = std::f64::consts::TAU * j as f64 / k;
                        (-rate * s * (1.0 - theta.cos())).exp() * (theta + rate * s * theta.sin()).cos()
                    })
                    .sum();
                Some((rate / k * total).max(0.0))
            }
            Self::Uniform { .. } => None,
        }
    }

    /// `∫_0^T g(s) λ(ds)`. Exact-density renewals use adaptive Simpson;
    /// uniform interarrivals average `Σ g(τ_i)` over simulated arrivals.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut g: F, horizon: f64, rel_tol: f64) -> Estimate {
        if horizon <= 0.0 {
            return Estimate::exact(0.0);
        }
        match *self {
            Self::Poisson { .. } | Self::Erlang { .. } => {
                let breaks: Vec<f64> = (0..=16).map(|k| horizon * k as f64 / 16.0).collect();
                let mut f = |s: f64| g(s) * self.renewal_density(s).expect("closed-form density");
                Estimate::exact(integrate_pieces(&mut f, &breaks, rel_tol))
            }
            Self::Uniform { .. } => {
                let n = RENEWAL_MC_PATHS / 10;
                let mut rng = ChaCha8Rng::seed_from_u64(RENEWAL_MC_SEED);
                let (mut sum, mut sum_sq) = (0.0, 0.0);
                for _ in 0..n {
                    let mut s = 0.0;
                    let mut acc = 0.0;
                    loop {
                        s += self.sample_interarrival(&mut rng);
                        if s > horizon {
                            break;
                        }
                        acc += g(s);
                    }
                    sum += acc;
                    sum_sq += acc * acc;
                }
                Estimate::from_moments(sum, sum_sq, n)
            }
        }
    }

    /// `∫_0^T e^{φ s} λ(ds)` for `φ ≤ 0`; `T = ∞` allowed when `φ < 0`.
    pub fn discounted_mass(&self, phi: f64, horizon: f64) -> Result<Estimate> {
        if horizon.is_infinite() {
            if !(phi < 0.0) {
                return Err(Error::Numerical(format!(
                    "∫ e^(φs) λ(ds) diverges on [0, ∞) for φ = {phi}"
                )));
            }
            let q = self.interarrival_mgf(phi);
            return Ok(Estimate::exact(q / (1.0 - q)));
        }
        Ok(match *self {
            Self::Poisson { rate } if phi == 0.0 => Estimate::exact(rate * horizon),
            Self::Poisson { rate } => Estimate::exact(rate * (-(horizon * phi).exp_m1()) / (-phi)),
            _ => self.integrate(|s| (phi * s).exp(), horizon, 1e-10),
        })
    }

    /// Upper bound on `∫_T^∞ e^{φ s} λ(ds)` for `φ < 0`. Exact for Poisson;
    /// otherwise `e^{φT/2} Σ_i E[e^{φ τ_i / 2}]`.
    pub fn discounted_tail_bound(&self, phi: f64, horizon: f64) -> f64 {
        match *self {
            Self::Poisson { rate } => rate * (phi * horizon).exp() / (-phi),
            _ => {
                let q = self.interarrival_mgf(0.5 * phi);
                (0.5 * phi * horizon).exp() * q / (1.0 - q)
            }
        }
    }
}

/// Jump-size law of a compound Poisson log-return component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum JumpLaw {
    Exponential { mean: f64 },
    Normal { mean: f64, sd: f64 },
}

impl JumpLaw {
    fn validate(&self) -> Result<()> {
        match *self {
            Self::Exponential { mean } if mean > 0.0 => Ok(()),
            Self::Normal { sd, mean } if sd >= 0.0 && mean.is_finite() => Ok(()),
            _ => Err(Error::param(format!("invalid jump law {self:?}"))),
        }
    }

    /// `E[e^{−kJ}]`, or `None` outside the finiteness domain.
    fn mgf_neg(&self, k: f64) -> Option<f64> {
        match *self {
            Self::Exponential { mean } => (1.0 + k * mean > 0.0).then(|| 1.0 / (1.0 + k * mean)),
            Self::Normal { mean, sd } => Some((-k * mean + 0.5 * k * k * sd * sd).exp()),
        }
    }

    fn nonnegative(&self) -> bool {
        matches!(self, Self::Exponential { .. })
    }

    pub(crate) fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            Self::Exponential { mean } => Exp::new(1.0 / mean).expect("validated").sample(rng),
            Self::Normal { mean, sd } => {
                let z: f64 = StandardNormal.sample(rng);
                mean + sd * z
            }
        }
    }
}

/// Investment log-return process `ξ(t)` with `ξ(0) = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReturnProcess {
    Deterministic { r: f64 },
    Brownian { mu: f64, sigma: f64 },
    CompoundPoisson { drift: f64, rate: f64, jump: JumpLaw },
}

/// Outcome of the bounded-below check on `[0, T]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowerBound {
    pub holds: bool,
    /// `K_T` with `inf_{t ≤ T} ξ(t) ≥ −K_T`.
    pub k_t: Option<f64>,
}

impl ReturnProcess {
    pub fn deterministic(r: f64) -> Result<Self> {
        if !(r >= 0.0 && r.is_finite()) {
            return Err(Error::param(format!("constant force r = {r} must be ≥ 0")));
        }
        Ok(Self::Deterministic { r })
    }

    pub fn brownian(mu: f64, sigma: f64) -> Result<Self> {
        if !(mu.is_finite() && sigma >= 0.0 && sigma.is_finite()) {
            return Err(Error::param(format!("Brownian returns need finite drift and σ ≥ 0, got ({mu}, {sigma})")));
        }
        Ok(Self::Brownian { mu, sigma })
    }

    pub fn compound_poisson(drift: f64, rate: f64, jump: JumpLaw) -> Result<Self> {
        if !(drift.is_finite() && rate >= 0.0 && rate.is_finite()) {
            return Err(Error::param(format!("compound Poisson returns need finite drift and rate ≥ 0, got ({drift}, {rate})")));
        }
        jump.validate()?;
        Ok(Self::CompoundPoisson { drift, rate, jump })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Deterministic { .. } => "deterministic",
            Self::Brownian { .. } => "brownian",
            Self::CompoundPoisson { .. } => "compound_poisson",
        }
    }

    /// `φ(k) = log E[e^{−k ξ(1)}]`.
    pub fn laplace_exponent(&self, k: f64) -> Result<f64> {
        match *self {
            Self::Deterministic { r } => Ok(-k * r),
            Self::Brownian { mu, sigma } => Ok(-k * mu + 0.5 * k * k * sigma * sigma),
            Self::CompoundPoisson { drift, rate, jump } => {
                let m = jump.mgf_neg(k).ok_or_else(|| {
                    Error::OutOfDomain(format!("E[e^(-kJ)] is infinite at k = {k} for {jump:?}"))
                })?;
                Ok(-k * drift + rate * (m - 1.0))
            }
        }
    }

    /// Whether every sample path is non-decreasing.
    pub fn non_decreasing(&self) -> bool {
        match *self {
            Self::Deterministic { r } => r >= 0.0,
            Self::Brownian { mu, sigma } => sigma == 0.0 && mu >= 0.0,
            Self::CompoundPoisson { drift, rate, jump } => drift >= 0.0 && (rate == 0.0 || jump.nonnegative()),
        }
    }

    /// Whether `inf_{0≤t≤T} ξ(t) ≥ −K_T` for a deterministic `K_T`.
    pub fn bounded_below(&self, horizon: f64) -> LowerBound {
        let linear = |drift: f64| LowerBound {
            holds: true,
            k_t: Some((-drift * horizon).max(0.0)),
        };
        match *self {
            Self::Deterministic { r } => linear(r),
            Self::Brownian { mu, sigma } if sigma == 0.0 => linear(mu),
            Self::CompoundPoisson { drift, rate, jump } if rate == 0.0 || jump.nonnegative() => linear(drift),
            _ => LowerBound { holds: false, k_t: None },
        }
    }

    /// Increment `ξ(t + dt) − ξ(t)`.
    #[inline]
    pub fn increment<R: Rng + ?Sized>(&self, dt: f64, rng: &mut R) -> f64 {
        match *self {
            Self::Deterministic { r } => r * dt,
            Self::Brownian { mu, sigma } => {
                if sigma == 0.0 {
                    return mu * dt;
                }
                let z: f64 = StandardNormal.sample(rng);
                mu * dt + sigma * dt.sqrt() * z
            }
            Self::CompoundPoisson { drift, rate, jump } => {
                let mut v = drift * dt;
                let mean = rate * dt;
                if mean > 0.0 {
                    let n = Poisson::new(mean).expect("positive mean").sample(rng) as u64;
                    for _ in 0..n {
                        v += jump.sample(rng);
                    }
                }
                v
            }
        }
    }

    /// `ξ` at increasing `times`, written into `out`.
    pub fn sample_at<R: Rng + ?Sized>(&self, times: &[f64], rng: &mut R, out: &mut Vec<f64>) {
        out.clear();
        let (mut t, mut xi) = (0.0, 0.0);
        for &s in times {
            xi += self.increment(s - t, rng);
            t = s;
            out.push(xi);
        }
    }

    /// `E[e^{−k ξ(t)}] = e^{t φ(k)}`.
    pub fn discount_moment(&self, k: f64, t: f64) -> Result<f64> {
        Ok((t * self.laplace_exponent(k)?).exp())
    }
}

/// Result of the discount-summability check.
#[derive(Debug, Clone, PartialEq)]
pub struct Summability {
    pub holds: bool,
    pub p1: f64,
    pub p2: f64,
    pub rho: f64,
    pub phi_p1: f64,
    pub phi_p2: f64,
    /// `Σ_i (q₁^{i/ρ} + q₂^{i/ρ})` with `q_k = E[e^{τ₁ φ(p_k)}]`; infinite when it fails.
    pub series_bound: f64,
    /// Smallest index whose series remainder is below the truncation tolerance.
    pub truncation_index: Option<usize>,
    /// Horizon whose discounted renewal remainder is below the truncation tolerance.
    pub truncation_horizon: Option<f64>,
    /// Relative remainder actually achieved at `truncation_horizon`.
    pub truncation_bound: Option<f64>,
    pub detail: String,
}

/// Relative remainder allowed when truncating infinite-horizon quantities.
pub const TRUNCATION_TOLERANCE: f64 = 1e-3;

/// Checks geometric summability of `E[e^{−p ξ(τ_i)}]` for `p ∈ {p1, p2}` with
/// `0 < p1 < J⁻` and `p2 > J⁺`, and derives the truncation horizon.
pub fn check_discount_summability(
    ret: &ReturnProcess,
    renewal: &RenewalSpec,
    p1: f64,
    p2: f64,
    j_minus: f64,
    j_plus: f64,
) -> Result<Summability> {
    if !(p1 > 0.0 && p2 > p1) {
        return Err(Error::param(format!("need 0 < p1 < p2, got p1 = {p1}, p2 = {p2}")));
    }
    if !(j_plus > 0.0) {
        return Err(Error::param(format!("J+ = {j_plus} must be positive")));
    }
    let rho = if j_plus < 1.0 { 1.0 } else { p2 };
    let phi_p1 = ret.laplace_exponent(p1)?;
    let phi_p2 = ret.laplace_exponent(p2)?;
    let mut problems = Vec::new();
    if p1 >= j_minus {
        problems.push(format!("p1 = {p1} is not below J- = {j_minus}"));
    }
    if p2 <= j_plus {
        problems.push(format!("p2 = {p2} is not above J+ = {j_plus}"));
    }
    if phi_p1 >= 0.0 {
        problems.push(format!("φ(p1) = {phi_p1:.6} ≥ 0"));
    }
    if phi_p2 >= 0.0 {
        problems.push(format!("φ(p2) = {phi_p2:.6} ≥ 0"));
    }
    if !problems.is_empty() {
        return Ok(Summability {
            holds: false,
            p1,
            p2,
            rho,
            phi_p1,
            phi_p2,
            series_bound: f64::INFINITY,
            truncation_index: None,
            truncation_horizon: None,
            truncation_bound: None,
            detail: problems.join("; "),
        });
    }
    let z1 = renewal.interarrival_mgf(phi_p1).powf(1.0 / rho);
    let z2 = renewal.interarrival_mgf(phi_p2).powf(1.0 / rho);
    let geometric = |z: f64| z / (1.0 - z);
    let series_bound = geometric(z1) + geometric(z2);
    let mut index = 1usize;
    loop {
        let rest = z1.powi(index as i32) * geometric(z1) + z2.powi(index as i32) * geometric(z2);
        if rest < TRUNCATION_TOLERANCE * series_bound || index > 100_000_000 {
            break;
        }
        index += 1;
    }
    // time-domain remainder of the dominating function e^{sφ(p1)} + e^{sφ(p2)}
    let total = renewal.discounted_mass(phi_p1, f64::INFINITY)?.value
        + renewal.discounted_mass(phi_p2, f64::INFINITY)?.value;
    let tail = |t: f64| {
        (renewal.discounted_tail_bound(phi_p1, t) + renewal.discounted_tail_bound(phi_p2, t)) / total
    };
    let mut horizon = renewal.mean_interarrival();
    while tail(horizon) >= TRUNCATION_TOLERANCE {
        horizon *= 2.0;
    }
    let (mut lo, mut hi) = (0.5 * horizon, horizon);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if tail(mid) < TRUNCATION_TOLERANCE {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Summability {
        holds: true,
        p1,
        p2,
        rho,
        phi_p1,
        phi_p2,
        series_bound,
        truncation_index: Some(index),
        truncation_horizon: Some(hi),
        truncation_bound: Some(tail(hi)),
        detail: format!("φ(p1) = {phi_p1:.6}, φ(p2) = {phi_p2:.6}, ρ = {rho}"),
    })
}

/// Picks `p1 ∈ (0, J⁻)` and `p2 > J⁺` with the shortest truncation horizon.
/// Fails when no `p2 > J⁺` has `φ(p2) < 0`.
pub fn choose_summability_exponents(
    ret: &ReturnProcess,
    renewal: &RenewalSpec,
    j_minus: f64,
    j_plus: f64,
) -> Result<Summability> {
    let upper = if j_plus.is_finite() { 4.0 * j_plus + 4.0 } else { return Err(Error::param("J+ must be finite")) };
    let mut best: Option<Summability> = None;
    let mut last_fail = None;
    for i in 1..=40 {
        let p2 = j_plus + (upper - j_plus) * i as f64 / 40.0;
        for j in 1..=9 {
            let p1 = j_minus * j as f64 / 10.0;
            let check = match check_discount_summability(ret, renewal, p1, p2, j_minus, j_plus) {
                Ok(c) => c,
                Err(e) => {
                    last_fail = Some(e.to_string());
                    continue;
                }
            };
            if !check.holds {
                last_fail = Some(check.detail.clone());
                continue;
            }
            let better = best
                .as_ref()
                .is_none_or(|b| check.truncation_horizon < b.truncation_horizon);
            if better {
                best = Some(check);
            }
        }
    }
    best.ok_or_else(|| {
        Error::hypothesis(
            "discount summability",
            format!(
                "no p2 > J+ = {j_plus} with φ(p2) < 0 ({})",
                last_fail.unwrap_or_default()
            ),
        )
    })
}
