//! Discounted surplus `U(t) = x·l + ∫_0^t e^{−ξ(s)} p(s) ds − D(t)` and ruin
//! against a scale-insensitive ruin set `L`.
//!
//! Because `L` is scale-insensitive, `U(t) ∈ L` iff `(D(t) − P(t))/x ∈ A` with
//! `A = l − L`, so each path reduces to one ruin index
//! `R = max_k Z_A(D(τ_k) − P(τ_k))` and ruin at level `x` is `R > x`. Premiums
//! only push the surplus up between arrivals, so arrival epochs suffice.

use rand::Rng;
use serde::Serialize;

use crate::engine::{self, ExceedanceCounts, Mergeable};
use crate::error::{Error, Result};
use crate::estimators::{
    asymptotic_entrance_finite, asymptotic_entrance_infinite, mrv_closed_form, AsymptoticOptions, Exponents,
    InfiniteAsymptotic, ModeRequest, ModelSpec,
};
use crate::montecarlo::{EstimateTable, PathLedger, SimConfig};
use crate::processes::ReturnProcess;
use crate::rare_sets::{from_ruin_set, RuinSet};
use crate::stats::Estimate;

/// Grid cells per horizon for the premium integral under Brownian returns.
pub const PREMIUM_GRID_CELLS: usize = 2_048;

/// Piecewise-constant premium density: `rates[k]` on `[breaks[k], breaks[k+1])`,
/// the last rate continuing indefinitely.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PremiumSchedule {
    breaks: Vec<f64>,
    rates: Vec<f64>,
}

impl PremiumSchedule {
    pub fn new(breaks: Vec<f64>, rates: Vec<f64>) -> Result<Self> {
        if breaks.is_empty() || breaks.len() != rates.len() || breaks[0] != 0.0 {
            return Err(Error::param("premium breaks must start at 0 and match the rates"));
        }
        if !breaks.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::param("premium breaks must be strictly increasing"));
        }
        if rates.iter().any(|r| !(r.is_finite() && *r >= 0.0)) {
            return Err(Error::param("premium rates must be finite and nonnegative"));
        }
        Ok(Self { breaks, rates })
    }

    pub fn constant(rate: f64) -> Result<Self> {
        Self::new(vec![0.0], vec![rate])
    }

    pub fn zero() -> Self {
        Self {
            breaks: vec![0.0],
            rates: vec![0.0],
        }
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn max_rate(&self) -> f64 {
        self.rates.iter().copied().fold(0.0, f64::max)
    }

    pub fn rate(&self, s: f64) -> f64 {
        let k = self.breaks.partition_point(|b| *b <= s).max(1) - 1;
        self.rates[k]
    }

    /// `∫_0^t e^{−rs} p(s) ds` in closed form.
    pub fn discounted_integral(&self, r: f64, t: f64) -> f64 {
        let mut total = 0.0;
        for (k, (&a, &c)) in self.breaks.iter().zip(&self.rates).enumerate() {
            if a >= t {
                break;
            }
            let b = self.breaks.get(k + 1).copied().unwrap_or(f64::INFINITY).min(t);
            total += if r == 0.0 {
                c * (b - a)
            } else {
                // e^{−ra} − e^{−rb} = e^{−ra}(1 − e^{−r(b−a)})
                c * (-r * a).exp() * (-(-r * (b - a)).exp_m1()) / r
            };
        }
        total
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RuinModel {
    /// The model with the set replaced by `A = l − L`.
    pub base: ModelSpec,
    pub ruin_set: RuinSet,
    pub alloc: Vec<f64>,
    pub premiums: Vec<PremiumSchedule>,
    /// Declared bound `C_T` on every premium density.
    pub premium_bound: f64,
}

impl RuinModel {
    /// `base.set` is overwritten by the set mapped from `ruin_set` and `alloc`.
    pub fn new(
        mut base: ModelSpec,
        ruin_set: RuinSet,
        alloc: Vec<f64>,
        premiums: Vec<PremiumSchedule>,
        premium_bound: f64,
    ) -> Result<Self> {
        let set = from_ruin_set(&ruin_set, &alloc)?;
        if set.dim() != base.dim() || premiums.len() != base.dim() {
            return Err(Error::DimensionMismatch {
                expected: base.dim(),
                got: if set.dim() != base.dim() { set.dim() } else { premiums.len() },
            });
        }
        if let Some(p) = premiums.iter().find(|p| p.max_rate() > premium_bound) {
            return Err(Error::param(format!(
                "premium rate {} exceeds the declared bound {premium_bound}",
                p.max_rate()
            )));
        }
        base.set = set;
        Ok(Self {
            base,
            ruin_set,
            alloc,
            premiums,
            premium_bound,
        })
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    /// Shift `u` with `{Z_A(D(T)) > x + u} ⊂ ruin(x) ⊂ {Z_A(D(T)) > x}` on
    /// every path: `Z_A` of the largest possible discounted premium vector
    /// `C_T e^{K_T} T · 1`.
    pub fn sandwich_shift(&self, horizon: f64) -> Result<f64> {
        let lb = self.base.ret.bounded_below(horizon);
        let k = lb.k_t.ok_or_else(|| {
            Error::hypothesis(
                "bounded-below returns",
                format!("{} returns have no lower bound on [0, {horizon}]", self.base.ret.name()),
            )
        })?;
        let cap = self.premium_bound * k.exp() * horizon;
        Ok(self.base.set.z_index_unchecked(&vec![cap; self.dim()]))
    }

    /// Whether discounted premium integrals stay finite over an infinite horizon.
    pub fn premiums_finite_at_infinity(&self) -> Result<bool> {
        Ok(match self.base.ret {
            ReturnProcess::Deterministic { r } => r > 0.0 || self.premium_bound == 0.0,
            ret => self.premium_bound == 0.0 || ret.laplace_exponent(1.0)? < 0.0,
        })
    }
}

/// Arrival ledger plus discounted premium income at each arrival.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RuinLedger {
    pub path: PathLedger,
    /// Row-major `P(τ_k)`, one row per arrival.
    pub premium: Vec<f64>,
    grid: Vec<f64>,
    grid_xi: Vec<f64>,
    events: Vec<(f64, f64)>,
}

impl RuinLedger {
    pub fn new(d: usize) -> Self {
        Self {
            path: PathLedger::new(d),
            ..Default::default()
        }
    }

    /// Simulates arrivals, claims and returns, then the premium integrals.
    /// Deterministic and compound Poisson returns integrate premiums exactly
    /// (`ξ` is linear between jumps); Brownian returns use the trapezoid rule
    /// on a grid of `PREMIUM_GRID_CELLS` cells merged with arrivals and
    /// premium breaks.
    pub fn simulate<R: Rng + ?Sized>(&mut self, model: &RuinModel, horizon: f64, rng: &mut R) {
        let base = &model.base;
        let d = base.dim();
        let path = &mut self.path;
        base.renewal.sample_arrivals(horizon, rng, &mut path.times);
        let n = path.times.len();
        if n > 0 {
            base.claim.fill_sequence(n, rng, &mut path.claims);
        } else {
            path.claims.clear();
        }
        self.premium.clear();
        self.premium.resize(n * d, 0.0);
        path.xi.clear();
        match base.ret {
            ReturnProcess::Deterministic { r } => {
                path.xi.extend(path.times.iter().map(|t| r * t));
                for (k, &t) in path.times.iter().enumerate() {
                    for (i, p) in model.premiums.iter().enumerate() {
                        self.premium[k * d + i] = p.discounted_integral(r, t);
                    }
                }
            }
            ReturnProcess::CompoundPoisson { drift, rate, jump } => {
                // events: (time, jump size); NaN marks an arrival, 0 a premium break
                self.events.clear();
                let mut t = 0.0;
                if rate > 0.0 {
                    loop {
                        t += -(1.0 - rng.random::<f64>()).ln() / rate;
                        if t > horizon {
                            break;
                        }
                        self.events.push((t, jump.sample(rng)));
                    }
                }
                self.events.extend(path.times.iter().map(|&t| (t, f64::NAN)));
                push_breaks(&mut self.events, model, horizon);
                self.events.sort_by(|a, b| a.0.total_cmp(&b.0));
                let mut income = vec![0.0; d];
                let (mut prev, mut xi, mut next) = (0.0, 0.0f64, 0);
                for &(t, size) in &self.events {
                    let h = t - prev;
                    if h > 0.0 {
                        let w = (-xi).exp() * if drift == 0.0 { h } else { -(-drift * h).exp_m1() / drift };
                        let mid = 0.5 * (prev + t);
                        for (acc, p) in income.iter_mut().zip(&model.premiums) {
                            *acc += w * p.rate(mid);
                        }
                        xi += drift * h;
                        prev = t;
                    }
                    if size.is_nan() {
                        path.xi.push(xi);
                        self.premium[next * d..(next + 1) * d].copy_from_slice(&income);
                        next += 1;
                    } else {
                        xi += size;
                    }
                }
            }
            ReturnProcess::Brownian { .. } => {
                self.grid.clear();
                let step = horizon / PREMIUM_GRID_CELLS as f64;
                self.grid.extend((1..=PREMIUM_GRID_CELLS).map(|j| j as f64 * step));
                self.events.clear();
                push_breaks(&mut self.events, model, horizon);
                self.grid.extend(self.events.iter().map(|e| e.0));
                self.grid.extend_from_slice(&path.times);
                self.grid.sort_by(f64::total_cmp);
                self.grid.dedup();
                base.ret.sample_at(&self.grid, rng, &mut self.grid_xi);
                let mut income = vec![0.0; d];
                let (mut prev_t, mut prev_f) = (0.0, 1.0);
                let mut next = 0;
                for (&t, &xi) in self.grid.iter().zip(&self.grid_xi) {
                    let f = (-xi).exp();
                    let mid = 0.5 * (prev_t + t);
                    for (acc, p) in income.iter_mut().zip(&model.premiums) {
                        *acc += 0.5 * (t - prev_t) * (prev_f + f) * p.rate(mid);
                    }
                    (prev_t, prev_f) = (t, f);
                    while next < n && path.times[next] == t {
                        path.xi.push(xi);
                        self.premium[next * d..(next + 1) * d].copy_from_slice(&income);
                        next += 1;
                    }
                }
            }
        }
    }

    /// `max_k Z_A(D(τ_k) − P(τ_k))`, or `−∞` without arrivals, together with `Z_A(D(T))`.
    pub fn ruin_and_entrance_index(&self, model: &RuinModel, scratch: &mut Vec<f64>) -> (f64, f64) {
        let d = model.dim();
        let set = &model.base.set;
        scratch.clear();
        scratch.resize(2 * d, 0.0);
        let (total, diff) = scratch.split_at_mut(d);
        let mut worst = f64::NEG_INFINITY;
        for k in 0..self.path.len() {
            let f = self.path.discount(k);
            for (i, x) in self.path.claim(k).iter().enumerate() {
                total[i] += x * f;
                diff[i] = total[i] - self.premium[k * d + i];
            }
            worst = worst.max(set.z_index_unchecked(diff));
        }
        (worst, set.z_index_unchecked(total))
    }
}

fn push_breaks(events: &mut Vec<(f64, f64)>, model: &RuinModel, horizon: f64) {
    for p in &model.premiums {
        events.extend(p.breaks().iter().filter(|b| **b > 0.0 && **b < horizon).map(|&b| (b, 0.0)));
    }
}

/// Surplus vectors `U(τ_k)` at each arrival, row-major.
pub fn surplus_path(model: &RuinModel, ledger: &RuinLedger, x: f64) -> Vec<f64> {
    let d = model.dim();
    let mut out = Vec::with_capacity(ledger.path.len() * d);
    let mut total = vec![0.0; d];
    for k in 0..ledger.path.len() {
        let f = ledger.path.discount(k);
        for (i, c) in ledger.path.claim(k).iter().enumerate() {
            total[i] += c * f;
            out.push(x * model.alloc[i] + ledger.premium[k * d + i] - total[i]);
        }
    }
    out
}

/// Ruin probabilities with the coupled entrance bounds of the same paths.
#[derive(Debug, Clone, PartialEq)]
pub struct RuinStudy {
    pub ruin: EstimateTable,
    /// `P̂[D(T) ∈ xA]` on the same paths.
    pub entrance: EstimateTable,
    /// `P̂[D(T) ∈ (x + u)A]` on the same paths.
    pub entrance_shifted: Option<EstimateTable>,
    pub shift: Option<f64>,
    /// Path-level violations of `entrance(x+u) ⊂ ruin(x) ⊂ entrance(x)`.
    pub violations: u64,
}

#[derive(Debug, Clone)]
struct RuinCounts {
    ruin: ExceedanceCounts,
    entrance: ExceedanceCounts,
    shifted: ExceedanceCounts,
    violations: u64,
}

impl Mergeable for RuinCounts {
    fn merge(&mut self, other: Self) {
        self.ruin.merge(other.ruin);
        self.entrance.merge(other.entrance);
        self.shifted.merge(other.shifted);
        self.violations += other.violations;
    }
}

/// Empirical ruin probabilities over `sim.x_grid` up to `sim.horizon`.
pub fn empirical_ruin(model: &RuinModel, sim: &SimConfig) -> Result<RuinStudy> {
    sim.validate()?;
    let grid = &sim.x_grid;
    let shift = model.sandwich_shift(sim.horizon).ok();
    let shifted_grid: Vec<f64> = grid.iter().map(|x| x + shift.unwrap_or(0.0)).collect();
    let d = model.dim();
    let counts = engine::run(
        sim.n_paths,
        sim.seed,
        sim.backend(),
        || (RuinLedger::new(d), Vec::new()),
        || RuinCounts {
            ruin: ExceedanceCounts::new(grid.len()),
            entrance: ExceedanceCounts::new(grid.len()),
            shifted: ExceedanceCounts::new(grid.len()),
            violations: 0,
        },
        |(ledger, scratch), rng, _, acc| {
            ledger.simulate(model, sim.horizon, rng);
            let (r, z) = ledger.ruin_and_entrance_index(model, scratch);
            acc.ruin.record(grid, r);
            acc.entrance.record(grid, z);
            acc.shifted.record(&shifted_grid, z);
            if let Some(u) = shift {
                // ruin(x) ⇒ entrance(x), entrance(x + u) ⇒ ruin(x)
                let bad = grid.iter().any(|&x| (r > x && z <= x) || (z > x + u && r <= x));
                acc.violations += bad as u64;
            }
        },
    )?;
    let table = |c: &ExceedanceCounts| EstimateTable::from_counts(grid, &c.counts(), sim.n_paths, sim.ci_level);
    Ok(RuinStudy {
        ruin: table(&counts.ruin).with_ruin_set(model.ruin_set.label()),
        entrance: table(&counts.entrance),
        entrance_shifted: shift.map(|_| table(&counts.shifted)),
        shift,
        violations: counts.violations,
    })
}

/// Asymptotic ruin probability: the entrance asymptotics of the mapped set.
pub fn asymptotic_ruin(model: &RuinModel, x: f64, horizon: f64, request: ModeRequest, opts: &AsymptoticOptions) -> Result<Estimate> {
    if horizon.is_infinite() {
        Ok(asymptotic_ruin_infinite(model, x, Exponents::default(), false, opts)?.value)
    } else {
        asymptotic_entrance_finite(&model.base, x, horizon, request, opts)
    }
}

/// Infinite-horizon ruin asymptotics; also requires finite discounted premiums.
pub fn asymptotic_ruin_infinite(
    model: &RuinModel,
    x: f64,
    exponents: Exponents,
    unchecked: bool,
    opts: &AsymptoticOptions,
) -> Result<InfiniteAsymptotic> {
    if !unchecked && !model.premiums_finite_at_infinity()? {
        return Err(Error::hypothesis(
            "finite discounted premiums",
            "∫ e^(-ξ(s)) p(s) ds may diverge; need r > 0 or φ(1) < 0",
        ));
    }
    asymptotic_entrance_infinite(&model.base, x, exponents, unchecked, opts)
}

/// MRV closed form for the mapped set.
pub fn mrv_ruin(model: &RuinModel, x: f64, horizon: f64) -> Result<f64> {
    mrv_closed_form(&model.base, x, horizon)
}
