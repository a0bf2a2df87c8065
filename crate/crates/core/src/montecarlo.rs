//! Path simulation of the discounted aggregate claim vector
//! `D(T) = Σ_{i ≤ N(T)} X^(i) e^{−ξ(τ_i)}` and the empirical estimators built on it.
//!
//! Every path draws, in order, its arrival epochs, its claim vectors and the
//! return process at the arrival epochs, all from the path's own stream.

use std::io::Write;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::engine::{self, check_grid, Backend, ExceedanceCounts, Mergeable};
use crate::error::{Error, Result};
use crate::estimators::ModelSpec;
use crate::stats::{wilson_interval, z_value};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimConfig {
    pub n_paths: u64,
    pub seed: u64,
    pub workers: usize,
    /// Finite simulation horizon (the truncation horizon for infinite runs).
    pub horizon: f64,
    pub x_grid: Vec<f64>,
    pub ci_level: f64,
}

impl SimConfig {
    pub fn new(n_paths: u64, seed: u64, horizon: f64, x_grid: Vec<f64>) -> Self {
        Self {
            n_paths,
            seed,
            workers: 1,
            horizon,
            x_grid,
            ci_level: 0.95,
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_paths == 0 {
            return Err(Error::param("n_paths must be at least 1"));
        }
        if self.workers == 0 {
            return Err(Error::param("workers must be at least 1"));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(Error::param(format!("simulation horizon {} must be finite and positive", self.horizon)));
        }
        if !(self.ci_level > 0.0 && self.ci_level < 1.0) {
            return Err(Error::param(format!("ci_level {} outside (0, 1)", self.ci_level)));
        }
        check_grid(&self.x_grid)
    }

    pub fn backend(&self) -> Backend {
        Backend::for_workers(self.workers)
    }
}

/// Arrival epochs, returns at those epochs and claim vectors of one path.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PathLedger {
    d: usize,
    pub times: Vec<f64>,
    pub xi: Vec<f64>,
    /// Row-major claim vectors, one row per arrival.
    pub claims: Vec<f64>,
}

impl PathLedger {
    pub fn new(d: usize) -> Self {
        Self {
            d,
            ..Default::default()
        }
    }

    /// Ledger from explicit parts; `claims` is row-major with `times.len()` rows.
    pub fn from_parts(d: usize, times: Vec<f64>, xi: Vec<f64>, claims: Vec<f64>) -> Result<Self> {
        if xi.len() != times.len() || claims.len() != d * times.len() {
            return Err(Error::param("ledger parts have inconsistent lengths"));
        }
        Ok(Self { d, times, xi, claims })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn claim(&self, i: usize) -> &[f64] {
        &self.claims[i * self.d..(i + 1) * self.d]
    }

    /// Discount factor `e^{−ξ(τ_i)}` of arrival `i`.
    #[inline]
    pub fn discount(&self, i: usize) -> f64 {
        (-self.xi[i]).exp()
    }

    /// `D(T)` written into `out`.
    pub fn aggregate_into(&self, out: &mut [f64]) {
        out.fill(0.0);
        for i in 0..self.len() {
            let f = self.discount(i);
            for (o, x) in out.iter_mut().zip(self.claim(i)) {
                *o += x * f;
            }
        }
    }

    pub fn aggregate(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.d];
        self.aggregate_into(&mut out);
        out
    }

    /// Simulates one path up to `horizon`, reusing this ledger's buffers.
    pub fn simulate<R: Rng + ?Sized>(&mut self, model: &ModelSpec, horizon: f64, rng: &mut R) {
        self.d = model.dim();
        model.renewal.sample_arrivals(horizon, rng, &mut self.times);
        let n = self.times.len();
        if n == 0 {
            self.claims.clear();
            self.xi.clear();
            return;
        }
        model.claim.fill_sequence(n, rng, &mut self.claims);
        model.ret.sample_at(&self.times, rng, &mut self.xi);
    }
}

/// `D(T)` of one simulated path together with its ledger.
pub fn simulate_aggregate<R: Rng + ?Sized>(model: &ModelSpec, horizon: f64, rng: &mut R) -> (Vec<f64>, PathLedger) {
    let mut ledger = PathLedger::new(model.dim());
    ledger.simulate(model, horizon, rng);
    (ledger.aggregate(), ledger)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateRow {
    pub x: f64,
    pub p_hat: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub count: u64,
    pub asymptotic: Option<f64>,
    /// `p_hat / asymptotic`; absent without exceedances or asymptotic value.
    pub ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ruin_set: Option<String>,
}

impl EstimateRow {
    /// True when no path exceeded this level.
    pub fn flagged(&self) -> bool {
        self.count == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimateTable {
    pub n_paths: u64,
    pub rows: Vec<EstimateRow>,
}

impl EstimateTable {
    pub fn from_counts(x_grid: &[f64], counts: &[u64], n_paths: u64, ci_level: f64) -> Self {
        let rows = x_grid
            .iter()
            .zip(counts)
            .map(|(&x, &count)| {
                let ci = wilson_interval(count, n_paths, ci_level);
                EstimateRow {
                    x,
                    p_hat: count as f64 / n_paths as f64,
                    ci_lo: ci.lo,
                    ci_hi: ci.hi,
                    count,
                    asymptotic: None,
                    ratio: None,
                    ruin_set: None,
                }
            })
            .collect();
        Self { n_paths, rows }
    }

    /// Fills the asymptotic column and the ratio wherever there are exceedances.
    pub fn with_asymptotic<F: FnMut(f64) -> Result<f64>>(mut self, mut asymptotic: F) -> Result<Self> {
        for row in &mut self.rows {
            let a = asymptotic(row.x)?;
            row.asymptotic = Some(a);
            row.ratio = (row.count > 0 && a > 0.0).then(|| row.p_hat / a);
        }
        Ok(self)
    }

    pub fn with_ruin_set(mut self, label: &str) -> Self {
        for row in &mut self.rows {
            row.ruin_set = Some(label.to_string());
        }
        self
    }

    /// Largest grid level whose estimate is at least `level`.
    pub fn last_row_above(&self, level: f64) -> Option<&EstimateRow> {
        self.rows.iter().rev().find(|r| r.p_hat >= level)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let ruin = self.rows.iter().any(|r| r.ruin_set.is_some());
        write!(w, "x,p_hat,ci_lo,ci_hi,count,asymptotic,ratio")?;
        if ruin {
            write!(w, ",ruin_set")?;
        }
        writeln!(w)?;
        let opt = |v: Option<f64>| v.map(|v| format!("{v:e}")).unwrap_or_default();
        for r in &self.rows {
            write!(
                w,
                "{},{:e},{:e},{:e},{},{},{}",
                r.x,
                r.p_hat,
                r.ci_lo,
                r.ci_hi,
                r.count,
                opt(r.asymptotic),
                opt(r.ratio)
            )?;
            if ruin {
                write!(w, ",{}", r.ruin_set.as_deref().unwrap_or(""))?;
            }
            writeln!(w)?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.rows).expect("rows serialize")
    }
}

/// Z_A of `D(T)` for every path, tallied against the level grid.
pub fn empirical_entrance(model: &ModelSpec, sim: &SimConfig) -> Result<EstimateTable> {
    sim.validate()?;
    let grid = &sim.x_grid;
    let d = model.dim();
    let counts = engine::run(
        sim.n_paths,
        sim.seed,
        sim.backend(),
        || (PathLedger::new(d), vec![0.0; d]),
        || ExceedanceCounts::new(grid.len()),
        |(ledger, total), rng, _, acc| {
            ledger.simulate(model, sim.horizon, rng);
            ledger.aggregate_into(total);
            acc.record(grid, model.set.z_index_unchecked(total));
        },
    )?;
    Ok(EstimateTable::from_counts(grid, &counts.counts(), sim.n_paths, sim.ci_level))
}

/// Conditional law of the first entrance time at one level.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntranceTimeRow {
    pub x: f64,
    pub t: f64,
    /// `P̂[τ(x) ≤ t | τ(x) ≤ T]`.
    pub cdf: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    /// Paths that entered before the horizon.
    pub entered: u64,
    pub limit: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntranceTimeTable {
    pub n_paths: u64,
    pub rows: Vec<EntranceTimeRow>,
}

impl EntranceTimeTable {
    pub fn with_limit<F: FnMut(f64) -> Result<f64>>(mut self, mut limit: F) -> Result<Self> {
        for row in &mut self.rows {
            row.limit = Some(limit(row.t)?);
        }
        Ok(self)
    }

    /// Largest `|cdf − limit|` over the rows of level `x`.
    pub fn sup_distance(&self, x: f64) -> Option<f64> {
        self.rows
            .iter()
            .filter(|r| r.x == x)
            .map(|r| r.limit.map(|l| (r.cdf - l).abs()))
            .try_fold(0.0f64, |acc, v| v.map(|v| acc.max(v)))
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("x,t,cdf,ci_lo,ci_hi,entered,limit\n");
        for r in &self.rows {
            s.push_str(&format!(
                "{},{},{:e},{:e},{:e},{},{}\n",
                r.x,
                r.t,
                r.cdf,
                r.ci_lo,
                r.ci_hi,
                r.entered,
                r.limit.map(|v| format!("{v:e}")).unwrap_or_default()
            ));
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.rows).expect("rows serialize")
    }
}

/// Per-level counts of entrance before each time-grid point.
#[derive(Debug, Clone)]
struct EntranceTimeCounts {
    entered: Vec<u64>,
    /// `before[j * n_t + k]`: entrances at level `j` no later than `t_grid[k]`.
    before: Vec<u64>,
}

impl Mergeable for EntranceTimeCounts {
    fn merge(&mut self, other: Self) {
        self.entered.merge(other.entered);
        self.before.merge(other.before);
    }
}

/// First arrival at which the running partial sum of discounted claims
/// enters `xA`, for every level at once. Entrance can only happen at an
/// arrival because the partial sums only move by nonnegative jumps.
pub fn empirical_entrance_time(model: &ModelSpec, t_grid: &[f64], sim: &SimConfig) -> Result<EntranceTimeTable> {
    sim.validate()?;
    check_grid(t_grid)?;
    if t_grid.last().is_some_and(|t| *t > sim.horizon) {
        return Err(Error::param(format!("time grid exceeds horizon {}", sim.horizon)));
    }
    let grid = &sim.x_grid;
    let (n_x, n_t) = (grid.len(), t_grid.len());
    let d = model.dim();
    let counts = engine::run(
        sim.n_paths,
        sim.seed,
        sim.backend(),
        || (PathLedger::new(d), vec![0.0; d]),
        || EntranceTimeCounts {
            entered: vec![0; n_x],
            before: vec![0; n_x * n_t],
        },
        |(ledger, partial), rng, _, acc| {
            ledger.simulate(model, sim.horizon, rng);
            partial.fill(0.0);
            // levels below `reached` have already been entered
            let mut reached = 0;
            for i in 0..ledger.len() {
                let f = ledger.discount(i);
                for (p, x) in partial.iter_mut().zip(ledger.claim(i)) {
                    *p += x * f;
                }
                let z = model.set.z_index_unchecked(partial);
                let now = grid.partition_point(|x| *x < z);
                if now > reached {
                    let t = ledger.times[i];
                    let first_t = t_grid.partition_point(|s| *s < t);
                    for j in reached..now {
                        acc.entered[j] += 1;
                        for k in first_t..n_t {
                            acc.before[j * n_t + k] += 1;
                        }
                    }
                    reached = now;
                    if reached == n_x {
                        break;
                    }
                }
            }
        },
    )?;
    let mut rows = Vec::with_capacity(n_x * n_t);
    for (j, &x) in grid.iter().enumerate() {
        let entered = counts.entered[j];
        for (k, &t) in t_grid.iter().enumerate() {
            let hits = counts.before[j * n_t + k];
            let ci = wilson_interval(hits, entered, sim.ci_level);
            rows.push(EntranceTimeRow {
                x,
                t,
                cdf: if entered > 0 { hits as f64 / entered as f64 } else { f64::NAN },
                ci_lo: ci.lo,
                ci_hi: ci.hi,
                entered,
                limit: None,
            });
        }
    }
    if counts.entered.iter().all(|c| *c == 0) {
        return Err(Error::NoExceedances("no path entered the set before the horizon".into()));
    }
    Ok(EntranceTimeTable {
        n_paths: sim.n_paths,
        rows,
    })
}

/// Random weights multiplying the summands of the single-big-jump check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum WeightSpec {
    Constant { value: f64 },
    Uniform { low: f64, high: f64 },
}

impl WeightSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Constant { value } if value > 0.0 && value.is_finite() => Ok(()),
            Self::Uniform { low, high } if low >= 0.0 && high > low && high.is_finite() => Ok(()),
            _ => Err(Error::param(format!("weights {self:?} must be bounded and nonnegative"))),
        }
    }

    #[inline]
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            Self::Constant { value } => value,
            Self::Uniform { low, high } => low + (high - low) * rng.random::<f64>(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BigJumpRow {
    pub x: f64,
    /// `P̂[Z_A(Σ W_i Z^(i)) > x]`.
    pub p_sum: f64,
    /// `Σ_i P̂[W_i Z_A^(i) > x]`.
    pub p_max_sum: f64,
    pub ratio: Option<f64>,
    /// Delta-method standard error of the ratio.
    pub ratio_se: Option<f64>,
    pub ci_lo: Option<f64>,
    pub ci_hi: Option<f64>,
    pub sum_count: u64,
    pub term_count: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BigJumpTable {
    pub n_paths: u64,
    pub n_summands: usize,
    pub rows: Vec<BigJumpRow>,
}

impl BigJumpTable {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("x,p_sum,p_max_sum,ratio,ratio_se,ci_lo,ci_hi,sum_count,term_count\n");
        let opt = |v: Option<f64>| v.map(|v| format!("{v:e}")).unwrap_or_default();
        for r in &self.rows {
            s.push_str(&format!(
                "{},{:e},{:e},{},{},{},{},{},{}\n",
                r.x,
                r.p_sum,
                r.p_max_sum,
                opt(r.ratio),
                opt(r.ratio_se),
                opt(r.ci_lo),
                opt(r.ci_hi),
                r.sum_count,
                r.term_count
            ));
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.rows).expect("rows serialize")
    }
}

#[derive(Debug, Clone)]
struct BigJumpCounts {
    /// Per level: Σa, Σb, Σb², Σab with a = 1[sum exceeds], b = #terms exceeding.
    moments: Vec<[u64; 4]>,
}

impl Mergeable for BigJumpCounts {
    fn merge(&mut self, other: Self) {
        for (m, o) in self.moments.iter_mut().zip(other.moments) {
            for k in 0..4 {
                m[k] += o[k];
            }
        }
    }
}

/// Compares `P[Σ_{i≤n} W_i Z^(i) ∈ xA]` with `Σ_i P[W_i Z^(i) ∈ xA]` for `n`
/// consecutive claim vectors of the model and i.i.d. weights.
pub fn single_big_jump_check(
    model: &ModelSpec,
    weights: WeightSpec,
    n_summands: usize,
    sim: &SimConfig,
) -> Result<BigJumpTable> {
    check_grid(&sim.x_grid)?;
    weights.validate()?;
    if sim.n_paths < 2 || sim.workers == 0 {
        return Err(Error::param("need at least two paths and one worker"));
    }
    if !(1..=5).contains(&n_summands) {
        return Err(Error::param(format!("n_summands = {n_summands} must be in 1..=5")));
    }
    let grid = &sim.x_grid;
    let d = model.dim();
    let counts = engine::run(
        sim.n_paths,
        sim.seed,
        sim.backend(),
        || (Vec::new(), vec![0.0; d], vec![0.0; n_summands]),
        || BigJumpCounts {
            moments: vec![[0; 4]; grid.len()],
        },
        |(claims, total, terms), rng, _, acc| {
            model.claim.fill_sequence(n_summands, rng, claims);
            total.fill(0.0);
            for (i, term) in terms.iter_mut().enumerate() {
                let w = weights.sample(rng);
                let z = &claims[i * d..(i + 1) * d];
                for (t, v) in total.iter_mut().zip(z) {
                    *t += w * v;
                }
                *term = w * model.set.z_index_unchecked(z);
            }
            let zs = model.set.z_index_unchecked(total);
            // every level below the largest statistic can have a nonzero contribution
            let top = terms.iter().copied().fold(zs, f64::max);
            let reach = grid.partition_point(|x| *x < top);
            for (j, x) in grid[..reach].iter().enumerate() {
                let a = (zs > *x) as u64;
                let b = terms.iter().filter(|t| **t > *x).count() as u64;
                let m = &mut acc.moments[j];
                m[0] += a;
                m[1] += b;
                m[2] += b * b;
                m[3] += a * b;
            }
        },
    )?;
    let n = sim.n_paths as f64;
    let z = z_value(sim.ci_level);
    let rows = grid
        .iter()
        .zip(&counts.moments)
        .map(|(&x, m)| {
            let (sa, sb, sbb, sab) = (m[0] as f64, m[1] as f64, m[2] as f64, m[3] as f64);
            let (ma, mb) = (sa / n, sb / n);
            let (ratio, se) = if m[1] > 0 {
                let r = ma / mb;
                let var_a = ma - ma * ma;
                let var_b = sbb / n - mb * mb;
                let cov = sab / n - ma * mb;
                let v = (var_a - 2.0 * r * cov + r * r * var_b) / (n * mb * mb);
                (Some(r), Some(v.max(0.0).sqrt()))
            } else {
                (None, None)
            };
            BigJumpRow {
                x,
                p_sum: ma,
                p_max_sum: mb,
                ratio,
                ratio_se: se,
                ci_lo: ratio.zip(se).map(|(r, s)| r - z * s),
                ci_hi: ratio.zip(se).map(|(r, s)| r + z * s),
                sum_count: m[0],
                term_count: m[1],
            }
        })
        .collect();
    Ok(BigJumpTable {
        n_paths: sim.n_paths,
        n_summands,
        rows,
    })
}
