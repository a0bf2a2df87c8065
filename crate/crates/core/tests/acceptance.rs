//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::time::Instant;

use rand::Rng;
use ruinflow::dependence::{fgm_joint_survival, ClaimModel};
use ruinflow::estimators::{
    asymptotic_entrance_finite, asymptotic_entrance_infinite, check_mode, entrance_integral, entrance_time_cdf,
    infer_mrv, mrv_closed_form, truncation_horizon, AsymptoticOptions, Exponents, ModeRequest, ModelSpec,
    TheoremMode,
};
use ruinflow::heavy_tails::TailDistribution;
use ruinflow::montecarlo::{
    empirical_entrance, empirical_entrance_time, single_big_jump_check, EstimateTable, SimConfig, WeightSpec,
};
use ruinflow::processes::{JumpLaw, RenewalSpec, ReturnProcess};
use ruinflow::rare_sets::{HalfSpace, RareSet, RuinSet};
use ruinflow::rng::StreamFactory;
use ruinflow::ruin::{empirical_ruin, PremiumSchedule, RuinModel};

const TAIL_LEVEL: f64 = 1e-4;
const LARGE_N: u64 = 10_000_000;

type Check = fn() -> Outcome;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn pareto(alpha: f64) -> TailDistribution {
    TailDistribution::pareto(alpha, 1.0).unwrap()
}

fn geometric_grid(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    let n = ((hi / lo).log10() * per_decade as f64).round() as usize;
    (0..=n)
        .map(|k| {
            let v = lo * 10f64.powf(k as f64 / per_decade as f64);
            (v * 1e6).round() / 1e6
        })
        .collect()
}

fn reference_model(marginal: TailDistribution) -> ModelSpec {
    ModelSpec::new(
        ClaimModel::fgm_chain(2, marginal, 0.5).unwrap(),
        RareSet::half_space(vec![0.5, 0.5], 1.0).unwrap(),
        RenewalSpec::poisson(1.0).unwrap(),
        ReturnProcess::deterministic(0.05).unwrap(),
    )
    .unwrap()
}

// ---------- 1: scalarization against a grid-search oracle ----------

/// A set in raw parameters, with membership written from the definitions.
enum RawSet {
    Max(Vec<f64>),
    Half(Vec<f64>, f64),
    Ray(f64),
    Union(Vec<(Vec<f64>, f64)>),
}

impl RawSet {
    fn member(&self, y: &[f64]) -> bool {
        let dot = |l: &[f64]| l.iter().zip(y).map(|(a, b)| a * b).sum::<f64>();
        match self {
            RawSet::Max(b) => y.iter().zip(b).any(|(v, b)| v > b),
            RawSet::Half(l, b) => dot(l) > *b,
            RawSet::Ray(b) => y[0] > *b,
            RawSet::Union(m) => m.iter().any(|(l, b)| dot(l) > *b),
        }
    }

    fn build(&self) -> RareSet {
        match self {
            RawSet::Max(b) => RareSet::max_exceed(b.clone()).unwrap(),
            RawSet::Half(l, b) => RareSet::half_space(l.clone(), *b).unwrap(),
            RawSet::Ray(b) => RareSet::ray(*b).unwrap(),
            RawSet::Union(m) => RareSet::polyhedral_union(
                m.iter().map(|(l, b)| HalfSpace::new(l.clone(), *b).unwrap()).collect(),
            )
            .unwrap(),
        }
    }

    fn dim(&self) -> usize {
        match self {
            RawSet::Max(b) => b.len(),
            RawSet::Half(l, _) => l.len(),
            RawSet::Ray(_) => 1,
            RawSet::Union(m) => m[0].0.len(),
        }
    }
}

fn random_weights<R: Rng>(d: usize, rng: &mut R) -> Vec<f64> {
    let w: Vec<f64> = (0..d).map(|_| rng.random_range(0.05..1.0)).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|v| v / s).collect()
}

fn random_set<R: Rng>(k: usize, rng: &mut R) -> RawSet {
    let d = rng.random_range(2..5);
    match k % 4 {
        0 => RawSet::Max((0..d).map(|_| rng.random_range(0.1..5.0)).collect()),
        1 => RawSet::Half(random_weights(d, rng), rng.random_range(0.1..5.0)),
        2 => RawSet::Ray(rng.random_range(0.1..5.0)),
        _ => {
            let m = rng.random_range(1..4);
            RawSet::Union((0..m).map(|_| (random_weights(d, rng), rng.random_range(0.1..5.0))).collect())
        }
    }
}

/// `sup{u : z/u ∈ A}` by a coarse grid, then a fine grid inside the
/// bracketing cell.
fn grid_sup(set: &RawSet, z: &[f64], upper: f64) -> f64 {
    let member_at = |u: f64| {
        let y: Vec<f64> = z.iter().map(|v| v / u).collect();
        set.member(&y)
    };
    let cells = 10_000;
    let mut lo = 0.0;
    let mut h = upper / cells as f64;
    for _ in 0..2 {
        let mut last = lo;
        for k in 1..=cells {
            let u = lo + h * k as f64;
            if member_at(u) {
                last = u;
            } else {
                break;
            }
        }
        lo = last;
        h /= cells as f64;
    }
    lo
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = StreamFactory::new(101).stream(0);
    let mut worst = 0.0f64;
    for k in 0..1_000 {
        let raw = random_set(k, &mut rng);
        let z: Vec<f64> = (0..raw.dim()).map(|_| rng.random_range(0.01..10.0)).collect();
        let set = raw.build();
        let index = set.z_index(&z).unwrap();
        // every index here is below max z / min level ≤ 10 / 0.05
        let oracle = grid_sup(&raw, &z, 250.0);
        worst = worst.max((index - oracle).abs());
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(worst <= 1e-4 && secs < 10.0, format!("max |z_index - grid sup| = {worst:.2e} over 1000 pairs, {secs:.2} s"))
}

// ---------- 2: scalarization identity ----------

fn criterion_2() -> Outcome {
    let claim = ClaimModel::fgm_chain(3, pareto(1.5), 0.7).unwrap();
    let mut rng = StreamFactory::new(202).stream(0);
    let sets: Vec<RareSet> = (0..40)
        .map(|k| {
            let mut raw = random_set(k, &mut rng);
            // resample until the dimension matches the claim model
            while raw.dim() != 3 && !matches!(raw, RawSet::Ray(_)) {
                raw = random_set(k, &mut rng);
            }
            match raw {
                RawSet::Ray(b) => RareSet::max_exceed(vec![b; 3]).unwrap(),
                other => other.build(),
            }
        })
        .collect();
    let mut buf = Vec::new();
    let mut mismatches = 0u64;
    let mut inside = 0u64;
    for i in 0..100_000 {
        claim.fill_sequence(1, &mut rng, &mut buf);
        let set = &sets[i % sets.len()];
        let x = 10f64.powf(rng.random_range(-1.0..2.0));
        let by_index = set.z_index(&buf).unwrap() > x;
        let by_contains = set.contains(x, &buf).unwrap();
        let scaled: Vec<f64> = buf.iter().map(|v| v / x).collect();
        let by_definition = set.contains_point(&scaled);
        mismatches += (by_index != by_contains || by_index != by_definition) as u64;
        inside += by_index as u64;
    }
    outcome(mismatches == 0, format!("{mismatches} mismatches in 100000 vectors ({inside} inside)"))
}

// ---------- 3: FGM joint survival ----------

fn criterion_3() -> Outcome {
    let n = 1_000_000u64;
    let g = pareto(2.0);
    let args = [1.05, 1.3, 1.8];
    let mut worst_z = 0.0f64;
    for (seed, theta) in [(303u64, 1.0), (304, -0.8)] {
        let claim = ClaimModel::fgm_chain(2, g, theta).unwrap();
        let mut rng = StreamFactory::new(seed).stream(0);
        let mut buf = Vec::new();
        let mut hits = [0u64; 9];
        for _ in 0..n {
            claim.fill_sequence(2, &mut rng, &mut buf);
            for (i, &a) in args.iter().enumerate() {
                for (j, &b) in args.iter().enumerate() {
                    hits[3 * i + j] += (buf[0] > a && buf[1] > a && buf[2] > b && buf[3] > b) as u64;
                }
            }
        }
        for (i, &a) in args.iter().enumerate() {
            for (j, &b) in args.iter().enumerate() {
                let p = fgm_joint_survival(theta, &g, a, a, b, b).unwrap();
                let sigma = (p * (1.0 - p) / n as f64).sqrt();
                let p_hat = hits[3 * i + j] as f64 / n as f64;
                worst_z = worst_z.max((p_hat - p).abs() / sigma);
            }
        }
    }
    let mut factorizes = true;
    for &a in &args {
        for &b in &[0.5, 1.0, 2.5, 40.0] {
            let s = [a, b, a * b, a + b].map(|v| g.survival(v));
            let direct = s[0] * s[1] * s[2] * s[3];
            factorizes &= fgm_joint_survival(0.0, &g, a, b, a * b, a + b).unwrap() == direct;
        }
    }
    outcome(
        worst_z <= 3.0 && factorizes,
        format!("max |p_hat - p| / sigma = {worst_z:.2} on 2 x 3x3 grids at N=1e6; theta=0 factorizes exactly: {factorizes}"),
    )
}

// ---------- 4: cubic pair diagnostics ----------

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let claim = ClaimModel::cubic_pair(2).unwrap();
    let set = RareSet::max_exceed(vec![1.0, 1.0]).unwrap();
    let min_rd = geometric_grid(10.0, 1e8, 20)
        .iter()
        .map(|&x| claim.cubic_pair_ratios(&set, x).unwrap().rd_violation)
        .fold(f64::INFINITY, f64::min);
    let q2 = claim.cubic_pair_ratios(&set, 1e2).unwrap().qai;
    let q3 = claim.cubic_pair_ratios(&set, 1e3).unwrap().qai;
    let secs = start.elapsed().as_secs_f64();
    outcome(
        min_rd >= 0.75 && q3 < q2 && q3 < 0.01 && secs < 1.0,
        format!("min rd ratio over x in [10, 1e8] = {min_rd:.4}; qai(1e2) = {q2:.3e}, qai(1e3) = {q3:.3e}; {secs:.3} s"),
    )
}

// ---------- 5, 6, 7: empirical vs asymptotic entrance ----------

fn ratios_at_level(table: &EstimateTable) -> Option<(Vec<f64>, f64, f64)> {
    let rows: Vec<_> = table.rows.iter().filter(|r| r.p_hat >= TAIL_LEVEL).collect();
    let last = rows.last()?;
    let ratios = rows.iter().filter_map(|r| r.ratio).collect();
    Some((ratios, last.x, last.ratio?))
}

fn spread(tail: &[f64]) -> f64 {
    let hi = tail.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = tail.iter().cloned().fold(f64::INFINITY, f64::min);
    hi - lo
}

fn finite_horizon_ratio(model: &ModelSpec, mode: TheoremMode, seed: u64) -> (EstimateTable, f64) {
    let horizon = 10.0;
    let start = Instant::now();
    let sim = SimConfig::new(LARGE_N, seed, horizon, geometric_grid(2.0, 1e4, 10)).with_workers(workers());
    let opts = AsymptoticOptions::default();
    let table = empirical_entrance(model, &sim)
        .unwrap()
        .with_asymptotic(|x| Ok(asymptotic_entrance_finite(model, x, horizon, ModeRequest::Fixed(mode), &opts)?.value))
        .unwrap();
    (table, start.elapsed().as_secs_f64())
}

fn criterion_5() -> Outcome {
    let model = reference_model(pareto(1.5));
    let (table, secs) = finite_horizon_ratio(&model, TheoremMode::FiniteConsistent, 505);
    let Some((ratios, x, ratio)) = ratios_at_level(&table) else {
        return outcome(false, "no grid point reaches the tail level");
    };
    let tail = &ratios[ratios.len().saturating_sub(3)..];
    let s = spread(tail);
    outcome(
        (0.85..=1.15).contains(&ratio) && tail.len() == 3 && s < 0.1 && secs < 600.0,
        format!("ratio {ratio:.4} at x = {x}; final-three spread {s:.4}; N=1e7 in {secs:.1} s"),
    )
}

fn criterion_6() -> Outcome {
    let model = reference_model(TailDistribution::heavy_weibull(0.5, 1.0).unwrap());
    let (table, secs) = finite_horizon_ratio(&model, TheoremMode::FiniteSubexponential, 606);
    let Some((_, x, ratio)) = ratios_at_level(&table) else {
        return outcome(false, "no grid point reaches the tail level");
    };
    outcome((0.8..=1.2).contains(&ratio), format!("ratio {ratio:.4} at x = {x}; N=1e7 in {secs:.1} s"))
}

fn criterion_7() -> Outcome {
    let model = ModelSpec::new(
        ClaimModel::iid(vec![pareto(1.5); 2]).unwrap(),
        RareSet::max_exceed(vec![1.0, 1.0]).unwrap(),
        RenewalSpec::poisson(1.0).unwrap(),
        ReturnProcess::brownian(0.2, 0.3).unwrap(),
    )
    .unwrap();
    let report = check_mode(&model, TheoremMode::Infinite, f64::INFINITY, Exponents::default()).unwrap();
    if !report.holds() {
        return outcome(false, format!("infinite-horizon hypotheses fail: {:?}", report.to_error()));
    }
    let summability = truncation_horizon(&model, Exponents::default()).unwrap();
    let horizon = summability.truncation_horizon.unwrap();
    let opts = AsymptoticOptions::default();
    let mut bound = f64::NAN;
    let sim = SimConfig::new(LARGE_N, 707, horizon, geometric_grid(2.0, 1e4, 10)).with_workers(workers());
    let table = empirical_entrance(&model, &sim)
        .unwrap()
        .with_asymptotic(|x| {
            let a = asymptotic_entrance_infinite(&model, x, Exponents::default(), false, &opts)?;
            bound = a.tail_bound;
            Ok(a.value.value)
        })
        .unwrap();
    let Some((_, x, ratio)) = ratios_at_level(&table) else {
        return outcome(false, "no grid point reaches the tail level");
    };
    outcome(
        (0.8..=1.2).contains(&ratio) && bound < 1e-3,
        format!(
            "phi(p2) = {:.4} at p2 = {:.3}; ratio {ratio:.4} at x = {x}; T* = {horizon:.2}, truncation bound {bound:.4e}",
            summability.phi_p2, summability.p2
        ),
    )
}

// ---------- 8: MRV closed form ----------

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let base = reference_model(pareto(1.5));
    let mrv = infer_mrv(&base.claim, &base.set).unwrap();
    let model = base.with_mrv(mrv);
    let opts = AsymptoticOptions::default();
    let mut worst = 0.0f64;
    for x in [1e4, 1e5, 1e6] {
        let num = asymptotic_entrance_finite(&model, x, 10.0, ModeRequest::Auto, &opts).unwrap().value;
        let den = mrv_closed_form(&model, x, 10.0).unwrap();
        worst = worst.max((num / den - 1.0).abs());
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst <= 0.05 && secs < 1.0,
        format!("max |ratio - 1| = {worst:.2e} at x in {{1e4, 1e5, 1e6}} (G(x) <= 1e-6); {secs:.3} s"),
    )
}

// ---------- 9: entrance-time law ----------

fn criterion_9() -> Outcome {
    let claim = ClaimModel::iid(vec![pareto(2.0)]).unwrap();
    let set = RareSet::ray(1.0).unwrap();
    let mrv = infer_mrv(&claim, &set).unwrap();
    let model = ModelSpec::new(claim, set, RenewalSpec::poisson(1.0).unwrap(), ReturnProcess::deterministic(0.05).unwrap())
        .unwrap()
        .with_mrv(mrv);
    // simulate until the discounted renewal mass left over is negligible
    let horizon = truncation_horizon(&model, Exponents::default()).unwrap().truncation_horizon.unwrap();
    let t_grid: Vec<f64> = (1..=10).map(|k| 2.0 * k as f64).collect();
    let grid = geometric_grid(10.0, 1e4, 10);
    let sim = SimConfig::new(LARGE_N, 909, horizon, grid).with_workers(workers());
    let table = empirical_entrance_time(&model, &t_grid, &sim)
        .unwrap()
        .with_limit(|t| Ok(entrance_time_cdf(2.0, 0.05, t)))
        .unwrap();
    let Some(row) = table
        .rows
        .iter()
        .rfind(|r| r.entered as f64 >= TAIL_LEVEL * LARGE_N as f64)
    else {
        return outcome(false, "no level reaches the tail level");
    };
    let dist = table.sup_distance(row.x).unwrap();
    outcome(
        dist <= 0.05,
        format!("sup |F_hat - (1 - e^(-0.1 t))| = {dist:.4} at x = {} ({} entries, T = {horizon:.1})", row.x, row.entered),
    )
}

// ---------- 10: single big jump ----------

/// `P[X_1 + X_2 > x]` for i.i.d. Pareto(1) on `[1, ∞)`, `x ≥ 2`.
fn pareto1_pair_sum_tail(x: f64) -> f64 {
    1.0 / (x - 1.0) + (x - 2.0) / (x * (x - 1.0)) + 2.0 * (x - 1.0).ln() / (x * x)
}

fn criterion_10() -> Outcome {
    let weights = WeightSpec::Constant { value: 1.0 };
    let grid = geometric_grid(10.0, 1e5, 10);
    let iid = ModelSpec::new(
        ClaimModel::iid(vec![pareto(1.0)]).unwrap(),
        RareSet::ray(1.0).unwrap(),
        RenewalSpec::poisson(1.0).unwrap(),
        ReturnProcess::deterministic(0.05).unwrap(),
    )
    .unwrap();
    let sim = SimConfig::new(LARGE_N, 1010, 1.0, grid.clone()).with_workers(workers());
    let table = single_big_jump_check(&iid, weights, 2, &sim).unwrap();
    let Some(row) = table.rows.iter().rfind(|r| r.p_sum >= TAIL_LEVEL) else {
        return outcome(false, "no level reaches the tail level");
    };
    let oracle = pareto1_pair_sum_tail(row.x) / (2.0 / row.x);
    let (ratio, se) = (row.ratio.unwrap(), row.ratio_se.unwrap());
    let pair_ok = (ratio - oracle).abs() <= 3.0 * se && (0.9..=1.1).contains(&ratio);

    let fgm = ModelSpec::new(
        ClaimModel::fgm_chain(2, pareto(1.5), 0.8).unwrap(),
        RareSet::max_exceed(vec![1.0, 1.0]).unwrap(),
        RenewalSpec::poisson(1.0).unwrap(),
        ReturnProcess::deterministic(0.05).unwrap(),
    )
    .unwrap();
    let sim = SimConfig::new(LARGE_N, 1011, 1.0, grid).with_workers(workers());
    let table = single_big_jump_check(&fgm, weights, 3, &sim).unwrap();
    let Some(row3) = table.rows.iter().rfind(|r| r.p_sum >= TAIL_LEVEL) else {
        return outcome(false, "no level reaches the tail level for n = 3");
    };
    let ratio3 = row3.ratio.unwrap();
    outcome(
        pair_ok && (0.8..=1.2).contains(&ratio3),
        format!(
            "n=2: ratio {ratio:.4} +- {se:.4} vs exact {oracle:.4} at x = {}; n=3 FGM: ratio {ratio3:.4} at x = {}",
            row.x, row3.x
        ),
    )
}

// ---------- 11: ruin sandwich ----------

fn ruin_models() -> Vec<RuinModel> {
    let premiums = vec![PremiumSchedule::new(vec![0.0, 4.0], vec![0.6, 0.3]).unwrap(), PremiumSchedule::constant(0.4).unwrap()];
    let claim = ClaimModel::iid(vec![pareto(1.5), TailDistribution::heavy_weibull(0.5, 1.0).unwrap()]).unwrap();
    let rets = [
        ReturnProcess::deterministic(0.05).unwrap(),
        ReturnProcess::compound_poisson(0.02, 0.5, JumpLaw::Exponential { mean: 0.05 }).unwrap(),
    ];
    let mut out = Vec::new();
    for ret in rets {
        for ruin in [RuinSet::AnyLineNegative, RuinSet::weighted_sum(vec![0.5, 0.5]).unwrap()] {
            let base = ModelSpec::new(
                claim.clone(),
                RareSet::max_exceed(vec![1.0, 1.0]).unwrap(),
                RenewalSpec::erlang(2, 2.0).unwrap(),
                ret,
            )
            .unwrap();
            out.push(RuinModel::new(base, ruin, vec![0.6, 0.4], premiums.clone(), 0.6).unwrap());
        }
    }
    out
}

fn criterion_11() -> Outcome {
    let grid = geometric_grid(0.5, 1e3, 10);
    let mut violations = 0;
    let mut bracketed = true;
    for (k, model) in ruin_models().iter().enumerate() {
        let sim = SimConfig::new(1_000_000, 1100 + k as u64, 10.0, grid.clone()).with_workers(workers());
        let study = empirical_ruin(model, &sim).unwrap();
        violations += study.violations;
        let shifted = study.entrance_shifted.as_ref().unwrap();
        for ((r, e), s) in study.ruin.rows.iter().zip(&study.entrance.rows).zip(&shifted.rows) {
            bracketed &= e.count >= r.count && r.count >= s.count;
        }
    }
    outcome(
        violations == 0 && bracketed,
        format!("{violations} path-level violations over 4 models x 1e6 paths; table counts bracketed: {bracketed}"),
    )
}

// ---------- 12: reproducibility ----------

fn criterion_12() -> Outcome {
    let n = 100_000;
    let grid = vec![1.0, 5.0, 20.0, 100.0];
    let model = reference_model(pareto(1.5));
    let brownian = ModelSpec::new(
        ClaimModel::iid(vec![pareto(1.5); 2]).unwrap(),
        RareSet::max_exceed(vec![1.0, 1.0]).unwrap(),
        RenewalSpec::uniform(0.5, 1.5).unwrap(),
        ReturnProcess::brownian(0.05, 0.2).unwrap(),
    )
    .unwrap();
    let ruin = &ruin_models()[3];
    let opts = AsymptoticOptions {
        inner_draws: 2_000,
        ..Default::default()
    };
    let run = |w: usize| {
        let sim = SimConfig::new(n, 12, 10.0, grid.clone()).with_workers(w);
        let study = empirical_ruin(ruin, &sim).unwrap();
        vec![
            empirical_entrance(&model, &sim).unwrap().to_csv(),
            empirical_entrance(&brownian, &sim).unwrap().to_csv(),
            empirical_entrance_time(&model, &[2.0, 5.0, 10.0], &sim).unwrap().to_csv(),
            single_big_jump_check(&model, WeightSpec::Uniform { low: 0.5, high: 1.5 }, 3, &sim).unwrap().to_csv(),
            format!("{}{}{}", study.ruin.to_csv(), study.entrance.to_csv(), study.violations),
            format!("{:?}", entrance_integral(&brownian, 20.0, 10.0, &opts).unwrap()),
        ]
    };
    let one = run(1);
    let eight = run(8);
    let same = one.iter().zip(&eight).filter(|(a, b)| a == b).count();
    outcome(same == one.len(), format!("{same}/{} outputs bit-identical between 1 and 8 workers", one.len()))
}

fn main() {
    let criteria: [(&str, Check); 12] = [
        ("rare-set index vs grid-search oracle", criterion_1),
        ("scalarization identity", criterion_2),
        ("FGM joint survival", criterion_3),
        ("cubic pair dependence diagnostics", criterion_4),
        ("consistent-mode entrance convergence", criterion_5),
        ("subexponential-mode entrance ratio", criterion_6),
        ("infinite-horizon entrance ratio", criterion_7),
        ("MRV closed-form consistency", criterion_8),
        ("entrance-time limit law", criterion_9),
        ("single big jump", criterion_10),
        ("ruin sandwich", criterion_11),
        ("reproducibility across worker counts", criterion_12),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let result = check();
        let tag = if result.pass { "PASS" } else { "FAIL" };
        failed += !result.pass as usize;
        println!("{tag} criterion {:>2} {name}: {}", k + 1, result.detail);
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
