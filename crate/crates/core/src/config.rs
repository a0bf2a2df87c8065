//! JSON experiment configuration: parsing, defaults, validation and the
//! conversion into model types.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::dependence::ClaimModel;
use crate::error::{Error, Result};
use crate::estimators::{AsymptoticOptions, Exponents, ModeRequest, ModelSpec, MrvSpec, TheoremMode};
use crate::heavy_tails::TailDistribution;
use crate::montecarlo::{SimConfig, WeightSpec};
use crate::processes::{JumpLaw, RenewalSpec, ReturnProcess};
use crate::rare_sets::{HalfSpace, RareSet, RuinSet};
use crate::ruin::{PremiumSchedule, RuinModel};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelConfig,
    pub experiment: ExperimentBlock,
    pub sim: SimBlock,
    #[serde(default)]
    pub output: OutputBlock,
    /// Command-line values that replaced config values; informational on input.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub overrides: Vec<OverrideRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub claim: ClaimConfig,
    #[serde(default)]
    pub dependence: DependenceConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub set: Option<SetConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ruin: Option<RuinConfig>,
    pub renewal: RenewalConfig,
    #[serde(rename = "return")]
    pub ret: ReturnConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mrv: Option<MrvConfig>,
}

/// Either one `marginal` shared by all `d` components or `d` explicit `marginals`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClaimConfig {
    pub d: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marginal: Option<DistConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marginals: Option<Vec<DistConfig>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum DistConfig {
    Pareto {
        alpha: f64,
        #[serde(default = "one")]
        scale: f64,
    },
    HeavyWeibull {
        shape: f64,
        #[serde(default = "one")]
        scale: f64,
    },
    Lognormal {
        mu: f64,
        sigma: f64,
    },
    Cubic,
    Harmonic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InterKind {
    #[default]
    Iid,
    FgmChain,
    CubicPair,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DependenceConfig {
    #[serde(default)]
    pub inter: InterKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HalfSpaceConfig {
    pub l: Vec<f64>,
    pub b: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum SetConfig {
    MaxExceed { b: Vec<f64> },
    HalfSpace { l: Vec<f64>, b: f64 },
    Ray { b: f64 },
    PolyhedralUnion { members: Vec<HalfSpaceConfig> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuinKind {
    /// Some line negative.
    Or,
    /// Weighted total negative.
    Sum,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PremiumConfig {
    #[serde(default = "zero_break")]
    pub breaks: Vec<f64>,
    pub rates: Vec<f64>,
}

/// A single premium entry applies to every line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuinConfig {
    pub set: RuinKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    pub alloc: Vec<f64>,
    #[serde(default)]
    pub premiums: Vec<PremiumConfig>,
    /// Defaults to the largest premium rate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub premium_bound: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum RenewalConfig {
    Poisson { rate: f64 },
    Erlang { shape: u32, rate: f64 },
    Uniform { low: f64, high: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum JumpConfig {
    Exponential { mean: f64 },
    Normal { mean: f64, sd: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ReturnConfig {
    Deterministic { r: f64 },
    Brownian { mu: f64, sigma: f64 },
    CompoundPoisson { drift: f64, rate: f64, jump: JumpConfig },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MrvConfig {
    pub alpha: f64,
    pub mu_a: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Entrance,
    Ruin,
    EntranceTime,
    SingleBigJump,
    ConvergenceStudy,
    AssumptionReport,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Entrance => "entrance",
            Self::Ruin => "ruin",
            Self::EntranceTime => "entrance_time",
            Self::SingleBigJump => "single_big_jump",
            Self::ConvergenceStudy => "convergence_study",
            Self::AssumptionReport => "assumption_report",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeChoice {
    #[default]
    Auto,
    Subexponential,
    Consistent,
    Infinite,
}

impl ModeChoice {
    pub fn request(self) -> ModeRequest {
        match self {
            Self::Auto => ModeRequest::Auto,
            Self::Subexponential => ModeRequest::Fixed(TheoremMode::FiniteSubexponential),
            Self::Consistent => ModeRequest::Fixed(TheoremMode::FiniteConsistent),
            Self::Infinite => ModeRequest::Fixed(TheoremMode::Infinite),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NumericsBlock {
    #[serde(default = "default_rel_tol")]
    pub rel_tol: f64,
    #[serde(default = "default_gh_nodes")]
    pub gauss_hermite_nodes: usize,
    #[serde(default = "default_inner_draws")]
    pub inner_draws: usize,
    #[serde(default = "default_inner_seed")]
    pub inner_seed: u64,
}

impl Default for NumericsBlock {
    fn default() -> Self {
        let o = AsymptoticOptions::default();
        Self {
            rel_tol: o.rel_tol,
            gauss_hermite_nodes: o.gauss_hermite_nodes,
            inner_draws: o.inner_draws,
            inner_seed: o.inner_seed,
        }
    }
}

impl NumericsBlock {
    pub fn options(&self) -> AsymptoticOptions {
        AsymptoticOptions {
            rel_tol: self.rel_tol,
            gauss_hermite_nodes: self.gauss_hermite_nodes,
            inner_draws: self.inner_draws,
            inner_seed: self.inner_seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentBlock {
    pub kind: ExperimentKind,
    #[serde(default)]
    pub mode: ModeChoice,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_grid: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<WeightSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_summands: Option<usize>,
    /// Skip the hypothesis gates; outputs carry a watermark.
    #[serde(default)]
    pub unchecked: bool,
    #[serde(default)]
    pub numerics: NumericsBlock,
}

impl ExperimentBlock {
    pub fn exponents(&self) -> Exponents {
        Exponents {
            p1: self.p1,
            p2: self.p2,
        }
    }
}

/// Finite horizon or `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Horizon(pub f64);

impl Serialize for Horizon {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Horizon {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Number(t) => Ok(Horizon(t)),
            Raw::Text(s) if s == "inf" => Ok(Horizon(f64::INFINITY)),
            Raw::Text(s) => Err(serde::de::Error::custom(format!("horizon must be a number or \"inf\", got {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimBlock {
    pub n_paths: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "one_worker")]
    pub workers: usize,
    pub x_grid: Vec<f64>,
    pub horizon: Horizon,
    #[serde(default = "default_ci")]
    pub ci_level: f64,
}

impl SimBlock {
    /// Simulation settings for a run up to `horizon` (finite).
    pub fn sim_config(&self, horizon: f64) -> SimConfig {
        SimConfig {
            n_paths: self.n_paths,
            seed: self.seed,
            workers: self.workers,
            horizon,
            x_grid: self.x_grid.clone(),
            ci_level: self.ci_level,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(&self) -> &'static str {
        match self {
            Self::Csv => "csv",
            Self::Json => "json",
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.extension())
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(default)]
    pub format: OutputFormat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OverrideRecord {
    pub field: String,
    pub config: Value,
    pub command_line: Value,
}

fn one() -> f64 {
    1.0
}

fn one_worker() -> usize {
    1
}

fn zero_break() -> Vec<f64> {
    vec![0.0]
}

fn default_ci() -> f64 {
    0.95
}

fn default_rel_tol() -> f64 {
    AsymptoticOptions::default().rel_tol
}

fn default_gh_nodes() -> usize {
    AsymptoticOptions::default().gauss_hermite_nodes
}

fn default_inner_draws() -> usize {
    AsymptoticOptions::default().inner_draws
}

fn default_inner_seed() -> u64 {
    AsymptoticOptions::default().inner_seed
}

fn config_err(field: &str) -> impl Fn(Error) -> Error + '_ {
    move |e| Error::Config(format!("{field}: {e}"))
}

impl DistConfig {
    pub fn build(&self) -> Result<TailDistribution> {
        match *self {
            Self::Pareto { alpha, scale } => TailDistribution::pareto(alpha, scale),
            Self::HeavyWeibull { shape, scale } => TailDistribution::heavy_weibull(shape, scale),
            Self::Lognormal { mu, sigma } => TailDistribution::lognormal(mu, sigma),
            Self::Cubic => Ok(TailDistribution::CubicSurvival),
            Self::Harmonic => Ok(TailDistribution::HarmonicSurvival),
        }
    }
}

impl SetConfig {
    pub fn build(&self) -> Result<RareSet> {
        match self {
            Self::MaxExceed { b } => RareSet::max_exceed(b.clone()),
            Self::HalfSpace { l, b } => RareSet::half_space(l.clone(), *b),
            Self::Ray { b } => RareSet::ray(*b),
            Self::PolyhedralUnion { members } => RareSet::polyhedral_union(
                members
                    .iter()
                    .map(|m| HalfSpace::new(m.l.clone(), m.b))
                    .collect::<Result<_>>()?,
            ),
        }
    }
}

impl RenewalConfig {
    pub fn build(&self) -> Result<RenewalSpec> {
        match *self {
            Self::Poisson { rate } => RenewalSpec::poisson(rate),
            Self::Erlang { shape, rate } => RenewalSpec::erlang(shape, rate),
            Self::Uniform { low, high } => RenewalSpec::uniform(low, high),
        }
    }
}

impl ReturnConfig {
    pub fn build(&self) -> Result<ReturnProcess> {
        match *self {
            Self::Deterministic { r } => ReturnProcess::deterministic(r),
            Self::Brownian { mu, sigma } => ReturnProcess::brownian(mu, sigma),
            Self::CompoundPoisson { drift, rate, jump } => {
                let jump = match jump {
                    JumpConfig::Exponential { mean } => JumpLaw::Exponential { mean },
                    JumpConfig::Normal { mean, sd } => JumpLaw::Normal { mean, sd },
                };
                ReturnProcess::compound_poisson(drift, rate, jump)
            }
        }
    }
}

/// Model objects built from a resolved config.
#[derive(Debug, Clone, PartialEq)]
pub struct BuiltModel {
    /// For ruin experiments the set is the one mapped from the ruin set.
    pub spec: ModelSpec,
    pub ruin: Option<RuinModel>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let mut cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.resolve()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Fills defaults in place and checks cross-field consistency.
    pub fn resolve(&mut self) -> Result<()> {
        let claim = &mut self.model.claim;
        if claim.d == 0 {
            return Err(Error::Config("model.claim.d must be at least 1".into()));
        }
        match (claim.marginal.take(), &claim.marginals) {
            (Some(m), None) => claim.marginals = Some(vec![m; claim.d]),
            (None, Some(ms)) if ms.len() == claim.d => {}
            (None, Some(ms)) => {
                return Err(Error::Config(format!(
                    "model.claim.marginals has {} entries for d = {}",
                    ms.len(),
                    claim.d
                )))
            }
            (None, None) if self.model.dependence.inter == InterKind::CubicPair => {
                claim.marginals = Some(vec![DistConfig::Cubic; claim.d]);
            }
            _ => return Err(Error::Config("model.claim needs exactly one of marginal or marginals".into())),
        }
        let dep = &mut self.model.dependence;
        match dep.inter {
            InterKind::FgmChain if dep.theta.is_none() => {
                return Err(Error::Config("model.dependence.theta is required for fgm_chain".into()))
            }
            InterKind::Iid | InterKind::CubicPair if dep.theta.is_some() => {
                return Err(Error::Config("model.dependence.theta only applies to fgm_chain".into()))
            }
            _ => {}
        }
        let is_ruin = self.experiment.kind == ExperimentKind::Ruin;
        match (&self.model.set, &mut self.model.ruin) {
            (Some(_), None) if !is_ruin => {}
            (None, Some(r)) if is_ruin => {
                if r.premiums.is_empty() {
                    r.premiums.push(PremiumConfig {
                        breaks: zero_break(),
                        rates: vec![0.0],
                    });
                }
                if r.premiums.len() == 1 && self.model.claim.d > 1 {
                    r.premiums = vec![r.premiums[0].clone(); self.model.claim.d];
                }
                if r.premium_bound.is_none() {
                    let top = r.premiums.iter().flat_map(|p| p.rates.iter().copied()).fold(0.0, f64::max);
                    r.premium_bound = Some(top);
                }
                match (r.set, &r.weights) {
                    (RuinKind::Sum, None) => return Err(Error::Config("model.ruin.weights is required for set \"sum\"".into())),
                    (RuinKind::Or, Some(_)) => return Err(Error::Config("model.ruin.weights only applies to set \"sum\"".into())),
                    _ => {}
                }
            }
            _ if is_ruin => return Err(Error::Config("ruin experiments take model.ruin and no model.set".into())),
            _ => return Err(Error::Config("this experiment takes model.set and no model.ruin".into())),
        }
        let exp = &self.experiment;
        let needs = |ok: bool, what: &str| {
            if ok {
                Ok(())
            } else {
                Err(Error::Config(format!("experiment.{what} is required for {}", exp.kind.name())))
            }
        };
        match exp.kind {
            ExperimentKind::EntranceTime => needs(exp.t_grid.is_some(), "t_grid")?,
            ExperimentKind::SingleBigJump => {
                needs(exp.weights.is_some(), "weights")?;
                needs(exp.n_summands.is_some(), "n_summands")?;
            }
            _ => {}
        }
        let finite = self.sim.horizon.0.is_finite();
        match exp.mode {
            ModeChoice::Infinite if finite => {
                return Err(Error::Config("mode infinite needs sim.horizon = \"inf\"".into()))
            }
            ModeChoice::Subexponential | ModeChoice::Consistent if !finite => {
                return Err(Error::Config(format!("mode {:?} needs a finite sim.horizon", exp.mode).to_lowercase()))
            }
            _ => {}
        }
        if !(self.sim.horizon.0 > 0.0) {
            return Err(Error::Config(format!("sim.horizon = {} must be positive", self.sim.horizon.0)));
        }
        self.sim_probe().map_err(config_err("sim"))?;
        self.build().map(|_| ())
    }

    fn sim_probe(&self) -> Result<()> {
        let probe = self.sim.sim_config(1.0);
        probe.validate()?;
        if let Some(t) = &self.experiment.t_grid {
            crate::engine::check_grid(t)?;
        }
        if let Some(w) = &self.experiment.weights {
            w.validate()?;
        }
        Ok(())
    }

    /// Builds the model objects.
    pub fn build(&self) -> Result<BuiltModel> {
        let m = &self.model;
        let marginals: Vec<TailDistribution> = m
            .claim
            .marginals
            .as_ref()
            .ok_or_else(|| Error::Config("model.claim is unresolved".into()))?
            .iter()
            .map(DistConfig::build)
            .collect::<Result<_>>()
            .map_err(config_err("model.claim"))?;
        let d = m.claim.d;
        let claim = match m.dependence.inter {
            InterKind::Iid => ClaimModel::iid(marginals),
            InterKind::FgmChain => {
                if marginals.windows(2).any(|w| w[0] != w[1]) {
                    return Err(Error::Config("model.claim: fgm_chain needs one common marginal".into()));
                }
                ClaimModel::fgm_chain(d, marginals[0], m.dependence.theta.unwrap_or(0.0))
            }
            InterKind::CubicPair => {
                if marginals.iter().any(|g| *g != TailDistribution::CubicSurvival) {
                    return Err(Error::Config("model.claim: cubic_pair fixes cubic marginals".into()));
                }
                ClaimModel::cubic_pair(d)
            }
        }
        .map_err(config_err("model.dependence"))?;
        let renewal = m.renewal.build().map_err(config_err("model.renewal"))?;
        let ret = m.ret.build().map_err(config_err("model.return"))?;
        let (set, ruin_parts) = match (&m.set, &m.ruin) {
            (Some(s), _) => (s.build().map_err(config_err("model.set"))?, None),
            (None, Some(r)) => {
                let ruin_set = match r.set {
                    RuinKind::Or => RuinSet::AnyLineNegative,
                    RuinKind::Sum => RuinSet::weighted_sum(r.weights.clone().unwrap_or_default())
                        .map_err(config_err("model.ruin.weights"))?,
                };
                let mapped = crate::rare_sets::from_ruin_set(&ruin_set, &r.alloc).map_err(config_err("model.ruin.alloc"))?;
                (mapped, Some((ruin_set, r)))
            }
            (None, None) => return Err(Error::Config("model needs a set or a ruin block".into())),
        };
        let mut spec = ModelSpec::new(claim, set, renewal, ret).map_err(config_err("model"))?;
        if let Some(mrv) = m.mrv {
            spec.mrv = Some(MrvSpec::new(mrv.alpha, mrv.mu_a).map_err(config_err("model.mrv"))?);
        }
        let ruin = match ruin_parts {
            None => None,
            Some((ruin_set, r)) => {
                let premiums = r
                    .premiums
                    .iter()
                    .map(|p| PremiumSchedule::new(p.breaks.clone(), p.rates.clone()))
                    .collect::<Result<Vec<_>>>()
                    .map_err(config_err("model.ruin.premiums"))?;
                Some(
                    RuinModel::new(spec.clone(), ruin_set, r.alloc.clone(), premiums, r.premium_bound.unwrap_or(0.0))
                        .map_err(config_err("model.ruin"))?,
                )
            }
        };
        Ok(BuiltModel { spec, ruin })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const REFERENCE: &str = r#"{
        "model": {
            "claim": {"d": 2, "marginal": {"type": "pareto", "alpha": 1.5}},
            "dependence": {"inter": "fgm_chain", "theta": 0.5},
            "set": {"type": "half_space", "l": [0.5, 0.5], "b": 1.0},
            "renewal": {"type": "poisson", "rate": 1.0},
            "return": {"type": "deterministic", "r": 0.05}
        },
        "experiment": {"kind": "entrance"},
        "sim": {"n_paths": 1000, "seed": 3, "x_grid": [10, 100], "horizon": 10}
    }"#;

    #[test]
    fn parses_and_fills_defaults() {
        let cfg = ExperimentConfig::from_json(REFERENCE).unwrap();
        assert_eq!(cfg.sim.workers, 1);
        assert_eq!(cfg.sim.ci_level, 0.95);
        assert_eq!(cfg.experiment.mode, ModeChoice::Auto);
        assert_eq!(cfg.output.format, OutputFormat::Csv);
        let ms = cfg.model.claim.marginals.as_ref().unwrap();
        assert_eq!(ms.len(), 2);
        assert_eq!(ms[0], DistConfig::Pareto { alpha: 1.5, scale: 1.0 });
        let built = cfg.build().unwrap();
        assert_eq!(built.spec.dim(), 2);
        assert!(built.ruin.is_none());
    }

    #[test]
    fn echo_round_trips() {
        let cfg = ExperimentConfig::from_json(REFERENCE).unwrap();
        let again = ExperimentConfig::from_json(&cfg.to_json()).unwrap();
        assert_eq!(cfg, again);
        assert_eq!(cfg.to_json(), again.to_json());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        for (from, to) in [
            (r#""seed": 3"#, r#""seed": 3, "sed": 4"#),
            (r#""alpha": 1.5"#, r#""alpha": 1.5, "shape": 2"#),
            (r#""r": 0.05"#, r#""r": 0.05, "sigma": 0.1"#),
            (r#""kind": "entrance""#, r#""kind": "entrance", "extra": true"#),
        ] {
            let text = REFERENCE.replace(from, to);
            assert!(matches!(ExperimentConfig::from_json(&text), Err(Error::Config(_))), "{to}");
        }
    }

    #[test]
    fn invalid_values_are_config_errors() {
        for (from, to) in [
            (r#""alpha": 1.5"#, r#""alpha": -1"#),
            (r#""theta": 0.5"#, r#""theta": 2"#),
            (r#""horizon": 10"#, r#""horizon": "forever""#),
            (r#""x_grid": [10, 100]"#, r#""x_grid": [100, 10]"#),
            (r#""l": [0.5, 0.5]"#, r#""l": [0.5, 0.5, 0.5]"#),
            (r#""kind": "entrance""#, r#""kind": "ruin""#),
            (r#""kind": "entrance""#, r#""kind": "entrance_time""#),
            (r#""kind": "entrance""#, r#""kind": "entrance", "mode": "infinite""#),
        ] {
            let text = REFERENCE.replace(from, to);
            let err = ExperimentConfig::from_json(&text).unwrap_err();
            assert!(matches!(err, Error::Config(_)), "{to}: {err}");
        }
    }

    #[test]
    fn infinite_horizon_and_ruin_blocks() {
        let text = REFERENCE.replace(r#""horizon": 10"#, r#""horizon": "inf""#);
        let cfg = ExperimentConfig::from_json(&text).unwrap();
        assert!(cfg.sim.horizon.0.is_infinite());
        assert!(cfg.to_json().contains(r#""horizon": "inf""#));
        let ruin = REFERENCE
            .replace(
                r#""set": {"type": "half_space", "l": [0.5, 0.5], "b": 1.0}"#,
                r#""ruin": {"set": "sum", "weights": [0.5, 0.5], "alloc": [0.5, 0.5], "premiums": [{"rates": [0.4]}]}"#,
            )
            .replace(r#""kind": "entrance""#, r#""kind": "ruin""#);
        let cfg = ExperimentConfig::from_json(&ruin).unwrap();
        let r = cfg.model.ruin.as_ref().unwrap();
        assert_eq!(r.premiums.len(), 2);
        assert_eq!(r.premium_bound, Some(0.4));
        let built = cfg.build().unwrap();
        let rm = built.ruin.unwrap();
        assert_eq!(rm.base.set, RareSet::half_space(vec![0.5, 0.5], 0.5).unwrap());
        assert_eq!(built.spec.set, rm.base.set);
    }
}
