//! Experiment configuration files (TOML).
//!
//! ```toml
//! seed = 42
//! trials = 1000
//! mode = "public"            # or "private"
//! police = ["np_threshold"]  # reverse | np_threshold | no_arrest
//!
//! [topology]
//! kind = "random_regular"    # complete | erdos_renyi | preferential_attachment | edge_list
//! n = 2000
//! degree = 200
//!
//! [protocol]
//! kind = "quorum_sensing"    # median | self_immolation | always_many | never_many
//! epsilon = 0.2
//!
//! [population]
//! rho_many = 0.8
//! rho_few = 0.2
//!
//! [sweep]
//! param = "epsilon"
//! grid = [0.05, 0.1, 0.15, 0.2]
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::channel::Mode;
use crate::error::{Error, Result};
use crate::graph::{
    build_complete, build_erdos_renyi, build_preferential_attachment, build_random_regular, load_edge_list,
    Network,
};
use crate::police_protocols::PoliceKind;
use crate::population::{PopulationParams, Regime, RoleSampler, FEW_THRESHOLD, MANY_THRESHOLD};
use crate::rebel_protocols::{
    BaselineDecider, MedianParams, QuorumSensingParams, RebelProtocol, SelfImmolationParams,
};
use crate::undercover_attacks::AttackStrategy;

pub const DEFAULT_TRIALS: u64 = 1000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(default = "default_mode")]
    pub mode: Mode,
    #[serde(default)]
    pub threads: Option<usize>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub police: Vec<PoliceSpec>,
    pub topology: TopologySpec,
    pub protocol: ProtocolSpec,
    #[serde(default)]
    pub population: PopulationSpec,
    #[serde(default)]
    pub sweep: Option<SweepSpec>,
}

fn default_trials() -> u64 {
    DEFAULT_TRIALS
}

fn default_mode() -> Mode {
    Mode::Public
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TopologySpec {
    Complete {
        n: usize,
    },
    RandomRegular {
        n: usize,
        degree: usize,
        #[serde(default)]
        seed: Option<u64>,
    },
    ErdosRenyi {
        n: usize,
        p: f64,
        #[serde(default)]
        seed: Option<u64>,
    },
    PreferentialAttachment {
        n: usize,
        m: usize,
        #[serde(default)]
        seed: Option<u64>,
    },
    EdgeList {
        path: PathBuf,
    },
}

impl TopologySpec {
    /// Builds the network; generators without their own seed use `master_seed`.
    pub fn build(&self, master_seed: u64) -> Result<Network> {
        match self {
            TopologySpec::Complete { n } => build_complete(*n),
            TopologySpec::RandomRegular { n, degree, seed } => {
                build_random_regular(*n, *degree, seed.unwrap_or(master_seed))
            }
            TopologySpec::ErdosRenyi { n, p, seed } => build_erdos_renyi(*n, *p, seed.unwrap_or(master_seed)),
            TopologySpec::PreferentialAttachment { n, m, seed } => {
                build_preferential_attachment(*n, *m, seed.unwrap_or(master_seed))
            }
            TopologySpec::EdgeList { path } => load_edge_list(path),
        }
    }

    pub fn label(&self) -> String {
        match self {
            TopologySpec::Complete { n } => format!("complete(n={n})"),
            TopologySpec::RandomRegular { n, degree, .. } => format!("random_regular(n={n}, degree={degree})"),
            TopologySpec::ErdosRenyi { n, p, .. } => format!("erdos_renyi(n={n}, p={p})"),
            TopologySpec::PreferentialAttachment { n, m, .. } => format!("preferential_attachment(n={n}, m={m})"),
            TopologySpec::EdgeList { path } => format!("edge_list({})", path.display()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProtocolSpec {
    QuorumSensing {
        epsilon: f64,
    },
    Median {
        epsilon: f64,
    },
    /// Either `c` (giving `q = c ln n / median`, `tau = c ln n / 2`) or both
    /// `q` and `tau`.
    SelfImmolation {
        #[serde(default)]
        c: Option<f64>,
        #[serde(default)]
        q: Option<f64>,
        #[serde(default)]
        tau: Option<f64>,
    },
    AlwaysMany,
    NeverMany,
}

impl ProtocolSpec {
    pub fn build(&self, n: usize, median_deg: usize) -> Result<RebelProtocol> {
        Ok(match *self {
            ProtocolSpec::QuorumSensing { epsilon } => RebelProtocol::QuorumSensing(QuorumSensingParams::new(epsilon)?),
            ProtocolSpec::Median { epsilon } => RebelProtocol::Median(MedianParams::new(epsilon)?),
            ProtocolSpec::SelfImmolation { c, q, tau } => RebelProtocol::SelfImmolation(match (c, q, tau) {
                (Some(c), None, None) => SelfImmolationParams::from_constant(c, n, median_deg)?,
                (None, Some(q), Some(tau)) => SelfImmolationParams::new(q, tau)?,
                _ => {
                    return Err(Error::InvalidConfiguration(
                        "self_immolation needs either c or both q and tau".into(),
                    ))
                }
            }),
            ProtocolSpec::AlwaysMany => RebelProtocol::Baseline(BaselineDecider::AlwaysMany),
            ProtocolSpec::NeverMany => RebelProtocol::Baseline(BaselineDecider::NeverMany),
        })
    }

    /// The same protocol with one parameter replaced.
    pub fn with_param(&self, param: SweepParam, value: f64) -> Result<ProtocolSpec> {
        match (param, *self) {
            (SweepParam::Epsilon, ProtocolSpec::QuorumSensing { .. }) => {
                Ok(ProtocolSpec::QuorumSensing { epsilon: value })
            }
            (SweepParam::Epsilon, ProtocolSpec::Median { .. }) => Ok(ProtocolSpec::Median { epsilon: value }),
            (SweepParam::C, ProtocolSpec::SelfImmolation { .. }) => Ok(ProtocolSpec::SelfImmolation {
                c: Some(value),
                q: None,
                tau: None,
            }),
            (SweepParam::UndercoverProb, spec) => Ok(spec),
            (param, spec) => Err(Error::InvalidConfiguration(format!(
                "cannot sweep {} for protocol {spec:?}",
                param.name()
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PoliceSpec {
    Reverse,
    NpThreshold,
    NoArrest,
}

impl PoliceSpec {
    pub fn build(self, protocol: RebelProtocol) -> PoliceKind {
        match self {
            PoliceSpec::Reverse => PoliceKind::Reverse(protocol),
            PoliceSpec::NpThreshold => PoliceKind::NpThreshold,
            PoliceSpec::NoArrest => PoliceKind::NoArrest,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PopulationSpec {
    #[serde(default = "default_rho_many")]
    pub rho_many: f64,
    #[serde(default = "default_rho_few")]
    pub rho_few: f64,
    #[serde(default)]
    pub undercover_prob: f64,
    #[serde(default = "default_attack")]
    pub attack: AttackStrategy,
    /// Allows regime rho values outside `>= 0.8` / `<= 0.2`.
    #[serde(default)]
    pub nonstandard_regime: bool,
    /// Exact number of rebels in the few-rebels runs instead of independent draws.
    #[serde(default)]
    pub few_planted_rebels: Option<usize>,
    #[serde(default)]
    pub planted_undercover: usize,
}

fn default_rho_many() -> f64 {
    MANY_THRESHOLD
}

fn default_rho_few() -> f64 {
    FEW_THRESHOLD
}

fn default_attack() -> AttackStrategy {
    AttackStrategy::HugePositive
}

impl Default for PopulationSpec {
    fn default() -> Self {
        PopulationSpec {
            rho_many: default_rho_many(),
            rho_few: default_rho_few(),
            undercover_prob: 0.0,
            attack: default_attack(),
            nonstandard_regime: false,
            few_planted_rebels: None,
            planted_undercover: 0,
        }
    }
}

impl PopulationSpec {
    pub fn rho(&self, regime: Regime) -> f64 {
        match regime {
            Regime::Many => self.rho_many,
            _ => self.rho_few,
        }
    }

    pub fn sampler(&self, regime: Regime) -> Result<RoleSampler> {
        Ok(RoleSampler {
            params: PopulationParams::new(self.rho(regime), self.undercover_prob)?,
            planted_rebels: match regime {
                Regime::Many => None,
                _ => self.few_planted_rebels,
            },
            planted_undercover: self.planted_undercover,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    Epsilon,
    UndercoverProb,
    C,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::Epsilon => "epsilon",
            SweepParam::UndercoverProb => "undercover_prob",
            SweepParam::C => "c",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub grid: Vec<f64>,
}

impl ExperimentConfig {
    /// Parses a config; relative edge-list paths are resolved against `base_dir`.
    pub fn from_toml_str(text: &str, base_dir: Option<&Path>) -> Result<Self> {
        let mut config: ExperimentConfig =
            toml::from_str(text).map_err(|e| Error::InvalidConfiguration(e.to_string()))?;
        if let (TopologySpec::EdgeList { path }, Some(base)) = (&mut config.topology, base_dir) {
            if path.is_relative() {
                *path = base.join(&*path);
            }
        }
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text, path.parent())
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("configs serialize")
    }

    /// Checks everything that does not need the network.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfiguration(msg));
        if self.trials == 0 {
            return bad("trials must be positive".into());
        }
        if self.threads == Some(0) {
            return bad("threads must be positive".into());
        }
        let pop = &self.population;
        if !pop.nonstandard_regime {
            if pop.rho_many < MANY_THRESHOLD {
                return bad(format!(
                    "rho_many = {} is below {MANY_THRESHOLD}; set nonstandard_regime to allow it",
                    pop.rho_many
                ));
            }
            if pop.rho_few > FEW_THRESHOLD {
                return bad(format!(
                    "rho_few = {} is above {FEW_THRESHOLD}; set nonstandard_regime to allow it",
                    pop.rho_few
                ));
            }
        }
        PopulationParams::new(pop.rho_many, pop.undercover_prob)?;
        PopulationParams::new(pop.rho_few, pop.undercover_prob)?;
        match self.protocol {
            ProtocolSpec::QuorumSensing { epsilon } | ProtocolSpec::Median { epsilon } => {
                if !(epsilon > 0.0 && epsilon.is_finite()) {
                    return Err(Error::param(format!("epsilon = {epsilon} must be positive")));
                }
            }
            ProtocolSpec::SelfImmolation { c, q, tau }
                if !matches!((c, q, tau), (Some(_), None, None) | (None, Some(_), Some(_))) =>
            {
                return bad("self_immolation needs either c or both q and tau".into());
            }
            _ => {}
        }
        if let Some(sweep) = &self.sweep {
            if sweep.grid.is_empty() {
                return bad("sweep grid is empty".into());
            }
            if sweep.grid.iter().any(|v| !v.is_finite()) {
                return bad("sweep grid values must be finite".into());
            }
            self.protocol.with_param(sweep.param, sweep.grid[0])?;
        }
        Ok(())
    }

    /// The configuration at one sweep grid value.
    pub fn at_point(&self, value: f64) -> Result<ExperimentConfig> {
        let sweep = self
            .sweep
            .as_ref()
            .ok_or_else(|| Error::InvalidConfiguration("no sweep configured".into()))?;
        let mut point = self.clone();
        point.protocol = self.protocol.with_param(sweep.param, value)?;
        if sweep.param == SweepParam::UndercoverProb {
            point.population.undercover_prob = value;
        }
        point.sweep = None;
        point.validate()?;
        Ok(point)
    }
}
