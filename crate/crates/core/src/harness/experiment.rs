//! Running configured experiments and sweeps.

use serde::Serialize;

use super::config::{ExperimentConfig, SweepParam};
use crate::analysis::estimate::{estimate_message_risk, RiskReport, TrialRecord};
use crate::channel::Mode;
use crate::error::{Error, Result};
use crate::graph::{DegreeStats, Network};
use crate::police_protocols::{protocol_message_risk, PoliceKind};
use crate::population::Regime;
use crate::rebel_protocols::RebelProtocol;
use crate::rng::sub_seed;
use crate::round::{play_round, run_trials, RoundSetup};

/// A configuration together with its network, built once.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub config: ExperimentConfig,
    pub net: Network,
    pub stats: DegreeStats,
}

impl Experiment {
    pub fn new(config: ExperimentConfig) -> Result<Self> {
        config.validate()?;
        let net = config.topology.build(config.seed)?;
        Ok(Self::with_network(config, net))
    }

    pub fn with_network(config: ExperimentConfig, net: Network) -> Self {
        let stats = net.degree_stats();
        Experiment { config, net, stats }
    }

    /// Trials of different regimes use unrelated streams; every grid point of
    /// a sweep reuses the same ones.
    pub fn regime_seed(&self, regime: Regime) -> u64 {
        let index = match regime {
            Regime::Many => 0,
            Regime::Few => 1,
            Regime::Neither => 2,
        };
        sub_seed(self.config.seed, index)
    }

    pub fn protocol(&self, point: &ExperimentConfig) -> Result<RebelProtocol> {
        point.protocol.build(self.net.n(), self.stats.median_degree)
    }

    pub fn setup(&self, point: &ExperimentConfig, regime: Regime) -> Result<RoundSetup> {
        let protocol = self.protocol(point)?;
        let police = point.police.iter().map(|p| p.build(protocol)).collect();
        let setup = RoundSetup {
            net: self.net.clone(),
            stats: self.stats,
            mode: point.mode,
            protocol,
            police,
            sampler: point.population.sampler(regime)?,
            attack: point.population.attack,
            channel: Default::default(),
        };
        setup.validate()?;
        Ok(setup)
    }

    pub fn run_trial(&self, regime: Regime, trial: u64) -> Result<TrialRecord> {
        let setup = self.setup(&self.config, regime)?;
        play_round(&setup, self.regime_seed(regime), trial)
    }

    pub fn run_regime(&self, point: &ExperimentConfig, regime: Regime) -> Result<Vec<TrialRecord>> {
        let setup = self.setup(point, regime)?;
        run_trials(&setup, self.regime_seed(regime), point.trials, point.threads)
    }

    /// Runs both regimes at one configuration.
    pub fn run_point(&self, point: &ExperimentConfig, param: Option<f64>) -> Result<PointResult> {
        let protocol = self.protocol(point)?;
        let police: Vec<PoliceKind> = point.police.iter().map(|p| p.build(protocol)).collect();
        let many = self.run_regime(point, Regime::Many)?;
        let few = self.run_regime(point, Regime::Few)?;
        let analytic = protocol_message_risk(&protocol, point.mode, &self.net.degrees());
        let report = RiskReport::from_trials(&many, &few, &police, analytic)?;
        Ok(PointResult {
            param,
            mode: point.mode,
            protocol,
            police,
            many,
            few,
            report,
        })
    }

    /// One point per grid value in ascending order, or a single point
    /// without a sweep.
    pub fn run_sweep(&self) -> Result<Vec<PointResult>> {
        match &self.config.sweep {
            None => Ok(vec![self.run_point(&self.config, None)?]),
            Some(sweep) => {
                let mut grid = sweep.grid.clone();
                grid.sort_by(f64::total_cmp);
                grid.iter()
                    .map(|&v| self.run_point(&self.config.at_point(v)?, Some(v)))
                    .collect()
            }
        }
    }

    pub fn sweep_param(&self) -> Option<SweepParam> {
        self.config.sweep.as_ref().map(|s| s.param)
    }
}

/// Runs trial `trial` of `config` in `regime`, building the network first.
pub fn run_trial(config: &ExperimentConfig, regime: Regime, trial: u64) -> Result<TrialRecord> {
    Experiment::new(config.clone())?.run_trial(regime, trial)
}

/// Trials and report of both regimes at one configuration.
#[derive(Debug, Clone)]
pub struct PointResult {
    pub param: Option<f64>,
    pub mode: Mode,
    pub protocol: RebelProtocol,
    pub police: Vec<PoliceKind>,
    pub many: Vec<TrialRecord>,
    pub few: Vec<TrialRecord>,
    pub report: RiskReport,
}

/// One line of the sweep CSV. Field order and names are the header.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CsvRow {
    pub param: Option<f64>,
    pub regime: Regime,
    pub mode: Mode,
    pub protocol: &'static str,
    pub police: &'static str,
    pub n: usize,
    pub median_degree: usize,
    pub trials: u64,
    pub success: Option<f64>,
    pub success_lo: Option<f64>,
    pub success_hi: Option<f64>,
    pub output_risk: Option<f64>,
    pub or_lo: Option<f64>,
    pub or_hi: Option<f64>,
    pub msg_risk_analytic: f64,
    pub msg_risk_emp: Option<f64>,
    pub mre_lo: Option<f64>,
    pub mre_hi: Option<f64>,
    pub total_risk: Option<f64>,
}

pub const CSV_HEADER: &str = "param,regime,mode,protocol,police,n,median_degree,trials,success,success_lo,success_hi,output_risk,or_lo,or_hi,msg_risk_analytic,msg_risk_emp,mre_lo,mre_hi,total_risk";

impl PointResult {
    /// Rows for the many and few regimes, one per police (or a single row
    /// labelled `none` without police).
    pub fn csv_rows(&self, stats: &DegreeStats, n: usize) -> Vec<CsvRow> {
        let police: Vec<Option<PoliceKind>> = if self.police.is_empty() {
            vec![None]
        } else {
            self.police.iter().copied().map(Some).collect()
        };
        let r = &self.report;
        let mut rows = Vec::new();
        for regime in [Regime::Many, Regime::Few] {
            let trials = match regime {
                Regime::Many => &self.many,
                _ => &self.few,
            };
            for p in &police {
                let emp = p.and_then(|p| estimate_message_risk(trials, &p).ok());
                let many = regime == Regime::Many;
                rows.push(CsvRow {
                    param: self.param,
                    regime,
                    mode: self.mode,
                    protocol: self.protocol.name(),
                    police: p.map_or("none", |p| p.label()),
                    n,
                    median_degree: stats.median_degree,
                    trials: trials.len() as u64,
                    success: many.then_some(r.success.value),
                    success_lo: many.then_some(r.success.lo),
                    success_hi: many.then_some(r.success.hi),
                    output_risk: (!many).then_some(r.output_risk.gated.value),
                    or_lo: (!many).then_some(r.output_risk.gated.lo),
                    or_hi: (!many).then_some(r.output_risk.gated.hi),
                    msg_risk_analytic: r.message_risk_analytic,
                    msg_risk_emp: emp.map(|e| e.risk),
                    mre_lo: emp.map(|e| e.lo),
                    mre_hi: emp.map(|e| e.hi),
                    total_risk: (!many).then_some(r.total_risk),
                });
            }
        }
        rows
    }
}

pub fn write_csv<W: std::io::Write>(rows: &[CsvRow], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    let wrap = |e: csv::Error| Error::InvalidInput(format!("csv: {e}"));
    if rows.is_empty() {
        writer
            .write_record(CSV_HEADER.split(','))
            .map_err(wrap)?;
    }
    for row in rows {
        writer.serialize(row).map_err(wrap)?;
    }
    writer.flush().map_err(|e| Error::InvalidInput(format!("csv: {e}")))?;
    Ok(())
}

/// Description written next to the CSV.
#[derive(Debug, Clone, Serialize)]
pub struct SweepMeta {
    pub seed: u64,
    pub trials: u64,
    pub mode: Mode,
    pub topology: String,
    pub n: usize,
    pub median_degree: usize,
    pub min_degree: usize,
    pub max_degree: usize,
    pub mean_degree: f64,
    pub sweep_param: Option<&'static str>,
    pub grid: Vec<f64>,
    pub note: &'static str,
    pub config: String,
}

pub const SWEEP_NOTE: &str = "grid granularity and trial counts are harness choices taken from the config file";

impl Experiment {
    pub fn meta(&self) -> SweepMeta {
        SweepMeta {
            seed: self.config.seed,
            trials: self.config.trials,
            mode: self.config.mode,
            topology: self.config.topology.label(),
            n: self.net.n(),
            median_degree: self.stats.median_degree,
            min_degree: self.stats.min,
            max_degree: self.stats.max,
            mean_degree: self.stats.mean,
            sweep_param: self.sweep_param().map(SweepParam::name),
            grid: self.config.sweep.as_ref().map(|s| s.grid.clone()).unwrap_or_default(),
            note: SWEEP_NOTE,
            config: self.config.to_toml_string(),
        }
    }

    pub fn rows(&self, points: &[PointResult]) -> Vec<CsvRow> {
        points
            .iter()
            .flat_map(|p| p.csv_rows(&self.stats, self.net.n()))
            .collect()
    }
}

/// Gnuplot script plotting success, output risk and total risk against the
/// swept parameter.
pub fn gnuplot_script(csv_name: &str, param: &str) -> String {
    format!(
        "set datafile separator ','\n\
         set key autotitle columnhead\n\
         set xlabel '{param}'\n\
         set ylabel 'probability'\n\
         set yrange [0:1]\n\
         plot '{csv_name}' using ($2 eq 'many' ? $1 : 1/0):9 with linespoints title 'success', \\\n\
         \x20    '' using ($2 eq 'few' ? $1 : 1/0):12 with linespoints title 'output risk', \\\n\
         \x20    '' using ($2 eq 'few' ? $1 : 1/0):15 with linespoints title 'message risk', \\\n\
         \x20    '' using ($2 eq 'few' ? $1 : 1/0):19 with linespoints title 'total risk'\n"
    )
}

/// Files written by [`write_outputs`].
#[derive(Debug, Clone)]
pub struct WrittenOutputs {
    pub csv: std::path::PathBuf,
    pub meta: std::path::PathBuf,
    pub plot: Option<std::path::PathBuf>,
}

/// Writes the CSV, a `.meta` sidecar and, for sweeps, a `.gp` script.
pub fn write_outputs(exp: &Experiment, points: &[PointResult], out: &std::path::Path) -> Result<WrittenOutputs> {
    let create = |path: &std::path::Path| std::fs::File::create(path).map_err(|e| Error::io(path, e));
    write_csv(&exp.rows(points), std::io::BufWriter::new(create(out)?))?;
    let with_suffix = |suffix: &str| {
        let mut name = out.as_os_str().to_owned();
        name.push(suffix);
        std::path::PathBuf::from(name)
    };
    let meta = with_suffix(".meta");
    let text = toml::to_string(&exp.meta()).map_err(|e| Error::InvalidInput(format!("meta: {e}")))?;
    std::fs::write(&meta, text).map_err(|e| Error::io(&meta, e))?;
    let plot = match exp.sweep_param() {
        Some(param) => {
            let path = with_suffix(".gp");
            let csv_name = out.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            std::fs::write(&path, gnuplot_script(&csv_name, param.name())).map_err(|e| Error::io(&path, e))?;
            Some(path)
        }
        None => None,
    };
    Ok(WrittenOutputs {
        csv: out.to_path_buf(),
        meta,
        plot,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(extra: &str) -> ExperimentConfig {
        let text = format!(
            "seed = 5\ntrials = 100\npolice = [\"np_threshold\"]\n{extra}\n[topology]\nkind = \"random_regular\"\nn = 60\ndegree = 8\n\n[protocol]\nkind = \"quorum_sensing\"\nepsilon = 0.3\n"
        );
        ExperimentConfig::from_toml_str(&text, None).unwrap()
    }

    #[test]
    fn header_matches_row_fields() {
        let exp = Experiment::new(small("")).unwrap();
        let points = exp.run_sweep().unwrap();
        let mut buf = Vec::new();
        write_csv(&exp.rows(&points), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER);
        let many: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(many.len(), 19);
        assert_eq!(many[0], "");
        assert_eq!(&many[1..5], &["many", "public", "quorum_sensing", "np_threshold"]);
        assert!(many[11].is_empty() && many[18].is_empty());
        let few: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(few[1], "few");
        assert!(few[8].is_empty() && !few[11].is_empty() && !few[18].is_empty());
        assert!(lines.next().is_none());
    }

    #[test]
    fn empty_rows_still_get_a_header() {
        let mut buf = Vec::new();
        write_csv(&[], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().trim_end(), CSV_HEADER);
    }

    #[test]
    fn sweep_rows_are_ordered_by_grid() {
        let exp = Experiment::new(small("\n[sweep]\nparam = \"epsilon\"\ngrid = [0.4, 0.2]\n")).unwrap();
        let points = exp.run_sweep().unwrap();
        let params: Vec<f64> = exp.rows(&points).iter().map(|r| r.param.unwrap()).collect();
        assert_eq!(params, vec![0.2, 0.2, 0.4, 0.4]);
    }

    #[test]
    fn run_trial_is_deterministic() {
        let config = small("");
        let a = run_trial(&config, Regime::Many, 4).unwrap();
        let b = run_trial(&config, Regime::Many, 4).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, run_trial(&config, Regime::Few, 4).unwrap());
    }

    #[test]
    fn silent_protocol_carries_no_message_risk() {
        let mut config = small("");
        config.protocol = super::super::config::ProtocolSpec::AlwaysMany;
        config.population.rho_many = 1.0;
        let exp = Experiment::new(config).unwrap();
        let point = exp.run_point(&exp.config, None).unwrap();
        let risk = estimate_message_risk(&point.few, &PoliceKind::NpThreshold).unwrap();
        assert!(risk.contains(0.0));
        assert_eq!(point.report.message_risk_analytic, 0.0);
        assert_eq!(point.report.success.value, 1.0);
    }
}
