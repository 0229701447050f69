//! Executable acceptance suites with pinned configurations and tolerances.

use std::path::PathBuf;
use std::time::Instant;

use serde::Serialize;

use super::config::{ExperimentConfig, PoliceSpec, PopulationSpec, ProtocolSpec, TopologySpec};
use super::experiment::{write_csv, Experiment};
use crate::analysis::chernoff::{chernoff_reference, ChernoffBound};
use crate::analysis::divergence::{
    kl_gauss, kl_gauss_quadrature, pinsker_bound, psi_bound_check, tv_gauss, tv_gauss_quadrature,
};
use crate::analysis::estimate::{
    designated_rebel_rate, estimate_message_risk, estimate_success, per_rebel_rate, pooled_rate_cluster_se,
    Estimate, TrialRecord,
};
use crate::analysis::oracle::{median_high_probability, median_many_probability, qs_many_probability, si_many_probability};
use crate::channel::Mode;
use crate::error::{Error, Result};
use crate::graph::{build_preferential_attachment, load_edge_list, write_edge_list, Network};
use crate::police_protocols::PoliceKind;
use crate::population::{Regime, Role};
use crate::rebel_protocols::{MedianParams, RebelProtocol};
use crate::undercover_attacks::{qs_break_demo, AttackStrategy};

/// Constant of the total-risk claims: total risk at most `0.715 eps`.
pub const TOTAL_RISK_FACTOR: f64 = 0.715;
/// Slack, in standard errors, for comparisons with analytic values.
pub const SE_SLACK: f64 = 3.0;
/// Success probability pinned for the impossibility check.
pub const PINNED_SUCCESS: f64 = 0.99;

pub const DEFAULT_SEED: u64 = 20_260_415;

pub const SUITES: [&str; 10] = [
    "pinsker",
    "kl",
    "theorem1",
    "theorem2",
    "fragility",
    "impossibility",
    "private-gap",
    "theorem4",
    "determinism",
    "psi-bounds",
];

#[derive(Debug, Clone)]
pub struct AcceptanceOptions {
    pub seed: u64,
    pub threads: Option<usize>,
    /// Where generated input files (edge lists) are written.
    pub scratch: PathBuf,
}

impl Default for AcceptanceOptions {
    fn default() -> Self {
        AcceptanceOptions {
            seed: DEFAULT_SEED,
            threads: None,
            scratch: std::env::temp_dir(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub label: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub suite: &'static str,
    pub title: &'static str,
    pub passed: bool,
    pub checks: Vec<Check>,
    /// Extra measurements that do not decide the outcome.
    pub diagnostics: Vec<String>,
    pub elapsed_secs: f64,
    pub limit_secs: f64,
}

impl CriterionOutcome {
    /// One line: status, id, suite, title and the failing checks.
    pub fn summary_line(&self) -> String {
        let failing: Vec<&str> = self.checks.iter().filter(|c| !c.passed).map(|c| c.label.as_str()).collect();
        format!(
            "{} [{}] {} ({}): {:.1}s of {}{}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.suite,
            self.title,
            self.elapsed_secs,
            limit_text(self.limit_secs),
            if failing.is_empty() {
                String::new()
            } else {
                format!("; failing: {}", failing.join(", "))
            }
        )
    }

    pub fn details(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "    {} {}: {}\n",
                if c.passed { "ok  " } else { "FAIL" },
                c.label,
                c.detail
            ));
        }
        for d in &self.diagnostics {
            out.push_str(&format!("    info {d}\n"));
        }
        out
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct AcceptanceReport {
    pub outcomes: Vec<CriterionOutcome>,
}

impl AcceptanceReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn render(&self) -> String {
        self.outcomes
            .iter()
            .map(|o| format!("{}\n{}", o.summary_line(), o.details()))
            .collect()
    }
}

/// Runs one suite by name, or all of them with `"all"`.
pub fn run_acceptance(suite: &str, opts: &AcceptanceOptions) -> Result<AcceptanceReport> {
    let names: Vec<&str> = match suite {
        "all" => SUITES.to_vec(),
        name if SUITES.contains(&name) => vec![name],
        other => {
            return Err(Error::param(format!(
                "unknown suite {other:?}; expected one of {} or all",
                SUITES.join(", ")
            )))
        }
    };
    let mut report = AcceptanceReport::default();
    for name in names {
        report.outcomes.push(run_criterion(name, opts)?);
    }
    Ok(report)
}

fn run_criterion(name: &str, opts: &AcceptanceOptions) -> Result<CriterionOutcome> {
    let start = Instant::now();
    let mut rec = Recorder::default();
    let (id, title, limit) = match name {
        "pinsker" => (1, "total variation below the Pinsker bound", 1.0),
        "kl" => (2, "Gaussian KL identity", 1.0),
        "theorem1" => (3, "Quorum-Sensing success and total risk", 120.0),
        "theorem2" => (4, "median rule success and total risk", 300.0),
        "fragility" => (5, "one undercover agent breaks Quorum-Sensing", 60.0),
        "impossibility" => (6, "private-mode reverse police", 120.0),
        "private-gap" => (7, "private total risk at least twice public", 600.0),
        "theorem4" => (8, "self-immolation success and output risk", 180.0),
        "determinism" => (9, "byte-identical reruns", f64::INFINITY),
        "psi-bounds" => (10, "linear bounds on the normal tail", 1.0),
        _ => unreachable!("suite names are checked by the caller"),
    };
    match name {
        "pinsker" => pinsker(&mut rec),
        "kl" => kl(&mut rec),
        "theorem1" => quorum_sensing_desk(&mut rec, opts)?,
        "theorem2" => median_desk(&mut rec, opts)?,
        "fragility" => fragility(&mut rec, opts)?,
        "impossibility" => impossibility(&mut rec, opts)?,
        "private-gap" => private_gap(&mut rec, opts)?,
        "theorem4" => self_immolation(&mut rec, opts)?,
        "determinism" => determinism(&mut rec, opts)?,
        "psi-bounds" => psi_bounds(&mut rec),
        _ => unreachable!(),
    }
    let elapsed = start.elapsed().as_secs_f64();
    rec.check(
        "runtime",
        elapsed < limit,
        format!("{elapsed:.2}s, limit {}", limit_text(limit)),
    );
    Ok(CriterionOutcome {
        id,
        suite: SUITES[id as usize - 1],
        title,
        passed: rec.checks.iter().all(|c| c.passed),
        checks: rec.checks,
        diagnostics: rec.diagnostics,
        elapsed_secs: elapsed,
        limit_secs: limit,
    })
}

fn limit_text(limit: f64) -> String {
    if limit.is_finite() {
        format!("{limit:.0}s")
    } else {
        "no limit".into()
    }
}

#[derive(Default)]
struct Recorder {
    checks: Vec<Check>,
    diagnostics: Vec<String>,
}

impl Recorder {
    fn check(&mut self, label: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            label: label.into(),
            passed,
            detail: detail.into(),
        });
    }

    fn note(&mut self, text: impl Into<String>) {
        self.diagnostics.push(text.into());
    }

    /// The oracle value lies in the estimate's 99% Wilson interval.
    fn covers(&mut self, label: impl Into<String>, est: &Estimate, oracle: f64) {
        self.check(
            label,
            est.contains(oracle),
            format!(
                "oracle {oracle:.5}, measured {:.5} [{:.5}, {:.5}] over {}",
                est.value, est.lo, est.hi, est.trials
            ),
        );
    }
}

fn pinsker(rec: &mut Recorder) {
    let mut worst_gap = 0.0f64;
    let mut bound_ok = true;
    let mut sqrt_kl_ok = true;
    for i in 1..=100 {
        let eps = i as f64 / 100.0;
        let tv = tv_gauss(eps, 1);
        bound_ok &= tv <= pinsker_bound(eps);
        sqrt_kl_ok &= tv <= kl_gauss(eps).sqrt();
        worst_gap = worst_gap.max((tv - tv_gauss_quadrature(eps)).abs());
    }
    rec.check("tv <= eps/sqrt(2)", bound_ok, "eps = 0.01, 0.02, ..., 1.00");
    rec.check("tv <= sqrt(KL)", sqrt_kl_ok, "eps = 0.01, 0.02, ..., 1.00");
    rec.check(
        "closed form vs quadrature",
        worst_gap <= 1e-8,
        format!("max |difference| {worst_gap:.3e}, tolerance 1e-8"),
    );
}

fn kl(rec: &mut Recorder) {
    for eps in [0.05, 0.1, 0.5, 1.0] {
        let q = kl_gauss_quadrature(eps);
        let gap = (q - eps * eps / 2.0).abs();
        rec.check(
            format!("KL at eps={eps}"),
            gap <= 1e-6,
            format!("quadrature {q:.10}, closed form {:.10}, gap {gap:.2e}", eps * eps / 2.0),
        );
    }
}

/// Desk-scale topology shared by several criteria.
fn desk_topology(opts: &AcceptanceOptions) -> TopologySpec {
    TopologySpec::RandomRegular {
        n: 2000,
        degree: 200,
        seed: Some(opts.seed),
    }
}

fn base_config(opts: &AcceptanceOptions, topology: TopologySpec, mode: Mode, protocol: ProtocolSpec) -> ExperimentConfig {
    ExperimentConfig {
        seed: opts.seed,
        trials: 1000,
        mode,
        threads: opts.threads,
        output: None,
        police: Vec::new(),
        topology,
        protocol,
        population: PopulationSpec::default(),
        sweep: None,
    }
}

pub fn quorum_sensing_desk_config(opts: &AcceptanceOptions) -> ExperimentConfig {
    let mut config = base_config(opts, desk_topology(opts), Mode::Public, ProtocolSpec::QuorumSensing { epsilon: 0.2 });
    config.police = vec![PoliceSpec::NpThreshold];
    config
}

fn quorum_sensing_desk(rec: &mut Recorder, opts: &AcceptanceOptions) -> Result<()> {
    let eps = 0.2;
    let exp = Experiment::new(quorum_sensing_desk_config(opts))?;
    let delta = exp.stats.median_degree;
    let point = exp.run_point(&exp.config, None)?;
    let r = &point.report;
    rec.check(
        "(a) success >= 0.99",
        r.success.value >= 0.99,
        format!("{:.4} [{:.4}, {:.4}]", r.success.value, r.success.lo, r.success.hi),
    );
    let total = r.output_risk.gated.value + tv_gauss(eps, 1);
    let se = r.total_risk_se();
    let bound = TOTAL_RISK_FACTOR * eps;
    rec.check(
        "(b) total risk <= 0.715 eps",
        total <= bound + SE_SLACK * se,
        format!(
            "output {:.4} + message {:.4} = {total:.4}, bound {bound:.3} + 3 x {se:.4}",
            r.output_risk.gated.value,
            tv_gauss(eps, 1)
        ),
    );
    rec.covers(
        "per-rebel rate, many",
        &designated_rebel_rate(&point.many)?,
        qs_many_probability(delta, 0.8, eps),
    );
    rec.covers(
        "per-rebel rate, few",
        &designated_rebel_rate(&point.few)?,
        qs_many_probability(delta, 0.2, eps),
    );
    if let Some(emp) = r.police_risk(&PoliceKind::NpThreshold).and_then(|p| p.few) {
        rec.note(format!(
            "threshold police message risk {:.4} +/- {:.4} vs analytic {:.4}",
            emp.risk,
            emp.se(),
            tv_gauss(eps, 1)
        ));
    }

    // Supplementary: the same protocol where the degree is large enough for
    // the bound to apply.
    let mut big = base_config(opts, TopologySpec::Complete { n: 800 }, Mode::Public, ProtocolSpec::QuorumSensing { epsilon: eps });
    big.trials = 300;
    let exp = Experiment::new(big)?;
    let few = exp.run_regime(&exp.config, Regime::Few)?;
    let out = per_rebel_rate(&few, true)?;
    rec.note(format!(
        "supplementary complete graph n=800 (degree 799): total risk {:.4} +/- {:.4} vs bound {bound:.3}",
        out.value + tv_gauss(eps, 1),
        pooled_rate_cluster_se(&few, true)
    ));
    Ok(())
}

fn median_desk(rec: &mut Recorder, opts: &AcceptanceOptions) -> Result<()> {
    let net = desk_topology(opts).build(opts.seed)?;
    let delta = net.degree_stats().median_degree;
    for eps in [0.04, 0.12, 0.2] {
        for u in [0.0, 0.01] {
            let mut config = base_config(opts, desk_topology(opts), Mode::Public, ProtocolSpec::Median { epsilon: eps });
            config.population.undercover_prob = u;
            config.population.attack = AttackStrategy::HugePositive;
            let exp = Experiment::with_network(config, net.clone());
            let point = exp.run_point(&exp.config, None)?;
            let r = &point.report;
            let tag = format!("eps={eps} u={u}");
            rec.check(
                format!("{tag} success >= 0.99"),
                r.success.value >= 0.99,
                format!("{:.4}", r.success.value),
            );
            let bound = TOTAL_RISK_FACTOR * eps;
            let se = r.total_risk_se();
            rec.check(
                format!("{tag} total risk <= 0.715 eps"),
                r.total_risk <= bound + SE_SLACK * se,
                format!(
                    "output {:.4} + message {:.4} = {:.4}, bound {bound:.4} + 3 x {se:.4}",
                    r.output_risk.gated.value, r.message_risk_analytic, r.total_risk
                ),
            );
            let frac = MedianParams::new(eps)?.threshold_fraction();
            for (regime, rho, trials) in [("many", 0.8, &point.many), ("few", 0.2, &point.few)] {
                let oracle = median_many_probability(delta, median_high_probability(rho, eps, u), frac, 0, 0);
                rec.covers(format!("{tag} per-rebel rate, {regime}"), &designated_rebel_rate(trials)?, oracle);
            }
        }
    }
    Ok(())
}

fn fragility(rec: &mut Recorder, opts: &AcceptanceOptions) -> Result<()> {
    let demo = qs_break_demo(1000, 1, 0.2, 0.2, 1000, opts.seed, opts.threads)?;
    rec.check(
        "Quorum-Sensing output risk >= 0.99",
        demo.qs_output_risk.value >= 0.99,
        format!(
            "{:.4} pooled, {:.4} designated; clean oracle {:.4}",
            demo.qs_output_risk.value, demo.qs_designated.value, demo.qs_clean_oracle
        ),
    );
    rec.covers(
        "median output risk vs one-count-shifted oracle",
        &demo.median_designated,
        demo.median_attacked_oracle,
    );
    rec.note(format!(
        "median clean oracle {:.4}, pooled median rate {:.4}",
        demo.median_clean_oracle, demo.median_output_risk.value
    ));
    Ok(())
}

fn arrest_rate(trials: &[TrialRecord], police: &PoliceKind, role: Role) -> Result<Estimate> {
    let (mut hits, mut total) = (0u64, 0u64);
    for t in trials {
        let arrested = t
            .arrests_of(police)
            .ok_or_else(|| Error::InvalidInput("missing police arrests".into()))?;
        for (r, &a) in t.roles.iter().zip(arrested) {
            if *r == role {
                hits += a as u64;
                total += 1;
            }
        }
    }
    Estimate::from_counts(hits, total)
}

fn impossibility(rec: &mut Recorder, opts: &AcceptanceOptions) -> Result<()> {
    let eps = 0.2;
    let mut config = base_config(opts, desk_topology(opts), Mode::Private, ProtocolSpec::QuorumSensing { epsilon: eps });
    config.police = vec![PoliceSpec::Reverse];
    let n = 2000usize;
    config.population = PopulationSpec {
        rho_many: 1.0,
        rho_few: 1.0 / (2.0 * (n * n) as f64),
        few_planted_rebels: Some(1),
        ..PopulationSpec::default()
    };
    let exp = Experiment::new(config)?;
    let protocol = exp.protocol(&exp.config)?;
    let police = PoliceKind::Reverse(protocol);

    let all_rebels = exp.run_regime(&exp.config, Regime::Many)?;
    let p_hat = estimate_success(&all_rebels)?;
    let p = PINNED_SUCCESS;
    let rebel_arrests = arrest_rate(&all_rebels, &police, Role::Rebel)?;
    rec.check(
        "(a) rebel arrest rate >= p/4",
        rebel_arrests.value >= p / 4.0 && rebel_arrests.value >= p_hat.value / 4.0,
        format!(
            "{:.4}; p/4 = {:.4} pinned, {:.4} measured",
            rebel_arrests.value,
            p / 4.0,
            p_hat.value / 4.0
        ),
    );

    let planted = exp.run_regime(&exp.config, Regime::Few)?;
    let output = designated_rebel_rate(&planted)?;
    let obedient = arrest_rate(&planted, &police, Role::Obedient)?;
    let slack = SE_SLACK * (output.se().powi(2) + obedient.se().powi(2)).sqrt();
    let inv_n = 1.0 / n as f64;
    rec.check(
        "(b) obedient arrest rate <= output risk + 1/n",
        obedient.value <= output.value + inv_n + slack,
        format!(
            "{:.4} vs {:.4} + {inv_n} + {slack:.4}",
            obedient.value, output.value
        ),
    );
    let total = output.value + rebel_arrests.value - obedient.value;
    rec.check(
        "(c) total risk >= p/4 - 1/n",
        total >= p / 4.0 - inv_n,
        format!(
            "output {:.4} + message {:.4} = {total:.4} vs {:.4}",
            output.value,
            rebel_arrests.value - obedient.value,
            p / 4.0 - inv_n
        ),
    );
    rec.note(format!("measured success at rho = 1: {:.4}", p_hat.value));
    Ok(())
}

/// Edge-list sample used by the private-vs-public check: a preferential
/// attachment graph with 10^4 nodes, written to disk and loaded back.
pub fn private_gap_network(opts: &AcceptanceOptions) -> Result<(Network, PathBuf)> {
    let generated = build_preferential_attachment(10_000, 50, opts.seed)?;
    let path = opts
        .scratch
        .join(format!("covert-pa-{}-{}.edges", opts.seed, std::process::id()));
    let file = std::fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
    write_edge_list(&generated, std::io::BufWriter::new(file)).map_err(|e| Error::io(&path, e))?;
    let net = load_edge_list(&path)?;
    Ok((net, path))
}

pub const PRIVATE_GAP_TRIALS: u64 = 100;

pub fn private_gap_grid() -> Vec<f64> {
    (7..=30).map(|k| k as f64 / 100.0).collect()
}

fn private_gap(rec: &mut Recorder, opts: &AcceptanceOptions) -> Result<()> {
    let (net, path) = private_gap_network(opts)?;
    let _ = std::fs::remove_file(&path);
    rec.note(format!(
        "edge-list sample: n = {}, edges = {}, median degree {}",
        net.n(),
        net.edge_count(),
        net.degree_stats().median_degree
    ));
    let mut compared = 0;
    let mut all_ok = true;
    let mut lines = Vec::new();
    for eps in private_gap_grid() {
        let topology = TopologySpec::EdgeList { path: path.clone() };
        let mut public = base_config(opts, topology.clone(), Mode::Public, ProtocolSpec::QuorumSensing { epsilon: eps });
        public.trials = PRIVATE_GAP_TRIALS;
        let public = Experiment::with_network(public, net.clone());
        let pub_many = public.run_regime(&public.config, Regime::Many)?;
        let pub_few = public.run_regime(&public.config, Regime::Few)?;
        let success = estimate_success(&pub_many)?;
        let pub_out = per_rebel_rate(&pub_few, true)?;
        let pub_total = pub_out.value + tv_gauss(eps, 1);
        let pub_se = pooled_rate_cluster_se(&pub_few, true);

        let mut private = public.config.clone();
        private.mode = Mode::Private;
        private.police = vec![PoliceSpec::NpThreshold];
        let private = Experiment::with_network(private, net.clone());
        let priv_few = private.run_regime(&private.config, Regime::Few)?;
        let priv_out = per_rebel_rate(&priv_few, true)?;
        let msg = estimate_message_risk(&priv_few, &PoliceKind::NpThreshold)?;
        let priv_total = priv_out.value + msg.risk;
        let se = (pooled_rate_cluster_se(&priv_few, true).powi(2) + msg.se().powi(2) + 4.0 * pub_se.powi(2)).sqrt();

        let counted = success.value >= 0.9;
        let ok = priv_total + SE_SLACK * se > 2.0 * pub_total;
        if counted {
            compared += 1;
            all_ok &= ok;
        }
        lines.push(format!(
            "eps={eps:.2} success {:.3}{} public {pub_total:.4} private {priv_total:.4} ratio {:.2}",
            success.value,
            if counted { "" } else { " (skipped)" },
            priv_total / pub_total
        ));
    }
    for l in &lines {
        rec.note(l.clone());
    }
    rec.check(
        "private total > 2 x public total where public success >= 0.9",
        all_ok && compared > 0,
        format!("{compared} of {} grid points compared", lines.len()),
    );
    Ok(())
}

pub const SELF_IMMOLATION_TRIALS: u64 = 300;

fn self_immolation(rec: &mut Recorder, opts: &AcceptanceOptions) -> Result<()> {
    let topology = TopologySpec::RandomRegular {
        n: 10_000,
        degree: 500,
        seed: Some(opts.seed),
    };
    let mut config = base_config(
        opts,
        topology,
        Mode::Private,
        ProtocolSpec::SelfImmolation {
            c: Some(8.0),
            q: None,
            tau: None,
        },
    );
    config.trials = SELF_IMMOLATION_TRIALS;
    let exp = Experiment::new(config)?;
    let delta = exp.stats.median_degree;
    let (q, tau) = match exp.protocol(&exp.config)? {
        RebelProtocol::SelfImmolation(p) => (p.q, p.tau),
        _ => unreachable!(),
    };
    let many = exp.run_regime(&exp.config, Regime::Many)?;
    let few = exp.run_regime(&exp.config, Regime::Few)?;
    let success = estimate_success(&many)?;
    rec.check("success >= 0.99", success.value >= 0.99, format!("{:.4}", success.value));

    let oracle = si_many_probability(delta, delta, q, tau, 0.2);
    rec.covers("per-rebel output risk vs binomial tail", &designated_rebel_rate(&few)?, oracle);
    let pooled = per_rebel_rate(&few, true)?;
    let bound = chernoff_reference(ChernoffBound::SiOutputRisk { q, delta: delta as f64 })?;
    rec.check(
        "output risk <= Chernoff bound",
        pooled.value <= bound,
        format!("pooled {:.3e} over {} rebels, oracle {oracle:.3e}, bound {bound:.3e}", pooled.value, pooled.trials),
    );

    let (huge, rebels) = many
        .iter()
        .chain(&few)
        .fold((0u64, 0u64), |(h, r), t| (h + t.huge_emitters as u64, r + t.rebels.len() as u64));
    rec.covers("huge-message fraction vs q", &Estimate::from_counts(huge, rebels)?, q);
    rec.note(format!("q = {q:.5}, tau = {tau:.3}, median degree {delta}"));
    Ok(())
}

/// CSV bytes of the criterion-3 configuration at a reduced trial count.
pub fn determinism_csv(opts: &AcceptanceOptions, threads: Option<usize>) -> Result<Vec<u8>> {
    let mut config = quorum_sensing_desk_config(opts);
    config.trials = 200;
    config.threads = threads;
    let exp = Experiment::new(config)?;
    let points = exp.run_sweep()?;
    let mut buf = Vec::new();
    write_csv(&exp.rows(&points), &mut buf)?;
    Ok(buf)
}

fn determinism(rec: &mut Recorder, opts: &AcceptanceOptions) -> Result<()> {
    let one = determinism_csv(opts, Some(1))?;
    let two = determinism_csv(opts, Some(2))?;
    let again = determinism_csv(opts, Some(1))?;
    rec.check("rerun is byte-identical", one == again, format!("{} bytes", one.len()));
    rec.check("thread count does not matter", one == two, "1 vs 2 worker threads");
    Ok(())
}

fn psi_bounds(rec: &mut Recorder) {
    let mut failures = Vec::new();
    for k in 0..=80 {
        let eps = 0.04 + 0.002 * k as f64;
        let c = psi_bound_check(eps);
        if !(c.lower_ok && c.upper_ok) {
            failures.push(format!("{eps:.3}"));
        }
    }
    rec.check(
        "psi bounds on [0.04, 0.2] step 0.002",
        failures.is_empty(),
        if failures.is_empty() {
            "81 grid points".to_string()
        } else {
            format!("fails at {}", failures.join(" "))
        },
    );
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(matches!(
            run_acceptance("nope", &AcceptanceOptions::default()),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn fast_suites_pass() {
        let report = run_acceptance("pinsker", &AcceptanceOptions::default()).unwrap();
        assert!(report.passed(), "{}", report.render());
        for suite in ["kl", "psi-bounds"] {
            let r = run_acceptance(suite, &AcceptanceOptions::default()).unwrap();
            assert!(r.passed(), "{}", r.render());
        }
    }

    #[test]
    fn grid_covers_the_stated_range() {
        let g = private_gap_grid();
        assert_eq!(g.first(), Some(&0.07));
        assert_eq!(g.last(), Some(&0.3));
        assert_eq!(g.len(), 24);
    }
}
