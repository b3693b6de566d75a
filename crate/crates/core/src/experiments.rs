//! Seeded parameter sweeps and their aggregation into plot-ready surfaces.
//!
//! Every realization draws its randomness from a child seed derived from
//! `(base_seed, coordinate, realization)`, so records do not depend on the
//! order in which the sweep is executed or on the worker count.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{run, DynamicsSpec, InitPolicy, RunResult, Termination, UpdateRule};
use crate::equilibrium::{classify, observables, EquilibriumClass};
use crate::error::{Error, Result};
use crate::game::{GameKind, PayoffParams};
use crate::graph::{Graph, TopologySpec};
use crate::seed;

/// Version written into every results row.
pub const SCHEMA_VERSION: u32 = 1;

/// How the beta values for each alpha are chosen.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum BetaRule {
    /// One explicit list per entry of the alpha grid.
    PerAlpha(Vec<Vec<f64>>),
    /// `count` values evenly spaced strictly inside `(alpha/2, alpha)`.
    EvenlySpaced(usize),
}

impl BetaRule {
    pub fn betas_for(&self, alpha_index: usize, alpha: f64) -> Vec<f64> {
        match self {
            BetaRule::PerAlpha(lists) => lists.get(alpha_index).cloned().unwrap_or_default(),
            BetaRule::EvenlySpaced(count) => {
                let step = (alpha / 2.0) / (*count as f64 + 1.0);
                (1..=*count).map(|j| alpha / 2.0 + j as f64 * step).collect()
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepConfig {
    pub topologies: Vec<TopologySpec>,
    pub games: Vec<GameKind>,
    pub dynamics: DynamicsSpec,
    pub init: InitPolicy,
    pub alpha_grid: Vec<f64>,
    pub beta_rule: BetaRule,
    /// Fractions of 0-preference agents; `rho = 1 - rho0`.
    pub rho0_grid: Vec<f64>,
    pub realizations: usize,
    pub base_seed: u64,
    /// Worker threads; 0 uses every available core.
    pub workers: usize,
}

impl SweepConfig {
    pub fn rule(&self) -> UpdateRule {
        self.dynamics.rule
    }

    pub fn info_label(&self) -> &'static str {
        self.dynamics.rule.info_label()
    }

    /// Every `(alpha, beta)` pair in grid order, validated.
    pub fn reward_pairs(&self) -> Result<Vec<PayoffParams>> {
        if let BetaRule::PerAlpha(lists) = &self.beta_rule {
            if lists.len() != self.alpha_grid.len() {
                return Err(Error::config(format!(
                    "rewards: {} beta lists for {} alpha values",
                    lists.len(),
                    self.alpha_grid.len()
                )));
            }
        }
        let mut out = Vec::new();
        for (i, &alpha) in self.alpha_grid.iter().enumerate() {
            for (j, beta) in self.beta_rule.betas_for(i, alpha).into_iter().enumerate() {
                let p = PayoffParams::new(alpha, beta)
                    .map_err(|e| Error::config(format!("rewards.beta[{i}][{j}]: {e}")))?;
                out.push(p);
            }
        }
        Ok(out)
    }

    pub fn validate(&self) -> Result<()> {
        if self.topologies.is_empty() {
            return Err(Error::config("topology: at least one network is required"));
        }
        for (i, t) in self.topologies.iter().enumerate() {
            t.validate().map_err(|e| Error::config(format!("topology[{i}]: {e}")))?;
        }
        if self.games.is_empty() {
            return Err(Error::config("games: at least one game is required"));
        }
        self.dynamics
            .validate()
            .map_err(|e| Error::config(format!("dynamics: {e}")))?;
        if self.reward_pairs()?.is_empty() {
            return Err(Error::config("rewards: the (alpha, beta) grid is empty"));
        }
        if self.rho0_grid.is_empty() {
            return Err(Error::config("rho0: at least one value is required"));
        }
        for (i, &r) in self.rho0_grid.iter().enumerate() {
            if !(0.0..=1.0).contains(&r) {
                return Err(Error::config(format!("rho0[{i}]: {r} is outside [0, 1]")));
            }
        }
        if self.realizations < 1 {
            return Err(Error::config("realizations must be at least 1"));
        }
        Ok(())
    }

    /// All parameter coordinates, topology-major.
    pub fn coordinates(&self) -> Result<Vec<Coordinate>> {
        let pairs = self.reward_pairs()?;
        let mut out = Vec::new();
        for topology in &self.topologies {
            for &game in &self.games {
                for &params in &pairs {
                    for &rho0 in &self.rho0_grid {
                        out.push(Coordinate {
                            topology: topology.clone(),
                            game,
                            rule: self.dynamics.rule,
                            params,
                            rho0,
                        });
                    }
                }
            }
        }
        Ok(out)
    }
}

/// One point of the parameter grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Coordinate {
    pub topology: TopologySpec,
    pub game: GameKind,
    pub rule: UpdateRule,
    pub params: PayoffParams,
    pub rho0: f64,
}

impl Coordinate {
    /// Stable text key fed into seed derivation.
    pub fn key(&self) -> String {
        format!(
            "{}|{}|{}|{}|alpha={:?}|beta={:?}|rho0={:?}",
            self.topology,
            self.game,
            self.rule.dynamics_label(),
            self.rule.info_label(),
            self.params.alpha(),
            self.params.beta(),
            self.rho0
        )
    }
}

impl fmt::Display for Coordinate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

/// One realization: parameters, seed and outcome.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRecord {
    pub schema_version: u32,
    pub topology: String,
    pub n: usize,
    pub mean_degree_or_m: f64,
    pub game: GameKind,
    pub dynamics: String,
    pub info: String,
    pub alpha: f64,
    pub beta: f64,
    pub ratio: f64,
    pub rho0: f64,
    pub realization: usize,
    /// Child seed; rerunning [`run_realization`] with it reproduces the row.
    pub seed: u64,
    pub steps: usize,
    pub termination: Termination,
    pub d1: f64,
    pub df: f64,
    /// `None` unless the run ended on a fixed point.
    pub class: Option<EquilibriumClass>,
}

impl SweepRecord {
    /// Same record with every real rounded to the precision of the results file.
    pub fn quantized(&self) -> Self {
        let q = crate::io::round_sig9;
        SweepRecord {
            mean_degree_or_m: q(self.mean_degree_or_m),
            alpha: q(self.alpha),
            beta: q(self.beta),
            ratio: q(self.ratio),
            rho0: q(self.rho0),
            d1: q(self.d1),
            df: q(self.df),
            topology: self.topology.clone(),
            dynamics: self.dynamics.clone(),
            info: self.info.clone(),
            ..*self
        }
    }
}

/// Output of one realization, including the graph it ran on.
pub struct Realization {
    pub graph: Arc<Graph>,
    pub result: RunResult,
    pub record: SweepRecord,
}

/// Runs a single realization from its child seed. The graph is generated
/// from one sub-stream of `child_seed`, the population and dynamics from the
/// others.
pub fn run_realization(
    coord: &Coordinate,
    dynamics: &DynamicsSpec,
    init: InitPolicy,
    realization: usize,
    child_seed: u64,
) -> Result<Realization> {
    let mut spec = dynamics.clone();
    spec.rule = coord.rule;
    let graph = Arc::new(
        coord
            .topology
            .generate(seed::substream(child_seed, seed::GRAPH_STREAM))?,
    );
    let rho = 1.0 - coord.rho0;
    let result = run(
        Arc::clone(&graph),
        &spec,
        &coord.params,
        coord.game,
        rho,
        init,
        child_seed,
    )?;
    let obs = observables(&result.final_state);
    let class = (result.termination == Termination::FixedPoint).then(|| {
        // complete-information best response must land on a Nash profile;
        // the other rules are classified on the profile alone
        let require_nash = coord.rule == UpdateRule::BestResponseComplete;
        classify(&result.final_state, &coord.params, coord.game, require_nash)
    });
    let record = SweepRecord {
        schema_version: SCHEMA_VERSION,
        topology: coord.topology.kind_label().to_string(),
        n: coord.topology.n(),
        mean_degree_or_m: coord.topology.connectivity(),
        game: coord.game,
        dynamics: coord.rule.dynamics_label().to_string(),
        info: coord.rule.info_label().to_string(),
        alpha: coord.params.alpha(),
        beta: coord.params.beta(),
        ratio: coord.params.ratio(),
        rho0: coord.rho0,
        realization,
        seed: child_seed,
        steps: result.steps_taken,
        termination: result.termination,
        d1: obs.d1,
        df: obs.df,
        class,
    };
    Ok(Realization {
        graph,
        result,
        record,
    })
}

/// Runs every coordinate and realization of `cfg`.
///
/// Records come back in grid order (topology, game, reward pair, rho0,
/// realization) regardless of worker scheduling.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRecord>> {
    cfg.validate()?;
    let jobs: Vec<(Coordinate, usize, u64)> = cfg
        .coordinates()?
        .into_iter()
        .flat_map(|c| {
            let key = c.key();
            (0..cfg.realizations).map(move |r| {
                let s = seed::derive_child_seed(cfg.base_seed, &key, r as u64);
                (c.clone(), r, s)
            })
        })
        .collect();
    let work = || {
        jobs.par_iter()
            .map(|(coord, r, s)| {
                run_realization(coord, &cfg.dynamics, cfg.init, *r, *s)
                    .map(|out| out.record)
                    .map_err(|e| Error::config(format!("at {coord} realization {r}: {e}")))
            })
            .collect::<Result<Vec<_>>>()
    };
    if cfg.workers == 0 {
        work()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build()
            .map_err(|e| Error::config(format!("worker pool: {e}")))?
            .install(work)
    }
}

/// Counts of equilibrium labels over the realizations of one coordinate.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ClassHistogram {
    pub ss: usize,
    pub fs: usize,
    pub sh: usize,
    pub fh: usize,
    pub ne: usize,
    /// Runs that did not end on a fixed point.
    pub unclassified: usize,
}

impl ClassHistogram {
    pub fn add(&mut self, class: Option<EquilibriumClass>) {
        match class {
            Some(EquilibriumClass::SatisfactorySpecialized) => self.ss += 1,
            Some(EquilibriumClass::FrustratedSpecialized) => self.fs += 1,
            Some(EquilibriumClass::SatisfactoryHybrid) => self.sh += 1,
            Some(EquilibriumClass::FrustratedHybrid) => self.fh += 1,
            Some(EquilibriumClass::NotAnEquilibrium) => self.ne += 1,
            None => self.unclassified += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.ss + self.fs + self.sh + self.fh + self.ne + self.unclassified
    }

    pub fn hybrid(&self) -> usize {
        self.sh + self.fh
    }
}

/// Aggregated observables for one coordinate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SurfacePoint {
    pub topology: String,
    pub n: usize,
    pub mean_degree_or_m: f64,
    pub game: GameKind,
    pub dynamics: String,
    pub info: String,
    pub alpha: f64,
    pub beta: f64,
    pub ratio: f64,
    pub rho0: f64,
    pub realizations: usize,
    pub fixed_point: usize,
    pub two_cycle: usize,
    pub budget_exhausted: usize,
    pub mean_d1: f64,
    pub std_d1: f64,
    pub mean_df: f64,
    pub std_df: f64,
    /// Means over fixed-point runs only; NaN when there are none.
    pub converged_mean_d1: f64,
    pub converged_mean_df: f64,
    pub classes: ClassHistogram,
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Groups records by coordinate (first-seen order) and reduces each group.
///
/// Inputs are rounded to results-file precision first, so aggregating in
/// memory and aggregating a file read back from disk give the same table.
pub fn aggregate(records: &[SweepRecord]) -> Vec<SurfacePoint> {
    let mut order: Vec<String> = Vec::new();
    let mut groups: HashMap<String, Vec<SweepRecord>> = HashMap::new();
    for r in records {
        let r = r.quantized();
        let key = format!(
            "{}|{}|{:?}|{}|{}|{}|{:?}|{:?}|{:?}",
            r.topology, r.n, r.mean_degree_or_m, r.game, r.dynamics, r.info, r.alpha, r.beta, r.rho0
        );
        groups
            .entry(key.clone())
            .or_insert_with(|| {
                order.push(key);
                Vec::new()
            })
            .push(r);
    }
    order
        .into_iter()
        .map(|key| {
            let group = &groups[&key];
            let first = &group[0];
            let d1: Vec<f64> = group.iter().map(|r| r.d1).collect();
            let df: Vec<f64> = group.iter().map(|r| r.df).collect();
            let converged: Vec<&SweepRecord> = group
                .iter()
                .filter(|r| r.termination == Termination::FixedPoint)
                .collect();
            let (mean_d1, std_d1) = mean_std(&d1);
            let (mean_df, std_df) = mean_std(&df);
            let (converged_mean_d1, _) = mean_std(&converged.iter().map(|r| r.d1).collect::<Vec<_>>());
            let (converged_mean_df, _) = mean_std(&converged.iter().map(|r| r.df).collect::<Vec<_>>());
            let mut classes = ClassHistogram::default();
            for r in group {
                classes.add(r.class);
            }
            let tally = |t: Termination| group.iter().filter(|r| r.termination == t).count();
            SurfacePoint {
                topology: first.topology.clone(),
                n: first.n,
                mean_degree_or_m: first.mean_degree_or_m,
                game: first.game,
                dynamics: first.dynamics.clone(),
                info: first.info.clone(),
                alpha: first.alpha,
                beta: first.beta,
                ratio: first.ratio,
                rho0: first.rho0,
                realizations: group.len(),
                fixed_point: tally(Termination::FixedPoint),
                two_cycle: tally(Termination::TwoCycle),
                budget_exhausted: tally(Termination::StepBudgetExhausted),
                mean_d1,
                std_d1,
                mean_df,
                std_df,
                converged_mean_d1,
                converged_mean_df,
                classes,
            }
        })
        .collect()
}

fn even_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
        .map(crate::io::round_sig9)
        .collect()
}

/// Default sweep: n = 100, ER mean degrees 5, 10, 20 and BA with
/// three links per new node, 8 alphas in [0.2, 0.9] with 8 betas each,
/// 11 values of rho0, 50 best-response realizations, 100 steps.
pub fn default_grid() -> SweepConfig {
    let n = 100;
    SweepConfig {
        topologies: vec![
            TopologySpec::Er { n, mean_degree: 5.0 },
            TopologySpec::Er { n, mean_degree: 10.0 },
            TopologySpec::Er { n, mean_degree: 20.0 },
            TopologySpec::Ba { n, m_attach: 3 },
        ],
        games: vec![GameKind::Coordination, GameKind::Anticoordination],
        dynamics: DynamicsSpec::new(UpdateRule::BestResponseComplete),
        init: InitPolicy::UniformRandomAction,
        alpha_grid: even_grid(0.2, 0.9, 8),
        beta_rule: BetaRule::EvenlySpaced(8),
        rho0_grid: even_grid(0.0, 1.0, 11),
        realizations: DEFAULT_BR_REALIZATIONS,
        base_seed: 0,
        workers: 0,
    }
}

pub const DEFAULT_BR_REALIZATIONS: usize = 50;
pub const DEFAULT_PI_REALIZATIONS: usize = 10;

/// Named figure analogues, each a preset sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Figure {
    /// CG, best response, d1 surface over (rho0, alpha/beta).
    Fig2,
    /// CG, best response, df and d1 against rho0 at the extreme ratios.
    Fig3,
    /// As `Fig2` with 1000 agents.
    Fig4,
    /// As `Fig3` with 1000 agents.
    Fig5,
    /// CG, proportional imitation, d1 surface.
    Fig6,
    /// CG, proportional imitation, extreme ratios.
    Fig7,
    /// AG, best response, d1 surface.
    Fig8,
    /// AG, best response, extreme ratios.
    Fig9,
    /// AG, proportional imitation, d1 surface.
    Fig10,
    /// AG, proportional imitation, extreme ratios.
    Fig11,
    /// CG, incomplete information, d1 surface.
    Fig12,
    /// CG, incomplete information, extreme ratios.
    Fig13,
    /// CG, incomplete information, df against alpha/beta at rho = 0.6, 0.5, 0.4, 0.3.
    Fig14,
}

impl Figure {
    pub const ALL: [Figure; 13] = [
        Figure::Fig2,
        Figure::Fig3,
        Figure::Fig4,
        Figure::Fig5,
        Figure::Fig6,
        Figure::Fig7,
        Figure::Fig8,
        Figure::Fig9,
        Figure::Fig10,
        Figure::Fig11,
        Figure::Fig12,
        Figure::Fig13,
        Figure::Fig14,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig2 => "fig2",
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
            Figure::Fig5 => "fig5",
            Figure::Fig6 => "fig6",
            Figure::Fig7 => "fig7",
            Figure::Fig8 => "fig8",
            Figure::Fig9 => "fig9",
            Figure::Fig10 => "fig10",
            Figure::Fig11 => "fig11",
            Figure::Fig12 => "fig12",
            Figure::Fig13 => "fig13",
            Figure::Fig14 => "fig14",
        }
    }

    /// Sweep configuration behind this figure.
    pub fn config(self, base_seed: u64) -> SweepConfig {
        let mut cfg = default_grid();
        cfg.base_seed = base_seed;
        // ratio ~1.02 and ~1.96 stand in for the limits alpha/beta -> 1 and -> 2
        let extremes = || BetaRule::PerAlpha(vec![vec![0.882, 0.46]]);
        let (game, rule, surface) = match self {
            Figure::Fig2 | Figure::Fig4 => (GameKind::Coordination, UpdateRule::BestResponseComplete, true),
            Figure::Fig3 | Figure::Fig5 => (GameKind::Coordination, UpdateRule::BestResponseComplete, false),
            Figure::Fig6 => (GameKind::Coordination, UpdateRule::ProportionalImitation, true),
            Figure::Fig7 => (GameKind::Coordination, UpdateRule::ProportionalImitation, false),
            Figure::Fig8 => (GameKind::Anticoordination, UpdateRule::BestResponseComplete, true),
            Figure::Fig9 => (GameKind::Anticoordination, UpdateRule::BestResponseComplete, false),
            Figure::Fig10 => (GameKind::Anticoordination, UpdateRule::ProportionalImitation, true),
            Figure::Fig11 => (GameKind::Anticoordination, UpdateRule::ProportionalImitation, false),
            Figure::Fig12 | Figure::Fig14 => (GameKind::Coordination, UpdateRule::BestResponseIncomplete, true),
            Figure::Fig13 => (GameKind::Coordination, UpdateRule::BestResponseIncomplete, false),
        };
        cfg.games = vec![game];
        cfg.dynamics = DynamicsSpec::new(rule);
        if rule == UpdateRule::ProportionalImitation {
            cfg.realizations = DEFAULT_PI_REALIZATIONS;
        }
        if !surface {
            cfg.alpha_grid = vec![0.9];
            cfg.beta_rule = extremes();
        }
        if matches!(self, Figure::Fig4 | Figure::Fig5) {
            for t in &mut cfg.topologies {
                *t = match *t {
                    TopologySpec::Er { mean_degree, .. } => TopologySpec::Er { n: 1000, mean_degree },
                    TopologySpec::Ba { m_attach, .. } => TopologySpec::Ba { n: 1000, m_attach },
                };
            }
        }
        if self == Figure::Fig14 {
            cfg.rho0_grid = vec![0.4, 0.5, 0.6, 0.7];
        }
        cfg
    }
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Figure::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Figure::ALL.iter().map(|f| f.name()).collect();
                Error::config(format!("unknown figure `{s}` (known: {})", names.join(", ")))
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny(base_seed: u64) -> SweepConfig {
        SweepConfig {
            topologies: vec![TopologySpec::Er { n: 40, mean_degree: 5.0 }],
            games: vec![GameKind::Coordination],
            dynamics: DynamicsSpec::new(UpdateRule::BestResponseComplete),
            init: InitPolicy::UniformRandomAction,
            alpha_grid: vec![0.6, 0.8],
            beta_rule: BetaRule::EvenlySpaced(2),
            rho0_grid: vec![0.0, 0.3, 0.5],
            realizations: 3,
            base_seed,
            workers: 2,
        }
    }

    #[test]
    fn default_grid_shape() {
        let cfg = default_grid();
        let pairs = cfg.reward_pairs().unwrap();
        assert_eq!(pairs.len(), 64);
        for p in &pairs {
            assert!(p.alpha() / 2.0 < p.beta() && p.beta() < p.alpha());
        }
        assert_eq!(cfg.realizations, 50);
        assert_eq!(cfg.rho0_grid.len(), 11);
        assert_eq!(cfg.dynamics.max_steps, 100);
        assert!((cfg.alpha_grid[0] - 0.2).abs() < 1e-12 && (cfg.alpha_grid[7] - 0.9).abs() < 1e-12);
        assert!(cfg.topologies.iter().all(|t| t.n() == 100));
        cfg.validate().unwrap();
    }

    #[test]
    fn sweep_is_deterministic_and_order_free() {
        let cfg = tiny(5);
        let a = run_sweep(&cfg).unwrap();
        let mut single = cfg.clone();
        single.workers = 1;
        assert_eq!(a, run_sweep(&single).unwrap());
        assert_eq!(a.len(), 4 * 3 * 3);

        let mut first = cfg.clone();
        first.rho0_grid = vec![0.0];
        let mut rest = cfg.clone();
        rest.rho0_grid = vec![0.3, 0.5];
        let split: Vec<SweepRecord> = run_sweep(&first).unwrap().into_iter().chain(run_sweep(&rest).unwrap()).collect();
        let mut sorted_a = a.clone();
        let mut sorted_split = split;
        let k = |r: &SweepRecord| (r.alpha.to_bits(), r.beta.to_bits(), r.rho0.to_bits(), r.realization);
        sorted_a.sort_by_key(k);
        sorted_split.sort_by_key(k);
        assert_eq!(sorted_a, sorted_split);
    }

    #[test]
    fn homogeneous_preferred_start_is_ss() {
        let mut cfg = tiny(1);
        cfg.realizations = 1;
        cfg.rho0_grid = vec![0.0];
        cfg.init = InitPolicy::AllPreferred;
        for r in run_sweep(&cfg).unwrap() {
            assert_eq!(r.df, 0.0);
            assert_eq!(r.class, Some(EquilibriumClass::SatisfactorySpecialized));
        }
    }

    #[test]
    fn records_rerun_in_isolation() {
        let cfg = tiny(9);
        let records = run_sweep(&cfg).unwrap();
        let coords = cfg.coordinates().unwrap();
        let r = &records[7];
        let coord = coords
            .iter()
            .find(|c| c.params.alpha() == r.alpha && c.params.beta() == r.beta && c.rho0 == r.rho0)
            .unwrap();
        let again = run_realization(coord, &cfg.dynamics, cfg.init, r.realization, r.seed).unwrap();
        assert_eq!(&again.record, r);
    }

    #[test]
    fn aggregate_histograms_and_dispersion() {
        let cfg = tiny(3);
        let records = run_sweep(&cfg).unwrap();
        let table = aggregate(&records);
        assert_eq!(table.len(), 4 * 3);
        for pt in &table {
            assert_eq!(pt.classes.total(), pt.realizations);
            assert_eq!(pt.fixed_point + pt.two_cycle + pt.budget_exhausted, pt.realizations);
        }
        let mut same = records[0].clone();
        let copies: Vec<SweepRecord> = (0..5)
            .map(|i| {
                same.realization = i;
                same.clone()
            })
            .collect();
        let pt = &aggregate(&copies)[0];
        assert_eq!(pt.std_d1, 0.0);
        assert_eq!(pt.std_df, 0.0);
    }

    #[test]
    fn invalid_pairs_are_named() {
        let mut cfg = tiny(0);
        cfg.beta_rule = BetaRule::PerAlpha(vec![vec![0.5], vec![0.8]]);
        let err = cfg.validate().unwrap_err().to_string();
        assert!(err.contains("rewards.beta[1][0]"), "{err}");
    }

    #[test]
    fn figure_presets_validate() {
        for f in Figure::ALL {
            f.config(1).validate().unwrap();
            assert_eq!(f.name().parse::<Figure>().unwrap(), f);
        }
        assert!("fig99".parse::<Figure>().is_err());
    }
}
