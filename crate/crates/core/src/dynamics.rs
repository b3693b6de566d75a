//! Population state and the two update rules: synchronous myopic best
//! response and proportional imitation.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::seq::{index, SliceRandom};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::equilibrium::{observables, Observables};
use crate::error::{Error, Result};
use crate::game::{
    best_response_complete, best_response_incomplete, payoff, Action, GameKind,
    NeighborhoodStats, PayoffParams, Preference,
};
use crate::graph::Graph;
use crate::seed::{self, SimRng};

/// Preferences and current actions of every agent on a shared graph.
#[derive(Clone, Debug, PartialEq)]
pub struct PopulationState {
    graph: Arc<Graph>,
    preferences: Vec<Preference>,
    actions: Vec<Action>,
}

impl PopulationState {
    pub fn new(graph: Arc<Graph>, preferences: Vec<Preference>, actions: Vec<Action>) -> Result<Self> {
        let n = graph.n();
        if preferences.len() != n || actions.len() != n {
            return Err(Error::config(format!(
                "population of {} preferences / {} actions does not match graph with {n} nodes",
                preferences.len(),
                actions.len()
            )));
        }
        Ok(PopulationState {
            graph,
            preferences,
            actions,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn shared_graph(&self) -> Arc<Graph> {
        Arc::clone(&self.graph)
    }

    pub fn n(&self) -> usize {
        self.actions.len()
    }

    pub fn preferences(&self) -> &[Preference] {
        &self.preferences
    }

    pub fn actions(&self) -> &[Action] {
        &self.actions
    }

    pub fn with_actions(&self, actions: Vec<Action>) -> Result<Self> {
        PopulationState::new(self.shared_graph(), self.preferences.clone(), actions)
    }

    /// Degree and count of 1-playing neighbors of agent `i`.
    pub fn neighborhood(&self, i: usize) -> NeighborhoodStats {
        let nb = self.graph.adj(i);
        let chi = nb.iter().filter(|&&j| self.actions[j].is_one()).count();
        NeighborhoodStats::new_unchecked(nb.len(), chi)
    }

    pub fn payoff_of(&self, i: usize, p: &PayoffParams, g: GameKind) -> f64 {
        payoff(self.preferences[i], self.actions[i], self.neighborhood(i), p, g)
    }

    /// Same graph with every preference and action flipped.
    pub fn mirrored(&self) -> Self {
        PopulationState {
            graph: self.shared_graph(),
            preferences: self.preferences.iter().map(|t| t.flip()).collect(),
            actions: self.actions.iter().map(|x| x.flip()).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitPolicy {
    /// Each agent plays 0 or 1 with probability one half.
    UniformRandomAction,
    /// Every agent starts on its liked action.
    AllPreferred,
}

impl FromStr for InitPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform_random_action" | "random" => Ok(InitPolicy::UniformRandomAction),
            "all_preferred" | "preferred" => Ok(InitPolicy::AllPreferred),
            other => Err(Error::config(format!("unknown init policy `{other}`"))),
        }
    }
}

/// Exactly `round(rho * n)` agents get preference 1, placed by a seeded
/// shuffle; actions follow `init`.
pub fn init_population(
    graph: Arc<Graph>,
    rho: f64,
    init: InitPolicy,
    rng_seed: u64,
) -> Result<PopulationState> {
    check_rho(rho)?;
    let n = graph.n();
    let ones = (rho * n as f64).round() as usize;
    let mut rng = seed::rng(rng_seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut preferences = vec![Preference::Zero; n];
    for &i in &order[..ones] {
        preferences[i] = Preference::One;
    }
    let actions = match init {
        InitPolicy::UniformRandomAction => (0..n).map(|_| Action::from_bit(rng.random::<bool>())).collect(),
        InitPolicy::AllPreferred => preferences.iter().map(|t| t.liked()).collect(),
    };
    PopulationState::new(graph, preferences, actions)
}

fn check_rho(rho: f64) -> Result<()> {
    if (0.0..=1.0).contains(&rho) {
        Ok(())
    } else {
        Err(Error::config(format!("rho must lie in [0, 1], got {rho}")))
    }
}

/// What agents know when best-responding.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Information {
    /// Neighbors' actions from the previous round are observed.
    Complete,
    /// Only the own degree and the population share of 1-preference agents.
    Incomplete(f64),
}

/// One synchronous best-response round. Returns the new state and how many
/// agents changed action.
pub fn step_best_response(
    s: &PopulationState,
    p: &PayoffParams,
    g: GameKind,
    info: Information,
) -> (PopulationState, usize) {
    let next: Vec<Action> = (0..s.n())
        .map(|i| {
            let theta = s.preferences[i];
            match info {
                Information::Complete => best_response_complete(theta, s.neighborhood(i), p, g),
                Information::Incomplete(rho) => {
                    best_response_incomplete(theta, s.graph.adj(i).len(), rho, p, g)
                }
            }
        })
        .collect();
    let changed = count_changes(&s.actions, &next);
    (
        PopulationState {
            graph: s.shared_graph(),
            preferences: s.preferences.clone(),
            actions: next,
        },
        changed,
    )
}

fn count_changes(a: &[Action], b: &[Action]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// Smallest normalization for which every imitation probability is at most
/// one: the gap between the largest attainable payoff `alpha*(1+k_max)` and
/// the smallest `beta`.
pub fn imitation_phi(graph: &Graph, p: &PayoffParams) -> f64 {
    p.alpha() * (1 + graph.max_degree()) as f64 - p.beta()
}

/// One proportional-imitation round.
///
/// `round(update_fraction * n)` agents are drawn; each picks a uniform random
/// neighbor `j` and copies `x_j` with probability `(pi_j - pi_i) / phi` when
/// `pi_j > pi_i`. Payoffs come from the pre-step profile and all adoptions
/// apply at once. Isolated agents never update.
pub fn step_proportional_imitation(
    s: &PopulationState,
    p: &PayoffParams,
    g: GameKind,
    phi: f64,
    update_fraction: f64,
    rng: &mut SimRng,
) -> Result<(PopulationState, usize)> {
    let required = imitation_phi(&s.graph, p);
    // written so that a NaN phi is rejected too
    if phi.partial_cmp(&required).is_none_or(|o| o.is_lt()) {
        return Err(Error::config(format!(
            "phi={phi} is below the largest payoff gap {required}; probabilities would exceed 1"
        )));
    }
    check_fraction(update_fraction)?;
    let n = s.n();
    let payoffs: Vec<f64> = (0..n).map(|i| s.payoff_of(i, p, g)).collect();
    let picks = ((update_fraction * n as f64).round() as usize).min(n);
    let mut next = s.actions.clone();
    for i in index::sample(rng, n, picks).into_iter() {
        let nb = s.graph.adj(i);
        if nb.is_empty() {
            continue;
        }
        let j = nb[rng.random_range(0..nb.len())];
        let prob = adoption_probability(payoffs[i], payoffs[j], phi);
        debug_assert!((0.0..=1.0).contains(&prob), "adoption probability {prob}");
        if prob > 0.0 && rng.random::<f64>() < prob {
            next[i] = s.actions[j];
        }
    }
    let changed = count_changes(&s.actions, &next);
    Ok((
        PopulationState {
            graph: s.shared_graph(),
            preferences: s.preferences.clone(),
            actions: next,
        },
        changed,
    ))
}

/// `(neighbor - own) / phi` when the neighbor earns strictly more, else 0.
pub fn adoption_probability(own: f64, neighbor: f64, phi: f64) -> f64 {
    if neighbor > own {
        (neighbor - own) / phi
    } else {
        0.0
    }
}

fn check_fraction(f: f64) -> Result<()> {
    if f > 0.0 && f <= 1.0 {
        Ok(())
    } else {
        Err(Error::config(format!("update_fraction must lie in (0, 1], got {f}")))
    }
}

/// True when no agent has a neighbor that plays differently and earns
/// strictly more, so proportional imitation can never change the profile.
pub fn imitation_absorbing(s: &PopulationState, p: &PayoffParams, g: GameKind) -> bool {
    let payoffs: Vec<f64> = (0..s.n()).map(|i| s.payoff_of(i, p, g)).collect();
    (0..s.n()).all(|i| {
        s.graph
            .adj(i)
            .iter()
            .all(|&j| s.actions[j] == s.actions[i] || payoffs[j] <= payoffs[i])
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UpdateRule {
    BestResponseComplete,
    BestResponseIncomplete,
    ProportionalImitation,
}

impl UpdateRule {
    /// Column value for the `dynamics` results field.
    pub fn dynamics_label(self) -> &'static str {
        match self {
            UpdateRule::BestResponseComplete | UpdateRule::BestResponseIncomplete => "br",
            UpdateRule::ProportionalImitation => "pi",
        }
    }

    /// Column value for the `info` results field.
    pub fn info_label(self) -> &'static str {
        match self {
            UpdateRule::BestResponseIncomplete => "incomplete",
            _ => "complete",
        }
    }

    pub fn from_labels(dynamics: &str, info: &str) -> Result<Self> {
        match (dynamics, info) {
            ("br", "complete") => Ok(UpdateRule::BestResponseComplete),
            ("br", "incomplete") => Ok(UpdateRule::BestResponseIncomplete),
            ("pi", "complete") => Ok(UpdateRule::ProportionalImitation),
            ("pi", "incomplete") => Err(Error::config(
                "proportional imitation needs neighbors' payoffs and cannot run under incomplete information",
            )),
            (d, i) => Err(Error::config(format!("unknown dynamics/info combination `{d}`/`{i}`"))),
        }
    }
}

/// Update rule plus its budget and convergence knobs.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DynamicsSpec {
    pub rule: UpdateRule,
    /// Share of agents drawn each imitation step.
    pub update_fraction: f64,
    pub max_steps: usize,
    /// Consecutive zero-change imitation steps that count as converged.
    pub convergence_window: usize,
    pub record_trajectory: bool,
}

impl DynamicsSpec {
    pub fn new(rule: UpdateRule) -> Self {
        DynamicsSpec {
            rule,
            update_fraction: 1.0,
            max_steps: 100,
            convergence_window: 20,
            record_trajectory: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_fraction(self.update_fraction)?;
        if self.max_steps < 1 {
            return Err(Error::config("max_steps must be at least 1"));
        }
        if self.convergence_window < 1 {
            return Err(Error::config("convergence_window must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    FixedPoint,
    TwoCycle,
    StepBudgetExhausted,
}

impl Termination {
    pub fn label(self) -> &'static str {
        match self {
            Termination::FixedPoint => "fixed_point",
            Termination::TwoCycle => "two_cycle",
            Termination::StepBudgetExhausted => "budget_exhausted",
        }
    }
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Termination {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fixed_point" => Ok(Termination::FixedPoint),
            "two_cycle" => Ok(Termination::TwoCycle),
            "budget_exhausted" => Ok(Termination::StepBudgetExhausted),
            other => Err(Error::config(format!("unknown termination `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunResult {
    pub final_state: PopulationState,
    pub steps_taken: usize,
    pub termination: Termination,
    /// Observables after every step, when requested.
    pub trajectory: Option<Vec<Observables>>,
}

/// Builds a population on `graph` and evolves it until it settles, cycles or
/// runs out of steps.
///
/// `rng_seed` feeds two independent sub-streams: one for the initial
/// population, one for the imitation draws.
pub fn run(
    graph: Arc<Graph>,
    spec: &DynamicsSpec,
    p: &PayoffParams,
    kind: GameKind,
    rho: f64,
    init: InitPolicy,
    rng_seed: u64,
) -> Result<RunResult> {
    spec.validate()?;
    let state = init_population(
        graph,
        rho,
        init,
        seed::substream(rng_seed, seed::POPULATION_STREAM),
    )?;
    let mut rng = seed::rng(seed::substream(rng_seed, seed::DYNAMICS_STREAM));
    evolve(state, spec, p, kind, rho, &mut rng)
}

/// Evolves an existing population; see [`run`].
pub fn evolve(
    mut state: PopulationState,
    spec: &DynamicsSpec,
    p: &PayoffParams,
    kind: GameKind,
    rho: f64,
    rng: &mut SimRng,
) -> Result<RunResult> {
    spec.validate()?;
    check_rho(rho)?;
    let mut trajectory = spec.record_trajectory.then(Vec::new);
    let record = |s: &PopulationState, t: &mut Option<Vec<Observables>>| {
        if let Some(t) = t {
            t.push(observables(s));
        }
    };

    match spec.rule {
        UpdateRule::BestResponseComplete | UpdateRule::BestResponseIncomplete => {
            let info = if spec.rule == UpdateRule::BestResponseComplete {
                Information::Complete
            } else {
                Information::Incomplete(rho)
            };
            let mut two_back: Option<Vec<Action>> = None;
            for t in 1..=spec.max_steps {
                let (next, changed) = step_best_response(&state, p, kind, info);
                record(&next, &mut trajectory);
                let previous = std::mem::replace(&mut state, next);
                if changed == 0 {
                    return Ok(finish(state, t, Termination::FixedPoint, trajectory));
                }
                if two_back.as_deref() == Some(state.actions()) {
                    return Ok(finish(state, t, Termination::TwoCycle, trajectory));
                }
                two_back = Some(previous.actions);
            }
        }
        UpdateRule::ProportionalImitation => {
            let phi = imitation_phi(state.graph(), p);
            let mut quiet = 0;
            for t in 1..=spec.max_steps {
                let (next, changed) =
                    step_proportional_imitation(&state, p, kind, phi, spec.update_fraction, rng)?;
                record(&next, &mut trajectory);
                state = next;
                if changed == 0 {
                    quiet += 1;
                    if quiet >= spec.convergence_window || imitation_absorbing(&state, p, kind) {
                        return Ok(finish(state, t, Termination::FixedPoint, trajectory));
                    }
                } else {
                    quiet = 0;
                }
            }
        }
    }
    Ok(finish(
        state,
        spec.max_steps,
        Termination::StepBudgetExhausted,
        trajectory,
    ))
}

fn finish(
    final_state: PopulationState,
    steps_taken: usize,
    termination: Termination,
    trajectory: Option<Vec<Observables>>,
) -> RunResult {
    RunResult {
        final_state,
        steps_taken,
        termination,
        trajectory,
    }
}
