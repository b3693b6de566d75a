//! Two-action network games with heterogeneous preferences.
//!
//! Agents sit on the nodes of an undirected graph, each with a preferred
//! action in `{0, 1}`. Playing the liked action earns a reward factor
//! `alpha`, the disliked one `beta`, multiplied by one plus the number of
//! neighbors who match (coordination) or differ (anticoordination).
//!
//! The crate provides graph generators ([`graph`]), the payoff and
//! best-response rules ([`game`]), synchronous best-response and
//! proportional-imitation dynamics ([`dynamics`]), equilibrium
//! classification and brute-force Nash checks ([`equilibrium`]), seeded
//! parameter sweeps ([`experiments`]) and the file formats and command-line
//! front end ([`io`], [`cli`]).

pub mod cli;
pub mod dynamics;
pub mod equilibrium;
pub mod error;
pub mod experiments;
pub mod game;
pub mod graph;
pub mod io;
pub mod seed;
pub mod verify;

pub use dynamics::{
    init_population, run, step_best_response, step_proportional_imitation, DynamicsSpec,
    Information, InitPolicy, PopulationState, RunResult, Termination, UpdateRule,
};
pub use equilibrium::{
    classify, enumerate_equilibria, observables, verify_nash_bruteforce, EquilibriumClass,
    NashCheck, Observables,
};
pub use error::{Error, Result};
pub use experiments::{
    aggregate, default_grid, run_sweep, BetaRule, SurfacePoint, SweepConfig, SweepRecord,
};
pub use game::{
    best_response_complete, best_response_incomplete, lambda_reward, lower_threshold, payoff,
    regime_predict, upper_threshold, Action, GameKind, NeighborhoodStats, PayoffParams, Preference,
    Regime,
};
pub use graph::{generate_ba, generate_er, Graph, TopologySpec};
