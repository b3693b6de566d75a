//! Observables, equilibrium classes and brute-force Nash checks.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::dynamics::PopulationState;
use crate::error::{Error, Result};
use crate::game::{best_response_complete, payoff, Action, GameKind, PayoffParams, Preference, TIE_TOLERANCE};
use crate::graph::Graph;

/// Largest graph [`enumerate_equilibria`] accepts.
pub const MAX_ENUMERATION_NODES: usize = 20;

/// Share of agents playing 1 (`d1`) and share playing their disliked action (`df`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Observables {
    pub d1: f64,
    pub df: f64,
}

pub fn observables(s: &PopulationState) -> Observables {
    let n = s.n();
    if n == 0 {
        return Observables { d1: 0.0, df: 0.0 };
    }
    let ones = s.actions().iter().filter(|x| x.is_one()).count();
    let frustrated = s
        .actions()
        .iter()
        .zip(s.preferences())
        .filter(|(x, t)| **x != t.liked())
        .count();
    Observables {
        d1: ones as f64 / n as f64,
        df: frustrated as f64 / n as f64,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EquilibriumClass {
    #[serde(rename = "SS")]
    SatisfactorySpecialized,
    #[serde(rename = "FS")]
    FrustratedSpecialized,
    #[serde(rename = "SH")]
    SatisfactoryHybrid,
    #[serde(rename = "FH")]
    FrustratedHybrid,
    #[serde(rename = "NE")]
    NotAnEquilibrium,
}

impl EquilibriumClass {
    pub const ALL: [EquilibriumClass; 5] = [
        EquilibriumClass::SatisfactorySpecialized,
        EquilibriumClass::FrustratedSpecialized,
        EquilibriumClass::SatisfactoryHybrid,
        EquilibriumClass::FrustratedHybrid,
        EquilibriumClass::NotAnEquilibrium,
    ];

    pub fn label(self) -> &'static str {
        match self {
            EquilibriumClass::SatisfactorySpecialized => "SS",
            EquilibriumClass::FrustratedSpecialized => "FS",
            EquilibriumClass::SatisfactoryHybrid => "SH",
            EquilibriumClass::FrustratedHybrid => "FH",
            EquilibriumClass::NotAnEquilibrium => "NE",
        }
    }

    pub fn is_satisfactory(self) -> bool {
        matches!(
            self,
            EquilibriumClass::SatisfactorySpecialized | EquilibriumClass::SatisfactoryHybrid
        )
    }

    pub fn is_hybrid(self) -> bool {
        matches!(
            self,
            EquilibriumClass::SatisfactoryHybrid | EquilibriumClass::FrustratedHybrid
        )
    }

    pub fn is_specialized(self) -> bool {
        matches!(
            self,
            EquilibriumClass::SatisfactorySpecialized | EquilibriumClass::FrustratedSpecialized
        )
    }
}

impl fmt::Display for EquilibriumClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for EquilibriumClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EquilibriumClass::ALL
            .into_iter()
            .find(|c| c.label() == s)
            .ok_or_else(|| Error::config(format!("unknown equilibrium class `{s}`")))
    }
}

/// True when every agent already plays its complete-information best response.
pub fn is_best_response_fixed_point(s: &PopulationState, p: &PayoffParams, g: GameKind) -> bool {
    (0..s.n()).all(|i| best_response_complete(s.preferences()[i], s.neighborhood(i), p, g) == s.actions()[i])
}

/// Specialized when all actions agree, satisfactory when nobody is frustrated.
///
/// With `require_nash`, a profile that is not a best-response fixed point is
/// reported as [`EquilibriumClass::NotAnEquilibrium`].
pub fn classify(s: &PopulationState, p: &PayoffParams, g: GameKind, require_nash: bool) -> EquilibriumClass {
    if require_nash && !is_best_response_fixed_point(s, p, g) {
        return EquilibriumClass::NotAnEquilibrium;
    }
    classify_profile(s.preferences(), s.actions())
}

pub(crate) fn classify_profile(preferences: &[Preference], actions: &[Action]) -> EquilibriumClass {
    let specialized = actions.windows(2).all(|w| w[0] == w[1]);
    let satisfactory = actions.iter().zip(preferences).all(|(x, t)| *x == t.liked());
    match (satisfactory, specialized) {
        (true, true) => EquilibriumClass::SatisfactorySpecialized,
        (false, true) => EquilibriumClass::FrustratedSpecialized,
        (true, false) => EquilibriumClass::SatisfactoryHybrid,
        (false, false) => EquilibriumClass::FrustratedHybrid,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NashCheck {
    pub is_nash: bool,
    /// Agents that would strictly gain by switching action.
    pub violators: Vec<usize>,
}

/// Compares every agent's payoff against its unilateral deviation.
///
/// Gains within [`TIE_TOLERANCE`] (relative) are not counted.
pub fn verify_nash_bruteforce(s: &PopulationState, p: &PayoffParams, g: GameKind) -> NashCheck {
    let violators: Vec<usize> = (0..s.n())
        .filter(|&i| {
            let theta = s.preferences()[i];
            let x = s.actions()[i];
            let stats = s.neighborhood(i);
            let current = payoff(theta, x, stats, p, g);
            let deviation = payoff(theta, x.flip(), stats, p, g);
            deviation - current > TIE_TOLERANCE * current.abs().max(deviation.abs()).max(1.0)
        })
        .collect();
    NashCheck {
        is_nash: violators.is_empty(),
        violators,
    }
}

/// All pure Nash profiles of the game on `g`, in increasing bit order
/// (agent 0 is the lowest bit), each with its class.
pub fn enumerate_equilibria(
    g: &Arc<Graph>,
    preferences: &[Preference],
    p: &PayoffParams,
    kind: GameKind,
) -> Result<Vec<(Vec<Action>, EquilibriumClass)>> {
    let n = g.n();
    if n > MAX_ENUMERATION_NODES {
        return Err(Error::TooLarge {
            n,
            max: MAX_ENUMERATION_NODES,
        });
    }
    let mut state = PopulationState::new(Arc::clone(g), preferences.to_vec(), vec![Action::Zero; n])?;
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << n) {
        let actions: Vec<Action> = (0..n).map(|i| Action::from_bit(mask >> i & 1 == 1)).collect();
        state = state.with_actions(actions)?;
        if verify_nash_bruteforce(&state, p, kind).is_nash {
            let class = classify_profile(state.preferences(), state.actions());
            out.push((state.actions().to_vec(), class));
        }
    }
    Ok(out)
}
