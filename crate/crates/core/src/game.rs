//! Payoffs, decision thresholds and pure best responses.
//!
//! An agent with preference `theta` playing `x` against `k` neighbors of whom
//! `chi` play action 1 earns
//!
//! ```text
//! u = lambda(theta, x) * (1 + matches)       coordination
//! u = lambda(theta, x) * (1 + mismatches)    anticoordination
//! ```
//!
//! with `lambda = alpha` on the liked action and `beta` otherwise.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance under which two payoffs (or a count and a threshold)
/// are considered equal. Equal comparisons resolve toward the liked action.
pub const TIE_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Action {
    Zero,
    One,
}

impl Action {
    pub const ALL: [Action; 2] = [Action::Zero, Action::One];

    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Action::One
        } else {
            Action::Zero
        }
    }

    pub fn is_one(self) -> bool {
        self == Action::One
    }

    pub fn flip(self) -> Self {
        match self {
            Action::Zero => Action::One,
            Action::One => Action::Zero,
        }
    }

    pub fn as_u8(self) -> u8 {
        self as u8
    }
}

/// The action an agent intrinsically likes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Preference {
    Zero,
    One,
}

impl Preference {
    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Preference::One
        } else {
            Preference::Zero
        }
    }

    pub fn liked(self) -> Action {
        match self {
            Preference::Zero => Action::Zero,
            Preference::One => Action::One,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Preference::Zero => Preference::One,
            Preference::One => Preference::Zero,
        }
    }

    pub fn as_u8(self) -> u8 {
        self as u8
    }
}

/// Rewards for the liked (`alpha`) and disliked (`beta`) action.
///
/// Always satisfies `0 < beta < alpha < 2 * beta`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PayoffParams {
    alpha: f64,
    beta: f64,
}

impl PayoffParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if 0.0 < beta && beta < alpha && alpha < 2.0 * beta {
            Ok(PayoffParams { alpha, beta })
        } else {
            Err(Error::config(format!(
                "rewards (alpha={alpha}, beta={beta}) violate 0 < beta < alpha < 2*beta"
            )))
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn ratio(&self) -> f64 {
        self.alpha / self.beta
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GameKind {
    /// Payoff grows with neighbors playing the same action (delta = 1).
    #[serde(rename = "cg", alias = "coordination")]
    Coordination,
    /// Payoff grows with neighbors playing the other action (delta = 0).
    #[serde(rename = "ag", alias = "anticoordination")]
    Anticoordination,
}

impl GameKind {
    pub fn delta(self) -> u8 {
        match self {
            GameKind::Coordination => 1,
            GameKind::Anticoordination => 0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            GameKind::Coordination => "cg",
            GameKind::Anticoordination => "ag",
        }
    }
}

impl fmt::Display for GameKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for GameKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cg" | "coordination" => Ok(GameKind::Coordination),
            "ag" | "anticoordination" => Ok(GameKind::Anticoordination),
            other => Err(Error::config(format!("unknown game `{other}` (expected cg or ag)"))),
        }
    }
}

/// Degree `k` and number `chi` of neighbors playing action 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NeighborhoodStats {
    k: usize,
    chi: usize,
}

impl NeighborhoodStats {
    pub fn new(k: usize, chi: usize) -> Result<Self> {
        if chi > k {
            return Err(Error::config(format!("chi={chi} exceeds degree k={k}")));
        }
        Ok(NeighborhoodStats { k, chi })
    }

    pub(crate) fn new_unchecked(k: usize, chi: usize) -> Self {
        debug_assert!(chi <= k);
        NeighborhoodStats { k, chi }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn chi(&self) -> usize {
        self.chi
    }
}

pub fn lambda_reward(theta: Preference, x: Action, p: &PayoffParams) -> f64 {
    if theta.liked() == x {
        p.alpha
    } else {
        p.beta
    }
}

pub fn payoff(
    theta: Preference,
    x: Action,
    stats: NeighborhoodStats,
    p: &PayoffParams,
    g: GameKind,
) -> f64 {
    let matches = if x.is_one() {
        stats.chi
    } else {
        stats.k - stats.chi
    };
    let counted = match g {
        GameKind::Coordination => matches,
        GameKind::Anticoordination => stats.k - matches,
    };
    lambda_reward(theta, x, p) * (1 + counted) as f64
}

/// `(beta*k - (alpha - beta)) / (alpha + beta)`
pub fn lower_threshold(k: usize, p: &PayoffParams) -> f64 {
    (p.beta * k as f64 - (p.alpha - p.beta)) / (p.alpha + p.beta)
}

/// `(alpha*k + (alpha - beta)) / (alpha + beta)`
pub fn upper_threshold(k: usize, p: &PayoffParams) -> f64 {
    (p.alpha * k as f64 + (p.alpha - p.beta)) / (p.alpha + p.beta)
}

/// Whether an agent keeps its liked action against a (possibly expected)
/// count `chi` of 1-players among `k` neighbors.
///
/// Comparisons use the cross-multiplied form, e.g. `chi*(alpha+beta)` vs.
/// `beta*k - (alpha-beta)`, and count differences within
/// [`TIE_TOLERANCE`] as ties.
fn keeps_liked(theta: Preference, k: usize, chi: f64, p: &PayoffParams, g: GameKind) -> bool {
    let (a, b) = (p.alpha, p.beta);
    let k = k as f64;
    let scaled_chi = chi * (a + b);
    // chi >= lower threshold
    let above_lower = scaled_chi - (b * k - (a - b));
    // chi <= upper threshold
    let below_upper = (a * k + (a - b)) - scaled_chi;
    let margin = match (g, theta) {
        (GameKind::Coordination, Preference::One) => above_lower,
        (GameKind::Coordination, Preference::Zero) => below_upper,
        (GameKind::Anticoordination, Preference::One) => below_upper,
        (GameKind::Anticoordination, Preference::Zero) => above_lower,
    };
    let scale = (a + b) * (k + 1.0);
    margin >= -TIE_TOLERANCE * scale
}

/// Myopic best response to the neighbors' current actions.
pub fn best_response_complete(
    theta: Preference,
    stats: NeighborhoodStats,
    p: &PayoffParams,
    g: GameKind,
) -> Action {
    if keeps_liked(theta, stats.k, stats.chi as f64, p, g) {
        theta.liked()
    } else {
        theta.liked().flip()
    }
}

/// Best response when only the degree and the population share `rho` of
/// 1-preference agents are known: the expected count `rho * k` stands in for
/// the observed one.
pub fn best_response_incomplete(
    theta: Preference,
    k: usize,
    rho: f64,
    p: &PayoffParams,
    g: GameKind,
) -> Action {
    let expected_chi = rho * k as f64;
    if keeps_liked(theta, k, expected_chi, p, g) {
        theta.liked()
    } else {
        theta.liked().flip()
    }
}

/// Predicted outcome class of the symmetric incomplete-information
/// equilibrium in the coordination game.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    /// `beta/(alpha+beta) <= rho <= alpha/(alpha+beta)`: everyone satisfied.
    SymmetricSatisfactory,
    /// `rho > alpha/(alpha+beta)`: all 1-preference agents satisfied.
    OnesSatisfied,
    /// `rho < beta/(alpha+beta)`: all 0-preference agents satisfied.
    ZerosSatisfied,
}

pub fn regime_predict(rho: f64, p: &PayoffParams) -> Regime {
    let sum = p.alpha + p.beta;
    if rho > p.alpha / sum {
        Regime::OnesSatisfied
    } else if rho < p.beta / sum {
        Regime::ZerosSatisfied
    } else {
        Regime::SymmetricSatisfactory
    }
}
