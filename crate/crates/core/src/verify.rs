//! Built-in oracle and property checks behind `prefnet verify`.

use std::sync::Arc;

use crate::dynamics::{
    imitation_phi, init_population, run, step_best_response, step_proportional_imitation,
    DynamicsSpec, Information, InitPolicy, Termination, UpdateRule,
};
use crate::equilibrium::{enumerate_equilibria, observables, verify_nash_bruteforce};
use crate::experiments::{default_grid, BetaRule};
use crate::game::{
    best_response_complete, lower_threshold, payoff, upper_threshold, Action, GameKind,
    NeighborhoodStats, PayoffParams, Preference, TIE_TOLERANCE,
};
use crate::graph::{generate_ba, generate_er};
use crate::seed;

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn outcome(name: &'static str, failures: usize, checked: usize) -> CheckOutcome {
    CheckOutcome {
        name,
        passed: failures == 0 && checked > 0,
        detail: format!("{failures} failures in {checked} cases"),
    }
}

/// The 8x8 reward grid of the default sweep.
pub fn reward_grid() -> Vec<PayoffParams> {
    let cfg = default_grid();
    debug_assert_eq!(cfg.beta_rule, BetaRule::EvenlySpaced(8));
    cfg.reward_pairs().expect("default grid is valid")
}

const GAMES: [GameKind; 2] = [GameKind::Coordination, GameKind::Anticoordination];

fn argmax_with_liked_ties(theta: Preference, s: NeighborhoodStats, p: &PayoffParams, g: GameKind) -> Action {
    let liked = theta.liked();
    let keep = payoff(theta, liked, s, p, g);
    let switch = payoff(theta, liked.flip(), s, p, g);
    if switch - keep > TIE_TOLERANCE * keep.max(switch).max(1.0) {
        liked.flip()
    } else {
        liked
    }
}

pub fn check_threshold_argmax() -> CheckOutcome {
    let (mut checked, mut failures) = (0, 0);
    for p in reward_grid() {
        for g in GAMES {
            for theta in [Preference::Zero, Preference::One] {
                for k in 0..=30 {
                    for chi in 0..=k {
                        let s = NeighborhoodStats::new(k, chi).expect("chi <= k");
                        checked += 1;
                        if best_response_complete(theta, s, &p, g) != argmax_with_liked_ties(theta, s, &p, g) {
                            failures += 1;
                        }
                    }
                }
            }
        }
    }
    outcome("threshold rule equals payoff argmax", failures, checked)
}

pub fn check_threshold_identity() -> CheckOutcome {
    let (mut checked, mut failures) = (0, 0);
    for p in reward_grid() {
        for k in 0..=30 {
            checked += 1;
            if (lower_threshold(k, &p) + upper_threshold(k, &p) - k as f64).abs() > 1e-12 {
                failures += 1;
            }
        }
    }
    outcome("lower + upper threshold = k", failures, checked)
}

/// Complete-information fixed points on small graphs are Nash and appear in
/// the exhaustive equilibrium list.
pub fn check_nash_soundness(instances: usize) -> CheckOutcome {
    let spec = DynamicsSpec::new(UpdateRule::BestResponseComplete);
    let grid = reward_grid();
    let (mut checked, mut failures) = (0, 0);
    for i in 0..instances as u64 {
        let n = 4 + (i % 9) as usize;
        let graph = if i % 2 == 0 {
            generate_er(n, 2.5_f64.min((n - 1) as f64), seed::substream(i, 10))
        } else {
            generate_ba(n, 1 + (i as usize / 2) % 2, seed::substream(i, 11))
        }
        .expect("valid small topology");
        let graph = Arc::new(graph);
        let p = grid[(i as usize * 7) % grid.len()];
        let rho = [0.25, 0.5, 0.75][(i % 3) as usize];
        for g in GAMES {
            let r = run(Arc::clone(&graph), &spec, &p, g, rho, InitPolicy::UniformRandomAction, i)
                .expect("valid run");
            if r.termination != Termination::FixedPoint {
                continue;
            }
            checked += 1;
            let nash = verify_nash_bruteforce(&r.final_state, &p, g).is_nash;
            let listed = enumerate_equilibria(&graph, r.final_state.preferences(), &p, g)
                .expect("n <= 12")
                .iter()
                .any(|(x, _)| x.as_slice() == r.final_state.actions());
            if !(nash && listed) {
                failures += 1;
            }
        }
    }
    outcome("best-response fixed points are Nash", failures, checked)
}

pub fn check_imitation_absorbing() -> CheckOutcome {
    let (mut checked, mut failures) = (0, 0);
    let p = PayoffParams::new(0.51, 0.5).expect("valid");
    for s in 0..10u64 {
        let graph = Arc::new(generate_er(100, 10.0, s).expect("valid"));
        let pop = init_population(Arc::clone(&graph), 0.5, InitPolicy::UniformRandomAction, s)
            .expect("valid")
            .with_actions(vec![Action::One; 100])
            .expect("sizes match");
        let phi = imitation_phi(&graph, &p);
        let mut rng = seed::rng(s);
        for g in GAMES {
            let mut cur = pop.clone();
            for _ in 0..100 {
                let (next, changed) =
                    step_proportional_imitation(&cur, &p, g, phi, 1.0, &mut rng).expect("phi valid");
                checked += 1;
                if changed != 0 {
                    failures += 1;
                }
                cur = next;
            }
        }
    }
    outcome("homogeneous profiles absorb imitation", failures, checked)
}

pub fn check_incomplete_one_step() -> CheckOutcome {
    let (mut checked, mut failures) = (0, 0);
    for (idx, p) in reward_grid().into_iter().enumerate().step_by(5) {
        let s = idx as u64;
        let graph = Arc::new(generate_er(100, 10.0, s).expect("valid"));
        for g in GAMES {
            for rho in [0.0, 0.3, 0.5, 0.8, 1.0] {
                let pop = init_population(Arc::clone(&graph), rho, InitPolicy::UniformRandomAction, s)
                    .expect("valid");
                let (once, _) = step_best_response(&pop, &p, g, Information::Incomplete(rho));
                let (_, changed) = step_best_response(&once, &p, g, Information::Incomplete(rho));
                checked += 1;
                if changed != 0 {
                    failures += 1;
                }
                if g == GameKind::Anticoordination && rho == 1.0 && graph.min_degree() >= 1 {
                    let obs = observables(&once);
                    checked += 1;
                    if obs.d1 != 0.0 || obs.df != 1.0 {
                        failures += 1;
                    }
                }
            }
        }
    }
    outcome("incomplete-information best response settles in one step", failures, checked)
}

pub fn run_all() -> Vec<CheckOutcome> {
    vec![
        check_threshold_argmax(),
        check_threshold_identity(),
        check_nash_soundness(100),
        check_imitation_absorbing(),
        check_incomplete_one_step(),
    ]
}

#[cfg(test)]
mod tests {
    #[test]
    fn all_checks_pass() {
        for c in super::run_all() {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}
