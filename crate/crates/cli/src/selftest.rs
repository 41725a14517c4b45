//! Random small games on which the independent decision paths must agree.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::json;

use limitavg::game::{Game, GameBuilder, PositionalProfile, StationaryProfile};
use limitavg::posne::{decide_pos_ne, verify_positional, DEFAULT_BUDGET};
use limitavg::purene::decide_pure_ne;
use limitavg::statne::verify_stationary_ne;
use limitavg::{ExtRational, Rational};

use crate::profile_summary;
use crate::verdict::{Answer, Verdict};

const LABELS: [&str; 2] = ["a", "b"];

fn random_game(rng: &mut StdRng) -> Game {
    let players = rng.gen_range(1..=3);
    let n = rng.gen_range(1..=4);
    let mut b = GameBuilder::new(players);
    let mut action_counts = Vec::new();
    for s in 0..n {
        let counts: Vec<usize> = (0..players).map(|_| rng.gen_range(1..=2)).collect();
        let actions: Vec<&[&str]> = counts.iter().map(|&c| &LABELS[..c]).collect();
        let rewards = (0..players).map(|_| Rational::from_int(rng.gen_range(-2..=2))).collect();
        b.state(&format!("s{s}"), &actions, rewards);
        action_counts.push(counts);
    }
    for (s, counts) in action_counts.iter().enumerate() {
        let mut prof = vec![0; players];
        loop {
            let labels: Vec<&str> = prof.iter().map(|&a| LABELS[a]).collect();
            b.transition(&format!("s{s}"), &labels, &format!("s{}", rng.gen_range(0..n)));
            let Some(p) = (0..players).find(|&p| prof[p] + 1 < counts[p]) else { break };
            prof[p] += 1;
            prof[..p].iter_mut().for_each(|a| *a = 0);
        }
    }
    b.initial("s0");
    b.build().expect("random games are well formed")
}

fn random_bound(rng: &mut StdRng, k: usize) -> Vec<ExtRational> {
    (0..k)
        .map(|_| {
            if rng.gen_bool(0.5) {
                ExtRational::NegInf
            } else {
                ExtRational::Finite(Rational::new(rng.gen_range(-4..=4), 2))
            }
        })
        .collect()
}

fn random_positional(rng: &mut StdRng, g: &Game) -> PositionalProfile {
    let mut sigma = PositionalProfile::first(g);
    for s in 0..g.num_states() {
        for p in 0..g.players() {
            sigma.set(s, p, rng.gen_range(0..g.num_actions(s, p)));
        }
    }
    sigma
}

#[derive(Default)]
struct Tally {
    positional_found: usize,
    degenerate_ne: usize,
}

/// One round; returns a description of every disagreement found.
fn round(rng: &mut StdRng, tally: &mut Tally) -> Vec<String> {
    let g = random_game(rng);
    let k = g.players();
    let s0 = 0;
    let x = random_bound(rng, k);
    let y = vec![ExtRational::PosInf; k];
    let mut problems = Vec::new();

    let search = decide_pos_ne(&g, s0, &x, &y, DEFAULT_BUDGET);
    if let Some(v) = &search.found {
        tally.positional_found += 1;
        let again = verify_positional(&g, s0, &v.profile, &x, &y);
        if !(again.is_ne && again.in_box) {
            problems.push(format!("positional witness {} does not verify", profile_summary(&g, &v.profile)));
        }
        if decide_pure_ne(&g, s0, &x, &y).is_none() {
            problems.push("a positional equilibrium exists but the pure procedure found none".into());
        }
    }

    let sigma = random_positional(rng, &g);
    let pos = verify_positional(&g, s0, &sigma, &x, &y);
    tally.degenerate_ne += usize::from(pos.is_ne);
    match verify_stationary_ne(&g, s0, &StationaryProfile::from_positional(&g, &sigma), &x, &y) {
        Ok(stat) => {
            if stat.payoff != pos.payoff || stat.is_ne != pos.is_ne || stat.in_box != pos.in_box {
                problems.push(format!(
                    "stationary and positional verification disagree on {}",
                    profile_summary(&g, &sigma)
                ));
            }
        }
        Err(e) => problems.push(format!("degenerate profile rejected: {e}")),
    }
    problems
}

pub(crate) fn run(seed: u64, rounds: usize) -> (Verdict, Vec<String>) {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut problems = Vec::new();
    let mut tally = Tally::default();
    for r in 0..rounds {
        for p in round(&mut rng, &mut tally) {
            problems.push(format!("round {r}: {p}"));
        }
    }
    let answer = if problems.is_empty() { Answer::Verified } else { Answer::Rejected };
    let payload = json!({
        "seed": seed,
        "rounds": rounds,
        "positional_equilibria": tally.positional_found,
        "random_profiles_in_equilibrium": tally.degenerate_ne,
        "problems": problems,
    });
    let mut summary = problems.clone();
    summary.push(format!(
        "{rounds} rounds ({} with a positional equilibrium, {} random profiles in equilibrium), {} disagreements",
        tally.positional_found,
        tally.degenerate_ne,
        problems.len()
    ));
    (Verdict::new("selftest", answer, payload), summary)
}
