use crate::game::{sparse_rewards, Game, GameBuilder, TurnBasedBuilder};
use crate::graph::WeightedGraph;
use crate::numerics::Rational;

use super::{gen_hamiltonian_game, gen_sat_game, gen_sqrt_gadget, CnfFormula, ReductionError};

pub const BUILTIN_NAMES: [&str; 7] = ["G1", "G2", "fig3", "fig4", "Gp(p)", "satDemo", "hamTriangle"];

fn int(n: i64) -> Rational {
    Rational::from_int(n)
}

/// The built-in games by name. `Gp(p)` takes a rational argument, as in
/// `Gp(1/4)`.
pub fn builtin_example(name: &str) -> Result<Game, ReductionError> {
    let g = match name {
        "G1" => hide_or_run(
            vec![int(0), int(0)],
            vec![int(1), int(-1)],
            vec![int(-1), int(1)],
        ),
        "G2" => hide_or_run(
            vec![int(0), int(1)],
            vec![int(1), int(0)],
            vec![int(0), int(1)],
        ),
        "fig3" => fig3(),
        "fig4" => fig4(),
        "satDemo" => {
            let phi = CnfFormula::new(2, vec![vec![1, -2], vec![2]])?;
            return gen_sat_game(&phi);
        }
        "hamTriangle" => {
            let mut tri = WeightedGraph::new(0);
            for v in ["a", "b", "c"] {
                tri.add_vertex(v, Vec::new());
            }
            tri.add_edge(0, 1);
            tri.add_edge(1, 2);
            tri.add_edge(2, 0);
            return gen_hamiltonian_game(&tri, 0);
        }
        _ => {
            if let Some(arg) = name.strip_prefix("Gp(").and_then(|r| r.strip_suffix(')')) {
                let p: Rational = arg
                    .trim()
                    .parse()
                    .map_err(|_| ReductionError::UnknownExample(name.to_string()))?;
                return Ok(gen_sqrt_gadget(&p)?.game);
            }
            return Err(ReductionError::UnknownExample(name.to_string()));
        }
    };
    Ok(g?)
}

/// Two players each choose a or b at `s1`: matching on a repeats, matching
/// on b ends in `dead`, and a mismatch ends in `safe`.
fn hide_or_run(
    limbo: Vec<Rational>,
    safe: Vec<Rational>,
    dead: Vec<Rational>,
) -> Result<Game, crate::game::InvalidGame> {
    let mut b = GameBuilder::new(2);
    b.state("s1", &[&["a", "b"], &["a", "b"]], limbo)
        .terminal("safe", safe)
        .terminal("dead", dead)
        .transition("s1", &["a", "a"], "s1")
        .transition("s1", &["a", "b"], "safe")
        .transition("s1", &["b", "a"], "safe")
        .transition("s1", &["b", "b"], "dead")
        .initial("s1");
    b.build()
}

fn fig3() -> Result<Game, crate::game::InvalidGame> {
    let r = |e: &[(usize, i64)]| sparse_rewards(3, &e.iter().map(|&(p, v)| (p, int(v))).collect::<Vec<_>>());
    let mut b = TurnBasedBuilder::new(3);
    b.state("s0", 1, r(&[]))
        .state("s1", 2, r(&[]))
        .state("s2", 0, r(&[]))
        .terminal("exit0", r(&[(1, 1)]))
        .terminal("exit1", r(&[(2, 1)]))
        .terminal("down", r(&[(0, 1), (1, 2)]))
        .terminal("right", r(&[(0, 1), (2, 2)]))
        .edge("s0", "s1")
        .edge("s0", "exit0")
        .edge("s1", "s2")
        .edge("s1", "exit1")
        .edge("s2", "down")
        .edge("s2", "right")
        .initial("s0");
    b.build()
}

fn fig4() -> Result<Game, crate::game::InvalidGame> {
    let r = |e: &[(usize, i64)]| sparse_rewards(3, &e.iter().map(|&(p, v)| (p, int(v))).collect::<Vec<_>>());
    let mut b = TurnBasedBuilder::new(3);
    b.state("s0", 1, r(&[]))
        .state("s1", 2, r(&[]))
        .state("s2", 0, r(&[]))
        .terminal("goal", r(&[(0, 1)]))
        .terminal("left", r(&[(1, 1)]))
        .terminal("right", r(&[(2, 1)]))
        .edge("s0", "s1")
        .edge("s0", "s2")
        .edge("s1", "goal")
        .edge("s1", "s2")
        .edge("s2", "left")
        .edge("s2", "right")
        .initial("s0");
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::is_terminal_reward;

    #[test]
    fn shapes() {
        let g1 = builtin_example("G1").unwrap();
        assert_eq!((g1.players(), g1.num_states()), (2, 3));
        assert!(is_terminal_reward(&g1));
        let g2 = builtin_example("G2").unwrap();
        assert!(!is_terminal_reward(&g2));
        assert_eq!(builtin_example("fig4").unwrap().num_states(), 6);
        assert_eq!(builtin_example("fig3").unwrap().num_states(), 7);
        assert_eq!(builtin_example("Gp(1/4)").unwrap().players(), 6);
        assert!(builtin_example("nope").is_err());
    }
}
