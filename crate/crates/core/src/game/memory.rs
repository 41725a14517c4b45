//! Finite memory and the product game it induces.

use super::{ActionProfile, Game, GameDescription, StateDesc, StateId, TransitionDesc};

/// A memory with states `0..size`, updated on every step from the current
/// memory, state and profile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MemoryStructure {
    pub size: usize,
    pub initial: usize,
    // [memory][state][profile code]
    update: Vec<Vec<Vec<usize>>>,
}

impl MemoryStructure {
    /// Panics if `f` returns a memory state outside `0..size`.
    pub fn from_fn(g: &Game, size: usize, initial: usize, f: impl Fn(usize, StateId, &ActionProfile) -> usize) -> Self {
        assert!(initial < size, "initial memory out of range");
        let update = (0..size)
            .map(|m| {
                (0..g.num_states())
                    .map(|s| {
                        g.profiles(s)
                            .map(|a| {
                                let n = f(m, s, &a);
                                assert!(n < size, "memory update out of range");
                                n
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        MemoryStructure { size, initial, update }
    }

    pub fn update(&self, m: usize, s: StateId, code: usize) -> usize {
        self.update[m][s][code]
    }
}

/// Name of the product state `(s, m)`.
pub fn product_state_name(g: &Game, s: StateId, m: usize) -> String {
    format!("{}#{m}", g.name(s))
}

/// The game on `S x M`; state `(s, m)` has index `s * size + m`. Actions and
/// rewards are copied from `s`, and the initial state is `(s0, m0)`.
pub fn memory_product(g: &Game, mem: &MemoryStructure) -> Game {
    let mut states = Vec::new();
    let mut transitions = Vec::new();
    for s in 0..g.num_states() {
        for m in 0..mem.size {
            states.push(StateDesc {
                name: product_state_name(g, s, m),
                actions: g.state(s).actions.clone(),
                rewards: g.rewards(s).to_vec(),
            });
            for code in 0..g.profile_count(s) {
                let a = g.decode(s, code);
                transitions.push(TransitionDesc {
                    from: product_state_name(g, s, m),
                    profile: g.profile_labels(s, &a),
                    to: product_state_name(g, g.next_code(s, code), mem.update(m, s, code)),
                });
            }
        }
    }
    let desc = GameDescription {
        players: g.players(),
        initial: g.initial().map(|s| product_state_name(g, s, mem.initial)),
        states,
        transitions,
    };
    Game::from_description(&desc).expect("product of a valid game is valid")
}
