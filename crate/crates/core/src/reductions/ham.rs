use crate::game::{Game, ThresholdVector, TurnBasedBuilder};
use crate::graph::WeightedGraph;
use crate::numerics::{ExtRational, Rational};

use super::ReductionError;

/// Player 0 walks the graph and always earns 1; player 1 earns 1 only at
/// `v0` and player 2 everywhere else. Vertex weights of `graph` are ignored.
pub fn gen_hamiltonian_game(graph: &WeightedGraph, v0: usize) -> Result<Game, ReductionError> {
    let mut b = TurnBasedBuilder::new(3);
    for v in 0..graph.num_vertices() {
        if graph.out_edges(v).is_empty() {
            return Err(ReductionError::DeadEnd(graph.name(v).to_string()));
        }
        let at_v0 = v == v0;
        let r = vec![
            Rational::one(),
            if at_v0 { Rational::one() } else { Rational::zero() },
            if at_v0 { Rational::zero() } else { Rational::one() },
        ];
        b.state(graph.name(v), 0, r);
    }
    for &(u, v) in graph.edges() {
        b.edge(graph.name(u), graph.name(v));
    }
    b.initial(graph.name(v0));
    Ok(b.build()?)
}

/// Lower bounds `(1, 1/n, (n-1)/n)`.
pub fn ham_thresholds(n: usize) -> ThresholdVector {
    let n = n as i64;
    vec![
        ExtRational::Finite(Rational::one()),
        ExtRational::Finite(Rational::new(1, n)),
        ExtRational::Finite(Rational::new(n - 1, n)),
    ]
}
