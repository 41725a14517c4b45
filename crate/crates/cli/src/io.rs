//! File formats: games, profiles and weighted graphs as JSON, plus the
//! plain-text formats of the generators (DIMACS CNF, counter machines).

use std::collections::BTreeMap;

use limitavg::game::{Game, GameDescription, InvalidGame, PositionalProfile, ProfileError, StationaryProfile};
use limitavg::graph::WeightedGraph;
use limitavg::Rational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("line {line}, column {column}: {msg}")]
    Json { line: usize, column: usize, msg: String },
    #[error("{0}")]
    Game(#[from] InvalidGame),
    #[error("{0}")]
    Profile(#[from] ProfileError),
    #[error("{0}")]
    Format(String),
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        IoError::Json { line: e.line(), column: e.column(), msg: e.to_string() }
    }
}

pub fn read_file(path: &str) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|source| IoError::Read { path: path.to_string(), source })
}

pub fn parse_game(text: &str) -> Result<Game, IoError> {
    let desc: GameDescription = serde_json::from_str(text)?;
    Ok(Game::from_description(&desc)?)
}

pub fn game_to_json(g: &Game) -> String {
    serde_json::to_string_pretty(&g.to_description()).expect("descriptions serialize")
}

/// One `(state, player)` entry of a profile file: either a single action
/// or a distribution over action labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileEntry {
    pub state: String,
    pub player: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dist: Option<BTreeMap<String, Rational>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileFile {
    pub entries: Vec<ProfileEntry>,
}

/// Reads a stationary profile. Every state and player with more than one
/// action must have an entry; singleton action sets may be omitted.
pub fn parse_profile(g: &Game, text: &str) -> Result<StationaryProfile, IoError> {
    let file: ProfileFile = serde_json::from_str(text)?;
    let mut dist: Vec<Vec<Option<Vec<Rational>>>> = (0..g.num_states())
        .map(|s| (0..g.players()).map(|p| (g.num_actions(s, p) == 1).then(|| vec![Rational::one()])).collect())
        .collect();
    let mut seen = std::collections::HashSet::new();
    for e in &file.entries {
        let s = g.id(&e.state).ok_or_else(|| IoError::Format(format!("unknown state {}", e.state)))?;
        if e.player >= g.players() {
            return Err(IoError::Format(format!("player {} out of range", e.player)));
        }
        if !seen.insert((s, e.player)) {
            return Err(IoError::Format(format!("duplicate entry for {} and player {}", e.state, e.player)));
        }
        let label = |a: &str| {
            g.action_index(s, e.player, a)
                .ok_or_else(|| IoError::Format(format!("no action {a} for player {} at {}", e.player, e.state)))
        };
        let mut d = vec![Rational::zero(); g.num_actions(s, e.player)];
        match (&e.action, &e.dist) {
            (Some(a), None) => d[label(a)?] = Rational::one(),
            (None, Some(m)) => {
                for (a, q) in m {
                    d[label(a)?] = q.clone();
                }
            }
            _ => {
                return Err(IoError::Format(format!(
                    "entry for {} and player {} needs exactly one of `action` and `dist`",
                    e.state, e.player
                )))
            }
        }
        dist[s][e.player] = Some(d);
    }
    let mut out = Vec::with_capacity(g.num_states());
    for (s, row) in dist.into_iter().enumerate() {
        let mut r = Vec::with_capacity(g.players());
        for (p, d) in row.into_iter().enumerate() {
            r.push(d.ok_or_else(|| IoError::Format(format!("no entry for {} and player {p}", g.name(s))))?);
        }
        out.push(r);
    }
    let sigma = StationaryProfile::from_distributions(out);
    sigma.validate(g)?;
    Ok(sigma)
}

/// Reads a profile that must put probability 1 on one action everywhere.
pub fn parse_positional(g: &Game, text: &str) -> Result<PositionalProfile, IoError> {
    let sigma = parse_profile(g, text)?;
    let mut pos = PositionalProfile::first(g);
    for s in 0..g.num_states() {
        for p in 0..g.players() {
            let a = (0..g.num_actions(s, p))
                .find(|&a| sigma.prob(s, p, a) == &Rational::one())
                .ok_or_else(|| IoError::Format(format!("{} player {p}: not a pure choice", g.name(s))))?;
            pos.set(s, p, a);
        }
    }
    Ok(pos)
}

/// Entries for every state and player with more than one action.
pub fn profile_to_json(g: &Game, sigma: &StationaryProfile) -> String {
    let mut entries = Vec::new();
    for s in 0..g.num_states() {
        for p in 0..g.players() {
            if g.num_actions(s, p) < 2 {
                continue;
            }
            let d: BTreeMap<String, Rational> = g
                .actions(s, p)
                .iter()
                .enumerate()
                .filter(|(a, _)| !sigma.prob(s, p, *a).is_zero())
                .map(|(a, l)| (l.clone(), sigma.prob(s, p, a).clone()))
                .collect();
            let entry = match d.iter().find(|(_, q)| **q == Rational::one()) {
                Some((l, _)) => ProfileEntry { state: g.name(s).into(), player: p, action: Some(l.clone()), dist: None },
                None => ProfileEntry { state: g.name(s).into(), player: p, action: None, dist: Some(d) },
            };
            entries.push(entry);
        }
    }
    serde_json::to_string_pretty(&ProfileFile { entries }).expect("profiles serialize")
}

pub fn positional_to_json(g: &Game, sigma: &PositionalProfile) -> String {
    profile_to_json(g, &StationaryProfile::from_positional(g, sigma))
}

/// Weighted graph file: vertex names, edges as name pairs, and one weight
/// vector per vertex. `weights` may be omitted for an unweighted graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String)>,
    #[serde(default)]
    pub weights: Vec<Vec<Rational>>,
}

pub fn parse_graph(text: &str) -> Result<WeightedGraph, IoError> {
    let file: GraphFile = serde_json::from_str(text)?;
    if !file.weights.is_empty() && file.weights.len() != file.vertices.len() {
        return Err(IoError::Format(format!(
            "{} weight vectors for {} vertices",
            file.weights.len(),
            file.vertices.len()
        )));
    }
    let dims = file.weights.first().map_or(0, Vec::len);
    let mut g = WeightedGraph::new(dims);
    for (j, name) in file.vertices.iter().enumerate() {
        if g.id(name).is_some() {
            return Err(IoError::Format(format!("duplicate vertex {name}")));
        }
        let w = file.weights.get(j).cloned().unwrap_or_default();
        if w.len() != dims {
            return Err(IoError::Format(format!("vertex {name} has {} weights, expected {dims}", w.len())));
        }
        g.add_vertex(name, w);
    }
    for (a, b) in &file.edges {
        let id = |n: &str| g.id(n).ok_or_else(|| IoError::Format(format!("edge mentions unknown vertex {n}")));
        let (u, v) = (id(a)?, id(b)?);
        g.add_edge(u, v);
    }
    Ok(g)
}

pub fn graph_to_json(g: &WeightedGraph) -> String {
    let n = g.num_vertices();
    let file = GraphFile {
        vertices: (0..n).map(|v| g.name(v).to_string()).collect(),
        edges: g.edges().iter().map(|&(u, v)| (g.name(u).into(), g.name(v).into())).collect(),
        weights: if g.dims() == 0 { Vec::new() } else { (0..n).map(|v| g.weights(v).to_vec()).collect() },
    };
    serde_json::to_string_pretty(&file).expect("graphs serialize")
}
