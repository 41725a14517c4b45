//! The `limitavg` command line: argument grammar, dispatch and reporting.
//!
//! Every command prints a single-line JSON verdict on standard output and a
//! short human summary on standard error. Generators and the constraint
//! exporter print their artifact on standard output instead, unless sent to
//! a file with `--output`.

pub mod io;
mod selftest;
pub mod verdict;

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use limitavg::game::{Game, PositionalProfile, StateId};
use limitavg::graph::WeightedGraph;
use limitavg::mppath::{extract_cycle_witness, feasible_path};
use limitavg::numerics::parse_ext_vector;
use limitavg::posne::{decide_pos_ne, verify_positional, DEFAULT_BUDGET};
use limitavg::purene::{decide_pure_ne, decide_pure_ne_terminal, PureStrategy, PureWitness};
use limitavg::reductions::{
    builtin_example, gen_counter_game, gen_hamiltonian_game, gen_sat_game, gen_sqrt_gadget, gen_sqrtsum_game,
    ham_thresholds, wrap_with_no_ne_gadget, CnfFormula, CounterMachine, NoNeGadget, BUILTIN_NAMES,
};
use limitavg::statne::{export_statne_constraints, verify_stationary_ne, ConstraintCounts};
use limitavg::zerosum::pval_table;
use limitavg::{ExtRational, Rational};

use io::{game_to_json, parse_game, parse_graph, parse_positional, parse_profile, positional_to_json, profile_to_json};
use verdict::{Answer, Verdict};

#[derive(Parser, Debug)]
#[command(name = "limitavg", version, about = "Nash equilibria in multi-player limit-average games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether an equilibrium with payoff in the box exists
    #[command(subcommand)]
    Solve(Solve),
    /// Check a given profile
    #[command(subcommand)]
    Verify(Verify),
    /// Punishment values of every player at every state
    Pval(PvalArgs),
    /// Find a path of a weighted graph whose mean payoffs lie in a box
    Mppath(MppathArgs),
    /// Export decision problems for external solvers
    #[command(subcommand)]
    Export(Export),
    /// Generate games from the hardness constructions
    #[command(subcommand)]
    Gen(Gen),
    /// Print a built-in example game
    Example(ExampleArgs),
    /// Cross-check the solvers against each other on random games
    Selftest(SelftestArgs),
}

#[derive(Args, Debug)]
struct GameArgs {
    /// Game description (JSON)
    #[arg(long)]
    game: String,
    /// Start state; defaults to the game's initial state
    #[arg(long)]
    initial: Option<String>,
}

#[derive(Args, Debug)]
struct BoxArgs {
    /// Lower thresholds, e.g. "1,-inf,1/2"
    #[arg(long, allow_hyphen_values = true)]
    lower: Option<String>,
    /// Upper thresholds, e.g. "inf,inf,1"
    #[arg(long, allow_hyphen_values = true)]
    upper: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Solve {
    /// Pure (history-dependent) equilibria
    Pure {
        #[command(flatten)]
        game: GameArgs,
        #[command(flatten)]
        bounds: BoxArgs,
        /// Use the polynomial procedure for terminal-reward games
        #[arg(long)]
        terminal: bool,
        /// Write the equilibrium play and punishments here
        #[arg(long)]
        witness: Option<String>,
    },
    /// Positional equilibria
    Positional {
        #[command(flatten)]
        game: GameArgs,
        #[command(flatten)]
        bounds: BoxArgs,
        /// Warn when the number of positional profiles exceeds this
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
        /// Write the equilibrium profile here
        #[arg(long)]
        witness: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
enum Verify {
    /// A stationary profile: exact payoffs and best responses
    Stationary {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long)]
        profile: String,
        #[command(flatten)]
        bounds: BoxArgs,
    },
    /// A positional profile
    Positional {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long)]
        profile: String,
        #[command(flatten)]
        bounds: BoxArgs,
    },
}

#[derive(Args, Debug)]
struct PvalArgs {
    #[arg(long)]
    game: String,
    /// Write the punishing profiles here
    #[arg(long)]
    witness: Option<String>,
}

#[derive(Args, Debug)]
struct MppathArgs {
    /// Weighted graph (JSON)
    #[arg(long)]
    graph: String,
    /// Start vertex; defaults to the first vertex
    #[arg(long)]
    start: Option<String>,
    #[command(flatten)]
    bounds: BoxArgs,
    /// Write the flows and cycle families here
    #[arg(long)]
    witness: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Export {
    /// The stationary-equilibrium sentence in SMT-LIB2 (QF_NRA)
    StatneSmt {
        #[command(flatten)]
        game: GameArgs,
        #[command(flatten)]
        bounds: BoxArgs,
        #[arg(long)]
        output: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GadgetArg {
    G1,
    G2,
}

#[derive(Subcommand, Debug)]
enum Gen {
    /// Game for a CNF formula in DIMACS format
    Sat {
        /// CNF formula in DIMACS format
        #[arg(long)]
        dimacs: String,
        #[arg(long)]
        output: Option<String>,
    },
    /// Game for the Hamiltonian cycle problem on a graph
    Ham {
        #[arg(long)]
        graph: String,
        /// Start vertex; defaults to the first vertex
        #[arg(long)]
        v0: Option<String>,
        #[arg(long)]
        output: Option<String>,
    },
    /// The square-root gadget G(p)
    Sqrt {
        #[arg(long)]
        p: Rational,
        #[arg(long)]
        output: Option<String>,
        /// Write the optimal stationary profile here (when sqrt(p) is rational)
        #[arg(long)]
        profile_out: Option<String>,
    },
    /// The chain game for a SqrtSum instance
    Sqrtsum {
        /// Comma-separated positive integers
        #[arg(long, value_delimiter = ',')]
        d: Vec<u64>,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        output: Option<String>,
        #[arg(long)]
        profile_out: Option<String>,
    },
    /// Game simulating a two-counter machine
    Counter {
        #[arg(long)]
        machine: String,
        #[arg(long)]
        output: Option<String>,
    },
    /// Put a game behind a gadget without equilibria
    Wrap {
        #[arg(long)]
        game: String,
        #[arg(long, value_enum)]
        gadget: GadgetArg,
        /// Exit payoffs of players 1..k-1
        #[arg(long, allow_hyphen_values = true)]
        exit: String,
        #[arg(long)]
        output: Option<String>,
    },
}

#[derive(Args, Debug)]
struct ExampleArgs {
    /// One of the built-in names; `Gp(p)` takes a rational, e.g. `Gp(1/4)`
    #[arg(long)]
    name: Option<String>,
    #[arg(long)]
    list: bool,
}

#[derive(Args, Debug)]
struct SelftestArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 50)]
    rounds: usize,
}

/// A failure that ends the command with exit status 2.
#[derive(Debug)]
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<Output, Failure>;

/// What a command produced: a verdict, or a raw artifact for standard
/// output, plus summary lines.
enum Output {
    Verdict(Verdict, Vec<String>),
    Artifact(String, Vec<String>),
}

fn load_game(args: &GameArgs) -> Result<(Game, StateId), Failure> {
    let g = parse_game(&io::read_file(&args.game)?)?;
    let s0 = match &args.initial {
        Some(n) => g.id(n).ok_or_else(|| Failure(format!("no state named {n}")))?,
        None => g.initial().ok_or_else(|| Failure("the game has no initial state; pass --initial".into()))?,
    };
    Ok((g, s0))
}

fn thresholds(text: &Option<String>, k: usize, default: ExtRational) -> Result<Vec<ExtRational>, Failure> {
    match text {
        None => Ok(vec![default; k]),
        Some(t) => {
            let v = parse_ext_vector(t)?;
            if v.len() != k {
                return Err(Failure(format!("threshold vector {t:?} has {} entries, expected {k}", v.len())));
            }
            Ok(v)
        }
    }
}

fn bounds(b: &BoxArgs, k: usize) -> Result<(Vec<ExtRational>, Vec<ExtRational>), Failure> {
    Ok((thresholds(&b.lower, k, ExtRational::NegInf)?, thresholds(&b.upper, k, ExtRational::PosInf)?))
}

fn write_to(path: &str, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure(format!("{path}: {e}")))
}

fn show(v: &[Rational]) -> String {
    v.iter().map(Rational::to_string).collect::<Vec<_>>().join(", ")
}

fn names(g: &Game, v: &[StateId]) -> Vec<String> {
    v.iter().map(|&s| g.name(s).to_string()).collect()
}

fn pure_witness_json(g: &Game, w: &PureWitness) -> Value {
    let edges: Vec<Value> = w
        .edges
        .iter()
        .map(|((u, v), a)| json!({ "from": g.name(*u), "to": g.name(*v), "profile": g.profile_labels(*u, a) }))
        .collect();
    let punish: Vec<Value> = w
        .punish
        .iter()
        .map(|p| serde_json::from_str::<Value>(&positional_to_json(g, p)).expect("profile JSON"))
        .collect();
    json!({
        "z": w.z,
        "payoff": w.payoff,
        "approach": names(g, &w.approach),
        "component": names(g, &w.scc),
        "cycles": w.cycles.cycles.iter().map(|fam| fam.iter().map(|c| names(g, c)).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "secure_edges": edges,
        "punish": punish,
        "strategy": PureStrategy::new(g, w).describe(),
    })
}

fn solve(cmd: &Solve) -> Outcome {
    match cmd {
        Solve::Pure { game, bounds: b, terminal, witness } => {
            let (g, s0) = load_game(game)?;
            let (x, y) = bounds(b, g.players())?;
            let found = if *terminal { decide_pure_ne_terminal(&g, s0, &x, &y)? } else { decide_pure_ne(&g, s0, &x, &y) };
            let name = "solve pure";
            Ok(match found {
                Some(w) => {
                    if let Some(path) = witness {
                        write_to(path, &serde_json::to_string_pretty(&pure_witness_json(&g, &w))?)?;
                    }
                    let summary = vec![format!("pure equilibrium with payoff ({})", show(&w.payoff))];
                    Output::Verdict(Verdict::new(name, Answer::Yes, json!({ "payoff": w.payoff, "z": w.z })), summary)
                }
                None => Output::Verdict(
                    Verdict::new(name, Answer::No, json!({})),
                    vec!["no pure equilibrium with payoff in the box".into()],
                ),
            })
        }
        Solve::Positional { game, bounds: b, budget, witness } => {
            let (g, s0) = load_game(game)?;
            let (x, y) = bounds(b, g.players())?;
            let r = decide_pos_ne(&g, s0, &x, &y, *budget);
            let stats = json!({ "nodes": r.nodes, "profile_space": r.profile_space.to_string() });
            let name = "solve positional";
            Ok(match r.found {
                Some(v) => {
                    if let Some(path) = witness {
                        write_to(path, &positional_to_json(&g, &v.profile))?;
                    }
                    let summary = vec![format!("positional equilibrium with payoff ({})", show(&v.payoff))];
                    let payload = json!({ "payoff": v.payoff, "deviation": v.deviation, "search": stats });
                    Output::Verdict(Verdict::new(name, Answer::Yes, payload), summary)
                }
                None => Output::Verdict(
                    Verdict::new(name, Answer::No, json!({ "search": stats })),
                    vec![format!("no positional equilibrium with payoff in the box ({} search nodes)", r.nodes)],
                ),
            })
        }
    }
}

fn verify(cmd: &Verify) -> Outcome {
    match cmd {
        Verify::Stationary { game, profile, bounds: b } => {
            let (g, s0) = load_game(game)?;
            let sigma = parse_profile(&g, &io::read_file(profile)?)?;
            let (x, y) = bounds(b, g.players())?;
            let v = verify_stationary_ne(&g, s0, &sigma, &x, &y)?;
            let ok = v.is_ne && v.in_box;
            let summary = vec![
                format!("payoff ({})", show(&v.payoff)),
                format!("best responses ({})", show(&v.best_response)),
                format!(
                    "{}",
                    if ok { "stationary equilibrium in the box" } else if v.is_ne { "equilibrium outside the box" } else { "some player gains by deviating" }
                ),
            ];
            let answer = if ok { Answer::Verified } else { Answer::Rejected };
            Ok(Output::Verdict(Verdict::new("verify stationary", answer, serde_json::to_value(&v)?), summary))
        }
        Verify::Positional { game, profile, bounds: b } => {
            let (g, s0) = load_game(game)?;
            let sigma = parse_positional(&g, &io::read_file(profile)?)?;
            let (x, y) = bounds(b, g.players())?;
            let v = verify_positional(&g, s0, &sigma, &x, &y);
            let ok = v.is_ne && v.in_box;
            let summary = vec![format!("payoff ({}), best deviations ({})", show(&v.payoff), show(&v.deviation))];
            let answer = if ok { Answer::Verified } else { Answer::Rejected };
            Ok(Output::Verdict(Verdict::new("verify positional", answer, serde_json::to_value(&v)?), summary))
        }
    }
}

fn pval(a: &PvalArgs) -> Outcome {
    let g = parse_game(&io::read_file(&a.game)?)?;
    let t = pval_table(&g);
    let punish: Vec<Value> = t
        .punish
        .iter()
        .map(|p| serde_json::from_str::<Value>(&positional_to_json(&g, p)).expect("profile JSON"))
        .collect();
    if let Some(path) = &a.witness {
        write_to(path, &serde_json::to_string_pretty(&punish)?)?;
    }
    let summary = (0..g.num_states())
        .map(|s| format!("{}: ({})", g.name(s), show(&(0..g.players()).map(|i| t.value(i, s).clone()).collect::<Vec<_>>())))
        .collect();
    let payload = json!({ "states": names(&g, &(0..g.num_states()).collect::<Vec<_>>()), "pval": t.values, "punish": punish });
    Ok(Output::Verdict(Verdict::new("pval", Answer::Yes, payload), summary))
}

fn mppath(a: &MppathArgs) -> Outcome {
    let g = parse_graph(&io::read_file(&a.graph)?)?;
    if g.num_vertices() == 0 {
        return Err(Failure("the graph has no vertices".into()));
    }
    let v0 = match &a.start {
        Some(n) => g.id(n).ok_or_else(|| Failure(format!("no vertex named {n}")))?,
        None => 0,
    };
    let (x, y) = bounds(&a.bounds, g.dims())?;
    let vname = |g: &WeightedGraph, v: &[usize]| v.iter().map(|&u| g.name(u).to_string()).collect::<Vec<_>>();
    Ok(match feasible_path(&g, v0, &x, &y) {
        Some(w) => {
            let cw = extract_cycle_witness(&g, &w.flow)?;
            if let Some(path) = &a.witness {
                let flows: Vec<Value> = w
                    .flow
                    .flows
                    .iter()
                    .map(|f| {
                        w.flow
                            .edges
                            .iter()
                            .zip(f)
                            .filter(|(_, q)| !q.is_zero())
                            .map(|(&(u, v), q)| json!({ "from": g.name(u), "to": g.name(v), "flow": q }))
                            .collect::<Vec<_>>()
                            .into()
                    })
                    .collect();
                let cycles: Vec<Vec<Vec<String>>> =
                    cw.cycles.iter().map(|fam| fam.iter().map(|c| vname(&g, c)).collect()).collect();
                let doc = json!({ "flows": flows, "cycles": cycles, "means": cw.means, "schedule": cw.to_string() });
                write_to(path, &serde_json::to_string_pretty(&doc)?)?;
            }
            let payload = json!({
                "component": vname(&g, &w.scc),
                "approach": vname(&g, &w.approach),
                "achieved": w.flow.achieved,
            });
            let summary = vec![format!("feasible; each coordinate reaches ({})", show(&w.flow.achieved))];
            Output::Verdict(Verdict::new("mppath", Answer::Yes, payload), summary)
        }
        None => Output::Verdict(Verdict::new("mppath", Answer::No, json!({})), vec!["no such path".into()]),
    })
}

fn export(cmd: &Export) -> Outcome {
    let Export::StatneSmt { game, bounds: b, output } = cmd;
    let (g, s0) = load_game(game)?;
    let (x, y) = bounds(b, g.players())?;
    let doc = export_statne_constraints(&g, s0, &x, &y);
    let c = ConstraintCounts::of(&g, &x, &y);
    let summary = vec![format!("{} variables, {} assertions", c.variables(), c.assertions)];
    artifact(doc.to_string(), output, summary, "export statne-smt")
}

/// Writes an artifact to `output` (then reporting a verdict) or returns it
/// for standard output.
fn artifact(text: String, output: &Option<String>, summary: Vec<String>, name: &str) -> Outcome {
    match output {
        Some(path) => {
            write_to(path, &text)?;
            Ok(Output::Verdict(Verdict::new(name, Answer::Yes, json!({ "output": path })), summary))
        }
        None => Ok(Output::Artifact(text, summary)),
    }
}

fn game_summary(g: &Game) -> String {
    format!("{} players, {} states", g.players(), g.num_states())
}

fn generate(cmd: &Gen) -> Outcome {
    match cmd {
        Gen::Sat { dimacs, output } => {
            let phi = CnfFormula::parse_dimacs(&io::read_file(dimacs)?)?;
            let g = gen_sat_game(&phi)?;
            let mut summary = vec![game_summary(&g)];
            summary.push(format!("query: player 0 payoff >= 1, lower \"1{}\"", ",-inf".repeat(g.players() - 1)));
            artifact(game_to_json(&g), output, summary, "gen sat")
        }
        Gen::Ham { graph, v0, output } => {
            let wg = parse_graph(&io::read_file(graph)?)?;
            let v0 = match v0 {
                Some(n) => wg.id(n).ok_or_else(|| Failure(format!("no vertex named {n}")))?,
                None => 0,
            };
            let g = gen_hamiltonian_game(&wg, v0)?;
            let x = ham_thresholds(wg.num_vertices());
            let lower = x.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
            artifact(game_to_json(&g), output, vec![game_summary(&g), format!("query: lower \"{lower}\"")], "gen ham")
        }
        Gen::Sqrt { p, output, profile_out } => {
            let gd = gen_sqrt_gadget(p)?;
            write_profile(&gd.game, gd.profile.as_ref(), profile_out)?;
            artifact(game_to_json(&gd.game), output, vec![game_summary(&gd.game)], "gen sqrt")
        }
        Gen::Sqrtsum { d, k, output, profile_out } => {
            let inst = gen_sqrtsum_game(d, *k)?;
            write_profile(&inst.game, inst.profile.as_ref(), profile_out)?;
            let join = |v: &[ExtRational]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
            let summary = vec![
                game_summary(&inst.game),
                format!("query: lower \"{}\" upper \"{}\"", join(&inst.lower), join(&inst.upper)),
            ];
            artifact(game_to_json(&inst.game), output, summary, "gen sqrtsum")
        }
        Gen::Counter { machine, output } => {
            let m = CounterMachine::parse(&io::read_file(machine)?)?;
            let g = gen_counter_game(&m)?;
            artifact(game_to_json(&g), output, vec![game_summary(&g)], "gen counter")
        }
        Gen::Wrap { game, gadget, exit, output } => {
            let g = parse_game(&io::read_file(game)?)?;
            let exit: Vec<Rational> =
                exit.split(',').map(|s| s.trim().parse()).collect::<Result<_, _>>()?;
            let gadget = match gadget {
                GadgetArg::G1 => NoNeGadget::G1,
                GadgetArg::G2 => NoNeGadget::G2,
            };
            let w = wrap_with_no_ne_gadget(&g, gadget, &exit)?;
            artifact(game_to_json(&w), output, vec![game_summary(&w)], "gen wrap")
        }
    }
}

fn write_profile(g: &Game, sigma: Option<&limitavg::game::StationaryProfile>, path: &Option<String>) -> Result<(), Failure> {
    match (sigma, path) {
        (Some(s), Some(p)) => write_to(p, &profile_to_json(g, s)),
        (None, Some(_)) => Err(Failure("the optimal profile is irrational here; no profile written".into())),
        _ => Ok(()),
    }
}

fn example(a: &ExampleArgs) -> Outcome {
    if a.list || a.name.is_none() {
        return Ok(Output::Artifact(BUILTIN_NAMES.join("\n") + "\n", vec![]));
    }
    let name = a.name.as_deref().unwrap();
    let g = builtin_example(name)?;
    Ok(Output::Artifact(game_to_json(&g), vec![format!("{name}: {}", game_summary(&g))]))
}

fn dispatch(cmd: &Command) -> Outcome {
    match cmd {
        Command::Solve(s) => solve(s),
        Command::Verify(v) => verify(v),
        Command::Pval(a) => pval(a),
        Command::Mppath(a) => mppath(a),
        Command::Export(e) => export(e),
        Command::Gen(g) => generate(g),
        Command::Example(a) => example(a),
        Command::Selftest(a) => {
            let (verdict, summary) = selftest::run(a.seed, a.rounds);
            Ok(Output::Verdict(verdict, summary))
        }
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Solve(Solve::Pure { .. }) => "solve pure",
        Command::Solve(Solve::Positional { .. }) => "solve positional",
        Command::Verify(Verify::Stationary { .. }) => "verify stationary",
        Command::Verify(Verify::Positional { .. }) => "verify positional",
        Command::Pval(_) => "pval",
        Command::Mppath(_) => "mppath",
        Command::Export(_) => "export statne-smt",
        Command::Gen(Gen::Sat { .. }) => "gen sat",
        Command::Gen(Gen::Ham { .. }) => "gen ham",
        Command::Gen(Gen::Sqrt { .. }) => "gen sqrt",
        Command::Gen(Gen::Sqrtsum { .. }) => "gen sqrtsum",
        Command::Gen(Gen::Counter { .. }) => "gen counter",
        Command::Gen(Gen::Wrap { .. }) => "gen wrap",
        Command::Example(_) => "example",
        Command::Selftest(_) => "selftest",
    }
}

/// Runs the command line `args` (program name first) and returns the exit
/// status: 0 for yes or verified, 1 for no or rejected, 2 for usage and
/// input errors.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let name = command_name(&cli.command);
    match dispatch(&cli.command) {
        Ok(Output::Verdict(v, summary)) => {
            let _ = writeln!(out, "{}", v.to_line());
            for line in summary {
                let _ = writeln!(err, "{line}");
            }
            v.answer.exit_code()
        }
        Ok(Output::Artifact(text, summary)) => {
            let _ = write!(out, "{text}");
            if !text.ends_with('\n') {
                let _ = writeln!(out);
            }
            for line in summary {
                let _ = writeln!(err, "{line}");
            }
            0
        }
        Err(Failure(msg)) => {
            let v = Verdict::new(name, Answer::Error, json!({ "message": msg }));
            let _ = writeln!(out, "{}", v.to_line());
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

/// Used by `selftest` to keep positional profiles readable in messages.
fn profile_summary(g: &Game, sigma: &PositionalProfile) -> String {
    (0..g.num_states())
        .map(|s| format!("{}={}", g.name(s), g.profile_labels(s, sigma.at(s)).join(",")))
        .collect::<Vec<_>>()
        .join(" ")
}
