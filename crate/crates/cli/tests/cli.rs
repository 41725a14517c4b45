use std::path::PathBuf;
use std::process::Command;

use limitavg_cli::verdict::{Answer, Verdict};
use proptest::prelude::*;
use serde_json::Value;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn schema() -> jsonschema::JSONSchema {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "schema", "verdict.schema.json"].iter().collect();
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
    jsonschema::JSONSchema::compile(&doc).expect("schema compiles")
}

struct Run {
    code: i32,
    out: String,
    err: String,
}

impl Run {
    fn verdict(&self) -> Verdict {
        let line = self.out.lines().next().unwrap_or_default();
        let v: Value = serde_json::from_str(line).unwrap_or_else(|e| panic!("{e}: {line:?}"));
        let compiled = schema();
        if let Err(errors) = compiled.validate(&v) {
            let msgs: Vec<String> = errors.map(|e| e.to_string()).collect();
            panic!("verdict does not match the schema: {msgs:?}\n{line}");
        }
        Verdict::from_line(line).unwrap()
    }
}

fn run(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("limitavg").chain(args.iter().copied());
    let code = limitavg_cli::run(argv, &mut out, &mut err);
    Run { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

fn tmp(name: &str) -> String {
    let dir = std::env::temp_dir().join(format!("limitavg-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name).to_string_lossy().into_owned()
}

#[test]
fn binary_exit_codes_on_the_documented_invocations() {
    let bin = env!("CARGO_BIN_EXE_limitavg");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code().unwrap();
    let ham = data("hamTriangle.json");
    let fig3 = data("fig3.json");
    let half = data("half.json");
    assert_eq!(status(&["solve", "positional", "--game", &ham, "--lower", "1,1/3,2/3", "--upper", "inf,inf,inf"]), 0);
    assert_eq!(
        status(&["verify", "stationary", "--game", &fig3, "--profile", &half, "--lower", "1,-inf,-inf", "--upper", "inf,inf,inf"]),
        0
    );
    assert_eq!(status(&["solve", "pure", "--game", &fig3, "--lower", "1/1000,-inf,-inf"]), 1);
    assert_eq!(status(&["frobnicate"]), 2);
}

#[test]
fn stationary_verdict_on_fig3() {
    let r = run(&["verify", "stationary", "--game", &data("fig3.json"), "--profile", &data("half.json"), "--lower", "1,-inf,-inf"]);
    assert_eq!(r.code, 0, "{}", r.err);
    let v = r.verdict();
    assert_eq!(v.answer, Answer::Verified);
    assert_eq!(v.payload["payoff"], serde_json::json!(["1", "1", "1"]));
    assert_eq!(v.payload["slack"], serde_json::json!(["0", "0", "0"]));
}

#[test]
fn pure_and_positional_disagree_on_fig3() {
    let fig3 = data("fig3.json");
    let pure = run(&["solve", "pure", "--game", &fig3, "--lower", "1/1000,-inf,-inf"]);
    assert_eq!((pure.code, pure.verdict().answer), (1, Answer::No));
    let terminal = run(&["solve", "pure", "--terminal", "--game", &fig3, "--lower", "1/1000,-inf,-inf"]);
    assert_eq!(terminal.code, 1, "{}", terminal.err);
    let any = run(&["solve", "pure", "--game", &fig3]);
    assert_eq!(any.code, 0);
}

#[test]
fn pure_witness_file() {
    let w = tmp("fig4-witness.json");
    let r = run(&["solve", "pure", "--game", &data("fig4.json"), "--witness", &w]);
    assert_eq!(r.code, 0, "{}", r.err);
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&w).unwrap()).unwrap();
    for key in ["z", "payoff", "approach", "cycles", "punish", "strategy"] {
        assert!(doc.get(key).is_some(), "witness lacks {key}");
    }
    assert_eq!(doc["punish"].as_array().unwrap().len(), 3);
}

#[test]
fn usage_and_input_errors_exit_2() {
    let fig3 = data("fig3.json");
    assert_eq!(run(&["solve"]).code, 2);
    assert_eq!(run(&["solve", "pure"]).code, 2);
    let arity = run(&["solve", "pure", "--game", &fig3, "--lower", "1,2"]);
    assert_eq!(arity.code, 2);
    assert_eq!(arity.verdict().answer, Answer::Error);
    assert_eq!(run(&["solve", "pure", "--game", &fig3, "--lower", "1,x,2"]).code, 2);
    assert_eq!(run(&["solve", "pure", "--game", &data("missing.json")]).code, 2);

    let broken = tmp("broken.json");
    std::fs::write(&broken, "{\n  \"players\": 2,\n  \"states\": [\n    {\"name\": \"s\",}\n  ]\n}\n").unwrap();
    let r = run(&["solve", "positional", "--game", &broken]);
    assert_eq!(r.code, 2);
    let msg = r.verdict().payload["message"].as_str().unwrap().to_string();
    assert!(msg.starts_with("line 4, column"), "{msg}");

    let wrong_player = tmp("bad-profile.json");
    std::fs::write(&wrong_player, r#"{"entries": [{"state": "s0", "player": 7, "action": "s1"}]}"#).unwrap();
    assert_eq!(run(&["verify", "stationary", "--game", &fig3, "--profile", &wrong_player]).code, 2);
}

#[test]
fn help_and_version_exit_0() {
    let h = run(&["--help"]);
    assert_eq!(h.code, 0);
    assert!(h.out.contains("solve"));
    assert_eq!(run(&["--version"]).code, 0);
}

#[test]
fn pval_on_g1() {
    let r = run(&["pval", "--game", &data("G1.json")]);
    assert_eq!(r.code, 0);
    let v = r.verdict();
    let states: Vec<&str> = v.payload["states"].as_array().unwrap().iter().map(|s| s.as_str().unwrap()).collect();
    let s1 = states.iter().position(|&s| s == "s1").unwrap();
    assert_eq!(v.payload["pval"][0][s1], "1");
    assert_eq!(v.payload["pval"][1][s1], "0");
    assert_eq!(v.payload["punish"].as_array().unwrap().len(), 2);
}

#[test]
fn mppath_yes_and_no() {
    let sq = data("square.json");
    let w = tmp("mppath-witness.json");
    let yes = run(&["mppath", "--graph", &sq, "--lower", "1/3,1/3", "--witness", &w]);
    assert_eq!(yes.code, 0, "{}", yes.err);
    assert_eq!(yes.verdict().payload["achieved"], serde_json::json!(["1/3", "1/3"]));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&w).unwrap()).unwrap();
    assert_eq!(doc["cycles"].as_array().unwrap().len(), 2);
    // a and c are never both weighted above 1/2 on any mix of cycles
    assert_eq!(run(&["mppath", "--graph", &sq, "--lower", "1/2,1/2"]).code, 1);
    assert_eq!(run(&["mppath", "--graph", &sq, "--start", "zz"]).code, 2);
}

#[test]
fn export_reads_back() {
    let r = run(&["export", "statne-smt", "--game", &data("fig3.json"), "--lower", "1,-inf,-inf"]);
    assert_eq!(r.code, 0, "{}", r.err);
    let doc = limitavg::statne::parse_document(&r.out).expect("exported text parses");
    assert_eq!(doc.declarations.len(), 231);
    assert_eq!(doc.assertions.len(), 262);
    let out = tmp("fig3.smt2");
    let to_file = run(&["export", "statne-smt", "--game", &data("fig3.json"), "--lower", "1,-inf,-inf", "--output", &out]);
    assert_eq!(to_file.code, 0);
    assert_eq!(std::fs::read_to_string(&out).unwrap(), r.out);
}

#[test]
fn generated_games_feed_the_solvers() {
    let ham = tmp("ham.json");
    assert_eq!(run(&["gen", "ham", "--graph", &data("triangle.json"), "--v0", "u", "--output", &ham]).code, 0);
    // the triangle u -> v -> w -> u is Hamiltonian
    let lower = limitavg::reductions::ham_thresholds(3)
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",");
    assert_eq!(run(&["solve", "positional", "--game", &ham, "--lower", &lower]).code, 0);

    let sat = tmp("sat.json");
    assert_eq!(run(&["gen", "sat", "--dimacs", &data("demo.cnf"), "--output", &sat]).code, 0);
    let k = serde_json::from_str::<Value>(&std::fs::read_to_string(&sat).unwrap()).unwrap()["players"].as_u64().unwrap();
    let lower = format!("1{}", ",-inf".repeat(k as usize - 1));
    // demo.cnf is satisfied by x1 = x2 = true
    assert_eq!(run(&["solve", "positional", "--game", &sat, "--lower", &lower]).code, 0);

    let (gp, prof) = (tmp("gp.json"), tmp("gp-profile.json"));
    assert_eq!(run(&["gen", "sqrt", "--p", "1/4", "--output", &gp, "--profile-out", &prof]).code, 0);
    let v = run(&["verify", "stationary", "--game", &gp, "--profile", &prof]);
    assert_eq!(v.code, 0, "{}", v.err);
    assert_eq!(v.verdict().payload["payoff"], serde_json::json!(["0", "1/2", "1", "1/2", "1", "3/4"]));
    assert_eq!(run(&["gen", "sqrt", "--p", "1/2", "--output", &gp, "--profile-out", &prof]).code, 2);

    let ss = tmp("sqrtsum.json");
    let r = run(&["gen", "sqrtsum", "--d", "1,4", "--k", "3", "--output", &ss]);
    assert_eq!(r.code, 0);
    assert!(r.err.contains("query: lower"));

    let cm = tmp("counter.json");
    assert_eq!(run(&["gen", "counter", "--machine", &data("machine.txt"), "--output", &cm]).code, 0);
    assert!(run(&["pval", "--game", &cm]).code == 0);

    let wrapped = tmp("wrapped.json");
    assert_eq!(run(&["gen", "wrap", "--game", &data("fig4.json"), "--gadget", "g1", "--exit", "0,0", "--output", &wrapped]).code, 0);
    assert_eq!(run(&["solve", "pure", "--game", &wrapped, "--lower", "-inf,-inf,-inf"]).code, 0);
}

#[test]
fn examples_print_loadable_games() {
    let list = run(&["example", "--list"]);
    assert_eq!(list.code, 0);
    assert_eq!(list.out.lines().count(), limitavg::reductions::BUILTIN_NAMES.len());
    for name in ["G1", "G2", "fig3", "fig4", "Gp(1/4)", "satDemo", "hamTriangle"] {
        let r = run(&["example", "--name", name]);
        assert_eq!(r.code, 0, "{name}");
        let path = tmp(&format!("example-{}.json", name.replace(['(', ')', '/'], "_")));
        std::fs::write(&path, &r.out).unwrap();
        assert!(matches!(run(&["pval", "--game", &path]).code, 0), "{name}");
    }
    assert_eq!(run(&["example", "--name", "nope"]).code, 2);
}

#[test]
fn no_equilibrium_gadgets() {
    for name in ["G1", "G2"] {
        let r = run(&["solve", "pure", "--game", &data(&format!("{name}.json"))]);
        assert_eq!(r.code, 1, "{name}: {}", r.err);
    }
}

#[test]
fn selftest_passes() {
    let r = run(&["selftest", "--seed", "11", "--rounds", "60"]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert_eq!(r.verdict().answer, Answer::Verified);
}

fn threshold() -> impl Strategy<Value = String> {
    prop_oneof![Just("-inf".to_string()), (-4i64..=4, 1i64..=3).prop_map(|(n, d)| format!("{n}/{d}"))]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // A positional witness written by `solve positional` passes `verify positional`
    // and the stationary verifier at the same thresholds.
    #[test]
    fn positional_witnesses_verify(x in proptest::collection::vec(threshold(), 3)) {
        let lower = x.join(",");
        let w = tmp(&format!("pos-{}.json", lower.replace(['/', ','], "_")));
        for game in ["fig3.json", "fig4.json", "satDemo.json"] {
            let r = run(&["solve", "positional", "--game", &data(game), "--lower", &lower, "--witness", &w]);
            prop_assert!(r.code == 0 || r.code == 1, "{}", r.err);
            if r.code == 0 {
                let v = run(&["verify", "positional", "--game", &data(game), "--profile", &w, "--lower", &lower]);
                prop_assert_eq!(v.code, 0);
                let s = run(&["verify", "stationary", "--game", &data(game), "--profile", &w, "--lower", &lower]);
                prop_assert_eq!(s.code, 0);
                prop_assert_eq!(&s.verdict().payload["payoff"], &r.verdict().payload["payoff"]);
                // positional equilibria are pure equilibria
                let p = run(&["solve", "pure", "--game", &data(game), "--lower", &lower]);
                prop_assert_eq!(p.code, 0);
            }
        }
    }

    // Raising a lower threshold can only turn yes into no.
    #[test]
    fn pure_is_monotone_in_the_lower_bound(x in proptest::collection::vec(threshold(), 3), bump in 0usize..3) {
        let lower = x.join(",");
        let mut raised = x.clone();
        raised[bump] = "1".to_string();
        let a = run(&["solve", "pure", "--game", &data("fig4.json"), "--lower", &lower]);
        let b = run(&["solve", "pure", "--game", &data("fig4.json"), "--lower", &raised.join(",")]);
        prop_assert!(a.code <= 1 && b.code <= 1);
        let raised_is_higher = x[bump] == "-inf" || {
            let q: limitavg::Rational = x[bump].parse().unwrap();
            q <= limitavg::Rational::one()
        };
        if raised_is_higher && b.code == 0 {
            prop_assert_eq!(a.code, 0);
        }
    }
}

#[test]
fn schema_rejects_malformed_verdicts() {
    let s = schema();
    let ok = serde_json::json!({"command": "solve pure", "answer": "yes", "payload": {"payoff": ["-1/2", "0", "7/10", "12"]}});
    assert!(s.is_valid(&ok));
    for bad in [
        serde_json::json!({"command": "solve pure", "answer": "maybe", "payload": {}}),
        serde_json::json!({"command": "solve pure", "answer": "yes", "payload": {"payoff": ["3/1"]}}),
        serde_json::json!({"command": "solve pure", "answer": "yes", "payload": {"payoff": ["-0"]}}),
        serde_json::json!({"command": "solve pure", "answer": "yes", "payload": {"payoff": ["1/-2"]}}),
        serde_json::json!({"command": "solve pure", "answer": "yes", "payload": {"payoff": [0.5]}}),
        serde_json::json!({"command": "solve pure", "answer": "yes"}),
        serde_json::json!({"command": "solve pure", "answer": "yes", "payload": {}, "extra": 1}),
    ] {
        assert!(!s.is_valid(&bad), "{bad}");
    }
}
