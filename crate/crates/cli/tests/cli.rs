use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::{tempdir, TempDir};

fn qgame(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qgame"))
        .args(args)
        .output()
        .expect("qgame runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).expect("utf-8 stderr")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

struct Demos {
    dir: TempDir,
}

impl Demos {
    fn new() -> Self {
        let dir = tempdir().expect("temp dir");
        for name in ["pfg", "sfg"] {
            let o = qgame(&["demo", name, dir.path().to_str().unwrap()]);
            assert_eq!(code(&o), 0, "{}", stderr(&o));
        }
        Self { dir }
    }

    fn path(&self, file: &str) -> PathBuf {
        self.dir.path().join(file)
    }

    fn arg(&self, file: &str) -> String {
        self.path(file).to_str().unwrap().to_string()
    }

    fn write(&self, file: &str, text: &str) -> String {
        fs::write(self.path(file), text).unwrap();
        self.arg(file)
    }
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

#[test]
fn demo_writes_game_and_operators() {
    let d = Demos::new();
    for name in ["pfg", "sfg"] {
        for suffix in ["game", "H1", "H2"] {
            assert!(d.path(&format!("{name}.{suffix}.json")).exists());
        }
    }
    let pfg = fs::read_to_string(d.path("pfg.game.json")).unwrap();
    assert!(pfg.contains("\"basis\": \"classical\""));
    assert!(pfg.contains("[[1.0,0.0],[0.0,0.0]],\n    [[0.0,0.0],[0.0,0.0]]"));
    let sfg = fs::read_to_string(d.path("sfg.game.json")).unwrap();
    assert!(sfg.contains("\"basis\": \"pauli\""));
    assert!(sfg.contains("\"scale\": [\n        [[1.0,0.0],[0.0,0.0]],\n        [[0.0,0.0],[-1.0,0.0]]\n      ]"));
}

#[test]
fn unknown_demo_is_a_usage_error() {
    let dir = tempdir().unwrap();
    let o = qgame(&["demo", "chess", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("chess"));
}

#[test]
fn pfg_payoff_golden() {
    let d = Demos::new();
    let o = qgame(&["payoff", &d.arg("pfg.game.json"), "--player", "1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        stdout(&o),
        fs::read_to_string(fixture("pfg_h1.golden.json")).unwrap()
    );
    assert_eq!(stderr(&o), "H^1: 4x4, hermitian residual 0\n");
}

#[test]
fn payoff_round_trip_is_bit_identical() {
    let d = Demos::new();
    for (game, player, demo_file) in [("sfg", "1", "sfg.H1.json"), ("sfg", "2", "sfg.H2.json"), ("pfg", "2", "pfg.H2.json")] {
        let out = d.arg(&format!("again.{game}.{player}.json"));
        let o = qgame(&["payoff", &d.arg(&format!("{game}.game.json")), "--player", player, "-o", &out]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        assert!(stdout(&o).contains("hermitian residual 0"));
        assert_eq!(fs::read(&out).unwrap(), fs::read(d.path(demo_file)).unwrap());
    }
}

#[test]
fn sfg_payoff_matches_transcribed_entries_outside_the_known_disagreements() {
    // the anchors named in prose and the whole first row agree with the
    // transcription; see the acceptance suite for the full comparison
    let d = Demos::new();
    let o = qgame(&["payoff", &d.arg("sfg.game.json")]);
    let emitted: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let printed: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(fixture("sfg_h1_transcribed.json")).unwrap()).unwrap();
    assert_eq!(emitted["dim"], 16);
    assert_eq!(emitted["matrix"][0], printed["matrix"][0]);
    for (r, col) in [(0, 0), (5, 0), (10, 10)] {
        assert_eq!(emitted["matrix"][r][col], printed["matrix"][r][col]);
    }
}

#[test]
fn payoff_rejects_bad_player() {
    let d = Demos::new();
    for p in ["0", "3"] {
        let o = qgame(&["payoff", &d.arg("sfg.game.json"), "--player", p]);
        assert_eq!(code(&o), 2);
    }
}

#[test]
fn missing_and_malformed_files() {
    let d = Demos::new();
    let o = qgame(&["payoff", &d.arg("nope.json")]);
    assert_eq!(code(&o), 2);
    let broken = d.write("broken.json", "{\n  \"object_dim\": 2,\n  \"players\": [\n");
    let o = qgame(&["payoff", &broken]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("broken.json:4:"), "{}", stderr(&o));
    let missing_key = d.write("missing.json", "{\"object_dim\": 2, \"players\": []}");
    assert_eq!(code(&qgame(&["check", &missing_key])), 2);
}

#[test]
fn validation_failures_exit_3() {
    let d = Demos::new();
    let text = fs::read_to_string(d.path("sfg.game.json")).unwrap();
    // make player 1's scale non-Hermitian
    let corrupted = text.replacen("[[1.0,0.0],[0.0,0.0]],\n        [[0.0,0.0],[-1.0,0.0]]", "[[1.0,0.0],[0.0,1.0]],\n        [[0.0,0.0],[-1.0,0.0]]", 1);
    assert_ne!(corrupted, text);
    let bad = d.write("bad.game.json", &corrupted);
    let o = qgame(&["check", &bad]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("not Hermitian"), "{}", stderr(&o));
    assert_eq!(code(&qgame(&["payoff", &bad])), 3);

    let wrong_basis = d.write("basis.json", &text.replacen("\"pauli\"", "\"weyl\"", 1).replacen("\"pauli\"", "\"quaternion\"", 1));
    let o = qgame(&["payoff", &wrong_basis]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("quaternion"));
}

#[test]
fn eval_examples() {
    let d = Demos::new();
    let identity = d.write("id.json", r#"{"players": [{"unitary": [[1, 0], [0, 1]]}, {"params": [0, 0, 0, 0]}]}"#);
    let o = qgame(&["eval", &d.arg("sfg.game.json"), &identity]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "E^1 (player1) = 1\nE^2 (player2) = -1\n");

    let uniform = d.write("u.json", r#"{"players": [{"pdf": [0.25, 0.25, 0.25, 0.25]}, {"pdf": [0.25, 0.25, 0.25, 0.25]}]}"#);
    let o = qgame(&["eval", &d.arg("sfg.game.json"), &uniform]);
    assert_eq!(stdout(&o), "E^1 (player1) = 0\nE^2 (player2) = 0\n");

    let half = d.write("h.json", r#"{"players": [{"pdf": [0.5, 0.5]}, {"density": [[0.5, 0], [0, 0.5]]}]}"#);
    let o = qgame(&["eval", &d.arg("pfg.game.json"), &half]);
    assert_eq!(stdout(&o), "E^1 (player1) = 0\nE^2 (player2) = 0\n");

    let flip = d.write("f.json", r#"{"players": [{"unitary": [[0, 1], [1, 0]]}, {"pdf": [1, 0]}]}"#);
    let o = qgame(&["eval", &d.arg("pfg.game.json"), &flip]);
    assert_eq!(stdout(&o), "E^1 (player1) = -1\nE^2 (player2) = 1\n");
}

#[test]
fn eval_rejects_incompatible_profiles() {
    let d = Demos::new();
    for text in [
        r#"{"players": [{"pdf": [0.5, 0.5]}, {"pdf": [0.5, 0.5]}]}"#,
        r#"{"players": [{"pdf": [0.25, 0.25, 0.25, 0.25]}]}"#,
        r#"{"players": [{"unitary": [[1, 0], [0, 2]]}, {"pdf": [1, 0, 0, 0]}]}"#,
    ] {
        let profile = d.write("p.json", text);
        let o = qgame(&["eval", &d.arg("sfg.game.json"), &profile]);
        assert_eq!(code(&o), 3, "{text}: {}", stderr(&o));
    }
    // a Hadamard is not a coin strategy
    let h = format!("[[{0}, {0}], [{0}, -{0}]]", std::f64::consts::FRAC_1_SQRT_2);
    let profile = d.write("p.json", &format!(r#"{{"players": [{{"unitary": {h}}}, {{"pdf": [1, 0]}}]}}"#));
    assert_eq!(code(&qgame(&["eval", &d.arg("pfg.game.json"), &profile])), 3);
}

#[test]
fn solve_examples() {
    let d = Demos::new();
    let o = qgame(&["solve", &d.arg("pfg.game.json"), "--mode=classical", "--eps=1e-3"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.starts_with("mode: classical\nconverged: true\n"));
    assert!(text.contains("  pdf 0.5"));

    let o = qgame(&["solve", &d.arg("sfg.game.json"), "--mode=operator", "--eps=1e-3"]);
    assert_eq!(code(&o), 0);
    let line = stdout(&o).lines().find(|l| l.starts_with("exploitability: ")).unwrap().to_string();
    let e: f64 = line["exploitability: ".len()..].parse().unwrap();
    assert!(e <= 1e-3);

    let o = qgame(&["solve", &d.arg("pfg.game.json"), "--max-iters=0"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("converged: false\niterations: 0\n"));
}

#[test]
fn solve_rejects_bad_flags() {
    let d = Demos::new();
    for args in [["--mode", "mixed"], ["--eps", "0"], ["--eps", "abc"], ["--max-iters", "-1"]] {
        let mut all = vec!["solve", "placeholder"];
        let game = d.arg("pfg.game.json");
        all[1] = &game;
        all.extend(args);
        assert_eq!(code(&qgame(&all)), 2, "{args:?}");
    }
}

#[test]
fn check_examples() {
    let d = Demos::new();
    let o = qgame(&["check", &d.arg("sfg.game.json"), "--trials=1000"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("PASS max deviation "));
    assert!(stdout(&o).contains("16 basis profiles, 1000 random profiles"));
    let o = qgame(&["check", &d.arg("pfg.game.json")]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("4 basis profiles"));
}

#[test]
fn outputs_are_deterministic() {
    let d = Demos::new();
    let sfg = d.arg("sfg.game.json");
    for args in [
        vec!["solve", sfg.as_str(), "--max-iters", "500", "--seed", "11"],
        vec!["check", sfg.as_str(), "--trials", "200", "--seed", "11"],
    ] {
        assert_eq!(qgame(&args).stdout, qgame(&args).stdout);
    }
    let a = qgame(&["solve", &sfg, "--max-iters", "50", "--seed", "1"]);
    let b = qgame(&["solve", &sfg, "--max-iters", "50", "--seed", "2"]);
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn help_exits_zero() {
    let o = qgame(&["--help"]);
    assert_eq!(code(&o), 0);
    for sub in ["payoff", "eval", "solve", "check", "demo"] {
        assert!(stdout(&o).contains(sub));
    }
}
