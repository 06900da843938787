use std::path::PathBuf;
use std::process::{Command, Output};

use toric_core::cli::FanDocument;
use toric_core::fan::validate_fan;

const SIGMA2: &str = "# the A1 surface glued to a smooth chart
toricfan 1
rank 2
ray 1 0
ray 0 1
ray 2 1
cone 1 2
cone 0 2
divisor W 0 1 0
divisor E 0 0 1
divisor W2 0 2 0
subgroup N W
subgroup M W W2
subgroup NE W E
";

struct Scratch(PathBuf);

impl Scratch {
    fn new(name: &str, text: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("toric-cli-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join(name);
        std::fs::write(&path, text).unwrap();
        Scratch(path)
    }

    fn path(&self) -> &str {
        self.0.to_str().unwrap()
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = std::fs::remove_file(&self.0);
    }
}

fn toric(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toric"))
        .args(args)
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn analyze_succeeds() {
    let doc = Scratch::new("analyze.fan", SIGMA2);
    let out = toric(&["analyze", doc.path()]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("local Cl = Z/2"), "{}", stdout(&out));
}

#[test]
fn exit_codes_follow_the_contract() {
    let bad_parse = Scratch::new("parse.fan", "toricfan 1\nrank 2\nray 1 x\n");
    assert_eq!(code(&toric(&["analyze", bad_parse.path()])), 2);
    assert_eq!(code(&toric(&["analyze", "/nonexistent/doc.fan"])), 2);

    let overlap = Scratch::new(
        "overlap.fan",
        "toricfan 1\nrank 2\nray 1 0\nray 0 1\nray 1 1\ncone 0 1\ncone 0 2\n",
    );
    assert_eq!(code(&toric(&["analyze", overlap.path()])), 3);

    let doc = Scratch::new("codes.fan", SIGMA2);
    assert_eq!(code(&toric(&["divisor", doc.path(), "Q"])), 4);
    assert_eq!(code(&toric(&["cox", doc.path(), "M"])), 5);
    assert_eq!(
        code(&toric(&["tower", doc.path(), "--chain", "NE", "N"])),
        6
    );
    assert_eq!(
        code(&toric(&["tower", doc.path(), "--chain", "N", "NE"])),
        0
    );
}

#[test]
fn divisor_checks_answer() {
    let doc = Scratch::new("divisor.fan", SIGMA2);
    let out = toric(&["divisor", doc.path(), "W", "--check", "cartier"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("no; index 2"));
    let out = toric(&["divisor", doc.path(), "W2", "--check", "cartier"]);
    assert!(!stdout(&out).contains("no;"), "{}", stdout(&out));
}

#[test]
fn reports_are_deterministic() {
    let doc = Scratch::new("determinism.fan", SIGMA2);
    for args in [
        vec!["analyze", doc.path()],
        vec!["cox", doc.path(), "N", "--emit", "fan"],
        vec!["tower", doc.path(), "--chain", "N", "NE", "--klt-shadow"],
        vec!["tower", "--demo-iteration2", "2", "2,3"],
    ] {
        let a = toric(&args);
        let b = toric(&args);
        assert_eq!(code(&a), 0, "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn emitted_fans_round_trip() {
    let doc = Scratch::new("emit.fan", SIGMA2);
    for args in [
        vec!["cox", doc.path(), "N", "--emit", "fan"],
        vec!["cox", doc.path(), "--full", "--emit", "fan"],
    ] {
        let out = toric(&args);
        assert_eq!(code(&out), 0);
        let text = stdout(&out);
        let parsed = FanDocument::parse(&text).unwrap();
        let fan = parsed.to_fan().unwrap();
        assert!(validate_fan(&fan).is_valid());
        assert_eq!(
            parsed.to_string(),
            FanDocument::parse(&parsed.to_string()).unwrap().to_string()
        );

        // the emitted document is itself a valid input
        let again = Scratch::new("emit-again.fan", &text);
        assert_eq!(code(&toric(&["analyze", again.path()])), 0);
    }
}

#[test]
fn demo_needs_no_document() {
    let out = toric(&["tower", "--demo-iteration2", "2", "2,2"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("cox not-torsor"), "{}", stdout(&out));
    let out = toric(&["tower", "--demo-iteration2", "2", "2,x"]);
    assert_eq!(code(&out), 2);
}
