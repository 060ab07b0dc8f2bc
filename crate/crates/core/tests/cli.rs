//! Golden transcripts for the command-line interface. Set `UHAX_BLESS=1` to
//! rewrite them after an intended output change.

mod common;

use common::{golden_dir, run_cli, CASES};

#[test]
fn cli_goldens() {
    let bless = std::env::var_os("UHAX_BLESS").is_some();
    let mut failures = Vec::new();
    for (name, args) in CASES {
        let got = run_cli(args);
        let path = golden_dir().join(format!("{name}.txt"));
        if bless {
            std::fs::write(&path, &got).unwrap();
            continue;
        }
        let want = std::fs::read_to_string(&path)
            .unwrap_or_else(|_| panic!("missing golden {}", path.display()));
        if got != want {
            failures.push(format!("{name}:\n--- want\n{want}\n--- got\n{got}"));
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn output_file_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("pa.brasp");
    let t = run_cli(&["translate", "ltl-to-brasp", "-i", "pa.ltl", "-o", out.to_str().unwrap()]);
    assert!(t.starts_with("exit: 0\n--- stdout ---\n--- stderr ---\n"), "{t}");
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("lmost[t' < t, Q_a(t')] Q_a(t') : 0"));
}

#[test]
fn caps_from_environment() {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_uhax"))
        .args(["translate", "uhat-to-pofa", "-i", "two_layer.uhat"])
        .current_dir(common::fixtures())
        .env("UHAX_CAPS", "states=2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap of 2"));
}
