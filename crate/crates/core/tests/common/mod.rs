#![allow(dead_code)]

use std::path::PathBuf;
use std::process::Command;

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub fn fixture(name: &str) -> String {
    std::fs::read_to_string(fixtures().join(name)).unwrap()
}

/// Runs the binary from the fixture directory and renders exit code,
/// stdout, and stderr as one transcript.
pub fn run_cli(args: &[&str]) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_uhax"))
        .args(args)
        .current_dir(fixtures())
        .env_remove("UHAX_CAPS")
        .output()
        .expect("binary runs");
    format!(
        "exit: {}\n--- stdout ---\n{}--- stderr ---\n{}",
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    )
}

pub const CASES: &[(&str, &[&str])] = &[
    ("eval_pa_empty_lang", &["eval-ltl", "-f", "pa.ltl", "-w", "", "--lang"]),
    ("eval_pa_values", &["eval-ltl", "-f", "pa.ltl", "-w", "bab"]),
    ("eval_pa_pos_json", &["eval-ltl", "-f", "pa.ltl", "-w", "bab", "--pos", "3", "--json"]),
    ("eval_pa_pos_out_of_range", &["eval-ltl", "-f", "pa.ltl", "-w", "ab", "--pos", "4"]),
    ("eval_fa_start", &["eval-ltl", "-f", "fa.ltl", "-w", "ba", "--lang", "--convention", "start"]),
    ("eval_unknown_symbol", &["eval-ltl", "-f", "pa.ltl", "-w", "abc"]),
    ("run_brasp_trace", &["run-brasp", "-p", "mixed.brasp", "-w", "abba", "--trace"]),
    ("run_brasp_json", &["run-brasp", "-p", "prev.brasp", "-w", "aab", "--trace", "--json"]),
    ("run_uhat_trace", &["run-uhat", "-m", "leftmost_a.uhat", "-w", "ba", "--trace"]),
    ("run_uhat_empty", &["run-uhat", "-m", "leftmost_a.uhat", "-w", ""]),
    ("run_uhat_json", &["run-uhat", "-m", "two_layer.uhat", "-w", "bab", "--trace", "--json"]),
    ("translate_ltl_to_brasp", &["translate", "ltl-to-brasp", "-i", "pa.ltl"]),
    ("translate_ltl_to_brasp_rejects_since", &["translate", "ltl-to-brasp", "-i", "since.ltl"]),
    ("translate_brasp_to_ltl", &["translate", "brasp-to-ltl", "-i", "pa.brasp"]),
    ("translate_brasp_to_ltl_simplified", &["translate", "brasp-to-ltl", "-i", "mixed.brasp", "--simplify"]),
    ("translate_brasp_acceptance", &["translate", "brasp-to-ltl", "-i", "prev.brasp", "--acceptance"]),
    ("translate_cascade", &["translate", "cascade-to-brasp", "-i", "subseq_ab.cascade"]),
    ("translate_uhat_to_ltl", &["translate", "uhat-to-ltl", "-i", "leftmost_a.uhat", "--simplify"]),
    ("translate_uhat_to_pofa", &["translate", "uhat-to-pofa", "-i", "leftmost_a.uhat"]),
    ("translate_uhat_to_pofa_json", &["translate", "uhat-to-pofa", "-i", "two_layer.uhat", "--json"]),
    ("translate_mirror_ltl", &["translate", "mirror-ltl", "-i", "since.ltl"]),
    ("translate_mirror_brasp", &["translate", "mirror-brasp", "-i", "mixed.brasp"]),
    ("translate_left_to_right", &["translate", "left-to-right", "-i", "pa.brasp"]),
    ("classify_contains_a", &["classify", "-a", "contains_a.dfa"]),
    ("classify_endswith_a", &["classify", "-a", "endswith_a.dfa"]),
    ("classify_asigmab", &["classify", "-a", "asigmab.dfa"]),
    ("classify_parity", &["classify", "-a", "parity.dfa"]),
    ("equiv_positionwise", &["equiv", "-a", "ltl:pa.ltl", "-b", "brasp:pa.brasp", "--max-len", "5", "--positionwise"]),
    ("equiv_pa_fa", &["equiv", "-a", "ltl:pa.ltl", "-b", "ltl:fa.ltl", "--max-len", "6"]),
    ("equiv_dfa_uhat", &["equiv", "-a", "dfa:contains_a.dfa", "-b", "uhat:leftmost_a.uhat", "--max-len", "6", "--jobs", "2"]),
    ("equiv_dfa_ltl_json", &["equiv", "-a", "dfa:endswith_a.dfa", "-b", "ltl:pa.ltl", "--json"]),
    ("equiv_alphabet_mismatch", &["equiv", "-a", "dfa:parity.dfa", "-b", "ltl:pa.ltl"]),
    ("dot_contains_a", &["dot", "-a", "contains_a.dfa"]),
    ("gen_formula", &["gen", "formula", "--seed", "1", "--depth", "3"]),
    ("gen_formula_full", &["gen", "formula", "--seed", "2", "--fragment", "Full", "--alphabet-size", "3"]),
    ("gen_brasp", &["gen", "brasp", "--seed", "7", "--max-vectors", "3"]),
    ("gen_brasp_fr", &["gen", "brasp", "--seed", "8", "--restriction", "FR"]),
    ("gen_dfa", &["gen", "dfa", "--seed", "3"]),
    ("gen_uhat", &["gen", "uhat", "--seed", "5"]),
    ("missing_file", &["classify", "-a", "nope.dfa"]),
    ("bad_subcommand", &["frobnicate"]),
];
