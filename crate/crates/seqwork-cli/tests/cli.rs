//! Golden tests for the command line. `UPDATE_GOLDEN=1` rewrites the files.

use std::path::PathBuf;
use std::process::Command;

fn dir(sub: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join(sub)
}

fn data(name: &str) -> String {
    dir("data").join(name).to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_seqwork")).args(args).env("NO_COLOR", "1").current_dir(dir("data")).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn golden(name: &str, args: &[&str], code: i32) {
    let (c, out, err) = run(args);
    assert_eq!(c, code, "{args:?}\nstdout:\n{out}\nstderr:\n{err}");
    let path = dir("golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &out).unwrap();
        return;
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(out, want, "{name} differs from its golden file");
}

#[test]
fn decide() {
    golden("decide_peirce_ipc.txt", &["decide", "--logic", "ipc", "((p->q)->p)->p"], 1);
    golden("decide_peirce_cpc.json", &["--format", "structured", "decide", "--logic", "cpc", &data("peirce.fml")], 0);
    golden("decide_lax.txt", &["decide", "--logic", "ll", "OOp -> Op"], 0);
}

#[test]
fn prove_emit_and_check() {
    let tmp = std::env::temp_dir().join(format!("seqwork-cli-{}.drv", std::process::id()));
    let tmp_s = tmp.to_string_lossy().into_owned();
    golden("prove_lem_g3cp.txt", &["prove", "--calculus", "g3cp", "=> p | ~p", "--emit", &tmp_s], 0);
    let drv = std::fs::read_to_string(&tmp).unwrap();
    assert!(drv.starts_with("calculus G3cp\n"));
    let (c, out, _) = run(&["check", &tmp_s]);
    assert_eq!((c, out.as_str()), (0, "ok: => p | ~p\n"));
    // the same derivation is not a G3ip derivation
    let (c, out, _) = run(&["check", "--calculus", "g3ip", &tmp_s]);
    assert_ne!(c, 0, "{out}");
    std::fs::remove_file(tmp).ok();
    golden("prove_lem_g4ip.txt", &["prove", "--calculus", "g4ip", "=> p | ~p"], 1);
}

#[test]
fn classify() {
    golden("classify_g4ip.txt", &["classify", "--calculus", "g4ip"], 1);
    golden("classify_g3ip.json", &["--format", "structured", "classify", "--calculus", "g3ip"], 0);
}

#[test]
fn check_terminating() {
    golden("terminating_g4ip.txt", &["check-terminating", "--calculus", "g4ip"], 0);
    golden("terminating_g3ip.txt", &["check-terminating", "--calculus", "g3ip", "--measure", "degree"], 1);
}

#[test]
fn interpolate() {
    golden("interpolate_split.txt", &["interpolate", "--calculus", "g4ip", "p & q ; q -> r => r"], 0);
    golden("interpolate_formula.txt", &["interpolate", "--calculus", "g3cp", "p & q -> q | r", "--minimize", "5"], 0);
    golden("interpolate_unprovable.txt", &["interpolate", "--calculus", "g4ip", "p ; => q"], 1);
}

#[test]
fn uinterp() {
    golden("uinterp_cpc.txt", &["uinterp", "--logic", "cpc", "--atom", "p", "p => q"], 0);
    golden("uinterp_ipc.txt", &["uinterp", "--logic", "ipc", "--atom", "p", &data("small.seq"), "--verify", "6"], 0);
}

#[test]
fn natural_deduction() {
    golden("nd_redundant_cases.txt", &["normalize-nd", &data("redundant_cases.ndp")], 0);
    golden("nd_implication.txt", &["normalize-nd", &data("detour_implication.ndp"), "--system", "ndi"], 0);
    golden("nd_lem_ndi.txt", &["normalize-nd", &data("excluded_middle.ndp"), "--system", "ndi"], 1);
    golden("nd_lem_nd.txt", &["normalize-nd", &data("excluded_middle.ndp"), "--check-only"], 0);
    golden("nd_dangling.txt", &["normalize-nd", &data("dangling.ndp")], 1);
}

#[test]
fn hilbert() {
    golden("hlp_a_imp_a.txt", &["check-hilbert", &data("a_imp_a.hlp")], 0);
    golden("hlp_a_imp_a_bad.txt", &["check-hilbert", &data("a_imp_a_bad.hlp")], 1);
    golden("hlp_dne_hj.txt", &["check-hilbert", &data("dne.hlp")], 1);
    golden("hlp_dne_hk.txt", &["check-hilbert", &data("dne.hlp"), "--system", "hk"], 0);
    golden("hlp_deduce.txt", &["check-hilbert", &data("conjunction.hlp"), "--deduce", "1"], 0);
}

#[test]
fn gen_corpus() {
    golden("corpus_1_3.txt", &["gen-corpus", "--atoms", "1", "--max-weight", "3"], 0);
    let (c, out, _) = run(&["gen-corpus", "--atoms", "2", "--max-weight", "0"]);
    assert_eq!((c, out.as_str()), (0, ""));
    let (_, out, _) = run(&["gen-corpus", "--atoms", "1", "--max-weight", "2", "--kind", "sequents"]);
    assert_eq!(out.lines().next(), Some("=>"));
    let a = run(&["gen-corpus", "--atoms", "2", "--max-weight", "9", "--random", "5", "--seed", "11"]);
    let b = run(&["gen-corpus", "--atoms", "2", "--max-weight", "9", "--random", "5", "--seed", "11"]);
    assert_eq!(a, b);
    assert_eq!(a.1.lines().count(), 5);
}

#[test]
fn input_errors_exit_2() {
    for args in [&["decide", "--logic", "ipc", "p |"][..], &["decide", "--logic", "s4", "p"], &["prove", "--calculus", "nope", "=> p"], &["frobnicate"], &["normalize-nd", "missing.ndp"]] {
        let (c, _, err) = run(args);
        assert_eq!(c, 2, "{args:?}");
        assert!(!err.is_empty());
    }
}
