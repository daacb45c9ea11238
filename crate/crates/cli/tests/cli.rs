use std::fs;
use std::path::Path;
use std::process::Command;

use mcg_core::prover::bundled_corpus_dir;

struct Run {
    code: i32,
    stdout: String,
}

fn mcg_env(args: &[&str], corpus: Option<&Path>) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_mcg"));
    cmd.args(args);
    match corpus {
        Some(dir) => cmd.env("MCG_CORPUS_DIR", dir),
        None => cmd.env_remove("MCG_CORPUS_DIR"),
    };
    let out = cmd.output().expect("mcg runs");
    Run { code: out.status.code().unwrap_or(-1), stdout: String::from_utf8_lossy(&out.stdout).into_owned() }
}

fn mcg(args: &[&str]) -> Run {
    mcg_env(args, None)
}

fn copy_corpus(to: &Path) {
    for sub in ["chains", "scripts"] {
        fs::create_dir_all(to.join(sub)).unwrap();
        for e in fs::read_dir(bundled_corpus_dir().join(sub)).unwrap() {
            let p = e.unwrap().path();
            fs::copy(&p, to.join(sub).join(p.file_name().unwrap())).unwrap();
        }
    }
}

#[test]
fn presentation_genus_two_has_six_generators() {
    let r = mcg(&["presentation", "-g", "2", "-n", "0", "--mode", "full"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout.lines().filter(|l| l.starts_with("gen ")).count(), 6);
}

#[test]
fn presentation_with_boundary_has_distinct_star() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g21.pres");
    let r = mcg(&["presentation", "-g", "2", "-n", "1", "-o", out.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert!(fs::read_to_string(&out).unwrap().contains("rel star(1,2,3) : "));
}

#[test]
fn presentation_rejects_genus_one() {
    assert_eq!(mcg(&["presentation", "-g", "1", "-n", "0"]).code, 2);
    assert_eq!(mcg(&["presentation", "-g", "2", "--mode", "loose"]).code, 2);
}

#[test]
fn empty_check_passes_with_no_items() {
    let r = mcg(&["check"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("summary: 0 items, 0 passed, 0 failed"));
}

#[test]
fn full_corpus_passes() {
    let r = mcg(&["check", "--corpus"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert!(!r.stdout.contains("FAIL"));
}

#[test]
fn one_mutated_step_gives_one_failure() {
    let dir = tempfile::tempdir().unwrap();
    copy_corpus(dir.path());
    let file = dir.path().join("scripts/psi.script");
    let text = fs::read_to_string(&file).unwrap();
    let start = text.find("script psi-star(1,1,2) ").expect("leaf script present");
    let sub = start + text[start..].find("\nsub ").unwrap() + 5;
    let end = sub + text[sub..].find(' ').unwrap();
    let pos: usize = text[sub..end].parse().unwrap();
    let mutated = format!("{}{}{}", &text[..sub], pos + 1, &text[end..]);
    fs::write(&file, mutated).unwrap();
    let r = mcg_env(&["check", "--corpus"], Some(dir.path()));
    assert_eq!(r.code, 1, "{}", r.stdout);
    assert_eq!(r.stdout.lines().filter(|l| l.starts_with("FAIL")).count(), 1, "{}", r.stdout);
    assert!(r.stdout.contains("FAIL psi-star(1,1,2)"));
}

#[test]
fn parse_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.script");
    fs::write(&f, "script x over gervais(2,0)\nstart: a1\nsub zero\n").unwrap();
    let r = mcg(&["check", f.to_str().unwrap()]);
    assert_eq!(r.code, 2);
}

#[test]
fn check_reports_are_deterministic() {
    let a = mcg(&["--json", "check", "--corpus", "--mutations"]);
    let b = mcg(&["--json", "--jobs", "1", "check", "--corpus", "--mutations"]);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_str(&a.stdout).unwrap();
    let items = v["items"].as_array().unwrap();
    assert_eq!(v["summary"]["total"].as_u64().unwrap() as usize, items.len());
    assert_eq!(v["summary"]["failed"], 0);
    let ids: Vec<&str> = items.iter().map(|i| i["id"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
    assert!(v["inputs"].as_array().unwrap().iter().all(|d| d["sha256"].as_str().unwrap().len() == 64));
    assert!(items.iter().all(|i| i.get("elapsed_ms").is_none()));
    let timed = mcg(&["--json", "--timings", "check", "--corpus"]);
    let v: serde_json::Value = serde_json::from_str(&timed.stdout).unwrap();
    assert!(v["items"].as_array().unwrap().iter().all(|i| i["elapsed_ms"].is_number()));
}

#[test]
fn corpus_dir_override_is_used() {
    let dir = tempfile::tempdir().unwrap();
    copy_corpus(dir.path());
    let r = mcg_env(&["check", "--corpus"], Some(dir.path()));
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains(&dir.path().display().to_string()));
}

#[test]
fn oracle_values() {
    let r = mcg(&["oracles", "-p", "gervais(2,0)", "--abelianize", "--closure", "2"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("abelianize = [10]"));
    assert!(r.stdout.contains("closure mod 2 = 720"));
    let r = mcg(&["oracles", "-p", "gervais(3,1)", "--homology"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("relators trivial: all"));
    let r = mcg(&["oracles", "-p", "gervais(2,0)", "--abelianize", "--expect-abelian", "[12]"]);
    assert_eq!(r.code, 1);
    assert_eq!(mcg(&["oracles", "-p", "gervais(2,0)"]).code, 2);
    assert_eq!(mcg(&["oracles", "-p", "no-such-thing", "--abelianize"]).code, 2);
}

#[test]
fn oracles_accept_a_presentation_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g20.pres");
    assert_eq!(mcg(&["presentation", "-g", "2", "-o", out.to_str().unwrap()]).code, 0);
    let r = mcg(&["oracles", "-p", out.to_str().unwrap(), "--abelianize"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("[10]"));
    assert!(r.stdout.contains("sha256:"));
}

#[test]
fn homomorphisms_pass() {
    let r = mcg(&["homomorphism", "phi"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert!(r.stdout.contains("summary: 17 items, 17 passed, 0 failed"));
    assert_eq!(mcg(&["homomorphism", "psi"]).code, 0);
    assert_eq!(mcg(&["homomorphism", "chi"]).code, 2);
}

#[test]
fn search_prints_a_script() {
    let r = mcg(&["search", "-p", "gervais(2,0)", "a1 b a1", "b a1 b"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("by braid(a1,b)"));
    let r = mcg(&["search", "-p", "gervais(2,0)", "a1", "b", "--depth", "2"]);
    assert_eq!(r.code, 1);
}

#[test]
fn braid_subcommand() {
    let lhs = "(a1 b a2 b1 c{1,2})^6";
    let rhs = "(a1 b a2 b1 c{1,2})^2 b1 a2 b a1 c{1,2} b1 a2 b (a2 b1 c{1,2})^4";
    assert_eq!(mcg(&["braid", "--chain", lhs, rhs]).code, 0);
    assert_eq!(mcg(&["braid", "-m", "3", "s1 s2", "s2 s1"]).code, 1);
}

#[test]
fn surface_subcommands() {
    let r = mcg(&["surface", "act", "b", "on", "x0"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("= x1"));
    let r = mcg(&["surface", "inner", "(a1 a1 a2 b)^3 c{1,2}'^2", "--bound", "6"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("conjugation by x2 x1' x0"));
    assert_eq!(mcg(&["surface", "inner", "a1", "--bound", "2"]).code, 1);
    assert_eq!(mcg(&["surface", "equal", "x0 x1 x1'", "x0"]).code, 0);
    assert_eq!(mcg(&["surface", "equal", "x0", "x1"]).code, 1);
}

#[test]
fn derive_reproduces_shipped_scripts() {
    let r = mcg(&["derive", "--only", "L2"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert!(r.stdout.contains("ok   L2.2"));
}
