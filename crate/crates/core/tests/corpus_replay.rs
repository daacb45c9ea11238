use std::time::Instant;

use mcg_core::prover::*;

fn scripts() -> Vec<ProofScript> {
    load_script_dir(&bundled_corpus_dir().join("scripts")).unwrap()
}

#[test]
fn corpus_replays() {
    let all = scripts();
    assert!(all.len() >= 30, "only {} scripts", all.len());
    let t = Instant::now();
    let rep = check_corpus(&all, &mut PresentationRegistry::new());
    let bad: Vec<_> = rep.items.iter().filter(|(_, s)| *s != ScriptStatus::Ok).collect();
    assert!(bad.is_empty(), "{bad:?}");
    assert!(t.elapsed().as_secs_f64() < 10.0);
    for prefix in ["L2.1-", "L2.2", "E-fix-", "L2.3-", "S2-iii", "X-1-4", "L3.3-", "S4-", "S51-", "S52-", "S53-"] {
        assert!(all.iter().any(|s| s.name.starts_with(prefix)), "{prefix}");
    }
}

#[test]
fn every_single_step_mutant_is_rejected() {
    let rep = mutation_suite(&scripts(), &mut PresentationRegistry::new());
    assert!(rep.skipped.is_empty(), "{:?}", rep.skipped);
    assert!(rep.mutants > 1000);
    assert!(rep.survivors.is_empty(), "{} survivors, first {:?}", rep.survivors.len(), rep.survivors.iter().take(10).collect::<Vec<_>>());
}

#[test]
fn scripts_match_their_chains() {
    let dir = bundled_corpus_dir();
    let chains = load_chain_dir(&dir.join("chains")).unwrap();
    let all = scripts();
    assert_eq!(chains.len(), all.len());
    for (_, c) in &chains {
        let s = all.iter().find(|s| s.name == c.name).unwrap_or_else(|| panic!("no script for {}", c.name));
        assert_eq!(s.presentation, c.presentation);
    }
}
