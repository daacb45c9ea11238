use std::collections::HashMap;

use mcg_core::presentations::*;
use mcg_core::prover::*;

fn corpus() -> Vec<ProofScript> {
    load_script_dir(&bundled_corpus_dir().join("scripts")).unwrap()
}

#[test]
fn phi_sends_every_birman_hilden_relator_to_one() {
    let mut reg = PresentationRegistry::new();
    let tgt = gervais_compact_2_0();
    let (lemmas, certs) = certificates_for("phi", &tgt, &corpus(), &mut reg);
    let rep = verify_homomorphism(&birman_hilden_2_0(), &phi_images(), &tgt, &lemmas, &certs, &SearchConfig::default())
        .unwrap();
    assert_eq!(rep.rows.len(), 17);
    let bad: Vec<_> = rep.rows.iter().filter(|(_, s)| matches!(s, RelatorStatus::Failed(_))).collect();
    assert!(bad.is_empty(), "{bad:?}");
    for id in ["bh-iii", "bh-iv", "bh-v(1)", "bh-v(5)"] {
        assert!(rep.rows.iter().any(|(r, s)| r == id && *s == RelatorStatus::Certified), "{id}");
    }
}

#[test]
fn psi_sends_relations_one_and_two_to_one() {
    let mut reg = PresentationRegistry::new();
    let tgt = birman_hilden_2_0();
    let (lemmas, certs) = certificates_for("psi", &tgt, &corpus(), &mut reg);
    let src = gervais_compact_2_0();
    let rep = verify_homomorphism(&src, &psi_images(), &tgt, &lemmas, &certs, &SearchConfig::default()).unwrap();
    assert_eq!(rep.rows.len(), src.relators.len());
    assert!(rep.all_ok(), "{:?}", rep.rows);
    assert!(rep.rows.iter().any(|(r, s)| r == "star(1,1,2)" && *s == RelatorStatus::Certified));
}

#[test]
fn tampered_certificate_is_reported() {
    let mut reg = PresentationRegistry::new();
    let tgt = gervais_compact_2_0();
    let (lemmas, mut certs) = certificates_for("phi", &tgt, &corpus(), &mut reg);
    let cert = certs.get_mut("bh-iii").unwrap();
    cert.steps.pop();
    let cfg = SearchConfig { max_depth: 1, max_states: 1000, ..Default::default() };
    let rep = verify_homomorphism(&birman_hilden_2_0(), &phi_images(), &tgt, &lemmas, &certs, &cfg).unwrap();
    assert!(!rep.all_ok());
    let none: HashMap<String, ProofScript> = HashMap::new();
    let rep = verify_homomorphism(&birman_hilden_2_0(), &phi_images(), &tgt, &HashMap::new(), &none, &cfg).unwrap();
    assert!(rep.rows.iter().any(|(r, s)| r == "bh-iii" && matches!(s, RelatorStatus::Failed(_))));
}
