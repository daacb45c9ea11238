use mcg_core::prover::*;
use mcg_core::words::{w, Letter, Word};

fn reduced_words(max: usize) -> Vec<Word> {
    let letters: Vec<Letter> = (1..=2).flat_map(|i| [Letter::pos(sigma(i)), Letter::new(sigma(i), true)]).collect();
    let mut all = vec![Vec::<Letter>::new()];
    let mut layer = all.clone();
    for _ in 0..max {
        let mut next = Vec::new();
        for v in &layer {
            for l in &letters {
                if v.last().is_some_and(|p| p.cancels(l)) {
                    continue;
                }
                let mut u = v.clone();
                u.push(l.clone());
                next.push(u);
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    all.into_iter().map(Word::from_letters).collect()
}

#[test]
fn full_twist_identity_in_six_strands() {
    let c = w("a1 b a2 b1 c{1,2}");
    let lhs = c.pow(6);
    let rhs = Word::product([&c.pow(2), &w("b1 a2 b a1 c{1,2} b1 a2 b"), &w("a2 b1 c{1,2}").pow(4)]);
    assert!(braid_oracle_equal(&chain_to_sigma(&lhs), &chain_to_sigma(&rhs), 6).unwrap());
    let wrong = Word::product([&c.pow(2), &w("b1 a2 b a1 c{1,2} b1 a2 b"), &w("a2 b1 c{1,2}").pow(3)]);
    assert!(!braid_oracle_equal(&chain_to_sigma(&lhs), &chain_to_sigma(&wrong), 6).unwrap());
}

#[test]
fn oracle_agrees_with_search_on_short_words() {
    let p = braid_presentation(3);
    let cfg = SearchConfig { max_depth: 2, max_length: 10, relators: None, max_states: 5_000 };
    let words = reduced_words(6);
    assert_eq!(words.len(), 1 + 4 * (3usize.pow(6) - 1) / 2);
    let mut trivial = 0;
    for x in &words {
        let oracle = braid_oracle_equal(x, &Word::empty(), 3).unwrap();
        let found = search_equal(&p, x, &Word::empty(), &cfg);
        if let Some(s) = &found {
            assert!(check_script(&p, s).is_ok());
        }
        assert_eq!(oracle, found.is_some(), "{x}");
        trivial += oracle as usize;
    }
    assert!(trivial > 1);
}

#[test]
fn oracle_agrees_with_search_on_pairs() {
    let p = braid_presentation(3);
    let cfg = SearchConfig { max_depth: 2, max_length: 10, relators: None, max_states: 5_000 };
    let words = reduced_words(3);
    let mut equal = 0;
    for x in &words {
        for y in &words {
            let oracle = braid_oracle_equal(x, y, 3).unwrap();
            let found = search_equal(&p, x, y, &cfg).is_some();
            assert_eq!(oracle, found, "{x} vs {y}");
            equal += oracle as usize;
        }
    }
    assert!(equal > words.len());
}
