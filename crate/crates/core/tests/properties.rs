use std::collections::BTreeSet;

use mcg_core::presentations::*;
use mcg_core::prover::*;
use mcg_core::reps::*;
use mcg_core::surface;
use mcg_core::words::*;
use proptest::prelude::*;

fn sp(g: u32, n: u32) -> SurfaceParams {
    SurfaceParams::new(g, n).unwrap()
}

fn word_over(gens: Vec<GeneratorSymbol>, max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..gens.len(), any::<bool>()), 0..max)
        .prop_map(move |v| Word::from_letters(v.into_iter().map(|(i, inv)| Letter::new(gens[i].clone(), inv)).collect()))
}

fn g20_word(max: usize) -> impl Strategy<Value = Word> {
    word_over(sp(2, 0).generators(), max)
}

fn sigma_word(strands: u32, max: usize) -> impl Strategy<Value = Word> {
    word_over((1..strands).map(sigma).collect(), max)
}

fn x_word(max: usize) -> impl Strategy<Value = Word> {
    word_over((0..4).map(surface::x).collect(), max)
}

fn twist_word(max: usize) -> impl Strategy<Value = Word> {
    let p = sp(2, 0);
    word_over(vec![p.a(1), GeneratorSymbol::B, p.a(2), GeneratorSymbol::Bk(1), p.c(1, 2)], max)
}

proptest! {
    #[test]
    fn free_reduce_is_idempotent(x in g20_word(30)) {
        let r = x.free_reduce();
        prop_assert_eq!(r.free_reduce(), r.clone());
        prop_assert!(r.len() <= x.len());
        prop_assert_eq!(r.len() % 2, x.len() % 2);
    }

    #[test]
    fn word_times_inverse_is_empty(x in g20_word(30)) {
        prop_assert!(x.concat(&x.invert()).free_reduce().is_empty());
    }

    #[test]
    fn print_parse_round_trip(x in g20_word(30)) {
        let r = x.free_reduce();
        prop_assert_eq!(parse_word(&print_word(&r), None).unwrap(), r);
    }

    #[test]
    fn conjugation_undoes_itself(x in g20_word(12), y in g20_word(12)) {
        let back = Word::conjugate(&y, &Word::conjugate(&y.invert(), &x));
        prop_assert_eq!(back, x.free_reduce());
    }

    #[test]
    fn search_results_replay(x in g20_word(5)) {
        let p = gervais(sp(2, 0), Mode::Full);
        let cfg = SearchConfig { max_depth: 2, max_length: 14, relators: None, max_states: 3_000 };
        let target = x.free_reduce();
        let y = if target.len() >= 3 { target.substitute(0, 3, &target.subword(0, 3).unwrap()).unwrap() } else { target };
        if let Some(s) = search_equal(&p, &x, &y, &cfg) {
            prop_assert!(check_script(&p, &s).is_ok());
        }
    }

    #[test]
    fn braid_oracle_is_an_equivalence(x in sigma_word(4, 8), y in sigma_word(4, 8), z in sigma_word(4, 8)) {
        prop_assert!(braid_oracle_equal(&x, &x, 4).unwrap());
        let xy = braid_oracle_equal(&x, &y, 4).unwrap();
        prop_assert_eq!(xy, braid_oracle_equal(&y, &x, 4).unwrap());
        if xy && braid_oracle_equal(&y, &z, 4).unwrap() {
            prop_assert!(braid_oracle_equal(&x, &z, 4).unwrap());
        }
        let rel = Word::product([&x, &w("s1 s2 s1 s2' s1' s2'"), &x.invert()]);
        prop_assert!(braid_oracle_equal(&Word::product([&y, &rel]), &y, 4).unwrap());
    }

    #[test]
    fn word_matrix_is_multiplicative(u in g20_word(12), v in g20_word(12)) {
        let rep = TransvectionRep::gervais(&sp(2, 0));
        let uv = word_matrix(&u.concat(&v), &rep).unwrap();
        let prod = word_matrix(&u, &rep).unwrap().mul(&word_matrix(&v, &rep).unwrap());
        prop_assert_eq!(uv, prod);
        prop_assert!(word_matrix(&u.concat(&u.invert()), &rep).unwrap().is_identity());
    }

    #[test]
    fn abelianization_ignores_order(seed in any::<u64>()) {
        let p = birman_hilden_2_0();
        let mut q = Presentation::new("shuffled", p.generators.clone());
        let mut rels = p.relators.clone();
        let mut gens = p.generators.clone();
        let n = rels.len();
        for i in 0..n {
            rels.swap(i, (seed as usize).wrapping_mul(31).wrapping_add(i * 7) % n);
        }
        let shift = (seed % gens.len() as u64) as usize;
        gens.rotate_left(shift);
        q.generators = gens;
        for r in rels {
            q.push(r.id, r.word, r.provenance).unwrap();
        }
        prop_assert_eq!(abelianization(&q), abelianization(&p));
    }

    #[test]
    fn dehn_reduce_does_not_lengthen(x in x_word(16)) {
        let r = surface::dehn_reduce(&x);
        prop_assert!(r.len() <= x.free_reduce().len());
        prop_assert_eq!(surface::dehn_reduce(&r), r.clone());
    }

    #[test]
    fn relator_conjugates_are_trivial(u in x_word(6), k in 0usize..8) {
        let r = surface::surface_relator().rotate(k);
        prop_assert!(surface::is_trivial(&Word::conjugate(&u, &r)));
    }

    #[test]
    fn twist_words_act_by_automorphisms(t in twist_word(6)) {
        let f = surface::word_action(&t).unwrap();
        prop_assert!(f.preserves_relator());
        let back = surface::word_action(&t.invert()).unwrap();
        prop_assert!(surface::automorphisms_equal(&f.compose(&back), &surface::SurfaceAutomorphism::identity()));
    }
}

#[test]
fn good_triples_match_brute_force() {
    for n_curves in 2..=6u32 {
        let (g, n) = if n_curves % 2 == 0 { (n_curves / 2 + 1, 0) } else { (n_curves.div_ceil(2), 1) };
        let p = sp(g, n);
        assert_eq!(p.n_curves(), n_curves);
        let mut brute = Vec::new();
        for i in 1..=n_curves {
            for j in 1..=n_curves {
                for k in 1..=n_curves {
                    let cyc = (i <= j && j <= k) || (j <= k && k <= i) || (k <= i && i <= j);
                    if cyc && !(i == j && j == k) {
                        brute.push(GoodTriple::new(i, j, k));
                    }
                }
            }
        }
        assert_eq!(good_triples(&p, false), brute);
        let classes: BTreeSet<GoodTriple> = brute.iter().map(|t| t.canonical_rotation()).collect();
        assert_eq!(good_triples(&p, true), classes.into_iter().collect::<Vec<_>>());
    }
}

#[test]
fn relators_follow_the_intersection_table() {
    for (g, n) in [(2, 0), (2, 1), (3, 1), (3, 2)] {
        let p = sp(g, n);
        let full = gervais(p, Mode::Full);
        let gens = p.generators();
        for (i, x) in gens.iter().enumerate() {
            for y in &gens[i + 1..] {
                let id = braid_id(x, y);
                let class = intersection_class(x, y, &p, Mode::Full).unwrap();
                let (wx, wy) = (Word::gen(x.clone()), Word::gen(y.clone()));
                let (a, b) = if full.relator(&id).is_some_and(|r| r.word.letters()[0].symbol == *x) { (wx, wy) } else { (wy, wx) };
                match class {
                    IntersectionClass::Once => assert_eq!(full.relator(&id).unwrap().word, braid_word(&a, &b)),
                    IntersectionClass::Disjoint => assert_eq!(full.relator(&id).unwrap().word, commutator(&a, &b)),
                    IntersectionClass::Other => assert!(full.relator(&id).is_none()),
                }
            }
        }
    }
}

#[test]
fn handle_curves_meet_everything_alike() {
    for (g, n) in [(2, 0), (2, 1), (3, 1), (3, 2), (4, 1)] {
        let p = sp(g, n);
        for k in 1..g {
            let (u, v) = (p.c(2 * k, 2 * k + 1), p.c(2 * k - 1, 2 * k));
            for z in p.generators() {
                if z == u || z == v {
                    continue;
                }
                assert_eq!(
                    intersection_class(&u, &z, &p, Mode::Full).unwrap(),
                    intersection_class(&v, &z, &p, Mode::Full).unwrap(),
                    "({g},{n}) handle {k} against {z}"
                );
            }
        }
    }
}

#[test]
fn conservative_relators_are_full_relators() {
    for (g, n) in [(2, 0), (2, 1), (3, 1), (3, 2)] {
        let p = sp(g, n);
        let full = gervais(p, Mode::Full);
        let cons = gervais(p, Mode::Conservative);
        assert!(cons.relators.len() < full.relators.len());
        for r in &cons.relators {
            assert_eq!(full.relator(&r.id).map(|f| &f.word), Some(&r.word), "{}", r.id);
        }
    }
}

#[test]
fn relators_and_lanterns_are_trivial_in_homology() {
    for (g, n) in [(2, 0), (2, 1), (3, 1), (3, 2)] {
        let p = sp(g, n);
        let rep = TransvectionRep::gervais(&p);
        let pres = gervais_with(p, GervaisOptions { lanterns: true, ..Default::default() });
        assert_eq!(pres.relators.iter().any(|r| r.id.starts_with("lantern-alt(")), p.n_curves() >= 3);
        assert_eq!(nontrivial_relators(&pres, &rep).unwrap(), Vec::<String>::new(), "({g},{n})");
        assert!(rep.table.pairing_violations(&p, Mode::Full).is_empty());
    }
}

#[test]
fn combinators_keep_input_relators() {
    let ext = surface::extension_2_1().unwrap();
    for r in &surface::surface_presentation().relators {
        assert!(ext.relator(&r.id).is_some());
    }
    let am = amalgam_3_1();
    for r in &gervais(sp(3, 1), Mode::Full).relators {
        assert!(am.relator(&r.id).is_some());
    }
}
