use mcg_core::presentations::{intersection_class, IntersectionClass, Mode, SurfaceParams};
use mcg_core::surface::*;
use mcg_core::words::{w, Letter, Word};

fn twists() -> Vec<Word> {
    ["a1", "b", "a2", "b1", "c{1,2}"].into_iter().map(w).collect()
}

#[test]
fn five_actions_are_automorphisms() {
    for t in twists() {
        let f = twist_action(&t.letters()[0].symbol).unwrap();
        assert!(f.preserves_relator(), "{t}");
        let back = word_action(&t.concat(&t.invert())).unwrap();
        assert!(automorphisms_equal(&back, &SurfaceAutomorphism::identity()), "{t}");
        let back = word_action(&t.invert().concat(&t)).unwrap();
        assert!(automorphisms_equal(&back, &SurfaceAutomorphism::identity()), "{t}");
    }
}

#[test]
fn braid_relations_hold_on_the_surface_group() {
    let p = SurfaceParams::new(2, 0).unwrap();
    let ts = twists();
    for (i, x) in ts.iter().enumerate() {
        for y in &ts[i + 1..] {
            let (sx, sy) = (&x.letters()[0].symbol, &y.letters()[0].symbol);
            match intersection_class(sx, sy, &p, Mode::Full).unwrap() {
                IntersectionClass::Once => {
                    let l = word_action(&Word::product([x, y, x])).unwrap();
                    let r = word_action(&Word::product([y, x, y])).unwrap();
                    assert!(automorphisms_equal(&l, &r), "{x} {y}");
                }
                IntersectionClass::Disjoint => {
                    let comm = Word::product([x, y, &x.invert(), &y.invert()]);
                    assert!(automorphisms_equal(&word_action(&comm).unwrap(), &SurfaceAutomorphism::identity()), "{x} {y}");
                }
                IntersectionClass::Other => panic!("unexpected class for {x} {y}"),
            }
        }
    }
}

#[test]
fn star_element_is_point_pushing() {
    let f = word_action(&w("a1 a1 a2 b").pow(3).concat(&w("c{1,2}' c{1,2}'"))).unwrap();
    let g = is_inner(&f, 6).expect("inner within bound 6");
    assert!(is_trivial(&g.concat(&w("x2 x1' x0").invert())), "conjugator {g}");
    assert!(automorphisms_equal(&f, &SurfaceAutomorphism::conjugation(&w("x2 x1' x0"))));
}

#[test]
fn a_single_twist_is_not_inner() {
    let f = word_action(&w("a1")).unwrap();
    assert_eq!(is_inner(&f, 3), None);
}

#[test]
fn dehn_agrees_with_normal_closure_on_short_words() {
    let ball = normal_closure_ball(1, 2, 4);
    let letters: Vec<Letter> = (0..4).flat_map(|i| [Letter::pos(x(i)), Letter::new(x(i), true)]).collect();
    let mut layer: Vec<Vec<Letter>> = vec![vec![]];
    let mut checked = 0;
    for _ in 0..=4 {
        let mut next = Vec::new();
        for v in &layer {
            let word = Word::from_letters(v.clone());
            assert_eq!(is_trivial(&word), ball.contains(&word), "{word}");
            checked += 1;
            for l in &letters {
                if v.last().is_some_and(|p| p.cancels(l)) {
                    continue;
                }
                let mut u = v.clone();
                u.push(l.clone());
                next.push(u);
            }
        }
        layer = next;
    }
    assert_eq!(checked, 1 + (1..=4).map(|k| 8 * 7usize.pow(k - 1)).sum::<usize>());
}

#[test]
fn dehn_reduce_never_lengthens() {
    let r = surface_relator();
    for k in 0..8 {
        let v = r.rotate(k).subword(0, 6).unwrap().concat(&w("x1 x2'"));
        assert!(dehn_reduce(&v).len() <= v.free_reduce().len());
    }
}

#[test]
fn normal_closure_elements_reduce_to_empty() {
    let ball = normal_closure_ball(1, 2, 10);
    assert!(ball.len() > 100);
    for v in &ball {
        assert!(is_trivial(v), "{v}");
    }
}
