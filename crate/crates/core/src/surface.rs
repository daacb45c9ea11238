//! The fundamental group of the closed genus two surface, with Dehn's
//! algorithm, and the action of the five genus two twists on it.
//!
//! Generators are the Named symbols `x0..x3` with the single relator
//! `x3 x2' x1 x0' x3' x2 x1' x0`.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::presentations::{
    extension_presentation, gervais_compact_2_0, CentralData, ExponentKey, Presentation, PresentationError, Provenance,
};
use crate::words::{GeneratorSymbol, Letter, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("no surface action for generator {0}")]
    Unsupported(String),
    #[error("the images of {0} do not preserve the surface relator")]
    NotAutomorphism(String),
    #[error("no inverse found for the action of {0}")]
    NoInverse(String),
}

pub fn x(i: usize) -> GeneratorSymbol {
    GeneratorSymbol::named(&format!("x{i}"))
}

fn xw(i: usize) -> Word {
    Word::gen(x(i))
}

fn xi(w: &Word) -> Word {
    w.invert()
}

fn index_of(s: &GeneratorSymbol) -> Option<usize> {
    let l = s.label()?;
    let i: usize = l.strip_prefix('x')?.parse().ok()?;
    (i < 4).then_some(i)
}

/// `x3 x2' x1 x0' x3' x2 x1' x0`.
pub fn surface_relator() -> Word {
    Word::product([&xw(3), &xi(&xw(2)), &xw(1), &xi(&xw(0)), &xi(&xw(3)), &xw(2), &xi(&xw(1)), &xw(0)])
}

/// The one-relator presentation of the surface group.
pub fn surface_presentation() -> Presentation {
    let mut p = Presentation::new("surface-pi1(2)", (0..4).map(x).collect());
    p.push("surface", surface_relator(), Provenance::Imported).expect("single relator");
    p
}

/// All cyclic rotations of the relator and its inverse.
fn relator_rotations() -> Vec<Vec<Letter>> {
    let r = surface_relator();
    let mut out = Vec::new();
    for w in [r.clone(), r.invert()] {
        for k in 0..w.len() {
            out.push(w.rotate(k).into_letters());
        }
    }
    out
}

/// Dehn's algorithm: while some subword is more than half of a cyclic
/// rotation of the relator or its inverse, replace it by the inverse of the
/// complementary part. The leftmost start wins, then the longest match.
pub fn dehn_reduce(w: &Word) -> Word {
    let rots = relator_rotations();
    let n = rots[0].len();
    let mut cur = w.free_reduce().into_letters();
    'outer: loop {
        for i in 0..cur.len() {
            let mut best: Option<(usize, usize)> = None;
            for (ri, rho) in rots.iter().enumerate() {
                let m = cur[i..].iter().zip(rho).take_while(|(a, b)| a == b).count();
                if 2 * m > n && best.is_none_or(|(bm, _)| m > bm) {
                    best = Some((m, ri));
                }
            }
            if let Some((m, ri)) = best {
                let rest = Word::from_letters(rots[ri][m..].to_vec()).invert();
                cur.splice(i..i + m, rest.into_letters());
                cur = Word::from_letters(cur).free_reduce().into_letters();
                continue 'outer;
            }
        }
        return Word::from_letters(cur);
    }
}

/// Whether `w` is trivial in the surface group.
pub fn is_trivial(w: &Word) -> bool {
    dehn_reduce(w).is_empty()
}

/// An endomorphism of the surface group given by the images of `x0..x3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceAutomorphism {
    pub images: [Word; 4],
}

impl SurfaceAutomorphism {
    pub fn identity() -> Self {
        SurfaceAutomorphism { images: [xw(0), xw(1), xw(2), xw(3)] }
    }

    /// Conjugation `w -> g w g^-1`.
    pub fn conjugation(g: &Word) -> Self {
        let images = [0, 1, 2, 3].map(|i| dehn_reduce(&Word::conjugate(g, &xw(i))));
        SurfaceAutomorphism { images }
    }

    pub fn from_images(images: [Word; 4]) -> Self {
        SurfaceAutomorphism { images }
    }

    /// Image of a word over `x0..x3`, reduced by Dehn's algorithm.
    pub fn apply(&self, w: &Word) -> Word {
        let raw = w.map_symbols(|s| index_of(s).map(|i| self.images[i].clone()));
        dehn_reduce(&raw)
    }

    /// `self` after `other`: `x -> self(other(x))`.
    pub fn compose(&self, other: &SurfaceAutomorphism) -> SurfaceAutomorphism {
        SurfaceAutomorphism { images: other.images.clone().map(|w| self.apply(&w)) }
    }

    /// Whether the image of the relator is freely conjugate to the relator
    /// or its inverse.
    pub fn preserves_relator(&self) -> bool {
        let raw = surface_relator().map_symbols(|s| index_of(s).map(|i| self.images[i].clone()));
        let core = raw.free_reduce().cyclic_reduce();
        relator_rotations().into_iter().any(|r| r == core.letters())
    }
}

impl fmt::Display for SurfaceAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, w) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "x{i} -> {}", if w.is_empty() { "1".to_string() } else { w.to_string() })?;
        }
        Ok(())
    }
}

pub fn automorphisms_equal(f: &SurfaceAutomorphism, h: &SurfaceAutomorphism) -> bool {
    f.images.iter().zip(&h.images).all(|(a, b)| is_trivial(&a.concat(&b.invert())))
}

fn word_of(text: &str) -> Word {
    crate::words::w(text)
}

/// The tabulated action of a twist on `x0..x3`.
pub fn twist_action(g: &GeneratorSymbol) -> Result<SurfaceAutomorphism, SurfaceError> {
    let imgs: [&str; 4] = match g {
        GeneratorSymbol::A(1) => ["x0", "x1 x0'", "x2 x0'", "x3 x0'"],
        GeneratorSymbol::B => ["x1", "x1 x0' x1", "x2", "x3"],
        GeneratorSymbol::A(2) => ["x0", "x2", "x2 x1' x2", "x3"],
        GeneratorSymbol::Bk(1) => ["x0", "x1", "x3", "x3 x2' x3"],
        GeneratorSymbol::C(1, 2) => ["x0", "x1", "x2", "x3 x2' x1 x0'"],
        other => return Err(SurfaceError::Unsupported(other.to_string())),
    };
    let f = SurfaceAutomorphism { images: imgs.map(word_of) };
    if !f.preserves_relator() {
        return Err(SurfaceError::NotAutomorphism(g.to_string()));
    }
    Ok(f)
}

/// Reduced words over `x0..x3` of length exactly `len`.
fn reduced_words(len: usize) -> Vec<Vec<Letter>> {
    let letters: Vec<Letter> = (0..4).flat_map(|i| [Letter::pos(x(i)), Letter::new(x(i), true)]).collect();
    let mut layer: Vec<Vec<Letter>> = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &layer {
            for l in &letters {
                if w.last().is_some_and(|p| p.cancels(l)) {
                    continue;
                }
                let mut v = w.clone();
                v.push(l.clone());
                next.push(v);
            }
        }
        layer = next;
    }
    layer
}

const INVERSE_SEARCH: usize = 5;

/// Inverse found by searching preimages of each generator, certified by
/// composing both ways.
pub fn inverse(f: &SurfaceAutomorphism) -> Option<SurfaceAutomorphism> {
    let mut images: Vec<Word> = Vec::new();
    for i in 0..4 {
        let target = xw(i);
        let found = (0..=INVERSE_SEARCH)
            .flat_map(reduced_words)
            .map(Word::from_letters)
            .find(|y| is_trivial(&f.apply(y).concat(&target.invert())))?;
        images.push(found);
    }
    let g = SurfaceAutomorphism { images: images.try_into().ok()? };
    let id = SurfaceAutomorphism::identity();
    (automorphisms_equal(&f.compose(&g), &id) && automorphisms_equal(&g.compose(f), &id)).then_some(g)
}

/// The action of a word in the five twists, composed right to left.
pub fn word_action(w: &Word) -> Result<SurfaceAutomorphism, SurfaceError> {
    let mut cache: Vec<(Letter, SurfaceAutomorphism)> = Vec::new();
    let mut acc = SurfaceAutomorphism::identity();
    for l in w.letters() {
        let f = match cache.iter().find(|(k, _)| k == l) {
            Some((_, f)) => f.clone(),
            None => {
                let base = twist_action(&l.symbol)?;
                let f = if l.inverse {
                    inverse(&base).ok_or_else(|| SurfaceError::NoInverse(l.symbol.to_string()))?
                } else {
                    base
                };
                cache.push((l.clone(), f.clone()));
                f
            }
        };
        acc = acc.compose(&f);
    }
    Ok(acc)
}

/// A word `g` of reduced length at most `bound` with `f` equal to
/// conjugation by `g`, shortest first.
pub fn is_inner(f: &SurfaceAutomorphism, bound: usize) -> Option<Word> {
    let mut seen: HashSet<Vec<Letter>> = HashSet::new();
    for len in 0..=bound {
        for g in reduced_words(len) {
            if !seen.insert(g.clone()) {
                continue;
            }
            let g = Word::from_letters(g);
            let gi = g.invert();
            let ok = (0..4).all(|i| is_trivial(&Word::product([&g, &xw(i), &gi, &f.images[i].invert()])));
            if ok {
                return Some(g);
            }
        }
    }
    None
}

/// Reduced words of length at most `max_len` in the set of products of at
/// most `factors` conjugates `u r u^-1`, with `r` a rotation of the relator
/// or its inverse and `u` of length at most `conj_len`. Brute force, for
/// cross-checking [`dehn_reduce`] on small words.
pub fn normal_closure_ball(conj_len: usize, factors: usize, max_len: usize) -> HashSet<Word> {
    let rots: Vec<Word> = relator_rotations().into_iter().map(Word::from_letters).collect();
    let mut conjugates: Vec<Word> = Vec::new();
    for len in 0..=conj_len {
        for u in reduced_words(len) {
            let u = Word::from_letters(u);
            for r in &rots {
                conjugates.push(Word::conjugate(&u, r).free_reduce());
            }
        }
    }
    conjugates.sort_by_key(|a| a.letters().len());
    conjugates.dedup();
    let mut out: HashSet<Word> = HashSet::from([Word::empty()]);
    let mut layer: Vec<Word> = vec![Word::empty()];
    for _ in 0..factors {
        let mut next = Vec::new();
        for p in &layer {
            for c in &conjugates {
                let q = p.concat(c).free_reduce();
                if q.len() <= max_len {
                    out.insert(q.clone());
                }
                next.push(q);
            }
        }
        layer = next;
    }
    out
}

/// Presentation of the genus two group with one boundary component as an
/// extension: the surface group by the closed genus two group, with the
/// boundary twist `c{3,1}` central. The action rows are the twist tables,
/// relation (2-2) lifts to `x2 x1' x0` and the boundary twist corrects the
/// action of `c{1,2}` on `x3` and the surface relator.
pub fn extension_2_1() -> Result<Presentation, PresentationError> {
    let pl = surface_presentation();
    let pr = gervais_compact_2_0();
    let mut action = BTreeMap::new();
    for r in &pr.generators {
        let f = twist_action(r).map_err(|e| PresentationError::MissingEntry(e.to_string()))?;
        for (i, img) in f.images.iter().enumerate() {
            action.insert((r.clone(), x(i)), img.clone());
        }
    }
    let mut lifted = BTreeMap::new();
    for rel in &pr.relators {
        let v = if rel.provenance == Provenance::Star { word_of("x0' x1 x2'") } else { Word::empty() };
        lifted.insert(rel.id.clone(), v);
    }
    let mut exponents = BTreeMap::new();
    exponents.insert(ExponentKey::Action(GeneratorSymbol::C(1, 2), x(3)), 1);
    for rel in &pr.relators {
        if rel.provenance == Provenance::Star {
            exponents.insert(ExponentKey::Lifted(rel.id.clone()), -1);
        }
    }
    exponents.insert(ExponentKey::Base("surface".into()), -2);
    let central = CentralData { symbol: GeneratorSymbol::C(3, 1), exponents };
    extension_presentation("extension(2,1)", &pl, &pr, &action, &lifted, Some(&central))
}
