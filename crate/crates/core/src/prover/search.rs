//! Bounded breadth-first search for derivations, and homomorphism checks.

use std::collections::{BTreeMap, HashMap, VecDeque};

use super::{certify, check_script, Justification, ProofScript, ProofStep, RelatorSource, WithLemmas};
use crate::presentations::Presentation;
use crate::words::{GeneratorSymbol, Letter, Word};

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub max_depth: usize,
    pub max_length: usize,
    /// Restrict moves to these relator ids.
    pub relators: Option<Vec<String>>,
    pub max_states: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { max_depth: 6, max_length: 40, relators: None, max_states: 200_000 }
    }
}

/// Steps deleting cancelling pairs until the word is reduced, always taking
/// the leftmost pair.
pub fn cancellation_steps(w: &Word) -> (Vec<ProofStep>, Word) {
    let mut letters = w.letters().to_vec();
    let mut steps = Vec::new();
    let mut i = 0;
    while i + 1 < letters.len() {
        if letters[i].cancels(&letters[i + 1]) {
            steps.push(ProofStep::Del { pos: i, gen: Some(letters[i].clone()) });
            letters.drain(i..i + 2);
            i = i.saturating_sub(1);
        } else {
            i += 1;
        }
    }
    (steps, Word::from_letters(letters))
}

/// A rewrite pattern: replace `from` by `to`, certified by `just`.
#[derive(Debug, Clone)]
pub(crate) struct Pattern {
    pub from: Vec<Letter>,
    pub to: Word,
    pub just: Justification,
}

/// All patterns `u -> s^-1` with `u s` a rotation of a relator or its
/// inverse and `u` nonempty.
pub(crate) fn patterns(rels: &[(String, Word)]) -> Vec<Pattern> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for (id, rel) in rels {
        let rel = rel.cyclic_reduce();
        for inverse in [false, true] {
            let r = if inverse { rel.invert() } else { rel.clone() };
            for rot in 0..r.len() {
                let rho = r.rotate(rot);
                for m in 1..=rho.len() {
                    let from = rho.letters()[..m].to_vec();
                    let to = Word::from_letters(rho.letters()[m..].to_vec()).invert();
                    if seen.insert((from.clone(), to.clone())) {
                        out.push(Pattern { from, to, just: Justification { id: id.clone(), inverse, rot } });
                    }
                }
            }
        }
    }
    out
}

/// Steps rewriting reduced `a` at `pos` with pattern `pat`, reducing the
/// result. A single substitution is emitted when the cancellation can be
/// folded into the window.
pub(crate) fn emit_rewrite(src: &dyn RelatorSource, a: &Word, pos: usize, pat: &Pattern) -> (Vec<ProofStep>, Word) {
    let m = pat.from.len();
    let raw = a.substitute(pos, m, &pat.to).expect("pattern occurrence in range");
    let b = raw.free_reduce();
    let (al, bl) = (a.letters(), b.letters());
    let mut cp = 0;
    while cp < pos && cp < bl.len() && al[cp] == bl[cp] {
        cp += 1;
    }
    let mut cs = 0;
    while cs < al.len() - pos - m && cs + cp < bl.len() && al[al.len() - 1 - cs] == bl[bl.len() - 1 - cs] {
        cs += 1;
    }
    let removed = Word::from_letters(al[cp..al.len() - cs].to_vec());
    let repl = Word::from_letters(bl[cp..bl.len() - cs].to_vec());
    if let Some(just) = certify(src, &removed, &repl, [pat.just.id.as_str()]) {
        let step = ProofStep::Sub { pos: cp, len: removed.len(), replacement: repl, just };
        return (vec![step], b);
    }
    let mut steps = vec![ProofStep::Sub { pos, len: m, replacement: pat.to.clone(), just: pat.just.clone() }];
    let (dels, reduced) = cancellation_steps(&raw);
    steps.extend(dels);
    (steps, reduced)
}

pub fn search_equal(p: &Presentation, w1: &Word, w2: &Word, cfg: &SearchConfig) -> Option<ProofScript> {
    let rels: Vec<(String, Word)> = p.relators.iter().map(|r| (r.id.clone(), r.word.clone())).collect();
    search_with(p, &rels, w1, w2, cfg, "search", &p.name)
}

/// Breadth-first search over reduced words.
pub fn search_with(
    src: &dyn RelatorSource,
    rels: &[(String, Word)],
    w1: &Word,
    w2: &Word,
    cfg: &SearchConfig,
    name: &str,
    pres_name: &str,
) -> Option<ProofScript> {
    let rels: Vec<(String, Word)> = match &cfg.relators {
        Some(ids) => rels.iter().filter(|(id, _)| ids.contains(id)).cloned().collect(),
        None => rels.to_vec(),
    };
    let pats = patterns(&rels);
    let mut by_first: HashMap<&Letter, Vec<usize>> = HashMap::new();
    for (i, p) in pats.iter().enumerate() {
        by_first.entry(&p.from[0]).or_default().push(i);
    }
    let (mut steps, start) = cancellation_steps(w1);
    let goal = w2.free_reduce();
    // parent index and (pos, pattern) leading to each state
    let mut states: Vec<(Word, usize, usize, usize, usize)> = vec![(start.clone(), usize::MAX, 0, 0, 0)];
    let mut index: HashMap<Word, usize> = HashMap::from([(start.clone(), 0)]);
    let mut queue = VecDeque::from([0usize]);
    let mut found = if start == goal { Some(0) } else { None };
    while found.is_none() {
        let Some(si) = queue.pop_front() else { break };
        let (cur, _, _, _, depth) = states[si].clone();
        if depth >= cfg.max_depth {
            continue;
        }
        'expand: for pos in 0..cur.len() {
            let Some(cands) = by_first.get(&cur.letters()[pos]) else { continue };
            for &pi in cands {
                let pat = &pats[pi];
                let m = pat.from.len();
                if pos + m > cur.len() || cur.letters()[pos..pos + m] != pat.from[..] {
                    continue;
                }
                let next = cur.substitute(pos, m, &pat.to).expect("in range").free_reduce();
                if next.len() > cfg.max_length || index.contains_key(&next) {
                    continue;
                }
                let ni = states.len();
                index.insert(next.clone(), ni);
                let hit = next == goal;
                states.push((next, si, pos, pi, depth + 1));
                if hit {
                    found = Some(ni);
                    break 'expand;
                }
                if states.len() > cfg.max_states {
                    return None;
                }
                queue.push_back(ni);
            }
        }
    }
    let mut chain = Vec::new();
    let mut at = found?;
    while states[at].1 != usize::MAX {
        chain.push(at);
        at = states[at].1;
    }
    chain.reverse();
    for ni in chain {
        let (_, parent, pos, pi, _) = &states[ni];
        let (s, _) = emit_rewrite(src, &states[*parent].0, *pos, &pats[*pi]);
        steps.extend(s);
    }
    let script = ProofScript {
        name: name.to_string(),
        presentation: pres_name.to_string(),
        start: w1.clone(),
        steps,
        end: w2.clone(),
    };
    debug_assert!(check_script(src, &script).is_ok());
    Some(script)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RelatorStatus {
    /// A supplied certificate replayed successfully.
    Certified,
    /// No certificate was supplied; search found this derivation.
    Searched(ProofScript),
    Failed(String),
}

#[derive(Debug, Clone)]
pub struct HomomorphismReport {
    pub rows: Vec<(String, RelatorStatus)>,
}

impl HomomorphismReport {
    pub fn all_ok(&self) -> bool {
        self.rows.iter().all(|(_, s)| !matches!(s, RelatorStatus::Failed(_)))
    }
}

/// Check that `images` sends every relator of `src` to the identity of the
/// target, using a certificate script from the image to the empty word when
/// one is supplied and bounded search otherwise.
pub fn verify_homomorphism(
    src: &Presentation,
    images: &BTreeMap<GeneratorSymbol, Word>,
    tgt: &Presentation,
    lemmas: &HashMap<String, Word>,
    certificates: &HashMap<String, ProofScript>,
    cfg: &SearchConfig,
) -> Result<HomomorphismReport, String> {
    if let Some(g) = src.generators.iter().find(|g| !images.contains_key(g)) {
        return Err(format!("no image for generator {g}"));
    }
    let source = WithLemmas { base: tgt, lemmas };
    let mut rels: Vec<(String, Word)> = tgt.relators.iter().map(|r| (r.id.clone(), r.word.clone())).collect();
    let mut lemma_ids: Vec<&String> = lemmas.keys().collect();
    lemma_ids.sort();
    rels.extend(lemma_ids.into_iter().map(|id| (id.clone(), lemmas[id].clone())));
    let mut rows = Vec::new();
    for r in &src.relators {
        let image = r.word.map_symbols(|s| images.get(s).cloned());
        let status = match certificates.get(&r.id) {
            Some(script) => {
                if script.start.free_reduce() != image.free_reduce() {
                    RelatorStatus::Failed(format!("certificate starts at `{}`, image is `{image}`", script.start))
                } else if !script.end.free_reduce().is_empty() {
                    RelatorStatus::Failed("certificate does not end at the empty word".into())
                } else {
                    match check_script(&source, script) {
                        super::ScriptReport::Ok => RelatorStatus::Certified,
                        fail => RelatorStatus::Failed(fail.to_string()),
                    }
                }
            }
            None => match search_with(&source, &rels, &image, &Word::empty(), cfg, &r.id, &tgt.name) {
                Some(s) => RelatorStatus::Searched(s),
                None => RelatorStatus::Failed("no certificate and search found none within bounds".into()),
            },
        };
        rows.push((r.id.clone(), status));
    }
    Ok(HomomorphismReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::{gervais, Mode, SurfaceParams};
    use crate::words::w;

    fn g20() -> Presentation {
        gervais(SurfaceParams::new(2, 0).unwrap(), Mode::Full)
    }

    #[test]
    fn search_examples() {
        let p = g20();
        let cfg = SearchConfig { max_depth: 1, ..Default::default() };
        let s = search_equal(&p, &w("a1 b a1"), &w("b a1 b"), &cfg).unwrap();
        assert!(check_script(&p, &s).is_ok());
        let s = search_equal(&p, &w("a1 a2"), &w("a2 a1"), &cfg).unwrap();
        assert!(check_script(&p, &s).is_ok());
        let cfg = SearchConfig { max_depth: 3, max_states: 20_000, ..Default::default() };
        assert!(search_equal(&p, &w("a1"), &w("a2"), &cfg).is_none());
    }

    #[test]
    fn cancellation_folds_into_window() {
        let p = g20();
        let cfg = SearchConfig { max_depth: 2, ..Default::default() };
        let s = search_equal(&p, &w("b' a1 b a1"), &w("a1 b"), &cfg).unwrap();
        assert!(check_script(&p, &s).is_ok());
        assert_eq!(s.steps.len(), 1);
    }

    #[test]
    fn identity_homomorphism() {
        let p = g20();
        let images = p.generators.iter().map(|g| (g.clone(), Word::gen(g.clone()))).collect();
        let cfg = SearchConfig { max_depth: 1, ..Default::default() };
        let rep = verify_homomorphism(&p, &images, &p, &HashMap::new(), &HashMap::new(), &cfg).unwrap();
        assert!(rep.all_ok());
        assert!(verify_homomorphism(&p, &BTreeMap::new(), &p, &HashMap::new(), &HashMap::new(), &cfg).is_err());
    }

    #[test]
    fn cancellation_steps_reduce() {
        let (steps, out) = cancellation_steps(&w("a1 b b' a1' a2"));
        assert_eq!(out, w("a2"));
        let del = |pos, g: &str| ProofStep::Del { pos, gen: Some(crate::words::parse_letter(g, 0).unwrap()) };
        assert_eq!(steps, vec![del(1, "b"), del(0, "a1")]);
    }
}
