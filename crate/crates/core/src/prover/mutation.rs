//! Single step perturbations of verified scripts. A checker that accepts a
//! perturbed script is too lenient somewhere, so every mutant should be
//! rejected.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use rayon::prelude::*;

use super::corpus::{check_corpus, lemma_word, PresentationRegistry, ScriptStatus};
use super::{check_step, replay, ProofScript, ProofStep, RelatorSource, WithLemmas};
use crate::words::Word;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MutationKind {
    PosUp,
    PosDown,
    FlipInverse,
    SwapJustification,
}

impl fmt::Display for MutationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MutationKind::PosUp => "pos+1",
            MutationKind::PosDown => "pos-1",
            MutationKind::FlipInverse => "flip-inverse",
            MutationKind::SwapJustification => "swap-justification",
        };
        write!(f, "{s}")
    }
}

/// The perturbations of one step. `ids` lists the justifications a swap may
/// pick from; the swap takes the next id after the current one, cyclically.
pub fn mutate_step(step: &ProofStep, ids: &[String]) -> Vec<(MutationKind, ProofStep)> {
    let mut out = Vec::new();
    let shift = |pos: usize, up: bool| if up { Some(pos + 1) } else { pos.checked_sub(1) };
    for (kind, up) in [(MutationKind::PosUp, true), (MutationKind::PosDown, false)] {
        let moved = match step {
            ProofStep::Sub { pos, len, replacement, just } => shift(*pos, up).map(|pos| ProofStep::Sub {
                pos,
                len: *len,
                replacement: replacement.clone(),
                just: just.clone(),
            }),
            ProofStep::Ins { pos, gen } => shift(*pos, up).map(|pos| ProofStep::Ins { pos, gen: gen.clone() }),
            ProofStep::Del { pos, gen } => shift(*pos, up).map(|pos| ProofStep::Del { pos, gen: gen.clone() }),
        };
        if let Some(m) = moved {
            out.push((kind, m));
        }
    }
    match step {
        ProofStep::Sub { pos, len, replacement, just } => {
            let mut flipped = just.clone();
            flipped.inverse = !flipped.inverse;
            out.push((
                MutationKind::FlipInverse,
                ProofStep::Sub { pos: *pos, len: *len, replacement: replacement.clone(), just: flipped },
            ));
            if let Some(i) = ids.iter().position(|id| *id == just.id) {
                if ids.len() > 1 {
                    let mut swapped = just.clone();
                    swapped.id = ids[(i + 1) % ids.len()].clone();
                    out.push((
                        MutationKind::SwapJustification,
                        ProofStep::Sub { pos: *pos, len: *len, replacement: replacement.clone(), just: swapped },
                    ));
                }
            }
        }
        ProofStep::Ins { pos, gen } => {
            out.push((MutationKind::FlipInverse, ProofStep::Ins { pos: *pos, gen: gen.inv() }));
        }
        ProofStep::Del { .. } => {}
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Survivor {
    pub script: String,
    pub step: usize,
    pub kind: MutationKind,
}

#[derive(Debug, Clone, Default)]
pub struct MutationReport {
    pub mutants: usize,
    pub killed: usize,
    pub survivors: Vec<Survivor>,
    /// Scripts skipped because the unmutated script already fails.
    pub skipped: Vec<String>,
}

impl MutationReport {
    pub fn kill_rate(&self) -> f64 {
        if self.mutants == 0 {
            1.0
        } else {
            self.killed as f64 / self.mutants as f64
        }
    }
}

/// Whether the script with step `k` replaced by `m` still checks, given the
/// words the original reaches.
fn survives(src: &dyn RelatorSource, s: &ProofScript, words: &[Word], k: usize, m: &ProofStep) -> bool {
    let Ok(mut cur) = check_step(src, &words[k], m) else { return false };
    for step in &s.steps[k + 1..] {
        match check_step(src, &cur, step) {
            Ok(next) => cur = next,
            Err(_) => return false,
        }
    }
    cur.free_reduce() == s.end.free_reduce()
}

/// Apply every single step perturbation to every verified script.
pub fn mutation_suite(scripts: &[ProofScript], registry: &mut PresentationRegistry) -> MutationReport {
    let status = check_corpus(scripts, registry);
    let lemmas: HashMap<String, Word> = scripts
        .iter()
        .filter(|s| status.status(&s.name) == Some(&ScriptStatus::Ok))
        .map(|s| (s.name.clone(), lemma_word(s)))
        .collect();
    let mut jobs = Vec::new();
    let mut report = MutationReport::default();
    for s in scripts {
        match (status.status(&s.name), registry.get(&s.presentation)) {
            (Some(ScriptStatus::Ok), Some(p)) => jobs.push((s, p)),
            _ => report.skipped.push(s.name.clone()),
        }
    }
    let results: Vec<(usize, Vec<Survivor>)> = jobs
        .par_iter()
        .map(|(s, p)| {
            let cited: BTreeSet<String> = s
                .steps
                .iter()
                .filter_map(|st| match st {
                    ProofStep::Sub { just, .. } if lemmas.contains_key(&just.id) && p.resolve(&just.id).is_none() => {
                        Some(just.id.clone())
                    }
                    _ => None,
                })
                .collect();
            let local: HashMap<String, Word> = cited.iter().map(|c| (c.clone(), lemmas[c].clone())).collect();
            let src = WithLemmas { base: p, lemmas: &local };
            let mut ids: Vec<String> = p.relators.iter().map(|r| r.id.clone()).chain(cited).collect();
            ids.sort();
            let words = replay(&src, s).expect("verified script replays");
            let mut count = 0;
            let mut survivors = Vec::new();
            for (k, step) in s.steps.iter().enumerate() {
                for (kind, m) in mutate_step(step, &ids) {
                    count += 1;
                    if survives(&src, s, &words, k, &m) {
                        survivors.push(Survivor { script: s.name.clone(), step: k, kind });
                    }
                }
            }
            (count, survivors)
        })
        .collect();
    for (count, survivors) in results {
        report.mutants += count;
        report.killed += count - survivors.len();
        report.survivors.extend(survivors);
    }
    report.survivors.sort_by(|a, b| (&a.script, a.step, a.kind).cmp(&(&b.script, b.step, b.kind)));
    report.skipped.sort();
    report
}
