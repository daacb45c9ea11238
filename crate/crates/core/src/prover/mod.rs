//! Replayable derivations: relator substitutions checked step by step.
//!
//! A substitution replaces a window `u` of the current word by `v`. It is
//! accepted when `u v^-1` freely reduces to a cyclic rotation of the cited
//! relator (or its inverse). Since a rotation is a conjugate of the relator,
//! every accepted step preserves the group element.

mod braid_oracle;
pub mod chain;
mod corpus;
mod mutation;
mod script;
mod search;

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::presentations::Presentation;
use crate::words::{Letter, Word, WordError};

pub use chain::{derive_chain, parse_chains, parse_expr, ChainContext, ChainError, ChainSpec, Waypoint};
pub use braid_oracle::{braid_oracle_equal, braid_presentation, chain_to_sigma, handle_reduce, sigma, BraidError};
pub use corpus::{
    bundled_corpus_dir, certificates_for, check_corpus, derive_corpus, lemma_word, load_chain_dir, load_script_dir, CorpusLoadError,
    CorpusReport, PresentationRegistry, ScriptStatus,
};
pub use mutation::{mutate_step, mutation_suite, MutationKind, MutationReport, Survivor};
pub use script::{parse_scripts, print_script, ScriptParseError};
pub use search::{
    cancellation_steps, search_equal, verify_homomorphism, HomomorphismReport, RelatorStatus, SearchConfig,
};

/// Which relator certifies a substitution, in which orientation and phase.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Justification {
    pub id: String,
    pub inverse: bool,
    pub rot: usize,
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id)?;
        if self.inverse {
            write!(f, " inv")?;
        }
        if self.rot != 0 {
            write!(f, " rot {}", self.rot)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ProofStep {
    Sub { pos: usize, len: usize, replacement: Word, just: Justification },
    /// Insert `g g^-1` before position `pos`.
    Ins { pos: usize, gen: Letter },
    /// Remove the cancelling pair at `pos`, `pos + 1`. When `gen` is given
    /// the letter at `pos` must equal it.
    Del { pos: usize, gen: Option<Letter> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofScript {
    pub name: String,
    pub presentation: String,
    pub start: Word,
    pub steps: Vec<ProofStep>,
    pub end: Word,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StepError {
    #[error(transparent)]
    Bounds(#[from] WordError),
    #[error("unknown relator `{0}`")]
    UnknownRelator(String),
    #[error("window `{removed}` -> `{replacement}` is not certified by {just}")]
    InvalidJustification { removed: String, replacement: String, just: String },
    #[error("letters at {pos} do not cancel")]
    NotCancelling { pos: usize },
    #[error("letter at {pos} differs from the recorded one")]
    WrongLetter { pos: usize },
    #[error("insert position {pos} beyond word length {len}")]
    InsertOutOfBounds { pos: usize, len: usize },
}

/// Anything that can resolve a justification id to a relator word.
pub trait RelatorSource: Sync {
    fn lookup(&self, id: &str) -> Option<Word>;
}

impl RelatorSource for Presentation {
    fn lookup(&self, id: &str) -> Option<Word> {
        self.resolve(id).map(|r| r.word.clone())
    }
}

/// A presentation extended by derived relators from verified lemmas.
pub struct WithLemmas<'a> {
    pub base: &'a Presentation,
    pub lemmas: &'a HashMap<String, Word>,
}

impl RelatorSource for WithLemmas<'_> {
    fn lookup(&self, id: &str) -> Option<Word> {
        self.base.lookup(id).or_else(|| self.lemmas.get(id).cloned())
    }
}

/// The word `rotate(r^{±1}, k)` a justification stands for.
pub fn certified_word(src: &dyn RelatorSource, just: &Justification) -> Result<Word, StepError> {
    let rel = src.lookup(&just.id).ok_or_else(|| StepError::UnknownRelator(just.id.clone()))?;
    let rel = if just.inverse { rel.invert() } else { rel };
    Ok(rel.rotate(just.rot).free_reduce())
}

/// Apply one step, returning the rewritten (unreduced) word.
pub fn check_step(src: &dyn RelatorSource, w: &Word, step: &ProofStep) -> Result<Word, StepError> {
    match step {
        ProofStep::Sub { pos, len, replacement, just } => {
            let removed = w.subword(*pos, *len).ok_or(WordError::OutOfBounds {
                pos: *pos,
                len: *len,
                word_len: w.len(),
            })?;
            let expected = certified_word(src, just)?;
            let got = removed.concat(&replacement.invert()).free_reduce();
            if got != expected {
                return Err(StepError::InvalidJustification {
                    removed: removed.to_string(),
                    replacement: replacement.to_string(),
                    just: just.to_string(),
                });
            }
            Ok(w.substitute(*pos, *len, replacement)?)
        }
        ProofStep::Ins { pos, gen } => {
            if *pos > w.len() {
                return Err(StepError::InsertOutOfBounds { pos: *pos, len: w.len() });
            }
            let pair = Word::from_letters(vec![gen.clone(), gen.inv()]);
            Ok(w.substitute(*pos, 0, &pair)?)
        }
        ProofStep::Del { pos, gen } => {
            let l = w.letters();
            if *pos + 1 >= l.len() || !l[*pos].cancels(&l[*pos + 1]) {
                return Err(StepError::NotCancelling { pos: *pos });
            }
            if gen.as_ref().is_some_and(|g| *g != l[*pos]) {
                return Err(StepError::WrongLetter { pos: *pos });
            }
            Ok(w.substitute(*pos, 2, &Word::empty())?)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScriptReport {
    Ok,
    /// `step` is `None` when every step applied but the end word differs.
    Fail { step: Option<usize>, reason: String },
}

impl ScriptReport {
    pub fn is_ok(&self) -> bool {
        matches!(self, ScriptReport::Ok)
    }
}

impl fmt::Display for ScriptReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScriptReport::Ok => write!(f, "ok"),
            ScriptReport::Fail { step: Some(i), reason } => write!(f, "fail at step {}: {reason}", i + 1),
            ScriptReport::Fail { step: None, reason } => write!(f, "fail at end: {reason}"),
        }
    }
}

pub fn check_script(src: &dyn RelatorSource, s: &ProofScript) -> ScriptReport {
    let mut cur = s.start.clone();
    for (i, step) in s.steps.iter().enumerate() {
        match check_step(src, &cur, step) {
            Ok(next) => cur = next,
            Err(e) => return ScriptReport::Fail { step: Some(i), reason: e.to_string() },
        }
    }
    if cur.free_reduce() == s.end.free_reduce() {
        ScriptReport::Ok
    } else {
        ScriptReport::Fail { step: None, reason: format!("reached `{cur}`, expected `{}`", s.end) }
    }
}

/// Find a justification among `ids` for replacing `removed` by `replacement`.
pub fn certify<'a>(
    src: &dyn RelatorSource,
    removed: &Word,
    replacement: &Word,
    ids: impl IntoIterator<Item = &'a str>,
) -> Option<Justification> {
    let target = removed.concat(&replacement.invert()).free_reduce();
    if target.is_empty() {
        return None;
    }
    for id in ids {
        let Some(rel) = src.lookup(id) else { continue };
        if rel.len() != target.len() {
            continue;
        }
        for inverse in [false, true] {
            let r = if inverse { rel.invert() } else { rel.clone() };
            for rot in 0..r.len() {
                if r.rotate(rot) == target {
                    return Some(Justification { id: id.to_string(), inverse, rot });
                }
            }
        }
    }
    None
}

/// Replay a script and return every intermediate word, start included.
pub fn replay(src: &dyn RelatorSource, s: &ProofScript) -> Result<Vec<Word>, (usize, StepError)> {
    let mut words = vec![s.start.clone()];
    for (i, step) in s.steps.iter().enumerate() {
        let next = check_step(src, words.last().expect("nonempty"), step).map_err(|e| (i, e))?;
        words.push(next);
    }
    Ok(words)
}
