//! Checking a set of scripts that may cite each other as lemmas.
//!
//! A verified script proves `start = end`; other scripts may then use the
//! derived relator `start end^-1` under the script's name. A script fails if
//! a lemma it cites fails, if the citations form a cycle, or if the lemma was
//! proved over a presentation whose relators are not all available to the
//! citing script.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use super::chain::{derive_chain, parse_chains, ChainContext, ChainError, ChainSpec};
use super::script::{parse_scripts, ScriptParseError};
use super::{check_script, ProofScript, ProofStep, ScriptReport, WithLemmas};
use crate::presentations::{birman_hilden_2_0, gervais_action_2_1, gervais_compact_2_0, gervais_with, GervaisOptions, Mode, Presentation, SurfaceParams};
use crate::words::Word;

/// Presentations addressable by name from scripts.
#[derive(Debug, Clone, Default)]
pub struct PresentationRegistry {
    known: HashMap<String, Arc<Presentation>>,
}

impl PresentationRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(&mut self, p: Presentation) {
        self.known.insert(p.name.clone(), Arc::new(p));
    }

    /// Look up a name, building the standard presentations on demand:
    /// `gervais(g,n)`, `gervais-lantern(g,n)`, `gervais-conservative(g,n)`,
    /// `gervais-compact(2,0)`, `gervais-action(2,1)` and `birman-hilden(2,0)`.
    pub fn get(&mut self, name: &str) -> Option<Arc<Presentation>> {
        if let Some(p) = self.known.get(name) {
            return Some(p.clone());
        }
        let p = build_named(name)?;
        let p = Arc::new(p);
        self.known.insert(name.to_string(), p.clone());
        Some(p)
    }
}

fn build_named(name: &str) -> Option<Presentation> {
    match name {
        "birman-hilden(2,0)" => return Some(birman_hilden_2_0()),
        "gervais-compact(2,0)" => return Some(gervais_compact_2_0()),
        "gervais-action(2,1)" => return Some(gervais_action_2_1()),
        _ => {}
    }
    let (head, args) = name.strip_suffix(')')?.split_once('(')?;
    let (g, n) = args.split_once(',')?;
    let p = SurfaceParams::new(g.trim().parse().ok()?, n.trim().parse().ok()?).ok()?;
    let opts = match head {
        "gervais" => GervaisOptions::default(),
        "gervais-lantern" => GervaisOptions { lanterns: true, ..Default::default() },
        "gervais-conservative" => GervaisOptions { mode: Mode::Conservative, ..Default::default() },
        _ => return None,
    };
    Some(gervais_with(p, opts))
}

/// The corpus shipped with the crate: `chains/*.chain` and the scripts
/// generated from them in `scripts/*.script`.
pub fn bundled_corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

#[derive(Debug, Error)]
pub enum CorpusLoadError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Script { path: String, source: ScriptParseError },
    #[error("{path}: {source}")]
    Chain { path: String, source: ChainError },
}

fn files_with_ext(dir: &Path, ext: &str) -> Result<Vec<PathBuf>, CorpusLoadError> {
    let io = |source| CorpusLoadError::Io { path: dir.display().to_string(), source };
    let mut out = Vec::new();
    for e in std::fs::read_dir(dir).map_err(io)? {
        let path = e.map_err(io)?.path();
        if path.extension().is_some_and(|x| x == ext) {
            out.push(path);
        }
    }
    out.sort();
    Ok(out)
}

fn read(path: &Path) -> Result<String, CorpusLoadError> {
    std::fs::read_to_string(path).map_err(|source| CorpusLoadError::Io { path: path.display().to_string(), source })
}

/// All scripts in the `*.script` files of `dir`, in file order.
pub fn load_script_dir(dir: &Path) -> Result<Vec<ProofScript>, CorpusLoadError> {
    let mut out = Vec::new();
    for path in files_with_ext(dir, "script")? {
        let text = read(&path)?;
        let scripts = parse_scripts(&text)
            .map_err(|source| CorpusLoadError::Script { path: path.display().to_string(), source })?;
        out.extend(scripts);
    }
    Ok(out)
}

/// All chains in the `*.chain` files of `dir`, with the stem of their file.
pub fn load_chain_dir(dir: &Path) -> Result<Vec<(String, ChainSpec)>, CorpusLoadError> {
    let mut out = Vec::new();
    for path in files_with_ext(dir, "chain")? {
        let text = read(&path)?;
        let stem = path.file_stem().map(|s| s.to_string_lossy().to_string()).unwrap_or_default();
        let chains = parse_chains(&text)
            .map_err(|source| CorpusLoadError::Chain { path: path.display().to_string(), source })?;
        out.extend(chains.into_iter().map(|c| (stem.clone(), c)));
    }
    Ok(out)
}

/// The relator a verified script contributes.
pub fn lemma_word(s: &ProofScript) -> Word {
    s.start.concat(&s.end.invert()).free_reduce()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScriptStatus {
    Ok,
    Fail(String),
}

impl fmt::Display for ScriptStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScriptStatus::Ok => write!(f, "ok"),
            ScriptStatus::Fail(r) => write!(f, "FAIL {r}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CorpusReport {
    /// One entry per script, sorted by name.
    pub items: Vec<(String, ScriptStatus)>,
    /// Replay time of each script that was replayed.
    pub elapsed: BTreeMap<String, Duration>,
}

impl CorpusReport {
    pub fn all_ok(&self) -> bool {
        self.items.iter().all(|(_, s)| *s == ScriptStatus::Ok)
    }

    pub fn failures(&self) -> usize {
        self.items.iter().filter(|(_, s)| *s != ScriptStatus::Ok).count()
    }

    pub fn status(&self, name: &str) -> Option<&ScriptStatus> {
        self.items.iter().find(|(n, _)| n == name).map(|(_, s)| s)
    }
}

fn cited_ids(s: &ProofScript) -> BTreeSet<&str> {
    s.steps
        .iter()
        .filter_map(|st| match st {
            ProofStep::Sub { just, .. } => Some(just.id.as_str()),
            _ => None,
        })
        .collect()
}

/// Whether every relator of `small` occurs verbatim in `big`.
fn includes(big: &Presentation, small: &Presentation) -> bool {
    big.name == small.name
        || small.relators.iter().all(|r| big.relator(&r.id).is_some_and(|b| b.word == r.word))
}

/// Check all scripts, in parallel within each dependency layer.
pub fn check_corpus(scripts: &[ProofScript], registry: &mut PresentationRegistry) -> CorpusReport {
    let mut status: BTreeMap<String, ScriptStatus> = BTreeMap::new();
    let mut by_name: HashMap<&str, &ProofScript> = HashMap::new();
    for s in scripts {
        if by_name.insert(&s.name, s).is_some() {
            status.insert(s.name.clone(), ScriptStatus::Fail("duplicate script name".into()));
        }
    }
    let mut pres: HashMap<&str, Arc<Presentation>> = HashMap::new();
    for s in by_name.values() {
        match registry.get(&s.presentation) {
            Some(p) => {
                pres.insert(&s.name, p);
            }
            None => {
                status.insert(s.name.clone(), ScriptStatus::Fail(format!("unknown presentation {}", s.presentation)));
            }
        }
    }
    // lemma dependencies: cited ids that are script names, not relators
    let mut deps: HashMap<&str, Vec<&str>> = HashMap::new();
    for (&name, s) in &by_name {
        let Some(p) = pres.get(name) else { continue };
        let d: Vec<&str> = cited_ids(s)
            .into_iter()
            .filter(|id| p.resolve(id).is_none() && by_name.contains_key(id))
            .collect();
        deps.insert(name, d);
    }
    let mut lemmas: HashMap<String, Word> = HashMap::new();
    let mut elapsed = BTreeMap::new();
    let mut done: HashSet<&str> = by_name.keys().copied().filter(|n| status.contains_key(*n)).collect();
    loop {
        let mut layer: Vec<&str> = deps
            .iter()
            .filter(|(n, d)| !done.contains(*n) && d.iter().all(|x| done.contains(x)))
            .map(|(n, _)| *n)
            .collect();
        if layer.is_empty() {
            break;
        }
        layer.sort();
        let check_one = |name: &str| -> ScriptStatus {
            let s = by_name[name];
            let p = &pres[name];
            for d in &deps[name] {
                if status.get(*d) != Some(&ScriptStatus::Ok) {
                    return ScriptStatus::Fail(format!("cites failed lemma {d}"));
                }
                if !includes(p, &pres[d]) {
                    return ScriptStatus::Fail(format!("lemma {d} is over {}", by_name[d].presentation));
                }
            }
            let local: HashMap<String, Word> =
                deps[name].iter().map(|d| (d.to_string(), lemmas[*d].clone())).collect();
            let src = WithLemmas { base: p, lemmas: &local };
            match check_script(&src, s) {
                ScriptReport::Ok => ScriptStatus::Ok,
                fail => ScriptStatus::Fail(fail.to_string()),
            }
        };
        let results: Vec<(&str, ScriptStatus, Duration)> = layer
            .par_iter()
            .map(|&name| {
                let t0 = Instant::now();
                let st = check_one(name);
                (name, st, t0.elapsed())
            })
            .collect();
        for (name, st, dt) in results {
            elapsed.insert(name.to_string(), dt);
            if st == ScriptStatus::Ok {
                lemmas.insert(name.to_string(), lemma_word(by_name[name]));
            }
            status.insert(name.to_string(), st);
            done.insert(name);
        }
    }
    for name in by_name.keys() {
        status.entry(name.to_string()).or_insert_with(|| ScriptStatus::Fail("cyclic lemma citation".into()));
    }
    CorpusReport { items: status.into_iter().collect(), elapsed }
}

/// Lemmas and certificates a homomorphism check into `tgt` may use: the
/// relators of every verified script over a presentation contained in `tgt`,
/// and the scripts named `<map>-<relator id>` keyed by relator id.
pub fn certificates_for(
    map: &str,
    tgt: &Presentation,
    scripts: &[ProofScript],
    registry: &mut PresentationRegistry,
) -> (HashMap<String, Word>, HashMap<String, ProofScript>) {
    let report = check_corpus(scripts, registry);
    let mut lemmas = HashMap::new();
    let mut certs = HashMap::new();
    let prefix = format!("{map}-");
    for s in scripts {
        if report.status(&s.name) != Some(&ScriptStatus::Ok) {
            continue;
        }
        let Some(p) = registry.get(&s.presentation) else { continue };
        if !includes(tgt, &p) {
            continue;
        }
        lemmas.insert(s.name.clone(), lemma_word(s));
        if let Some(id) = s.name.strip_prefix(&prefix) {
            certs.insert(id.to_string(), s.clone());
        }
    }
    (lemmas, certs)
}

/// Compile chains into scripts. A hint naming another chain makes that
/// chain's relator available under its name; other hints must name
/// relators of the chain's presentation.
pub fn derive_corpus(
    chains: &[ChainSpec],
    registry: &mut PresentationRegistry,
) -> Vec<(String, Result<ProofScript, ChainError>)> {
    let setup = |c: &ChainSpec, msg: String| ChainError::Setup { chain: c.name.clone(), msg };
    let mut prepared: Vec<Result<(Arc<Presentation>, ChainSpec), ChainError>> = Vec::new();
    for c in chains {
        prepared.push(match registry.get(&c.presentation) {
            None => Err(setup(c, format!("unknown presentation {}", c.presentation))),
            Some(p) => match p.surface {
                Some(sp) => c.in_surface(&sp).map(|c| (p, c)),
                None => Ok((p, c.clone())),
            },
        });
    }
    let lemma_of: HashMap<&str, (Word, Arc<Presentation>)> = prepared
        .iter()
        .filter_map(|r| r.as_ref().ok())
        .map(|(p, c)| (c.name.as_str(), (c.lemma_word(), p.clone())))
        .collect();
    let jobs: Vec<(String, Result<(ChainContext, ChainSpec), ChainError>)> = prepared
        .iter()
        .zip(chains)
        .map(|(r, orig)| {
            let built = r.clone().and_then(|(p, mut c)| {
                let mut rels: Vec<(String, Word)> = p.relators.iter().map(|r| (r.id.clone(), r.word.clone())).collect();
                let mut added = HashSet::new();
                for wp in &mut c.waypoints {
                    for h in &mut wp.hints {
                        if let Some(r) = p.resolve(h) {
                            *h = r.id.clone();
                        } else if let Some((word, lp)) = lemma_of.get(h.as_str()) {
                            if !includes(&p, lp) {
                                return Err(setup(orig, format!("lemma {h} is over {}", lp.name)));
                            }
                            if added.insert(h.clone()) {
                                rels.push((h.clone(), word.clone()));
                            }
                        } else {
                            return Err(setup(orig, format!("unknown hint `{h}`")));
                        }
                    }
                }
                Ok((ChainContext::new(rels), c))
            });
            (orig.name.clone(), built)
        })
        .collect();
    jobs.into_par_iter()
        .map(|(name, job)| {
            let res = job.and_then(|(ctx, c)| derive_chain(&ctx, &c));
            (name, res)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prover::parse_scripts;

    const CORPUS: &str = "\
script base over gervais(2,0)
start: a1 b a1
sub 0 3 -> b a1 b by braid(a1,b)
end: b a1 b
script user over gervais(2,0)
start: a2 a1 b a1
sub 1 3 -> b a1 b by base
end: a2 b a1 b
script loop1 over gervais(2,0)
start: a1
sub 0 1 -> a1 a1 by loop2
end: a1 a1
script loop2 over gervais(2,0)
start: a2
sub 0 1 -> a2 a2 by loop1
end: a2 a2
";

    #[test]
    fn lemmas_and_cycles() {
        let scripts = parse_scripts(CORPUS).unwrap();
        let rep = check_corpus(&scripts, &mut PresentationRegistry::new());
        assert_eq!(rep.status("base"), Some(&ScriptStatus::Ok));
        assert_eq!(rep.status("user"), Some(&ScriptStatus::Ok));
        assert!(matches!(rep.status("loop1"), Some(ScriptStatus::Fail(r)) if r.contains("cyclic")));
        let names: Vec<_> = rep.items.iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(names, ["base", "loop1", "loop2", "user"]);
    }

    #[test]
    fn failed_lemma_propagates() {
        let text = CORPUS.replace("sub 0 3 -> b a1 b by braid(a1,b)", "sub 0 3 -> b a1 b by braid(a2,b)");
        let scripts = parse_scripts(&text).unwrap();
        let rep = check_corpus(&scripts, &mut PresentationRegistry::new());
        assert!(matches!(rep.status("user"), Some(ScriptStatus::Fail(r)) if r.contains("failed lemma")));
    }

    #[test]
    fn registry_names() {
        let mut r = PresentationRegistry::new();
        assert!(r.get("gervais(3,1)").is_some());
        assert!(r.get("gervais-lantern(2,1)").unwrap().relator("lantern(1,2,3)").is_some());
        assert!(r.get("birman-hilden(2,0)").is_some());
        assert!(r.get("gervais(1,0)").is_none());
        assert!(r.get("nonsense").is_none());
    }
}
