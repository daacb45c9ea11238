use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use thiserror::Error;

use mcg_core::presentations::{
    amalgam_3_1, birman_hilden_2_0, gervais_compact_2_0, gervais_with, phi_images, psi_images, t1_word_3_1,
    GervaisOptions, Mode, Presentation, SurfaceParams,
};
use mcg_core::prover::{
    braid_oracle_equal, braid_presentation, bundled_corpus_dir, certificates_for, chain_to_sigma, check_corpus,
    derive_corpus, load_chain_dir, mutation_suite, parse_expr, parse_scripts, print_script, search_equal, verify_homomorphism,
    PresentationRegistry, ProofScript, RelatorStatus, ScriptStatus, SearchConfig,
};
use mcg_core::reps::{
    abelianization, format_invariants, mod_p_closure_capped, nontrivial_relators, twist_matrix, TransvectionRep,
};
use mcg_core::surface;
use mcg_core::words::{print_word, GeneratorSymbol, Word};

use crate::report::{InputDigest, Item, RunReport};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {msg}")]
    Parse { path: String, msg: String },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

fn read_file(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn parse_err(path: &Path, msg: impl ToString) -> CliError {
    CliError::Parse { path: path.display().to_string(), msg: msg.to_string() }
}

/// `MCG_CORPUS_DIR`, or the corpus bundled with the core crate.
pub fn corpus_dir() -> PathBuf {
    std::env::var_os("MCG_CORPUS_DIR").map(PathBuf::from).unwrap_or_else(bundled_corpus_dir)
}

/// A registry knowing the standard presentations and the assembled ones.
pub fn registry() -> PresentationRegistry {
    let mut reg = PresentationRegistry::new();
    reg.register(amalgam_3_1());
    if let Ok(ext) = surface::extension_2_1() {
        reg.register(ext);
    }
    reg.register(surface::surface_presentation());
    for m in 2..=8 {
        reg.register(braid_presentation(m));
    }
    reg
}

/// A presentation given as a file path, or else as a registry name.
pub fn resolve_presentation(
    spec: &str,
    reg: &mut PresentationRegistry,
) -> Result<(Arc<Presentation>, Option<InputDigest>), CliError> {
    let path = Path::new(spec);
    if path.is_file() {
        let bytes = read_file(path)?;
        let text = String::from_utf8(bytes.clone()).map_err(|e| parse_err(path, e))?;
        let p = Presentation::load(&text).map_err(|e| parse_err(path, e))?;
        return Ok((Arc::new(p), Some(InputDigest::of(path, &bytes))));
    }
    reg.get(spec)
        .map(|p| (p, None))
        .ok_or_else(|| CliError::Usage(format!("`{spec}` is neither a presentation file nor a known presentation")))
}

/// Words on the command line may use `( )`, `^k`, `'` and `[x ; y]`.
fn parse_in(text: &str, p: Option<&SurfaceParams>) -> Result<Word, CliError> {
    let bad = |e: String| CliError::Usage(format!("bad word `{text}`: {e}"));
    let w = parse_expr(text, &HashMap::new()).map_err(bad)?;
    match p {
        Some(p) => w.in_surface(p).map_err(|e| bad(e.to_string())),
        None => Ok(w),
    }
}

pub fn presentation(
    genus: u32,
    boundary: u32,
    mode: Mode,
    lanterns: bool,
    dedup_stars: bool,
) -> Result<Presentation, CliError> {
    let p = SurfaceParams::new(genus, boundary).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(gervais_with(p, GervaisOptions { mode, lanterns, dedup_stars }))
}

/// Script files named directly, or every `*.script` file in a named
/// directory.
fn script_files(paths: &[PathBuf]) -> Result<Vec<PathBuf>, CliError> {
    let mut out = Vec::new();
    for p in paths {
        if p.is_dir() {
            let io = |source| CliError::Io { path: p.display().to_string(), source };
            let mut found = Vec::new();
            for e in std::fs::read_dir(p).map_err(io)? {
                let f = e.map_err(io)?.path();
                if f.extension().is_some_and(|x| x == "script") {
                    found.push(f);
                }
            }
            found.sort();
            out.extend(found);
        } else {
            out.push(p.clone());
        }
    }
    Ok(out)
}

/// Parse every file, collecting all parse errors before giving up.
pub fn read_scripts(paths: &[PathBuf]) -> Result<(Vec<ProofScript>, Vec<InputDigest>), CliError> {
    let mut scripts = Vec::new();
    let mut digests = Vec::new();
    let mut errors = Vec::new();
    for f in script_files(paths)? {
        let bytes = read_file(&f)?;
        digests.push(InputDigest::of(&f, &bytes));
        match std::str::from_utf8(&bytes).map_err(|e| e.to_string()).and_then(|t| parse_scripts(t).map_err(|e| e.to_string())) {
            Ok(s) => scripts.extend(s),
            Err(e) => errors.push(format!("{}: {e}", f.display())),
        }
    }
    if errors.is_empty() {
        Ok((scripts, digests))
    } else {
        Err(CliError::Parse { path: "scripts".into(), msg: errors.join("\n") })
    }
}

pub struct CheckArgs {
    pub paths: Vec<PathBuf>,
    pub corpus: bool,
    pub presentations: Vec<PathBuf>,
    pub mutations: bool,
}

pub fn check(args: &CheckArgs) -> Result<RunReport, CliError> {
    let mut reg = registry();
    let mut inputs = Vec::new();
    for path in &args.presentations {
        let (p, digest) = resolve_presentation(&path.display().to_string(), &mut reg)?;
        inputs.extend(digest);
        reg.register((*p).clone());
    }
    let mut paths = args.paths.clone();
    if args.corpus {
        paths.push(corpus_dir().join("scripts"));
    }
    let (scripts, digests) = read_scripts(&paths)?;
    inputs.extend(digests);
    let status = check_corpus(&scripts, &mut reg);
    let mut items: Vec<Item> = status
        .items
        .iter()
        .map(|(name, st)| {
            let item = match st {
                ScriptStatus::Ok => Item::pass(name),
                ScriptStatus::Fail(r) => Item::fail(name, r),
            };
            match status.elapsed.get(name) {
                Some(d) => item.timed(*d),
                None => item,
            }
        })
        .collect();
    if args.mutations {
        let t0 = Instant::now();
        let m = mutation_suite(&scripts, &mut reg);
        let detail = format!("{} of {} mutants rejected", m.killed, m.mutants);
        let suite = if m.survivors.is_empty() {
            Item::pass("mutation-suite")
        } else {
            Item::fail("mutation-suite", format!("{} survivors", m.survivors.len()))
        };
        items.push(suite.with_detail(detail).timed(t0.elapsed()));
        for s in &m.survivors {
            items.push(Item::fail(format!("mutation-suite/{}/{}/{}", s.script, s.step + 1, s.kind), "mutant accepted"));
        }
    }
    Ok(RunReport::new("check", inputs, items))
}

pub struct SearchArgs {
    pub presentation: String,
    pub from: String,
    pub to: String,
    pub depth: usize,
    pub max_length: usize,
    pub max_states: usize,
}

pub fn search(args: &SearchArgs) -> Result<RunReport, CliError> {
    let mut reg = registry();
    let (p, digest) = resolve_presentation(&args.presentation, &mut reg)?;
    let w1 = parse_in(&args.from, p.surface.as_ref())?;
    let w2 = parse_in(&args.to, p.surface.as_ref())?;
    let cfg = SearchConfig { max_depth: args.depth, max_length: args.max_length, relators: None, max_states: args.max_states };
    let t0 = Instant::now();
    let found = search_equal(&p, &w1, &w2, &cfg);
    let id = format!("search {} = {}", print_word(&w1), print_word(&w2));
    let (item, artifact) = match found {
        Some(s) => (Item::pass(id).with_detail(format!("{} steps", s.steps.len())), Some(print_script(&s))),
        None => (Item::fail(id, "no derivation within bounds"), None),
    };
    let mut report = RunReport::new("search", digest.into_iter().collect(), vec![item.timed(t0.elapsed())]);
    report.artifact = artifact;
    Ok(report)
}

pub fn homomorphism(map: &str, cfg: &SearchConfig) -> Result<RunReport, CliError> {
    let (src, tgt, images) = match map {
        "phi" => (birman_hilden_2_0(), gervais_compact_2_0(), phi_images()),
        "psi" => (gervais_compact_2_0(), birman_hilden_2_0(), psi_images()),
        other => return Err(CliError::Usage(format!("unknown map `{other}`, expected phi or psi"))),
    };
    let (scripts, inputs) = read_scripts(&[corpus_dir().join("scripts")])?;
    let mut reg = registry();
    let (lemmas, certs) = certificates_for(map, &tgt, &scripts, &mut reg);
    let rep = verify_homomorphism(&src, &images, &tgt, &lemmas, &certs, cfg).map_err(CliError::Usage)?;
    let items = rep
        .rows
        .into_iter()
        .map(|(id, st)| match st {
            RelatorStatus::Certified => Item::pass(id).with_detail("certified"),
            RelatorStatus::Searched(s) => Item::pass(id).with_detail(format!("searched, {} steps", s.steps.len())),
            RelatorStatus::Failed(r) => Item::fail(id, r),
        })
        .collect();
    Ok(RunReport::new(&format!("homomorphism {map}: {} -> {}", src.name, tgt.name), inputs, items))
}

pub struct OracleArgs {
    pub presentation: String,
    pub homology: bool,
    pub closure: Option<u32>,
    pub abelianize: bool,
    pub expect_abelian: Option<String>,
    pub expect_order: Option<usize>,
    pub cap: usize,
}

/// The homology representation for a presentation with a surface, with
/// the named generators of the assembled presentations defined.
fn homology_rep(p: &Presentation) -> Result<TransvectionRep, String> {
    let sp = p.surface.ok_or_else(|| format!("{} has no surface parameters", p.name))?;
    let mut rep = TransvectionRep::gervais(&sp);
    let t1 = GeneratorSymbol::named("t1");
    if p.has_generator(&t1) && (sp.genus, sp.boundary) == (3, 1) {
        rep = rep.with_definition(t1, t1_word_3_1());
    }
    Ok(rep)
}

pub fn oracles(args: &OracleArgs) -> Result<RunReport, CliError> {
    if !args.homology && args.closure.is_none() && !args.abelianize {
        return Err(CliError::Usage("choose at least one of --homology, --closure, --abelianize".into()));
    }
    let mut reg = registry();
    let (p, digest) = resolve_presentation(&args.presentation, &mut reg)?;
    let mut items = Vec::new();
    if args.homology {
        let t0 = Instant::now();
        let item = match homology_rep(&p).and_then(|rep| nontrivial_relators(&p, &rep).map_err(|e| e.to_string())) {
            Ok(bad) if bad.is_empty() => Item::pass("homology").with_detail("relators trivial: all"),
            Ok(bad) => Item::fail("homology", format!("nontrivial: {}", bad.join(", "))),
            Err(e) => Item::fail("homology", e),
        };
        items.push(item.timed(t0.elapsed()));
    }
    if let Some(q) = args.closure {
        let t0 = Instant::now();
        let id = format!("closure mod {q}");
        let order = homology_rep(&p).and_then(|rep| {
            let mats = p.generators.iter().map(|g| twist_matrix(g, &rep)).collect::<Result<Vec<_>, _>>();
            mats.and_then(|m| mod_p_closure_capped(&m, q, args.cap)).map_err(|e| e.to_string())
        });
        let item = match (order, args.expect_order) {
            (Ok(n), Some(e)) if n != e => Item::fail(&id, format!("expected {e}")).with_detail(n.to_string()),
            (Ok(n), _) => Item::pass(&id).with_detail(n.to_string()),
            (Err(e), _) => Item::fail(&id, e),
        };
        items.push(item.timed(t0.elapsed()));
    }
    if args.abelianize {
        let t0 = Instant::now();
        let got = format_invariants(&abelianization(&p));
        let item = match &args.expect_abelian {
            Some(e) if normalize(e) != normalize(&got) => Item::fail("abelianize", format!("expected {e}")),
            _ => Item::pass("abelianize"),
        };
        items.push(item.with_detail(got).timed(t0.elapsed()));
    }
    Ok(RunReport::new(&format!("oracles {}", p.name), digest.into_iter().collect(), items))
}

fn normalize(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect()
}

pub fn braid(from: &str, to: &str, strands: usize, chain: bool) -> Result<RunReport, CliError> {
    let (mut w1, mut w2) = (parse_in(from, None)?, parse_in(to, None)?);
    if chain {
        w1 = chain_to_sigma(&w1);
        w2 = chain_to_sigma(&w2);
    }
    let id = format!("braid({strands}) {} = {}", print_word(&w1), print_word(&w2));
    let t0 = Instant::now();
    let item = match braid_oracle_equal(&w1, &w2, strands) {
        Ok(true) => Item::pass(id).with_detail("equal"),
        Ok(false) => Item::fail(id, "different braids"),
        Err(e) => Item::fail(id, e.to_string()),
    };
    Ok(RunReport::new("braid", vec![], vec![item.timed(t0.elapsed())]))
}

pub enum SurfaceQuery {
    Act { twist: String, x: String },
    Equal { w1: String, w2: String },
    Inner { twist: String, bound: usize },
}

pub fn surface(q: &SurfaceQuery) -> Result<RunReport, CliError> {
    let t0 = Instant::now();
    let item = match q {
        SurfaceQuery::Act { twist, x } => {
            let (t, xw) = (parse_in(twist, None)?, parse_in(x, None)?);
            let id = format!("act {} on {}", print_word(&t), print_word(&xw));
            match surface::word_action(&t) {
                Ok(f) => Item::pass(id).with_detail(print_word(&surface::dehn_reduce(&f.apply(&xw)))),
                Err(e) => Item::fail(id, e.to_string()),
            }
        }
        SurfaceQuery::Equal { w1, w2 } => {
            let (a, b) = (parse_in(w1, None)?, parse_in(w2, None)?);
            let id = format!("equal {} = {}", print_word(&a), print_word(&b));
            if surface::is_trivial(&a.concat(&b.invert())) {
                Item::pass(id).with_detail("equal")
            } else {
                Item::fail(id, "not equal in the surface group")
            }
        }
        SurfaceQuery::Inner { twist, bound } => {
            let t = parse_in(twist, None)?;
            let id = format!("inner {}", print_word(&t));
            match surface::word_action(&t) {
                Ok(f) => match surface::is_inner(&f, *bound) {
                    Some(g) => Item::pass(id).with_detail(format!("conjugation by {}", print_word(&g))),
                    None => Item::fail(id, format!("no conjugator of length at most {bound}")),
                },
                Err(e) => Item::fail(id, e.to_string()),
            }
        }
    };
    Ok(RunReport::new("surface", vec![], vec![item.timed(t0.elapsed())]))
}

/// Compile the chains of the corpus. Without `write`, each compiled script
/// must match the shipped one.
pub fn derive(write: bool, only: Option<&str>) -> Result<RunReport, CliError> {
    let dir = corpus_dir();
    let chains_dir = dir.join("chains");
    let chains = load_chain_dir(&chains_dir).map_err(|e| parse_err(&chains_dir, e))?;
    let mut inputs = Vec::new();
    let mut files: Vec<PathBuf> = chains.iter().map(|(stem, _)| chains_dir.join(format!("{stem}.chain"))).collect();
    files.dedup();
    for f in &files {
        inputs.push(InputDigest::of(f, &read_file(f)?));
    }
    if write && only.is_some() {
        return Err(CliError::Usage("--write regenerates whole files and cannot be combined with --only".into()));
    }
    let selected: Vec<_> = chains.iter().filter(|(_, c)| only.is_none_or(|o| c.name.starts_with(o))).collect();
    let specs: Vec<_> = selected.iter().map(|(_, c)| c.clone()).collect();
    let mut reg = registry();
    let derived = derive_corpus(&specs, &mut reg);
    let shipped: BTreeMap<String, String> = if write {
        BTreeMap::new()
    } else {
        let (scripts, _) = read_scripts(&[dir.join("scripts")])?;
        scripts.iter().map(|s| (s.name.clone(), print_script(s))).collect()
    };
    let mut items = Vec::new();
    let mut texts: BTreeMap<String, String> = BTreeMap::new();
    for ((stem, _), (name, res)) in selected.iter().zip(derived) {
        match res {
            Ok(s) => {
                let text = print_script(&s);
                let detail = format!("{} steps", s.steps.len());
                items.push(match shipped.get(&name) {
                    Some(t) if *t != text => Item::fail(&name, "differs from the shipped script"),
                    None if !write => Item::fail(&name, "no shipped script"),
                    _ => Item::pass(&name).with_detail(detail),
                });
                texts.entry(stem.clone()).or_default().push_str(&text);
            }
            Err(e) => items.push(Item::fail(&name, e.to_string())),
        }
    }
    if write {
        let out = dir.join("scripts");
        std::fs::create_dir_all(&out).map_err(|source| CliError::Io { path: out.display().to_string(), source })?;
        for (stem, text) in texts {
            let path = out.join(format!("{stem}.script"));
            std::fs::write(&path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
        }
    }
    Ok(RunReport::new("derive", inputs, items))
}
