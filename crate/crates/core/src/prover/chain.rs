//! Compiling equational chains into checkable scripts.
//!
//! A chain lists words claimed equal in a presented group, in the order a
//! derivation visits them. Each gap between consecutive words is closed by
//! the first of these strategies that succeeds:
//!
//! 1. free reduction alone;
//! 2. one relator substitution on the window where the words differ;
//! 3. Artin reversing: when the braid and commutation relators decide the
//!    equality, right reversing turns `u v^-1` into `N D^-1` with `N`, `D`
//!    positive, and `N` is rewritten letter by letter into `D`;
//! 4. one relator move at either end (hinted relators, or any relator that
//!    is not a braid or commutation relator) followed by strategy 3.
//!
//! ```text
//! def D = a1 b a2
//! chain <name> over <presentation>
//!   <expr>
//! = <expr> [by <id> ...]
//! end
//! ```
//!
//! A waypoint may span several lines; a new one starts at a line beginning
//! with `=`. Expressions extend the word grammar with `( .. )`, `( .. )^k`,
//! `( .. )'`, `$NAME`, `$NAME'` and `[x ; y]` for `x y x^-1`. Hints name
//! relators or other chains; a chain named in a hint is used as a lemma.

use std::collections::{BTreeSet, HashMap, HashSet};

use thiserror::Error;

use super::{Justification, ProofScript, ProofStep};
use crate::presentations::SurfaceParams;
use crate::words::{parse_letter, GeneratorSymbol, Letter, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChainError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("chain {chain}: no derivation found for gap {gap} (line {line}) from `{from}` to `{to}`")]
    NoDerivation { chain: String, gap: usize, line: usize, from: String, to: String },
    #[error("chain {chain}: {msg}")]
    Setup { chain: String, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Waypoint {
    pub word: Word,
    pub hints: Vec<String>,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainSpec {
    pub name: String,
    pub presentation: String,
    pub waypoints: Vec<Waypoint>,
}

impl ChainSpec {
    /// Chains and relators named in hints.
    pub fn cited(&self) -> BTreeSet<&str> {
        self.waypoints.iter().flat_map(|w| w.hints.iter().map(String::as_str)).collect()
    }

    /// The relator the chain establishes once compiled.
    pub fn lemma_word(&self) -> Word {
        let first = &self.waypoints[0].word;
        let last = &self.waypoints[self.waypoints.len() - 1].word;
        first.concat(&last.invert()).free_reduce()
    }

    /// Fold cyclic indices of every waypoint into the surface.
    pub fn in_surface(&self, p: &SurfaceParams) -> Result<ChainSpec, ChainError> {
        let mut out = self.clone();
        for wp in &mut out.waypoints {
            wp.word = wp.word.in_surface(p).map_err(|e| ChainError::Parse { line: wp.line, msg: e.to_string() })?;
        }
        Ok(out)
    }
}

// ---------------------------------------------------------------- parsing

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    OpenBr,
    CloseBr,
    Semi,
    Prime,
    Pow(i64),
    Atom(String),
}

fn lex(text: &str) -> Result<Vec<Tok>, String> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '(' => {
                out.push(Tok::Open);
                i += 1
            }
            ')' => {
                out.push(Tok::Close);
                i += 1
            }
            '[' => {
                out.push(Tok::OpenBr);
                i += 1
            }
            ']' => {
                out.push(Tok::CloseBr);
                i += 1
            }
            ';' => {
                out.push(Tok::Semi);
                i += 1
            }
            '\'' => {
                out.push(Tok::Prime);
                i += 1
            }
            '^' => {
                let mut j = i + 1;
                if j < chars.len() && chars[j] == '-' {
                    j += 1;
                }
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let num: String = chars[i + 1..j].iter().collect();
                out.push(Tok::Pow(num.parse().map_err(|_| format!("bad exponent `^{num}`"))?));
                i = j;
            }
            c if c.is_ascii_alphanumeric() || c == '$' || c == '_' => {
                let mut j = i;
                let mut depth = 0;
                while j < chars.len() {
                    let d = chars[j];
                    if d == '{' {
                        depth += 1;
                    } else if d == '}' {
                        depth -= 1;
                    } else if !(d.is_ascii_alphanumeric() || d == '$' || d == '_' || (depth > 0 && d == ',')) {
                        break;
                    }
                    j += 1;
                }
                out.push(Tok::Atom(chars[i..j].iter().collect()));
                i = j;
            }
            other => return Err(format!("unexpected character `{other}`")),
        }
    }
    Ok(out)
}

struct ExprParser<'a> {
    toks: Vec<Tok>,
    at: usize,
    defs: &'a HashMap<String, Word>,
}

impl ExprParser<'_> {
    fn seq(&mut self) -> Result<Word, String> {
        let mut out = Vec::new();
        while let Some(t) = self.toks.get(self.at).cloned() {
            let mut item = match t {
                Tok::Close | Tok::CloseBr | Tok::Semi => break,
                Tok::Open => {
                    self.at += 1;
                    let inner = self.seq()?;
                    self.expect(Tok::Close)?;
                    inner
                }
                Tok::OpenBr => {
                    self.at += 1;
                    let x = self.seq()?;
                    self.expect(Tok::Semi)?;
                    let y = self.seq()?;
                    self.expect(Tok::CloseBr)?;
                    Word::product([&x, &y, &x.invert()])
                }
                Tok::Atom(a) => {
                    self.at += 1;
                    if let Some(name) = a.strip_prefix('$') {
                        self.defs.get(name).cloned().ok_or_else(|| format!("undefined `${name}`"))?
                    } else {
                        Word::from_letters(vec![parse_letter(&a, 0).map_err(|e| e.to_string())?])
                    }
                }
                Tok::Prime | Tok::Pow(_) => return Err("postfix operator without operand".into()),
            };
            while let Some(op) = self.toks.get(self.at) {
                match op {
                    Tok::Prime => item = item.invert(),
                    Tok::Pow(k) => item = item.pow(*k),
                    _ => break,
                }
                self.at += 1;
            }
            out.extend(item.into_letters());
        }
        Ok(Word::from_letters(out))
    }

    fn expect(&mut self, t: Tok) -> Result<(), String> {
        if self.toks.get(self.at) == Some(&t) {
            self.at += 1;
            Ok(())
        } else {
            Err(format!("expected {t:?}"))
        }
    }
}

/// Expand a chain expression.
pub fn parse_expr(text: &str, defs: &HashMap<String, Word>) -> Result<Word, String> {
    let mut p = ExprParser { toks: lex(text)?, at: 0, defs };
    let w = p.seq()?;
    if p.at != p.toks.len() {
        return Err("unbalanced brackets".into());
    }
    Ok(w)
}

pub fn parse_chains(text: &str) -> Result<Vec<ChainSpec>, ChainError> {
    let mut defs: HashMap<String, Word> = HashMap::new();
    let mut out = Vec::new();
    let mut cur: Option<ChainSpec> = None;
    // pending waypoint text, hints and first line
    let mut pending: Option<(String, Vec<String>, usize)> = None;
    let flush = |cur: &mut Option<ChainSpec>,
                 pending: &mut Option<(String, Vec<String>, usize)>,
                 defs: &HashMap<String, Word>|
     -> Result<(), ChainError> {
        if let (Some(c), Some((text, hints, line))) = (cur.as_mut(), pending.take()) {
            let word = parse_expr(&text, defs).map_err(|msg| ChainError::Parse { line, msg })?;
            c.waypoints.push(Waypoint { word, hints, line });
        }
        Ok(())
    };
    for (ln, raw) in text.lines().enumerate() {
        let line_no = ln + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let perr = |msg: String| ChainError::Parse { line: line_no, msg };
        if let Some(rest) = line.strip_prefix("def ") {
            if cur.is_some() {
                return Err(perr("`def` inside a chain".into()));
            }
            let (name, body) = rest.split_once('=').ok_or_else(|| perr("expected `def NAME = expr`".into()))?;
            let word = parse_expr(body, &defs).map_err(perr)?;
            defs.insert(name.trim().to_string(), word);
        } else if let Some(rest) = line.strip_prefix("chain ") {
            if cur.is_some() {
                return Err(perr("previous chain has no `end`".into()));
            }
            let (name, pres) = rest.split_once(" over ").ok_or_else(|| perr("expected `chain NAME over P`".into()))?;
            cur = Some(ChainSpec { name: name.trim().into(), presentation: pres.trim().into(), waypoints: vec![] });
        } else if line == "end" {
            flush(&mut cur, &mut pending, &defs)?;
            let c = cur.take().ok_or_else(|| perr("`end` outside a chain".into()))?;
            if c.waypoints.len() < 2 {
                return Err(perr(format!("chain {} needs at least two waypoints", c.name)));
            }
            out.push(c);
        } else {
            if cur.is_none() {
                return Err(perr("statement outside a chain".into()));
            }
            let (body, starts_new) = match line.strip_prefix('=') {
                Some(b) => (b, true),
                None => (line, pending.is_none()),
            };
            let (expr, hints) = match body.rsplit_once(" by ") {
                Some((e, h)) => (e, h.split_whitespace().map(String::from).collect()),
                None => (body, vec![]),
            };
            if starts_new {
                flush(&mut cur, &mut pending, &defs)?;
                pending = Some((expr.to_string(), hints, line_no));
            } else if let Some((text, hs, _)) = pending.as_mut() {
                text.push(' ');
                text.push_str(expr);
                hs.extend(hints);
            }
        }
    }
    if let Some(c) = cur {
        return Err(ChainError::Parse { line: text.lines().count(), msg: format!("chain {} has no `end`", c.name) });
    }
    Ok(out)
}

// ---------------------------------------------------------------- compiling

/// Relators available to a compilation, indexed by the cyclic words they
/// certify.
pub struct ChainContext {
    rels: Vec<(String, Word)>,
    index: HashMap<Word, Justification>,
    artin: HashMap<(GeneratorSymbol, GeneratorSymbol), u8>,
    artin_ids: HashSet<String>,
}

fn artin_pair(w: &Word) -> Option<(GeneratorSymbol, GeneratorSymbol, u8)> {
    let l = w.letters();
    let pos = |i: usize| !l[i].inverse;
    match l.len() {
        4 if pos(0) && pos(1) && l[2] == l[0].inv() && l[3] == l[1].inv() && l[0] != l[1] => {
            Some((l[0].symbol.clone(), l[1].symbol.clone(), 2))
        }
        6 if pos(0)
            && pos(1)
            && l[2] == l[0]
            && l[3] == l[1].inv()
            && l[4] == l[0].inv()
            && l[5] == l[1].inv()
            && l[0] != l[1] =>
        {
            Some((l[0].symbol.clone(), l[1].symbol.clone(), 3))
        }
        _ => None,
    }
}

impl ChainContext {
    /// `rels` lists relators in priority order; braid and commutation
    /// relators among them drive Artin reversing.
    pub fn new(rels: Vec<(String, Word)>) -> Self {
        let mut index = HashMap::new();
        let mut artin = HashMap::new();
        let mut artin_ids = HashSet::new();
        for (id, rel) in &rels {
            if let Some((x, y, m)) = artin_pair(rel) {
                artin.entry((x.clone(), y.clone())).or_insert(m);
                artin.entry((y, x)).or_insert(m);
                artin_ids.insert(id.clone());
            }
            for inverse in [false, true] {
                let r = if inverse { rel.invert() } else { rel.clone() };
                for rot in 0..r.len().max(1) {
                    let key = r.rotate(rot).free_reduce();
                    if !key.is_empty() {
                        index.entry(key).or_insert_with(|| Justification { id: id.clone(), inverse, rot });
                    }
                }
            }
        }
        ChainContext { rels, index, artin, artin_ids }
    }

    fn justify(&self, removed: &Word, repl: &Word) -> Option<Justification> {
        let target = removed.concat(&repl.invert()).free_reduce();
        self.index.get(&target).cloned()
    }

    fn m(&self, x: &GeneratorSymbol, y: &GeneratorSymbol) -> u8 {
        self.artin.get(&(x.clone(), y.clone())).copied().unwrap_or(0)
    }
}

#[derive(Debug)]
struct Stuck;

const ATTEMPT_BUDGET: usize = 400_000;

struct Tape<'c> {
    w: Vec<Letter>,
    steps: Vec<ProofStep>,
    ctx: &'c ChainContext,
    work: usize,
    budget: usize,
}

impl<'c> Tape<'c> {
    fn new(ctx: &'c ChainContext, w: Vec<Letter>, budget: usize) -> Self {
        Tape { w, steps: Vec::new(), ctx, work: 0, budget }
    }

    fn tick(&mut self, n: usize) -> Result<(), Stuck> {
        self.work += n + 1;
        if self.work > self.budget {
            Err(Stuck)
        } else {
            Ok(())
        }
    }

    fn sub(&mut self, pos: usize, len: usize, repl: Vec<Letter>) -> Result<(), Stuck> {
        let removed = Word::from_letters(self.w[pos..pos + len].to_vec());
        let replacement = Word::from_letters(repl.clone());
        let just = self.ctx.justify(&removed, &replacement).ok_or(Stuck)?;
        self.w.splice(pos..pos + len, repl);
        self.steps.push(ProofStep::Sub { pos, len, replacement, just });
        self.tick(len)
    }

    fn ins(&mut self, pos: usize, gen: Letter) {
        self.w.splice(pos..pos, [gen.clone(), gen.inv()]);
        self.steps.push(ProofStep::Ins { pos, gen });
    }

    fn del(&mut self, pos: usize) {
        let gen = self.w[pos].clone();
        debug_assert!(gen.cancels(&self.w[pos + 1]));
        self.w.drain(pos..pos + 2);
        self.steps.push(ProofStep::Del { pos, gen: Some(gen) });
    }

    /// Right-reverse `w[a..end]` until no `x^-1 y` remains; returns the new end.
    fn reverse(&mut self, a: usize, mut end: usize) -> Result<usize, Stuck> {
        let mut i = a;
        while i + 1 < end {
            let (x, y) = (self.w[i].clone(), self.w[i + 1].clone());
            if !(x.inverse && !y.inverse) {
                i += 1;
                continue;
            }
            if x.symbol == y.symbol {
                self.del(i);
                end -= 2;
            } else {
                match self.ctx.m(&x.symbol, &y.symbol) {
                    2 => self.sub(i, 2, vec![y.clone(), x.clone()])?,
                    3 => {
                        self.sub(i, 2, vec![y.clone(), x.inv(), y.inv(), x.clone()])?;
                        end += 2;
                    }
                    _ => return Err(Stuck),
                }
            }
            i = i.saturating_sub(1).max(a);
        }
        Ok(end)
    }

    /// Rewrite the positive word `w[pos..end]` so that it starts with `s`,
    /// using braid and commutation moves only.
    fn bring_front(&mut self, pos: usize, end: usize, s: &GeneratorSymbol) -> Result<bool, Stuck> {
        if pos >= end {
            return Ok(false);
        }
        self.tick(0)?;
        let t = self.w[pos].symbol.clone();
        if t == *s {
            return Ok(true);
        }
        let (ls, lt) = (Letter::pos(s.clone()), Letter::pos(t.clone()));
        match self.ctx.m(s, &t) {
            2 => {
                if !self.bring_front(pos + 1, end, s)? {
                    return Ok(false);
                }
                self.sub(pos, 2, vec![ls, lt])?;
            }
            3 => {
                if !self.bring_front(pos + 1, end, s)? || !self.bring_front(pos + 2, end, &t)? {
                    return Ok(false);
                }
                self.sub(pos, 3, vec![ls.clone(), lt, ls])?;
            }
            _ => return Ok(false),
        }
        Ok(true)
    }

    /// Rewrite the positive word `w[pos..pos + target.len()]` into `target`.
    fn transform_positive(&mut self, pos: usize, target: &[Letter]) -> Result<bool, Stuck> {
        let end = pos + target.len();
        for (j, l) in target.iter().enumerate() {
            if l.inverse || !self.bring_front(pos + j, end, &l.symbol)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn common_ends(a: &[Letter], b: &[Letter]) -> (usize, usize) {
    let mut cp = 0;
    while cp < a.len() && cp < b.len() && a[cp] == b[cp] {
        cp += 1;
    }
    let mut cs = 0;
    while cs + cp < a.len() && cs + cp < b.len() && a[a.len() - 1 - cs] == b[b.len() - 1 - cs] {
        cs += 1;
    }
    (cp, cs)
}

fn exponent_total(w: &[Letter]) -> i64 {
    w.iter().map(Letter::sign).sum()
}

/// Steps from reduced `from` to reduced `to` by Artin reversing.
fn artin_bridge(ctx: &ChainContext, from: &[Letter], to: &[Letter], budget: usize) -> Option<Vec<ProofStep>> {
    let (cp, cs) = common_ends(from, to);
    let u = &from[cp..from.len() - cs];
    let v = &to[cp..to.len() - cs];
    if exponent_total(u) != exponent_total(v) {
        return None;
    }
    let mut t = Tape::new(ctx, from.to_vec(), budget);
    if u.iter().chain(v).all(|l| !l.inverse) {
        if u.len() == v.len() && t.transform_positive(cp, v).ok()? {
            return Some(t.steps);
        }
        return None;
    }
    let base = cp + u.len();
    for (n, l) in v.iter().rev().enumerate() {
        t.ins(base + n, l.inv());
    }
    let end = t.reverse(cp, base + v.len()).ok()?;
    let q = (cp..end).find(|&i| t.w[i].inverse).unwrap_or(end);
    let (n_len, d_len) = (q - cp, end - q);
    if n_len != d_len {
        return None;
    }
    let d: Vec<Letter> = (0..d_len).map(|j| t.w[end - 1 - j].inv()).collect();
    if !t.transform_positive(cp, &d).ok()? {
        return None;
    }
    for k in 0..d_len {
        t.del(q - 1 - k);
    }
    debug_assert_eq!(t.w, to);
    Some(t.steps)
}

/// Reverse a run of steps starting at `start`.
fn reverse_steps(ctx: &ChainContext, start: &[Letter], steps: &[ProofStep]) -> Option<Vec<ProofStep>> {
    let mut words = vec![start.to_vec()];
    for s in steps {
        let mut w = words.last().expect("nonempty").clone();
        match s {
            ProofStep::Sub { pos, len, replacement, .. } => {
                w.splice(*pos..pos + len, replacement.letters().iter().cloned());
            }
            ProofStep::Ins { pos, gen } => {
                w.splice(*pos..*pos, [gen.clone(), gen.inv()]);
            }
            ProofStep::Del { pos, .. } => {
                w.drain(*pos..pos + 2);
            }
        }
        words.push(w);
    }
    let mut out = Vec::new();
    for (i, s) in steps.iter().enumerate().rev() {
        let before = &words[i];
        out.push(match s {
            ProofStep::Sub { pos, len, replacement, .. } => {
                let removed = Word::from_letters(before[*pos..pos + len].to_vec());
                let just = ctx.justify(replacement, &removed)?;
                ProofStep::Sub { pos: *pos, len: replacement.len(), replacement: removed, just }
            }
            ProofStep::Ins { pos, gen } => ProofStep::Del { pos: *pos, gen: Some(gen.clone()) },
            ProofStep::Del { pos, .. } => ProofStep::Ins { pos: *pos, gen: before[*pos].clone() },
        });
    }
    Some(out)
}

fn cancel(w: &[Letter]) -> (Vec<ProofStep>, Vec<Letter>) {
    let mut letters = w.to_vec();
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
    (steps, letters)
}

/// One substitution turning reduced `a` into reduced `b`, on the smallest
/// certified window.
fn single_sub(ctx: &ChainContext, a: &[Letter], b: &[Letter]) -> Option<ProofStep> {
    let (cp, cs) = common_ends(a, b);
    let mut best: Option<ProofStep> = None;
    for i in (0..=cp).rev() {
        for s in (0..=cs).rev() {
            let removed = Word::from_letters(a[i..a.len() - s].to_vec());
            let repl = Word::from_letters(b[i..b.len() - s].to_vec());
            if let Some(just) = ctx.justify(&removed, &repl) {
                let better = match &best {
                    Some(ProofStep::Sub { len, replacement, .. }) => {
                        removed.len() + repl.len() < len + replacement.len()
                    }
                    _ => true,
                };
                if better {
                    best = Some(ProofStep::Sub { pos: i, len: removed.len(), replacement: repl, just });
                }
            }
        }
        if best.is_some() {
            break;
        }
    }
    best
}

/// A relator move: replace `from` by `to`.
struct Move {
    from: Vec<Letter>,
    to: Vec<Letter>,
}

fn moves_of(rel: &Word) -> Vec<Move> {
    let rel = rel.cyclic_reduce();
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for r in [rel.clone(), rel.invert()] {
        for rot in 0..r.len() {
            let rho = r.rotate(rot);
            for m in 1..=rho.len() {
                let from = rho.letters()[..m].to_vec();
                let to = Word::from_letters(rho.letters()[m..].to_vec()).invert().into_letters();
                if seen.insert((from.clone(), to.clone())) {
                    out.push(Move { from, to });
                }
            }
        }
    }
    out
}

/// Apply a move at `pos` of reduced `a`, returning the steps and the
/// reduced result.
fn apply_move(ctx: &ChainContext, a: &[Letter], pos: usize, mv: &Move) -> Option<(Vec<ProofStep>, Vec<Letter>)> {
    let mut raw = a.to_vec();
    raw.splice(pos..pos + mv.from.len(), mv.to.iter().cloned());
    let (dels, b) = cancel(&raw);
    if let Some(step) = single_sub(ctx, a, &b) {
        return Some((vec![step], b));
    }
    let removed = Word::from_letters(mv.from.clone());
    let repl = Word::from_letters(mv.to.clone());
    let just = ctx.justify(&removed, &repl)?;
    let mut steps = vec![ProofStep::Sub { pos, len: mv.from.len(), replacement: repl, just }];
    steps.extend(dels);
    Some((steps, b))
}

fn successors(ctx: &ChainContext, a: &[Letter], moves: &[Move]) -> Vec<(Vec<ProofStep>, Vec<Letter>)> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for pos in 0..a.len() {
        for mv in moves {
            let m = mv.from.len();
            if pos + m <= a.len() && a[pos..pos + m] == mv.from[..] {
                if let Some((steps, b)) = apply_move(ctx, a, pos, mv) {
                    if seen.insert(b.clone()) {
                        out.push((steps, b));
                    }
                }
            }
        }
    }
    out
}

/// Steps from `u` to a word freely equal to `v`, ending at `v` reduced.
fn bridge(ctx: &ChainContext, u: &[Letter], v: &[Letter], hints: &[String]) -> Option<Vec<ProofStep>> {
    let (mut steps, ur) = cancel(u);
    let (_, vr) = cancel(v);
    if ur == vr {
        return Some(steps);
    }
    if let Some(s) = single_sub(ctx, &ur, &vr) {
        steps.push(s);
        return Some(steps);
    }
    if let Some(s) = artin_bridge(ctx, &ur, &vr, ATTEMPT_BUDGET * 10) {
        steps.extend(s);
        return Some(steps);
    }
    let syms: HashSet<&GeneratorSymbol> = ur.iter().chain(&vr).map(|l| &l.symbol).collect();
    let cands: Vec<&Word> = if hints.is_empty() {
        ctx.rels
            .iter()
            .filter(|(id, r)| !ctx.artin_ids.contains(id) && r.symbols().all(|s| syms.contains(s)))
            .map(|(_, r)| r)
            .collect()
    } else {
        ctx.rels.iter().filter(|(id, _)| hints.contains(id)).map(|(_, r)| r).collect()
    };
    let moves: Vec<Move> = cands.iter().flat_map(|r| moves_of(r)).collect();
    let target_len = ur.len().max(vr.len());
    let fits = |w: &[Letter]| w.len() <= 2 * target_len + 24;
    let firsts = successors(ctx, &ur, &moves);
    for (s1, w1) in &firsts {
        if let Some(s2) = single_sub(ctx, w1, &vr) {
            steps.extend(s1.iter().cloned());
            steps.push(s2);
            return Some(steps);
        }
    }
    for (s1, w1) in firsts {
        if !fits(&w1) {
            continue;
        }
        let tail = if w1 == vr { Some(vec![]) } else { artin_bridge(ctx, &w1, &vr, ATTEMPT_BUDGET) };
        if let Some(s2) = tail {
            steps.extend(s1);
            steps.extend(s2);
            return Some(steps);
        }
    }
    for (s1, w1) in successors(ctx, &vr, &moves) {
        if !fits(&w1) {
            continue;
        }
        if let Some(s2) = artin_bridge(ctx, &ur, &w1, ATTEMPT_BUDGET) {
            let back = reverse_steps(ctx, &vr, &s1)?;
            steps.extend(s2);
            steps.extend(back);
            return Some(steps);
        }
    }
    if !hints.is_empty() {
        for (s1, w1) in successors(ctx, &ur, &moves) {
            if !fits(&w1) {
                continue;
            }
            for (s2, w2) in successors(ctx, &w1, &moves) {
                if !fits(&w2) {
                    continue;
                }
                let tail = if w2 == vr { Some(vec![]) } else { artin_bridge(ctx, &w2, &vr, ATTEMPT_BUDGET) };
                if let Some(s3) = tail {
                    steps.extend(s1);
                    steps.extend(s2);
                    steps.extend(s3);
                    return Some(steps);
                }
            }
        }
    }
    None
}

/// Compile one chain against `ctx`.
pub fn derive_chain(ctx: &ChainContext, chain: &ChainSpec) -> Result<ProofScript, ChainError> {
    let mut steps = Vec::new();
    let mut cur = chain.waypoints[0].word.letters().to_vec();
    for (gap, wp) in chain.waypoints.iter().enumerate().skip(1) {
        for h in &wp.hints {
            if !ctx.rels.iter().any(|(id, _)| id == h) {
                return Err(ChainError::Setup { chain: chain.name.clone(), msg: format!("unknown hint `{h}`") });
            }
        }
        let target = wp.word.letters();
        let s = bridge(ctx, &cur, target, &wp.hints).ok_or_else(|| ChainError::NoDerivation {
            chain: chain.name.clone(),
            gap,
            line: wp.line,
            from: Word::from_letters(cur.clone()).free_reduce().to_string(),
            to: wp.word.free_reduce().to_string(),
        })?;
        steps.extend(s);
        cur = wp.word.free_reduce().into_letters();
    }
    Ok(ProofScript {
        name: chain.name.clone(),
        presentation: chain.presentation.clone(),
        start: chain.waypoints[0].word.clone(),
        steps,
        end: chain.waypoints[chain.waypoints.len() - 1].word.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::{gervais, Mode};
    use crate::prover::check_script;
    use crate::words::w;

    fn ctx20() -> (crate::presentations::Presentation, ChainContext) {
        let p = gervais(SurfaceParams::new(2, 0).unwrap(), Mode::Full);
        let rels = p.relators.iter().map(|r| (r.id.clone(), r.word.clone())).collect();
        (p, ChainContext::new(rels))
    }

    #[test]
    fn expressions() {
        let mut defs = HashMap::new();
        defs.insert("D".to_string(), w("a1 b"));
        assert_eq!(parse_expr("(a1 b)^2 c{1,2}'", &defs).unwrap(), w("a1 b a1 b c{1,2}'"));
        assert_eq!(parse_expr("[$D ; a2]", &defs).unwrap(), w("a1 b a2 b' a1'"));
        assert_eq!(parse_expr("$D' (a1)^-2", &defs).unwrap(), w("b' a1' a1' a1'"));
        assert_eq!(parse_expr("tau1^-1", &defs).unwrap(), w("tau1'"));
        assert!(parse_expr("(a1", &defs).is_err());
        assert!(parse_expr("$E", &defs).is_err());
    }

    #[test]
    fn chain_file() {
        let text = "def X = a1 b\nchain demo over gervais(2,0)\n  $X a1\n= b a1 b by braid(a1,b)\nend\n";
        let c = parse_chains(text).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].waypoints[1].hints, vec!["braid(a1,b)".to_string()]);
        assert_eq!(c[0].lemma_word(), w("a1 b a1 b' a1' b'"));
        assert!(parse_chains("chain x over y\n a1\nend\n").is_err());
    }

    #[test]
    fn braid_identities_compile() {
        let (p, ctx) = ctx20();
        let d = w("a1 b a2 b1 c{1,2} a1 b a2 b1 a1 b a2 a1 b a1");
        let chain = ChainSpec {
            name: "d".into(),
            presentation: p.name.clone(),
            waypoints: vec![
                Waypoint { word: Word::product([&d, &w("a1"), &d.invert()]), hints: vec![], line: 1 },
                Waypoint { word: w("c{1,2}"), hints: vec![], line: 2 },
            ],
        };
        let s = derive_chain(&ctx, &chain).unwrap();
        assert!(check_script(&p, &s).is_ok());
        let bad = ChainSpec {
            waypoints: vec![chain.waypoints[0].clone(), Waypoint { word: w("a1"), hints: vec![], line: 2 }],
            ..chain
        };
        assert!(derive_chain(&ctx, &bad).is_err());
    }

    #[test]
    fn star_move_then_braids() {
        let (p, ctx) = ctx20();
        let chain = ChainSpec {
            name: "s".into(),
            presentation: p.name.clone(),
            waypoints: vec![
                Waypoint { word: w("b a1 a1 a2 b a1 a1 a2 b a1 a1 a2"), hints: vec![], line: 1 },
                Waypoint { word: w("c{1,2} c{2,1}"), hints: vec![], line: 2 },
            ],
        };
        let s = derive_chain(&ctx, &chain).unwrap();
        assert!(check_script(&p, &s).is_ok());
    }
}
