//! Line-oriented script files.
//!
//! ```text
//! script <name> over <presentation>
//! start: <word>
//! sub <pos> <len> -> <word> by <id>[ inv][ rot <k>]
//! ins <pos> <gen>
//! del <pos>[ <gen>]
//! end: <word>
//! ```
//!
//! Several scripts may share a file. Blank lines and `#` comments are
//! ignored.

use thiserror::Error;

use super::{Justification, ProofScript, ProofStep};
use crate::words::{parse_letter, parse_word, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct ScriptParseError {
    pub line: usize,
    pub msg: String,
}

pub fn print_script(s: &ProofScript) -> String {
    let mut out = format!("script {} over {}\nstart: {}\n", s.name, s.presentation, s.start);
    for step in &s.steps {
        match step {
            ProofStep::Sub { pos, len, replacement, just } => {
                let sep = if replacement.is_empty() { "" } else { " " };
                out.push_str(&format!("sub {pos} {len} ->{sep}{replacement} by {just}\n"));
            }
            ProofStep::Ins { pos, gen } => out.push_str(&format!("ins {pos} {gen}\n")),
            ProofStep::Del { pos, gen: None } => out.push_str(&format!("del {pos}\n")),
            ProofStep::Del { pos, gen: Some(g) } => out.push_str(&format!("del {pos} {g}\n")),
        }
    }
    out.push_str(&format!("end: {}\n", s.end));
    out
}

struct Partial {
    name: String,
    presentation: String,
    start: Option<Word>,
    steps: Vec<ProofStep>,
}

pub fn parse_scripts(text: &str) -> Result<Vec<ProofScript>, ScriptParseError> {
    let mut out = Vec::new();
    let mut cur: Option<Partial> = None;
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let err = |msg: String| ScriptParseError { line: ln + 1, msg };
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let word = |t: &str| parse_word(t, None).map_err(|e| err(e.to_string()));
        if let Some(rest) = line.strip_prefix("script ") {
            if cur.is_some() {
                return Err(err("previous script has no `end:`".into()));
            }
            let (name, pres) = rest.split_once(" over ").ok_or_else(|| err("expected `script <name> over <presentation>`".into()))?;
            cur = Some(Partial { name: name.trim().into(), presentation: pres.trim().into(), start: None, steps: Vec::new() });
            continue;
        }
        let Some(p) = cur.as_mut() else {
            return Err(err("statement outside a script".into()));
        };
        if let Some(rest) = line.strip_prefix("start:") {
            p.start = Some(word(rest)?);
        } else if let Some(rest) = line.strip_prefix("end:") {
            let start = p.start.take().ok_or_else(|| err("missing `start:`".into()))?;
            let p = cur.take().expect("checked above");
            out.push(ProofScript { name: p.name, presentation: p.presentation, start, steps: p.steps, end: word(rest)? });
        } else {
            if p.start.is_none() {
                return Err(err("step before `start:`".into()));
            }
            p.steps.push(parse_step(line).map_err(err)?);
        }
    }
    if let Some(p) = cur {
        return Err(ScriptParseError { line: text.lines().count(), msg: format!("script {} has no `end:`", p.name) });
    }
    Ok(out)
}

fn parse_step(line: &str) -> Result<ProofStep, String> {
    let num = |t: Option<&str>, what: &str| -> Result<usize, String> {
        t.and_then(|t| t.parse().ok()).ok_or_else(|| format!("expected {what}"))
    };
    let mut toks = line.split_whitespace();
    match toks.next() {
        Some("sub") => {
            let pos = num(toks.next(), "position")?;
            let len = num(toks.next(), "length")?;
            if toks.next() != Some("->") {
                return Err("expected `->`".into());
            }
            let rest: Vec<&str> = toks.collect();
            let by = rest.iter().position(|&t| t == "by").ok_or("expected `by`")?;
            let replacement = parse_word(&rest[..by].join(" "), None).map_err(|e| e.to_string())?;
            let mut it = rest[by + 1..].iter();
            let id = it.next().ok_or("expected relator id")?.to_string();
            let (mut inverse, mut rot) = (false, 0);
            while let Some(&t) = it.next() {
                match t {
                    "inv" => inverse = true,
                    "rot" => rot = num(it.next().copied(), "rotation")?,
                    other => return Err(format!("unexpected `{other}`")),
                }
            }
            Ok(ProofStep::Sub { pos, len, replacement, just: Justification { id, inverse, rot } })
        }
        Some("ins") => {
            let pos = num(toks.next(), "position")?;
            let gen = parse_letter(toks.next().ok_or("expected generator")?, 0).map_err(|e| e.to_string())?;
            Ok(ProofStep::Ins { pos, gen })
        }
        Some("del") => {
            let pos = num(toks.next(), "position")?;
            let gen = toks.next().map(|t| parse_letter(t, 0).map_err(|e| e.to_string())).transpose()?;
            Ok(ProofStep::Del { pos, gen })
        }
        other => Err(format!("unknown statement `{}`", other.unwrap_or(""))),
    }
}
