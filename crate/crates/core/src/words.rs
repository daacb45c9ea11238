//! Generator alphabet, word syntax and free-group arithmetic.
//!
//! A [`Word`] is a finite sequence of signed generator letters. Words are
//! composed right to left: the leftmost letter is applied last. Every operation
//! here returns a fresh value; nothing mutates in place, so positions stay
//! stable while a derivation is being replayed.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::presentations::SurfaceParams;

/// A generator of the Gervais alphabet, or a free-form named generator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GeneratorSymbol {
    A(u32),
    B,
    Bk(u32),
    C(u32, u32),
    Named(Arc<str>),
}

impl GeneratorSymbol {
    pub fn named(label: &str) -> Self {
        GeneratorSymbol::Named(Arc::from(label))
    }

    /// `c_{i,j}` with indices folded cyclically into `1..=n_curves`.
    pub fn c(i: u32, j: u32, n_curves: u32) -> Result<Self, WordError> {
        let (i, j) = (normalize_index(i, n_curves)?, normalize_index(j, n_curves)?);
        if i == j {
            return Err(WordError::DegenerateCurve { i, j });
        }
        Ok(GeneratorSymbol::C(i, j))
    }

    pub fn is_gervais(&self) -> bool {
        !matches!(self, GeneratorSymbol::Named(_))
    }

    pub fn label(&self) -> Option<&str> {
        match self {
            GeneratorSymbol::Named(s) => Some(s),
            _ => None,
        }
    }

    /// Re-normalize indices against a surface, rejecting indices that do not
    /// exist there.
    pub fn in_surface(&self, p: &SurfaceParams) -> Result<Self, WordError> {
        let n = p.n_curves();
        match self {
            GeneratorSymbol::B | GeneratorSymbol::Named(_) => Ok(self.clone()),
            GeneratorSymbol::Bk(k) => {
                if *k == 0 || *k > p.genus - 1 {
                    Err(WordError::IndexOutOfRange { symbol: self.to_string(), bound: p.genus - 1 })
                } else {
                    Ok(self.clone())
                }
            }
            GeneratorSymbol::A(i) => {
                if *i == 0 || *i > n {
                    Err(WordError::IndexOutOfRange { symbol: self.to_string(), bound: n })
                } else {
                    Ok(self.clone())
                }
            }
            GeneratorSymbol::C(i, j) => GeneratorSymbol::c(*i, *j, n),
        }
    }
}

fn normalize_index(m: u32, n: u32) -> Result<u32, WordError> {
    if m == 0 || n == 0 {
        return Err(WordError::ZeroIndex);
    }
    Ok((m - 1) % n + 1)
}

impl fmt::Display for GeneratorSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorSymbol::B => write!(f, "b"),
            GeneratorSymbol::Bk(k) => write!(f, "b{k}"),
            GeneratorSymbol::A(i) => write!(f, "a{i}"),
            GeneratorSymbol::C(i, j) => write!(f, "c{{{i},{j}}}"),
            GeneratorSymbol::Named(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub symbol: GeneratorSymbol,
    pub inverse: bool,
}

impl Letter {
    pub fn new(symbol: GeneratorSymbol, inverse: bool) -> Self {
        Letter { symbol, inverse }
    }

    pub fn pos(symbol: GeneratorSymbol) -> Self {
        Letter { symbol, inverse: false }
    }

    pub fn inv(&self) -> Self {
        Letter { symbol: self.symbol.clone(), inverse: !self.inverse }
    }

    pub fn sign(&self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn cancels(&self, other: &Letter) -> bool {
        self.symbol == other.symbol && self.inverse != other.inverse
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol)?;
        if self.inverse {
            write!(f, "'")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("index of {symbol} out of range (max {bound})")]
    IndexOutOfRange { symbol: String, bound: u32 },
    #[error("generator indices must be positive")]
    ZeroIndex,
    #[error("c{{{i},{j}}} has equal indices")]
    DegenerateCurve { i: u32, j: u32 },
    #[error("substitution window {pos}+{len} exceeds word length {word_len}")]
    OutOfBounds { pos: usize, len: usize, word_len: usize },
}

/// An immutable word in signed generator letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Word { letters: Vec::new() }
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    pub fn gen(symbol: GeneratorSymbol) -> Self {
        Word { letters: vec![Letter::pos(symbol)] }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    pub fn product<'a>(parts: impl IntoIterator<Item = &'a Word>) -> Word {
        let mut letters = Vec::new();
        for p in parts {
            letters.extend_from_slice(&p.letters);
        }
        Word { letters }
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.invert() } else { self.clone() };
        let mut letters = Vec::with_capacity(base.len() * k.unsigned_abs() as usize);
        for _ in 0..k.unsigned_abs() {
            letters.extend_from_slice(&base.letters);
        }
        Word { letters }
    }

    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.len());
        for l in &self.letters {
            if out.last().is_some_and(|t| t.cancels(l)) {
                out.pop();
            } else {
                out.push(l.clone());
            }
        }
        Word { letters: out }
    }

    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| !w[0].cancels(&w[1]))
    }

    pub fn invert(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(Letter::inv).collect() }
    }

    /// `y x y⁻¹`, freely reduced.
    pub fn conjugate(y: &Word, x: &Word) -> Word {
        Word::product([y, x, &y.invert()]).free_reduce()
    }

    /// Replace `len` letters starting at `pos`. The result is not reduced.
    pub fn substitute(&self, pos: usize, len: usize, replacement: &Word) -> Result<Word, WordError> {
        if pos.checked_add(len).is_none_or(|end| end > self.len()) {
            return Err(WordError::OutOfBounds { pos, len, word_len: self.len() });
        }
        let mut letters = Vec::with_capacity(self.len() - len + replacement.len());
        letters.extend_from_slice(&self.letters[..pos]);
        letters.extend_from_slice(&replacement.letters);
        letters.extend_from_slice(&self.letters[pos + len..]);
        Ok(Word { letters })
    }

    pub fn subword(&self, pos: usize, len: usize) -> Option<Word> {
        self.letters.get(pos..pos.checked_add(len)?).map(|s| Word { letters: s.to_vec() })
    }

    /// Cyclic rotation moving the first `k` letters to the end.
    pub fn rotate(&self, k: usize) -> Word {
        if self.is_empty() {
            return Word::empty();
        }
        let k = k % self.len();
        let mut letters = self.letters[k..].to_vec();
        letters.extend_from_slice(&self.letters[..k]);
        Word { letters }
    }

    /// Free reduction followed by cancelling matching first/last letters.
    pub fn cyclic_reduce(&self) -> Word {
        let w = self.free_reduce();
        let l = &w.letters;
        let (mut i, mut j) = (0usize, l.len());
        while j >= i + 2 && l[i].cancels(&l[j - 1]) {
            i += 1;
            j -= 1;
        }
        Word { letters: l[i..j].to_vec() }
    }

    /// Exponent sum of each symbol.
    pub fn exponent_sum(&self, symbol: &GeneratorSymbol) -> i64 {
        self.letters.iter().filter(|l| &l.symbol == symbol).map(Letter::sign).sum()
    }

    pub fn symbols(&self) -> impl Iterator<Item = &GeneratorSymbol> {
        self.letters.iter().map(|l| &l.symbol)
    }

    /// Apply a letter-wise substitution `symbol -> word`; unmapped symbols stay.
    pub fn map_symbols(&self, f: impl Fn(&GeneratorSymbol) -> Option<Word>) -> Word {
        let mut letters = Vec::new();
        for l in &self.letters {
            match f(&l.symbol) {
                Some(img) => {
                    let img = if l.inverse { img.invert() } else { img };
                    letters.extend(img.letters);
                }
                None => letters.push(l.clone()),
            }
        }
        Word { letters }
    }

    /// Re-normalize every letter against a surface.
    pub fn in_surface(&self, p: &SurfaceParams) -> Result<Word, WordError> {
        let letters = self
            .letters
            .iter()
            .map(|l| Ok(Letter::new(l.symbol.in_surface(p)?, l.inverse)))
            .collect::<Result<_, WordError>>()?;
        Ok(Word { letters })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<T: IntoIterator<Item = Letter>>(iter: T) -> Self {
        Word { letters: iter.into_iter().collect() }
    }
}

impl std::str::FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_word(s, None)
    }
}

/// Parse a whitespace separated word. With a surface context, indices are
/// checked and `c` indices folded cyclically.
pub fn parse_word(text: &str, surface: Option<&SurfaceParams>) -> Result<Word, WordError> {
    let mut letters = Vec::new();
    for (pos, token) in tokens(text) {
        let letter = parse_letter(token, pos)?;
        let letter = match surface {
            Some(p) => Letter::new(letter.symbol.in_surface(p)?, letter.inverse),
            None => letter,
        };
        letters.push(letter);
    }
    Ok(Word { letters })
}

pub fn print_word(w: &Word) -> String {
    w.to_string()
}

fn tokens(text: &str) -> impl Iterator<Item = (usize, &str)> {
    let base = text.as_ptr() as usize;
    text.split_whitespace().map(move |t| (t.as_ptr() as usize - base, t))
}

/// Parse a single letter token such as `a3`, `c{1,2}'` or `tau1^-1`.
pub fn parse_letter(token: &str, pos: usize) -> Result<Letter, WordError> {
    let (atom, inverse) = if let Some(a) = token.strip_suffix("^-1") {
        (a, true)
    } else if let Some(a) = token.strip_suffix('\'') {
        (a, true)
    } else {
        (token, false)
    };
    let err = |msg: &str| WordError::Syntax { pos, msg: format!("{msg} in `{token}`") };
    if atom.is_empty() {
        return Err(err("missing generator"));
    }
    let symbol = if let Some(rest) = atom.strip_prefix("c{") {
        let inner = rest.strip_suffix('}').ok_or_else(|| err("unterminated c{..}"))?;
        let (i, j) = inner.split_once(',').ok_or_else(|| err("expected c{i,j}"))?;
        let i: u32 = i.trim().parse().map_err(|_| err("bad index"))?;
        let j: u32 = j.trim().parse().map_err(|_| err("bad index"))?;
        if i == 0 || j == 0 {
            return Err(WordError::ZeroIndex);
        }
        if i == j {
            return Err(WordError::DegenerateCurve { i, j });
        }
        GeneratorSymbol::C(i, j)
    } else if atom == "b" {
        GeneratorSymbol::B
    } else if let Some(k) = structured_index(atom, 'b') {
        GeneratorSymbol::Bk(nonzero(k)?)
    } else if let Some(i) = structured_index(atom, 'a') {
        GeneratorSymbol::A(nonzero(i)?)
    } else {
        let mut chars = atom.chars();
        let first_ok = chars.next().is_some_and(|c| c.is_ascii_alphabetic());
        if !first_ok || !chars.all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(err("not a generator"));
        }
        GeneratorSymbol::named(atom)
    };
    Ok(Letter::new(symbol, inverse))
}

fn structured_index(atom: &str, head: char) -> Option<u32> {
    let rest = atom.strip_prefix(head)?;
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok()
}

fn nonzero(i: u32) -> Result<u32, WordError> {
    if i == 0 {
        Err(WordError::ZeroIndex)
    } else {
        Ok(i)
    }
}

/// Shorthand used throughout the tests and builders.
pub fn w(text: &str) -> Word {
    parse_word(text, None).unwrap_or_else(|e| panic!("bad word literal `{text}`: {e}"))
}
