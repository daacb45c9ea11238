//! Presentations of mapping class groups and the combinators that assemble
//! new presentations from old ones.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::words::{parse_word, w, GeneratorSymbol, Letter, Word, WordError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error("invalid surface parameters g={genus}, n={boundary}: need g >= 2")]
    InvalidParams { genus: u32, boundary: u32 },
    #[error("{0} is not a generator of this surface")]
    ForeignSymbol(String),
    #[error("relator {id} uses {symbol}, which is not a generator")]
    ForeignLetter { id: String, symbol: String },
    #[error("duplicate relator id {0}")]
    DuplicateId(String),
    #[error("missing table entry: {0}")]
    MissingEntry(String),
    #[error("handle index {k} out of range 1..={max}")]
    HandleIndex { k: u32, max: u32 },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Word(#[from] WordError),
}

/// Genus and number of boundary components of the ambient surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SurfaceParams {
    pub genus: u32,
    pub boundary: u32,
}

impl SurfaceParams {
    pub fn new(genus: u32, boundary: u32) -> Result<Self, PresentationError> {
        if genus < 2 {
            return Err(PresentationError::InvalidParams { genus, boundary });
        }
        Ok(SurfaceParams { genus, boundary })
    }

    /// N = 2g + n - 2, the number of `a` curves.
    pub fn n_curves(&self) -> u32 {
        2 * self.genus + self.boundary - 2
    }

    pub fn a(&self, i: u32) -> GeneratorSymbol {
        GeneratorSymbol::A((i - 1) % self.n_curves() + 1)
    }

    pub fn c(&self, i: u32, j: u32) -> GeneratorSymbol {
        GeneratorSymbol::c(i, j, self.n_curves()).expect("c indices must differ mod N")
    }

    /// All Gervais generators in canonical order.
    pub fn generators(&self) -> Vec<GeneratorSymbol> {
        let n = self.n_curves();
        let mut gens = vec![GeneratorSymbol::B];
        gens.extend((1..self.genus).map(GeneratorSymbol::Bk));
        gens.extend((1..=n).map(GeneratorSymbol::A));
        for i in 1..=n {
            for j in 1..=n {
                if i != j {
                    gens.push(GeneratorSymbol::C(i, j));
                }
            }
        }
        gens
    }

    pub fn contains(&self, s: &GeneratorSymbol) -> bool {
        let n = self.n_curves();
        match s {
            GeneratorSymbol::B => true,
            GeneratorSymbol::Bk(k) => (1..self.genus).contains(k),
            GeneratorSymbol::A(i) => (1..=n).contains(i),
            GeneratorSymbol::C(i, j) => i != j && (1..=n).contains(i) && (1..=n).contains(j),
            GeneratorSymbol::Named(_) => false,
        }
    }

    pub fn word(&self, text: &str) -> Word {
        parse_word(text, Some(self)).unwrap_or_else(|e| panic!("bad word `{text}`: {e}"))
    }
}

impl fmt::Display for SurfaceParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.genus, self.boundary)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Only the explicitly pinned intersection facts.
    Conservative,
    /// Pinned facts plus the arc model for pairs of `c` curves.
    Full,
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "full" => Ok(Mode::Full),
            "conservative" => Ok(Mode::Conservative),
            other => Err(format!("unknown mode `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IntersectionClass {
    Disjoint,
    Once,
    Other,
}

/// Geometric intersection pattern of the curves underlying two generators.
pub fn intersection_class(
    x: &GeneratorSymbol,
    y: &GeneratorSymbol,
    p: &SurfaceParams,
    mode: Mode,
) -> Result<IntersectionClass, PresentationError> {
    use GeneratorSymbol::*;
    use IntersectionClass::*;
    for s in [x, y] {
        if !p.contains(s) {
            return Err(PresentationError::ForeignSymbol(s.to_string()));
        }
    }
    if x == y {
        return Ok(Other);
    }
    let class = match (x, y) {
        (A(_), A(_)) => Disjoint,
        (B, A(_)) | (A(_), B) => Once,
        (B, Bk(_)) | (Bk(_), B) | (Bk(_), Bk(_)) => Disjoint,
        (B, C(..)) | (C(..), B) => Disjoint,
        (Bk(k), A(i)) | (A(i), Bk(k)) => {
            if *i == 2 * k {
                Once
            } else {
                Disjoint
            }
        }
        (Bk(k), C(i, j)) | (C(i, j), Bk(k)) => {
            if *i == 2 * k || *j == 2 * k {
                Once
            } else {
                Disjoint
            }
        }
        (C(..), A(_)) | (A(_), C(..)) => Disjoint,
        (C(i, j), C(k, l)) => match mode {
            Mode::Conservative => Other,
            Mode::Full => {
                if arcs_interleave((*i, *j), (*k, *l), p.n_curves()) {
                    Other
                } else {
                    Disjoint
                }
            }
        },
        (B, B) | (Named(_), _) | (_, Named(_)) => unreachable!("rejected above"),
    };
    Ok(class)
}

/// Whether the chords with endpoints `{i,j}` and `{k,l}` on a cycle of `n`
/// points cross. Shared endpoints never count as crossing.
fn arcs_interleave((i, j): (u32, u32), (k, l): (u32, u32), n: u32) -> bool {
    if [k, l].contains(&i) || [k, l].contains(&j) {
        return false;
    }
    // strictly inside the clockwise arc from i to j
    let inside = |m: u32| {
        let span = (j + n - i) % n;
        let off = (m + n - i) % n;
        off > 0 && off < span
    };
    inside(k) != inside(l)
}

/// An index triple for a star relator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GoodTriple {
    pub i: u32,
    pub j: u32,
    pub k: u32,
}

impl GoodTriple {
    pub fn new(i: u32, j: u32, k: u32) -> Self {
        GoodTriple { i, j, k }
    }

    pub fn is_good(&self) -> bool {
        let GoodTriple { i, j, k } = *self;
        !(i == j && j == k) && ((i <= j && j <= k) || (j <= k && k <= i) || (k <= i && i <= j))
    }

    pub fn rotations(&self) -> [GoodTriple; 3] {
        let GoodTriple { i, j, k } = *self;
        [GoodTriple::new(i, j, k), GoodTriple::new(j, k, i), GoodTriple::new(k, i, j)]
    }

    pub fn canonical_rotation(&self) -> GoodTriple {
        *self.rotations().iter().min().expect("three rotations")
    }

    pub fn is_distinct(&self) -> bool {
        self.i != self.j && self.j != self.k && self.k != self.i
    }
}

impl fmt::Display for GoodTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.i, self.j, self.k)
    }
}

/// Good triples over `1..=N` in lexicographic order, optionally keeping only
/// the least rotation of each cyclic class.
pub fn good_triples(p: &SurfaceParams, dedup: bool) -> Vec<GoodTriple> {
    let n = p.n_curves();
    let mut out = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                let t = GoodTriple::new(i, j, k);
                if t.is_good() && (!dedup || t.canonical_rotation() == t) {
                    out.push(t);
                }
            }
        }
    }
    out
}

/// `c_ij c_jk c_ki ((a_i a_j a_k b)^3)^-1`, dropping any `c_ll` factor.
pub fn star_relator(t: GoodTriple, p: &SurfaceParams) -> Word {
    let GoodTriple { i, j, k } = t;
    let mut letters = Vec::new();
    for (x, y) in [(i, j), (j, k), (k, i)] {
        if x != y {
            letters.push(Letter::pos(p.c(x, y)));
        }
    }
    let cs = Word::from_letters(letters);
    let inner = Word::from_letters(
        [p.a(i), p.a(j), p.a(k), GeneratorSymbol::B].into_iter().map(Letter::pos).collect(),
    );
    cs.concat(&inner.pow(-3))
}

/// `c_{2k,2k+1} c_{2k-1,2k}^-1`.
pub fn handle_relator(k: u32, p: &SurfaceParams) -> Result<Word, PresentationError> {
    if k == 0 || k > p.genus - 1 {
        return Err(PresentationError::HandleIndex { k, max: p.genus - 1 });
    }
    Ok(Word::from_letters(vec![
        Letter::pos(p.c(2 * k, 2 * k + 1)),
        Letter::new(p.c(2 * k - 1, 2 * k), true),
    ]))
}

/// The two displayed forms of the lantern relation for a good triple with
/// distinct entries, with `X = b a_i a_k b`:
/// `a_i c_ij c_jk a_k = c_ik a_j X a_j X^-1` and `= c_ik X^-1 a_j X a_j`.
pub fn lantern_relators(t: GoodTriple, p: &SurfaceParams) -> (Word, Word) {
    let GoodTriple { i, j, k } = t;
    let lhs = Word::from_letters(
        [p.a(i), p.c(i, j), p.c(j, k), p.a(k)].into_iter().map(Letter::pos).collect(),
    );
    let x = Word::from_letters(
        [GeneratorSymbol::B, p.a(i), p.a(k), GeneratorSymbol::B].into_iter().map(Letter::pos).collect(),
    );
    let cik = Word::gen(p.c(i, k));
    let aj = Word::gen(p.a(j));
    let rhs1 = Word::product([&cik, &aj, &x, &aj, &x.invert()]);
    let rhs2 = Word::product([&cik, &x.invert(), &aj, &x, &aj]);
    (lhs.concat(&rhs1.invert()), lhs.concat(&rhs2.invert()))
}

pub fn commutator(x: &Word, y: &Word) -> Word {
    Word::product([x, y, &x.invert(), &y.invert()])
}

/// `x y x y^-1 x^-1 y^-1`.
pub fn braid_word(x: &Word, y: &Word) -> Word {
    Word::product([x, y, x, &y.invert(), &x.invert(), &y.invert()])
}

/// Canonical id for the braid or commutation relator of a pair.
pub fn braid_id(x: &GeneratorSymbol, y: &GeneratorSymbol) -> String {
    let (x, y) = if x <= y { (x, y) } else { (y, x) };
    format!("braid({x},{y})")
}

/// Where a relator came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    Handle,
    Braid,
    Commute,
    Star,
    LanternDerived,
    Imported,
    Lemma,
    Extension(u8),
    Central,
    Amalgam(u8),
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Handle => write!(f, "handle"),
            Provenance::Braid => write!(f, "braid"),
            Provenance::Commute => write!(f, "commute"),
            Provenance::Star => write!(f, "star"),
            Provenance::LanternDerived => write!(f, "lantern-derived"),
            Provenance::Imported => write!(f, "imported"),
            Provenance::Lemma => write!(f, "lemma"),
            Provenance::Extension(t) => write!(f, "extension-type-{t}"),
            Provenance::Central => write!(f, "central"),
            Provenance::Amalgam(t) => write!(f, "amalgam-Y{t}"),
        }
    }
}

impl FromStr for Provenance {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "handle" => Provenance::Handle,
            "braid" => Provenance::Braid,
            "commute" => Provenance::Commute,
            "star" => Provenance::Star,
            "lantern-derived" => Provenance::LanternDerived,
            "imported" => Provenance::Imported,
            "lemma" => Provenance::Lemma,
            "central" => Provenance::Central,
            _ => {
                if let Some(t) = s.strip_prefix("extension-type-").and_then(|t| t.parse().ok()) {
                    Provenance::Extension(t)
                } else if let Some(t) = s.strip_prefix("amalgam-Y").and_then(|t| t.parse().ok()) {
                    Provenance::Amalgam(t)
                } else {
                    return Err(format!("unknown provenance `{s}`"));
                }
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relator {
    pub id: String,
    pub word: Word,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub name: String,
    pub generators: Vec<GeneratorSymbol>,
    pub relators: Vec<Relator>,
    /// Surface the generators live on, when it is a Gervais-style presentation.
    pub surface: Option<SurfaceParams>,
    index: HashMap<String, usize>,
}

impl Presentation {
    pub fn new(name: impl Into<String>, generators: Vec<GeneratorSymbol>) -> Self {
        Presentation {
            name: name.into(),
            generators,
            relators: Vec::new(),
            surface: None,
            index: HashMap::new(),
        }
    }

    pub fn push(&mut self, id: impl Into<String>, word: Word, provenance: Provenance) -> Result<(), PresentationError> {
        let id = id.into();
        if self.index.contains_key(&id) {
            return Err(PresentationError::DuplicateId(id));
        }
        self.index.insert(id.clone(), self.relators.len());
        self.relators.push(Relator { id, word, provenance });
        Ok(())
    }

    pub fn relator(&self, id: &str) -> Option<&Relator> {
        self.index.get(id).map(|&i| &self.relators[i])
    }

    pub fn has_generator(&self, s: &GeneratorSymbol) -> bool {
        self.generators.contains(s)
    }

    /// Checks that every relator letter is a generator and ids are unique.
    pub fn validate(&self) -> Result<(), PresentationError> {
        let gens: HashSet<&GeneratorSymbol> = self.generators.iter().collect();
        let mut ids = HashSet::new();
        for r in &self.relators {
            if !ids.insert(r.id.as_str()) {
                return Err(PresentationError::DuplicateId(r.id.clone()));
            }
            if let Some(s) = r.word.symbols().find(|s| !gens.contains(s)) {
                return Err(PresentationError::ForeignLetter { id: r.id.clone(), symbol: s.to_string() });
            }
        }
        Ok(())
    }

    /// Look up a justification id. Braid ids are accepted in either order.
    pub fn resolve(&self, id: &str) -> Option<&Relator> {
        if let Some(r) = self.relator(id) {
            return Some(r);
        }
        let inner = id.strip_prefix("braid(")?.strip_suffix(')')?;
        let (x, y) = split_top_comma(inner)?;
        let mut x = crate::words::parse_letter(x.trim(), 0).ok()?.symbol;
        let mut y = crate::words::parse_letter(y.trim(), 0).ok()?.symbol;
        if let Some(p) = &self.surface {
            x = x.in_surface(p).ok()?;
            y = y.in_surface(p).ok()?;
        }
        self.relator(&braid_id(&x, &y))
    }

    /// Serialize in the line-oriented presentation format.
    pub fn emit(&self) -> String {
        let mut out = format!("presentation {}\n", self.name);
        if let Some(p) = &self.surface {
            out.push_str(&format!("surface {} {}\n", p.genus, p.boundary));
        }
        for g in &self.generators {
            out.push_str(&format!("gen {g}\n"));
        }
        for r in &self.relators {
            out.push_str(&format!("rel {} : {}\n", r.id, r.word));
        }
        for r in &self.relators {
            out.push_str(&format!("meta {} {}\n", r.id, r.provenance));
        }
        out
    }

    /// Parse the presentation format. `meta` lines are optional; relators
    /// without one are marked imported. A `surface g n` line attaches
    /// surface parameters.
    pub fn load(text: &str) -> Result<Presentation, PresentationError> {
        let mut name = None;
        let mut gens = Vec::new();
        let mut rels: Vec<(String, Word)> = Vec::new();
        let mut meta: BTreeMap<String, Provenance> = BTreeMap::new();
        let mut surface = None;
        for (ln, line) in text.lines().enumerate() {
            let err = |msg: String| PresentationError::Parse { line: ln + 1, msg };
            let line = line.trim_end();
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let (head, rest) = line.split_once(' ').unwrap_or((line, ""));
            match head {
                "presentation" => name = Some(rest.trim().to_string()),
                "surface" => {
                    let nums: Vec<u32> = rest.split_whitespace().filter_map(|t| t.parse().ok()).collect();
                    if nums.len() != 2 {
                        return Err(err("expected `surface <g> <n>`".into()));
                    }
                    surface = Some(SurfaceParams::new(nums[0], nums[1])?);
                }
                "gen" => {
                    let l = crate::words::parse_letter(rest.trim(), 0).map_err(|e| err(e.to_string()))?;
                    if l.inverse {
                        return Err(err("generator cannot be inverted".into()));
                    }
                    gens.push(l.symbol);
                }
                "rel" => {
                    let (id, word) = rest.split_once(" : ").or_else(|| {
                        rest.strip_suffix(" :").map(|id| (id, ""))
                    }).ok_or_else(|| err("expected `rel <id> : <word>`".into()))?;
                    let word = parse_word(word, surface.as_ref()).map_err(|e| err(e.to_string()))?;
                    rels.push((id.trim().to_string(), word));
                }
                "meta" => {
                    let (id, prov) = rest.trim().rsplit_once(' ').ok_or_else(|| err("expected `meta <id> <provenance>`".into()))?;
                    meta.insert(id.to_string(), prov.parse().map_err(err)?);
                }
                other => return Err(err(format!("unknown directive `{other}`"))),
            }
        }
        let name = name.ok_or(PresentationError::Parse { line: 1, msg: "missing `presentation` header".into() })?;
        let mut p = Presentation::new(name, gens);
        p.surface = surface;
        for (id, word) in rels {
            let prov = meta.get(&id).copied().unwrap_or(Provenance::Imported);
            p.push(id, word, prov)?;
        }
        p.validate()?;
        Ok(p)
    }
}

fn split_top_comma(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    for (i, ch) in s.char_indices() {
        match ch {
            '{' | '(' => depth += 1,
            '}' | ')' => depth -= 1,
            ',' if depth == 0 => return Some((&s[..i], &s[i + 1..])),
            _ => {}
        }
    }
    None
}

/// Options for [`gervais_with`].
#[derive(Debug, Clone, Copy)]
pub struct GervaisOptions {
    pub mode: Mode,
    pub dedup_stars: bool,
    pub lanterns: bool,
}

impl Default for GervaisOptions {
    fn default() -> Self {
        GervaisOptions { mode: Mode::Full, dedup_stars: true, lanterns: false }
    }
}

pub fn gervais(p: SurfaceParams, mode: Mode) -> Presentation {
    gervais_with(p, GervaisOptions { mode, ..Default::default() })
}

/// The Gervais presentation: handle, braid and star relators.
pub fn gervais_with(p: SurfaceParams, opts: GervaisOptions) -> Presentation {
    let mut name = match opts.mode {
        Mode::Full => format!("gervais({p})"),
        Mode::Conservative => format!("gervais-conservative({p})"),
    };
    if opts.lanterns {
        name = name.replacen("gervais", "gervais-lantern", 1);
    }
    if !opts.dedup_stars {
        name = name.replacen("gervais", "gervais-allstars", 1);
    }
    let gens = p.generators();
    let mut pres = Presentation::new(name, gens.clone());
    pres.surface = Some(p);
    let push = |pres: &mut Presentation, id: String, word: Word, prov| {
        pres.push(id, word, prov).expect("builder ids are unique")
    };
    for k in 1..p.genus {
        push(&mut pres, format!("handle({k})"), handle_relator(k, &p).expect("k in range"), Provenance::Handle);
    }
    for (ix, x) in gens.iter().enumerate() {
        for y in &gens[ix + 1..] {
            let (gx, gy) = if x <= y { (x, y) } else { (y, x) };
            let (wx, wy) = (Word::gen(gx.clone()), Word::gen(gy.clone()));
            match intersection_class(gx, gy, &p, opts.mode).expect("generators of p") {
                IntersectionClass::Disjoint => {
                    push(&mut pres, braid_id(gx, gy), commutator(&wx, &wy), Provenance::Commute)
                }
                IntersectionClass::Once => {
                    push(&mut pres, braid_id(gx, gy), braid_word(&wx, &wy), Provenance::Braid)
                }
                IntersectionClass::Other => {}
            }
        }
    }
    for t in good_triples(&p, opts.dedup_stars) {
        push(&mut pres, format!("star({t})"), star_relator(t, &p), Provenance::Star);
    }
    if opts.lanterns {
        for t in good_triples(&p, false).into_iter().filter(GoodTriple::is_distinct) {
            let (l1, l2) = lantern_relators(t, &p);
            push(&mut pres, format!("lantern({t})"), l1, Provenance::LanternDerived);
            push(&mut pres, format!("lantern-alt({t})"), l2, Provenance::LanternDerived);
        }
    }
    pres
}

/// The five generator presentation of the closed genus two group: braid
/// and commutation relators among `a1, b, a2, b1, c{1,2}` and the single
/// star relator `c{1,2}^2 = (a1 a1 a2 b)^3`.
pub fn gervais_compact_2_0() -> Presentation {
    let p = SurfaceParams::new(2, 0).expect("genus two");
    let full = gervais(p, Mode::Full);
    let gens = vec![p.a(1), GeneratorSymbol::B, p.a(2), GeneratorSymbol::Bk(1), p.c(1, 2)];
    let mut pres = Presentation::new("gervais-compact(2,0)", gens.clone());
    pres.surface = Some(p);
    for r in &full.relators {
        if matches!(r.provenance, Provenance::Braid | Provenance::Commute) && r.word.symbols().all(|s| gens.contains(s)) {
            pres.push(r.id.clone(), r.word.clone(), r.provenance).expect("unique");
        }
    }
    let c = Word::gen(p.c(1, 2));
    let star = Word::product([&c, &c, &p.word("a1 a1 a2 b").pow(3).invert()]);
    pres.push("star(1,1,2)", star, Provenance::Star).expect("unique");
    pres
}

/// The point-pushing loops of genus two with one boundary component,
/// written through twists: `x0 = a1 a3'`, `x1 = b(x0)`, `x2 = a2(x1)`,
/// `x3 = b1(x2)`.
pub fn pushing_loops_2_1() -> [Word; 4] {
    let p = SurfaceParams::new(2, 1).expect("genus two");
    let x0 = p.word("a1 a3'");
    let x1 = Word::conjugate(&p.word("b"), &x0);
    let x2 = Word::conjugate(&p.word("a2"), &x1);
    let x3 = Word::conjugate(&p.word("b1"), &x2);
    [x0, x1, x2, x3]
}

/// `gervais-lantern(2,1)` together with the action of `c{1,2}` on the loop
/// `x3` including its boundary correction, `c{1,2}(x3) = x3 x2' x1 x0' c{3,1}`,
/// as an imported relator `action(c{1,2},x3)`.
pub fn gervais_action_2_1() -> Presentation {
    let p = SurfaceParams::new(2, 1).expect("genus two");
    let mut pres = gervais_with(p, GervaisOptions { lanterns: true, ..Default::default() });
    pres.name = "gervais-action(2,1)".into();
    let [x0, x1, x2, x3] = pushing_loops_2_1();
    let c12 = p.word("c{1,2}");
    let lhs = Word::conjugate(&c12, &x3);
    let rhs = Word::product([&x3, &x2.invert(), &x1, &x0.invert(), &p.word("c{3,1}")]);
    pres.push("action(c{1,2},x3)", lhs.concat(&rhs.invert()), Provenance::Imported).expect("unique");
    pres
}

pub fn tau(i: u32) -> GeneratorSymbol {
    GeneratorSymbol::named(&format!("tau{i}"))
}

/// The Birman-Hilden presentation of the genus 2 mapping class group on
/// `tau1..tau5`.
pub fn birman_hilden_2_0() -> Presentation {
    let gens: Vec<GeneratorSymbol> = (1..=5).map(tau).collect();
    let t = |i: u32| Word::gen(tau(i));
    let mut pres = Presentation::new("birman-hilden(2,0)", gens);
    for i in 1..=5u32 {
        for j in i + 2..=5 {
            pres.push(format!("bh-commute({i},{j})"), commutator(&t(i), &t(j)), Provenance::Commute)
                .expect("unique");
        }
    }
    for i in 1..=4u32 {
        pres.push(format!("bh-braid({i},{})", i + 1), braid_word(&t(i), &t(i + 1)), Provenance::Braid)
            .expect("unique");
    }
    let chain = w("tau1 tau2 tau3 tau4 tau5");
    pres.push("bh-iii", chain.pow(6), Provenance::Imported).expect("unique");
    let pal = w("tau1 tau2 tau3 tau4 tau5 tau5 tau4 tau3 tau2 tau1");
    pres.push("bh-iv", pal.pow(2), Provenance::Imported).expect("unique");
    for i in 1..=5u32 {
        pres.push(format!("bh-v({i})"), commutator(&pal, &t(i)), Provenance::Imported).expect("unique");
    }
    pres
}

/// Images of `tau1..tau5` under the map to the genus two twist group:
/// `a1, b, a2, b1, c{1,2}`.
pub fn phi_images() -> BTreeMap<GeneratorSymbol, Word> {
    let p = SurfaceParams::new(2, 0).expect("genus two");
    ["a1", "b", "a2", "b1", "c{1,2}"].iter().enumerate().map(|(i, g)| (tau(i as u32 + 1), p.word(g))).collect()
}

/// The inverse assignment `a1, b, a2, b1, c{1,2}` to `tau1..tau5`.
pub fn psi_images() -> BTreeMap<GeneratorSymbol, Word> {
    phi_images().into_iter().map(|(t, g)| (g.letters()[0].symbol.clone(), Word::gen(t))).collect()
}

/// Key for the central exponent corrections of an extension.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExponentKey {
    /// The action row for `(r, l)`.
    Action(GeneratorSymbol, GeneratorSymbol),
    /// The lifted value of a quotient relator.
    Lifted(String),
    /// A relator of the kernel presentation.
    Base(String),
}

/// A central generator with exponent corrections: the relation for a key
/// `k` reads `lhs = rhs * z^e` where `e = exponents[k]` (absent means 0).
#[derive(Debug, Clone)]
pub struct CentralData {
    pub symbol: GeneratorSymbol,
    pub exponents: BTreeMap<ExponentKey, i64>,
}

/// Presentation of a group `G` with normal subgroup `L` and quotient `R`:
/// generators of both, the conjugation action of `R` on `L`, lifts of the
/// `R` relators into `L` and the relators of `L`.
pub fn extension_presentation(
    name: &str,
    pl: &Presentation,
    pr: &Presentation,
    action: &BTreeMap<(GeneratorSymbol, GeneratorSymbol), Word>,
    lifted: &BTreeMap<String, Word>,
    central: Option<&CentralData>,
) -> Result<Presentation, PresentationError> {
    let mut gens = pl.generators.clone();
    gens.extend(pr.generators.iter().cloned());
    if let Some(c) = central {
        if !gens.contains(&c.symbol) {
            gens.push(c.symbol.clone());
        }
    }
    let l_gens: HashSet<&GeneratorSymbol> = pl.generators.iter().chain(central.map(|c| &c.symbol)).collect();
    let check_l = |id: &str, word: &Word| -> Result<(), PresentationError> {
        match word.symbols().find(|s| !l_gens.contains(s)) {
            Some(s) => Err(PresentationError::ForeignLetter { id: id.to_string(), symbol: s.to_string() }),
            None => Ok(()),
        }
    };
    let z_pow = |key: ExponentKey| -> Word {
        match central {
            Some(c) => Word::gen(c.symbol.clone()).pow(c.exponents.get(&key).copied().unwrap_or(0)),
            None => Word::empty(),
        }
    };
    let mut pres = Presentation::new(name, gens);
    for r in &pr.generators {
        for l in &pl.generators {
            let id = format!("act({r},{l})");
            let img = action.get(&(r.clone(), l.clone())).ok_or_else(|| PresentationError::MissingEntry(id.clone()))?;
            check_l(&id, img)?;
            let (wr, wl) = (Word::gen(r.clone()), Word::gen(l.clone()));
            let lhs = Word::product([&wr, &wl, &wr.invert()]);
            let rhs = img.concat(&z_pow(ExponentKey::Action(r.clone(), l.clone())));
            pres.push(id, lhs.concat(&rhs.invert()), Provenance::Extension(1))?;
        }
    }
    for rel in &pr.relators {
        let id = format!("lift({})", rel.id);
        let val = lifted.get(&rel.id).ok_or_else(|| PresentationError::MissingEntry(id.clone()))?;
        check_l(&id, val)?;
        let rhs = val.concat(&z_pow(ExponentKey::Lifted(rel.id.clone())));
        pres.push(id, rel.word.concat(&rhs.invert()), Provenance::Extension(2))?;
    }
    for rel in &pl.relators {
        let rhs = z_pow(ExponentKey::Base(rel.id.clone()));
        pres.push(rel.id.clone(), rel.word.concat(&rhs.invert()), Provenance::Extension(3))?;
    }
    if let Some(c) = central {
        let z = Word::gen(c.symbol.clone());
        for g in pres.generators.clone() {
            if g != c.symbol {
                pres.push(format!("central({g})"), commutator(&z, &Word::gen(g)), Provenance::Central)?;
            }
        }
    }
    pres.validate()?;
    Ok(pres)
}

/// Data of the relations added when a stabilizer is amalgamated with an
/// extra generator `t1` swapping two vertices.
#[derive(Debug, Clone)]
pub struct AmalgamData {
    pub t1: GeneratorSymbol,
    /// `t1^2` as a word in the stabilizer.
    pub y1: Word,
    /// Rows `(s, v)` meaning `t1 s t1^-1 = v`.
    pub y2: Vec<(Word, Word)>,
    /// `W = v` with `W` over the stabilizer and `t1`.
    pub y3: (Word, Word),
}

pub fn amalgam_presentation(name: &str, stab: &Presentation, data: &AmalgamData) -> Result<Presentation, PresentationError> {
    let stab_gens: HashSet<&GeneratorSymbol> = stab.generators.iter().collect();
    let check = |id: &str, word: &Word, allow_t1: bool| -> Result<(), PresentationError> {
        match word.symbols().find(|s| !stab_gens.contains(s) && !(allow_t1 && **s == data.t1)) {
            Some(s) => Err(PresentationError::ForeignLetter { id: id.to_string(), symbol: s.to_string() }),
            None => Ok(()),
        }
    };
    let mut gens = stab.generators.clone();
    gens.push(data.t1.clone());
    let mut pres = Presentation::new(name, gens);
    pres.surface = stab.surface;
    for r in &stab.relators {
        pres.push(r.id.clone(), r.word.clone(), r.provenance)?;
    }
    let t = Word::gen(data.t1.clone());
    check("Y1", &data.y1, false)?;
    pres.push("Y1", t.pow(2).concat(&data.y1.invert()), Provenance::Amalgam(1))?;
    if data.y2.is_empty() {
        return Err(PresentationError::MissingEntry("Y2 rows".into()));
    }
    for (k, (s, v)) in data.y2.iter().enumerate() {
        let id = format!("Y2({k})");
        check(&id, s, false)?;
        check(&id, v, false)?;
        let lhs = Word::product([&t, s, &t.invert()]);
        pres.push(id, lhs.concat(&v.invert()), Provenance::Amalgam(2))?;
    }
    let (wl, wr) = &data.y3;
    check("Y3", wl, true)?;
    check("Y3", wr, false)?;
    pres.push("Y3", wl.concat(&wr.invert()), Provenance::Amalgam(3))?;
    pres.validate()?;
    Ok(pres)
}

/// The element `t1 = b2 c{4,5} a4 b2` of genus three with one boundary
/// component, which swaps the curves `c{4,5}` and `a4`.
pub fn t1_word_3_1() -> Word {
    SurfaceParams::new(3, 1).expect("genus three").word("b2 c{4,5} a4 b2")
}

/// The (Y1), (Y2), (Y3) data for genus three with one boundary component.
/// Stabilizer words are written in the twist generators; `r` stands for
/// `(c{3,4} c{3,4} b2)^2`.
pub fn amalgam_data_3_1() -> AmalgamData {
    let p = SurfaceParams::new(3, 1).expect("genus three");
    let r = p.word("c{3,4} c{3,4} b2").pow(2);
    let y1 = p.word("a4' a4' c{4,5}' c{4,5}' a3 a5");
    let pw = p.word("b a4 a4 b");
    let p_prime = Word::product([&p.word("b' a4' c{4,5}' c{4,5}'"), &r, &p.word("a4 b")]);
    let y2c = p.word("b a2 a4 b").invert();
    let mut y2 = vec![
        (pw.clone(), p_prime.clone()),
        (p_prime, Word::product([&y1, &pw, &y1.invert()])),
        (p.word("c{4,5}"), p.word("a4")),
        (p.word("a4"), p.word("c{4,5}")),
        (p.word("c{4,2}"), Word::conjugate(&y2c, &p.word("a5"))),
        (p.word("c{2,4}"), Word::conjugate(&y2c, &p.word("a3"))),
    ];
    for fixed in ["c{1,2}", "c{5,2}", "c{5,1}", "b1", "a2"] {
        y2.push((p.word(fixed), p.word(fixed)));
    }
    let t = Word::gen(GeneratorSymbol::named("t1"));
    let t2 = p.word("b a4 a2 b");
    let wl = Word::product([&t, &t2, &t, &t2, &t]);
    let wr = Word::product([&y1, &t2, &y1]);
    AmalgamData { t1: GeneratorSymbol::named("t1"), y1, y2, y3: (wl, wr) }
}

/// `gervais(3,1)` amalgamated with `t1` along the (Y1), (Y2), (Y3) data.
pub fn amalgam_3_1() -> Presentation {
    let p = SurfaceParams::new(3, 1).expect("genus three");
    amalgam_presentation("amalgam(3,1)", &gervais(p, Mode::Full), &amalgam_data_3_1()).expect("data over the stabilizer")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(g: u32, n: u32) -> SurfaceParams {
        SurfaceParams::new(g, n).unwrap()
    }

    #[test]
    fn intersection_examples() {
        let p = sp(2, 0);
        let ic = |x: &str, y: &str| {
            let (x, y) = (p.word(x).letters()[0].symbol.clone(), p.word(y).letters()[0].symbol.clone());
            intersection_class(&x, &y, &p, Mode::Full).unwrap()
        };
        assert_eq!(ic("a1", "b"), IntersectionClass::Once);
        assert_eq!(ic("a1", "a2"), IntersectionClass::Disjoint);
        assert_eq!(ic("b1", "c{1,2}"), IntersectionClass::Once);
        let q = sp(3, 1);
        let b2 = GeneratorSymbol::Bk(2);
        for i in [1u32, 2, 5] {
            let c = q.c(i, 3);
            assert_eq!(intersection_class(&b2, &c, &q, Mode::Full).unwrap(), IntersectionClass::Disjoint);
        }
        assert!(intersection_class(&GeneratorSymbol::A(9), &b2, &q, Mode::Full).is_err());
    }

    #[test]
    fn arc_model() {
        let q = sp(3, 1); // N = 5
        let c = |i, j| q.c(i, j);
        let ic = |x, y| intersection_class(&x, &y, &q, Mode::Full).unwrap();
        assert_eq!(ic(c(1, 3), c(2, 4)), IntersectionClass::Other);
        assert_eq!(ic(c(1, 3), c(3, 5)), IntersectionClass::Disjoint);
        assert_eq!(ic(c(1, 4), c(2, 3)), IntersectionClass::Disjoint);
        assert_eq!(ic(c(1, 2), c(2, 1)), IntersectionClass::Disjoint);
        assert_eq!(intersection_class(&c(1, 2), &c(3, 4), &q, Mode::Conservative).unwrap(), IntersectionClass::Other);
    }

    #[test]
    fn good_triple_examples() {
        let p = sp(2, 0);
        let all: Vec<_> = good_triples(&p, false).iter().map(|t| (t.i, t.j, t.k)).collect();
        assert_eq!(all, vec![(1, 1, 2), (1, 2, 1), (1, 2, 2), (2, 1, 1), (2, 1, 2), (2, 2, 1)]);
        let d: Vec<_> = good_triples(&p, true).iter().map(|t| (t.i, t.j, t.k)).collect();
        assert_eq!(d, vec![(1, 1, 2), (1, 2, 2)]);
        assert!(!GoodTriple::new(2, 2, 2).is_good());
    }

    #[test]
    fn star_and_handle_examples() {
        let p = sp(2, 0);
        assert_eq!(
            star_relator(GoodTriple::new(1, 1, 2), &p),
            p.word("c{1,2} c{2,1}").concat(&p.word("a1 a1 a2 b").pow(-3))
        );
        assert_eq!(handle_relator(1, &p).unwrap(), p.word("c{2,1} c{1,2}'"));
        let q = sp(2, 1);
        assert_eq!(handle_relator(1, &q).unwrap(), q.word("c{2,3} c{1,2}'"));
        assert_eq!(
            star_relator(GoodTriple::new(1, 2, 3), &q),
            q.word("c{1,2} c{2,3} c{3,1}").concat(&q.word("a1 a2 a3 b").pow(-3))
        );
        assert!(handle_relator(2, &p).is_err());
    }

    #[test]
    fn gervais_counts() {
        let p = gervais(sp(2, 0), Mode::Full);
        assert_eq!(p.generators.len(), 6);
        assert_eq!(gervais(sp(2, 1), Mode::Full).generators.len(), 11);
        assert_eq!(p.relators.iter().filter(|r| r.provenance == Provenance::Handle).count(), 1);
        p.validate().unwrap();
        assert!(gervais(sp(2, 1), Mode::Full).relator("star(1,2,3)").is_some());
        assert!(p.resolve("braid(b,a1)").is_some());
        assert_eq!(p.resolve("braid(b,a1)").unwrap().id, "braid(a1,b)");
    }

    #[test]
    fn birman_hilden_shape() {
        let bh = birman_hilden_2_0();
        assert_eq!(bh.relators.len(), 17);
        assert_eq!(bh.relator("bh-iii").unwrap().word, w("tau1 tau2 tau3 tau4 tau5").pow(6));
        bh.validate().unwrap();
    }

    #[test]
    fn file_round_trip() {
        let p = gervais_with(sp(2, 1), GervaisOptions { lanterns: true, ..Default::default() });
        let text = p.emit();
        let q = Presentation::load(&text).unwrap();
        assert_eq!(q.emit(), text);
        assert_eq!(q.relators, p.relators);
    }

    #[test]
    fn extension_direct_product() {
        let l = GeneratorSymbol::named("l");
        let r = GeneratorSymbol::named("r");
        let mut pl = Presentation::new("L", vec![l.clone()]);
        pl.push("l2", w("l l"), Provenance::Imported).unwrap();
        let mut pr = Presentation::new("R", vec![r.clone()]);
        pr.push("r2", w("r r"), Provenance::Imported).unwrap();
        let action = BTreeMap::from([((r, l), w("l"))]);
        let lifted = BTreeMap::from([("r2".to_string(), Word::empty())]);
        let e = extension_presentation("E", &pl, &pr, &action, &lifted, None).unwrap();
        assert_eq!(e.relators.len(), 3);
        assert!(e.relator("l2").is_some());
        assert!(extension_presentation("E", &pl, &pr, &BTreeMap::new(), &lifted, None).is_err());
    }

    #[test]
    fn amalgam_degenerate() {
        let g = GeneratorSymbol::named("g");
        let stab = Presentation::new("S", vec![g]);
        let data = AmalgamData {
            t1: GeneratorSymbol::named("t"),
            y1: Word::empty(),
            y2: vec![(w("g"), w("g"))],
            y3: (w("t t t"), Word::empty()),
        };
        let a = amalgam_presentation("A", &stab, &data).unwrap();
        assert_eq!(a.relators.len(), 3);
        let bad = AmalgamData { y1: w("q"), ..data };
        assert!(amalgam_presentation("A", &stab, &bad).is_err());
    }
}
