//! Integer homology representation of Dehn twists, finite quotients by
//! reduction mod p, and abelianization via Smith normal form.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::presentations::{intersection_class, IntersectionClass, Mode, Presentation, SurfaceParams};
use crate::words::{GeneratorSymbol, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepError {
    #[error("no homology class for {0}")]
    UnknownSymbol(String),
    #[error("closure exceeded {0} elements")]
    CapExceeded(usize),
    #[error("matrix not invertible mod {0}")]
    NotInvertible(u32),
    #[error("definition of {0} is recursive")]
    Recursive(String),
}

/// Dense square matrix over the integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    dim: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(dim: usize) -> Self {
        IntMatrix { dim, data: vec![BigInt::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zero(dim);
        for i in 0..dim {
            m.data[i * dim + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "matrix must be square");
        IntMatrix { dim, data: rows.iter().flatten().map(|&x| BigInt::from(x)).collect() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.dim + j] = v;
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = Self::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.data[k * n + j];
                    if !b.is_zero() {
                        out.data[i * n + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        IntMatrix { dim: self.dim, data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect() }
    }

    pub fn transpose(&self) -> IntMatrix {
        let n = self.dim;
        let mut out = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].clone();
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        (0..self.dim).map(|i| (0..self.dim).map(|j| self.get(i, j) * &v[j]).sum()).collect()
    }

    /// Entries reduced into `0..p`, row-major.
    pub fn mod_p(&self, p: u32) -> Vec<u32> {
        let pb = BigInt::from(p);
        self.data.iter().map(|x| x.mod_floor(&pb).to_u32().expect("residue fits")).collect()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Homology classes of curves and the skew intersection form.
#[derive(Debug, Clone)]
pub struct CurveClassTable {
    pub dim: usize,
    pub classes: BTreeMap<GeneratorSymbol, Vec<BigInt>>,
    /// The intersection form, `<x, y> = x^T J y`.
    pub form: IntMatrix,
}

impl CurveClassTable {
    /// Classes for the Gervais curves on the surface `p`.
    ///
    /// Basis: `e_0..e_{g-1}`, `f_0..f_{g-1}` with `<e_k, f_k> = 1`, then
    /// `n - 1` radical vectors for the boundary. The `a` curves are
    /// `[a_i] = f_0 + sum_{l<i} d_l` where `d_{2k-1} = e_k`, `d_{2k} = -e_k`
    /// for the inner handles and the remaining `d_l` are boundary classes
    /// summing to zero. Then `[b] = e_0`, `[b_k] = f_k` and
    /// `[c_{i,j}] = [a_j] - [a_i]`.
    pub fn gervais(p: &SurfaceParams) -> Self {
        let g = p.genus as usize;
        let n = p.n_curves() as usize;
        let radicals = (p.boundary as usize).saturating_sub(1);
        let dim = 2 * g + radicals;
        let e = |k: usize| unit(dim, k);
        let f = |k: usize| unit(dim, g + k);
        // d_l for l = 1..=n
        let mut d: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for l in 1..=n {
            let v = if l <= 2 * g - 2 {
                let k = l.div_ceil(2);
                if l % 2 == 1 {
                    e(k)
                } else {
                    neg(&e(k))
                }
            } else {
                let r = l - (2 * g - 2) - 1; // 0..n_boundary
                if r < radicals {
                    unit(dim, 2 * g + r)
                } else {
                    // the last boundary class closes the sum
                    let mut s = vec![BigInt::zero(); dim];
                    for q in 0..radicals {
                        s[2 * g + q] -= 1;
                    }
                    s
                }
            };
            d.push(v);
        }
        let mut classes = BTreeMap::new();
        classes.insert(GeneratorSymbol::B, e(0));
        for k in 1..g {
            classes.insert(GeneratorSymbol::Bk(k as u32), f(k));
        }
        let mut a_classes = Vec::with_capacity(n);
        let mut acc = f(0);
        for i in 1..=n {
            a_classes.push(acc.clone());
            classes.insert(GeneratorSymbol::A(i as u32), acc.clone());
            acc = add(&acc, &d[i - 1]);
        }
        for i in 1..=n {
            for j in 1..=n {
                if i != j {
                    let v = sub(&a_classes[j - 1], &a_classes[i - 1]);
                    classes.insert(GeneratorSymbol::C(i as u32, j as u32), v);
                }
            }
        }
        let mut form = IntMatrix::zero(dim);
        for k in 0..g {
            form.set(k, g + k, BigInt::one());
            form.set(g + k, k, -BigInt::one());
        }
        CurveClassTable { dim, classes, form }
    }

    pub fn pairing(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        let jy = self.form.apply(y);
        x.iter().zip(&jy).map(|(a, b)| a * b).sum()
    }

    pub fn class(&self, s: &GeneratorSymbol) -> Option<&Vec<BigInt>> {
        self.classes.get(s)
    }

    /// Check the pairing against the intersection table for every pair of
    /// generators, returning the offending pairs.
    pub fn pairing_violations(&self, p: &SurfaceParams, mode: Mode) -> Vec<(GeneratorSymbol, GeneratorSymbol)> {
        let gens = p.generators();
        let mut bad = Vec::new();
        for (ix, x) in gens.iter().enumerate() {
            for y in &gens[ix + 1..] {
                let v = self.pairing(&self.classes[x], &self.classes[y]);
                let ok = match intersection_class(x, y, p, mode).expect("generators of p") {
                    IntersectionClass::Once => v.abs().is_one(),
                    IntersectionClass::Disjoint => v.is_zero(),
                    IntersectionClass::Other => true,
                };
                if !ok {
                    bad.push((x.clone(), y.clone()));
                }
            }
        }
        bad
    }
}

fn unit(dim: usize, i: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); dim];
    v[i] = BigInt::one();
    v
}

fn neg(v: &[BigInt]) -> Vec<BigInt> {
    v.iter().map(|x| -x).collect()
}

fn add(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Transvection representation: curve classes plus word definitions for
/// named generators that abbreviate words in the curve alphabet.
#[derive(Debug, Clone)]
pub struct TransvectionRep {
    pub table: CurveClassTable,
    pub definitions: HashMap<GeneratorSymbol, Word>,
}

impl TransvectionRep {
    pub fn new(table: CurveClassTable) -> Self {
        TransvectionRep { table, definitions: HashMap::new() }
    }

    pub fn gervais(p: &SurfaceParams) -> Self {
        Self::new(CurveClassTable::gervais(p))
    }

    pub fn with_definition(mut self, symbol: GeneratorSymbol, word: Word) -> Self {
        self.definitions.insert(symbol, word);
        self
    }

    pub fn dim(&self) -> usize {
        self.table.dim
    }
}

/// Matrix of `x -> x + <x,u> u` (or its inverse).
fn transvection(rep: &TransvectionRep, u: &[BigInt], inverse: bool) -> IntMatrix {
    let n = rep.dim();
    // <x,u> = x^T J u, so the row vector is (J u)^T
    let ju = rep.table.form.apply(u);
    let mut m = IntMatrix::identity(n);
    for i in 0..n {
        if u[i].is_zero() {
            continue;
        }
        for j in 0..n {
            let t = &u[i] * &ju[j];
            if inverse {
                m.data[i * n + j] -= t;
            } else {
                m.data[i * n + j] += t;
            }
        }
    }
    m
}

pub fn twist_matrix(g: &GeneratorSymbol, rep: &TransvectionRep) -> Result<IntMatrix, RepError> {
    letter_matrix(g, false, rep, 0)
}

fn letter_matrix(g: &GeneratorSymbol, inverse: bool, rep: &TransvectionRep, depth: usize) -> Result<IntMatrix, RepError> {
    if let Some(u) = rep.table.class(g) {
        return Ok(transvection(rep, u, inverse));
    }
    if let Some(def) = rep.definitions.get(g) {
        if depth > 16 {
            return Err(RepError::Recursive(g.to_string()));
        }
        let def = if inverse { def.invert() } else { def.clone() };
        return word_matrix_at(&def, rep, depth + 1);
    }
    Err(RepError::UnknownSymbol(g.to_string()))
}

/// Product of letter matrices in written order, so the rightmost letter acts
/// first on column vectors.
pub fn word_matrix(w: &Word, rep: &TransvectionRep) -> Result<IntMatrix, RepError> {
    word_matrix_at(w, rep, 0)
}

fn word_matrix_at(w: &Word, rep: &TransvectionRep, depth: usize) -> Result<IntMatrix, RepError> {
    let mut cache: HashMap<(GeneratorSymbol, bool), IntMatrix> = HashMap::new();
    let mut acc = IntMatrix::identity(rep.dim());
    for l in w.letters() {
        let key = (l.symbol.clone(), l.inverse);
        if !cache.contains_key(&key) {
            let m = letter_matrix(&l.symbol, l.inverse, rep, depth)?;
            cache.insert(key.clone(), m);
        }
        acc = acc.mul(&cache[&key]);
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Refutation {
    Refuted,
    Inconclusive,
}

pub fn refute_equal(w1: &Word, w2: &Word, rep: &TransvectionRep) -> Result<Refutation, RepError> {
    if word_matrix(w1, rep)? == word_matrix(w2, rep)? {
        Ok(Refutation::Inconclusive)
    } else {
        Ok(Refutation::Refuted)
    }
}

pub const CLOSURE_CAP: usize = 10_000_000;

/// Order of the group generated by the matrices reduced mod `p`.
pub fn mod_p_closure(gens: &[IntMatrix], p: u32) -> Result<usize, RepError> {
    mod_p_closure_capped(gens, p, CLOSURE_CAP)
}

pub fn mod_p_closure_capped(gens: &[IntMatrix], p: u32, cap: usize) -> Result<usize, RepError> {
    let Some(first) = gens.first() else {
        return Ok(1);
    };
    let n = first.dim();
    let reduced: Vec<Vec<u32>> = gens.iter().map(|m| m.mod_p(p)).collect();
    let mut id = vec![0u32; n * n];
    for i in 0..n {
        id[i * n + i] = 1 % p;
    }
    for g in &reduced {
        if det_mod_p(g, n, p) == 0 {
            return Err(RepError::NotInvertible(p));
        }
    }
    // entries packed into bytes when they fit, keeping the visited set compact
    let pack = |m: &[u32]| -> Vec<u8> {
        if p <= 256 {
            m.iter().map(|&x| x as u8).collect()
        } else {
            m.iter().flat_map(|x| x.to_le_bytes()).collect()
        }
    };
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(pack(&id));
    queue.push_back(id);
    while let Some(m) = queue.pop_front() {
        for g in &reduced {
            let prod = mul_mod(&m, g, n, p);
            let key = pack(&prod);
            if seen.insert(key) {
                if seen.len() > cap {
                    return Err(RepError::CapExceeded(cap));
                }
                queue.push_back(prod);
            }
        }
    }
    Ok(seen.len())
}

fn mul_mod(a: &[u32], b: &[u32], n: usize, p: u32) -> Vec<u32> {
    let mut out = vec![0u32; n * n];
    for i in 0..n {
        for j in 0..n {
            let mut s = 0u64;
            for k in 0..n {
                s += a[i * n + k] as u64 * b[k * n + j] as u64;
            }
            out[i * n + j] = (s % p as u64) as u32;
        }
    }
    out
}

fn det_mod_p(m: &[u32], n: usize, p: u32) -> u64 {
    let p = p as u64;
    let mut a: Vec<u64> = m.iter().map(|&x| x as u64 % p).collect();
    let mut det = 1u64;
    for c in 0..n {
        let Some(r) = (c..n).find(|&r| a[r * n + c] != 0) else {
            return 0;
        };
        if r != c {
            for j in 0..n {
                a.swap(r * n + j, c * n + j);
            }
            det = (p - det) % p;
        }
        let piv = a[c * n + c];
        det = det * piv % p;
        let inv = pow_mod(piv, p - 2, p);
        for r in c + 1..n {
            let f = a[r * n + c] * inv % p;
            if f != 0 {
                for j in c..n {
                    a[r * n + j] = (a[r * n + j] + p * p - f * a[c * n + j] % p) % p;
                }
            }
        }
    }
    det
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Invariant factors of an integer matrix: nonzero diagonal entries of its
/// Smith normal form, each dividing the next.
pub fn smith_invariants(rows: &[Vec<BigInt>], ncols: usize) -> Vec<BigInt> {
    let mut a: Vec<Vec<BigInt>> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let m = a.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < m.min(ncols) {
        // pivot: smallest nonzero absolute value in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, x) in row.iter().enumerate().skip(t) {
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                    if x.abs().is_one() {
                        break;
                    }
                }
            }
            if best.is_some_and(|(bi, bj)| a[bi][bj].abs().is_one()) {
                break;
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        let mut clean = true;
        let piv = a[t][t].clone();
        for i in t + 1..m {
            if a[i][t].is_zero() {
                continue;
            }
            let q = a[i][t].div_floor(&piv);
            let (head, tail) = a.split_at_mut(i);
            let (prow, row) = (&head[t], &mut tail[0]);
            for j in t..ncols {
                let d = &q * &prow[j];
                row[j] -= d;
            }
            if !row[t].is_zero() {
                clean = false;
            }
        }
        for j in t + 1..ncols {
            if a[t][j].is_zero() {
                continue;
            }
            let q = a[t][j].div_floor(&piv);
            for row in a.iter_mut().skip(t) {
                let d = &q * &row[t];
                row[j] -= d;
            }
            if !a[t][j].is_zero() {
                clean = false;
            }
        }
        if clean {
            diag.push(piv.abs());
            t += 1;
        }
    }
    // enforce divisibility
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            let g = diag[i].gcd(&diag[j]);
            let l = diag[i].lcm(&diag[j]);
            diag[i] = g;
            diag[j] = l;
        }
    }
    diag
}

/// Abelianization of a presentation: invariant factors greater than one,
/// followed by a zero for each free summand.
pub fn abelianization(p: &Presentation) -> Vec<BigInt> {
    let col: HashMap<&GeneratorSymbol, usize> = p.generators.iter().enumerate().map(|(i, g)| (g, i)).collect();
    let rows: Vec<Vec<BigInt>> = p
        .relators
        .iter()
        .map(|r| {
            let mut row = vec![BigInt::zero(); col.len()];
            for l in r.word.letters() {
                row[col[&l.symbol]] += l.sign();
            }
            row
        })
        .collect();
    let diag = smith_invariants(&rows, col.len());
    let rank = diag.len();
    let mut out: Vec<BigInt> = diag.into_iter().filter(|d| !d.is_one()).collect();
    out.extend(std::iter::repeat_n(BigInt::zero(), col.len() - rank));
    out
}

pub fn format_invariants(f: &[BigInt]) -> String {
    let parts: Vec<String> = f.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(", "))
}

/// Relators of a presentation whose image is not the identity matrix.
pub fn nontrivial_relators(p: &Presentation, rep: &TransvectionRep) -> Result<Vec<String>, RepError> {
    let mut bad = Vec::new();
    for r in &p.relators {
        if !word_matrix(&r.word, rep)?.is_identity() {
            bad.push(r.id.clone());
        }
    }
    Ok(bad)
}
