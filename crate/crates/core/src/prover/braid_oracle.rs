//! Word problem in the braid group by Dehornoy's handle reduction.
//!
//! A `σ_i`-handle is a subword `σ_i^e v σ_i^-e` where `v` only uses
//! generators `σ_j` with `j > i`. Reducing it deletes the outer letters and
//! replaces every `σ_{i+1}^d` in `v` by `σ_{i+1}^-e σ_i^d σ_{i+1}^e`. Always
//! reducing the handle whose right end is leftmost keeps every reduction
//! permitted, and the process terminates with the empty word exactly when
//! the braid is trivial.

use thiserror::Error;

use crate::presentations::{braid_word, commutator, Presentation, Provenance};
use crate::words::{GeneratorSymbol, Letter, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BraidError {
    #[error("letter {0} is not a braid generator s1..s{1}")]
    Foreign(String, usize),
    #[error("handle reduction exceeded {0} steps")]
    Budget(usize),
}

/// The Named generator `s<i>` standing for `σ_i`.
pub fn sigma(i: u32) -> GeneratorSymbol {
    GeneratorSymbol::named(&format!("s{i}"))
}

fn sigma_index(s: &GeneratorSymbol) -> Option<u32> {
    let label = s.label()?;
    let digits = label.strip_prefix("sigma").or_else(|| label.strip_prefix('s'))?;
    digits.parse().ok().filter(|&i| i > 0)
}

fn encode(w: &Word, strands: usize) -> Result<Vec<i32>, BraidError> {
    w.letters()
        .iter()
        .map(|l: &Letter| {
            let i = sigma_index(&l.symbol)
                .filter(|&i| (i as usize) < strands)
                .ok_or_else(|| BraidError::Foreign(l.to_string(), strands.saturating_sub(1)))?;
            Ok(if l.inverse { -(i as i32) } else { i as i32 })
        })
        .collect()
}

const BUDGET: usize = 50_000_000;

/// Reduce a signed generator sequence until no handle remains.
pub fn handle_reduce(mut w: Vec<i32>) -> Result<Vec<i32>, BraidError> {
    let mut work = 0usize;
    loop {
        let Some((p, q)) = first_handle(&w, &mut work) else {
            return Ok(w);
        };
        let i = w[p].abs();
        let e = w[p].signum();
        let mut next = Vec::with_capacity(w.len() + 2 * (q - p));
        next.extend_from_slice(&w[..p]);
        for &x in &w[p + 1..q] {
            if x.abs() == i + 1 {
                let d = x.signum();
                next.extend_from_slice(&[-e * (i + 1), d * i, e * (i + 1)]);
            } else {
                next.push(x);
            }
        }
        next.extend_from_slice(&w[q + 1..]);
        work += next.len();
        if work > BUDGET {
            return Err(BraidError::Budget(BUDGET));
        }
        w = next;
    }
}

/// The handle `(p, q)` whose right end `q` is leftmost.
fn first_handle(w: &[i32], work: &mut usize) -> Option<(usize, usize)> {
    for q in 1..w.len() {
        let i = w[q].abs();
        let mut p = q;
        while p > 0 {
            p -= 1;
            *work += 1;
            let j = w[p].abs();
            if j > i {
                continue;
            }
            if j == i && w[p] == -w[q] {
                return Some((p, q));
            }
            break;
        }
    }
    None
}

/// Whether two words over `s1..s{m-1}` are equal in the braid group `B_m`.
pub fn braid_oracle_equal(w1: &Word, w2: &Word, strands: usize) -> Result<bool, BraidError> {
    let mut x = encode(w1, strands)?;
    x.extend(encode(&w2.invert(), strands)?);
    Ok(handle_reduce(x)?.is_empty())
}

/// Artin's presentation of `B_m` on `s1..s{m-1}`.
pub fn braid_presentation(strands: usize) -> Presentation {
    let gens: Vec<GeneratorSymbol> = (1..strands as u32).map(sigma).collect();
    let mut p = Presentation::new(format!("braid({strands})"), gens.clone());
    for (i, x) in gens.iter().enumerate() {
        for (j, y) in gens.iter().enumerate().skip(i + 1) {
            let (wx, wy) = (Word::gen(x.clone()), Word::gen(y.clone()));
            let (word, prov) =
                if j == i + 1 { (braid_word(&wx, &wy), Provenance::Braid) } else { (commutator(&wx, &wy), Provenance::Commute) };
            p.push(format!("braid({x},{y})"), word, prov).expect("distinct pairs");
        }
    }
    p
}

/// Rewrite a word in the genus two chain `a1, b, a2, b1, c{1,2}` as a word
/// in `s1..s5`. Other letters are left alone.
pub fn chain_to_sigma(w: &Word) -> Word {
    w.map_symbols(|s| {
        let i = match s {
            GeneratorSymbol::A(1) => 1,
            GeneratorSymbol::B => 2,
            GeneratorSymbol::A(2) => 3,
            GeneratorSymbol::Bk(1) => 4,
            GeneratorSymbol::C(1, 2) => 5,
            _ => return None,
        };
        Some(Word::gen(sigma(i)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::w;

    #[test]
    fn axioms() {
        assert!(braid_oracle_equal(&w("s1 s2 s1"), &w("s2 s1 s2"), 3).unwrap());
        assert!(braid_oracle_equal(&w("s1 s3"), &w("s3 s1"), 4).unwrap());
        assert!(!braid_oracle_equal(&w("s1 s2"), &w("s2 s1"), 3).unwrap());
        assert!(!braid_oracle_equal(&w("s1 s1"), &Word::empty(), 3).unwrap());
        assert!(braid_oracle_equal(&w("sigma1 s1'"), &Word::empty(), 2).unwrap());
    }

    #[test]
    fn full_twist_identity() {
        let c = w("s1 s2 s3 s4 s5");
        let lhs = c.pow(6);
        let rhs = Word::product([&c.pow(2), &w("s4 s3 s2 s1 s5 s4 s3 s2"), &w("s3 s4 s5").pow(4)]);
        assert!(braid_oracle_equal(&lhs, &rhs, 6).unwrap());
        assert!(!braid_oracle_equal(&lhs, &c.pow(5), 6).unwrap());
    }

    #[test]
    fn foreign_letters_rejected() {
        assert!(braid_oracle_equal(&w("s3"), &w("s3"), 3).is_err());
        assert!(braid_oracle_equal(&w("a1"), &w("a1"), 3).is_err());
    }

    #[test]
    fn garside_conjugation() {
        // Δ σ_i Δ^-1 = σ_{n-i}
        let delta = w("s1 s2 s3 s1 s2 s1");
        let lhs = Word::product([&delta, &w("s1"), &delta.invert()]);
        assert!(braid_oracle_equal(&lhs, &w("s3"), 4).unwrap());
    }
}
