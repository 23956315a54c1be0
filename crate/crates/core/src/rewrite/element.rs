//! Words and elements of the free associative superalgebra over `Q[ħ]`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde_json::json;
use smallvec::SmallVec;

use crate::coeff::{fmt_q, Poly, Q};
use crate::presentations::GeneratorSymbol;
use crate::rootspace::Parity;

pub type Letters = SmallVec<[GeneratorSymbol; 8]>;

/// A word in generator symbols.
///
/// Words are ordered by total level, then length, then lexicographically by
/// letter precedence `h < x^- < x^+ < d` (node, then level).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Letters);

impl Word {
    pub fn empty() -> Word {
        Word(SmallVec::new())
    }

    pub fn letter(s: GeneratorSymbol) -> Word {
        let mut v = SmallVec::new();
        v.push(s);
        Word(v)
    }

    pub fn from_slice(s: &[GeneratorSymbol]) -> Word {
        Word(SmallVec::from_slice(s))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn level(&self) -> usize {
        self.0.iter().map(|s| s.level()).sum()
    }

    pub fn parity(&self) -> Parity {
        Parity::from_bit(self.0.iter().filter(|s| s.parity.is_odd()).count() % 2 == 1)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Position of the first occurrence of `pat` as a factor.
    pub fn find(&self, pat: &[GeneratorSymbol]) -> Option<usize> {
        if pat.len() > self.len() {
            return None;
        }
        (0..=self.len() - pat.len()).find(|&i| &self.0[i..i + pat.len()] == pat)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.level()
            .cmp(&other.level())
            .then(self.len().cmp(&other.len()))
            .then_with(|| self.0.as_slice().cmp(other.0.as_slice()))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl std::str::FromStr for Word {
    type Err = crate::error::Error;

    /// Space-separated symbols; `1` is the empty word.
    fn from_str(s: &str) -> crate::error::Result<Word> {
        let s = s.trim();
        if s == "1" {
            return Ok(Word::empty());
        }
        let mut letters = Letters::new();
        for tok in s.split_whitespace() {
            letters.push(tok.parse()?);
        }
        if letters.is_empty() {
            return Err(crate::error::Error::Malformed("empty word".into()));
        }
        Ok(Word(letters))
    }
}

/// Finite `Q[ħ]`-linear combination of words; no zero coefficients are stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FreeElement {
    pub terms: BTreeMap<Word, Poly>,
}

impl FreeElement {
    pub fn zero() -> Self {
        FreeElement::default()
    }

    pub fn one() -> Self {
        FreeElement::term(Word::empty(), Poly::one())
    }

    pub fn term(w: Word, c: Poly) -> Self {
        let mut e = FreeElement::zero();
        e.add_term(w, &c);
        e
    }

    pub fn symbol(s: GeneratorSymbol) -> Self {
        FreeElement::term(Word::letter(s), Poly::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: Word, c: &Poly) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(x) => {
                *x += c;
                if x.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c.clone());
            }
        }
    }

    pub fn add_scaled(&mut self, other: &FreeElement, c: &Poly) {
        for (w, x) in &other.terms {
            self.add_term(w.clone(), &(x * c));
        }
    }

    pub fn add(&self, other: &FreeElement) -> FreeElement {
        let mut out = self.clone();
        out.add_scaled(other, &Poly::one());
        out
    }

    pub fn sub(&self, other: &FreeElement) -> FreeElement {
        let mut out = self.clone();
        out.add_scaled(other, &Poly::int(-1));
        out
    }

    pub fn scale(&self, c: &Poly) -> FreeElement {
        let mut out = FreeElement::zero();
        if c.is_zero() {
            return out;
        }
        for (w, x) in &self.terms {
            out.add_term(w.clone(), &(x * c));
        }
        out
    }

    pub fn scale_q(&self, c: &Q) -> FreeElement {
        self.scale(&Poly::constant(*c))
    }

    pub fn mul(&self, other: &FreeElement) -> FreeElement {
        let mut out = FreeElement::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                out.add_term(u.concat(v), &(a * b));
            }
        }
        out
    }

    /// `u · self · v` for words `u`, `v`.
    pub fn sandwich(&self, u: &[GeneratorSymbol], v: &[GeneratorSymbol]) -> FreeElement {
        let mut out = FreeElement::zero();
        for (w, c) in &self.terms {
            let mut letters: super::element::Letters = SmallVec::from_slice(u);
            letters.extend_from_slice(&w.0);
            letters.extend_from_slice(v);
            out.add_term(Word(letters), c);
        }
        out
    }

    /// Super commutator `ab − (−1)^{p(a)p(b)} ba`, extended bilinearly over words.
    pub fn bracket(&self, other: &FreeElement) -> FreeElement {
        self.graded_product(other, -1)
    }

    /// Super anticommutator `ab + (−1)^{p(a)p(b)} ba`.
    pub fn anti(&self, other: &FreeElement) -> FreeElement {
        self.graded_product(other, 1)
    }

    fn graded_product(&self, other: &FreeElement, sign: i128) -> FreeElement {
        let mut out = FreeElement::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                let ab = a * b;
                let both_odd = u.parity().is_odd() && v.parity().is_odd();
                let s = if both_odd { -sign } else { sign };
                out.add_term(u.concat(v), &ab);
                out.add_term(v.concat(u), &ab.scale(&Q::from_integer(s)));
            }
        }
        out
    }

    pub fn leading(&self) -> Option<(&Word, &Poly)> {
        self.terms.iter().next_back()
    }

    pub fn max_len(&self) -> usize {
        self.terms.keys().map(|w| w.len()).max().unwrap_or(0)
    }

    pub fn max_level(&self) -> usize {
        self.terms.keys().map(|w| w.level()).max().unwrap_or(0)
    }

    /// Parity of the element if all words agree.
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys().map(|w| w.parity());
        let first = it.next()?;
        if it.all(|p| p == first) {
            Some(first)
        } else {
            None
        }
    }

    pub fn symbols(&self) -> impl Iterator<Item = &GeneratorSymbol> {
        self.terms.keys().flat_map(|w| w.0.iter())
    }

    /// Every word has total level + ħ-degree equal to one value.
    pub fn total_level(&self) -> Option<usize> {
        let mut out = None;
        for (w, c) in &self.terms {
            for (k, _) in c.terms() {
                let t = w.level() + k as usize;
                match out {
                    None => out = Some(t),
                    Some(x) if x != t => return None,
                    _ => {}
                }
            }
        }
        out
    }

    pub fn map_coeffs(&self, f: impl Fn(&Poly) -> Poly) -> FreeElement {
        let mut out = FreeElement::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), &f(c));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .rev()
                .map(|(w, c)| {
                    json!({
                        "coeff": c.to_string(),
                        "word": w.0.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                    })
                })
                .collect(),
        )
    }
}

impl fmt::Display for FreeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match c.as_unit() {
                Some(u) if u.is_one() => write!(f, "{}", w)?,
                Some(u) if u == -Q::one() => write!(f, "-{}", w)?,
                Some(u) => write!(f, "{}*{}", fmt_q(&u), w)?,
                None => write!(f, "({})*{}", c, w)?,
            }
        }
        Ok(())
    }
}

impl Zero for FreeElement {
    fn zero() -> Self {
        FreeElement::default()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl std::ops::Add for FreeElement {
    type Output = FreeElement;
    fn add(self, rhs: FreeElement) -> FreeElement {
        FreeElement::add(&self, &rhs)
    }
}
