//! Dense linear algebra on a truncated quotient of the free algebra: the span
//! of all `ħ^j·u·r·v` inside words of bounded length and bounded `level + ħ`-weight,
//! closed under one-letter multiplication while the product stays inside.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use superyang::coeff::{Poly, Q};
use superyang::presentations::{GeneratorSymbol, SymbolKind};
use superyang::rewrite::{FreeElement, Word};

pub type Monomial = (Word, u32);
type Row = BTreeMap<usize, BigRational>;
type BlockKey = (Vec<i64>, usize, bool);

fn big(x: &Q) -> BigRational {
    BigRational::new(BigInt::from(*x.numer()), BigInt::from(*x.denom()))
}

pub struct Truncation {
    pub letters: Vec<GeneratorSymbol>,
    pub max_len: usize,
    pub max_weight: usize,
    nodes: Vec<usize>,
}

impl Truncation {
    pub fn new(letters: Vec<GeneratorSymbol>, max_len: usize, max_weight: usize) -> Self {
        let mut nodes: Vec<usize> = letters.iter().filter(|s| s.kind != SymbolKind::D).map(|s| s.node()).collect();
        nodes.sort();
        nodes.dedup();
        Truncation { letters, max_len, max_weight, nodes }
    }

    /// All words up to `max_len` with level at most `max_weight`.
    pub fn words(&self) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        let mut frontier = vec![Word::empty()];
        for _ in 0..self.max_len {
            let mut next = Vec::new();
            for w in &frontier {
                for s in &self.letters {
                    let nw = w.concat(&Word::letter(*s));
                    if nw.level() <= self.max_weight {
                        next.push(nw);
                    }
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    pub fn monomials(&self) -> Vec<Monomial> {
        let mut out = Vec::new();
        for w in self.words() {
            for k in 0..=(self.max_weight - w.level()) as u32 {
                out.push((w.clone(), k));
            }
        }
        out
    }

    fn key(&self, m: &Monomial) -> BlockKey {
        let mut wt = vec![0i64; self.nodes.len()];
        let mut odd = false;
        for s in m.0 .0.iter() {
            if s.kind.is_x() {
                let p = self.nodes.iter().position(|&n| n == s.node()).unwrap();
                wt[p] += s.kind.sign();
            }
            odd ^= s.parity.is_odd();
        }
        (wt, m.0.level() + m.1 as usize, odd)
    }

    pub fn within(&self, m: &Monomial) -> bool {
        m.0.len() <= self.max_len && m.0.level() + m.1 as usize <= self.max_weight
    }
}

pub fn terms(e: &FreeElement) -> Vec<(Monomial, BigRational)> {
    let mut out = Vec::new();
    for (w, c) in &e.terms {
        for (k, x) in c.terms() {
            out.push(((w.clone(), k), big(x)));
        }
    }
    out
}

/// Row-echelon span, one per homogeneous block.
pub struct IdealOracle {
    pub trunc: Truncation,
    index: HashMap<Monomial, usize>,
    monos: Vec<Monomial>,
    blocks: HashMap<BlockKey, HashMap<usize, Row>>,
    pub generators: Vec<FreeElement>,
}

impl IdealOracle {
    pub fn build(trunc: Truncation, relations: &[FreeElement]) -> IdealOracle {
        let monos = trunc.monomials();
        let index: HashMap<Monomial, usize> = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let words = trunc.words();
        let mut oracle = IdealOracle { trunc, index, monos, blocks: HashMap::new(), generators: Vec::new() };
        for r in relations {
            let Some(rw) = r.total_level() else { panic!("inhomogeneous relation") };
            let rlen = r.max_len();
            let rk = r.terms.values().filter_map(|c| c.min_degree()).min().unwrap_or(0) as usize;
            let base = rw.max(rk);
            for u in &words {
                for v in &words {
                    if u.len() + v.len() + rlen > oracle.trunc.max_len {
                        continue;
                    }
                    let lv = u.level() + v.level();
                    if lv + base > oracle.trunc.max_weight {
                        continue;
                    }
                    for j in 0..=(oracle.trunc.max_weight - lv - base) as u32 {
                        let g = r
                            .sandwich(&u.0, &v.0)
                            .scale(&Poly::monomial(j, Q::one()));
                        oracle.insert(&g);
                        oracle.generators.push(g);
                    }
                }
            }
        }
        oracle.close();
        oracle
    }

    /// Closes the span under multiplication by letters and `ħ` on either side,
    /// keeping only products that stay inside the truncation.
    fn close(&mut self) {
        let short = self.trunc.max_len.saturating_sub(1);
        let hbar = Poly::monomial(1, Q::one());
        loop {
            let before = self.rank();
            let mut rows: Vec<Row> = Vec::new();
            for b in self.blocks.values() {
                for r in b.values() {
                    if r.keys().all(|&i| self.monos[i].0.len() <= short) {
                        rows.push(r.clone());
                    }
                }
            }
            let letters = self.trunc.letters.clone();
            for row in &rows {
                let e = self.element(row);
                self.insert(&e.scale(&hbar));
                for s in &letters {
                    self.insert(&e.sandwich(&[*s], &[]));
                    self.insert(&e.sandwich(&[], &[*s]));
                }
            }
            if self.rank() == before {
                return;
            }
        }
    }

    fn element(&self, row: &Row) -> FreeElement {
        let mut e = FreeElement::zero();
        for (i, c) in row {
            let (w, k) = &self.monos[*i];
            let c = Q::new(i128::try_from(c.numer()).unwrap(), i128::try_from(c.denom()).unwrap());
            e.add_scaled(&FreeElement::term(w.clone(), Poly::monomial(*k, c)), &Poly::one());
        }
        e
    }

    fn vector(&self, e: &FreeElement) -> Option<(BlockKey, Row)> {
        let mut row = Row::new();
        let mut key = None;
        for (m, c) in terms(e) {
            if !self.trunc.within(&m) {
                return None;
            }
            let k = self.trunc.key(&m);
            if key.get_or_insert_with(|| k.clone()) != &k {
                panic!("inhomogeneous element");
            }
            let i = self.index[&m];
            let e = row.entry(i).or_insert_with(BigRational::zero);
            *e += c;
            if e.is_zero() {
                row.remove(&i);
            }
        }
        key.map(|k| (k, row))
    }

    fn reduce_row(basis: &HashMap<usize, Row>, mut row: Row) -> Row {
        loop {
            let Some((&p, c)) = row.iter().next_back() else { return row };
            let c = c.clone();
            match basis.get(&p) {
                None => return row,
                Some(b) => {
                    for (i, x) in b {
                        let e = row.entry(*i).or_insert_with(BigRational::zero);
                        *e -= &c * x;
                        if e.is_zero() {
                            row.remove(i);
                        }
                    }
                }
            }
        }
    }

    /// Adds `e` to the span; returns whether the rank grew.
    fn insert(&mut self, e: &FreeElement) -> bool {
        let Some((key, row)) = self.vector(e) else { return false };
        let basis = self.blocks.entry(key).or_default();
        let row = Self::reduce_row(basis, row);
        let Some((&p, c)) = row.iter().next_back() else { return false };
        let inv = BigRational::one() / c.clone();
        let row: Row = row.into_iter().map(|(i, x)| (i, x * &inv)).collect();
        basis.insert(p, row);
        true
    }

    pub fn contains(&self, e: &FreeElement) -> bool {
        if e.is_zero() {
            return true;
        }
        let Some((key, row)) = self.vector(e) else { return false };
        match self.blocks.get(&key) {
            None => row.is_empty(),
            Some(b) => Self::reduce_row(b, row).is_empty(),
        }
    }

    pub fn rank(&self) -> usize {
        self.blocks.values().map(|b| b.len()).sum()
    }

    pub fn dim(&self) -> usize {
        self.index.len()
    }
}
