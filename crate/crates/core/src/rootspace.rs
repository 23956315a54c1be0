//! Weights, roots, simple root systems and Cartan matrices of sl(m|n) and its affinization.

use std::fmt;

use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(odd: bool) -> Parity {
        if odd {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    /// `(-1)^p`
    pub fn sign(self) -> i64 {
        if self.is_odd() {
            -1
        } else {
            1
        }
    }

    pub fn plus(self, other: Parity) -> Parity {
        Parity::from_bit(self.is_odd() != other.is_odd())
    }

    pub fn bit(self) -> char {
        if self.is_odd() {
            '1'
        } else {
            '0'
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WeightKind {
    Epsilon,
    Delta,
}

/// A basis weight `ε_i` or `δ_i` (1-based index).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight {
    pub kind: WeightKind,
    pub index: usize,
}

impl Weight {
    pub fn eps(index: usize) -> Weight {
        Weight { kind: WeightKind::Epsilon, index }
    }

    pub fn delta(index: usize) -> Weight {
        Weight { kind: WeightKind::Delta, index }
    }

    pub fn parity(&self) -> Parity {
        Parity::from_bit(self.kind == WeightKind::Delta)
    }

    /// `(w, w)`: +1 for ε, −1 for δ.
    pub fn norm(&self) -> i64 {
        self.parity().sign()
    }

    /// Position in the canonical basis `ε_1..ε_m, δ_1..δ_n`.
    pub fn canonical_index(&self, m: usize) -> usize {
        match self.kind {
            WeightKind::Epsilon => self.index - 1,
            WeightKind::Delta => m + self.index - 1,
        }
    }

    pub fn from_canonical(idx: usize, m: usize) -> Weight {
        if idx < m {
            Weight::eps(idx + 1)
        } else {
            Weight::delta(idx - m + 1)
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            WeightKind::Epsilon => write!(f, "e{}", self.index),
            WeightKind::Delta => write!(f, "d{}", self.index),
        }
    }
}

/// An element of the root lattice: integer coefficients on the canonical
/// basis plus a multiple of the null root δ (affine case only).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Root {
    pub m: usize,
    pub coeffs: Vec<i64>,
    pub delta: i64,
}

impl Root {
    pub fn zero(m: usize, n: usize) -> Root {
        Root { m, coeffs: vec![0; m + n], delta: 0 }
    }

    /// `w_a − w_b + k·δ`
    pub fn difference(m: usize, n: usize, a: Weight, b: Weight, k: i64) -> Root {
        let mut r = Root::zero(m, n);
        r.coeffs[a.canonical_index(m)] += 1;
        r.coeffs[b.canonical_index(m)] -= 1;
        r.delta = k;
        r
    }

    pub fn add(&self, other: &Root) -> Root {
        Root {
            m: self.m,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
            delta: self.delta + other.delta,
        }
    }

    pub fn scale(&self, c: i64) -> Root {
        Root {
            m: self.m,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
            delta: self.delta * c,
        }
    }

    pub fn neg(&self) -> Root {
        self.scale(-1)
    }

    pub fn parity(&self) -> Parity {
        let odd: i64 = self.coeffs[self.m..].iter().map(|c| c.abs()).sum();
        Parity::from_bit(odd % 2 == 1)
    }

    /// If the weight part is `w_a − w_b`, returns `(a, b)` as canonical indices.
    pub fn as_difference(&self) -> Option<(usize, usize)> {
        let mut plus = None;
        let mut minus = None;
        for (i, &c) in self.coeffs.iter().enumerate() {
            match c {
                0 => {}
                1 if plus.is_none() => plus = Some(i),
                -1 if minus.is_none() => minus = Some(i),
                _ => return None,
            }
        }
        match (plus, minus) {
            (Some(a), Some(b)) => Some((a, b)),
            _ => None,
        }
    }

    fn weight_is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let w = Weight::from_canonical(i, self.m);
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            if c.abs() == 1 {
                write!(f, "{}{}", sign, w)?;
            } else {
                write!(f, "{}{}{}", sign, c.abs(), w)?;
            }
            first = false;
        }
        if self.delta != 0 || first {
            let sign = if self.delta < 0 { "-" } else if first { "" } else { "+" };
            match self.delta.abs() {
                0 => write!(f, "0")?,
                1 => write!(f, "{}delta", sign)?,
                k => write!(f, "{}{}delta", sign, k)?,
            }
        }
        Ok(())
    }
}

/// The super bilinear form: `(ε_i, ε_j) = δ_ij`, `(δ_i, δ_j) = −δ_ij`, `(ε_i, δ_j) = 0`.
/// The null root δ is isotropic and orthogonal to everything.
pub fn bilinear(a: &Root, b: &Root) -> i64 {
    a.coeffs
        .iter()
        .zip(&b.coeffs)
        .enumerate()
        .map(|(i, (x, y))| x * y * Weight::from_canonical(i, a.m).norm())
        .sum()
}

/// An ordering of the basis weights together with per-position δ-offsets.
///
/// Position `p` carries the weight `order[p] + offsets[p]·δ`. Node `k ≥ 1` is
/// `α_k = w_k − w_{k+1}`; in the affine case node 0 is `α_0 = δ − (w_1 − w_N)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SimpleRootSystem {
    pub m: usize,
    pub n: usize,
    pub affine: bool,
    pub order: Vec<Weight>,
    pub offsets: Vec<i64>,
}

pub const MAX_RANK: usize = 16;

impl SimpleRootSystem {
    /// Builds the system whose weight ordering has the given parity word,
    /// numbering ε's and δ's in order of appearance.
    pub fn from_word(word: &str, affine: bool) -> Result<SimpleRootSystem> {
        if word.is_empty() {
            return Err(Error::InvalidParityWord(word.into(), "empty"));
        }
        if word.len() > MAX_RANK {
            return Err(Error::InvalidParityWord(word.into(), "too long"));
        }
        let mut order = Vec::with_capacity(word.len());
        let (mut m, mut n) = (0, 0);
        for ch in word.chars() {
            match ch {
                '0' => {
                    m += 1;
                    order.push(Weight::eps(m));
                }
                '1' => {
                    n += 1;
                    order.push(Weight::delta(n));
                }
                _ => return Err(Error::InvalidParityWord(word.into(), "letters must be 0 or 1")),
            }
        }
        if order.len() < 2 {
            return Err(Error::InvalidParityWord(word.into(), "need at least two letters"));
        }
        Ok(SimpleRootSystem { m, n, affine, offsets: vec![0; order.len()], order })
    }

    /// The distinguished system `0^m 1^n`.
    pub fn distinguished(m: usize, n: usize, affine: bool) -> Result<SimpleRootSystem> {
        let word = format!("{}{}", "0".repeat(m), "1".repeat(n));
        SimpleRootSystem::from_word(&word, affine)
    }

    pub fn size(&self) -> usize {
        self.m + self.n
    }

    pub fn parity_word(&self) -> String {
        self.order.iter().map(|w| w.parity().bit()).collect()
    }

    pub fn first_node(&self) -> usize {
        if self.affine {
            0
        } else {
            1
        }
    }

    pub fn nodes(&self) -> std::ops::Range<usize> {
        self.first_node()..self.size()
    }

    pub fn node_count(&self) -> usize {
        self.size() - self.first_node()
    }

    pub fn check_node(&self, node: usize) -> Result<()> {
        if self.nodes().contains(&node) {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange { node, count: self.node_count() })
        }
    }

    /// The (0-based) positions `(a, b)` with `α = w_a − w_b` up to δ.
    pub fn positions(&self, node: usize) -> (usize, usize) {
        if node == 0 {
            (self.size() - 1, 0)
        } else {
            (node - 1, node)
        }
    }

    /// δ-multiple of the simple root at `node`; this is also its loop degree.
    pub fn delta_mult(&self, node: usize) -> i64 {
        let (a, b) = self.positions(node);
        self.offsets[a] - self.offsets[b] + i64::from(node == 0)
    }

    pub fn simple_root(&self, node: usize) -> Root {
        let (a, b) = self.positions(node);
        Root::difference(self.m, self.n, self.order[a], self.order[b], self.delta_mult(node))
    }

    pub fn simple_roots(&self) -> Vec<Root> {
        self.nodes().map(|k| self.simple_root(k)).collect()
    }

    pub fn node_parity(&self, node: usize) -> Parity {
        let (a, b) = self.positions(node);
        self.order[a].parity().plus(self.order[b].parity())
    }

    /// Neighbouring nodes in the Dynkin chain (cyclic in the affine case).
    pub fn neighbours(&self, node: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .nodes()
            .filter(|&j| j != node && self.cartan_entry(node, j) != 0)
            .collect();
        out.dedup();
        out
    }

    /// Left and right chain neighbours `(i−1, i+1)`, cyclic in the affine case.
    pub fn chain_neighbours(&self, node: usize) -> (Option<usize>, Option<usize>) {
        let size = self.size();
        if self.affine {
            let prev = (node + size - 1) % size;
            let next = (node + 1) % size;
            if prev == next || prev == node {
                return (None, None);
            }
            (Some(prev), Some(next))
        } else {
            let prev = if node > 1 { Some(node - 1) } else { None };
            let next = if node + 1 < size { Some(node + 1) } else { None };
            (prev, next)
        }
    }

    pub fn cartan_entry(&self, i: usize, j: usize) -> i64 {
        bilinear(&self.simple_root(i), &self.simple_root(j))
    }

    pub fn is_root(&self, r: &Root) -> bool {
        if r.coeffs.len() != self.size() {
            return false;
        }
        if r.as_difference().is_some() {
            return self.affine || r.delta == 0;
        }
        self.affine && r.weight_is_zero() && r.delta != 0
    }

    /// Labels of the positions, e.g. `e1 e2 d1+delta`.
    pub fn labels(&self) -> Vec<String> {
        self.order
            .iter()
            .zip(&self.offsets)
            .map(|(w, &k)| match k {
                0 => w.to_string(),
                1 => format!("{}+delta", w),
                -1 => format!("{}-delta", w),
                k if k > 0 => format!("{}+{}delta", w, k),
                k => format!("{}{}delta", w, k),
            })
            .collect()
    }
}

/// Like [`SimpleRootSystem::from_word`] but insists on a genuine superalgebra:
/// at least one letter of each parity.
pub fn build_system(parity_word: &str, affine: bool) -> Result<SimpleRootSystem> {
    let sys = SimpleRootSystem::from_word(parity_word, affine)?;
    if sys.m == 0 || sys.n == 0 {
        return Err(Error::InvalidParityWord(parity_word.into(), "need both a 0 and a 1"));
    }
    Ok(sys)
}

pub fn simple_roots(sys: &SimpleRootSystem) -> Vec<Root> {
    sys.simple_roots()
}

/// Cartan matrix indexed by node labels; node numbering starts at 0 in the
/// affine case and at 1 otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanMatrix {
    pub first_node: usize,
    pub entries: Vec<Vec<i64>>,
}

impl CartanMatrix {
    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[i - self.first_node][j - self.first_node]
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }
}

impl fmt::Display for CartanMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(|x| format!("{:>3}", x)).collect();
            writeln!(f, "[{} ]", cells.join(""))?;
        }
        Ok(())
    }
}

/// Gram matrix of the simple roots.
pub fn cartan_matrix(sys: &SimpleRootSystem) -> CartanMatrix {
    let roots = sys.simple_roots();
    let entries = roots
        .iter()
        .map(|a| roots.iter().map(|b| bilinear(a, b)).collect())
        .collect();
    CartanMatrix { first_node: sys.first_node(), entries }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiagramFormat {
    Ascii,
    Dot,
}

/// Dynkin diagram: `o` marks an even node, `x` an odd (grey) node.
pub fn dynkin(sys: &SimpleRootSystem, format: DiagramFormat) -> String {
    let nodes: Vec<usize> = sys.nodes().collect();
    match format {
        DiagramFormat::Ascii => {
            let marks: Vec<String> = nodes
                .iter()
                .map(|&k| if sys.node_parity(k).is_odd() { "x" } else { "o" }.to_string())
                .collect();
            let mut out = marks.join("---");
            out.push('\n');
            let labels: Vec<String> = nodes.iter().map(|k| format!("{:<4}", k)).collect();
            out.push_str(labels.join("").trim_end());
            out.push('\n');
            if sys.affine && nodes.len() > 1 {
                let width = 4 * (nodes.len() - 1) + 1;
                out.push('`');
                out.push_str(&"-".repeat(width.saturating_sub(2)));
                out.push_str("'\n");
            }
            out
        }
        DiagramFormat::Dot => {
            let mut out = String::from("graph dynkin {\n");
            for &k in &nodes {
                let style = if sys.node_parity(k).is_odd() {
                    ", style=filled, fillcolor=grey"
                } else {
                    ""
                };
                out.push_str(&format!(
                    "  n{} [label=\"{}: {}\"{}];\n",
                    k,
                    k,
                    sys.simple_root(k),
                    style
                ));
            }
            for (ii, &i) in nodes.iter().enumerate() {
                for &j in &nodes[ii + 1..] {
                    let a = sys.cartan_entry(i, j);
                    if a != 0 {
                        out.push_str(&format!("  n{} -- n{} [label=\"{}\"];\n", i, j, a));
                    }
                }
            }
            out.push_str("}\n");
            out
        }
    }
}

/// JSON description of a system: parity word, simple roots and Cartan matrix.
pub fn roots_json(sys: &SimpleRootSystem) -> serde_json::Value {
    let simple: Vec<serde_json::Value> = sys
        .nodes()
        .map(|k| {
            let (a, b) = sys.positions(k);
            json!({
                "diff": format!("{}-{}", sys.order[a], sys.order[b]),
                "delta_mult": sys.delta_mult(k),
                "parity": sys.node_parity(k),
            })
        })
        .collect();
    json!({
        "m": sys.m,
        "n": sys.n,
        "affine": sys.affine,
        "parity_word": sys.parity_word(),
        "simple_roots": simple,
        "cartan": cartan_matrix(sys).entries,
    })
}
