//! Reflections of roots and systems, and the Weyl groupoid orbit of a system.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde_json::json;

use crate::error::{Error, Result};
use crate::rootspace::{bilinear, Parity, Root, SimpleRootSystem};

pub const DEFAULT_ORBIT_BOUND: usize = 9;

/// Image of a root under the (even or odd) reflection at a simple root.
pub fn reflect_root(sys: &SimpleRootSystem, node: usize, lambda: &Root) -> Result<Root> {
    sys.check_node(node)?;
    if !sys.is_root(lambda) {
        return Err(Error::NotARoot(lambda.to_string()));
    }
    let alpha = sys.simple_root(node);
    match sys.node_parity(node) {
        Parity::Even => {
            let norm = bilinear(&alpha, &alpha);
            let k = 2 * bilinear(lambda, &alpha) / norm;
            Ok(lambda.add(&alpha.scale(-k)))
        }
        Parity::Odd => Ok(odd_shift_by_membership(sys, &alpha, lambda)),
    }
}

/// Odd reflection rule: `−α` if `λ = α`, `λ + α` if that is a root, `λ` otherwise.
pub fn odd_shift_by_membership(sys: &SimpleRootSystem, alpha: &Root, lambda: &Root) -> Root {
    if lambda == alpha {
        return alpha.neg();
    }
    let shifted = lambda.add(alpha);
    if sys.is_root(&shifted) {
        shifted
    } else {
        lambda.clone()
    }
}

/// The same rule decided by the form, valid when `λ` is a simple root.
pub fn odd_shift_by_form(alpha: &Root, lambda: &Root) -> Root {
    if lambda == alpha {
        alpha.neg()
    } else if bilinear(lambda, alpha) != 0 {
        lambda.add(alpha)
    } else {
        lambda.clone()
    }
}

/// The system obtained by reflecting at `node`: the two weights of the node swap
/// places. At the affine node the swap also moves one δ across.
pub fn reflect_system(sys: &SimpleRootSystem, node: usize) -> Result<SimpleRootSystem> {
    sys.check_node(node)?;
    let mut out = sys.clone();
    let (a, b) = sys.positions(node);
    out.order.swap(a, b);
    if node == 0 {
        out.offsets[a] = sys.offsets[b] - 1;
        out.offsets[b] = sys.offsets[a] + 1;
    } else {
        out.offsets.swap(a, b);
    }
    Ok(out)
}

/// Parity word obtained by reflecting at `node`.
pub fn reflect_word(word: &str, node: usize) -> String {
    let mut bytes = word.as_bytes().to_vec();
    let size = bytes.len();
    let (a, b) = if node == 0 { (size - 1, 0) } else { (node - 1, node) };
    bytes.swap(a, b);
    String::from_utf8(bytes).expect("parity words are ascii")
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Edge {
    pub from: String,
    pub to: String,
    pub node: usize,
    pub parity: Parity,
}

/// Orbit of a system under all simple reflections, keyed by parity word.
/// Even reflections keep the word and appear as self-loops.
#[derive(Clone, Debug)]
pub struct GroupoidOrbit {
    pub affine: bool,
    pub vertices: Vec<String>,
    pub edges: Vec<Edge>,
}

fn word_nodes(size: usize, affine: bool) -> std::ops::Range<usize> {
    if affine {
        0..size
    } else {
        1..size
    }
}

pub fn orbit(sys: &SimpleRootSystem, bound: usize) -> Result<GroupoidOrbit> {
    if sys.size() > bound {
        return Err(Error::BoundExceeded(format!(
            "m+n = {} exceeds the orbit bound {}",
            sys.size(),
            bound
        )));
    }
    let start = sys.parity_word();
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    let mut edges = BTreeSet::new();
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some(word) = queue.pop_front() {
        for node in word_nodes(word.len(), sys.affine) {
            let next = reflect_word(&word, node);
            let (a, b) = if node == 0 { (word.len() - 1, 0) } else { (node - 1, node) };
            let parity = Parity::from_bit(word.as_bytes()[a] != word.as_bytes()[b]);
            let (from, to) = if word <= next {
                (word.clone(), next.clone())
            } else {
                (next.clone(), word.clone())
            };
            edges.insert(Edge { from, to, node, parity });
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    Ok(GroupoidOrbit {
        affine: sys.affine,
        vertices: seen.into_iter().collect(),
        edges: edges.into_iter().collect(),
    })
}

impl GroupoidOrbit {
    pub fn to_json(&self) -> serde_json::Value {
        let edges: Vec<serde_json::Value> = self
            .edges
            .iter()
            .map(|e| json!({"from": e.from, "to": e.to, "node": e.node, "parity": e.parity}))
            .collect();
        json!({"vertices": self.vertices, "edges": edges})
    }

    /// Vertices grouped up to cyclic rotation (the unlabelled view for affine orbits).
    pub fn necklace_classes(&self) -> BTreeMap<String, Vec<String>> {
        let mut classes: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for w in &self.vertices {
            let rep = (0..w.len())
                .map(|r| format!("{}{}", &w[r..], &w[..r]))
                .min()
                .unwrap_or_default();
            classes.entry(rep).or_default().push(w.clone());
        }
        classes
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph groupoid {\n");
        for v in &self.vertices {
            out.push_str(&format!("  \"{}\";\n", v));
        }
        for e in &self.edges {
            let style = if e.parity.is_odd() { "" } else { ", style=dashed" };
            out.push_str(&format!(
                "  \"{}\" -- \"{}\" [label=\"{}\"{}];\n",
                e.from, e.to, e.node, style
            ));
        }
        out.push_str("}\n");
        out
    }
}

/// A sequence of reflections with the system reached before each step.
#[derive(Clone, Debug)]
pub struct ReflectionWord {
    pub steps: Vec<(SimpleRootSystem, usize)>,
    pub parities: Vec<Parity>,
}

impl ReflectionWord {
    pub fn nodes(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.1).collect()
    }
}

/// Shortest reflection word from `a` to a system with the parity word of `b`;
/// among shortest words the lexicographically smallest node sequence wins.
pub fn shortest_path(a: &SimpleRootSystem, b: &SimpleRootSystem) -> Result<ReflectionWord> {
    if a.m != b.m || a.n != b.n || a.affine != b.affine {
        return Err(Error::DifferentOrbit(format!(
            "{} and {} differ in (m, n, affine)",
            a.parity_word(),
            b.parity_word()
        )));
    }
    let target = b.parity_word();
    let mut parent: BTreeMap<String, (String, usize)> = BTreeMap::new();
    let start = a.parity_word();
    let mut queue = VecDeque::from([start.clone()]);
    let mut seen = BTreeSet::from([start.clone()]);
    while let Some(word) = queue.pop_front() {
        if word == target {
            break;
        }
        for node in word_nodes(word.len(), a.affine) {
            let next = reflect_word(&word, node);
            if seen.insert(next.clone()) {
                parent.insert(next.clone(), (word.clone(), node));
                queue.push_back(next);
            }
        }
    }
    if !seen.contains(&target) {
        return Err(Error::DifferentOrbit(target));
    }
    let mut nodes = Vec::new();
    let mut cur = target;
    while cur != start {
        let (prev, node) = parent[&cur].clone();
        nodes.push(node);
        cur = prev;
    }
    nodes.reverse();
    let mut steps = Vec::new();
    let mut parities = Vec::new();
    let mut sys = a.clone();
    for node in nodes {
        parities.push(sys.node_parity(node));
        let next = reflect_system(&sys, node)?;
        steps.push((sys, node));
        sys = next;
    }
    Ok(ReflectionWord { steps, parities })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootspace::build_system;

    #[test]
    fn reflect_at_odd_node_swaps_letters() {
        let sys = build_system("00011", false).unwrap();
        let r = reflect_system(&sys, 3).unwrap();
        assert_eq!(r.parity_word(), "00101");
        let back = reflect_system(&r, 3).unwrap();
        assert_eq!(back, sys);
    }

    #[test]
    fn affine_reflection_is_involutive() {
        let sys = build_system("00011", true).unwrap();
        let r = reflect_system(&sys, 0).unwrap();
        assert_eq!(r.parity_word(), "10010");
        assert_eq!(reflect_system(&r, 0).unwrap(), sys);
    }

    #[test]
    fn odd_rule_negates_own_root() {
        let sys = build_system("00011", false).unwrap();
        let a3 = sys.simple_root(3);
        assert_eq!(reflect_root(&sys, 3, &a3).unwrap(), a3.neg());
        let a1 = sys.simple_root(1);
        assert_eq!(reflect_root(&sys, 3, &a1).unwrap(), a1);
    }

    #[test]
    fn non_root_rejected() {
        let sys = build_system("0011", false).unwrap();
        let bad = sys.simple_root(1).scale(2);
        assert!(matches!(reflect_root(&sys, 1, &bad), Err(Error::NotARoot(_))));
    }

    #[test]
    fn orbit_of_distinguished() {
        let sys = build_system("00011", false).unwrap();
        let o = orbit(&sys, DEFAULT_ORBIT_BOUND).unwrap();
        assert_eq!(o.vertices.len(), 10);
        let too_big = build_system("0000011111", false).unwrap();
        assert!(orbit(&too_big, DEFAULT_ORBIT_BOUND).is_err());
    }

    #[test]
    fn shortest_path_prefers_small_nodes() {
        let a = build_system("00011", false).unwrap();
        let b = build_system("01001", false).unwrap();
        let p = shortest_path(&a, &b).unwrap();
        let mut sys = a.clone();
        for node in p.nodes() {
            sys = reflect_system(&sys, node).unwrap();
        }
        assert_eq!(sys.parity_word(), "01001");
        assert_eq!(p.nodes(), vec![3, 2]);
    }
}
