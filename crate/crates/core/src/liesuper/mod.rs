//! The defining matrix realization of sl(m|n) and its loop extension, and the
//! classical odd/even reflection isomorphisms checked against it.

mod matrix;

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde_json::json;

pub use matrix::{sbracket, SuperMatrix};

use crate::coeff::Q;
use crate::error::{Error, Result};
use crate::groupoid::reflect_system;
use crate::presentations::{GeneratorSymbol, Letters, SymbolKind};
use crate::rewrite::Expr;
use crate::rootspace::{cartan_matrix, SimpleRootSystem};

pub const DEFAULT_LOOP_WINDOW: i64 = 3;

/// Chevalley generators `x_i^±`, `h_i` of a system as loop matrices, plus the
/// diagonal correction realizing the derivation `d`.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    pub sys: SimpleRootSystem,
    pub window: i64,
    pub x_plus: BTreeMap<usize, SuperMatrix>,
    pub x_minus: BTreeMap<usize, SuperMatrix>,
    pub h: BTreeMap<usize, SuperMatrix>,
    pub d_diag: Vec<Q>,
}

pub fn generators(sys: &SimpleRootSystem, window: i64) -> GeneratorSet {
    let (m, size) = (sys.m, sys.size());
    let mut x_plus = BTreeMap::new();
    let mut x_minus = BTreeMap::new();
    let mut h = BTreeMap::new();
    for k in sys.nodes() {
        let (pa, pb) = sys.positions(k);
        let a = sys.order[pa].canonical_index(m);
        let b = sys.order[pb].canonical_index(m);
        let deg = sys.delta_mult(k);
        let sign = Q::from_integer(sys.order[pa].parity().sign() as i128);
        let xp = SuperMatrix::unit(m, size, a, b, deg, Q::one());
        let xm = SuperMatrix::unit(m, size, b, a, -deg, sign);
        h.insert(k, sbracket(&xp, &xm));
        x_plus.insert(k, xp);
        x_minus.insert(k, xm);
    }
    // d acts on x_k by δ_{k0}: choose H_a so that deg_k + H_a − H_b = δ_{k0}
    let mut d_diag = vec![Q::zero(); size];
    if sys.affine {
        let mut cur = Q::zero();
        d_diag[sys.order[0].canonical_index(m)] = cur;
        for k in 1..size {
            let (pa, pb) = sys.positions(k);
            cur += Q::from_integer(sys.delta_mult(k) as i128);
            debug_assert_eq!(pa + 1, pb);
            d_diag[sys.order[pb].canonical_index(m)] = cur;
        }
    }
    GeneratorSet { sys: sys.clone(), window, x_plus, x_minus, h, d_diag }
}

impl GeneratorSet {
    pub fn env(&self) -> BTreeMap<GeneratorSymbol, SuperMatrix> {
        let l = Letters { sys: &self.sys };
        let mut env = BTreeMap::new();
        for k in self.sys.nodes() {
            env.insert(l.x(1, k, 0), self.x_plus[&k].clone());
            env.insert(l.x(-1, k, 0), self.x_minus[&k].clone());
            env.insert(GeneratorSymbol::h(k, 0), self.h[&k].clone());
        }
        env
    }

    /// Realizes the system with the grading of one node's generators flipped:
    /// the brackets see `x_k^±` with the wrong parity (fault injection).
    pub fn with_corrupted_parity(&self, node: usize) -> GeneratorSet {
        let mut out = self.clone();
        let sys = &self.sys;
        let (pa, pb) = sys.positions(node);
        let a = sys.order[pa].canonical_index(sys.m);
        let b = sys.order[pb].canonical_index(sys.m);
        let deg = sys.delta_mult(node);
        let flipped = -Q::from_integer(sys.order[pa].parity().sign() as i128);
        let xm = SuperMatrix::unit(sys.m, sys.size(), b, a, -deg, flipped);
        out.h.insert(node, sbracket(&out.x_plus[&node], &xm));
        out.x_minus.insert(node, xm);
        out
    }
}

/// Evaluates a level-0 bracket expression in an environment of matrices.
pub fn evaluate(e: &Expr, env: &BTreeMap<GeneratorSymbol, SuperMatrix>, gens: &GeneratorSet) -> Result<SuperMatrix> {
    let (m, size) = (gens.sys.m, gens.sys.size());
    let out = match e {
        Expr::Sym(s) => env
            .get(s)
            .cloned()
            .ok_or_else(|| Error::Malformed(format!("no matrix for {}", s)))?,
        Expr::Scalar(c) => {
            let k = c.as_unit().ok_or_else(|| Error::Unsupported("hbar in a classical expression".into()))?;
            identity(m, size).scale(&k)
        }
        Expr::Sum(v) => {
            let mut acc = SuperMatrix::zero(m, size);
            for x in v {
                acc = acc.add(&evaluate(x, env, gens)?);
            }
            acc
        }
        Expr::Prod(v) => {
            let mut acc = identity(m, size);
            for x in v {
                acc = acc.mul(&evaluate(x, env, gens)?);
            }
            acc
        }
        Expr::Scale(c, x) => {
            let k = match c.as_unit() {
                Some(k) => k,
                None if c.is_zero() => Q::zero(),
                None => return Err(Error::Unsupported("hbar in a classical expression".into())),
            };
            evaluate(x, env, gens)?.scale(&k)
        }
        Expr::Bracket(a, b) => {
            if let Expr::Sym(s) = a.as_ref() {
                if s.kind == SymbolKind::D {
                    return Ok(evaluate(b, env, gens)?.apply_derivation(&gens.d_diag));
                }
            }
            sbracket(&evaluate(a, env, gens)?, &evaluate(b, env, gens)?)
        }
        Expr::Anti(_, _) => return Err(Error::Unsupported("anticommutator in a classical expression".into())),
    };
    if out.max_degree() > gens.window {
        return Err(Error::BoundExceeded(format!("loop degree {} outside window {}", out.max_degree(), gens.window)));
    }
    Ok(out)
}

fn identity(m: usize, size: usize) -> SuperMatrix {
    let mut out = SuperMatrix::zero(m, size);
    for a in 0..size {
        out.add_entry(0, a, a, Q::one());
    }
    out
}

/// A relation of the classical presentation, declared `≡ 0`.
#[derive(Clone, Debug)]
pub struct ClassicalRelation {
    pub id: String,
    pub expr: Expr,
}

/// Chevalley–Serre relations of a system (with `d` in the affine case).
pub fn classical_relations(sys: &SimpleRootSystem) -> Vec<ClassicalRelation> {
    let a = cartan_matrix(sys);
    let l = Letters { sys };
    let nodes: Vec<usize> = sys.nodes().collect();
    let mut out = Vec::new();
    let mut push = |id: String, expr: Expr| out.push(ClassicalRelation { id, expr });
    for (p, &i) in nodes.iter().enumerate() {
        for &j in &nodes[p + 1..] {
            push(format!("h-commute({},{})", i, j), Expr::bracket(l.eh(i, 0), l.eh(j, 0)));
        }
    }
    for &i in &nodes {
        for &j in &nodes {
            for s in [1i64, -1] {
                let k = Q::from_integer((s * a.entry(i, j)) as i128);
                push(
                    format!("h-action({},{};{})", i, j, sign_tag(s)),
                    Expr::sub(Expr::bracket(l.eh(i, 0), l.ex(s, j, 0)), Expr::scale_q(k, l.ex(s, j, 0))),
                );
            }
            let rhs = if i == j { l.eh(i, 0) } else { Expr::zero() };
            push(format!("cross({},{})", i, j), Expr::sub(Expr::bracket(l.ex(1, i, 0), l.ex(-1, j, 0)), rhs));
        }
    }
    for &i in &nodes {
        for &j in nodes.iter().filter(|&&j| j != i) {
            let k = 1 + a.entry(i, j).unsigned_abs() as usize;
            for s in [1i64, -1] {
                push(
                    format!("serre({},{};{})", i, j, sign_tag(s)),
                    Expr::ad_power(&l.ex(s, i, 0), k, l.ex(s, j, 0)),
                );
            }
        }
    }
    for &i in nodes.iter().filter(|&&i| sys.node_parity(i).is_odd()) {
        for s in [1i64, -1] {
            push(format!("odd-square({};{})", i, sign_tag(s)), Expr::bracket(l.ex(s, i, 0), l.ex(s, i, 0)));
        }
        // On a 3-cycle the outer nodes touch and the quartic is not a relation.
        if let (Some(p), Some(q)) = sys.chain_neighbours(i) {
            if a.entry(p, q) != 0 {
                continue;
            }
            for s in [1i64, -1] {
                let e = Expr::bracket(
                    Expr::bracket(l.ex(s, p, 0), l.ex(s, i, 0)),
                    Expr::bracket(l.ex(s, i, 0), l.ex(s, q, 0)),
                );
                push(format!("odd-quartic({};{})", i, sign_tag(s)), e);
            }
        }
    }
    out
}

/// Relations involving the derivation `d` (affine systems only).
pub fn derivation_relations(sys: &SimpleRootSystem) -> Vec<ClassicalRelation> {
    let l = Letters { sys };
    let d = Expr::sym(GeneratorSymbol::d());
    let mut out = Vec::new();
    if !sys.affine {
        return out;
    }
    for i in sys.nodes() {
        out.push(ClassicalRelation { id: format!("derivation(h,{})", i), expr: Expr::bracket(d.clone(), l.eh(i, 0)) });
        for s in [1i64, -1] {
            let k = if i == 0 { s } else { 0 };
            out.push(ClassicalRelation {
                id: format!("derivation(x,{};{})", i, sign_tag(s)),
                expr: Expr::sub(
                    Expr::bracket(d.clone(), l.ex(s, i, 0)),
                    Expr::scale_q(Q::from_integer(k as i128), l.ex(s, i, 0)),
                ),
            });
        }
    }
    out
}

fn sign_tag(s: i64) -> &'static str {
    if s > 0 {
        "+"
    } else {
        "-"
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelationStatus {
    Holds,
    Fails,
    Inconclusive,
}

impl RelationStatus {
    pub fn tag(self) -> &'static str {
        match self {
            RelationStatus::Holds => "holds",
            RelationStatus::Fails => "fails",
            RelationStatus::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug)]
pub struct RelationResult {
    pub id: String,
    pub instance: String,
    pub status: RelationStatus,
    pub residual: Option<SuperMatrix>,
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub relations: Vec<RelationResult>,
    pub resolved_signs: Vec<i64>,
    pub inverse_is_identity: Option<bool>,
}

impl Report {
    pub fn all_hold(&self) -> bool {
        self.relations.iter().all(|r| r.status == RelationStatus::Holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &RelationResult> {
        self.relations.iter().filter(|r| r.status != RelationStatus::Holds)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rels: Vec<serde_json::Value> = self
            .relations
            .iter()
            .map(|r| {
                json!({
                    "id": r.id,
                    "instance": r.instance,
                    "status": r.status.tag(),
                    "residual_norm_is_zero": r.residual.as_ref().is_some_and(|m| m.is_zero()),
                })
            })
            .collect();
        let mut out = json!({"relations": rels, "resolved_signs": self.resolved_signs});
        if let Some(b) = self.inverse_is_identity {
            out["inverse_is_identity"] = json!(b);
        }
        out
    }
}

fn check(rels: &[ClassicalRelation], env: &BTreeMap<GeneratorSymbol, SuperMatrix>, gens: &GeneratorSet) -> Vec<RelationResult> {
    rels.iter()
        .map(|r| match evaluate(&r.expr, env, gens) {
            Ok(res) => RelationResult {
                id: r.id.clone(),
                instance: r.expr.to_string(),
                status: if res.is_zero() { RelationStatus::Holds } else { RelationStatus::Fails },
                residual: Some(res),
            },
            Err(_) => RelationResult {
                id: r.id.clone(),
                instance: r.expr.to_string(),
                status: RelationStatus::Inconclusive,
                residual: None,
            },
        })
        .collect()
}

/// Evaluates every Chevalley–Serre relation of `gens.sys` on the generators.
pub fn check_relations_classical(gens: &GeneratorSet) -> Report {
    let mut rels = classical_relations(&gens.sys);
    rels.extend(derivation_relations(&gens.sys));
    Report { relations: check(&rels, &gens.env(), gens), resolved_signs: vec![], inverse_is_identity: None }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AssignmentStatus {
    Unresolved,
    Resolved,
    Failed,
}

/// `sign · expr`, where `sign` is either fixed `+1` or a free parameter.
#[derive(Clone, Debug)]
pub struct Image {
    pub expr: Expr,
    pub param: Option<usize>,
}

/// Images of the target system's level-0 generators as expressions over the
/// source system's generators.
#[derive(Clone, Debug)]
pub struct GeneratorAssignment {
    pub source: SimpleRootSystem,
    pub target: SimpleRootSystem,
    pub node: usize,
    pub images: BTreeMap<GeneratorSymbol, Image>,
    pub params: Vec<String>,
    pub signs: Vec<i64>,
    pub status: AssignmentStatus,
}

impl GeneratorAssignment {
    pub fn image(&self, s: &GeneratorSymbol) -> Option<Expr> {
        let img = self.images.get(s)?;
        Some(match img.param {
            Some(p) if self.signs[p] < 0 => Expr::neg(img.expr.clone()),
            _ => img.expr.clone(),
        })
    }

    pub fn with_flipped(&self, param: usize) -> GeneratorAssignment {
        let mut out = self.clone();
        out.signs[param] = -out.signs[param];
        out
    }

    fn images_env(&self, source: &GeneratorSet) -> Result<BTreeMap<GeneratorSymbol, SuperMatrix>> {
        let env = source.env();
        let mut out = BTreeMap::new();
        for s in self.images.keys() {
            out.insert(*s, evaluate(&self.image(s).expect("key"), &env, source)?);
        }
        Ok(out)
    }

    pub fn param_for(&self, s: &GeneratorSymbol) -> Option<usize> {
        self.images.get(s).and_then(|i| i.param)
    }
}

/// The reflection isomorphism at `node`: images of the reflected system's
/// generators in terms of the original system's generators.
pub fn classical_reflection(sys: &SimpleRootSystem, node: usize) -> Result<GeneratorAssignment> {
    sys.check_node(node)?;
    let target = reflect_system(sys, node)?;
    let a = cartan_matrix(sys);
    let src = Letters { sys };
    let tgt = Letters { sys: &target };
    let odd = sys.node_parity(node).is_odd();
    let aii = a.entry(node, node);
    let mut images = BTreeMap::new();
    let mut params = Vec::new();
    let mut param = |name: String| {
        params.push(name);
        Some(params.len() - 1)
    };
    for j in sys.nodes() {
        let aij = a.entry(node, j);
        for s in [1i64, -1] {
            let key = tgt.x(s, j, 0);
            let img = if j == node {
                let base = src.ex(-s, node, 0);
                let expr = if odd { base } else { Expr::neg(base) };
                Image { expr, param: param(format!("x{}[{}]", sign_tag(s), j)) }
            } else if aij != 0 {
                let br = if odd {
                    Expr::bracket(src.ex(s, j, 0), src.ex(s, node, 0))
                } else {
                    Expr::bracket(src.ex(s, node, 0), src.ex(s, j, 0))
                };
                let expr = if s > 0 { br } else { Expr::neg(br) };
                Image { expr, param: param(format!("x{}[{}]", sign_tag(s), j)) }
            } else {
                Image { expr: src.ex(s, j, 0), param: None }
            };
            images.insert(key, img);
        }
        let h = if j == node {
            Expr::neg(src.eh(node, 0))
        } else if aij != 0 {
            Expr::sum(vec![src.eh(j, 0), Expr::scale_q(coroot_shift(odd, aij, aii), src.eh(node, 0))])
        } else {
            src.eh(j, 0)
        };
        images.insert(GeneratorSymbol::h(j, 0), Image { expr: h, param: None });
    }
    let signs = vec![1; params.len()];
    Ok(GeneratorAssignment { source: sys.clone(), target, node, images, params, signs, status: AssignmentStatus::Unresolved })
}

/// Coefficient `c` in `h_{s(α_j)} = h_j + c·h_i`.
pub fn coroot_shift(odd: bool, aij: i64, aii: i64) -> Q {
    if odd {
        Q::one()
    } else {
        Q::new(-2 * aij as i128, aii as i128)
    }
}

fn matches_generators(images: &BTreeMap<GeneratorSymbol, SuperMatrix>, target: &GeneratorSet) -> bool {
    images.iter().all(|(s, m)| target.env().get(s) == Some(m))
}

/// Searches the sign space for an assignment under which every target relation
/// holds on the matrices. Sign vectors that reproduce the target's own Chevalley
/// generators are preferred; the search is exhaustive otherwise.
pub fn resolve_and_verify(assignment: &GeneratorAssignment, source: &GeneratorSet) -> (GeneratorAssignment, Report) {
    let target_gens = generators(&assignment.target, source.window);
    let k = assignment.params.len();
    let rels = classical_relations(&assignment.target);
    let mut chosen = None;
    for bits in 0..(1u64 << k) {
        let mut cand = assignment.clone();
        cand.signs = (0..k).map(|b| if bits >> b & 1 == 1 { -1 } else { 1 }).collect();
        if let Ok(env) = cand.images_env(source) {
            if matches_generators(&env, &target_gens) {
                chosen = Some(cand);
                break;
            }
        }
    }
    if chosen.is_none() {
        for bits in 0..(1u64 << k) {
            let mut cand = assignment.clone();
            cand.signs = (0..k).map(|b| if bits >> b & 1 == 1 { -1 } else { 1 }).collect();
            if let Ok(env) = cand.images_env(source) {
                if check(&rels, &env, source).iter().all(|r| r.status == RelationStatus::Holds) {
                    chosen = Some(cand);
                    break;
                }
            }
        }
    }
    let found = chosen.is_some();
    let mut out = chosen.unwrap_or_else(|| assignment.clone());
    let mut report = verify_assignment(&out, source);
    out.status = if found && report.all_hold() { AssignmentStatus::Resolved } else { AssignmentStatus::Failed };
    report.resolved_signs = out.signs.clone();
    (out, report)
}

/// Evaluates the target relations on the images without changing the signs.
pub fn verify_assignment(assignment: &GeneratorAssignment, source: &GeneratorSet) -> Report {
    let rels = classical_relations(&assignment.target);
    let relations = match assignment.images_env(source) {
        Ok(env) => check(&rels, &env, source),
        Err(_) => rels
            .iter()
            .map(|r| RelationResult {
                id: r.id.clone(),
                instance: r.expr.to_string(),
                status: RelationStatus::Inconclusive,
                residual: None,
            })
            .collect(),
    };
    Report { relations, resolved_signs: assignment.signs.clone(), inverse_is_identity: None }
}

/// Composes `backward ∘ forward` on the source generators and compares with the identity.
pub fn composes_to_identity(forward: &GeneratorAssignment, backward: &GeneratorAssignment, source: &GeneratorSet) -> bool {
    let Ok(mid) = forward.images_env(source) else { return false };
    let mid_gens = GeneratorSet { sys: forward.target.clone(), ..source.clone() };
    let env = source.env();
    backward.images.keys().all(|s| {
        let e = backward.image(s).expect("key");
        evaluate(&e, &mid, &mid_gens).ok().as_ref() == env.get(s)
    })
}

/// Resolves the reflection at `node` and its inverse and checks that they compose to the identity.
pub fn reflect_and_verify(sys: &SimpleRootSystem, node: usize, window: i64) -> Result<(GeneratorAssignment, Report)> {
    let gens = generators(sys, window);
    let (fwd, mut report) = resolve_and_verify(&classical_reflection(sys, node)?, &gens);
    let target_gens = generators(&fwd.target, window);
    let (bwd, _) = resolve_and_verify(&classical_reflection(&fwd.target, node)?, &target_gens);
    report.inverse_is_identity = Some(composes_to_identity(&fwd, &bwd, &gens));
    Ok((fwd, report))
}

/// `Σ_k n_k h_k` as a matrix, for checking that `h` is linear in the root.
pub fn coroot_of(gens: &GeneratorSet, coeffs: &BTreeMap<usize, i64>) -> SuperMatrix {
    let mut acc = SuperMatrix::zero(gens.sys.m, gens.sys.size());
    for (k, c) in coeffs {
        acc = acc.add_scaled(&gens.h[k], &Q::from_integer(*c as i128));
    }
    acc
}
