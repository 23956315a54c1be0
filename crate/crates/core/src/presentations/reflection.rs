//! Quantum reflection maps `T` between minimalistic presentations of a system
//! and its reflection at one node.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::Zero;

use crate::coeff::{Poly, Q};
use crate::error::{Error, Result};
use crate::groupoid::reflect_system;
use crate::liesuper::{self, coroot_shift, AssignmentStatus};
use crate::presentations::{GeneratorSymbol, Letters, SymbolKind};
use crate::rewrite::{expand, Expr, FreeElement, Verifier, RESOLUTION_DEGREE};
use crate::rootspace::{cartan_matrix, SimpleRootSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapStatus {
    Unresolved,
    Resolved,
    Failed,
}

impl MapStatus {
    pub fn tag(self) -> &'static str {
        match self {
            MapStatus::Unresolved => "unresolved",
            MapStatus::Resolved => "resolved",
            MapStatus::Failed => "failed",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignParam {
    pub name: String,
    pub node: usize,
    pub level: usize,
}

/// `(Π signs[params]) · expr`
#[derive(Clone, Debug)]
pub struct ImagePart {
    pub expr: Expr,
    pub params: Vec<usize>,
}

/// Images of source symbols as elements over the target alphabet.
#[derive(Clone, Debug)]
pub struct GeneratorMap {
    pub source: SimpleRootSystem,
    pub target: SimpleRootSystem,
    pub node: Option<usize>,
    pub with_d: bool,
    pub images: BTreeMap<GeneratorSymbol, Vec<ImagePart>>,
    pub params: Vec<SignParam>,
    pub signs: Vec<i64>,
    pub status: MapStatus,
    pub witnesses: Vec<(String, FreeElement)>,
}

impl GeneratorMap {
    /// Stable identifier, e.g. `T[00011;affine;3]`.
    pub fn id(&self) -> String {
        let kind = if self.source.affine { "affine" } else { "finite" };
        let d = if self.with_d { ";d" } else { "" };
        match self.node {
            Some(k) => format!("T[{};{};{}{}]", self.source.parity_word(), kind, k, d),
            None => format!("id[{};{}{}]", self.source.parity_word(), kind, d),
        }
    }

    /// The identity map on the minimalistic alphabet of `sys`.
    pub fn identity(sys: &SimpleRootSystem, with_d: bool) -> GeneratorMap {
        let l = Letters { sys };
        let mut images = BTreeMap::new();
        for k in sys.nodes() {
            for r in 0..2 {
                for s in [1, -1] {
                    images.insert(l.x(s, k, r), vec![ImagePart { expr: l.ex(s, k, r), params: vec![] }]);
                }
                images.insert(GeneratorSymbol::h(k, r), vec![ImagePart { expr: l.eh(k, r), params: vec![] }]);
            }
        }
        if with_d {
            let d = GeneratorSymbol::d();
            images.insert(d, vec![ImagePart { expr: Expr::sym(d), params: vec![] }]);
        }
        GeneratorMap {
            source: sys.clone(),
            target: sys.clone(),
            node: None,
            with_d,
            images,
            params: vec![],
            signs: vec![],
            status: MapStatus::Resolved,
            witnesses: vec![],
        }
    }

    pub fn image_expr(&self, s: &GeneratorSymbol) -> Option<Expr> {
        let parts = self.images.get(s)?;
        Some(Expr::sum(
            parts
                .iter()
                .map(|p| {
                    let sign: i64 = p.params.iter().map(|&k| self.signs[k]).product();
                    if sign < 0 {
                        Expr::neg(p.expr.clone())
                    } else {
                        p.expr.clone()
                    }
                })
                .collect(),
        ))
    }

    pub fn image(&self, s: &GeneratorSymbol) -> Option<FreeElement> {
        self.image_expr(s).map(|e| expand(&e))
    }

    pub fn expanded(&self) -> HashMap<GeneratorSymbol, FreeElement> {
        self.images.keys().map(|s| (*s, self.image(s).expect("key"))).collect()
    }

    pub fn param_index(&self, name: &str) -> Option<usize> {
        self.params.iter().position(|p| p.name == name)
    }

    pub fn with_flipped(&self, param: usize) -> GeneratorMap {
        let mut out = self.clone();
        out.signs[param] = -out.signs[param];
        out
    }

    /// Target nodes touched by the images of the given source symbols.
    pub fn support<'a>(&self, symbols: impl Iterator<Item = &'a GeneratorSymbol>) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for s in symbols {
            if let Some(parts) = self.images.get(s) {
                for p in parts {
                    let mut v = Vec::new();
                    p.expr.symbols(&mut v);
                    out.extend(v.iter().filter(|x| x.kind != SymbolKind::D).map(|x| x.node()));
                }
            }
        }
        out
    }
}

/// Rebuilds the unresolved map named by [`GeneratorMap::id`].
pub fn map_from_id(id: &str) -> Result<GeneratorMap> {
    let bad = || Error::Malformed(format!("map id {:?}", id));
    let (head, rest) = id.split_once('[').ok_or_else(bad)?;
    let body = rest.strip_suffix(']').ok_or_else(bad)?;
    let parts: Vec<&str> = body.split(';').collect();
    if parts.len() < 2 {
        return Err(bad());
    }
    let affine = match parts[1] {
        "affine" => true,
        "finite" => false,
        _ => return Err(bad()),
    };
    let sys = SimpleRootSystem::from_word(parts[0], affine)?;
    let with_d = parts.last() == Some(&"d");
    let tail = if with_d { &parts[2..parts.len() - 1] } else { &parts[2..] };
    match (head, tail) {
        ("id", []) => Ok(GeneratorMap::identity(&sys, with_d)),
        ("T", [k]) => quantum_reflection(&sys, k.parse().map_err(|_| bad())?, with_d),
        _ => Err(bad()),
    }
}

/// Quantum reflection at `node`: images of the minimalistic generators of `sys`
/// in the minimalistic presentation of the reflected system. Level-0 images
/// come from the resolved classical reflection; level-1 images carry sign
/// parameters for [`resolve_signs`].
pub fn quantum_reflection(sys: &SimpleRootSystem, node: usize, with_d: bool) -> Result<GeneratorMap> {
    sys.check_node(node)?;
    let target = reflect_system(sys, node)?;
    let gens = liesuper::generators(&target, liesuper::DEFAULT_LOOP_WINDOW);
    let (classical, _) = liesuper::resolve_and_verify(&liesuper::classical_reflection(&target, node)?, &gens);
    if classical.status != AssignmentStatus::Resolved {
        return Err(Error::Unsupported(format!(
            "classical reflection of {} at {} did not resolve",
            target.parity_word(),
            node
        )));
    }
    let a = cartan_matrix(sys);
    let tl = Letters { sys: &target };
    let sl = Letters { sys };
    let odd = sys.node_parity(node).is_odd();
    let aii = a.entry(node, node);
    let mut images: BTreeMap<GeneratorSymbol, Vec<ImagePart>> = BTreeMap::new();
    let mut params: Vec<SignParam> = Vec::new();
    let mut signs: Vec<i64> = Vec::new();
    let mut new_param = |name: String, node: usize, level: usize, value: i64| {
        params.push(SignParam { name, node, level });
        signs.push(value);
        params.len() - 1
    };
    let half_hbar = |c: Q| Poly::monomial(1, c / Q::from_integer(2));
    let anti_x = Expr::anti(tl.ex(1, node, 0), tl.ex(-1, node, 0));

    // level 0: inherited from the classical reflection sys' → sys
    for (sym, img) in &classical.images {
        let params = match img.param {
            Some(p) => vec![new_param(
                format!("{}[{},0]", sym.kind.tag(), sym.node),
                sym.node(),
                0,
                classical.signs[p],
            )],
            None => vec![],
        };
        let source_sym = if sym.kind.is_x() { sl.x(sym.kind.sign(), sym.node(), 0) } else { *sym };
        images.insert(source_sym, vec![ImagePart { expr: img.expr.clone(), params }]);
    }

    let mut htilde: BTreeMap<usize, Vec<ImagePart>> = BTreeMap::new();
    for j in sys.nodes() {
        let aij = a.entry(node, j);
        if j == node {
            for s in [1i64, -1] {
                let p = new_param(format!("x{}[{},1]", if s > 0 { "+" } else { "-" }, j), j, 1, 1);
                let q = new_param(format!("hbar x{}[{},1]", if s > 0 { "+" } else { "-" }, j), j, 1, 1);
                let parts = vec![
                    ImagePart { expr: Expr::neg(tl.ex(-s, j, 1)), params: vec![p] },
                    ImagePart {
                        expr: Expr::scale(half_hbar(Q::from_integer(1)), Expr::anti(tl.eh(j, 0), tl.ex(-s, j, 0))),
                        params: vec![p, q],
                    },
                ];
                images.insert(sl.x(s, j, 1), parts);
            }
            let mut parts = vec![ImagePart { expr: Expr::neg(tl.eht(j, 1)), params: vec![] }];
            if !odd {
                let q = new_param(format!("hbar h~[{},1]", j), j, 1, 1);
                let c = -Q::from_integer(aii.abs() as i128);
                parts.push(ImagePart { expr: Expr::scale(half_hbar(c), anti_x.clone()), params: vec![q] });
            }
            htilde.insert(j, parts);
        } else if aij != 0 {
            for s in [1i64, -1] {
                let p = new_param(format!("x{}[{},1]", if s > 0 { "+" } else { "-" }, j), j, 1, 1);
                let br = Expr::bracket(tl.ex(s, node, 0), tl.ex(s, j, 1));
                let expr = if s > 0 { br } else { Expr::neg(br) };
                images.insert(sl.x(s, j, 1), vec![ImagePart { expr, params: vec![p] }]);
            }
            let c = coroot_shift(odd, aij, aii);
            let q = new_param(format!("hbar h~[{},1]", j), j, 1, 1);
            htilde.insert(
                j,
                vec![
                    ImagePart { expr: tl.eht(j, 1), params: vec![] },
                    ImagePart { expr: Expr::scale_q(c, tl.eht(node, 1)), params: vec![] },
                    ImagePart {
                        expr: Expr::scale(half_hbar(-Q::from_integer(aij as i128)), anti_x.clone()),
                        params: vec![q],
                    },
                ],
            );
        } else {
            for s in [1i64, -1] {
                images.insert(sl.x(s, j, 1), vec![ImagePart { expr: tl.ex(s, j, 1), params: vec![] }]);
            }
            htilde.insert(j, vec![ImagePart { expr: tl.eht(j, 1), params: vec![] }]);
        }
    }
    // h_{j,1} = h~_{j,1} + (ħ/2) h_{j,0}^2
    for (j, mut parts) in htilde {
        let h0 = images[&GeneratorSymbol::h(j, 0)][0].expr.clone();
        parts.push(ImagePart {
            expr: Expr::scale(half_hbar(Q::from_integer(1)), Expr::Prod(vec![h0.clone(), h0])),
            params: vec![],
        });
        images.insert(GeneratorSymbol::h(j, 1), parts);
    }
    if with_d {
        let mut parts = vec![ImagePart { expr: Expr::sym(GeneratorSymbol::d()), params: vec![] }];
        for (k, c) in derivation_shift(sys, &target, node)? {
            parts.push(ImagePart { expr: Expr::scale_q(c, tl.eh(k, 0)), params: vec![] });
        }
        images.insert(GeneratorSymbol::d(), parts);
    }
    Ok(GeneratorMap {
        source: sys.clone(),
        target,
        node: Some(node),
        with_d,
        images,
        params,
        signs,
        status: MapStatus::Unresolved,
        witnesses: vec![],
    })
}

/// Coefficients `c_k` with `T(d) = d' + Σ c_k h'_k`: the image must act on
/// `T(x_j)` by `δ_{j0}` while `d'` counts occurrences of the target's node 0.
fn derivation_shift(sys: &SimpleRootSystem, target: &SimpleRootSystem, node: usize) -> Result<Vec<(usize, Q)>> {
    let nodes: Vec<usize> = sys.nodes().collect();
    let roots_t = target.simple_roots();
    let roots_s = sys.simple_roots();
    // express each source simple root in target simple roots: α_j = Σ_k n_jk β_k
    let first = sys.first_node();
    let expr_in_target = |j: usize| -> Vec<i64> {
        let mut v = vec![0i64; nodes.len()];
        v[j - first] = 1;
        if j == node {
            v[j - first] = -1;
        } else {
            let aij = crate::rootspace::bilinear(&roots_s[node - first], &roots_s[j - first]);
            if aij != 0 {
                let odd = sys.node_parity(node).is_odd();
                let c = coroot_shift(odd, aij, crate::rootspace::bilinear(&roots_s[node - first], &roots_s[node - first]));
                // α_j = β_j − c·α_i = β_j + c·β_i
                v[node - first] = *c.numer() as i64 / *c.denom() as i64;
            }
        }
        v
    };
    let n = nodes.len();
    // unknowns c_k, equations over j: Σ_k c_k (β_k, α_j) = δ_{j0} − [β_0 in α_j]
    let mut mat: Vec<Vec<Q>> = Vec::new();
    for &j in &nodes {
        let coeffs = expr_in_target(j);
        let mut row: Vec<Q> = (0..n)
            .map(|k| Q::from_integer(crate::rootspace::bilinear(&roots_t[k], &roots_s[j - first]) as i128))
            .collect();
        let zero_count = if target.affine { coeffs[0] } else { 0 };
        let rhs = Q::from_integer((i64::from(j == 0 && sys.affine) - zero_count) as i128);
        row.push(rhs);
        mat.push(row);
    }
    let sol = solve(mat, n).ok_or_else(|| Error::Unsupported("no Cartan correction for d".into()))?;
    Ok(nodes.into_iter().zip(sol).filter(|(_, c)| !c.is_zero()).collect())
}

/// Gaussian elimination on an augmented matrix; any solution of a consistent system.
fn solve(mut mat: Vec<Vec<Q>>, n: usize) -> Option<Vec<Q>> {
    let rows = mat.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..rows).find(|&i| !mat[i][c].is_zero()) else { continue };
        mat.swap(r, p);
        let inv = Q::from_integer(1) / mat[r][c];
        for x in mat[r].iter_mut() {
            *x *= inv;
        }
        for i in 0..rows {
            if i != r && !mat[i][c].is_zero() {
                let f = mat[i][c];
                let pivot = mat[r].clone();
                for (x, p) in mat[i].iter_mut().zip(&pivot) {
                    *x -= *p * f;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if mat[r..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    let mut sol = vec![Q::zero(); n];
    for (i, &c) in pivots.iter().enumerate() {
        sol[c] = mat[i][n];
    }
    Some(sol)
}

/// The relation instances used to pin the level-1 signs at node `j`.
fn pinning_relations(v: &Verifier, j: usize) -> Vec<String> {
    let prefixes = [
        format!("cross-0({},{})", j, j),
        format!("h-action({},{};", j, j),
        format!("cross-1({},{};", j, j),
        format!("tilde-action({},{};", j, j),
        format!("level-shift({},{};", j, j),
    ];
    v.source
        .relations
        .iter()
        .filter(|r| prefixes.iter().any(|p| r.id.starts_with(p.as_str())))
        .map(|r| r.id.clone())
        .collect()
}

fn all_verify(v: &mut Verifier, map: &GeneratorMap, rels: &[String], degree: usize) -> bool {
    rels.iter().all(|id| v.verify_at(map, id, degree).map(|c| c.verified()).unwrap_or(false))
}

/// Resolves the level-1 sign parameters node by node: a combination is accepted
/// when the images of the level-1 cross, h-action, tilde-action and level-shift
/// relations at that node reduce to zero.
pub fn resolve_signs(map: &GeneratorMap, v: &mut Verifier) -> GeneratorMap {
    let mut out = map.clone();
    out.witnesses.clear();
    if out.node.is_none() {
        out.status = MapStatus::Resolved;
        return out;
    }
    let mut by_node: BTreeMap<usize, Vec<usize>> = out.source.nodes().map(|j| (j, vec![])).collect();
    for (k, p) in out.params.iter().enumerate() {
        if p.level == 1 {
            by_node.entry(p.node).or_default().push(k);
        }
    }
    let mut failed = false;
    for (j, ks) in by_node {
        let rels = pinning_relations(v, j);
        let mut found = None;
        'degrees: for degree in [RESOLUTION_DEGREE, v.bounds.degree.max(RESOLUTION_DEGREE)] {
            for bits in 0..(1u32 << ks.len()) {
                let mut cand = out.clone();
                for (b, &k) in ks.iter().enumerate() {
                    cand.signs[k] = if bits >> b & 1 == 1 { -1 } else { 1 };
                }
                if all_verify(v, &cand, &rels, degree) {
                    found = Some(cand);
                    break 'degrees;
                }
            }
        }
        match found {
            Some(c) => out = c,
            None => {
                failed = true;
                for id in rels {
                    if let Ok(c) = v.verify_at(&out, &id, RESOLUTION_DEGREE) {
                        if !c.verified() {
                            out.witnesses.push((id, c.residual_element));
                        }
                    }
                }
            }
        }
    }
    out.status = if failed { MapStatus::Failed } else { MapStatus::Resolved };
    out
}
