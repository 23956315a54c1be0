//! Presentations of the Yangian of sl(m|n) and its affinization, and the
//! quantum reflection maps between presentations of neighbouring systems.

mod reflection;
mod symbol;

use std::collections::BTreeSet;

use itertools::Itertools;
use serde_json::json;

pub use reflection::{
    map_from_id, quantum_reflection, resolve_signs, GeneratorMap, ImagePart, MapStatus, SignParam,
};
pub use symbol::{GeneratorSymbol, SymbolKind};

use crate::coeff::{Poly, Q};
use crate::error::{Error, Result};
use crate::rewrite::{expand, Expr, FreeElement};
use crate::rootspace::{cartan_matrix, CartanMatrix, Parity, SimpleRootSystem};

/// Families of defining relations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RelationFamily {
    // minimalistic
    CartanCommute,
    CrossLevel0,
    CrossLevel1,
    CartanAction,
    LevelShift,
    TildeAction,
    Serre,
    OddNilpotent,
    OddQuartic,
    Derivation,
    // full Drinfeld
    HCommute,
    HAction,
    Cross,
    HShift,
    XShift,
    SerreSym,
    OddSquare,
    OddQuarticLevels,
    LevelRaising,
    HRaising,
}

impl RelationFamily {
    pub fn tag(self) -> &'static str {
        use RelationFamily::*;
        match self {
            CartanCommute => "h-commute",
            CrossLevel0 => "cross-0",
            CrossLevel1 => "cross-1",
            CartanAction => "h-action",
            LevelShift => "level-shift",
            TildeAction => "tilde-action",
            Serre => "serre",
            OddNilpotent => "odd-square",
            OddQuartic => "odd-quartic",
            Derivation => "derivation",
            HCommute => "h-commute-r",
            HAction => "h-action-r",
            Cross => "cross-r",
            HShift => "h-shift",
            XShift => "x-shift",
            SerreSym => "serre-sym",
            OddSquare => "odd-square-r",
            OddQuarticLevels => "odd-quartic-r",
            LevelRaising => "level-raising",
            HRaising => "h-raising",
        }
    }

    pub fn from_tag(tag: &str) -> Option<RelationFamily> {
        RelationFamily::all().into_iter().find(|f| f.tag() == tag)
    }

    pub fn all() -> Vec<RelationFamily> {
        use RelationFamily::*;
        vec![
            CartanCommute, CrossLevel0, CrossLevel1, CartanAction, LevelShift, TildeAction, Serre,
            OddNilpotent, OddQuartic, Derivation, HCommute, HAction, Cross, HShift, XShift,
            SerreSym, OddSquare, OddQuarticLevels, LevelRaising, HRaising,
        ]
    }

    /// Orientation priority: simpler families are oriented first.
    pub fn rank(self) -> usize {
        use RelationFamily::*;
        match self {
            CartanCommute | HCommute => 0,
            CartanAction | HAction => 1,
            OddNilpotent | OddSquare => 2,
            CrossLevel0 | Cross => 3,
            Serre | SerreSym => 4,
            OddQuartic | OddQuarticLevels => 5,
            CrossLevel1 => 6,
            TildeAction | HShift => 7,
            LevelShift | XShift => 8,
            Derivation => 9,
            LevelRaising | HRaising => 10,
        }
    }
}

/// One relation instance, declared `≡ 0`.
#[derive(Clone, Debug)]
pub struct Relation {
    pub id: String,
    pub family: RelationFamily,
    pub expr: Expr,
    pub element: FreeElement,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavor {
    Minimalistic,
    Drinfeld(usize),
}

impl Flavor {
    pub fn tag(&self) -> String {
        match self {
            Flavor::Minimalistic => "minimalistic".into(),
            Flavor::Drinfeld(r) => format!("drinfeld({})", r),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Presentation {
    pub flavor: Flavor,
    pub sys: SimpleRootSystem,
    pub cartan: CartanMatrix,
    pub with_d: bool,
    pub alphabet: BTreeSet<GeneratorSymbol>,
    pub relations: Vec<Relation>,
    /// Definitions of higher-level generators (Drinfeld flavor only).
    pub definitions: Vec<Relation>,
}

/// Symbol constructors bound to a system's parities.
pub struct Letters<'a> {
    pub sys: &'a SimpleRootSystem,
}

impl Letters<'_> {
    pub fn x(&self, sign: i64, node: usize, level: usize) -> GeneratorSymbol {
        GeneratorSymbol::x(sign, node, level, self.sys.node_parity(node))
    }

    pub fn ex(&self, sign: i64, node: usize, level: usize) -> Expr {
        Expr::sym(self.x(sign, node, level))
    }

    pub fn eh(&self, node: usize, level: usize) -> Expr {
        Expr::sym(GeneratorSymbol::h(node, level))
    }

    pub fn eht(&self, node: usize, level: usize) -> Expr {
        Expr::sym(GeneratorSymbol::htilde(node, level))
    }
}

fn hbar_times(c: Q) -> Poly {
    Poly::monomial(1, c)
}

fn pm(sign: i64) -> &'static str {
    if sign > 0 {
        "+"
    } else {
        "-"
    }
}

struct Builder {
    relations: Vec<Relation>,
    definitions: Vec<Relation>,
}

impl Builder {
    fn push(&mut self, family: RelationFamily, id: String, expr: Expr) {
        let element = expand(&expr);
        if element.is_zero() {
            return;
        }
        self.relations.push(Relation { id: format!("{}{}", family.tag(), id), family, expr, element });
    }

    fn define(&mut self, family: RelationFamily, id: String, expr: Expr) {
        let element = expand(&expr);
        self.definitions.push(Relation { id: format!("{}{}", family.tag(), id), family, expr, element });
    }
}

fn check_affine_hypothesis(sys: &SimpleRootSystem) -> Result<()> {
    if sys.affine && (sys.m == sys.n || sys.m.min(sys.n) < 2) {
        return Err(Error::Unsupported(format!(
            "affine presentation needs m != n and m, n >= 2 (got m={}, n={})",
            sys.m, sys.n
        )));
    }
    Ok(())
}

/// The presentation by generators of levels 0 and 1.
pub fn minimalistic(sys: &SimpleRootSystem, with_d: bool) -> Result<Presentation> {
    check_affine_hypothesis(sys)?;
    if with_d && !sys.affine {
        return Err(Error::Unsupported("the derivation d needs an affine system".into()));
    }
    use RelationFamily::*;
    let a = cartan_matrix(sys);
    let l = Letters { sys };
    let nodes: Vec<usize> = sys.nodes().collect();
    let mut b = Builder { relations: vec![], definitions: vec![] };
    let signs = [1i64, -1];

    let hs: Vec<(usize, usize)> = nodes.iter().flat_map(|&i| [(i, 0), (i, 1)]).collect();
    for (p, &(i, r)) in hs.iter().enumerate() {
        for &(j, s) in &hs[p + 1..] {
            b.push(CartanCommute, format!("({},{};{},{})", i, r, j, s), Expr::bracket(l.eh(i, r), l.eh(j, s)));
        }
    }
    for &i in &nodes {
        for &j in &nodes {
            let delta = |lvl| if i == j { l.eh(i, lvl) } else { Expr::zero() };
            b.push(
                CrossLevel0,
                format!("({},{})", i, j),
                Expr::sub(Expr::bracket(l.ex(1, i, 0), l.ex(-1, j, 0)), delta(0)),
            );
            b.push(
                CrossLevel1,
                format!("({},{};1,0)", i, j),
                Expr::sub(Expr::bracket(l.ex(1, i, 1), l.ex(-1, j, 0)), delta(1)),
            );
            b.push(
                CrossLevel1,
                format!("({},{};0,1)", i, j),
                Expr::sub(Expr::bracket(l.ex(1, i, 0), l.ex(-1, j, 1)), delta(1)),
            );
        }
    }
    for &i in &nodes {
        for &j in &nodes {
            let aij = a.entry(i, j);
            for r in 0..2 {
                for &s in &signs {
                    let lhs = Expr::bracket(l.eh(i, 0), l.ex(s, j, r));
                    let rhs = Expr::scale_q(Q::from_integer((s * aij) as i128), l.ex(s, j, r));
                    b.push(CartanAction, format!("({},{};{};{})", i, j, r, pm(s)), Expr::sub(lhs, rhs));
                }
            }
            for &s in &signs {
                let lhs = Expr::bracket(l.eht(i, 1), l.ex(s, j, 0));
                let rhs = Expr::scale_q(Q::from_integer((s * aij) as i128), l.ex(s, j, 1));
                b.push(TildeAction, format!("({},{};{})", i, j, pm(s)), Expr::sub(lhs, rhs));
            }
        }
    }
    for &i in &nodes {
        for &j in nodes.iter().filter(|&&j| j >= i) {
            let aij = a.entry(i, j);
            for &s in &signs {
                let shift = Expr::sub(
                    Expr::bracket(l.ex(s, i, 1), l.ex(s, j, 0)),
                    Expr::bracket(l.ex(s, i, 0), l.ex(s, j, 1)),
                );
                let corr = Expr::scale(
                    hbar_times(Q::new((s * aij) as i128, 2)),
                    Expr::anti(l.ex(s, i, 0), l.ex(s, j, 0)),
                );
                b.push(LevelShift, format!("({},{};{})", i, j, pm(s)), Expr::sub(shift, corr));
            }
        }
    }
    for &i in &nodes {
        for &j in &nodes {
            if i == j {
                continue;
            }
            let k = 1 + a.entry(i, j).unsigned_abs() as usize;
            for &s in &signs {
                b.push(
                    Serre,
                    format!("({},{};{})", i, j, pm(s)),
                    Expr::ad_power(&l.ex(s, i, 0), k, l.ex(s, j, 0)),
                );
            }
        }
    }
    for &i in nodes.iter().filter(|&&i| sys.node_parity(i).is_odd()) {
        for &s in &signs {
            b.push(OddNilpotent, format!("({};{})", i, pm(s)), Expr::bracket(l.ex(s, i, 0), l.ex(s, i, 0)));
        }
        if let (Some(p), Some(q)) = sys.chain_neighbours(i) {
            for &s in &signs {
                let e = Expr::bracket(
                    Expr::bracket(l.ex(s, p, 0), l.ex(s, i, 0)),
                    Expr::bracket(l.ex(s, i, 0), l.ex(s, q, 0)),
                );
                b.push(OddQuartic, format!("({};{})", i, pm(s)), e);
            }
        }
    }
    if with_d {
        let d = Expr::sym(GeneratorSymbol::d());
        for &i in &nodes {
            for r in 0..2 {
                b.push(Derivation, format!("(h,{},{})", i, r), Expr::bracket(d.clone(), l.eh(i, r)));
                for &s in &signs {
                    let coeff = if i == 0 { s } else { 0 };
                    let e = Expr::sub(
                        Expr::bracket(d.clone(), l.ex(s, i, r)),
                        Expr::scale_q(Q::from_integer(coeff as i128), l.ex(s, i, r)),
                    );
                    b.push(Derivation, format!("(x,{},{};{})", i, r, pm(s)), e);
                }
            }
        }
    }
    Ok(finish(Flavor::Minimalistic, sys, a, with_d, b))
}

/// The neighbour whose `h~` raises levels at node `i`: `i+1` when it exists.
pub fn raising_neighbour(sys: &SimpleRootSystem, i: usize) -> Option<usize> {
    match sys.chain_neighbours(i) {
        (_, Some(q)) => Some(q),
        (Some(p), None) => Some(p),
        _ => None,
    }
}

/// The Drinfeld presentation with all level indices `≤ r_max`.
pub fn drinfeld(sys: &SimpleRootSystem, r_max: usize) -> Result<Presentation> {
    if r_max == 0 {
        return Err(Error::Unsupported("level bound must be at least 1".into()));
    }
    check_affine_hypothesis(sys)?;
    use RelationFamily::*;
    let a = cartan_matrix(sys);
    let l = Letters { sys };
    let nodes: Vec<usize> = sys.nodes().collect();
    let mut b = Builder { relations: vec![], definitions: vec![] };
    let signs = [1i64, -1];
    let levels: Vec<usize> = (0..=r_max).collect();

    let hs: Vec<(usize, usize)> = nodes.iter().cartesian_product(&levels).map(|(&i, &r)| (i, r)).collect();
    for (p, &(i, r)) in hs.iter().enumerate() {
        for &(j, s) in &hs[p + 1..] {
            b.push(HCommute, format!("({},{};{},{})", i, r, j, s), Expr::bracket(l.eh(i, r), l.eh(j, s)));
        }
    }
    for &i in &nodes {
        for &j in &nodes {
            let aij = a.entry(i, j);
            for &s in &levels {
                for &e in &signs {
                    let lhs = Expr::bracket(l.eh(i, 0), l.ex(e, j, s));
                    let rhs = Expr::scale_q(Q::from_integer((e * aij) as i128), l.ex(e, j, s));
                    b.push(HAction, format!("({},{};{};{})", i, j, s, pm(e)), Expr::sub(lhs, rhs));
                }
            }
            for &r in &levels {
                for &s in levels.iter().filter(|&&s| r + s <= r_max) {
                    let delta = if i == j { l.eh(i, r + s) } else { Expr::zero() };
                    b.push(
                        Cross,
                        format!("({},{};{},{})", i, j, r, s),
                        Expr::sub(Expr::bracket(l.ex(1, i, r), l.ex(-1, j, s)), delta),
                    );
                }
            }
            for r in 0..r_max {
                for s in 0..r_max {
                    for &e in &signs {
                        let shift = Expr::sub(
                            Expr::bracket(l.eh(i, r + 1), l.ex(e, j, s)),
                            Expr::bracket(l.eh(i, r), l.ex(e, j, s + 1)),
                        );
                        let corr = Expr::scale(
                            hbar_times(Q::new((e * aij) as i128, 2)),
                            Expr::anti(l.eh(i, r), l.ex(e, j, s)),
                        );
                        b.push(HShift, format!("({},{};{},{};{})", i, j, r, s, pm(e)), Expr::sub(shift, corr));
                    }
                }
            }
        }
    }
    for &i in &nodes {
        for &j in nodes.iter().filter(|&&j| j >= i) {
            let aij = a.entry(i, j);
            for r in 0..r_max {
                for s in 0..r_max {
                    for &e in &signs {
                        let shift = Expr::sub(
                            Expr::bracket(l.ex(e, i, r + 1), l.ex(e, j, s)),
                            Expr::bracket(l.ex(e, i, r), l.ex(e, j, s + 1)),
                        );
                        let corr = Expr::scale(
                            hbar_times(Q::new((e * aij) as i128, 2)),
                            Expr::anti(l.ex(e, i, r), l.ex(e, j, s)),
                        );
                        b.push(XShift, format!("({},{};{},{};{})", i, j, r, s, pm(e)), Expr::sub(shift, corr));
                    }
                }
            }
        }
    }
    for &i in &nodes {
        for &j in &nodes {
            if i == j {
                continue;
            }
            let n = 1 + a.entry(i, j).unsigned_abs() as usize;
            for rs in levels.iter().combinations_with_replacement(n) {
                for &s in &levels {
                    for &e in &signs {
                        let mut terms = Vec::new();
                        for perm in (0..n).permutations(n) {
                            let inner = perm
                                .iter()
                                .rev()
                                .fold(l.ex(e, j, s), |acc, &p| Expr::bracket(l.ex(e, i, *rs[p]), acc));
                            terms.push(inner);
                        }
                        let lv: Vec<String> = rs.iter().map(|r| r.to_string()).collect();
                        b.push(
                            SerreSym,
                            format!("({},{};{};{};{})", i, j, lv.join(","), s, pm(e)),
                            Expr::sum(terms),
                        );
                    }
                }
            }
        }
    }
    for &i in nodes.iter().filter(|&&i| sys.node_parity(i).is_odd()) {
        for &r in &levels {
            for &s in levels.iter().filter(|&&s| s >= r) {
                for &e in &signs {
                    b.push(
                        OddSquare,
                        format!("({};{},{};{})", i, r, s, pm(e)),
                        Expr::bracket(l.ex(e, i, r), l.ex(e, i, s)),
                    );
                }
            }
        }
        if let (Some(p), Some(q)) = sys.chain_neighbours(i) {
            for &r in &levels {
                for &s in &levels {
                    for &e in &signs {
                        let x = Expr::bracket(
                            Expr::bracket(l.ex(e, p, r), l.ex(e, i, 0)),
                            Expr::bracket(l.ex(e, i, 0), l.ex(e, q, s)),
                        );
                        b.push(OddQuarticLevels, format!("({};{},{};{})", i, r, s, pm(e)), x);
                    }
                }
            }
        }
    }
    for &i in &nodes {
        let Some(k) = raising_neighbour(sys, i) else { continue };
        let aki = a.entry(k, i);
        for r in 0..r_max {
            for &e in &signs {
                let rhs = Expr::scale_q(
                    Q::new(e as i128, aki as i128),
                    Expr::bracket(l.eht(k, 1), l.ex(e, i, r)),
                );
                b.define(LevelRaising, format!("({};{};{})", i, r + 1, pm(e)), Expr::sub(l.ex(e, i, r + 1), rhs));
            }
            let rhs = Expr::bracket(l.ex(1, i, r + 1), l.ex(-1, i, 0));
            b.define(HRaising, format!("({};{})", i, r + 1), Expr::sub(l.eh(i, r + 1), rhs));
        }
    }
    Ok(finish(Flavor::Drinfeld(r_max), sys, a, false, b))
}

fn finish(flavor: Flavor, sys: &SimpleRootSystem, cartan: CartanMatrix, with_d: bool, b: Builder) -> Presentation {
    let mut alphabet = BTreeSet::new();
    for r in b.relations.iter().chain(&b.definitions) {
        alphabet.extend(r.element.symbols().copied());
    }
    Presentation {
        flavor,
        sys: sys.clone(),
        cartan,
        with_d,
        alphabet,
        relations: b.relations,
        definitions: b.definitions,
    }
}

impl Presentation {
    pub fn letters(&self) -> Letters<'_> {
        Letters { sys: &self.sys }
    }

    pub fn relations_of(&self, family: RelationFamily) -> impl Iterator<Item = &Relation> {
        self.relations.iter().filter(move |r| r.family == family)
    }

    pub fn find(&self, id: &str) -> Option<&Relation> {
        self.relations.iter().chain(&self.definitions).find(|r| r.id == id)
    }

    /// Re-tags the parity of a parsed symbol against this presentation's system.
    pub fn retag(&self, s: GeneratorSymbol) -> Result<GeneratorSymbol> {
        let mut s = s;
        if s.kind.is_x() {
            self.sys.check_node(s.node())?;
            s.parity = self.sys.node_parity(s.node());
        } else {
            s.parity = Parity::Even;
        }
        if s.kind != SymbolKind::HTilde && !self.alphabet.contains(&s) {
            return Err(Error::Malformed(format!("symbol {} outside the alphabet", s)));
        }
        Ok(s)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rel = |r: &Relation, definition: bool| {
            json!({
                "id": r.id,
                "paper_eq": r.family.tag(),
                "definition": definition,
                "terms": r.element.to_json(),
            })
        };
        let mut relations: Vec<serde_json::Value> = self.relations.iter().map(|r| rel(r, false)).collect();
        relations.extend(self.definitions.iter().map(|r| rel(r, true)));
        json!({
            "flavor": self.flavor.tag(),
            "alphabet": self.alphabet.iter().map(|s| s.to_json()).collect::<Vec<_>>(),
            "relations": relations,
        })
    }
}
