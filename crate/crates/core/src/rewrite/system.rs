//! Oriented rewrite rules, straightening reduction and bounded overlap completion.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_traits::One;

use crate::coeff::{Poly, Q};
use crate::presentations::{GeneratorSymbol, Presentation, RelationFamily};
use crate::rewrite::element::{FreeElement, Letters, Word};

/// Rule classes by the shape of the oriented relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleClass {
    CrossSign,
    HPastX,
    SameSign,
    Nilpotent,
    HCommute,
    Definition,
    Derivation,
    Other,
    Completion,
}

impl RuleClass {
    pub fn tag(self) -> &'static str {
        match self {
            RuleClass::CrossSign => "R1",
            RuleClass::HPastX => "R2",
            RuleClass::SameSign => "R3",
            RuleClass::Nilpotent => "R4",
            RuleClass::HCommute => "R5",
            RuleClass::Definition => "R6",
            RuleClass::Derivation => "R7",
            RuleClass::Other => "R0",
            RuleClass::Completion => "C",
        }
    }

    fn of_relation(family: RelationFamily, lhs: &Word) -> RuleClass {
        use RelationFamily as F;
        match family {
            F::CrossLevel0 | F::CrossLevel1 | F::Cross => RuleClass::CrossSign,
            F::CartanAction | F::TildeAction | F::HAction | F::HShift => RuleClass::HPastX,
            F::LevelShift | F::XShift => RuleClass::SameSign,
            F::OddNilpotent | F::OddSquare => RuleClass::Nilpotent,
            F::CartanCommute | F::HCommute => RuleClass::HCommute,
            F::LevelRaising | F::HRaising => RuleClass::Definition,
            F::Derivation => RuleClass::Derivation,
            F::Serre | F::SerreSym | F::OddQuartic | F::OddQuarticLevels => {
                if lhs.len() == 2 && lhs.0[0] == lhs.0[1] {
                    RuleClass::Nilpotent
                } else {
                    RuleClass::Other
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuleOrigin {
    Relation(String),
    Overlap { left: usize, right: usize, word: Word },
    Retired { from: usize },
}

/// `lhs → rhs`, with every word of `rhs` strictly smaller than `lhs`.
#[derive(Clone, Debug)]
pub struct Rule {
    pub id: usize,
    pub lhs: Word,
    pub rhs: FreeElement,
    pub class: RuleClass,
    pub origin: RuleOrigin,
}

impl Rule {
    pub fn label(&self) -> String {
        format!("{}#{}", self.class.tag(), self.id)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} -> {}", self.label(), self.lhs, self.rhs)
    }
}

#[derive(Clone, Debug)]
pub enum LogEntry {
    Added { rule: usize, word: Word },
    Resolved { left: usize, right: usize, word: Word },
    CheckOnly { word: Word },
    Retired { rule: usize, by: usize },
}

#[derive(Clone, Debug, Default)]
pub struct CompletionStats {
    pub pairs: usize,
    pub resolved: usize,
    pub added: usize,
    pub check_only: usize,
    pub retired: usize,
    pub skipped_by_bound: usize,
}

#[derive(Clone, Debug)]
pub struct RewriteSystem {
    pub rules: Vec<Rule>,
    active: Vec<bool>,
    index: HashMap<Letters, usize>,
    max_lhs: usize,
    pub degree_bound: usize,
    pub level_bound: usize,
    pub excluded: Vec<(String, FreeElement)>,
    pub check_only: Vec<(String, FreeElement)>,
    pub log: Vec<LogEntry>,
    pub stats: CompletionStats,
}

/// Result of a reduction: the normal form and the rules applied, in order.
#[derive(Clone, Debug)]
pub struct NormalForm {
    pub residual: FreeElement,
    pub trace: Vec<usize>,
    pub overflow: Option<Word>,
    pub exhausted: bool,
}

pub const DEFAULT_STEP_CEILING: usize = 5_000_000;

impl RewriteSystem {
    pub fn empty(degree_bound: usize, level_bound: usize) -> Self {
        RewriteSystem {
            rules: Vec::new(),
            active: Vec::new(),
            index: HashMap::new(),
            max_lhs: 0,
            degree_bound,
            level_bound,
            excluded: Vec::new(),
            check_only: Vec::new(),
            log: Vec::new(),
            stats: CompletionStats::default(),
        }
    }

    pub fn active_rules(&self) -> impl Iterator<Item = &Rule> {
        self.rules.iter().filter(|r| self.active[r.id])
    }

    pub fn active_count(&self) -> usize {
        self.active.iter().filter(|a| **a).count()
    }

    pub fn is_active(&self, id: usize) -> bool {
        self.active[id]
    }

    pub fn rule_for(&self, lhs: &[GeneratorSymbol]) -> Option<&Rule> {
        self.index.get(lhs).map(|&i| &self.rules[i])
    }

    /// Finds the leftmost, shortest factor of `w` that is a rule lhs.
    fn find_match(&self, w: &Word) -> Option<(usize, usize)> {
        let letters = &w.0;
        for start in 0..letters.len() {
            let max = self.max_lhs.min(letters.len() - start);
            for len in 1..=max {
                if let Some(&id) = self.index.get(&letters[start..start + len]) {
                    return Some((start, id));
                }
            }
        }
        None
    }

    fn all_matches(&self, w: &Word) -> Vec<(usize, usize)> {
        let letters = &w.0;
        let mut out = Vec::new();
        for start in 0..letters.len() {
            let max = self.max_lhs.min(letters.len() - start);
            for len in 1..=max {
                if let Some(&id) = self.index.get(&letters[start..start + len]) {
                    out.push((start, id));
                }
            }
        }
        out
    }

    /// Rewrites the order-greatest reducible word until none is left.
    pub fn reduce(&self, e: &FreeElement) -> NormalForm {
        self.reduce_with(e, DEFAULT_STEP_CEILING, None)
    }

    /// Reduction where `choose(k)` picks which of `k` available matches to apply;
    /// without a chooser the leftmost shortest match is used.
    pub fn reduce_with(
        &self,
        e: &FreeElement,
        ceiling: usize,
        mut choose: Option<&mut dyn FnMut(usize) -> usize>,
    ) -> NormalForm {
        let mut work = e.terms.clone();
        let mut residual = FreeElement::zero();
        let mut trace = Vec::new();
        let mut overflow: Option<Word> = None;
        let mut steps = 0usize;
        while let Some((w, c)) = work.pop_last() {
            let hit = match choose.as_mut() {
                None => self.find_match(&w),
                Some(f) => {
                    let all = self.all_matches(&w);
                    if all.is_empty() {
                        None
                    } else {
                        Some(all[f(all.len()) % all.len()])
                    }
                }
            };
            match hit {
                None => {
                    if w.len() > self.degree_bound && overflow.as_ref().is_none_or(|o| &w > o) {
                        overflow = Some(w.clone());
                    }
                    residual.terms.insert(w, c);
                }
                Some((start, id)) => {
                    steps += 1;
                    if steps > ceiling {
                        work.insert(w, c);
                        for (w, c) in work {
                            residual.add_term(w, &c);
                        }
                        return NormalForm { residual, trace, overflow, exhausted: true };
                    }
                    trace.push(id);
                    let rule = &self.rules[id];
                    let prefix = &w.0[..start];
                    let suffix = &w.0[start + rule.lhs.len()..];
                    for (rw, rc) in &rule.rhs.terms {
                        let mut letters: Letters = Letters::from_slice(prefix);
                        letters.extend_from_slice(&rw.0);
                        letters.extend_from_slice(suffix);
                        let nw = Word(letters);
                        let nc = &c * rc;
                        match work.get_mut(&nw) {
                            Some(x) => {
                                *x += &nc;
                                if x.is_zero() {
                                    work.remove(&nw);
                                }
                            }
                            None => {
                                if !nc.is_zero() {
                                    work.insert(nw, nc);
                                }
                            }
                        }
                    }
                }
            }
        }
        NormalForm { residual, trace, overflow, exhausted: false }
    }

    /// Adds `lhs → rhs` and retires rules whose lhs contains `lhs` as a factor.
    /// Returns the ids of retired rules.
    fn insert_rule(&mut self, lhs: Word, rhs: FreeElement, class: RuleClass, origin: RuleOrigin) -> (usize, Vec<usize>) {
        let id = self.rules.len();
        let mut retired = Vec::new();
        for r in self.rules.iter() {
            if self.active[r.id] && r.lhs.len() > lhs.len() && r.lhs.find(&lhs.0).is_some() {
                retired.push(r.id);
            }
        }
        for &r in &retired {
            self.active[r] = false;
            self.index.remove(&self.rules[r].lhs.0);
            self.log.push(LogEntry::Retired { rule: r, by: id });
            self.stats.retired += 1;
        }
        self.max_lhs = self.max_lhs.max(lhs.len());
        self.index.insert(lhs.0.clone(), id);
        self.rules.push(Rule { id, lhs, rhs, class, origin });
        self.active.push(true);
        (id, retired)
    }

    /// Orients `e ≡ 0` after reducing it. Returns `Ok(None)` if it reduces to zero,
    /// `Err(e)` if the leading coefficient is not a nonzero rational.
    fn orient(&mut self, e: &FreeElement, class: Option<RuleClass>, family: Option<RelationFamily>, origin: RuleOrigin) -> Result<Option<(usize, Vec<usize>)>, FreeElement> {
        let nf = self.reduce(e);
        let r = nf.residual;
        let Some((lead, c)) = r.leading() else {
            return Ok(None);
        };
        let Some(u) = c.as_unit() else {
            return Err(r);
        };
        let lead = lead.clone();
        let mut rhs = r.clone();
        rhs.terms.remove(&lead);
        let rhs = rhs.scale_q(&(-Q::one() / u));
        let class = class.unwrap_or_else(|| match family {
            Some(f) => RuleClass::of_relation(f, &lead),
            None => RuleClass::Completion,
        });
        Ok(Some(self.insert_rule(lead, rhs, class, origin)))
    }

    /// Re-adds retired rules as relations until nothing is left to retire.
    fn settle(&mut self, mut retired: Vec<usize>) -> Vec<usize> {
        let mut added = Vec::new();
        while let Some(r) = retired.pop() {
            let rule = &self.rules[r];
            let e = FreeElement::term(rule.lhs.clone(), Poly::one()).sub(&rule.rhs);
            let class = rule.class;
            match self.orient(&e, Some(class), None, RuleOrigin::Retired { from: r }) {
                Ok(Some((id, more))) => {
                    added.push(id);
                    retired.extend(more);
                }
                Ok(None) => {}
                Err(res) => {
                    self.stats.check_only += 1;
                    if let Some((w, _)) = res.leading() {
                        self.log.push(LogEntry::CheckOnly { word: w.clone() });
                    }
                    self.check_only.push((format!("retired#{}", r), res));
                }
            }
        }
        added
    }

    /// Adds a relation, orienting it against the current rules.
    pub fn add_relation(&mut self, id: &str, family: Option<RelationFamily>, e: &FreeElement) -> Vec<usize> {
        match self.orient(e, None, family, RuleOrigin::Relation(id.to_string())) {
            Ok(Some((rid, retired))) => {
                let mut out = vec![rid];
                out.extend(self.settle(retired));
                out
            }
            Ok(None) => vec![],
            Err(res) => {
                if res.leading().is_some() {
                    self.excluded.push((id.to_string(), res));
                }
                vec![]
            }
        }
    }

    /// Keeps only rules over letters accepted by `keep`; the result is sound
    /// (fewer rules) and is meant to be completed afresh.
    pub fn restricted(&self, keep: &dyn Fn(&GeneratorSymbol) -> bool) -> RewriteSystem {
        let mut out = RewriteSystem::empty(self.degree_bound, self.level_bound);
        for r in self.active_rules() {
            if r.lhs.0.iter().all(keep) && r.rhs.symbols().all(keep) {
                let e = FreeElement::term(r.lhs.clone(), Poly::one()).sub(&r.rhs);
                let origin = match &r.origin {
                    RuleOrigin::Relation(s) => s.clone(),
                    _ => format!("rule#{}", r.id),
                };
                match out.orient(&e, Some(r.class), None, RuleOrigin::Relation(origin)) {
                    Ok(Some((_, retired))) => {
                        out.settle(retired);
                    }
                    Ok(None) => {}
                    Err(res) => out.excluded.push((format!("rule#{}", r.id), res)),
                }
            }
        }
        out
    }

    /// Resolves overlap ambiguities whose word has length `≤ degree_bound` and
    /// total level `≤ level_sum_bound`, in increasing order of the ambiguity word.
    pub fn complete(&mut self, degree_bound: usize, level_sum_bound: Option<usize>) {
        self.degree_bound = self.degree_bound.max(degree_bound);
        if degree_bound == 0 {
            return;
        }
        let level_ok = |w: &Word| level_sum_bound.is_none_or(|b| w.level() <= b);
        let mut queue: BTreeSet<(usize, usize, usize, usize, usize)> = BTreeSet::new();
        let ids: Vec<usize> = self.active_rules().map(|r| r.id).collect();
        for &a in &ids {
            for &b in &ids {
                self.push_overlaps(a, b, degree_bound, &level_ok, &mut queue);
            }
        }
        while let Some((_, _, a, b, k)) = queue.pop_first() {
            if !self.active[a] || !self.active[b] {
                continue;
            }
            self.stats.pairs += 1;
            let ra = &self.rules[a];
            let rb = &self.rules[b];
            let split = ra.lhs.len() - k;
            let word = ra.lhs.concat(&Word::from_slice(&rb.lhs.0[k..]));
            let left = ra.rhs.sandwich(&[], &rb.lhs.0[k..]);
            let right = rb.rhs.sandwich(&ra.lhs.0[..split], &[]);
            let s = left.sub(&right);
            let origin = RuleOrigin::Overlap { left: a, right: b, word: word.clone() };
            match self.orient(&s, Some(RuleClass::Completion), None, origin) {
                Ok(None) => {
                    self.stats.resolved += 1;
                }
                Ok(Some((id, retired))) => {
                    self.stats.added += 1;
                    self.log.push(LogEntry::Added { rule: id, word: word.clone() });
                    let mut fresh = vec![id];
                    fresh.extend(self.settle(retired));
                    let act: Vec<usize> = self.active_rules().map(|r| r.id).collect();
                    for &n in &fresh {
                        if !self.active[n] {
                            continue;
                        }
                        for &o in &act {
                            self.push_overlaps(n, o, degree_bound, &level_ok, &mut queue);
                            if o != n {
                                self.push_overlaps(o, n, degree_bound, &level_ok, &mut queue);
                            }
                        }
                    }
                }
                Err(res) => {
                    self.stats.check_only += 1;
                    self.log.push(LogEntry::CheckOnly { word: word.clone() });
                    self.check_only.push((format!("overlap {}", word), res));
                }
            }
        }
    }

    fn push_overlaps(
        &mut self,
        a: usize,
        b: usize,
        degree_bound: usize,
        level_ok: &dyn Fn(&Word) -> bool,
        queue: &mut BTreeSet<(usize, usize, usize, usize, usize)>,
    ) {
        let u = &self.rules[a].lhs;
        let v = &self.rules[b].lhs;
        let max_k = u.len().min(v.len());
        for k in 1..max_k {
            if u.0[u.len() - k..] == v.0[..k] {
                let len = u.len() + v.len() - k;
                if len > degree_bound {
                    self.stats.skipped_by_bound += 1;
                    continue;
                }
                let w = u.concat(&Word::from_slice(&v.0[k..]));
                if !level_ok(&w) {
                    self.stats.skipped_by_bound += 1;
                    continue;
                }
                queue.insert((len, w.level(), a, b, k));
            }
        }
    }

    /// Replaces every rule's right-hand side by its normal form.
    pub fn interreduce(&mut self) {
        for id in 0..self.rules.len() {
            if !self.active[id] {
                continue;
            }
            let rhs = self.rules[id].rhs.clone();
            let nf = self.reduce(&rhs);
            self.rules[id].rhs = nf.residual;
        }
    }
}

/// Orients every relation and definition of a presentation.
pub fn rules_from(pres: &Presentation, degree_bound: usize, level_bound: usize) -> RewriteSystem {
    let mut rs = RewriteSystem::empty(degree_bound, level_bound);
    let mut rels: Vec<_> = pres.relations.iter().chain(pres.definitions.iter()).collect();
    // simpler relations first so later ones are oriented against them
    rels.sort_by_key(|r| (r.element.max_level(), r.element.max_len(), r.family.rank()));
    for rel in rels {
        rs.add_relation(&rel.id, Some(rel.family), &rel.element);
    }
    rs.interreduce();
    rs
}
