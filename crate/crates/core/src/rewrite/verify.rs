//! Substitution under generator maps and zero-reduction certificates.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::presentations::{minimalistic, GeneratorMap, GeneratorSymbol, MapStatus, Presentation, SymbolKind};
use crate::rewrite::element::{FreeElement, Word};
use crate::rewrite::system::{rules_from, RewriteSystem, DEFAULT_STEP_CEILING};

/// Degree bound used while pinning level-1 signs.
pub const RESOLUTION_DEGREE: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub degree: usize,
    pub level: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { degree: 6, level: 1 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutcomeStatus {
    Verified,
    Inconclusive,
}

/// Replayable record of one relation-image reduction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub relation_id: String,
    pub map_id: String,
    pub status: OutcomeStatus,
    pub bounds: Bounds,
    pub trace: Vec<String>,
    pub residual: serde_json::Value,
    #[serde(default)]
    pub signs: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub overflow: Option<String>,
    #[serde(skip)]
    pub residual_element: FreeElement,
}

impl Certificate {
    pub fn verified(&self) -> bool {
        self.status == OutcomeStatus::Verified
    }

    /// First field where `other` differs from `self`.
    pub fn divergence(&self, other: &Certificate) -> Option<String> {
        if self.relation_id != other.relation_id {
            return Some(format!("relation_id: {} vs {}", self.relation_id, other.relation_id));
        }
        if self.map_id != other.map_id {
            return Some(format!("map_id: {} vs {}", self.map_id, other.map_id));
        }
        if self.bounds != other.bounds {
            return Some("bounds".into());
        }
        if self.status != other.status {
            return Some(format!("status: {:?} vs {:?}", self.status, other.status));
        }
        if let Some(k) = (0..self.trace.len().max(other.trace.len())).find(|&k| self.trace.get(k) != other.trace.get(k)) {
            return Some(format!(
                "trace step {}: {} vs {}",
                k,
                self.trace.get(k).map(String::as_str).unwrap_or("<end>"),
                other.trace.get(k).map(String::as_str).unwrap_or("<end>")
            ));
        }
        if self.residual != other.residual {
            return Some("residual".into());
        }
        None
    }
}

/// Replaces every letter by its image and expands.
pub fn substitute_with(images: &HashMap<GeneratorSymbol, FreeElement>, e: &FreeElement) -> Result<FreeElement> {
    let mut out = FreeElement::zero();
    for (w, c) in &e.terms {
        let mut acc = FreeElement::one();
        for s in w.0.iter() {
            let img = images
                .get(s)
                .ok_or_else(|| Error::Malformed(format!("no image for {}", s)))?;
            acc = acc.mul(img);
        }
        out.add_scaled(&acc, c);
    }
    Ok(out)
}

/// Substitution under a resolved map.
pub fn substitute(map: &GeneratorMap, e: &FreeElement) -> Result<FreeElement> {
    if map.status != MapStatus::Resolved {
        return Err(Error::Unsupported(format!("map {} is not resolved", map.id())));
    }
    substitute_with(&map.expanded(), e)
}

/// Checks relation images of one map against bounded completions of the target
/// presentation restricted to the nodes each image touches.
pub struct Verifier {
    pub source: Presentation,
    pub target: Presentation,
    pub bounds: Bounds,
    base: RewriteSystem,
    cache: BTreeMap<(Vec<usize>, bool, usize), RewriteSystem>,
}

impl Verifier {
    pub fn new(map: &GeneratorMap, bounds: Bounds) -> Result<Verifier> {
        let source = minimalistic(&map.source, map.with_d)?;
        let target = minimalistic(&map.target, map.with_d)?;
        let base = rules_from(&target, bounds.degree, bounds.level);
        Ok(Verifier { source, target, bounds, base, cache: BTreeMap::new() })
    }

    pub fn base(&self) -> &RewriteSystem {
        &self.base
    }

    /// Completed rewrite system over the letters at `nodes` (and `d` if asked).
    pub fn system_for(&mut self, nodes: &BTreeSet<usize>, with_d: bool, degree: usize) -> &RewriteSystem {
        let key = (nodes.iter().copied().collect::<Vec<_>>(), with_d, degree);
        let level = self.bounds.level;
        let base = &self.base;
        self.cache.entry(key).or_insert_with(|| {
            let keep = |s: &GeneratorSymbol| {
                if s.kind == SymbolKind::D {
                    with_d
                } else {
                    nodes.contains(&s.node())
                }
            };
            let mut rs = base.restricted(&keep);
            rs.complete(degree, Some(level));
            rs.interreduce();
            rs
        })
    }

    /// `nodes` together with their neighbours in the target diagram.
    pub fn neighbourhood(&self, nodes: &BTreeSet<usize>) -> BTreeSet<usize> {
        let sys = &self.target.sys;
        let mut out = nodes.clone();
        for &k in nodes {
            out.extend(sys.neighbours(k));
        }
        out
    }

    pub fn verify(&mut self, map: &GeneratorMap, relation_id: &str) -> Result<Certificate> {
        let degree = self.bounds.degree;
        self.verify_at(map, relation_id, degree)
    }

    /// Reduces the image of a source relation; unknown ids are errors.
    pub fn verify_at(&mut self, map: &GeneratorMap, relation_id: &str, degree: usize) -> Result<Certificate> {
        let rel = self
            .source
            .find(relation_id)
            .ok_or_else(|| Error::Malformed(format!("unknown relation {}", relation_id)))?;
        let element = rel.element.clone();
        let img = substitute_with(&map.expanded(), &element)?;
        Ok(self.reduce_image(map, relation_id, &img, degree))
    }

    /// Reduces an already substituted element in the system for its support.
    pub fn reduce_image(&mut self, map: &GeneratorMap, relation_id: &str, img: &FreeElement, degree: usize) -> Certificate {
        let mut nodes = BTreeSet::new();
        let mut with_d = false;
        for s in img.symbols() {
            if s.kind == SymbolKind::D {
                with_d = true;
            } else {
                nodes.insert(s.node());
            }
        }
        let closure = self.neighbourhood(&nodes);
        let rs = self.system_for(&closure, with_d, degree);
        let nf = rs.reduce_with(img, DEFAULT_STEP_CEILING, None);
        let trace = nf.trace.iter().map(|&id| rs.rules[id].label()).collect();
        let status = if nf.residual.is_zero() { OutcomeStatus::Verified } else { OutcomeStatus::Inconclusive };
        Certificate {
            relation_id: relation_id.to_string(),
            map_id: map.id(),
            status,
            bounds: Bounds { degree, level: self.bounds.level },
            trace,
            residual: nf.residual.to_json(),
            signs: map.signs.clone(),
            overflow: nf.overflow.as_ref().map(Word::to_string).or(nf.exhausted.then(|| "step ceiling".to_string())),
            residual_element: nf.residual,
        }
    }

    /// Normal form of an element over the target alphabet.
    pub fn normal_form(&mut self, e: &FreeElement) -> FreeElement {
        let mut nodes = BTreeSet::new();
        let mut with_d = false;
        for s in e.symbols() {
            if s.kind == SymbolKind::D {
                with_d = true;
            } else {
                nodes.insert(s.node());
            }
        }
        let degree = self.bounds.degree;
        let nodes = self.neighbourhood(&nodes);
        self.system_for(&nodes, with_d, degree).reduce(e).residual
    }
}
