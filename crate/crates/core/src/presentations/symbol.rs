use std::fmt;
use std::str::FromStr;

use serde_json::json;

use crate::error::{Error, Result};
use crate::rootspace::Parity;

/// Kinds in monomial-order precedence: `h < x^- < x^+ < d`. `h~` is a defined
/// symbol that never survives expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymbolKind {
    H,
    XMinus,
    XPlus,
    D,
    HTilde,
}

impl SymbolKind {
    pub fn tag(self) -> &'static str {
        match self {
            SymbolKind::H => "h",
            SymbolKind::XMinus => "x-",
            SymbolKind::XPlus => "x+",
            SymbolKind::D => "d",
            SymbolKind::HTilde => "h~",
        }
    }

    pub fn is_x(self) -> bool {
        matches!(self, SymbolKind::XPlus | SymbolKind::XMinus)
    }

    /// `+1` for `x^+`, `−1` for `x^-`.
    pub fn sign(self) -> i64 {
        match self {
            SymbolKind::XMinus => -1,
            _ => 1,
        }
    }

    pub fn opposite(self) -> SymbolKind {
        match self {
            SymbolKind::XPlus => SymbolKind::XMinus,
            SymbolKind::XMinus => SymbolKind::XPlus,
            k => k,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratorSymbol {
    pub kind: SymbolKind,
    pub node: u8,
    pub level: u8,
    pub parity: Parity,
}

impl GeneratorSymbol {
    pub fn x(sign: i64, node: usize, level: usize, parity: Parity) -> Self {
        let kind = if sign > 0 { SymbolKind::XPlus } else { SymbolKind::XMinus };
        GeneratorSymbol { kind, node: node as u8, level: level as u8, parity }
    }

    pub fn h(node: usize, level: usize) -> Self {
        GeneratorSymbol { kind: SymbolKind::H, node: node as u8, level: level as u8, parity: Parity::Even }
    }

    pub fn htilde(node: usize, level: usize) -> Self {
        GeneratorSymbol {
            kind: SymbolKind::HTilde,
            node: node as u8,
            level: level as u8,
            parity: Parity::Even,
        }
    }

    pub fn d() -> Self {
        GeneratorSymbol { kind: SymbolKind::D, node: 0, level: 0, parity: Parity::Even }
    }

    pub fn node(&self) -> usize {
        self.node as usize
    }

    pub fn level(&self) -> usize {
        self.level as usize
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "kind": self.kind.tag(),
            "node": self.node,
            "level": self.level,
            "parity": self.parity,
        })
    }
}

impl fmt::Display for GeneratorSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SymbolKind::D => write!(f, "d"),
            k => write!(f, "{}[{},{}]", k.tag(), self.node, self.level),
        }
    }
}

/// Parses `x+[3,1]`, `x-[0,0]`, `h[2,1]`, `h~[2,1]` or `d`. Parities are not part
/// of the text; x-symbols come back even and must be re-tagged against an alphabet.
impl FromStr for GeneratorSymbol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "d" {
            return Ok(GeneratorSymbol::d());
        }
        let open = s.find('[').ok_or_else(|| Error::Malformed(format!("symbol {:?}", s)))?;
        let kind = match &s[..open] {
            "h" => SymbolKind::H,
            "h~" => SymbolKind::HTilde,
            "x+" => SymbolKind::XPlus,
            "x-" => SymbolKind::XMinus,
            other => return Err(Error::Malformed(format!("symbol kind {:?}", other))),
        };
        let body = s[open + 1..]
            .strip_suffix(']')
            .ok_or_else(|| Error::Malformed(format!("symbol {:?}", s)))?;
        let (node, level) = body
            .split_once(',')
            .ok_or_else(|| Error::Malformed(format!("symbol {:?}", s)))?;
        let node: u8 = node.trim().parse().map_err(|_| Error::Malformed(format!("node in {:?}", s)))?;
        let level: u8 = level.trim().parse().map_err(|_| Error::Malformed(format!("level in {:?}", s)))?;
        Ok(GeneratorSymbol { kind, node, level, parity: Parity::Even })
    }
}
