//! Bracket expressions and their expansion into associative words.

use std::fmt;

use num_traits::One;

use crate::coeff::{fmt_q, Poly, Q};
use crate::presentations::{GeneratorSymbol, SymbolKind};
use crate::rewrite::element::{FreeElement, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Sym(GeneratorSymbol),
    Scalar(Poly),
    Sum(Vec<Expr>),
    Prod(Vec<Expr>),
    Scale(Poly, Box<Expr>),
    Bracket(Box<Expr>, Box<Expr>),
    Anti(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn sym(s: GeneratorSymbol) -> Expr {
        Expr::Sym(s)
    }

    pub fn zero() -> Expr {
        Expr::Sum(vec![])
    }

    pub fn bracket(a: Expr, b: Expr) -> Expr {
        Expr::Bracket(Box::new(a), Box::new(b))
    }

    pub fn anti(a: Expr, b: Expr) -> Expr {
        Expr::Anti(Box::new(a), Box::new(b))
    }

    pub fn scale(c: Poly, e: Expr) -> Expr {
        Expr::Scale(c, Box::new(e))
    }

    pub fn scale_q(c: Q, e: Expr) -> Expr {
        Expr::Scale(Poly::constant(c), Box::new(e))
    }

    pub fn neg(e: Expr) -> Expr {
        Expr::scale_q(-Q::one(), e)
    }

    pub fn sum(parts: Vec<Expr>) -> Expr {
        Expr::Sum(parts)
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::Sum(vec![a, Expr::neg(b)])
    }

    /// `ad(a)^k(b)`
    pub fn ad_power(a: &Expr, k: usize, b: Expr) -> Expr {
        (0..k).fold(b, |acc, _| Expr::bracket(a.clone(), acc))
    }

    pub fn symbols(&self, out: &mut Vec<GeneratorSymbol>) {
        match self {
            Expr::Sym(s) => out.push(*s),
            Expr::Scalar(_) => {}
            Expr::Sum(v) | Expr::Prod(v) => v.iter().for_each(|e| e.symbols(out)),
            Expr::Scale(_, e) => e.symbols(out),
            Expr::Bracket(a, b) | Expr::Anti(a, b) => {
                a.symbols(out);
                b.symbols(out);
            }
        }
    }
}

/// Definition of the defined symbols `h~_{i,1}` and `h~_{i,2}` in terms of `h`.
pub fn htilde_definition(node: usize, level: usize) -> FreeElement {
    let h0 = FreeElement::symbol(GeneratorSymbol::h(node, 0));
    let h1 = FreeElement::symbol(GeneratorSymbol::h(node, 1));
    match level {
        0 => h0,
        1 => h1.sub(&h0.mul(&h0).scale(&Poly::monomial(1, Q::new(1, 2)))),
        2 => {
            let h2 = FreeElement::symbol(GeneratorSymbol::h(node, 2));
            let cube = h0.mul(&h0).mul(&h0);
            h2.sub(&h0.mul(&h1)).add(&cube.scale_q(&Q::new(1, 3)))
        }
        _ => panic!("h~ is defined only at levels 1 and 2"),
    }
}

/// Fully associative expansion.
pub fn expand(e: &Expr) -> FreeElement {
    match e {
        Expr::Sym(s) if s.kind == SymbolKind::HTilde => htilde_definition(s.node(), s.level()),
        Expr::Sym(s) => FreeElement::symbol(*s),
        Expr::Scalar(c) => FreeElement::term(Word::empty(), c.clone()),
        Expr::Sum(v) => v.iter().fold(FreeElement::zero(), |acc, x| acc.add(&expand(x))),
        Expr::Prod(v) => v.iter().fold(FreeElement::one(), |acc, x| acc.mul(&expand(x))),
        Expr::Scale(c, x) => expand(x).scale(c),
        Expr::Bracket(a, b) => expand(a).bracket(&expand(b)),
        Expr::Anti(a, b) => expand(a).anti(&expand(b)),
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Sym(s) => write!(f, "{}", s),
            Expr::Scalar(c) => write!(f, "({})", c),
            Expr::Sum(v) if v.is_empty() => write!(f, "0"),
            Expr::Sum(v) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "({})", parts.join(" + "))
            }
            Expr::Prod(v) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "{}", parts.join(" "))
            }
            Expr::Scale(c, x) => match c.as_unit() {
                Some(u) if u == -Q::one() => write!(f, "-{}", x),
                Some(u) => write!(f, "{}*{}", fmt_q(&u), x),
                None => write!(f, "({})*{}", c, x),
            },
            Expr::Bracket(a, b) => write!(f, "[{}, {}]", a, b),
            Expr::Anti(a, b) => write!(f, "{{{}, {}}}", a, b),
        }
    }
}
