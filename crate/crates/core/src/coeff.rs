//! Exact coefficients: rationals and polynomials in the deformation parameter ħ.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

/// Exact rational number. Arithmetic overflow panics (overflow checks are on in every profile).
pub type Q = Ratio<i128>;

pub fn q(n: i128) -> Q {
    Q::from_integer(n)
}

pub fn qf(n: i128, d: i128) -> Q {
    Q::new(n, d)
}

pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Polynomial in ħ with rational coefficients, stored as sorted `(power, coeff)` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: SmallVec<[(u32, Q); 2]>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Poly::monomial(0, c)
    }

    pub fn int(c: i128) -> Self {
        Poly::constant(q(c))
    }

    /// `c·ħ^k`
    pub fn monomial(k: u32, c: Q) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.push((k, c));
        }
        p
    }

    pub fn hbar() -> Self {
        Poly::monomial(1, Q::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &Q)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn coeff(&self, k: u32) -> Q {
        self.terms
            .iter()
            .find(|(p, _)| *p == k)
            .map(|(_, c)| *c)
            .unwrap_or_else(Q::zero)
    }

    /// The nonzero constant this polynomial equals, if it is one.
    pub fn as_unit(&self) -> Option<Q> {
        match self.terms.as_slice() {
            [(0, c)] => Some(*c),
            _ => None,
        }
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.first().map(|t| t.0)
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(k, x)| (*k, x * c)).collect(),
        }
    }

    pub fn add_term(&mut self, k: u32, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.binary_search_by_key(&k, |t| t.0) {
            Ok(pos) => {
                let v = self.terms[pos].1 + c;
                if v.is_zero() {
                    self.terms.remove(pos);
                } else {
                    self.terms[pos].1 = v;
                }
            }
            Err(pos) => self.terms.insert(pos, (k, c)),
        }
    }

    pub fn add_scaled(&mut self, other: &Poly, c: &Q) {
        for (k, x) in other.terms.iter() {
            self.add_term(*k, x * c);
        }
    }

    /// Largest absolute value of any coefficient.
    pub fn max_abs(&self) -> Q {
        self.terms
            .iter()
            .map(|(_, c)| c.abs())
            .max()
            .unwrap_or_else(Q::zero)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_scaled(rhs, &Q::one());
        out
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        self.add_scaled(rhs, &Q::one());
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Q::one());
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Q::one())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (a, x) in self.terms.iter() {
            for (b, y) in rhs.terms.iter() {
                out.add_term(a + b, x * y);
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (k, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if idx > 0 {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            } else if neg {
                write!(f, "-")?;
            }
            let a = c.abs();
            match k {
                0 => write!(f, "{}", fmt_q(&a))?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{}*", fmt_q(&a))?;
                    }
                    if *k == 1 {
                        write!(f, "hbar")?;
                    } else {
                        write!(f, "hbar^{}", k)?;
                    }
                }
            }
        }
        Ok(())
    }
}
