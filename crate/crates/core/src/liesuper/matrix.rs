//! Loop-algebra super matrices `Σ_s A_s ⊗ t^s + κ·c` over the canonical basis
//! `ε_1..ε_m, δ_1..δ_n` (the δ's are odd).

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::coeff::{fmt_q, Q};
use crate::rootspace::Parity;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperMatrix {
    pub m: usize,
    pub size: usize,
    pub blocks: BTreeMap<i64, Vec<Q>>,
    pub central: Q,
}

impl SuperMatrix {
    pub fn zero(m: usize, size: usize) -> Self {
        SuperMatrix { m, size, blocks: BTreeMap::new(), central: Q::zero() }
    }

    /// `coeff · E_{ab} ⊗ t^deg`
    pub fn unit(m: usize, size: usize, a: usize, b: usize, deg: i64, coeff: Q) -> Self {
        let mut out = SuperMatrix::zero(m, size);
        out.add_entry(deg, a, b, coeff);
        out
    }

    pub fn central(m: usize, size: usize, k: Q) -> Self {
        let mut out = SuperMatrix::zero(m, size);
        out.central = k;
        out
    }

    pub fn basis_parity(&self, a: usize) -> Parity {
        Parity::from_bit(a >= self.m)
    }

    pub fn entry_parity(&self, a: usize, b: usize) -> Parity {
        self.basis_parity(a).plus(self.basis_parity(b))
    }

    pub fn get(&self, deg: i64, a: usize, b: usize) -> Q {
        self.blocks.get(&deg).map(|blk| blk[a * self.size + b]).unwrap_or_else(Q::zero)
    }

    pub fn add_entry(&mut self, deg: i64, a: usize, b: usize, c: Q) {
        if c.is_zero() {
            return;
        }
        let size = self.size;
        let blk = self.blocks.entry(deg).or_insert_with(|| vec![Q::zero(); size * size]);
        blk[a * size + b] += c;
        if blk.iter().all(|x| x.is_zero()) {
            self.blocks.remove(&deg);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty() && self.central.is_zero()
    }

    pub fn max_degree(&self) -> i64 {
        self.blocks.keys().map(|k| k.abs()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &SuperMatrix) -> SuperMatrix {
        self.add_scaled(other, &Q::one())
    }

    pub fn sub(&self, other: &SuperMatrix) -> SuperMatrix {
        self.add_scaled(other, &-Q::one())
    }

    pub fn add_scaled(&self, other: &SuperMatrix, c: &Q) -> SuperMatrix {
        let mut out = self.clone();
        for (deg, blk) in &other.blocks {
            for (idx, x) in blk.iter().enumerate() {
                if !x.is_zero() {
                    out.add_entry(*deg, idx / self.size, idx % self.size, x * c);
                }
            }
        }
        out.central += other.central * c;
        out
    }

    pub fn scale(&self, c: &Q) -> SuperMatrix {
        SuperMatrix::zero(self.m, self.size).add_scaled(self, c)
    }

    /// Part of the matrix with entries of the given parity (the central term is even).
    pub fn graded_part(&self, p: Parity) -> SuperMatrix {
        let mut out = SuperMatrix::zero(self.m, self.size);
        for (deg, blk) in &self.blocks {
            for (idx, x) in blk.iter().enumerate() {
                let (a, b) = (idx / self.size, idx % self.size);
                if self.entry_parity(a, b) == p {
                    out.add_entry(*deg, a, b, *x);
                }
            }
        }
        if p == Parity::Even {
            out.central = self.central;
        }
        out
    }

    /// Parity if the matrix is homogeneous (zero counts as even).
    pub fn parity(&self) -> Option<Parity> {
        let even = !self.graded_part(Parity::Even).is_zero();
        let odd = !self.graded_part(Parity::Odd).is_zero();
        match (even, odd) {
            (true, true) => None,
            (false, true) => Some(Parity::Odd),
            _ => Some(Parity::Even),
        }
    }

    /// Loop product (no central contribution).
    pub fn mul(&self, other: &SuperMatrix) -> SuperMatrix {
        let n = self.size;
        let mut out = SuperMatrix::zero(self.m, n);
        for (s, x) in &self.blocks {
            for (u, y) in &other.blocks {
                let mut prod = vec![Q::zero(); n * n];
                for a in 0..n {
                    for k in 0..n {
                        let xa = x[a * n + k];
                        if xa.is_zero() {
                            continue;
                        }
                        for b in 0..n {
                            let yb = y[k * n + b];
                            if !yb.is_zero() {
                                prod[a * n + b] += xa * yb;
                            }
                        }
                    }
                }
                for (idx, v) in prod.into_iter().enumerate() {
                    if !v.is_zero() {
                        out.add_entry(s + u, idx / n, idx % n, v);
                    }
                }
            }
        }
        out
    }

    pub fn supertrace_of_block(&self, deg: i64) -> Q {
        let mut acc = Q::zero();
        if let Some(blk) = self.blocks.get(&deg) {
            for a in 0..self.size {
                let x = blk[a * self.size + a];
                acc += if self.basis_parity(a).is_odd() { -x } else { x };
            }
        }
        acc
    }

    /// `Σ_s s · str(A_s B_{−s})`
    pub fn cocycle(&self, other: &SuperMatrix) -> Q {
        let mut acc = Q::zero();
        for s in self.blocks.keys() {
            if *s == 0 || !other.blocks.contains_key(&-s) {
                continue;
            }
            let mut a = SuperMatrix::zero(self.m, self.size);
            a.blocks.insert(*s, self.blocks[s].clone());
            let mut b = SuperMatrix::zero(self.m, self.size);
            b.blocks.insert(-s, other.blocks[&-s].clone());
            acc += Q::from_integer(*s as i128) * a.mul(&b).supertrace_of_block(0);
        }
        acc
    }

    /// Degree operator `t d/dt` plus `ad(H)` for a diagonal `H` given per basis index.
    pub fn apply_derivation(&self, diag: &[Q]) -> SuperMatrix {
        let mut out = SuperMatrix::zero(self.m, self.size);
        for (deg, blk) in &self.blocks {
            for (idx, x) in blk.iter().enumerate() {
                let (a, b) = (idx / self.size, idx % self.size);
                let w = Q::from_integer(*deg as i128) + diag[a] - diag[b];
                out.add_entry(*deg, a, b, x * w);
            }
        }
        out
    }
}

/// Super bracket with the loop cocycle: `[A,B] = AB − (−1)^{|A||B|} BA + Σ_s s·str(A_s B_{−s}) c`.
pub fn sbracket(a: &SuperMatrix, b: &SuperMatrix) -> SuperMatrix {
    let mut out = SuperMatrix::zero(a.m, a.size);
    for pa in [Parity::Even, Parity::Odd] {
        let ap = a.graded_part(pa);
        if ap.blocks.is_empty() {
            continue;
        }
        for pb in [Parity::Even, Parity::Odd] {
            let bp = b.graded_part(pb);
            if bp.blocks.is_empty() {
                continue;
            }
            let sign = if pa.is_odd() && pb.is_odd() { Q::one() } else { -Q::one() };
            out = out.add(&ap.mul(&bp)).add_scaled(&bp.mul(&ap), &sign);
        }
    }
    out.central += a.cocycle(b);
    out
}

impl fmt::Display for SuperMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (deg, blk) in &self.blocks {
            for (idx, x) in blk.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let t = match deg {
                    0 => String::new(),
                    1 => "t".to_string(),
                    d => format!("t^{}", d),
                };
                parts.push(format!("{}*E{}{}{}", fmt_q(x), idx / self.size + 1, idx % self.size + 1, t));
            }
        }
        if !self.central.is_zero() {
            parts.push(format!("{}*c", fmt_q(&self.central)));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}
