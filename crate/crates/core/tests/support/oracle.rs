//! Naive reference for Stiefel-Whitney numbers: every class is expanded as
//! a dense integer-coefficient array in two variables and reduced mod 2
//! only when a number is read off. Integers wrap modulo 2^64, which is
//! exact modulo 2.
//!
//! Shares nothing with the library except the descriptor type.

use bordism_core::{ManifoldExpr, ManifoldKind};

#[derive(Clone, Debug)]
struct Dense {
    /// (degree, truncation) for x and y.
    x: (u32, usize),
    y: (u32, usize),
    coeffs: Vec<Vec<u64>>,
}

impl Dense {
    fn zero(x: (u32, usize), y: (u32, usize)) -> Self {
        Self {
            x,
            y,
            coeffs: vec![vec![0; y.1]; x.1],
        }
    }

    fn constant(x: (u32, usize), y: (u32, usize), c: u64) -> Self {
        let mut p = Self::zero(x, y);
        p.set(0, 0, c);
        p
    }

    fn set(&mut self, i: usize, j: usize, c: u64) {
        if i < self.x.1 && j < self.y.1 {
            self.coeffs[i][j] = c;
        }
    }

    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for i in 0..self.x.1 {
            for j in 0..self.y.1 {
                out.coeffs[i][j] = out.coeffs[i][j].wrapping_add(other.coeffs[i][j]);
            }
        }
        out
    }

    fn scale(&self, c: u64) -> Self {
        let mut out = self.clone();
        for row in &mut out.coeffs {
            for v in row {
                *v = v.wrapping_mul(c);
            }
        }
        out
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.x, self.y);
        for i1 in 0..self.x.1 {
            for j1 in 0..self.y.1 {
                let a = self.coeffs[i1][j1];
                if a == 0 {
                    continue;
                }
                for i2 in 0..self.x.1 - i1 {
                    for j2 in 0..self.y.1 - j1 {
                        let b = other.coeffs[i2][j2];
                        let c = &mut out.coeffs[i1 + i2][j1 + j2];
                        *c = c.wrapping_add(a.wrapping_mul(b));
                    }
                }
            }
        }
        out
    }

    fn power(&self, k: u32) -> Self {
        let mut out = Self::constant(self.x, self.y, 1);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    fn graded(&self, degree: u32) -> Self {
        let mut out = Self::zero(self.x, self.y);
        for i in 0..self.x.1 {
            for j in 0..self.y.1 {
                if i as u32 * self.x.0 + j as u32 * self.y.0 == degree {
                    out.coeffs[i][j] = self.coeffs[i][j];
                }
            }
        }
        out
    }

    fn coeff_mod2(&self, i: usize, j: usize) -> bool {
        i < self.x.1 && j < self.y.1 && self.coeffs[i][j] % 2 == 1
    }
}

enum Pairing {
    Top(usize, usize),
    Milnor(usize, usize),
}

struct Model {
    total: Dense,
    pairing: Pairing,
}

fn one_plus(x: (u32, usize), y: (u32, usize), xc: u64, yc: u64) -> Dense {
    let mut p = Dense::constant(x, y, 1);
    p.set(1, 0, xc);
    p.set(0, 1, yc);
    p
}

fn model(m: &ManifoldExpr) -> Model {
    match m.kind() {
        ManifoldKind::RealProj(n) => {
            let (x, y) = ((1, *n as usize + 1), (1, 1));
            Model {
                total: one_plus(x, y, 1, 0).power(n + 1),
                pairing: Pairing::Top(*n as usize, 0),
            }
        }
        ManifoldKind::CplxProj(n) => {
            let (x, y) = ((2, *n as usize + 1), (1, 1));
            Model {
                total: one_plus(x, y, 1, 0).power(n + 1),
                pairing: Pairing::Top(*n as usize, 0),
            }
        }
        ManifoldKind::Dold(a, b) => {
            let (x, y) = ((1, *a as usize + 1), (2, *b as usize + 1));
            let total = one_plus(x, y, 1, 0)
                .power(*a)
                .mul(&one_plus(x, y, 1, 1).power(b + 1));
            Model {
                total,
                pairing: Pairing::Top(*a as usize, *b as usize),
            }
        }
        ManifoldKind::Milnor(a, b) => {
            let (x, y) = ((1, *a as usize + 1), (1, *b as usize + 1));
            let numerator = one_plus(x, y, 1, 0)
                .power(a + 1)
                .mul(&one_plus(x, y, 0, 1).power(b + 1));
            // 1/(1+a+b) = sum_k (-1)^k (a+b)^k over the integers
            let s = one_plus(x, y, 1, 1).add(&Dense::constant(x, y, 1).scale(u64::MAX));
            let mut inverse = Dense::zero(x, y);
            for k in 0..=(a + b) {
                let sign = if k % 2 == 0 { 1 } else { u64::MAX };
                inverse = inverse.add(&s.power(k).scale(sign));
            }
            Model {
                total: numerator.mul(&inverse),
                pairing: Pairing::Milnor(*a as usize, *b as usize),
            }
        }
        ManifoldKind::Product(fs) => match fs.as_slice() {
            [p, q] => match (p.kind(), q.kind()) {
                (ManifoldKind::RealProj(p), ManifoldKind::RealProj(q)) => {
                    let (x, y) = ((1, *p as usize + 1), (1, *q as usize + 1));
                    let total = one_plus(x, y, 1, 0)
                        .power(p + 1)
                        .mul(&one_plus(x, y, 0, 1).power(q + 1));
                    Model {
                        total,
                        pairing: Pairing::Top(*p as usize, *q as usize),
                    }
                }
                _ => panic!("oracle only handles RP x RP products"),
            },
            _ => panic!("oracle only handles two-factor products"),
        },
    }
}

/// Stiefel-Whitney number for a partition given as a list of parts.
pub fn sw_number(m: &ManifoldExpr, parts: &[u32]) -> bool {
    let model = model(m);
    let x = model.total.x;
    let y = model.total.y;
    let mut product = Dense::constant(x, y, 1);
    for &p in parts {
        product = product.mul(&model.total.graded(p));
    }
    match model.pairing {
        Pairing::Top(i, j) => product.coeff_mod2(i, j),
        Pairing::Milnor(a, b) => {
            let left = b >= 1 && product.coeff_mod2(a, b - 1);
            let right = a >= 1 && product.coeff_mod2(a - 1, b);
            left ^ right
        }
    }
}

/// Whether the oracle supports this descriptor.
pub fn supports(m: &ManifoldExpr) -> bool {
    match m.kind() {
        ManifoldKind::Product(fs) => {
            fs.len() == 2
                && fs
                    .iter()
                    .all(|f| matches!(f.kind(), ManifoldKind::RealProj(_)))
        }
        _ => true,
    }
}

/// Partitions of `d` in descending lexicographic order, by brute force.
pub fn partitions(d: u32) -> Vec<Vec<u32>> {
    fn rec(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=rem.min(max)).rev() {
            cur.push(k);
            rec(rem - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, d, &mut Vec::new(), &mut out);
    out
}
