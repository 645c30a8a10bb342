//! Truncated polynomial rings `Z_2[x_1,...,x_r]/(x_1^{T_1},...,x_r^{T_r})`
//! with graded generators and a global degree cap.
//!
//! Elements are stored as dense bitsets over the box of admissible exponent
//! vectors. The box is laid out in mixed radix with the first generator
//! most significant, so bit order is the lexicographic monomial order and
//! multiplying two monomials is adding their indices (when no exponent
//! overflows).

use std::fmt;
use std::ops::{Add, Mul};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Upper bound on the number of cells in the exponent box.
const MAX_RING_CELLS: u128 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneratorSpec {
    pub name: String,
    /// Cohomological degree.
    pub degree: u32,
    /// `T` in the relation `x^T = 0`.
    pub truncation: u32,
}

impl GeneratorSpec {
    pub fn new(name: impl Into<String>, degree: u32, truncation: u32) -> Result<Self> {
        let name = name.into();
        if degree == 0 || truncation == 0 {
            return Err(Error::InvalidGenerator { name });
        }
        Ok(Self {
            name,
            degree,
            truncation,
        })
    }
}

/// Exponent vector aligned with a ring's generator list.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub exponents: Vec<u32>,
}

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Self { exponents }
    }

    pub fn unit(arity: usize) -> Self {
        Self {
            exponents: vec![0; arity],
        }
    }
}

impl From<Vec<u32>> for Monomial {
    fn from(exponents: Vec<u32>) -> Self {
        Self { exponents }
    }
}

#[derive(Debug)]
pub struct RingPresentation {
    generators: Vec<GeneratorSpec>,
    degree_cap: u32,
    /// Effective exponent bound per generator: `min(T, cap / deg + 1)`.
    radix: Vec<u32>,
    strides: Vec<usize>,
    /// Row-major `cells x generators` table of exponents.
    digits: Vec<u32>,
    degrees: Vec<u32>,
}

impl PartialEq for RingPresentation {
    fn eq(&self, other: &Self) -> bool {
        self.degree_cap == other.degree_cap && self.generators == other.generators
    }
}

impl Eq for RingPresentation {}

impl RingPresentation {
    pub fn new(generators: Vec<GeneratorSpec>, degree_cap: u32) -> Result<Arc<Self>> {
        for (i, g) in generators.iter().enumerate() {
            if g.degree == 0 || g.truncation == 0 {
                return Err(Error::InvalidGenerator {
                    name: g.name.clone(),
                });
            }
            if generators[..i].iter().any(|h| h.name == g.name) {
                return Err(Error::DuplicateGenerator(g.name.clone()));
            }
        }

        let radix: Vec<u32> = generators
            .iter()
            .map(|g| g.truncation.min(degree_cap / g.degree + 1))
            .collect();
        let cells: u128 = radix.iter().map(|&r| r as u128).product();
        if cells > MAX_RING_CELLS {
            return Err(Error::RingTooLarge(cells));
        }
        let cells = cells as usize;

        let mut strides = vec![1usize; generators.len()];
        for g in (0..generators.len().saturating_sub(1)).rev() {
            strides[g] = strides[g + 1] * radix[g + 1] as usize;
        }

        let arity = generators.len();
        let mut digits = vec![0u32; cells * arity];
        let mut degrees = vec![0u32; cells];
        for idx in 0..cells {
            let mut deg = 0;
            for g in 0..arity {
                let e = ((idx / strides[g]) % radix[g] as usize) as u32;
                digits[idx * arity + g] = e;
                deg += e * generators[g].degree;
            }
            degrees[idx] = deg;
        }

        Ok(Arc::new(Self {
            generators,
            degree_cap,
            radix,
            strides,
            digits,
            degrees,
        }))
    }

    /// A ring whose cap never truncates anything the relations allow.
    pub fn uncapped(generators: Vec<GeneratorSpec>) -> Result<Arc<Self>> {
        let cap = generators
            .iter()
            .map(|g| g.degree.saturating_mul(g.truncation.saturating_sub(1)))
            .fold(0u32, u32::saturating_add);
        Self::new(generators, cap)
    }

    pub fn generators(&self) -> &[GeneratorSpec] {
        &self.generators
    }

    pub fn degree_cap(&self) -> u32 {
        self.degree_cap
    }

    pub fn arity(&self) -> usize {
        self.generators.len()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    fn cells(&self) -> usize {
        self.degrees.len()
    }

    fn words(&self) -> usize {
        self.cells().div_ceil(64)
    }

    fn exponents_at(&self, idx: usize) -> &[u32] {
        let n = self.arity();
        &self.digits[idx * n..(idx + 1) * n]
    }

    /// Bit index of a monomial, or `None` when the monomial is zero in the ring.
    fn index_of(&self, m: &Monomial) -> Result<Option<usize>> {
        if m.exponents.len() != self.arity() {
            return Err(Error::MonomialArity {
                expected: self.arity(),
                got: m.exponents.len(),
            });
        }
        let mut idx = 0;
        let mut deg = 0u64;
        for (g, &e) in m.exponents.iter().enumerate() {
            if e >= self.radix[g] {
                return Ok(None);
            }
            idx += e as usize * self.strides[g];
            deg += e as u64 * self.generators[g].degree as u64;
        }
        Ok((deg <= self.degree_cap as u64).then_some(idx))
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        let factors: Vec<String> = self
            .generators
            .iter()
            .zip(&m.exponents)
            .filter(|(_, &e)| e > 0)
            .map(|(g, &e)| {
                if e == 1 {
                    g.name.clone()
                } else {
                    format!("{}^{}", g.name, e)
                }
            })
            .collect();
        if factors.is_empty() {
            "1".to_string()
        } else {
            factors.join("*")
        }
    }
}

impl fmt::Display for RingPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.generators.iter().map(|g| g.name.as_str()).collect();
        let rels: Vec<String> = self
            .generators
            .iter()
            .map(|g| format!("{}^{}", g.name, g.truncation))
            .collect();
        let degs: Vec<String> = self
            .generators
            .iter()
            .map(|g| format!("|{}|={}", g.name, g.degree))
            .collect();
        write!(
            f,
            "Z2[{}]/({}) with {}, degree <= {}",
            names.join(","),
            rels.join(","),
            degs.join(" "),
            self.degree_cap
        )
    }
}

/// An element of a [`RingPresentation`]: a set of monomials, each with
/// coefficient 1.
#[derive(Clone)]
pub struct Gf2Poly {
    ring: Arc<RingPresentation>,
    words: Vec<u64>,
}

impl PartialEq for Gf2Poly {
    fn eq(&self, other: &Self) -> bool {
        self.words == other.words && same_ring(&self.ring, &other.ring)
    }
}

impl Eq for Gf2Poly {}

fn same_ring(a: &Arc<RingPresentation>, b: &Arc<RingPresentation>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Gf2Poly {
    pub fn zero(ring: &Arc<RingPresentation>) -> Self {
        Self {
            ring: Arc::clone(ring),
            words: vec![0; ring.words()],
        }
    }

    pub fn one(ring: &Arc<RingPresentation>) -> Self {
        let mut p = Self::zero(ring);
        p.flip(0);
        p
    }

    pub fn monomial(ring: &Arc<RingPresentation>, m: &Monomial) -> Result<Self> {
        let mut p = Self::zero(ring);
        if let Some(idx) = ring.index_of(m)? {
            p.flip(idx);
        }
        Ok(p)
    }

    /// The generator at position `index` (zero if truncated away).
    pub fn generator(ring: &Arc<RingPresentation>, index: usize) -> Result<Self> {
        let mut exps = vec![0; ring.arity()];
        let slot = exps.get_mut(index).ok_or(Error::MonomialArity {
            expected: ring.arity(),
            got: index + 1,
        })?;
        *slot = 1;
        Self::monomial(ring, &Monomial::new(exps))
    }

    /// Sum of the given monomials; repeated monomials cancel in pairs.
    pub fn sum_of<'a>(
        ring: &Arc<RingPresentation>,
        monomials: impl IntoIterator<Item = &'a Monomial>,
    ) -> Result<Self> {
        let mut p = Self::zero(ring);
        for m in monomials {
            if let Some(idx) = ring.index_of(m)? {
                p.flip(idx);
            }
        }
        Ok(p)
    }

    pub fn ring(&self) -> &Arc<RingPresentation> {
        &self.ring
    }

    #[inline]
    fn flip(&mut self, idx: usize) {
        self.words[idx >> 6] ^= 1u64 << (idx & 63);
    }

    #[inline]
    fn bit(&self, idx: usize) -> bool {
        self.words[idx >> 6] >> (idx & 63) & 1 == 1
    }

    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let tz = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(w * 64 + tz)
            })
        })
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_one(&self) -> bool {
        self.bit(0) && self.len() == 1
    }

    pub fn constant_term(&self) -> bool {
        self.bit(0)
    }

    /// Number of monomials.
    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    /// Monomials in lexicographic order of exponent vectors.
    pub fn terms(&self) -> Vec<Monomial> {
        self.ones()
            .map(|i| Monomial::new(self.ring.exponents_at(i).to_vec()))
            .collect()
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a ^ b)
            .collect();
        Ok(Self {
            ring: Arc::clone(&self.ring),
            words,
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        Ok(self.mul_same_ring(other))
    }

    fn mul_same_ring(&self, other: &Self) -> Self {
        let ring = &*self.ring;
        let arity = ring.arity();
        let cap = ring.degree_cap;
        let mut out = Self::zero(&self.ring);
        let rhs: Vec<usize> = other.ones().collect();
        if rhs.is_empty() {
            return out;
        }
        for i in self.ones() {
            let ei = ring.exponents_at(i);
            let di = ring.degrees[i];
            for &j in &rhs {
                if di + ring.degrees[j] > cap {
                    continue;
                }
                let ej = &ring.digits[j * arity..(j + 1) * arity];
                let overflow = (0..arity).any(|g| ei[g] + ej[g] >= ring.radix[g]);
                if !overflow {
                    out.flip(i + j);
                }
            }
        }
        out
    }

    /// `self^k` by repeated squaring; `pow(0)` is 1.
    pub fn pow(&self, mut k: u64) -> Self {
        let mut acc = Self::one(&self.ring);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_same_ring(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul_same_ring(&base);
            }
        }
        acc
    }

    /// Multiplicative inverse of a polynomial with constant term 1, computed
    /// as the geometric series in the nilpotent part `self - 1`.
    pub fn inverse_unit(&self) -> Result<Self> {
        if !self.constant_term() {
            return Err(Error::NotAUnit);
        }
        let mut nilpotent = self.clone();
        nilpotent.flip(0);
        let mut sum = Self::one(&self.ring);
        let mut term = Self::one(&self.ring);
        // every power of the nilpotent part raises the minimal degree by at least 1
        for _ in 0..self.ring.degree_cap {
            term = term.mul_same_ring(&nilpotent);
            if term.is_zero() {
                break;
            }
            for (s, t) in sum.words.iter_mut().zip(&term.words) {
                *s ^= t;
            }
        }
        Ok(sum)
    }

    /// Terms of total degree exactly `degree`.
    pub fn graded_component(&self, degree: u32) -> Self {
        let mut out = Self::zero(&self.ring);
        for i in self.ones().filter(|&i| self.ring.degrees[i] == degree) {
            out.flip(i);
        }
        out
    }

    pub fn coefficient(&self, m: &Monomial) -> Result<bool> {
        Ok(self.ring.index_of(m)?.is_some_and(|idx| self.bit(idx)))
    }

    /// Highest total degree of a term, `None` for zero.
    pub fn max_degree(&self) -> Option<u32> {
        self.ones().map(|i| self.ring.degrees[i]).max()
    }

    /// Re-index into `target`, whose generators `slot..slot + arity` match
    /// this ring's generators in degree and truncation. Terms above the
    /// target's degree cap are dropped.
    pub fn embed_into(&self, target: &Arc<RingPresentation>, slot: usize) -> Result<Self> {
        let source = &*self.ring;
        let incompatible = |reason: String| Error::IncompatibleEmbedding { slot, reason };
        let block = target
            .generators
            .get(slot..slot + source.arity())
            .ok_or_else(|| incompatible("target has too few generators".into()))?;
        for (s, t) in source.generators.iter().zip(block) {
            if s.degree != t.degree || s.truncation != t.truncation {
                return Err(incompatible(format!(
                    "generator `{}` (degree {}, truncation {}) vs `{}` (degree {}, truncation {})",
                    s.name, s.degree, s.truncation, t.name, t.degree, t.truncation
                )));
            }
        }
        let mut out = Self::zero(target);
        let mut exps = vec![0u32; target.arity()];
        for i in self.ones() {
            exps[slot..slot + source.arity()].copy_from_slice(source.exponents_at(i));
            if let Some(idx) = target.index_of(&Monomial::new(exps.clone()))? {
                out.flip(idx);
            }
        }
        Ok(out)
    }
}

/// Free-function form of [`Gf2Poly::embed_into`].
pub fn tensor_embed(p: &Gf2Poly, target: &Arc<RingPresentation>, slot: usize) -> Result<Gf2Poly> {
    p.embed_into(target, slot)
}

impl Add for &Gf2Poly {
    type Output = Gf2Poly;

    /// Panics if the operands live in different rings.
    fn add(self, rhs: &Gf2Poly) -> Gf2Poly {
        Gf2Poly::add(self, rhs).expect("ring mismatch in Gf2Poly addition")
    }
}

impl Mul for &Gf2Poly {
    type Output = Gf2Poly;

    /// Panics if the operands live in different rings.
    fn mul(self, rhs: &Gf2Poly) -> Gf2Poly {
        Gf2Poly::mul(self, rhs).expect("ring mismatch in Gf2Poly multiplication")
    }
}

impl fmt::Display for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .terms()
            .iter()
            .map(|m| self.ring.format_monomial(m))
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

impl fmt::Debug for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Poly({self})")
    }
}

/// `C(r, s) mod 2` by Lucas: odd iff the binary digits of `s` are a subset
/// of those of `r`. Zero when `s < 0` or `s > r`.
pub fn binom_mod2(r: u64, s: i64) -> bool {
    if s < 0 || s as u64 > r {
        return false;
    }
    let s = s as u64;
    r & s == s
}
