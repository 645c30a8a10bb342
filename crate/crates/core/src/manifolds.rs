//! Closed-manifold descriptors and their mod-2 cohomology models.
//!
//! Real and complex projective spaces, Dold manifolds and products of these
//! are modeled intrinsically by a truncated polynomial ring with a top
//! monomial dual to the fundamental class. Milnor manifolds `H(m,n)` are
//! never modeled intrinsically: their Stiefel-Whitney classes are computed
//! in the ambient ring of `RP^m x RP^n` and evaluated against `(a+b)`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gf2ring::{GeneratorSpec, Gf2Poly, Monomial, RingPresentation};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ManifoldKind {
    RealProj(u32),
    CplxProj(u32),
    Dold(u32, u32),
    /// Stored with `m <= n`.
    Milnor(u32, u32),
    /// At least two factors, none of them Milnor or Product.
    Product(Vec<ManifoldExpr>),
}

/// A validated manifold descriptor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ManifoldExpr(ManifoldKind);

impl ManifoldExpr {
    pub fn real_proj(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidManifold("RP(n) needs n >= 1".into()));
        }
        Ok(Self(ManifoldKind::RealProj(n)))
    }

    pub fn cplx_proj(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidManifold("CP(n) needs n >= 1".into()));
        }
        Ok(Self(ManifoldKind::CplxProj(n)))
    }

    pub fn dold(m: u32, n: u32) -> Self {
        Self(ManifoldKind::Dold(m, n))
    }

    /// `H(m,n)`, normalized so that the first parameter is the smaller one.
    pub fn milnor(m: u32, n: u32) -> Result<Self> {
        if m == 0 && n == 0 {
            return Err(Error::InvalidManifold("H(0,0) has dimension -1".into()));
        }
        Ok(Self(ManifoldKind::Milnor(m.min(n), m.max(n))))
    }

    /// Product of the given factors. Nested products are flattened; a single
    /// factor is returned unchanged.
    pub fn product(mut factors: Vec<ManifoldExpr>) -> Result<Self> {
        if factors.len() == 1 {
            return Ok(factors.pop().unwrap());
        }
        let mut flat = Vec::with_capacity(factors.len());
        for f in factors {
            match f.0 {
                ManifoldKind::Milnor(..) => {
                    return Err(Error::InvalidManifold(
                        "Milnor manifolds cannot appear as product factors".into(),
                    ))
                }
                ManifoldKind::Product(inner) => flat.extend(inner),
                _ => flat.push(f),
            }
        }
        match flat.len() {
            0 => Err(Error::InvalidManifold("empty product".into())),
            1 => Ok(flat.pop().unwrap()),
            _ => Ok(Self(ManifoldKind::Product(flat))),
        }
    }

    pub fn kind(&self) -> &ManifoldKind {
        &self.0
    }

    pub fn is_milnor(&self) -> bool {
        matches!(self.0, ManifoldKind::Milnor(..))
    }

    pub fn dimension(&self) -> u32 {
        match &self.0 {
            ManifoldKind::RealProj(n) => *n,
            ManifoldKind::CplxProj(n) => 2 * n,
            ManifoldKind::Dold(m, n) => m + 2 * n,
            ManifoldKind::Milnor(m, n) => m + n - 1,
            ManifoldKind::Product(fs) => fs.iter().map(ManifoldExpr::dimension).sum(),
        }
    }

    pub fn cohomology_model(&self) -> CohomologyModel {
        let dim = self.dimension();
        match &self.0 {
            ManifoldKind::Milnor(m, n) => {
                let gens = vec![gen("a", 1, m + 1), gen("b", 1, n + 1)];
                CohomologyModel {
                    ring: RingPresentation::new(gens, m + n).expect("Milnor ambient ring"),
                    pairing: PairingRule::MilnorAmbient { m: *m, n: *n },
                }
            }
            ManifoldKind::Product(fs) => {
                let mut gens = Vec::new();
                let mut top = Vec::new();
                for (k, f) in fs.iter().enumerate() {
                    let (fg, ft) = f.factor_presentation();
                    gens.extend(fg.into_iter().map(|mut g| {
                        g.name = format!("{}{}", g.name, k + 1);
                        g
                    }));
                    top.extend(ft);
                }
                CohomologyModel {
                    ring: RingPresentation::new(gens, dim).expect("product ring"),
                    pairing: PairingRule::TopMonomial(Monomial::new(top)),
                }
            }
            _ => {
                let (gens, top) = self.factor_presentation();
                CohomologyModel {
                    ring: RingPresentation::new(gens, dim).expect("factor ring"),
                    pairing: PairingRule::TopMonomial(Monomial::new(top)),
                }
            }
        }
    }

    /// Generators and top exponents of a non-Milnor, non-product manifold.
    fn factor_presentation(&self) -> (Vec<GeneratorSpec>, Vec<u32>) {
        match &self.0 {
            ManifoldKind::RealProj(n) => (vec![gen("u", 1, n + 1)], vec![*n]),
            ManifoldKind::CplxProj(n) => (vec![gen("v", 2, n + 1)], vec![*n]),
            ManifoldKind::Dold(m, n) => {
                (vec![gen("c", 1, m + 1), gen("d", 2, n + 1)], vec![*m, *n])
            }
            _ => unreachable!("only called on projective spaces and Dold manifolds"),
        }
    }

    /// Total Stiefel-Whitney class in the ring of [`Self::cohomology_model`].
    pub fn total_sw_class(&self) -> Gf2Poly {
        let model = self.cohomology_model();
        self.total_sw_class_in(&model.ring)
    }

    fn total_sw_class_in(&self, ring: &Arc<RingPresentation>) -> Gf2Poly {
        let one = Gf2Poly::one(ring);
        let g = |i| Gf2Poly::generator(ring, i).expect("generator index");
        match &self.0 {
            ManifoldKind::RealProj(n) | ManifoldKind::CplxProj(n) => {
                (&one + &g(0)).pow(u64::from(*n) + 1)
            }
            ManifoldKind::Dold(m, n) => {
                let (c, d) = (g(0), g(1));
                let one_c = &one + &c;
                &one_c.pow(u64::from(*m)) * &(&one_c + &d).pow(u64::from(*n) + 1)
            }
            ManifoldKind::Milnor(m, n) => {
                let (a, b) = (g(0), g(1));
                let numerator =
                    &(&one + &a).pow(u64::from(*m) + 1) * &(&one + &b).pow(u64::from(*n) + 1);
                let denominator = &(&one + &a) + &b;
                &numerator * &denominator.inverse_unit().expect("1+a+b is a unit")
            }
            ManifoldKind::Product(fs) => {
                let mut slot = 0;
                let mut acc = one;
                for f in fs {
                    let factor = f.total_sw_class();
                    let arity = factor.ring().arity();
                    let embedded = factor.embed_into(ring, slot).expect("product layout");
                    acc = &acc * &embedded;
                    slot += arity;
                }
                acc
            }
        }
    }

    /// Degree-`i` part of the total Stiefel-Whitney class.
    pub fn sw_graded(&self, i: u32) -> Gf2Poly {
        self.total_sw_class().graded_component(i)
    }

    /// Evaluate a cohomology class of the model against the fundamental class.
    pub fn evaluate_pairing(&self, x: &Gf2Poly) -> Result<bool> {
        self.cohomology_model().evaluate(x)
    }

    /// Euler characteristic mod 2, from the fibrations `H(m,n) -> RP^m` with
    /// fibre `RP^(n-1)` and `P(m,n) -> RP^m` with fibre `CP^n`.
    pub fn euler_mod2(&self) -> bool {
        let rp = |k: u32| k.is_multiple_of(2);
        let cp = |s: u32| s.is_multiple_of(2);
        match &self.0 {
            ManifoldKind::RealProj(n) => rp(*n),
            ManifoldKind::CplxProj(n) => cp(*n),
            ManifoldKind::Dold(m, n) => rp(*m) && cp(*n),
            ManifoldKind::Milnor(m, n) => rp(*m) && rp(n - 1),
            ManifoldKind::Product(fs) => fs.iter().all(ManifoldExpr::euler_mod2),
        }
    }
}

fn gen(name: &str, degree: u32, truncation: u32) -> GeneratorSpec {
    GeneratorSpec::new(name, degree, truncation).expect("positive degree and truncation")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PairingRule {
    /// Coefficient of the monomial dual to the fundamental class.
    TopMonomial(Monomial),
    /// Coefficient of `a^m b^n` in `(a+b) x`, for `H(m,n)` inside `RP^m x RP^n`.
    MilnorAmbient { m: u32, n: u32 },
}

#[derive(Debug, Clone)]
pub struct CohomologyModel {
    pub ring: Arc<RingPresentation>,
    pub pairing: PairingRule,
}

impl CohomologyModel {
    pub fn evaluate(&self, x: &Gf2Poly) -> Result<bool> {
        if **x.ring() != *self.ring {
            return Err(Error::RingMismatch);
        }
        match &self.pairing {
            PairingRule::TopMonomial(top) => x.coefficient(top),
            PairingRule::MilnorAmbient { m, n } => {
                // (a+b)x has a^m b^n coefficient [a^(m-1) b^n] + [a^m b^(n-1)]
                let mut bit = false;
                if *n >= 1 {
                    bit ^= x.coefficient(&Monomial::new(vec![*m, n - 1]))?;
                }
                if *m >= 1 {
                    bit ^= x.coefficient(&Monomial::new(vec![m - 1, *n]))?;
                }
                Ok(bit)
            }
        }
    }
}

impl fmt::Display for ManifoldExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            ManifoldKind::RealProj(n) => write!(f, "RP({n})"),
            ManifoldKind::CplxProj(n) => write!(f, "CP({n})"),
            ManifoldKind::Dold(m, n) => write!(f, "P({m},{n})"),
            ManifoldKind::Milnor(m, n) => write!(f, "H({m},{n})"),
            ManifoldKind::Product(fs) => {
                for (i, factor) in fs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" X ")?;
                    }
                    write!(f, "{factor}")?;
                }
                Ok(())
            }
        }
    }
}

impl Serialize for ManifoldExpr {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ManifoldExpr {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    Number(u32),
    LParen,
    RParen,
    Comma,
}

const KEYWORDS: [&str; 6] = ["RP", "CP", "P", "H", "X", "x"];

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    /// Next token with its byte offset; `None` at end of input.
    fn next(&mut self) -> Result<Option<(usize, Token)>> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let Some(ch) = rest.chars().next() else {
            return Ok(None);
        };
        let token = match ch {
            '(' => Token::LParen,
            ')' => Token::RParen,
            ',' => Token::Comma,
            c if c.is_ascii_digit() => {
                let len = rest
                    .find(|c: char| !c.is_ascii_digit())
                    .unwrap_or(rest.len());
                let text = &rest[..len];
                self.pos += len;
                let n = text
                    .parse()
                    .map_err(|_| parse_error(start, text, "number out of range"))?;
                return Ok(Some((start, Token::Number(n))));
            }
            c if c.is_ascii_alphabetic() => {
                // keywords may abut each other, as in `RP(2)XRP(2)`
                if let Some(kw) = KEYWORDS.iter().find(|kw| rest.starts_with(*kw)) {
                    self.pos += kw.len();
                    return Ok(Some((start, Token::Ident(kw.to_string()))));
                }
                let len = rest
                    .find(|c: char| !c.is_ascii_alphabetic())
                    .unwrap_or(rest.len());
                return Err(parse_error(
                    start,
                    &rest[..len],
                    "expected RP, CP, P, H or X",
                ));
            }
            other => {
                return Err(parse_error(
                    start,
                    &other.to_string(),
                    "unexpected character",
                ))
            }
        };
        self.pos += ch.len_utf8();
        Ok(Some((start, token)))
    }
}

fn parse_error(position: usize, token: &str, message: &str) -> Error {
    Error::Parse {
        position,
        token: token.to_string(),
        message: message.to_string(),
    }
}

fn token_text(t: &Token) -> String {
    match t {
        Token::Ident(s) => s.clone(),
        Token::Number(n) => n.to_string(),
        Token::LParen => "(".into(),
        Token::RParen => ")".into(),
        Token::Comma => ",".into(),
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    peeked: Option<Option<(usize, Token)>>,
}

impl<'a> Parser<'a> {
    fn peek(&mut self) -> Result<Option<&(usize, Token)>> {
        if self.peeked.is_none() {
            self.peeked = Some(self.lexer.next()?);
        }
        Ok(self.peeked.as_ref().unwrap().as_ref())
    }

    fn bump(&mut self) -> Result<Option<(usize, Token)>> {
        match self.peeked.take() {
            Some(t) => Ok(t),
            None => self.lexer.next(),
        }
    }

    fn end(&self) -> usize {
        self.lexer.src.len()
    }

    fn expect(&mut self, want: Token, what: &str) -> Result<()> {
        match self.bump()? {
            Some((_, t)) if t == want => Ok(()),
            Some((pos, t)) => Err(parse_error(
                pos,
                &token_text(&t),
                &format!("expected {what}"),
            )),
            None => Err(parse_error(
                self.end(),
                "<end>",
                &format!("expected {what}"),
            )),
        }
    }

    fn number(&mut self) -> Result<(usize, u32)> {
        match self.bump()? {
            Some((pos, Token::Number(n))) => Ok((pos, n)),
            Some((pos, t)) => Err(parse_error(pos, &token_text(&t), "expected a number")),
            None => Err(parse_error(self.end(), "<end>", "expected a number")),
        }
    }

    fn factor(&mut self) -> Result<ManifoldExpr> {
        let (pos, name) = match self.bump()? {
            Some((pos, Token::Ident(name))) => (pos, name),
            Some((pos, t)) => {
                return Err(parse_error(pos, &token_text(&t), "expected RP, CP, P or H"))
            }
            None => return Err(parse_error(self.end(), "<end>", "expected a manifold")),
        };
        let arity = match name.as_str() {
            "RP" | "CP" => 1,
            "P" | "H" => 2,
            _ => return Err(parse_error(pos, &name, "expected RP, CP, P or H")),
        };
        self.expect(Token::LParen, "`(`")?;
        let (first_pos, first) = self.number()?;
        let second = if arity == 2 {
            self.expect(Token::Comma, "`,`")?;
            Some(self.number()?.1)
        } else {
            None
        };
        self.expect(Token::RParen, "`)`")?;
        let invalid = |e: Error| match e {
            Error::InvalidManifold(msg) => parse_error(first_pos, &first.to_string(), &msg),
            other => other,
        };
        match (name.as_str(), second) {
            ("RP", None) => ManifoldExpr::real_proj(first).map_err(invalid),
            ("CP", None) => ManifoldExpr::cplx_proj(first).map_err(invalid),
            ("P", Some(n)) => Ok(ManifoldExpr::dold(first, n)),
            ("H", Some(n)) => ManifoldExpr::milnor(first, n).map_err(invalid),
            _ => unreachable!(),
        }
    }

    fn manifold(&mut self) -> Result<ManifoldExpr> {
        let mut factors = vec![self.factor()?];
        loop {
            match self.bump()? {
                None => break,
                Some((_, Token::Ident(x))) if x == "X" || x == "x" => {
                    let end = self.end();
                    let pos = self.peek()?.map_or(end, |(p, _)| *p);
                    let f = self.factor()?;
                    if f.is_milnor() {
                        return Err(parse_error(
                            pos,
                            &f.to_string(),
                            "Milnor manifolds cannot appear as product factors",
                        ));
                    }
                    factors.push(f);
                }
                Some((pos, t)) => {
                    return Err(parse_error(
                        pos,
                        &token_text(&t),
                        "expected `X` or end of input",
                    ))
                }
            }
        }
        if factors.len() > 1 && factors[0].is_milnor() {
            return Err(parse_error(
                0,
                &factors[0].to_string(),
                "Milnor manifolds cannot appear as product factors",
            ));
        }
        ManifoldExpr::product(factors)
    }
}

impl FromStr for ManifoldExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Parser {
            lexer: Lexer { src: s, pos: 0 },
            peeked: None,
        }
        .manifold()
    }
}
