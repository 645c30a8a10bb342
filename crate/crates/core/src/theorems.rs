//! Closed-form bounding criteria, the Milnor/Dold bordism families, and
//! exhaustive checkers that compare them against exact Stiefel-Whitney
//! profiles.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::bordism::{Partition, ProfileCache};
use crate::error::{Error, Result};
use crate::manifolds::ManifoldExpr;

/// 2-adic valuation; zero is divisible by every power of two.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Nu2 {
    Finite(u32),
    Infinite,
}

impl Nu2 {
    /// Whether `2^self > bound`.
    pub fn pow2_exceeds(self, bound: u64) -> bool {
        match self {
            Nu2::Infinite => true,
            Nu2::Finite(v) => v >= 64 || (1u64 << v) > bound,
        }
    }
}

pub fn nu2(x: u64) -> Nu2 {
    if x == 0 {
        Nu2::Infinite
    } else {
        Nu2::Finite(x.trailing_zeros())
    }
}

/// Closed-form criterion for `H(m,n)` (`m <= n`) to bound: `m = n`, or
/// `m = 1`, or `m n` odd, or `n = 2 mod 4` with `m + 1 < 2^nu(n+2)`.
pub fn milnor_bounds_predicate(m: u32, n: u32) -> Result<bool> {
    if m > n {
        return Err(Error::NotNormalized { m, n });
    }
    let (m, n) = (u64::from(m), u64::from(n));
    Ok(m == n || m == 1 || (m * n) % 2 == 1 || (n % 4 == 2 && nu2(n + 2).pow2_exceeds(m + 1)))
}

/// Closed-form criterion for `P(m,n)` to bound: `n` odd, or `n` even, `m`
/// odd, `m > n` and `2^nu(m-n-1) > n`.
pub fn dold_bounds_predicate(m: u32, n: u32) -> bool {
    let (m, n) = (u64::from(m), u64::from(n));
    n % 2 == 1 || (m % 2 == 1 && m > n && nu2(m - n - 1).pow2_exceeds(n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FamilyTag {
    Remark1,
    Prop1,
    Prop2,
    Prop3,
    Prop4,
}

impl FamilyTag {
    pub const ALL: [FamilyTag; 5] = [
        FamilyTag::Remark1,
        FamilyTag::Prop1,
        FamilyTag::Prop2,
        FamilyTag::Prop3,
        FamilyTag::Prop4,
    ];

    /// Whether the partner side is a Dold manifold.
    pub fn has_dold_partner(self) -> bool {
        self != FamilyTag::Prop4
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FamilyTag::Remark1 => "remark1",
            FamilyTag::Prop1 => "prop1",
            FamilyTag::Prop2 => "prop2",
            FamilyTag::Prop3 => "prop3",
            FamilyTag::Prop4 => "prop4",
        };
        f.write_str(s)
    }
}

impl FromStr for FamilyTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyTag::ALL
            .into_iter()
            .find(|t| t.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }
}

/// The instantiation of a family's parameters; unused ones are `None`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize)]
pub struct FamilyParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<u32>,
    #[serde(rename = "B", skip_serializing_if = "Option::is_none")]
    pub b: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
}

impl fmt::Display for FamilyParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fields = [
            ("alpha", self.alpha),
            ("B", self.b),
            ("m", self.m),
            ("n", self.n),
        ];
        let set: Vec<String> = fields
            .iter()
            .filter_map(|(k, v)| v.map(|v| format!("{k}={v}")))
            .collect();
        f.write_str(&set.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyPair {
    pub milnor: ManifoldExpr,
    pub partner: ManifoldExpr,
    pub family_tag: FamilyTag,
    pub parameters: FamilyParams,
}

impl FamilyPair {
    pub fn dim(&self) -> u32 {
        self.milnor.dimension()
    }
}

fn pow2(e: u32) -> Option<u32> {
    1u32.checked_shl(e).filter(|_| e < 31)
}

/// Every instantiation of a family with common dimension `<= dim_cap`,
/// ordered by dimension. Instances with a degenerate side (a point `RP^0`
/// factor, or `H(0,0)`) are skipped.
pub fn enumerate_family_pairs(tag: FamilyTag, dim_cap: u32) -> Vec<FamilyPair> {
    let cap = u64::from(dim_cap);
    let mut out = Vec::new();
    let mut push = |milnor: ManifoldExpr, partner: ManifoldExpr, parameters: FamilyParams| {
        debug_assert_eq!(milnor.dimension(), partner.dimension());
        out.push(FamilyPair {
            milnor,
            partner,
            family_tag: tag,
            parameters,
        });
    };
    let h = |m, n| ManifoldExpr::milnor(m, n).expect("non-degenerate Milnor parameters");

    match tag {
        FamilyTag::Remark1 => {
            for n in 1..=dim_cap + 1 {
                let params = FamilyParams {
                    n: Some(n),
                    ..Default::default()
                };
                push(h(0, n), ManifoldExpr::dold(n - 1, 0), params);
            }
        }
        FamilyTag::Prop1 => {
            // H(2^a - 2, n) ~ P(n - 2^a + 1, 2^a - 2), n >= 2^a - 1
            for alpha in 1.. {
                let Some(p) = pow2(alpha) else { break };
                let m = p - 2;
                if u64::from(m) + u64::from(p - 1) - 1 > cap {
                    break;
                }
                let mut n = p - 1;
                while u64::from(m + n - 1) <= cap {
                    let params = FamilyParams {
                        alpha: Some(alpha),
                        n: Some(n),
                        ..Default::default()
                    };
                    push(h(m, n), ManifoldExpr::dold(n + 1 - p, p - 2), params);
                    n += 1;
                }
            }
        }
        FamilyTag::Prop2 => {
            // H(m, m + 2^a B) ~ P(2^a B - 1, m), 2^a >= m + 1
            for alpha in 0.. {
                let Some(p) = pow2(alpha) else { break };
                if u64::from(p) - 1 > cap {
                    break;
                }
                for m in 0..p {
                    for b in 1.. {
                        let dim = 2 * u64::from(m) + u64::from(p) * b - 1;
                        if dim > cap {
                            break;
                        }
                        let pb = p * b as u32;
                        let params = FamilyParams {
                            alpha: Some(alpha),
                            b: Some(b as u32),
                            m: Some(m),
                            n: None,
                        };
                        push(h(m, m + pb), ManifoldExpr::dold(pb - 1, m), params);
                    }
                }
            }
        }
        FamilyTag::Prop3 => {
            // H(2^a, 2^(a+1) B) ~ P(2^(a+1) B - 2^a - 1, 2^a)
            for alpha in 1.. {
                let Some(p) = pow2(alpha) else { break };
                if u64::from(p) * 3 - 1 > cap {
                    break;
                }
                for b in 1u64.. {
                    let dim = u64::from(p) + 2 * u64::from(p) * b - 1;
                    if dim > cap {
                        break;
                    }
                    let top = 2 * p * b as u32;
                    let params = FamilyParams {
                        alpha: Some(alpha),
                        b: Some(b as u32),
                        ..Default::default()
                    };
                    push(h(p, top), ManifoldExpr::dold(top - p - 1, p), params);
                }
            }
        }
        FamilyTag::Prop4 => {
            // H(m, 2^a - 1) ~ RP^m x RP^(2^a - 2), 2^a > m + 1
            for alpha in 2.. {
                let Some(p) = pow2(alpha) else { break };
                if u64::from(p) - 1 > cap {
                    break;
                }
                for m in 1..p - 1 {
                    if u64::from(m + p - 2) > cap {
                        break;
                    }
                    let partner = ManifoldExpr::product(vec![
                        ManifoldExpr::real_proj(m).expect("m >= 1"),
                        ManifoldExpr::real_proj(p - 2).expect("2^a - 2 >= 2"),
                    ])
                    .expect("two projective factors");
                    let params = FamilyParams {
                        alpha: Some(alpha),
                        m: Some(m),
                        ..Default::default()
                    };
                    push(h(m, p - 1), partner, params);
                }
            }
        }
    }
    out.sort_by_key(FamilyPair::dim);
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairVerification {
    #[serde(flatten)]
    pub pair: FamilyPair,
    pub dim: u32,
    pub bordant: bool,
    pub mismatches: Vec<Partition>,
}

pub fn verify_pair(pair: &FamilyPair, cache: &ProfileCache) -> PairVerification {
    let cmp = cache.compare(&pair.milnor, &pair.partner);
    PairVerification {
        pair: pair.clone(),
        dim: pair.dim(),
        bordant: cmp.bordant,
        mismatches: cmp.mismatches,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyReport {
    pub family: FamilyTag,
    pub dim_cap: u32,
    pub passed: usize,
    pub failed: usize,
    pub pairs: Vec<PairVerification>,
}

impl FamilyReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

pub fn verify_family(tag: FamilyTag, dim_cap: u32, cache: &ProfileCache) -> FamilyReport {
    let pairs: Vec<PairVerification> = enumerate_family_pairs(tag, dim_cap)
        .par_iter()
        .map(|p| verify_pair(p, cache))
        .collect();
    let passed = pairs.iter().filter(|p| p.bordant).count();
    FamilyReport {
        family: tag,
        dim_cap,
        passed,
        failed: pairs.len() - passed,
        pairs,
    }
}

/// Milnor's polynomial generators `RP^(2t)` and `H(2^k, 2t 2^k)`, `t, k >= 1`,
/// ordered by dimension (projective space first on ties).
pub fn milnor_generators(dim_cap: u32) -> Vec<ManifoldExpr> {
    let cap = u64::from(dim_cap);
    let mut out = Vec::new();
    for t in 1..=dim_cap / 2 {
        out.push(ManifoldExpr::real_proj(2 * t).expect("positive"));
    }
    for k in 1.. {
        let Some(p) = pow2(k) else { break };
        if 3 * u64::from(p) - 1 > cap {
            break;
        }
        for t in 1u64.. {
            if u64::from(p) + 2 * t * u64::from(p) - 1 > cap {
                break;
            }
            out.push(ManifoldExpr::milnor(p, 2 * t as u32 * p).expect("positive"));
        }
    }
    out.sort_by_key(|m| (m.dimension(), m.is_milnor()));
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct PredicateDisagreement {
    pub manifold: ManifoldExpr,
    pub predicate: bool,
    pub exact: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PredicateReport {
    pub dim_cap: u32,
    pub checked: usize,
    pub bounding: usize,
    pub disagreements: Vec<PredicateDisagreement>,
}

impl PredicateReport {
    pub fn all_passed(&self) -> bool {
        self.disagreements.is_empty()
    }
}

fn predicate_report(
    dim_cap: u32,
    cases: Vec<(ManifoldExpr, bool)>,
    cache: &ProfileCache,
) -> PredicateReport {
    let exact: Vec<bool> = cases.par_iter().map(|(m, _)| cache.bounds(m)).collect();
    let bounding = exact.iter().filter(|&&b| b).count();
    let disagreements = cases
        .iter()
        .zip(&exact)
        .filter(|((_, p), e)| p != *e)
        .map(|((m, p), &e)| PredicateDisagreement {
            manifold: m.clone(),
            predicate: *p,
            exact: e,
        })
        .collect();
    PredicateReport {
        dim_cap,
        checked: cases.len(),
        bounding,
        disagreements,
    }
}

/// Closed-form Milnor criterion vs exact profiles for every `H(m,n)`,
/// `m <= n`, of dimension `<= dim_cap`.
pub fn check_milnor_predicate(dim_cap: u32, cache: &ProfileCache) -> PredicateReport {
    let cases = milnor_manifolds(dim_cap)
        .into_iter()
        .map(|(m, n, h)| (h, milnor_bounds_predicate(m, n).expect("normalized")))
        .collect();
    predicate_report(dim_cap, cases, cache)
}

/// Closed-form Dold criterion vs exact profiles for every `P(m,n)` of
/// dimension `<= dim_cap`.
pub fn check_dold_predicate(dim_cap: u32, cache: &ProfileCache) -> PredicateReport {
    let mut cases = Vec::new();
    for d in 0..=dim_cap {
        for n in 0..=d / 2 {
            let m = d - 2 * n;
            cases.push((ManifoldExpr::dold(m, n), dold_bounds_predicate(m, n)));
        }
    }
    predicate_report(dim_cap, cases, cache)
}

/// All `H(m,n)`, `0 <= m <= n`, of dimension `<= dim_cap`, ordered by
/// `(dim, m, n)`.
fn milnor_manifolds(dim_cap: u32) -> Vec<(u32, u32, ManifoldExpr)> {
    let mut out = Vec::new();
    for d in 0..=dim_cap {
        let sum = d + 1;
        for m in 0..=sum / 2 {
            let n = sum - m;
            out.push((m, n, ManifoldExpr::milnor(m, n).expect("m + n >= 1")));
        }
    }
    out
}

/// Dold manifolds `P(r,s)` with `r + 2s = d`.
pub fn dold_manifolds_of_dim(d: u32) -> Vec<ManifoldExpr> {
    (0..=d / 2)
        .map(|s| ManifoldExpr::dold(d - 2 * s, s))
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct Prop5Case {
    pub manifold: ManifoldExpr,
    pub dim: u32,
    pub bounds: bool,
    pub euler_mod2: bool,
    /// Non-bounding Dold manifolds of the same dimension.
    pub nonbounding_dolds: Vec<ManifoldExpr>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Prop5Report {
    pub dim_cap: u32,
    pub checked: usize,
    pub skipped_bounding: usize,
    pub cases: Vec<Prop5Case>,
    pub violations: Vec<String>,
}

impl Prop5Report {
    pub fn all_passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// For `H(m,n)` with `m` odd, `n` even, `m < n`: unless it bounds, its Euler
/// characteristic is even while every non-bounding Dold manifold of the same
/// dimension has odd Euler characteristic, and no Dold manifold of that
/// dimension is bordant to it.
pub fn prop5_check(dim_cap: u32, cache: &ProfileCache) -> Prop5Report {
    let candidates: Vec<ManifoldExpr> = milnor_manifolds(dim_cap)
        .into_iter()
        .filter(|&(m, n, _)| m % 2 == 1 && n % 2 == 0 && m < n)
        .map(|(_, _, h)| h)
        .collect();

    let results: Vec<(Prop5Case, Vec<String>)> = candidates
        .par_iter()
        .map(|h| {
            let dim = h.dimension();
            let bounds = cache.bounds(h);
            let euler = h.euler_mod2();
            let mut violations = Vec::new();
            // m odd makes chi(RP^m) even, bounding or not
            if euler {
                violations.push(format!("{h}: Euler characteristic is odd"));
            }
            let mut nonbounding = Vec::new();
            if !bounds {
                for p in dold_manifolds_of_dim(dim) {
                    if cache.bounds(&p) {
                        continue;
                    }
                    if !p.euler_mod2() {
                        violations
                            .push(format!("{p}: non-bounding with even Euler characteristic"));
                    }
                    if cache.bordant(h, &p) {
                        violations.push(format!("{h} is bordant to {p}"));
                    }
                    nonbounding.push(p);
                }
            }
            let case = Prop5Case {
                manifold: h.clone(),
                dim,
                bounds,
                euler_mod2: euler,
                nonbounding_dolds: nonbounding,
            };
            (case, violations)
        })
        .collect();

    let skipped_bounding = results.iter().filter(|(c, _)| c.bounds).count();
    let mut cases = Vec::new();
    let mut violations = Vec::new();
    for (case, v) in results {
        cases.push(case);
        violations.extend(v);
    }
    Prop5Report {
        dim_cap,
        checked: cases.len() - skipped_bounding,
        skipped_bounding,
        cases,
        violations,
    }
}

/// Which known result accounts for a Milnor manifold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Coverage {
    Remark1,
    Prop1,
    Prop2,
    Prop3,
    Prop4,
    Prop5,
}

impl From<FamilyTag> for Coverage {
    fn from(tag: FamilyTag) -> Self {
        match tag {
            FamilyTag::Remark1 => Coverage::Remark1,
            FamilyTag::Prop1 => Coverage::Prop1,
            FamilyTag::Prop2 => Coverage::Prop2,
            FamilyTag::Prop3 => Coverage::Prop3,
            FamilyTag::Prop4 => Coverage::Prop4,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanCandidate {
    pub manifold: ManifoldExpr,
    pub dim: u32,
    pub bounds: bool,
    pub covered_by: Option<Coverage>,
    pub parameters: Option<FamilyParams>,
    /// Dold manifolds of equal dimension found bordant; only computed for
    /// non-bounding candidates.
    pub dold_matches: Vec<ManifoldExpr>,
}

impl ScanCandidate {
    /// Non-bounding and not accounted for by any known family.
    pub fn is_residual(&self) -> bool {
        !self.bounds && self.covered_by.is_none()
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(transparent)]
pub struct ScanReport {
    pub candidates: Vec<ScanCandidate>,
}

impl ScanReport {
    pub fn residual(&self) -> impl Iterator<Item = &ScanCandidate> {
        self.candidates.iter().filter(|c| c.is_residual())
    }

    /// Residual candidates that do have a bordant Dold manifold.
    pub fn counterexamples(&self) -> Vec<&ScanCandidate> {
        self.residual()
            .filter(|c| !c.dold_matches.is_empty())
            .collect()
    }
}

/// Classifies every `H(m,n)` with `m <= n` and dimension `<= dim_cap`, and
/// searches all Dold manifolds of equal dimension for bordant partners of
/// each non-bounding one. Ordered by `(dim, m, n)`.
pub fn conjecture_scan(dim_cap: u32, cache: &ProfileCache) -> ScanReport {
    let mut coverage: HashMap<ManifoldExpr, (Coverage, FamilyParams)> = HashMap::new();
    for tag in FamilyTag::ALL {
        for pair in enumerate_family_pairs(tag, dim_cap) {
            coverage
                .entry(pair.milnor)
                .or_insert((tag.into(), pair.parameters));
        }
    }

    let candidates = milnor_manifolds(dim_cap)
        .into_par_iter()
        .map(|(m, n, h)| {
            let dim = h.dimension();
            let bounds = cache.bounds(&h);
            let mut cover = coverage.get(&h).copied();
            if cover.is_none() && m % 2 == 1 && n % 2 == 0 && m < n {
                let params = FamilyParams {
                    m: Some(m),
                    n: Some(n),
                    ..Default::default()
                };
                cover = Some((Coverage::Prop5, params));
            }
            let dold_matches = if bounds {
                Vec::new()
            } else {
                dold_manifolds_of_dim(dim)
                    .into_iter()
                    .filter(|p| cache.bordant(&h, p))
                    .collect()
            };
            ScanCandidate {
                manifold: h,
                dim,
                bounds,
                covered_by: cover.map(|c| c.0),
                parameters: cover.map(|c| c.1),
                dold_matches,
            }
        })
        .collect();
    ScanReport { candidates }
}
