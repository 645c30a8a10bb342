//! Stiefel-Whitney numbers, full profiles, and the bounding / bordism
//! decisions they induce (two closed manifolds of equal dimension are
//! unoriented-bordant iff all their Stiefel-Whitney numbers agree).

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, RwLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2ring::Gf2Poly;
use crate::manifolds::{CohomologyModel, ManifoldExpr};

/// A non-increasing list of positive parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Sorts the parts into non-increasing order; zero parts are rejected.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(format!(
                "{parts:?} has a zero part"
            )));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(u32::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// All partitions of `d` in descending lexicographic order.
pub fn partitions(d: u32) -> Vec<Partition> {
    fn rec(remaining: u32, max_part: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition {
                parts: prefix.clone(),
            });
            return;
        }
        for k in (1..=remaining.min(max_part)).rev() {
            prefix.push(k);
            rec(remaining - k, k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, d, &mut Vec::new(), &mut out);
    out
}

/// `counts[n][k]` = number of partitions of `n` with all parts `<= k`.
struct PartitionCounts {
    counts: Vec<Vec<usize>>,
}

impl PartitionCounts {
    fn new(d: u32) -> Self {
        let d = d as usize;
        let mut counts = vec![vec![0usize; d + 1]; d + 1];
        counts[0].fill(1);
        for n in 1..=d {
            for k in 1..=d {
                let without_k = counts[n][k - 1];
                let with_k = if k <= n { counts[n - k][k] } else { 0 };
                counts[n][k] = without_k + with_k;
            }
        }
        Self { counts }
    }

    fn get(&self, n: u32, max_part: u32) -> usize {
        self.counts[n as usize][max_part.min(n) as usize]
    }
}

/// Number of partitions of `d`.
pub fn partition_count(d: u32) -> usize {
    PartitionCounts::new(d).get(d, d)
}

/// The cohomology model together with every graded piece of the total class.
struct SwData {
    model: CohomologyModel,
    components: Vec<Gf2Poly>,
}

impl SwData {
    fn new(m: &ManifoldExpr) -> Self {
        let total = m.total_sw_class();
        let model = m.cohomology_model();
        let components = (0..=m.dimension())
            .map(|i| total.graded_component(i))
            .collect();
        Self { model, components }
    }

    fn evaluate(&self, x: &Gf2Poly) -> bool {
        self.model
            .evaluate(x)
            .expect("class lives in the model ring")
    }

    fn number(&self, parts: &[u32]) -> bool {
        let mut acc = Gf2Poly::one(&self.model.ring);
        for &p in parts {
            if acc.is_zero() {
                return false;
            }
            acc = &acc * &self.components[p as usize];
        }
        self.evaluate(&acc)
    }

    /// Bits for every partition of `remaining` with parts `<= max_part`,
    /// in canonical order, each multiplied onto `running`.
    fn subtree(
        &self,
        counts: &PartitionCounts,
        remaining: u32,
        max_part: u32,
        running: &Gf2Poly,
        out: &mut Vec<bool>,
    ) {
        if running.is_zero() {
            out.extend(std::iter::repeat_n(false, counts.get(remaining, max_part)));
            return;
        }
        if remaining == 0 {
            out.push(self.evaluate(running));
            return;
        }
        for k in (1..=remaining.min(max_part)).rev() {
            let next = running * &self.components[k as usize];
            self.subtree(counts, remaining - k, k, &next, out);
        }
    }
}

/// `<W_{i_1} ... W_{i_k}, [M]>` for the partition `(i_1, ..., i_k)`.
pub fn sw_number(m: &ManifoldExpr, omega: &Partition) -> Result<bool> {
    let dim = m.dimension();
    if omega.weight() != dim {
        return Err(Error::WeightMismatch {
            weight: omega.weight(),
            dim,
        });
    }
    Ok(SwData::new(m).number(omega.parts()))
}

/// All Stiefel-Whitney numbers of a manifold, indexed by [`partitions`] order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SwProfile {
    dim: u32,
    bits: Vec<bool>,
}

impl SwProfile {
    pub fn from_bits(dim: u32, bits: Vec<bool>) -> Result<Self> {
        let expected = partition_count(dim);
        if bits.len() != expected {
            return Err(Error::InvalidProfile(format!(
                "dimension {dim} needs {expected} bits, got {}",
                bits.len()
            )));
        }
        Ok(Self { dim, bits })
    }

    /// Parse a `0`/`1` string such as the `bits` field of a profile report.
    pub fn from_bit_string(dim: u32, s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidProfile(format!(
                    "unexpected character `{other}`"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_bits(dim, bits)
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn bit_string(&self) -> String {
        self.bits
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        !self.bits.contains(&true)
    }

    pub fn partitions(&self) -> Vec<Partition> {
        partitions(self.dim)
    }

    /// Number for the given partition, `None` if its weight is not `dim`.
    pub fn get(&self, omega: &Partition) -> Option<bool> {
        if omega.weight() != self.dim {
            return None;
        }
        partitions(self.dim)
            .iter()
            .position(|p| p == omega)
            .map(|i| self.bits[i])
    }

    /// Partitions whose numbers differ. Empty when the dimensions differ.
    pub fn mismatches(&self, other: &SwProfile) -> Vec<Partition> {
        if self.dim != other.dim {
            return Vec::new();
        }
        partitions(self.dim)
            .into_iter()
            .zip(self.bits.iter().zip(&other.bits))
            .filter(|(_, (a, b))| a != b)
            .map(|(p, _)| p)
            .collect()
    }

    pub fn report(&self, manifold: &ManifoldExpr) -> ProfileReport {
        ProfileReport {
            manifold: manifold.to_string(),
            dim: self.dim,
            partitions: self.partitions().into_iter().map(|p| p.parts).collect(),
            bits: self.bit_string(),
        }
    }
}

/// Serialized form of a profile.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileReport {
    pub manifold: String,
    pub dim: u32,
    pub partitions: Vec<Vec<u32>>,
    pub bits: String,
}

/// Computes the whole profile in one pass over the partition tree, sharing
/// prefix products and pruning subtrees whose running product vanishes.
/// First parts are processed in parallel.
pub fn sw_profile(m: &ManifoldExpr) -> SwProfile {
    let dim = m.dimension();
    let data = SwData::new(m);
    let counts = PartitionCounts::new(dim);
    let bits = if dim == 0 {
        vec![data.evaluate(&Gf2Poly::one(&data.model.ring))]
    } else {
        let chunks: Vec<Vec<bool>> = (1..=dim)
            .rev()
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|first| {
                let mut out = Vec::with_capacity(counts.get(dim - first, first));
                data.subtree(
                    &counts,
                    dim - first,
                    first,
                    &data.components[first as usize],
                    &mut out,
                );
                out
            })
            .collect();
        chunks.concat()
    };
    SwProfile { dim, bits }
}

/// A closed manifold bounds iff all its Stiefel-Whitney numbers vanish.
pub fn bounds(m: &ManifoldExpr) -> bool {
    sw_profile(m).is_zero()
}

/// Equal dimension and equal Stiefel-Whitney profiles.
pub fn bordant(m: &ManifoldExpr, n: &ManifoldExpr) -> bool {
    m.dimension() == n.dimension() && sw_profile(m) == sw_profile(n)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    pub left_dim: u32,
    pub right_dim: u32,
    pub bordant: bool,
    /// Partitions with differing numbers (empty on dimension mismatch).
    pub mismatches: Vec<Partition>,
}

/// Memoizes profiles by the descriptor's printed normal form. Safe to share
/// across threads; racing computations of one key insert equal values and
/// the first insertion wins.
#[derive(Debug, Default)]
pub struct ProfileCache {
    entries: RwLock<HashMap<String, Arc<SwProfile>>>,
    fresh: Mutex<Vec<String>>,
}

impl ProfileCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn profile(&self, m: &ManifoldExpr) -> Arc<SwProfile> {
        let key = m.to_string();
        if let Some(p) = self.entries.read().unwrap().get(&key) {
            return Arc::clone(p);
        }
        let computed = Arc::new(sw_profile(m));
        let mut entries = self.entries.write().unwrap();
        let stored = entries.entry(key.clone()).or_insert_with(|| {
            self.fresh.lock().unwrap().push(key);
            computed
        });
        Arc::clone(stored)
    }

    /// Seed an entry, e.g. from a cache file. Returns false if the key was present.
    pub fn insert(&self, m: &ManifoldExpr, profile: SwProfile) -> bool {
        let mut entries = self.entries.write().unwrap();
        match entries.entry(m.to_string()) {
            std::collections::hash_map::Entry::Occupied(_) => false,
            std::collections::hash_map::Entry::Vacant(v) => {
                v.insert(Arc::new(profile));
                true
            }
        }
    }

    pub fn len(&self) -> usize {
        self.entries.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Entries computed (not seeded) since construction, in sorted key order.
    pub fn take_fresh(&self) -> Vec<(String, Arc<SwProfile>)> {
        let mut keys = std::mem::take(&mut *self.fresh.lock().unwrap());
        keys.sort();
        let entries = self.entries.read().unwrap();
        keys.into_iter()
            .map(|k| (k.clone(), Arc::clone(&entries[&k])))
            .collect()
    }

    pub fn bounds(&self, m: &ManifoldExpr) -> bool {
        self.profile(m).is_zero()
    }

    pub fn bordant(&self, m: &ManifoldExpr, n: &ManifoldExpr) -> bool {
        m.dimension() == n.dimension() && self.profile(m) == self.profile(n)
    }

    pub fn compare(&self, m: &ManifoldExpr, n: &ManifoldExpr) -> Comparison {
        let (left_dim, right_dim) = (m.dimension(), n.dimension());
        if left_dim != right_dim {
            return Comparison {
                left_dim,
                right_dim,
                bordant: false,
                mismatches: Vec::new(),
            };
        }
        let mismatches = self.profile(m).mismatches(&self.profile(n));
        Comparison {
            left_dim,
            right_dim,
            bordant: mismatches.is_empty(),
            mismatches,
        }
    }
}
