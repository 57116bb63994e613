//! Finite partial orders and the domain-theoretic predicates built on them.
//!
//! A [`FiniteDomain`] stores the full order as an explicit closure matrix, so
//! `leq` is a table lookup. Everything that enumerates subsets (dcpo checks,
//! the way-below relation) is bounded by an enumeration cap and fails with
//! [`OrderError::SizeLimitExceeded`] instead of silently truncating.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

/// Default bound on the number of elements for subset enumerations.
pub const DEFAULT_ENUMERATION_CAP: usize = 16;

/// Subset enumeration packs subsets into a `u64`; caps above this are refused.
const HARD_ENUMERATION_LIMIT: usize = 30;

/// Absolute tolerance used when comparing content values against zero.
pub const CONTENT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OrderError {
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("cover ({0}, {0}) relates an element to itself")]
    SelfCover(String),
    #[error("order is not antisymmetric: `{0}` and `{1}` are mutually related")]
    CycleDetected(String, String),
    #[error("the empty set has no supremum here")]
    EmptySet,
    #[error("domain has {size} elements, enumeration cap is {cap}")]
    SizeLimitExceeded { size: usize, cap: usize },
    #[error("no content value for element `{0}`")]
    MissingContent(String),
    #[error("content for `{element}` must be finite and non-negative, got {value}")]
    InvalidContent { element: String, value: f64 },
}

pub type Result<T> = std::result::Result<T, OrderError>;

/// Raw description of a poset: element names plus covering pairs `(lower, upper)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PosetSpec {
    pub elements: Vec<String>,
    pub covers: Vec<(String, String)>,
}

impl PosetSpec {
    pub fn new<E, C, S>(elements: E, covers: C) -> Self
    where
        E: IntoIterator<Item = S>,
        C: IntoIterator<Item = (S, S)>,
        S: Into<String>,
    {
        PosetSpec {
            elements: elements.into_iter().map(Into::into).collect(),
            covers: covers
                .into_iter()
                .map(|(lo, hi)| (lo.into(), hi.into()))
                .collect(),
        }
    }
}

/// A validated finite poset.
#[derive(Debug, Clone)]
pub struct FiniteDomain {
    spec: PosetSpec,
    index: HashMap<String, usize>,
    // leq[i * n + j] is true iff elements[i] ⊑ elements[j]
    leq: Vec<bool>,
    cap: usize,
}

/// Builds the reflexive-transitive closure of the covers and checks antisymmetry.
pub fn validate_poset(spec: PosetSpec) -> Result<FiniteDomain> {
    let n = spec.elements.len();
    let mut index = HashMap::with_capacity(n);
    for (i, name) in spec.elements.iter().enumerate() {
        if index.insert(name.clone(), i).is_some() {
            return Err(OrderError::DuplicateElement(name.clone()));
        }
    }

    let mut leq = vec![false; n * n];
    for i in 0..n {
        leq[i * n + i] = true;
    }
    for (lo, hi) in &spec.covers {
        let i = *index
            .get(lo)
            .ok_or_else(|| OrderError::UnknownElement(lo.clone()))?;
        let j = *index
            .get(hi)
            .ok_or_else(|| OrderError::UnknownElement(hi.clone()))?;
        if i == j {
            return Err(OrderError::SelfCover(lo.clone()));
        }
        leq[i * n + j] = true;
    }

    // Warshall
    for k in 0..n {
        for i in 0..n {
            if !leq[i * n + k] {
                continue;
            }
            for j in 0..n {
                if leq[k * n + j] {
                    leq[i * n + j] = true;
                }
            }
        }
    }

    for i in 0..n {
        for j in (i + 1)..n {
            if leq[i * n + j] && leq[j * n + i] {
                return Err(OrderError::CycleDetected(
                    spec.elements[i].clone(),
                    spec.elements[j].clone(),
                ));
            }
        }
    }

    Ok(FiniteDomain {
        spec,
        index,
        leq,
        cap: DEFAULT_ENUMERATION_CAP,
    })
}

/// A directed subset found by enumeration, stored as a bitmask over element indices.
#[derive(Debug, Clone, Copy)]
struct DirectedSet {
    members: u64,
    sup: Option<usize>,
}

impl FiniteDomain {
    pub fn with_enumeration_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn enumeration_cap(&self) -> usize {
        self.cap
    }

    pub fn spec(&self) -> &PosetSpec {
        &self.spec
    }

    pub fn elements(&self) -> &[String] {
        &self.spec.elements
    }

    pub fn len(&self) -> usize {
        self.spec.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spec.elements.is_empty()
    }

    pub fn contains(&self, x: &str) -> bool {
        self.index.contains_key(x)
    }

    pub fn index_of(&self, x: &str) -> Result<usize> {
        self.index
            .get(x)
            .copied()
            .ok_or_else(|| OrderError::UnknownElement(x.to_string()))
    }

    pub fn name(&self, i: usize) -> &str {
        &self.spec.elements[i]
    }

    /// `x ⊑ y` by index. Panics on out-of-range indices.
    pub fn leq_at(&self, i: usize, j: usize) -> bool {
        self.leq[i * self.len() + j]
    }

    pub fn leq(&self, x: &str, y: &str) -> Result<bool> {
        Ok(self.leq_at(self.index_of(x)?, self.index_of(y)?))
    }

    /// `↑x`, always containing `x`.
    pub fn upset(&self, x: &str) -> Result<BTreeSet<&str>> {
        let i = self.index_of(x)?;
        Ok((0..self.len())
            .filter(|&j| self.leq_at(i, j))
            .map(|j| self.name(j))
            .collect())
    }

    /// `↓x`, always containing `x`.
    pub fn downset(&self, x: &str) -> Result<BTreeSet<&str>> {
        let i = self.index_of(x)?;
        Ok((0..self.len())
            .filter(|&j| self.leq_at(j, i))
            .map(|j| self.name(j))
            .collect())
    }

    fn indices<I>(&self, s: I) -> Result<Vec<usize>>
    where
        I: IntoIterator,
        I::Item: AsRef<str>,
    {
        let mut out: Vec<usize> = s
            .into_iter()
            .map(|x| self.index_of(x.as_ref()))
            .collect::<Result<_>>()?;
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    /// True iff `s` is nonempty and every pair in `s` has an upper bound inside `s`.
    pub fn is_directed<I>(&self, s: I) -> Result<bool>
    where
        I: IntoIterator,
        I::Item: AsRef<str>,
    {
        let s = self.indices(s)?;
        if s.is_empty() {
            return Ok(false);
        }
        Ok(s.iter().enumerate().all(|(a, &x)| {
            s[a + 1..]
                .iter()
                .all(|&y| s.iter().any(|&z| self.leq_at(x, z) && self.leq_at(y, z)))
        }))
    }

    /// Least upper bound of `s`, if one exists.
    pub fn supremum<I>(&self, s: I) -> Result<Option<&str>>
    where
        I: IntoIterator,
        I::Item: AsRef<str>,
    {
        let s = self.indices(s)?;
        if s.is_empty() {
            return Err(OrderError::EmptySet);
        }
        let upper: Vec<usize> = (0..self.len())
            .filter(|&u| s.iter().all(|&x| self.leq_at(x, u)))
            .collect();
        Ok(upper
            .iter()
            .copied()
            .find(|&u| upper.iter().all(|&v| self.leq_at(u, v)))
            .map(|u| self.name(u)))
    }

    /// Elements whose upset is just themselves.
    pub fn maximal_elements(&self) -> BTreeSet<&str> {
        let n = self.len();
        (0..n)
            .filter(|&i| (0..n).all(|j| j == i || !self.leq_at(i, j)))
            .map(|i| self.name(i))
            .collect()
    }

    fn check_cap(&self) -> Result<()> {
        let limit = self.cap.min(HARD_ENUMERATION_LIMIT);
        if self.len() > limit {
            return Err(OrderError::SizeLimitExceeded {
                size: self.len(),
                cap: limit,
            });
        }
        Ok(())
    }

    fn up_masks(&self) -> Vec<u64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| self.leq_at(i, j))
                    .fold(0u64, |m, j| m | (1 << j))
            })
            .collect()
    }

    /// Every directed subset of the domain together with its supremum.
    fn directed_subsets(&self) -> Result<Vec<DirectedSet>> {
        self.check_cap()?;
        let n = self.len();
        let up = self.up_masks();
        let mut out = Vec::new();
        for members in 1u64..(1u64 << n) {
            let idx: Vec<usize> = (0..n).filter(|&i| members & (1 << i) != 0).collect();
            let directed = idx
                .iter()
                .enumerate()
                .all(|(a, &x)| idx[a + 1..].iter().all(|&y| up[x] & up[y] & members != 0));
            if !directed {
                continue;
            }
            let bounds = idx.iter().fold(u64::MAX >> (64 - n), |m, &i| m & up[i]);
            let sup = (0..n).find(|&u| bounds & (1 << u) != 0 && bounds & !up[u] == 0);
            out.push(DirectedSet { members, sup });
        }
        Ok(out)
    }

    /// Checks by enumeration that every directed subset has a supremum.
    pub fn is_dcpo(&self) -> Result<bool> {
        Ok(self.directed_subsets()?.iter().all(|d| d.sup.is_some()))
    }

    fn way_below_with(&self, directed: &[DirectedSet], x: usize, y: usize) -> bool {
        let n = self.len();
        let above_x = (0..n)
            .filter(|&j| self.leq_at(x, j))
            .fold(0u64, |m, j| m | (1 << j));
        directed.iter().all(|d| match d.sup {
            Some(s) if self.leq_at(y, s) => d.members & above_x != 0,
            _ => true,
        })
    }

    /// `x ≼ y`: every directed set whose supremum lies above `y` contains an
    /// element above `x`. Computed by exhaustive enumeration.
    pub fn way_below(&self, x: &str, y: &str) -> Result<bool> {
        let (i, j) = (self.index_of(x)?, self.index_of(y)?);
        let directed = self.directed_subsets()?;
        Ok(self.way_below_with(&directed, i, j))
    }

    /// The full way-below relation, indexed like the order matrix.
    pub fn way_below_table(&self) -> Result<Vec<Vec<bool>>> {
        let directed = self.directed_subsets()?;
        let n = self.len();
        Ok((0..n)
            .map(|i| {
                (0..n)
                    .map(|j| self.way_below_with(&directed, i, j))
                    .collect()
            })
            .collect())
    }

    /// Checks `x ≼ y ∧ y ⊑ z ⇒ x ≼ z` over all triples.
    pub fn approximation_transitivity_check(&self) -> Result<TransitivityReport> {
        let wb = self.way_below_table()?;
        let n = self.len();
        let mut counterexamples = Vec::new();
        let mut triples_checked = 0;
        for (x, row) in wb.iter().enumerate() {
            for y in (0..n).filter(|&y| row[y]) {
                for z in (0..n).filter(|&z| self.leq_at(y, z)) {
                    triples_checked += 1;
                    if !row[z] {
                        counterexamples.push((
                            self.name(x).to_string(),
                            self.name(y).to_string(),
                            self.name(z).to_string(),
                        ));
                    }
                }
            }
        }
        Ok(TransitivityReport {
            pass: counterexamples.is_empty(),
            triples_checked,
            counterexamples,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransitivityReport {
    pub pass: bool,
    /// Number of `(x, y, z)` triples with `x ≼ y ⊑ z`.
    pub triples_checked: usize,
    pub counterexamples: Vec<(String, String, String)>,
}

/// Information content attached to every element of a domain, in bits.
/// Smaller content means more information; 0 is full information.
#[derive(Debug, Clone)]
pub struct MeasurementMap {
    domain: FiniteDomain,
    content: Vec<f64>,
}

impl MeasurementMap {
    pub fn new<I, K>(domain: FiniteDomain, content: I) -> Result<Self>
    where
        I: IntoIterator<Item = (K, f64)>,
        K: AsRef<str>,
    {
        let mut values = vec![None; domain.len()];
        for (k, v) in content {
            let i = domain.index_of(k.as_ref())?;
            if !v.is_finite() || v < 0.0 {
                return Err(OrderError::InvalidContent {
                    element: k.as_ref().to_string(),
                    value: v,
                });
            }
            values[i] = Some(v);
        }
        let content = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| OrderError::MissingContent(domain.name(i).to_string())))
            .collect::<Result<_>>()?;
        Ok(MeasurementMap { domain, content })
    }

    pub fn domain(&self) -> &FiniteDomain {
        &self.domain
    }

    pub fn content(&self, x: &str) -> Result<f64> {
        Ok(self.content[self.domain.index_of(x)?])
    }

    pub fn content_at(&self, i: usize) -> f64 {
        self.content[i]
    }

    /// `μ(↑x ∩ ↑y) ⊆ {0}`; vacuously true when the upsets are disjoint.
    pub fn orthogonal(&self, x: &str, y: &str) -> Result<bool> {
        let (i, j) = (self.domain.index_of(x)?, self.domain.index_of(y)?);
        Ok((0..self.domain.len())
            .filter(|&k| self.domain.leq_at(i, k) && self.domain.leq_at(j, k))
            .all(|k| self.content[k].abs() <= CONTENT_TOLERANCE))
    }
}

/// On-disk poset description: `{"elements": [...], "covers": [[lo, hi], ...], "content": {...}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetFile {
    pub elements: Vec<String>,
    pub covers: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub content: Option<BTreeMap<String, f64>>,
}

impl PosetFile {
    pub fn domain(&self) -> Result<FiniteDomain> {
        validate_poset(PosetSpec {
            elements: self.elements.clone(),
            covers: self.covers.clone(),
        })
    }

    pub fn measurement(&self, domain: &FiniteDomain) -> Option<Result<MeasurementMap>> {
        self.content
            .as_ref()
            .map(|c| MeasurementMap::new(domain.clone(), c.iter().map(|(k, v)| (k, *v))))
    }
}
