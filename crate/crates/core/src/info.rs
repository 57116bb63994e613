//! Probability vectors, Shannon entropy, and the laws a content map must obey
//! to count as a measurement.

use serde::Serialize;

use crate::order::{MeasurementMap, CONTENT_TOLERANCE};

/// Normalization tolerance for probability vectors.
pub const DISTRIBUTION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum InfoError {
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
}

/// A finite probability distribution with at least one outcome.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ProbVector(Vec<f64>);

impl ProbVector {
    /// Validates normalization within [`DISTRIBUTION_TOLERANCE`]. Entries that
    /// are negative by less than the tolerance are clamped to zero.
    pub fn new(probs: Vec<f64>) -> Result<Self, InfoError> {
        if probs.is_empty() {
            return Err(InfoError::InvalidDistribution("no outcomes".into()));
        }
        if let Some(p) = probs.iter().find(|p| {
            !p.is_finite() || **p < -DISTRIBUTION_TOLERANCE || **p > 1.0 + DISTRIBUTION_TOLERANCE
        }) {
            return Err(InfoError::InvalidDistribution(format!(
                "entry {p} outside [0, 1]"
            )));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > DISTRIBUTION_TOLERANCE {
            return Err(InfoError::InvalidDistribution(format!(
                "entries sum to {sum}"
            )));
        }
        Ok(ProbVector(
            probs.into_iter().map(|p| p.clamp(0.0, 1.0)).collect(),
        ))
    }

    /// Normalizes non-negative weights (e.g. counts) into a distribution.
    pub fn from_weights<I>(weights: I) -> Result<Self, InfoError>
    where
        I: IntoIterator<Item = f64>,
    {
        let w: Vec<f64> = weights.into_iter().collect();
        let total: f64 = w.iter().sum();
        if w.iter().any(|x| !x.is_finite() || *x < 0.0) || total <= 0.0 {
            return Err(InfoError::InvalidDistribution(
                "weights must be non-negative with positive sum".into(),
            ));
        }
        ProbVector::new(w.into_iter().map(|x| x / total).collect())
    }

    pub fn uniform(n: usize) -> Result<Self, InfoError> {
        if n == 0 {
            return Err(InfoError::InvalidDistribution("no outcomes".into()));
        }
        Ok(ProbVector(vec![1.0 / n as f64; n]))
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn sorted_desc(&self) -> Vec<f64> {
        let mut v = self.0.clone();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }
}

/// `−Σ pᵢ log₂ pᵢ` with `0 · log 0 = 0`.
pub fn shannon_entropy(p: &ProbVector) -> f64 {
    let h: f64 =
        p.0.iter()
            .filter(|&&x| x > 0.0)
            .map(|&x| -x * x.log2())
            .sum();
    h.max(0.0)
}

/// Binary entropy `H₂(p)` in bits.
pub fn binary_entropy(p: f64) -> f64 {
    let p = p.clamp(0.0, 1.0);
    [p, 1.0 - p]
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| -x * x.log2())
        .sum::<f64>()
        .max(0.0)
}

/// Probability of identifying the value with a single best guess.
pub fn success_probability(p: &ProbVector) -> f64 {
    p.0.iter().copied().fold(0.0, f64::max)
}

/// Sorted cross-product order on distributions: `x ⊑ y` when, after sorting
/// both in non-increasing order, `x'ᵢ·y'ᵢ₊₁ ≤ x'ᵢ₊₁·y'ᵢ` for every `i`.
/// `y` is then at least as concentrated as `x`.
pub fn bayesian_leq(x: &ProbVector, y: &ProbVector) -> Result<bool, InfoError> {
    if x.len() != y.len() {
        return Err(InfoError::DimensionMismatch(x.len(), y.len()));
    }
    let (xs, ys) = (x.sorted_desc(), y.sorted_desc());
    Ok((0..xs.len().saturating_sub(1))
        .all(|i| xs[i] * ys[i + 1] <= xs[i + 1] * ys[i] + CONTENT_TOLERANCE))
}

/// What went wrong with a content map, as a witness pair `(lower, upper)` with `lower ⊑ upper`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum Violation {
    /// `content(lower) < content(upper)` although `lower ⊑ upper`.
    Monotonicity { lower: String, upper: String },
    /// `lower` has content 0 but lies strictly below `upper`, so it is not maximal.
    MaxReflection { lower: String, upper: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContentReport {
    pub monotone: bool,
    pub max_reflecting: bool,
    pub violations: Vec<Violation>,
}

fn full_report(m: &MeasurementMap) -> ContentReport {
    let d = m.domain();
    let n = d.len();
    let mut violations = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j || !d.leq_at(i, j) {
                continue;
            }
            let (lower, upper) = (d.name(i).to_string(), d.name(j).to_string());
            if m.content_at(i) < m.content_at(j) {
                violations.push(Violation::Monotonicity {
                    lower: lower.clone(),
                    upper: upper.clone(),
                });
            }
            if m.content_at(i).abs() <= CONTENT_TOLERANCE {
                violations.push(Violation::MaxReflection { lower, upper });
            }
        }
    }
    ContentReport {
        monotone: !violations
            .iter()
            .any(|v| matches!(v, Violation::Monotonicity { .. })),
        max_reflecting: !violations
            .iter()
            .any(|v| matches!(v, Violation::MaxReflection { .. })),
        violations,
    }
}

/// `x ⊑ y ⇒ μx ≥ μy`. Both flags are filled in; violations are restricted
/// to monotonicity witnesses.
pub fn is_monotone_measurement(m: &MeasurementMap) -> ContentReport {
    let mut r = full_report(m);
    r.violations
        .retain(|v| matches!(v, Violation::Monotonicity { .. }));
    r
}

/// Content 0 only on maximal elements. Both flags are filled in; violations
/// are restricted to max-reflection witnesses.
pub fn reflects_max(m: &MeasurementMap) -> ContentReport {
    let mut r = full_report(m);
    r.violations
        .retain(|v| matches!(v, Violation::MaxReflection { .. }));
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::{validate_poset, PosetSpec};
    use proptest::prelude::*;

    fn pv(v: &[f64]) -> ProbVector {
        ProbVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(shannon_entropy(&pv(&[1.0, 0.0])), 0.0);
        assert_eq!(shannon_entropy(&pv(&[0.5, 0.5])), 1.0);
        // hand evaluation: -(0.8 log2 0.8 + 0.2 log2 0.2)
        assert!((shannon_entropy(&pv(&[0.8, 0.2])) - 0.7219280948873623).abs() < 1e-12);
        assert!((binary_entropy(0.75) - 0.8112781244591328).abs() < 1e-12);
    }

    #[test]
    fn invalid_distributions() {
        assert!(ProbVector::new(vec![]).is_err());
        assert!(ProbVector::new(vec![0.5, 0.6]).is_err());
        assert!(ProbVector::new(vec![1.2, -0.2]).is_err());
        assert!(ProbVector::new(vec![f64::NAN, 1.0]).is_err());
        // within tolerance is accepted and clamped
        let p = ProbVector::new(vec![1.0 + 1e-12, -1e-12]).unwrap();
        assert_eq!(p.probs()[1], 0.0);
        assert!(ProbVector::from_weights([0.0, 0.0]).is_err());
        assert_eq!(
            ProbVector::from_weights([1.0, 3.0]).unwrap().probs(),
            &[0.25, 0.75]
        );
    }

    #[test]
    fn success_probability_examples() {
        assert_eq!(success_probability(&pv(&[0.5, 0.5])), 0.5);
        assert_eq!(success_probability(&pv(&[1.0, 0.0])), 1.0);
        // three unknown bits: 8 equally likely completions
        assert_eq!(success_probability(&ProbVector::uniform(8).unwrap()), 0.125);
    }

    #[test]
    fn bayesian_order_examples() {
        assert!(bayesian_leq(&pv(&[0.5, 0.5]), &pv(&[1.0, 0.0])).unwrap());
        assert!(!bayesian_leq(&pv(&[1.0, 0.0]), &pv(&[0.5, 0.5])).unwrap());
        let x = pv(&[0.3, 0.7]);
        assert!(bayesian_leq(&x, &x).unwrap());
        assert_eq!(
            bayesian_leq(&pv(&[1.0]), &pv(&[0.5, 0.5])).unwrap_err(),
            InfoError::DimensionMismatch(1, 2)
        );
    }

    fn chain2(bottom: f64, top: f64) -> MeasurementMap {
        let d = validate_poset(PosetSpec::new(["⊥", "⊤"], [("⊥", "⊤")])).unwrap();
        MeasurementMap::new(d, [("⊥", bottom), ("⊤", top)]).unwrap()
    }

    #[test]
    fn measurement_laws() {
        let bad = is_monotone_measurement(&chain2(0.0, 1.0));
        assert!(!bad.monotone);
        assert_eq!(
            bad.violations,
            vec![Violation::Monotonicity {
                lower: "⊥".into(),
                upper: "⊤".into()
            }]
        );
        assert!(!reflects_max(&chain2(0.0, 1.0)).max_reflecting);
        assert!(!reflects_max(&chain2(0.0, 0.0)).max_reflecting);
        assert!(is_monotone_measurement(&chain2(0.0, 0.0)).monotone);

        let d = validate_poset(PosetSpec::new(
            ["⊥", "v0", "v1"],
            [("⊥", "v0"), ("⊥", "v1")],
        ))
        .unwrap();
        let m = MeasurementMap::new(d, [("⊥", 1.0), ("v0", 0.0), ("v1", 0.0)]).unwrap();
        let r = reflects_max(&m);
        assert!(r.max_reflecting && r.monotone && r.violations.is_empty());
    }

    fn dist(n: usize) -> impl Strategy<Value = ProbVector> {
        prop::collection::vec(0.0f64..1.0, n)
            .prop_filter_map("zero mass", |w| ProbVector::from_weights(w).ok())
    }

    proptest! {
        #[test]
        fn entropy_bounded_and_permutation_invariant(p in (1usize..6).prop_flat_map(dist), shift in 0usize..6) {
            let h = shannon_entropy(&p);
            prop_assert!(h >= 0.0 && h <= (p.len() as f64).log2() + 1e-12);
            let mut rotated = p.probs().to_vec();
            let k = shift % rotated.len();
            rotated.rotate_left(k);
            prop_assert!((shannon_entropy(&ProbVector::new(rotated).unwrap()) - h).abs() < 1e-12);
        }

        #[test]
        fn uniform_maximizes_entropy(n in 1usize..6) {
            let h = shannon_entropy(&ProbVector::uniform(n).unwrap());
            prop_assert!((h - (n as f64).log2()).abs() < 1e-12);
        }

        #[test]
        fn bayesian_order_is_entropy_monotone((x, y) in (2usize..=5).prop_flat_map(|n| (dist(n), dist(n)))) {
            if bayesian_leq(&x, &y).unwrap() {
                prop_assert!(shannon_entropy(&x) >= shannon_entropy(&y) - 1e-9);
            }
            // every distribution lies above the uniform one
            let u = ProbVector::uniform(x.len()).unwrap();
            prop_assert!(bayesian_leq(&u, &x).unwrap());
        }

        #[test]
        fn bayesian_order_is_transitive((x, y, z) in (2usize..=4).prop_flat_map(|n| (dist(n), dist(n), dist(n)))) {
            if bayesian_leq(&x, &y).unwrap() && bayesian_leq(&y, &z).unwrap() {
                prop_assert!(bayesian_leq(&x, &z).unwrap());
            }
        }

        #[test]
        fn certainty_iff_zero_entropy(p in (1usize..5).prop_flat_map(dist), spike in any::<bool>()) {
            let p = if spike {
                let mut v = vec![0.0; p.len()];
                v[0] = 1.0;
                ProbVector::new(v).unwrap()
            } else { p };
            let certain = (success_probability(&p) - 1.0).abs() < 1e-9;
            prop_assert_eq!(certain, shannon_entropy(&p) < 1e-9);
        }
    }

    /// Independent double-loop re-check of both laws over the raw content values.
    fn brute_force_laws(m: &MeasurementMap) -> (bool, bool) {
        let d = m.domain();
        let names = d.elements();
        let mut monotone = true;
        let mut reflecting = true;
        for x in names {
            for y in names {
                if d.leq(x, y).unwrap() && m.content(x).unwrap() < m.content(y).unwrap() {
                    monotone = false;
                }
            }
            let maximal = d.upset(x).unwrap().len() == 1;
            if m.content(x).unwrap() == 0.0 && !maximal {
                reflecting = false;
            }
        }
        (monotone, reflecting)
    }

    proptest! {
        #[test]
        fn laws_agree_with_brute_force(
            edges in prop::collection::vec((0usize..6, 0usize..6), 0..10),
            contents in prop::collection::vec(prop_oneof![Just(0.0), 0.0f64..3.0], 6),
        ) {
            let names: Vec<String> = (0..6).map(|i| format!("e{i}")).collect();
            let covers: Vec<(String, String)> = edges
                .into_iter()
                .filter(|(a, b)| a < b)
                .map(|(a, b)| (names[a].clone(), names[b].clone()))
                .collect();
            let d = validate_poset(PosetSpec::new(names.clone(), covers)).unwrap();
            let m = MeasurementMap::new(d, names.iter().zip(contents.iter().copied())).unwrap();
            let (mono, refl) = brute_force_laws(&m);
            prop_assert_eq!(is_monotone_measurement(&m).monotone, mono);
            prop_assert_eq!(reflects_max(&m).max_reflecting, refl);
        }
    }
}
