//! Entropy of measurement records under different basis policies.
//!
//! Each trial measures a fresh spin (default `|z+⟩`) repeatedly, choosing the
//! measurement axis per step according to a [`Policy`]. The record entropy at
//! step `k` is the Shannon entropy of the ensemble of length-`k` outcome
//! prefixes. A fixed basis keeps it flat; changing bases make it grow.

use std::collections::HashMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::info::{binary_entropy, shannon_entropy, ProbVector};
use crate::quantum::{
    born_probabilities, context_overlap, run_chain, sub_seed, Context, InitialSpec, OutcomeRecord,
    PureState, QuantumError, SpinAxis,
};

/// Increment below which a curve counts as flat.
pub const FLAT_TOLERANCE: f64 = 0.02;
/// Outcome prefixes are packed into a `u64`.
pub const MAX_STEPS: usize = 63;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExperimentError {
    #[error("no records to estimate from")]
    EmptyRecordSet,
    #[error("step {step} outside 1..={len}")]
    StepOutOfRange { step: usize, len: usize },
    #[error("invalid policy: {0}")]
    InvalidPolicy(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

pub type Result<T> = std::result::Result<T, ExperimentError>;

/// How the measurement axis is chosen at each step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Policy {
    /// Same axis every step.
    Fixed(SpinAxis),
    /// Odd steps use `first`, even steps use `second`.
    Alternating { first: SpinAxis, second: SpinAxis },
    /// A fresh uniformly random axis on the sphere every step.
    RandomAxis,
}

impl Policy {
    pub fn fixed_z() -> Self {
        Policy::Fixed(SpinAxis::z())
    }

    /// Alternates between `z` and an axis `angle_deg` away in the x-z plane.
    pub fn alternating_deg(angle_deg: f64) -> Result<Self> {
        Ok(Policy::Alternating {
            first: SpinAxis::z(),
            second: SpinAxis::in_xz_plane(angle_deg.to_radians())
                .map_err(|e| ExperimentError::InvalidPolicy(e.to_string()))?,
        })
    }

    /// Whether consecutive contexts actually differ.
    pub fn changes_basis(&self) -> bool {
        match self {
            Policy::Fixed(_) => false,
            Policy::Alternating { first, second } => context_overlap(first, second) < 1.0 - 1e-12,
            Policy::RandomAxis => true,
        }
    }

    /// Axis choices for one trial. Random axes draw from their own stream of
    /// the trial seed, so they never share randomness with outcome sampling.
    pub fn contexts(&self, steps: usize, trial_seed: u64) -> Vec<Context> {
        match self {
            Policy::Fixed(a) => vec![Context::new(*a); steps],
            Policy::Alternating { first, second } => (0..steps)
                .map(|i| Context::new(if i % 2 == 0 { *first } else { *second }))
                .collect(),
            Policy::RandomAxis => {
                let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
                rng.set_stream(1);
                (0..steps)
                    .map(|_| {
                        let cos_t: f64 = rng.gen_range(-1.0..=1.0);
                        let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                        let axis =
                            SpinAxis::new(cos_t.acos(), phi).expect("sampled angles are in range");
                        Context::new(axis)
                    })
                    .collect()
            }
        }
    }

    /// Closed-form record entropy after `step` measurements, when one exists.
    /// Post-measurement states are eigenstates, so each step after the first
    /// contributes `H₂(cos²(θ/2))` for the angle θ between consecutive axes.
    pub fn exact_entropy(&self, initial: &PureState, step: usize) -> Option<f64> {
        if step == 0 {
            return Some(0.0);
        }
        let first_step =
            |axis: &SpinAxis| shannon_entropy(&born_probabilities(initial, &Context::new(*axis)));
        match self {
            Policy::Fixed(a) => Some(first_step(a)),
            Policy::Alternating { first, second } => {
                let per_step = binary_entropy((first.angle_to(second) / 2.0).cos().powi(2));
                Some(first_step(first) + (step - 1) as f64 * per_step)
            }
            Policy::RandomAxis => None,
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Policy::Fixed(a) => write!(
                f,
                "fixed({}°,{}°)",
                format_angle(a.theta().to_degrees()),
                format_angle(a.phi().to_degrees())
            ),
            Policy::Alternating { first, second } => {
                write!(
                    f,
                    "alternating({}°)",
                    format_angle(first.angle_to(second).to_degrees())
                )
            }
            Policy::RandomAxis => f.write_str("random_axis"),
        }
    }
}

fn format_angle(deg: f64) -> String {
    let r = (deg * 1e6).round() / 1e6;
    format!("{r}")
}

impl Serialize for Policy {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Plug-in Shannon entropy of the empirical distribution of outcome prefixes
/// of length `upto_step`.
pub fn record_entropy(records: &[OutcomeRecord], upto_step: usize) -> Result<f64> {
    Ok(prefix_entropy_with_stderr(records, upto_step)?.0)
}

/// Plug-in entropy plus its jackknife standard error.
pub fn prefix_entropy_with_stderr(
    records: &[OutcomeRecord],
    upto_step: usize,
) -> Result<(f64, f64)> {
    if records.is_empty() {
        return Err(ExperimentError::EmptyRecordSet);
    }
    let len = records
        .iter()
        .map(|r| r.steps.len())
        .min()
        .unwrap_or(0)
        .min(MAX_STEPS);
    if upto_step == 0 || upto_step > len {
        return Err(ExperimentError::StepOutOfRange {
            step: upto_step,
            len,
        });
    }
    let mut counts: HashMap<u64, u64> = HashMap::new();
    for r in records {
        *counts.entry(r.prefix_code(upto_step)).or_default() += 1;
    }
    // sort so floating-point summation order is fixed
    let mut counts: Vec<(u64, u64)> = counts.into_iter().collect();
    counts.sort_unstable();
    let weights: Vec<f64> = counts.iter().map(|&(_, c)| c as f64).collect();
    let h = shannon_entropy(
        &ProbVector::from_weights(weights.iter().copied()).expect("positive counts"),
    );
    Ok((h, jackknife_stderr(&weights)))
}

fn jackknife_stderr(counts: &[f64]) -> f64 {
    let n: f64 = counts.iter().sum();
    if n < 2.0 {
        return 0.0;
    }
    let xlogx = |x: f64| if x > 0.0 { x * x.log2() } else { 0.0 };
    let s: f64 = counts.iter().map(|&c| xlogx(c)).sum();
    // entropy with one observation removed from a category of count c
    let loo = |c: f64| (n - 1.0).log2() - (s - xlogx(c) + xlogx(c - 1.0)) / (n - 1.0);
    let mean: f64 = counts.iter().map(|&c| c * loo(c)).sum::<f64>() / n;
    let var: f64 = counts
        .iter()
        .map(|&c| c * (loo(c) - mean).powi(2))
        .sum::<f64>()
        * (n - 1.0)
        / n;
    var.max(0.0).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthPoint {
    /// One-based number of measurements made.
    pub step: usize,
    pub empirical_entropy_bits: f64,
    pub exact_entropy_bits: Option<f64>,
    pub stderr_bits: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthCurve {
    pub policy: Policy,
    pub trials: u64,
    pub seed: u64,
    pub steps: Vec<GrowthPoint>,
}

impl GrowthCurve {
    /// Per-step increases of the empirical entropy, starting at step 2.
    pub fn increments(&self) -> Vec<f64> {
        self.steps
            .windows(2)
            .map(|w| w[1].empirical_entropy_bits - w[0].empirical_entropy_bits)
            .collect()
    }

    /// No step drops by more than three combined standard errors.
    pub fn is_non_decreasing(&self) -> bool {
        self.steps.windows(2).all(|w| {
            let se = (w[0].stderr_bits.powi(2) + w[1].stderr_bits.powi(2)).sqrt();
            w[1].empirical_entropy_bits >= w[0].empirical_entropy_bits - 3.0 * se - 1e-12
        })
    }

    /// `step,empirical_entropy_bits,exact_entropy_bits,stderr_bits`, 6 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,empirical_entropy_bits,exact_entropy_bits,stderr_bits\n");
        for p in &self.steps {
            out.push_str(&format!(
                "{},{},{},{}\n",
                p.step,
                crate::fmt_sig(p.empirical_entropy_bits),
                p.exact_entropy_bits.map(crate::fmt_sig).unwrap_or_default(),
                crate::fmt_sig(p.stderr_bits),
            ));
        }
        out
    }
}

/// Runs `trials` chains of `steps` measurements from `|z+⟩`.
pub fn entropy_growth(
    policy: &Policy,
    steps: usize,
    trials: u64,
    seed: u64,
) -> Result<GrowthCurve> {
    entropy_growth_from(&PureState::z_plus(), policy, steps, trials, seed)
}

pub fn entropy_growth_from(
    initial: &PureState,
    policy: &Policy,
    steps: usize,
    trials: u64,
    seed: u64,
) -> Result<GrowthCurve> {
    if steps == 0 || steps > MAX_STEPS {
        return Err(ExperimentError::InvalidParameters(format!(
            "steps must be in 1..={MAX_STEPS}, got {steps}"
        )));
    }
    if trials == 0 {
        return Err(ExperimentError::InvalidParameters(
            "trials must be at least 1".into(),
        ));
    }
    let records = (0..trials)
        .into_par_iter()
        .map(|i| {
            let trial_seed = sub_seed(seed, i);
            run_chain(initial, &policy.contexts(steps, trial_seed), trial_seed)
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let points = (1..=steps)
        .map(|k| {
            let (h, se) = prefix_entropy_with_stderr(&records, k)?;
            Ok(GrowthPoint {
                step: k,
                empirical_entropy_bits: h,
                exact_entropy_bits: policy.exact_entropy(initial, k),
                stderr_bits: se,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GrowthCurve {
        policy: *policy,
        trials,
        seed,
        steps: points,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    Flat,
    Increasing,
    Inconclusive,
}

impl fmt::Display for Trend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Trend::Flat => "flat",
            Trend::Increasing => "increasing",
            Trend::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArmVerdict {
    pub policy: Policy,
    pub expected: Trend,
    pub observed: Trend,
    pub max_increment: f64,
    pub min_increment: f64,
    pub mean_increment: f64,
    pub non_decreasing: bool,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SecondLawReport {
    pub arms: Vec<ArmVerdict>,
    pub all_hold: bool,
}

fn expected_trend(policy: &Policy) -> Trend {
    match policy {
        Policy::Fixed(_) => Trend::Flat,
        Policy::Alternating { first, second } => {
            let per_step = binary_entropy((first.angle_to(second) / 2.0).cos().powi(2));
            if per_step < FLAT_TOLERANCE {
                Trend::Flat
            } else {
                Trend::Increasing
            }
        }
        Policy::RandomAxis => Trend::Increasing,
    }
}

/// Classifies each curve after its first step: flat if no increment reaches
/// [`FLAT_TOLERANCE`], increasing if every increment exceeds it.
pub fn second_law_report(curves: &[GrowthCurve]) -> Result<SecondLawReport> {
    if curves.is_empty() {
        return Err(ExperimentError::InsufficientData("no curves".into()));
    }
    let arms = curves
        .iter()
        .map(|curve| {
            let inc = curve.increments();
            if inc.is_empty() {
                return Err(ExperimentError::InsufficientData(format!(
                    "curve for {} has fewer than 2 steps",
                    curve.policy
                )));
            }
            let max_increment = inc.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let min_increment = inc.iter().copied().fold(f64::INFINITY, f64::min);
            let mean_increment = inc.iter().sum::<f64>() / inc.len() as f64;
            let observed = if inc.iter().all(|d| d.abs() < FLAT_TOLERANCE) {
                Trend::Flat
            } else if min_increment > FLAT_TOLERANCE {
                Trend::Increasing
            } else {
                Trend::Inconclusive
            };
            let expected = expected_trend(&curve.policy);
            let non_decreasing = curve.is_non_decreasing();
            Ok(ArmVerdict {
                policy: curve.policy,
                expected,
                observed,
                max_increment,
                min_increment,
                mean_increment,
                non_decreasing,
                holds: observed == expected && non_decreasing,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SecondLawReport {
        all_hold: arms.iter().all(|a| a.holds),
        arms,
    })
}

/// `"fixed"`, `"random_axis"` or `{"alternating_deg": θ}`.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
pub enum PolicySpec {
    Named(NamedPolicy),
    Alternating { alternating_deg: f64 },
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedPolicy {
    Fixed,
    RandomAxis,
}

impl PolicySpec {
    pub fn policy(&self) -> Result<Policy> {
        match *self {
            PolicySpec::Named(NamedPolicy::Fixed) => Ok(Policy::fixed_z()),
            PolicySpec::Named(NamedPolicy::RandomAxis) => Ok(Policy::RandomAxis),
            PolicySpec::Alternating { alternating_deg } => Policy::alternating_deg(alternating_deg),
        }
    }
}

/// Experiment configuration file.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrowthConfig {
    pub policy: PolicySpec,
    pub steps: usize,
    pub trials: u64,
    #[serde(default)]
    pub seed: u64,
    /// Overrides the default `|z+⟩` starting state.
    #[serde(default)]
    pub initial: Option<InitialSpec>,
}

impl GrowthConfig {
    pub fn initial_state(&self) -> Result<PureState> {
        Ok(match self.initial {
            Some(spec) => PureState::eigenstate(
                SpinAxis::from_degrees(spec.axis_deg[0], spec.axis_deg[1])?,
                spec.sign,
            ),
            None => PureState::z_plus(),
        })
    }
}
