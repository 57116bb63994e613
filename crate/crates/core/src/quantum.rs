//! Spin-½ states, measurement contexts and sequential projective measurement.
//!
//! A [`Context`] is the eigenbasis of the spin component along one spatial
//! axis. Chains of measurements are simulated with [`run_chain`], which is
//! reproducible per seed, and enumerated exactly with [`chain_distribution`].

use std::f64::consts::PI;
use std::fmt;

use nalgebra::{Complex, Matrix2};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::info::{binary_entropy, shannon_entropy, InfoError, ProbVector};

pub type C64 = Complex<f64>;

/// Norm and orthogonality tolerance for state vectors.
pub const STATE_TOLERANCE: f64 = 1e-12;
/// Outcomes at or below this probability cannot be collapsed onto.
pub const IMPOSSIBLE_PROBABILITY: f64 = 1e-12;
/// Longest chain [`chain_distribution`] will enumerate.
pub const MAX_EXACT_CHAIN: usize = 20;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QuantumError {
    #[error("invalid axis: {0}")]
    InvalidAxis(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),
    #[error("outcome {outcome} has probability {probability:e}")]
    ImpossibleOutcome { outcome: Outcome, probability: f64 },
    #[error("measurement chain is empty")]
    EmptyChain,
    #[error("chain of {len} steps exceeds the exact enumeration limit of {max}")]
    ChainTooLong { len: usize, max: usize },
    #[error(transparent)]
    Distribution(#[from] InfoError),
}

pub type Result<T> = std::result::Result<T, QuantumError>;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn inner(a: &[C64; 2], b: &[C64; 2]) -> C64 {
    a[0].conj() * b[0] + a[1].conj() * b[1]
}

/// Direction in space, polar angle from +z and azimuth from +x, in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpinAxis {
    theta: f64,
    phi: f64,
}

impl SpinAxis {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !phi.is_finite() {
            return Err(QuantumError::InvalidAxis(format!(
                "non-finite angles ({theta}, {phi})"
            )));
        }
        if !(0.0..=PI).contains(&theta) {
            return Err(QuantumError::InvalidAxis(format!(
                "polar angle {theta} outside [0, π]"
            )));
        }
        if !(0.0..2.0 * PI).contains(&phi) {
            return Err(QuantumError::InvalidAxis(format!(
                "azimuth {phi} outside [0, 2π)"
            )));
        }
        Ok(SpinAxis { theta, phi })
    }

    /// Polar angle must lie in [0°, 180°]; the azimuth is wrapped into [0°, 360°).
    pub fn from_degrees(theta_deg: f64, phi_deg: f64) -> Result<Self> {
        let phi = phi_deg.rem_euclid(360.0).to_radians();
        // rem_euclid can round up to exactly 2π
        let phi = if phi >= 2.0 * PI { 0.0 } else { phi };
        SpinAxis::new(theta_deg.to_radians(), phi)
    }

    /// Axis in the x-z plane at `angle` radians from +z towards +x. Negative
    /// angles tilt towards −x.
    pub fn in_xz_plane(angle: f64) -> Result<Self> {
        if !angle.is_finite() {
            return Err(QuantumError::InvalidAxis(format!(
                "non-finite angle {angle}"
            )));
        }
        let a = (angle + PI).rem_euclid(2.0 * PI) - PI;
        if a >= 0.0 {
            SpinAxis::new(a.min(PI), 0.0)
        } else {
            SpinAxis::new(-a, PI)
        }
    }

    pub fn z() -> Self {
        SpinAxis {
            theta: 0.0,
            phi: 0.0,
        }
    }

    pub fn x() -> Self {
        SpinAxis {
            theta: PI / 2.0,
            phi: 0.0,
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn unit_vector(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    /// Angle between the two axes in [0, π].
    pub fn angle_to(&self, other: &SpinAxis) -> f64 {
        let (u, v) = (self.unit_vector(), other.unit_vector());
        let dot: f64 = u.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
        dot.clamp(-1.0, 1.0).acos()
    }
}

/// Result of a single spin measurement: aligned (+) or anti-aligned (−) with the axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Outcome {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Outcome {
    pub const BOTH: [Outcome; 2] = [Outcome::Plus, Outcome::Minus];

    pub fn index(self) -> usize {
        match self {
            Outcome::Plus => 0,
            Outcome::Minus => 1,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Plus => "+",
            Outcome::Minus => "-",
        })
    }
}

/// Renders an outcome sequence as e.g. `+-+`.
pub fn sequence_label(seq: &[Outcome]) -> String {
    seq.iter().map(Outcome::to_string).collect()
}

/// A measurement basis: the spin eigenpair along `axis`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Context {
    axis: SpinAxis,
    plus: [C64; 2],
    minus: [C64; 2],
}

impl Context {
    /// `|+⟩ = (cos θ/2, e^{iφ} sin θ/2)`, `|−⟩ = (sin θ/2, −e^{iφ} cos θ/2)`.
    pub fn new(axis: SpinAxis) -> Self {
        let (s, co) = (axis.theta / 2.0).sin_cos();
        let phase = C64::from_polar(1.0, axis.phi);
        Context {
            axis,
            plus: [c(co), phase * s],
            minus: [c(s), -phase * co],
        }
    }

    pub fn axis(&self) -> SpinAxis {
        self.axis
    }

    pub fn eigenvector(&self, outcome: Outcome) -> [C64; 2] {
        match outcome {
            Outcome::Plus => self.plus,
            Outcome::Minus => self.minus,
        }
    }

    pub fn eigenstate(&self, outcome: Outcome) -> PureState {
        PureState {
            amps: self.eigenvector(outcome),
        }
    }
}

pub fn context_from_axis(axis: SpinAxis) -> Context {
    Context::new(axis)
}

/// A normalized spin-½ state vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureState {
    amps: [C64; 2],
}

impl PureState {
    pub fn new(up: C64, down: C64) -> Result<Self> {
        let norm = (up.norm_sqr() + down.norm_sqr()).sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > STATE_TOLERANCE {
            return Err(QuantumError::InvalidState(format!("norm {norm} is not 1")));
        }
        Ok(PureState { amps: [up, down] })
    }

    pub fn normalized(up: C64, down: C64) -> Result<Self> {
        let norm = (up.norm_sqr() + down.norm_sqr()).sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(QuantumError::InvalidState(
                "cannot normalize a zero vector".into(),
            ));
        }
        PureState::new(up / norm, down / norm)
    }

    /// `|m±⟩` for the axis `m`.
    pub fn eigenstate(axis: SpinAxis, outcome: Outcome) -> Self {
        Context::new(axis).eigenstate(outcome)
    }

    pub fn z_plus() -> Self {
        PureState {
            amps: [c(1.0), c(0.0)],
        }
    }

    pub fn amplitudes(&self) -> [C64; 2] {
        self.amps
    }

    /// `|⟨self|other⟩|²`, insensitive to global phase.
    pub fn fidelity(&self, other: &PureState) -> f64 {
        inner(&self.amps, &other.amps).norm_sqr()
    }
}

/// `(|⟨m+|ψ⟩|², |⟨m−|ψ⟩|²)`.
pub fn born_probabilities(state: &PureState, ctx: &Context) -> ProbVector {
    let p = inner(&ctx.plus, &state.amps).norm_sqr();
    let m = inner(&ctx.minus, &state.amps).norm_sqr();
    let total = p + m;
    ProbVector::new(vec![p / total, m / total])
        .expect("Born weights of a unit state are a distribution")
}

/// Projects onto the eigenstate for `outcome`.
pub fn collapse(state: &PureState, ctx: &Context, outcome: Outcome) -> Result<PureState> {
    let probability = born_probabilities(state, ctx).probs()[outcome.index()];
    if probability <= IMPOSSIBLE_PROBABILITY {
        return Err(QuantumError::ImpossibleOutcome {
            outcome,
            probability,
        });
    }
    Ok(ctx.eigenstate(outcome))
}

/// One measurement in a chain.
#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub context: Context,
    pub outcome: Outcome,
    /// Probability of the observed outcome given the state before this step.
    pub probability: f64,
    pub post_state: PureState,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeRecord {
    pub seed: u64,
    pub steps: Vec<Step>,
}

impl OutcomeRecord {
    pub fn outcomes(&self) -> Vec<Outcome> {
        self.steps.iter().map(|s| s.outcome).collect()
    }

    /// Prefix of length `k` packed with the first step as the most significant bit (− = 1).
    pub fn prefix_code(&self, k: usize) -> u64 {
        self.steps[..k]
            .iter()
            .fold(0u64, |acc, s| (acc << 1) | s.outcome.index() as u64)
    }
}

/// Seed for trial `index` of an ensemble run from `master`, independent of scheduling.
pub fn sub_seed(master: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index);
    rng.next_u64()
}

/// Uniform draw for step `step` of the chain seeded by `seed`. Each step reads
/// its own position in the keystream, so draws do not depend on evaluation order.
fn step_uniform(rng: &mut ChaCha8Rng, step: usize) -> f64 {
    rng.set_word_pos(2 * step as u128);
    rng.gen::<f64>()
}

/// Samples each outcome from the Born rule, collapses, and moves on.
pub fn run_chain(initial: &PureState, contexts: &[Context], seed: u64) -> Result<OutcomeRecord> {
    if contexts.is_empty() {
        return Err(QuantumError::EmptyChain);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = *initial;
    let mut steps = Vec::with_capacity(contexts.len());
    for (i, ctx) in contexts.iter().enumerate() {
        let probs = born_probabilities(&state, ctx);
        let outcome = if step_uniform(&mut rng, i) < probs.probs()[0] {
            Outcome::Plus
        } else {
            Outcome::Minus
        };
        state = ctx.eigenstate(outcome);
        steps.push(Step {
            context: *ctx,
            outcome,
            probability: probs.probs()[outcome.index()],
            post_state: state,
        });
    }
    Ok(OutcomeRecord { seed, steps })
}

/// `trials` independent chains, trial `i` seeded with [`sub_seed`]`(seed, i)`.
pub fn run_ensemble(
    initial: &PureState,
    contexts: &[Context],
    trials: u64,
    seed: u64,
) -> Result<Vec<OutcomeRecord>> {
    (0..trials)
        .into_par_iter()
        .map(|i| run_chain(initial, contexts, sub_seed(seed, i)))
        .collect()
}

/// Exact probabilities of every outcome sequence of a chain.
///
/// Sequences are indexed by code, first step most significant, + = 0, so
/// code order is lexicographic order with + before −.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainDistribution {
    len: usize,
    probs: Vec<f64>,
}

pub fn chain_distribution(initial: &PureState, contexts: &[Context]) -> Result<ChainDistribution> {
    if contexts.is_empty() {
        return Err(QuantumError::EmptyChain);
    }
    if contexts.len() > MAX_EXACT_CHAIN {
        return Err(QuantumError::ChainTooLong {
            len: contexts.len(),
            max: MAX_EXACT_CHAIN,
        });
    }
    let mut probs = vec![0.0; 1 << contexts.len()];
    // the state after a step depends only on that step's outcome, so the tree
    // can be expanded level by level
    let mut level: Vec<(u64, f64, PureState)> = vec![(0, 1.0, *initial)];
    for ctx in contexts {
        let mut next = Vec::with_capacity(level.len() * 2);
        for (code, p, state) in level {
            let born = born_probabilities(&state, ctx);
            for o in Outcome::BOTH {
                next.push((
                    (code << 1) | o.index() as u64,
                    p * born.probs()[o.index()],
                    ctx.eigenstate(o),
                ));
            }
        }
        level = next;
    }
    for (code, p, _) in level {
        probs[code as usize] = p;
    }
    Ok(ChainDistribution {
        len: contexts.len(),
        probs,
    })
}

fn decode(code: u64, len: usize) -> Vec<Outcome> {
    (0..len)
        .map(|i| {
            if (code >> (len - 1 - i)) & 1 == 1 {
                Outcome::Minus
            } else {
                Outcome::Plus
            }
        })
        .collect()
}

impl ChainDistribution {
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// `(sequence, probability)` in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<Outcome>, f64)> + '_ {
        self.probs
            .iter()
            .enumerate()
            .map(move |(code, &p)| (decode(code as u64, self.len), p))
    }

    pub fn probability(&self, seq: &[Outcome]) -> f64 {
        if seq.len() != self.len {
            return 0.0;
        }
        let code = seq.iter().fold(0usize, |acc, o| (acc << 1) | o.index());
        self.probs[code]
    }

    pub fn probability_by_code(&self, code: u64) -> f64 {
        self.probs[code as usize]
    }

    fn prefix_probs(&self, k: usize) -> Vec<f64> {
        let mut out = vec![0.0; 1 << k];
        for (code, &p) in self.probs.iter().enumerate() {
            out[code >> (self.len - k)] += p;
        }
        out
    }

    /// Marginal `(P(+), P(−))` at zero-based `step`.
    pub fn marginal(&self, step: usize) -> [f64; 2] {
        self.conditional(step, &[])
            .expect("unconditioned marginal always exists")
    }

    /// `(P(+), P(−))` at `step` given fixed outcomes at other steps; `None`
    /// when the conditioning event has probability zero.
    pub fn conditional(&self, step: usize, given: &[(usize, Outcome)]) -> Option<[f64; 2]> {
        let bit = |code: usize, i: usize| (code >> (self.len - 1 - i)) & 1;
        let mut acc = [0.0; 2];
        for (code, &p) in self.probs.iter().enumerate() {
            if given.iter().all(|&(i, o)| bit(code, i) == o.index()) {
                acc[bit(code, step)] += p;
            }
        }
        let total = acc[0] + acc[1];
        (total > IMPOSSIBLE_PROBABILITY).then(|| [acc[0] / total, acc[1] / total])
    }

    /// Shannon entropy of the first `k` outcomes.
    pub fn prefix_entropy(&self, k: usize) -> f64 {
        let probs = self.prefix_probs(k.min(self.len));
        let total: f64 = probs.iter().sum();
        shannon_entropy(
            &ProbVector::new(probs.iter().map(|p| p / total).collect()).expect("normalized"),
        )
    }

    /// Total-variation distance to the empirical sequence distribution of `records`.
    pub fn total_variation(&self, records: &[OutcomeRecord]) -> f64 {
        let mut counts = vec![0u64; self.probs.len()];
        for r in records {
            counts[r.prefix_code(self.len) as usize] += 1;
        }
        let n = records.len().max(1) as f64;
        0.5 * counts
            .iter()
            .zip(&self.probs)
            .map(|(&c, &p)| (c as f64 / n - p).abs())
            .sum::<f64>()
    }
}

/// `1 − H₂(cos²(θ/2))` for the angle θ between the axes: 1 for parallel or
/// antiparallel axes, 0 for orthogonal ones.
pub fn context_overlap(m: &SpinAxis, n: &SpinAxis) -> f64 {
    overlap_from_probability((m.angle_to(n) / 2.0).cos().powi(2))
}

fn overlap_from_probability(p: f64) -> f64 {
    (1.0 - binary_entropy(p)).clamp(0.0, 1.0)
}

/// Three-step chain `a → b → c` started in `|a+⟩`, with `a = z`, `b` at
/// `θ_ab` from `a`, and `c` at `θ_bc` back from `b`, all in the x-z plane.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResetReport {
    pub theta_ab_deg: f64,
    pub theta_bc_deg: f64,
    pub a_equals_c: bool,
    /// `(P(+), P(−))` of the third outcome given the first was +.
    pub third_given_first_plus: [f64; 2],
    /// Same, additionally given the second outcome was −; `None` if that branch is impossible.
    pub third_given_first_plus_second_minus: Option<[f64; 2]>,
    /// `context_overlap(a, c)` from the axes alone.
    pub overlap_a_c: f64,
    /// Overlap as seen through the chain: `1 − H₂(P(third = + | first = +))`.
    pub overlap_along_path: f64,
}

pub fn reset_demonstration() -> ResetReport {
    reset_demonstration_with(90.0, 90.0).expect("finite angles")
}

pub fn reset_demonstration_with(theta_ab_deg: f64, theta_bc_deg: f64) -> Result<ResetReport> {
    let a = SpinAxis::z();
    let b = SpinAxis::in_xz_plane(theta_ab_deg.to_radians())?;
    let c_axis = SpinAxis::in_xz_plane((theta_ab_deg - theta_bc_deg).to_radians())?;
    let contexts = [Context::new(a), Context::new(b), Context::new(c_axis)];
    let dist = chain_distribution(&PureState::eigenstate(a, Outcome::Plus), &contexts)?;
    let third = dist
        .conditional(2, &[(0, Outcome::Plus)])
        .expect("first outcome is + with certainty");
    Ok(ResetReport {
        theta_ab_deg,
        theta_bc_deg,
        a_equals_c: a.angle_to(&c_axis) < 1e-9,
        third_given_first_plus: third,
        third_given_first_plus_second_minus: dist
            .conditional(2, &[(0, Outcome::Plus), (1, Outcome::Minus)]),
        overlap_a_c: context_overlap(&a, &c_axis),
        overlap_along_path: overlap_from_probability(third[0]),
    })
}

/// A 2×2 density operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    m: Matrix2<C64>,
}

impl DensityMatrix {
    /// Checks Hermiticity (1e-12), unit trace (1e-9) and eigenvalues ≥ −1e-9.
    pub fn new(m: Matrix2<C64>) -> Result<Self> {
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(QuantumError::InvalidDensityMatrix(
                "non-finite entry".into(),
            ));
        }
        if (m - m.adjoint()).iter().any(|z| z.norm() > 1e-12) {
            return Err(QuantumError::InvalidDensityMatrix("not Hermitian".into()));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > 1e-9 || tr.im.abs() > 1e-12 {
            return Err(QuantumError::InvalidDensityMatrix(format!("trace {tr}")));
        }
        let d = DensityMatrix { m };
        let low = (1.0 - d.bloch_radius()) / 2.0;
        if low < -1e-9 {
            return Err(QuantumError::InvalidDensityMatrix(format!(
                "negative eigenvalue {low}"
            )));
        }
        Ok(d)
    }

    pub fn from_pure(state: &PureState) -> Self {
        let v = state.amps;
        DensityMatrix {
            m: Matrix2::new(
                v[0] * v[0].conj(),
                v[0] * v[1].conj(),
                v[1] * v[0].conj(),
                v[1] * v[1].conj(),
            ),
        }
    }

    pub fn maximally_mixed() -> Self {
        DensityMatrix {
            m: Matrix2::new(c(0.5), c(0.0), c(0.0), c(0.5)),
        }
    }

    pub fn diagonal(p0: f64, p1: f64) -> Result<Self> {
        DensityMatrix::new(Matrix2::new(c(p0), c(0.0), c(0.0), c(p1)))
    }

    pub fn matrix(&self) -> &Matrix2<C64> {
        &self.m
    }

    /// `U ρ U†`.
    pub fn conjugated(&self, u: &Matrix2<C64>) -> Result<Self> {
        DensityMatrix::new(u * self.m * u.adjoint())
    }

    /// Length of the Bloch vector, `|r|` with `ρ = (I + r·σ)/2`.
    fn bloch_radius(&self) -> f64 {
        let dz = self.m[(0, 0)].re - self.m[(1, 1)].re;
        let off = (self.m[(0, 1)] + self.m[(1, 0)].conj()) / 2.0;
        (dz * dz + 4.0 * off.norm_sqr()).sqrt()
    }
}

/// `−tr(ρ log₂ ρ)`, computed from the Bloch radius: the eigenvalues are `(1 ± |r|)/2`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    binary_entropy((1.0 + rho.bloch_radius().min(1.0)) / 2.0)
}

/// Eigenvalue spectrum of `ρ` in descending order, obtained by Hermitian
/// diagonalization. This is the classical distribution a measurement in the
/// eigenbasis would produce.
pub fn classical_projection(rho: &DensityMatrix) -> Result<ProbVector> {
    let eig = nalgebra::SymmetricEigen::new(rho.m);
    let mut vals: Vec<f64> = eig.eigenvalues.iter().map(|v| v.max(0.0)).collect();
    vals.sort_by(|a, b| b.total_cmp(a));
    Ok(ProbVector::new(vals)?)
}

/// `{"axis_deg": [θ, φ]}` in chain configuration files.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSpec {
    pub axis_deg: [f64; 2],
}

impl AxisSpec {
    pub fn axis(&self) -> Result<SpinAxis> {
        SpinAxis::from_degrees(self.axis_deg[0], self.axis_deg[1])
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSpec {
    pub axis_deg: [f64; 2],
    pub sign: Outcome,
}

/// Chain configuration file. Angles are in degrees.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainConfig {
    pub initial: InitialSpec,
    pub contexts: Vec<AxisSpec>,
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(default)]
    pub seed: u64,
}

fn default_trials() -> u64 {
    100_000
}

impl ChainConfig {
    pub fn initial_state(&self) -> Result<PureState> {
        let axis = SpinAxis::from_degrees(self.initial.axis_deg[0], self.initial.axis_deg[1])?;
        Ok(PureState::eigenstate(axis, self.initial.sign))
    }

    pub fn contexts(&self) -> Result<Vec<Context>> {
        self.contexts
            .iter()
            .map(|a| a.axis().map(Context::new))
            .collect()
    }
}
