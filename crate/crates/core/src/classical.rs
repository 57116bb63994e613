//! Classical instantiations: the two-state bit domain, a puzzle whose pieces
//! each reveal one bit of a hidden message, and the determinism threshold
//! past which the message is predictable.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::info::{InfoError, ProbVector};

/// Largest message length for which the full class of `2^N` strings is enumerated.
pub const MAX_FULL_CLASS_BITS: usize = 24;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PuzzleError {
    #[error("message length must be positive")]
    ZeroLength,
    #[error(
        "full hypothesis class over {0} bits is too large to enumerate (max {MAX_FULL_CLASS_BITS})"
    )]
    ClassTooLarge(usize),
    #[error("hypothesis `{found}` has length {len}, expected {expected}")]
    LengthMismatch {
        found: String,
        len: usize,
        expected: usize,
    },
    #[error("invalid bit string `{0}`")]
    InvalidBitString(String),
    #[error("bit value must be 0 or 1, got {0}")]
    InvalidBit(u8),
    #[error("piece index {index} out of range for a {len}-bit message")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("piece {0} is already placed")]
    AlreadyPlaced(usize),
    #[error("placing bit {bit} at {index} leaves no consistent hypothesis")]
    InconsistentReveal { index: usize, bit: u8 },
    #[error("no hypothesis is consistent with the revealed pieces")]
    InconsistentState,
    #[error("confidence must lie in (0, 1], got {0}")]
    InvalidConfidence(f64),
    #[error("trajectory state {0} does not extend the previous state's reveals")]
    NonMonotoneTrajectory(usize),
    #[error(transparent)]
    Distribution(#[from] InfoError),
}

pub type Result<T> = std::result::Result<T, PuzzleError>;

/// Admissible values of a measurement outcome plus whether they exclude each other.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitDomainSpec {
    pub values: BTreeSet<u64>,
    pub exclusive: bool,
}

impl BitDomainSpec {
    pub fn new<I: IntoIterator<Item = u64>>(values: I, exclusive: bool) -> Self {
        BitDomainSpec {
            values: values.into_iter().collect(),
            exclusive,
        }
    }
}

/// A bit is exactly two mutually exclusive values, 0 and 1.
pub fn is_bit_domain(spec: &BitDomainSpec) -> bool {
    spec.exclusive && spec.values == BTreeSet::from([0, 1])
}

/// A message of 0/1 values, ordered lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitString(Vec<u8>);

impl BitString {
    pub fn from_bits(bits: Vec<u8>) -> Result<Self> {
        if let Some(&b) = bits.iter().find(|&&b| b > 1) {
            return Err(PuzzleError::InvalidBit(b));
        }
        Ok(BitString(bits))
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn from_index(value: u64, n: usize) -> Self {
        // most significant bit first so numeric and lexicographic order agree
        BitString((0..n).map(|i| ((value >> (n - 1 - i)) & 1) as u8).collect())
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = PuzzleError;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(PuzzleError::InvalidBitString(s.to_string())),
            })
            .collect::<Result<Vec<u8>>>()
            .map(BitString)
    }
}

impl Serialize for BitString {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// The set of messages the puzzle might contain, under a uniform prior.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HypothesisClass {
    /// Every bit string of the message length.
    Full,
    /// Strings that repeat with some period `p ≤ max_period`.
    Periodic {
        max_period: usize,
    },
    Explicit(Vec<BitString>),
}

impl HypothesisClass {
    /// Sorted, deduplicated enumeration of the class for messages of length `n`.
    pub fn enumerate(&self, n: usize) -> Result<Vec<BitString>> {
        if n == 0 {
            return Err(PuzzleError::ZeroLength);
        }
        let mut out: Vec<BitString> = match self {
            HypothesisClass::Full => {
                if n > MAX_FULL_CLASS_BITS {
                    return Err(PuzzleError::ClassTooLarge(n));
                }
                (0..1u64 << n)
                    .map(|v| BitString::from_index(v, n))
                    .collect()
            }
            HypothesisClass::Periodic { max_period } => {
                let mut v = Vec::new();
                for p in 1..=(*max_period).min(n) {
                    for pattern in 0..1u64 << p {
                        let unit = BitString::from_index(pattern, p);
                        v.push(BitString((0..n).map(|i| unit.0[i % p]).collect()));
                    }
                }
                v
            }
            HypothesisClass::Explicit(list) => {
                if let Some(bad) = list.iter().find(|h| h.len() != n) {
                    return Err(PuzzleError::LengthMismatch {
                        found: bad.to_string(),
                        len: bad.len(),
                        expected: n,
                    });
                }
                list.clone()
            }
        };
        out.sort();
        out.dedup();
        Ok(out)
    }
}

/// Partial knowledge of the message: which pieces are placed, and what could still be true.
#[derive(Debug, Clone)]
pub struct PuzzleState {
    len: usize,
    revealed: BTreeMap<usize, u8>,
    hypotheses: Arc<[BitString]>,
}

impl PuzzleState {
    pub fn new(len: usize, class: &HypothesisClass) -> Result<Self> {
        let hypotheses = class.enumerate(len)?;
        Ok(PuzzleState {
            len,
            revealed: BTreeMap::new(),
            hypotheses: hypotheses.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn revealed(&self) -> &BTreeMap<usize, u8> {
        &self.revealed
    }

    pub fn hypotheses(&self) -> &[BitString] {
        &self.hypotheses
    }

    fn matches(&self, h: &BitString) -> bool {
        self.revealed.iter().all(|(&i, &b)| h.0[i] == b)
    }

    /// Hypotheses that agree with every placed piece, in lexicographic order.
    pub fn consistent(&self) -> impl Iterator<Item = &BitString> + '_ {
        self.hypotheses.iter().filter(|h| self.matches(h))
    }

    pub fn place_piece(&self, index: usize, bit: u8) -> Result<PuzzleState> {
        if bit > 1 {
            return Err(PuzzleError::InvalidBit(bit));
        }
        if index >= self.len {
            return Err(PuzzleError::IndexOutOfRange {
                index,
                len: self.len,
            });
        }
        if self.revealed.contains_key(&index) {
            return Err(PuzzleError::AlreadyPlaced(index));
        }
        let mut next = self.clone();
        next.revealed.insert(index, bit);
        if next.consistent().next().is_none() {
            return Err(PuzzleError::InconsistentReveal { index, bit });
        }
        Ok(next)
    }

    /// Uniform posterior over the consistent hypotheses.
    pub fn posterior(&self) -> Result<ProbVector> {
        let count = self.consistent().count();
        if count == 0 {
            return Err(PuzzleError::InconsistentState);
        }
        Ok(ProbVector::uniform(count)?)
    }

    /// Remaining uncertainty: `log₂` of the number of consistent hypotheses.
    pub fn entropy(&self) -> Result<f64> {
        match self.consistent().count() {
            0 => Err(PuzzleError::InconsistentState),
            c => Ok((c as f64).log2()),
        }
    }

    /// Maximum-posterior hypothesis if its posterior reaches `confidence`.
    /// Ties go to the lexicographically smallest string.
    pub fn predict_message(&self, confidence: f64) -> Result<Option<BitString>> {
        if !(confidence > 0.0 && confidence <= 1.0) {
            return Err(PuzzleError::InvalidConfidence(confidence));
        }
        let mut consistent = self.consistent();
        let best = consistent.next().ok_or(PuzzleError::InconsistentState)?;
        let count = 1 + consistent.count();
        Ok((1.0 / count as f64 >= confidence).then(|| best.clone()))
    }
}

pub fn place_piece(state: &PuzzleState, index: usize, bit: u8) -> Result<PuzzleState> {
    state.place_piece(index, bit)
}

pub fn puzzle_entropy(state: &PuzzleState) -> Result<f64> {
    state.entropy()
}

pub fn predict_message(state: &PuzzleState, confidence: f64) -> Result<Option<BitString>> {
    state.predict_message(confidence)
}

/// A sequence of knowledge states, each extending the previous one's reveals.
#[derive(Debug, Clone)]
pub struct Trajectory {
    states: Vec<PuzzleState>,
    static_message: bool,
}

impl Trajectory {
    pub fn new(states: Vec<PuzzleState>, static_message: bool) -> Result<Self> {
        for (k, pair) in states.windows(2).enumerate() {
            let extends = pair[0]
                .revealed
                .iter()
                .all(|(i, b)| pair[1].revealed.get(i) == Some(b));
            if !extends {
                return Err(PuzzleError::NonMonotoneTrajectory(k + 1));
            }
        }
        Ok(Trajectory {
            states,
            static_message,
        })
    }

    /// `initial` followed by one state per reveal, so state `k` has `k` more pieces.
    pub fn from_reveals(
        initial: PuzzleState,
        reveals: &[(usize, u8)],
        static_message: bool,
    ) -> Result<Self> {
        let mut states = Vec::with_capacity(reveals.len() + 1);
        states.push(initial);
        for &(i, b) in reveals {
            let next = states.last().expect("nonempty").place_piece(i, b)?;
            states.push(next);
        }
        Trajectory::new(states, static_message)
    }

    pub fn states(&self) -> &[PuzzleState] {
        &self.states
    }

    pub fn is_static(&self) -> bool {
        self.static_message
    }

    /// Index of the earliest state from which prediction at `confidence`
    /// succeeds and keeps succeeding. `None` for a mutating message or when
    /// the trajectory never gets there.
    pub fn determinism_threshold(&self, confidence: f64) -> Result<Option<usize>> {
        if !self.static_message {
            return Ok(None);
        }
        let ok = self
            .states
            .iter()
            .map(|s| s.predict_message(confidence).map(|p| p.is_some()))
            .collect::<Result<Vec<bool>>>()?;
        let first_failure_from_end = ok.iter().rposition(|&b| !b);
        Ok(match first_failure_from_end {
            None if ok.is_empty() => None,
            None => Some(0),
            Some(k) if k + 1 < ok.len() => Some(k + 1),
            Some(_) => None,
        })
    }
}

pub fn determinism_threshold(t: &Trajectory, confidence: f64) -> Result<Option<usize>> {
    t.determinism_threshold(confidence)
}

/// Class field of a puzzle scenario file: `"full"`, `{"periodic": k}`, or a list of bit strings.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ClassSpec {
    Named(NamedClass),
    Periodic { periodic: usize },
    Explicit(Vec<String>),
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NamedClass {
    Full,
}

impl ClassSpec {
    pub fn to_class(&self) -> Result<HypothesisClass> {
        Ok(match self {
            ClassSpec::Named(NamedClass::Full) => HypothesisClass::Full,
            ClassSpec::Periodic { periodic } => HypothesisClass::Periodic {
                max_period: *periodic,
            },
            ClassSpec::Explicit(list) => {
                HypothesisClass::Explicit(list.iter().map(|s| s.parse()).collect::<Result<_>>()?)
            }
        })
    }
}

/// Puzzle scenario file: `{"N": 8, "class": ..., "reveals": [[0,1],[3,0]], "confidence": 0.99}`.
/// `static` defaults to true.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PuzzleScenario {
    #[serde(rename = "N")]
    pub len: usize,
    pub class: ClassSpec,
    #[serde(default)]
    pub reveals: Vec<(usize, u8)>,
    pub confidence: f64,
    #[serde(default = "default_static", rename = "static")]
    pub static_message: bool,
}

fn default_static() -> bool {
    true
}

impl PuzzleScenario {
    pub fn trajectory(&self) -> Result<Trajectory> {
        let initial = PuzzleState::new(self.len, &self.class.to_class()?)?;
        Trajectory::from_reveals(initial, &self.reveals, self.static_message)
    }
}
