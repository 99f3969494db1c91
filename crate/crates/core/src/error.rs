use std::fmt;

use thiserror::Error;

use crate::boolfun::BoolFun;
use crate::circuit::Violation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoolFunError {
    #[error("assignment has {got} values, function has arity {expected}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("arity {arity} exceeds the maximum of {max}")]
    ArityTooLarge { arity: usize, max: usize },
    #[error("truth table must have exactly {expected} entries")]
    TableLength { expected: usize },
    #[error("projection index {index} out of range for arity {arity}")]
    ProjectionIndex { arity: usize, index: usize },
}

/// A syntax or semantic error in a text input, with a 1-based line number.
/// Line 0 refers to the input as a whole.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            f.write_str(&self.message)
        } else {
            write!(f, "line {}: {}", self.line, self.message)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BaseError {
    #[error("a gate base needs at least one gate")]
    Empty,
    #[error("duplicate gate name `{0}`")]
    DuplicateName(String),
    #[error("invalid gate name `{0}`")]
    InvalidName(String),
    #[error("gate `{name}` has arity {arity}, above the maximum of {max}")]
    ArityTooLarge {
        name: String,
        arity: usize,
        max: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("invalid circuit: {0}")]
    Invalid(#[from] Violation),
    #[error("expected {expected} {what} values, got {got}")]
    InputLength {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("exhaustive evaluation over {vars} variables exceeds the bound of {bound}")]
    BoundExceeded { vars: usize, bound: usize },
    #[error("deterministic comparison of a circuit with {m} non-deterministic inputs")]
    DetWithNondetInputs { m: usize },
    #[error("circuits have different numbers of ordinary inputs ({left} and {right})")]
    InputCountMismatch { left: usize, right: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CloneError {
    #[error("arity bound {bound} exceeds the maximum of {max}")]
    ArityBound { bound: usize, max: usize },
    #[error("function of arity {arity} is outside the closure's arity bound {bound}")]
    OutOfBound { arity: usize, bound: usize },
    #[error(
        "internal contradiction: base is neither monotone, linear nor self-dual \
         but its arity-3 closure contains neither gadget"
    )]
    GadgetNotFound,
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("gate `{name}` is not {required}")]
    GateClass {
        name: String,
        required: &'static str,
    },
    #[error("gate `{name}` ({fun}) is not allowed here; expected one of {allowed}")]
    BaseMismatch {
        name: String,
        fun: BoolFun,
        allowed: &'static str,
    },
    #[error("function {fun} of gate `{name}` is not a member of the target closure")]
    MissingMember { name: String, fun: BoolFun },
    #[error("required function {0} is not a member of the closure")]
    MissingFunction(BoolFun),
    #[error("the circuit needs at least one ordinary input")]
    NoOrdinaryInputs,
    #[error("the circuit has {0} non-deterministic inputs; a deterministic circuit is required")]
    NondeterministicInput(usize),
    #[error("closure must be computed without free constants")]
    ConstantsInClosure,
    #[error(
        "accepted function is not self-dual: f({}) = f({})",
        bits(first),
        bits(second)
    )]
    NotSelfDual { first: Vec<bool>, second: Vec<bool> },
    #[error("affine form disagrees with the circuit on x,y = {}", bits(assignment))]
    AffineMismatch { assignment: Vec<bool> },
    #[error("function is not {}-reproducing", *polarity as u8)]
    NotReproducing { polarity: bool },
    #[error(
        "no {}-separating input; per-input witness rows: {}",
        *polarity as u8,
        rows.iter().map(|r| bits(r)).collect::<Vec<_>>().join(", ")
    )]
    NoSeparatingInput {
        polarity: bool,
        rows: Vec<Vec<bool>>,
    },
    #[error("result cannot be expressed over the target base: {0}")]
    Unrepresentable(String),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Clone(#[from] CloneError),
}

impl From<Violation> for TransformError {
    fn from(v: Violation) -> Self {
        TransformError::Circuit(CircuitError::Invalid(v))
    }
}

/// Renders an assignment as a bit string, `x_1` first.
pub fn bits(assignment: &[bool]) -> String {
    assignment
        .iter()
        .map(|&b| if b { '1' } else { '0' })
        .collect()
}
