//! Classification of finite Boolean gate bases by the power of
//! non-deterministic circuits over them, and the constructive circuit
//! transformations behind it.
//!
//! * [`boolfun`]: truth tables and the monotone / affine / self-dual /
//!   reproducing / separating predicates.
//! * [`clone`]: gate bases, arity-bounded clone closures with witness
//!   circuits, completeness and [`clone::classify`].
//! * [`circuit`]: the circuit IR, bit-parallel exhaustive evaluation under
//!   deterministic and non-deterministic semantics, and the text format.
//! * [`transform`]: base conversion, determinizers, lifts and NOT elimination.

pub mod boolfun;
pub mod circuit;
pub mod clone;
pub mod error;
pub mod random;
pub mod transform;

pub use boolfun::BoolFun;
pub use circuit::{Circuit, CircuitBuilder, Equivalence, Node, Oracle, Semantics};
pub use clone::{
    classify, closure, is_complete, CloneClosure, GateBase, PowerClassification, Verdict,
};
pub use error::{BaseError, BoolFunError, CircuitError, CloneError, ParseError, TransformError};
