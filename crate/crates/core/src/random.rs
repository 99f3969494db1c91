//! Seeded generators for random bases and circuits, used by property tests
//! and the acceptance suite.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::boolfun::BoolFun;
use crate::circuit::{Circuit, CircuitBuilder, NodeId};
use crate::clone::GateBase;

/// Shape of a random circuit.
#[derive(Debug, Clone, Copy)]
pub struct CircuitShape {
    pub n: usize,
    pub m: usize,
    pub gates: usize,
    /// Adds `const 0` and `const 1` leaves the gates may read.
    pub constants: bool,
}

/// A random circuit over the gates of `base`. Operands prefer recent nodes so
/// that circuits have some depth; the output is the last node.
pub fn circuit<R: Rng + ?Sized>(rng: &mut R, base: &Arc<GateBase>, shape: CircuitShape) -> Circuit {
    let mut b = CircuitBuilder::new(base.clone(), shape.n, shape.m);
    let mut pool: Vec<NodeId> = Vec::new();
    for i in 1..=shape.n {
        pool.push(b.input(i));
    }
    for j in 1..=shape.m {
        pool.push(b.nondet(j));
    }
    if shape.constants {
        pool.push(b.constant(false));
        pool.push(b.constant(true));
    }
    if pool.is_empty() {
        pool.push(b.constant(rng.gen()));
    }
    let gates: Vec<(&str, &BoolFun)> = base.iter().collect();
    for _ in 0..shape.gates {
        let (name, fun) = *gates.choose(rng).expect("non-empty base");
        let ops: Vec<NodeId> = (0..fun.arity())
            .map(|_| {
                if rng.gen_bool(0.5) {
                    let window = pool.len().min(4);
                    pool[pool.len() - 1 - rng.gen_range(0..window)]
                } else {
                    *pool.choose(rng).unwrap()
                }
            })
            .collect();
        pool.push(b.gate(name, &ops).expect("operands precede the gate"));
    }
    let out = *pool.last().unwrap();
    b.build(out).expect("random circuits are well formed")
}

/// A random base of `1..=max_gates` gates with arities in `0..=max_arity`.
pub fn base<R: Rng + ?Sized>(rng: &mut R, max_gates: usize, max_arity: usize) -> GateBase {
    let count = rng.gen_range(1..=max_gates);
    let entries = (0..count)
        .map(|i| {
            let arity = rng.gen_range(0..=max_arity);
            let table = rng.gen::<u64>() & crate::boolfun::low_mask(arity);
            (format!("G{i}"), BoolFun::from_u64(arity, table).unwrap())
        })
        .collect();
    GateBase::new(entries).expect("generated names are distinct")
}
