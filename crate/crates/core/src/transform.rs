//! Circuit transformations: base conversion, determinization of monotone,
//! self-dual and linear circuits, constant-eliminating lifts over the two
//! gadget bases, and NOT elimination into separating bases.
//!
//! Every transform is a pure function from circuit to circuit. None of them
//! runs the equivalence oracle on its own output; callers that want the
//! guarantee checked (the CLI always does) compare truth tables afterwards.

use std::sync::Arc;

use crate::boolfun::{assignment_of, named, BoolFun};
use crate::circuit::{Circuit, CircuitBuilder, Node, NodeId, Oracle, Semantics};
use crate::clone::{self, standard, CloneClosure, GateBase};
use crate::error::TransformError;

/// `c ^ sum(a_i x_i) ^ sum(b_j y_j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineForm {
    pub x_coeffs: Vec<bool>,
    pub y_coeffs: Vec<bool>,
    pub constant: bool,
}

impl AffineForm {
    pub fn eval(&self, x: &[bool], y: &[bool]) -> bool {
        let dot = |coeffs: &[bool], v: &[bool]| {
            coeffs
                .iter()
                .zip(v)
                .fold(false, |acc, (&a, &b)| acc ^ (a & b))
        };
        self.constant ^ dot(&self.x_coeffs, x) ^ dot(&self.y_coeffs, y)
    }

    /// True iff some `y` coefficient is set, in which case `exists y` is constantly 1.
    pub fn depends_on_nondet(&self) -> bool {
        self.y_coeffs.iter().any(|&b| b)
    }
}

fn check_gates(
    c: &Circuit,
    required: &'static str,
    pred: impl Fn(&BoolFun) -> bool,
) -> Result<(), TransformError> {
    for name in c.gate_names() {
        let fun = c.base().get(name).expect("validated circuit");
        if !pred(fun) {
            return Err(TransformError::GateClass {
                name: name.to_string(),
                required,
            });
        }
    }
    Ok(())
}

/// Rebuilds `c` over `base` with `m` non-deterministic inputs, mapping leaf
/// nodes through `leaf`. Gates keep their names.
fn rebuild(
    c: &Circuit,
    base: Arc<GateBase>,
    n: usize,
    m: usize,
    mut leaf: impl FnMut(&Node, &mut CircuitBuilder) -> NodeId,
) -> Result<(CircuitBuilder, Vec<NodeId>), TransformError> {
    let mut b = CircuitBuilder::new(base, n, m);
    let mut map = Vec::with_capacity(c.nodes().len());
    for node in c.nodes() {
        let id = match node {
            Node::Gate { name, operands } => {
                let ops: Vec<NodeId> = operands.iter().map(|&o| map[o]).collect();
                b.gate(name, &ops)?
            }
            other => leaf(other, &mut b),
        };
        map.push(id);
    }
    Ok((b, map))
}

fn copy_leaf(node: &Node, b: &mut CircuitBuilder) -> NodeId {
    match node {
        Node::Input(i) => b.input(*i),
        Node::Nondet(j) => b.nondet(*j),
        Node::Const(v) => b.constant(*v),
        Node::Gate { .. } => unreachable!(),
    }
}

/// Replaces every gate by its witness in `target`. The result computes the
/// same function over `target`'s base, and grows by at most
/// `target.conversion_constant()` per gate.
pub fn convert_base(c: &Circuit, target: &CloneClosure) -> Result<Circuit, TransformError> {
    c.validate()?;
    let mut witnesses = std::collections::HashMap::new();
    for name in c.gate_names() {
        let fun = c.base().get(name).expect("validated circuit");
        let w = target
            .member(fun)?
            .ok_or_else(|| TransformError::MissingMember {
                name: name.to_string(),
                fun: fun.clone(),
            })?;
        witnesses.insert(name.to_string(), w);
    }
    let mut b = CircuitBuilder::new(target.base().clone(), c.n(), c.m());
    let mut map = Vec::with_capacity(c.nodes().len());
    for node in c.nodes() {
        let id = match node {
            Node::Gate { name, operands } => {
                let ops: Vec<NodeId> = operands.iter().map(|&o| map[o]).collect();
                b.inline(&witnesses[name], &ops)?
            }
            other => copy_leaf(other, &mut b),
        };
        map.push(id);
    }
    Ok(b.build(map[c.output()])?)
}

/// Substitutes the constant 1 for every non-deterministic input of a
/// circuit over monotone gates.
pub fn determinize_monotone(c: &Circuit) -> Result<Circuit, TransformError> {
    c.validate()?;
    check_gates(c, "monotone", BoolFun::is_monotone)?;
    let (b, map) = rebuild(c, c.base().clone(), c.n(), 0, |node, b| match node {
        Node::Nondet(_) => b.constant(true),
        other => copy_leaf(other, b),
    })?;
    Ok(b.build(map[c.output()])?)
}

/// Substitutes `x_1` for every non-deterministic input of a circuit over
/// self-dual gates. Requires the accepted function to be self-dual, which the
/// oracle checks; otherwise the error carries an input `x` that is accepted
/// (or rejected) together with its complement.
pub fn determinize_self_dual(c: &Circuit, oracle: &Oracle) -> Result<Circuit, TransformError> {
    c.validate()?;
    check_gates(c, "self-dual", BoolFun::is_self_dual)?;
    if c.n() == 0 {
        return Err(TransformError::NoOrdinaryInputs);
    }
    let f = oracle.truth_table(c, Semantics::Nondet)?;
    let last = f.table_len() - 1;
    if let Some(i) = (0..f.table_len()).find(|&i| f.bit(i) == f.bit(last - i)) {
        return Err(TransformError::NotSelfDual {
            first: assignment_of(i, c.n()),
            second: assignment_of(last - i, c.n()),
        });
    }
    let (b, map) = rebuild(c, c.base().clone(), c.n(), 0, |node, b| match node {
        Node::Nondet(_) => b.input(1),
        other => copy_leaf(other, b),
    })?;
    Ok(b.build(map[c.output()])?)
}

/// Reads off the affine normal form of a circuit over affine gates from its
/// values at zero and at the unit vectors, then confirms it on every input.
pub fn extract_affine(c: &Circuit, oracle: &Oracle) -> Result<AffineForm, TransformError> {
    c.validate()?;
    check_gates(c, "affine", BoolFun::is_affine)?;
    let (n, m) = (c.n(), c.m());
    let table = oracle.truth_table(c, Semantics::Det)?;
    let constant = table.bit(0);
    let coeff = |v: usize| table.bit(1 << v) ^ constant;
    let form = AffineForm {
        x_coeffs: (0..n).map(coeff).collect(),
        y_coeffs: (n..n + m).map(coeff).collect(),
        constant,
    };
    for i in 0..table.table_len() {
        let a = assignment_of(i, n + m);
        if form.eval(&a[..n], &a[n..]) != table.bit(i) {
            return Err(TransformError::AffineMismatch { assignment: a });
        }
    }
    Ok(form)
}

/// Rebuilds the accepted function of a circuit over affine gates as an
/// XOR/XNOR chain over `target`, using at most one gate per ordinary input
/// plus one when the target's witnesses are single gates.
pub fn determinize_linear(
    c: &Circuit,
    target: Arc<GateBase>,
    oracle: &Oracle,
) -> Result<Circuit, TransformError> {
    let form = extract_affine(c, oracle)?;
    if !target.is_linear() {
        let (name, _) = target.iter().find(|(_, f)| !f.is_affine()).unwrap();
        return Err(TransformError::GateClass {
            name: name.to_string(),
            required: "affine",
        });
    }
    let n = c.n();
    let ops = clone::closure(target.clone(), 2, false)?;
    let witness = |f: &BoolFun| ops.member(f).map(|w| w.map(|w| (w.gate_count(), w)));
    let mut b = CircuitBuilder::new(target.clone(), n, 0);

    let support: Vec<usize> = (1..=n).filter(|&i| form.x_coeffs[i - 1]).collect();
    if form.depends_on_nondet() || support.is_empty() {
        let value = form.depends_on_nondet() || form.constant;
        let out = match (n, witness(&BoolFun::constant(1, value).unwrap())?) {
            (1.., Some((_, w))) => {
                let x1 = b.input(1);
                b.inline(&w, &[x1])?
            }
            _ => b.constant(value),
        };
        return Ok(b.build(out)?);
    }

    let xor = witness(&named::xor())?;
    let xnor = witness(&named::xnor())?;
    let not = witness(&named::not())?;
    let cost = |w: &Option<(usize, Circuit)>| w.as_ref().map(|(s, _)| *s);

    // Cheapest way to reach each parity after each chain step, choosing XOR
    // or XNOR per step; a final NOT may fix the parity.
    let steps = support.len() - 1;
    let mut best: Vec<[Option<usize>; 2]> = vec![[Some(0), None]];
    let mut choice: Vec<[Option<bool>; 2]> = Vec::new();
    for _ in 0..steps {
        let prev = *best.last().unwrap();
        let mut next = [None, None];
        let mut pick = [None, None];
        for parity in 0..2 {
            for (use_xnor, w) in [(false, &xor), (true, &xnor)] {
                let from = parity ^ use_xnor as usize;
                if let (Some(p), Some(s)) = (prev[from], cost(w)) {
                    if next[parity].is_none_or(|cur| p + s < cur) {
                        next[parity] = Some(p + s);
                        pick[parity] = Some(use_xnor);
                    }
                }
            }
        }
        best.push(next);
        choice.push(pick);
    }
    let want = form.constant as usize;
    let last = best[steps];
    let direct = last[want];
    let via_not = match (last[1 - want], cost(&not)) {
        (Some(p), Some(s)) => Some(p + s),
        _ => None,
    };
    let (mut parity, negate) = match (direct, via_not) {
        (Some(d), Some(v)) if v < d => (1 - want, true),
        (Some(_), _) => (want, false),
        (None, Some(_)) => (1 - want, true),
        (None, None) => {
            return Err(TransformError::Unrepresentable(format!(
                "no XOR/XNOR/NOT combination over the target realizes an affine function of {} inputs with constant {}",
                support.len(),
                want
            )))
        }
    };
    let mut ops_per_step = vec![false; steps];
    for step in (0..steps).rev() {
        let use_xnor = choice[step][parity].unwrap();
        ops_per_step[step] = use_xnor;
        parity ^= use_xnor as usize;
    }

    let mut acc = b.input(support[0]);
    for (step, &i) in support[1..].iter().enumerate() {
        let xi = b.input(i);
        let w = if ops_per_step[step] { &xnor } else { &xor };
        acc = b.inline(&w.as_ref().unwrap().1, &[acc, xi])?;
    }
    if negate {
        acc = b.inline(&not.as_ref().unwrap().1, &[acc])?;
    }
    Ok(b.build(acc)?)
}

fn require_member(closure: &CloneClosure, f: BoolFun) -> Result<Circuit, TransformError> {
    closure
        .member(&f)?
        .ok_or(TransformError::MissingFunction(f))
}

fn check_over(c: &Circuit, base: &GateBase, allowed: &'static str) -> Result<(), TransformError> {
    for name in c.gate_names() {
        let fun = c.base().get(name).expect("validated circuit");
        if base.get(name) != Some(fun) {
            return Err(TransformError::BaseMismatch {
                name: name.to_string(),
                fun: fun.clone(),
                allowed,
            });
        }
    }
    Ok(())
}

/// Shared body of the two lifts: constants become two fresh inputs and the
/// circuit is wrapped as `wrapper(x', C, x'')`.
fn lift(
    c: &Circuit,
    closure: &CloneClosure,
    gadget: BoolFun,
    wrapper: BoolFun,
    one_is_first: bool,
) -> Result<Circuit, TransformError> {
    c.validate()?;
    if closure.constants_allowed() {
        return Err(TransformError::ConstantsInClosure);
    }
    require_member(closure, gadget)?;
    let wrap = require_member(closure, wrapper)?;
    check_over(c, closure.base(), "the gadget base")?;
    let n = c.n();
    let mut b = CircuitBuilder::new(closure.base().clone(), n + 2, c.m());
    let first = b.input(n + 1);
    let second = b.input(n + 2);
    let (one, zero) = if one_is_first {
        (first, second)
    } else {
        (second, first)
    };
    let mut map = Vec::with_capacity(c.nodes().len());
    for node in c.nodes() {
        let id = match node {
            Node::Const(true) => one,
            Node::Const(false) => zero,
            Node::Gate { name, operands } => {
                let ops: Vec<NodeId> = operands.iter().map(|&o| map[o]).collect();
                b.gate(name, &ops)?
            }
            other => copy_leaf(other, &mut b),
        };
        map.push(id);
    }
    let out = b.inline(&wrap, &[first, map[c.output()], second])?;
    Ok(b.build(out)?)
}

/// `C' = x' & (C | x'')` with constant 1 replaced by `x'` and 0 by `x''`,
/// where `x' = x_{n+1}` and `x'' = x_{n+2}`. The result is constant-free, equals
/// `C` at `(x, 1, 0)`, is 1 at `(x, 1, 1)` and 0 whenever `x' = 0`.
pub fn lift_and(c: &Circuit, gadget_closure: &CloneClosure) -> Result<Circuit, TransformError> {
    lift(
        c,
        gadget_closure,
        named::and_or_not(),
        named::and_or(),
        true,
    )
}

/// `C' = x' | (C & x'')` with constant 0 replaced by `x'` and 1 by `x''`.
/// Equals `C` at `(x, 0, 1)`, is 1 whenever `x' = 1` and 0 at `(x, 0, 0)`.
pub fn lift_or(c: &Circuit, gadget_closure: &CloneClosure) -> Result<Circuit, TransformError> {
    lift(
        c,
        gadget_closure,
        named::or_and_not(),
        named::or_and(),
        false,
    )
}

/// Maps each gate of `c` onto AND, OR or NOT by function.
fn classify_and_or_not(c: &Circuit) -> Result<Vec<Option<&'static str>>, TransformError> {
    let allowed = [
        ("AND", named::and()),
        ("OR", named::or()),
        ("NOT", named::not()),
    ];
    c.nodes()
        .iter()
        .map(|node| match node {
            Node::Gate { name, .. } => {
                let fun = c.base().get(name).expect("validated circuit");
                allowed
                    .iter()
                    .find(|(_, f)| f == fun)
                    .map(|(n, _)| Some(*n))
                    .ok_or_else(|| TransformError::BaseMismatch {
                        name: name.clone(),
                        fun: fun.clone(),
                        allowed: "AND, OR, NOT",
                    })
            }
            _ => Ok(None),
        })
        .collect()
}

fn not_eliminate(c: &Circuit, polarity: bool) -> Result<Circuit, TransformError> {
    c.validate()?;
    let kinds = classify_and_or_not(c)?;
    if c.m() > 0 {
        return Err(TransformError::NondeterministicInput(c.m()));
    }
    if c.n() == 0 {
        return Err(TransformError::NoOrdinaryInputs);
    }
    if c.eval_det(&vec![polarity; c.n()], &[])? != polarity {
        return Err(TransformError::NotReproducing { polarity });
    }
    let (base, chain_gate, replacement) = if polarity {
        (standard::and_or_xnor(), "AND", "XNOR")
    } else {
        (standard::and_or_xor(), "OR", "XOR")
    };
    let mut b = CircuitBuilder::new(base, c.n(), 0);
    // One shared chain, built left to right, and only if some NOT needs it.
    let chain = if kinds.contains(&Some("NOT")) {
        let mut acc = b.input(1);
        for i in 2..=c.n() {
            let xi = b.input(i);
            acc = b.gate(chain_gate, &[acc, xi])?;
        }
        Some(acc)
    } else {
        None
    };
    let mut map = Vec::with_capacity(c.nodes().len());
    for (node, kind) in c.nodes().iter().zip(&kinds) {
        let id = match (node, kind) {
            (Node::Gate { operands, .. }, Some("NOT")) => {
                b.gate(replacement, &[map[operands[0]], chain.unwrap()])?
            }
            (Node::Gate { operands, .. }, Some(kind)) => {
                let ops: Vec<NodeId> = operands.iter().map(|&o| map[o]).collect();
                b.gate(kind, &ops)?
            }
            (other, _) => copy_leaf(other, &mut b),
        };
        map.push(id);
    }
    Ok(b.build(map[c.output()])?)
}

/// Rewrites a 1-reproducing `{AND, OR, NOT}` circuit over `{AND, OR, XNOR}`:
/// every `NOT g` becomes `XNOR(g, x_1 & ... & x_n)`.
pub fn not_eliminate_conj(c: &Circuit) -> Result<Circuit, TransformError> {
    not_eliminate(c, true)
}

/// Rewrites a 0-reproducing `{AND, OR, NOT}` circuit over `{AND, OR, XOR}`:
/// every `NOT g` becomes `XOR(g, x_1 | ... | x_n)`.
pub fn not_eliminate_disj(c: &Circuit) -> Result<Circuit, TransformError> {
    not_eliminate(c, false)
}

/// Compiles a `{AND, OR, NOT}` circuit into a pure circuit over a
/// separating base (`x & (y | !z)` for polarity 1, `x | (y & !z)` for 0).
///
/// Pipeline: NOT elimination, conversion into `closure_with_const` (the
/// closure of `base` plus nullary gates for the constant `polarity`), every
/// such constant replaced by the separating input `x_i`, and finally
/// `x_i & C` (resp. `x_i | C`).
pub fn compile_to_separating_base(
    c: &Circuit,
    base: Arc<GateBase>,
    polarity: bool,
    closure_with_const: &CloneClosure,
) -> Result<Circuit, TransformError> {
    c.validate()?;
    let preserve = if polarity {
        BoolFun::preserves_one
    } else {
        BoolFun::preserves_zero
    };
    if let Some((name, _)) = base.iter().find(|(_, f)| !preserve(f)) {
        return Err(TransformError::GateClass {
            name: name.to_string(),
            required: if polarity {
                "1-reproducing"
            } else {
                "0-reproducing"
            },
        });
    }
    if closure_with_const.constants_allowed() {
        return Err(TransformError::ConstantsInClosure);
    }
    let is_polarity_const = |f: &BoolFun| f.arity() == 0 && f.bit(0) == polarity;
    for (name, fun) in closure_with_const.base().iter() {
        if base.get(name) != Some(fun) && !is_polarity_const(fun) {
            return Err(TransformError::BaseMismatch {
                name: name.to_string(),
                fun: fun.clone(),
                allowed: "the target base plus the reproduced constant",
            });
        }
    }
    if c.m() > 0 {
        return Err(TransformError::NondeterministicInput(c.m()));
    }

    let f = c.truth_table(Semantics::Det)?;
    if c.n() == 0 {
        return Err(TransformError::NoOrdinaryInputs);
    }
    if f.bit(if polarity { f.table_len() - 1 } else { 0 }) != polarity {
        return Err(TransformError::NotReproducing { polarity });
    }
    let Some(sep) = f.separating_index(polarity) else {
        // For every input, a row taking value `polarity` where that input differs.
        let rows = (0..c.n())
            .map(|j| {
                let i = (0..f.table_len())
                    .find(|&i| f.bit(i) == polarity && (i >> j & 1 == 1) != polarity)
                    .unwrap();
                assignment_of(i, c.n())
            })
            .collect();
        return Err(TransformError::NoSeparatingInput { polarity, rows });
    };

    // The opposite constant is rewritten through NOT so that it is eliminated too.
    let kinds = classify_and_or_not(c)?;
    let mut b = CircuitBuilder::new(standard::and_or_not(), c.n(), 0);
    let mut map = Vec::with_capacity(c.nodes().len());
    for (node, kind) in c.nodes().iter().zip(&kinds) {
        let id = match (node, kind) {
            (Node::Gate { operands, .. }, Some(kind)) => {
                let ops: Vec<NodeId> = operands.iter().map(|&o| map[o]).collect();
                b.gate(kind, &ops)?
            }
            (Node::Const(v), _) if *v != polarity => {
                let k = b.constant(polarity);
                b.gate("NOT", &[k])?
            }
            (other, _) => copy_leaf(other, &mut b),
        };
        map.push(id);
    }
    let normalized = b.build(map[c.output()])?;

    let eliminated = not_eliminate(&normalized, polarity)?;
    let converted = convert_base(&eliminated, closure_with_const)?;

    let wrap_fun = if polarity {
        named::and_or()
    } else {
        named::or_and()
    };
    let pure = clone::closure(base.clone(), 3, false)?;
    let wrap = require_member(&pure, wrap_fun)?;

    let mut b = CircuitBuilder::new(base.clone(), c.n(), 0);
    let xi = b.input(sep);
    let mut map = Vec::with_capacity(converted.nodes().len());
    for node in converted.nodes() {
        let id = match node {
            Node::Const(v) if *v == polarity => xi,
            Node::Const(v) => {
                return Err(TransformError::Unrepresentable(format!(
                    "constant {} survives conversion",
                    *v as u8
                )))
            }
            Node::Gate { name, operands } => {
                let fun = converted.base().get(name).unwrap();
                if is_polarity_const(fun) && base.get(name) != Some(fun) {
                    xi
                } else {
                    let ops: Vec<NodeId> = operands.iter().map(|&o| map[o]).collect();
                    b.gate(name, &ops)?
                }
            }
            other => copy_leaf(other, &mut b),
        };
        map.push(id);
    }
    let body = map[converted.output()];
    let out = b.inline(&wrap, &[xi, body, body])?;
    Ok(b.build(out)?)
}

/// Sum-of-products circuit over `{AND, OR, NOT}` for a function of positive arity.
pub fn sum_of_products(f: &BoolFun) -> Result<Circuit, TransformError> {
    let n = f.arity();
    if n == 0 {
        return Err(TransformError::NoOrdinaryInputs);
    }
    let mut b = CircuitBuilder::new(standard::and_or_not(), n, 0);
    let xs: Vec<NodeId> = (1..=n).map(|i| b.input(i)).collect();
    let nots: Vec<NodeId> = xs.iter().map(|&x| b.gate("NOT", &[x]).unwrap()).collect();
    let out = match f.constant_value() {
        Some(false) => b.gate("AND", &[xs[0], nots[0]])?,
        Some(true) => b.gate("OR", &[xs[0], nots[0]])?,
        None => {
            let mut terms = Vec::new();
            for i in (0..f.table_len()).filter(|&i| f.bit(i)) {
                let lit = |j: usize| if i >> j & 1 == 1 { xs[j] } else { nots[j] };
                let mut t = lit(0);
                for j in 1..n {
                    t = b.gate("AND", &[t, lit(j)])?;
                }
                terms.push(t);
            }
            let mut acc = terms[0];
            for &t in &terms[1..] {
                acc = b.gate("OR", &[acc, t])?;
            }
            acc
        }
    };
    Ok(b.build(out)?)
}
