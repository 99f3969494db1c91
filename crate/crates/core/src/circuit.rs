//! Circuit IR over an explicit gate base.
//!
//! A circuit has ordinary inputs `x_1..x_n`, non-deterministic inputs
//! `y_1..y_m`, constant nodes and gate nodes in topological order. Under
//! non-deterministic semantics it accepts `x` iff some `y` drives the output
//! to 1. All exhaustive operations evaluate the whole assignment space at
//! once, 64 assignments per machine word.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::boolfun::{self, assignment_of, is_identifier, low_mask, word_count, BoolFun};
use crate::clone::GateBase;
use crate::error::{CircuitError, ParseError};

pub type NodeId = usize;

/// Default bound on the number of variables enumerated by the oracle.
pub const DEFAULT_EXHAUSTIVE_BOUND: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Node {
    /// Ordinary input `x_i`, 1-based.
    Input(usize),
    /// Non-deterministic input `y_j`, 1-based.
    Nondet(usize),
    Const(bool),
    Gate {
        name: String,
        operands: Vec<NodeId>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Semantics {
    /// Plain evaluation; the table ranges over `(x, y)` with `x` in the low index bits.
    Det,
    /// `x` is accepted iff some `y` yields 1.
    Nondet,
}

/// Number of gate nodes; inputs and constants are free.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CircuitSize {
    pub gates: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub node: NodeId,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationKind {
    UnknownGate(String),
    OperandCount {
        gate: String,
        expected: usize,
        got: usize,
    },
    /// An operand does not precede the node that uses it.
    NotAcyclic {
        operand: NodeId,
    },
    InputIndex {
        index: usize,
        n: usize,
    },
    NondetIndex {
        index: usize,
        m: usize,
    },
    /// The output id does not name a node.
    Output,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "node {}: ", self.node)?;
        match &self.kind {
            ViolationKind::UnknownGate(name) => write!(f, "gate `{name}` is not in the base"),
            ViolationKind::OperandCount {
                gate,
                expected,
                got,
            } => {
                write!(f, "gate `{gate}` takes {expected} operands, got {got}")
            }
            ViolationKind::NotAcyclic { operand } => {
                write!(f, "operand {operand} does not precede its user")
            }
            ViolationKind::InputIndex { index, n } => write!(f, "input {index} outside 1..={n}"),
            ViolationKind::NondetIndex { index, m } => {
                write!(f, "non-deterministic input {index} outside 1..={m}")
            }
            ViolationKind::Output => f.write_str("output does not name a node"),
        }
    }
}

impl std::error::Error for Violation {}

/// Non-fatal findings of [`Circuit::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Warning {
    /// A constant node whose value no nullary base gate provides.
    ConstantOutsideBase { node: NodeId, value: bool },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::ConstantOutsideBase { node, value } => write!(
                f,
                "node {node}: constant {} is not provided by the base",
                *value as u8
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    base: Arc<GateBase>,
    n: usize,
    m: usize,
    nodes: Vec<Node>,
    labels: Vec<String>,
    output: NodeId,
}

impl Circuit {
    /// Assembles a circuit without validating it. Labels are generated.
    pub fn from_parts(
        base: Arc<GateBase>,
        n: usize,
        m: usize,
        nodes: Vec<Node>,
        output: NodeId,
    ) -> Self {
        let labels = generate_labels(&nodes);
        Circuit {
            base,
            n,
            m,
            nodes,
            labels,
            output,
        }
    }

    pub fn base(&self) -> &Arc<GateBase> {
        &self.base
    }

    /// Number of ordinary inputs.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of non-deterministic inputs.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn output(&self) -> NodeId {
        self.output
    }

    pub fn size(&self) -> CircuitSize {
        CircuitSize {
            gates: self.gate_count(),
        }
    }

    pub fn gate_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, Node::Gate { .. }))
            .count()
    }

    pub fn const_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, Node::Const(_)))
            .count()
    }

    /// Names of the gates that occur in the circuit, in first-use order.
    pub fn gate_names(&self) -> Vec<&str> {
        let mut seen = HashSet::new();
        self.nodes
            .iter()
            .filter_map(|n| match n {
                Node::Gate { name, .. } if seen.insert(name.as_str()) => Some(name.as_str()),
                _ => None,
            })
            .collect()
    }

    /// The same circuit over another base; gate names must resolve there.
    pub fn with_base(&self, base: Arc<GateBase>) -> Result<Circuit, CircuitError> {
        let c = Circuit {
            base,
            ..self.clone()
        };
        c.validate()?;
        Ok(c)
    }

    /// Checks every structural invariant and reports the first offending node.
    pub fn validate(&self) -> Result<Vec<Warning>, Violation> {
        self.resolve()?;
        let mut warnings = Vec::new();
        for (id, node) in self.nodes.iter().enumerate() {
            if let Node::Const(value) = node {
                let provided = self
                    .base
                    .iter()
                    .any(|(_, f)| f.arity() == 0 && f.bit(0) == *value);
                if !provided {
                    warnings.push(Warning::ConstantOutsideBase {
                        node: id,
                        value: *value,
                    });
                }
            }
        }
        Ok(warnings)
    }

    fn resolve(&self) -> Result<Vec<Option<&BoolFun>>, Violation> {
        let mut funs = Vec::with_capacity(self.nodes.len());
        for (id, node) in self.nodes.iter().enumerate() {
            let violation = |kind| Violation { node: id, kind };
            match node {
                Node::Input(i) => {
                    if *i == 0 || *i > self.n {
                        return Err(violation(ViolationKind::InputIndex {
                            index: *i,
                            n: self.n,
                        }));
                    }
                    funs.push(None);
                }
                Node::Nondet(j) => {
                    if *j == 0 || *j > self.m {
                        return Err(violation(ViolationKind::NondetIndex {
                            index: *j,
                            m: self.m,
                        }));
                    }
                    funs.push(None);
                }
                Node::Const(_) => funs.push(None),
                Node::Gate { name, operands } => {
                    let fun = self
                        .base
                        .get(name)
                        .ok_or_else(|| violation(ViolationKind::UnknownGate(name.clone())))?;
                    if fun.arity() != operands.len() {
                        return Err(violation(ViolationKind::OperandCount {
                            gate: name.clone(),
                            expected: fun.arity(),
                            got: operands.len(),
                        }));
                    }
                    if let Some(&operand) = operands.iter().find(|&&o| o >= id) {
                        return Err(violation(ViolationKind::NotAcyclic { operand }));
                    }
                    funs.push(Some(fun));
                }
            }
        }
        if self.output >= self.nodes.len() {
            return Err(Violation {
                node: self.output,
                kind: ViolationKind::Output,
            });
        }
        Ok(funs)
    }

    /// Evaluates the circuit on one full assignment.
    pub fn eval_det(&self, x: &[bool], y: &[bool]) -> Result<bool, CircuitError> {
        self.check_lengths(x, Some(y))?;
        let out = self.eval_space(0, |i| Source::Fixed(x[i - 1]), |j| Source::Fixed(y[j - 1]))?;
        Ok(out[0] & 1 == 1)
    }

    /// `exists y. C(x, y) = 1`, using the default exhaustive bound.
    pub fn eval_nondet(&self, x: &[bool]) -> Result<bool, CircuitError> {
        Oracle::default().eval_nondet(self, x)
    }

    /// Truth table under the given semantics, using the default exhaustive bound.
    pub fn truth_table(&self, semantics: Semantics) -> Result<BoolFun, CircuitError> {
        Oracle::default().truth_table(self, semantics)
    }

    fn check_lengths(&self, x: &[bool], y: Option<&[bool]>) -> Result<(), CircuitError> {
        if x.len() != self.n {
            return Err(CircuitError::InputLength {
                what: "ordinary input",
                expected: self.n,
                got: x.len(),
            });
        }
        if let Some(y) = y {
            if y.len() != self.m {
                return Err(CircuitError::InputLength {
                    what: "non-deterministic input",
                    expected: self.m,
                    got: y.len(),
                });
            }
        }
        Ok(())
    }

    /// Evaluates the output over a space of `vars` variables. Each input is
    /// either tied to one variable of the space or held fixed.
    fn eval_space(
        &self,
        vars: usize,
        input: impl Fn(usize) -> Source,
        nondet: impl Fn(usize) -> Source,
    ) -> Result<Vec<u64>, CircuitError> {
        let funs = self.resolve()?;
        let words = word_count(vars);
        let mask = low_mask(vars);

        // Last reader of every node, so intermediate vectors can be dropped.
        let mut last_use = vec![0usize; self.nodes.len()];
        for (id, node) in self.nodes.iter().enumerate() {
            if let Node::Gate { operands, .. } = node {
                for &o in operands {
                    last_use[o] = id;
                }
            }
        }
        last_use[self.output] = usize::MAX;

        let mut values: Vec<Option<Vec<u64>>> = vec![None; self.nodes.len()];
        let mut scratch = Vec::new();
        for (id, node) in self.nodes.iter().enumerate() {
            let value = match node {
                Node::Input(i) => source_words(input(*i), vars),
                Node::Nondet(j) => source_words(nondet(*j), vars),
                Node::Const(b) => vec![if *b { mask } else { 0 }; words],
                Node::Gate { operands, .. } => {
                    let fun = funs[id].expect("resolved gate");
                    let mut out = vec![0u64; words];
                    for (w, slot) in out.iter_mut().enumerate() {
                        scratch.clear();
                        scratch.extend(operands.iter().map(|&o| values[o].as_ref().unwrap()[w]));
                        *slot = boolfun::apply_word(fun, &scratch) & mask;
                    }
                    for &o in operands {
                        if last_use[o] == id {
                            values[o] = None;
                        }
                    }
                    out
                }
            };
            if last_use[id] != 0 || id == self.output {
                values[id] = Some(value);
            }
        }
        Ok(values[self.output].take().expect("output evaluated"))
    }

    /// Renders the circuit in the line-oriented text format.
    pub fn to_text(&self) -> String {
        let mut out = format!("inputs n={} m={}\n", self.n, self.m);
        for (node, label) in self.nodes.iter().zip(&self.labels) {
            match node {
                Node::Input(i) => out.push_str(&format!("{label} = input {i}\n")),
                Node::Nondet(j) => out.push_str(&format!("{label} = nondet {j}\n")),
                Node::Const(b) => out.push_str(&format!("{label} = const {}\n", *b as u8)),
                Node::Gate { name, operands } => {
                    out.push_str(&format!("{label} = {name}"));
                    for &o in operands {
                        out.push(' ');
                        out.push_str(&self.labels[o]);
                    }
                    out.push('\n');
                }
            }
        }
        out.push_str(&format!("output {}\n", self.labels[self.output]));
        out
    }

    /// Parses the text format against a base. Node ids follow file order.
    pub fn parse(text: &str, base: Arc<GateBase>) -> Result<Circuit, ParseError> {
        let mut header: Option<(usize, usize)> = None;
        let mut nodes = Vec::new();
        let mut labels: Vec<String> = Vec::new();
        let mut ids = std::collections::HashMap::new();
        let mut output = None;

        for (lineno, raw) in text.lines().enumerate() {
            let lineno = lineno + 1;
            let err = |message: String| ParseError {
                line: lineno,
                message,
            };
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            if output.is_some() {
                return Err(err("statement after `output`".into()));
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            match tokens[0] {
                "inputs" => {
                    if header.is_some() {
                        return Err(err("duplicate `inputs` line".into()));
                    }
                    if !nodes.is_empty() {
                        return Err(err("`inputs` must precede all nodes".into()));
                    }
                    let [_, n, m] = tokens[..] else {
                        return Err(err("expected `inputs n=<int> m=<int>`".into()));
                    };
                    let count = |tok: &str, key: &str| -> Result<usize, ParseError> {
                        tok.strip_prefix(key)
                            .and_then(|v| v.parse().ok())
                            .ok_or_else(|| err(format!("expected `{key}<int>`, found `{tok}`")))
                    };
                    header = Some((count(n, "n=")?, count(m, "m=")?));
                }
                "output" => {
                    let [_, name] = tokens[..] else {
                        return Err(err("expected `output <node>`".into()));
                    };
                    let id = *ids
                        .get(name)
                        .ok_or_else(|| err(format!("undefined node `{name}`")))?;
                    output = Some(id);
                }
                label => {
                    let (n, m) = header.ok_or_else(|| err("missing `inputs` line".into()))?;
                    if tokens.len() < 3 || tokens[1] != "=" {
                        return Err(err("expected `<node> = <definition>`".into()));
                    }
                    if !is_identifier(label) {
                        return Err(err(format!("invalid node name `{label}`")));
                    }
                    if ids.contains_key(label) {
                        return Err(err(format!("duplicate node name `{label}`")));
                    }
                    let index =
                        |tok: &str, bound: usize, what: &str| -> Result<usize, ParseError> {
                            match tok.parse::<usize>() {
                                Ok(i) if (1..=bound).contains(&i) => Ok(i),
                                _ => Err(err(format!("{what} index `{tok}` outside 1..={bound}"))),
                            }
                        };
                    let node = match (tokens[2], &tokens[3..]) {
                        ("input", [i]) => Node::Input(index(i, n, "input")?),
                        ("nondet", [j]) => Node::Nondet(index(j, m, "nondet")?),
                        ("const", ["0"]) => Node::Const(false),
                        ("const", ["1"]) => Node::Const(true),
                        ("input" | "nondet" | "const", _) => {
                            return Err(err(format!("malformed `{}` definition", tokens[2])))
                        }
                        (gate, args) => {
                            let fun = base
                                .get(gate)
                                .ok_or_else(|| err(format!("unknown gate `{gate}`")))?;
                            if fun.arity() != args.len() {
                                return Err(err(format!(
                                    "gate `{gate}` takes {} operands, got {}",
                                    fun.arity(),
                                    args.len()
                                )));
                            }
                            let operands = args
                                .iter()
                                .map(|a| {
                                    ids.get(*a)
                                        .copied()
                                        .ok_or_else(|| err(format!("undefined node `{a}`")))
                                })
                                .collect::<Result<Vec<_>, _>>()?;
                            Node::Gate {
                                name: gate.to_string(),
                                operands,
                            }
                        }
                    };
                    ids.insert(label.to_string(), nodes.len());
                    labels.push(label.to_string());
                    nodes.push(node);
                }
            }
        }
        let (n, m) = header.ok_or(ParseError {
            line: 0,
            message: "missing `inputs` line".into(),
        })?;
        let output = output.ok_or(ParseError {
            line: 0,
            message: "missing `output` line".into(),
        })?;
        Ok(Circuit {
            base,
            n,
            m,
            nodes,
            labels,
            output,
        })
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn generate_labels(nodes: &[Node]) -> Vec<String> {
    let mut used = HashSet::new();
    nodes
        .iter()
        .enumerate()
        .map(|(id, node)| {
            let candidate = match node {
                Node::Input(i) => format!("x{i}"),
                Node::Nondet(j) => format!("y{j}"),
                Node::Const(b) => format!("c{}", *b as u8),
                Node::Gate { .. } => format!("g{id}"),
            };
            let label = if used.contains(&candidate) {
                format!("{candidate}_{id}")
            } else {
                candidate
            };
            used.insert(label.clone());
            label
        })
        .collect()
}

#[derive(Clone, Copy)]
enum Source {
    Var(usize),
    Fixed(bool),
}

/// Value of a source over the space of `vars` variables.
fn source_words(source: Source, vars: usize) -> Vec<u64> {
    const PATTERNS: [u64; 6] = [
        0xaaaa_aaaa_aaaa_aaaa,
        0xcccc_cccc_cccc_cccc,
        0xf0f0_f0f0_f0f0_f0f0,
        0xff00_ff00_ff00_ff00,
        0xffff_0000_ffff_0000,
        0xffff_ffff_0000_0000,
    ];
    let words = word_count(vars);
    let mask = low_mask(vars);
    match source {
        Source::Fixed(b) => vec![if b { mask } else { 0 }; words],
        Source::Var(v) if v < 6 => vec![PATTERNS[v] & mask; words],
        Source::Var(v) => (0..words)
            .map(|w| if w >> (v - 6) & 1 == 1 { u64::MAX } else { 0 })
            .collect(),
    }
}

/// Exhaustive evaluator with a bound on the number of enumerated variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Oracle {
    pub bound: usize,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle {
            bound: DEFAULT_EXHAUSTIVE_BOUND,
        }
    }
}

/// Outcome of an equivalence check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Equivalence {
    Equal,
    /// The smallest ordinary input on which the two sides differ.
    Counterexample(Vec<bool>),
}

impl Oracle {
    pub fn new(bound: usize) -> Self {
        Oracle { bound }
    }

    fn check_bound(&self, vars: usize) -> Result<(), CircuitError> {
        if vars > self.bound || vars > boolfun::TABLE_ARITY_LIMIT {
            Err(CircuitError::BoundExceeded {
                vars,
                bound: self.bound.min(boolfun::TABLE_ARITY_LIMIT),
            })
        } else {
            Ok(())
        }
    }

    pub fn eval_nondet(&self, c: &Circuit, x: &[bool]) -> Result<bool, CircuitError> {
        c.check_lengths(x, None)?;
        self.check_bound(c.m)?;
        let out = c.eval_space(c.m, |i| Source::Fixed(x[i - 1]), |j| Source::Var(j - 1))?;
        Ok(out.iter().any(|&w| w != 0))
    }

    pub fn truth_table(&self, c: &Circuit, semantics: Semantics) -> Result<BoolFun, CircuitError> {
        let vars = c.n + c.m;
        self.check_bound(vars)?;
        let n = c.n;
        let det = c.eval_space(vars, |i| Source::Var(i - 1), |j| Source::Var(n + j - 1))?;
        let words = match semantics {
            Semantics::Det => det,
            Semantics::Nondet => project_exists(&det, n, vars),
        };
        Ok(
            BoolFun::from_words(if semantics == Semantics::Det { vars } else { n }, words)
                .expect("table sized by construction"),
        )
    }

    /// Compares two circuits under the given semantics per side.
    pub fn equiv(
        &self,
        left: &Circuit,
        left_semantics: Semantics,
        right: &Circuit,
        right_semantics: Semantics,
    ) -> Result<Equivalence, CircuitError> {
        if left.n != right.n {
            return Err(CircuitError::InputCountMismatch {
                left: left.n,
                right: right.n,
            });
        }
        let a = self.language(left, left_semantics)?;
        let b = self.language(right, right_semantics)?;
        Ok(first_difference(&a, &b)
            .map(|i| Equivalence::Counterexample(assignment_of(i, left.n)))
            .unwrap_or(Equivalence::Equal))
    }

    /// The accepted set over ordinary inputs. Deterministic semantics needs
    /// `m = 0` so that the table ranges over `x` alone.
    fn language(&self, c: &Circuit, semantics: Semantics) -> Result<BoolFun, CircuitError> {
        if semantics == Semantics::Det && c.m > 0 {
            return Err(CircuitError::DetWithNondetInputs { m: c.m });
        }
        self.truth_table(c, semantics)
    }

    /// Smallest input index `i` with `x_i = polarity` on every row where the
    /// circuit's language equals `polarity`.
    pub fn find_separating_input(
        &self,
        c: &Circuit,
        polarity: bool,
    ) -> Result<Option<usize>, CircuitError> {
        Ok(self
            .truth_table(c, Semantics::Nondet)?
            .separating_index(polarity))
    }
}

fn first_difference(a: &BoolFun, b: &BoolFun) -> Option<usize> {
    a.words()
        .iter()
        .zip(b.words())
        .enumerate()
        .find(|(_, (x, y))| x != y)
        .map(|(w, (x, y))| w * 64 + (x ^ y).trailing_zeros() as usize)
}

/// OR-folds a table over `vars` variables down to its low `n` variables.
fn project_exists(words: &[u64], n: usize, vars: usize) -> Vec<u64> {
    if n == vars {
        return words.to_vec();
    }
    if n >= 6 {
        let block = word_count(n);
        let mut out = vec![0u64; block];
        for chunk in words.chunks(block) {
            for (o, w) in out.iter_mut().zip(chunk) {
                *o |= w;
            }
        }
        out
    } else {
        let width = 1u32 << n;
        let mask = low_mask(n);
        let mut acc = 0u64;
        for &w in words {
            let mut v = w;
            while v != 0 {
                acc |= v & mask;
                v >>= width;
            }
        }
        vec![acc]
    }
}

/// Incremental construction of a valid circuit.
#[derive(Debug, Clone)]
pub struct CircuitBuilder {
    base: Arc<GateBase>,
    n: usize,
    m: usize,
    nodes: Vec<Node>,
}

impl CircuitBuilder {
    pub fn new(base: Arc<GateBase>, n: usize, m: usize) -> Self {
        CircuitBuilder {
            base,
            n,
            m,
            nodes: Vec::new(),
        }
    }

    pub fn base(&self) -> &Arc<GateBase> {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn push(&mut self, node: Node) -> NodeId {
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    pub fn input(&mut self, i: usize) -> NodeId {
        self.push(Node::Input(i))
    }

    pub fn nondet(&mut self, j: usize) -> NodeId {
        self.push(Node::Nondet(j))
    }

    pub fn constant(&mut self, value: bool) -> NodeId {
        self.push(Node::Const(value))
    }

    /// Adds a gate node. Name and operand count are checked against the base.
    pub fn gate(&mut self, name: &str, operands: &[NodeId]) -> Result<NodeId, Violation> {
        let id = self.nodes.len();
        let violation = |kind| Violation { node: id, kind };
        let fun = self
            .base
            .get(name)
            .ok_or_else(|| violation(ViolationKind::UnknownGate(name.to_string())))?;
        if fun.arity() != operands.len() {
            return Err(violation(ViolationKind::OperandCount {
                gate: name.to_string(),
                expected: fun.arity(),
                got: operands.len(),
            }));
        }
        if let Some(&operand) = operands.iter().find(|&&o| o >= id) {
            return Err(violation(ViolationKind::NotAcyclic { operand }));
        }
        Ok(self.push(Node::Gate {
            name: name.to_string(),
            operands: operands.to_vec(),
        }))
    }

    /// Copies a deterministic circuit in, wiring its input `x_i` to
    /// `inputs[i - 1]`. Returns the node carrying its output.
    pub fn inline(&mut self, sub: &Circuit, inputs: &[NodeId]) -> Result<NodeId, Violation> {
        assert_eq!(sub.m, 0, "inlined circuits are deterministic");
        assert_eq!(
            sub.n,
            inputs.len(),
            "one operand per input of the inlined circuit"
        );
        let mut map = Vec::with_capacity(sub.nodes.len());
        for node in &sub.nodes {
            let id = match node {
                Node::Input(i) => inputs[i - 1],
                Node::Nondet(_) => unreachable!(),
                Node::Const(b) => self.constant(*b),
                Node::Gate { name, operands } => {
                    let ops: Vec<NodeId> = operands.iter().map(|&o| map[o]).collect();
                    self.gate(name, &ops)?
                }
            };
            map.push(id);
        }
        Ok(map[sub.output])
    }

    pub fn build(self, output: NodeId) -> Result<Circuit, Violation> {
        let c = Circuit::from_parts(self.base, self.n, self.m, self.nodes, output);
        c.resolve()?;
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfun::named;

    fn base(gates: &[(&str, BoolFun)]) -> Arc<GateBase> {
        Arc::new(
            GateBase::new(
                gates
                    .iter()
                    .map(|(n, f)| (n.to_string(), f.clone()))
                    .collect(),
            )
            .unwrap(),
        )
    }

    fn and_base() -> Arc<GateBase> {
        base(&[
            ("AND", named::and()),
            ("OR", named::or()),
            ("XOR", named::xor()),
        ])
    }

    fn x_and_y() -> Circuit {
        let mut b = CircuitBuilder::new(and_base(), 1, 1);
        let x = b.input(1);
        let y = b.nondet(1);
        let g = b.gate("AND", &[x, y]).unwrap();
        b.build(g).unwrap()
    }

    fn x_op_y(op: &str) -> Circuit {
        let mut b = CircuitBuilder::new(and_base(), 1, 1);
        let x = b.input(1);
        let y = b.nondet(1);
        let g = b.gate(op, &[x, y]).unwrap();
        b.build(g).unwrap()
    }

    fn bare_x() -> Circuit {
        let mut b = CircuitBuilder::new(and_base(), 1, 0);
        let x = b.input(1);
        b.build(x).unwrap()
    }

    #[test]
    fn validate_examples() {
        let mut b = CircuitBuilder::new(and_base(), 2, 0);
        let x1 = b.input(1);
        let x2 = b.input(2);
        let g = b.gate("AND", &[x1, x2]).unwrap();
        assert_eq!(b.build(g).unwrap().validate(), Ok(vec![]));

        let bad = Circuit::from_parts(
            and_base(),
            1,
            0,
            vec![
                Node::Input(1),
                Node::Gate {
                    name: "NOPE".into(),
                    operands: vec![0, 0],
                },
            ],
            1,
        );
        assert_eq!(
            bad.validate().unwrap_err(),
            Violation {
                node: 1,
                kind: ViolationKind::UnknownGate("NOPE".into())
            }
        );

        let cyclic = Circuit::from_parts(
            and_base(),
            1,
            0,
            vec![
                Node::Input(1),
                Node::Gate {
                    name: "AND".into(),
                    operands: vec![0, 1],
                },
            ],
            1,
        );
        assert_eq!(
            cyclic.validate().unwrap_err().kind,
            ViolationKind::NotAcyclic { operand: 1 }
        );

        let bad_input = Circuit::from_parts(and_base(), 1, 0, vec![Node::Input(2)], 0);
        assert_eq!(
            bad_input.validate().unwrap_err().kind,
            ViolationKind::InputIndex { index: 2, n: 1 }
        );
    }

    #[test]
    fn constants_are_reported_not_rejected() {
        let c = Circuit::from_parts(and_base(), 0, 0, vec![Node::Const(true)], 0);
        assert_eq!(
            c.validate(),
            Ok(vec![Warning::ConstantOutsideBase {
                node: 0,
                value: true
            }])
        );
        let with_one = base(&[("ONE", named::one())]);
        let c = Circuit::from_parts(with_one, 0, 0, vec![Node::Const(true)], 0);
        assert_eq!(c.validate(), Ok(vec![]));
    }

    #[test]
    fn eval_det_examples() {
        let mut b = CircuitBuilder::new(and_base(), 2, 0);
        let x1 = b.input(1);
        let x2 = b.input(2);
        let g = b.gate("AND", &[x1, x2]).unwrap();
        let c = b.build(g).unwrap();
        assert!(c.eval_det(&[true, true], &[]).unwrap());
        assert!(!c.eval_det(&[true, false], &[]).unwrap());
        assert!(c.eval_det(&[true], &[]).is_err());

        let mut b = CircuitBuilder::new(and_base(), 2, 0);
        let k = b.constant(false);
        let c = b.build(k).unwrap();
        for x in 0..4 {
            assert!(!c.eval_det(&assignment_of(x, 2), &[]).unwrap());
        }

        let dbase = base(&[("D", named::d())]);
        let mut b = CircuitBuilder::new(dbase, 3, 0);
        let xs: Vec<_> = (1..=3).map(|i| b.input(i)).collect();
        let g = b.gate("D", &xs).unwrap();
        let c = b.build(g).unwrap();
        assert!(c.eval_det(&[true, false, false], &[]).unwrap());
    }

    #[test]
    fn eval_nondet_examples() {
        let c = x_and_y();
        assert!(c.eval_nondet(&[true]).unwrap());
        assert!(!c.eval_nondet(&[false]).unwrap());
        let c = x_op_y("XOR");
        assert!(c.eval_nondet(&[true]).unwrap());
        assert!(c.eval_nondet(&[false]).unwrap());
        let c = bare_x();
        assert_eq!(
            c.eval_nondet(&[true]).unwrap(),
            c.eval_det(&[true], &[]).unwrap()
        );
    }

    #[test]
    fn nondet_bound() {
        let c = Circuit::from_parts(and_base(), 0, 3, vec![Node::Nondet(1)], 0);
        assert_eq!(
            Oracle::new(2).eval_nondet(&c, &[]),
            Err(CircuitError::BoundExceeded { vars: 3, bound: 2 })
        );
        assert!(Oracle::new(3).eval_nondet(&c, &[]).unwrap());
    }

    #[test]
    fn truth_table_examples() {
        let mut b = CircuitBuilder::new(and_base(), 2, 0);
        let x1 = b.input(1);
        let x2 = b.input(2);
        let g = b.gate("AND", &[x1, x2]).unwrap();
        assert_eq!(
            b.build(g)
                .unwrap()
                .truth_table(Semantics::Det)
                .unwrap()
                .to_bit_string(),
            "0001"
        );
        assert_eq!(
            x_and_y()
                .truth_table(Semantics::Nondet)
                .unwrap()
                .to_bit_string(),
            "01"
        );
        assert_eq!(
            x_op_y("XOR")
                .truth_table(Semantics::Nondet)
                .unwrap()
                .to_bit_string(),
            "11"
        );
        // (x, y) with x in the low index bit.
        assert_eq!(
            x_and_y()
                .truth_table(Semantics::Det)
                .unwrap()
                .to_bit_string(),
            "0001"
        );
    }

    #[test]
    fn equiv_examples() {
        let o = Oracle::default();
        assert_eq!(
            o.equiv(&x_and_y(), Semantics::Nondet, &bare_x(), Semantics::Det),
            Ok(Equivalence::Equal)
        );
        assert_eq!(
            o.equiv(&x_op_y("OR"), Semantics::Nondet, &bare_x(), Semantics::Det),
            Ok(Equivalence::Counterexample(vec![false]))
        );
        assert_eq!(
            o.equiv(&bare_x(), Semantics::Det, &bare_x(), Semantics::Det),
            Ok(Equivalence::Equal)
        );
        let two = Circuit::from_parts(and_base(), 2, 0, vec![Node::Input(1)], 0);
        assert_eq!(
            o.equiv(&two, Semantics::Det, &bare_x(), Semantics::Det),
            Err(CircuitError::InputCountMismatch { left: 2, right: 1 })
        );
    }

    #[test]
    fn separating_input_examples() {
        let b3 = base(&[
            ("AND", named::and()),
            ("OR", named::or()),
            ("NOT", named::not()),
        ]);
        // x1 & (x2 | !x2)
        let mut b = CircuitBuilder::new(b3.clone(), 2, 0);
        let x1 = b.input(1);
        let x2 = b.input(2);
        let nx2 = b.gate("NOT", &[x2]).unwrap();
        let or = b.gate("OR", &[x2, nx2]).unwrap();
        let out = b.gate("AND", &[x1, or]).unwrap();
        let c = b.build(out).unwrap();
        let o = Oracle::default();
        assert_eq!(o.find_separating_input(&c, true), Ok(Some(1)));

        for (gate, polarity) in [("OR", true), ("AND", false)] {
            let mut b = CircuitBuilder::new(b3.clone(), 2, 0);
            let x1 = b.input(1);
            let x2 = b.input(2);
            let g = b.gate(gate, &[x1, x2]).unwrap();
            assert_eq!(
                o.find_separating_input(&b.build(g).unwrap(), polarity),
                Ok(None)
            );
        }
    }

    #[test]
    fn wide_spaces_fold_correctly() {
        // x_1 & y_1 over n = 8, m = 3: nondet table equals x_1.
        let mut b = CircuitBuilder::new(and_base(), 8, 3);
        for i in 1..=8 {
            b.input(i);
        }
        let y = b.nondet(3);
        let g = b.gate("AND", &[0, y]).unwrap();
        let c = b.build(g).unwrap();
        assert_eq!(
            c.truth_table(Semantics::Nondet).unwrap(),
            BoolFun::projection(8, 1).unwrap()
        );
        let det = c.truth_table(Semantics::Det).unwrap();
        assert_eq!(det.arity(), 11);
        assert_eq!(det.count_ones(), 1 << 9);
    }

    #[test]
    fn parse_serialize_round_trip() {
        let text = "inputs n=2 m=1\nx1 = input 1\nx2 = input 2\ny1 = nondet 1\nk = const 1\na = AND x1 y1\no = OR a x2\nz = XOR o k\noutput z\n";
        let c = Circuit::parse(text, and_base()).unwrap();
        assert_eq!(c.to_text(), text);
        assert_eq!(c.gate_count(), 3);
    }

    #[test]
    fn parse_errors_name_the_line() {
        let b = and_base();
        let cases = [
            (
                "inputs n=1 m=0\nx = input 1\ng = NAND x x\noutput g\n",
                3,
                "unknown gate",
            ),
            (
                "inputs n=1 m=0\nx = input 1\nx = input 1\noutput x\n",
                3,
                "duplicate node",
            ),
            (
                "inputs n=1 m=0\nx = input 1\ng = AND x\noutput g\n",
                3,
                "takes 2 operands",
            ),
            ("inputs n=1 m=0\nx = input 2\noutput x\n", 2, "outside"),
            ("x = input 1\n", 1, "missing `inputs`"),
            (
                "inputs n=1 m=0\ng = AND x x\nx = input 1\noutput g\n",
                2,
                "undefined node",
            ),
            (
                "inputs n=1 m=0\nx = input 1\noutput x\noutput x\n",
                4,
                "after `output`",
            ),
        ];
        for (text, line, needle) in cases {
            let e = Circuit::parse(text, b.clone()).unwrap_err();
            assert_eq!(e.line, line, "{text}");
            assert!(e.message.contains(needle), "{e} should mention {needle}");
        }
        let e = Circuit::parse("inputs n=1 m=0\nx = input 1\n", b).unwrap_err();
        assert!(e.message.contains("missing `output`"));
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# leading\ninputs n=1 m=0 # header\n\nx = input 1  # the input\noutput x\n";
        let c = Circuit::parse(text, and_base()).unwrap();
        assert_eq!(c.to_text(), "inputs n=1 m=0\nx = input 1\noutput x\n");
    }
}
