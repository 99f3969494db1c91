//! Gate bases, arity-bounded clone closures with witness circuits, and the
//! lacks/full classification of non-deterministic power.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::boolfun::{
    self, apply_small, is_identifier, low_mask, named, BoolFun, DEFAULT_MAX_ARITY,
};
use crate::circuit::{Circuit, CircuitBuilder, NodeId};
use crate::error::{BaseError, CloneError, ParseError};

const RESERVED: [&str; 5] = ["input", "nondet", "const", "inputs", "output"];

/// Gate arities are capped so a gate can be applied to packed words directly.
pub const GATE_ARITY_LIMIT: usize = 6;

/// A finite set of named gate functions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GateBase {
    entries: Vec<(String, BoolFun)>,
}

impl GateBase {
    pub fn new(entries: Vec<(String, BoolFun)>) -> Result<Self, BaseError> {
        if entries.is_empty() {
            return Err(BaseError::Empty);
        }
        for (i, (name, fun)) in entries.iter().enumerate() {
            if !is_identifier(name) || RESERVED.contains(&name.as_str()) {
                return Err(BaseError::InvalidName(name.clone()));
            }
            if entries[..i].iter().any(|(other, _)| other == name) {
                return Err(BaseError::DuplicateName(name.clone()));
            }
            if fun.arity() > GATE_ARITY_LIMIT {
                return Err(BaseError::ArityTooLarge {
                    name: name.clone(),
                    arity: fun.arity(),
                    max: GATE_ARITY_LIMIT,
                });
            }
        }
        Ok(GateBase { entries })
    }

    /// Convenience constructor for literal gate lists.
    pub fn from_named(entries: &[(&str, BoolFun)]) -> Result<Self, BaseError> {
        Self::new(
            entries
                .iter()
                .map(|(n, f)| (n.to_string(), f.clone()))
                .collect(),
        )
    }

    /// Parses a base file: one `<name> <arity> <table-bits>` literal per line,
    /// `#` starts a comment.
    pub fn parse(text: &str, max_arity: usize) -> Result<Self, ParseError> {
        let max_arity = max_arity.min(GATE_ARITY_LIMIT);
        let mut entries: Vec<(String, BoolFun)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| ParseError {
                line: lineno + 1,
                message,
            };
            let (name, fun) = boolfun::parse_literal(line, max_arity).map_err(err)?;
            if RESERVED.contains(&name.as_str()) {
                return Err(err(format!("`{name}` is a reserved word")));
            }
            if entries.iter().any(|(other, _)| *other == name) {
                return Err(err(format!("duplicate gate name `{name}`")));
            }
            entries.push((name, fun));
        }
        if entries.is_empty() {
            return Err(ParseError {
                line: 0,
                message: "base file declares no gates".into(),
            });
        }
        Ok(GateBase { entries })
    }

    pub fn to_text(&self) -> String {
        self.entries
            .iter()
            .map(|(name, fun)| format!("{name} {fun}\n"))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &BoolFun)> {
        self.entries.iter().map(|(n, f)| (n.as_str(), f))
    }

    pub fn functions(&self) -> impl Iterator<Item = &BoolFun> {
        self.entries.iter().map(|(_, f)| f)
    }

    pub fn get(&self, name: &str) -> Option<&BoolFun> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, f)| f)
    }

    /// Name of some gate computing exactly `fun`.
    pub fn name_of(&self, fun: &BoolFun) -> Option<&str> {
        self.entries
            .iter()
            .find(|(_, f)| f == fun)
            .map(|(n, _)| n.as_str())
    }

    /// This base extended by one gate.
    pub fn with_gate(&self, name: &str, fun: BoolFun) -> Result<Self, BaseError> {
        let mut entries = self.entries.clone();
        entries.push((name.to_string(), fun));
        Self::new(entries)
    }

    /// Union of two bases; gates with equal names must agree.
    pub fn union(&self, other: &GateBase) -> Result<Self, BaseError> {
        let mut entries = self.entries.clone();
        for (name, fun) in &other.entries {
            match self.get(name) {
                Some(f) if f == fun => {}
                Some(_) => return Err(BaseError::DuplicateName(name.clone())),
                None => entries.push((name.clone(), fun.clone())),
            }
        }
        Self::new(entries)
    }

    pub fn all(&self, pred: impl Fn(&BoolFun) -> bool) -> bool {
        self.functions().all(pred)
    }

    pub fn is_monotone(&self) -> bool {
        self.all(BoolFun::is_monotone)
    }

    pub fn is_linear(&self) -> bool {
        self.all(BoolFun::is_affine)
    }

    pub fn is_self_dual(&self) -> bool {
        self.all(BoolFun::is_self_dual)
    }
}

/// Ready-made bases.
pub mod standard {
    use super::*;

    fn base(entries: &[(&str, BoolFun)]) -> Arc<GateBase> {
        Arc::new(GateBase::from_named(entries).expect("valid standard base"))
    }

    /// `{AND, OR, NOT}`, the input base of NOT elimination.
    pub fn and_or_not() -> Arc<GateBase> {
        base(&[
            ("AND", named::and()),
            ("OR", named::or()),
            ("NOT", named::not()),
        ])
    }

    /// `{AND, OR, XNOR}`, the output base of conjunctive NOT elimination.
    pub fn and_or_xnor() -> Arc<GateBase> {
        base(&[
            ("AND", named::and()),
            ("OR", named::or()),
            ("XNOR", named::xnor()),
        ])
    }

    /// `{AND, OR, XOR}`, the output base of disjunctive NOT elimination.
    pub fn and_or_xor() -> Arc<GateBase> {
        base(&[
            ("AND", named::and()),
            ("OR", named::or()),
            ("XOR", named::xor()),
        ])
    }

    /// `{G}` with `G = x & (y | !z)`.
    pub fn gadget_and() -> Arc<GateBase> {
        base(&[("G", named::and_or_not())])
    }

    /// `{G}` with `G = x | (y & !z)`.
    pub fn gadget_or() -> Arc<GateBase> {
        base(&[("G", named::or_and_not())])
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Recipe {
    Projection(usize),
    Constant(bool),
    Apply { gate: usize, args: Vec<u32> },
}

#[derive(Debug, Clone)]
struct Member {
    table: u64,
    recipe: Recipe,
    /// Gate members reachable from this one, itself included, sorted.
    cone: Vec<u32>,
}

impl Member {
    fn size(&self) -> usize {
        self.cone.len()
    }
}

enum TableIndex {
    Dense(Vec<u32>),
    Sparse(HashMap<u64, u32>),
}

impl TableIndex {
    const NONE: u32 = u32::MAX;

    fn new(arity: usize) -> Self {
        if arity <= 4 {
            TableIndex::Dense(vec![Self::NONE; 1 << (1 << arity)])
        } else {
            TableIndex::Sparse(HashMap::new())
        }
    }

    fn get(&self, table: u64) -> Option<u32> {
        match self {
            TableIndex::Dense(v) => Some(v[table as usize]).filter(|&i| i != Self::NONE),
            TableIndex::Sparse(m) => m.get(&table).copied(),
        }
    }

    fn insert(&mut self, table: u64, id: u32) {
        match self {
            TableIndex::Dense(v) => v[table as usize] = id,
            TableIndex::Sparse(m) => {
                m.insert(table, id);
            }
        }
    }
}

/// All members of `[G]` of one arity.
struct Level {
    arity: usize,
    members: Vec<Member>,
    index: TableIndex,
}

/// The functions of arity at most `arity_bound` generated by a base, each
/// with a witness circuit over that base.
pub struct CloneClosure {
    base: Arc<GateBase>,
    arity_bound: usize,
    constants_allowed: bool,
    levels: Vec<Level>,
}

impl fmt::Debug for CloneClosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CloneClosure")
            .field("base", &self.base)
            .field("arity_bound", &self.arity_bound)
            .field("constants_allowed", &self.constants_allowed)
            .field(
                "members_per_arity",
                &self
                    .levels
                    .iter()
                    .map(|l| l.members.len())
                    .collect::<Vec<_>>(),
            )
            .finish()
    }
}

/// Computes the closure of `base` up to arity `arity_bound`, using the default arity limit.
pub fn closure(
    base: Arc<GateBase>,
    arity_bound: usize,
    constants_allowed: bool,
) -> Result<CloneClosure, CloneError> {
    CloneClosure::compute(base, arity_bound, constants_allowed, DEFAULT_MAX_ARITY)
}

impl CloneClosure {
    /// Fixpoint of composing base gates over members sharing `k` variables,
    /// seeded with the projections (and both constants when allowed).
    ///
    /// Rounds are breadth-first: round `r` only applies gates to tuples that
    /// contain a member found in round `r - 1`, and among the candidates of a
    /// round the smallest witness wins.
    pub fn compute(
        base: Arc<GateBase>,
        arity_bound: usize,
        constants_allowed: bool,
        max_arity: usize,
    ) -> Result<Self, CloneError> {
        let max = max_arity.min(6);
        if arity_bound > max {
            return Err(CloneError::ArityBound {
                bound: arity_bound,
                max,
            });
        }
        let levels = (0..=arity_bound)
            .map(|k| Self::level(&base, k, constants_allowed))
            .collect();
        Ok(CloneClosure {
            base,
            arity_bound,
            constants_allowed,
            levels,
        })
    }

    fn level(base: &GateBase, arity: usize, constants_allowed: bool) -> Level {
        let mask = low_mask(arity);
        let full = if arity <= 5 {
            Some(1usize << (1 << arity))
        } else {
            None
        };
        let mut level = Level {
            arity,
            members: Vec::new(),
            index: TableIndex::new(arity),
        };
        let seed = |level: &mut Level, table: u64, recipe: Recipe| {
            if level.index.get(table).is_none() {
                level.index.insert(table, level.members.len() as u32);
                level.members.push(Member {
                    table,
                    recipe,
                    cone: Vec::new(),
                });
            }
        };
        for j in 1..=arity {
            let p = BoolFun::projection(arity, j).unwrap().as_u64().unwrap();
            seed(&mut level, p, Recipe::Projection(j));
        }
        if constants_allowed {
            seed(&mut level, 0, Recipe::Constant(false));
            seed(&mut level, mask, Recipe::Constant(true));
        }

        let gates: Vec<&BoolFun> = base.functions().collect();
        let mut old = 0usize;
        let mut first_round = true;
        loop {
            let cur = level.members.len();
            if full == Some(cur) {
                break;
            }
            let mut found: Vec<Member> = Vec::new();
            let mut found_index: HashMap<u64, usize> = HashMap::new();
            'gates: for (g, fun) in gates.iter().enumerate() {
                let r = fun.arity();
                let table = fun.as_u64().unwrap();
                if r == 0 {
                    if first_round {
                        let value = apply_small(table, 0, &[]) & mask;
                        Self::offer(&level, &mut found, &mut found_index, value, g, Vec::new());
                    }
                    continue;
                }
                if cur == 0 {
                    continue;
                }
                // Odometer over r-tuples of members with at least one index >= old.
                let mut tuple = vec![0u32; r];
                let mut ops = vec![0u64; r];
                loop {
                    if tuple.iter().any(|&t| t as usize >= old) {
                        for (o, &t) in ops.iter_mut().zip(&tuple) {
                            *o = level.members[t as usize].table;
                        }
                        let value = apply_small(table, r, &ops) & mask;
                        if level.index.get(value).is_none() {
                            Self::offer(
                                &level,
                                &mut found,
                                &mut found_index,
                                value,
                                g,
                                tuple.clone(),
                            );
                            if full == Some(cur + found.len()) {
                                break 'gates;
                            }
                        }
                    }
                    let mut pos = 0;
                    loop {
                        if pos == r {
                            break;
                        }
                        tuple[pos] += 1;
                        if (tuple[pos] as usize) < cur {
                            break;
                        }
                        tuple[pos] = 0;
                        pos += 1;
                    }
                    if pos == r {
                        break;
                    }
                }
            }
            first_round = false;
            if found.is_empty() {
                break;
            }
            old = cur;
            for mut member in found {
                let id = level.members.len() as u32;
                // The candidate's own slot in its cone is its final id.
                let placeholder = u32::MAX;
                if let Some(slot) = member.cone.iter().position(|&c| c == placeholder) {
                    member.cone[slot] = id;
                }
                member.cone.sort_unstable();
                level.index.insert(member.table, id);
                level.members.push(member);
            }
        }
        level
    }

    /// Records a candidate for a table not yet in the level, keeping the
    /// smallest witness seen in the current round.
    fn offer(
        level: &Level,
        found: &mut Vec<Member>,
        found_index: &mut HashMap<u64, usize>,
        table: u64,
        gate: usize,
        args: Vec<u32>,
    ) {
        if level.index.get(table).is_some() {
            return;
        }
        let existing = found_index.get(&table).copied();
        if let Some(i) = existing {
            let lower = 1 + args
                .iter()
                .map(|&a| level.members[a as usize].size())
                .max()
                .unwrap_or(0);
            if lower >= found[i].size() {
                return;
            }
        }
        let mut cone: Vec<u32> = args
            .iter()
            .flat_map(|&a| level.members[a as usize].cone.iter().copied())
            .collect();
        cone.sort_unstable();
        cone.dedup();
        cone.push(u32::MAX);
        let member = Member {
            table,
            recipe: Recipe::Apply { gate, args },
            cone,
        };
        match existing {
            Some(i) if member.size() < found[i].size() => found[i] = member,
            Some(_) => {}
            None => {
                found_index.insert(table, found.len());
                found.push(member);
            }
        }
    }

    pub fn base(&self) -> &Arc<GateBase> {
        &self.base
    }

    pub fn arity_bound(&self) -> usize {
        self.arity_bound
    }

    pub fn constants_allowed(&self) -> bool {
        self.constants_allowed
    }

    /// Members of one arity, sorted by table value, with witness sizes.
    pub fn members(&self, arity: usize) -> Vec<(BoolFun, usize)> {
        let Some(level) = self.levels.get(arity) else {
            return Vec::new();
        };
        let mut out: Vec<(BoolFun, usize)> = level
            .members
            .iter()
            .map(|m| (BoolFun::from_u64_unchecked(arity, m.table), m.size()))
            .collect();
        out.sort();
        out
    }

    /// All members ordered by arity, then table value.
    pub fn all_members(&self) -> Vec<(BoolFun, usize)> {
        (0..=self.arity_bound)
            .flat_map(|k| self.members(k))
            .collect()
    }

    pub fn member_count(&self, arity: usize) -> usize {
        self.levels.get(arity).map_or(0, |l| l.members.len())
    }

    fn find(&self, f: &BoolFun) -> Result<Option<(&Level, u32)>, CloneError> {
        if f.arity() > self.arity_bound {
            return Err(CloneError::OutOfBound {
                arity: f.arity(),
                bound: self.arity_bound,
            });
        }
        let level = &self.levels[f.arity()];
        Ok(level.index.get(f.as_u64().unwrap()).map(|id| (level, id)))
    }

    pub fn contains(&self, f: &BoolFun) -> Result<bool, CloneError> {
        Ok(self.find(f)?.is_some())
    }

    pub fn witness_size(&self, f: &BoolFun) -> Result<Option<usize>, CloneError> {
        Ok(self
            .find(f)?
            .map(|(level, id)| level.members[id as usize].size()))
    }

    /// A circuit over the base (plus constants, if allowed) computing `f`, or
    /// `None` if `f` is not generated.
    pub fn member(&self, f: &BoolFun) -> Result<Option<Circuit>, CloneError> {
        let Some((level, id)) = self.find(f)? else {
            return Ok(None);
        };
        let mut b = CircuitBuilder::new(self.base.clone(), level.arity, 0);
        let inputs: Vec<NodeId> = (1..=level.arity).map(|i| b.input(i)).collect();
        let mut emitted: HashMap<u32, NodeId> = HashMap::new();
        let out = self.emit(level, id, &inputs, &mut b, &mut emitted);
        Ok(Some(
            b.build(out).expect("witness circuits are well formed"),
        ))
    }

    fn emit(
        &self,
        level: &Level,
        id: u32,
        inputs: &[NodeId],
        b: &mut CircuitBuilder,
        emitted: &mut HashMap<u32, NodeId>,
    ) -> NodeId {
        if let Some(&node) = emitted.get(&id) {
            return node;
        }
        let node = match &level.members[id as usize].recipe {
            Recipe::Projection(j) => inputs[j - 1],
            Recipe::Constant(v) => b.constant(*v),
            Recipe::Apply { gate, args } => {
                let ops: Vec<NodeId> = args
                    .iter()
                    .map(|&a| self.emit(level, a, inputs, b, emitted))
                    .collect();
                let name = self.base.entries[*gate].0.clone();
                b.gate(&name, &ops).expect("recipe matches the base")
            }
        };
        emitted.insert(id, node);
        node
    }

    /// Largest witness size over all members. Replacing every gate of a
    /// circuit by its witness grows the circuit by at most this factor.
    pub fn conversion_constant(&self) -> usize {
        self.levels
            .iter()
            .flat_map(|l| l.members.iter().map(Member::size))
            .max()
            .unwrap_or(0)
    }
}

/// Post's criterion: a base is functionally complete iff it escapes each of
/// the five maximal clones.
pub fn is_complete(base: &GateBase) -> bool {
    !base.all(BoolFun::preserves_zero)
        && !base.all(BoolFun::preserves_one)
        && !base.all(BoolFun::is_monotone)
        && !base.all(BoolFun::is_self_dual)
        && !base.all(BoolFun::is_affine)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LackReason {
    Monotone,
    Linear,
    SelfDual,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gadget {
    /// `x & (y | !z)`
    AndOrNot,
    /// `x | (y & !z)`
    OrAndNot,
}

impl Gadget {
    pub fn function(self) -> BoolFun {
        match self {
            Gadget::AndOrNot => named::and_or_not(),
            Gadget::OrAndNot => named::or_and_not(),
        }
    }
}

impl fmt::Display for LackReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LackReason::Monotone => "MONOTONE",
            LackReason::Linear => "LINEAR",
            LackReason::SelfDual => "SELF_DUAL",
        })
    }
}

impl fmt::Display for Gadget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Gadget::AndOrNot => "AND_OR_NOT",
            Gadget::OrAndNot => "OR_AND_NOT",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// Non-deterministic circuits over the base save at most a constant factor.
    Lacks(LackReason),
    /// The base generates a gadget; `witness` computes it over the base.
    Full { gadget: Gadget, witness: Circuit },
}

impl Verdict {
    pub fn is_lacks(&self) -> bool {
        matches!(self, Verdict::Lacks(_))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Lacks(reason) => write!(f, "LACKS({reason})"),
            Verdict::Full { gadget, .. } => write!(f, "FULL({gadget})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerClassification {
    pub verdict: Verdict,
    pub complete: bool,
    pub has_both_constants: bool,
}

/// The first gadget generated at arity 3, with its witness.
pub fn gadget_search(closure: &CloneClosure) -> Result<Option<(Gadget, Circuit)>, CloneError> {
    for gadget in [Gadget::AndOrNot, Gadget::OrAndNot] {
        if let Some(w) = closure.member(&gadget.function())? {
            return Ok(Some((gadget, w)));
        }
    }
    Ok(None)
}

/// Whether both unary constant functions are generated.
pub fn has_both_constants(closure: &CloneClosure) -> Result<bool, CloneError> {
    Ok(closure.contains(&BoolFun::constant(1, false).unwrap())?
        && closure.contains(&BoolFun::constant(1, true).unwrap())?)
}

/// Decides whether non-deterministic circuits over `base` lack power or have
/// full power.
pub fn classify(base: Arc<GateBase>) -> Result<PowerClassification, CloneError> {
    let closure = closure(base.clone(), 3, false)?;
    let verdict = if base.is_monotone() {
        Verdict::Lacks(LackReason::Monotone)
    } else if base.is_linear() {
        Verdict::Lacks(LackReason::Linear)
    } else if base.is_self_dual() {
        Verdict::Lacks(LackReason::SelfDual)
    } else {
        let (gadget, witness) = gadget_search(&closure)?.ok_or(CloneError::GadgetNotFound)?;
        Verdict::Full { gadget, witness }
    };
    Ok(PowerClassification {
        verdict,
        complete: is_complete(&base),
        has_both_constants: has_both_constants(&closure)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Semantics;

    fn base(entries: &[(&str, BoolFun)]) -> Arc<GateBase> {
        Arc::new(GateBase::from_named(entries).unwrap())
    }

    #[test]
    fn base_parsing() {
        let text = "# monotone\nAND 2 0001\nOR 2 0111 # disjunction\n\nONE 0 1\nZERO 0 0\n";
        let b = GateBase::parse(text, 6).unwrap();
        assert_eq!(b.len(), 4);
        assert_eq!(b.get("ONE"), Some(&named::one()));
        assert_eq!(GateBase::parse(&b.to_text(), 6).unwrap(), b);

        let e = GateBase::parse("AND 2 0001\nAND 2 0111\n", 6).unwrap_err();
        assert_eq!(e.line, 2);
        let e = GateBase::parse("AND 2 0001\nOR 2 011\n", 6).unwrap_err();
        assert_eq!(e.line, 2);
        let e = GateBase::parse("# nothing\n", 6).unwrap_err();
        assert_eq!(e.line, 0);
        let e = GateBase::parse("input 1 01\n", 6).unwrap_err();
        assert_eq!(e.line, 1);
        assert!(GateBase::parse("W 3 01010101\n", 2).is_err());
    }

    #[test]
    fn base_invariants() {
        assert_eq!(GateBase::new(vec![]), Err(BaseError::Empty));
        assert_eq!(
            GateBase::from_named(&[("A", named::and()), ("A", named::or())]),
            Err(BaseError::DuplicateName("A".into()))
        );
        assert!(GateBase::from_named(&[("const", named::and())]).is_err());
    }

    #[test]
    fn and_closure_at_arity_two() {
        let c = closure(base(&[("AND", named::and())]), 2, false).unwrap();
        let members: Vec<BoolFun> = c.members(2).into_iter().map(|(f, _)| f).collect();
        let mut expected = vec![
            BoolFun::projection(2, 1).unwrap(),
            BoolFun::projection(2, 2).unwrap(),
            named::and(),
        ];
        expected.sort();
        assert_eq!(members, expected);
        assert_eq!(c.member(&named::or()).unwrap(), None);
        // no constants at arity 0 without nullary gates
        assert_eq!(c.member_count(0), 0);
    }

    #[test]
    fn d_closure_is_the_self_dual_ternaries() {
        let c = closure(base(&[("D", named::d())]), 3, false).unwrap();
        assert_eq!(c.member_count(3), 16);
        assert!(c.members(3).iter().all(|(f, _)| f.is_self_dual()));
        let w = c.member(&named::d()).unwrap().unwrap();
        assert_eq!(w.gate_count(), 1);
        assert_eq!(w.truth_table(Semantics::Det).unwrap(), named::d());
    }

    #[test]
    fn gadget_with_constants_is_complete_at_arity_two() {
        let c = closure(standard::gadget_and(), 2, true).unwrap();
        assert_eq!(c.member_count(2), 16);
        let w = c.member(&named::not()).unwrap().unwrap();
        assert_eq!(w.truth_table(Semantics::Det).unwrap().to_bit_string(), "10");
    }

    #[test]
    fn nand_witness_sizes() {
        let c = closure(base(&[("NAND", named::nand())]), 2, false).unwrap();
        assert_eq!(c.witness_size(&named::not()).unwrap(), Some(1));
        assert_eq!(c.witness_size(&named::and()).unwrap(), Some(2));
        assert_eq!(c.witness_size(&named::or()).unwrap(), Some(3));
        for (f, size) in c.all_members() {
            let w = c.member(&f).unwrap().unwrap();
            assert_eq!(w.truth_table(Semantics::Det).unwrap(), f);
            assert_eq!(w.gate_count(), size);
        }
    }

    #[test]
    fn out_of_bound_lookups() {
        let c = closure(base(&[("AND", named::and())]), 1, false).unwrap();
        assert_eq!(
            c.contains(&named::and()),
            Err(CloneError::OutOfBound { arity: 2, bound: 1 })
        );
        assert!(matches!(
            closure(base(&[("AND", named::and())]), 7, false),
            Err(CloneError::ArityBound { .. })
        ));
    }

    #[test]
    fn completeness_examples() {
        assert!(is_complete(&base(&[("NAND", named::nand())])));
        assert!(!is_complete(&base(&[
            ("AND", named::and()),
            ("OR", named::or()),
            ("ONE", named::one()),
            ("ZERO", named::zero())
        ])));
        assert!(!is_complete(&standard::gadget_and()));
    }

    #[test]
    fn classify_examples() {
        let mono = base(&[
            ("AND", named::and()),
            ("OR", named::or()),
            ("ONE", named::one()),
            ("ZERO", named::zero()),
        ]);
        let c = classify(mono).unwrap();
        assert_eq!(c.verdict, Verdict::Lacks(LackReason::Monotone));
        assert!(c.has_both_constants);
        assert!(!c.complete);

        let lin = base(&[("XOR", named::xor()), ("ONE", named::one())]);
        assert_eq!(
            classify(lin).unwrap().verdict,
            Verdict::Lacks(LackReason::Linear)
        );

        let sd = classify(base(&[("D", named::d())])).unwrap();
        assert_eq!(sd.verdict, Verdict::Lacks(LackReason::SelfDual));
        assert!(!sd.has_both_constants);

        let g = classify(standard::gadget_and()).unwrap();
        match g.verdict {
            Verdict::Full { gadget, witness } => {
                assert_eq!(gadget, Gadget::AndOrNot);
                assert_eq!(witness.gate_count(), 1);
            }
            other => panic!("unexpected {other}"),
        }

        let nand = base(&[("NAND", named::nand())]);
        let closure3 = closure(nand.clone(), 3, false).unwrap();
        assert_eq!(closure3.member_count(3), 256);
        assert!(closure3.contains(&named::and_or_not()).unwrap());
        assert!(closure3.contains(&named::or_and_not()).unwrap());
        let c = classify(nand).unwrap();
        assert!(matches!(c.verdict, Verdict::Full { .. }));
        assert!(c.complete && c.has_both_constants);
    }

    #[test]
    fn full_witness_computes_gadget() {
        for b in [standard::gadget_or(), base(&[("NOR", named::nor())])] {
            let c = classify(b).unwrap();
            let Verdict::Full { gadget, witness } = c.verdict else {
                panic!("expected FULL");
            };
            assert_eq!(
                witness.truth_table(Semantics::Det).unwrap(),
                gadget.function()
            );
        }
    }
}
