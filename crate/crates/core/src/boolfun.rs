//! Truth-table Boolean functions and the Post-class predicates.
//!
//! Bit `i` of a table is the value of the function on the assignment whose
//! variable `x_j` equals bit `j - 1` of `i`, i.e. `x_1` is the least
//! significant index bit. Tables are stored as packed 64-bit words.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{BoolFunError, ParseError};

/// Default bound on the arity of gate functions and clone closures.
pub const DEFAULT_MAX_ARITY: usize = 6;

/// Hard cap on the arity of any table, including tables derived from
/// circuits by exhaustive evaluation.
pub const TABLE_ARITY_LIMIT: usize = 26;

/// A Boolean function of fixed arity given by its full truth table.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BoolFun {
    arity: usize,
    words: Vec<u64>,
}

pub(crate) fn word_count(arity: usize) -> usize {
    if arity <= 6 {
        1
    } else {
        1 << (arity - 6)
    }
}

/// Mask of the meaningful bits in the (single) word of a table of `arity < 6`.
pub(crate) fn low_mask(arity: usize) -> u64 {
    if arity >= 6 {
        u64::MAX
    } else {
        (1u64 << (1u32 << arity)) - 1
    }
}

impl BoolFun {
    /// Builds a function from packed table words. Bits above `2^arity` must be clear.
    pub fn from_words(arity: usize, words: Vec<u64>) -> Result<Self, BoolFunError> {
        if arity > TABLE_ARITY_LIMIT {
            return Err(BoolFunError::ArityTooLarge {
                arity,
                max: TABLE_ARITY_LIMIT,
            });
        }
        if words.len() != word_count(arity) || words[0] & !low_mask(arity) != 0 {
            return Err(BoolFunError::TableLength {
                expected: 1 << arity,
            });
        }
        Ok(BoolFun { arity, words })
    }

    /// Builds a function of arity at most 6 from a table packed into one word.
    pub fn from_u64(arity: usize, table: u64) -> Result<Self, BoolFunError> {
        if arity > 6 {
            return Err(BoolFunError::ArityTooLarge { arity, max: 6 });
        }
        Self::from_words(arity, vec![table])
    }

    pub(crate) fn from_u64_unchecked(arity: usize, table: u64) -> Self {
        debug_assert!(arity <= 6 && table & !low_mask(arity) == 0);
        BoolFun {
            arity,
            words: vec![table],
        }
    }

    /// Builds a function from table bits listed from index 0 upward.
    pub fn from_bits<I: IntoIterator<Item = bool>>(
        arity: usize,
        bits: I,
    ) -> Result<Self, BoolFunError> {
        if arity > TABLE_ARITY_LIMIT {
            return Err(BoolFunError::ArityTooLarge {
                arity,
                max: TABLE_ARITY_LIMIT,
            });
        }
        let len = 1usize << arity;
        let mut words = vec![0u64; word_count(arity)];
        let mut count = 0usize;
        for (i, b) in bits.into_iter().enumerate() {
            if i >= len {
                return Err(BoolFunError::TableLength { expected: len });
            }
            if b {
                words[i / 64] |= 1 << (i % 64);
            }
            count += 1;
        }
        if count != len {
            return Err(BoolFunError::TableLength { expected: len });
        }
        Ok(BoolFun { arity, words })
    }

    /// Builds a function by evaluating `f` on every table index.
    pub fn from_fn(arity: usize, f: impl Fn(usize) -> bool) -> Result<Self, BoolFunError> {
        Self::from_bits(arity, (0..1usize << arity).map(f))
    }

    /// The constant function of the given arity.
    pub fn constant(arity: usize, value: bool) -> Result<Self, BoolFunError> {
        Self::from_fn(arity, |_| value)
    }

    /// The projection `(x_1, ..., x_k) -> x_j`, with `1 <= j <= k`.
    pub fn projection(k: usize, j: usize) -> Result<Self, BoolFunError> {
        if j == 0 || j > k {
            return Err(BoolFunError::ProjectionIndex { arity: k, index: j });
        }
        Self::from_fn(k, |i| i >> (j - 1) & 1 == 1)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Number of table entries, `2^arity`.
    pub fn table_len(&self) -> usize {
        1 << self.arity
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// The packed table when it fits in a single word.
    pub fn as_u64(&self) -> Option<u64> {
        (self.arity <= 6).then(|| self.words[0])
    }

    pub fn bit(&self, index: usize) -> bool {
        debug_assert!(index < self.table_len());
        self.words[index / 64] >> (index % 64) & 1 == 1
    }

    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.table_len()).map(move |i| self.bit(i))
    }

    /// Evaluates the function on an assignment `(x_1, ..., x_k)`.
    pub fn eval(&self, assignment: &[bool]) -> Result<bool, BoolFunError> {
        if assignment.len() != self.arity {
            return Err(BoolFunError::ArityMismatch {
                expected: self.arity,
                got: assignment.len(),
            });
        }
        Ok(self.bit(index_of(assignment)))
    }

    /// `Some(v)` if the function is constantly `v`.
    pub fn constant_value(&self) -> Option<bool> {
        let mask = low_mask(self.arity);
        if self.words.iter().all(|&w| w & mask == 0) {
            Some(false)
        } else if self.words.iter().all(|&w| w & mask == mask) {
            Some(true)
        } else {
            None
        }
    }

    /// Number of assignments on which the function is 1.
    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// `x -> !f(!x_1, ..., !x_k)`.
    pub fn dual(&self) -> BoolFun {
        let last = self.table_len() - 1;
        BoolFun::from_fn(self.arity, |i| !self.bit(last - i)).expect("arity already validated")
    }

    pub fn complement(&self) -> BoolFun {
        let mask = low_mask(self.arity);
        BoolFun {
            arity: self.arity,
            words: self.words.iter().map(|w| !w & mask).collect(),
        }
    }

    pub fn is_monotone(&self) -> bool {
        (0..self.arity).all(|j| {
            (0..self.table_len())
                .filter(|i| i >> j & 1 == 0)
                .all(|i| !self.bit(i) || self.bit(i | 1 << j))
        })
    }

    /// True iff the function is `c ^ x_{i1} ^ ... ^ x_{ir}` for some constant and variable subset.
    pub fn is_affine(&self) -> bool {
        (0..self.arity).all(|j| {
            let flip = self.bit(0) != self.bit(1 << j);
            (0..self.table_len()).all(|i| (self.bit(i) != self.bit(i ^ 1 << j)) == flip)
        })
    }

    pub fn is_self_dual(&self) -> bool {
        let last = self.table_len() - 1;
        (0..=last / 2).all(|i| self.bit(i) != self.bit(last - i))
    }

    pub fn preserves_zero(&self) -> bool {
        !self.bit(0)
    }

    pub fn preserves_one(&self) -> bool {
        self.bit(self.table_len() - 1)
    }

    /// Smallest 1-based index `i` such that `x_i == polarity` on every row
    /// where the function equals `polarity`.
    ///
    /// When no row takes the value `polarity` every index qualifies, so the
    /// result is 1 for positive arity and `None` at arity 0.
    pub fn separating_index(&self, polarity: bool) -> Option<usize> {
        (1..=self.arity).find(|&j| {
            (0..self.table_len())
                .filter(|&i| self.bit(i) == polarity)
                .all(|i| (i >> (j - 1) & 1 == 1) == polarity)
        })
    }

    /// Table bits from index 0 upward, e.g. `0001` for AND.
    pub fn to_bit_string(&self) -> String {
        self.bits().map(|b| if b { '1' } else { '0' }).collect()
    }

    /// Lowercase hex of the table read as a number, index 0 in the least
    /// significant nibble.
    pub fn to_hex(&self) -> String {
        let nibbles = self.table_len().div_ceil(4);
        (0..nibbles)
            .rev()
            .map(|k| {
                let v = (self.words[k * 4 / 64] >> (k * 4 % 64)) & 0xf;
                char::from_digit(v as u32, 16).unwrap()
            })
            .collect()
    }

    /// Parses the output of [`BoolFun::to_hex`].
    pub fn from_hex(arity: usize, hex: &str) -> Result<Self, BoolFunError> {
        if arity > TABLE_ARITY_LIMIT {
            return Err(BoolFunError::ArityTooLarge {
                arity,
                max: TABLE_ARITY_LIMIT,
            });
        }
        let len = 1usize << arity;
        if hex.len() != len.div_ceil(4) {
            return Err(BoolFunError::TableLength { expected: len });
        }
        let mut words = vec![0u64; word_count(arity)];
        for (k, c) in hex.chars().rev().enumerate() {
            let v = c
                .to_digit(16)
                .ok_or(BoolFunError::TableLength { expected: len })? as u64;
            words[k * 4 / 64] |= v << (k * 4 % 64);
        }
        Self::from_words(arity, words)
    }
}

/// Applies a gate to operand words: bit `b` of the result is the gate's value
/// on bit `b` of each operand.
pub(crate) fn apply_word(fun: &BoolFun, ops: &[u64]) -> u64 {
    apply_table(&fun.words, fun.arity, ops)
}

fn apply_table(words: &[u64], arity: usize, ops: &[u64]) -> u64 {
    if arity <= 6 {
        return apply_small(words[0], arity, ops);
    }
    let half = words.len() / 2;
    let lo = apply_table(&words[..half], arity - 1, ops);
    let hi = apply_table(&words[half..], arity - 1, ops);
    let x = ops[arity - 1];
    (lo & !x) | (hi & x)
}

/// Shannon expansion on the highest variable of a single-word table.
pub(crate) fn apply_small(table: u64, arity: usize, ops: &[u64]) -> u64 {
    if table == 0 {
        return 0;
    }
    if table == low_mask(arity) {
        return u64::MAX;
    }
    let half = 1u32 << (arity - 1);
    let lo = table & ((1u64 << half) - 1);
    let hi = table >> half;
    if lo == hi {
        return apply_small(lo, arity - 1, ops);
    }
    let x = ops[arity - 1];
    (apply_small(lo, arity - 1, ops) & !x) | (apply_small(hi, arity - 1, ops) & x)
}

/// Table index of an assignment, `x_1` least significant.
pub fn index_of(assignment: &[bool]) -> usize {
    assignment
        .iter()
        .enumerate()
        .fold(0, |acc, (j, &b)| acc | (b as usize) << j)
}

/// Assignment `(x_1, ..., x_k)` encoded by a table index.
pub fn assignment_of(index: usize, arity: usize) -> Vec<bool> {
    (0..arity).map(|j| index >> j & 1 == 1).collect()
}

impl Ord for BoolFun {
    fn cmp(&self, other: &Self) -> Ordering {
        self.arity
            .cmp(&other.arity)
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl PartialOrd for BoolFun {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for BoolFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BoolFun({} {})", self.arity, self.to_bit_string())
    }
}

impl fmt::Display for BoolFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.arity, self.to_bit_string())
    }
}

/// Common named functions.
pub mod named {
    use super::BoolFun;

    pub fn and() -> BoolFun {
        BoolFun::from_u64_unchecked(2, 0b1000)
    }

    pub fn or() -> BoolFun {
        BoolFun::from_u64_unchecked(2, 0b1110)
    }

    pub fn nand() -> BoolFun {
        BoolFun::from_u64_unchecked(2, 0b0111)
    }

    pub fn nor() -> BoolFun {
        BoolFun::from_u64_unchecked(2, 0b0001)
    }

    pub fn xor() -> BoolFun {
        BoolFun::from_u64_unchecked(2, 0b0110)
    }

    pub fn xnor() -> BoolFun {
        BoolFun::from_u64_unchecked(2, 0b1001)
    }

    pub fn not() -> BoolFun {
        BoolFun::from_u64_unchecked(1, 0b01)
    }

    pub fn zero() -> BoolFun {
        BoolFun::from_u64_unchecked(0, 0)
    }

    pub fn one() -> BoolFun {
        BoolFun::from_u64_unchecked(0, 1)
    }

    fn ternary(f: impl Fn(bool, bool, bool) -> bool) -> BoolFun {
        BoolFun::from_fn(3, |i| f(i & 1 == 1, i & 2 == 2, i & 4 == 4)).unwrap()
    }

    /// `(x1 & !x2) | (!x2 & !x3) | (!x3 & x1)`, a generator of the self-dual functions.
    pub fn d() -> BoolFun {
        ternary(|x1, x2, x3| (x1 && !x2) || (!x2 && !x3) || (!x3 && x1))
    }

    pub fn majority() -> BoolFun {
        ternary(|x, y, z| (x && y) || (y && z) || (x && z))
    }

    /// `x & (y | !z)`.
    pub fn and_or_not() -> BoolFun {
        ternary(|x, y, z| x && (y || !z))
    }

    /// `x | (y & !z)`.
    pub fn or_and_not() -> BoolFun {
        ternary(|x, y, z| x || (y && !z))
    }

    /// `x & (y | z)`.
    pub fn and_or() -> BoolFun {
        ternary(|x, y, z| x && (y || z))
    }

    /// `x | (y & z)`.
    pub fn or_and() -> BoolFun {
        ternary(|x, y, z| x || (y && z))
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.' | '\''))
}

/// Parses a function literal `<name> <arity> <table-bits>`, e.g. `AND 2 0001`.
pub fn parse_literal(text: &str, max_arity: usize) -> Result<(String, BoolFun), String> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    let [name, arity, table] = tokens[..] else {
        return Err(format!(
            "expected `<name> <arity> <table-bits>`, found {} token(s)",
            tokens.len()
        ));
    };
    if !is_identifier(name) {
        return Err(format!("invalid function name `{name}`"));
    }
    let arity: usize = arity
        .parse()
        .map_err(|_| format!("invalid arity `{arity}`"))?;
    if arity > max_arity {
        return Err(format!("arity {arity} exceeds the maximum of {max_arity}"));
    }
    if table.len() != 1 << arity {
        return Err(format!(
            "table for arity {arity} needs {} bits, found {}",
            1usize << arity,
            table.len()
        ));
    }
    let bits = table
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(format!("invalid table character `{other}`")),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let fun = BoolFun::from_bits(arity, bits).map_err(|e| e.to_string())?;
    Ok((name.to_string(), fun))
}

/// Parses a single literal line, attaching line number 1 to errors.
pub fn parse_fun_literal(text: &str, max_arity: usize) -> Result<(String, BoolFun), ParseError> {
    parse_literal(text.trim(), max_arity).map_err(|message| ParseError { line: 1, message })
}

#[cfg(test)]
mod tests {
    use super::named::*;
    use super::*;

    fn f(arity: usize, bits: &str) -> BoolFun {
        parse_literal(&format!("F {arity} {bits}"), 6).unwrap().1
    }

    #[test]
    fn eval_examples() {
        assert!(and().eval(&[true, true]).unwrap());
        assert!(!and().eval(&[true, false]).unwrap());
        assert!(d().eval(&[true, false, false]).unwrap());
        assert_eq!(
            and().eval(&[true]),
            Err(BoolFunError::ArityMismatch {
                expected: 2,
                got: 1
            })
        );
    }

    #[test]
    fn named_tables() {
        assert_eq!(and().to_bit_string(), "0001");
        assert_eq!(or().to_bit_string(), "0111");
        assert_eq!(nand().to_bit_string(), "1110");
        assert_eq!(xnor().to_bit_string(), "1001");
        assert_eq!(not().to_bit_string(), "10");
        assert_eq!(d().to_bit_string(), "11010100");
        assert_eq!(and_or_not().to_bit_string(), "01010001");
        assert_eq!(or_and_not().to_bit_string(), "01110101");
    }

    #[test]
    fn dual_examples() {
        assert_eq!(and().dual(), or());
        assert_eq!(d().dual(), d());
        assert_eq!(one().dual(), zero());
    }

    #[test]
    fn predicate_examples() {
        assert!(and().is_monotone());
        assert!(!xor().is_monotone());
        assert!(d().is_self_dual());
        assert!(xnor().is_affine());
        assert!(!and().is_affine());
        assert!(and_or_not().preserves_one());
        assert!(and_or_not().preserves_zero());
        assert!(!d().preserves_zero());
    }

    #[test]
    fn separating_examples() {
        assert_eq!(and().separating_index(true), Some(1));
        assert_eq!(or().separating_index(true), None);
        assert_eq!(and_or_not().separating_index(true), Some(1));
        assert_eq!(and().separating_index(false), None);
        assert_eq!(or().separating_index(false), Some(1));
        assert_eq!(f(2, "0011").separating_index(true), Some(2));
    }

    #[test]
    fn separating_degenerate_constants() {
        assert_eq!(
            BoolFun::constant(2, false).unwrap().separating_index(true),
            Some(1)
        );
        assert_eq!(
            BoolFun::constant(3, true).unwrap().separating_index(false),
            Some(1)
        );
        assert_eq!(zero().separating_index(true), None);
        assert_eq!(one().separating_index(false), None);
    }

    #[test]
    fn projections() {
        assert_eq!(BoolFun::projection(1, 1).unwrap().to_bit_string(), "01");
        assert_eq!(BoolFun::projection(2, 2).unwrap().to_bit_string(), "0011");
        assert_eq!(
            BoolFun::projection(3, 1).unwrap().to_bit_string(),
            "01010101"
        );
        assert_eq!(
            BoolFun::projection(2, 3),
            Err(BoolFunError::ProjectionIndex { arity: 2, index: 3 })
        );
        assert!(BoolFun::projection(2, 0).is_err());
    }

    #[test]
    fn hex_output() {
        assert_eq!(and().to_hex(), "8");
        assert_eq!(d().to_hex(), "2b");
        assert_eq!(one().to_hex(), "1");
        let big = BoolFun::projection(8, 8).unwrap();
        assert_eq!(
            big.to_hex(),
            format!("{}{}", "f".repeat(32), "0".repeat(32))
        );
        assert_eq!(BoolFun::from_hex(8, &big.to_hex()).unwrap(), big);
    }

    #[test]
    fn literal_errors() {
        assert!(parse_literal("AND 2 001", 6).is_err());
        assert!(parse_literal("AND 2 0021", 6).is_err());
        assert!(parse_literal("AND x 0001", 6).is_err());
        assert!(parse_literal("9AND 2 0001", 6).is_err());
        assert!(parse_literal("AND 2", 6).is_err());
        assert!(parse_literal("BIG 7 0", 6).is_err());
    }

    #[test]
    fn ordering_by_arity_then_value() {
        let mut v = vec![or(), zero(), and(), not(), one()];
        v.sort();
        assert_eq!(v, vec![zero(), one(), not(), and(), or()]);
    }

    #[test]
    fn wide_tables() {
        let p = BoolFun::projection(10, 9).unwrap();
        assert_eq!(p.count_ones(), 512);
        assert!(p.is_monotone() && p.is_affine() && p.is_self_dual());
        assert_eq!(p.dual(), p);
        assert_eq!(p.separating_index(true), Some(9));
    }
}
