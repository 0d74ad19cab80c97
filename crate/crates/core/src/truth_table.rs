//! Bit-packed truth tables, variable blocks and restrictions.
//!
//! An input `X = (x1, ..., xn)` is identified with the code
//! `j = x1 + 2*x2 + ... + 2^(n-1)*xn`, so `x1` is the least significant bit
//! and bit `i - 1` of a mask refers to variable `xi`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};

/// Largest supported variable count (a 16 MiB packed table).
pub const MAX_VARS: usize = 24;

/// A total Boolean function on `n` variables, stored 64 outputs per word.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    n: usize,
    words: Vec<u64>,
}

fn word_count(n: usize) -> usize {
    if n >= 6 {
        1 << (n - 6)
    } else {
        1
    }
}

fn tail_mask(n: usize) -> u64 {
    if n >= 6 {
        u64::MAX
    } else {
        (1u64 << (1 << n)) - 1
    }
}

impl TruthTable {
    fn check_n(n: usize) -> Result<()> {
        if n > MAX_VARS {
            Err(Error::TooManyVariables(n))
        } else {
            Ok(())
        }
    }

    /// Constant function on `n` variables. `n` may be zero here, which is
    /// how restrictions represent a fully fixed function internally.
    pub fn constant(n: usize, value: bool) -> Result<Self> {
        Self::check_n(n)?;
        let fill = if value { tail_mask(n) } else { 0 };
        Ok(Self {
            n,
            words: vec![fill; word_count(n)],
        })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(u32) -> bool) -> Result<Self> {
        Self::check_n(n)?;
        let mut words = vec![0u64; word_count(n)];
        for x in 0..(1u32 << n) {
            if f(x) {
                words[(x >> 6) as usize] |= 1 << (x & 63);
            }
        }
        Ok(Self { n, words })
    }

    /// Builds a table from its packed words. Bits beyond `2^n` must be zero.
    pub fn from_words(n: usize, words: Vec<u64>) -> Result<Self> {
        Self::check_n(n)?;
        if words.len() != word_count(n) {
            return Err(Error::InvalidLength(words.len() * 64));
        }
        if n < 6 && words[0] & !tail_mask(n) != 0 {
            return Err(Error::InvalidLength(1 << n));
        }
        Ok(Self { n, words })
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        Self::check_n(n)?;
        let mut words: Vec<u64> = (0..word_count(n)).map(|_| rng.gen()).collect();
        words[0] &= tail_mask(n);
        Ok(Self { n, words })
    }

    /// The `index`-th function on `n` variables when functions are numbered
    /// by the integer `sum f(j) 2^j`. Only meaningful for `n <= 6`.
    pub fn nth(n: usize, index: u64) -> Result<Self> {
        if n > 6 {
            return Err(Error::TooLarge {
                what: "function numbering",
                n,
                max: 6,
            });
        }
        Self::from_words(n, vec![index & tail_mask(n)])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of rows, `N = 2^n`.
    pub fn len(&self) -> usize {
        1 << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Unchecked lookup; `x` must be below `2^n`.
    #[inline]
    pub fn get(&self, x: u32) -> bool {
        debug_assert!((x as usize) < self.len());
        (self.words[(x >> 6) as usize] >> (x & 63)) & 1 == 1
    }

    pub fn evaluate(&self, x: u64) -> Result<bool> {
        if x >= self.len() as u64 {
            return Err(Error::InputOutOfRange { x, n: self.n });
        }
        Ok(self.get(x as u32))
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// `Some(v)` when the function is the constant `v`.
    pub fn constant_value(&self) -> Option<bool> {
        match self.count_ones() {
            0 => Some(false),
            c if c == self.len() as u64 => Some(true),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.constant_value().is_some()
    }

    /// Output negation.
    pub fn complement(&self) -> Self {
        let tail = tail_mask(self.n);
        Self {
            n: self.n,
            words: self.words.iter().map(|w| !w & tail).collect(),
        }
    }

    /// `g(x) = f(x XOR mask)`.
    pub fn flip_inputs(&self, mask: u32) -> Self {
        Self::from_fn(self.n, |x| self.get(x ^ mask)).expect("same n")
    }

    /// `g(x) = f(y)` where bit `perm[i]` of `y` is bit `i` of `x`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n);
        Self::from_fn(self.n, |x| {
            let mut y = 0u32;
            for (i, &p) in perm.iter().enumerate() {
                y |= ((x >> i) & 1) << p;
            }
            self.get(y)
        })
        .expect("same n")
    }

    pub fn full_mask(&self) -> u32 {
        full_mask(self.n)
    }

    /// Whether flipping variable `var` (0-based) ever changes the output.
    pub fn depends_on(&self, var: usize) -> bool {
        let bit = 1u32 << var;
        (0..self.len() as u32)
            .filter(|x| x & bit == 0)
            .any(|x| self.get(x) != self.get(x | bit))
    }

    /// Mask of variables the function does not depend on.
    pub fn dummy_mask(&self) -> u32 {
        (0..self.n)
            .filter(|&i| !self.depends_on(i))
            .fold(0, |m, i| m | (1 << i))
    }

    /// Subfunction on the free variables of `r`, renumbered in increasing
    /// original index order.
    pub fn restrict(&self, r: &Restriction) -> Result<Self> {
        let free = self.full_mask() & !r.fixed_mask();
        if free == 0 {
            return Err(Error::NoFreeVariables);
        }
        let k = free.count_ones() as usize;
        let base = r.fixed_values() & self.full_mask();
        let mut words = vec![0u64; word_count(k)];
        // Submasks of `free` in increasing order correspond to increasing
        // codes of the restricted function.
        let mut sub = 0u32;
        for y in 0..(1u32 << k) {
            if self.get(base | sub) {
                words[(y >> 6) as usize] |= 1 << (y & 63);
            }
            sub = (sub | !free).wrapping_add(1) & free;
        }
        Ok(Self { n: k, words })
    }

    /// Value of `f` under a restriction that fixes every variable.
    pub fn restricted_constant(&self, r: &Restriction) -> Result<bool> {
        if r.fixed_mask() & self.full_mask() != self.full_mask() {
            return Err(Error::Precondition(
                "restriction leaves variables free".into(),
            ));
        }
        Ok(self.get(r.fixed_values() & self.full_mask()))
    }

    /// Mirrors `restrict` for a restriction given on the full mask but
    /// without requiring a free variable: zero free variables yields a
    /// 0-variable table.
    pub(crate) fn subfunction(&self, fixed_mask: u32, fixed_values: u32) -> Self {
        let free = self.full_mask() & !fixed_mask;
        let k = free.count_ones() as usize;
        let mut words = vec![0u64; word_count(k)];
        let mut sub = 0u32;
        for y in 0..(1u32 << k) {
            if self.get(fixed_values | sub) {
                words[(y >> 6) as usize] |= 1 << (y & 63);
            }
            sub = (sub | !free).wrapping_add(1) & free;
        }
        Self { n: k, words }
    }

    /// Character `j` is `f(j)`.
    pub fn to_binary_string(&self) -> String {
        (0..self.len() as u32)
            .map(|x| if self.get(x) { '1' } else { '0' })
            .collect()
    }

    /// `0x` followed by `N/4` hex digits of the integer `sum f(j) 2^j`,
    /// most significant digit first. Needs `n >= 2`.
    pub fn to_hex_string(&self) -> Option<String> {
        if self.n < 2 {
            return None;
        }
        let digits = self.len() / 4;
        let mut s = String::with_capacity(digits + 2);
        s.push_str("0x");
        for d in (0..digits).rev() {
            let w = self.words[d / 16];
            let nib = (w >> ((d % 16) * 4)) & 0xf;
            s.push(char::from_digit(nib as u32, 16).unwrap());
        }
        Some(s)
    }

    /// The key used in reports: hex for `n >= 2`, binary for `n = 1`.
    pub fn canonical_key(&self) -> String {
        self.to_hex_string()
            .unwrap_or_else(|| self.to_binary_string())
    }

    fn parse_binary(s: &str) -> Result<Self> {
        let len = s.len();
        let n = length_to_vars(len)?;
        let mut words = vec![0u64; word_count(n)];
        for (pos, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => words[pos / 64] |= 1 << (pos % 64),
                _ => return Err(Error::InvalidChar { ch, pos }),
            }
        }
        Ok(Self { n, words })
    }

    fn parse_hex(digits: &str) -> Result<Self> {
        let n = length_to_vars(digits.len() * 4)?;
        let count = digits.len();
        let mut words = vec![0u64; word_count(n)];
        for (pos, ch) in digits.chars().enumerate() {
            let nib = ch
                .to_digit(16)
                .ok_or(Error::InvalidChar { ch, pos: pos + 2 })? as u64;
            let d = count - 1 - pos;
            words[d / 16] |= nib << ((d % 16) * 4);
        }
        Ok(Self { n, words })
    }
}

fn length_to_vars(len: usize) -> Result<usize> {
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::InvalidLength(len));
    }
    let n = len.trailing_zeros() as usize;
    if n > MAX_VARS {
        return Err(Error::TooManyVariables(n));
    }
    Ok(n)
}

pub fn full_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// Parses either a binary string of length `2^n` or a `0x`-prefixed hex
/// string (see [`TruthTable::to_hex_string`]).
pub fn parse_truth_table(text: &str) -> Result<TruthTable> {
    let text = text.trim();
    match text.strip_prefix("0x").or_else(|| text.strip_prefix("0X")) {
        Some(hex) => TruthTable::parse_hex(hex),
        None => TruthTable::parse_binary(text),
    }
}

impl FromStr for TruthTable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_truth_table(s)
    }
}

impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_key())
    }
}

impl fmt::Debug for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n <= 6 {
            write!(f, "TruthTable(n={}, {})", self.n, self.to_binary_string())
        } else {
            write!(f, "TruthTable(n={}, {})", self.n, self.canonical_key())
        }
    }
}

/// A set of variables as a mask; bit `i - 1` stands for `xi`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Block(pub u32);

pub type VariableSet = Block;

impl Block {
    pub fn from_vars(vars: &[usize]) -> Self {
        Block(vars.iter().fold(0, |m, &v| m | (1 << v)))
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset_of(self, other: Block) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Block) -> bool {
        self.0 & other.0 == 0
    }

    /// 0-based variable indices in increasing order.
    pub fn vars(self) -> impl Iterator<Item = usize> {
        let mask = self.0;
        (0..32).filter(move |i| mask >> i & 1 == 1)
    }

    pub fn min_var(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }
}

impl fmt::Debug for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, v) in self.vars().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "x{}", v + 1)?;
        }
        f.write_str("}")
    }
}

/// `X(B)`: the input obtained by flipping the bits of `b`.
#[inline]
pub fn flip_block(x: u32, b: Block) -> u32 {
    x ^ b.0
}

/// A partial assignment: the variables in `fixed_mask` take the
/// corresponding bits of `fixed_values`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Restriction {
    fixed_mask: u32,
    fixed_values: u32,
}

impl Restriction {
    pub fn new(fixed_mask: u32, fixed_values: u32) -> Result<Self> {
        if fixed_values & !fixed_mask != 0 {
            return Err(Error::MalformedRestriction {
                mask: fixed_mask,
                values: fixed_values,
            });
        }
        Ok(Self {
            fixed_mask,
            fixed_values,
        })
    }

    /// Fix a single 0-based variable.
    pub fn single(var: usize, value: bool) -> Self {
        Self {
            fixed_mask: 1 << var,
            fixed_values: (value as u32) << var,
        }
    }

    pub fn fixed_mask(&self) -> u32 {
        self.fixed_mask
    }

    pub fn fixed_values(&self) -> u32 {
        self.fixed_values
    }

    /// Whether input `x` agrees with the restriction.
    pub fn admits(&self, x: u32) -> bool {
        x & self.fixed_mask == self.fixed_values
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tt(s: &str) -> TruthTable {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and2() {
        let and2 = tt("0001");
        assert_eq!(and2.n(), 2);
        assert!(and2.get(3));
        assert!(!and2.get(0) && !and2.get(1) && !and2.get(2));
    }

    #[test]
    fn parse_xor3_marks_odd_codes() {
        let xor3 = tt("01101001");
        let ones: Vec<u32> = (0..8).filter(|&x| xor3.get(x)).collect();
        assert_eq!(ones, vec![1, 2, 4, 7]);
        for x in 0..8u32 {
            assert_eq!(xor3.get(x), x.count_ones() % 2 == 1);
        }
    }

    #[test]
    fn parse_errors() {
        assert_eq!(parse_truth_table("000"), Err(Error::InvalidLength(3)));
        assert_eq!(parse_truth_table("0"), Err(Error::InvalidLength(1)));
        assert_eq!(
            parse_truth_table("0120"),
            Err(Error::InvalidChar { ch: '2', pos: 2 })
        );
        assert!(matches!(
            parse_truth_table("0xg0"),
            Err(Error::InvalidChar { ch: 'g', .. })
        ));
        assert!(matches!(
            parse_truth_table("0x012"),
            Err(Error::InvalidLength(12))
        ));
    }

    #[test]
    fn too_many_variables() {
        let s = "0".repeat(1 << 25);
        assert_eq!(parse_truth_table(&s), Err(Error::TooManyVariables(25)));
    }

    #[test]
    fn hex_orders_high_codes_first() {
        // f(3) = 1 only: the integer is 8.
        assert_eq!(tt("0001").to_hex_string().unwrap(), "0x8");
        assert_eq!(tt("0x8"), tt("0001"));
        // n = 3: codes 4..7 in the first digit.
        let t = tt("10000011");
        assert_eq!(t.to_hex_string().unwrap(), "0xc1");
        assert_eq!(tt("0xC1"), t);
        assert_eq!(tt("01").to_hex_string(), None);
        assert_eq!(tt("01").canonical_key(), "01");
    }

    #[test]
    fn evaluate_examples() {
        let and2 = tt("0001");
        assert_eq!(and2.evaluate(3), Ok(true));
        assert_eq!(and2.evaluate(2), Ok(false));
        assert_eq!(tt("01101001").evaluate(7), Ok(true));
        assert_eq!(and2.evaluate(4), Err(Error::InputOutOfRange { x: 4, n: 2 }));
    }

    #[test]
    fn flip_block_examples() {
        let b13 = Block::from_vars(&[0, 2]);
        assert_eq!(flip_block(0b000, b13), 0b101);
        assert_eq!(flip_block(0b101, b13), 0b000);
        assert_eq!(flip_block(0b11, Block::from_vars(&[1])), 0b01);
    }

    #[test]
    fn restrict_examples() {
        let and2 = tt("0001");
        assert_eq!(
            and2.restrict(&Restriction::single(0, true)).unwrap(),
            tt("01")
        );
        assert_eq!(
            and2.restrict(&Restriction::single(0, false)).unwrap(),
            tt("00")
        );
        // XOR3 with x2 = 1: completions (x1, x3) = 00, 10, 01, 11 give 1, 0, 0, 1.
        let xor3 = tt("01101001");
        assert_eq!(
            xor3.restrict(&Restriction::single(1, true)).unwrap(),
            tt("1001")
        );
    }

    #[test]
    fn restrict_errors() {
        assert!(matches!(
            Restriction::new(0b01, 0b10),
            Err(Error::MalformedRestriction { .. })
        ));
        let and2 = tt("0001");
        let full = Restriction::new(0b11, 0b11).unwrap();
        assert_eq!(and2.restrict(&full), Err(Error::NoFreeVariables));
        assert_eq!(and2.restricted_constant(&full), Ok(true));
    }

    #[test]
    fn restrict_agrees_with_completion_exhaustive() {
        for n in 1..=4usize {
            for idx in 0..(1u64 << (1 << n)) {
                let f = TruthTable::nth(n, idx).unwrap();
                for mask in 0..(1u32 << n) - 1 {
                    let mut vals = 0u32;
                    loop {
                        let r = Restriction::new(mask, vals).unwrap();
                        let g = f.restrict(&r).unwrap();
                        let free = f.full_mask() & !mask;
                        for y in 0..(1u32 << g.n()) {
                            // deposit y into the free positions
                            let mut x = vals;
                            for (k, v) in Block(free).vars().enumerate() {
                                x |= ((y >> k) & 1) << v;
                            }
                            assert_eq!(g.get(y), f.get(x));
                        }
                        if vals == mask {
                            break;
                        }
                        vals = (vals | !mask).wrapping_add(1) & mask;
                    }
                }
            }
        }
    }

    #[test]
    fn constants_and_dummies() {
        let c = TruthTable::constant(3, true).unwrap();
        assert_eq!(c.constant_value(), Some(true));
        assert_eq!(c.dummy_mask(), 0b111);
        let x1 = TruthTable::from_fn(3, |x| x & 1 == 1).unwrap();
        assert_eq!(x1.dummy_mask(), 0b110);
        assert_eq!(x1.complement().complement(), x1);
    }

    #[test]
    fn large_tables_pack_words() {
        let f = TruthTable::from_fn(10, |x| x % 3 == 0).unwrap();
        assert_eq!(f.words().len(), 16);
        let g: TruthTable = f.canonical_key().parse().unwrap();
        assert_eq!(f, g);
        let h: TruthTable = f.to_binary_string().parse().unwrap();
        assert_eq!(f, h);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn table() -> impl Strategy<Value = TruthTable> {
            (1usize..=9, any::<u64>()).prop_map(|(n, seed)| {
                use rand::SeedableRng;
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                TruthTable::random(n, &mut rng).unwrap()
            })
        }

        proptest! {
            #[test]
            fn text_forms_round_trip(f in table()) {
                let bin: TruthTable = f.to_binary_string().parse().unwrap();
                prop_assert_eq!(&bin, &f);
                if let Some(hex) = f.to_hex_string() {
                    let back: TruthTable = hex.parse().unwrap();
                    prop_assert_eq!(back.to_hex_string().unwrap(), hex);
                    prop_assert_eq!(back, f);
                }
            }

            #[test]
            fn flip_block_is_involution(x in any::<u32>(), b in any::<u32>()) {
                prop_assert_eq!(flip_block(flip_block(x, Block(b)), Block(b)), x);
            }
        }
    }
}
