//! Braid words in the Artin generators and their textual form.
//!
//! Grammar (whitespace or `.` separated):
//!
//! ```text
//! word := (term (sep term)*)?
//! term := gen exp?
//! gen  := "s" INT | "D" | "D[" INT "," INT "]"
//! exp  := "^" "-"? INT
//! ```
//!
//! `D` is the Garside element, `D[i,j]` the positive half twist of strands
//! `i..=j`. An exponent `k` repeats the term `k` times; a negative exponent
//! repeats its inverse.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One Artin generator `σ_index^{±1}` (1-based index).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub index: usize,
    pub positive: bool,
}

impl Letter {
    pub fn pos(index: usize) -> Self {
        Letter { index, positive: true }
    }

    pub fn neg(index: usize) -> Self {
        Letter { index, positive: false }
    }

    pub fn inverse(self) -> Self {
        Letter { index: self.index, positive: !self.positive }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "s{}", self.index)
        } else {
            write!(f, "s{}^-1", self.index)
        }
    }
}

/// A word over `strands` strands. The strand count is always explicit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<Letter>,
}

impl BraidWord {
    pub fn identity(strands: usize) -> Self {
        BraidWord { strands, letters: Vec::new() }
    }

    pub fn new(strands: usize, letters: Vec<Letter>) -> Result<Self> {
        if strands == 0 {
            return Err(Error::BadStrandCount(strands));
        }
        for l in &letters {
            if l.index == 0 || l.index >= strands {
                return Err(Error::IndexOutOfRange { index: l.index, strands });
            }
        }
        Ok(BraidWord { strands, letters })
    }

    /// Builds a word from signed indices, e.g. `[1, -2]` for `σ1 σ2^-1`.
    pub fn from_signed(strands: usize, signed: &[i32]) -> Result<Self> {
        let letters = signed
            .iter()
            .map(|&s| Letter { index: s.unsigned_abs() as usize, positive: s > 0 })
            .collect();
        Self::new(strands, letters)
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_positive(&self) -> bool {
        self.letters.iter().all(|l| l.positive)
    }

    pub fn is_negative(&self) -> bool {
        self.letters.iter().all(|l| !l.positive)
    }

    pub fn push(&mut self, letter: Letter) {
        assert!(letter.index >= 1 && letter.index < self.strands, "letter out of range");
        self.letters.push(letter);
    }

    /// Concatenation `self · other`.
    pub fn concat(&self, other: &BraidWord) -> BraidWord {
        assert_eq!(self.strands, other.strands, "strand count mismatch");
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        BraidWord { strands: self.strands, letters }
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord {
            strands: self.strands,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// `Δ = σ1 (σ2 σ1) … (σ_{n-1} … σ1)`.
    pub fn delta(strands: usize) -> BraidWord {
        Self::half_twist(strands, 1, strands)
    }

    /// Positive half twist `Δ_{i,j}` of strands `i..=j` (1-based).
    pub fn half_twist(strands: usize, i: usize, j: usize) -> BraidWord {
        let mut letters = Vec::new();
        for top in (i + 1)..=j {
            for k in (i..top).rev() {
                letters.push(Letter::pos(k));
            }
        }
        BraidWord { strands, letters }
    }

    pub fn delta_power(strands: usize, k: i64) -> BraidWord {
        let d = if k >= 0 { Self::delta(strands) } else { Self::delta(strands).inverse() };
        let mut letters = Vec::new();
        for _ in 0..k.unsigned_abs() {
            letters.extend_from_slice(&d.letters);
        }
        BraidWord { strands, letters }
    }

    /// Cancels adjacent `σ_i σ_i^-1` and `σ_i^-1 σ_i` pairs until none remain.
    pub fn free_reduce(&self) -> BraidWord {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        BraidWord { strands: self.strands, letters: out }
    }

    /// Flips every sign, keeping indices and order.
    pub fn mirror(&self) -> BraidWord {
        BraidWord {
            strands: self.strands,
            letters: self.letters.iter().map(|l| l.inverse()).collect(),
        }
    }

    /// Index flip `i ↦ n - i` (conjugation by Δ).
    pub fn flip(&self) -> BraidWord {
        BraidWord {
            strands: self.strands,
            letters: self
                .letters
                .iter()
                .map(|l| Letter { index: self.strands - l.index, positive: l.positive })
                .collect(),
        }
    }

    /// Re-indexes this word as a word on `strands` strands with every index
    /// increased by `offset`.
    pub fn embed(&self, strands: usize, offset: usize) -> BraidWord {
        assert!(self.strands + offset <= strands, "embedding does not fit");
        BraidWord {
            strands,
            letters: self
                .letters
                .iter()
                .map(|l| Letter { index: l.index + offset, positive: l.positive })
                .collect(),
        }
    }

    /// Number of letters with the given index.
    pub fn count_index(&self, index: usize) -> usize {
        self.letters.iter().filter(|l| l.index == index).count()
    }

    pub fn min_index(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.index).min()
    }

    pub fn parse(text: &str, strands: usize) -> Result<BraidWord> {
        Parser { src: text.as_bytes(), pos: 0, strands }.word()
    }

    pub fn random(strands: usize, length: usize, seed: u64) -> BraidWord {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::random_with(strands, length, &mut rng)
    }

    /// Letters drawn uniformly from the `2(n-1)` signed generators.
    pub fn random_with<R: Rng + ?Sized>(strands: usize, length: usize, rng: &mut R) -> BraidWord {
        assert!(strands >= 2, "random words need at least two strands");
        let letters = (0..length)
            .map(|_| {
                let g = rng.gen_range(0..2 * (strands - 1));
                Letter { index: g / 2 + 1, positive: g % 2 == 0 }
            })
            .collect();
        BraidWord { strands, letters }
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, l) in self.letters.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    strands: usize,
}

impl Parser<'_> {
    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Syntax { pos: self.pos, msg: msg.to_string() })
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_sep(&mut self) -> bool {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace() || c == b'.') {
            self.pos += 1;
        }
        self.pos > start
    }

    fn int(&mut self) -> Result<usize> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("digits are ascii");
        s.parse().or_else(|_| self.err("integer too large"))
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(&format!("expected '{}'", c as char))
        }
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if index == 0 || index >= self.strands {
            return Err(Error::IndexOutOfRange { index, strands: self.strands });
        }
        Ok(())
    }

    fn word(mut self) -> Result<BraidWord> {
        if self.strands < 2 {
            return Err(Error::BadStrandCount(self.strands));
        }
        let mut letters = Vec::new();
        self.skip_sep();
        while self.peek().is_some() {
            let term = self.term()?;
            letters.extend(term);
            if self.peek().is_some() && !self.skip_sep() {
                return self.err("expected separator");
            }
        }
        Ok(BraidWord { strands: self.strands, letters })
    }

    fn term(&mut self) -> Result<Vec<Letter>> {
        let base: Vec<Letter> = match self.peek() {
            Some(b's') => {
                self.pos += 1;
                let start = self.pos;
                let i = self.int()?;
                if i == 0 || i >= self.strands {
                    self.pos = start;
                    self.check_index(i)?;
                }
                vec![Letter::pos(i)]
            }
            Some(b'D') => {
                self.pos += 1;
                if self.peek() == Some(b'[') {
                    self.pos += 1;
                    let i = self.int()?;
                    self.expect(b',')?;
                    let j = self.int()?;
                    self.expect(b']')?;
                    if i == 0 || j > self.strands || i >= j {
                        return self.err("half twist needs 1 <= i < j <= n");
                    }
                    BraidWord::half_twist(self.strands, i, j).letters
                } else {
                    BraidWord::delta(self.strands).letters
                }
            }
            _ => return self.err("expected 's' or 'D'"),
        };
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let negative = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let k = self.int()?;
        let unit = if negative {
            base.iter().rev().map(|l| l.inverse()).collect::<Vec<_>>()
        } else {
            base
        };
        Ok(unit.iter().copied().cycle().take(unit.len() * k).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn signed(w: &BraidWord) -> Vec<i32> {
        w.letters()
            .iter()
            .map(|l| if l.positive { l.index as i32 } else { -(l.index as i32) })
            .collect()
    }

    #[test]
    fn parse_examples() {
        assert!(BraidWord::parse("", 3).unwrap().is_empty());
        let w = BraidWord::parse("s1 s2^-1 s1 s2^-1", 3).unwrap();
        assert_eq!(signed(&w), vec![1, -2, 1, -2]);
        assert_eq!(signed(&BraidWord::parse("D", 3).unwrap()), vec![1, 2, 1]);
        assert_eq!(signed(&BraidWord::parse("D", 4).unwrap()), vec![1, 2, 1, 3, 2, 1]);
        assert_eq!(signed(&BraidWord::parse("D[2,3]", 4).unwrap()), vec![2]);
        assert_eq!(signed(&BraidWord::parse("s1.s2^3", 3).unwrap()), vec![1, 2, 2, 2]);
        assert_eq!(signed(&BraidWord::parse("D^-1", 3).unwrap()), vec![-1, -2, -1]);
        assert_eq!(signed(&BraidWord::parse("s2^0", 3).unwrap()), Vec::<i32>::new());
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(BraidWord::parse("s3", 3), Err(Error::IndexOutOfRange { index: 3, .. })));
        assert!(matches!(BraidWord::parse("s0", 3), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(BraidWord::parse("s1 x", 3), Err(Error::Syntax { pos: 3, .. })));
        assert!(matches!(BraidWord::parse("s1s2", 3), Err(Error::Syntax { .. })));
        assert!(matches!(BraidWord::parse("s1^", 3), Err(Error::Syntax { .. })));
        assert!(matches!(BraidWord::parse("D[2,2]", 3), Err(Error::Syntax { .. })));
    }

    #[test]
    fn print_examples() {
        assert_eq!(BraidWord::identity(3).to_string(), "");
        assert_eq!(BraidWord::from_signed(3, &[1, -2]).unwrap().to_string(), "s1 s2^-1");
        assert_eq!(BraidWord::delta(3).to_string(), "s1 s2 s1");
    }

    #[test]
    fn free_reduce_examples() {
        let r = |s: &str| BraidWord::parse(s, 3).unwrap().free_reduce().to_string();
        assert_eq!(r("s1 s1^-1"), "");
        assert_eq!(r("s1 s2 s2^-1 s1"), "s1 s1");
        assert_eq!(r("s1 s2 s1"), "s1 s2 s1");
        assert_eq!(r("s1 s2 s2^-1 s1^-1 s2"), "s2");
    }

    #[test]
    fn mirror_examples() {
        let w = BraidWord::parse("s1 s2^-1", 3).unwrap();
        assert_eq!(w.mirror().to_string(), "s1^-1 s2");
        assert!(BraidWord::identity(3).mirror().is_empty());
    }

    #[test]
    fn random_examples() {
        assert!(BraidWord::random(3, 0, 9).is_empty());
        assert_eq!(BraidWord::random(3, 5, 42), BraidWord::random(3, 5, 42));
        let w = BraidWord::random(4, 10, 7);
        assert_eq!(w.len(), 10);
        assert!(w.letters().iter().all(|l| (1..=3).contains(&l.index)));
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        fn word() -> impl Strategy<Value = BraidWord> {
            (2usize..7, proptest::collection::vec((0usize..100, any::<bool>()), 0..30)).prop_map(
                |(n, raw)| {
                    let letters =
                        raw.into_iter().map(|(i, p)| Letter { index: i % (n - 1) + 1, positive: p }).collect();
                    BraidWord::new(n, letters).unwrap()
                },
            )
        }

        proptest! {
            #[test]
            fn print_parse_round_trip(w in word()) {
                prop_assert_eq!(BraidWord::parse(&w.to_string(), w.strands()).unwrap(), w);
            }

            #[test]
            fn free_reduce_idempotent_and_shrinking(w in word()) {
                let r = w.free_reduce();
                prop_assert!(r.len() <= w.len());
                prop_assert_eq!(r.free_reduce(), r);
            }

            #[test]
            fn mirror_involution_commutes_with_reduce(w in word()) {
                prop_assert_eq!(w.mirror().mirror(), w.clone());
                prop_assert_eq!(w.mirror().free_reduce(), w.free_reduce().mirror());
            }
        }
    }
}
