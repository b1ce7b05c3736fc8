//! Words in the free group on generators `t_1, ..., t_g`, written `a, b, c, ...`
//! with upper case for inverses, and their conjugacy classes up to inversion.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ParseError;

/// One letter `t_gen^{+-1}`; `gen` is 1-based.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: usize, inverse: bool) -> Self {
        assert!(gen >= 1, "generators are 1-based");
        Self { gen, inverse }
    }

    pub fn inv(self) -> Self {
        Self {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }

    /// `+1` or `-1`.
    pub fn exponent(self) -> i32 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn to_char(self) -> char {
        let base = if self.inverse { b'A' } else { b'a' };
        (base + (self.gen - 1) as u8) as char
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'a'..='z' => Some(Self::new(c as usize - 'a' as usize + 1, false)),
            'A'..='Z' => Some(Self::new(c as usize - 'A' as usize + 1, true)),
            _ => None,
        }
    }
}

/// Freely reduce a letter sequence.
pub fn free_reduce<I: IntoIterator<Item = Letter>>(letters: I) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::new();
    for l in letters {
        if out.last() == Some(&l.inv()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Freely reduced word.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GroupWord {
    letters: Vec<Letter>,
}

impl GroupWord {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn new<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        Self {
            letters: free_reduce(letters),
        }
    }

    pub fn generator(gen: usize) -> Self {
        Self::new([Letter::new(gen, false)])
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

    pub fn inverse(&self) -> Self {
        Self {
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
        }
    }

    pub fn concat(&self, other: &GroupWord) -> Self {
        Self::new(self.letters.iter().chain(other.letters.iter()).copied())
    }

    pub fn max_generator(&self) -> usize {
        self.letters.iter().map(|l| l.gen).max().unwrap_or(0)
    }

    /// Positions of `t_gen^{+-1}` in order.
    pub fn occurrences(&self, gen: usize) -> Vec<usize> {
        self.letters
            .iter()
            .enumerate()
            .filter(|(_, l)| l.gen == gen)
            .map(|(p, _)| p)
            .collect()
    }

    /// Strip matching first/last letter pairs: the cyclically reduced core.
    pub fn cyclic_core(&self) -> Self {
        let mut s = 0;
        let mut e = self.letters.len();
        while e > s + 1 && self.letters[s] == self.letters[e - 1].inv() {
            s += 1;
            e -= 1;
        }
        Self {
            letters: self.letters[s..e].to_vec(),
        }
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R, genus: usize, len: usize) -> Self {
        let mut letters: Vec<Letter> = Vec::with_capacity(len);
        while letters.len() < len {
            let l = Letter::new(rng.gen_range(1..=genus), rng.gen_bool(0.5));
            if letters.last() != Some(&l.inv()) {
                letters.push(l);
            }
        }
        Self { letters }
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupWord(\"{}\")", self)
    }
}

impl FromStr for GroupWord {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        let trimmed = s.trim();
        if trimmed == "1" {
            return Ok(Self::identity());
        }
        trimmed
            .char_indices()
            .map(|(i, c)| {
                Letter::from_char(c)
                    .ok_or_else(|| ParseError::new(format!("invalid letter '{}'", c), i))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Self::new)
    }
}

impl Serialize for GroupWord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GroupWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Conjugacy class of a free-group element up to inversion.
///
/// The canonical word is the lexicographically least rotation of the cyclic
/// core of `w` or of `w^-1`; the trivial class is the empty word.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConjClass {
    canonical: GroupWord,
}

impl ConjClass {
    pub fn of(w: &GroupWord) -> Self {
        let core = w.cyclic_core();
        let n = core.len();
        if n == 0 {
            return Self {
                canonical: GroupWord::identity(),
            };
        }
        let inv = core.inverse();
        let mut best: Option<Vec<Letter>> = None;
        for base in [&core, &inv] {
            for r in 0..n {
                let rot: Vec<Letter> = base.letters[r..]
                    .iter()
                    .chain(base.letters[..r].iter())
                    .copied()
                    .collect();
                if best.as_ref().is_none_or(|b| rot < *b) {
                    best = Some(rot);
                }
            }
        }
        Self {
            canonical: GroupWord {
                letters: best.unwrap_or_default(),
            },
        }
    }

    pub fn word(&self) -> &GroupWord {
        &self.canonical
    }

    pub fn is_trivial(&self) -> bool {
        self.canonical.is_empty()
    }
}

impl fmt::Display for ConjClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.canonical)
    }
}

impl fmt::Debug for ConjClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ConjClass(\"{}\")", self.canonical)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> GroupWord {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_reduce() {
        assert_eq!(w("abAB").to_string(), "abAB");
        assert_eq!(w("aA"), GroupWord::identity());
        assert_eq!(w("abBA").len(), 0);
        assert_eq!(w("aabBc").to_string(), "aac");
        assert_eq!(w("1"), GroupWord::identity());
        assert!("ab3".parse::<GroupWord>().is_err());
    }

    #[test]
    fn conj_class_canonical() {
        assert_eq!(ConjClass::of(&w("ba")), ConjClass::of(&w("ab")));
        assert_eq!(ConjClass::of(&w("BA")), ConjClass::of(&w("ab")));
        assert_eq!(ConjClass::of(&w("cabC")), ConjClass::of(&w("ab")));
        assert!(ConjClass::of(&w("abAB")) != ConjClass::of(&w("ab")));
        assert!(ConjClass::of(&w("aBA")).word() == &w("B") || ConjClass::of(&w("aBA")).word() == &w("b"));
        assert!(ConjClass::of(&w("")).is_trivial());
        assert!(ConjClass::of(&w("abAB")) != ConjClass::of(&w("aB")));
    }

    #[test]
    fn occurrences_listed_in_order() {
        assert_eq!(w("abAcA").occurrences(1), vec![0, 2, 4]);
        assert_eq!(w("bcb").occurrences(1), Vec::<usize>::new());
    }

    fn arb_word() -> impl Strategy<Value = GroupWord> {
        prop::collection::vec((1usize..=3, any::<bool>()), 0..10)
            .prop_map(|v| GroupWord::new(v.into_iter().map(|(g, i)| Letter::new(g, i))))
    }

    proptest! {
        #[test]
        fn conj_class_invariant_under_rotation_and_inversion(word in arb_word(), r in 0usize..10) {
            let n = word.len().max(1);
            let r = r % n;
            let rotated = GroupWord::new(
                word.letters()[r.min(word.len())..].iter().chain(word.letters()[..r.min(word.len())].iter()).copied(),
            );
            let c = ConjClass::of(&word);
            prop_assert_eq!(&ConjClass::of(&rotated), &c);
            prop_assert_eq!(&ConjClass::of(&word.inverse()), &c);
            prop_assert_eq!(ConjClass::of(c.word()), c.clone());
        }

        #[test]
        fn words_stay_reduced(a in arb_word(), b in arb_word()) {
            let ab = a.concat(&b);
            for pair in ab.letters().windows(2) {
                prop_assert!(pair[0] != pair[1].inv());
            }
            prop_assert_eq!(ab.concat(&b.inverse()), a);
        }
    }
}
