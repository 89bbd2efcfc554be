//! Dense bitset over small non-negative integers.

use std::cmp::Ordering;
use std::fmt;

const WORD: u32 = u64::BITS;

/// A finite set of non-negative integers stored as a packed membership table.
///
/// Trailing zero words are never kept, so two sets with the same members
/// compare equal regardless of the capacity they were built with.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct IntSet {
    words: Vec<u64>,
}

impl IntSet {
    pub fn new() -> Self {
        Self { words: Vec::new() }
    }

    /// Empty set with room for members `0..=bound` without reallocating.
    pub fn with_bound(bound: u32) -> Self {
        Self {
            words: Vec::with_capacity((bound / WORD + 1) as usize),
        }
    }

    /// The interval `[lo, hi]`; empty when `hi < lo`.
    pub fn interval(lo: u32, hi: u32) -> Self {
        let mut s = Self::with_bound(hi);
        for x in lo..=hi {
            s.insert(x);
        }
        s
    }

    pub fn from_bits(bits: u128) -> Self {
        let mut s = Self {
            words: vec![bits as u64, (bits >> 64) as u64],
        };
        s.trim();
        s
    }

    #[inline]
    pub fn contains(&self, x: u32) -> bool {
        self.words
            .get((x / WORD) as usize)
            .is_some_and(|w| w >> (x % WORD) & 1 == 1)
    }

    /// Returns `true` when `x` was not already present.
    pub fn insert(&mut self, x: u32) -> bool {
        let idx = (x / WORD) as usize;
        if idx >= self.words.len() {
            self.words.resize(idx + 1, 0);
        }
        let mask = 1u64 << (x % WORD);
        let fresh = self.words[idx] & mask == 0;
        self.words[idx] |= mask;
        fresh
    }

    /// Returns `true` when `x` was present.
    pub fn remove(&mut self, x: u32) -> bool {
        let idx = (x / WORD) as usize;
        let Some(w) = self.words.get_mut(idx) else {
            return false;
        };
        let mask = 1u64 << (x % WORD);
        let present = *w & mask != 0;
        *w &= !mask;
        self.trim();
        present
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn last(&self) -> Option<u32> {
        let last = self.words.last()?;
        let i = self.words.len() as u32 - 1;
        Some(i * WORD + (WORD - 1 - last.leading_zeros()))
    }

    pub fn first(&self) -> Option<u32> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i as u32 * WORD + w.trailing_zeros())
    }

    /// `max` with the convention that the empty set has maximum 0.
    pub fn max_or_zero(&self) -> u32 {
        self.last().unwrap_or(0)
    }

    pub fn is_subset(&self, other: &IntSet) -> bool {
        self.words.len() <= other.words.len()
            && self
                .words
                .iter()
                .zip(&other.words)
                .all(|(a, b)| a & !b == 0)
    }

    /// Every member shifted up by `offset`.
    pub fn shifted(&self, offset: u32) -> IntSet {
        let mut out = IntSet::with_bound(self.last().unwrap_or(0) + offset);
        for x in self.iter() {
            out.insert(x + offset);
        }
        out
    }

    /// Members in ascending order.
    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            idx: 0,
            cur: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.iter().collect()
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }
}

impl FromIterator<u32> for IntSet {
    fn from_iter<I: IntoIterator<Item = u32>>(iter: I) -> Self {
        let mut s = IntSet::new();
        for x in iter {
            s.insert(x);
        }
        s
    }
}

impl<'a> IntoIterator for &'a IntSet {
    type Item = u32;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

/// Lexicographic order on the ascending member lists.
impl Ord for IntSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for IntSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for IntSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl Iterator for Iter<'_> {
    type Item = u32;

    #[inline]
    fn next(&mut self) -> Option<u32> {
        loop {
            if self.cur != 0 {
                let bit = self.cur.trailing_zeros();
                self.cur &= self.cur - 1;
                return Some(self.idx as u32 * WORD + bit);
            }
            self.idx += 1;
            self.cur = *self.words.get(self.idx)?;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_remove_and_trim() {
        let mut s = IntSet::new();
        assert!(s.insert(130));
        assert!(!s.insert(130));
        s.insert(3);
        assert_eq!(s.last(), Some(130));
        assert!(s.remove(130));
        assert_eq!(s, [3].into_iter().collect());
        assert_eq!(s.last(), Some(3));
        assert_eq!(s.first(), Some(3));
    }

    #[test]
    fn order_is_lexicographic() {
        let a: IntSet = [1, 2, 4].into_iter().collect();
        let b: IntSet = [1, 3].into_iter().collect();
        let c: IntSet = [1, 2].into_iter().collect();
        assert!(a < b);
        assert!(c < a);
    }

    #[test]
    fn subset_and_interval() {
        let i = IntSet::interval(1, 70);
        assert_eq!(i.len(), 70);
        let s: IntSet = [2, 69].into_iter().collect();
        assert!(s.is_subset(&i));
        assert!(!i.is_subset(&s));
        assert!(IntSet::interval(1, 0).is_empty());
        assert_eq!(IntSet::new().max_or_zero(), 0);
    }

    #[test]
    fn from_bits_matches_members() {
        let bits = (1u128 << 1) | (1u128 << 100);
        assert_eq!(IntSet::from_bits(bits).to_vec(), vec![1, 100]);
    }
}
