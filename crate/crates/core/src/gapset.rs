//! Gapsets: finite complements of numerical semigroups.
//!
//! A finite set `G` of positive integers is a gapset when every `z ∈ G`
//! and every split `z = x + y` with `x, y ≥ 1` has `x ∈ G` or `y ∈ G`.
//! Its complement `S = ℕ ∖ G` is then a numerical semigroup.

use std::fmt;

use crate::error::{Error, Result};
use crate::intset::IntSet;

/// Decomposition-law check on an arbitrary finite set of integers.
///
/// Returns `false` when the set contains 0.
pub fn is_gapset<I: IntoIterator<Item = u32>>(candidate: I) -> bool {
    let set: IntSet = candidate.into_iter().collect();
    !set.contains(0) && first_violation(&set).is_none()
}

/// Smallest member of `set` having a split into two non-members.
fn first_violation(set: &IntSet) -> Option<u32> {
    set.iter()
        .find(|&z| (1..=z / 2).any(|x| !set.contains(x) && !set.contains(z - x)))
}

/// A validated gapset.
///
/// Equality and ordering follow the ascending gap list (lexicographic),
/// which fixes the canonical enumeration order.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Gapset {
    gaps: IntSet,
}

/// Invariants of a gapset and of its semigroup.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GapsetStats {
    pub multiplicity: u32,
    /// Largest gap, or -1 for the empty gapset.
    pub frobenius: i64,
    pub conductor: u32,
    pub genus: u32,
    /// `ceil(conductor / multiplicity)`.
    pub depth: u32,
    pub embedding_dimension: u32,
}

impl Gapset {
    /// The empty gapset, complement of `ℕ = <1>`.
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new<I: IntoIterator<Item = u32>>(gaps: I) -> Result<Self> {
        let gaps: IntSet = gaps.into_iter().collect();
        Self::from_set(gaps)
    }

    pub fn from_set(gaps: IntSet) -> Result<Self> {
        if gaps.contains(0) {
            return Err(Error::NonPositive);
        }
        if let Some(z) = first_violation(&gaps) {
            return Err(Error::NotAGapset(format_gap_list(&gaps), z));
        }
        Ok(Self { gaps })
    }

    /// Wraps a set already known to satisfy the decomposition law.
    pub(crate) fn from_set_unchecked(gaps: IntSet) -> Self {
        debug_assert!(!gaps.contains(0) && first_violation(&gaps).is_none());
        Self { gaps }
    }

    pub fn as_set(&self) -> &IntSet {
        &self.gaps
    }

    pub fn contains(&self, x: u32) -> bool {
        self.gaps.contains(x)
    }

    pub fn iter(&self) -> crate::intset::Iter<'_> {
        self.gaps.iter()
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.gaps.to_vec()
    }

    pub fn is_empty(&self) -> bool {
        self.gaps.is_empty()
    }

    pub fn genus(&self) -> u32 {
        self.gaps.len() as u32
    }

    pub fn largest(&self) -> Option<u32> {
        self.gaps.last()
    }

    pub fn multiplicity(&self) -> u32 {
        (1..).find(|&x| !self.gaps.contains(x)).unwrap()
    }

    pub fn frobenius(&self) -> i64 {
        self.gaps.last().map_or(-1, i64::from)
    }

    pub fn conductor(&self) -> u32 {
        self.gaps.last().map_or(0, |f| f + 1)
    }

    pub fn depth(&self) -> u32 {
        self.conductor().div_ceil(self.multiplicity())
    }

    pub fn stats(&self) -> GapsetStats {
        GapsetStats {
            multiplicity: self.multiplicity(),
            frobenius: self.frobenius(),
            conductor: self.conductor(),
            genus: self.genus(),
            depth: self.depth(),
            embedding_dimension: self.min_generators().len() as u32,
        }
    }

    /// Pieces `G_i = G ∩ [im+1, (i+1)m-1]` for `i < depth`.
    pub fn canonical_partition(&self) -> Vec<IntSet> {
        let m = self.multiplicity();
        let mut pieces = vec![IntSet::new(); self.depth() as usize];
        for x in self.gaps.iter() {
            pieces[(x / m) as usize].insert(x);
        }
        pieces
    }

    /// `true` when `s` is a positive element of the semigroup that is not a
    /// sum of two positive elements.
    fn is_irreducible(&self, s: u32) -> bool {
        s > 0
            && !self.gaps.contains(s)
            && (1..=s / 2).all(|x| self.gaps.contains(x) || self.gaps.contains(s - x))
    }

    /// Minimal generating set of `ℕ ∖ G`, ascending.
    ///
    /// Every generator is at most `c + m - 1`, except `1` for the empty gapset.
    pub fn min_generators(&self) -> Vec<u32> {
        let m = self.multiplicity();
        let top = (self.conductor() + m).saturating_sub(1).max(m);
        (m..=top).filter(|&s| self.is_irreducible(s)).collect()
    }

    pub(crate) fn with_gap(&self, a: u32) -> Gapset {
        let mut gaps = self.gaps.clone();
        gaps.insert(a);
        Gapset { gaps }
    }

    pub(crate) fn without_max(&self) -> Option<Gapset> {
        let f = self.gaps.last()?;
        let mut gaps = self.gaps.clone();
        gaps.remove(f);
        Some(Gapset { gaps })
    }

    /// `true` when `a` can be added as a new gap, i.e. `a` is not a sum of
    /// two positive non-gaps.
    pub(crate) fn admits(&self, a: u32) -> bool {
        self.is_irreducible(a)
    }
}

impl fmt::Debug for Gapset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gapset{{{}}}", format_gap_list(&self.gaps))
    }
}

/// Comma-separated ascending gap list; the empty gapset formats as "".
impl fmt::Display for Gapset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_gap_list(&self.gaps))
    }
}

impl std::str::FromStr for Gapset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_gap_list(s)
    }
}

fn join(values: impl Iterator<Item = u32>) -> String {
    values.map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

pub(crate) fn format_gap_list(gaps: &IntSet) -> String {
    join(gaps.iter())
}

/// `<a1,a2,...>`
pub fn format_generators(gens: &[u32]) -> String {
    format!("<{}>", join(gens.iter().copied()))
}

/// Parses a strictly ascending comma-separated list of positive integers.
/// `base` is the byte offset of `text` within the caller's input.
fn parse_ascending(text: &str, base: usize) -> Result<Vec<u32>> {
    let mut out = Vec::new();
    if text.trim().is_empty() {
        return Ok(out);
    }
    let mut offset = base;
    for field in text.split(',') {
        let lead = field.len() - field.trim_start().len();
        let token = field.trim();
        let pos = offset + lead;
        let value: u32 = token.parse().map_err(|_| Error::Parse {
            pos,
            msg: format!("expected a positive integer, found {token:?}"),
        })?;
        if value == 0 {
            return Err(Error::Parse {
                pos,
                msg: "0 is not positive".into(),
            });
        }
        if out.last().is_some_and(|&prev| prev >= value) {
            return Err(Error::Parse {
                pos,
                msg: format!("{value} breaks ascending order"),
            });
        }
        out.push(value);
        offset += field.len() + 1;
    }
    Ok(out)
}

/// Parses a gap list such as `1,2,4,5,7,10`; the empty string is `∅`.
pub fn parse_gap_list(text: &str) -> Result<Gapset> {
    Gapset::new(parse_ascending(text, 0)?)
}

/// Parses `<a1,a2,...>` into an ascending list.
pub fn parse_generators(text: &str) -> Result<Vec<u32>> {
    let t = text.trim();
    let start = text.len() - text.trim_start().len();
    let inner = t
        .strip_prefix('<')
        .and_then(|r| r.strip_suffix('>'))
        .ok_or_else(|| Error::Parse {
            pos: start,
            msg: "generator list must be enclosed in <...>".into(),
        })?;
    parse_ascending(inner, start + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(v: &[u32]) -> Gapset {
        Gapset::new(v.iter().copied()).unwrap()
    }

    #[test]
    fn decomposition_law_examples() {
        assert!(is_gapset([1, 2, 4, 5, 7, 10]));
        assert!(!is_gapset([1, 2, 4, 7, 10]));
        assert!(is_gapset([]));
        assert!(is_gapset([1, 2, 3, 5, 7, 9, 11, 13, 15]));
        assert!(!is_gapset([0, 1]));
        assert!(!is_gapset([2]));
    }

    #[test]
    fn new_reports_first_violation() {
        assert_eq!(
            Gapset::new([1, 2, 4, 7, 10]),
            Err(Error::NotAGapset("1,2,4,7,10".into(), 10))
        );
        assert_eq!(Gapset::new([0]), Err(Error::NonPositive));
    }

    #[test]
    fn stats_examples() {
        let s = g(&[1, 2, 4, 5, 7, 10]).stats();
        assert_eq!(
            (
                s.multiplicity,
                s.frobenius,
                s.conductor,
                s.genus,
                s.depth,
                s.embedding_dimension
            ),
            (3, 10, 11, 6, 4, 3)
        );
        let s = Gapset::empty().stats();
        assert_eq!(
            (
                s.multiplicity,
                s.frobenius,
                s.conductor,
                s.genus,
                s.depth,
                s.embedding_dimension
            ),
            (1, -1, 0, 0, 0, 1)
        );
        let s = g(&[1]).stats();
        assert_eq!(
            (
                s.multiplicity,
                s.frobenius,
                s.conductor,
                s.genus,
                s.depth,
                s.embedding_dimension
            ),
            (2, 1, 2, 1, 1, 2)
        );
    }

    #[test]
    fn canonical_partition_examples() {
        let parts: Vec<Vec<u32>> = g(&[1, 2, 4, 5, 7, 10])
            .canonical_partition()
            .iter()
            .map(IntSet::to_vec)
            .collect();
        assert_eq!(parts, vec![vec![1, 2], vec![4, 5], vec![7], vec![10]]);
        assert!(Gapset::empty().canonical_partition().is_empty());
        let parts: Vec<Vec<u32>> = g(&[1, 3, 5, 7, 9, 11])
            .canonical_partition()
            .iter()
            .map(IntSet::to_vec)
            .collect();
        assert_eq!(parts, (0..6).map(|i| vec![2 * i + 1]).collect::<Vec<_>>());
    }

    #[test]
    fn min_generators_examples() {
        assert_eq!(g(&[1, 3, 5, 7, 9, 11]).min_generators(), vec![2, 13]);
        assert_eq!(g(&[1, 2, 4, 5, 7, 10]).min_generators(), vec![3, 8, 13]);
        assert_eq!(Gapset::empty().min_generators(), vec![1]);
        assert_eq!(
            g(&[1, 2, 3, 4, 5, 6]).min_generators(),
            (7..=13).collect::<Vec<_>>()
        );
    }

    #[test]
    fn text_formats() {
        assert_eq!(parse_gap_list("1, 2,4").unwrap(), g(&[1, 2, 4]));
        assert_eq!(parse_gap_list("").unwrap(), Gapset::empty());
        assert_eq!(g(&[1, 2, 4]).to_string(), "1,2,4");
        assert!(matches!(
            parse_gap_list("1,x"),
            Err(Error::Parse { pos: 2, .. })
        ));
        assert!(matches!(
            parse_gap_list("2,1"),
            Err(Error::Parse { pos: 2, .. })
        ));
        assert!(matches!(
            parse_gap_list("1,3,4"),
            Err(Error::NotAGapset(..))
        ));
        assert_eq!(parse_generators("<3,8,13>").unwrap(), vec![3, 8, 13]);
        assert_eq!(format_generators(&[3, 8, 13]), "<3,8,13>");
        assert!(matches!(
            parse_generators("3,8"),
            Err(Error::Parse { pos: 0, .. })
        ));
        assert!(matches!(
            parse_generators("<3,0>"),
            Err(Error::Parse { pos: 3, .. })
        ));
    }

    #[test]
    fn ordering_is_lexicographic_on_gaps() {
        assert!(g(&[1, 2, 3]) < g(&[1, 2, 4]));
        assert!(g(&[1, 2]) < g(&[1, 2, 3]));
        assert!(g(&[1, 2, 5]) < g(&[1, 3]));
    }
}
