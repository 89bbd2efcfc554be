//! m-filtrations and the translation between gapsets and filtrations.
//!
//! An m-filtration is a nonincreasing sequence `F_0 ⊇ F_1 ⊇ ...` of subsets
//! of `[1, m-1]` with `F_0 = [1, m-1]`. Shifting piece `i` up by `i·m` and
//! taking the union (`tau`) gives an m-extension; splitting a gapset along
//! multiples of its multiplicity (`phi`) goes the other way.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gapset::{is_gapset, Gapset};
use crate::intset::IntSet;

/// A nonincreasing sequence of nonempty sets with an interval first piece.
///
/// Trailing empty pieces are dropped on construction, so the stored length
/// equals the depth of the corresponding gapset. The empty filtration has
/// multiplicity 1.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Filtration {
    pieces: Vec<IntSet>,
}

impl Filtration {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(mut pieces: Vec<IntSet>) -> Result<Self> {
        while pieces.last().is_some_and(IntSet::is_empty) {
            pieces.pop();
        }
        if let Some(first) = pieces.first() {
            if *first != IntSet::interval(1, first.len() as u32) {
                return Err(Error::InvalidFiltration(format!(
                    "first piece {first:?} is not an interval [1, m-1]"
                )));
            }
        }
        for (i, w) in pieces.windows(2).enumerate() {
            if !w[1].is_subset(&w[0]) {
                return Err(Error::InvalidFiltration(format!(
                    "piece {} {:?} is not contained in piece {} {:?}",
                    i + 1,
                    w[1],
                    i,
                    w[0]
                )));
            }
        }
        Ok(Self { pieces })
    }

    /// Convenience constructor from element lists.
    pub fn from_lists<P, I>(pieces: P) -> Result<Self>
    where
        P: IntoIterator<Item = I>,
        I: IntoIterator<Item = u32>,
    {
        Self::new(
            pieces
                .into_iter()
                .map(|p| p.into_iter().collect())
                .collect(),
        )
    }

    pub(crate) fn from_pieces_unchecked(mut pieces: Vec<IntSet>) -> Self {
        while pieces.last().is_some_and(IntSet::is_empty) {
            pieces.pop();
        }
        debug_assert!(Self::new(pieces.clone()).is_ok());
        Self { pieces }
    }

    pub fn pieces(&self) -> &[IntSet] {
        &self.pieces
    }

    pub fn into_pieces(self) -> Vec<IntSet> {
        self.pieces
    }

    /// Piece `i`, reading missing trailing pieces as empty.
    pub fn piece(&self, i: usize) -> Option<&IntSet> {
        self.pieces.get(i)
    }

    /// `max F_i` with `max ∅ = 0`.
    pub fn piece_max(&self, i: usize) -> u32 {
        self.pieces.get(i).map_or(0, IntSet::max_or_zero)
    }

    pub fn multiplicity(&self) -> u32 {
        self.pieces.first().map_or(1, |p| p.len() as u32 + 1)
    }

    pub fn depth(&self) -> u32 {
        self.pieces.len() as u32
    }

    pub fn genus(&self) -> u32 {
        self.pieces.iter().map(|p| p.len() as u32).sum()
    }

    /// The m-extension `⋃ (i·m + F_i)`.
    pub fn extension(&self) -> IntSet {
        let m = self.multiplicity();
        let mut out = IntSet::with_bound(m * self.depth());
        for (i, piece) in self.pieces.iter().enumerate() {
            for x in piece {
                out.insert(i as u32 * m + x);
            }
        }
        out
    }

    pub fn is_gapset_filtration(&self) -> bool {
        is_gapset(self.extension().iter())
    }

    pub fn to_gapset(&self) -> Result<Gapset> {
        Gapset::from_set(self.extension())
    }
}

/// `F_i = G_i - i·m` over the canonical partition of `G`.
pub fn phi(gapset: &Gapset) -> Filtration {
    let m = gapset.multiplicity();
    let pieces = gapset
        .canonical_partition()
        .into_iter()
        .enumerate()
        .map(|(i, g)| g.iter().map(|x| x - i as u32 * m).collect())
        .collect();
    Filtration { pieces }
}

/// `A_i = i·m + F_i`, returned as their union. The result need not be a
/// gapset.
pub fn tau(filtration: &Filtration) -> IntSet {
    filtration.extension()
}

pub fn is_gapset_filtration(filtration: &Filtration) -> bool {
    filtration.is_gapset_filtration()
}

impl From<&Gapset> for Filtration {
    fn from(g: &Gapset) -> Self {
        phi(g)
    }
}

impl fmt::Debug for Filtration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Filtration[{}]", format_filtration(self))
    }
}

impl fmt::Display for Filtration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_filtration(self))
    }
}

impl FromStr for Filtration {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_filtration(s)
    }
}

/// Run-length notation, e.g. `(123)(13)^3`.
///
/// Digits are concatenated when the multiplicity is at most 10 and
/// comma-separated otherwise. The empty filtration formats as `""`.
pub fn format_filtration(filtration: &Filtration) -> String {
    let compact = filtration.multiplicity() <= 10;
    let mut out = String::new();
    let pieces = filtration.pieces();
    let mut i = 0;
    while i < pieces.len() {
        let run = pieces[i..].iter().take_while(|p| **p == pieces[i]).count();
        let sep = if compact { "" } else { "," };
        let body: Vec<String> = pieces[i].iter().map(|x| x.to_string()).collect();
        out.push('(');
        out.push_str(&body.join(sep));
        out.push(')');
        if run > 1 {
            out.push('^');
            out.push_str(&run.to_string());
        }
        i += run;
    }
    out
}

/// Parses run-length notation.
///
/// Grammar: `filtration := piece+`, `piece := '(' elems ')' ('^' uint)?`,
/// `elems := digit+ | uint (',' uint)*`. Whitespace between tokens is
/// ignored. If the text contains any comma every piece is read in comma
/// form, otherwise each digit is one element. Blank input is the empty
/// filtration.
pub fn parse_filtration(text: &str) -> Result<Filtration> {
    let comma_form = text.contains(',');
    let bytes = text.as_bytes();
    let err = |pos: usize, msg: String| Error::Parse { pos, msg };
    let skip_ws = |mut p: usize| {
        while p < bytes.len() && bytes[p].is_ascii_whitespace() {
            p += 1;
        }
        p
    };

    let mut pieces: Vec<IntSet> = Vec::new();
    let mut pos = skip_ws(0);
    while pos < bytes.len() {
        if bytes[pos] != b'(' {
            return Err(err(
                pos,
                format!(
                    "expected '(', found {:?}",
                    text[pos..].chars().next().unwrap()
                ),
            ));
        }
        let open = pos;
        let close = text[open..]
            .find(')')
            .map(|off| open + off)
            .ok_or_else(|| err(open, "unclosed piece".into()))?;
        let elems = parse_elems(&text[open + 1..close], open + 1, comma_form)?;
        if elems.is_empty() {
            return Err(err(open, "empty piece".into()));
        }
        let piece: IntSet = elems.iter().map(|&(_, v)| v).collect();

        pos = skip_ws(close + 1);
        let mut repeat = 1usize;
        if pos < bytes.len() && bytes[pos] == b'^' {
            let start = skip_ws(pos + 1);
            let mut end = start;
            while end < bytes.len() && bytes[end].is_ascii_digit() {
                end += 1;
            }
            repeat = text[start..end]
                .parse()
                .ok()
                .filter(|&k: &usize| k >= 1)
                .ok_or_else(|| err(start, "exponent must be a positive integer".into()))?;
            pos = skip_ws(end);
        }

        match pieces.last() {
            None => {
                if piece != IntSet::interval(1, piece.len() as u32) {
                    return Err(err(open, "first piece must be 1..m-1".into()));
                }
            }
            Some(prev) => {
                if let Some(&(p, v)) = elems.iter().find(|&&(_, v)| !prev.contains(v)) {
                    return Err(err(p, format!("{v} is not in the preceding piece")));
                }
            }
        }
        pieces.extend(std::iter::repeat_n(piece, repeat));
    }
    Filtration::new(pieces)
}

/// Elements of one piece body with their byte positions.
fn parse_elems(body: &str, base: usize, comma_form: bool) -> Result<Vec<(usize, u32)>> {
    let err = |pos: usize, msg: String| Error::Parse { pos, msg };
    let mut out: Vec<(usize, u32)> = Vec::new();
    let mut push = |pos: usize, v: u32| {
        if v == 0 {
            return Err(err(pos, "0 is not positive".into()));
        }
        if out.last().is_some_and(|&(_, prev)| prev >= v) {
            return Err(err(pos, format!("{v} breaks ascending order")));
        }
        out.push((pos, v));
        Ok(())
    };
    if comma_form {
        if body.trim().is_empty() {
            return Ok(Vec::new());
        }
        let mut offset = base;
        for field in body.split(',') {
            let pos = offset + (field.len() - field.trim_start().len());
            let v = field.trim().parse().map_err(|_| {
                err(
                    pos,
                    format!("expected an integer, found {:?}", field.trim()),
                )
            })?;
            push(pos, v)?;
            offset += field.len() + 1;
        }
    } else {
        for (i, ch) in body.char_indices() {
            if ch.is_whitespace() {
                continue;
            }
            let v = ch
                .to_digit(10)
                .ok_or_else(|| err(base + i, format!("unexpected {ch:?}")))?;
            push(base + i, v)?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(text: &str) -> Filtration {
        parse_filtration(text).unwrap()
    }

    #[test]
    fn phi_and_tau_examples() {
        let g = Gapset::new([1, 2, 4, 5, 7, 10]).unwrap();
        let expected = Filtration::from_lists([vec![1, 2], vec![1, 2], vec![1], vec![1]]).unwrap();
        assert_eq!(phi(&g), expected);
        assert_eq!(tau(&expected).to_vec(), vec![1, 2, 4, 5, 7, 10]);
        assert_eq!(phi(&Gapset::empty()), Filtration::empty());
        assert_eq!(expected.genus(), 6);
        assert_eq!(expected.multiplicity(), 3);
        assert_eq!(expected.depth(), 4);
    }

    #[test]
    fn gapset_filtration_examples() {
        assert!(f("(1)^4").is_gapset_filtration());
        assert!(!f("(12)(1)^3").is_gapset_filtration());
        assert!(f("(12)(12)").is_gapset_filtration());
        assert!(Filtration::empty().is_gapset_filtration());
    }

    #[test]
    fn parse_examples() {
        assert_eq!(
            f("(12)^2(1)^2"),
            Filtration::from_lists([vec![1, 2], vec![1, 2], vec![1], vec![1]]).unwrap()
        );
        assert_eq!(f("(1 2)^2 (1)^2"), f("(12)^2(1)^2"));
        assert_eq!(f("(1,2)^2(1)^2"), f("(12)^2(1)^2"));
        assert_eq!(f(""), Filtration::empty());
        assert!(matches!(
            parse_filtration("()"),
            Err(Error::Parse { pos: 0, .. })
        ));
    }

    #[test]
    fn parse_errors_carry_positions() {
        let pos = |t: &str| match parse_filtration(t) {
            Err(Error::Parse { pos, .. }) => pos,
            other => panic!("{t:?}: {other:?}"),
        };
        assert_eq!(pos("(12)(3)"), 5);
        assert_eq!(pos("(12)x"), 4);
        assert_eq!(pos("(13)"), 0);
        assert_eq!(pos("(12"), 0);
        assert_eq!(pos("(12)^0"), 5);
        assert_eq!(pos("(21)"), 2);
        assert_eq!(pos("(1,2)(1,x)"), 8);
        assert_eq!(pos("(10)"), 2);
    }

    #[test]
    fn format_examples() {
        let fl =
            Filtration::from_lists([vec![1, 2, 3], vec![1, 3], vec![1, 3], vec![1, 3]]).unwrap();
        assert_eq!(format_filtration(&fl), "(123)(13)^3");
        assert_eq!(format_filtration(&Filtration::empty()), "");
        let wide = Filtration::from_lists([(1..=10).collect::<Vec<_>>(), vec![10]]).unwrap();
        assert_eq!(wide.to_string(), "(1,2,3,4,5,6,7,8,9,10)(10)");
        assert_eq!(f(&wide.to_string()), wide);
    }

    #[test]
    fn constructor_rejects_malformed_pieces() {
        assert!(Filtration::from_lists([vec![1, 3]]).is_err());
        assert!(Filtration::from_lists([vec![1], vec![2]]).is_err());
        let trailing = Filtration::from_lists([vec![1], vec![1], vec![]]).unwrap();
        assert_eq!(trailing.depth(), 2);
    }
}
