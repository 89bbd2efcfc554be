//! Closed-form descriptions of the gapset filtrations of multiplicity 3
//! and 4.
//!
//! Every piece of such a filtration is a subset of `[1, m-1]` and the pieces
//! are nonincreasing, so the filtration is a run of full pieces followed by
//! at most a run of two-element pieces and a run of singletons. Which
//! exponents give a gapset is decided by a handful of linear inequalities.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::filtration::Filtration;
use crate::intset::IntSet;
use crate::tree::{enumerate_nodes, EnumFilter};

/// Two-element middle piece for multiplicity 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pair {
    P12,
    P13,
    P23,
}

impl Pair {
    pub const ALL: [Pair; 3] = [Pair::P12, Pair::P13, Pair::P23];

    pub fn elements(self) -> [u32; 2] {
        match self {
            Pair::P12 => [1, 2],
            Pair::P13 => [1, 3],
            Pair::P23 => [2, 3],
        }
    }
}

/// `(12)^a (t)^b` for `m = 3`, or `(123)^a (XY)^b (Z)^c` for `m = 4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyShape {
    M3 {
        a: u32,
        tail: u32,
        b: u32,
    },
    M4 {
        a: u32,
        pair: Pair,
        b: u32,
        tail: u32,
        c: u32,
    },
}

impl FamilyShape {
    pub fn m3(a: u32, tail: u32, b: u32) -> Result<Self> {
        let s = FamilyShape::M3 { a, tail, b };
        s.check()?;
        Ok(s)
    }

    pub fn m4(a: u32, pair: Pair, b: u32, tail: u32, c: u32) -> Result<Self> {
        let s = FamilyShape::M4 {
            a,
            pair,
            b,
            tail,
            c,
        };
        s.check()?;
        Ok(s)
    }

    fn check(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidShape(msg.into()));
        match *self {
            FamilyShape::M3 { a, tail, .. } => {
                if a == 0 {
                    return bad("head exponent must be at least 1");
                }
                if !matches!(tail, 1 | 2) {
                    return bad("multiplicity-3 tail must be 1 or 2");
                }
            }
            FamilyShape::M4 { a, pair, tail, .. } => {
                if a == 0 {
                    return bad("head exponent must be at least 1");
                }
                if !pair.elements().contains(&tail) {
                    return bad("tail must lie in the middle piece");
                }
            }
        }
        Ok(())
    }

    pub fn multiplicity(&self) -> u32 {
        match self {
            FamilyShape::M3 { .. } => 3,
            FamilyShape::M4 { .. } => 4,
        }
    }

    pub fn genus(&self) -> u32 {
        match *self {
            FamilyShape::M3 { a, b, .. } => 2 * a + b,
            FamilyShape::M4 { a, b, c, .. } => 3 * a + 2 * b + c,
        }
    }

    /// The filtration the shape describes.
    pub fn to_filtration(&self) -> Filtration {
        let runs: Vec<(IntSet, u32)> = match *self {
            FamilyShape::M3 { a, tail, b } => {
                vec![
                    (IntSet::interval(1, 2), a),
                    ([tail].into_iter().collect(), b),
                ]
            }
            FamilyShape::M4 {
                a,
                pair,
                b,
                tail,
                c,
            } => vec![
                (IntSet::interval(1, 3), a),
                (pair.elements().into_iter().collect(), b),
                ([tail].into_iter().collect(), c),
            ],
        };
        let pieces = runs
            .into_iter()
            .flat_map(|(p, k)| std::iter::repeat_n(p, k as usize))
            .collect();
        Filtration::from_pieces_unchecked(pieces)
    }
}

/// The closed-form gapset criterion for `shape`.
pub fn is_valid_shape(shape: &FamilyShape) -> bool {
    match *shape {
        FamilyShape::M3 { a, tail: 1, b } => b <= a + 1,
        FamilyShape::M3 { a, b, .. } => b <= a,
        FamilyShape::M4 {
            a,
            pair,
            b,
            tail,
            c,
        } => match (pair, tail) {
            (Pair::P12, 1) => b <= a + 1 && c <= a + 1,
            (Pair::P12, _) => b + c <= a + 1 && c <= a + b,
            (Pair::P13, 1) => c <= a + 1,
            (Pair::P13, _) => c <= a,
            (Pair::P23, 2) => b + c <= a,
            (Pair::P23, _) => b <= a && c <= a,
        },
    }
}

/// All shapes of multiplicity `m` and genus `g`, possibly describing the
/// same filtration more than once.
pub fn shapes(m: u32, g: u32) -> Vec<FamilyShape> {
    let mut out = Vec::new();
    match m {
        3 => {
            for a in 1..=g / 2 {
                let b = g - 2 * a;
                for tail in [1, 2] {
                    out.push(FamilyShape::M3 { a, tail, b });
                }
            }
        }
        4 => {
            for a in 1..=g / 3 {
                for b in 0..=(g - 3 * a) / 2 {
                    let c = g - 3 * a - 2 * b;
                    for pair in Pair::ALL {
                        for tail in pair.elements() {
                            out.push(FamilyShape::M4 {
                                a,
                                pair,
                                b,
                                tail,
                                c,
                            });
                        }
                    }
                }
            }
        }
        _ => {}
    }
    out
}

/// Distinct gapset filtrations of multiplicity `m ∈ {3, 4}` and genus `g`,
/// in canonical order.
pub fn enumerate_family(m: u32, g: u32) -> Result<Vec<Filtration>> {
    if !matches!(m, 3 | 4) {
        return Err(Error::InvalidShape(format!(
            "multiplicity {m} has no closed form"
        )));
    }
    let set: BTreeSet<Filtration> = shapes(m, g)
        .iter()
        .filter(|s| is_valid_shape(s))
        .map(FamilyShape::to_filtration)
        .collect();
    Ok(set.into_iter().collect())
}

/// Closed-form versus brute-force comparison for one genus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyRow {
    pub m: u32,
    pub g: u32,
    pub closed_form_count: usize,
    pub bruteforce_count: usize,
    /// Present on one side only.
    pub discrepancies: Vec<Filtration>,
}

impl FamilyRow {
    pub fn matches(&self) -> bool {
        self.discrepancies.is_empty()
    }

    pub const CSV_HEADER: &'static str = "m,g,closed_form_count,bruteforce_count,match";

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.m,
            self.g,
            self.closed_form_count,
            self.bruteforce_count,
            self.matches()
        )
    }
}

/// Compares [`enumerate_family`] with the tree enumeration restricted to
/// multiplicity `m`, for every genus up to `g_max`.
pub fn cross_check(m: u32, g_max: u32) -> Result<Vec<FamilyRow>> {
    let mut brute = vec![BTreeSet::new(); g_max as usize + 1];
    enumerate_nodes(&EnumFilter::new(g_max).multiplicity_eq(m), |node| {
        brute[node.genus() as usize].insert(node.to_filtration());
    })?;
    (0..=g_max)
        .map(|g| {
            let closed: BTreeSet<Filtration> = enumerate_family(m, g)?.into_iter().collect();
            let found = &brute[g as usize];
            Ok(FamilyRow {
                m,
                g,
                closed_form_count: closed.len(),
                bruteforce_count: found.len(),
                discrepancies: closed.symmetric_difference(found).cloned().collect(),
            })
        })
        .collect()
}

/// Shapes with `1 <= a <= a_max` and `b, c <= bc_max` (both tail variants)
/// on which the closed form and the direct gapset check disagree.
pub fn shape_oracle_disagreements(a_max: u32, bc_max: u32) -> Vec<FamilyShape> {
    let mut shapes = Vec::new();
    for a in 1..=a_max {
        for b in 0..=bc_max {
            for tail in [1, 2] {
                shapes.push(FamilyShape::M3 { a, tail, b });
            }
            for c in 0..=bc_max {
                for pair in Pair::ALL {
                    for tail in pair.elements() {
                        shapes.push(FamilyShape::M4 {
                            a,
                            pair,
                            b,
                            tail,
                            c,
                        });
                    }
                }
            }
        }
    }
    shapes
        .into_iter()
        .filter(|s| is_valid_shape(s) != s.to_filtration().is_gapset_filtration())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtration::parse_filtration;

    fn f(text: &str) -> Filtration {
        parse_filtration(text).unwrap()
    }

    #[test]
    fn validity_examples() {
        assert!(is_valid_shape(&FamilyShape::m3(2, 1, 3).unwrap()));
        assert!(!is_valid_shape(&FamilyShape::m3(2, 2, 3).unwrap()));
        assert!(!is_valid_shape(
            &FamilyShape::m4(1, Pair::P23, 1, 2, 1).unwrap()
        ));
    }

    #[test]
    fn malformed_shapes_are_rejected() {
        assert!(FamilyShape::m3(0, 1, 1).is_err());
        assert!(FamilyShape::m3(1, 3, 1).is_err());
        assert!(FamilyShape::m4(1, Pair::P12, 1, 3, 1).is_err());
    }

    #[test]
    fn enumerate_examples() {
        let got = enumerate_family(3, 6).unwrap();
        let want: BTreeSet<_> = ["(12)^3", "(12)^2(1)^2", "(12)^2(2)^2"].map(f).into();
        assert_eq!(got.into_iter().collect::<BTreeSet<_>>(), want);
        assert_eq!(enumerate_family(3, 2).unwrap(), vec![f("(12)")]);
        let got = enumerate_family(4, 6).unwrap();
        let want: BTreeSet<_> = [
            "(123)(23)(3)",
            "(123)(13)(3)",
            "(123)(13)(1)",
            "(123)(12)(2)",
            "(123)(12)(1)",
            "(123)^2",
        ]
        .map(f)
        .into();
        assert_eq!(got.into_iter().collect::<BTreeSet<_>>(), want);
        assert!(enumerate_family(5, 6).is_err());
    }

    #[test]
    fn closed_form_agrees_with_direct_check_on_small_shapes() {
        assert!(shape_oracle_disagreements(4, 5).is_empty());
    }

    #[test]
    fn cross_check_small() {
        let rows = cross_check(3, 2).unwrap();
        assert!(rows.iter().all(FamilyRow::matches));
        assert_eq!(rows[2].closed_form_count, 1);
        assert_eq!(rows[2].bruteforce_count, 1);
    }
}
