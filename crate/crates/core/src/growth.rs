//! Genus-growth maps on gapset filtrations of depth at most 3.
//!
//! For a filtration `(F_0, F_1, F_2)` of multiplicity `m`,
//! `alpha1` adjoins `m` to `F_0` and `alpha2` adjoins it to `F_0` and `F_1`.
//! Both produce gapset filtrations of multiplicity `m + 1`, with genus up by
//! one and two respectively, and their images are told apart by comparing
//! the maxima of the first three pieces. Everything left over has three
//! equal maxima and embeds three genera down by [`trim`]ming them.

use crate::error::{Error, Result};
use crate::filtration::Filtration;
use crate::intset::IntSet;
use crate::tree::{fold, EnumFilter, EnumOptions};

/// Which growth map, if any, a depth-≤3 filtration comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GrowthClass {
    /// `max F_0 > max F_1`.
    Image1,
    /// `max F_0 = max F_1 > max F_2`.
    Image2,
    /// `max F_0 = max F_1 = max F_2`.
    Rest,
}

/// A classification together with the maxima it was decided on
/// (`max ∅ = 0`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub class: GrowthClass,
    pub maxima: [u32; 3],
}

fn require_depth_at_most_3(f: &Filtration) -> Result<()> {
    if f.depth() > 3 {
        return Err(Error::DepthTooLarge {
            depth: f.depth(),
            max: 3,
        });
    }
    Ok(())
}

fn adjoin(f: &Filtration, count: usize) -> Result<Filtration> {
    require_depth_at_most_3(f)?;
    let m = f.multiplicity();
    let mut pieces = f.pieces().to_vec();
    pieces.resize(pieces.len().max(count), IntSet::new());
    for piece in pieces.iter_mut().take(count) {
        piece.insert(m);
    }
    Ok(Filtration::from_pieces_unchecked(pieces))
}

/// `(F_0 ∪ {m}, F_1, F_2)`.
pub fn alpha1(f: &Filtration) -> Result<Filtration> {
    adjoin(f, 1)
}

/// `(F_0 ∪ {m}, F_1 ∪ {m}, F_2)`.
pub fn alpha2(f: &Filtration) -> Result<Filtration> {
    adjoin(f, 2)
}

pub fn classify(f: &Filtration) -> Result<Classification> {
    require_depth_at_most_3(f)?;
    if f.genus() < 2 {
        return Err(Error::GenusTooSmall {
            genus: f.genus(),
            min: 2,
        });
    }
    let maxima = [f.piece_max(0), f.piece_max(1), f.piece_max(2)];
    let class = if maxima[0] > maxima[1] {
        GrowthClass::Image1
    } else if maxima[1] > maxima[2] {
        GrowthClass::Image2
    } else {
        GrowthClass::Rest
    };
    Ok(Classification { class, maxima })
}

fn strip_top(f: &Filtration, expected: GrowthClass, count: usize) -> Result<Filtration> {
    if classify(f)?.class != expected {
        return Err(Error::ClassMismatch(f.to_string()));
    }
    let top = f.multiplicity() - 1;
    let mut pieces = f.pieces().to_vec();
    for piece in pieces.iter_mut().take(count) {
        piece.remove(top);
    }
    Ok(Filtration::from_pieces_unchecked(pieces))
}

/// Removes `m-1` from `F_0`; defined on [`GrowthClass::Image1`].
pub fn invert_alpha1(f: &Filtration) -> Result<Filtration> {
    strip_top(f, GrowthClass::Image1, 1)
}

/// Removes `m-1` from `F_0` and `F_1`; defined on [`GrowthClass::Image2`].
pub fn invert_alpha2(f: &Filtration) -> Result<Filtration> {
    strip_top(f, GrowthClass::Image2, 2)
}

/// Removes the maximum of each of the three pieces of a depth-3 gapset
/// filtration, dropping pieces that become empty.
///
/// Only depth exactly 3 is accepted: at depth 4 the result can fail to be a
/// gapset filtration, `(123)(13)^3` being the smallest case.
pub fn trim(f: &Filtration) -> Result<Filtration> {
    if f.depth() != 3 {
        return Err(Error::WrongDepth {
            expected: 3,
            depth: f.depth(),
        });
    }
    let pieces = f
        .pieces()
        .iter()
        .map(|p| {
            let mut p = p.clone();
            p.remove(p.last().expect("stored pieces are nonempty"));
            p
        })
        .collect();
    Ok(Filtration::from_pieces_unchecked(pieces))
}

/// Class sizes and bound checks for one genus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SandwichRow {
    pub genus: u32,
    pub n_prime: u64,
    pub x1: u64,
    pub x2: u64,
    pub x3: u64,
    /// `n'_{g-1} + n'_{g-2} <= n'_g`
    pub lower_ok: bool,
    /// `n'_g <= n'_{g-1} + n'_{g-2} + n'_{g-3}`
    pub upper_ok: bool,
    /// `|X1| = n'_{g-1}`, `|X2| = n'_{g-2}` and `|X3| <= n'_{g-3}`.
    pub classes_ok: bool,
}

impl SandwichRow {
    pub fn ok(&self) -> bool {
        self.lower_ok && self.upper_ok && self.classes_ok
    }

    pub const CSV_HEADER: &'static str = "g,n_prime,x1,x2,x3,lower_ok,upper_ok";

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.genus, self.n_prime, self.x1, self.x2, self.x3, self.lower_ok, self.upper_ok
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SandwichReport {
    /// `n'_g` for `g = 0..=g_max`.
    pub n_prime: Vec<u64>,
    /// One row per `3 <= g <= g_max`.
    pub rows: Vec<SandwichRow>,
}

impl SandwichReport {
    pub fn failures(&self) -> impl Iterator<Item = &SandwichRow> {
        self.rows.iter().filter(|r| !r.ok())
    }

    pub fn passed(&self) -> bool {
        self.failures().next().is_none()
    }

    pub fn row(&self, genus: u32) -> Option<&SandwichRow> {
        self.rows.iter().find(|r| r.genus == genus)
    }
}

/// Classifies every depth-≤3 gapset filtration of genus `3..=g_max` and
/// checks the class sizes against the counts two and three genera down.
pub fn verify_sandwich(g_max: u32, opts: &EnumOptions) -> Result<SandwichReport> {
    if g_max < 3 {
        return Err(Error::GenusTooSmall {
            genus: g_max,
            min: 3,
        });
    }
    let len = g_max as usize + 1;
    // Per genus: [total, image1, image2, rest].
    let tallies = fold(
        &EnumFilter::new(g_max).depth_le(3),
        opts,
        || vec![[0u64; 4]; len],
        |acc, node| {
            let row = &mut acc[node.genus() as usize];
            row[0] += 1;
            if node.genus() >= 2 {
                let class = classify(&node.to_filtration()).expect("depth <= 3, genus >= 2");
                row[1 + class.class as usize] += 1;
            }
        },
        |mut a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                for k in 0..4 {
                    x[k] += y[k];
                }
            }
            a
        },
    )?;
    let n_prime: Vec<u64> = tallies.iter().map(|t| t[0]).collect();
    let rows = (3..=g_max as usize)
        .map(|g| {
            let [n, x1, x2, x3] = tallies[g];
            let (a, b, c) = (n_prime[g - 1], n_prime[g - 2], n_prime[g - 3]);
            SandwichRow {
                genus: g as u32,
                n_prime: n,
                x1,
                x2,
                x3,
                lower_ok: a + b <= n,
                upper_ok: n <= a + b + c,
                classes_ok: x1 == a && x2 == b && x3 <= c,
            }
        })
        .collect();
    Ok(SandwichReport { n_prime, rows })
}

/// First property violation found by [`verify_maps`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapViolation {
    pub property: &'static str,
    pub filtration: Filtration,
}

/// Outcome of [`verify_maps`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapCheck {
    pub g_max: u32,
    /// Depth-≤3 gapset filtrations examined.
    pub objects: usize,
    pub violation: Option<MapViolation>,
}

/// Exhaustively checks the growth maps on every depth-≤3 gapset filtration
/// of genus at most `g_max`: outputs are gapset filtrations of the right
/// genus and multiplicity, both maps are injective with disjoint images,
/// the inverses undo them on their classes, and trimming keeps depth-3
/// inputs valid (dropping the genus by exactly 3 on the common-maximum
/// class).
pub fn verify_maps(g_max: u32) -> Result<MapCheck> {
    use std::collections::HashSet;

    let mut all: Vec<Filtration> = Vec::new();
    crate::tree::enumerate_nodes(&EnumFilter::new(g_max).depth_le(3), |n| {
        all.push(n.to_filtration())
    })?;
    let known: HashSet<&Filtration> = all.iter().collect();
    let is_valid = |f: &Filtration| {
        if f.genus() <= g_max {
            known.contains(f)
        } else {
            f.is_gapset_filtration()
        }
    };
    let fail = |property: &'static str, f: &Filtration| {
        Ok(MapCheck {
            g_max,
            objects: all.len(),
            violation: Some(MapViolation {
                property,
                filtration: f.clone(),
            }),
        })
    };

    let mut image1 = HashSet::new();
    let mut image2 = HashSet::new();
    for f in &all {
        let (g, m) = (f.genus(), f.multiplicity());
        let a1 = alpha1(f)?;
        let a2 = alpha2(f)?;
        if !is_valid(&a1) || a1.genus() != g + 1 || a1.multiplicity() != m + 1 {
            return fail(
                "alpha1 output is a gapset filtration of genus g+1, multiplicity m+1",
                f,
            );
        }
        if !is_valid(&a2) || a2.genus() != g + 2 || a2.multiplicity() != m + 1 {
            return fail(
                "alpha2 output is a gapset filtration of genus g+2, multiplicity m+1",
                f,
            );
        }
        // The inverses are defined from genus 2 on, which excludes only alpha1(∅).
        if g >= 1 && invert_alpha1(&a1).as_ref() != Ok(f) {
            return fail("invert_alpha1 . alpha1 = id", f);
        }
        if invert_alpha2(&a2).as_ref() != Ok(f) {
            return fail("invert_alpha2 . alpha2 = id", f);
        }
        if !image1.insert(a1) {
            return fail("alpha1 is injective", f);
        }
        if !image2.insert(a2) {
            return fail("alpha2 is injective", f);
        }

        if f.depth() == 3 {
            let t = trim(f)?;
            if !is_valid(&t) {
                return fail("trim output is a gapset filtration", f);
            }
        }
        if g < 2 {
            continue;
        }
        match classify(f)?.class {
            GrowthClass::Image1 => {
                let pre = invert_alpha1(f)?;
                if !is_valid(&pre) || alpha1(&pre)? != *f {
                    return fail("Image1 elements come from alpha1", f);
                }
            }
            GrowthClass::Image2 => {
                let pre = invert_alpha2(f)?;
                if !is_valid(&pre) || alpha2(&pre)? != *f {
                    return fail("Image2 elements come from alpha2", f);
                }
            }
            GrowthClass::Rest => {
                if f.depth() != 3 || trim(f)?.genus() + 3 != g {
                    return fail("common-maximum trim drops genus by 3", f);
                }
            }
        }
    }
    if let Some(f) = image1.intersection(&image2).next() {
        return fail("alpha1 and alpha2 images are disjoint", f);
    }
    Ok(MapCheck {
        g_max,
        objects: all.len(),
        violation: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtration::parse_filtration;

    fn f(text: &str) -> Filtration {
        parse_filtration(text).unwrap()
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha1(&f("(1)(1)")).unwrap(), f("(12)(1)"));
        assert_eq!(alpha2(&f("(1)(1)")).unwrap(), f("(12)(12)"));
        assert_eq!(alpha1(&Filtration::empty()).unwrap(), f("(1)"));
        assert_eq!(alpha2(&Filtration::empty()).unwrap(), f("(1)(1)"));
        assert!(alpha1(&f("(12)(12)")).unwrap().is_gapset_filtration());
        assert!(matches!(
            alpha1(&f("(1)^4")),
            Err(Error::DepthTooLarge { .. })
        ));
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&f("(123)(1)")).unwrap().class, GrowthClass::Image1);
        assert_eq!(classify(&f("(12)(12)")).unwrap().class, GrowthClass::Image2);
        let rest = classify(&f("(1)(1)(1)")).unwrap();
        assert_eq!(rest.class, GrowthClass::Rest);
        assert_eq!(rest.maxima, [1, 1, 1]);
        assert!(matches!(
            classify(&f("(1)")),
            Err(Error::GenusTooSmall { .. })
        ));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(invert_alpha1(&f("(123)(1)")).unwrap(), f("(12)(1)"));
        assert_eq!(invert_alpha2(&f("(12)(12)")).unwrap(), f("(1)(1)"));
        assert!(matches!(
            invert_alpha1(&f("(1)(1)")),
            Err(Error::ClassMismatch(_))
        ));
    }

    #[test]
    fn trim_examples() {
        assert_eq!(trim(&f("(123)(12)(1)")).unwrap(), f("(12)(1)"));
        assert_eq!(trim(&f("(1)(1)(1)")).unwrap(), Filtration::empty());
        assert!(matches!(
            trim(&f("(123)(13)^3")),
            Err(Error::WrongDepth { depth: 4, .. })
        ));
        assert!(trim(&f("(12)(1)")).is_err());
    }

    #[test]
    fn sandwich_small_genera() {
        let report = verify_sandwich(7, &EnumOptions::default()).unwrap();
        assert!(report.passed());
        let r3 = report.row(3).unwrap();
        assert_eq!(r3.n_prime, 4);
        let r4 = report.row(4).unwrap();
        assert_eq!((r4.n_prime, r4.x1, r4.x2, r4.x3), (6, 4, 2, 0));
        let r7 = report.row(7).unwrap();
        assert_eq!((r7.n_prime, r7.x1, r7.x2, r7.x3), (33, 20, 11, 2));
        assert!(verify_sandwich(2, &EnumOptions::default()).is_err());
    }

    #[test]
    fn maps_hold_through_genus_8() {
        let check = verify_maps(8).unwrap();
        assert_eq!(check.violation, None);
        assert_eq!(
            check.objects,
            [1, 1, 2, 4, 6, 11, 20, 33, 57].iter().sum::<usize>()
        );
    }
}
