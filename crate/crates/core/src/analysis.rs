//! Reference sequences and the inequality checks built on them.

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::gapset::Gapset;
use crate::tree::{count_from, count_with, CountTable, EnumFilter, EnumOptions, TreeNode};

/// `n_g` for `g = 0..=15`.
pub const N_G: [u64; 16] = [
    1, 1, 2, 4, 7, 12, 23, 39, 67, 118, 204, 343, 592, 1001, 1693, 2857,
];

/// `n'_g`, the number of gapsets of genus `g` and depth at most 3, for
/// `g = 0..=60`. Entries from genus 1 on come from a published table
/// computed with specialized software; only the first ~35 are within
/// reach of [`crate::tree::count`].
pub const N_PRIME: [u64; 61] = [
    1,
    1,
    2,
    4,
    6,
    11,
    20,
    33,
    57,
    99,
    168,
    287,
    487,
    824,
    1395,
    2351,
    3954,
    6636,
    11116,
    18593,
    31042,
    51780,
    86223,
    143317,
    237936,
    394532,
    653420,
    1080981,
    1786328,
    2948836,
    4863266,
    8013802,
    13194529,
    21707242,
    35684639,
    58618136,
    96221845,
    157840886,
    258749944,
    423906805,
    694076610,
    1135816798,
    1857750672,
    3037078893,
    4962738376,
    8105674930,
    13233250642,
    21595419304,
    35227607540,
    57443335681,
    93635242237,
    152577300884,
    248541429293,
    404736945777,
    658898299876,
    1072361202701,
    1744802234628,
    2838171714880,
    4615547228454,
    7504199621406,
    12197944701688,
];

/// Largest index accepted by [`fibonacci`] and [`tribonacci`].
pub const MAX_INDEX: u32 = 90;

/// `F_0..=F_n` and `T_0..=T_n`, with `F_1 = F_2 = 1`, `T_0 = 0`,
/// `T_1 = T_2 = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceCache {
    pub fib: Vec<u64>,
    pub trib: Vec<u64>,
}

impl SequenceCache {
    pub fn new(n: u32) -> Result<Self> {
        let fib = (0..=n).map(fibonacci).collect::<Result<_>>()?;
        let trib = (0..=n).map(tribonacci).collect::<Result<_>>()?;
        Ok(Self { fib, trib })
    }
}

fn check_index(name: &'static str, n: u32) -> Result<()> {
    if n > MAX_INDEX {
        return Err(Error::OutOfRange {
            name,
            n,
            max: MAX_INDEX,
        });
    }
    Ok(())
}

pub fn fibonacci(n: u32) -> Result<u64> {
    check_index("fibonacci", n)?;
    let (mut a, mut b) = (0u64, 1u64);
    for _ in 0..n {
        (a, b) = (b, a + b);
    }
    Ok(a)
}

/// Exact tribonacci number. `T_n` leaves `u64` from `n = 75` on, so the
/// effective range is smaller than [`MAX_INDEX`].
pub fn tribonacci(n: u32) -> Result<u64> {
    check_index("tribonacci", n)?;
    let mut t = [0u64, 1, 1];
    if n < 3 {
        return Ok(t[n as usize]);
    }
    for i in 3..=n {
        let next = t[0]
            .checked_add(t[1])
            .and_then(|s| s.checked_add(t[2]))
            .ok_or(Error::OutOfRange {
                name: "tribonacci",
                n,
                max: i - 1,
            })?;
        t = [t[1], t[2], next];
    }
    Ok(t[2])
}

/// One genus of the Fibonacci/tribonacci checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibonacciRow {
    pub genus: u32,
    /// `|Γ(g, q ≤ 2)|`
    pub depth_le_2: u64,
    /// `F_{g+1}`
    pub fib_next: u64,
    pub n_prime: u64,
    /// `2 F_g`
    pub lower: u64,
    /// `T_{g+1}`
    pub upper: u64,
    pub fib_ok: bool,
    /// `None` below genus 3, where the bounds are not claimed.
    pub bounds_ok: Option<bool>,
}

impl FibonacciRow {
    pub fn ok(&self) -> bool {
        self.fib_ok && self.bounds_ok.unwrap_or(true)
    }
}

/// Checks `|Γ(g, q≤2)| = F_{g+1}` for every genus in `counts` and
/// `2F_g <= n'_g <= T_{g+1}` from genus 3 on.
///
/// `counts` needs its depth breakdown and must not exclude any depth ≤ 3.
pub fn check_fibonacci_bound(counts: &CountTable, g_max: u32) -> Result<Vec<FibonacciRow>> {
    if g_max > counts.max_genus() {
        return Err(Error::InvalidFilter(format!(
            "counts stop at genus {}, need {g_max}",
            counts.max_genus()
        )));
    }
    (0..=g_max)
        .map(|g| {
            let row = counts.row(g).expect("checked above");
            let depth_le_2 = row.depth_at_most(2);
            let n_prime = row.depth_at_most(3);
            let fib_next = fibonacci(g + 1)?;
            let lower = 2 * fibonacci(g)?;
            let upper = tribonacci(g + 1)?;
            Ok(FibonacciRow {
                genus: g,
                depth_le_2,
                fib_next,
                n_prime,
                lower,
                upper,
                fib_ok: depth_le_2 == fib_next,
                bounds_ok: (g >= 3).then_some(lower <= n_prime && n_prime <= upper),
            })
        })
        .collect()
}

/// `7.8 F_g <= n'_g <= 0.007 T_{g+1}` at one genus, in integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LargeGenusRow {
    pub genus: u32,
    pub n_prime: u64,
    pub fib: u64,
    pub trib_next: u64,
    pub lower_ok: bool,
    pub upper_ok: bool,
}

/// Evaluates the large-genus bounds against the tabulated `n'_g` for each
/// genus in `genera` (at most 60).
pub fn check_large_genus_bounds(
    genera: impl IntoIterator<Item = u32>,
) -> Result<Vec<LargeGenusRow>> {
    genera
        .into_iter()
        .map(|g| {
            let n_prime = *N_PRIME.get(g as usize).ok_or(Error::OutOfRange {
                name: "n_prime",
                n: g,
                max: 60,
            })?;
            let fib = fibonacci(g)?;
            let trib_next = tribonacci(g + 1)?;
            Ok(LargeGenusRow {
                genus: g,
                n_prime,
                fib,
                trib_next,
                lower_ok: 78 * u128::from(fib) <= 10 * u128::from(n_prime),
                upper_ok: 1000 * u128::from(n_prime) <= 7 * u128::from(trib_next),
            })
        })
        .collect()
}

/// Genera where enumerated `n'_g` (from `counts`) and the table disagree.
pub fn table_mismatches(counts: &CountTable) -> Vec<(u32, u64, u64)> {
    counts
        .rows()
        .iter()
        .enumerate()
        .take(N_PRIME.len())
        .filter_map(|(g, row)| {
            let got = row.depth_at_most(3);
            (got != N_PRIME[g]).then_some((g as u32, got, N_PRIME[g]))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioRow {
    pub genus: u32,
    pub n_g: u64,
    pub n_prime_next: u64,
    /// `n'_{g+1} / n_g`, exact.
    pub ratio: Ratio<u64>,
}

impl RatioRow {
    pub fn ratio_f64(&self) -> f64 {
        *self.ratio.numer() as f64 / *self.ratio.denom() as f64
    }

    /// Seven digits after the point.
    pub fn ratio_display(&self) -> String {
        format!("{:.7}", self.ratio_f64())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioReport {
    pub rows: Vec<RatioRow>,
    /// Index into `rows` of the first minimal ratio.
    pub argmin: usize,
}

impl RatioReport {
    pub fn minimum(&self) -> &RatioRow {
        &self.rows[self.argmin]
    }

    /// Running minimum after each row, as `(genus, ratio)`.
    pub fn running_minimum(&self) -> Vec<(u32, Ratio<u64>)> {
        let mut best: Option<&RatioRow> = None;
        self.rows
            .iter()
            .map(|r| {
                if best.is_none_or(|b| r.ratio < b.ratio) {
                    best = Some(r);
                }
                let b = best.unwrap();
                (b.genus, b.ratio)
            })
            .collect()
    }
}

/// Builds the report from `n[g]` (unrestricted) and `n_prime[g]` (depth ≤ 3)
/// for `g = 1..=g_max`.
pub fn ratio_rows(n: &[u64], n_prime: &[u64], g_max: u32) -> Result<RatioReport> {
    let g_max = g_max as usize;
    if g_max < 1 || n.len() <= g_max || n_prime.len() <= g_max + 1 {
        return Err(Error::InvalidFilter(format!(
            "ratio report for 1..={g_max} needs n up to {g_max} and n' up to {}",
            g_max + 1
        )));
    }
    let rows: Vec<RatioRow> = (1..=g_max)
        .map(|g| RatioRow {
            genus: g as u32,
            n_g: n[g],
            n_prime_next: n_prime[g + 1],
            ratio: Ratio::new(n_prime[g + 1], n[g]),
        })
        .collect();
    let argmin = rows
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.ratio.cmp(&b.1.ratio).then(a.0.cmp(&b.0)))
        .map(|(i, _)| i)
        .unwrap();
    Ok(RatioReport { rows, argmin })
}

/// Enumerates `n_g` up to `g_max` and `n'_g` up to `g_max + 1`, then
/// reports `n'_{g+1} / n_g` for `1 <= g <= g_max`.
pub fn ratio_report(g_max: u32, opts: &EnumOptions) -> Result<RatioReport> {
    let n = count_with(&EnumFilter::new(g_max), opts)?.totals();
    let n_prime = count_with(&EnumFilter::new(g_max + 1).depth_le(3), opts)?.totals();
    ratio_rows(&n, &n_prime, g_max)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubtreeLevel {
    pub genus: u32,
    pub count: u64,
    /// `count` is at least the previous level's.
    pub nondecreasing: bool,
}

/// Number of descendants of `root` at each genus from its own up to
/// `level_max`.
pub fn subtree_levels(
    root: &Gapset,
    level_max: u32,
    opts: &EnumOptions,
) -> Result<Vec<SubtreeLevel>> {
    let start = TreeNode::from_gapset(root)?;
    let counts = count_from(&start, &EnumFilter::new(level_max), opts)?;
    let mut prev: Option<u64> = None;
    Ok((root.genus()..=level_max)
        .map(|g| {
            let count = counts.row(g).map_or(0, |r| r.total);
            let nondecreasing = prev.is_none_or(|p| count >= p);
            prev = Some(count);
            SubtreeLevel {
                genus: g,
                count,
                nondecreasing,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequence_examples() {
        assert_eq!(tribonacci(14).unwrap(), 1705);
        assert_eq!(fibonacci(60).unwrap(), 1548008755920);
        assert_eq!(tribonacci(0).unwrap(), 0);
        assert_eq!(fibonacci(1).unwrap(), 1);
        assert_eq!(fibonacci(2).unwrap(), 1);
        assert_eq!(fibonacci(90).unwrap(), 2880067194370816120);
        assert!(matches!(fibonacci(91), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn tribonacci_overflow_is_an_error() {
        assert!(tribonacci(74).is_ok());
        assert!(matches!(
            tribonacci(75),
            Err(Error::OutOfRange { max: 74, .. })
        ));
        assert!(matches!(tribonacci(80), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn cache_satisfies_recurrences() {
        let c = SequenceCache::new(70).unwrap();
        for n in 2..=70 {
            assert_eq!(c.fib[n], c.fib[n - 1] + c.fib[n - 2]);
        }
        for n in 3..=70 {
            assert_eq!(c.trib[n], c.trib[n - 1] + c.trib[n - 2] + c.trib[n - 3]);
        }
    }

    #[test]
    fn exact_small_ratios() {
        let report = ratio_rows(&N_G, &N_PRIME, 5).unwrap();
        let want = [
            Ratio::new(2, 1),
            Ratio::new(2, 1),
            Ratio::new(3, 2),
            Ratio::new(11, 7),
            Ratio::new(5, 3),
        ];
        let got: Vec<_> = report.rows.iter().map(|r| r.ratio).collect();
        assert_eq!(got, want);
        assert_eq!(report.minimum().genus, 3);
        assert!(ratio_rows(&N_G, &N_PRIME, 0).is_err());
    }

    #[test]
    fn subtree_of_m2_chain_is_a_path() {
        let root = Gapset::new([1, 3, 5]).unwrap();
        let levels = subtree_levels(&root, 12, &EnumOptions::default()).unwrap();
        assert!(levels.iter().all(|l| l.count == 1));
        assert_eq!(levels.first().unwrap().genus, 3);
    }

    #[test]
    fn fibonacci_rows_need_enough_counts() {
        let counts = crate::tree::count(&EnumFilter::new(3)).unwrap();
        assert!(check_fibonacci_bound(&counts, 4).is_err());
        let rows = check_fibonacci_bound(&counts, 3).unwrap();
        assert!(rows.iter().all(FibonacciRow::ok));
        assert_eq!(rows[2].bounds_ok, None);
        assert_eq!((rows[3].lower, rows[3].n_prime, rows[3].upper), (4, 4, 4));
    }
}
