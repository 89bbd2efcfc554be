//! The rooted tree of all gapsets and its depth-first enumeration.
//!
//! The parent of a nonempty gapset is obtained by removing its largest gap.
//! Its children add one gap `a` in the window `[c, c+m-1]`, where `a` is a
//! minimal generator of the semigroup larger than the Frobenius number.
//!
//! Enumeration runs on [`TreeNode`], a fixed-width bitset form of a gapset
//! which also tracks the generators available as children. Subtrees rooted
//! at a configurable genus are farmed out to a rayon pool; per-worker
//! accumulators are merged afterwards, so counts never depend on the
//! schedule.

use std::cell::RefCell;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::filtration::Filtration;
use crate::gapset::Gapset;
use crate::intset::IntSet;

/// Largest `max_genus` the fixed-width enumerator accepts.
///
/// A node of genus `g` that gets expanded needs bits up to `3g + 2`.
pub const MAX_ENUM_GENUS: u32 = 43;

/// Default genus at which subtrees are handed to workers.
pub const DEFAULT_SPLIT_GENUS: u32 = 12;

const BITS: u32 = u128::BITS;

/// The parent `G ∖ {max G}`.
pub fn parent(gapset: &Gapset) -> Result<Gapset> {
    gapset.without_max().ok_or(Error::NoParent)
}

/// All children of `gapset`, in increasing order of the added gap.
pub fn children(gapset: &Gapset) -> Vec<Gapset> {
    if gapset.is_empty() {
        return vec![gapset.with_gap(1)];
    }
    let m = gapset.multiplicity();
    let c = gapset.conductor();
    (c..c + m)
        .filter(|&a| gapset.admits(a))
        .map(|a| gapset.with_gap(a))
        .collect()
}

/// A gapset packed into 128 bits, plus the data needed to expand it.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct TreeNode {
    gaps: u128,
    /// Minimal generators `>= conductor`, i.e. the admissible new gaps.
    gens: u128,
    genus: u32,
    multiplicity: u32,
    conductor: u32,
    /// Cleared when some generator did not fit in 128 bits.
    gens_complete: bool,
}

#[inline]
fn low_mask(n: u32) -> u128 {
    if n >= BITS {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

/// Whether `b` is a sum of two positive elements whose membership is given
/// by `nongaps` (bit `i` set when `i` is a positive non-gap, `i < b`).
#[inline]
fn is_decomposable(nongaps: u128, b: u32) -> bool {
    let s = nongaps & low_mask(b) & !1;
    let mirrored = s.reverse_bits() >> (BITS - 1 - b);
    s & mirrored != 0
}

impl TreeNode {
    pub fn root() -> Self {
        Self {
            gaps: 0,
            gens: 1 << 1,
            genus: 0,
            multiplicity: 1,
            conductor: 0,
            gens_complete: true,
        }
    }

    pub fn from_gapset(gapset: &Gapset) -> Result<Self> {
        if gapset.is_empty() {
            return Ok(Self::root());
        }
        let c = gapset.conductor();
        let m = gapset.multiplicity();
        let limit = BITS - 1;
        if c + m > limit {
            return Err(Error::GenusTooLarge {
                requested: gapset.genus(),
                limit: MAX_ENUM_GENUS,
            });
        }
        let gaps = gapset.iter().fold(0u128, |acc, x| acc | 1 << x);
        let gens = gapset
            .min_generators()
            .into_iter()
            .filter(|&s| s >= c)
            .fold(0u128, |acc, s| acc | 1 << s);
        Ok(Self {
            gaps,
            gens,
            genus: gapset.genus(),
            multiplicity: m,
            conductor: c,
            gens_complete: true,
        })
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn multiplicity(&self) -> u32 {
        self.multiplicity
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn frobenius(&self) -> i64 {
        i64::from(self.conductor) - 1
    }

    pub fn depth(&self) -> u32 {
        self.conductor.div_ceil(self.multiplicity)
    }

    /// Bit `i` is set when `i` is a gap.
    pub fn gap_bits(&self) -> u128 {
        self.gaps
    }

    /// Admissible new gaps, as a bitmask.
    pub fn child_window(&self) -> u128 {
        self.gens
    }

    pub fn to_gapset(&self) -> Gapset {
        Gapset::from_set_unchecked(IntSet::from_bits(self.gaps))
    }

    pub fn to_filtration(&self) -> Filtration {
        let m = self.multiplicity;
        let piece_mask = low_mask(m) & !1;
        let pieces = (0..self.depth())
            .map(|i| IntSet::from_bits((self.gaps >> (i * m)) & piece_mask))
            .collect();
        Filtration::from_pieces_unchecked(pieces)
    }

    /// The child obtained by making `a` a gap; `a` must be in the window.
    #[inline]
    pub fn child(&self, a: u32) -> TreeNode {
        debug_assert!(self.gens >> a & 1 == 1);
        let m = self.multiplicity;
        let gaps = self.gaps | 1u128 << a;
        if a == m {
            // G = [1, m-1] becomes [1, m]: every element of [m+1, 2m+1]
            // generates the new ordinary semigroup.
            let top = 2 * m + 1;
            return TreeNode {
                gaps,
                gens: if top < BITS {
                    low_mask(top + 1) & !low_mask(m + 1)
                } else {
                    0
                },
                genus: self.genus + 1,
                multiplicity: m + 1,
                conductor: m + 1,
                gens_complete: self.gens_complete && top < BITS,
            };
        }
        let mut gens = self.gens & !low_mask(a + 1);
        let b = a + m;
        let fits = b < BITS;
        if fits && !is_decomposable(!gaps, b) {
            gens |= 1u128 << b;
        }
        TreeNode {
            gaps,
            gens,
            genus: self.genus + 1,
            multiplicity: m,
            conductor: a + 1,
            gens_complete: self.gens_complete && fits,
        }
    }

    /// Children in increasing order of the added gap.
    pub fn children(&self) -> impl Iterator<Item = TreeNode> + '_ {
        BitIter(self.gens).map(|a| self.child(a))
    }
}

struct BitIter(u128);

impl Iterator for BitIter {
    type Item = u32;

    #[inline]
    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let a = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(a)
    }
}

/// Which gapsets an enumeration visits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumFilter {
    pub max_genus: u32,
    pub depth_le: Option<u32>,
    pub depth_eq: Option<u32>,
    pub multiplicity_eq: Option<u32>,
}

impl EnumFilter {
    pub fn new(max_genus: u32) -> Self {
        Self {
            max_genus,
            depth_le: None,
            depth_eq: None,
            multiplicity_eq: None,
        }
    }

    pub fn depth_le(mut self, bound: u32) -> Self {
        self.depth_le = Some(bound);
        self
    }

    pub fn depth_eq(mut self, depth: u32) -> Self {
        self.depth_eq = Some(depth);
        self
    }

    pub fn multiplicity_eq(mut self, m: u32) -> Self {
        self.multiplicity_eq = Some(m);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.depth_le.is_some() && self.depth_eq.is_some() {
            return Err(Error::InvalidFilter(
                "depth_le and depth_eq are mutually exclusive".into(),
            ));
        }
        if self.multiplicity_eq == Some(0) {
            return Err(Error::InvalidFilter("multiplicity must be positive".into()));
        }
        if self.max_genus > MAX_ENUM_GENUS {
            return Err(Error::GenusTooLarge {
                requested: self.max_genus,
                limit: MAX_ENUM_GENUS,
            });
        }
        Ok(())
    }

    /// Depth and multiplicity never decrease away from the root inside the
    /// region that survives pruning, so a failing node rules out its subtree.
    #[inline]
    fn enters(&self, node: &TreeNode) -> bool {
        node.genus <= self.max_genus
            && self
                .depth_le
                .or(self.depth_eq)
                .is_none_or(|b| node.depth() <= b)
            && self.multiplicity_eq.is_none_or(|m| node.multiplicity <= m)
    }

    #[inline]
    pub fn accepts(&self, node: &TreeNode) -> bool {
        self.enters(node)
            && self.depth_eq.is_none_or(|q| node.depth() == q)
            && self.multiplicity_eq.is_none_or(|m| node.multiplicity == m)
    }

    /// Children worth generating: those whose new gap keeps the depth bound.
    #[inline]
    fn window(&self, node: &TreeNode) -> u128 {
        match self.depth_le.or(self.depth_eq) {
            Some(b) => {
                let m = node.multiplicity;
                node.gens & low_mask((b * m).max(m + 1))
            }
            None => node.gens,
        }
    }
}

/// Worker configuration for enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumOptions {
    pub workers: usize,
    pub split_genus: u32,
}

impl Default for EnumOptions {
    fn default() -> Self {
        Self {
            workers: 1,
            split_genus: DEFAULT_SPLIT_GENUS,
        }
    }
}

impl EnumOptions {
    pub fn workers(workers: usize) -> Self {
        Self {
            workers: workers.max(1),
            ..Self::default()
        }
    }

    fn parallel_for(&self, filter: &EnumFilter, start: &TreeNode) -> bool {
        self.workers > 1 && self.split_genus > start.genus && self.split_genus <= filter.max_genus
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| Error::InvalidFilter(format!("cannot start worker pool: {e}")))
    }
}

/// Iterative pre-order DFS from `start`.
///
/// Accepted nodes go to `visit`. Nodes of genus `frontier` (other than the
/// start) are handed to `defer` and not expanded.
fn walk<V, D>(
    start: TreeNode,
    filter: &EnumFilter,
    frontier: Option<u32>,
    mut visit: V,
    mut defer: D,
) -> Result<()>
where
    V: FnMut(&TreeNode),
    D: FnMut(TreeNode),
{
    if !filter.enters(&start) {
        return Ok(());
    }
    if filter.accepts(&start) {
        visit(&start);
    }
    let mut stack: Vec<(TreeNode, u128)> = Vec::with_capacity(filter.max_genus as usize + 1);
    let expand = |node: TreeNode, stack: &mut Vec<(TreeNode, u128)>| -> Result<()> {
        if node.genus < filter.max_genus {
            if !node.gens_complete {
                return Err(Error::GenusTooLarge {
                    requested: filter.max_genus,
                    limit: MAX_ENUM_GENUS,
                });
            }
            stack.push((node, filter.window(&node)));
        }
        Ok(())
    };
    expand(start, &mut stack)?;
    while let Some((node, rest)) = stack.last_mut() {
        if *rest == 0 {
            stack.pop();
            continue;
        }
        let a = rest.trailing_zeros();
        *rest &= *rest - 1;
        let child = node.child(a);
        if !filter.enters(&child) {
            continue;
        }
        if frontier == Some(child.genus) {
            defer(child);
            continue;
        }
        if filter.accepts(&child) {
            visit(&child);
        }
        expand(child, &mut stack)?;
    }
    Ok(())
}

/// Visits every gapset accepted by `filter`, in depth-first order from the
/// root, on the calling thread. Returns the number of visits.
pub fn enumerate<F: FnMut(&Gapset)>(filter: &EnumFilter, mut visit: F) -> Result<u64> {
    enumerate_nodes(filter, |node| visit(&node.to_gapset()))
}

/// Like [`enumerate`], without materializing a [`Gapset`] per visit.
pub fn enumerate_nodes<F: FnMut(&TreeNode)>(filter: &EnumFilter, visit: F) -> Result<u64> {
    enumerate_nodes_from(&TreeNode::root(), filter, visit)
}

pub fn enumerate_nodes_from<F: FnMut(&TreeNode)>(
    start: &TreeNode,
    filter: &EnumFilter,
    mut visit: F,
) -> Result<u64> {
    filter.validate()?;
    let mut visits = 0u64;
    walk(
        *start,
        filter,
        None,
        |node| {
            visits += 1;
            visit(node)
        },
        |_| unreachable!("no frontier"),
    )?;
    Ok(visits)
}

/// Parallel fold over accepted nodes of the subtree at `start`.
///
/// Each worker folds its own subtrees into a fresh `init()` accumulator;
/// results are combined with `merge`, which should be associative and
/// commutative for the result to be schedule-independent.
pub fn fold_from<A, I, V, M>(
    start: &TreeNode,
    filter: &EnumFilter,
    opts: &EnumOptions,
    init: I,
    visit: V,
    merge: M,
) -> Result<A>
where
    A: Send,
    I: Fn() -> A + Sync,
    V: Fn(&mut A, &TreeNode) + Sync,
    M: Fn(A, A) -> A + Sync,
{
    filter.validate()?;
    let mut acc = init();
    if !opts.parallel_for(filter, start) {
        walk(
            *start,
            filter,
            None,
            |n| visit(&mut acc, n),
            |_| unreachable!(),
        )?;
        return Ok(acc);
    }
    let mut roots = Vec::new();
    walk(
        *start,
        filter,
        Some(opts.split_genus),
        |n| visit(&mut acc, n),
        |n| roots.push(n),
    )?;
    let rest = opts.pool()?.install(|| {
        roots
            .par_iter()
            .map(|root| {
                let mut local = init();
                walk(
                    *root,
                    filter,
                    None,
                    |n| visit(&mut local, n),
                    |_| unreachable!(),
                )?;
                Ok(local)
            })
            .try_reduce(&init, |a, b| Ok(merge(a, b)))
    })?;
    Ok(merge(acc, rest))
}

pub fn fold<A, I, V, M>(
    filter: &EnumFilter,
    opts: &EnumOptions,
    init: I,
    visit: V,
    merge: M,
) -> Result<A>
where
    A: Send,
    I: Fn() -> A + Sync,
    V: Fn(&mut A, &TreeNode) + Sync,
    M: Fn(A, A) -> A + Sync,
{
    fold_from(&TreeNode::root(), filter, opts, init, visit, merge)
}

enum Event<T> {
    Item(T),
    Subtree(TreeNode),
}

/// Maps every accepted node, returning results in depth-first order no
/// matter how many workers ran.
pub fn collect_ordered<T, F>(filter: &EnumFilter, opts: &EnumOptions, map: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&TreeNode) -> T + Sync,
{
    filter.validate()?;
    let start = TreeNode::root();
    let mut out = Vec::new();
    if !opts.parallel_for(filter, &start) {
        walk(
            start,
            filter,
            None,
            |n| out.push(map(n)),
            |_| unreachable!(),
        )?;
        return Ok(out);
    }
    let log = RefCell::new(Vec::new());
    walk(
        start,
        filter,
        Some(opts.split_genus),
        |n| log.borrow_mut().push(Event::Item(map(n))),
        |n| log.borrow_mut().push(Event::Subtree(n)),
    )?;
    let events = log.into_inner();
    let roots: Vec<TreeNode> = events
        .iter()
        .filter_map(|e| match e {
            Event::Subtree(n) => Some(*n),
            Event::Item(_) => None,
        })
        .collect();
    let subtrees: Vec<Vec<T>> = opts.pool()?.install(|| {
        roots
            .par_iter()
            .map(|root| {
                let mut local = Vec::new();
                walk(
                    *root,
                    filter,
                    None,
                    |n| local.push(map(n)),
                    |_| unreachable!(),
                )?;
                Ok(local)
            })
            .collect::<Result<_>>()
    })?;
    let mut subtrees = subtrees.into_iter();
    for event in events {
        match event {
            Event::Item(t) => out.push(t),
            Event::Subtree(_) => out.extend(subtrees.next().unwrap()),
        }
    }
    Ok(out)
}

/// Per-genus counters of one enumeration.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CountRow {
    pub total: u64,
    /// Indexed by depth.
    pub by_depth: Vec<u64>,
    /// Indexed by multiplicity.
    pub by_multiplicity: Vec<u64>,
}

impl CountRow {
    fn bump(cells: &mut Vec<u64>, idx: usize, by: u64) -> Option<()> {
        if cells.len() <= idx {
            cells.resize(idx + 1, 0);
        }
        cells[idx] = cells[idx].checked_add(by)?;
        Some(())
    }

    fn merge(&mut self, other: &CountRow) -> Option<()> {
        self.total = self.total.checked_add(other.total)?;
        for (q, &n) in other.by_depth.iter().enumerate() {
            Self::bump(&mut self.by_depth, q, n)?;
        }
        for (m, &n) in other.by_multiplicity.iter().enumerate() {
            Self::bump(&mut self.by_multiplicity, m, n)?;
        }
        Some(())
    }

    pub fn depth(&self, q: u32) -> u64 {
        self.by_depth.get(q as usize).copied().unwrap_or(0)
    }

    pub fn depth_at_most(&self, b: u32) -> u64 {
        self.by_depth.iter().take(b as usize + 1).sum()
    }

    pub fn multiplicity(&self, m: u32) -> u64 {
        self.by_multiplicity.get(m as usize).copied().unwrap_or(0)
    }
}

/// Counts per genus `0..=max_genus`, broken down by depth and multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    rows: Vec<CountRow>,
    overflow: Option<u32>,
}

impl CountTable {
    pub fn new(max_genus: u32) -> Self {
        Self {
            rows: vec![CountRow::default(); max_genus as usize + 1],
            overflow: None,
        }
    }

    #[inline]
    pub fn record(&mut self, node: &TreeNode) {
        let g = node.genus;
        let row = &mut self.rows[g as usize];
        let ok = (|| {
            row.total = row.total.checked_add(1)?;
            CountRow::bump(&mut row.by_depth, node.depth() as usize, 1)?;
            CountRow::bump(&mut row.by_multiplicity, node.multiplicity as usize, 1)
        })();
        if ok.is_none() {
            self.overflow.get_or_insert(g);
        }
    }

    pub fn merge(mut self, other: CountTable) -> CountTable {
        if self.rows.len() < other.rows.len() {
            self.rows.resize(other.rows.len(), CountRow::default());
        }
        for (g, row) in other.rows.iter().enumerate() {
            if self.rows[g].merge(row).is_none() {
                self.overflow.get_or_insert(g as u32);
            }
        }
        self.overflow = match (self.overflow, other.overflow) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self
    }

    pub fn max_genus(&self) -> u32 {
        self.rows.len() as u32 - 1
    }

    pub fn rows(&self) -> &[CountRow] {
        &self.rows
    }

    pub fn row(&self, genus: u32) -> Option<&CountRow> {
        self.rows.get(genus as usize)
    }

    pub fn totals(&self) -> Vec<u64> {
        self.rows.iter().map(|r| r.total).collect()
    }

    /// Largest depth with a nonzero cell anywhere in the table.
    pub fn max_depth(&self) -> u32 {
        self.rows
            .iter()
            .filter_map(|r| r.by_depth.iter().rposition(|&n| n > 0))
            .max()
            .unwrap_or(0) as u32
    }

    pub fn max_multiplicity(&self) -> u32 {
        self.rows
            .iter()
            .filter_map(|r| r.by_multiplicity.iter().rposition(|&n| n > 0))
            .max()
            .unwrap_or(0) as u32
    }

    fn checked(self) -> Result<Self> {
        match self.overflow {
            Some(g) => Err(Error::CounterOverflow(g)),
            None => Ok(self),
        }
    }
}

/// Exact counts for `filter`, single-threaded.
pub fn count(filter: &EnumFilter) -> Result<CountTable> {
    count_with(filter, &EnumOptions::default())
}

pub fn count_with(filter: &EnumFilter, opts: &EnumOptions) -> Result<CountTable> {
    count_from(&TreeNode::root(), filter, opts)
}

/// Counts within the subtree rooted at `start`.
pub fn count_from(start: &TreeNode, filter: &EnumFilter, opts: &EnumOptions) -> Result<CountTable> {
    let max = filter.max_genus;
    fold_from(
        start,
        filter,
        opts,
        || CountTable::new(max),
        |t, n| t.record(n),
        CountTable::merge,
    )?
    .checked()
}
