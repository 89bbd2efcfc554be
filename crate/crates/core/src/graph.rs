//! The refinement graph: gapset filtrations of consecutive genera joined
//! whenever the larger one contains the smaller piece by piece.
//!
//! Tree edges (parent to child) are a subset of these edges; the others are
//! drawn dashed on export.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::Result;
use crate::filtration::Filtration;
use crate::gapset::Gapset;
use crate::intset::IntSet;
use crate::tree::{enumerate_nodes, parent, EnumFilter};

/// `true` when `finer` has genus one more than `coarser` and contains it
/// piecewise, missing trailing pieces being empty.
pub fn is_refinement_edge(coarser: &Filtration, finer: &Filtration) -> bool {
    if finer.genus() != coarser.genus() + 1 {
        return false;
    }
    let m = coarser.multiplicity();
    if !(m..=m + 1).contains(&finer.multiplicity()) {
        return false;
    }
    let empty = IntSet::new();
    let depth = coarser.depth().max(finer.depth()) as usize;
    (0..depth).all(|i| {
        coarser
            .piece(i)
            .unwrap_or(&empty)
            .is_subset(finer.piece(i).unwrap_or(&empty))
    })
}

/// One genus of the graph with its edges to the next.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphLevel {
    pub genus: u32,
    /// Ordered by the corresponding gapsets.
    pub vertices: Vec<Filtration>,
    /// Indices into the next level's vertices, ascending.
    pub edges_up: Vec<Vec<usize>>,
    /// Index of each vertex's tree parent in the previous level.
    pub tree_parent: Vec<Option<usize>>,
}

impl GraphLevel {
    pub fn edge_count(&self) -> usize {
        self.edges_up.iter().map(Vec::len).sum()
    }
}

/// Whether edge `src -> dst` between `levels[g]` and `levels[g+1]` is a
/// tree edge.
pub fn is_tree_edge(levels: &[GraphLevel], g: usize, src: usize, dst: usize) -> bool {
    levels[g + 1].tree_parent[dst] == Some(src)
}

/// Every vertex obtained from `f` by adding one element to one piece.
fn one_step_refinements(f: &Filtration) -> Vec<Filtration> {
    let m = f.multiplicity();
    let mut pieces = f.pieces().to_vec();
    pieces.push(IntSet::new());
    let mut out = Vec::new();
    for i in 0..pieces.len() {
        let candidates: Vec<u32> = if i == 0 {
            vec![m]
        } else {
            pieces[i - 1]
                .iter()
                .filter(|&x| !pieces[i].contains(x))
                .collect()
        };
        for x in candidates {
            let mut next = pieces.clone();
            next[i].insert(x);
            if let Ok(refined) = Filtration::new(next) {
                out.push(refined);
            }
        }
    }
    out
}

/// Levels `0..=g_max`, optionally restricted to depth at most `depth_le`.
pub fn build_graph(g_max: u32, depth_le: Option<u32>) -> Result<Vec<GraphLevel>> {
    let mut filter = EnumFilter::new(g_max);
    filter.depth_le = depth_le;
    let mut by_genus: Vec<Vec<Gapset>> = vec![Vec::new(); g_max as usize + 1];
    enumerate_nodes(&filter, |node| {
        by_genus[node.genus() as usize].push(node.to_gapset())
    })?;
    for level in &mut by_genus {
        level.sort();
    }

    let index: Vec<HashMap<Filtration, usize>> = by_genus
        .iter()
        .map(|level| {
            level
                .iter()
                .enumerate()
                .map(|(i, g)| (Filtration::from(g), i))
                .collect()
        })
        .collect();
    let gapset_index: Vec<HashMap<&Gapset, usize>> = by_genus
        .iter()
        .map(|level| level.iter().enumerate().map(|(i, g)| (g, i)).collect())
        .collect();

    let levels = by_genus
        .iter()
        .enumerate()
        .map(|(g, level)| {
            let vertices: Vec<Filtration> = level.iter().map(Filtration::from).collect();
            let edges_up = vertices
                .iter()
                .map(|f| {
                    let Some(next) = index.get(g + 1) else {
                        return Vec::new();
                    };
                    let mut targets: Vec<usize> = one_step_refinements(f)
                        .iter()
                        .filter_map(|r| next.get(r).copied())
                        .collect();
                    targets.sort_unstable();
                    targets.dedup();
                    targets
                })
                .collect();
            let tree_parent = level
                .iter()
                .map(|gs| {
                    let p = parent(gs).ok()?;
                    gapset_index[g - 1].get(&p).copied()
                })
                .collect();
            GraphLevel {
                genus: g as u32,
                vertices,
                edges_up,
                tree_parent,
            }
        })
        .collect();
    Ok(levels)
}

/// Vertices below the top level without any outgoing edge, as
/// `(genus, index)`.
pub fn leaves(levels: &[GraphLevel]) -> Vec<(u32, usize)> {
    let below_top = levels.len().saturating_sub(1);
    levels[..below_top]
        .iter()
        .flat_map(|l| {
            l.edges_up
                .iter()
                .enumerate()
                .filter(|(_, e)| e.is_empty())
                .map(move |(i, _)| (l.genus, i))
        })
        .collect()
}

/// Non-tree edges as `(coarser, finer)` pairs.
pub fn non_tree_edges(levels: &[GraphLevel]) -> Vec<(Filtration, Filtration)> {
    let mut out = Vec::new();
    for (g, level) in levels.iter().enumerate() {
        for (src, targets) in level.edges_up.iter().enumerate() {
            for &dst in targets {
                if !is_tree_edge(levels, g, src, dst) {
                    out.push((
                        level.vertices[src].clone(),
                        levels[g + 1].vertices[dst].clone(),
                    ));
                }
            }
        }
    }
    out
}

fn label(f: &Filtration) -> String {
    if f.depth() == 0 {
        "∅".into()
    } else {
        f.to_string()
    }
}

/// Graphviz description; tree edges solid, the others dashed.
pub fn export_dot(levels: &[GraphLevel]) -> String {
    let mut out = String::from("digraph gapsets {\n  rankdir=TB;\n");
    for level in levels {
        for (i, f) in level.vertices.iter().enumerate() {
            let _ = writeln!(out, "  g{}_{} [label=\"{}\"];", level.genus, i, label(f));
        }
    }
    for (g, level) in levels.iter().enumerate() {
        for (src, targets) in level.edges_up.iter().enumerate() {
            for &dst in targets {
                let style = if is_tree_edge(levels, g, src, dst) {
                    ""
                } else {
                    " [style=dashed]"
                };
                let _ = writeln!(out, "  g{g}_{src} -> g{}_{dst}{style};", g + 1);
            }
        }
    }
    out.push_str("}\n");
    out
}

fn csv_field(s: &str) -> String {
    if s.contains(',') {
        format!("\"{s}\"")
    } else {
        s.to_string()
    }
}

/// `src_filtration,dst_filtration,is_tree_edge`, one row per edge.
pub fn export_edges_csv(levels: &[GraphLevel]) -> String {
    let mut out = String::from("src_filtration,dst_filtration,is_tree_edge\n");
    for (g, level) in levels.iter().enumerate() {
        for (src, targets) in level.edges_up.iter().enumerate() {
            for &dst in targets {
                let _ = writeln!(
                    out,
                    "{},{},{}",
                    csv_field(&level.vertices[src].to_string()),
                    csv_field(&levels[g + 1].vertices[dst].to_string()),
                    is_tree_edge(levels, g, src, dst)
                );
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtration::parse_filtration;

    fn f(text: &str) -> Filtration {
        parse_filtration(text).unwrap()
    }

    #[test]
    fn refinement_examples() {
        assert!(is_refinement_edge(&f("(1)(1)"), &f("(12)(1)")));
        assert!(is_refinement_edge(&f("(12)(2)"), &f("(12)(12)")));
        assert!(!is_refinement_edge(&f("(12)(1)"), &f("(123)(2)")));
        assert!(is_refinement_edge(&f("(1)"), &f("(1)(1)")));
        assert!(!is_refinement_edge(&f("(1)"), &f("(12)(1)")));
        assert!(!is_refinement_edge(&f("(12)"), &f("(12)")));
    }

    #[test]
    fn genus_one_graph() {
        let levels = build_graph(1, None).unwrap();
        assert_eq!(levels.len(), 2);
        assert_eq!(levels[0].edges_up, vec![vec![0]]);
        assert!(is_tree_edge(&levels, 0, 0, 0));
        let dot = export_dot(&levels);
        assert_eq!(dot.matches("[label=").count(), 2);
        assert_eq!(dot.matches("->").count(), 1);
        assert!(!dot.contains("dashed"));
    }

    #[test]
    fn depth_restricted_levels_are_fibonacci() {
        let levels = build_graph(3, Some(2)).unwrap();
        let sizes: Vec<usize> = levels.iter().map(|l| l.vertices.len()).collect();
        assert_eq!(sizes, vec![1, 1, 2, 3]);
    }

    #[test]
    fn generated_edges_match_pairwise_test() {
        let levels = build_graph(8, None).unwrap();
        for w in levels.windows(2) {
            for (i, a) in w[0].vertices.iter().enumerate() {
                let pairwise: Vec<usize> = w[1]
                    .vertices
                    .iter()
                    .enumerate()
                    .filter(|(_, b)| is_refinement_edge(a, b))
                    .map(|(j, _)| j)
                    .collect();
                assert_eq!(w[0].edges_up[i], pairwise, "edges of {a}");
            }
        }
    }

    #[test]
    fn csv_quotes_wide_filtrations() {
        assert_eq!(csv_field("(1,2)"), "\"(1,2)\"");
        let levels = build_graph(2, None).unwrap();
        let csv = export_edges_csv(&levels);
        assert!(csv.starts_with("src_filtration,dst_filtration,is_tree_edge\n,(1),true\n"));
    }
}
