//! `gapsets`: counts, listings and exhaustive checks over the gapset tree.
//!
//! Exit status is 0 on success, 1 when a verification finds a
//! counterexample and 2 on usage errors.

mod render;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use gapsets::analysis::{
    check_fibonacci_bound, ratio_report, subtree_levels, table_mismatches, N_PRIME,
};
use gapsets::families::{cross_check, shape_oracle_disagreements};
use gapsets::graph::{
    build_graph, export_dot, export_edges_csv, is_refinement_edge, leaves, GraphLevel,
};
use gapsets::growth::{verify_maps, verify_sandwich};
use gapsets::tree::{collect_ordered, count_with, enumerate_nodes, EnumOptions, MAX_ENUM_GENUS};
use gapsets::{format_generators, parse_gap_list, EnumFilter, TreeNode};

use render::{csv, json_lines, or_empty, table};

#[derive(Parser)]
#[command(
    name = "gapsets",
    version,
    about = "Enumerate, count and verify gapsets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count gapsets per genus, with a depth or multiplicity breakdown.
    Count {
        #[command(flatten)]
        shared: Shared,
        #[arg(long, value_enum, default_value_t = Breakdown::Depth)]
        breakdown: Breakdown,
    },
    /// List gapsets one per line.
    Enumerate {
        #[command(flatten)]
        shared: Shared,
    },
    /// Run an exhaustive check up to --max-genus.
    Verify {
        #[arg(value_enum)]
        check: Check,
        #[command(flatten)]
        shared: Shared,
    },
    /// Write the refinement graph as Graphviz or an edge list.
    GraphExport {
        #[command(flatten)]
        shared: Shared,
    },
    /// Ratios n'_{g+1} / n_g and their minimum.
    Ratios {
        #[command(flatten)]
        shared: Shared,
    },
    /// Number of descendants of a gapset at each genus.
    Subtree {
        /// Comma-separated gaps of the subtree root; empty for the whole tree.
        #[arg(long, default_value = "")]
        root: String,
        #[command(flatten)]
        shared: Shared,
    },
}

#[derive(Args)]
struct Shared {
    #[arg(long)]
    max_genus: u32,
    #[arg(long, conflicts_with = "depth_eq")]
    depth_le: Option<u32>,
    #[arg(long)]
    depth_eq: Option<u32>,
    #[arg(long)]
    multiplicity: Option<u32>,
    #[arg(long, env = "GAPSETS_WORKERS", default_value_t = 1,
          value_parser = clap::value_parser!(u32).range(1..))]
    workers: u32,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Order records by genus, then gaps.
    #[arg(long)]
    sort: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Csv,
    Json,
    Dot,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Table => "table",
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Dot => "dot",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Breakdown {
    Depth,
    Multiplicity,
    None,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Check {
    Sandwich,
    Fibonacci,
    Families,
    Graph,
    Alpha,
}

enum Failure {
    Usage(String),
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<gapsets::Error> for Failure {
    fn from(e: gapsets::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// `Err(text)` carries the first counterexample.
type Verdict = Result<(), String>;

type Outcome = Result<Verdict, Failure>;

fn usage<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

impl Shared {
    fn options(&self) -> EnumOptions {
        EnumOptions::workers(self.workers as usize)
    }

    fn formats(&self, cmd: &str, allowed: &[Format]) -> Result<(), Failure> {
        if allowed.contains(&self.format) {
            return Ok(());
        }
        let names: Vec<&str> = allowed.iter().map(|f| f.name()).collect();
        usage(format!(
            "--format {} is not supported by {cmd} (expected one of: {})",
            self.format.name(),
            names.join(", ")
        ))
    }

    /// Rejects the enumeration filters a command ignores.
    fn no_filters(&self, cmd: &str, allow_depth_le: bool) -> Result<(), Failure> {
        let flags = [
            ("--depth-le", self.depth_le.is_some() && !allow_depth_le),
            ("--depth-eq", self.depth_eq.is_some()),
            ("--multiplicity", self.multiplicity.is_some()),
        ];
        match flags.iter().find(|(_, set)| *set) {
            Some((flag, _)) => usage(format!("{flag} is not accepted by {cmd}")),
            None => Ok(()),
        }
    }

    fn genus_range(&self, min: u32, max: u32) -> Result<(), Failure> {
        if (min..=max).contains(&self.max_genus) {
            Ok(())
        } else {
            usage(format!(
                "--max-genus must lie in {min}..={max}, got {}",
                self.max_genus
            ))
        }
    }

    fn filter(&self) -> Result<EnumFilter, Failure> {
        let filter = EnumFilter {
            max_genus: self.max_genus,
            depth_le: self.depth_le,
            depth_eq: self.depth_eq,
            multiplicity_eq: self.multiplicity,
        };
        filter
            .validate()
            .map_err(|e| Failure::Usage(format!("invalid filter flags: {e}")))?;
        Ok(filter)
    }
}

impl Command {
    fn shared(&self) -> &Shared {
        match self {
            Command::Count { shared, .. }
            | Command::Enumerate { shared }
            | Command::Verify { shared, .. }
            | Command::GraphExport { shared }
            | Command::Ratios { shared }
            | Command::Subtree { shared, .. } => shared,
        }
    }

    /// Flag checks that need no computation.
    fn validate(&self) -> Result<(), Failure> {
        use Format::*;
        let s = self.shared();
        match self {
            Command::Count { .. } => {
                s.formats("count", &[Table, Csv, Json])?;
                s.filter().map(drop)
            }
            Command::Enumerate { .. } => {
                s.formats("enumerate", &[Table, Csv, Json])?;
                s.filter().map(drop)
            }
            Command::Verify { check, .. } => {
                s.formats("verify", &[Table, Csv, Json])?;
                s.no_filters("verify", *check == Check::Graph)?;
                let min = if *check == Check::Sandwich { 3 } else { 0 };
                s.genus_range(min, MAX_ENUM_GENUS)
            }
            Command::GraphExport { .. } => {
                s.formats("graph-export", &[Table, Csv, Dot])?;
                s.no_filters("graph-export", true)?;
                s.genus_range(0, MAX_ENUM_GENUS)
            }
            Command::Ratios { .. } => {
                s.formats("ratios", &[Table, Csv, Json])?;
                s.no_filters("ratios", false)?;
                s.genus_range(1, MAX_ENUM_GENUS - 1)
            }
            Command::Subtree { root, .. } => {
                s.formats("subtree", &[Table, Csv, Json])?;
                s.no_filters("subtree", false)?;
                s.genus_range(0, MAX_ENUM_GENUS)?;
                let root =
                    parse_gap_list(root).map_err(|e| Failure::Usage(format!("--root: {e}")))?;
                if root.genus() > s.max_genus {
                    return usage(format!(
                        "--max-genus {} is below the genus {} of --root",
                        s.max_genus,
                        root.genus()
                    ));
                }
                Ok(())
            }
        }
    }

    fn execute(&self, out: &mut dyn Write) -> Outcome {
        match self {
            Command::Count { shared, breakdown } => count(shared, *breakdown, out),
            Command::Enumerate { shared } => enumerate(shared, out),
            Command::Verify { check, shared } => {
                let (text, verdict) = match check {
                    Check::Sandwich => verify_sandwich_cmd(shared)?,
                    Check::Fibonacci => verify_fibonacci_cmd(shared)?,
                    Check::Families => verify_families_cmd(shared)?,
                    Check::Graph => verify_graph_cmd(shared)?,
                    Check::Alpha => verify_alpha_cmd(shared)?,
                };
                out.write_all(text.as_bytes())?;
                Ok(verdict)
            }
            Command::GraphExport { shared } => graph_export(shared, out),
            Command::Ratios { shared } => ratios(shared, out),
            Command::Subtree { root, shared } => subtree(shared, root, out),
        }
    }
}

fn count(s: &Shared, breakdown: Breakdown, out: &mut dyn Write) -> Outcome {
    let counts = count_with(&s.filter()?, &s.options())?;
    let (prefix, width) = match breakdown {
        Breakdown::Depth => ("q", counts.max_depth() as usize + 1),
        Breakdown::Multiplicity => ("m", counts.max_multiplicity() as usize + 1),
        Breakdown::None => ("", 0),
    };
    // Multiplicity starts at 1; depth at 0.
    let first = usize::from(breakdown == Breakdown::Multiplicity);
    let cells = |g: usize| -> Vec<u64> {
        let row = &counts.rows()[g];
        let src = match breakdown {
            Breakdown::Depth => &row.by_depth,
            Breakdown::Multiplicity => &row.by_multiplicity,
            Breakdown::None => return Vec::new(),
        };
        (first..width)
            .map(|i| src.get(i).copied().unwrap_or(0))
            .collect()
    };

    #[derive(Serialize)]
    struct CountJson {
        genus: u32,
        total: u64,
        #[serde(skip_serializing_if = "Option::is_none")]
        by_depth: Option<Vec<u64>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        by_multiplicity: Option<Vec<u64>>,
    }

    let text = match s.format {
        Format::Json => {
            let rows: Vec<CountJson> = counts
                .rows()
                .iter()
                .enumerate()
                .map(|(g, row)| CountJson {
                    genus: g as u32,
                    total: row.total,
                    by_depth: (breakdown == Breakdown::Depth).then(|| cells(g)),
                    by_multiplicity: (breakdown == Breakdown::Multiplicity).then(|| {
                        // Index 0 stands for multiplicity 0, which never occurs.
                        std::iter::once(0).chain(cells(g)).collect()
                    }),
                })
                .collect();
            json_lines(&rows)
        }
        _ => {
            let mut headers = vec!["g".to_string(), "total".to_string()];
            headers.extend((first..width).map(|i| format!("{prefix}{i}")));
            let rows: Vec<Vec<String>> = (0..counts.rows().len())
                .map(|g| {
                    let mut row = vec![g.to_string(), counts.rows()[g].total.to_string()];
                    row.extend(cells(g).iter().map(u64::to_string));
                    row
                })
                .collect();
            if s.format == Format::Csv {
                csv(&headers.join(","), &rows)
            } else {
                let headers: Vec<&str> = headers.iter().map(String::as_str).collect();
                table(&headers, &rows)
            }
        }
    };
    out.write_all(text.as_bytes())?;
    Ok(Ok(()))
}

#[derive(Serialize)]
struct EnumRecord {
    genus: u32,
    depth: u32,
    multiplicity: u32,
    gaps: Vec<u32>,
    filtration: String,
    generators: Vec<u32>,
}

impl EnumRecord {
    fn new(node: &TreeNode) -> Self {
        let gapset = node.to_gapset();
        EnumRecord {
            genus: node.genus(),
            depth: node.depth(),
            multiplicity: node.multiplicity(),
            gaps: gapset.to_vec(),
            filtration: node.to_filtration().to_string(),
            generators: gapset.min_generators(),
        }
    }

    fn gap_list(&self) -> String {
        let gaps: Vec<String> = self.gaps.iter().map(u32::to_string).collect();
        gaps.join(",")
    }

    fn line(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string(self).expect("plain data serializes"),
            _ => format!(
                "{};{};{};{};{};{}",
                self.genus,
                self.depth,
                self.multiplicity,
                self.gap_list(),
                self.filtration,
                format_generators(&self.generators)
            ),
        }
    }
}

fn enumerate(s: &Shared, out: &mut dyn Write) -> Outcome {
    let filter = s.filter()?;
    if s.workers == 1 && !s.sort && s.format != Format::Table {
        // Stream: the serial walk is already in a fixed order.
        let mut err = None;
        enumerate_nodes(&filter, |node| {
            if err.is_none() {
                if let Err(e) = writeln!(out, "{}", EnumRecord::new(node).line(s.format)) {
                    err = Some(e);
                }
            }
        })?;
        return match err {
            Some(e) => Err(e.into()),
            None => Ok(Ok(())),
        };
    }

    let mut records = collect_ordered(&filter, &s.options(), EnumRecord::new)?;
    if s.sort {
        records.sort_by(|a, b| (a.genus, &a.gaps).cmp(&(b.genus, &b.gaps)));
    }
    if s.format == Format::Table {
        let rows: Vec<Vec<String>> = records
            .iter()
            .map(|r| {
                vec![
                    r.genus.to_string(),
                    r.depth.to_string(),
                    r.multiplicity.to_string(),
                    or_empty(r.gap_list()),
                    or_empty(r.filtration.clone()),
                    format_generators(&r.generators),
                ]
            })
            .collect();
        let text = table(&["g", "q", "m", "gaps", "filtration", "generators"], &rows);
        out.write_all(text.as_bytes())?;
    } else {
        for r in &records {
            writeln!(out, "{}", r.line(s.format))?;
        }
    }
    Ok(Ok(()))
}

/// Renders `rows` in the requested format; `json` is one object per row.
fn report<T: Serialize>(
    format: Format,
    headers: &[&str],
    rows: &[Vec<String>],
    json: &[T],
    summary: &str,
) -> String {
    match format {
        Format::Json => json_lines(json),
        Format::Csv => csv(&headers.join(","), rows),
        _ => format!("{}{summary}\n", table(headers, rows)),
    }
}

fn pass_fail(verdict: &Verdict) -> &'static str {
    if verdict.is_ok() {
        "PASS"
    } else {
        "FAIL"
    }
}

fn verify_sandwich_cmd(s: &Shared) -> Result<(String, Verdict), Failure> {
    let rep = verify_sandwich(s.max_genus, &s.options())?;
    let verdict = match rep.failures().next() {
        Some(r) => Err(format!(
            "genus {}: n'_g = {}, |X1| = {}, |X2| = {}, |X3| = {} against n'_(g-1..g-3) = {}, {}, {}",
            r.genus,
            r.n_prime,
            r.x1,
            r.x2,
            r.x3,
            rep.n_prime[r.genus as usize - 1],
            rep.n_prime[r.genus as usize - 2],
            rep.n_prime[r.genus as usize - 3],
        )),
        None => Ok(()),
    };

    #[derive(Serialize)]
    struct Row {
        genus: u32,
        n_prime: u64,
        x1: u64,
        x2: u64,
        x3: u64,
        lower_ok: bool,
        upper_ok: bool,
        classes_ok: bool,
    }
    let json: Vec<Row> = rep
        .rows
        .iter()
        .map(|r| Row {
            genus: r.genus,
            n_prime: r.n_prime,
            x1: r.x1,
            x2: r.x2,
            x3: r.x3,
            lower_ok: r.lower_ok,
            upper_ok: r.upper_ok,
            classes_ok: r.classes_ok,
        })
        .collect();
    let text = match s.format {
        Format::Csv => {
            let mut text = format!("{}\n", gapsets::growth::SandwichRow::CSV_HEADER);
            for r in &rep.rows {
                text.push_str(&r.to_csv());
                text.push('\n');
            }
            text
        }
        _ => {
            let rows: Vec<Vec<String>> = rep
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.genus.to_string(),
                        r.n_prime.to_string(),
                        r.x1.to_string(),
                        r.x2.to_string(),
                        r.x3.to_string(),
                        r.lower_ok.to_string(),
                        r.upper_ok.to_string(),
                        r.classes_ok.to_string(),
                    ]
                })
                .collect();
            let summary = format!("sandwich 3..={}: {}", s.max_genus, pass_fail(&verdict));
            report(
                s.format,
                &[
                    "g",
                    "n'",
                    "x1",
                    "x2",
                    "x3",
                    "lower_ok",
                    "upper_ok",
                    "classes_ok",
                ],
                &rows,
                &json,
                &summary,
            )
        }
    };
    Ok((text, verdict))
}

fn verify_fibonacci_cmd(s: &Shared) -> Result<(String, Verdict), Failure> {
    let counts = count_with(&EnumFilter::new(s.max_genus).depth_le(3), &s.options())?;
    let rows = check_fibonacci_bound(&counts, s.max_genus)?;
    let mismatches = table_mismatches(&counts);
    let verdict = if let Some(r) = rows.iter().find(|r| !r.ok()) {
        Err(format!(
            "genus {}: |q<=2| = {} (F = {}), n'_g = {} outside [{}, {}]",
            r.genus, r.depth_le_2, r.fib_next, r.n_prime, r.lower, r.upper
        ))
    } else if let Some((g, got, want)) = mismatches.first() {
        Err(format!(
            "genus {g}: enumerated n'_g = {got}, tabulated {want}"
        ))
    } else {
        Ok(())
    };

    #[derive(Serialize)]
    struct Row {
        genus: u32,
        depth_le_2: u64,
        fib_next: u64,
        n_prime: u64,
        lower: u64,
        upper: u64,
        fib_ok: bool,
        bounds_ok: Option<bool>,
        table_ok: bool,
    }
    let json: Vec<Row> = rows
        .iter()
        .map(|r| Row {
            genus: r.genus,
            depth_le_2: r.depth_le_2,
            fib_next: r.fib_next,
            n_prime: r.n_prime,
            lower: r.lower,
            upper: r.upper,
            fib_ok: r.fib_ok,
            bounds_ok: r.bounds_ok,
            table_ok: N_PRIME[r.genus as usize] == r.n_prime,
        })
        .collect();
    let cells: Vec<Vec<String>> = json
        .iter()
        .map(|r| {
            vec![
                r.genus.to_string(),
                r.depth_le_2.to_string(),
                r.fib_next.to_string(),
                r.n_prime.to_string(),
                r.lower.to_string(),
                r.upper.to_string(),
                r.fib_ok.to_string(),
                r.bounds_ok.map_or("-".into(), |b| b.to_string()),
                r.table_ok.to_string(),
            ]
        })
        .collect();
    let summary = format!("fibonacci 0..={}: {}", s.max_genus, pass_fail(&verdict));
    let text = report(
        s.format,
        &[
            "g",
            "depth_le_2",
            "fib_next",
            "n_prime",
            "lower",
            "upper",
            "fib_ok",
            "bounds_ok",
            "table_ok",
        ],
        &cells,
        &json,
        &summary,
    );
    Ok((text, verdict))
}

/// Range of the closed-form versus direct-check sweep.
const SHAPE_A_MAX: u32 = 12;
const SHAPE_BC_MAX: u32 = 14;

fn verify_families_cmd(s: &Shared) -> Result<(String, Verdict), Failure> {
    let mut rows = cross_check(3, s.max_genus)?;
    rows.extend(cross_check(4, s.max_genus)?);
    let disagreements = shape_oracle_disagreements(SHAPE_A_MAX, SHAPE_BC_MAX);
    let verdict = if let Some(r) = rows.iter().find(|r| !r.matches()) {
        Err(format!("m = {}, g = {}: {}", r.m, r.g, r.discrepancies[0]))
    } else if let Some(shape) = disagreements.first() {
        Err(format!(
            "closed form disagrees on {}",
            shape.to_filtration()
        ))
    } else {
        Ok(())
    };

    #[derive(Serialize)]
    struct Row {
        m: u32,
        g: u32,
        closed_form_count: usize,
        bruteforce_count: usize,
        matches: bool,
    }
    let json: Vec<Row> = rows
        .iter()
        .map(|r| Row {
            m: r.m,
            g: r.g,
            closed_form_count: r.closed_form_count,
            bruteforce_count: r.bruteforce_count,
            matches: r.matches(),
        })
        .collect();
    let text = match s.format {
        Format::Csv => {
            let mut text = format!("{}\n", gapsets::families::FamilyRow::CSV_HEADER);
            for r in &rows {
                text.push_str(&r.to_csv());
                text.push('\n');
            }
            text
        }
        _ => {
            let cells: Vec<Vec<String>> = json
                .iter()
                .map(|r| {
                    vec![
                        r.m.to_string(),
                        r.g.to_string(),
                        r.closed_form_count.to_string(),
                        r.bruteforce_count.to_string(),
                        r.matches.to_string(),
                    ]
                })
                .collect();
            let summary = format!(
                "families m=3,4 0..={} and shapes a<={SHAPE_A_MAX}, b,c<={SHAPE_BC_MAX}: {}",
                s.max_genus,
                pass_fail(&verdict)
            );
            report(
                s.format,
                &["m", "g", "closed_form", "bruteforce", "match"],
                &cells,
                &json,
                &summary,
            )
        }
    };
    Ok((text, verdict))
}

/// First structural problem in the graph: a leaf below the top level, a
/// tree edge missing from the graph, or an edge that is not a refinement.
fn graph_problem(levels: &[GraphLevel]) -> Option<String> {
    if let Some(&(g, i)) = leaves(levels).first() {
        return Some(format!(
            "leaf at genus {g}: {}",
            levels[g as usize].vertices[i]
        ));
    }
    for (g, level) in levels.iter().enumerate().skip(1) {
        for (i, parent) in level.tree_parent.iter().enumerate() {
            let present = parent.is_some_and(|p| levels[g - 1].edges_up[p].contains(&i));
            if !present {
                return Some(format!("tree edge into {} missing", level.vertices[i]));
            }
        }
    }
    for (g, level) in levels.iter().enumerate() {
        for (src, targets) in level.edges_up.iter().enumerate() {
            for &dst in targets {
                let (a, b) = (&level.vertices[src], &levels[g + 1].vertices[dst]);
                if !is_refinement_edge(a, b) {
                    return Some(format!("edge {a} -> {b} is not a refinement"));
                }
            }
        }
    }
    None
}

#[derive(Serialize)]
struct LevelSummary {
    genus: u32,
    vertices: usize,
    edges: usize,
    dashed: usize,
}

fn level_summaries(levels: &[GraphLevel]) -> Vec<LevelSummary> {
    levels
        .iter()
        .map(|l| LevelSummary {
            genus: l.genus,
            vertices: l.vertices.len(),
            edges: l.edge_count(),
            // Every vertex above the root has exactly one tree edge in.
            dashed: l.edge_count()
                - levels
                    .get(l.genus as usize + 1)
                    .map_or(0, |next| next.tree_parent.iter().flatten().count()),
        })
        .collect()
}

fn summary_cells(summaries: &[LevelSummary]) -> Vec<Vec<String>> {
    summaries
        .iter()
        .map(|r| {
            vec![
                r.genus.to_string(),
                r.vertices.to_string(),
                r.edges.to_string(),
                r.dashed.to_string(),
            ]
        })
        .collect()
}

fn verify_graph_cmd(s: &Shared) -> Result<(String, Verdict), Failure> {
    let levels = build_graph(s.max_genus, s.depth_le)?;
    let verdict = graph_problem(&levels).map_or(Ok(()), Err);
    let summaries = level_summaries(&levels);
    let summary = format!("graph 0..={}: {}", s.max_genus, pass_fail(&verdict));
    let text = report(
        s.format,
        &["g", "vertices", "edges_up", "dashed"],
        &summary_cells(&summaries),
        &summaries,
        &summary,
    );
    Ok((text, verdict))
}

fn verify_alpha_cmd(s: &Shared) -> Result<(String, Verdict), Failure> {
    let check = verify_maps(s.max_genus)?;
    let verdict = match &check.violation {
        Some(v) => Err(format!("{}: {}", v.property, v.filtration)),
        None => Ok(()),
    };

    #[derive(Serialize)]
    struct Row {
        max_genus: u32,
        objects: usize,
        passed: bool,
    }
    let json = [Row {
        max_genus: check.g_max,
        objects: check.objects,
        passed: verdict.is_ok(),
    }];
    let cells = vec![vec![
        check.g_max.to_string(),
        check.objects.to_string(),
        verdict.is_ok().to_string(),
    ]];
    let summary = format!("alpha maps 0..={}: {}", s.max_genus, pass_fail(&verdict));
    let text = report(
        s.format,
        &["max_genus", "objects", "passed"],
        &cells,
        &json,
        &summary,
    );
    Ok((text, verdict))
}

fn graph_export(s: &Shared, out: &mut dyn Write) -> Outcome {
    let levels = build_graph(s.max_genus, s.depth_le)?;
    let text = match s.format {
        Format::Dot => export_dot(&levels),
        Format::Csv => export_edges_csv(&levels),
        _ => table(
            &["g", "vertices", "edges_up", "dashed"],
            &summary_cells(&level_summaries(&levels)),
        ),
    };
    out.write_all(text.as_bytes())?;
    Ok(Ok(()))
}

fn ratios(s: &Shared, out: &mut dyn Write) -> Outcome {
    let rep = ratio_report(s.max_genus, &s.options())?;

    #[derive(Serialize)]
    struct Row {
        genus: u32,
        n_g: u64,
        n_prime_next: u64,
        ratio: String,
        exact: String,
    }
    let json: Vec<Row> = rep
        .rows
        .iter()
        .map(|r| Row {
            genus: r.genus,
            n_g: r.n_g,
            n_prime_next: r.n_prime_next,
            ratio: r.ratio_display(),
            exact: r.ratio.to_string(),
        })
        .collect();
    let text = match s.format {
        Format::Json => json_lines(&json),
        _ => {
            let cells: Vec<Vec<String>> = json
                .iter()
                .map(|r| {
                    vec![
                        r.genus.to_string(),
                        r.n_g.to_string(),
                        r.n_prime_next.to_string(),
                        r.ratio.clone(),
                    ]
                })
                .collect();
            if s.format == Format::Csv {
                csv("g,n_g,n_prime_next,ratio", &cells)
            } else {
                let min = rep.minimum();
                format!(
                    "{}minimum at g = {}: {}\n",
                    table(&["g", "n_g", "n'_(g+1)", "ratio"], &cells),
                    min.genus,
                    min.ratio_display()
                )
            }
        }
    };
    out.write_all(text.as_bytes())?;
    Ok(Ok(()))
}

fn subtree(s: &Shared, root: &str, out: &mut dyn Write) -> Outcome {
    let root = parse_gap_list(root)?;
    let levels = subtree_levels(&root, s.max_genus, &s.options())?;

    #[derive(Serialize)]
    struct Row {
        level: u32,
        count: u64,
        nondecreasing: bool,
    }
    let json: Vec<Row> = levels
        .iter()
        .map(|l| Row {
            level: l.genus,
            count: l.count,
            nondecreasing: l.nondecreasing,
        })
        .collect();
    let cells: Vec<Vec<String>> = json
        .iter()
        .map(|r| {
            vec![
                r.level.to_string(),
                r.count.to_string(),
                r.nondecreasing.to_string(),
            ]
        })
        .collect();
    let text = match s.format {
        Format::Json => json_lines(&json),
        Format::Csv => csv("level,count,nondecreasing", &cells),
        _ => table(&["g", "count", "nondecreasing"], &cells),
    };
    out.write_all(text.as_bytes())?;
    Ok(Ok(()))
}

/// Runs `command` into `path`, removing the file unless the run succeeds.
fn run_to_file(command: &Command, path: &Path) -> Result<Verdict, Failure> {
    let result = (|| {
        let mut w = BufWriter::new(File::create(path)?);
        let verdict = command.execute(&mut w)?;
        w.flush()?;
        Ok(verdict)
    })();
    if !matches!(result, Ok(Ok(()))) {
        let _ = std::fs::remove_file(path);
    }
    result
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = &cli.command;
    let result = command
        .validate()
        .and_then(|()| match &command.shared().output {
            Some(path) => run_to_file(command, path),
            None => {
                let mut w = BufWriter::new(io::stdout().lock());
                let verdict = command.execute(&mut w)?;
                w.flush()?;
                Ok(verdict)
            }
        });
    match result {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(counterexample)) => {
            eprintln!("verification failed: {counterexample}");
            ExitCode::from(1)
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
