//! Command-line surface: argument parsing, catalog cache handling, and
//! report formatting for all engine capabilities.
//!
//! Exit codes: 0 success/verified, 1 verification failure, 2 input error,
//! 3 cap or resource error. All JSON output is deterministic for a fixed
//! configuration; wall-clock timings appear only in table output.

use std::collections::BTreeMap;
use std::env;
use std::fmt::Write as _;
use std::fs;
use std::io::BufReader;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cube::{Vertex, VertexSet};
use crate::geometry::{
    classify_triple, enumerate_rectangles, generate_subcube, recognize_subcube,
    recover_descriptor, TripleClass,
};
use crate::matroid::{
    classify_hyperplane, enumerate_hyperplanes, read_catalog, write_catalog, HyperplaneCatalog,
    HyperplaneKind,
};
use crate::normalize::{normalize, uniqueness_check, verify_facet_family};
use crate::orientation::{aff_orientation, family_r, read_orientation, SignedRectangle};
use crate::reconstruct::{propagate, DeterminacyReport};
use crate::signed::orthogonal;
use crate::{Error, Result};

/// Environment variable overriding the default cache directory.
pub const ENV_CACHE_DIR: &str = "CUBE_OM_CACHE_DIR";

const DEFAULT_CACHE_DIR: &str = "cube_om_cache";

#[derive(Parser, Debug)]
#[command(
    name = "cube-om",
    about = "Exact engine for the oriented matroid of the n-cube vertex set",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,

    /// Catalog cache file (overrides the cache directory).
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,

    /// Rebuild a stale or corrupt cache instead of rejecting it.
    #[arg(long, global = true)]
    pub rebuild_cache: bool,

    /// Seed for randomized suites (fixed default keeps runs reproducible).
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Worker threads for enumeration and propagation (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    /// Enable the exhaustive fallbacks (per-support sign search, n <= 4;
    /// exhaustive uniqueness loop in selftest).
    #[arg(long, global = true)]
    pub exhaustive: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Enumerate the hyperplane catalog and rectangle family, write the
    /// catalog cache, and report structure counts.
    Enumerate {
        #[arg(long)]
        n: usize,
    },
    /// List the rectangles (rank-3 circuit supports) of C^n.
    Rectangles {
        #[arg(long)]
        n: usize,
    },
    /// Classify the affine plane through three vertices (sign strings like +-+).
    ClassifyTriple {
        v: String,
        v1: String,
        v2: String,
        /// Expected dimension (checked against the sign strings).
        #[arg(long)]
        n: Option<usize>,
    },
    /// Recognize a vertex set as a subcube and recover its descriptor.
    Subcube {
        /// Vertices as sign strings, e.g. +++ +-- -++ ---.
        #[arg(required = true)]
        vertices: Vec<String>,
    },
    /// Normalize an orientation file: find the reorientation set carrying it
    /// onto the orientation with all facet cocircuits positive.
    Normalize {
        #[arg(long)]
        n: usize,
        /// Orientation file (line-delimited JSON records).
        #[arg(long)]
        input: PathBuf,
        /// Also write the result record to this file.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Reconstruct cocircuit signatures from the signed rectangles and
    /// report per-support determinacy (experiment mode: any verdict).
    Reconstruct {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = RectSubset::All)]
        rect_subset: RectSubset,
    },
    /// Like reconstruct, but exit 0 only when every support is determined
    /// and the recovered orientation is the affine one.
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = RectSubset::All)]
        rect_subset: RectSubset,
    },
    /// Run the built-in acceptance suites at small dimensions.
    Selftest {
        /// Cap the suite dimension (default 4).
        #[arg(long)]
        n: Option<usize>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum RectSubset {
    /// Every rectangle.
    All,
    /// Only the axis-aligned ones (both blocks singletons).
    Faces,
}

impl RectSubset {
    fn as_str(&self) -> &'static str {
        match self {
            RectSubset::All => "all",
            RectSubset::Faces => "faces",
        }
    }
}

/// What a command run produced: text for stdout/stderr plus the exit code.
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub exit: u8,
}

impl Outcome {
    fn ok(stdout: String) -> Outcome {
        Outcome {
            stdout,
            stderr: String::new(),
            exit: 0,
        }
    }

    fn with_exit(stdout: String, exit: u8) -> Outcome {
        Outcome {
            stdout,
            stderr: String::new(),
            exit,
        }
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::DimensionOutOfRange { .. } => 3,
        Error::NotNormalizable | Error::NotAnOrientation(_) => 1,
        _ => 2,
    }
}

/// Runs a parsed command line to completion, mapping errors to exit codes.
pub fn run(cli: Cli) -> Outcome {
    let dispatch = || match execute(&cli) {
        Ok(outcome) => outcome,
        Err(err) => Outcome {
            stdout: String::new(),
            stderr: format!("error: {err}\n"),
            exit: exit_code_for(&err),
        },
    };
    match cli.jobs {
        Some(jobs) => match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
            Ok(pool) => pool.install(dispatch),
            Err(e) => Outcome {
                stdout: String::new(),
                stderr: format!("error: cannot build a {jobs}-thread pool: {e}\n"),
                exit: 2,
            },
        },
        None => dispatch(),
    }
}

fn execute(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Enumerate { n } => cmd_enumerate(cli, *n),
        Command::Rectangles { n } => cmd_rectangles(cli, *n),
        Command::ClassifyTriple { v, v1, v2, n } => cmd_classify_triple(cli, v, v1, v2, *n),
        Command::Subcube { vertices } => cmd_subcube(cli, vertices),
        Command::Normalize { n, input, output } => cmd_normalize(cli, *n, input, output.as_ref()),
        Command::Reconstruct { n, rect_subset } => {
            cmd_reconstruct(cli, *n, *rect_subset, false)
        }
        Command::Verify { n, rect_subset } => cmd_reconstruct(cli, *n, *rect_subset, true),
        Command::Selftest { n } => cmd_selftest(cli, *n),
    }
}

/// Resolves the cache file for dimension `n`: the --cache flag, then the
/// cache directory from the environment, then (only when `persist` is set)
/// the default cache directory.
fn cache_path(cli: &Cli, n: usize, persist: bool) -> Option<PathBuf> {
    if let Some(path) = &cli.cache {
        return Some(path.clone());
    }
    if let Some(dir) = env::var_os(ENV_CACHE_DIR) {
        return Some(PathBuf::from(dir).join(format!("catalog_n{n}.jsonl")));
    }
    persist.then(|| PathBuf::from(DEFAULT_CACHE_DIR).join(format!("catalog_n{n}.jsonl")))
}

/// Loads a validated catalog from the resolved cache file, or builds one.
/// An existing cache that fails validation is rejected, never silently
/// rebuilt; pass --rebuild-cache to overwrite it.
fn obtain_catalog(cli: &Cli, n: usize, persist: bool) -> Result<(HyperplaneCatalog, Option<PathBuf>)> {
    match cache_path(cli, n, persist) {
        Some(path) => {
            if path.exists() && !cli.rebuild_cache {
                let file = BufReader::new(fs::File::open(&path)?);
                let catalog = read_catalog(file)?;
                if catalog.n != n {
                    return Err(Error::CacheMismatch(format!(
                        "cache {} is for n={}, requested n={}",
                        path.display(),
                        catalog.n,
                        n
                    )));
                }
                Ok((catalog, Some(path)))
            } else {
                let catalog = enumerate_hyperplanes(n, None)?;
                if let Some(parent) = path.parent() {
                    if !parent.as_os_str().is_empty() {
                        fs::create_dir_all(parent)?;
                    }
                }
                let mut buf = Vec::new();
                write_catalog(&catalog, &mut buf)?;
                fs::write(&path, buf)?;
                Ok((catalog, Some(path)))
            }
        }
        None => Ok((enumerate_hyperplanes(n, None)?, None)),
    }
}

fn render<T: Serialize>(format: Format, report: &T, table: String, csv: String) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string(report).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Csv => csv,
        Format::Table => table,
    }
}

fn parse_vertex(s: &str, expected_n: Option<usize>) -> Result<(Vertex, usize)> {
    let (v, n) = Vertex::from_signs(s)?;
    if let Some(expected) = expected_n {
        if n != expected {
            return Err(Error::InvalidInput(format!(
                "vertex {s:?} has dimension {n}, expected {expected}"
            )));
        }
    }
    Ok((v, n))
}

fn block_indices(blocks: &[crate::CoordSet]) -> Vec<Vec<usize>> {
    blocks.iter().map(|b| b.indices()).collect()
}

fn format_block(indices: &[usize]) -> String {
    let inner: Vec<String> = indices.iter().map(|i| i.to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

#[derive(Serialize)]
struct EnumerateReport {
    n: usize,
    hyperplanes: usize,
    facets: usize,
    skew_facets: usize,
    other: usize,
    size_histogram: BTreeMap<usize, usize>,
    rectangles: usize,
    cache: Option<String>,
}

fn cmd_enumerate(cli: &Cli, n: usize) -> Result<Outcome> {
    let (catalog, path) = obtain_catalog(cli, n, true)?;
    let mut facets = 0;
    let mut skew_facets = 0;
    let mut other = 0;
    let mut size_histogram: BTreeMap<usize, usize> = BTreeMap::new();
    for h in &catalog.entries {
        match classify_hyperplane(h) {
            HyperplaneKind::Facet { .. } => facets += 1,
            HyperplaneKind::SkewFacet { .. } => skew_facets += 1,
            HyperplaneKind::Other => other += 1,
        }
        *size_histogram.entry(h.points.len()).or_insert(0) += 1;
    }
    let rectangles = enumerate_rectangles(n)?.len();
    let report = EnumerateReport {
        n,
        hyperplanes: catalog.len(),
        facets,
        skew_facets,
        other,
        size_histogram,
        rectangles,
        cache: path.as_ref().map(|p| p.display().to_string()),
    };

    let mut table = String::new();
    writeln!(table, "dimension       {n}").unwrap();
    writeln!(table, "hyperplanes     {}", report.hyperplanes).unwrap();
    writeln!(table, "  facets        {facets}").unwrap();
    writeln!(table, "  skew-facets   {skew_facets}").unwrap();
    writeln!(table, "  other         {other}").unwrap();
    for (size, count) in &report.size_histogram {
        writeln!(table, "  size {size:<3}      {count}").unwrap();
    }
    writeln!(table, "rectangles      {rectangles}").unwrap();
    if let Some(p) = &report.cache {
        writeln!(table, "cache           {p}").unwrap();
    }

    let histogram: Vec<String> = report
        .size_histogram
        .iter()
        .map(|(s, c)| format!("{s}:{c}"))
        .collect();
    let csv = format!(
        "n,hyperplanes,facets,skew_facets,other,rectangles,size_histogram\n{},{},{},{},{},{},{}\n",
        n,
        report.hyperplanes,
        facets,
        skew_facets,
        other,
        rectangles,
        histogram.join(";")
    );
    Ok(Outcome::ok(render(cli.format, &report, table, csv)))
}

#[derive(Serialize)]
struct RectangleRecord {
    base: String,
    blocks: Vec<Vec<usize>>,
}

#[derive(Serialize)]
struct RectanglesReport {
    n: usize,
    count: usize,
    rectangles: Vec<RectangleRecord>,
}

fn cmd_rectangles(cli: &Cli, n: usize) -> Result<Outcome> {
    let rects = enumerate_rectangles(n)?;
    let report = RectanglesReport {
        n,
        count: rects.len(),
        rectangles: rects
            .iter()
            .map(|r| RectangleRecord {
                base: r.base().signs(n),
                blocks: block_indices(r.descriptor().blocks()),
            })
            .collect(),
    };

    let mut table = String::new();
    writeln!(table, "dimension       {n}").unwrap();
    writeln!(table, "rectangles      {}", report.count).unwrap();
    for r in &report.rectangles {
        writeln!(
            table,
            "  {}  {}  {}",
            r.base,
            format_block(&r.blocks[0]),
            format_block(&r.blocks[1])
        )
        .unwrap();
    }

    let mut csv = String::from("base,block_a,block_b\n");
    for r in &report.rectangles {
        let a: Vec<String> = r.blocks[0].iter().map(|i| i.to_string()).collect();
        let b: Vec<String> = r.blocks[1].iter().map(|i| i.to_string()).collect();
        writeln!(csv, "{},{},{}", r.base, a.join("+"), b.join("+")).unwrap();
    }
    Ok(Outcome::ok(render(cli.format, &report, table, csv)))
}

#[derive(Serialize)]
struct ClassifyTripleReport {
    n: usize,
    v: String,
    v1: String,
    v2: String,
    class: String,
    fourth: Option<String>,
    reversal_first: Vec<usize>,
    reversal_second: Vec<usize>,
}

fn cmd_classify_triple(
    cli: &Cli,
    v: &str,
    v1: &str,
    v2: &str,
    n_flag: Option<usize>,
) -> Result<Outcome> {
    let (v0, n) = parse_vertex(v, n_flag)?;
    let (w1, _) = parse_vertex(v1, Some(n))?;
    let (w2, _) = parse_vertex(v2, Some(n))?;
    let class = classify_triple(v0, w1, w2)?;
    let class_name = match class {
        TripleClass::DisjointCompletion { .. } => "disjoint-completion",
        TripleClass::NestedCompletion { .. } => "nested-completion",
        TripleClass::NoFourthPoint => "no-fourth-point",
    };
    let report = ClassifyTripleReport {
        n,
        v: v0.signs(n),
        v1: w1.signs(n),
        v2: w2.signs(n),
        class: class_name.to_string(),
        fourth: class.fourth().map(|f| f.signs(n)),
        reversal_first: v0.reversal_to(w1).indices(),
        reversal_second: v0.reversal_to(w2).indices(),
    };

    let mut table = String::new();
    writeln!(table, "dimension       {n}").unwrap();
    writeln!(table, "triple          {} {} {}", report.v, report.v1, report.v2).unwrap();
    writeln!(
        table,
        "reversal sets   {} {}",
        format_block(&report.reversal_first),
        format_block(&report.reversal_second)
    )
    .unwrap();
    writeln!(table, "class           {}", report.class).unwrap();
    writeln!(
        table,
        "fourth vertex   {}",
        report.fourth.as_deref().unwrap_or("none")
    )
    .unwrap();

    let csv = format!(
        "n,v,v1,v2,class,fourth\n{},{},{},{},{},{}\n",
        n,
        report.v,
        report.v1,
        report.v2,
        report.class,
        report.fourth.as_deref().unwrap_or("")
    );
    Ok(Outcome::ok(render(cli.format, &report, table, csv)))
}

#[derive(Serialize)]
struct SubcubeReport {
    n: usize,
    size: usize,
    subcube: bool,
    k: Option<u32>,
    base: Option<String>,
    blocks: Option<Vec<Vec<usize>>>,
}

fn cmd_subcube(cli: &Cli, vertices: &[String]) -> Result<Outcome> {
    let (_, n) = parse_vertex(&vertices[0], None)?;
    let mut set = VertexSet::empty(n);
    for s in vertices {
        let (v, _) = parse_vertex(s, Some(n))?;
        set.insert(v);
    }
    let k = recognize_subcube(&set);
    let descriptor = if k.is_some() {
        Some(recover_descriptor(&set)?)
    } else {
        None
    };
    if let Some(d) = &descriptor {
        debug_assert_eq!(generate_subcube(d)?, set);
    }
    let report = SubcubeReport {
        n,
        size: set.len(),
        subcube: k.is_some(),
        k,
        base: descriptor.as_ref().map(|d| d.base().signs(n)),
        blocks: descriptor.as_ref().map(|d| block_indices(d.blocks())),
    };

    let mut table = String::new();
    writeln!(table, "dimension       {n}").unwrap();
    writeln!(table, "vertices        {}", report.size).unwrap();
    writeln!(table, "subcube         {}", report.subcube).unwrap();
    if let Some(k) = report.k {
        writeln!(table, "k               {k}").unwrap();
        writeln!(table, "base            {}", report.base.as_deref().unwrap()).unwrap();
        let blocks: Vec<String> = report
            .blocks
            .as_ref()
            .unwrap()
            .iter()
            .map(|b| format_block(b))
            .collect();
        writeln!(table, "blocks          {}", blocks.join(" ")).unwrap();
    }

    let blocks_csv = report
        .blocks
        .as_ref()
        .map(|bs| {
            bs.iter()
                .map(|b| {
                    b.iter()
                        .map(|i| i.to_string())
                        .collect::<Vec<_>>()
                        .join("+")
                })
                .collect::<Vec<_>>()
                .join(";")
        })
        .unwrap_or_default();
    let csv = format!(
        "n,size,subcube,k,base,blocks\n{},{},{},{},{},{}\n",
        n,
        report.size,
        report.subcube,
        report.k.map(|k| k.to_string()).unwrap_or_default(),
        report.base.as_deref().unwrap_or(""),
        blocks_csv
    );
    Ok(Outcome::ok(render(cli.format, &report, table, csv)))
}

#[derive(Serialize)]
struct NormalizeRecord {
    #[serde(rename = "A")]
    a: String,
    branch: String,
    verified: bool,
}

fn cmd_normalize(
    cli: &Cli,
    n: usize,
    input: &PathBuf,
    output: Option<&PathBuf>,
) -> Result<Outcome> {
    let (catalog, _) = obtain_catalog(cli, n, false)?;
    let file = BufReader::new(fs::File::open(input)?);
    let orientation = read_orientation(file, &catalog)?;
    let result = normalize(&orientation, &catalog)?;
    let verified = verify_facet_family(&result.normalized, &catalog)?;
    let record = NormalizeRecord {
        a: result.reorientation.to_hex(),
        branch: result.branch.as_str().to_string(),
        verified,
    };
    let json = serde_json::to_string(&record).expect("record serializes");
    if let Some(path) = output {
        fs::write(path, format!("{json}\n"))?;
    }

    let mut table = String::new();
    writeln!(table, "dimension       {n}").unwrap();
    writeln!(table, "reorientation   {}", record.a).unwrap();
    writeln!(
        table,
        "touched         {} of {} vertices",
        result.reorientation.len(),
        1 << n
    )
    .unwrap();
    writeln!(table, "branch          {}", record.branch).unwrap();
    writeln!(table, "verified        {verified}").unwrap();

    let csv = format!(
        "A,branch,verified\n{},{},{}\n",
        record.a, record.branch, verified
    );
    let stdout = render(cli.format, &record, table, csv);
    Ok(Outcome::with_exit(stdout, u8::from(!verified)))
}

#[derive(Serialize)]
struct ReconstructionRecord {
    n: usize,
    supports_total: usize,
    determined: usize,
    underdetermined: usize,
    inconsistent: usize,
    rectangles: usize,
    rect_subset: String,
    verdict: String,
}

fn rect_family(n: usize, subset: RectSubset) -> Result<Vec<SignedRectangle>> {
    let all = family_r(n)?;
    Ok(match subset {
        RectSubset::All => all,
        RectSubset::Faces => all
            .into_iter()
            .filter(|r| {
                let (a, b) = r.rect.blocks();
                a.len() == 1 && b.len() == 1
            })
            .collect(),
    })
}

fn cmd_reconstruct(cli: &Cli, n: usize, subset: RectSubset, gate: bool) -> Result<Outcome> {
    let started = Instant::now();
    let (catalog, _) = obtain_catalog(cli, n, false)?;
    let rects = rect_family(n, subset)?;
    let report: DeterminacyReport = propagate(&catalog, &rects, cli.exhaustive)?;
    let wall_time_ms = started.elapsed().as_millis();
    let record = ReconstructionRecord {
        n,
        supports_total: report.statuses.len(),
        determined: report.determined(),
        underdetermined: report.underdetermined(),
        inconsistent: report.inconsistent(),
        rectangles: rects.len(),
        rect_subset: subset.as_str().to_string(),
        verdict: report.verdict.as_str().to_string(),
    };

    let mut table = String::new();
    writeln!(table, "dimension       {n}").unwrap();
    writeln!(table, "supports        {}", record.supports_total).unwrap();
    writeln!(table, "determined      {}", record.determined).unwrap();
    writeln!(table, "underdetermined {}", record.underdetermined).unwrap();
    writeln!(table, "inconsistent    {}", record.inconsistent).unwrap();
    writeln!(
        table,
        "rectangles      {} ({})",
        record.rectangles, record.rect_subset
    )
    .unwrap();
    writeln!(table, "verdict         {}", record.verdict).unwrap();
    writeln!(table, "wall time       {wall_time_ms} ms").unwrap();

    let csv = format!(
        "n,supports_total,determined,underdetermined,inconsistent,rectangles,rect_subset,verdict\n{},{},{},{},{},{},{},{}\n",
        n,
        record.supports_total,
        record.determined,
        record.underdetermined,
        record.inconsistent,
        record.rectangles,
        record.rect_subset,
        record.verdict
    );
    let stdout = render(cli.format, &record, table, csv);
    let exit = if gate && record.verdict != "verified" { 1 } else { 0 };
    Ok(Outcome::with_exit(stdout, exit))
}

#[derive(Serialize)]
struct SuiteResult {
    name: String,
    cases: usize,
    passed: bool,
}

#[derive(Serialize)]
struct SelftestReport {
    n_max: usize,
    seed: u64,
    exhaustive: bool,
    suites: Vec<SuiteResult>,
    all_passed: bool,
}

fn suite_orthogonality(n_max: usize) -> Result<SuiteResult> {
    let mut cases = 0;
    let mut passed = true;
    for n in 2..=n_max.max(2) {
        let catalog = enumerate_hyperplanes(n, None)?;
        let aff = aff_orientation(&catalog);
        let rects = family_r(n)?;
        for r in &rects {
            for c in &aff.cocircuits {
                cases += 1;
                if !orthogonal(&r.signs, c)
                    || r.signs.support().intersection(&c.support()).len() == 1
                {
                    passed = false;
                }
            }
        }
    }
    Ok(SuiteResult {
        name: "orthogonality".into(),
        cases,
        passed,
    })
}

fn suite_subcube_roundtrip(n_max: usize) -> Result<SuiteResult> {
    let mut cases = 0;
    let mut passed = true;
    for n in 1..=n_max {
        // All block assignments: coordinate i belongs to block assignment[i]
        // (0 = unused), generating every descriptor up to block order.
        let choices = n + 1;
        let total = choices.pow(n as u32);
        for base_idx in 0..1usize << n {
            let base = Vertex::from_index(base_idx);
            for code in 0..total {
                let mut assignment = vec![0usize; n];
                let mut c = code;
                for slot in assignment.iter_mut() {
                    *slot = c % choices;
                    c /= choices;
                }
                let max_block = assignment.iter().max().copied().unwrap_or(0);
                let mut blocks = vec![crate::CoordSet::EMPTY; max_block];
                for (i, &a) in assignment.iter().enumerate() {
                    if a > 0 {
                        blocks[a - 1] = blocks[a - 1].union(crate::CoordSet::singleton(i));
                    }
                }
                if blocks.iter().any(|b| b.is_empty()) {
                    continue;
                }
                let Ok(d) = crate::geometry::SubcubeDescriptor::new(n, base, blocks) else {
                    passed = false;
                    continue;
                };
                cases += 1;
                let points = generate_subcube(&d)?;
                let ok = points.len() == 1 << d.k()
                    && recognize_subcube(&points) == Some(d.k() as u32)
                    && recover_descriptor(&points)? == d.canonical_form();
                if !ok {
                    passed = false;
                }
            }
        }
    }
    Ok(SuiteResult {
        name: "subcube-roundtrip".into(),
        cases,
        passed,
    })
}

fn suite_hyperplane_classification(n_max: usize) -> Result<SuiteResult> {
    let mut cases = 0;
    let mut passed = true;
    for n in 2..=n_max.max(2) {
        let catalog = enumerate_hyperplanes(n, None)?;
        for h in &catalog.entries {
            cases += 1;
            let max_size = h.points.len() == 1 << (n - 1);
            let classified = classify_hyperplane(h) != HyperplaneKind::Other;
            if max_size != classified || h.points.len() > 1 << (n - 1) {
                passed = false;
            }
        }
    }
    Ok(SuiteResult {
        name: "hyperplane-classification".into(),
        cases,
        passed,
    })
}

fn suite_normalization_roundtrip(n_max: usize, seed: u64) -> Result<SuiteResult> {
    let mut cases = 0;
    let mut passed = true;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for n in 2..=n_max.max(2) {
        let catalog = enumerate_hyperplanes(n, None)?;
        let aff = aff_orientation(&catalog);
        let sets: Vec<VertexSet> = if n == 2 {
            (0..16u32)
                .map(|mask| {
                    VertexSet::from_vertices(
                        2,
                        (0..4).filter(|&i| mask >> i & 1 == 1).map(Vertex::from_index),
                    )
                })
                .collect()
        } else {
            (0..100)
                .map(|_| {
                    let mut s = VertexSet::empty(n);
                    for idx in 0..1usize << n {
                        if rng.gen_bool(0.5) {
                            s.insert(Vertex::from_index(idx));
                        }
                    }
                    s
                })
                .collect()
        };
        for a in sets {
            cases += 1;
            match normalize(&aff.reorient(&a), &catalog) {
                Ok(result) => {
                    if result.normalized != aff {
                        passed = false;
                    }
                }
                Err(_) => passed = false,
            }
        }
        match normalize(&aff, &catalog) {
            Ok(result) => {
                cases += 1;
                if !result.reorientation.is_empty() {
                    passed = false;
                }
            }
            Err(_) => passed = false,
        }
    }
    Ok(SuiteResult {
        name: "normalization-roundtrip".into(),
        cases,
        passed,
    })
}

fn suite_uniqueness_exhaustive() -> Result<SuiteResult> {
    let catalog = enumerate_hyperplanes(2, None)?;
    let aff = aff_orientation(&catalog);
    // uniqueness_check runs the full 2^(2^2)-subset loop at n = 2.
    let passed = uniqueness_check(&aff, &catalog)?;
    Ok(SuiteResult {
        name: "uniqueness-exhaustive".into(),
        cases: 16,
        passed,
    })
}

fn cmd_selftest(cli: &Cli, n_flag: Option<usize>) -> Result<Outcome> {
    let n_max = n_flag.unwrap_or(4).min(4);
    if n_flag.is_some_and(|n| n < 2) {
        return Err(Error::DimensionOutOfRange {
            n: n_flag.unwrap(),
            min: 2,
            max: 4,
        });
    }
    let seed = cli.seed.unwrap_or(0);
    let mut suites = vec![
        suite_orthogonality(n_max)?,
        suite_subcube_roundtrip(n_max)?,
        suite_hyperplane_classification(n_max)?,
        suite_normalization_roundtrip(n_max, seed)?,
    ];
    if cli.exhaustive {
        suites.push(suite_uniqueness_exhaustive()?);
    }
    let all_passed = suites.iter().all(|s| s.passed);
    let report = SelftestReport {
        n_max,
        seed,
        exhaustive: cli.exhaustive,
        suites,
        all_passed,
    };

    let mut table = String::new();
    writeln!(table, "selftest up to n = {n_max}, seed {seed}").unwrap();
    for s in &report.suites {
        writeln!(
            table,
            "  {:<26} {}  ({} cases)",
            s.name,
            if s.passed { "pass" } else { "FAIL" },
            s.cases
        )
        .unwrap();
    }
    writeln!(table, "result: {}", if all_passed { "PASS" } else { "FAIL" }).unwrap();

    let mut csv = String::from("suite,cases,passed\n");
    for s in &report.suites {
        writeln!(csv, "{},{},{}", s.name, s.cases, s.passed).unwrap();
    }
    let stdout = render(cli.format, &report, table, csv);
    Ok(Outcome::with_exit(stdout, u8::from(!all_passed)))
}
