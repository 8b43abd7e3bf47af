//! `curvature`: enumerate State Complexes, check their homology, locate
//! distance matrices in them and run the identity suite.
//!
//! Every command writes one JSON document (or CSV for `enumerate --format
//! csv`) to standard output. Exit codes: 0 on success, 1 on usage and
//! parse errors, 2 on domain errors and failed checks.

use std::fs;
use std::io::{self, Write};
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use curvature::elliptope::{elliptope_membership, PSD_TOL, RANK_TOL};
use curvature::homology::{
    boundary_matrices_with, verify_homology_with, HomologyReport, VerifyOptions, DEFAULT_SNF_MAX_N,
};
use curvature::properties::{run_property_suite_with, Operations, PropertyOutcome, SuiteConfig};
use curvature::state_complex::{
    build_state_complex_with, enumerate_cluster_structures, euler_characteristic, minimal_simplex,
    simplex_vertices, SignVertex, SimplicialComplex, MAX_BUILD_N,
};
use curvature::{ClusterStructure, DistanceMatrix, Error, Execution};

/// Environment variable overriding the default of `--max-snf`.
const SNF_CAP_ENV: &str = "CURVATURE_SNF_CAP";

#[derive(Debug, Parser)]
#[command(name = "curvature", version)]
#[command(about = "Curvature sets of the circle via the State Complex")]
struct Cli {
    /// Run everything on one thread.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List cluster structures, or the whole State Complex with --complex.
    Enumerate {
        /// Number of points.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        /// Only structures with this many degrees of freedom.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        m: Option<u64>,
        /// Emit the deduplicated complex instead of the raw structures.
        #[arg(long)]
        complex: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Compute homology and compare it with the closed form.
    Homology {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        n: u64,
        /// Coefficients to report; every field check runs regardless.
        #[arg(long, value_enum, default_value_t = Coeff::Q)]
        coeff: Coeff,
        /// Largest n for the integer Smith normal form [default: 5, or
        /// $CURVATURE_SNF_CAP].
        #[arg(long)]
        max_snf: Option<usize>,
        /// Write the boundary matrices as `rows cols nnz` triplet files.
        #[arg(long, value_name = "DIR")]
        export: Option<PathBuf>,
    },
    /// Find the minimal simplex carrying a distance matrix.
    Locate {
        /// Matrix file: `n`, then n rows of rationals in units of pi.
        file: PathBuf,
    },
    /// Run the seeded identity suite.
    Verify {
        /// Sizes, e.g. `4` or `2..6` (inclusive).
        #[arg(long, default_value = "2..7")]
        n: SizeRange,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Largest denominator of random angles and weights.
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        max_den: u64,
        /// Random isometries per sampled configuration.
        #[arg(long, default_value_t = 100)]
        isometries: usize,
        /// Swap in a deliberately broken operation to watch the suite fail.
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<Fault>,
    },
    /// Check that the entrywise cosine of a distance matrix is PSD.
    Elliptope {
        file: PathBuf,
        /// Smallest eigenvalue still accepted is `-tol`.
        #[arg(long, default_value_t = PSD_TOL)]
        tol: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Coeff {
    Q,
    Gf2,
    Gf3,
    Z,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Fault {
    TransposeSign,
}

#[derive(Debug, Clone)]
struct SizeRange(RangeInclusive<usize>);

impl FromStr for SizeRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |v: &str| {
            v.trim()
                .parse::<usize>()
                .map_err(|_| format!("bad size {v:?}"))
        };
        let range = match s.split_once("..") {
            Some((a, b)) => parse(a)?..=parse(b.strip_prefix('=').unwrap_or(b))?,
            None => parse(s)?..=parse(s)?,
        };
        if range.is_empty() || *range.start() < 1 {
            return Err(format!("empty or invalid range {s:?}"));
        }
        Ok(SizeRange(range))
    }
}

/// Why a command did not succeed.
enum Failure {
    /// Bad input: exit 1.
    Usage(String),
    /// A library error: exit 2 with a JSON error document.
    Domain(Error),
    /// A check failed; the report has already been written. Exit 2.
    Checks(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::MatricesDiffer => "MatricesDiffer",
        Error::NotRealizable => "NotRealizable",
        Error::InvalidMatrix(_) => "InvalidMatrix",
        Error::InvalidClusterStructure(_) => "InvalidClusterStructure",
        Error::InvalidBarycentric(_) => "InvalidBarycentric",
        Error::IndexOutOfRange { .. } => "IndexOutOfRange",
        Error::DimensionMismatch { .. } => "DimensionMismatch",
        Error::NotNormalized => "NotNormalized",
        Error::EmptyIndexSet => "EmptyIndexSet",
        Error::InvalidRange(_) => "InvalidRange",
        Error::SizeLimitExceeded { .. } => "SizeLimitExceeded",
        Error::NotSymmetric => "NotSymmetric",
        Error::NotPsd(_) => "NotPsd",
        Error::RankDisagreement(_) => "RankDisagreement",
        Error::Parse(_) => "Parse",
    }
}

fn emit<T: Serialize>(value: &T) -> CmdResult {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| Failure::Usage(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

fn signs(k: &SimplicialComplex, v: usize) -> String {
    k.vertex(v).to_string()
}

fn sign_strings(n: usize, vertices: &[usize]) -> Vec<String> {
    vertices
        .iter()
        .map(|&v| {
            SignVertex::new(n, v as u64)
                .map(|s| s.to_string())
                .unwrap_or_default()
        })
        .collect()
}

#[derive(Serialize)]
struct StructureRow {
    m: usize,
    c: Vec<i32>,
    vertices: Vec<String>,
}

fn structure_row(c: &ClusterStructure) -> StructureRow {
    StructureRow {
        m: c.m(),
        c: c.values().to_vec(),
        vertices: sign_strings(c.n(), &simplex_vertices(c)),
    }
}

#[derive(Serialize)]
struct SimplexRow {
    dim: usize,
    vertices: Vec<String>,
    label: Option<Vec<i32>>,
}

#[derive(Serialize)]
struct ComplexDoc {
    n: usize,
    f_vector: Vec<usize>,
    euler_characteristic: String,
    raw_structures: Vec<u64>,
    vertices: Vec<String>,
    simplices: Vec<SimplexRow>,
}

fn cmd_enumerate(
    n: usize,
    m: Option<usize>,
    complex: bool,
    format: Format,
    exec: Execution,
) -> CmdResult {
    if let Some(m) = m.filter(|&m| m > n) {
        return Err(Failure::Usage(format!("--m {m} exceeds --n {n}")));
    }
    if complex {
        if n > MAX_BUILD_N {
            return Err(Error::SizeLimitExceeded {
                what: "points in the State Complex".into(),
                size: n,
                limit: MAX_BUILD_N,
            }
            .into());
        }
        let (k, stats) = build_state_complex_with(n, exec)?;
        let dims: Vec<usize> = match m {
            Some(m) => vec![m - 1],
            None => (0..n).collect(),
        };
        let simplices: Vec<SimplexRow> = dims
            .iter()
            .flat_map(|&d| {
                let k = &k;
                (0..k.count(d)).map(move |i| SimplexRow {
                    dim: d,
                    vertices: k.simplex(d, i).iter().map(|&v| signs(k, v)).collect(),
                    label: k.label(d, i).map(|c| c.values().to_vec()),
                })
            })
            .collect();
        return match format {
            Format::Json => emit(&ComplexDoc {
                n,
                f_vector: k.f_vector(),
                euler_characteristic: euler_characteristic(&k).to_string(),
                raw_structures: stats.raw_structures,
                vertices: (0..k.num_vertices()).map(|v| signs(&k, v)).collect(),
                simplices,
            }),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(io::stdout().lock());
                w.write_record(["dim", "vertices", "label"])
                    .map_err(csv_err)?;
                for s in &simplices {
                    let label = s.label.as_ref().map(|l| join(l)).unwrap_or_default();
                    w.write_record([s.dim.to_string(), s.vertices.join(" "), label])
                        .map_err(csv_err)?;
                }
                w.flush()?;
                Ok(())
            }
        };
    }

    let ms: Vec<usize> = match m {
        Some(m) => vec![m],
        None => (1..=n).collect(),
    };
    let structures = ms
        .into_iter()
        .map(|m| enumerate_cluster_structures(n, m))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flatten();
    match format {
        Format::Json => {
            let rows: Vec<StructureRow> = structures.map(|c| structure_row(&c)).collect();
            emit(&rows)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(io::stdout().lock());
            w.write_record(["m", "c", "vertices"]).map_err(csv_err)?;
            for c in structures {
                let row = structure_row(&c);
                w.write_record([row.m.to_string(), join(&row.c), row.vertices.join(" ")])
                    .map_err(csv_err)?;
            }
            w.flush()?;
            Ok(())
        }
    }
}

fn join(values: &[i32]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn csv_err(e: csv::Error) -> Failure {
    Failure::Usage(e.to_string())
}

#[derive(Serialize)]
struct DegreeChecksDoc {
    q: bool,
    gf2: Option<bool>,
    gf3: Option<bool>,
    snf: Option<bool>,
    torsion2: bool,
}

#[derive(Serialize)]
struct DegreeDoc {
    degree: usize,
    /// Rank over the chosen coefficients (the Betti number for q and z).
    dim: usize,
    betti: usize,
    torsion2: usize,
    group: Option<String>,
    expected: String,
    checks: DegreeChecksDoc,
}

#[derive(Serialize)]
struct HomologyDoc {
    n: usize,
    coeff: Coeff,
    chain_dims: Vec<usize>,
    square_zero: bool,
    euler_characteristic: i64,
    euler_consistent: bool,
    snf_ran: bool,
    only_two_torsion: Option<bool>,
    degrees: Vec<DegreeDoc>,
    passed: bool,
}

fn homology_doc(r: &HomologyReport, coeff: Coeff) -> HomologyDoc {
    let degrees = r
        .degrees
        .iter()
        .map(|d| {
            let field = |p: u64| {
                d.field_dims
                    .iter()
                    .find(|(q, _)| *q == p)
                    .map_or(d.betti, |&(_, v)| v)
            };
            DegreeDoc {
                degree: d.degree,
                dim: match coeff {
                    Coeff::Q | Coeff::Z => d.betti,
                    Coeff::Gf2 => field(2),
                    Coeff::Gf3 => field(3),
                },
                betti: d.betti,
                torsion2: d.torsion2,
                group: d.group.as_ref().map(|g| g.to_string()),
                expected: d.expected.to_string(),
                checks: DegreeChecksDoc {
                    q: d.checks.q,
                    gf2: d.checks.gf2,
                    gf3: d.checks.gf3,
                    snf: d.checks.snf,
                    torsion2: d.checks.torsion2,
                },
            }
        })
        .collect();
    HomologyDoc {
        n: r.n,
        coeff,
        chain_dims: r.chain_dims.clone(),
        square_zero: r.square_zero,
        euler_characteristic: r.euler_characteristic,
        euler_consistent: r.euler_consistent,
        snf_ran: r.snf_ran,
        only_two_torsion: r.only_two_torsion,
        degrees,
        passed: r.passed,
    }
}

fn snf_cap(flag: Option<usize>) -> Result<usize, Failure> {
    if let Some(cap) = flag {
        return Ok(cap);
    }
    match std::env::var(SNF_CAP_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{SNF_CAP_ENV}={v:?} is not a size"))),
        Err(_) => Ok(DEFAULT_SNF_MAX_N),
    }
}

fn cmd_homology(
    n: usize,
    coeff: Coeff,
    max_snf: Option<usize>,
    export: Option<&Path>,
    exec: Execution,
) -> CmdResult {
    let cap = snf_cap(max_snf)?;
    if n > MAX_BUILD_N {
        return Err(Error::SizeLimitExceeded {
            what: "points in the State Complex".into(),
            size: n,
            limit: MAX_BUILD_N,
        }
        .into());
    }
    if coeff == Coeff::Z && n > cap {
        return Err(Error::SizeLimitExceeded {
            what: "points for the integer Smith normal form".into(),
            size: n,
            limit: cap,
        }
        .into());
    }
    if let Some(dir) = export {
        export_boundaries(n, dir, exec)?;
    }
    let opts = VerifyOptions {
        snf_max_n: if coeff == Coeff::Z { n } else { 0 },
        execution: exec,
        ..VerifyOptions::default()
    };
    let report = verify_homology_with(n, &opts)?;
    emit(&homology_doc(&report, coeff))?;
    if report.passed {
        Ok(())
    } else {
        let bad: Vec<usize> = report
            .degrees
            .iter()
            .filter(|d| !d.checks.passed())
            .map(|d| d.degree)
            .collect();
        Err(Failure::Checks(format!(
            "homology of St_{n} disagrees with the closed form (degrees {bad:?}, square_zero {}, euler {})",
            report.square_zero, report.euler_consistent
        )))
    }
}

fn export_boundaries(n: usize, dir: &Path, exec: Execution) -> CmdResult {
    let (k, _) = build_state_complex_with(n, exec)?;
    let chain = boundary_matrices_with(&k, exec)?;
    fs::create_dir_all(dir)?;
    for (i, b) in chain.boundaries().iter().enumerate() {
        fs::write(
            dir.join(format!("boundary_{}.txt", i + 1)),
            b.to_triplet_text(),
        )?;
    }
    Ok(())
}

fn read_matrix(path: &Path) -> Result<DistanceMatrix, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    text.parse()
        .map_err(|e: Error| Failure::Usage(format!("{}: {e}", path.display())))
}

#[derive(Serialize)]
struct LocateDoc {
    n: usize,
    dim: usize,
    vertices: Vec<String>,
    vertex_indices: Vec<usize>,
    label: Vec<i32>,
    barycentric: Vec<String>,
    configuration: Vec<String>,
}

fn cmd_locate(path: &Path) -> CmdResult {
    let m = read_matrix(path)?;
    let loc = minimal_simplex(&m)?;
    emit(&LocateDoc {
        n: m.n(),
        dim: loc.vertices.len() - 1,
        vertices: sign_strings(m.n(), &loc.vertices),
        vertex_indices: loc.vertices.clone(),
        label: loc.label.values().to_vec(),
        barycentric: loc
            .barycentric
            .coords()
            .iter()
            .map(|t| t.to_string())
            .collect(),
        configuration: loc
            .configuration
            .angles()
            .iter()
            .map(|a| a.to_string())
            .collect(),
    })
}

#[derive(Serialize)]
struct PropertyDoc<'a> {
    property: &'static str,
    n: usize,
    checked: usize,
    failures: usize,
    witness: Option<&'a str>,
}

#[derive(Serialize)]
struct VerifyDoc<'a> {
    sizes: &'a [usize],
    samples: usize,
    seed: u64,
    max_denominator: u64,
    isometries: usize,
    fault: Option<&'static str>,
    properties: Vec<PropertyDoc<'a>>,
    failures: usize,
    passed: bool,
}

fn property_doc(o: &PropertyOutcome) -> PropertyDoc<'_> {
    PropertyDoc {
        property: o.property.name(),
        n: o.n,
        checked: o.checked,
        failures: o.failures,
        witness: o.witness.as_deref(),
    }
}

fn cmd_verify(cfg: SuiteConfig, fault: Option<Fault>) -> CmdResult {
    let ops = match fault {
        Some(Fault::TransposeSign) => Operations::with_sign_flipped_transpose(),
        None => Operations::default(),
    };
    let report = run_property_suite_with(&cfg, &ops);
    emit(&VerifyDoc {
        sizes: &cfg.sizes,
        samples: cfg.samples,
        seed: cfg.seed,
        max_denominator: cfg.max_denominator,
        isometries: cfg.isometries,
        fault: fault.map(|_| "transpose-sign"),
        properties: report.outcomes.iter().map(property_doc).collect(),
        failures: report.failures(),
        passed: report.passed,
    })?;
    match report.outcomes.iter().find(|o| o.failures > 0) {
        None => Ok(()),
        Some(o) => Err(Failure::Checks(format!(
            "{} failed at n={} ({} of {}): {}",
            o.property.name(),
            o.n,
            o.failures,
            o.checked,
            o.witness.as_deref().unwrap_or("no witness")
        ))),
    }
}

#[derive(Serialize)]
struct ElliptopeDoc {
    n: usize,
    psd: bool,
    min_eig: f64,
    rank: usize,
    tol: f64,
    rank_tol: f64,
}

fn cmd_elliptope(path: &Path, tol: f64) -> CmdResult {
    if !(tol >= 0.0 && tol.is_finite()) {
        return Err(Failure::Usage(format!(
            "--tol must be a finite nonnegative number, got {tol}"
        )));
    }
    let m = read_matrix(path)?;
    let r = elliptope_membership(&m, tol);
    emit(&ElliptopeDoc {
        n: m.n(),
        psd: r.psd,
        min_eig: r.min_eig,
        rank: r.rank,
        tol,
        rank_tol: RANK_TOL,
    })
}

fn run(cli: Cli) -> CmdResult {
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    match cli.command {
        Command::Enumerate {
            n,
            m,
            complex,
            format,
        } => cmd_enumerate(n as usize, m.map(|m| m as usize), complex, format, exec),
        Command::Homology {
            n,
            coeff,
            max_snf,
            export,
        } => cmd_homology(n as usize, coeff, max_snf, export.as_deref(), exec),
        Command::Locate { file } => cmd_locate(&file),
        Command::Verify {
            n,
            samples,
            seed,
            max_den,
            isometries,
            inject_fault,
        } => cmd_verify(
            SuiteConfig {
                sizes: n.0.collect(),
                samples,
                seed,
                max_denominator: max_den,
                isometries,
                execution: exec,
            },
            inject_fault,
        ),
        Command::Elliptope { file, tol } => cmd_elliptope(&file, tol),
    }
}

#[derive(Serialize)]
struct ErrorDoc<'a> {
    error: &'a str,
    message: String,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Domain(e)) => {
            let _ = emit(&ErrorDoc {
                error: error_kind(&e),
                message: e.to_string(),
            });
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Checks(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(2)
        }
    }
}
