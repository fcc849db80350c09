//! Command-line front end: loads JSON/text inputs, dispatches to the
//! library, and writes deterministic JSON reports.
//!
//! Exit codes: 0 = success with no verification failures, 1 = the run
//! completed but verification failures are present, 2 = usage or input
//! error.

use clap::{Parser, Subcommand};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use virthom::models::{
    group_checks, lattice_checks, sullivan_lambda0, FiniteModel, FloatTorus, Mat2, MatrixModel, ModelCheckReport, RationalTorus,
};
use virthom::orbifold::{
    dp_rank, golod_shafarevich, GsVerdict, Presentation, SingularGraph,
};
use virthom::perturb::{run_pipeline, EdgeDetection, PipelineConfig};
use virthom::ratio::{format_ratio, parse_ratio};
use virthom::rose::RoseCoverData;
use virthom::surfaces::{
    boundary_set, build_surface, cheeger_exact, cheeger_sweep, claim_bounds_eval,
    claim_constants, enumerate_normal_curve_types, face_parity_check, CurveType,
    Triangulation, VertexSet,
};
use virthom::weighting::{
    expand_cover, solve_integer_weighting, verify_weighting, DigraphData, WeightingData,
};
use virthom::words::{Alphabet, Word};

const SEED_ENV: &str = "VIRTHOM_SEED";

#[derive(Parser)]
#[command(name = "virthom", version, about = "Perturbation pipeline and orbifold calculators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Perturbation pipeline.
    Perturb {
        #[command(subcommand)]
        cmd: PerturbCmd,
    },
    /// Weightings on labelled transition digraphs.
    Weight {
        #[command(subcommand)]
        cmd: WeightCmd,
    },
    /// Covers of the rose.
    Cover {
        #[command(subcommand)]
        cmd: CoverCmd,
    },
    /// Presentations, homology ranks and the singular graph.
    Orb {
        #[command(subcommand)]
        cmd: OrbCmd,
    },
    /// Triangulations, Cheeger constants and normal surfaces.
    Tri {
        #[command(subcommand)]
        cmd: TriCmd,
    },
    /// Group model axioms.
    Model {
        #[command(subcommand)]
        cmd: ModelCmd,
    },
    /// Scalar utilities.
    Util {
        #[command(subcommand)]
        cmd: UtilCmd,
    },
}

#[derive(Subcommand)]
enum PerturbCmd {
    /// Run the full pipeline on a model file.
    Run {
        #[arg(long)]
        model: PathBuf,
        /// Tolerance, e.g. `1/4` or `0.25`.
        #[arg(long)]
        epsilon: String,
        #[arg(long)]
        seed: Option<u64>,
        /// Word-length bound for the verification passes.
        #[arg(long, default_value_t = 6)]
        verify_len: usize,
        /// Sample count per (cell, label) for numeric models.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum WeightCmd {
    /// Solve for the smallest strictly positive integer weighting.
    Solve {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the balance equations of a weighting.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        weights: PathBuf,
    },
}

#[derive(Subcommand)]
enum CoverCmd {
    /// Expand an integer-weighted digraph into a rose covering.
    Expand {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        weights: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Digraph vertex whose fiber holds the basepoint.
        #[arg(long, default_value_t = 0)]
        base: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write a GraphViz rendering here.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum OrbCmd {
    /// Mod-p homology rank of a presentation.
    Dp {
        #[arg(long)]
        pres: PathBuf,
        #[arg(short, long)]
        p: u64,
    },
    /// Golod-Shafarevich verdict from (d_p, |X|, |R|).
    Gs {
        #[arg(long)]
        dp: u64,
        #[arg(long)]
        gens: u64,
        #[arg(long)]
        rels: u64,
    },
    /// Extract the order-divisible part of a singular graph.
    Singp {
        #[arg(long)]
        graph: PathBuf,
        #[arg(short, long)]
        p: u64,
    },
}

#[derive(Subcommand)]
enum TriCmd {
    /// Identification classes and 1-skeleton of a triangulation.
    Skeleton {
        #[arg(long)]
        tri: PathBuf,
    },
    /// Cheeger constant of the 1-skeleton.
    Cheeger {
        #[arg(long)]
        tri: PathBuf,
        /// Exhaustive exact minimum (default).
        #[arg(long, conflicts_with = "sweep")]
        exact: bool,
        /// Spectral sweep upper bound.
        #[arg(long)]
        sweep: bool,
        /// Vertex cap for exact mode.
        #[arg(long, default_value_t = 20)]
        cap: usize,
    },
    /// Build the normal surface determined by a vertex set.
    Surface {
        #[arg(long)]
        tri: PathBuf,
        /// JSON file `{"vertices": [..]}`.
        #[arg(long)]
        set: PathBuf,
        /// Bound on intersections of any disc with the singular locus.
        #[arg(long, default_value_t = 0)]
        k4: u64,
    },
}

#[derive(Subcommand)]
enum ModelCmd {
    /// Validate model axioms on seeded samples.
    Check {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Subcommand)]
enum UtilCmd {
    /// Bottom of the Laplacian spectrum from a limit-set dimension in [1, 2].
    Lambda0 {
        #[arg(long)]
        d: f64,
    },
}

/// Model description file.
#[derive(Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum ModelFile {
    Finite {
        table: Vec<Vec<usize>>,
        lattice: Vec<usize>,
        generators: Vec<usize>,
    },
    /// Sugar for cyclic groups: `Z/order` with the given lattice elements.
    Cyclic {
        order: usize,
        lattice: Vec<usize>,
        generators: Vec<usize>,
    },
    Torus {
        dimension: usize,
        arithmetic: TorusArithmetic,
        generators: Vec<Vec<String>>,
    },
    Matrix {
        // Entries [[re, im]; 4] in row-major order per generator.
        generators: Vec<[[f64; 2]; 4]>,
    },
}

#[derive(Deserialize, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
enum TorusArithmetic {
    Exact,
    Float,
}

#[derive(Debug)]
struct CliError(String);

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<E: std::error::Error> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError(e.to_string())
    }
}

fn fail(msg: impl Into<String>) -> CliError {
    CliError(msg.into())
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| fail(format!("{}: {e}", path.display())))
}

/// Reports are written atomically: temp file in the same directory, then
/// rename.
fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, contents).map_err(|e| fail(format!("{}: {e}", tmp.display())))?;
    std::fs::rename(&tmp, path).map_err(|e| fail(format!("{}: {e}", path.display())))?;
    Ok(())
}

fn emit(out: &Option<PathBuf>, contents: &str) -> Result<(), CliError> {
    match out {
        Some(path) => write_atomic(path, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn resolve_seed(flag: Option<u64>) -> u64 {
    flag.or_else(|| {
        std::env::var(SEED_ENV)
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .unwrap_or(0)
}

fn parse_epsilon(s: &str) -> Result<BigRational, CliError> {
    parse_ratio(s).ok_or_else(|| fail(format!("cannot parse epsilon `{s}`")))
}

/// Presentation text: first line generator names, then one relator per line.
fn parse_presentation(text: &str) -> Result<(Alphabet, Presentation), CliError> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| fail("empty presentation file"))?;
    let alphabet = Alphabet::new(header.split_whitespace().map(String::from))?;
    let mut relators = Vec::new();
    for line in lines {
        relators.push(Word::parse(&alphabet, line)?);
    }
    let pres = Presentation::new(alphabet.size(), relators)?;
    Ok((alphabet, pres))
}

fn load_model(path: &Path) -> Result<ModelFile, CliError> {
    let text = read_file(path)?;
    serde_json::from_str(&text).map_err(|e| fail(format!("{}: {e}", path.display())))
}

fn run_perturb(
    model_path: &Path,
    epsilon: &str,
    seed: Option<u64>,
    verify_len: usize,
    samples: Option<usize>,
    out: &Option<PathBuf>,
) -> Result<bool, CliError> {
    let epsilon = parse_epsilon(epsilon)?;
    let mut config = PipelineConfig::new(epsilon, resolve_seed(seed));
    config.verify_len = verify_len;
    config.detection = samples.map(|per_cell| EdgeDetection::Sampled { per_cell });
    let model = load_model(model_path)?;
    let report = match model {
        ModelFile::Finite {
            table,
            lattice,
            generators,
        } => {
            let m = FiniteModel::new(table, lattice)?;
            let alphabet = Alphabet::of_size(generators.len())?;
            run_pipeline(&m, alphabet, generators, &config)?.1
        }
        ModelFile::Cyclic {
            order,
            lattice,
            generators,
        } => {
            let m = FiniteModel::new(FiniteModel::cyclic_table(order), lattice)?;
            let alphabet = Alphabet::of_size(generators.len())?;
            run_pipeline(&m, alphabet, generators, &config)?.1
        }
        ModelFile::Torus {
            dimension,
            arithmetic,
            generators,
        } => {
            let images = parse_torus_generators(dimension, &generators)?;
            let alphabet = Alphabet::of_size(images.len())?;
            match arithmetic {
                TorusArithmetic::Exact => {
                    let m = RationalTorus::new(dimension)?;
                    run_pipeline(&m, alphabet, images, &config)?.1
                }
                TorusArithmetic::Float => {
                    let m = FloatTorus::new(dimension)?;
                    let images: Vec<Vec<f64>> = images
                        .iter()
                        .map(|v| v.iter().map(|x| x.to_f64().expect("fits f64")).collect())
                        .collect();
                    run_pipeline(&m, alphabet, images, &config)?.1
                }
            }
        }
        ModelFile::Matrix { .. } => {
            return Err(fail(
                "matrix models certify no lattice and cannot run the pipeline; \
                 use `model check` for defect arithmetic",
            ));
        }
    };
    emit(out, &report.to_json())?;
    Ok(report.success)
}

fn parse_torus_generators(
    dimension: usize,
    raw: &[Vec<String>],
) -> Result<Vec<Vec<BigRational>>, CliError> {
    if raw.is_empty() {
        return Err(fail("torus model needs at least one generator"));
    }
    raw.iter()
        .map(|coords| {
            if coords.len() != dimension {
                return Err(fail(format!(
                    "generator has {} coordinates, expected {dimension}",
                    coords.len()
                )));
            }
            coords
                .iter()
                .map(|c| {
                    parse_ratio(c).ok_or_else(|| fail(format!("cannot parse coordinate `{c}`")))
                })
                .collect()
        })
        .collect()
}

fn parse_matrix_generators(raw: &[[[f64; 2]; 4]]) -> Result<Vec<Mat2>, CliError> {
    raw.iter()
        .map(|entries| {
            let complex = entries.map(|[re, im]| num_complex::Complex64::new(re, im));
            Ok(Mat2::new(complex)?)
        })
        .collect()
}

#[derive(Serialize)]
struct WeightSolveReport {
    version: String,
    graph_vertices: usize,
    graph_edges: usize,
    vertex_total: String,
    edge_total: String,
    weighting: WeightingData,
}

fn run_weight_solve(graph: &Path, out: &Option<PathBuf>) -> Result<bool, CliError> {
    let data: DigraphData = serde_json::from_str(&read_file(graph)?)?;
    let y = data.build()?;
    let w = solve_integer_weighting(&y)?;
    let mut weighting = WeightingData::from_weighting(&w);
    weighting
        .provenance
        .insert("method".into(), "exact".into());
    let report = WeightSolveReport {
        version: env!("CARGO_PKG_VERSION").into(),
        graph_vertices: y.num_vertices(),
        graph_edges: y.edges().len(),
        vertex_total: format_ratio(&w.total_vertex_weight()),
        edge_total: format_ratio(&w.total_edge_weight()),
        weighting,
    };
    // The bare weighting goes to --out so it can feed `weight verify` and
    // `cover expand`; the report goes to stdout.
    if let Some(path) = out {
        write_atomic(path, &to_json(&report.weighting))?;
    }
    print!("{}", to_json(&report));
    Ok(true)
}

#[derive(Serialize)]
struct WeightVerifyReport {
    version: String,
    constraints_checked: usize,
    max_abs_residual: String,
    exactly_balanced: bool,
    violated: Vec<String>,
}

fn run_weight_verify(graph: &Path, weights: &Path) -> Result<bool, CliError> {
    let data: DigraphData = serde_json::from_str(&read_file(graph)?)?;
    let y = data.build()?;
    let wd: WeightingData = serde_json::from_str(&read_file(weights)?)?;
    let w = wd
        .build()
        .ok_or_else(|| fail("cannot parse weight values"))?;
    let report = verify_weighting(&y, &w)?;
    let out = WeightVerifyReport {
        version: env!("CARGO_PKG_VERSION").into(),
        constraints_checked: report.residuals.len(),
        max_abs_residual: format_ratio(&report.max_abs_residual),
        exactly_balanced: report.is_exactly_balanced(),
        violated: report
            .residuals
            .iter()
            .filter(|r| !num_traits::Zero::is_zero(&r.residual))
            .map(|r| {
                format!(
                    "vertex {} label {} {}: residual {}",
                    r.vertex,
                    r.label,
                    if r.outgoing { "out" } else { "in" },
                    format_ratio(&r.residual)
                )
            })
            .collect(),
    };
    let clean = out.exactly_balanced;
    print!("{}", to_json(&out));
    Ok(clean)
}

#[derive(Serialize)]
struct CoverExpandReport {
    version: String,
    seed: u64,
    base_vertex: usize,
    total_vertices_before_pruning: usize,
    cover_vertices: usize,
    subgroup_index: usize,
    subgroup_rank: usize,
    is_rose_covering: bool,
    basis: Vec<String>,
    cover: RoseCoverData,
}

fn run_cover_expand(
    graph: &Path,
    weights: &Option<PathBuf>,
    seed: Option<u64>,
    base: usize,
    out: &Option<PathBuf>,
    dot: &Option<PathBuf>,
) -> Result<bool, CliError> {
    let data: DigraphData = serde_json::from_str(&read_file(graph)?)?;
    let y = data.build()?;
    let w = match weights {
        Some(path) => {
            let wd: WeightingData = serde_json::from_str(&read_file(path)?)?;
            wd.build().ok_or_else(|| fail("cannot parse weight values"))?
        }
        None => solve_integer_weighting(&y)?,
    };
    let seed = resolve_seed(seed);
    let expansion = expand_cover(&y, &w, base, seed)?;
    let alphabet = Alphabet::new(data.labels.clone())?;
    let basis: Vec<String> = expansion
        .cover
        .schreier_basis()?
        .iter()
        .map(|b| b.format(&alphabet))
        .collect();
    let report = CoverExpandReport {
        version: env!("CARGO_PKG_VERSION").into(),
        seed,
        base_vertex: base,
        total_vertices_before_pruning: expansion.total_vertices_before_pruning,
        cover_vertices: expansion.cover.num_vertices(),
        subgroup_index: expansion.cover.subgroup_index()?,
        subgroup_rank: expansion.cover.subgroup_rank()?,
        is_rose_covering: expansion.cover.is_rose_covering(),
        basis,
        cover: expansion.cover.to_data(&alphabet),
    };
    if let Some(dot_path) = dot {
        write_atomic(
            dot_path,
            &expansion.cover.to_dot(&alphabet, Some(&expansion.projection)),
        )?;
    }
    emit(out, &to_json(&report))?;
    Ok(report.is_rose_covering)
}

#[derive(Serialize)]
struct DpReport {
    version: String,
    p: u64,
    num_generators: usize,
    num_relators: usize,
    dp_rank: usize,
}

#[derive(Serialize)]
struct GsReport {
    version: String,
    dp: u64,
    gens: u64,
    rels: u64,
    verdict: GsVerdict,
}

#[derive(Serialize)]
struct SingpReport {
    version: String,
    p: u64,
    warnings: Vec<String>,
    extracted_vertices: usize,
    extracted_edges: usize,
    b1: usize,
    chi_lower_bound: String,
    extracted: SingularGraph,
}

#[derive(Serialize)]
struct SkeletonReport {
    version: String,
    tetrahedra: usize,
    vertex_classes: usize,
    edge_classes: usize,
    face_classes: usize,
    euler_characteristic: i64,
    valences: Vec<usize>,
    edges: Vec<(usize, usize)>,
}

#[derive(Serialize)]
struct CheegerReport {
    version: String,
    mode: String,
    /// Convention: minimum of |dA|/|A| over nonempty A with 2|A| <= |V|.
    convention: String,
    vertices: usize,
    edges: usize,
    value: String,
}

#[derive(Serialize)]
struct SurfaceReport {
    version: String,
    a_size: usize,
    boundary_size: usize,
    parity_clean: bool,
    curve_types: usize,
    zero_cells: usize,
    one_cells: usize,
    two_cells: usize,
    triangles: usize,
    quads: usize,
    euler_characteristic: i64,
    components: usize,
    d2_upper_bound: usize,
    k0: String,
    k1: String,
    k1_convention: String,
    k2: String,
    k3: String,
    k4: u64,
    k5: String,
    bounds_hold: bool,
    interior_rank_lower: String,
}

fn rational64_str(r: num_rational::Rational64) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn run_tri_surface(tri: &Path, set: &Path, k4: u64) -> Result<bool, CliError> {
    #[derive(Deserialize)]
    struct SetFile {
        vertices: Vec<usize>,
    }
    let tri = Triangulation::parse(&read_file(tri)?)?;
    let set_file: SetFile = serde_json::from_str(&read_file(set)?)?;
    let a = VertexSet::new(set_file.vertices, tri.num_vertex_classes())?;
    let skel = tri.one_skeleton();
    let parity = face_parity_check(&tri, &a);
    let surface = build_surface(&tri, &a)?;
    let constants = claim_constants(&tri);
    let boundary = boundary_set(&skel, &a).len();
    let claims = claim_bounds_eval(surface.counts(), a.len(), boundary, k4, constants);
    let triangles = surface
        .two_cells
        .iter()
        .filter(|d| matches!(d.kind, CurveType::Triangle { .. }))
        .count();
    let report = SurfaceReport {
        version: env!("CARGO_PKG_VERSION").into(),
        a_size: a.len(),
        boundary_size: boundary,
        parity_clean: parity.is_clean(),
        curve_types: enumerate_normal_curve_types().len(),
        zero_cells: surface.counts().zero_cells,
        one_cells: surface.counts().one_cells,
        two_cells: surface.counts().two_cells,
        triangles,
        quads: surface.counts().two_cells - triangles,
        euler_characteristic: surface.euler_characteristic(),
        components: surface.num_components(),
        d2_upper_bound: virthom::surfaces::d2_upper_bound_surface(&surface),
        k0: rational64_str(claims.constants.k0),
        k1: rational64_str(claims.constants.k1),
        k1_convention: "half the max face-slot incidences over an edge class; \
                        a face whose sides hit the class twice counts twice"
            .into(),
        k2: rational64_str(claims.constants.k2),
        k3: rational64_str(claims.k3),
        k4,
        k5: rational64_str(claims.k5),
        bounds_hold: claims.all_bounds_hold(),
        interior_rank_lower: rational64_str(claims.interior_rank_lower),
    };
    let clean = report.parity_clean && report.bounds_hold;
    print!("{}", to_json(&report));
    Ok(clean)
}

fn run_model_check(
    path: &Path,
    samples: usize,
    seed: Option<u64>,
) -> Result<bool, CliError> {
    let seed = resolve_seed(seed);
    let report: ModelCheckReport = match load_model(path)? {
        ModelFile::Finite {
            table,
            lattice,
            generators,
        } => {
            let m = FiniteModel::new(table, lattice)?;
            lattice_checks(&m, &generators, samples, seed)
        }
        ModelFile::Cyclic {
            order,
            lattice,
            generators,
        } => {
            let m = FiniteModel::new(FiniteModel::cyclic_table(order), lattice)?;
            lattice_checks(&m, &generators, samples, seed)
        }
        ModelFile::Torus {
            dimension,
            arithmetic,
            generators,
        } => {
            let images = parse_torus_generators(dimension, &generators)?;
            match arithmetic {
                TorusArithmetic::Exact => {
                    let m = RationalTorus::new(dimension)?;
                    lattice_checks(&m, &images, samples, seed)
                }
                TorusArithmetic::Float => {
                    let m = FloatTorus::new(dimension)?;
                    let images: Vec<Vec<f64>> = images
                        .iter()
                        .map(|v| v.iter().map(|x| x.to_f64().expect("fits f64")).collect())
                        .collect();
                    lattice_checks(&m, &images, samples, seed)
                }
            }
        }
        ModelFile::Matrix { generators } => {
            let m = MatrixModel::new();
            let images = parse_matrix_generators(&generators)?;
            group_checks(&m, &images, samples, seed)
        }
    };
    let clean = report.all_passed();
    print!("{}", to_json(&report));
    Ok(clean)
}

fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Perturb {
            cmd:
                PerturbCmd::Run {
                    model,
                    epsilon,
                    seed,
                    verify_len,
                    samples,
                    out,
                },
        } => run_perturb(&model, &epsilon, seed, verify_len, samples, &out),
        Command::Weight {
            cmd: WeightCmd::Solve { graph, out },
        } => run_weight_solve(&graph, &out),
        Command::Weight {
            cmd: WeightCmd::Verify { graph, weights },
        } => run_weight_verify(&graph, &weights),
        Command::Cover {
            cmd:
                CoverCmd::Expand {
                    graph,
                    weights,
                    seed,
                    base,
                    out,
                    dot,
                },
        } => run_cover_expand(&graph, &weights, seed, base, &out, &dot),
        Command::Orb { cmd: OrbCmd::Dp { pres, p } } => {
            let (_, presentation) = parse_presentation(&read_file(&pres)?)?;
            let rank = dp_rank(&presentation, p)?;
            let report = DpReport {
                version: env!("CARGO_PKG_VERSION").into(),
                p,
                num_generators: presentation.num_generators,
                num_relators: presentation.relators.len(),
                dp_rank: rank,
            };
            print!("{}", to_json(&report));
            Ok(true)
        }
        Command::Orb {
            cmd: OrbCmd::Gs { dp, gens, rels },
        } => {
            let verdict = golod_shafarevich(dp, gens, rels);
            let report = GsReport {
                version: env!("CARGO_PKG_VERSION").into(),
                dp,
                gens,
                rels,
                verdict,
            };
            print!("{}", to_json(&report));
            Ok(true)
        }
        Command::Orb {
            cmd: OrbCmd::Singp { graph, p },
        } => {
            let g: SingularGraph = serde_json::from_str(&read_file(&graph)?)?;
            let warnings = g.validate()?;
            let extracted = g.sing_p_extract(p)?;
            let report = SingpReport {
                version: env!("CARGO_PKG_VERSION").into(),
                p,
                warnings,
                extracted_vertices: extracted.vertices.len(),
                extracted_edges: extracted.edges.len(),
                b1: extracted.b1(),
                chi_lower_bound: rational64_str(extracted.chi_lower_bound()),
                extracted,
            };
            print!("{}", to_json(&report));
            Ok(true)
        }
        Command::Tri {
            cmd: TriCmd::Skeleton { tri },
        } => {
            let t = Triangulation::parse(&read_file(&tri)?)?;
            let skel = t.one_skeleton();
            let report = SkeletonReport {
                version: env!("CARGO_PKG_VERSION").into(),
                tetrahedra: t.num_tetrahedra(),
                vertex_classes: t.num_vertex_classes(),
                edge_classes: t.num_edge_classes(),
                face_classes: t.num_face_classes(),
                euler_characteristic: t.euler_characteristic(),
                valences: skel.valences(),
                edges: skel.edges().to_vec(),
            };
            print!("{}", to_json(&report));
            Ok(true)
        }
        Command::Tri {
            cmd:
                TriCmd::Cheeger {
                    tri,
                    exact: _,
                    sweep,
                    cap,
                },
        } => {
            let t = Triangulation::parse(&read_file(&tri)?)?;
            let skel = t.one_skeleton();
            let (mode, value) = if sweep {
                ("sweep", cheeger_sweep(&skel)?)
            } else {
                ("exact", cheeger_exact(&skel, cap)?)
            };
            let report = CheegerReport {
                version: env!("CARGO_PKG_VERSION").into(),
                mode: mode.into(),
                convention: "min |dA|/|A| over nonempty A with 2|A| <= |V|".into(),
                vertices: skel.num_vertices(),
                edges: skel.edges().len(),
                value: rational64_str(value),
            };
            print!("{}", to_json(&report));
            Ok(true)
        }
        Command::Tri {
            cmd: TriCmd::Surface { tri, set, k4 },
        } => run_tri_surface(&tri, &set, k4),
        Command::Model {
            cmd: ModelCmd::Check { model, samples, seed },
        } => run_model_check(&model, samples, seed),
        Command::Util { cmd: UtilCmd::Lambda0 { d } } => {
            #[derive(Serialize)]
            struct Lambda0Report {
                version: String,
                d: f64,
                lambda0: f64,
            }
            let lambda0 = sullivan_lambda0(d)?;
            let report = Lambda0Report {
                version: env!("CARGO_PKG_VERSION").into(),
                d,
                lambda0,
            };
            print!("{}", to_json(&report));
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
