//! Command line front end for the timelike metric library.
//!
//! Every subcommand that evaluates geometry takes a JSON scene file and
//! refers to points, curves, and bodies by their scene names; point
//! arguments also accept literal comma-separated coordinates. Distances and
//! functional values print in scientific notation with eleven fractional
//! digits, one value per line, so output is easy to diff and to parse.
//!
//! Exit codes: 0 for a successful query, 1 for a negative geometric verdict
//! (an unordered pair, a failed check, a mismatched expectation), 2 for
//! input problems (bad flags, unreadable or invalid scenes, unknown names),
//! and 3 for internal failures that valid inputs should never produce.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use timelike::{
    curve_length, desitter_isometry_check, directional_functional, format_report, funk_distance,
    future_sphere_sample, hilbert_distance, null_directions, parse_scene, projective_hilbert_distance,
    render_svg, run_suite, scene_point, ContextKind, Error, Point, RenderOptions, Scene,
    SuiteConfig, SuiteKind, Vector,
};

#[derive(Parser)]
#[command(
    name = "timelike",
    version,
    about = "Timelike Funk and Hilbert distances on convex bodies",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// One-sided distance from a base point to a target point.
    Funk(PairArgs),
    /// Two-sided distance between two points.
    Hilbert(PairArgs),
    /// Report which of two points comes first, if either.
    Order(OrderArgs),
    /// Causal class of a pair: timelike, null, unrelated, or coincident.
    Classify(PairArgs),
    /// Directional metric functional at a point.
    Finsler(DirectionArgs),
    /// Sample points at a fixed one-sided distance from a base point.
    Sphere(SphereArgs),
    /// Test a direction against the timelike cone, or list null directions.
    Cone(ConeArgs),
    /// Metric length of a named curve.
    Length(LengthArgs),
    /// Compare the projective two-sided distance with the sheet geodesic.
    DesitterCheck(DesitterArgs),
    /// Run the property suite and print its report.
    Check(CheckArgs),
    /// Draw a two-dimensional scene to an SVG file.
    Render(RenderArgs),
}

#[derive(Args)]
struct PairArgs {
    /// Scene file (JSON).
    #[arg(long, value_name = "FILE")]
    scene: PathBuf,
    /// Base point: a scene name or comma-separated coordinates.
    from: String,
    /// Target point: a scene name or comma-separated coordinates.
    to: String,
}

#[derive(Args)]
struct OrderArgs {
    #[command(flatten)]
    pair: PairArgs,
    /// Fail (exit 1) unless the pair is in this relation.
    #[arg(long, value_enum)]
    expect: Option<Relation>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Relation {
    /// The first point precedes the second.
    Before,
    /// The second point precedes the first.
    After,
    /// Neither point precedes the other.
    Unrelated,
}

impl Relation {
    fn name(self) -> &'static str {
        match self {
            Relation::Before => "before",
            Relation::After => "after",
            Relation::Unrelated => "unrelated",
        }
    }
}

#[derive(Args)]
struct DirectionArgs {
    /// Scene file (JSON).
    #[arg(long, value_name = "FILE")]
    scene: PathBuf,
    /// Base point: a scene name or comma-separated coordinates.
    at: String,
    /// Direction as comma-separated ambient components.
    dir: String,
}

#[derive(Args)]
struct SphereArgs {
    /// Scene file (JSON).
    #[arg(long, value_name = "FILE")]
    scene: PathBuf,
    /// Center point: a scene name or comma-separated coordinates.
    at: String,
    /// One-sided radius of the sphere.
    #[arg(long)]
    radius: f64,
    /// Number of samples to draw.
    #[arg(long, default_value_t = 8)]
    count: usize,
    /// Seed for the sample generator.
    #[arg(long, default_value_t = 7)]
    seed: u64,
}

#[derive(Args)]
struct ConeArgs {
    /// Scene file (JSON).
    #[arg(long, value_name = "FILE")]
    scene: PathBuf,
    /// Base point: a scene name or comma-separated coordinates.
    at: String,
    /// Direction to test; omit it to list the null directions instead.
    #[arg(long)]
    dir: Option<String>,
}

#[derive(Args)]
struct LengthArgs {
    /// Scene file (JSON).
    #[arg(long, value_name = "FILE")]
    scene: PathBuf,
    /// Name of a curve defined in the scene.
    curve: String,
    /// Quadrature sample count override.
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Args)]
struct DesitterArgs {
    /// Scene file (JSON) with a projective context.
    #[arg(long, value_name = "FILE")]
    scene: PathBuf,
    /// Number of meridian point pairs to test.
    #[arg(long, default_value_t = 24)]
    pairs: usize,
    /// Largest tolerated relative deviation from the factor-two identity.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Args)]
struct CheckArgs {
    /// Property group to run.
    #[arg(long, default_value = "all", value_parser = parse_suite)]
    suite: SuiteKind,
    /// Seed for the case generators.
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Number of cases per property.
    #[arg(long, default_value_t = 250)]
    cases: usize,
    /// Override the deviation threshold of every thresholded property.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct RenderArgs {
    /// Scene file (JSON).
    #[arg(long, value_name = "FILE")]
    scene: PathBuf,
    /// Output SVG path, or "-" for standard output.
    #[arg(long, value_name = "FILE")]
    out: String,
    /// Number of fan directions used for boundary tracing.
    #[arg(long, default_value_t = 720)]
    rays: usize,
    /// Draw the timelike cone boundary of this point (repeatable).
    #[arg(long, value_name = "POINT")]
    cone_from: Vec<String>,
    /// Draw dilation spheres around this point.
    #[arg(long, value_name = "POINT")]
    sphere_from: Option<String>,
    /// Radius of a dilation sphere (repeatable).
    #[arg(long, value_name = "R")]
    sphere_radius: Vec<f64>,
    /// Mark the null directions of this point (repeatable).
    #[arg(long, value_name = "POINT")]
    null_from: Vec<String>,
    /// Image width in pixels.
    #[arg(long, default_value_t = 640.0)]
    width: f64,
    /// Image height in pixels.
    #[arg(long, default_value_t = 640.0)]
    height: f64,
}

fn parse_suite(s: &str) -> Result<SuiteKind, String> {
    s.parse::<SuiteKind>().map_err(|e| e.to_string())
}

enum Failure {
    Geometry(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        Failure::Geometry(err)
    }
}

/// Exit class of a library error: 1 for negative geometric verdicts on
/// well-posed queries, 3 for broken internal invariants, 2 for everything
/// that amounts to a bad request.
fn exit_class(err: &Error) -> u8 {
    match err {
        Error::NotInFuture
        | Error::NullChord
        | Error::NotTimelikeDirection
        | Error::NotTimelikeSeparated { .. }
        | Error::NotTimelikeCurve { .. }
        | Error::NoBoundaryHit
        | Error::BodiesNotDisjoint { .. }
        | Error::NotNested
        | Error::PointNotExterior { .. }
        | Error::EmptySeparatorFamily => 1,
        Error::InvariantViolation { .. } | Error::SamplingExhausted => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Geometry(err)) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_class(&err))
        }
        Err(Failure::Io(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn load_scene(path: &PathBuf) -> Result<Scene, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_scene(&text)?)
}

fn parse_numbers(arg: &str) -> Result<Vec<f64>, Error> {
    arg.split(',')
        .map(|s| {
            s.trim().parse::<f64>().map_err(|_| Error::SceneInvalid {
                message: format!("cannot parse '{}' as a number", s.trim()),
            })
        })
        .collect()
}

/// A point argument: first a scene name, then literal coordinates.
fn resolve_point(scene: &Scene, arg: &str) -> Result<Point, Error> {
    if let Some(p) = scene.points.get(arg) {
        return Ok(p.clone());
    }
    if arg.contains(',') {
        return scene_point(scene.chart, &parse_numbers(arg)?);
    }
    Err(Error::SceneInvalid {
        message: format!(
            "scene has no point named '{arg}' (use a scene name or comma-separated coordinates)"
        ),
    })
}

fn resolve_vector(scene: &Scene, arg: &str) -> Result<Vector, Error> {
    let components = parse_numbers(arg)?;
    if components.len() != scene.chart.ambient_len() {
        return Err(Error::SceneInvalid {
            message: format!(
                "direction needs {} components, got {}",
                scene.chart.ambient_len(),
                components.len()
            ),
        });
    }
    Ok(Vector::from_column_slice(&components))
}

fn print_value(value: f64) {
    println!("{value:.11e}");
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Funk(args) => {
            let scene = load_scene(&args.scene)?;
            let p = resolve_point(&scene, &args.from)?;
            let q = resolve_point(&scene, &args.to)?;
            let value = funk_distance(&scene.context, &p, &q)?;
            print_value(value.distance);
            Ok(0)
        }
        Command::Hilbert(args) => {
            let scene = load_scene(&args.scene)?;
            let p = resolve_point(&scene, &args.from)?;
            let q = resolve_point(&scene, &args.to)?;
            let value = if scene.context.kind() == ContextKind::ProjectiveDesitter {
                projective_hilbert_distance(&scene.context, &p, &q)?.distance
            } else {
                hilbert_distance(&scene.context, &p, &q)?.distance
            };
            print_value(value);
            Ok(0)
        }
        Command::Order(args) => {
            let scene = load_scene(&args.pair.scene)?;
            let p = resolve_point(&scene, &args.pair.from)?;
            let q = resolve_point(&scene, &args.pair.to)?;
            let relation = if scene.context.precedes(&p, &q)? {
                Relation::Before
            } else if scene.context.precedes(&q, &p)? {
                Relation::After
            } else {
                Relation::Unrelated
            };
            println!("{}", relation.name());
            match args.expect {
                Some(expected) if expected != relation => {
                    eprintln!("expected {}, found {}", expected.name(), relation.name());
                    Ok(1)
                }
                _ => Ok(0),
            }
        }
        Command::Classify(args) => {
            let scene = load_scene(&args.scene)?;
            let p = resolve_point(&scene, &args.from)?;
            let q = resolve_point(&scene, &args.to)?;
            println!("{}", scene.context.classify_pair(&p, &q)?);
            Ok(0)
        }
        Command::Finsler(args) => {
            let scene = load_scene(&args.scene)?;
            let p = resolve_point(&scene, &args.at)?;
            let v = resolve_vector(&scene, &args.dir)?;
            let value = directional_functional(&scene.context, &p, &v)?;
            print_value(value.value);
            Ok(0)
        }
        Command::Sphere(args) => {
            let scene = load_scene(&args.scene)?;
            let p = resolve_point(&scene, &args.at)?;
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            let samples =
                future_sphere_sample(&scene.context, &p, args.radius, args.count, &mut rng)?;
            for sample in &samples {
                let line: Vec<String> = sample.iter().map(|c| format!("{c:.11e}")).collect();
                println!("{}", line.join(" "));
            }
            Ok(0)
        }
        Command::Cone(args) => {
            let scene = load_scene(&args.scene)?;
            let p = resolve_point(&scene, &args.at)?;
            match args.dir {
                Some(dir) => {
                    let v = resolve_vector(&scene, &dir)?;
                    match directional_functional(&scene.context, &p, &v) {
                        Ok(_) => {
                            println!("inside");
                            Ok(0)
                        }
                        Err(
                            Error::NotTimelikeDirection | Error::NoBoundaryHit | Error::NotInFuture,
                        ) => {
                            println!("outside");
                            Ok(0)
                        }
                        Err(e) => Err(e.into()),
                    }
                }
                None => {
                    for direction in null_directions(&scene.context, &p)? {
                        let line: Vec<String> =
                            direction.iter().map(|c| format!("{c:.11e}")).collect();
                        println!("{}", line.join(" "));
                    }
                    Ok(0)
                }
            }
        }
        Command::Length(args) => {
            let scene = load_scene(&args.scene)?;
            let curve = scene.curves.get(&args.curve).ok_or_else(|| Error::SceneInvalid {
                message: format!("scene has no curve named '{}'", args.curve),
            })?;
            let curve = match args.samples {
                Some(n) => curve.clone().with_samples_hint(n),
                None => curve.clone(),
            };
            print_value(curve_length(&scene.context, &curve)?);
            Ok(0)
        }
        Command::DesitterCheck(args) => {
            let scene = load_scene(&args.scene)?;
            let pairs = meridian_pairs(args.pairs.max(1));
            let report = desitter_isometry_check(&scene.context, &pairs)?;
            println!(
                "pairs={} max_rel_dev={:.3e}",
                report.outcomes.len(),
                report.max_relative_deviation
            );
            println!("{}", report.factor_note);
            if report.max_relative_deviation <= args.tol {
                Ok(0)
            } else {
                eprintln!(
                    "deviation {:.3e} exceeds tolerance {:.3e}",
                    report.max_relative_deviation, args.tol
                );
                Ok(1)
            }
        }
        Command::Check(args) => {
            let config = SuiteConfig {
                seed: args.seed,
                cases: args.cases,
                tol: args.tol,
            };
            let start = Instant::now();
            let report = run_suite(args.suite, &config)?;
            print!("{}", format_report(&report));
            eprintln!("elapsed: {:.1} ms", start.elapsed().as_secs_f64() * 1e3);
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::Render(args) => {
            let scene = load_scene(&args.scene)?;
            let options = RenderOptions {
                rays: args.rays,
                cone_from: args.cone_from,
                sphere_from: args.sphere_from,
                sphere_radii: args.sphere_radius,
                null_from: args.null_from,
                width: args.width,
                height: args.height,
            };
            let svg = render_svg(&scene, &options)?;
            if args.out == "-" {
                print!("{svg}");
            } else {
                std::fs::write(&args.out, svg)
                    .map_err(|e| Failure::Io(format!("cannot write {}: {e}", args.out)))?;
            }
            Ok(0)
        }
    }
}

/// Deterministic pairs of points on the meridian through the band between
/// the two caps of the standard projective context, spaced widely enough to
/// stay timelike separated.
fn meridian_pairs(requested: usize) -> Vec<(Point, Point)> {
    let mut grid = 16usize;
    while (grid - 2) * (grid - 1) / 2 < requested {
        grid += 4;
    }
    let mut betas = Vec::with_capacity(grid);
    for i in 0..grid {
        let t = i as f64 / (grid - 1) as f64;
        betas.push(-0.55 + 1.1 * t);
    }
    let meridian = |beta: f64| Point::from_column_slice(&[beta.sin(), beta.cos(), 0.0]);
    let mut pairs = Vec::with_capacity(requested);
    'outer: for i in 0..grid {
        for j in (i + 2)..grid {
            pairs.push((meridian(betas[i]), meridian(betas[j])));
            if pairs.len() == requested {
                break 'outer;
            }
        }
    }
    pairs
}
