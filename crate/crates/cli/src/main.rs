//! `lemniprint`: fingerprints of polynomial lemniscates from the command line.

mod plot;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lemniprint::approx::{approximate_diffeo, default_degree, DEFAULT_RADIUS};
use lemniprint::conformal::trace_lemniscate;
use lemniprint::fingerprint::{fingerprint, hausdorff_distance};
use lemniprint::formats::{self, ApproxConfig, FingerprintSidecar, ReconstructionReport};
use lemniprint::polynomial::{is_proper, DEFAULT_MIN_MARGIN};
use lemniprint::blaschke::blaschke_critical_values;
use lemniprint::weld::{count_classes, reconstruct, WeldOptions};
use lemniprint::{Blaschke, Complex64, Curve, Diffeo, Error, Polynomial};

#[derive(Parser)]
#[command(name = "lemniprint", version, about = "Fingerprints of polynomial lemniscates")]
struct Cli {
    /// Seed for every multistart stage.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Output directory, created if missing.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a polynomial defines a proper lemniscate.
    Proper {
        #[arg(long)]
        poly: PathBuf,
        /// Required distance between the critical values and the unit circle.
        #[arg(long, default_value_t = DEFAULT_MIN_MARGIN)]
        margin: f64,
    },
    /// Trace the lemniscate: `curve.csv` and `curve.svg`.
    Trace {
        #[arg(long)]
        poly: PathBuf,
        /// Number of boundary samples; defaults to 512 per unit of degree.
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_MIN_MARGIN)]
        margin: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Fingerprint: `diffeo.csv`, `diffeo.svg`, `blaschke.json`, `fingerprint.json`.
    Fingerprint {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_MIN_MARGIN)]
        margin: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Approximate a diffeomorphism by an nth root of a Blaschke product:
    /// `blaschke.json`, `report.json`, `approx.csv`, `approx.svg`.
    Approx {
        #[arg(long)]
        diffeo: PathBuf,
        /// JSON `{"n": .., "R": .., "N": ..}`; flags take precedence.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long = "R")]
        radius: Option<f64>,
        #[arg(long = "N")]
        degree: Option<usize>,
        #[command(flatten)]
        out: Output,
    },
    /// Recover the lemniscate from a Blaschke product: `polynomial.json`, `report.json`.
    Reconstruct {
        #[arg(long)]
        blaschke: PathBuf,
        /// Fingerprint grid used to compare candidates.
        #[arg(long)]
        grid: Option<usize>,
        #[command(flatten)]
        out: Output,
    },
    /// Count EL polynomials and fingerprint classes sharing the critical
    /// values of a polynomial or a Blaschke product.
    Count {
        #[arg(long, conflicts_with = "blaschke", required_unless_present = "blaschke")]
        poly: Option<PathBuf>,
        #[arg(long)]
        blaschke: Option<PathBuf>,
    },
    /// Hausdorff distance between two curve CSV files.
    Hausdorff { first: PathBuf, second: PathBuf },
}

/// Malformed input and IO failures exit with 2, mathematical failures with 1.
enum Failure {
    Input(String),
    Math(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Format(_) | Error::Io(_) | Error::InvalidInput(_) => Failure::Input(e.to_string()),
            _ => Failure::Math(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write(dir: &Path, name: &str, contents: &str) -> Outcome {
    fs::create_dir_all(dir).map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_poly(path: &Path) -> Result<Polynomial, Failure> {
    formats::read_polynomial(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_blaschke(path: &Path) -> Result<Blaschke, Failure> {
    formats::read_blaschke(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_diffeo(path: &Path) -> Result<Diffeo, Failure> {
    formats::read_diffeo_csv(read(path)?.as_bytes()).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_curve(path: &Path) -> Result<Curve, Failure> {
    formats::read_curve_csv(read(path)?.as_bytes()).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn diffeo_csv(k: &Diffeo) -> Result<String, Failure> {
    let mut buf = Vec::new();
    formats::write_diffeo_csv(k, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

/// Shortest form of `x` rounded to 12 significant digits, so that values
/// like `0.9999999999999999` read as `1.0`.
fn num(x: f64) -> String {
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    format!("{rounded:?}")
}

fn cnum(z: Complex64) -> String {
    let im = num(z.im);
    if im.starts_with('-') {
        format!("{}{}i", num(z.re), im)
    } else {
        format!("{}+{}i", num(z.re), im)
    }
}

fn grid_for(grid: Option<usize>, n: usize) -> usize {
    grid.unwrap_or(512 * n)
}

fn proper(poly: &Path, margin: f64) -> Outcome {
    let p = read_poly(poly)?;
    match is_proper(&p, margin) {
        Ok(l) => {
            println!("proper lemniscate of degree {}", l.degree());
            println!("margin {}", num(l.margin));
            println!("max critical value modulus {}", num(l.critical.max_abs_value));
            for (z, w) in l.critical.points.iter().zip(&l.critical.values) {
                println!("critical point {} value {}", cnum(*z), cnum(*w));
            }
            for z in &l.zeros {
                println!("zero {}", cnum(*z));
            }
            Ok(())
        }
        Err(Error::NotProper { max_critical_modulus }) => {
            Err(Failure::Math(format!("not proper: critical value modulus {}", num(max_critical_modulus))))
        }
        Err(Error::MarginTooSmall { max_critical_modulus, min_margin }) => Err(Failure::Math(format!(
            "margin too small: critical value modulus {} exceeds 1 - {}",
            num(max_critical_modulus),
            num(min_margin)
        ))),
        Err(e) => Err(e.into()),
    }
}

fn trace(poly: &Path, grid: Option<usize>, margin: f64, out: &Path) -> Outcome {
    let l = is_proper(&read_poly(poly)?, margin)?;
    let curve = trace_lemniscate(&l, grid_for(grid, l.degree()))?;
    let mut buf = Vec::new();
    formats::write_curve_csv(&curve, &mut buf)?;
    write(out, "curve.csv", &String::from_utf8(buf).expect("csv output is utf-8"))?;
    write(out, "curve.svg", &plot::curve_svg(&curve))?;
    println!("traced {} points", curve.len());
    Ok(())
}

fn fingerprint_cmd(poly: &Path, grid: Option<usize>, margin: f64, out: &Path) -> Outcome {
    let l = is_proper(&read_poly(poly)?, margin)?;
    let f = fingerprint(&l, grid_for(grid, l.degree()))?;
    write(out, "diffeo.csv", &diffeo_csv(&f.diffeo)?)?;
    write(out, "diffeo.svg", &plot::diffeo_svg(&f.diffeo))?;
    write(out, "blaschke.json", &formats::write_blaschke(&f.blaschke)?)?;
    write(out, "fingerprint.json", &formats::to_json(&FingerprintSidecar::new(&f))?)?;
    println!("phase discrepancy {:e}", f.report.phase_discrepancy);
    println!("cross-check {:e}", f.report.cross_check);
    Ok(())
}

fn approx(
    diffeo: &Path,
    config: Option<&Path>,
    n: Option<usize>,
    radius: Option<f64>,
    degree: Option<usize>,
    out: &Path,
) -> Outcome {
    let psi = read_diffeo(diffeo)?;
    let cfg: Option<ApproxConfig> = match config {
        Some(path) => Some(formats::from_json(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?),
        None => None,
    };
    let n = n.or(cfg.map(|c| c.n)).ok_or_else(|| Failure::Input("the degree n is required (--n or config)".into()))?;
    let radius = radius.or(cfg.and_then(|c| c.radius)).unwrap_or(DEFAULT_RADIUS);
    let degree = degree.or(cfg.and_then(|c| c.degree)).unwrap_or_else(|| default_degree(psi.grid_size()));
    let a = approximate_diffeo(&psi, n, radius, degree)?;
    let sampled = a.root.sample(psi.grid_size());
    write(out, "blaschke.json", &formats::write_blaschke(&a.blaschke)?)?;
    write(out, "report.json", &formats::to_json(&a.report)?)?;
    write(out, "approx.csv", &diffeo_csv(&sampled)?)?;
    write(out, "approx.svg", &plot::diffeo_svg(&sampled))?;
    println!("c1 error {:e}", a.report.c1_error);
    Ok(())
}

fn reconstruct_cmd(blaschke: &Path, grid: Option<usize>, seed: u64, out: &Path) -> Outcome {
    let b = read_blaschke(blaschke)?;
    let n = b.degree();
    let mut opts = WeldOptions { seed, ..WeldOptions::default() };
    if let Some(m) = grid {
        opts.grid_per_degree = m.div_ceil(n);
    }
    let r = reconstruct(&b, opts)?;
    let report = ReconstructionReport::new(&b, &r);
    write(out, "polynomial.json", &formats::write_polynomial(&r.lemniscate.poly)?)?;
    write(out, "report.json", &formats::to_json(&report)?)?;
    println!("discrepancy {:e}", r.discrepancy);
    println!("critical value error {:e}", r.critical_value_error);
    Ok(())
}

fn count(poly: Option<&Path>, blaschke: Option<&Path>, seed: u64) -> Outcome {
    let w = match (poly, blaschke) {
        (Some(p), _) => {
            let p = read_poly(p)?;
            lemniprint::polynomial::critical_data(&p)?.values
        }
        (None, Some(b)) => {
            let b = read_blaschke(b)?;
            blaschke_critical_values(&b)?
        }
        (None, None) => return Err(Failure::Input("one of --poly or --blaschke is required".into())),
    };
    let r = count_classes(&w, WeldOptions { seed, ..WeldOptions::default() })?;
    println!("({}, {})", r.polynomial_count, r.class_count);
    Ok(())
}

fn hausdorff(first: &Path, second: &Path) -> Outcome {
    let d = hausdorff_distance(&read_curve(first)?, &read_curve(second)?);
    println!("{d:?}");
    Ok(())
}

fn configure_threads() -> Outcome {
    let Ok(value) = std::env::var("LEMNIPRINT_THREADS") else { return Ok(()) };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Failure::Input(format!("LEMNIPRINT_THREADS must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Input(e.to_string()))
}

fn run(cli: Cli) -> Outcome {
    configure_threads()?;
    match cli.command {
        Command::Proper { poly, margin } => proper(&poly, margin),
        Command::Trace { poly, grid, margin, out } => trace(&poly, grid, margin, &out.out),
        Command::Fingerprint { poly, grid, margin, out } => fingerprint_cmd(&poly, grid, margin, &out.out),
        Command::Approx { diffeo, config, n, radius, degree, out } => {
            approx(&diffeo, config.as_deref(), n, radius, degree, &out.out)
        }
        Command::Reconstruct { blaschke, grid, out } => reconstruct_cmd(&blaschke, grid, cli.seed, &out.out),
        Command::Count { poly, blaschke } => count(poly.as_deref(), blaschke.as_deref(), cli.seed),
        Command::Hausdorff { first, second } => hausdorff(&first, &second),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Math(msg)) => {
            println!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {}", msg.replace('\n', " "));
            ExitCode::from(2)
        }
    }
}
