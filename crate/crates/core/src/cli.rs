//! Command-line front end. `run` returns the process exit code.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::curvature::{validate_riemann, CurvatureAlgebra, RiemannData, Space, Tolerances};
use crate::diagonal::{
    diagonal_general, diagonal_h2, diagonal_s2, plancherel_h2, s2_spectrum, sphere_harmonic_oracle,
    spectral_sum_s2_auto, DiagonalResult, QuadOptions,
};
use crate::error::{Error, Result};
use crate::gaussian::{heat_coefficients, MAX_ORDER};
use crate::index::{index, t_independence_check};
use crate::json::{cmatrix_rows, complex_pair, format_float, to_string};
use crate::linalg::{cmax_abs, CMatrix};
use crate::representation::{RepKind, Representation, RepresentationJson, Weight};

const EXIT_CODES: &str = "\
Exit codes:
  0  success
  1  a check failed (identity residual, a1 = R/6, route disagreement, index integrality)
  2  usage or parse error, or a request outside the supported cases
  3  numerical non-convergence (quadrature, spectral tail, sinh-determinant pole)

Set SYMKERNEL_THREADS to cap the number of worker threads.";

#[derive(Parser, Debug)]
#[command(name = "symkernel", version, about = "Heat kernels of homogeneous bundles over symmetric spaces", after_help = EXIT_CODES)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check every curvature identity of a space.
    Validate(Config),
    /// Heat coefficients a_0..a_K.
    Coeffs(Config),
    /// Heat kernel diagonal over a t grid.
    Diag(Config),
    /// Laplacian spectrum on S².
    Spectrum(Config),
    /// Dirac index from heat coefficients, with its t-independence check.
    Index(Config),
    /// Every applicable evaluation route side by side.
    Compare(Config),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(clap::Args, Debug)]
struct Config {
    /// Catalog spec such as "S2:r=1", "H2:a=2", "S2:r=1*H2:a=1", "flat:n=3",
    /// or a path to a Riemann tensor JSON file {"n", "riem"}.
    #[arg(long)]
    space: String,
    /// "scalar", "vector", "spinor", "weight:num/den", a representation JSON
    /// path, or a product of these joined by "*" (e.g. "spinor*weight:1").
    #[arg(long)]
    rep: Option<String>,
    /// SO(2) weight as "num/den" or an integer; used for a bare "weight".
    #[arg(long)]
    alpha: Option<String>,
    /// Truncation order K (at most 6).
    #[arg(long, default_value_t = 2)]
    order: usize,
    /// Diffusion time; repeat for a grid.
    #[arg(long = "t")]
    t: Vec<f64>,
    #[arg(long, default_value_t = 1e-10)]
    tol_alg: f64,
    /// Relative tolerance for quadrature and route agreement.
    #[arg(long, default_value_t = 1e-6)]
    tol_quad: f64,
    /// Number of eigenvalues listed by `spectrum`.
    #[arg(long, default_value_t = 10)]
    count: usize,
    /// Volume for the index when the space has none in the catalog.
    #[arg(long)]
    vol: Option<f64>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::QuadratureNotConverged { .. } | Error::TailTooLarge { .. } | Error::PoleHit { .. } => 3,
        Error::SymmetryViolation { .. }
        | Error::DegenerateSplit { .. }
        | Error::NotClosed { .. }
        | Error::RepresentationBroken { .. }
        | Error::BadAbelianField { .. }
        | Error::ParityViolation { .. }
        | Error::NotInteger { .. } => 1,
        _ => 2,
    }
}

/// Parses arguments, runs the subcommand and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return 2;
    }
    match dispatch(cli.command) {
        Ok(out) => match emit(&out) {
            Ok(()) => {
                if out.pass {
                    0
                } else {
                    1
                }
            }
            Err(e) => {
                eprintln!("error: {e}");
                2
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("SYMKERNEL_THREADS") {
        let k: usize = v.trim().parse().map_err(|_| Error::Parse(format!("SYMKERNEL_THREADS='{v}'")))?;
        // A second call in the same process keeps the first pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(k.max(1)).build_global();
    }
    Ok(())
}

struct Output {
    text: String,
    path: Option<PathBuf>,
    pass: bool,
}

fn emit(out: &Output) -> Result<()> {
    match &out.path {
        Some(p) => std::fs::write(p, &out.text)?,
        None => print!("{}", out.text),
    }
    Ok(())
}

fn dispatch(cmd: Command) -> Result<Output> {
    match cmd {
        Command::Validate(c) => cmd_validate(&c),
        Command::Coeffs(c) => cmd_coeffs(&c),
        Command::Diag(c) => cmd_diag(&c),
        Command::Spectrum(c) => cmd_spectrum(&c),
        Command::Index(c) => cmd_index(&c),
        Command::Compare(c) => cmd_compare(&c),
    }
}

/// A catalog space or a raw tensor read from disk.
struct Loaded {
    label: String,
    catalog: Option<Space>,
    riemann: RiemannData,
}

fn load_space(spec: &str) -> Result<Loaded> {
    let path = Path::new(spec);
    if spec.ends_with(".json") || path.is_file() {
        let text = std::fs::read_to_string(path)?;
        let riemann: RiemannData = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{spec}: {e}")))?;
        return Ok(Loaded { label: spec.to_string(), catalog: None, riemann });
    }
    let space: Space = spec.parse()?;
    Ok(Loaded { label: space.to_string(), riemann: space.riemann()?, catalog: Some(space) })
}

fn tolerances(c: &Config) -> Result<Tolerances> {
    if !(c.tol_alg > 0.0 && c.tol_quad > 0.0) {
        return Err(Error::BadParams("tolerances must be positive".into()));
    }
    Ok(Tolerances { tol_alg: c.tol_alg, ..Tolerances::default() })
}

fn algebra(c: &Config) -> Result<(Loaded, CurvatureAlgebra)> {
    let loaded = load_space(&c.space)?;
    let alg = CurvatureAlgebra::from_riemann(&loaded.riemann, tolerances(c)?)?;
    Ok((loaded, alg))
}

fn parse_weight(text: &str) -> Result<Weight> {
    text.trim().parse()
}

fn parse_rep(c: &Config, alg: &CurvatureAlgebra, default: &str) -> Result<Representation> {
    let alpha = c.alpha.as_deref().map(parse_weight).transpose()?;
    let text = match (&c.rep, alpha) {
        (Some(r), _) => r.clone(),
        (None, Some(_)) => "weight".to_string(),
        (None, None) => default.to_string(),
    };
    parse_representation(&text, alpha, alg, c.tol_alg)
}

/// Builds a representation from "scalar", "vector", "spinor",
/// "weight:num/den", a JSON path, or a "*"-joined product of these. A bare
/// "weight" takes `alpha`.
pub fn parse_representation(text: &str, alpha: Option<Weight>, alg: &CurvatureAlgebra, tol: f64) -> Result<Representation> {
    let n = alg.n();
    let mut rep: Option<Representation> = None;
    for part in text.split('*') {
        let part = part.trim();
        let next = match part {
            "scalar" => Representation::scalar(n),
            "vector" => Representation::vector(n),
            "spinor" => Representation::spinor(n)?,
            "weight" => Representation::weight(n, alpha.ok_or_else(|| Error::Parse("'weight' needs --alpha".into()))?)?,
            p if p.starts_with("weight:") => Representation::weight(n, parse_weight(&p["weight:".len()..])?)?,
            p if p.ends_with(".json") || Path::new(p).is_file() => {
                let text = std::fs::read_to_string(p)?;
                let raw: RepresentationJson = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{p}: {e}")))?;
                raw.into_representation(alg, tol)?
            }
            p => return Err(Error::Parse(format!("unknown representation '{p}'"))),
        };
        rep = Some(match rep {
            None => next,
            Some(prev) => Representation::product(&prev, &next)?,
        });
    }
    let rep = rep.ok_or_else(|| Error::Parse("empty representation".into()))?;
    // Single factors keep their own label, which spells out the weight.
    Ok(if text.contains('*') { rep.with_label(text) } else { rep })
}

fn t_grid(c: &Config, default: &[f64]) -> Result<Vec<f64>> {
    let ts = if c.t.is_empty() { default.to_vec() } else { c.t.clone() };
    if ts.iter().any(|&t| !(t > 0.0 && t.is_finite())) {
        return Err(Error::BadParams("every t must be positive".into()));
    }
    if ts.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::BadParams("the t grid must be strictly increasing".into()));
    }
    Ok(ts)
}

fn alpha_pair(rep: &Representation) -> Option<[i64; 2]> {
    match rep.kind() {
        RepKind::Scalar => Some([0, 1]),
        _ => rep.alpha().map(|a| [a.num(), a.den()]),
    }
}

fn csv_header(cols: &[&str]) -> String {
    let mut s = cols.join(",");
    s.push('\n');
    s
}

fn cmd_validate(c: &Config) -> Result<Output> {
    let loaded = load_space(&c.space)?;
    let report = validate_riemann(&loaded.riemann, tolerances(c)?);
    let text = match c.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Record<'a> {
                space: &'a str,
                report: &'a crate::curvature::ValidationReport,
            }
            to_string(&Record { space: &loaded.label, report: &report })?
        }
        Format::Csv => {
            let mut s = csv_header(&["family", "residual", "pass"]);
            for f in &report.families {
                let _ = writeln!(s, "{},{},{}", f.family, format_float(f.residual), f.pass);
            }
            if let Some(e) = &report.construction_error {
                let _ = writeln!(s, "construction,,false # {e}");
            }
            s
        }
    };
    Ok(Output { text, path: c.out.clone(), pass: report.pass })
}

fn cmd_coeffs(c: &Config) -> Result<Output> {
    if c.order > MAX_ORDER {
        return Err(Error::BadParams(format!("order {} exceeds {MAX_ORDER}", c.order)));
    }
    let (loaded, alg) = algebra(c)?;
    let rep = parse_rep(c, &alg, "scalar")?;
    let hc = heat_coefficients(&alg, &rep, c.order, c.tol_alg, &loaded.label)?;
    let r = alg.scalar_curvature();
    let a1_residual = hc.a1_residual(r);
    let scale = alg.curvature_scale();
    let a1_pass = a1_residual.is_none_or(|res| res <= c.tol_alg * scale);

    #[derive(Serialize)]
    struct Row {
        k: usize,
        trace: [f64; 2],
        a1_check: Option<f64>,
        matrix: Vec<Vec<[f64; 2]>>,
    }
    let rows: Vec<Row> = hc
        .a
        .iter()
        .enumerate()
        .map(|(k, a)| Row {
            k,
            trace: complex_pair(crate::linalg::ctrace(a)),
            a1_check: if k == 1 { a1_residual } else { None },
            matrix: cmatrix_rows(a),
        })
        .collect();
    let text = match c.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Record<'a> {
                space: &'a str,
                rep: &'a str,
                alpha: Option<[i64; 2]>,
                #[serde(rename = "K")]
                order: usize,
                scalar_curvature: f64,
                rows: &'a [Row],
                a1_pass: bool,
            }
            to_string(&Record {
                space: &loaded.label,
                rep: rep.label(),
                alpha: alpha_pair(&rep),
                order: c.order,
                scalar_curvature: r,
                rows: &rows,
                a1_pass,
            })?
        }
        Format::Csv => {
            let mut s = csv_header(&["k", "trace_re", "trace_im", "a1_check"]);
            for row in &rows {
                let check = row.a1_check.map(format_float).unwrap_or_default();
                let _ = writeln!(s, "{},{},{},{}", row.k, format_float(row.trace[0]), format_float(row.trace[1]), check);
            }
            s
        }
    };
    Ok(Output { text, path: c.out.clone(), pass: a1_pass })
}

/// One evaluation in the CLI record layout.
#[derive(Serialize)]
struct Evaluation {
    space: String,
    rep: String,
    alpha: Option<[i64; 2]>,
    t: f64,
    method: &'static str,
    value: [f64; 2],
    est_error: f64,
}

fn is_rank_one_line(rep: &Representation) -> bool {
    rep.dim() == 1 && rep.abelian_field().is_none() && matches!(rep.kind(), RepKind::Scalar | RepKind::Weight)
}

fn line_weight(rep: &Representation) -> Weight {
    rep.alpha().unwrap_or(Weight::ZERO)
}

/// Every route that applies to (space, rep), in a fixed order.
fn routes(loaded: &Loaded, alg: &CurvatureAlgebra, rep: &Representation, t: f64, opts: &QuadOptions, tol: f64) -> Result<Vec<DiagonalResult>> {
    let surface = loaded.catalog.as_ref().and_then(Space::rank_one_surface);
    match surface {
        Some((compact, radius)) if is_rank_one_line(rep) => {
            let alpha = line_weight(rep);
            if compact {
                let mut out = vec![diagonal_s2(radius, alpha, t, opts)?, spectral_sum_s2_auto(radius, alpha, t, 1e-15)?];
                if alpha == Weight::ZERO {
                    let mut lmax = 64;
                    loop {
                        match sphere_harmonic_oracle(radius, t, lmax) {
                            Err(Error::TailTooLarge { .. }) if lmax < 1 << 20 => lmax *= 2,
                            other => {
                                out.push(other?);
                                break;
                            }
                        }
                    }
                }
                Ok(out)
            } else {
                Ok(vec![diagonal_h2(radius, alpha, t, opts)?, plancherel_h2(radius, alpha, t, opts)?])
            }
        }
        _ => Ok(vec![diagonal_general(alg, rep, t, opts, tol)?]),
    }
}

fn evaluation(loaded: &Loaded, rep: &Representation, r: &DiagonalResult) -> Evaluation {
    Evaluation {
        space: loaded.label.clone(),
        rep: rep.label().to_string(),
        alpha: alpha_pair(rep),
        t: r.t,
        method: r.method.as_str(),
        value: complex_pair(r.trace()),
        est_error: r.est_error,
    }
}

fn evaluations_text(rows: &[Evaluation], format: Format) -> Result<String> {
    Ok(match format {
        Format::Json => to_string(&rows)?,
        Format::Csv => {
            let mut s = csv_header(&["t", "value", "est_error", "method"]);
            for e in rows {
                let _ = writeln!(s, "{},{},{},{}", format_float(e.t), format_float(e.value[0]), format_float(e.est_error), e.method);
            }
            s
        }
    })
}

const DEFAULT_GRID: [f64; 5] = [0.1, 0.25, 0.5, 1.0, 2.0];

fn cmd_diag(c: &Config) -> Result<Output> {
    let (loaded, alg) = algebra(c)?;
    let rep = parse_rep(c, &alg, "scalar")?;
    let ts = t_grid(c, &DEFAULT_GRID)?;
    let opts = QuadOptions::default().with_rel_tol(c.tol_quad.min(1e-10));
    let mut rows = Vec::new();
    for &t in &ts {
        let first = routes(&loaded, &alg, &rep, t, &opts, c.tol_alg)?.swap_remove(0);
        rows.push(evaluation(&loaded, &rep, &first));
    }
    Ok(Output { text: evaluations_text(&rows, c.format)?, path: c.out.clone(), pass: true })
}

fn cmd_spectrum(c: &Config) -> Result<Output> {
    let (loaded, alg) = algebra(c)?;
    let rep = parse_rep(c, &alg, "scalar")?;
    let radius = match loaded.catalog.as_ref().and_then(Space::rank_one_surface) {
        Some((true, r)) if is_rank_one_line(&rep) => r,
        _ => return Err(Error::Unsupported("spectrum is listed for scalar or weight bundles on S² only".into())),
    };
    let lines = s2_spectrum(radius, line_weight(&rep), c.count);
    let text = match c.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Record<'a> {
                space: &'a str,
                rep: &'a str,
                alpha: Option<[i64; 2]>,
                lines: &'a [crate::diagonal::SpectralLine],
            }
            to_string(&Record { space: &loaded.label, rep: rep.label(), alpha: alpha_pair(&rep), lines: &lines })?
        }
        Format::Csv => {
            let mut s = csv_header(&["k", "l", "eigenvalue", "multiplicity"]);
            for (k, ln) in lines.iter().enumerate() {
                let _ = writeln!(s, "{k},{},{},{}", format_float(ln.l), format_float(ln.eigenvalue), format_float(ln.multiplicity));
            }
            s
        }
    };
    Ok(Output { text, path: c.out.clone(), pass: true })
}

const INDEX_GRID: [f64; 3] = [0.2, 0.5, 1.0];
const SPREAD_TOL: f64 = 1e-6;

fn cmd_index(c: &Config) -> Result<Output> {
    let (loaded, alg) = algebra(c)?;
    let rep = parse_rep(c, &alg, "spinor")?;
    let vol = c.vol.or_else(|| loaded.catalog.as_ref().and_then(Space::volume)).ok_or(Error::NotCompact)?;
    let ts = t_grid(c, &INDEX_GRID)?;
    let result = index(&alg, &rep, vol, c.tol_alg)?;
    let opts = QuadOptions::default().with_rel_tol(c.tol_quad.min(1e-10));
    let spread = match t_independence_check(&alg, &rep, vol, &ts, &opts, c.tol_alg) {
        Ok(check) => Some(check.spread),
        // Not every space admits the contour evaluation; the index stands alone.
        Err(Error::MixedContourUnsupported(_)) | Err(Error::Unsupported(_)) => None,
        Err(e) => return Err(e),
    };
    let pass = spread.is_none_or(|s| s <= SPREAD_TOL);
    let text = match c.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Record<'a> {
                n: usize,
                space: &'a str,
                rep: &'a str,
                index: f64,
                nearest_integer: i64,
                t_spread: Option<f64>,
            }
            to_string(&Record {
                n: alg.n(),
                space: &loaded.label,
                rep: rep.label(),
                index: result.index,
                nearest_integer: result.nearest_integer,
                t_spread: spread,
            })?
        }
        Format::Csv => {
            let mut s = csv_header(&["n", "index", "nearest_integer", "t_spread"]);
            let sp = spread.map(format_float).unwrap_or_default();
            let _ = writeln!(s, "{},{},{},{sp}", alg.n(), format_float(result.index), result.nearest_integer);
            s
        }
    };
    Ok(Output { text, path: c.out.clone(), pass })
}

fn cmd_compare(c: &Config) -> Result<Output> {
    let (loaded, alg) = algebra(c)?;
    let rep = parse_rep(c, &alg, "scalar")?;
    let ts = t_grid(c, &DEFAULT_GRID)?;
    let opts = QuadOptions::default().with_rel_tol(c.tol_quad.min(1e-10));
    let mut rows = Vec::new();
    let mut worst: f64 = 0.0;
    for &t in &ts {
        let results = routes(&loaded, &alg, &rep, t, &opts, c.tol_alg)?;
        if results.len() < 2 {
            return Err(Error::Unsupported(format!("only one evaluation route applies to {} with {}", loaded.label, rep.label())));
        }
        for (i, a) in results.iter().enumerate() {
            for b in &results[i + 1..] {
                let scale = a.value.iter().chain(b.value.iter()).fold(0.0f64, |m, z| m.max(z.norm()));
                worst = worst.max(cmax_abs(&(&a.value - &b.value as &CMatrix)) / scale.max(f64::MIN_POSITIVE));
            }
        }
        rows.extend(results.iter().map(|r| evaluation(&loaded, &rep, r)));
    }
    let pass = worst <= c.tol_quad;
    let text = match c.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Record<'a> {
                rows: &'a [Evaluation],
                max_rel_deviation: f64,
                tol_quad: f64,
                pass: bool,
            }
            to_string(&Record { rows: &rows, max_rel_deviation: worst, tol_quad: c.tol_quad, pass })?
        }
        Format::Csv => evaluations_text(&rows, Format::Csv)?,
    };
    Ok(Output { text, path: c.out.clone(), pass })
}
