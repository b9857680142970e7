//! `holodyn`: command line front end of the numerical laboratory.

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand};
use holodyn_core::basin::{render_slice, AlphaMap, RENDER_MAX_ITER};
use holodyn_core::cr::{anisotropy_fit, FitDirection, DEFAULT_SEGMENTS};
use holodyn_core::entropy::{entropy_spanning, BlaschkeProduct};
use holodyn_core::fibration::{linking_number, FiberCircle};
use holodyn_core::geometry::{DomainModel, PlanarGrid, PointC2};
use holodyn_core::kobayashi::{kobayashi_bounds, kobayashi_exact, EuclidBall};
use holodyn_core::radius::{julia_origin_escape, rotation_scan, Rational, FIBER_WINDOW};
use holodyn_core::rates::{hopf_bound_check, HarmonicProbe, DEFAULT_ORDER};
use num_complex::Complex64;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Parser)]
#[command(name = "holodyn", version, about = "Numerical laboratory for holomorphic dynamics and CR geometry in C^2")]
struct Cli {
    /// File of `key=value` lines supplying defaults for any flag.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Seed recorded in the output header.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true, env = "HOLODYN_THREADS")]
    threads: Option<usize>,
    /// Output file; standard output when absent.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Render a fiber slice of the basin as a binary PPM.
    Basin(BasinArgs),
    /// Conformal-radius scan on the circle |w| = 1 - delta.
    RadiusScan(ScanArgs),
    /// Escape fraction of a small circle about the parabolic origin.
    Baire(BaireArgs),
    /// CR distances from a boundary point along a tangent direction.
    CrBall(CrBallArgs),
    /// Kobayashi distance, exact or bracketed by balls.
    Kobayashi(KobayashiArgs),
    /// Quantitative Hopf lemma for arc indicator data.
    Hopf(HopfArgs),
    /// Entropy of a Blaschke product from spanning-set growth.
    Entropy(EntropyArgs),
    /// Linking number of two fiber circles.
    Link(LinkArgs),
}

#[derive(Debug, Args)]
struct BasinArgs {
    /// Rotation number: a float, `p/q`, or `golden`.
    #[arg(long, value_parser = parse_alpha)]
    alpha: f64,
    /// Fiber base `re,im`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "0,0")]
    w: Complex64,
    /// Pixels per side.
    #[arg(long, default_value_t = 512)]
    grid: usize,
    /// Half width of the square window.
    #[arg(long, default_value_t = FIBER_WINDOW)]
    window: f64,
    #[arg(long, default_value_t = RENDER_MAX_ITER)]
    max_iter: usize,
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[arg(long, value_parser = parse_alpha, default_value = "golden")]
    alpha: f64,
    #[arg(long, default_value_t = 64)]
    samples: usize,
    #[arg(long, default_value_t = 128)]
    resolution: usize,
    #[arg(long, default_value_t = 0.05)]
    delta: f64,
    #[arg(long, default_value_t = holodyn_core::basin::SCAN_MAX_ITER)]
    max_iter: usize,
}

#[derive(Debug, Args)]
struct BaireArgs {
    /// Rational rotation number `p/q`.
    #[arg(long, value_parser = parse_rational)]
    alpha: Rational,
    /// Fiber base on the unit circle (default `e^{2 pi i alpha}`).
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    w0: Option<Complex64>,
    #[arg(long, default_value_t = 0.01)]
    probe: f64,
    #[arg(long, default_value_t = 256)]
    samples: usize,
    /// Applications of the q-fold iterate.
    #[arg(long, default_value_t = 20_000)]
    budget: usize,
}

#[derive(Debug, Args)]
struct CrBallArgs {
    /// `ball`, `ellipsoid:A` or `siegel`.
    #[arg(long, value_parser = parse_domain, default_value = "ball")]
    domain: DomainModel,
    /// Boundary point `w;z`, each coordinate `re,im`.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true, default_value = "1;0")]
    point: PointC2,
    /// `real` (the direction i N) or `complex`.
    #[arg(long, value_parser = parse_direction, default_value = "real")]
    direction: FitDirection,
    /// Strictly decreasing displacements.
    #[arg(long, value_delimiter = ',', default_value = "0.2,0.1,0.05,0.025,0.0125")]
    deltas: Vec<f64>,
    #[arg(long, default_value_t = DEFAULT_SEGMENTS)]
    segments: usize,
}

#[derive(Debug, Args)]
struct KobayashiArgs {
    /// `disk`, `ball`, `polydisc`, `siegel` or `ellipsoid:A`.
    #[arg(long, value_parser = parse_domain, default_value = "ball")]
    domain: DomainModel,
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    a: PointC2,
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    b: PointC2,
}

#[derive(Debug, Args)]
struct HopfArgs {
    /// Half angle of the arc where the data equal -1.
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
    arc_angle: f64,
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    #[arg(long, default_value_t = 0.1)]
    t: f64,
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    order: usize,
}

#[derive(Debug, Args)]
struct EntropyArgs {
    /// Zeros `re,im;re,im;...`.
    #[arg(long, value_parser = parse_zeros, allow_hyphen_values = true)]
    zeros: Zeros,
    /// Rotation factor `e^{2 pi i x}`.
    #[arg(long, default_value_t = 0.0)]
    rotation_turns: f64,
    #[arg(long, default_value_t = 12)]
    nmax: usize,
    #[arg(long, default_value_t = 0.01)]
    eps: f64,
}

#[derive(Debug, Args)]
struct LinkArgs {
    /// `ball` or `ellipsoid:A`.
    #[arg(long, value_parser = parse_domain, default_value = "ball")]
    domain: DomainModel,
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true, default_value = "1;0")]
    eta1: PointC2,
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true, default_value = "0;1")]
    eta2: PointC2,
    #[arg(long, default_value_t = 256)]
    order: usize,
}

#[derive(Debug, Clone)]
struct Zeros(Vec<Complex64>);

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(format!("expected `re,im`, got `{s}`")),
    }
}

fn parse_point(s: &str) -> Result<PointC2, String> {
    match s.split(';').collect::<Vec<_>>().as_slice() {
        [w] => Ok(PointC2::new(parse_complex(w)?, Complex64::new(0.0, 0.0))),
        [w, z] => Ok(PointC2::new(parse_complex(w)?, parse_complex(z)?)),
        _ => Err(format!("expected `w;z`, got `{s}`")),
    }
}

fn parse_zeros(s: &str) -> Result<Zeros, String> {
    s.split(';').filter(|t| !t.trim().is_empty()).map(parse_complex).collect::<Result<_, _>>().map(Zeros)
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    let (p, q) = s.split_once('/').unwrap_or((s, "1"));
    let p: i64 = p.trim().parse().map_err(|e| format!("`{s}`: {e}"))?;
    let q: u32 = q.trim().parse().map_err(|e| format!("`{s}`: {e}"))?;
    Rational::new(p, q).map_err(|e| e.to_string())
}

fn parse_alpha(s: &str) -> Result<f64, String> {
    if s == "golden" {
        return Ok(AlphaMap::golden().alpha);
    }
    if s.contains('/') {
        return parse_rational(s).map(|r| r.value());
    }
    s.parse::<f64>().map_err(|e| format!("`{s}`: {e}"))
}

fn parse_domain(s: &str) -> Result<DomainModel, String> {
    match s {
        "ball" => Ok(DomainModel::UnitBall2),
        "disk" => Ok(DomainModel::UnitDisk),
        "polydisc" => Ok(DomainModel::Polydisc2),
        "siegel" => Ok(DomainModel::SiegelModelBall),
        _ => match s.strip_prefix("ellipsoid:") {
            Some(a) => {
                let a = a.parse::<f64>().map_err(|e| format!("`{s}`: {e}"))?;
                DomainModel::ellipsoid(a).map_err(|e| e.to_string())
            }
            None => Err(format!("unknown domain `{s}`")),
        },
    }
}

fn parse_direction(s: &str) -> Result<FitDirection, String> {
    match s {
        "real" => Ok(FitDirection::Real),
        "complex" => Ok(FitDirection::Complex),
        _ => Err(format!("expected `real` or `complex`, got `{s}`")),
    }
}

/// Shortest round-trip form, in exponent notation outside `[1e-4, 1e15)`.
fn num(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && a.is_finite() && !(1e-4..1e15).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

struct Failure {
    module: &'static str,
    message: String,
}

fn fail(module: &'static str) -> impl Fn(holodyn_core::Error) -> Failure {
    move |e| Failure { module, message: e.to_string() }
}

enum Output {
    Text(String),
    Binary(Vec<u8>),
}

fn csv(header: &[String], body: &str) -> Output {
    let mut out = String::new();
    for line in header {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    out.push_str(body);
    Output::Text(out)
}

fn run(command: &Command, header: Vec<String>) -> Result<Output, Failure> {
    match command {
        Command::Basin(a) => {
            let e = fail("basin-dynamics");
            let grid = PlanarGrid::centered(a.window, a.grid).map_err(&e)?;
            let slice = render_slice(&AlphaMap::new(a.alpha), a.w, grid, a.max_iter).map_err(&e)?;
            Ok(Output::Binary(slice.to_ppm(&header)))
        }
        Command::RadiusScan(a) => {
            let report = rotation_scan(&AlphaMap::new(a.alpha), a.samples, a.resolution, a.delta, a.max_iter)
                .map_err(fail("conformal-radius"))?;
            let mut comments = header;
            comments.push(format!("r_low={} r_high={} spread={}", report.r_low, report.r_high, report.spread()));
            if let Some(m) = report.monotonicity {
                comments.push(format!("orbit_pairs={} violations={} worst_ratio={}", m.pairs, m.violations, m.worst_ratio));
            }
            Ok(Output::Text(report.to_csv(&comments)))
        }
        Command::Baire(a) => {
            let w0 = a.w0.unwrap_or_else(|| Complex64::cis(std::f64::consts::TAU * a.alpha.value()));
            let fraction =
                julia_origin_escape(a.alpha, w0, a.probe, a.samples, a.budget).map_err(fail("conformal-radius"))?;
            let body = format!(
                "alpha,w0_re,w0_im,probe,samples,budget,escape_fraction\n{}/{},{},{},{},{},{},{}\n",
                a.alpha.num,
                a.alpha.den,
                num(w0.re),
                num(w0.im),
                num(a.probe),
                a.samples,
                a.budget,
                num(fraction)
            );
            Ok(csv(&header, &body))
        }
        Command::CrBall(a) => {
            let fit = anisotropy_fit(&a.domain, a.point, &a.deltas, a.direction, a.segments).map_err(fail("cr-metric"))?;
            let mut comments = header;
            comments.push(format!("slope={}", fit.slope));
            let mut body = String::from("delta,dcr_upper,dcr_lower,residual\n");
            for r in &fit.rows {
                body.push_str(&format!("{},{},{},{}\n", num(r.delta), num(r.upper), num(r.lower), num(r.residual)));
            }
            Ok(csv(&comments, &body))
        }
        Command::Kobayashi(a) => {
            let e = fail("kobayashi-metric");
            let v = match a.domain {
                DomainModel::Ellipsoid { a: s } => {
                    let inner = EuclidBall::new(PointC2::ORIGIN, s.min(1.0));
                    let outer = EuclidBall::new(PointC2::ORIGIN, s.max(1.0));
                    kobayashi_bounds(&a.domain, a.a, a.b, inner, outer).map_err(&e)?
                }
                _ => kobayashi_exact(&a.domain, a.a, a.b).map_err(&e)?,
            };
            Ok(csv(&header, &format!("method,lower,upper\n{},{},{}\n", v.method.name(), num(v.lower), num(v.upper))))
        }
        Command::Hopf(a) => {
            let e = fail("boundary-rates");
            let probe = HarmonicProbe::arc_indicator(a.radius, a.arc_angle, a.order).map_err(&e)?;
            let c = hopf_bound_check(&probe, a.t).map_err(&e)?;
            Ok(csv(&header, &format!("u_val,bound,ok\n{},{},{}\n", num(c.u_val), num(c.bound), c.ok)))
        }
        Command::Entropy(a) => {
            let e = fail("fibration-entropy");
            let rotation = Complex64::cis(std::f64::consts::TAU * a.rotation_turns);
            let f = BlaschkeProduct::new(a.zeros.0.clone(), rotation).map_err(&e)?;
            let est = entropy_spanning(&f, a.nmax, a.eps).map_err(&e)?;
            Ok(csv(&header, &est.to_csv()))
        }
        Command::Link(a) => {
            let e = fail("fibration-entropy");
            let c1 = FiberCircle::new(&a.domain, a.eta1).map_err(&e)?;
            let c2 = FiberCircle::new(&a.domain, a.eta2).map_err(&e)?;
            let lk = linking_number(&c1, &c2, a.order).map_err(&e)?;
            Ok(csv(&header, &format!("linking\n{}\n", num(lk))))
        }
    }
}

/// Appends `--key value` for every config entry whose flag is absent.
fn merge_config(args: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let mut path = None;
    for (i, a) in args.iter().enumerate() {
        let a = a.to_string_lossy();
        if a == "--config" {
            path = args.get(i + 1).map(PathBuf::from);
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(PathBuf::from(p));
        }
    }
    let Some(path) = path else { return Ok(args) };
    let text = std::fs::read_to_string(&path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let mut merged = args.clone();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) =
            line.split_once('=').ok_or_else(|| format!("{}:{}: expected key=value", path.display(), n + 1))?;
        let flag = format!("--{}", key.trim());
        let present = args.iter().any(|a| {
            let a = a.to_string_lossy();
            a == flag || a.starts_with(&format!("{flag}="))
        });
        if !present && flag != "--config" {
            merged.push(flag.into());
            merged.push(value.trim().into());
        }
    }
    Ok(merged)
}

/// `# holodyn <subcommand>` followed by every parameter except the plumbing
/// flags that cannot change the output.
fn header_lines(matches: &clap::ArgMatches) -> Vec<String> {
    let Some((name, sub)) = matches.subcommand() else { return Vec::new() };
    let mut lines = vec![format!("holodyn {name} {}", env!("CARGO_PKG_VERSION"))];
    let command = Cli::command();
    let Some(spec) = command.find_subcommand(name) else { return lines };
    let ids = spec.get_arguments().map(|a| a.get_id().as_str()).chain(["seed"]);
    for id in ids {
        if matches!(id, "config" | "threads" | "out" | "help") {
            continue;
        }
        if let Ok(Some(values)) = sub.try_get_raw(id) {
            let v: Vec<String> = values.map(|v| v.to_string_lossy().into_owned()).collect();
            lines.push(format!("{}={}", id.replace('_', "-"), v.join(",")));
        }
    }
    lines
}

fn main() -> ExitCode {
    let args = match merge_config(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("holodyn: {e}");
            return ExitCode::from(2);
        }
    };
    let matches = match Cli::command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(2);
        }
    };
    let header = header_lines(&matches);
    let result = with_threads(cli.threads, || run(&cli.command, header));
    let output = match result {
        Ok(o) => o,
        Err(f) => {
            eprintln!("holodyn: {} error: {}", f.module, f.message);
            return ExitCode::from(1);
        }
    };
    let bytes = match output {
        Output::Text(s) => s.into_bytes(),
        Output::Binary(b) => b,
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &bytes).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout().write_all(&bytes).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("holodyn: cannot write output: {e}");
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}

#[cfg(feature = "parallel")]
fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        },
        None => f(),
    }
}

#[cfg(not(feature = "parallel"))]
fn with_threads<T: Send>(_threads: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    f()
}
