use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use metrics_lab::bounds::{self, ConstantForm, RadiusWindow};
use metrics_lab::experiments::output::{self, CsvTable, Envelope};
use metrics_lab::experiments::{self, FuzzConfig};
use metrics_lab::geometry::{Domain, Point};
use metrics_lab::metrics::{self, MetricKind};
use metrics_lab::moebius::{self, make_ta};
use metrics_lab::schwarz::{self, Dilatation};
use metrics_lab::{Complex64, Error};
use serde_json::{json, Value};

const DEFAULT_FUZZ_DOMAINS: [&str; 4] = ["ball2", "half2", "ball3", "sector:1.5707963267948966"];

#[derive(Parser)]
#[command(name = "metrics-lab", version, about = "Intrinsic metrics, distortion bounds and experiments")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one metric at a point pair.
    Metric {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        domain: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    /// Closed-form bound intervals.
    #[command(subcommand)]
    Bounds(BoundsCmd),
    /// Distortion of a metric under the disk automorphism T_a.
    Distort {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        #[arg(long, default_value = "s")]
        kind: String,
    },
    /// Hyperbolic midpoint of two points of the unit ball.
    Midpoint {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    /// Special functions and quasiregular Schwarz-lemma bounds.
    #[command(subcommand)]
    Schwarz(SchwarzCmd),
    /// Monte Carlo comparison of the annulus and midpoint bounds.
    McCompare {
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Estimate sup d(T_a x, T_a y)/d(x, y).
    SupEstimate {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Randomized check of every implemented inequality; exits 1 on violations.
    Fuzz {
        /// Repeatable; defaults to ball2, half2, ball3 and the quarter-plane sector.
        #[arg(long)]
        domain: Vec<String>,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        slack: f64,
    },
    /// Table of the quotient bounds l(|q|,t), u(|q|,t).
    Grid {
        #[arg(long, default_value_t = 21)]
        resolution: usize,
    },
    /// Worked examples.
    Example {
        #[arg(value_enum)]
        name: ExampleName,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ExampleName {
    Boundcomp,
}

#[derive(Args)]
struct WindowArgs {
    #[arg(long)]
    r_l: f64,
    #[arg(long)]
    r_u: f64,
}

#[derive(Subcommand)]
enum BoundsCmd {
    /// Bounds of d(x,y)/th(ρ(x,y)/2) for |x|, |y| in [r_l, r_u].
    Ratio {
        #[arg(long)]
        kind: String,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Constants bounding d_to(f x, f y)/d_from(x, y) for conformal f.
    Fixed {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Distortion bounds from source and image radius windows.
    Distortion {
        #[arg(long)]
        kind: String,
        #[command(flatten)]
        window: WindowArgs,
        #[arg(long)]
        image_r_l: f64,
        #[arg(long)]
        image_r_u: f64,
        /// Use the piecewise j* constant for the lower bounds.
        #[arg(long)]
        refined: bool,
    },
    /// Image windows of an annulus under T_a.
    Window {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Bounds of s from the midpoint norm |q| and t = th(ρ/4).
    Midpoint {
        #[arg(long)]
        q: f64,
        #[arg(long)]
        t: f64,
    },
    /// Bounds of s(f x, f y)/s(x, y) for Möbius self-maps of the ball.
    Quotient {
        #[arg(long)]
        q: Option<f64>,
        #[arg(long)]
        t: f64,
    },
    /// Bounds of w under the power map between sectors.
    SectorW {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
    },
    /// Two-sided constants of the Barrlund metric against th(ρ/2).
    Barrlund {
        #[arg(long)]
        domain: String,
    },
    /// Threshold of the piecewise j* constant.
    JstarThreshold,
}

#[derive(Args)]
struct DilatationArgs {
    #[arg(long, default_value_t = 1.0)]
    k: f64,
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long)]
    k_inner: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
}

impl DilatationArgs {
    fn build(&self) -> metrics_lab::Result<Dilatation> {
        let mut d = Dilatation::new(self.k, self.n)?;
        if let Some(ki) = self.k_inner {
            d = d.with_inner(ki)?;
        }
        if let Some(a) = self.alpha {
            d = d.with_alpha(a)?;
        }
        Ok(d)
    }
}

#[derive(Subcommand)]
enum SchwarzCmd {
    /// Complete elliptic integral of the first kind.
    K {
        #[arg(long)]
        r: f64,
    },
    Mu {
        #[arg(long)]
        r: f64,
    },
    MuInverse {
        #[arg(long)]
        y: f64,
    },
    Phi {
        #[arg(long)]
        k: f64,
        #[arg(long)]
        r: f64,
    },
    Gamma2 {
        #[arg(long)]
        s: f64,
    },
    C {
        #[arg(long)]
        k: f64,
    },
    Lambda {
        #[arg(long)]
        n: usize,
    },
    /// Upper bounds for ρ(f x, f y) given ρ(x, y).
    RhoBounds {
        #[command(flatten)]
        dil: DilatationArgs,
        #[arg(long)]
        rho: f64,
    },
    /// Upper bounds for d(f x, f y), d in {j*, w, s, p}, given d(x, y).
    Distortion {
        #[command(flatten)]
        dil: DilatationArgs,
        #[arg(long)]
        value: f64,
    },
    /// Bounds for j*(f x, f y) on the ball.
    JstarImage {
        #[command(flatten)]
        dil: DilatationArgs,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        #[arg(long, allow_hyphen_values = true, requires = "fy")]
        fx: Option<String>,
        #[arg(long, allow_hyphen_values = true, requires = "fx")]
        fy: Option<String>,
    },
    /// Bounds for w between sectors under K-quasiconformal maps.
    Sector {
        #[arg(long)]
        k: f64,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        w: f64,
    },
}

enum Failure {
    Usage(String),
    Lib(Error),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

/// Either a flat JSON value or an experiment table with its CSV layout.
enum Report {
    Json(Value),
    Table(Value, String),
}

fn table<T: serde::Serialize, C: CsvTable + ?Sized>(env: &Envelope<T>, rows: &C) -> Result<Report, Failure> {
    Ok(Report::Table(serde_json::to_value(env).map_err(lib_err)?, output::to_csv_string(rows)?))
}

fn lib_err(e: serde_json::Error) -> Error {
    Error::InvalidParameter(e.to_string())
}

fn to_json<T: serde::Serialize>(v: &T) -> Result<Value, Failure> {
    Ok(serde_json::to_value(v).map_err(lib_err)?)
}

fn parse<T: FromStr<Err = Error>>(s: &str) -> Result<T, Failure> {
    Ok(s.parse::<T>()?)
}

fn parse_complex(s: &str) -> Result<Complex64, Failure> {
    Ok(parse::<Point>(s)?.to_complex()?)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::ConvergenceFailure(_) => 4,
                _ => 3,
            })
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("METRICS_LAB_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| format!("METRICS_LAB_THREADS must be a non-negative integer, got {raw:?}"))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let mut code = 0;
    let report = match &cli.command {
        Command::Metric { kind, domain, x, y } => {
            let kind: MetricKind = parse(kind)?;
            let domain: Domain = parse(domain)?;
            let v = metrics::evaluate(kind, &domain, &parse(x)?, &parse(y)?)?;
            Report::Json(json!({ "value": v }))
        }
        Command::Bounds(cmd) => Report::Json(run_bounds(cmd)?),
        Command::Distort { a, x, y, kind } => Report::Json(run_distort(a, x, y, kind)?),
        Command::Midpoint { x, y } => {
            let (x, y): (Point, Point) = (parse(x)?, parse(y)?);
            let ball = Domain::unit_ball(x.dim())?;
            let q = moebius::hyperbolic_midpoint(&x, &y)?;
            Report::Json(json!({
                "q": q.coords(),
                "rho": metrics::rho(&ball, &x, &y)?,
                "rho_xq": metrics::rho(&ball, &x, &q)?,
                "rho_qy": metrics::rho(&ball, &q, &y)?,
            }))
        }
        Command::Schwarz(cmd) => Report::Json(run_schwarz(cmd)?),
        Command::McCompare { trials, seed } => {
            if *trials == 0 {
                return Err(Error::InvalidParameter("trials must be ≥ 1".into()).into());
            }
            let summary = experiments::compare_bound_methods(*trials, *seed)?;
            let results = json!({
                "total": summary.total,
                "both_better": summary.both_better,
                "lower_better": summary.lower_better,
                "upper_better": summary.upper_better,
                "fraction": summary.fraction(),
            });
            table(&Envelope::new("mc-compare", *seed, *trials, results), &summary)?
        }
        Command::SupEstimate { a, kind, trials, seed } => {
            let est = experiments::sup_distortion_estimate(parse_complex(a)?, parse(kind)?, *trials, *seed)?;
            table(&Envelope::new("sup-estimate", *seed, *trials, est), &est)?
        }
        Command::Fuzz { domain, trials, seed, slack } => {
            let names: Vec<&str> = if domain.is_empty() {
                DEFAULT_FUZZ_DOMAINS.to_vec()
            } else {
                domain.iter().map(String::as_str).collect()
            };
            let domains = names.iter().map(|d| parse::<Domain>(d)).collect::<Result<Vec<_>, _>>()?;
            if !(*slack >= 0.0) {
                return Err(Error::InvalidParameter(format!("slack must be ≥ 0, got {slack}")).into());
            }
            let mut config = FuzzConfig::new(*trials, *seed);
            config.slack = *slack;
            let reports = domains
                .iter()
                .map(|d| experiments::inequality_fuzz(d, &config))
                .collect::<Result<Vec<_>, _>>()?;
            for r in &reports {
                eprintln!("{}: {} checks, {} violations", r.domain, r.checks, r.violation_count);
            }
            if reports.iter().any(|r| r.violation_count > 0) {
                code = 1;
            }
            table(&Envelope::new("fuzz", *seed, *trials, &reports), reports.as_slice())?
        }
        Command::Grid { resolution } => {
            let rows = experiments::grid_lu(*resolution)?;
            table(&Envelope::new("grid", 0, rows.len() as u64, &rows), rows.as_slice())?
        }
        Command::Example { name: ExampleName::Boundcomp } => {
            let ex = experiments::example_boundcomp()?;
            table(&Envelope::new("example-boundcomp", 0, 1, ex), &ex)?
        }
    };
    let text = match (cli.format, report) {
        (Format::Json, Report::Json(v) | Report::Table(v, _)) => {
            serde_json::to_string_pretty(&v).map_err(lib_err)? + "\n"
        }
        (Format::Csv, Report::Table(_, csv)) => csv,
        (Format::Csv, Report::Json(v)) => flat_csv(&v)?,
    };
    match &cli.output {
        Some(path) => File::create(path)?.write_all(text.as_bytes())?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(code)
}

fn window(w: &WindowArgs) -> Result<RadiusWindow, Failure> {
    Ok(RadiusWindow::new(w.r_l, w.r_u)?)
}

fn run_bounds(cmd: &BoundsCmd) -> Result<Value, Failure> {
    match cmd {
        BoundsCmd::Ratio { kind, window: w } => {
            to_json(&bounds::ratio_bounds_vs_half_rho(parse(kind)?, window(w)?)?)
        }
        BoundsCmd::Fixed { kind, from, to } => {
            to_json(&bounds::fixed_conformal_constants(parse(kind)?, &parse(from)?, &parse(to)?)?)
        }
        BoundsCmd::Distortion { kind, window: w, image_r_l, image_r_u, refined } => {
            let form = if *refined { ConstantForm::Refined } else { ConstantForm::Displayed };
            let image = RadiusWindow::new(*image_r_l, *image_r_u)?;
            to_json(&bounds::conformal_distortion_bounds_with(parse(kind)?, window(w)?, image, form)?)
        }
        BoundsCmd::Window { a, window: w } => {
            let (a, w) = (parse_complex(a)?, window(w)?);
            Ok(json!({
                "literal": to_json(&w.image_window_literal(a)?)?,
                "exact": to_json(&w.image_window(a)?)?,
            }))
        }
        BoundsCmd::Midpoint { q, t } => {
            let i = bounds::s_midpoint_bounds(*q, *t)?;
            Ok(json!({ "lower": i.lower, "upper": i.upper, "branch": bounds::midpoint_branch(*q, *t) }))
        }
        BoundsCmd::Quotient { q, t } => match q {
            Some(q) => {
                let i = bounds::conf_quotient_bounds(*q, *t)?;
                Ok(json!({ "lower": i.lower, "upper": i.upper, "branch": bounds::midpoint_branch(*q, *t) }))
            }
            None => to_json(&bounds::conf_quotient_bounds_midpointfree(*t)?),
        },
        BoundsCmd::SectorW { alpha, beta } => to_json(&bounds::sector_w_power_bounds(*alpha, *beta)?),
        BoundsCmd::Barrlund { domain } => match parse::<Domain>(domain)? {
            Domain::UnitBall { .. } => to_json(&bounds::ball_barrlund_bounds()),
            Domain::HalfSpace { .. } => to_json(&bounds::halfspace_barrlund_bounds()),
            other => Err(Error::UnsupportedCombination(format!("no Barrlund constants for {other}")).into()),
        },
        BoundsCmd::JstarThreshold => Ok(json!({ "value": bounds::jstar_threshold() })),
    }
}

fn run_distort(a: &str, x: &str, y: &str, kind: &str) -> Result<Value, Failure> {
    let (a, x, y) = (parse_complex(a)?, parse_complex(x)?, parse_complex(y)?);
    let kind: MetricKind = parse(kind)?;
    let ball = Domain::unit_ball(2)?;
    let map = make_ta(a)?;
    let (fx, fy) = (map.apply(x)?, map.apply(y)?);
    let (px, py) = (Point::from_complex(x), Point::from_complex(y));
    let before = metrics::evaluate(kind, &ball, &px, &py)?;
    let after = metrics::evaluate(kind, &ball, &Point::from_complex(fx), &Point::from_complex(fy))?;
    if before == 0.0 {
        return Err(Error::InvalidParameter("x and y coincide".into()).into());
    }
    let src = RadiusWindow::spanning(x.norm(), y.norm())?;
    let mut out = json!({
        "fx": [fx.re, fx.im],
        "fy": [fy.re, fy.im],
        "before": before,
        "after": after,
        "quotient": after / before,
        "window_bounds": to_json(&bounds::conformal_distortion_bounds(kind, src, src.image_window(a)?)?)?,
    });
    if kind == MetricKind::S {
        let q = moebius::hyperbolic_midpoint(&px, &py)?;
        let t = experiments::quarter_tanh(&px, &py)?;
        out["midpoint_bounds"] = to_json(&bounds::conf_quotient_bounds(q.norm(), t)?)?;
    }
    Ok(out)
}

fn run_schwarz(cmd: &SchwarzCmd) -> Result<Value, Failure> {
    let value = |v: f64| Ok(json!({ "value": v }));
    match cmd {
        SchwarzCmd::K { r } => value(schwarz::elliptic_k(*r)?),
        SchwarzCmd::Mu { r } => value(schwarz::mu(*r)?),
        SchwarzCmd::MuInverse { y } => value(schwarz::mu_inverse(*y)?),
        SchwarzCmd::Phi { k, r } => value(schwarz::phi_k2(*k, *r)?),
        SchwarzCmd::Gamma2 { s } => value(schwarz::gamma2(*s)?),
        SchwarzCmd::C { k } => to_json(&schwarz::c_of_k(*k)?),
        SchwarzCmd::Lambda { n } => to_json(&schwarz::lambda_range(*n)?),
        SchwarzCmd::RhoBounds { dil, rho } => to_json(&schwarz::schwarz_rho_bounds(&dil.build()?, *rho)?),
        SchwarzCmd::Distortion { dil, value: m } => to_json(&schwarz::metric_distortion_bounds(&dil.build()?, *m)?),
        SchwarzCmd::JstarImage { dil, x, y, fx, fy } => {
            let (x, y): (Point, Point) = (parse(x)?, parse(y)?);
            let images = match (fx, fy) {
                (Some(fx), Some(fy)) => Some((parse::<Point>(fx)?, parse::<Point>(fy)?)),
                (None, None) => None,
                _ => return Err(Failure::Usage("--fx and --fy go together".into())),
            };
            let images = images.as_ref().map(|(a, b)| (a, b));
            to_json(&schwarz::jstar_image_bounds(&dil.build()?, &x, &y, images)?)
        }
        SchwarzCmd::Sector { k, alpha, beta, w } => to_json(&schwarz::sector_qc_bounds(*k, *alpha, *beta, *w)?),
    }
}

/// One header row and one data row from a JSON object; nested keys are
/// joined with `.` and arrays are indexed.
fn flat_csv(v: &Value) -> Result<String, Failure> {
    fn walk(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
        let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
        match v {
            Value::Object(m) => m.iter().for_each(|(k, v)| walk(&key(k), v, out)),
            Value::Array(a) => a.iter().enumerate().for_each(|(i, v)| walk(&key(&i.to_string()), v, out)),
            Value::Number(n) => out.push((
                prefix.to_string(),
                match (n.as_u64(), n.as_i64()) {
                    (Some(u), _) if !n.is_f64() => u.to_string(),
                    (_, Some(i)) if !n.is_f64() => i.to_string(),
                    _ => output::format_float(n.as_f64().unwrap_or(f64::NAN)),
                },
            )),
            Value::String(s) => out.push((prefix.to_string(), s.clone())),
            Value::Bool(b) => out.push((prefix.to_string(), b.to_string())),
            Value::Null => out.push((prefix.to_string(), String::new())),
        }
    }
    let mut cells = Vec::new();
    walk("", v, &mut cells);
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| Error::InvalidParameter(format!("CSV output failed: {e}"));
    w.write_record(cells.iter().map(|(k, _)| k)).map_err(err)?;
    w.write_record(cells.iter().map(|(_, v)| v)).map_err(err)?;
    let bytes = w.into_inner().map_err(|e| Error::InvalidParameter(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("CSV output is UTF-8"))
}
