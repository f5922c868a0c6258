use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use partial_sums::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use partial_sums::dirichletpoly::DirichletPolynomial;
use partial_sums::halasz::{
    f1_estimate_bound, growth_fit, halasz_bound_with, sharp_example_coeffs, M1Params, SeriesEvaluator,
};
use partial_sums::mollifier::{build_mollified, density_shape_check, littlewood_integrand, mvt_check, MVT_CONSTANT};
use partial_sums::multcore::CoefficientSeries;
use partial_sums::numberfield::{count_nonzero, dedekind_coeffs_int, FieldSpec};
use partial_sums::zeroengine::{count_upto, counting_residual, locate_zeros, write_zero_csv, RectangleRegion, STRIP_MARGIN};
use partial_sums::{Error, FunctionSpec, VERSION};

#[derive(Parser, Debug)]
#[command(
    name = "psums",
    version,
    about = "Zeros, counting formulas, zero density and mean values of partial sums of L-functions"
)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Function spec: a JSON file, or inline JSON starting with `{`.
    #[arg(long)]
    pub spec: Option<String>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long = "T")]
    pub t: Option<f64>,
    #[arg(long = "N")]
    pub n: Option<usize>,
    #[arg(long = "X")]
    pub x: Option<f64>,
    #[arg(long = "Y")]
    pub y: Option<usize>,
    #[arg(long)]
    pub k: Option<f64>,
    /// One value or a comma-separated list.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub sigma: Vec<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// Worker threads; outputs do not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Comma-separated x values for sharp-fit.
    #[arg(long = "x-grid", value_delimiter = ',')]
    pub x_grid: Vec<f64>,
    /// Random draws for mvt.
    #[arg(long)]
    pub draws: Option<usize>,
    #[arg(long = "k-trunc")]
    pub k_trunc: Option<u32>,
    #[arg(long = "grid-sigma")]
    pub grid_sigma: Option<u32>,
    #[arg(long = "grid-t")]
    pub grid_t: Option<u32>,
    /// Initial quadrature nodes for the Littlewood integral.
    #[arg(long)]
    pub nodes: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Zeros,
    Count,
    Density,
    Dedekind,
    Halasz,
    Zerofree,
    SharpFit,
    Mollify,
    Mvt,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Zeros => "zeros",
            Command::Count => "count",
            Command::Density => "density",
            Command::Dedekind => "dedekind",
            Command::Halasz => "halasz",
            Command::Zerofree => "zerofree",
            Command::SharpFit => "sharp-fit",
            Command::Mollify => "mollify",
            Command::Mvt => "mvt",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Lib(Error),
    Io(io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

/// 2 for bad input, 3 for numerical failure, 4 for a broken internal invariant.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidInput(_)
        | Error::NotNormalized(_)
        | Error::NoZeros
        | Error::NonFundamental(_)
        | Error::Overflow(_) => 2,
        Error::BoundaryZero { .. } | Error::QuadratureStall(_) => 3,
        Error::Invariant(_) => 4,
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

pub fn run(cli: &Cli) -> CliResult<()> {
    let ctx = Context::new(cli)?;
    match cli.command {
        Command::Zeros => cmd_zeros(ctx),
        Command::Count => cmd_count(ctx),
        Command::Density => cmd_density(ctx),
        Command::Dedekind => cmd_dedekind(ctx),
        Command::Halasz => cmd_halasz(ctx),
        Command::Zerofree => cmd_zerofree(ctx),
        Command::SharpFit => cmd_sharp_fit(ctx),
        Command::Mollify => cmd_mollify(ctx),
        Command::Mvt => cmd_mvt(ctx),
    }
}

struct Context<'a> {
    cli: &'a Cli,
    spec: Option<FunctionSpec>,
    config: Map<String, Value>,
}

impl<'a> Context<'a> {
    fn new(cli: &'a Cli) -> CliResult<Self> {
        let spec = match &cli.spec {
            None => None,
            Some(arg) => {
                let text = if arg.trim_start().starts_with('{') {
                    arg.clone()
                } else {
                    fs::read_to_string(arg).map_err(|e| config_err(format!("cannot read spec {arg}: {e}")))?
                };
                Some(FunctionSpec::from_json(&text).map_err(|e| config_err(e.to_string()))?)
            }
        };
        let mut config = Map::new();
        config.insert("command".into(), json!(cli.command.name()));
        if let Some(s) = &spec {
            config.insert("spec".into(), serde_json::to_value(s).expect("spec serializes"));
        }
        Ok(Self { cli, spec, config })
    }

    fn set(&mut self, key: &str, v: impl serde::Serialize) {
        self.config.insert(key.into(), serde_json::to_value(v).expect("config value serializes"));
    }

    fn spec(&self) -> CliResult<&FunctionSpec> {
        self.spec.as_ref().ok_or_else(|| config_err("--spec is required"))
    }

    fn format(&self, default: Format) -> Format {
        self.cli.format.unwrap_or(default)
    }

    fn series_len(&self) -> CliResult<usize> {
        match (self.cli.n, self.spec()?.intrinsic_len()) {
            (Some(n), _) | (None, Some(n)) => Ok(n),
            (None, None) => Err(config_err("--N is required")),
        }
    }

    fn positive_t(&self) -> CliResult<f64> {
        match self.cli.t {
            Some(t) if t > 0.0 && t.is_finite() => Ok(t),
            Some(t) => Err(config_err(format!("--T must be positive and finite, got {t}"))),
            None => Err(config_err("--T is required")),
        }
    }

    fn field(&self) -> CliResult<FieldSpec> {
        match self.spec()? {
            FunctionSpec::Zeta => Ok(FieldSpec::rationals()),
            FunctionSpec::Dedekind { field } => Ok(field.clone()),
            other => Err(config_err(format!(
                "{} needs a dedekind or zeta spec, got {}",
                self.cli.command.name(),
                other.label()
            ))),
        }
    }

    fn integer_x(&self) -> CliResult<usize> {
        match self.cli.x {
            Some(x) if x >= 2.0 && x.fract() == 0.0 && x <= usize::MAX as f64 => Ok(x as usize),
            Some(x) => Err(config_err(format!("--X must be an integer >= 2, got {x}"))),
            None => Err(config_err("--X is required")),
        }
    }

    /// Default `k`: the field degree for Dedekind specs, the spec's own `k`
    /// for the sharp example, 1 otherwise.
    fn k_or_default(&self) -> CliResult<f64> {
        if let Some(k) = self.cli.k {
            if !(k > 0.0 && k.is_finite()) {
                return Err(config_err(format!("--k must be positive, got {k}")));
            }
            return Ok(k);
        }
        Ok(match self.spec()? {
            FunctionSpec::Dedekind { field } => f64::from(field.degree()),
            FunctionSpec::SharpExample { k } => f64::from(*k),
            _ => 1.0,
        })
    }

    fn header(&self) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("version".into(), json!(VERSION));
        m.insert("config".into(), Value::Object(self.config.clone()));
        m
    }

    fn csv_preamble(&self) -> String {
        format!(
            "# psums {VERSION}\n# config {}\n",
            serde_json::to_string(&Value::Object(self.config.clone())).expect("config serializes")
        )
    }

    fn emit(&self, text: &str) -> CliResult<()> {
        match &self.cli.out {
            Some(path) => fs::write(path, text)?,
            None => io::stdout().lock().write_all(text.as_bytes())?,
        }
        Ok(())
    }

    fn emit_json(&self, mut body: Map<String, Value>) -> CliResult<()> {
        let mut out = self.header();
        out.append(&mut body);
        let mut text = serde_json::to_string_pretty(&Value::Object(out)).expect("output serializes");
        text.push('\n');
        self.emit(&text)
    }

    fn emit_csv(&self, header: &str, rows: &[String]) -> CliResult<()> {
        let mut text = self.csv_preamble();
        text.push_str(header);
        text.push('\n');
        for r in rows {
            text.push_str(r);
            text.push('\n');
        }
        self.emit(&text)
    }
}

fn object(v: impl serde::Serialize) -> Map<String, Value> {
    match serde_json::to_value(v).expect("report serializes") {
        Value::Object(m) => m,
        other => {
            let mut m = Map::new();
            m.insert("value".into(), other);
            m
        }
    }
}

fn cmd_zeros(mut ctx: Context) -> CliResult<()> {
    let n = ctx.series_len()?;
    let t = ctx.positive_t()?;
    let tol = ctx.cli.tol.unwrap_or(1e-10);
    let poly = DirichletPolynomial::new(ctx.spec()?.coefficients(n)?);
    let b = poly.strip_bound(STRIP_MARGIN)?;
    let (lo, hi) = match ctx.cli.sigma.as_slice() {
        [] => (-b, b),
        [lo, hi] => (*lo, *hi),
        _ => return Err(config_err("--sigma takes two values lo,hi for zeros")),
    };
    ctx.set("N", n);
    ctx.set("T", t);
    ctx.set("tol", tol);
    ctx.set("sigma", [lo, hi]);
    let rect = RectangleRegion::new(lo, hi, 0.0, t)?;
    let zeros = locate_zeros(&poly, &rect, tol)?;
    let total: u32 = zeros.iter().map(|z| z.multiplicity).sum();
    eprintln!("psums zeros: {total} zeros in [{lo}, {hi}] x [0, {t}], strip bound {b}");
    match ctx.format(Format::Csv) {
        Format::Csv => {
            let mut text = ctx.csv_preamble().into_bytes();
            write_zero_csv(&mut text, &zeros)?;
            ctx.emit(&String::from_utf8(text).expect("csv is utf-8"))
        }
        Format::Json => {
            let mut body = Map::new();
            body.insert("strip_bound".into(), json!(b));
            body.insert("zeros".into(), serde_json::to_value(&zeros).expect("zeros serialize"));
            ctx.emit_json(body)
        }
    }
}

fn cmd_count(mut ctx: Context) -> CliResult<()> {
    let n = ctx.series_len()?;
    let t = ctx.positive_t()?;
    ctx.set("N", n);
    ctx.set("T", t);
    let poly = DirichletPolynomial::new(ctx.spec()?.coefficients(n)?);
    let report = counting_residual(&poly, t)?;
    match ctx.format(Format::Json) {
        Format::Json => ctx.emit_json(object(report)),
        Format::Csv => ctx.emit_csv(
            "NT,formula,residual,EN,M,strip_bound",
            &[format!(
                "{},{:?},{:?},{},{},{:?}",
                report.n_t, report.formula, report.residual, report.e_n, report.m, report.strip_bound
            )],
        ),
    }
}

const DEFAULT_SIGMA_GRID: [f64; 5] = [0.55, 0.6, 0.75, 1.0, 1.25];

fn cmd_density(mut ctx: Context) -> CliResult<()> {
    let field = ctx.field()?;
    let x = ctx.integer_x()?;
    let t = ctx.positive_t()?;
    let grid = if ctx.cli.sigma.is_empty() {
        DEFAULT_SIGMA_GRID.to_vec()
    } else {
        ctx.cli.sigma.clone()
    };
    let mut sorted = grid.clone();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();
    ctx.set("X", x);
    ctx.set("T", t);
    ctx.set("sigma", &sorted);
    let report = density_shape_check(&field, x, t, &grid)?;
    match ctx.format(Format::Json) {
        Format::Json => ctx.emit_json(object(&report)),
        Format::Csv => {
            let rows: Vec<String> = report
                .rows
                .iter()
                .map(|r| format!("{:?},{},{:?},{:?}", r.sigma, r.count, r.bound, r.ratio))
                .collect();
            ctx.emit_csv("sigma,count,bound,ratio", &rows)
        }
    }
}

fn cmd_dedekind(mut ctx: Context) -> CliResult<()> {
    let field = ctx.field()?;
    let n = ctx.cli.n.ok_or_else(|| config_err("--N is required"))?;
    if n == 0 {
        return Err(config_err("--N must be >= 1"));
    }
    ctx.set("N", n);
    let a = dedekind_coeffs_int(&field, n)?;
    let nonzero = count_nonzero(&CoefficientSeries::from_integers(&a)?, n)?;
    match ctx.format(Format::Json) {
        Format::Json => {
            let mut body = Map::new();
            body.insert("field".into(), serde_json::to_value(&field).expect("field serializes"));
            body.insert("degree".into(), json!(field.degree()));
            body.insert("a".into(), json!(a));
            body.insert("A".into(), json!(nonzero));
            ctx.emit_json(body)
        }
        Format::Csv => {
            let rows: Vec<String> = a.iter().enumerate().map(|(i, v)| format!("{},{v}", i + 1)).collect();
            ctx.emit_csv("n,a", &rows)
        }
    }
}

fn m1_params(cli: &Cli, cutoff: usize) -> M1Params {
    let d = M1Params::default();
    M1Params {
        k_trunc: cli.k_trunc.unwrap_or(d.k_trunc),
        grid_sigma: cli.grid_sigma.unwrap_or(d.grid_sigma),
        grid_t: cli.grid_t.unwrap_or(d.grid_t),
        series_cutoff: cutoff,
    }
}

/// Default series length for mean-value commands.
const DEFAULT_SERIES_LEN: usize = 10_000;

fn cmd_halasz(mut ctx: Context) -> CliResult<()> {
    let spec = ctx.spec()?.clone();
    let x = ctx.cli.x.ok_or_else(|| config_err("--X (the point x) is required"))?;
    if !(x >= 3.0 && x.is_finite()) {
        return Err(config_err(format!("--X must be >= 3, got {x}")));
    }
    let k = ctx.k_or_default()?;
    let n = ctx
        .cli
        .n
        .or(spec.intrinsic_len())
        .unwrap_or_else(|| DEFAULT_SERIES_LEN.max(x.floor() as usize));
    if (x.floor() as usize) > n {
        return Err(config_err(format!("--N = {n} is smaller than x = {x}")));
    }
    let params = m1_params(ctx.cli, n);
    let f = spec.coefficients(n)?;
    let density = spec.mean_density(&f);
    let mut eval = SeriesEvaluator::new(&f, n);
    if let Some(c) = density {
        eval = eval.with_tail_density(c);
    }
    ctx.set("X", x);
    ctx.set("k", k);
    ctx.set("N", n);
    ctx.set("params", params);
    ctx.set("tail_density", density.map(|c| [c.re, c.im]));
    let report = halasz_bound_with(&f, &eval, x, k, &params)?;
    let sigma1 = 1.0 + 1.0 / x.ln();
    let f_sigma = eval.eval_with_uncertainty(Complex64::new(sigma1, 0.0));
    let f1 = f1_estimate_bound(f_sigma.0.norm(), sigma1, x, k)?;
    let mut body = object(&report);
    body.insert("sigma_sharp".into(), json!(sigma1));
    body.insert("F_sigma_abs".into(), json!(f_sigma.0.norm()));
    body.insert("F_sigma_uncertainty".into(), json!(f_sigma.1));
    body.insert("f1_estimate".into(), json!(f1));
    match ctx.format(Format::Json) {
        Format::Json => ctx.emit_json(body),
        Format::Csv => ctx.emit_csv(
            "x,k,lhs,rhs,ratio,tail_bound,f1_estimate",
            &[format!(
                "{:?},{:?},{:?},{:?},{:?},{:?},{:?}",
                report.x, report.k, report.lhs, report.rhs, report.ratio, report.tail_bound, f1
            )],
        ),
    }
}

/// Smallest `N` accepted by zerofree; below it `log log N` is too small
/// for the threshold to be meaningful.
pub const ZEROFREE_MIN_N: usize = 16;

fn cmd_zerofree(mut ctx: Context) -> CliResult<()> {
    let n = ctx.series_len()?;
    if n < ZEROFREE_MIN_N {
        return Err(config_err(format!("zerofree needs N >= {ZEROFREE_MIN_N}, got {n}")));
    }
    let t = ctx.positive_t()?;
    let k = ctx.k_or_default()?;
    let log_n = (n as f64).ln();
    let sigma_star = 1.0 + (4.0 * k / std::f64::consts::PI - 1.0) * log_n.ln() / log_n;
    ctx.set("N", n);
    ctx.set("T", t);
    ctx.set("k", k);
    let poly = DirichletPolynomial::new(ctx.spec()?.coefficients(n)?);
    let strip = poly.strip_bound_detail(STRIP_MARGIN)?;
    let zeros_found = if sigma_star > strip.right_infimum {
        // Σ_{n>=2} |f(n)| n^{-σ} < 1 there, so F_N cannot vanish
        0
    } else {
        count_upto(&poly, t, (sigma_star, strip.bound))?
    };
    let mut body = Map::new();
    body.insert("sigma_star".into(), json!(sigma_star));
    body.insert("zeros_found".into(), json!(zeros_found));
    body.insert("T".into(), json!(t));
    body.insert("strip_bound".into(), json!(strip.bound));
    match ctx.format(Format::Json) {
        Format::Json => ctx.emit_json(body),
        Format::Csv => ctx.emit_csv(
            "sigma_star,zeros_found,T,strip_bound",
            &[format!("{sigma_star:?},{zeros_found},{t:?},{:?}", strip.bound)],
        ),
    }
}

/// Points in the default sharp-fit grid, geometric from `10³` to `N`.
pub const SHARP_FIT_POINTS: usize = 101;

fn cmd_sharp_fit(mut ctx: Context) -> CliResult<()> {
    let k = ctx.cli.k.unwrap_or(1.0);
    if !(k >= 1.0 && k.fract() == 0.0 && k <= f64::from(u32::MAX)) {
        return Err(config_err(format!("--k must be a positive integer for sharp-fit, got {k}")));
    }
    let grid: Vec<f64> = if ctx.cli.x_grid.is_empty() {
        let top = ctx.cli.n.unwrap_or(1_000_000) as f64;
        if !(top > 1e3) {
            return Err(config_err("--N must exceed 1000 for the default grid"));
        }
        let span = (top / 1e3).ln();
        (0..SHARP_FIT_POINTS)
            .map(|i| {
                if i + 1 == SHARP_FIT_POINTS {
                    top
                } else {
                    1e3 * (span * i as f64 / (SHARP_FIT_POINTS - 1) as f64).exp()
                }
            })
            .collect()
    } else {
        ctx.cli.x_grid.clone()
    };
    ctx.set("k", k);
    ctx.set("x_grid", &grid);
    let top = grid.last().copied().unwrap_or(0.0);
    if !(top >= 1.0 && top.is_finite()) {
        return Err(config_err("x grid must end at a finite value >= 1"));
    }
    let f = sharp_example_coeffs(k as u32, top.floor() as usize)?;
    let fit = growth_fit(&f, &grid)?;
    let expected = 2.0 * k / std::f64::consts::PI - 1.0;
    match ctx.format(Format::Json) {
        Format::Json => {
            let mut body = object(&fit);
            body.insert("expected_slope".into(), json!(expected));
            ctx.emit_json(body)
        }
        Format::Csv => {
            let rows: Vec<String> = fit.points.iter().map(|(a, b)| format!("{a:?},{b:?}")).collect();
            ctx.emit_csv("loglog_x,log_abs_s1", &rows)
        }
    }
}

fn cmd_mollify(mut ctx: Context) -> CliResult<()> {
    let field = ctx.field()?;
    let x = ctx.integer_x()?;
    let y = ctx.cli.y.unwrap_or(x);
    ctx.set("X", x);
    ctx.set("Y", y);
    let mp = build_mollified(&field, x, y)?;
    let mut integrals = Vec::new();
    if let Some(t) = ctx.cli.t {
        let nodes = ctx.cli.nodes.unwrap_or(64);
        let sigmas = if ctx.cli.sigma.is_empty() { vec![0.5] } else { ctx.cli.sigma.clone() };
        ctx.set("T", t);
        ctx.set("nodes", nodes);
        ctx.set("sigma", &sigmas);
        for s in sigmas {
            let v = littlewood_integrand(&mp, s, t, nodes)?;
            integrals.push(json!({"sigma": s, "integral": v}));
        }
    }
    match ctx.format(Format::Json) {
        Format::Json => {
            let mut body = Map::new();
            body.insert("Z".into(), json!(mp.z()));
            body.insert("g".into(), json!(mp.g_by_norm()));
            body.insert("littlewood".into(), Value::Array(integrals));
            ctx.emit_json(body)
        }
        Format::Csv => {
            let rows: Vec<String> = mp
                .g_by_norm()
                .iter()
                .enumerate()
                .map(|(i, v)| format!("{},{v}", i + 1))
                .collect();
            ctx.emit_csv("n,g", &rows)
        }
    }
}

fn cmd_mvt(mut ctx: Context) -> CliResult<()> {
    let t = ctx.cli.t.ok_or_else(|| config_err("--T is required"))?;
    if !(t >= 0.0 && t.is_finite()) {
        return Err(config_err(format!("--T must be finite and >= 0, got {t}")));
    }
    ctx.set("T", t);
    let series: Vec<CoefficientSeries> = if ctx.spec.is_some() {
        let n = ctx.series_len()?;
        ctx.set("N", n);
        vec![ctx.spec()?.coefficients(n)?]
    } else {
        let n = ctx.cli.n.unwrap_or(20);
        let draws = ctx.cli.draws.unwrap_or(100);
        let seed = ctx.cli.seed.unwrap_or(0);
        if n == 0 {
            return Err(config_err("--N must be >= 1"));
        }
        ctx.set("N", n);
        ctx.set("draws", draws);
        ctx.set("seed", seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..draws)
            .map(|_| {
                let v: Vec<Complex64> = (0..n)
                    .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                    .collect();
                CoefficientSeries::new(v)
            })
            .collect::<partial_sums::Result<_>>()?
    };
    let reports = series
        .iter()
        .map(|a| mvt_check(a, t))
        .collect::<partial_sums::Result<Vec<_>>>()?;
    let max_ratio = reports.iter().map(|r| r.ratio).fold(0.0, f64::max);
    match ctx.format(Format::Json) {
        Format::Json => {
            let mut body = Map::new();
            body.insert("envelope_constant".into(), json!(MVT_CONSTANT));
            body.insert("max_ratio".into(), json!(max_ratio));
            body.insert("within_envelope".into(), json!(max_ratio <= MVT_CONSTANT));
            body.insert("reports".into(), serde_json::to_value(&reports).expect("reports serialize"));
            ctx.emit_json(body)
        }
        Format::Csv => {
            let rows: Vec<String> = reports
                .iter()
                .map(|r| {
                    format!(
                        "{:?},{:?},{:?},{:?},{:?},{:?}",
                        r.t, r.integral, r.diagonal, r.deviation, r.envelope, r.ratio
                    )
                })
                .collect();
            ctx.emit_csv("T,integral,diagonal,deviation,envelope,ratio", &rows)
        }
    }
}
