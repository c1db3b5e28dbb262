//! Command-line driver for the volpot library.
//!
//! Three subcommands, all emitting CSV with `#`-prefixed header comments
//! that echo the effective configuration:
//!
//! * `eval`     — potential values at a list of points for one step size;
//! * `converge` — error/rate table over a ladder of step sizes;
//! * `coeffs`   — interior and strip coefficients for inspection.
//!
//! Configuration comes from flags and/or a `key=value` file (`--config`);
//! flags override file entries. Exit codes: 0 success, 2 configuration
//! error, 3 numerical failure.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use volpot::geometry::local_frame;
use volpot::quadrature::{a_coeff, b_coeff};
use volpot::{
    convergence_study, CubatureError, Density, DensityF, DensityG, DensityOscill, EllipseDomain,
    PotentialEvaluator, PotentialResult, QuadratureRule, RuleSettings, RunParams,
};

#[derive(Parser)]
#[command(
    name = "volpot",
    version,
    about = "Volume potentials of the modified Helmholtz operator on planar domains"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate the potential at points for a single step size.
    Eval(EvalArgs),
    /// Tabulate errors and convergence rates over a ladder of step sizes.
    Converge(ConvergeArgs),
    /// Print interior (a) and strip (b) coefficients.
    Coeffs(CoeffsArgs),
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    shared: SharedArgs,
    /// Require the exact-potential columns (error if the density has no
    /// closed-form potential).
    #[arg(long)]
    exact: bool,
}

#[derive(Args)]
struct ConvergeArgs {
    #[command(flatten)]
    shared: SharedArgs,
}

#[derive(Args)]
struct CoeffsArgs {
    #[command(flatten)]
    shared: SharedArgs,
    /// Integer squared offset |k-m|^2 for an interior coefficient; repeatable.
    #[arg(long, allow_negative_numbers = true)]
    ksq: Vec<i64>,
    /// Strip pair "k1,k2,m1,m2" (evaluation node k, strip node m, lattice
    /// indices) for a boundary coefficient; repeatable.
    #[arg(long, allow_hyphen_values = true)]
    pair: Vec<String>,
}

/// Flags shared by every subcommand. All values are optional here so that a
/// config file can supply them; [`Effective`] holds the merged result.
#[derive(Args, Clone)]
struct SharedArgs {
    /// Ellipse semi-axis along x1 (a >= b).
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,
    /// Ellipse semi-axis along x2.
    #[arg(long, allow_negative_numbers = true)]
    b: Option<f64>,
    /// Density name: f, g, or oscill.
    #[arg(long)]
    density: Option<String>,
    /// Operator constant lambda^2 (> 0).
    #[arg(long, allow_negative_numbers = true)]
    lambda2: Option<f64>,
    /// Lattice step; repeat for a convergence ladder.
    #[arg(long = "h", allow_negative_numbers = true)]
    h: Vec<f64>,
    /// Width parameter D of the generating function (>= 1).
    #[arg(long = "D", allow_negative_numbers = true)]
    d: Option<f64>,
    /// Approximation order M in 1..=3; the interior error is O(h^(2M)).
    #[arg(long = "M")]
    m: Option<u32>,
    /// Boundary-strip radius r, in units of h*sqrt(D).
    #[arg(long)]
    r: Option<f64>,
    /// Transform parameter alpha of the quadrature rule.
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    /// Transform parameter beta of the quadrature rule.
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    /// Trapezoid step tau of the quadrature rule.
    #[arg(long, allow_negative_numbers = true)]
    tau: Option<f64>,
    /// Smallest trapezoid index of the quadrature rule.
    #[arg(long, allow_negative_numbers = true)]
    smin: Option<i64>,
    /// Largest trapezoid index of the quadrature rule.
    #[arg(long, allow_negative_numbers = true)]
    smax: Option<i64>,
    /// Evaluation points: inline "x1,x2;x1,x2;..." or a file with one
    /// point per line.
    #[arg(long, allow_hyphen_values = true)]
    points: Option<String>,
    /// Output CSV path (standard output when absent).
    #[arg(long)]
    out: Option<String>,
    /// Worker threads for point evaluation.
    #[arg(long)]
    threads: Option<usize>,
    /// Key=value file supplying any of the other flags; flags win.
    #[arg(long)]
    config: Option<String>,
}

enum Failure {
    Config(String),
    Numeric(String),
}

type AppResult<T> = Result<T, Failure>;

fn config_err(msg: impl Into<String>) -> Failure {
    Failure::Config(msg.into())
}

fn numeric_err(msg: impl Into<String>) -> Failure {
    Failure::Numeric(msg.into())
}

/// Library errors at setup or study time. Everything the user can fix in the
/// invocation is a configuration error; failures inside a run are numerical.
fn lift(e: CubatureError) -> Failure {
    match e {
        CubatureError::Geometry(_) => numeric_err(e.to_string()),
        _ => config_err(e.to_string()),
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum DensityName {
    F,
    G,
    Oscill,
}

impl DensityName {
    fn parse(s: &str) -> AppResult<Self> {
        match s {
            "f" => Ok(Self::F),
            "g" => Ok(Self::G),
            "oscill" => Ok(Self::Oscill),
            other => Err(config_err(format!(
                "unknown density '{other}' (expected f, g, or oscill)"
            ))),
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            Self::F => "f",
            Self::G => "g",
            Self::Oscill => "oscill",
        }
    }
}

enum AnyDensity {
    F(DensityF),
    G(DensityG),
    Oscill(DensityOscill),
}

impl Density for AnyDensity {
    fn value(&self, x: [f64; 2]) -> f64 {
        match self {
            Self::F(d) => d.value(x),
            Self::G(d) => d.value(x),
            Self::Oscill(d) => d.value(x),
        }
    }

    fn exact_potential(&self, x: [f64; 2]) -> Option<f64> {
        match self {
            Self::F(d) => d.exact_potential(x),
            Self::G(d) => d.exact_potential(x),
            Self::Oscill(d) => d.exact_potential(x),
        }
    }
}

/// The merged, validated configuration of one run.
struct Effective {
    a: f64,
    b: f64,
    density: DensityName,
    lambda2: f64,
    h: Vec<f64>,
    d: f64,
    m: u32,
    r: f64,
    alpha: f64,
    beta: f64,
    tau: f64,
    smin: i64,
    smax: i64,
    points: Vec<[f64; 2]>,
    out: Option<String>,
    threads: usize,
}

impl Effective {
    fn domain(&self) -> AppResult<EllipseDomain> {
        EllipseDomain::new(self.a, self.b).map_err(|e| {
            config_err(format!(
                "invalid ellipse axes a={}, b={}: {e}",
                self.a, self.b
            ))
        })
    }

    fn density(&self, dom: &EllipseDomain) -> AnyDensity {
        match self.density {
            DensityName::F => AnyDensity::F(volpot::density_f(dom, self.lambda2)),
            DensityName::G => AnyDensity::G(volpot::density_g(dom, self.lambda2)),
            DensityName::Oscill => AnyDensity::Oscill(volpot::density_oscill(self.lambda2)),
        }
    }

    fn params_at(&self, h: f64) -> AppResult<RunParams> {
        RunParams::new(h, self.d, self.m, self.r, self.lambda2).map_err(lift)
    }

    fn rule_settings(&self) -> RuleSettings {
        RuleSettings {
            alpha: self.alpha,
            beta: self.beta,
            tau: self.tau,
            s_min: self.smin,
            s_max: self.smax,
        }
    }

    /// Builds the quadrature rule once up front so that an invalid window is
    /// reported as a configuration error before any cubature work starts.
    fn validated_rule(&self, params: &RunParams) -> AppResult<QuadratureRule> {
        QuadratureRule::new(
            self.alpha,
            self.beta,
            self.tau,
            self.smin,
            self.smax,
            params.damping(),
        )
        .map_err(|e| config_err(format!("quadrature: {e}")))
    }

    /// The `#`-comment block echoed at the top of every CSV.
    fn echo(&self, command: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# volpot {}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(s, "# command = {command}");
        let _ = writeln!(s, "# a = {}", self.a);
        let _ = writeln!(s, "# b = {}", self.b);
        let _ = writeln!(s, "# density = {}", self.density.as_str());
        let _ = writeln!(s, "# lambda2 = {}", self.lambda2);
        let hs: Vec<String> = self.h.iter().map(|h| h.to_string()).collect();
        let _ = writeln!(s, "# h = {}", hs.join(","));
        let _ = writeln!(s, "# D = {}", self.d);
        let _ = writeln!(s, "# M = {}", self.m);
        let _ = writeln!(s, "# r = {}", self.r);
        let _ = writeln!(s, "# alpha = {}", self.alpha);
        let _ = writeln!(s, "# beta = {}", self.beta);
        let _ = writeln!(s, "# tau = {}", self.tau);
        let _ = writeln!(s, "# smin = {}", self.smin);
        let _ = writeln!(s, "# smax = {}", self.smax);
        let pts: Vec<String> = self
            .points
            .iter()
            .map(|p| format!("{},{}", p[0], p[1]))
            .collect();
        let _ = writeln!(s, "# points = {}", pts.join(";"));
        let _ = writeln!(s, "# threads = {}", self.threads);
        s
    }
}

/// Parses a `key=value` config file: one pair per line, `#` comments and
/// blank lines ignored. Keys use the flag spellings (`D` and `M` also
/// accepted in lower case).
fn parse_config_file(path: &str) -> AppResult<HashMap<String, String>> {
    let text = fs::read_to_string(path)
        .map_err(|e| config_err(format!("cannot read config file {path}: {e}")))?;
    let mut map = HashMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(config_err(format!(
                "{path}:{}: expected key=value, got '{line}'",
                lineno + 1
            )));
        };
        let key = match key.trim() {
            "d" => "D",
            "m" => "M",
            k => k,
        };
        const KNOWN: [&str; 16] = [
            "a", "b", "density", "lambda2", "h", "D", "M", "r", "alpha", "beta", "tau", "smin",
            "smax", "points", "out", "threads",
        ];
        if !KNOWN.contains(&key) {
            return Err(config_err(format!(
                "{path}:{}: unknown config key '{key}'",
                lineno + 1
            )));
        }
        map.insert(key.to_string(), value.trim().to_string());
    }
    Ok(map)
}

fn parse_num<T: core::str::FromStr>(what: &str, s: &str) -> AppResult<T> {
    s.parse()
        .map_err(|_| config_err(format!("cannot parse {what} from '{s}'")))
}

fn parse_point(what: &str, s: &str) -> AppResult<[f64; 2]> {
    let parts: Vec<&str> = s
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|p| !p.is_empty())
        .collect();
    if parts.len() != 2 {
        return Err(config_err(format!(
            "{what}: expected two coordinates, got '{s}'"
        )));
    }
    Ok([
        parse_num("coordinate", parts[0])?,
        parse_num("coordinate", parts[1])?,
    ])
}

/// Points are either inline (`x1,x2;x1,x2;...`, detected by the comma) or a
/// file with one point per line (`x1,x2` or `x1 x2`, `#` comments allowed).
fn parse_points(spec: &str) -> AppResult<Vec<[f64; 2]>> {
    let s = spec.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    if s.contains(',') {
        return s
            .split(';')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(|p| parse_point("inline point", p))
            .collect();
    }
    let text = fs::read_to_string(s)
        .map_err(|e| config_err(format!("cannot read points file {s}: {e}")))?;
    let mut points = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        points.push(parse_point(&format!("{s}:{}", lineno + 1), line)?);
    }
    Ok(points)
}

/// Merges defaults, the config file, and the flags (in rising precedence)
/// into one validated configuration.
fn merge(shared: &SharedArgs) -> AppResult<Effective> {
    let file = match &shared.config {
        Some(path) => parse_config_file(path)?,
        None => HashMap::new(),
    };
    let get = |key: &str| file.get(key).map(String::as_str);

    fn resolve<T: Copy>(
        flag: Option<T>,
        file_val: Option<&str>,
        what: &str,
        parse: impl Fn(&str) -> AppResult<T>,
    ) -> AppResult<Option<T>> {
        match (flag, file_val) {
            (Some(v), _) => Ok(Some(v)),
            (None, Some(s)) => Ok(Some(parse(s).map_err(|e| match e {
                Failure::Config(m) => config_err(format!("config key {what}: {m}")),
                other => other,
            })?)),
            (None, None) => Ok(None),
        }
    }
    fn require<T>(v: Option<T>, what: &str) -> AppResult<T> {
        v.ok_or_else(|| config_err(format!("missing required option --{what}")))
    }

    let a = require(
        resolve(shared.a, get("a"), "a", |s| parse_num("a", s))?,
        "a",
    )?;
    let b = require(
        resolve(shared.b, get("b"), "b", |s| parse_num("b", s))?,
        "b",
    )?;
    let density_str = match (&shared.density, get("density")) {
        (Some(s), _) => s.clone(),
        (None, Some(s)) => s.to_string(),
        (None, None) => return Err(config_err("missing required option --density")),
    };
    let density = DensityName::parse(&density_str)?;
    let lambda2 = require(
        resolve(shared.lambda2, get("lambda2"), "lambda2", |s| {
            parse_num("lambda2", s)
        })?,
        "lambda2",
    )?;

    let h: Vec<f64> = if !shared.h.is_empty() {
        shared.h.clone()
    } else if let Some(s) = get("h") {
        s.split(|c: char| c == ',' || c.is_whitespace())
            .filter(|p| !p.is_empty())
            .map(|p| parse_num("h", p))
            .collect::<AppResult<_>>()?
    } else {
        Vec::new()
    };
    if h.is_empty() {
        return Err(config_err("missing required option --h"));
    }

    let m = require(
        resolve(shared.m, get("M"), "M", |s| parse_num("M", s))?,
        "M",
    )?;
    let d = resolve(shared.d, get("D"), "D", |s| parse_num("D", s))?.unwrap_or(4.0);
    let r = resolve(shared.r, get("r"), "r", |s| parse_num("r", s))?.unwrap_or(6.0);
    let alpha = resolve(shared.alpha, get("alpha"), "alpha", |s| {
        parse_num("alpha", s)
    })?
    .unwrap_or(4.0);
    let beta = resolve(shared.beta, get("beta"), "beta", |s| parse_num("beta", s))?.unwrap_or(2.0);
    let tau = resolve(shared.tau, get("tau"), "tau", |s| parse_num("tau", s))?.unwrap_or(0.01);
    let smin = resolve(shared.smin, get("smin"), "smin", |s| parse_num("smin", s))?.unwrap_or(-80);
    let smax = resolve(shared.smax, get("smax"), "smax", |s| parse_num("smax", s))?.unwrap_or(100);
    let threads = resolve(shared.threads, get("threads"), "threads", |s| {
        parse_num("threads", s)
    })?
    .unwrap_or(1)
    .max(1);

    let points = match (&shared.points, get("points")) {
        (Some(s), _) => parse_points(s)?,
        (None, Some(s)) => parse_points(s)?,
        (None, None) => Vec::new(),
    };
    let out = match (&shared.out, get("out")) {
        (Some(s), _) => Some(s.clone()),
        (None, Some(s)) => Some(s.to_string()),
        (None, None) => None,
    };

    Ok(Effective {
        a,
        b,
        density,
        lambda2,
        h,
        d,
        m,
        r,
        alpha,
        beta,
        tau,
        smin,
        smax,
        points,
        out,
        threads,
    })
}

/// All float data cells use scientific notation with 16 significant digits.
fn sci(v: f64) -> String {
    format!("{:.15e}", v)
}

fn opt_sci(v: Option<f64>) -> String {
    v.map(sci).unwrap_or_default()
}

fn write_output(out: &Option<String>, text: &str) -> AppResult<()> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| config_err(format!("cannot write output file {path}: {e}"))),
        None => {
            let stdout = std::io::stdout();
            stdout
                .lock()
                .write_all(text.as_bytes())
                .map_err(|e| numeric_err(format!("cannot write to standard output: {e}")))
        }
    }
}

/// Evaluates the potential at `eff.points`, fanning the points out over the
/// worker threads. Each worker owns its evaluator (the coefficient cache is
/// per-evaluator), and results land in input order, so the output does not
/// depend on the thread count.
fn evaluate_points(eff: &Effective) -> AppResult<Vec<PotentialResult>> {
    if eff.h.len() != 1 {
        return Err(config_err(format!(
            "this command takes exactly one --h, got {}",
            eff.h.len()
        )));
    }
    let dom = eff.domain()?;
    let params = eff.params_at(eff.h[0])?;
    eff.validated_rule(&params)?;
    let settings = eff.rule_settings();

    let n = eff.points.len();
    let mut results: Vec<Option<PotentialResult>> = vec![None; n];
    let workers = eff.threads.min(n.max(1));
    if workers <= 1 {
        let density = eff.density(&dom);
        let mut ev = PotentialEvaluator::new(&dom, &density, params, &settings).map_err(lift)?;
        for (slot, p) in results.iter_mut().zip(&eff.points) {
            *slot = Some(ev.evaluate(*p));
        }
    } else {
        let chunk = n.div_ceil(workers);
        std::thread::scope(|scope| -> AppResult<()> {
            let mut handles = Vec::new();
            for (slots, pts) in results.chunks_mut(chunk).zip(eff.points.chunks(chunk)) {
                let dom = &dom;
                let settings = &settings;
                let eff = &eff;
                handles.push(scope.spawn(move || -> AppResult<()> {
                    let density = eff.density(dom);
                    let mut ev =
                        PotentialEvaluator::new(dom, &density, params, settings).map_err(lift)?;
                    for (slot, p) in slots.iter_mut().zip(pts) {
                        *slot = Some(ev.evaluate(*p));
                    }
                    Ok(())
                }));
            }
            for handle in handles {
                handle
                    .join()
                    .map_err(|_| numeric_err("a worker thread panicked"))??;
            }
            Ok(())
        })?;
    }

    let results: Vec<PotentialResult> = results.into_iter().map(Option::unwrap).collect();
    for (res, p) in results.iter().zip(&eff.points) {
        if !res.value.is_finite() {
            return Err(numeric_err(format!(
                "non-finite potential at ({}, {})",
                p[0], p[1]
            )));
        }
    }
    Ok(results)
}

fn cmd_eval(args: &EvalArgs) -> AppResult<()> {
    let eff = merge(&args.shared)?;
    if args.exact && eff.density == DensityName::Oscill {
        return Err(config_err(
            "--exact requested but density oscill has no closed-form potential",
        ));
    }
    let results = evaluate_points(&eff)?;

    let mut csv = eff.echo("eval");
    csv.push_str("x1,x2,exact,approx,abs_error,rel_error\n");
    for (p, res) in eff.points.iter().zip(&results) {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{}",
            sci(p[0]),
            sci(p[1]),
            opt_sci(res.exact),
            sci(res.value),
            opt_sci(res.abs_error),
            opt_sci(res.rel_error)
        );
    }
    write_output(&eff.out, &csv)
}

fn cmd_converge(args: &ConvergeArgs) -> AppResult<()> {
    let eff = merge(&args.shared)?;
    let dom = eff.domain()?;
    let density = eff.density(&dom);
    let template = eff.params_at(eff.h[0])?;
    eff.validated_rule(&template)?;
    let settings = eff.rule_settings();

    let rows = convergence_study(&dom, &density, &eff.points, &eff.h, &template, &settings)
        .map_err(lift)?;

    let mut csv = eff.echo("converge");
    csv.push_str("h_inv,x1,x2,error,rate\n");
    for row in &rows {
        if !row.value.is_finite() {
            return Err(numeric_err(format!(
                "non-finite potential at ({}, {}) for h = {}",
                row.point[0], row.point[1], row.h
            )));
        }
        let _ = writeln!(
            csv,
            "{},{},{},{},{}",
            sci(1.0 / row.h),
            sci(row.point[0]),
            sci(row.point[1]),
            sci(row.error),
            opt_sci(row.rate)
        );
    }
    write_output(&eff.out, &csv)
}

fn cmd_coeffs(args: &CoeffsArgs) -> AppResult<()> {
    let eff = merge(&args.shared)?;
    if eff.h.len() != 1 {
        return Err(config_err(format!(
            "coeffs takes exactly one --h, got {}",
            eff.h.len()
        )));
    }
    let dom = eff.domain()?;
    let params = eff.params_at(eff.h[0])?;
    let rule = eff.validated_rule(&params)?;

    let mut csv = eff.echo("coeffs");
    csv.push_str("kind,ksq,k1,k2,m1,m2,value\n");
    for &ksq in &args.ksq {
        if ksq < 0 {
            return Err(config_err(format!("--ksq must be non-negative, got {ksq}")));
        }
        let value = a_coeff(eff.m, 2, ksq, &params, &rule);
        let _ = writeln!(csv, "a,{ksq},,,,,{}", sci(value));
    }
    for pair in &args.pair {
        let parts: Vec<&str> = pair.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(config_err(format!(
                "--pair expects 'k1,k2,m1,m2', got '{pair}'"
            )));
        }
        let mut idx = [0i64; 4];
        for (slot, part) in idx.iter_mut().zip(&parts) {
            *slot = parse_num("pair index", part)?;
        }
        let k = [idx[0], idx[1]];
        let mnode = [idx[2], idx[3]];
        let node = [mnode[0] as f64 * params.h(), mnode[1] as f64 * params.h()];
        let frame = local_frame(&dom, node)
            .map_err(|e| numeric_err(format!("frame at node ({}, {}): {e}", node[0], node[1])))?;
        let value = b_coeff(eff.m, 2, k, mnode, &frame, &params, &rule);
        let _ = writeln!(
            csv,
            "b,,{},{},{},{},{}",
            k[0],
            k[1],
            mnode[0],
            mnode[1],
            sci(value)
        );
    }
    write_output(&eff.out, &csv)
}

fn run(cli: &Cli) -> AppResult<()> {
    match &cli.cmd {
        Cmd::Eval(args) => cmd_eval(args),
        Cmd::Converge(args) => cmd_converge(args),
        Cmd::Coeffs(args) => cmd_coeffs(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
