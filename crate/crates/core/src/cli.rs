//! Command-line front end: `heun <command> [flags]`.
//!
//! Complex flags take `re` or `re,im`; `--a=cbrt-minus-one` selects
//! `e^{iπ/3}`. With `--output json` every command prints exactly one
//! object per line with the fields `command`, `params`, `result`,
//! `error_estimate`, `tags` and `branch_choices`. Complex numbers are
//! `[re, im]` pairs. Exit status is 0 on success, 1 when the computation
//! fails and 2 when the flags are unusable.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::acceptance::run_all;
use crate::closed_forms::maier_branch;
use crate::expansions::{build_solution, radius_at, sum_expansion, Center, ExpansionSpec};
use crate::heun_model::{cbrt_minus_one, classify, make_params, CLASSIFY_TOL};
use crate::ode_oracle::{integrate_ivp, OraclePath, DEFAULT_CLEARANCE};
use crate::recurrences::{radius_origin, radius_z0, solve_termination, PinnedExponent};
use crate::{Complex, HeunError, HeunParams, ReductionClass};

/// Termination roots with a residual below this are reported as verified.
const VERIFIED: f64 = 1e-9;

#[derive(Parser, Debug)]
#[command(name = "heun", about = "Series solutions of the general Heun equation")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Output::Human, global = true)]
    output: Output,
    #[command(subcommand)]
    command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum Output {
    Human,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sum an expansion at one point.
    Eval(EvalArgs),
    /// Integrate the equation from the expansion's probe point and compare.
    Oracle(EvalArgs),
    /// Reduction tags of a parameter set.
    Classify(ParamArgs),
    /// Convergence radii and the cubic roots behind them.
    Radius(ParamArgs),
    /// Accessory parameters for which the origin series terminates.
    Terminate(TerminateArgs),
    /// Run the cross-validation suite.
    Selftest,
}

#[derive(Args, Debug, Clone)]
struct ParamArgs {
    /// Third singular point; `re,im` or `cbrt-minus-one`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_a)]
    a: Complex,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex, default_value = "0")]
    q: Complex,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex, default_value = "0")]
    alpha: Complex,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex, default_value = "0")]
    beta: Complex,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex, default_value = "0")]
    gamma: Complex,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex, default_value = "0")]
    delta: Complex,
}

#[derive(Args, Debug, Clone)]
struct EvalArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    z: Complex,
    #[arg(long, value_enum, default_value_t = CenterArg::Origin)]
    center: CenterArg,
    /// Exponent of the derivative-equation solution at the center.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex, default_value = "0")]
    mu: Complex,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value_t = 2000)]
    n_max: usize,
}

#[derive(Args, Debug, Clone)]
struct TerminateArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Degree N of the terminating series.
    #[arg(long)]
    n: usize,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex, default_value = "0")]
    mu: Complex,
    /// Which of α, β equals N + μ.
    #[arg(long, value_enum, default_value_t = PinArg::Alpha)]
    pin: PinArg,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum CenterArg {
    Origin,
    One,
    A,
    Infinity,
    Z0,
}

impl From<CenterArg> for Center {
    fn from(c: CenterArg) -> Center {
        match c {
            CenterArg::Origin => Center::Origin,
            CenterArg::One => Center::One,
            CenterArg::A => Center::A,
            CenterArg::Infinity => Center::Infinity,
            CenterArg::Z0 => Center::Z0,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum PinArg {
    Alpha,
    Beta,
}

fn parse_complex(s: &str) -> Result<Complex, String> {
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| format!("`{s}` is not a number or an `re,im` pair"))
    };
    let z = match s.split_once(',') {
        Some((re, im)) => Complex::new(num(re)?, num(im)?),
        None => Complex::new(num(s)?, 0.0),
    };
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

fn parse_a(s: &str) -> Result<Complex, String> {
    if s == "cbrt-minus-one" {
        Ok(cbrt_minus_one())
    } else {
        parse_complex(s)
    }
}

enum Failure {
    Flags(String),
    Compute(HeunError),
}

impl From<HeunError> for Failure {
    fn from(e: HeunError) -> Self {
        Failure::Compute(e)
    }
}

/// One command's output before formatting.
struct Report {
    command: &'static str,
    params: Option<HeunParams>,
    result: Value,
    error_estimate: Option<f64>,
    tags: Vec<ReductionClass>,
    branch_choices: Value,
    human: Vec<String>,
}

impl Report {
    fn new(command: &'static str, params: Option<HeunParams>) -> Self {
        let tags = params
            .map(|p| classify(&p, CLASSIFY_TOL).into_iter().collect())
            .unwrap_or_default();
        Report {
            command,
            params,
            result: Value::Null,
            error_estimate: None,
            tags,
            branch_choices: json!({}),
            human: Vec::new(),
        }
    }

    fn json(&self) -> Value {
        json!({
            "command": self.command,
            "params": self.params,
            "result": self.result,
            "error_estimate": self.error_estimate,
            "tags": self.tags,
            "branch_choices": self.branch_choices,
        })
    }
}

fn cx(z: Complex) -> Value {
    json!([z.re, z.im])
}

fn params_of(a: &ParamArgs) -> Result<HeunParams, Failure> {
    make_params(a.a, a.q, a.alpha, a.beta, a.gamma, a.delta).map_err(|e| Failure::Flags(e.to_string()))
}

fn spec_of(a: &EvalArgs) -> Result<ExpansionSpec, Failure> {
    if !(a.tol > 0.0 && a.tol < 1.0) {
        return Err(Failure::Flags(format!("--tol must lie in (0, 1), got {}", a.tol)));
    }
    if a.n_max == 0 {
        return Err(Failure::Flags("--n-max must be positive".into()));
    }
    Ok(ExpansionSpec::new(a.center.into(), a.mu)
        .with_tol(a.tol)
        .with_n_max(a.n_max))
}

fn branch_choices(p: &HeunParams, spec: &ExpansionSpec, probe: Option<Complex>) -> Value {
    let mut b = json!({
        "center": spec.center,
        "mu": cx(spec.mu),
        "powers": "principal branches; at 1, a and q/(alpha beta) local branches cut away from the disc",
    });
    if let Some(w) = probe {
        b["probe"] = cx(w);
    }
    if let Ok(m) = maier_branch(p) {
        b["cubic_branch"] = json!(m);
    }
    b
}

fn eval(a: &EvalArgs) -> Result<Report, Failure> {
    let p = params_of(&a.params)?;
    let spec = spec_of(a)?;
    let s = sum_expansion(&p, &spec, a.z)?;
    let mut r = Report::new("eval", Some(p));
    r.result = json!({
        "z": cx(a.z),
        "u": cx(s.u),
        "terms_used": s.terms_used,
        "est_error": s.est_error,
        "c0": cx(s.c0),
        "warnings": s.warnings,
    });
    r.error_estimate = Some(s.est_error);
    r.branch_choices = branch_choices(&p, &spec, None);
    r.human = vec![
        format!("u({}) = {}", a.z, s.u),
        format!("terms used: {}", s.terms_used),
        format!("estimated error: {:e}", s.est_error),
        format!("C0 = {}", s.c0),
    ];
    r.human.extend(s.warnings.iter().map(|w| format!("warning: {w}")));
    Ok(r)
}

fn oracle(a: &EvalArgs) -> Result<Report, Failure> {
    let p = params_of(&a.params)?;
    let spec = spec_of(a)?;
    let s = sum_expansion(&p, &spec, a.z)?;
    // same truncation as the sum, so C₀ agrees
    let sol = build_solution(&p, &spec, s.terms_used.saturating_sub(1))?;
    let w = sol.probe;
    let u0 = sol.eval(w)?;
    let (du0, _) = sol.derivatives(w)?;
    let u = if (a.z - w).norm() == 0.0 {
        u0
    } else {
        let path = OraclePath::auto(&p, w, a.z, DEFAULT_CLEARANCE.min(0.45 * sol.radius))?;
        let tol = (0.01 * a.tol).max(1e-13);
        integrate_ivp(&p, u0, du0, &path, tol)?
            .last()
            .expect("path has waypoints")
            .u
    };
    let delta = (u - s.u).norm();
    let mut r = Report::new("oracle", Some(p));
    r.result = json!({
        "z": cx(a.z),
        "oracle_u": cx(u),
        "eval_u": cx(s.u),
        "delta": delta,
        "start": cx(w),
    });
    r.error_estimate = Some(delta);
    r.branch_choices = branch_choices(&p, &spec, Some(w));
    r.human = vec![
        format!("oracle u({}) = {u}", a.z),
        format!("series u({}) = {}", a.z, s.u),
        format!("|delta| = {delta:e} (integrated from {w})"),
    ];
    Ok(r)
}

fn classify_cmd(a: &ParamArgs) -> Result<Report, Failure> {
    let p = params_of(a)?;
    let mut r = Report::new("classify", Some(p));
    r.result = json!(r.tags);
    r.human = r.tags.iter().map(|t| format!("{t:?}")).collect();
    Ok(r)
}

fn radius_cmd(a: &ParamArgs) -> Result<Report, Failure> {
    let p = params_of(a)?;
    let origin = radius_origin(&p);
    let mut r = Report::new("radius", Some(p));
    let roots: Vec<Value> = origin.roots.iter().map(|&z| cx(z)).collect();
    let mut result = json!({
        "origin": { "radius": origin.radius, "roots": roots, "degenerate": origin.degenerate },
    });
    r.human.push(format!("origin: {}", origin.radius));
    r.human.push(format!("  cubic roots: {}", join(&origin.roots)));
    match radius_z0(&p) {
        Ok(z0) => {
            let roots: Vec<Value> = z0.roots.iter().map(|&z| cx(z)).collect();
            result["z0"] = json!({ "radius": z0.radius, "roots": roots, "degenerate": z0.degenerate });
            r.human.push(format!("q/(alpha beta): {}", z0.radius));
            r.human.push(format!("  cubic roots: {}", join(&z0.roots)));
        }
        Err(e) => {
            result["z0"] = Value::Null;
            r.human.push(format!("q/(alpha beta): n/a ({e})"));
        }
    }
    for (name, center) in [("one", Center::One), ("a", Center::A)] {
        let rad = radius_at(&p, center)?;
        result[name] = json!(rad);
        r.human.push(format!("{name}: {rad}"));
    }
    r.result = result;
    Ok(r)
}

fn join(zs: &[Complex]) -> String {
    zs.iter().map(|z| z.to_string()).collect::<Vec<_>>().join(", ")
}

fn terminate(a: &TerminateArgs) -> Result<Report, Failure> {
    let p = params_of(&a.params)?;
    let which = match a.pin {
        PinArg::Alpha => PinnedExponent::AlphaPins,
        PinArg::Beta => PinnedExponent::BetaPins,
    };
    let roots = solve_termination(&p, a.n, a.mu, which)?;
    let mut r = Report::new("terminate", Some(p));
    r.result = json!({
        "n": a.n,
        "mu": cx(a.mu),
        "roots": roots
            .iter()
            .map(|t| json!({ "q": cx(t.q), "residual": t.residual, "verified": t.residual < VERIFIED }))
            .collect::<Vec<_>>(),
    });
    r.error_estimate = roots.iter().map(|t| t.residual).reduce(f64::max);
    r.human.push(format!("{} admissible q", roots.len()));
    for t in &roots {
        let status = if t.residual < VERIFIED {
            "verified"
        } else {
            "unverified"
        };
        r.human
            .push(format!("  q = {}  residual {:e}  {status}", t.q, t.residual));
    }
    Ok(r)
}

fn selftest() -> (Report, bool) {
    let reports = run_all();
    let passed = reports.iter().filter(|c| c.passed).count();
    let mut r = Report::new("selftest", None);
    r.result = json!({
        "passed": passed,
        "failed": reports.len() - passed,
        "criteria": reports
            .iter()
            .map(|c| json!({ "id": c.id, "name": c.name, "passed": c.passed, "detail": c.detail, "seconds": c.seconds }))
            .collect::<Vec<_>>(),
    });
    r.human = reports.iter().map(|c| c.to_string()).collect();
    r.human.push(format!("{passed}/{} passed", reports.len()));
    (r, passed == reports.len())
}

/// Parse `argv` (program name first), run one command and return the exit
/// status. Results go to `out`, diagnostics to `err`.
pub fn run_cli<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(sink, "{text}");
            return if code == 0 { 0 } else { 2 };
        }
    };
    let mut ok = true;
    let outcome = match &cli.command {
        Command::Eval(a) => eval(a),
        Command::Oracle(a) => oracle(a),
        Command::Classify(a) => classify_cmd(a),
        Command::Radius(a) => radius_cmd(a),
        Command::Terminate(a) => terminate(a),
        Command::Selftest => {
            let (r, all) = selftest();
            ok = all;
            Ok(r)
        }
    };
    match outcome {
        Ok(r) => {
            let written = match cli.output {
                Output::Json => writeln!(out, "{}", r.json()),
                Output::Human => r.human.iter().try_for_each(|l| writeln!(out, "{l}")),
            };
            if written.is_err() {
                return 1;
            }
            if ok {
                0
            } else {
                let _ = writeln!(err, "error: self-test failures");
                1
            }
        }
        Err(Failure::Flags(m)) => {
            let _ = writeln!(err, "error: invalid flags: {m}");
            2
        }
        Err(Failure::Compute(e)) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}
