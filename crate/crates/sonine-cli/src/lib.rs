//! Command-line front end. `dispatch` runs one invocation and returns the
//! process exit code: 0 success, 2 usage error, 3 domain error, 4 numeric
//! failure (non-convergence or overflow).

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C64;
use sonine::fde::{
    complete_monotonicity_check, residual_report, solve_multiterm, solve_single, IvpProblem, IvpSolution, ProblemSpec,
    Source,
};
use sonine::kernels::{sonine_residual, PowerTerm};
use sonine::opcalc::{conv_series_L, conv_series_l, resolvent_power};
use sonine::operators::{gfd_caputo, gfd_rl, gfi, verify_ft, Theorem};
use sonine::{Error, HSeries, HTerm, KernelSpec, SoninePair, TruncationPolicy};
use std::io::Write;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "sonine", version, about = "General fractional calculus with Sonine kernels")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Inspect a kernel or its associate.
    Kernel {
        #[command(subcommand)]
        action: KernelAction,
    },
    /// Check the Sonine condition κ * k = {1}.
    Sonine {
        #[command(subcommand)]
        action: SonineAction,
    },
    /// Apply a general fractional integral or derivative to a series.
    Op {
        #[command(subcommand)]
        action: OpAction,
    },
    /// Resolvent convolution series l, L and powers of l.
    Series {
        #[command(subcommand)]
        action: SeriesAction,
    },
    /// Solve an initial-value problem.
    Solve {
        #[command(subcommand)]
        action: SolveAction,
    },
    /// Verification suites.
    Verify {
        #[command(subcommand)]
        action: VerifyAction,
    },
}

#[derive(Debug, Subcommand)]
enum KernelAction {
    /// κ as an h-series (json) or sampled on the grid (csv).
    Show(Common),
    /// The associate kernel k.
    Associate(Common),
}

#[derive(Debug, Subcommand)]
enum SonineAction {
    /// Print max |κ * k - 1| on the grid.
    Check {
        #[command(flatten)]
        common: Common,
        /// Pass threshold for the verdict.
        #[arg(long, default_value_t = 1e-8)]
        threshold: f64,
    },
}

#[derive(Debug, Args)]
struct OpArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    f: SourceArgs,
    /// Fold count n.
    #[arg(long, default_value_t = 1)]
    n: u32,
}

#[derive(Debug, Subcommand)]
enum OpAction {
    /// κⁿ * f.
    Gfi(OpArgs),
    /// Caputo-type derivative kⁿ * f⁽ⁿ⁾.
    #[command(name = "gfd-c")]
    GfdC(OpArgs),
    /// Riemann-Liouville-type derivative dⁿ/dtⁿ (kⁿ * f).
    #[command(name = "gfd-rl")]
    GfdRl(OpArgs),
}

#[derive(Debug, Args)]
struct LambdaArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, allow_hyphen_values = true)]
    lambda: f64,
    /// Imaginary part of λ.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    lambda_im: f64,
}

#[derive(Debug, Subcommand)]
enum SeriesAction {
    /// l = Σ λ^{j-1} κʲ.
    #[command(name = "l")]
    Small(LambdaArgs),
    /// L = 1 + {1} * Σ λʲ κʲ.
    #[command(name = "L")]
    Big(LambdaArgs),
    /// lᵐ.
    Resolvent {
        #[command(flatten)]
        lambda: LambdaArgs,
        #[arg(long, default_value_t = 1)]
        m: u32,
    },
}

#[derive(Debug, Subcommand)]
enum SolveAction {
    /// (*D y) - λy = f, y(0) = y0.
    Single {
        #[command(flatten)]
        lambda: LambdaArgs,
        #[command(flatten)]
        f: SourceArgs,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        y0: f64,
    },
    /// Multi-term problem from a JSON file.
    Multi {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        problem: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum VerifyAction {
    /// One fundamental theorem on a given f.
    Ft {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        f: SourceArgs,
        /// FT1-RL, FT1-C, FT2-C or FT2-RL.
        #[arg(long)]
        theorem: String,
        #[arg(long, default_value_t = 1)]
        n: u32,
    },
    /// Complete monotonicity of L on [0, T].
    Cm {
        #[command(flatten)]
        lambda: LambdaArgs,
        #[arg(long = "T", default_value_t = 1.0)]
        t_max: f64,
        #[arg(long, default_value_t = 4)]
        orders: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KernelType {
    Power,
    Tempered,
    Sum,
    Bessel,
    /// κ = t^{β-1}E_{α,β}(-t^α), k = h_{1-β+α} + h_{1-β}.
    Ml,
    /// κ = h_{1-β+α} + h_{1-β}, k = t^{β-1}E_{α,β}(-t^α).
    MlSum,
    Series,
    /// κ = {1}, k = δ.
    Unit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct Common {
    #[arg(long, value_enum)]
    kernel: Option<KernelType>,
    /// Kernel spec as a JSON file (alternative to --kernel).
    #[arg(long, conflicts_with = "kernel")]
    kernel_file: Option<PathBuf>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    rho: Option<f64>,
    /// Series kernels: a0,a1,...; sum kernels: w:order,w:order,...
    #[arg(long, allow_hyphen_values = true)]
    coeffs: Option<String>,
    /// Term budget of the truncation policy.
    #[arg(long)]
    terms: Option<usize>,
    /// Pruning tolerance of the truncation policy.
    #[arg(long)]
    tol: Option<f64>,
    /// tmin:tmax:count[:lin|log|graded]
    #[arg(long, default_value = "0.01:2:64")]
    grid: String,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug, Args)]
struct SourceArgs {
    /// Source terms c@beta,... meaning Σ c·h_beta (e.g. 1@1,1@2 for 1 + t).
    #[arg(long, allow_hyphen_values = true)]
    f: Option<String>,
    /// Source as an h-series JSON file.
    #[arg(long, conflicts_with = "f")]
    f_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Spacing {
    Linear,
    Log,
    Graded,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct GridSpec {
    tmin: f64,
    tmax: f64,
    count: usize,
    spacing: Spacing,
}

fn parse_grid(s: &str) -> Result<GridSpec, Error> {
    let bad = |m: &str| Error::Usage(format!("grid '{s}': {m}"));
    let parts: Vec<&str> = s.split(':').collect();
    if !(3..=4).contains(&parts.len()) {
        return Err(bad("expected tmin:tmax:count[:lin|log|graded]"));
    }
    let num = |p: &str| p.trim().parse::<f64>().map_err(|_| bad("bad number"));
    let tmin = num(parts[0])?;
    let tmax = num(parts[1])?;
    let count: usize = parts[2].trim().parse().map_err(|_| bad("bad count"))?;
    let spacing = match parts.get(3).map(|x| x.trim()) {
        None | Some("graded") => Spacing::Graded,
        Some("lin") | Some("linear") => Spacing::Linear,
        Some("log") => Spacing::Log,
        Some(other) => return Err(bad(&format!("unknown spacing '{other}'"))),
    };
    if count < 2 {
        return Err(bad("count must be at least 2"));
    }
    if !(tmin >= 0.0 && tmax > tmin && tmax.is_finite()) {
        return Err(bad("need 0 <= tmin < tmax"));
    }
    if spacing == Spacing::Log && tmin == 0.0 {
        return Err(bad("log spacing needs tmin > 0"));
    }
    Ok(GridSpec {
        tmin,
        tmax,
        count,
        spacing,
    })
}

impl GridSpec {
    /// Graded spacing clusters points at tmin with exponent 2/p.
    fn points(&self, p: f64) -> Vec<f64> {
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                let x = i as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.tmin + (self.tmax - self.tmin) * x,
                    Spacing::Log => self.tmin * (self.tmax / self.tmin).powf(x),
                    Spacing::Graded => self.tmin + (self.tmax - self.tmin) * x.powf(2.0 / p.clamp(0.05, 1.0)),
                }
            })
            .collect()
    }
}

struct Ctx<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

#[derive(Debug)]
enum Failure {
    Lib(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type Res<T> = std::result::Result<T, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Lib(Error::Usage(msg.into()))
}

fn need(v: Option<f64>, name: &str, kernel: &str) -> Res<f64> {
    v.ok_or_else(|| usage(format!("--kernel {kernel} needs --{name}")))
}

fn read_file(path: &PathBuf) -> Res<String> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn parse_list(s: &str) -> Res<Vec<f64>> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| usage(format!("bad number '{x}' in --coeffs"))))
        .collect()
}

impl Common {
    fn policy(&self) -> Res<TruncationPolicy> {
        let mut p = TruncationPolicy::default();
        if let Some(t) = self.terms {
            p.max_terms = t;
        }
        if let Some(t) = self.tol {
            p.prune_tol = t;
        }
        p.validate()?;
        Ok(p)
    }

    fn pair(&self) -> Res<SoninePair> {
        if let Some(path) = &self.kernel_file {
            let spec: KernelSpec =
                serde_json::from_str(&read_file(path)?).map_err(|e| usage(format!("kernel file: {e}")))?;
            return Ok(SoninePair::from_kernel(spec)?);
        }
        let kind = self.kernel.ok_or_else(|| usage("give --kernel or --kernel-file"))?;
        let name = format!("{kind:?}").to_lowercase();
        let spec = match kind {
            KernelType::Power => KernelSpec::Power {
                alpha: need(self.alpha, "alpha", &name)?,
            },
            KernelType::Tempered => KernelSpec::Tempered {
                alpha: need(self.alpha, "alpha", &name)?,
                rho: need(self.rho, "rho", &name)?,
            },
            KernelType::Bessel => KernelSpec::Bessel {
                alpha: need(self.alpha, "alpha", &name)?,
            },
            KernelType::Ml => KernelSpec::Ml {
                alpha: need(self.alpha, "alpha", &name)?,
                beta: need(self.beta, "beta", &name)?,
            },
            KernelType::MlSum => {
                return Ok(SoninePair::ml(
                    need(self.alpha, "alpha", "ml-sum")?,
                    need(self.beta, "beta", "ml-sum")?,
                )?)
            }
            KernelType::Series => KernelSpec::Series {
                alpha: need(self.alpha, "alpha", &name)?,
                a: parse_list(self.coeffs.as_deref().ok_or_else(|| usage("--kernel series needs --coeffs"))?)?,
            },
            KernelType::Sum => {
                let raw = self.coeffs.as_deref().ok_or_else(|| usage("--kernel sum needs --coeffs w:order,..."))?;
                let terms = raw
                    .split(',')
                    .map(|item| {
                        let (w, o) = item
                            .split_once(':')
                            .ok_or_else(|| usage(format!("sum term '{item}' is not w:order")))?;
                        let num = |x: &str| x.trim().parse::<f64>().map_err(|_| usage(format!("bad sum term '{item}'")));
                        Ok(PowerTerm {
                            weight: num(w)?,
                            order: num(o)?,
                        })
                    })
                    .collect::<Res<Vec<_>>>()?;
                KernelSpec::Sum { terms }
            }
            KernelType::Unit => KernelSpec::unit(),
        };
        Ok(SoninePair::from_kernel(spec)?)
    }

    fn grid(&self, p: f64) -> Res<Vec<f64>> {
        Ok(parse_grid(&self.grid)?.points(p))
    }

    fn emit(&self, ctx: &mut Ctx, text: &str) -> Res<()> {
        match &self.out {
            Some(path) => std::fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
            None => Ok(ctx.out.write_all(text.as_bytes())?),
        }
    }

    /// Series as JSON, or sampled on the grid as CSV.
    fn emit_series(&self, ctx: &mut Ctx, s: &HSeries, p: f64) -> Res<()> {
        let text = match self.format {
            Format::Json => to_json(s)?,
            Format::Csv => series_csv(s, &self.grid(p)?)?,
        };
        self.emit(ctx, &text)
    }
}

impl LambdaArgs {
    fn lambda(&self) -> Res<C64> {
        let l = C64::new(self.lambda, self.lambda_im);
        if !l.is_finite() {
            return Err(usage("lambda must be finite"));
        }
        Ok(l)
    }
}

impl SourceArgs {
    fn series(&self, policy: TruncationPolicy) -> Res<HSeries> {
        if let Some(path) = &self.f_file {
            let s: HSeries = serde_json::from_str(&read_file(path)?).map_err(|e| usage(format!("f file: {e}")))?;
            return Ok(s.with_policy(policy)?);
        }
        let raw = match &self.f {
            Some(r) => r,
            None => return Ok(HSeries::zero_with(policy)),
        };
        let terms = raw
            .split(',')
            .map(|item| {
                let (c, b) = item
                    .split_once('@')
                    .ok_or_else(|| usage(format!("source term '{item}' is not c@beta")))?;
                let num = |x: &str| x.trim().parse::<f64>().map_err(|_| usage(format!("bad source term '{item}'")));
                Ok(HTerm::new(C64::new(num(c)?, 0.0), num(b)?))
            })
            .collect::<Res<Vec<_>>>()?;
        Ok(HSeries::new(terms, policy)?)
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> Res<String> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| Failure::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

/// Relative size of the truncation tail beyond which a value is refused.
const TAIL_TOL: f64 = 1e-8;

/// Refuses values of truncated series whose omitted tail is not negligible.
fn eval_at(s: &HSeries, t: f64) -> Res<C64> {
    if t == 0.0 {
        return Ok(s.value_at_zero()?);
    }
    let ev = s.evaluate(t)?;
    if !(ev.tail_bound <= TAIL_TOL * ev.value.norm().max(1.0)) {
        return Err(Failure::Lib(Error::NonConvergence(format!(
            "series truncated below exponent {}: tail bound {:e} at t = {t}; raise --terms or shrink the grid",
            s.horizon().unwrap_or(f64::INFINITY),
            ev.tail_bound
        ))));
    }
    Ok(ev.value)
}

fn series_csv(s: &HSeries, grid: &[f64]) -> Res<String> {
    let mut out = String::from("t,re,im\n");
    for &t in grid {
        let v = eval_at(s, t)?;
        out.push_str(&format!("{},{},{}\n", fmt(t), fmt(v.re), fmt(v.im)));
    }
    Ok(out)
}

fn solution_csv(sol: &IvpSolution, grid: &[f64]) -> Res<String> {
    let mut out = String::from("t,re,im\n");
    for &t in grid {
        let mut v = eval_at(&sol.y, t)?;
        if let Some(s) = &sol.y_f_sampled {
            v += s.eval(t)?;
        }
        out.push_str(&format!("{},{},{}\n", fmt(t), fmt(v.re), fmt(v.im)));
    }
    Ok(out)
}

fn report_solution(ctx: &mut Ctx, problem: &IvpProblem, sol: &IvpSolution, grid: &[f64], policy: TruncationPolicy) -> Res<()> {
    for w in &sol.diagnostics.warnings {
        writeln!(ctx.err, "warning: {w}")?;
    }
    if let Some(h) = sol.diagnostics.horizon {
        writeln!(ctx.err, "series exact below exponent {}", fmt(h))?;
    }
    if sol.diagnostics.imag_residue > 0.0 {
        writeln!(ctx.err, "conjugate residue mismatch {}", fmt(sol.diagnostics.imag_residue))?;
    }
    if matches!(problem.f, Source::Sampled(_)) {
        writeln!(ctx.err, "residual check skipped: sampled source")?;
        return Ok(());
    }
    let r = residual_report(problem, &sol.y, grid, policy)?;
    writeln!(
        ctx.err,
        "equation residual {} (t >= 0.01), initial residual {}",
        fmt(r.equation_residual),
        fmt(r.initial_residual)
    )?;
    Ok(())
}

fn run(cli: Cli, ctx: &mut Ctx) -> Res<()> {
    match cli.cmd {
        Cmd::Kernel { action } => match action {
            KernelAction::Show(c) => {
                let pair = c.pair()?;
                let s = pair.kappa_series(c.policy()?)?;
                match c.format {
                    Format::Json => {
                        let v = serde_json::json!({ "kernel": pair.kappa, "series": s });
                        c.emit(ctx, &to_json(&v)?)
                    }
                    Format::Csv => c.emit_series(ctx, &s, pair.kappa_order()),
                }
            }
            KernelAction::Associate(c) => {
                let pair = c.pair()?;
                if let Some(w) = &pair.warning {
                    writeln!(ctx.err, "warning: {w}")?;
                }
                let k = pair.k_lowered(c.policy()?)?;
                match c.format {
                    Format::Json => {
                        let v = serde_json::json!({ "pair": pair, "series": k.series() });
                        c.emit(ctx, &to_json(&v)?)
                    }
                    Format::Csv => {
                        let s = pair.k_series(c.policy()?)?;
                        let p = s.min_exponent().unwrap_or(1.0);
                        c.emit_series(ctx, &s, p)
                    }
                }
            }
        },
        Cmd::Sonine {
            action: SonineAction::Check { common: c, threshold },
        } => {
            let pair = c.pair()?;
            let grid = c.grid(pair.kappa_order())?;
            if grid[0] <= 0.0 {
                return Err(usage("sonine check needs tmin > 0"));
            }
            let r = sonine_residual(&pair, &grid, c.policy()?)?;
            let verdict = if r <= threshold { "PASS" } else { "FAIL" };
            let line = format!(
                "residual {} on {} points in [{}, {}]: {verdict}\n",
                fmt(r),
                grid.len(),
                fmt(grid[0]),
                fmt(grid[grid.len() - 1])
            );
            c.emit(ctx, &line)
        }
        Cmd::Op { action } => {
            let (which, a) = match action {
                OpAction::Gfi(a) => ("gfi", a),
                OpAction::GfdC(a) => ("gfd-c", a),
                OpAction::GfdRl(a) => ("gfd-rl", a),
            };
            let c = &a.common;
            let policy = c.policy()?;
            let pair = c.pair()?;
            let f = a.f.series(policy)?;
            let s = match which {
                "gfi" => gfi(&pair.kappa_series(policy)?, &f, a.n)?,
                "gfd-c" => gfd_caputo(&pair, &f, a.n, policy)?,
                _ => gfd_rl(&pair, &f, a.n, policy)?,
            };
            let p = s.min_exponent().unwrap_or(1.0);
            c.emit_series(ctx, &s, p)
        }
        Cmd::Series { action } => {
            let (la, m) = match action {
                SeriesAction::Small(la) => (la, None),
                SeriesAction::Big(la) => (la, Some(0)),
                SeriesAction::Resolvent { lambda, m } => (lambda, Some(m)),
            };
            let c = &la.common;
            let policy = c.policy()?;
            let pair = c.pair()?;
            let lam = la.lambda()?;
            let s = match m {
                None => conv_series_l(&pair, lam, policy)?,
                Some(0) => conv_series_L(&pair, lam, policy)?,
                Some(m) => resolvent_power(&pair, lam, m, policy)?,
            };
            c.emit_series(ctx, &s, pair.kappa_order())
        }
        Cmd::Solve { action } => match action {
            SolveAction::Single { lambda: la, f, y0 } => {
                let c = &la.common;
                let policy = c.policy()?;
                let pair = c.pair()?;
                let lam = la.lambda()?;
                if lam.im != 0.0 {
                    return Err(usage("solve single takes a real lambda"));
                }
                let f = f.series(policy)?;
                let sol = solve_single(&pair, lam.re, &f, y0, policy)?;
                let grid = c.grid(pair.kappa_order())?;
                let problem = IvpProblem {
                    pair: pair.clone(),
                    a: vec![-lam.re, 1.0],
                    f: Source::Series(f),
                    inits: vec![y0],
                };
                report_solution(ctx, &problem, &sol, &grid, policy)?;
                c.emit_series(ctx, &sol.y, pair.kappa_order())
            }
            SolveAction::Multi { common: c, problem } => {
                let policy = c.policy()?;
                let spec: ProblemSpec =
                    serde_json::from_str(&read_file(&problem)?).map_err(|e| usage(format!("problem file: {e}")))?;
                let problem = spec.to_problem(policy)?;
                let sol = solve_multiterm(&problem, policy)?;
                let p = problem.pair.kappa_order();
                let grid = c.grid(p)?;
                report_solution(ctx, &problem, &sol, &grid, policy)?;
                let text = match (c.format, &sol.y_f_sampled) {
                    (Format::Csv, _) => solution_csv(&sol, &grid)?,
                    (Format::Json, None) => to_json(&sol.y)?,
                    (Format::Json, Some(s)) => {
                        let v: Vec<C64> = s.values();
                        let sampled = serde_json::json!({
                            "p": s.p(),
                            "t": s.nodes(),
                            "re": v.iter().map(|z| z.re).collect::<Vec<_>>(),
                            "im": v.iter().map(|z| z.im).collect::<Vec<_>>(),
                        });
                        to_json(&serde_json::json!({ "y": sol.y, "y_f": { "sampled": sampled } }))?
                    }
                };
                c.emit(ctx, &text)
            }
        },
        Cmd::Verify { action } => match action {
            VerifyAction::Ft {
                common: c,
                f,
                theorem,
                n,
            } => {
                let policy = c.policy()?;
                let pair = c.pair()?;
                let th: Theorem = theorem.parse()?;
                let f = f.series(policy)?;
                if f.is_zero() {
                    return Err(usage("verify ft needs a non-zero --f or --f-file"));
                }
                let grid: Vec<f64> = c.grid(pair.kappa_order())?.into_iter().filter(|&t| t > 0.0).collect();
                let rep = verify_ft(&pair, &f, th, n, &grid, policy)?;
                let line = format!(
                    "{} n={} residual {} tail {} on {} points\n",
                    rep.theorem,
                    rep.n,
                    fmt(rep.residual),
                    fmt(rep.tail_bound),
                    grid.len()
                );
                c.emit(ctx, &line)
            }
            VerifyAction::Cm {
                lambda: la,
                t_max,
                orders,
            } => {
                let c = &la.common;
                let policy = c.policy()?;
                let pair = c.pair()?;
                let s = conv_series_L(&pair, la.lambda()?, policy)?;
                let rep = complete_monotonicity_check(&s, t_max, orders)?;
                let mut text = String::from("n,min_difference,tol,min_derivative,pass\n");
                for o in &rep.orders {
                    text.push_str(&format!(
                        "{},{},{},{},{}\n",
                        o.n,
                        fmt(o.min_difference),
                        fmt(o.tol),
                        fmt(o.min_derivative),
                        o.pass
                    ));
                }
                writeln!(ctx.err, "complete monotonicity: {}", if rep.pass { "PASS" } else { "FAIL" })?;
                c.emit(ctx, &text)
            }
        },
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn dispatch<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let mut ctx = Ctx { out, err };
    match run(cli, &mut ctx) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let (code, msg) = match f {
                Failure::Lib(e) => (
                    match e {
                        Error::Usage(_) => EXIT_USAGE,
                        Error::Domain(_) => EXIT_DOMAIN,
                        Error::NonConvergence(_) | Error::Range(_) => EXIT_NUMERIC,
                    },
                    e.to_string(),
                ),
                Failure::Io(m) => (EXIT_USAGE, format!("i/o error: {m}")),
            };
            let _ = writeln!(ctx.err, "sonine: {msg}");
            code
        }
    }
}
