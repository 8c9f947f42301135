//! Subcommand implementations. Each returns the rendered output and an exit code.

use crate::dto::{AngleGrowthDto, CheckDto, Complex, EpsScenarioDto, PropertyDto, Real, ReportDto};
use crate::error::{CliError, Context, EXIT_OK, EXIT_VERIFICATION};
use crate::io::{read_function, read_matrix, FunctionFile, MatrixFile};
use num_complex::Complex64 as C64;
use rittcalc_core::diagnostics::{
    analyze, angle_growth_demo, angle_growth_grid, angle_growth_matrix, eps_scenario, ritt_samples, spectral_stolz,
    verify_improving, verify_subordination, AnalyzeConfig, GridConfig, VerifyConfig,
};
use rittcalc_core::funclasses::{
    hausdorff_coeffs, min_covering_sector, ConvexSeries, DEFAULT_MEASURE_NODES, FunctionSpec, Generator, SamplingConfig, Series,
};
use rittcalc_core::opcalc::{apply_function, ApplyMethod};
use rittcalc_core::regions::cayley;
use rittcalc_core::suites::{run_suite, SUITES};
use rittcalc_core::CMatrix;
use rayon::prelude::*;
use serde::Serialize;
use std::path::Path;

/// Coefficients kept when a function is used as a convex series.
const SERIES_TERMS: usize = 2000;
/// Tolerance for the Wiener calculus when forming h(T).
const APPLY_TOL: f64 = 1e-10;
/// Demo pass thresholds.
const DEMO_FORMULA_TOL: f64 = 1e-3;
const DEMO_REFINE_TOL: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// Settings shared by all subcommands.
#[derive(Debug, Clone, PartialEq)]
pub struct Globals {
    pub tol: f64,
    pub grid: GridConfig,
    pub format: Format,
}

impl Default for Globals {
    fn default() -> Self {
        Globals { tol: 1e-6, grid: GridConfig::default(), format: Format::Json }
    }
}

impl Globals {
    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(CliError::input(format!("--tol must be positive, got {}", self.tol)));
        }
        self.grid.validate().context("grid")
    }

    fn analyze_config(&self) -> AnalyzeConfig {
        AnalyzeConfig { grid: self.grid.clone(), tol: self.tol, ..AnalyzeConfig::default() }
    }

    fn verify_config(&self, sampling: SamplingConfig) -> VerifyConfig {
        VerifyConfig { tol: self.tol, grid: self.grid.clone(), sampling }
    }
}

/// Rendered command output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub body: String,
    pub code: i32,
}

fn json<T: Serialize>(v: &T, code: i32) -> Result<Output, CliError> {
    let mut body = serde_json::to_string_pretty(v).map_err(|e| CliError::Numerical(format!("serializing report: {e}")))?;
    body.push('\n');
    Ok(Output { body, code })
}

fn csv_rows<R: Serialize>(rows: impl IntoIterator<Item = R>, code: i32) -> Result<Output, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| CliError::Numerical(format!("writing csv: {e}")))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Numerical(format!("writing csv: {e}")))?;
    Ok(Output { body: String::from_utf8(bytes).expect("csv output is utf-8"), code })
}

fn csv_unsupported(cmd: &str) -> CliError {
    CliError::input(format!("--format csv is not available for {cmd}; use json"))
}

fn code(pass: bool) -> i32 {
    if pass {
        EXIT_OK
    } else {
        EXIT_VERIFICATION
    }
}

#[derive(Serialize)]
struct AnalyzeOut<'a> {
    command: &'static str,
    input: &'a str,
    report: ReportDto,
}

#[derive(Serialize)]
struct ResolventRow {
    z_re: f64,
    z_im: f64,
    radius: f64,
    /// |z − 1|·‖(z − T)⁻¹‖
    value: Real,
}

pub fn cmd_analyze(matrix: &Path, g: &Globals) -> Result<Output, CliError> {
    let t = read_matrix(matrix)?;
    analyze_matrix(&t, &matrix.display().to_string(), g)
}

/// `analyze` on an already loaded matrix.
pub fn analyze_matrix(t: &CMatrix, input: &str, g: &Globals) -> Result<Output, CliError> {
    match g.format {
        Format::Json => {
            let cfg = g.analyze_config();
            let r = analyze(t, &cfg).context("analyze")?;
            json(&AnalyzeOut { command: "analyze", input, report: ReportDto::new(&r, &cfg) }, EXIT_OK)
        }
        Format::Csv => {
            let s = ritt_samples(t, &g.grid).context("analyze")?;
            csv_rows(
                s.into_iter().map(|(z, v)| ResolventRow { z_re: z.re, z_im: z.im, radius: z.norm(), value: Real(v) }),
                EXIT_OK,
            )
        }
    }
}

/// Convex series form of a disc function, when it has one.
fn convex_form(f: &FunctionSpec) -> Result<Option<ConvexSeries>, CliError> {
    Ok(match f {
        FunctionSpec::Convex(c) => Some(c.clone()),
        FunctionSpec::Named(n) => match n.coeffs(SERIES_TERMS) {
            Ok(Series::Convex(c)) => Some(c),
            _ => None,
        },
        FunctionSpec::Hausdorff(h) => {
            let mut c = hausdorff_coeffs(h, SERIES_TERMS).context("hausdorff coefficients")?;
            c.generator = Some(Generator::Hausdorff(h.clone()));
            Some(c)
        }
        FunctionSpec::Stieltjes(_) | FunctionSpec::NPPlus(_) => None,
    })
}

fn is_regular_hausdorff(f: &FunctionSpec) -> bool {
    !matches!(f, FunctionSpec::Convex(_)) && f.as_hausdorff(DEFAULT_MEASURE_NODES).is_ok()
}

#[derive(Serialize)]
struct AppliedDto {
    method: &'static str,
    terms: usize,
    power_bound: Real,
    bound: Real,
    matrix: MatrixFile,
}

#[derive(Serialize)]
struct ApplyOut {
    command: &'static str,
    function: FunctionFile,
    pass: bool,
    result: AppliedDto,
    checks: Vec<CheckDto>,
    skipped: Vec<String>,
    before: ReportDto,
    after: ReportDto,
}

pub fn cmd_apply(matrix: &Path, function: &Path, g: &Globals) -> Result<Output, CliError> {
    if g.format == Format::Csv {
        return Err(csv_unsupported("apply"));
    }
    let t = read_matrix(matrix)?;
    let (file, f) = read_function(function)?;
    let convex = convex_form(&f)?;
    let hausdorff = is_regular_hausdorff(&f);
    if convex.is_none() && !hausdorff {
        return Err(CliError::input(format!(
            "{}: function is neither a convex series nor a regular Hausdorff function",
            function.display()
        )));
    }
    let applied = apply_function(&f, &t, APPLY_TOL).context("apply")?;
    let cfg = g.analyze_config();
    let (before, after) = rayon::join(|| analyze(&t, &cfg), || analyze(&applied.matrix, &cfg));
    let before = before.context("analyze T")?;
    let after = after.context("analyze h(T)")?;

    let vcfg = g.verify_config(SamplingConfig::default());
    let mut checks = Vec::new();
    let mut skipped = Vec::new();
    if let Some(c) = &convex {
        let sigma = spectral_stolz(&before.spectrum).context("spectral stolz index")?;
        if sigma.is_finite() {
            let r = verify_subordination(&t, c, &vcfg).context("subordination check")?;
            checks.push(CheckDto::new("subordination", &r));
        } else {
            skipped.push("subordination: σ(T) has unimodular points other than 1".to_string());
        }
    }
    if hausdorff {
        let r = verify_improving(&f, &t, &vcfg).context("improving check")?;
        checks.push(CheckDto::new("improving", &r));
    }
    let pass = checks.iter().all(|c| c.pass);
    let method = match applied.method {
        ApplyMethod::Truncated => "truncated_series",
        ApplyMethod::ClosedForm => "closed_form",
        ApplyMethod::AtomSum => "atom_sum",
    };
    let out = ApplyOut {
        command: "apply",
        function: file,
        pass,
        result: AppliedDto {
            method,
            terms: applied.terms,
            power_bound: Real(applied.power_bound),
            bound: Real(applied.bound),
            matrix: MatrixFile::from_matrix(&applied.matrix),
        },
        checks,
        skipped,
        before: ReportDto::new(&before, &cfg),
        after: ReportDto::new(&after, &cfg),
    };
    json(&out, code(pass))
}

#[derive(Serialize)]
struct SamplingDto {
    circles: usize,
    circle_radii: String,
    points_per_circle: usize,
    interior: usize,
    samples: usize,
    max_radius: Real,
}

#[derive(Serialize)]
struct ImproveOut {
    command: &'static str,
    function: FunctionFile,
    family: Option<&'static str>,
    gamma_hat: Real,
    argmax: Complex,
    sampling: SamplingDto,
    zeros_skipped: Vec<Complex>,
    reference_angle: Option<Real>,
    reference_note: Option<&'static str>,
    tol: Real,
    pass: bool,
}

pub fn cmd_improve_check(function: &Path, sampling: SamplingConfig, g: &Globals) -> Result<Output, CliError> {
    if g.format == Format::Csv {
        return Err(csv_unsupported("improve-check"));
    }
    if sampling.circles == 0 || sampling.angular < 2 {
        return Err(CliError::input("sampling needs at least one circle and two points per circle"));
    }
    let (file, f) = read_function(function)?;
    let est = min_covering_sector(&f, &sampling).context("covering sector")?;
    let named = match &f {
        FunctionSpec::Named(n) => Some(*n),
        _ => None,
    };
    let reference = named.and_then(|n| n.reference_angle());
    let pass = reference.is_none_or(|r| est.gamma <= r + g.tol);
    let out = ImproveOut {
        command: "improve-check",
        function: file,
        family: named.map(|n| n.name()),
        gamma_hat: Real(est.gamma),
        argmax: est.argmax.into(),
        sampling: SamplingDto {
            circles: sampling.circles,
            circle_radii: "1 - 10^-k, k = 1..circles".to_string(),
            points_per_circle: sampling.angular,
            interior: sampling.interior,
            samples: est.samples,
            max_radius: Real(est.max_radius),
        },
        zeros_skipped: est.skipped.iter().copied().map(Into::into).collect(),
        reference_angle: reference.map(Real),
        reference_note: named.and_then(|n| n.reference_note()),
        tol: Real(g.tol),
        pass,
    };
    json(&out, code(pass))
}

/// Parameters of `demo-angle-growth`.
#[derive(Debug, Clone, PartialEq)]
pub struct DemoArgs {
    pub phi: f64,
    pub delta: f64,
    pub n: usize,
    pub eps: Option<f64>,
    pub emit_matrix: Option<std::path::PathBuf>,
}

impl Default for DemoArgs {
    fn default() -> Self {
        DemoArgs { phi: std::f64::consts::PI / 6.0, delta: 0.5, n: 256, eps: None, emit_matrix: None }
    }
}

#[derive(Serialize)]
struct DemoCheck {
    name: &'static str,
    pass: bool,
    value: Real,
    bound: Real,
}

#[derive(Serialize)]
struct DemoOut {
    command: &'static str,
    pass: bool,
    result: AngleGrowthDto,
    refined: AngleGrowthDto,
    checks: Vec<DemoCheck>,
    eps_scenario: Option<EpsScenarioDto>,
}

#[derive(Serialize)]
struct DemoRow {
    t: f64,
    lambda_re: f64,
    lambda_im: f64,
    /// |arg(1 − λ)|
    angle_t: f64,
    /// |arg(1 − λ²)|
    angle_t_squared: f64,
    /// |arg C(λ)|
    angle_cayley: f64,
}

pub fn cmd_demo_angle_growth(args: &DemoArgs, g: &Globals) -> Result<Output, CliError> {
    let r = angle_growth_demo(args.phi, args.delta, args.n).context("angle growth demo")?;
    if let Some(p) = &args.emit_matrix {
        let m = MatrixFile::from_matrix(&angle_growth_matrix(args.phi, args.delta, args.n));
        let text = serde_json::to_string(&m).map_err(|e| CliError::Numerical(format!("serializing matrix: {e}")))?;
        std::fs::write(p, text + "\n").map_err(|e| CliError::input(format!("{}: {e}", p.display())))?;
    }
    if g.format == Format::Csv {
        let grid = angle_growth_grid(args.n);
        let d = angle_growth_matrix(args.phi, args.delta, args.n).diag();
        let one = C64::new(1.0, 0.0);
        let mut rows = Vec::with_capacity(d.len());
        for (t, l) in grid.iter().zip(&d) {
            rows.push(DemoRow {
                t: *t,
                lambda_re: l.re,
                lambda_im: l.im,
                angle_t: (one - l).arg().abs(),
                angle_t_squared: (one - l * l).arg().abs(),
                angle_cayley: cayley(*l).context("cayley transform")?.arg().abs(),
            });
        }
        return csv_rows(rows, EXIT_OK);
    }
    let fine = angle_growth_demo(args.phi, args.delta, 4 * args.n).context("angle growth demo")?;
    let tg = r.gamma_hat.tan();
    let gamma_rel = (tg - r.tan_gamma_formula).abs() / r.tan_gamma_formula;
    let beta_err = (r.beta_hat.tan() - r.tan_beta_formula).abs();
    let refine = (r.beta_hat - fine.beta_hat).abs().max((r.gamma_hat - fine.gamma_hat).abs());
    let mut checks = vec![
        DemoCheck { name: "tan_gamma_vs_formula", pass: gamma_rel < DEMO_FORMULA_TOL, value: Real(gamma_rel), bound: Real(DEMO_FORMULA_TOL) },
        DemoCheck { name: "tan_beta_vs_grid_max", pass: beta_err < DEMO_FORMULA_TOL, value: Real(beta_err), bound: Real(DEMO_FORMULA_TOL) },
        DemoCheck { name: "grid_refinement_4x", pass: refine < DEMO_REFINE_TOL, value: Real(refine), bound: Real(DEMO_REFINE_TOL) },
    ];
    let eps = match args.eps {
        Some(e) => {
            let s = eps_scenario(e, args.n).context("eps scenario")?;
            checks.push(DemoCheck { name: "eps_scenario", pass: s.pass, value: Real(s.tan_beta_hat), bound: Real(s.target) });
            Some(EpsScenarioDto::from(&s))
        }
        None => None,
    };
    let pass = checks.iter().all(|c| c.pass);
    let out = DemoOut {
        command: "demo-angle-growth",
        pass,
        result: (&r).into(),
        refined: (&fine).into(),
        checks,
        eps_scenario: eps,
    };
    json(&out, code(pass))
}

#[derive(Serialize)]
struct VerifyOut {
    command: &'static str,
    suite: String,
    seed: u64,
    pass: bool,
    properties: Vec<PropertyDto>,
}

pub fn cmd_verify(suite: &str, seed: u64, g: &Globals) -> Result<Output, CliError> {
    let names: Vec<&str> = if suite == "all" {
        SUITES.to_vec()
    } else if SUITES.contains(&suite) {
        vec![suite]
    } else {
        return Err(CliError::input(format!("unknown suite {suite:?}; expected one of {}, all", SUITES.join(", "))));
    };
    let results: Vec<_> = names.par_iter().map(|s| run_suite(s, seed)).collect();
    let mut props = Vec::new();
    for r in results {
        props.extend(r.context("verify")?.iter().map(PropertyDto::from));
    }
    let pass = props.iter().all(|p| p.pass);
    match g.format {
        Format::Json => json(&VerifyOut { command: "verify", suite: suite.to_string(), seed, pass, properties: props }, code(pass)),
        Format::Csv => csv_rows(props, code(pass)),
    }
}
