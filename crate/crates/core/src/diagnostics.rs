//! Ritt and sectoriality diagnostics for matrices: power growth, resolvent
//! constants on nested grids, Stolz type, minimal angles, and the checks that
//! a function of T keeps (or improves) these properties.

use crate::error::invalid;
use crate::funclasses::{min_covering_sector, ConvexSeries, FunctionSpec, SamplingConfig, Series};
use crate::linalg::{eigenvalues, inverse_at, operator_norm, CMatrix};
use crate::opcalc::{apply_function, cayley_op, power_bound, wiener_apply};
use crate::prelude::*;
use crate::regions::{cayley, stolz_index, stolz_to_sector_angle};

const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Eigenvalues within this distance of 1 are treated as 1.
const AT_ONE: f64 = 1e-9;
/// Spectral radius slack before a matrix counts as not power bounded.
const RADIUS_SLACK: f64 = 1e-9;
/// Growth allowed between the last two refinement rounds for a "finite" sup.
pub const FINITE_GROWTH: f64 = 0.05;

/// Power growth and the discrete Ritt ratio n‖Tⁿ − Tⁿ⁺¹‖.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerDiagnostics {
    pub n: usize,
    pub power_bound: f64,
    pub power_argmax: usize,
    pub ritt_ratio: f64,
    pub ritt_argmax: usize,
    /// ratio over n ≤ N exceeds 1.5× the ratio over n ≤ N/2
    pub growth_flag: bool,
}

pub fn power_diagnostics(t: &CMatrix, n: usize) -> Result<PowerDiagnostics> {
    if n < 1 {
        return Err(invalid("power_diagnostics needs N ≥ 1"));
    }
    let mut p = t.clone();
    let mut m = 1.0f64;
    let mut m_at = 0;
    let mut ratio = 0.0f64;
    let mut ratio_at = 1;
    let mut half_ratio = 0.0f64;
    for k in 1..=n {
        let next = p.matmul(t);
        if !next.is_finite() {
            return Err(Error::Overflow { power: k + 1 });
        }
        let pn = operator_norm(&p, 1e-10);
        if pn > m {
            m = pn;
            m_at = k;
        }
        let d = k as f64 * operator_norm(&p.sub(&next), 1e-10);
        if d > ratio {
            ratio = d;
            ratio_at = k;
        }
        if k == (n / 2).max(1) {
            half_ratio = ratio;
        }
        p = next;
    }
    let growth_flag = n >= 2 && ratio > 1.5 * half_ratio && ratio > 1e-12;
    Ok(PowerDiagnostics { n, power_bound: m, power_argmax: m_at, ritt_ratio: ratio, ritt_argmax: ratio_at, growth_flag })
}

/// Fast resolvent norms: exact from eigenvalues for normal T, LU otherwise.
pub struct ResolventNorm {
    normal: Option<Vec<C64>>,
    neg: CMatrix,
}

impl ResolventNorm {
    pub fn new(t: &CMatrix) -> Result<Self> {
        let normal = if t.is_normal(1e-10) { Some(eigenvalues(t)?) } else { None };
        Ok(Self { normal, neg: t.scale(-ONE) })
    }

    pub fn is_normal(&self) -> bool {
        self.normal.is_some()
    }

    /// ‖(zI − T)⁻¹‖, +∞ on the spectrum.
    pub fn at(&self, z: C64) -> f64 {
        match &self.normal {
            Some(ev) => {
                let d = ev.iter().map(|l| (z - l).norm()).fold(f64::INFINITY, f64::min);
                if d == 0.0 {
                    f64::INFINITY
                } else {
                    1.0 / d
                }
            }
            None => match inverse_at(&self.neg.shift(z), z) {
                Ok(r) => operator_norm(&r, 1e-10),
                Err(_) => f64::INFINITY,
            },
        }
    }
}

/// Sampling grids for resolvent sups.
#[derive(Debug, Clone, PartialEq)]
pub struct GridConfig {
    /// circle radii, all > 1
    pub radii: Vec<f64>,
    /// angular nodes per half circle at the coarsest round
    pub angular_nodes: usize,
    /// refinement rounds (≥ 2 to judge finiteness)
    pub rounds: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { radii: (1..=6).map(|k| 1.0 + 10f64.powi(-k)).collect(), angular_nodes: 256, rounds: 3 }
    }
}

impl GridConfig {
    pub fn validate(&self) -> Result<()> {
        if self.radii.is_empty() || self.radii.iter().any(|r| !(*r > 1.0 && r.is_finite())) {
            return Err(invalid("radii must be finite and greater than 1"));
        }
        if self.angular_nodes < 4 {
            return Err(invalid("need at least 4 angular nodes"));
        }
        if self.rounds < 1 {
            return Err(invalid("need at least one round"));
        }
        Ok(())
    }

    /// Radii for round j: the base list plus 2j extra radii closer to 1.
    fn radii_for(&self, j: usize) -> Vec<f64> {
        let mut r = self.radii.clone();
        let closest = self.radii.iter().copied().fold(f64::INFINITY, f64::min) - 1.0;
        for i in 1..=2 * j {
            r.push(1.0 + closest * 10f64.powi(-(i as i32)));
        }
        r
    }
}

/// Angles ±π(j/m)² and ±πj/m, j = 0..=m; nested under doubling m.
fn circle_angles(m: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(4 * m + 2);
    for j in 0..=m {
        let u = j as f64 / m as f64;
        out.push(PI * u * u);
        out.push(-PI * u * u);
        out.push(PI * u);
        out.push(-PI * u);
    }
    out
}

/// One resolvent-sup estimate and where it was attained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupSample {
    pub value: f64,
    pub at: C64,
}

/// Nested-grid estimates of a sup; `finite` applies the 5% growth rule.
#[derive(Debug, Clone, PartialEq)]
pub struct RefinedSup {
    pub rounds: Vec<SupSample>,
    pub finite: bool,
}

impl RefinedSup {
    pub fn value(&self) -> f64 {
        self.rounds.last().map(|s| s.value).unwrap_or(0.0)
    }

    fn from_rounds(rounds: Vec<SupSample>) -> Self {
        let finite = match rounds.as_slice() {
            [.., a, b] => b.value.is_finite() && b.value <= a.value * (1.0 + FINITE_GROWTH),
            [b] => b.value.is_finite(),
            [] => false,
        };
        Self { rounds, finite }
    }
}

fn spectral_radius_check(t: &CMatrix) -> Result<Vec<C64>> {
    let ev = eigenvalues(t)?;
    let rho = ev.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if rho > 1.0 + RADIUS_SLACK {
        return Err(Error::NotPowerBounded { spectral_radius: rho });
    }
    Ok(ev)
}

/// max over z on the circles |z| ∈ radii of |z − 1|·‖(z − T)⁻¹‖.
pub fn ritt_constant_estimate(t: &CMatrix, radii: &[f64], angular_nodes: usize) -> Result<f64> {
    let cfg = GridConfig { radii: radii.to_vec(), angular_nodes, rounds: 1 };
    Ok(ritt_constant_refined(t, &cfg)?.value())
}

/// Samples (z, |z − 1|·‖(z − T)⁻¹‖) on the coarsest grid.
pub fn ritt_samples(t: &CMatrix, cfg: &GridConfig) -> Result<Vec<(C64, f64)>> {
    cfg.validate()?;
    spectral_radius_check(t)?;
    let rn = ResolventNorm::new(t)?;
    let mut out = Vec::new();
    for r in &cfg.radii {
        for phi in circle_angles(cfg.angular_nodes) {
            let z = C64::from_polar(*r, phi);
            out.push((z, (z - ONE).norm() * rn.at(z)));
        }
    }
    Ok(out)
}

/// Ritt constant on nested grids, refining around the argmax each round.
pub fn ritt_constant_refined(t: &CMatrix, cfg: &GridConfig) -> Result<RefinedSup> {
    cfg.validate()?;
    spectral_radius_check(t)?;
    let rn = ResolventNorm::new(t)?;
    let eval = |z: C64| (z - ONE).norm() * rn.at(z);
    let mut rounds = Vec::with_capacity(cfg.rounds);
    let mut best = SupSample { value: 0.0, at: C64::new(cfg.radii[0], 0.0) };
    for j in 0..cfg.rounds {
        let m = cfg.angular_nodes << j;
        let radii = cfg.radii_for(j);
        for r in &radii {
            for phi in circle_angles(m) {
                let z = C64::from_polar(*r, phi);
                let v = eval(z);
                if v > best.value {
                    best = SupSample { value: v, at: z };
                }
            }
        }
        // zoom around the current argmax
        let (r0, p0) = (best.at.norm(), best.at.arg());
        let dp = 4.0 * PI / m as f64;
        for i in 0..=64 {
            let phi = p0 + dp * (i as f64 / 32.0 - 1.0);
            for r in radii.iter().chain(core::iter::once(&r0)) {
                let z = C64::from_polar(*r, phi);
                let v = eval(z);
                if v > best.value {
                    best = SupSample { value: v, at: z };
                }
            }
        }
        rounds.push(best);
    }
    Ok(RefinedSup::from_rounds(rounds))
}

/// Stolz type estimate with its spectral and resolvent parts.
#[derive(Debug, Clone, PartialEq)]
pub struct StolzEstimate {
    pub sigma: f64,
    pub spectral_part: f64,
    /// least δ in the list whose resolvent sup stayed finite
    pub resolvent_part: Option<f64>,
    /// (δ, refined sup of ‖(1 − z)(z − T)⁻¹‖) for each δ tried
    pub sups: Vec<(f64, RefinedSup)>,
}

/// Default δ list.
pub fn default_deltas() -> Vec<f64> {
    vec![1.0, 1.01, 1.05, 1.1, 1.25, 1.5, 2.0, 3.0, 5.0, 10.0, 100.0]
}

/// Largest Stolz index over the spectrum; +∞ for unimodular points other than 1.
pub fn spectral_stolz(ev: &[C64]) -> Result<f64> {
    let mut worst = 1.0f64;
    for &l in ev {
        if (l - ONE).norm() <= AT_ONE {
            continue;
        }
        if l.norm() > 1.0 + RADIUS_SLACK {
            return Err(Error::Domain(format!("eigenvalue {l} lies outside the closed unit disc")));
        }
        let s = if l.norm() >= 1.0 { f64::INFINITY } else { stolz_index(l)? };
        worst = worst.max(s);
    }
    Ok(worst)
}

pub fn stolz_type_estimate(t: &CMatrix, deltas: &[f64], grid: &GridConfig) -> Result<StolzEstimate> {
    grid.validate()?;
    let ev = eigenvalues(t)?;
    let spectral = spectral_stolz(&ev)?;
    let rn = ResolventNorm::new(t)?;
    let eval = |z: C64| (ONE - z).norm() * rn.at(z);
    let mut ds: Vec<f64> = deltas.iter().copied().filter(|d| *d >= 1.0 && d.is_finite()).collect();
    ds.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut sups = Vec::new();
    let mut found = None;
    for d in ds {
        if d < spectral {
            continue;
        }
        let mut rounds = Vec::with_capacity(grid.rounds);
        let mut best = SupSample { value: 0.0, at: ONE };
        for j in 0..grid.rounds {
            let m = grid.angular_nodes << j;
            let mut visit = |z: C64| {
                let v = eval(z);
                if v > best.value || v.is_nan() {
                    best = SupSample { value: if v.is_nan() { f64::INFINITY } else { v }, at: z };
                }
            };
            if d == 1.0 {
                // S₁ = {1}: small circles around 1
                for k in 1..=(3 + 2 * j) {
                    let r = 10f64.powi(-(k as i32));
                    for phi in circle_angles(m) {
                        visit(ONE + C64::from_polar(r, phi));
                    }
                }
            } else {
                let amax = (1.0 / d).acos();
                for i in 0..=m {
                    let a = amax * (PI * i as f64 / m as f64).cos();
                    let rho = 2.0 * d * (d * a.cos() - 1.0) / (d * d - 1.0);
                    if rho > 0.0 {
                        visit(ONE - C64::from_polar(rho, a));
                    }
                }
            }
            for r in grid.radii_for(j) {
                for phi in circle_angles(m) {
                    visit(C64::from_polar(r, phi));
                }
            }
            rounds.push(best);
        }
        let sup = RefinedSup::from_rounds(rounds);
        let ok = sup.finite;
        sups.push((d, sup));
        if ok {
            found = Some(d);
            break;
        }
    }
    let sigma = match found {
        Some(d) => spectral.max(d),
        None => f64::INFINITY,
    };
    Ok(StolzEstimate { sigma, spectral_part: spectral, resolvent_part: found, sups })
}

/// Minimal angle and Cayley angle estimates.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleEstimates {
    /// max |arg(1 − λ)| over σ(T)∖{1}, possibly raised by resolvent sampling
    pub alpha: f64,
    /// max |arg C(λ)| over σ(T)∖{1}; None when −1 ∈ σ(T)
    pub omega: Option<f64>,
    pub alpha_spectral: f64,
    pub omega_spectral: Option<f64>,
    /// resolvent refinement was run (non-normal T)
    pub refined: bool,
}

/// Resolvent sup threshold factor used by the non-normal refinement.
pub const ANGLE_THRESHOLD: f64 = 100.0;

/// Smallest β ∈ [lo, π/2] with sup_t t‖(te^{±iβ} − A)⁻¹‖ ≤ ANGLE_THRESHOLD·(value at π/2).
fn resolvent_angle(a: &CMatrix, lo: f64) -> Result<f64> {
    let rn = ResolventNorm::new(a)?;
    let sup_at = |beta: f64| -> f64 {
        let mut s = 0.0f64;
        for k in 0..=240 {
            let t = 10f64.powf(-6.0 + 8.0 * k as f64 / 240.0);
            for sign in [1.0, -1.0] {
                s = s.max(t * rn.at(C64::from_polar(t, sign * beta)));
            }
        }
        s
    };
    let base = sup_at(PI / 2.0);
    if !base.is_finite() {
        return Ok(PI / 2.0);
    }
    let limit = ANGLE_THRESHOLD * base.max(1.0);
    if sup_at(lo) <= limit {
        return Ok(lo);
    }
    let (mut l, mut h) = (lo, PI / 2.0);
    for _ in 0..40 {
        let mid = 0.5 * (l + h);
        if sup_at(mid) <= limit {
            h = mid;
        } else {
            l = mid;
        }
    }
    Ok(h)
}

pub fn angle_estimates(t: &CMatrix) -> Result<AngleEstimates> {
    let ev = eigenvalues(t)?;
    let mut alpha = 0.0f64;
    let mut omega = Some(0.0f64);
    for &l in &ev {
        if (ONE - l).norm() <= AT_ONE {
            continue;
        }
        alpha = alpha.max((ONE - l).arg().abs());
        if (l + ONE).norm() <= AT_ONE {
            omega = None;
        } else if let Some(w) = omega.as_mut() {
            *w = w.max(cayley(l)?.arg().abs());
        }
    }
    let mut out = AngleEstimates { alpha, omega, alpha_spectral: alpha, omega_spectral: omega, refined: false };
    if !t.is_normal(1e-10) {
        out.refined = true;
        let a = t.scale(-ONE).shift(ONE);
        if !ev.iter().any(|l| (ONE - l).norm() <= AT_ONE) {
            out.alpha = out.alpha.max(resolvent_angle(&a, alpha)?);
        }
        if let Some(w) = omega {
            if !ev.iter().any(|l| (ONE - l).norm() <= AT_ONE) {
                let c = cayley_op(t)?;
                out.omega = Some(w.max(resolvent_angle(&c, w)?));
            }
        }
    }
    Ok(out)
}

/// Spectral contact flags.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpectralFlags {
    pub unit_circle_contact: bool,
    pub one_in_spectrum: bool,
    pub minus_one_in_spectrum: bool,
}

pub fn spectral_flags(ev: &[C64]) -> SpectralFlags {
    SpectralFlags {
        unit_circle_contact: ev.iter().any(|l| (l.norm() - 1.0).abs() <= AT_ONE),
        one_in_spectrum: ev.iter().any(|l| (l - ONE).norm() <= AT_ONE),
        minus_one_in_spectrum: ev.iter().any(|l| (l + ONE).norm() <= AT_ONE),
    }
}

/// Settings for [`analyze`].
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyzeConfig {
    pub power_terms: usize,
    pub grid: GridConfig,
    pub deltas: Vec<f64>,
    pub tol: f64,
}

impl Default for AnalyzeConfig {
    fn default() -> Self {
        Self { power_terms: 256, grid: GridConfig::default(), deltas: default_deltas(), tol: 1e-6 }
    }
}

/// Full diagnostic report. Estimates that could not be formed are None with a note.
#[derive(Debug, Clone, PartialEq)]
pub struct RittReport {
    pub dim: usize,
    pub spectrum: Vec<C64>,
    pub spectral_radius: f64,
    pub power: PowerDiagnostics,
    pub ritt_constant: Option<RefinedSup>,
    pub stolz: Option<StolzEstimate>,
    pub angles: Option<AngleEstimates>,
    pub flags: SpectralFlags,
    /// α̂ ≤ arccos(1/σ̂) + tol
    pub consistent: Option<bool>,
    pub notes: Vec<String>,
}

pub fn analyze(t: &CMatrix, cfg: &AnalyzeConfig) -> Result<RittReport> {
    cfg.grid.validate()?;
    let ev = eigenvalues(t)?;
    let rho = ev.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let power = power_diagnostics(t, cfg.power_terms).map_err(|e| match e {
        Error::Overflow { power } => Error::Overflow { power },
        e => e,
    })?;
    let mut notes = Vec::new();
    let ritt_constant = match ritt_constant_refined(t, &cfg.grid) {
        Ok(r) => {
            if !r.finite {
                notes.push("ritt constant grows under refinement".to_string());
            }
            Some(r)
        }
        Err(e) => {
            notes.push(format!("ritt constant: {e}"));
            None
        }
    };
    let stolz = match stolz_type_estimate(t, &cfg.deltas, &cfg.grid) {
        Ok(s) => Some(s),
        Err(e) => {
            notes.push(format!("stolz type: {e}"));
            None
        }
    };
    let angles = match angle_estimates(t) {
        Ok(a) => Some(a),
        Err(e) => {
            notes.push(format!("angles: {e}"));
            None
        }
    };
    if power.growth_flag {
        notes.push("n‖Tⁿ − Tⁿ⁺¹‖ still growing at N: likely not Ritt".to_string());
    }
    let consistent = match (&stolz, &angles) {
        (Some(s), Some(a)) if s.sigma.is_finite() => Some(a.alpha <= stolz_to_sector_angle(s.sigma)? + cfg.tol),
        _ => None,
    };
    Ok(RittReport {
        dim: t.dim(),
        flags: spectral_flags(&ev),
        spectrum: ev,
        spectral_radius: rho,
        power,
        ritt_constant,
        stolz,
        angles,
        consistent,
        notes,
    })
}

/// One pass/fail clause with the compared numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct Clause {
    pub name: &'static str,
    pub pass: bool,
    pub value: f64,
    pub bound: f64,
    pub detail: String,
}

/// Outcome of a subordination or improving check.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub clauses: Vec<Clause>,
    /// Set by the improving check: γ̂ and the family's reference angle.
    pub gamma_hat: Option<f64>,
    pub reference_angle: Option<f64>,
    pub result: CMatrix,
    pub bound: f64,
}

impl VerifyReport {
    pub fn pass(&self) -> bool {
        self.clauses.iter().all(|c| c.pass)
    }
}

/// Settings for the verification checks.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub tol: f64,
    pub grid: GridConfig,
    pub sampling: SamplingConfig,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { tol: 1e-6, grid: GridConfig::default(), sampling: SamplingConfig::default() }
    }
}

fn ritt_clause(s: &CMatrix, grid: &GridConfig) -> Clause {
    match ritt_constant_refined(s, grid) {
        Ok(r) => Clause {
            name: "ritt_constant_finite",
            pass: r.finite,
            value: r.value(),
            bound: r.rounds.iter().rev().nth(1).map(|x| x.value * (1.0 + FINITE_GROWTH)).unwrap_or(f64::INFINITY),
            detail: format!("rounds {:?}", r.rounds.iter().map(|x| x.value).collect::<Vec<_>>()),
        },
        Err(e) => Clause { name: "ritt_constant_finite", pass: false, value: f64::NAN, bound: f64::NAN, detail: e.to_string() },
    }
}

/// S = h(T) keeps the spectral Stolz type and has angle at most ω̂(T).
pub fn verify_subordination(t: &CMatrix, c: &ConvexSeries, cfg: &VerifyConfig) -> Result<VerifyReport> {
    let applied = wiener_apply(&Series::Convex(c.clone()), t, 1e-12)?;
    let s = applied.matrix;
    let ev_t = eigenvalues(t)?;
    let sigma_t = spectral_stolz(&ev_t)?;
    let ev_s = eigenvalues(&s)?;
    let sigma_s = spectral_stolz(&ev_s)?;
    let mut clauses = Vec::with_capacity(3);
    clauses.push(Clause {
        name: "stolz_spectral",
        pass: sigma_s <= sigma_t * (1.0 + 1e-9) + cfg.tol * 1e-3,
        value: sigma_s,
        bound: sigma_t,
        detail: "max stolz index over σ(h(T)) vs over σ(T)".to_string(),
    });
    let at = angle_estimates(t)?;
    let as_ = angle_estimates(&s)?;
    match at.omega {
        Some(w) => clauses.push(Clause {
            name: "angle_vs_cayley",
            pass: as_.alpha <= w + cfg.tol,
            value: as_.alpha,
            bound: w,
            detail: "α̂(h(T)) vs ω̂(T)".to_string(),
        }),
        None => clauses.push(Clause {
            name: "angle_vs_cayley",
            pass: false,
            value: as_.alpha,
            bound: f64::NAN,
            detail: "−1 ∈ σ(T): Cayley angle undefined".to_string(),
        }),
    }
    clauses.push(ritt_clause(&s, &cfg.grid));
    Ok(VerifyReport { clauses, gamma_hat: None, reference_angle: None, result: s, bound: applied.bound })
}

/// h(T) for a regular Hausdorff h has angle at most the sampled covering angle γ̂.
pub fn verify_improving(f: &FunctionSpec, t: &CMatrix, cfg: &VerifyConfig) -> Result<VerifyReport> {
    f.as_hausdorff(crate::funclasses::DEFAULT_MEASURE_NODES).map_err(|e| match e {
        Error::Unsupported(m) => Error::Inconsistent(format!("not a regular Hausdorff function: {m}")),
        e => e,
    })?;
    power_bound(t, 256)?;
    let est = min_covering_sector(f, &cfg.sampling)?;
    let applied = apply_function(f, t, 1e-10)?;
    let s = applied.matrix;
    let a = angle_estimates(&s)?;
    let reference = match f {
        FunctionSpec::Named(n) => n.reference_angle(),
        _ => None,
    };
    let clauses = vec![
        Clause {
            name: "angle_vs_covering_sector",
            pass: a.alpha <= est.gamma + cfg.tol,
            value: a.alpha,
            bound: est.gamma,
            detail: format!("α̂(h(T)) vs γ̂ from {} samples", est.samples),
        },
        ritt_clause(&s, &cfg.grid),
    ];
    Ok(VerifyReport { clauses, gamma_hat: Some(est.gamma), reference_angle: reference, result: s, bound: applied.bound })
}

/// Diagonal surrogate of the multiplication operator y ↦ (1 − 2tδ cos φ e^{iφ})y.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleGrowthResult {
    pub phi: f64,
    pub delta: f64,
    pub n_grid: usize,
    pub alpha_hat: f64,
    /// angle of T²
    pub beta_hat: f64,
    /// sectoriality angle of C(T)
    pub gamma_hat: f64,
    pub tan_gamma_formula: f64,
    /// tan φ·max over the grid of v_φ(δtᵢ)
    pub tan_beta_formula: f64,
    /// tan φ·sup over t ∈ (0,1) of v_φ(δt)
    pub tan_beta_sup: f64,
}

/// Grid tᵢ = (i/n)², i = 1..n: includes t = 1 and clusters at 0 where v_φ peaks.
pub fn angle_growth_grid(n: usize) -> Vec<f64> {
    (1..=n).map(|i| (i as f64 / n as f64).powi(2)).collect()
}

/// v_φ(s) = |1 − 2s cos²φ|/(1 − s cos 2φ).
pub fn v_phi(phi: f64, s: f64) -> f64 {
    (1.0 - 2.0 * s * phi.cos().powi(2)).abs() / (1.0 - s * (2.0 * phi).cos())
}

pub fn angle_growth_matrix(phi: f64, delta: f64, n: usize) -> CMatrix {
    let e = C64::from_polar(1.0, phi);
    let d: Vec<C64> = angle_growth_grid(n).iter().map(|t| ONE - e * (2.0 * t * delta * phi.cos())).collect();
    CMatrix::from_diag(&d)
}

pub fn angle_growth_demo(phi: f64, delta: f64, n_grid: usize) -> Result<AngleGrowthResult> {
    if !(phi > 0.0 && phi < PI / 2.0) {
        return Err(invalid(format!("φ = {phi} outside (0, π/2)")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(invalid(format!("δ = {delta} outside (0, 1)")));
    }
    if n_grid < 16 {
        return Err(invalid("grid needs at least 16 points"));
    }
    let t = angle_growth_matrix(phi, delta, n_grid);
    let d = t.diag();
    let mut alpha = 0.0f64;
    let mut beta = 0.0f64;
    let mut gamma = 0.0f64;
    for l in &d {
        alpha = alpha.max((ONE - l).arg().abs());
        beta = beta.max((ONE - l * l).arg().abs());
        gamma = gamma.max(cayley(*l)?.arg().abs());
    }
    let grid = angle_growth_grid(n_grid);
    let vmax = grid.iter().map(|t| v_phi(phi, delta * t)).fold(0.0, f64::max);
    // v_φ is monotone on each side of its zero s = 1/(2cos²φ), so the sup over (0, δ]
    // is the larger endpoint value
    let vsup = v_phi(phi, 0.0).max(v_phi(phi, delta));
    Ok(AngleGrowthResult {
        phi,
        delta,
        n_grid,
        alpha_hat: alpha,
        beta_hat: beta,
        gamma_hat: gamma,
        tan_gamma_formula: phi.tan() / (1.0 - delta),
        tan_beta_formula: phi.tan() * vmax,
        tan_beta_sup: phi.tan() * vsup,
    })
}

/// The scenario showing tan β̂ ≥ tan φ/ε with φ = ½·arccos(δ^{ε/2}).
#[derive(Debug, Clone, PartialEq)]
pub struct EpsScenario {
    pub eps: f64,
    pub delta: f64,
    pub phi: f64,
    pub tan_beta_hat: f64,
    pub tan_gamma_hat: f64,
    pub target: f64,
    pub pass: bool,
    pub result: AngleGrowthResult,
}

/// Scans δ = 1 − 0.1·2^{−k} until tan β̂/tan γ̂ > 1 − ε and 1 − δ < (1 − ε)ε, then checks tan β̂ ≥ tan φ/ε.
pub fn eps_scenario(eps: f64, n_grid: usize) -> Result<EpsScenario> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(invalid(format!("ε = {eps} outside (0, 1)")));
    }
    for k in 0..40 {
        let delta = 1.0 - 0.1 * 2f64.powi(-k);
        let phi = 0.5 * delta.powf(eps / 2.0).acos();
        let r = angle_growth_demo(phi, delta, n_grid)?;
        let tb = r.beta_hat.tan();
        let tg = r.gamma_hat.tan();
        if tb / tg > 1.0 - eps && 1.0 - delta < (1.0 - eps) * eps {
            let target = phi.tan() / eps;
            return Ok(EpsScenario {
                eps,
                delta,
                phi,
                tan_beta_hat: tb,
                tan_gamma_hat: tg,
                target,
                pass: tb >= target,
                result: r,
            });
        }
    }
    Err(Error::NoConvergence { what: "δ scan for the ε scenario".into(), iterations: 40 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funclasses::NamedFamily;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn diag(v: &[C64]) -> CMatrix {
        CMatrix::from_diag(v)
    }

    #[test]
    fn power_examples() {
        let p = power_diagnostics(&CMatrix::identity(2), 50).unwrap();
        assert_eq!(p.power_bound, 1.0);
        assert_eq!(p.ritt_ratio, 0.0);
        let m = power_diagnostics(&diag(&[c(-1.0, 0.0)]), 64).unwrap();
        assert!((m.ritt_ratio - 128.0).abs() < 1e-9);
        assert!(m.growth_flag);
        let h = power_diagnostics(&diag(&[c(0.5, 0.0)]), 40).unwrap();
        assert!((h.ritt_ratio - 0.25).abs() < 1e-15);
        assert!(h.ritt_argmax == 1 || h.ritt_argmax == 2);
        assert!(!h.growth_flag);
    }

    #[test]
    fn ritt_constant_examples() {
        let g = GridConfig::default();
        let one = ritt_constant_refined(&diag(&[ONE]), &g).unwrap();
        assert!((one.value() - 1.0).abs() < 1e-12);
        let zero = ritt_constant_refined(&CMatrix::zeros(2), &g).unwrap();
        // sup |z−1|/|z| over |z| = 1 + 10⁻ᵏ is (2 + 10⁻ᵏ)/(1 + 10⁻ᵏ)
        assert!(zero.value() < 2.0 && zero.value() > 2.0 - 1e-6);
        assert!(zero.finite);
        let bad = ritt_constant_refined(&diag(&[c(-1.0, 0.0)]), &g).unwrap();
        assert!(!bad.finite);
        assert!(matches!(ritt_constant_estimate(&diag(&[c(1.1, 0.0)]), &g.radii, 64), Err(Error::NotPowerBounded { .. })));
    }

    #[test]
    fn ritt_constant_monotone_under_refinement() {
        let t = diag(&[c(0.5, 0.3), c(0.9, -0.05), c(-0.2, 0.1)]);
        let r = ritt_constant_refined(&t, &GridConfig::default()).unwrap();
        for w in r.rounds.windows(2) {
            assert!(w[1].value >= w[0].value);
        }
        let sigma = spectral_stolz(&t.diag()).unwrap();
        assert!(sigma <= r.value() + 1e-6);
    }

    #[test]
    fn stolz_examples() {
        let g = GridConfig::default();
        let s = stolz_type_estimate(&diag(&[ONE]), &default_deltas(), &g).unwrap();
        assert_eq!(s.sigma, 1.0);
        let z = stolz_type_estimate(&diag(&[c(0.0, 0.0)]), &default_deltas(), &g).unwrap();
        assert_eq!(z.spectral_part, 1.0);
        assert!(z.sigma < 1.1);
        let l = ONE - C64::from_polar(0.3, PI / 6.0);
        let w = stolz_type_estimate(&diag(&[l]), &default_deltas(), &g).unwrap();
        assert!((w.spectral_part - stolz_index(l).unwrap()).abs() < 1e-15);
        assert!(w.sigma >= w.spectral_part);
    }

    #[test]
    fn angle_examples() {
        let l = ONE - C64::from_polar(0.5, PI / 4.0);
        let a = angle_estimates(&diag(&[l])).unwrap();
        assert!((a.alpha - PI / 4.0).abs() < 1e-15);
        let e = C64::from_polar(0.5, PI / 4.0);
        let want = (e / (2.0 - e)).arg().abs();
        assert!((a.omega.unwrap() - want).abs() < 1e-14);
        let b = angle_estimates(&diag(&[c(0.2, 0.0), c(0.5, 0.0)])).unwrap();
        assert_eq!((b.alpha, b.omega), (0.0, Some(0.0)));
        assert!(angle_estimates(&diag(&[c(-1.0, 0.0)])).unwrap().omega.is_none());
    }

    #[test]
    fn non_normal_refinement_not_below_spectrum() {
        let t = CMatrix::from_rows(&[vec![c(0.5, 0.1), c(0.3, 0.0)], vec![c(0.0, 0.0), c(0.6, -0.2)]]).unwrap();
        let a = angle_estimates(&t).unwrap();
        assert!(a.refined);
        assert!(a.alpha >= a.alpha_spectral);
        assert!(a.alpha < PI / 2.0);
    }

    #[test]
    fn subordination_identity_series() {
        let t = diag(&[c(0.5, 0.2), c(0.8, -0.1), c(0.1, 0.0)]);
        let r = verify_subordination(&t, &ConvexSeries::monomial(1), &VerifyConfig::default()).unwrap();
        assert!(r.pass(), "{:?}", r.clauses);
        assert!(r.result.sub(&t).max_abs() < 1e-15);
    }

    #[test]
    fn squaring_increases_angle_within_cayley_bound() {
        let t = angle_growth_matrix(0.2, 0.99, 64);
        let r = verify_subordination(&t, &ConvexSeries::monomial(2), &VerifyConfig::default()).unwrap();
        assert!(r.clauses[1].pass);
        let a = angle_estimates(&t).unwrap().alpha;
        assert!(r.clauses[1].value > a);
    }

    #[test]
    fn improving_on_cyclic_shift() {
        let p = CMatrix::cyclic_shift(8);
        let cfg = VerifyConfig { sampling: SamplingConfig { circles: 6, angular: 2000, interior: 500 }, ..Default::default() };
        for (f, gamma) in [
            (NamedFamily::HAlpha(0.5), PI / 4.0),
            (NamedFamily::HEps(0.5), PI / 4.0),
            (NamedFamily::HOne, PI / 3.0),
        ] {
            let r = verify_improving(&FunctionSpec::Named(f), &p, &cfg).unwrap();
            assert!(r.pass(), "{f:?} {:?}", r.clauses);
            assert!(r.clauses[0].value <= gamma + 1e-6);
        }
        let not_h = FunctionSpec::Convex(ConvexSeries::monomial(2));
        assert!(verify_improving(&not_h, &p, &cfg).is_err());
    }

    #[test]
    fn angle_growth_examples() {
        let r = angle_growth_demo(PI / 6.0, 0.5, 256).unwrap();
        assert!((r.alpha_hat - PI / 6.0).abs() < 1e-12);
        assert!((r.gamma_hat.tan() - 2.0 * (PI / 6.0).tan()).abs() < 1e-10);
        assert!((r.beta_hat.tan() - r.tan_beta_formula).abs() < 1e-10);
        let s = angle_growth_demo(0.4, 1e-6, 64).unwrap();
        assert!((s.gamma_hat - 0.4).abs() < 1e-5 && (s.beta_hat - 0.4).abs() < 1e-5);
        assert!(angle_growth_demo(2.0, 0.5, 64).is_err());
        let e = eps_scenario(0.2, 256).unwrap();
        assert!(e.pass, "{e:?}");
    }
}
