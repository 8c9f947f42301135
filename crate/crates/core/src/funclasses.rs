//! Scalar function classes: convex power series, Hausdorff functions,
//! complete Bernstein functions (Stieltjes triples), Nevanlinna-Pick
//! representations and the named example families.
//!
//! Every measure is a finite atom list. Densities are discretized by
//! Gauss-Legendre quadrature after a substitution that makes the integrand
//! smooth at the endpoints.

use crate::error::invalid;
use crate::prelude::*;
use crate::quadrature::{gauss_legendre, gauss_legendre_on, halton};
use crate::regions::cayley;
use crate::special::{gamma, zeta};

/// Default number of quadrature nodes for measure discretization.
pub const DEFAULT_MEASURE_NODES: usize = 200;

const ONE: C64 = C64 { re: 1.0, im: 0.0 };
const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Support {
    /// [0, 1)
    UnitInterval,
    /// (0, ∞)
    HalfLine,
}

impl Support {
    fn admits(&self, x: f64) -> bool {
        match self {
            Support::UnitInterval => (0.0..1.0).contains(&x),
            Support::HalfLine => x > 0.0 && x.is_finite(),
        }
    }
}

/// Finite positive measure given by atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
    pub support: Support,
}

impl DiscreteMeasure {
    pub fn new(points: Vec<f64>, weights: Vec<f64>, support: Support) -> Result<Self> {
        if points.len() != weights.len() {
            return Err(invalid("measure points and weights differ in length"));
        }
        if let Some(i) = weights.iter().position(|w| !(*w >= 0.0 && w.is_finite())) {
            return Err(invalid(format!("measure weight {i} is negative or non-finite")));
        }
        if let Some(i) = points.iter().position(|p| !support.admits(*p)) {
            return Err(invalid(format!("measure point {} = {} outside {:?}", i, points[i], support)));
        }
        Ok(Self { points, weights, support })
    }

    pub fn empty(support: Support) -> Self {
        Self { points: vec![], weights: vec![], support }
    }

    pub fn atoms(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.points.iter().copied().zip(self.weights.iter().copied())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Regular Hausdorff function c₀ + Σ wᵢλ/(1 − tᵢλ).
#[derive(Debug, Clone, PartialEq)]
pub struct HausdorffSpec {
    pub c0: f64,
    pub nu: DiscreteMeasure,
}

impl HausdorffSpec {
    pub fn new(c0: f64, nu: DiscreteMeasure) -> Result<Self> {
        if !(c0 >= 0.0) {
            return Err(invalid("c0 must be nonnegative"));
        }
        if nu.support != Support::UnitInterval {
            return Err(invalid("Hausdorff measure must live on [0,1)"));
        }
        let h = Self { c0, nu };
        let d = (h.regularity() - 1.0).abs();
        if d > 1e-10 {
            return Err(Error::Inconsistent(format!(
                "regularity c0 + Σ w/(1−t) = 1 violated by {d:e}"
            )));
        }
        Ok(h)
    }

    /// c₀ + Σ wᵢ/(1 − tᵢ), equal to h(1).
    pub fn regularity(&self) -> f64 {
        self.c0 + self.nu.atoms().map(|(t, w)| w / (1.0 - t)).sum::<f64>()
    }
}

/// Complete Bernstein function a + bλ + Σ wᵢλ/(λ + sᵢ).
#[derive(Debug, Clone, PartialEq)]
pub struct StieltjesTriple {
    pub a: f64,
    pub b: f64,
    pub mu: DiscreteMeasure,
}

impl StieltjesTriple {
    pub fn new(a: f64, b: f64, mu: DiscreteMeasure) -> Result<Self> {
        if !(a >= 0.0 && b >= 0.0) {
            return Err(invalid("Stieltjes a, b must be nonnegative"));
        }
        if mu.support != Support::HalfLine {
            return Err(invalid("Stieltjes measure must live on (0,∞)"));
        }
        Ok(Self { a, b, mu })
    }
}

/// Local growth certificate |Im f(te^{iβ})| ≤ m·t·f'(bt) with b = cos β/(1+R²).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalBound {
    pub m: f64,
}

impl LocalBound {
    pub fn b(&self, beta: f64, r: f64) -> f64 {
        crate::regions::contraction_factor(beta, r)
    }
}

/// F(λ) = aλ + b/λ + 2λ Σ (1 + tᵢ²)wᵢ/(λ² + tᵢ²).
#[derive(Debug, Clone, PartialEq)]
pub struct NPPlusRep {
    pub a: f64,
    pub b: f64,
    pub rho: DiscreteMeasure,
    pub theta1: f64,
    pub theta2: f64,
    pub local_bound: Option<LocalBound>,
}

impl NPPlusRep {
    pub fn new(a: f64, b: f64, rho: DiscreteMeasure, theta1: f64, theta2: f64) -> Result<Self> {
        if !(a >= 0.0 && b >= 0.0) {
            return Err(invalid("NP+ a, b must be nonnegative"));
        }
        for th in [theta1, theta2] {
            if !(th > 0.0 && th <= PI) {
                return Err(invalid(format!("NP+ angle {th} outside (0, π]")));
            }
        }
        Ok(Self { a, b, rho, theta1, theta2, local_bound: None })
    }
}

/// Closed-form tag allowing exact coefficient extension and evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum Generator {
    /// c_n = (1 − r)rⁿ
    Geometric { r: f64 },
    Named(NamedFamily),
    Hausdorff(HausdorffSpec),
}

impl Generator {
    /// Scalar value of the generated function.
    pub fn eval(&self, lambda: C64) -> Result<C64> {
        match self {
            Generator::Geometric { r } => Ok((1.0 - r) / (ONE - lambda * *r)),
            Generator::Named(f) => f.eval_disc(lambda),
            Generator::Hausdorff(h) => hausdorff_eval(h, lambda),
        }
    }

    /// Coefficients c_0..=c_n.
    pub fn coeffs(&self, n: usize) -> Result<Vec<f64>> {
        match self {
            Generator::Geometric { r } => {
                let mut p = 1.0 - r;
                Ok((0..=n)
                    .map(|_| {
                        let c = p;
                        p *= r;
                        c
                    })
                    .collect())
            }
            Generator::Named(f) => Ok(f.coeffs(n)?.coeffs().to_vec()),
            Generator::Hausdorff(h) => Ok(hausdorff_coeffs(h, n)?.coeffs),
        }
    }
}

/// Σ c_nλⁿ with c_n ≥ 0 and Σ c_n + tail_mass = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexSeries {
    pub coeffs: Vec<f64>,
    pub tail_mass: f64,
    pub generator: Option<Generator>,
}

impl ConvexSeries {
    /// Finite series; coefficients are checked, not renormalized.
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        Self::with_tail(coeffs, None)
    }

    /// Series whose tail mass is 1 − Σ coeffs.
    pub fn with_tail(coeffs: Vec<f64>, generator: Option<Generator>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(invalid("convex series needs at least one coefficient"));
        }
        if let Some(i) = coeffs.iter().position(|c| !(*c >= 0.0 && c.is_finite())) {
            return Err(invalid(format!("coefficient c_{i} is negative or non-finite")));
        }
        let s: f64 = coeffs.iter().sum();
        let tail = 1.0 - s;
        if tail < -1e-12 {
            return Err(invalid(format!("coefficients sum to {s} > 1")));
        }
        Ok(Self { coeffs, tail_mass: tail.max(0.0), generator })
    }

    /// Normalizes arbitrary nonnegative weights into a finite convex series.
    pub fn normalized(weights: &[f64]) -> Result<Self> {
        let s: f64 = weights.iter().sum();
        if !(s > 0.0) {
            return Err(invalid("weights must have positive sum"));
        }
        Self::new(weights.iter().map(|w| w / s).collect())
    }

    /// δ_k: h(λ) = λ^k.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![0.0; k + 1];
        c[k] = 1.0;
        Self { coeffs: c, tail_mass: 0.0, generator: None }
    }

    /// (1 − r)rⁿ truncated after `n` terms.
    pub fn geometric(r: f64, n: usize) -> Result<Self> {
        if !(0.0..1.0).contains(&r) {
            return Err(invalid("geometric ratio must lie in [0,1)"));
        }
        let g = Generator::Geometric { r };
        let c = g.coeffs(n)?;
        Self::with_tail(c, Some(g))
    }

    /// Cauchy product (the series of the pointwise product).
    pub fn product(&self, other: &ConvexSeries) -> ConvexSeries {
        let n = self.coeffs.len() + other.coeffs.len() - 1;
        let mut c = vec![0.0; n];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        let tail = (1.0 - c.iter().sum::<f64>()).max(0.0);
        ConvexSeries { coeffs: c, tail_mass: tail, generator: None }
    }
}

/// Real series with possibly negative coefficients and tracked ℓ¹ tail.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedSeries {
    pub coeffs: Vec<f64>,
    pub l1_tail: f64,
    pub generator: Option<NamedFamily>,
}

impl SignedSeries {
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }
}

/// Either kind of Taylor series accepted by the Wiener calculus.
#[derive(Debug, Clone, PartialEq)]
pub enum Series {
    Convex(ConvexSeries),
    Signed(SignedSeries),
}

impl Series {
    pub fn coeffs(&self) -> &[f64] {
        match self {
            Series::Convex(c) => &c.coeffs,
            Series::Signed(s) => &s.coeffs,
        }
    }

    /// ℓ¹ mass of the omitted tail.
    pub fn tail(&self) -> f64 {
        match self {
            Series::Convex(c) => c.tail_mass,
            Series::Signed(s) => s.l1_tail,
        }
    }
}

/// Named example families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NamedFamily {
    /// 1 − (1 − λ)^α
    HAlpha(f64),
    /// Σ λⁿ n^{−(1+α)}/ζ(1+α)
    ZetaL(f64),
    /// 1 − ((1−λ)^ε − 1)/(ε log(1−λ))
    HEps(f64),
    /// 1 + λ/log(1−λ)
    HOne,
    /// ((2−ε)λ − ε)/(2 + ε + ελ)
    GEps(f64),
    /// (λ − 1)/log λ on the right half-plane
    CbfLog,
    /// λ^α on the right half-plane
    Power(f64),
}

impl NamedFamily {
    pub fn name(&self) -> &'static str {
        match self {
            NamedFamily::HAlpha(_) => "h_alpha",
            NamedFamily::ZetaL(_) => "zeta_L",
            NamedFamily::HEps(_) => "h_eps",
            NamedFamily::HOne => "h_one",
            NamedFamily::GEps(_) => "g_eps",
            NamedFamily::CbfLog => "cbf_log",
            NamedFamily::Power(_) => "power",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let p = match *self {
            NamedFamily::HAlpha(a) | NamedFamily::ZetaL(a) | NamedFamily::Power(a) => Some(a),
            NamedFamily::HEps(e) | NamedFamily::GEps(e) => Some(e),
            _ => None,
        };
        match p {
            Some(x) if !(x > 0.0 && x < 1.0) => {
                Err(invalid(format!("{} parameter {x} outside (0,1)", self.name())))
            }
            _ => Ok(()),
        }
    }

    /// Reference angle γ with (1 − h)(𝔻) ⊂ Σ̄_γ, when known.
    pub fn reference_angle(&self) -> Option<f64> {
        match *self {
            NamedFamily::HAlpha(a) | NamedFamily::ZetaL(a) | NamedFamily::Power(a) => Some(a * PI / 2.0),
            NamedFamily::HEps(e) => Some(e * PI / 2.0),
            NamedFamily::HOne | NamedFamily::CbfLog => Some(PI / 3.0),
            NamedFamily::GEps(_) => None,
        }
    }

    /// Source of the reference angle, for reports.
    pub fn reference_note(&self) -> Option<&'static str> {
        match self {
            NamedFamily::HAlpha(_) | NamedFamily::Power(_) => Some("(1 - h_alpha)(D) lies in the closed sector of angle alpha*pi/2"),
            NamedFamily::ZetaL(_) => Some("1 - L_{1+alpha}(lambda) lies in the closed sector of angle alpha*pi/2 for Re lambda <= 1"),
            NamedFamily::HEps(_) => Some("h_eps(T) is Ritt of angle eps*pi/2"),
            NamedFamily::HOne | NamedFamily::CbfLog => Some("(lambda-1)/log(lambda) maps the disc |lambda-1|<1 into the closed sector of angle pi/3"),
            NamedFamily::GEps(_) => None,
        }
    }

    /// True for families defined on the right half-plane rather than the disc.
    pub fn is_half_plane(&self) -> bool {
        matches!(self, NamedFamily::CbfLog | NamedFamily::Power(_))
    }

    /// Disc value h(λ), |λ| ≤ 1. Half-plane families use h(λ) = 1 − ψ(1 − λ).
    pub fn eval_disc(&self, lambda: C64) -> Result<C64> {
        self.validate()?;
        if lambda.norm() > 1.0 + 1e-12 {
            return Err(Error::Domain(format!("{} evaluated at |λ| = {} > 1", self.name(), lambda.norm())));
        }
        Ok(ONE - self.one_minus_h(lambda)?)
    }

    /// 1 − h(λ), computed without cancellation where possible.
    pub fn one_minus_h(&self, lambda: C64) -> Result<C64> {
        match *self {
            NamedFamily::HAlpha(a) | NamedFamily::Power(a) => Ok(cpow(ONE - lambda, a)),
            NamedFamily::ZetaL(a) => Ok(ZetaLEval::new(a).one_minus_l(lambda)),
            NamedFamily::HEps(e) => Ok(cbf_log_value(ONE - lambda, e)),
            NamedFamily::HOne | NamedFamily::CbfLog => Ok(cbf_log_value(ONE - lambda, 1.0)),
            NamedFamily::GEps(e) => {
                let g = ((2.0 - e) * lambda - e) / (2.0 + e + e * lambda);
                Ok(ONE - g)
            }
        }
    }

    /// Half-plane value ψ(λ) = 1 − h(1 − λ).
    pub fn eval_half_plane(&self, lambda: C64) -> Result<C64> {
        match *self {
            NamedFamily::Power(a) => Ok(cpow(lambda, a)),
            NamedFamily::CbfLog => Ok(cbf_log_value(lambda, 1.0)),
            _ => self.one_minus_h(ONE - lambda),
        }
    }

    /// Taylor coefficients c_0..=c_n.
    pub fn coeffs(&self, n: usize) -> Result<Series> {
        self.validate()?;
        if n < 1 {
            return Err(invalid("need at least one coefficient beyond c_0"));
        }
        match *self {
            NamedFamily::HAlpha(a) => {
                let mut c = vec![0.0; n + 1];
                let mut cn = a;
                // tail Σ_{k>n} c_k = Π_{k≤n}(1 − α/k)
                let mut tail = 1.0;
                for (k, slot) in c.iter_mut().enumerate().skip(1) {
                    *slot = cn;
                    tail *= 1.0 - a / k as f64;
                    cn *= (k as f64 - a) / (k as f64 + 1.0);
                }
                Ok(Series::Convex(ConvexSeries { coeffs: c, tail_mass: tail, generator: Some(Generator::Named(*self)) }))
            }
            NamedFamily::ZetaL(a) => {
                let s = 1.0 + a;
                let z = zeta(s);
                let mut c = vec![0.0; n + 1];
                for (k, slot) in c.iter_mut().enumerate().skip(1) {
                    *slot = (k as f64).powf(-s) / z;
                }
                let tail = hurwitz_tail(s, n + 1) / z;
                Ok(Series::Convex(ConvexSeries { coeffs: c, tail_mass: tail, generator: Some(Generator::Named(*self)) }))
            }
            NamedFamily::HEps(_) | NamedFamily::HOne => {
                let h = self.hausdorff(DEFAULT_MEASURE_NODES)?;
                let mut c = hausdorff_coeffs(&h, n)?;
                c.generator = Some(Generator::Named(*self));
                Ok(Series::Convex(c))
            }
            NamedFamily::GEps(e) => {
                let a = e / (2.0 + e);
                let k = 4.0 / ((2.0 + e) * (2.0 + e));
                let mut c = vec![0.0; n + 1];
                c[0] = -a;
                let mut p = 1.0;
                for slot in c.iter_mut().skip(1) {
                    *slot = k * p;
                    p *= -a;
                }
                // Σ_{m≥n} k aᵐ
                let tail = k * a.powi(n as i32) / (1.0 - a);
                Ok(Series::Signed(SignedSeries { coeffs: c, l1_tail: tail, generator: Some(*self) }))
            }
            NamedFamily::CbfLog | NamedFamily::Power(_) => Err(Error::Unsupported(format!(
                "{} is a half-plane function; use {} for its disc counterpart",
                self.name(),
                if matches!(self, NamedFamily::CbfLog) { "h_one" } else { "h_alpha" }
            ))),
        }
    }

    /// Regular Hausdorff representation, discretized with `nodes` quadrature nodes.
    pub fn hausdorff(&self, nodes: usize) -> Result<HausdorffSpec> {
        self.validate()?;
        let nodes = nodes.max(8);
        let atoms = match *self {
            NamedFamily::HAlpha(a) => h_alpha_atoms(a, nodes),
            NamedFamily::HEps(e) => h_eps_atoms(e, nodes),
            NamedFamily::HOne => h_eps_atoms(1.0, nodes),
            NamedFamily::ZetaL(a) => zeta_atoms(a, nodes),
            _ => return Err(Error::Unsupported(format!("{} has no Hausdorff representation", self.name()))),
        };
        Ok(atoms_to_hausdorff(atoms))
    }
}

/// Principal-branch power.
fn cpow(z: C64, a: f64) -> C64 {
    if z.norm() == 0.0 {
        return ZERO;
    }
    C64::from_polar(z.norm().powf(a), z.arg() * a)
}

fn c_expm1(w: C64) -> C64 {
    if w.norm() < 1e-4 {
        w + w * w / 2.0 + w * w * w / 6.0 + w * w * w * w / 24.0
    } else {
        w.exp() - ONE
    }
}

/// (λ^ε − 1)/(ε log λ) for λ off (−∞, 0]; value at λ = 0 is 0, at λ = 1 is 1.
fn cbf_log_value(lambda: C64, eps: f64) -> C64 {
    if lambda.norm() == 0.0 {
        return ZERO;
    }
    let d = lambda - ONE;
    let l = if d.norm() < 1e-4 {
        // log(1 + d)
        d - d * d / 2.0 + d * d * d / 3.0 - d * d * d * d / 4.0
    } else {
        lambda.ln()
    };
    if l.norm() == 0.0 {
        return ONE;
    }
    let w = l * eps;
    c_expm1(w) / w
}

/// Σ_{k≥m} k^{−s} (Euler-Maclaurin).
fn hurwitz_tail(s: f64, m: usize) -> f64 {
    let n = m.max(20);
    let mut sum = 0.0;
    for k in m..n {
        sum += (k as f64).powf(-s);
    }
    let nf = n as f64;
    sum += nf.powf(1.0 - s) / (s - 1.0) + 0.5 * nf.powf(-s);
    sum += s / 12.0 * nf.powf(-s - 1.0);
    sum -= s * (s + 1.0) * (s + 2.0) / 720.0 * nf.powf(-s - 3.0);
    sum
}

/// Evaluator of 1 − L_{1+α}(λ) on the closed unit disc.
pub struct ZetaLEval {
    s: f64,
    zeta_s: f64,
    gamma_neg: f64,
    taylor: Vec<f64>,
}

impl ZetaLEval {
    pub fn new(alpha: f64) -> Self {
        let s = 1.0 + alpha;
        let mut taylor = Vec::new();
        let mut fact = 1.0;
        for k in 1..=80 {
            fact *= k as f64;
            taylor.push(zeta(s - k as f64) / fact);
        }
        Self { s, zeta_s: zeta(s), gamma_neg: gamma(1.0 - s), taylor }
    }

    /// L_{1+α}(λ), normalized so L(1) = 1.
    pub fn eval(&self, lambda: C64) -> C64 {
        ONE - self.one_minus_l(lambda)
    }

    /// 1 − L(λ) for |λ| ≤ 1: power series near 0, expansion in log λ otherwise.
    pub fn one_minus_l(&self, lambda: C64) -> C64 {
        if lambda.norm() <= 0.5 {
            let mut sum = ZERO;
            let mut p = lambda;
            for k in 1..200 {
                let term = p * (k as f64).powf(-self.s);
                sum += term;
                if term.norm() < 1e-18 {
                    break;
                }
                p *= lambda;
            }
            return ONE - sum / self.zeta_s;
        }
        let mu = lambda.ln();
        let mut val = cpow(-mu, self.s - 1.0) * self.gamma_neg;
        let mut p = ONE;
        for c in &self.taylor {
            p *= mu;
            let term = p * *c;
            val += term;
            if term.norm() < 1e-18 * val.norm().max(1e-300) {
                break;
            }
        }
        -val / self.zeta_s
    }
}

/// An atom with its regularity contribution r = w/(1−t) and 1 − t kept separately.
struct RegAtom {
    one_minus_t: f64,
    reg: f64,
}

fn atoms_to_hausdorff(atoms: Vec<RegAtom>) -> HausdorffSpec {
    let total: f64 = atoms.iter().map(|a| a.reg).sum();
    let mut points = Vec::with_capacity(atoms.len());
    let mut weights = Vec::with_capacity(atoms.len());
    for a in atoms {
        if !(a.reg > 0.0) {
            continue;
        }
        let mut t = 1.0 - a.one_minus_t;
        if t >= 1.0 {
            t = 1.0 - f64::EPSILON / 2.0;
        }
        let t = t.max(0.0);
        // weight chosen so w/(1−t) reproduces the normalized regularity share
        points.push(t);
        weights.push(a.reg / total * (1.0 - t));
    }
    HausdorffSpec { c0: 0.0, nu: DiscreteMeasure { points, weights, support: Support::UnitInterval } }
}

/// ν_α(dt) = (sin πα/π)(1−t)^α t^{−α} dt with power substitutions at both ends.
fn h_alpha_atoms(a: f64, nodes: usize) -> Vec<RegAtom> {
    let cst = (PI * a).sin() / PI;
    let half = nodes / 2;
    let mut out = Vec::with_capacity(2 * half);
    // [0, 1/2]: t = u^{p0}/2, p0 = 1/(1−α)
    let p0 = 1.0 / (1.0 - a);
    let (u, g) = gauss_legendre_on(0.0, 1.0, half);
    for (u, g) in u.iter().zip(&g) {
        let t = 0.5 * u.powf(p0);
        let w = cst * (1.0 - t).powf(a) * 2f64.powf(a - 1.0) * p0 * g;
        out.push(RegAtom { one_minus_t: 1.0 - t, reg: w / (1.0 - t) });
    }
    // [1/2, 1]: 1 − t = v^{p1}/2, p1 = 1/α
    let p1 = 1.0 / a;
    let (v, g) = gauss_legendre_on(0.0, 1.0, nodes - half);
    for (v, g) in v.iter().zip(&g) {
        let omt = 0.5 * v.powf(p1);
        let t = 1.0 - omt;
        let reg = cst * 2f64.powf(-a) * p1 * t.powf(-a) * g;
        out.push(RegAtom { one_minus_t: omt, reg });
    }
    out
}

/// ν_ε = (1/ε)∫₀^ε ν_α dα in the variable x = log((1−t)/t) = π tan θ.
fn h_eps_atoms(e: f64, nodes: usize) -> Vec<RegAtom> {
    let (th, g) = gauss_legendre_on(-PI / 2.0, PI / 2.0, nodes);
    let mut out = Vec::with_capacity(nodes);
    for (th, g) in th.iter().zip(&g) {
        let x = PI * th.tan();
        // t = 1/(1+eˣ), 1 − t = eˣ/(1+eˣ), A = t·e^{εx}, all without overflow
        let (t, omt, a_) = if x > 0.0 {
            let em = (-x).exp();
            (em / (1.0 + em), 1.0 / (1.0 + em), ((e - 1.0) * x).exp() / (1.0 + em))
        } else {
            let ep = x.exp();
            (1.0 / (1.0 + ep), ep / (1.0 + ep), (e * x).exp() / (1.0 + ep))
        };
        let w = C64::new(x, PI);
        let num = C64::from_polar(a_, e * PI) - t;
        // t·D(x), D the ν_ε density in t
        let td = (num / w).im / (e * PI);
        let reg = td * (PI * PI + x * x) / PI * g;
        if reg.is_finite() && reg > 0.0 {
            out.push(RegAtom { one_minus_t: omt, reg });
        }
    }
    out
}

/// ν(dt) = log^α(1/t) dt/(Γ(1+α)ζ(1+α)) in u = log(1/t) = v^{1/α}.
fn zeta_atoms(a: f64, nodes: usize) -> Vec<RegAtom> {
    let vmax = 45f64.powf(a);
    let (v, g) = gauss_legendre_on(0.0, vmax, nodes);
    let mut out = Vec::with_capacity(nodes);
    for (v, g) in v.iter().zip(&g) {
        let u = v.powf(1.0 / a);
        let omt = -(-u).exp_m1();
        // regularity integrand (1/α)·u/(eᵘ − 1), unnormalized
        let reg = if u < 1e-300 { 1.0 / a } else { u / u.exp_m1() / a } * g;
        out.push(RegAtom { one_minus_t: omt, reg });
    }
    out
}

/// Σ c_nλⁿ; |λ| ≤ 1. Uses the generator's closed form when the tail is too heavy.
pub fn convex_eval(c: &ConvexSeries, lambda: C64, tol: f64) -> Result<C64> {
    if lambda.norm() > 1.0 + 1e-12 {
        return Err(Error::Domain(format!("convex series evaluated at |λ| = {} > 1", lambda.norm())));
    }
    if c.tail_mass <= tol {
        return Ok(horner(&c.coeffs, lambda));
    }
    match &c.generator {
        Some(g) => g.eval(lambda),
        None => Err(Error::Precision { achieved: c.tail_mass, requested: tol }),
    }
}

/// Σ c_nλⁿ for a signed series.
pub fn signed_eval(s: &SignedSeries, lambda: C64, tol: f64) -> Result<C64> {
    if lambda.norm() > 1.0 + 1e-12 {
        return Err(Error::Domain(format!("series evaluated at |λ| = {} > 1", lambda.norm())));
    }
    if s.l1_tail <= tol {
        return Ok(horner(&s.coeffs, lambda));
    }
    match &s.generator {
        Some(f) => f.eval_disc(lambda),
        None => Err(Error::Precision { achieved: s.l1_tail, requested: tol }),
    }
}

fn horner(c: &[f64], lambda: C64) -> C64 {
    c.iter().rev().fold(ZERO, |acc, a| acc * lambda + *a)
}

/// 𝐡(λ) = 1 − h((1−λ)/(1+λ)).
pub fn bold_h_eval(c: &ConvexSeries, lambda: C64) -> Result<C64> {
    let z = cayley(lambda)?;
    Ok(ONE - convex_eval(c, z, 1e-13)?)
}

/// c₁..c_N from the moments of ν.
pub fn hausdorff_coeffs(h: &HausdorffSpec, n: usize) -> Result<ConvexSeries> {
    if n < 1 {
        return Err(invalid("need N ≥ 1"));
    }
    let mut c = vec![0.0; n + 1];
    c[0] = h.c0;
    let mut pw: Vec<f64> = h.nu.weights.clone();
    for slot in c.iter_mut().skip(1) {
        let mut s = 0.0;
        for (p, t) in pw.iter_mut().zip(&h.nu.points) {
            s += *p;
            *p *= t;
        }
        *slot = s;
    }
    let tail = 1.0 - c.iter().sum::<f64>();
    if tail < -1e-10 {
        return Err(Error::Inconsistent(format!("coefficients exceed total mass by {:e}", -tail)));
    }
    Ok(ConvexSeries { coeffs: c, tail_mass: tail.max(0.0), generator: Some(Generator::Hausdorff(h.clone())) })
}

/// c₀ + Σ wᵢλ/(1 − tᵢλ).
pub fn hausdorff_eval(h: &HausdorffSpec, lambda: C64) -> Result<C64> {
    let mut s = C64::new(h.c0, 0.0);
    for (t, w) in h.nu.atoms() {
        let d = ONE - lambda * t;
        if d.norm() < 1e-300 {
            return Err(Error::Pole { at: lambda });
        }
        s += lambda * w / d;
    }
    Ok(s)
}

/// Push-forward ν ↦ μ: atom s ↦ t = (1−s)/s with weight w/(s(1−s)); ν({0}) becomes b.
pub fn hausdorff_to_cbf(h: &HausdorffSpec) -> Result<StieltjesTriple> {
    let d = (h.regularity() - 1.0).abs();
    if d > 1e-10 {
        return Err(Error::Inconsistent(format!("Hausdorff function not regular (off by {d:e})")));
    }
    let mut b = 0.0;
    let mut pts = Vec::new();
    let mut wts = Vec::new();
    for (s, w) in h.nu.atoms() {
        if s == 0.0 {
            b += w;
        } else {
            pts.push((1.0 - s) / s);
            wts.push(w / (s * (1.0 - s)));
        }
    }
    StieltjesTriple::new(0.0, b, DiscreteMeasure::new(pts, wts, Support::HalfLine)?)
}

/// Reverse push-forward μ ↦ ν: atom t ↦ s = 1/(1+t) with weight t·m/(1+t)², scaled by 1/ψ(1).
pub fn cbf_to_hausdorff(psi: &StieltjesTriple) -> Result<HausdorffSpec> {
    if psi.a != 0.0 || psi.b != 0.0 {
        return Err(Error::Unsupported("reverse map needs a = b = 0".into()));
    }
    let psi1: f64 = psi.mu.atoms().map(|(t, m)| m / (1.0 + t)).sum();
    if !(psi1 > 0.0) {
        return Err(invalid("ψ(1) must be positive"));
    }
    let mut pts = Vec::with_capacity(psi.mu.len());
    let mut wts = Vec::with_capacity(psi.mu.len());
    for (t, m) in psi.mu.atoms() {
        pts.push(1.0 / (1.0 + t));
        wts.push(t * m / ((1.0 + t) * (1.0 + t)) / psi1);
    }
    Ok(HausdorffSpec { c0: 0.0, nu: DiscreteMeasure::new(pts, wts, Support::UnitInterval)? })
}

/// a + bλ + Σ wᵢλ/(λ + sᵢ).
pub fn cbf_eval(psi: &StieltjesTriple, lambda: C64) -> Result<C64> {
    let mut v = psi.a + lambda * psi.b;
    for (s, w) in psi.mu.atoms() {
        let d = lambda + s;
        if d.norm() < 1e-300 {
            return Err(Error::Pole { at: lambda });
        }
        v += lambda * w / d;
    }
    Ok(v)
}

/// ψ'(t) = b + Σ sᵢwᵢ/(t + sᵢ)².
pub fn cbf_deriv(psi: &StieltjesTriple, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("cbf_deriv needs t > 0, got {t}")));
    }
    Ok(psi.b + psi.mu.atoms().map(|(s, w)| s * w / ((t + s) * (t + s))).sum::<f64>())
}

/// aλ + b/λ + 2λ Σ (1 + tᵢ²)wᵢ/(λ² + tᵢ²).
pub fn np_eval(f: &NPPlusRep, lambda: C64) -> Result<C64> {
    if lambda.norm() == 0.0 && f.b > 0.0 {
        return Err(Error::Pole { at: lambda });
    }
    let mut v = lambda * f.a;
    if f.b > 0.0 {
        v += f.b / lambda;
    }
    let l2 = lambda * lambda;
    let mut s = ZERO;
    for (t, w) in f.rho.atoms() {
        let d = l2 + t * t;
        if d.norm() < 1e-300 {
            return Err(Error::Pole { at: lambda });
        }
        s += (1.0 + t * t) * w / d;
    }
    Ok(v + lambda * s * 2.0)
}

/// Coefficients of a named family.
pub fn named_coeffs(family: NamedFamily, n: usize) -> Result<Series> {
    family.coeffs(n)
}

/// Tagged scalar function.
#[derive(Debug, Clone, PartialEq)]
pub enum FunctionSpec {
    Convex(ConvexSeries),
    Hausdorff(HausdorffSpec),
    Stieltjes(StieltjesTriple),
    NPPlus(NPPlusRep),
    Named(NamedFamily),
}

impl FunctionSpec {
    /// 1 − h(λ) on the disc. Stieltjes triples use 1 − h(λ) = ψ(1 − λ).
    pub fn one_minus_h(&self, lambda: C64) -> Result<C64> {
        match self {
            FunctionSpec::Convex(c) => Ok(ONE - convex_eval(c, lambda, 1e-12)?),
            FunctionSpec::Hausdorff(h) => Ok(ONE - hausdorff_eval(h, lambda)?),
            FunctionSpec::Stieltjes(p) => cbf_eval(p, ONE - lambda),
            FunctionSpec::Named(f) => f.one_minus_h(lambda),
            FunctionSpec::NPPlus(_) => {
                Err(Error::Unsupported("NP+ representations are half-plane functions, not disc functions".into()))
            }
        }
    }

    /// Right half-plane value: 𝐡 for convex series, ψ for CBFs, F for NP⁺.
    pub fn eval_half_plane(&self, lambda: C64) -> Result<C64> {
        match self {
            FunctionSpec::Convex(c) => bold_h_eval(c, lambda),
            FunctionSpec::Stieltjes(p) => cbf_eval(p, lambda),
            FunctionSpec::NPPlus(f) => np_eval(f, lambda),
            FunctionSpec::Named(f) if f.is_half_plane() => f.eval_half_plane(lambda),
            FunctionSpec::Named(f) => {
                // 𝐡 analogue: 1 − h(C(λ))
                Ok(f.one_minus_h(cayley(lambda)?)?)
            }
            FunctionSpec::Hausdorff(h) => Ok(ONE - hausdorff_eval(h, cayley(lambda)?)?),
        }
    }

    /// Regular Hausdorff form, when the function has one.
    pub fn as_hausdorff(&self, nodes: usize) -> Result<HausdorffSpec> {
        match self {
            FunctionSpec::Hausdorff(h) => {
                let d = (h.regularity() - 1.0).abs();
                if d > 1e-10 {
                    return Err(Error::Inconsistent(format!("regularity c0 + Σ w/(1−t) = 1 violated by {d:e}")));
                }
                Ok(h.clone())
            }
            FunctionSpec::Named(f) => f.hausdorff(nodes),
            FunctionSpec::Stieltjes(p) => cbf_to_hausdorff(p),
            _ => Err(Error::Unsupported("function is not a Hausdorff function".into())),
        }
    }
}

/// Disc sampling for covering-sector estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingConfig {
    /// circles of radius 1 − 10^{−k}, k = 1..=circles
    pub circles: usize,
    /// points per circle, clustered quadratically toward λ = 1
    pub angular: usize,
    /// Halton points in the open disc
    pub interior: usize,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        Self { circles: 8, angular: 12_000, interior: 4_000 }
    }
}

impl SamplingConfig {
    pub fn total(&self) -> usize {
        self.circles * self.angular + self.interior
    }

    /// Sample points: nested under doubling of `angular`/`interior` and increase of `circles`.
    pub fn points(&self) -> Vec<C64> {
        let mut pts = Vec::with_capacity(self.total());
        let half = (self.angular / 2).max(1);
        for k in 1..=self.circles {
            let r = 1.0 - 10f64.powi(-(k as i32));
            for j in 1..=half {
                let phi = PI * (j as f64 / half as f64).powi(2);
                pts.push(C64::from_polar(r, phi));
                pts.push(C64::from_polar(r, -phi));
            }
        }
        for i in 1..=self.interior {
            let r = halton(i, 2).sqrt();
            let th = 2.0 * PI * halton(i, 3);
            pts.push(C64::from_polar(r, th));
        }
        pts
    }
}

/// Sampled sup of |arg(1 − h(λ))| over the disc.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorEstimate {
    pub gamma: f64,
    pub argmax: C64,
    pub max_radius: f64,
    pub samples: usize,
    /// samples where 1 − h vanished
    pub skipped: Vec<C64>,
}

pub fn min_covering_sector(f: &FunctionSpec, sampling: &SamplingConfig) -> Result<SectorEstimate> {
    let pts = sampling.points();
    let zeta_eval = match f {
        FunctionSpec::Named(NamedFamily::ZetaL(a)) => Some(ZetaLEval::new(*a)),
        _ => None,
    };
    let mut best = 0.0f64;
    let mut argmax = ZERO;
    let mut skipped = Vec::new();
    let mut max_radius = 0.0f64;
    for &z in &pts {
        let v = match &zeta_eval {
            Some(e) => e.one_minus_l(z),
            None => f.one_minus_h(z)?,
        };
        max_radius = max_radius.max(z.norm());
        if v.norm() == 0.0 {
            skipped.push(z);
            continue;
        }
        let a = v.arg().abs();
        if a > best {
            best = a;
            argmax = z;
        }
    }
    Ok(SectorEstimate { gamma: best, argmax, max_radius, samples: pts.len(), skipped })
}

/// Random convex series with `len` coefficients (deterministic per RNG state).
pub fn random_convex_series<R: rand::Rng>(rng: &mut R, len: usize) -> ConvexSeries {
    let w: Vec<f64> = (0..len.max(1)).map(|_| rng.gen::<f64>()).collect();
    ConvexSeries::normalized(&w).expect("positive weights")
}

/// Gauss-Legendre average (1/ε)∫₀^ε g(α) dα.
pub fn alpha_average(eps: f64, nodes: usize, g: impl Fn(f64) -> f64) -> f64 {
    let (x, w) = gauss_legendre(nodes);
    x.iter().zip(&w).map(|(x, w)| 0.5 * w * g(0.5 * eps * (1.0 + x))).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn atom(t: f64, w: f64) -> HausdorffSpec {
        HausdorffSpec::new(0.0, DiscreteMeasure::new(vec![t], vec![w], Support::UnitInterval).unwrap()).unwrap()
    }

    #[test]
    fn convex_eval_examples() {
        let l = c(0.3, -0.4);
        assert_eq!(convex_eval(&ConvexSeries::monomial(0), l, 1e-12).unwrap(), ONE);
        assert_eq!(convex_eval(&ConvexSeries::monomial(1), l, 1e-12).unwrap(), l);
        let g = ConvexSeries::geometric(0.5, 80).unwrap();
        let exact = 0.5 / (ONE - l * 0.5);
        assert!((convex_eval(&g, l, 1e-12).unwrap() - exact).norm() < 1e-15);
        let short = ConvexSeries::with_tail(vec![0.5, 0.25], None).unwrap();
        assert!(matches!(convex_eval(&short, l, 1e-12), Err(Error::Precision { .. })));
        assert!(matches!(convex_eval(&g, c(1.5, 0.0), 1e-12), Err(Error::Domain(_))));
    }

    #[test]
    fn bold_h_examples() {
        let s = ConvexSeries::new(vec![0.3, 0.7]).unwrap();
        assert!((bold_h_eval(&s, ONE).unwrap() - c(0.7, 0.0)).norm() < 1e-15);
        let id = ConvexSeries::monomial(1);
        let l = c(0.7, 2.0);
        assert!((bold_h_eval(&id, l).unwrap() - 2.0 * l / (ONE + l)).norm() < 1e-14);
        assert!(matches!(bold_h_eval(&id, -ONE), Err(Error::Pole { .. })));
    }

    #[test]
    fn hausdorff_examples() {
        let h = atom(0.5, 0.5);
        let c8 = hausdorff_coeffs(&h, 8).unwrap();
        for n in 1..=8 {
            assert!((c8.coeffs[n] - 0.5 * 0.5f64.powi(n as i32 - 1)).abs() < 1e-16);
        }
        assert!((hausdorff_eval(&h, -ONE).unwrap() - c(-1.0 / 3.0, 0.0)).norm() < 1e-15);
        assert!((hausdorff_eval(&h, ONE).unwrap() - ONE).norm() < 1e-15);
        assert_eq!(hausdorff_eval(&h, ZERO).unwrap(), ZERO);
        let id = atom(0.0, 1.0);
        let ci = hausdorff_coeffs(&id, 3).unwrap();
        assert_eq!(ci.coeffs, vec![0.0, 1.0, 0.0, 0.0]);
        assert!(HausdorffSpec::new(0.0, DiscreteMeasure::new(vec![0.5], vec![0.4], Support::UnitInterval).unwrap()).is_err());
    }

    #[test]
    fn push_forward_examples() {
        let p = hausdorff_to_cbf(&atom(0.5, 0.5)).unwrap();
        assert_eq!(p.mu.points, vec![1.0]);
        assert_eq!(p.mu.weights, vec![2.0]);
        assert_eq!(p.b, 0.0);
        let lin = hausdorff_to_cbf(&atom(0.0, 1.0)).unwrap();
        assert_eq!(lin.b, 1.0);
        assert!(lin.mu.is_empty());
        let mu = StieltjesTriple::new(0.0, 0.0, DiscreteMeasure::new(vec![1.0], vec![2.0], Support::HalfLine).unwrap()).unwrap();
        let nu = cbf_to_hausdorff(&mu).unwrap();
        assert_eq!(nu.nu.points, vec![0.5]);
        // m/4 before normalization by ψ(1) = m/2
        assert!((nu.nu.weights[0] - 0.5).abs() < 1e-15);
        let bad = StieltjesTriple::new(1.0, 0.0, DiscreteMeasure::empty(Support::HalfLine)).unwrap();
        assert!(matches!(cbf_to_hausdorff(&bad), Err(Error::Unsupported(_))));
    }

    #[test]
    fn cbf_and_np_examples() {
        let lin = StieltjesTriple::new(2.0, 3.0, DiscreteMeasure::empty(Support::HalfLine)).unwrap();
        assert_eq!(cbf_eval(&lin, c(1.0, 1.0)).unwrap(), c(5.0, 3.0));
        let d1 = StieltjesTriple::new(0.0, 0.0, DiscreteMeasure::new(vec![1.0], vec![1.0], Support::HalfLine).unwrap()).unwrap();
        assert!((cbf_eval(&d1, ONE).unwrap() - c(0.5, 0.0)).norm() < 1e-16);
        assert!(matches!(cbf_eval(&d1, -ONE), Err(Error::Pole { .. })));
        let f = NPPlusRep::new(1.0, 0.0, DiscreteMeasure::empty(Support::HalfLine), PI / 2.0, PI / 2.0).unwrap();
        assert_eq!(np_eval(&f, c(0.3, 0.2)).unwrap(), c(0.3, 0.2));
        let g = NPPlusRep::new(0.0, 1.0, DiscreteMeasure::empty(Support::HalfLine), PI / 2.0, PI / 2.0).unwrap();
        assert!((np_eval(&g, c(0.3, 0.2)).unwrap() - ONE / c(0.3, 0.2)).norm() < 1e-15);
        assert!(matches!(np_eval(&g, ZERO), Err(Error::Pole { .. })));
    }

    #[test]
    fn named_coefficients() {
        let Series::Convex(h) = named_coeffs(NamedFamily::HAlpha(0.5), 50).unwrap() else { panic!() };
        assert!((h.coeffs[1] - 0.5).abs() < 1e-16);
        assert!((h.coeffs[2] - 0.125).abs() < 1e-16);
        assert!((h.coeffs[3] - 0.0625).abs() < 1e-16);
        assert!((h.coeffs.iter().sum::<f64>() + h.tail_mass - 1.0).abs() < 1e-12);
        let Series::Convex(z) = named_coeffs(NamedFamily::ZetaL(0.3), 100).unwrap() else { panic!() };
        assert!((z.coeffs[1] / z.coeffs[2] - 2f64.powf(1.3)).abs() < 1e-12);
        assert!((z.coeffs.iter().sum::<f64>() + z.tail_mass - 1.0).abs() < 1e-12);
        let Series::Signed(g) = named_coeffs(NamedFamily::GEps(0.5), 10_000).unwrap() else { panic!() };
        assert!((g.l1_norm() - 1.0).abs() < 1e-12);
        assert!(named_coeffs(NamedFamily::HAlpha(1.5), 5).is_err());
        assert!(matches!(named_coeffs(NamedFamily::CbfLog, 5), Err(Error::Unsupported(_))));
    }

    #[test]
    fn closed_forms_match_series() {
        let l = c(0.4, 0.3);
        for fam in [NamedFamily::HAlpha(0.3), NamedFamily::ZetaL(0.6), NamedFamily::GEps(0.4)] {
            let s = fam.coeffs(400).unwrap();
            let v = horner(s.coeffs(), l);
            assert!((v - fam.eval_disc(l).unwrap()).norm() < 1e-12, "{fam:?}");
        }
        for fam in [NamedFamily::HEps(0.4), NamedFamily::HOne] {
            let h = fam.hausdorff(400).unwrap();
            let v = hausdorff_eval(&h, l).unwrap();
            assert!((v - fam.eval_disc(l).unwrap()).norm() < 1e-9, "{fam:?}");
        }
    }

    #[test]
    fn zeta_expansion_matches_direct_series() {
        let e = ZetaLEval::new(0.5);
        let l = C64::from_polar(0.8, 2.0);
        let mut s = ZERO;
        for k in 1..400 {
            s += l.powu(k) * (k as f64).powf(-1.5);
        }
        assert!((e.eval(l) - s / zeta(1.5)).norm() < 1e-13);
        assert!((e.eval(ONE) - ONE).norm() < 1e-14);
    }

    #[test]
    fn quadratured_h_alpha_coefficients() {
        let h = NamedFamily::HAlpha(0.5).hausdorff(200).unwrap();
        assert!((h.regularity() - 1.0).abs() < 1e-13);
        let q = hausdorff_coeffs(&h, 3).unwrap();
        assert!((q.coeffs[1] - 0.5).abs() < 1e-10);
        assert!((q.coeffs[2] - 0.125).abs() < 1e-10);
        assert!((q.coeffs[3] - 0.0625).abs() < 1e-10);
    }

    #[test]
    fn h_one_value_at_edges() {
        let f = NamedFamily::HOne;
        assert!(f.eval_disc(ZERO).unwrap().norm() < 1e-15);
        assert!((f.eval_disc(ONE).unwrap() - ONE).norm() < 1e-15);
        assert!((f.eval_disc(c(1e-9, 0.0)).unwrap() - c(5e-10, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn covering_sector_of_identity_approaches_right_angle() {
        let f = FunctionSpec::Convex(ConvexSeries::monomial(1));
        let coarse = min_covering_sector(&f, &SamplingConfig { circles: 3, angular: 400, interior: 100 }).unwrap();
        let fine = min_covering_sector(&f, &SamplingConfig { circles: 6, angular: 800, interior: 200 }).unwrap();
        assert!(fine.gamma >= coarse.gamma);
        assert!((fine.gamma - PI / 2.0).abs() < 2e-3);
    }
}
