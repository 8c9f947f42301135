//! Operator functional calculus on matrices: power series (Wiener algebra),
//! atom-sum evaluation of Hausdorff and Bernstein functions, the Cayley
//! transform, contour integrals, fractional powers and the resolvent
//! representation of (z + f(A))⁻¹ through A^q.

use crate::error::invalid;
use crate::funclasses::{
    cbf_eval, ConvexSeries, FunctionSpec, Generator, HausdorffSpec, NamedFamily, Series, StieltjesTriple,
    DEFAULT_MEASURE_NODES,
};
use crate::linalg::{eigenvalues, inverse_at, operator_norm, solve_shifted, CMatrix, Lu};
use crate::prelude::*;
use crate::quadrature::gauss_legendre_on;

const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Hard cap on the number of series terms.
pub const MAX_TERMS: usize = 1_000_000;
/// Powers inspected when estimating sup ‖Tⁿ‖.
pub const POWER_BOUND_WINDOW: usize = 2000;

/// How a function of a matrix was evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApplyMethod {
    /// Σ_{n≤N} c_nTⁿ
    Truncated,
    /// Rational closed form of the generator
    ClosedForm,
    /// c₀I + Σ wᵢT(I − tᵢT)⁻¹ or the Stieltjes analogue
    AtomSum,
}

/// A matrix function value with its a-posteriori error bound.
#[derive(Debug, Clone, PartialEq)]
pub struct Applied {
    pub matrix: CMatrix,
    pub bound: f64,
    /// Series terms used (0 for non-series routes).
    pub terms: usize,
    /// max_{n≤K} ‖Tⁿ‖ over the inspected window.
    pub power_bound: f64,
    pub method: ApplyMethod,
}

/// max ‖Tⁿ‖ over n ≤ min(n_max, 2000). Stops early when ‖Tⁿ‖ passes 1e8.
pub fn power_bound(t: &CMatrix, n_max: usize) -> Result<f64> {
    let k = n_max.min(POWER_BOUND_WINDOW);
    let mut p = CMatrix::identity(t.dim());
    let mut m = 1.0f64;
    let mut doubling = 1usize;
    for n in 1..=k {
        p = p.matmul(t);
        if !p.is_finite() {
            return Err(Error::Overflow { power: n });
        }
        // operator norms are expensive; check every power early, then at doubling indices and
        // use the cheaper Frobenius upper bound in between
        let nrm = if n <= 64 || n == doubling { operator_norm(&p, 1e-10) } else { p.frobenius() };
        if n == doubling {
            doubling *= 2;
        }
        if nrm > 1e8 {
            return Err(Error::NotPowerBounded { spectral_radius: nrm.powf(1.0 / n as f64) });
        }
        m = m.max(nrm);
    }
    Ok(m)
}

/// Σ c_nTⁿ with ℓ¹ tail control, falling back to the generator's closed form
/// when the stored coefficients do not reach `tol`.
pub fn wiener_apply(f: &Series, t: &CMatrix, tol: f64) -> Result<Applied> {
    if !(tol > 0.0) {
        return Err(invalid("tolerance must be positive"));
    }
    let c = f.coeffs();
    let m = power_bound(t, c.len().max(64))?;
    // smallest N with M·(tail beyond N) ≤ tol/2
    let mut suffix = f.tail();
    let mut n_used = c.len();
    while n_used > 1 && m * (suffix + c[n_used - 1].abs()) <= tol / 2.0 {
        suffix += c[n_used - 1].abs();
        n_used -= 1;
    }
    let bound = m * suffix;
    if bound <= tol {
        let mut acc = CMatrix::identity(t.dim()).scale(C64::new(c[n_used - 1], 0.0));
        for ck in c[..n_used - 1].iter().rev() {
            acc = acc.matmul(t).shift(C64::new(*ck, 0.0));
        }
        let rounding = f64::EPSILON * m * c[..n_used].iter().map(|x| x.abs()).sum::<f64>() * (n_used as f64).sqrt();
        return Ok(Applied { matrix: acc, bound: bound + rounding, terms: n_used, power_bound: m, method: ApplyMethod::Truncated });
    }
    let generator = match f {
        Series::Convex(cs) => cs.generator.clone(),
        Series::Signed(s) => s.generator.map(Generator::Named),
    };
    match generator {
        Some(g) => {
            let mut out = generator_apply(&g, t)?;
            out.power_bound = m;
            Ok(out)
        }
        None => Err(Error::Precision { achieved: bound, requested: tol }),
    }
}

fn generator_apply(g: &Generator, t: &CMatrix) -> Result<Applied> {
    let n = t.dim();
    let closed = |matrix: CMatrix| Applied { matrix, bound: 0.0, terms: 0, power_bound: 0.0, method: ApplyMethod::ClosedForm };
    match g {
        Generator::Geometric { r } => {
            // (1 − r)(I − rT)⁻¹
            let a = t.scale(C64::new(-r, 0.0)).shift(ONE);
            let x = solve_shifted(&a, &CMatrix::identity(n).scale(C64::new(1.0 - r, 0.0)), C64::new(1.0 / r, 0.0))?;
            Ok(with_rounding(closed(x), t))
        }
        Generator::Named(NamedFamily::GEps(e)) => Ok(with_rounding(closed(g_eps_op(t, *e)?), t)),
        Generator::Named(f) => {
            let coarse = hausdorff_apply(&f.hausdorff(DEFAULT_MEASURE_NODES)?, t)?;
            let fine = hausdorff_apply(&f.hausdorff(2 * DEFAULT_MEASURE_NODES)?, t)?;
            let bound = fine.sub(&coarse).frobenius();
            Ok(Applied { matrix: fine, bound, terms: 0, power_bound: 0.0, method: ApplyMethod::AtomSum })
        }
        Generator::Hausdorff(h) => {
            let x = hausdorff_apply(h, t)?;
            let bound = f64::EPSILON * (h.nu.len() as f64 + 1.0) * x.frobenius().max(1.0) * 16.0;
            Ok(Applied { matrix: x, bound, terms: 0, power_bound: 0.0, method: ApplyMethod::AtomSum })
        }
    }
}

fn with_rounding(mut a: Applied, t: &CMatrix) -> Applied {
    a.bound = f64::EPSILON * 64.0 * (1.0 + a.matrix.frobenius()) * (1.0 + t.frobenius());
    a
}

/// Atoms closer to 1 than this are merged at 1 − ATOM_GAP keeping Σ w/(1 − t).
const ATOM_GAP: f64 = 1e-8;

/// c₀I + Σ wᵢT(I − tᵢT)⁻¹.
pub fn hausdorff_apply(h: &HausdorffSpec, t: &CMatrix) -> Result<CMatrix> {
    let n = t.dim();
    let mut acc = CMatrix::identity(n).scale(C64::new(h.c0, 0.0));
    let mut merged = 0.0;
    let mut atoms: Vec<(f64, f64)> = Vec::with_capacity(h.nu.len() + 1);
    for (s, w) in h.nu.atoms() {
        if w == 0.0 {
            continue;
        }
        if 1.0 - s < ATOM_GAP {
            merged += w / (1.0 - s).max(f64::EPSILON / 2.0);
        } else {
            atoms.push((s, w));
        }
    }
    if merged > 0.0 {
        atoms.push((1.0 - ATOM_GAP, merged * ATOM_GAP));
    }
    for (s, w) in atoms {
        let a = t.scale(C64::new(-s, 0.0)).shift(ONE);
        let x = solve_shifted(&a, t, C64::new(1.0 / s.max(f64::MIN_POSITIVE), 0.0))?;
        acc.axpy(C64::new(w, 0.0), &x);
    }
    Ok(acc)
}

/// aI + bA + Σ wᵢA(A + sᵢ)⁻¹.
pub fn stieltjes_apply(psi: &StieltjesTriple, a: &CMatrix) -> Result<CMatrix> {
    let n = a.dim();
    let mut acc = CMatrix::identity(n).scale(C64::new(psi.a, 0.0));
    acc.axpy(C64::new(psi.b, 0.0), a);
    for (s, w) in psi.mu.atoms() {
        let x = solve_shifted(&a.shift(C64::new(s, 0.0)), a, C64::new(-s, 0.0))?;
        acc.axpy(C64::new(w, 0.0), &x);
    }
    Ok(acc)
}

/// h(T) for a disc function spec.
pub fn apply_function(f: &FunctionSpec, t: &CMatrix, tol: f64) -> Result<Applied> {
    match f {
        FunctionSpec::Convex(c) => wiener_apply(&Series::Convex(c.clone()), t, tol),
        FunctionSpec::Hausdorff(h) => {
            let h = f.as_hausdorff(0).map(|_| h)?;
            let mut out = generator_apply(&Generator::Hausdorff(h.clone()), t)?;
            out.power_bound = power_bound(t, 64)?;
            Ok(out)
        }
        FunctionSpec::Named(fam) => {
            fam.validate()?;
            let s = fam.coeffs(2000)?;
            wiener_apply(&s, t, tol)
        }
        FunctionSpec::Stieltjes(p) => {
            // h(T) = I − ψ(I − T)
            let a = t.scale(C64::new(-1.0, 0.0)).shift(ONE);
            let psi = stieltjes_apply(p, &a)?;
            let x = psi.scale(C64::new(-1.0, 0.0)).shift(ONE);
            let bound = f64::EPSILON * 64.0 * (1.0 + x.frobenius()) * (p.mu.len() as f64 + 1.0);
            Ok(Applied { matrix: x, bound, terms: 0, power_bound: power_bound(t, 64)?, method: ApplyMethod::AtomSum })
        }
        FunctionSpec::NPPlus(_) => Err(Error::Unsupported("NP+ representations act on sectorial operators, not on the disc".into())),
    }
}

/// C(T) = (I − T)(I + T)⁻¹.
pub fn cayley_op(t: &CMatrix) -> Result<CMatrix> {
    let minus = t.scale(C64::new(-1.0, 0.0)).shift(ONE);
    solve_shifted(&t.shift(ONE), &minus, C64::new(-1.0, 0.0))
}

/// g_ε(T) = ((2 − ε)T − εI)((2 + ε)I + εT)⁻¹.
pub fn g_eps_op(t: &CMatrix, eps: f64) -> Result<CMatrix> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(invalid(format!("g_eps parameter {eps} outside (0,1)")));
    }
    let num = t.scale(C64::new(2.0 - eps, 0.0)).shift(C64::new(-eps, 0.0));
    let den = t.scale(C64::new(eps, 0.0)).shift(C64::new(2.0 + eps, 0.0));
    solve_shifted(&den, &num, C64::new(-(2.0 + eps) / eps, 0.0))
}

/// Positively oriented integration contour.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ContourSpec {
    Circle { center: C64, radius: f64, nodes: usize },
    /// Boundary of {inner ≤ |z| ≤ outer, |arg z| ≤ angle}
    SectorBoundary { angle: f64, inner_radius: f64, outer_radius: f64, nodes: usize },
}

impl ContourSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ContourSpec::Circle { radius, nodes, center } => {
                if nodes < 16 {
                    return Err(invalid("contour needs at least 16 nodes"));
                }
                if !(radius > 0.0 && radius.is_finite()) || !center.is_finite() {
                    return Err(invalid("circle radius must be positive and finite"));
                }
            }
            ContourSpec::SectorBoundary { angle, inner_radius, outer_radius, nodes } => {
                if nodes < 16 {
                    return Err(invalid("contour needs at least 16 nodes"));
                }
                if !(angle > 0.0 && angle < PI) {
                    return Err(invalid("sector contour angle must lie in (0, π)"));
                }
                if !(inner_radius > 0.0 && outer_radius > inner_radius && outer_radius.is_finite()) {
                    return Err(invalid("sector contour needs 0 < inner < outer"));
                }
            }
        }
        Ok(())
    }

    /// Nodes zₖ and weights wₖ with Σ wₖ g(zₖ) ≈ ∮ g(z) dz.
    pub fn nodes(&self) -> Result<Vec<(C64, C64)>> {
        self.validate()?;
        match *self {
            ContourSpec::Circle { center, radius, nodes } => Ok((0..nodes)
                .map(|k| {
                    let e = C64::from_polar(1.0, 2.0 * PI * k as f64 / nodes as f64);
                    (center + e * radius, C64::new(0.0, 2.0 * PI / nodes as f64) * e * radius)
                })
                .collect()),
            ContourSpec::SectorBoundary { angle, inner_radius, outer_radius, nodes } => {
                let per = nodes / 4;
                let mut out = Vec::with_capacity(4 * per);
                let ratio = (outer_radius / inner_radius).ln();
                let (u, g) = gauss_legendre_on(0.0, 1.0, per);
                let lower = C64::from_polar(1.0, -angle);
                let upper = C64::from_polar(1.0, angle);
                // lower ray outward, r = inner·(outer/inner)^u
                for (u, g) in u.iter().zip(&g) {
                    let r = inner_radius * (ratio * u).exp();
                    out.push((lower * r, lower * (r * ratio * g)));
                }
                // outer arc counterclockwise
                let (p, gp) = gauss_legendre_on(-angle, angle, per);
                for (p, g) in p.iter().zip(&gp) {
                    let z = C64::from_polar(outer_radius, *p);
                    out.push((z, C64::new(0.0, *g) * z));
                }
                // upper ray inward
                for (u, g) in u.iter().zip(&g).rev() {
                    let r = inner_radius * (ratio * u).exp();
                    out.push((upper * r, -upper * (r * ratio * g)));
                }
                // inner arc clockwise
                for (p, g) in p.iter().zip(&gp).rev() {
                    let z = C64::from_polar(inner_radius, *p);
                    out.push((z, -C64::new(0.0, *g) * z));
                }
                Ok(out)
            }
        }
    }
}

/// (1/2πi)∮ f(z)(zI − A)⁻¹ dz.
pub fn riesz_dunford(f: &dyn Fn(C64) -> Result<C64>, a: &CMatrix, contour: &ContourSpec) -> Result<CMatrix> {
    let n = a.dim();
    let mut acc = CMatrix::zeros(n);
    let neg = a.scale(C64::new(-1.0, 0.0));
    for (z, w) in contour.nodes()? {
        let r = inverse_at(&neg.shift(z), z)?;
        acc.axpy(f(z)? * w / C64::new(0.0, 2.0 * PI), &r);
    }
    Ok(acc)
}

/// max |arg λ| over σ(A); errors if σ(A) meets (−∞, 0].
pub fn spectral_angle(a: &CMatrix) -> Result<f64> {
    let ev = eigenvalues(a)?;
    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    let mut worst = 0.0f64;
    for l in ev {
        if l.norm() <= 1e-13 * scale || (l.im.abs() <= 1e-13 * scale && l.re < 0.0) {
            return Err(Error::Domain(format!(
                "spectrum meets the cut (−∞, 0] at {l}; shift to A + εI first"
            )));
        }
        worst = worst.max(l.arg().abs());
    }
    Ok(worst)
}

/// Principal power A^q, q > 0, for σ(A) off (−∞, 0].
///
/// The fractional part r uses A^r = (sin πr/π)∫ e^{rx}A(eˣI + A)⁻¹ dx, summed
/// with the trapezoidal rule on ℝ and closed-form geometric tails.
pub fn frac_power(a: &CMatrix, q: f64) -> Result<CMatrix> {
    if !(q > 0.0 && q.is_finite()) {
        return Err(invalid(format!("power {q} must be positive")));
    }
    let theta = spectral_angle(a)?;
    let whole = q.floor() as usize;
    let r = q - whole as f64;
    let n = a.dim();
    let mut out = CMatrix::identity(n);
    for _ in 0..whole {
        out = out.matmul(a);
    }
    if r < 1e-15 {
        return Ok(out);
    }
    let an = operator_norm(a, 1e-8);
    let ainv = inverse_at(a, C64::new(0.0, 0.0))?;
    let ain = operator_norm(&ainv, 1e-8);
    // the integrand has poles at Im x = ±(π − |arg λ|)
    let d = (PI - theta).max(0.02);
    let h = 2.0 * PI * d / 38.0;
    let x0 = -ain.ln() - 30.0;
    let x1 = an.ln() + 30.0;
    let k = ((x1 - x0) / h).ceil() as usize;
    if k > 200_000 {
        return Err(Error::NoConvergence { what: "fractional power quadrature".into(), iterations: k });
    }
    let mut acc = CMatrix::zeros(n);
    for j in 0..=k {
        let x = x0 + j as f64 * h;
        let ex = x.exp();
        let y = solve_shifted(&a.shift(C64::new(ex, 0.0)), a, C64::new(-ex, 0.0))?;
        acc.axpy(C64::new(h * (r * x).exp(), 0.0), &y);
    }
    // tails: A(eˣ + A)⁻¹ ≈ I for x < x0 and ≈ e^{−x}A for x > x_k
    let xk = x0 + k as f64 * h;
    let left = h * (r * x0).exp() * (-r * h).exp() / (1.0 - (-r * h).exp());
    let right = h * ((r - 1.0) * xk).exp() * ((r - 1.0) * h).exp() / (1.0 - ((r - 1.0) * h).exp());
    acc = acc.shift(C64::new(left, 0.0));
    acc.axpy(C64::new(right, 0.0), a);
    let frac = acc.scale(C64::new((PI * r).sin() / PI, 0.0));
    Ok(if whole == 0 { frac } else { out.matmul(&frac) })
}

/// Parameters for the resolvent representation through A^q.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RqConfig {
    pub q: f64,
    /// Circle radius; None means 2^q‖A^q‖.
    pub radius: Option<f64>,
    pub segment_nodes: usize,
    pub circle_nodes: usize,
}

impl RqConfig {
    pub fn new(q: f64) -> Self {
        Self { q, radius: None, segment_nodes: 200, circle_nodes: 256 }
    }
}

/// Half-plane evaluation used by the resolvent representation.
fn half_plane_value(f: &FunctionSpec, lambda: C64) -> Result<C64> {
    f.eval_half_plane(lambda)
}

/// Precomputed nodes and A^q-resolvents; reusable across z.
pub struct RqSolver {
    n: usize,
    q: f64,
    /// (weight·q/π·Im f₊·t^{q−1}, f₊, f₋, (A^q + t^q)⁻¹)
    segment: Vec<(f64, C64, C64, CMatrix)>,
    /// (weight/2π·μ, f(μ^{1/q}), (μ − A^q)⁻¹)
    circle: Vec<(C64, C64, CMatrix)>,
    pub radius: f64,
    pub aq_norm: f64,
}

/// Gauss-Legendre panels on [T/2^{k+1}, T/2^k] plus [0, T/2^P]; panel order
/// and depth both grow like √total so doubling the budget refines every panel.
fn graded_nodes(top: f64, total: usize) -> Vec<(f64, f64)> {
    let per = ((2.0 * total as f64).sqrt().round() as usize).max(4);
    let panels = (total / per).max(2) - 1;
    let mut out = Vec::with_capacity((panels + 1) * per);
    let mut hi = top;
    for _ in 0..panels {
        let lo = hi / 2.0;
        let (x, w) = gauss_legendre_on(lo, hi, per);
        out.extend(x.into_iter().zip(w));
        hi = lo;
    }
    let (x, w) = gauss_legendre_on(0.0, hi, per);
    out.extend(x.into_iter().zip(w));
    out
}

impl RqSolver {
    pub fn new(f: &FunctionSpec, a: &CMatrix, cfg: &RqConfig) -> Result<Self> {
        let q = cfg.q;
        if !(q > 0.0 && q.is_finite()) {
            return Err(invalid(format!("q = {q} must be positive")));
        }
        if cfg.segment_nodes < 16 || cfg.circle_nodes < 16 {
            return Err(invalid("quadrature needs at least 16 nodes per part"));
        }
        let alpha = spectral_angle(a).map_err(|e| match e {
            Error::Domain(m) => Error::Domain(format!("{m} (0 must not be an eigenvalue; use the ε-shift A + εI)")),
            e => e,
        })?;
        if alpha >= PI / q {
            return Err(invalid(format!(
                "q = {q} inadmissible: spectral angle {alpha:.6} is not below π/q = {:.6}",
                PI / q
            )));
        }
        let theta1 = match f {
            FunctionSpec::Convex(_) => Some(PI / 2.0),
            FunctionSpec::NPPlus(r) => Some(r.theta1),
            _ => None,
        };
        if let Some(t1) = theta1 {
            if q <= PI / t1 {
                return Err(invalid(format!("q = {q} inadmissible: must exceed π/θ₁ = {:.6}", PI / t1)));
            }
        }
        let n = a.dim();
        let aq = frac_power(a, q)?;
        let aq_norm = operator_norm(&aq, 1e-10);
        let radius = cfg.radius.unwrap_or(2f64.powf(q) * aq_norm);
        if !(radius > aq_norm) {
            return Err(invalid("circle radius must exceed ‖A^q‖"));
        }
        let top = radius.powf(1.0 / q);
        let up = C64::from_polar(1.0, PI / q);
        let down = up.conj();
        let mut segment = Vec::with_capacity(cfg.segment_nodes + 8);
        for (t, w) in graded_nodes(top, cfg.segment_nodes) {
            let fp = half_plane_value(f, up * t)?;
            let fm = half_plane_value(f, down * t)?;
            let tq = t.powf(q);
            let r = solve_shifted(&aq.shift(C64::new(tq, 0.0)), &CMatrix::identity(n), C64::new(-tq, 0.0))?;
            let scale = w * q / PI * fp.im * t.powf(q - 1.0);
            segment.push((scale, fp, fm, r));
        }
        let neg = aq.scale(C64::new(-1.0, 0.0));
        let (phi, gw) = gauss_legendre_on(-PI, PI, cfg.circle_nodes);
        let mut circle = Vec::with_capacity(cfg.circle_nodes);
        for (p, w) in phi.iter().zip(&gw) {
            let mu = C64::from_polar(radius, *p);
            let fv = half_plane_value(f, C64::from_polar(top, p / q))?;
            let r = inverse_at(&neg.shift(mu), mu)?;
            circle.push((mu * (w / (2.0 * PI)), fv, r));
        }
        Ok(Self { n, q, segment, circle, radius, aq_norm })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// Quadrature value of (zI + f(A))⁻¹.
    pub fn resolvent(&self, z: C64) -> Result<CMatrix> {
        let mut acc = CMatrix::zeros(self.n);
        for (s, fp, fm, r) in &self.segment {
            let d = (z + fp) * (z + fm);
            if d.norm() == 0.0 {
                return Err(Error::Singular { z });
            }
            acc.axpy(C64::new(*s, 0.0) / d, r);
        }
        for (m, fv, r) in &self.circle {
            let d = z + fv;
            if d.norm() == 0.0 {
                return Err(Error::Singular { z });
            }
            acc.axpy(m / d, r);
        }
        Ok(acc)
    }
}

/// Result of the resolvent representation with an optional residual check.
#[derive(Debug, Clone, PartialEq)]
pub struct RqResult {
    pub matrix: CMatrix,
    /// ‖(zI + f(A))·result − I‖_F when f(A) is available by another route.
    pub residual: Option<f64>,
}

/// (zI + f(A))⁻¹ through A^q; see [`RqSolver`] to reuse nodes across z.
pub fn rq_resolvent(f: &FunctionSpec, a: &CMatrix, z: C64, cfg: &RqConfig) -> Result<RqResult> {
    let solver = RqSolver::new(f, a, cfg)?;
    let matrix = solver.resolvent(z)?;
    let residual = half_plane_matrix(f, a).ok().map(|fa| fa.shift(z).matmul(&matrix).shift(-ONE).frobenius());
    Ok(RqResult { matrix, residual })
}

/// f(A) for half-plane specs with a direct matrix route: 𝐡(A) = I − h(C(A)), ψ(A) by atoms.
pub fn half_plane_matrix(f: &FunctionSpec, a: &CMatrix) -> Result<CMatrix> {
    match f {
        FunctionSpec::Convex(c) => {
            let ca = cayley_op(a)?;
            let h = wiener_apply(&Series::Convex(c.clone()), &ca, 1e-12)?;
            Ok(h.matrix.scale(-ONE).shift(ONE))
        }
        FunctionSpec::Stieltjes(p) => stieltjes_apply(p, a),
        _ => Err(Error::Unsupported("no direct matrix route for this function".into())),
    }
}

/// Which explicit sectoriality constant to evaluate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SectConstant {
    General { q: f64, gamma: f64, mq: f64, m: f64, b: f64, c: f64 },
    /// 𝐡 of a convex series; b and C derived from ‖A‖.
    BoldH { q: f64, gamma: f64, mq: f64, a_norm: f64 },
    /// Complete Bernstein function with sector data θ, θ₀.
    Cbf { q: f64, gamma: f64, mq: f64, theta: f64, theta0: f64 },
}

/// c_{q,γ} = qM_q·m/(C·b·π·cos²((π/q+γ)/2)) + 2/cos((π/q+γ)/2).
pub fn sect_constant(kind: &SectConstant) -> Result<f64> {
    let general = |q: f64, gamma: f64, mq: f64, m: f64, b: f64, c: f64| -> Result<f64> {
        let k = ((PI / q + gamma) / 2.0).cos();
        if !(k > 0.0) {
            return Err(invalid(format!("inadmissible pair q = {q}, γ = {gamma}: cos((π/q+γ)/2) ≤ 0")));
        }
        if !(b > 0.0 && c > 0.0) {
            return Err(invalid("b and C must be positive"));
        }
        Ok(q * mq * m / (c * b * PI * k * k) + 2.0 / k)
    };
    match *kind {
        SectConstant::General { q, gamma, mq, m, b, c } => general(q, gamma, mq, m, b, c),
        SectConstant::BoldH { q, gamma, mq, a_norm } => {
            let b = boldh_b(q, a_norm);
            // θ₁ = θ₂ = π/2: C = b·cos(π/q), m = π/2
            general(q, gamma, mq, PI / 2.0, b, b * (PI / q).cos())
        }
        SectConstant::Cbf { q, gamma, mq, theta, theta0 } => {
            let c = (PI * PI / (2.0 * theta * q)).cos().powf(2.0 * theta0 / PI);
            general(q, gamma, mq, 2.0 * (PI / (2.0 * q)).tan(), 1.0, c)
        }
    }
}

/// b = cos(π/q)/(1 + 4‖A‖²).
pub fn boldh_b(q: f64, a_norm: f64) -> f64 {
    (PI / q).cos() / (1.0 + 4.0 * a_norm * a_norm)
}

/// max over a log grid λ ∈ [lo, hi] of ‖λ(λI + (A + εI)^q)⁻¹‖.
pub fn mq_estimate(a: &CMatrix, q: f64, eps: f64, lo: f64, hi: f64, points: usize) -> Result<f64> {
    if !(lo > 0.0 && hi > lo && points >= 2) {
        return Err(invalid("log grid needs 0 < lo < hi and at least 2 points"));
    }
    let shifted = a.shift(C64::new(eps, 0.0));
    let p = frac_power(&shifted, q)?;
    let n = a.dim();
    let mut best = 0.0f64;
    for k in 0..points {
        let l = lo * (hi / lo).powf(k as f64 / (points - 1) as f64);
        let lam = C64::new(l, 0.0);
        let m = p.shift(lam);
        let lu = Lu::factor(&m).ok_or(Error::Singular { z: -lam })?;
        let r = lu.solve_mat(&CMatrix::identity(n).scale(lam));
        if !r.is_finite() {
            return Err(Error::Singular { z: -lam });
        }
        best = best.max(operator_norm(&r, 1e-10));
    }
    Ok(best)
}

/// Default Wiener evaluation of a convex series at tolerance 1e-12.
pub fn convex_apply(c: &ConvexSeries, t: &CMatrix) -> Result<CMatrix> {
    Ok(wiener_apply(&Series::Convex(c.clone()), t, 1e-12)?.matrix)
}

/// ψ(A) for a Stieltjes triple, by contour integration (cross-check route).
pub fn cbf_contour(psi: &StieltjesTriple, a: &CMatrix, contour: &ContourSpec) -> Result<CMatrix> {
    riesz_dunford(&|z| cbf_eval(psi, z), a, contour)
}
