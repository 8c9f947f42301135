//! Seeded property suites: sampled sector and Cayley inequalities, measure
//! round trips, matrix calculus identities and region
//! geometry. Each property reports its sample count and worst case.

use crate::error::invalid;
use crate::diagnostics::{angle_estimates, ritt_constant_refined, GridConfig};
use crate::funclasses::{
    bold_h_eval, cbf_deriv, cbf_eval, cbf_to_hausdorff, convex_eval, hausdorff_coeffs, hausdorff_eval, hausdorff_to_cbf,
    random_convex_series, alpha_average, ConvexSeries, DiscreteMeasure, FunctionSpec, HausdorffSpec, NamedFamily, Series,
    StieltjesTriple, Support, ZetaLEval,
};
use crate::linalg::{eigenvalues, operator_norm, CMatrix, Lu};
use crate::opcalc::{apply_function, cayley_op, g_eps_op, hausdorff_apply, riesz_dunford, wiener_apply, ContourSpec};
use crate::prelude::*;
use crate::regions::{cayley, min_distance_ratio, stolz_boundary_radius, stolz_index, stolz_to_sector_angle};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Suite names accepted by [`run_suite`]. `appendix_a` runs [`disc_inequalities`],
/// `appendix_b` runs [`sector_inclusions`].
pub const SUITES: [&str; 5] = ["appendix_a", "appendix_b", "measures", "calculus", "geometry"];

/// Default seed for every suite.
pub const DEFAULT_SEED: u64 = 0x5eed_2024;

/// Outcome of one sampled property.
#[derive(Debug, Clone, PartialEq)]
pub struct PropertyResult {
    pub suite: &'static str,
    pub name: &'static str,
    pub samples: usize,
    pub violations: usize,
    /// largest excess (inequalities) or error (identities) seen
    pub worst: f64,
    pub tolerance: f64,
    pub worst_at: String,
    pub pass: bool,
}

struct Tracker {
    suite: &'static str,
    name: &'static str,
    tol: f64,
    samples: usize,
    violations: usize,
    worst: f64,
    worst_at: String,
    failed: Option<String>,
}

impl Tracker {
    fn new(suite: &'static str, name: &'static str, tol: f64) -> Self {
        Self { suite, name, tol, samples: 0, violations: 0, worst: f64::NEG_INFINITY, worst_at: String::new(), failed: None }
    }

    /// Records `excess`; the sample violates when excess > tol or is NaN.
    fn record(&mut self, excess: f64, at: impl FnOnce() -> String) {
        self.samples += 1;
        let bad = excess.is_nan() || excess > self.tol;
        if bad {
            self.violations += 1;
        }
        if excess.is_nan() || excess > self.worst || (bad && self.worst <= self.tol) {
            self.worst = if excess.is_nan() { f64::INFINITY } else { excess };
            self.worst_at = at();
        }
    }

    fn fail(&mut self, e: Error, at: String) {
        self.samples += 1;
        self.violations += 1;
        self.worst = f64::INFINITY;
        if self.failed.is_none() {
            self.failed = Some(format!("{at}: {e}"));
        }
    }

    fn finish(self) -> PropertyResult {
        let worst_at = match self.failed {
            Some(f) => f,
            None => self.worst_at,
        };
        PropertyResult {
            suite: self.suite,
            name: self.name,
            samples: self.samples,
            violations: self.violations,
            worst: if self.samples == 0 { 0.0 } else { self.worst },
            tolerance: self.tol,
            worst_at,
            pass: self.violations == 0 && self.samples > 0,
        }
    }
}

fn rng(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn uniform(r: &mut ChaCha8Rng, a: f64, b: f64) -> f64 {
    a + (b - a) * r.gen::<f64>()
}

fn log_uniform(r: &mut ChaCha8Rng, a: f64, b: f64) -> f64 {
    (uniform(r, a.ln(), b.ln())).exp()
}

/// Uniform point in the disc |z| ≤ rmax.
fn disc_point(r: &mut ChaCha8Rng, rmax: f64) -> C64 {
    C64::from_polar(rmax * r.gen::<f64>().sqrt(), uniform(r, -PI, PI))
}

/// Point of the closed sector Σ̄_ω, a fifth of them on its edges.
fn sector_point(r: &mut ChaCha8Rng, omega: f64) -> C64 {
    let m = log_uniform(r, 1e-3, 1e3);
    let a = if r.gen::<f64>() < 0.2 {
        if r.gen::<bool>() { omega } else { -omega }
    } else {
        uniform(r, -omega, omega)
    };
    C64::from_polar(m, a)
}

/// Point of S_σ: 1 − ρe^{iα} with ρ below the boundary radius.
fn stolz_point(r: &mut ChaCha8Rng, sigma: f64) -> C64 {
    let amax = (1.0 / sigma).acos();
    loop {
        let a = uniform(r, -amax, amax);
        if let Some(rho) = stolz_boundary_radius(sigma, a) {
            let z = ONE - C64::from_polar(rho * r.gen::<f64>(), a);
            if z.norm() < 1.0 {
                return z;
            }
        }
    }
}

fn random_matrix(r: &mut ChaCha8Rng, n: usize, scale: f64) -> CMatrix {
    let data = (0..n * n).map(|_| C64::new(uniform(r, -scale, scale), uniform(r, -scale, scale))).collect();
    CMatrix::new(n, data).expect("square")
}

/// V D V⁻¹ with V = I + 0.2·noise, so V is well conditioned.
fn diagonalizable(r: &mut ChaCha8Rng, d: &[C64]) -> Result<CMatrix> {
    let n = d.len();
    let v = random_matrix(r, n, 0.2 / (n as f64).sqrt()).shift(ONE);
    let lu = Lu::factor(&v).ok_or_else(|| Error::Singular { z: C64::new(0.0, 0.0) })?;
    Ok(v.matmul(&CMatrix::from_diag(d)).matmul(&lu.inverse()))
}

/// Greedy matching of two multisets by globally shortest pairs; returns the largest matched distance.
pub fn multiset_distance(a: &[C64], b: &[C64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(a.len() * b.len());
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            pairs.push(((x - y).norm(), i, j));
        }
    }
    pairs.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap_or(core::cmp::Ordering::Equal));
    let mut ua = vec![false; a.len()];
    let mut ub = vec![false; b.len()];
    let mut worst = 0.0f64;
    for (d, i, j) in pairs {
        if !ua[i] && !ub[j] {
            ua[i] = true;
            ub[j] = true;
            worst = worst.max(d);
        }
    }
    worst
}

/// Hausdorff distance between two finite point sets.
pub fn hausdorff_distance(a: &[C64], b: &[C64]) -> f64 {
    let one_way = |p: &[C64], q: &[C64]| {
        p.iter().map(|x| q.iter().map(|y| (x - y).norm()).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}

/// Regular atoms-only Hausdorff function with `k` atoms in [lo, hi].
fn random_hausdorff(r: &mut ChaCha8Rng, k: usize, lo: f64, hi: f64) -> Result<HausdorffSpec> {
    let pts: Vec<f64> = (0..k).map(|_| uniform(r, lo, hi)).collect();
    let raw: Vec<f64> = (0..k).map(|_| uniform(r, 0.1, 1.0)).collect();
    let mass: f64 = pts.iter().zip(&raw).map(|(t, w)| w / (1.0 - t)).sum();
    let wts = raw.iter().map(|w| w / mass).collect();
    HausdorffSpec::new(0.0, DiscreteMeasure::new(pts, wts, Support::UnitInterval)?)
}

fn random_cbf(r: &mut ChaCha8Rng, k: usize) -> Result<StieltjesTriple> {
    let pts = (0..k).map(|_| log_uniform(r, 1e-3, 1e3)).collect();
    let wts = (0..k).map(|_| r.gen::<f64>()).collect();
    StieltjesTriple::new(r.gen::<f64>(), r.gen::<f64>(), DiscreteMeasure::new(pts, wts, Support::HalfLine)?)
}

/// Runs one suite by name.
pub fn run_suite(name: &str, seed: u64) -> Result<Vec<PropertyResult>> {
    match name {
        "appendix_a" => Ok(disc_inequalities(seed)),
        "appendix_b" => Ok(sector_inclusions(seed)),
        "measures" => Ok(measures(seed)),
        "calculus" => Ok(calculus(seed)),
        "geometry" => Ok(geometry(seed)),
        "all" => Ok(SUITES.iter().flat_map(|s| run_suite(s, seed).unwrap_or_default()).collect()),
        other => Err(invalid(format!("unknown suite {other:?}; expected one of {SUITES:?} or \"all\""))),
    }
}

/// Brute-force min over φ of |z − e^{iφ}|/|1 − e^{iφ}| on `grid` points.
pub fn lfir_brute(z: C64, grid: usize) -> f64 {
    let mut best = f64::INFINITY;
    for j in 0..grid {
        let phi = -PI + 2.0 * PI * (j as f64 + 0.5) / grid as f64;
        let e = C64::from_polar(1.0, phi);
        best = best.min((z - e).norm() / (ONE - e).norm());
    }
    best
}

/// Disc-geometry inequalities: distance ratio, sum of sector points, Cayley
/// contraction, derivative bounds for Cayley powers, convex and CBF families.
pub fn disc_inequalities(seed: u64) -> Vec<PropertyResult> {
    const S: &str = "appendix_a";
    let mut out = Vec::new();

    let mut r = rng(seed, 1);
    let mut t = Tracker::new(S, "lfir_closed_form", 1e-6);
    for _ in 0..20 {
        let z = disc_point(&mut r, 0.9);
        match min_distance_ratio(z) {
            Ok(closed) => {
                let brute = lfir_brute(z, 100_000);
                t.record((brute - closed).abs() / closed, || format!("z={z}"));
            }
            Err(e) => t.fail(e, format!("z={z}")),
        }
    }
    out.push(t.finish());

    let mut r = rng(seed, 2);
    let mut t = Tracker::new(S, "sector_sum", 1e-12);
    for (g, b) in [(PI / 4.0, PI / 4.0), (PI / 3.0, PI / 2.0 - 0.1), (0.1, 0.1)] {
        for _ in 0..10_000 {
            let z = sector_point(&mut r, g);
            let l = sector_point(&mut r, b);
            let s = z.norm() + l.norm();
            let excess = (((g + b) / 2.0).cos() * s - (z + l).norm()) / s;
            t.record(excess, || format!("γ={g} β={b} z={z} λ={l}"));
        }
    }
    out.push(t.finish());

    let mut r = rng(seed, 3);
    let mut est1 = Tracker::new(S, "cayley_contraction", 1e-13);
    let mut c0 = Tracker::new(S, "cayley_denominator", 1e-13);
    for rr in [1.0, 5.0, 20.0] {
        for _ in 0..3_334 {
            let rad = rr * r.gen::<f64>();
            let beta = uniform(&mut r, 0.0, PI / 2.0);
            let b = beta.cos() / (1.0 + rr * rr);
            let l = C64::from_polar(rad, beta);
            let lhs = ((ONE - l) / (ONE + l)).norm();
            let rhs = (1.0 - b * rad) / (1.0 + b * rad);
            est1.record(lhs - rhs, || format!("R={rr} r={rad} β={beta}"));
            let lhs = 1.0 / (ONE + l).norm_sqr();
            let rhs = 1.0 / (1.0 + b * rad).powi(2);
            c0.record((lhs - rhs) / rhs, || format!("R={rr} r={rad} β={beta}"));
        }
    }
    out.push(est1.finish());
    out.push(c0.finish());

    let mut r = rng(seed, 4);
    let mut t = Tracker::new(S, "cayley_power_imaginary_part", 1e-13);
    for _ in 0..10_000 {
        let n = r.gen_range(1..=50);
        let rr = [1.0, 5.0, 20.0][r.gen_range(0..3)];
        let rad = rr * r.gen::<f64>();
        let beta = uniform(&mut r, 0.0, PI / 2.0);
        let b = beta.cos() / (1.0 + rr * rr);
        let l = C64::from_polar(rad, beta);
        let im = ((ONE - l) / (ONE + l)).powi(n).im.abs();
        let x = b * rad;
        let deriv = 2.0 * n as f64 * ((1.0 - x) / (1.0 + x)).powi(n - 1) / (1.0 + x).powi(2);
        let rhs = PI / 2.0 * rad * deriv;
        t.record((im - rhs) / rhs.max(f64::MIN_POSITIVE), || format!("n={n} R={rr} r={rad} β={beta}"));
    }
    out.push(t.finish());

    let mut r = rng(seed, 5);
    let mut t = Tracker::new(S, "convex_half_plane_imaginary_part", 1e-6);
    for _ in 0..10 {
        let c = random_convex_series(&mut r, 8);
        for _ in 0..1_000 {
            let rr = if r.gen::<bool>() { 1.0 } else { 10.0 };
            let rad = rr * uniform(&mut r, 1e-3, 1.0);
            let beta = uniform(&mut r, 0.0, PI / 2.0 - 1e-3);
            let b = beta.cos() / (1.0 + rr * rr);
            let x = b * rad;
            let h = 1e-6;
            let res = (|| -> Result<(f64, f64)> {
                let im = bold_h_eval(&c, C64::from_polar(rad, beta))?.im.abs();
                let d = (bold_h_eval(&c, C64::new(x + h, 0.0))?.re - bold_h_eval(&c, C64::new(x - h, 0.0))?.re) / (2.0 * h);
                Ok((im, d))
            })();
            match res {
                Ok((im, d)) => {
                    let rhs = PI / 2.0 * rad * d;
                    t.record((im - rhs) / rhs.max(1e-300), || format!("R={rr} r={rad} β={beta}"));
                }
                Err(e) => t.fail(e, format!("R={rr} r={rad} β={beta}")),
            }
        }
    }
    out.push(t.finish());

    let mut r = rng(seed, 6);
    let mut t = Tracker::new(S, "cbf_imaginary_part", 1e-12);
    let mut psi = StieltjesTriple { a: 0.0, b: 1.0, mu: DiscreteMeasure::empty(Support::HalfLine) };
    for k in 0..10_000 {
        if k % 100 == 0 {
            if let Ok(p) = random_cbf(&mut r, 5) {
                psi = p;
            }
        }
        let tt = log_uniform(&mut r, 1e-3, 1e3);
        let beta = uniform(&mut r, -PI + 1e-6, PI - 1e-6);
        let res = cbf_eval(&psi, C64::from_polar(tt, beta)).and_then(|v| Ok((v.im.abs(), cbf_deriv(&psi, tt)?)));
        match res {
            Ok((im, d)) => {
                let rhs = 2.0 * tt * (beta / 2.0).tan().abs() * d;
                t.record((im - rhs) / rhs.max(1e-300), || format!("t={tt} β={beta}"));
            }
            Err(e) => t.fail(e, format!("t={tt} β={beta}")),
        }
    }
    out.push(t.finish());
    out
}

/// Sector inclusions for the polylogarithm family and for (λ − 1)/log λ.
pub fn sector_inclusions(seed: u64) -> Vec<PropertyResult> {
    const S: &str = "appendix_b";
    let mut out = Vec::new();
    let names = ["polylog_sector_0.25", "polylog_sector_0.5", "polylog_sector_0.75"];
    for (k, alpha) in [0.25, 0.5, 0.75].into_iter().enumerate() {
        let mut r = rng(seed, 10 + k as u64);
        let z = ZetaLEval::new(alpha);
        let mut t = Tracker::new(S, names[k], 1e-10);
        let bound = alpha * PI / 2.0;
        for _ in 0..10_000 {
            let l = if r.gen::<f64>() < 0.3 {
                C64::from_polar(1.0, uniform(&mut r, -PI, PI))
            } else {
                disc_point(&mut r, 1.0)
            };
            if (ONE - l).norm() < 1e-12 {
                continue;
            }
            let v = z.one_minus_l(l);
            t.record(v.arg().abs() - bound, || format!("λ={l}"));
        }
        out.push(t.finish());
    }

    let mut r = rng(seed, 20);
    let mut t = Tracker::new(S, "log_quotient_sector", 1e-12);
    for _ in 0..10_000 {
        let rad = if r.gen::<f64>() < 0.3 { 1.0 - 10f64.powf(-uniform(&mut r, 1.0, 12.0)) } else { r.gen::<f64>().sqrt() };
        let l = ONE + C64::from_polar(rad, uniform(&mut r, -PI, PI));
        if (l - ONE).norm() < 1e-12 {
            continue;
        }
        let v = (l - ONE) / l.ln();
        t.record(v.arg().abs() - PI / 3.0, || format!("λ={l}"));
    }
    out.push(t.finish());
    out
}

/// Measure push-forwards, coefficient oracles and named-family cross-checks.
pub fn measures(seed: u64) -> Vec<PropertyResult> {
    const S: &str = "measures";
    let mut out = Vec::new();

    let mut r = rng(seed, 30);
    let mut t = Tracker::new(S, "hausdorff_cbf_round_trip", 1e-12);
    for i in 0..20 {
        let res = random_hausdorff(&mut r, 1 + i % 6, 0.01, 0.99).and_then(|h| Ok((h.clone(), cbf_to_hausdorff(&hausdorff_to_cbf(&h)?)?)));
        match res {
            Ok((h, back)) => {
                let mut err = (h.c0 - back.c0).abs();
                for ((p, w), (q, v)) in h.nu.atoms().zip(back.nu.atoms()) {
                    err = err.max((p - q).abs()).max((w - v).abs() / w.max(1e-300));
                }
                if h.nu.len() != back.nu.len() {
                    err = f64::INFINITY;
                }
                t.record(err, || format!("instance {i}"));
            }
            Err(e) => t.fail(e, format!("instance {i}")),
        }
    }
    out.push(t.finish());

    let mut t = Tracker::new(S, "h_alpha_binomial_coefficients", 1e-8);
    match NamedFamily::HAlpha(0.5).hausdorff(200).and_then(|h| hausdorff_coeffs(&h, 50)) {
        Ok(c) => {
            let mut b = 1.0f64;
            for n in 1..=50 {
                b *= (n as f64 - 1.0 - 0.5) / n as f64;
                let want = b.abs();
                t.record((c.coeffs[n] - want).abs(), || format!("n={n}"));
            }
        }
        Err(e) => t.fail(e, "ν_1/2 quadrature".into()),
    }
    out.push(t.finish());

    let mut r = rng(seed, 31);
    let mut t = Tracker::new(S, "hausdorff_series_consistency", 1e-12);
    for i in 0..20 {
        let res = random_hausdorff(&mut r, 4, 0.0, 0.95).and_then(|h| Ok((h.clone(), hausdorff_coeffs(&h, 1200)?)));
        match res {
            Ok((h, c)) => {
                for _ in 0..20 {
                    let l = disc_point(&mut r, 0.9);
                    match (hausdorff_eval(&h, l), convex_eval(&ConvexSeries { generator: None, ..c.clone() }, l, 1e-13)) {
                        (Ok(a), Ok(b)) => t.record((a - b).norm(), || format!("instance {i} λ={l}")),
                        (Err(e), _) | (_, Err(e)) => t.fail(e, format!("instance {i} λ={l}")),
                    }
                }
            }
            Err(e) => t.fail(e, format!("instance {i}")),
        }
    }
    out.push(t.finish());

    let mut r = rng(seed, 32);
    let mut t = Tracker::new(S, "hausdorff_to_cbf_scalar_identity", 1e-10);
    for i in 0..20 {
        let res = random_hausdorff(&mut r, 5, 0.0, 0.99).and_then(|h| Ok((h.clone(), hausdorff_to_cbf(&h)?)));
        match res {
            Ok((h, psi)) => {
                for _ in 0..50 {
                    let l = ONE + disc_point(&mut r, 0.999);
                    match (hausdorff_eval(&h, ONE - l), cbf_eval(&psi, l)) {
                        (Ok(a), Ok(b)) => t.record((ONE - a - b).norm() / b.norm().max(1.0), || format!("instance {i} λ={l}")),
                        (Err(e), _) | (_, Err(e)) => t.fail(e, format!("instance {i} λ={l}")),
                    }
                }
            }
            Err(e) => t.fail(e, format!("instance {i}")),
        }
    }
    out.push(t.finish());

    let mut r = rng(seed, 33);
    let mut t = Tracker::new(S, "cbf_composition", 1e-12);
    for i in 0..20 {
        let (psi, phi) = match (random_cbf(&mut r, 4), random_cbf(&mut r, 4)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => {
                t.fail(e, format!("instance {i}"));
                continue;
            }
        };
        for _ in 0..100 {
            let real = r.gen::<f64>() < 0.3;
            let l = if real { C64::new(log_uniform(&mut r, 1e-3, 1e3), 0.0) } else {
                C64::from_polar(log_uniform(&mut r, 1e-3, 1e3), uniform(&mut r, 0.0, PI / 2.0))
            };
            match cbf_eval(&phi, l).and_then(|v| cbf_eval(&psi, v)) {
                Ok(v) => {
                    let excess = if real { (v.im.abs() - 1e-12 * v.norm()).max(-v.re) } else { -v.im.min(v.re) / v.norm().max(1.0) };
                    t.record(excess, || format!("instance {i} λ={l}"));
                }
                Err(e) => t.fail(e, format!("instance {i} λ={l}")),
            }
        }
    }
    out.push(t.finish());

    let mut t = Tracker::new(S, "h_eps_alpha_average", 1e-8);
    for eps in [0.2, 0.5] {
        match NamedFamily::HEps(eps).coeffs(50) {
            Ok(s) => {
                for n in 1..=50 {
                    let avg = alpha_average(eps, 40, |a| {
                        let mut b = 1.0f64;
                        for k in 1..=n {
                            b *= (k as f64 - 1.0 - a) / k as f64;
                        }
                        b.abs()
                    });
                    t.record((s.coeffs()[n] - avg).abs(), || format!("ε={eps} n={n}"));
                }
            }
            Err(e) => t.fail(e, format!("ε={eps}")),
        }
    }
    out.push(t.finish());

    let mut t = Tracker::new(S, "g_eps_wiener_norm", 1e-12);
    for eps in [0.1, 0.5, 0.9] {
        match NamedFamily::GEps(eps).coeffs(10_000) {
            Ok(Series::Signed(s)) => t.record((s.l1_norm() - 1.0).abs(), || format!("ε={eps}")),
            Ok(_) => t.fail(Error::Inconsistent("g_eps must be signed".into()), format!("ε={eps}")),
            Err(e) => t.fail(e, format!("ε={eps}")),
        }
    }
    out.push(t.finish());

    let mut t = Tracker::new(S, "zeta_coefficient_ratio", 1e-12);
    for alpha in [0.25, 0.5, 0.75] {
        match NamedFamily::ZetaL(alpha).coeffs(4) {
            Ok(s) => {
                let c = s.coeffs();
                t.record((c[1] / c[2] / 2f64.powf(1.0 + alpha) - 1.0).abs(), || format!("α={alpha}"));
            }
            Err(e) => t.fail(e, format!("α={alpha}")),
        }
    }
    out.push(t.finish());
    out
}

fn random_disc_diag(r: &mut ChaCha8Rng, n: usize, rmax: f64) -> Vec<C64> {
    (0..n).map(|_| disc_point(r, rmax)).collect()
}

/// Matrix identities of the series, Cayley and contour calculi.
pub fn calculus(seed: u64) -> Vec<PropertyResult> {
    const S: &str = "calculus";
    let mut out = Vec::new();

    let mut r = rng(seed, 40);
    let mut t = Tracker::new(S, "series_homomorphism", 1e-10);
    for i in 0..20 {
        let f = random_convex_series(&mut r, 6);
        let g = random_convex_series(&mut r, 6);
        let tm = CMatrix::from_diag(&random_disc_diag(&mut r, 6, 1.0));
        let res = (|| -> Result<f64> {
            let fg = wiener_apply(&Series::Convex(f.product(&g)), &tm, 1e-14)?.matrix;
            let a = wiener_apply(&Series::Convex(f.clone()), &tm, 1e-14)?.matrix;
            let b = wiener_apply(&Series::Convex(g.clone()), &tm, 1e-14)?.matrix;
            Ok(fg.sub(&a.matmul(&b)).max_abs())
        })();
        match res {
            Ok(e) => t.record(e, || format!("instance {i}")),
            Err(e) => t.fail(e, format!("instance {i}")),
        }
    }
    out.push(t.finish());

    let mut r = rng(seed, 41);
    let mut t = Tracker::new(S, "spectral_mapping", 1e-7);
    for i in 0..20 {
        let f = random_convex_series(&mut r, 6);
        let d = random_disc_diag(&mut r, 6, 0.95);
        let res = (|| -> Result<f64> {
            let tm = diagonalizable(&mut r, &d)?;
            let ft = wiener_apply(&Series::Convex(f.clone()), &tm, 1e-14)?.matrix;
            let want: Vec<C64> = d.iter().map(|l| convex_eval(&f, *l, 1e-14)).collect::<Result<_>>()?;
            Ok(multiset_distance(&eigenvalues(&ft)?, &want))
        })();
        match res {
            Ok(e) => t.record(e, || format!("instance {i}")),
            Err(e) => t.fail(e, format!("instance {i}")),
        }
    }
    out.push(t.finish());

    let mut r = rng(seed, 42);
    let mut t = Tracker::new(S, "spectral_perturbation", 1e-7);
    for i in 0..20 {
        let d = random_disc_diag(&mut r, 6, 0.95);
        let p: Vec<f64> = (0..4).map(|_| uniform(&mut r, -0.5, 0.5)).collect();
        let res = (|| -> Result<(f64, f64)> {
            let tm = diagonalizable(&mut r, &d)?;
            let mut pt = CMatrix::zeros(6);
            let mut pw = CMatrix::identity(6);
            for c in &p {
                pt.axpy(C64::new(*c, 0.0), &pw);
                pw = pw.matmul(&tm);
            }
            let dist = hausdorff_distance(&eigenvalues(&tm)?, &eigenvalues(&pt)?);
            Ok((dist, operator_norm(&tm.sub(&pt), 1e-12)))
        })();
        match res {
            Ok((dist, norm)) => t.record(dist - norm, || format!("instance {i}")),
            Err(e) => t.fail(e, format!("instance {i}")),
        }
    }
    out.push(t.finish());

    let mut r = rng(seed, 43);
    let mut t = Tracker::new(S, "hausdorff_cbf_matrix_identity", 1e-7);
    for i in 0..20 {
        let res = (|| -> Result<f64> {
            let h = random_hausdorff(&mut r, 5, 0.05, 0.9)?;
            let psi = hausdorff_to_cbf(&h)?;
            let d = random_disc_diag(&mut r, 6, 0.9);
            let tm = CMatrix::from_diag(&d);
            let lhs = hausdorff_apply(&h, &tm)?.scale(-ONE).shift(ONE);
            let a = tm.scale(-ONE).shift(ONE);
            let f = |z: C64| cbf_eval(&psi, z);
            let rhs = riesz_dunford(&f, &a, &ContourSpec::Circle { center: ONE, radius: 0.95, nodes: 1024 })?;
            Ok(lhs.sub(&rhs).max_abs())
        })();
        match res {
            Ok(e) => t.record(e, || format!("instance {i}")),
            Err(e) => t.fail(e, format!("instance {i}")),
        }
    }
    out.push(t.finish());

    let mut r = rng(seed, 44);
    let mut t = Tracker::new(S, "cayley_series_identity", 1e-8);
    for i in 0..20 {
        let c = random_convex_series(&mut r, 8);
        let d: Vec<C64> = (0..6).map(|_| stolz_point(&mut r, 2.0)).collect();
        let res = (|| -> Result<f64> {
            let tm = CMatrix::from_diag(&d);
            let lhs = wiener_apply(&Series::Convex(c.clone()), &tm, 1e-14)?.matrix.scale(-ONE).shift(ONE);
            let ct = cayley_op(&tm)?;
            let mut e = 0.0f64;
            for (k, l) in ct.diag().iter().enumerate() {
                e = e.max((lhs.diag()[k] - bold_h_eval(&c, *l)?).norm());
            }
            Ok(e)
        })();
        match res {
            Ok(e) => t.record(e, || format!("instance {i}")),
            Err(e) => t.fail(e, format!("instance {i}")),
        }
    }
    out.push(t.finish());

    let mut r = rng(seed, 45);
    let mut t = Tracker::new(S, "cayley_involution", 1e-7);
    for i in 0..20 {
        let d = random_disc_diag(&mut r, 6, 0.9);
        let res = (|| -> Result<f64> {
            let tm = diagonalizable(&mut r, &d)?;
            Ok(cayley_op(&cayley_op(&tm)?)?.sub(&tm).max_abs())
        })();
        match res {
            Ok(e) => t.record(e, || format!("instance {i}")),
            Err(e) => t.fail(e, format!("instance {i}")),
        }
    }
    out.push(t.finish());

    let mut r = rng(seed, 46);
    let mut t = Tracker::new(S, "approximant_cayley_shift", 1e-7);
    for i in 0..20 {
        let eps = [0.1, 0.01, 0.5, 0.9][i % 4];
        let d = random_disc_diag(&mut r, 6, 0.9);
        let res = (|| -> Result<f64> {
            let tm = diagonalizable(&mut r, &d)?;
            let lhs = cayley_op(&g_eps_op(&tm, eps)?)?;
            let rhs = cayley_op(&tm)?.shift(C64::new(eps, 0.0));
            Ok(lhs.sub(&rhs).max_abs())
        })();
        match res {
            Ok(e) => t.record(e, || format!("instance {i} ε={eps}")),
            Err(e) => t.fail(e, format!("instance {i} ε={eps}")),
        }
    }
    out.push(t.finish());
    out
}

/// Region inclusions and resolvent-constant relations.
pub fn geometry(seed: u64) -> Vec<PropertyResult> {
    const S: &str = "geometry";
    let mut out = Vec::new();

    let mut r = rng(seed, 50);
    let mut t = Tracker::new(S, "cayley_scalar_involution", 1e-12);
    for _ in 0..10_000 {
        let z = disc_point(&mut r, 1.0);
        match cayley(z).and_then(cayley) {
            Ok(w) => t.record((w - z).norm() / (1.0 + z.norm()) * (ONE + z).norm().min(1.0), || format!("z={z}")),
            Err(e) => t.fail(e, format!("z={z}")),
        }
    }
    out.push(t.finish());

    let mut r = rng(seed, 51);
    let mut t = Tracker::new(S, "stolz_in_sector", 1e-12);
    for sigma in [1.5, 2.0, 5.0] {
        let w = (1.0 / sigma).acos();
        for _ in 0..10_000 {
            let z = stolz_point(&mut r, sigma);
            let a = (ONE - z).arg().abs();
            let c = cayley(z).map(|c| c.arg().abs()).unwrap_or(f64::INFINITY);
            t.record(a.max(c) - w, || format!("σ={sigma} z={z}"));
        }
    }
    out.push(t.finish());

    let mut r = rng(seed, 52);
    let mut t = Tracker::new(S, "distance_ratio_region_in_stolz", 1e-12);
    for q in [0.25, 0.5, 0.9] {
        let mut hit = 0;
        while hit < 3_334 {
            let z = disc_point(&mut r, 1.0);
            if z.norm() >= 1.0 {
                continue;
            }
            let ratio = match min_distance_ratio(z) {
                Ok(v) => v,
                Err(_) => continue,
            };
            if ratio >= q {
                hit += 1;
                match stolz_index(z) {
                    Ok(s) => t.record(s - 1.0 / q, || format!("q={q} z={z}")),
                    Err(e) => t.fail(e, format!("q={q} z={z}")),
                }
            }
        }
    }
    out.push(t.finish());

    let mut r = rng(seed, 53);
    let mut t = Tracker::new(S, "sector_ritt_constant", 0.05);
    for i in 0..5 {
        let d: Vec<C64> = (0..6).map(|_| stolz_point(&mut r, 2.0)).collect();
        let tm = CMatrix::from_diag(&d);
        let c = match ritt_constant_refined(&tm, &GridConfig::default()) {
            Ok(c) => c.value(),
            Err(e) => {
                t.fail(e, format!("instance {i}"));
                continue;
            }
        };
        // δ with C·cos δ = 1/2, so the bound is 2C
        let delta = (0.5 / c).acos();
        let bound = c / (1.0 - c * delta.cos());
        let mut sup = 0.0f64;
        for _ in 0..2_000 {
            let th = uniform(&mut r, delta, PI) * if r.gen::<bool>() { 1.0 } else { -1.0 };
            let z = ONE - C64::from_polar(log_uniform(&mut r, 1e-4, 1e2), th);
            let v = (z - ONE).norm() / d.iter().map(|l| (z - l).norm()).fold(f64::INFINITY, f64::min);
            sup = sup.max(v);
        }
        t.record(sup / bound - 1.0, || format!("instance {i} C={c}"));
    }
    out.push(t.finish());

    let mut r = rng(seed, 54);
    let mut t = Tracker::new(S, "cayley_resolvent_bound", 1e-12);
    for i in 0..10 {
        let d: Vec<C64> = (0..6)
            .map(|_| loop {
                let z = if r.gen::<f64>() < 0.3 { C64::from_polar(1.0, uniform(&mut r, -PI, PI)) } else { disc_point(&mut r, 1.0) };
                if (z + ONE).norm() > 1e-2 {
                    break z;
                }
            })
            .collect();
        let tm = CMatrix::from_diag(&d);
        let ct = match cayley_op(&tm) {
            Ok(c) => c.diag(),
            Err(e) => {
                t.fail(e, format!("instance {i}"));
                continue;
            }
        };
        let tn = d.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for beta in [0.6 * PI, 0.75 * PI] {
            for _ in 0..500 {
                let th = uniform(&mut r, beta, PI) * if r.gen::<bool>() { 1.0 } else { -1.0 };
                let z = C64::from_polar(log_uniform(&mut r, 1e-3, 1e3), th);
                let res = 1.0 / ct.iter().map(|l| (l - z).norm()).fold(f64::INFINITY, f64::min);
                let bound = 3.0 * (1.0 + tn) / (z.norm() * beta.cos().abs());
                t.record(res / bound - 1.0, || format!("instance {i} β={beta} z={z}"));
            }
        }
    }
    out.push(t.finish());

    let mut r = rng(seed, 55);
    let mut t = Tracker::new(S, "stolz_cayley_angle", 1e-6);
    for i in 0..20 {
        let sigma = [1.5, 2.0, 5.0][i % 3];
        let d: Vec<C64> = (0..6).map(|_| stolz_point(&mut r, sigma)).collect();
        match angle_estimates(&CMatrix::from_diag(&d)) {
            Ok(a) => match (a.omega, stolz_to_sector_angle(sigma)) {
                (Some(w), Ok(bound)) => t.record(w - bound, || format!("instance {i} σ={sigma}")),
                (None, _) => t.fail(Error::Domain("−1 in spectrum".into()), format!("instance {i}")),
                (_, Err(e)) => t.fail(e, format!("instance {i}")),
            },
            Err(e) => t.fail(e, format!("instance {i}")),
        }
    }
    out.push(t.finish());

    let mut r = rng(seed, 56);
    let mut t = Tracker::new(S, "approximant_family", 1e-12);
    for i in 0..10 {
        let mut d: Vec<C64> = (0..5).map(|_| stolz_point(&mut r, 2.0)).collect();
        d.push(ONE);
        let tm = CMatrix::from_diag(&d);
        let mut prev = f64::INFINITY;
        for eps in [0.1, 0.01, 0.001] {
            match g_eps_op(&tm, eps).and_then(|te| Ok((eigenvalues(&te)?, operator_norm(&tm.sub(&te), 1e-12)))) {
                Ok((ev, dist)) => {
                    let rho = ev.iter().map(|z| z.norm()).fold(0.0, f64::max);
                    // strictly inside, shrinking, and O(ε)
                    let excess = (rho - 1.0 + 1e-15).max(dist - prev).max(dist - 4.0 * eps);
                    t.record(excess, || format!("instance {i} ε={eps}"));
                    prev = dist;
                }
                Err(e) => t.fail(e, format!("instance {i} ε={eps}")),
            }
        }
    }
    out.push(t.finish());

    let mut r = rng(seed, 57);
    let mut t = Tracker::new(S, "covering_angle_from_operator_angle", 1e-9);
    for alpha in [0.25, 0.5, 0.75] {
        let d = random_disc_diag(&mut r, 40, 0.999);
        let f = FunctionSpec::Named(NamedFamily::HAlpha(alpha));
        let res = (|| -> Result<(f64, f64)> {
            let s = apply_function(&f, &CMatrix::from_diag(&d), 1e-12)?.matrix;
            let a = angle_estimates(&s)?.alpha;
            let mut worst = 0.0f64;
            for l in &d {
                worst = worst.max(f.one_minus_h(*l)?.arg().abs());
            }
            Ok((a, worst))
        })();
        match res {
            Ok((a, worst)) => {
                let gamma = alpha * PI / 2.0;
                if a <= gamma + 1e-9 {
                    t.record(worst - (gamma + 1e-9), || format!("α={alpha}"));
                } else {
                    t.fail(Error::Inconsistent(format!("α̂(h(T)) = {a} exceeds γ = {gamma}")), format!("α={alpha}"));
                }
            }
            Err(e) => t.fail(e, format!("α={alpha}")),
        }
    }
    out.push(t.finish());

    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes_at_default_seed() {
        for s in SUITES {
            for p in run_suite(s, DEFAULT_SEED).unwrap() {
                assert!(p.pass, "{p:?}");
            }
        }
    }

    #[test]
    fn unknown_suite_is_input_error() {
        assert!(run_suite("nope", 1).unwrap_err().is_input_error());
    }

    #[test]
    fn lfir_brute_matches_closed_form_at_origin() {
        // min |e^{iφ}|/|1 − e^{iφ}| = 1/2 at φ = π
        assert!((lfir_brute(C64::new(0.0, 0.0), 1000) - 0.5).abs() < 1e-5);
    }

    #[test]
    fn multiset_distance_matches_permutations() {
        let a = [C64::new(0.0, 0.0), C64::new(1.0, 0.0)];
        let b = [C64::new(1.0, 1e-9), C64::new(0.0, 0.0)];
        assert!(multiset_distance(&a, &b) < 2e-9);
        assert!(multiset_distance(&a, &b[..1]).is_infinite());
    }
}
