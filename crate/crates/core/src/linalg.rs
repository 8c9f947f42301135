//! Dense complex linear algebra: LU solves, resolvents, operator norms,
//! matrix powers and a Hessenberg/shifted-QR eigenvalue solver.

use crate::error::invalid;
use crate::prelude::*;
use core::ops::{Index, IndexMut};

pub const MAX_DIM: usize = 256;

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<C64>,
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.n + j]
    }
}

impl CMatrix {
    /// Builds an n×n matrix from row-major data, rejecting bad shapes and non-finite entries.
    pub fn new(n: usize, data: Vec<C64>) -> Result<Self> {
        if n == 0 || n > MAX_DIM {
            return Err(invalid(format!("dimension {n} outside 1..={MAX_DIM}")));
        }
        if data.len() != n * n {
            return Err(invalid(format!("expected {} entries for n={n}, got {}", n * n, data.len())));
        }
        if let Some(k) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(invalid(format!("non-finite entry at ({}, {})", k / n, k % n)));
        }
        Ok(Self { n, data })
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(invalid("matrix is not square"));
        }
        Self::new(n, rows.iter().flatten().copied().collect())
    }

    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![C64::new(0.0, 0.0); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diag(&vec![C64::new(1.0, 0.0); n])
    }

    pub fn from_diag(d: &[C64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, v) in d.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    /// n×n cyclic shift: e_j ↦ e_{j+1 mod n}.
    pub fn cyclic_shift(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for j in 0..n {
            m[((j + 1) % n, j)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn diag(&self) -> Vec<C64> {
        (0..self.n).map(|i| self[(i, i)]).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || self[(i, j)] == C64::new(0.0, 0.0)))
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            let orow = &mut out.data[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let brow = &other.data[k * n..(k + 1) * n];
                for (o, b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        let n = self.n;
        (0..n)
            .map(|i| self.data[i * n..(i + 1) * n].iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn adjoint(&self) -> CMatrix {
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: C64) -> CMatrix {
        CMatrix { n: self.n, data: self.data.iter().map(|a| a * s).collect() }
    }

    /// In-place `self += s * other`.
    pub fn axpy(&mut self, s: C64, other: &CMatrix) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
    }

    /// αI + self.
    pub fn shift(&self, alpha: C64) -> CMatrix {
        let mut m = self.clone();
        for i in 0..self.n {
            m[(i, i)] += alpha;
        }
        m
    }

    fn zip_with(&self, other: &CMatrix, f: impl Fn(C64, C64) -> C64) -> CMatrix {
        assert_eq!(self.n, other.n, "dimension mismatch");
        CMatrix { n: self.n, data: self.data.iter().zip(&other.data).map(|(a, b)| f(*a, *b)).collect() }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// True when ‖AA* − A*A‖_F ≤ tol·‖A‖_F².
    pub fn is_normal(&self, tol: f64) -> bool {
        let a = self.adjoint();
        let c = self.matmul(&a).sub(&a.matmul(self));
        let f = self.frobenius();
        c.frobenius() <= tol * f * f.max(1e-300)
    }
}

/// LU factorization with partial pivoting.
#[derive(Debug, Clone)]
pub struct Lu {
    n: usize,
    lu: Vec<C64>,
    piv: Vec<usize>,
}

impl Lu {
    /// Factors `a`; fails when a pivot is negligible relative to the matrix scale.
    pub fn factor(a: &CMatrix) -> Option<Lu> {
        let n = a.n;
        let mut lu = a.data.clone();
        let mut piv: Vec<usize> = (0..n).collect();
        let scale = a.max_abs();
        if scale == 0.0 {
            return None;
        }
        let thresh = scale * f64::EPSILON * n as f64;
        for k in 0..n {
            let (mut p, mut best) = (k, 0.0);
            for i in k..n {
                let v = lu[i * n + k].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best <= thresh {
                return None;
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                piv.swap(k, p);
            }
            let inv = C64::new(1.0, 0.0) / lu[k * n + k];
            for i in k + 1..n {
                let f = lu[i * n + k] * inv;
                lu[i * n + k] = f;
                if f.re == 0.0 && f.im == 0.0 {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[k * n + j];
                    lu[i * n + j] -= f * u;
                }
            }
        }
        Some(Lu { n, lu, piv })
    }

    pub fn solve_vec(&self, b: &[C64]) -> Vec<C64> {
        let n = self.n;
        let mut x: Vec<C64> = self.piv.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let row = &self.lu[i * n..i * n + i];
            let s = x[i] - row.iter().zip(&x[..i]).map(|(l, xj)| l * xj).sum::<C64>();
            x[i] = s;
        }
        for i in (0..n).rev() {
            let row = &self.lu[i * n + i + 1..(i + 1) * n];
            let s = x[i] - row.iter().zip(&x[i + 1..]).map(|(u, xj)| u * xj).sum::<C64>();
            x[i] = s / self.lu[i * n + i];
        }
        x
    }

    /// Solves A X = B column by column.
    pub fn solve_mat(&self, b: &CMatrix) -> CMatrix {
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        let mut col = vec![C64::new(0.0, 0.0); n];
        for j in 0..n {
            for i in 0..n {
                col[i] = b[(i, j)];
            }
            let x = self.solve_vec(&col);
            for i in 0..n {
                out[(i, j)] = x[i];
            }
        }
        out
    }

    pub fn inverse(&self) -> CMatrix {
        self.solve_mat(&CMatrix::identity(self.n))
    }
}

/// Solves A X = B, reporting `z` as the offending spectral point on failure.
pub(crate) fn solve_shifted(a: &CMatrix, b: &CMatrix, z: C64) -> Result<CMatrix> {
    let lu = Lu::factor(a).ok_or(Error::Singular { z })?;
    let x = lu.solve_mat(b);
    if !x.is_finite() {
        return Err(Error::Singular { z });
    }
    Ok(x)
}

/// Inverse of `a`, reporting `z` on singularity.
pub(crate) fn inverse_at(a: &CMatrix, z: C64) -> Result<CMatrix> {
    let lu = Lu::factor(a).ok_or(Error::Singular { z })?;
    let x = lu.inverse();
    if !x.is_finite() {
        return Err(Error::Singular { z });
    }
    // backward-error check on the computed inverse
    let r = a.matmul(&x).shift(C64::new(-1.0, 0.0)).max_abs();
    if r > 1e-6 {
        return Err(Error::Singular { z });
    }
    Ok(x)
}

/// (zI − A)⁻¹.
pub fn resolvent(a: &CMatrix, z: C64) -> Result<CMatrix> {
    inverse_at(&a.scale(C64::new(-1.0, 0.0)).shift(z), z)
}

/// Largest singular value: √λ_max(AᴴA) from the eigenvalue solver, with
/// power iteration (relative tolerance `tol`) as fallback.
pub fn operator_norm(a: &CMatrix, tol: f64) -> f64 {
    if a.max_abs() == 0.0 {
        return 0.0;
    }
    if a.is_diagonal() {
        return a.diag().iter().map(|z| z.norm()).fold(0.0, f64::max);
    }
    if let Ok(ev) = eigenvalues(&a.adjoint().matmul(a)) {
        let top = ev.iter().map(|z| z.re).fold(0.0, f64::max);
        if top.is_finite() {
            return top.sqrt();
        }
    }
    power_norm(a, tol)
}

fn power_norm(a: &CMatrix, tol: f64) -> f64 {
    let n = a.n;
    let tol = tol.clamp(1e-15, 0.5);
    let cap = (10.0 * n as f64 * (1.0 / tol).ln()).ceil() as usize;
    let ah = a.adjoint();
    let run = |start: Vec<C64>| -> f64 {
        let mut v = start;
        let mut est = 0.0f64;
        for _ in 0..cap.max(4) {
            let w = a.matvec(&v);
            let s = vnorm(&w);
            let u = ah.matvec(&w);
            let un = vnorm(&u);
            let change = (s - est).abs();
            est = est.max(s);
            if un == 0.0 {
                break;
            }
            v = u.iter().map(|x| x / un).collect();
            if change <= tol * est {
                break;
            }
        }
        est
    };
    let est = run(generic_unit(n));
    if est > 0.0 {
        return est;
    }
    // start vector lies in the kernel; fall back to the heaviest column
    let j = (0..n)
        .max_by(|&p, &q| {
            let cp: f64 = (0..n).map(|i| a[(i, p)].norm_sqr()).sum();
            let cq: f64 = (0..n).map(|i| a[(i, q)].norm_sqr()).sum();
            cp.partial_cmp(&cq).unwrap()
        })
        .unwrap_or(0);
    let mut e = vec![C64::new(0.0, 0.0); n];
    e[j] = C64::new(1.0, 0.0);
    run(e)
}

/// Deterministic unit vector with irregular phases. The all-ones vector is
/// orthogonal to most eigenvectors of permutation matrices.
fn generic_unit(n: usize) -> Vec<C64> {
    let s = 1.0 / (n as f64).sqrt();
    (0..n).map(|k| C64::from_polar(s, 1.0 + 2.399_963 * k as f64 * (k as f64 + 0.5))).collect()
}

fn vnorm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// T⁰ … T^N by repeated multiplication.
pub fn mat_power_seq(t: &CMatrix, n: usize) -> Result<Vec<CMatrix>> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(CMatrix::identity(t.n));
    for k in 1..=n {
        let next = out[k - 1].matmul(t);
        if !next.is_finite() {
            return Err(Error::Overflow { power: k });
        }
        out.push(next);
    }
    Ok(out)
}

/// Eigenvalues with a verification residual.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<C64>,
    /// max ‖Av − λv‖/‖v‖ over inverse-iteration eigenvector estimates
    pub residual: f64,
}

impl Spectrum {
    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |m, z| m.max(z.norm()))
    }
}

/// All eigenvalues of `a` (sorted by real then imaginary part).
pub fn spectrum(a: &CMatrix, tol: f64) -> Result<Spectrum> {
    let _ = tol;
    let mut eig = eigenvalues(a)?;
    eig.sort_by(|x, y| x.re.partial_cmp(&y.re).unwrap().then(x.im.partial_cmp(&y.im).unwrap()));
    let residual = eig_residual(a, &eig);
    Ok(Spectrum { eigenvalues: eig, residual })
}

/// Eigenvalues only, skipping the residual pass.
pub fn eigenvalues(a: &CMatrix) -> Result<Vec<C64>> {
    let n = a.n;
    if a.is_diagonal() {
        return Ok(a.diag());
    }
    let mut h = a.clone();
    hessenberg(&mut h);
    qr_eigenvalues(h, n)
}

fn hessenberg(h: &mut CMatrix) {
    let n = h.n;
    for k in 0..n.saturating_sub(2) {
        let alpha_norm: f64 = (k + 1..n).map(|i| h[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if alpha_norm == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let phase = if x0.norm() == 0.0 { C64::new(1.0, 0.0) } else { x0 / x0.norm() };
        // v = x + phase·‖x‖ e1, H = I − 2vv*/(v*v)
        let mut v: Vec<C64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        v[0] += phase * alpha_norm;
        let vn2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vn2 == 0.0 {
            continue;
        }
        // left: rows k+1.., all columns
        for j in 0..n {
            let s: C64 = v.iter().enumerate().map(|(r, vr)| vr.conj() * h[(k + 1 + r, j)]).sum();
            let f = s * (2.0 / vn2);
            for (r, vr) in v.iter().enumerate() {
                h[(k + 1 + r, j)] -= f * vr;
            }
        }
        // right: columns k+1.., all rows
        for i in 0..n {
            let s: C64 = v.iter().enumerate().map(|(c, vc)| h[(i, k + 1 + c)] * vc).sum();
            let f = s * (2.0 / vn2);
            for (c, vc) in v.iter().enumerate() {
                h[(i, k + 1 + c)] -= f * vc.conj();
            }
        }
        for i in k + 2..n {
            h[(i, k)] = C64::new(0.0, 0.0);
        }
    }
}

fn qr_eigenvalues(mut h: CMatrix, n: usize) -> Result<Vec<C64>> {
    let zero = C64::new(0.0, 0.0);
    let mut eig = Vec::with_capacity(n);
    let hnorm = h.max_abs().max(f64::MIN_POSITIVE);
    let mut hi = n as isize - 1;
    let mut iter = 0usize;
    let cap_per = 60usize;
    while hi >= 0 {
        let hiu = hi as usize;
        // find start of the active unreduced block
        let mut l = hiu;
        while l > 0 {
            let s = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            let s = if s == 0.0 { hnorm } else { s };
            if h[(l, l - 1)].norm() <= f64::EPSILON * s {
                h[(l, l - 1)] = zero;
                break;
            }
            l -= 1;
        }
        if l == hiu {
            eig.push(h[(hiu, hiu)]);
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > cap_per {
            return Err(Error::NoConvergence { what: "shifted QR eigenvalue iteration".into(), iterations: iter });
        }
        // Wilkinson shift from the trailing 2x2
        let a = h[(hiu - 1, hiu - 1)];
        let b = h[(hiu - 1, hiu)];
        let c = h[(hiu, hiu - 1)];
        let d = h[(hiu, hiu)];
        let mut mu = {
            let tr = a + d;
            let det = a * d - b * c;
            let disc = (tr * tr * 0.25 - det).sqrt();
            let l1 = tr * 0.5 + disc;
            let l2 = tr * 0.5 - disc;
            if (l1 - d).norm() < (l2 - d).norm() { l1 } else { l2 }
        };
        if iter.is_multiple_of(11) {
            // exceptional shift breaks cycles
            mu = d + C64::new(h[(hiu, hiu - 1)].norm() * 0.75, 0.0) + C64::new(0.0, 1e-3 * hnorm);
        }
        for k in l..=hiu {
            h[(k, k)] -= mu;
        }
        let mut rots: Vec<(C64, C64)> = Vec::with_capacity(hiu - l);
        for k in l..hiu {
            let x = h[(k, k)];
            let y = h[(k + 1, k)];
            let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
            let (cs, sn) = if r == 0.0 { (C64::new(1.0, 0.0), zero) } else { (x / r, y / r) };
            for j in k..=hiu {
                let p = h[(k, j)];
                let q = h[(k + 1, j)];
                h[(k, j)] = cs.conj() * p + sn.conj() * q;
                h[(k + 1, j)] = -sn * p + cs * q;
            }
            rots.push((cs, sn));
        }
        for (idx, &(cs, sn)) in rots.iter().enumerate() {
            let k = l + idx;
            let top = (k + 2).min(hiu);
            for i in l..=top {
                let p = h[(i, k)];
                let q = h[(i, k + 1)];
                h[(i, k)] = cs * p + sn * q;
                h[(i, k + 1)] = -sn.conj() * p + cs.conj() * q;
            }
        }
        for k in l..=hiu {
            h[(k, k)] += mu;
        }
    }
    Ok(eig)
}

fn eig_residual(a: &CMatrix, eig: &[C64]) -> f64 {
    let n = a.n;
    let scale = a.max_abs().max(1e-300);
    let mut worst = 0.0f64;
    for &lam in eig {
        let mut v = generic_unit(n);
        let mut eta = scale * 1e-10;
        let mut lu = None;
        for _ in 0..8 {
            let m = a.shift(-(lam + C64::new(eta, eta * 0.5)));
            if let Some(f) = Lu::factor(&m) {
                lu = Some(f);
                break;
            }
            eta *= 100.0;
        }
        let Some(lu) = lu else { continue };
        for _ in 0..3 {
            let x = lu.solve_vec(&v);
            let xn = vnorm(&x);
            if xn == 0.0 || !xn.is_finite() {
                break;
            }
            v = x.iter().map(|z| z / xn).collect();
        }
        let av = a.matvec(&v);
        let r: f64 = av.iter().zip(&v).map(|(p, q)| (p - lam * q).norm_sqr()).sum::<f64>().sqrt();
        worst = worst.max(r / vnorm(&v));
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn same_multiset(a: &[C64], b: &[C64], tol: f64) -> bool {
        let mut used = vec![false; b.len()];
        a.len() == b.len()
            && a.iter().all(|x| {
                let best = (0..b.len()).filter(|&j| !used[j]).min_by(|&i, &j| {
                    (b[i] - x).norm().partial_cmp(&(b[j] - x).norm()).unwrap()
                });
                match best {
                    Some(j) if (b[j] - x).norm() <= tol => {
                        used[j] = true;
                        true
                    }
                    _ => false,
                }
            })
    }

    #[test]
    fn rejects_bad_input() {
        assert!(CMatrix::new(2, vec![c(1.0, 0.0); 3]).is_err());
        assert!(CMatrix::new(1, vec![c(f64::NAN, 0.0)]).is_err());
        assert!(CMatrix::new(0, vec![]).is_err());
    }

    #[test]
    fn spectrum_examples() {
        let d = CMatrix::from_diag(&[c(0.5, 0.0), c(0.2, 0.1)]);
        assert!(same_multiset(&spectrum(&d, 1e-10).unwrap().eigenvalues, &[c(0.5, 0.0), c(0.2, 0.1)], 1e-14));
        let j = CMatrix::from_rows(&[vec![c(0.5, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0), c(0.5, 0.0)]]).unwrap();
        let s = spectrum(&j, 1e-10).unwrap();
        assert!(same_multiset(&s.eigenvalues, &[c(0.5, 0.0), c(0.5, 0.0)], 1e-12));
        let p = CMatrix::cyclic_shift(4);
        let s = spectrum(&p, 1e-10).unwrap();
        let roots = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)];
        assert!(same_multiset(&s.eigenvalues, &roots, 1e-12), "{:?}", s.eigenvalues);
        assert!(s.residual < 1e-10);
    }

    #[test]
    fn larger_cyclic_shift() {
        let p = CMatrix::cyclic_shift(64);
        let s = spectrum(&p, 1e-10).unwrap();
        let roots: Vec<C64> = (0..64).map(|k| C64::from_polar(1.0, 2.0 * PI * k as f64 / 64.0)).collect();
        assert!(same_multiset(&s.eigenvalues, &roots, 1e-10));
    }

    #[test]
    fn norm_examples() {
        assert_eq!(operator_norm(&CMatrix::zeros(3), 1e-12), 0.0);
        assert!((operator_norm(&CMatrix::cyclic_shift(5), 1e-12) - 1.0).abs() < 1e-12);
        let m = CMatrix::from_rows(&[vec![c(0.0, 0.0), c(2.0, 0.0)], vec![c(0.0, 0.0), c(0.0, 0.0)]]).unwrap();
        assert!((operator_norm(&m, 1e-12) - 2.0).abs() < 1e-12);
        // all-ones vector in the kernel
        let k = CMatrix::from_rows(&[vec![c(1.0, 0.0), c(-1.0, 0.0)], vec![c(1.0, 0.0), c(-1.0, 0.0)]]).unwrap();
        assert!((operator_norm(&k, 1e-12) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn resolvent_examples() {
        let r = resolvent(&CMatrix::zeros(2), c(2.0, 0.0)).unwrap();
        assert!(r.sub(&CMatrix::identity(2).scale(c(0.5, 0.0))).max_abs() < 1e-15);
        let e = resolvent(&CMatrix::identity(1), c(1.0, 0.0)).unwrap_err();
        assert_eq!(e, Error::Singular { z: c(1.0, 0.0) });
        assert!(e.to_string().contains("1+0i"));
    }

    #[test]
    fn power_examples() {
        let j = CMatrix::from_rows(&[vec![c(1.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]]).unwrap();
        let p = mat_power_seq(&j, 2).unwrap();
        assert_eq!(p[2][(0, 1)], c(2.0, 0.0));
        let d = mat_power_seq(&CMatrix::from_diag(&[c(0.5, 0.0)]), 2).unwrap();
        assert_eq!(d[2][(0, 0)], c(0.25, 0.0));
        let big = CMatrix::from_diag(&[c(1e200, 0.0)]);
        assert_eq!(mat_power_seq(&big, 5).unwrap_err(), Error::Overflow { power: 2 });
    }
}
