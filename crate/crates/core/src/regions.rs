//! Stolz domains, sectors, the Cayley map and related planar geometry.
//!
//! Angles are radians with `arg` in (−π, π]. `contains` tests closed sets
//! unless `strict` is set.

use crate::error::invalid;
use crate::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RegionSpec {
    /// S_σ = {|1−z|/(1−|z|) < σ} ∪ {1}, σ ≥ 1; S_1 = {1}.
    Stolz(f64),
    /// Σ_ω = {|arg z| < ω}, ω ∈ [0, π].
    Sector(f64),
    /// 1 − Σ_γ, γ ∈ [0, π/2).
    ShiftedSector(f64),
    UnitDisc,
    /// {|λ − 1| < 1}
    Disc1,
    /// {(1−|z|²)/(2|1−z|) ≥ q} ∪ {1}, q ∈ (0, 1].
    OmegaQ(f64),
}

impl RegionSpec {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            RegionSpec::Stolz(s) => s >= 1.0 && s.is_finite(),
            RegionSpec::Sector(w) => (0.0..=PI).contains(&w),
            RegionSpec::ShiftedSector(g) => (0.0..PI / 2.0).contains(&g),
            RegionSpec::OmegaQ(q) => q > 0.0 && q <= 1.0,
            RegionSpec::UnitDisc | RegionSpec::Disc1 => true,
        };
        if ok { Ok(()) } else { Err(invalid(format!("region parameter out of range: {self:?}"))) }
    }
}

/// Membership test; closed set by default, open set when `strict`.
pub fn contains(region: &RegionSpec, z: C64, strict: bool) -> bool {
    let one = C64::new(1.0, 0.0);
    match *region {
        RegionSpec::Stolz(sigma) => {
            if z == one {
                return true;
            }
            let r = z.norm();
            if r >= 1.0 {
                return false;
            }
            let idx = (one - z).norm() / (1.0 - r);
            if strict { idx < sigma } else { idx <= sigma }
        }
        RegionSpec::Sector(w) => in_sector(z, w, strict),
        RegionSpec::ShiftedSector(g) => in_sector(one - z, g, strict),
        RegionSpec::UnitDisc => {
            if strict { z.norm() < 1.0 } else { z.norm() <= 1.0 }
        }
        RegionSpec::Disc1 => {
            let d = (z - one).norm();
            if strict { d < 1.0 } else { d <= 1.0 }
        }
        RegionSpec::OmegaQ(q) => {
            if z == one {
                return true;
            }
            if z.norm() >= 1.0 {
                return false;
            }
            let m = (1.0 - z.norm_sqr()) / (2.0 * (one - z).norm());
            if strict { m > q } else { m >= q }
        }
    }
}

/// z ∈ Σ̄_ω (closed, 0 included) or Σ_ω when strict.
pub fn in_sector(z: C64, omega: f64, strict: bool) -> bool {
    if z.norm() == 0.0 {
        return !strict;
    }
    let a = z.arg().abs();
    if strict { a < omega } else { a <= omega }
}

/// |1−z|/(1−|z|): 1 at z=1, +∞ on the rest of the unit circle.
pub fn stolz_index(z: C64) -> Result<f64> {
    let one = C64::new(1.0, 0.0);
    if z == one {
        return Ok(1.0);
    }
    let r = z.norm();
    if r > 1.0 {
        return Err(Error::Domain(format!("stolz_index undefined for |z| = {r} > 1")));
    }
    if r == 1.0 {
        return Ok(f64::INFINITY);
    }
    Ok((one - z).norm() / (1.0 - r))
}

/// (1−z)/(1+z).
pub fn cayley(z: C64) -> Result<C64> {
    let one = C64::new(1.0, 0.0);
    if z == -one {
        return Err(Error::Pole { at: z });
    }
    Ok((one - z) / (one + z))
}

/// Inverse Cayley map; the map is an involution.
pub fn cayley_inv(z: C64) -> Result<C64> {
    cayley(z)
}

/// min over φ of |z − e^{iφ}|/|1 − e^{iφ}| = (1−|z|²)/(2|1−z|).
pub fn min_distance_ratio(z: C64) -> Result<f64> {
    if z.norm() >= 1.0 {
        return Err(Error::Domain(format!("min_distance_ratio needs |z| < 1, got {}", z.norm())));
    }
    Ok((1.0 - z.norm_sqr()) / (2.0 * (C64::new(1.0, 0.0) - z).norm()))
}

/// Half-opening of the sector at 1 containing S̄_σ: arccos(1/σ).
pub fn stolz_to_sector_angle(sigma: f64) -> Result<f64> {
    if !(sigma >= 1.0) {
        return Err(invalid(format!("Stolz parameter must be ≥ 1, got {sigma}")));
    }
    Ok((1.0 / sigma).acos())
}

/// Boundary radius of S_σ along the ray 1 − ρe^{iα}: 2σ(σ cos α − 1)/(σ² − 1).
/// Returns None for σ = 1 (S_1 = {1}) or when cos α ≤ 1/σ.
pub fn stolz_boundary_radius(sigma: f64, alpha: f64) -> Option<f64> {
    if sigma <= 1.0 {
        return None;
    }
    let num = 2.0 * sigma * (sigma * alpha.cos() - 1.0);
    if num <= 0.0 {
        return None;
    }
    Some(num / (sigma * sigma - 1.0))
}

/// b(β, R) = cos β/(1 + R²).
pub fn contraction_factor(beta: f64, r: f64) -> f64 {
    beta.cos() / (1.0 + r * r)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorGeometry {
    pub omega: f64,
    pub omega0: f64,
    pub theta: f64,
    pub theta0: f64,
}

/// Opening θ₀ of the sector into which a CBF with ψ(ℂ₊) ⊂ Σ̄_ω maps Σ̄_θ.
pub fn cbf_sector_geometry(omega: f64, theta: f64) -> Result<SectorGeometry> {
    if !(omega > 0.0 && omega < PI / 2.0) {
        return Err(invalid(format!("ω must lie in (0, π/2), got {omega}")));
    }
    let cw = 1.0 / omega.tan();
    let omega0 = PI - (cw / (cw + 1.0)).acos();
    if !(theta > PI / 2.0 && theta < omega0) {
        return Err(invalid(format!("θ = {theta} must lie in (π/2, ω₀) with ω₀ = {omega0}")));
    }
    let cot0 = (cw - (cw + 1.0) * theta.cos().abs()) / theta.sin();
    let theta0 = (1.0 / cot0).atan();
    Ok(SectorGeometry { omega, omega0, theta, theta0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn stolz_membership() {
        let s = RegionSpec::Stolz(2.0);
        assert!(contains(&s, c(0.9, 0.0), false));
        assert!(contains(&s, c(1.0, 0.0), false));
        assert!(!contains(&s, c(0.0, 0.9), false));
        assert!((stolz_index(c(0.0, 0.9)).unwrap() - 13.453_624_047_073_71).abs() < 1e-9);
        assert!(contains(&RegionSpec::Stolz(1.0), c(1.0, 0.0), false));
        assert!(!contains(&RegionSpec::Stolz(1.0), c(0.5, 0.1), false));
    }

    #[test]
    fn stolz_index_examples() {
        assert_eq!(stolz_index(c(0.0, 0.0)).unwrap(), 1.0);
        assert!((stolz_index(c(0.3, 0.0)).unwrap() - 1.0).abs() < 1e-15);
        assert!((stolz_index(c(0.0, 0.5)).unwrap() - 2.236_067_977_499_79).abs() < 1e-12);
        assert_eq!(stolz_index(c(0.0, 1.0)).unwrap(), f64::INFINITY);
        assert!(stolz_index(c(1.1, 0.0)).is_err());
    }

    #[test]
    fn cayley_examples() {
        assert_eq!(cayley(c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        assert_eq!(cayley(c(1.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert!((cayley(c(0.0, 1.0)).unwrap() - c(0.0, -1.0)).norm() < 1e-15);
        assert!(matches!(cayley(c(-1.0, 0.0)), Err(Error::Pole { .. })));
    }

    #[test]
    fn min_distance_examples() {
        assert_eq!(min_distance_ratio(c(0.0, 0.0)).unwrap(), 0.5);
        assert!((min_distance_ratio(c(0.6, 0.0)).unwrap() - 0.8).abs() < 1e-15);
        assert!(min_distance_ratio(c(1.0, 0.0)).is_err());
    }

    #[test]
    fn sector_angle_examples() {
        assert_eq!(stolz_to_sector_angle(1.0).unwrap(), 0.0);
        assert!((stolz_to_sector_angle(2.0).unwrap() - PI / 3.0).abs() < 1e-15);
        assert!((stolz_to_sector_angle(2f64.sqrt()).unwrap() - PI / 4.0).abs() < 1e-15);
        assert!(stolz_to_sector_angle(0.5).is_err());
    }

    #[test]
    fn boundary_radius_lies_on_boundary() {
        for &sigma in &[1.5, 2.0, 5.0] {
            for k in 0..20 {
                let a = (k as f64 / 20.0 - 0.5) * 1.8 * stolz_to_sector_angle(sigma).unwrap();
                let rho = stolz_boundary_radius(sigma, a).unwrap();
                let z = c(1.0, 0.0) - C64::from_polar(rho, a);
                assert!((stolz_index(z).unwrap() - sigma).abs() < 1e-9);
            }
        }
        assert!(stolz_boundary_radius(1.0, 0.0).is_none());
    }

    #[test]
    fn cbf_geometry() {
        let g = cbf_sector_geometry(PI / 4.0, 0.55 * PI).unwrap();
        assert!((g.omega0 - 2.0 * PI / 3.0).abs() < 1e-12);
        let cw = 1.0;
        let expect = (cw - (cw + 1.0) * (0.55 * PI).cos().abs()) / (0.55 * PI).sin();
        assert!((1.0 / g.theta0.tan() - expect).abs() < 1e-12);
        assert!(g.theta0 > 0.0 && g.theta0 < PI / 2.0);
        let near = cbf_sector_geometry(PI / 4.0, PI / 2.0 + 1e-9).unwrap();
        assert!((near.theta0 - PI / 4.0).abs() < 1e-8);
        let e = cbf_sector_geometry(PI / 4.0, 0.7 * PI).unwrap_err();
        assert!(e.to_string().contains("ω₀"));
    }
}
