//! Serializable report types. Field order is fixed so output is byte-stable.

use num_complex::Complex64 as C64;
use rittcalc_core::diagnostics::{
    AngleEstimates, AngleGrowthResult, Clause, EpsScenario, PowerDiagnostics, RefinedSup, RittReport, SpectralFlags,
    StolzEstimate, SupSample, VerifyReport, ANGLE_THRESHOLD, FINITE_GROWTH,
};
use rittcalc_core::suites::PropertyResult;
use serde::{Serialize, Serializer};

/// f64 that serializes non-finite values as the strings "inf", "-inf", "nan".
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Real(pub f64);

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let x = self.0;
        if x.is_finite() {
            s.serialize_f64(x)
        } else if x.is_nan() {
            s.serialize_str("nan")
        } else if x > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

impl From<C64> for Complex {
    fn from(z: C64) -> Self {
        Complex { re: Real(z.re), im: Real(z.im) }
    }
}

fn reals(v: &[f64]) -> Vec<Real> {
    v.iter().copied().map(Real).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerDto {
    pub n: usize,
    pub power_bound: Real,
    pub power_argmax: usize,
    pub ritt_ratio: Real,
    pub ritt_argmax: usize,
    pub growth_flag: bool,
}

impl From<&PowerDiagnostics> for PowerDto {
    fn from(p: &PowerDiagnostics) -> Self {
        PowerDto {
            n: p.n,
            power_bound: Real(p.power_bound),
            power_argmax: p.power_argmax,
            ritt_ratio: Real(p.ritt_ratio),
            ritt_argmax: p.ritt_argmax,
            growth_flag: p.growth_flag,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupDto {
    pub value: Real,
    pub at: Complex,
}

impl From<&SupSample> for SupDto {
    fn from(s: &SupSample) -> Self {
        SupDto { value: Real(s.value), at: s.at.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RefinedDto {
    pub value: Real,
    pub finite: bool,
    pub rounds: Vec<SupDto>,
}

impl From<&RefinedSup> for RefinedDto {
    fn from(r: &RefinedSup) -> Self {
        RefinedDto { value: Real(r.value()), finite: r.finite, rounds: r.rounds.iter().map(Into::into).collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StolzSupDto {
    pub delta: Real,
    pub sup: RefinedDto,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StolzDto {
    pub sigma: Real,
    pub spectral_part: Real,
    pub resolvent_part: Option<Real>,
    pub sups: Vec<StolzSupDto>,
}

impl From<&StolzEstimate> for StolzDto {
    fn from(s: &StolzEstimate) -> Self {
        StolzDto {
            sigma: Real(s.sigma),
            spectral_part: Real(s.spectral_part),
            resolvent_part: s.resolvent_part.map(Real),
            sups: s.sups.iter().map(|(d, r)| StolzSupDto { delta: Real(*d), sup: r.into() }).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnglesDto {
    pub minimal_angle: Real,
    pub cayley_angle: Option<Real>,
    pub minimal_angle_spectral: Real,
    pub cayley_angle_spectral: Option<Real>,
    pub resolvent_refined: bool,
}

impl From<&AngleEstimates> for AnglesDto {
    fn from(a: &AngleEstimates) -> Self {
        AnglesDto {
            minimal_angle: Real(a.alpha),
            cayley_angle: a.omega.map(Real),
            minimal_angle_spectral: Real(a.alpha_spectral),
            cayley_angle_spectral: a.omega_spectral.map(Real),
            resolvent_refined: a.refined,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlagsDto {
    pub unit_circle_contact: bool,
    pub one_in_spectrum: bool,
    pub minus_one_in_spectrum: bool,
}

impl From<&SpectralFlags> for FlagsDto {
    fn from(f: &SpectralFlags) -> Self {
        FlagsDto {
            unit_circle_contact: f.unit_circle_contact,
            one_in_spectrum: f.one_in_spectrum,
            minus_one_in_spectrum: f.minus_one_in_spectrum,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridsDto {
    pub power_terms: usize,
    pub radii: Vec<Real>,
    pub angular_nodes: usize,
    pub rounds: usize,
    pub deltas: Vec<Real>,
    pub finite_growth: Real,
    pub angle_threshold: Real,
    pub tol: Real,
}

impl GridsDto {
    pub fn new(cfg: &rittcalc_core::diagnostics::AnalyzeConfig) -> Self {
        GridsDto {
            power_terms: cfg.power_terms,
            radii: reals(&cfg.grid.radii),
            angular_nodes: cfg.grid.angular_nodes,
            rounds: cfg.grid.rounds,
            deltas: reals(&cfg.deltas),
            finite_growth: Real(FINITE_GROWTH),
            angle_threshold: Real(ANGLE_THRESHOLD),
            tol: Real(cfg.tol),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportDto {
    pub dim: usize,
    pub spectrum: Vec<Complex>,
    pub spectral_radius: Real,
    pub power: PowerDto,
    pub ritt_constant: Option<RefinedDto>,
    pub stolz_type: Option<StolzDto>,
    pub minimal_angle: Option<Real>,
    pub cayley_angle: Option<Real>,
    pub angles: Option<AnglesDto>,
    pub spectral_flags: FlagsDto,
    pub consistent: Option<bool>,
    pub notes: Vec<String>,
    pub grids: GridsDto,
}

impl ReportDto {
    pub fn new(r: &RittReport, cfg: &rittcalc_core::diagnostics::AnalyzeConfig) -> Self {
        ReportDto {
            dim: r.dim,
            spectrum: r.spectrum.iter().copied().map(Into::into).collect(),
            spectral_radius: Real(r.spectral_radius),
            power: (&r.power).into(),
            ritt_constant: r.ritt_constant.as_ref().map(Into::into),
            stolz_type: r.stolz.as_ref().map(Into::into),
            minimal_angle: r.angles.as_ref().map(|a| Real(a.alpha)),
            cayley_angle: r.angles.as_ref().and_then(|a| a.omega.map(Real)),
            angles: r.angles.as_ref().map(Into::into),
            spectral_flags: (&r.flags).into(),
            consistent: r.consistent,
            notes: r.notes.clone(),
            grids: GridsDto::new(cfg),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClauseDto {
    pub name: &'static str,
    pub pass: bool,
    pub value: Real,
    pub bound: Real,
    pub detail: String,
}

impl From<&Clause> for ClauseDto {
    fn from(c: &Clause) -> Self {
        ClauseDto { name: c.name, pass: c.pass, value: Real(c.value), bound: Real(c.bound), detail: c.detail.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckDto {
    pub kind: &'static str,
    pub pass: bool,
    pub gamma_hat: Option<Real>,
    pub reference_angle: Option<Real>,
    pub clauses: Vec<ClauseDto>,
}

impl CheckDto {
    pub fn new(kind: &'static str, r: &VerifyReport) -> Self {
        CheckDto {
            kind,
            pass: r.pass(),
            gamma_hat: r.gamma_hat.map(Real),
            reference_angle: r.reference_angle.map(Real),
            clauses: r.clauses.iter().map(Into::into).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AngleGrowthDto {
    pub phi: Real,
    pub delta: Real,
    pub n_grid: usize,
    pub grid: &'static str,
    pub alpha_hat: Real,
    pub beta_hat: Real,
    pub gamma_hat: Real,
    pub tan_beta_hat: Real,
    pub tan_gamma_hat: Real,
    pub tan_gamma_formula: Real,
    pub tan_beta_formula: Real,
    pub tan_beta_sup: Real,
}

impl From<&AngleGrowthResult> for AngleGrowthDto {
    fn from(r: &AngleGrowthResult) -> Self {
        AngleGrowthDto {
            phi: Real(r.phi),
            delta: Real(r.delta),
            n_grid: r.n_grid,
            grid: "t_i = (i/n)^2, i = 1..n",
            alpha_hat: Real(r.alpha_hat),
            beta_hat: Real(r.beta_hat),
            gamma_hat: Real(r.gamma_hat),
            tan_beta_hat: Real(r.beta_hat.tan()),
            tan_gamma_hat: Real(r.gamma_hat.tan()),
            tan_gamma_formula: Real(r.tan_gamma_formula),
            tan_beta_formula: Real(r.tan_beta_formula),
            tan_beta_sup: Real(r.tan_beta_sup),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpsScenarioDto {
    pub eps: Real,
    pub delta: Real,
    pub phi: Real,
    pub phi_rule: &'static str,
    pub tan_beta_hat: Real,
    pub tan_gamma_hat: Real,
    pub target: Real,
    pub pass: bool,
}

impl From<&EpsScenario> for EpsScenarioDto {
    fn from(e: &EpsScenario) -> Self {
        EpsScenarioDto {
            eps: Real(e.eps),
            delta: Real(e.delta),
            phi: Real(e.phi),
            phi_rule: "phi = arccos(delta^(eps/2)) / 2",
            tan_beta_hat: Real(e.tan_beta_hat),
            tan_gamma_hat: Real(e.tan_gamma_hat),
            target: Real(e.target),
            pass: e.pass,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyDto {
    pub suite: &'static str,
    pub name: &'static str,
    pub pass: bool,
    pub samples: usize,
    pub violations: usize,
    pub worst: Real,
    pub tolerance: Real,
    pub worst_at: String,
}

impl From<&PropertyResult> for PropertyDto {
    fn from(p: &PropertyResult) -> Self {
        PropertyDto {
            suite: p.suite,
            name: p.name,
            pass: p.pass,
            samples: p.samples,
            violations: p.violations,
            worst: Real(p.worst),
            tolerance: Real(p.tolerance),
            worst_at: p.worst_at.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn non_finite_reals_serialize_as_strings() {
        let v = serde_json::to_string(&[Real(1.5), Real(f64::INFINITY), Real(f64::NEG_INFINITY), Real(f64::NAN)]).unwrap();
        assert_eq!(v, r#"[1.5,"inf","-inf","nan"]"#);
    }
}
