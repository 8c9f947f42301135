//! Matrix and function-spec file formats.

use crate::error::{CliError, Context};
use num_complex::Complex64 as C64;
use rittcalc_core::funclasses::{
    ConvexSeries, DiscreteMeasure, FunctionSpec, HausdorffSpec, NPPlusRep, NamedFamily, StieltjesTriple, Support,
};
use rittcalc_core::CMatrix;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// `{"n": 2, "re": [[..], [..]], "im": [[..], [..]]}`, row-major. `im` may be omitted for real matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub n: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl MatrixFile {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let n = m.dim();
        let re = (0..n).map(|i| (0..n).map(|j| m[(i, j)].re).collect()).collect();
        let im = (0..n).map(|i| (0..n).map(|j| m[(i, j)].im).collect()).collect();
        MatrixFile { n, re, im: Some(im) }
    }

    pub fn to_matrix(&self) -> Result<CMatrix, CliError> {
        let n = self.n;
        if n == 0 {
            return Err(CliError::input("matrix dimension n must be at least 1"));
        }
        check_square("re", &self.re, n)?;
        if let Some(im) = &self.im {
            check_square("im", im, n)?;
        }
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let im = self.im.as_ref().map(|m| m[i][j]).unwrap_or(0.0);
                data.push(C64::new(self.re[i][j], im));
            }
        }
        CMatrix::new(n, data).context("matrix")
    }
}

fn check_square(name: &str, rows: &[Vec<f64>], n: usize) -> Result<(), CliError> {
    if rows.len() != n {
        return Err(CliError::input(format!("\"{name}\" has {} rows, expected n = {n}", rows.len())));
    }
    for (i, r) in rows.iter().enumerate() {
        if r.len() != n {
            return Err(CliError::input(format!("\"{name}\" row {i} has {} entries, expected {n}: matrix is not square", r.len())));
        }
        if let Some(j) = r.iter().position(|x| !x.is_finite()) {
            return Err(CliError::input(format!("\"{name}\"[{i}][{j}] is not finite")));
        }
    }
    Ok(())
}

/// Atom list `{"points": [...], "weights": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureFile {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

impl MeasureFile {
    fn to_measure(&self, support: Support) -> Result<DiscreteMeasure, CliError> {
        DiscreteMeasure::new(self.points.clone(), self.weights.clone(), support).context("measure")
    }
}

/// Function spec with a `"kind"` discriminator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctionFile {
    Convex {
        coeffs: Vec<f64>,
    },
    Hausdorff {
        #[serde(default)]
        c0: f64,
        nu: MeasureFile,
    },
    Stieltjes {
        #[serde(default)]
        a: f64,
        #[serde(default)]
        b: f64,
        mu: MeasureFile,
    },
    NpPlus {
        #[serde(default)]
        a: f64,
        #[serde(default)]
        b: f64,
        rho: MeasureFile,
        theta1: f64,
        theta2: f64,
    },
    Named {
        family: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alpha: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        eps: Option<f64>,
    },
}

impl FunctionFile {
    pub fn to_spec(&self) -> Result<FunctionSpec, CliError> {
        Ok(match self {
            FunctionFile::Convex { coeffs } => FunctionSpec::Convex(ConvexSeries::new(coeffs.clone()).context("convex series")?),
            FunctionFile::Hausdorff { c0, nu } => {
                FunctionSpec::Hausdorff(HausdorffSpec::new(*c0, nu.to_measure(Support::UnitInterval)?).context("hausdorff spec")?)
            }
            FunctionFile::Stieltjes { a, b, mu } => {
                FunctionSpec::Stieltjes(StieltjesTriple::new(*a, *b, mu.to_measure(Support::HalfLine)?).context("stieltjes spec")?)
            }
            FunctionFile::NpPlus { a, b, rho, theta1, theta2 } => FunctionSpec::NPPlus(
                NPPlusRep::new(*a, *b, rho.to_measure(Support::HalfLine)?, *theta1, *theta2).context("np_plus spec")?,
            ),
            FunctionFile::Named { family, alpha, eps } => {
                let need = |v: &Option<f64>, key: &str| {
                    v.ok_or_else(|| CliError::input(format!("family {family:?} needs parameter \"{key}\"")))
                };
                let f = match family.as_str() {
                    "h_alpha" => NamedFamily::HAlpha(need(alpha, "alpha")?),
                    "zeta_L" | "zeta_l" => NamedFamily::ZetaL(need(alpha, "alpha")?),
                    "h_eps" => NamedFamily::HEps(need(eps, "eps")?),
                    "h_one" => NamedFamily::HOne,
                    "g_eps" => NamedFamily::GEps(need(eps, "eps")?),
                    "cbf_log" => NamedFamily::CbfLog,
                    "power" => NamedFamily::Power(need(alpha, "alpha")?),
                    other => {
                        return Err(CliError::input(format!(
                            "unknown family {other:?}; expected h_alpha, zeta_L, h_eps, h_one, g_eps, cbf_log or power"
                        )))
                    }
                };
                f.validate().context("named family")?;
                FunctionSpec::Named(f)
            }
        })
    }
}

fn json_error(what: &str, path: &Path, e: serde_json::Error) -> CliError {
    CliError::input(format!("{}: {what} parse error at line {}, column {}: {e}", path.display(), e.line(), e.column()))
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

pub fn parse_matrix(text: &str, path: &Path) -> Result<CMatrix, CliError> {
    let f: MatrixFile = serde_json::from_str(text).map_err(|e| json_error("matrix", path, e))?;
    f.to_matrix().map_err(|e| match e {
        CliError::Input(m) => CliError::Input(format!("{}: {m}", path.display())),
        e => e,
    })
}

pub fn read_matrix(path: &Path) -> Result<CMatrix, CliError> {
    parse_matrix(&read(path)?, path)
}

pub fn parse_function(text: &str, path: &Path) -> Result<(FunctionFile, FunctionSpec), CliError> {
    let f: FunctionFile = serde_json::from_str(text).map_err(|e| json_error("function spec", path, e))?;
    let spec = f.to_spec().map_err(|e| match e {
        CliError::Input(m) => CliError::Input(format!("{}: {m}", path.display())),
        e => e,
    })?;
    Ok((f, spec))
}

pub fn read_function(path: &Path) -> Result<(FunctionFile, FunctionSpec), CliError> {
    parse_function(&read(path)?, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> &'static Path {
        Path::new("t.json")
    }

    #[test]
    fn matrix_round_trip() {
        let m = parse_matrix(r#"{"n":2,"re":[[1,2],[3,4]],"im":[[0,1],[0,0]]}"#, p()).unwrap();
        assert_eq!(m[(0, 1)], C64::new(2.0, 1.0));
        let back = MatrixFile::from_matrix(&m).to_matrix().unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn matrix_rejections() {
        let e = parse_matrix(r#"{"n":2,"re":[[1,2],[3]]}"#, p()).unwrap_err();
        assert!(e.to_string().contains("not square"), "{e}");
        let e = parse_matrix("{\"n\":2,\n\"re\":[[1,2],[3,4]],\n\"im\": oops}", p()).unwrap_err();
        assert!(e.to_string().contains("line 3"), "{e}");
        assert!(parse_matrix(r#"{"n":1,"re":[[1]],"extra":1}"#, p()).is_err());
    }

    #[test]
    fn function_specs() {
        let (_, f) = parse_function(r#"{"kind":"named","family":"h_alpha","alpha":0.5}"#, p()).unwrap();
        assert_eq!(f, FunctionSpec::Named(NamedFamily::HAlpha(0.5)));
        let (_, f) = parse_function(r#"{"kind":"hausdorff","nu":{"points":[0.5],"weights":[0.5]}}"#, p()).unwrap();
        assert!(matches!(f, FunctionSpec::Hausdorff(_)));
        assert!(parse_function(r#"{"kind":"named","family":"h_alpha"}"#, p()).is_err());
        assert!(parse_function(r#"{"kind":"named","family":"h_alpha","alpha":1.5}"#, p()).is_err());
        assert!(parse_function(r#"{"kind":"convex","coeffs":[0.7,0.7]}"#, p()).is_err());
    }
}
