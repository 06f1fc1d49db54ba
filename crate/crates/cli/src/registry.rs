use std::fmt;
use std::str::FromStr;

use trigamma_cm::kernel::{h, h_ratio, h_ratio_product};
use trigamma_cm::laplace::{bernstein_integrand, frak_y, QuadratureConfig};
use trigamma_cm::lemma_f::{f_value, FPoint};
use trigamma_cm::ratio::{sharp_constant, RatioFunctions};
use trigamma_cm::{Error, EvalPoint, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Function {
    Phi,
    PhiDeriv,
    Polygamma,
    H,
    HRatio,
    HRatioProduct,
    Y,
    CalY,
    HBeta,
    J,
    FrakJ,
    FrakH,
    CalJ,
    F,
    FrakY,
    Remark,
    Bernstein,
}

const NAMES: &[(&str, Function)] = &[
    ("phi", Function::Phi),
    ("phi_deriv", Function::PhiDeriv),
    ("polygamma", Function::Polygamma),
    ("h", Function::H),
    ("h_ratio", Function::HRatio),
    ("h_ratio_product", Function::HRatioProduct),
    ("Y", Function::Y),
    ("calY", Function::CalY),
    ("H", Function::HBeta),
    ("J", Function::J),
    ("frakJ", Function::FrakJ),
    ("frakH", Function::FrakH),
    ("calJ", Function::CalJ),
    ("F", Function::F),
    ("frak_y", Function::FrakY),
    ("remark", Function::Remark),
    ("bernstein", Function::Bernstein),
];

impl FromStr for Function {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        NAMES
            .iter()
            .find(|(n, _)| *n == s)
            .map(|(_, f)| *f)
            .ok_or_else(|| {
                let known: Vec<&str> = NAMES.iter().map(|(n, _)| *n).collect();
                format!("unknown function '{s}'; known: {}", known.join(", "))
            })
    }
}

impl fmt::Display for Function {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = NAMES.iter().find(|(_, g)| g == self).map(|(n, _)| *n).unwrap();
        f.write_str(name)
    }
}

impl Function {
    /// Name of the independent variable.
    pub fn variable(self) -> &'static str {
        match self {
            Function::H
            | Function::HRatio
            | Function::HRatioProduct
            | Function::FrakY
            | Function::Bernstein => "t",
            _ => "x",
        }
    }
}

/// Parameters shared by every function; each function reads the ones it needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    /// Defaults to the sharp constant `C(m, n)` where a weight is needed.
    pub omega: Option<f64>,
    pub s: f64,
    pub beta: f64,
    pub mu: f64,
    pub y: Option<f64>,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            m: 0,
            n: 0,
            k: 0,
            omega: None,
            s: 0.5,
            beta: 2.0,
            mu: 2.0,
            y: None,
        }
    }
}

pub struct Evaluator {
    pub ratio: RatioFunctions,
    pub quad: QuadratureConfig,
    pub params: Params,
}

impl Evaluator {
    fn omega(&self, m: usize, n: usize) -> Result<f64> {
        match self.params.omega {
            Some(w) => Ok(w),
            None => Ok(sharp_constant(m, n)?.as_f64()),
        }
    }

    /// `key=value` pairs naming the parameters `f` depends on.
    pub fn describe(&self, f: Function) -> Result<Vec<String>> {
        let p = &self.params;
        let mut out = vec![format!("function={f}")];
        match f {
            Function::Phi | Function::H => {}
            Function::PhiDeriv | Function::Polygamma => out.push(format!("k={}", p.k)),
            Function::HRatio | Function::HRatioProduct => out.push(format!("s={}", p.s)),
            Function::Y | Function::FrakY | Function::Remark => {
                out.push(format!("m={} n={}", p.m, p.n))
            }
            Function::CalY | Function::Bernstein => {
                out.push(format!("m={} n={} omega={}", p.m, p.n, self.omega(p.m, p.n)?))
            }
            Function::HBeta => out.push(format!("beta={}", p.beta)),
            Function::J => out.push(format!("k={} mu={}", p.k, p.mu)),
            Function::FrakJ => out.push(format!("k={} lambda={}", p.k, self.omega(p.k, p.k)?)),
            Function::FrakH => out.push(format!("alpha={}", self.omega(0, 0)?)),
            Function::CalJ => out.push(format!("k={} m={}", p.k, p.m)),
            Function::F => out.push(format!("y={}", self.f_y()?)),
        }
        Ok(out)
    }

    fn f_y(&self) -> Result<f64> {
        self.params
            .y
            .ok_or_else(|| Error::InvalidParameter("F needs --y".into()))
    }

    pub fn eval(&self, f: Function, x: f64) -> Result<f64> {
        let p = &self.params;
        let r = &self.ratio;
        let pg = r.polygamma();
        let pt = || EvalPoint::new(x);
        match f {
            Function::Phi => pg.phi(pt()?),
            Function::PhiDeriv => pg.phi_deriv(p.k, pt()?),
            Function::Polygamma => pg.polygamma(p.k, pt()?),
            Function::H => {
                if x.is_finite() {
                    Ok(h(x))
                } else {
                    Err(Error::InvalidParameter(format!("t = {x}")))
                }
            }
            Function::HRatio => h_ratio(p.s, x),
            Function::HRatioProduct => h_ratio_product(p.s, x),
            Function::Y => r.y(p.m, p.n, pt()?),
            Function::CalY => r.cal_y(p.m, p.n, self.omega(p.m, p.n)?, pt()?),
            Function::HBeta => r.h_beta(p.beta, pt()?),
            Function::J => r.j(p.k, p.mu, pt()?),
            Function::FrakJ => r.frak_j(p.k, self.omega(p.k, p.k)?, pt()?),
            Function::FrakH => r.frak_h(self.omega(0, 0)?, pt()?),
            Function::CalJ => r.cal_j(p.k, p.m, pt()?),
            Function::F => Ok(f_value(FPoint::new(x, self.f_y()?)?)),
            Function::FrakY => frak_y(p.m, p.n, x, &self.quad),
            Function::Remark => r.remark_expression(p.m, p.n, pt()?),
            Function::Bernstein => {
                bernstein_integrand(p.m, p.n, self.omega(p.m, p.n)?, x, &self.quad)
            }
        }
    }
}
