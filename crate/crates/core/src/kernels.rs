//! Time-domain relaxation kernels `a δ(t) + Σ c_i e^{-λ_i t}` built from a
//! fitted pole/residue set, and their `relaxkernel-v1` text format.

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pade::PoleResidueSet;

pub const KERNEL_FORMAT_HEADER: &str = "relaxkernel-v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelModel {
    Permeability,
    Tortuosity,
}

impl fmt::Display for KernelModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KernelModel::Permeability => "permeability",
            KernelModel::Tortuosity => "tortuosity",
        })
    }
}

impl FromStr for KernelModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "permeability" => Ok(KernelModel::Permeability),
            "tortuosity" => Ok(KernelModel::Tortuosity),
            other => Err(Error::Input(format!("unknown kernel model '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelaxationKernel {
    pub model: KernelModel,
    pub dirac_weight: f64,
    /// `(strength, rate)`, sorted by rate ascending.
    pub terms: Vec<(f64, f64)>,
}

impl RelaxationKernel {
    pub fn new(model: KernelModel, dirac_weight: f64, mut terms: Vec<(f64, f64)>) -> Result<Self> {
        if !(dirac_weight >= 0.0 && dirac_weight.is_finite()) {
            return Err(Error::Input(format!(
                "Dirac weight must be >= 0, got {dirac_weight}"
            )));
        }
        if let Some(t) = terms
            .iter()
            .find(|(c, r)| !(*c > 0.0 && *r > 0.0 && c.is_finite() && r.is_finite()))
        {
            return Err(Error::Input(format!(
                "kernel term {t:?} must have positive strength and rate"
            )));
        }
        terms.sort_by(|a, b| a.1.total_cmp(&b.1));
        Ok(Self {
            model,
            dirac_weight,
            terms,
        })
    }

    pub fn strength_sum(&self) -> f64 {
        self.terms.iter().map(|t| t.0).sum()
    }

    /// `∫₀^∞` of the exponential part.
    pub fn integral(&self) -> f64 {
        self.terms.iter().map(|(c, r)| c / r).sum()
    }

    /// Frequency-domain image of the exponential part, `Σ c_i / (s + λ_i)`.
    pub fn laplace(&self, s: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|&(c, r)| Complex64::new(c, 0.0) / (s + r))
            .sum()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{KERNEL_FORMAT_HEADER}");
        let _ = writeln!(out, "model {}", self.model);
        let _ = writeln!(out, "dirac_weight {:.16e}", self.dirac_weight);
        let _ = writeln!(out, "terms {}", self.terms.len());
        let _ = writeln!(out, "strength rate");
        for (c, r) in &self.terms {
            let _ = writeln!(out, "{c:.16e} {r:.16e}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let bad = |msg: &str| Error::Input(format!("kernel file: {msg}"));
        if lines.next() != Some(KERNEL_FORMAT_HEADER) {
            return Err(bad("missing relaxkernel-v1 header"));
        }
        let mut field = |name: &str| -> Result<String> {
            let line = lines
                .next()
                .ok_or_else(|| bad(&format!("missing '{name}' line")))?;
            let (key, value) = line
                .split_once(char::is_whitespace)
                .ok_or_else(|| bad(&format!("malformed line '{line}'")))?;
            if key != name {
                return Err(bad(&format!("expected '{name}', found '{key}'")));
            }
            Ok(value.trim().to_string())
        };
        let model: KernelModel = field("model")?.parse()?;
        let dirac_weight = parse_f64(&field("dirac_weight")?)?;
        let count: usize = field("terms")?
            .parse()
            .map_err(|_| bad("term count is not an integer"))?;
        if lines.next() != Some("strength rate") {
            return Err(bad("missing 'strength rate' table header"));
        }
        let mut terms = Vec::with_capacity(count);
        for line in lines {
            let mut cols = line.split_whitespace();
            let (Some(c), Some(r), None) = (cols.next(), cols.next(), cols.next()) else {
                return Err(bad(&format!("malformed term row '{line}'")));
            };
            terms.push((parse_f64(c)?, parse_f64(r)?));
        }
        if terms.len() != count {
            return Err(bad(&format!("declared {count} terms, found {}", terms.len())));
        }
        Self::new(model, dirac_weight, terms)
    }
}

fn parse_f64(s: &str) -> Result<f64> {
    s.parse()
        .map_err(|_| Error::Input(format!("kernel file: '{s}' is not a number")))
}

/// `(ν/F) Σ r_j e^{p_j t}`.
pub fn build_permeability_kernel(prs: &PoleResidueSet, f_factor: f64, nu: f64) -> Result<RelaxationKernel> {
    if !(f_factor > 0.0 && nu > 0.0) {
        return Err(Error::Input(format!(
            "need F > 0 and ν > 0, got F = {f_factor}, ν = {nu}"
        )));
    }
    let scale = nu / f_factor;
    let terms = prs.pairs.iter().map(|&(p, r)| (scale * r, -p)).collect();
    RelaxationKernel::new(KernelModel::Permeability, 0.0, terms)
}

/// `a δ(t) + Σ r_j e^{p_j t}` from a fit of `D`.
pub fn build_tortuosity_kernel(prs: &PoleResidueSet, a_coef: f64) -> Result<RelaxationKernel> {
    let terms = prs.pairs.iter().map(|&(p, r)| (r, -p)).collect();
    RelaxationKernel::new(KernelModel::Tortuosity, a_coef, terms)
}

/// Exponential part at `t ≥ 0`; the Dirac weight is reported separately.
pub fn eval_kernel(k: &RelaxationKernel, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("kernel time must be >= 0, got {t}")));
    }
    Ok(k.terms.iter().map(|(c, r)| c * (-r * t).exp()).sum())
}
