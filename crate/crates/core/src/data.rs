//! Frequency-domain samples shared by the oracle, the fitting pipeline and the CLI.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Which function a data set samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Target {
    /// Dynamic permeability `K(ω)` in m².
    K,
    /// `P(s) = (F/ν) K(is)`, the permeability Stieltjes function.
    P,
    /// `D(s) = T(ω) - a/s`, the regular part of the tortuosity.
    D,
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "K" | "k" => Ok(Target::K),
            "P" | "p" => Ok(Target::P),
            "D" | "d" => Ok(Target::D),
            other => Err(Error::Input(format!(
                "unknown target `{other}` (expected K, P or D)"
            ))),
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Target::K => "K",
            Target::P => "P",
            Target::D => "D",
        };
        f.write_str(name)
    }
}

/// One sample `(s, value)` with `s = -iω` the Laplace variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencySample {
    pub s: Complex64,
    pub value: Complex64,
}

impl FrequencySample {
    pub fn new(s: Complex64, value: Complex64) -> Self {
        Self { s, value }
    }

    /// Sample at real angular frequency `omega`, i.e. `s = -iω`.
    pub fn from_omega(omega: f64, value: Complex64) -> Self {
        Self {
            s: Complex64::new(0.0, -omega),
            value,
        }
    }

    /// `ω = i s`; real whenever `s` is purely imaginary.
    pub fn omega(&self) -> Complex64 {
        Complex64::i() * self.s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DataSet {
    pub target: Target,
    pub samples: Vec<FrequencySample>,
}

impl DataSet {
    pub fn new(target: Target, samples: Vec<FrequencySample>) -> Self {
        Self { target, samples }
    }

    /// Builds a data set from `(ω, value)` pairs, rejecting zero and duplicate frequencies.
    pub fn from_omegas(target: Target, pairs: &[(f64, Complex64)]) -> Result<Self> {
        let omegas: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        check_frequencies(&omegas)?;
        let samples = pairs
            .iter()
            .map(|&(w, v)| FrequencySample::from_omega(w, v))
            .collect();
        Ok(Self { target, samples })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Multiplies every value by `factor`, e.g. `F/ν` to turn `K` samples into `P` samples.
    pub fn scaled(&self, factor: f64, target: Target) -> DataSet {
        DataSet {
            target,
            samples: self
                .samples
                .iter()
                .map(|smp| FrequencySample::new(smp.s, smp.value * factor))
                .collect(),
        }
    }
}

/// Rejects empty grids, non-finite or zero frequencies and exact duplicates.
pub fn check_frequencies(omegas: &[f64]) -> Result<()> {
    if omegas.is_empty() {
        return Err(Error::Input("empty frequency list".into()));
    }
    for (i, &w) in omegas.iter().enumerate() {
        if !w.is_finite() {
            return Err(Error::Input(format!("frequency #{i} is not finite")));
        }
        if w == 0.0 {
            return Err(Error::Input(format!(
                "frequency #{i} is zero (s = 0 is not allowed)"
            )));
        }
    }
    let mut sorted = omegas.to_vec();
    sorted.sort_by(f64::total_cmp);
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::Input(format!("duplicate frequency {}", w[0])));
    }
    Ok(())
}
