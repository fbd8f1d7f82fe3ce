//! Partial-fraction decomposition of the `[M-1/M]` approximant and
//! selection of the Stieltjes-admissible poles.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficients below this fraction of the largest (weighted) coefficient are trimmed.
pub const TRIM_RELATIVE: f64 = 1e-13;
/// Two poles closer than this (relative) are treated as a repeated pole.
pub const POLE_GAP_RELATIVE: f64 = 1e-10;
/// Relative size of an imaginary part still accepted as round-off.
pub const REALNESS_TOLERANCE: f64 = 1e-8;

/// `(a₀ + a₁s + … + a_{M-1}s^{M-1}) / (1 + b₁s + … + b_M s^M)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RationalApproximant {
    /// `a₀ … a_{M-1}`
    pub num_coeffs: Vec<f64>,
    /// `b₁ … b_M`; the constant term of the denominator is 1.
    pub den_coeffs: Vec<f64>,
    pub order: usize,
    /// Typical `|s|` of the data; coefficient `k` is weighted by `s_scale^k` when trimming.
    pub s_scale: f64,
}

impl RationalApproximant {
    pub fn new(num_coeffs: Vec<f64>, den_coeffs: Vec<f64>) -> Result<Self> {
        let order = den_coeffs.len();
        if order == 0 {
            return Err(Error::Input("denominator degree must be at least 1".into()));
        }
        if num_coeffs.len() != order {
            return Err(Error::Input(format!(
                "numerator needs {order} coefficients, got {}",
                num_coeffs.len()
            )));
        }
        Ok(Self {
            num_coeffs,
            den_coeffs,
            order,
            s_scale: 1.0,
        })
    }

    pub fn with_s_scale(mut self, s_scale: f64) -> Self {
        self.s_scale = s_scale;
        self
    }

    /// Full denominator `[1, b₁, …, b_M]`.
    pub fn denominator(&self) -> Vec<f64> {
        std::iter::once(1.0)
            .chain(self.den_coeffs.iter().copied())
            .collect()
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        horner(&self.num_coeffs, s) / horner(&self.denominator(), s)
    }
}

/// Evaluates `Σ c_k s^k`.
pub fn horner(coeffs: &[f64], s: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * s + c)
}

fn horner_derivative(coeffs: &[f64], s: Complex64) -> Complex64 {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, (k, &c)| acc * s + c * k as f64)
}

/// A pole with its residue before filtering; either may be complex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawPole {
    pub pole: Complex64,
    pub residue: Complex64,
}

/// Roots of `Σ c_k s^k` (`c` already trimmed, `c_last ≠ 0`) from the
/// eigenvalues of a balanced companion matrix, refined by Newton steps.
pub fn polynomial_roots(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let deg = coeffs.len().saturating_sub(1);
    if deg == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[deg];
    if lead == 0.0 || !lead.is_finite() {
        return Err(Error::Input("leading coefficient must be nonzero".into()));
    }
    if deg == 1 {
        return Ok(vec![Complex64::new(-coeffs[0] / lead, 0.0)]);
    }
    // rescale s = ρt so the root moduli cluster around 1
    let rho = if coeffs[0] != 0.0 {
        (coeffs[0].abs() / lead.abs()).powf(1.0 / deg as f64)
    } else {
        1.0
    };
    let scaled: Vec<f64> = coeffs
        .iter()
        .enumerate()
        .map(|(k, &c)| c * rho.powi(k as i32) / (lead * rho.powi(deg as i32)))
        .collect();
    let mut comp = DMatrix::<f64>::zeros(deg, deg);
    for i in 1..deg {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..deg {
        comp[(i, deg - 1)] = -scaled[i];
    }
    nalgebra::linalg::balancing::balance_parlett_reinsch(&mut comp);
    let eig = comp.complex_eigenvalues();
    let mut roots: Vec<Complex64> = eig.iter().map(|z| Complex64::new(z.re, z.im) * rho).collect();
    for r in roots.iter_mut() {
        *r = newton_polish(coeffs, *r);
    }
    Ok(roots)
}

fn newton_polish(coeffs: &[f64], z0: Complex64) -> Complex64 {
    let mut z = z0;
    let mut fz = horner(coeffs, z).norm();
    for _ in 0..8 {
        let d = horner_derivative(coeffs, z);
        if d.norm() == 0.0 {
            break;
        }
        let next = z - horner(coeffs, z) / d;
        let fn_ = horner(coeffs, next).norm();
        if !(fn_ < fz) {
            break;
        }
        z = next;
        fz = fn_;
    }
    z
}

/// Poles (denominator roots) and residues `Num(p)/Den'(p)` of every simple pole.
pub fn partial_fractions(r: &RationalApproximant) -> Result<Vec<RawPole>> {
    let den = r.denominator();
    let scale = if r.s_scale > 0.0 && r.s_scale.is_finite() {
        r.s_scale
    } else {
        1.0
    };
    let weighted: Vec<f64> = den
        .iter()
        .enumerate()
        .map(|(k, c)| c.abs() * scale.powi(k as i32))
        .collect();
    let wmax = weighted.iter().cloned().fold(0.0, f64::max);
    let mut deg = den.len() - 1;
    while deg > 0 && weighted[deg] < TRIM_RELATIVE * wmax {
        deg -= 1;
    }
    if deg == 0 {
        return Err(Error::Input("denominator is constant after trimming".into()));
    }
    let den = &den[..=deg];
    let poles = polynomial_roots(den)?;
    for i in 0..poles.len() {
        for j in 0..i {
            let gap = (poles[i] - poles[j]).norm();
            if gap < POLE_GAP_RELATIVE * poles[i].norm().max(poles[j].norm()) {
                return Err(Error::Multiplicity(format!(
                    "poles {} and {} coincide to {POLE_GAP_RELATIVE:e} relative",
                    poles[i], poles[j]
                )));
            }
        }
    }
    Ok(poles
        .into_iter()
        .map(|p| RawPole {
            pole: p,
            residue: horner(&r.num_coeffs, p) / horner_derivative(den, p),
        })
        .collect())
}

/// Retained `(pole, residue)` pairs: real negative poles with positive residues.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PoleResidueSet {
    /// `(p_j, r_j)`, sorted by pole from the origin outwards.
    pub pairs: Vec<(f64, f64)>,
    /// Number of raw poles that were discarded.
    pub discarded: usize,
}

impl PoleResidueSet {
    pub fn new(mut pairs: Vec<(f64, f64)>) -> Self {
        pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
        Self { pairs, discarded: 0 }
    }

    /// `M'`
    pub fn retained_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// `Σ r_j / (s - p_j)`
    pub fn eval(&self, s: Complex64) -> Complex64 {
        self.pairs
            .iter()
            .map(|&(p, r)| Complex64::new(r, 0.0) / (s - p))
            .sum()
    }

    pub fn residue_sum(&self) -> f64 {
        self.pairs.iter().map(|p| p.1).sum()
    }

    /// Multiplies all residues by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            pairs: self.pairs.iter().map(|&(p, r)| (p, r * c)).collect(),
            discarded: self.discarded,
        }
    }
}

/// Keeps the pairs with a real negative pole and a real positive residue.
pub fn filter_poles(raw: &[RawPole]) -> Result<PoleResidueSet> {
    let mut pairs = Vec::new();
    for rp in raw {
        let real_pole = rp.pole.im.abs() <= REALNESS_TOLERANCE * rp.pole.norm();
        let real_res = rp.residue.im.abs() <= REALNESS_TOLERANCE * rp.residue.norm();
        if real_pole && real_res && rp.pole.re < 0.0 && rp.residue.re > 0.0 {
            pairs.push((rp.pole.re, rp.residue.re));
        }
    }
    if pairs.is_empty() {
        return Err(Error::ReconstructionFailure(format!(
            "none of the {} poles is real negative with a positive residue",
            raw.len()
        )));
    }
    let discarded = raw.len() - pairs.len();
    let mut set = PoleResidueSet::new(pairs);
    set.discarded = discarded;
    Ok(set)
}
