//! Closed-form Johnson–Koplik–Dashen (JKD) permeability and tortuosity.
//!
//! The JKD functions are written through the auxiliary Stieltjes functions
//!
//! ```text
//! P(s) = C₂ / (C₂ s + √(1 + C₁ s)),              s = -iω
//! D(s) = α∞ + α∞ (√(1 + C₁ s) - 1) / (C₂ s)
//! ```
//!
//! with the square root taken on the branch `1 + C₁ s = r e^{iθ}`,
//! `-π ≤ θ < π`, so the only singularities of `P` are the cut
//! `(-∞, -1/C₁]` and a simple pole at `-1/ξ_p`. The measure `dλ` of `P` is
//! a density `ψ` on `(0, C₁)` plus a point mass `r` at `ξ_p`.

mod series;

pub use series::{exact_moments_lambda, exact_moments_sigma, sigma_moments_from_series};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::data::{check_frequencies, DataSet, FrequencySample, Target};
use crate::error::{Error, Result};

/// Physical inputs of the JKD model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JkdParams {
    /// Porosity φ, in (0, 1).
    pub phi: f64,
    /// Infinite-frequency tortuosity α∞.
    pub alpha_inf: f64,
    /// Static permeability K₀ (m²).
    pub k0: f64,
    /// Kinematic viscosity ν = η/ρ_f (m²/s).
    pub nu: f64,
    /// Weighted volume-to-surface ratio Λ (m).
    #[serde(rename = "lambda")]
    pub lambda_len: f64,
}

impl JkdParams {
    /// Water-saturated cancellous bone: φ = 0.67, α∞ = 1.08, K₀ = 7e-9 m²,
    /// ν = 30e-3 / 1060 m²/s, Λ = 1e-5 m.
    pub fn cancellous_bone() -> Self {
        Self {
            phi: 0.67,
            alpha_inf: 1.08,
            k0: 7e-9,
            nu: 30e-3 / 1060.0,
            lambda_len: 1e-5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("phi", self.phi),
            ("alpha_inf", self.alpha_inf),
            ("k0", self.k0),
            ("nu", self.nu),
            ("lambda", self.lambda_len),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Domain(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        if self.phi >= 1.0 {
            return Err(Error::Domain(format!("porosity must be < 1, got {}", self.phi)));
        }
        Ok(())
    }
}

impl Default for JkdParams {
    fn default() -> Self {
        Self::cancellous_bone()
    }
}

/// Constants derived from [`JkdParams`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedConstants {
    /// Formation factor F = α∞/φ.
    pub f_factor: f64,
    /// C₁ = 4 C₂ F K₀ / Λ² (s).
    pub c1: f64,
    /// C₂ = F K₀ / ν (s).
    pub c2: f64,
    /// Location of the point mass of dλ; `P` has its pole at `-1/ξ_p`.
    pub xi_p: f64,
    /// Strength of the ω = 0 pole of the tortuosity, a = νφ/K₀ = α∞/C₂ (1/s).
    pub a_coef: f64,
}

pub fn derive_constants(p: &JkdParams) -> Result<DerivedConstants> {
    p.validate()?;
    let f_factor = p.alpha_inf / p.phi;
    let c2 = f_factor * p.k0 / p.nu;
    let c1 = 4.0 * c2 * f_factor * p.k0 / (p.lambda_len * p.lambda_len);
    let xi_p = 0.5 * (c1 + c1.hypot(2.0 * c2));
    let a_coef = p.nu * p.phi / p.k0;
    Ok(DerivedConstants {
        f_factor,
        c1,
        c2,
        xi_p,
        a_coef,
    })
}

/// `√(1 + C₁ s)` on the branch with cut `(-∞, -1/C₁]`.
fn branch_sqrt(c1: f64, s: Complex64) -> Result<Complex64> {
    let z = Complex64::new(1.0, 0.0) + s * c1;
    if z.im == 0.0 && z.re <= 0.0 {
        return Err(Error::Singularity(format!(
            "s = {s} lies on the branch cut (-inf, {}]",
            -1.0 / c1
        )));
    }
    // Off the negative real axis the principal root coincides with -π ≤ θ < π.
    Ok(z.sqrt())
}

/// `P^D(s) = C₂ / (C₂ s + √(1 + C₁ s))`.
pub fn jkd_p_of_s(p: &JkdParams, s: Complex64) -> Result<Complex64> {
    let c = derive_constants(p)?;
    p_of_s_with(&c, s)
}

pub(crate) fn p_of_s_with(c: &DerivedConstants, s: Complex64) -> Result<Complex64> {
    let root = branch_sqrt(c.c1, s)?;
    let den = s * c.c2 + root;
    let pole = -1.0 / c.xi_p;
    if den == Complex64::new(0.0, 0.0) || (s - pole).norm() <= 8.0 * f64::EPSILON * pole.abs() {
        return Err(Error::Singularity(format!(
            "s = {s} is the pole -1/xi_p = {pole}"
        )));
    }
    Ok(c.c2 / den)
}

/// Dynamic permeability `K^D(ω) = (ν/F) P^D(-iω)`.
pub fn jkd_permeability(p: &JkdParams, omega: f64) -> Result<Complex64> {
    let c = derive_constants(p)?;
    let s = Complex64::new(0.0, -omega);
    Ok(p_of_s_with(&c, s)? * (p.nu / c.f_factor))
}

/// `D^D(s) = α∞ + α∞ (√(1 + C₁ s) - 1)/(C₂ s)`, continuous at `s = 0`.
pub fn jkd_d_of_s(p: &JkdParams, s: Complex64) -> Result<Complex64> {
    let c = derive_constants(p)?;
    d_of_s_with(p, &c, s)
}

pub(crate) fn d_of_s_with(p: &JkdParams, c: &DerivedConstants, s: Complex64) -> Result<Complex64> {
    let root = branch_sqrt(c.c1, s)?;
    // (√(1+x) - 1)/x = 1/(√(1+x) + 1) removes the cancellation near s = 0.
    let tail = Complex64::new(p.alpha_inf * c.c1 / c.c2, 0.0) / (root + 1.0);
    Ok(tail + p.alpha_inf)
}

/// Dynamic tortuosity `T^D(ω) = a/s + D^D(s)` with `s = -iω`, `ω ≠ 0`.
pub fn jkd_tortuosity(p: &JkdParams, omega: f64) -> Result<Complex64> {
    if omega == 0.0 {
        return Err(Error::Singularity("tortuosity has a pole at omega = 0".into()));
    }
    let c = derive_constants(p)?;
    let s = Complex64::new(0.0, -omega);
    Ok(d_of_s_with(p, &c, s)? + c.a_coef / s)
}

/// Density ψ of `dλ^D` on `(0, C₁)`.
pub fn spectral_density(p: &JkdParams, u: f64) -> Result<f64> {
    let c = derive_constants(p)?;
    if !(u > 0.0 && u < c.c1) {
        return Err(Error::Domain(format!("u = {u} outside (0, C1 = {})", c.c1)));
    }
    let w = u * (c.c1 - u);
    Ok(c.c2 * w.sqrt() / (PI * (c.c2 * c.c2 + w)))
}

/// Location `ξ_p` and strength `r` of the point mass of `dλ^D`.
pub fn point_mass(p: &JkdParams) -> Result<(f64, f64)> {
    let c = derive_constants(p)?;
    let xi = c.xi_p;
    let r = 2.0 * c.c2 * (xi * (xi - c.c1)).sqrt() / (2.0 * xi - c.c1);
    Ok((xi, r))
}

/// Samples `K`, `P` or `D` of the JKD model on the frequency grid.
pub fn synth_dataset(p: &JkdParams, grid: &[f64], target: Target) -> Result<DataSet> {
    check_frequencies(grid)?;
    let c = derive_constants(p)?;
    let samples = grid
        .iter()
        .map(|&omega| {
            let s = Complex64::new(0.0, -omega);
            let value = match target {
                Target::K => p_of_s_with(&c, s)? * (p.nu / c.f_factor),
                Target::P => p_of_s_with(&c, s)?,
                Target::D => d_of_s_with(p, &c, s)?,
            };
            Ok(FrequencySample::from_omega(omega, value))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DataSet::new(target, samples))
}

/// Exact evaluator of the sampled function at arbitrary `s`.
pub fn exact_function(p: &JkdParams, target: Target, s: Complex64) -> Result<Complex64> {
    let c = derive_constants(p)?;
    match target {
        Target::K => Ok(p_of_s_with(&c, s)? * (p.nu / c.f_factor)),
        Target::P => p_of_s_with(&c, s),
        Target::D => d_of_s_with(p, &c, s),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bone() -> JkdParams {
        JkdParams::cancellous_bone()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn derived_constants_for_bone() {
        let c = derive_constants(&bone()).unwrap();
        assert!(rel(c.c1, 0.17994) < 5e-5);
        assert!(rel(c.c2, 3.98687e-4) < 5e-5);
        assert!(rel(-1.0 / c.xi_p, -5.55724) < 1e-5);
        assert!(rel(c.a_coef, 2.708895e3) < 1e-6);
        assert!(c.xi_p > c.c1);
        assert!(rel(c.a_coef, bone().alpha_inf / c.c2) < 1e-14);
    }

    #[test]
    fn rejects_bad_params() {
        let mut p = bone();
        p.k0 = 0.0;
        assert!(matches!(derive_constants(&p), Err(Error::Domain(_))));
        let mut p = bone();
        p.phi = 1.0;
        assert!(matches!(derive_constants(&p), Err(Error::Domain(_))));
        let mut p = bone();
        p.nu = -1.0;
        assert!(p.validate().is_err());
    }

    #[test]
    fn static_limit_and_conjugate_symmetry() {
        let p = bone();
        let k = jkd_permeability(&p, 1e-9).unwrap();
        assert!(rel(k.re, 7e-9) < 1e-9);
        for &w in &[0.3, 1.0, 51.0, 4.0e3, 2.0e6] {
            let kp = jkd_permeability(&p, w).unwrap();
            let km = jkd_permeability(&p, -w).unwrap();
            assert!((kp.conj() - km).norm() <= 1e-15 * kp.norm());
        }
    }

    #[test]
    fn p_at_zero_is_c2() {
        let p = bone();
        let v = jkd_p_of_s(&p, Complex64::new(0.0, 0.0)).unwrap();
        assert!(rel(v.re, 3.986866e-4) < 2e-7);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn p_matches_scaled_permeability() {
        let p = bone();
        let c = derive_constants(&p).unwrap();
        for &w in &[1.0, 17.0, 400.0] {
            let ps = jkd_p_of_s(&p, Complex64::new(0.0, -w)).unwrap();
            let k = jkd_permeability(&p, w).unwrap() * (c.f_factor / p.nu);
            assert!((ps - k).norm() <= 1e-14 * ps.norm());
        }
    }

    #[test]
    fn cut_and_pole_are_errors() {
        let p = bone();
        let c = derive_constants(&p).unwrap();
        let on_cut = Complex64::new(-10.0, 0.0);
        assert!(matches!(jkd_p_of_s(&p, on_cut), Err(Error::Singularity(_))));
        assert!(matches!(jkd_d_of_s(&p, on_cut), Err(Error::Singularity(_))));
        let branch_point = Complex64::new(-1.0 / c.c1, 0.0);
        assert!(jkd_p_of_s(&p, branch_point).is_err());
        let pole = Complex64::new(-1.0 / c.xi_p, 0.0);
        assert!(matches!(jkd_p_of_s(&p, pole), Err(Error::Singularity(_))));
        // just above the cut is fine
        assert!(jkd_p_of_s(&p, Complex64::new(-10.0, 1e-9)).is_ok());
        assert!(jkd_tortuosity(&p, 0.0).is_err());
    }

    #[test]
    fn d_limits() {
        let p = bone();
        let d0 = jkd_d_of_s(&p, Complex64::new(0.0, 0.0)).unwrap();
        assert!(rel(d0.re, 244.8054) < 1e-6);
        let big = jkd_d_of_s(&p, Complex64::new(1e20, 0.0)).unwrap();
        assert!(rel(big.re, 1.08) < 1e-5);
        let c = derive_constants(&p).unwrap();
        let s: f64 = 1e8;
        let asym = p.alpha_inf * (1.0 + c.c1.sqrt() / (c.c2 * s.sqrt()));
        let v = jkd_d_of_s(&p, Complex64::new(s, 0.0)).unwrap();
        assert!(rel(v.re, asym) < 1e-3);
    }

    #[test]
    fn density_values() {
        let p = bone();
        let c = derive_constants(&p).unwrap();
        assert!(spectral_density(&p, 1e-14).unwrap() < 1e-4);
        assert!(spectral_density(&p, c.c1 * (1.0 - 1e-14)).unwrap() < 1e-4);
        let mid = spectral_density(&p, c.c1 / 2.0).unwrap();
        let expected = c.c2 * (c.c1 / 2.0) / (PI * (c.c2 * c.c2 + c.c1 * c.c1 / 4.0));
        assert!(rel(mid, expected) < 1e-14);
        assert!(spectral_density(&p, 0.0).is_err());
        assert!(spectral_density(&p, c.c1).is_err());
        assert!(spectral_density(&p, -1.0).is_err());
    }

    #[test]
    fn point_mass_is_positive_beyond_cut() {
        let p = bone();
        let c = derive_constants(&p).unwrap();
        let (xi, r) = point_mass(&p).unwrap();
        assert!(xi > c.c1);
        assert!(r > 0.0);
        assert!(rel(-1.0 / xi, -5.55724) < 1e-5);
    }

    #[test]
    fn synth_shapes() {
        let p = bone();
        let one = synth_dataset(&p, &[1.0], Target::K).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one.samples[0].value, jkd_permeability(&p, 1.0).unwrap());
        let grid: Vec<f64> = (1..=51).map(f64::from).collect();
        let ds = synth_dataset(&p, &grid, Target::P).unwrap();
        assert_eq!(ds.len(), 51);
        let neg: Vec<f64> = grid.iter().map(|w| -w).collect();
        let dm = synth_dataset(&p, &neg, Target::P).unwrap();
        for (a, b) in ds.samples.iter().zip(&dm.samples) {
            assert!((a.value.conj() - b.value).norm() <= 1e-16 * a.value.norm());
        }
        assert!(matches!(
            synth_dataset(&p, &[1.0, 2.0, 1.0], Target::P),
            Err(Error::Input(_))
        ));
        assert!(synth_dataset(&p, &[], Target::P).is_err());
    }
}
