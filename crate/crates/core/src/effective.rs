//! Physical quantities recovered from the discrete measures: moments,
//! static permeability, α∞ and Λ, and the map from permeability data to
//! tortuosity data.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::data::{DataSet, FrequencySample, Target};
use crate::error::{Error, Result};
use crate::moments::MomentVector;
use crate::pade::PoleResidueSet;

/// Number of moments reported by default (`μ₀ … μ₉`).
pub const DEFAULT_MOMENT_COUNT: usize = 10;

/// Estimates derived from a pair of fitted measures `dλ` and `dσ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectiveParams {
    pub k0_est: f64,
    pub alpha_inf_est: f64,
    pub lambda_est: f64,
    pub moments_lambda: MomentVector,
    pub moments_sigma: MomentVector,
}

/// `μ_k = (-1)^{k+1} Σ r_j / p_j^{k+1}` for `k = 0..k_max`.
pub fn moments_from_poles(prs: &PoleResidueSet, k_max: usize) -> MomentVector {
    if k_max > DEFAULT_MOMENT_COUNT - 1 {
        log::warn!("moments beyond k = 9 are poorly conditioned");
    }
    let mut out = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
        let sum: f64 = prs.pairs.iter().map(|&(p, r)| r / p.powi(k as i32 + 1)).sum();
        out.push(sign * sum);
    }
    MomentVector(out)
}

/// `K₀ = ν μ₀(dλ) / F`.
pub fn static_permeability(prs: &PoleResidueSet, f_factor: f64, nu: f64) -> Result<f64> {
    if !(f_factor > 0.0 && nu > 0.0) {
        return Err(Error::Input(format!(
            "need F > 0 and ν > 0, got F = {f_factor}, ν = {nu}"
        )));
    }
    if prs.is_empty() {
        return Err(Error::Input("no poles to extrapolate from".into()));
    }
    Ok(nu * moments_from_poles(prs, 0)[0] / f_factor)
}

/// `α∞ = μ₀(dσ) μ₀(dλ)² / μ₁(dλ)`.
pub fn recover_alpha_inf(mu0_lambda: f64, mu1_lambda: f64, mu0_sigma: f64) -> Result<f64> {
    if mu1_lambda == 0.0 {
        return Err(Error::Division("μ₁(dλ) is zero".into()));
    }
    Ok(mu0_sigma * mu0_lambda * mu0_lambda / mu1_lambda)
}

/// `Λ = √(2 K₀ α∞ / (φ (μ₁/μ₀² - 1)))`.
pub fn recover_lambda(k0: f64, phi: f64, alpha_inf: f64, mu0_lambda: f64, mu1_lambda: f64) -> Result<f64> {
    if mu0_lambda == 0.0 {
        return Err(Error::Division("μ₀(dλ) is zero".into()));
    }
    let excess = mu1_lambda / (mu0_lambda * mu0_lambda) - 1.0;
    if !(excess > 0.0) {
        return Err(Error::ModelInconsistency(format!(
            "μ₁/μ₀² = {} must exceed 1",
            excess + 1.0
        )));
    }
    let lambda = (2.0 * k0 * alpha_inf / (phi * excess)).sqrt();
    if !lambda.is_finite() {
        return Err(Error::ModelInconsistency(format!(
            "Λ is not finite (μ₁/μ₀² - 1 = {excess:e})"
        )));
    }
    Ok(lambda)
}

/// Turns samples of `P` into samples of `D(s) = α∞/(s P(s)) - a/s`.
pub fn permeability_to_tortuosity_data(data: &DataSet, alpha_inf: f64, a_coef: f64) -> Result<DataSet> {
    if data.target == Target::D {
        return Err(Error::Input("data already hold D samples".into()));
    }
    let samples = data
        .samples
        .iter()
        .map(|smp| {
            if smp.s == Complex64::new(0.0, 0.0) {
                return Err(Error::Division("sample at s = 0".into()));
            }
            if smp.value == Complex64::new(0.0, 0.0) {
                return Err(Error::Division(format!("zero sample value at s = {}", smp.s)));
            }
            let d = alpha_inf / (smp.s * smp.value) - a_coef / smp.s;
            Ok(FrequencySample::new(smp.s, d))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DataSet::new(Target::D, samples))
}

/// `μ_p(dλ) - (μ₀(dλ)/α∞) Σ_{k+j=p-1} μ_k(dσ) μ_j(dλ)`, zero for a consistent pair.
pub fn moment_relation_residual(
    mu_lambda: &MomentVector,
    mu_sigma: &MomentVector,
    alpha_inf: f64,
    p: usize,
) -> Result<f64> {
    if p == 0 || mu_lambda.len() <= p || mu_sigma.len() < p {
        return Err(Error::Input(format!(
            "index p = {p} needs μ(dλ) up to p and μ(dσ) up to p - 1"
        )));
    }
    let conv: f64 = (0..p).map(|k| mu_sigma[k] * mu_lambda[p - 1 - k]).sum();
    Ok(mu_lambda[p] - mu_lambda[0] / alpha_inf * conv)
}

/// Assembles [`EffectiveParams`] from fitted `dλ` and `dσ`.
///
/// φ, ν and the α∞ used for the formation factor are taken as known.
pub fn estimate_params(
    lambda_fit: &PoleResidueSet,
    sigma_fit: &PoleResidueSet,
    phi: f64,
    nu: f64,
    f_factor: f64,
    k_max: usize,
) -> Result<EffectiveParams> {
    let moments_lambda = moments_from_poles(lambda_fit, k_max.max(1));
    let moments_sigma = moments_from_poles(sigma_fit, k_max);
    let k0_est = static_permeability(lambda_fit, f_factor, nu)?;
    let alpha_inf_est = recover_alpha_inf(moments_lambda[0], moments_lambda[1], moments_sigma[0])?;
    let lambda_est = recover_lambda(k0_est, phi, alpha_inf_est, moments_lambda[0], moments_lambda[1])?;
    Ok(EffectiveParams {
        k0_est,
        alpha_inf_est,
        lambda_est,
        moments_lambda,
        moments_sigma,
    })
}
