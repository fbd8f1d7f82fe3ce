//! Exact moments of the JKD measures from Taylor coefficients at `s = 0`.
//!
//! All series arithmetic is carried out over exact rationals built from the
//! `f64` inputs, so the only rounding is the final conversion to `f64`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::JkdParams;
use crate::error::{Error, Result};
use crate::moments::MomentVector;

fn exact(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::Domain(format!("non-finite value {x}")))
}

struct ExactConstants {
    alpha: BigRational,
    c1: BigRational,
    c2: BigRational,
    /// 2 K₀ α∞² / (φ Λ²)
    sigma_shift: BigRational,
}

fn exact_constants(p: &JkdParams) -> Result<ExactConstants> {
    p.validate()?;
    let phi = exact(p.phi)?;
    let alpha = exact(p.alpha_inf)?;
    let k0 = exact(p.k0)?;
    let nu = exact(p.nu)?;
    let lam = exact(p.lambda_len)?;
    let f = &alpha / &phi;
    let c2 = &f * &k0 / &nu;
    let four = BigRational::from_integer(BigInt::from(4));
    let two = BigRational::from_integer(BigInt::from(2));
    let c1 = four * &c2 * &f * &k0 / (&lam * &lam);
    let sigma_shift = two * &k0 * &alpha * &alpha / (&phi * &lam * &lam);
    Ok(ExactConstants {
        alpha,
        c1,
        c2,
        sigma_shift,
    })
}

/// `binom(1/2, k)` for `k = 0..=n`.
fn half_binomials(n: usize) -> Vec<BigRational> {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut out = Vec::with_capacity(n + 1);
    let mut b = BigRational::one();
    out.push(b.clone());
    for j in 0..n {
        let jr = BigRational::from_integer(BigInt::from(j));
        b = b * (&half - jr) / BigRational::from_integer(BigInt::from(j + 1));
        out.push(b.clone());
    }
    out
}

fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Moments of `dλ^D`: `μ_k = (-1)^k P^{(k)}(0)/k!`.
///
/// The Taylor series of `√(1 + C₁ s)` is added to `C₂ s` and divided into
/// `C₂` by series long division; the signs are then alternated.
pub fn exact_moments_lambda(p: &JkdParams, k_max: usize) -> Result<MomentVector> {
    let c = exact_constants(p)?;
    let binom = half_binomials(k_max);
    // denominator series: √(1 + C₁ s) + C₂ s
    let mut den = Vec::with_capacity(k_max + 1);
    let mut c1_pow = BigRational::one();
    for b in &binom {
        den.push(b * &c1_pow);
        c1_pow *= &c.c1;
    }
    if k_max >= 1 {
        den[1] = &den[1] + &c.c2;
    }
    // den[0] == 1
    let mut q: Vec<BigRational> = Vec::with_capacity(k_max + 1);
    q.push(c.c2.clone());
    for k in 1..=k_max {
        let mut acc = BigRational::zero();
        for j in 1..=k {
            acc += &den[j] * &q[k - j];
        }
        q.push(-acc);
    }
    let values = q
        .iter()
        .enumerate()
        .map(|(k, qk)| {
            let m = if k % 2 == 0 { qk.clone() } else { -qk };
            debug_assert!(m.is_positive());
            to_f64(&m)
        })
        .collect();
    Ok(MomentVector(values))
}

/// Moments of `dσ^D` from the closed-form Taylor coefficients of `D^D`:
///
/// `c₀ = α∞ + 2K₀α∞²/(φΛ²)`,
/// `c_k = (-1)^k C₁^{k+1} α∞ (2k-1)!! / ((k+1)! 2^{k+1} C₂)`, and `μ_k = (-1)^k c_k`.
pub fn exact_moments_sigma(p: &JkdParams, k_max: usize) -> Result<MomentVector> {
    let c = exact_constants(p)?;
    let mut values = Vec::with_capacity(k_max + 1);
    values.push(to_f64(&(&c.alpha + &c.sigma_shift)));
    let mut double_fact = BigInt::one();
    let mut fact = BigInt::one(); // (k+1)!
    let mut pow2 = BigInt::from(2); // 2^{k+1}
    let mut c1_pow = c.c1.clone(); // C₁^{k+1}
    for k in 1..=k_max {
        double_fact *= BigInt::from(2 * k - 1);
        fact *= BigInt::from(k + 1);
        pow2 *= 2;
        c1_pow *= &c.c1;
        let num = &c1_pow * &c.alpha * BigRational::from_integer(double_fact.clone());
        let den = BigRational::from_integer(&fact * &pow2) * &c.c2;
        // (-1)^k c_k is positive
        values.push(to_f64(&(num / den)));
    }
    Ok(MomentVector(values))
}

/// Same moments as [`exact_moments_sigma`], obtained instead from the
/// binomial series of `(√(1 + C₁ s) - 1)/s`. Used to cross-check the closed form.
pub fn sigma_moments_from_series(p: &JkdParams, k_max: usize) -> Result<MomentVector> {
    let c = exact_constants(p)?;
    let binom = half_binomials(k_max + 1);
    let lead = &c.alpha * &c.c1 / &c.c2;
    let mut c1_pow = BigRational::one();
    let mut values = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let mut ck = &lead * &binom[k + 1] * &c1_pow;
        if k == 0 {
            ck += &c.alpha;
        }
        let m = if k % 2 == 0 { ck } else { -ck };
        values.push(to_f64(&m));
        c1_pow *= &c.c1;
    }
    Ok(MomentVector(values))
}
