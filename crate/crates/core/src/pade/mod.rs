//! Reconstruction of a Stieltjes function `∫ dμ(Θ)/(1 + sΘ)` from samples
//! by its `[M-1/M]` multipoint Padé approximant.
//!
//! The pipeline: add the conjugate samples, assemble the `2M × 2M` complex
//! interpolation system, scale its columns to unit norm, stack real and
//! imaginary parts into a `4M × 2M` real least-squares problem, solve it
//! with Tikhonov regularization chosen on the L-curve, undo the scaling and
//! decompose the approximant into poles and residues. Only real negative
//! poles with positive residues survive; they form a discrete measure.

mod poles;
mod system;
mod tikhonov;

pub use poles::{
    filter_poles, horner, partial_fractions, polynomial_roots, PoleResidueSet, RationalApproximant, RawPole,
    POLE_GAP_RELATIVE, REALNESS_TOLERANCE, TRIM_RELATIVE,
};
pub use system::{assemble_system, augment_conjugates, scale_columns, stack_real_imag};
pub use tikhonov::{
    discrete_curvature, lcurve_select, log_grid, tikhonov_solve, RegularizationReport, TikhonovSvd,
};

use serde::{Deserialize, Serialize};

use crate::data::DataSet;
use crate::error::{Error, Result};
use crate::parallel::Execution;

/// How the Tikhonov parameter is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GammaSelection {
    /// Maximum-curvature point of the L-curve over `n` log-spaced values in `[lo, hi]`.
    LCurve {
        lo: f64,
        hi: f64,
        n: usize,
    },
    Fixed(f64),
}

impl Default for GammaSelection {
    fn default() -> Self {
        GammaSelection::LCurve {
            lo: 1e-16,
            hi: 1.0,
            n: 200,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FitOptions {
    pub gamma: GammaSelection,
    /// Keep samples at real `s` unpaired instead of rejecting them.
    pub allow_real: bool,
    pub exec: Execution,
}

impl FitOptions {
    pub fn fixed_gamma(gamma: f64) -> Self {
        Self {
            gamma: GammaSelection::Fixed(gamma),
            ..Self::default()
        }
    }
}

/// Everything produced by [`fit`].
#[derive(Debug, Clone, PartialEq)]
pub struct Fit {
    pub approximant: RationalApproximant,
    pub poles: PoleResidueSet,
    pub report: RegularizationReport,
    pub raw_poles: Vec<RawPole>,
}

/// Runs the full reconstruction of order `order` on `data`.
pub fn fit(data: &DataSet, order: usize, opts: &FitOptions) -> Result<Fit> {
    if data.is_empty() {
        return Err(Error::Input("empty data set".into()));
    }
    if order == 0 {
        return Err(Error::Input("order M must be at least 1".into()));
    }
    let points = augment_conjugates(data, opts.allow_real)?;
    if points.len() != 2 * order {
        return Err(Error::Input(format!(
            "order M = {order} needs {order} conjugate-paired samples ({} points), got {}",
            2 * order,
            points.len()
        )));
    }
    let (a, d) = assemble_system(&points, order)?;
    let (b, scales) = scale_columns(&a)?;
    let (b_hat, d_hat) = stack_real_imag(&b, &d);
    let svd = TikhonovSvd::new(&b_hat, &d_hat)?;
    let (report, y) = match opts.gamma {
        GammaSelection::Fixed(g) => {
            let y = svd.solve(g)?;
            let rep = RegularizationReport::fixed(g, svd.residual_norm(&y), y.norm());
            (rep, y)
        }
        GammaSelection::LCurve { lo, hi, n } => {
            let grid = log_grid(lo, hi, n)?;
            tikhonov::lcurve_with(&svd, &grid, opts.exec)?
        }
    };
    let x: Vec<f64> = y.iter().zip(&scales).map(|(yi, c)| yi * c).collect();
    let s_scale = points.samples.iter().map(|p| p.s.norm()).fold(0.0, f64::max);
    let approximant =
        RationalApproximant::new(x[..order].to_vec(), x[order..].to_vec())?.with_s_scale(s_scale);
    let raw_poles = partial_fractions(&approximant)?;
    let poles = filter_poles(&raw_poles)?;
    Ok(Fit {
        approximant,
        poles,
        report,
        raw_poles,
    })
}

/// Fits several independent problems, e.g. an order sweep, under one execution policy.
pub fn fit_batch(problems: &[(DataSet, usize)], opts: &FitOptions) -> Vec<Result<Fit>> {
    // the outer loop carries the parallelism; each inner sweep runs sequentially
    let inner = FitOptions {
        exec: Execution::Sequential,
        ..*opts
    };
    opts.exec.map_slice(problems, |(data, m)| fit(data, *m, &inner))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{FrequencySample, Target};
    use num_complex::Complex64;

    #[test]
    fn one_pole_function_recovered() {
        // f(s) = r/(s - p)
        let (p, r) = (-3.0, 2.5);
        let s = Complex64::new(0.0, -1.7);
        let ds = DataSet::new(Target::P, vec![FrequencySample::new(s, r / (s - p))]);
        let fit = fit(&ds, 1, &FitOptions::fixed_gamma(0.0)).unwrap();
        assert_eq!(fit.poles.retained_count(), 1);
        let (pp, rr) = fit.poles.pairs[0];
        assert!(((pp - p) / p).abs() < 1e-10);
        assert!(((rr - r) / r).abs() < 1e-10);
    }

    #[test]
    fn empty_and_mismatched_inputs() {
        let empty = DataSet::new(Target::P, vec![]);
        assert!(matches!(
            fit(&empty, 1, &FitOptions::default()),
            Err(Error::Input(_))
        ));
        let s = Complex64::new(0.0, -1.0);
        let ds = DataSet::new(Target::P, vec![FrequencySample::new(s, Complex64::new(1.0, 0.5))]);
        assert!(matches!(
            fit(&ds, 2, &FitOptions::default()),
            Err(Error::Input(_))
        ));
    }
}
