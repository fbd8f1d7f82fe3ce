//! Tikhonov-regularized least squares in SVD filter-factor form and
//! L-curve selection of the regularization parameter.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parallel::Execution;

/// Thin SVD of the stacked system, reused across regularization parameters.
#[derive(Debug, Clone)]
pub struct TikhonovSvd {
    b: DMatrix<f64>,
    d: DVector<f64>,
    v: DMatrix<f64>,
    sigma: DVector<f64>,
    /// `Uᵀ d`
    beta: DVector<f64>,
    /// `‖d - U Uᵀ d‖`, the part of `d` no choice of `y` can reach.
    d_perp: f64,
}

impl TikhonovSvd {
    pub fn new(b: &DMatrix<f64>, d: &DVector<f64>) -> Result<Self> {
        if b.nrows() != d.len() {
            return Err(Error::Input(format!(
                "matrix has {} rows but right-hand side has {} entries",
                b.nrows(),
                d.len()
            )));
        }
        if b.iter().chain(d.iter()).any(|x| !x.is_finite()) {
            return Err(Error::Input("system contains non-finite entries".into()));
        }
        let svd = b.clone().svd(true, true);
        let u = svd
            .u
            .ok_or_else(|| Error::Conditioning("SVD did not return U".into()))?;
        let v_t = svd
            .v_t
            .ok_or_else(|| Error::Conditioning("SVD did not return V".into()))?;
        let beta = u.transpose() * d;
        let d_perp = if b.nrows() > b.ncols() {
            (d - &u * &beta).norm()
        } else {
            0.0
        };
        Ok(Self {
            b: b.clone(),
            d: d.clone(),
            v: v_t.transpose(),
            sigma: svd.singular_values,
            beta,
            d_perp,
        })
    }

    pub fn singular_values(&self) -> &DVector<f64> {
        &self.sigma
    }

    /// Minimizer of `‖B y - d‖² + γ² ‖y‖²`.
    pub fn solve(&self, gamma: f64) -> Result<DVector<f64>> {
        if !(gamma >= 0.0) || !gamma.is_finite() {
            return Err(Error::Input(format!(
                "regularization parameter must be >= 0, got {gamma}"
            )));
        }
        let g2 = gamma * gamma;
        let mut coef = DVector::<f64>::zeros(self.sigma.len());
        for (i, &s) in self.sigma.iter().enumerate() {
            let den = s * s + g2;
            if den > 0.0 {
                coef[i] = s * self.beta[i] / den;
            }
        }
        Ok(&self.v * coef)
    }

    pub fn residual_norm(&self, y: &DVector<f64>) -> f64 {
        (&self.b * y - &self.d).norm()
    }

    /// `(‖B y_γ - d‖, ‖y_γ‖)` from the filter factors, free of the
    /// cancellation that an explicit residual suffers once `y_γ` interpolates.
    pub fn norms_at(&self, gamma: f64) -> (f64, f64) {
        let g2 = gamma * gamma;
        let (mut res2, mut sol2) = (self.d_perp * self.d_perp, 0.0);
        for (&s, &beta) in self.sigma.iter().zip(self.beta.iter()) {
            let den = s * s + g2;
            if den > 0.0 {
                res2 += (g2 * beta / den).powi(2);
                sol2 += (s * beta / den).powi(2);
            } else {
                res2 += beta * beta;
            }
        }
        (res2.sqrt(), sol2.sqrt())
    }
}

/// Solves `min ‖B y - d‖² + γ²‖y‖²` through the SVD of `B`.
pub fn tikhonov_solve(b: &DMatrix<f64>, d: &DVector<f64>, gamma: f64) -> Result<DVector<f64>> {
    if !(gamma >= 0.0) {
        return Err(Error::Input(format!(
            "regularization parameter must be >= 0, got {gamma}"
        )));
    }
    TikhonovSvd::new(b, d)?.solve(gamma)
}

/// `n` logarithmically spaced values from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo && lo.is_finite() && hi.is_finite()) || n == 0 {
        return Err(Error::Input(format!(
            "invalid log grid [{lo}, {hi}] with {n} points"
        )));
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    let (a, b) = (lo.log10(), hi.log10());
    let step = (b - a) / (n - 1) as f64;
    let mut g: Vec<f64> = (0..n).map(|i| 10f64.powf(a + step * i as f64)).collect();
    g[0] = lo;
    g[n - 1] = hi;
    Ok(g)
}

/// Outcome of an L-curve sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularizationReport {
    pub gamma_grid: Vec<f64>,
    pub residual_norms: Vec<f64>,
    pub solution_norms: Vec<f64>,
    /// Signed curvature of `(ln ρ, ln η)`; `None` at the ends and where undefined.
    pub curvature: Vec<Option<f64>>,
    pub chosen_index: usize,
    pub chosen_gamma: f64,
    /// Set when no corner could be located and the smallest γ was used.
    pub degenerate: bool,
}

impl RegularizationReport {
    /// Report for a single fixed γ.
    pub fn fixed(gamma: f64, residual: f64, solution: f64) -> Self {
        Self {
            gamma_grid: vec![gamma],
            residual_norms: vec![residual],
            solution_norms: vec![solution],
            curvature: vec![None],
            chosen_index: 0,
            chosen_gamma: gamma,
            degenerate: false,
        }
    }
}

/// Central steps shorter than this carry only rounding noise in log coordinates.
const MIN_CURVE_STEP: f64 = 1e-6;

/// Three-point curvature of a discrete curve sampled at a uniform parameter step.
///
/// Positive where the curve turns counter-clockwise, which for
/// `(ln ‖residual‖, ln ‖solution‖)` with γ increasing is the L-curve corner.
/// `None` where the curve has (numerically) stalled.
pub fn discrete_curvature(x: &[f64], y: &[f64]) -> Vec<Option<f64>> {
    let n = x.len();
    let mut out = vec![None; n];
    if n < 3 {
        return out;
    }
    for i in 1..n - 1 {
        let dx = 0.5 * (x[i + 1] - x[i - 1]);
        let dy = 0.5 * (y[i + 1] - y[i - 1]);
        let ddx = x[i + 1] - 2.0 * x[i] + x[i - 1];
        let ddy = y[i + 1] - 2.0 * y[i] + y[i - 1];
        let speed2 = dx * dx + dy * dy;
        if speed2 > MIN_CURVE_STEP * MIN_CURVE_STEP && speed2.is_finite() {
            let k = (dx * ddy - ddx * dy) / speed2.powf(1.5);
            if k.is_finite() {
                out[i] = Some(k);
            }
        }
    }
    out
}

/// Sweeps `gamma_grid` and picks the point of maximum L-curve curvature.
pub fn lcurve_select(
    b: &DMatrix<f64>,
    d: &DVector<f64>,
    gamma_grid: &[f64],
    exec: Execution,
) -> Result<(RegularizationReport, DVector<f64>)> {
    let svd = TikhonovSvd::new(b, d)?;
    lcurve_with(&svd, gamma_grid, exec)
}

pub(crate) fn lcurve_with(
    svd: &TikhonovSvd,
    gamma_grid: &[f64],
    exec: Execution,
) -> Result<(RegularizationReport, DVector<f64>)> {
    if gamma_grid.is_empty() {
        return Err(Error::Input("empty regularization grid".into()));
    }
    if gamma_grid.iter().any(|g| !(*g > 0.0) || !g.is_finite()) {
        return Err(Error::Input("regularization grid must be positive".into()));
    }
    if gamma_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Input(
            "regularization grid must be strictly increasing".into(),
        ));
    }
    let sweep = exec.map_slice(gamma_grid, |&g| svd.norms_at(g));
    let residual_norms: Vec<f64> = sweep.iter().map(|p| p.0).collect();
    let solution_norms: Vec<f64> = sweep.iter().map(|p| p.1).collect();

    let lx: Vec<f64> = residual_norms.iter().map(|r| r.ln()).collect();
    let ly: Vec<f64> = solution_norms.iter().map(|r| r.ln()).collect();
    let curvature = discrete_curvature(&lx, &ly);

    let flat = residual_norms.windows(2).all(|w| w[0] == w[1]);
    let best = curvature
        .iter()
        .enumerate()
        .filter_map(|(i, k)| k.map(|k| (i, k)))
        .max_by(|a, b| a.1.total_cmp(&b.1));
    let (chosen_index, degenerate) = match best {
        Some((i, k)) if !flat && k > 0.0 => (i, false),
        _ => {
            log::warn!("L-curve has no usable corner; falling back to the smallest regularization parameter");
            (0, true)
        }
    };
    let chosen_gamma = gamma_grid[chosen_index];
    let y = svd.solve(chosen_gamma)?;
    Ok((
        RegularizationReport {
            gamma_grid: gamma_grid.to_vec(),
            residual_norms,
            solution_norms,
            curvature,
            chosen_index,
            chosen_gamma,
            degenerate,
        },
        y,
    ))
}
