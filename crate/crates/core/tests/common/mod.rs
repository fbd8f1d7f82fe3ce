//! Helpers shared by the integration tests.
#![allow(dead_code)]

use dynperm::jkd::{synth_dataset, JkdParams};
use dynperm::sampling::{make_grid, GridSpec, GridStrategy};
use dynperm::{DataSet, Target};

pub fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// Adaptive Simpson quadrature of `f` on `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn step<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol.max(1e-15 * whole.abs()) {
            return left + right + delta / 15.0;
        }
        step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, tol, 40)
}

/// [`adaptive_simpson`] over consecutive pieces `breaks[i]..breaks[i+1]`.
pub fn integrate_pieces<F: Fn(f64) -> f64>(f: &F, breaks: &[f64], tol: f64) -> f64 {
    breaks
        .windows(2)
        .map(|w| adaptive_simpson(f, w[0], w[1], tol))
        .sum()
}

/// Whether `a` and `b` agree when both are rounded to `digits` significant figures.
pub fn same_sig_figs(a: f64, b: f64, digits: usize) -> bool {
    format!("{:.*e}", digits - 1, a) == format!("{:.*e}", digits - 1, b)
}

pub fn bone() -> JkdParams {
    JkdParams::cancellous_bone()
}

pub fn jkd_data(lo: f64, hi: f64, m: usize, strategy: GridStrategy, target: Target) -> DataSet {
    let grid = make_grid(&GridSpec::new(lo, hi, m, strategy)).unwrap();
    synth_dataset(&bone(), &grid, target).unwrap()
}

/// Exact moments of dλ, first table column.
pub const LAMBDA_EXACT: [f64; 10] = [
    0.3986866e-3,
    0.3602968e-4,
    0.4869721e-5,
    0.7310984e-6,
    0.1152294e-6,
    0.1867826e-7,
    0.3083493e-8,
    0.5156154e-9,
    0.8704482e-10,
    0.1480291e-10,
];

/// Moments of dλ reconstructed with M = 10 on [1, 51].
pub const LAMBDA_M10: [f64; 10] = [
    0.3986865e-3,
    0.3602966e-4,
    0.4869696e-5,
    0.7310788e-6,
    0.1152184e-6,
    0.1867329e-7,
    0.3081572e-8,
    0.5149587e-9,
    0.8684085e-10,
    0.1474427e-10,
];

/// Exact moments of dσ.
pub const SIGMA_EXACT: [f64; 10] = [
    0.2448054e3,
    0.1096426e2,
    0.9864792e0,
    0.1109447e0,
    0.1397472e-1,
    0.1886006e-2,
    0.2666530e-3,
    0.3898596e-4,
    0.5846091e-5,
    0.8941761e-6,
];
