//! Linear system of the `[M-1/M]` multipoint Padé interpolation problem.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::data::{DataSet, FrequencySample};
use crate::error::{Error, Result};

/// Appends the conjugate point `(s̄, P̄)` of every sample, originals first.
///
/// A sample with real `s` is its own conjugate; it is kept unpaired when
/// `allow_real` is set and otherwise rejected as a duplicate.
pub fn augment_conjugates(data: &DataSet, allow_real: bool) -> Result<DataSet> {
    if data.is_empty() {
        return Err(Error::Input("empty data set".into()));
    }
    let mut out = data.samples.clone();
    for smp in &data.samples {
        if smp.s.im == 0.0 {
            if allow_real {
                if smp.value.im != 0.0 {
                    return Err(Error::Input(format!(
                        "sample at real s = {} has a non-real value",
                        smp.s.re
                    )));
                }
                continue;
            }
            return Err(Error::Input(format!(
                "sample at real s = {} coincides with its conjugate",
                smp.s.re
            )));
        }
        out.push(FrequencySample::new(smp.s.conj(), smp.value.conj()));
    }
    for i in 0..out.len() {
        if out[i].s == Complex64::new(0.0, 0.0) {
            return Err(Error::Input("sample at s = 0".into()));
        }
        for j in 0..i {
            if out[i].s == out[j].s {
                return Err(Error::Input(format!(
                    "duplicate interpolation point s = {}",
                    out[i].s
                )));
            }
        }
    }
    Ok(DataSet::new(data.target, out))
}

/// Row `j` is `[1, s_j, …, s_j^{M-1}, -P_j s_j, …, -P_j s_j^M]`, right-hand side `P_j`.
pub fn assemble_system(points: &DataSet, order: usize) -> Result<(DMatrix<Complex64>, DVector<Complex64>)> {
    if order == 0 {
        return Err(Error::Input("order M must be at least 1".into()));
    }
    let n = points.len();
    if n != 2 * order {
        return Err(Error::Input(format!(
            "order M = {order} needs {} interpolation points, got {n}",
            2 * order
        )));
    }
    let mut a = DMatrix::<Complex64>::zeros(n, n);
    let mut d = DVector::<Complex64>::zeros(n);
    for (row, smp) in points.samples.iter().enumerate() {
        let mut pw = Complex64::new(1.0, 0.0);
        for col in 0..order {
            a[(row, col)] = pw;
            pw *= smp.s;
        }
        let mut pw = smp.s;
        for col in 0..order {
            a[(row, order + col)] = -smp.value * pw;
            pw *= smp.s;
        }
        d[row] = smp.value;
    }
    Ok((a, d))
}

/// Returns `B = A C` with `C = diag(1/‖a_j‖₂)` and the diagonal of `C`.
pub fn scale_columns(a: &DMatrix<Complex64>) -> Result<(DMatrix<Complex64>, Vec<f64>)> {
    let mut b = a.clone();
    let mut scales = Vec::with_capacity(a.ncols());
    for (j, mut col) in b.column_iter_mut().enumerate() {
        let norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::Conditioning(format!("column {j} has norm {norm}")));
        }
        let c = 1.0 / norm;
        col.iter_mut().for_each(|z| *z *= c);
        scales.push(c);
    }
    Ok((b, scales))
}

/// Real stacking `[Re B; Im B]`, `[Re d; Im d]`: all real rows first.
pub fn stack_real_imag(b: &DMatrix<Complex64>, d: &DVector<Complex64>) -> (DMatrix<f64>, DVector<f64>) {
    let (m, n) = b.shape();
    let stacked = DMatrix::from_fn(
        2 * m,
        n,
        |i, j| if i < m { b[(i, j)].re } else { b[(i - m, j)].im },
    );
    let rhs = DVector::from_fn(2 * m, |i, _| if i < m { d[i].re } else { d[i - m].im });
    (stacked, rhs)
}
