//! Sample-grid strategies and the maximum relative error `E∞`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parallel::Execution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridStrategy {
    Equal,
    /// `M - 1` equal points plus one extra early in the first interval.
    Modified,
}

impl FromStr for GridStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "equal" => Ok(GridStrategy::Equal),
            "modified" => Ok(GridStrategy::Modified),
            other => Err(Error::Input(format!("unknown grid strategy '{other}'"))),
        }
    }
}

impl fmt::Display for GridStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GridStrategy::Equal => "equal",
            GridStrategy::Modified => "modified",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub omega_min: f64,
    pub omega_max: f64,
    pub count: usize,
    pub strategy: GridStrategy,
    /// Replacement for `ω_min = 0`; `None` means `1e-3 ω_max`.
    pub zero_floor: Option<f64>,
}

impl GridSpec {
    pub fn new(omega_min: f64, omega_max: f64, count: usize, strategy: GridStrategy) -> Self {
        Self {
            omega_min,
            omega_max,
            count,
            strategy,
            zero_floor: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega_min >= 0.0 && self.omega_max > self.omega_min && self.omega_max.is_finite()) {
            return Err(Error::Input(format!(
                "need 0 <= ω_min < ω_max, got [{}, {}]",
                self.omega_min, self.omega_max
            )));
        }
        let min_count = match self.strategy {
            GridStrategy::Equal => 2,
            GridStrategy::Modified => 3,
        };
        if self.count < min_count {
            return Err(Error::Input(format!(
                "{} grid needs at least {min_count} points, got {}",
                self.strategy, self.count
            )));
        }
        if let Some(f) = self.zero_floor {
            if !(f > 0.0 && f < self.omega_max) {
                return Err(Error::Input(format!("zero floor {f} must lie in (0, ω_max)")));
            }
        }
        Ok(())
    }
}

impl FromStr for GridSpec {
    type Err = Error;

    /// `min,max,M,{equal|modified}`
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [lo, hi, m, strat] = parts.as_slice() else {
            return Err(Error::Input(format!("grid '{s}' is not min,max,M,strategy")));
        };
        let num = |x: &str| {
            x.parse::<f64>()
                .map_err(|_| Error::Input(format!("grid bound '{x}' is not a number")))
        };
        let count = m
            .parse::<usize>()
            .map_err(|_| Error::Input(format!("grid count '{m}' is not an integer")))?;
        let spec = GridSpec::new(num(lo)?, num(hi)?, count, strat.parse()?);
        spec.validate()?;
        Ok(spec)
    }
}

/// Equally spaced points from `lo` to `hi` with both ends exact.
fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi - lo) / (n - 1) as f64;
    let mut v: Vec<f64> = (0..n).map(|j| lo + j as f64 * step).collect();
    v[n - 1] = hi;
    v
}

pub fn make_grid(spec: &GridSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    let mut lo = spec.omega_min;
    if lo == 0.0 {
        lo = spec.zero_floor.unwrap_or(1e-3 * spec.omega_max);
        log::warn!("ω_min = 0 is not allowed; using {lo:e} instead");
    }
    let hi = spec.omega_max;
    Ok(match spec.strategy {
        GridStrategy::Equal => linspace(lo, hi, spec.count),
        GridStrategy::Modified => {
            let mut g = linspace(lo, hi, spec.count - 1);
            let step = (hi - lo) / (spec.count - 2) as f64;
            g.push(lo + step / 10.0);
            g.sort_by(f64::total_cmp);
            g
        }
    })
}

/// `E∞` together with the evaluation points that had to be skipped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorProfile {
    pub omegas: Vec<f64>,
    /// `None` where the exact value vanished or either function failed.
    pub relative_errors: Vec<Option<f64>>,
    pub max: f64,
    pub excluded: usize,
}

/// Relative error `|exact - estimate| / |exact|` on `n` equally spaced `ω`, `s = -iω`.
pub fn error_profile<E, A>(
    exact: E,
    estimate: A,
    range: (f64, f64),
    n: usize,
    exec: Execution,
) -> Result<ErrorProfile>
where
    E: Fn(Complex64) -> Result<Complex64> + Sync + Send,
    A: Fn(Complex64) -> Result<Complex64> + Sync + Send,
{
    let (lo, hi) = range;
    if !(lo.is_finite() && hi.is_finite() && hi > lo) || n < 2 {
        return Err(Error::Input(format!(
            "invalid error range [{lo}, {hi}] with {n} points"
        )));
    }
    let omegas = linspace(lo, hi, n);
    let relative_errors = exec.map_slice(&omegas, |&w| {
        let s = Complex64::new(0.0, -w);
        let e = exact(s).ok()?;
        let a = estimate(s).ok()?;
        let norm = e.norm();
        if norm == 0.0 || !norm.is_finite() || !a.norm().is_finite() {
            return None;
        }
        Some((e - a).norm() / norm)
    });
    let excluded = relative_errors.iter().filter(|e| e.is_none()).count();
    if excluded > 0 {
        log::warn!("{excluded} of {n} error points excluded (zero or undefined exact value)");
    }
    let max = relative_errors.iter().flatten().copied().fold(0.0, f64::max);
    Ok(ErrorProfile {
        omegas,
        relative_errors,
        max,
        excluded,
    })
}

/// `E∞` over `[lo, hi]` sampled at `n` points.
pub fn max_relative_error<E, A>(
    exact: E,
    estimate: A,
    range: (f64, f64),
    n: usize,
    exec: Execution,
) -> Result<f64>
where
    E: Fn(Complex64) -> Result<Complex64> + Sync + Send,
    A: Fn(Complex64) -> Result<Complex64> + Sync + Send,
{
    Ok(error_profile(exact, estimate, range, n, exec)?.max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_grid_small() {
        let g = make_grid(&GridSpec::new(1.0, 51.0, 4, GridStrategy::Equal)).unwrap();
        assert_eq!(g.len(), 4);
        assert_eq!(g[0], 1.0);
        assert_eq!(g[3], 51.0);
        assert!((g[1] - 17.666_666_666_666_668).abs() < 1e-12);
        assert!((g[2] - 34.333_333_333_333_336).abs() < 1e-12);
    }

    #[test]
    fn equal_grid_step() {
        let g = make_grid(&GridSpec::new(40.0, 4000.0, 10, GridStrategy::Equal)).unwrap();
        assert!(g.windows(2).all(|w| (w[1] - w[0] - 440.0).abs() < 1e-9));
    }

    #[test]
    fn modified_grid_extra_point() {
        let g = make_grid(&GridSpec::new(40.0, 4000.0, 10, GridStrategy::Modified)).unwrap();
        assert_eq!(g.len(), 10);
        assert_eq!(g[0], 40.0);
        assert_eq!(g[9], 4000.0);
        assert!((g[1] - 89.5).abs() < 1e-12);
        assert!((g[2] - 535.0).abs() < 1e-9);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn zero_lower_bound_is_floored() {
        let g = make_grid(&GridSpec::new(0.0, 4000.0, 10, GridStrategy::Equal)).unwrap();
        assert_eq!(g[0], 4.0);
        let mut spec = GridSpec::new(0.0, 4000.0, 10, GridStrategy::Equal);
        spec.zero_floor = Some(0.5);
        assert_eq!(make_grid(&spec).unwrap()[0], 0.5);
    }

    #[test]
    fn grid_parsing_and_validation() {
        let spec: GridSpec = "1,51,10,equal".parse().unwrap();
        assert_eq!(spec.count, 10);
        assert!("1,51,10".parse::<GridSpec>().is_err());
        assert!("51,1,10,equal".parse::<GridSpec>().is_err());
        assert!("1,51,1,equal".parse::<GridSpec>().is_err());
        assert!("1,51,2,modified".parse::<GridSpec>().is_err());
        assert!("1,51,4,uneven".parse::<GridSpec>().is_err());
    }

    #[test]
    fn relative_error_basics() {
        let f = |s: Complex64| Ok(Complex64::new(1.0, 0.0) / (s + 2.0));
        let g = |s: Complex64| Ok(1.01 / (s + 2.0));
        let z = max_relative_error(f, f, (0.0, 10.0), 100, Execution::Sequential).unwrap();
        assert_eq!(z, 0.0);
        let e = max_relative_error(f, g, (0.0, 10.0), 100, Execution::Parallel).unwrap();
        assert!((e - 0.01).abs() < 1e-14);
    }

    #[test]
    fn zeros_are_excluded() {
        let f = |s: Complex64| Ok(s);
        let p = error_profile(f, f, (0.0, 1.0), 11, Execution::Sequential).unwrap();
        assert_eq!(p.excluded, 1);
        assert!(p.relative_errors[0].is_none());
        assert_eq!(p.omegas.len(), 11);
    }
}
