//! Command-line front end: synthetic data, fitting, moments, parameter
//! recovery, kernel export and error reports.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::data::{DataSet, Target};
use crate::effective::{estimate_params, permeability_to_tortuosity_data, static_permeability};
use crate::error::{Error, Result};
use crate::jkd::{derive_constants, exact_function, synth_dataset, JkdParams};
use crate::kernels::{build_permeability_kernel, build_tortuosity_kernel};
use crate::moments::MomentVector;
use crate::pade::{
    fit, FitOptions, GammaSelection, PoleResidueSet, RationalApproximant, RegularizationReport,
};
use crate::sampling::{error_profile, make_grid, GridSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_FIT: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Clone, Parser)]
#[command(
    name = "dynperm",
    version,
    about = "Dynamic permeability and tortuosity from frequency samples"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Input file (CSV `omega,re,im` or a fit JSON, depending on the command).
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Padé order M; defaults to the number of input samples.
    #[arg(long, global = true)]
    pub order: Option<usize>,
    /// Sample grid `min,max,M,{equal|modified}`.
    #[arg(long, global = true, value_parser = parse_grid)]
    pub grid: Option<GridSpec>,
    /// L-curve grid `lo,hi,n` for the regularization parameter.
    #[arg(long = "gamma-grid", global = true, value_parser = parse_gamma_grid)]
    pub gamma_grid: Option<GammaSelection>,
    /// Fixed regularization parameter instead of the L-curve.
    #[arg(long, global = true, conflicts_with = "gamma_grid")]
    pub gamma: Option<f64>,
    /// What the samples hold: K(ω), P(s) or D(s).
    #[arg(long, global = true, value_parser = parse_target)]
    pub target: Option<Target>,
    /// JKD parameters as JSON with keys phi, alpha_inf, k0, nu, lambda.
    #[arg(long, global = true)]
    pub params: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Sample the JKD model on --grid and write CSV.
    Synth,
    /// Fit a CSV of samples and write the approximant, poles and L-curve report as JSON.
    Fit,
    /// Moments μ₀…μ_kmax of the measure in a fit JSON.
    Moments {
        #[arg(long, default_value_t = 9)]
        kmax: usize,
    },
    /// Recover K₀, α∞ and Λ from permeability samples.
    Params {
        #[arg(long, default_value_t = 9)]
        kmax: usize,
    },
    /// Export the relaxation kernel of a fit JSON.
    Kernel,
    /// Relative error of a fit against the JKD model on an ω range, as CSV.
    Report {
        /// `lo,hi` frequency range.
        #[arg(long, value_parser = parse_range)]
        range: (f64, f64),
        #[arg(long, default_value_t = 1000)]
        points: usize,
    },
}

fn parse_grid(s: &str) -> std::result::Result<GridSpec, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_target(s: &str) -> std::result::Result<Target, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_numbers(s: &str, n: usize) -> std::result::Result<Vec<f64>, String> {
    let v = s
        .split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| format!("'{x}' is not a number"))
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    if v.len() != n {
        return Err(format!("expected {n} comma-separated values, got {}", v.len()));
    }
    Ok(v)
}

fn parse_gamma_grid(s: &str) -> std::result::Result<GammaSelection, String> {
    let v = parse_numbers(s, 3)?;
    if v[2] < 1.0 || v[2].fract() != 0.0 {
        return Err(format!("grid size {} is not a positive integer", v[2]));
    }
    Ok(GammaSelection::LCurve {
        lo: v[0],
        hi: v[1],
        n: v[2] as usize,
    })
}

fn parse_range(s: &str) -> std::result::Result<(f64, f64), String> {
    let v = parse_numbers(s, 2)?;
    Ok((v[0], v[1]))
}

/// Process exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) => EXIT_IO,
        Error::Conditioning(_) | Error::Multiplicity(_) | Error::ReconstructionFailure(_) => EXIT_FIT,
        Error::Domain(_)
        | Error::Singularity(_)
        | Error::Input(_)
        | Error::ModelInconsistency(_)
        | Error::Division(_) => EXIT_INPUT,
    }
}

/// What `fit` writes and `moments`, `kernel` and `report` read.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitRecord {
    /// `P` or `D`; `K` input is converted to `P` before fitting.
    pub target: Target,
    pub order: usize,
    pub approximant: RationalApproximant,
    pub poles: PoleResidueSet,
    pub report: RegularizationReport,
}

/// Runs one command.
pub fn run(cfg: &RunConfig) -> Result<()> {
    if let (Some(i), Some(o)) = (&cfg.input, &cfg.output) {
        if i == o {
            return Err(Error::Input("input and output paths must differ".into()));
        }
    }
    if cfg.order == Some(0) {
        return Err(Error::Input("order M must be at least 1".into()));
    }
    let text = match &cfg.command {
        Command::Synth => synth(cfg)?,
        Command::Fit => to_json(&fit_command(cfg)?)?,
        Command::Moments { kmax } => {
            let rec = read_fit(cfg)?;
            moments_csv(&crate::effective::moments_from_poles(&rec.poles, *kmax))
        }
        Command::Params { kmax } => to_json(&params_command(cfg, *kmax)?)?,
        Command::Kernel => kernel_command(cfg)?,
        Command::Report { range, points } => report_command(cfg, *range, *points)?,
    };
    emit(cfg.output.as_deref(), &text)
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(Error::from),
    }
}

fn load_params(cfg: &RunConfig) -> Result<JkdParams> {
    let Some(path) = &cfg.params else {
        log::info!("no --params given; using the cancellous-bone parameters");
        return Ok(JkdParams::cancellous_bone());
    };
    let text = read_text(path)?;
    let p: JkdParams =
        serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    p.validate()?;
    Ok(p)
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn input_path(cfg: &RunConfig) -> Result<&Path> {
    cfg.input
        .as_deref()
        .ok_or_else(|| Error::Input("this command needs --input".into()))
}

/// `{:.16e}`: 17 significant digits, round-trips every `f64`.
pub fn fmt_num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

/// Writes `omega,re,im` rows.
pub fn write_samples_csv(data: &DataSet) -> Result<String> {
    let mut out = String::from("omega,re,im\n");
    for smp in &data.samples {
        let w = smp.omega();
        if w.im != 0.0 {
            return Err(Error::Input(format!(
                "sample at s = {} has a non-real frequency",
                smp.s
            )));
        }
        out.push_str(&format!(
            "{},{},{}\n",
            fmt_num(w.re),
            fmt_num(smp.value.re),
            fmt_num(smp.value.im)
        ));
    }
    Ok(out)
}

/// Parses `omega,re,im` CSV text into a data set.
pub fn read_samples_csv(text: &str, target: Target) -> Result<DataSet> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = rdr
        .headers()
        .map_err(|e| Error::Input(format!("CSV header: {e}")))?;
    if headers.iter().collect::<Vec<_>>() != ["omega", "re", "im"] {
        return Err(Error::Input(format!(
            "CSV header must be omega,re,im, got {headers:?}"
        )));
    }
    let mut pairs = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row.map_err(|e| Error::Input(format!("CSV row {}: {e}", i + 1)))?;
        let field = |k: usize| -> Result<f64> {
            row[k]
                .parse::<f64>()
                .map_err(|_| Error::Input(format!("CSV row {}: '{}' is not a number", i + 1, &row[k])))
        };
        let (w, re, im) = (field(0)?, field(1)?, field(2)?);
        if !(re.is_finite() && im.is_finite()) {
            return Err(Error::Input(format!("CSV row {}: non-finite value", i + 1)));
        }
        pairs.push((w, Complex64::new(re, im)));
    }
    DataSet::from_omegas(target, &pairs)
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SciFormatter);
    value
        .serialize(&mut ser)
        .map_err(|e| Error::Io(format!("JSON encoding: {e}")))?;
    buf.push(b'\n');
    String::from_utf8(buf).map_err(|e| Error::Io(e.to_string()))
}

/// Compact JSON with every float in 17-digit scientific notation.
struct SciFormatter;

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(fmt_num(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

fn read_fit(cfg: &RunConfig) -> Result<FitRecord> {
    let path = input_path(cfg)?;
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn fit_options(cfg: &RunConfig) -> FitOptions {
    let gamma = match (cfg.gamma, cfg.gamma_grid) {
        (Some(g), _) => GammaSelection::Fixed(g),
        (None, Some(sel)) => sel,
        (None, None) => GammaSelection::default(),
    };
    FitOptions {
        gamma,
        ..FitOptions::default()
    }
}

/// Reads the input CSV and returns `P` or `D` samples ready for fitting.
fn read_fit_input(cfg: &RunConfig) -> Result<DataSet> {
    let target = cfg.target.unwrap_or(Target::P);
    let data = read_samples_csv(&read_text(input_path(cfg)?)?, target)?;
    if target == Target::K {
        let p = load_params(cfg)?;
        let c = derive_constants(&p)?;
        return Ok(data.scaled(c.f_factor / p.nu, Target::P));
    }
    Ok(data)
}

fn check_order(cfg: &RunConfig, data: &DataSet) -> Result<usize> {
    let order = cfg.order.unwrap_or(data.len());
    if order != data.len() {
        return Err(Error::Input(format!(
            "order M = {order} does not match the {} input samples",
            data.len()
        )));
    }
    Ok(order)
}

fn synth(cfg: &RunConfig) -> Result<String> {
    let grid = cfg
        .grid
        .ok_or_else(|| Error::Input("synth needs --grid min,max,M,{equal|modified}".into()))?;
    let p = load_params(cfg)?;
    let omegas = make_grid(&grid)?;
    write_samples_csv(&synth_dataset(&p, &omegas, cfg.target.unwrap_or(Target::P))?)
}

fn fit_command(cfg: &RunConfig) -> Result<FitRecord> {
    let data = read_fit_input(cfg)?;
    let order = check_order(cfg, &data)?;
    let f = fit(&data, order, &fit_options(cfg))?;
    Ok(FitRecord {
        target: data.target,
        order,
        approximant: f.approximant,
        poles: f.poles,
        report: f.report,
    })
}

fn moments_csv(mu: &MomentVector) -> String {
    let mut out = String::from("k,mu\n");
    for (k, m) in mu.values().iter().enumerate() {
        out.push_str(&format!("{k},{}\n", fmt_num(*m)));
    }
    out
}

fn params_command(cfg: &RunConfig, kmax: usize) -> Result<crate::effective::EffectiveParams> {
    let data = read_fit_input(cfg)?;
    if data.target != Target::P {
        return Err(Error::Input(
            "params needs permeability samples (--target K or P)".into(),
        ));
    }
    let order = check_order(cfg, &data)?;
    let p = load_params(cfg)?;
    let c = derive_constants(&p)?;
    let opts = fit_options(cfg);
    let lambda_fit = fit(&data, order, &opts)?;
    let k0 = static_permeability(&lambda_fit.poles, c.f_factor, p.nu)?;
    let a = p.nu * p.phi / k0;
    let d_data = permeability_to_tortuosity_data(&data, p.alpha_inf, a)?;
    let sigma_fit = fit(&d_data, order, &opts)?;
    estimate_params(&lambda_fit.poles, &sigma_fit.poles, p.phi, p.nu, c.f_factor, kmax)
}

fn kernel_command(cfg: &RunConfig) -> Result<String> {
    let rec = read_fit(cfg)?;
    let p = load_params(cfg)?;
    let c = derive_constants(&p)?;
    let kernel = match rec.target {
        Target::D => build_tortuosity_kernel(&rec.poles, c.a_coef)?,
        _ => build_permeability_kernel(&rec.poles, c.f_factor, p.nu)?,
    };
    Ok(kernel.to_text())
}

fn report_command(cfg: &RunConfig, range: (f64, f64), points: usize) -> Result<String> {
    let rec = read_fit(cfg)?;
    let p = load_params(cfg)?;
    let target = rec.target;
    let approximant = rec.approximant.clone();
    let prof = error_profile(
        |s| exact_function(&p, target, s),
        |s| Ok(approximant.eval(s)),
        range,
        points,
        fit_options(cfg).exec,
    )?;
    let mut out = String::from("omega,rel_error\n");
    for (w, e) in prof.omegas.iter().zip(&prof.relative_errors) {
        out.push_str(&format!(
            "{},{}\n",
            fmt_num(*w),
            e.map_or_else(|| "nan".to_string(), fmt_num)
        ));
    }
    Ok(out)
}
