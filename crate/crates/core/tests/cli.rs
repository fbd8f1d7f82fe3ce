mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use common::{rel, LAMBDA_M10};
use dynperm::cli::{read_samples_csv, FitRecord};
use dynperm::jkd::{derive_constants, JkdParams};
use dynperm::kernels::RelaxationKernel;
use dynperm::Target;

fn dynperm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dynperm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) {
    let out = dynperm(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn synth_fit_moments() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, fit, mom) = (
        dir.path().join("p.csv"),
        dir.path().join("fit.json"),
        dir.path().join("mu.csv"),
    );
    ok(&["synth", "--grid", "1,51,10,equal", "--output", p(&csv)]);
    assert_eq!(fs::read_to_string(&csv).unwrap().lines().count(), 11);
    ok(&["fit", "--input", p(&csv), "--order", "10", "--output", p(&fit)]);
    ok(&["moments", "--input", p(&fit), "--output", p(&mom)]);
    let text = fs::read_to_string(&mom).unwrap();
    let mu0: f64 = text
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert!(rel(mu0, LAMBDA_M10[0]) < 1e-6);
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("p.csv");
    ok(&["synth", "--grid", "40,4000,10,modified", "--output", p(&csv)]);
    let run = |name: &str| {
        let out = dir.path().join(name);
        ok(&["fit", "--input", p(&csv), "--output", p(&out)]);
        fs::read(out).unwrap()
    };
    assert_eq!(run("a.json"), run("b.json"));
}

#[test]
fn kernel_reproduces_the_samples() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, fit, ker) = (
        dir.path().join("p.csv"),
        dir.path().join("fit.json"),
        dir.path().join("k.txt"),
    );
    ok(&["synth", "--grid", "1,51,8,equal", "--output", p(&csv)]);
    ok(&["fit", "--input", p(&csv), "--gamma", "0", "--output", p(&fit)]);
    ok(&["kernel", "--input", p(&fit), "--output", p(&ker)]);

    let kernel = RelaxationKernel::from_text(&fs::read_to_string(&ker).unwrap()).unwrap();
    let bone = JkdParams::cancellous_bone();
    let c = derive_constants(&bone).unwrap();
    let data = read_samples_csv(&fs::read_to_string(&csv).unwrap(), Target::P).unwrap();
    for smp in &data.samples {
        let back = kernel.laplace(smp.s) * (c.f_factor / bone.nu);
        assert!((back - smp.value).norm() / smp.value.norm() < 1e-8);
    }
}

#[test]
fn permeability_input_and_params_file() {
    let dir = tempfile::tempdir().unwrap();
    let (params, csv, fit, rep) = (
        dir.path().join("params.json"),
        dir.path().join("k.csv"),
        dir.path().join("fit.json"),
        dir.path().join("params_out.json"),
    );
    fs::write(
        &params,
        r#"{"phi": 0.67, "alpha_inf": 1.08, "k0": 7e-9, "nu": 2.830188679245283e-5, "lambda": 1e-5}"#,
    )
    .unwrap();
    ok(&[
        "synth",
        "--grid",
        "1,51,10,equal",
        "--target",
        "K",
        "--params",
        p(&params),
        "--output",
        p(&csv),
    ]);
    ok(&[
        "fit",
        "--input",
        p(&csv),
        "--target",
        "K",
        "--params",
        p(&params),
        "--output",
        p(&fit),
    ]);
    let rec: FitRecord = serde_json::from_str(&fs::read_to_string(&fit).unwrap()).unwrap();
    assert_eq!(rec.target, Target::P);

    ok(&[
        "params",
        "--input",
        p(&csv),
        "--target",
        "K",
        "--params",
        p(&params),
        "--output",
        p(&rep),
    ]);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&rep).unwrap()).unwrap();
    assert!(rel(v["k0_est"].as_f64().unwrap(), 7e-9) < 1e-5);
    assert!(rel(v["alpha_inf_est"].as_f64().unwrap(), 1.08) < 1e-3);
    assert!(rel(v["lambda_est"].as_f64().unwrap(), 1e-5) < 1e-3);
}

#[test]
fn report_has_one_row_per_point() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, fit, rep) = (
        dir.path().join("p.csv"),
        dir.path().join("fit.json"),
        dir.path().join("e.csv"),
    );
    ok(&["synth", "--grid", "1,51,10,equal", "--output", p(&csv)]);
    ok(&["fit", "--input", p(&csv), "--output", p(&fit)]);
    ok(&[
        "report",
        "--input",
        p(&fit),
        "--range",
        "1,51",
        "--output",
        p(&rep),
    ]);
    let text = fs::read_to_string(&rep).unwrap();
    assert_eq!(text.lines().next(), Some("omega,rel_error"));
    assert_eq!(text.lines().count(), 1001);
}

#[test]
fn exit_codes_distinguish_failures() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "omega,re\n1,2\n").unwrap();
    assert_eq!(dynperm(&["fit", "--input", p(&bad)]).status.code(), Some(2));

    let good = dir.path().join("p.csv");
    ok(&["synth", "--grid", "1,51,4,equal", "--output", p(&good)]);
    assert_eq!(
        dynperm(&["fit", "--input", p(&good), "--order", "5"])
            .status
            .code(),
        Some(2)
    );

    let missing = dir.path().join("nope.csv");
    assert_eq!(dynperm(&["fit", "--input", p(&missing)]).status.code(), Some(4));

    // 1/(s - 2) has its only pole on the positive axis
    let unstable = dir.path().join("u.csv");
    let (re, im) = (-2.0 / 5.0, 1.0 / 5.0); // s = -i
    fs::write(&unstable, format!("omega,re,im\n1,{re},{im}\n")).unwrap();
    assert_eq!(
        dynperm(&["fit", "--input", p(&unstable), "--gamma", "0"])
            .status
            .code(),
        Some(3)
    );

    assert_eq!(
        dynperm(&["fit", "--input", p(&good), "--output", p(&good)])
            .status
            .code(),
        Some(2)
    );
}
