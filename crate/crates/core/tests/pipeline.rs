use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use sphw::io::{read_series_csv, SeriesSidecar};
use sphw::transport::ConvergenceReport;

fn sphw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sphw")).args(args).output().expect("spawn sphw")
}

fn csv_files(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".csv"))
        .collect();
    names.sort();
    names
}

#[test]
fn shocktube_run_converge_report() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("st");
    let out_s = out.to_str().unwrap();
    let run = sphw(&["run", "--experiment", "shocktube", "--levels", "18,45", "--out", out_s]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert_eq!(csv_files(&out), ["shocktube-00018.csv", "shocktube-00045.csv"]);

    let first = fs::read(out.join("shocktube-00045.csv")).unwrap();
    let again = sphw(&["run", "--experiment", "shocktube", "--levels", "18,45", "--out", out_s]);
    assert!(again.status.success());
    assert_eq!(fs::read(out.join("shocktube-00045.csv")).unwrap(), first);

    let series = read_series_csv(first.as_slice()).unwrap();
    assert_eq!(series.len(), 11);
    assert!((series.last().unwrap().time - 0.2).abs() < 1e-12);
    let car = SeriesSidecar::from_json(
        &fs::read_to_string(out.join("shocktube-00045.json")).unwrap(),
    )
    .unwrap();
    assert_eq!((car.particles, car.dimension, car.times.len()), (45, 1, 11));

    let conv = sphw(&["converge", out_s, "--svg"]);
    assert!(conv.status.success(), "{}", String::from_utf8_lossy(&conv.stderr));
    for f in ["distances.csv", "table.csv", "report.json", "rates.svg"] {
        assert!(out.join(f).is_file(), "{f} missing");
    }
    let report =
        ConvergenceReport::from_json(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report.levels, [18, 45]);
    assert!(report.pairs[0].sup > 0.0);
    assert_eq!(report.pairs[0].per_time[0].time, 0.0);

    let summary = sphw(&["report", out.join("report.json").to_str().unwrap()]);
    // One pair gives no rate, so the band check cannot pass.
    assert_eq!(summary.status.code(), Some(1));
}

#[test]
fn droplet_lattice_reproduces_particle_counts() {
    let tmp = tempfile::tempdir().unwrap();
    let config = tmp.path().join("m.toml");
    fs::write(
        &config,
        "experiment = \"droplet\"\nlevels = [2, 4, 6, 8, 12, 16, 24, 32, 48, 64, 96]\n\
         [droplet]\nt_final = 0.0\nsamples = 1\n",
    )
    .unwrap();
    let out = tmp.path().join("d");
    let run = sphw(&["run", "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let counts: Vec<usize> = csv_files(&out)
        .iter()
        .map(|f| {
            let json = fs::read_to_string(out.join(f).with_extension("json")).unwrap();
            SeriesSidecar::from_json(&json).unwrap().particles
        })
        .collect();
    assert_eq!(counts, [4, 12, 32, 52, 112, 208, 448, 812, 1804, 3228, 7232]);
}

#[test]
fn initial_droplet_measures_converge_at_half_order() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("d0");
    let config = tmp.path().join("m.toml");
    fs::write(
        &config,
        "experiment = \"droplet\"\nlevels = [8, 12, 16, 24, 32, 48]\n\
         [droplet]\nt_final = 0.0\nsamples = 1\n",
    )
    .unwrap();
    let run = sphw(&["run", "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(run.status.success());
    let conv = sphw(&["converge", out.to_str().unwrap()]);
    assert!(conv.status.success());
    let report =
        ConvergenceReport::from_json(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    let rates: Vec<f64> = report.rates.iter().map(|r| r.unwrap()).collect();
    let mean = rates.iter().sum::<f64>() / rates.len() as f64;
    assert!((mean + 0.5).abs() < 0.2, "rates {rates:?}");
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(sphw(&["run", "--levels", "4"]).status.code(), Some(2));
    assert_eq!(
        sphw(&["run", "--experiment", "vortex", "--levels", "4"]).status.code(),
        Some(2)
    );
    assert_eq!(sphw(&["frobnicate"]).status.code(), Some(2));
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(sphw(&["converge", tmp.path().to_str().unwrap()]).status.code(), Some(2));
}
