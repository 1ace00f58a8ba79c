use std::process::{Command, Output};

use bscfb::cli::fmt_real;
use bscfb::exponents::{capacity, e_ex, e_r, r_min, ListSize};
use bscfb::feedback::{f1_noisy, ChannelPair};

fn bscfb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bscfb"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = bscfb(args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

/// Header and data rows, with the `#` metadata lines dropped.
fn records(csv: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = csv.lines().filter(|l| !l.starts_with('#'));
    let split = |l: &str| l.split(',').map(str::to_string).collect::<Vec<_>>();
    let header = split(lines.next().unwrap());
    (header, lines.map(split).collect())
}

#[test]
fn sphere_packing_sweep_ends_at_zero() {
    let csv = stdout(&[
        "sweep",
        "--quantity",
        "e_sp",
        "--p",
        "0.01",
        "--rate-min",
        "0",
        "--rate-max",
        "capacity",
        "--steps",
        "11",
    ]);
    assert!(csv.starts_with("# artifact=sweep-e_sp version="));
    let (header, rows) = records(&csv);
    assert_eq!(header, ["R", "value", "status"]);
    assert_eq!(rows.len(), 11);
    assert_eq!(rows[10][0], fmt_real(capacity(0.01).unwrap()));
    assert_eq!(rows[10][1], "0");
    let values: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    assert!(values.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn e_low_sweep_switches_from_expurgation_to_random_coding() {
    let p = 0.01;
    let csv = stdout(&[
        "sweep",
        "--quantity",
        "e_low",
        "--p",
        "0.01",
        "--rate-min",
        "0",
        "--rate-max",
        "rcrit",
        "--steps",
        "41",
    ]);
    let (_, rows) = records(&csv);
    let rm = r_min(p, ListSize::ONE).unwrap();
    for r in &rows {
        let x: f64 = r[0].parse().unwrap();
        let v: f64 = r[1].parse().unwrap();
        let reference = if x < rm {
            e_ex(x, p, ListSize::ONE)
        } else {
            e_r(x, p, ListSize::ONE)
        }
        .unwrap();
        assert!((v - reference).abs() < 1e-9, "R = {x}");
    }
    assert!(rows.iter().any(|r| r[0].parse::<f64>().unwrap() < rm));
    assert!(rows.iter().any(|r| r[0].parse::<f64>().unwrap() > rm));
}

#[test]
fn noisy_sweep_matches_single_point_calls() {
    let csv = stdout(&[
        "sweep",
        "--quantity",
        "f1_noisy",
        "--p",
        "0.01",
        "--p1",
        "0.002",
        "--rate-min",
        "0.05",
        "--rate-max",
        "0.25",
        "--steps",
        "3",
    ]);
    let (header, rows) = records(&csv);
    assert_eq!(
        header,
        [
            "R",
            "value",
            "status",
            "branch_list2",
            "branch_pair",
            "gamma_star",
            "t_star"
        ]
    );
    let ch = ChannelPair::new(0.01, 0.002).unwrap();
    for r in rows {
        let b = f1_noisy(r[0].parse().unwrap(), ch).unwrap();
        let want = [
            b.value,
            b.branch_list2,
            b.branch_pair,
            b.gamma_star,
            b.t_star,
        ]
        .map(fmt_real);
        assert_eq!([&r[1], &r[3], &r[4], &r[5], &r[6]], want.each_ref());
        assert_eq!(r[2], "ok");
    }
}

#[test]
fn infeasible_points_are_flagged_not_fatal() {
    let csv = stdout(&[
        "sweep",
        "--quantity",
        "t1",
        "--p",
        "0.01",
        "--p1",
        "0.1",
        "--rate-min",
        "0",
        "--rate-max",
        "2",
        "--steps",
        "5",
    ]);
    let (_, rows) = records(&csv);
    let last = rows.last().unwrap();
    assert_eq!(last[1], "");
    assert!(last[2].starts_with("infeasible:"));
}

#[test]
fn sim_json_is_byte_identical_across_runs() {
    let args = [
        "sim",
        "--n",
        "30",
        "--messages",
        "8",
        "--gamma",
        "0.6",
        "--t",
        "0.05",
        "--p",
        "0.2",
        "--trials",
        "10000",
        "--seed",
        "1",
    ];
    let a = stdout(&args);
    assert_eq!(a, stdout(&args));
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["schema"], "simstats-v1");
    assert_eq!(v["config"]["M"], 8);
    assert_eq!(v["stats"]["errors_total"], 479);
}

#[test]
fn bad_arguments_exit_with_usage_status() {
    let zero = bscfb(&[
        "sim",
        "--n",
        "30",
        "--messages",
        "8",
        "--gamma",
        "0.6",
        "--t",
        "0.05",
        "--p",
        "0.2",
        "--trials",
        "0",
    ]);
    assert_eq!(zero.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&zero.stderr).contains("trials"));
    let steps = bscfb(&[
        "sweep",
        "--quantity",
        "e_sp",
        "--p",
        "0.01",
        "--rate-min",
        "0",
        "--rate-max",
        "0.3",
        "--steps",
        "1",
    ]);
    assert_eq!(steps.status.code(), Some(2));
    let noisy = bscfb(&[
        "sweep",
        "--quantity",
        "f1_noisy",
        "--p",
        "0.01",
        "--rate-min",
        "0",
        "--rate-max",
        "0.3",
    ]);
    assert_eq!(noisy.status.code(), Some(2));
}

#[test]
fn figures_have_expected_shapes() {
    for (fig, header, rows) in [
        ("fig2", "R,p0,ln_p0,status", 100),
        ("fig3", "R,f1_noiseless,e_ex,status", 100),
        ("fig4", "p,p11,status", 199),
    ] {
        let csv = stdout(&["figure", "--figure", fig]);
        assert!(csv.starts_with(&format!("# artifact={fig} version=")));
        let body: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(body[0], header);
        assert_eq!(body.len() - 1, rows, "{fig}");
    }
}

#[test]
fn output_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("bscfb-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("fig4.csv");
    let out = bscfb(&[
        "figure",
        "--figure",
        "fig4",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success() && out.stdout.is_empty());
    assert_eq!(
        std::fs::read_to_string(&path).unwrap(),
        stdout(&["figure", "--figure", "fig4"])
    );
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn trend_reports_a_slope() {
    let csv = stdout(&[
        "trend", "--n", "20,30", "--rate", "0.05", "--gamma", "0.8", "--t", "0", "--p", "0.2",
        "--trials", "2000",
    ]);
    assert!(csv.lines().any(|l| l.starts_with("# slope=")));
    let (header, rows) = records(&csv);
    assert_eq!(header[..4], ["n", "M", "errors", "error_rate"]);
    assert_eq!(rows.len(), 2);
}
