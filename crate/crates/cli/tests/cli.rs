use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use pwa_cli::commands::{cmd_circles, cmd_orbit, cmd_scan, default_scan_seeds};
use pwa_cli::{parse_theta, ExperimentSpec, Format};
use pwa_core::Point64;

fn pwa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pwa"))
        .args(args)
        .output()
        .unwrap()
}

fn pwa_env(args: &[&str], key: &str, val: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pwa"))
        .args(args)
        .env(key, val)
        .output()
        .unwrap()
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(pwa(&[]).status.code(), Some(2));
    assert_eq!(pwa(&["fly"]).status.code(), Some(2));
    assert_eq!(
        pwa(&["orbit", "--theta", "pi/3", "--iters", "5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        pwa(&["orbit", "--theta", "pi/x", "--iters", "5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        pwa(&["orbit", "--seed", "2,0.5", "--iters", "5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        pwa(&["orbit", "--raster", "8x8", "--iters", "5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        pwa(&["orbit", "--format", "png", "--iters", "5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(pwa(&["circles", "--k", "2"]).status.code(), Some(2));
    assert_eq!(pwa(&["scan"]).status.code(), Some(2));
    assert_eq!(
        pwa_env(&["scan", "--theta", "0.3"], "PWA_THREADS", "zero")
            .status
            .code(),
        Some(2)
    );
    assert_eq!(pwa(&["--help"]).status.code(), Some(0));
}

#[test]
fn parse_error_reports_position() {
    let out = pwa(&["orbit", "--theta", "3pi/1x", "--iters", "5"]);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("position 5"), "{err}");
}

#[test]
fn unwritable_output_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let out = blocker.join("sub").join("run");
    let res = pwa(&["orbit", "--iters", "10", "--out", arg(&out)]);
    assert_eq!(res.status.code(), Some(2));
}

#[test]
fn orbit_files_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |tag: &str, threads: &str| {
        let out = dir.path().join(tag);
        let res = pwa_env(
            &[
                "orbit",
                "--theta",
                "pi/11",
                "--seed",
                "0.1,0.5",
                "--seed",
                "random:3",
                "--iters",
                "2000",
                "--raster",
                "64x48",
                "--out",
                arg(&out),
            ],
            "PWA_THREADS",
            threads,
        );
        assert_eq!(
            res.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&res.stderr)
        );
        out
    };
    let a = run("a", "1");
    let b = run("b", "4");
    for suffix in ["_seed0.csv", "_seed1.csv", ".ppm"] {
        let fa = fs::read(format!("{}{suffix}", a.display())).unwrap();
        let fb = fs::read(format!("{}{suffix}", b.display())).unwrap();
        assert_eq!(fa, fb, "{suffix}");
    }
    let csv = fs::read_to_string(format!("{}_seed0.csv", a.display())).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("step,x,y"));
    assert_eq!(
        lines.next(),
        Some("0,1.0000000000000001e-1,5.0000000000000000e-1")
    );
    assert_eq!(csv.lines().count(), 2002);
    let ppm = fs::read(format!("{}.ppm", a.display())).unwrap();
    assert!(ppm.starts_with(b"P5\n64 48\n255\n"));
    assert_eq!(ppm.len(), "P5\n64 48\n255\n".len() + 64 * 48);
}

#[test]
fn csv_values_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let mut spec =
        ExperimentSpec::new("0.4", &["0.123456789012345,0.3"], 50, dir.path().join("rt")).unwrap();
    spec.formats = vec![Format::Csv];
    cmd_orbit(&spec).unwrap();
    let map = pwa_core::Map64::from_theta(0.4).unwrap();
    let text = fs::read_to_string(spec.seed_path(0)).unwrap();
    let mut p = Point64::new(0.123456789012345, 0.3);
    for (i, line) in text.lines().skip(1).enumerate() {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols[0].parse::<usize>().unwrap(), i);
        assert_eq!(
            Point64::new(cols[1].parse().unwrap(), cols[2].parse().unwrap()),
            p
        );
        p = map.apply(p).unwrap();
    }
}

#[test]
fn raster_conserves_hits() {
    let dir = tempfile::tempdir().unwrap();
    let mut spec = ExperimentSpec::new(
        "pi/20",
        &["0.1,0.5", "0.2,0.5", "0.05,0.5", "0.3,0.4"],
        5000,
        dir.path().join("r"),
    )
    .unwrap();
    spec.formats = vec![Format::Ppm];
    spec.raster = (32, 32);
    let out = cmd_orbit(&spec).unwrap();
    assert_eq!(out.raster_total, 4 * 5000);
    assert_eq!(out.files.len(), 1);
}

#[test]
fn centre_seed_is_one_pixel() {
    let dir = tempfile::tempdir().unwrap();
    let mut spec = ExperimentSpec::new("pi/11", &["0.5,0.5"], 1000, dir.path().join("z")).unwrap();
    spec.formats = vec![Format::Ppm];
    spec.raster = (17, 17);
    let out = cmd_orbit(&spec).unwrap();
    assert_eq!(out.seeds[0].full_range, (0.0, 0.0));
    let ppm = fs::read(spec.raster_path()).unwrap();
    let pixels = &ppm[ppm.len() - 17 * 17..];
    assert_eq!(pixels.iter().filter(|&&b| b != 255).count(), 1);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    let out = dir.path().join("cfg");
    fs::write(
        &cfg,
        format!(
            "theta = \"pi/11\"\nseed = [\"0.1,0.5\"]\niters = 30\nformat = \"csv\"\nout = \"{}\"\n",
            out.display()
        ),
    )
    .unwrap();
    let res = pwa(&["orbit", "--config", arg(&cfg), "--iters", "10"]);
    assert_eq!(
        res.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    let csv = fs::read_to_string(format!("{}_seed0.csv", out.display())).unwrap();
    assert_eq!(csv.lines().count(), 12);
    assert!(!Path::new(&format!("{}.ppm", out.display())).exists());

    fs::write(&cfg, "iters = 10\nwidth = 3\n").unwrap();
    assert_eq!(
        pwa(&["orbit", "--config", arg(&cfg)]).status.code(),
        Some(2)
    );
}

#[test]
fn circles_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c");
    let res = pwa(&["circles", "--k", "3", "--n-max", "10", "--out", arg(&out)]);
    assert_eq!(
        res.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    for n in 0..=10 {
        let text = fs::read_to_string(format!("{}_K3_N{n}.csv", out.display())).unwrap();
        assert_eq!(text.lines().count(), 1 + 4 * (3 + n));
    }
    let summary = fs::read_to_string(format!("{}_K3_summary.csv", out.display())).unwrap();
    assert_eq!(summary.lines().count(), 12);
    assert!(summary.lines().nth(1).unwrap().starts_with("3,0,12,1/12,"));
    assert!(summary.lines().skip(1).all(|l| l.ends_with(",true")));
    let theta_k = fs::read_to_string(format!("{}_theta_k.csv", out.display())).unwrap();
    assert!(theta_k.starts_with("K,theta,t,s,lambda,residual\n3,3.926990816987"));
    let dump = fs::read_to_string(format!("{}_partition.txt", out.display())).unwrap();
    for line in dump.lines().filter(|l| !l.trim().is_empty()) {
        let cols: Vec<&str> = line.split_whitespace().collect();
        assert_eq!(cols.len(), 3, "{line}");
        cols[1].parse::<f64>().unwrap();
        cols[2].parse::<f64>().unwrap();
    }

    let five = cmd_circles(5, 0, &dir.path().join("five"), 1e-8).unwrap();
    assert_eq!(five.rows[0].vertices, 20);
    assert_eq!(five.rows[0].rho, "1/20");
}

#[test]
fn scan_rows_and_bound() {
    let dir = tempfile::tempdir().unwrap();
    let thetas = [parse_theta("pi/8").unwrap(), parse_theta("pi/5").unwrap()];
    let mut seeds = default_scan_seeds(4);
    seeds.push(Point64::new(1e-9, 0.5));
    let out = cmd_scan(&thetas, &seeds, 10_000, &dir.path().join("scan")).unwrap();
    assert_eq!(out.rows.len() + out.failures.len(), 10);
    let text = fs::read_to_string(&out.file).unwrap();
    assert_eq!(
        text.lines().next(),
        Some("theta,seed,rho_estimate,min_radius,max_radius")
    );
    // The first default seed sits inside the octagon at θ = π/8.
    let octagon = out
        .rows
        .iter()
        .find(|r| r.theta == thetas[0] && r.seed == 0)
        .unwrap();
    assert!((octagon.rho_estimate - 0.125).abs() < 1e-6);
    let edge = out
        .rows
        .iter()
        .find(|r| r.theta == thetas[0] && r.seed == 4)
        .unwrap();
    assert!(edge.rho_estimate < 0.02);
    for r in &out.rows {
        assert!(r.rho_estimate <= 0.25 - r.theta / std::f64::consts::PI + 1e-4);
    }
}

#[test]
fn scan_logs_failed_rows_and_continues() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s");
    let res = pwa(&[
        "scan",
        "--theta",
        "0.3",
        "--seed",
        "0.5,0.5",
        "--seed",
        "0.2,0.5",
        "--iters",
        "500",
        "--out",
        arg(&out),
    ]);
    assert_eq!(res.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&res.stderr).contains("seed 0"));
    let text = fs::read_to_string(format!("{}.csv", out.display())).unwrap();
    assert_eq!(text.lines().count(), 2);
}
