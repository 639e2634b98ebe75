use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use crossdiff::io::{read_image, read_signal, write_image, Image, PgmEncoding};
use crossdiff_cli::commands::{self, SweepAxis};
use crossdiff_cli::manifest::{NoiseManifest, RunManifest};
use crossdiff_cli::exit_code;
use crossdiff::InitialKind;

fn crossdiff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crossdiff")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn save(dir: &Path, name: &str, image: &Image) -> PathBuf {
    let path = dir.join(name);
    write_image(image, &path, PgmEncoding::Binary).unwrap();
    path
}

fn gradient_image(w: usize, h: usize) -> Image {
    Image::new(w, h, (0..w * h).map(|i| ((i % w) * 7 + (i / w) * 3) as f64 % 256.0).collect()).unwrap()
}

fn manifest(dir: &Path) -> RunManifest {
    RunManifest {
        pattern: Some("phantom".into()),
        size: Some(48),
        output_dir: Some(dir.to_path_buf()),
        ..Default::default()
    }
}

#[test]
fn constant_input_stays_constant() {
    let tmp = tempfile::tempdir().unwrap();
    let input = save(tmp.path(), "flat.pgm", &Image::new(20, 14, vec![90.0; 280]).unwrap());
    let out_dir = tmp.path().join("out");
    let out = crossdiff(&[
        "filter",
        "--input",
        input.to_str().unwrap(),
        "--output-dir",
        out_dir.to_str().unwrap(),
        "--d",
        "1,0.9,1,1",
        "--times",
        "0,3,15",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(out_dir.join("metrics.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "t,snr,psnr,entropy,avg_grey_u,avg_grey_v,v_min,v_max");
    assert_eq!(lines.len(), 4);
    for line in &lines[1..] {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells[1], "inf", "{line}");
        assert_eq!(cells[3], "0");
    }
    for t in ["0", "3", "15"] {
        let u = read_image(&out_dir.join(format!("u_t{t}.pgm"))).unwrap();
        assert!(u.values.iter().all(|&v| v == 90.0));
        let v = read_image(&out_dir.join(format!("v_t{t}.pgm"))).unwrap();
        assert!(v.values.iter().all(|&x| x == 0.0));
    }
}

#[test]
fn zero_time_reproduces_input() {
    let tmp = tempfile::tempdir().unwrap();
    let img = gradient_image(17, 9);
    let input = save(tmp.path(), "g.pgm", &img);
    let m = RunManifest {
        input: Some(input),
        time_grid: Some(vec![0.0]),
        raw: Some(true),
        output_dir: Some(tmp.path().join("o")),
        ..Default::default()
    };
    commands::filter(&m).unwrap();
    assert_eq!(read_image(&tmp.path().join("o/u_t0.pgm")).unwrap(), img);
    let raw = read_signal(&tmp.path().join("o/u_t0.csv")).unwrap();
    let err = raw.iter().zip(&img.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(err < 1e-10, "{err}");
}

#[test]
fn stepwise_times_match_direct_run() {
    let tmp = tempfile::tempdir().unwrap();
    let run = |times: Vec<f64>, name: &str| {
        let m = RunManifest {
            time_grid: Some(times),
            raw: Some(true),
            kind: Some(1),
            d: Some([1.0, 0.4, -0.7, 1.5]),
            p: Some(1.5),
            output_dir: Some(tmp.path().join(name)),
            ..manifest(tmp.path())
        };
        commands::filter(&m).unwrap();
    };
    run(vec![1.25, 4.0], "steps");
    run(vec![4.0], "direct");
    for c in ["u", "v"] {
        let a = read_signal(&tmp.path().join(format!("steps/{c}_t4.csv"))).unwrap();
        let b = read_signal(&tmp.path().join(format!("direct/{c}_t4.csv"))).unwrap();
        let err = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        assert!(err < 1e-8, "{c}: {err}");
    }
}

#[test]
fn reruns_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let m = RunManifest {
            noise: Some(NoiseManifest { sigma: 20.0, seed: 11 }),
            time_grid: Some(vec![0.5, 2.0]),
            output_dir: Some(tmp.path().join(name)),
            ..manifest(tmp.path())
        };
        commands::filter(&m).unwrap();
        (
            fs::read(tmp.path().join(name).join("metrics.csv")).unwrap(),
            fs::read(tmp.path().join(name).join("v_t2.pgm")).unwrap(),
        )
    };
    assert_eq!(run("a"), run("b"));
}

#[test]
fn long_run_writes_components() {
    let tmp = tempfile::tempdir().unwrap();
    let m = RunManifest {
        d: Some([1.0, 0.9, 1.0, 1.0]),
        time_grid: Some(vec![15.0]),
        ..manifest(tmp.path())
    };
    let out = commands::filter(&m).unwrap();
    assert!(tmp.path().join("u_t15.pgm").exists());
    assert!(tmp.path().join("v_t15.pgm").exists());
    let row = out.rows[0];
    assert!(row.snr.is_finite() && row.v_max > row.v_min);
    assert!(row.avg_grey_v.abs() < 1e-9);
}

#[test]
fn config_file_with_flag_overrides() {
    let tmp = tempfile::tempdir().unwrap();
    let config = tmp.path().join("run.json");
    fs::write(
        &config,
        r#"{"d": [1, 0.5, 0.5, 1], "p": 3, "time_grid": [1, 2], "pattern": "disk", "size": 32,
            "noise": {"sigma": 10, "seed": 4}}"#,
    )
    .unwrap();
    let out_dir = tmp.path().join("o");
    let out = crossdiff(&[
        "filter",
        "--config",
        config.to_str().unwrap(),
        "--t",
        "0.5",
        "--seed",
        "9",
        "--output-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let effective = RunManifest::load(&out_dir.join("manifest.json")).unwrap();
    assert_eq!(effective.time_grid, Some(vec![0.5]));
    assert_eq!(effective.p, Some(3.0));
    assert_eq!(effective.noise, Some(NoiseManifest { sigma: 10.0, seed: 9 }));
    assert!(out_dir.join("u_t0.5.pgm").exists());
}

#[test]
fn bad_arguments_are_usage_errors() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().to_str().unwrap();
    for args in [
        &["filter", "--pattern", "box", "--size", "16", "--times", "2,1", "--output-dir", dir][..],
        &["filter", "--kind", "3"],
        &["sweep", "--pattern", "box", "--size", "16", "--output-dir", dir],
        &["sweep", "--p-list", "", "--output-dir", dir],
        &["decompose"],
    ] {
        let out = crossdiff(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let err = commands::sweep(&manifest(tmp.path()), &SweepAxis::P(vec![]), &[], 0).unwrap_err();
    assert_eq!(exit_code(&err), 2);
}

#[test]
fn invalid_matrix_fails_with_message() {
    let out = crossdiff(&["decompose", "--d", "1,2,2,1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not positive definite"));
}

#[test]
fn decompose_reports_each_case() {
    let report = stdout(&crossdiff(&["decompose", "--d", "1,0.1,1,1.1"]));
    assert!(report.contains("case = (i)"), "{report}");
    let report = stdout(&crossdiff(&["decompose", "--d", "1,-0.5,0.5,1"]));
    assert!(report.contains("case = (iv)") && report.contains("1+0.5i"), "{report}");
    let report = stdout(&crossdiff(&["decompose", "--d", "1,0,1.99,1"]));
    assert!(report.contains("case = (iii)") && report.contains("s = 0"), "{report}");
    let report = stdout(&crossdiff(&["decompose", "--d", "2,0,0,2"]));
    assert!(report.contains("case = (ii)"), "{report}");
}

#[test]
fn edges_of_constant_image_are_flat() {
    let tmp = tempfile::tempdir().unwrap();
    let input = save(tmp.path(), "flat.pgm", &Image::new(16, 16, vec![200.0; 256]).unwrap());
    let m = RunManifest {
        input: Some(input),
        output_dir: Some(tmp.path().join("o")),
        ..Default::default()
    };
    let out = commands::edges(&m).unwrap();
    assert!(out.edge_range.is_flat() && out.prewitt_range.is_flat());
    for name in ["edges.pgm", "prewitt.pgm"] {
        let img = read_image(&tmp.path().join("o").join(name)).unwrap();
        assert!(img.values.iter().all(|&v| v == 0.0), "{name}");
    }
}

#[test]
fn edges_follow_the_outline() {
    let tmp = tempfile::tempdir().unwrap();
    // |ξ|³ is nonlocal, so its interior response decays only algebraically
    for (p, interior) in [(2.0, 1e-3), (3.0, 2e-2)] {
        let m = RunManifest {
            pattern: Some("box".into()),
            size: Some(64),
            p: Some(p),
            output_dir: Some(tmp.path().to_path_buf()),
            ..Default::default()
        };
        let out = commands::edges(&m).unwrap();
        // strongest response on the box outline (|x| = 16 px), none far inside
        let e = &out.edges;
        let at = |c: usize, r: usize| e.get(c, r).abs();
        let peak = e.values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        assert!(at(16, 32).max(at(15, 32)) > 0.5 * peak, "p = {p}");
        assert!(at(32, 32) < interior * peak, "p = {p}: {}", at(32, 32) / peak);
        assert!(out.prewitt.get(32, 32) == 0.0);
    }
}

#[test]
fn zero_coupling_is_reported() {
    let tmp = tempfile::tempdir().unwrap();
    let out = crossdiff(&[
        "edges",
        "--pattern",
        "disk",
        "--size",
        "16",
        "--d",
        "1,0.3,0,1",
        "--output-dir",
        tmp.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
}

#[test]
fn p_sweep_gives_finite_rows() {
    let tmp = tempfile::tempdir().unwrap();
    let m = RunManifest {
        noise: Some(NoiseManifest { sigma: 25.0, seed: 2 }),
        ..manifest(tmp.path())
    };
    let out = commands::sweep(&m, &SweepAxis::P(vec![2.0, 3.0, 4.0, 5.0, 6.0]), &[], 0).unwrap();
    assert_eq!(out.rows.len(), 5);
    assert!(out.rows.iter().all(|r| r.snr.is_finite() && r.psnr.is_finite() && r.seed == Some(2)));
    let csv = fs::read_to_string(tmp.path().join("sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 7);
}

#[test]
fn sigma_sweep_table_and_seed_policy() {
    let tmp = tempfile::tempdir().unwrap();
    let out = commands::sweep(
        &manifest(tmp.path()),
        &SweepAxis::Sigma(vec![15.0, 25.0, 35.0]),
        &InitialKind::ALL,
        100,
    )
    .unwrap();
    assert_eq!(out.rows.len(), 9);
    let seeds: Vec<u64> = out.rows.iter().map(|r| r.seed.unwrap()).collect();
    assert_eq!(seeds, vec![100, 100, 100, 101, 101, 101, 102, 102, 102]);
    let csv = out.csv.as_str();
    assert!(csv.starts_with("# noise seed = base_seed + index, base_seed = 100\naxis,value,kind,t,seed,snr,psnr\n"));
}

#[test]
fn d_sweep_via_binary() {
    let tmp = tempfile::tempdir().unwrap();
    let out = crossdiff(&[
        "sweep",
        "--pattern",
        "phantom",
        "--size",
        "32",
        "--sigma",
        "25",
        "--d-list",
        "1,0.9,1,1;1,-0.5,0.5,1",
        "--t",
        "2",
        "--output-dir",
        tmp.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("d,1;0.9;1;1,0,2,0,"), "{text}");
    assert!(text.contains("d,1;-0.5;0.5;1,0,2,0,"), "{text}");
}

#[test]
fn demo1d_profiles() {
    let tmp = tempfile::tempdir().unwrap();
    let out = crossdiff(&["demo1d", "--output-dir", tmp.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(tmp.path().join("profiles.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "x,u_t0,v_t0,u_t0.25,v_t0.25,u_t2.5,v_t2.5,u_t25,v_t25");
    assert_eq!(lines.count(), 800);
}

#[test]
fn decoupled_demo_has_no_second_component() {
    let tmp = tempfile::tempdir().unwrap();
    let m = RunManifest {
        d: Some([1.0, 0.0, 0.0, 1.1]),
        output_dir: Some(tmp.path().to_path_buf()),
        ..Default::default()
    };
    let profiles = commands::demo1d(&m, None).unwrap();
    assert!(profiles.v.iter().flatten().all(|&v| v == 0.0));
}

#[test]
fn demo1d_reads_a_signal_file() {
    let tmp = tempfile::tempdir().unwrap();
    let signal = tmp.path().join("s.csv");
    fs::write(&signal, "value\n0\n0\n1\n1\n1\n1\n0\n0\n").unwrap();
    let m = RunManifest {
        input: Some(signal),
        output_dir: Some(tmp.path().to_path_buf()),
        time_grid: Some(vec![0.0, 1.0]),
        ..Default::default()
    };
    let profiles = commands::demo1d(&m, Some(4.0)).unwrap();
    assert_eq!(profiles.x, vec![-4.0, -3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0]);
    let image = tmp.path().join("i.pgm");
    write_image(&gradient_image(4, 4), &image, PgmEncoding::Binary).unwrap();
    let m = RunManifest {
        input: Some(image),
        output_dir: Some(tmp.path().to_path_buf()),
        ..Default::default()
    };
    assert!(commands::demo1d(&m, None).is_err());
}
