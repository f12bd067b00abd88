use std::path::Path;
use std::process::{Command, Output};

use optcwt::bench::seeded_signal;
use optcwt::{import_raw, write_wav, AudioSignal};

fn optcwt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_optcwt"))
        .args(args)
        .output()
        .expect("spawn optcwt")
}

fn write_noise_wav(path: &Path, n: usize, seed: u64) {
    let samples: Vec<f64> = seeded_signal(n, seed).iter().map(|v| v * 0.9).collect();
    write_wav(path, &AudioSignal::new(samples, 16_000, "noise").unwrap()).unwrap();
}

fn png_size(path: &Path) -> (u32, u32) {
    let decoder = png::Decoder::new(std::io::BufReader::new(std::fs::File::open(path).unwrap()));
    let reader = decoder.read_info().unwrap();
    (reader.info().width, reader.info().height)
}

#[test]
fn transform_ten_second_file_to_default_png() {
    let dir = tempfile::tempdir().unwrap();
    let wav = dir.path().join("f.wav");
    let png = dir.path().join("f.png");
    write_noise_wav(&wav, 160_000, 1);
    let out = optcwt(&[
        "transform",
        wav.to_str().unwrap(),
        "--out",
        png.to_str().unwrap(),
        "--format",
        "png",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(png_size(&png), (512, 512));
    assert!(String::from_utf8_lossy(&out.stdout).contains("128x1250"));
}

#[test]
fn transform_raw_and_csv_exports() {
    let dir = tempfile::tempdir().unwrap();
    let wav = dir.path().join("a.wav");
    write_noise_wav(&wav, 5000, 2);
    let raw = dir.path().join("a.raw");
    let csv = dir.path().join("a.csv");
    let common = ["--scales", "3:10", "--wl", "33", "--hop", "16"];
    for (path, format) in [(&raw, "raw"), (&csv, "csv")] {
        let mut args = vec![
            "transform",
            wav.to_str().unwrap(),
            "--out",
            path.to_str().unwrap(),
            "--format",
            format,
        ];
        args.extend_from_slice(&common);
        assert_eq!(optcwt(&args).status.code(), Some(0));
    }
    let m = import_raw(&raw).unwrap();
    assert_eq!(m.shape(), (8, 313));
    assert_eq!(m.hop(), 16);
    assert_eq!(m.source_length(), 5000);
    assert_eq!(m.sample_rate_hz(), 16_000);

    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "# scales=3,4,5,6,7,8,9,10 hop=16 n=5000 rate=16000"
    );
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 8);
    for (s, row) in rows.iter().enumerate() {
        assert_eq!(&row[..], m.row(s), "csv row {s} is not lossless");
    }
}

#[test]
fn kernel_subcommand_single_tap() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("k.csv");
    let out = optcwt(&[
        "kernel",
        "--scale",
        "4",
        "--wl",
        "1",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    let data: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(data.len(), 1);
    let fields: Vec<f64> = data[0].split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(fields, vec![0.0, 0.0, 0.5]);
}

#[test]
fn missing_input_names_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let png = dir.path().join("o.png");
    let out = optcwt(&[
        "transform",
        "missing.wav",
        "--out",
        png.to_str().unwrap(),
        "--format",
        "png",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.wav"));
    assert!(!png.exists());
}

#[test]
fn malformed_and_unwritable_are_data_errors() {
    let dir = tempfile::tempdir().unwrap();
    let junk = dir.path().join("junk.wav");
    std::fs::write(&junk, b"definitely not a wave file").unwrap();
    let out = optcwt(&[
        "transform",
        junk.to_str().unwrap(),
        "--out",
        "/tmp/never.png",
        "--format",
        "png",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("malformed"));

    let wav = dir.path().join("ok.wav");
    write_noise_wav(&wav, 1000, 3);
    let out = optcwt(&[
        "transform",
        wav.to_str().unwrap(),
        "--out",
        "/no/such/dir/o.raw",
        "--format",
        "raw",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/no/such/dir/o.raw"));
}

#[test]
fn bad_flags_are_usage_errors() {
    assert_eq!(
        optcwt(&[
            "transform",
            "x.wav",
            "--out",
            "o",
            "--format",
            "png",
            "--scales",
            "9:2"
        ])
        .status
        .code(),
        Some(1)
    );
    assert_eq!(
        optcwt(&["kernel", "--scale", "4", "--wl", "1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(optcwt(&["bench", "--reps", "2"]).status.code(), Some(1));
    assert_eq!(
        optcwt(&["grid", "--wl", "16", "--hop", "1", "--out", "g.csv", "--colour"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn bench_and_grid_write_csv() {
    let dir = tempfile::tempdir().unwrap();
    let bench = dir.path().join("bench.csv");
    let out = optcwt(&[
        "bench",
        "--n",
        "3000",
        "--reps",
        "3",
        "--out",
        bench.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(&bench).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "name,WL,H,backend,median_s,speedup_vs_baseline");
    assert_eq!(lines.len(), 3);
    assert!(lines[2].starts_with("optimized,64,128,auto,"));

    let grid = dir.path().join("grid.csv");
    let out = optcwt(&[
        "grid",
        "--wl",
        "16,64",
        "--hop",
        "1,128",
        "--n",
        "2000",
        "--out",
        grid.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&grid).unwrap();
    let pairs: Vec<(usize, usize)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[1].parse().unwrap())
        })
        .collect();
    assert_eq!(pairs, vec![(16, 1), (16, 128), (64, 1), (64, 128)]);
}
