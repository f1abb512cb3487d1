use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn szoom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_szoom")).args(args).output().expect("binary runs")
}

fn synth(dir: &Path, seconds: &str) {
    let out = szoom(&["synth", "--out", dir.to_str().unwrap(), "--seconds", seconds, "--seed", "3"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn run_writes_frames_trajectory_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let clip = dir.path().join("clip");
    synth(&clip, "10");
    let config = dir.path().join("szoom.conf");
    fs::write(&config, "# small output\nout_w = 192\nout_h = 108\n").unwrap();
    let out_dir = dir.path().join("out");
    let traj = dir.path().join("traj.jsonl");
    let out = szoom(&[
        "run",
        "--input", clip.join("frames.raw").to_str().unwrap(),
        "--detections", clip.join("detections.jsonl").to_str().unwrap(),
        "--config", config.to_str().unwrap(),
        "--out", out_dir.to_str().unwrap(),
        "--trajectory", traj.to_str().unwrap(),
        "--seed", "1",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let summary: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary["frames"], 300);
    assert_eq!(summary["cycles"], 2);
    assert_eq!(fs::read_to_string(&traj).unwrap().lines().count(), 300);
    let pngs = fs::read_dir(&out_dir).unwrap().filter(|e| e.as_ref().unwrap().path().extension().is_some_and(|x| x == "png")).count();
    assert_eq!(pngs, 300);
    let img = image::open(out_dir.join("000120.png")).unwrap();
    assert_eq!((img.width(), img.height()), (192, 108));
    assert!(out_dir.join("summary.json").is_file());

    let acc = szoom(&["eval", "accuracy", "--trajectory", traj.to_str().unwrap(), "--truth", clip.join("truth.jsonl").to_str().unwrap()]);
    assert!(acc.status.success(), "{}", String::from_utf8_lossy(&acc.stderr));
    let v: serde_json::Value = serde_json::from_slice(&acc.stdout).unwrap();
    let a = v["accuracy"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&a));
}

#[test]
fn image_directory_input() {
    let dir = tempfile::tempdir().unwrap();
    let frames = dir.path().join("frames");
    fs::create_dir_all(&frames).unwrap();
    for i in 0..12u8 {
        let img = image::RgbImage::from_pixel(64, 36, image::Rgb([i * 10, 50, 90]));
        img.save(frames.join(format!("img{i}.png"))).unwrap();
    }
    let config = dir.path().join("c.conf");
    fs::write(&config, "fps = 2\nomega = 1\nout_w = 32\nout_h = 18\n").unwrap();
    let traj = dir.path().join("t.jsonl");
    let out = szoom(&["run", "--input", frames.to_str().unwrap(), "--config", config.to_str().unwrap(), "--trajectory", traj.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let lines: Vec<String> = fs::read_to_string(&traj).unwrap().lines().map(String::from).collect();
    assert_eq!(lines.len(), 12);
    assert!(lines[11].starts_with("{\"frame\":11,\"cycle\":1,"), "{}", lines[11]);
}

#[test]
fn out_of_order_detections_fail_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let clip = dir.path().join("clip");
    synth(&clip, "1");
    let det = dir.path().join("bad.jsonl");
    fs::write(
        &det,
        "{\"frame\":2,\"kind\":\"human\",\"x\":1,\"y\":1,\"w\":4,\"h\":4,\"confidence\":1.0}\n\
         {\"frame\":5,\"kind\":\"human\",\"x\":1,\"y\":1,\"w\":4,\"h\":4,\"confidence\":1.0}\n\
         {\"frame\":3,\"kind\":\"face\",\"x\":1,\"y\":1,\"w\":4,\"h\":4,\"confidence\":1.0}\n",
    )
    .unwrap();
    let out = szoom(&["run", "--input", clip.join("frames.raw").to_str().unwrap(), "--detections", det.to_str().unwrap()]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn bad_inputs_are_reported() {
    let dir = tempfile::tempdir().unwrap();
    let clip = dir.path().join("clip");
    synth(&clip, "1");
    let input = clip.join("frames.raw");

    let missing = szoom(&["run", "--input", dir.path().join("nope.raw").to_str().unwrap()]);
    assert!(!missing.status.success());
    assert!(String::from_utf8_lossy(&missing.stderr).contains("nope.raw"));

    let mask = dir.path().join("mask.png");
    image::GrayImage::from_pixel(10, 10, image::Luma([255])).save(&mask).unwrap();
    let out = szoom(&["run", "--input", input.to_str().unwrap(), "--mask", mask.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("dimension mismatch"));

    let config = dir.path().join("c.conf");
    fs::write(&config, "fps = 30\nzoom_speed = 3\n").unwrap();
    let out = szoom(&["run", "--input", input.to_str().unwrap(), "--config", config.to_str().unwrap()]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2") && err.contains("zoom_speed"), "{err}");
}

#[test]
fn eval_prf_reports_scores() {
    let dir = tempfile::tempdir().unwrap();
    let (pred, truth) = (dir.path().join("pred"), dir.path().join("truth"));
    fs::create_dir_all(&pred).unwrap();
    fs::create_dir_all(&truth).unwrap();
    let mut t = image::GrayImage::new(8, 8);
    let mut p = image::GrayImage::new(8, 8);
    for x in 0..4 {
        t.put_pixel(x, 0, image::Luma([255]));
    }
    for x in 2..6 {
        p.put_pixel(x, 0, image::Luma([1]));
    }
    t.save(truth.join("0001.png")).unwrap();
    p.save(pred.join("0001.png")).unwrap();
    let out = szoom(&["eval", "prf", "--pred", pred.to_str().unwrap(), "--truth", truth.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["frames"], 1);
    assert_eq!(v["mean"]["precision"], 0.5);
    assert_eq!(v["mean"]["recall"], 0.5);
    assert_eq!(v["mean"]["f1"], 0.5);
}
