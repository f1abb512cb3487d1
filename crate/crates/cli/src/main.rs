use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use szoom_core::io::evaluate_mask_dirs;
use szoom_core::observation::{DetectionStream, ObservationKind};
use szoom_core::pipeline::{read_trajectory, read_truth, run_paths, zoom_accuracy, CycleTruth, RunPaths};
use szoom_core::synth::{ObjectPath, Scene, SceneObject};
use szoom_core::PipelineConfig;

#[derive(Parser)]
#[command(name = "szoom", version, about = "Automatic zoom for high-resolution surveillance video")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Process a frame stream into zoomed output frames and a trajectory log.
    Run {
        /// Directory of numbered images or a raw frame stream.
        #[arg(long)]
        input: PathBuf,
        /// Detection stream (JSON Lines).
        #[arg(long)]
        detections: Option<PathBuf>,
        /// User relevance mask (PGM or PNG, nonzero = relevant).
        #[arg(long)]
        mask: Option<PathBuf>,
        /// Configuration file (`key = value` lines).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Directory for output frames and summary.json.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Trajectory log to write (JSON Lines).
        #[arg(long)]
        trajectory: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Evaluation reports.
    Eval {
        #[command(subcommand)]
        what: Eval,
    },
    /// Write a synthetic test clip with matching detections and truth.
    Synth {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 10.0)]
        seconds: f64,
        #[arg(long, default_value_t = 30.0)]
        fps: f64,
        #[arg(long, default_value_t = 640)]
        width: usize,
        #[arg(long, default_value_t = 360)]
        height: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum Eval {
    /// Pixel-level precision, recall and F1 between two mask directories.
    Prf {
        #[arg(long)]
        pred: PathBuf,
        #[arg(long)]
        truth: PathBuf,
    },
    /// Share of zoom operations whose held view contains the truth box.
    Accuracy {
        #[arg(long)]
        trajectory: PathBuf,
        #[arg(long)]
        truth: PathBuf,
    },
}

fn open(path: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(File::open(path).with_context(|| format!("cannot open {}", path.display()))?))
}

fn print_json(value: &impl serde::Serialize) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn synth(out: &Path, seconds: f64, fps: f64, width: usize, height: usize, seed: u64) -> Result<()> {
    if width < 160 || height < 90 {
        bail!("synthetic clips need at least 160x90 pixels");
    }
    let frames = (seconds * fps).round() as u64;
    let (w, h) = (width as f64, height as f64);
    let scene = Scene::new(width, height, seed)
        .with_noise(2)
        .with_object(SceneObject::new(
            (width / 16) as i32,
            (height / 6) as i32,
            [230, 40, 40],
            ObjectPath::Linear { x0: w * 0.1, y0: h * 0.5, vx: w / (frames.max(1) as f64 * 2.0), vy: 0.0 },
        ))
        .with_object(SceneObject::new(
            (width / 20) as i32,
            (height / 8) as i32,
            [40, 200, 240],
            ObjectPath::Static { x: w * 0.7, y: h * 0.2 },
        ));
    fs::create_dir_all(out).with_context(|| format!("cannot create {}", out.display()))?;
    scene.write_raw(&out.join("frames.raw"), frames)?;

    let detections = DetectionStream::from_records(scene.detections(&ObservationKind::Human, &[0, 1], 0..frames))?;
    let mut det = BufWriter::new(File::create(out.join("detections.jsonl"))?);
    detections.write(&mut det)?;
    det.flush()?;

    // Truth for the moving object at the end of each cycle's hold phase.
    let delta = (5.0 * fps).round() as u64;
    let hold_end = (delta as f64 * 0.2).floor() as u64 * 2 + (delta as f64 * 0.3).floor() as u64 - 1;
    let mut truth = BufWriter::new(File::create(out.join("truth.jsonl"))?);
    for cycle in 0..frames / delta.max(1) {
        if let Some(r) = scene.object_rect(0, cycle * delta + hold_end) {
            let t = CycleTruth { cycle, x: r.x, y: r.y, w: r.w, h: r.h };
            serde_json::to_writer(&mut truth, &t)?;
            truth.write_all(b"\n")?;
        }
    }
    truth.flush()?;
    eprintln!("wrote {frames} frames to {}", out.display());
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run { input, detections, mask, config, out, trajectory, seed } => {
            let mut cfg = match &config {
                Some(p) => PipelineConfig::load(p).with_context(|| format!("config {}", p.display()))?,
                None => PipelineConfig::default(),
            };
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let paths = RunPaths { input, detections, mask, out_dir: out, trajectory };
            let summary = run_paths(cfg, &paths)?;
            print_json(&summary)?;
        }
        Command::Eval { what: Eval::Prf { pred, truth } } => {
            print_json(&evaluate_mask_dirs(&pred, &truth)?)?;
        }
        Command::Eval { what: Eval::Accuracy { trajectory, truth } } => {
            let entries = read_trajectory(open(&trajectory)?)
                .with_context(|| format!("trajectory {}", trajectory.display()))?;
            let truth = read_truth(open(&truth)?).with_context(|| format!("truth {}", truth.display()))?;
            let accuracy = zoom_accuracy(&entries, &truth)?;
            print_json(&serde_json::json!({ "accuracy": accuracy }))?;
        }
        Command::Synth { out, seconds, fps, width, height, seed } => synth(&out, seconds, fps, width, height, seed)?,
    }
    Ok(())
}
