// Copyright 2026 The qksvm Developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except
// in compliance with the License. You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the
// License is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either
// express or implied. See the License for the specific language governing permissions and
// limitations under the License.

//! `preprocess`: labeled binary files to an angle-encoded dataset.
//!
//! Each input file becomes a grayscale image (byte rows at a width chosen by
//! file size), is resized to a fixed frame, flattened, reduced to one
//! feature per qubit with PCA, and scaled into a rotation-angle range.

use std::path::{Path, PathBuf};

use clap::Args;
use qksvm_core::error::{Error, Result};
use qksvm_core::preprocess::{
    balanced_split, bytes_to_image, fit_pca, load_labeled_dir, resize, transform_pca,
    AngleScaler, Dataset, GrayscaleImage, PcaModel, WidthSchedule,
};
use serde::Serialize;

#[derive(Args)]
pub struct PreprocessArgs {
    /// Directory holding the raw binary input files.
    #[arg(long)]
    pub input_dir: PathBuf,
    /// CSV of `filename,label` rows with labels 0 or 1.
    #[arg(long)]
    pub labels: PathBuf,
    /// Frame every image is resized to, as WIDTHxHEIGHT.
    #[arg(long, default_value = "64x64")]
    pub image_size: String,
    /// Number of qubits; PCA reduces each image to this many features.
    #[arg(long)]
    pub qubits: usize,
    /// Output angle interval as LO:HI, in radians.
    #[arg(long, default_value = "0:6.283185307179586")]
    pub angle_range: String,
    /// Seed for the train/test shuffle.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output dataset CSV; with a split, <stem>_train.csv and <stem>_test.csv.
    #[arg(long)]
    pub out: PathBuf,
    /// Emit a balanced train split of this many samples.
    #[arg(long, requires = "split_test")]
    pub split_train: Option<usize>,
    /// Emit a balanced test split of this many samples.
    #[arg(long, requires = "split_train")]
    pub split_test: Option<usize>,
    /// Which rows fit the PCA and the angle scaler.
    #[arg(long, value_parser = ["train", "all"], default_value = "train")]
    pub fit_on: String,
}

pub fn parse_image_size(text: &str) -> Result<(usize, usize)> {
    let (w, h) = text
        .split_once(['x', 'X'])
        .ok_or_else(|| Error::InvalidArgument(format!("image size '{text}' is not WxH")))?;
    let parse = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| Error::InvalidArgument(format!("bad image dimension '{s}'")))
    };
    let (w, h) = (parse(w)?, parse(h)?);
    if w == 0 || h == 0 {
        return Err(Error::InvalidArgument("image dimensions must be positive".into()));
    }
    Ok((w, h))
}

pub fn parse_angle_range(text: &str) -> Result<(f64, f64)> {
    let (lo, hi) = text
        .split_once(':')
        .ok_or_else(|| Error::InvalidArgument(format!("angle range '{text}' is not LO:HI")))?;
    let parse = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| Error::InvalidArgument(format!("bad angle bound '{s}'")))
    };
    let (lo, hi) = (parse(lo)?, parse(hi)?);
    if lo >= hi || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidArgument(format!("angle range {lo}:{hi} is not increasing")));
    }
    Ok((lo, hi))
}

/// Models fitted during preprocessing, written next to the dataset so a
/// later run can reproduce or re-apply the exact transform.
#[derive(Serialize)]
struct Sidecar<'a> {
    image_size: (usize, usize),
    qubits: usize,
    angle_range: (f64, f64),
    seed: u64,
    fit_on: &'a str,
    width_schedule: &'a WidthSchedule,
    pca: &'a PcaModel,
    scaler: &'a AngleScaler,
    outputs: Vec<String>,
}

fn file_to_features(
    bytes: &[u8],
    schedule: &WidthSchedule,
    frame: (usize, usize),
) -> Result<Vec<f64>> {
    let img: GrayscaleImage = bytes_to_image(bytes, schedule)?;
    Ok(resize(&img, frame.0, frame.1)?.to_features())
}

fn sidecar_path(out: &Path) -> PathBuf {
    out.with_extension("json")
}

fn split_paths(out: &Path) -> (PathBuf, PathBuf) {
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("dataset");
    let ext = out.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    let dir = out.parent().map(Path::to_path_buf).unwrap_or_default();
    (dir.join(format!("{stem}_train.{ext}")), dir.join(format!("{stem}_test.{ext}")))
}

pub fn run(args: PreprocessArgs) -> Result<()> {
    let frame = parse_image_size(&args.image_size)?;
    let range = parse_angle_range(&args.angle_range)?;
    let schedule = WidthSchedule::default();

    let raw = load_labeled_dir(&args.input_dir, &args.labels)?;
    let mut features = Vec::with_capacity(raw.len());
    let mut labels = Vec::with_capacity(raw.len());
    for (bytes, label) in &raw {
        features.push(file_to_features(bytes, &schedule, frame)?);
        labels.push(*label);
    }
    let dims = frame.0 * frame.1;

    let mut metadata = std::collections::BTreeMap::new();
    metadata.insert("source_dir".into(), args.input_dir.display().to_string());
    metadata.insert("image_size".into(), format!("{}x{}", frame.0, frame.1));
    metadata.insert("qubits".into(), args.qubits.to_string());
    metadata.insert("angle_range".into(), format!("{}:{}", range.0, range.1));
    metadata.insert("preprocess_seed".into(), args.seed.to_string());
    let full = Dataset::new(features, labels, metadata)?;

    let (pca, scaler, outputs) = match (args.split_train, args.split_test) {
        (Some(n_train), Some(n_test)) => {
            let (train, test) = balanced_split(&full, n_train, n_test, args.seed)?;
            let fit_rows: &[Vec<f64>] =
                if args.fit_on == "train" { &train.features } else { &full.features };
            let (pca, scaler) = fit_models(fit_rows, args.qubits, dims, range)?;
            let train_out = apply_models(&train, &pca, &scaler)?;
            let test_out = apply_models(&test, &pca, &scaler)?;
            let (train_path, test_path) = split_paths(&args.out);
            train_out.save(&train_path)?;
            test_out.save(&test_path)?;
            println!(
                "wrote {} ({} samples) and {} ({} samples)",
                train_path.display(),
                train_out.len(),
                test_path.display(),
                test_out.len()
            );
            (pca, scaler, vec![train_path, test_path])
        }
        (None, None) => {
            let (pca, scaler) = fit_models(&full.features, args.qubits, dims, range)?;
            let out = apply_models(&full, &pca, &scaler)?;
            out.save(&args.out)?;
            println!("wrote {} ({} samples)", args.out.display(), out.len());
            (pca, scaler, vec![args.out.clone()])
        }
        // Clap's `requires` already rejects one-sided flags; this covers
        // direct construction.
        _ => return Err(Error::InvalidArgument("split needs both sizes".into())),
    };

    let sidecar = Sidecar {
        image_size: frame,
        qubits: args.qubits,
        angle_range: range,
        seed: args.seed,
        fit_on: &args.fit_on,
        width_schedule: &schedule,
        pca: &pca,
        scaler: &scaler,
        outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
    };
    let path = sidecar_path(&args.out);
    std::fs::write(&path, serde_json::to_string_pretty(&sidecar)?)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn fit_models(
    rows: &[Vec<f64>],
    qubits: usize,
    dims: usize,
    range: (f64, f64),
) -> Result<(PcaModel, AngleScaler)> {
    if qubits == 0 || qubits > dims {
        return Err(Error::InvalidArgument(format!(
            "{qubits} qubits out of range for {dims}-dimensional features"
        )));
    }
    let pca = fit_pca(rows, qubits)?;
    let reduced = transform_pca(&pca, rows)?;
    let scaler = AngleScaler::fit(&reduced, range)?;
    Ok((pca, scaler))
}

fn apply_models(dataset: &Dataset, pca: &PcaModel, scaler: &AngleScaler) -> Result<Dataset> {
    let reduced = transform_pca(pca, &dataset.features)?;
    let scaled = scaler.apply(&reduced)?;
    Dataset::new(scaled, dataset.labels.clone(), dataset.metadata.clone())
}
