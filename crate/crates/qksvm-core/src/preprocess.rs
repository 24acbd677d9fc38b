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

//! Byte streams to angle-ready feature vectors.
//!
//! The pipeline: raw bytes become a grayscale image whose width is chosen by
//! file size from a [`WidthSchedule`]; the image is resized (aspect
//! preserved, nearest neighbor, zero padding) to a uniform shape; pixels are
//! flattened; PCA reduces them to as many dimensions as qubits; a min-max
//! scaler maps each dimension onto an angle range, `(0, 2π)` by default.
//! [`balanced_split`] carves seed-reproducible class-balanced train/test
//! sets, and [`generate_synthetic`] creates two-Gaussian-blob stand-in data.
//!
//! Every stage is deterministic: integer-only resize arithmetic, a fixed PCA
//! sign convention and seeded sampling make repeated runs byte-identical.
//! Leakage note: fit [`fit_pca`] and [`AngleScaler`] on training rows only,
//! then apply to test rows; fitting on everything is possible but changes
//! results.

use std::collections::BTreeMap;
use std::path::Path;

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Full angle period of the phase-based feature maps.
pub const DEFAULT_ANGLE_RANGE: (f64, f64) = (0.0, std::f64::consts::TAU);

/// Row-major 8-bit grayscale image.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrayscaleImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayscaleImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<GrayscaleImage> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidArgument("image dimensions must be positive".into()));
        }
        if pixels.len() != width * height {
            return Err(Error::InvalidArgument(format!(
                "{}x{} image needs {} pixels, got {}",
                width,
                height,
                width * height,
                pixels.len()
            )));
        }
        Ok(GrayscaleImage { width, height, pixels })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    /// Pixels as f64 features, row-major.
    pub fn to_features(&self) -> Vec<f64> {
        self.pixels.iter().map(|&p| p as f64).collect()
    }
}

/// Maps byte length to image width: the first breakpoint whose size bound
/// covers the input wins, otherwise `fallback_width` applies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WidthSchedule {
    /// `(max_size_bytes, width)`, sizes strictly increasing.
    pub breakpoints: Vec<(u64, usize)>,
    pub fallback_width: usize,
}

impl Default for WidthSchedule {
    /// The conventional size-to-width table for binary visualization.
    fn default() -> Self {
        WidthSchedule {
            breakpoints: vec![
                (10 * 1024, 32),
                (30 * 1024, 64),
                (60 * 1024, 128),
                (100 * 1024, 256),
                (200 * 1024, 384),
                (500 * 1024, 512),
                (1000 * 1024, 768),
            ],
            fallback_width: 1024,
        }
    }
}

impl WidthSchedule {
    pub fn validate(&self) -> Result<()> {
        let mut prev: Option<u64> = None;
        for &(size, width) in &self.breakpoints {
            if width == 0 {
                return Err(Error::Config("schedule width must be positive".into()));
            }
            if let Some(p) = prev {
                if size <= p {
                    return Err(Error::Config(format!(
                        "schedule sizes must be strictly increasing ({p} then {size})"
                    )));
                }
            }
            prev = Some(size);
        }
        if self.fallback_width == 0 {
            return Err(Error::Config("schedule fallback width must be positive".into()));
        }
        Ok(())
    }

    pub fn width_for(&self, num_bytes: u64) -> usize {
        for &(size, width) in &self.breakpoints {
            if num_bytes <= size {
                return width;
            }
        }
        self.fallback_width
    }
}

/// Renders bytes as a grayscale image: byte k is pixel intensity k, width
/// comes from the schedule, and the final row is zero-padded.
pub fn bytes_to_image(data: &[u8], schedule: &WidthSchedule) -> Result<GrayscaleImage> {
    schedule.validate()?;
    if data.is_empty() {
        return Err(Error::InvalidArgument("cannot image an empty byte stream".into()));
    }
    let width = schedule.width_for(data.len() as u64);
    let height = data.len().div_ceil(width);
    let mut pixels = data.to_vec();
    pixels.resize(width * height, 0);
    GrayscaleImage::new(width, height, pixels)
}

/// Scales the image to fit inside `target_w x target_h` preserving aspect
/// ratio (integer nearest-neighbor sampling), then zero-pads right and
/// bottom to exactly the target shape.
pub fn resize(img: &GrayscaleImage, target_w: usize, target_h: usize) -> Result<GrayscaleImage> {
    if target_w == 0 || target_h == 0 {
        return Err(Error::InvalidArgument("resize target must be positive".into()));
    }
    let (w, h) = (img.width(), img.height());
    // Pick the axis that limits the scale; integer arithmetic keeps the
    // mapping exact and platform-independent.
    let (new_w, new_h) = if w * target_h >= h * target_w {
        (target_w, (h * target_w / w).max(1))
    } else {
        ((w * target_h / h).max(1), target_h)
    };
    let mut pixels = vec![0u8; target_w * target_h];
    for y in 0..new_h {
        let src_y = y * h / new_h;
        for x in 0..new_w {
            let src_x = x * w / new_w;
            pixels[y * target_w + x] = img.get(src_x, src_y);
        }
    }
    GrayscaleImage::new(target_w, target_h, pixels)
}

/// Principal-component model: orthonormal direction rows, their variances in
/// non-increasing order, and the training mean.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcaModel {
    pub mean: Vec<f64>,
    /// Rows are principal directions of length `mean.len()`.
    pub components: Vec<Vec<f64>>,
    pub explained_variances: Vec<f64>,
}

impl PcaModel {
    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    pub fn input_dims(&self) -> usize {
        self.mean.len()
    }
}

/// Fits a k-component PCA on sample rows. Uses the covariance eigenproblem
/// when dims ≤ samples and the Gram-matrix route otherwise, so wide data
/// (e.g. 4096 pixel features) stays cheap. Component signs are fixed by
/// making each row's largest-magnitude entry positive.
pub fn fit_pca(features: &[Vec<f64>], k: usize) -> Result<PcaModel> {
    let n = features.len();
    if n < 2 {
        return Err(Error::InvalidArgument("PCA needs at least two samples".into()));
    }
    let d = features[0].len();
    check_rect(features)?;
    if k == 0 || k > n.min(d) {
        return Err(Error::InvalidArgument(format!(
            "component count must lie in 1..={} (min of samples and dims), got {k}",
            n.min(d)
        )));
    }

    let mut mean = vec![0.0; d];
    for row in features {
        for (m, &v) in mean.iter_mut().zip(row) {
            *m += v;
        }
    }
    for m in &mut mean {
        *m /= n as f64;
    }
    let centered = DMatrix::from_fn(n, d, |i, j| features[i][j] - mean[j]);
    let denom = (n - 1) as f64;

    let (mut variances, mut components): (Vec<f64>, Vec<Vec<f64>>) = if d <= n {
        let cov = centered.transpose() * &centered / denom;
        let eig = cov.symmetric_eigen();
        let order = eig_order(eig.eigenvalues.as_slice());
        let mut vars = Vec::with_capacity(k);
        let mut comps = Vec::with_capacity(k);
        for &m in order.iter().take(k) {
            vars.push(eig.eigenvalues[m].max(0.0));
            comps.push(eig.eigenvectors.column(m).iter().copied().collect());
        }
        (vars, comps)
    } else {
        let gram = &centered * centered.transpose() / denom;
        let eig = gram.symmetric_eigen();
        let order = eig_order(eig.eigenvalues.as_slice());
        let mut vars = Vec::with_capacity(k);
        let mut comps = Vec::with_capacity(k);
        for &m in order.iter().take(k) {
            let u = eig.eigenvectors.column(m);
            let v = centered.transpose() * u;
            let norm = v.norm();
            if norm < 1e-12 {
                return Err(Error::InvalidArgument(format!(
                    "data rank is below the requested {k} components"
                )));
            }
            vars.push(eig.eigenvalues[m].max(0.0));
            comps.push((v / norm).iter().copied().collect());
        }
        (vars, comps)
    };

    for row in &mut components {
        fix_sign(row);
    }
    for v in &mut variances {
        if !v.is_finite() {
            return Err(Error::InvalidArgument("non-finite variance in PCA fit".into()));
        }
    }
    check_orthonormal(&components)?;
    Ok(PcaModel { mean, components, explained_variances: variances })
}

/// Indices of eigenvalues in non-increasing order.
fn eig_order(eigenvalues: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..eigenvalues.len()).collect();
    order.sort_by(|&a, &b| {
        eigenvalues[b].partial_cmp(&eigenvalues[a]).unwrap_or(std::cmp::Ordering::Equal)
    });
    order
}

/// Flips the row if its largest-magnitude entry (first on ties) is negative.
fn fix_sign(row: &mut [f64]) {
    let mut best = 0usize;
    for (i, v) in row.iter().enumerate() {
        if v.abs() > row[best].abs() {
            best = i;
        }
    }
    if row[best] < 0.0 {
        for v in row.iter_mut() {
            *v = -*v;
        }
    }
}

fn check_orthonormal(components: &[Vec<f64>]) -> Result<()> {
    for (i, a) in components.iter().enumerate() {
        for (j, b) in components.iter().enumerate().skip(i) {
            let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
            let expect = if i == j { 1.0 } else { 0.0 };
            if (dot - expect).abs() > 1e-8 {
                return Err(Error::InvalidArgument(format!(
                    "PCA components {i} and {j} are not orthonormal (dot {dot})"
                )));
            }
        }
    }
    Ok(())
}

/// Projects rows onto the model's components: `(x - mean) · componentᵀ`.
pub fn transform_pca(model: &PcaModel, features: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    check_rect(features)?;
    if let Some(row) = features.first() {
        if row.len() != model.input_dims() {
            return Err(Error::InvalidArgument(format!(
                "model expects {} input dims, rows have {}",
                model.input_dims(),
                row.len()
            )));
        }
    }
    Ok(features
        .iter()
        .map(|row| {
            model
                .components
                .iter()
                .map(|c| {
                    c.iter().zip(row.iter().zip(&model.mean)).map(|(ci, (x, m))| ci * (x - m)).sum()
                })
                .collect()
        })
        .collect())
}

/// Inverse of [`transform_pca`] up to the discarded components:
/// `mean + Σ t_m · component_m`.
pub fn reconstruct_pca(model: &PcaModel, transformed: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    check_rect(transformed)?;
    if let Some(row) = transformed.first() {
        if row.len() != model.num_components() {
            return Err(Error::InvalidArgument(format!(
                "model has {} components, rows have {}",
                model.num_components(),
                row.len()
            )));
        }
    }
    Ok(transformed
        .iter()
        .map(|t| {
            let mut out = model.mean.clone();
            for (tm, comp) in t.iter().zip(&model.components) {
                for (o, c) in out.iter_mut().zip(comp) {
                    *o += tm * c;
                }
            }
            out
        })
        .collect())
}

fn check_rect(features: &[Vec<f64>]) -> Result<()> {
    if features.is_empty() {
        return Err(Error::InvalidArgument("empty feature matrix".into()));
    }
    let d = features[0].len();
    if d == 0 {
        return Err(Error::InvalidArgument("zero-dimensional features".into()));
    }
    if features.iter().any(|r| r.len() != d) {
        return Err(Error::InvalidArgument("ragged feature matrix".into()));
    }
    for row in features {
        if row.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("non-finite feature value".into()));
        }
    }
    Ok(())
}

/// Per-dimension min-max map onto an angle interval, fit on one matrix and
/// applicable to another. Out-of-range values (e.g. test data beyond the
/// training extremes) clamp to the interval; a dimension that was constant
/// at fit time maps everything to the midpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleScaler {
    pub lo: f64,
    pub hi: f64,
    mins: Vec<f64>,
    maxs: Vec<f64>,
}

impl AngleScaler {
    pub fn fit(features: &[Vec<f64>], range: (f64, f64)) -> Result<AngleScaler> {
        let (lo, hi) = range;
        if hi <= lo || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "angle range needs hi > lo, got ({lo}, {hi})"
            )));
        }
        check_rect(features)?;
        let d = features[0].len();
        let mut mins = vec![f64::INFINITY; d];
        let mut maxs = vec![f64::NEG_INFINITY; d];
        for row in features {
            for ((mn, mx), &v) in mins.iter_mut().zip(&mut maxs).zip(row) {
                *mn = mn.min(v);
                *mx = mx.max(v);
            }
        }
        Ok(AngleScaler { lo, hi, mins, maxs })
    }

    pub fn num_dims(&self) -> usize {
        self.mins.len()
    }

    pub fn apply(&self, features: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        check_rect(features)?;
        if features[0].len() != self.num_dims() {
            return Err(Error::InvalidArgument(format!(
                "scaler was fit on {} dims, rows have {}",
                self.num_dims(),
                features[0].len()
            )));
        }
        let mid = 0.5 * (self.lo + self.hi);
        Ok(features
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .map(|(j, &v)| {
                        let span = self.maxs[j] - self.mins[j];
                        if span == 0.0 {
                            mid
                        } else {
                            let t = (v - self.mins[j]) / span;
                            (self.lo + t * (self.hi - self.lo)).clamp(self.lo, self.hi)
                        }
                    })
                    .collect()
            })
            .collect())
    }
}

/// Fit-and-apply min-max scaling of one matrix onto `range`.
pub fn scale_to_angles(features: &[Vec<f64>], range: (f64, f64)) -> Result<Vec<Vec<f64>>> {
    AngleScaler::fit(features, range)?.apply(features)
}

/// Labeled feature rows plus free-form provenance strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub features: Vec<Vec<f64>>,
    /// ±1 per row; +1 is the positive (malware) class.
    pub labels: Vec<i8>,
    pub metadata: BTreeMap<String, String>,
}

impl Dataset {
    pub fn new(
        features: Vec<Vec<f64>>,
        labels: Vec<i8>,
        metadata: BTreeMap<String, String>,
    ) -> Result<Dataset> {
        check_rect(&features)?;
        if features.len() != labels.len() {
            return Err(Error::InvalidArgument(format!(
                "{} feature rows vs {} labels",
                features.len(),
                labels.len()
            )));
        }
        if let Some(bad) = labels.iter().find(|&&l| l != 1 && l != -1) {
            return Err(Error::InvalidArgument(format!("labels must be +1 or -1, got {bad}")));
        }
        Ok(Dataset { features, labels, metadata })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn num_features(&self) -> usize {
        self.features.first().map_or(0, Vec::len)
    }

    /// `(positives, negatives)`.
    pub fn class_counts(&self) -> (usize, usize) {
        let pos = self.labels.iter().filter(|&&l| l == 1).count();
        (pos, self.labels.len() - pos)
    }

    /// CSV rows of features then label; metadata rides along as `# meta:`
    /// comment lines, so a load restores the dataset exactly.
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut out = String::new();
        out.push_str(&format!(
            "# samples={} dims={}\n",
            self.len(),
            self.num_features()
        ));
        for (key, value) in &self.metadata {
            out.push_str(&format!("# meta:{key}={value}\n"));
        }
        for (row, label) in self.features.iter().zip(&self.labels) {
            for v in row {
                out.push_str(&format!("{v},"));
            }
            out.push_str(&format!("{label}\n"));
        }
        std::fs::write(path, out)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Dataset> {
        let text = std::fs::read_to_string(path)?;
        let mut features = Vec::new();
        let mut labels = Vec::new();
        let mut metadata = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if let Some(kv) = rest.trim().strip_prefix("meta:") {
                    if let Some((key, value)) = kv.split_once('=') {
                        metadata.insert(key.to_string(), value.to_string());
                    }
                }
                continue;
            }
            let mut fields: Vec<&str> = line.split(',').collect();
            let label_text = fields.pop().ok_or_else(|| {
                Error::Parse(format!("{}:{}: empty row", path.display(), lineno + 1))
            })?;
            let label: i8 = label_text.trim().parse().map_err(|_| {
                Error::Parse(format!(
                    "{}:{}: bad label '{label_text}'",
                    path.display(),
                    lineno + 1
                ))
            })?;
            let row = fields
                .iter()
                .map(|f| {
                    f.trim().parse::<f64>().map_err(|_| {
                        Error::Parse(format!(
                            "{}:{}: bad feature '{f}'",
                            path.display(),
                            lineno + 1
                        ))
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            features.push(row);
            labels.push(label);
        }
        Dataset::new(features, labels, metadata)
    }
}

/// Draws disjoint class-balanced train and test sets: each split holds
/// exactly half positives and half negatives, rows ordered positives first.
/// The same seed always selects the same rows.
pub fn balanced_split(
    dataset: &Dataset,
    n_train: usize,
    n_test: usize,
    seed: u64,
) -> Result<(Dataset, Dataset)> {
    if !n_train.is_multiple_of(2) || !n_test.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "balanced split needs even sizes, got train={n_train} test={n_test}"
        )));
    }
    if n_train < 2 || n_test < 2 {
        return Err(Error::InvalidArgument("each split needs at least one sample per class".into()));
    }
    let mut pos: Vec<usize> = Vec::new();
    let mut neg: Vec<usize> = Vec::new();
    for (i, &l) in dataset.labels.iter().enumerate() {
        if l == 1 {
            pos.push(i);
        } else {
            neg.push(i);
        }
    }
    let per_class = n_train / 2 + n_test / 2;
    if pos.len() < per_class || neg.len() < per_class {
        return Err(Error::InvalidArgument(format!(
            "need {per_class} samples per class, have {} positive and {} negative",
            pos.len(),
            neg.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    pos.shuffle(&mut rng);
    neg.shuffle(&mut rng);

    let take = |idx: &[usize], tag: &str| -> Result<Dataset> {
        let features = idx.iter().map(|&i| dataset.features[i].clone()).collect();
        let labels = idx.iter().map(|&i| dataset.labels[i]).collect();
        let mut metadata = dataset.metadata.clone();
        metadata.insert("split".into(), tag.into());
        metadata.insert("split_seed".into(), seed.to_string());
        Dataset::new(features, labels, metadata)
    };
    let train_idx: Vec<usize> =
        pos[..n_train / 2].iter().chain(&neg[..n_train / 2]).copied().collect();
    let test_idx: Vec<usize> = pos[n_train / 2..per_class]
        .iter()
        .chain(&neg[n_train / 2..per_class])
        .copied()
        .collect();
    Ok((take(&train_idx, "train")?, take(&test_idx, "test")?))
}

/// Two Gaussian blobs centered at `±separation/2` along a seeded random unit
/// direction; the first half of the rows is the +1 blob.
pub fn generate_synthetic(n: usize, dims: usize, separation: f64, seed: u64) -> Result<Dataset> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("sample count must be even and >= 2, got {n}")));
    }
    if dims == 0 {
        return Err(Error::InvalidArgument("dims must be positive".into()));
    }
    if separation < 0.0 || !separation.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "separation must be a non-negative real, got {separation}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let direction = loop {
        let v: Vec<f64> = (0..dims).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-9 {
            break v.into_iter().map(|x| x / norm).collect::<Vec<f64>>();
        }
    };
    let half = separation / 2.0;
    let mut features = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for s in 0..n {
        let sign = if s < n / 2 { 1.0 } else { -1.0 };
        let row: Vec<f64> = direction
            .iter()
            .map(|&u| sign * half * u + rng.sample::<f64, _>(StandardNormal))
            .collect();
        features.push(row);
        labels.push(if s < n / 2 { 1 } else { -1 });
    }
    let metadata = BTreeMap::from([
        ("generator".to_string(), "gaussian_blobs".to_string()),
        ("n".to_string(), n.to_string()),
        ("dims".to_string(), dims.to_string()),
        ("separation".to_string(), format!("{separation}")),
        ("seed".to_string(), seed.to_string()),
    ]);
    Dataset::new(features, labels, metadata)
}

/// Reads `(bytes, label)` pairs from a directory guided by a labels CSV of
/// `filename,label` lines with label 0 (benign, -1) or 1 (malware, +1).
/// Pairs come back in CSV line order; `#` lines and blanks are skipped.
pub fn load_labeled_dir(dir: &Path, labels_csv: &Path) -> Result<Vec<(Vec<u8>, i8)>> {
    let text = std::fs::read_to_string(labels_csv)?;
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (name, label_text) = line.split_once(',').ok_or_else(|| {
            Error::Parse(format!(
                "{}:{}: expected 'filename,label'",
                labels_csv.display(),
                lineno + 1
            ))
        })?;
        let label = match label_text.trim() {
            "0" => -1i8,
            "1" => 1i8,
            other => {
                return Err(Error::Parse(format!(
                    "{}:{}: label must be 0 or 1, got '{other}'",
                    labels_csv.display(),
                    lineno + 1
                )))
            }
        };
        let name = name.trim();
        if name.is_empty() || name.contains(['/', '\\']) || name.contains("..") {
            return Err(Error::Parse(format!(
                "{}:{}: filename must be a plain name, got '{name}'",
                labels_csv.display(),
                lineno + 1
            )));
        }
        let path = dir.join(name);
        let bytes = std::fs::read(&path).map_err(|e| {
            if e.kind() == std::io::ErrorKind::NotFound {
                Error::InvalidArgument(format!(
                    "labels reference a missing file: {}",
                    path.display()
                ))
            } else {
                Error::Io(e)
            }
        })?;
        out.push((bytes, label));
    }
    if out.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "no labeled samples found in {}",
            labels_csv.display()
        )));
    }
    Ok(out)
}
