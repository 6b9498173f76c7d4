//! Synthetic datasets with ground truth, and the delimited text format used to
//! exchange observation matrices.
//!
//! File layout (UTF-8, comma separated, LF line endings):
//!
//! ```text
//! dim_0,dim_1,...,dim_{M-1}[,label]
//! <M floats>[,<label>]
//! ...
//! ```
//!
//! One observation per line. Floats are written in shortest round-trip form, so
//! `load(save(d))` reproduces every bit.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use faer::Mat;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::hypergraph::ObservationMatrix;

pub const LABEL_COLUMN: &str = "label";

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    pub observations: ObservationMatrix,
    pub labels: Option<Vec<usize>>,
    pub name: String,
    pub generator_params: BTreeMap<String, Value>,
}

impl LabeledDataset {
    pub fn new(
        observations: ObservationMatrix,
        labels: Option<Vec<usize>>,
        name: impl Into<String>,
    ) -> Result<Self> {
        if let Some(l) = &labels {
            if l.len() != observations.n() {
                return Err(Error::InvalidInput(format!(
                    "{} labels for {} observations",
                    l.len(),
                    observations.n()
                )));
            }
        }
        Ok(Self {
            observations,
            labels,
            name: name.into(),
            generator_params: BTreeMap::new(),
        })
    }

    /// Number of distinct clusters in the ground truth, if present.
    pub fn cluster_count(&self) -> Option<usize> {
        self.labels
            .as_ref()
            .map(|l| l.iter().max().map_or(0, |m| m + 1))
    }
}

fn noise(sigma: f64) -> Result<Normal<f64>> {
    Normal::new(0.0, sigma).map_err(|e| Error::InvalidParameter(format!("noise sigma: {e}")))
}

fn check_noise(sigma: f64) -> Result<()> {
    if !(sigma.is_finite() && sigma >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "noise sigma must be finite and >= 0, got {sigma}"
        )));
    }
    Ok(())
}

fn from_points(points: Vec<[f64; 2]>) -> Result<ObservationMatrix> {
    ObservationMatrix::new(Mat::from_fn(2, points.len(), |i, j| points[j][i]))
}

/// Two interleaved unit half-circles. Angles are evenly spaced on `[0, π]`; only
/// the Gaussian noise draws from the seeded generator.
pub fn two_moons(n_per_moon: usize, noise_sigma: f64, seed: u64) -> Result<LabeledDataset> {
    if n_per_moon < 2 {
        return Err(Error::InvalidParameter(format!(
            "n_per_moon must be >= 2, got {n_per_moon}"
        )));
    }
    check_noise(noise_sigma)?;
    let dist = noise(noise_sigma)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(2 * n_per_moon);
    for moon in 0..2 {
        for t in 0..n_per_moon {
            let theta = PI * t as f64 / (n_per_moon - 1) as f64;
            let (x, y) = if moon == 0 {
                (theta.cos(), theta.sin())
            } else {
                (1.0 - theta.cos(), 0.5 - theta.sin())
            };
            points.push([x + dist.sample(&mut rng), y + dist.sample(&mut rng)]);
        }
    }
    let labels = (0..2).flat_map(|m| std::iter::repeat_n(m, n_per_moon)).collect();
    let mut d = LabeledDataset::new(from_points(points)?, Some(labels), "two-moons")?;
    d.generator_params = BTreeMap::from([
        ("n_per_moon".into(), json!(n_per_moon)),
        ("noise_sigma".into(), json!(noise_sigma)),
        ("seed".into(), json!(seed)),
    ]);
    Ok(d)
}

/// Three concentric circles with evenly spaced angles on `[0, 2π)`.
pub fn three_circles(
    n_per_circle: usize,
    radii: [f64; 3],
    noise_sigma: f64,
    seed: u64,
) -> Result<LabeledDataset> {
    if n_per_circle < 3 {
        return Err(Error::InvalidParameter(format!(
            "n_per_circle must be >= 3, got {n_per_circle}"
        )));
    }
    if !(radii[0] > 0.0 && radii[0] < radii[1] && radii[1] < radii[2] && radii[2].is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "radii must be positive and strictly increasing, got {radii:?}"
        )));
    }
    check_noise(noise_sigma)?;
    let dist = noise(noise_sigma)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(3 * n_per_circle);
    for r in radii {
        for t in 0..n_per_circle {
            let theta = 2.0 * PI * t as f64 / n_per_circle as f64;
            points.push([
                r * theta.cos() + dist.sample(&mut rng),
                r * theta.sin() + dist.sample(&mut rng),
            ]);
        }
    }
    let labels = (0..3).flat_map(|c| std::iter::repeat_n(c, n_per_circle)).collect();
    let mut d = LabeledDataset::new(from_points(points)?, Some(labels), "three-circles")?;
    d.generator_params = BTreeMap::from([
        ("n_per_circle".into(), json!(n_per_circle)),
        ("radii".into(), json!(radii)),
        ("noise_sigma".into(), json!(noise_sigma)),
        ("seed".into(), json!(seed)),
    ]);
    Ok(d)
}

/// Parameters of [`union_of_subspaces`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubspaceParams {
    pub ambient_dim: usize,
    pub subspace_dim: usize,
    pub n_subspaces: usize,
    pub n_per_subspace: usize,
    /// Fraction of columns (rounded up) that receive a gross corruption.
    pub outlier_fraction: f64,
    /// Expected norm of the corruption relative to that of a clean column.
    pub outlier_scale: f64,
}

impl Default for SubspaceParams {
    fn default() -> Self {
        Self {
            ambient_dim: 10,
            subspace_dim: 2,
            n_subspaces: 3,
            n_per_subspace: 30,
            outlier_fraction: 0.01,
            outlier_scale: 1.0,
        }
    }
}

/// Points drawn from random linear subspaces (orthonormal Gaussian bases, Gaussian
/// coefficients). Corrupted columns get additive Gaussian noise with the same
/// expected norm as a clean column; their indices are recorded under `outliers`.
pub fn union_of_subspaces(params: SubspaceParams, seed: u64) -> Result<LabeledDataset> {
    let SubspaceParams {
        ambient_dim: m,
        subspace_dim: d,
        n_subspaces: k,
        n_per_subspace: per,
        outlier_fraction,
        outlier_scale,
    } = params;
    if d == 0 || d > m || k == 0 || per == 0 {
        return Err(Error::InvalidParameter(format!(
            "invalid subspace layout {params:?}"
        )));
    }
    if !(0.0..1.0).contains(&outlier_fraction) {
        return Err(Error::InvalidParameter(format!(
            "outlier fraction must lie in [0, 1), got {outlier_fraction}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gauss = || -> f64 { StandardNormal.sample(&mut rng) };
    let n = k * per;
    let mut data = Mat::<f64>::zeros(m, n);
    for s in 0..k {
        let basis = orthonormal_basis(m, d, &mut gauss);
        for p in 0..per {
            let coeffs: Vec<f64> = (0..d).map(|_| gauss()).collect();
            for i in 0..m {
                data[(i, s * per + p)] = (0..d).map(|c| basis[c][i] * coeffs[c]).sum();
            }
        }
    }
    let n_out = (outlier_fraction * n as f64).ceil() as usize;
    // spread the corrupted columns evenly over the index range
    let outliers: Vec<usize> = (0..n_out).map(|t| (2 * t + 1) * n / (2 * n_out)).collect();
    if !(outlier_scale.is_finite() && outlier_scale >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "outlier scale must be finite and >= 0, got {outlier_scale}"
        )));
    }
    let scale = outlier_scale * (d as f64 / m as f64).sqrt();
    for &col in &outliers {
        for i in 0..m {
            data[(i, col)] += scale * gauss();
        }
    }
    let labels = (0..k).flat_map(|s| std::iter::repeat_n(s, per)).collect();
    let mut ds = LabeledDataset::new(ObservationMatrix::new(data)?, Some(labels), "subspaces")?;
    ds.generator_params = BTreeMap::from([
        ("ambient_dim".into(), json!(m)),
        ("subspace_dim".into(), json!(d)),
        ("n_subspaces".into(), json!(k)),
        ("n_per_subspace".into(), json!(per)),
        ("outlier_fraction".into(), json!(outlier_fraction)),
        ("outlier_scale".into(), json!(outlier_scale)),
        ("outliers".into(), json!(outliers)),
        ("seed".into(), json!(seed)),
    ]);
    Ok(ds)
}

fn orthonormal_basis(m: usize, d: usize, gauss: &mut impl FnMut() -> f64) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(d);
    while basis.len() < d {
        let mut v: Vec<f64> = (0..m).map(|_| gauss()).collect();
        for _ in 0..2 {
            for b in &basis {
                let h: f64 = b.iter().zip(&v).map(|(x, y)| x * y).sum();
                v.iter_mut().zip(b).for_each(|(vi, bi)| *vi -= h * bi);
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-8 {
            v.iter_mut().for_each(|x| *x /= norm);
            basis.push(v);
        }
    }
    basis
}

/// Serializes to the text format described in the module docs.
pub fn to_text(d: &LabeledDataset) -> Result<String> {
    let y = &d.observations;
    if y.m() == 0 {
        return Err(Error::InvalidInput("dataset has zero dimensions".into()));
    }
    if let Some(l) = &d.labels {
        if l.len() != y.n() {
            return Err(Error::InvalidInput(format!(
                "{} labels for {} observations",
                l.len(),
                y.n()
            )));
        }
    }
    let mut out = String::new();
    let header: Vec<String> = (0..y.m()).map(|i| format!("dim_{i}")).collect();
    out.push_str(&header.join(","));
    if d.labels.is_some() {
        out.push(',');
        out.push_str(LABEL_COLUMN);
    }
    out.push('\n');
    for j in 0..y.n() {
        for i in 0..y.m() {
            if i > 0 {
                out.push(',');
            }
            write!(out, "{:?}", y.data()[(i, j)]).expect("writing to a String");
        }
        if let Some(l) = &d.labels {
            write!(out, ",{}", l[j]).expect("writing to a String");
        }
        out.push('\n');
    }
    Ok(out)
}

/// Parses the text format. Errors carry the 1-based line number.
pub fn parse_dataset(text: &str, name: &str) -> Result<LabeledDataset> {
    let mut lines = text.split('\n').enumerate().map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)));
    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "missing header".into(),
    })?;
    let fields: Vec<&str> = header.split(',').map(str::trim).collect();
    let has_label = fields.last() == Some(&LABEL_COLUMN);
    let m = fields.len() - usize::from(has_label);
    if m == 0 {
        return Err(Error::Parse {
            line: 1,
            message: "header declares no dimensions".into(),
        });
    }
    for (i, f) in fields[..m].iter().enumerate() {
        if *f != format!("dim_{i}") {
            return Err(Error::Parse {
                line: 1,
                message: format!("expected header field `dim_{i}`, found `{f}`"),
            });
        }
    }

    let mut values: Vec<f64> = Vec::new();
    let mut labels: Vec<usize> = Vec::new();
    let mut pending_blank: Option<usize> = None;
    for (line, raw) in lines {
        if raw.trim().is_empty() {
            pending_blank.get_or_insert(line);
            continue;
        }
        if let Some(blank) = pending_blank {
            return Err(Error::Parse {
                line: blank,
                message: "blank line inside data".into(),
            });
        }
        let cells: Vec<&str> = raw.split(',').map(str::trim).collect();
        if cells.len() != fields.len() {
            return Err(Error::Parse {
                line,
                message: format!("expected {} fields, found {}", fields.len(), cells.len()),
            });
        }
        for (col, cell) in cells[..m].iter().enumerate() {
            let v: f64 = cell.parse().map_err(|_| Error::Parse {
                line,
                message: format!("field {col}: `{cell}` is not a number"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    line,
                    message: format!("field {col}: non-finite value `{cell}`"),
                });
            }
            values.push(v);
        }
        if has_label {
            let cell = cells[m];
            labels.push(cell.parse().map_err(|_| Error::Parse {
                line,
                message: format!("label `{cell}` is not a nonnegative integer"),
            })?);
        }
    }
    let n = values.len() / m;
    let data = Mat::from_fn(m, n, |i, j| values[j * m + i]);
    LabeledDataset::new(
        ObservationMatrix::new(data)?,
        has_label.then_some(labels),
        name,
    )
}

pub fn save_dataset(d: &LabeledDataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = to_text(d)?;
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn load_dataset(path: impl AsRef<Path>) -> Result<LabeledDataset> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".into());
    parse_dataset(&text, &name)
}
