//! Normalized-cut spectral clustering of the learned coefficients, with seeded
//! k-means as its back end and as a standalone baseline.

use faer::{Mat, MatRef};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

/// Added to vanishing degrees before `D^{-1/2}` is formed.
pub const DEGREE_FLOOR: f64 = 1e-12;

pub const KMEANS_RESTARTS: usize = 10;
pub const KMEANS_MAX_ITER: usize = 300;
pub const KMEANS_REL_TOL: f64 = 1e-6;

/// Cluster assignments in `0..k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Labels {
    assignments: Vec<usize>,
    k: usize,
}

impl Labels {
    pub fn new(assignments: Vec<usize>, k: usize) -> Result<Self> {
        if let Some(&bad) = assignments.iter().find(|&&a| a >= k) {
            return Err(Error::InvalidInput(format!(
                "label {bad} out of range for {k} clusters"
            )));
        }
        Ok(Self { assignments, k })
    }

    /// Infers `k` as one more than the largest label.
    pub fn from_assignments(assignments: Vec<usize>) -> Self {
        let k = assignments.iter().max().map_or(0, |m| m + 1);
        Self { assignments, k }
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.assignments
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.assignments
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }
}

/// Symmetric, entrywise nonnegative graph weights.
#[derive(Debug, Clone)]
pub struct AffinityMatrix {
    matrix: Mat<f64>,
    zero_diagonal: bool,
}

impl AffinityMatrix {
    pub fn new(matrix: Mat<f64>) -> Result<Self> {
        let n = matrix.nrows();
        if matrix.ncols() != n {
            return Err(Error::InvalidInput("affinity matrix must be square".into()));
        }
        let scale = linalg::max_abs(matrix.as_ref()).max(f64::MIN_POSITIVE);
        for j in 0..n {
            for i in 0..n {
                let v = matrix[(i, j)];
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::InvalidInput(format!(
                        "affinity entry ({i}, {j}) = {v} is not a finite nonnegative number"
                    )));
                }
                if (v - matrix[(j, i)]).abs() > 1e-12 * scale {
                    return Err(Error::InvalidInput(format!(
                        "affinity matrix is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        let zero_diagonal = (0..n).all(|i| matrix[(i, i)] == 0.0);
        Ok(Self {
            matrix,
            zero_diagonal,
        })
    }

    pub fn matrix(&self) -> MatRef<'_, f64> {
        self.matrix.as_ref()
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn has_zero_diagonal(&self) -> bool {
        self.zero_diagonal
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(Mat::from_fn(self.n(), self.n(), |i, j| factor * self.matrix[(i, j)]))
    }
}

/// `W = (|Z| + |Zᵀ|) / 2` with the diagonal zeroed.
pub fn affinity_from_coefficients(z: MatRef<'_, f64>) -> Result<AffinityMatrix> {
    let n = z.nrows();
    if z.ncols() != n {
        return Err(Error::InvalidInput(
            "coefficient matrix must be square".into(),
        ));
    }
    if !linalg::all_finite(z) {
        return Err(Error::InvalidInput(
            "coefficient matrix has non-finite entries".into(),
        ));
    }
    AffinityMatrix::new(Mat::from_fn(n, n, |i, j| {
        if i == j {
            0.0
        } else {
            0.5 * (z[(i, j)].abs() + z[(j, i)].abs())
        }
    }))
}

/// Spectral embedding on the `k` smallest eigenvectors of the symmetric normalized
/// Laplacian, rows scaled to unit length, clustered with seeded k-means.
pub fn ncut_spectral(w: &AffinityMatrix, k: usize, seed: u64) -> Result<Labels> {
    let n = w.n();
    if k < 2 {
        return Err(Error::InvalidParameter(format!("ncut needs k >= 2, got {k}")));
    }
    if k > n {
        return Err(Error::InvalidParameter(format!(
            "k = {k} exceeds the number of points {n}"
        )));
    }
    let a = w.matrix();
    let inv_sqrt_deg: Vec<f64> = (0..n)
        .map(|i| {
            let d: f64 = (0..n).map(|j| a[(i, j)]).sum();
            let d = if d < DEGREE_FLOOR { d + DEGREE_FLOOR } else { d };
            1.0 / d.sqrt()
        })
        .collect();
    let lsym = Mat::from_fn(n, n, |i, j| {
        let off = inv_sqrt_deg[i] * a[(i, j)] * inv_sqrt_deg[j];
        if i == j {
            1.0 - off
        } else {
            -off
        }
    });
    let (_, vectors) = linalg::sym_eigen(lsym.as_ref())?;
    let mut embedding = Mat::from_fn(n, k, |i, c| vectors[(i, c)]);
    for i in 0..n {
        let norm = (0..k).map(|c| embedding[(i, c)].powi(2)).sum::<f64>().sqrt();
        if norm > 0.0 {
            for c in 0..k {
                embedding[(i, c)] /= norm;
            }
        }
    }
    kmeans(embedding.as_ref(), k, seed)
}

fn sq_dist_rows(x: MatRef<'_, f64>, i: usize, c: &[f64]) -> f64 {
    c.iter()
        .enumerate()
        .map(|(d, &cv)| {
            let t = x[(i, d)] - cv;
            t * t
        })
        .sum()
}

struct Run {
    labels: Vec<usize>,
    inertia: f64,
}

fn plus_plus_init(x: MatRef<'_, f64>, k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let n = x.nrows();
    let row = |i: usize| (0..x.ncols()).map(|d| x[(i, d)]).collect::<Vec<f64>>();
    let mut centers = vec![row(rng.random_range(0..n))];
    let mut closest: Vec<f64> = (0..n).map(|i| sq_dist_rows(x, i, &centers[0])).collect();
    while centers.len() < k {
        let total: f64 = closest.iter().sum();
        let pick = if total > 0.0 {
            let mut target = rng.random::<f64>() * total;
            let mut chosen = n - 1;
            for (i, &d) in closest.iter().enumerate() {
                if d <= 0.0 {
                    continue;
                }
                if target < d {
                    chosen = i;
                    break;
                }
                target -= d;
            }
            // guard against rounding landing on an already-covered point
            if closest[chosen] <= 0.0 {
                chosen = closest
                    .iter()
                    .enumerate()
                    .rev()
                    .find(|(_, &d)| d > 0.0)
                    .map_or(chosen, |(i, _)| i);
            }
            chosen
        } else {
            rng.random_range(0..n)
        };
        let c = row(pick);
        for (i, d) in closest.iter_mut().enumerate() {
            *d = d.min(sq_dist_rows(x, i, &c));
        }
        centers.push(c);
    }
    centers
}

fn lloyd(x: MatRef<'_, f64>, mut centers: Vec<Vec<f64>>) -> Run {
    let (n, dim) = (x.nrows(), x.ncols());
    let k = centers.len();
    let mut labels = vec![0usize; n];
    let mut prev = f64::INFINITY;
    let mut inertia = f64::INFINITY;
    for _ in 0..KMEANS_MAX_ITER {
        let mut dists = vec![0.0; n];
        for i in 0..n {
            let (best, d) = centers
                .iter()
                .enumerate()
                .map(|(c, ctr)| (c, sq_dist_rows(x, i, ctr)))
                .fold((0, f64::INFINITY), |acc, cur| if cur.1 < acc.1 { cur } else { acc });
            labels[i] = best;
            dists[i] = d;
        }

        let mut counts = vec![0usize; k];
        labels.iter().for_each(|&l| counts[l] += 1);
        // empty clusters take over the point farthest from its current center
        for c in 0..k {
            if counts[c] == 0 {
                let far = (0..n)
                    .filter(|&i| counts[labels[i]] > 1)
                    .max_by(|&a, &b| dists[a].total_cmp(&dists[b]).then(b.cmp(&a)));
                if let Some(i) = far {
                    counts[labels[i]] -= 1;
                    labels[i] = c;
                    counts[c] = 1;
                    dists[i] = 0.0;
                }
            }
        }

        let mut sums = vec![vec![0.0; dim]; k];
        for i in 0..n {
            for d in 0..dim {
                sums[labels[i]][d] += x[(i, d)];
            }
        }
        for c in 0..k {
            if counts[c] > 0 {
                centers[c] = sums[c].iter().map(|s| s / counts[c] as f64).collect();
            }
        }
        inertia = (0..n).map(|i| sq_dist_rows(x, i, &centers[labels[i]])).sum();
        if prev - inertia <= KMEANS_REL_TOL * prev {
            break;
        }
        prev = inertia;
    }
    Run { labels, inertia }
}

/// Lloyd's k-means on the rows of `x`: plus-plus seeding, best of
/// [`KMEANS_RESTARTS`] restarts with seeds `seed + r`.
pub fn kmeans(x: MatRef<'_, f64>, k: usize, seed: u64) -> Result<Labels> {
    let n = x.nrows();
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!(
            "k must lie in 1..={n}, got {k}"
        )));
    }
    if !linalg::all_finite(x) {
        return Err(Error::InvalidInput("k-means input has non-finite entries".into()));
    }
    let mut best: Option<Run> = None;
    for r in 0..KMEANS_RESTARTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(r as u64));
        let run = lloyd(x, plus_plus_init(x, k, &mut rng));
        if best.as_ref().is_none_or(|b| run.inertia < b.inertia) {
            best = Some(run);
        }
    }
    Labels::new(best.expect("at least one restart").labels, k)
}
