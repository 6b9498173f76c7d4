//! Locality structures over the observations.
//!
//! The ε-ball hypergraph gives every point a neighbourhood whose size follows the
//! local density, and weights each hyperedge by the inverse spread of its members.
//! The order-`P` adjacency tensor of such a hypergraph is never materialized: the
//! solver only needs the quadratic form `Σ_e a(e) Σ_{i<j ∈ e} ‖z_i − z_j‖²`, which
//! is realized by the clique-expansion matrix held in [`LocalityOperator`]. The kNN
//! graph and kNN hypergraph Laplacians used by the baseline methods reduce to the
//! same operator type.

use std::collections::HashSet;

use faer::{Mat, MatRef};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

/// Lower clamp on a hyperedge's pairwise squared-distance sum.
pub const DELTA_FLOOR: f64 = 1e-12;

/// Column-per-observation data matrix (`M × N`).
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationMatrix {
    data: Mat<f64>,
}

impl ObservationMatrix {
    pub fn new(data: Mat<f64>) -> Result<Self> {
        if !linalg::all_finite(data.as_ref()) {
            return Err(Error::InvalidInput(
                "observation matrix contains non-finite entries".into(),
            ));
        }
        Ok(Self { data })
    }

    /// Builds the matrix from points given one per inner vector.
    pub fn from_points(points: &[Vec<f64>]) -> Result<Self> {
        let m = points.first().map_or(0, Vec::len);
        if let Some((i, p)) = points.iter().enumerate().find(|(_, p)| p.len() != m) {
            return Err(Error::InvalidInput(format!(
                "point {i} has dimension {}, expected {m}",
                p.len()
            )));
        }
        Self::new(Mat::from_fn(m, points.len(), |i, j| points[j][i]))
    }

    /// Ambient dimension `M`.
    pub fn m(&self) -> usize {
        self.data.nrows()
    }

    /// Number of observations `N`.
    pub fn n(&self) -> usize {
        self.data.ncols()
    }

    pub fn data(&self) -> MatRef<'_, f64> {
        self.data.as_ref()
    }

    pub fn into_inner(self) -> Mat<f64> {
        self.data
    }

    pub fn point(&self, j: usize) -> Vec<f64> {
        (0..self.m()).map(|i| self.data[(i, j)]).collect()
    }

    pub fn sq_dist(&self, a: usize, b: usize) -> f64 {
        (0..self.m())
            .map(|i| {
                let d = self.data[(i, a)] - self.data[(i, b)];
                d * d
            })
            .sum()
    }

    /// Dense `N × N` Euclidean distances, computed pair by pair.
    pub fn pairwise_distances(&self) -> Vec<f64> {
        let n = self.n();
        let mut out = vec![0.0; n * n];
        for a in 0..n {
            for b in (a + 1)..n {
                let d = self.sq_dist(a, b).sqrt();
                out[a * n + b] = d;
                out[b * n + a] = d;
            }
        }
        out
    }

    fn require_locality_size(&self) -> Result<()> {
        if self.n() < 2 {
            return Err(Error::InvalidInput(format!(
                "need at least 2 observations to build locality structure, got {}",
                self.n()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Hyperedge {
    vertices: Vec<usize>,
    weight: f64,
}

impl Hyperedge {
    pub fn new(vertices: Vec<usize>, weight: f64) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InvalidEdge(format!(
                "hyperedge needs at least 2 vertices, got {}",
                vertices.len()
            )));
        }
        if vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidEdge(
                "hyperedge vertices must be strictly increasing".into(),
            ));
        }
        if !(weight.is_finite() && weight > 0.0) {
            return Err(Error::InvalidEdge(format!(
                "hyperedge weight must be positive and finite, got {weight}"
            )));
        }
        Ok(Self { vertices, weight })
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn cardinality(&self) -> usize {
        self.vertices.len()
    }
}

/// Undirected weighted hypergraph over vertices `0..n`, with no repeated vertex sets.
#[derive(Debug, Clone, PartialEq)]
pub struct Hypergraph {
    n: usize,
    edges: Vec<Hyperedge>,
    p: usize,
}

impl Hypergraph {
    pub fn new(n: usize, edges: Vec<Hyperedge>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(edges.len());
        for e in &edges {
            if let Some(&v) = e.vertices.last() {
                if v >= n {
                    return Err(Error::InvalidEdge(format!(
                        "vertex {v} out of range for {n} vertices"
                    )));
                }
            }
            if !seen.insert(e.vertices.as_slice()) {
                return Err(Error::InvalidEdge(format!(
                    "duplicate hyperedge {:?}",
                    e.vertices
                )));
            }
        }
        let p = edges.iter().map(Hyperedge::cardinality).max().unwrap_or(0);
        Ok(Self { n, edges, p })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Hyperedge] {
        &self.edges
    }

    /// Maximum cardinality `P`; zero for an empty hypergraph.
    pub fn max_cardinality(&self) -> usize {
        self.p
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

pub fn max_cardinality(h: &Hypergraph) -> usize {
    h.max_cardinality()
}

/// How the ε-ball radius is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", content = "value", rename_all = "kebab-case")]
pub enum EpsMode {
    /// Fixed Euclidean radius.
    Absolute(f64),
    /// The given quantile of all pairwise distances, `q ∈ (0, 1)`.
    Quantile(f64),
}

impl Default for EpsMode {
    fn default() -> Self {
        EpsMode::Absolute(0.05)
    }
}

impl EpsMode {
    pub fn validate(self) -> Result<()> {
        match self {
            EpsMode::Absolute(eps) if !(eps.is_finite() && eps > 0.0) => Err(
                Error::InvalidParameter(format!("eps must be positive, got {eps}")),
            ),
            EpsMode::Quantile(q) if !(q > 0.0 && q < 1.0) => Err(Error::InvalidParameter(
                format!("distance quantile must lie in (0, 1), got {q}"),
            )),
            _ => Ok(()),
        }
    }
}

/// Linear-interpolation quantile of the strictly upper-triangular distances.
fn distance_quantile(dist: &[f64], n: usize, q: f64) -> f64 {
    let mut d: Vec<f64> = (0..n)
        .flat_map(|a| ((a + 1)..n).map(move |b| (a, b)))
        .map(|(a, b)| dist[a * n + b])
        .collect();
    d.sort_by(f64::total_cmp);
    let pos = q * (d.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    d[lo] + (d[hi] - d[lo]) * frac
}

/// Resolves the radius actually used for `y` under `mode`.
pub fn resolve_eps(y: &ObservationMatrix, mode: EpsMode) -> Result<f64> {
    mode.validate()?;
    y.require_locality_size()?;
    Ok(match mode {
        EpsMode::Absolute(eps) => eps,
        EpsMode::Quantile(q) => distance_quantile(&y.pairwise_distances(), y.n(), q),
    })
}

/// One candidate hyperedge per vertex: the vertex together with every point strictly
/// inside its ε-ball. Singletons are dropped and repeated vertex sets kept once, in
/// order of first appearance.
pub fn epsilon_ball_hyperedges(y: &ObservationMatrix, mode: EpsMode) -> Result<Hypergraph> {
    mode.validate()?;
    y.require_locality_size()?;
    let n = y.n();
    let dist = y.pairwise_distances();
    let eps = match mode {
        EpsMode::Absolute(eps) => eps,
        EpsMode::Quantile(q) => distance_quantile(&dist, n, q),
    };

    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut edges = Vec::new();
    for i in 0..n {
        let members: Vec<usize> = (0..n)
            .filter(|&j| j == i || dist[i * n + j] < eps)
            .collect();
        if members.len() < 2 || seen.contains(&members) {
            continue;
        }
        let weight = hyperedge_weight(&members, y)?;
        seen.insert(members.clone());
        edges.push(Hyperedge::new(members, weight)?);
    }
    Hypergraph::new(n, edges)
}

/// Density weight `a(e) = (1/c) · (Σ_{i<j ∈ e} ‖y_i − y_j‖²)⁻¹`, with the sum
/// clamped below at [`DELTA_FLOOR`].
pub fn hyperedge_weight(vertices: &[usize], y: &ObservationMatrix) -> Result<f64> {
    let c = vertices.len();
    if c < 2 {
        return Err(Error::InvalidEdge(format!(
            "hyperedge needs at least 2 vertices, got {c}"
        )));
    }
    if let Some(&v) = vertices.iter().find(|&&v| v >= y.n()) {
        return Err(Error::InvalidEdge(format!(
            "vertex {v} out of range for {} observations",
            y.n()
        )));
    }
    let mut sum = 0.0;
    for (k, &a) in vertices.iter().enumerate() {
        for &b in &vertices[k + 1..] {
            sum += y.sq_dist(a, b);
        }
    }
    Ok(1.0 / (c as f64 * sum.max(DELTA_FLOOR)))
}

/// Symmetric PSD `N × N` matrix whose quadratic form `tr(Z L Zᵀ)` is the locality
/// penalty on the columns of `Z`.
#[derive(Debug, Clone)]
pub struct LocalityOperator {
    matrix: Mat<f64>,
    spectral_norm: f64,
    // nonzeros of each column, for `Z · L` products
    columns: Vec<Vec<(usize, f64)>>,
}

impl LocalityOperator {
    /// Wraps a symmetric matrix. Only symmetry is checked here; the Laplacian
    /// properties are guaranteed by the constructors in this module.
    pub fn from_matrix(matrix: Mat<f64>) -> Result<Self> {
        let n = matrix.nrows();
        if matrix.ncols() != n {
            return Err(Error::InvalidInput(format!(
                "locality operator must be square, got {}x{}",
                n,
                matrix.ncols()
            )));
        }
        if !linalg::all_finite(matrix.as_ref()) {
            return Err(Error::InvalidInput(
                "locality operator has non-finite entries".into(),
            ));
        }
        let scale = linalg::max_abs(matrix.as_ref()).max(f64::MIN_POSITIVE);
        for j in 0..n {
            for i in (j + 1)..n {
                if (matrix[(i, j)] - matrix[(j, i)]).abs() > 1e-12 * scale {
                    return Err(Error::InvalidInput(format!(
                        "locality operator is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        let columns = (0..n)
            .map(|j| {
                (0..n)
                    .filter_map(|i| {
                        let v = matrix[(i, j)];
                        (v != 0.0).then_some((i, v))
                    })
                    .collect()
            })
            .collect();
        let spectral_norm = linalg::spectral_norm(matrix.as_ref());
        Ok(Self {
            matrix,
            spectral_norm,
            columns,
        })
    }

    /// The zero operator: no locality regularization.
    pub fn zeros(n: usize) -> Self {
        Self {
            matrix: Mat::zeros(n, n),
            spectral_norm: 0.0,
            columns: vec![Vec::new(); n],
        }
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> MatRef<'_, f64> {
        self.matrix.as_ref()
    }

    /// Cached `‖L‖₂`.
    pub fn spectral_norm(&self) -> f64 {
        self.spectral_norm
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    /// `Z · L`, exploiting the sparsity of `L`.
    pub fn right_multiply(&self, z: MatRef<'_, f64>) -> Mat<f64> {
        assert_eq!(z.ncols(), self.n(), "dimension mismatch in Z·L");
        let rows = z.nrows();
        let mut out = Mat::<f64>::zeros(rows, self.n());
        for (j, col) in self.columns.iter().enumerate() {
            let mut dst = out.col_mut(j);
            for &(i, v) in col {
                let src = z.col(i);
                for r in 0..rows {
                    dst[r] += v * src[r];
                }
            }
        }
        out
    }

    /// `tr(Z L Zᵀ)`.
    pub fn quadratic_form(&self, z: MatRef<'_, f64>) -> f64 {
        let zl = self.right_multiply(z);
        let mut acc = 0.0;
        for j in 0..z.ncols() {
            for i in 0..z.nrows() {
                acc += zl[(i, j)] * z[(i, j)];
            }
        }
        acc
    }
}

/// Clique expansion `Σ_e a(e) · (|e| · diag(𝟙_e) − 𝟙_e 𝟙_eᵀ)`.
pub fn locality_operator_from_hypergraph(h: &Hypergraph) -> Result<LocalityOperator> {
    if h.n() < 2 {
        return Err(Error::InvalidInput(format!(
            "hypergraph needs at least 2 vertices, got {}",
            h.n()
        )));
    }
    let n = h.n();
    let mut l = Mat::<f64>::zeros(n, n);
    for e in h.edges() {
        let c = e.cardinality() as f64;
        let w = e.weight();
        for &a in e.vertices() {
            for &b in e.vertices() {
                l[(a, b)] -= w;
            }
            l[(a, a)] += w * c;
        }
    }
    LocalityOperator::from_matrix(l)
}

/// The `k` nearest neighbours of every point, ties broken by lower index.
fn knn_sets(y: &ObservationMatrix, k: usize) -> Result<Vec<Vec<usize>>> {
    y.require_locality_size()?;
    let n = y.n();
    if k == 0 || k > n - 1 {
        return Err(Error::InvalidParameter(format!(
            "k must lie in 1..={}, got {k}",
            n - 1
        )));
    }
    let dist = y.pairwise_distances();
    Ok((0..n)
        .map(|i| {
            let mut others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
            others.sort_by(|&a, &b| dist[i * n + a].total_cmp(&dist[i * n + b]).then(a.cmp(&b)));
            others.truncate(k);
            others
        })
        .collect())
}

/// `L = D − W` for the OR-symmetrized binary kNN graph.
pub fn knn_graph_laplacian(y: &ObservationMatrix, k: usize) -> Result<LocalityOperator> {
    let nn = knn_sets(y, k)?;
    let n = y.n();
    let mut w = vec![false; n * n];
    for (i, set) in nn.iter().enumerate() {
        for &j in set {
            w[i * n + j] = true;
            w[j * n + i] = true;
        }
    }
    let l = Mat::from_fn(n, n, |i, j| {
        if i == j {
            (0..n).filter(|&t| w[i * n + t]).count() as f64
        } else if w[i * n + j] {
            -1.0
        } else {
            0.0
        }
    });
    LocalityOperator::from_matrix(l)
}

/// `Lʰ = D_v − H W_ε D_ε⁻¹ Hᵀ` with one unit-weight hyperedge `{i} ∪ kNN(i)` per vertex.
pub fn knn_hypergraph_laplacian(y: &ObservationMatrix, k: usize) -> Result<LocalityOperator> {
    let nn = knn_sets(y, k)?;
    let n = y.n();
    let mut l = Mat::<f64>::zeros(n, n);
    for (i, set) in nn.iter().enumerate() {
        let mut edge = set.clone();
        edge.push(i);
        let inv_size = 1.0 / edge.len() as f64;
        for &a in &edge {
            // vertex degree d(v) = Σ_e w(e) h(v, e)
            l[(a, a)] += 1.0;
            for &b in &edge {
                l[(a, b)] -= inv_size;
            }
        }
    }
    LocalityOperator::from_matrix(l)
}
