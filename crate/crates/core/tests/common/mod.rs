//! Independent reference implementations used as test oracles. None of these
//! call into the code paths they check.

#![allow(dead_code, clippy::needless_range_loop)]

use faer::Mat;
use rand::Rng;
use subspace_lrr::hypergraph::{Hyperedge, Hypergraph};

/// `Σ_e w(e) Σ_{i<j ∈ e} ‖z_i − z_j‖²` over the columns of `z`.
pub fn brute_force_hyperedge_sum(h: &Hypergraph, z: &Mat<f64>) -> f64 {
    let mut total = 0.0;
    for e in h.edges() {
        let v = e.vertices();
        let mut pairs = 0.0;
        for a in 0..v.len() {
            for b in (a + 1)..v.len() {
                pairs += (0..z.nrows())
                    .map(|r| (z[(r, v[a])] - z[(r, v[b])]).powi(2))
                    .sum::<f64>();
            }
        }
        total += e.weight() * pairs;
    }
    total
}

/// `Σ_ij L_ij ⟨z_i, z_j⟩` by explicit summation.
pub fn brute_force_trace(l: &Mat<f64>, z: &Mat<f64>) -> f64 {
    let n = l.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            let dot: f64 = (0..z.nrows()).map(|r| z[(r, i)] * z[(r, j)]).sum();
            acc += l[(i, j)] * dot;
        }
    }
    acc
}

pub fn random_hypergraph(rng: &mut impl Rng, n: usize, edges: usize) -> Hypergraph {
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for _ in 0..edges {
        let size = rng.random_range(2..=n);
        let mut verts: Vec<usize> = (0..n).collect();
        for i in 0..size {
            let j = rng.random_range(i..n);
            verts.swap(i, j);
        }
        verts.truncate(size);
        verts.sort_unstable();
        if seen.insert(verts.clone()) {
            out.push(Hyperedge::new(verts, rng.random_range(0.01..5.0)).unwrap());
        }
    }
    Hypergraph::new(n, out).unwrap()
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> Mat<f64> {
    Mat::from_fn(rows, cols, |_, _| rng.random_range(-1.0..1.0))
}

/// Smallest eigenvalue of a symmetric matrix by Jacobi rotations.
pub fn jacobi_min_eigenvalue(a: &Mat<f64>) -> f64 {
    let n = a.nrows();
    let mut m: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| a[(i, j)]).collect()).collect();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i][j] * m[i][j])
            .sum();
        if off < 1e-24 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if m[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[k][p], m[k][q]);
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[p][k], m[q][k]);
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
            }
        }
    }
    (0..n).map(|i| m[i][i]).fold(f64::INFINITY, f64::min)
}

/// Minimum total cost over all `k!` assignments.
pub fn exhaustive_assignment(cost: &[Vec<f64>]) -> f64 {
    fn go(cost: &[Vec<f64>], row: usize, used: &mut Vec<bool>, acc: f64, best: &mut f64) {
        if row == cost.len() {
            *best = best.min(acc);
            return;
        }
        for c in 0..cost.len() {
            if !used[c] {
                used[c] = true;
                go(cost, row + 1, used, acc + cost[row][c], best);
                used[c] = false;
            }
        }
    }
    let mut best = f64::INFINITY;
    go(cost, 0, &mut vec![false; cost.len()], 0.0, &mut best);
    if cost.is_empty() {
        0.0
    } else {
        best
    }
}

/// Best matching accuracy by trying every injective relabeling of predicted labels.
pub fn exhaustive_accuracy(pred: &[usize], truth: &[usize]) -> f64 {
    let k = pred.iter().chain(truth).max().map_or(0, |m| m + 1);
    let mut counts = vec![vec![0.0; k]; k];
    for (&p, &t) in pred.iter().zip(truth) {
        counts[p][t] += 1.0;
    }
    let neg: Vec<Vec<f64>> = counts.iter().map(|r| r.iter().map(|c| -c).collect()).collect();
    -exhaustive_assignment(&neg) / pred.len() as f64
}

pub fn frob_diff(a: &Mat<f64>, b: &Mat<f64>) -> f64 {
    let mut acc = 0.0;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            acc += (a[(i, j)] - b[(i, j)]).powi(2);
        }
    }
    acc.sqrt()
}

/// `τ‖X‖_* + ½‖X − A‖²_F`, the objective whose minimizer is SVT.
pub fn svt_objective(x: &Mat<f64>, a: &Mat<f64>, tau: f64) -> f64 {
    let nuclear: f64 = x.singular_values().expect("svd").iter().sum();
    tau * nuclear + 0.5 * frob_diff(x, a).powi(2)
}
