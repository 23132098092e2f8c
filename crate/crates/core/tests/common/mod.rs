//! Reference computations for the integration tests.
//!
//! Everything here works on plain `Vec<Vec<f64>>` and uses different
//! algorithms from the library (Gauss-Jordan, power iteration, full-pivot
//! elimination), so agreement is a genuine cross-check.

#![allow(dead_code, clippy::needless_range_loop)]

use probframe::{DiscreteMeasure, Matrix};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

pub type Mat = Vec<Vec<f64>>;

pub fn eye(n: usize) -> Mat {
    (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect()
}

pub fn mul(a: &Mat, b: &Mat) -> Mat {
    let (r, k, c) = (a.len(), b.len(), b[0].len());
    (0..r).map(|i| (0..c).map(|j| (0..k).map(|t| a[i][t] * b[t][j]).sum()).collect()).collect()
}

pub fn tr(a: &Mat) -> Mat {
    (0..a[0].len()).map(|j| a.iter().map(|row| row[j]).collect()).collect()
}

pub fn minus(a: &Mat, b: &Mat) -> Mat {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(p, q)| p - q).collect()).collect()
}

pub fn mat_vec(a: &Mat, x: &[f64]) -> Vec<f64> {
    a.iter().map(|row| row.iter().zip(x).map(|(p, q)| p * q).sum()).collect()
}

pub fn max_diff(a: &Mat, b: &Matrix) -> f64 {
    let mut d: f64 = 0.0;
    for (i, row) in a.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            d = d.max((v - b[(i, j)]).abs());
        }
    }
    d
}

pub fn to_mat(m: &Matrix) -> Mat {
    m.to_rows()
}

/// Gauss-Jordan with partial pivoting; `None` when a pivot vanishes.
pub fn gj_inverse(a: &Mat) -> Option<Mat> {
    let n = a.len();
    let mut aug: Mat = a.iter().zip(eye(n)).map(|(r, e)| r.iter().copied().chain(e).collect()).collect();
    for col in 0..n {
        let p = (col..n).max_by(|&x, &y| aug[x][col].abs().total_cmp(&aug[y][col].abs()))?;
        if aug[p][col].abs() < 1e-300 {
            return None;
        }
        aug.swap(col, p);
        let piv = aug[col][col];
        for v in aug[col].iter_mut() {
            *v /= piv;
        }
        for r in 0..n {
            if r != col {
                let f = aug[r][col];
                if f != 0.0 {
                    for c in 0..2 * n {
                        aug[r][c] -= f * aug[col][c];
                    }
                }
            }
        }
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Largest eigenvalue of a symmetric positive semidefinite matrix by power iteration.
pub fn top_eig_psd(a: &Mat) -> f64 {
    let n = a.len();
    let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.37 * (i as f64 + 1.0).sin()).collect();
    let mut last = f64::NAN;
    let mut stable = 0;
    for _ in 0..200_000 {
        let y = mat_vec(a, &x);
        let ny = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        if ny == 0.0 {
            return 0.0;
        }
        x = y.iter().map(|v| v / ny).collect();
        let ax = mat_vec(a, &x);
        let rq: f64 = x.iter().zip(&ax).map(|(p, q)| p * q).sum();
        if (rq - last).abs() <= 4e-16 * rq.abs().max(1e-300) {
            stable += 1;
            if stable > 5 {
                return rq;
            }
        } else {
            stable = 0;
        }
        last = rq;
    }
    last
}

/// Operator 2-norm as √λ_max(AᵗA).
pub fn op_norm(a: &Mat) -> f64 {
    top_eig_psd(&mul(&tr(a), a)).max(0.0).sqrt()
}

/// Smallest eigenvalue of a symmetric positive definite matrix, 1 / λ_max(A⁻¹).
pub fn min_eig_pd(a: &Mat) -> f64 {
    1.0 / top_eig_psd(&gj_inverse(a).expect("positive definite"))
}

/// Rank by Gaussian elimination with full pivoting.
pub fn rank(a: &Mat, rtol: f64) -> usize {
    let mut m = a.clone();
    let (rows, cols) = (m.len(), m.first().map_or(0, |r| r.len()));
    let scale = m.iter().flatten().fold(0.0f64, |s, v| s.max(v.abs()));
    let mut r = 0;
    while r < rows.min(cols) {
        let mut best = (r, r, 0.0);
        for i in r..rows {
            for j in r..cols {
                if m[i][j].abs() > best.2 {
                    best = (i, j, m[i][j].abs());
                }
            }
        }
        if best.2 <= rtol * scale.max(1e-300) {
            break;
        }
        m.swap(r, best.0);
        for row in m.iter_mut() {
            row.swap(r, best.1);
        }
        for i in r + 1..rows {
            let f = m[i][r] / m[r][r];
            for j in r..cols {
                m[i][j] -= f * m[r][j];
            }
        }
        r += 1;
    }
    r
}

/// S = Σ wᵢ xᵢxᵢᵗ.
pub fn frame_op(m: &DiscreteMeasure) -> Mat {
    let n = m.dim();
    let mut s = vec![vec![0.0; n]; n];
    for (x, w) in m.iter() {
        for i in 0..n {
            for j in 0..n {
                s[i][j] += w * x[i] * x[j];
            }
        }
    }
    s
}

/// Σ π(x, y) x yᵗ from a plan.
pub fn mixed_op(source: &[Vec<f64>], target: &[Vec<f64>], plan: &Matrix) -> Mat {
    let n = source[0].len();
    let mut m = vec![vec![0.0; n]; n];
    for (i, x) in source.iter().enumerate() {
        for (j, y) in target.iter().enumerate() {
            let p = plan[(i, j)];
            if p != 0.0 {
                for r in 0..n {
                    for c in 0..n {
                        m[r][c] += p * x[r] * y[c];
                    }
                }
            }
        }
    }
    m
}

pub fn gaussian_vec(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(rng)).collect()
}

pub fn gaussian_mat(rng: &mut impl Rng, n: usize) -> Mat {
    (0..n).map(|_| gaussian_vec(rng, n)).collect()
}

pub fn random_weights(rng: &mut impl Rng, count: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..count).map(|_| rng.random_range(0.2..1.0)).collect();
    let total: f64 = raw.iter().sum();
    raw.iter().map(|w| w / total).collect()
}

/// Gaussian atoms with random weights, redrawn until B/A ≤ `max_cond`.
pub fn random_frame(rng: &mut impl Rng, n: usize, count: usize, max_cond: f64) -> DiscreteMeasure {
    loop {
        let atoms: Vec<Vec<f64>> = (0..count).map(|_| gaussian_vec(rng, n)).collect();
        let m = DiscreteMeasure::new(atoms, random_weights(rng, count)).expect("valid measure");
        let s = frame_op(&m);
        let hi = top_eig_psd(&s);
        if gj_inverse(&s).is_some() && hi / min_eig_pd(&s) <= max_cond {
            return m;
        }
    }
}

/// I − r·G/‖G‖ for a random G, so that ‖A − I‖ = r.
pub fn near_identity(rng: &mut impl Rng, n: usize, r: f64) -> Mat {
    let g = gaussian_mat(rng, n);
    let s = r / op_norm(&g);
    minus(&eye(n), &g.iter().map(|row| row.iter().map(|v| v * s).collect()).collect())
}

pub fn to_matrix(a: &Mat) -> Matrix {
    Matrix::from_rows(a.clone()).expect("rectangular")
}
