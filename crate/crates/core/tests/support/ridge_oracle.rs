//! Reference computations for the explainer's regression and the baseline
//! classifier's objective: dense normal equations solved by Gauss-Jordan
//! elimination, and central finite differences.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use risus_core::classifier::SoftmaxObjective;

/// Solves the full weighted ridge system `[w; b]`, intercept unpenalized.
pub fn normal_equations(masks: &[Vec<bool>], y: &[f64], weights: &[f64], lambda: f64) -> Vec<f64> {
    let d = masks[0].len();
    let m = d + 1;
    let mut a = vec![vec![0.0; m + 1]; m];
    for ((mask, &yi), &p) in masks.iter().zip(y).zip(weights) {
        let mut x: Vec<f64> = mask.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
        x.push(1.0);
        for r in 0..m {
            for c in 0..m {
                a[r][c] += p * x[r] * x[c];
            }
            a[r][m] += p * x[r] * yi;
        }
    }
    for (r, row) in a.iter_mut().enumerate().take(d) {
        row[r] += lambda;
    }
    for col in 0..m {
        let pivot = (col..m).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, pivot);
        let p = a[col][col];
        for v in a[col].iter_mut() {
            *v /= p;
        }
        let pivot_row = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != col {
                let f = row[col];
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
            }
        }
    }
    a.iter().map(|row| row[m]).collect()
}

/// Random masks (each row keeps at least one feature, not all rows equal),
/// targets and positive sample weights.
pub fn random_design(d: usize, n: usize, seed: u64) -> (Vec<Vec<bool>>, Vec<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let masks: Vec<Vec<bool>> = (0..n)
        .map(|_| loop {
            let m: Vec<bool> = (0..d).map(|_| rng.gen_bool(0.6)).collect();
            if m.iter().any(|&b| b) {
                break m;
            }
        })
        .collect();
    let y = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
    let weights = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
    (masks, y, weights)
}

/// Sparse random softmax problem with every class present.
pub fn random_objective(seed: u64) -> (SoftmaxObjective, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = 12;
    let n = 30;
    let features = (0..n)
        .map(|_| {
            let mut row = Vec::new();
            for j in 0..dim {
                if rng.gen_bool(0.3) {
                    row.push((j, rng.gen_range(0.5..3.0)));
                }
            }
            row
        })
        .collect();
    let labels = (0..n).map(|i| i % 5).collect();
    let obj = SoftmaxObjective {
        features,
        labels,
        dim,
        l2: 0.05,
    };
    let params = (0..obj.parameter_count()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    (obj, params)
}

/// Largest relative gap between the analytic gradient and central
/// differences with step `h`.
pub fn gradient_gap(obj: &SoftmaxObjective, params: &[f64], h: f64) -> f64 {
    let g = obj.gradient(params);
    (0..params.len())
        .map(|i| {
            let (mut up, mut down) = (params.to_vec(), params.to_vec());
            up[i] += h;
            down[i] -= h;
            let fd = (obj.loss(&up) - obj.loss(&down)) / (2.0 * h);
            (g[i] - fd).abs() / g[i].abs().max(fd.abs()).max(1e-8)
        })
        .fold(0.0, f64::max)
}
