//! A linear bag-of-words model with known coefficients and documents on
//! which its target-class probability is a monotone function of one score.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use risus_core::classifier::{BaselineModel, CLASSES};
use risus_core::{Document, HumourStyle};

pub const VOCAB: usize = 40;
const LEVELS: [f64; 8] = [-3.5, -2.5, -1.5, -0.5, 1.0, 2.0, 3.0, 4.0];

pub fn word(j: usize) -> String {
    format!("w{j:02}")
}

/// Word `j` belongs to class `j % 5` with weight `a` there and `−a/4` elsewhere.
pub fn model(scale: f64) -> BaselineModel {
    let mut weights = vec![0.0; CLASSES * VOCAB];
    for j in 0..VOCAB {
        let a = scale * LEVELS[j / CLASSES];
        for c in 0..CLASSES {
            weights[c * VOCAB + j] = if c == j % CLASSES { a } else { -a / 4.0 };
        }
    }
    BaselineModel::from_weights((0..VOCAB).map(word).collect(), vec![1.0; VOCAB], weights, [0.0; CLASSES]).unwrap()
}

/// `count` documents of 5–8 distinct words, each drawn from one class's words.
pub fn documents(count: usize, seed: u64) -> Vec<(Document, HumourStyle)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let home = i % CLASSES;
            let mut words: Vec<String> = (0..VOCAB).filter(|j| j % CLASSES == home).map(word).collect();
            words.shuffle(&mut rng);
            words.truncate(rng.gen_range(5..9));
            let style = HumourStyle::from_index(home).unwrap();
            (Document::new(format!("syn-{i}"), words.join(" ")), style)
        })
        .collect()
}

/// Average ranks (1-based), ties sharing the mean of their positions.
pub fn average_ranks(v: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut ranks = vec![0.0; v.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && v[order[j + 1]] == v[order[i]] {
            j += 1;
        }
        for &k in &order[i..=j] {
            ranks[k] = (i + j) as f64 / 2.0 + 1.0;
        }
        i = j + 1;
    }
    ranks
}

pub fn spearman(a: &[f64], b: &[f64]) -> f64 {
    let (ra, rb) = (average_ranks(a), average_ranks(b));
    let n = ra.len() as f64;
    let (ma, mb) = (ra.iter().sum::<f64>() / n, rb.iter().sum::<f64>() / n);
    let cov: f64 = ra.iter().zip(&rb).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = ra.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = rb.iter().map(|y| (y - mb).powi(2)).sum();
    cov / (va * vb).sqrt()
}
