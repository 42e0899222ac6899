//! Independent reference computations for the statistics engine: counting
//! ranks, computational-formula correlations and closed-form p-values.

#![allow(dead_code)]

/// Rank by counting: #smaller + (#equal + 1) / 2.
pub fn counting_ranks(v: &[f64]) -> Vec<f64> {
    v.iter()
        .map(|x| {
            let less = v.iter().filter(|y| *y < x).count() as f64;
            let equal = v.iter().filter(|y| *y == x).count() as f64;
            less + (equal + 1.0) / 2.0
        })
        .collect()
}

/// (nΣxy − ΣxΣy) / √((nΣx² − (Σx)²)(nΣy² − (Σy)²)) on integers, exact up to the final root.
pub fn integer_pearson(x: &[i64], y: &[i64]) -> f64 {
    let n = x.len() as i128;
    let sx: i128 = x.iter().map(|&v| v as i128).sum();
    let sy: i128 = y.iter().map(|&v| v as i128).sum();
    let sxy: i128 = x.iter().zip(y).map(|(&a, &b)| a as i128 * b as i128).sum();
    let sxx: i128 = x.iter().map(|&v| v as i128 * v as i128).sum();
    let syy: i128 = y.iter().map(|&v| v as i128 * v as i128).sum();
    let num = n * sxy - sx * sy;
    let den = ((n * sxx - sx * sx) * (n * syy - sy * sy)) as f64;
    num as f64 / den.sqrt()
}

/// 1 − 6Σd² / (n(n² − 1)), valid without ties.
pub fn untied_spearman(x: &[f64], y: &[f64]) -> f64 {
    let (rx, ry) = (counting_ranks(x), counting_ranks(y));
    let n = x.len() as f64;
    let d2: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - b).powi(2)).sum();
    1.0 - 6.0 * d2 / (n * (n * n - 1.0))
}

/// Kruskal-Wallis H from counting ranks with the tie correction.
pub fn kruskal_h(groups: &[Vec<f64>]) -> f64 {
    let pooled: Vec<f64> = groups.iter().flatten().copied().collect();
    let ranks = counting_ranks(&pooled);
    let n = pooled.len() as f64;
    let mut at = 0;
    let mut s = 0.0;
    for g in groups {
        let r: f64 = ranks[at..at + g.len()].iter().sum();
        s += r * r / g.len() as f64;
        at += g.len();
    }
    let h = 12.0 / (n * (n + 1.0)) * s - 3.0 * (n + 1.0);
    let mut seen: Vec<f64> = Vec::new();
    let mut ties = 0.0;
    for x in &pooled {
        if !seen.contains(x) {
            seen.push(*x);
            let t = pooled.iter().filter(|y| *y == x).count() as f64;
            ties += t * t * t - t;
        }
    }
    h / (1.0 - ties / (n * n * n - n))
}

pub fn chi_square(table: &[Vec<u64>]) -> f64 {
    let total: f64 = table.iter().flatten().sum::<u64>() as f64;
    let mut s = 0.0;
    for row in table {
        let ri: f64 = row.iter().sum::<u64>() as f64;
        for (j, &o) in row.iter().enumerate() {
            let cj: f64 = table.iter().map(|r| r[j]).sum::<u64>() as f64;
            let e = ri * cj / total;
            s += (o as f64 - e) * (o as f64 - e) / e;
        }
    }
    s
}

/// Upper tail of a chi-square with 2 degrees of freedom.
pub fn chi2_sf_df2(x: f64) -> f64 {
    (-x / 2.0).exp()
}

/// 50 points with shuffled ranks plus 3 large points extreme on both axes.
pub fn outlier_construction(seed: u64) -> (Vec<f64>, Vec<f64>) {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut x: Vec<f64> = (0..50).map(f64::from).collect();
    let mut y = x.clone();
    y.shuffle(&mut rng);
    for k in 0..3 {
        x.push(1000.0 + 100.0 * f64::from(k));
        y.push(1000.0 + 100.0 * f64::from(k));
    }
    (x, y)
}
