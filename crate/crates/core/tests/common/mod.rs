#![allow(dead_code)]

use nalgebra::{DMatrix, Matrix2};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use shellvi::ObstacleQP;

pub fn random_spd(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let m = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    m.transpose() * m + DMatrix::identity(n, n) * 0.5
}

pub fn random_metric(rng: &mut ChaCha8Rng) -> Matrix2<f64> {
    let m = Matrix2::from_fn(|_, _| rng.gen_range(-2.0..2.0));
    m.transpose() * m + Matrix2::identity() * rng.gen_range(1e-2..1.0)
}

/// Random obstacle problem of size at most 15 with at most 12 bounds.
pub fn random_qp(rng: &mut ChaCha8Rng) -> ObstacleQP {
    let n = rng.gen_range(1..=15);
    let c = rng.gen_range(0..=n.min(12));
    let a = random_spd(rng, n);
    let b: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mut constrained = vec![false; n];
    let mut idx: Vec<usize> = (0..n).collect();
    for k in 0..c {
        let j = rng.gen_range(k..n);
        idx.swap(k, j);
        constrained[idx[k]] = true;
    }
    ObstacleQP::from_dense(&a, b, &constrained).unwrap()
}

pub fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
