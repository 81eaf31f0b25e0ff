//! Seeded sampling. Every random quantity in the crate flows through here.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::euclid;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian<R: Rng>(rng: &mut R, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| rng.sample(StandardNormal)).collect()
}

/// Uniform direction on the Euclidean sphere.
pub fn direction<R: Rng>(rng: &mut R, dim: usize) -> Vec<f64> {
    loop {
        let g = gaussian(rng, dim);
        let r = euclid(&g);
        if r > 1e-12 {
            return g.iter().map(|x| x / r).collect();
        }
    }
}

/// `count` directions: coordinate vectors first, then `±1` sign vectors
/// (up to 64 of them), then Gaussian directions from `seed`.
pub fn directions(dim: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = (0..dim).map(|i| crate::linalg::unit(dim, i)).collect();
    let signs = if dim < 7 { 1usize << (dim - 1) } else { 64 };
    for mask in 0..signs {
        out.push(
            (0..dim)
                .map(|k| if k > 0 && (mask >> (k - 1)) & 1 == 1 { -1.0 } else { 1.0 })
                .collect(),
        );
    }
    let mut r = rng(seed);
    while out.len() < count {
        out.push(direction(&mut r, dim));
    }
    out.truncate(count);
    out
}

/// Uniform point in `[-1, 1]^dim`.
pub fn cube<R: Rng>(rng: &mut R, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| rng.random_range(-1.0..=1.0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        assert_eq!(directions(3, 50, 7), directions(3, 50, 7));
        assert_ne!(directions(3, 50, 7), directions(3, 50, 8));
        assert_eq!(directions(2, 10, 0).len(), 10);
    }
}
