//! Seeded random operators.
//!
//! Every sample `k` of a batch draws from its own ChaCha stream
//! `(seed, stream = k)`, so batches are reproducible and order-independent
//! under parallel evaluation.

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::lie::basis_len;
use crate::operator::CurvatureOperator;

pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Symmetric matrix with independent standard normal upper-triangle entries.
pub fn gaussian_symmetric<R: Rng + ?Sized>(rng: &mut R, size: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(size, size);
    for r in 0..size {
        for c in r..size {
            let v: f64 = rng.sample(StandardNormal);
            m[(r, c)] = v;
            m[(c, r)] = v;
        }
    }
    m
}

/// Symmetric Gaussian coefficient matrix projected onto the Bianchi subspace.
pub fn gaussian_bianchi<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CurvatureOperator {
    let m = gaussian_symmetric(rng, basis_len(n));
    CurvatureOperator::symmetrized(n, m).project_bianchi()
}

/// Haar-distributed orthogonal matrix via QR of a Gaussian matrix with the
/// sign of `R`'s diagonal folded into `Q`.
pub fn random_orthogonal<R: Rng + ?Sized>(rng: &mut R, size: usize) -> DMatrix<f64> {
    let g = DMatrix::from_fn(size, size, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for c in 0..size {
        if r[(c, c)] < 0.0 {
            q.column_mut(c).neg_mut();
        }
    }
    q
}
