use nalgebra::QR;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{c, CMat, CVec, StateVector, C64};

/// Deterministic generator used for every randomized input.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random pure state on the given product space.
pub fn haar_state<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> StateVector {
    let n: usize = dims.iter().product();
    let v = CVec::from_fn(n, |_, _| gaussian(rng));
    StateVector::normalized(dims.to_vec(), v).expect("nonzero Gaussian vector")
}

/// Haar-random unitary via QR with phase correction.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMat {
    let z = CMat::from_fn(d, d, |_, _| gaussian(rng));
    let qr = QR::new(z);
    let (mut q, rr) = (qr.q(), qr.r());
    for j in 0..d {
        let diag = rr[(j, j)];
        let phase = if diag.norm() > 0.0 { diag / diag.norm() } else { c(1.0, 0.0) };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}
