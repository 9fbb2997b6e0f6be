use rand::seq::SliceRandom;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::channel::Channel;
use crate::error::{Error, Result};
use crate::numkernel::{householder_qr, ComplexMatrix, C64};

/// Seeded, counter-based random source. Identical `(seed, stream)` pairs
/// produce identical sequences; [`Rng::fork`] derives an independent stream.
#[derive(Clone, Debug)]
pub struct Rng {
    seed: u64,
    stream: u64,
    inner: ChaCha8Rng,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Self {
            seed,
            stream,
            inner,
        }
    }

    /// A fresh generator on a stream derived from this one's stream and
    /// `id`. Does not advance `self`.
    pub fn fork(&self, id: u64) -> Self {
        Self::with_stream(self.seed, splitmix64(self.stream ^ splitmix64(id)))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    pub fn gaussian(&mut self) -> f64 {
        StandardNormal.sample(self)
    }

    pub fn complex_gaussian(&mut self) -> C64 {
        let re = self.gaussian();
        let im = self.gaussian();
        C64::new(re, im)
    }
}

impl RngCore for Rng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

/// Haar-random `d×d` unitary: complex Ginibre matrix, Householder QR, and
/// the phases of `R`'s diagonal folded back into `Q`.
pub fn haar_unitary(d: usize, rng: &mut Rng) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(d, d, |_, _| rng.complex_gaussian());
    let (q, r) = householder_qr(&g);
    ComplexMatrix::from_fn(d, d, |i, j| {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { C64::new(1.0, 0.0) };
        q[(i, j)] * phase
    })
}

/// Uniform permutation of `0..d`.
pub fn random_permutation(d: usize, rng: &mut Rng) -> Vec<usize> {
    let mut p: Vec<usize> = (0..d).collect();
    p.shuffle(rng);
    p
}

/// Unit vector drawn from the unitarily invariant measure.
pub fn random_pure_state(dim: usize, rng: &mut Rng) -> Vec<C64> {
    let mut v: Vec<C64> = (0..dim).map(|_| rng.complex_gaussian()).collect();
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in v.iter_mut() {
        *z /= n;
    }
    v
}

/// Random full-rank density matrix `G G† / tr(G G†)` with Ginibre `G`.
pub fn random_density_matrix(dim: usize, rng: &mut Rng) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(dim, dim, |_, _| rng.complex_gaussian());
    let p = g.matmul(&g.dagger()).hermitian_part();
    let t = p.trace().re;
    p.scale_real(1.0 / t)
}

/// Random channel with `kraus` operators, cut from the first `din` columns
/// of a Haar unitary of side `kraus · dout`.
pub fn random_channel(din: usize, dout: usize, kraus: usize, rng: &mut Rng) -> Result<Channel> {
    let side = kraus * dout;
    if din == 0 || side < din {
        return Err(Error::InvalidArgument(format!(
            "{kraus} Kraus operators of shape {dout}x{din} cannot form an isometry"
        )));
    }
    let u = haar_unitary(side, rng);
    let ops = (0..kraus)
        .map(|k| ComplexMatrix::from_fn(dout, din, |o, i| u[(k * dout + o, i)]))
        .collect();
    Channel::new(ops, vec![din], vec![dout])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let mut a = Rng::new(42);
        let mut b = Rng::new(42);
        let xs: Vec<u64> = (0..8).map(|_| a.next_u64()).collect();
        let ys: Vec<u64> = (0..8).map(|_| b.next_u64()).collect();
        assert_eq!(xs, ys);
        let mut c = Rng::new(43);
        assert_ne!(xs[0], c.next_u64());
    }

    #[test]
    fn forks_are_deterministic_and_distinct() {
        let base = Rng::new(7);
        let mut f1 = base.fork(1);
        let mut f1b = base.fork(1);
        let mut f2 = base.fork(2);
        let a = f1.next_u64();
        assert_eq!(a, f1b.next_u64());
        assert_ne!(a, f2.next_u64());
    }

    #[test]
    fn haar_samples_are_unitary_and_reproducible() {
        for d in 1..=6 {
            let u = haar_unitary(d, &mut Rng::new(d as u64));
            assert!(u.unitarity_residual() <= 1e-12);
            assert_eq!(u, haar_unitary(d, &mut Rng::new(d as u64)));
        }
    }

    #[test]
    fn random_channels_are_cptp() {
        let mut rng = Rng::new(9);
        let c = random_channel(3, 2, 2, &mut rng).unwrap();
        assert!(super::super::is_cptp(&super::super::choi_of(&c), 3, 2));
        assert!(random_channel(5, 2, 2, &mut rng).is_err());
    }

    #[test]
    fn random_permutation_is_bijection() {
        let mut rng = Rng::new(3);
        let mut p = random_permutation(9, &mut rng);
        p.sort_unstable();
        assert_eq!(p, (0..9).collect::<Vec<_>>());
    }
}
