//! A small deterministic generator for randomized identity checks.
//!
//! Sampling must be reproducible across runs and platforms so that machine
//! reports stay byte-identical; a fixed xorshift suffices.

use crate::cochain::{Cochain, Dims};
use crate::scalar::Scalar;

/// xorshift64* with a fixed default seed.
#[derive(Clone, Debug)]
pub struct Rng {
    state: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng {
            state: seed.max(1),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    /// Uniform in `0..bound`.
    pub fn below(&mut self, bound: usize) -> usize {
        (self.next_u64() % bound as u64) as usize
    }

    /// A small integer in `[-range, range]`.
    pub fn small_int(&mut self, range: i64) -> i64 {
        let span = (2 * range + 1) as u64;
        (self.next_u64() % span) as i64 - range
    }

    /// A small integer scalar; kept integral so prime and rational backends
    /// see the same sampled data.
    pub fn scalar<S: Scalar>(&mut self, range: i64) -> S {
        S::from_i64(self.small_int(range))
    }

    /// A dense cochain with small integer entries.
    pub fn cochain<S: Scalar>(&mut self, degree: usize, dims: Dims, range: i64) -> Cochain<S> {
        let mut c = Cochain::zero(degree, dims);
        for v in c.data_mut() {
            *v = S::from_i64(self.small_int(range));
        }
        c
    }
}

impl Default for Rng {
    fn default() -> Self {
        Rng::new(0x9E37_79B9_7F4A_7C15)
    }
}
