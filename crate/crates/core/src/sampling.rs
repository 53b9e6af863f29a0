//! Seeded random simple functions.
//!
//! Every draw comes from its own ChaCha stream selected by `(seed, index)`, so
//! sample `i` is the same no matter which worker computes it or in what order.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::stepfn::{Domain, Piece, StepFunction};

/// Independent random stream number `index` under `seed`.
pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Draws step functions with breakpoints on the lattice `2^{-lattice_bits}ℤ`
/// and values from `{-value_range, …, value_range}`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepSampler {
    pub domain: Domain,
    /// Breakpoints fall in `[0, span]`.
    pub span: f64,
    pub max_pieces: usize,
    pub lattice_bits: u32,
    pub value_range: i32,
}

impl StepSampler {
    pub fn new(domain: Domain) -> Self {
        Self {
            domain,
            span: match domain {
                Domain::Unit => 1.0,
                Domain::HalfLine => 4.0,
            },
            max_pieces: 8,
            lattice_bits: 10,
            value_range: 8,
        }
    }

    /// A non-zero simple function.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> StepFunction {
        let scale = (1u64 << self.lattice_bits) as f64;
        let cells = (self.span * scale) as u64;
        loop {
            let n = rng.gen_range(1..=self.max_pieces);
            let mut cuts: Vec<u64> = (0..=n).map(|_| rng.gen_range(0..=cells)).collect();
            cuts.sort_unstable();
            cuts.dedup();
            let pieces: Vec<Piece> = cuts
                .windows(2)
                .map(|w| {
                    let v = rng.gen_range(-self.value_range..=self.value_range);
                    Piece::new(w[0] as f64 / scale, (w[1] - w[0]) as f64 / scale, v as f64)
                })
                .collect();
            if let Ok(x) = StepFunction::new(self.domain, pieces) {
                if !x.is_zero() {
                    return x;
                }
            }
        }
    }
}
