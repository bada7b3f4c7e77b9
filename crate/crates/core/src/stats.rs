//! Seeded Monte-Carlo plumbing: batch substreams and batch-means error bars.

use alloc::vec;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[allow(unused_imports)] // std float methods shadow it when std is linked
use crate::mathx::Float;

/// A Monte-Carlo (or exact, with zero error) estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Self { value, stderr: 0.0 }
    }

    /// `|self - other| <= k * combined stderr`.
    pub fn agrees_with(&self, other: f64, k: f64) -> bool {
        (self.value - other).abs() <= k * self.stderr
    }
}

/// Sample count, seed and number of batches used for the error bar.
///
/// Batch `b` draws from its own ChaCha stream `b` under `seed`, so results do
/// not depend on the order in which batches are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct McConfig {
    pub samples: usize,
    pub seed: u64,
    pub batches: usize,
}

impl McConfig {
    pub const DEFAULT_BATCHES: usize = 20;

    pub fn new(samples: usize, seed: u64) -> Self {
        Self {
            samples,
            seed,
            batches: Self::DEFAULT_BATCHES,
        }
    }

    pub fn with_batches(mut self, batches: usize) -> Self {
        self.batches = batches;
        self
    }

    /// Same sample budget on an independent seed.
    pub fn derive(&self, salt: u64) -> Self {
        Self {
            seed: splitmix64(self.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15)),
            ..*self
        }
    }

    fn batch_count(&self) -> usize {
        self.batches.clamp(2, self.samples.max(2))
    }

    /// Sizes of each batch; they differ by at most one.
    pub fn batch_sizes(&self) -> Vec<usize> {
        let b = self.batch_count();
        let base = self.samples.max(b) / b;
        let extra = self.samples.max(b) % b;
        (0..b).map(|i| base + usize::from(i < extra)).collect()
    }

    /// Generator for batch `batch`.
    pub fn rng(&self, batch: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(batch as u64);
        rng
    }
}

pub(crate) fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Combines per-batch means into an estimate with `sd(batch means)/sqrt(B)`.
pub fn from_batch_means(means: &[f64], sizes: &[usize]) -> Estimate {
    let total: usize = sizes.iter().sum();
    let value = means
        .iter()
        .zip(sizes)
        .map(|(m, &s)| m * s as f64)
        .sum::<f64>()
        / total as f64;
    let b = means.len() as f64;
    let plain = means.iter().sum::<f64>() / b;
    let var = means.iter().map(|m| (m - plain).powi(2)).sum::<f64>() / (b - 1.0);
    Estimate {
        value,
        stderr: (var / b).sqrt(),
    }
}

/// Runs `k` scalar statistics over all batches. `batch(rng, size, out)` must
/// write the batch mean of each statistic into `out`.
pub fn run_batches<F>(cfg: &McConfig, k: usize, mut batch: F) -> Vec<Estimate>
where
    F: FnMut(&mut ChaCha8Rng, usize, &mut [f64]),
{
    let sizes = cfg.batch_sizes();
    let mut means = vec![vec![0.0; sizes.len()]; k];
    let mut out = vec![0.0; k];
    for (b, &size) in sizes.iter().enumerate() {
        let mut rng = cfg.rng(b);
        out.iter_mut().for_each(|v| *v = 0.0);
        batch(&mut rng, size, &mut out);
        for (j, v) in out.iter().enumerate() {
            means[j][b] = *v;
        }
    }
    means.iter().map(|m| from_batch_means(m, &sizes)).collect()
}

/// Single-statistic form of [`run_batches`]: `sample(rng)` returns one draw.
pub fn mean_of<F>(cfg: &McConfig, mut sample: F) -> Estimate
where
    F: FnMut(&mut ChaCha8Rng) -> f64,
{
    run_batches(cfg, 1, |rng, size, out| {
        let mut acc = 0.0;
        for _ in 0..size {
            acc += sample(rng);
        }
        out[0] = acc / size as f64;
    })[0]
}
