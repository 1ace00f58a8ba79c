use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Longest supported word; codewords live in one machine word.
pub const MAX_BLOCKLENGTH: usize = 64;

/// Largest supported message count.
pub const MAX_MESSAGES: usize = 1 << 16;

/// Stream reserved for codebook construction. Trial `i` uses stream `i`.
pub(crate) const CODEBOOK_STREAM: u64 = u64::MAX;

/// Below this many bits, candidate pools covering more than half the space
/// are drawn by shuffling the whole space instead of rejection sampling.
const ENUMERATE_BITS: usize = 24;

#[inline]
pub(crate) fn mask(bits: usize) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

#[inline]
pub fn hamming(a: u64, b: u64) -> u32 {
    (a ^ b).count_ones()
}

/// Phase-I code: `M` distinct binary words of length `m`, packed LSB first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codebook {
    m: usize,
    words: Vec<u64>,
    seed: u64,
    min_distance: u32,
}

impl Codebook {
    /// The first `count` distinct words drawn from `seed`, without expurgation.
    pub fn random(m: usize, count: usize, seed: u64) -> Result<Self> {
        check_size(m, count)?;
        let words = draw_distinct(m, count, seed);
        Ok(Codebook::from_words(m, words, seed))
    }

    fn from_words(m: usize, words: Vec<u64>, seed: u64) -> Self {
        let min_distance = min_pairwise_distance(&words);
        Codebook {
            m,
            words,
            seed,
            min_distance,
        }
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.words.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    #[inline]
    pub fn word(&self, i: usize) -> u64 {
        self.words[i]
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn min_distance(&self) -> u32 {
        self.min_distance
    }

    #[inline]
    pub fn distance(&self, i: usize, j: usize) -> u32 {
        hamming(self.words[i], self.words[j])
    }
}

fn check_size(m: usize, count: usize) -> Result<()> {
    if m == 0 || m > MAX_BLOCKLENGTH {
        return Err(Error::Config(format!(
            "word length {m} outside 1..={MAX_BLOCKLENGTH}"
        )));
    }
    if !(2..=MAX_MESSAGES).contains(&count) {
        return Err(Error::Config(format!(
            "message count {count} outside 2..={MAX_MESSAGES}"
        )));
    }
    if m < 64 && count as u64 > 1u64 << m {
        return Err(Error::Config(format!(
            "{count} distinct words do not fit in {m} bits"
        )));
    }
    Ok(())
}

/// `count` distinct words in draw order; the whole space, shuffled, when
/// `count` reaches `2^m`.
fn draw_distinct(m: usize, count: usize, seed: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(CODEBOOK_STREAM);
    let space = if m < 64 { Some(1u64 << m) } else { None };

    if let Some(space) = space {
        if m <= ENUMERATE_BITS && 2 * count as u64 > space {
            let mut all: Vec<u64> = (0..space).collect();
            all.shuffle(&mut rng);
            all.truncate(count);
            return all;
        }
    }

    let mask = mask(m);
    let mut seen = HashSet::with_capacity(count);
    let mut words = Vec::with_capacity(count);
    while words.len() < count {
        let w = rng.gen::<u64>() & mask;
        if seen.insert(w) {
            words.push(w);
        }
    }
    words
}

fn min_pairwise_distance(words: &[u64]) -> u32 {
    (0..words.len())
        .into_par_iter()
        .map(|i| {
            words[i + 1..]
                .iter()
                .map(|&w| hamming(words[i], w))
                .min()
                .unwrap_or(u32::MAX)
        })
        .min()
        .unwrap_or(u32::MAX)
}

/// Expurgated random code: draw `2M - 1` distinct words (all `2^m` if fewer
/// exist), score each by `sum_{j != i} z^d(i, j)` with `z = 2 sqrt(p(1-p))`,
/// and keep the `M` lowest-scoring words in draw order.
pub fn build_code(m: usize, count: usize, p: f64, seed: u64) -> Result<Codebook> {
    check_size(m, count)?;
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Config(format!(
            "crossover probability {p} outside [0, 1]"
        )));
    }
    let pool_size = match m {
        64 => 2 * count - 1,
        _ => (2 * count - 1).min(1usize << m.min(usize::BITS as usize - 1)),
    };
    let pool = draw_distinct(m, pool_size, seed);
    if pool.len() == count {
        return Ok(Codebook::from_words(m, pool, seed));
    }

    let z = 2.0 * (p * (1.0 - p)).sqrt();
    let weight: Vec<f64> = (0..=m as i32).map(|d| z.powi(d)).collect();
    let scores: Vec<f64> = pool
        .par_iter()
        .enumerate()
        .map(|(i, &w)| {
            pool.iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &v)| weight[hamming(w, v) as usize])
                .sum()
        })
        .collect();

    let mut order: Vec<usize> = (0..pool.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]).then(a.cmp(&b)));
    let mut keep = order[..count].to_vec();
    keep.sort_unstable();
    let words = keep.into_iter().map(|i| pool[i]).collect();
    Ok(Codebook::from_words(m, words, seed))
}
