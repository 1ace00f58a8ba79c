use rand::distributions::{Bernoulli, Distribution};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::codebook::{build_code, hamming, mask, Codebook, MAX_BLOCKLENGTH, MAX_MESSAGES};
use crate::error::{Error, Result};

/// One simulation run: blocklength `n` split at `m = round(gamma n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub n: usize,
    #[serde(rename = "M")]
    pub messages: usize,
    pub gamma: f64,
    pub t: f64,
    pub p: f64,
    pub p1: f64,
    pub trials: u64,
    pub seed: u64,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 || self.n > MAX_BLOCKLENGTH {
            return Err(Error::Config(format!(
                "n = {} outside 2..={MAX_BLOCKLENGTH}",
                self.n
            )));
        }
        if self.messages < 2 || self.messages > MAX_MESSAGES {
            return Err(Error::Config(format!(
                "M = {} outside 2..={MAX_MESSAGES}",
                self.messages
            )));
        }
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(Error::Config(format!(
                "gamma = {} outside (0, 1)",
                self.gamma
            )));
        }
        if !(self.t >= 0.0) {
            return Err(Error::Config(format!("t = {} is negative", self.t)));
        }
        if !(0.0..=0.5).contains(&self.p) {
            return Err(Error::Config(format!("p = {} outside [0, 1/2]", self.p)));
        }
        if !(0.0..=0.5).contains(&self.p1) {
            return Err(Error::Config(format!("p1 = {} outside [0, 1/2]", self.p1)));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        let m = self.phase1_len();
        if m < 1 || m >= self.n {
            return Err(Error::Config(format!(
                "round(gamma n) = {m} leaves no room for both phases at n = {}",
                self.n
            )));
        }
        if m < 64 && self.messages as u64 > 1u64 << m {
            return Err(Error::Config(format!(
                "M = {} exceeds 2^m with m = {m}",
                self.messages
            )));
        }
        Ok(())
    }

    /// Phase-I length `m = round(gamma n)`.
    pub fn phase1_len(&self) -> usize {
        (self.gamma * self.n as f64).round() as usize
    }

    pub fn phase2_len(&self) -> usize {
        self.n - self.phase1_len()
    }
}

/// Event counters over a batch of trials.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimStats {
    pub trials: u64,
    pub case1_count: u64,
    pub case2_count: u64,
    pub errors_total: u64,
    pub errors_case1: u64,
    pub errors_case2: u64,
    /// Case-2 trials where the transmitter's pair differs from the receiver's.
    pub list_mismatch_count: u64,
    pub true_outside_top2_count: u64,
}

impl SimStats {
    pub fn record(&mut self, o: &TrialOutcome) {
        self.trials += 1;
        match o.case {
            Decision::Immediate => {
                self.case1_count += 1;
                self.errors_case1 += o.error as u64;
            }
            Decision::Pair => {
                self.case2_count += 1;
                self.errors_case2 += o.error as u64;
                self.list_mismatch_count += o.list_mismatch as u64;
            }
        }
        self.errors_total += o.error as u64;
        self.true_outside_top2_count += o.true_outside_top2 as u64;
    }

    pub fn merge(mut self, other: SimStats) -> SimStats {
        self.trials += other.trials;
        self.case1_count += other.case1_count;
        self.case2_count += other.case2_count;
        self.errors_total += other.errors_total;
        self.errors_case1 += other.errors_case1;
        self.errors_case2 += other.errors_case2;
        self.list_mismatch_count += other.list_mismatch_count;
        self.true_outside_top2_count += other.true_outside_top2_count;
        self
    }

    pub fn error_rate(&self) -> f64 {
        self.errors_total as f64 / self.trials as f64
    }

    /// The accounting identities every batch must satisfy.
    pub fn is_consistent(&self) -> bool {
        self.errors_total == self.errors_case1 + self.errors_case2
            && self.case1_count + self.case2_count == self.trials
            && self.errors_case1 <= self.case1_count
            && self.errors_case2 <= self.case2_count
            && self.list_mismatch_count <= self.case2_count
            && self.true_outside_top2_count <= self.trials
    }
}

/// Whether the receiver decided right after phase I or waited for phase II.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Decision {
    Immediate,
    Pair,
}

/// Everything observed in one protocol run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialOutcome {
    pub message: usize,
    pub decoded: usize,
    pub case: Decision,
    /// Receiver's two best candidates after phase I, best first.
    pub receiver_top: [usize; 2],
    /// Transmitter's pair `(true, companion)`; `None` in case 1.
    pub transmitter_pair: Option<(usize, usize)>,
    /// `d(y, x')`, the noise added on the feedback link.
    pub feedback_distance: u32,
    pub error: bool,
    pub list_mismatch: bool,
    pub true_outside_top2: bool,
}

/// Flip each of the low `bits` bits with probability `p`.
fn noise<R: Rng>(rng: &mut R, bits: usize, flip: &Bernoulli, p: f64) -> u64 {
    if p == 0.0 {
        return 0;
    }
    if p == 0.5 {
        return rng.gen::<u64>() & mask(bits);
    }
    let mut e = 0u64;
    for b in 0..bits {
        if flip.sample(rng) {
            e |= 1 << b;
        }
    }
    e
}

/// Indices of the three words closest to `y`, ties to the lower index.
/// Entries beyond the code size are `usize::MAX`.
fn top3(code: &Codebook, y: u64) -> ([usize; 3], [u32; 3]) {
    let mut idx = [usize::MAX; 3];
    let mut dist = [u32::MAX; 3];
    for (i, &w) in code.words().iter().enumerate() {
        let d = hamming(w, y);
        if d < dist[2] {
            let mut k = 2;
            while k > 0 && d < dist[k - 1] {
                idx[k] = idx[k - 1];
                dist[k] = dist[k - 1];
                k -= 1;
            }
            idx[k] = i;
            dist[k] = d;
        }
    }
    (idx, dist)
}

fn companion(code: &Codebook, message: usize, x_fb: u64) -> usize {
    let mut best = usize::MAX;
    let mut best_d = u32::MAX;
    for (i, &w) in code.words().iter().enumerate() {
        if i == message {
            continue;
        }
        let d = hamming(w, x_fb);
        if d < best_d {
            best = i;
            best_d = d;
        }
    }
    best
}

/// Run the protocol once. `code` must have length `round(gamma n)`.
pub fn run_trial<R: Rng>(cfg: &SimConfig, code: &Codebook, rng: &mut R) -> TrialOutcome {
    let m = code.m();
    let tail = cfg.n - m;
    let forward = Bernoulli::new(cfg.p).expect("validated crossover");
    let backward = Bernoulli::new(cfg.p1).expect("validated crossover");

    let message = rng.gen_range(0..code.len());
    let y = code.word(message) ^ noise(rng, m, &forward, cfg.p);
    let x_fb = y ^ noise(rng, m, &backward, cfg.p1);

    let (top, dist) = top3(code, y);
    let receiver_top = [top[0], top[1]];
    let true_outside_top2 = message != top[0] && message != top[1];
    let feedback_distance = hamming(y, x_fb);

    let immediate = code.len() >= 3 && (dist[2] - dist[1]) as f64 <= cfg.t * m as f64;
    if immediate {
        return TrialOutcome {
            message,
            decoded: top[0],
            case: Decision::Immediate,
            receiver_top,
            transmitter_pair: None,
            feedback_distance,
            error: top[0] != message,
            list_mismatch: false,
            true_outside_top2,
        };
    }

    let other = companion(code, message, x_fb);
    let ones = mask(tail);
    // Lower index of a pair sends all zeros, the higher all ones.
    let sent = if true_outside_top2 || message < other {
        0
    } else {
        ones
    };
    let z = sent ^ noise(rng, tail, &forward, cfg.p);

    let (a, b) = if top[0] < top[1] {
        (top[0], top[1])
    } else {
        (top[1], top[0])
    };
    let score_a = hamming(code.word(a), y) + hamming(0, z);
    let score_b = hamming(code.word(b), y) + hamming(ones, z);
    let decoded = if score_b < score_a { b } else { a };

    let same_pair = (message == a && other == b) || (message == b && other == a);
    TrialOutcome {
        message,
        decoded,
        case: Decision::Pair,
        receiver_top,
        transmitter_pair: Some((message, other)),
        feedback_distance,
        error: decoded != message,
        list_mismatch: !same_pair,
        true_outside_top2,
    }
}

/// RNG for trial `index`: the configuration seed on stream `index`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// The expurgated phase-I code for `cfg`.
pub fn code_for(cfg: &SimConfig) -> Result<Codebook> {
    cfg.validate()?;
    build_code(cfg.phase1_len(), cfg.messages, cfg.p, cfg.seed)
}

/// Run `cfg.trials` trials in parallel. Counts do not depend on scheduling.
pub fn estimate(cfg: &SimConfig) -> Result<SimStats> {
    let code = code_for(cfg)?;
    estimate_with_code(cfg, &code)
}

pub fn estimate_with_code(cfg: &SimConfig, code: &Codebook) -> Result<SimStats> {
    check_code(cfg, code)?;
    Ok((0..cfg.trials)
        .into_par_iter()
        .fold(SimStats::default, |mut s, i| {
            s.record(&run_trial(cfg, code, &mut trial_rng(cfg.seed, i)));
            s
        })
        .reduce(SimStats::default, SimStats::merge))
}

/// Single-threaded reference for [`estimate`].
pub fn estimate_sequential(cfg: &SimConfig) -> Result<SimStats> {
    let code = code_for(cfg)?;
    let mut s = SimStats::default();
    for i in 0..cfg.trials {
        s.record(&run_trial(cfg, &code, &mut trial_rng(cfg.seed, i)));
    }
    Ok(s)
}

fn check_code(cfg: &SimConfig, code: &Codebook) -> Result<()> {
    cfg.validate()?;
    if code.m() != cfg.phase1_len() || code.len() != cfg.messages {
        return Err(Error::Config(format!(
            "code has m = {}, M = {}; configuration needs m = {}, M = {}",
            code.m(),
            code.len(),
            cfg.phase1_len(),
            cfg.messages
        )));
    }
    Ok(())
}
