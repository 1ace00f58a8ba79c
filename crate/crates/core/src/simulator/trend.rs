use serde::{Deserialize, Serialize};

use super::protocol::{estimate, SimConfig, SimStats};
use crate::error::{Error, Result};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_964;

/// One blocklength of an exponent trend.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrendRow {
    pub n: usize,
    #[serde(rename = "M")]
    pub messages: usize,
    pub stats: SimStats,
    pub error_rate: f64,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
    /// `-ln(error_rate) / n`; `None` when no error was observed.
    pub normalized_log_error: Option<f64>,
    /// No errors observed, so the row is left out of the slope fit.
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendTable {
    pub rate: f64,
    pub rows: Vec<TrendRow>,
    /// Least-squares slope of `-ln(error_rate)` against `n` over the
    /// non-degenerate rows; `None` with fewer than two of them.
    pub slope: Option<f64>,
}

/// Wilson score interval for `k` successes in `n` trials.
pub fn wilson_interval(k: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let nf = n as f64;
    let ph = k as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let centre = (ph + z2 / (2.0 * nf)) / denom;
    let half = z * (ph * (1.0 - ph) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Least-squares slope of `ys` against `xs`.
pub fn ls_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() < 2 || xs.len() != ys.len() {
        return None;
    }
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Some(sxy / sxx)
}

/// Message count `round(e^(R n))`, at least 2.
pub fn messages_for_rate(rate: f64, n: usize) -> usize {
    ((rate * n as f64).exp().round() as usize).max(2)
}

/// Simulate `cfg_base` at each blocklength in `n_list`, with `M = round(e^(R n))`.
pub fn exponent_trend(cfg_base: &SimConfig, rate: f64, n_list: &[usize]) -> Result<TrendTable> {
    if !(rate >= 0.0) {
        return Err(Error::Config(format!("rate {rate} is negative")));
    }
    if n_list.is_empty() {
        return Err(Error::Config("empty blocklength list".into()));
    }
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let cfg = SimConfig {
            n,
            messages: messages_for_rate(rate, n),
            ..*cfg_base
        };
        let stats = estimate(&cfg)?;
        let error_rate = stats.error_rate();
        let (wilson_lo, wilson_hi) = wilson_interval(stats.errors_total, stats.trials, Z95);
        let degenerate = stats.errors_total == 0;
        rows.push(TrendRow {
            n,
            messages: cfg.messages,
            stats,
            error_rate,
            wilson_lo,
            wilson_hi,
            normalized_log_error: (!degenerate).then(|| -error_rate.ln() / n as f64),
            degenerate,
        });
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = rows
        .iter()
        .filter(|r| !r.degenerate)
        .map(|r| (r.n as f64, -r.error_rate.ln()))
        .unzip();
    Ok(TrendTable {
        rate,
        slope: ls_slope(&xs, &ys),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_reference_values() {
        // 10 successes in 100: the textbook interval [0.0552, 0.1744].
        let (lo, hi) = wilson_interval(10, 100, Z95);
        assert!(
            (lo - 0.0552).abs() < 1e-4 && (hi - 0.1744).abs() < 1e-4,
            "{lo} {hi}"
        );
        let (lo, hi) = wilson_interval(0, 50, Z95);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.1);
    }

    #[test]
    fn slope_of_a_line() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x| 0.5 * x - 1.0).collect();
        assert!((ls_slope(&xs, &ys).unwrap() - 0.5).abs() < 1e-15);
        assert!(ls_slope(&[1.0], &[2.0]).is_none());
        assert!(ls_slope(&[1.0, 1.0], &[2.0, 3.0]).is_none());
    }

    #[test]
    fn message_count_scaling() {
        assert_eq!(messages_for_rate(0.0, 30), 2);
        assert_eq!(messages_for_rate(2f64.ln(), 5), 32);
    }

    #[test]
    fn degenerate_rows_are_flagged() {
        let cfg = SimConfig {
            n: 20,
            messages: 2,
            gamma: 0.5,
            t: 0.0,
            p: 0.0,
            p1: 0.0,
            trials: 50,
            seed: 3,
        };
        let table = exponent_trend(&cfg, 0.05, &[10, 20]).unwrap();
        assert!(table
            .rows
            .iter()
            .all(|r| r.degenerate && r.normalized_log_error.is_none()));
        assert!(table.slope.is_none());
    }
}
