//! Scalar information measures (entropy, divergence, Gilbert-Varshamov
//! radius) and the one-dimensional root finder and maximizer used by the
//! exponent and feedback modules.
//!
//! All logarithms are natural and `0 ln 0 = 0` throughout.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Information quantities (entropies, divergences, rates, exponents) in nats.
pub type Nats = f64;

/// Grid size used by [`maximize_scalar`] before golden-section refinement.
pub const DEFAULT_GRID: usize = 512;

/// Argument tolerance for bisection searches.
pub const BISECT_TOL: f64 = 1e-12;

/// Argument tolerance for the optimizer's refinement stage.
pub const OPTIMIZE_TOL: f64 = 1e-9;

const MAX_BISECTIONS: usize = 400;

/// A probability in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Prob(f64);

impl Prob {
    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Prob(value))
        } else {
            Err(Error::domain("probability", value, "[0, 1]"))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    /// `1 - p`.
    #[inline]
    pub fn complement(self) -> f64 {
        1.0 - self.0
    }
}

impl TryFrom<f64> for Prob {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Prob::new(value)
    }
}

impl From<Prob> for f64 {
    fn from(p: Prob) -> f64 {
        p.0
    }
}

/// Search interval `[lo, hi]` with an argument tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub tol: f64,
}

impl Bracket {
    pub fn new(lo: f64, hi: f64, tol: f64) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::Config(format!("invalid bracket [{lo}, {hi}]")));
        }
        if !(tol > 0.0) {
            return Err(Error::Config(format!(
                "bracket tolerance must be positive, got {tol}"
            )));
        }
        Ok(Bracket { lo, hi, tol })
    }
}

/// `x ln x` with the `0 ln 0 = 0` convention.
#[inline]
fn xlnx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// Binary entropy `h(x) = -x ln x - (1-x) ln(1-x)` in nats.
pub fn binary_entropy(x: f64) -> Result<Nats> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain("binary_entropy", x, "[0, 1]"));
    }
    Ok(-xlnx(x) - xlnx(1.0 - x))
}

/// Entropy for arguments already known to lie in `[0, 1]`.
#[inline]
pub(crate) fn h(x: f64) -> f64 {
    -xlnx(x) - xlnx(1.0 - x)
}

/// Binary divergence `D(x || y) = x ln(x/y) + (1-x) ln((1-x)/(1-y))`.
///
/// `y` may sit on `{0, 1}` only when the matching `x` term vanishes.
pub fn kl_bernoulli(x: f64, y: f64) -> Result<Nats> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain("kl_bernoulli", x, "x in [0, 1]"));
    }
    if !(0.0..=1.0).contains(&y) {
        return Err(Error::domain("kl_bernoulli", y, "y in [0, 1]"));
    }
    let first = if x == 0.0 {
        0.0
    } else if y == 0.0 {
        return Err(Error::domain("kl_bernoulli", y, "y > 0 when x > 0"));
    } else {
        x * (x / y).ln()
    };
    let second = if x == 1.0 {
        0.0
    } else if y == 1.0 {
        return Err(Error::domain("kl_bernoulli", y, "y < 1 when x < 1"));
    } else {
        (1.0 - x) * ((1.0 - x) / (1.0 - y)).ln()
    };
    // Rounding can push the sum a hair below zero when x is close to y.
    Ok((first + second).max(0.0))
}

/// Gilbert-Varshamov radius: the `delta` in `[0, 1/2]` with `h(delta) = ln 2 - rate`.
pub fn delta_gv(rate: Nats) -> Result<f64> {
    if !(0.0..=LN_2).contains(&rate) {
        return Err(Error::domain("delta_gv", rate, "[0, ln 2]"));
    }
    if rate == 0.0 {
        return Ok(0.5);
    }
    if rate == LN_2 {
        return Ok(0.0);
    }
    let target = LN_2 - rate;
    bisect_root(
        |d| h(d) - target,
        &Bracket {
            lo: 0.0,
            hi: 0.5,
            tol: 1e-15,
        },
    )
}

/// Bisection for a sign change of `f` on `[b.lo, b.hi]`.
///
/// Halves the interval until its width drops to `b.tol` or the midpoint is
/// no longer representable between the endpoints.
pub fn bisect_root<F>(f: F, b: &Bracket) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let (mut lo, mut hi) = (b.lo, b.hi);
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.is_nan() || f_hi.is_nan() || f_lo.signum() == f_hi.signum() {
        return Err(Error::Bracket { lo, hi, f_lo, f_hi });
    }
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= b.tol || mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Maximizes `f` on `[b.lo, b.hi]`: a 512-cell grid (endpoints included)
/// followed by golden-section refinement over the two cells around the best
/// grid point. Unimodality is not assumed.
///
/// Non-finite or NaN values are treated as `-inf`, so callers can mark
/// infeasible points that way.
pub fn maximize_scalar<F>(f: F, b: &Bracket) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    maximize_scalar_with_grid(f, b, DEFAULT_GRID)
}

/// [`maximize_scalar`] with an explicit number of grid cells.
pub fn maximize_scalar_with_grid<F>(f: F, b: &Bracket, cells: usize) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let cells = cells.max(2);
    let eval = |x: f64| {
        let v = f(x);
        if v.is_nan() {
            f64::NEG_INFINITY
        } else {
            v
        }
    };
    let point = |i: usize| {
        if i == cells {
            b.hi
        } else {
            b.lo + (b.hi - b.lo) * (i as f64) / (cells as f64)
        }
    };

    let mut best_i = 0;
    let mut best_v = f64::NEG_INFINITY;
    for i in 0..=cells {
        let v = eval(point(i));
        if v > best_v {
            best_i = i;
            best_v = v;
        }
    }
    let mut best_x = point(best_i);
    if best_v == f64::NEG_INFINITY {
        return (best_x, best_v);
    }

    let a = point(best_i.saturating_sub(1));
    let c = point((best_i + 1).min(cells));
    let (x, v) = golden_section_max(&eval, a, c, b.tol);
    if v > best_v {
        best_x = x;
        best_v = v;
    }
    (best_x, best_v)
}

/// Golden-section search for a maximum of `f` on `[a, b]`, returning the best
/// point evaluated.
fn golden_section_max<F>(f: &F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    const INV_PHI: f64 = 0.618_033_988_749_894_9;

    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let (mut best_x, mut best_v) = if f1 >= f2 { (x1, f1) } else { (x2, f2) };

    for _ in 0..MAX_BISECTIONS {
        if b - a <= tol {
            break;
        }
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
            if f1 > best_v {
                best_x = x1;
                best_v = f1;
            }
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
            if f2 > best_v {
                best_x = x2;
                best_v = f2;
            }
        }
    }
    (best_x, best_v)
}
