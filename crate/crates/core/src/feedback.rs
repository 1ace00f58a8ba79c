//! Exponents of the two-phase scheme over a forward BSC(p) with a passive
//! feedback BSC(p1): the critical feedback-noise level `p0`, the threshold
//! `t1`, the scheme exponent `T(R, p, p1, gamma)` and its maximum over the
//! switching fraction, plus the noiseless-feedback and zero-rate forms.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponents::{
    capacity, check_crossover, e2, e_ex, e_low, e_r, e_sp, gallager_a, r2, r_crit, ListSize,
};
use crate::math::{
    bisect_root, kl_bernoulli, maximize_scalar_with_grid, Bracket, Nats, Prob, BISECT_TOL,
    OPTIMIZE_TOL,
};

/// Grid size for the search over the switching fraction.
pub const GAMMA_GRID: usize = 2048;

/// Distance kept from the capacity edge `gamma = R/C(p)`.
pub const GAMMA_EDGE: f64 = 1e-6;

/// Forward and feedback crossover probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelPair {
    pub p: Prob,
    pub p1: Prob,
}

impl ChannelPair {
    pub fn new(p: f64, p1: f64) -> Result<Self> {
        check_crossover(p)?;
        if !(0.0..=0.5).contains(&p1) {
            return Err(Error::domain(
                "feedback crossover probability",
                p1,
                "[0, 1/2]",
            ));
        }
        Ok(ChannelPair {
            p: Prob::new(p)?,
            p1: Prob::new(p1)?,
        })
    }

    pub fn noiseless(p: f64) -> Result<Self> {
        ChannelPair::new(p, 0.0)
    }

    fn log_odds(&self) -> f64 {
        let p = self.p.get();
        ((1.0 - p) / p).ln()
    }
}

/// Switching fraction `gamma` and decision threshold `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchemeParams {
    pub gamma: f64,
    pub t: f64,
}

impl SchemeParams {
    pub fn new(gamma: f64, t: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma <= 1.0) {
            return Err(Error::domain("gamma", gamma, "(0, 1]"));
        }
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::domain("threshold t", t, "[0, inf)"));
        }
        Ok(SchemeParams { gamma, t })
    }
}

/// Both arguments of the scheme's min, with the operating point that produced them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundBreakdown {
    /// `gamma E_low(R/gamma, p, 2) - (gamma t / 3) ln(q/p)`.
    pub branch_list2: Nats,
    /// `gamma E_low(R/gamma, p, 1) + (1 - gamma) E_2(p)`.
    pub branch_pair: Nats,
    pub gamma_star: f64,
    pub t_star: f64,
    pub value: Nats,
}

impl BoundBreakdown {
    fn new(branch_list2: Nats, branch_pair: Nats, gamma: f64, t: f64) -> Self {
        BoundBreakdown {
            branch_list2,
            branch_pair,
            gamma_star: gamma,
            t_star: t,
            value: branch_list2.min(branch_pair),
        }
    }
}

fn check_rate(rate: Nats, upper: Nats, what: &'static str, domain: &'static str) -> Result<()> {
    if rate >= 0.0 && rate < upper {
        Ok(())
    } else {
        Err(Error::domain(what, rate, domain))
    }
}

/// `t0 = 3 [E_low(R, p, 2) - E_low(R, p, 1)] / ln(q/p)`. Zero from `R_crit(p)` up.
pub fn t0(rate: Nats, p: f64) -> Result<f64> {
    check_rate(rate, capacity(p)?, "t0 rate", "[0, C(p))")?;
    if rate >= r_crit(p, ListSize::ONE)? {
        return Ok(0.0);
    }
    let gap = e_low(rate, p, ListSize::TWO)? - e_low(rate, p, ListSize::ONE)?;
    Ok((3.0 * gap / ((1.0 - p) / p).ln()).max(0.0))
}

/// Critical feedback noise: the `p0 in (0, t0]` with `D(t0 || p0) = 2R`.
///
/// Near `R_crit` the root drops below the smallest positive double; that case
/// is reported as [`Error::Underflow`] and [`ln_p0`] still resolves it.
pub fn p0(rate: Nats, p: f64) -> Result<f64> {
    let u = ln_p0(rate, p)?;
    let v = u.exp();
    if v < f64::MIN_POSITIVE {
        return Err(Error::Underflow {
            what: "p0",
            ln_value: u,
        });
    }
    Ok(v.min(t0(rate, p)?))
}

/// `ln p0(R, p)`, finite even where `p0` itself underflows.
pub fn ln_p0(rate: Nats, p: f64) -> Result<f64> {
    let t = t0(rate, p)?;
    if rate == 0.0 {
        return Ok(t.ln());
    }
    if t <= 0.0 {
        return Err(Error::NoSolution {
            what: "p0",
            reason: format!("t0 = 0 at R = {rate}, no room below the no-feedback exponent"),
        });
    }
    let target = 2.0 * rate;
    let hi = t.ln();
    let f = |u: f64| kl_log(t, u) - target;
    // D(t0 || e^u) grows like -t0 u, so this distance always brackets the root.
    let mut width = (target + 1.0) / t + 1.0;
    while f(hi - width) <= 0.0 {
        width *= 2.0;
    }
    let lo = hi - width;
    bisect_root(f, &Bracket::new(lo, hi, 1e-14 * (1.0 + lo.abs()))?)
}

/// `D(t || e^u)` for `0 < t < 1` and `u < 0`, without forming `e^u`
/// where it would underflow.
fn kl_log(t: f64, u: f64) -> f64 {
    let head = t * (t.ln() - u);
    let tail = (1.0 - t) * ((1.0 - t).ln() - (-u.exp()).ln_1p());
    (head + tail).max(0.0)
}

/// Decision threshold: the `t1 in [p1, 1)` with `D(t1 || p1) = 2R`.
pub fn t1(rate: Nats, p1: f64) -> Result<f64> {
    if !(p1 > 0.0 && p1 <= 0.5) {
        return Err(Error::domain("t1 feedback crossover", p1, "(0, 1/2]"));
    }
    if !(rate >= 0.0) {
        return Err(Error::domain("t1 rate", rate, "[0, inf)"));
    }
    if rate == 0.0 {
        return Ok(p1);
    }
    let target = 2.0 * rate;
    if target >= -p1.ln() {
        return Err(Error::NoSolution {
            what: "t1",
            reason: format!("2R = {target} >= ln(1/p1) = {}", -p1.ln()),
        });
    }
    bisect_root(
        |t| kl_bernoulli(t, p1).expect("p1 in (0, 1/2]") - target,
        &Bracket::new(p1, 1.0, 1e-15)?,
    )
}

/// `T(R, p, p1, gamma)` with the threshold fixed at `t1(R/gamma, p1)`.
/// With `p1 = 0` the threshold and its penalty are zero.
pub fn scheme_t(rate: Nats, ch: ChannelPair, gamma: f64) -> Result<BoundBreakdown> {
    let p1 = ch.p1.get();
    let t = if p1 == 0.0 {
        0.0
    } else {
        let r = inner_rate(rate, gamma)?;
        t1(r, p1).map_err(|e| Error::Infeasible(format!("gamma = {gamma}: {e}")))?
    };
    branches(rate, ch, gamma, t)
}

/// The scheme at an explicit `(gamma, t)`. The threshold must be admissible:
/// `t > p1` and `D(t || p1) >= 2R/gamma` when the feedback is noisy.
pub fn scheme_at(rate: Nats, ch: ChannelPair, params: SchemeParams) -> Result<BoundBreakdown> {
    let p1 = ch.p1.get();
    let r = inner_rate(rate, params.gamma)?;
    if p1 > 0.0 {
        let t = params.t;
        let admissible = t > p1 && t <= 1.0 && kl_bernoulli(t, p1)? >= 2.0 * r;
        if !admissible {
            return Err(Error::Infeasible(format!(
                "threshold t = {t} needs t > p1 and D(t || p1) >= 2R/gamma = {}",
                2.0 * r
            )));
        }
    }
    branches(rate, ch, params.gamma, params.t)
}

fn inner_rate(rate: Nats, gamma: f64) -> Result<Nats> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::domain("gamma", gamma, "(0, 1]"));
    }
    if !(rate >= 0.0) {
        return Err(Error::domain("rate", rate, "[0, inf)"));
    }
    Ok(rate / gamma)
}

fn branches(rate: Nats, ch: ChannelPair, gamma: f64, t: f64) -> Result<BoundBreakdown> {
    let p = ch.p.get();
    let r = inner_rate(rate, gamma)?;
    if r >= capacity(p)? {
        return Err(Error::Infeasible(format!(
            "R/gamma = {r} is not below capacity"
        )));
    }
    let list2 = gamma * e_low(r, p, ListSize::TWO)? - gamma * t / 3.0 * ch.log_odds();
    let pair = gamma * e_low(r, p, ListSize::ONE)? + (1.0 - gamma) * e2(p)?;
    Ok(BoundBreakdown::new(list2, pair, gamma, t))
}

/// `max_gamma T(R, p, p1, gamma)` over `gamma in [R/C(p) + 1e-6, 1]`.
///
/// A 2048-cell grid locates the best cell; golden-section refinement and the
/// root of `branch_list2 - branch_pair` inside the neighbouring cells give two
/// more candidates, and the best of the three is returned.
pub fn f1_noisy(rate: Nats, ch: ChannelPair) -> Result<BoundBreakdown> {
    let p = ch.p.get();
    let c = capacity(p)?;
    check_rate(rate, c, "f1_noisy rate", "[0, C(p))")?;
    let lo = (rate / c + GAMMA_EDGE).min(1.0);

    let eval = |g: f64| scheme_t(rate, ch, g).ok();
    let score = |b: &Option<BoundBreakdown>| b.map_or(f64::NEG_INFINITY, |b| b.value);

    let step = (1.0 - lo) / GAMMA_GRID as f64;
    let gamma_at = |i: usize| {
        if i == GAMMA_GRID {
            1.0
        } else {
            lo + step * i as f64
        }
    };
    let grid: Vec<Option<BoundBreakdown>> = (0..=GAMMA_GRID).map(|i| eval(gamma_at(i))).collect();

    let mut best_i = 0;
    for (i, b) in grid.iter().enumerate() {
        if score(b) > score(&grid[best_i]) {
            best_i = i;
        }
    }
    let mut best = grid[best_i].ok_or_else(|| {
        Error::Infeasible(format!(
            "no feasible gamma at R = {rate}, p1 = {}",
            ch.p1.get()
        ))
    })?;
    if step <= 0.0 {
        return Ok(best);
    }

    let a = gamma_at(best_i.saturating_sub(1));
    let b = gamma_at((best_i + 1).min(GAMMA_GRID));
    let mut candidates = Vec::with_capacity(2);
    if let Ok(bracket) = Bracket::new(a, b, OPTIMIZE_TOL * 1e-3) {
        let (g, _) = maximize_scalar_with_grid(|g| score(&eval(g)), &bracket, 16);
        candidates.push(g);
        let gap = |g: f64| eval(g).map_or(f64::NAN, |b| b.branch_list2 - b.branch_pair);
        for (x, y) in [(a, gamma_at(best_i)), (gamma_at(best_i), b)] {
            if let Ok(br) = Bracket::new(x, y, BISECT_TOL) {
                if let Ok(root) = bisect_root(gap, &br) {
                    candidates.push(root);
                }
            }
        }
    }
    for g in candidates {
        if let Some(cand) = eval(g) {
            if cand.value > best.value {
                best = cand;
            }
        }
    }
    Ok(best)
}

/// Gap between the two noiseless branches; increasing in `gamma`.
fn noiseless_gap(rate: Nats, p: f64, gamma: f64) -> Result<f64> {
    let r = rate / gamma;
    let e2_p = e2(p)?;
    Ok(gamma * e_low(r, p, ListSize::TWO)?
        - gamma * e_low(r, p, ListSize::ONE)?
        - (1.0 - gamma) * e2_p)
}

/// Balancing switching fraction: the `gamma0 in (R/R_crit, 1)` at which the
/// two noiseless branches coincide.
pub fn gamma0(rate: Nats, p: f64) -> Result<f64> {
    let rc = r_crit(p, ListSize::ONE)?;
    check_rate(rate, rc, "gamma0 rate", "[0, R_crit(p))")?;
    if rate == 0.0 {
        // R/gamma = 0 for every gamma, so the gap is affine in gamma.
        let d = e_low(0.0, p, ListSize::TWO)? - e_low(0.0, p, ListSize::ONE)?;
        let e2_p = e2(p)?;
        return Ok(e2_p / (e2_p + d));
    }
    bisect_root(
        |g| noiseless_gap(rate, p, g).unwrap_or(f64::NAN),
        &Bracket::new(rate / rc, 1.0, BISECT_TOL)?,
    )
    .map_err(|e| Error::Convergence {
        what: "gamma0",
        reason: e.to_string(),
    })
}

/// Noiseless-feedback exponent `gamma0 E_low(R/gamma0, p, 2)`.
pub fn f1_noiseless(rate: Nats, p: f64) -> Result<Nats> {
    let g = gamma0(rate, p)?;
    Ok(g * e_low(rate / g, p, ListSize::TWO)?)
}

/// `E(0, p) = (1/4) ln(1/(4pq))`.
fn e_zero(p: f64) -> Result<Nats> {
    Ok(0.5 * e2(p)?)
}

/// `-(3/4) ln a_1`, the list-of-two expurgated exponent at zero rate.
fn e_zero_list2(p: f64) -> Result<Nats> {
    Ok(-0.75 * gallager_a(p, ListSize::TWO)?[0].ln())
}

/// Chord from `(0, E(0, p))` to `(R_crit, E_sp(R_crit, p))`.
pub fn straight_line_upper(rate: Nats, p: f64) -> Result<Nats> {
    let rc = r_crit(p, ListSize::ONE)?;
    if !(0.0..=rc).contains(&rate) {
        return Err(Error::domain("straight-line rate", rate, "[0, R_crit(p)]"));
    }
    let e0 = e_zero(p)?;
    Ok(e0 - (e0 - e_sp(rc, p)?) * rate / rc)
}

/// `gamma0` and `R` parametrised by the inner rate `u = R/gamma0`:
/// `gamma0 = E_2 / (E_2 + E_ex(u, p, 2) - E_ex(u, p, 1))`, `R = u gamma0`.
/// Agrees with [`gamma0`] only while `u <= R_crit(p, 2)`.
pub fn gamma0_parametric(u: Nats, p: f64) -> Result<(f64, Nats)> {
    let rc = r_crit(p, ListSize::ONE)?;
    if !(u > 0.0 && u < rc) {
        return Err(Error::domain("parametric rate u", u, "(0, R_crit(p))"));
    }
    let e2_p = e2(p)?;
    let g = e2_p / (e2_p + e_ex(u, p, ListSize::TWO)? - e_ex(u, p, ListSize::ONE)?);
    Ok((g, u * g))
}

/// Zero-rate scheme exponent with noisy feedback,
/// `2E(0)[E(0,2) - x] / (E(0,2) + E(0) - x)` where `x = p1 ln(q/p) / 3`.
pub fn zero_rate_f1(ch: ChannelPair) -> Result<Nats> {
    let p = ch.p.get();
    let e0 = e_zero(p)?;
    let e02 = e_zero_list2(p)?;
    let x = ch.p1.get() * ch.log_odds() / 3.0;
    if e02 - x <= 0.0 {
        return Err(Error::domain(
            "zero-rate feedback crossover",
            ch.p1.get(),
            "p1 ln(q/p)/3 < E(0, p, 2)",
        ));
    }
    Ok(2.0 * e0 * (e02 - x) / (e02 + e0 - x))
}

/// `p11(p, alpha) = 3 alpha [E(0, p, 2) - E(0, p)] / ln(q/p)`, a feedback
/// noise level that keeps a fraction of the zero-rate improvement.
pub fn p11(p: f64, alpha: f64) -> Result<f64> {
    check_crossover(p)?;
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::domain("alpha", alpha, "[0, 1)"));
    }
    Ok(3.0 * alpha * (e_zero_list2(p)? - e_zero(p)?) / ((1.0 - p) / p).ln())
}

/// Small-`eps` form of `t0` at `p = (1 - eps)/2`, with `C = eps^2 / 2`.
pub fn t0_asymptotic(rate: Nats, eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::domain("eps", eps, "(0, 1)"));
    }
    if !(rate >= 0.0) {
        return Err(Error::domain("rate", rate, "[0, inf)"));
    }
    let c = eps * eps / 2.0;
    let v = if rate <= c / 9.0 {
        c - 6.0 * rate
    } else if rate <= c / 4.0 {
        3.0 * (c.sqrt() - 2.0 * rate.sqrt()).powi(2)
    } else {
        0.0
    };
    Ok(v / (4.0 * eps))
}

/// The no-feedback exponent the scheme is compared against: `E_ex(R, p)`
/// below `R2(p)`, where the true value is unknown, and the exact
/// `E(R, p) = E_r(R, p)` from `R2(p)` up.
pub fn no_feedback_reference(rate: Nats, p: f64) -> Result<Nats> {
    if rate <= r2(p)? {
        e_ex(rate, p, ListSize::ONE)
    } else {
        e_r(rate, p, ListSize::ONE)
    }
}
