//! Error exponents of the BSC without feedback: capacity, sphere-packing,
//! random-coding and expurgation bounds for list-`L` decoding, the critical
//! rates that separate their regimes, and the rate `R2(p)` above which the
//! reliability function is known exactly.
//!
//! Rates and exponents are in nats per channel use. Functions taking a
//! crossover `p` require `0 < p < 1/2`.

use std::f64::consts::LN_2;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::{
    delta_gv, h, kl_bernoulli, maximize_scalar, Bracket, Nats, Prob, BISECT_TOL, OPTIMIZE_TOL,
};

/// Slack allowed when a rate computed elsewhere lands a rounding error past a
/// domain edge such as `C(p)`.
const RATE_SLACK: f64 = 1e-12;

/// Starting upper limit for the expurgation parameter.
const RHO_START: f64 = 64.0;

/// The upper limit stops growing once the objective gains less than this
/// over the last decade of `rho`.
const RHO_DECADE_GAIN: f64 = 1e-10;

const RHO_CEILING: f64 = 1e18;

/// Decoder list size `L >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct ListSize(u32);

impl ListSize {
    pub const ONE: ListSize = ListSize(1);
    pub const TWO: ListSize = ListSize(2);

    pub fn new(l: u32) -> Result<Self> {
        if l >= 1 {
            Ok(ListSize(l))
        } else {
            Err(Error::domain("list size", l as f64, "L >= 1"))
        }
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }
}

impl TryFrom<u32> for ListSize {
    type Error = Error;

    fn try_from(l: u32) -> Result<Self> {
        ListSize::new(l)
    }
}

impl From<ListSize> for u32 {
    fn from(l: ListSize) -> u32 {
        l.0
    }
}

impl fmt::Display for ListSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Expurgation parameter `rho >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct RhoParam(f64);

impl RhoParam {
    pub fn new(rho: f64) -> Result<Self> {
        if rho >= 1.0 && rho.is_finite() {
            Ok(RhoParam(rho))
        } else {
            Err(Error::domain("rho", rho, "[1, inf)"))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

/// Which no-feedback exponent to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    RandomCoding,
    Expurgated,
    SpherePacking,
    /// `max(E_r, E_ex)`.
    Low,
}

/// One point on an exponent curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentQuery {
    pub rate: Nats,
    pub p: Prob,
    pub list: ListSize,
    pub kind: BoundKind,
}

impl ExponentQuery {
    pub fn new(rate: Nats, p: f64, list: ListSize, kind: BoundKind) -> Result<Self> {
        check_crossover(p)?;
        if !(rate >= 0.0) {
            return Err(Error::domain("rate", rate, "[0, inf)"));
        }
        Ok(ExponentQuery {
            rate,
            p: Prob::new(p)?,
            list,
            kind,
        })
    }

    pub fn evaluate(&self) -> Result<Nats> {
        let p = self.p.get();
        match self.kind {
            BoundKind::RandomCoding => e_r(self.rate, p, self.list),
            BoundKind::Expurgated => e_ex(self.rate, p, self.list),
            BoundKind::SpherePacking => e_sp(self.rate, p),
            BoundKind::Low => e_low(self.rate, p, self.list),
        }
    }
}

pub(crate) fn check_crossover(p: f64) -> Result<()> {
    if p > 0.0 && p < 0.5 {
        Ok(())
    } else {
        Err(Error::domain("crossover probability", p, "(0, 1/2)"))
    }
}

fn check_rate_below_capacity(rate: Nats, p: f64) -> Result<()> {
    if !(rate >= 0.0) {
        return Err(Error::domain("rate", rate, "[0, C(p)]"));
    }
    if rate > capacity(p)? + RATE_SLACK {
        return Err(Error::domain("rate", rate, "[0, C(p)]"));
    }
    Ok(())
}

/// `C(p) = ln 2 - h(p)`.
pub fn capacity(p: f64) -> Result<Nats> {
    check_crossover(p)?;
    Ok(LN_2 - h(p))
}

/// Sphere-packing exponent `D(delta_GV(R) || p)`, zero at and above capacity.
pub fn e_sp(rate: Nats, p: f64) -> Result<Nats> {
    check_crossover(p)?;
    if !(0.0..=LN_2).contains(&rate) {
        return Err(Error::domain("e_sp rate", rate, "[0, ln 2]"));
    }
    if rate >= capacity(p)? {
        return Ok(0.0);
    }
    kl_bernoulli(delta_gv(rate)?, p)
}

/// `p^(1/(L+1)) + q^(1/(L+1))`.
fn root_sum(p: f64, list: ListSize) -> f64 {
    let e = 1.0 / (list.get() as f64 + 1.0);
    p.powf(e) + (1.0 - p).powf(e)
}

/// Critical rate of list-`L` decoding, above which `E_r = E_sp`.
pub fn r_crit(p: f64, list: ListSize) -> Result<Nats> {
    check_crossover(p)?;
    let e = 1.0 / (list.get() as f64 + 1.0);
    let x = p.powf(e) / root_sum(p, list);
    Ok(LN_2 - h(x))
}

/// Random-coding exponent for list size `L`: the straight-line branch
/// `L(ln 2 - R) - (1+L) ln[p^(1/(1+L)) + q^(1/(1+L))]` below `R_crit,L`,
/// sphere packing above.
pub fn e_r(rate: Nats, p: f64, list: ListSize) -> Result<Nats> {
    check_crossover(p)?;
    check_rate_below_capacity(rate, p)?;
    if rate <= r_crit(p, list)? {
        let l = list.get() as f64;
        Ok(l * (LN_2 - rate) - (1.0 + l) * root_sum(p, list).ln())
    } else {
        e_sp(rate.min(LN_2), p)
    }
}

/// The coefficients behind `f(p, L, rho)`: binomial weights `C(L+1, i)` and
/// `ln a_i` for `i = 1..=L`, with `a_i = p (q/p)^(i/(L+1)) + q (p/q)^(i/(L+1))`.
#[derive(Debug, Clone)]
struct GallagerTerms {
    list: u32,
    weights: Vec<f64>,
    log_a: Vec<f64>,
}

impl GallagerTerms {
    fn new(p: f64, list: ListSize) -> Self {
        let l = list.get();
        let lp = p.ln();
        let lq = (1.0 - p).ln();
        let mut weights = Vec::with_capacity(l as usize);
        let mut log_a = Vec::with_capacity(l as usize);
        let mut binom = 1.0;
        for i in 1..=l {
            binom *= (l + 2 - i) as f64 / i as f64;
            let s = i as f64 / (l as f64 + 1.0);
            let x = lp * (1.0 - s) + lq * s;
            let y = lq * (1.0 - s) + lp * s;
            let m = x.max(y);
            log_a.push(m + ((x - m).exp() + (y - m).exp()).ln());
            weights.push(binom);
        }
        GallagerTerms {
            list: l,
            weights,
            log_a,
        }
    }

    /// `f - 1`, computed without cancellation.
    fn f_minus_one(&self, rho: f64) -> f64 {
        let sum: f64 = self
            .weights
            .iter()
            .zip(&self.log_a)
            .map(|(w, la)| w * (la / rho).exp_m1())
            .sum();
        sum / 2f64.powi(self.list as i32 + 1)
    }

    fn ln_f(&self, rho: f64) -> f64 {
        self.f_minus_one(rho).ln_1p()
    }

    /// `-rho L R - rho ln f(p, L, rho)`.
    fn objective(&self, rate: f64, rho: f64) -> f64 {
        -rho * (self.list as f64 * rate + self.ln_f(rho))
    }
}

/// `f(p, L, rho) = 2^-(L+1) {2 + sum_i C(L+1, i) a_i^(1/rho)}`.
pub fn gallager_f(p: f64, list: ListSize, rho: RhoParam) -> Result<f64> {
    check_crossover(p)?;
    Ok(1.0 + GallagerTerms::new(p, list).f_minus_one(rho.get()))
}

/// The coefficients `a_1..a_L` of [`gallager_f`].
pub fn gallager_a(p: f64, list: ListSize) -> Result<Vec<f64>> {
    check_crossover(p)?;
    Ok(GallagerTerms::new(p, list)
        .log_a
        .iter()
        .map(|la| la.exp())
        .collect())
}

/// The expurgation objective `-rho L R - rho ln f(p, L, rho)` at a single `rho`.
pub fn expurgation_objective(rate: Nats, p: f64, list: ListSize, rho: RhoParam) -> Result<f64> {
    check_crossover(p)?;
    Ok(GallagerTerms::new(p, list).objective(rate, rho.get()))
}

/// Expurgated exponent `max_{rho >= 1} {-rho L R - rho ln f(p, L, rho)}`.
///
/// The search runs in `ln rho`. Its upper limit starts at 64 and doubles
/// until the objective gains less than 1e-10 between `rho_max / 10` and
/// `rho_max`; below `R_min,L` the supremum is only reached as `rho -> inf`.
pub fn e_ex(rate: Nats, p: f64, list: ListSize) -> Result<Nats> {
    Ok(e_ex_with_rho(rate, p, list)?.1)
}

/// [`e_ex`] together with the maximizing `rho`.
pub fn e_ex_with_rho(rate: Nats, p: f64, list: ListSize) -> Result<(f64, Nats)> {
    check_crossover(p)?;
    if !(rate >= 0.0) {
        return Err(Error::domain("e_ex rate", rate, "[0, inf)"));
    }
    let terms = GallagerTerms::new(p, list);
    let obj = |rho: f64| terms.objective(rate, rho);

    let mut rho_max = RHO_START;
    while rho_max < RHO_CEILING && obj(rho_max) - obj(rho_max / 10.0) >= RHO_DECADE_GAIN {
        rho_max *= 2.0;
    }

    let bracket = Bracket::new(0.0, rho_max.ln(), OPTIMIZE_TOL)?;
    let (u, v) = maximize_scalar(|u| obj(u.exp()), &bracket);
    Ok((u.exp(), v))
}

/// `max(E_r, E_ex)`, the best known no-feedback lower bound for list size `L`.
pub fn e_low(rate: Nats, p: f64, list: ListSize) -> Result<Nats> {
    let r = e_r(rate, p, list)?;
    let x = e_ex(rate, p, list)?;
    Ok(r.max(x))
}

/// Rate below which expurgation strictly improves on random coding.
pub fn r_min(p: f64, list: ListSize) -> Result<Nats> {
    check_crossover(p)?;
    let l = list.get() as f64;
    let terms = GallagerTerms::new(p, list);
    let s_pow = root_sum(p, list).powf(l + 1.0);
    let weighted: f64 = terms
        .weights
        .iter()
        .zip(&terms.log_a)
        .map(|(w, la)| w * la.exp() * la)
        .sum();
    Ok(LN_2 - (l + 1.0) / l * root_sum(p, list).ln() + weighted / (2.0 * l * s_pow))
}

/// Closed forms of the expurgated exponent on `[0, R_min,L]` for `L = 1, 2`:
/// `delta_GV(R)/2 ln(1/(4pq))` and `-v ln a_1` with
/// `ln 4 - h(v) - v ln 3 = 2R`, `0 <= v <= 3/4`.
pub fn e_ex_low_rate(rate: Nats, p: f64, list: ListSize) -> Result<Nats> {
    check_crossover(p)?;
    if !(rate >= 0.0) || rate > r_min(p, list)? + RATE_SLACK {
        return Err(Error::domain("e_ex_low_rate rate", rate, "[0, R_min,L(p)]"));
    }
    let q = 1.0 - p;
    match list.get() {
        1 => Ok(delta_gv(rate)? / 2.0 * (1.0 / (4.0 * p * q)).ln()),
        2 => {
            let v = if rate == 0.0 {
                0.75
            } else {
                let g = |v: f64| 4f64.ln() - h(v) - v * 3f64.ln() - 2.0 * rate;
                crate::math::bisect_root(g, &Bracket::new(0.0, 0.75, 1e-15)?)?
            };
            let a1 = p.cbrt() * q.cbrt().powi(2) + p.cbrt().powi(2) * q.cbrt();
            Ok(-v * a1.ln())
        }
        l => Err(Error::domain("e_ex_low_rate list size", l as f64, "{1, 2}")),
    }
}

/// Two-codeword exponent `E_2(p) = (1/2) ln(1/(4pq))`.
pub fn e2(p: f64) -> Result<Nats> {
    check_crossover(p)?;
    Ok(0.5 * (1.0 / (4.0 * p * (1.0 - p))).ln())
}

/// Zero-rate exponent with noiseless feedback,
/// `-ln(p^(1/3) q^(2/3) + p^(2/3) q^(1/3))`.
pub fn berlekamp_zero_rate(p: f64) -> Result<Nats> {
    check_crossover(p)?;
    let (a, b) = (p.cbrt(), (1.0 - p).cbrt());
    Ok(-(a * b * b + a * a * b).ln())
}

/// The objective minimized over `tau` in the definition of `R2(p)`:
/// `[alpha(1-alpha) - tau(1-tau)] / [1 + 2 sqrt(tau(1-tau))]` where
/// `h(alpha) = h(tau) + ln 2 - R`. `None` when no such `alpha <= 1/2` exists.
pub fn r2_objective(rate: Nats, tau: f64) -> Option<f64> {
    if !(0.0..=0.5).contains(&tau) || !(0.0..=LN_2).contains(&rate) {
        return None;
    }
    let slack = rate - h(tau);
    if slack < 0.0 {
        return None;
    }
    let alpha = delta_gv(slack).ok()?;
    let st = tau * (1.0 - tau);
    Some((alpha * (1.0 - alpha) - st) / (1.0 + 2.0 * st.sqrt()))
}

/// Minimum of [`r2_objective`] over feasible `tau`, i.e. `tau` with `h(tau) <= R`.
pub fn r2_inner_min(rate: Nats) -> Result<f64> {
    if !(0.0..=LN_2).contains(&rate) {
        return Err(Error::domain("r2 rate", rate, "[0, ln 2]"));
    }
    // Largest feasible tau: h(tau) = R on [0, 1/2].
    let tau_max = delta_gv(LN_2 - rate)?;
    if tau_max <= 0.0 {
        return Ok(r2_objective(rate, 0.0).expect("tau = 0 is always feasible"));
    }
    let bracket = Bracket::new(0.0, tau_max, OPTIMIZE_TOL * 1e-3)?;
    let (_, neg) = maximize_scalar(
        |tau| r2_objective(rate, tau).map_or(f64::NEG_INFINITY, |g| -g),
        &bracket,
    );
    Ok(-neg)
}

/// The rate `R2(p)` above which `E(R, p)` is known exactly: the root in
/// `(0, R_crit(p))` of `r2_inner_min(R) = sqrt(pq) / (1 + 2 sqrt(pq))`.
pub fn r2(p: f64) -> Result<Nats> {
    check_crossover(p)?;
    let s = (p * (1.0 - p)).sqrt();
    let target = s / (1.0 + 2.0 * s);
    let rc = r_crit(p, ListSize::ONE)?;
    let gap = |rate: f64| r2_inner_min(rate).map_or(f64::NAN, |m| m - target);
    crate::math::bisect_root(gap, &Bracket::new(0.0, rc, BISECT_TOL)?).map_err(|e| match e {
        Error::Bracket { .. } => Error::Convergence {
            what: "r2",
            reason: format!("no sign change on (0, R_crit) for p = {p}"),
        },
        other => other,
    })
}
