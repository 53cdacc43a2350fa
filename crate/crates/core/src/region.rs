//! All-temperature convergence criterion for the BEG polymer gas and the
//! resulting analyticity region.
//!
//! With `δ = α(x,β) e^{β h(y)}`, `ε = 1 - e^{-β(1+|y|)}` and
//! `r = 8 d e δ ε`, the criterion (FP parameter `a = log 2`) reads
//!
//! ```text
//! 4 δ · (-r - ln(1 - r)) / r ≤ 1,      r < 1.
//! ```
//!
//! Bounding `δ` by 1 (for `y > -1`) or by 1/3 (for `y ≤ -1`) reduces it to
//! `δε ≤ x*/(8de)` where `x*` solves `-ln(1-x)/x = 5/4` or `7/4`, and
//! maximising `e^{-k1 β}(1 - e^{-k2 β})` over `β` yields the polygonal
//! boundary returned by [`region_boundary`].

use std::f64::consts::E;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{in_disordered_region, ModelParams};

/// Decimal constant in `k = (59.57 d - 1) / (2d)`.
pub const K_DECIMAL: f64 = 59.57;
/// The alternative decimal quoted alongside the region boundary.
pub const K_DECIMAL_ALT: f64 = 59.56;
/// Decimal constant in `kbar = (30.52 d - 1) / (2d)`.
pub const KBAR_DECIMAL: f64 = 30.52;
/// `C_+ / d` as rounded in the derivation.
pub const C_PLUS_DECIMAL: f64 = 58.57;
/// `C_- / d` as rounded in the derivation.
pub const C_MINUS_DECIMAL: f64 = 30.52;
/// Rounded root of `-ln(1-x)/x = 5/4` used in the derivation.
pub const ROOT_54_DECIMAL: f64 = 0.37137;
/// Rounded root of `-ln(1-x)/x = 7/4` used in the derivation.
pub const ROOT_74_DECIMAL: f64 = 0.7127;

/// `log α(x, β) = 2dβx - log(1 + 2 e^{2dβx})`.
pub fn log_alpha(x: f64, beta: f64, d: usize) -> f64 {
    let t = 2.0 * d as f64 * beta * x;
    if t > 0.0 {
        -(2.0 + (-t).exp()).ln()
    } else {
        t - (2.0 * t.exp()).ln_1p()
    }
}

/// `α(x, β) = e^{2dβx} / (1 + 2 e^{2dβx})`.
pub fn alpha(x: f64, beta: f64, d: usize) -> f64 {
    let t = 2.0 * d as f64 * beta * x;
    if t > 0.0 {
        1.0 / ((-t).exp() + 2.0)
    } else {
        let e = t.exp();
        e / (1.0 + 2.0 * e)
    }
}

/// Stability constant `h(y)`: `d(1+y)` for `y > -1`, else 0.
pub fn stability_constant(y: f64, d: usize) -> f64 {
    if y > -1.0 {
        d as f64 * (1.0 + y)
    } else {
        0.0
    }
}

/// `f(x) = -ln(1 - x) / x` on `(0, 1)`; increasing from 1 to `+∞`.
pub fn condition_function(x: f64) -> f64 {
    -(-x).ln_1p() / x
}

/// `Σ_{n≥2} r^{n-1} / n = (-r - ln(1-r)) / r` for `0 ≤ r < 1`.
pub fn tail_series(r: f64) -> f64 {
    if r == 0.0 {
        return 0.0;
    }
    if r > 0.1 {
        return (-r - (-r).ln_1p()) / r;
    }
    let mut sum = 0.0;
    let mut power = r;
    let mut n = 2.0;
    loop {
        let term = power / n;
        sum += term;
        if term <= 1e-17 * sum {
            return sum;
        }
        power *= r;
        n += 1.0;
    }
}

/// Free parameter `a > 0` of the Fernandez-Procacci criterion. The default
/// is `a = log 2`; other values are for exploration only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriterionParameter {
    /// `e^a`
    growth: f64,
}

impl Default for CriterionParameter {
    fn default() -> Self {
        CriterionParameter { growth: 2.0 }
    }
}

impl CriterionParameter {
    pub fn from_a(a: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::domain(format!("criterion parameter a must be > 0, got {a}")));
        }
        Ok(CriterionParameter { growth: a.exp() })
    }

    pub fn a(&self) -> f64 {
        self.growth.ln()
    }

    /// `2 q δ S(r) / (q - 1)` with `q = e^a`, `r = 4 q d e δ ε`, normalised
    /// so the criterion holds iff the value is `≤ 1`; `+∞` once `r ≥ 1`.
    pub fn evaluate(&self, delta: f64, epsilon: f64, d: usize) -> f64 {
        let q = self.growth;
        let r = 4.0 * q * d as f64 * E * delta * epsilon;
        if !(r < 1.0) {
            return f64::INFINITY;
        }
        2.0 * q * delta * tail_series(r) / (q - 1.0)
    }
}

/// Ingredients of the criterion at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriterionTerms {
    pub delta: f64,
    pub epsilon: f64,
    /// `8 d e δ ε`
    pub ratio: f64,
    /// Criterion value; `+∞` when `ratio ≥ 1`.
    pub value: f64,
}

impl CriterionTerms {
    pub fn satisfied(&self) -> bool {
        self.value <= 1.0
    }
}

pub fn criterion_terms(p: &ModelParams) -> CriterionTerms {
    let log_delta = log_alpha(p.x, p.beta, p.d) + p.beta * stability_constant(p.y, p.d);
    let delta = log_delta.exp();
    let epsilon = -(-p.beta * (1.0 + p.y.abs())).exp_m1();
    let ratio = 8.0 * p.d as f64 * E * delta * epsilon;
    let value = CriterionParameter::default().evaluate(delta, epsilon, p.d);
    CriterionTerms {
        delta,
        epsilon,
        ratio,
        value,
    }
}

/// `4δ(-r - ln(1-r))/r` with `a = log 2`; `+∞` when `r ≥ 1`, 0 at `β = 0`.
pub fn fp_condition_value(p: &ModelParams) -> f64 {
    criterion_terms(p).value
}

const ROOT_BRACKET: (f64, f64) = (1e-9, 1.0 - 1e-9);

/// Unique `x ∈ (0,1)` with `-ln(1-x)/x = target`, by bisection.
pub fn condition_root(target: f64) -> Result<f64> {
    let (mut lo, mut hi) = ROOT_BRACKET;
    if !(target.is_finite() && target > condition_function(lo) && target < condition_function(hi)) {
        return Err(Error::NoRoot { target });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let f = condition_function(mid) - target;
        if f.abs() <= 1e-12 || hi - lo <= f64::EPSILON {
            return Ok(mid);
        }
        if f < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Maximum of `g(β) = e^{-k1 β}(1 - e^{-k2 β})` over `β > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GMax {
    pub beta_c: f64,
    pub value: f64,
    /// `k2 / (k1 + k2)`, the coarser bound on `value`.
    pub bound: f64,
}

pub fn g(k1: f64, k2: f64, beta: f64) -> f64 {
    (-k1 * beta).exp() * -(-k2 * beta).exp_m1()
}

pub fn g_max(k1: f64, k2: f64) -> Result<GMax> {
    if !(k1 > 0.0 && k2 > 0.0 && k1.is_finite() && k2.is_finite()) {
        return Err(Error::domain(format!("g_max needs k1, k2 > 0, got ({k1}, {k2})")));
    }
    let share = k1 / (k1 + k2);
    let bound = k2 / (k1 + k2);
    Ok(GMax {
        beta_c: -share.ln() / k2,
        value: share.powf(k1 / k2) * bound,
        bound,
    })
}

/// Constants of the two reduced conditions, computed from first principles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionConstants {
    /// Root of `f(x) = 5/4`.
    pub root54: f64,
    /// Root of `f(x) = 7/4`.
    pub root74: f64,
    /// `8e / root54`, i.e. `C_+ / d`.
    pub c_plus: f64,
    /// `8e / root74`, i.e. `C_- / d`.
    pub c_minus: f64,
}

impl ConditionConstants {
    pub fn compute() -> Self {
        let root54 = condition_root(1.25).expect("5/4 lies in the bracket");
        let root74 = condition_root(1.75).expect("7/4 lies in the bracket");
        ConditionConstants {
            root54,
            root74,
            c_plus: 8.0 * E / root54,
            c_minus: 8.0 * E / root74,
        }
    }
}

/// Which affine piece of the boundary applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// `y ≥ 0`: `x = -k(y+1)`
    Upper,
    /// `-1 < y < 0`: `x = (k-1)y - k`
    Middle,
    /// `y ≤ -1`: `x = kbar(y-1)`
    Lower,
}

impl Branch {
    pub fn of(y: f64) -> Branch {
        if y >= 0.0 {
            Branch::Upper
        } else if y > -1.0 {
            Branch::Middle
        } else {
            Branch::Lower
        }
    }

    pub fn id(self) -> &'static str {
        match self {
            Branch::Upper => "upper",
            Branch::Middle => "middle",
            Branch::Lower => "lower",
        }
    }
}

/// The polygonal boundary of the analyticity region in dimension `d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionBoundary {
    pub d: usize,
    /// `(59.57 d - 1) / (2d)`
    pub k: f64,
    /// `(30.52 d - 1) / (2d)`
    pub kbar: f64,
}

impl RegionBoundary {
    /// Largest admissible `x` at the given `y`.
    pub fn x_max(&self, y: f64) -> f64 {
        match Branch::of(y) {
            Branch::Upper => -self.k * (y + 1.0),
            Branch::Middle => (self.k - 1.0) * y - self.k,
            Branch::Lower => self.kbar * (y - 1.0),
        }
    }

    /// Limits at `y = -1` of the middle branch (`-2k + 1`) and of the lower
    /// branch (`-2 kbar`).
    pub fn jump(&self) -> (f64, f64) {
        (-2.0 * self.k + 1.0, -2.0 * self.kbar)
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        x <= self.x_max(y) && in_disordered_region(x, y)
    }

    /// Samples `(y, x_max, branch)` on `[y_min, y_max]` with the given step;
    /// `y = -1` is always included so the jump is visible.
    pub fn polyline(&self, y_min: f64, y_max: f64, step: f64) -> Result<Vec<(f64, f64, Branch)>> {
        if !(step > 0.0 && step.is_finite() && y_min.is_finite() && y_max.is_finite() && y_min <= y_max) {
            return Err(Error::domain("polyline needs y_min <= y_max and a positive step"));
        }
        let count = ((y_max - y_min) / step).floor();
        if count > 1e7 {
            return Err(Error::domain("polyline would exceed 10^7 samples"));
        }
        let mut ys: Vec<f64> = (0..=count as usize).map(|i| y_min + i as f64 * step).collect();
        if (y_min..=y_max).contains(&-1.0) && !ys.iter().any(|&y| y == -1.0) {
            ys.push(-1.0);
            ys.sort_by(f64::total_cmp);
        }
        Ok(ys.into_iter().map(|y| (y, self.x_max(y), Branch::of(y))).collect())
    }
}

fn check_region_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::domain(format!("the region is defined for d >= 2, got {d}")));
    }
    Ok(())
}

/// Boundary built from the rounded decimals 59.57 and 30.52.
pub fn region_boundary(d: usize) -> Result<RegionBoundary> {
    check_region_dim(d)?;
    let two_d = 2.0 * d as f64;
    Ok(RegionBoundary {
        d,
        k: (K_DECIMAL * d as f64 - 1.0) / two_d,
        kbar: (KBAR_DECIMAL * d as f64 - 1.0) / two_d,
    })
}

/// Boundary built from `C_± = 8 e d / root`: `k = (C_+ - 1)/(2d) + 1/2`,
/// `kbar = (C_- - 1)/(2d)`. Slightly larger than [`region_boundary`].
pub fn region_boundary_first_principles(d: usize) -> Result<RegionBoundary> {
    check_region_dim(d)?;
    let c = ConditionConstants::compute();
    let two_d = 2.0 * d as f64;
    Ok(RegionBoundary {
        d,
        k: (c.c_plus * d as f64 - 1.0) / two_d + 0.5,
        kbar: (c.c_minus * d as f64 - 1.0) / two_d,
    })
}

/// Both versions of the constants side by side, plus the `k` implied by the
/// alternative 59.56 decimal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantsReport {
    pub d: usize,
    pub constants: ConditionConstants,
    pub k: f64,
    pub kbar: f64,
    pub k_first_principles: f64,
    pub kbar_first_principles: f64,
    pub k_alt_5956: f64,
    pub k_difference: f64,
    pub kbar_difference: f64,
}

pub fn constants_report(d: usize) -> Result<ConstantsReport> {
    let lit = region_boundary(d)?;
    let fp = region_boundary_first_principles(d)?;
    Ok(ConstantsReport {
        d,
        constants: ConditionConstants::compute(),
        k: lit.k,
        kbar: lit.kbar,
        k_first_principles: fp.k,
        kbar_first_principles: fp.kbar,
        k_alt_5956: (K_DECIMAL_ALT * d as f64 - 1.0) / (2.0 * d as f64),
        k_difference: lit.k - fp.k,
        kbar_difference: lit.kbar - fp.kbar,
    })
}

/// `(x, y)` lies on the analytic side of the boundary and inside `D`.
pub fn in_analytic_region(x: f64, y: f64, d: usize) -> Result<bool> {
    Ok(region_boundary(d)?.contains(x, y))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TemperatureSweep {
    pub x: f64,
    pub y: f64,
    pub d: usize,
    pub in_region: bool,
    pub points: Vec<(f64, CriterionTerms)>,
    pub max_value: f64,
    pub argmax_beta: f64,
}

impl TemperatureSweep {
    /// In-region points must satisfy the criterion at every sampled β.
    pub fn consistent(&self) -> bool {
        !self.in_region || self.max_value <= 1.0
    }
}

/// Evaluates the criterion on a grid of inverse temperatures.
pub fn all_temperature_check(x: f64, y: f64, d: usize, betas: &[f64]) -> Result<TemperatureSweep> {
    let in_region = in_analytic_region(x, y, d)?;
    let mut points = Vec::with_capacity(betas.len());
    let (mut max_value, mut argmax_beta) = (f64::NEG_INFINITY, f64::NAN);
    for &beta in betas {
        let terms = criterion_terms(&ModelParams::new(d, x, y, beta)?);
        if terms.value > max_value {
            max_value = terms.value;
            argmax_beta = beta;
        }
        points.push((beta, terms));
    }
    Ok(TemperatureSweep {
        x,
        y,
        d,
        in_region,
        points,
        max_value,
        argmax_beta,
    })
}

/// `count` log-spaced values in `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi >= lo && hi.is_finite()) || count == 0 {
        return Err(Error::domain("log grid needs 0 < lo <= hi and count >= 1"));
    }
    if count == 1 {
        return Ok(vec![lo]);
    }
    let (a, b) = (lo.ln(), hi.ln());
    Ok((0..count)
        .map(|i| {
            if i == count - 1 {
                hi
            } else {
                (a + (b - a) * i as f64 / (count - 1) as f64).exp()
            }
        })
        .collect())
}
