//! Finite-volume BEG model with free (zero) boundary conditions.
//!
//! The Hamiltonian on a finite `Λ ⊂ Z^d` is
//!
//! ```text
//! H(σ) = -Σ_{ {u,v} ⊂ Λ, |u-v|_1 = 1 } (σ_u σ_v + y σ_u² σ_v²) - 2d x Σ_u σ_u²
//! ```
//!
//! with `σ_u ∈ {-1, 0, +1}`. Configurations are enumerated with a base-3
//! odometer over the site list (site 0 turns fastest, digit order
//! `-1, 0, +1`), so every "first minimiser" reported here is reproducible.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};

/// A point of `Z^d`.
pub type Point = Vec<i32>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub enum Spin {
    Down,
    Zero,
    Up,
}

impl Spin {
    pub const ALL: [Spin; 3] = [Spin::Down, Spin::Zero, Spin::Up];

    pub fn value(self) -> i8 {
        match self {
            Spin::Down => -1,
            Spin::Zero => 0,
            Spin::Up => 1,
        }
    }

    pub fn flipped(self) -> Spin {
        match self {
            Spin::Down => Spin::Up,
            Spin::Zero => Spin::Zero,
            Spin::Up => Spin::Down,
        }
    }
}

impl TryFrom<i8> for Spin {
    type Error = Error;

    fn try_from(v: i8) -> Result<Self> {
        match v {
            -1 => Ok(Spin::Down),
            0 => Ok(Spin::Zero),
            1 => Ok(Spin::Up),
            _ => Err(Error::domain(format!("spin value {v} not in {{-1, 0, 1}}"))),
        }
    }
}

impl From<Spin> for i8 {
    fn from(s: Spin) -> i8 {
        s.value()
    }
}

/// Dimension, couplings and inverse temperature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub d: usize,
    pub x: f64,
    pub y: f64,
    pub beta: f64,
}

impl ModelParams {
    pub fn new(d: usize, x: f64, y: f64, beta: f64) -> Result<Self> {
        if d < 1 {
            return Err(Error::domain("dimension must be at least 1"));
        }
        if !(x.is_finite() && y.is_finite()) {
            return Err(Error::domain("couplings must be finite"));
        }
        if !(beta.is_finite() && beta >= 0.0) {
            return Err(Error::domain(format!("beta must be finite and >= 0, got {beta}")));
        }
        Ok(ModelParams { d, x, y, beta })
    }

    pub fn in_disordered_region(&self) -> bool {
        in_disordered_region(self.x, self.y)
    }
}

/// `x < 0` and `1 + 2x + y < 0`: the all-zero configuration is the unique ground state.
pub fn in_disordered_region(x: f64, y: f64) -> bool {
    x < 0.0 && 1.0 + 2.0 * x + y < 0.0
}

/// Ordered list of distinct points of `Z^d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Point>", into = "Vec<Point>")]
pub struct SiteSet {
    dim: usize,
    points: Vec<Point>,
}

pub fn l1_distance(a: &[i32], b: &[i32]) -> i64 {
    a.iter().zip(b).map(|(&u, &v)| (u as i64 - v as i64).abs()).sum()
}

pub fn are_adjacent(a: &[i32], b: &[i32]) -> bool {
    l1_distance(a, b) == 1
}

impl SiteSet {
    pub fn new(dim: usize, points: Vec<Point>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::domain("site dimension must be at least 1"));
        }
        let mut seen = HashSet::with_capacity(points.len());
        for p in &points {
            if p.len() != dim {
                return Err(Error::domain(format!(
                    "point {p:?} has {} coordinates, expected {dim}",
                    p.len()
                )));
            }
            if !seen.insert(p.as_slice()) {
                return Err(Error::domain(format!("duplicate site {p:?}")));
            }
        }
        Ok(SiteSet { dim, points })
    }

    /// Axis-aligned box with the given side lengths, anchored at the origin.
    /// Sites are listed with the first coordinate turning fastest.
    pub fn cuboid(sides: &[usize]) -> Result<Self> {
        if sides.is_empty() || sides.contains(&0) {
            return Err(Error::domain("box sides must be positive"));
        }
        let total = sides
            .iter()
            .try_fold(1usize, |acc, &s| acc.checked_mul(s))
            .filter(|&t| t <= 1 << 16)
            .ok_or_else(|| Error::domain("box is too large"))?;
        let mut points = Vec::with_capacity(total);
        for mut idx in 0..total {
            let mut p = Vec::with_capacity(sides.len());
            for &s in sides {
                p.push((idx % s) as i32);
                idx /= s;
            }
            points.push(p);
        }
        SiteSet::new(sides.len(), points)
    }

    /// Parse a box spec like `3x2` into a box in dimension `dim`; missing
    /// trailing sides are 1.
    pub fn parse_box(spec: &str, dim: usize) -> Result<Self> {
        let mut sides = spec
            .trim()
            .split(['x', 'X'])
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad box side `{t}` in `{spec}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        if sides.len() > dim {
            return Err(Error::domain(format!(
                "box `{spec}` has {} sides but dimension is {dim}",
                sides.len()
            )));
        }
        sides.resize(dim, 1);
        SiteSet::cuboid(&sides)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("points always serialize")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &[i32] {
        &self.points[i]
    }

    pub fn contains(&self, p: &[i32]) -> bool {
        self.points.iter().any(|q| q == p)
    }

    pub fn is_adjacent(&self, i: usize, j: usize) -> bool {
        are_adjacent(&self.points[i], &self.points[j])
    }

    /// Unordered adjacent pairs `(i, j)` with `i < j`.
    pub fn adjacent_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if self.is_adjacent(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Whether the nearest-neighbour graph on the sites is connected.
    pub fn is_connected(&self) -> bool {
        let n = self.len();
        if n <= 1 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if !seen[j] && self.is_adjacent(i, j) {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn translated(&self, offset: &[i32]) -> Result<Self> {
        if offset.len() != self.dim {
            return Err(Error::domain("offset dimension mismatch"));
        }
        let points = self
            .points
            .iter()
            .map(|p| p.iter().zip(offset).map(|(a, b)| a + b).collect())
            .collect();
        Ok(SiteSet {
            dim: self.dim,
            points,
        })
    }

    /// Sub-list of sites selected by `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> SiteSet {
        SiteSet {
            dim: self.dim,
            points: indices.iter().map(|&i| self.points[i].clone()).collect(),
        }
    }

    /// Sorted points translated so the lexicographically least point is the origin.
    pub fn canonical_shape(&self) -> Vec<Point> {
        let mut pts = self.points.clone();
        pts.sort();
        if let Some(first) = pts.first().cloned() {
            for p in &mut pts {
                for (c, o) in p.iter_mut().zip(&first) {
                    *c -= o;
                }
            }
        }
        pts
    }
}

impl TryFrom<Vec<Point>> for SiteSet {
    type Error = Error;

    fn try_from(points: Vec<Point>) -> Result<Self> {
        let dim = points
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::domain("an empty site list has no dimension"))?;
        SiteSet::new(dim, points)
    }
}

impl From<SiteSet> for Vec<Point> {
    fn from(s: SiteSet) -> Self {
        s.points
    }
}

impl FromStr for SiteSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SiteSet::from_json(s)
    }
}

/// Spins aligned with the site order of a [`SiteSet`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpinConfiguration {
    spins: Vec<Spin>,
}

impl SpinConfiguration {
    pub fn new(sites: &SiteSet, spins: Vec<Spin>) -> Result<Self> {
        if spins.len() != sites.len() {
            return Err(Error::domain(format!(
                "configuration has {} spins for {} sites",
                spins.len(),
                sites.len()
            )));
        }
        Ok(SpinConfiguration { spins })
    }

    pub fn from_values(sites: &SiteSet, values: &[i8]) -> Result<Self> {
        let spins = values
            .iter()
            .map(|&v| Spin::try_from(v))
            .collect::<Result<Vec<_>>>()?;
        SpinConfiguration::new(sites, spins)
    }

    pub fn uniform(sites: &SiteSet, s: Spin) -> Self {
        SpinConfiguration {
            spins: vec![s; sites.len()],
        }
    }

    pub fn spins(&self) -> &[Spin] {
        &self.spins
    }

    pub fn len(&self) -> usize {
        self.spins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spins.is_empty()
    }

    pub fn flipped(&self) -> Self {
        SpinConfiguration {
            spins: self.spins.iter().map(|s| s.flipped()).collect(),
        }
    }

    pub(crate) fn check_matches(&self, sites: &SiteSet) -> Result<()> {
        if self.spins.len() != sites.len() {
            return Err(Error::domain(format!(
                "configuration has {} spins for {} sites",
                self.spins.len(),
                sites.len()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for SpinConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.spins {
            f.write_str(match s {
                Spin::Down => "-",
                Spin::Zero => "0",
                Spin::Up => "+",
            })?;
        }
        Ok(())
    }
}

/// `V = -(s_x s_y + y)` for nearest neighbours, zero otherwise.
pub fn pair_potential(sx: Spin, sy: Spin, adjacent: bool, y: f64) -> f64 {
    if adjacent {
        -(f64::from(sx.value() * sy.value()) + y)
    } else {
        0.0
    }
}

fn check_dims(sites: &SiteSet, p: &ModelParams) -> Result<()> {
    if sites.dim() != p.d {
        return Err(Error::domain(format!(
            "sites live in Z^{} but parameters have d = {}",
            sites.dim(),
            p.d
        )));
    }
    Ok(())
}

/// Energy of one configuration; each adjacent unordered pair counted once.
pub fn hamiltonian(cfg: &SpinConfiguration, sites: &SiteSet, p: &ModelParams) -> Result<f64> {
    cfg.check_matches(sites)?;
    check_dims(sites, p)?;
    let s: Vec<f64> = cfg.spins.iter().map(|s| f64::from(s.value())).collect();
    let pair: f64 = sites
        .adjacent_pairs()
        .into_iter()
        .map(|(i, j)| s[i] * s[j] + p.y * s[i] * s[i] * s[j] * s[j])
        .sum();
    let single: f64 = s.iter().map(|v| v * v).sum();
    Ok(-pair - 2.0 * p.d as f64 * p.x * single)
}

/// Streaming `log Σ exp(v_i)`.
#[derive(Debug, Clone, Copy)]
struct LogSumExp {
    max: f64,
    sum: f64,
}

impl LogSumExp {
    const EMPTY: LogSumExp = LogSumExp {
        max: f64::NEG_INFINITY,
        sum: 0.0,
    };

    fn push(&mut self, v: f64) {
        if v > self.max {
            self.sum = self.sum * (self.max - v).exp() + 1.0;
            self.max = v;
        } else {
            self.sum += (v - self.max).exp();
        }
    }

    fn merge(self, other: LogSumExp) -> LogSumExp {
        if other.max == f64::NEG_INFINITY {
            return self;
        }
        if self.max == f64::NEG_INFINITY {
            return other;
        }
        let max = self.max.max(other.max);
        LogSumExp {
            max,
            sum: self.sum * (self.max - max).exp() + other.sum * (other.max - max).exp(),
        }
    }

    fn value(self) -> f64 {
        self.max + self.sum.ln()
    }
}

/// Site count at which the configuration space is split into independent chunks.
const CHUNK_SITES: usize = 4;

/// Visits every configuration of `free` sites (site 0 fastest), with the
/// `fixed` high sites held at the given digits. Digits map 0,1,2 to -1,0,+1.
fn for_each_config(free: usize, fixed: &[u8], mut visit: impl FnMut(&[i8])) {
    let mut spins: Vec<i8> = vec![-1; free];
    spins.extend(fixed.iter().map(|&d| d as i8 - 1));
    loop {
        visit(&spins);
        let mut i = 0;
        loop {
            if i == free {
                return;
            }
            if spins[i] < 1 {
                spins[i] += 1;
                break;
            }
            spins[i] = -1;
            i += 1;
        }
    }
}

fn digits_of(mut idx: usize, len: usize) -> Vec<u8> {
    (0..len)
        .map(|_| {
            let d = (idx % 3) as u8;
            idx /= 3;
            d
        })
        .collect()
}

/// `log Z = log Σ_σ exp(-β H(σ))` by exhaustive enumeration of all `3^N`
/// configurations.
///
/// The space is split into `3^4` chunks on the highest sites; chunks are
/// reduced in index order, so the result does not depend on the thread count.
pub fn brute_force_log_partition(sites: &SiteSet, p: &ModelParams, budget: &Budget) -> Result<f64> {
    check_dims(sites, p)?;
    Error::check_budget("brute-force sites", sites.len(), budget.brute_sites)?;
    let n = sites.len();
    let pairs = sites.adjacent_pairs();
    let beta = p.beta;
    let field = 2.0 * p.d as f64 * beta * p.x;
    let neg_beta_energy = |s: &[i8]| {
        let mut pair = 0.0;
        for &(i, j) in &pairs {
            let prod = (s[i] * s[j]) as f64;
            pair += prod + p.y * prod * prod;
        }
        let occupied = s.iter().filter(|&&v| v != 0).count() as f64;
        beta * pair + field * occupied
    };

    let chunk_sites = CHUNK_SITES.min(n);
    let free = n - chunk_sites;
    let chunks: Vec<LogSumExp> = (0..3usize.pow(chunk_sites as u32))
        .into_par_iter()
        .map(|c| {
            let mut acc = LogSumExp::EMPTY;
            for_each_config(free, &digits_of(c, chunk_sites), |s| acc.push(neg_beta_energy(s)));
            acc
        })
        .collect();
    Ok(chunks
        .into_iter()
        .fold(LogSumExp::EMPTY, LogSumExp::merge)
        .value())
}

/// Minimum of `Σ_{pairs} V` over all `3^N` configurations, with the first
/// minimiser in odometer order.
pub fn stability_minimum(
    sites: &SiteSet,
    y: f64,
    budget: &Budget,
) -> Result<(f64, SpinConfiguration)> {
    Error::check_budget("brute-force sites", sites.len(), budget.brute_sites)?;
    let pairs = sites.adjacent_pairs();
    let mut best = f64::INFINITY;
    let mut arg: Vec<i8> = vec![-1; sites.len()];
    for_each_config(sites.len(), &[], |s| {
        let e: f64 = pairs
            .iter()
            .map(|&(i, j)| -((s[i] * s[j]) as f64 + y))
            .sum();
        if e < best {
            best = e;
            arg.copy_from_slice(s);
        }
    });
    Ok((best, SpinConfiguration::from_values(sites, &arg)?))
}
