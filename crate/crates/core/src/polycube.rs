//! Fixed polycubes (lattice animals) in `Z^d`: exact enumeration, the
//! origin-rooted count, and the two binomial upper bounds on `A_n`.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::Value;

use crate::budget::Budget;
use crate::combinatorics::{binomial, BinomialWalk};
use crate::error::{Error, Result};
use crate::lattice::{Point, SiteSet};

/// A connected cell set stored in canonical form: sorted, and translated so
/// its lexicographically least cell is the origin.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polycube {
    dim: usize,
    cells: Vec<Point>,
}

impl Polycube {
    pub fn new(sites: &SiteSet) -> Result<Self> {
        if !sites.is_connected() {
            return Err(Error::domain("polycube cells must be face-connected"));
        }
        Ok(Polycube {
            dim: sites.dim(),
            cells: sites.canonical_shape(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[Point] {
        &self.cells
    }
}

/// Flat-indexed box around the root cell. Coordinates are shifted by
/// `n`; the last coordinate is the most significant digit, so index
/// order is the (last, ..., first) lexicographic order.
struct Grid {
    dim: usize,
    width: usize,
    strides: Vec<usize>,
    root: usize,
}

impl Grid {
    fn new(dim: usize, n: usize) -> Result<Self> {
        let width = 2 * n + 1;
        let mut strides = Vec::with_capacity(dim);
        let mut s = 1usize;
        for _ in 0..dim {
            strides.push(s);
            s = s
                .checked_mul(width)
                .ok_or_else(|| Error::domain("enumeration box does not fit in memory"))?;
        }
        let root = strides.iter().map(|st| n * st).sum();
        Ok(Grid {
            dim,
            width,
            strides,
            root,
        })
    }

    fn cells(&self) -> usize {
        self.strides[self.dim - 1] * self.width
    }

    fn neighbors(&self, idx: usize, out: &mut Vec<usize>) {
        out.clear();
        for &st in &self.strides {
            out.push(idx - st);
            out.push(idx + st);
        }
    }

    fn point(&self, mut idx: usize) -> Point {
        let r = (self.width / 2) as i32;
        (0..self.dim)
            .map(|_| {
                let c = (idx % self.width) as i32 - r;
                idx /= self.width;
                c
            })
            .collect()
    }
}

const DENSE_LIMIT: usize = 1 << 24;

/// Membership set over grid indices: a bitmap for small boxes, hashed otherwise.
#[derive(Clone)]
enum Seen {
    Dense(Vec<bool>),
    Sparse(HashSet<usize>),
}

impl Seen {
    fn new(cells: usize) -> Self {
        if cells <= DENSE_LIMIT {
            Seen::Dense(vec![false; cells])
        } else {
            Seen::Sparse(HashSet::new())
        }
    }

    fn insert(&mut self, i: usize) -> bool {
        match self {
            Seen::Dense(v) => !std::mem::replace(&mut v[i], true),
            Seen::Sparse(s) => s.insert(i),
        }
    }

    fn remove(&mut self, i: usize) {
        match self {
            Seen::Dense(v) => v[i] = false,
            Seen::Sparse(s) => {
                s.remove(&i);
            }
        }
    }
}

struct Search<'a> {
    grid: &'a Grid,
    n: usize,
    /// When false every cell is allowed and each origin-containing set is
    /// produced once; when true only cells after the root are allowed and
    /// each translation class is produced once.
    restrict: bool,
    seen: Seen,
    current: Vec<usize>,
    counts: Vec<u64>,
}

impl Search<'_> {
    fn allowed(&self, idx: usize) -> bool {
        !self.restrict || idx > self.grid.root
    }

    /// Marks the admissible unseen neighbours of `cell`, returning them.
    fn fresh_neighbors(&mut self, cell: usize) -> Vec<usize> {
        let mut nb = Vec::with_capacity(2 * self.grid.dim);
        self.grid.neighbors(cell, &mut nb);
        nb.retain(|&c| self.allowed(c) && self.seen.insert(c));
        nb
    }

    fn grow(&mut self, mut untried: Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        while let Some(cell) = untried.pop() {
            self.current.push(cell);
            let size = self.current.len();
            self.counts[size - 1] += 1;
            visit(&self.current);
            if size < self.n {
                let fresh = self.fresh_neighbors(cell);
                let mut next = untried.clone();
                next.extend_from_slice(&fresh);
                self.grow(next, visit);
                for c in fresh {
                    self.seen.remove(c);
                }
            }
            self.current.pop();
        }
    }
}

fn check_args(d: usize, n: usize, budget: &Budget) -> Result<()> {
    if d == 0 || n == 0 {
        return Err(Error::domain("polycube enumeration needs d >= 1 and n >= 1"));
    }
    Error::check_budget("polycube size", n, budget.polycube_cap(d))
}

/// Counts for sizes `1..=n`, split into independent first-level branches.
fn branch_counts(d: usize, n: usize, restrict: bool, workers: Option<usize>) -> Result<Vec<u64>> {
    let grid = Grid::new(d, n)?;
    let mut top = Search {
        grid: &grid,
        n,
        restrict,
        seen: Seen::new(grid.cells()),
        current: vec![grid.root],
        counts: vec![0; n],
    };
    top.seen.insert(grid.root);
    top.counts[0] = 1;
    if n == 1 {
        return Ok(top.counts);
    }
    let first = top.fresh_neighbors(grid.root);
    let seen = top.seen.clone();

    // Branch i pops first[i] with first[..i] still untried.
    let run = |i: usize| {
        let mut s = Search {
            grid: &grid,
            n,
            restrict,
            seen: seen.clone(),
            current: vec![grid.root],
            counts: vec![0; n],
        };
        let mut untried = first[..=i].to_vec();
        let cell = untried.pop().expect("non-empty");
        s.current.push(cell);
        s.counts[1] += 1;
        if n > 2 {
            let fresh = s.fresh_neighbors(cell);
            untried.extend_from_slice(&fresh);
            s.grow(untried, &mut |_| {});
        }
        s.counts
    };
    let sum = |parts: Vec<Vec<u64>>| {
        parts.into_iter().fold(top.counts.clone(), |mut acc, p| {
            for (a, b) in acc.iter_mut().zip(p) {
                *a += b;
            }
            acc
        })
    };
    let parts: Vec<Vec<u64>> = match workers {
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w.max(1))
                .build()
                .map_err(|e| Error::domain(format!("thread pool: {e}")))?;
            pool.install(|| (0..first.len()).into_par_iter().map(run).collect())
        }
        None => (0..first.len()).into_par_iter().map(run).collect(),
    };
    Ok(sum(parts))
}

/// Exact `A_k` for `k = 1..=n`. `workers = None` uses the global pool.
pub fn fixed_polycube_counts(d: usize, n: usize, budget: &Budget, workers: Option<usize>) -> Result<Vec<BigUint>> {
    check_args(d, n, budget)?;
    Ok(branch_counts(d, n, true, workers)?
        .into_iter()
        .map(BigUint::from)
        .collect())
}

pub fn count_fixed_polycubes(d: usize, n: usize, budget: &Budget) -> Result<BigUint> {
    count_fixed_polycubes_with_workers(d, n, budget, None)
}

pub fn count_fixed_polycubes_with_workers(
    d: usize,
    n: usize,
    budget: &Budget,
    workers: Option<usize>,
) -> Result<BigUint> {
    Ok(fixed_polycube_counts(d, n, budget, workers)?.pop().expect("n >= 1"))
}

/// Number of connected `n`-cell sets containing the origin, counted directly.
pub fn rooted_animal_count(d: usize, n: usize, budget: &Budget) -> Result<BigUint> {
    check_args(d, n, budget)?;
    Ok(BigUint::from(branch_counts(d, n, false, None)?[n - 1]))
}

/// Calls `visit` once per connected `n`-cell set containing the origin.
pub fn for_each_rooted_animal(d: usize, n: usize, budget: &Budget, mut visit: impl FnMut(&SiteSet)) -> Result<()> {
    check_args(d, n, budget)?;
    let grid = Grid::new(d, n)?;
    let mut s = Search {
        grid: &grid,
        n,
        restrict: false,
        seen: Seen::new(grid.cells()),
        current: vec![],
        counts: vec![0; n],
    };
    s.seen.insert(grid.root);
    let mut emit = |cells: &[usize]| {
        if cells.len() == n {
            let pts = cells.iter().map(|&c| grid.point(c)).collect();
            visit(&SiteSet::new(d, pts).expect("distinct cells"));
        }
    };
    s.grow(vec![grid.root], &mut emit);
    Ok(())
}

/// `2d / (n(n-1)) · C((2d-1)n, n-2)`.
pub fn llp_bound(d: usize, n: usize) -> Result<BigRational> {
    if n < 2 || d < 1 {
        return Err(Error::domain("the LLP bound needs n >= 2 and d >= 1"));
    }
    let (d, n) = (d as u64, n as u64);
    let num = BigInt::from(2 * d) * BigInt::from(binomial((2 * d - 1) * n, n - 2));
    Ok(BigRational::new(num, BigInt::from(n * (n - 1))))
}

/// `C((2d-1)n - 1, n - 1)`.
pub fn bs_bound(d: usize, n: usize) -> Result<BigUint> {
    if n < 1 || d < 1 {
        return Err(Error::domain("the BS bound needs n >= 1 and d >= 1"));
    }
    let (d, n) = (d as u64, n as u64);
    Ok(binomial((2 * d - 1) * n - 1, n - 1))
}

/// `2d(2d-1) / (((2d-2)n+1)((2d-2)n+2))`.
pub fn closed_form_ratio(d: usize, n: usize) -> Result<BigRational> {
    if n < 2 || d < 1 {
        return Err(Error::domain("the bound ratio needs n >= 2 and d >= 1"));
    }
    let (d, n) = (d as i64, n as i64);
    let a = (2 * d - 2) * n;
    Ok(BigRational::new(
        BigInt::from(2 * d * (2 * d - 1)),
        BigInt::from(a + 1) * BigInt::from(a + 2),
    ))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundRatio {
    /// `llp_bound / bs_bound`
    pub exact: BigRational,
    pub closed_form: BigRational,
}

impl BoundRatio {
    pub fn agree(&self) -> bool {
        self.exact == self.closed_form
    }
}

pub fn bound_ratio(d: usize, n: usize) -> Result<BoundRatio> {
    let exact = llp_bound(d, n)? / BigRational::from_integer(BigInt::from(bs_bound(d, n)?));
    Ok(BoundRatio {
        exact,
        closed_form: closed_form_ratio(d, n)?,
    })
}

/// Result of checking the ratio identity for every `n` in `2..=n_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioSweep {
    pub d: usize,
    pub checked: usize,
    pub first_mismatch: Option<usize>,
}

/// Checks `llp/bs == closed form` for `n = 2..=n_max` by walking both
/// binomials incrementally and comparing exact cross products:
/// `C(Tn, n-2) · P · Q == n(n-1) · T · C(Tn-1, n-1)` with `T = 2d-1`,
/// `P = (2d-2)n+1`, `Q = (2d-2)n+2`.
pub fn ratio_identity_sweep(d: usize, n_max: usize) -> Result<RatioSweep> {
    if d < 1 || n_max < 2 {
        return Err(Error::domain("ratio sweep needs d >= 1 and n_max >= 2"));
    }
    let t = 2 * d as u64 - 1;
    let mut llp = BinomialWalk::new(2 * t, 0, t);
    let mut bs = BinomialWalk::new(2 * t - 1, 1, t);
    let mut first_mismatch = None;
    for n in 2..=n_max as u64 {
        if n > 2 {
            llp.step();
            bs.step();
        }
        let a = (t - 1) * n;
        let lhs = llp.value() * BigUint::from(a + 1) * BigUint::from(a + 2);
        let rhs = bs.value() * BigUint::from(n * (n - 1) * t);
        if lhs != rhs && first_mismatch.is_none() {
            first_mismatch = Some(n as usize);
        }
    }
    Ok(RatioSweep {
        d,
        checked: n_max - 1,
        first_mismatch,
    })
}

/// `Σ_{s_1+...+s_n = n-2} Π C(2d-1, s_i)` by exhaustive enumeration.
pub fn multinomial_lhs(d: usize, n: usize, budget: &Budget) -> Result<BigUint> {
    if n < 2 || d < 1 {
        return Err(Error::domain("the multinomial identity needs n >= 2 and d >= 1"));
    }
    Error::check_budget("multinomial n", n, budget.multinomial_n)?;
    Error::check_budget("multinomial d", d, budget.multinomial_d)?;
    let top = 2 * d as u64 - 1;
    let row: Vec<BigUint> = (0..=top).map(|k| binomial(top, k)).collect();
    fn rec(slots: usize, left: usize, row: &[BigUint]) -> BigUint {
        if slots == 0 {
            return if left == 0 { BigUint::one() } else { BigUint::zero() };
        }
        (0..=left.min(row.len() - 1))
            .map(|s| &row[s] * rec(slots - 1, left - s, row))
            .sum()
    }
    Ok(rec(n, n - 2, &row))
}

pub fn multinomial_identity_check(d: usize, n: usize, budget: &Budget) -> Result<bool> {
    let lhs = multinomial_lhs(d, n, budget)?;
    Ok(lhs == binomial((2 * d as u64 - 1) * n as u64, n as u64 - 2))
}

/// Externally supplied `A_n` values for one dimension.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct KnownCounts {
    pub d: usize,
    pub counts: BTreeMap<usize, BigUint>,
}

impl KnownCounts {
    /// Parses `{"d": 2, "counts": {"13": 1903890, "14": "7204874"}}`; counts
    /// may be JSON integers or decimal strings.
    pub fn from_json(s: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("known counts must be a JSON object".into()))?;
        let d = obj
            .get("d")
            .and_then(Value::as_u64)
            .filter(|&d| d >= 1)
            .ok_or_else(|| Error::Parse("\"d\" must be a positive integer".into()))?;
        let raw = obj
            .get("counts")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Parse("\"counts\" must be an object keyed by n".into()))?;
        let mut counts = BTreeMap::new();
        for (k, val) in raw {
            let n: usize = k
                .parse()
                .ok()
                .filter(|&n| n >= 1)
                .ok_or_else(|| Error::Parse(format!("bad size key {k:?}")))?;
            let count = match val {
                Value::Number(num) => num.as_u64().map(BigUint::from),
                Value::String(text) if !text.is_empty() && text.bytes().all(|b| b.is_ascii_digit()) => {
                    BigUint::from_str(text).ok()
                }
                _ => None,
            }
            .ok_or_else(|| Error::Parse(format!("bad count for n = {k}")))?;
            counts.insert(n, count);
        }
        Ok(KnownCounts { d: d as usize, counts })
    }
}

impl FromStr for KnownCounts {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        KnownCounts::from_json(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountSource {
    Enumerated,
    /// Taken from an external table without independent verification.
    External,
    Absent,
}

impl fmt::Display for CountSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CountSource::Enumerated => "enumerated",
            CountSource::External => "unverified input",
            CountSource::Absent => "absent",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundRow {
    pub n: usize,
    pub a_n: Option<BigUint>,
    pub a_star: Option<BigUint>,
    pub source: CountSource,
    pub llp: BigRational,
    pub bs: BigUint,
    pub ratio: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundTable {
    pub d: usize,
    pub rows: Vec<BoundRow>,
}

impl BoundTable {
    /// Rows `n = 2..=n_max`. Sizes within the budget are enumerated; larger
    /// ones fall back to `known` and are marked as unverified input.
    pub fn build(
        d: usize,
        n_max: usize,
        known: Option<&KnownCounts>,
        budget: &Budget,
        workers: Option<usize>,
    ) -> Result<Self> {
        if n_max < 2 {
            return Err(Error::domain("bound tables start at n = 2"));
        }
        if let Some(k) = known {
            if k.d != d {
                return Err(Error::domain(format!("known counts are for d = {}, table is d = {d}", k.d)));
            }
        }
        let reach = n_max.min(budget.polycube_cap(d));
        let exact = if reach >= 1 {
            fixed_polycube_counts(d, reach, budget, workers)?
        } else {
            Vec::new()
        };
        let mut rows = Vec::with_capacity(n_max - 1);
        for n in 2..=n_max {
            let external = known.and_then(|k| k.counts.get(&n));
            let (a_n, source) = match (exact.get(n - 1), external) {
                (Some(e), Some(x)) if e != x => {
                    return Err(Error::Invariant(format!(
                        "external A_{n} = {x} disagrees with enumerated {e}"
                    )))
                }
                (Some(e), _) => (Some(e.clone()), CountSource::Enumerated),
                (None, Some(x)) => (Some(x.clone()), CountSource::External),
                (None, None) => (None, CountSource::Absent),
            };
            let ratio = bound_ratio(d, n)?;
            rows.push(BoundRow {
                n,
                a_star: a_n.as_ref().map(|a| a * BigUint::from(n)),
                a_n,
                source,
                llp: llp_bound(d, n)?,
                bs: bs_bound(d, n)?,
                ratio: ratio.exact,
            });
        }
        Ok(BoundTable { d, rows })
    }

    /// Human-readable descriptions of every row that breaks an expected
    /// relation; empty when the table is consistent.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for r in &self.rows {
            if let Some(a) = &r.a_n {
                if BigRational::from_integer(BigInt::from(a.clone())) > r.llp {
                    out.push(format!("n = {}: A_n = {a} exceeds the LLP bound {}", r.n, r.llp));
                }
            }
            if r.llp > BigRational::from_integer(BigInt::from(r.bs.clone())) {
                out.push(format!("n = {}: LLP bound exceeds the BS bound", r.n));
            }
            match closed_form_ratio(self.d, r.n) {
                Ok(c) if c == r.ratio => {}
                _ => out.push(format!("n = {}: bound ratio differs from the closed form", r.n)),
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b() -> Budget {
        Budget::default()
    }

    fn nums(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn canonical_form_is_translation_invariant() {
        let s = SiteSet::new(2, vec![vec![3, 4], vec![3, 5], vec![4, 5]]).unwrap();
        let t = s.translated(&[-7, 2]).unwrap();
        assert_eq!(Polycube::new(&s).unwrap(), Polycube::new(&t).unwrap());
        assert_eq!(Polycube::new(&s).unwrap().cells()[0], vec![0, 0]);
        let gap = SiteSet::new(2, vec![vec![0, 0], vec![2, 0]]).unwrap();
        assert!(Polycube::new(&gap).is_err());
    }

    #[test]
    fn small_counts() {
        assert_eq!(
            fixed_polycube_counts(2, 8, &b(), None).unwrap(),
            nums(&[1, 2, 6, 19, 63, 216, 760, 2725])
        );
        assert_eq!(fixed_polycube_counts(3, 5, &b(), None).unwrap(), nums(&[1, 3, 15, 86, 534]));
        assert_eq!(fixed_polycube_counts(1, 30, &b(), None).unwrap(), nums(&[1; 30]));
        assert_eq!(count_fixed_polycubes(4, 3, &b()).unwrap(), BigUint::from(28u32));
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(count_fixed_polycubes(2, 13, &b()), Err(Error::Budget { .. })));
        assert!(matches!(count_fixed_polycubes(3, 9, &b()), Err(Error::Budget { .. })));
        assert!(count_fixed_polycubes(0, 3, &b()).is_err());
        assert!(count_fixed_polycubes(2, 0, &b()).is_err());
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let one = fixed_polycube_counts(2, 9, &b(), Some(1)).unwrap();
        let many = fixed_polycube_counts(2, 9, &b(), Some(4)).unwrap();
        assert_eq!(one, many);
        assert_eq!(
            fixed_polycube_counts(3, 6, &b(), Some(1)).unwrap(),
            fixed_polycube_counts(3, 6, &b(), Some(3)).unwrap()
        );
    }

    #[test]
    fn rooted_counts() {
        assert_eq!(rooted_animal_count(2, 1, &b()).unwrap(), BigUint::from(1u32));
        assert_eq!(rooted_animal_count(2, 2, &b()).unwrap(), BigUint::from(4u32));
        assert_eq!(rooted_animal_count(2, 3, &b()).unwrap(), BigUint::from(18u32));
        for n in 1..=7 {
            assert_eq!(
                rooted_animal_count(2, n, &b()).unwrap(),
                count_fixed_polycubes(2, n, &b()).unwrap() * BigUint::from(n)
            );
        }
        let mut seen = HashSet::new();
        for_each_rooted_animal(2, 4, &b(), |s| {
            assert!(s.is_connected() && s.contains(&[0, 0]));
            let mut pts = s.points().to_vec();
            pts.sort();
            assert!(seen.insert(pts));
        })
        .unwrap();
        assert_eq!(seen.len(), 76);
    }

    #[test]
    fn bound_examples() {
        let int = |v: i64| BigRational::from_integer(v.into());
        assert_eq!(llp_bound(2, 3).unwrap(), int(6));
        assert_eq!(llp_bound(2, 4).unwrap(), int(22));
        assert_eq!(llp_bound(2, 5).unwrap(), int(91));
        assert!(llp_bound(2, 1).is_err());
        assert_eq!(bs_bound(2, 3).unwrap(), BigUint::from(28u32));
        assert_eq!(bs_bound(2, 1).unwrap(), BigUint::from(1u32));
        assert_eq!(bs_bound(3, 4).unwrap(), BigUint::from(969u32));
        let r = bound_ratio(2, 3).unwrap();
        assert!(r.agree());
        assert_eq!(r.exact, BigRational::new(3.into(), 14.into()));
        let r = bound_ratio(2, 10).unwrap();
        assert!(r.agree());
        assert_eq!(r.closed_form, BigRational::new(2.into(), 77.into()));
    }

    #[test]
    fn ratio_sweep_small() {
        for d in 1..=4 {
            let s = ratio_identity_sweep(d, 300).unwrap();
            assert_eq!(s.first_mismatch, None, "d = {d}");
            assert_eq!(s.checked, 299);
        }
    }

    #[test]
    fn ratio_quarters_when_n_doubles() {
        use num_traits::ToPrimitive;
        for d in 2..=3 {
            let mut gaps = Vec::new();
            for n in [1_000, 10_000] {
                let q = closed_form_ratio(d, 2 * n).unwrap() / closed_form_ratio(d, n).unwrap();
                gaps.push((q.to_f64().unwrap() - 0.25).abs());
            }
            assert!(gaps[1] < gaps[0] && gaps[1] < 1e-4, "{gaps:?}");
        }
    }

    #[test]
    fn multinomial_examples() {
        assert!(multinomial_identity_check(2, 3, &b()).unwrap());
        assert_eq!(multinomial_lhs(2, 3, &b()).unwrap(), BigUint::from(9u32));
        assert_eq!(multinomial_lhs(2, 2, &b()).unwrap(), BigUint::from(1u32));
        assert_eq!(multinomial_lhs(3, 4, &b()).unwrap(), BigUint::from(190u32));
        for d in 1..=3 {
            for n in 2..=8 {
                assert!(multinomial_identity_check(d, n, &b()).unwrap());
            }
        }
        assert!(matches!(multinomial_identity_check(2, 9, &b()), Err(Error::Budget { .. })));
    }

    #[test]
    fn known_counts_parsing() {
        let k = KnownCounts::from_json(r#"{"d": 2, "counts": {"13": 1903890, "14": "7204874"}}"#).unwrap();
        assert_eq!(k.d, 2);
        assert_eq!(k.counts[&14], BigUint::from(7204874u32));
        for bad in [
            "[]",
            r#"{"d": 0, "counts": {}}"#,
            r#"{"d": 2}"#,
            r#"{"d": 2, "counts": {"0": 1}}"#,
            r#"{"d": 2, "counts": {"3": -6}}"#,
            r#"{"d": 2, "counts": {"3": "6.0"}}"#,
            r#"{"d": 2, "counts": {"x": 6}}"#,
        ] {
            assert!(matches!(KnownCounts::from_json(bad), Err(Error::Parse(_))), "{bad}");
        }
    }

    #[test]
    fn table_rows_and_external_counts() {
        let mut small = b();
        small.polycube_d2 = 5;
        let known = KnownCounts::from_json(r#"{"d": 2, "counts": {"5": 63, "6": 216}}"#).unwrap();
        let t = BoundTable::build(2, 7, Some(&known), &small, None).unwrap();
        assert!(t.violations().is_empty());
        let row3 = &t.rows[1];
        assert_eq!(row3.n, 3);
        assert_eq!(row3.a_n, Some(BigUint::from(6u32)));
        assert_eq!(row3.a_star, Some(BigUint::from(18u32)));
        assert_eq!(row3.bs, BigUint::from(28u32));
        assert_eq!(t.rows[4].source, CountSource::External);
        assert_eq!(t.rows[5].source, CountSource::Absent);

        let wrong = KnownCounts::from_json(r#"{"d": 2, "counts": {"4": 20}}"#).unwrap();
        assert!(matches!(
            BoundTable::build(2, 6, Some(&wrong), &small, None),
            Err(Error::Invariant(_))
        ));
    }
}
