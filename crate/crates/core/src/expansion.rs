//! High-temperature polymer expansion of the BEG partition function.
//!
//! Mayer-expanding the nearest-neighbour Boltzmann factor and grouping the
//! graph components gives
//!
//! ```text
//! Z_Λ = (1 + 2 e^{2dβx})^{|Λ|} · Ξ_Λ,
//! Ξ_Λ = 1 + Σ_{families of disjoint R_i ⊂ Λ, |R_i| ≥ 2} Π ξ(R_i),
//! ξ(R) = α^{|R|} Σ_{σ ∈ {±1}^R} Σ_{g connected on R} Π_{uv ∈ g} (e^{β(σ_u σ_v + y)} - 1)
//! ```
//!
//! with `α = e^{2dβx} / (1 + 2 e^{2dβx})`. Configurations with a zero spin
//! drop out of `ξ` because every vertex of a connected graph touches an edge
//! whose factor is then `e^0 - 1 = 0`.

use std::collections::HashMap;
use std::sync::RwLock;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::lattice::{ModelParams, Point, SiteSet, SpinConfiguration};
use crate::region::log_alpha;

/// A finite subset of `Z^d` with at least two cells.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polymer {
    cells: SiteSet,
}

impl Polymer {
    pub fn new(cells: SiteSet) -> Result<Self> {
        if cells.len() < 2 {
            return Err(Error::domain(format!(
                "a polymer needs at least 2 cells, got {}",
                cells.len()
            )));
        }
        Ok(Polymer { cells })
    }

    pub fn cells(&self) -> &SiteSet {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Edge subsets of a polymer's adjacency graph that connect every cell.
///
/// Non-adjacent pairs carry the factor `e^0 - 1 = 0`, so graphs using them
/// contribute nothing and are never generated.
#[derive(Debug, Clone)]
pub struct GraphOnSet {
    edges: Vec<(usize, usize)>,
    spanning: Vec<u64>,
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

impl GraphOnSet {
    pub fn connected_spanning(polymer: &Polymer, budget: &Budget) -> Result<Self> {
        let n = polymer.len();
        Error::check_budget("polymer cells", n, budget.polymer_sites)?;
        let edges = polymer.cells.adjacent_pairs();
        Error::check_budget("polymer edges", edges.len(), budget.polymer_edges.min(63))?;
        if edges.len() < n - 1 || !polymer.cells.is_connected() {
            return Ok(GraphOnSet {
                edges,
                spanning: Vec::new(),
            });
        }
        let mut spanning = Vec::new();
        let mut parent = vec![0usize; n];
        for mask in 0u64..(1u64 << edges.len()) {
            if (mask.count_ones() as usize) < n - 1 {
                continue;
            }
            parent.iter_mut().enumerate().for_each(|(i, p)| *p = i);
            let mut components = n;
            for (k, &(a, b)) in edges.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    if ra != rb {
                        parent[ra] = rb;
                        components -= 1;
                    }
                }
            }
            if components == 1 {
                spanning.push(mask);
            }
        }
        Ok(GraphOnSet { edges, spanning })
    }

    /// Adjacent cell pairs, indexed by bit position in the masks.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Bit masks over [`Self::edges`] of the connected spanning subgraphs.
    pub fn spanning_masks(&self) -> &[u64] {
        &self.spanning
    }

    fn sum_with_factors(&self, factors: &[f64]) -> f64 {
        self.spanning
            .iter()
            .map(|&mask| {
                let mut prod = 1.0;
                let mut m = mask;
                while m != 0 {
                    prod *= factors[m.trailing_zeros() as usize];
                    m &= m - 1;
                }
                prod
            })
            .sum()
    }
}

fn edge_factor(cfg: &SpinConfiguration, i: usize, j: usize, p: &ModelParams) -> f64 {
    let s = f64::from(cfg.spins()[i].value() * cfg.spins()[j].value());
    (p.beta * (s + p.y * s * s)).exp_m1()
}

/// `Σ_{g connected on R} Π_{uv ∈ g} (e^{β(σ_u σ_v + y σ_u² σ_v²) δ_uv} - 1)`.
pub fn connected_graph_sum(
    polymer: &Polymer,
    cfg: &SpinConfiguration,
    p: &ModelParams,
    budget: &Budget,
) -> Result<f64> {
    cfg.check_matches(polymer.cells())?;
    let graphs = GraphOnSet::connected_spanning(polymer, budget)?;
    let factors: Vec<f64> = graphs
        .edges
        .iter()
        .map(|&(i, j)| edge_factor(cfg, i, j, p))
        .collect();
    Ok(graphs.sum_with_factors(&factors))
}

/// The same connected sum by recursion over vertex subsets:
/// `C(S) = W(S) - Σ_{T ⊊ S, min S ∈ T} C(T) W(S \ T)` where
/// `W(S) = Π_{pairs in S} (1 + f)` is the sum over all graphs on `S`.
pub fn connected_graph_sum_by_subsets(
    polymer: &Polymer,
    cfg: &SpinConfiguration,
    p: &ModelParams,
    budget: &Budget,
) -> Result<f64> {
    cfg.check_matches(polymer.cells())?;
    let n = polymer.len();
    Error::check_budget("polymer cells", n, budget.polymer_sites)?;
    let full = (1usize << n) - 1;
    // log W(S) = β Σ_{adjacent pairs in S} (σσ' + y σ²σ'²)
    let mut log_w = vec![0.0f64; full + 1];
    let pairs = polymer.cells.adjacent_pairs();
    for (s, lw) in log_w.iter_mut().enumerate() {
        *lw = pairs
            .iter()
            .filter(|&&(i, j)| s >> i & 1 == 1 && s >> j & 1 == 1)
            .map(|&(i, j)| {
                let sp = f64::from(cfg.spins()[i].value() * cfg.spins()[j].value());
                p.beta * (sp + p.y * sp * sp)
            })
            .sum();
    }
    let mut conn = vec![0.0f64; full + 1];
    for s in 1..=full {
        let low = s & s.wrapping_neg();
        let rest = s ^ low;
        let mut c = log_w[s].exp();
        // proper subsets T = low | sub, sub ⊊ rest
        let mut sub = rest;
        while sub != 0 {
            sub = (sub - 1) & rest;
            let t = low | sub;
            c -= conn[t] * log_w[s ^ t].exp();
        }
        conn[s] = c;
    }
    Ok(conn[full])
}

/// `log(1 + 2 e^{2dβx})`, the per-site weight factored out of `Z`.
pub fn log_single_site_weight(p: &ModelParams) -> f64 {
    let t = 2.0 * p.d as f64 * p.beta * p.x;
    if t > 0.0 {
        t + (2.0 + (-t).exp()).ln()
    } else {
        (2.0 * t.exp()).ln_1p()
    }
}

fn sum_over_pm_configs(graphs: &GraphOnSet, n: usize, p: &ModelParams, only_first_up: bool) -> f64 {
    if graphs.spanning.is_empty() {
        return 0.0;
    }
    let plus = (p.beta * (1.0 + p.y)).exp_m1();
    let minus = (p.beta * (p.y - 1.0)).exp_m1();
    let m = graphs.edges.len();
    let pow = |base: f64| {
        let mut v = vec![1.0; m + 1];
        for k in 1..=m {
            v[k] = v[k - 1] * base;
        }
        v
    };
    let (plus_pow, minus_pow) = (pow(plus), pow(minus));
    let top = if only_first_up { 1u32 << (n - 1) } else { 1u32 << n };
    let mut total = 0.0;
    for signs in 0..top {
        // bit i set means σ_i = -1; with `only_first_up` bit 0 ... n-2 cover sites 1..n
        let signs = if only_first_up { signs << 1 } else { signs };
        let mut antiparallel = 0u64;
        for (k, &(i, j)) in graphs.edges.iter().enumerate() {
            if (signs >> i ^ signs >> j) & 1 == 1 {
                antiparallel |= 1 << k;
            }
        }
        for &mask in &graphs.spanning {
            let neg = (mask & antiparallel).count_ones() as usize;
            let pos = mask.count_ones() as usize - neg;
            total += plus_pow[pos] * minus_pow[neg];
        }
    }
    total
}

/// Polymer activity `ξ(R)`.
pub fn activity(polymer: &Polymer, p: &ModelParams, budget: &Budget) -> Result<f64> {
    if polymer.cells.dim() != p.d {
        return Err(Error::domain("polymer dimension differs from d"));
    }
    let graphs = GraphOnSet::connected_spanning(polymer, budget)?;
    let sum = sum_over_pm_configs(&graphs, polymer.len(), p, false);
    if sum == 0.0 {
        return Ok(0.0);
    }
    Ok(sum * (polymer.len() as f64 * log_alpha(p.x, p.beta, p.d)).exp())
}

/// `ξ(R)` from configurations with the first spin up, doubled.
pub fn activity_by_flip_symmetry(polymer: &Polymer, p: &ModelParams, budget: &Budget) -> Result<f64> {
    let graphs = GraphOnSet::connected_spanning(polymer, budget)?;
    let sum = 2.0 * sum_over_pm_configs(&graphs, polymer.len(), p, true);
    if sum == 0.0 {
        return Ok(0.0);
    }
    Ok(sum * (polymer.len() as f64 * log_alpha(p.x, p.beta, p.d)).exp())
}

type CacheKey = (Vec<Point>, usize, u64, u64, u64);

/// Activities memoised by translation-canonical shape and parameters.
///
/// Concurrent inserts of the same key are idempotent: every writer computes
/// the same value.
#[derive(Debug, Default)]
pub struct ActivityCache {
    map: RwLock<HashMap<CacheKey, f64>>,
}

impl ActivityCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.map.read().expect("cache lock poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn activity(&self, polymer: &Polymer, p: &ModelParams, budget: &Budget) -> Result<f64> {
        let key = (
            polymer.cells.canonical_shape(),
            p.d,
            p.x.to_bits(),
            p.y.to_bits(),
            p.beta.to_bits(),
        );
        if let Some(&v) = self.map.read().expect("cache lock poisoned").get(&key) {
            return Ok(v);
        }
        let v = activity(polymer, p, budget)?;
        self.map.write().expect("cache lock poisoned").insert(key, v);
        Ok(v)
    }
}

/// `Ξ_Λ` summed over unordered families of disjoint polymers.
///
/// Each family is produced once: the lowest uncovered site is either left
/// alone or covered by a polymer drawn from the remaining uncovered sites.
pub fn grand_partition(sites: &SiteSet, p: &ModelParams, budget: &Budget) -> Result<f64> {
    grand_partition_cached(sites, p, budget, &ActivityCache::new())
}

pub fn grand_partition_cached(
    sites: &SiteSet,
    p: &ModelParams,
    budget: &Budget,
    cache: &ActivityCache,
) -> Result<f64> {
    let n = sites.len();
    Error::check_budget("grand partition sites", n, budget.grand_sites.min(20))?;
    if sites.dim() != p.d {
        return Err(Error::domain("site dimension differs from d"));
    }
    if n == 0 {
        return Ok(1.0);
    }
    let full = (1usize << n) - 1;
    let mut xi = vec![0.0f64; full + 1];
    for (mask, slot) in xi.iter_mut().enumerate() {
        if mask.count_ones() < 2 {
            continue;
        }
        let idx: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let cells = sites.subset(&idx);
        if !cells.is_connected() {
            continue;
        }
        *slot = cache.activity(&Polymer::new(cells)?, p, budget)?;
    }
    let mut xi_sum = vec![0.0f64; full + 1];
    xi_sum[0] = 1.0;
    for mask in 1..=full {
        let low = mask & mask.wrapping_neg();
        let rest = mask ^ low;
        let mut v = xi_sum[rest];
        let mut sub = rest;
        while sub != 0 {
            let poly = low | sub;
            if xi[poly] != 0.0 {
                v += xi[poly] * xi_sum[rest ^ sub];
            }
            sub = (sub - 1) & rest;
        }
        xi_sum[mask] = v;
    }
    Ok(xi_sum[full])
}

/// `|log Z_brute - (|Λ| log(1 + 2e^{2dβx}) + log Ξ_Λ)|`.
pub fn factorization_residual(sites: &SiteSet, p: &ModelParams, budget: &Budget) -> Result<f64> {
    let brute = crate::lattice::brute_force_log_partition(sites, p, budget)?;
    let xi = grand_partition(sites, p, budget)?;
    if !(xi > 0.0) {
        return Ok(f64::INFINITY);
    }
    let polymer = sites.len() as f64 * log_single_site_weight(p) + xi.ln();
    Ok((brute - polymer).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Spin;
    use approx::assert_abs_diff_eq;

    fn poly(points: &[[i32; 2]]) -> Polymer {
        Polymer::new(SiteSet::new(2, points.iter().map(|p| p.to_vec()).collect()).unwrap()).unwrap()
    }

    fn params(x: f64, y: f64, beta: f64) -> ModelParams {
        ModelParams::new(2, x, y, beta).unwrap()
    }

    #[test]
    fn polymer_needs_two_cells() {
        let one = SiteSet::new(2, vec![vec![0, 0]]).unwrap();
        assert!(matches!(Polymer::new(one), Err(Error::Domain(_))));
    }

    #[test]
    fn graph_sum_examples() {
        let b = Budget::default();
        let pair = poly(&[[0, 0], [1, 0]]);
        let up = SpinConfiguration::uniform(pair.cells(), Spin::Up);
        let v = connected_graph_sum(&pair, &up, &params(-1.0, 0.0, 1.0), &b).unwrap();
        assert_abs_diff_eq!(v, std::f64::consts::E - 1.0, epsilon = 1e-12);

        let v0 = connected_graph_sum(&pair, &up, &params(-1.0, 0.3, 0.0), &b).unwrap();
        assert_eq!(v0, 0.0);

        let apart = poly(&[[0, 0], [2, 0]]);
        let up = SpinConfiguration::uniform(apart.cells(), Spin::Up);
        assert_eq!(connected_graph_sum(&apart, &up, &params(-1.0, 0.0, 1.0), &b).unwrap(), 0.0);
    }

    #[test]
    fn triangle_of_cells_counts_both_spanning_paths() {
        // L-tromino: two adjacency edges, the only connected spanning graph uses both
        let l = poly(&[[0, 0], [1, 0], [1, 1]]);
        let g = GraphOnSet::connected_spanning(&l, &Budget::default()).unwrap();
        assert_eq!(g.spanning_masks(), &[0b11]);
        // 2x2 square: 4 edges, spanning connected subgraphs = 4 trees + the full cycle
        let sq = poly(&[[0, 0], [1, 0], [0, 1], [1, 1]]);
        let g = GraphOnSet::connected_spanning(&sq, &Budget::default()).unwrap();
        assert_eq!(g.spanning_masks().len(), 5);
    }

    #[test]
    fn graph_sum_routes_agree() {
        let b = Budget::default();
        let sq = poly(&[[0, 0], [1, 0], [0, 1], [1, 1], [2, 1]]);
        for vals in [[1, 1, 1, 1, 1], [1, -1, 1, -1, 1], [1, 0, -1, 1, 1], [-1, -1, 1, 1, -1]] {
            let cfg = SpinConfiguration::from_values(sq.cells(), &vals).unwrap();
            for (y, beta) in [(0.0, 0.7), (-1.5, 1.3), (0.8, 0.2)] {
                let p = params(-1.0, y, beta);
                let a = connected_graph_sum(&sq, &cfg, &p, &b).unwrap();
                let c = connected_graph_sum_by_subsets(&sq, &cfg, &p, &b).unwrap();
                assert_abs_diff_eq!(a, c, epsilon = 1e-10 * a.abs().max(1.0));
            }
        }
    }

    #[test]
    fn activity_adjacent_pair_closed_form() {
        let b = Budget::default();
        let pair = poly(&[[3, 4], [3, 5]]);
        let (x, y, beta) = (-0.6, 0.4, 0.9);
        let p = params(x, y, beta);
        let t = 4.0 * beta * x;
        let alpha = t.exp() / (1.0 + 2.0 * t.exp());
        let expect =
            2.0 * alpha * alpha * ((beta * (1.0 + y)).exp() + (beta * (y - 1.0)).exp() - 2.0);
        assert_abs_diff_eq!(activity(&pair, &p, &b).unwrap(), expect, epsilon = 1e-14);
    }

    #[test]
    fn activity_vanishes_at_infinite_temperature_and_when_disconnected() {
        let b = Budget::default();
        let sq = poly(&[[0, 0], [1, 0], [0, 1], [1, 1]]);
        assert_eq!(activity(&sq, &params(-1.0, 0.5, 0.0), &b).unwrap(), 0.0);
        let split = poly(&[[0, 0], [1, 0], [3, 0]]);
        assert_eq!(activity(&split, &params(-1.0, 0.5, 1.0), &b).unwrap(), 0.0);
    }

    /// Connected subsets of Z^2 through the origin with up to `max` cells.
    fn subsets_through_origin(max: usize) -> Vec<SiteSet> {
        let mut window = Vec::new();
        for a in -3i32..=3 {
            for c in -3i32..=3 {
                if a.abs() + c.abs() <= 3 && (a, c) != (0, 0) {
                    window.push(vec![a, c]);
                }
            }
        }
        let mut out = Vec::new();
        let mut chosen = vec![vec![0, 0]];
        fn rec(window: &[Vec<i32>], start: usize, chosen: &mut Vec<Vec<i32>>, max: usize, out: &mut Vec<SiteSet>) {
            if chosen.len() >= 2 {
                out.push(SiteSet::new(2, chosen.clone()).unwrap());
            }
            if chosen.len() == max {
                return;
            }
            for k in start..window.len() {
                chosen.push(window[k].clone());
                rec(window, k + 1, chosen, max, out);
                chosen.pop();
            }
        }
        rec(&window, 0, &mut chosen, max, &mut out);
        out
    }

    #[test]
    fn activity_zero_exactly_when_disconnected() {
        let b = Budget::default();
        let p = params(-0.8, 0.3, 0.7);
        let all = subsets_through_origin(4);
        assert!(all.len() > 1000);
        for cells in all {
            let connected = cells.is_connected();
            let xi = activity(&Polymer::new(cells).unwrap(), &p, &b).unwrap();
            assert_eq!(xi == 0.0, !connected);
        }
    }

    #[test]
    fn activity_flip_symmetry_and_translation() {
        let b = Budget::default();
        let p = params(-0.9, -0.4, 1.4);
        let shape = poly(&[[0, 0], [1, 0], [1, 1], [2, 1], [1, 2]]);
        let a = activity(&shape, &p, &b).unwrap();
        let h = activity_by_flip_symmetry(&shape, &p, &b).unwrap();
        assert_abs_diff_eq!(a, h, epsilon = 1e-12 * a.abs().max(1.0));
        let moved = Polymer::new(shape.cells().translated(&[-7, 11]).unwrap()).unwrap();
        assert_eq!(a, activity(&moved, &p, &b).unwrap());
    }

    #[test]
    fn activity_matches_direct_sum_over_configurations() {
        let b = Budget::default();
        let p = params(-0.5, 0.2, 0.8);
        let shape = poly(&[[0, 0], [1, 0], [1, 1], [0, 1]]);
        let mut direct = 0.0;
        for bits in 0..16u32 {
            let vals: Vec<i8> = (0..4).map(|i| if bits >> i & 1 == 1 { -1 } else { 1 }).collect();
            let cfg = SpinConfiguration::from_values(shape.cells(), &vals).unwrap();
            direct += connected_graph_sum(&shape, &cfg, &p, &b).unwrap();
        }
        let t = 4.0 * p.beta * p.x;
        direct *= (t.exp() / (1.0 + 2.0 * t.exp())).powi(4);
        assert_abs_diff_eq!(activity(&shape, &p, &b).unwrap(), direct, epsilon = 1e-12);
    }

    #[test]
    fn grand_partition_examples() {
        let b = Budget::default();
        let sq = SiteSet::cuboid(&[2, 2]).unwrap();
        assert_eq!(grand_partition(&sq, &params(-1.0, 0.0, 0.0), &b).unwrap(), 1.0);

        let pair = SiteSet::cuboid(&[2, 1]).unwrap();
        let p = params(-0.3, 0.6, 1.2);
        let xi = activity(&Polymer::new(pair.clone()).unwrap(), &p, &b).unwrap();
        assert_abs_diff_eq!(grand_partition(&pair, &p, &b).unwrap(), 1.0 + xi, epsilon = 1e-14);
    }

    #[test]
    fn factorization_examples() {
        let b = Budget::default();
        let sq = SiteSet::cuboid(&[2, 2]).unwrap();
        assert!(factorization_residual(&sq, &params(-1.0, 0.4, 0.0), &b).unwrap() <= 1e-12);
        assert!(factorization_residual(&sq, &params(-1.0, 0.0, 0.7), &b).unwrap() <= 1e-9);
        let rect = SiteSet::cuboid(&[3, 2]).unwrap();
        assert!(factorization_residual(&rect, &params(-2.0, -1.5, 1.2), &b).unwrap() <= 1e-9);
    }

    #[test]
    fn budget_is_enforced() {
        let b = Budget {
            polymer_sites: 3,
            ..Budget::default()
        };
        let sq = poly(&[[0, 0], [1, 0], [0, 1], [1, 1]]);
        assert!(matches!(activity(&sq, &params(-1.0, 0.0, 1.0), &b), Err(Error::Budget { .. })));
        let big = SiteSet::cuboid(&[5, 2]).unwrap();
        assert!(matches!(
            grand_partition(&big, &params(-1.0, 0.0, 1.0), &Budget::default()),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn cache_reuses_translated_shapes() {
        let b = Budget::default();
        let cache = ActivityCache::new();
        let p = params(-0.7, 0.1, 0.5);
        let row = SiteSet::cuboid(&[3, 3]).unwrap();
        let direct = grand_partition(&row, &p, &b).unwrap();
        let cached = grand_partition_cached(&row, &p, &b, &cache).unwrap();
        assert_eq!(direct, cached);
        let mut connected = 0;
        let mut shapes = std::collections::HashSet::new();
        for m in (1u32..512).filter(|m| m.count_ones() >= 2) {
            let idx: Vec<usize> = (0..9).filter(|i| m >> i & 1 == 1).collect();
            let sub = row.subset(&idx);
            if sub.is_connected() {
                connected += 1;
                shapes.insert(sub.canonical_shape());
            }
        }
        assert_eq!(cache.len(), shapes.len());
        assert!(cache.len() < connected);
    }
}
