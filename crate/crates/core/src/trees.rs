//! Labeled trees, their nearest-neighbour embeddings in `Z^d`, and the
//! tree-graph inequality that bounds connected-graph sums.
//!
//! Vertices are `0..n`; vertex `0` is the root (the vertex pinned at the
//! origin in the embedding counts).

use std::collections::HashMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::combinatorics::{factorial, falling_factorial};
use crate::error::{Error, Result};
use crate::expansion::{connected_graph_sum, connected_graph_sum_by_subsets, Polymer};
use crate::lattice::{pair_potential, ModelParams, SiteSet, Spin, SpinConfiguration};
use crate::region::stability_constant;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabeledTree {
    n: usize,
    edges: Vec<(usize, usize)>,
    degrees: Vec<usize>,
}

impl LabeledTree {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("a tree needs at least one vertex"));
        }
        if edges.len() != n - 1 {
            return Err(Error::domain(format!("{} edges for {n} vertices", edges.len())));
        }
        let mut degrees = vec![0; n];
        let mut parent: Vec<usize> = (0..n).collect();
        fn root(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        for &(a, b) in &edges {
            if a >= n || b >= n || a == b {
                return Err(Error::domain(format!("bad edge ({a}, {b})")));
            }
            let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
            if ra == rb {
                return Err(Error::domain("edges contain a cycle"));
            }
            parent[ra] = rb;
            degrees[a] += 1;
            degrees[b] += 1;
        }
        Ok(LabeledTree { n, edges, degrees })
    }

    /// Decodes a Prüfer sequence of length `n - 2` over `0..n`.
    pub fn from_prufer(n: usize, seq: &[usize]) -> Result<Self> {
        if n < 2 || seq.len() != n - 2 || seq.iter().any(|&v| v >= n) {
            return Err(Error::domain("invalid Prüfer sequence"));
        }
        let mut degree = vec![1usize; n];
        for &v in seq {
            degree[v] += 1;
        }
        let mut edges = Vec::with_capacity(n - 1);
        for &v in seq {
            let leaf = (0..n).find(|&u| degree[u] == 1).expect("a leaf always exists");
            edges.push((leaf, v));
            degree[leaf] -= 1;
            degree[v] -= 1;
        }
        let mut last = (0..n).filter(|&u| degree[u] == 1);
        let (a, b) = (last.next().unwrap(), last.next().unwrap());
        edges.push((a, b));
        LabeledTree::new(n, edges)
    }

    pub fn path(n: usize) -> Self {
        LabeledTree::new(n, (1..n).map(|i| (i - 1, i)).collect()).expect("paths are trees")
    }

    pub fn star(n: usize) -> Self {
        LabeledTree::new(n, (1..n).map(|i| (0, i)).collect()).expect("stars are trees")
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn max_degree(&self) -> usize {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    /// Vertices in BFS order from the root with their parents.
    fn bfs_from_root(&self) -> Vec<(usize, Option<usize>)> {
        let adj = self.adjacency();
        let mut order = vec![(0, None)];
        let mut seen = vec![false; self.n];
        seen[0] = true;
        let mut head = 0;
        while head < order.len() {
            let v = order[head].0;
            head += 1;
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    order.push((w, Some(v)));
                }
            }
        }
        order
    }

    /// Isomorphism code of the tree rooted at vertex 0.
    pub fn rooted_shape(&self) -> String {
        fn code(v: usize, parent: Option<usize>, adj: &[Vec<usize>]) -> String {
            let mut kids: Vec<String> = adj[v]
                .iter()
                .filter(|&&w| Some(w) != parent)
                .map(|&w| code(w, Some(v), adj))
                .collect();
            kids.sort();
            format!("({})", kids.concat())
        }
        code(0, None, &self.adjacency())
    }
}

impl fmt::Display for LabeledTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.edges.iter().map(|(a, b)| format!("{a}-{b}")).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Calls `visit` on every labeled tree on `n` vertices with all degrees at
/// most `max_degree`, in lexicographic order of Prüfer sequences.
pub fn for_each_bounded_tree(
    n: usize,
    max_degree: usize,
    budget: &Budget,
    mut visit: impl FnMut(&LabeledTree),
) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("trees need n >= 1"));
    }
    Error::check_budget("tree vertices", n, budget.tree_vertices)?;
    match n {
        1 => visit(&LabeledTree::new(1, vec![])?),
        2 if max_degree >= 1 => visit(&LabeledTree::new(2, vec![(0, 1)])?),
        2 => {}
        _ => {
            if max_degree < 1 {
                return Ok(());
            }
            // vertex v appears (degree - 1) times in the sequence
            let slots = max_degree - 1;
            let mut seq = Vec::with_capacity(n - 2);
            let mut used = vec![0usize; n];
            fn rec(
                n: usize,
                slots: usize,
                seq: &mut Vec<usize>,
                used: &mut [usize],
                visit: &mut dyn FnMut(&LabeledTree),
            ) {
                if seq.len() == n - 2 {
                    visit(&LabeledTree::from_prufer(n, seq).expect("valid sequence"));
                    return;
                }
                for v in 0..n {
                    if used[v] < slots {
                        used[v] += 1;
                        seq.push(v);
                        rec(n, slots, seq, used, visit);
                        seq.pop();
                        used[v] -= 1;
                    }
                }
            }
            rec(n, slots, &mut seq, &mut used, &mut visit);
        }
    }
    Ok(())
}

pub fn enumerate_bounded_trees(n: usize, max_degree: usize, budget: &Budget) -> Result<Vec<LabeledTree>> {
    let mut out = Vec::new();
    for_each_bounded_tree(n, max_degree, budget, |t| out.push(t.clone()))?;
    Ok(out)
}

/// Number of labeled trees with the given degree sequence:
/// `(n-2)! / Π (d_i - 1)!`.
pub fn degree_sequence_tree_count(degrees: &[usize]) -> Result<BigUint> {
    let n = degrees.len();
    if n < 2 {
        return Err(Error::domain("degree sequences need at least two vertices"));
    }
    if degrees.iter().any(|&d| d < 1) || degrees.iter().sum::<usize>() != 2 * n - 2 {
        return Err(Error::domain(format!("{degrees:?} is not a tree degree sequence")));
    }
    let den = degrees
        .iter()
        .fold(BigUint::one(), |acc, &d| acc * factorial(d as u64 - 1));
    Ok(factorial(n as u64 - 2) / den)
}

/// Exact number of injective maps of the tree into `Z^d` with the root at
/// the origin and every tree edge on a nearest-neighbour pair.
pub fn embedding_weight(tree: &LabeledTree, d: usize, budget: &Budget) -> Result<BigUint> {
    if d == 0 {
        return Err(Error::domain("dimension must be at least 1"));
    }
    Error::check_budget("embedding vertices", tree.len(), budget.embed_vertices)?;
    let order = tree.bfs_from_root();
    let n = tree.len();
    // slot of each vertex in `order`
    let mut slot = vec![0; n];
    for (k, &(v, _)) in order.iter().enumerate() {
        slot[v] = k;
    }
    let parent_slot: Vec<usize> = order
        .iter()
        .map(|&(_, p)| p.map_or(0, |p| slot[p]))
        .collect();
    let mut pos = vec![0i32; n * d];

    fn place(k: usize, n: usize, d: usize, parent_slot: &[usize], pos: &mut [i32]) -> u64 {
        if k == n {
            return 1;
        }
        let par = parent_slot[k];
        let mut total = 0;
        for axis in 0..d {
            for step in [-1, 1] {
                for c in 0..d {
                    pos[k * d + c] = pos[par * d + c];
                }
                pos[k * d + axis] += step;
                let clash = (0..k).any(|j| pos[j * d..j * d + d] == pos[k * d..k * d + d]);
                if !clash {
                    total += place(k + 1, n, d, parent_slot, pos);
                }
            }
        }
        total
    }
    Ok(BigUint::from(place(1, n, d, &parent_slot, &mut pos)))
}

/// Upper bound `(2d)!/(2d-d_1)! · Π_{i≥2} (2d-1)!/(2d-d_i)!` with the first
/// entry of `degrees` taken as the root.
pub fn embedding_weight_bound(degrees: &[usize], d: usize) -> Result<BigUint> {
    let two_d = 2 * d as u64;
    if let Some(&bad) = degrees.iter().find(|&&x| x as u64 > two_d) {
        return Err(Error::domain(format!("degree {bad} exceeds 2d = {two_d}")));
    }
    let Some((&root, rest)) = degrees.split_first() else {
        return Err(Error::domain("empty degree list"));
    };
    let mut acc = falling_factorial(two_d, root as u64);
    for &di in rest {
        if di == 0 {
            return Err(Error::domain("non-root vertices need degree >= 1"));
        }
        acc *= falling_factorial(two_d - 1, di as u64 - 1);
    }
    Ok(acc)
}

/// `2d (2d-1)^{n-2}`, valid for every bounded-degree tree on `n ≥ 2` vertices.
pub fn simplified_weight_bound(n: usize, d: usize) -> Result<BigUint> {
    if n < 2 || d < 1 {
        return Err(Error::domain("simplified bound needs n >= 2 and d >= 1"));
    }
    Ok(BigUint::from(2 * d) * BigUint::from(2 * d - 1).pow(n as u32 - 2))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnValue {
    /// `Σ_{τ ∈ T*_n} w_τ / (n-1)!`
    pub exact: BigUint,
    /// `n^{n-2} (2d)^{n-1} / (n-1)!`
    pub bound: BigRational,
}

impl CnValue {
    pub fn within_bound(&self) -> bool {
        BigRational::from_integer(BigInt::from(self.exact.clone())) <= self.bound
    }

    pub fn exact_f64(&self) -> f64 {
        self.exact.to_f64().unwrap_or(f64::INFINITY)
    }
}

/// Tree statistics for one `(n, d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeSummary {
    pub n: usize,
    pub d: usize,
    /// `|T*_n|`
    pub tree_count: u64,
    pub c_n: CnValue,
    pub max_weight: BigUint,
    pub max_weight_bound: BigUint,
    /// Whether `w_τ ≤ degree-sequence bound ≤ 2d(2d-1)^{n-2}` held for every tree.
    pub bounds_hold: bool,
}

pub fn c_n_bound(n: usize, d: usize) -> BigRational {
    if n <= 1 {
        return BigRational::one();
    }
    let num = BigInt::from(n).pow(n as u32 - 2) * BigInt::from(2 * d).pow(n as u32 - 1);
    BigRational::new(num, BigInt::from(factorial(n as u64 - 1)))
}

/// Walks `T*_n` once, memoising `w_τ` by rooted shape.
pub fn tree_summary(n: usize, d: usize, budget: &Budget) -> Result<TreeSummary> {
    if n == 0 || d == 0 {
        return Err(Error::domain("tree summary needs n >= 1 and d >= 1"));
    }
    Error::check_budget("embedding vertices", n, budget.embed_vertices)?;
    let mut memo: HashMap<String, BigUint> = HashMap::new();
    let mut total = BigUint::zero();
    let mut count = 0u64;
    let mut max_weight = BigUint::zero();
    let mut max_bound = BigUint::zero();
    let simplified = if n >= 2 { Some(simplified_weight_bound(n, d)?) } else { None };
    let mut bounds_hold = true;
    let mut failure = None;
    for_each_bounded_tree(n, 2 * d, budget, |t| {
        if failure.is_some() {
            return;
        }
        count += 1;
        let shape = t.rooted_shape();
        let w = match memo.get(&shape) {
            Some(w) => w.clone(),
            None => match embedding_weight(t, d, budget) {
                Ok(w) => {
                    memo.insert(shape, w.clone());
                    w
                }
                Err(e) => {
                    failure = Some(e);
                    return;
                }
            },
        };
        let b = embedding_weight_bound(t.degrees(), d).expect("degrees bounded by 2d");
        if w > b || simplified.as_ref().is_some_and(|s| &b > s) {
            bounds_hold = false;
        }
        total += &w;
        max_weight = max_weight.clone().max(w);
        max_bound = max_bound.clone().max(b);
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    let (exact, rem) = total.div_rem(&factorial(n as u64 - 1));
    if !rem.is_zero() {
        return Err(Error::Invariant(format!(
            "Σ w_τ = {total} is not divisible by (n-1)! for n = {n}"
        )));
    }
    Ok(TreeSummary {
        n,
        d,
        tree_count: count,
        c_n: CnValue {
            exact,
            bound: c_n_bound(n, d),
        },
        max_weight,
        max_weight_bound: max_bound,
        bounds_hold,
    })
}

pub fn c_n(n: usize, d: usize, budget: &Budget) -> Result<CnValue> {
    Ok(tree_summary(n, d, budget)?.c_n)
}

/// Both sides of the tree-graph inequality for one polymer and configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PyCheck {
    /// `|Σ_{g connected} Π (e^{-βV} - 1)|` via edge-subset enumeration.
    pub lhs: f64,
    /// The same modulus via the vertex-subset recursion.
    pub lhs_by_subsets: f64,
    /// `e^{β n h(y)} Σ_{τ ∈ T_R} Π (1 - e^{-β|V|})`
    pub rhs: f64,
    pub ok: bool,
}

pub const PY_SLACK: f64 = 1e-9;

pub fn py_inequality_check(
    sites: &SiteSet,
    cfg: &SpinConfiguration,
    p: &ModelParams,
    budget: &Budget,
) -> Result<PyCheck> {
    let n = sites.len();
    if n < 2 {
        return Err(Error::domain("the inequality needs |R| >= 2"));
    }
    cfg.check_matches(sites)?;
    let polymer = Polymer::new(sites.clone())?;
    let lhs = connected_graph_sum(&polymer, cfg, p, budget)?.abs();
    let lhs_by_subsets = connected_graph_sum_by_subsets(&polymer, cfg, p, budget)?.abs();
    let spins = cfg.spins();
    let weight = |i: usize, j: usize| {
        let v = pair_potential(spins[i], spins[j], sites.is_adjacent(i, j), p.y);
        -(-p.beta * v.abs()).exp_m1()
    };
    let mut tree_sum = 0.0;
    for_each_bounded_tree(n, n - 1, budget, |t| {
        tree_sum += t.edges().iter().map(|&(i, j)| weight(i, j)).product::<f64>();
    })?;
    let rhs = (p.beta * n as f64 * stability_constant(p.y, p.d)).exp() * tree_sum;
    Ok(PyCheck {
        lhs,
        lhs_by_subsets,
        rhs,
        ok: lhs <= rhs + PY_SLACK,
    })
}

/// A random inequality instance in `Z^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct PyInstance {
    pub sites: SiteSet,
    pub cfg: SpinConfiguration,
    pub params: ModelParams,
}

/// Seeded instances: connected `R ∋ 0` with `2 ≤ |R| ≤ 5` grown by random
/// nearest-neighbour steps, uniform `±1` spins, `β ∈ (0, 2]`, `y ∈ [-2, 1]`.
pub fn random_py_instances(seed: u64, count: usize) -> Vec<PyInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let steps = [[1, 0], [-1, 0], [0, 1], [0, -1]];
    (0..count)
        .map(|_| {
            let size = rng.gen_range(2..=5);
            let mut cells: Vec<Vec<i32>> = vec![vec![0, 0]];
            while cells.len() < size {
                let from = cells[rng.gen_range(0..cells.len())].clone();
                let s = steps[rng.gen_range(0..4)];
                let cand = vec![from[0] + s[0], from[1] + s[1]];
                if !cells.contains(&cand) {
                    cells.push(cand);
                }
            }
            let sites = SiteSet::new(2, cells).expect("distinct cells");
            let spins = (0..size)
                .map(|_| if rng.gen_bool(0.5) { Spin::Up } else { Spin::Down })
                .collect();
            let cfg = SpinConfiguration::new(&sites, spins).expect("sizes match");
            let beta = 2.0 * (1.0 - rng.gen::<f64>());
            let y = rng.gen_range(-2.0..=1.0);
            PyInstance {
                sites,
                cfg,
                params: ModelParams::new(2, -1.0, y, beta).expect("valid parameters"),
            }
        })
        .collect()
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::collections::BTreeMap;

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn tree_validation() {
        assert!(LabeledTree::new(3, vec![(0, 1)]).is_err());
        assert!(LabeledTree::new(3, vec![(0, 1), (1, 0)]).is_err());
        assert!(LabeledTree::new(3, vec![(0, 3), (1, 2)]).is_err());
        let t = LabeledTree::new(4, vec![(0, 1), (1, 2), (1, 3)]).unwrap();
        assert_eq!(t.degrees(), &[1, 3, 1, 1]);
        assert_eq!(t.degrees().iter().sum::<usize>(), 6);
    }

    #[test]
    fn prufer_round_trip_is_a_bijection() {
        let trees = enumerate_bounded_trees(6, 5, &b()).unwrap();
        assert_eq!(trees.len(), 1296);
        let distinct: std::collections::HashSet<Vec<(usize, usize)>> = trees
            .iter()
            .map(|t| {
                let mut e: Vec<_> = t.edges().iter().map(|&(a, c)| (a.min(c), a.max(c))).collect();
                e.sort();
                e
            })
            .collect();
        assert_eq!(distinct.len(), 1296);
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_bounded_trees(3, 4, &b()).unwrap().len(), 3);
        assert_eq!(enumerate_bounded_trees(5, 4, &b()).unwrap().len(), 125);
        assert_eq!(enumerate_bounded_trees(4, 2, &b()).unwrap().len(), 12);
        assert_eq!(enumerate_bounded_trees(1, 0, &b()).unwrap().len(), 1);
        assert!(matches!(enumerate_bounded_trees(10, 4, &b()), Err(Error::Budget { .. })));
        for t in enumerate_bounded_trees(7, 3, &b()).unwrap() {
            assert!(t.max_degree() <= 3);
        }
    }

    #[test]
    fn degree_sequence_examples() {
        assert_eq!(degree_sequence_tree_count(&[3, 1, 1, 1]).unwrap(), BigUint::from(1u32));
        assert_eq!(degree_sequence_tree_count(&[1, 2, 2, 1]).unwrap(), BigUint::from(2u32));
        assert_eq!(degree_sequence_tree_count(&[1, 1]).unwrap(), BigUint::from(1u32));
        assert!(degree_sequence_tree_count(&[2, 2, 2]).is_err());
        assert!(degree_sequence_tree_count(&[0, 2, 2, 2]).is_err());
        assert!(degree_sequence_tree_count(&[1]).is_err());
    }

    #[test]
    fn trees_grouped_by_degrees_match_formula() {
        for n in 2..=7 {
            let mut groups: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
            for_each_bounded_tree(n, 4, &b(), |t| *groups.entry(t.degrees().to_vec()).or_default() += 1)
                .unwrap();
            for (deg, count) in groups {
                assert_eq!(degree_sequence_tree_count(&deg).unwrap(), BigUint::from(count), "{deg:?}");
            }
        }
    }

    #[test]
    fn degree_sequences_partition_cayley() {
        fn compositions(n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == n {
                if left == 0 {
                    out.push(cur.clone());
                }
                return;
            }
            for d in 1..=left {
                cur.push(d);
                compositions(n, left - d, cur, out);
                cur.pop();
            }
        }
        for n in 2..=8usize {
            let mut seqs = Vec::new();
            compositions(n, 2 * n - 2, &mut Vec::new(), &mut seqs);
            let total: BigUint = seqs.iter().map(|s| degree_sequence_tree_count(s).unwrap()).sum();
            assert_eq!(total, BigUint::from(n).pow(n as u32 - 2));
        }
    }

    #[test]
    fn embedding_examples() {
        let edge = LabeledTree::path(2);
        assert_eq!(embedding_weight(&edge, 2, &b()).unwrap(), BigUint::from(4u32));
        assert_eq!(embedding_weight_bound(edge.degrees(), 2).unwrap(), BigUint::from(4u32));

        let path = LabeledTree::path(5);
        assert_eq!(embedding_weight(&path, 2, &b()).unwrap(), BigUint::from(100u32));
        assert_eq!(embedding_weight_bound(path.degrees(), 2).unwrap(), BigUint::from(108u32));

        let star = LabeledTree::star(5);
        assert_eq!(embedding_weight(&star, 2, &b()).unwrap(), BigUint::from(24u32));
        assert_eq!(embedding_weight_bound(star.degrees(), 2).unwrap(), BigUint::from(24u32));

        assert!(embedding_weight_bound(&[5, 1, 1, 1, 1, 1], 2).is_err());
        assert!(matches!(
            embedding_weight(&LabeledTree::path(9), 2, &b()),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn simplified_bound_examples() {
        assert_eq!(simplified_weight_bound(2, 2).unwrap(), BigUint::from(4u32));
        assert_eq!(simplified_weight_bound(5, 2).unwrap(), BigUint::from(108u32));
        assert_eq!(simplified_weight_bound(3, 3).unwrap(), BigUint::from(30u32));
        for t in enumerate_bounded_trees(3, 6, &b()).unwrap() {
            assert!(embedding_weight_bound(t.degrees(), 3).unwrap() <= BigUint::from(30u32));
        }
        assert!(simplified_weight_bound(1, 2).is_err());
    }

    #[test]
    fn weights_are_shape_invariant() {
        // relabeling non-root vertices cannot change w_τ
        let a = LabeledTree::new(4, vec![(0, 1), (1, 2), (1, 3)]).unwrap();
        let c = LabeledTree::new(4, vec![(0, 3), (3, 1), (3, 2)]).unwrap();
        assert_eq!(a.rooted_shape(), c.rooted_shape());
        assert_eq!(embedding_weight(&a, 2, &b()).unwrap(), embedding_weight(&c, 2, &b()).unwrap());
    }

    #[test]
    fn c_n_examples() {
        let c2 = c_n(2, 2, &b()).unwrap();
        assert_eq!(c2.exact, BigUint::from(4u32));
        assert_eq!(c2.bound, BigRational::from_integer(4.into()));
        let c3 = c_n(3, 2, &b()).unwrap();
        assert_eq!(c3.exact, BigUint::from(18u32));
        assert_eq!(c3.bound, BigRational::from_integer(24.into()));
        let c1 = c_n(1, 2, &b()).unwrap();
        assert_eq!(c1.exact, BigUint::one());
        assert_eq!(c1.bound, BigRational::one());
    }

    #[test]
    fn py_examples() {
        let pair = SiteSet::new(2, vec![vec![0, 0], vec![1, 0]]).unwrap();
        let up = SpinConfiguration::uniform(&pair, Spin::Up);
        let hot = ModelParams::new(2, -1.0, 0.0, 0.0).unwrap();
        let c = py_inequality_check(&pair, &up, &hot, &b()).unwrap();
        assert_eq!((c.lhs, c.rhs, c.ok), (0.0, 0.0, true));

        let p = ModelParams::new(2, -1.0, 0.0, 1.0).unwrap();
        let c = py_inequality_check(&pair, &up, &p, &b()).unwrap();
        assert_abs_diff_eq!(c.lhs, std::f64::consts::E - 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c.rhs, 4f64.exp() * (1.0 - (-1f64).exp()), epsilon = 1e-10);
        assert!(c.ok);
    }

    #[test]
    fn random_instances_are_reproducible_and_in_range() {
        let a = random_py_instances(7, 50);
        assert_eq!(a, random_py_instances(7, 50));
        for inst in &a {
            assert!((2..=5).contains(&inst.sites.len()));
            assert!(inst.sites.is_connected() && inst.sites.contains(&[0, 0]));
            assert!(inst.params.beta > 0.0 && inst.params.beta <= 2.0);
            assert!((-2.0..=1.0).contains(&inst.params.y));
            assert!(inst.cfg.spins().iter().all(|&s| s != Spin::Zero));
        }
    }
}
