//! Slow, independent reference implementations used only by the tests.

#![allow(dead_code)]

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub type Cell = Vec<i32>;

fn neighbours(c: &[i32]) -> Vec<Cell> {
    let mut out = Vec::with_capacity(2 * c.len());
    for axis in 0..c.len() {
        for step in [-1, 1] {
            let mut n = c.to_vec();
            n[axis] += step;
            out.push(n);
        }
    }
    out
}

fn normalise(mut cells: Vec<Cell>) -> Vec<Cell> {
    cells.sort();
    let first = cells[0].clone();
    for c in &mut cells {
        for (x, o) in c.iter_mut().zip(&first) {
            *x -= o;
        }
    }
    cells
}

/// `A_1..A_n` by growing every shape one cell at a time and deduplicating
/// translation classes through a sorted, origin-anchored normal form.
pub fn naive_fixed_counts(d: usize, n: usize) -> Vec<u64> {
    let mut level: HashSet<Vec<Cell>> = HashSet::new();
    level.insert(vec![vec![0; d]]);
    let mut counts = vec![1];
    for _ in 1..n {
        let mut next = HashSet::new();
        for shape in &level {
            for c in shape {
                for nb in neighbours(c) {
                    if !shape.contains(&nb) {
                        let mut grown = shape.clone();
                        grown.push(nb);
                        next.insert(normalise(grown));
                    }
                }
            }
        }
        counts.push(next.len() as u64);
        level = next;
    }
    counts
}

/// Every connected `n`-cell set containing the origin, as sorted cell lists.
pub fn naive_rooted_sets(d: usize, n: usize) -> Vec<Vec<Cell>> {
    let mut level: HashSet<Vec<Cell>> = HashSet::new();
    level.insert(vec![vec![0; d]]);
    for _ in 1..n {
        let mut next = HashSet::new();
        for set in &level {
            for c in set {
                for nb in neighbours(c) {
                    if !set.contains(&nb) {
                        let mut grown = set.clone();
                        grown.push(nb);
                        grown.sort();
                        next.insert(grown);
                    }
                }
            }
        }
        level = next;
    }
    let mut out: Vec<_> = level.into_iter().collect();
    out.sort();
    out
}

/// Number of self-avoiding walks of `steps` steps from the origin in `Z^d`.
pub fn self_avoiding_walks(d: usize, steps: usize) -> u64 {
    fn go(path: &mut Vec<Cell>, left: usize) -> u64 {
        if left == 0 {
            return 1;
        }
        let last = path.last().unwrap().clone();
        let mut total = 0;
        for nb in neighbours(&last) {
            if !path.contains(&nb) {
                path.push(nb);
                total += go(path, left - 1);
                path.pop();
            }
        }
        total
    }
    go(&mut vec![vec![0; d]], steps)
}

/// Exact determinant by fraction-free Gaussian elimination.
pub fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// Spanning trees of the nearest-neighbour graph induced on `cells`, by the
/// matrix-tree theorem.
pub fn spanning_tree_count(cells: &[Cell]) -> BigInt {
    let n = cells.len();
    let adj = |i: usize, j: usize| {
        cells[i]
            .iter()
            .zip(&cells[j])
            .map(|(a, b)| (a - b).abs())
            .sum::<i32>()
            == 1
    };
    // Laplacian with the first row and column removed
    let mut m = vec![vec![BigInt::zero(); n - 1]; n - 1];
    for i in 1..n {
        for j in 0..n {
            if i != j && adj(i, j) {
                m[i - 1][i - 1] += 1;
                if j >= 1 {
                    m[i - 1][j - 1] -= 1;
                }
            }
        }
    }
    bareiss_det(m)
}

/// `Σ_{S ∋ 0 connected, |S| = n} κ(S)`: each embedded labeled tree with the
/// root pinned at the origin is a spanning tree of its image, with the
/// `n - 1` non-root labels free.
pub fn c_n_by_matrix_tree(d: usize, n: usize) -> BigInt {
    naive_rooted_sets(d, n)
        .iter()
        .map(|s| spanning_tree_count(s))
        .sum()
}
