//! Exact integer helpers: factorials, falling factorials and binomials.

use num_bigint::BigUint;
use num_traits::{One, Zero};

pub fn factorial(n: u64) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// `n! / (n - k)!`, zero when `k > n`.
pub fn falling_factorial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    ((n - k + 1)..=n).fold(BigUint::one(), |acc, j| acc * j)
}

/// Exact `C(n, k)`; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        // acc = C(n, i) here, so the division is exact.
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Walks `C(top + j*top_step, bottom + j)` for `j = 0, 1, 2, ...` with
/// `top_step >= 1`, updating by small exact multiplications and one exact
/// division per step instead of recomputing each coefficient.
#[derive(Debug, Clone)]
pub struct BinomialWalk {
    top: u64,
    bottom: u64,
    top_step: u64,
    value: BigUint,
}

impl BinomialWalk {
    pub fn new(top: u64, bottom: u64, top_step: u64) -> Self {
        assert!(top_step >= 1, "top_step must be positive");
        assert!(bottom <= top, "walk must start inside the triangle");
        BinomialWalk {
            top,
            bottom,
            top_step,
            value: binomial(top, bottom),
        }
    }

    pub fn top(&self) -> u64 {
        self.top
    }

    pub fn bottom(&self) -> u64 {
        self.bottom
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    /// Advance to `C(top + top_step, bottom + 1)`.
    pub fn step(&mut self) {
        let (m, k, s) = (self.top, self.bottom, self.top_step);
        // C(m+s, k+1) / C(m, k) = (m+1)...(m+s) / ((k+1) (m-k+1)...(m-k+s-1))
        let mut num = std::mem::take(&mut self.value);
        for j in 1..=s {
            num *= m + j;
        }
        let mut den = BigUint::from(k + 1);
        for j in 1..s {
            den *= m - k + j;
        }
        self.value = num / den;
        self.top = m + s;
        self.bottom = k + 1;
    }
}
