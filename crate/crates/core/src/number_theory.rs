//! Integer utilities behind every CCPS index set.
//!
//! All arithmetic here is exact; nothing in this module touches floating
//! point.

use std::fmt;

use crate::error::{Error, Result};

/// Greatest common divisor by Euclid's algorithm.
///
/// Defined for positive arguments; `gcd(a, 0)` returns `a` as a convenience.
pub fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Euler's totient, computed from the prime factorisation of `n`.
pub fn totient(n: usize) -> usize {
    assert!(n >= 1, "totient is defined for n >= 1");
    let mut rest = n;
    let mut phi = n;
    let mut p = 2;
    while p * p <= rest {
        if rest.is_multiple_of(p) {
            while rest.is_multiple_of(p) {
                rest /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if rest > 1 {
        phi -= phi / rest;
    }
    phi
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: usize) -> Vec<usize> {
    assert!(n >= 1, "divisors are defined for n >= 1");
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// The reduced-residue half set `{a : 1 <= a <= q/2, gcd(a, q) = 1}`.
///
/// For `q` in `{1, 2}` this returns `[1]`, the only valid frequency index
/// for those periods.
pub fn half_residues(q: usize) -> Vec<usize> {
    assert!(q >= 1, "half_residues is defined for q >= 1");
    if q <= 2 {
        return vec![1];
    }
    (1..=q / 2).filter(|&a| gcd(a, q) == 1).collect()
}

/// Identifies one complex conjugate pair sum `c_{q,k}` and its subspace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CcpsId {
    q: usize,
    k: usize,
}

impl CcpsId {
    pub fn new(q: usize, k: usize) -> Result<Self> {
        let reason = if q == 0 {
            Some("period must be at least 1")
        } else if q <= 2 && k != 1 {
            Some("k must be 1 when q is 1 or 2")
        } else if q >= 3 && (k == 0 || k > q / 2) {
            Some("k must lie in 1..=floor(q/2)")
        } else if q >= 3 && gcd(k, q) != 1 {
            Some("k must be coprime to q")
        } else {
            None
        };
        match reason {
            Some(reason) => Err(Error::InvalidId { q, k, reason }),
            None => Ok(Self { q, k }),
        }
    }

    pub fn q(self) -> usize {
        self.q
    }

    pub fn k(self) -> usize {
        self.k
    }

    /// Dimension of the subspace: 1 for q in {1, 2}, 2 otherwise.
    pub fn dim(self) -> usize {
        if self.q <= 2 {
            1
        } else {
            2
        }
    }

    /// Every valid id for period `q`, k ascending.
    pub fn all_for_period(q: usize) -> Vec<CcpsId> {
        half_residues(q)
            .into_iter()
            .map(|k| CcpsId { q, k })
            .collect()
    }

    /// Every subspace id that participates in a length-`n` decomposition,
    /// divisors ascending then k ascending.
    pub fn all_for_length(n: usize) -> Vec<CcpsId> {
        divisors(n)
            .into_iter()
            .flat_map(CcpsId::all_for_period)
            .collect()
    }
}

impl fmt::Display for CcpsId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.q, self.k)
    }
}
