//! Integer invariants of Enriques manifolds: index constraints, Hodge
//! numbers, Euler characteristics, and the reference invariants of the four
//! known hyperkaehler families.
//!
//! An Enriques manifold of dimension `2n` has cyclic fundamental group whose
//! order `d >= 2` (the index) divides `n + 1` and satisfies
//! `phi(d) < b_2(X)` for the universal cover `X`. Both constraints are
//! implemented here, together with the published table of possible indices
//! per family. The published table and the `phi`-bound are known to disagree
//! in a few entries; [`index_table_diff`] reports the discrepancy explicitly
//! instead of silently preferring either side.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum NumericsError {
    #[error("index must satisfy d >= 2, got {0}")]
    IndexTooSmall(u64),
    #[error("index {d} does not divide n + 1 = {np1}")]
    IndexDoesNotDivide { d: u64, np1: u64 },
    #[error("half-dimension must satisfy n >= 1")]
    InvalidHalfDimension,
}

/// Dimension and index data of an Enriques manifold: `dim Y = 2n`, and the
/// fundamental group is cyclic of order `d` with `d >= 2` and `d | n + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnriquesShape {
    n: u64,
    d: u64,
}

impl EnriquesShape {
    pub fn new(n: u64, d: u64) -> Result<Self, NumericsError> {
        if n == 0 {
            return Err(NumericsError::InvalidHalfDimension);
        }
        if d < 2 {
            return Err(NumericsError::IndexTooSmall(d));
        }
        if (n + 1) % d != 0 {
            return Err(NumericsError::IndexDoesNotDivide { d, np1: n + 1 });
        }
        Ok(EnriquesShape { n, d })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn dim(&self) -> u64 {
        2 * self.n
    }
}

/// Euler's totient, by trial-division factorization.
pub fn euler_phi(d: u64) -> u64 {
    assert!(d >= 1, "euler_phi is defined for d >= 1");
    let mut n = d;
    let mut phi = d;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            phi = phi / p * (p - 1);
        }
        p += 1;
    }
    if n > 1 {
        phi = phi / n * (n - 1);
    }
    phi
}

/// Divisors `d >= 2` of `n + 1`: the indices allowed by the dimension of a
/// `2n`-dimensional Enriques manifold.
pub fn admissible_indices(n: u64) -> BTreeSet<u64> {
    assert!(n >= 1, "half-dimension must be at least 1");
    let np1 = n + 1;
    (2..=np1).filter(|d| np1 % d == 0).collect()
}

/// All `d >= 2` with `phi(d) < b2`. The set is finite since
/// `phi(d) >= sqrt(d/2)`; the search is bounded by `d_max`
/// (default `2 * b2^2`, which the inequality makes sufficient).
pub fn phi_bound_indices(b2: u64, d_max: Option<u64>) -> BTreeSet<u64> {
    assert!(b2 >= 2, "second Betti number must be at least 2");
    let d_max = d_max.unwrap_or(2 * b2 * b2);
    (2..=d_max).filter(|&d| euler_phi(d) < b2).collect()
}

/// The four known deformation families of hyperkaehler manifolds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// Hilbert scheme of n points on a K3 surface, dimension 2n.
    HilbK3 { n: u64 },
    /// Generalized Kummer variety of an abelian surface, dimension 2n.
    Kummer { n: u64 },
    /// O'Grady's 6-dimensional example.
    OGrady6,
    /// O'Grady's 10-dimensional example.
    OGrady10,
}

/// Reference numerical invariants of a hyperkaehler family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyInvariants {
    pub dim: u64,
    pub chi: u64,
    pub b2: u64,
}

/// The invariant table for the known families:
/// `dim, chi(O_X), b2` are `(2n, n+1, 23)`, `(2n, n+1, 7)`, `(6, 4, 8)`,
/// `(10, 6, 24)` respectively.
pub fn family_invariants(family: Family) -> FamilyInvariants {
    match family {
        Family::HilbK3 { n } => FamilyInvariants {
            dim: 2 * n,
            chi: n + 1,
            b2: 23,
        },
        Family::Kummer { n } => FamilyInvariants {
            dim: 2 * n,
            chi: n + 1,
            b2: 7,
        },
        Family::OGrady6 => FamilyInvariants {
            dim: 6,
            chi: 4,
            b2: 8,
        },
        Family::OGrady10 => FamilyInvariants {
            dim: 10,
            chi: 6,
            b2: 24,
        },
    }
}

impl Family {
    pub fn half_dimension(&self) -> u64 {
        family_invariants(*self).dim / 2
    }
}

/// Indices compatible with both constraints for a family: divisors of
/// `n + 1` that also pass the `phi(d) < b2` bound.
pub fn family_index_candidates(family: Family) -> BTreeSet<u64> {
    let inv = family_invariants(family);
    let n = inv.dim / 2;
    let divisors = admissible_indices(n);
    let phi_ok = phi_bound_indices(inv.b2, None);
    divisors.intersection(&phi_ok).copied().collect()
}

/// Hodge number `h^{p,0} = h^{0,p}` of an Enriques manifold of shape
/// `(n, d)`: `1` when `2d | p` and `p <= 2n`, else `0`.
pub fn hodge_h_p0(shape: EnriquesShape, p: u64) -> u64 {
    if p <= 2 * shape.n && p % (2 * shape.d) == 0 {
        1
    } else {
        0
    }
}

/// The full row `h^{0,0}, ..., h^{2n,0}`.
pub fn hodge_row(shape: EnriquesShape) -> Vec<u64> {
    (0..=2 * shape.n).map(|p| hodge_h_p0(shape, p)).collect()
}

/// `chi(O_Y) = (n+1)/d` for an Enriques manifold of shape `(n, d)`.
/// Integrality is guaranteed by the shape invariant `d | n + 1`.
pub fn chi_structure_sheaf(shape: EnriquesShape) -> u64 {
    (shape.n + 1) / shape.d
}

/// `chi(O_X)` of the hyperkaehler cover, from the invariant table.
pub fn family_chi(family: Family) -> u64 {
    family_invariants(family).chi
}

/// Published reference table of possible indices for the two infinite
/// families, stored verbatim. Known not to agree exactly with
/// [`phi_bound_indices`]; see [`index_table_diff`].
pub fn published_index_table(b2: u64) -> Option<BTreeSet<u64>> {
    match b2 {
        // Kummer-type row: 2-10, 12, 14, 18, 24
        7 => {
            let mut set: BTreeSet<u64> = (2..=10).collect();
            set.extend([12, 14, 18, 24]);
            Some(set)
        }
        // Hilbert-scheme row: 2-28, 30, 32, 33, 34, 36, 38, 40, 42, 44, 46, 50, 54, 66
        23 => {
            let mut set: BTreeSet<u64> = (2..=28).collect();
            set.extend([30, 32, 33, 34, 36, 38, 40, 42, 44, 46, 50, 54, 66]);
            Some(set)
        }
        _ => None,
    }
}

/// Structured comparison of the computed `phi`-bound set against the
/// published table for a given `b2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexTableDiff {
    pub b2: u64,
    pub computed: BTreeSet<u64>,
    pub published: BTreeSet<u64>,
    /// Entries the published table lists although the bound excludes them.
    pub published_only: BTreeSet<u64>,
    /// Entries the bound admits although the published table omits them.
    pub computed_only: BTreeSet<u64>,
}

/// Diffs the computed `phi(d) < b2` set against the published table.
/// Returns `None` when no table is stored for this `b2`.
pub fn index_table_diff(b2: u64) -> Option<IndexTableDiff> {
    let published = published_index_table(b2)?;
    let computed = phi_bound_indices(b2, None);
    let published_only = published.difference(&computed).copied().collect();
    let computed_only = computed.difference(&published).copied().collect();
    Some(IndexTableDiff {
        b2,
        computed,
        published,
        published_only,
        computed_only,
    })
}
