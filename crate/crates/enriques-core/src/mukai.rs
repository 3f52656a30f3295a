//! Mukai vectors `v = (r, l, s)` with `s = chi - r` over a fixed
//! Neron-Severi model, the Mukai pairing, and the admissibility report for
//! building Enriques quotients of moduli spaces of stable sheaves.
//!
//! The Neron-Severi model is the rank-10 lattice `(E8(-1) (+) H)(2)`: line
//! bundles pulled back along a degree-two cover of an Enriques surface pair
//! evenly, so every `l^2` is divisible by 4. Under that parity, a primitive
//! vector with odd `chi` and `v^2 >= 0` yields a moduli space of dimension
//! `v^2 + 2 = 2n` with `n` odd, and the quotient has index 2.

use crate::lattice::{direct_sum, e8, hyperbolic_plane, twist, IntegralLattice, LatticeError};
use serde::{Deserialize, Serialize};

/// The rank-10 Neron-Severi model `(E8(-1) (+) H)(2)`.
pub fn ns_model() -> IntegralLattice {
    twist(&direct_sum(&[&e8(-1), &hyperbolic_plane()]), 2).expect("twist by 2 is valid")
}

/// Mukai vector `(r, l, s)`; the Euler characteristic is `chi = r + s`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MukaiVector {
    pub r: i64,
    pub l: Vec<i64>,
    pub s: i64,
}

impl MukaiVector {
    pub fn new(r: i64, l: Vec<i64>, s: i64) -> Self {
        MukaiVector { r, l, s }
    }

    /// Builds the vector from rank, first Chern class and Euler
    /// characteristic: `s = chi - r`.
    pub fn from_chi(r: i64, l: Vec<i64>, chi: i64) -> Self {
        MukaiVector { r, l, s: chi - r }
    }

    pub fn chi(&self) -> i64 {
        self.r + self.s
    }

    /// A vector is primitive when its coordinates have gcd 1.
    pub fn is_primitive(&self) -> bool {
        let mut g = num_integer::gcd(self.r.unsigned_abs(), self.s.unsigned_abs());
        for c in &self.l {
            g = num_integer::gcd(g, c.unsigned_abs());
        }
        g == 1
    }
}

/// Mukai pairing `(v, w) = l.l' - r*s' - r'*s` over the given
/// Neron-Severi lattice.
pub fn mukai_pairing(
    v: &MukaiVector,
    w: &MukaiVector,
    ns: &IntegralLattice,
) -> Result<i64, LatticeError> {
    let ll = ns.pair(&v.l, &w.l)?;
    Ok(ll - v.r * w.s - w.r * v.s)
}

/// `v^2 = l^2 - 2 r s`.
pub fn mukai_square(v: &MukaiVector, ns: &IntegralLattice) -> Result<i64, LatticeError> {
    mukai_pairing(v, v, ns)
}

/// One named hypothesis of the moduli construction and whether it holds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HypothesisCheck {
    pub name: &'static str,
    pub holds: bool,
    pub detail: String,
}

/// Full admissibility report for a Mukai vector over the scaled
/// Neron-Severi model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdmissibilityReport {
    pub vector: MukaiVector,
    pub checks: Vec<HypothesisCheck>,
    pub admissible: bool,
    pub square: i64,
    /// Moduli-space dimension `v^2 + 2` (when admissible).
    pub dim: Option<i64>,
    /// Half-dimension `n = (v^2 + 2) / 2` (when admissible); always odd.
    pub n: Option<i64>,
    /// The quotient is an Enriques manifold of this dimension and index.
    pub quotient_dim: Option<i64>,
    pub quotient_index: Option<u64>,
}

/// Checks the hypotheses `l` in the model, `l^2 = 0 mod 4`, `chi` odd,
/// primitivity, and `v^2 >= 0`, reporting each by name. When all hold, the
/// report carries `dim = v^2 + 2`, the odd half-dimension `n`, and the
/// quotient dimension/index.
pub fn moduli_admissibility(
    v: &MukaiVector,
    ns: &IntegralLattice,
) -> Result<AdmissibilityReport, LatticeError> {
    let square = mukai_square(v, ns)?;
    let l_sq = ns.norm(&v.l)?;
    let chi = v.chi();

    let mut checks = Vec::new();
    checks.push(HypothesisCheck {
        name: "l_squared_divisible_by_4",
        holds: l_sq.rem_euclid(4) == 0,
        detail: format!("l^2 = {l_sq}"),
    });
    checks.push(HypothesisCheck {
        name: "chi_odd",
        holds: chi.rem_euclid(2) == 1,
        detail: format!("chi = {chi}"),
    });
    checks.push(HypothesisCheck {
        name: "primitive",
        holds: v.is_primitive(),
        detail: format!("gcd of coordinates of (r, l, s) = ({}, ..., {})", v.r, v.s),
    });
    checks.push(HypothesisCheck {
        name: "square_nonnegative",
        holds: square >= 0,
        detail: format!("v^2 = {square}"),
    });

    let admissible = checks.iter().all(|c| c.holds);
    let (dim, n, quotient_dim, quotient_index) = if admissible {
        let dim = square + 2;
        let n = dim / 2;
        // With l^2 = 0 mod 4 and chi odd, v^2 = 0 mod 4, so n is odd.
        debug_assert_eq!(n.rem_euclid(2), 1);
        (Some(dim), Some(n), Some(dim), Some(2))
    } else {
        (None, None, None, None)
    };

    Ok(AdmissibilityReport {
        vector: v.clone(),
        checks,
        admissible,
        square,
        dim,
        n,
        quotient_dim,
        quotient_index,
    })
}
