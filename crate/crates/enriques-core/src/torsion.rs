//! Exact arithmetic for torsion points of elliptic curves and their products.
//!
//! A torsion point of `C/(Z + tau*Z)` is stored as a pair of residues `(a, b)`
//! over a level `N`, representing `(a + b*tau)/N`. Points are kept in reduced
//! form (`gcd(a, b, N) = 1`), so the stored level is exactly the order of the
//! point and equality is structural across mixed input levels.
//!
//! Complex multiplication by the small roots of unity `-1, omega, i, zeta`
//! acts through explicit 2x2 integer matrices on the period basis `(1, tau)`;
//! affine automorphisms combine one such linear part per factor of a product
//! torus with a torsion translation.

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

/// Largest accepted torsion level; keeps all residue arithmetic inside `i64`.
pub const MAX_LEVEL: u64 = 1 << 31;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum TorsionError {
    #[error("level must be positive and at most {MAX_LEVEL}")]
    InvalidLevel,
    #[error("{root:?} requires the {required:?} period basis, got {got:?}")]
    BasisMismatch {
        root: CycloTag,
        required: PeriodBasis,
        got: PeriodBasis,
    },
    #[error("point of order {order} does not live in the level-{level} torsion")]
    IncompatibleLevel { order: u64, level: u64 },
    #[error("automorphism order search exceeded bound {0}")]
    OrderSearchExceeded(u64),
    #[error("cannot parse point from {input:?}: {reason}")]
    Parse { input: String, reason: &'static str },
}

/// Period basis of an elliptic curve `C/(Z + tau*Z)`.
///
/// `Generic` leaves `tau` arbitrary and admits only `-1` as a linear
/// automorphism fixing the origin; `Gauss` is `tau = i`, `Eisenstein` is
/// `tau = zeta = exp(2*pi*i/6)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PeriodBasis {
    Generic,
    Gauss,
    Eisenstein,
}

/// Root of unity acting by complex multiplication.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CycloTag {
    /// `-1`, order 2, available on every basis.
    MinusOne,
    /// `omega = exp(2*pi*i/3)`, order 3, Eisenstein basis.
    Omega,
    /// `i = exp(2*pi*i/4)`, order 4, Gauss basis.
    I,
    /// `zeta = exp(2*pi*i/6)`, order 6, Eisenstein basis.
    Zeta,
}

impl CycloTag {
    pub fn multiplicative_order(self) -> u64 {
        match self {
            CycloTag::MinusOne => 2,
            CycloTag::Omega => 3,
            CycloTag::I => 4,
            CycloTag::Zeta => 6,
        }
    }

    /// The basis forced by the root, if any. `-1` works everywhere.
    pub fn required_basis(self) -> Option<PeriodBasis> {
        match self {
            CycloTag::MinusOne => None,
            CycloTag::Omega | CycloTag::Zeta => Some(PeriodBasis::Eisenstein),
            CycloTag::I => Some(PeriodBasis::Gauss),
        }
    }
}

/// 2x2 integer matrix acting on the period basis `(1, tau)` by columns:
/// the image of a point with coordinates `(a, b)` is `M * (a, b)^T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mat2(pub [[i64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[1, 0], [0, 1]]);
    pub const MINUS_IDENTITY: Mat2 = Mat2([[-1, 0], [0, -1]]);

    pub fn mul(self, rhs: Mat2) -> Mat2 {
        let a = self.0;
        let b = rhs.0;
        let mut out = [[0i64; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Mat2(out)
    }

    pub fn add(self, rhs: Mat2) -> Mat2 {
        let mut out = [[0i64; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = self.0[i][j] + rhs.0[i][j];
            }
        }
        Mat2(out)
    }

    pub fn scale(self, k: i64) -> Mat2 {
        Mat2([
            [self.0[0][0] * k, self.0[0][1] * k],
            [self.0[1][0] * k, self.0[1][1] * k],
        ])
    }

    pub fn pow(self, mut k: u64) -> Mat2 {
        let mut base = self;
        let mut acc = Mat2::IDENTITY;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(base);
            }
        }
        acc
    }

    pub fn det(self) -> i64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }
}

/// A root of unity together with the period basis it acts on and its
/// integral matrix on `(1, tau)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclotomicClass {
    tag: CycloTag,
    basis: PeriodBasis,
    matrix: Mat2,
}

impl CyclotomicClass {
    /// Pairs a root with a basis. Rejects incompatible pairs, e.g. `i` on the
    /// Eisenstein basis.
    pub fn new(tag: CycloTag, basis: PeriodBasis) -> Result<Self, TorsionError> {
        if let Some(required) = tag.required_basis() {
            if basis != required {
                return Err(TorsionError::BasisMismatch {
                    root: tag,
                    required,
                    got: basis,
                });
            }
        }
        let matrix = match tag {
            CycloTag::MinusOne => Mat2::MINUS_IDENTITY,
            // omega * 1 = zeta - 1, omega * zeta = -1
            CycloTag::Omega => Mat2([[-1, -1], [1, 0]]),
            // i * 1 = i, i * i = -1
            CycloTag::I => Mat2([[0, -1], [1, 0]]),
            // zeta * 1 = zeta, zeta * zeta = zeta - 1
            CycloTag::Zeta => Mat2([[0, -1], [1, 1]]),
        };
        Ok(CyclotomicClass { tag, basis, matrix })
    }

    pub fn tag(&self) -> CycloTag {
        self.tag
    }

    pub fn basis(&self) -> PeriodBasis {
        self.basis
    }

    pub fn matrix(&self) -> Mat2 {
        self.matrix
    }

    /// Applies the complex multiplication to a torsion point. The level is
    /// preserved (the matrices are unimodular).
    pub fn apply(&self, p: &TorusPoint) -> TorusPoint {
        p.apply_matrix(self.matrix)
    }
}

/// Multiplication by a root of unity on a torsion point; `cm_apply(xi, p)`
/// is `xi.apply(p)` spelled as a free function.
pub fn cm_apply(xi: &CyclotomicClass, p: &TorusPoint) -> TorusPoint {
    xi.apply(p)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Torsion point `(a + b*tau)/N` of `C/(Z + tau*Z)`, stored in reduced form:
/// `0 <= a, b < N` and `gcd(a, b, N) = 1`. The reduced level is the exact
/// order of the point; the origin is `(0 + 0*tau)/1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TorusPoint {
    a: u64,
    b: u64,
    level: u64,
}

impl TorusPoint {
    pub const ZERO: TorusPoint = TorusPoint { a: 0, b: 0, level: 1 };

    /// Builds `(a + b*tau)/n`, normalizing residues and reducing the fraction.
    pub fn new(a: i64, b: i64, n: u64) -> Result<Self, TorsionError> {
        if n == 0 || n > MAX_LEVEL {
            return Err(TorsionError::InvalidLevel);
        }
        let m = n as i64;
        let a = a.rem_euclid(m) as u64;
        let b = b.rem_euclid(m) as u64;
        let g = gcd(gcd(a, b), n);
        Ok(TorusPoint {
            a: a / g,
            b: b / g,
            level: n / g,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.level == 1
    }

    /// The exact order in the torsion group.
    pub fn order(&self) -> u64 {
        self.level
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    /// Residues `(a, b)` of this point lifted to the given level, which must
    /// be a multiple of the order.
    pub fn lift(&self, level: u64) -> Result<(u64, u64), TorsionError> {
        if level == 0 || level % self.level != 0 {
            return Err(TorsionError::IncompatibleLevel {
                order: self.level,
                level,
            });
        }
        let k = level / self.level;
        Ok((self.a * k, self.b * k))
    }

    pub fn add(&self, other: &TorusPoint) -> TorusPoint {
        let n = lcm(self.level, other.level);
        let (a1, b1) = self.lift(n).expect("lcm is a common level");
        let (a2, b2) = other.lift(n).expect("lcm is a common level");
        TorusPoint::new(((a1 + a2) % n) as i64, ((b1 + b2) % n) as i64, n)
            .expect("combined level within bounds")
    }

    pub fn neg(&self) -> TorusPoint {
        TorusPoint::new(-(self.a as i64), -(self.b as i64), self.level).expect("level is positive")
    }

    pub fn sub(&self, other: &TorusPoint) -> TorusPoint {
        self.add(&other.neg())
    }

    pub fn scalar_mul(&self, k: i64) -> TorusPoint {
        let n = self.level as i64;
        let k = k.rem_euclid(n);
        TorusPoint::new(self.a as i64 * k, self.b as i64 * k, self.level)
            .expect("level is positive")
    }

    pub fn apply_matrix(&self, m: Mat2) -> TorusPoint {
        let (a, b) = (self.a as i128, self.b as i128);
        let n = self.level as i128;
        let x = (m.0[0][0] as i128 * a + m.0[0][1] as i128 * b).rem_euclid(n);
        let y = (m.0[1][0] as i128 * a + m.0[1][1] as i128 * b).rem_euclid(n);
        TorusPoint::new(x as i64, y as i64, self.level).expect("level is positive")
    }

    /// Canonical text form `a/N+b/N*tau` of the reduced point.
    pub fn format(&self) -> String {
        format!("{}/{}+{}/{}*tau", self.a, self.level, self.b, self.level)
    }

    /// Parses `a/N`, `b/N*tau`, `a/N+b/N*tau`, or `0`. Inverse of [`format`]
    /// on reduced points.
    ///
    /// [`format`]: TorusPoint::format
    pub fn parse(input: &str) -> Result<Self, TorsionError> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        let err = |reason| TorsionError::Parse {
            input: input.to_string(),
            reason,
        };
        if s == "0" {
            return Ok(TorusPoint::ZERO);
        }
        if s.is_empty() {
            return Err(err("empty input"));
        }
        // Split into at most two fraction terms on '+' (not counting a leading sign).
        let mut terms = Vec::new();
        let mut start = 0usize;
        for (idx, c) in s.char_indices() {
            if c == '+' && idx > start {
                terms.push(&s[start..idx]);
                start = idx + 1;
            }
        }
        terms.push(&s[start..]);
        if terms.len() > 2 {
            return Err(err("too many terms"));
        }
        let mut one_part: Option<(i64, u64)> = None;
        let mut tau_part: Option<(i64, u64)> = None;
        for term in terms {
            let (frac, is_tau) = match term.strip_suffix("*tau") {
                Some(rest) => (rest, true),
                None => (term, false),
            };
            let (num_s, den_s) = frac.split_once('/').ok_or_else(|| err("missing '/'"))?;
            let num: i64 = num_s.parse().map_err(|_| err("bad numerator"))?;
            let den: u64 = den_s.parse().map_err(|_| err("bad denominator"))?;
            if den == 0 {
                return Err(TorsionError::InvalidLevel);
            }
            let slot = if is_tau { &mut tau_part } else { &mut one_part };
            if slot.is_some() {
                return Err(err("duplicate term"));
            }
            *slot = Some((num, den));
        }
        let (a, na) = one_part.unwrap_or((0, 1));
        let (b, nb) = tau_part.unwrap_or((0, 1));
        let n = lcm(na, nb);
        TorusPoint::new(a * (n / na) as i64, b * (n / nb) as i64, n)
    }
}

/// Builds the torsion point `(a + b*tau)/n`.
pub fn make_point(a: i64, b: i64, n: u64) -> Result<TorusPoint, TorsionError> {
    TorusPoint::new(a, b, n)
}

impl fmt::Display for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format())
    }
}

impl PartialOrd for TorusPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TorusPoint {
    /// Orders by the exact fractions `(a/N, b/N)`, so the comparison is
    /// independent of the level a point was created at.
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = (self.a as u128) * (other.level as u128);
        let rhs = (other.a as u128) * (self.level as u128);
        lhs.cmp(&rhs).then_with(|| {
            let lhs = (self.b as u128) * (other.level as u128);
            let rhs = (other.b as u128) * (self.level as u128);
            lhs.cmp(&rhs)
        })
    }
}

/// Point of a product `E x F` of two elliptic curves; the group law is
/// componentwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProductPoint {
    pub e: TorusPoint,
    pub f: TorusPoint,
}

impl ProductPoint {
    pub const ZERO: ProductPoint = ProductPoint {
        e: TorusPoint::ZERO,
        f: TorusPoint::ZERO,
    };

    pub fn new(e: TorusPoint, f: TorusPoint) -> Self {
        ProductPoint { e, f }
    }

    pub fn add(&self, other: &ProductPoint) -> ProductPoint {
        ProductPoint {
            e: self.e.add(&other.e),
            f: self.f.add(&other.f),
        }
    }

    pub fn neg(&self) -> ProductPoint {
        ProductPoint {
            e: self.e.neg(),
            f: self.f.neg(),
        }
    }

    pub fn sub(&self, other: &ProductPoint) -> ProductPoint {
        self.add(&other.neg())
    }

    pub fn scalar_mul(&self, k: i64) -> ProductPoint {
        ProductPoint {
            e: self.e.scalar_mul(k),
            f: self.f.scalar_mul(k),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.e.is_zero() && self.f.is_zero()
    }

    pub fn order(&self) -> u64 {
        lcm(self.e.order(), self.f.order())
    }
}

impl fmt::Display for ProductPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.e, self.f)
    }
}

/// Torsion levels of the two factors of a product torus model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Levels {
    pub e: u64,
    pub f: u64,
}

impl Levels {
    pub fn new(e: u64, f: u64) -> Result<Self, TorsionError> {
        if e == 0 || f == 0 || e > MAX_LEVEL || f > MAX_LEVEL {
            return Err(TorsionError::InvalidLevel);
        }
        Ok(Levels { e, f })
    }

    pub fn contains(&self, p: &ProductPoint) -> bool {
        self.e % p.e.order() == 0 && self.f % p.f.order() == 0
    }
}

/// Affine automorphism `p -> M(p) + t` of a product torus, with an integral
/// linear part per factor and a torsion translation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineAuto {
    pub linear_e: Mat2,
    pub linear_f: Mat2,
    pub translation: ProductPoint,
}

impl AffineAuto {
    pub fn identity() -> Self {
        AffineAuto {
            linear_e: Mat2::IDENTITY,
            linear_f: Mat2::IDENTITY,
            translation: ProductPoint::ZERO,
        }
    }

    pub fn translation_by(t: ProductPoint) -> Self {
        AffineAuto {
            linear_e: Mat2::IDENTITY,
            linear_f: Mat2::IDENTITY,
            translation: t,
        }
    }

    pub fn is_pure_translation(&self) -> bool {
        self.linear_e == Mat2::IDENTITY && self.linear_f == Mat2::IDENTITY
    }

    pub fn apply_linear(&self, p: &ProductPoint) -> ProductPoint {
        ProductPoint {
            e: p.e.apply_matrix(self.linear_e),
            f: p.f.apply_matrix(self.linear_f),
        }
    }

    pub fn apply(&self, p: &ProductPoint) -> ProductPoint {
        self.apply_linear(p).add(&self.translation)
    }

    /// Composition `self . other` (apply `other` first).
    pub fn compose(&self, other: &AffineAuto) -> AffineAuto {
        AffineAuto {
            linear_e: self.linear_e.mul(other.linear_e),
            linear_f: self.linear_f.mul(other.linear_f),
            translation: self.apply(&other.translation),
        }
    }

    pub fn pow(&self, k: u64) -> AffineAuto {
        let mut acc = AffineAuto::identity();
        for _ in 0..k {
            acc = self.compose(&acc);
        }
        acc
    }

    /// Whether this automorphism is the identity on all points of the given
    /// torsion levels: both linear parts congruent to the identity and the
    /// translation trivial.
    pub fn is_identity_on(&self, levels: Levels) -> bool {
        mat_is_identity_mod(self.linear_e, levels.e)
            && mat_is_identity_mod(self.linear_f, levels.f)
            && self.translation.is_zero()
    }
}

fn mat_is_identity_mod(m: Mat2, n: u64) -> bool {
    let n = n as i64;
    (m.0[0][0] - 1).rem_euclid(n) == 0
        && m.0[0][1].rem_euclid(n) == 0
        && m.0[1][0].rem_euclid(n) == 0
        && (m.0[1][1] - 1).rem_euclid(n) == 0
}

/// Least `k >= 1` with `g^k` the identity on the level model.
///
/// Requires the translation to live inside the model torsion; the search is
/// bounded and errors out instead of looping on a non-torsion input.
pub fn auto_order(g: &AffineAuto, levels: Levels) -> Result<u64, TorsionError> {
    if !levels.contains(&g.translation) {
        return Err(TorsionError::IncompatibleLevel {
            order: g.translation.order(),
            level: if levels.e % g.translation.e.order() != 0 {
                levels.e
            } else {
                levels.f
            },
        });
    }
    let bound = 24 * levels.e * levels.f;
    let mut acc = *g;
    for k in 1..=bound {
        if acc.is_identity_on(levels) {
            return Ok(k);
        }
        acc = g.compose(&acc);
    }
    Err(TorsionError::OrderSearchExceeded(bound))
}

/// Finite subgroup of a product torus generated by translations, stored as
/// the full sorted element list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteSubgroup {
    elements: Vec<ProductPoint>,
}

impl FiniteSubgroup {
    pub fn trivial() -> Self {
        FiniteSubgroup {
            elements: vec![ProductPoint::ZERO],
        }
    }

    /// Closure of the generators under addition and negation.
    pub fn from_generators(generators: &[ProductPoint]) -> Self {
        let mut elements = vec![ProductPoint::ZERO];
        let mut frontier = vec![ProductPoint::ZERO];
        while let Some(p) = frontier.pop() {
            for g in generators {
                for q in [p.add(g), p.sub(g)] {
                    if !elements.contains(&q) {
                        elements.push(q);
                        frontier.push(q);
                    }
                }
            }
        }
        elements.sort();
        FiniteSubgroup { elements }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn elements(&self) -> &[ProductPoint] {
        &self.elements
    }

    pub fn contains(&self, p: &ProductPoint) -> bool {
        self.elements.binary_search(p).is_ok()
    }

    /// Image under the projection to the second factor, as a sorted set.
    pub fn f_projection(&self) -> Vec<TorusPoint> {
        let mut out: Vec<TorusPoint> = self.elements.iter().map(|p| p.f).collect();
        out.sort();
        out.dedup();
        out
    }

    /// Image under the projection to the first factor, as a sorted set.
    pub fn e_projection(&self) -> Vec<TorusPoint> {
        let mut out: Vec<TorusPoint> = self.elements.iter().map(|p| p.e).collect();
        out.sort();
        out.dedup();
        out
    }

    /// Exponent of the projection to the first factor.
    pub fn e_exponent(&self) -> u64 {
        self.elements
            .iter()
            .fold(1, |acc, p| lcm(acc, p.e.order()))
    }

    /// Exponent of the projection to the second factor.
    pub fn f_exponent(&self) -> u64 {
        self.elements
            .iter()
            .fold(1, |acc, p| lcm(acc, p.f.order()))
    }
}

/// Canonical representative of the coset `p + T`: the lexicographic minimum
/// of the orbit. Idempotent, and `rep(p) == rep(q)` iff `p - q` lies in `T`.
pub fn quotient_rep(p: &ProductPoint, t: &FiniteSubgroup) -> ProductPoint {
    t.elements
        .iter()
        .map(|s| p.add(s))
        .min()
        .expect("subgroup contains the identity")
}
