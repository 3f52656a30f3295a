//! Integral quadratic lattices: Gram-matrix constructors, isometric
//! involutions, invariant/antiinvariant sublattices, discriminant groups and
//! bounded root enumeration.
//!
//! The distinguished objects are the K3 lattice `E8(-1)^2 (+) H^3` with the
//! Enriques involution `(x, y, z1, z2, z3) -> (y, x, -z1, z3, z2)`, and its
//! antiinvariant sublattice, which is isometric to `E8(-2) (+) H (+) H(2)`
//! via an explicit basis.

use crate::linalg::{determinant, inertia, kernel_basis, IMat, Inertia};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("Gram matrix must be square and symmetric")]
    NotSymmetric,
    #[error("lattice is degenerate (determinant zero)")]
    Degenerate,
    #[error("twist factor must be nonzero")]
    ZeroTwist,
    #[error("matrix is not an isometric involution of the lattice")]
    NotAnInvolution,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("enumeration too large: {candidates} candidate vectors (limit {limit})")]
    EnumerationTooLarge { candidates: u128, limit: u128 },
}

/// Nondegenerate integral lattice given by a symmetric Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegralLattice {
    gram: Vec<Vec<i64>>,
}

impl IntegralLattice {
    pub fn new(gram: Vec<Vec<i64>>) -> Result<Self, LatticeError> {
        let n = gram.len();
        if gram.iter().any(|row| row.len() != n) {
            return Err(LatticeError::NotSymmetric);
        }
        for i in 0..n {
            for j in 0..n {
                if gram[i][j] != gram[j][i] {
                    return Err(LatticeError::NotSymmetric);
                }
            }
        }
        Ok(IntegralLattice { gram })
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn to_imat(&self) -> IMat {
        IMat::from_i64(&self.gram)
    }

    pub fn determinant(&self) -> BigInt {
        determinant(&self.to_imat())
    }

    pub fn is_nondegenerate(&self) -> bool {
        !self.determinant().is_zero()
    }

    /// Even lattice: all self-intersections even (equivalently, the diagonal).
    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram[i][i] % 2 == 0)
    }

    /// Exact inertia `(positive, negative, zero)` by rational symmetric
    /// pivoting; no floating point is involved.
    pub fn signature(&self) -> Inertia {
        inertia(&self.to_imat())
    }

    /// `x^T G y` for integer coordinate vectors.
    pub fn pair(&self, x: &[i64], y: &[i64]) -> Result<i64, LatticeError> {
        let n = self.rank();
        if x.len() != n {
            return Err(LatticeError::DimensionMismatch { expected: n, got: x.len() });
        }
        if y.len() != n {
            return Err(LatticeError::DimensionMismatch { expected: n, got: y.len() });
        }
        let mut sum: i128 = 0;
        for i in 0..n {
            for j in 0..n {
                sum += x[i] as i128 * self.gram[i][j] as i128 * y[j] as i128;
            }
        }
        Ok(i64::try_from(sum).expect("pairing fits in i64"))
    }

    pub fn norm(&self, x: &[i64]) -> Result<i64, LatticeError> {
        self.pair(x, x)
    }
}

/// Standard Gram matrix of the `E8` root lattice scaled by `sign`
/// (`sign = -1` gives the negative definite `E8(-1)`).
pub fn e8(sign: i64) -> IntegralLattice {
    // Dynkin diagram: chain 0-1-2-3-4-5-6 with node 7 attached to node 4.
    let bonds = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7)];
    let mut gram = vec![vec![0i64; 8]; 8];
    for (i, row) in gram.iter_mut().enumerate() {
        row[i] = 2 * sign;
    }
    for (i, j) in bonds {
        gram[i][j] = -sign;
        gram[j][i] = -sign;
    }
    IntegralLattice::new(gram).expect("E8 Gram matrix is symmetric")
}

/// The hyperbolic plane `H` with Gram `[[0, 1], [1, 0]]`.
pub fn hyperbolic_plane() -> IntegralLattice {
    IntegralLattice::new(vec![vec![0, 1], vec![1, 0]]).expect("H is symmetric")
}

/// `L(k)`: the same module with the form scaled by `k != 0`.
pub fn twist(l: &IntegralLattice, k: i64) -> Result<IntegralLattice, LatticeError> {
    if k == 0 {
        return Err(LatticeError::ZeroTwist);
    }
    let gram = l
        .gram()
        .iter()
        .map(|row| row.iter().map(|v| v * k).collect())
        .collect();
    IntegralLattice::new(gram)
}

/// Orthogonal direct sum.
pub fn direct_sum(parts: &[&IntegralLattice]) -> IntegralLattice {
    let rank: usize = parts.iter().map(|l| l.rank()).sum();
    let mut gram = vec![vec![0i64; rank]; rank];
    let mut offset = 0;
    for l in parts {
        let r = l.rank();
        for i in 0..r {
            for j in 0..r {
                gram[offset + i][offset + j] = l.gram()[i][j];
            }
        }
        offset += r;
    }
    IntegralLattice::new(gram).expect("block diagonal of symmetric blocks")
}

/// Isometric involution of a lattice: an integer matrix `P` with
/// `P^2 = I` and `P^T G P = G`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeInvolution {
    matrix: Vec<Vec<i64>>,
}

impl LatticeInvolution {
    pub fn new(matrix: Vec<Vec<i64>>, lattice: &IntegralLattice) -> Result<Self, LatticeError> {
        let n = lattice.rank();
        if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
            return Err(LatticeError::DimensionMismatch {
                expected: n,
                got: matrix.len(),
            });
        }
        let p = IMat::from_i64(&matrix);
        let g = lattice.to_imat();
        if p.mul(&p) != IMat::identity(n) {
            return Err(LatticeError::NotAnInvolution);
        }
        if transpose(&p).mul(&g).mul(&p) != g {
            return Err(LatticeError::NotAnInvolution);
        }
        Ok(LatticeInvolution { matrix })
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        let n = self.matrix.len();
        (0..n)
            .map(|i| (0..n).map(|j| self.matrix[i][j] * x[j]).sum())
            .collect()
    }
}

fn transpose(m: &IMat) -> IMat {
    let mut out = IMat::zero(m.cols, m.rows);
    for i in 0..m.rows {
        for j in 0..m.cols {
            out[(j, i)] = m[(i, j)].clone();
        }
    }
    out
}

/// The K3 lattice `E8(-1)^2 (+) H^3` together with the involution
/// `(x, y, z1, z2, z3) -> (y, x, -z1, z3, z2)`.
pub fn k3_lattice_with_involution() -> (IntegralLattice, LatticeInvolution) {
    let e = e8(-1);
    let h = hyperbolic_plane();
    let l = direct_sum(&[&e, &e, &h, &h, &h]);
    let mut p = vec![vec![0i64; 22]; 22];
    for k in 0..8 {
        p[k][8 + k] = 1; // x <- y
        p[8 + k][k] = 1; // y <- x
    }
    for k in 0..2 {
        p[16 + k][16 + k] = -1; // z1 <- -z1
        p[18 + k][20 + k] = 1; // z2 <- z3
        p[20 + k][18 + k] = 1; // z3 <- z2
    }
    let involution = LatticeInvolution::new(p, &l).expect("block permutation is an isometry");
    (l, involution)
}

/// Sublattice presented by an explicit basis inside an ambient lattice:
/// basis rows in ambient coordinates plus the induced Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sublattice {
    pub basis: Vec<Vec<i64>>,
    pub lattice: IntegralLattice,
}

/// Gram matrix of a set of vectors inside an ambient lattice.
pub fn gram_of_vectors(
    ambient: &IntegralLattice,
    basis: &[Vec<i64>],
) -> Result<IntegralLattice, LatticeError> {
    let mut gram = vec![vec![0i64; basis.len()]; basis.len()];
    for (i, x) in basis.iter().enumerate() {
        for (j, y) in basis.iter().enumerate() {
            gram[i][j] = ambient.pair(x, y)?;
        }
    }
    IntegralLattice::new(gram)
}

/// Eigenlattice `{v : P v = sign * v}` as a primitive sublattice, computed
/// as the integer kernel of `P - sign*I`. Returns the basis (rows, ambient
/// coordinates) and the restricted Gram matrix.
pub fn eigenlattice(
    ambient: &IntegralLattice,
    p: &LatticeInvolution,
    sign: i64,
) -> Result<Sublattice, LatticeError> {
    assert!(sign == 1 || sign == -1, "eigenvalue of an involution");
    let n = ambient.rank();
    let mut m = IMat::from_i64(p.matrix());
    for i in 0..n {
        let shifted = &m[(i, i)] - BigInt::from(sign);
        m[(i, i)] = shifted;
    }
    let basis_big = kernel_basis(&m);
    let basis: Vec<Vec<i64>> = basis_big
        .iter()
        .map(|row| {
            row.iter()
                .map(|v| v.to_i64().expect("kernel coordinates fit in i64"))
                .collect()
        })
        .collect();
    let lattice = gram_of_vectors(ambient, &basis)?;
    Ok(Sublattice { basis, lattice })
}

/// The antiinvariant sublattice of the K3 lattice under the Enriques
/// involution, in the explicit basis
/// `(x, -x, 0, 0, 0)`, `(0, 0, z1, 0, 0)`, `(0, 0, 0, z2, -z2)`.
/// Its Gram matrix is literally `E8(-2) (+) H (+) H(2)`.
pub fn antiinvariant_k3() -> Sublattice {
    let (l, _) = k3_lattice_with_involution();
    let mut basis = Vec::with_capacity(12);
    for k in 0..8 {
        let mut v = vec![0i64; 22];
        v[k] = 1;
        v[8 + k] = -1;
        basis.push(v);
    }
    for k in 0..2 {
        let mut v = vec![0i64; 22];
        v[16 + k] = 1;
        basis.push(v);
    }
    for k in 0..2 {
        let mut v = vec![0i64; 22];
        v[18 + k] = 1;
        v[20 + k] = -1;
        basis.push(v);
    }
    let lattice = gram_of_vectors(&l, &basis).expect("basis lives in the ambient lattice");
    Sublattice { basis, lattice }
}

/// Elementary divisors of the Gram matrix that are different from 1:
/// the cyclic factors of the discriminant group `L^vee / L`.
pub fn discriminant_group(l: &IntegralLattice) -> Result<Vec<u64>, LatticeError> {
    let (diag, _) = crate::linalg::smith_normal_form(&l.to_imat());
    if diag.iter().any(|d| d.is_zero()) {
        return Err(LatticeError::Degenerate);
    }
    Ok(diag
        .iter()
        .filter(|d| !num_traits::One::is_one(*d))
        .map(|d| d.to_u64().expect("elementary divisor fits in u64"))
        .collect())
}

const ENUMERATION_LIMIT: u128 = 60_000_000;

/// All vectors `v` with `v.G.v == norm` and all coordinates bounded by
/// `bound` in absolute value, in lexicographic order.
///
/// For definite lattices the search is driven by an exact rational
/// completion of squares, so the result is complete even beyond any box and
/// merely filtered to it. For indefinite or degenerate lattices the box is
/// scanned exhaustively and completeness holds only within the box.
pub fn roots_in_box(
    l: &IntegralLattice,
    norm: i64,
    bound: u64,
) -> Result<Vec<Vec<i64>>, LatticeError> {
    let n = l.rank();
    if n == 0 || bound == 0 {
        return Ok(Vec::new());
    }
    let sig = l.signature();
    let definite = sig.zero == 0 && (sig.positive == 0 || sig.negative == 0);
    let mut out = if definite {
        definite_vectors_of_norm(l, norm, bound as i64)
    } else {
        let width = 2 * (bound as u128) + 1;
        let candidates = width.checked_pow(n as u32).unwrap_or(u128::MAX);
        if candidates > ENUMERATION_LIMIT {
            return Err(LatticeError::EnumerationTooLarge {
                candidates,
                limit: ENUMERATION_LIMIT,
            });
        }
        box_scan(l, norm, bound as i64)
    };
    out.sort();
    Ok(out)
}

/// Exhaustive scan of the coordinate box.
fn box_scan(l: &IntegralLattice, norm: i64, bound: i64) -> Vec<Vec<i64>> {
    let n = l.rank();
    let mut out = Vec::new();
    let mut v = vec![-bound; n];
    loop {
        if l.norm(&v).expect("vector has matching rank") == norm {
            out.push(v.clone());
        }
        let mut k = n;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if v[k] < bound {
                v[k] += 1;
                for entry in v.iter_mut().skip(k + 1) {
                    *entry = -bound;
                }
                break;
            }
        }
    }
}

/// Complete enumeration of vectors of a given norm in a definite lattice by
/// exact Cholesky-style branch and bound, intersected with the box.
fn definite_vectors_of_norm(l: &IntegralLattice, norm: i64, bound: i64) -> Vec<Vec<i64>> {
    use num_rational::BigRational;
    use num_traits::One;

    let n = l.rank();
    // flip a negative definite form to positive definite
    let positive = l.signature().positive == n;
    let (target, flip) = if positive { (norm, 1) } else { (-norm, -1) };
    if target < 0 {
        return Vec::new();
    }
    // rational LDL^T of the (flipped) Gram matrix
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| BigRational::from(BigInt::from(l.gram()[i][j] * flip)))
                .collect()
        })
        .collect();
    let mut d = vec![BigRational::one(); n];
    let mut lower = vec![vec![BigRational::zero(); n]; n];
    for k in 0..n {
        d[k] = a[k][k].clone();
        lower[k][k] = BigRational::one();
        for i in k + 1..n {
            lower[i][k] = &a[i][k] / &d[k];
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let delta = &lower[i][k] * &a[k][j];
                a[i][j] -= delta;
            }
        }
        for i in k + 1..n {
            a[i][k] = BigRational::zero();
        }
    }

    // x^T G x = sum_k d_k * (x_k + sum_{j>k} lower[j][k] * x_j)^2,
    // enumerated from the last coordinate down.
    let target_q = BigRational::from(BigInt::from(target));
    let mut out = Vec::new();
    let mut x = vec![0i64; n];
    enumerate_level(
        n,
        &d,
        &lower,
        &target_q,
        bound,
        &mut x,
        n,
        &mut out,
    );
    out
}

#[allow(clippy::too_many_arguments)]
fn enumerate_level(
    n: usize,
    d: &[num_rational::BigRational],
    lower: &[Vec<num_rational::BigRational>],
    remaining: &num_rational::BigRational,
    bound: i64,
    x: &mut Vec<i64>,
    level: usize,
    out: &mut Vec<Vec<i64>>,
) {
    use num_rational::BigRational;

    if level == 0 {
        if remaining.is_zero() {
            out.push(x.clone());
        }
        return;
    }
    let k = level - 1;
    // shift s = sum_{j>k} lower[j][k] * x_j
    let mut s = BigRational::zero();
    for j in k + 1..n {
        s += &lower[j][k] * BigRational::from(BigInt::from(x[j]));
    }
    if remaining.is_negative() {
        return;
    }
    // |x_k + s| <= sqrt(remaining / d_k); propose a float range, check exactly
    let q = remaining / &d[k];
    let radius = ratio_to_f64(&q).max(0.0).sqrt();
    let center = ratio_to_f64(&s);
    let lo = ((-radius - center).floor() as i64 - 1).max(-bound);
    let hi = ((radius - center).ceil() as i64 + 1).min(bound);
    for cand in lo..=hi {
        x[k] = cand;
        let y = &s + BigRational::from(BigInt::from(cand));
        let used = &d[k] * &y * &y;
        if &used > remaining {
            continue;
        }
        let next = remaining - &used;
        enumerate_level(n, d, lower, &next, bound, x, k, out);
    }
    x[k] = 0;
}

fn ratio_to_f64(q: &num_rational::BigRational) -> f64 {
    q.numer().to_f64().unwrap_or(f64::MAX) / q.denom().to_f64().unwrap_or(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructors() {
        let h = hyperbolic_plane();
        assert_eq!(h.gram(), &[vec![0, 1], vec![1, 0]]);
        assert_eq!(h.determinant(), BigInt::from(-1));

        let h2 = twist(&h, 2).unwrap();
        assert_eq!(h2.gram(), &[vec![0, 2], vec![2, 0]]);
        assert!(twist(&h, 0).is_err());

        assert_eq!(e8(-1).determinant(), BigInt::from(1));
        assert_eq!(e8(1).determinant(), BigInt::from(1));
        assert!(e8(1).is_even());

        assert!(IntegralLattice::new(vec![vec![0, 1], vec![2, 0]]).is_err());
    }

    #[test]
    fn e8_is_definite() {
        let sig = e8(1).signature();
        assert_eq!((sig.positive, sig.negative, sig.zero), (8, 0, 0));
        let sig = e8(-1).signature();
        assert_eq!((sig.positive, sig.negative, sig.zero), (0, 8, 0));
    }

    #[test]
    fn k3_involution_axioms_and_signature() {
        let (l, p) = k3_lattice_with_involution();
        assert_eq!(l.rank(), 22);
        // constructor re-checks P^2 = I and P^T G P = G; recheck by hand
        let pm = IMat::from_i64(p.matrix());
        assert_eq!(pm.mul(&pm), IMat::identity(22));
        let g = l.to_imat();
        assert_eq!(transpose(&pm).mul(&g).mul(&pm), g);

        let sig = l.signature();
        assert_eq!((sig.positive, sig.negative, sig.zero), (3, 19, 0));
    }

    #[test]
    fn eigenlattice_ranks_and_orthogonality() {
        let (l, p) = k3_lattice_with_involution();
        let plus = eigenlattice(&l, &p, 1).unwrap();
        let minus = eigenlattice(&l, &p, -1).unwrap();
        assert_eq!(plus.basis.len(), 10);
        assert_eq!(minus.basis.len(), 12);
        assert_eq!(plus.basis.len() + minus.basis.len(), 22);
        for x in &plus.basis {
            for y in &minus.basis {
                assert_eq!(l.pair(x, y).unwrap(), 0);
            }
        }
    }

    #[test]
    fn eigenlattice_of_identity_is_everything() {
        let h = hyperbolic_plane();
        let id = LatticeInvolution::new(vec![vec![1, 0], vec![0, 1]], &h).unwrap();
        let plus = eigenlattice(&h, &id, 1).unwrap();
        assert_eq!(plus.basis.len(), 2);
        let minus = eigenlattice(&h, &id, -1).unwrap();
        assert!(minus.basis.is_empty());
    }

    #[test]
    fn antiinvariant_k3_block_gram() {
        let sub = antiinvariant_k3();
        let expected = direct_sum(&[
            &twist(&e8(-1), 2).unwrap(),
            &hyperbolic_plane(),
            &twist(&hyperbolic_plane(), 2).unwrap(),
        ]);
        assert_eq!(sub.lattice.gram(), expected.gram());

        // every basis vector is antiinvariant
        let (l, p) = k3_lattice_with_involution();
        for v in &sub.basis {
            let image = p.apply(v);
            let neg: Vec<i64> = v.iter().map(|c| -c).collect();
            assert_eq!(image, neg);
        }
        // and spans the same sublattice as the kernel route: same rank and
        // same discriminant group
        let minus = eigenlattice(&l, &p, -1).unwrap();
        assert_eq!(minus.basis.len(), sub.basis.len());
        assert_eq!(
            discriminant_group(&minus.lattice).unwrap(),
            discriminant_group(&sub.lattice).unwrap()
        );
    }

    #[test]
    fn discriminant_groups() {
        assert!(discriminant_group(&hyperbolic_plane()).unwrap().is_empty());
        assert_eq!(
            discriminant_group(&twist(&e8(-1), 2).unwrap()).unwrap(),
            vec![2; 8]
        );
        assert_eq!(
            discriminant_group(&antiinvariant_k3().lattice).unwrap(),
            vec![2; 10]
        );
        let degenerate = IntegralLattice::new(vec![vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(
            discriminant_group(&degenerate),
            Err(LatticeError::Degenerate)
        );
    }

    #[test]
    fn roots_in_hyperbolic_plane() {
        let h = hyperbolic_plane();
        // 2ab = -2 within |a|,|b| <= 3: exactly (1,-1) and (-1,1)
        let roots = roots_in_box(&h, -2, 3).unwrap();
        assert_eq!(roots, vec![vec![-1, 1], vec![1, -1]]);
        assert!(roots_in_box(&h, -2, 0).unwrap().is_empty());
    }

    #[test]
    fn e8_has_240_roots() {
        let roots = roots_in_box(&e8(-1), -2, 8).unwrap();
        assert_eq!(roots.len(), 240);
        for r in &roots {
            assert_eq!(e8(-1).norm(r).unwrap(), -2);
        }
        // enumeration is complete for definite forms: growing the box does
        // not add vectors
        assert_eq!(roots_in_box(&e8(-1), -2, 12).unwrap().len(), 240);
        // positive sign variant
        assert_eq!(roots_in_box(&e8(1), 2, 8).unwrap().len(), 240);
    }

    #[test]
    fn box_scan_guard() {
        let big = direct_sum(&[&hyperbolic_plane(); 12]);
        assert!(matches!(
            roots_in_box(&big, -2, 3),
            Err(LatticeError::EnumerationTooLarge { .. })
        ));
    }
}
