//! Exact integer and rational matrix routines backing the lattice module:
//! Smith normal form with transform tracking, integer kernels, fraction-free
//! determinants, and the inertia (signature) of a symmetric matrix by
//! rational symmetric pivoting. Everything runs over `BigInt`/`BigRational`,
//! so there are no overflow or rounding concerns.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Dense integer matrix, row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigInt>,
}

impl IMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IMat {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IMat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = IMat::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix");
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = BigInt::from(*v);
            }
        }
        m
    }

    pub fn mul(&self, rhs: &IMat) -> IMat {
        assert_eq!(self.cols, rhs.rows);
        let mut out = IMat::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let add = &self[(i, k)] * &rhs[(k, j)];
                    out[(i, j)] += add;
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row_a -= q * row_b
    fn row_sub(&mut self, a: usize, b: usize, q: &BigInt) {
        for j in 0..self.cols {
            let delta = q * &self[(b, j)];
            self[(a, j)] -= delta;
        }
    }

    /// col_a -= q * col_b
    fn col_sub(&mut self, a: usize, b: usize, q: &BigInt) {
        for i in 0..self.rows {
            let delta = q * &self[(i, b)];
            self[(i, a)] -= delta;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IMat {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

/// Smith normal form: returns the diagonal `d_1 | d_2 | ... | d_k` (all
/// nonnegative, zeros trailing) and the right transform `V` with
/// `U * M * V` diagonal for some unimodular `U`. Columns of `V` beyond the
/// rank span the kernel of `M`.
///
/// Eliminations are single-step Bezout (extended gcd) transforms rather
/// than repeated subtract-and-swap, which keeps intermediate entries from
/// exploding.
pub fn smith_normal_form(m: &IMat) -> (Vec<BigInt>, IMat) {
    let mut a = m.clone();
    let mut v = IMat::identity(a.cols);
    let steps = a.rows.min(a.cols);

    let mut t = 0;
    while t < steps {
        // pick the nonzero entry of smallest absolute value as pivot
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..a.rows {
            for j in t..a.cols {
                if !a[(i, j)].is_zero()
                    && pivot.is_none_or(|(pi, pj)| a[(i, j)].abs() < a[(pi, pj)].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap_rows(t, pi);
        a.swap_cols(t, pj);
        v.swap_cols(t, pj);

        // clear column t below the pivot
        for i in t + 1..a.rows {
            if !a[(i, t)].is_zero() {
                row_bezout(&mut a, t, i);
            }
        }
        // clear row t right of the pivot
        let mut dirtied_column = false;
        for j in t + 1..a.cols {
            if !a[(t, j)].is_zero() {
                dirtied_column |= col_bezout(&mut a, Some(&mut v), t, j);
            }
        }
        // a genuine gcd step in the columns can reintroduce entries below
        // the pivot; redo this step (the pivot strictly shrank, so this
        // terminates)
        if dirtied_column && (t + 1..a.rows).any(|i| !a[(i, t)].is_zero()) {
            continue;
        }

        // enforce divisibility of the trailing block by the pivot
        let mut fixed = false;
        'outer: for i in t + 1..a.rows {
            for j in t + 1..a.cols {
                if !(&a[(i, j)] % &a[(t, t)]).is_zero() {
                    let minus_one = -BigInt::one();
                    a.row_sub(t, i, &minus_one); // row_t += row_i
                    fixed = true;
                    break 'outer;
                }
            }
        }
        if fixed {
            continue; // redo step t; the next pivot strictly divides this one
        }
        t += 1;
    }

    let mut diag = Vec::with_capacity(steps);
    for t in 0..steps {
        if a[(t, t)].is_negative() {
            let entry = -a[(t, t)].clone();
            a[(t, t)] = entry;
        }
        diag.push(a[(t, t)].clone());
    }
    (diag, v)
}

/// Unimodular row transform making `a[i][t] = 0` and `a[t][t] = gcd`:
/// `(row_t, row_i) <- (u*row_t + w*row_i, -(a_it/g)*row_t + (a_tt/g)*row_i)`.
fn row_bezout(a: &mut IMat, t: usize, i: usize) {
    let att = a[(t, t)].clone();
    let ait = a[(i, t)].clone();
    if (&ait % &att).is_zero() {
        // plain subtraction; keeps the pivot row untouched
        let q = &ait / &att;
        a.row_sub(i, t, &q);
        return;
    }
    let ext = num_integer::Integer::extended_gcd(&att, &ait);
    let (g, u, w) = (ext.gcd, ext.x, ext.y);
    let p = &att / &g;
    let q = &ait / &g;
    for j in 0..a.cols {
        let top = a[(t, j)].clone();
        let bot = a[(i, j)].clone();
        a[(t, j)] = &u * &top + &w * &bot;
        a[(i, j)] = -&q * &top + &p * &bot;
    }
}

/// Column version of [`row_bezout`], mirrored into the transform `v`.
/// Returns whether a genuine gcd step happened (plain subtractions leave
/// the pivot column untouched).
fn col_bezout(a: &mut IMat, v: Option<&mut IMat>, t: usize, j: usize) -> bool {
    let att = a[(t, t)].clone();
    let atj = a[(t, j)].clone();
    if (&atj % &att).is_zero() {
        let q = &atj / &att;
        a.col_sub(j, t, &q);
        if let Some(v) = v {
            v.col_sub(j, t, &q);
        }
        return false;
    }
    let ext = num_integer::Integer::extended_gcd(&att, &atj);
    let (g, u, w) = (ext.gcd, ext.x, ext.y);
    let p = &att / &g;
    let q = &atj / &g;
    for i in 0..a.rows {
        let left = a[(i, t)].clone();
        let right = a[(i, j)].clone();
        a[(i, t)] = &u * &left + &w * &right;
        a[(i, j)] = -&q * &left + &p * &right;
    }
    if let Some(v) = v {
        for i in 0..v.rows {
            let left = v[(i, t)].clone();
            let right = v[(i, j)].clone();
            v[(i, t)] = &u * &left + &w * &right;
            v[(i, j)] = -&q * &left + &p * &right;
        }
    }
    true
}

/// Basis of the integer kernel `{x : Mx = 0}`, as rows. The kernel of an
/// integer matrix is saturated, so this is automatically a primitive
/// sublattice basis.
pub fn kernel_basis(m: &IMat) -> Vec<Vec<BigInt>> {
    let (diag, v) = smith_normal_form(m);
    let rank = diag.iter().filter(|d| !d.is_zero()).count();
    let mut basis = Vec::new();
    for j in rank..m.cols {
        let mut col = Vec::with_capacity(m.cols);
        for i in 0..m.cols {
            col.push(v[(i, j)].clone());
        }
        basis.push(col);
    }
    basis
}

/// Exact determinant by Bareiss fraction-free elimination.
pub fn determinant(m: &IMat) -> BigInt {
    assert_eq!(m.rows, m.cols, "determinant of a square matrix");
    let n = m.rows;
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = 1i64;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                return BigInt::zero();
            };
            a.swap_rows(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                a[(i, j)] = num / &prev;
            }
            a[(i, k)] = BigInt::zero();
        }
        prev = a[(k, k)].clone();
    }
    let det = a[(n - 1, n - 1)].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Inertia of a symmetric matrix: counts of positive, negative and zero
/// eigenvalues, computed exactly by rational symmetric (congruence) pivoting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

pub fn inertia(m: &IMat) -> Inertia {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| BigRational::from(m[(i, j)].clone())).collect())
        .collect();
    let mut result = Inertia {
        positive: 0,
        negative: 0,
        zero: 0,
    };

    for k in 0..n {
        if a[k][k].is_zero() {
            // try a diagonal swap first
            if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                a.swap(k, j);
                for row in a.iter_mut() {
                    row.swap(k, j);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                // all remaining diagonal entries vanish: fold row/col j in,
                // which sets a[k][k] = 2*a[k][j] != 0
                for i in 0..n {
                    let add = a[i][j].clone();
                    a[i][k] += add;
                }
                for j2 in 0..n {
                    let add = a[j][j2].clone();
                    a[k][j2] += add;
                }
            } else {
                result.zero += 1;
                continue;
            }
        }
        let pivot = a[k][k].clone();
        if pivot.is_positive() {
            result.positive += 1;
        } else {
            result.negative += 1;
        }
        // One-sided elimination suffices: with a symmetric block, the update
        // a[i][j] -= a[i][k]*a[k][j]/pivot keeps the trailing block symmetric,
        // and the stale pivot row/column is never revisited.
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &pivot;
            for j in k..n {
                let delta = &f * &a[k][j];
                a[i][j] -= delta;
            }
        }
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> IMat {
        IMat::from_i64(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn snf_simple() {
        let m = mat(&[&[2, 4, 4], &[-6, 6, 12], &[10, 4, 16]]);
        let (diag, _) = smith_normal_form(&m);
        assert_eq!(
            diag,
            vec![BigInt::from(2), BigInt::from(2), BigInt::from(156)]
        );
    }

    #[test]
    fn snf_divisibility_chain_and_transform() {
        let m = mat(&[&[6, 0], &[0, 10]]);
        let (diag, v) = smith_normal_form(&m);
        assert_eq!(diag, vec![BigInt::from(2), BigInt::from(30)]);
        // v is unimodular
        assert_eq!(determinant(&v).abs(), BigInt::one());
    }

    #[test]
    fn kernel_of_singular_matrix() {
        let m = mat(&[&[1, 2, 3], &[2, 4, 6]]);
        let basis = kernel_basis(&m);
        assert_eq!(basis.len(), 2);
        for vec in &basis {
            for i in 0..m.rows {
                let s: BigInt = (0..m.cols).map(|j| &m[(i, j)] * &vec[j]).sum();
                assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn kernel_of_invertible_matrix_is_empty() {
        let m = mat(&[&[1, 2], &[3, 5]]);
        assert!(kernel_basis(&m).is_empty());
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(determinant(&mat(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(
            determinant(&mat(&[&[2, 1, 0], &[1, 2, 1], &[0, 1, 2]])),
            BigInt::from(4)
        );
        assert_eq!(determinant(&mat(&[&[1, 2], &[2, 4]])), BigInt::zero());
    }

    #[test]
    fn inertia_examples() {
        // hyperbolic plane: signature (1, 1)
        let h = mat(&[&[0, 1], &[1, 0]]);
        assert_eq!(
            inertia(&h),
            Inertia { positive: 1, negative: 1, zero: 0 }
        );
        let degenerate = mat(&[&[1, 1], &[1, 1]]);
        assert_eq!(
            inertia(&degenerate),
            Inertia { positive: 1, negative: 0, zero: 1 }
        );
        let neg = mat(&[&[-2, 1], &[1, -2]]);
        assert_eq!(
            inertia(&neg),
            Inertia { positive: 0, negative: 2, zero: 0 }
        );
    }
}
