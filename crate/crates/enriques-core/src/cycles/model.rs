//! Finite point models of abelian surfaces and generic enumeration over
//! them. A model is the full `(levelE, levelF)`-torsion of a product of two
//! elliptic curves, possibly divided by a finite translation subgroup; its
//! points are canonical coset representatives.

use crate::torsion::{
    quotient_rep, AffineAuto, FiniteSubgroup, Levels, PeriodBasis, ProductPoint, TorsionError,
};
use std::collections::HashMap;

use super::ActionError;

/// Upper bound on the number of torsion points iterated when building a
/// model; keeps accidental huge levels from hanging the process.
pub const MODEL_SIZE_LIMIT: u64 = 20_000_000;

/// Finite abelian group of points, with a fixed element order used by the
/// multiset enumerators.
pub trait PointGroup {
    type Point: Clone + Ord;

    /// All elements, sorted; the enumeration order of every algorithm.
    fn points(&self) -> &[Self::Point];
    fn zero(&self) -> Self::Point;
    fn add(&self, a: &Self::Point, b: &Self::Point) -> Self::Point;
    fn neg(&self, a: &Self::Point) -> Self::Point;
    /// Position of a point in [`points`](PointGroup::points).
    fn index_of(&self, p: &Self::Point) -> usize;
}

/// Torsion model of an abelian surface `A = (E x F)[levels] / T`.
#[derive(Debug, Clone)]
pub struct TorsionModel {
    levels: Levels,
    basis_e: PeriodBasis,
    basis_f: PeriodBasis,
    subgroup: FiniteSubgroup,
    points: Vec<ProductPoint>,
    index: HashMap<ProductPoint, u32>,
}

impl TorsionModel {
    pub fn build(
        levels: Levels,
        basis_e: PeriodBasis,
        basis_f: PeriodBasis,
        subgroup: FiniteSubgroup,
    ) -> Result<Self, ActionError> {
        let count = levels.e * levels.e * levels.f * levels.f;
        if count > MODEL_SIZE_LIMIT {
            return Err(ActionError::ModelTooLarge {
                points: count,
                limit: MODEL_SIZE_LIMIT,
            });
        }
        for t in subgroup.elements() {
            if !levels.contains(t) {
                return Err(ActionError::Torsion(TorsionError::IncompatibleLevel {
                    order: t.order(),
                    level: levels.e,
                }));
            }
        }
        let mut seen: std::collections::HashSet<ProductPoint> = std::collections::HashSet::new();
        let mut points = Vec::new();
        for ae in 0..levels.e {
            for be in 0..levels.e {
                for af in 0..levels.f {
                    for bf in 0..levels.f {
                        let p = ProductPoint::new(
                            crate::torsion::make_point(ae as i64, be as i64, levels.e)?,
                            crate::torsion::make_point(af as i64, bf as i64, levels.f)?,
                        );
                        let rep = quotient_rep(&p, &subgroup);
                        if seen.insert(rep) {
                            points.push(rep);
                        }
                    }
                }
            }
        }
        points.sort();
        let index = points
            .iter()
            .enumerate()
            .map(|(i, p)| (*p, i as u32))
            .collect();
        Ok(TorsionModel {
            levels,
            basis_e,
            basis_f,
            subgroup,
            points,
            index,
        })
    }

    pub fn levels(&self) -> Levels {
        self.levels
    }

    pub fn basis_e(&self) -> PeriodBasis {
        self.basis_e
    }

    pub fn basis_f(&self) -> PeriodBasis {
        self.basis_f
    }

    pub fn subgroup(&self) -> &FiniteSubgroup {
        &self.subgroup
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Canonical representative of the coset of `p`.
    pub fn reduce(&self, p: &ProductPoint) -> ProductPoint {
        quotient_rep(p, &self.subgroup)
    }

    pub fn idx(&self, p: &ProductPoint) -> Option<u32> {
        self.index.get(&self.reduce(p)).copied()
    }

    pub fn point(&self, idx: u32) -> ProductPoint {
        self.points[idx as usize]
    }

    /// Streams the zero-sum multisets of the given length as cycles.
    pub fn zero_fiber(&self, len: usize) -> impl Iterator<Item = super::ZeroCycle> + '_ {
        enumerate_zero_fiber(self, len).map(super::ZeroCycle::new)
    }

    /// The action of an affine automorphism as a permutation of point
    /// indices. Fails when the translation does not live in the model
    /// torsion or the linear part does not preserve the subgroup (in which
    /// case the descent to the quotient is ill-defined).
    pub fn permutation(&self, g: &AffineAuto) -> Result<Vec<u32>, ActionError> {
        if !self.levels.contains(&g.translation) {
            return Err(ActionError::Torsion(TorsionError::IncompatibleLevel {
                order: g.translation.order(),
                level: self.levels.e,
            }));
        }
        for t in self.subgroup.elements() {
            if !self.subgroup.contains(&g.apply_linear(t)) {
                return Err(ActionError::SubgroupNotPreserved);
            }
        }
        let mut perm = Vec::with_capacity(self.points.len());
        for p in &self.points {
            let image = self.reduce(&g.apply(p));
            let idx = self.index.get(&image).ok_or(ActionError::SubgroupNotPreserved)?;
            perm.push(*idx);
        }
        Ok(perm)
    }
}

impl PointGroup for TorsionModel {
    type Point = ProductPoint;

    fn points(&self) -> &[ProductPoint] {
        &self.points
    }

    fn zero(&self) -> ProductPoint {
        self.reduce(&ProductPoint::ZERO)
    }

    fn add(&self, a: &ProductPoint, b: &ProductPoint) -> ProductPoint {
        self.reduce(&a.add(b))
    }

    fn neg(&self, a: &ProductPoint) -> ProductPoint {
        self.reduce(&a.neg())
    }

    fn index_of(&self, p: &ProductPoint) -> usize {
        self.index[&self.reduce(p)] as usize
    }
}

/// Toy cyclic group `Z/n`, for exercising the generic enumeration.
#[derive(Debug, Clone)]
pub struct CyclicToy {
    n: u64,
    points: Vec<u64>,
}

impl CyclicToy {
    pub fn new(n: u64) -> Self {
        CyclicToy {
            n,
            points: (0..n).collect(),
        }
    }
}

impl PointGroup for CyclicToy {
    type Point = u64;

    fn points(&self) -> &[u64] {
        &self.points
    }

    fn zero(&self) -> u64 {
        0
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.n
    }

    fn neg(&self, a: &u64) -> u64 {
        (self.n - a) % self.n
    }

    fn index_of(&self, p: &u64) -> usize {
        *p as usize
    }
}

/// Streams every multiset of the given length whose group sum is zero, each
/// exactly once, as sorted point vectors in a deterministic order.
///
/// The iterator walks nondecreasing index prefixes of length `len - 1` and
/// completes each with the forced last point, emitting only when the
/// completion keeps the multiset sorted. It is pure and restartable.
pub fn enumerate_zero_fiber<G: PointGroup>(group: &G, len: usize) -> ZeroFiberIter<'_, G> {
    ZeroFiberIter {
        group,
        len,
        prefix: vec![0; len.saturating_sub(1)],
        done: len == 0 || group.points().is_empty(),
    }
}

pub struct ZeroFiberIter<'a, G: PointGroup> {
    group: &'a G,
    len: usize,
    prefix: Vec<usize>,
    done: bool,
}

impl<G: PointGroup> ZeroFiberIter<'_, G> {
    fn advance(&mut self) {
        let count = self.group.points().len();
        let mut k = self.prefix.len();
        loop {
            if k == 0 {
                self.done = true;
                return;
            }
            k -= 1;
            if self.prefix[k] + 1 < count {
                self.prefix[k] += 1;
                let v = self.prefix[k];
                for slot in self.prefix.iter_mut().skip(k + 1) {
                    *slot = v;
                }
                return;
            }
        }
    }
}

impl<G: PointGroup> Iterator for ZeroFiberIter<'_, G> {
    type Item = Vec<G::Point>;

    fn next(&mut self) -> Option<Self::Item> {
        while !self.done {
            let pts = self.group.points();
            let mut sum = self.group.zero();
            for &i in &self.prefix {
                sum = self.group.add(&sum, &pts[i]);
            }
            let completion = self.group.neg(&sum);
            let completion_idx = self.group.index_of(&completion);
            let ok = self
                .prefix
                .last()
                .is_none_or(|&last| completion_idx >= last);
            let item = if ok {
                let mut points: Vec<G::Point> =
                    self.prefix.iter().map(|&i| pts[i].clone()).collect();
                points.push(pts[completion_idx].clone());
                Some(points)
            } else {
                None
            };
            if self.len == 1 {
                // single empty prefix: emit once and stop
                self.done = true;
            } else {
                self.advance();
            }
            if let Some(points) = item {
                return Some(points);
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torsion::make_point;

    fn plain_model(e: u64, f: u64) -> TorsionModel {
        TorsionModel::build(
            Levels::new(e, f).unwrap(),
            PeriodBasis::Generic,
            PeriodBasis::Generic,
            FiniteSubgroup::trivial(),
        )
        .unwrap()
    }

    #[test]
    fn model_point_count() {
        let m = plain_model(2, 2);
        assert_eq!(m.len(), 16);

        // dividing by an order-2 translation subgroup halves the count
        let t = FiniteSubgroup::from_generators(&[ProductPoint::new(
            make_point(0, 1, 2).unwrap(),
            make_point(1, 0, 2).unwrap(),
        )]);
        let q = TorsionModel::build(
            Levels::new(2, 2).unwrap(),
            PeriodBasis::Generic,
            PeriodBasis::Generic,
            t,
        )
        .unwrap();
        assert_eq!(q.len(), 8);
    }

    #[test]
    fn reduce_is_constant_on_cosets() {
        let t = FiniteSubgroup::from_generators(&[ProductPoint::new(
            make_point(0, 1, 2).unwrap(),
            make_point(1, 0, 2).unwrap(),
        )]);
        let q = TorsionModel::build(
            Levels::new(4, 4).unwrap(),
            PeriodBasis::Generic,
            PeriodBasis::Generic,
            t.clone(),
        )
        .unwrap();
        for p in q.points() {
            for s in t.elements() {
                assert_eq!(q.reduce(&p.add(s)), *p);
            }
        }
    }

    #[test]
    fn zero_fiber_toy_examples() {
        // Z/2, length 2: {0,0} and {1,1}
        let toy = CyclicToy::new(2);
        let cycles: Vec<_> = enumerate_zero_fiber(&toy, 2).collect();
        assert_eq!(cycles, vec![vec![0, 0], vec![1, 1]]);

        // length 1: only {0}
        let cycles: Vec<_> = enumerate_zero_fiber(&toy, 1).collect();
        assert_eq!(cycles, vec![vec![0]]);

        let toy5 = CyclicToy::new(5);
        let cycles: Vec<_> = enumerate_zero_fiber(&toy5, 3).collect();
        for c in &cycles {
            assert_eq!(c.iter().sum::<u64>() % 5, 0);
            assert!(c.windows(2).all(|w| w[0] <= w[1]));
        }
        // each multiset exactly once
        let mut dedup = cycles.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), cycles.len());
    }

    #[test]
    fn zero_fiber_count_matches_double_counting() {
        // multisets {x, y} with x + y = 0: ordered pairs / 2, adjusting for
        // the self-paired ones
        let m = plain_model(2, 2);
        let cycles: Vec<_> = enumerate_zero_fiber(&m, 2).collect();
        let ordered = m.len(); // y is determined by x
        let self_paired = m
            .points()
            .iter()
            .filter(|p| m.neg(p) == **p)
            .count();
        assert_eq!(cycles.len(), (ordered - self_paired) / 2 + self_paired);
        // level-2 model: every point is 2-torsion, so all 16 pairs are {x, x}
        assert_eq!(cycles.len(), 16);
    }

    #[test]
    fn zero_fiber_is_restartable() {
        let m = plain_model(3, 1);
        let first: Vec<_> = enumerate_zero_fiber(&m, 2).collect();
        let second: Vec<_> = enumerate_zero_fiber(&m, 2).collect();
        assert_eq!(first, second);
    }

    #[test]
    fn permutation_requires_compatible_translation() {
        let m = plain_model(2, 2);
        let bad = AffineAuto::translation_by(ProductPoint::new(
            make_point(1, 0, 3).unwrap(),
            make_point(0, 0, 1).unwrap(),
        ));
        assert!(m.permutation(&bad).is_err());
    }
}
