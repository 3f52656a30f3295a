//! Zero-cycles on finite torsion models of abelian surfaces, the induced
//! group actions on symmetric products, and freeness verification by both
//! the closed-form criterion and independent brute-force search.
//!
//! The two routes are deliberately asymmetric. The criterion can certify
//! freeness (`FreeByCriterion`), and reports `NotFree` only in cases where a
//! fixed zero-sum cycle is actually constructible. Brute force on a finite
//! model can only ever witness non-freeness: its points are genuine points
//! of the abelian surface, so a fixed zero-sum cycle found there is a real
//! counterexample, while exhausting a finite model proves nothing about the
//! full variety and is reported as `UnknownAtLevel`.

mod action;
mod bruteforce;
mod model;
mod records;

pub use action::{build_action, recommended_levels, ActionError, ActionSpec, BdfRow, BuiltAction};
pub use bruteforce::{
    fixed_cycle_length_check, fixed_cycle_lengths_by_orbits, fixed_cycles_exhaustive,
    freeness_bruteforce, invariance_bruteforce, multiset_count, q2hilb_model_check,
    FixedCycleReport, InvarianceOutcome,
};
pub use model::{enumerate_zero_fiber, CyclicToy, PointGroup, TorsionModel, ZeroFiberIter};
pub use records::{SpecRecord, VerdictRecord, WitnessRecord};

use crate::torsion::{
    AffineAuto, CyclotomicClass, FiniteSubgroup, Levels, Mat2, ProductPoint, TorusPoint,
};
use serde::{Deserialize, Serialize};

/// Multiset of points of an abelian surface model, stored sorted; two
/// cycles are equal iff they are equal as multisets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroCycle {
    points: Vec<ProductPoint>,
}

impl ZeroCycle {
    pub fn new(mut points: Vec<ProductPoint>) -> Self {
        points.sort();
        ZeroCycle { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[ProductPoint] {
        &self.points
    }
}

/// Pointwise image of a cycle under an automorphism, re-reduced modulo `T`
/// and re-sorted. The length is preserved.
pub fn act_on_cycle(g: &AffineAuto, c: &ZeroCycle, t: &FiniteSubgroup) -> ZeroCycle {
    ZeroCycle::new(
        c.points
            .iter()
            .map(|p| crate::torsion::quotient_rep(&g.apply(p), t))
            .collect(),
    )
}

/// Group sum of the multiset in the quotient model: the sum of the stored
/// representatives, reduced modulo `T`.
pub fn cycle_sum(c: &ZeroCycle, t: &FiniteSubgroup) -> ProductPoint {
    let sum = c
        .points
        .iter()
        .fold(ProductPoint::ZERO, |acc, p| acc.add(p));
    crate::torsion::quotient_rep(&sum, t)
}

/// The F-component of a full orbit sum: for a generator
/// `(e, f) -> (e + 1/d, xi*f + z)` and a cycle made of `m` orbits, the
/// `F`-coordinate of its total sum is `sum_{k=1}^{d-1} (d-k) xi^{k-1} m z`,
/// independent of the orbit representatives.
pub fn f_component(d: u64, xi: &CyclotomicClass, m: u64, z: &TorusPoint) -> TorusPoint {
    debug_assert_eq!(xi.tag().multiplicative_order(), d);
    f_component_matrix(d, xi.matrix(), m, z)
}

/// Same sum with the root of unity given by its matrix (used for powers of
/// a generator, whose linear part need not be one of the four named roots).
pub fn f_component_matrix(d: u64, xi: Mat2, m: u64, z: &TorusPoint) -> TorusPoint {
    let mut coeff = Mat2([[0, 0], [0, 0]]);
    let mut power = Mat2::IDENTITY;
    for k in 1..d {
        coeff = coeff.add(power.scale((d - k) as i64));
        power = power.mul(xi);
    }
    z.scalar_mul(m as i64).apply_matrix(coeff)
}

/// The reduced closed forms of [`f_component`]: `mz`, `(2 + omega) mz`,
/// `2 (1 + i) mz` for `d = 2, 3, 4`, and `zeta * (6 m z)` for `d = 6`
/// (which vanishes whenever `(n+1) z = 0` with `n + 1 = 6m`).
pub fn f_component_reduced(d: u64, xi: Mat2, m: u64, z: &TorusPoint) -> TorusPoint {
    let mz = z.scalar_mul(m as i64);
    match d {
        2 => mz,
        3 => mz.apply_matrix(Mat2::IDENTITY.scale(2).add(xi)),
        4 => mz.apply_matrix(Mat2::IDENTITY.add(xi).scale(2)),
        6 => z.scalar_mul(6 * m as i64).apply_matrix(xi),
        _ => panic!("reduced forms exist for d in {{2, 3, 4, 6}}"),
    }
}

/// Sufficient invariance test for the zero-sum fiber of the symmetric
/// product: for a table row, `d | n + 1` and `(n+1) z = 0`; for the
/// involution, `n` odd with `(n+1) a = 0` (and `(n+1) a' = 0`, which the
/// parity of `n + 1` makes automatic but is still checked).
pub fn invariance_criterion(spec: &ActionSpec, n: u64) -> bool {
    let np1 = n + 1;
    match spec {
        ActionSpec::Lieberman { a, a_prime } => {
            n % 2 == 1 && np1 % a.order() == 0 && np1 % a_prime.order() == 0
        }
        ActionSpec::Bdf { row, z } => np1 % row.d() == 0 && np1 % z.order() == 0,
    }
}

/// Status of a freeness verification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FreenessStatus {
    /// The closed-form criterion certifies the action is free.
    FreeByCriterion,
    /// A nontrivial element has a fixed zero-sum cycle; a witness is carried.
    NotFree,
    /// An exhaustive finite search found no witness. Says nothing beyond
    /// the searched level.
    UnknownAtLevel,
}

/// Witness data attached to a `NotFree` verdict; always re-checkable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum FreenessWitness {
    /// The orbit-sum obstruction of `generator^power` lands in the allowed
    /// subgroup, so fixed zero-sum cycles exist.
    CriterionElement { power: u64, component: TorusPoint },
    /// A concrete cycle fixed by `generator^power` with sum zero.
    FixedCycle { power: u64, cycle: ZeroCycle },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreenessVerdict {
    pub status: FreenessStatus,
    pub witness: Option<FreenessWitness>,
    /// Which condition decided the verdict, in words.
    pub condition_fired: String,
    /// The model levels, for verdicts produced by a finite search.
    pub levels: Option<Levels>,
}

impl FreenessVerdict {
    fn free(condition: String) -> Self {
        FreenessVerdict {
            status: FreenessStatus::FreeByCriterion,
            witness: None,
            condition_fired: condition,
            levels: None,
        }
    }

    fn not_free(witness: FreenessWitness, condition: String, levels: Option<Levels>) -> Self {
        FreenessVerdict {
            status: FreenessStatus::NotFree,
            witness: Some(witness),
            condition_fired: condition,
            levels,
        }
    }

    fn unknown(levels: Levels, condition: String) -> Self {
        FreenessVerdict {
            status: FreenessStatus::UnknownAtLevel,
            witness: None,
            condition_fired: condition,
            levels: Some(levels),
        }
    }
}

pub(crate) fn distinct_primes(mut d: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= d {
        if d % p == 0 {
            out.push(p);
            while d % p == 0 {
                d /= p;
            }
        }
        p += 1;
    }
    if d > 1 {
        out.push(d);
    }
    out
}

/// Closed-form freeness verdict for an action on the length-`(n+1)`
/// zero-sum fiber.
///
/// For each prime `p | d` the element `h = g^(d/p)` of order `p` is tested:
/// `h` acts as `(e, f) -> (e + 1/p, xi^(d/p) f + z_h)` with
/// `z_h = (1 + xi + ... + xi^(d/p - 1)) z`, and a fixed zero-sum cycle of
/// `h` exists iff its F-component obstruction lands in `T` (the
/// `E`-coordinate equation is always solvable on the divisible torus). The
/// verdict is `FreeByCriterion` iff every prime avoids `T`; any hit yields
/// `NotFree` with the offending element. For `d = 6` the obstruction of
/// `g^3` is identically zero, so the verdict is always `NotFree`.
///
/// For the involution the roles of the factors swap: the obstruction is the
/// constant `E`-component `m a` of any orbit sum, and the action is free
/// iff `m a != 0`.
pub fn freeness_criterion(spec: &ActionSpec, n: u64) -> Result<FreenessVerdict, ActionError> {
    if !invariance_criterion(spec, n) {
        return Err(ActionError::InvarianceFailed(format!(
            "freeness presupposes the invariance hypotheses at n = {n}"
        )));
    }
    let np1 = n + 1;
    match spec {
        ActionSpec::Lieberman { a, .. } => {
            let m = np1 / 2;
            let obstruction = a.scalar_mul(m as i64);
            if obstruction.is_zero() {
                Ok(FreenessVerdict::not_free(
                    FreenessWitness::CriterionElement {
                        power: 1,
                        component: obstruction,
                    },
                    format!("m*a = 0 with m = {m}: involution-fixed zero-sum cycles exist"),
                    None,
                ))
            } else {
                Ok(FreenessVerdict::free(format!(
                    "m*a != 0 with m = {m}; sufficient criterion (NotFree is only \
                     reported with a constructible witness)"
                )))
            }
        }
        ActionSpec::Bdf { row, z } => {
            let d = row.d();
            let t_f = spec.t_f_projection();
            let xi = row.xi().matrix();
            for p in distinct_primes(d) {
                let k = d / p;
                // h = g^k: linear part xi^k, accumulated translation
                // z_h = (1 + xi + ... + xi^(k-1)) z
                let xi_k = xi.pow(k);
                let mut geom = Mat2([[0, 0], [0, 0]]);
                let mut power = Mat2::IDENTITY;
                for _ in 0..k {
                    geom = geom.add(power);
                    power = power.mul(xi);
                }
                let z_h = z.apply_matrix(geom);
                let m_p = np1 / p;
                let component = f_component_matrix(p, xi_k, m_p, &z_h);
                if t_f.binary_search(&component).is_ok() {
                    return Ok(FreenessVerdict::not_free(
                        FreenessWitness::CriterionElement { power: k, component },
                        format!(
                            "F-component of g^{k} (order {p}) lies in T; fixed zero-sum \
                             cycles exist"
                        ),
                        None,
                    ));
                }
            }
            Ok(FreenessVerdict::free(format!(
                "F-component avoids T for every prime dividing d = {d}; sufficient \
                 criterion (NotFree is only reported with a constructible witness)"
            )))
        }
    }
}

/// Criterion verdict for every `z` in the `(n+1)`-torsion of `F`, in
/// lexicographic order of the residues.
pub fn scan_z(row: BdfRow, n: u64) -> Result<Vec<(TorusPoint, FreenessVerdict)>, ActionError> {
    let np1 = n + 1;
    if np1 % row.d() != 0 {
        return Err(ActionError::InvarianceFailed(format!(
            "scan needs d = {} dividing n + 1 = {np1}",
            row.d()
        )));
    }
    let mut out = Vec::new();
    for a in 0..np1 {
        for b in 0..np1 {
            let z = crate::torsion::make_point(a as i64, b as i64, np1)?;
            let spec = ActionSpec::Bdf { row, z };
            let verdict = freeness_criterion(&spec, n)?;
            out.push((z, verdict));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torsion::{make_point, CycloTag, PeriodBasis};

    fn pt(a: i64, b: i64, n: u64) -> TorusPoint {
        make_point(a, b, n).unwrap()
    }

    fn pp(ea: i64, eb: i64, en: u64, fa: i64, fb: i64, fn_: u64) -> ProductPoint {
        ProductPoint::new(pt(ea, eb, en), pt(fa, fb, fn_))
    }

    #[test]
    fn cycle_storage_is_canonical() {
        let a = pp(1, 0, 2, 0, 0, 1);
        let b = pp(0, 1, 2, 1, 0, 2);
        assert_eq!(ZeroCycle::new(vec![a, b]), ZeroCycle::new(vec![b, a]));
        assert_ne!(ZeroCycle::new(vec![a, a]), ZeroCycle::new(vec![a, b]));
    }

    #[test]
    fn act_on_cycle_identity_and_involution_orbit() {
        let t = FiniteSubgroup::trivial();
        let c = ZeroCycle::new(vec![pp(1, 0, 4, 0, 0, 1), pp(0, 1, 4, 1, 0, 2)]);
        assert_eq!(act_on_cycle(&AffineAuto::identity(), &c, &t), c);

        // iota on {x, iota(x)} permutes the two points
        let spec = ActionSpec::lieberman(pt(1, 0, 2), pt(1, 0, 2)).unwrap();
        let iota = spec.generator();
        let x = pp(1, 1, 4, 1, 0, 4);
        let orbit = ZeroCycle::new(vec![x, iota.apply(&x)]);
        assert_eq!(act_on_cycle(&iota, &orbit, &t), orbit);
    }

    #[test]
    fn lieberman_zero_sum_image_formula() {
        // applying the involution to a zero-sum pair gives sum (n+1)(a, a')
        let a = pt(1, 0, 4);
        let a_prime = pt(1, 0, 2);
        let spec = ActionSpec::lieberman(a, a_prime).unwrap();
        let iota = spec.generator();
        let t = FiniteSubgroup::trivial();
        let x = pp(1, 2, 8, 3, 1, 8);
        let c = ZeroCycle::new(vec![x, x.neg()]);
        assert!(cycle_sum(&c, &t).is_zero());
        let image = act_on_cycle(&iota, &c, &t);
        let expected = ProductPoint::new(a, a_prime).scalar_mul(2);
        assert_eq!(cycle_sum(&image, &t), expected);
    }

    #[test]
    fn cycle_sum_examples() {
        let t = FiniteSubgroup::trivial();
        let x = pp(1, 2, 5, 3, 4, 5);
        assert!(cycle_sum(&ZeroCycle::new(vec![x, x.neg()]), &t).is_zero());
        let zeros = ZeroCycle::new(vec![ProductPoint::ZERO; 6]);
        assert!(cycle_sum(&zeros, &t).is_zero());
        // order independence
        let y = pp(2, 0, 3, 1, 1, 6);
        let c1 = cycle_sum(&ZeroCycle::new(vec![x, y, x]), &t);
        let c2 = x.add(&y).add(&x);
        assert_eq!(c1, c2);
    }

    #[test]
    fn f_component_closed_forms() {
        // d = 2: m z
        let minus = CyclotomicClass::new(CycloTag::MinusOne, PeriodBasis::Generic).unwrap();
        let z = pt(1, 3, 8);
        assert_eq!(f_component(2, &minus, 1, &z), z);
        assert_eq!(f_component(2, &minus, 3, &z), z.scalar_mul(3));

        // d = 3: the kernel generator (1 + zeta)/3 collapses
        let omega = CyclotomicClass::new(CycloTag::Omega, PeriodBasis::Eisenstein).unwrap();
        let kernel_gen = pt(1, 1, 3);
        assert!(f_component(3, &omega, 1, &kernel_gen).is_zero());
        // but a generic 3-torsion z does not
        assert!(!f_component(3, &omega, 1, &pt(1, 0, 3)).is_zero());

        // d = 6: identically zero on (6m)-torsion
        let zeta = CyclotomicClass::new(CycloTag::Zeta, PeriodBasis::Eisenstein).unwrap();
        for m in 1..=6u64 {
            let lv = 6 * m;
            for a in 0..lv {
                for b in 0..lv {
                    let z = pt(a as i64, b as i64, lv);
                    assert!(f_component(6, &zeta, m, &z).is_zero(), "m={m} z={z}");
                }
            }
        }
    }

    #[test]
    fn f_component_reduced_forms_agree() {
        let cases = [
            (2, CycloTag::MinusOne, PeriodBasis::Generic),
            (3, CycloTag::Omega, PeriodBasis::Eisenstein),
            (4, CycloTag::I, PeriodBasis::Gauss),
            (6, CycloTag::Zeta, PeriodBasis::Eisenstein),
        ];
        for (d, tag, basis) in cases {
            let xi = CyclotomicClass::new(tag, basis).unwrap();
            for m in 1..=4u64 {
                let lv = d * m;
                for a in 0..lv {
                    for b in 0..lv {
                        let z = pt(a as i64, b as i64, lv);
                        assert_eq!(
                            f_component(d, &xi, m, &z),
                            f_component_reduced(d, xi.matrix(), m, &z),
                            "d={d} m={m} z={z}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn sum_of_powers_annihilates() {
        // 1 + xi + ... + xi^(d-1) = 0 for each root, so orbit sums lose the
        // free coordinates
        for (tag, basis) in [
            (CycloTag::MinusOne, PeriodBasis::Generic),
            (CycloTag::Omega, PeriodBasis::Eisenstein),
            (CycloTag::I, PeriodBasis::Gauss),
            (CycloTag::Zeta, PeriodBasis::Eisenstein),
        ] {
            let xi = CyclotomicClass::new(tag, basis).unwrap();
            let d = tag.multiplicative_order();
            let mut sum = Mat2([[0, 0], [0, 0]]);
            let mut power = Mat2::IDENTITY;
            for _ in 0..d {
                sum = sum.add(power);
                power = power.mul(xi.matrix());
            }
            assert_eq!(sum, Mat2([[0, 0], [0, 0]]), "{tag:?}");
        }
    }

    #[test]
    fn invariance_criterion_examples() {
        // row 1, n = 1, z of order 2: holds
        let spec = ActionSpec::bdf(1, pt(1, 0, 2)).unwrap();
        assert!(invariance_criterion(&spec, 1));
        // row 2 (d = 3), n = 1: 3 does not divide 2
        let spec = ActionSpec::bdf(2, pt(1, 0, 3)).unwrap();
        assert!(!invariance_criterion(&spec, 1));
        // z outside F[n+1]
        let spec = ActionSpec::bdf(1, pt(1, 0, 4)).unwrap();
        assert!(!invariance_criterion(&spec, 1));
        // involution: n = 3, a of order 4
        let spec = ActionSpec::lieberman(pt(1, 0, 4), pt(1, 0, 2)).unwrap();
        assert!(invariance_criterion(&spec, 3));
        assert!(!invariance_criterion(&spec, 2));
        assert!(!invariance_criterion(&spec, 5));
    }

    #[test]
    fn freeness_criterion_examples() {
        // row 1, n = 1, z of order 2: free by condition (i)
        let spec = ActionSpec::bdf(1, pt(1, 0, 2)).unwrap();
        let verdict = freeness_criterion(&spec, 1).unwrap();
        assert_eq!(verdict.status, FreenessStatus::FreeByCriterion);

        // row 4 (d = 6): always NotFree
        for z in [pt(1, 0, 6), pt(0, 1, 6), pt(5, 3, 6)] {
            let spec = ActionSpec::bdf(4, z).unwrap();
            let verdict = freeness_criterion(&spec, 5).unwrap();
            assert_eq!(verdict.status, FreenessStatus::NotFree, "z = {z}");
            match verdict.witness {
                Some(FreenessWitness::CriterionElement { component, .. }) => {
                    assert!(component.is_zero())
                }
                other => panic!("expected criterion element, got {other:?}"),
            }
        }

        // row 5 (d = 2, T = {0, 1/2}): z = 1/2 has m z in T
        let spec = ActionSpec::bdf(5, pt(1, 0, 2)).unwrap();
        let verdict = freeness_criterion(&spec, 1).unwrap();
        assert_eq!(verdict.status, FreenessStatus::NotFree);
        // while z = tau/2 avoids T
        let spec = ActionSpec::bdf(5, pt(0, 1, 2)).unwrap();
        let verdict = freeness_criterion(&spec, 1).unwrap();
        assert_eq!(verdict.status, FreenessStatus::FreeByCriterion);

        // precondition violations are rejected
        let spec = ActionSpec::bdf(2, pt(1, 0, 3)).unwrap();
        assert!(freeness_criterion(&spec, 1).is_err());
    }

    #[test]
    fn freeness_criterion_d3_kernel_line() {
        // row 2, n = 2 (m = 1): NotFree exactly on the kernel line Z(1+zeta)/3
        let kernel: Vec<TorusPoint> = vec![TorusPoint::ZERO, pt(1, 1, 3), pt(2, 2, 3)];
        for a in 0..3 {
            for b in 0..3 {
                let z = pt(a, b, 3);
                let spec = ActionSpec::bdf(2, z).unwrap();
                let verdict = freeness_criterion(&spec, 2).unwrap();
                let expected = if kernel.contains(&z) {
                    FreenessStatus::NotFree
                } else {
                    FreenessStatus::FreeByCriterion
                };
                assert_eq!(verdict.status, expected, "z = {z}");
            }
        }
    }

    #[test]
    fn freeness_criterion_d4_condition() {
        // row 3, n = 3 (m = 1): free iff 2z avoids the kernel of (1+i),
        // i.e. 2 m z not in Z(1+i)/2
        for a in 0..4 {
            for b in 0..4 {
                let z = pt(a, b, 4);
                let spec = ActionSpec::bdf(3, z).unwrap();
                let verdict = freeness_criterion(&spec, 3).unwrap();
                let two_z = z.scalar_mul(2);
                let in_kernel = two_z.is_zero() || two_z == pt(1, 1, 2);
                let expected = if in_kernel {
                    FreenessStatus::NotFree
                } else {
                    FreenessStatus::FreeByCriterion
                };
                assert_eq!(verdict.status, expected, "z = {z}");
            }
        }
    }

    #[test]
    fn scan_z_examples() {
        // row 1, n = 1: free exactly for the three nonzero z in F[2]
        let scan = scan_z(BdfRow::new(1).unwrap(), 1).unwrap();
        assert_eq!(scan.len(), 4);
        let free: Vec<&TorusPoint> = scan
            .iter()
            .filter(|(_, v)| v.status == FreenessStatus::FreeByCriterion)
            .map(|(z, _)| z)
            .collect();
        assert_eq!(free.len(), 3);
        assert!(free.iter().all(|z| !z.is_zero()));

        // row 2, n = 2: nonempty free list
        let scan = scan_z(BdfRow::new(2).unwrap(), 2).unwrap();
        assert_eq!(
            scan.iter()
                .filter(|(_, v)| v.status == FreenessStatus::FreeByCriterion)
                .count(),
            6
        );

        // row 4, n = 5: empty free list
        let scan = scan_z(BdfRow::new(4).unwrap(), 5).unwrap();
        assert!(scan
            .iter()
            .all(|(_, v)| v.status == FreenessStatus::NotFree));

        // mismatched d and n rejected
        assert!(scan_z(BdfRow::new(2).unwrap(), 1).is_err());
    }
}
