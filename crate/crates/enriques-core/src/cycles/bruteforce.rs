//! Exhaustive finite-model searches: invariance of the zero-sum fiber,
//! fixed zero-sum cycles of prime-order elements, fixed-cycle lengths, and
//! the abstract symmetric-power parity check.
//!
//! The fixed-cycle search exploits that a cycle fixed by a freely-acting
//! element `h` of prime order `p` is a union of `m = (n+1)/p` full orbits,
//! so its total sum is `sum_i S(x_i)` with `S(x) = x + h(x) + ... +
//! h^(p-1)(x)`. Writing `S(x) = N(x) + S(0)` with `N` additive, a zero-sum
//! union of orbits exists iff `N(x) = -m * S(0)` has a solution, which a
//! single scan of the model decides exhaustively. A found witness is
//! independently re-verified before being reported.

use super::action::{ActionError, BuiltAction};
use super::model::{enumerate_zero_fiber, PointGroup, TorsionModel};
use super::{invariance_criterion, FreenessVerdict, FreenessWitness, ZeroCycle};
use crate::torsion::ProductPoint;
use std::collections::BTreeMap;

/// Result of the invariance search: either every zero-sum cycle stays
/// zero-sum under the generator, or a violating cycle is returned.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvarianceOutcome {
    pub invariant: bool,
    pub witness: Option<ZeroCycle>,
}

/// Number of multisets of the given length over `points` elements,
/// saturating at `u128::MAX`.
pub fn multiset_count(points: usize, len: usize) -> u128 {
    // C(points + len - 1, len)
    let mut acc: u128 = 1;
    for i in 0..len {
        let num = (points + i) as u128;
        acc = match acc.checked_mul(num) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Checks by enumeration that every zero-sum cycle of length `n + 1` maps
/// to a zero-sum cycle under the generator. Returns the first violating
/// cycle otherwise.
pub fn invariance_bruteforce(
    built: &BuiltAction,
    model: &TorsionModel,
    n: u64,
    budget: u128,
) -> Result<InvarianceOutcome, ActionError> {
    let len = (n + 1) as usize;
    let size = multiset_count(model.len(), len);
    if size > budget {
        return Err(ActionError::SearchTooLarge { size, budget });
    }
    let perm = model.permutation(&built.generator)?;
    let zero = model.zero();
    for cycle in enumerate_zero_fiber(model, len) {
        let mut sum = zero;
        for p in &cycle {
            let image = model.point(perm[model.index_of(p)]);
            sum = model.add(&sum, &image);
        }
        if sum != zero {
            return Ok(InvarianceOutcome {
                invariant: false,
                witness: Some(ZeroCycle::new(cycle)),
            });
        }
    }
    Ok(InvarianceOutcome {
        invariant: true,
        witness: None,
    })
}

/// Orbit of a point index under a permutation, as model points.
fn orbit_points(model: &TorsionModel, perm: &[u32], start: u32, size: u64) -> Vec<ProductPoint> {
    let mut out = Vec::with_capacity(size as usize);
    let mut idx = start;
    for _ in 0..size {
        out.push(model.point(idx));
        idx = perm[idx as usize];
    }
    out
}

/// Exhaustive search for a fixed zero-sum cycle of length `n + 1` on the
/// model, for each prime-order power of the generator.
///
/// Returns `NotFree` with a re-verified witness cycle when the orbit-sum
/// equation has a solution, `UnknownAtLevel` when the scan exhausts the
/// model without one. The search never claims freeness: a finite model can
/// witness non-freeness but cannot certify freeness of the action on the
/// full variety.
pub fn freeness_bruteforce(
    built: &BuiltAction,
    model: &TorsionModel,
    n: u64,
) -> Result<FreenessVerdict, ActionError> {
    if !invariance_criterion(&built.spec, n) {
        return Err(ActionError::InvarianceFailed(format!(
            "freeness search presupposes the invariance hypotheses at n = {n}"
        )));
    }
    let d = built.spec.d();
    let np1 = n + 1;
    let zero = model.zero();
    let zero_idx = model.index_of(&zero);

    for p in super::distinct_primes(d) {
        let k = d / p;
        let h = built.generator.pow(k);
        let perm = model.permutation(&h)?;
        if perm.iter().enumerate().any(|(i, &j)| i as u32 == j) {
            return Err(ActionError::PointActionNotFree);
        }

        // orbit sums S(x); the orbit of x has exactly p points since h acts
        // freely and p is prime
        let sums: Vec<ProductPoint> = (0..model.len())
            .map(|i| {
                let mut idx = i as u32;
                let mut acc = model.point(idx);
                for _ in 1..p {
                    idx = perm[idx as usize];
                    acc = acc.add(&model.point(idx));
                }
                model.reduce(&acc)
            })
            .collect();

        let m_p = np1 / p;
        let s_zero = sums[zero_idx];
        // a union of m_p orbits sums to S(x_1) + ... + S(x_m) =
        // N(x_1 + ... + x_m) + m_p * S(0), so search for
        // S(x) = -(m_p - 1) * S(0)
        let target = model.reduce(&s_zero.scalar_mul(m_p as i64 - 1).neg());
        if let Some(found) = sums.iter().position(|s| *s == target) {
            let mut points = orbit_points(model, &perm, found as u32, p);
            for _ in 1..m_p {
                points.extend(orbit_points(model, &perm, zero_idx as u32, p));
            }
            let cycle = ZeroCycle::new(points.iter().map(|q| model.reduce(q)).collect());
            verify_fixed_zero_sum_cycle(model, &perm, &cycle, np1);
            return Ok(FreenessVerdict::not_free(
                FreenessWitness::FixedCycle { power: k, cycle },
                format!(
                    "orbit-sum equation solvable for g^{k} (order {p}) at levels \
                     (E: {}, F: {})",
                    model.levels().e,
                    model.levels().f
                ),
                Some(model.levels()),
            ));
        }
    }

    Ok(FreenessVerdict::unknown(
        model.levels(),
        format!(
            "no fixed zero-sum cycle of any prime-order element exists at levels \
             (E: {}, F: {}); the model is exhausted",
            model.levels().e,
            model.levels().f
        ),
    ))
}

/// Independent re-check of a would-be witness: correct length, fixed by the
/// permutation, and zero-sum. Violations are bugs, not user errors.
fn verify_fixed_zero_sum_cycle(
    model: &TorsionModel,
    perm: &[u32],
    cycle: &ZeroCycle,
    expected_len: u64,
) {
    assert_eq!(cycle.len() as u64, expected_len, "witness has wrong length");
    let image = ZeroCycle::new(
        cycle
            .points()
            .iter()
            .map(|q| model.point(perm[model.index_of(q)]))
            .collect(),
    );
    assert_eq!(&image, cycle, "witness cycle is not fixed");
    let mut sum = model.zero();
    for q in cycle.points() {
        sum = model.add(&sum, q);
    }
    assert!(sum == model.zero(), "witness cycle is not zero-sum");
}

/// Achievable lengths of fixed cycles of an automorphism on the model.
#[derive(Debug, Clone)]
pub struct FixedCycleReport {
    /// Uniform orbit size of the point action (its order on the model).
    pub orbit_size: u64,
    /// Lengths up to the bound at which fixed cycles exist, with an example.
    pub examples: BTreeMap<usize, ZeroCycle>,
}

/// Fixed cycles of `g` through the orbit structure: with a free point
/// action every point orbit has the full order as its size, a multiset is
/// fixed iff its multiplicity function is constant on orbits, and so the
/// fixed cycles of length `L` are exactly the unions of orbits with
/// multiplicity. Errors out when the point action is not free (the
/// structure argument then does not apply).
pub fn fixed_cycle_lengths_by_orbits(
    model: &TorsionModel,
    g: &crate::torsion::AffineAuto,
    max_len: usize,
) -> Result<FixedCycleReport, ActionError> {
    let perm = model.permutation(g)?;
    let mut orbit_size: Option<u64> = None;
    let mut seen = vec![false; model.len()];
    let mut first_orbit: Vec<ProductPoint> = Vec::new();
    for start in 0..model.len() {
        if seen[start] {
            continue;
        }
        let mut size = 0u64;
        let mut idx = start as u32;
        let mut orbit = Vec::new();
        loop {
            seen[idx as usize] = true;
            orbit.push(model.point(idx));
            size += 1;
            idx = perm[idx as usize];
            if idx as usize == start {
                break;
            }
        }
        match orbit_size {
            None => {
                orbit_size = Some(size);
                first_orbit = orbit;
            }
            Some(s) if s == size => {}
            Some(_) => return Err(ActionError::PointActionNotFree),
        }
        if size == 1 {
            return Err(ActionError::PointActionNotFree);
        }
    }
    let orbit_size = orbit_size.expect("model is nonempty");
    let mut examples = BTreeMap::new();
    let mut len = orbit_size as usize;
    while len <= max_len {
        let mut points = Vec::with_capacity(len);
        for _ in 0..len / orbit_size as usize {
            points.extend(first_orbit.iter().copied());
        }
        examples.insert(len, ZeroCycle::new(points));
        len += orbit_size as usize;
    }
    Ok(FixedCycleReport {
        orbit_size,
        examples,
    })
}

/// Plain enumeration of all fixed cycles of a given length: every multiset
/// over the model points, kept when it equals its own image. Budget-guarded.
pub fn fixed_cycles_exhaustive(
    model: &TorsionModel,
    g: &crate::torsion::AffineAuto,
    len: usize,
    budget: u128,
) -> Result<Vec<ZeroCycle>, ActionError> {
    let size = multiset_count(model.len(), len);
    if size > budget {
        return Err(ActionError::SearchTooLarge { size, budget });
    }
    let perm = model.permutation(g)?;
    let count = model.len();
    let mut out = Vec::new();
    let mut indices = vec![0u32; len];
    let mut image = vec![0u32; len];
    if len == 0 {
        return Ok(out);
    }
    loop {
        for (slot, &i) in image.iter_mut().zip(indices.iter()) {
            *slot = perm[i as usize];
        }
        image.sort_unstable();
        if image == indices {
            out.push(ZeroCycle::new(
                indices.iter().map(|&i| model.point(i)).collect(),
            ));
        }
        // next nondecreasing multiset
        let mut k = len;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            if (indices[k] as usize) + 1 < count {
                indices[k] += 1;
                let v = indices[k];
                for slot in indices.iter_mut().skip(k + 1) {
                    *slot = v;
                }
                break;
            }
        }
    }
}

/// True iff every fixed cycle of length at most `max_len` has length
/// divisible by `d`, established through the orbit structure.
pub fn fixed_cycle_length_check(
    model: &TorsionModel,
    g: &crate::torsion::AffineAuto,
    d: u64,
    max_len: usize,
) -> Result<bool, ActionError> {
    let report = fixed_cycle_lengths_by_orbits(model, g, max_len)?;
    Ok(report.examples.keys().all(|len| *len as u64 % d == 0))
}

/// Parity check on an abstract model of a fixed-point-free involution: a
/// set of even size `set_size` with the pairing involution, acting on
/// multisets of size `n`. Returns whether the induced action on multisets
/// is free; exhaustive, and equal to `n` being odd.
pub fn q2hilb_model_check(set_size: u64, n: u64) -> Result<bool, ActionError> {
    if set_size == 0 || set_size % 2 != 0 {
        return Err(ActionError::InvarianceFailed(format!(
            "a fixed-point-free involution needs an even set size, got {set_size}"
        )));
    }
    let len = n as usize;
    let count = set_size as usize;
    if len == 0 {
        // the empty multiset is fixed
        return Ok(false);
    }
    let mut indices = vec![0u32; len];
    let mut image = vec![0u32; len];
    loop {
        for (slot, &i) in image.iter_mut().zip(indices.iter()) {
            *slot = i ^ 1;
        }
        image.sort_unstable();
        if image == indices {
            return Ok(false);
        }
        let mut k = len;
        loop {
            if k == 0 {
                return Ok(true);
            }
            k -= 1;
            if (indices[k] as usize) + 1 < count {
                indices[k] += 1;
                let v = indices[k];
                for slot in indices.iter_mut().skip(k + 1) {
                    *slot = v;
                }
                break;
            }
        }
    }
}
