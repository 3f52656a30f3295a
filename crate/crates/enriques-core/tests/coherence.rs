//! Cross-validation of the two freeness routes and of the search
//! machinery itself. The closed-form criterion and the finite-model search
//! must never disagree: a criterion `FreeByCriterion` forces the search to
//! exhaust without a witness, and a criterion `NotFree` forces the search
//! at the recommended levels to produce one. The scan-based search is also
//! compared against a literal multiset enumeration written independently
//! against the public API.

use enriques_core::cycles::{
    act_on_cycle, build_action, cycle_sum, enumerate_zero_fiber, freeness_bruteforce,
    freeness_criterion, invariance_bruteforce, invariance_criterion, recommended_levels,
    ActionSpec, BdfRow, BuiltAction, FreenessStatus, PointGroup, TorsionModel, ZeroCycle,
};
use enriques_core::torsion::{auto_order, lcm, make_point, Levels, ProductPoint, TorusPoint};

fn pt(a: i64, b: i64, n: u64) -> TorusPoint {
    make_point(a, b, n).unwrap()
}

fn model_for(built: &BuiltAction) -> TorsionModel {
    TorsionModel::build(
        built.levels,
        built.spec.basis_e(),
        built.spec.basis_f(),
        built.t_subgroup.clone(),
    )
    .unwrap()
}

/// Literal version of the fixed-cycle search: for each prime p | d,
/// enumerate every multiset of m = (n+1)/p orbit generators over the whole
/// model and test whether the union of their orbits sums to zero. Exits on
/// the first witness; exhausts otherwise. Independent of the scan-based
/// implementation.
fn naive_has_fixed_zero_sum_cycle(built: &BuiltAction, model: &TorsionModel, n: u64) -> bool {
    let d = built.spec.d();
    let np1 = n + 1;
    let mut primes = Vec::new();
    let mut rest = d;
    for p in 2..=d {
        if rest % p == 0 {
            primes.push(p);
            while rest % p == 0 {
                rest /= p;
            }
        }
    }
    for p in primes {
        let k = d / p;
        let h = built.generator.pow(k);
        let m = (np1 / p) as usize;
        // per-point orbit sums, through public arithmetic only
        let sums: Vec<ProductPoint> = model
            .points()
            .iter()
            .map(|x| {
                let mut acc = ProductPoint::ZERO;
                let mut y = *x;
                for _ in 0..p {
                    acc = acc.add(&y);
                    y = h.apply(&y);
                }
                model.reduce(&acc)
            })
            .collect();
        let zero = model.zero();
        // nondecreasing multisets of m generator indices
        let mut stack = vec![0usize; m];
        loop {
            let total = stack
                .iter()
                .fold(ProductPoint::ZERO, |acc, &i| acc.add(&sums[i]));
            if model.reduce(&total) == zero {
                return true;
            }
            let mut j = m;
            let mut carried = false;
            while j > 0 {
                j -= 1;
                if stack[j] + 1 < sums.len() {
                    stack[j] += 1;
                    let v = stack[j];
                    for slot in stack.iter_mut().skip(j + 1) {
                        *slot = v;
                    }
                    carried = true;
                    break;
                }
            }
            if !carried {
                break;
            }
        }
    }
    false
}

#[test]
fn criterion_and_bruteforce_never_disagree() {
    // all rows, both n+1 = d and n+1 = 2d, over every z of level dividing d
    // (the recommended levels do not depend on such z, so the model is
    // shared across the scan)
    for row in BdfRow::all() {
        let d = row.d();
        for np1 in [d, 2 * d] {
            let n = np1 - 1;
            let levels =
                recommended_levels(&ActionSpec::Bdf { row, z: pt(1, 0, d) }, n).unwrap();
            let mut model: Option<TorsionModel> = None;
            for a in 0..d {
                for b in 0..d {
                    let z = pt(a as i64, b as i64, d);
                    let spec = ActionSpec::Bdf { row, z };
                    assert!(invariance_criterion(&spec, n));
                    assert_eq!(recommended_levels(&spec, n).unwrap(), levels);
                    let verdict = freeness_criterion(&spec, n).unwrap();
                    let built = build_action(&spec, levels).unwrap();
                    let model = model.get_or_insert_with(|| model_for(&built));
                    let search = freeness_bruteforce(&built, model, n).unwrap();
                    match verdict.status {
                        FreenessStatus::FreeByCriterion => assert_eq!(
                            search.status,
                            FreenessStatus::UnknownAtLevel,
                            "row {}, n+1 = {np1}, z = {z}",
                            row.number()
                        ),
                        FreenessStatus::NotFree => assert_eq!(
                            search.status,
                            FreenessStatus::NotFree,
                            "row {}, n+1 = {np1}, z = {z}",
                            row.number()
                        ),
                        FreenessStatus::UnknownAtLevel => {
                            panic!("criterion never returns UnknownAtLevel")
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn scan_search_matches_naive_enumeration() {
    // small-model sweep where the literal multiset enumeration is feasible
    let cases: &[(u8, u64, (i64, i64, u64), (u64, u64))] = &[
        (1, 1, (1, 0, 2), (4, 2)),
        (1, 1, (1, 0, 2), (8, 8)),
        (1, 1, (0, 0, 1), (4, 2)),
        (1, 1, (0, 1, 2), (2, 2)),
        (2, 2, (1, 0, 3), (9, 3)),
        (2, 2, (1, 1, 3), (3, 3)),
        (3, 3, (1, 0, 4), (8, 4)),
        (3, 3, (1, 1, 2), (4, 4)),
        (4, 5, (1, 0, 6), (12, 6)),
        (5, 1, (1, 0, 2), (8, 2)),
        (5, 1, (0, 1, 2), (4, 2)),
        (6, 2, (1, 1, 3), (9, 3)),
        (7, 3, (1, 0, 2), (8, 4)),
    ];
    for &(row, n, (za, zb, zn), (le, lf)) in cases {
        let z = pt(za, zb, zn);
        let spec = ActionSpec::bdf(row, z).unwrap();
        let built = build_action(&spec, Levels::new(le, lf).unwrap()).unwrap();
        let model = model_for(&built);
        let fast = freeness_bruteforce(&built, &model, n).unwrap();
        let naive = naive_has_fixed_zero_sum_cycle(&built, &model, n);
        assert_eq!(
            fast.status == FreenessStatus::NotFree,
            naive,
            "row {row}, n = {n}, z = {z}, levels ({le}, {lf})"
        );
    }
}

#[test]
fn invariance_criterion_matches_bruteforce() {
    let cases: &[(u8, u64, (i64, i64, u64), (u64, u64))] = &[
        (1, 1, (1, 0, 2), (2, 4)),
        (1, 1, (1, 0, 4), (2, 4)),
        (1, 1, (1, 1, 4), (2, 8)),
        (2, 2, (1, 0, 3), (3, 3)),
        (2, 2, (1, 0, 9), (3, 9)),
        (5, 1, (1, 0, 2), (2, 2)),
        (7, 3, (1, 1, 4), (4, 4)),
    ];
    for &(row, n, (za, zb, zn), (le, lf)) in cases {
        let z = pt(za, zb, zn);
        let spec = ActionSpec::bdf(row, z).unwrap();
        let built = build_action(&spec, Levels::new(le, lf).unwrap()).unwrap();
        let model = model_for(&built);
        let outcome = invariance_bruteforce(&built, &model, n, 1 << 26).unwrap();
        // the criterion is an iff on these models: the sum of the image of a
        // zero-sum cycle is (n+1) * translation
        assert_eq!(
            outcome.invariant,
            invariance_criterion(&spec, n),
            "row {row}, z = {z}"
        );
        if let Some(witness) = outcome.witness {
            assert!(cycle_sum(&witness, &built.t_subgroup).is_zero());
            let image = act_on_cycle(&built.generator, &witness, &built.t_subgroup);
            assert!(!cycle_sum(&image, &built.t_subgroup).is_zero());
        }
    }
}

#[test]
fn point_actions_are_free_on_models() {
    // every nontrivial element of G x T~ moves every model point
    for row in BdfRow::all() {
        let d = row.d();
        let z = pt(1, 0, d);
        let spec = ActionSpec::Bdf { row, z };
        let levels = Levels::new(
            lcm(d, 2 * row.t_e_exponent()),
            lcm(d, lcm(2, row.t_f_exponent())),
        )
        .unwrap();
        let built = build_action(&spec, levels).unwrap();
        let model = model_for(&built);
        for k in 1..d {
            let h = built.generator.pow(k);
            let perm = model.permutation(&h).unwrap();
            assert!(
                perm.iter().enumerate().all(|(i, &j)| i as u32 != j),
                "row {}, power {k}",
                row.number()
            );
        }
    }
    // and the Lieberman involution moves every point (a' has order two)
    let spec = ActionSpec::lieberman(pt(1, 0, 4), pt(1, 0, 2)).unwrap();
    let built = build_action(&spec, Levels::new(4, 2).unwrap()).unwrap();
    let model = model_for(&built);
    let perm = model.permutation(&built.generator).unwrap();
    assert!(perm.iter().enumerate().all(|(i, &j)| i as u32 != j));
}

#[test]
fn covering_group_acts_freely_upstairs() {
    // the full group G x T~ generated by the table row acts freely on the
    // unquotiented product torus: every nontrivial g^k t^j moves every point
    for row in BdfRow::all() {
        let d = row.d();
        let z = pt(1, 0, d);
        let spec = ActionSpec::Bdf { row, z };
        let levels = Levels::new(
            lcm(d, 2 * row.t_e_exponent()),
            lcm(d, lcm(2, row.t_f_exponent())),
        )
        .unwrap();
        let built = build_action(&spec, levels).unwrap();
        // plain torsion model, no quotient
        let upstairs = TorsionModel::build(
            levels,
            spec.basis_e(),
            spec.basis_f(),
            enriques_core::torsion::FiniteSubgroup::trivial(),
        )
        .unwrap();
        let t_order = built.t_subgroup.order() as u64;
        for k in 0..d {
            for j in 0..t_order {
                if k == 0 && j == 0 {
                    continue;
                }
                let mut element = built.generator.pow(k);
                for _ in 0..j {
                    element = built.t_generators[0].compose(&element);
                }
                let perm = upstairs.permutation(&element).unwrap();
                assert!(
                    perm.iter().enumerate().all(|(i, &img)| i as u32 != img),
                    "row {}: g^{k} t^{j} has a fixed point",
                    row.number()
                );
            }
        }
    }
}

#[test]
fn commuting_generator_orders() {
    // auto_order(g . t) divides lcm of the orders, on the direct-product rows
    for row_no in [5u8, 6, 7] {
        let row = BdfRow::new(row_no).unwrap();
        let d = row.d();
        let z = pt(1, 0, d);
        let spec = ActionSpec::Bdf { row, z };
        let levels = Levels::new(
            lcm(d, row.t_e_exponent()) * 2,
            lcm(d * 2, row.t_f_exponent() * 2),
        )
        .unwrap();
        let built = build_action(&spec, levels).unwrap();
        let g = built.generator;
        let t = built.t_generators[0];
        assert_eq!(g.compose(&t), t.compose(&g));
        let og = auto_order(&g, levels).unwrap();
        let ot = auto_order(&t, levels).unwrap();
        let oc = auto_order(&g.compose(&t), levels).unwrap();
        assert_eq!(lcm(og, ot) % oc, 0, "row {row_no}");
    }
}

#[test]
fn zero_fiber_enumeration_matches_filtered_enumeration() {
    // the streamed zero fiber equals the filter of all multisets by sum == 0
    let spec = ActionSpec::bdf(1, pt(1, 0, 2)).unwrap();
    let built = build_action(&spec, Levels::new(2, 2).unwrap()).unwrap();
    let model = model_for(&built);
    for len in 1..=3usize {
        let streamed: Vec<ZeroCycle> = enumerate_zero_fiber(&model, len)
            .map(ZeroCycle::new)
            .collect();
        // independent: walk all nondecreasing index tuples
        let count = model.points().len();
        let mut expected = Vec::new();
        let mut stack = vec![0usize; len];
        'outer: loop {
            let points: Vec<ProductPoint> =
                stack.iter().map(|&i| model.points()[i]).collect();
            let total = points
                .iter()
                .fold(ProductPoint::ZERO, |acc, p| acc.add(p));
            if model.reduce(&total) == model.zero() {
                expected.push(ZeroCycle::new(points));
            }
            let mut j = len;
            loop {
                if j == 0 {
                    break 'outer;
                }
                j -= 1;
                if stack[j] + 1 < count {
                    stack[j] += 1;
                    let v = stack[j];
                    for slot in stack.iter_mut().skip(j + 1) {
                        *slot = v;
                    }
                    break;
                }
            }
        }
        let mut streamed_sorted = streamed.clone();
        streamed_sorted.sort_by(|a, b| a.points().cmp(b.points()));
        let mut expected_sorted = expected.clone();
        expected_sorted.sort_by(|a, b| a.points().cmp(b.points()));
        assert_eq!(streamed_sorted, expected_sorted, "length {len}");
        assert_eq!(streamed.len(), expected.len());
    }
}

#[test]
fn lieberman_criterion_coherence() {
    // a of each order with both outcomes, checked against the search
    let a_prime = pt(1, 0, 2);
    for n in [1u64, 3] {
        let np1 = n + 1;
        for a_num in 0..np1 {
            let a = pt(a_num as i64, 0, np1);
            if np1 % a.order() != 0 {
                continue;
            }
            let spec = ActionSpec::lieberman(a, a_prime).unwrap();
            let verdict = freeness_criterion(&spec, n).unwrap();
            let levels = recommended_levels(&spec, n).unwrap();
            let built = build_action(&spec, levels).unwrap();
            let model = model_for(&built);
            let search = freeness_bruteforce(&built, &model, n).unwrap();
            match verdict.status {
                FreenessStatus::FreeByCriterion => {
                    assert_eq!(search.status, FreenessStatus::UnknownAtLevel, "a = {a}")
                }
                FreenessStatus::NotFree => {
                    assert_eq!(search.status, FreenessStatus::NotFree, "a = {a}")
                }
                FreenessStatus::UnknownAtLevel => unreachable!(),
            }
            // the naive route agrees as well
            assert_eq!(
                naive_has_fixed_zero_sum_cycle(&built, &model, n),
                search.status == FreenessStatus::NotFree,
                "a = {a}"
            );
        }
    }
}
