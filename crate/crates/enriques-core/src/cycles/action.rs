//! The finite group actions under study: the seven rows of the
//! Bagnera-de Franchis classification of bielliptic surfaces, acting on a
//! product `E x F` of elliptic curves, and the Lieberman involution
//! `(b, b') -> (-b + a, b' + a')` on a product `E x E'`.
//!
//! Each row has a canonical generator `(e, f) -> (e + 1/d, xi*f + z)` with
//! `xi` of order `d`, and rows 5-7 carry an extra translation subgroup
//! `T~` so that the abelian surface is the quotient `(E x F)/T~`.

use crate::torsion::{
    auto_order, lcm, make_point, AffineAuto, CycloTag, CyclotomicClass, FiniteSubgroup, Levels,
    Mat2, PeriodBasis, ProductPoint, TorsionError, TorusPoint,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ActionError {
    #[error(transparent)]
    Torsion(#[from] TorsionError),
    #[error("row must be between 1 and 7, got {0}")]
    InvalidRow(u8),
    #[error("the involution requires a' of exact order 2, got order {0}")]
    APrimeOrder(u64),
    #[error("level {level} on factor {factor} is incompatible: needs a multiple of {needs}")]
    LevelMismatch {
        factor: char,
        level: u64,
        needs: u64,
    },
    #[error("invariance hypotheses fail: {0}")]
    InvarianceFailed(String),
    #[error("model would have {points} points, over the limit {limit}")]
    ModelTooLarge { points: u64, limit: u64 },
    #[error("linear part does not preserve the translation subgroup")]
    SubgroupNotPreserved,
    #[error("point action is not free on the model")]
    PointActionNotFree,
    #[error("search space of {size} candidates exceeds the budget {budget}")]
    SearchTooLarge { size: u128, budget: u128 },
}

/// Row of the bielliptic classification table, 1 through 7.
///
/// Rows 1-4 have trivial `T~` and `d = 2, 3, 4, 6`; rows 5-7 repeat
/// `d = 2, 3, 4` with `T~` of order 2, 3, 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BdfRow(u8);

impl BdfRow {
    pub fn new(row: u8) -> Result<Self, ActionError> {
        if (1..=7).contains(&row) {
            Ok(BdfRow(row))
        } else {
            Err(ActionError::InvalidRow(row))
        }
    }

    pub fn all() -> impl Iterator<Item = BdfRow> {
        (1..=7).map(BdfRow)
    }

    pub fn number(self) -> u8 {
        self.0
    }

    /// Order of the canonical generator.
    pub fn d(self) -> u64 {
        match self.0 {
            1 | 5 => 2,
            2 | 6 => 3,
            3 | 7 => 4,
            4 => 6,
            _ => unreachable!(),
        }
    }

    /// The root of unity `xi` acting on the `F` factor.
    pub fn xi_tag(self) -> CycloTag {
        match self.0 {
            1 | 5 => CycloTag::MinusOne,
            2 | 6 => CycloTag::Omega,
            3 | 7 => CycloTag::I,
            4 => CycloTag::Zeta,
            _ => unreachable!(),
        }
    }

    /// Period basis forced on `F` by `xi` (`Generic` when `xi = -1`).
    pub fn basis_f(self) -> PeriodBasis {
        self.xi_tag().required_basis().unwrap_or(PeriodBasis::Generic)
    }

    pub fn xi(self) -> CyclotomicClass {
        CyclotomicClass::new(self.xi_tag(), self.basis_f()).expect("table pairs are compatible")
    }

    /// Generator of the extra translation subgroup `T~`, if the row has one:
    /// `(tau1/2, 1/2)`, `(tau1/3, (1+zeta)/3)`, `(tau1/2, (1+i)/2)` for rows
    /// 5, 6, 7.
    pub fn t_generator(self) -> Option<ProductPoint> {
        let gen = |eb: i64, en: u64, fa: i64, fb: i64, fn_: u64| {
            ProductPoint::new(
                make_point(0, eb, en).expect("static table point"),
                make_point(fa, fb, fn_).expect("static table point"),
            )
        };
        match self.0 {
            5 => Some(gen(1, 2, 1, 0, 2)),
            6 => Some(gen(1, 3, 1, 1, 3)),
            7 => Some(gen(1, 2, 1, 1, 2)),
            _ => None,
        }
    }

    pub fn t_subgroup(self) -> FiniteSubgroup {
        match self.t_generator() {
            Some(g) => FiniteSubgroup::from_generators(&[g]),
            None => FiniteSubgroup::trivial(),
        }
    }

    /// Exponent of the `E`-projection of `T~`.
    pub fn t_e_exponent(self) -> u64 {
        self.t_subgroup().e_exponent()
    }

    /// Exponent of the `F`-projection of `T~`.
    pub fn t_f_exponent(self) -> u64 {
        self.t_subgroup().f_exponent()
    }
}

/// One of the group actions whose freeness on the symmetric product of an
/// abelian surface is under investigation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ActionSpec {
    /// Involution `(b, b') -> (-b + a, b' + a')` of `E x E'` with `a'` of
    /// exact order two (that makes the point action free).
    Lieberman { a: TorusPoint, a_prime: TorusPoint },
    /// Canonical generator of a bielliptic classification row, with the
    /// translation parameter `z` on the `F` factor.
    Bdf { row: BdfRow, z: TorusPoint },
}

impl ActionSpec {
    pub fn lieberman(a: TorusPoint, a_prime: TorusPoint) -> Result<Self, ActionError> {
        if a_prime.order() != 2 {
            return Err(ActionError::APrimeOrder(a_prime.order()));
        }
        Ok(ActionSpec::Lieberman { a, a_prime })
    }

    pub fn bdf(row: u8, z: TorusPoint) -> Result<Self, ActionError> {
        Ok(ActionSpec::Bdf {
            row: BdfRow::new(row)?,
            z,
        })
    }

    /// Order of the canonical generator.
    pub fn d(&self) -> u64 {
        match self {
            ActionSpec::Lieberman { .. } => 2,
            ActionSpec::Bdf { row, .. } => row.d(),
        }
    }

    pub fn basis_e(&self) -> PeriodBasis {
        PeriodBasis::Generic
    }

    pub fn basis_f(&self) -> PeriodBasis {
        match self {
            ActionSpec::Lieberman { .. } => PeriodBasis::Generic,
            ActionSpec::Bdf { row, .. } => row.basis_f(),
        }
    }

    /// The translation subgroup `T~` (trivial for Lieberman and rows 1-4).
    pub fn t_subgroup(&self) -> FiniteSubgroup {
        match self {
            ActionSpec::Lieberman { .. } => FiniteSubgroup::trivial(),
            ActionSpec::Bdf { row, .. } => row.t_subgroup(),
        }
    }

    /// `T`: the projection of `T~` to the `F` factor, sorted.
    pub fn t_f_projection(&self) -> Vec<TorusPoint> {
        self.t_subgroup().f_projection()
    }

    /// The canonical generator as an affine automorphism.
    pub fn generator(&self) -> AffineAuto {
        match self {
            ActionSpec::Lieberman { a, a_prime } => AffineAuto {
                linear_e: Mat2::MINUS_IDENTITY,
                linear_f: Mat2::IDENTITY,
                translation: ProductPoint::new(*a, *a_prime),
            },
            ActionSpec::Bdf { row, z } => AffineAuto {
                linear_e: Mat2::IDENTITY,
                linear_f: row.xi().matrix(),
                translation: ProductPoint::new(
                    make_point(1, 0, row.d()).expect("d >= 2"),
                    *z,
                ),
            },
        }
    }

    /// Levels the generator and `T~` require as divisors.
    fn minimal_levels(&self) -> Levels {
        match self {
            ActionSpec::Lieberman { a, a_prime } => Levels {
                e: a.order().max(1),
                f: a_prime.order(),
            },
            ActionSpec::Bdf { row, z } => Levels {
                e: lcm(row.d(), row.t_e_exponent()),
                f: lcm(z.order(), row.t_f_exponent()),
            },
        }
    }
}

/// An action spec instantiated at concrete torsion levels: the generator,
/// the translation subgroup, and the levels they have been checked against.
#[derive(Debug, Clone)]
pub struct BuiltAction {
    pub spec: ActionSpec,
    pub levels: Levels,
    pub generator: AffineAuto,
    pub t_generators: Vec<AffineAuto>,
    pub t_subgroup: FiniteSubgroup,
}

/// Instantiates an action at the given levels, checking every compatibility
/// condition: the translations must live in the level torsion, the linear
/// part must preserve `T~`, the generator must commute with `T~`, and its
/// order must be exactly `d`.
pub fn build_action(spec: &ActionSpec, levels: Levels) -> Result<BuiltAction, ActionError> {
    let minimal = spec.minimal_levels();
    if levels.e % minimal.e != 0 {
        return Err(ActionError::LevelMismatch {
            factor: 'E',
            level: levels.e,
            needs: minimal.e,
        });
    }
    if levels.f % minimal.f != 0 {
        return Err(ActionError::LevelMismatch {
            factor: 'F',
            level: levels.f,
            needs: minimal.f,
        });
    }

    let generator = spec.generator();
    let t_subgroup = spec.t_subgroup();
    let t_generators: Vec<AffineAuto> = match spec {
        ActionSpec::Bdf { row, .. } => row
            .t_generator()
            .map(AffineAuto::translation_by)
            .into_iter()
            .collect(),
        ActionSpec::Lieberman { .. } => Vec::new(),
    };

    // the linear part must map T~ into itself for the quotient action to
    // make sense
    for t in t_subgroup.elements() {
        if !t_subgroup.contains(&generator.apply_linear(t)) {
            return Err(ActionError::SubgroupNotPreserved);
        }
    }
    // G and T~ commute, so the covering group is the direct product
    for t in &t_generators {
        if generator.compose(t) != t.compose(&generator) {
            return Err(ActionError::SubgroupNotPreserved);
        }
    }
    let order = auto_order(&generator, levels)?;
    debug_assert_eq!(order, spec.d());

    Ok(BuiltAction {
        spec: spec.clone(),
        levels,
        generator,
        t_generators,
        t_subgroup,
    })
}

/// Default brute-force levels for an action at a given `n`.
///
/// For a table row the `E`-level is `d^2` times the exponent of the
/// `E`-part of `T~`: the fixed-cycle search solves `p * sum(e_i) = target`
/// where the targets have bounded order, and multiplying the level by `d`
/// makes multiplication by each prime `p | d` surjective onto them. The
/// `F`-level is `lcm(n + 1, exponent of the F-part of T~)`, which contains
/// every admissible `z`. For the involution the orbit sum is constant in
/// the `E`-coordinate, so `E` only needs to contain `a`; the `E'`-level 4
/// makes doubling surjective onto the 2-torsion targets.
pub fn recommended_levels(spec: &ActionSpec, n: u64) -> Result<Levels, TorsionError> {
    match spec {
        ActionSpec::Lieberman { a, .. } => Levels::new(lcm(a.order(), 2), 4),
        ActionSpec::Bdf { row, z } => {
            let d = row.d();
            Levels::new(
                d * d * row.t_e_exponent(),
                lcm(lcm(n + 1, row.t_f_exponent()), z.order()),
            )
        }
    }
}
