//! Machine-readable verdict records. Points are serialized in the textual
//! `a/N+b/N*tau` syntax so records are stable, diffable and re-parseable;
//! [`VerdictRecord::reverify`] closes the loop by rebuilding the action
//! from the record and checking the recorded outcome again.

use super::action::{build_action, ActionSpec};
use super::bruteforce::freeness_bruteforce;
use super::model::TorsionModel;
use super::{
    freeness_criterion, FreenessStatus, FreenessVerdict, FreenessWitness, ZeroCycle,
};
use crate::torsion::{Levels, ProductPoint, TorusPoint};
use serde::{Deserialize, Serialize};

/// Serializable form of an [`ActionSpec`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpecRecord {
    Lieberman { a: String, a_prime: String },
    Bdf { row: u8, z: String },
}

impl From<&ActionSpec> for SpecRecord {
    fn from(spec: &ActionSpec) -> Self {
        match spec {
            ActionSpec::Lieberman { a, a_prime } => SpecRecord::Lieberman {
                a: a.format(),
                a_prime: a_prime.format(),
            },
            ActionSpec::Bdf { row, z } => SpecRecord::Bdf {
                row: row.number(),
                z: z.format(),
            },
        }
    }
}

impl SpecRecord {
    pub fn to_spec(&self) -> Result<ActionSpec, String> {
        match self {
            SpecRecord::Lieberman { a, a_prime } => {
                let a = TorusPoint::parse(a).map_err(|e| e.to_string())?;
                let a_prime = TorusPoint::parse(a_prime).map_err(|e| e.to_string())?;
                ActionSpec::lieberman(a, a_prime).map_err(|e| e.to_string())
            }
            SpecRecord::Bdf { row, z } => {
                let z = TorusPoint::parse(z).map_err(|e| e.to_string())?;
                ActionSpec::bdf(*row, z).map_err(|e| e.to_string())
            }
        }
    }
}

/// Serializable witness: either the criterion obstruction or an explicit
/// fixed cycle, with points as `(e, f)` string pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessRecord {
    CriterionElement { power: u64, component: String },
    FixedCycle { power: u64, cycle: Vec<(String, String)> },
}

impl From<&FreenessWitness> for WitnessRecord {
    fn from(w: &FreenessWitness) -> Self {
        match w {
            FreenessWitness::CriterionElement { power, component } => {
                WitnessRecord::CriterionElement {
                    power: *power,
                    component: component.format(),
                }
            }
            FreenessWitness::FixedCycle { power, cycle } => WitnessRecord::FixedCycle {
                power: *power,
                cycle: cycle
                    .points()
                    .iter()
                    .map(|p| (p.e.format(), p.f.format()))
                    .collect(),
            },
        }
    }
}

/// The JSON verdict record: spec, n, levels, status, optional witness and
/// the fired condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub spec: SpecRecord,
    pub n: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub levels: Option<(u64, u64)>,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessRecord>,
    pub condition_fired: String,
}

pub fn status_name(status: FreenessStatus) -> &'static str {
    match status {
        FreenessStatus::FreeByCriterion => "FREE_BY_CRITERION",
        FreenessStatus::NotFree => "NOT_FREE",
        FreenessStatus::UnknownAtLevel => "UNKNOWN_AT_LEVEL",
    }
}

impl VerdictRecord {
    pub fn new(spec: &ActionSpec, n: u64, verdict: &FreenessVerdict) -> Self {
        VerdictRecord {
            spec: spec.into(),
            n,
            levels: verdict.levels.map(|l| (l.e, l.f)),
            status: status_name(verdict.status).to_string(),
            witness: verdict.witness.as_ref().map(WitnessRecord::from),
            condition_fired: verdict.condition_fired.clone(),
        }
    }

    /// Re-derives the recorded verdict from scratch.
    ///
    /// Criterion outcomes are recomputed; a fixed-cycle witness is parsed,
    /// reduced on a freshly built model and checked to be fixed by the named
    /// element and zero-sum; an `UNKNOWN_AT_LEVEL` record re-runs the search
    /// at the recorded levels. Returns a description of the first mismatch.
    pub fn reverify(&self) -> Result<(), String> {
        let spec = self.spec.to_spec()?;
        match self.status.as_str() {
            "FREE_BY_CRITERION" => {
                let verdict = freeness_criterion(&spec, self.n).map_err(|e| e.to_string())?;
                if verdict.status != FreenessStatus::FreeByCriterion {
                    return Err(format!(
                        "criterion now reports {}",
                        status_name(verdict.status)
                    ));
                }
                Ok(())
            }
            "NOT_FREE" => match &self.witness {
                Some(WitnessRecord::CriterionElement { .. }) => {
                    let verdict =
                        freeness_criterion(&spec, self.n).map_err(|e| e.to_string())?;
                    if verdict.status != FreenessStatus::NotFree {
                        return Err(format!(
                            "criterion now reports {}",
                            status_name(verdict.status)
                        ));
                    }
                    Ok(())
                }
                Some(WitnessRecord::FixedCycle { power, cycle }) => {
                    let (le, lf) = self
                        .levels
                        .ok_or("a fixed-cycle witness needs recorded levels")?;
                    let levels = Levels::new(le, lf).map_err(|e| e.to_string())?;
                    let built = build_action(&spec, levels).map_err(|e| e.to_string())?;
                    let model = TorsionModel::build(
                        levels,
                        spec.basis_e(),
                        spec.basis_f(),
                        built.t_subgroup.clone(),
                    )
                    .map_err(|e| e.to_string())?;
                    let mut points = Vec::with_capacity(cycle.len());
                    for (e, f) in cycle {
                        let p = ProductPoint::new(
                            TorusPoint::parse(e).map_err(|e| e.to_string())?,
                            TorusPoint::parse(f).map_err(|e| e.to_string())?,
                        );
                        points.push(model.reduce(&p));
                    }
                    let witness = ZeroCycle::new(points);
                    if witness.len() as u64 != self.n + 1 {
                        return Err(format!(
                            "witness length {} differs from n + 1 = {}",
                            witness.len(),
                            self.n + 1
                        ));
                    }
                    let element = built.generator.pow(*power);
                    let image = super::act_on_cycle(&element, &witness, &built.t_subgroup);
                    if image != witness {
                        return Err("witness cycle is not fixed by the element".into());
                    }
                    let sum = super::cycle_sum(&witness, &built.t_subgroup);
                    if !sum.is_zero() {
                        return Err("witness cycle is not zero-sum".into());
                    }
                    Ok(())
                }
                None => Err("NOT_FREE record carries no witness".into()),
            },
            "UNKNOWN_AT_LEVEL" => {
                let (le, lf) = self
                    .levels
                    .ok_or("an UNKNOWN_AT_LEVEL record needs recorded levels")?;
                let levels = Levels::new(le, lf).map_err(|e| e.to_string())?;
                let built = build_action(&spec, levels).map_err(|e| e.to_string())?;
                let model = TorsionModel::build(
                    levels,
                    spec.basis_e(),
                    spec.basis_f(),
                    built.t_subgroup.clone(),
                )
                .map_err(|e| e.to_string())?;
                let verdict =
                    freeness_bruteforce(&built, &model, self.n).map_err(|e| e.to_string())?;
                if verdict.status != FreenessStatus::UnknownAtLevel {
                    return Err(format!(
                        "search now reports {}",
                        status_name(verdict.status)
                    ));
                }
                Ok(())
            }
            other => Err(format!("unknown status {other:?}")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::recommended_levels;
    use crate::torsion::make_point;

    #[test]
    fn record_roundtrip_and_reverify() {
        let z = make_point(1, 0, 6).unwrap();
        let spec = ActionSpec::bdf(4, z).unwrap();
        let levels = recommended_levels(&spec, 5).unwrap();
        let built = build_action(&spec, levels).unwrap();
        let model = TorsionModel::build(
            levels,
            spec.basis_e(),
            spec.basis_f(),
            built.t_subgroup.clone(),
        )
        .unwrap();
        let verdict = freeness_bruteforce(&built, &model, 5).unwrap();
        let record = VerdictRecord::new(&spec, 5, &verdict);
        let json = serde_json::to_string(&record).unwrap();
        let parsed: VerdictRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed, record);
        parsed.reverify().unwrap();
    }

    #[test]
    fn reverify_rejects_tampered_witness() {
        let z = make_point(1, 0, 6).unwrap();
        let spec = ActionSpec::bdf(4, z).unwrap();
        let levels = recommended_levels(&spec, 5).unwrap();
        let built = build_action(&spec, levels).unwrap();
        let model = TorsionModel::build(
            levels,
            spec.basis_e(),
            spec.basis_f(),
            built.t_subgroup.clone(),
        )
        .unwrap();
        let verdict = freeness_bruteforce(&built, &model, 5).unwrap();
        let mut record = VerdictRecord::new(&spec, 5, &verdict);
        if let Some(WitnessRecord::FixedCycle { cycle, .. }) = &mut record.witness {
            cycle[0].0 = "1/5+0/5*tau".to_string();
        }
        assert!(record.reverify().is_err());
    }

    #[test]
    fn criterion_records_reverify() {
        let spec = ActionSpec::bdf(1, make_point(1, 0, 2).unwrap()).unwrap();
        let verdict = freeness_criterion(&spec, 1).unwrap();
        let record = VerdictRecord::new(&spec, 1, &verdict);
        record.reverify().unwrap();

        let spec = ActionSpec::bdf(5, make_point(1, 0, 2).unwrap()).unwrap();
        let verdict = freeness_criterion(&spec, 1).unwrap();
        assert_eq!(verdict.status, FreenessStatus::NotFree);
        let record = VerdictRecord::new(&spec, 1, &verdict);
        record.reverify().unwrap();
    }
}
