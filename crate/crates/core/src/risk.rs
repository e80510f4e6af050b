//! 4×4 likelihood/impact risk matrix.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::effects::EffectReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Likelihood {
    Improbable,
    Remote,
    Probable,
    Frequent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Impact {
    Negligible,
    Marginal,
    Critical,
    Catastrophic,
}

/// Risk class. `None` marks an attack that is not applicable at all.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RiskGrade {
    None,
    Low,
    Medium,
    Serious,
    High,
}

impl Likelihood {
    pub const ALL: [Likelihood; 4] = [
        Likelihood::Improbable,
        Likelihood::Remote,
        Likelihood::Probable,
        Likelihood::Frequent,
    ];
}

impl Impact {
    pub const ALL: [Impact; 4] = [
        Impact::Negligible,
        Impact::Marginal,
        Impact::Critical,
        Impact::Catastrophic,
    ];
}

macro_rules! display_via_debug {
    ($($t:ty),*) => {$(
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                fmt::Debug::fmt(self, f)
            }
        }
    )*};
}
display_via_debug!(Likelihood, Impact, RiskGrade);

macro_rules! from_str_case_insensitive {
    ($($t:ty),*) => {$(
        impl std::str::FromStr for $t {
            type Err = String;
            fn from_str(s: &str) -> Result<Self, String> {
                <$t>::ALL
                    .into_iter()
                    .find(|v| v.to_string().eq_ignore_ascii_case(s.trim()))
                    .ok_or_else(|| format!("unknown {} `{s}`", stringify!($t)))
            }
        }
    )*};
}
from_str_case_insensitive!(Likelihood, Impact);

/// Matrix lookup.
pub fn risk_class(likelihood: Likelihood, impact: Impact) -> RiskGrade {
    use Impact::*;
    use Likelihood::*;
    use RiskGrade::{High, Low, Medium, Serious};
    match (likelihood, impact) {
        (Improbable, Negligible | Marginal) => Low,
        (Improbable, Critical | Catastrophic) => Medium,
        (Remote, Negligible) => Low,
        (Remote, Marginal) => Medium,
        (Remote, Critical | Catastrophic) => Serious,
        (Probable, Negligible) => Medium,
        (Probable, Marginal | Critical) => Serious,
        (Probable, Catastrophic) => High,
        (Frequent, Negligible) => Medium,
        (Frequent, Marginal) => Serious,
        (Frequent, Critical | Catastrophic) => High,
    }
}

/// Highest impact group among the triggered effects.
pub fn impact_from_effects(report: &EffectReport) -> Impact {
    report
        .triggered
        .iter()
        .map(|t| t.impact)
        .max()
        .unwrap_or(Impact::Negligible)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttackType {
    InFov,
    OutOfFov,
}

impl AttackType {
    pub const ALL: [AttackType; 2] = [AttackType::InFov, AttackType::OutOfFov];

    pub fn as_str(self) -> &'static str {
        match self {
            AttackType::InFov => "in_fov",
            AttackType::OutOfFov => "out_of_fov",
        }
    }
}

impl fmt::Display for AttackType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

from_str_case_insensitive!(AttackType);

/// One qualitative assessment. `None` likelihood/impact means the attack is
/// not considered for the scenario.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RiskAssessment {
    pub scenario: String,
    pub attack_type: AttackType,
    pub likelihood: Option<Likelihood>,
    pub impact: Option<Impact>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RiskRow {
    pub scenario: String,
    pub attack_type: AttackType,
    pub likelihood: Option<Likelihood>,
    pub impact: Option<Impact>,
    pub risk: RiskGrade,
}

pub fn scenario_risk_table(assessments: &[RiskAssessment]) -> Vec<RiskRow> {
    assessments
        .iter()
        .map(|a| RiskRow {
            scenario: a.scenario.clone(),
            attack_type: a.attack_type,
            likelihood: a.likelihood,
            impact: a.impact,
            risk: match (a.likelihood, a.impact) {
                (Some(l), Some(i)) => risk_class(l, i),
                _ => RiskGrade::None,
            },
        })
        .collect()
}

/// Published per-scenario likelihood and impact assessments.
pub fn published_assessments() -> Vec<RiskAssessment> {
    use AttackType::*;
    use Impact::*;
    use Likelihood::*;
    let rows: [(&str, Option<(Likelihood, Impact)>, (Likelihood, Impact)); 9] = [
        ("Ground-LEO-Ground", None, (Frequent, Marginal)),
        ("Ground-LEO", Some((Improbable, Catastrophic)), (Probable, Marginal)),
        ("Ground-GEO", Some((Improbable, Critical)), (Frequent, Marginal)),
        ("Air-Ground", Some((Improbable, Critical)), (Remote, Marginal)),
        ("Air-LEO", Some((Improbable, Critical)), (Frequent, Marginal)),
        ("LEO-Ground", Some((Improbable, Marginal)), (Probable, Marginal)),
        ("LEO-LEO", Some((Improbable, Critical)), (Remote, Marginal)),
        ("LEO-GEO", Some((Improbable, Marginal)), (Remote, Marginal)),
        ("GEO-Ground", Some((Improbable, Marginal)), (Frequent, Marginal)),
    ];
    rows.iter()
        .flat_map(|(name, in_fov, out)| {
            [
                RiskAssessment {
                    scenario: name.to_string(),
                    attack_type: InFov,
                    likelihood: in_fov.map(|x| x.0),
                    impact: in_fov.map(|x| x.1),
                },
                RiskAssessment {
                    scenario: name.to_string(),
                    attack_type: OutOfFov,
                    likelihood: Some(out.0),
                    impact: Some(out.1),
                },
            ]
        })
        .collect()
}
