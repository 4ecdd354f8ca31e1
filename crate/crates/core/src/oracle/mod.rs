//! Independent checks: a tableau for K, bounded enumerators, and verifiers
//! for the properties the example construction is meant to have.

mod enumerate;
mod fixtures;
mod spoiler;
mod tableau;
mod treesearch;
mod verify;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

pub use enumerate::{
    enumerate_formulas, enumerate_models, for_each_model, FormulaArena, TruthTable, Universe, DEFAULT_MAX_FORMULAS,
    MAX_ENUMERATED_STATES,
};
pub use fixtures::{coproduct_fixtures, fixture_checks, CoproductFixtures, FixtureCheck};
pub use spoiler::{spoiler_full_language, Spoiler, SpoilerCase};
pub use tableau::{entails, equivalent, sat_k, satisfiable};
pub use treesearch::tree_search_sat;
pub use verify::{
    verify_duality, verify_preservation, verify_unique, verify_unique_in, DualityBounds, PreservationBounds,
    UniqueBounds,
};

use crate::kripke::{ModelJson, PointedModel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Counterexample {
    pub reason: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub formula: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelJson>,
}

impl Counterexample {
    pub fn formula(reason: impl Into<String>, formula: impl ToString) -> Self {
        Counterexample { reason: reason.into(), formula: Some(formula.to_string()), model: None }
    }

    pub fn model(reason: impl Into<String>, model: &PointedModel) -> Self {
        Counterexample { reason: reason.into(), formula: None, model: Some(ModelJson::from(model)) }
    }

    pub fn with_model(mut self, model: &PointedModel) -> Self {
        self.model = Some(ModelJson::from(model));
        self
    }
}

/// Outcome of a verifier. Statistics are counts only, so a fixed seed and
/// configuration reproduce the report byte for byte.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub verdict: Verdict,
    pub counterexamples: Vec<Counterexample>,
    pub stats: BTreeMap<String, u64>,
}

impl VerificationReport {
    pub fn new(counterexamples: Vec<Counterexample>, stats: BTreeMap<String, u64>) -> Self {
        let verdict = if counterexamples.is_empty() { Verdict::Pass } else { Verdict::Fail };
        VerificationReport { verdict, counterexamples, stats }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports are serialisable")
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        writeln!(f, "verdict: {verdict}")?;
        for (k, v) in &self.stats {
            writeln!(f, "  {k}: {v}")?;
        }
        for c in &self.counterexamples {
            write!(f, "counterexample: {}", c.reason)?;
            if let Some(phi) = &c.formula {
                write!(f, " [{phi}]")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
