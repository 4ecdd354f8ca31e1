use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::enumerate::{for_each_model, FormulaArena, Universe, DEFAULT_MAX_FORMULAS};
use super::tableau::equivalent;
use super::{Counterexample, VerificationReport};
use crate::characterize::Characterization;
use crate::error::Result;
use crate::formula::{Formula, Grammar, PropSignature};
use crate::kripke::{modelcheck, truth_set, PointedModel, PropSet};
use crate::random::{random_model_between, FormulaGen};
use crate::simulation::weak_simulates;

/// Counterexamples kept in a report; the stats still count all of them.
const MAX_REPORTED: usize = 10;

#[derive(Clone, Debug)]
pub struct UniqueBounds {
    pub grammar: Grammar,
    pub max_depth: usize,
    pub max_size: usize,
    pub max_formulas: usize,
}

impl UniqueBounds {
    pub fn new(grammar: Grammar, max_depth: usize, max_size: usize) -> Self {
        UniqueBounds { grammar, max_depth, max_size, max_formulas: DEFAULT_MAX_FORMULAS }
    }

    pub fn arena(&self) -> Result<FormulaArena> {
        FormulaArena::build(&self.grammar, self.max_depth, self.max_size, self.max_formulas)
    }
}

/// Every enumerated formula that fits the examples must be equivalent to
/// `phi`. Fitting is decided on all candidates at once with truth tables;
/// each fitting candidate then goes to the tableau.
pub fn verify_unique(phi: &Formula, c: &Characterization, bounds: &UniqueBounds) -> Result<VerificationReport> {
    verify_unique_in(phi, c, &bounds.arena()?)
}

/// [`verify_unique`] against a prebuilt candidate arena.
pub fn verify_unique_in(phi: &Formula, c: &Characterization, arena: &FormulaArena) -> Result<VerificationReport> {
    let sig = &c.signature;
    let universe = Universe::new(sig, c.positives.iter().chain(&c.negatives))?;
    let table = arena.evaluate(&universe);
    let (pos_points, neg_points) = universe.points().split_at(c.positives.len());
    let fitting: Vec<usize> = (0..arena.len())
        .filter(|&id| pos_points.iter().all(|&s| table.holds(id, s)) && neg_points.iter().all(|&s| !table.holds(id, s)))
        .collect();

    // Cheap refutations first: every model with at most two states.
    let probe_states = if sig.len() > 3 { 1 } else { 2 };
    let mut probes = Vec::new();
    for_each_model(sig, probe_states, |m| probes.push(m))?;
    let phi_on_probes: Vec<bool> = probes.iter().map(|m| modelcheck(phi, m)).collect::<Result<_>>()?;

    let violations: Vec<Counterexample> = fitting
        .par_iter()
        .map(|&id| -> Result<Option<Counterexample>> {
            let psi = arena.formula(id);
            let ps = truth_at_points(&psi, &probes)?;
            if let Some(i) = (0..probes.len()).find(|&i| ps[i] != phi_on_probes[i]) {
                return Ok(Some(
                    Counterexample::formula("fits the examples but is not equivalent", &psi).with_model(&probes[i]),
                ));
            }
            Ok(equivalent(phi, &psi, sig)?
                .map(|m| Counterexample::formula("fits the examples but is not equivalent", &psi).with_model(&m)))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    let stats = BTreeMap::from([
        ("candidates".to_string(), arena.len() as u64),
        ("fitting".to_string(), fitting.len() as u64),
        ("violations".to_string(), violations.len() as u64),
    ]);
    Ok(VerificationReport::new(violations.into_iter().take(MAX_REPORTED).collect(), stats))
}

fn truth_at_points(phi: &Formula, models: &[PointedModel]) -> Result<Vec<bool>> {
    models.iter().map(|m| Ok(truth_set(phi, m)?[m.point()])).collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DualityBounds {
    pub exhaustive_states: usize,
    pub samples: usize,
    pub sample_min_states: usize,
    pub sample_max_states: usize,
    pub density: f64,
    pub seed: u64,
}

impl Default for DualityBounds {
    fn default() -> Self {
        DualityBounds {
            exhaustive_states: 3,
            samples: 500,
            sample_min_states: 4,
            sample_max_states: 6,
            density: 0.5,
            seed: 0,
        }
    }
}

/// Every model must be weakly simulated by a positive example or weakly
/// simulate into a negative example, never both, and the first exactly
/// when the formula holds.
pub fn verify_duality(c: &Characterization, bounds: &DualityBounds) -> Result<VerificationReport> {
    let sig = &c.signature;
    let mut models = Vec::new();
    for_each_model(sig, bounds.exhaustive_states, |m| models.push(m))?;
    let exhaustive = models.len();
    let mut rng = ChaCha8Rng::seed_from_u64(bounds.seed);
    for _ in 0..bounds.samples {
        models.push(random_model_between(
            &mut rng,
            sig,
            bounds.sample_min_states,
            bounds.sample_max_states,
            bounds.density,
        ));
    }

    let outcomes: Vec<Option<Counterexample>> = models
        .par_iter()
        .map(|m| -> Result<Option<Counterexample>> {
            let mut up = false;
            for e in &c.positives {
                if weak_simulates(e, m)? {
                    up = true;
                    break;
                }
            }
            let mut down = false;
            for e in &c.negatives {
                if weak_simulates(m, e)? {
                    down = true;
                    break;
                }
            }
            let truth = modelcheck(&c.formula, m)?;
            let reason = match (up, down) {
                (true, true) => Some("model lies in both halves"),
                (false, false) => Some("model lies in neither half"),
                _ if up != truth => Some("half disagrees with the formula"),
                _ => None,
            };
            Ok(reason.map(|r| Counterexample::model(r, m)))
        })
        .collect::<Result<_>>()?;
    let failures: Vec<Counterexample> = outcomes.into_iter().flatten().collect();
    let stats = BTreeMap::from([
        ("exhaustive_models".to_string(), exhaustive as u64),
        ("sampled_models".to_string(), bounds.samples as u64),
        ("seed".to_string(), bounds.seed),
        ("violations".to_string(), failures.len() as u64),
    ]);
    Ok(VerificationReport::new(failures.into_iter().take(MAX_REPORTED).collect(), stats))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PreservationBounds {
    pub triples: usize,
    pub max_depth: usize,
    pub max_size: usize,
    pub min_states: usize,
    pub max_states: usize,
    pub density: f64,
    pub seed: u64,
}

impl Default for PreservationBounds {
    fn default() -> Self {
        PreservationBounds {
            triples: 1000,
            max_depth: 3,
            max_size: 8,
            min_states: 1,
            max_states: 4,
            density: 0.4,
            seed: 0,
        }
    }
}

/// Random triples `(m, m′, φ)` with `m` weakly simulated into `m′`: truth of
/// `φ` must carry over from `m` to `m′`.
pub fn verify_preservation(sig: &PropSignature, bounds: &PreservationBounds) -> Result<VerificationReport> {
    use rand::Rng;

    let mut rng = ChaCha8Rng::seed_from_u64(bounds.seed);
    let gen = FormulaGen::positive(sig, bounds.max_depth, bounds.max_size);
    let full = PropSet::full(sig.len()).0;
    let (mut found, mut rejected, mut premise_true) = (0usize, 0u64, 0u64);
    let mut failures = Vec::new();
    while found < bounds.triples {
        let m = random_model_between(&mut rng, sig, bounds.min_states, bounds.max_states, bounds.density);
        // Half the time an independent model, half the time `m` with
        // enlarged valuations, which the identity weakly simulates into.
        let m2 = if rng.gen_bool(0.5) {
            random_model_between(&mut rng, sig, bounds.min_states, bounds.max_states, bounds.density)
        } else {
            let labels = m.labels().iter().map(|l| PropSet(l.0 | (rng.gen::<u64>() & full))).collect();
            m.relabel(sig.clone(), labels)?
        };
        if !weak_simulates(&m, &m2)? {
            rejected += 1;
            continue;
        }
        found += 1;
        // Prefer a formula that holds at `m`, so the check has a premise.
        let mut phi = gen.sample(&mut rng);
        for _ in 0..20 {
            if modelcheck(&phi, &m)? {
                break;
            }
            phi = gen.sample(&mut rng);
        }
        let before = modelcheck(&phi, &m)?;
        premise_true += before as u64;
        if before && !modelcheck(&phi, &m2)? {
            failures.push(Counterexample::formula("truth lost along a weak simulation", &phi).with_model(&m));
        }
    }
    let stats = BTreeMap::from([
        ("triples".to_string(), found as u64),
        ("rejected_pairs".to_string(), rejected),
        ("seed".to_string(), bounds.seed),
        ("premise_true".to_string(), premise_true),
        ("violations".to_string(), failures.len() as u64),
    ]);
    Ok(VerificationReport::new(failures.into_iter().take(MAX_REPORTED).collect(), stats))
}
