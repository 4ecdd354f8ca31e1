//! No formula of the full language is pinned down by finitely many examples:
//! given a fitting `φ`, build a fitting `φ′` that differs from it.

use serde::Serialize;

use super::tableau::{sat_k, satisfiable};
use crate::characterize::fits;
use crate::error::{Error, Result};
use crate::formula::{height_formula, Formula, HeightVariant, PropSignature};
use crate::kripke::{modelcheck, PointedModel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpoilerCase {
    /// `φ` forces bounded height; `φ′ = φ ∨ height_n`.
    Bounded,
    /// `φ` has models of arbitrary height; `φ′ = φ ∧ ¬height_n`.
    Unbounded,
}

#[derive(Clone, Debug)]
pub struct Spoiler {
    pub formula: Formula,
    pub case: SpoilerCase,
    pub n: usize,
    /// A model on which `φ` and `φ′` disagree.
    pub witness: PointedModel,
}

/// If `φ ∧ ◇ᵈ⁺¹⊤` is unsatisfiable (`d` the modal depth) then `φ ⊨ □ᵈ⁺¹⊥`.
/// Otherwise `φ` has models of every height `≥ d + 1`: the truth of `φ` at
/// the root only depends on the first `d` levels, so a path may be hung
/// below any state at depth `d + 1`.
pub fn spoiler_full_language(
    positives: &[PointedModel],
    negatives: &[PointedModel],
    phi: &Formula,
    sig: &PropSignature,
) -> Result<Spoiler> {
    if let Some(m) = fits(phi, positives, negatives)? {
        return Err(Error::NotAnExample(format!("{phi} misfits {:?} example {}", m.polarity, m.index)));
    }
    let d = phi.modal_depth();
    let largest = positives.iter().chain(negatives).map(PointedModel::len).max().unwrap_or(0);
    let deep = Formula::and([phi.clone(), Formula::dia_n(d + 1, Formula::Top)]);
    let (formula, case, n, witness) = if !satisfiable(&deep, sig)? {
        // Every negative has fewer than `n` states, hence height below `n`
        // or infinite, so `height_n` fails there.
        let n = largest.max(d + 1) + 1;
        let h = height_formula(n, HeightVariant::Standard);
        let formula = if *phi == Formula::Bot { h } else { Formula::or([phi.clone(), h]) };
        (formula, SpoilerCase::Bounded, n, PointedModel::path(sig, n))
    } else {
        // Positives likewise never have height exactly `n`.
        let n = largest.max(d) + 1;
        let not_h = height_formula(n, HeightVariant::Negated);
        let formula = if *phi == Formula::Top { not_h } else { Formula::and([phi.clone(), not_h]) };
        let target = Formula::and([phi.clone(), height_formula(n, HeightVariant::Standard)]);
        let witness =
            sat_k(&target, sig)?.ok_or_else(|| Error::Internal(format!("{phi} has no model of height {n}")))?;
        (formula, SpoilerCase::Unbounded, n, witness)
    };
    if fits(&formula, positives, negatives)?.is_some() {
        return Err(Error::Internal(format!("spoiler {formula} does not fit")));
    }
    if modelcheck(phi, &witness)? == modelcheck(&formula, &witness)? {
        return Err(Error::Internal(format!("witness does not separate {phi} and {formula}")));
    }
    Ok(Spoiler { formula, case, n, witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;
    use crate::kripke::PropSet;
    use crate::oracle::equivalent;

    fn sig() -> PropSignature {
        PropSignature::new(["p"]).unwrap()
    }

    #[test]
    fn bottom_with_a_two_state_negative() {
        let sig = sig();
        let neg = PointedModel::from_labels(sig.clone(), vec![PropSet::EMPTY; 2], [(0, 1)], 0).unwrap();
        let s = spoiler_full_language(&[], &[neg], &Formula::Bot, &sig).unwrap();
        assert_eq!(s.case, SpoilerCase::Bounded);
        assert_eq!(s.n, 3);
        assert_eq!(s.formula, height_formula(3, HeightVariant::Standard));
        assert!(equivalent(&Formula::Bot, &s.formula, &sig).unwrap().is_some());
    }

    #[test]
    fn top_with_the_empty_loop() {
        let sig = sig();
        let s = spoiler_full_language(&[PointedModel::empty_loop(&sig)], &[], &Formula::Top, &sig).unwrap();
        assert_eq!(s.case, SpoilerCase::Unbounded);
        assert_eq!(s.formula.to_string(), "<><><>true | [][]<>true");
        assert!(!modelcheck(&s.formula, &s.witness).unwrap());
    }

    #[test]
    fn rejects_a_misfit() {
        let sig = sig();
        let phi = parse_formula("p", &sig).unwrap();
        let err = spoiler_full_language(&[PointedModel::empty_loop(&sig)], &[], &phi, &sig);
        assert!(matches!(err, Err(Error::NotAnExample(_))));
    }
}
