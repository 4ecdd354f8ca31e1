use super::PointedModel;
use crate::error::{Error, Result};
use crate::formula::Formula;

/// Truth value of `phi` at every state of `m`, computed bottom-up once per
/// subformula occurrence.
pub fn truth_set(phi: &Formula, m: &PointedModel) -> Result<Vec<bool>> {
    let n = m.len();
    Ok(match phi {
        Formula::Top => vec![true; n],
        Formula::Bot => vec![false; n],
        Formula::Atom(p) | Formula::NegAtom(p) => {
            let i = m.signature().index_of(p).ok_or_else(|| {
                Error::SignatureMismatch(format!("`{p}` is not in the model signature {}", m.signature()))
            })?;
            let positive = matches!(phi, Formula::Atom(_));
            (0..n).map(|s| m.label(s).contains(i) == positive).collect()
        }
        Formula::And(cs) => {
            let mut acc = vec![true; n];
            for c in cs {
                let t = truth_set(c, m)?;
                acc.iter_mut().zip(t).for_each(|(a, b)| *a &= b);
            }
            acc
        }
        Formula::Or(cs) => {
            let mut acc = vec![false; n];
            for c in cs {
                let t = truth_set(c, m)?;
                acc.iter_mut().zip(t).for_each(|(a, b)| *a |= b);
            }
            acc
        }
        Formula::Dia(c) => {
            let t = truth_set(c, m)?;
            (0..n).map(|s| m.successors(s).iter().any(|&u| t[u])).collect()
        }
        Formula::Box(c) => {
            let t = truth_set(c, m)?;
            (0..n).map(|s| m.successors(s).iter().all(|&u| t[u])).collect()
        }
    })
}

/// `M, s ⊨ φ` at the distinguished state.
pub fn modelcheck(phi: &Formula, m: &PointedModel) -> Result<bool> {
    Ok(truth_set(phi, m)?[m.point()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{height_formula, parse_formula, HeightVariant, PropSignature};
    use crate::kripke::PropSet;

    #[test]
    fn loopstates() {
        let sig = PropSignature::new(["p", "q"]).unwrap();
        let full = PointedModel::full_loop(&sig);
        let empty = PointedModel::empty_loop(&sig);
        for text in ["[]<>(p & q)", "p", "<>[]q | p", "[][]p & <>q"] {
            let phi = parse_formula(text, &sig).unwrap();
            assert!(modelcheck(&phi, &full).unwrap());
            assert!(!modelcheck(&phi, &empty).unwrap());
        }
    }

    #[test]
    fn atoms_at_point() {
        let sig = PropSignature::new(["p"]).unwrap();
        let m = PointedModel::from_labels(sig.clone(), vec![PropSet(1), PropSet(0)], [(0, 1)], 0).unwrap();
        let p = parse_formula("p", &sig).unwrap();
        assert!(modelcheck(&p, &m).unwrap());
        assert!(!modelcheck(&p, &m.with_point(1).unwrap()).unwrap());
        assert!(modelcheck(&parse_formula("<>~p", &sig).unwrap(), &m).unwrap());
    }

    #[test]
    fn height_formula_on_paths() {
        let sig = PropSignature::empty();
        let path2 = PointedModel::path(&sig, 2);
        assert!(modelcheck(&height_formula(2, HeightVariant::Standard), &path2).unwrap());
        assert!(!modelcheck(&height_formula(1, HeightVariant::Standard), &path2).unwrap());
        let dead = PointedModel::path(&sig, 0);
        assert!(modelcheck(&height_formula(0, HeightVariant::Standard), &dead).unwrap());
    }

    #[test]
    fn signature_mismatch() {
        let sig = PropSignature::new(["p"]).unwrap();
        let other = PropSignature::new(["q"]).unwrap();
        let phi = parse_formula("q", &other).unwrap();
        assert!(matches!(modelcheck(&phi, &PointedModel::empty_loop(&sig)), Err(Error::SignatureMismatch(_))));
    }
}
