//! Four small models showing that two pointed models need not have a least
//! upper bound in the weak simulation preorder.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::formula::{Formula, PropSignature};
use crate::kripke::{modelcheck, PointedModel, PropSet};
use crate::simulation::weak_simulates;

#[derive(Clone, Debug)]
pub struct CoproductFixtures {
    pub a: PointedModel,
    pub b: PointedModel,
    pub c: PointedModel,
    pub c_prime: PointedModel,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixtureCheck {
    pub description: String,
    pub holds: bool,
}

/// Root with two children, each leading to a reflexive blank state.
/// `None` for the right child makes it reflexive itself.
fn two_armed(sig: &PropSignature, left: PropSet, right: Option<PropSet>) -> Result<PointedModel> {
    match right {
        Some(right) => PointedModel::from_labels(
            sig.clone(),
            vec![PropSet::EMPTY, left, right, PropSet::EMPTY, PropSet::EMPTY],
            [(0, 1), (0, 2), (1, 3), (2, 4), (3, 3), (4, 4)],
            0,
        ),
        None => PointedModel::from_labels(
            sig.clone(),
            vec![PropSet::EMPTY, left, PropSet::EMPTY, PropSet::EMPTY],
            [(0, 1), (0, 2), (1, 3), (2, 2), (3, 3)],
            0,
        ),
    }
}

pub fn coproduct_fixtures(sig: &PropSignature) -> Result<CoproductFixtures> {
    for p in ["p", "q", "r"] {
        if !sig.contains(p) {
            return Err(Error::InvalidSignature(format!("the fixtures need `{p}` in the signature")));
        }
    }
    let set = |names: &[&str]| PropSet::from_names(sig, names.iter().copied());
    Ok(CoproductFixtures {
        a: two_armed(sig, set(&["p"])?, Some(set(&["q"])?))?,
        b: two_armed(sig, set(&["r"])?, None)?,
        c: two_armed(sig, set(&["p", "r"])?, Some(set(&["q"])?))?,
        c_prime: two_armed(sig, set(&["p"])?, Some(set(&["q", "r"])?))?,
    })
}

/// The six model-checking facts and four weak simulations the argument
/// relies on, each with whether it holds.
pub fn fixture_checks(fx: &CoproductFixtures) -> Result<Vec<FixtureCheck>> {
    let p = || Formula::atom("p");
    let q = || Formula::atom("q");
    let r = || Formula::atom("r");
    let box_pq = Formula::boxed(Formula::or([p(), q()]));
    let both = Formula::and([box_pq.clone(), Formula::dia(r())]);
    let facts: [(&str, &PointedModel, Formula, bool); 6] = [
        ("A |= [](p | q)", &fx.a, box_pq, true),
        ("B |= <>r", &fx.b, Formula::dia(r()), true),
        ("C |/= <>(q & r)", &fx.c, Formula::dia(Formula::and([q(), r()])), false),
        ("C' |/= <>(p & r)", &fx.c_prime, Formula::dia(Formula::and([p(), r()])), false),
        ("C |= [](p | q) & <>r", &fx.c, both.clone(), true),
        ("C' |= [](p | q) & <>r", &fx.c_prime, both, true),
    ];
    let mut out = Vec::new();
    for (description, m, phi, expected) in facts {
        out.push(FixtureCheck { description: description.into(), holds: modelcheck(&phi, m)? == expected });
    }
    let sims = [
        ("A -> C", &fx.a, &fx.c),
        ("B -> C", &fx.b, &fx.c),
        ("A -> C'", &fx.a, &fx.c_prime),
        ("B -> C'", &fx.b, &fx.c_prime),
    ];
    for (description, m, n) in sims {
        out.push(FixtureCheck { description: description.into(), holds: weak_simulates(m, n)? });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_checks_hold() {
        let sig = PropSignature::new(["p", "q", "r"]).unwrap();
        let fx = coproduct_fixtures(&sig).unwrap();
        assert_eq!((fx.a.len(), fx.b.len()), (5, 4));
        let checks = fixture_checks(&fx).unwrap();
        assert_eq!(checks.len(), 10);
        for c in checks {
            assert!(c.holds, "{}", c.description);
        }
    }

    #[test]
    fn needs_three_props() {
        let sig = PropSignature::new(["p", "q"]).unwrap();
        assert!(matches!(coproduct_fixtures(&sig), Err(Error::InvalidSignature(_))));
    }
}
