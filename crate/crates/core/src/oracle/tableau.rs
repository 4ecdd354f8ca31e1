//! Satisfiability in modal K by a tree tableau.
//!
//! A branch saturates conjunctions, splits on disjunctions, and closes on
//! `⊥` or a complementary literal pair. An open saturated branch opens one
//! successor per `◇ψ`, labelled `{ψ} ∪ {χ : □χ on the branch}`. Modal
//! depth strictly decreases along successors, so the search terminates and
//! any witness is a tree no deeper than the input formula.

use std::collections::HashMap;

use crate::error::Result;
use crate::formula::{Formula, PropSignature};
use crate::kripke::{PointedModel, PropSet};

#[derive(Clone, Debug)]
struct Tree {
    label: PropSet,
    children: Vec<Tree>,
}

#[derive(Clone)]
struct Branch<'f> {
    pos: u64,
    neg: u64,
    dias: Vec<&'f Formula>,
    boxes: Vec<&'f Formula>,
}

struct Solver<'f, 's> {
    sig: &'s PropSignature,
    memo: HashMap<Vec<&'f Formula>, Option<Tree>>,
}

impl<'f> Solver<'f, '_> {
    fn bit(&self, p: &str) -> u64 {
        1u64 << self.sig.index_of(p).expect("signature checked up front")
    }

    /// Is the set of formulas satisfiable at a single state?
    fn solve(&mut self, mut set: Vec<&'f Formula>) -> Option<Tree> {
        set.sort();
        set.dedup();
        if let Some(hit) = self.memo.get(&set) {
            return hit.clone();
        }
        let branch = Branch { pos: 0, neg: 0, dias: Vec::new(), boxes: Vec::new() };
        let out = self.expand(set.clone(), Vec::new(), branch);
        self.memo.insert(set, out.clone());
        out
    }

    fn expand(&mut self, mut todo: Vec<&'f Formula>, mut ors: Vec<&'f [Formula]>, mut br: Branch<'f>) -> Option<Tree> {
        // Deterministic work first, so clashes close branches before any split.
        while let Some(f) = todo.pop() {
            match f {
                Formula::Top => {}
                Formula::Bot => return None,
                Formula::Atom(p) => {
                    let b = self.bit(p);
                    if br.neg & b != 0 {
                        return None;
                    }
                    br.pos |= b;
                }
                Formula::NegAtom(p) => {
                    let b = self.bit(p);
                    if br.pos & b != 0 {
                        return None;
                    }
                    br.neg |= b;
                }
                Formula::And(cs) => todo.extend(cs),
                Formula::Or(cs) => ors.push(cs),
                Formula::Dia(c) => br.dias.push(c),
                Formula::Box(c) => br.boxes.push(c),
            }
        }
        // Drop disjunctions already satisfied by a literal on the branch.
        let pos = br.pos;
        let neg = br.neg;
        let satisfied = |cs: &[Formula]| {
            cs.iter().any(|c| match c {
                Formula::Top => true,
                Formula::Atom(p) => pos & self.bit(p) != 0,
                Formula::NegAtom(p) => neg & self.bit(p) != 0,
                _ => false,
            })
        };
        ors.retain(|cs| !satisfied(cs));
        if let Some(cs) = ors.pop() {
            for c in cs {
                if let Some(t) = self.expand(vec![c], ors.clone(), br.clone()) {
                    return Some(t);
                }
            }
            return None;
        }
        br.dias.sort();
        br.dias.dedup();
        let mut children = Vec::with_capacity(br.dias.len());
        for &d in &br.dias {
            let mut set = br.boxes.clone();
            set.push(d);
            children.push(self.solve(set)?);
        }
        Some(Tree { label: PropSet(br.pos), children })
    }
}

fn tree_model(sig: &PropSignature, tree: &Tree) -> PointedModel {
    let mut labels = Vec::new();
    let mut edges = Vec::new();
    let mut stack = vec![(tree, None)];
    while let Some((node, parent)) = stack.pop() {
        let id = labels.len();
        labels.push(node.label);
        if let Some(p) = parent {
            edges.push((p, id));
        }
        for c in node.children.iter().rev() {
            stack.push((c, Some(id)));
        }
    }
    let ids = (0..labels.len()).map(|i| format!("t{i}")).collect();
    PointedModel::new(sig.clone(), ids, labels, edges, 0).expect("tableau tree is well formed")
}

/// A finite tree model of `phi`, if it is satisfiable.
pub fn sat_k(phi: &Formula, sig: &PropSignature) -> Result<Option<PointedModel>> {
    phi.check_signature(sig)?;
    let mut solver = Solver { sig, memo: HashMap::new() };
    Ok(solver.solve(vec![phi]).map(|t| tree_model(sig, &t)))
}

pub fn satisfiable(phi: &Formula, sig: &PropSignature) -> Result<bool> {
    Ok(sat_k(phi, sig)?.is_some())
}

/// `phi ⊨ psi`, or a model of `phi ∧ ¬psi`.
pub fn entails(phi: &Formula, psi: &Formula, sig: &PropSignature) -> Result<Option<PointedModel>> {
    sat_k(&Formula::and([phi.clone(), psi.negate()]), sig)
}

/// `None` when equivalent, otherwise a pointed model on which exactly one
/// of the two holds.
pub fn equivalent(phi: &Formula, psi: &Formula, sig: &PropSignature) -> Result<Option<PointedModel>> {
    if let Some(m) = entails(phi, psi, sig)? {
        return Ok(Some(m));
    }
    entails(psi, phi, sig)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;
    use crate::kripke::modelcheck;

    fn sig() -> PropSignature {
        PropSignature::new(["p", "q"]).unwrap()
    }

    fn f(t: &str) -> Formula {
        parse_formula(t, &sig()).unwrap()
    }

    #[test]
    fn basic_verdicts() {
        assert!(!satisfiable(&Formula::Bot, &sig()).unwrap());
        assert!(!satisfiable(&f("[]false & <>true"), &sig()).unwrap());
        assert!(!satisfiable(&f("[]p & <>~p"), &sig()).unwrap());
        assert!(satisfiable(&f("<>p & <>~p"), &sig()).unwrap());
        assert!(!satisfiable(&f("(p | q) & ~p & ~q"), &sig()).unwrap());
    }

    #[test]
    fn witnesses_are_sound() {
        for t in ["<>p & <>~p & []q", "[]<>p & <>true", "(p | <>q) & ~p & []~q | <><>p"] {
            let phi = f(t);
            let m = sat_k(&phi, &sig()).unwrap().unwrap();
            assert!(modelcheck(&phi, &m).unwrap(), "{t}");
            assert!(m.height() <= crate::kripke::Height::Finite(phi.modal_depth()));
        }
    }

    #[test]
    fn equivalences() {
        let s = sig();
        assert!(equivalent(&f("<>(p | q)"), &f("<>p | <>q"), &s).unwrap().is_none());
        assert!(equivalent(&f("[]p & []q"), &f("[](p & q)"), &s).unwrap().is_none());
        let m = equivalent(&f("[](p | q)"), &f("[]p | []q"), &s).unwrap().unwrap();
        assert_ne!(modelcheck(&f("[](p | q)"), &m).unwrap(), modelcheck(&f("[]p | []q"), &m).unwrap());
    }
}
