//! Fine normal form for formulas over `□, ◇, ∧, ∨`.
//!
//! A basic normal form is `π ∧ ◇φ₁ ∧ … ∧ ◇φₙ ∧ □(ψ₁ ∨ … ∨ ψₘ)` with every
//! `φᵢ, ψⱼ` again basic; a normal form is a non-empty disjunction of them.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::formula::Formula;

pub const DEFAULT_MAX_DISJUNCTS: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bnf {
    atoms: BTreeSet<String>,
    diamonds: BTreeSet<Bnf>,
    boxed: Option<BTreeSet<Bnf>>,
    level: usize,
}

/// Shape of a basic normal form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Case {
    /// Atoms only.
    Atoms,
    /// Atoms and diamonds.
    Diamonds,
    /// Atoms and a box.
    Box,
    /// Atoms, diamonds and a box.
    Mixed,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::Atoms => "i",
            Case::Diamonds => "ii",
            Case::Box => "iii",
            Case::Mixed => "iv",
        })
    }
}

impl Bnf {
    pub fn new(atoms: BTreeSet<String>, diamonds: BTreeSet<Bnf>, boxed: Option<BTreeSet<Bnf>>) -> Result<Self> {
        if atoms.is_empty() && diamonds.is_empty() && boxed.is_none() {
            return Err(Error::InvalidNormalForm("empty basic normal form".into()));
        }
        if boxed.as_ref().is_some_and(BTreeSet::is_empty) {
            return Err(Error::InvalidNormalForm("box with an empty disjunction".into()));
        }
        let children = diamonds.iter().chain(boxed.iter().flatten());
        let level = children.map(|c| c.level + 1).max().unwrap_or(0);
        Ok(Bnf { atoms, diamonds, boxed, level })
    }

    pub fn atom(p: impl Into<String>) -> Self {
        Bnf { atoms: BTreeSet::from([p.into()]), diamonds: BTreeSet::new(), boxed: None, level: 0 }
    }

    pub fn atoms(&self) -> &BTreeSet<String> {
        &self.atoms
    }

    pub fn diamonds(&self) -> &BTreeSet<Bnf> {
        &self.diamonds
    }

    pub fn boxed(&self) -> Option<&BTreeSet<Bnf>> {
        self.boxed.as_ref()
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn case(&self) -> Case {
        match (self.diamonds.is_empty(), self.boxed.is_some()) {
            (true, false) => Case::Atoms,
            (false, false) => Case::Diamonds,
            (true, true) => Case::Box,
            (false, true) => Case::Mixed,
        }
    }

    pub fn to_formula(&self) -> Formula {
        let atoms = self.atoms.iter().map(|p| Formula::atom(p.clone()));
        let dias = self.diamonds.iter().map(|d| Formula::dia(d.to_formula()));
        let boxed = self.boxed.iter().map(|b| Formula::boxed(Formula::or(b.iter().map(Bnf::to_formula))));
        Formula::and(atoms.chain(dias).chain(boxed))
    }

    /// The conjunction of two basic normal forms, again basic: atoms and
    /// diamonds are united, boxes merged by `□α ∧ □β ≡ □(α ∧ β)` with the
    /// inner conjunction distributed.
    pub fn conjoin(&self, other: &Bnf, guard: usize) -> Result<Bnf> {
        let atoms = self.atoms.union(&other.atoms).cloned().collect();
        let diamonds = self.diamonds.union(&other.diamonds).cloned().collect();
        let boxed = match (&self.boxed, &other.boxed) {
            (None, None) => None,
            (Some(b), None) | (None, Some(b)) => Some(b.clone()),
            (Some(a), Some(b)) => Some(product(a, b, guard)?),
        };
        Bnf::new(atoms, diamonds, boxed)
    }
}

fn product(a: &BTreeSet<Bnf>, b: &BTreeSet<Bnf>, guard: usize) -> Result<BTreeSet<Bnf>> {
    if a.len().saturating_mul(b.len()) > guard {
        return Err(Error::GuardExceeded(format!(
            "distributing {} × {} disjuncts exceeds the cap of {guard}",
            a.len(),
            b.len()
        )));
    }
    let mut out = BTreeSet::new();
    for x in a {
        for y in b {
            out.insert(x.conjoin(y, guard)?);
        }
    }
    Ok(out)
}

/// Pulls the formula for `b` back into the formula AST.
pub fn bnf_to_formula(b: &Bnf) -> Formula {
    b.to_formula()
}

pub fn classify_bnf(b: &Bnf) -> Case {
    b.case()
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NormalForm {
    disjuncts: BTreeSet<Bnf>,
    level: usize,
}

impl NormalForm {
    pub fn new(disjuncts: BTreeSet<Bnf>) -> Result<Self> {
        if disjuncts.is_empty() {
            return Err(Error::InvalidNormalForm("empty normal form".into()));
        }
        let level = disjuncts.iter().map(Bnf::level).max().unwrap_or(0);
        Ok(NormalForm { disjuncts, level })
    }

    pub fn disjuncts(&self) -> &BTreeSet<Bnf> {
        &self.disjuncts
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn to_formula(&self) -> Formula {
        Formula::or(self.disjuncts.iter().map(Bnf::to_formula))
    }
}

/// One disjunct per line.
impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.disjuncts.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{}", d.to_formula())?;
        }
        Ok(())
    }
}

pub fn to_normal_form(phi: &Formula) -> Result<NormalForm> {
    to_normal_form_with(phi, DEFAULT_MAX_DISJUNCTS)
}

/// Innermost first: children are normalised before their parent is
/// assembled. Aborts once any intermediate disjunction exceeds `guard`.
pub fn to_normal_form_with(phi: &Formula, guard: usize) -> Result<NormalForm> {
    NormalForm::new(disjuncts(phi, guard)?)
}

fn disjuncts(phi: &Formula, guard: usize) -> Result<BTreeSet<Bnf>> {
    Ok(match phi {
        Formula::Atom(p) => BTreeSet::from([Bnf::atom(p.clone())]),
        Formula::Top | Formula::Bot | Formula::NegAtom(_) => {
            return Err(Error::NotInFragment(format!("`{phi}` has no Fine normal form; only □, ◇, ∧, ∨ over atoms")))
        }
        Formula::Or(cs) => {
            let mut out = BTreeSet::new();
            for c in cs {
                out.extend(disjuncts(c, guard)?);
                check_guard(out.len(), guard)?;
            }
            out
        }
        Formula::And(cs) => {
            let mut acc: Option<BTreeSet<Bnf>> = None;
            for c in cs {
                let next = disjuncts(c, guard)?;
                acc = Some(match acc {
                    None => next,
                    Some(prev) => {
                        check_guard(prev.len().saturating_mul(next.len()), guard)?;
                        let mut out = BTreeSet::new();
                        for a in &prev {
                            for b in &next {
                                out.insert(a.conjoin(b, guard)?);
                            }
                        }
                        out
                    }
                });
            }
            acc.expect("conjunctions have at least two children")
        }
        Formula::Dia(c) => disjuncts(c, guard)?
            .into_iter()
            .map(|d| Bnf::new(BTreeSet::new(), BTreeSet::from([d]), None))
            .collect::<Result<_>>()?,
        Formula::Box(c) => BTreeSet::from([Bnf::new(BTreeSet::new(), BTreeSet::new(), Some(disjuncts(c, guard)?))?]),
    })
}

fn check_guard(n: usize, guard: usize) -> Result<()> {
    if n > guard {
        return Err(Error::GuardExceeded(format!("{n} disjuncts exceed the cap of {guard}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse_formula, PropSignature};

    fn nf(text: &str) -> NormalForm {
        let sig = PropSignature::new(["p", "q", "r"]).unwrap();
        to_normal_form(&parse_formula(text, &sig).unwrap()).unwrap()
    }

    fn rendered(text: &str) -> Vec<String> {
        nf(text).disjuncts().iter().map(|d| d.to_formula().to_string()).collect()
    }

    #[test]
    fn propositional_dnf() {
        assert_eq!(rendered("p & (q | r)"), ["p & q", "p & r"]);
    }

    #[test]
    fn diamond_distributes_over_or() {
        assert_eq!(rendered("<>(p | q)"), ["<>p", "<>q"]);
    }

    #[test]
    fn boxes_merge() {
        assert_eq!(rendered("[]p & []q"), ["[](p & q)"]);
        assert_eq!(rendered("[](p | q) & []r"), ["[](p & r | q & r)"]);
    }

    #[test]
    fn cases() {
        let case_of = |t: &str| nf(t).disjuncts().iter().next().unwrap().case();
        assert_eq!(case_of("p & q"), Case::Atoms);
        assert_eq!(case_of("<>p"), Case::Diamonds);
        assert_eq!(case_of("p & [](q | r)"), Case::Box);
        assert_eq!(case_of("[](p | q) & <>p"), Case::Mixed);
    }

    #[test]
    fn levels_follow_depth() {
        for t in ["p", "<>p & q", "[]<>p | q", "<>(p & []<>q) | [][]r"] {
            let sig = PropSignature::new(["p", "q", "r"]).unwrap();
            let phi = parse_formula(t, &sig).unwrap();
            assert_eq!(to_normal_form(&phi).unwrap().level(), phi.modal_depth(), "{t}");
        }
    }

    #[test]
    fn rejects_constants_and_negation() {
        let sig = PropSignature::new(["p"]).unwrap();
        for t in ["true", "p & false", "~p", "<>~p"] {
            let phi = parse_formula(t, &sig).unwrap();
            assert!(matches!(to_normal_form(&phi), Err(Error::NotInFragment(_))), "{t}");
        }
    }

    #[test]
    fn guard_aborts() {
        let sig = PropSignature::new(["p", "q"]).unwrap();
        let phi = parse_formula("(p | q) & (p | <>q) & (q | <>p) & (<>p | <>q)", &sig).unwrap();
        assert!(matches!(to_normal_form_with(&phi, 4), Err(Error::GuardExceeded(_))));
        assert!(to_normal_form_with(&phi, 100).is_ok());
    }

    #[test]
    fn bnf_constructor_invariants() {
        assert!(Bnf::new(BTreeSet::new(), BTreeSet::new(), None).is_err());
        assert!(Bnf::new(BTreeSet::new(), BTreeSet::new(), Some(BTreeSet::new())).is_err());
        assert_eq!(Bnf::atom("p").to_formula(), Formula::atom("p"));
    }
}
