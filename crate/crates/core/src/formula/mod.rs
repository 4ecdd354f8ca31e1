//! Modal formulas in negation normal form.
//!
//! Negation only ever appears in front of a proposition ([`Formula::NegAtom`]).
//! Conjunctions and disjunctions are n-ary; the smart constructors
//! [`Formula::and`] and [`Formula::or`] flatten nested nodes of the same kind
//! so that every `And`/`Or` built through them has at least two children.

mod parse;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use parse::parse_formula;

/// Suffix appended to a negatively used proposition `q` to obtain the fresh
/// positive proposition standing for `¬q`.
pub const NEGATED_SUFFIX: &str = "_neg";

/// An ordered list of distinct proposition names.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct PropSignature {
    props: Arc<[String]>,
}

impl PropSignature {
    pub const MAX_PROPS: usize = 64;

    pub fn new<I, S>(props: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let props: Vec<String> = props.into_iter().map(Into::into).collect();
        if props.len() > Self::MAX_PROPS {
            return Err(Error::InvalidSignature(format!("at most {} propositions are supported", Self::MAX_PROPS)));
        }
        let mut seen = BTreeSet::new();
        for p in &props {
            if !is_identifier(p) {
                return Err(Error::InvalidSignature(format!("`{p}` is not a valid proposition name")));
            }
            if !seen.insert(p.as_str()) {
                return Err(Error::InvalidSignature(format!("duplicate proposition `{p}`")));
            }
        }
        Ok(PropSignature { props: props.into() })
    }

    pub fn empty() -> Self {
        PropSignature { props: Arc::from(Vec::new()) }
    }

    /// Parses a comma separated list such as `p,q,r`.
    pub fn parse_list(text: &str) -> Result<Self> {
        let names = text.split(',').map(str::trim).filter(|s| !s.is_empty());
        Self::new(names)
    }

    pub fn len(&self) -> usize {
        self.props.len()
    }

    pub fn is_empty(&self) -> bool {
        self.props.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.props.iter().position(|p| p == name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index_of(name).is_some()
    }

    pub fn name(&self, index: usize) -> &str {
        &self.props[index]
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.props.iter().map(String::as_str)
    }
}

impl TryFrom<Vec<String>> for PropSignature {
    type Error = Error;

    fn try_from(value: Vec<String>) -> Result<Self> {
        PropSignature::new(value)
    }
}

impl From<PropSignature> for Vec<String> {
    fn from(sig: PropSignature) -> Self {
        sig.props.to_vec()
    }
}

impl fmt::Display for PropSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.props.join(","))
    }
}

/// A signature split into `P` (only used positively) and `Q` (only used
/// under atomic negation).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniformSignature {
    positive: Vec<String>,
    negative: Vec<String>,
}

impl UniformSignature {
    pub fn new<I, J, S, T>(positive: I, negative: J) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        J: IntoIterator<Item = T>,
        S: Into<String>,
        T: Into<String>,
    {
        let positive: Vec<String> = positive.into_iter().map(Into::into).collect();
        let negative: Vec<String> = negative.into_iter().map(Into::into).collect();
        // Validates names and disjointness of P and Q in one go.
        PropSignature::new(positive.iter().chain(negative.iter()).cloned())?;
        let uniform = UniformSignature { positive, negative };
        PropSignature::new(uniform.flipped_names())?;
        Ok(uniform)
    }

    pub fn positive(&self) -> &[String] {
        &self.positive
    }

    pub fn negative(&self) -> &[String] {
        &self.negative
    }

    /// `P ∪ Q`, the signature the uniform formulas are written over.
    pub fn signature(&self) -> PropSignature {
        PropSignature::new(self.positive.iter().chain(self.negative.iter()).cloned())
            .expect("validated at construction")
    }

    /// `P ∪ Q^¬`, the signature of the positive reduction.
    pub fn flipped_signature(&self) -> PropSignature {
        PropSignature::new(self.flipped_names()).expect("validated at construction")
    }

    fn flipped_names(&self) -> Vec<String> {
        self.positive.iter().cloned().chain(self.negative.iter().map(|q| negated_name(q))).collect()
    }
}

/// Name of the fresh proposition standing for `¬q`.
pub fn negated_name(q: &str) -> String {
    format!("{q}{NEGATED_SUFFIX}")
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && s != "true" && s != "false"
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Connective {
    And,
    Or,
    Dia,
    Box,
    Top,
    Bot,
    NegAtom,
}

impl fmt::Display for Connective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Connective::And => "∧",
            Connective::Or => "∨",
            Connective::Dia => "◇",
            Connective::Box => "□",
            Connective::Top => "⊤",
            Connective::Bot => "⊥",
            Connective::NegAtom => "¬at",
        };
        f.write_str(s)
    }
}

/// A set of connectives `S`, naming the fragment `L_S`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Fragment(BTreeSet<Connective>);

impl Fragment {
    pub fn new<I: IntoIterator<Item = Connective>>(connectives: I) -> Self {
        Fragment(connectives.into_iter().collect())
    }

    /// `L{□,◇,∧,∨}`, the fragment the characterisation construction covers.
    pub fn positive_modal() -> Self {
        Fragment::new([Connective::And, Connective::Or, Connective::Dia, Connective::Box])
    }

    /// `L{□,◇,∧,∨,¬at}`, the ambient language of uniform formulas.
    pub fn uniform_modal() -> Self {
        let mut f = Fragment::positive_modal();
        f.0.insert(Connective::NegAtom);
        f
    }

    pub fn full() -> Self {
        Fragment::new([
            Connective::And,
            Connective::Or,
            Connective::Dia,
            Connective::Box,
            Connective::Top,
            Connective::Bot,
            Connective::NegAtom,
        ])
    }

    pub fn contains(&self, c: Connective) -> bool {
        self.0.contains(&c)
    }

    pub fn is_subset(&self, other: &Fragment) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = Connective> + '_ {
        self.0.iter().copied()
    }
}

impl fmt::Display for Fragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "L{{{}}}", parts.join(","))
    }
}

/// The literals and connectives a generator or enumerator may use.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grammar {
    pub literals: Vec<Formula>,
    pub and: bool,
    pub or: bool,
    pub dia: bool,
    pub boxed: bool,
}

impl Grammar {
    /// Formulas of `fragment` over `sig`. Atoms are always available; `¬p`,
    /// `⊤` and `⊥` only when the fragment has them.
    pub fn from_fragment(sig: &PropSignature, fragment: &Fragment) -> Self {
        let mut literals: Vec<Formula> = sig.iter().map(Formula::atom).collect();
        if fragment.contains(Connective::NegAtom) {
            literals.extend(sig.iter().map(Formula::neg_atom));
        }
        if fragment.contains(Connective::Top) {
            literals.push(Formula::Top);
        }
        if fragment.contains(Connective::Bot) {
            literals.push(Formula::Bot);
        }
        Grammar {
            literals,
            and: fragment.contains(Connective::And),
            or: fragment.contains(Connective::Or),
            dia: fragment.contains(Connective::Dia),
            boxed: fragment.contains(Connective::Box),
        }
    }

    pub fn positive(sig: &PropSignature) -> Self {
        Self::from_fragment(sig, &Fragment::positive_modal())
    }

    /// `P` atoms only positively, `Q` atoms only negated.
    pub fn uniform(sig: &UniformSignature) -> Self {
        let literals = sig
            .positive()
            .iter()
            .map(|p| Formula::atom(p.clone()))
            .chain(sig.negative().iter().map(|q| Formula::neg_atom(q.clone())))
            .collect();
        Grammar { literals, and: true, or: true, dia: true, boxed: true }
    }
}

/// A modal formula in negation normal form.
///
/// The derived `Ord` is the canonical ordering used for deduplication: by
/// node kind in declaration order, then by children.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Top,
    Bot,
    Atom(String),
    NegAtom(String),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Dia(Box<Formula>),
    Box(Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    pub fn neg_atom(name: impl Into<String>) -> Self {
        Formula::NegAtom(name.into())
    }

    /// Flattening conjunction. The empty conjunction is `⊤` and a singleton
    /// collapses to its only member.
    pub fn and<I: IntoIterator<Item = Formula>>(children: I) -> Self {
        let mut flat = Vec::new();
        for child in children {
            match child {
                Formula::And(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => Formula::Top,
            1 => flat.pop().unwrap(),
            _ => Formula::And(flat),
        }
    }

    /// Flattening disjunction. The empty disjunction is `⊥`.
    pub fn or<I: IntoIterator<Item = Formula>>(children: I) -> Self {
        let mut flat = Vec::new();
        for child in children {
            match child {
                Formula::Or(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => Formula::Bot,
            1 => flat.pop().unwrap(),
            _ => Formula::Or(flat),
        }
    }

    pub fn dia(child: Formula) -> Self {
        Formula::Dia(Box::new(child))
    }

    pub fn boxed(child: Formula) -> Self {
        Formula::Box(Box::new(child))
    }

    /// `◇ⁿ φ`
    pub fn dia_n(n: usize, child: Formula) -> Self {
        (0..n).fold(child, |acc, _| Formula::dia(acc))
    }

    /// `□ⁿ φ`
    pub fn box_n(n: usize, child: Formula) -> Self {
        (0..n).fold(child, |acc, _| Formula::boxed(acc))
    }

    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Top | Formula::Bot | Formula::Atom(_) | Formula::NegAtom(_) => 0,
            Formula::And(cs) | Formula::Or(cs) => cs.iter().map(Formula::modal_depth).max().unwrap_or(0),
            Formula::Dia(c) | Formula::Box(c) => 1 + c.modal_depth(),
        }
    }

    /// Number of atom, constant and modal-operator occurrences. Binary
    /// connectives are not counted, so `p ∧ ◇p` has size 3.
    pub fn size(&self) -> usize {
        match self {
            Formula::Top | Formula::Bot | Formula::Atom(_) | Formula::NegAtom(_) => 1,
            Formula::And(cs) | Formula::Or(cs) => cs.iter().map(Formula::size).sum(),
            Formula::Dia(c) | Formula::Box(c) => 1 + c.size(),
        }
    }

    /// The set of connectives occurring in the formula.
    pub fn fragment(&self) -> Fragment {
        let mut set = BTreeSet::new();
        self.collect_connectives(&mut set);
        Fragment(set)
    }

    fn collect_connectives(&self, set: &mut BTreeSet<Connective>) {
        match self {
            Formula::Top => {
                set.insert(Connective::Top);
            }
            Formula::Bot => {
                set.insert(Connective::Bot);
            }
            Formula::Atom(_) => {}
            Formula::NegAtom(_) => {
                set.insert(Connective::NegAtom);
            }
            Formula::And(cs) => {
                set.insert(Connective::And);
                cs.iter().for_each(|c| c.collect_connectives(set));
            }
            Formula::Or(cs) => {
                set.insert(Connective::Or);
                cs.iter().for_each(|c| c.collect_connectives(set));
            }
            Formula::Dia(c) => {
                set.insert(Connective::Dia);
                c.collect_connectives(set);
            }
            Formula::Box(c) => {
                set.insert(Connective::Box);
                c.collect_connectives(set);
            }
        }
    }

    pub fn in_fragment(&self, fragment: &Fragment) -> bool {
        self.fragment().is_subset(fragment)
    }

    pub fn is_positive_modal(&self) -> bool {
        self.in_fragment(&Fragment::positive_modal())
    }

    /// Names of all propositions occurring in the formula, positive or negated.
    pub fn props(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_props(&mut out);
        out
    }

    fn collect_props<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Formula::Atom(p) | Formula::NegAtom(p) => {
                out.insert(p.as_str());
            }
            Formula::And(cs) | Formula::Or(cs) => cs.iter().for_each(|c| c.collect_props(out)),
            Formula::Dia(c) | Formula::Box(c) => c.collect_props(out),
            Formula::Top | Formula::Bot => {}
        }
    }

    pub fn check_signature(&self, sig: &PropSignature) -> Result<()> {
        for p in self.props() {
            if !sig.contains(p) {
                return Err(Error::UnknownProp(p.to_string()));
            }
        }
        Ok(())
    }

    /// Sorts and deduplicates the children of every `And`/`Or` under the
    /// canonical ordering (commutativity, associativity, idempotence).
    pub fn canonical(&self) -> Formula {
        match self {
            Formula::And(cs) => {
                let set: BTreeSet<Formula> = flatten_canonical(cs, true);
                Formula::and(set)
            }
            Formula::Or(cs) => {
                let set: BTreeSet<Formula> = flatten_canonical(cs, false);
                Formula::or(set)
            }
            Formula::Dia(c) => Formula::dia(c.canonical()),
            Formula::Box(c) => Formula::boxed(c.canonical()),
            other => other.clone(),
        }
    }

    /// The dualisation `◁`: swaps `□/◇` and `∧/∨`, fixes atoms, and swaps
    /// `⊤/⊥`. Atomic negation is rejected.
    pub fn dual(&self) -> Result<Formula> {
        Ok(match self {
            Formula::Top => Formula::Bot,
            Formula::Bot => Formula::Top,
            Formula::Atom(p) => Formula::Atom(p.clone()),
            Formula::NegAtom(p) => return Err(Error::NotInFragment(format!("dual is undefined on negated atom ¬{p}"))),
            Formula::And(cs) => Formula::Or(cs.iter().map(Formula::dual).collect::<Result<_>>()?),
            Formula::Or(cs) => Formula::And(cs.iter().map(Formula::dual).collect::<Result<_>>()?),
            Formula::Dia(c) => Formula::boxed(c.dual()?),
            Formula::Box(c) => Formula::dia(c.dual()?),
        })
    }

    /// Substitutes `¬p` for every `p` and removes double negations.
    pub fn flip(&self) -> Formula {
        match self {
            Formula::Atom(p) => Formula::NegAtom(p.clone()),
            Formula::NegAtom(p) => Formula::Atom(p.clone()),
            Formula::And(cs) => Formula::And(cs.iter().map(Formula::flip).collect()),
            Formula::Or(cs) => Formula::Or(cs.iter().map(Formula::flip).collect()),
            Formula::Dia(c) => Formula::dia(c.flip()),
            Formula::Box(c) => Formula::boxed(c.flip()),
            Formula::Top => Formula::Top,
            Formula::Bot => Formula::Bot,
        }
    }

    /// Negation normal form of `¬φ`.
    pub fn negate(&self) -> Formula {
        match self {
            Formula::Top => Formula::Bot,
            Formula::Bot => Formula::Top,
            Formula::Atom(p) => Formula::NegAtom(p.clone()),
            Formula::NegAtom(p) => Formula::Atom(p.clone()),
            Formula::And(cs) => Formula::Or(cs.iter().map(Formula::negate).collect()),
            Formula::Or(cs) => Formula::And(cs.iter().map(Formula::negate).collect()),
            Formula::Dia(c) => Formula::boxed(c.negate()),
            Formula::Box(c) => Formula::dia(c.negate()),
        }
    }

    /// Replaces every `¬q` (q ∈ Q) by the fresh atom `q_neg`, turning a
    /// uniform formula over `[P;Q]` into a negation-free one over `P ∪ Q^¬`.
    pub fn uniform_flip(&self, sig: &UniformSignature) -> Result<Formula> {
        let is_p = |p: &str| sig.positive.iter().any(|x| x == p);
        let is_q = |q: &str| sig.negative.iter().any(|x| x == q);
        self.try_map_atoms(&mut |lit| match lit {
            Formula::Atom(p) if is_p(p) => Ok(Formula::Atom(p.clone())),
            Formula::NegAtom(q) if is_q(q) => Ok(Formula::Atom(negated_name(q))),
            Formula::Atom(q) if is_q(q) => {
                Err(Error::NotInFragment(format!("`{q}` belongs to Q and may only occur negated")))
            }
            Formula::NegAtom(p) if is_p(p) => {
                Err(Error::NotInFragment(format!("`{p}` belongs to P and may only occur unnegated")))
            }
            Formula::Atom(x) | Formula::NegAtom(x) => Err(Error::UnknownProp(x.clone())),
            _ => unreachable!("only literals are mapped"),
        })
    }

    /// Inverse of [`Formula::uniform_flip`].
    pub fn uniform_unflip(&self, sig: &UniformSignature) -> Result<Formula> {
        self.try_map_atoms(&mut |lit| match lit {
            Formula::Atom(x) => {
                if let Some(q) = sig.negative.iter().find(|q| negated_name(q) == *x) {
                    Ok(Formula::NegAtom(q.clone()))
                } else if sig.positive.contains(x) {
                    Ok(Formula::Atom(x.clone()))
                } else {
                    Err(Error::UnknownProp(x.clone()))
                }
            }
            Formula::NegAtom(x) => Err(Error::NotInFragment(format!("unexpected negated atom ¬{x}"))),
            _ => unreachable!("only literals are mapped"),
        })
    }

    fn try_map_atoms<F>(&self, f: &mut F) -> Result<Formula>
    where
        F: FnMut(&Formula) -> Result<Formula>,
    {
        Ok(match self {
            Formula::Atom(_) | Formula::NegAtom(_) => f(self)?,
            Formula::And(cs) => Formula::And(cs.iter().map(|c| c.try_map_atoms(f)).collect::<Result<_>>()?),
            Formula::Or(cs) => Formula::Or(cs.iter().map(|c| c.try_map_atoms(f)).collect::<Result<_>>()?),
            Formula::Dia(c) => Formula::dia(c.try_map_atoms(f)?),
            Formula::Box(c) => Formula::boxed(c.try_map_atoms(f)?),
            Formula::Top => Formula::Top,
            Formula::Bot => Formula::Bot,
        })
    }

    /// Direct subformulas.
    pub fn children(&self) -> &[Formula] {
        match self {
            Formula::And(cs) | Formula::Or(cs) => cs,
            Formula::Dia(c) | Formula::Box(c) => std::slice::from_ref(c.as_ref()),
            _ => &[],
        }
    }
}

fn flatten_canonical(children: &[Formula], conj: bool) -> BTreeSet<Formula> {
    let mut set = BTreeSet::new();
    for c in children {
        match (c.canonical(), conj) {
            (Formula::And(inner), true) => set.extend(inner),
            (Formula::Or(inner), false) => set.extend(inner),
            (other, _) => {
                set.insert(other);
            }
        }
    }
    set
}

/// Which rendering of the height formula to produce.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum HeightVariant {
    /// `□ⁿ⁺¹⊥ ∧ ◇ⁿ⊤`
    #[default]
    Standard,
    /// `□ⁿ⁺¹⊥ ∧ ◇ⁿ□⊥`, free of `⊤`.
    TopFree,
    /// `◇ⁿ⁺¹⊤ ∨ □ⁿ◇⊤`, the negation normal form of `¬height_n`, free of `⊥`.
    Negated,
}

/// The formula true exactly at pointed models of height `n`.
pub fn height_formula(n: usize, variant: HeightVariant) -> Formula {
    match variant {
        HeightVariant::Standard => Formula::and([Formula::box_n(n + 1, Formula::Bot), Formula::dia_n(n, Formula::Top)]),
        HeightVariant::TopFree => {
            Formula::and([Formula::box_n(n + 1, Formula::Bot), Formula::dia_n(n, Formula::boxed(Formula::Bot))])
        }
        HeightVariant::Negated => {
            Formula::or([Formula::dia_n(n + 1, Formula::Top), Formula::box_n(n, Formula::dia(Formula::Top))])
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(self, f)
    }
}

fn write_formula(phi: &Formula, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match phi {
        Formula::Top => f.write_str("true"),
        Formula::Bot => f.write_str("false"),
        Formula::Atom(p) => f.write_str(p),
        Formula::NegAtom(p) => write!(f, "~{p}"),
        Formula::And(cs) => {
            for (i, c) in cs.iter().enumerate() {
                if i > 0 {
                    f.write_str(" & ")?;
                }
                write_operand(c, matches!(c, Formula::And(_) | Formula::Or(_)), f)?;
            }
            Ok(())
        }
        Formula::Or(cs) => {
            for (i, c) in cs.iter().enumerate() {
                if i > 0 {
                    f.write_str(" | ")?;
                }
                write_operand(c, matches!(c, Formula::Or(_)), f)?;
            }
            Ok(())
        }
        Formula::Dia(c) => {
            f.write_str("<>")?;
            write_operand(c, matches!(**c, Formula::And(_) | Formula::Or(_)), f)
        }
        Formula::Box(c) => {
            f.write_str("[]")?;
            write_operand(c, matches!(**c, Formula::And(_) | Formula::Or(_)), f)
        }
    }
}

fn write_operand(phi: &Formula, parens: bool, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if parens {
        f.write_str("(")?;
        write_formula(phi, f)?;
        f.write_str(")")
    } else {
        write_formula(phi, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(names: &[&str]) -> PropSignature {
        PropSignature::new(names.iter().copied()).unwrap()
    }

    fn f(text: &str) -> Formula {
        parse_formula(text, &sig(&["p", "q", "r"])).unwrap()
    }

    #[test]
    fn depth_examples() {
        assert_eq!(f("p & q").modal_depth(), 0);
        assert_eq!(f("[](p | <>q)").modal_depth(), 2);
        assert_eq!(height_formula(3, HeightVariant::Standard).modal_depth(), 4);
    }

    #[test]
    fn dual_examples() {
        assert_eq!(f("[]p").dual().unwrap(), f("<>p"));
        assert_eq!(f("p & q").dual().unwrap(), f("p | q"));
        let phi = f("<>(p & q)");
        assert_eq!(phi.dual().unwrap().dual().unwrap(), phi);
        assert!(f("~p").dual().is_err());
    }

    #[test]
    fn flip_examples() {
        assert_eq!(f("p").flip(), f("~p"));
        let phi = f("[](p | ~q)");
        assert_eq!(phi.flip().flip(), phi);
        assert_eq!(f("[]p & <>q").flip(), f("[]~p & <>~q"));
    }

    #[test]
    fn uniform_flip_examples() {
        let u = UniformSignature::new(Vec::<String>::new(), ["q"]).unwrap();
        let phi = parse_formula("<>~q", &u.signature()).unwrap();
        assert_eq!(phi.uniform_flip(&u).unwrap(), Formula::dia(Formula::atom("q_neg")));

        let u = UniformSignature::new(["p"], ["q"]).unwrap();
        let phi = parse_formula("p & []~q", &u.signature()).unwrap();
        let flipped = phi.uniform_flip(&u).unwrap();
        assert_eq!(flipped, Formula::and([Formula::atom("p"), Formula::boxed(Formula::atom("q_neg"))]));
        assert_eq!(flipped.uniform_unflip(&u).unwrap(), phi);

        let bad = parse_formula("q", &u.signature()).unwrap();
        assert!(bad.uniform_flip(&u).is_err());
        let bad = parse_formula("~p", &u.signature()).unwrap();
        assert!(bad.uniform_flip(&u).is_err());

        let none = UniformSignature::new(["p", "q"], Vec::<String>::new()).unwrap();
        let phi = f("[](p | <>q)");
        assert_eq!(phi.uniform_flip(&none).unwrap(), phi);
    }

    #[test]
    fn uniform_signature_rejects_overlap() {
        assert!(UniformSignature::new(["p"], ["p"]).is_err());
        assert!(UniformSignature::new(["q_neg"], ["q"]).is_err());
    }

    #[test]
    fn height_formula_shapes() {
        assert_eq!(
            height_formula(0, HeightVariant::Standard),
            Formula::and([Formula::boxed(Formula::Bot), Formula::Top])
        );
        let neg1 = height_formula(1, HeightVariant::Negated);
        assert_eq!(neg1.to_string(), "<><>true | []<>true");
        assert_eq!(
            height_formula(1, HeightVariant::Standard).negate(),
            Formula::or([Formula::dia_n(2, Formula::Top), Formula::boxed(Formula::Bot)])
        );
        assert!(!height_formula(2, HeightVariant::TopFree).fragment().contains(Connective::Top));
        assert!(!height_formula(2, HeightVariant::Negated).fragment().contains(Connective::Bot));
    }

    #[test]
    fn size_counts_atoms_and_modalities() {
        assert_eq!(f("p").size(), 1);
        assert_eq!(f("<>p").size(), 2);
        assert_eq!(f("p & <>p").size(), 3);
    }

    #[test]
    fn canonical_dedups() {
        let a = f("(q & p) & p");
        let b = f("p & q");
        assert_eq!(a.canonical(), b.canonical());
        assert_eq!(f("p | p").canonical(), f("p"));
    }

    #[test]
    fn fragment_classification() {
        assert!(f("[](p | <>q)").is_positive_modal());
        assert!(!f("~p").is_positive_modal());
        assert!(!f("true").is_positive_modal());
        assert!(f("~p & []q").in_fragment(&Fragment::uniform_modal()));
    }

    #[test]
    fn signature_validation() {
        assert!(PropSignature::new(["p", "p"]).is_err());
        assert!(PropSignature::new(["1p"]).is_err());
        assert!(PropSignature::new(["true"]).is_err());
        assert_eq!(PropSignature::parse_list("p, q").unwrap(), sig(&["p", "q"]));
    }
}
