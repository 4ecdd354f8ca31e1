//! Example sets that characterise formulas over `□, ◇, ∧, ∨`.
//!
//! Positive examples are glued together from the normal form; negative
//! examples are the flipped positive examples of the dual formula.

use std::collections::HashMap;
use std::rc::Rc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::formula::{Formula, PropSignature, UniformSignature};
use crate::kripke::iso::{canonical_hash, isomorphic, IsoSet};
use crate::kripke::{modelcheck, PointedModel, PropSet};
use crate::normalform::{to_normal_form_with, Bnf, Case, NormalForm, DEFAULT_MAX_DISJUNCTS};

/// Size caps for the construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_disjuncts: usize,
    /// Cap on the examples produced for any single subformula.
    pub max_examples: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_disjuncts: DEFAULT_MAX_DISJUNCTS, max_examples: 100_000 }
    }
}

#[derive(Clone, Debug)]
pub struct Characterization {
    pub formula: Formula,
    pub signature: PropSignature,
    pub positives: Vec<PointedModel>,
    pub negatives: Vec<PointedModel>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Positive,
    Negative,
}

/// The first example a formula gets wrong.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Misfit {
    pub polarity: Polarity,
    pub index: usize,
}

/// `None` iff `phi` holds on every positive and fails on every negative.
pub fn fits(phi: &Formula, positives: &[PointedModel], negatives: &[PointedModel]) -> Result<Option<Misfit>> {
    for (index, e) in positives.iter().enumerate() {
        if !modelcheck(phi, e)? {
            return Ok(Some(Misfit { polarity: Polarity::Positive, index }));
        }
    }
    for (index, e) in negatives.iter().enumerate() {
        if modelcheck(phi, e)? {
            return Ok(Some(Misfit { polarity: Polarity::Negative, index }));
        }
    }
    Ok(None)
}

struct Builder<'s> {
    sig: &'s PropSignature,
    limits: Limits,
    cache: HashMap<Bnf, Rc<Vec<PointedModel>>>,
}

impl Builder<'_> {
    fn too_many(&self, what: &str, n: u128) -> Result<()> {
        if n > self.limits.max_examples as u128 {
            return Err(Error::GuardExceeded(format!(
                "{what} would produce {n} examples, over the cap of {}",
                self.limits.max_examples
            )));
        }
        Ok(())
    }

    fn glue(&self, root: PropSet, children: Vec<PointedModel>) -> Result<PointedModel> {
        // The successors form a set: isomorphic choices collapse.
        let children: IsoSet = children.into_iter().collect();
        PointedModel::glue(self.sig, root, children.as_slice())
    }

    fn union(&mut self, forms: impl IntoIterator<Item = Bnf>) -> Result<Vec<PointedModel>> {
        let mut set = IsoSet::new();
        for b in forms {
            set.extend(self.bnf(&b)?.iter().cloned());
        }
        Ok(set.into_vec())
    }

    fn bnf(&mut self, b: &Bnf) -> Result<Rc<Vec<PointedModel>>> {
        if let Some(hit) = self.cache.get(b) {
            return Ok(hit.clone());
        }
        let root = PropSet::from_names(self.sig, b.atoms().iter().map(String::as_str))?;
        let empty = PointedModel::empty_loop(self.sig);
        let mut out = IsoSet::new();
        match b.case() {
            Case::Atoms => {
                out.insert(self.glue(root, vec![empty])?);
            }
            Case::Diamonds => {
                let choices = b.diamonds().iter().map(|d| self.bnf(d)).collect::<Result<Vec<_>>>()?;
                self.too_many("a diamond product", choices.iter().map(|c| c.len() as u128).product())?;
                for pick in product(&choices) {
                    let mut children: Vec<PointedModel> = pick.into_iter().cloned().collect();
                    children.push(empty.clone());
                    out.insert(self.glue(root, children)?);
                }
            }
            Case::Box => {
                let pool = self.union(b.boxed().expect("box case").iter().cloned())?;
                self.too_many("a box", 1u128.checked_shl(pool.len() as u32).unwrap_or(u128::MAX))?;
                for subset in subsets(&pool) {
                    out.insert(self.glue(root, subset)?);
                }
            }
            Case::Mixed => {
                let boxed = b.boxed().expect("mixed case");
                let pool = self.union(boxed.iter().cloned())?;
                // Each diamond must land inside the box: its examples come from
                // the normal forms of φᵢ ∧ ψⱼ.
                let mut choices = Vec::new();
                for d in b.diamonds() {
                    let conj = boxed
                        .iter()
                        .map(|psi| d.conjoin(psi, self.limits.max_disjuncts))
                        .collect::<Result<Vec<_>>>()?;
                    choices.push(Rc::new(self.union(conj)?));
                }
                let subsets_count = 1u128.checked_shl(pool.len() as u32).unwrap_or(u128::MAX).saturating_sub(1);
                let picks: u128 = choices.iter().map(|c| c.len() as u128).product();
                self.too_many("a mixed basic form", picks.saturating_mul(subsets_count))?;
                for pick in product(&choices) {
                    for subset in subsets(&pool).filter(|s| !s.is_empty()) {
                        let mut children: Vec<PointedModel> = pick.iter().map(|&m| m.clone()).collect();
                        children.extend(subset);
                        out.insert(self.glue(root, children)?);
                    }
                }
            }
        }
        let out = Rc::new(out.into_vec());
        self.cache.insert(b.clone(), out.clone());
        Ok(out)
    }
}

/// Every way of picking one element from each list.
fn product<T>(lists: &[Rc<Vec<T>>]) -> Vec<Vec<&T>> {
    let mut acc: Vec<Vec<&T>> = vec![Vec::new()];
    for list in lists {
        acc = acc
            .into_iter()
            .flat_map(|prefix| {
                list.iter().map(move |x| {
                    let mut next = prefix.clone();
                    next.push(x);
                    next
                })
            })
            .collect();
    }
    acc
}

fn subsets(pool: &[PointedModel]) -> impl Iterator<Item = Vec<PointedModel>> + '_ {
    (0u64..1 << pool.len())
        .map(move |mask| pool.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, m)| m.clone()).collect())
}

/// Positive examples of a normal form, deduplicated up to isomorphism.
pub fn pos_examples(nf: &NormalForm, sig: &PropSignature, limits: Limits) -> Result<Vec<PointedModel>> {
    let mut builder = Builder { sig, limits, cache: HashMap::new() };
    let mut out = IsoSet::new();
    for b in nf.disjuncts() {
        out.extend(builder.bnf(b)?.iter().cloned());
        builder.too_many("the disjunction", out.len() as u128)?;
    }
    Ok(out.into_vec())
}

/// Deterministic output order: state count, then canonical hash, then the
/// raw structure.
fn sort_examples(models: &mut [PointedModel]) {
    models.sort_by_cached_key(|m| (m.len(), canonical_hash(m), m.labels().to_vec(), m.edges().collect::<Vec<_>>()));
}

/// `(E⁺_⊤, E⁻_⊥)`: the empty loop alone characterises `⊤` and the full
/// loop alone characterises `⊥`.
pub fn extend_top_bot(sig: &PropSignature) -> (PointedModel, PointedModel) {
    (PointedModel::empty_loop(sig), PointedModel::full_loop(sig))
}

pub fn characterize(phi: &Formula, sig: &PropSignature) -> Result<Characterization> {
    characterize_with(phi, sig, Limits::default())
}

pub fn characterize_with(phi: &Formula, sig: &PropSignature, limits: Limits) -> Result<Characterization> {
    phi.check_signature(sig)?;
    let (mut positives, mut negatives) = match phi {
        Formula::Top => (vec![extend_top_bot(sig).0], Vec::new()),
        Formula::Bot => (Vec::new(), vec![extend_top_bot(sig).1]),
        _ => {
            let pos = pos_examples(&to_normal_form_with(phi, limits.max_disjuncts)?, sig, limits)?;
            let dual = to_normal_form_with(&phi.dual()?, limits.max_disjuncts)?;
            let neg = pos_examples(&dual, sig, limits)?.iter().map(PointedModel::flip).collect();
            (pos, neg)
        }
    };
    sort_examples(&mut positives);
    sort_examples(&mut negatives);
    if let Some(bad) = fits(phi, &positives, &negatives)? {
        return Err(Error::Internal(format!(
            "constructed {:?} example {} does not fit `{phi}`",
            bad.polarity, bad.index
        )));
    }
    Ok(Characterization { formula: phi.clone(), signature: sig.clone(), positives, negatives })
}

/// Characterises a formula in which `P` atoms occur only positively and
/// `Q` atoms only negated, via the positive formula over `P ∪ Q^¬`.
pub fn characterize_uniform(phi: &Formula, usig: &UniformSignature) -> Result<Characterization> {
    characterize_uniform_with(phi, usig, Limits::default())
}

pub fn characterize_uniform_with(phi: &Formula, usig: &UniformSignature, limits: Limits) -> Result<Characterization> {
    let positive = phi.uniform_flip(usig)?;
    let c = characterize_with(&positive, &usig.flipped_signature(), limits)?;
    let sig = usig.signature();
    let np = usig.positive().len();
    let nq = usig.negative().len();
    // q^¬ holds exactly where q does not.
    let q_mask = (PropSet::full(np + nq).0) & !PropSet::full(np).0;
    let unflip = |m: &PointedModel| {
        let labels = m.labels().iter().map(|l| PropSet(l.0 ^ q_mask)).collect();
        m.relabel(sig.clone(), labels)
    };
    let positives = c.positives.iter().map(unflip).collect::<Result<Vec<_>>>()?;
    let negatives = c.negatives.iter().map(unflip).collect::<Result<Vec<_>>>()?;
    if let Some(bad) = fits(phi, &positives, &negatives)? {
        return Err(Error::Internal(format!("uniform {:?} example {} does not fit `{phi}`", bad.polarity, bad.index)));
    }
    Ok(Characterization { formula: phi.clone(), signature: sig, positives, negatives })
}

/// `tower(1, m) = m`, `tower(n + 1, m) = 2^tower(n, m)`; `None` on overflow.
pub fn tower(n: usize, m: u64) -> Option<u64> {
    if n == 0 {
        return None;
    }
    (1..n).try_fold(m, |acc, _| u32::try_from(acc).ok().and_then(|e| 1u64.checked_shl(e)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TowerRow {
    pub n: usize,
    pub examples: usize,
    pub tower: u64,
}

pub const MAX_TOWER_N: usize = 4;

/// `|E⁺_{□ⁿp}|` against `tower(n, 2)` for `n = 1..=max_n`.
pub fn tower_table(max_n: usize) -> Result<Vec<TowerRow>> {
    if max_n > MAX_TOWER_N {
        return Err(Error::GuardExceeded(format!("tower table is limited to n ≤ {MAX_TOWER_N}")));
    }
    let sig = PropSignature::new(["p"])?;
    let limits = Limits { max_examples: 1 << 16, ..Limits::default() };
    (1..=max_n)
        .map(|n| {
            let phi = Formula::box_n(n, Formula::atom("p"));
            let examples = pos_examples(&to_normal_form_with(&phi, limits.max_disjuncts)?, &sig, limits)?.len();
            Ok(TowerRow { n, examples, tower: tower(n, 2).expect("n ≤ 4") })
        })
        .collect()
}

/// The examples `E⁺_{□ᵏp}` paired with a formula refuted by that example
/// and by no other member of the list.
fn separators(level: usize, sig: &PropSignature) -> Result<Vec<(PointedModel, Formula)>> {
    let p = Formula::atom("p");
    if level == 0 {
        let e = PointedModel::glue(sig, PropSet::from_names(sig, ["p"])?, &[PointedModel::empty_loop(sig)])?;
        // The only level-0 example; ◇p fails there because its one
        // successor is the empty loop.
        return Ok(vec![(e, Formula::dia(p))]);
    }
    let below = separators(level - 1, sig)?;
    if below.len() >= 20 {
        return Err(Error::GuardExceeded(format!("separators at level {level} need 2^{} subsets", below.len())));
    }
    let mut out = Vec::with_capacity(1 << below.len());
    for mask in 0u64..1 << below.len() {
        let chosen: Vec<&(PointedModel, Formula)> =
            below.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, x)| x).collect();
        let model =
            PointedModel::glue(sig, PropSet::EMPTY, &chosen.iter().map(|(m, _)| m.clone()).collect::<Vec<_>>())?;
        let psi = if chosen.is_empty() {
            // Every other example has a successor satisfying □ᵏ⁻¹p.
            Formula::dia(Formula::box_n(level - 1, p.clone()))
        } else {
            Formula::or(
                chosen
                    .iter()
                    .map(|(_, psi)| Formula::boxed(psi.clone()))
                    .chain([Formula::dia(Formula::and(chosen.iter().map(|(_, psi)| psi.clone())))]),
            )
        };
        out.push((model, psi));
    }
    Ok(out)
}

/// For `target ∈ E⁺_{□ⁿ⁺¹p}`, a formula over `□, ◇, ∧, ∨` refuted by
/// `target` and satisfied by every other member of that set.
pub fn minimality_spoiler(target: &PointedModel, n: usize) -> Result<Formula> {
    let sig = target.signature();
    if !sig.contains("p") {
        return Err(Error::NotAnExample("the signature has no `p`".into()));
    }
    separators(n + 1, sig)?
        .into_iter()
        .find(|(m, _)| isomorphic(m, target))
        .map(|(_, psi)| psi)
        .ok_or_else(|| Error::NotAnExample(format!("the model is not a positive example of □^{}p", n + 1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;
    use crate::normalform::to_normal_form;

    fn sig() -> PropSignature {
        PropSignature::new(["p"]).unwrap()
    }

    fn pos(text: &str) -> Vec<PointedModel> {
        let s = sig();
        pos_examples(&to_normal_form(&parse_formula(text, &s).unwrap()).unwrap(), &s, Limits::default()).unwrap()
    }

    #[test]
    fn atom_example() {
        let s = sig();
        let expected = PointedModel::glue(&s, PropSet(1), &[PointedModel::empty_loop(&s)]).unwrap();
        let got = pos("p");
        assert_eq!(got.len(), 1);
        assert!(isomorphic(&got[0], &expected));
    }

    #[test]
    fn box_and_diamond_counts() {
        assert_eq!(pos("[]p").len(), 2);
        assert_eq!(pos("<>p").len(), 1);
        let s = sig();
        let ep = PointedModel::glue(&s, PropSet(1), &[PointedModel::empty_loop(&s)]).unwrap();
        let dia = PointedModel::glue(&s, PropSet(0), &[ep, PointedModel::empty_loop(&s)]).unwrap();
        assert!(isomorphic(&pos("<>p")[0], &dia));
    }

    #[test]
    fn characterize_p() {
        let s = sig();
        let c = characterize(&Formula::atom("p"), &s).unwrap();
        assert_eq!((c.positives.len(), c.negatives.len()), (1, 1));
        let neg = &c.negatives[0];
        assert_eq!(neg.label(neg.point()), PropSet(0));
        assert_eq!(neg.len(), 2);
        let child = neg.successors(neg.point())[0];
        assert_eq!(neg.label(child), PropSet(1));
        assert!(neg.has_edge(child, child));
    }

    #[test]
    fn fits_reports_polarity() {
        let s = PropSignature::new(["p", "q"]).unwrap();
        let e = PointedModel::glue(&s, PropSet(1), &[PointedModel::empty_loop(&s)]).unwrap();
        let phi = parse_formula("p & q", &s).unwrap();
        assert_eq!(fits(&phi, &[e], &[]).unwrap(), Some(Misfit { polarity: Polarity::Positive, index: 0 }));
        assert_eq!(fits(&phi, &[], &[]).unwrap(), None);
    }

    #[test]
    fn top_and_bottom() {
        let s = sig();
        let top = characterize(&Formula::Top, &s).unwrap();
        assert_eq!((top.positives.len(), top.negatives.len()), (1, 0));
        let bot = characterize(&Formula::Bot, &s).unwrap();
        assert_eq!((bot.positives.len(), bot.negatives.len()), (0, 1));
        assert!(characterize(&parse_formula("p & true", &s).unwrap(), &s).is_err());
    }

    #[test]
    fn uniform_negated_atom() {
        let usig = UniformSignature::new(Vec::<String>::new(), ["q"]).unwrap();
        let phi = Formula::neg_atom("q");
        let c = characterize_uniform(&phi, &usig).unwrap();
        for e in &c.positives {
            assert!(!e.label(e.point()).contains(0));
        }
        assert!(fits(&phi, &c.positives, &c.negatives).unwrap().is_none());
    }

    #[test]
    fn towers() {
        assert_eq!(tower(1, 2), Some(2));
        assert_eq!(tower(3, 2), Some(16));
        assert_eq!(tower(4, 2), Some(65536));
        assert_eq!(tower(5, 2), None);
        let rows = tower_table(3).unwrap();
        assert_eq!(
            rows.iter().map(|r| (r.n, r.examples, r.tower)).collect::<Vec<_>>(),
            [(1, 2, 2), (2, 4, 4), (3, 16, 16)]
        );
        assert!(tower_table(5).is_err());
    }

    #[test]
    fn level_one_spoilers() {
        let s = sig();
        let examples = pos("[]p");
        for target in &examples {
            let psi = minimality_spoiler(target, 0).unwrap();
            for other in &examples {
                assert_eq!(modelcheck(&psi, other).unwrap(), !isomorphic(other, target), "{psi}");
            }
        }
        let dead = PointedModel::glue(&s, PropSet(0), &[]).unwrap();
        assert_eq!(minimality_spoiler(&dead, 0).unwrap(), parse_formula("<>p", &s).unwrap());
        assert!(matches!(minimality_spoiler(&PointedModel::full_loop(&s), 0), Err(Error::NotAnExample(_))));
    }
}
