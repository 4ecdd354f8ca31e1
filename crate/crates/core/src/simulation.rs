//! Bisimulation, n-bisimulation and weak simulation between pointed models.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kripke::{Loopstate, PointedModel};

/// A set of state pairs between two models.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation<'a> {
    left: &'a PointedModel,
    right: &'a PointedModel,
    pairs: BTreeSet<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationJson {
    pub pairs: Vec<(String, String)>,
}

impl<'a> Relation<'a> {
    pub fn new<I>(left: &'a PointedModel, right: &'a PointedModel, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let pairs: BTreeSet<_> = pairs.into_iter().collect();
        if let Some(&(a, b)) = pairs.iter().find(|&&(a, b)| a >= left.len() || b >= right.len()) {
            return Err(Error::InvalidRelation(format!("pair ({a}, {b}) out of range")));
        }
        Ok(Relation { left, right, pairs })
    }

    /// The diagonal relation on `m`.
    pub fn identity(m: &'a PointedModel) -> Self {
        Relation { left: m, right: m, pairs: (0..m.len()).map(|s| (s, s)).collect() }
    }

    /// `dom(left) × dom(right)`.
    pub fn full(left: &'a PointedModel, right: &'a PointedModel) -> Self {
        let pairs = (0..left.len()).flat_map(|a| (0..right.len()).map(move |b| (a, b))).collect();
        Relation { left, right, pairs }
    }

    pub fn left(&self) -> &'a PointedModel {
        self.left
    }

    pub fn right(&self) -> &'a PointedModel {
        self.right
    }

    pub fn pairs(&self) -> &BTreeSet<(usize, usize)> {
        &self.pairs
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.pairs.contains(&(a, b))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// `Z₁ ∘ Z₂`: first `self`, then `other`. The middle models must agree.
    pub fn compose(&self, other: &Relation<'a>) -> Result<Relation<'a>> {
        if self.right != other.left {
            return Err(Error::InvalidRelation("middle models of a composition differ".into()));
        }
        let mut by_middle = vec![Vec::new(); self.right.len()];
        for &(b, c) in &other.pairs {
            by_middle[b].push(c);
        }
        let pairs = self.pairs.iter().flat_map(|&(a, b)| by_middle[b].iter().map(move |&c| (a, c))).collect();
        Ok(Relation { left: self.left, right: other.right, pairs })
    }

    pub fn converse(&self) -> Relation<'a> {
        Relation { left: self.right, right: self.left, pairs: self.pairs.iter().map(|&(a, b)| (b, a)).collect() }
    }

    /// The same pairs between two other models with the same state sets,
    /// e.g. the flipped versions of the original models.
    pub fn rebind<'b>(&self, left: &'b PointedModel, right: &'b PointedModel) -> Result<Relation<'b>> {
        if left.len() != self.left.len() || right.len() != self.right.len() {
            return Err(Error::InvalidRelation("rebinding to models of a different size".into()));
        }
        Ok(Relation { left, right, pairs: self.pairs.clone() })
    }

    pub fn to_json(&self) -> RelationJson {
        RelationJson {
            pairs: self
                .pairs
                .iter()
                .map(|&(a, b)| (self.left.id(a).to_string(), self.right.id(b).to_string()))
                .collect(),
        }
    }

    pub fn from_json(left: &'a PointedModel, right: &'a PointedModel, j: &RelationJson) -> Result<Self> {
        let (li, ri) = (left.id_index(), right.id_index());
        let pairs = j
            .pairs
            .iter()
            .map(|(a, b)| {
                let a =
                    li.get(a.as_str()).ok_or_else(|| Error::InvalidRelation(format!("unknown left state `{a}`")))?;
                let b =
                    ri.get(b.as_str()).ok_or_else(|| Error::InvalidRelation(format!("unknown right state `{b}`")))?;
                Ok((*a, *b))
            })
            .collect::<Result<Vec<_>>>()?;
        Relation::new(left, right, pairs)
    }
}

fn check_signatures(m: &PointedModel, n: &PointedModel) -> Result<()> {
    if m.signature() != n.signature() {
        return Err(Error::SignatureMismatch(format!("{} vs {}", m.signature(), n.signature())));
    }
    Ok(())
}

/// Dense boolean matrix over `left × right`.
struct Matrix {
    cols: usize,
    bits: Vec<bool>,
}

impl Matrix {
    fn get(&self, a: usize, b: usize) -> bool {
        self.bits[a * self.cols + b]
    }

    fn set(&mut self, a: usize, b: usize, v: bool) {
        self.bits[a * self.cols + b] = v;
    }
}

/// Runs the deletion loop to its greatest fixpoint. `keep(z, a, b)` decides
/// whether the pair survives given the current relation.
fn greatest_fixpoint<F>(
    m: &PointedModel,
    n: &PointedModel,
    init: F,
    keep: impl Fn(&Matrix, usize, usize) -> bool,
) -> Matrix
where
    F: Fn(usize, usize) -> bool,
{
    let cols = n.len();
    let mut z = Matrix { cols, bits: (0..m.len() * cols).map(|i| init(i / cols, i % cols)).collect() };
    let (pm, pn) = (m.predecessors(), n.predecessors());
    let mut queued = z.bits.clone();
    let mut queue: VecDeque<(usize, usize)> =
        (0..m.len() * cols).filter(|&i| z.bits[i]).map(|i| (i / cols, i % cols)).collect();
    while let Some((a, b)) = queue.pop_front() {
        queued[a * cols + b] = false;
        if !z.get(a, b) || keep(&z, a, b) {
            continue;
        }
        z.set(a, b, false);
        // Only predecessor pairs can lose a witness.
        for &pa in &pm[a] {
            for &pb in &pn[b] {
                if z.get(pa, pb) && !queued[pa * cols + pb] {
                    queued[pa * cols + pb] = true;
                    queue.push_back((pa, pb));
                }
            }
        }
    }
    z
}

/// Pairs reachable from `(m.point, n.point)` by stepping along edges on both
/// sides while staying inside `z`.
fn reachable_pairs(m: &PointedModel, n: &PointedModel, z: &Matrix) -> BTreeSet<(usize, usize)> {
    let start = (m.point(), n.point());
    let mut out = BTreeSet::new();
    if !z.get(start.0, start.1) {
        return out;
    }
    let mut queue = VecDeque::from([start]);
    out.insert(start);
    while let Some((a, b)) = queue.pop_front() {
        for &u in m.successors(a) {
            for &v in n.successors(b) {
                if z.get(u, v) && out.insert((u, v)) {
                    queue.push_back((u, v));
                }
            }
        }
    }
    out
}

fn maximal_bisimulation(m: &PointedModel, n: &PointedModel) -> Matrix {
    greatest_fixpoint(
        m,
        n,
        |a, b| m.label(a) == n.label(b),
        |z, a, b| {
            m.successors(a).iter().all(|&u| n.successors(b).iter().any(|&v| z.get(u, v)))
                && n.successors(b).iter().all(|&v| m.successors(a).iter().any(|&u| z.get(u, v)))
        },
    )
}

/// A bisimulation linking the points, if one exists: the greatest
/// bisimulation restricted to pairs reachable from the point pair.
pub fn bisimulation<'a>(m: &'a PointedModel, n: &'a PointedModel) -> Result<Option<Relation<'a>>> {
    check_signatures(m, n)?;
    let z = maximal_bisimulation(m, n);
    if !z.get(m.point(), n.point()) {
        return Ok(None);
    }
    Ok(Some(Relation { left: m, right: n, pairs: reachable_pairs(m, n, &z) }))
}

pub fn bisimilar(m: &PointedModel, n: &PointedModel) -> Result<bool> {
    check_signatures(m, n)?;
    Ok(maximal_bisimulation(m, n).get(m.point(), n.point()))
}

/// Stratified refinement: level 0 is atom agreement, level `k + 1` adds
/// forth and back into level `k`. Formulas of modal depth at most `n` are
/// invariant under `n`-bisimilarity.
pub fn n_bisimilar(m: &PointedModel, n: &PointedModel, depth: usize) -> Result<bool> {
    check_signatures(m, n)?;
    let cols = n.len();
    let mut z: Vec<bool> = (0..m.len() * cols).map(|i| m.label(i / cols) == n.label(i % cols)).collect();
    for _ in 0..depth {
        let prev = z.clone();
        for a in 0..m.len() {
            for b in 0..cols {
                if !prev[a * cols + b] {
                    continue;
                }
                let forth = m.successors(a).iter().all(|&u| n.successors(b).iter().any(|&v| prev[u * cols + v]));
                let back = n.successors(b).iter().all(|&v| m.successors(a).iter().any(|&u| prev[u * cols + v]));
                z[a * cols + b] = forth && back;
            }
        }
        if z == prev {
            break;
        }
    }
    Ok(z[m.point() * cols + n.point()])
}

fn maximal_weak_simulation(m: &PointedModel, n: &PointedModel) -> Matrix {
    let empty = m.loopstate_bisimilar_states(Loopstate::Empty);
    let full = n.loopstate_bisimilar_states(Loopstate::Full);
    greatest_fixpoint(
        m,
        n,
        |a, b| m.label(a).is_subset(n.label(b)),
        |z, a, b| {
            let forth = m.successors(a).iter().all(|&u| empty[u] || n.successors(b).iter().any(|&v| z.get(u, v)));
            let back = n.successors(b).iter().all(|&v| full[v] || m.successors(a).iter().any(|&u| z.get(u, v)));
            forth && back
        },
    )
}

/// A weak simulation from `m` to `n` linking the points, if one exists.
pub fn weak_simulation<'a>(m: &'a PointedModel, n: &'a PointedModel) -> Result<Option<Relation<'a>>> {
    check_signatures(m, n)?;
    let z = maximal_weak_simulation(m, n);
    if !z.get(m.point(), n.point()) {
        return Ok(None);
    }
    Ok(Some(Relation { left: m, right: n, pairs: reachable_pairs(m, n, &z) }))
}

/// Does some weak simulation `Z : m → n` contain the point pair?
pub fn weak_simulates(m: &PointedModel, n: &PointedModel) -> Result<bool> {
    check_signatures(m, n)?;
    Ok(maximal_weak_simulation(m, n).get(m.point(), n.point()))
}

/// Clause-by-clause check of a given relation.
pub fn is_weak_simulation(z: &Relation<'_>) -> bool {
    let (m, n) = (z.left, z.right);
    if m.signature() != n.signature() || !z.contains(m.point(), n.point()) {
        return false;
    }
    let empty = m.loopstate_bisimilar_states(Loopstate::Empty);
    let full = n.loopstate_bisimilar_states(Loopstate::Full);
    z.pairs.iter().all(|&(a, b)| {
        m.label(a).is_subset(n.label(b))
            && m.successors(a).iter().all(|&u| empty[u] || n.successors(b).iter().any(|&v| z.contains(u, v)))
            && n.successors(b).iter().all(|&v| full[v] || m.successors(a).iter().any(|&u| z.contains(u, v)))
    })
}

pub fn is_bisimulation(z: &Relation<'_>) -> bool {
    let (m, n) = (z.left, z.right);
    if m.signature() != n.signature() || !z.contains(m.point(), n.point()) {
        return false;
    }
    z.pairs.iter().all(|&(a, b)| {
        m.label(a) == n.label(b)
            && m.successors(a).iter().all(|&u| n.successors(b).iter().any(|&v| z.contains(u, v)))
            && n.successors(b).iter().all(|&v| m.successors(a).iter().any(|&u| z.contains(u, v)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::PropSignature;
    use crate::kripke::{bisim_to_loopstate, PropSet};

    fn sig() -> PropSignature {
        PropSignature::new(["p"]).unwrap()
    }

    #[test]
    fn empty_loop_and_two_cycle() {
        let s = sig();
        let cycle = PointedModel::from_labels(s.clone(), vec![PropSet(0); 2], [(0, 1), (1, 0)], 0).unwrap();
        let o = PointedModel::empty_loop(&s);
        let z = bisimulation(&o, &cycle).unwrap().unwrap();
        assert!(is_bisimulation(&z));
        assert_eq!(z.len(), 2);
        assert!(!bisimilar(&o, &PointedModel::full_loop(&s)).unwrap());
    }

    #[test]
    fn paths_and_depth() {
        let s = PropSignature::empty();
        let (p2, p3) = (PointedModel::path(&s, 2), PointedModel::path(&s, 3));
        assert!(n_bisimilar(&p2, &p3, 2).unwrap());
        assert!(!n_bisimilar(&p2, &p3, 3).unwrap());
        assert!(!n_bisimilar(&p2, &p3, 4).unwrap());
    }

    #[test]
    fn deadlock_remark() {
        let s = sig();
        let dead = PointedModel::deadlock(&s, PropSet::EMPTY);
        let full = PointedModel::full_loop(&s);
        let empty = PointedModel::empty_loop(&s);
        assert!(weak_simulates(&dead, &full).unwrap());
        assert!(weak_simulates(&empty, &dead).unwrap());
        // Neither loopstate is bisimilar to the deadlock.
        assert!(!bisim_to_loopstate(&dead, Loopstate::Empty));
        assert!(!bisim_to_loopstate(&dead, Loopstate::Full));
    }

    #[test]
    fn extremes_of_the_preorder() {
        let s = sig();
        let m =
            PointedModel::from_labels(s.clone(), vec![PropSet(1), PropSet(0), PropSet(1)], [(0, 1), (1, 2), (2, 0)], 0)
                .unwrap();
        let empty = PointedModel::empty_loop(&s);
        let full = PointedModel::full_loop(&s);
        assert!(weak_simulates(&empty, &m).unwrap());
        assert!(weak_simulates(&m, &full).unwrap());
        assert!(is_weak_simulation(&Relation::full(&empty, &m)));
        assert!(is_weak_simulation(&Relation::full(&m, &full)));
        assert!(is_weak_simulation(&Relation::identity(&m)));
        let missing = Relation::new(&m, &m, [(1, 1), (2, 2)]).unwrap();
        assert!(!is_weak_simulation(&missing));
    }

    #[test]
    fn compose_and_converse() {
        let s = sig();
        let m = PointedModel::from_labels(s.clone(), vec![PropSet(0), PropSet(1)], [(0, 1)], 0).unwrap();
        let n = PointedModel::from_labels(s.clone(), vec![PropSet(1), PropSet(1)], [(0, 1), (1, 1)], 0).unwrap();
        let z = weak_simulation(&m, &n).unwrap().unwrap();
        assert!(is_weak_simulation(&z));
        assert_eq!(Relation::identity(&m).compose(&z).unwrap(), z);
        assert!(Relation::identity(&n).compose(&z).is_err());

        let (fm, fn_) = (m.flip(), n.flip());
        let back = z.converse().rebind(&fn_, &fm).unwrap();
        assert!(is_weak_simulation(&back));
    }

    #[test]
    fn relation_json_round_trip() {
        let s = sig();
        let m = PointedModel::path(&s, 1);
        let z = Relation::identity(&m);
        let j = z.to_json();
        assert_eq!(j.pairs[0], ("s0".to_string(), "s0".to_string()));
        assert_eq!(Relation::from_json(&m, &m, &j).unwrap(), z);
        let bad = RelationJson { pairs: vec![("s0".into(), "x".into())] };
        assert!(Relation::from_json(&m, &m, &bad).is_err());
    }

    #[test]
    fn signature_mismatch() {
        let a = PointedModel::empty_loop(&sig());
        let b = PointedModel::empty_loop(&PropSignature::empty());
        assert!(matches!(bisimilar(&a, &b), Err(Error::SignatureMismatch(_))));
        assert!(weak_simulates(&a, &b).is_err());
    }
}
