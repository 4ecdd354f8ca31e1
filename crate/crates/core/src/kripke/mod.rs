//! Finite pointed Kripke models and the structural operations on them.

mod check;
mod io;
pub mod iso;

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::formula::PropSignature;

pub use check::{modelcheck, truth_set};
pub use io::{read_model, write_model, ModelJson, StateJson};

/// A valuation: the set of propositions true at a state, as a bit set over
/// signature indices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PropSet(pub u64);

impl PropSet {
    pub const EMPTY: PropSet = PropSet(0);

    pub fn full(n: usize) -> PropSet {
        if n >= 64 {
            PropSet(u64::MAX)
        } else {
            PropSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> PropSet {
        PropSet(1 << i)
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn union(self, other: PropSet) -> PropSet {
        PropSet(self.0 | other.0)
    }

    pub fn is_subset(self, other: PropSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Complement relative to a signature of `n` propositions.
    pub fn complement(self, n: usize) -> PropSet {
        PropSet(!self.0 & PropSet::full(n).0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&i| self.contains(i))
    }

    pub fn from_names<'a, I>(sig: &PropSignature, names: I) -> Result<PropSet>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut set = PropSet::EMPTY;
        for name in names {
            let i = sig.index_of(name).ok_or_else(|| Error::UnknownProp(name.to_string()))?;
            set.insert(i);
        }
        Ok(set)
    }

    pub fn names(self, sig: &PropSignature) -> Vec<&str> {
        self.iter().take_while(|&i| i < sig.len()).map(|i| sig.name(i)).collect()
    }
}

/// The height of a pointed model: the number of edges on the longest path
/// from the point, or infinite when a cycle is reachable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Height {
    Finite(usize),
    Infinite,
}

impl fmt::Display for Height {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Height::Finite(n) => write!(f, "{n}"),
            Height::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Loopstate {
    /// One reflexive state with the empty valuation.
    Empty,
    /// One reflexive state with the full valuation.
    Full,
}

/// A finite Kripke model with a distinguished state.
///
/// States are addressed by index; every state also carries an opaque string
/// id used for serialisation. Successor lists are sorted and duplicate free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedModel {
    signature: PropSignature,
    ids: Vec<String>,
    labels: Vec<PropSet>,
    succ: Vec<Vec<usize>>,
    point: usize,
}

impl PointedModel {
    pub fn new<E>(
        signature: PropSignature,
        ids: Vec<String>,
        labels: Vec<PropSet>,
        edges: E,
        point: usize,
    ) -> Result<Self>
    where
        E: IntoIterator<Item = (usize, usize)>,
    {
        let n = ids.len();
        if labels.len() != n {
            return Err(Error::InvalidModel(format!("{} ids but {} valuations", n, labels.len())));
        }
        if n == 0 {
            return Err(Error::InvalidModel("a model needs at least one state".into()));
        }
        if point >= n {
            return Err(Error::InvalidModel(format!("point {point} out of range")));
        }
        let mut seen = BTreeSet::new();
        for id in &ids {
            if !seen.insert(id.as_str()) {
                return Err(Error::InvalidModel(format!("duplicate state id `{id}`")));
            }
        }
        let full = PropSet::full(signature.len());
        if let Some(bad) = labels.iter().find(|l| !l.is_subset(full)) {
            return Err(Error::InvalidModel(format!("valuation {bad:?} outside the signature")));
        }
        let mut succ = vec![Vec::new(); n];
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidModel(format!("edge ({a}, {b}) out of range")));
            }
            succ[a].push(b);
        }
        for s in &mut succ {
            s.sort_unstable();
            s.dedup();
        }
        Ok(PointedModel { signature, ids, labels, succ, point })
    }

    /// Builds a model with generated ids `s0, s1, ...`.
    pub fn from_labels<E>(signature: PropSignature, labels: Vec<PropSet>, edges: E, point: usize) -> Result<Self>
    where
        E: IntoIterator<Item = (usize, usize)>,
    {
        let ids = (0..labels.len()).map(|i| format!("s{i}")).collect();
        Self::new(signature, ids, labels, edges, point)
    }

    pub fn loopstate(signature: &PropSignature, which: Loopstate) -> Self {
        let label = match which {
            Loopstate::Empty => PropSet::EMPTY,
            Loopstate::Full => PropSet::full(signature.len()),
        };
        PointedModel {
            signature: signature.clone(),
            ids: vec!["o".into()],
            labels: vec![label],
            succ: vec![vec![0]],
            point: 0,
        }
    }

    /// `○∅`
    pub fn empty_loop(signature: &PropSignature) -> Self {
        Self::loopstate(signature, Loopstate::Empty)
    }

    /// `○Prop`
    pub fn full_loop(signature: &PropSignature) -> Self {
        Self::loopstate(signature, Loopstate::Full)
    }

    /// A single state without successors.
    pub fn deadlock(signature: &PropSignature, label: PropSet) -> Self {
        PointedModel {
            signature: signature.clone(),
            ids: vec!["d".into()],
            labels: vec![label],
            succ: vec![Vec::new()],
            point: 0,
        }
    }

    /// The directed path with `n` edges, all valuations empty, pointed at its
    /// start.
    pub fn path(signature: &PropSignature, n: usize) -> Self {
        let labels = vec![PropSet::EMPTY; n + 1];
        Self::from_labels(signature.clone(), labels, (0..n).map(|i| (i, i + 1)), 0).expect("valid path")
    }

    pub fn signature(&self) -> &PropSignature {
        &self.signature
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn point(&self) -> usize {
        self.point
    }

    pub fn id(&self, state: usize) -> &str {
        &self.ids[state]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn state_index(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|x| x == id)
    }

    pub fn label(&self, state: usize) -> PropSet {
        self.labels[state]
    }

    pub fn labels(&self) -> &[PropSet] {
        &self.labels
    }

    pub fn successors(&self, state: usize) -> &[usize] {
        &self.succ[state]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.succ[a].binary_search(&b).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ.iter().enumerate().flat_map(|(a, bs)| bs.iter().map(move |&b| (a, b)))
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn predecessors(&self) -> Vec<Vec<usize>> {
        let mut pred = vec![Vec::new(); self.len()];
        for (a, b) in self.edges() {
            pred[b].push(a);
        }
        pred
    }

    /// Same model, different distinguished state.
    pub fn with_point(&self, point: usize) -> Result<Self> {
        if point >= self.len() {
            return Err(Error::InvalidModel(format!("point {point} out of range")));
        }
        let mut m = self.clone();
        m.point = point;
        Ok(m)
    }

    /// Same frame with new valuations over a new signature.
    pub fn relabel(&self, signature: PropSignature, labels: Vec<PropSet>) -> Result<Self> {
        PointedModel::new(signature, self.ids.clone(), labels, self.edges().collect::<Vec<_>>(), self.point)
    }

    /// States reachable from `from` (including `from`).
    pub fn reachable_from(&self, from: usize) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        let mut stack = vec![from];
        seen[from] = true;
        while let Some(s) = stack.pop() {
            for &t in &self.succ[s] {
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        seen
    }

    pub fn is_point_generated(&self) -> bool {
        self.reachable_from(self.point).iter().all(|&b| b)
    }

    /// Restriction to the states reachable from the point. State order and
    /// ids are preserved.
    pub fn generated_submodel(&self) -> PointedModel {
        self.generated_at(self.point)
    }

    /// The submodel generated by `state`, pointed at `state`.
    pub fn generated_at(&self, state: usize) -> PointedModel {
        let keep = self.reachable_from(state);
        let mut index = vec![usize::MAX; self.len()];
        let mut ids = Vec::new();
        let mut labels = Vec::new();
        for s in 0..self.len() {
            if keep[s] {
                index[s] = ids.len();
                ids.push(self.ids[s].clone());
                labels.push(self.labels[s]);
            }
        }
        let succ =
            (0..self.len()).filter(|&s| keep[s]).map(|s| self.succ[s].iter().map(|&t| index[t]).collect()).collect();
        PointedModel { signature: self.signature.clone(), ids, labels, succ, point: index[state] }
    }

    pub fn height(&self) -> Height {
        // 0 = unvisited, 1 = on stack, 2 = done
        let n = self.len();
        let mut colour = vec![0u8; n];
        let mut longest = vec![0usize; n];
        let mut stack: Vec<(usize, usize)> = vec![(self.point, 0)];
        colour[self.point] = 1;
        while let Some(&mut (s, ref mut next)) = stack.last_mut() {
            if *next < self.succ[s].len() {
                let t = self.succ[s][*next];
                *next += 1;
                match colour[t] {
                    0 => {
                        colour[t] = 1;
                        stack.push((t, 0));
                    }
                    1 => return Height::Infinite,
                    _ => {}
                }
            } else {
                longest[s] = self.succ[s].iter().map(|&t| longest[t] + 1).max().unwrap_or(0);
                colour[s] = 2;
                stack.pop();
            }
        }
        Height::Finite(longest[self.point])
    }

    /// Depth-`n` tree unravelling: the states are the paths from the point
    /// with at most `n` edges, each labelled like its last state.
    pub fn tree_unravel(&self, n: usize) -> PointedModel {
        let mut ids = vec![self.ids[self.point].clone()];
        let mut labels = vec![self.labels[self.point]];
        let mut last = vec![self.point];
        let mut edges = Vec::new();
        let mut frontier = vec![0usize];
        for _ in 0..n {
            let mut next = Vec::new();
            for &node in &frontier {
                for &t in &self.succ[last[node]] {
                    let child = ids.len();
                    ids.push(format!("{}.{}", ids[node], self.ids[t]));
                    labels.push(self.labels[t]);
                    last.push(t);
                    edges.push((node, child));
                    next.push(child);
                }
            }
            frontier = next;
        }
        PointedModel::new(self.signature.clone(), ids, labels, edges, 0).expect("unravelling is well formed")
    }

    /// Complements every valuation relative to the signature.
    pub fn flip(&self) -> PointedModel {
        let n = self.signature.len();
        let mut m = self.clone();
        for l in &mut m.labels {
            *l = l.complement(n);
        }
        m
    }

    /// Disjoint union of `examples` below a fresh root coloured `root_label`,
    /// whose successors are exactly the examples' points.
    pub fn glue(signature: &PropSignature, root_label: PropSet, examples: &[PointedModel]) -> Result<PointedModel> {
        if !root_label.is_subset(PropSet::full(signature.len())) {
            return Err(Error::InvalidModel("root valuation outside the signature".into()));
        }
        let mut ids = vec!["r".to_string()];
        let mut labels = vec![root_label];
        let mut succ = vec![Vec::new()];
        for (i, e) in examples.iter().enumerate() {
            if e.signature != *signature {
                return Err(Error::SignatureMismatch(format!(
                    "example {i} is over {} but gluing over {}",
                    e.signature, signature
                )));
            }
            let offset = ids.len();
            ids.extend(e.ids.iter().map(|x| format!("{i}.{x}")));
            labels.extend_from_slice(&e.labels);
            succ.extend(e.succ.iter().map(|ts| ts.iter().map(|t| t + offset).collect()));
            succ[0].push(e.point + offset);
        }
        succ[0].sort_unstable();
        Ok(PointedModel { signature: signature.clone(), ids, labels, succ, point: 0 })
    }

    /// The models generated by the successors of the point, in successor order.
    pub fn point_children(&self) -> Vec<PointedModel> {
        self.succ[self.point].iter().map(|&t| self.generated_at(t)).collect()
    }

    /// For every state: is the submodel it generates bisimilar to the given
    /// loopstate? That holds iff every reachable state carries the loopstate's
    /// valuation and has a successor.
    pub fn loopstate_bisimilar_states(&self, which: Loopstate) -> Vec<bool> {
        let target = match which {
            Loopstate::Empty => PropSet::EMPTY,
            Loopstate::Full => PropSet::full(self.signature.len()),
        };
        // Greatest fixpoint: start from locally good states, drop any state
        // that reaches a bad one.
        let n = self.len();
        let mut good: Vec<bool> = (0..n).map(|s| self.labels[s] == target && !self.succ[s].is_empty()).collect();
        let pred = self.predecessors();
        let mut queue: VecDeque<usize> = (0..n).filter(|&s| !good[s]).collect();
        while let Some(s) = queue.pop_front() {
            for &p in &pred[s] {
                if good[p] {
                    good[p] = false;
                    queue.push_back(p);
                }
            }
        }
        good
    }

    pub fn to_dot(&self) -> String {
        io::to_dot(self)
    }

    /// A map from id to index, for bulk lookups.
    pub fn id_index(&self) -> HashMap<&str, usize> {
        self.ids.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect()
    }
}

/// Is the model generated by the point bisimilar to the given loopstate?
pub fn bisim_to_loopstate(m: &PointedModel, which: Loopstate) -> bool {
    m.loopstate_bisimilar_states(which)[m.point()]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> PropSignature {
        PropSignature::new(["p", "q"]).unwrap()
    }

    #[test]
    fn height_examples() {
        let s = sig();
        assert_eq!(PointedModel::deadlock(&s, PropSet::EMPTY).height(), Height::Finite(0));
        assert_eq!(PointedModel::empty_loop(&s).height(), Height::Infinite);
        let p = PointedModel::path(&s, 2);
        assert_eq!(p.height(), Height::Finite(2));
        assert!(2 <= p.len());
        // cycle not reachable from the point does not matter
        let m = PointedModel::from_labels(s.clone(), vec![PropSet::EMPTY; 3], [(0, 1), (2, 2)], 0).unwrap();
        assert_eq!(m.height(), Height::Finite(1));
        // diamond shape: longest path wins
        let m = PointedModel::from_labels(s, vec![PropSet::EMPTY; 4], [(0, 1), (0, 2), (2, 3), (1, 3)], 0).unwrap();
        assert_eq!(m.height(), Height::Finite(2));
    }

    #[test]
    fn generated_submodel_drops_unreachable() {
        let s = sig();
        let m = PointedModel::from_labels(s.clone(), vec![PropSet::EMPTY; 3], [(0, 1), (2, 0)], 0).unwrap();
        let g = m.generated_submodel();
        assert_eq!(g.len(), 2);
        assert_eq!(g.ids(), &["s0".to_string(), "s1".to_string()]);
        assert_eq!(g.generated_submodel(), g);
    }

    #[test]
    fn unravel_empty_loop() {
        let s = sig();
        let u = PointedModel::empty_loop(&s).tree_unravel(2);
        assert_eq!(u.len(), 3);
        assert_eq!(u.edge_count(), 2);
        assert!(u.labels().iter().all(|l| l.is_empty()));
        assert_eq!(u.height(), Height::Finite(2));
        assert_eq!(PointedModel::empty_loop(&s).tree_unravel(0).len(), 1);
    }

    #[test]
    fn flip_examples() {
        let s = sig();
        assert_eq!(PointedModel::empty_loop(&s).flip(), PointedModel::full_loop(&s));
        let m = PointedModel::from_labels(s, vec![PropSet(1), PropSet(2)], [(0, 1)], 0).unwrap();
        assert_eq!(m.flip().flip(), m);
        assert_eq!(m.flip().label(0), PropSet(2));
    }

    #[test]
    fn glue_examples() {
        let s = PropSignature::new(["p"]).unwrap();
        let g = PointedModel::glue(&s, PropSet(1), &[PointedModel::empty_loop(&s)]).unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g.label(0), PropSet(1));
        assert_eq!(g.successors(0), &[1]);
        assert_eq!(g.successors(1), &[1]);

        let d = PointedModel::glue(&s, PropSet::EMPTY, &[]).unwrap();
        assert_eq!(d, PointedModel::new(s.clone(), vec!["r".into()], vec![PropSet::EMPTY], [], 0).unwrap());

        let parts = [g.clone(), PointedModel::empty_loop(&s), g.clone()];
        let big = PointedModel::glue(&s, PropSet::EMPTY, &parts).unwrap();
        assert_eq!(big.len(), 1 + parts.iter().map(PointedModel::len).sum::<usize>());
        // removing the root gives back the parts
        let children = big.point_children();
        assert_eq!(children.len(), 3);
        for (c, orig) in children.iter().zip(&parts) {
            assert!(iso::isomorphic(c, orig));
        }
    }

    #[test]
    fn glue_rejects_foreign_signature() {
        let s = PropSignature::new(["p"]).unwrap();
        let t = PropSignature::new(["q"]).unwrap();
        assert!(PointedModel::glue(&s, PropSet::EMPTY, &[PointedModel::empty_loop(&t)]).is_err());
    }

    #[test]
    fn loopstate_detection() {
        let s = sig();
        assert!(bisim_to_loopstate(&PointedModel::empty_loop(&s), Loopstate::Empty));
        assert!(!bisim_to_loopstate(&PointedModel::empty_loop(&s), Loopstate::Full));
        let d = PointedModel::deadlock(&s, PropSet::EMPTY);
        assert!(!bisim_to_loopstate(&d, Loopstate::Empty));
        assert!(!bisim_to_loopstate(&PointedModel::deadlock(&s, PropSet::full(2)), Loopstate::Full));
        // two-cycle of blank states
        let c = PointedModel::from_labels(s.clone(), vec![PropSet::EMPTY; 2], [(0, 1), (1, 0)], 0).unwrap();
        assert!(bisim_to_loopstate(&c, Loopstate::Empty));
        // blank loop that can also reach a deadlock
        let c = PointedModel::from_labels(s, vec![PropSet::EMPTY; 2], [(0, 0), (0, 1)], 0).unwrap();
        assert!(!bisim_to_loopstate(&c, Loopstate::Empty));
    }

    #[test]
    fn model_validation() {
        let s = sig();
        assert!(PointedModel::from_labels(s.clone(), vec![], [], 0).is_err());
        assert!(PointedModel::from_labels(s.clone(), vec![PropSet::EMPTY], [(0, 1)], 0).is_err());
        assert!(PointedModel::from_labels(s.clone(), vec![PropSet::EMPTY], [], 1).is_err());
        assert!(PointedModel::from_labels(s.clone(), vec![PropSet(4)], [], 0).is_err());
        assert!(PointedModel::new(s, vec!["a".into(), "a".into()], vec![PropSet::EMPTY; 2], [], 0).is_err());
    }
}
