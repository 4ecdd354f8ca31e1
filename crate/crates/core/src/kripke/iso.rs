//! Isomorphism of pointed models: colour-refinement hashing to bucket
//! candidates, backtracking search to decide.

use std::collections::hash_map::DefaultHasher;
use std::collections::{HashMap, VecDeque};
use std::hash::{Hash, Hasher};

use super::PointedModel;

fn hash_of<T: Hash>(value: &T) -> u64 {
    let mut h = DefaultHasher::new();
    value.hash(&mut h);
    h.finish()
}

/// Stable colouring of the states, refined until the number of colour
/// classes stops growing. Isomorphic models get identical colourings up to
/// the isomorphism.
fn refine(m: &PointedModel) -> Vec<u64> {
    let n = m.len();
    let pred = m.predecessors();
    let mut colours: Vec<u64> = (0..n).map(|s| hash_of(&(m.label(s).0, s == m.point()))).collect();
    let mut classes = count_classes(&colours);
    for _ in 0..n {
        let next: Vec<u64> = (0..n)
            .map(|s| {
                let mut out: Vec<u64> = m.successors(s).iter().map(|&t| colours[t]).collect();
                let mut inc: Vec<u64> = pred[s].iter().map(|&t| colours[t]).collect();
                out.sort_unstable();
                inc.sort_unstable();
                hash_of(&(colours[s], out, inc))
            })
            .collect();
        let next_classes = count_classes(&next);
        colours = next;
        if next_classes == classes {
            break;
        }
        classes = next_classes;
    }
    colours
}

fn count_classes(colours: &[u64]) -> usize {
    let mut c = colours.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

/// An isomorphism invariant of the pointed model.
pub fn canonical_hash(m: &PointedModel) -> u64 {
    let colours = refine(m);
    let mut sorted = colours.clone();
    sorted.sort_unstable();
    hash_of(&(m.signature(), m.len(), m.edge_count(), sorted, colours[m.point()]))
}

/// Is there a bijection of states preserving edges, valuations and the point?
pub fn isomorphic(a: &PointedModel, b: &PointedModel) -> bool {
    if a.signature() != b.signature() || a.len() != b.len() || a.edge_count() != b.edge_count() {
        return false;
    }
    let ca = refine(a);
    let cb = refine(b);
    let (mut sa, mut sb) = (ca.clone(), cb.clone());
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb || ca[a.point()] != cb[b.point()] {
        return false;
    }

    // Visit A's states in BFS order from the point so most candidates are
    // constrained by an already mapped neighbour.
    let n = a.len();
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([a.point()]);
    seen[a.point()] = true;
    while let Some(s) = queue.pop_front() {
        order.push(s);
        for &t in a.successors(s) {
            if !seen[t] {
                seen[t] = true;
                queue.push_back(t);
            }
        }
    }
    order.extend((0..n).filter(|&s| !seen[s]));

    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    extend_map(a, b, &ca, &cb, &order, 0, &mut map, &mut used)
}

#[allow(clippy::too_many_arguments)]
fn extend_map(
    a: &PointedModel,
    b: &PointedModel,
    ca: &[u64],
    cb: &[u64],
    order: &[usize],
    depth: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    if depth == order.len() {
        return true;
    }
    let s = order[depth];
    let candidates: Vec<usize> = if s == a.point() {
        vec![b.point()]
    } else {
        (0..b.len()).filter(|&t| !used[t] && cb[t] == ca[s] && t != b.point()).collect()
    };
    for t in candidates {
        if a.label(s) != b.label(t) || a.has_edge(s, s) != b.has_edge(t, t) {
            continue;
        }
        let consistent = order[..depth].iter().all(|&x| {
            let y = map[x];
            a.has_edge(s, x) == b.has_edge(t, y) && a.has_edge(x, s) == b.has_edge(y, t)
        });
        if !consistent {
            continue;
        }
        map[s] = t;
        used[t] = true;
        if extend_map(a, b, ca, cb, order, depth + 1, map, used) {
            return true;
        }
        used[t] = false;
        map[s] = usize::MAX;
    }
    false
}

/// A set of pointed models up to isomorphism, preserving insertion order.
#[derive(Clone, Debug, Default)]
pub struct IsoSet {
    models: Vec<PointedModel>,
    hashes: Vec<u64>,
    buckets: HashMap<u64, Vec<usize>>,
}

impl IsoSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts `m` unless an isomorphic copy is present; returns whether it
    /// was inserted.
    pub fn insert(&mut self, m: PointedModel) -> bool {
        let h = canonical_hash(&m);
        self.insert_hashed(m, h)
    }

    fn insert_hashed(&mut self, m: PointedModel, h: u64) -> bool {
        let bucket = self.buckets.entry(h).or_default();
        if bucket.iter().any(|&i| isomorphic(&self.models[i], &m)) {
            return false;
        }
        bucket.push(self.models.len());
        self.models.push(m);
        self.hashes.push(h);
        true
    }

    pub fn position(&self, m: &PointedModel) -> Option<usize> {
        let h = canonical_hash(m);
        self.buckets.get(&h)?.iter().copied().find(|&i| isomorphic(&self.models[i], m))
    }

    pub fn contains(&self, m: &PointedModel) -> bool {
        self.position(m).is_some()
    }

    pub fn len(&self) -> usize {
        self.models.len()
    }

    pub fn is_empty(&self) -> bool {
        self.models.is_empty()
    }

    pub fn as_slice(&self) -> &[PointedModel] {
        &self.models
    }

    pub fn hash_at(&self, i: usize) -> u64 {
        self.hashes[i]
    }

    pub fn into_vec(self) -> Vec<PointedModel> {
        self.models
    }
}

impl Extend<PointedModel> for IsoSet {
    fn extend<T: IntoIterator<Item = PointedModel>>(&mut self, iter: T) {
        for m in iter {
            self.insert(m);
        }
    }
}

impl FromIterator<PointedModel> for IsoSet {
    fn from_iter<T: IntoIterator<Item = PointedModel>>(iter: T) -> Self {
        let mut set = IsoSet::new();
        set.extend(iter);
        set
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::PropSignature;
    use crate::kripke::PropSet;

    fn sig() -> PropSignature {
        PropSignature::new(["p"]).unwrap()
    }

    #[test]
    fn relabelled_copies_are_isomorphic() {
        let s = sig();
        let a =
            PointedModel::from_labels(s.clone(), vec![PropSet(0), PropSet(1), PropSet(0)], [(0, 1), (0, 2), (2, 2)], 0)
                .unwrap();
        let b =
            PointedModel::from_labels(s.clone(), vec![PropSet(0), PropSet(0), PropSet(1)], [(1, 0), (1, 2), (0, 0)], 1)
                .unwrap();
        assert!(isomorphic(&a, &b));
        assert_eq!(canonical_hash(&a), canonical_hash(&b));

        let c = PointedModel::from_labels(s, vec![PropSet(0), PropSet(1), PropSet(0)], [(0, 1), (0, 2), (1, 1)], 0)
            .unwrap();
        assert!(!isomorphic(&a, &c));
    }

    #[test]
    fn point_matters() {
        let s = sig();
        let m = PointedModel::path(&s, 1);
        assert!(!isomorphic(&m, &m.with_point(1).unwrap()));
    }

    #[test]
    fn regular_graphs_need_search() {
        // A 6-cycle and two triangles: same size, same degrees.
        let s = PropSignature::empty();
        let six =
            PointedModel::from_labels(s.clone(), vec![PropSet(0); 6], (0..6).map(|i| (i, (i + 1) % 6)), 0).unwrap();
        let two =
            PointedModel::from_labels(s, vec![PropSet(0); 6], [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)], 0)
                .unwrap();
        assert!(!isomorphic(&six, &two));
        let shifted = six.with_point(3).unwrap();
        assert!(isomorphic(&six, &shifted));
    }

    #[test]
    fn iso_set_dedups() {
        let s = sig();
        let mut set = IsoSet::new();
        assert!(set.insert(PointedModel::empty_loop(&s)));
        let renamed = PointedModel::new(s.clone(), vec!["zz".into()], vec![PropSet(0)], [(0, 0)], 0).unwrap();
        assert!(!set.insert(renamed));
        assert!(set.insert(PointedModel::full_loop(&s)));
        assert_eq!(set.len(), 2);
    }
}
