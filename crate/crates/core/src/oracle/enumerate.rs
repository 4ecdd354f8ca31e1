//! Bounded exhaustive enumeration of formulas and pointed models.

use crate::error::{Error, Result};
use crate::formula::{Formula, Grammar, PropSignature};
use crate::kripke::{PointedModel, PropSet};

/// Default cap on the number of enumerated formulas.
pub const DEFAULT_MAX_FORMULAS: usize = 20_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Node {
    Lit(u32),
    And(Box<[u32]>),
    Or(Box<[u32]>),
    Dia(u32),
    Box(u32),
}

/// Every formula of a grammar within depth and size bounds, each exactly
/// once up to commutativity, associativity and idempotence of `∧`/`∨`.
///
/// Nodes are stored by increasing size, and a conjunction or disjunction is
/// a strictly increasing id set of at least two children of a different
/// kind, which is exactly the canonical shape.
#[derive(Clone, Debug)]
pub struct FormulaArena {
    literals: Vec<Formula>,
    nodes: Vec<Node>,
    depth: Vec<u8>,
    size: Vec<u8>,
}

impl FormulaArena {
    pub fn build(grammar: &Grammar, max_depth: usize, max_size: usize, max_formulas: usize) -> Result<Self> {
        let mut arena =
            FormulaArena { literals: grammar.literals.clone(), nodes: Vec::new(), depth: Vec::new(), size: Vec::new() };
        if max_size == 0 {
            return Ok(arena);
        }
        for i in 0..grammar.literals.len() {
            arena.push(Node::Lit(i as u32), 0, 1, max_formulas)?;
        }
        for s in 2..=max_size {
            let before = arena.nodes.len();
            if grammar.dia || grammar.boxed {
                for c in 0..before {
                    if arena.size[c] as usize == s - 1 && (arena.depth[c] as usize) < max_depth {
                        let d = arena.depth[c] + 1;
                        if grammar.dia {
                            arena.push(Node::Dia(c as u32), d, s as u8, max_formulas)?;
                        }
                        if grammar.boxed {
                            arena.push(Node::Box(c as u32), d, s as u8, max_formulas)?;
                        }
                    }
                }
            }
            for conj in [true, false] {
                if (conj && !grammar.and) || (!conj && !grammar.or) {
                    continue;
                }
                let mut picked = Vec::new();
                arena.combos(before, conj, s, 0, &mut picked, max_formulas)?;
            }
        }
        Ok(arena)
    }

    fn push(&mut self, node: Node, depth: u8, size: u8, cap: usize) -> Result<()> {
        if self.nodes.len() >= cap {
            return Err(Error::GuardExceeded(format!("more than {cap} formulas within the bounds")));
        }
        self.nodes.push(node);
        self.depth.push(depth);
        self.size.push(size);
        Ok(())
    }

    /// Extends `picked` with ids from `from..limit` whose sizes sum to
    /// `remaining`, emitting every set with at least two members.
    fn combos(
        &mut self,
        limit: usize,
        conj: bool,
        remaining: usize,
        from: usize,
        picked: &mut Vec<u32>,
        cap: usize,
    ) -> Result<()> {
        if remaining == 0 {
            if picked.len() >= 2 {
                let depth = picked.iter().map(|&c| self.depth[c as usize]).max().unwrap_or(0);
                let size: usize = picked.iter().map(|&c| self.size[c as usize] as usize).sum();
                let ids: Box<[u32]> = picked.clone().into();
                let node = if conj { Node::And(ids) } else { Node::Or(ids) };
                self.push(node, depth, size as u8, cap)?;
            }
            return Ok(());
        }
        for c in from..limit {
            let sz = self.size[c] as usize;
            if sz > remaining {
                break;
            }
            // A one-child set is not a connective; the last child must fill
            // the budget when nothing has been picked yet.
            if picked.is_empty() && sz == remaining {
                break;
            }
            let same_kind = matches!((&self.nodes[c], conj), (Node::And(_), true) | (Node::Or(_), false));
            if same_kind {
                continue;
            }
            picked.push(c as u32);
            self.combos(limit, conj, remaining - sz, c + 1, picked, cap)?;
            picked.pop();
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn formula(&self, id: usize) -> Formula {
        match &self.nodes[id] {
            Node::Lit(i) => self.literals[*i as usize].clone(),
            Node::And(cs) => Formula::And(cs.iter().map(|&c| self.formula(c as usize)).collect()),
            Node::Or(cs) => Formula::Or(cs.iter().map(|&c| self.formula(c as usize)).collect()),
            Node::Dia(c) => Formula::dia(self.formula(*c as usize)),
            Node::Box(c) => Formula::boxed(self.formula(*c as usize)),
        }
    }

    pub fn formulas(&self) -> impl Iterator<Item = Formula> + '_ {
        (0..self.len()).map(|i| self.formula(i))
    }

    /// Truth of every arena formula at every state of `universe`, as a
    /// bit matrix with one row per formula.
    pub fn evaluate(&self, universe: &Universe) -> TruthTable {
        let n = universe.labels.len();
        let words = n.div_ceil(64).max(1);
        let mut bits = vec![0u64; self.len() * words];
        let lit_rows: Vec<Vec<u64>> = self.literals.iter().map(|l| universe.literal_row(l, words)).collect();
        for id in 0..self.len() {
            let (done, rest) = bits.split_at_mut(id * words);
            let row = &mut rest[..words];
            let get = |c: u32| &done[c as usize * words..(c as usize + 1) * words];
            match &self.nodes[id] {
                Node::Lit(i) => row.copy_from_slice(&lit_rows[*i as usize]),
                Node::And(cs) => {
                    row.copy_from_slice(get(cs[0]));
                    for &c in &cs[1..] {
                        row.iter_mut().zip(get(c)).for_each(|(a, b)| *a &= b);
                    }
                }
                Node::Or(cs) => {
                    row.copy_from_slice(get(cs[0]));
                    for &c in &cs[1..] {
                        row.iter_mut().zip(get(c)).for_each(|(a, b)| *a |= b);
                    }
                }
                Node::Dia(c) | Node::Box(c) => {
                    let child = get(*c);
                    let is_dia = matches!(self.nodes[id], Node::Dia(_));
                    for s in 0..n {
                        let test = |t: &usize| child[t / 64] >> (t % 64) & 1 == 1;
                        let v =
                            if is_dia { universe.succ[s].iter().any(test) } else { universe.succ[s].iter().all(test) };
                        if v {
                            row[s / 64] |= 1 << (s % 64);
                        }
                    }
                }
            }
        }
        TruthTable { words, bits }
    }
}

/// The disjoint union of several models, with their points remembered.
#[derive(Clone, Debug)]
pub struct Universe {
    signature: PropSignature,
    labels: Vec<PropSet>,
    succ: Vec<Vec<usize>>,
    points: Vec<usize>,
}

impl Universe {
    pub fn new<'a, I: IntoIterator<Item = &'a PointedModel>>(signature: &PropSignature, models: I) -> Result<Self> {
        let mut u = Universe { signature: signature.clone(), labels: Vec::new(), succ: Vec::new(), points: Vec::new() };
        for m in models {
            if m.signature() != signature {
                return Err(Error::SignatureMismatch(format!("{} vs {}", m.signature(), signature)));
            }
            let off = u.labels.len();
            u.labels.extend_from_slice(m.labels());
            u.succ.extend((0..m.len()).map(|s| m.successors(s).iter().map(|t| t + off).collect()));
            u.points.push(m.point() + off);
        }
        Ok(u)
    }

    pub fn points(&self) -> &[usize] {
        &self.points
    }

    fn literal_row(&self, lit: &Formula, words: usize) -> Vec<u64> {
        let mut row = vec![0u64; words];
        for (s, l) in self.labels.iter().enumerate() {
            let v = match lit {
                Formula::Top => true,
                Formula::Bot => false,
                Formula::Atom(p) => self.signature.index_of(p).is_some_and(|i| l.contains(i)),
                Formula::NegAtom(p) => !self.signature.index_of(p).is_some_and(|i| l.contains(i)),
                _ => unreachable!("literals only"),
            };
            if v {
                row[s / 64] |= 1 << (s % 64);
            }
        }
        row
    }
}

pub struct TruthTable {
    words: usize,
    bits: Vec<u64>,
}

impl TruthTable {
    pub fn holds(&self, formula: usize, state: usize) -> bool {
        self.bits[formula * self.words + state / 64] >> (state % 64) & 1 == 1
    }
}

/// Every formula of `grammar` within the bounds.
pub fn enumerate_formulas(grammar: &Grammar, max_depth: usize, max_size: usize) -> Result<Vec<Formula>> {
    Ok(FormulaArena::build(grammar, max_depth, max_size, DEFAULT_MAX_FORMULAS)?.formulas().collect())
}

pub const MAX_ENUMERATED_STATES: usize = 4;

/// Calls `f` on one representative of every isomorphism class of pointed
/// models with `1..=max_states` states. The point is state 0; a model is
/// kept when its encoding is minimal over all permutations fixing 0.
pub fn for_each_model<F: FnMut(PointedModel)>(sig: &PropSignature, max_states: usize, mut f: F) -> Result<()> {
    if max_states > MAX_ENUMERATED_STATES {
        return Err(Error::GuardExceeded(format!(
            "exhaustive model enumeration is limited to {MAX_ENUMERATED_STATES} states"
        )));
    }
    let k = sig.len();
    if k > 4 {
        return Err(Error::GuardExceeded("exhaustive model enumeration is limited to 4 propositions".into()));
    }
    for n in 1..=max_states {
        let perms = permutations_fixing_zero(n);
        let valuations = 1u64 << k;
        let label_combos = valuations.pow(n as u32);
        for lc in 0..label_combos {
            let labels: Vec<u64> = (0..n).map(|i| (lc / valuations.pow(i as u32)) % valuations).collect();
            for adj in 0..1u64 << (n * n) {
                let own = (labels.clone(), adj);
                let canonical = perms.iter().all(|p| {
                    let l: Vec<u64> = (0..n).map(|i| labels[p[i]]).collect();
                    (l, permute_adj(adj, p, n)) >= own
                });
                if !canonical {
                    continue;
                }
                let edges = (0..n * n).filter(|b| adj >> b & 1 == 1).map(|b| (b / n, b % n));
                let m = PointedModel::from_labels(sig.clone(), labels.iter().map(|&l| PropSet(l)).collect(), edges, 0)?;
                f(m);
            }
        }
    }
    Ok(())
}

pub fn enumerate_models(sig: &PropSignature, max_states: usize) -> Result<Vec<PointedModel>> {
    let mut out = Vec::new();
    for_each_model(sig, max_states, |m| out.push(m))?;
    Ok(out)
}

/// `p[i]` is the old state placed at new position `i`.
fn permute_adj(adj: u64, p: &[usize], n: usize) -> u64 {
    let mut out = 0;
    for a in 0..n {
        for b in 0..n {
            if adj >> (p[a] * n + p[b]) & 1 == 1 {
                out |= 1 << (a * n + b);
            }
        }
    }
    out
}

fn permutations_fixing_zero(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: &mut Vec<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            cur.push(x);
            go(rest, cur, out);
            cur.pop();
            rest.insert(i, x);
        }
    }
    let mut out = Vec::new();
    go(&mut (1..n).collect(), &mut vec![0], &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{Fragment, PropSignature};
    use crate::kripke::iso::IsoSet;

    fn one() -> PropSignature {
        PropSignature::new(["p"]).unwrap()
    }

    #[test]
    fn small_bounds() {
        let g = Grammar::from_fragment(
            &one(),
            &Fragment::new([crate::formula::Connective::And, crate::formula::Connective::Or]),
        );
        assert_eq!(enumerate_formulas(&g, 0, 1).unwrap(), vec![Formula::atom("p")]);
        let all: Vec<String> =
            enumerate_formulas(&Grammar::positive(&one()), 1, 2).unwrap().iter().map(|f| f.to_string()).collect();
        assert_eq!(all, ["p", "<>p", "[]p"]);
    }

    #[test]
    fn one_state_models() {
        let ms = enumerate_models(&one(), 1).unwrap();
        assert_eq!(ms.len(), 4);
        for label in [PropSet(0), PropSet(1)] {
            let looped = PointedModel::from_labels(one(), vec![label], [(0, 0)], 0).unwrap();
            assert!(ms.contains(&looped));
        }
    }

    #[test]
    fn models_are_pairwise_non_isomorphic() {
        let ms = enumerate_models(&one(), 3).unwrap();
        let set: IsoSet = ms.iter().cloned().collect();
        assert_eq!(set.len(), ms.len());
    }
}
