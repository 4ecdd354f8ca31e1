//! Satisfiability by exhaustive search over small trees.
//!
//! A formula of modal depth `d` with `b` distinct diamond subformulas is
//! satisfiable iff it holds at the root of some tree of height at most `d`
//! and branching at most `b`. Rather than listing trees, the search keeps,
//! per height, the set of truth profiles such trees can realise on the
//! arguments of modal operators, which is all a parent can observe.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::formula::Formula;

const MAX_CHILD_SETS: u64 = 20_000_000;

struct Closure<'f> {
    subs: Vec<&'f Formula>,
    index: HashMap<&'f Formula, usize>,
    /// Position of each modal argument inside a projected profile.
    arg_pos: HashMap<usize, usize>,
    atoms: Vec<&'f str>,
}

impl<'f> Closure<'f> {
    fn new(phi: &'f Formula) -> Self {
        let mut c = Closure { subs: Vec::new(), index: HashMap::new(), arg_pos: HashMap::new(), atoms: Vec::new() };
        c.visit(phi);
        let mut args = BTreeSet::new();
        for f in &c.subs {
            if let Formula::Dia(x) | Formula::Box(x) = f {
                args.insert(c.index[x.as_ref()]);
            }
        }
        c.arg_pos = args.into_iter().enumerate().map(|(pos, i)| (i, pos)).collect();
        c
    }

    fn visit(&mut self, f: &'f Formula) {
        if self.index.contains_key(f) {
            return;
        }
        for child in f.children() {
            self.visit(child);
        }
        if let Formula::Atom(p) | Formula::NegAtom(p) = f {
            if !self.atoms.contains(&p.as_str()) {
                self.atoms.push(p);
            }
        }
        self.index.insert(f, self.subs.len());
        self.subs.push(f);
    }

    /// Truth of every subformula at a node with valuation `label` (bits
    /// over `atoms`) and children with the given projected profiles.
    fn eval(&self, label: u32, children: &[&Vec<bool>]) -> Vec<bool> {
        let mut t = vec![false; self.subs.len()];
        for (i, f) in self.subs.iter().enumerate() {
            let atom_bit = |p: &str| label >> self.atoms.iter().position(|a| *a == p).unwrap() & 1 == 1;
            let arg = |x: &Formula| self.arg_pos[&self.index[x]];
            t[i] = match f {
                Formula::Top => true,
                Formula::Bot => false,
                Formula::Atom(p) => atom_bit(p),
                Formula::NegAtom(p) => !atom_bit(p),
                Formula::And(cs) => cs.iter().all(|c| t[self.index[c]]),
                Formula::Or(cs) => cs.iter().any(|c| t[self.index[c]]),
                Formula::Dia(x) => children.iter().any(|ch| ch[arg(x)]),
                Formula::Box(x) => children.iter().all(|ch| ch[arg(x)]),
            };
        }
        t
    }

    fn project(&self, t: &[bool]) -> Vec<bool> {
        let mut out = vec![false; self.arg_pos.len()];
        for (&i, &pos) in &self.arg_pos {
            out[pos] = t[i];
        }
        out
    }
}

fn choose_up_to(n: u64, k: u64) -> u64 {
    let mut total = 0u64;
    let mut c = 1u64;
    for i in 0..=k.min(n) {
        total = total.saturating_add(c);
        c = c.saturating_mul(n - i) / (i + 1);
    }
    total
}

/// Calls `f` on every subset of `items` with at most `k` members.
fn subsets<'a, T, F: FnMut(&[&'a T])>(items: &'a [T], k: usize, f: &mut F) {
    fn go<'a, T, F: FnMut(&[&'a T])>(items: &'a [T], k: usize, from: usize, cur: &mut Vec<&'a T>, f: &mut F) {
        f(cur);
        if cur.len() == k {
            return;
        }
        for i in from..items.len() {
            cur.push(&items[i]);
            go(items, k, i + 1, cur, f);
            cur.pop();
        }
    }
    go(items, k, 0, &mut Vec::new(), f);
}

/// Is `phi` true at the root of some tree of height `≤ depth(phi)` and
/// branching `≤` its number of distinct diamond subformulas?
pub fn tree_search_sat(phi: &Formula) -> Result<bool> {
    let cl = Closure::new(phi);
    let branching = cl.subs.iter().filter(|f| matches!(f, Formula::Dia(_))).count();
    let labels = 1u32 << cl.atoms.len();
    let root = cl.index[phi];
    let mut reachable: Vec<Vec<bool>> = Vec::new();
    for height in 0..=phi.modal_depth() {
        let n = reachable.len() as u64;
        if (labels as u64).saturating_mul(choose_up_to(n, branching as u64)) > MAX_CHILD_SETS {
            return Err(Error::GuardExceeded(format!("tree search over {n} child profiles is too large")));
        }
        let mut next = BTreeSet::new();
        let mut found = false;
        let last = height == phi.modal_depth();
        for label in 0..labels {
            subsets(&reachable, branching, &mut |children| {
                let t = cl.eval(label, children);
                if last {
                    found |= t[root];
                } else {
                    next.insert(cl.project(&t));
                }
            });
        }
        if last {
            return Ok(found);
        }
        // Shorter trees remain available one level up.
        next.extend(reachable.iter().cloned());
        reachable = next.into_iter().collect();
    }
    unreachable!("the loop returns at the last height")
}
