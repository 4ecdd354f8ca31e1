//! Seeded random formulas and models for property checks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::formula::{Formula, Fragment, Grammar, PropSignature, UniformSignature};
use crate::kripke::{PointedModel, PropSet};

/// Random formulas of bounded modal depth and size (see [`Formula::size`]).
#[derive(Clone, Debug)]
pub struct FormulaGen {
    grammar: Grammar,
    max_depth: usize,
    max_size: usize,
}

impl FormulaGen {
    pub fn new(grammar: Grammar, max_depth: usize, max_size: usize) -> Self {
        assert!(!grammar.literals.is_empty(), "a grammar needs at least one literal");
        FormulaGen { grammar, max_depth, max_size: max_size.max(1) }
    }

    pub fn positive(sig: &PropSignature, max_depth: usize, max_size: usize) -> Self {
        Self::new(Grammar::positive(sig), max_depth, max_size)
    }

    pub fn full(sig: &PropSignature, max_depth: usize, max_size: usize) -> Self {
        Self::new(Grammar::from_fragment(sig, &Fragment::full()), max_depth, max_size)
    }

    pub fn uniform(sig: &UniformSignature, max_depth: usize, max_size: usize) -> Self {
        Self::new(Grammar::uniform(sig), max_depth, max_size)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Formula {
        let size = rng.gen_range(1..=self.max_size);
        self.exact(rng, size, self.max_depth)
    }

    fn exact<R: Rng + ?Sized>(&self, rng: &mut R, size: usize, depth: usize) -> Formula {
        let g = &self.grammar;
        let unary = depth > 0 && (g.dia || g.boxed);
        let binary = g.and || g.or;
        if size <= 1 || (!unary && !binary) {
            return g.literals.choose(rng).expect("at least one literal").clone();
        }
        if unary && (!binary || rng.gen_bool(0.5)) {
            let child = self.exact(rng, size - 1, depth - 1);
            let use_dia = g.dia && (!g.boxed || rng.gen_bool(0.5));
            return if use_dia { Formula::dia(child) } else { Formula::boxed(child) };
        }
        let k = rng.gen_range(1..size);
        let (a, b) = (self.exact(rng, k, depth), self.exact(rng, size - k, depth));
        let use_and = g.and && (!g.or || rng.gen_bool(0.5));
        if use_and {
            Formula::and([a, b])
        } else {
            Formula::or([a, b])
        }
    }
}

/// A model with `n` states, uniform valuations and each ordered pair an
/// edge with probability `density`, pointed at state 0.
pub fn random_model<R: Rng + ?Sized>(rng: &mut R, sig: &PropSignature, n: usize, density: f64) -> PointedModel {
    let n = n.max(1);
    let full = PropSet::full(sig.len()).0;
    let labels = (0..n).map(|_| PropSet(rng.gen::<u64>() & full)).collect();
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if rng.gen_bool(density) {
                edges.push((a, b));
            }
        }
    }
    PointedModel::from_labels(sig.clone(), labels, edges, 0).expect("random model is well formed")
}

/// [`random_model`] with a state count drawn from `min..=max`.
pub fn random_model_between<R: Rng + ?Sized>(
    rng: &mut R,
    sig: &PropSignature,
    min: usize,
    max: usize,
    density: f64,
) -> PointedModel {
    let n = rng.gen_range(min..=max.max(min));
    random_model(rng, sig, n, density)
}
