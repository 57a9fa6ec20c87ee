//! One evaluator for the higher derived brackets of an element or of a
//! derivation, over any graded Lie algebra that can bracket, project
//! onto the complement `A`, and read coordinates in `A`.

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::coalgebra::{words, Coderivation, Flavor};
use crate::error::Result;
use crate::graded::space::{GradedSpace, Vector};
use crate::scalars::{bernoulli, factorial, Rational};

/// A graded Lie algebra `M` with a projection `P` onto a subalgebra `A`.
pub trait LieModel {
    type Elem: Clone;

    fn bracket(&self, x: &Self::Elem, y: &Self::Elem) -> Result<Self::Elem>;

    /// `P`, as an element of `M`.
    fn project(&self, x: &Self::Elem) -> Result<Self::Elem>;

    fn is_zero(&self, x: &Self::Elem) -> bool;

    fn scaled(&self, c: &Rational, x: &Self::Elem) -> Self::Elem;

    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Result<Self::Elem>;

    /// The graded space `A`, with the basis used for words.
    fn a_space(&self) -> &Arc<GradedSpace>;

    /// Basis vector `i` of `A` as an element of `M`.
    fn a_elem(&self, i: usize) -> Self::Elem;

    /// Coordinates in `A` of an element lying in `A`.
    fn a_coords(&self, x: &Self::Elem) -> Result<Vector>;
}

/// Where the nested brackets start: `[m, a]` for an element, `D a` for a
/// derivation.
pub enum Seed<'a, E> {
    Element(&'a E),
    Map(&'a dyn Fn(&E) -> Result<E>),
}

struct Acc<'m, M: LieModel> {
    model: &'m M,
    value: Option<M::Elem>,
}

impl<M: LieModel> Acc<'_, M> {
    fn add(&mut self, c: &Rational, x: &M::Elem) -> Result<()> {
        let y = self.model.scaled(c, x);
        self.value = Some(match self.value.take() {
            None => y,
            Some(v) => self.model.add(&v, &y)?,
        });
        Ok(())
    }
}

struct Cell<'a, 'm, M: LieModel> {
    model: &'m M,
    seed: &'a Seed<'a, M::Elem>,
    args: Vec<M::Elem>,
    odd: Vec<bool>,
    weights: Vec<Rational>,
}

impl<M: LieModel> Cell<'_, '_, M> {
    /// Picks `r` out of `remaining`; the sign is that of moving it in
    /// front of the earlier remaining entries.
    fn pick(&self, remaining: &[usize], at: usize) -> (bool, Vec<usize>) {
        let r = remaining[at];
        let flips = self.odd[r] && remaining[..at].iter().filter(|&&p| self.odd[p]).count() % 2 == 1;
        let mut rest = remaining.to_vec();
        rest.remove(at);
        (flips, rest)
    }

    /// Inner chain `x_j` built from `j` arguments.
    fn inner(&self, x: Option<&M::Elem>, j: usize, remaining: &[usize], neg: bool, acc: &mut Acc<M>) -> Result<()> {
        if let Some(x) = x {
            if self.model.is_zero(x) {
                return Ok(());
            }
            let w = &self.weights[j];
            if !w.is_zero() {
                let y = self.model.project(x)?;
                if !self.model.is_zero(&y) {
                    self.outer(&y, remaining, neg, w, acc)?;
                }
            }
        }
        for at in 0..remaining.len() {
            let (flip, rest) = self.pick(remaining, at);
            let a = &self.args[remaining[at]];
            let next = match (x, self.seed) {
                (Some(x), _) => self.model.bracket(x, a)?,
                (None, Seed::Map(d)) => d(a)?,
                (None, Seed::Element(_)) => unreachable!("element seeds start with x_0 = m"),
            };
            self.inner(Some(&next), j + 1, &rest, neg ^ flip, acc)?;
        }
        Ok(())
    }

    fn outer(&self, y: &M::Elem, remaining: &[usize], neg: bool, w: &Rational, acc: &mut Acc<M>) -> Result<()> {
        if remaining.is_empty() {
            return acc.add(&if neg { -w.clone() } else { w.clone() }, y);
        }
        for at in 0..remaining.len() {
            let (flip, rest) = self.pick(remaining, at);
            let next = self.model.bracket(y, &self.args[remaining[at]])?;
            if !self.model.is_zero(&next) {
                self.outer(&next, &rest, neg ^ flip, w, acc)?;
            }
        }
        Ok(())
    }
}

/// `Φ(seed)_i` on the `A`-basis word `word`: the sum over orderings
/// `σ` and split points `k` of `B_{i-k}/(k!(i-k)!)` times the nested
/// brackets with `P` applied after the first `k` arguments.
pub fn bracket_on_word<M: LieModel>(model: &M, seed: &Seed<M::Elem>, word: &[usize]) -> Result<Vector> {
    let i = word.len();
    let space = model.a_space();
    let kmin = match seed {
        Seed::Element(_) => 0,
        Seed::Map(_) => 1,
    };
    let weights = (0..=i)
        .map(|k| if k < kmin { Rational::zero() } else { bernoulli(i - k) / (factorial(k) * factorial(i - k)) })
        .collect();
    let cell = Cell {
        model,
        seed,
        args: word.iter().map(|&l| model.a_elem(l)).collect(),
        odd: word.iter().map(|&l| space.is_odd(l)).collect(),
        weights,
    };
    let mut acc = Acc { model, value: None };
    let all: Vec<usize> = (0..i).collect();
    match seed {
        Seed::Element(m) => cell.inner(Some(m), 0, &all, false, &mut acc)?,
        Seed::Map(_) => cell.inner(None, 0, &all, false, &mut acc)?,
    }
    match acc.value {
        None => Ok(Vector::zero()),
        Some(v) => model.a_coords(&v),
    }
}

/// All brackets up to arity `n` as a coderivation of `SA`: unreduced with
/// `Φ(m)_0(1) = Pm` for an element, reduced for a derivation.
pub fn derived_brackets<M: LieModel>(model: &M, seed: &Seed<M::Elem>, degree: i64, n: usize) -> Result<Coderivation> {
    let space = model.a_space().clone();
    let (flavor, start) = match seed {
        Seed::Element(_) => (Flavor::Unreduced, 0),
        Seed::Map(_) => (Flavor::Reduced, 1),
    };
    let mut out = Coderivation::new(space.clone(), degree, flavor, n);
    for k in start..=n {
        for w in words(&space, k) {
            let v = if k == 0 {
                match seed {
                    Seed::Element(m) => model.a_coords(&model.project(m)?)?,
                    Seed::Map(_) => Vector::zero(),
                }
            } else {
                bracket_on_word(model, seed, &w)?
            };
            out.set(w, v)?;
        }
    }
    Ok(out)
}

/// `Σ_σ ε(σ) [⋯[x_1, a_σ(2)]⋯, a_σ(i)]` with `x_1 = D a_σ(1)` (map seed)
/// or `x_0 = m` (element seed), without any projection.
pub fn symmetrized_nested<M: LieModel>(model: &M, seed: &Seed<M::Elem>, word: &[usize]) -> Result<Option<M::Elem>> {
    let space = model.a_space();
    let odd: Vec<bool> = word.iter().map(|&l| space.is_odd(l)).collect();
    let args: Vec<M::Elem> = word.iter().map(|&l| model.a_elem(l)).collect();
    let mut acc = Acc { model, value: None };
    fn go<M: LieModel>(
        model: &M,
        seed: &Seed<M::Elem>,
        args: &[M::Elem],
        odd: &[bool],
        x: Option<&M::Elem>,
        remaining: &[usize],
        neg: bool,
        acc: &mut Acc<M>,
    ) -> Result<()> {
        if let Some(x) = x {
            if model.is_zero(x) {
                return Ok(());
            }
            if remaining.is_empty() {
                return acc.add(&if neg { -Rational::one() } else { Rational::one() }, x);
            }
        }
        for at in 0..remaining.len() {
            let r = remaining[at];
            let flip = odd[r] && remaining[..at].iter().filter(|&&p| odd[p]).count() % 2 == 1;
            let mut rest = remaining.to_vec();
            rest.remove(at);
            let next = match (x, seed) {
                (Some(x), _) => model.bracket(x, &args[r])?,
                (None, Seed::Map(d)) => d(&args[r])?,
                (None, Seed::Element(_)) => unreachable!("element seeds start with x_0 = m"),
            };
            go(model, seed, args, odd, Some(&next), &rest, neg ^ flip, acc)?;
        }
        Ok(())
    }
    let all: Vec<usize> = (0..word.len()).collect();
    match seed {
        Seed::Element(m) => go(model, seed, &args, &odd, Some(m), &all, false, &mut acc)?,
        Seed::Map(_) => go(model, seed, &args, &odd, None, &all, false, &mut acc)?,
    }
    Ok(acc.value)
}
