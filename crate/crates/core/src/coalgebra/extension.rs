//! L∞[1] extensions of a base `(V, Q)` by a fibre `(W, R)` and the
//! classifying morphisms `V → Σ⁻¹Coder(SW)` that describe them.
//!
//! On `V × W` the basis of `V` comes first, so a canonical word splits as
//! a `V`-part followed by a `W`-part with no reordering sign.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::coalgebra::coderivation::{Coderivation, Flavor};
use crate::coalgebra::word::{word_degree, word_names, words, Word};
use crate::error::{Error, Result};
use crate::graded::space::{GradedSpace, Vector};
use crate::report::{Check, Tally};

/// Taylor coefficients of a classifying morphism, already shifted: the
/// value on a `V`-word `v` of length `i` is the unreduced coderivation
/// `s f_i(v)` of `SW`, of degree `|v| + 1`, stored up to arity
/// `max_arity - i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classifying {
    base: Arc<GradedSpace>,
    fibre: Arc<GradedSpace>,
    max_arity: usize,
    values: BTreeMap<Word, Coderivation>,
}

impl Classifying {
    pub fn new(base: Arc<GradedSpace>, fibre: Arc<GradedSpace>, max_arity: usize) -> Self {
        Classifying { base, fibre, max_arity, values: BTreeMap::new() }
    }

    pub fn base(&self) -> &Arc<GradedSpace> {
        &self.base
    }

    pub fn fibre(&self) -> &Arc<GradedSpace> {
        &self.fibre
    }

    pub fn max_arity(&self) -> usize {
        self.max_arity
    }

    /// An empty coderivation of the right degree and window for `v`.
    pub fn blank(&self, v: &[usize]) -> Coderivation {
        Coderivation::new(
            self.fibre.clone(),
            word_degree(v, &self.base) + 1,
            Flavor::Unreduced,
            self.max_arity - v.len(),
        )
    }

    pub fn set(&mut self, v: Word, c: Coderivation) -> Result<()> {
        if v.is_empty() || v.len() > self.max_arity {
            return Err(Error::Window { requested: v.len(), available: self.max_arity });
        }
        if **c.space() != *self.fibre {
            return Err(Error::SpaceMismatch("classifying value on the wrong space".into()));
        }
        if c.degree() != word_degree(&v, &self.base) + 1 {
            return Err(Error::Degree(format!(
                "classifying value on {:?} has degree {}",
                word_names(&v, &self.base),
                c.degree()
            )));
        }
        if c.max_arity() < self.max_arity - v.len() {
            return Err(Error::Window { requested: self.max_arity - v.len(), available: c.max_arity() });
        }
        let c = c.truncated(self.max_arity - v.len()).unreduced();
        if c.is_zero() {
            self.values.remove(&v);
        } else {
            self.values.insert(v, c);
        }
        Ok(())
    }

    pub fn get(&self, v: &[usize]) -> Option<&Coderivation> {
        self.values.get(v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &Coderivation)> {
        self.values.iter()
    }

    /// Only the linear coefficient is nonzero.
    pub fn is_strict(&self) -> bool {
        self.values.keys().all(|v| v.len() == 1)
    }

    pub fn compare(&self, other: &Classifying, identity: &str) -> Vec<Check> {
        let n = self.max_arity.min(other.max_arity);
        let mut out = Vec::new();
        for i in 1..=n {
            let mut t = Tally::new(identity, i);
            for v in words(&self.base, i) {
                let a = self.get(&v).map(|c| c.truncated(n - i));
                let b = other.get(&v).map(|c| c.truncated(n - i));
                let (a, b) = (a.unwrap_or_else(|| self.blank(&v)), b.unwrap_or_else(|| self.blank(&v)));
                let same = a.equal_up_to(&b, n - i);
                t.record(same, || (word_names(&v, &self.base), "classifying value".into(), "differs".into()));
            }
            out.push(t.finish());
        }
        out
    }
}

fn split(w: &[usize], dv: usize) -> (Word, Word) {
    let cut = w.partition_point(|&l| l < dv);
    (w[..cut].to_vec(), w[cut..].iter().map(|&l| l - dv).collect())
}

fn check_product(total: &GradedSpace, base: &GradedSpace, fibre: &GradedSpace) -> Result<()> {
    let ok = total.dim() == base.dim() + fibre.dim()
        && (0..base.dim()).all(|i| total.degree(i) == base.degree(i))
        && (0..fibre.dim()).all(|j| total.degree(base.dim() + j) == fibre.degree(j));
    if ok {
        Ok(())
    } else {
        Err(Error::SpaceMismatch("total space is not base × fibre".into()))
    }
}

/// Assembles `Θ` on `total = V × W`: pure `V`-words give `(q_i, s f_i(v)_0(1))`,
/// pure `W`-words give `(0, r_j)`, and mixed words give `(0, s f_i(v)_j(w))`.
pub fn extension_from_morphism(
    total: Arc<GradedSpace>,
    q: &Coderivation,
    r: &Coderivation,
    f: &Classifying,
) -> Result<Coderivation> {
    check_product(&total, q.space(), r.space())?;
    if **q.space() != **f.base() || **r.space() != **f.fibre() {
        return Err(Error::SpaceMismatch("classifying morphism does not match base and fibre".into()));
    }
    if q.degree() != 1 || r.degree() != 1 {
        return Err(Error::Degree("base and fibre structures must have degree 1".into()));
    }
    let dv = q.space().dim();
    let n = q.max_arity().min(r.max_arity()).min(f.max_arity());
    let mut theta = Coderivation::new(total.clone(), 1, Flavor::Reduced, n);
    for k in 1..=n {
        for w in words(&total, k) {
            let (v, u) = split(&w, dv);
            let val = if u.is_empty() {
                let mut x = q.value(&v);
                if let Some(c) = f.get(&v) {
                    x.add_assign(&c.at_unit().shifted_indices(dv));
                }
                x
            } else if v.is_empty() {
                r.value(&u).shifted_indices(dv)
            } else {
                f.get(&v).map(|c| c.value(&u).shifted_indices(dv)).unwrap_or_default()
            };
            theta.set(w, val)?;
        }
    }
    Ok(theta)
}

/// `I` spanned by `ideal` is an L∞[1] ideal: every value on a word with a
/// letter in `I` lies in `I`.
pub fn check_ideal(theta: &Coderivation, ideal: &[usize], n: usize, identity: &str) -> Vec<Check> {
    let inside = |i: usize| ideal.binary_search(&i).is_ok();
    let space = theta.space();
    let mut out = Vec::new();
    for k in 1..=n.min(theta.max_arity()) {
        let mut t = Tally::new(identity, k);
        for w in words(space, k) {
            if !w.iter().any(|&l| inside(l)) {
                continue;
            }
            let v = theta.value(&w);
            let outside = v.filter(|i| !inside(i));
            t.record(outside.is_zero(), || (word_names(&w, space), space.show(&outside), "0".into()));
        }
        out.push(t.finish());
    }
    out
}

/// Reads base, fibre and classifying morphism back off an extension whose
/// first `base.dim()` basis vectors span `V`.
pub fn morphism_from_extension(
    theta: &Coderivation,
    base: Arc<GradedSpace>,
    fibre: Arc<GradedSpace>,
) -> Result<(Coderivation, Coderivation, Classifying)> {
    let total = theta.space().clone();
    check_product(&total, &base, &fibre)?;
    let dv = base.dim();
    let n = theta.max_arity();
    let ideal: Vec<usize> = (dv..total.dim()).collect();
    if let Some(c) = check_ideal(theta, &ideal, n, "ideal").into_iter().find(|c| !c.pass) {
        return Err(Error::Axiom(format!("fibre is not an ideal: value on {:?} is {}", c.word, c.lhs)));
    }
    let mut q = Coderivation::new(base.clone(), 1, Flavor::Reduced, n);
    let mut r = Coderivation::new(fibre.clone(), 1, Flavor::Reduced, n);
    let mut f = Classifying::new(base.clone(), fibre.clone(), n);
    let lower = |x: &Vector| x.slice(dv, total.dim());
    for i in 1..=n {
        for v in words(&base, i) {
            let mut c = f.blank(&v);
            let head = theta.value(&v);
            q.set(v.clone(), head.slice(0, dv))?;
            c.set(Vec::new(), lower(&head))?;
            for j in 1..=n - i {
                for u in words(&fibre, j) {
                    let mut w = v.clone();
                    w.extend(u.iter().map(|&l| l + dv));
                    c.set(u, lower(&theta.value(&w)))?;
                }
            }
            f.set(v, c)?;
        }
    }
    for j in 1..=n {
        for u in words(&fibre, j) {
            let w: Word = u.iter().map(|&l| l + dv).collect();
            r.set(u, lower(&theta.value(&w)))?;
        }
    }
    Ok((q, r, f))
}
