//! Derived brackets inside the graded Lie algebra of coderivations of
//! `SV`, split by evaluation at `1`: `A` is the image of `v ↦ σ_v`, `L` the
//! reduced coderivations.  Here `Φ(R) = R`, and the nested brackets
//! `[⋯[Q, σ_v₁]⋯, σ_vᵢ]` give the adjoint morphism of an L∞[1] algebra.

use std::sync::Arc;

use crate::coalgebra::{nr_bracket, words, Coderivation, Flavor};
use crate::error::{Error, Result};
use crate::graded::space::{GradedSpace, Vector};
use crate::hdb::phi::{derived_brackets, LieModel, Seed};
use crate::report::{Check, Tally};
use crate::scalars::Rational;

pub struct CoderModel {
    space: Arc<GradedSpace>,
    window: usize,
}

impl CoderModel {
    /// Sections are stored with the given window.
    pub fn new(space: Arc<GradedSpace>, window: usize) -> Self {
        CoderModel { space, window }
    }

    pub fn sigma(&self, v: &Vector) -> Result<Coderivation> {
        Coderivation::section(self.space.clone(), v, self.window)
    }
}

impl LieModel for CoderModel {
    type Elem = Coderivation;

    fn bracket(&self, x: &Coderivation, y: &Coderivation) -> Result<Coderivation> {
        nr_bracket(x, y)
    }

    fn project(&self, x: &Coderivation) -> Result<Coderivation> {
        self.sigma(&x.at_unit())
    }

    fn is_zero(&self, x: &Coderivation) -> bool {
        x.is_zero()
    }

    fn scaled(&self, c: &Rational, x: &Coderivation) -> Coderivation {
        x.scaled(c)
    }

    fn add(&self, x: &Coderivation, y: &Coderivation) -> Result<Coderivation> {
        x.add_scaled(&Rational::from_integer(1.into()), y)
    }

    fn a_space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    fn a_elem(&self, i: usize) -> Coderivation {
        self.sigma(&Vector::basis(i)).expect("basis vectors are homogeneous")
    }

    fn a_coords(&self, x: &Coderivation) -> Result<Vector> {
        if x.support().iter().any(|w| !w.is_empty()) {
            return Err(Error::Axiom("element is not a section σ_v".into()));
        }
        Ok(x.at_unit())
    }
}

/// `Φ(R)` computed by nested coderivation brackets, compared with `R`.
pub fn verify_phi_identity(r: &Coderivation, identity: &str) -> Result<Vec<Check>> {
    let n = r.max_arity();
    let model = CoderModel::new(r.space().clone(), n + 1);
    let r = r.unreduced();
    let phi = derived_brackets(&model, &Seed::Element(&r), r.degree(), n)?;
    Ok(phi.compare(&r, identity, n))
}

/// `s·Ad_i(v₁ ⊙ ⋯ ⊙ vᵢ) = [⋯[Q, σ_v₁]⋯, σ_vᵢ] − σ_{qᵢ(v₁ ⊙ ⋯ ⊙ vᵢ)}` for
/// basis words, as reduced coderivations of the window left after the
/// brackets.
pub fn adjoint(q: &Coderivation, word: &[usize]) -> Result<Coderivation> {
    let n = q.max_arity();
    if word.len() > n {
        return Err(Error::Window { requested: word.len(), available: n });
    }
    let model = CoderModel::new(q.space().clone(), n + 1);
    let mut x = q.unreduced();
    for &v in word {
        x = nr_bracket(&x, &model.a_elem(v))?;
    }
    let qv = q.value(word);
    let s = if qv.is_zero() { x } else { x.add_scaled(&Rational::from_integer((-1).into()), &model.sigma(&qv)?)? };
    if !s.at_unit().is_zero() {
        return Err(Error::Axiom("the adjoint has a nonzero constant term".into()));
    }
    Ok(s.reduced_part())
}

/// `s·Ad_i(v)_k(w) = q_{i+k}(v ⊙ w)` for every basis word `v` of length
/// `i ≥ 1` and `w` of length `k ≥ 1` with `i + k` within the window.
pub fn verify_adjoint(q: &Coderivation, identity: &str) -> Result<Vec<Check>> {
    if q.flavor() != Flavor::Reduced {
        return Err(Error::Invalid("the adjoint is defined for reduced structures".into()));
    }
    let n = q.max_arity();
    let space = q.space();
    let mut out = Vec::new();
    for i in 1..n {
        let mut t = Tally::new(identity, i);
        for v in words(space, i) {
            let ad = adjoint(q, &v)?;
            for k in 1..=(n - i) {
                for w in words(space, k) {
                    let lhs = ad.value(&w);
                    let rhs = q.coeff(i + k).eval_indices(&[v.clone(), w.clone()].concat(), q.odd());
                    t.record(lhs == rhs, || {
                        let mut names: Vec<String> = v.iter().map(|&l| space.name(l).to_string()).collect();
                        names.push("|".into());
                        names.extend(w.iter().map(|&l| space.name(l).to_string()));
                        (names, space.show(&lhs), space.show(&rhs))
                    });
                }
            }
        }
        out.push(t.finish());
    }
    Ok(out)
}
