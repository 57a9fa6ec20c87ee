//! Homotopy retraction data and transfer of L∞[1] structures along it.

pub mod hpl;
pub mod section5;

#[cfg(test)]
mod tests;

use std::sync::Arc;

use num_traits::One;

use crate::coalgebra::{check_linfty, check_morphism, words, CoalgMorphism, Coderivation, Flavor};
use crate::error::{Error, Result};
use crate::graded::space::{GradedSpace, LinearMap, Vector};
use crate::report::{Check, Tally};
use crate::scalars::Rational;

pub use hpl::right_inverse;
pub use section5::{generalized_brackets_via_transfer, DerivationAlgebra, Section5};

/// `π: V → W`, `f₁: W → V` and `K: V → V` of degree `-1`, between the dg
/// spaces `(V, q₁)` and `(W, r₁)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RetractionData {
    pub big: Arc<GradedSpace>,
    pub small: Arc<GradedSpace>,
    pub q1: LinearMap,
    pub r1: LinearMap,
    pub pi: LinearMap,
    pub f1: LinearMap,
    pub k: LinearMap,
}

#[derive(Clone, Debug)]
pub struct TransferResult {
    pub r: Coderivation,
    pub f: CoalgMorphism,
}

/// One check per basis element of the domain: `lhs` and `rhs` agree.
pub fn compare_maps(identity: &str, lhs: &LinearMap, rhs: &LinearMap, dom: &GradedSpace, cod: &GradedSpace) -> Check {
    let mut t = Tally::new(identity, 1);
    for j in 0..dom.dim() {
        let (a, b) = (lhs.column(j), rhs.column(j));
        t.record(a == b, || (vec![dom.name(j).to_string()], cod.show(a), cod.show(b)));
    }
    t.finish()
}

impl RetractionData {
    /// Checks sizes and degrees of the five maps.
    pub fn new(
        big: Arc<GradedSpace>,
        small: Arc<GradedSpace>,
        q1: LinearMap,
        r1: LinearMap,
        pi: LinearMap,
        f1: LinearMap,
        k: LinearMap,
    ) -> Result<RetractionData> {
        let want = [("q1", &q1, 1), ("r1", &r1, 1), ("pi", &pi, 0), ("f1", &f1, 0), ("K", &k, -1)];
        for (name, m, deg) in want {
            if m.degree() != deg {
                return Err(Error::Degree(format!("{name} has degree {}, expected {deg}", m.degree())));
            }
        }
        q1.check_degree(&big, &big)?;
        r1.check_degree(&small, &small)?;
        pi.check_degree(&big, &small)?;
        f1.check_degree(&small, &big)?;
        k.check_degree(&big, &big)?;
        Ok(RetractionData { big, small, q1, r1, pi, f1, k })
    }

    /// `V = W`, `π = f₁ = id`, `K = 0`.
    pub fn trivial(space: Arc<GradedSpace>, q1: LinearMap) -> Result<RetractionData> {
        let n = space.dim();
        let id = LinearMap::identity(n);
        RetractionData::new(space.clone(), space, q1.clone(), q1, id.clone(), id, LinearMap::zero(n, n, -1))
    }

    /// `πf₁ = id`, `Kq₁ + q₁K = f₁π - id`, and that `π`, `f₁` are chain maps.
    pub fn validate(&self) -> Result<Vec<Check>> {
        let (v, w) = (&*self.big, &*self.small);
        let mut out = Vec::new();
        out.push(compare_maps("retraction_pi_f1", &self.pi.compose(&self.f1)?, &LinearMap::identity(w.dim()), w, w));
        let mut lhs = self.k.compose(&self.q1)?;
        lhs.add_scaled(&Rational::one(), &self.q1.compose(&self.k)?)?;
        let mut rhs = self.f1.compose(&self.pi)?;
        rhs.add_scaled(&-Rational::one(), &LinearMap::identity(v.dim()))?;
        out.push(compare_maps("retraction_homotopy", &lhs, &rhs.with_degree(0), v, v));
        out.push(compare_maps("retraction_pi_chain", &self.pi.compose(&self.q1)?, &self.r1.compose(&self.pi)?, v, w));
        out.push(compare_maps("retraction_f1_chain", &self.q1.compose(&self.f1)?, &self.f1.compose(&self.r1)?, w, v));
        Ok(out)
    }

    pub fn is_valid(&self) -> Result<bool> {
        Ok(self.validate()?.iter().all(|c| c.pass))
    }

    /// `πK = 0`, `Kf₁ = 0`, `K² = 0`.
    pub fn side_conditions(&self) -> Result<Vec<Check>> {
        let (v, w) = (&*self.big, &*self.small);
        Ok(vec![
            compare_maps("side_pi_k", &self.pi.compose(&self.k)?, &LinearMap::zero(v.dim(), w.dim(), -1), v, w),
            compare_maps("side_k_f1", &self.k.compose(&self.f1)?, &LinearMap::zero(w.dim(), v.dim(), -1), w, v),
            compare_maps("side_k_k", &self.k.compose(&self.k)?, &LinearMap::zero(v.dim(), v.dim(), -2), v, v),
        ])
    }
}

pub(crate) fn require_structure(q: &Coderivation, data: &RetractionData) -> Result<()> {
    if **q.space() != *data.big {
        return Err(Error::SpaceMismatch("the structure does not live on the big space".into()));
    }
    if q.degree() != 1 || q.flavor() != Flavor::Reduced {
        return Err(Error::Invalid("transfer needs a reduced structure of degree 1".into()));
    }
    let lin = LinearMap::from_fn(data.big.dim(), data.big.dim(), 1, |j| q.value(&[j]));
    if lin != data.q1 {
        let j = (0..data.big.dim()).find(|&j| lin.column(j) != data.q1.column(j)).unwrap_or(0);
        return Err(Error::Invalid(format!(
            "q_1 of the structure differs from the retraction differential on {}",
            data.big.name(j)
        )));
    }
    Ok(())
}

/// `Σ_{j≥2} q_j(F^j_i(w))`.
fn q_plus_f(q: &Coderivation, f: &CoalgMorphism, w: &[usize]) -> Result<Vector> {
    let mut v = Vector::zero();
    for j in 2..=w.len().min(q.max_arity()) {
        if q.coeff(j).is_empty() {
            continue;
        }
        v.add_assign(&q.coeff(j).eval_tensor(&f.power_component(j, w)?));
    }
    Ok(v)
}

/// The unique `F` with `pF = f₁ + Kq₊F` and `pR = r₁ + πq₊F`, by
/// induction on arity up to `n`.
pub fn transfer(q: &Coderivation, data: &RetractionData, n: usize) -> Result<TransferResult> {
    require_structure(q, data)?;
    if n > q.max_arity() {
        return Err(Error::Window { requested: n, available: q.max_arity() });
    }
    let (big, small) = (data.big.clone(), data.small.clone());
    let mut f = CoalgMorphism::new(small.clone(), big, n.max(1));
    let mut r = Coderivation::new(small.clone(), 1, Flavor::Reduced, n.max(1));
    for j in 0..small.dim() {
        f.set(vec![j], data.f1.column(j).clone())?;
        r.set(vec![j], data.r1.column(j).clone())?;
    }
    for i in 2..=n {
        for w in words(&small, i) {
            let v = q_plus_f(q, &f, &w)?;
            if v.is_zero() {
                continue;
            }
            f.set(w.clone(), data.k.apply(&v))?;
            r.set(w, data.pi.apply(&v))?;
        }
    }
    Ok(TransferResult { r, f })
}

/// Re-checks both fixed-point equations word by word, `R•R = 0` when
/// `Q•Q = 0`, and the morphism equation `FR = QF`.
pub fn verify_transfer(q: &Coderivation, data: &RetractionData, res: &TransferResult, n: usize, id: &str) -> Result<Vec<Check>> {
    let small = &data.small;
    let n = n.min(res.f.max_arity());
    let mut out = Vec::new();
    for i in 1..=n {
        let mut tf = Tally::new(&format!("{id}/fixed_point_f"), i);
        let mut tr = Tally::new(&format!("{id}/fixed_point_r"), i);
        for w in words(small, i) {
            let (ef, er) = if i == 1 {
                (data.f1.column(w[0]).clone(), data.r1.column(w[0]).clone())
            } else {
                let v = q_plus_f(q, &res.f, &w)?;
                (data.k.apply(&v), data.pi.apply(&v))
            };
            let (af, ar) = (res.f.value(&w), res.r.value(&w));
            let names = || w.iter().map(|&l| small.name(l).to_string()).collect::<Vec<_>>();
            tf.record(af == ef, || (names(), data.big.show(&af), data.big.show(&ef)));
            tr.record(ar == er, || (names(), small.show(&ar), small.show(&er)));
        }
        out.push(tf.finish());
        out.push(tr.finish());
    }
    out.extend(check_linfty(&res.r, n, &format!("{id}/linfty"))?);
    out.extend(check_morphism(&res.f, &res.r, q, n, &format!("{id}/morphism"))?);
    Ok(out)
}
