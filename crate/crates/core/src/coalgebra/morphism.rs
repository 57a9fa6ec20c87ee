//! Morphisms of symmetric coalgebras `SV → SW`, given by their Taylor
//! coefficients `f_k: V^{⊙k} → W` of degree zero.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::One;

use crate::coalgebra::coderivation::{Coderivation, Flavor, TailBound};
use crate::coalgebra::multimap::MultiMap;
use crate::coalgebra::word::{odd_flags, word_degree, word_names, words, SymTensor, Word};
use crate::error::{Error, Result};
use crate::graded::sign::{combinations, complement, compositions, front_sign, koszul_odd, multi_unshuffles};
use crate::graded::space::{GradedSpace, LinearMap, Vector};
use crate::report::{Check, Tally};
use crate::scalars::{factorial, sign, Rational};

/// Terms of `F^k_i` on a word with letter parities `odd`:
/// `(1/k!) Σ_{j_1+..+j_k=i} Σ_σ ε f_{j_1}(..) ⊙ ... ⊙ f_{j_k}(..)`.
/// `factor` maps a block of positions to `f_{|block|}` of that sub-word;
/// `None` marks a vanishing factor.  Each returned term is a scalar and
/// the ordered list of factors.
pub fn power_terms<T: Clone>(
    odd: &[bool],
    k: usize,
    mut factor: impl FnMut(&[usize]) -> Option<T>,
) -> Vec<(Rational, Vec<T>)> {
    let i = odd.len();
    let mut memo: HashMap<Vec<usize>, Option<T>> = HashMap::new();
    let mut out = Vec::new();
    let inv = Rational::one() / factorial(k);
    for comp in compositions(i, k) {
        for blocks in multi_unshuffles(&comp) {
            let mut factors = Vec::with_capacity(k);
            let mut zero = false;
            for b in &blocks {
                let f = memo.entry(b.clone()).or_insert_with(|| factor(b)).clone();
                match f {
                    Some(x) => factors.push(x),
                    None => {
                        zero = true;
                        break;
                    }
                }
            }
            if zero {
                continue;
            }
            let perm: Vec<usize> = blocks.concat();
            let c = if koszul_odd(&perm, odd) { -inv.clone() } else { inv.clone() };
            out.push((c, factors));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoalgMorphism {
    source: Arc<GradedSpace>,
    target: Arc<GradedSpace>,
    src_odd: Arc<Vec<bool>>,
    tgt_odd: Arc<Vec<bool>>,
    coeffs: Vec<MultiMap>,
    tail: Option<TailBound>,
}

impl CoalgMorphism {
    pub fn new(source: Arc<GradedSpace>, target: Arc<GradedSpace>, max_arity: usize) -> Self {
        let src_odd = Arc::new(odd_flags(&source));
        let tgt_odd = Arc::new(odd_flags(&target));
        CoalgMorphism { source, target, src_odd, tgt_odd, coeffs: vec![MultiMap::new(); max_arity + 1], tail: None }
    }

    /// The strict morphism with linear part `f`.
    pub fn strict(source: Arc<GradedSpace>, target: Arc<GradedSpace>, f: &LinearMap, max_arity: usize) -> Result<Self> {
        if f.degree() != 0 {
            return Err(Error::Degree("a coalgebra morphism has degree 0".into()));
        }
        f.check_degree(&source, &target)?;
        let mut m = CoalgMorphism::new(source, target, max_arity.max(1));
        for j in 0..f.domain_dim() {
            m.set(vec![j], f.column(j).clone())?;
        }
        Ok(m.with_tail(Some(TailBound::zero())))
    }

    pub fn source(&self) -> &Arc<GradedSpace> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GradedSpace> {
        &self.target
    }

    pub fn max_arity(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn tail(&self) -> Option<&TailBound> {
        self.tail.as_ref()
    }

    pub fn with_tail(mut self, tail: Option<TailBound>) -> Self {
        self.tail = tail;
        self
    }

    pub fn coeff(&self, k: usize) -> &MultiMap {
        &self.coeffs[k]
    }

    pub fn set(&mut self, w: Word, v: Vector) -> Result<()> {
        if w.is_empty() || w.len() > self.max_arity() {
            return Err(Error::Window { requested: w.len(), available: self.max_arity() });
        }
        self.target.check_vector(&v)?;
        let want = word_degree(&w, &self.source);
        if v.iter().any(|(i, _)| self.target.degree(i) != want) {
            return Err(Error::Degree(format!("f on {:?} is not of degree 0", word_names(&w, &self.source))));
        }
        let k = w.len();
        self.coeffs[k].set(w, v);
        Ok(())
    }

    pub(crate) fn set_raw(&mut self, w: Word, v: Vector) {
        let k = w.len();
        self.coeffs[k].set(w, v);
    }

    pub fn value(&self, w: &[usize]) -> Vector {
        self.coeffs.get(w.len()).map(|m| m.value(w)).unwrap_or_default()
    }

    pub fn linear_part(&self) -> LinearMap {
        LinearMap::from_fn(self.source.dim(), self.target.dim(), 0, |j| self.value(&[j]))
    }

    /// `F^k_i` on a canonical source word, as an element of `W^{⊙k}`.
    pub fn power_component(&self, k: usize, w: &[usize]) -> Result<SymTensor> {
        if w.len() > self.max_arity() {
            return Err(Error::Window { requested: w.len(), available: self.max_arity() });
        }
        let wodd: Vec<bool> = w.iter().map(|&l| self.src_odd[l]).collect();
        let terms = power_terms(&wodd, k, |block| {
            let sub: Word = block.iter().map(|&p| w[p]).collect();
            self.coeffs[sub.len()].get(&sub).cloned()
        });
        let mut out = SymTensor::zero();
        for (c, fs) in terms {
            let refs: Vec<&Vector> = fs.iter().collect();
            out.add_scaled(&c, &SymTensor::product(&refs, &self.tgt_odd));
        }
        Ok(out)
    }

    /// `G ∘ F` where `self = G`.
    pub fn compose(&self, f: &CoalgMorphism) -> Result<CoalgMorphism> {
        if *f.target != *self.source {
            return Err(Error::SpaceMismatch("composition of incompatible morphisms".into()));
        }
        let n = self.max_arity().min(f.max_arity());
        let mut out = CoalgMorphism::new(f.source.clone(), self.target.clone(), n);
        for i in 1..=n {
            for w in words(&f.source, i) {
                let mut v = Vector::zero();
                for j in 1..=i {
                    v.add_assign(&self.coeffs[j].eval_tensor(&f.power_component(j, &w)?));
                }
                out.set_raw(w, v);
            }
        }
        Ok(out)
    }

    pub fn compare(&self, other: &CoalgMorphism, identity: &str, n: usize) -> Vec<Check> {
        let top = n.min(self.max_arity()).min(other.max_arity());
        let mut out = Vec::new();
        for k in 1..=top {
            let mut t = Tally::new(identity, k);
            let keys: std::collections::BTreeSet<&Word> =
                self.coeffs[k].iter().map(|(w, _)| w).chain(other.coeffs[k].iter().map(|(w, _)| w)).collect();
            for w in keys {
                let a = self.coeffs[k].value(w);
                let b = other.coeffs[k].value(w);
                t.record(a == b, || (word_names(w, &self.source), self.target.show(&a), self.target.show(&b)));
            }
            out.push(t.finish());
        }
        if n > top {
            out.push(Check::flag(&format!("{identity}/window"), false, format!("requested arity {n}, available {top}")));
        }
        out
    }

    /// Restricts the domain to the span of `indices`, and the codomain to
    /// the span of `target_indices` (values must land there).
    pub fn restrict(
        &self,
        src: Arc<GradedSpace>,
        indices: &[usize],
        tgt: Arc<GradedSpace>,
        target_indices: &[usize],
    ) -> Result<CoalgMorphism> {
        let mut spos = vec![None; self.source.dim()];
        for (k, &i) in indices.iter().enumerate() {
            spos[i] = Some(k);
        }
        let mut tpos = vec![None; self.target.dim()];
        for (k, &i) in target_indices.iter().enumerate() {
            tpos[i] = Some(k);
        }
        let mut out = CoalgMorphism::new(src, tgt, self.max_arity());
        for m in &self.coeffs {
            for (w, v) in m.iter() {
                if w.iter().all(|&l| spos[l].is_some()) {
                    if v.iter().any(|(i, _)| tpos[i].is_none()) {
                        return Err(Error::Axiom(format!(
                            "value on {:?} leaves the target subspace",
                            word_names(w, &self.source)
                        )));
                    }
                    out.set(w.iter().map(|&l| spos[l].unwrap()).collect(), v.reindex(|i| tpos[i]))?;
                }
            }
        }
        Ok(out)
    }
}

/// Both sides of the morphism equation on one canonical source word:
/// `Σ_k f_{i-k+1}(q_k(..) ⊙ ..)` and `Σ_j r_j(F^j_i(..))`.
pub fn morphism_sides(f: &CoalgMorphism, q: &Coderivation, r: &Coderivation, w: &[usize]) -> Result<(Vector, Vector)> {
    let i = w.len();
    let wodd: Vec<bool> = w.iter().map(|&l| f.src_odd[l]).collect();
    let mut lhs = Vector::zero();
    for k in 1..=i {
        for chosen in combinations(i, k) {
            let sub: Word = chosen.iter().map(|&p| w[p]).collect();
            let Some(qv) = q.coeff(k).get(&sub) else { continue };
            let rest: Word = complement(i, &chosen).iter().map(|&p| w[p]).collect();
            let val = f.coeffs[i - k + 1].eval_front(qv, &rest, &f.src_odd);
            lhs.add_scaled(&sign(front_sign(&wodd, &chosen)), &val);
        }
    }
    let mut rhs = Vector::zero();
    for j in 1..=i {
        rhs.add_assign(&r.coeff(j).eval_tensor(&f.power_component(j, w)?));
    }
    Ok((lhs, rhs))
}

/// The morphism equation `F∘Q = R∘F` corestricted to `W`, per arity up to
/// `n`: `Σ_k f_{i-k+1}(q_k(..) ⊙ ..) = Σ_j r_j(F^j_i(..))`.
pub fn check_morphism(f: &CoalgMorphism, q: &Coderivation, r: &Coderivation, n: usize, identity: &str) -> Result<Vec<Check>> {
    if **q.space() != *f.source || **r.space() != *f.target {
        return Err(Error::SpaceMismatch("morphism and structures live on different spaces".into()));
    }
    if q.flavor() != Flavor::Reduced || r.flavor() != Flavor::Reduced {
        return Err(Error::Invalid("morphism equation needs reduced structures".into()));
    }
    let top = n.min(f.max_arity()).min(q.max_arity()).min(r.max_arity());
    let mut out = Vec::new();
    for i in 1..=top {
        let mut t = Tally::new(identity, i);
        for w in words(&f.source, i) {
            let (lhs, rhs) = morphism_sides(f, q, r, &w)?;
            t.record(lhs == rhs, || (word_names(&w, &f.source), f.target.show(&lhs), f.target.show(&rhs)));
        }
        out.push(t.finish());
    }
    if n > top {
        out.push(Check::flag(&format!("{identity}/window"), false, format!("requested arity {n}, available {top}")));
    }
    Ok(out)
}
