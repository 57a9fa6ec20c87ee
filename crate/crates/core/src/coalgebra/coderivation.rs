//! Coderivations of the symmetric coalgebra `SV`, stored by their Taylor
//! coefficients `q_k: V^{⊙k} → V` up to a finite arity window.

use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use crate::coalgebra::multimap::MultiMap;
use crate::coalgebra::word::{insert_front, normalize, odd_flags, word_degree, word_names, words, SymTensor, Word};
use crate::error::{Error, Result};
use crate::graded::sign::{combinations, complement, front_sign};
use crate::graded::space::{GradedSpace, Vector};
use crate::report::{Check, Tally};
use crate::scalars::{sign, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Flavor {
    /// `q_0 = 0`: coderivations of the reduced coalgebra.
    Reduced,
    /// `q_0(1)` may be nonzero.
    Unreduced,
}

/// What is known about the coefficients beyond the stored window: every
/// `q_n` with `n` above the window vanishes on words containing more than
/// `max_count` letters from `directions` (`None` means every basis element).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailBound {
    pub directions: Option<BTreeSet<usize>>,
    pub max_count: usize,
}

impl TailBound {
    /// All coefficients beyond the window are zero.
    pub fn zero() -> Self {
        TailBound { directions: None, max_count: 0 }
    }

    pub fn along(directions: impl IntoIterator<Item = usize>, max_count: usize) -> Self {
        TailBound { directions: Some(directions.into_iter().collect()), max_count }
    }

    pub fn covers(&self, v: &Vector) -> bool {
        match &self.directions {
            None => true,
            Some(d) => v.iter().all(|(i, _)| d.contains(&i)),
        }
    }

    pub fn count_in(&self, w: &[usize]) -> usize {
        match &self.directions {
            None => w.len(),
            Some(d) => w.iter().filter(|i| d.contains(i)).count(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coderivation {
    space: Arc<GradedSpace>,
    odd: Arc<Vec<bool>>,
    degree: i64,
    flavor: Flavor,
    coeffs: Vec<MultiMap>,
    tail: Option<TailBound>,
}

impl Coderivation {
    pub fn new(space: Arc<GradedSpace>, degree: i64, flavor: Flavor, max_arity: usize) -> Self {
        let odd = Arc::new(odd_flags(&space));
        Coderivation { space, odd, degree, flavor, coeffs: vec![MultiMap::new(); max_arity + 1], tail: None }
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn odd(&self) -> &[bool] {
        &self.odd
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
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

    /// Coefficient `k`, or an empty map outside the window.
    pub fn coeff_or_empty(&self, k: usize) -> Option<&MultiMap> {
        self.coeffs.get(k)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(MultiMap::is_empty)
    }

    fn check_word(&self, w: &[usize]) -> Result<()> {
        if w.len() > self.max_arity() {
            return Err(Error::Window { requested: w.len(), available: self.max_arity() });
        }
        if w.is_empty() && self.flavor == Flavor::Reduced {
            return Err(Error::Invalid("arity-0 coefficient on a reduced coderivation".into()));
        }
        if w.iter().any(|&i| i >= self.space.dim()) {
            return Err(Error::SpaceMismatch("word letter outside the space".into()));
        }
        match normalize(w, &self.odd) {
            Some((false, ref c)) if c.as_slice() == w => Ok(()),
            _ => Err(Error::Invalid(format!("{w:?} is not a canonical nonzero word"))),
        }
    }

    /// Sets the value on a canonical word, checking arity, flavor and degree.
    pub fn set(&mut self, w: Word, v: Vector) -> Result<()> {
        self.check_word(&w)?;
        self.space.check_vector(&v)?;
        let want = word_degree(&w, &self.space) + self.degree;
        if let Some((i, _)) = v.iter().find(|(i, _)| self.space.degree(*i) != want) {
            return Err(Error::Degree(format!(
                "value on {:?} contains {} of degree {}, expected {want}",
                word_names(&w, &self.space),
                self.space.name(i),
                self.space.degree(i)
            )));
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

    /// `q_n(args[0] ⊙ ... ⊙ args[n-1])`.
    pub fn eval(&self, args: &[&Vector]) -> Result<Vector> {
        match self.coeffs.get(args.len()) {
            Some(m) => Ok(m.eval(args, &self.odd)),
            None => Err(Error::Window { requested: args.len(), available: self.max_arity() }),
        }
    }

    /// `q_0(1)`.
    pub fn at_unit(&self) -> Vector {
        self.value(&[])
    }

    /// Verifies every stored value has the expected degree.
    pub fn check_degrees(&self) -> Result<()> {
        for m in &self.coeffs {
            for (w, v) in m.iter() {
                let want = word_degree(w, &self.space) + self.degree;
                if v.iter().any(|(i, _)| self.space.degree(i) != want) {
                    return Err(Error::Degree(format!("value on {:?}", word_names(w, &self.space))));
                }
            }
        }
        Ok(())
    }

    pub fn truncated(&self, n: usize) -> Coderivation {
        let mut c = self.clone();
        c.coeffs.truncate(n.min(self.max_arity()) + 1);
        if n < self.max_arity() {
            c.tail = None;
        }
        c
    }

    pub fn unreduced(&self) -> Coderivation {
        let mut c = self.clone();
        c.flavor = Flavor::Unreduced;
        c
    }

    /// Drops the arity-0 coefficient and marks the result reduced.
    pub fn reduced_part(&self) -> Coderivation {
        let mut c = self.clone();
        c.coeffs[0] = MultiMap::new();
        c.flavor = Flavor::Reduced;
        c
    }

    pub fn scaled(&self, s: &Rational) -> Coderivation {
        let mut c = self.clone();
        for m in &mut c.coeffs {
            let mut n = MultiMap::new();
            for (w, v) in m.iter() {
                n.set(w.clone(), v.scaled(s));
            }
            *m = n;
        }
        c
    }

    /// `self + s·other` on the common window.
    pub fn add_scaled(&self, s: &Rational, other: &Coderivation) -> Result<Coderivation> {
        self.compatible(other)?;
        if self.degree != other.degree {
            return Err(Error::Degree("sum of coderivations of different degree".into()));
        }
        let n = self.max_arity().min(other.max_arity());
        let mut c = self.truncated(n);
        if other.flavor == Flavor::Unreduced {
            c.flavor = Flavor::Unreduced;
        }
        for k in 0..=n {
            for (w, v) in other.coeffs[k].iter() {
                c.coeffs[k].add(w.clone(), s, v);
            }
        }
        c.tail = None;
        Ok(c)
    }

    fn compatible(&self, other: &Coderivation) -> Result<()> {
        if Arc::ptr_eq(&self.space, &other.space) || self.space == other.space {
            Ok(())
        } else {
            Err(Error::SpaceMismatch("coderivations live on different spaces".into()))
        }
    }

    /// Coefficientwise comparison up to arity `n`, one check per arity.
    pub fn compare(&self, other: &Coderivation, identity: &str, n: usize) -> Vec<Check> {
        let mut out = Vec::new();
        let top = n.min(self.max_arity()).min(other.max_arity());
        for k in 0..=top {
            let mut t = Tally::new(identity, k);
            let keys: BTreeSet<&Word> = self.coeffs[k].iter().map(|(w, _)| w).chain(other.coeffs[k].iter().map(|(w, _)| w)).collect();
            for w in keys {
                let a = self.coeffs[k].value(w);
                let b = other.coeffs[k].value(w);
                t.record(a == b, || (word_names(w, &self.space), self.space.show(&a), self.space.show(&b)));
            }
            out.push(t.finish());
        }
        if n > top {
            out.push(Check::flag(
                &format!("{identity}/window"),
                false,
                format!("requested arity {n}, available {top}"),
            ));
        }
        out
    }

    pub fn equal_up_to(&self, other: &Coderivation, n: usize) -> bool {
        self.compare(other, "eq", n).iter().all(|c| c.pass)
    }

    /// The full coderivation applied to an element of `SV`.
    pub fn apply(&self, t: &SymTensor) -> Result<SymTensor> {
        let mut out = SymTensor::zero();
        let unit = self.at_unit();
        for (w, c) in t.iter() {
            let i = w.len();
            if i > self.max_arity() {
                return Err(Error::Window { requested: i, available: self.max_arity() });
            }
            for (b, x) in unit.iter() {
                if let Some((neg, u)) = insert_front(b, w, &self.odd) {
                    let s = c * x;
                    out.add(u, if neg { -s } else { s });
                }
            }
            let odd: Vec<bool> = w.iter().map(|&l| self.odd[l]).collect();
            for k in 1..=i {
                for chosen in combinations(i, k) {
                    let sub: Word = chosen.iter().map(|&p| w[p]).collect();
                    let v = self.coeffs[k].value(&sub);
                    if v.is_zero() {
                        continue;
                    }
                    let rest: Word = complement(i, &chosen).iter().map(|&p| w[p]).collect();
                    let s = if front_sign(&odd, &chosen) { -c.clone() } else { c.clone() };
                    for (b, x) in v.iter() {
                        if let Some((neg, u)) = insert_front(b, &rest, &self.odd) {
                            let y = &s * x;
                            out.add(u, if neg { -y } else { y });
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Recovers Taylor coefficients from an action on `SV` by projecting
    /// onto word length one.
    pub fn from_action<F>(space: Arc<GradedSpace>, degree: i64, flavor: Flavor, max_arity: usize, action: F) -> Result<Coderivation>
    where
        F: Fn(&SymTensor) -> Result<SymTensor>,
    {
        let mut c = Coderivation::new(space.clone(), degree, flavor, max_arity);
        let start = if flavor == Flavor::Reduced { 1 } else { 0 };
        for k in start..=max_arity {
            for w in words(&space, k) {
                let img = action(&SymTensor::word(w.clone()))?;
                c.set(w, img.linear_part())?;
            }
        }
        Ok(c)
    }

    /// `σ_v`: the coderivation whose only coefficient is `q_0(1) = v`.
    pub fn section(space: Arc<GradedSpace>, v: &Vector, window: usize) -> Result<Coderivation> {
        let deg = space.homogeneous_degree(v)?.unwrap_or(0);
        let mut c = Coderivation::new(space, deg, Flavor::Unreduced, window);
        c.set(Vec::new(), v.clone())?;
        Ok(c.with_tail(Some(TailBound::zero())))
    }

    /// Words on which some coefficient is nonzero.
    pub fn support(&self) -> HashSet<Word> {
        self.coeffs.iter().flat_map(|m| m.iter().map(|(w, _)| w.clone())).collect()
    }

    /// Restricts to the subspace spanned by `indices` (increasing), which
    /// must be closed under every coefficient.
    pub fn restrict(&self, sub: Arc<GradedSpace>, indices: &[usize]) -> Result<Coderivation> {
        let mut pos = vec![None; self.space.dim()];
        for (k, &i) in indices.iter().enumerate() {
            pos[i] = Some(k);
        }
        let mut c = Coderivation::new(sub, self.degree, self.flavor, self.max_arity());
        for m in &self.coeffs {
            for (w, v) in m.iter() {
                if w.iter().all(|&l| pos[l].is_some()) {
                    if let Some((i, _)) = v.iter().find(|(i, _)| pos[*i].is_none()) {
                        return Err(Error::Axiom(format!(
                            "value on {:?} leaves the subspace through {}",
                            word_names(w, &self.space),
                            self.space.name(i)
                        )));
                    }
                    let nw: Word = w.iter().map(|&l| pos[l].unwrap()).collect();
                    c.set(nw, v.reindex(|i| pos[i]))?;
                }
            }
        }
        Ok(c)
    }
}

/// Nijenhuis–Richardson product `Q•R`, exact on the largest window the
/// inputs determine.
pub fn nr_product(q: &Coderivation, r: &Coderivation) -> Result<Coderivation> {
    q.compatible(r)?;
    if r.flavor == Flavor::Unreduced && q.max_arity() == 0 {
        return Err(Error::Window { requested: 1, available: 0 });
    }
    let window = if r.flavor == Flavor::Unreduced {
        r.max_arity().min(q.max_arity().saturating_sub(1))
    } else {
        r.max_arity().min(q.max_arity())
    };
    let mut out = Coderivation::new(q.space.clone(), q.degree + r.degree, r.flavor, window);
    let start = if r.flavor == Flavor::Unreduced { 0 } else { 1 };
    let odd = &q.odd;
    for i in start..=window {
        for w in words(&q.space, i) {
            let wodd: Vec<bool> = w.iter().map(|&l| odd[l]).collect();
            let mut val = Vector::zero();
            for k in start..=i {
                let qm = &q.coeffs[i - k + 1];
                if qm.is_empty() || r.coeffs[k].is_empty() {
                    continue;
                }
                for chosen in combinations(i, k) {
                    let sub: Word = chosen.iter().map(|&p| w[p]).collect();
                    let Some(rv) = r.coeffs[k].get(&sub) else { continue };
                    let rest: Word = complement(i, &chosen).iter().map(|&p| w[p]).collect();
                    let contrib = qm.eval_front(rv, &rest, odd);
                    val.add_scaled(&sign(front_sign(&wodd, &chosen)), &contrib);
                }
            }
            out.set_raw(w, val);
        }
    }
    Ok(out)
}

/// `[Q, R] = Q•R - (-1)^{|Q||R|} R•Q`.
pub fn nr_bracket(q: &Coderivation, r: &Coderivation) -> Result<Coderivation> {
    let a = nr_product(q, r)?;
    let b = nr_product(r, q)?;
    let s = sign(!(q.degree.rem_euclid(2) == 1 && r.degree.rem_euclid(2) == 1));
    let (a, b) = if a.flavor != b.flavor { (a.unreduced(), b.unreduced()) } else { (a, b) };
    a.add_scaled(&s, &b)
}
