use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalars::{format_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasisElem {
    pub name: String,
    pub degree: i64,
}

/// A finite-dimensional graded vector space with named basis elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSpace {
    basis: Vec<BasisElem>,
    index: BTreeMap<String, usize>,
}

impl GradedSpace {
    pub fn new(basis: Vec<BasisElem>) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, b) in basis.iter().enumerate() {
            if b.name.is_empty() {
                return Err(Error::Invalid("empty basis name".into()));
            }
            if index.insert(b.name.clone(), i).is_some() {
                return Err(Error::DuplicateName(b.name.clone()));
            }
        }
        Ok(Self { basis, index })
    }

    /// Convenience constructor for tests and built-in fixtures.
    pub fn from_pairs(pairs: &[(&str, i64)]) -> Result<Self> {
        Self::new(
            pairs
                .iter()
                .map(|(n, d)| BasisElem { name: n.to_string(), degree: *d })
                .collect(),
        )
    }

    pub fn empty() -> Self {
        Self { basis: Vec::new(), index: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElem] {
        &self.basis
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.basis[i].degree
    }

    pub fn is_odd(&self, i: usize) -> bool {
        self.basis[i].degree.rem_euclid(2) == 1
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.basis.iter().map(|b| b.degree).collect()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.basis[i].name
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    /// Same basis, names prefixed with `tag:` and degrees moved by `shift`.
    pub fn tagged(&self, tag: &str, shift: i64) -> GradedSpace {
        GradedSpace::new(
            self.basis
                .iter()
                .map(|b| BasisElem { name: format!("{tag}:{}", b.name), degree: b.degree + shift })
                .collect(),
        )
        .expect("tagging preserves distinct names")
    }

    /// Concatenation of the given spaces; returns the offset of each summand.
    pub fn direct_sum(parts: &[&GradedSpace]) -> Result<(GradedSpace, Vec<usize>)> {
        let mut basis = Vec::new();
        let mut offsets = Vec::new();
        for p in parts {
            offsets.push(basis.len());
            basis.extend(p.basis.iter().cloned());
        }
        Ok((GradedSpace::new(basis)?, offsets))
    }

    /// Subspace spanned by the listed basis elements, in the listed order.
    pub fn restrict(&self, indices: &[usize]) -> GradedSpace {
        GradedSpace::new(indices.iter().map(|&i| self.basis[i].clone()).collect())
            .expect("subset of distinct names")
    }

    pub fn indices_of_degree(&self, d: i64) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degree(i) == d).collect()
    }

    pub fn check_vector(&self, v: &Vector) -> Result<()> {
        match v.max_index() {
            Some(i) if i >= self.dim() => Err(Error::SpaceMismatch(format!(
                "basis index {i} outside a space of dimension {}",
                self.dim()
            ))),
            _ => Ok(()),
        }
    }

    /// Degree of a nonzero homogeneous vector; `None` for zero, error if mixed.
    pub fn homogeneous_degree(&self, v: &Vector) -> Result<Option<i64>> {
        self.check_vector(v)?;
        let mut deg = None;
        for (i, _) in v.iter() {
            let d = self.degree(i);
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => {
                    return Err(Error::Degree(format!("vector mixes degrees {e} and {d}")))
                }
                _ => {}
            }
        }
        Ok(deg)
    }

    pub fn show(&self, v: &Vector) -> String {
        if v.is_zero() {
            return "0".into();
        }
        v.iter()
            .map(|(i, c)| format!("{}*{}", format_rational(c), self.name(i)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Sparse coordinate vector; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vector {
    terms: BTreeMap<usize, Rational>,
}

impl Vector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(i: usize) -> Self {
        Self::term(i, Rational::one())
    }

    pub fn term(i: usize, c: Rational) -> Self {
        let mut v = Self::zero();
        v.add_term(i, c);
        v
    }

    pub fn from_terms<I: IntoIterator<Item = (usize, Rational)>>(terms: I) -> Self {
        let mut v = Self::zero();
        for (i, c) in terms {
            v.add_term(i, c);
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.terms.len()
    }

    pub fn get(&self, i: usize) -> Rational {
        self.terms.get(&i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeff(&self, i: usize) -> Option<&Rational> {
        self.terms.get(&i)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rational)> + '_ {
        self.terms.iter().map(|(i, c)| (*i, c))
    }

    pub fn max_index(&self) -> Option<usize> {
        self.terms.keys().next_back().copied()
    }

    pub fn add_term(&mut self, i: usize, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(i) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, c: &Rational, other: &Vector) {
        if c.is_zero() {
            return;
        }
        for (i, x) in other.iter() {
            self.add_term(i, c * x);
        }
    }

    pub fn add_assign(&mut self, other: &Vector) {
        for (i, x) in other.iter() {
            self.add_term(i, x.clone());
        }
    }

    pub fn scaled(&self, c: &Rational) -> Vector {
        if c.is_zero() {
            return Vector::zero();
        }
        Vector { terms: self.terms.iter().map(|(i, x)| (*i, x * c)).collect() }
    }

    /// Moves coordinates through `f`; coordinates mapped to `None` are dropped.
    pub fn reindex(&self, f: impl Fn(usize) -> Option<usize>) -> Vector {
        Vector::from_terms(self.iter().filter_map(|(i, c)| f(i).map(|j| (j, c.clone()))))
    }

    pub fn shifted_indices(&self, offset: usize) -> Vector {
        self.reindex(|i| Some(i + offset))
    }

    /// Keeps only coordinates in `lo..hi`, renumbered from zero.
    pub fn slice(&self, lo: usize, hi: usize) -> Vector {
        Vector::from_terms(
            self.terms.range(lo..hi).map(|(i, c)| (i - lo, c.clone())),
        )
    }

    pub fn filter(&self, keep: impl Fn(usize) -> bool) -> Vector {
        Vector { terms: self.terms.iter().filter(|(i, _)| keep(**i)).map(|(i, c)| (*i, c.clone())).collect() }
    }
}

impl Add<&Vector> for &Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        let mut v = self.clone();
        v.add_assign(rhs);
        v
    }
}

impl Sub<&Vector> for &Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        let mut v = self.clone();
        v.add_scaled(&-Rational::one(), rhs);
        v
    }
}

impl Neg for &Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        self.scaled(&-Rational::one())
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.iter().map(|(i, c)| format!("{}*e{}", format_rational(c), i)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A linear map between coordinate spaces, stored as the images of the
/// domain basis.  `degree` is used for Koszul signs and commutators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    domain_dim: usize,
    codomain_dim: usize,
    degree: i64,
    cols: Vec<Vector>,
}

impl LinearMap {
    pub fn new(domain_dim: usize, codomain_dim: usize, degree: i64, cols: Vec<Vector>) -> Result<Self> {
        if cols.len() != domain_dim {
            return Err(Error::SpaceMismatch(format!(
                "{} columns for a domain of dimension {domain_dim}",
                cols.len()
            )));
        }
        for c in &cols {
            if let Some(i) = c.max_index() {
                if i >= codomain_dim {
                    return Err(Error::SpaceMismatch(format!(
                        "image coordinate {i} outside codomain of dimension {codomain_dim}"
                    )));
                }
            }
        }
        Ok(Self { domain_dim, codomain_dim, degree, cols })
    }

    pub fn from_fn(domain_dim: usize, codomain_dim: usize, degree: i64, f: impl Fn(usize) -> Vector) -> Self {
        Self::new(domain_dim, codomain_dim, degree, (0..domain_dim).map(f).collect())
            .expect("from_fn produced an out-of-range image")
    }

    pub fn zero(domain_dim: usize, codomain_dim: usize, degree: i64) -> Self {
        Self { domain_dim, codomain_dim, degree, cols: vec![Vector::zero(); domain_dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, dim, 0, Vector::basis)
    }

    pub fn domain_dim(&self) -> usize {
        self.domain_dim
    }

    pub fn codomain_dim(&self) -> usize {
        self.codomain_dim
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn is_odd(&self) -> bool {
        self.degree.rem_euclid(2) == 1
    }

    pub fn column(&self, j: usize) -> &Vector {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[Vector] {
        &self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> Rational {
        self.cols[j].get(i)
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        let mut out = Vector::zero();
        for (j, c) in v.iter() {
            out.add_scaled(c, &self.cols[j]);
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinearMap) -> Result<LinearMap> {
        if other.codomain_dim != self.domain_dim {
            return Err(Error::SpaceMismatch("composition of incompatible maps".into()));
        }
        Ok(LinearMap {
            domain_dim: other.domain_dim,
            codomain_dim: self.codomain_dim,
            degree: self.degree + other.degree,
            cols: other.cols.iter().map(|c| self.apply(c)).collect(),
        })
    }

    pub fn add_scaled(&mut self, c: &Rational, other: &LinearMap) -> Result<()> {
        if other.domain_dim != self.domain_dim || other.codomain_dim != self.codomain_dim {
            return Err(Error::SpaceMismatch("sum of maps with different shapes".into()));
        }
        for (a, b) in self.cols.iter_mut().zip(&other.cols) {
            a.add_scaled(c, b);
        }
        Ok(())
    }

    pub fn scaled(&self, c: &Rational) -> LinearMap {
        LinearMap {
            domain_dim: self.domain_dim,
            codomain_dim: self.codomain_dim,
            degree: self.degree,
            cols: self.cols.iter().map(|v| v.scaled(c)).collect(),
        }
    }

    /// Graded commutator `self∘other - (-1)^{|self||other|} other∘self`.
    pub fn commutator(&self, other: &LinearMap) -> Result<LinearMap> {
        let mut out = self.compose(other)?;
        let back = other.compose(self)?;
        let s = if self.is_odd() && other.is_odd() { Rational::one() } else { -Rational::one() };
        out.add_scaled(&s, &back)?;
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vector::is_zero)
    }

    /// Checks that every column is homogeneous of degree `deg(source) + degree`.
    pub fn check_degree(&self, dom: &GradedSpace, cod: &GradedSpace) -> Result<()> {
        if dom.dim() != self.domain_dim || cod.dim() != self.codomain_dim {
            return Err(Error::SpaceMismatch("map shape does not match the spaces".into()));
        }
        for (j, c) in self.cols.iter().enumerate() {
            for (i, _) in c.iter() {
                if cod.degree(i) != dom.degree(j) + self.degree {
                    return Err(Error::Degree(format!(
                        "map of degree {} sends {} (degree {}) to {} (degree {})",
                        self.degree,
                        dom.name(j),
                        dom.degree(j),
                        cod.name(i),
                        cod.degree(i)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn with_degree(mut self, degree: i64) -> LinearMap {
        self.degree = degree;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::int;

    #[test]
    fn vectors_drop_zeros() {
        let mut v = Vector::basis(2);
        v.add_term(2, int(-1));
        assert!(v.is_zero());
        let w = Vector::from_terms([(0, int(1)), (0, int(2)), (3, int(0))]);
        assert_eq!(w.nnz(), 1);
        assert_eq!(w.get(0), int(3));
    }

    #[test]
    fn duplicate_names_rejected() {
        assert!(GradedSpace::from_pairs(&[("x", 0), ("x", 1)]).is_err());
    }

    #[test]
    fn commutator_of_odd_maps_is_anticommutator() {
        let d = LinearMap::new(2, 2, 1, vec![Vector::basis(1), Vector::zero()]).unwrap();
        let c = d.commutator(&d).unwrap();
        assert!(c.is_zero());
        let e = LinearMap::new(2, 2, 1, vec![Vector::zero(), Vector::basis(0)]).unwrap();
        let c = d.commutator(&e).unwrap();
        assert_eq!(c, LinearMap::identity(2).with_degree(2));
    }
}
