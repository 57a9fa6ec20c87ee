//! Canonical words in the symmetric coalgebra and finite symmetric tensors.
//!
//! A word is a nondecreasing list of basis indices standing for the
//! graded-symmetric product of those basis vectors.  An odd index never
//! repeats, since `x ⊙ x = 0` for odd `x`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::graded::space::{GradedSpace, Vector};
use crate::scalars::Rational;

pub type Word = Vec<usize>;

/// Sorts `indices` into canonical order.  Returns `None` if the product
/// vanishes and otherwise the Koszul sign (`true` = negative) and the word.
pub fn normalize(indices: &[usize], odd: &[bool]) -> Option<(bool, Word)> {
    let mut w = indices.to_vec();
    let mut neg = false;
    for i in 1..w.len() {
        let mut j = i;
        while j > 0 && w[j - 1] > w[j] {
            if odd[w[j - 1]] && odd[w[j]] {
                neg = !neg;
            }
            w.swap(j - 1, j);
            j -= 1;
        }
    }
    if w.windows(2).any(|p| p[0] == p[1] && odd[p[0]]) {
        return None;
    }
    Some((neg, w))
}

/// Inserts `b` into the sorted word `rest` as if it stood in front.
pub fn insert_front(b: usize, rest: &[usize], odd: &[bool]) -> Option<(bool, Word)> {
    let pos = rest.partition_point(|&c| c < b);
    if odd[b] && rest.get(pos) == Some(&b) {
        return None;
    }
    let neg = odd[b] && rest[..pos].iter().filter(|&&c| odd[c]).count() % 2 == 1;
    let mut w = Vec::with_capacity(rest.len() + 1);
    w.extend_from_slice(&rest[..pos]);
    w.push(b);
    w.extend_from_slice(&rest[pos..]);
    Some((neg, w))
}

/// Concatenation `u ⊙ v` of two canonical words, re-sorted.
pub fn merge(u: &[usize], v: &[usize], odd: &[bool]) -> Option<(bool, Word)> {
    let mut joined = u.to_vec();
    joined.extend_from_slice(v);
    normalize(&joined, odd)
}

/// All canonical words of length `n`, in lexicographic order.
pub fn words(space: &GradedSpace, n: usize) -> Vec<Word> {
    let odd: Vec<bool> = (0..space.dim()).map(|i| space.is_odd(i)).collect();
    words_over(&(0..space.dim()).collect::<Vec<_>>(), &odd, n)
}

/// Canonical words of length `n` using only the (increasing) `letters`.
pub fn words_over(letters: &[usize], odd: &[bool], n: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fill(letters, odd, n, 0, &mut cur, &mut out);
    out
}

fn fill(letters: &[usize], odd: &[bool], n: usize, start: usize, cur: &mut Word, out: &mut Vec<Word>) {
    if cur.len() == n {
        out.push(cur.clone());
        return;
    }
    for s in start..letters.len() {
        let b = letters[s];
        cur.push(b);
        let next = if odd[b] { s + 1 } else { s };
        fill(letters, odd, n, next, cur, out);
        cur.pop();
    }
}

pub fn word_degree(w: &[usize], space: &GradedSpace) -> i64 {
    w.iter().map(|&i| space.degree(i)).sum()
}

pub fn word_names(w: &[usize], space: &GradedSpace) -> Vec<String> {
    w.iter().map(|&i| space.name(i).to_string()).collect()
}

/// A finite element of the symmetric algebra: canonical words with
/// rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymTensor {
    terms: BTreeMap<Word, Rational>,
}

impl SymTensor {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn unit() -> Self {
        Self::word(Vec::new())
    }

    pub fn word(w: Word) -> Self {
        let mut t = Self::zero();
        t.add(w, Rational::one());
        t
    }

    pub fn add(&mut self, w: Word, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Adds `c · (indices in the given order)`, normalizing the order.
    pub fn add_unsorted(&mut self, indices: &[usize], c: Rational, odd: &[bool]) {
        if let Some((neg, w)) = normalize(indices, odd) {
            self.add(w, if neg { -c } else { c });
        }
    }

    pub fn add_scaled(&mut self, c: &Rational, other: &SymTensor) {
        for (w, x) in &other.terms {
            self.add(w.clone(), c * x);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The component of word length `n`.
    pub fn component(&self, n: usize) -> SymTensor {
        SymTensor { terms: self.terms.iter().filter(|(w, _)| w.len() == n).map(|(w, c)| (w.clone(), c.clone())).collect() }
    }

    /// Vector of the length-one part.
    pub fn linear_part(&self) -> Vector {
        Vector::from_terms(self.terms.iter().filter(|(w, _)| w.len() == 1).map(|(w, c)| (w[0], c.clone())))
    }

    /// Graded-symmetric product of vectors, expanded in canonical words.
    pub fn product(factors: &[&Vector], odd: &[bool]) -> SymTensor {
        let mut out = SymTensor::zero();
        let mut idx = Vec::with_capacity(factors.len());
        expand(factors, odd, &mut idx, Rational::one(), &mut out);
        out
    }

    /// `self ⊙ other`.
    pub fn mul(&self, other: &SymTensor, odd: &[bool]) -> SymTensor {
        let mut out = SymTensor::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                if let Some((neg, w)) = merge(u, v, odd) {
                    let c = a * b;
                    out.add(w, if neg { -c } else { c });
                }
            }
        }
        out
    }
}

fn expand(factors: &[&Vector], odd: &[bool], idx: &mut Vec<usize>, c: Rational, out: &mut SymTensor) {
    if idx.len() == factors.len() {
        out.add_unsorted(idx, c, odd);
        return;
    }
    for (i, x) in factors[idx.len()].iter() {
        idx.push(i);
        expand(factors, odd, idx, &c * x, out);
        idx.pop();
    }
}

pub fn odd_flags(space: &GradedSpace) -> Vec<bool> {
    (0..space.dim()).map(|i| space.is_odd(i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_signs() {
        let odd = [true, true, false];
        assert_eq!(normalize(&[1, 0], &odd), Some((true, vec![0, 1])));
        assert_eq!(normalize(&[2, 0], &odd), Some((false, vec![0, 2])));
        assert_eq!(normalize(&[0, 2, 0], &odd), None);
        assert_eq!(normalize(&[2, 2], &odd), Some((false, vec![2, 2])));
    }

    #[test]
    fn insert_front_agrees_with_normalize() {
        let odd = [true, false, true, true];
        for w in words_over(&[0, 1, 2, 3], &odd, 2) {
            for b in 0..4 {
                let mut full = vec![b];
                full.extend(&w);
                assert_eq!(insert_front(b, &w, &odd), normalize(&full, &odd));
            }
        }
    }

    #[test]
    fn word_counts() {
        let sp = GradedSpace::from_pairs(&[("a", 0), ("b", 1), ("c", 1)]).unwrap();
        // a^2, ab, ac, bc
        assert_eq!(words(&sp, 2).len(), 4);
        assert_eq!(words(&sp, 0), vec![Vec::<usize>::new()]);
    }
}
