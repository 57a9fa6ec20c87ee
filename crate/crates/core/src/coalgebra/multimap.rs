//! Graded-symmetric multilinear maps stored on canonical words.

use std::collections::BTreeMap;

use num_traits::One;

use crate::coalgebra::word::{insert_front, merge, normalize, SymTensor, Word};
use crate::graded::space::Vector;
use crate::scalars::Rational;

/// Values on canonical basis words; missing words map to zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MultiMap {
    entries: BTreeMap<Word, Vector>,
}

impl MultiMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, w: &[usize]) -> Option<&Vector> {
        self.entries.get(w)
    }

    pub fn value(&self, w: &[usize]) -> Vector {
        self.get(w).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, w: Word, v: Vector) {
        if v.is_zero() {
            self.entries.remove(&w);
        } else {
            self.entries.insert(w, v);
        }
    }

    pub fn add(&mut self, w: Word, c: &Rational, v: &Vector) {
        let mut cur = self.entries.remove(&w).unwrap_or_default();
        cur.add_scaled(c, v);
        self.set(w, cur);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &Vector)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Value on basis elements listed in any order.
    pub fn eval_indices(&self, indices: &[usize], odd: &[bool]) -> Vector {
        match normalize(indices, odd) {
            None => Vector::zero(),
            Some((neg, w)) => match self.get(&w) {
                None => Vector::zero(),
                Some(v) if neg => -v,
                Some(v) => v.clone(),
            },
        }
    }

    /// Value on `args[0] ⊙ ... ⊙ args[n-1]`, expanded multilinearly.
    pub fn eval(&self, args: &[&Vector], odd: &[bool]) -> Vector {
        let mut out = Vector::zero();
        let mut idx = Vec::with_capacity(args.len());
        self.eval_rec(args, odd, &mut idx, Rational::one(), &mut out);
        out
    }

    fn eval_rec(&self, args: &[&Vector], odd: &[bool], idx: &mut Vec<usize>, c: Rational, out: &mut Vector) {
        if idx.len() == args.len() {
            if let Some((neg, w)) = normalize(idx, odd) {
                if let Some(v) = self.get(&w) {
                    out.add_scaled(&if neg { -c } else { c }, v);
                }
            }
            return;
        }
        for (i, x) in args[idx.len()].iter() {
            idx.push(i);
            self.eval_rec(args, odd, idx, &c * x, out);
            idx.pop();
        }
    }

    /// Value on `v ⊙ rest` for a canonical word `rest`.
    pub fn eval_front(&self, v: &Vector, rest: &[usize], odd: &[bool]) -> Vector {
        let mut out = Vector::zero();
        for (b, c) in v.iter() {
            if let Some((neg, w)) = insert_front(b, rest, odd) {
                if let Some(val) = self.get(&w) {
                    out.add_scaled(&if neg { -c.clone() } else { c.clone() }, val);
                }
            }
        }
        out
    }

    /// Value on `t ⊙ rest` for a symmetric tensor `t` and canonical word `rest`.
    pub fn eval_tensor_front(&self, t: &SymTensor, rest: &[usize], odd: &[bool]) -> Vector {
        let mut out = Vector::zero();
        for (u, c) in t.iter() {
            if let Some((neg, w)) = merge(u, rest, odd) {
                if let Some(val) = self.get(&w) {
                    out.add_scaled(&if neg { -c.clone() } else { c.clone() }, val);
                }
            }
        }
        out
    }

    pub fn eval_tensor(&self, t: &SymTensor) -> Vector {
        let mut out = Vector::zero();
        for (w, c) in t.iter() {
            if let Some(v) = self.get(w) {
                out.add_scaled(c, v);
            }
        }
        out
    }
}
