//! Exact Gaussian elimination on sparse rational vectors.

use std::collections::BTreeMap;

use num_traits::One;

use crate::graded::space::{LinearMap, Vector};
use crate::scalars::Rational;

#[derive(Clone, Debug)]
struct Row {
    vec: Vector,
    combo: Vector,
}

/// Incrementally built row-echelon basis.  Every inserted vector gets an
/// input id; stored rows remember which combination of inputs they are, so
/// the basis also answers solve and kernel queries.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: BTreeMap<usize, Row>,
    inputs: usize,
    kernel: Vec<Vector>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    /// Input combinations that sum to zero; a basis of the relation space.
    pub fn kernel(&self) -> &[Vector] {
        &self.kernel
    }

    /// Returns `(residual, combo)` with `v = residual + Σ combo_j input_j`.
    pub fn reduce(&self, v: &Vector) -> (Vector, Vector) {
        let mut r = v.clone();
        let mut combo = Vector::zero();
        let mut cursor = 0usize;
        loop {
            let next = r
                .iter()
                .filter(|(i, _)| *i >= cursor)
                .find(|(i, _)| self.rows.contains_key(i))
                .map(|(i, c)| (i, c.clone()));
            let Some((p, c)) = next else { break };
            let row = &self.rows[&p];
            r.add_scaled(&-c.clone(), &row.vec);
            combo.add_scaled(&c, &row.combo);
            cursor = p + 1;
        }
        (r, combo)
    }

    /// Inserts `v`; returns whether it was independent of the earlier inputs.
    pub fn insert(&mut self, v: &Vector) -> bool {
        let id = self.inputs;
        self.inputs += 1;
        let (r, combo) = self.reduce(v);
        let mut own = Vector::basis(id);
        own.add_scaled(&-Rational::one(), &combo);
        let lead = r.iter().next().map(|(i, c)| (i, c.clone()));
        match lead {
            None => {
                self.kernel.push(own);
                false
            }
            Some((p, lead)) => {
                let inv = Rational::one() / lead;
                self.rows.insert(p, Row { vec: r.scaled(&inv), combo: own.scaled(&inv) });
                true
            }
        }
    }

    pub fn contains(&self, v: &Vector) -> bool {
        self.reduce(v).0.is_zero()
    }

    /// Coefficients `x` over the inputs with `Σ x_j input_j = v`, if any.
    pub fn solve(&self, v: &Vector) -> Option<Vector> {
        let (r, combo) = self.reduce(v);
        r.is_zero().then_some(combo)
    }
}

pub fn rank(vectors: &[Vector]) -> usize {
    let mut e = Echelon::new();
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

/// Basis of the kernel of the map whose columns are given.
pub fn kernel(columns: &[Vector]) -> Vec<Vector> {
    let mut e = Echelon::new();
    for c in columns {
        e.insert(c);
    }
    e.kernel().to_vec()
}

pub fn map_kernel(m: &LinearMap) -> Vec<Vector> {
    kernel(m.columns())
}

/// A particular solution `x` of `Σ x_j columns_j = rhs`.
pub fn solve(columns: &[Vector], rhs: &Vector) -> Option<Vector> {
    let mut e = Echelon::new();
    for c in columns {
        e.insert(c);
    }
    e.solve(rhs)
}

/// A basis (subset of the inputs) of the span of `vectors`.
pub fn span_basis(vectors: &[Vector]) -> Vec<Vector> {
    let mut e = Echelon::new();
    vectors.iter().filter(|v| e.insert(v)).cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::int;

    fn v(xs: &[i64]) -> Vector {
        Vector::from_terms(xs.iter().enumerate().map(|(i, &x)| (i, int(x))))
    }

    #[test]
    fn rank_kernel_solve() {
        let cols = vec![v(&[1, 2, 3]), v(&[2, 4, 6]), v(&[0, 1, 1]), v(&[1, 3, 4])];
        assert_eq!(rank(&cols), 2);
        let k = kernel(&cols);
        assert_eq!(k.len(), 2);
        for kv in &k {
            let mut s = Vector::zero();
            for (j, c) in kv.iter() {
                s.add_scaled(c, &cols[j]);
            }
            assert!(s.is_zero());
        }
        let x = solve(&cols, &v(&[1, 1, 2])).unwrap();
        let mut s = Vector::zero();
        for (j, c) in x.iter() {
            s.add_scaled(c, &cols[j]);
        }
        assert_eq!(s, v(&[1, 1, 2]));
        assert!(solve(&cols, &v(&[0, 0, 1])).is_none());
    }
}
