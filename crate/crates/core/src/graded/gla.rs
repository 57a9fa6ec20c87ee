//! Graded Lie algebras given by structure constants, their splittings
//! `M = L ⊕ A`, and derivations relative to `L`.

use num_traits::One;

use crate::error::{Error, Result};
use crate::graded::linalg::Echelon;
use crate::graded::space::{GradedSpace, LinearMap, Vector};
use crate::report::{Check, Tally};
use crate::scalars::{sign, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Part {
    L,
    A,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gla {
    space: GradedSpace,
    table: Vec<Vector>,
    differential: Option<LinearMap>,
    parts: Option<Vec<Part>>,
}

impl Gla {
    /// Builds the bracket from entries `[e_i, e_j] = value`.  The opposite
    /// order is filled in by graded antisymmetry; contradicting entries are
    /// rejected.
    pub fn new(space: GradedSpace, entries: Vec<(usize, usize, Vector)>) -> Result<Gla> {
        let n = space.dim();
        let mut table: Vec<Option<Vector>> = vec![None; n * n];
        for (i, j, v) in entries {
            if i >= n || j >= n {
                return Err(Error::SpaceMismatch(format!("bracket entry ({i}, {j}) out of range")));
            }
            space.check_vector(&v)?;
            let s = sign(!(space.is_odd(i) && space.is_odd(j)));
            let mirrored = v.scaled(&s);
            for (a, b, val) in [(i, j, v), (j, i, mirrored)] {
                match &table[a * n + b] {
                    Some(old) if *old != val => {
                        return Err(Error::Axiom(format!(
                            "conflicting or non-antisymmetric entries for [{}, {}]",
                            space.name(a),
                            space.name(b)
                        )))
                    }
                    _ => table[a * n + b] = Some(val),
                }
            }
        }
        Ok(Gla {
            space,
            table: table.into_iter().map(Option::unwrap_or_default).collect(),
            differential: None,
            parts: None,
        })
    }

    pub fn abelian(space: GradedSpace) -> Gla {
        Gla::new(space, Vec::new()).expect("empty bracket is valid")
    }

    pub fn with_differential(mut self, d: LinearMap) -> Result<Gla> {
        if d.degree() != 1 {
            return Err(Error::Degree(format!("differential has degree {}", d.degree())));
        }
        d.check_degree(&self.space, &self.space)?;
        self.differential = Some(d);
        Ok(self)
    }

    pub fn without_differential(mut self) -> Gla {
        self.differential = None;
        self
    }

    pub fn with_parts(mut self, parts: Vec<Part>) -> Result<Gla> {
        if parts.len() != self.dim() {
            return Err(Error::SpaceMismatch("splitting does not cover the basis".into()));
        }
        self.parts = Some(parts);
        Ok(self)
    }

    pub fn without_parts(mut self) -> Gla {
        self.parts = None;
        self
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.space.degree(i)
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> &Vector {
        &self.table[i * self.dim() + j]
    }

    pub fn bracket(&self, x: &Vector, y: &Vector) -> Vector {
        let mut out = Vector::zero();
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                let e = self.bracket_basis(i, j);
                if !e.is_zero() {
                    out.add_scaled(&(a * b), e);
                }
            }
        }
        out
    }

    /// `[x, e_j]`.
    pub fn bracket_with_basis(&self, x: &Vector, j: usize) -> Vector {
        let mut out = Vector::zero();
        for (i, a) in x.iter() {
            let e = self.bracket_basis(i, j);
            if !e.is_zero() {
                out.add_scaled(a, e);
            }
        }
        out
    }

    /// Nonzero entries `[e_i, e_j]` with `i <= j`.
    pub fn entries(&self) -> Vec<(usize, usize, Vector)> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i..n {
                let v = self.bracket_basis(i, j);
                if !v.is_zero() {
                    out.push((i, j, v.clone()));
                }
            }
        }
        out
    }

    pub fn differential(&self) -> Option<&LinearMap> {
        self.differential.as_ref()
    }

    pub fn d(&self, x: &Vector) -> Vector {
        self.differential.as_ref().map(|d| d.apply(x)).unwrap_or_default()
    }

    pub fn parts(&self) -> Option<&[Part]> {
        self.parts.as_deref()
    }

    pub fn require_parts(&self) -> Result<&[Part]> {
        self.parts().ok_or_else(|| Error::Missing("splitting M = L ⊕ A".into()))
    }

    pub fn indices_in(&self, part: Part) -> Vec<usize> {
        match &self.parts {
            Some(p) => (0..self.dim()).filter(|&i| p[i] == part).collect(),
            None => Vec::new(),
        }
    }

    /// `P`: projection onto `A` along `L`.
    pub fn project_a(&self, x: &Vector) -> Vector {
        match &self.parts {
            Some(p) => x.filter(|i| p[i] == Part::A),
            None => Vector::zero(),
        }
    }

    /// `P⊥ = id - P`.
    pub fn project_l(&self, x: &Vector) -> Vector {
        match &self.parts {
            Some(p) => x.filter(|i| p[i] == Part::L),
            None => x.clone(),
        }
    }

    /// Subalgebra on the listed basis elements (errors if not closed).
    pub fn restrict(&self, indices: &[usize]) -> Result<Gla> {
        let mut pos = vec![None; self.dim()];
        for (k, &i) in indices.iter().enumerate() {
            pos[i] = Some(k);
        }
        let map = |v: &Vector| -> Result<Vector> {
            for (i, _) in v.iter() {
                if pos[i].is_none() {
                    return Err(Error::Axiom(format!(
                        "{} leaves the chosen subspace",
                        self.space.name(i)
                    )));
                }
            }
            Ok(v.reindex(|i| pos[i]))
        };
        let mut entries = Vec::new();
        for (a, &i) in indices.iter().enumerate() {
            for (b, &j) in indices.iter().enumerate().skip(a) {
                let v = self.bracket_basis(i, j);
                if !v.is_zero() {
                    entries.push((a, b, map(v)?));
                }
            }
        }
        let mut g = Gla::new(self.space.restrict(indices), entries)?;
        if let Some(d) = &self.differential {
            let cols = indices.iter().map(|&i| map(d.column(i))).collect::<Result<Vec<_>>>()?;
            g = g.with_differential(LinearMap::new(indices.len(), indices.len(), 1, cols)?)?;
        }
        if let Some(p) = &self.parts {
            g = g.with_parts(indices.iter().map(|&i| p[i]).collect())?;
        }
        Ok(g)
    }

    /// Structure checks: bracket degrees, graded Jacobi, `d² = 0`, Leibniz
    /// for `d`, and for a splitting that `L` and `A` are subalgebras and
    /// `d` preserves `L`.  Every returned check that fails names a witness.
    pub fn validate(&self) -> Vec<Check> {
        let n = self.dim();
        let sp = &self.space;
        let name = |i: usize| sp.name(i).to_string();
        let mut out = Vec::new();

        let mut t = Tally::new("bracket_degree", 2);
        for i in 0..n {
            for j in 0..n {
                let v = self.bracket_basis(i, j);
                let want = sp.degree(i) + sp.degree(j);
                let ok = v.iter().all(|(k, _)| sp.degree(k) == want);
                t.record(ok, || (vec![name(i), name(j)], sp.show(v), format!("degree {want}")));
            }
        }
        out.push(t.finish());

        let mut t = Tally::new("jacobi", 3);
        for i in 0..n {
            for j in i..n {
                for k in j..n {
                    let (x, y, z) = (Vector::basis(i), Vector::basis(j), Vector::basis(k));
                    let lhs = self.bracket(&x, self.bracket_basis(j, k));
                    let mut rhs = self.bracket(self.bracket_basis(i, j), &z);
                    let s = sign(sp.is_odd(i) && sp.is_odd(j));
                    rhs.add_scaled(&s, &self.bracket(&y, self.bracket_basis(i, k)));
                    t.record(lhs == rhs, || {
                        (vec![name(i), name(j), name(k)], sp.show(&lhs), sp.show(&rhs))
                    });
                }
            }
        }
        out.push(t.finish());

        if let Some(d) = &self.differential {
            let mut t = Tally::new("d_squared", 1);
            for i in 0..n {
                let dd = d.apply(d.column(i));
                t.record(dd.is_zero(), || (vec![name(i)], sp.show(&dd), "0".into()));
            }
            out.push(t.finish());
            let mut t = Tally::new("d_leibniz", 2);
            for i in 0..n {
                for j in i..n {
                    let lhs = d.apply(self.bracket_basis(i, j));
                    let mut rhs = self.bracket(d.column(i), &Vector::basis(j));
                    rhs.add_scaled(&sign(sp.is_odd(i)), &self.bracket(&Vector::basis(i), d.column(j)));
                    t.record(lhs == rhs, || (vec![name(i), name(j)], sp.show(&lhs), sp.show(&rhs)));
                }
            }
            out.push(t.finish());
        }

        if let Some(parts) = &self.parts {
            for (part, label) in [(Part::L, "l_subalgebra"), (Part::A, "a_subalgebra")] {
                let mut t = Tally::new(label, 2);
                for i in (0..n).filter(|&i| parts[i] == part) {
                    for j in (i..n).filter(|&j| parts[j] == part) {
                        let v = self.bracket_basis(i, j);
                        let ok = v.iter().all(|(k, _)| parts[k] == part);
                        t.record(ok, || (vec![name(i), name(j)], sp.show(v), format!("element of {part:?}")));
                    }
                }
                out.push(t.finish());
            }
            if let Some(d) = &self.differential {
                let mut t = Tally::new("d_preserves_l", 1);
                for i in (0..n).filter(|&i| parts[i] == Part::L) {
                    let v = d.column(i);
                    let ok = v.iter().all(|(k, _)| parts[k] == Part::L);
                    t.record(ok, || (vec![name(i)], sp.show(v), "element of L".into()));
                }
                out.push(t.finish());
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().iter().all(|c| c.pass)
    }
}

/// A derivation of `M` of fixed degree, stored as a matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub name: String,
    pub map: LinearMap,
}

impl Derivation {
    pub fn new(name: &str, map: LinearMap) -> Derivation {
        Derivation { name: name.into(), map }
    }

    pub fn degree(&self) -> i64 {
        self.map.degree()
    }

    pub fn apply(&self, x: &Vector) -> Vector {
        self.map.apply(x)
    }

    /// Inner derivation `[x, -]` of a homogeneous element.
    pub fn inner(g: &Gla, x: &Vector) -> Result<Derivation> {
        let deg = g.space().homogeneous_degree(x)?.unwrap_or(0);
        let map = LinearMap::from_fn(g.dim(), g.dim(), deg, |j| g.bracket_with_basis(x, j));
        Ok(Derivation::new("ad", map))
    }

    pub fn commutator(&self, other: &Derivation) -> Derivation {
        Derivation::new(
            &format!("[{},{}]", self.name, other.name),
            self.map.commutator(&other.map).expect("same shape"),
        )
    }

    /// Leibniz rule, degree, and `D(L) ⊆ L` (which for a splitting is
    /// equivalent to `PDP = PD`).
    pub fn validate(&self, g: &Gla) -> Vec<Check> {
        let sp = g.space();
        let n = g.dim();
        let d = &self.map;
        let name = |i: usize| sp.name(i).to_string();
        let mut out = Vec::new();
        let ok = d.check_degree(sp, sp);
        out.push(Check::flag(
            &format!("derivation_degree[{}]", self.name),
            ok.is_ok(),
            ok.err().map(|e| e.to_string()).unwrap_or_else(|| format!("degree {}", d.degree())),
        ));
        let mut t = Tally::new(&format!("derivation_leibniz[{}]", self.name), 2);
        let odd = d.is_odd();
        for i in 0..n {
            for j in i..n {
                let lhs = d.apply(g.bracket_basis(i, j));
                let mut rhs = g.bracket(d.column(i), &Vector::basis(j));
                rhs.add_scaled(&sign(odd && sp.is_odd(i)), &g.bracket(&Vector::basis(i), d.column(j)));
                t.record(lhs == rhs, || (vec![name(i), name(j)], sp.show(&lhs), sp.show(&rhs)));
            }
        }
        out.push(t.finish());
        if let Some(parts) = g.parts() {
            let mut t = Tally::new(&format!("derivation_preserves_l[{}]", self.name), 1);
            for i in (0..n).filter(|&i| parts[i] == Part::L) {
                let v = d.column(i);
                let bad = g.project_a(v);
                t.record(bad.is_zero(), || (vec![name(i)], sp.show(&bad), "0".into()));
            }
            out.push(t.finish());
        }
        out
    }
}

/// Basis of the degree-`deg` derivations of `g` that preserve `L`.
pub fn derivations_of_degree(g: &Gla, deg: i64) -> Vec<LinearMap> {
    let sp = g.space();
    let n = g.dim();
    let parts = g.parts();
    // Unknown (i, j): coefficient of e_i in D(e_j).
    let mut unknowns = Vec::new();
    for j in 0..n {
        for i in sp.indices_of_degree(sp.degree(j) + deg) {
            let blocked = parts.is_some_and(|p| p[j] == Part::L && p[i] == Part::A);
            if !blocked {
                unknowns.push((i, j));
            }
        }
    }
    let odd = deg.rem_euclid(2) == 1;
    // Each unknown contributes a column to the Leibniz system, indexed by (pair (a,b), k).
    let columns: Vec<Vector> = unknowns
        .iter()
        .map(|&(i, j)| {
            let single = LinearMap::from_fn(n, n, deg, |c| if c == j { Vector::basis(i) } else { Vector::zero() });
            let mut col = Vector::zero();
            for a in 0..n {
                for b in a..n {
                    let mut r = single.apply(g.bracket_basis(a, b));
                    r.add_scaled(&-Rational::one(), &g.bracket(single.column(a), &Vector::basis(b)));
                    r.add_scaled(
                        &-sign(odd && sp.is_odd(a)),
                        &g.bracket(&Vector::basis(a), single.column(b)),
                    );
                    let row_base = (a * n + b) * n;
                    col.add_assign(&r.shifted_indices(row_base));
                }
            }
            col
        })
        .collect();
    let mut e = Echelon::new();
    for c in &columns {
        e.insert(c);
    }
    e.kernel()
        .iter()
        .map(|k| {
            let mut cols = vec![Vector::zero(); n];
            for (u, c) in k.iter() {
                let (i, j) = unknowns[u];
                cols[j].add_term(i, c.clone());
            }
            LinearMap::new(n, n, deg, cols).expect("square")
        })
        .collect()
}

/// Coordinates of `target` in the span of `basis`, if it lies there.
pub fn coordinates_in_span(basis: &[LinearMap], target: &LinearMap) -> Option<Vector> {
    let flatten = |m: &LinearMap| {
        let n = m.codomain_dim();
        let mut v = Vector::zero();
        for (j, c) in m.columns().iter().enumerate() {
            v.add_assign(&c.shifted_indices(j * n));
        }
        v
    };
    let mut e = Echelon::new();
    for b in basis {
        e.insert(&flatten(b));
    }
    if e.rank() != basis.len() {
        return None;
    }
    e.solve(&flatten(target))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::int;

    /// sl2 with e, f, h in degree 0.
    fn sl2() -> Gla {
        let sp = GradedSpace::from_pairs(&[("e", 0), ("f", 0), ("h", 0)]).unwrap();
        Gla::new(
            sp,
            vec![
                (0, 1, Vector::basis(2)),
                (2, 0, Vector::term(0, int(2))),
                (2, 1, Vector::term(1, int(-2))),
            ],
        )
        .unwrap()
    }

    #[test]
    fn sl2_is_valid_and_antisymmetric() {
        let g = sl2();
        assert!(g.is_valid());
        assert_eq!(g.bracket_basis(1, 0), &Vector::term(2, int(-1)));
    }

    #[test]
    fn broken_jacobi_detected() {
        let sp = GradedSpace::from_pairs(&[("a", 0), ("b", 0), ("c", 0)]).unwrap();
        let g = Gla::new(sp, vec![(0, 1, Vector::basis(2)), (0, 2, Vector::basis(0))]).unwrap();
        let v = g.validate();
        let jac = v.iter().find(|c| c.identity == "jacobi").unwrap();
        assert!(!jac.pass);
    }

    #[test]
    fn sl2_derivations_are_inner() {
        let g = sl2();
        assert_eq!(derivations_of_degree(&g, 0).len(), 3);
        assert!(derivations_of_degree(&g, 1).is_empty());
    }

    #[test]
    fn even_self_bracket_rejected() {
        let sp = GradedSpace::from_pairs(&[("a", 0)]).unwrap();
        assert!(Gla::new(sp, vec![(0, 0, Vector::basis(0))]).is_err());
    }
}
