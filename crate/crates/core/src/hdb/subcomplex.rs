//! A dg subspace `W ⊆ (V, d)` with a basis-aligned complement `C`: inside
//! `End(V)` the operators preserving `W` form `L`, and `A = Hom(W, C)`
//! is the abelian complement.  `Φ(d)` stops at arity two.

use crate::coalgebra::{check_morphism, words, CoalgMorphism, Coderivation};
use crate::error::{Error, Result};
use crate::graded::gla::{Derivation, Part};
use crate::graded::space::{GradedSpace, LinearMap, Vector};
use crate::hdb::endo::{coordinate_projection, MatrixLie};
use crate::hdb::split::Split;
use crate::report::{Check, Tally};
use crate::scalars::sign;

#[derive(Clone, Debug)]
pub struct SubcomplexSplit {
    d: LinearMap,
    /// Projection of `V` onto `C` along `W`.
    p: LinearMap,
    /// Projection of `V` onto `W` along `C`.
    q: LinearMap,
    end: MatrixLie,
}

impl SubcomplexSplit {
    pub fn new(v: GradedSpace, d: LinearMap, w: Vec<usize>) -> Result<SubcomplexSplit> {
        let n = v.dim();
        if d.degree() != 1 {
            return Err(Error::Degree("d must have degree 1".into()));
        }
        d.check_degree(&v, &v)?;
        if !d.compose(&d)?.is_zero() {
            return Err(Error::Axiom("d does not square to zero".into()));
        }
        if let Some(&bad) = w.iter().find(|&&i| i >= n) {
            return Err(Error::SpaceMismatch(format!("index {bad} outside V")));
        }
        for &j in &w {
            if let Some((i, _)) = d.column(j).iter().find(|(i, _)| !w.contains(i)) {
                return Err(Error::Axiom(format!("d sends {} outside W (to {})", v.name(j), v.name(i))));
            }
        }
        let c: Vec<usize> = (0..n).filter(|i| !w.contains(i)).collect();
        let p = coordinate_projection(n, &c);
        let q = coordinate_projection(n, &w);
        let end = MatrixLie::full(v, |i, j| if c.contains(&i) && w.contains(&j) { Part::A } else { Part::L })?;
        Ok(SubcomplexSplit { d, p, q, end })
    }

    pub fn end(&self) -> &MatrixLie {
        &self.end
    }

    pub fn split(&self) -> Result<Split<'_>> {
        Split::new(self.end.gla())
    }

    pub fn d_element(&self) -> Result<Vector> {
        self.end.coords(&self.d)
    }

    /// `Φ(d)` up to arity `n`.
    pub fn brackets(&self, n: usize) -> Result<Coderivation> {
        self.split()?.phi_element(&self.d_element()?, n)
    }

    fn a_map(&self, split: &Split, a: usize) -> Result<LinearMap> {
        self.end.to_map(&split.lift(&Vector::basis(a)))
    }

    fn a_coords(&self, split: &Split, m: &LinearMap) -> Result<Vector> {
        split.coords(&self.end.coords(m)?)
    }

    /// `Φ(d)₁(f) = P d f - (-1)^{|f|} f d` and
    /// `Φ(d)₂(f⊙g) = (-1)^{|f|+1}(f P⊥ d g - (-1)^{(|f|+1)(|g|+1)} g P⊥ d f)`
    /// on `W`, vanishing from arity three to `n`, the projection morphism
    /// `f ↦ [P⊥ d P, f]` with no higher terms, its morphism equation, and
    /// `Φ(d) = Φ([d, ·])`.
    pub fn verify(&self, n: usize) -> Result<Vec<Check>> {
        let split = self.split()?;
        let phi = self.brackets(n.max(2))?;
        let sp = split.a_space().clone();
        let mut out = Vec::new();

        let mut t = Tally::new("subcomplex_arity1", 1);
        for a in 0..sp.dim() {
            let f = self.a_map(&split, a)?;
            let mut m = self.p.compose(&self.d)?.compose(&f)?;
            m.add_scaled(&-sign(f.is_odd()), &f.compose(&self.d)?)?;
            let rhs = self.a_coords(&split, &m.compose(&self.q)?)?;
            let lhs = phi.value(&[a]);
            t.record(lhs == rhs, || (vec![sp.name(a).into()], sp.show(&lhs), sp.show(&rhs)));
        }
        out.push(t.finish());

        let mut t = Tally::new("subcomplex_arity2", 2);
        let qd = self.q.compose(&self.d)?;
        for w in words(&sp, 2) {
            let f = self.a_map(&split, w[0])?;
            let g = self.a_map(&split, w[1])?;
            let mut m = f.compose(&qd)?.compose(&g)?;
            let s = sign((f.degree() + 1) * (g.degree() + 1) % 2 != 0);
            m.add_scaled(&-s, &g.compose(&qd)?.compose(&f)?)?;
            let m = m.compose(&self.q)?.scaled(&sign((f.degree() + 1) % 2 != 0));
            let rhs = self.a_coords(&split, &m)?;
            let lhs = phi.value(&w);
            t.record(lhs == rhs, || (vec![sp.name(w[0]).into(), sp.name(w[1]).into()], sp.show(&lhs), sp.show(&rhs)));
        }
        out.push(t.finish());

        for k in 3..=n {
            let mut t = Tally::new("subcomplex_vanishing", k);
            for w in words(&sp, k) {
                let v = phi.value(&w);
                t.record(v.is_zero(), || (w.iter().map(|&l| sp.name(l).to_string()).collect(), sp.show(&v), "0".into()));
            }
            out.push(t.finish());
        }

        let g = self.end.gla();
        let ad = Derivation::inner(g, &self.d_element()?)?;
        let (target, ql) = split.shifted_l(Some(&ad.map), n)?;
        let f = split.projection_morphism(&ad.map, target.clone(), n)?;
        let qdp = self.q.compose(&self.d)?.compose(&self.p)?;
        let mut expected = CoalgMorphism::new(sp.clone(), target, n);
        let l_idx = split.l_indices();
        for a in 0..sp.dim() {
            let c = qdp.commutator(&self.a_map(&split, a)?)?;
            let x = self.end.coords(&c)?;
            let v = x.reindex(|i| l_idx.iter().position(|&l| l == i));
            if v.nnz() != x.nnz() {
                return Err(Error::Axiom("[P⊥dP, f] is not in L".into()));
            }
            expected.set(vec![a], v)?;
        }
        out.extend(f.compare(&expected, "subcomplex_strict_morphism", n));
        let phi_d = split.phi_derivation(&ad.map, n)?;
        out.extend(check_morphism(&f, &phi_d, &ql, n, "subcomplex_morphism_equation")?);
        let by_element = phi.truncated(n).reduced_part();
        out.extend(by_element.compare(&phi_d, "subcomplex_element_vs_derivation", n).into_iter().skip(1));
        Ok(out)
    }
}
