//! Higher derived brackets for a graded Lie algebra given by structure
//! constants and split along its basis as `M = L ⊕ A`.

use std::sync::Arc;

use num_traits::One;

use crate::coalgebra::{decalage_on, words, CoalgMorphism, Coderivation, Flavor};
use crate::error::{Error, Result};
use crate::graded::gla::{Gla, Part};
use crate::graded::space::{GradedSpace, LinearMap, Vector};
use crate::hdb::phi::{derived_brackets, symmetrized_nested, LieModel, Seed};
use crate::report::{Check, Tally};
use crate::scalars::{factorial, Rational};

/// A split graded Lie algebra together with the coordinates of `A` and `L`.
#[derive(Clone, Debug)]
pub struct Split<'g> {
    g: &'g Gla,
    a_idx: Vec<usize>,
    l_idx: Vec<usize>,
    a_pos: Vec<Option<usize>>,
    a_space: Arc<GradedSpace>,
}

impl<'g> Split<'g> {
    /// Requires a splitting with `L` and `A` both closed under the bracket.
    pub fn new(g: &'g Gla) -> Result<Split<'g>> {
        let s = Split::loose(g)?;
        s.require_closed(&s.a_idx, "A")?;
        Ok(s)
    }

    /// Requires only `L` to be closed; `A` is any basis-aligned complement.
    pub fn loose(g: &'g Gla) -> Result<Split<'g>> {
        g.require_parts()?;
        let a_idx = g.indices_in(Part::A);
        let l_idx = g.indices_in(Part::L);
        let mut a_pos = vec![None; g.dim()];
        for (k, &i) in a_idx.iter().enumerate() {
            a_pos[i] = Some(k);
        }
        let a_space = Arc::new(g.space().restrict(&a_idx));
        let s = Split { g, a_idx, l_idx, a_pos, a_space };
        s.require_closed(&s.l_idx, "L")?;
        Ok(s)
    }

    fn require_closed(&self, idx: &[usize], what: &str) -> Result<()> {
        let parts = self.g.require_parts()?;
        let want = if what == "A" { Part::A } else { Part::L };
        for (a, &i) in idx.iter().enumerate() {
            for &j in &idx[a..] {
                let v = self.g.bracket_basis(i, j);
                if let Some((k, _)) = v.iter().find(|(k, _)| parts[*k] != want) {
                    return Err(Error::Axiom(format!(
                        "the {what}-span is not bracket-closed: [{}, {}] has a {} component",
                        self.g.space().name(i),
                        self.g.space().name(j),
                        self.g.space().name(k)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn gla(&self) -> &'g Gla {
        self.g
    }

    pub fn a_indices(&self) -> &[usize] {
        &self.a_idx
    }

    pub fn l_indices(&self) -> &[usize] {
        &self.l_idx
    }

    /// `A` with the names and degrees it has inside `M`.
    pub fn a_space(&self) -> &Arc<GradedSpace> {
        &self.a_space
    }

    pub fn is_a_abelian(&self) -> bool {
        self.a_idx.iter().all(|&i| self.a_idx.iter().all(|&j| self.g.bracket_basis(i, j).is_zero()))
    }

    /// Embeds `A`-coordinates into `M`.
    pub fn lift(&self, a: &Vector) -> Vector {
        a.reindex(|k| Some(self.a_idx[k]))
    }

    /// `A`-coordinates of an element of `M` lying in `A`.
    pub fn coords(&self, x: &Vector) -> Result<Vector> {
        if let Some((i, _)) = x.iter().find(|(i, _)| self.a_pos[*i].is_none()) {
            return Err(Error::Axiom(format!("{} is not in the A-span", self.g.space().name(i))));
        }
        Ok(x.reindex(|i| self.a_pos[i]))
    }

    /// Checks `D(L) ⊆ L`.
    pub fn require_preserves_l(&self, d: &LinearMap) -> Result<()> {
        for &i in &self.l_idx {
            let bad = self.g.project_a(d.column(i));
            if !bad.is_zero() {
                return Err(Error::Axiom(format!(
                    "the derivation does not preserve L: it sends {} to {}",
                    self.g.space().name(i),
                    self.g.space().show(d.column(i))
                )));
            }
        }
        Ok(())
    }

    fn degree_of(&self, m: &Vector) -> Result<i64> {
        Ok(self.g.space().homogeneous_degree(m)?.unwrap_or(0))
    }

    /// `Φ(m)` up to arity `n`, unreduced, with `Φ(m)_0(1) = Pm`.
    pub fn phi_element(&self, m: &Vector, n: usize) -> Result<Coderivation> {
        self.g.space().check_vector(m)?;
        let deg = self.degree_of(m)?;
        derived_brackets(self, &Seed::Element(m), deg, n)
    }

    /// `Φ(D)` up to arity `n`, reduced.
    pub fn phi_derivation(&self, d: &LinearMap, n: usize) -> Result<Coderivation> {
        if d.domain_dim() != self.g.dim() || d.codomain_dim() != self.g.dim() {
            return Err(Error::SpaceMismatch("derivation of the wrong size".into()));
        }
        self.require_preserves_l(d)?;
        let apply = |x: &Vector| -> Result<Vector> { Ok(d.apply(x)) };
        derived_brackets(self, &Seed::Map(&apply), d.degree(), n)
    }

    /// The single-term brackets of an abelian complement, evaluated on the
    /// canonical word order: `P[⋯[m, a_1]⋯, a_i]` and `P[⋯[Da_1, a_2]⋯, a_i]`.
    pub fn voronov_element(&self, m: &Vector, n: usize) -> Result<Coderivation> {
        self.voronov(Some(m), None, n)
    }

    pub fn voronov_derivation(&self, d: &LinearMap, n: usize) -> Result<Coderivation> {
        self.voronov(None, Some(d), n)
    }

    fn voronov(&self, m: Option<&Vector>, d: Option<&LinearMap>, n: usize) -> Result<Coderivation> {
        if !self.is_a_abelian() {
            return Err(Error::Invalid("the single-term form needs an abelian complement".into()));
        }
        let (deg, flavor) = match (m, d) {
            (Some(m), _) => (self.degree_of(m)?, Flavor::Unreduced),
            (_, Some(d)) => (d.degree(), Flavor::Reduced),
            _ => unreachable!(),
        };
        let mut out = Coderivation::new(self.a_space.clone(), deg, flavor, n);
        if let Some(m) = m {
            out.set(Vec::new(), self.coords(&self.g.project_a(m))?)?;
        }
        for k in 1..=n {
            for w in words(&self.a_space, k) {
                let mut x = match (m, d) {
                    (Some(m), _) => self.g.bracket_with_basis(m, self.a_idx[w[0]]),
                    (_, Some(d)) => d.column(self.a_idx[w[0]]).clone(),
                    _ => unreachable!(),
                };
                for &l in &w[1..] {
                    x = self.g.bracket_with_basis(&x, self.a_idx[l]);
                }
                out.set(w, self.coords(&self.g.project_a(&x))?)?;
            }
        }
        Ok(out)
    }

    /// The décalage of `(L, D|_L, [,])` on `s⁻¹L`, names tagged `s`.
    pub fn shifted_l(&self, d: Option<&LinearMap>, n: usize) -> Result<(Arc<GradedSpace>, Coderivation)> {
        let mut sub = self.g.clone();
        match d {
            Some(d) => {
                self.require_preserves_l(d)?;
                sub = sub.with_differential(d.clone())?;
            }
            None => sub = sub.without_differential(),
        }
        let l = sub.restrict(&self.l_idx)?;
        let space = Arc::new(l.space().tagged("s", -1));
        let q = decalage_on(&l, space.clone(), n)?;
        Ok((space, q))
    }

    /// Taylor coefficients of the morphism `A → s⁻¹L`:
    /// `(1/i!) Σ_σ ε(σ) P⊥[⋯[Da_σ(1), a_σ(2)]⋯, a_σ(i)]`.
    pub fn projection_morphism(&self, d: &LinearMap, target: Arc<GradedSpace>, n: usize) -> Result<CoalgMorphism> {
        self.require_preserves_l(d)?;
        if d.degree() != 1 {
            return Err(Error::Degree("the projection morphism needs a degree-one derivation".into()));
        }
        let mut l_pos = vec![None; self.g.dim()];
        for (k, &i) in self.l_idx.iter().enumerate() {
            l_pos[i] = Some(k);
        }
        let apply = |x: &Vector| -> Result<Vector> { Ok(d.apply(x)) };
        let seed = Seed::Map(&apply);
        let mut f = CoalgMorphism::new(self.a_space.clone(), target, n);
        for i in 1..=n {
            let inv = Rational::one() / factorial(i);
            for w in words(&self.a_space, i) {
                let Some(x) = symmetrized_nested(self, &seed, &w)? else { continue };
                let v = self.g.project_l(&x).scaled(&inv).reindex(|j| l_pos[j]);
                f.set(w, v)?;
            }
        }
        Ok(f)
    }

    /// Graded symmetry of the stored brackets against a direct evaluation
    /// on every reordering of each word (with Koszul sign).
    pub fn check_symmetry(&self, phi: &Coderivation, seed_m: Option<&Vector>, seed_d: Option<&LinearMap>, identity: &str) -> Result<Vec<Check>> {
        let mut out = Vec::new();
        let odd = phi.odd().to_vec();
        for k in 1..=phi.max_arity() {
            let mut t = Tally::new(identity, k);
            for w in words(&self.a_space, k) {
                for perm in crate::graded::sign::permutations(k) {
                    let arranged: Vec<usize> = perm.iter().map(|&p| w[p]).collect();
                    let direct = match (seed_m, seed_d) {
                        (Some(m), _) => crate::hdb::phi::bracket_on_word(self, &Seed::Element(m), &arranged)?,
                        (_, Some(d)) => {
                            let apply = |x: &Vector| -> Result<Vector> { Ok(d.apply(x)) };
                            crate::hdb::phi::bracket_on_word(self, &Seed::Map(&apply), &arranged)?
                        }
                        _ => return Err(Error::Invalid("no seed".into())),
                    };
                    let stored = phi.coeff(k).eval_indices(&arranged, &odd);
                    t.record(direct == stored, || {
                        (arranged.iter().map(|&l| self.a_space.name(l).to_string()).collect(), self.a_space.show(&direct), self.a_space.show(&stored))
                    });
                }
            }
            out.push(t.finish());
        }
        Ok(out)
    }
}

impl LieModel for Split<'_> {
    type Elem = Vector;

    fn bracket(&self, x: &Vector, y: &Vector) -> Result<Vector> {
        Ok(self.g.bracket(x, y))
    }

    fn project(&self, x: &Vector) -> Result<Vector> {
        Ok(self.g.project_a(x))
    }

    fn is_zero(&self, x: &Vector) -> bool {
        x.is_zero()
    }

    fn scaled(&self, c: &Rational, x: &Vector) -> Vector {
        x.scaled(c)
    }

    fn add(&self, x: &Vector, y: &Vector) -> Result<Vector> {
        Ok(x + y)
    }

    fn a_space(&self) -> &Arc<GradedSpace> {
        &self.a_space
    }

    fn a_elem(&self, i: usize) -> Vector {
        Vector::basis(self.a_idx[i])
    }

    fn a_coords(&self, x: &Vector) -> Result<Vector> {
        self.coords(x)
    }
}
