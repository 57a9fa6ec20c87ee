//! A dgla split by degree into `L^{≥0}` and `A = L^{<0}`.  Here `P⊥D` is
//! `D` on degree `-1` and zero elsewhere on `A`, and the brackets of `D`
//! collapse to `-B_{i-1}/(i-1)! Σ ε [⋯[P⊥D a₁, a₂]⋯, aᵢ]` for `i ≥ 2`.

use crate::coalgebra::{check_morphism, words, CoalgMorphism, Coderivation, Flavor};
use crate::error::{Error, Result};
use crate::graded::gla::{Gla, Part};
use crate::graded::space::{LinearMap, Vector};
use crate::hdb::phi::{symmetrized_nested, Seed};
use crate::hdb::split::Split;
use crate::report::{Check, Tally};
use crate::scalars::{bernoulli, factorial};

/// `g` with parts read off the degrees: `L` for degree `≥ 0`, `A` below.
pub fn degree_split(g: &Gla) -> Result<Gla> {
    if g.differential().is_none() {
        return Err(Error::Missing("the degree split needs a differential".into()));
    }
    let parts = (0..g.dim()).map(|i| if g.degree(i) >= 0 { Part::L } else { Part::A }).collect();
    g.clone().with_parts(parts)
}

/// The closed form, with `PD` in arity one.
pub fn closed_form(split: &Split, d: &LinearMap, n: usize) -> Result<Coderivation> {
    let g = split.gla();
    let sp = split.a_space().clone();
    let mut out = Coderivation::new(sp.clone(), 1, Flavor::Reduced, n);
    for a in 0..sp.dim() {
        let v = g.project_a(&d.apply(&split.lift(&Vector::basis(a))));
        out.set(vec![a], split.coords(&v)?)?;
    }
    let seed_fn = |x: &Vector| -> Result<Vector> { Ok(g.project_l(&d.apply(x))) };
    let seed = Seed::Map(&seed_fn);
    for i in 2..=n {
        let c = -bernoulli(i - 1) / factorial(i - 1);
        for w in words(&sp, i) {
            let Some(x) = symmetrized_nested(split, &seed, &w)? else { continue };
            out.set(w, split.coords(&x)?.scaled(&c))?;
        }
    }
    Ok(out)
}

/// Definition-based brackets of the differential against the closed form,
/// arity-one behaviour by degree, and strictness of `a ↦ s⁻¹P⊥Da`.
pub fn verify(g: &Gla, n: usize) -> Result<Vec<Check>> {
    let gs = degree_split(g)?;
    let split = Split::new(&gs)?;
    let d = gs.differential().expect("checked by degree_split");
    let phi = split.phi_derivation(d, n)?;
    let closed = closed_form(&split, d, n)?;
    let mut out = phi.compare(&closed, "getzler_closed_form", n);

    let sp = split.a_space().clone();
    let mut t = Tally::new("getzler_linear", 1);
    for a in 0..sp.dim() {
        let lhs = phi.value(&[a]);
        let rhs = if sp.degree(a) == -1 { Vector::zero() } else { split.coords(&d.apply(&split.lift(&Vector::basis(a))))? };
        t.record(lhs == rhs, || (vec![sp.name(a).into()], sp.show(&lhs), sp.show(&rhs)));
    }
    out.push(t.finish());

    let (target, ql) = split.shifted_l(Some(d), n)?;
    let f = split.projection_morphism(d, target.clone(), n)?;
    let mut strict = CoalgMorphism::new(sp.clone(), target, n);
    let l_idx = split.l_indices();
    for a in 0..sp.dim() {
        let v = gs.project_l(&d.apply(&split.lift(&Vector::basis(a))));
        strict.set(vec![a], v.reindex(|i| l_idx.iter().position(|&l| l == i)))?;
    }
    out.extend(f.compare(&strict, "getzler_strict_morphism", n));
    out.extend(check_morphism(&strict, &phi, &ql, n, "getzler_morphism_equation")?);
    Ok(out)
}
