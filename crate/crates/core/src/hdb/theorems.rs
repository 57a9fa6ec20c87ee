//! Verifiers for the Lie-morphism identities of `Φ`, the L∞[1] property
//! of `Φ(D)` and the accompanying morphism into `s⁻¹L`.

use crate::coalgebra::{check_linfty, check_morphism, nr_bracket};
use crate::error::Result;
use crate::graded::gla::Derivation;
use crate::graded::space::Vector;
use crate::hdb::split::Split;
use crate::report::Check;

/// A named element of `M` used as a bracket source.
#[derive(Clone, Debug)]
pub struct NamedElement {
    pub name: String,
    pub value: Vector,
}

/// `[Φ(m₁), Φ(m₂)] = Φ([m₁, m₂])`, `[Φ(D₁), Φ(D₂)] = Φ([D₁, D₂])` and
/// `[Φ(D), Φ(m)] = Φ(Dm)`, coefficientwise up to arity `n`.
pub fn verify_lie_morphism(split: &Split, elements: &[NamedElement], derivations: &[Derivation], n: usize) -> Result<Vec<Check>> {
    let g = split.gla();
    let mut out = Vec::new();
    let phi_m: Vec<_> = elements.iter().map(|e| split.phi_element(&e.value, n + 1)).collect::<Result<_>>()?;
    let phi_d: Vec<_> = derivations.iter().map(|d| split.phi_derivation(&d.map, n + 1)).collect::<Result<_>>()?;
    for (a, ea) in elements.iter().enumerate() {
        for (b, eb) in elements.iter().enumerate().skip(a) {
            let lhs = nr_bracket(&phi_m[a], &phi_m[b])?;
            let rhs = split.phi_element(&g.bracket(&ea.value, &eb.value), n)?;
            out.extend(lhs.compare(&rhs, &format!("element_bracket[{},{}]", ea.name, eb.name), n));
        }
    }
    for (a, da) in derivations.iter().enumerate() {
        for (b, db) in derivations.iter().enumerate().skip(a) {
            let lhs = nr_bracket(&phi_d[a], &phi_d[b])?;
            let rhs = split.phi_derivation(&da.commutator(db).map, n)?;
            out.extend(lhs.compare(&rhs, &format!("derivation_bracket[{},{}]", da.name, db.name), n).into_iter().skip(1));
        }
    }
    for (a, d) in derivations.iter().enumerate() {
        for (b, e) in elements.iter().enumerate() {
            let lhs = nr_bracket(&phi_d[a].unreduced(), &phi_m[b])?;
            let rhs = split.phi_element(&d.apply(&e.value), n)?;
            out.extend(lhs.compare(&rhs, &format!("action[{},{}]", d.name, e.name), n));
        }
    }
    Ok(out)
}

/// For a degree-one `D` with `[D, D] = 0` preserving `L`: `Φ(D)` is an
/// L∞[1] structure and the projection morphism `A → s⁻¹L` satisfies the
/// morphism equation into the décalage of `(L, D, [,])`.
pub fn verify_fiber_sequence(split: &Split, d: &Derivation, n: usize) -> Result<Vec<Check>> {
    let phi = split.phi_derivation(&d.map, n)?;
    let mut out = check_linfty(&phi, n, &format!("phi_linfty[{}]", d.name))?;
    let (target, ql) = split.shifted_l(Some(&d.map), n)?;
    let f = split.projection_morphism(&d.map, target, n)?;
    out.extend(check_morphism(&f, &phi, &ql, n, &format!("projection_morphism[{}]", d.name))?);
    Ok(out)
}

/// On an abelian complement, the full bracket formula against the
/// single-term evaluator.
pub fn verify_abelian_reduction(split: &Split, elements: &[NamedElement], derivations: &[Derivation], n: usize) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for e in elements {
        let full = split.phi_element(&e.value, n)?;
        let single = split.voronov_element(&e.value, n)?;
        out.extend(full.compare(&single, &format!("abelian_reduction[{}]", e.name), n));
    }
    for d in derivations {
        let full = split.phi_derivation(&d.map, n)?;
        let single = split.voronov_derivation(&d.map, n)?;
        out.extend(full.compare(&single, &format!("abelian_reduction[{}]", d.name), n).into_iter().skip(1));
    }
    Ok(out)
}

/// `Φ(m)` against `Φ([m, ·])`: equal (after dropping `Φ(m)_0`) for `m ∈ L`,
/// and for `m` normalizing `L` with `Pm ≠ 0` reported as a separation
/// witness.  Returns the checks and whether some pair differed.
pub fn compare_inner(split: &Split, m: &NamedElement, n: usize) -> Result<(Vec<Check>, bool)> {
    let g = split.gla();
    let ad = Derivation::inner(g, &m.value)?;
    let by_element = split.phi_element(&m.value, n)?.reduced_part();
    let by_derivation = split.phi_derivation(&ad.map, n)?;
    let checks = by_element.compare(&by_derivation, &format!("inner_derivation[{}]", m.name), n);
    let differ = checks.iter().any(|c| !c.pass);
    Ok((checks.into_iter().skip(1).collect(), differ))
}
