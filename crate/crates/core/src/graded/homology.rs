//! Homology of finite cochain complexes by exact rank computations.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graded::gla::{Gla, Part};
use crate::graded::linalg::{kernel, rank, Echelon};
use crate::graded::space::{GradedSpace, LinearMap, Vector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homology {
    pub by_degree: BTreeMap<i64, usize>,
}

impl Homology {
    pub fn total(&self) -> usize {
        self.by_degree.values().sum()
    }
}

fn check_differential(space: &GradedSpace, d: &LinearMap) -> Result<()> {
    if d.degree() != 1 {
        return Err(Error::Degree(format!("differential of degree {}", d.degree())));
    }
    d.check_degree(space, space)?;
    if (0..space.dim()).any(|i| !d.apply(d.column(i)).is_zero()) {
        return Err(Error::Axiom("d² ≠ 0".into()));
    }
    Ok(())
}

/// Cycles of `d` restricted to the span of `indices` (assumed `d`-stable).
pub fn cycles(d: &LinearMap, indices: &[usize]) -> Vec<Vector> {
    let cols: Vec<Vector> = indices.iter().map(|&i| d.column(i).clone()).collect();
    kernel(&cols)
        .into_iter()
        .map(|k| k.reindex(|u| Some(indices[u])))
        .collect()
}

pub fn boundaries(d: &LinearMap, indices: &[usize]) -> Vec<Vector> {
    indices.iter().map(|&i| d.column(i).clone()).filter(|v| !v.is_zero()).collect()
}

pub fn homology(space: &GradedSpace, d: &LinearMap) -> Result<Homology> {
    check_differential(space, d)?;
    let mut by_degree = BTreeMap::new();
    let degrees: std::collections::BTreeSet<i64> = space.degrees().into_iter().collect();
    for &k in &degrees {
        let here = space.indices_of_degree(k);
        let below = space.indices_of_degree(k - 1);
        let z = cycles(d, &here).len();
        let b = rank(&boundaries(d, &below));
        by_degree.insert(k, z - b);
    }
    Ok(Homology { by_degree })
}

/// Whether the chain map `phi: (C, d) → (C', d')` induces an isomorphism.
pub fn induces_iso(
    src: &GradedSpace,
    d: &LinearMap,
    dst: &GradedSpace,
    d2: &LinearMap,
    phi: &LinearMap,
) -> Result<bool> {
    let h1 = homology(src, d)?;
    let h2 = homology(dst, d2)?;
    if h1.total() != h2.total() {
        return Ok(false);
    }
    let all_src: Vec<usize> = (0..src.dim()).collect();
    let all_dst: Vec<usize> = (0..dst.dim()).collect();
    let b2 = boundaries(d2, &all_dst);
    let mut with_image = b2.clone();
    with_image.extend(cycles(d, &all_src).iter().map(|z| phi.apply(z)));
    Ok(rank(&with_image) - rank(&b2) == h1.total())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManettiCheck {
    pub injective: bool,
    pub surjective: bool,
    /// A cycle of `L` that bounds in `M` but not in `L`.
    pub injectivity_witness: Option<Vector>,
    /// A `PD`-cycle of `A` not hit by `H(P)`.
    pub surjectivity_witness: Option<Vector>,
}

/// Compares injectivity of `H(L, D) → H(M, D)` with surjectivity of
/// `H(P): H(M, D) → H(A, PD)` for a differential `D` preserving `L`.
pub fn check_manetti_hypothesis(g: &Gla, d: &LinearMap) -> Result<ManettiCheck> {
    check_differential(g.space(), d)?;
    let parts = g.require_parts()?;
    let l: Vec<usize> = (0..g.dim()).filter(|&i| parts[i] == Part::L).collect();
    let a: Vec<usize> = (0..g.dim()).filter(|&i| parts[i] == Part::A).collect();
    let all: Vec<usize> = (0..g.dim()).collect();
    for &i in &l {
        if !g.project_a(d.column(i)).is_zero() {
            return Err(Error::Axiom(format!("D does not preserve L at {}", g.space().name(i))));
        }
    }

    let z_l = cycles(d, &l);
    let b_l = boundaries(d, &l);
    let b_m = boundaries(d, &all);
    let mut inter = Echelon::new();
    for v in z_l.iter().chain(b_m.iter()) {
        inter.insert(v);
    }
    let mut bl = Echelon::new();
    for v in &b_l {
        bl.insert(v);
    }
    let mut injectivity_witness = None;
    for k in inter.kernel() {
        let mut x = Vector::zero();
        for (u, c) in k.iter().filter(|(u, _)| *u < z_l.len()) {
            x.add_scaled(c, &z_l[u]);
        }
        if !x.is_zero() && !bl.contains(&x) {
            injectivity_witness = Some(x);
            break;
        }
    }

    let pd = LinearMap::from_fn(g.dim(), g.dim(), 1, |j| {
        if parts[j] == Part::A {
            g.project_a(d.column(j))
        } else {
            Vector::zero()
        }
    });
    let z_a = cycles(&pd, &a);
    let mut hit = Echelon::new();
    for z in cycles(d, &all) {
        hit.insert(&g.project_a(&z));
    }
    for b in boundaries(&pd, &a) {
        hit.insert(&b);
    }
    let surjectivity_witness = z_a.into_iter().find(|z| !hit.contains(z));

    Ok(ManettiCheck {
        injective: injectivity_witness.is_none(),
        surjective: surjectivity_witness.is_none(),
        injectivity_witness,
        surjectivity_witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::int;

    #[test]
    fn acyclic_pair() {
        let sp = GradedSpace::from_pairs(&[("x", 0), ("y", 1)]).unwrap();
        let d = LinearMap::new(2, 2, 1, vec![Vector::basis(1), Vector::zero()]).unwrap();
        assert_eq!(homology(&sp, &d).unwrap().total(), 0);
        let d0 = LinearMap::zero(2, 2, 1);
        assert_eq!(homology(&sp, &d0).unwrap().total(), 2);
        let bad = LinearMap::new(2, 2, 1, vec![Vector::term(1, int(1)), Vector::basis(0)]);
        assert!(bad.is_err() || homology(&sp, &bad.unwrap()).is_err());
    }
}
