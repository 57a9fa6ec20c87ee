//! Runnable versions of the worked examples: brackets of a coderivation,
//! Koszul brackets of operators on an associative algebra, a dg subspace,
//! and the degree split of a dgla.

use std::sync::Arc;

use crate::coalgebra::Flavor;
use crate::error::Result;
use crate::fixtures;
use crate::graded::gla::Gla;
use crate::graded::space::{GradedSpace, LinearMap, Vector};
use crate::hdb::coder::verify_phi_identity;
use crate::hdb::getzler;
use crate::hdb::koszul::{AssocAlgebra, KoszulSplit};
use crate::hdb::subcomplex::SubcomplexSplit;
use crate::random::Sampler;
use crate::report::Check;
use crate::scalars::int;

/// `Φ(R) = R` for `count` random unreduced coderivations of each degree
/// in `-1..=1` on `u(0) ⊕ v(1)`, arity at most 3.
pub fn coderivation_suite(seed: u64, count: usize) -> Result<Vec<Check>> {
    let sp = Arc::new(GradedSpace::from_pairs(&[("u", 0), ("v", 1)])?);
    let mut s = Sampler::new(seed);
    let mut out = Vec::new();
    for k in 0..count {
        for deg in -1..=1 {
            let r = s.coderivation(&sp, deg, Flavor::Unreduced, 3);
            out.extend(verify_phi_identity(&r, &format!("example_coderivation[{k},deg{deg}]"))?);
        }
    }
    Ok(out)
}

/// The identity on monomials divisible by every variable in `vars`, zero
/// elsewhere: an operator of order `vars.len()` on a truncated polynomial
/// ring in even variables.
pub fn euler_operator(alg: &AssocAlgebra, vars: &[&str]) -> LinearMap {
    let sp = alg.space();
    LinearMap::from_fn(sp.dim(), sp.dim(), 0, |j| {
        let name = sp.name(j);
        if vars.iter().all(|v| name.contains(v)) && name != "1" {
            Vector::basis(j)
        } else {
            Vector::zero()
        }
    })
}

/// Low-arity Koszul brackets on `2×2` matrices with one odd row, for an
/// odd operator with `f(1) ≠ 0` and an even one with `g(1) = 0`.
pub fn koszul_matrix_checks() -> Result<Vec<Check>> {
    let ks = KoszulSplit::new(AssocAlgebra::matrices(&[1, 0])?)?;
    let sp = ks.algebra().space().clone();
    let i = |n: &str| sp.index_of(n);
    let (e11, e12, e21, e22) = (i("e11")?, i("e12")?, i("e21")?, i("e22")?);
    let f = LinearMap::from_fn(4, 4, 1, |j| match j {
        _ if j == e11 => Vector::basis(e12),
        _ if j == e22 => Vector::term(e12, int(2)),
        _ if j == e21 => Vector::basis(e22),
        _ => Vector::zero(),
    });
    let g = LinearMap::from_fn(4, 4, 0, |j| match j {
        _ if j == e12 => Vector::term(e12, int(3)),
        _ if j == e21 => Vector::basis(e21),
        _ if j == e11 => &Vector::basis(e11) - &Vector::basis(e22),
        _ if j == e22 => &Vector::basis(e22) - &Vector::basis(e11),
        _ => Vector::zero(),
    });
    let mut out = ks.check_low_arity(&f, "f")?;
    out.push(Check::flag("koszul_unit[g]", g.apply(ks.unit()).is_zero(), "g(1) = 0".into()));
    out.extend(ks.check_low_arity(&g, "g")?);
    Ok(out)
}

/// On `k[x,y,z]/(x²,y²,z²)`, operators of order 0, 1 and 2 have
/// `Φ(Δ)ᵢ = 0` for `i > k` up to arity `n`, in agreement with the
/// commutator definition of order.
pub fn koszul_order_checks(n: usize) -> Result<Vec<Check>> {
    let ks = KoszulSplit::new(AssocAlgebra::truncated_polynomial(&[("x", 0), ("y", 0), ("z", 0)])?)?;
    let alg = ks.algebra().clone();
    let xz = alg.space().index_of("xz")?;
    let ops = [
        ("mult_xz", alg.left(&Vector::basis(xz))?, 0),
        ("euler_x", euler_operator(&alg, &["x"]), 1),
        ("euler_xy", euler_operator(&alg, &["x", "y"]), 2),
    ];
    let mut out = Vec::new();
    for (name, f, k) in ops {
        let phi = ks.brackets(&f, n)?;
        let above: Vec<usize> = (k + 1..=n).filter(|&i| !phi.coeff(i).is_empty()).collect();
        out.push(Check::flag(&format!("koszul_order[{name}]"), above.is_empty(), format!("order {k}, nonzero above: {above:?}")));
        let c = ks.commutator_order(&f, n)?;
        out.push(Check::flag(&format!("koszul_commutator_order[{name}]"), c == Some(k), format!("{c:?}")));
        out.extend(ks.check_low_arity(&f, name)?);
    }
    Ok(out)
}

/// `Φ(d)ᵢ = 0` for `i ≥ 3` on `count` random four-dimensional complexes,
/// each with the span of its top degrees as the subcomplex.
pub fn subcomplex_suite(seed: u64, count: usize, n: usize) -> Result<Vec<Check>> {
    let mut s = Sampler::new(seed);
    let mut out = Vec::new();
    let mut k = 0;
    while k < count {
        let (sp, d) = s.complex(4)?;
        let top = sp.degrees().into_iter().max().unwrap_or(0);
        let w: Vec<usize> = (0..4).filter(|&i| sp.degree(i) == top).collect();
        if w.len() == 4 {
            continue;
        }
        let sc = SubcomplexSplit::new(sp, d, w)?;
        let phi = sc.brackets(n)?;
        let above: Vec<usize> = (3..=n).filter(|&i| !phi.coeff(i).is_empty()).collect();
        out.push(Check::flag(&format!("subcomplex_vanishing[{k}]"), above.is_empty(), format!("nonzero arities above 2: {above:?}")));
        out.extend(sc.verify(n)?);
        k += 1;
    }
    Ok(out)
}

/// The degree-split closed form on `g` (which must carry a differential)
/// and on the shipped dgla.
pub fn degree_split_checks(g: Option<&Gla>, n: usize) -> Result<Vec<Check>> {
    let mut out = getzler::verify(&fixtures::getzler6()?.gla, n)?;
    if let Some(g) = g {
        out.extend(getzler::verify(g, n)?);
    }
    Ok(out)
}

/// Every example suite with default sizes.
pub fn all(seed: u64, n: usize) -> Result<Vec<Check>> {
    let mut out = coderivation_suite(seed, 4)?;
    out.extend(koszul_matrix_checks()?);
    out.extend(koszul_order_checks(n.max(3))?);
    out.extend(subcomplex_suite(seed, 4, n)?);
    out.extend(degree_split_checks(None, n)?);
    Ok(out)
}
