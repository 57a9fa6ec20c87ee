//! L∞[1] structures: the `Q•Q = 0` check, décalage of a dg Lie algebra,
//! curvature and twisting by Maurer–Cartan elements.

use std::sync::Arc;

use num_traits::One;

use crate::coalgebra::coderivation::{nr_product, Coderivation, Flavor, TailBound};
use crate::coalgebra::morphism::CoalgMorphism;
use crate::coalgebra::word::{words, SymTensor};
use crate::error::{Error, Result};
use crate::graded::gla::Gla;
use crate::graded::space::{GradedSpace, LinearMap, Vector};
use crate::report::Check;
use crate::scalars::{factorial, sign, Rational};

/// `Q•Q = 0` up to arity `n` for a reduced coderivation of degree 1.
pub fn check_linfty(q: &Coderivation, n: usize, identity: &str) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    out.push(Check::flag(&format!("{identity}/degree"), q.degree() == 1, format!("degree {}", q.degree())));
    out.push(Check::flag(
        &format!("{identity}/reduced"),
        q.flavor() == Flavor::Reduced,
        format!("{:?}", q.flavor()),
    ));
    let n = n.min(q.max_arity());
    let qq = nr_product(&q.reduced_part(), &q.reduced_part())?;
    let zero = Coderivation::new(q.space().clone(), 2, Flavor::Reduced, n);
    out.extend(qq.compare(&zero, identity, n).into_iter().skip(1));
    Ok(out)
}

pub fn is_linfty(q: &Coderivation, n: usize) -> Result<bool> {
    Ok(check_linfty(q, n, "linfty")?.iter().all(|c| c.pass))
}

/// `Σ⁻¹(M, d, [,])` on `s⁻¹M` (names `tag:x`, degrees lowered by one):
/// `q_1(s⁻¹x) = -s⁻¹dx`, `q_2(s⁻¹x ⊙ s⁻¹y) = (-1)^{|x|} s⁻¹[x, y]`.
pub fn decalage(g: &Gla, tag: &str, max_arity: usize) -> Result<(Arc<GradedSpace>, Coderivation)> {
    let space = Arc::new(g.space().tagged(tag, -1));
    let q = decalage_on(g, space.clone(), max_arity)?;
    Ok((space, q))
}

/// Décalage on a prepared shifted space (same basis order as `g`).
pub fn decalage_on(g: &Gla, space: Arc<GradedSpace>, max_arity: usize) -> Result<Coderivation> {
    if space.dim() != g.dim() {
        return Err(Error::SpaceMismatch("shifted space does not match the algebra".into()));
    }
    let mut q = Coderivation::new(space, 1, Flavor::Reduced, max_arity);
    let n = g.dim();
    if max_arity >= 1 {
        if let Some(d) = g.differential() {
            for j in 0..n {
                q.set(vec![j], -d.column(j))?;
            }
        }
    }
    if max_arity >= 2 {
        for i in 0..n {
            for j in i..n {
                if i == j && g.space().degree(i).rem_euclid(2) == 0 {
                    continue;
                }
                let v = g.bracket_basis(i, j);
                if !v.is_zero() {
                    q.set(vec![i, j], v.scaled(&sign(g.space().is_odd(i))))?;
                }
            }
        }
    }
    let tail = (max_arity >= 2).then(TailBound::zero);
    Ok(q.with_tail(tail))
}

/// `s⁻¹f`: a dg Lie morphism as a strict L∞[1] morphism.
pub fn decalage_morphism(f: &LinearMap, src: Arc<GradedSpace>, tgt: Arc<GradedSpace>, max_arity: usize) -> Result<CoalgMorphism> {
    CoalgMorphism::strict(src, tgt, f, max_arity)
}

fn finite_window(tail: Option<&TailBound>, x: &Vector, what: &str) -> Result<usize> {
    match tail {
        Some(t) if t.covers(x) => Ok(t.max_count),
        Some(_) => Err(Error::NotFinite(format!(
            "{what}: the element leaves the directions in which the tail is bounded"
        ))),
        None => Err(Error::NotFinite(format!("{what}: no bound on coefficients beyond the window"))),
    }
}

fn powers(x: &Vector, odd: &[bool], n: usize) -> Vec<SymTensor> {
    let mut out = vec![SymTensor::unit()];
    let single = SymTensor::product(&[x], odd);
    for j in 1..=n {
        let next = out[j - 1].mul(&single, odd);
        out.push(next);
    }
    out
}

/// `Σ_{i≥1} q_i(x^{⊙i}) / i!`.
pub fn curvature(q: &Coderivation, x: &Vector) -> Result<Vector> {
    let t = finite_window(q.tail(), x, "curvature")?;
    let n = q.max_arity();
    if t > n {
        return Err(Error::NotFinite("curvature needs coefficients beyond the window".into()));
    }
    check_degree_zero(q.space(), x)?;
    let pw = powers(x, q.odd(), n);
    let mut out = Vector::zero();
    for (i, p) in pw.iter().enumerate().skip(1) {
        out.add_scaled(&(Rational::one() / factorial(i)), &q.coeff(i).eval_tensor(p));
    }
    Ok(out)
}

pub fn is_maurer_cartan(q: &Coderivation, x: &Vector) -> Result<bool> {
    Ok(curvature(q, x)?.is_zero())
}

fn check_degree_zero(space: &GradedSpace, x: &Vector) -> Result<()> {
    match space.homogeneous_degree(x)? {
        Some(d) if d != 0 => Err(Error::Degree(format!("twisting element has degree {d}, not 0"))),
        _ => Ok(()),
    }
}

/// `q_{x,i}(w) = Σ_j q_{i+j}(x^{⊙j} ⊙ w) / j!`.  The result is exact up to
/// the window minus the tail bound; a nonzero curvature is kept as the
/// arity-0 coefficient of an unreduced result.
pub fn twist(q: &Coderivation, x: &Vector) -> Result<Coderivation> {
    check_degree_zero(q.space(), x)?;
    let t = finite_window(q.tail(), x, "twist")?;
    let n = q.max_arity();
    if t >= n {
        return Err(Error::NotFinite("window too small for the tail bound".into()));
    }
    let top = n - t;
    let odd = q.odd().to_vec();
    let pw = powers(x, &odd, n);
    let mut out = Coderivation::new(q.space().clone(), q.degree(), Flavor::Unreduced, top);
    for i in 0..=top {
        for w in words(q.space(), i) {
            let mut v = Vector::zero();
            for (j, p) in pw.iter().enumerate().take(n - i + 1) {
                let c = Rational::one() / factorial(j);
                v.add_scaled(&c, &q.coeff(i + j).eval_tensor_front(p, &w, &odd));
            }
            out.set(w, v)?;
        }
    }
    if out.at_unit().is_zero() && q.flavor() == Flavor::Reduced {
        out = out.reduced_part();
    }
    Ok(out)
}

/// `f_{x,i}(w) = Σ_j f_{i+j}(x^{⊙j} ⊙ w) / j!`.
pub fn twist_morphism(f: &CoalgMorphism, x: &Vector) -> Result<CoalgMorphism> {
    check_degree_zero(f.source(), x)?;
    let t = finite_window(f.tail(), x, "twisted morphism")?;
    let n = f.max_arity();
    if t >= n {
        return Err(Error::NotFinite("window too small for the tail bound".into()));
    }
    let top = n - t;
    let odd: Vec<bool> = (0..f.source().dim()).map(|i| f.source().is_odd(i)).collect();
    let pw = powers(x, &odd, n);
    let mut out = CoalgMorphism::new(f.source().clone(), f.target().clone(), top);
    for i in 1..=top {
        for w in words(f.source(), i) {
            let mut v = Vector::zero();
            for (j, p) in pw.iter().enumerate().take(n - i + 1) {
                let c = Rational::one() / factorial(j);
                v.add_scaled(&c, &f.coeff(i + j).eval_tensor_front(p, &w, &odd));
            }
            out.set(w, v)?;
        }
    }
    Ok(out)
}

/// `MC(F)(x) = Σ_{i≥1} f_i(x^{⊙i}) / i!`.
pub fn push_mc(f: &CoalgMorphism, x: &Vector) -> Result<Vector> {
    check_degree_zero(f.source(), x)?;
    let t = finite_window(f.tail(), x, "pushforward")?;
    let n = f.max_arity();
    if t > n {
        return Err(Error::NotFinite("pushforward needs coefficients beyond the window".into()));
    }
    let odd: Vec<bool> = (0..f.source().dim()).map(|i| f.source().is_odd(i)).collect();
    let pw = powers(x, &odd, n);
    let mut out = Vector::zero();
    for (i, p) in pw.iter().enumerate().skip(1) {
        out.add_scaled(&(Rational::one() / factorial(i)), &f.coeff(i).eval_tensor(p));
    }
    Ok(out)
}
