//! The model `(s⁻¹N × A, R_D)` of the homotopy fiber product of two
//! sub-dglas `N, L ⊆ (M, D)`, the morphism `F_D` into the cone, and the
//! constructions built from it: the twisting route through the untwisted
//! big structure, the replacement diagram for `N = M`, and the comparison
//! between two complements of the same `L`.

use std::sync::Arc;

use num_traits::One;

use crate::cocone::cone::Cone;
use crate::coalgebra::{
    check_linfty, check_morphism, decalage_on, extension_from_morphism, twist, twist_morphism, words, Classifying,
    CoalgMorphism, Coderivation, TailBound,
};
use crate::error::{Error, Result};
use crate::graded::gla::{Derivation, Gla};
use crate::graded::homology::induces_iso;
use crate::graded::linalg::rank;
use crate::graded::space::{GradedSpace, LinearMap, Vector};
use crate::hdb::phi::{symmetrized_nested, Seed};
use crate::hdb::split::Split;
use crate::report::Check;
use crate::scalars::{factorial, BernoulliTable, Rational};
use crate::transfer::{compare_maps, right_inverse, transfer, DerivationAlgebra, RetractionData, Section5};

fn linear(q: &Coderivation) -> LinearMap {
    let n = q.space().dim();
    LinearMap::from_fn(n, n, q.degree(), |j| q.value(&[j]))
}

fn positions(idx: &[usize], dim: usize) -> Vec<Option<usize>> {
    let mut pos = vec![None; dim];
    for (k, &i) in idx.iter().enumerate() {
        pos[i] = Some(k);
    }
    pos
}

/// `R_D` and `F_D` in closed form, with the retraction data from the cone.
#[derive(Clone, Debug)]
pub struct FiberModel {
    md: Gla,
    d: LinearMap,
    n_idx: Vec<usize>,
    l_idx: Vec<usize>,
    a_idx: Vec<usize>,
    cone: Cone,
    space: Arc<GradedSpace>,
    a_space: Arc<GradedSpace>,
    r: Coderivation,
    f: CoalgMorphism,
    data: RetractionData,
}

impl FiberModel {
    /// `m` split with `A` closed, `d` a square-zero degree-one derivation
    /// preserving `L` and `N = span(n_idx)`.
    pub fn new(m: &Gla, d: &LinearMap, n_idx: &[usize], n: usize) -> Result<FiberModel> {
        if n == 0 {
            return Err(Error::Window { requested: 0, available: 1 });
        }
        let md = m.clone().without_differential().with_differential(d.clone())?;
        let split = Split::new(&md)?;
        let (a_idx, l_idx) = (split.a_indices().to_vec(), split.l_indices().to_vec());
        let a_space = split.a_space().clone();
        let cone = Cone::of_inclusions(&md, n_idx, &l_idx)?;
        let nspace = Arc::new(cone.n_gla().space().tagged("sn", -1));
        let space = Arc::new(GradedSpace::direct_sum(&[&*nspace, &*a_space])?.0);

        let qn = decalage_on(cone.n_gla(), nspace.clone(), n)?;
        let mut cl = Classifying::new(nspace, a_space.clone(), n);
        for (k, &x) in n_idx.iter().enumerate() {
            cl.set(vec![k], split.phi_element(&Vector::basis(x), n)?)?;
        }
        let r = extension_from_morphism(space.clone(), &qn, &split.phi_derivation(d, n)?, &cl)?;

        let (nn, lo, mo) = (n_idx.len(), cone.l_offset(), cone.m_offset());
        let l_pos = positions(&l_idx, md.dim());
        let to_sl = |x: &Vector| md.project_l(x).reindex(|i| l_pos[i].map(|p| lo + p));
        let mut f = CoalgMorphism::new(space.clone(), cone.space().clone(), n);
        for (k, &x) in n_idx.iter().enumerate() {
            let mut v = Vector::basis(k);
            v.add_assign(&to_sl(&Vector::basis(x)));
            f.set(vec![k], v)?;
        }
        for (k, &a) in a_idx.iter().enumerate() {
            let mut v = to_sl(d.column(a));
            v.add_term(mo + a, Rational::one());
            f.set(vec![nn + k], v)?;
        }
        let apply = |x: &Vector| -> Result<Vector> { Ok(d.apply(x)) };
        for i in 1..=n {
            let inv = Rational::one() / factorial(i);
            for aw in words(&a_space, i) {
                let shifted: Vec<usize> = aw.iter().map(|&l| nn + l).collect();
                if i >= 2 {
                    if let Some(x) = symmetrized_nested(&split, &Seed::Map(&apply), &aw)? {
                        f.set(shifted.clone(), to_sl(&x).scaled(&inv))?;
                    }
                }
                if i == n {
                    continue;
                }
                for (k, &x) in n_idx.iter().enumerate() {
                    if let Some(y) = symmetrized_nested(&split, &Seed::Element(&Vector::basis(x)), &aw)? {
                        let mut w = vec![k];
                        w.extend_from_slice(&shifted);
                        f.set(w, to_sl(&y).scaled(&inv))?;
                    }
                }
            }
        }

        let (bd, sd) = (cone.space().dim(), space.dim());
        let a_pos = positions(&a_idx, md.dim());
        let pi = LinearMap::from_fn(bd, sd, 0, |j| {
            if j < lo {
                Vector::basis(j)
            } else if j < mo {
                Vector::zero()
            } else {
                a_pos[j - mo].map(|k| Vector::basis(nn + k)).unwrap_or_default()
            }
        });
        let k = LinearMap::from_fn(bd, bd, -1, |j| {
            if j >= mo {
                l_pos[j - mo].map(|p| Vector::basis(lo + p)).unwrap_or_default()
            } else {
                Vector::zero()
            }
        });
        let data = RetractionData::new(cone.space().clone(), space.clone(), cone.r1(), linear(&r), pi, f.linear_part(), k)?;
        Ok(FiberModel { md, d: d.clone(), n_idx: n_idx.to_vec(), l_idx, a_idx, cone, space, a_space, r, f, data })
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn a_space(&self) -> &Arc<GradedSpace> {
        &self.a_space
    }

    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    /// `R_D`.
    pub fn structure(&self) -> &Coderivation {
        &self.r
    }

    /// `F_D`.
    pub fn morphism(&self) -> &CoalgMorphism {
        &self.f
    }

    pub fn retraction(&self) -> &RetractionData {
        &self.data
    }

    pub fn cone_structure(&self, n: usize) -> Result<Coderivation> {
        self.cone.structure(&BernoulliTable::exact(), n)
    }

    /// The retraction identities, `R_D•R_D = 0`, the morphism equation for
    /// `F_D`, and transfer from the cone against both closed forms.
    pub fn oracle(&self, n: usize) -> Result<Vec<Check>> {
        let q = self.cone_structure(n)?;
        let mut out = self.data.validate()?;
        out.extend(self.data.side_conditions()?);
        out.extend(check_linfty(&self.r, n, "fiber_model/linfty")?);
        out.extend(check_morphism(&self.f, &self.r, &q, n, "fiber_model/morphism")?);
        let res = transfer(&q, &self.data, n)?;
        out.extend(res.r.compare(&self.r, "fiber_model/r_vs_transfer", n));
        out.extend(res.f.compare(&self.f, "fiber_model/f_vs_transfer", n));
        Ok(out)
    }

    /// Twists the untwisted big structure, its transfer and the closed
    /// morphism by `s⁻¹D`, restricts to `N`, and compares with `R_D`, the
    /// cone structure and `F_D`.
    pub fn twisting_route(&self, n: usize) -> Result<Vec<Check>> {
        let m0 = self.md.clone().without_differential();
        let ders = DerivationAlgebra::new(&m0, vec![Derivation::new("D", self.d.clone())])?;
        let s5 = Section5::new(&m0, ders)?;
        let (q, _, res) = s5.transfer(n + 1)?;
        let x = Vector::basis(s5.d_index(0));

        let src: Vec<usize> = self
            .n_idx
            .iter()
            .map(|&i| s5.sm_index(i))
            .chain((0..self.a_idx.len()).map(|k| s5.a_index(k)))
            .collect();
        let off = s5.cyl_offset();
        let dm = self.md.dim();
        let tgt: Vec<usize> = self.n_idx.iter().map(|&i| off + i).chain(off + dm..s5.big().dim()).collect();

        let r = twist(&s5.bounded_along(res.r, 0)?, &x)?.restrict(self.space.clone(), &src)?;
        let q = twist(&s5.bounded_along(q, 0)?, &x)?.restrict(self.cone.space().clone(), &tgt)?;
        let f = s5.closed_morphism(n + 1)?.with_tail(Some(TailBound::along([s5.d_index(0)], 1)));
        let f = twist_morphism(&f, &x)?.restrict(self.space.clone(), &src, self.cone.space().clone(), &tgt)?;

        let mut out = r.compare(&self.r, "twisting/r", n);
        out.extend(q.compare(&self.cone_structure(n)?, "twisting/q", n));
        out.extend(f.compare(&self.f, "twisting/f", n));
        Ok(out)
    }
}

/// The diagram `A → s⁻¹M × A ⇄ s⁻¹L` for `N = M`.
#[derive(Clone, Debug)]
pub struct ReplacementDiagram {
    pub model: FiberModel,
    pub l_space: Arc<GradedSpace>,
    /// `Σ⁻¹(L, D)`.
    pub l_structure: Coderivation,
    /// `(A, Φ(D))`.
    pub a_structure: Coderivation,
    /// `a ↦ (0, a)`.
    pub inclusion: CoalgMorphism,
    /// The projection to `s⁻¹L` after `F_D`.
    pub projection: CoalgMorphism,
    /// `s⁻¹l ↦ (s⁻¹l, 0)`.
    pub section: CoalgMorphism,
    /// The morphism `A → s⁻¹L` of the fiber sequence.
    pub fiber_map: CoalgMorphism,
}

pub fn homotopy_replacement_diagram(m: &Gla, d: &LinearMap, n: usize) -> Result<ReplacementDiagram> {
    let all: Vec<usize> = (0..m.dim()).collect();
    let model = FiberModel::new(m, d, &all, n)?;
    let (l_space, l_structure, a_structure, fiber_map) = {
        let split = Split::new(&model.md)?;
        let (l_space, l_structure) = split.shifted_l(Some(d), n)?;
        let fiber_map = split.projection_morphism(d, l_space.clone(), n)?;
        (l_space, l_structure, split.phi_derivation(d, n)?, fiber_map)
    };
    let (nn, na, nl) = (model.n_idx.len(), model.a_idx.len(), model.l_idx.len());
    let inclusion = CoalgMorphism::strict(
        model.a_space.clone(),
        model.space.clone(),
        &LinearMap::from_fn(na, model.space.dim(), 0, |k| Vector::basis(nn + k)),
        n,
    )?;
    let lo = model.cone.l_offset();
    let p = LinearMap::from_fn(model.cone.space().dim(), nl, 0, |j| {
        if j >= lo && j < lo + nl {
            Vector::basis(j - lo)
        } else {
            Vector::zero()
        }
    });
    let projection = CoalgMorphism::strict(model.cone.space().clone(), l_space.clone(), &p, n)?.compose(&model.f)?;
    let section = CoalgMorphism::strict(
        l_space.clone(),
        model.space.clone(),
        &LinearMap::from_fn(nl, model.space.dim(), 0, |k| Vector::basis(model.l_idx[k])),
        n,
    )?;
    Ok(ReplacementDiagram { model, l_space, l_structure, a_structure, inclusion, projection, section, fiber_map })
}

impl ReplacementDiagram {
    pub fn checks(&self, n: usize) -> Result<Vec<Check>> {
        let r = &self.model.r;
        let mut out = check_morphism(&self.inclusion, &self.a_structure, r, n, "diagram/inclusion")?;
        out.extend(check_morphism(&self.projection, r, &self.l_structure, n, "diagram/projection")?);
        out.extend(check_morphism(&self.section, &self.l_structure, r, n, "diagram/section")?);
        out.extend(self.projection.compose(&self.inclusion)?.compare(&self.fiber_map, "diagram/left_triangle", n));
        let id = CoalgMorphism::strict(self.l_space.clone(), self.l_space.clone(), &LinearMap::identity(self.l_space.dim()), n)?;
        out.extend(self.projection.compose(&self.section)?.compare(&id, "diagram/projection_after_section", n));
        let (dm, dl) = (linear(r), linear(&self.l_structure));
        let down = induces_iso(&self.model.space, &dm, &self.l_space, &dl, &self.projection.linear_part())?;
        let up = induces_iso(&self.l_space, &dl, &self.model.space, &dm, &self.section.linear_part())?;
        out.push(Check::flag("diagram/projection_quasi_iso", down, format!("H(p F_D) iso: {down}")));
        out.push(Check::flag("diagram/section_quasi_iso", up, format!("H(section) iso: {up}")));
        Ok(out)
    }
}

/// The composite `A₁ → s⁻¹cocone₁ → s⁻¹cocone₂ → A₂` for two complements
/// of the same `L`: `F_D` of the first, the strict change of basis `c`
/// (from the basis of `m1` to that of `m2`), and the right inverse of the
/// second transfer.
#[derive(Clone, Debug)]
pub struct ComplementChange {
    pub first: FiberModel,
    pub second: FiberModel,
    pub basis_change: CoalgMorphism,
    pub back: CoalgMorphism,
    pub composite: CoalgMorphism,
    expected_linear: LinearMap,
}

pub fn change_of_complement(m1: &Gla, d1: &LinearMap, m2: &Gla, d2: &LinearMap, c: &LinearMap, n: usize) -> Result<ComplementChange> {
    c.check_degree(m1.space(), m2.space())?;
    if c.compose(d1)? != d2.compose(c)? {
        return Err(Error::Axiom("the change of basis does not intertwine the differentials".into()));
    }
    let first = FiberModel::new(m1, d1, &[], n)?;
    let second = FiberModel::new(m2, d2, &[], n)?;
    let (c1, c2) = (&first.cone, &second.cone);
    if c1.l_gla().dim() != c2.l_gla().dim() || c1.m_gla().dim() != c2.m_gla().dim() {
        return Err(Error::SpaceMismatch("the two cocones have different dimensions".into()));
    }
    let l2_pos = positions(&second.l_idx, m2.dim());
    let (lo1, mo1, lo2, mo2) = (c1.l_offset(), c1.m_offset(), c2.l_offset(), c2.m_offset());
    let cols = (0..c1.space().dim())
        .map(|j| {
            if j < mo1 {
                let col = c.column(first.l_idx[j - lo1]);
                match col.iter().find(|(i, _)| l2_pos[*i].is_none()) {
                    Some(_) => Err(Error::Axiom(format!("the change of basis moves {} out of L", m1.space().name(first.l_idx[j - lo1])))),
                    None => Ok(col.reindex(|i| l2_pos[i].map(|p| lo2 + p))),
                }
            } else {
                Ok(c.column(j - mo1).shifted_indices(mo2))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let ct = LinearMap::new(c1.space().dim(), c2.space().dim(), 0, cols)?;
    let basis_change = CoalgMorphism::strict(c1.space().clone(), c2.space().clone(), &ct, n)?;
    let back = right_inverse(&second.cone_structure(n)?, &second.data, n)?;
    let composite = back.compose(&basis_change.compose(&first.f)?)?;
    let a2_pos = positions(&second.a_idx, m2.dim());
    let expected_linear = LinearMap::from_fn(first.a_idx.len(), second.a_idx.len(), 0, |k| {
        m2.project_a(c.column(first.a_idx[k])).reindex(|i| a2_pos[i])
    });
    Ok(ComplementChange { first, second, basis_change, back, composite, expected_linear })
}

impl ComplementChange {
    pub fn checks(&self, n: usize) -> Result<Vec<Check>> {
        let (q1, q2) = (self.first.cone_structure(n)?, self.second.cone_structure(n)?);
        let (r1, r2) = (&self.first.r, &self.second.r);
        let mut out = self.second.data.side_conditions()?;
        out.extend(check_morphism(&self.basis_change, &q1, &q2, n, "complement_change/basis")?);
        out.extend(check_morphism(&self.back, &q2, r2, n, "complement_change/back")?);
        out.extend(check_morphism(&self.composite, r1, r2, n, "complement_change/composite")?);
        let lin = self.composite.linear_part();
        out.push(compare_maps("complement_change/linear_part", &lin, &self.expected_linear, &self.first.a_space, &self.second.a_space));
        let (a1, a2) = (self.first.a_space.dim(), self.second.a_space.dim());
        let invertible = a1 == a2 && rank(lin.columns()) == a1;
        out.push(Check::flag("complement_change/invertible", invertible, format!("rank {} of {a1} -> {a2}", rank(lin.columns()))));
        Ok(out)
    }
}
