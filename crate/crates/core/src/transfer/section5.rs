//! The retraction from `s⁻¹Der × s⁻¹cyl` onto `s⁻¹Der × s⁻¹M × A`, where
//! `cyl = s⁻¹M × s⁻¹L × M` is the cocylinder of `L ⊆ M` (zero
//! differentials) and `Der` is a finite bracket-closed list of
//! derivations preserving `L`.  Transfer along it reproduces the higher
//! derived brackets, which are also assembled directly as an extension.
//!
//! Big space `V = [sd | sn | sl | M]`, small space `W = [sd | sm | A]`.

use std::collections::HashSet;
use std::sync::Arc;

use num_traits::One;

use crate::cocone::cone::Cone;
use crate::coalgebra::word::words_over;
use crate::coalgebra::{
    check_ideal, decalage, decalage_on, extension_from_morphism, morphism_from_extension, Classifying, CoalgMorphism, Coderivation, Flavor, TailBound,
};
use crate::error::{Error, Result};
use crate::graded::gla::{coordinates_in_span, Derivation, Gla, Part};
use crate::graded::space::{GradedSpace, LinearMap, Vector};
use crate::hdb::phi::{symmetrized_nested, Seed};
use crate::hdb::split::Split;
use crate::report::{Check, Tally};
use crate::scalars::{factorial, rat, BernoulliTable, Rational};
use crate::transfer::{transfer, verify_transfer, RetractionData, TransferResult};

/// A finite list of derivations of `M` preserving `L`, closed under the
/// graded commutator, as a graded Lie algebra with zero differential.
#[derive(Clone, Debug)]
pub struct DerivationAlgebra {
    ders: Vec<Derivation>,
    gla: Gla,
}

impl DerivationAlgebra {
    pub fn empty() -> DerivationAlgebra {
        DerivationAlgebra { ders: Vec::new(), gla: Gla::abelian(GradedSpace::empty()) }
    }

    /// Validates each derivation and the closure of the list; repeated
    /// names get a `#k` suffix.
    pub fn new(m: &Gla, ders: Vec<Derivation>) -> Result<DerivationAlgebra> {
        let mut seen = HashSet::new();
        let mut named = Vec::with_capacity(ders.len());
        for mut d in ders {
            if let Some(c) = d.validate(m).into_iter().find(|c| !c.pass) {
                return Err(Error::Axiom(format!("{} fails {} on {:?}", d.name, c.identity, c.word)));
            }
            let base = d.name.clone();
            let mut k = 1;
            while !seen.insert(d.name.clone()) {
                k += 1;
                d.name = format!("{base}#{k}");
            }
            named.push(d);
        }
        let maps: Vec<LinearMap> = named.iter().map(|d| d.map.clone()).collect();
        if !maps.is_empty() && coordinates_in_span(&maps, &maps[0]).is_none() {
            return Err(Error::Invalid("the selected derivations are linearly dependent".into()));
        }
        let mut entries = Vec::new();
        for i in 0..named.len() {
            for j in i..named.len() {
                let c = named[i].map.commutator(&named[j].map)?;
                if c.is_zero() {
                    continue;
                }
                let v = coordinates_in_span(&maps, &c).ok_or_else(|| {
                    Error::Axiom(format!("the selection is not bracket-closed: [{}, {}] leaves its span", named[i].name, named[j].name))
                })?;
                entries.push((i, j, v));
            }
        }
        let pairs: Vec<(&str, i64)> = named.iter().map(|d| (d.name.as_str(), d.degree())).collect();
        let gla = Gla::new(GradedSpace::from_pairs(&pairs)?, entries)?;
        Ok(DerivationAlgebra { ders: named, gla })
    }

    /// Adds commutators until the list is closed, giving up past `limit`
    /// elements.
    pub fn closure(m: &Gla, ders: Vec<Derivation>, limit: usize) -> Result<DerivationAlgebra> {
        let mut list: Vec<Derivation> = Vec::new();
        let mut maps: Vec<LinearMap> = Vec::new();
        let push = |d: Derivation, list: &mut Vec<Derivation>, maps: &mut Vec<LinearMap>| {
            if d.map.is_zero() {
                return;
            }
            let mut trial = maps.clone();
            trial.push(d.map.clone());
            if coordinates_in_span(&trial, &d.map).is_some() {
                maps.push(d.map.clone());
                list.push(d);
            }
        };
        for d in ders {
            push(d, &mut list, &mut maps);
        }
        let mut i = 0;
        while i < list.len() {
            for j in 0..=i {
                let c = list[i].commutator(&list[j]);
                push(c, &mut list, &mut maps);
                if list.len() > limit {
                    return Err(Error::NotFinite(format!("closure exceeds {limit} derivations")));
                }
            }
            i += 1;
        }
        DerivationAlgebra::new(m, list)
    }

    pub fn derivations(&self) -> &[Derivation] {
        &self.ders
    }

    pub fn gla(&self) -> &Gla {
        &self.gla
    }

    pub fn len(&self) -> usize {
        self.ders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ders.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct Section5 {
    m: Gla,
    ders: DerivationAlgebra,
    a_idx: Vec<usize>,
    l_idx: Vec<usize>,
    cone: Cone,
    dspace: Arc<GradedSpace>,
    a_space: Arc<GradedSpace>,
    big: Arc<GradedSpace>,
    small: Arc<GradedSpace>,
    table: BernoulliTable,
}

impl Section5 {
    /// `g` is taken without its differential; `L` must be closed, `A` need
    /// not be.
    pub fn new(g: &Gla, ders: DerivationAlgebra) -> Result<Section5> {
        let m = g.clone().without_differential();
        let (a_idx, l_idx, a_space) = {
            let split = Split::loose(&m)?;
            (split.a_indices().to_vec(), split.l_indices().to_vec(), split.a_space().clone())
        };
        let cone = Cone::cocylinder(&m, &l_idx)?;
        let dspace = Arc::new(ders.gla().space().tagged("sd", -1));
        let big = Arc::new(GradedSpace::direct_sum(&[&*dspace, &**cone.space()])?.0);
        let small = Arc::new(GradedSpace::direct_sum(&[&*dspace, &m.space().tagged("sm", -1), &*a_space])?.0);
        Ok(Section5 { m, ders, a_idx, l_idx, cone, dspace, a_space, big, small, table: BernoulliTable::exact() })
    }

    /// Uses `table` for the cocylinder inside `Q`; the closed forms keep
    /// the exact values.
    pub fn with_table(mut self, table: BernoulliTable) -> Section5 {
        self.table = table;
        self
    }

    pub fn big(&self) -> &Arc<GradedSpace> {
        &self.big
    }

    pub fn small(&self) -> &Arc<GradedSpace> {
        &self.small
    }

    pub fn gla(&self) -> &Gla {
        &self.m
    }

    pub fn derivations(&self) -> &DerivationAlgebra {
        &self.ders
    }

    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    pub fn a_space(&self) -> &Arc<GradedSpace> {
        &self.a_space
    }

    fn nd(&self) -> usize {
        self.ders.len()
    }

    /// Position of `sm:x` in `W`.
    pub fn sm_index(&self, x: usize) -> usize {
        self.nd() + x
    }

    /// Position of the `k`-th basis vector of `A` in `W`.
    pub fn a_index(&self, k: usize) -> usize {
        self.nd() + self.m.dim() + k
    }

    /// Position of `sd:D_k` in either space.
    pub fn d_index(&self, k: usize) -> usize {
        k
    }

    /// Offset of the cylinder inside `V`.
    pub fn cyl_offset(&self) -> usize {
        self.nd()
    }

    fn l_pos(&self, i: usize) -> Option<usize> {
        self.l_idx.iter().position(|&l| l == i)
    }

    fn a_pos(&self, i: usize) -> Option<usize> {
        self.a_idx.iter().position(|&a| a == i)
    }

    /// `Q` on `V`: the extension of `Σ⁻¹Der` by the cocylinder classified
    /// by the strict morphism `s⁻¹D ↦ Ψ(D)`.
    pub fn big_structure(&self, n: usize) -> Result<Coderivation> {
        let (ds, qd) = decalage(self.ders.gla(), "sd", n)?;
        let r = self.cone.structure(&self.table, n)?;
        let mut cl = Classifying::new(ds.clone(), self.cone.space().clone(), n);
        for (k, d) in self.ders.derivations().iter().enumerate() {
            cl.set(vec![k], self.cone.psi(&d.map, n)?)?;
        }
        extension_from_morphism(self.big.clone(), &qd, &r, &cl)
    }

    /// `π(s⁻¹D, s⁻¹m, s⁻¹l, n) = (s⁻¹D, s⁻¹m, Pn)`, `f₁(s⁻¹D, s⁻¹m, a) =
    /// (s⁻¹D, s⁻¹m, s⁻¹P⊥m, a)`, `K = (0, 0, s⁻¹P⊥n, 0)`.
    pub fn retraction(&self, q: &Coderivation) -> Result<RetractionData> {
        let (nd, dm, dl) = (self.nd(), self.m.dim(), self.l_idx.len());
        let (sl_off, m_off) = (nd + dm, nd + dm + dl);
        let (bd, sd) = (self.big.dim(), self.small.dim());
        let q1 = LinearMap::from_fn(bd, bd, 1, |j| q.value(&[j]));
        let r1 = LinearMap::from_fn(sd, sd, 1, |j| {
            if j >= nd && j < nd + dm {
                self.a_pos(j - nd).map(|k| Vector::basis(self.a_index(k))).unwrap_or_default()
            } else {
                Vector::zero()
            }
        });
        let pi = LinearMap::from_fn(bd, sd, 0, |j| {
            if j < sl_off {
                Vector::basis(j)
            } else if j < m_off {
                Vector::zero()
            } else {
                self.a_pos(j - m_off).map(|k| Vector::basis(self.a_index(k))).unwrap_or_default()
            }
        });
        let k = LinearMap::from_fn(bd, bd, -1, |j| {
            if j >= m_off {
                self.l_pos(j - m_off).map(|p| Vector::basis(sl_off + p)).unwrap_or_default()
            } else {
                Vector::zero()
            }
        });
        RetractionData::new(self.big.clone(), self.small.clone(), q1, r1, pi, self.f1(), k)
    }

    fn f1(&self) -> LinearMap {
        let (nd, dm, dl) = (self.nd(), self.m.dim(), self.l_idx.len());
        let (sl_off, m_off) = (nd + dm, nd + dm + dl);
        LinearMap::from_fn(self.small.dim(), self.big.dim(), 0, |j| {
            if j < nd {
                Vector::basis(j)
            } else if j < nd + dm {
                let mut v = Vector::basis(j);
                if let Some(p) = self.l_pos(j - nd) {
                    v.add_term(sl_off + p, Rational::one());
                }
                v
            } else {
                Vector::basis(m_off + self.a_idx[j - nd - dm])
            }
        })
    }

    /// Big structure and retraction data together.
    pub fn build(&self, n: usize) -> Result<(Coderivation, RetractionData)> {
        let q = self.big_structure(n)?;
        let data = self.retraction(&q)?;
        Ok((q, data))
    }

    pub fn transfer(&self, n: usize) -> Result<(Coderivation, RetractionData, TransferResult)> {
        let (q, data) = self.build(n)?;
        let res = transfer(&q, &data, n)?;
        Ok((q, data, res))
    }

    fn semidirect(&self) -> Result<Gla> {
        let nd = self.nd();
        let (space, _) = GradedSpace::direct_sum(&[&self.ders.gla().space().tagged("der", 0), self.m.space()])?;
        let mut entries = Vec::new();
        for (i, j, v) in self.ders.gla().entries() {
            entries.push((i, j, v));
        }
        for (i, d) in self.ders.derivations().iter().enumerate() {
            for x in 0..self.m.dim() {
                let v = d.map.column(x);
                if !v.is_zero() {
                    entries.push((i, nd + x, v.shifted_indices(nd)));
                }
            }
        }
        for (i, j, v) in self.m.entries() {
            entries.push((nd + i, nd + j, v.shifted_indices(nd)));
        }
        Gla::new(space, entries)
    }

    /// The closed form on `W`: `r₁(s⁻¹m) = Pm`, the décalage of
    /// `Der ⋉ M` in arity two, and `Φ(D)`, `Φ(m)` on mixed words.
    pub fn closed_structure(&self, n: usize) -> Result<Coderivation> {
        let split = Split::new(&self.m)?;
        let semi = self.semidirect()?;
        let (base, _) = GradedSpace::direct_sum(&[&*self.dspace, &self.m.space().tagged("sm", -1)])?;
        let base = Arc::new(base);
        let q = decalage_on(&semi, base.clone(), n)?;
        let fibre = Coderivation::new(self.a_space.clone(), 1, Flavor::Reduced, n);
        let mut cl = Classifying::new(base, self.a_space.clone(), n);
        for (k, d) in self.ders.derivations().iter().enumerate() {
            cl.set(vec![k], split.phi_derivation(&d.map, n)?)?;
        }
        for x in 0..self.m.dim() {
            cl.set(vec![self.nd() + x], split.phi_element(&Vector::basis(x), n)?)?;
        }
        extension_from_morphism(self.small.clone(), &q, &fibre, &cl)
    }

    /// The closed form of the transferred morphism: `f₁` as in the
    /// retraction, and on `s⁻¹D ⊗ a^{⊙i}` and `s⁻¹m ⊗ a^{⊙i}` the value
    /// `s⁻¹(1/i!) Σ ε P⊥[⋯]` in the `s⁻¹L` slot.
    pub fn closed_morphism(&self, n: usize) -> Result<CoalgMorphism> {
        let split = Split::new(&self.m)?;
        let f1 = self.f1();
        let (nd, dm) = (self.nd(), self.m.dim());
        let sl_off = nd + dm;
        let mut f = CoalgMorphism::new(self.small.clone(), self.big.clone(), n);
        for j in 0..self.small.dim() {
            f.set(vec![j], f1.column(j).clone())?;
        }
        let odd: Vec<bool> = (0..self.small.dim()).map(|k| self.small.is_odd(k)).collect();
        let a_letters: Vec<usize> = (0..self.a_idx.len()).map(|k| self.a_index(k)).collect();
        for i in 1..n {
            let inv = Rational::one() / factorial(i);
            for aw in words_over(&a_letters, &odd, i) {
                let local: Vec<usize> = aw.iter().map(|&l| l - nd - dm).collect();
                for head in 0..nd + dm {
                    let x = if head < nd {
                        let d = &self.ders.derivations()[head].map;
                        let apply = |x: &Vector| -> Result<Vector> { Ok(d.apply(x)) };
                        symmetrized_nested(&split, &Seed::Map(&apply), &local)?
                    } else {
                        symmetrized_nested(&split, &Seed::Element(&Vector::basis(head - nd)), &local)?
                    };
                    let Some(x) = x else { continue };
                    let v = self.m.project_l(&x).scaled(&inv).reindex(|k| self.l_pos(k).map(|p| sl_off + p));
                    if v.is_zero() {
                        continue;
                    }
                    let mut w = vec![head];
                    w.extend_from_slice(&aw);
                    f.set(w, v)?;
                }
            }
        }
        Ok(f)
    }

    /// Transfer against the closed forms, with the post-hoc checks.
    pub fn oracle(&self, n: usize) -> Result<Vec<Check>> {
        let (q, data, res) = self.transfer(n)?;
        let mut out = data.validate()?;
        out.extend(data.side_conditions()?);
        out.extend(verify_transfer(&q, &data, &res, n, "section5")?);
        let r = self.closed_structure(n)?;
        out.extend(res.r.compare(&r, "section5_r_vs_closed_form", n).into_iter().skip(1));
        out.extend(res.f.compare(&self.closed_morphism(n)?, "section5_f_vs_closed_form", n));
        Ok(out)
    }

    /// Reads the classifying morphism back off `Q`: it is strict, equal to
    /// `s⁻¹D ↦ Ψ(D)`, and the base is the décalage of `Der`.
    pub fn classifying_checks(&self, q: &Coderivation, n: usize) -> Result<Vec<Check>> {
        let (base, fibre, cl) = morphism_from_extension(q, self.dspace.clone(), self.cone.space().clone())?;
        let (_, qd) = decalage(self.ders.gla(), "sd", n)?;
        let r = self.cone.structure(&BernoulliTable::exact(), n)?;
        let mut want = Classifying::new(self.dspace.clone(), self.cone.space().clone(), n);
        for (k, d) in self.ders.derivations().iter().enumerate() {
            want.set(vec![k], self.cone.psi(&d.map, n)?)?;
        }
        let mut out = vec![Check::flag("section5_classifying_strict", cl.is_strict(), format!("{} nonzero components", cl.iter().count()))];
        out.extend(cl.compare(&want, "section5_classifying_psi"));
        out.extend(base.compare(&qd, "section5_base", n));
        out.extend(fibre.compare(&r, "section5_fibre", n));
        Ok(out)
    }

    /// `A` is an L∞[1] ideal of the transferred structure.
    pub fn ideal_checks(&self, r: &Coderivation, n: usize) -> Vec<Check> {
        let ideal: Vec<usize> = (0..self.a_idx.len()).map(|k| self.a_index(k)).collect();
        check_ideal(r, &ideal, n, "section5_a_ideal")
    }

    /// `R` restricted to the letters `sm:x ⊗ A…` (or `sd:D ⊗ A…`), as a
    /// coderivation of `SA`.
    pub fn brackets_of(&self, r: &Coderivation, head: &Vector, degree: i64, flavor: Flavor, n: usize) -> Result<Coderivation> {
        let nd = self.nd();
        let a0 = nd + self.m.dim();
        let odd: Vec<bool> = (0..self.small.dim()).map(|k| self.small.is_odd(k)).collect();
        let a_letters: Vec<usize> = (0..self.a_idx.len()).map(|k| self.a_index(k)).collect();
        let mut out = Coderivation::new(self.a_space.clone(), degree, flavor, n);
        let start = if flavor == Flavor::Reduced { 1 } else { 0 };
        for i in start..=n {
            for aw in words_over(&a_letters, &odd, i) {
                let mut v = Vector::zero();
                for (h, c) in head.iter() {
                    let mut w = vec![h];
                    w.extend_from_slice(&aw);
                    v.add_scaled(c, &r.value(&w));
                }
                out.set(aw.iter().map(|&l| l - a0).collect(), v.filter(|k| k >= a0).reindex(|k| k.checked_sub(a0)))?;
            }
        }
        Ok(out)
    }

    /// Words with two or more `sd:D` letters vanish, so `Q` and `R` can be
    /// twisted by `s⁻¹D`.
    pub fn bounded_along(&self, q: Coderivation, d: usize) -> Result<Coderivation> {
        let tail = TailBound::along([self.d_index(d)], 1);
        for w in q.support() {
            if tail.count_in(&w) > 1 {
                return Err(Error::NotFinite(format!("{} does not square to zero", self.ders.derivations()[d].name)));
            }
        }
        Ok(q.with_tail(Some(tail)))
    }
}

/// Where the generalized brackets start.
#[derive(Clone, Copy, Debug)]
pub enum TransferSeed<'a> {
    Element(&'a Vector),
    Derivation(&'a Derivation),
}

/// The brackets of `m` (or `D`) on `A` read off the transferred structure,
/// for a complement `A` that need not be a subalgebra.
pub fn generalized_brackets_via_transfer(g: &Gla, seed: TransferSeed, n: usize) -> Result<Coderivation> {
    let m = g.clone().without_differential();
    match seed {
        TransferSeed::Element(x) => {
            let s5 = Section5::new(&m, DerivationAlgebra::empty())?;
            let (_, _, res) = s5.transfer(n + 1)?;
            let deg = m.space().homogeneous_degree(x)?.unwrap_or(0);
            s5.brackets_of(&res.r, &x.reindex(|k| Some(s5.sm_index(k))), deg, Flavor::Unreduced, n)
        }
        TransferSeed::Derivation(d) => {
            if d.map.is_zero() {
                return Err(Error::Invalid(format!("{} is zero", d.name)));
            }
            let s5 = Section5::new(&m, DerivationAlgebra::closure(&m, vec![d.clone()], 16)?)?;
            let (_, _, res) = s5.transfer(n + 1)?;
            s5.brackets_of(&res.r, &Vector::basis(s5.d_index(0)), d.degree(), Flavor::Reduced, n)
        }
    }
}

/// `Φ(m)₁(a) = P[m, a] - ½ P[Pm, a]` on every basis vector of `A`.
pub fn check_first_generalized_bracket(g: &Gla, m: &Vector, phi: &Coderivation) -> Result<Check> {
    let parts = g.require_parts()?;
    let a_idx: Vec<usize> = (0..g.dim()).filter(|&i| parts[i] == Part::A).collect();
    let sp = phi.space();
    let mut t = Tally::new("generalized_first_bracket", 1);
    let pm = g.project_a(m);
    for (k, &a) in a_idx.iter().enumerate() {
        let mut v = g.project_a(&g.bracket(m, &Vector::basis(a)));
        v.add_scaled(&rat(-1, 2), &g.project_a(&g.bracket(&pm, &Vector::basis(a))));
        let want = v.reindex(|i| a_idx.iter().position(|&x| x == i));
        let got = phi.value(&[k]);
        t.record(got == want, || (vec![sp.name(k).to_string()], sp.show(&got), sp.show(&want)));
    }
    Ok(t.finish())
}
