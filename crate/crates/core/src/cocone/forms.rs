//! The homotopy fiber product `N ×ʰ_M L` cut down to forms of `t`-degree
//! at most `T`, as a basis-indexed space, so that the cone structure can
//! be recomputed by transfer from the genuine dgla.
//!
//! Basis of `H_T` (before desuspension):
//! `(n, 0, (1-t) g n)`, `(0, l, t f l)`, `(0, 0, (t^k - t) x)` for
//! `2 ≤ k ≤ T` and `(0, 0, t^k dt x)` for `k < T`.

use std::sync::Arc;

use num_traits::One;

use crate::cocone::cone::Cone;
use crate::cocone::polyform::PolyForm;
use crate::coalgebra::{words, Coderivation, Flavor};
use crate::error::{Error, Result};
use crate::graded::space::{BasisElem, GradedSpace, LinearMap, Vector};
use crate::report::{Check, Tally};
use crate::scalars::{sign, BernoulliTable, Rational};
use crate::transfer::{compare_maps, transfer, verify_transfer, RetractionData};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Letter {
    N(usize),
    L(usize),
    Bump(usize, usize),
    Dt(usize, usize),
}

impl Letter {
    fn power(self) -> usize {
        match self {
            Letter::N(_) | Letter::L(_) => 1,
            Letter::Bump(k, _) => k,
            Letter::Dt(k, _) => k + 1,
        }
    }
}

/// An element `(n, l, ω)` of the fiber product.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Triple {
    pub n: Vector,
    pub l: Vector,
    pub form: PolyForm,
}

pub struct FormModel<'c> {
    cone: &'c Cone,
    bound: usize,
    letters: Vec<Letter>,
    space: Arc<GradedSpace>,
    m_off: usize,
    bump_off: usize,
    dt_off: usize,
}

impl<'c> FormModel<'c> {
    /// Forms of `t`-degree at most `2 · cap`.
    pub fn new(cone: &'c Cone, cap: usize) -> Result<FormModel<'c>> {
        let bound = (2 * cap).max(2);
        let (n, l, m) = (cone.n_gla().space(), cone.l_gla().space(), cone.m_gla().space());
        let mut letters = Vec::new();
        let mut basis = Vec::new();
        for a in 0..n.dim() {
            letters.push(Letter::N(a));
            basis.push(BasisElem { name: format!("sn:{}", n.name(a)), degree: n.degree(a) - 1 });
        }
        for a in 0..l.dim() {
            letters.push(Letter::L(a));
            basis.push(BasisElem { name: format!("sl:{}", l.name(a)), degree: l.degree(a) - 1 });
        }
        let bump_off = letters.len();
        for k in 2..=bound {
            for x in 0..m.dim() {
                letters.push(Letter::Bump(k, x));
                basis.push(BasisElem { name: format!("t{k}-t:{}", m.name(x)), degree: m.degree(x) - 1 });
            }
        }
        let dt_off = letters.len();
        for k in 0..bound {
            for x in 0..m.dim() {
                letters.push(Letter::Dt(k, x));
                basis.push(BasisElem { name: format!("t{k}dt:{}", m.name(x)), degree: m.degree(x) });
            }
        }
        let space = Arc::new(GradedSpace::new(basis)?);
        Ok(FormModel { cone, bound, letters, space, m_off: m.dim(), bump_off, dt_off })
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    fn dt_index(&self, k: usize, x: usize) -> usize {
        self.dt_off + k * self.m_off + x
    }

    fn bump_index(&self, k: usize, x: usize) -> usize {
        self.bump_off + (k - 2) * self.m_off + x
    }

    fn g(&self) -> &LinearMap {
        self.cone.g_map()
    }

    fn f(&self) -> &LinearMap {
        self.cone.f_map()
    }

    /// The element of `H_T` a basis letter stands for.
    pub fn lift(&self, letter: usize) -> Triple {
        match self.letters[letter] {
            Letter::N(a) => {
                let gn = self.g().column(a).clone();
                let mut form = PolyForm::constant(&gn);
                form.add_scaled(&-Rational::one(), &PolyForm::plain(1, &gn));
                Triple { n: Vector::basis(a), l: Vector::zero(), form }
            }
            Letter::L(a) => Triple { n: Vector::zero(), l: Vector::basis(a), form: PolyForm::plain(1, self.f().column(a)) },
            Letter::Bump(k, x) => {
                let mut form = PolyForm::plain(k, &Vector::basis(x));
                form.add_scaled(&-Rational::one(), &PolyForm::plain(1, &Vector::basis(x)));
                Triple { n: Vector::zero(), l: Vector::zero(), form }
            }
            Letter::Dt(k, x) => Triple { n: Vector::zero(), l: Vector::zero(), form: PolyForm::with_dt(k, &Vector::basis(x)) },
        }
    }

    /// Coordinates of an element of the fiber product.
    pub fn coords(&self, x: &Triple) -> Result<Vector> {
        let nl = self.cone.l_offset();
        let mut out = x.n.clone();
        out.add_assign(&x.l.shifted_indices(nl));
        let mut rest = x.form.clone();
        let gn = self.g().apply(&x.n);
        rest.add_scaled(&-Rational::one(), &PolyForm::constant(&gn));
        rest.add_scaled(&Rational::one(), &PolyForm::plain(1, &gn));
        rest.add_scaled(&-Rational::one(), &PolyForm::plain(1, &self.f().apply(&x.l)));
        let mut linear = Vector::zero();
        for (k, v) in rest.plain_terms() {
            match k {
                0 => return Err(Error::Axiom("the form does not start at g(n)".into())),
                1 => linear.add_assign(v),
                k if k > self.bound => return Err(Error::Window { requested: k, available: self.bound }),
                k => {
                    linear.add_assign(v);
                    out.add_assign(&v.reindex(|i| Some(self.bump_index(k, i))));
                }
            }
        }
        if !linear.is_zero() {
            return Err(Error::Axiom("the form does not end at f(l)".into()));
        }
        for (k, v) in rest.dt_terms() {
            if k >= self.bound {
                return Err(Error::Window { requested: k + 1, available: self.bound });
            }
            out.add_assign(&v.reindex(|i| Some(self.dt_index(k, i))));
        }
        Ok(out)
    }

    fn d(&self, x: &Triple) -> Triple {
        let dn = self.cone.n_gla().differential().map(|d| d.apply(&x.n)).unwrap_or_default();
        let dl = self.cone.l_gla().differential().map(|d| d.apply(&x.l)).unwrap_or_default();
        Triple { n: dn, l: dl, form: x.form.d(self.cone.m_gla()) }
    }

    fn bracket(&self, x: &Triple, y: &Triple) -> Triple {
        Triple {
            n: self.cone.n_gla().bracket(&x.n, &y.n),
            l: self.cone.l_gla().bracket(&x.l, &y.l),
            form: x.form.bracket(self.cone.m_gla(), &y.form),
        }
    }

    /// `q₁ = -s⁻¹d` and `q₂ = (-1)^{|x|} s⁻¹[x, y]` on pairs of total power
    /// at most `T`; nothing is stored beyond.
    pub fn structure(&self, n: usize) -> Result<Coderivation> {
        let dim = self.space.dim();
        let mut q = Coderivation::new(self.space.clone(), 1, Flavor::Reduced, n.max(2));
        for j in 0..dim {
            q.set(vec![j], self.coords(&self.d(&self.lift(j)))?.scaled(&-Rational::one()))?;
        }
        for a in 0..dim {
            for b in a..dim {
                if a == b && self.space.is_odd(a) {
                    continue;
                }
                if self.letters[a].power() + self.letters[b].power() > self.bound {
                    continue;
                }
                let v = self.coords(&self.bracket(&self.lift(a), &self.lift(b)))?;
                if !v.is_zero() {
                    q.set(vec![a, b], v.scaled(&sign(!self.space.is_odd(a))))?;
                }
            }
        }
        Ok(q)
    }

    /// `f₁` via `(1-t) g(n) + t f(l) + dt m`, `π` via `∫₀¹`, `K` via
    /// `∫₀ᵗ - t ∫₀¹`.
    pub fn retraction(&self, q1: LinearMap) -> Result<RetractionData> {
        let cone = self.cone;
        let (dim, cdim, mo) = (self.space.dim(), cone.space().dim(), cone.m_offset());
        let pi = LinearMap::from_fn(dim, cdim, 0, |j| match self.letters[j] {
            Letter::N(_) | Letter::L(_) => Vector::basis(j),
            Letter::Bump(..) => Vector::zero(),
            Letter::Dt(k, x) => Vector::term(mo + x, Rational::one() / Rational::from_integer((k + 1).into())),
        });
        let f1 = LinearMap::from_fn(cdim, dim, 0, |j| if j < mo { Vector::basis(j) } else { Vector::basis(self.dt_index(0, j - mo)) });
        let k = LinearMap::from_fn(dim, dim, -1, |j| match self.letters[j] {
            Letter::Dt(k, x) if k >= 1 => Vector::term(self.bump_index(k + 1, x), Rational::one() / Rational::from_integer((k + 1).into())),
            _ => Vector::zero(),
        });
        RetractionData::new(self.space.clone(), cone.space().clone(), q1, cone.r1(), pi, f1, k)
    }

    /// Largest letter power in a vector of `V_T`.
    fn power(&self, v: &Vector) -> usize {
        v.iter().map(|(i, _)| self.letters[i].power()).max().unwrap_or(0)
    }

    /// Transfers the truncated décalage to the cone and compares with the
    /// closed-form structure up to arity `n`.
    pub fn oracle(&self, table: &BernoulliTable, n: usize) -> Result<Vec<Check>> {
        if 2 * n > self.bound {
            return Err(Error::Window { requested: 2 * n, available: self.bound });
        }
        let q = self.structure(n)?;
        let q1 = LinearMap::from_fn(self.space.dim(), self.space.dim(), 1, |j| q.value(&[j]));
        let data = self.retraction(q1)?;
        let mut out = data.validate()?;
        out.extend(data.side_conditions()?);
        let res = transfer(&q, &data, n)?;
        for i in 1..=n {
            let mut t = Tally::new("forms_power_bound", i);
            for w in words(data.small.as_ref(), i) {
                let v = res.f.value(&w);
                let p = self.power(&v);
                t.record(p < 2 * i, || (w.iter().map(|&l| data.small.name(l).to_string()).collect(), format!("power {p}"), format!("< {}", 2 * i)));
            }
            let c = t.finish();
            if !c.pass {
                return Err(Error::Window { requested: 2 * i, available: self.bound });
            }
            out.push(c);
        }
        out.extend(verify_transfer(&q, &data, &res, n, "forms")?);
        let closed = self.cone.structure(table, n)?;
        out.extend(res.r.compare(&closed, "forms_vs_cone", n).into_iter().skip(1));
        out.push(compare_maps("forms_f1", &res.f.linear_part(), &data.f1, &data.small, &data.big));
        Ok(out)
    }
}
