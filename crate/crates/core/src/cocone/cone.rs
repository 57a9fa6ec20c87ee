//! The cone `s⁻¹N × s⁻¹L × M` of a pair `g: N → M`, `f: L → M` of dgla
//! morphisms, with its Bernoulli-weighted L∞[1] structure and the linear
//! coderivations `Ψ(D)` induced by derivations of `M` preserving `L`.

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::coalgebra::word::words_over;
use crate::coalgebra::{nr_bracket, words, Coderivation, Flavor};
use crate::error::{Error, Result};
use crate::graded::gla::Gla;
use crate::graded::sign::{koszul_odd, permutations};
use crate::graded::space::{GradedSpace, LinearMap, Vector};
use crate::report::{Check, Tally};
use crate::scalars::{factorial, sign, BernoulliTable, Rational};

#[derive(Clone, Debug)]
pub struct Cone {
    n: Gla,
    l: Gla,
    m: Gla,
    g: LinearMap,
    f: LinearMap,
    /// Positions of `N` and `L` inside `M` when both maps are coordinate
    /// inclusions.
    inclusions: Option<(Vec<usize>, Vec<usize>)>,
    space: Arc<GradedSpace>,
}

fn d_of(g: &Gla) -> LinearMap {
    g.differential().cloned().unwrap_or_else(|| LinearMap::zero(g.dim(), g.dim(), 1))
}

fn check_dgla_morphism(what: &str, src: &Gla, tgt: &Gla, h: &LinearMap) -> Result<()> {
    if h.degree() != 0 {
        return Err(Error::Degree(format!("{what} has degree {}", h.degree())));
    }
    h.check_degree(src.space(), tgt.space())?;
    for i in 0..src.dim() {
        for j in i..src.dim() {
            let lhs = h.apply(src.bracket_basis(i, j));
            let rhs = tgt.bracket(h.column(i), h.column(j));
            if lhs != rhs {
                return Err(Error::Axiom(format!(
                    "{what} does not preserve [{}, {}]",
                    src.space().name(i),
                    src.space().name(j)
                )));
            }
        }
    }
    if d_of(tgt).compose(h)? != h.compose(&d_of(src))? {
        return Err(Error::Axiom(format!("{what} does not commute with the differentials")));
    }
    Ok(())
}

fn inclusion(sub: &[usize], dim: usize) -> LinearMap {
    LinearMap::from_fn(sub.len(), dim, 0, |j| Vector::basis(sub[j]))
}

impl Cone {
    /// Any splittings of the three algebras are dropped.
    pub fn new(n: Gla, l: Gla, m: Gla, g: LinearMap, f: LinearMap) -> Result<Cone> {
        let (n, l, m) = (n.without_parts(), l.without_parts(), m.without_parts());
        for (name, x) in [("N", &n), ("L", &l), ("M", &m)] {
            if let Some(c) = x.validate().into_iter().find(|c| !c.pass) {
                return Err(Error::Axiom(format!("{name} is not a dgla: {} fails on {:?}", c.identity, c.word)));
            }
        }
        check_dgla_morphism("g", &n, &m, &g)?;
        check_dgla_morphism("f", &l, &m, &f)?;
        let (space, _) = GradedSpace::direct_sum(&[&n.space().tagged("sn", -1), &l.space().tagged("sl", -1), m.space()])?;
        Ok(Cone { n, l, m, g, f, inclusions: None, space: Arc::new(space) })
    }

    /// `N` and `L` spanned by basis elements of `M` (increasing positions),
    /// with the differential and bracket they inherit.
    pub fn of_inclusions(m: &Gla, n_idx: &[usize], l_idx: &[usize]) -> Result<Cone> {
        let n = m.restrict(n_idx)?;
        let l = m.restrict(l_idx)?;
        let (g, f) = (inclusion(n_idx, m.dim()), inclusion(l_idx, m.dim()));
        let mut c = Cone::new(n, l, m.clone(), g, f)?;
        c.inclusions = Some((n_idx.to_vec(), l_idx.to_vec()));
        Ok(c)
    }

    /// `N = M`, `g = id`.
    pub fn cocylinder(m: &Gla, l_idx: &[usize]) -> Result<Cone> {
        Cone::of_inclusions(m, &(0..m.dim()).collect::<Vec<_>>(), l_idx)
    }

    /// `N = 0`.
    pub fn cocone(m: &Gla, l_idx: &[usize]) -> Result<Cone> {
        Cone::of_inclusions(m, &[], l_idx)
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn n_gla(&self) -> &Gla {
        &self.n
    }

    pub fn l_gla(&self) -> &Gla {
        &self.l
    }

    pub fn m_gla(&self) -> &Gla {
        &self.m
    }

    pub fn g_map(&self) -> &LinearMap {
        &self.g
    }

    pub fn f_map(&self) -> &LinearMap {
        &self.f
    }

    pub fn n_offset(&self) -> usize {
        0
    }

    pub fn l_offset(&self) -> usize {
        self.n.dim()
    }

    pub fn m_offset(&self) -> usize {
        self.n.dim() + self.l.dim()
    }

    /// `(-s⁻¹d_N n, -s⁻¹d_L l, d_M m + g(n) - f(l))`.
    pub fn r1(&self) -> LinearMap {
        let (lo, mo) = (self.l_offset(), self.m_offset());
        let (dn, dl, dm) = (d_of(&self.n), d_of(&self.l), d_of(&self.m));
        LinearMap::from_fn(self.space.dim(), self.space.dim(), 1, |j| {
            if j < lo {
                let mut v = -dn.column(j);
                v.add_assign(&self.g.column(j).shifted_indices(mo));
                v
            } else if j < mo {
                let mut v = (-dl.column(j - lo)).shifted_indices(lo);
                v.add_scaled(&-Rational::one(), &self.f.column(j - lo).shifted_indices(mo));
                v
            } else {
                dm.column(j - mo).shifted_indices(mo)
            }
        })
    }

    /// `Σ_σ ε(σ) [⋯[x, m_σ(1)]⋯, m_σ(i)]` for `M`-basis letters.
    fn nested(&self, x: &Vector, letters: &[usize]) -> Vector {
        let odd: Vec<bool> = letters.iter().map(|&k| self.m.space().is_odd(k)).collect();
        let mut out = Vector::zero();
        for perm in permutations(letters.len()) {
            let mut y = x.clone();
            for &p in &perm {
                if y.is_zero() {
                    break;
                }
                y = self.m.bracket_with_basis(&y, letters[p]);
            }
            out.add_scaled(&sign(koszul_odd(&perm, &odd)), &y);
        }
        out
    }

    /// The Taylor coefficients up to arity `n`: `r₁`, the décalage brackets
    /// on `N`-pairs and on `L`-pairs, and for `i ≥ 1`
    /// `r_{i+1}(s⁻¹n ⊗ m^{⊙i}) = B_i(1)/i! Σ ε [⋯[g n, m]⋯]`,
    /// `r_{i+1}(s⁻¹l ⊗ m^{⊙i}) = -B_i(0)/i! Σ ε [⋯[f l, m]⋯]`.
    pub fn structure(&self, table: &BernoulliTable, n: usize) -> Result<Coderivation> {
        let (lo, mo, dim) = (self.l_offset(), self.m_offset(), self.space.dim());
        let mut r = Coderivation::new(self.space.clone(), 1, Flavor::Reduced, n);
        if n == 0 {
            return Ok(r);
        }
        let r1 = self.r1();
        for j in 0..dim {
            r.set(vec![j], r1.column(j).clone())?;
        }
        if n >= 2 {
            for (alg, off) in [(&self.n, 0), (&self.l, lo)] {
                for a in 0..alg.dim() {
                    for b in a..alg.dim() {
                        if a == b && !alg.space().is_odd(a) {
                            continue;
                        }
                        let v = alg.bracket_basis(a, b);
                        if !v.is_zero() {
                            r.set(vec![off + a, off + b], v.scaled(&sign(alg.space().is_odd(a))).shifted_indices(off))?;
                        }
                    }
                }
            }
        }
        let odd: Vec<bool> = (0..dim).map(|k| self.space.is_odd(k)).collect();
        let m_letters: Vec<usize> = (mo..dim).collect();
        for i in 1..n {
            let cn = table.at_one(i) / factorial(i);
            let cl = -table.at_zero(i) / factorial(i);
            for mw in words_over(&m_letters, &odd, i) {
                let inner: Vec<usize> = mw.iter().map(|&k| k - mo).collect();
                for (head, x, c) in (0..lo)
                    .map(|a| (a, self.g.column(a), &cn))
                    .chain((lo..mo).map(|a| (a, self.f.column(a - lo), &cl)))
                {
                    if c.is_zero() {
                        continue;
                    }
                    let v = self.nested(x, &inner);
                    if v.is_zero() {
                        continue;
                    }
                    let mut w = vec![head];
                    w.extend_from_slice(&mw);
                    r.set(w, v.scaled(c).shifted_indices(mo))?;
                }
            }
        }
        Ok(r)
    }

    fn restricted(&self, d: &LinearMap, idx: &[usize], what: &str) -> Result<LinearMap> {
        let mut pos = vec![None; self.m.dim()];
        for (k, &i) in idx.iter().enumerate() {
            pos[i] = Some(k);
        }
        let cols = idx
            .iter()
            .map(|&i| {
                let c = d.column(i);
                match c.iter().find(|(j, _)| pos[*j].is_none()) {
                    Some((j, _)) => Err(Error::Axiom(format!(
                        "the derivation does not preserve {what}: {} has a {} component",
                        self.m.space().name(i),
                        self.m.space().name(j)
                    ))),
                    None => Ok(c.reindex(|j| pos[j])),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        LinearMap::new(idx.len(), idx.len(), d.degree(), cols)
    }

    /// `Ψ(D)₁(s⁻¹n, s⁻¹l, m) = ((-1)^{|D|} s⁻¹Dn, (-1)^{|D|} s⁻¹Dl, Dm)`,
    /// zero in higher arity, for the cone of two inclusions.
    pub fn psi(&self, d: &LinearMap, n: usize) -> Result<Coderivation> {
        let Some((n_idx, l_idx)) = &self.inclusions else {
            return Err(Error::Invalid("Ψ needs a cone of two coordinate inclusions".into()));
        };
        d.check_degree(self.m.space(), self.m.space())?;
        let dn = self.restricted(d, n_idx, "N")?;
        let dl = self.restricted(d, l_idx, "L")?;
        let s = sign(d.is_odd());
        let (lo, mo) = (self.l_offset(), self.m_offset());
        let mut psi = Coderivation::new(self.space.clone(), d.degree(), Flavor::Reduced, n.max(1));
        for j in 0..self.space.dim() {
            let v = if j < lo {
                dn.column(j).scaled(&s)
            } else if j < mo {
                dl.column(j - lo).scaled(&s).shifted_indices(lo)
            } else {
                d.column(j - mo).shifted_indices(mo)
            };
            psi.set(vec![j], v)?;
        }
        Ok(psi)
    }

    /// `[R, Ψ(D)] = 0` per arity up to `n`.
    pub fn check_psi(&self, r: &Coderivation, d: &LinearMap, n: usize, identity: &str) -> Result<Vec<Check>> {
        let psi = self.psi(d, n)?;
        let b = nr_bracket(&r.truncated(n), &psi)?;
        let mut out = Vec::new();
        for k in 1..=n.min(b.max_arity()) {
            let mut t = Tally::new(identity, k);
            for w in words(&self.space, k) {
                let v = b.value(&w);
                t.record(v.is_zero(), || (w.iter().map(|&l| self.space.name(l).to_string()).collect(), self.space.show(&v), "0".into()));
            }
            out.push(t.finish());
        }
        Ok(out)
    }
}
