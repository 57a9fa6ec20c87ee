//! Polynomial forms `M[t, dt] = K[t, dt] ⊗ M`, with evaluation at a point,
//! the two integrals, and membership in a homotopy fiber product.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::graded::gla::Gla;
use crate::graded::space::{LinearMap, Vector};
use crate::scalars::{sign, Rational};

/// `Σ_k t^k ⊗ a_k + Σ_k t^k dt ⊗ b_k`, stored without zero terms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PolyForm {
    plain: BTreeMap<usize, Vector>,
    dt: BTreeMap<usize, Vector>,
}

fn add_into(map: &mut BTreeMap<usize, Vector>, k: usize, c: &Rational, v: &Vector) {
    let e = map.entry(k).or_default();
    e.add_scaled(c, v);
    if e.is_zero() {
        map.remove(&k);
    }
}

fn d_of(g: &Gla, v: &Vector) -> Vector {
    g.differential().map(|d| d.apply(v)).unwrap_or_default()
}

impl PolyForm {
    pub fn zero() -> PolyForm {
        PolyForm::default()
    }

    /// `1 ⊗ m`.
    pub fn constant(m: &Vector) -> PolyForm {
        PolyForm::plain(0, m)
    }

    /// `t^k ⊗ m`.
    pub fn plain(k: usize, m: &Vector) -> PolyForm {
        let mut p = PolyForm::zero();
        add_into(&mut p.plain, k, &Rational::one(), m);
        p
    }

    /// `t^k dt ⊗ m`.
    pub fn with_dt(k: usize, m: &Vector) -> PolyForm {
        let mut p = PolyForm::zero();
        add_into(&mut p.dt, k, &Rational::one(), m);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.plain.is_empty() && self.dt.is_empty()
    }

    pub fn plain_terms(&self) -> impl Iterator<Item = (usize, &Vector)> {
        self.plain.iter().map(|(k, v)| (*k, v))
    }

    pub fn dt_terms(&self) -> impl Iterator<Item = (usize, &Vector)> {
        self.dt.iter().map(|(k, v)| (*k, v))
    }

    /// Largest total `t`-degree, counting `dt` as one.
    pub fn max_power(&self) -> Option<usize> {
        let a = self.plain.keys().next_back().copied();
        let b = self.dt.keys().next_back().map(|k| k + 1);
        a.max(b)
    }

    pub fn add_scaled(&mut self, c: &Rational, other: &PolyForm) {
        for (k, v) in &other.plain {
            add_into(&mut self.plain, *k, c, v);
        }
        for (k, v) in &other.dt {
            add_into(&mut self.dt, *k, c, v);
        }
    }

    pub fn scaled(&self, c: &Rational) -> PolyForm {
        let mut p = PolyForm::zero();
        p.add_scaled(c, self);
        p
    }

    /// `M`-linear map applied coefficientwise (degree zero maps only).
    pub fn map(&self, h: &LinearMap) -> PolyForm {
        let mut p = PolyForm::zero();
        for (k, v) in &self.plain {
            add_into(&mut p.plain, *k, &Rational::one(), &h.apply(v));
        }
        for (k, v) in &self.dt {
            add_into(&mut p.dt, *k, &Rational::one(), &h.apply(v));
        }
        p
    }

    /// `d(t^k ⊗ m) = k t^{k-1} dt ⊗ m + t^k ⊗ dm`, `d(t^k dt ⊗ m) = -t^k dt ⊗ dm`.
    pub fn d(&self, g: &Gla) -> PolyForm {
        let mut p = PolyForm::zero();
        for (&k, v) in &self.plain {
            if k > 0 {
                add_into(&mut p.dt, k - 1, &Rational::from_integer(k.into()), v);
            }
            add_into(&mut p.plain, k, &Rational::one(), &d_of(g, v));
        }
        for (&k, v) in &self.dt {
            add_into(&mut p.dt, k, &-Rational::one(), &d_of(g, v));
        }
        p
    }

    /// `[a₁ ⊗ l₁, a₂ ⊗ l₂] = (-1)^{|l₁||a₂|} a₁a₂ ⊗ [l₁, l₂]`, with `dt² = 0`.
    pub fn bracket(&self, g: &Gla, other: &PolyForm) -> PolyForm {
        let mut p = PolyForm::zero();
        let sp = g.space();
        for (first_dt, left) in [(false, &self.plain), (true, &self.dt)] {
            for (&i, x) in left {
                for (second_dt, right) in [(false, &other.plain), (true, &other.dt)] {
                    if first_dt && second_dt {
                        continue;
                    }
                    for (&j, y) in right {
                        let target = if first_dt || second_dt { &mut p.dt } else { &mut p.plain };
                        for (a, ca) in x.iter() {
                            let s = sign(second_dt && sp.is_odd(a));
                            let b = g.bracket(&Vector::term(a, ca * &s), y);
                            add_into(target, i + j, &Rational::one(), &b);
                        }
                    }
                }
            }
        }
        p
    }

    /// `e_s`: `t = s`, `dt = 0`.
    pub fn eval(&self, s: &Rational) -> Vector {
        let mut out = Vector::zero();
        for (&k, v) in &self.plain {
            let c = (0..k).fold(Rational::one(), |acc, _| acc * s);
            out.add_scaled(&c, v);
        }
        out
    }

    /// `∫₀¹`, nonzero only on `dt`-terms.
    pub fn integral(&self) -> Vector {
        let mut out = Vector::zero();
        for (&k, v) in &self.dt {
            out.add_scaled(&(Rational::one() / Rational::from_integer((k + 1).into())), v);
        }
        out
    }

    /// `∫₀ᵗ`: `t^k dt ⊗ m ↦ t^{k+1}/(k+1) ⊗ m`.
    pub fn integral_to_t(&self) -> PolyForm {
        let mut p = PolyForm::zero();
        for (&k, v) in &self.dt {
            add_into(&mut p.plain, k + 1, &(Rational::one() / Rational::from_integer((k + 1).into())), v);
        }
        p
    }

    /// `∫₀ᵗ ω - t ∫₀¹ ω`.
    pub fn homotopy(&self) -> PolyForm {
        let mut p = self.integral_to_t();
        let whole = self.integral();
        add_into(&mut p.plain, 1, &-Rational::one(), &whole);
        p
    }
}

/// `(n, l, ω)` lies in `N ×ʰ_M L`: `e₀(ω) = g(n)` and `e₁(ω) = f(l)`.
pub fn fiber_product_membership(n: &Vector, l: &Vector, omega: &PolyForm, g: &LinearMap, f: &LinearMap) -> bool {
    omega.eval(&Rational::zero()) == g.apply(n) && omega.eval(&Rational::one()) == f.apply(l)
}

/// `∫₀¹ dω + d ∫₀¹ ω = e₁(ω) - e₀(ω)`.
pub fn stokes_holds(g: &Gla, omega: &PolyForm) -> bool {
    let mut lhs = omega.d(g).integral();
    lhs.add_assign(&d_of(g, &omega.integral()));
    let mut rhs = omega.eval(&Rational::one());
    rhs.add_scaled(&-Rational::one(), &omega.eval(&Rational::zero()));
    lhs == rhs
}
