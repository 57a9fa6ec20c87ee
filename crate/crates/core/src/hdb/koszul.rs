//! Brackets of an operator on a unital associative graded algebra `B`,
//! computed inside `End(B)` with `A` the left multiplications and `L` the
//! operators killing `1`.  For graded commutative `B` these are the
//! Koszul brackets, and their vanishing measures differential order.

use num_traits::{One, Zero};

use crate::coalgebra::{words, Coderivation};
use crate::error::{Error, Result};
use crate::graded::gla::Part;
use crate::graded::linalg::solve;
use crate::graded::space::{BasisElem, GradedSpace, LinearMap, Vector};
use crate::hdb::endo::{elementary, MatrixLie};
use crate::hdb::split::Split;
use crate::report::{Check, Tally};
use crate::scalars::{rat, sign, Rational};

/// A graded algebra given by the products of basis elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssocAlgebra {
    space: GradedSpace,
    table: Vec<Vector>,
}

impl AssocAlgebra {
    /// `entries` lists `e_i e_j = value`; missing products are zero.
    pub fn new(space: GradedSpace, entries: Vec<(usize, usize, Vector)>) -> Result<AssocAlgebra> {
        let n = space.dim();
        let mut table = vec![Vector::zero(); n * n];
        for (i, j, v) in entries {
            if i >= n || j >= n {
                return Err(Error::SpaceMismatch(format!("product entry ({i}, {j}) out of range")));
            }
            space.check_vector(&v)?;
            let want = space.degree(i) + space.degree(j);
            if let Some((k, _)) = v.iter().find(|(k, _)| space.degree(*k) != want) {
                return Err(Error::Degree(format!(
                    "{} {} has degree {want} but its value involves {}",
                    space.name(i),
                    space.name(j),
                    space.name(k)
                )));
            }
            table[i * n + j] = v;
        }
        Ok(AssocAlgebra { space, table })
    }

    /// `Q[x₁, …, x_k]/(x₁², …, x_k²)` on square-free monomials, graded
    /// commutative: odd generators anticommute.
    pub fn truncated_polynomial(generators: &[(&str, i64)]) -> Result<AssocAlgebra> {
        let k = generators.len();
        if k > 3 {
            return Err(Error::Invalid("at most three generators (dimension 8)".into()));
        }
        let subsets: Vec<u32> = (0..(1u32 << k)).collect();
        let name = |s: u32| -> String {
            if s == 0 {
                return "1".into();
            }
            (0..k).filter(|b| s & (1 << b) != 0).map(|b| generators[b].0).collect::<Vec<_>>().join("")
        };
        let degree = |s: u32| -> i64 { (0..k).filter(|b| s & (1 << b) != 0).map(|b| generators[b].1).sum() };
        let basis: Vec<BasisElem> = subsets.iter().map(|&s| BasisElem { name: name(s), degree: degree(s) }).collect();
        let space = GradedSpace::new(basis)?;
        let odd = |b: usize| generators[b].1.rem_euclid(2) == 1;
        let mut entries = Vec::new();
        for &s in &subsets {
            for &t in &subsets {
                if s & t != 0 {
                    continue;
                }
                // Moving each odd generator of t past the odd generators of s above it.
                let mut swaps = 0;
                for b in (0..k).filter(|&b| t & (1 << b) != 0 && odd(b)) {
                    swaps += (b + 1..k).filter(|&c| s & (1 << c) != 0 && odd(c)).count();
                }
                entries.push((s as usize, t as usize, Vector::term((s | t) as usize, sign(swaps % 2 == 1))));
            }
        }
        AssocAlgebra::new(space, entries)
    }

    /// `n × n` matrices with `e_ij` of degree `dᵢ - dⱼ`.
    pub fn matrices(degrees: &[i64]) -> Result<AssocAlgebra> {
        let n = degrees.len();
        let mut basis = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                basis.push(BasisElem { name: format!("e{}{}", i + 1, j + 1), degree: degrees[i] - degrees[j] });
            }
        }
        let space = GradedSpace::new(basis)?;
        let mut entries = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    entries.push((i * n + j, j * n + l, Vector::basis(i * n + l)));
                }
            }
        }
        AssocAlgebra::new(space, entries)
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> &Vector {
        &self.table[i * self.dim() + j]
    }

    pub fn mul(&self, x: &Vector, y: &Vector) -> Vector {
        let mut out = Vector::zero();
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                out.add_scaled(&(a * b), self.mul_basis(i, j));
            }
        }
        out
    }

    /// `a∘b = ½(ab + (-1)^{|a||b|} ba)`, extended bilinearly.
    pub fn jordan(&self, x: &Vector, y: &Vector) -> Vector {
        let half = rat(1, 2);
        let mut out = Vector::zero();
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                let c = a * b * &half;
                out.add_scaled(&c, self.mul_basis(i, j));
                let s = sign(self.space.is_odd(i) && self.space.is_odd(j));
                out.add_scaled(&(c * s), self.mul_basis(j, i));
            }
        }
        out
    }

    /// Left multiplication by a homogeneous element.
    pub fn left(&self, a: &Vector) -> Result<LinearMap> {
        let deg = self.space.homogeneous_degree(a)?.unwrap_or(0);
        Ok(LinearMap::from_fn(self.dim(), self.dim(), deg, |j| self.mul(a, &Vector::basis(j))))
    }

    /// The two-sided unit, if there is one.
    pub fn unit(&self) -> Result<Vector> {
        let n = self.dim();
        let columns: Vec<Vector> = (0..n)
            .map(|k| {
                let mut c = Vector::zero();
                for j in 0..n {
                    c.add_assign(&self.mul_basis(k, j).shifted_indices(j * n));
                    c.add_assign(&self.mul_basis(j, k).shifted_indices((n + j) * n));
                }
                c
            })
            .collect();
        let mut rhs = Vector::zero();
        for j in 0..n {
            rhs.add_term(j * n + j, Rational::one());
            rhs.add_term((n + j) * n + j, Rational::one());
        }
        solve(&columns, &rhs).ok_or_else(|| Error::Missing("the algebra has no unit in the span of its basis".into()))
    }

    /// Associativity on basis triples and existence of a unit.
    pub fn validate(&self) -> Vec<Check> {
        let n = self.dim();
        let sp = &self.space;
        let mut t = Tally::new("associativity", 3);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let lhs = self.mul(self.mul_basis(i, j), &Vector::basis(k));
                    let rhs = self.mul(&Vector::basis(i), self.mul_basis(j, k));
                    t.record(lhs == rhs, || {
                        (vec![sp.name(i).into(), sp.name(j).into(), sp.name(k).into()], sp.show(&lhs), sp.show(&rhs))
                    });
                }
            }
        }
        let unit = self.unit();
        vec![
            t.finish(),
            Check::flag(
                "unit",
                unit.is_ok(),
                match &unit {
                    Ok(u) => format!("1 = {}", sp.show(u)),
                    Err(e) => e.to_string(),
                },
            ),
        ]
    }

    pub fn is_graded_commutative(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let s = sign(self.space.is_odd(i) && self.space.is_odd(j));
                *self.mul_basis(i, j) == self.mul_basis(j, i).scaled(&s)
            })
        })
    }
}

/// `End(B)` split as left multiplications plus the operators killing `1`.
#[derive(Clone, Debug)]
pub struct KoszulSplit {
    alg: AssocAlgebra,
    unit: Vector,
    end: MatrixLie,
}

impl KoszulSplit {
    /// The `A`-basis is `l_b` for the basis `b` of the algebra, under the
    /// algebra's names; `L` has `E[i,j] - (uⱼ/u_p) E[i,p]` for `j ≠ p`,
    /// where `u` is the unit and `p` its first nonzero coordinate.
    pub fn new(alg: AssocAlgebra) -> Result<KoszulSplit> {
        if let Some(bad) = alg.validate().into_iter().find(|c| !c.pass) {
            return Err(Error::Axiom(format!("{} fails on {:?}", bad.identity, bad.word)));
        }
        let unit = alg.unit()?;
        if alg.space.homogeneous_degree(&unit)?.unwrap_or(0) != 0 {
            return Err(Error::Degree("the unit is not of degree 0".into()));
        }
        let sp = alg.space.clone();
        let n = alg.dim();
        let (p, up) = unit.iter().next().map(|(p, c)| (p, c.clone())).expect("the unit is nonzero");
        let mut basis = Vec::with_capacity(n * n);
        for b in 0..n {
            basis.push((sp.name(b).to_string(), alg.left(&Vector::basis(b))?, Part::A));
        }
        for i in 0..n {
            for j in (0..n).filter(|&j| j != p) {
                let mut m = elementary(&sp, i, j);
                let c = unit.get(j);
                if !c.is_zero() {
                    m.add_scaled(&(-c / &up), &elementary(&sp, i, p))?;
                }
                basis.push((format!("E[{},{}]", sp.name(i), sp.name(j)), m, Part::L));
            }
        }
        let end = MatrixLie::new(sp, basis)?;
        Ok(KoszulSplit { alg, unit, end })
    }

    pub fn algebra(&self) -> &AssocAlgebra {
        &self.alg
    }

    pub fn unit(&self) -> &Vector {
        &self.unit
    }

    pub fn end(&self) -> &MatrixLie {
        &self.end
    }

    pub fn split(&self) -> Result<Split<'_>> {
        Split::new(self.end.gla())
    }

    /// `Φ(f)` up to arity `n` on the algebra's own basis.
    pub fn brackets(&self, f: &LinearMap, n: usize) -> Result<Coderivation> {
        let x = self.end.coords(f)?;
        self.split()?.phi_element(&x, n)
    }

    /// `Φ(f)₁(a) = f(a) - f(1)∘a`, and for `f(1) = 0` also
    /// `Φ(f)₂(a⊙b) = f(a∘b) - f(a)∘b - (-1)^{|a||f|} a∘f(b)`, on basis words.
    pub fn check_low_arity(&self, f: &LinearMap, name: &str) -> Result<Vec<Check>> {
        let phi = self.brackets(f, 2)?;
        let sp = &self.alg.space;
        let f1 = f.apply(&self.unit);
        let mut out = Vec::new();
        let mut t = Tally::new(&format!("koszul_arity1[{name}]"), 1);
        for a in 0..sp.dim() {
            let lhs = phi.value(&[a]);
            let rhs = &f.apply(&Vector::basis(a)) - &self.alg.jordan(&f1, &Vector::basis(a));
            t.record(lhs == rhs, || (vec![sp.name(a).into()], sp.show(&lhs), sp.show(&rhs)));
        }
        out.push(t.finish());
        if f1.is_zero() {
            let mut t = Tally::new(&format!("koszul_arity2[{name}]"), 2);
            for w in words(sp, 2) {
                let (a, b) = (Vector::basis(w[0]), Vector::basis(w[1]));
                let lhs = phi.value(&w);
                let mut rhs = f.apply(&self.alg.jordan(&a, &b));
                rhs.add_scaled(&-Rational::one(), &self.alg.jordan(&f.apply(&a), &b));
                let s = sign(sp.is_odd(w[0]) && f.is_odd());
                rhs.add_scaled(&-s, &self.alg.jordan(&a, &f.apply(&b)));
                t.record(lhs == rhs, || (vec![sp.name(w[0]).into(), sp.name(w[1]).into()], sp.show(&lhs), sp.show(&rhs)));
            }
            out.push(t.finish());
        }
        Ok(out)
    }

    /// Smallest `k ≤ k_max` with `Φ(f)ᵢ = 0` for `k < i ≤ n`.  This is a
    /// bound relative to the window `n`.
    pub fn order_bound(&self, f: &LinearMap, k_max: usize, n: usize) -> Result<Option<usize>> {
        let phi = self.brackets(f, n)?;
        let last_nonzero = (1..=n).rev().find(|&i| !phi.coeff(i).is_empty());
        let k = last_nonzero.unwrap_or(0);
        Ok((k <= k_max).then_some(k))
    }

    /// The classical order: smallest `k ≤ k_max` with every commutator
    /// `[⋯[f, l_{a₀}]⋯, l_{a_k}]` zero, computed on matrices.
    pub fn commutator_order(&self, f: &LinearMap, k_max: usize) -> Result<Option<usize>> {
        let n = self.alg.dim();
        let lefts: Vec<LinearMap> = (0..n).map(|b| self.alg.left(&Vector::basis(b))).collect::<Result<_>>()?;
        let mut maps = vec![f.clone()];
        for k in 0..=k_max {
            let mut next: Vec<LinearMap> = Vec::new();
            for g in &maps {
                for l in &lefts {
                    let c = g.commutator(l)?;
                    if !c.is_zero() && !next.contains(&c) {
                        next.push(c);
                    }
                }
            }
            if next.is_empty() {
                return Ok(Some(k));
            }
            maps = next;
        }
        Ok(None)
    }
}
