//! Seeded random inputs: split graded Lie algebras drawn by rejection,
//! sparse coderivations, classifying data and small complexes.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coalgebra::{words, Classifying, Coderivation, Flavor};
use crate::coalgebra::word::word_degree;
use crate::error::{Error, Result};
use crate::fixtures::Fixture;
use crate::graded::gla::{derivations_of_degree, Derivation, Gla, Part};
use crate::graded::space::{GradedSpace, LinearMap, Vector};
use crate::hdb::theorems::NamedElement;
use crate::scalars::{int, rat, Rational};

/// Attempts per algebra before giving up.
pub const MAX_ATTEMPTS: usize = 20_000;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// A small nonzero rational, mostly integers.
    pub fn coeff(&mut self) -> Rational {
        let n = *[-3, -2, -1, 1, 2, 3].choose(&mut self.rng).expect("nonempty");
        if self.rng.gen_bool(0.2) {
            rat(n, 2)
        } else {
            int(n)
        }
    }

    /// Each index kept with probability `density`, with a random coefficient.
    pub fn sparse(&mut self, indices: &[usize], density: f64) -> Vector {
        let mut v = Vector::zero();
        for &i in indices {
            if self.rng.gen_bool(density) {
                let c = self.coeff();
                v.add_term(i, c);
            }
        }
        v
    }

    /// A nonzero combination of `indices`, or zero if there are none.
    pub fn nonzero(&mut self, indices: &[usize]) -> Vector {
        if indices.is_empty() {
            return Vector::zero();
        }
        loop {
            let v = self.sparse(indices, 0.6);
            if !v.is_zero() {
                return v;
            }
        }
    }

    fn space(&mut self, dim: usize, degrees: &[i64]) -> Result<GradedSpace> {
        let pairs: Vec<(String, i64)> =
            (0..dim).map(|i| (format!("x{i}"), *degrees.choose(&mut self.rng).expect("nonempty"))).collect();
        let refs: Vec<(&str, i64)> = pairs.iter().map(|(n, d)| (n.as_str(), *d)).collect();
        GradedSpace::from_pairs(&refs)
    }

    /// Random antisymmetric entries; brackets of two elements in the same
    /// part stay in that part.
    fn entries(&mut self, sp: &GradedSpace, parts: &[Part]) -> Vec<(usize, usize, Vector)> {
        let dim = sp.dim();
        let mut entries = Vec::new();
        for i in 0..dim {
            for j in i..dim {
                if (i == j && !sp.is_odd(i)) || !self.rng.gen_bool(0.5) {
                    continue;
                }
                let target: Vec<usize> = sp
                    .indices_of_degree(sp.degree(i) + sp.degree(j))
                    .into_iter()
                    .filter(|&k| parts[i] != parts[j] || parts[k] == parts[i])
                    .collect();
                let v = self.sparse(&target, 0.5);
                if !v.is_zero() {
                    entries.push((i, j, v));
                }
            }
        }
        entries
    }

    /// A graded Lie algebra with at least one nonzero bracket, by
    /// rejection on Jacobi.
    pub fn gla(&mut self, dim: usize, degrees: &[i64]) -> Result<Gla> {
        for _ in 0..MAX_ATTEMPTS {
            let sp = self.space(dim, degrees)?;
            let entries = self.entries(&sp, &vec![Part::L; dim]);
            if entries.is_empty() {
                continue;
            }
            let g = Gla::new(sp, entries)?;
            if g.is_valid() {
                return Ok(g);
            }
        }
        Err(Error::Unsolvable(format!("no Jacobi-valid sample in {MAX_ATTEMPTS} attempts")))
    }

    /// A split graded Lie algebra with degrees drawn from `degrees`.
    /// Antisymmetry and closure of `L` and `A` hold by construction;
    /// samples failing Jacobi are rejected, as are samples with fewer than
    /// `dim - 1` nonzero entries, an abelian `A`, or `[L, A] ⊆ L`.
    pub fn split_gla(&mut self, dim: usize, degrees: &[i64]) -> Result<Gla> {
        if dim < 2 {
            return Err(Error::Invalid("a split algebra needs dimension at least 2".into()));
        }
        for _ in 0..MAX_ATTEMPTS {
            let sp = self.space(dim, degrees)?;
            let mut parts: Vec<Part> = (0..dim).map(|_| if self.rng.gen_bool(0.5) { Part::L } else { Part::A }).collect();
            parts[0] = Part::L;
            parts[dim - 1] = Part::A;
            let entries = self.entries(&sp, &parts);
            let a_a = entries.iter().any(|(i, j, _)| parts[*i] == Part::A && parts[*j] == Part::A);
            let l_a = entries.iter().any(|(i, j, v)| parts[*i] != parts[*j] && v.iter().any(|(k, _)| parts[k] == Part::A));
            if entries.len() + 1 < dim || !a_a || !l_a {
                continue;
            }
            let g = Gla::new(sp, entries)?.with_parts(parts)?;
            if g.is_valid() {
                return Ok(g);
            }
        }
        Err(Error::Unsolvable(format!("no Jacobi-valid sample in {MAX_ATTEMPTS} attempts")))
    }

    /// A random homogeneous element of degree `deg`, possibly zero.
    pub fn element(&mut self, g: &Gla, deg: i64) -> Vector {
        self.nonzero(&g.space().indices_of_degree(deg))
    }

    /// A random combination of the `L`-preserving derivations of degree `deg`.
    pub fn derivation(&mut self, g: &Gla, deg: i64) -> Option<LinearMap> {
        let basis = derivations_of_degree(g, deg);
        if basis.is_empty() {
            return None;
        }
        let picks = self.nonzero(&(0..basis.len()).collect::<Vec<_>>());
        let mut d = LinearMap::zero(g.dim(), g.dim(), deg);
        for (k, c) in picks.iter() {
            d.add_scaled(c, &basis[k]).expect("same shape");
        }
        Some(d)
    }

    /// A fixture on a random split algebra of dimension `dim` with degrees
    /// in `{-1, 0, 1}`: two elements and up to two derivations, drawn from
    /// the degrees present.
    pub fn fixture(&mut self, name: &str, dim: usize) -> Result<Fixture> {
        let g = self.split_gla(dim, &[-1, 0, 1])?;
        let mut present: Vec<i64> = g.space().degrees();
        present.sort_unstable();
        present.dedup();
        let mut elements = Vec::new();
        let a = g.indices_in(Part::A);
        for k in 0..2 {
            // Prefer elements acting nontrivially on A.
            let mut m = Vector::zero();
            for _ in 0..32 {
                let deg = *present.choose(&mut self.rng).expect("nonempty");
                m = self.element(&g, deg);
                if a.iter().any(|&i| !g.bracket_with_basis(&m, i).is_zero()) {
                    break;
                }
            }
            elements.push(NamedElement { name: format!("m{k}"), value: m });
        }
        let mut derivations = Vec::new();
        for deg in [0, 1] {
            if let Some(d) = self.derivation(&g, deg) {
                derivations.push(Derivation::new(&format!("D{deg}"), d));
            }
        }
        Ok(Fixture { name: name.into(), gla: g, elements, derivations })
    }

    /// Sparse coefficients on every word up to arity `n`, respecting degree.
    pub fn coderivation(&mut self, space: &Arc<GradedSpace>, degree: i64, flavor: Flavor, n: usize) -> Coderivation {
        let mut c = Coderivation::new(space.clone(), degree, flavor, n);
        let start = usize::from(flavor == Flavor::Reduced);
        for a in start..=n {
            for w in words(space, a) {
                let target = space.indices_of_degree(word_degree(&w, space) + degree);
                let v = self.sparse(&target, 0.5);
                c.set(w, v).expect("degree respected");
            }
        }
        c
    }

    /// Classifying data `V → Coder(W)` on every word of `V` up to arity
    /// `n`, each value an unreduced coderivation of degree `|v| + 1`.
    pub fn classifying(&mut self, base: &Arc<GradedSpace>, fibre: &Arc<GradedSpace>, n: usize) -> Result<Classifying> {
        let mut f = Classifying::new(base.clone(), fibre.clone(), n);
        for a in 1..=n {
            for w in words(base, a) {
                if !self.rng.gen_bool(0.5) {
                    continue;
                }
                let blank = f.blank(&w);
                let c = self.coderivation(fibre, blank.degree(), Flavor::Unreduced, blank.max_arity());
                f.set(w, c)?;
            }
        }
        Ok(f)
    }

    /// A square-zero degree-one map on a graded space of dimension `dim`
    /// with degrees in `0..=2`, nonzero, drawn by rejection.
    pub fn complex(&mut self, dim: usize) -> Result<(GradedSpace, LinearMap)> {
        for _ in 0..MAX_ATTEMPTS {
            let sp = self.space(dim, &[0, 1, 2])?;
            let cols = (0..dim).map(|j| self.sparse(&sp.indices_of_degree(sp.degree(j) + 1), 0.5)).collect();
            let d = LinearMap::new(dim, dim, 1, cols)?;
            if !d.is_zero() && d.compose(&d)?.is_zero() {
                return Ok((sp, d));
            }
        }
        Err(Error::Unsolvable(format!("no square-zero sample in {MAX_ATTEMPTS} attempts")))
    }
}

/// `count` fixtures of dimension 4 to 6 from one seed.
pub fn fixtures(seed: u64, count: usize) -> Result<Vec<Fixture>> {
    let mut s = Sampler::new(seed);
    (0..count)
        .map(|k| {
            let dim = 4 + k % 3;
            s.fixture(&format!("random{seed}_{k}"), dim)
        })
        .collect()
}
