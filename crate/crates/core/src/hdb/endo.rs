//! Graded Lie algebras of endomorphisms, materialized as structure
//! constants on a chosen basis of matrices.

use crate::error::{Error, Result};
use crate::graded::gla::{Gla, Part};
use crate::graded::linalg::Echelon;
use crate::graded::space::{BasisElem, GradedSpace, LinearMap, Vector};

fn flatten(m: &LinearMap) -> Vector {
    let n = m.codomain_dim();
    let mut v = Vector::zero();
    for (j, c) in m.columns().iter().enumerate() {
        v.add_assign(&c.shifted_indices(j * n));
    }
    v
}

/// A Lie algebra of homogeneous operators on a graded space `V` under the
/// graded commutator, with a basis of operators labelled `L` or `A`.
#[derive(Clone, Debug)]
pub struct MatrixLie {
    base: GradedSpace,
    maps: Vec<LinearMap>,
    gla: Gla,
    solver: Echelon,
}

impl MatrixLie {
    /// The span of `basis` must be closed under the commutator.
    pub fn new(base: GradedSpace, basis: Vec<(String, LinearMap, Part)>) -> Result<MatrixLie> {
        let dim = base.dim();
        let mut solver = Echelon::new();
        let mut elems = Vec::with_capacity(basis.len());
        let mut maps = Vec::with_capacity(basis.len());
        let mut parts = Vec::with_capacity(basis.len());
        for (name, m, part) in basis {
            if m.domain_dim() != dim || m.codomain_dim() != dim {
                return Err(Error::SpaceMismatch(format!("operator {name} has the wrong size")));
            }
            m.check_degree(&base, &base)?;
            if !solver.insert(&flatten(&m)) {
                return Err(Error::Invalid(format!("operator {name} is linearly dependent on the earlier ones")));
            }
            elems.push(BasisElem { name, degree: m.degree() });
            maps.push(m);
            parts.push(part);
        }
        let space = GradedSpace::new(elems)?;
        let mut entries = Vec::new();
        for i in 0..maps.len() {
            for j in i..maps.len() {
                let c = maps[i].commutator(&maps[j])?;
                if c.is_zero() {
                    continue;
                }
                let v = solver.solve(&flatten(&c)).ok_or_else(|| {
                    Error::Axiom(format!("[{}, {}] leaves the span of the operators", space.name(i), space.name(j)))
                })?;
                entries.push((i, j, v));
            }
        }
        let gla = Gla::new(space, entries)?.with_parts(parts)?;
        Ok(MatrixLie { base, maps, gla, solver })
    }

    /// All of `End(V)` on the elementary matrices `E[vᵢ,vⱼ]`, which send
    /// `vⱼ` to `vᵢ` and have degree `|vᵢ| - |vⱼ|`.
    pub fn full(base: GradedSpace, part: impl Fn(usize, usize) -> Part) -> Result<MatrixLie> {
        let n = base.dim();
        let mut basis = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let name = format!("E[{},{}]", base.name(i), base.name(j));
                basis.push((name, elementary(&base, i, j), part(i, j)));
            }
        }
        MatrixLie::new(base, basis)
    }

    pub fn gla(&self) -> &Gla {
        &self.gla
    }

    pub fn base(&self) -> &GradedSpace {
        &self.base
    }

    pub fn map(&self, k: usize) -> &LinearMap {
        &self.maps[k]
    }

    /// The operator with the given coordinates; homogeneous coordinates
    /// are expected, zero gets degree 0.
    pub fn to_map(&self, x: &Vector) -> Result<LinearMap> {
        let deg = self.gla.space().homogeneous_degree(x)?.unwrap_or(0);
        let n = self.base.dim();
        let mut out = LinearMap::zero(n, n, deg);
        for (k, c) in x.iter() {
            out.add_scaled(c, &self.maps[k])?;
        }
        Ok(out)
    }

    /// Coordinates of an operator in the span.
    pub fn coords(&self, m: &LinearMap) -> Result<Vector> {
        if m.domain_dim() != self.base.dim() || m.codomain_dim() != self.base.dim() {
            return Err(Error::SpaceMismatch("operator of the wrong size".into()));
        }
        self.solver
            .solve(&flatten(m))
            .ok_or_else(|| Error::Invalid("operator outside the span of the basis".into()))
    }
}

/// `E[vᵢ,vⱼ]`.
pub fn elementary(base: &GradedSpace, i: usize, j: usize) -> LinearMap {
    let n = base.dim();
    LinearMap::from_fn(n, n, base.degree(i) - base.degree(j), |c| if c == j { Vector::basis(i) } else { Vector::zero() })
}

/// The diagonal projection onto the span of `indices`.
pub fn coordinate_projection(dim: usize, indices: &[usize]) -> LinearMap {
    LinearMap::from_fn(dim, dim, 0, |c| if indices.contains(&c) { Vector::basis(c) } else { Vector::zero() })
}
