//! Small split graded Lie algebras used by the tests and the command line.

use crate::error::{Error, Result};
use crate::graded::gla::{Derivation, Gla, Part};
use crate::graded::space::{GradedSpace, LinearMap, Vector};
use crate::hdb::endo::{elementary, MatrixLie};
use crate::hdb::theorems::NamedElement;
use crate::scalars::{int, rat};

/// A split algebra with sample elements and derivations preserving `L`.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub gla: Gla,
    pub elements: Vec<NamedElement>,
    pub derivations: Vec<Derivation>,
}

pub const NAMES: [&str; 6] = ["sl2_borel", "sl3_parabolic", "gl_graded", "getzler6", "solvable3", "generic6"];

pub fn named(name: &str) -> Result<Fixture> {
    match name {
        "sl2_borel" => sl2_borel(),
        "sl3_parabolic" => sl3_parabolic(),
        "gl_graded" => gl_graded(),
        "getzler6" => getzler6(),
        "solvable3" => solvable3(),
        "generic6" => generic6(),
        _ => Err(Error::UnknownName(name.into())),
    }
}

pub fn all() -> Result<Vec<Fixture>> {
    NAMES.iter().map(|n| named(n)).collect()
}

fn element(g: &Gla, name: &str, terms: &[(&str, i64)]) -> Result<NamedElement> {
    let mut v = Vector::zero();
    for &(b, c) in terms {
        v.add_term(g.space().index_of(b)?, int(c));
    }
    Ok(NamedElement { name: name.into(), value: v })
}

fn inner(g: &Gla, x: &NamedElement) -> Result<Derivation> {
    let mut d = Derivation::inner(g, &x.value)?;
    d.name = format!("ad_{}", x.name);
    Ok(d)
}

/// `sl₂` with `L = span(e, h)` and `A = span(f)`.
pub fn sl2_borel() -> Result<Fixture> {
    let sp = GradedSpace::from_pairs(&[("e", 0), ("f", 0), ("h", 0)])?;
    let g = Gla::new(sp, vec![(0, 1, Vector::basis(2)), (2, 0, Vector::term(0, int(2))), (2, 1, Vector::term(1, int(-2)))])?
        .with_parts(vec![Part::L, Part::A, Part::L])?;
    let elements = vec![
        element(&g, "e", &[("e", 1)])?,
        element(&g, "f", &[("f", 1)])?,
        element(&g, "h+2f", &[("h", 1), ("f", 2)])?,
    ];
    let derivations = vec![inner(&g, &elements[0])?, inner(&g, &element(&g, "h", &[("h", 1)])?)?];
    Ok(Fixture { name: "sl2_borel".into(), gla: g, elements, derivations })
}

/// `[x, y] = y`, `[x, z] = z`, with the ideal `L = span(z)` and the
/// nonabelian complement `A = span(x, y)`; every element normalizes `L`.
pub fn solvable3() -> Result<Fixture> {
    let sp = GradedSpace::from_pairs(&[("x", 0), ("y", 0), ("z", 0)])?;
    let g = Gla::new(sp, vec![(0, 1, Vector::basis(1)), (0, 2, Vector::basis(2))])?.with_parts(vec![Part::A, Part::A, Part::L])?;
    let elements = vec![element(&g, "x", &[("x", 1)])?, element(&g, "z", &[("z", 1)])?, element(&g, "x+y+z", &[("x", 1), ("y", 1), ("z", 1)])?];
    let derivations = vec![inner(&g, &elements[0])?, inner(&g, &elements[1])?];
    Ok(Fixture { name: "solvable3".into(), gla: g, elements, derivations })
}

fn traceless_gl3() -> Result<MatrixLie> {
    let v = GradedSpace::from_pairs(&[("v1", 0), ("v2", 0), ("v3", 0)])?;
    let e = |i: usize, j: usize| elementary(&v, i, j);
    let mut h1 = e(0, 0);
    h1.add_scaled(&int(-1), &e(1, 1))?;
    let mut h2 = e(1, 1);
    h2.add_scaled(&int(-1), &e(2, 2))?;
    let basis = vec![
        ("e12".to_string(), e(0, 1), Part::L),
        ("e13".to_string(), e(0, 2), Part::L),
        ("e23".to_string(), e(1, 2), Part::L),
        ("h1".to_string(), h1, Part::L),
        ("h2".to_string(), h2, Part::L),
        ("e21".to_string(), e(1, 0), Part::A),
        ("e31".to_string(), e(2, 0), Part::A),
        ("e32".to_string(), e(2, 1), Part::A),
    ];
    MatrixLie::new(v, basis)
}

/// `sl₃` with `L` the upper Borel subalgebra and `A` the strictly lower
/// triangular matrices (a Heisenberg algebra).
pub fn sl3_parabolic() -> Result<Fixture> {
    let g = traceless_gl3()?.gla().clone();
    let elements = vec![
        element(&g, "e13", &[("e13", 1)])?,
        element(&g, "e21+h1", &[("e21", 1), ("h1", 1)])?,
        element(&g, "e31-e12", &[("e31", 1), ("e12", -1)])?,
        element(&g, "e32+e21", &[("e32", 1), ("e21", 1)])?,
    ];
    let derivations = vec![
        inner(&g, &element(&g, "e12", &[("e12", 1)])?)?,
        inner(&g, &element(&g, "h1-e23", &[("h1", 1), ("e23", -1)])?)?,
    ];
    Ok(Fixture { name: "sl3_parabolic".into(), gla: g, elements, derivations })
}

/// `End(V)` for `V = v₀(1) ⊕ v₁(0) ⊕ v₂(0)`: `L` the upper triangular
/// matrices, `A` the strictly lower ones, with odd elements on both sides.
pub fn gl_graded() -> Result<Fixture> {
    let v = GradedSpace::from_pairs(&[("v0", 1), ("v1", 0), ("v2", 0)])?;
    let end = MatrixLie::full(v, |i, j| if i <= j { Part::L } else { Part::A })?;
    let g = end.gla().clone();
    let elements = vec![
        element(&g, "E01", &[("E[v0,v1]", 1)])?,
        element(&g, "E10+2E20", &[("E[v1,v0]", 1), ("E[v2,v0]", 2)])?,
        element(&g, "E21+E12", &[("E[v2,v1]", 1), ("E[v1,v2]", 1)])?,
        element(&g, "E20", &[("E[v2,v0]", 1)])?,
    ];
    let derivations = vec![
        inner(&g, &element(&g, "E01+E02", &[("E[v0,v1]", 1), ("E[v0,v2]", 1)])?)?,
        inner(&g, &element(&g, "E12+E11", &[("E[v1,v2]", 1), ("E[v1,v1]", 1)])?)?,
    ];
    Ok(Fixture { name: "gl_graded".into(), gla: g, elements, derivations })
}

/// `gl_graded` with `E[v2,v1]` replaced by `E[v2,v1] + E[v1,v1]`: another
/// closed complement of the same `L`.  Also returns the change of basis
/// from `gl_graded` coordinates to these.
pub fn gl_graded_twin() -> Result<(Fixture, LinearMap)> {
    let v = GradedSpace::from_pairs(&[("v0", 1), ("v1", 0), ("v2", 0)])?;
    let full = MatrixLie::full(v.clone(), |i, j| if i <= j { Part::L } else { Part::A })?;
    let mut basis = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            let part = if i <= j { Part::L } else { Part::A };
            if (i, j) == (2, 1) {
                let mut m = elementary(&v, 2, 1);
                m.add_scaled(&int(1), &elementary(&v, 1, 1))?;
                basis.push(("E[v2,v1]+E[v1,v1]".to_string(), m, part));
            } else {
                basis.push((format!("E[{},{}]", v.name(i), v.name(j)), elementary(&v, i, j), part));
            }
        }
    }
    let twin = MatrixLie::new(v.clone(), basis)?;
    let cols = (0..full.gla().dim()).map(|k| twin.coords(full.map(k))).collect::<Result<Vec<_>>>()?;
    let change = LinearMap::new(full.gla().dim(), twin.gla().dim(), 0, cols)?;
    let g = twin.gla().clone();
    let mut x = elementary(&v, 0, 1);
    x.add_scaled(&int(1), &elementary(&v, 0, 2))?;
    let x = NamedElement { name: "E01+E02".into(), value: twin.coords(&x)? };
    let derivations = vec![inner(&g, &x)?];
    Ok((Fixture { name: "gl_graded_twin".into(), gla: g, elements: vec![x], derivations }, change))
}

/// A six-dimensional dgla inside `End(v₀(0) ⊕ v₁(1) ⊕ v₂(2))` spanning
/// degrees `-2..1`, with differential `[E₁₀, ·]`, split by degree.
pub fn getzler6() -> Result<Fixture> {
    let v = GradedSpace::from_pairs(&[("v0", 0), ("v1", 1), ("v2", 2)])?;
    let e = |i: usize, j: usize| elementary(&v, i, j);
    let mut i01 = e(0, 0);
    i01.add_scaled(&int(1), &e(1, 1))?;
    let basis = vec![
        ("e02".to_string(), e(0, 2), Part::A),
        ("e01".to_string(), e(0, 1), Part::A),
        ("e12".to_string(), e(1, 2), Part::A),
        ("i01".to_string(), i01, Part::L),
        ("e22".to_string(), e(2, 2), Part::L),
        ("e10".to_string(), e(1, 0), Part::L),
    ];
    let end = MatrixLie::new(v, basis)?;
    let g0 = end.gla().clone();
    let d_elem = element(&g0, "e10", &[("e10", 1)])?;
    let d = inner(&g0, &d_elem)?;
    let g = g0.with_differential(d.map.clone())?;
    let elements = vec![
        element(&g, "e01", &[("e01", 1)])?,
        element(&g, "e22", &[("e22", 1)])?,
        element(&g, "e02", &[("e02", 1)])?,
        d_elem,
    ];
    Ok(Fixture { name: "getzler6".into(), gla: g, elements, derivations: vec![d] })
}

/// A six-dimensional algebra in degrees `-1..1` with a nonabelian
/// complement, drawn once by the sampler and frozen.
pub fn generic6() -> Result<Fixture> {
    let sp = GradedSpace::from_pairs(&[("x0", 0), ("x1", -1), ("x2", 1), ("x3", 0), ("x4", 0), ("x5", 0)])?;
    let g = Gla::new(
        sp,
        vec![
            (0, 1, Vector::term(1, int(3))),
            (1, 3, Vector::term(1, int(-2))),
            (1, 5, Vector::term(1, int(3))),
            (2, 5, Vector::basis(2)),
            (4, 5, Vector::term(4, int(2))),
        ],
    )?
    .with_parts(vec![Part::L, Part::A, Part::L, Part::A, Part::A, Part::A])?;
    let elements = vec![
        NamedElement { name: "-3x0-x3/2".into(), value: Vector::from_terms([(0, int(-3)), (3, rat(-1, 2))]) },
        element(&g, "x1", &[("x1", 1)])?,
        element(&g, "x3+x5", &[("x3", 1), ("x5", 1)])?,
    ];
    let d0 = LinearMap::from_fn(6, 6, 0, |j| match j {
        3 => Vector::from_terms([(0, rat(2, 3)), (3, int(-1))]),
        4 => Vector::term(4, int(3)),
        5 => Vector::term(4, int(-3)),
        _ => Vector::zero(),
    });
    let d1 = LinearMap::from_fn(6, 6, 1, |j| if j == 5 { Vector::term(2, int(-2)) } else { Vector::zero() });
    let derivations = vec![Derivation::new("D0", d0), Derivation::new("D1", d1)];
    Ok(Fixture { name: "generic6".into(), gla: g, elements, derivations })
}

/// The differential of a fixture as a derivation, when it has one.
pub fn differential(f: &Fixture) -> Option<Derivation> {
    f.gla.differential().map(|d: &LinearMap| Derivation::new("d", d.clone()))
}
