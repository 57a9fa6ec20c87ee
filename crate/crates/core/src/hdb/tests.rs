use std::sync::Arc;

use super::*;
use crate::coalgebra::{decalage, is_linfty, nr_bracket, words, Coderivation, Flavor};
use crate::fixtures;
use crate::graded::gla::Gla;
use crate::graded::space::{GradedSpace, LinearMap, Vector};
use crate::report::Check;
use crate::scalars::{int, rat, sign};

fn all_pass(checks: &[Check]) -> bool {
    let bad: Vec<_> = checks.iter().filter(|c| !c.pass).collect();
    if !bad.is_empty() {
        eprintln!("{bad:#?}");
    }
    bad.is_empty()
}

/// `Φ(m)₁`, `Φ(m)₂`, `Φ(D)₁`, `Φ(D)₂` written out term by term.
fn low_arity_oracle(g: &Gla, m: Option<&Vector>, d: Option<&LinearMap>, a: usize, b: Option<usize>) -> Vector {
    let p = |x: &Vector| g.project_a(x);
    let br = |x: &Vector, y: &Vector| g.bracket(x, y);
    let ea = Vector::basis(a);
    match (m, d, b) {
        (Some(m), _, None) => &p(&br(m, &ea)) - &br(&p(m), &ea).scaled(&rat(1, 2)),
        (_, Some(d), None) => p(&d.apply(&ea)),
        (m, d, Some(b)) => {
            let eb = Vector::basis(b);
            let eps = sign(g.space().is_odd(a) && g.space().is_odd(b));
            let mut out = Vector::zero();
            for (x, y, s) in [(&ea, &eb, int(1)), (&eb, &ea, eps)] {
                let mut t = Vector::zero();
                if let Some(m) = m {
                    t.add_scaled(&rat(1, 2), &p(&br(&br(m, x), y)));
                    t.add_scaled(&rat(-1, 2), &br(&p(&br(m, x)), y));
                    t.add_scaled(&rat(1, 12), &br(&br(&p(m), x), y));
                } else {
                    let dx = d.unwrap().apply(x);
                    t.add_scaled(&rat(1, 2), &p(&br(&dx, y)));
                    t.add_scaled(&rat(-1, 2), &br(&p(&dx), y));
                }
                out.add_scaled(&s, &t);
            }
            out
        }
        _ => unreachable!(),
    }
}

#[test]
fn low_arity_brackets_match_the_explicit_formulas() {
    for fx in fixtures::all().unwrap() {
        let split = Split::new(&fx.gla).unwrap();
        let ai = split.a_indices().to_vec();
        for e in &fx.elements {
            let phi = split.phi_element(&e.value, 2).unwrap();
            assert_eq!(phi.at_unit(), split.coords(&fx.gla.project_a(&e.value)).unwrap());
            for w in words(split.a_space(), 1).into_iter().chain(words(split.a_space(), 2)) {
                let want = low_arity_oracle(&fx.gla, Some(&e.value), None, ai[w[0]], w.get(1).map(|&l| ai[l]));
                assert_eq!(phi.value(&w), split.coords(&want).unwrap(), "{} {} {:?}", fx.name, e.name, w);
            }
        }
        for d in &fx.derivations {
            let phi = split.phi_derivation(&d.map, 2).unwrap();
            for w in words(split.a_space(), 1).into_iter().chain(words(split.a_space(), 2)) {
                let want = low_arity_oracle(&fx.gla, None, Some(&d.map), ai[w[0]], w.get(1).map(|&l| ai[l]));
                assert_eq!(phi.value(&w), split.coords(&want).unwrap(), "{} {} {:?}", fx.name, d.name, w);
            }
        }
    }
}

/// Hand-computed on `[x, y] = y`, `[x, z] = z` with `m = x + y + z`,
/// `Pm = x + y`; the arity-two values come from the `B₂/2! = 1/12` term.
#[test]
fn golden_values_with_the_bernoulli_term() {
    let fx = fixtures::solvable3().unwrap();
    let split = Split::new(&fx.gla).unwrap();
    let (x, y) = (0, 1);
    let phi = split.phi_element(&fx.elements[2].value, 3).unwrap();
    assert_eq!(phi.at_unit(), Vector::from_terms([(x, int(1)), (y, int(1))]));
    assert_eq!(phi.value(&[x]), Vector::term(y, rat(-1, 2)));
    assert_eq!(phi.value(&[y]), Vector::term(y, rat(1, 2)));
    assert_eq!(phi.value(&[x, x]), Vector::term(y, rat(1, 6)));
    assert_eq!(phi.value(&[x, y]), Vector::term(y, rat(-1, 12)));
}

#[test]
fn lie_morphism_identities_on_every_fixture() {
    for fx in fixtures::all().unwrap() {
        let split = Split::new(&fx.gla).unwrap();
        let checks = verify_lie_morphism(&split, &fx.elements, &fx.derivations, 4).unwrap();
        assert!(all_pass(&checks), "{}", fx.name);
    }
}

#[test]
fn odd_square_zero_derivations_give_linfty_structures() {
    let fx = fixtures::gl_graded().unwrap();
    let split = Split::new(&fx.gla).unwrap();
    assert!(all_pass(&verify_fiber_sequence(&split, &fx.derivations[0], 4).unwrap()));
    let fx = fixtures::getzler6().unwrap();
    let split = Split::new(&fx.gla).unwrap();
    assert!(all_pass(&verify_fiber_sequence(&split, &fx.derivations[0], 4).unwrap()));
}

#[test]
fn abelian_complements_reduce_to_single_terms() {
    let fx = fixtures::sl2_borel().unwrap();
    let split = Split::new(&fx.gla).unwrap();
    assert!(split.is_a_abelian());
    assert!(all_pass(&verify_abelian_reduction(&split, &fx.elements, &fx.derivations, 4).unwrap()));
    let fx = fixtures::sl3_parabolic().unwrap();
    assert!(Split::new(&fx.gla).unwrap().voronov_element(&fx.elements[0].value, 2).is_err());
}

#[test]
fn inner_derivations_agree_only_inside_l() {
    let fx = fixtures::solvable3().unwrap();
    let split = Split::new(&fx.gla).unwrap();
    let (checks, differ) = compare_inner(&split, &fx.elements[1], 4).unwrap();
    assert!(all_pass(&checks) && !differ);
    let (_, differ) = compare_inner(&split, &fx.elements[0], 4).unwrap();
    assert!(differ);
}

#[test]
fn stored_brackets_are_graded_symmetric() {
    for name in ["gl_graded", "sl3_parabolic"] {
        let fx = fixtures::named(name).unwrap();
        let split = Split::new(&fx.gla).unwrap();
        let m = &fx.elements[1].value;
        let phi = split.phi_element(m, 3).unwrap();
        assert!(all_pass(&split.check_symmetry(&phi, Some(m), None, "symmetry").unwrap()));
        let d = &fx.derivations[0].map;
        let phi = split.phi_derivation(d, 3).unwrap();
        assert!(all_pass(&split.check_symmetry(&phi, None, Some(d), "symmetry").unwrap()));
    }
}

#[test]
fn derivations_that_leave_l_are_rejected() {
    let fx = fixtures::sl2_borel().unwrap();
    let split = Split::new(&fx.gla).unwrap();
    let ad_f = crate::graded::gla::Derivation::inner(&fx.gla, &fx.elements[1].value).unwrap();
    assert!(split.phi_derivation(&ad_f.map, 2).is_err());
}

fn small_space() -> Arc<GradedSpace> {
    Arc::new(GradedSpace::from_pairs(&[("u", 0), ("v", 1)]).unwrap())
}

fn sample(space: &Arc<GradedSpace>, degree: i64, flavor: Flavor, n: usize, seed: i64) -> Coderivation {
    let mut c = Coderivation::new(space.clone(), degree, flavor, n);
    let start = if flavor == Flavor::Reduced { 1 } else { 0 };
    let mut k = seed;
    for a in start..=n {
        for w in words(space, a) {
            let want = crate::coalgebra::word::word_degree(&w, space) + degree;
            let mut v = Vector::zero();
            for i in space.indices_of_degree(want) {
                k = (k * 5 + 1) % 13;
                if k % 4 != 0 {
                    v.add_term(i, int(k - 6));
                }
            }
            c.set(w, v).unwrap();
        }
    }
    c
}

#[test]
fn derived_brackets_of_a_coderivation_return_it() {
    let sp = small_space();
    for (deg, seed) in [(0, 1), (1, 2), (-1, 3), (1, 7)] {
        let r = sample(&sp, deg, Flavor::Unreduced, 3, seed);
        assert!(all_pass(&verify_phi_identity(&r, "phi_identity").unwrap()), "degree {deg}");
    }
    let v = Vector::term(1, int(3));
    let sigma = Coderivation::section(sp.clone(), &v, 3).unwrap();
    let model = CoderModel::new(sp.clone(), 4);
    let phi = derived_brackets(&model, &Seed::Element(&sigma), 1, 3).unwrap();
    assert_eq!(phi.at_unit(), v);
    assert!(phi.reduced_part().is_zero());
}

#[test]
fn adjoint_reproduces_the_structure() {
    let (_, q) = decalage(&fixtures::sl2_borel().unwrap().gla, "s", 3).unwrap();
    assert!(all_pass(&verify_adjoint(&q, "adjoint").unwrap()));
    let sp = small_space();
    let q = sample(&sp, 1, Flavor::Reduced, 3, 5);
    assert!(all_pass(&verify_adjoint(&q, "adjoint").unwrap()));
    // A linear structure has vanishing adjoint.
    let lin = sample(&sp, 1, Flavor::Reduced, 1, 2).truncated(1);
    let mut wide = Coderivation::new(sp.clone(), 1, Flavor::Reduced, 3);
    for (w, v) in lin.coeff(1).iter() {
        wide.set(w.clone(), v.clone()).unwrap();
    }
    for l in 0..sp.dim() {
        assert!(adjoint(&wide, &[l]).unwrap().is_zero());
    }
}

fn truncated_xyz() -> AssocAlgebra {
    AssocAlgebra::truncated_polynomial(&[("x", 0), ("y", 0), ("z", 0)]).unwrap()
}

#[test]
fn koszul_brackets_measure_differential_order() {
    let ks = KoszulSplit::new(truncated_xyz()).unwrap();
    let alg = ks.algebra().clone();
    assert!(alg.is_graded_commutative());
    let first = examples::euler_operator(&alg, &["x"]);
    let second = examples::euler_operator(&alg, &["x", "y"]);
    let mult = alg.left(&Vector::basis(alg.space().index_of("xz").unwrap())).unwrap();
    for (f, order) in [(&mult, 0), (&first, 1), (&second, 2)] {
        assert_eq!(ks.order_bound(f, 4, 4).unwrap(), Some(order));
        assert_eq!(ks.commutator_order(f, 4).unwrap(), Some(order));
        assert!(all_pass(&ks.check_low_arity(f, "f").unwrap()));
    }
    let phi = ks.brackets(&second, 3).unwrap();
    assert!(phi.coeff(3).is_empty());
    let c = first.commutator(&second).unwrap();
    assert!(ks.order_bound(&c, 4, 4).unwrap().unwrap() <= 2);
}

#[test]
fn koszul_brackets_on_matrices_and_exterior_algebras() {
    let ks = KoszulSplit::new(AssocAlgebra::matrices(&[1, 0]).unwrap()).unwrap();
    let alg = ks.algebra().clone();
    assert!(!alg.is_graded_commutative());
    let sp = alg.space().clone();
    // An odd operator with f(1) ≠ 0 and an even one killing 1.
    let f = LinearMap::from_fn(4, 4, 1, |j| match sp.name(j) {
        "e11" => Vector::basis(sp.index_of("e12").unwrap()),
        "e22" => Vector::term(sp.index_of("e12").unwrap(), int(2)),
        "e21" => Vector::basis(sp.index_of("e22").unwrap()),
        _ => Vector::zero(),
    });
    let g = LinearMap::from_fn(4, 4, 0, |j| match sp.name(j) {
        "e12" => Vector::term(sp.index_of("e12").unwrap(), int(3)),
        "e21" => Vector::basis(sp.index_of("e21").unwrap()),
        "e11" => &Vector::basis(sp.index_of("e11").unwrap()) - &Vector::basis(sp.index_of("e22").unwrap()),
        "e22" => &Vector::basis(sp.index_of("e22").unwrap()) - &Vector::basis(sp.index_of("e11").unwrap()),
        _ => Vector::zero(),
    });
    assert!(g.apply(ks.unit()).is_zero());
    assert!(all_pass(&ks.check_low_arity(&f, "f").unwrap()));
    assert!(all_pass(&ks.check_low_arity(&g, "g").unwrap()));

    let ext = KoszulSplit::new(AssocAlgebra::truncated_polynomial(&[("p", 1), ("q", 1)]).unwrap()).unwrap();
    let sp = ext.algebra().space().clone();
    let i = |n: &str| sp.index_of(n).unwrap();
    // ∂/∂p: p ↦ 1, pq ↦ q.
    let dp = LinearMap::from_fn(4, 4, -1, |j| match sp.name(j) {
        "p" => Vector::basis(i("1")),
        "pq" => Vector::basis(i("q")),
        _ => Vector::zero(),
    });
    assert!(all_pass(&ext.check_low_arity(&dp, "dp").unwrap()));
    assert_eq!(ext.order_bound(&dp, 3, 3).unwrap(), Some(1));
    assert_eq!(ext.commutator_order(&dp, 3).unwrap(), Some(1));
}

#[test]
fn subcomplex_brackets_stop_at_arity_two() {
    let v = GradedSpace::from_pairs(&[("a0", 0), ("a1", 1), ("w0", 0), ("w1", 1)]).unwrap();
    let d = LinearMap::from_fn(4, 4, 1, |j| match j {
        0 => &Vector::basis(1) + &Vector::basis(3),
        2 => Vector::term(3, int(2)),
        _ => Vector::zero(),
    });
    let sc = SubcomplexSplit::new(v, d, vec![2, 3]).unwrap();
    assert!(all_pass(&sc.verify(4).unwrap()));
}

#[test]
fn getzler_closed_form_agrees() {
    let fx = fixtures::getzler6().unwrap();
    assert!(all_pass(&getzler::verify(&fx.gla, 4).unwrap()));
    assert_eq!(-crate::scalars::bernoulli(1), rat(1, 2));
}

#[test]
fn decalage_of_phi_derivation_is_linfty() {
    let fx = fixtures::getzler6().unwrap();
    let gs = getzler::degree_split(&fx.gla).unwrap();
    let split = Split::new(&gs).unwrap();
    let phi = split.phi_derivation(gs.differential().unwrap(), 4).unwrap();
    assert!(is_linfty(&phi, 4).unwrap());
    let sq = nr_bracket(&phi, &phi).unwrap();
    assert!(sq.is_zero());
}

#[test]
fn generic6_is_valid_with_a_visible_bernoulli_term() {
    let fx = fixtures::generic6().unwrap();
    assert!(all_pass(&fx.gla.validate()));
    for d in &fx.derivations {
        assert!(all_pass(&d.validate(&fx.gla)), "{}", d.name);
    }
    // [[P m, a], b] ≠ 0 for some a, b in A, so the 1/12 term matters.
    let g = &fx.gla;
    let pm = g.project_a(&fx.elements[0].value);
    let a = g.indices_in(crate::graded::gla::Part::A);
    assert!(a.iter().any(|&x| a.iter().any(|&y| !g.bracket(&g.bracket(&pm, &Vector::basis(x)), &Vector::basis(y)).is_zero())));
}

#[test]
fn example_suites_pass() {
    assert!(all_pass(&examples::all(3, 4).unwrap()));
}
