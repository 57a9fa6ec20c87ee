use std::sync::Arc;

use super::*;
use crate::graded::gla::Gla;
use crate::graded::space::{GradedSpace, LinearMap, Vector};
use crate::scalars::{int, rat};

fn sl2() -> Gla {
    let sp = GradedSpace::from_pairs(&[("e", 0), ("f", 0), ("h", 0)]).unwrap();
    Gla::new(sp, vec![(0, 1, Vector::basis(2)), (2, 0, Vector::term(0, int(2))), (2, 1, Vector::term(1, int(-2)))]).unwrap()
}

/// `x` in degree 1, `y` in degree 2, `[x, x] = 2y`, `dx = -y`: `x` is
/// Maurer–Cartan.
fn mc_dgla() -> Gla {
    let sp = GradedSpace::from_pairs(&[("x", 1), ("y", 2)]).unwrap();
    let d = LinearMap::new(2, 2, 1, vec![Vector::term(1, int(-1)), Vector::zero()]).unwrap();
    Gla::new(sp, vec![(0, 0, Vector::term(1, int(2)))]).unwrap().with_differential(d).unwrap()
}

fn mixed_space() -> Arc<GradedSpace> {
    Arc::new(GradedSpace::from_pairs(&[("a", 0), ("b", -1), ("c", 1)]).unwrap())
}

fn sample(space: &Arc<GradedSpace>, degree: i64, flavor: Flavor, n: usize, seed: i64) -> Coderivation {
    let mut c = Coderivation::new(space.clone(), degree, flavor, n);
    let start = if flavor == Flavor::Reduced { 1 } else { 0 };
    let mut k = seed;
    for a in start..=n {
        for w in words(space, a) {
            let want = word::word_degree(&w, space) + degree;
            let mut v = Vector::zero();
            for i in space.indices_of_degree(want) {
                k = (k * 7 + 3) % 11;
                if k % 3 != 0 {
                    v.add_term(i, int(k - 5));
                }
            }
            c.set(w, v).unwrap();
        }
    }
    c
}

#[test]
fn decalage_is_linfty() {
    let (_, q) = decalage(&sl2(), "s", 4).unwrap();
    assert!(check_linfty(&q, 4, "linfty").unwrap().iter().all(|c| c.pass));
    let (_, q) = decalage(&mc_dgla(), "s", 4).unwrap();
    assert!(is_linfty(&q, 4).unwrap());
}

#[test]
fn broken_bracket_is_not_linfty() {
    let sp = GradedSpace::from_pairs(&[("a", 0), ("b", 0), ("c", 0)]).unwrap();
    let g = Gla::new(sp, vec![(0, 1, Vector::basis(2)), (0, 2, Vector::basis(0))]).unwrap();
    let (_, q) = decalage(&g, "s", 3).unwrap();
    assert!(!is_linfty(&q, 3).unwrap());
}

#[test]
fn bracket_graded_antisymmetry() {
    let sp = mixed_space();
    for (dq, dr) in [(0, 1), (1, 1), (-1, 0), (1, 2)] {
        let q = sample(&sp, dq, Flavor::Reduced, 3, 1);
        let r = sample(&sp, dr, Flavor::Reduced, 3, 4);
        let a = nr_bracket(&q, &r).unwrap();
        let b = nr_bracket(&r, &q).unwrap();
        let s = crate::scalars::sign((dq * dr).rem_euclid(2) == 0);
        assert!(a.equal_up_to(&b.scaled(&s), 3), "degrees {dq} {dr}");
    }
}

#[test]
fn section_bracket_inserts_front() {
    let sp = mixed_space();
    let q = sample(&sp, 1, Flavor::Reduced, 4, 2);
    for v in 0..sp.dim() {
        let s = Coderivation::section(sp.clone(), &Vector::basis(v), 4).unwrap();
        let b = nr_bracket(&q, &s).unwrap();
        for i in 0..=3 {
            for w in words(&sp, i) {
                let want = q.coeff(i + 1).eval_front(&Vector::basis(v), &w, q.odd());
                assert_eq!(b.value(&w), want, "v={v} w={w:?}");
            }
        }
        assert!(nr_bracket(&s, &s).unwrap().is_zero());
    }
}

#[test]
fn action_roundtrip() {
    let sp = mixed_space();
    let q = sample(&sp, 1, Flavor::Unreduced, 3, 5);
    let back = Coderivation::from_action(sp.clone(), 1, Flavor::Unreduced, 3, |t| q.apply(t)).unwrap();
    assert_eq!(back, q);
}

#[test]
fn product_matches_composition() {
    let sp = mixed_space();
    let q = sample(&sp, 1, Flavor::Reduced, 3, 6);
    let r = sample(&sp, 0, Flavor::Reduced, 3, 8);
    let p = nr_product(&q, &r).unwrap();
    for i in 1..=3 {
        for w in words(&sp, i) {
            let full = q.apply(&r.apply(&SymTensor::word(w.clone())).unwrap()).unwrap();
            assert_eq!(p.value(&w), full.linear_part());
        }
    }
}

#[test]
fn twisting_decalage_twists_differential() {
    let g = mc_dgla();
    let (sp, q) = decalage(&g, "s", 4).unwrap();
    let x = Vector::basis(0);
    assert!(is_maurer_cartan(&q, &x).unwrap());
    let qx = twist(&q, &x).unwrap();
    let adx = crate::graded::gla::Derivation::inner(&g, &Vector::basis(0)).unwrap();
    let mut dx = g.differential().unwrap().clone();
    dx.add_scaled(&int(1), &adx.map).unwrap();
    let gx = g.clone().with_differential(dx).unwrap();
    let expected = decalage_on(&gx, sp, 4).unwrap();
    assert!(qx.equal_up_to(&expected, 2));
    assert!(is_linfty(&qx, 2).unwrap());
}

#[test]
fn twist_needs_a_tail_bound() {
    let sp = mixed_space();
    let q = sample(&sp, 1, Flavor::Reduced, 3, 6);
    assert!(matches!(twist(&q, &Vector::basis(0)), Err(crate::Error::NotFinite(_))));
}

#[test]
fn strict_morphism_of_dglas() {
    let g = sl2();
    let (sp, q) = decalage(&g, "s", 3).unwrap();
    // the automorphism e -> 2e, f -> f/2
    let phi = LinearMap::new(3, 3, 0, vec![Vector::term(0, int(2)), Vector::term(1, rat(1, 2)), Vector::basis(2)]).unwrap();
    let f = CoalgMorphism::strict(sp.clone(), sp.clone(), &phi, 3).unwrap();
    assert!(check_morphism(&f, &q, &q, 3, "m").unwrap().iter().all(|c| c.pass));
    let bad = LinearMap::new(3, 3, 0, vec![Vector::term(0, int(2)), Vector::basis(1), Vector::basis(2)]).unwrap();
    let f = CoalgMorphism::strict(sp.clone(), sp, &bad, 3).unwrap();
    assert!(!check_morphism(&f, &q, &q, 3, "m").unwrap().iter().all(|c| c.pass));
}

#[test]
fn composition_of_morphisms() {
    let sp = mixed_space();
    let mut f = CoalgMorphism::new(sp.clone(), sp.clone(), 3);
    f.set(vec![0], Vector::basis(0)).unwrap();
    f.set(vec![1], Vector::basis(1)).unwrap();
    f.set(vec![2], Vector::basis(2)).unwrap();
    f.set(vec![1, 2], Vector::term(0, int(3))).unwrap();
    let id = CoalgMorphism::strict(sp.clone(), sp.clone(), &LinearMap::identity(3), 3).unwrap();
    assert!(f.compose(&id).unwrap().compare(&f, "c", 3).iter().all(|c| c.pass));
    assert!(id.compose(&f).unwrap().compare(&f, "c", 3).iter().all(|c| c.pass));
    // (f∘f)_2(b c) = f_1(f_2(bc)) + f_2(f_1 b ⊙ f_1 c)
    assert_eq!(f.compose(&f).unwrap().value(&[1, 2]), Vector::term(0, int(6)));
}

#[test]
fn extension_roundtrip() {
    let (v, q) = decalage(&sl2(), "v", 3).unwrap();
    let (w, r) = decalage(&mc_dgla(), "w", 3).unwrap();
    let (total, _) = GradedSpace::direct_sum(&[&v, &w]).unwrap();
    let total = Arc::new(total);
    let zero = Classifying::new(v.clone(), w.clone(), 3);
    let theta = extension_from_morphism(total.clone(), &q, &r, &zero).unwrap();
    let (q2, r2, f2) = morphism_from_extension(&theta, v.clone(), w.clone()).unwrap();
    assert_eq!(q2, q.truncated(3).with_tail(None));
    assert!(r2.equal_up_to(&r, 3));
    assert!(f2.iter().next().is_none());

    let mut f = Classifying::new(v.clone(), w.clone(), 3);
    let mut c = f.blank(&[0]);
    c.set(vec![0], Vector::basis(0)).unwrap();
    c.set(vec![1], Vector::basis(1)).unwrap();
    f.set(vec![0], c).unwrap();
    let theta = extension_from_morphism(total.clone(), &q, &r, &f).unwrap();
    assert!(check_ideal(&theta, &[3, 4], 3, "ideal").iter().all(|c| c.pass));
    let (_, _, back) = morphism_from_extension(&theta, v, w).unwrap();
    assert!(back.compare(&f, "roundtrip").iter().all(|c| c.pass));
    assert!(back.is_strict());
}
