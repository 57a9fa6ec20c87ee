use std::sync::Arc;

use proptest::prelude::*;

use derived_brackets::coalgebra::{decalage, extension_from_morphism, morphism_from_extension, nr_bracket, nr_product, Flavor};
use derived_brackets::graded::homology::homology;
use derived_brackets::graded::space::{GradedSpace, LinearMap, Vector};
use derived_brackets::hdb::{verify_fiber_sequence, verify_lie_morphism, verify_phi_identity, Split, SubcomplexSplit};
use derived_brackets::random::{self, Sampler};
use derived_brackets::report::Check;
use derived_brackets::scalars::{int, sign, Rational};

fn failures(checks: &[Check]) -> Vec<&Check> {
    checks.iter().filter(|c| !c.pass).collect()
}

/// Rank by fraction-free elimination on a dense copy.
fn dense_rank(d: &LinearMap) -> usize {
    let (rows, cols) = (d.codomain_dim(), d.domain_dim());
    let mut m: Vec<Vec<Rational>> = (0..rows).map(|i| (0..cols).map(|j| d.entry(i, j)).collect()).collect();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| m[r][c] != int(0)) else { continue };
        m.swap(rank, p);
        for r in 0..rows {
            if r != rank && m[r][c] != int(0) {
                let f = &m[r][c] / &m[rank][c];
                for k in 0..cols {
                    let t = &f * &m[rank][k];
                    m[r][k] -= t;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[test]
fn lie_morphism_identities_on_random_algebras() {
    for f in random::fixtures(7, 20).unwrap() {
        let split = Split::new(&f.gla).unwrap();
        let checks = verify_lie_morphism(&split, &f.elements, &f.derivations, 4).unwrap();
        assert!(failures(&checks).is_empty(), "{} {:#?}", f.name, failures(&checks));
        for d in f.derivations.iter().filter(|d| d.degree() == 1 && d.map.compose(&d.map).unwrap().is_zero()) {
            let checks = verify_fiber_sequence(&split, d, 4).unwrap();
            assert!(failures(&checks).is_empty(), "{} {:#?}", f.name, failures(&checks));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn sampled_algebras_are_valid_and_seeded(seed in any::<u64>()) {
        let a = Sampler::new(seed).fixture("a", 5).unwrap();
        let b = Sampler::new(seed).fixture("a", 5).unwrap();
        prop_assert!(a.gla.is_valid());
        prop_assert!(Split::new(&a.gla).is_ok());
        prop_assert_eq!(&a.gla, &b.gla);
        for d in &a.derivations {
            prop_assert!(d.validate(&a.gla).iter().all(|c| c.pass));
        }
    }

    #[test]
    fn extension_and_classifying_morphism_are_inverse(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let g = s.gla(3, &[0, 1]).unwrap();
        let h = s.gla(2, &[0, 1]).unwrap();
        let (v, q) = decalage(&g, "v", 3).unwrap();
        let (w, r) = decalage(&h, "w", 3).unwrap();
        let total = Arc::new(GradedSpace::direct_sum(&[&v, &w]).unwrap().0);
        let f = s.classifying(&v, &w, 3).unwrap();
        let theta = extension_from_morphism(total, &q, &r, &f).unwrap();
        let (q2, r2, back) = morphism_from_extension(&theta, v, w).unwrap();
        prop_assert!(q2.equal_up_to(&q, 3));
        prop_assert!(r2.equal_up_to(&r, 3));
        prop_assert!(back.compare(&f, "roundtrip").iter().all(|c| c.pass));
    }

    #[test]
    fn derived_brackets_of_a_random_coderivation_return_it(seed in any::<u64>(), degree in -1i64..=1) {
        let sp = Arc::new(GradedSpace::from_pairs(&[("u", 0), ("v", 1)]).unwrap());
        let r = Sampler::new(seed).coderivation(&sp, degree, Flavor::Unreduced, 3);
        let checks = verify_phi_identity(&r, "phi_identity").unwrap();
        prop_assert!(failures(&checks).is_empty(), "{:#?}", failures(&checks));
    }

    #[test]
    fn nijenhuis_richardson_product_is_right_pre_lie(seed in any::<u64>(), dq in -1i64..=1, dr in -1i64..=1, ds in -1i64..=1) {
        let sp = Arc::new(GradedSpace::from_pairs(&[("a", 0), ("b", 1), ("c", -1)]).unwrap());
        let mut smp = Sampler::new(seed);
        let q = smp.coderivation(&sp, dq, Flavor::Reduced, 2);
        let r = smp.coderivation(&sp, dr, Flavor::Reduced, 2);
        let t = smp.coderivation(&sp, ds, Flavor::Reduced, 2);
        let assoc = |x, y| {
            let left = nr_product(&nr_product(&q, x).unwrap(), y).unwrap();
            let right = nr_product(&q, &nr_product(x, y).unwrap()).unwrap();
            left.add_scaled(&int(-1), &right).unwrap()
        };
        let lhs = assoc(&r, &t);
        let rhs = assoc(&t, &r).scaled(&sign((dr * ds).rem_euclid(2) == 1));
        prop_assert!(lhs.equal_up_to(&rhs, 2));
    }

    #[test]
    fn nijenhuis_richardson_bracket_satisfies_jacobi(seed in any::<u64>(), dq in -1i64..=1, dr in -1i64..=1, ds in -1i64..=1) {
        let sp = Arc::new(GradedSpace::from_pairs(&[("a", 0), ("b", 1)]).unwrap());
        let mut smp = Sampler::new(seed);
        let q = smp.coderivation(&sp, dq, Flavor::Reduced, 2);
        let r = smp.coderivation(&sp, dr, Flavor::Reduced, 2);
        let t = smp.coderivation(&sp, ds, Flavor::Reduced, 2);
        let lhs = nr_bracket(&q, &nr_bracket(&r, &t).unwrap()).unwrap();
        let a = nr_bracket(&nr_bracket(&q, &r).unwrap(), &t).unwrap();
        let b = nr_bracket(&r, &nr_bracket(&q, &t).unwrap()).unwrap();
        let rhs = a.add_scaled(&sign((dq * dr).rem_euclid(2) == 1), &b).unwrap();
        prop_assert!(lhs.equal_up_to(&rhs, 2));
    }

    #[test]
    fn homology_matches_rank_nullity(seed in any::<u64>(), dim in 2usize..=6) {
        let (sp, d) = Sampler::new(seed).complex(dim).unwrap();
        let h = homology(&sp, &d).unwrap();
        prop_assert_eq!(h.total(), dim - 2 * dense_rank(&d));
    }

    #[test]
    fn subcomplex_brackets_vanish_from_arity_three(seed in any::<u64>(), cut in 1i64..=2) {
        let (sp, d) = Sampler::new(seed).complex(4).unwrap();
        // d raises degree, so the span of the degrees at least `cut` is stable.
        let w: Vec<usize> = (0..4).filter(|&i| sp.degree(i) >= cut).collect();
        prop_assume!(!w.is_empty() && w.len() < 4);
        let sc = SubcomplexSplit::new(sp, d, w).unwrap();
        let phi = sc.brackets(4).unwrap();
        for k in 3..=4 {
            prop_assert!(phi.coeff(k).iter().all(|(_, v): (_, &Vector)| v.is_zero()));
        }
        prop_assert!(failures(&sc.verify(4).unwrap()).is_empty());
    }
}
