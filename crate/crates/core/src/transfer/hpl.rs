//! The L∞[1] quasi-isomorphism `G: V → W` going the other way, from the
//! perturbation lemma on `SV` with the symmetrized homotopy `K̃`.
//!
//! `G = π̃ Σ_k (δK̃)^k`, where `δ` collects the coefficients of `Q` of
//! arity at least two; its corestriction is `g(w) = π(Σ_k (δK̃)^k w)₁`.

use num_traits::One;

use crate::coalgebra::{words, CoalgMorphism, Coderivation, Flavor, SymTensor};
use crate::error::{Error, Result};
use crate::graded::sign::{combinations, complement, koszul_odd};
use crate::graded::space::Vector;
use crate::scalars::{factorial, sign, Rational};
use crate::transfer::{require_structure, RetractionData};

/// `K̃(v₁⊙⋯⊙v_n) = Σ_j Σ_S c_S ± v_S ⊙ Kv_j ⊙ f₁π v_R`, where `S ⊔ R`
/// runs over splittings of the other positions and
/// `c_S = |S|!(n-1-|S|)!/n!`.
fn k_tilde(data: &RetractionData, odd: &[bool], t: &SymTensor) -> SymTensor {
    let mut out = SymTensor::zero();
    for (w, c) in t.iter() {
        let n = w.len();
        if n == 0 {
            continue;
        }
        let letters: Vec<bool> = w.iter().map(|&l| odd[l]).collect();
        let kw: Vec<Vector> = w.iter().map(|&l| data.k.column(l).clone()).collect();
        let pw: Vec<Vector> = w.iter().map(|&l| data.f1.apply(data.pi.column(l))).collect();
        let plain: Vec<Vector> = w.iter().map(|&l| Vector::basis(l)).collect();
        for j in 0..n {
            if kw[j].is_zero() {
                continue;
            }
            let others: Vec<usize> = (0..n).filter(|&p| p != j).collect();
            for s in 0..n {
                let weight = factorial(s) * factorial(n - 1 - s) / factorial(n);
                for chosen in combinations(n - 1, s) {
                    let left: Vec<usize> = chosen.iter().map(|&p| others[p]).collect();
                    let right: Vec<usize> = complement(n - 1, &chosen).iter().map(|&p| others[p]).collect();
                    if right.iter().any(|&p| pw[p].is_zero()) {
                        continue;
                    }
                    let mut perm = left.clone();
                    perm.push(j);
                    perm.extend_from_slice(&right);
                    let past = left.iter().filter(|&&p| letters[p]).count() % 2 == 1;
                    let sg = sign(koszul_odd(&perm, &letters) ^ past);
                    let mut factors: Vec<&Vector> = left.iter().map(|&p| &plain[p]).collect();
                    factors.push(&kw[j]);
                    factors.extend(right.iter().map(|&p| &pw[p]));
                    let prod = SymTensor::product(&factors, odd);
                    out.add_scaled(&(c * &weight * &sg), &prod);
                }
            }
        }
    }
    out
}

/// The morphism `G: (V, Q) → (W, R)` up to arity `n`, for retraction data
/// satisfying `πK = 0`, `Kf₁ = 0` and `K² = 0`.
pub fn right_inverse(q: &Coderivation, data: &RetractionData, n: usize) -> Result<CoalgMorphism> {
    require_structure(q, data)?;
    if n > q.max_arity() {
        return Err(Error::Window { requested: n, available: q.max_arity() });
    }
    if let Some(c) = data.side_conditions()?.into_iter().find(|c| !c.pass) {
        return Err(Error::Invalid(format!("the retraction data fails {} on {:?}", c.identity, c.word)));
    }
    let big = data.big.clone();
    let odd: Vec<bool> = (0..big.dim()).map(|i| big.is_odd(i)).collect();
    let mut delta = Coderivation::new(big.clone(), 1, Flavor::Reduced, q.max_arity());
    for k in 2..=q.max_arity() {
        for (w, v) in q.coeff(k).iter() {
            delta.set(w.clone(), v.clone())?;
        }
    }
    let mut g = CoalgMorphism::new(big.clone(), data.small.clone(), n.max(1));
    for i in 1..=n {
        for w in words(&big, i) {
            let mut term = SymTensor::word(w.clone());
            let mut total = term.linear_part();
            for _ in 1..i {
                term = delta.apply(&k_tilde(data, &odd, &term))?;
                if term.is_zero() {
                    break;
                }
                total.add_scaled(&Rational::one(), &term.linear_part());
            }
            g.set(w, data.pi.apply(&total))?;
        }
    }
    Ok(g)
}
