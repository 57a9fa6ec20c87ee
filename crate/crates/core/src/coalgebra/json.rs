//! Serializable views of coderivations and morphisms: nonzero Taylor
//! coefficients by arity, words and values written with basis names.

use serde::Serialize;

use crate::coalgebra::multimap::MultiMap;
use crate::coalgebra::{CoalgMorphism, Coderivation, Flavor};
use crate::graded::space::{GradedSpace, Vector};
use crate::scalars::format_rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TermJson {
    pub basis: String,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntryJson {
    pub word: Vec<String>,
    pub value: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArityJson {
    pub arity: usize,
    pub entries: Vec<EntryJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TaylorJson {
    pub degree: i64,
    pub flavor: String,
    pub coefficients: Vec<ArityJson>,
}

pub fn vector_json(v: &Vector, space: &GradedSpace) -> Vec<TermJson> {
    v.iter().map(|(i, c)| TermJson { basis: space.name(i).to_string(), coeff: format_rational(c) }).collect()
}

fn arity_json(k: usize, m: &MultiMap, source: &GradedSpace, target: &GradedSpace) -> Option<ArityJson> {
    let entries: Vec<EntryJson> = m
        .iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(w, v)| EntryJson { word: w.iter().map(|&l| source.name(l).to_string()).collect(), value: vector_json(v, target) })
        .collect();
    (!entries.is_empty()).then_some(ArityJson { arity: k, entries })
}

impl Coderivation {
    pub fn to_json(&self) -> TaylorJson {
        let sp = self.space();
        let flavor = match self.flavor() {
            Flavor::Reduced => "reduced",
            Flavor::Unreduced => "unreduced",
        };
        TaylorJson {
            degree: self.degree(),
            flavor: flavor.into(),
            coefficients: (0..=self.max_arity()).filter_map(|k| arity_json(k, self.coeff(k), sp, sp)).collect(),
        }
    }
}

impl CoalgMorphism {
    pub fn to_json(&self) -> TaylorJson {
        TaylorJson {
            degree: 0,
            flavor: "morphism".into(),
            coefficients: (1..=self.max_arity())
                .filter_map(|k| arity_json(k, self.coeff(k), self.source(), self.target()))
                .collect(),
        }
    }
}
