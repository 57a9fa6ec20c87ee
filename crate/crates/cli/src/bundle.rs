//! The JSON algebra bundle: parsing with field-path diagnostics, and the
//! reverse direction for writing the shipped fixtures out as bundles.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use derived_brackets::fixtures::Fixture;
use derived_brackets::graded::gla::{Derivation, Gla, Part};
use derived_brackets::graded::space::{BasisElem, GradedSpace, LinearMap, Vector};
use derived_brackets::hdb::{AssocAlgebra, NamedElement};
use derived_brackets::scalars::{format_rational, parse_rational};

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawTerm {
    pub basis: String,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawBasis {
    pub name: String,
    pub degree: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawEntry {
    pub left: String,
    pub right: String,
    pub value: Vec<RawTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSplitting {
    #[serde(rename = "L")]
    pub l: Vec<String>,
    #[serde(rename = "A")]
    pub a: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDerivation {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<i64>,
    pub matrix: BTreeMap<String, Vec<RawTerm>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawElement {
    pub name: String,
    pub value: Vec<RawTerm>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawBundle {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub basis: Vec<RawBasis>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bracket: Vec<RawEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub differential: Option<BTreeMap<String, Vec<RawTerm>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub splitting: Option<RawSplitting>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub derivations: Vec<RawDerivation>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub elements: Vec<RawElement>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_arity: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derivation_selection: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub second_algebra: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub associative: bool,
}

#[derive(Clone, Debug)]
pub enum Algebra {
    Lie(Gla),
    /// The bracket list read as a multiplication table.
    Associative(AssocAlgebra),
}

/// A parsed bundle.  For an associative bundle the derivations are plain
/// operators.
#[derive(Clone, Debug)]
pub struct Bundle {
    pub name: String,
    pub algebra: Algebra,
    pub elements: Vec<NamedElement>,
    pub derivations: Vec<Derivation>,
    pub selection: Option<Vec<String>>,
    pub max_arity: Option<usize>,
    pub second_algebra: Option<Vec<usize>>,
}

impl Bundle {
    pub fn space(&self) -> &GradedSpace {
        match &self.algebra {
            Algebra::Lie(g) => g.space(),
            Algebra::Associative(a) => a.space(),
        }
    }

    pub fn gla(&self) -> Option<&Gla> {
        match &self.algebra {
            Algebra::Lie(g) => Some(g),
            Algebra::Associative(_) => None,
        }
    }

    /// The differential as a derivation named `d`, when there is one.
    pub fn differential(&self) -> Option<Derivation> {
        self.gla()?.differential().map(|d| Derivation::new("d", d.clone()))
    }

    /// The derivations named by `derivation_selection`, in that order, or
    /// all of them.
    pub fn selected(&self) -> Vec<Derivation> {
        match &self.selection {
            None => self.derivations.clone(),
            Some(names) => names.iter().filter_map(|n| self.derivations.iter().find(|d| &d.name == n).cloned()).collect(),
        }
    }

    /// Selected derivations followed by the differential, if any.
    pub fn selected_with_differential(&self) -> Vec<Derivation> {
        let mut out = self.selected();
        if let Some(d) = self.differential() {
            if !out.iter().any(|e| e.name == d.name) {
                out.push(d);
            }
        }
        out
    }
}

/// Parses bundle text; `path` is only used in diagnostics.
pub fn parse(text: &str, path: &str) -> CliResult<Bundle> {
    let raw: RawBundle = serde_json::from_str(text).map_err(|e| CliError::Syntax {
        path: path.into(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    Parser { path }.bundle(&raw)
}

struct Parser<'a> {
    path: &'a str,
}

impl Parser<'_> {
    fn err(&self, field: impl Into<String>, message: impl Into<String>) -> CliError {
        CliError::field(self.path, field, message)
    }

    fn bundle(&self, raw: &RawBundle) -> CliResult<Bundle> {
        let space = self.space(&raw.basis)?;
        let index = |name: &str, field: String| space.index_of(name).map_err(|_| self.err(field, format!("unknown basis element {name:?}")));

        let mut entries = Vec::new();
        let mut seen = BTreeSet::new();
        for (k, e) in raw.bracket.iter().enumerate() {
            let f = format!("bracket[{k}]");
            let i = index(&e.left, format!("{f}.left"))?;
            let j = index(&e.right, format!("{f}.right"))?;
            if !seen.insert((i, j)) {
                return Err(self.err(f, format!("entry for ({}, {}) given twice", e.left, e.right)));
            }
            entries.push((i, j, self.vector(&space, &e.value, &format!("{f}.value"))?));
        }

        let algebra = if raw.associative {
            if raw.differential.is_some() {
                return Err(self.err("differential", "an associative bundle takes no differential"));
            }
            if raw.splitting.is_some() {
                return Err(self.err("splitting", "an associative bundle takes no splitting"));
            }
            Algebra::Associative(AssocAlgebra::new(space.clone(), entries).map_err(|e| self.err("bracket", e.to_string()))?)
        } else {
            let mut g = Gla::new(space.clone(), entries).map_err(|e| self.err("bracket", e.to_string()))?;
            if let Some(d) = &raw.differential {
                let map = self.matrix(&space, d, Some(1), "differential")?;
                g = g.with_differential(map).map_err(|e| self.err("differential", e.to_string()))?;
            }
            if let Some(s) = &raw.splitting {
                g = g.with_parts(self.parts(&space, s)?).map_err(|e| self.err("splitting", e.to_string()))?;
            }
            Algebra::Lie(g)
        };

        let mut names: BTreeSet<String> = BTreeSet::new();
        let mut claim = |name: &str, field: String| -> CliResult<()> {
            if name.is_empty() {
                return Err(self.err(field, "empty name"));
            }
            if !names.insert(name.to_string()) {
                return Err(self.err(field, format!("duplicate name {name:?}")));
            }
            Ok(())
        };

        let mut elements = Vec::new();
        for (k, e) in raw.elements.iter().enumerate() {
            let f = format!("elements[{k}]");
            claim(&e.name, format!("{f}.name"))?;
            let value = self.vector(&space, &e.value, &format!("{f}.value"))?;
            space.homogeneous_degree(&value).map_err(|e| self.err(format!("{f}.value"), e.to_string()))?;
            elements.push(NamedElement { name: e.name.clone(), value });
        }

        let mut derivations = Vec::new();
        for (k, d) in raw.derivations.iter().enumerate() {
            let f = format!("derivations[{k}]");
            claim(&d.name, format!("{f}.name"))?;
            let map = self.matrix(&space, &d.matrix, d.degree, &format!("{f}.matrix"))?;
            derivations.push(Derivation::new(&d.name, map));
        }

        if let Some(sel) = &raw.derivation_selection {
            for (k, name) in sel.iter().enumerate() {
                let f = format!("derivation_selection[{k}]");
                if !derivations.iter().any(|d| &d.name == name) {
                    return Err(self.err(f, format!("no derivation named {name:?}")));
                }
                if sel[..k].contains(name) {
                    return Err(self.err(f, format!("{name:?} selected twice")));
                }
            }
        }

        let second_algebra = match &raw.second_algebra {
            None => None,
            Some(list) => {
                let mut idx = Vec::new();
                for (k, name) in list.iter().enumerate() {
                    let i = index(name, format!("second_algebra[{k}]"))?;
                    if idx.contains(&i) {
                        return Err(self.err(format!("second_algebra[{k}]"), format!("{name:?} listed twice")));
                    }
                    idx.push(i);
                }
                idx.sort_unstable();
                Some(idx)
            }
        };

        if raw.max_arity == Some(0) {
            return Err(self.err("max_arity", "must be at least 1"));
        }

        Ok(Bundle {
            name: raw.name.clone().unwrap_or_else(|| self.path.to_string()),
            algebra,
            elements,
            derivations,
            selection: raw.derivation_selection.clone(),
            max_arity: raw.max_arity,
            second_algebra,
        })
    }

    fn space(&self, basis: &[RawBasis]) -> CliResult<GradedSpace> {
        let mut seen = BTreeSet::new();
        for (k, b) in basis.iter().enumerate() {
            if b.name.is_empty() {
                return Err(self.err(format!("basis[{k}].name"), "empty name"));
            }
            if !seen.insert(b.name.as_str()) {
                return Err(self.err(format!("basis[{k}].name"), format!("duplicate basis name {:?}", b.name)));
            }
        }
        let elems = basis.iter().map(|b| BasisElem { name: b.name.clone(), degree: b.degree }).collect();
        GradedSpace::new(elems).map_err(|e| self.err("basis", e.to_string()))
    }

    fn rational(&self, s: &str, field: &str) -> CliResult<derived_brackets::Rational> {
        let q = parse_rational(s).map_err(|e| self.err(field, e.to_string()))?;
        if format_rational(&q) != s {
            return Err(self.err(field, format!("{s:?} is not in canonical form; write {:?}", format_rational(&q))));
        }
        Ok(q)
    }

    fn vector(&self, space: &GradedSpace, terms: &[RawTerm], field: &str) -> CliResult<Vector> {
        let mut v = Vector::zero();
        for (k, t) in terms.iter().enumerate() {
            let i = space.index_of(&t.basis).map_err(|_| self.err(format!("{field}[{k}].basis"), format!("unknown basis element {:?}", t.basis)))?;
            v.add_term(i, self.rational(&t.coeff, &format!("{field}[{k}].coeff"))?);
        }
        Ok(v)
    }

    /// Columns keyed by basis name.  Without a declared degree, the degree
    /// is read off the entries (zero for the zero map).
    fn matrix(&self, space: &GradedSpace, cols: &BTreeMap<String, Vec<RawTerm>>, degree: Option<i64>, field: &str) -> CliResult<LinearMap> {
        let n = space.dim();
        let mut columns = vec![Vector::zero(); n];
        let mut inferred: Option<i64> = None;
        for (src, terms) in cols {
            let f = format!("{field}.{src}");
            let j = space.index_of(src).map_err(|_| self.err(&f, format!("unknown basis element {src:?}")))?;
            let v = self.vector(space, terms, &f)?;
            for (i, _) in v.iter() {
                let deg = space.degree(i) - space.degree(j);
                match (degree, inferred) {
                    (Some(want), _) if want != deg => {
                        return Err(self.err(&f, format!("{src} ↦ {} has degree {deg}, expected {want}", space.name(i))));
                    }
                    (None, Some(seen)) if seen != deg => {
                        return Err(self.err(&f, format!("mixed degrees {seen} and {deg}")));
                    }
                    _ => inferred = Some(deg),
                }
            }
            columns[j] = v;
        }
        let deg = degree.or(inferred).unwrap_or(0);
        LinearMap::new(n, n, deg, columns).map_err(|e| self.err(field, e.to_string()))
    }

    fn parts(&self, space: &GradedSpace, s: &RawSplitting) -> CliResult<Vec<Part>> {
        let mut parts: Vec<Option<Part>> = vec![None; space.dim()];
        for (list, part, label) in [(&s.l, Part::L, "L"), (&s.a, Part::A, "A")] {
            for (k, name) in list.iter().enumerate() {
                let f = format!("splitting.{label}[{k}]");
                let i = space.index_of(name).map_err(|_| self.err(&f, format!("unknown basis element {name:?}")))?;
                if parts[i].is_some() {
                    return Err(self.err(f, format!("{name:?} assigned twice")));
                }
                parts[i] = Some(part);
            }
        }
        if let Some(i) = parts.iter().position(Option::is_none) {
            return Err(self.err("splitting", format!("{:?} is in neither L nor A", space.name(i))));
        }
        Ok(parts.into_iter().map(|p| p.expect("checked")).collect())
    }
}

fn terms(v: &Vector, space: &GradedSpace) -> Vec<RawTerm> {
    v.iter().map(|(i, c)| RawTerm { basis: space.name(i).into(), coeff: format_rational(c) }).collect()
}

fn columns(m: &LinearMap, space: &GradedSpace) -> BTreeMap<String, Vec<RawTerm>> {
    (0..m.domain_dim())
        .filter(|&j| !m.column(j).is_zero())
        .map(|j| (space.name(j).to_string(), terms(m.column(j), space)))
        .collect()
}

/// A shipped fixture as a bundle.
pub fn fixture_bundle(f: &Fixture) -> RawBundle {
    let g = &f.gla;
    let sp = g.space();
    let names = |p: Part| g.indices_in(p).into_iter().map(|i| sp.name(i).to_string()).collect();
    RawBundle {
        name: Some(f.name.clone()),
        basis: sp.basis().iter().map(|b| RawBasis { name: b.name.clone(), degree: b.degree }).collect(),
        bracket: g
            .entries()
            .into_iter()
            .map(|(i, j, v)| RawEntry { left: sp.name(i).into(), right: sp.name(j).into(), value: terms(&v, sp) })
            .collect(),
        differential: g.differential().map(|d| columns(d, sp)),
        splitting: g.parts().map(|_| RawSplitting { l: names(Part::L), a: names(Part::A) }),
        derivations: f
            .derivations
            .iter()
            .map(|d| RawDerivation { name: d.name.clone(), degree: Some(d.degree()), matrix: columns(&d.map, sp) })
            .collect(),
        elements: f.elements.iter().map(|e| RawElement { name: e.name.clone(), value: terms(&e.value, sp) }).collect(),
        ..RawBundle::default()
    }
}
