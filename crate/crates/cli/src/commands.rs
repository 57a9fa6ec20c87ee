//! One function per subcommand.  Each returns an [`Outcome`]: a report plus
//! named JSON payloads (brackets, structures, spaces).

use std::collections::BTreeMap;

use serde_json::{json, Value};

use derived_brackets::cocone::{Cone, FiberModel};
use derived_brackets::coalgebra::{check_linfty, is_linfty, nr_product};
use derived_brackets::graded::gla::{Derivation, Gla, Part};
use derived_brackets::graded::homology::check_manetti_hypothesis;
use derived_brackets::graded::space::{GradedSpace, Vector};
use derived_brackets::hdb::{examples, getzler, verify_abelian_reduction, verify_fiber_sequence, verify_lie_morphism, KoszulSplit, NamedElement, Split};
use derived_brackets::random;
use derived_brackets::report::{Check, Report};
use derived_brackets::scalars::BernoulliTable;
use derived_brackets::transfer::section5::{check_first_generalized_bracket, TransferSeed};
use derived_brackets::transfer::{generalized_brackets_via_transfer, DerivationAlgebra, Section5};

use crate::bundle::{Algebra, Bundle};
use crate::error::{CliError, CliResult};

/// Number of random fixtures the theorem and L∞ suites add per seed.
pub const RANDOM_FIXTURES: usize = 20;

#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: Report,
    pub payload: BTreeMap<String, Value>,
}

impl Outcome {
    fn new(command: &str) -> Outcome {
        Outcome { report: Report::new(command), payload: BTreeMap::new() }
    }

    fn put(&mut self, key: &str, v: Value) {
        self.payload.insert(key.into(), v);
    }

    /// The report fields followed by the payload, as one JSON object.
    pub fn to_value(&self) -> Value {
        let mut v = serde_json::to_value(&self.report).expect("plain data");
        let obj = v.as_object_mut().expect("report is an object");
        for (k, p) in &self.payload {
            obj.insert(k.clone(), p.clone());
        }
        v
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Theorems,
    Linfty,
    Examples,
    All,
}

fn space_json(sp: &GradedSpace) -> Value {
    Value::Array(sp.basis().iter().map(|b| json!({ "name": b.name, "degree": b.degree })).collect())
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("plain data")
}

fn lie<'b>(b: &'b Bundle, what: &str) -> CliResult<&'b Gla> {
    b.gla().ok_or_else(|| CliError::precondition(format!("{what} needs a Lie bundle; this one is associative")))
}

fn require_splitting(g: &Gla, what: &str) -> CliResult<()> {
    if g.parts().is_none() {
        return Err(CliError::precondition(format!(
            "{what} needs a splitting; add \"splitting\": {{\"L\": [...], \"A\": [...]}} to the bundle"
        )));
    }
    Ok(())
}

fn validation(b: &Bundle) -> Vec<Check> {
    match &b.algebra {
        Algebra::Lie(g) => {
            let mut out = g.validate();
            for d in &b.derivations {
                out.extend(d.validate(g));
            }
            out
        }
        Algebra::Associative(alg) => {
            let mut out = alg.validate();
            for d in &b.derivations {
                let ok = d.map.check_degree(alg.space(), alg.space());
                out.push(Check::flag(
                    &format!("operator_degree[{}]", d.name),
                    ok.is_ok(),
                    ok.err().map(|e| e.to_string()).unwrap_or_else(|| format!("degree {}", d.degree())),
                ));
            }
            out
        }
    }
}

/// Failing axioms other than closure of `A`, which only rules out the
/// closed forms.  `Some` means the command must stop with that outcome.
fn gate(b: &Bundle, command: &str) -> Option<Outcome> {
    let bad: Vec<Check> = validation(b).into_iter().filter(|c| !c.pass && c.identity != "a_subalgebra").collect();
    if bad.is_empty() {
        return None;
    }
    let mut out = Outcome::new(command);
    out.report.extend(bad);
    out.report.note("the bundle fails validation; nothing else was run (see `dbr validate`)");
    Some(out)
}

pub fn validate(b: &Bundle) -> CliResult<Outcome> {
    let mut out = Outcome::new("validate");
    out.report.extend(validation(b));
    if let Some(c) = out.report.checks.iter().find(|c| c.identity == "a_subalgebra" && !c.pass) {
        out.report.note(format!(
            "A is not a subalgebra ([{}] leaves A); only `brackets --via-transfer` applies",
            c.word.join(", ")
        ));
    }
    out.put("space", space_json(b.space()));
    Ok(out)
}

enum Source {
    Element(NamedElement),
    Derivation(Derivation),
}

/// Derivations first, then named elements, the differential `d`, and
/// finally basis elements.
fn resolve(b: &Bundle, name: &str) -> CliResult<Source> {
    if let Some(d) = b.derivations.iter().find(|d| d.name == name) {
        return Ok(Source::Derivation(d.clone()));
    }
    if let Some(e) = b.elements.iter().find(|e| e.name == name) {
        return Ok(Source::Element(e.clone()));
    }
    if let Some(d) = b.differential().filter(|d| d.name == name) {
        return Ok(Source::Derivation(d));
    }
    if let Ok(i) = b.space().index_of(name) {
        return Ok(Source::Element(NamedElement { name: name.into(), value: Vector::basis(i) }));
    }
    Err(CliError::field("<command line>", "--source", format!("no derivation, element or basis element named {name:?}")))
}

pub fn brackets(b: &Bundle, source: &str, n: usize, via_transfer: bool) -> CliResult<Outcome> {
    let mut out = Outcome::new("brackets");
    let src = resolve(b, source)?;
    if let Some(o) = gate(b, "brackets") {
        return Ok(o);
    }
    let (route, phi) = match (&b.algebra, &src) {
        (Algebra::Associative(alg), Source::Derivation(f)) => {
            let ks = KoszulSplit::new(alg.clone())?;
            out.report.extend(ks.check_low_arity(&f.map, &f.name)?);
            ("koszul", ks.brackets(&f.map, n)?)
        }
        (Algebra::Associative(_), Source::Element(_)) => {
            return Err(CliError::precondition(format!("{source:?} is not an operator; an associative bundle takes operators as sources")));
        }
        (Algebra::Lie(g), _) => {
            require_splitting(g, "brackets")?;
            if via_transfer {
                let seed = match &src {
                    Source::Element(e) => TransferSeed::Element(&e.value),
                    Source::Derivation(d) => TransferSeed::Derivation(d),
                };
                let phi = generalized_brackets_via_transfer(g, seed, n)?;
                if let Source::Element(e) = &src {
                    out.report.push(check_first_generalized_bracket(g, &e.value, &phi)?);
                }
                if let Ok(split) = Split::new(g) {
                    let def = match &src {
                        Source::Element(e) => split.phi_element(&e.value, n)?,
                        Source::Derivation(d) => split.phi_derivation(&d.map, n)?,
                    };
                    out.report.extend(phi.compare(&def, "transfer_vs_definition", n));
                }
                ("transfer", phi)
            } else {
                let split = Split::new(g).map_err(|e| {
                    CliError::precondition(format!("{e}; the closed form needs A to be a subalgebra, rerun with --via-transfer"))
                })?;
                let def = match &src {
                    Source::Element(e) => split.phi_element(&e.value, n)?,
                    Source::Derivation(d) => split.phi_derivation(&d.map, n)?,
                };
                if split.is_a_abelian() {
                    let vor = match &src {
                        Source::Element(e) => split.voronov_element(&e.value, n)?,
                        Source::Derivation(d) => split.voronov_derivation(&d.map, n)?,
                    };
                    out.report.extend(vor.compare(&def, "voronov_vs_definition", n));
                    ("voronov", vor)
                } else {
                    ("definition", def)
                }
            }
        }
    };
    out.put("source", json!(source));
    out.put("route", json!(route));
    out.put("brackets", to_value(&phi.to_json()));
    Ok(out)
}

fn prefixed(prefix: &str, checks: Vec<Check>) -> Vec<Check> {
    checks
        .into_iter()
        .map(|mut c| {
            c.identity = format!("{prefix}/{}", c.identity);
            c
        })
        .collect()
}

fn split_or_flag<'g>(g: &'g Gla, report: &mut Report, suite: &str) -> Option<Split<'g>> {
    match Split::new(g) {
        Ok(s) => Some(s),
        Err(e) => {
            report.push(Check::flag(&format!("precondition/{suite}"), false, e.to_string()));
            None
        }
    }
}

fn theorem_suite(b: &Bundle, n: usize, seed: u64, report: &mut Report) -> CliResult<()> {
    let Some(g) = b.gla() else {
        report.note("theorems: skipped for an associative bundle");
        return Ok(());
    };
    if let Some(split) = split_or_flag(g, report, "theorems") {
        let elements: Vec<NamedElement> = if b.elements.is_empty() {
            (0..g.dim()).map(|i| NamedElement { name: g.space().name(i).into(), value: Vector::basis(i) }).collect()
        } else {
            b.elements.clone()
        };
        let ders = b.selected_with_differential();
        report.extend(verify_lie_morphism(&split, &elements, &ders, n)?);
        if split.is_a_abelian() {
            report.extend(verify_abelian_reduction(&split, &elements, &ders, n)?);
        }
    }
    for f in random::fixtures(seed, RANDOM_FIXTURES)? {
        let split = Split::new(&f.gla)?;
        report.extend(prefixed(&f.name, verify_lie_morphism(&split, &f.elements, &f.derivations, n)?));
    }
    Ok(())
}

fn linfty_for(split: &Split, d: &Derivation, n: usize) -> CliResult<Vec<Check>> {
    let g = split.gla();
    let dd = d.map.compose(&d.map).expect("square matrix");
    if dd.is_zero() {
        let mut out = verify_fiber_sequence(split, d, n)?;
        let m = check_manetti_hypothesis(g, &d.map)?;
        out.push(Check::flag(
            &format!("manetti[{}]", d.name),
            m.injective == m.surjective,
            format!("H(i) injective: {}, H(P) surjective: {}", m.injective, m.surjective),
        ));
        return Ok(out);
    }
    // [D, D] = 2D², so Φ(D)•Φ(D) = Φ(D²), which need not vanish.
    let phi = split.phi_derivation(&d.map, n)?;
    let square = Derivation::new(&format!("{}^2", d.name), dd);
    let mut out = nr_product(&phi, &phi)?.compare(&split.phi_derivation(&square.map, n)?, &format!("phi_square[{}]", d.name), n);
    let broken = !is_linfty(&phi, n)?;
    out.push(Check::flag(
        &format!("expected_failure/linfty[{}]", d.name),
        broken,
        if broken { "[D, D] ≠ 0 and Φ(D)•Φ(D) ≠ 0".into() } else { "[D, D] ≠ 0 but Φ(D)•Φ(D) vanishes in the window".into() },
    ));
    Ok(out)
}

fn linfty_suite(b: &Bundle, n: usize, seed: u64, report: &mut Report) -> CliResult<()> {
    let Some(g) = b.gla() else {
        report.note("linfty: skipped for an associative bundle");
        return Ok(());
    };
    if let Some(split) = split_or_flag(g, report, "linfty") {
        let odd: Vec<Derivation> = b.selected_with_differential().into_iter().filter(|d| d.degree() == 1).collect();
        if odd.is_empty() {
            report.note("linfty: the bundle has no degree-one derivation");
        }
        for d in &odd {
            report.extend(linfty_for(&split, d, n)?);
        }
    }
    for f in random::fixtures(seed, RANDOM_FIXTURES)? {
        let split = Split::new(&f.gla)?;
        for d in f.derivations.iter().filter(|d| d.degree() == 1) {
            report.extend(prefixed(&f.name, linfty_for(&split, d, n)?));
        }
    }
    Ok(())
}

fn example_suite(b: &Bundle, n: usize, seed: u64, report: &mut Report) -> CliResult<()> {
    report.extend(examples::all(seed, n)?);
    match &b.algebra {
        Algebra::Associative(alg) => {
            let ks = KoszulSplit::new(alg.clone())?;
            for f in &b.selected() {
                report.extend(ks.check_low_arity(&f.map, &f.name)?);
            }
        }
        Algebra::Lie(g) if g.differential().is_some() => report.extend(getzler::verify(g, n)?),
        Algebra::Lie(_) => {}
    }
    Ok(())
}

pub fn check(b: &Bundle, suite: Suite, n: usize, seed: u64) -> CliResult<Outcome> {
    if let Some(o) = gate(b, "check") {
        return Ok(o);
    }
    let mut out = Outcome::new("check");
    let r = &mut out.report;
    if matches!(suite, Suite::Theorems | Suite::All) {
        theorem_suite(b, n, seed, r)?;
    }
    if matches!(suite, Suite::Linfty | Suite::All) {
        linfty_suite(b, n, seed, r)?;
    }
    if matches!(suite, Suite::Examples | Suite::All) {
        example_suite(b, n, seed, r)?;
    }
    out.put("seed", json!(seed));
    Ok(out)
}

pub fn transfer_check(b: &Bundle, n: usize, flip: Option<usize>) -> CliResult<Outcome> {
    let g = lie(b, "transfer-check")?;
    require_splitting(g, "transfer-check")?;
    if let Some(o) = gate(b, "transfer-check") {
        return Ok(o);
    }
    Split::new(g).map_err(|e| CliError::precondition(format!("{e}; the closed-form side needs A to be a subalgebra")))?;
    let m = g.clone().without_differential();
    let ders = DerivationAlgebra::closure(&m, b.selected_with_differential(), 16)?;
    let mut out = Outcome::new("transfer-check");
    let table = match flip {
        Some(k) => {
            out.report.note(format!("Bernoulli table altered at index {k}"));
            BernoulliTable::with_flipped(k)
        }
        None => BernoulliTable::exact(),
    };
    let s5 = Section5::new(&m, ders)?.with_table(table);
    out.report.extend(s5.oracle(n)?);
    let q = s5.big_structure(n)?;
    out.report.extend(s5.classifying_checks(&q, n)?);
    Ok(out)
}

/// `D` for the fiber model: the differential, else the only selected
/// square-zero derivation of degree one.
fn fiber_derivation(b: &Bundle) -> CliResult<Derivation> {
    if let Some(d) = b.differential() {
        return Ok(d);
    }
    let cands: Vec<Derivation> = b
        .selected()
        .into_iter()
        .filter(|d| d.degree() == 1 && d.map.compose(&d.map).map(|x| x.is_zero()).unwrap_or(false))
        .collect();
    match cands.len() {
        1 => Ok(cands.into_iter().next().expect("one")),
        0 => Err(CliError::precondition("fiber-model needs a differential or a square-zero derivation of degree one")),
        _ => Err(CliError::precondition("several square-zero derivations of degree one; pick one with \"derivation_selection\"")),
    }
}

fn fiber_payload(out: &mut Outcome, model: &FiberModel, n: usize) -> CliResult<()> {
    out.report.extend(model.oracle(n)?);
    out.report.extend(model.twisting_route(n)?);
    out.put("fiber_space", space_json(model.space()));
    out.put("r_d", to_value(&model.structure().to_json()));
    out.put("f_d", to_value(&model.morphism().to_json()));
    Ok(())
}

fn second(b: &Bundle, wanted: bool) -> CliResult<Vec<usize>> {
    match (&b.second_algebra, wanted) {
        (Some(idx), true) => Ok(idx.clone()),
        (None, true) => Err(CliError::precondition("--with-second-algebra needs \"second_algebra\" in the bundle")),
        (_, false) => Ok(Vec::new()),
    }
}

pub fn cocone(b: &Bundle, n: usize, with_second: bool) -> CliResult<Outcome> {
    let g = lie(b, "cocone")?;
    require_splitting(g, "cocone")?;
    if let Some(o) = gate(b, "cocone") {
        return Ok(o);
    }
    let n_idx = second(b, with_second)?;
    let mut out = Outcome::new("cocone");
    let cone = Cone::of_inclusions(g, &n_idx, &g.indices_in(Part::L))?;
    let r = cone.structure(&BernoulliTable::exact(), n)?;
    out.report.extend(check_linfty(&r, n, "cocone/linfty")?);
    if g.differential().is_none() {
        for d in &b.selected() {
            out.report.extend(cone.check_psi(&r, &d.map, n, &format!("cocone/psi[{}]", d.name))?);
        }
    }
    out.put("space", space_json(cone.space()));
    out.put("structure", to_value(&r.to_json()));
    if let Some(d) = b.differential() {
        let model = FiberModel::new(g, &d.map, &n_idx, n)?;
        fiber_payload(&mut out, &model, n)?;
    }
    Ok(out)
}

pub fn fiber_model(b: &Bundle, n: usize) -> CliResult<Outcome> {
    let g = lie(b, "fiber-model")?;
    require_splitting(g, "fiber-model")?;
    if let Some(o) = gate(b, "fiber-model") {
        return Ok(o);
    }
    let d = fiber_derivation(b)?;
    let n_idx = b.second_algebra.clone().unwrap_or_default();
    let model = FiberModel::new(g, &d.map, &n_idx, n)?;
    let mut out = Outcome::new("fiber-model");
    out.put("derivation", json!(d.name));
    out.put("cone_space", space_json(model.cone().space()));
    fiber_payload(&mut out, &model, n)?;
    Ok(out)
}
