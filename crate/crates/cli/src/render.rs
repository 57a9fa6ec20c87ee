//! Text rendering of command output.  JSON output is the serialized value
//! itself; this is a reading aid over the same value.

use std::fmt::Write;

use serde_json::Value;

fn terms(v: &Value) -> String {
    let mut out = String::new();
    for t in v.as_array().into_iter().flatten() {
        let c = t["coeff"].as_str().unwrap_or("?");
        let b = t["basis"].as_str().unwrap_or("?");
        let (neg, mag) = match c.strip_prefix('-') {
            Some(m) => (true, m),
            None => (false, c),
        };
        match (out.is_empty(), neg) {
            (true, true) => out.push('-'),
            (true, false) => {}
            (false, true) => out.push_str(" - "),
            (false, false) => out.push_str(" + "),
        }
        if mag != "1" {
            out.push_str(mag);
            out.push('*');
        }
        out.push_str(b);
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

fn taylor(out: &mut String, key: &str, v: &Value) {
    let _ = writeln!(out, "{key} (degree {}, {}):", v["degree"], v["flavor"].as_str().unwrap_or("?"));
    for a in v["coefficients"].as_array().into_iter().flatten() {
        let _ = writeln!(out, "  arity {}:", a["arity"]);
        for e in a["entries"].as_array().into_iter().flatten() {
            let word: Vec<&str> = e["word"].as_array().into_iter().flatten().filter_map(Value::as_str).collect();
            let _ = writeln!(out, "    ({}) -> {}", word.join(", "), terms(&e["value"]));
        }
    }
}

fn is_space(v: &Value) -> bool {
    v.as_array().is_some_and(|xs| xs.iter().all(|x| x.get("name").is_some() && x.get("degree").is_some()))
}

pub fn text(v: &Value) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", v["command"].as_str().unwrap_or("?"), if v["ok"] == Value::Bool(true) { "ok" } else { "FAILED" });
    for c in v["checks"].as_array().into_iter().flatten() {
        let id = c["identity"].as_str().unwrap_or("?");
        if c["pass"] == Value::Bool(true) {
            let _ = writeln!(out, "  pass  {id} arity {} ({} checked)", c["arity"], c["checked"]);
        } else {
            let word: Vec<&str> = c["word"].as_array().into_iter().flatten().filter_map(Value::as_str).collect();
            let _ = writeln!(
                out,
                "  FAIL  {id} arity {} ({} of {} failed) at ({}): {} != {}",
                c["arity"],
                c["failures"],
                c["checked"],
                word.join(", "),
                c["lhs"].as_str().unwrap_or(""),
                c["rhs"].as_str().unwrap_or("")
            );
        }
    }
    for note in v["notes"].as_array().into_iter().flatten() {
        let _ = writeln!(out, "note: {}", note.as_str().unwrap_or(""));
    }
    if let Some(obj) = v.as_object() {
        for (k, p) in obj {
            if matches!(k.as_str(), "ok" | "command" | "checks" | "notes") {
                continue;
            }
            if p.get("coefficients").is_some() {
                taylor(&mut out, k, p);
            } else if is_space(p) {
                let names: Vec<String> = p
                    .as_array()
                    .into_iter()
                    .flatten()
                    .map(|b| format!("{}({})", b["name"].as_str().unwrap_or("?"), b["degree"]))
                    .collect();
                let _ = writeln!(out, "{k}: {}", names.join(" "));
            } else {
                let _ = writeln!(out, "{k}: {p}");
            }
        }
    }
    out
}
