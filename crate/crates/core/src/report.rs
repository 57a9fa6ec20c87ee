//! Pass/fail records shared by every verifier and by the command line.

use serde::Serialize;

/// Outcome of one identity at one arity.  Words that pass are only
/// counted; the first failing word is kept with both sides rendered.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub identity: String,
    pub arity: usize,
    pub word: Vec<String>,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
    pub checked: usize,
    pub failures: usize,
}

impl Check {
    pub fn single(identity: &str, arity: usize, word: Vec<String>, lhs: String, rhs: String) -> Check {
        let pass = lhs == rhs;
        Check { identity: identity.into(), arity, word, lhs, rhs, pass, checked: 1, failures: usize::from(!pass) }
    }

    pub fn flag(identity: &str, pass: bool, detail: String) -> Check {
        Check {
            identity: identity.into(),
            arity: 0,
            word: Vec::new(),
            lhs: detail.clone(),
            rhs: if pass { detail } else { String::new() },
            pass,
            checked: 1,
            failures: usize::from(!pass),
        }
    }
}

/// Collects word-by-word comparisons into a single [`Check`].
#[derive(Clone, Debug)]
pub struct Tally {
    check: Check,
}

impl Tally {
    pub fn new(identity: &str, arity: usize) -> Self {
        Tally {
            check: Check {
                identity: identity.into(),
                arity,
                word: Vec::new(),
                lhs: String::new(),
                rhs: String::new(),
                pass: true,
                checked: 0,
                failures: 0,
            },
        }
    }

    /// Records one comparison; `render` is only called on the first failure.
    pub fn record<F>(&mut self, equal: bool, render: F)
    where
        F: FnOnce() -> (Vec<String>, String, String),
    {
        self.check.checked += 1;
        if !equal {
            if self.check.failures == 0 {
                let (w, l, r) = render();
                self.check.word = w;
                self.check.lhs = l;
                self.check.rhs = r;
            }
            self.check.failures += 1;
            self.check.pass = false;
        }
    }

    pub fn finish(self) -> Check {
        self.check
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub ok: bool,
    pub command: String,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(rename = "timing", skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report { ok: true, command: command.into(), ..Default::default() }
    }

    pub fn push(&mut self, c: Check) {
        self.ok &= c.pass;
        self.checks.push(c);
    }

    pub fn extend<I: IntoIterator<Item = Check>>(&mut self, cs: I) {
        for c in cs {
            self.push(c);
        }
    }

    pub fn merge(&mut self, other: Report) {
        self.extend(other.checks);
        self.notes.extend(other.notes);
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// Stable order: identity, then arity, then word.
    pub fn sort(&mut self) {
        self.checks.sort_by(|a, b| {
            (&a.identity, a.arity, &a.word).cmp(&(&b.identity, b.arity, &b.word))
        });
    }
}
