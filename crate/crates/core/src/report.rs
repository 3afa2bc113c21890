//! Structured verdicts shared by every check.

use std::fmt;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::scalar::{fmt_q, Q};
use crate::series::Vector;

#[derive(Serialize, Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    InsufficientPrecision,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::InsufficientPrecision => "insufficient-precision",
        }
    }

    /// CLI exit code for a single verdict.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::InsufficientPrecision => 2,
        }
    }
}

/// First disagreement: exponent tuple and the two coefficients.
#[derive(Serialize, Clone, Debug, PartialEq)]
pub struct Witness {
    pub exponents: Vec<i64>,
    pub lhs: String,
    pub rhs: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub component: Option<String>,
}

impl Witness {
    pub fn new(exponents: Vec<i64>, lhs: &Q, rhs: &Q) -> Self {
        Witness { exponents, lhs: fmt_q(lhs), rhs: fmt_q(rhs), component: None }
    }

    pub fn with_component(mut self, c: impl Into<String>) -> Self {
        self.component = Some(c.into());
        self
    }
}

#[derive(Serialize, Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub check: String,
    pub inputs: Map<String, Value>,
    pub window: Map<String, Value>,
    pub verdict: Verdict,
    pub multiplier: Option<i64>,
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckReport {
    pub fn new(check: impl Into<String>) -> Self {
        CheckReport {
            check: check.into(),
            inputs: Map::new(),
            window: Map::new(),
            verdict: Verdict::InsufficientPrecision,
            multiplier: None,
            witness: None,
            note: None,
        }
    }

    pub fn input(mut self, k: &str, v: impl Into<Value>) -> Self {
        self.inputs.insert(k.to_string(), v.into());
        self
    }

    pub fn range(mut self, var: &str, lo: i64, hi: i64) -> Self {
        self.window.insert(var.to_string(), json!([lo, hi]));
        self
    }

    pub fn window_entry(mut self, k: &str, v: impl Into<Value>) -> Self {
        self.window.insert(k.to_string(), v.into());
        self
    }

    pub fn pass(mut self) -> Self {
        self.verdict = Verdict::Pass;
        self.witness = None;
        self
    }

    pub fn fail(mut self, w: Witness) -> Self {
        self.verdict = Verdict::Fail;
        self.witness = Some(w);
        self
    }

    pub fn insufficient(mut self, why: impl Into<String>) -> Self {
        self.verdict = Verdict::InsufficientPrecision;
        self.witness = None;
        self.note = Some(why.into());
        self
    }

    pub fn multiplier(mut self, m: Option<i64>) -> Self {
        self.multiplier = m;
        self
    }

    pub fn note(mut self, n: impl Into<String>) -> Self {
        self.note = Some(n.into());
        self
    }

    /// Adopts the verdict and witness of a tally, recording how many
    /// coefficients were compared.
    pub fn tally(mut self, t: &Tally) -> Self {
        self.window.insert("compared".into(), json!(t.compared));
        match t.verdict() {
            Verdict::Pass => self.pass(),
            Verdict::Fail => self.fail(t.mismatch.clone().expect("fail carries a witness")),
            Verdict::InsufficientPrecision => self.insufficient("no coefficient in the window is known on both sides"),
        }
    }

    pub fn is_pass(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.check, self.verdict.as_str())?;
        if let Some(m) = self.multiplier {
            write!(f, " (multiplier {m})")?;
        }
        if let Some(w) = &self.witness {
            write!(f, " at {:?}", w.exponents)?;
            if let Some(c) = &w.component {
                write!(f, " [{c}]")?;
            }
            write!(f, ": lhs {} rhs {}", w.lhs, w.rhs)?;
        }
        if let Some(n) = &self.note {
            write!(f, " ({n})")?;
        }
        Ok(())
    }
}

/// Worst verdict of a batch: any fail, else any insufficient, else pass.
pub fn combine(rs: &[CheckReport]) -> Verdict {
    rs.iter().map(|r| r.verdict).fold(Verdict::Pass, |acc, v| match (acc, v) {
        (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
        (Verdict::InsufficientPrecision, _) | (_, Verdict::InsufficientPrecision) => {
            Verdict::InsufficientPrecision
        }
        _ => Verdict::Pass,
    })
}

/// Coefficient comparison accumulator. `None` marks an unknown coefficient,
/// which is skipped; the first definite mismatch is kept.
#[derive(Clone, Debug, Default)]
pub struct Tally {
    pub compared: usize,
    pub skipped: usize,
    pub mismatch: Option<Witness>,
}

impl Tally {
    pub fn scalar(&mut self, exps: &[i64], l: Option<&Q>, r: Option<&Q>) {
        match (l, r) {
            (Some(a), Some(b)) => {
                self.compared += 1;
                if a != b && self.mismatch.is_none() {
                    self.mismatch = Some(Witness::new(exps.to_vec(), a, b));
                }
            }
            _ => self.skipped += 1,
        }
    }

    pub fn vector(&mut self, exps: &[i64], l: Option<&Vector>, r: Option<&Vector>, label: &dyn Fn(usize) -> String) {
        match (l, r) {
            (Some(a), Some(b)) => {
                self.compared += 1;
                if a != b && self.mismatch.is_none() {
                    let i = a
                        .iter()
                        .map(|(i, _)| i)
                        .chain(b.iter().map(|(i, _)| i))
                        .filter(|i| a.get(*i) != b.get(*i))
                        .min()
                        .expect("unequal vectors differ somewhere");
                    self.mismatch = Some(Witness::new(exps.to_vec(), &a.get(i), &b.get(i)).with_component(label(i)));
                }
            }
            _ => self.skipped += 1,
        }
    }

    pub fn merge(&mut self, o: &Tally) {
        self.compared += o.compared;
        self.skipped += o.skipped;
        if self.mismatch.is_none() {
            self.mismatch = o.mismatch.clone();
        }
    }

    pub fn verdict(&self) -> Verdict {
        if self.mismatch.is_some() {
            Verdict::Fail
        } else if self.compared == 0 {
            Verdict::InsufficientPrecision
        } else {
            Verdict::Pass
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    #[test]
    fn json_shape() {
        let mut t = Tally::default();
        t.scalar(&[1, 2], Some(&q(1)), Some(&q(0)));
        let r = CheckReport::new("demo").input("u", "t").range("x0", -2, 2).tally(&t);
        let v: Value = serde_json::from_str(&r.to_json_line()).unwrap();
        assert_eq!(v["verdict"], "fail");
        assert_eq!(v["witness"]["exponents"], json!([1, 2]));
        assert_eq!(v["witness"]["lhs"], "1");
        assert_eq!(v["multiplier"], Value::Null);
        assert_eq!(v["window"]["compared"], 1);
    }

    #[test]
    fn unknown_only_is_insufficient() {
        let mut t = Tally::default();
        t.scalar(&[0], None, Some(&q(1)));
        assert_eq!(t.verdict(), Verdict::InsufficientPrecision);
    }
}
