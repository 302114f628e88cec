//! Trace serialization.
//!
//! The text format is one tab-separated record per line:
//!
//! ```text
//! system       <type>
//! lambda       <rationals>
//! base_change  <1-based simple reflection indices, or ->
//! beta_hat     <root>
//! beta_prime   <root>
//! root_string  <roots>
//! step         <n> <rule> <citation> <subgroup roots> <invariant roots> <a-invariant> <s> <exponent>
//! final        <invariant roots> <a-invariant>
//! closure = Σ
//! ```
//!
//! Roots are written by their simple-root coefficients (`1,0,2`), root lists
//! are `;`-separated with `-` for the empty list, and rationals are `p/q`.
//! CSV carries the same records; JSON carries the same fields as an object.

use serde::{Deserialize, Serialize};

use super::{AveragingStep, AveragingTrace, InvarianceSet, Rule};
use crate::error::{Error, Result};
use crate::rational;
use crate::roots::{build_root_system, CartanElement, Functional, RootSystem, RootSystemType};
use crate::rootset::RootSet;
use crate::weyl::WeylElement;

const FULL_CLOSURE: &str = "closure = Σ";
const PROPER_CLOSURE: &str = "closure ≠ Σ";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceFormat {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct StepDoc {
    rule: String,
    citation: String,
    subgroup: Vec<String>,
    invariant: Vec<String>,
    a_invariant: bool,
    witness: Vec<String>,
    exponent: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct TraceDoc {
    system: String,
    lambda: Vec<String>,
    base_change: Vec<usize>,
    beta_hat: String,
    beta_prime: String,
    root_string: Vec<String>,
    steps: Vec<StepDoc>,
    final_invariant: Vec<String>,
    final_a_invariant: bool,
    closure: String,
}

fn rationals(v: &[crate::Q]) -> Vec<String> {
    v.iter().map(rational::fmt_q).collect()
}

fn root_list(rs: &RootSystem, set: impl IntoIterator<Item = usize>) -> Vec<String> {
    set.into_iter().map(|i| rs.fmt_coeffs(i)).collect()
}

impl TraceDoc {
    fn from_trace(rs: &RootSystem, t: &AveragingTrace) -> Self {
        TraceDoc {
            system: t.ty.to_string(),
            lambda: rationals(&t.lambda.coords),
            base_change: t.base_change.word.iter().map(|j| j + 1).collect(),
            beta_hat: rs.fmt_coeffs(t.beta_hat),
            beta_prime: rs.fmt_coeffs(t.beta_prime),
            root_string: root_list(rs, t.root_string.iter().copied()),
            steps: t
                .steps
                .iter()
                .map(|s| StepDoc {
                    rule: s.rule.as_str().into(),
                    citation: s.citation.clone(),
                    subgroup: root_list(rs, s.subgroup.iter()),
                    invariant: root_list(rs, s.state.roots.iter()),
                    a_invariant: s.state.a_invariant,
                    witness: rationals(&s.witness.coords),
                    exponent: rationals(&s.exponent.coords),
                })
                .collect(),
            final_invariant: root_list(rs, t.final_state.roots.iter()),
            final_a_invariant: t.final_state.a_invariant,
            closure: if t.final_state.roots == rs.all_roots() {
                FULL_CLOSURE
            } else {
                PROPER_CLOSURE
            }
            .into(),
        }
    }

    fn records(&self) -> Vec<Vec<String>> {
        let join_roots = |v: &[String]| {
            if v.is_empty() {
                "-".to_string()
            } else {
                v.join(";")
            }
        };
        let word = if self.base_change.is_empty() {
            "-".to_string()
        } else {
            self.base_change
                .iter()
                .map(|j| j.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        let mut out = vec![
            vec!["system".into(), self.system.clone()],
            vec!["lambda".into(), self.lambda.join(",")],
            vec!["base_change".into(), word],
            vec!["beta_hat".into(), self.beta_hat.clone()],
            vec!["beta_prime".into(), self.beta_prime.clone()],
            vec!["root_string".into(), join_roots(&self.root_string)],
        ];
        for (k, s) in self.steps.iter().enumerate() {
            out.push(vec![
                "step".into(),
                (k + 1).to_string(),
                s.rule.clone(),
                s.citation.clone(),
                join_roots(&s.subgroup),
                join_roots(&s.invariant),
                s.a_invariant.to_string(),
                s.witness.join(","),
                s.exponent.join(","),
            ]);
        }
        out.push(vec![
            "final".into(),
            join_roots(&self.final_invariant),
            self.final_a_invariant.to_string(),
        ]);
        out.push(vec![self.closure.clone()]);
        out
    }

    fn from_records(records: &[Vec<String>]) -> Result<Self> {
        let bad = |msg: &str| Error::Parse(format!("trace: {msg}"));
        let split_roots = |s: &str| -> Vec<String> {
            if s == "-" {
                Vec::new()
            } else {
                s.split(';').map(str::to_string).collect()
            }
        };
        let split_q = |s: &str| -> Vec<String> { s.split(',').map(str::to_string).collect() };
        let parse_bool = |s: &str| -> Result<bool> {
            s.parse().map_err(|_| bad(&format!("expected true or false, got {s:?}")))
        };
        let mut fields: std::collections::HashMap<&str, &[String]> = Default::default();
        let mut steps = Vec::new();
        let mut closure = None;
        for rec in records {
            let Some(tag) = rec.first() else { continue };
            match tag.as_str() {
                "step" => {
                    let [_, n, rule, citation, subgroup, invariant, a_inv, witness, exponent] = rec.as_slice() else {
                        return Err(bad("step record needs 9 fields"));
                    };
                    if n.parse::<usize>().ok() != Some(steps.len() + 1) {
                        return Err(bad(&format!("step numbered {n} out of order")));
                    }
                    steps.push(StepDoc {
                        rule: rule.clone(),
                        citation: citation.clone(),
                        subgroup: split_roots(subgroup),
                        invariant: split_roots(invariant),
                        a_invariant: parse_bool(a_inv)?,
                        witness: split_q(witness),
                        exponent: split_q(exponent),
                    });
                }
                t if t == FULL_CLOSURE || t == PROPER_CLOSURE => closure = Some(t.to_string()),
                t => {
                    if fields.insert(t, &rec[1..]).is_some() {
                        return Err(bad(&format!("duplicate {t} record")));
                    }
                }
            }
        }
        let one = |key: &str| -> Result<&str> {
            match fields.get(key) {
                Some([v]) => Ok(v.as_str()),
                _ => Err(bad(&format!("missing or malformed {key} record"))),
            }
        };
        let base_change = match one("base_change")? {
            "-" => Vec::new(),
            w => w
                .split(',')
                .map(|j| j.parse::<usize>().ok().filter(|&j| j >= 1))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| bad("base change letters must be positive integers"))?,
        };
        let fin = match fields.get("final") {
            Some([roots, a]) => (split_roots(roots), parse_bool(a)?),
            _ => return Err(bad("missing or malformed final record")),
        };
        Ok(TraceDoc {
            system: one("system")?.into(),
            lambda: split_q(one("lambda")?),
            base_change,
            beta_hat: one("beta_hat")?.into(),
            beta_prime: one("beta_prime")?.into(),
            root_string: split_roots(one("root_string")?),
            steps,
            final_invariant: fin.0,
            final_a_invariant: fin.1,
            closure: closure.ok_or_else(|| bad("missing closure line"))?,
        })
    }

    fn into_trace(self) -> Result<AveragingTrace> {
        let ty: RootSystemType = self.system.parse()?;
        let rs = build_root_system(ty)?;
        let root = |s: &str| -> Result<usize> {
            let c = s
                .split(',')
                .map(|x| x.trim().parse::<i64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Error::Parse(format!("bad root {s:?}")))?;
            rs.index_of_coefficients(&c)
                .ok_or_else(|| Error::Parse(format!("{s:?} is not a root of {ty}")))
        };
        let roots = |v: &[String]| -> Result<RootSet> { v.iter().map(|s| root(s)).collect() };
        let vector = |v: &[String]| -> Result<crate::Vector> {
            let out = v.iter().map(|s| rational::parse_q(s)).collect::<Result<Vec<_>>>()?;
            rs.check_dim(&out)?;
            Ok(out)
        };
        let lambda = Functional::new(vector(&self.lambda)?);
        if self.base_change.iter().any(|&j| j > rs.rank()) {
            return Err(Error::Parse("base change letter exceeds the rank".into()));
        }
        let word = self.base_change.iter().map(|j| j - 1).collect();
        let steps = self
            .steps
            .iter()
            .map(|s| {
                Ok(AveragingStep {
                    rule: s.rule.parse::<Rule>()?,
                    citation: s.citation.clone(),
                    subgroup: roots(&s.subgroup)?,
                    state: InvarianceSet {
                        roots: roots(&s.invariant)?,
                        a_invariant: s.a_invariant,
                    },
                    witness: CartanElement::new(vector(&s.witness)?),
                    exponent: Functional::new(vector(&s.exponent)?),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(AveragingTrace {
            ty,
            lambda,
            base_change: WeylElement::from_word(&rs, word),
            beta_hat: root(&self.beta_hat)?,
            beta_prime: root(&self.beta_prime)?,
            root_string: self
                .root_string
                .iter()
                .map(|s| root(s))
                .collect::<Result<Vec<_>>>()?,
            steps,
            final_state: InvarianceSet {
                roots: roots(&self.final_invariant)?,
                a_invariant: self.final_a_invariant,
            },
        })
    }
}

pub fn write_text(rs: &RootSystem, t: &AveragingTrace) -> String {
    TraceDoc::from_trace(rs, t)
        .records()
        .iter()
        .map(|r| r.join("\t") + "\n")
        .collect()
}

pub fn write_csv(rs: &RootSystem, t: &AveragingTrace) -> String {
    let mut w = csv::WriterBuilder::new()
        .flexible(true)
        .has_headers(false)
        .from_writer(Vec::new());
    for rec in TraceDoc::from_trace(rs, t).records() {
        w.write_record(&rec).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("utf-8 input")
}

/// Single-line JSON object.
pub fn write_json(rs: &RootSystem, t: &AveragingTrace) -> String {
    serde_json::to_string(&TraceDoc::from_trace(rs, t)).expect("trace serializes") + "\n"
}

/// Parses a trace in any of the three formats, detected from the content.
pub fn parse_trace(input: &str) -> Result<(AveragingTrace, TraceFormat)> {
    let trimmed = input.trim_start();
    let (doc, format) = if trimmed.starts_with('{') {
        let doc: TraceDoc = serde_json::from_str(trimmed)
            .map_err(|e| Error::Parse(format!("trace json: {e}")))?;
        (doc, TraceFormat::Json)
    } else if trimmed.lines().next().is_some_and(|l| l.contains('\t')) {
        let records: Vec<Vec<String>> = trimmed
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| l.split('\t').map(str::to_string).collect())
            .collect();
        (TraceDoc::from_records(&records)?, TraceFormat::Text)
    } else {
        let mut r = csv::ReaderBuilder::new()
            .flexible(true)
            .has_headers(false)
            .from_reader(trimmed.as_bytes());
        let records = r
            .records()
            .map(|rec| {
                rec.map(|rec| rec.iter().map(str::to_string).collect())
                    .map_err(|e| Error::Parse(format!("trace csv: {e}")))
            })
            .collect::<Result<Vec<Vec<String>>>>()?;
        (TraceDoc::from_records(&records)?, TraceFormat::Csv)
    };
    Ok((doc.into_trace()?, format))
}
