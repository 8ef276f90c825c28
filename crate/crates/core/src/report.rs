//! Rendering of certificates and reports as JSON or line-oriented text.
//!
//! Text output puts one hypothesis per line,
//! `  <name>: <STATUS> [<witness>]`, and ends each certificate with
//! `conclusion: <statement> [<reference>]`.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::certificate::Certificate;
use crate::certify::{BoundReport, PinReport};
use crate::construct::{Augmentation, SurveyReport};
use crate::kruskal::{Comparison, KruskalReport};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    Json,
    #[default]
    Text,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            other => Err(Error::Parse(format!("unknown format {other:?}, expected json or text"))),
        }
    }
}

/// Human-readable rendering.
pub trait TextReport {
    fn to_text(&self) -> String;
}

/// Pretty JSON (fields in declaration order) or text.
pub fn emit<T: Serialize + TextReport + ?Sized>(value: &T, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(value).expect("reports always serialize"),
        Format::Text => value.to_text(),
    }
}

pub fn emit_certificate(cert: &Certificate, format: Format) -> String {
    emit(cert, format)
}

/// Inverse of the JSON form of [`emit_certificate`].
pub fn parse_certificate(json: &str) -> Result<Certificate> {
    serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))
}

impl TextReport for Certificate {
    fn to_text(&self) -> String {
        let mut out = format!("claim: {:?}\n", self.claim);
        for h in &self.hypotheses {
            let _ = writeln!(out, "  {}: {} [{}]", h.name, h.status, h.witness);
        }
        match &self.conclusion {
            Some(c) => {
                let _ = writeln!(out, "conclusion: {c} [{}]", self.theorem_ref);
            }
            None => {
                let failed = self.failed().count();
                let _ = writeln!(
                    out,
                    "conclusion: none, {failed} hypothesis(es) failed [{}]",
                    self.theorem_ref
                );
            }
        }
        out
    }
}

impl TextReport for BoundReport {
    fn to_text(&self) -> String {
        let mut out = match &self.best_partition {
            Some(p) => format!("lower bound: {} via partition {p}\n", self.best_bound),
            None => "lower bound: none (no applicable partition)\n".to_string(),
        };
        for o in &self.per_partition {
            let detail = format!(
                "h1(E)={} h0(F)={} rank(F)={}",
                o.e.h1, o.f.h0, o.f.rank
            );
            match (o.bound, &o.reason) {
                (Some(b), _) => {
                    let _ = writeln!(out, "  partition {}: bound {b} [{detail}]", o.partition);
                }
                (None, reason) => {
                    let _ = writeln!(
                        out,
                        "  partition {}: not applicable, {} [{detail}]",
                        o.partition,
                        reason.as_deref().unwrap_or("-")
                    );
                }
            }
        }
        out.push_str(&self.certificate().to_text());
        out
    }
}

impl TextReport for KruskalReport {
    fn to_text(&self) -> String {
        let ranks: Vec<String> = self.per_factor.iter().map(ToString::to_string).collect();
        format!(
            "Kruskal ranks: {}\ncondition: {} >= {}: {}\nbaseline: {}\n",
            ranks.join(", "),
            self.lhs,
            self.rhs,
            if self.applies { "PASS" } else { "FAIL" },
            self.baseline
        )
    }
}

fn or_dash<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(|| "-".to_string(), ToString::to_string)
}

impl TextReport for Comparison {
    fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "summands: {}", self.summands);
        let _ = writeln!(out, "non-redundant: {}", self.non_redundant);
        let _ = writeln!(
            out,
            "flattening lower bound: {} (partition {})",
            self.best_bound,
            or_dash(&self.best_partition)
        );
        let _ = writeln!(
            out,
            "flattening exact rank: {} (partition {})",
            or_dash(&self.exact_rank),
            or_dash(&self.exact_partition)
        );
        let _ = writeln!(
            out,
            "small-rank criterion: {}",
            self.small_rank.map_or_else(|| "-".to_string(), |c| format!("{c:?}"))
        );
        let ranks: Vec<String> = self.kruskal.per_factor.iter().map(ToString::to_string).collect();
        let _ = writeln!(
            out,
            "Kruskal: {} (ranks {}; {} >= {})",
            self.kruskal_applies,
            ranks.join(", "),
            self.kruskal.lhs,
            self.kruskal.rhs
        );
        let _ = writeln!(out, "flattening certifies, Kruskal does not: {}", self.flattening_only);
        let _ = writeln!(out, "baseline: {}", self.kruskal.baseline);
        out
    }
}

impl TextReport for PinReport {
    fn to_text(&self) -> String {
        let mut out = String::from("== all families ==\n");
        out.push_str(&self.overall.to_text());
        for (i, cert) in self.per_family.iter().enumerate() {
            let _ = writeln!(out, "== family F{} ==", i + 1);
            out.push_str(&cert.to_text());
        }
        out
    }
}

impl TextReport for Augmentation {
    fn to_text(&self) -> String {
        let mut out = format!(
            "augmented to {} points: point {} split along factor {} (attempt {})\n",
            self.set.len(),
            self.pivot + 1,
            self.factor + 1,
            self.attempts
        );
        out.push_str(&self.certificate.to_text());
        out
    }
}

impl TextReport for SurveyReport {
    fn to_text(&self) -> String {
        let header = [
            "shape", "r", "trials", "sampled", "nonred", "exact", "small", "kruskal", "flat-only",
        ];
        let rows: Vec<[String; 9]> = self
            .rows
            .iter()
            .map(|r| {
                [
                    r.shape.to_string(),
                    r.r.to_string(),
                    r.trials.to_string(),
                    r.sampled.to_string(),
                    r.non_redundant.to_string(),
                    r.exact_rank.to_string(),
                    r.small_rank.to_string(),
                    r.kruskal.to_string(),
                    r.flattening_only.to_string(),
                ]
            })
            .collect();
        let widths: Vec<usize> = (0..header.len())
            .map(|j| rows.iter().map(|r| r[j].len()).chain([header[j].len()]).max().unwrap_or(0))
            .collect();
        let line = |cells: Vec<&str>| -> String {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, &w)| format!("{c:>w$}"))
                .collect();
            padded.join("  ").trim_end().to_string()
        };
        let mut out = format!("seed {} box {}\n", self.seed, self.sample_box);
        out.push_str(&line(header.to_vec()));
        out.push('\n');
        for r in &rows {
            out.push_str(&line(r.iter().map(String::as_str).collect()));
            out.push('\n');
        }
        out
    }
}
