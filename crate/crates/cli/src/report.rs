//! Report assembly and rendering: one JSON schema, plus text and CSV views.

use convergence::{Certainty, Outcome, Verdict, WitnessReport};
use serde_json::{json, Map, Value as Json};

pub const SCHEMA_VERSION: u32 = 1;

/// One witness bundle prepared for output.
pub struct WitnessOut {
    pub mode: String,
    pub xi: Vec<u64>,
    pub b: Vec<String>,
    pub p: Vec<String>,
    pub report: WitnessReport,
}

pub struct ReportDocument {
    pub request: Json,
    pub results: Vec<Verdict>,
    pub witnesses: Vec<WitnessOut>,
    pub errors: Vec<String>,
}

impl ReportDocument {
    pub fn new(request: Json) -> Self {
        ReportDocument {
            request,
            results: Vec::new(),
            witnesses: Vec::new(),
            errors: Vec::new(),
        }
    }

    pub fn to_json(&self) -> Json {
        let results: Vec<Json> = self.results.iter().map(verdict_json).collect();
        let witnesses: Vec<Json> = self.witnesses.iter().map(witness_json).collect();
        let mut doc = Map::new();
        doc.insert("schema_version".into(), json!(SCHEMA_VERSION));
        doc.insert("request".into(), self.request.clone());
        doc.insert("results".into(), Json::Array(results));
        doc.insert("witnesses".into(), Json::Array(witnesses));
        doc.insert("errors".into(), json!(self.errors));
        Json::Object(doc)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("serializable");
                s.push('\n');
                s
            }
            Format::Csv => self.render_csv(),
            Format::Text => self.render_text(),
        }
    }

    fn render_csv(&self) -> String {
        let mut out = String::from("test,outcome,certainty,margin\n");
        for v in &self.results {
            let margin = v
                .evidence
                .margin
                .as_ref()
                .map(|m| m.render())
                .unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{}\n",
                csv_field(&v.evidence.test),
                outcome_str(v.outcome),
                certainty_str(v.certainty),
                csv_field(&margin)
            ));
        }
        out
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        for v in &self.results {
            out.push_str(&format!(
                "{}: {} ({}) window [{}, {}]",
                v.evidence.test,
                outcome_str(v.outcome),
                certainty_str(v.certainty),
                v.evidence.window.n0,
                v.evidence.window.n1
            ));
            if let Some(m) = &v.evidence.margin {
                out.push_str(&format!(" margin {}", m.render()));
            }
            out.push('\n');
            for note in &v.evidence.notes {
                out.push_str(&format!("  note: {note}\n"));
            }
        }
        for w in &self.witnesses {
            out.push_str(&format!("witness {}:\n", w.mode));
            if !w.xi.is_empty() {
                out.push_str(&format!("  xi: {:?}\n", w.xi));
            }
            if !w.b.is_empty() {
                out.push_str(&format!("  B: [{}]\n", w.b.join(", ")));
            }
            if !w.p.is_empty() {
                out.push_str(&format!("  p: [{}]\n", w.p.join(", ")));
            }
            let r = &w.report;
            out.push_str(&format!(
                "  check {}: {} indices, {} failure(s), worst margin {} at {}\n",
                r.inequality,
                r.checked,
                r.failures.len(),
                r.worst_margin.render(),
                r.worst_index
            ));
            if !r.failures.is_empty() {
                out.push_str(&format!("  failures at: {:?}\n", r.failures));
            }
        }
        for e in &self.errors {
            out.push_str(&format!("error: {e}\n"));
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn outcome_str(o: Outcome) -> &'static str {
    match o {
        Outcome::Converges => "converges",
        Outcome::Diverges => "diverges",
        Outcome::Inconclusive => "inconclusive",
    }
}

pub fn certainty_str(c: Certainty) -> &'static str {
    match c {
        Certainty::Proved => "proved",
        Certainty::Indicated => "indicated",
    }
}

fn verdict_json(v: &Verdict) -> Json {
    let samples: Vec<Json> = v
        .evidence
        .samples
        .iter()
        .map(|(n, value)| json!({"n": n, "value": value.render()}))
        .collect();
    json!({
        "test": v.evidence.test,
        "outcome": outcome_str(v.outcome),
        "certainty": certainty_str(v.certainty),
        "window": {"n0": v.evidence.window.n0, "n1": v.evidence.window.n1},
        "margin": v.evidence.margin.as_ref().map(|m| m.render()),
        "statistic_samples": samples,
        "notes": v.evidence.notes,
    })
}

fn witness_json(w: &WitnessOut) -> Json {
    json!({
        "mode": w.mode,
        "xi": w.xi,
        "B": w.b,
        "p": w.p,
        "report": {
            "inequality": w.report.inequality,
            "checked": w.report.checked,
            "failures": w.report.failures,
            "worst_margin": w.report.worst_margin.render(),
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format '{other}' (expected text|json|csv)")),
        }
    }
}
