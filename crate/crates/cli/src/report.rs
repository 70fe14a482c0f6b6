//! Dual-rendered reports: aligned text for humans, stable JSON for machines.
//! Identical inputs produce byte-identical output in both renderings.

use serde::Serialize;

use omega_nij_core::scalar::Scalar;
use omega_nij_core::semigroup::Semigroup;
use omega_nij_core::validate::{ValidationReport, Violation};

#[derive(Serialize, Clone, Debug)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Serialize, Clone, Debug)]
pub struct Section {
    pub title: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub lines: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<Table>,
}

#[derive(Serialize, Clone, Debug)]
pub struct Report {
    pub command: String,
    pub ok: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notices: Vec<String>,
    pub sections: Vec<Section>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            ok: true,
            notices: Vec::new(),
            sections: Vec::new(),
        }
    }

    pub fn section(&mut self, title: impl Into<String>) -> &mut Section {
        self.sections.push(Section {
            title: title.into(),
            lines: Vec::new(),
            table: None,
        });
        self.sections.last_mut().unwrap()
    }

    pub fn verdict_line(&mut self, title: &str, ok: bool) {
        self.ok &= ok;
        self.section(title)
            .lines
            .push(if ok { "pass".into() } else { "FAIL".into() });
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("== {} ==\n", self.command));
        for notice in &self.notices {
            out.push_str(&format!("note: {notice}\n"));
        }
        for section in &self.sections {
            out.push_str(&format!("\n[{}]\n", section.title));
            for line in &section.lines {
                out.push_str(&format!("  {line}\n"));
            }
            if let Some(table) = &section.table {
                let mut widths: Vec<usize> =
                    table.header.iter().map(|h| h.len()).collect();
                for row in &table.rows {
                    for (w, cell) in widths.iter_mut().zip(row) {
                        *w = (*w).max(cell.len());
                    }
                }
                let fmt_row = |cells: &[String]| {
                    let mut line = String::from("  ");
                    for (w, cell) in widths.iter().zip(cells) {
                        line.push_str(&format!("{cell:>w$}  ", w = w));
                    }
                    line.trim_end().to_string() + "\n"
                };
                out.push_str(&fmt_row(&table.header));
                for row in &table.rows {
                    out.push_str(&fmt_row(row));
                }
            }
        }
        out.push_str(&format!(
            "\nresult: {}\n",
            if self.ok { "ok" } else { "FAILED" }
        ));
        out
    }

    pub fn render_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization") + "\n"
    }
}

fn labels_of(sg: &Semigroup, indices: &[usize]) -> String {
    let parts: Vec<&str> = indices.iter().map(|&w| sg.label(w)).collect();
    format!("({})", parts.join(","))
}

fn vec_of<S: Scalar>(v: &[S]) -> String {
    let parts: Vec<String> = v.iter().map(S::render).collect();
    format!("[{}]", parts.join(", "))
}

pub fn violation_lines<S: Scalar>(sg: &Semigroup, violations: &[Violation<S>]) -> Vec<String> {
    violations
        .iter()
        .map(|v| {
            format!(
                "{} at indices {} basis {:?}: lhs {} != rhs {}",
                v.axiom,
                labels_of(sg, &v.indices),
                v.basis,
                vec_of(&v.lhs),
                vec_of(&v.rhs)
            )
        })
        .collect()
}

/// Adds a validator outcome to the report; failing reports carry their
/// witnesses verbatim.
pub fn add_validation<S: Scalar>(
    report: &mut Report,
    sg: &Semigroup,
    title: &str,
    result: &ValidationReport<S>,
) {
    report.ok &= result.verdict();
    let section = report.section(title);
    if result.verdict() {
        section.lines.push("pass".into());
    } else {
        section.lines.push(format!(
            "FAIL: {} violation(s), showing {}",
            result.total_violations,
            result.violations.len()
        ));
        section.lines.extend(violation_lines(sg, &result.violations));
    }
}
