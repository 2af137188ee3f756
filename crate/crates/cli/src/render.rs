//! Plain-text and CSV tables for report JSON.

use serde_json::Value;
use treehelly::extremal::Objective;

use crate::output::{DichotomyOut, ExtremalOut, VerdictOut, VerifyOut};
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Csv,
}

struct Table {
    preamble: Vec<(String, String)>,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

fn compact(v: &impl serde::Serialize) -> String {
    serde_json::to_string(v).expect("serializable")
}

fn schema(e: serde_json::Error) -> CliError {
    CliError::Schema(e.to_string())
}

pub fn render(text: &str, format: Format) -> Result<String, CliError> {
    if text.trim().is_empty() {
        return Ok(String::new());
    }
    let value: Value = serde_json::from_str(text).map_err(schema)?;
    let Value::Object(map) = &value else {
        return Err(CliError::Schema("report must be a JSON object".into()));
    };
    if map.is_empty() {
        return Ok(String::new());
    }
    let table = if map.contains_key("records") {
        extremal(serde_json::from_value(value).map_err(schema)?)
    } else if map.contains_key("entries") {
        dichotomy(serde_json::from_value(value).map_err(schema)?)
    } else if map.contains_key("reports") {
        suites(serde_json::from_value(value).map_err(schema)?)
    } else {
        generic(&value)
    };
    Ok(match format {
        Format::Text => text_table(&table),
        Format::Csv => csv_table(&table),
    })
}

fn extremal(r: ExtremalOut) -> Table {
    let objective = match &r.objective {
        Objective::Edges => "edges".to_string(),
        Objective::Copies { tree } => format!("copies of {}", treehelly::codec::to_graph6(tree)),
    };
    Table {
        preamble: vec![("family".into(), r.family.join(" ")), ("objective".into(), objective)],
        header: vec!["n".into(), "value".into(), "extremal_graphs".into()],
        rows: r
            .records
            .iter()
            .map(|rec| vec![rec.n.to_string(), rec.value.to_string(), rec.extremal_graphs.join(" ")])
            .collect(),
    }
}

fn dichotomy(r: DichotomyOut) -> Table {
    let rows = r
        .entries
        .iter()
        .map(|e| {
            let (case, detail) = match &e.verdict {
                VerdictOut::Case1 { q, member, map } => ("1".to_string(), format!("q={q} member={member} map={}", compact(map))),
                VerdictOut::Case2 { up_to, proven } => ("2".to_string(), format!("up_to={up_to} proven={proven}")),
            };
            let bound = e.lower_bound.as_ref().map_or(String::new(), |l| {
                format!(
                    "n'={} {} v={} copies={} bound={} free={} verified={}",
                    l.n_prime, l.graph6, l.vertices, l.copies, l.bound, l.family_free, l.verified
                )
            });
            vec![compact(&e.roots), e.components.to_string(), case, detail, bound]
        })
        .collect();
    Table {
        preamble: vec![
            ("tree".into(), r.tree),
            ("family".into(), r.family.join(" ")),
            ("k".into(), r.k.to_string()),
            ("q_max".into(), r.q_max.to_string()),
            ("n".into(), r.n.to_string()),
            ("case2_fired".into(), r.case2_fired.to_string()),
        ],
        header: ["roots", "components", "case", "detail", "lower_bound"].map(String::from).to_vec(),
        rows,
    }
}

fn suites(r: VerifyOut) -> Table {
    Table {
        preamble: vec![("seed".into(), r.seed.to_string()), ("passed".into(), r.passed.to_string())],
        header: ["suite", "passed", "checked", "failure_count", "notes", "failures"].map(String::from).to_vec(),
        rows: r
            .reports
            .iter()
            .map(|s| {
                vec![
                    s.suite.clone(),
                    s.passed.to_string(),
                    s.checked.to_string(),
                    s.failure_count.to_string(),
                    s.notes.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" "),
                    s.failures.join(" | "),
                ]
            })
            .collect(),
    }
}

/// Key/value rows, one per leaf, keyed by dotted path.
fn generic(value: &Value) -> Table {
    fn walk(prefix: &str, v: &Value, rows: &mut Vec<Vec<String>>) {
        match v {
            Value::Object(map) => {
                for (k, v) in map {
                    let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&key, v, rows);
                }
            }
            Value::String(s) => rows.push(vec![prefix.to_string(), s.clone()]),
            other => rows.push(vec![prefix.to_string(), other.to_string()]),
        }
    }
    let mut rows = Vec::new();
    walk("", value, &mut rows);
    Table {
        preamble: Vec::new(),
        header: vec!["key".into(), "value".into()],
        rows,
    }
}

fn text_table(t: &Table) -> String {
    let mut out = String::new();
    for (k, v) in &t.preamble {
        out.push_str(&format!("{k}: {v}\n"));
    }
    let widths: Vec<usize> = (0..t.header.len())
        .map(|i| t.rows.iter().map(|r| r[i].len()).chain([t.header[i].len()]).max().unwrap_or(0))
        .collect();
    let line = |cells: &[String]| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    out.push_str(&line(&t.header));
    for r in &t.rows {
        out.push_str(&line(r));
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_table(t: &Table) -> String {
    let mut out = String::new();
    for (k, v) in &t.preamble {
        out.push_str(&format!("# {k}: {v}\n"));
    }
    for r in std::iter::once(&t.header).chain(&t.rows) {
        out.push_str(&r.iter().map(|c| csv_field(c)).collect::<Vec<_>>().join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_reports() {
        assert_eq!(render("", Format::Text).unwrap(), "");
        assert_eq!(render("{}", Format::Csv).unwrap(), "");
        assert!(render("[1]", Format::Text).is_err());
        assert!(render(r#"{"records": 3}"#, Format::Text).is_err());
    }

    #[test]
    fn csv_quotes() {
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("x\"y"), "\"x\"\"y\"");
    }
}
