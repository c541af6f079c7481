//! Feature tables as ARFF and CSV.

use std::io::{BufRead, Write};

use crate::boost::Label;
use crate::error::{Error, Result};
use crate::sampling::LabeledExample;

fn arff_name(name: &str) -> String {
    let plain = !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'));
    if plain {
        name.to_string()
    } else {
        format!("'{}'", name.replace('\\', "\\\\").replace('\'', "\\'"))
    }
}

/// Writes a numeric ARFF relation with a `{-1,1}` class attribute last.
/// Values use the shortest decimal that reads back to the same `f64`.
pub fn write_arff<W: Write>(
    mut w: W,
    relation: &str,
    feature_names: &[String],
    examples: &[LabeledExample],
) -> Result<()> {
    if examples.is_empty() {
        return Err(Error::InvalidArgument(
            "refusing to export an empty example set".into(),
        ));
    }
    let io = |e| Error::io("writing ARFF", e);
    writeln!(w, "@RELATION {}", arff_name(relation)).map_err(io)?;
    writeln!(w).map_err(io)?;
    for name in feature_names {
        writeln!(w, "@ATTRIBUTE {} NUMERIC", arff_name(name)).map_err(io)?;
    }
    writeln!(w, "@ATTRIBUTE class {{-1,1}}").map_err(io)?;
    writeln!(w).map_err(io)?;
    writeln!(w, "@DATA").map_err(io)?;
    for ex in examples {
        if ex.features.len() != feature_names.len() {
            return Err(Error::DimensionMismatch {
                expected: feature_names.len(),
                got: ex.features.len(),
            });
        }
        for x in &ex.features {
            write!(w, "{x},").map_err(io)?;
        }
        writeln!(w, "{}", ex.label.as_i8()).map_err(io)?;
    }
    w.flush().map_err(io)
}

/// A parsed ARFF relation whose last attribute is the class.
#[derive(Debug, Clone, PartialEq)]
pub struct ArffTable {
    pub relation: String,
    pub attributes: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub labels: Vec<Label>,
}

fn unquote(s: &str) -> String {
    let s = s.trim();
    if s.len() >= 2
        && (s.starts_with('\'') && s.ends_with('\'') || s.starts_with('"') && s.ends_with('"'))
    {
        s[1..s.len() - 1].replace("\\'", "'").replace("\\\\", "\\")
    } else {
        s.to_string()
    }
}

/// Splits an `@ATTRIBUTE` declaration body into name and type, honouring quotes.
fn split_decl(rest: &str) -> (String, String) {
    let rest = rest.trim();
    if let Some(q) = rest.chars().next().filter(|c| *c == '\'' || *c == '"') {
        let mut escaped = false;
        for (i, c) in rest.char_indices().skip(1) {
            if escaped {
                escaped = false;
            } else if c == '\\' {
                escaped = true;
            } else if c == q {
                return (unquote(&rest[..=i]), rest[i + 1..].trim().to_string());
            }
        }
    }
    match rest.split_once(char::is_whitespace) {
        Some((n, t)) => (n.to_string(), t.trim().to_string()),
        None => (rest.to_string(), String::new()),
    }
}

/// Reads the tables [`write_arff`] produces (dense data, numeric features,
/// `{-1,1}` class last).
pub fn read_arff<R: BufRead>(r: R) -> Result<ArffTable> {
    let mut table = ArffTable {
        relation: String::new(),
        attributes: Vec::new(),
        rows: Vec::new(),
        labels: Vec::new(),
    };
    let mut in_data = false;
    for (idx, line) in r.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::io("reading ARFF", e))?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            line: lineno,
            message,
        };
        if !in_data {
            let lower = t.to_ascii_lowercase();
            if lower.starts_with("@relation") {
                table.relation = unquote(&t[9..]);
            } else if lower.starts_with("@attribute") {
                let (name, _ty) = split_decl(&t[10..]);
                table.attributes.push(name);
            } else if lower.starts_with("@data") {
                in_data = true;
                if table.attributes.is_empty() {
                    return Err(parse_err("@DATA before any @ATTRIBUTE".into()));
                }
            } else {
                return Err(parse_err(format!("unexpected header line {t:?}")));
            }
            continue;
        }
        let cells: Vec<&str> = t.split(',').map(str::trim).collect();
        if cells.len() != table.attributes.len() {
            return Err(parse_err(format!(
                "expected {} values, found {}",
                table.attributes.len(),
                cells.len()
            )));
        }
        let (class, feats) = cells.split_last().unwrap();
        let row = feats
            .iter()
            .map(|c| {
                c.parse::<f64>()
                    .map_err(|_| parse_err(format!("bad number {c:?}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        let label = class
            .parse::<i8>()
            .ok()
            .and_then(Label::from_i8)
            .ok_or_else(|| parse_err(format!("bad class {class:?}")))?;
        table.rows.push(row);
        table.labels.push(label);
    }
    if !in_data {
        return Err(Error::Parse {
            line: 0,
            message: "no @DATA section".into(),
        });
    }
    table.attributes.pop();
    Ok(table)
}

/// `u,v,label,<features...>` with original node ids.
pub fn write_features_csv<W: Write>(
    mut w: W,
    feature_names: &[String],
    examples: &[LabeledExample],
) -> Result<()> {
    let io = |e| Error::io("writing feature CSV", e);
    let mut header = vec!["u".to_string(), "v".into(), "label".into()];
    header.extend(feature_names.iter().cloned());
    writeln!(w, "{}", header.join(",")).map_err(io)?;
    for ex in examples {
        write!(w, "{},{},{}", ex.ids.0, ex.ids.1, ex.label.as_i8()).map_err(io)?;
        for x in &ex.features {
            write!(w, ",{x}").map_err(io)?;
        }
        writeln!(w).map_err(io)?;
    }
    w.flush().map_err(io)
}
