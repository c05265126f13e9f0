//! Fixed-form MPS.
//!
//! Fields start at columns 2, 5, 15, 25, 40 and 50. The objective row is
//! `obj`; its RHS entry holds the negated objective constant, the usual
//! convention for MPS readers. Binary variables use `BV` bounds and
//! continuous ones `UP ... 1`. Names are at most 8 characters as long as
//! `n < 10^6`. The reader splits on whitespace, so it also accepts
//! free-form files with the same sections.

use std::fmt::Write;

use super::lp::{assemble_variables, fmt_num, resolve_terms};
use super::{Constraint, IlpModel, LinExpr, ModelError, Sense, VarKind};

const OBJ_ROW: &str = "obj";

fn field_line(out: &mut String, f1: &str, f2: &str, f3: &str, f4: &str) {
    let line = format!(" {f1:<2} {f2:<8}  {f3:<8}  {f4:<12}");
    writeln!(out, "{}", line.trim_end()).unwrap();
}

pub fn emit_mps(m: &IlpModel) -> String {
    let mut out = String::new();
    writeln!(out, "NAME          {}", m.tag).unwrap();
    out.push_str("ROWS\n");
    field_line(&mut out, "N", OBJ_ROW, "", "");
    for c in &m.constraints {
        let kind = match c.sense {
            Sense::Ge => "G",
            Sense::Le => "L",
        };
        field_line(&mut out, kind, &c.name, "", "");
    }

    out.push_str("COLUMNS\n");
    let mut columns: Vec<Vec<(&str, f64)>> = vec![Vec::new(); m.variables.len()];
    let mut obj = vec![0.0; m.variables.len()];
    for &(v, c) in &m.objective.terms {
        obj[v] += c;
    }
    for (v, &c) in obj.iter().enumerate() {
        // always present, so every column is declared
        columns[v].push((OBJ_ROW, c));
    }
    for c in &m.constraints {
        for &(v, coef) in &c.terms {
            columns[v].push((&c.name, coef));
        }
    }
    for (var, entries) in m.variables.iter().zip(&columns) {
        for &(row, coef) in entries {
            field_line(&mut out, "", &var.name, row, &fmt_num(coef));
        }
    }

    out.push_str("RHS\n");
    if m.objective.constant != 0.0 {
        field_line(
            &mut out,
            "",
            "RHS",
            OBJ_ROW,
            &fmt_num(-m.objective.constant),
        );
    }
    for c in m.constraints.iter().filter(|c| c.rhs != 0.0) {
        field_line(&mut out, "", "RHS", &c.name, &fmt_num(c.rhs));
    }

    out.push_str("BOUNDS\n");
    for v in &m.variables {
        match v.kind {
            VarKind::Binary => field_line(&mut out, "BV", "BND", &v.name, ""),
            VarKind::Continuous => field_line(&mut out, "UP", "BND", &v.name, "1"),
        }
    }
    out.push_str("ENDATA\n");
    out
}

fn perr(line: usize, msg: impl Into<String>) -> ModelError {
    ModelError::Parse {
        line,
        msg: msg.into(),
    }
}

fn num(tok: &str, line: usize) -> Result<f64, ModelError> {
    tok.parse()
        .map_err(|_| perr(line, format!("`{tok}` is not a number")))
}

/// Parses MPS written by [`emit_mps`].
pub fn parse_mps(text: &str) -> Result<IlpModel, ModelError> {
    #[derive(PartialEq)]
    enum Sec {
        Head,
        Rows,
        Columns,
        Rhs,
        Bounds,
        Done,
    }
    let mut sec = Sec::Head;
    let mut name: Option<String> = None;
    let mut rows: Vec<(String, Sense, f64)> = Vec::new();
    let mut obj_row: Option<String> = None;
    let mut constant = 0.0;
    let mut col_names: Vec<String> = Vec::new();
    let mut entries: Vec<(usize, String, f64)> = Vec::new();
    let mut bounds: Vec<(String, VarKind)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        if raw.trim().is_empty() || raw.starts_with('*') {
            continue;
        }
        let toks: Vec<&str> = raw.split_whitespace().collect();
        if !raw.starts_with(' ') {
            sec = match toks[0] {
                "NAME" => {
                    name = toks.get(1).map(|s| s.to_string());
                    Sec::Head
                }
                "ROWS" => Sec::Rows,
                "COLUMNS" => Sec::Columns,
                "RHS" => Sec::Rhs,
                "BOUNDS" => Sec::Bounds,
                "ENDATA" => Sec::Done,
                other => return Err(perr(line, format!("unsupported section `{other}`"))),
            };
            continue;
        }
        match sec {
            Sec::Head => return Err(perr(line, "data before ROWS")),
            Sec::Rows => match toks.as_slice() {
                ["N", row] if obj_row.is_none() => obj_row = Some(row.to_string()),
                ["G", row] => rows.push((row.to_string(), Sense::Ge, 0.0)),
                ["L", row] => rows.push((row.to_string(), Sense::Le, 0.0)),
                _ => return Err(perr(line, "expected `N|G|L <row>`")),
            },
            Sec::Columns => {
                if toks.contains(&"'MARKER'") {
                    return Err(perr(
                        line,
                        "integer markers are not supported; use BV bounds",
                    ));
                }
                if toks.len() != 3 && toks.len() != 5 {
                    return Err(perr(line, "expected `<col> <row> <value> [<row> <value>]`"));
                }
                let col = toks[0];
                let idx = match col_names.iter().position(|c| c == col) {
                    Some(i) => i,
                    None => {
                        col_names.push(col.to_string());
                        col_names.len() - 1
                    }
                };
                for pair in toks[1..].chunks(2) {
                    entries.push((idx, pair[0].to_string(), num(pair[1], line)?));
                }
            }
            Sec::Rhs => {
                if toks.len() != 3 && toks.len() != 5 {
                    return Err(perr(line, "expected `<set> <row> <value> [<row> <value>]`"));
                }
                for pair in toks[1..].chunks(2) {
                    let value = num(pair[1], line)?;
                    if obj_row.as_deref() == Some(pair[0]) {
                        constant = -value;
                    } else {
                        let row = rows
                            .iter_mut()
                            .find(|r| r.0 == pair[0])
                            .ok_or_else(|| perr(line, format!("unknown row `{}`", pair[0])))?;
                        row.2 = value;
                    }
                }
            }
            Sec::Bounds => match toks.as_slice() {
                ["BV", _, col] => bounds.push((col.to_string(), VarKind::Binary)),
                ["UP", _, col, v] if num(v, line)? == 1.0 => {
                    bounds.push((col.to_string(), VarKind::Continuous))
                }
                _ => return Err(perr(line, "only `BV` and `UP ... 1` bounds are supported")),
            },
            Sec::Done => return Err(perr(line, "content after ENDATA")),
        }
    }
    if sec != Sec::Done {
        return Err(perr(text.lines().count(), "missing ENDATA"));
    }
    let tag = name
        .ok_or_else(|| perr(1, "missing NAME"))?
        .parse()
        .map_err(|e: ModelError| perr(1, e.to_string()))?;
    let obj_row = obj_row.ok_or_else(|| perr(0, "no objective row"))?;

    let kind_of = |col: &str| bounds.iter().find(|(c, _)| c == col).map(|(_, k)| *k);
    for col in &col_names {
        if kind_of(col).is_none() {
            return Err(perr(0, format!("column `{col}` has no bounds")));
        }
    }
    let variables = assemble_variables(&col_names, |c| kind_of(c) == Some(VarKind::Binary))
        .map_err(|m| perr(0, m))?;

    let terms_of = |row: &str| {
        resolve_terms(
            &variables,
            entries
                .iter()
                .filter(|e| e.1 == row)
                .map(|e| (col_names[e.0].as_str(), e.2)),
        )
        .map_err(|m| perr(0, m))
    };
    for (_, row, _) in &entries {
        if *row != obj_row && !rows.iter().any(|r| r.0 == *row) {
            return Err(perr(0, format!("unknown row `{row}`")));
        }
    }
    let objective = LinExpr {
        terms: terms_of(&obj_row)?,
        constant,
    };
    let constraints = rows
        .iter()
        .map(|(name, sense, rhs)| {
            Ok(Constraint {
                name: name.clone(),
                terms: terms_of(name)?,
                sense: *sense,
                rhs: *rhs,
            })
        })
        .collect::<Result<Vec<_>, ModelError>>()?;
    Ok(IlpModel {
        tag,
        n: variables.len() / 2,
        variables,
        objective,
        constraints,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domination::ProblemKind;
    use crate::graph::{example_graph, Graph};
    use crate::model::{build_bvv, build_rr};

    #[test]
    fn fixed_columns() {
        let text = emit_mps(&build_rr(&Graph::empty(1), ProblemKind::Srdp));
        let expected = "\
NAME          rr-srdp
ROWS
 N  obj
 G  ce0
 G  cg0
 G  cs0
COLUMNS
    x0        obj       2
    x0        ce0       1
    x0        cg0       1
    x0        cs0       2
    y0        obj       1
    y0        ce0       -1
    y0        cs0       1
RHS
    RHS       obj       1
    RHS       cg0       1
    RHS       cs0       2
BOUNDS
 BV BND       x0
 BV BND       y0
ENDATA
";
        assert_eq!(text, expected);
        // value field starts at column 25
        let line = text.lines().find(|l| l.contains("x0        obj")).unwrap();
        assert_eq!(line.find('2'), Some(24));
    }

    #[test]
    fn round_trips() {
        let g = example_graph();
        for kind in ProblemKind::BOTH {
            for m in [
                build_rr(&g, kind),
                build_bvv(&g, kind),
                build_bvv(&g, kind).relaxed(),
            ] {
                let text = emit_mps(&m);
                assert_eq!(text, emit_mps(&m));
                assert_eq!(parse_mps(&text).unwrap(), m);
            }
        }
        let empty_row = build_rr(&Graph::empty(2), ProblemKind::Strdp);
        assert_eq!(parse_mps(&emit_mps(&empty_row)).unwrap(), empty_row);
    }

    #[test]
    fn rejects_bad_input() {
        let good = emit_mps(&build_rr(&Graph::complete(2), ProblemKind::Srdp));
        assert!(parse_mps(&good.replace("ENDATA\n", "")).is_err());
        assert!(parse_mps(&good.replace("NAME          rr-srdp", "NAME          lp")).is_err());
        assert!(parse_mps(&good.replace(" BV BND       y1\n", "")).is_err());
        assert!(parse_mps(&good.replace("RHS       cg1", "RHS       zz1")).is_err());
        assert!(parse_mps(&good.replace(" G  ce0", " E  ce0")).is_err());
    }
}
