//! CPLEX-style LP files.
//!
//! ```text
//! \ model rr-srdp
//! \ objective constant -6
//! Minimize
//!  obj: 2 x0 + 2 x1 + ... + y5
//! Subject To
//!  ce0: x0 - y0 >= 0
//!  ...
//! Bounds
//!  0 <= x0 <= 1
//!  ...
//! Binary
//!  x0
//!  ...
//! End
//! ```
//!
//! LP files cannot carry an objective constant, so it travels in the
//! `\ objective constant` comment. A constraint with no terms is written as
//! `0 x0`; zero coefficients are dropped when parsing.

use std::fmt::Write;

use super::{Constraint, IlpModel, LinExpr, ModelError, ModelTag, Sense, VarKind, Variable};

pub(super) fn fmt_num(v: f64) -> String {
    format!("{v}")
}

fn write_expr(out: &mut String, terms: &[(usize, f64)], vars: &[Variable]) {
    if terms.is_empty() {
        let first = vars.first().map_or("x0", |v| v.name.as_str());
        write!(out, "0 {first}").unwrap();
        return;
    }
    for (k, &(v, c)) in terms.iter().enumerate() {
        let name = &vars[v].name;
        let sign = if c < 0.0 { "-" } else { "+" };
        let mag = c.abs();
        match (k, c < 0.0) {
            (0, false) => {}
            (0, true) => out.push_str("- "),
            _ => write!(out, " {sign} ").unwrap(),
        }
        if mag == 1.0 {
            out.push_str(name);
        } else {
            write!(out, "{} {name}", fmt_num(mag)).unwrap();
        }
    }
}

pub fn emit_lp(m: &IlpModel) -> String {
    let mut out = String::new();
    writeln!(out, "\\ model {}", m.tag).unwrap();
    writeln!(
        out,
        "\\ objective constant {}",
        fmt_num(m.objective.constant)
    )
    .unwrap();
    out.push_str("Minimize\n obj: ");
    write_expr(&mut out, &m.objective.terms, &m.variables);
    out.push_str("\nSubject To\n");
    for c in &m.constraints {
        write!(out, " {}: ", c.name).unwrap();
        write_expr(&mut out, &c.terms, &m.variables);
        writeln!(out, " {} {}", c.sense.symbol(), fmt_num(c.rhs)).unwrap();
    }
    out.push_str("Bounds\n");
    for v in &m.variables {
        writeln!(out, " 0 <= {} <= 1", v.name).unwrap();
    }
    if m.variables.iter().any(|v| v.kind == VarKind::Binary) {
        out.push_str("Binary\n");
        for v in m.variables.iter().filter(|v| v.kind == VarKind::Binary) {
            writeln!(out, " {}", v.name).unwrap();
        }
    }
    out.push_str("End\n");
    out
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    Preamble,
    Objective,
    Constraints,
    Bounds,
    Binary,
    End,
}

struct RawRow {
    line: usize,
    name: String,
    terms: Vec<(String, f64)>,
    sense: Option<(Sense, f64)>,
}

fn perr(line: usize, msg: impl Into<String>) -> ModelError {
    ModelError::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_num(tok: &str, line: usize) -> Result<f64, ModelError> {
    tok.parse::<f64>()
        .map_err(|_| perr(line, format!("`{tok}` is not a number")))
}

fn parse_row(line: usize, body: &str, want_sense: bool) -> Result<RawRow, ModelError> {
    let (name, expr) = body
        .split_once(':')
        .ok_or_else(|| perr(line, "expected `name: expression`"))?;
    let mut terms = Vec::new();
    let mut sign = 1.0;
    let mut coef: Option<f64> = None;
    let mut sense = None;
    let mut toks = expr.split_whitespace();
    while let Some(tok) = toks.next() {
        match tok {
            "+" => sign = 1.0,
            "-" => sign = -1.0,
            ">=" | "<=" | "=>" | "=<" => {
                let s = if tok.starts_with('>') || tok.ends_with('>') {
                    Sense::Ge
                } else {
                    Sense::Le
                };
                let rhs = toks
                    .next()
                    .ok_or_else(|| perr(line, "missing right-hand side"))?;
                sense = Some((s, parse_num(rhs, line)?));
                if toks.next().is_some() {
                    return Err(perr(line, "trailing tokens after right-hand side"));
                }
                break;
            }
            "=" => return Err(perr(line, "equality constraints are not supported")),
            t if t
                .starts_with(|c: char| c.is_ascii_digit() || c == '.' || c == '-' || c == '+') =>
            {
                coef = Some(parse_num(t, line)?);
            }
            var => {
                terms.push((var.to_string(), sign * coef.take().unwrap_or(1.0)));
                sign = 1.0;
            }
        }
    }
    if coef.is_some() {
        return Err(perr(line, "coefficient without a variable"));
    }
    if want_sense != sense.is_some() {
        return Err(perr(
            line,
            if want_sense {
                "missing constraint sense"
            } else {
                "unexpected sense in objective"
            },
        ));
    }
    Ok(RawRow {
        line,
        name: name.trim().to_string(),
        terms,
        sense,
    })
}

/// Parses the LP dialect written by [`emit_lp`].
pub fn parse_lp(text: &str) -> Result<IlpModel, ModelError> {
    let mut tag: Option<ModelTag> = None;
    let mut constant = 0.0;
    let mut section = Section::Preamble;
    let mut objective: Option<RawRow> = None;
    let mut rows = Vec::new();
    let mut bounded: Vec<String> = Vec::new();
    let mut binaries: Vec<String> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.trim();
        if body.is_empty() {
            continue;
        }
        if let Some(comment) = body.strip_prefix('\\') {
            let comment = comment.trim();
            if let Some(t) = comment.strip_prefix("model ") {
                tag = Some(
                    t.trim()
                        .parse()
                        .map_err(|_| perr(line, format!("unknown model tag `{t}`")))?,
                );
            } else if let Some(c) = comment.strip_prefix("objective constant ") {
                constant = parse_num(c.trim(), line)?;
            }
            continue;
        }
        let keyword = body.to_ascii_lowercase();
        let next = match keyword.as_str() {
            "minimize" | "minimise" | "min" => Some(Section::Objective),
            "subject to" | "st" | "s.t." => Some(Section::Constraints),
            "bounds" => Some(Section::Bounds),
            "binary" | "binaries" | "bin" => Some(Section::Binary),
            "end" => Some(Section::End),
            "maximize" | "maximise" | "max" => {
                return Err(perr(line, "only minimization models are supported"))
            }
            _ => None,
        };
        if let Some(s) = next {
            section = s;
            continue;
        }
        match section {
            Section::Preamble => return Err(perr(line, "expected `Minimize`")),
            Section::Objective => {
                if objective.is_some() {
                    return Err(perr(line, "objective must fit on one line"));
                }
                objective = Some(parse_row(line, body, false)?);
            }
            Section::Constraints => rows.push(parse_row(line, body, true)?),
            Section::Bounds => {
                let toks: Vec<&str> = body.split_whitespace().collect();
                match toks.as_slice() {
                    [lo, "<=", name, "<=", hi]
                        if parse_num(lo, line)? == 0.0 && parse_num(hi, line)? == 1.0 =>
                    {
                        bounded.push(name.to_string())
                    }
                    _ => return Err(perr(line, "only `0 <= v <= 1` bounds are supported")),
                }
            }
            Section::Binary => binaries.extend(body.split_whitespace().map(str::to_string)),
            Section::End => return Err(perr(line, "content after `End`")),
        }
    }
    if section != Section::End {
        return Err(perr(text.lines().count(), "missing `End`"));
    }
    let tag = tag.ok_or_else(|| perr(1, "missing `\\ model <formulation>-<problem>` header"))?;
    let objective = objective.ok_or_else(|| perr(0, "missing objective"))?;

    let variables = assemble_variables(&bounded, |name| binaries.iter().any(|b| b == name))
        .map_err(|msg| perr(0, msg))?;
    for b in &binaries {
        if !bounded.contains(b) {
            return Err(perr(0, format!("binary variable `{b}` has no bounds")));
        }
    }
    let lookup = |row: &RawRow| -> Result<Vec<(usize, f64)>, ModelError> {
        resolve_terms(&variables, row.terms.iter().map(|(n, c)| (n.as_str(), *c)))
            .map_err(|msg| perr(row.line, msg))
    };
    let objective = LinExpr {
        terms: lookup(&objective)?,
        constant,
    };
    let constraints = rows
        .iter()
        .map(|row| {
            let (sense, rhs) = row.sense.expect("checked in parse_row");
            Ok(Constraint {
                name: row.name.clone(),
                terms: lookup(row)?,
                sense,
                rhs,
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

/// Checks the declared names are exactly `x0..x{n-1}, y0..y{n-1}` in order.
pub(super) fn assemble_variables(
    names: &[String],
    is_binary: impl Fn(&str) -> bool,
) -> Result<Vec<Variable>, String> {
    if !names.len().is_multiple_of(2) {
        return Err(format!(
            "expected an even number of variables, found {}",
            names.len()
        ));
    }
    let n = names.len() / 2;
    names
        .iter()
        .enumerate()
        .map(|(k, name)| {
            let expected = if k < n {
                format!("x{k}")
            } else {
                format!("y{}", k - n)
            };
            if *name != expected {
                return Err(format!("variable #{k} is `{name}`, expected `{expected}`"));
            }
            let kind = if is_binary(name) {
                VarKind::Binary
            } else {
                VarKind::Continuous
            };
            Ok(Variable {
                name: name.clone(),
                kind,
            })
        })
        .collect()
}

/// Maps named terms to sorted index terms, dropping zero coefficients and
/// merging repeats.
pub(super) fn resolve_terms<'a>(
    variables: &[Variable],
    terms: impl Iterator<Item = (&'a str, f64)>,
) -> Result<Vec<(usize, f64)>, String> {
    let mut out: Vec<(usize, f64)> = Vec::new();
    for (name, c) in terms {
        let idx = variables
            .iter()
            .position(|v| v.name == name)
            .ok_or_else(|| format!("unknown variable `{name}`"))?;
        match out.iter_mut().find(|(v, _)| *v == idx) {
            Some(t) => t.1 += c,
            None => out.push((idx, c)),
        }
    }
    out.retain(|&(_, c)| c != 0.0);
    out.sort_by_key(|&(v, _)| v);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domination::ProblemKind;
    use crate::graph::{example_graph, Graph};
    use crate::model::{build_bvv, build_rr};

    fn constraint_lines(text: &str) -> usize {
        let start = text.lines().position(|l| l == "Subject To").unwrap();
        let end = text.lines().position(|l| l == "Bounds").unwrap();
        end - start - 1
    }

    #[test]
    fn k1_emission() {
        let m = build_rr(&Graph::empty(1), ProblemKind::Srdp);
        let text = emit_lp(&m);
        assert_eq!(constraint_lines(&text), 3);
        assert_eq!(
            text,
            "\\ model rr-srdp\n\\ objective constant -1\nMinimize\n obj: 2 x0 + y0\nSubject To\n \
             ce0: x0 - y0 >= 0\n cg0: x0 >= 1\n cs0: 2 x0 + y0 >= 2\nBounds\n 0 <= x0 <= 1\n \
             0 <= y0 <= 1\nBinary\n x0\n y0\nEnd\n"
        );
    }

    #[test]
    fn empty_constraint_round_trips() {
        let m = build_bvv(&Graph::empty(1), ProblemKind::Strdp);
        let text = emit_lp(&m);
        assert!(text.contains(" cs0: 0 x0 >= 1\n"));
        assert_eq!(parse_lp(&text).unwrap(), m);
    }

    #[test]
    fn round_trip_and_determinism() {
        let g = example_graph();
        for kind in ProblemKind::BOTH {
            for m in [
                build_rr(&g, kind),
                build_bvv(&g, kind),
                build_rr(&g, kind).relaxed(),
            ] {
                let text = emit_lp(&m);
                assert_eq!(text, emit_lp(&m));
                assert_eq!(constraint_lines(&text), 18);
                assert_eq!(parse_lp(&text).unwrap(), m);
            }
        }
    }

    #[test]
    fn parse_errors() {
        let good = emit_lp(&build_rr(&Graph::complete(2), ProblemKind::Srdp));
        assert!(parse_lp(&good.replace("\\ model rr-srdp\n", "")).is_err());
        assert!(parse_lp(&good.replace("End\n", "")).is_err());
        assert!(parse_lp(&good.replace("x1 - y1 >= 0", "x1 - y1 = 0")).is_err());
        assert!(parse_lp(&good.replace("x1 - y1 >= 0", "x1 - z1 >= 0")).is_err());
        assert!(parse_lp(&good.replace("0 <= y1 <= 1", "0 <= y1 <= 2")).is_err());
        let err = parse_lp(&good.replace("ce1: x1 - y1 >= 0", "ce1: x1 - y1 >= zero")).unwrap_err();
        assert!(matches!(err, ModelError::Parse { line: 7, .. }), "{err}");
    }

    #[test]
    fn parses_coefficient_variants() {
        let text = "\\ model bvv-strdp\nMinimize\n obj: -2 x0 + 1.5 y0\nSubject To\n c: - x0 + 0 y0 + x0 + 3 y0 <= 1\nBounds\n 0 <= x0 <= 1\n 0 <= y0 <= 1\nEnd\n";
        let m = parse_lp(text).unwrap();
        assert_eq!(m.objective.terms, vec![(0, -2.0), (1, 1.5)]);
        assert_eq!(m.objective.constant, 0.0);
        assert_eq!(m.constraints[0].terms, vec![(1, 3.0)]);
        assert!(m.variables.iter().all(|v| v.kind == VarKind::Continuous));
    }
}
