//! Constraint-programming model over `z_i in {-1, 1, 2}`.
//!
//! Text form, one item per line:
//!
//! ```text
//! # cp srdp n=2
//! var z0 in {-1,1,2}
//! var z1 in {-1,1,2}
//! guard 0 : z0 != -1 or z1 == 2
//! guard 1 : z1 != -1 or z0 == 2
//! sum 0 : z0 + z1 >= 1
//! sum 1 : z0 + z1 >= 1
//! minimize z0 + z1
//! ```
//!
//! A sum with no members is written `0 >= 1`.

use std::fmt::Write;

use crate::domination::{Assignment, ProblemKind};
use crate::graph::Graph;

/// `(z_v != -1) or OR_{j in neighbors} (z_j == 2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GuardClause {
    pub vertex: usize,
    pub neighbors: Vec<usize>,
}

/// `sum_{j in members} z_j > 0`, i.e. `>= 1` over the integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumClause {
    pub vertex: usize,
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CpModel {
    pub n: usize,
    pub kind: ProblemKind,
    pub guards: Vec<GuardClause>,
    pub sums: Vec<SumClause>,
}

pub const CP_DOMAIN: [i8; 3] = [-1, 1, 2];

pub fn build_cp(g: &Graph, kind: ProblemKind) -> CpModel {
    let n = g.num_vertices();
    let guards = (0..n)
        .map(|v| GuardClause {
            vertex: v,
            neighbors: g.neighbors(v).to_vec(),
        })
        .collect();
    let sums = (0..n)
        .map(|v| {
            let mut members = g.neighbors(v).to_vec();
            if kind.includes_self() {
                members.push(v);
                members.sort_unstable();
            }
            SumClause { vertex: v, members }
        })
        .collect();
    CpModel {
        n,
        kind,
        guards,
        sums,
    }
}

impl CpModel {
    pub fn satisfied_by(&self, z: &Assignment) -> bool {
        z.len() == self.n
            && z.values().iter().all(|v| CP_DOMAIN.contains(v))
            && self
                .guards
                .iter()
                .all(|c| z.get(c.vertex) != -1 || c.neighbors.iter().any(|&j| z.get(j) == 2))
            && self
                .sums
                .iter()
                .all(|c| c.members.iter().map(|&j| i64::from(z.get(j))).sum::<i64>() > 0)
    }

    pub fn objective(&self, z: &Assignment) -> i64 {
        z.values().iter().map(|&v| i64::from(v)).sum()
    }
}

fn join(items: impl Iterator<Item = String>, sep: &str) -> String {
    items.collect::<Vec<_>>().join(sep)
}

pub fn emit_cp(m: &CpModel) -> String {
    let mut out = String::new();
    writeln!(out, "# cp {} n={}", m.kind, m.n).unwrap();
    for i in 0..m.n {
        writeln!(out, "var z{i} in {{-1,1,2}}").unwrap();
    }
    for c in &m.guards {
        let alts = c.neighbors.iter().map(|j| format!(" or z{j} == 2"));
        writeln!(
            out,
            "guard {} : z{} != -1{}",
            c.vertex,
            c.vertex,
            alts.collect::<String>()
        )
        .unwrap();
    }
    for c in &m.sums {
        let lhs = if c.members.is_empty() {
            "0".to_string()
        } else {
            join(c.members.iter().map(|j| format!("z{j}")), " + ")
        };
        writeln!(out, "sum {} : {lhs} >= 1", c.vertex).unwrap();
    }
    let objective = if m.n == 0 {
        "0".to_string()
    } else {
        join((0..m.n).map(|i| format!("z{i}")), " + ")
    };
    writeln!(out, "minimize {objective}").unwrap();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{example_graph, Graph};

    /// Minimum of the CP objective by enumerating z-space.
    fn cp_optimum(m: &CpModel) -> Option<i64> {
        let mut best = None;
        let mut digits = vec![0usize; m.n];
        loop {
            let z = Assignment::new(digits.iter().map(|&d| CP_DOMAIN[d]).collect()).unwrap();
            if m.satisfied_by(&z) {
                let v = m.objective(&z);
                best = Some(best.map_or(v, |b: i64| b.min(v)));
            }
            let Some(pos) = digits.iter().rposition(|&d| d < 2) else {
                return best;
            };
            digits[pos] += 1;
            for d in &mut digits[pos + 1..] {
                *d = 0;
            }
        }
    }

    #[test]
    fn optima() {
        assert_eq!(
            cp_optimum(&build_cp(&example_graph(), ProblemKind::Srdp)),
            Some(2)
        );
        assert_eq!(
            cp_optimum(&build_cp(&example_graph(), ProblemKind::Strdp)),
            Some(4)
        );
        assert_eq!(
            cp_optimum(&build_cp(&Graph::empty(1), ProblemKind::Srdp)),
            Some(1)
        );
        assert_eq!(
            cp_optimum(&build_cp(&Graph::empty(1), ProblemKind::Strdp)),
            None
        );
    }

    #[test]
    fn text_form() {
        let text = emit_cp(&build_cp(&Graph::complete(2), ProblemKind::Srdp));
        assert_eq!(
            text,
            "# cp srdp n=2\nvar z0 in {-1,1,2}\nvar z1 in {-1,1,2}\nguard 0 : z0 != -1 or z1 == 2\n\
             guard 1 : z1 != -1 or z0 == 2\nsum 0 : z0 + z1 >= 1\nsum 1 : z0 + z1 >= 1\nminimize z0 + z1\n"
        );
        let k1 = emit_cp(&build_cp(&Graph::empty(1), ProblemKind::Strdp));
        assert!(k1.contains("guard 0 : z0 != -1\n"));
        assert!(k1.contains("sum 0 : 0 >= 1\n"));
    }

    #[test]
    fn line_counts() {
        let g = example_graph();
        let m = build_cp(&g, ProblemKind::Strdp);
        let text = emit_cp(&m);
        let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(body.iter().filter(|l| l.starts_with("var ")).count(), 6);
        assert_eq!(body.len() - 6, 2 * 6 + 1);
        assert_eq!(text, emit_cp(&m));
    }
}
