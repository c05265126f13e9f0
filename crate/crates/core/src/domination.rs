//! Signed Roman dominating functions: assignments over {-1, 1, 2},
//! neighborhood sums, feasibility and weight.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::Graph;

/// Which neighborhood the sum constraint ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProblemKind {
    /// Signed Roman domination: closed neighborhoods N[i].
    Srdp,
    /// Signed total Roman domination: open neighborhoods N(i).
    Strdp,
}

impl ProblemKind {
    pub const BOTH: [ProblemKind; 2] = [ProblemKind::Srdp, ProblemKind::Strdp];

    pub fn name(self) -> &'static str {
        match self {
            ProblemKind::Srdp => "srdp",
            ProblemKind::Strdp => "strdp",
        }
    }

    /// Whether a vertex counts toward its own sum.
    pub fn includes_self(self) -> bool {
        self == ProblemKind::Srdp
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProblemKind {
    type Err = AssignmentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "srdp" => Ok(ProblemKind::Srdp),
            "strdp" => Ok(ProblemKind::Strdp),
            _ => Err(AssignmentError::UnknownProblem(s.to_string())),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AssignmentError {
    #[error("value {value} at vertex {vertex} is not one of -1, 1, 2")]
    BadValue { vertex: usize, value: String },
    #[error("assignment has {got} values, graph has {expected} vertices")]
    WrongLength { expected: usize, got: usize },
    #[error("unknown problem `{0}` (expected srdp or strdp)")]
    UnknownProblem(String),
}

/// Whether `v` is one of the three admissible labels.
pub fn is_label(v: i8) -> bool {
    matches!(v, -1 | 1 | 2)
}

/// Next label up the ladder -1 < 1 < 2, if any.
pub fn step_up(v: i8) -> Option<i8> {
    match v {
        -1 => Some(1),
        1 => Some(2),
        _ => None,
    }
}

/// Next label down the ladder, if any.
pub fn step_down(v: i8) -> Option<i8> {
    match v {
        2 => Some(1),
        1 => Some(-1),
        _ => None,
    }
}

/// A labeling `f: V -> {-1, 1, 2}`, stored densely by vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment(Vec<i8>);

impl Assignment {
    pub fn new(values: Vec<i8>) -> Result<Self, AssignmentError> {
        if let Some((vertex, &v)) = values.iter().enumerate().find(|(_, &v)| !is_label(v)) {
            return Err(AssignmentError::BadValue {
                vertex,
                value: v.to_string(),
            });
        }
        Ok(Assignment(values))
    }

    pub fn uniform(n: usize, value: i8) -> Self {
        assert!(is_label(value), "{value} is not a label");
        Assignment(vec![value; n])
    }

    pub fn values(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, v: usize) -> i8 {
        self.0[v]
    }

    /// Sets vertex `v`. Panics if `value` is not a label.
    pub fn set(&mut self, v: usize, value: i8) {
        assert!(is_label(value), "{value} is not a label");
        self.0[v] = value;
    }

    /// Checks the length against a graph.
    pub fn check_len(&self, g: &Graph) -> Result<(), AssignmentError> {
        if self.len() != g.num_vertices() {
            return Err(AssignmentError::WrongLength {
                expected: g.num_vertices(),
                got: self.len(),
            });
        }
        Ok(())
    }

    /// Parses one whitespace-separated line of labels.
    pub fn parse(text: &str) -> Result<Self, AssignmentError> {
        let values = text
            .split_whitespace()
            .enumerate()
            .map(|(vertex, tok)| {
                tok.parse::<i8>()
                    .ok()
                    .filter(|&v| is_label(v))
                    .ok_or_else(|| AssignmentError::BadValue {
                        vertex,
                        value: tok.to_string(),
                    })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Assignment(values))
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// s(i) over N[i] for SRDP, s^tot(i) over N(i) for STRDP.
pub fn neighborhood_sum(g: &Graph, z: &Assignment, i: usize, kind: ProblemKind) -> i64 {
    let open: i64 = g.neighbors(i).iter().map(|&j| i64::from(z.get(j))).sum();
    if kind.includes_self() {
        open + i64::from(z.get(i))
    } else {
        open
    }
}

/// A vertex labeled -1 needs a neighbor labeled 2.
pub fn guard_condition_holds(g: &Graph, z: &Assignment, i: usize) -> bool {
    z.get(i) != -1 || g.neighbors(i).iter().any(|&j| z.get(j) == 2)
}

pub fn is_feasible(g: &Graph, z: &Assignment, kind: ProblemKind) -> bool {
    z.len() == g.num_vertices()
        && (0..g.num_vertices())
            .all(|i| guard_condition_holds(g, z, i) && neighborhood_sum(g, z, i, kind) >= 1)
}

pub fn weight(z: &Assignment) -> i64 {
    z.values().iter().map(|&v| i64::from(v)).sum()
}

/// Constraints only get easier as labels rise, so an instance is feasible
/// iff the all-2 labeling is. That fails only for STRDP with an isolated
/// vertex.
pub fn is_instance_feasible(g: &Graph, kind: ProblemKind) -> bool {
    match kind {
        ProblemKind::Srdp => true,
        ProblemKind::Strdp => (0..g.num_vertices()).all(|v| g.degree(v) > 0),
    }
}

/// Per-vertex violations of a labeling, for diagnostics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Guard { vertex: usize },
    Sum { vertex: usize, sum: i64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Guard { vertex } => {
                write!(f, "vertex {vertex} is -1 with no neighbor labeled 2")
            }
            Violation::Sum { vertex, sum } => {
                write!(f, "vertex {vertex} has neighborhood sum {sum} < 1")
            }
        }
    }
}

pub fn violations(g: &Graph, z: &Assignment, kind: ProblemKind) -> Vec<Violation> {
    let mut out = Vec::new();
    for i in 0..g.num_vertices() {
        if !guard_condition_holds(g, z, i) {
            out.push(Violation::Guard { vertex: i });
        }
        let sum = neighborhood_sum(g, z, i, kind);
        if sum < 1 {
            out.push(Violation::Sum { vertex: i, sum });
        }
    }
    out
}
