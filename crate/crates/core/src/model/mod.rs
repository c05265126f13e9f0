//! Solver-neutral ILP models for the RR and BVV formulations, the CP model,
//! their text emitters, and the mapping between the LP relaxations.
//!
//! Variables are always ordered `x_0..x_{n-1}, y_0..y_{n-1}`; `x_i` has
//! index `i` and `y_i` has index `n + i`. Constraints come in three
//! families of `n` each, emitted family by family:
//!
//! | family | name   | RR                              | BVV                                       |
//! |--------|--------|---------------------------------|-------------------------------------------|
//! | `e`    | `ce<i>`| `x_i - y_i >= 0`                | `x_i + y_i <= 1`                          |
//! | `g`    | `cg<i>`| `x_i + sum_{N(i)} y_j >= 1`     | `x_i + y_i + sum_{N(i)} y_j >= 1`         |
//! | `s`    | `cs<i>`| `sum_S (2x_j + y_j) >= 1 + |S|` | `sum_S (2x_j + 3y_j) >= 1 + |S|`          |
//!
//! where `S` is `N[i]` for SRDP and `N(i)` for STRDP. The `-1` per vertex
//! of the sum constraints is folded into the right-hand side; the
//! objective keeps its constant `-n` in [`LinExpr::constant`].

mod cp;
mod enumerate;
mod lp;
mod mps;
mod relax;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::domination::{Assignment, ProblemKind};
use crate::graph::Graph;

pub use cp::{build_cp, emit_cp, CpModel, GuardClause, SumClause};
pub use enumerate::minimize_binary;
pub use lp::{emit_lp, parse_lp};
pub use mps::{emit_mps, parse_mps};
pub use relax::{map_bvv_to_rr, map_rr_to_bvv, RelaxedPoint, RelaxedSampler};

/// Absolute tolerance for continuous feasibility checks.
pub const FEAS_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("dimension mismatch: model has {expected} vertices, point has {got}")]
    Dimension { expected: usize, got: usize },
    #[error("vertex {vertex}: (x, y) = ({x}, {y}) is excluded by the {formulation} formulation")]
    InvalidPair {
        vertex: usize,
        x: bool,
        y: bool,
        formulation: Formulation,
    },
    #[error("expected a {expected} point/model, got {got}")]
    WrongFormulation {
        expected: Formulation,
        got: Formulation,
    },
    #[error("point violates {count} constraint(s) of the relaxed {formulation} model")]
    Infeasible {
        formulation: Formulation,
        count: usize,
    },
    #[error("coordinate {value} of {var} lies outside [0, 1]")]
    OutOfBox { var: String, value: f64 },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("model has {vars} variables, enumeration is limited to {max}")]
    TooLarge { vars: usize, max: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Formulation {
    /// `x_i = [f(i) >= 1]`, `y_i = [f(i) = 2]`.
    Rr,
    /// `x_i = [f(i) = 1]`, `y_i = [f(i) = 2]`.
    Bvv,
}

impl Formulation {
    pub fn name(self) -> &'static str {
        match self {
            Formulation::Rr => "rr",
            Formulation::Bvv => "bvv",
        }
    }
}

impl fmt::Display for Formulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Formulation {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "rr" => Ok(Formulation::Rr),
            "bvv" => Ok(Formulation::Bvv),
            _ => Err(ModelError::Parse {
                line: 0,
                msg: format!("unknown formulation `{s}`"),
            }),
        }
    }
}

/// Formulation and problem a model was built for, written as `rr-srdp`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModelTag {
    pub formulation: Formulation,
    pub kind: ProblemKind,
}

impl fmt::Display for ModelTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.formulation, self.kind)
    }
}

impl FromStr for ModelTag {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ModelError::Parse {
            line: 0,
            msg: format!("unknown model tag `{s}`"),
        };
        let (f, k) = s.split_once('-').ok_or_else(bad)?;
        Ok(ModelTag {
            formulation: f.parse().map_err(|_| bad())?,
            kind: k.parse().map_err(|_| bad())?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Binary,
    /// Continuous in `[0, 1]`.
    Continuous,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Ge,
    Le,
}

impl Sense {
    pub fn symbol(self) -> &'static str {
        match self {
            Sense::Ge => ">=",
            Sense::Le => "<=",
        }
    }
}

/// Sparse linear expression; terms are `(variable index, coefficient)`
/// sorted by index.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LinExpr {
    pub terms: Vec<(usize, f64)>,
    pub constant: f64,
}

impl LinExpr {
    pub fn eval(&self, values: &[f64]) -> f64 {
        self.constant + self.terms.iter().map(|&(v, c)| c * values[v]).sum::<f64>()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub name: String,
    pub terms: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

impl Constraint {
    pub fn lhs(&self, values: &[f64]) -> f64 {
        self.terms.iter().map(|&(v, c)| c * values[v]).sum()
    }

    /// Signed amount by which the constraint is violated (0 when satisfied).
    pub fn violation(&self, values: &[f64]) -> f64 {
        let lhs = self.lhs(values);
        match self.sense {
            Sense::Ge => (self.rhs - lhs).max(0.0),
            Sense::Le => (lhs - self.rhs).max(0.0),
        }
    }
}

/// A minimization model over `2n` variables in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct IlpModel {
    pub tag: ModelTag,
    pub n: usize,
    pub variables: Vec<Variable>,
    pub objective: LinExpr,
    pub constraints: Vec<Constraint>,
}

/// A violated requirement reported by [`IlpModel::check_point`].
#[derive(Debug, Clone, PartialEq)]
pub enum PointViolation {
    Constraint {
        name: String,
        lhs: f64,
        sense: Sense,
        rhs: f64,
    },
    Bound {
        var: String,
        value: f64,
    },
    Integrality {
        var: String,
        value: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointCheck {
    pub feasible: bool,
    pub violations: Vec<PointViolation>,
    /// Objective including the constant term.
    pub objective: f64,
}

impl IlpModel {
    pub fn x(&self, i: usize) -> usize {
        i
    }

    pub fn y(&self, i: usize) -> usize {
        self.n + i
    }

    /// The LP relaxation: every variable continuous in `[0, 1]`.
    pub fn relaxed(&self) -> IlpModel {
        let mut m = self.clone();
        for v in &mut m.variables {
            v.kind = VarKind::Continuous;
        }
        m
    }

    fn stack(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>, ModelError> {
        for len in [x.len(), y.len()] {
            if len != self.n {
                return Err(ModelError::Dimension {
                    expected: self.n,
                    got: len,
                });
            }
        }
        Ok(x.iter().chain(y).copied().collect())
    }

    /// Checks a point against bounds and constraints with tolerance
    /// [`FEAS_TOL`]; `integral` additionally requires binary variables to
    /// be within tolerance of 0 or 1.
    pub fn check_point(
        &self,
        x: &[f64],
        y: &[f64],
        integral: bool,
    ) -> Result<PointCheck, ModelError> {
        let values = self.stack(x, y)?;
        let mut violations = Vec::new();
        for (var, &value) in self.variables.iter().zip(&values) {
            if !(-FEAS_TOL..=1.0 + FEAS_TOL).contains(&value) {
                violations.push(PointViolation::Bound {
                    var: var.name.clone(),
                    value,
                });
            } else if integral
                && var.kind == VarKind::Binary
                && value.abs() > FEAS_TOL
                && (value - 1.0).abs() > FEAS_TOL
            {
                violations.push(PointViolation::Integrality {
                    var: var.name.clone(),
                    value,
                });
            }
        }
        for c in &self.constraints {
            if c.violation(&values) > FEAS_TOL {
                violations.push(PointViolation::Constraint {
                    name: c.name.clone(),
                    lhs: c.lhs(&values),
                    sense: c.sense,
                    rhs: c.rhs,
                });
            }
        }
        Ok(PointCheck {
            feasible: violations.is_empty(),
            objective: self.objective.eval(&values),
            violations,
        })
    }
}

/// Constraint-sum members of vertex `i`: N(i), plus `i` itself for SRDP.
fn sum_members(g: &Graph, i: usize, kind: ProblemKind) -> Vec<usize> {
    let mut members = g.neighbors(i).to_vec();
    if kind.includes_self() {
        let pos = members.partition_point(|&j| j < i);
        members.insert(pos, i);
    }
    members
}

fn build(g: &Graph, tag: ModelTag) -> IlpModel {
    let n = g.num_vertices();
    let x = |i: usize| i;
    let y = |i: usize| n + i;
    let y_obj = match tag.formulation {
        Formulation::Rr => 1.0,
        Formulation::Bvv => 3.0,
    };

    let variables = ["x", "y"]
        .iter()
        .flat_map(|p| {
            (0..n).map(move |i| Variable {
                name: format!("{p}{i}"),
                kind: VarKind::Binary,
            })
        })
        .collect();

    let objective = LinExpr {
        terms: (0..n)
            .map(|i| (x(i), 2.0))
            .chain((0..n).map(|i| (y(i), y_obj)))
            .collect(),
        constant: -(n as f64),
    };

    let mut constraints = Vec::with_capacity(3 * n);
    for i in 0..n {
        constraints.push(match tag.formulation {
            Formulation::Rr => Constraint {
                name: format!("ce{i}"),
                terms: vec![(x(i), 1.0), (y(i), -1.0)],
                sense: Sense::Ge,
                rhs: 0.0,
            },
            Formulation::Bvv => Constraint {
                name: format!("ce{i}"),
                terms: vec![(x(i), 1.0), (y(i), 1.0)],
                sense: Sense::Le,
                rhs: 1.0,
            },
        });
    }
    for i in 0..n {
        let mut guards: Vec<usize> = g.neighbors(i).to_vec();
        if tag.formulation == Formulation::Bvv {
            guards = sum_members(g, i, ProblemKind::Srdp);
        }
        let terms = std::iter::once((x(i), 1.0))
            .chain(guards.into_iter().map(|j| (y(j), 1.0)))
            .collect();
        constraints.push(Constraint {
            name: format!("cg{i}"),
            terms,
            sense: Sense::Ge,
            rhs: 1.0,
        });
    }
    for i in 0..n {
        let members = sum_members(g, i, tag.kind);
        let terms = members
            .iter()
            .map(|&j| (x(j), 2.0))
            .chain(members.iter().map(|&j| (y(j), y_obj)))
            .collect();
        constraints.push(Constraint {
            name: format!("cs{i}"),
            terms,
            sense: Sense::Ge,
            rhs: 1.0 + members.len() as f64,
        });
    }
    IlpModel {
        tag,
        n,
        variables,
        objective,
        constraints,
    }
}

/// RR model: minimize `sum (2x_i + y_i - 1)`.
pub fn build_rr(g: &Graph, kind: ProblemKind) -> IlpModel {
    build(
        g,
        ModelTag {
            formulation: Formulation::Rr,
            kind,
        },
    )
}

/// BVV model: minimize `sum (2x_i + 3y_i - 1)`.
pub fn build_bvv(g: &Graph, kind: ProblemKind) -> IlpModel {
    build(
        g,
        ModelTag {
            formulation: Formulation::Bvv,
            kind,
        },
    )
}

pub fn build_ilp(g: &Graph, formulation: Formulation, kind: ProblemKind) -> IlpModel {
    build(g, ModelTag { formulation, kind })
}

/// A 0/1 point split into its `x` and `y` halves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryPoint {
    pub x: Vec<bool>,
    pub y: Vec<bool>,
}

impl BinaryPoint {
    pub fn to_real(&self) -> (Vec<f64>, Vec<f64>) {
        let conv = |v: &[bool]| v.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
        (conv(&self.x), conv(&self.y))
    }
}

/// RR: -1 -> (0,0), 1 -> (1,0), 2 -> (1,1).
/// BVV: -1 -> (0,0), 1 -> (1,0), 2 -> (0,1).
pub fn encode_assignment(z: &Assignment, formulation: Formulation) -> BinaryPoint {
    let (x, y) = z
        .values()
        .iter()
        .map(|&v| match (formulation, v) {
            (_, -1) => (false, false),
            (_, 1) => (true, false),
            (Formulation::Rr, _) => (true, true),
            (Formulation::Bvv, _) => (false, true),
        })
        .unzip();
    BinaryPoint { x, y }
}

/// Inverse of [`encode_assignment`]. Fails on the pair the formulation
/// excludes: (0,1) for RR, (1,1) for BVV.
pub fn decode_point(p: &BinaryPoint, formulation: Formulation) -> Result<Assignment, ModelError> {
    if p.x.len() != p.y.len() {
        return Err(ModelError::Dimension {
            expected: p.x.len(),
            got: p.y.len(),
        });
    }
    let values =
        p.x.iter()
            .zip(&p.y)
            .enumerate()
            .map(|(vertex, (&x, &y))| match (formulation, x, y) {
                (_, false, false) => Ok(-1),
                (_, true, false) => Ok(1),
                (Formulation::Rr, true, true) | (Formulation::Bvv, false, true) => Ok(2),
                _ => Err(ModelError::InvalidPair {
                    vertex,
                    x,
                    y,
                    formulation,
                }),
            })
            .collect::<Result<Vec<i8>, _>>()?;
    Ok(Assignment::new(values).expect("decoded labels are valid"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domination::{is_feasible, weight};
    use crate::exact::brute_force;
    use crate::graph::{example_graph, generate_random};
    use proptest::prelude::*;

    fn z(values: &[i8]) -> Assignment {
        Assignment::new(values.to_vec()).unwrap()
    }

    fn check(m: &IlpModel, z: &Assignment) -> PointCheck {
        let (x, y) = encode_assignment(z, m.tag.formulation).to_real();
        m.check_point(&x, &y, true).unwrap()
    }

    #[test]
    fn model_shapes() {
        let g = example_graph();
        for kind in ProblemKind::BOTH {
            for m in [build_rr(&g, kind), build_bvv(&g, kind)] {
                assert_eq!(m.variables.len(), 12);
                assert!(m.variables.iter().all(|v| v.kind == VarKind::Binary));
                assert_eq!(m.constraints.len(), 18);
                assert_eq!(m.objective.constant, -6.0);
                for c in &m.constraints {
                    assert!(c.terms.windows(2).all(|w| w[0].0 < w[1].0), "{}", c.name);
                }
            }
        }
        let m = build_rr(&g, ProblemKind::Srdp);
        assert_eq!(m.variables[0].name, "x0");
        assert_eq!(m.variables[6].name, "y0");
        // vertex A: N[A] = {A, B, F}
        let cs0 = &m.constraints[12];
        assert_eq!(cs0.name, "cs0");
        assert_eq!(
            cs0.terms,
            vec![(0, 2.0), (1, 2.0), (5, 2.0), (6, 1.0), (7, 1.0), (11, 1.0)]
        );
        assert_eq!(cs0.rhs, 4.0);
        let bvv = build_bvv(&g, ProblemKind::Strdp);
        assert_eq!(
            bvv.constraints[6].terms,
            vec![(0, 1.0), (6, 1.0), (7, 1.0), (11, 1.0)]
        );
        assert_eq!(
            bvv.constraints[12].terms,
            vec![(1, 2.0), (5, 2.0), (7, 3.0), (11, 3.0)]
        );
    }

    #[test]
    fn k1_models() {
        let k1 = Graph::empty(1);
        let rr = build_rr(&k1, ProblemKind::Srdp);
        // the four binary points of K1
        let mut feasible = Vec::new();
        for (x, y) in [(0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (1.0, 1.0)] {
            let c = rr.check_point(&[x], &[y], true).unwrap();
            if c.feasible {
                feasible.push((c.objective, x, y));
            }
        }
        feasible.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(feasible[0], (1.0, 1.0, 0.0));

        for m in [
            build_rr(&k1, ProblemKind::Strdp),
            build_bvv(&k1, ProblemKind::Strdp),
        ] {
            assert_eq!(minimize_binary(&m, 24).unwrap(), None);
        }
    }

    #[test]
    fn k2_bvv_optimum() {
        let m = build_bvv(&Graph::complete(2), ProblemKind::Srdp);
        let (value, _) = minimize_binary(&m, 24).unwrap().unwrap();
        assert_eq!(value, 1.0);
        assert_eq!(
            brute_force(&Graph::complete(2), ProblemKind::Srdp, 15)
                .unwrap()
                .best_value,
            Some(1)
        );
    }

    #[test]
    fn encode_decode_pairs() {
        let p = encode_assignment(&z(&[2, 1, -1]), Formulation::Rr);
        assert_eq!((p.x[0], p.y[0]), (true, true));
        assert_eq!((p.x[2], p.y[2]), (false, false));
        let p = encode_assignment(&z(&[2, 1, -1]), Formulation::Bvv);
        assert_eq!((p.x[0], p.y[0]), (false, true));
        assert_eq!((p.x[1], p.y[1]), (true, false));

        let one = BinaryPoint {
            x: vec![true],
            y: vec![false],
        };
        assert_eq!(decode_point(&one, Formulation::Rr).unwrap(), z(&[1]));
        let two = BinaryPoint {
            x: vec![false],
            y: vec![true],
        };
        assert_eq!(decode_point(&two, Formulation::Bvv).unwrap(), z(&[2]));
        assert!(matches!(
            decode_point(&two, Formulation::Rr),
            Err(ModelError::InvalidPair { vertex: 0, .. })
        ));
        let both = BinaryPoint {
            x: vec![true],
            y: vec![true],
        };
        assert!(decode_point(&both, Formulation::Bvv).is_err());
    }

    #[test]
    fn check_point_cases() {
        let g = example_graph();
        let rr = build_rr(&g, ProblemKind::Srdp);
        let c = check(&rr, &z(&[-1, 2, -1, -1, 1, 2]));
        assert!(c.feasible);
        assert_eq!(c.objective, 2.0);

        let zeros = vec![0.0; 6];
        let c = rr.check_point(&zeros, &zeros, true).unwrap();
        assert!(!c.feasible);
        assert!(c
            .violations
            .iter()
            .any(|v| matches!(v, PointViolation::Constraint { name, .. } if name == "cg0")));

        let c = check(&rr, &z(&[-1, -1, -1, -1, -1, -1]));
        assert!(!c.feasible && !c.violations.is_empty());

        assert_eq!(
            rr.check_point(&[0.0; 5], &zeros, false),
            Err(ModelError::Dimension {
                expected: 6,
                got: 5
            })
        );

        let mut half = vec![1.0; 6];
        half[0] = 0.5;
        let mut ys = vec![1.0; 6];
        ys[0] = 0.0;
        let c = rr.check_point(&half, &ys, true).unwrap();
        assert!(matches!(
            c.violations[..],
            [PointViolation::Integrality { .. }]
        ));
        assert!(rr.check_point(&half, &ys, false).unwrap().feasible);
        half[0] = 1.5;
        let c = rr.check_point(&half, &ys, false).unwrap();
        assert!(matches!(c.violations[0], PointViolation::Bound { .. }));
    }

    fn label() -> impl Strategy<Value = i8> {
        prop::sample::select(vec![-1i8, 1, 2])
    }

    proptest! {
        #[test]
        fn encoding_is_sound_and_preserves_weight(
            seed: u64,
            n in 1usize..9,
            values in prop::collection::vec(label(), 8),
        ) {
            let g = generate_random(n, 0.4, seed).unwrap();
            let za = z(&values[..n]);
            for f in [Formulation::Rr, Formulation::Bvv] {
                let p = encode_assignment(&za, f);
                prop_assert_eq!(decode_point(&p, f).unwrap(), za.clone());
                for kind in ProblemKind::BOTH {
                    let c = check(&build_ilp(&g, f, kind), &za);
                    prop_assert_eq!(c.feasible, is_feasible(&g, &za, kind));
                    prop_assert_eq!(c.objective, weight(&za) as f64);
                }
            }
        }
    }
}
