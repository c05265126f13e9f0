//! Points of the LP relaxations and the change of variables between them.
//!
//! BVV to RR: `x'' = x' + y'`, `y'' = y'`. RR to BVV: `x' = x'' - y''`,
//! `y' = y''`. Both maps preserve the objective and send relaxed-feasible
//! points to relaxed-feasible points of the other formulation.

use rand::Rng;

use super::{BinaryPoint, Formulation, IlpModel, ModelError, FEAS_TOL};

#[derive(Debug, Clone, PartialEq)]
pub struct RelaxedPoint {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub formulation: Formulation,
}

impl RelaxedPoint {
    /// Validates lengths and that every coordinate is in `[0, 1]` up to
    /// [`FEAS_TOL`].
    pub fn new(x: Vec<f64>, y: Vec<f64>, formulation: Formulation) -> Result<Self, ModelError> {
        if x.len() != y.len() {
            return Err(ModelError::Dimension {
                expected: x.len(),
                got: y.len(),
            });
        }
        for (prefix, v) in [("x", &x), ("y", &y)] {
            if let Some((i, &value)) = v
                .iter()
                .enumerate()
                .find(|(_, &c)| !(-FEAS_TOL..=1.0 + FEAS_TOL).contains(&c))
            {
                return Err(ModelError::OutOfBox {
                    var: format!("{prefix}{i}"),
                    value,
                });
            }
        }
        Ok(RelaxedPoint { x, y, formulation })
    }

    pub fn from_binary(p: &BinaryPoint, formulation: Formulation) -> Self {
        let (x, y) = p.to_real();
        RelaxedPoint { x, y, formulation }
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    /// `sum (2x_i + y_i - 1)` for RR, `sum (2x_i + 3y_i - 1)` for BVV.
    pub fn objective(&self) -> f64 {
        let cy = match self.formulation {
            Formulation::Rr => 1.0,
            Formulation::Bvv => 3.0,
        };
        self.x
            .iter()
            .zip(&self.y)
            .map(|(x, y)| 2.0 * x + cy * y - 1.0)
            .sum()
    }

    /// Largest constraint or bound violation against `model` (relaxed).
    pub fn max_violation(&self, model: &IlpModel) -> Result<f64, ModelError> {
        let values: Vec<f64> = self.x.iter().chain(&self.y).copied().collect();
        if self.n() != model.n {
            return Err(ModelError::Dimension {
                expected: model.n,
                got: self.n(),
            });
        }
        let rows = model.constraints.iter().map(|c| c.violation(&values));
        let bounds = values.iter().map(|&v| (-v).max(v - 1.0).max(0.0));
        Ok(rows.chain(bounds).fold(0.0, f64::max))
    }
}

fn require_feasible(
    model: &IlpModel,
    p: &RelaxedPoint,
    want: Formulation,
) -> Result<(), ModelError> {
    for got in [model.tag.formulation, p.formulation] {
        if got != want {
            return Err(ModelError::WrongFormulation {
                expected: want,
                got,
            });
        }
    }
    let check = model.check_point(&p.x, &p.y, false)?;
    if !check.feasible {
        return Err(ModelError::Infeasible {
            formulation: want,
            count: check.violations.len(),
        });
    }
    Ok(())
}

/// `x'' = x' + y'`, `y'' = y'`. `bvv` is the BVV model the point must
/// satisfy (integrality is not checked).
pub fn map_bvv_to_rr(bvv: &IlpModel, p: &RelaxedPoint) -> Result<RelaxedPoint, ModelError> {
    require_feasible(bvv, p, Formulation::Bvv)?;
    Ok(RelaxedPoint {
        x: p.x.iter().zip(&p.y).map(|(x, y)| x + y).collect(),
        y: p.y.clone(),
        formulation: Formulation::Rr,
    })
}

/// `x' = x'' - y''`, `y' = y''`.
pub fn map_rr_to_bvv(rr: &IlpModel, p: &RelaxedPoint) -> Result<RelaxedPoint, ModelError> {
    require_feasible(rr, p, Formulation::Rr)?;
    Ok(RelaxedPoint {
        x: p.x.iter().zip(&p.y).map(|(x, y)| x - y).collect(),
        y: p.y.clone(),
        formulation: Formulation::Bvv,
    })
}

/// Draws points of a relaxed model's feasible region.
///
/// Each attempt picks one of three proposals at random and keeps it only if
/// it is feasible:
/// 1. uniform over the box cut by the exclusion constraints (`y <= x` for
///    RR, `x + y <= 1` for BVV),
/// 2. a random convex combination of the anchors (always feasible),
/// 3. a uniform point on the segment from a random anchor to a proposal of
///    kind 1.
///
/// Anchors are feasible points supplied by the caller, typically encodings
/// of feasible labelings.
pub struct RelaxedSampler {
    model: IlpModel,
    anchors: Vec<RelaxedPoint>,
}

impl RelaxedSampler {
    pub fn new(model: &IlpModel, anchors: Vec<RelaxedPoint>) -> Result<Self, ModelError> {
        let model = model.relaxed();
        for a in &anchors {
            require_feasible(&model, a, model.tag.formulation)?;
        }
        Ok(RelaxedSampler { model, anchors })
    }

    pub fn anchors(&self) -> &[RelaxedPoint] {
        &self.anchors
    }

    fn uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> RelaxedPoint {
        let n = self.model.n;
        let mut x = Vec::with_capacity(n);
        let mut y = Vec::with_capacity(n);
        for _ in 0..n {
            let (u, v): (f64, f64) = (rng.gen(), rng.gen());
            let (a, b) = match self.model.tag.formulation {
                Formulation::Rr => (u.max(v), u.min(v)),
                Formulation::Bvv if u + v > 1.0 => (1.0 - u, 1.0 - v),
                Formulation::Bvv => (u, v),
            };
            x.push(a);
            y.push(b);
        }
        RelaxedPoint {
            x,
            y,
            formulation: self.model.tag.formulation,
        }
    }

    fn combination<R: Rng + ?Sized>(&self, rng: &mut R) -> RelaxedPoint {
        let weights: Vec<f64> = self
            .anchors
            .iter()
            .map(|_| -rng.gen::<f64>().max(f64::MIN_POSITIVE).ln())
            .collect();
        let total: f64 = weights.iter().sum();
        let n = self.model.n;
        let mut x = vec![0.0; n];
        let mut y = vec![0.0; n];
        for (a, w) in self.anchors.iter().zip(&weights) {
            for i in 0..n {
                x[i] += w / total * a.x[i];
                y[i] += w / total * a.y[i];
            }
        }
        RelaxedPoint {
            x,
            y,
            formulation: self.model.tag.formulation,
        }
    }

    fn feasible(&self, p: &RelaxedPoint) -> bool {
        self.model
            .check_point(&p.x, &p.y, false)
            .map(|c| c.feasible)
            .unwrap_or(false)
    }

    /// One feasible point, or `None` after `max_attempts` rejections.
    pub fn sample<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        max_attempts: usize,
    ) -> Option<RelaxedPoint> {
        for _ in 0..max_attempts {
            let mode = if self.anchors.is_empty() {
                0
            } else {
                rng.gen_range(0..3)
            };
            let candidate = match mode {
                0 => self.uniform(rng),
                1 => self.combination(rng),
                _ => {
                    let a = &self.anchors[rng.gen_range(0..self.anchors.len())];
                    let r = self.uniform(rng);
                    let t: f64 = rng.gen();
                    let lerp = |p: &[f64], q: &[f64]| {
                        p.iter().zip(q).map(|(p, q)| p + t * (q - p)).collect()
                    };
                    RelaxedPoint {
                        x: lerp(&a.x, &r.x),
                        y: lerp(&a.y, &r.y),
                        formulation: a.formulation,
                    }
                }
            };
            if self.feasible(&candidate) {
                return Some(candidate);
            }
        }
        None
    }
}
