use super::{IlpModel, ModelError, Sense, FEAS_TOL};

/// Minimizes a model over all `2^(2n)` binary points by walking a reflected
/// Gray code, so each step flips one variable and updates only the rows it
/// touches. Returns the optimum and a minimizing point, or `None` when no
/// binary point is feasible.
pub fn minimize_binary(
    model: &IlpModel,
    max_vars: usize,
) -> Result<Option<(f64, Vec<f64>)>, ModelError> {
    let vars = model.variables.len();
    if vars > max_vars || vars >= 63 {
        return Err(ModelError::TooLarge {
            vars,
            max: max_vars.min(62),
        });
    }
    let mut columns: Vec<Vec<(usize, f64)>> = vec![Vec::new(); vars];
    for (row, c) in model.constraints.iter().enumerate() {
        for &(v, coef) in &c.terms {
            columns[v].push((row, coef));
        }
    }
    let mut obj_coef = vec![0.0; vars];
    for &(v, coef) in &model.objective.terms {
        obj_coef[v] += coef;
    }
    let holds = |row: usize, lhs: f64| {
        let c = &model.constraints[row];
        match c.sense {
            Sense::Ge => lhs >= c.rhs - FEAS_TOL,
            Sense::Le => lhs <= c.rhs + FEAS_TOL,
        }
    };

    let mut point = vec![0.0; vars];
    let mut lhs = vec![0.0; model.constraints.len()];
    let mut violated = (0..lhs.len()).filter(|&r| !holds(r, 0.0)).count();
    let mut objective = model.objective.constant;
    let mut best: Option<(f64, Vec<f64>)> = None;

    let total: u64 = 1 << vars;
    for step in 0..total {
        if step > 0 {
            let v = step.trailing_zeros() as usize;
            let delta = if point[v] == 0.0 { 1.0 } else { -1.0 };
            point[v] += delta;
            objective += delta * obj_coef[v];
            for &(row, coef) in &columns[v] {
                let before = holds(row, lhs[row]);
                lhs[row] += delta * coef;
                match (before, holds(row, lhs[row])) {
                    (true, false) => violated += 1,
                    (false, true) => violated -= 1,
                    _ => {}
                }
            }
        }
        if violated == 0 && best.as_ref().is_none_or(|(b, _)| objective < *b) {
            best = Some((objective, point.clone()));
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domination::ProblemKind;
    use crate::graph::Graph;
    use crate::model::build_rr;

    #[test]
    fn optimum_point_is_feasible() {
        let m = build_rr(&Graph::complete(3), ProblemKind::Strdp);
        let (value, point) = minimize_binary(&m, 24).unwrap().unwrap();
        let (x, y) = point.split_at(3);
        let check = m.check_point(x, y, true).unwrap();
        assert!(check.feasible);
        assert_eq!(check.objective, value);
        assert_eq!(value, 3.0);
    }

    #[test]
    fn size_limit() {
        let m = build_rr(&Graph::empty(13), ProblemKind::Srdp);
        assert!(matches!(
            minimize_binary(&m, 24),
            Err(ModelError::TooLarge { vars: 26, .. })
        ));
    }
}
