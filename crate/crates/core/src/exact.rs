//! Exact solvers: exhaustive enumeration over {-1, 1, 2}^n and a
//! depth-first branch-and-bound with feasibility propagation.

use std::fmt;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::domination::{is_feasible, is_instance_feasible, weight, Assignment, ProblemKind};
use crate::graph::Graph;

/// Largest graph [`brute_force`] accepts by default (3^15 ~ 14M labelings).
pub const DEFAULT_BRUTE_FORCE_MAX_N: usize = 15;

const LADDER: [i8; 3] = [-1, 1, 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolveStatus {
    Optimal,
    Feasible,
    Infeasible,
    Timeout,
}

impl SolveStatus {
    pub fn name(self) -> &'static str {
        match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::Feasible => "feasible",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::Timeout => "timeout",
        }
    }
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Outcome of a solver run. `best_value` and `best_assignment` are present
/// exactly when the status is `Optimal` or `Feasible`, and then the
/// assignment is feasible with weight `best_value`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub best_value: Option<i64>,
    pub best_assignment: Option<Assignment>,
    /// Search nodes (exact methods) or iterations (VNS).
    pub counter: u64,
    pub elapsed: Duration,
}

impl SolveResult {
    pub(crate) fn with_solution(
        status: SolveStatus,
        z: Assignment,
        counter: u64,
        elapsed: Duration,
    ) -> Self {
        SolveResult {
            status,
            best_value: Some(weight(&z)),
            best_assignment: Some(z),
            counter,
            elapsed,
        }
    }

    pub(crate) fn without_solution(status: SolveStatus, counter: u64, elapsed: Duration) -> Self {
        SolveResult {
            status,
            best_value: None,
            best_assignment: None,
            counter,
            elapsed,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("graph has {n} vertices, exhaustive enumeration is limited to {max_n}")]
    TooLarge { n: usize, max_n: usize },
}

/// Enumerates every labeling in lexicographic order (vertex 0 most
/// significant, -1 < 1 < 2) and keeps the first one of minimum weight.
pub fn brute_force(g: &Graph, kind: ProblemKind, max_n: usize) -> Result<SolveResult, ExactError> {
    let start = Instant::now();
    let n = g.num_vertices();
    if n > max_n {
        return Err(ExactError::TooLarge { n, max_n });
    }
    let mut digits = vec![0usize; n];
    let mut z = Assignment::uniform(n, -1);
    let mut w = -(n as i64);
    let mut best: Option<(i64, Assignment)> = None;
    let mut visited: u64 = 0;
    loop {
        visited += 1;
        if best.as_ref().is_none_or(|(b, _)| w < *b) && is_feasible(g, &z, kind) {
            best = Some((w, z.clone()));
        }
        // odometer, last vertex fastest
        let mut pos = n;
        loop {
            if pos == 0 {
                let elapsed = start.elapsed();
                return Ok(match best {
                    Some((_, z)) => {
                        SolveResult::with_solution(SolveStatus::Optimal, z, visited, elapsed)
                    }
                    None => {
                        SolveResult::without_solution(SolveStatus::Infeasible, visited, elapsed)
                    }
                });
            }
            pos -= 1;
            let old = LADDER[digits[pos]];
            digits[pos] = (digits[pos] + 1) % 3;
            let new = LADDER[digits[pos]];
            z.set(pos, new);
            w += i64::from(new - old);
            if digits[pos] != 0 {
                break;
            }
        }
    }
}

/// Depth-first branch-and-bound.
///
/// Vertices are branched in descending degree order (ties by index) with
/// values tried as -1, 1, 2. A node is pruned when
/// * `partial weight - unassigned count >= incumbent`,
/// * some vertex cannot reach a sum of 1 even if every unassigned vertex in
///   its neighborhood takes 2, or
/// * some vertex labeled -1 has all neighbors assigned and none is 2.
///
/// Only strictly better incumbents are kept, so the reported optimum is the
/// lexicographically smallest one in branching order.
pub fn branch_and_bound(g: &Graph, kind: ProblemKind, time_limit: Duration) -> SolveResult {
    let start = Instant::now();
    if !is_instance_feasible(g, kind) {
        return SolveResult::without_solution(SolveStatus::Infeasible, 0, start.elapsed());
    }
    let mut search = Search::new(g, kind, start, time_limit);
    search.descend(0);
    let elapsed = start.elapsed();
    let nodes = search.nodes;
    match (search.incumbent, search.timed_out) {
        (Some((_, z)), false) => {
            SolveResult::with_solution(SolveStatus::Optimal, z, nodes, elapsed)
        }
        (Some((_, z)), true) => {
            SolveResult::with_solution(SolveStatus::Feasible, z, nodes, elapsed)
        }
        (None, true) => SolveResult::without_solution(SolveStatus::Timeout, nodes, elapsed),
        (None, false) => SolveResult::without_solution(SolveStatus::Infeasible, nodes, elapsed),
    }
}

struct Search<'g> {
    g: &'g Graph,
    kind: ProblemKind,
    order: Vec<usize>,
    /// 0 while unassigned.
    value: Vec<i8>,
    /// Assigned part of each vertex's constraint sum.
    sum: Vec<i64>,
    /// Unassigned vertices inside each constraint sum.
    open_in_sum: Vec<usize>,
    twos: Vec<usize>,
    unassigned_neighbors: Vec<usize>,
    partial: i64,
    incumbent: Option<(i64, Assignment)>,
    nodes: u64,
    start: Instant,
    limit: Duration,
    timed_out: bool,
}

impl<'g> Search<'g> {
    fn new(g: &'g Graph, kind: ProblemKind, start: Instant, limit: Duration) -> Self {
        let n = g.num_vertices();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
        let self_term = usize::from(kind.includes_self());
        Search {
            g,
            kind,
            order,
            value: vec![0; n],
            sum: vec![0; n],
            open_in_sum: (0..n).map(|v| g.degree(v) + self_term).collect(),
            twos: vec![0; n],
            unassigned_neighbors: (0..n).map(|v| g.degree(v)).collect(),
            partial: 0,
            incumbent: None,
            nodes: 0,
            start,
            limit,
            timed_out: false,
        }
    }

    fn assign(&mut self, v: usize, x: i8) {
        self.value[v] = x;
        self.partial += i64::from(x);
        for &j in self.g.neighbors(v) {
            self.sum[j] += i64::from(x);
            self.open_in_sum[j] -= 1;
            self.unassigned_neighbors[j] -= 1;
            if x == 2 {
                self.twos[j] += 1;
            }
        }
        if self.kind.includes_self() {
            self.sum[v] += i64::from(x);
            self.open_in_sum[v] -= 1;
        }
    }

    fn unassign(&mut self, v: usize) {
        let x = self.value[v];
        self.value[v] = 0;
        self.partial -= i64::from(x);
        for &j in self.g.neighbors(v) {
            self.sum[j] -= i64::from(x);
            self.open_in_sum[j] += 1;
            self.unassigned_neighbors[j] += 1;
            if x == 2 {
                self.twos[j] -= 1;
            }
        }
        if self.kind.includes_self() {
            self.sum[v] -= i64::from(x);
            self.open_in_sum[v] += 1;
        }
    }

    fn vertex_ok(&self, i: usize) -> bool {
        let reachable = self.sum[i] + 2 * self.open_in_sum[i] as i64;
        let guard_dead =
            self.value[i] == -1 && self.twos[i] == 0 && self.unassigned_neighbors[i] == 0;
        reachable >= 1 && !guard_dead
    }

    fn consistent_around(&self, v: usize) -> bool {
        self.vertex_ok(v) && self.g.neighbors(v).iter().all(|&j| self.vertex_ok(j))
    }

    fn descend(&mut self, depth: usize) {
        self.nodes += 1;
        if self.nodes.is_multiple_of(4096) && self.start.elapsed() >= self.limit {
            self.timed_out = true;
        }
        if self.timed_out {
            return;
        }
        let remaining = (self.order.len() - depth) as i64;
        if let Some((best, _)) = &self.incumbent {
            if self.partial - remaining >= *best {
                return;
            }
        }
        if depth == self.order.len() {
            let z = Assignment::new(self.value.clone()).expect("complete labeling");
            debug_assert!(is_feasible(self.g, &z, self.kind));
            self.incumbent = Some((self.partial, z));
            return;
        }
        let v = self.order[depth];
        for x in LADDER {
            self.assign(v, x);
            if self.consistent_around(v) {
                self.descend(depth + 1);
            }
            self.unassign(v);
            if self.timed_out {
                return;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{example_graph, generate_grid, generate_random};

    const MINUTE: Duration = Duration::from_secs(60);

    fn value(r: &SolveResult) -> Option<i64> {
        r.best_value
    }

    #[test]
    fn brute_force_small_cases() {
        let g = example_graph();
        let srdp = brute_force(&g, ProblemKind::Srdp, 15).unwrap();
        assert_eq!((srdp.status, value(&srdp)), (SolveStatus::Optimal, Some(2)));
        let strdp = brute_force(&g, ProblemKind::Strdp, 15).unwrap();
        assert_eq!(
            (strdp.status, value(&strdp)),
            (SolveStatus::Optimal, Some(4))
        );
        assert_eq!(strdp.counter, 729);

        let k1 = brute_force(&Graph::empty(1), ProblemKind::Strdp, 15).unwrap();
        assert_eq!(k1.status, SolveStatus::Infeasible);
        assert!(k1.best_assignment.is_none() && k1.best_value.is_none());

        let k2 = brute_force(&Graph::complete(2), ProblemKind::Srdp, 15).unwrap();
        assert_eq!(k2.best_value, Some(1));
        assert_eq!(k2.best_assignment.unwrap().values(), &[-1, 2]);

        let k3 = brute_force(&Graph::complete(3), ProblemKind::Strdp, 15).unwrap();
        assert_eq!(k3.best_value, Some(3));
    }

    #[test]
    fn brute_force_size_guard() {
        assert_eq!(
            brute_force(
                &Graph::empty(16),
                ProblemKind::Srdp,
                DEFAULT_BRUTE_FORCE_MAX_N
            ),
            Err(ExactError::TooLarge { n: 16, max_n: 15 })
        );
    }

    #[test]
    fn branch_and_bound_small_cases() {
        let r = branch_and_bound(&example_graph(), ProblemKind::Srdp, MINUTE);
        assert_eq!((r.status, r.best_value), (SolveStatus::Optimal, Some(2)));
        let r = branch_and_bound(&example_graph(), ProblemKind::Strdp, MINUTE);
        assert_eq!((r.status, r.best_value), (SolveStatus::Optimal, Some(4)));

        let grid = generate_grid(3, 3).unwrap();
        let bb = branch_and_bound(&grid, ProblemKind::Srdp, MINUTE);
        let bf = brute_force(&grid, ProblemKind::Srdp, 15).unwrap();
        assert_eq!(bb.best_value, bf.best_value);
        assert_eq!(bb.status, SolveStatus::Optimal);

        let r = branch_and_bound(&Graph::empty(1), ProblemKind::Strdp, MINUTE);
        assert_eq!(r.status, SolveStatus::Infeasible);
        assert!(r.best_assignment.is_none());
    }

    #[test]
    fn branch_and_bound_times_out() {
        let g = generate_grid(12, 12).unwrap();
        let r = branch_and_bound(&g, ProblemKind::Srdp, Duration::from_millis(30));
        assert!(matches!(
            r.status,
            SolveStatus::Feasible | SolveStatus::Timeout
        ));
        if let Some(z) = &r.best_assignment {
            assert!(is_feasible(&g, z, ProblemKind::Srdp));
            assert_eq!(r.best_value, Some(weight(z)));
        }
    }

    #[test]
    fn branch_and_bound_matches_brute_force_on_random_graphs() {
        for seed in 0..40u64 {
            let n = 3 + (seed as usize % 8);
            let g = generate_random(n, 0.35, seed).unwrap();
            for kind in ProblemKind::BOTH {
                let bb = branch_and_bound(&g, kind, MINUTE);
                let bf = brute_force(&g, kind, 15).unwrap();
                assert_eq!(bb.best_value, bf.best_value, "seed {seed} {kind}");
                if let Some(z) = &bb.best_assignment {
                    assert!(is_feasible(&g, z, kind));
                }
            }
        }
    }

    #[test]
    fn objective_bound_is_sound() {
        // partial weight - unassigned count never exceeds the weight of any
        // completion, in particular of every feasible one.
        let g = generate_random(7, 0.5, 3).unwrap();
        let bf = brute_force(&g, ProblemKind::Srdp, 15).unwrap();
        let opt = bf.best_assignment.unwrap();
        for depth in 0..=7 {
            let partial: i64 = opt.values()[..depth].iter().map(|&v| i64::from(v)).sum();
            assert!(partial - (7 - depth) as i64 <= weight(&opt));
        }
    }
}
