//! Variable neighborhood search over labelings, guided by a penalty that
//! lets slightly infeasible labelings compete with feasible ones.
//!
//! For a labeling `z` on `n` vertices:
//!
//! * `f1`: vertices labeled -1 with no neighbor labeled 2,
//! * `f2`: `sum_i max(0, 1 - s(i))` where `s(i)` is the closed (SRDP) or
//!   open (STRDP) neighborhood sum,
//! * `f3 = (w(z) + n) / (3n)`, the weight scaled onto `[0, 1]`,
//! * `pen = (1 + f1)(1 + f2) - 1 + f3`.
//!
//! Feasible labelings have `pen = f3 <= 1` and infeasible ones `pen >= 1 + f3`,
//! so every feasible labeling beats every infeasible one. Comparisons use
//! the exact integer key `((1 + f1)(1 + f2) - 1) * 3n + w + n`, which orders
//! labelings like `pen` without rounding.
//!
//! All random choices of a run come from one generator seeded with
//! [`VnsParams::seed`], drawn in this order: initialization (vertex, then
//! label), then per iteration the shake picks (increment vertex, then
//! decrement vertex, per pair) and the movement coin, which is only drawn
//! on ties.

use std::fmt;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::domination::{
    guard_condition_holds, is_instance_feasible, neighborhood_sum, step_down, step_up, weight,
    Assignment, ProblemKind,
};
use crate::exact::{SolveResult, SolveStatus};
use crate::graph::Graph;

pub const DEFAULT_K_MIN: usize = 2;
pub const DEFAULT_K_MAX: usize = 30;
pub const DEFAULT_IT_MAX: u64 = 50_000;
pub const DEFAULT_PROB: f64 = 0.5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VnsError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("{kind} has no feasible labeling on this graph")]
    InfeasibleInstance { kind: ProblemKind },
    #[error("assignment has {got} values but the graph has {expected} vertices")]
    WrongLength { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct VnsParams {
    pub kind: ProblemKind,
    pub k_min: usize,
    pub k_max: usize,
    pub it_max: u64,
    /// Probability of moving to a candidate whose penalty ties the current one.
    pub prob: f64,
    pub seed: u64,
    pub time_limit: Option<Duration>,
    /// Stop as soon as a feasible labeling of at most this weight is found.
    pub target: Option<i64>,
}

impl VnsParams {
    pub fn new(kind: ProblemKind, seed: u64) -> Self {
        VnsParams {
            kind,
            k_min: DEFAULT_K_MIN,
            k_max: DEFAULT_K_MAX,
            it_max: DEFAULT_IT_MAX,
            prob: DEFAULT_PROB,
            seed,
            time_limit: None,
            target: None,
        }
    }

    pub fn validate(&self) -> Result<(), VnsError> {
        let bad = |m: &str| Err(VnsError::InvalidParams(m.to_string()));
        if self.k_min == 0 {
            return bad("k_min must be at least 1");
        }
        if self.k_min > self.k_max {
            return bad("k_min must not exceed k_max");
        }
        if self.it_max == 0 {
            return bad("it_max must be at least 1");
        }
        if !(0.0..=1.0).contains(&self.prob) {
            return bad("prob must lie in [0, 1]");
        }
        Ok(())
    }

    /// `(k_min, k_max)` clamped to the graph size: a shake cannot move more
    /// pairs than there are vertices.
    pub fn effective_k(&self, n: usize) -> (usize, usize) {
        let k_max = self.k_max.min(n.max(1));
        (self.k_min.min(k_max), k_max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenaltyBreakdown {
    pub f1: u64,
    pub f2: u64,
    pub f3: f64,
    pub pen: f64,
}

impl PenaltyBreakdown {
    fn from_parts(f1: u64, f2: u64, weight: i64, n: usize) -> Self {
        let f3 = if n == 0 {
            0.0
        } else {
            (weight + n as i64) as f64 / (3 * n) as f64
        };
        let pen = ((1 + f1) * (1 + f2) - 1) as f64 + f3;
        PenaltyBreakdown { f1, f2, f3, pen }
    }

    pub fn is_feasible(&self) -> bool {
        self.f1 == 0 && self.f2 == 0
    }
}

/// Penalty of `z`, computed from scratch.
pub fn penalty(g: &Graph, z: &Assignment, kind: ProblemKind) -> PenaltyBreakdown {
    let n = g.num_vertices();
    let f1 = (0..n).filter(|&i| !guard_condition_holds(g, z, i)).count() as u64;
    let f2 = (0..n)
        .map(|i| (1 - neighborhood_sum(g, z, i, kind)).max(0) as u64)
        .sum();
    PenaltyBreakdown::from_parts(f1, f2, weight(z), n)
}

fn deficiency(sum: i64) -> u64 {
    (1 - sum).max(0) as u64
}

/// A labeling with incrementally maintained penalty terms.
///
/// The value 0 marks an unset vertex: it contributes nothing to sums and
/// is exempt from the guard condition. Only initialization uses it.
#[derive(Debug, Clone)]
pub struct PenaltyState<'g> {
    g: &'g Graph,
    kind: ProblemKind,
    z: Vec<i8>,
    sums: Vec<i64>,
    /// Neighbors labeled 2, per vertex.
    twos: Vec<u32>,
    f1: u64,
    f2: u64,
    weight: i64,
    unset: usize,
}

impl<'g> PenaltyState<'g> {
    pub fn new(g: &'g Graph, kind: ProblemKind, z: &Assignment) -> Result<Self, VnsError> {
        if z.len() != g.num_vertices() {
            return Err(VnsError::WrongLength {
                expected: g.num_vertices(),
                got: z.len(),
            });
        }
        Ok(Self::from_values(g, kind, z.values().to_vec()))
    }

    fn unset(g: &'g Graph, kind: ProblemKind) -> Self {
        Self::from_values(g, kind, vec![0; g.num_vertices()])
    }

    fn from_values(g: &'g Graph, kind: ProblemKind, z: Vec<i8>) -> Self {
        let n = g.num_vertices();
        let mut s = PenaltyState {
            g,
            kind,
            z,
            sums: vec![0; n],
            twos: vec![0; n],
            f1: 0,
            f2: 0,
            weight: 0,
            unset: 0,
        };
        for i in 0..n {
            let own = if kind.includes_self() {
                i64::from(s.z[i])
            } else {
                0
            };
            s.sums[i] = own
                + g.neighbors(i)
                    .iter()
                    .map(|&j| i64::from(s.z[j]))
                    .sum::<i64>();
            s.twos[i] = g.neighbors(i).iter().filter(|&&j| s.z[j] == 2).count() as u32;
        }
        s.f1 = (0..n).filter(|&i| s.guard_broken(i)).count() as u64;
        s.f2 = s.sums.iter().map(|&x| deficiency(x)).sum();
        s.weight = s.z.iter().map(|&v| i64::from(v)).sum();
        s.unset = s.z.iter().filter(|&&v| v == 0).count();
        s
    }

    fn guard_broken(&self, i: usize) -> bool {
        self.z[i] == -1 && self.twos[i] == 0
    }

    pub fn n(&self) -> usize {
        self.z.len()
    }

    pub fn get(&self, v: usize) -> i8 {
        self.z[v]
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn is_feasible(&self) -> bool {
        self.unset == 0 && self.f1 == 0 && self.f2 == 0
    }

    pub fn breakdown(&self) -> PenaltyBreakdown {
        PenaltyBreakdown::from_parts(self.f1, self.f2, self.weight, self.n())
    }

    /// Integer key ordered exactly like `pen`.
    pub fn key(&self) -> i128 {
        let n = self.n() as i128;
        let scaled = (1 + self.f1 as i128) * (1 + self.f2 as i128) - 1;
        scaled * 3 * n + self.weight as i128 + n
    }

    /// Current labeling. Panics while some vertex is still unset.
    pub fn assignment(&self) -> Assignment {
        Assignment::new(self.z.clone()).expect("labeling has unset vertices")
    }

    /// Relabels `v`, updating every penalty term touched by the change.
    pub fn set(&mut self, v: usize, value: i8) {
        let old = self.z[v];
        if old == value {
            return;
        }
        let g = self.g;
        self.f1 -= u64::from(self.guard_broken(v));
        if (old == 2) != (value == 2) {
            for &j in g.neighbors(v) {
                self.f1 -= u64::from(self.guard_broken(j));
                if value == 2 {
                    self.twos[j] += 1;
                } else {
                    self.twos[j] -= 1;
                }
                self.f1 += u64::from(self.guard_broken(j));
            }
        }
        self.z[v] = value;
        self.f1 += u64::from(self.guard_broken(v));

        let delta = i64::from(value) - i64::from(old);
        let own = self.kind.includes_self().then_some(v);
        for i in g.neighbors(v).iter().copied().chain(own) {
            self.f2 -= deficiency(self.sums[i]);
            self.sums[i] += delta;
            self.f2 += deficiency(self.sums[i]);
        }
        self.weight += delta;
        if old == 0 {
            self.unset -= 1;
        }
        if value == 0 {
            self.unset += 1;
        }
    }

    /// Decrements single vertices in index order while the labeling stays
    /// feasible, until a full pass changes nothing.
    pub fn probe(&mut self) {
        loop {
            let mut changed = false;
            for v in 0..self.n() {
                if let Some(lower) = step_down(self.z[v]) {
                    let old = self.z[v];
                    self.set(v, lower);
                    if self.is_feasible() {
                        changed = true;
                    } else {
                        self.set(v, old);
                    }
                }
            }
            if !changed {
                return;
            }
        }
    }

    /// Up to `k` paired moves: one vertex goes one step up, a different one
    /// one step down. Probes afterwards if the result is feasible.
    pub fn shake<R: Rng + ?Sized>(&mut self, k: usize, rng: &mut R) {
        let n = self.n();
        for _ in 0..k {
            let lowerable: Vec<usize> = (0..n).filter(|&v| self.z[v] > -1).collect();
            let raisable: Vec<usize> = (0..n)
                .filter(|&v| self.z[v] < 2)
                .filter(|&v| lowerable.len() >= 2 || (lowerable.len() == 1 && lowerable[0] != v))
                .collect();
            let Some(&up) = raisable.choose(rng) else {
                break;
            };
            let partners: Vec<usize> = lowerable.into_iter().filter(|&v| v != up).collect();
            let down = *partners
                .choose(rng)
                .expect("raisable vertices have a partner");
            self.set(up, step_up(self.z[up]).expect("value below 2"));
            self.set(down, step_down(self.z[down]).expect("value above -1"));
        }
        if self.is_feasible() {
            self.probe();
        }
    }

    /// 1-swap first-improvement search. For each vertex labeled 1 or 2 in
    /// index order, step it down and try every single step up of another
    /// vertex labeled -1 or 1; the best such swap is kept if it lowers the
    /// penalty, and the scan restarts. `on_move` sees the state after every
    /// applied swap. Returns `false` if the deadline cut the search short.
    pub fn local_search_with(
        &mut self,
        deadline: Option<Instant>,
        mut on_move: impl FnMut(&Self),
    ) -> bool {
        let n = self.n();
        'scan: loop {
            for u in 0..n {
                let Some(lowered) = step_down(self.z[u]) else {
                    continue;
                };
                if deadline.is_some_and(|d| Instant::now() >= d) {
                    return false;
                }
                let current = self.key();
                let old_u = self.z[u];
                self.set(u, lowered);
                let mut best: Option<(i128, usize)> = None;
                for v in (0..n).filter(|&v| v != u) {
                    let Some(raised) = step_up(self.z[v]) else {
                        continue;
                    };
                    let old_v = self.z[v];
                    self.set(v, raised);
                    let key = self.key();
                    if best.is_none_or(|(b, _)| key < b) {
                        best = Some((key, v));
                    }
                    self.set(v, old_v);
                }
                match best {
                    Some((key, v)) if key < current => {
                        self.set(v, step_up(self.z[v]).expect("checked above"));
                        on_move(self);
                        continue 'scan;
                    }
                    _ => self.set(u, old_u),
                }
            }
            return true;
        }
    }

    pub fn local_search(&mut self) {
        self.local_search_with(None, |_| {});
    }
}

/// Random construction from the all-unset labeling, followed by probing.
///
/// Random vertices receive random labels until every vertex is set and
/// the labeling is feasible. Because that walk can take very long on large
/// graphs, after `30n + 100` steps any remaining violations are repaired
/// instead: vertices are visited in random order and, while violated,
/// a -1 guard is raised to 1 or a random non-2 member of a deficient
/// neighborhood is raised one step. Raising labels never breaks a satisfied
/// constraint, so one pass suffices.
pub fn initialize<R: Rng + ?Sized>(
    g: &Graph,
    kind: ProblemKind,
    rng: &mut R,
) -> Result<Assignment, VnsError> {
    Ok(initial_state(g, kind, rng)?.assignment())
}

fn initial_state<'g, R: Rng + ?Sized>(
    g: &'g Graph,
    kind: ProblemKind,
    rng: &mut R,
) -> Result<PenaltyState<'g>, VnsError> {
    if !is_instance_feasible(g, kind) {
        return Err(VnsError::InfeasibleInstance { kind });
    }
    let n = g.num_vertices();
    let mut s = PenaltyState::unset(g, kind);
    const LABELS: [i8; 3] = [-1, 1, 2];
    let budget = 30 * n + 100;
    for _ in 0..budget {
        if s.is_feasible() {
            break;
        }
        let v = rng.gen_range(0..n);
        let value = LABELS[rng.gen_range(0..3)];
        s.set(v, value);
    }
    if !s.is_feasible() {
        repair(&mut s, rng);
    }
    s.probe();
    Ok(s)
}

fn repair<R: Rng + ?Sized>(s: &mut PenaltyState<'_>, rng: &mut R) {
    let g = s.g;
    let mut order: Vec<usize> = (0..s.n()).collect();
    order.shuffle(rng);
    for &v in &order {
        if s.z[v] == 0 {
            s.set(v, 1);
        }
    }
    for &i in &order {
        if s.guard_broken(i) {
            s.set(i, 1);
        }
        while s.sums[i] < 1 {
            let own = s.kind.includes_self().then_some(i);
            let open: Vec<usize> = g
                .neighbors(i)
                .iter()
                .copied()
                .chain(own)
                .filter(|&j| s.z[j] < 2)
                .collect();
            let &j = open
                .choose(rng)
                .expect("feasible instance leaves room to raise");
            s.set(j, step_up(s.z[j]).expect("value below 2"));
        }
    }
}

/// Probing applied to a feasible `z`.
pub fn improvement_probing(
    g: &Graph,
    z: &Assignment,
    kind: ProblemKind,
) -> Result<Assignment, VnsError> {
    let mut s = PenaltyState::new(g, kind, z)?;
    if s.is_feasible() {
        s.probe();
    }
    Ok(s.assignment())
}

pub fn shake<R: Rng + ?Sized>(
    g: &Graph,
    z: &Assignment,
    k: usize,
    kind: ProblemKind,
    rng: &mut R,
) -> Result<Assignment, VnsError> {
    let mut s = PenaltyState::new(g, kind, z)?;
    s.shake(k, rng);
    Ok(s.assignment())
}

pub fn local_search(g: &Graph, z: &Assignment, kind: ProblemKind) -> Result<Assignment, VnsError> {
    let mut s = PenaltyState::new(g, kind, z)?;
    s.local_search();
    Ok(s.assignment())
}

/// One iteration of the main loop, as written to a trace.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub iter: u64,
    pub k: usize,
    /// Penalty of the current solution after the movement decision.
    pub pen: f64,
    pub weight: i64,
    pub feasible: bool,
    pub moved: bool,
}

impl TraceRow {
    pub const HEADER: &'static str = "iter,k,pen,weight,feasible,moved";
}

impl fmt::Display for TraceRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{:.12},{},{},{}",
            self.iter, self.k, self.pen, self.weight, self.feasible, self.moved
        )
    }
}

pub fn run_vns(g: &Graph, p: &VnsParams) -> Result<SolveResult, VnsError> {
    run_vns_traced(g, p, |_| {})
}

/// Runs the search; `trace` receives one row per iteration. The result is
/// `Feasible` with the best feasible labeling seen, or `Infeasible` when
/// the instance has none. The counter is the number of iterations.
pub fn run_vns_traced(
    g: &Graph,
    p: &VnsParams,
    mut trace: impl FnMut(&TraceRow),
) -> Result<SolveResult, VnsError> {
    p.validate()?;
    let start = Instant::now();
    let deadline = p.time_limit.map(|t| start + t);
    if !is_instance_feasible(g, p.kind) {
        return Ok(SolveResult::without_solution(
            SolveStatus::Infeasible,
            0,
            start.elapsed(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut current = initial_state(g, p.kind, &mut rng)?;
    let mut best = current.assignment();
    let mut best_weight = current.weight();
    let (k_min, k_max) = p.effective_k(g.num_vertices());
    let mut k = k_min;
    let mut iter = 0;
    let reached = |w: i64| p.target.is_some_and(|t| w <= t);

    while iter < p.it_max && !reached(best_weight) && g.num_vertices() > 0 {
        if deadline.is_some_and(|d| Instant::now() >= d) {
            break;
        }
        iter += 1;
        let mut candidate = current.clone();
        candidate.shake(k, &mut rng);
        candidate.local_search_with(deadline, |_| {});

        if candidate.is_feasible() && candidate.weight() < best_weight {
            best_weight = candidate.weight();
            best = candidate.assignment();
        }
        let (ck, cur) = (candidate.key(), current.key());
        let improved = ck < cur;
        let moved = improved || (ck == cur && rng.gen::<f64>() < p.prob);
        if moved {
            current = candidate;
        }
        k = if improved || k >= k_max { k_min } else { k + 1 };

        trace(&TraceRow {
            iter,
            k,
            pen: current.breakdown().pen,
            weight: current.weight(),
            feasible: current.is_feasible(),
            moved,
        });
    }
    Ok(SolveResult::with_solution(
        SolveStatus::Feasible,
        best,
        iter,
        start.elapsed(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domination::is_feasible;
    use crate::exact::brute_force;
    use crate::graph::{example_graph, generate_random};
    use proptest::prelude::*;

    fn z(v: &[i8]) -> Assignment {
        Assignment::new(v.to_vec()).unwrap()
    }

    #[test]
    fn penalty_examples() {
        let g = example_graph();
        let p = penalty(&g, &z(&[-1, 2, -1, -1, 1, 2]), ProblemKind::Srdp);
        assert_eq!((p.f1, p.f2), (0, 0));
        assert!((p.f3 - 4.0 / 9.0).abs() < 1e-15);
        assert_eq!(p.pen, p.f3);

        // degrees (2,4,3,3,3,3): closed sums -(deg+1), deficiencies 4+6+5+5+5+5
        let p = penalty(&g, &Assignment::uniform(6, -1), ProblemKind::Srdp);
        assert_eq!((p.f1, p.f2, p.f3), (6, 30, 0.0));
        assert_eq!(p.pen, 216.0);

        let p = penalty(&g, &Assignment::uniform(6, 2), ProblemKind::Strdp);
        assert_eq!((p.f1, p.f2, p.f3, p.pen), (0, 0, 1.0, 1.0));
    }

    #[test]
    fn key_orders_like_pen() {
        let g = example_graph();
        let labels = [
            z(&[-1, 2, -1, -1, 1, 2]),
            z(&[1, 2, -1, -1, 1, 2]),
            Assignment::uniform(6, -1),
            z(&[2, -1, -1, -1, 1, 1]),
        ];
        for a in &labels {
            for b in &labels {
                let (sa, sb) = (
                    PenaltyState::new(&g, ProblemKind::Srdp, a).unwrap(),
                    PenaltyState::new(&g, ProblemKind::Srdp, b).unwrap(),
                );
                assert_eq!(
                    sa.key().cmp(&sb.key()),
                    sa.breakdown().pen.partial_cmp(&sb.breakdown().pen).unwrap()
                );
            }
        }
    }

    #[test]
    fn initialize_small_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let k1 = Graph::empty(1);
        for _ in 0..20 {
            assert_eq!(
                initialize(&k1, ProblemKind::Srdp, &mut rng).unwrap(),
                z(&[1])
            );
            let k2 = initialize(&Graph::complete(2), ProblemKind::Strdp, &mut rng).unwrap();
            assert!(is_feasible(&Graph::complete(2), &k2, ProblemKind::Strdp));
        }
        assert_eq!(
            initialize(&k1, ProblemKind::Strdp, &mut rng),
            Err(VnsError::InfeasibleInstance {
                kind: ProblemKind::Strdp
            })
        );
    }

    #[test]
    fn repair_handles_large_graphs() {
        let g = generate_random(300, 0.05, 3).unwrap();
        for kind in ProblemKind::BOTH {
            if !is_instance_feasible(&g, kind) {
                continue;
            }
            let mut rng = ChaCha8Rng::seed_from_u64(9);
            let a = initialize(&g, kind, &mut rng).unwrap();
            assert!(is_feasible(&g, &a, kind));
        }
    }

    #[test]
    fn probing_examples() {
        let k2 = Graph::complete(2);
        let out = improvement_probing(&k2, &Assignment::uniform(2, 2), ProblemKind::Srdp).unwrap();
        // index order stops at (1, 1): neither vertex can drop to -1 alone
        assert_eq!(out, z(&[1, 1]));
        assert!(weight(&out) < 4);
        let minimal = z(&[-1, 2, -1, -1, 1, 2]);
        assert_eq!(
            improvement_probing(&example_graph(), &minimal, ProblemKind::Srdp).unwrap(),
            minimal
        );
    }

    #[test]
    fn shake_ladder_arithmetic() {
        let g = Graph::empty(8);
        let mut s = PenaltyState::new(&g, ProblemKind::Srdp, &Assignment::uniform(8, 1)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        // one pair on an all-1 labeling: 1 -> 2 and 1 -> -1
        s.shake(1, &mut rng);
        assert_eq!(s.weight(), 7);
        let mut values = s.assignment().values().to_vec();
        values.sort_unstable();
        assert_eq!(values, vec![-1, 1, 1, 1, 1, 1, 1, 2]);

        let single = Graph::empty(1);
        let out = shake(&single, &z(&[1]), 1, ProblemKind::Srdp, &mut rng).unwrap();
        assert_eq!(out, z(&[1]));
        let stuck = shake(
            &Graph::complete(3),
            &z(&[-1, -1, 2]),
            2,
            ProblemKind::Srdp,
            &mut rng,
        )
        .unwrap();
        assert_eq!(stuck, z(&[-1, -1, 2]));
    }

    #[test]
    fn local_search_does_not_worsen() {
        let g = example_graph();
        let start = z(&[1, 2, -1, -1, 1, 2]);
        let out = local_search(&g, &start, ProblemKind::Srdp).unwrap();
        assert!(
            penalty(&g, &out, ProblemKind::Srdp).pen <= penalty(&g, &start, ProblemKind::Srdp).pen
        );
        let again = local_search(&g, &out, ProblemKind::Srdp).unwrap();
        assert_eq!(again, out);
    }

    #[test]
    fn worked_example() {
        let g = example_graph();
        for (kind, expected) in [(ProblemKind::Srdp, 2), (ProblemKind::Strdp, 4)] {
            let mut p = VnsParams::new(kind, 7);
            p.it_max = 2000;
            let r = run_vns(&g, &p).unwrap();
            assert_eq!(r.status, SolveStatus::Feasible);
            assert_eq!(r.best_value, Some(expected));
            assert!(is_feasible(&g, r.best_assignment.as_ref().unwrap(), kind));
        }
    }

    #[test]
    fn infeasible_and_invalid() {
        let p = VnsParams::new(ProblemKind::Strdp, 0);
        let r = run_vns(&Graph::empty(3), &p).unwrap();
        assert_eq!(r.status, SolveStatus::Infeasible);
        assert_eq!(r.best_value, None);
        for bad in [
            VnsParams {
                k_min: 0,
                ..p.clone()
            },
            VnsParams {
                k_min: 5,
                k_max: 4,
                ..p.clone()
            },
            VnsParams {
                it_max: 0,
                ..p.clone()
            },
            VnsParams {
                prob: 1.5,
                ..p.clone()
            },
        ] {
            assert!(matches!(
                run_vns(&Graph::empty(3), &bad),
                Err(VnsError::InvalidParams(_))
            ));
        }
        assert_eq!(p.effective_k(6), (2, 6));
        assert_eq!(p.effective_k(1), (1, 1));
    }

    #[test]
    fn same_seed_same_trace() {
        let g = generate_random(12, 0.4, 5).unwrap();
        let mut p = VnsParams::new(ProblemKind::Srdp, 11);
        p.it_max = 300;
        let run = || {
            let mut rows = Vec::new();
            let r = run_vns_traced(&g, &p, |row| rows.push(row.to_string())).unwrap();
            (r.best_assignment, rows)
        };
        let (a, ta) = run();
        let (b, tb) = run();
        assert_eq!(a, b);
        assert_eq!(ta.len(), 300);
        assert_eq!(ta, tb);
    }

    #[test]
    fn target_stops_early() {
        let mut p = VnsParams::new(ProblemKind::Srdp, 3);
        p.target = Some(2);
        let r = run_vns(&example_graph(), &p).unwrap();
        assert_eq!(r.best_value, Some(2));
        assert!(r.counter < p.it_max);
    }

    fn label() -> impl Strategy<Value = i8> {
        prop::sample::select(vec![-1i8, 1, 2])
    }

    proptest! {
        #[test]
        fn incremental_matches_recomputation(
            seed: u64,
            n in 1usize..10,
            start in prop::collection::vec(label(), 10),
            moves in prop::collection::vec((0usize..10, label()), 1..40),
        ) {
            let g = generate_random(n, 0.4, seed).unwrap();
            for kind in ProblemKind::BOTH {
                let mut s = PenaltyState::new(&g, kind, &z(&start[..n])).unwrap();
                for &(v, value) in &moves {
                    s.set(v % n, value);
                    let full = penalty(&g, &s.assignment(), kind);
                    let inc = s.breakdown();
                    prop_assert_eq!((inc.f1, inc.f2), (full.f1, full.f2));
                    prop_assert!((inc.f3 - full.f3).abs() <= 1e-12);
                    prop_assert_eq!(s.is_feasible(), is_feasible(&g, &s.assignment(), kind));
                }
                let g2 = &g;
                s.local_search_with(None, |st| {
                    let full = penalty(g2, &st.assignment(), kind);
                    assert_eq!((st.breakdown().f1, st.breakdown().f2), (full.f1, full.f2));
                });
            }
        }

        #[test]
        fn penalty_separates_feasible(seed: u64, n in 1usize..9, values in prop::collection::vec(label(), 8)) {
            let g = generate_random(n, 0.5, seed).unwrap();
            let a = z(&values[..n]);
            for kind in ProblemKind::BOTH {
                let p = penalty(&g, &a, kind);
                prop_assert!((0.0..=1.0).contains(&p.f3));
                if is_feasible(&g, &a, kind) {
                    prop_assert_eq!(p.pen, p.f3);
                } else {
                    prop_assert!(p.pen >= 1.0);
                }
            }
        }

        #[test]
        fn probing_and_search_monotone(seed: u64, n in 1usize..9, values in prop::collection::vec(label(), 8)) {
            let g = generate_random(n, 0.5, seed).unwrap();
            let a = z(&values[..n]);
            for kind in ProblemKind::BOTH {
                let before = penalty(&g, &a, kind);
                let searched = local_search(&g, &a, kind).unwrap();
                prop_assert!(penalty(&g, &searched, kind).pen <= before.pen);
                if is_feasible(&g, &a, kind) {
                    let probed = improvement_probing(&g, &a, kind).unwrap();
                    prop_assert!(is_feasible(&g, &probed, kind));
                    prop_assert!(weight(&probed) <= weight(&a));
                }
            }
        }

        #[test]
        fn vns_never_beats_exact(seed: u64, n in 1usize..8) {
            let g = generate_random(n, 0.5, seed).unwrap();
            for kind in ProblemKind::BOTH {
                let exact = brute_force(&g, kind, 8).unwrap();
                let mut p = VnsParams::new(kind, seed);
                p.it_max = 200;
                let r = run_vns(&g, &p).unwrap();
                match exact.best_value {
                    None => prop_assert_eq!(r.status, SolveStatus::Infeasible),
                    Some(opt) => {
                        prop_assert!(r.best_value.unwrap() >= opt);
                        prop_assert!(is_feasible(&g, r.best_assignment.as_ref().unwrap(), kind));
                    }
                }
            }
        }
    }
}
