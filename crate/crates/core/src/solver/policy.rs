//! Fixed cop strategies and their exhaustive verification.
//!
//! Against a deterministic cop policy the game collapses to a one-player
//! robber game. The robber escapes iff some reachable non-capture state lies
//! on a cycle; otherwise the longest path bounds the capture time.

use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use super::SolveResult;
use crate::error::{Error, Result};
use crate::graph::{members, Vertex};
use crate::periodic::PeriodicGraph;

/// Cap on distinct policy states visited by [`verify_policy`].
pub const POLICY_STATE_LIMIT: usize = 20_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolicyOrigin {
    Optimal,
    BagStrategy,
    Scripted,
}

/// A deterministic cop strategy with finite memory.
///
/// Cops are ordered: `decide` returns the new vertex of cop `i` at index `i`,
/// which must lie in `N_t[cops[i]]`.
pub trait CopPolicy {
    type Memory: Clone + Eq + Hash + Debug;

    fn num_cops(&self) -> usize;

    fn origin(&self) -> PolicyOrigin;

    /// Starting vertices at layer 0 and the initial memory.
    fn place(&self) -> (Vec<Vertex>, Self::Memory);

    fn decide(
        &self,
        t: usize,
        cops: &[Vertex],
        robber: Vertex,
        memory: &Self::Memory,
    ) -> (Vec<Vertex>, Self::Memory);
}

/// Cops that never move.
#[derive(Clone, Debug)]
pub struct StationaryPolicy {
    pub cops: Vec<Vertex>,
}

impl CopPolicy for StationaryPolicy {
    type Memory = ();

    fn num_cops(&self) -> usize {
        self.cops.len()
    }

    fn origin(&self) -> PolicyOrigin {
        PolicyOrigin::Scripted
    }

    fn place(&self) -> (Vec<Vertex>, ()) {
        (self.cops.clone(), ())
    }

    fn decide(&self, _: usize, cops: &[Vertex], _: Vertex, _: &()) -> (Vec<Vertex>, ()) {
        (cops.to_vec(), ())
    }
}

/// Memoryless policy given by a closure `(t, cops, robber) -> cops'`.
pub struct FnPolicy<F> {
    pub placement: Vec<Vertex>,
    pub rule: F,
}

impl<F> CopPolicy for FnPolicy<F>
where
    F: Fn(usize, &[Vertex], Vertex) -> Vec<Vertex>,
{
    type Memory = ();

    fn num_cops(&self) -> usize {
        self.placement.len()
    }

    fn origin(&self) -> PolicyOrigin {
        PolicyOrigin::Scripted
    }

    fn place(&self) -> (Vec<Vertex>, ()) {
        (self.placement.clone(), ())
    }

    fn decide(&self, t: usize, cops: &[Vertex], robber: Vertex, _: &()) -> (Vec<Vertex>, ()) {
        ((self.rule)(t, cops, robber), ())
    }
}

/// The positional strategy read off a solved attractor: always a
/// rank-minimizing move, lexicographically smallest on ties.
pub struct OptimalPolicy<'a> {
    result: &'a SolveResult,
    placement: Vec<Vertex>,
}

impl<'a> OptimalPolicy<'a> {
    pub fn new(result: &'a SolveResult) -> Result<Self> {
        let placement = result
            .initial_placement
            .clone()
            .ok_or(Error::NotCopwin { k: result.k() })?;
        Ok(OptimalPolicy { result, placement })
    }
}

impl CopPolicy for OptimalPolicy<'_> {
    type Memory = ();

    fn num_cops(&self) -> usize {
        self.result.k()
    }

    fn origin(&self) -> PolicyOrigin {
        PolicyOrigin::Optimal
    }

    fn place(&self) -> (Vec<Vertex>, ()) {
        (self.placement.clone(), ())
    }

    fn decide(&self, t: usize, cops: &[Vertex], robber: Vertex, _: &()) -> (Vec<Vertex>, ()) {
        let target = self.result.best_move(t, cops, robber);
        let next = target
            .and_then(|m| assign_moves(self.result.instance(), t, cops, &m))
            .unwrap_or_else(|| cops.to_vec());
        (next, ())
    }
}

/// Orders the multiset `target` so that cop `i` can reach `out[i]` from
/// `cops[i]` in snapshot `t`.
pub fn assign_moves(
    pg: &PeriodicGraph,
    t: usize,
    cops: &[Vertex],
    target: &[Vertex],
) -> Option<Vec<Vertex>> {
    fn rec(
        pg: &PeriodicGraph,
        t: usize,
        cops: &[Vertex],
        target: &[Vertex],
        used: &mut [bool],
        out: &mut Vec<Vertex>,
    ) -> bool {
        let i = out.len();
        if i == cops.len() {
            return true;
        }
        let reach = pg.closed(t, cops[i]);
        for j in 0..target.len() {
            if used[j] || reach >> target[j] & 1 == 0 {
                continue;
            }
            used[j] = true;
            out.push(target[j]);
            if rec(pg, t, cops, target, used, out) {
                return true;
            }
            out.pop();
            used[j] = false;
        }
        false
    }
    if cops.len() != target.len() {
        return None;
    }
    let mut used = vec![false; target.len()];
    let mut out = Vec::with_capacity(cops.len());
    rec(pg, t, cops, target, &mut used, &mut out).then_some(out)
}

/// Positions at the start of a round, cops to move.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundState {
    pub t: usize,
    pub cops: Vec<Vertex>,
    pub robber: Vertex,
}

/// A robber run that never gets caught: `rounds[cycle_start..]` repeats.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub rounds: Vec<RoundState>,
    pub cycle_start: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolicyVerdict {
    pub wins: bool,
    /// Worst-case number of cop moves until capture, when `wins`.
    pub max_capture_time: Option<u32>,
    pub counterexample: Option<Counterexample>,
    pub states_explored: usize,
}

#[derive(Clone, Copy)]
enum Mark {
    Open,
    Done(u32),
}

/// Layer, ordered cops, robber and policy memory at the start of a round.
type Key<M> = (usize, Vec<Vertex>, Vertex, M);

struct Frame<M> {
    key: Key<M>,
    next_cops: Vec<Vertex>,
    next_mem: M,
    replies: Vec<Vertex>,
    idx: usize,
    worst: u32,
}

/// Explores every robber response to `policy` on `pg` under the relaxed
/// capture rule (any co-location ends the game).
pub fn verify_policy<P: CopPolicy>(pg: &PeriodicGraph, policy: &P) -> Result<PolicyVerdict> {
    let k = policy.num_cops();
    if k == 0 {
        return Err(Error::ZeroCops);
    }
    let n = pg.n();
    let p = pg.period();
    let (start, mem0) = policy.place();
    if start.len() != k || start.iter().any(|&c| c >= n) {
        return Err(Error::InvalidPolicy(format!(
            "placement {start:?} is not {k} vertices of 0..{n}"
        )));
    }
    let mut marks: HashMap<Key<P::Memory>, Mark> = HashMap::new();
    let mut worst_overall = 0u32;

    for r0 in 0..n {
        if start.contains(&r0) {
            continue;
        }
        let root = (0usize, start.clone(), r0, mem0.clone());
        if let Some(Mark::Done(v)) = marks.get(&root) {
            worst_overall = worst_overall.max(*v);
            continue;
        }
        let mut stack: Vec<Frame<P::Memory>> = Vec::new();
        push_frame(pg, policy, &mut marks, &mut stack, root)?;
        let mut child_value: Option<u32> = None;
        while let Some(top) = stack.last_mut() {
            if let Some(v) = child_value.take() {
                top.worst = top.worst.max(1 + v);
            }
            if top.idx == top.replies.len() {
                let frame = stack.pop().expect("non-empty");
                marks.insert(frame.key, Mark::Done(frame.worst));
                child_value = Some(frame.worst);
                continue;
            }
            let r = top.replies[top.idx];
            top.idx += 1;
            if top.next_cops.contains(&r) {
                top.worst = top.worst.max(1);
                continue;
            }
            let key = ((top.key.0 + 1) % p, top.next_cops.clone(), r, top.next_mem.clone());
            match marks.get(&key) {
                Some(Mark::Done(v)) => top.worst = top.worst.max(1 + v),
                Some(Mark::Open) => {
                    let cycle_start = stack
                        .iter()
                        .position(|f| f.key == key)
                        .expect("open states are on the stack");
                    let rounds = stack
                        .iter()
                        .map(|f| RoundState {
                            t: f.key.0,
                            cops: f.key.1.clone(),
                            robber: f.key.2,
                        })
                        .collect();
                    return Ok(PolicyVerdict {
                        wins: false,
                        max_capture_time: None,
                        counterexample: Some(Counterexample {
                            rounds,
                            cycle_start,
                        }),
                        states_explored: marks.len(),
                    });
                }
                None => {
                    if marks.len() >= POLICY_STATE_LIMIT {
                        return Err(Error::Limit(format!(
                            "policy verification exceeded {POLICY_STATE_LIMIT} states"
                        )));
                    }
                    push_frame(pg, policy, &mut marks, &mut stack, key)?;
                }
            }
        }
        if let Some(v) = child_value {
            worst_overall = worst_overall.max(v);
        }
    }
    Ok(PolicyVerdict {
        wins: true,
        max_capture_time: Some(worst_overall),
        counterexample: None,
        states_explored: marks.len(),
    })
}

fn push_frame<P: CopPolicy>(
    pg: &PeriodicGraph,
    policy: &P,
    marks: &mut HashMap<Key<P::Memory>, Mark>,
    stack: &mut Vec<Frame<P::Memory>>,
    key: Key<P::Memory>,
) -> Result<()> {
    let (t, ref cops, robber, ref mem) = key;
    let (next_cops, next_mem) = policy.decide(t, cops, robber, mem);
    if next_cops.len() != cops.len() {
        return Err(Error::InvalidPolicy(format!(
            "policy returned {} cops at layer {t}, expected {}",
            next_cops.len(),
            cops.len()
        )));
    }
    for (i, (&from, &to)) in cops.iter().zip(&next_cops).enumerate() {
        if to >= pg.n() || pg.closed(t, from) >> to & 1 == 0 {
            return Err(Error::InfeasibleMove { t, cop: i, from, to });
        }
    }
    let replies = if next_cops.contains(&robber) {
        Vec::new()
    } else {
        members(pg.closed(t, robber)).collect()
    };
    let worst = if replies.is_empty() { 1 } else { 0 };
    marks.insert(key.clone(), Mark::Open);
    stack.push(Frame {
        key,
        next_cops,
        next_mem,
        replies,
        idx: 0,
        worst,
    });
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::solver::{is_k_copwin, SolverConfig};

    #[test]
    fn stationary_cop_on_c4_loses() {
        let pg = PeriodicGraph::constant(&Graph::cycle(4), 1).unwrap();
        let v = verify_policy(&pg, &StationaryPolicy { cops: vec![0] }).unwrap();
        assert!(!v.wins);
        let ce = v.counterexample.unwrap();
        assert!(ce.cycle_start < ce.rounds.len());
        assert!(ce.rounds.iter().all(|s| !s.cops.contains(&s.robber)));
    }

    #[test]
    fn optimal_policy_wins_within_rank() {
        for g in [Graph::path(6), Graph::hypercube(3), Graph::petersen()] {
            let pg = PeriodicGraph::constant(&g, 1).unwrap();
            let k = crate::solver::cop_number(&pg, &SolverConfig::default()).unwrap();
            let r = is_k_copwin(&pg, k, &SolverConfig::default()).unwrap();
            let policy = OptimalPolicy::new(&r).unwrap();
            let v = verify_policy(&pg, &policy).unwrap();
            assert!(v.wins);
            let bound = r.placement_value(r.initial_placement.as_ref().unwrap()).unwrap();
            assert_eq!(v.max_capture_time, Some(bound));
        }
    }

    #[test]
    fn infeasible_policy_is_rejected() {
        let pg = PeriodicGraph::constant(&Graph::path(4), 1).unwrap();
        let jumpy = FnPolicy {
            placement: vec![0],
            rule: |_: usize, _: &[Vertex], _: Vertex| vec![3],
        };
        assert!(matches!(
            verify_policy(&pg, &jumpy),
            Err(Error::InfeasibleMove { .. })
        ));
    }

    #[test]
    fn assignment_respects_adjacency() {
        let pg = PeriodicGraph::constant(&Graph::path(4), 1).unwrap();
        assert_eq!(assign_moves(&pg, 0, &[0, 3], &[2, 1]), Some(vec![1, 2]));
        assert_eq!(assign_moves(&pg, 0, &[0, 0], &[1, 3]), None);
    }
}
