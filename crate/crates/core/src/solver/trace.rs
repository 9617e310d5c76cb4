//! Move-by-move capture transcripts from a solved game.

use serde::{Deserialize, Serialize};

use super::{GameState, Side, SolveResult};
use crate::error::{Error, Result};
use crate::graph::{members, Vertex};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RobberPlay {
    /// Start where capture takes longest and always maximize the remaining
    /// rank; ties go to the smallest vertex.
    Optimal,
    /// Start vertex followed by one move per round. Once the script runs out
    /// the robber plays optimally.
    Scripted(Vec<Vertex>),
}

/// One round: layer, cops after their move, robber after its move.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub t: usize,
    pub cops: Vec<Vertex>,
    pub robber: Vertex,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaptureTrace {
    pub placement: Vec<Vertex>,
    pub robber_start: Vertex,
    /// Steps to capture promised by the attractor for the initial state.
    pub bound: u32,
    pub steps: Vec<TraceStep>,
    /// Number of cop moves made before capture (0 if the robber started on a cop).
    pub capture_round: usize,
}

/// Plays the optimal cop strategy from `placement` (default: the solver's
/// placement) against `robber` until capture.
pub fn extract_trace(
    result: &SolveResult,
    placement: Option<&[Vertex]>,
    robber: &RobberPlay,
) -> Result<CaptureTrace> {
    if !result.copwin {
        return Err(Error::NotCopwin { k: result.k() });
    }
    let mut cops: Vec<Vertex> = match placement {
        Some(c) => {
            let mut c = c.to_vec();
            c.sort_unstable();
            c
        }
        None => result.initial_placement.clone().expect("copwin has a placement"),
    };
    if result.placement_value(&cops).is_none() {
        return Err(Error::InvalidPolicy(format!(
            "placement {cops:?} does not win for {} cops",
            result.k()
        )));
    }
    let pg = result.instance();
    let n = pg.n();
    let p = pg.period();
    let cop_state = |t: usize, cops: &[Vertex], r: Vertex| GameState {
        t,
        cops: cops.to_vec(),
        robber: r,
        side: Side::CopsToMove,
    };

    let mut script = match robber {
        RobberPlay::Optimal => Vec::new().into_iter(),
        RobberPlay::Scripted(s) => s.clone().into_iter(),
    };
    let start = match script.next() {
        Some(r) if r < n => r,
        Some(r) => return Err(Error::VertexOutOfRange { vertex: r, n }),
        None => (0..n)
            .max_by_key(|&r| {
                let rank = result.rank(&cop_state(0, &cops, r)).unwrap_or(0);
                (rank, std::cmp::Reverse(r))
            })
            .expect("n ≥ 1"),
    };
    let bound = result.rank(&cop_state(0, &cops, start)).unwrap_or(0);
    let mut trace = CaptureTrace {
        placement: cops.clone(),
        robber_start: start,
        bound,
        steps: Vec::new(),
        capture_round: 0,
    };
    if cops.contains(&start) {
        return Ok(trace);
    }

    let mut r = start;
    let limit = result.state_count();
    for round in 0.. {
        let t = round % p;
        if round > limit {
            return Err(Error::Limit("trace did not terminate".into()));
        }
        cops = result
            .best_move(t, &cops, r)
            .ok_or_else(|| Error::InvalidPolicy(format!("left the winning region at layer {t}")))?;
        if cops.contains(&r) {
            trace.steps.push(TraceStep { t, cops, robber: r });
            trace.capture_round = round + 1;
            return Ok(trace);
        }
        let replies = pg.closed(t, r);
        let next = match script.next() {
            Some(v) if replies >> v & 1 == 1 => v,
            Some(v) => {
                return Err(Error::InvalidPolicy(format!(
                    "scripted robber move {r} -> {v} is not allowed at layer {t}"
                )))
            }
            None => members(replies)
                .max_by_key(|&v| {
                    let rank = if cops.contains(&v) {
                        0
                    } else {
                        result.rank(&cop_state(t + 1, &cops, v)).unwrap_or(u32::MAX)
                    };
                    (rank, std::cmp::Reverse(v))
                })
                .expect("closed neighborhood is non-empty"),
        };
        r = next;
        trace.steps.push(TraceStep {
            t,
            cops: cops.clone(),
            robber: r,
        });
        if cops.contains(&r) {
            trace.capture_round = round + 1;
            return Ok(trace);
        }
    }
    unreachable!()
}
