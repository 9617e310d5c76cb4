//! Temporal corners and k-temporal corners.
//!
//! `(t, x)` is a k-temporal corner of `(t+1, y_1), …, (t+1, y_k)` when
//! `x ∉ {y_i}` and `N_t[x] ⊆ ∪ N_{t+1}[y_i]`. Absence of k-temporal corners
//! rules out k-copwin-ness; presence proves nothing.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bit, members, Vertex, VertexSet};
use crate::periodic::PeriodicGraph;

/// Maximum number of `(t, x, cover)` candidates examined by one call.
pub const CORNER_BUDGET: u128 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CornerWitness {
    pub t: usize,
    pub corner_vertex: Vertex,
    /// Sorted, without repetition; all at layer `[t+1]_p`.
    pub covers: Vec<Vertex>,
}

impl CornerWitness {
    /// Re-checks the witness against raw snapshot neighborhoods.
    pub fn is_valid(&self, pg: &PeriodicGraph) -> bool {
        if self.covers.contains(&self.corner_vertex) || self.t >= pg.period() {
            return false;
        }
        let corner: Vec<Vertex> = members(pg.closed(self.t, self.corner_vertex)).collect();
        let next = pg.snapshot(self.t + 1);
        corner.iter().all(|&w| {
            self.covers
                .iter()
                .any(|&y| y == w || next.has_edge(y, w))
        })
    }
}

/// All temporal corners `((t, u), v)` with `u ≠ v` and `N_t[u] ⊆ N_{t+1}[v]`,
/// sorted by `(t, u, v)`.
pub fn find_temporal_corners(pg: &PeriodicGraph) -> Vec<CornerWitness> {
    let mut out = Vec::new();
    for t in 0..pg.period() {
        let next = pg.snapshot(t + 1);
        for u in 0..pg.n() {
            let nu = pg.closed(t, u);
            // Since u ∈ N_t[u], any cover v must satisfy u ∈ N_{t+1}[v].
            for v in members(next.closed(u) & !bit(u)) {
                if nu & !next.closed(v) == 0 {
                    out.push(CornerWitness {
                        t,
                        corner_vertex: u,
                        covers: vec![v],
                    });
                }
            }
        }
    }
    out
}

pub fn has_temporal_corner(pg: &PeriodicGraph) -> bool {
    (0..pg.period()).any(|t| {
        let next = pg.snapshot(t + 1);
        (0..pg.n()).any(|u| {
            let nu = pg.closed(t, u);
            members(next.closed(u) & !bit(u)).any(|v| nu & !next.closed(v) == 0)
        })
    })
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

fn cover_size(n: usize, k: usize) -> usize {
    k.min(n.saturating_sub(1))
}

fn check_budget(pg: &PeriodicGraph, k: usize) -> Result<usize> {
    if k == 0 {
        return Err(Error::ZeroCops);
    }
    let size = cover_size(pg.n(), k);
    let candidates = (pg.period() * pg.n()) as u128 * binomial(pg.n().saturating_sub(1) as u128, size as u128);
    if candidates > CORNER_BUDGET {
        return Err(Error::CornerBudget {
            candidates,
            limit: CORNER_BUDGET,
        });
    }
    Ok(size)
}

/// Visits every `size`-subset of `pool` (increasing order) until `f` returns false.
fn for_each_subset(pool: &[Vertex], size: usize, f: &mut impl FnMut(&[Vertex]) -> bool) {
    fn rec(
        pool: &[Vertex],
        size: usize,
        start: usize,
        chosen: &mut Vec<Vertex>,
        f: &mut impl FnMut(&[Vertex]) -> bool,
    ) -> bool {
        if chosen.len() == size {
            return f(chosen);
        }
        let need = size - chosen.len();
        for i in start..=pool.len().saturating_sub(need) {
            if pool.len() < need {
                break;
            }
            chosen.push(pool[i]);
            let go_on = rec(pool, size, i + 1, chosen, f);
            chosen.pop();
            if !go_on {
                return false;
            }
        }
        true
    }
    rec(pool, size, 0, &mut Vec::with_capacity(size), f);
}

fn scan_k_corners(
    pg: &PeriodicGraph,
    k: usize,
    stop_after: Option<usize>,
    emit: &mut impl FnMut(CornerWitness),
) -> Result<usize> {
    let size = check_budget(pg, k)?;
    let n = pg.n();
    let mut count = 0usize;
    for t in 0..pg.period() {
        let next = pg.snapshot(t + 1);
        let reach: Vec<VertexSet> = (0..n).map(|y| next.closed(y)).collect();
        for x in 0..n {
            let nx = pg.closed(t, x);
            let pool: Vec<Vertex> = (0..n).filter(|&y| y != x).collect();
            let mut stop = false;
            for_each_subset(&pool, size, &mut |ys| {
                let union = ys.iter().fold(0, |acc, &y| acc | reach[y]);
                if nx & !union == 0 {
                    count += 1;
                    emit(CornerWitness {
                        t,
                        corner_vertex: x,
                        covers: ys.to_vec(),
                    });
                    if stop_after.is_some_and(|s| count >= s) {
                        stop = true;
                        return false;
                    }
                }
                true
            });
            if stop {
                return Ok(count);
            }
        }
    }
    Ok(count)
}

/// All k-temporal corners. Cover sets have exactly `min(k, n-1)` distinct
/// vertices; smaller covers are reported through their supersets.
pub fn find_k_temporal_corners(pg: &PeriodicGraph, k: usize) -> Result<Vec<CornerWitness>> {
    let mut out = Vec::new();
    scan_k_corners(pg, k, None, &mut |w| out.push(w))?;
    out.sort();
    Ok(out)
}

/// Counts k-temporal corners, stopping early once `stop_after` are found.
pub fn count_k_temporal_corners(
    pg: &PeriodicGraph,
    k: usize,
    stop_after: Option<usize>,
) -> Result<usize> {
    scan_k_corners(pg, k, stop_after, &mut |_| {})
}

pub fn has_k_temporal_corner(pg: &PeriodicGraph, k: usize) -> Result<bool> {
    Ok(count_k_temporal_corners(pg, k, Some(1))? > 0)
}
