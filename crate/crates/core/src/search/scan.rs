//! Bounded exhaustive scan for small 3-copwin periodic graphs.

use serde::{Deserialize, Serialize};

use super::canon::{all_permutations, is_canonical};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::periodic::PeriodicGraph;
use crate::solver::{cop_number, SolverConfig};

/// Cap on labeled snapshot sequences visited by one scan.
pub const SCAN_LIMIT: u128 = 1 << 28;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanHit {
    pub copnum: usize,
    pub snapshots: Vec<Vec<(Vertex, Vertex)>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanCell {
    pub n: usize,
    pub period: usize,
    pub labeled: u64,
    /// One per relabeling class.
    pub canonical: u64,
    pub temporally_connected: u64,
    /// `by_copnum[c]` counts connected classes with cop number `c`.
    pub by_copnum: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub max_n: usize,
    pub max_period: usize,
    pub cells: Vec<ScanCell>,
    /// Temporally connected instances needing at least 3 cops.
    pub hits: Vec<ScanHit>,
}

/// Enumerates temporally connected periodic graphs with `n ≤ max_n` and
/// period `≤ max_period`, one per relabeling class, and reports those with
/// cop number at least 3.
pub fn smallest_3copwin_scan(max_n: usize, max_period: usize) -> Result<ScanReport> {
    let total: u128 = (1..=max_n)
        .flat_map(|n| (1..=max_period).map(move |p| 1u128 << (n * (n - 1) / 2 * p).min(127)))
        .sum();
    if max_n == 0 || max_period == 0 || total > SCAN_LIMIT {
        return Err(Error::Limit(format!(
            "scan over n ≤ {max_n}, period ≤ {max_period} needs {total} labeled sequences \
             (limit {SCAN_LIMIT})"
        )));
    }
    let config = SolverConfig::from_env();
    let mut cells = Vec::new();
    let mut hits = Vec::new();
    for n in 1..=max_n {
        let pairs: Vec<(Vertex, Vertex)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        let graphs: Vec<Graph> = (0..1u64 << pairs.len())
            .map(|mask| {
                let mut g = Graph::empty(n).expect("small");
                for (i, &(u, v)) in pairs.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        g.add_edge(u, v).expect("valid");
                    }
                }
                g
            })
            .collect();
        let group = all_permutations(n);
        for p in 1..=max_period {
            let mut cell = ScanCell {
                n,
                period: p,
                labeled: 0,
                canonical: 0,
                temporally_connected: 0,
                by_copnum: vec![0; n + 1],
            };
            let mut idx = vec![0usize; p];
            loop {
                cell.labeled += 1;
                let snaps: Vec<Graph> = idx.iter().map(|&i| graphs[i].clone()).collect();
                if is_canonical(&snaps, &group) {
                    cell.canonical += 1;
                    let pg = PeriodicGraph::new(snaps)?;
                    if pg.is_temporally_connected() {
                        cell.temporally_connected += 1;
                        let c = cop_number(&pg, &config)?;
                        cell.by_copnum[c] += 1;
                        if c >= 3 {
                            hits.push(ScanHit {
                                copnum: c,
                                snapshots: pg.snapshots().iter().map(Graph::edges).collect(),
                            });
                        }
                    }
                }
                let mut s = p;
                let done = loop {
                    if s == 0 {
                        break true;
                    }
                    s -= 1;
                    idx[s] += 1;
                    if idx[s] < graphs.len() {
                        break false;
                    }
                    idx[s] = 0;
                };
                if done {
                    break;
                }
            }
            cells.push(cell);
        }
    }
    Ok(ScanReport {
        max_n,
        max_period,
        cells,
        hits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_scan_has_no_three_copwin_instance() {
        let r = smallest_3copwin_scan(3, 2).unwrap();
        assert!(r.hits.is_empty());
        let c = r.cells.iter().find(|c| c.n == 3 && c.period == 1).unwrap();
        assert_eq!(c.labeled, 8);
        // Graphs on 3 vertices: 4 classes, 2 of them connected.
        assert_eq!(c.canonical, 4);
        assert_eq!(c.temporally_connected, 2);
        assert!(smallest_3copwin_scan(6, 3).is_err());
    }
}
