//! Periodic temporal graphs, their footprints, arenas and journeys.

use crate::error::{Error, Result};
use crate::graph::{bit, members, Graph, Vertex, VertexSet};

/// A periodic sequence `(G_0, …, G_{p-1})` of graphs on a shared vertex set.
/// Time indices are taken modulo the period everywhere.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PeriodicGraph {
    n: usize,
    snapshots: Vec<Graph>,
}

impl PeriodicGraph {
    pub fn new(snapshots: Vec<Graph>) -> Result<Self> {
        let n = snapshots.first().ok_or(Error::EmptyPeriod)?.n();
        for (index, g) in snapshots.iter().enumerate() {
            if g.n() != n {
                return Err(Error::SnapshotSize {
                    index,
                    found: g.n(),
                    expected: n,
                });
            }
        }
        Ok(PeriodicGraph { n, snapshots })
    }

    /// The same graph repeated `p` times.
    pub fn constant(g: &Graph, p: usize) -> Result<Self> {
        if p == 0 {
            return Err(Error::EmptyPeriod);
        }
        PeriodicGraph::new(vec![g.clone(); p])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn period(&self) -> usize {
        self.snapshots.len()
    }

    /// `G_t` for any `t ≥ 0`.
    pub fn snapshot(&self, t: usize) -> &Graph {
        &self.snapshots[t % self.snapshots.len()]
    }

    pub fn snapshots(&self) -> &[Graph] {
        &self.snapshots
    }

    /// `N_t[u]`.
    #[inline]
    pub fn closed(&self, t: usize, u: Vertex) -> VertexSet {
        self.snapshot(t).closed(u)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.snapshots[0].labels()
    }

    pub fn with_labels(self, labels: Vec<String>) -> Self {
        PeriodicGraph {
            n: self.n,
            snapshots: self
                .snapshots
                .into_iter()
                .map(|g| g.with_labels(labels.clone()))
                .collect(),
        }
    }

    /// Graph on `V` whose edge set is the union of all snapshot edge sets.
    pub fn footprint(&self) -> Graph {
        let mut g = self.snapshots[0].clone();
        for s in &self.snapshots[1..] {
            g.union_with(s);
        }
        g
    }

    pub fn build_arena(&self) -> Arena {
        Arena {
            period: self.period(),
            n: self.n,
            out: self
                .snapshots
                .iter()
                .map(|g| (0..self.n).map(|u| g.closed(u)).collect())
                .collect(),
        }
    }

    /// For periodic graphs this is exactly connectivity of the footprint.
    pub fn is_temporally_connected(&self) -> bool {
        self.footprint().is_connected()
    }

    /// Earliest-arrival journey from `u` (at time `t_start`) to `v`, searched
    /// over `n·p` steps. Each step follows an edge of the current snapshot or
    /// stays put.
    pub fn foremost_journey(&self, t_start: usize, u: Vertex, v: Vertex) -> Option<Journey> {
        let horizon = self.n * self.period();
        let mut reached = bit(u);
        // layers[i]: vertices reachable after i steps.
        let mut layers: Vec<VertexSet> = vec![reached];
        let mut step = 0;
        while reached & bit(v) == 0 {
            if step >= horizon {
                return None;
            }
            let g = self.snapshot(t_start + step);
            let next = g.closed_of_set(reached);
            layers.push(next);
            reached = next;
            step += 1;
        }
        // Walk back: at each earlier layer pick the smallest vertex adjacent
        // (in that layer's snapshot) to the current one.
        let mut path = vec![v];
        let mut cur = v;
        for i in (0..step).rev() {
            let g = self.snapshot(t_start + i);
            let prev = (layers[i] & g.closed(cur)).trailing_zeros() as Vertex;
            path.push(prev);
            cur = prev;
        }
        path.reverse();
        debug_assert_eq!(path[0], u);
        Some(Journey {
            start_time: t_start,
            vertices: path,
        })
    }

    /// Induced periodic subgraph on the sorted, deduplicated `vs`. Returns the
    /// new instance and the map from new indices to original vertices.
    pub fn induced(&self, vs: &[Vertex]) -> Result<(PeriodicGraph, Vec<Vertex>)> {
        if vs.is_empty() {
            return Err(Error::EmptyVertexSet);
        }
        let mut keep = vs.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let snapshots = self
            .snapshots
            .iter()
            .map(|g| g.induced(&keep))
            .collect::<Result<Vec<_>>>()?;
        Ok((PeriodicGraph::new(snapshots)?, keep))
    }

    /// Attaches a path of `target_n - n` new vertices at `attach`, present in
    /// every snapshot.
    pub fn pad(&self, target_n: usize, attach: Vertex) -> Result<PeriodicGraph> {
        if self.period() < 2 {
            return Err(Error::PaddingPeriod);
        }
        if target_n < self.n {
            return Err(Error::PaddingTarget {
                target: target_n,
                n: self.n,
            });
        }
        if attach >= self.n {
            return Err(Error::VertexOutOfRange {
                vertex: attach,
                n: self.n,
            });
        }
        if target_n == self.n {
            return Ok(self.clone());
        }
        let labels = self.labels().map(|l| {
            let mut l = l.to_vec();
            l.extend((self.n..target_n).map(|i| format!("p{}", i - self.n + 1)));
            l
        });
        let mut snapshots = Vec::with_capacity(self.period());
        for g in &self.snapshots {
            let mut h = Graph::empty(target_n)?;
            for (a, b) in g.edges() {
                h.add_edge(a, b)?;
            }
            let mut prev = attach;
            for w in self.n..target_n {
                h.add_edge(prev, w)?;
                prev = w;
            }
            if let Some(l) = &labels {
                h = h.with_labels(l.clone());
            }
            snapshots.push(h);
        }
        PeriodicGraph::new(snapshots)
    }
}

/// A time-respecting walk; `vertices[i]` is the position at time
/// `start_time + i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Journey {
    pub start_time: usize,
    pub vertices: Vec<Vertex>,
}

impl Journey {
    pub fn arrival_time(&self) -> usize {
        self.start_time + self.vertices.len() - 1
    }
}

/// Layered directed view of a periodic graph on `Z_p × V`: temporal node
/// `(t, u)` has an out-edge to `([t+1]_p, v)` exactly when `v ∈ N_t[u]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arena {
    period: usize,
    n: usize,
    out: Vec<Vec<VertexSet>>,
}

impl Arena {
    pub fn period(&self) -> usize {
        self.period
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Projection of the out-neighborhood of `(t, u)` onto `V`.
    pub fn projected(&self, t: usize, u: Vertex) -> VertexSet {
        self.out[t % self.period][u]
    }

    pub fn out_neighbors(&self, t: usize, u: Vertex) -> Vec<(usize, Vertex)> {
        let t = t % self.period;
        let next = (t + 1) % self.period;
        members(self.out[t][u]).map(|v| (next, v)).collect()
    }

    pub fn has_edge(&self, from: (usize, Vertex), to: (usize, Vertex)) -> bool {
        from.0 < self.period
            && to.0 == (from.0 + 1) % self.period
            && self.out[from.0][from.1] & bit(to.1) != 0
    }

    pub fn edges(&self) -> Vec<((usize, Vertex), (usize, Vertex))> {
        let mut out = Vec::new();
        for t in 0..self.period {
            for u in 0..self.n {
                for to in self.out_neighbors(t, u) {
                    out.push(((t, u), to));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.out
            .iter()
            .flatten()
            .map(|m| m.count_ones() as usize)
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig2() -> PeriodicGraph {
        // a=0, b=1, c=2. N_0[c] = {b,c}; N_1[a] = {a,b,c}.
        let g0 = Graph::from_edges(3, &[(1, 2)]).unwrap();
        let g1 = Graph::from_edges(3, &[(0, 1), (0, 2)]).unwrap();
        PeriodicGraph::new(vec![g0, g1]).unwrap()
    }

    /// Reachability over the time-expanded graph, one step at a time.
    fn journey_exists(pg: &PeriodicGraph, t: usize, u: Vertex, v: Vertex) -> bool {
        let mut reach = vec![false; pg.n()];
        reach[u] = true;
        for step in 0..=pg.n() * pg.period() {
            if reach[v] {
                return true;
            }
            let g = pg.snapshot(t + step);
            let mut next = reach.clone();
            for (a, b) in g.edges() {
                next[a] |= reach[b];
                next[b] |= reach[a];
            }
            reach = next;
        }
        reach[v]
    }

    #[test]
    fn arena_of_fig2() {
        let a = fig2().build_arena();
        assert_eq!(a.projected(0, 2), 0b110);
        assert_eq!(a.projected(1, 0), 0b111);
        assert!(a.has_edge((0, 2), (1, 1)));
        assert!(!a.has_edge((0, 2), (1, 0)));
        assert!(a.has_edge((1, 0), (0, 2)));
        assert!(!a.has_edge((1, 0), (1, 2)));
    }

    #[test]
    fn arena_edge_count_formula() {
        let pg = fig2();
        let expected: usize = pg
            .snapshots()
            .iter()
            .map(|g| g.n() + 2 * g.edge_count())
            .sum();
        let arena = pg.build_arena();
        assert_eq!(arena.edge_count(), expected);
        assert_eq!(arena.edges().len(), expected);

        let k1 = PeriodicGraph::constant(&Graph::empty(1).unwrap(), 1).unwrap();
        let a = k1.build_arena();
        assert_eq!(a.edges(), vec![((0, 0), (0, 0))]);
    }

    #[test]
    fn every_node_can_stay() {
        let pg = fig2();
        let a = pg.build_arena();
        for t in 0..2 {
            for u in 0..3 {
                assert!(a.has_edge((t, u), ((t + 1) % 2, u)));
            }
        }
    }

    #[test]
    fn journeys_on_static_path() {
        let pg = PeriodicGraph::constant(&Graph::path(3), 1).unwrap();
        let j = pg.foremost_journey(0, 0, 2).unwrap();
        assert_eq!(j.arrival_time(), 2);
        assert_eq!(j.vertices, vec![0, 1, 2]);
        let j = pg.foremost_journey(5, 1, 1).unwrap();
        assert_eq!(j.arrival_time(), 5);
        assert_eq!(j.vertices, vec![1]);
    }

    #[test]
    fn disconnected_is_not_temporally_connected() {
        for p in 1..4 {
            let pg = PeriodicGraph::constant(&Graph::empty(2).unwrap(), p).unwrap();
            assert!(!pg.is_temporally_connected());
            assert!(pg.foremost_journey(0, 0, 1).is_none());
        }
    }

    #[test]
    fn temporal_connectivity_matches_journeys_exhaustively() {
        for n in 1..=4usize {
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .collect();
            let m = pairs.len();
            for p in 1..=2usize {
                for code in 0u64..(1u64 << (m * p)) {
                    let snaps: Vec<Graph> = (0..p)
                        .map(|t| {
                            let mut g = Graph::empty(n).unwrap();
                            for (i, &(u, v)) in pairs.iter().enumerate() {
                                if code >> (t * m + i) & 1 == 1 {
                                    g.add_edge(u, v).unwrap();
                                }
                            }
                            g
                        })
                        .collect();
                    let pg = PeriodicGraph::new(snaps).unwrap();
                    let all = (0..p).all(|t| {
                        (0..n).all(|u| (0..n).all(|v| journey_exists(&pg, t, u, v)))
                    });
                    assert_eq!(pg.is_temporally_connected(), all);
                    if all {
                        for u in 0..n {
                            for v in 0..n {
                                let j = pg.foremost_journey(1, u, v).unwrap();
                                assert!(j.arrival_time() - 1 <= n * p);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn journey_steps_are_feasible() {
        let pg = fig2();
        let j = pg.foremost_journey(1, 2, 1).unwrap();
        for (i, w) in j.vertices.windows(2).enumerate() {
            assert!(pg.closed(j.start_time + i, w[0]) & bit(w[1]) != 0);
        }
    }

    #[test]
    fn induced_and_padding() {
        let pg = fig2();
        let (sub, map) = pg.induced(&[2, 0]).unwrap();
        assert_eq!(map, vec![0, 2]);
        assert_eq!(sub.snapshot(1).edges(), vec![(0, 1)]);
        assert_eq!(sub.snapshot(0).edge_count(), 0);
        let (same, _) = pg.induced(&[0, 1, 2]).unwrap();
        assert_eq!(same, pg);
        assert_eq!(pg.induced(&[]), Err(Error::EmptyVertexSet));

        assert_eq!(pg.pad(3, 0).unwrap(), pg);
        let padded = pg.pad(5, 1).unwrap();
        assert_eq!(padded.n(), 5);
        assert_eq!(padded.period(), 2);
        let mut expected = Graph::empty(5).unwrap();
        for (u, v) in pg.footprint().edges() {
            expected.add_edge(u, v).unwrap();
        }
        expected.add_edge(1, 3).unwrap();
        expected.add_edge(3, 4).unwrap();
        assert_eq!(padded.footprint(), expected);
        assert_eq!(pg.pad(2, 0), Err(Error::PaddingTarget { target: 2, n: 3 }));
        let static_pg = PeriodicGraph::constant(&Graph::path(3), 1).unwrap();
        assert_eq!(static_pg.pad(5, 0), Err(Error::PaddingPeriod));
    }
}
