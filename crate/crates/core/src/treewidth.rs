//! Exact tree decompositions of small graphs, smoothing, and the bag
//! strategy for `tw + 1` cops.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bit, members, Graph, Vertex, VertexSet};
use crate::periodic::PeriodicGraph;
use crate::solver::{CopPolicy, PolicyOrigin};

/// Largest graph accepted by [`exact_treewidth`].
pub const TREEWIDTH_LIMIT: usize = 13;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeDecomposition {
    /// Sorted vertex lists.
    pub bags: Vec<Vec<Vertex>>,
    /// Tree edges between bag indices.
    pub edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(1).saturating_sub(1)
    }

    fn mask(&self, x: usize) -> VertexSet {
        self.bags[x].iter().fold(0, |acc, &v| acc | bit(v))
    }

    pub fn neighbors(&self, x: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == x {
                    Some(b)
                } else if b == x {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Bags reachable from `start` in the tree without passing through `block`.
    fn side(&self, start: usize, block: usize) -> Vec<usize> {
        let mut seen = vec![false; self.bags.len()];
        seen[block] = true;
        seen[start] = true;
        let mut stack = vec![start];
        let mut out = Vec::new();
        while let Some(x) = stack.pop() {
            out.push(x);
            for y in self.neighbors(x) {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        out
    }

    /// Checks the tree shape and the three decomposition conditions.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let m = self.bags.len();
        if m == 0 {
            return Err(Error::InvalidDecomposition("no bags".into()));
        }
        if self.edges.len() != m - 1 {
            return Err(Error::InvalidDecomposition(format!(
                "{} bags need {} tree edges, found {}",
                m,
                m - 1,
                self.edges.len()
            )));
        }
        if self.edges.iter().any(|&(a, b)| a >= m || b >= m || a == b) {
            return Err(Error::InvalidDecomposition("tree edge out of range".into()));
        }
        if !self.is_connected_tree() {
            return Err(Error::InvalidDecomposition("bag tree is not connected".into()));
        }
        if let Some(v) = self
            .bags
            .iter()
            .flatten()
            .find(|&&v| v >= g.n())
        {
            return Err(Error::VertexOutOfRange { vertex: *v, n: g.n() });
        }
        let covered = (0..m).fold(0, |acc, x| acc | self.mask(x));
        if let Some(v) = members(g.vertices() & !covered).next() {
            return Err(Error::InvalidDecomposition(format!(
                "vertex {v} is in no bag"
            )));
        }
        let masks: Vec<VertexSet> = (0..m).map(|x| self.mask(x)).collect();
        for (u, v) in g.edges() {
            if !masks.iter().any(|&b| b & bit(u) != 0 && b & bit(v) != 0) {
                return Err(Error::InvalidDecomposition(format!(
                    "edge {u}-{v} is in no bag"
                )));
            }
        }
        for v in 0..g.n() {
            let holding: Vec<usize> = (0..m).filter(|&x| masks[x] & bit(v) != 0).collect();
            // The bags holding v are connected iff they span |holding|-1 tree edges.
            let inner = self
                .edges
                .iter()
                .filter(|&&(a, b)| masks[a] & masks[b] & bit(v) != 0)
                .count();
            if inner + 1 != holding.len() {
                return Err(Error::InvalidDecomposition(format!(
                    "bags containing vertex {v} do not form a subtree"
                )));
            }
        }
        Ok(())
    }

    fn is_connected_tree(&self) -> bool {
        let m = self.bags.len();
        let mut seen = vec![false; m];
        seen[0] = true;
        let mut stack = vec![0];
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for y in self.neighbors(x) {
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count == m
    }

    /// Whether every bag has `width+1` vertices and adjacent bags share `width`.
    pub fn is_smooth(&self) -> bool {
        let k = self.width();
        self.bags.iter().all(|b| b.len() == k + 1)
            && self
                .edges
                .iter()
                .all(|&(a, b)| (self.mask(a) & self.mask(b)).count_ones() as usize == k)
    }

    /// For every tree edge `xy`, `B_x ∩ B_y` separates the vertices only on
    /// the `x` side from those only on the `y` side.
    pub fn separators_hold(&self, g: &Graph) -> bool {
        self.edges.iter().all(|&(x, y)| {
            let sep = self.mask(x) & self.mask(y);
            let side_x = self.side(x, y).iter().fold(0, |acc, &b| acc | self.mask(b)) & !sep;
            let side_y = self.side(y, x).iter().fold(0, |acc, &b| acc | self.mask(b)) & !sep;
            let within = g.vertices() & !sep;
            members(side_x).all(|u| g.reach_within(u, within) & side_y == 0)
        })
    }
}

/// Vertices outside `eliminated ∪ {v}` reachable from `v` through `eliminated`.
fn q_set(g: &Graph, eliminated: VertexSet, v: Vertex) -> VertexSet {
    let reach = g.reach_within(v, eliminated | bit(v));
    g.closed_of_set(reach) & !reach & !eliminated
}

/// Treewidth and an optimal decomposition, by dynamic programming over
/// elimination prefixes.
pub fn exact_treewidth(g: &Graph) -> Result<(usize, TreeDecomposition)> {
    let n = g.n();
    if n == 0 {
        return Err(Error::EmptyVertexSet);
    }
    if n > TREEWIDTH_LIMIT {
        return Err(Error::Limit(format!(
            "exact treewidth needs n ≤ {TREEWIDTH_LIMIT}, got {n}"
        )));
    }
    let full = (1usize << n) - 1;
    // best[S]: minimal max-degree when eliminating exactly S first.
    let mut best = vec![usize::MAX; full + 1];
    let mut choice = vec![0u8; full + 1];
    best[0] = 0;
    for s in 1..=full {
        for v in members(s as VertexSet) {
            let rest = s & !(1 << v);
            let q = q_set(g, rest as VertexSet, v).count_ones() as usize;
            let cand = best[rest].max(q);
            if cand < best[s] {
                best[s] = cand;
                choice[s] = v as u8;
            }
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut s = full;
    while s != 0 {
        let v = choice[s] as usize;
        order.push(v);
        s &= !(1 << v);
    }
    order.reverse();
    let td = from_elimination_order(g, &order);
    debug_assert_eq!(td.width(), best[full]);
    Ok((best[full], td))
}

/// Decomposition induced by eliminating vertices in `order`.
pub fn from_elimination_order(g: &Graph, order: &[Vertex]) -> TreeDecomposition {
    let n = order.len();
    let mut position = vec![0; g.n()];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let mut eliminated: VertexSet = 0;
    let mut bags = Vec::with_capacity(n);
    let mut higher = Vec::with_capacity(n);
    for &v in order {
        let q = q_set(g, eliminated, v);
        let mut bag: Vec<Vertex> = members(q | bit(v)).collect();
        bag.sort_unstable();
        bags.push(bag);
        higher.push(q);
        eliminated |= bit(v);
    }
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for (i, &later) in higher.iter().enumerate().take(n.saturating_sub(1)) {
        let parent = members(later).map(|u| position[u]).min().unwrap_or(i + 1);
        edges.push((i, parent));
    }
    TreeDecomposition { bags, edges }
}

/// Rewrites a valid decomposition so all bags have `width+1` vertices and
/// adjacent bags share exactly `width`.
pub fn smooth(td: &TreeDecomposition, g: &Graph) -> Result<TreeDecomposition> {
    td.validate(g)?;
    let k = td.width();
    let mut bags: Vec<BTreeSet<Vertex>> = td
        .bags
        .iter()
        .map(|b| b.iter().copied().collect())
        .collect();
    let mut edges: Vec<(usize, usize)> = td.edges.clone();
    let mut alive = vec![true; bags.len()];

    loop {
        // Contract any edge whose bags are nested.
        if let Some(pos) = edges
            .iter()
            .position(|&(a, b)| bags[a].is_subset(&bags[b]) || bags[b].is_subset(&bags[a]))
        {
            let (a, b) = edges.remove(pos);
            let (keep, drop) = if bags[a].is_subset(&bags[b]) { (b, a) } else { (a, b) };
            for e in edges.iter_mut() {
                if e.0 == drop {
                    e.0 = keep;
                }
                if e.1 == drop {
                    e.1 = keep;
                }
            }
            alive[drop] = false;
            continue;
        }
        // Grow a short bag from a neighbour.
        let short = edges.iter().find_map(|&(a, b)| {
            if bags[a].len() <= k {
                Some((a, b))
            } else if bags[b].len() <= k {
                Some((b, a))
            } else {
                None
            }
        });
        match short {
            Some((x, y)) => {
                let v = *bags[y].difference(&bags[x]).next().expect("bags are not nested");
                bags[x].insert(v);
            }
            None => break,
        }
    }

    // Subdivide edges whose bags share fewer than k vertices.
    let mut i = 0;
    while i < edges.len() {
        let (x, y) = edges[i];
        if bags[x].intersection(&bags[y]).count() < k {
            let a = *bags[x].difference(&bags[y]).next().expect("distinct bags");
            let b = *bags[y].difference(&bags[x]).next().expect("distinct bags");
            let mut z = bags[x].clone();
            z.remove(&a);
            z.insert(b);
            let zi = bags.len();
            bags.push(z);
            alive.push(true);
            edges[i] = (x, zi);
            edges.push((zi, y));
        } else {
            i += 1;
        }
    }

    let mut index = vec![usize::MAX; bags.len()];
    let mut out_bags = Vec::new();
    for (i, b) in bags.into_iter().enumerate() {
        if alive[i] {
            index[i] = out_bags.len();
            out_bags.push(b.into_iter().collect::<Vec<_>>());
        }
    }
    let mut out_edges: Vec<(usize, usize)> = edges
        .into_iter()
        .map(|(a, b)| {
            let (a, b) = (index[a], index[b]);
            (a.min(b), a.max(b))
        })
        .collect();
    out_edges.sort_unstable();
    let out = TreeDecomposition {
        bags: out_bags,
        edges: out_edges,
    };
    out.validate(g)?;
    debug_assert!(out.is_smooth());
    Ok(out)
}

/// Current bag, plus the bag being moved into and the index of the cop
/// walking there.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BagMemory {
    pub bag: usize,
    pub travel: Option<(usize, usize)>,
}

/// Cops hold a bag; the cop not needed in the next bag toward the robber
/// walks to the one new vertex there while the rest stay put.
#[derive(Clone, Debug)]
pub struct BagStrategy {
    pg: PeriodicGraph,
    td: TreeDecomposition,
    masks: Vec<VertexSet>,
    neighbors: Vec<Vec<usize>>,
    /// `side[x][i]`: vertices in bags on the far side of `neighbors[x][i]`.
    side: Vec<Vec<VertexSet>>,
}

pub fn bag_strategy(pg: &PeriodicGraph, td: &TreeDecomposition) -> Result<BagStrategy> {
    let fp = pg.footprint();
    td.validate(&fp)?;
    if !td.is_smooth() {
        return Err(Error::InvalidDecomposition("decomposition is not smooth".into()));
    }
    if !pg.is_temporally_connected() {
        return Err(Error::Disconnected);
    }
    let m = td.bags.len();
    let masks: Vec<VertexSet> = (0..m).map(|x| td.mask(x)).collect();
    let neighbors: Vec<Vec<usize>> = (0..m).map(|x| td.neighbors(x)).collect();
    let side = (0..m)
        .map(|x| {
            neighbors[x]
                .iter()
                .map(|&y| td.side(y, x).iter().fold(0, |acc, &b| acc | masks[b]))
                .collect()
        })
        .collect();
    Ok(BagStrategy {
        pg: pg.clone(),
        td: td.clone(),
        masks,
        neighbors,
        side,
    })
}

impl BagStrategy {
    pub fn decomposition(&self) -> &TreeDecomposition {
        &self.td
    }
}

impl CopPolicy for BagStrategy {
    type Memory = BagMemory;

    fn num_cops(&self) -> usize {
        self.td.width() + 1
    }

    fn origin(&self) -> PolicyOrigin {
        PolicyOrigin::BagStrategy
    }

    fn place(&self) -> (Vec<Vertex>, BagMemory) {
        (
            self.td.bags[0].clone(),
            BagMemory {
                bag: 0,
                travel: None,
            },
        )
    }

    fn decide(
        &self,
        t: usize,
        cops: &[Vertex],
        robber: Vertex,
        memory: &BagMemory,
    ) -> (Vec<Vertex>, BagMemory) {
        let mut next = cops.to_vec();
        if let Some(i) = cops
            .iter()
            .position(|&c| self.pg.closed(t, c) & bit(robber) != 0)
        {
            next[i] = robber;
            return (next, memory.clone());
        }
        let x = memory.bag;
        let (target, traveler) = match memory.travel {
            Some(tr) => tr,
            None => {
                let Some(i) = (0..self.neighbors[x].len())
                    .find(|&i| self.side[x][i] & bit(robber) != 0)
                else {
                    return (next, memory.clone());
                };
                let y = self.neighbors[x][i];
                let leaving = (self.masks[x] & !self.masks[y]).trailing_zeros() as Vertex;
                let cop = cops
                    .iter()
                    .position(|&c| c == leaving)
                    .expect("cops occupy the current bag");
                (y, cop)
            }
        };
        let goal = (self.masks[target] & !self.masks[x]).trailing_zeros() as Vertex;
        let step = self
            .pg
            .foremost_journey(t, cops[traveler], goal)
            .map(|j| j.vertices.get(1).copied().unwrap_or(goal))
            .unwrap_or(cops[traveler]);
        next[traveler] = step;
        let memory = if step == goal {
            BagMemory {
                bag: target,
                travel: None,
            }
        } else {
            BagMemory {
                bag: x,
                travel: Some((target, traveler)),
            }
        };
        (next, memory)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::verify_policy;

    fn brute_treewidth(g: &Graph) -> usize {
        // Minimum over all elimination orders.
        fn rec(g: &Graph, eliminated: VertexSet, cur: usize, best: &mut usize) {
            if eliminated == g.vertices() {
                *best = (*best).min(cur);
                return;
            }
            for v in members(g.vertices() & !eliminated) {
                let w = cur.max(q_set(g, eliminated, v).count_ones() as usize);
                if w < *best {
                    rec(g, eliminated | bit(v), w, best);
                }
            }
        }
        let mut best = g.n();
        rec(g, 0, 0, &mut best);
        best
    }

    #[test]
    fn known_widths() {
        assert_eq!(exact_treewidth(&Graph::path(6)).unwrap().0, 1);
        assert_eq!(exact_treewidth(&Graph::complete(11)).unwrap().0, 10);
        assert_eq!(exact_treewidth(&Graph::cycle(7)).unwrap().0, 2);
        assert_eq!(exact_treewidth(&Graph::hypercube(3)).unwrap().0, 3);
        let (w, td) = exact_treewidth(&Graph::petersen()).unwrap();
        assert_eq!(w, 4);
        assert_eq!(brute_treewidth(&Graph::petersen()), 4);
        td.validate(&Graph::petersen()).unwrap();
        assert!(exact_treewidth(&Graph::empty(14).unwrap()).is_err());
    }

    #[test]
    fn smoothing_examples() {
        let k4 = Graph::complete(4);
        let single = TreeDecomposition {
            bags: vec![vec![0, 1, 2, 3]],
            edges: vec![],
        };
        assert_eq!(smooth(&single, &k4).unwrap(), single);
        let p4 = Graph::path(4);
        let td = TreeDecomposition {
            bags: vec![vec![0, 1], vec![1, 2], vec![2, 3]],
            edges: vec![(0, 1), (1, 2)],
        };
        assert_eq!(smooth(&td, &p4).unwrap(), td);
        let (_, td) = exact_treewidth(&Graph::petersen()).unwrap();
        let s = smooth(&td, &Graph::petersen()).unwrap();
        assert!(s.is_smooth());
        assert_eq!(s.width(), 4);
        assert!(s.separators_hold(&Graph::petersen()));
    }

    #[test]
    fn invalid_decompositions() {
        let p3 = Graph::path(3);
        let missing_edge = TreeDecomposition {
            bags: vec![vec![0, 1], vec![2]],
            edges: vec![(0, 1)],
        };
        assert!(missing_edge.validate(&p3).is_err());
        let broken = TreeDecomposition {
            bags: vec![vec![0, 1], vec![2, 3], vec![1, 2]],
            edges: vec![(0, 1), (1, 2)],
        };
        assert!(broken.validate(&Graph::path(4)).is_err());
    }

    #[test]
    fn bag_strategy_on_cycles() {
        let c5 = Graph::cycle(5);
        let pg = PeriodicGraph::new(vec![
            Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3)]).unwrap(),
            Graph::from_edges(5, &[(3, 4), (4, 0), (1, 2)]).unwrap(),
        ])
        .unwrap();
        assert_eq!(pg.footprint(), c5);
        let (_, td) = exact_treewidth(&c5).unwrap();
        let policy = bag_strategy(&pg, &smooth(&td, &c5).unwrap()).unwrap();
        let verdict = verify_policy(&pg, &policy).unwrap();
        assert!(verdict.wins);
    }
}
