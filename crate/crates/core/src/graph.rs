//! Finite simple undirected graphs and the classical subroutines used by the
//! game solver, the constructions and the structural bounds.
//!
//! Graphs are stored as adjacency bitmasks, one `u64` per vertex, so vertex
//! sets are plain masks and neighborhood inclusion tests are a single `&`.
//! Reflexivity is a game rule rather than data: [`Graph::closed`] adds the
//! vertex itself, and no self-loop is ever stored.

use std::collections::VecDeque;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};

pub type Vertex = usize;

/// Vertex sets are bitmasks over `0..n`.
pub type VertexSet = u64;

pub const MAX_VERTICES: usize = 64;

/// Exact domination search refuses graphs above this order.
pub const DOMINATION_LIMIT: usize = 20;

#[inline]
pub fn bit(v: Vertex) -> VertexSet {
    1u64 << v
}

/// Iterates the members of a vertex set in increasing order.
pub fn members(mut set: VertexSet) -> impl Iterator<Item = Vertex> {
    std::iter::from_fn(move || {
        if set == 0 {
            None
        } else {
            let v = set.trailing_zeros() as Vertex;
            set &= set - 1;
            Some(v)
        }
    })
}

pub fn full_set(n: usize) -> VertexSet {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// A finite simple undirected graph on `0..n`.
///
/// Labels are display metadata: equality and hashing only look at the
/// vertex count and the edge set.
#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    adj: Vec<VertexSet>,
    labels: Option<Vec<String>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.adj == other.adj
    }
}

impl Eq for Graph {}

impl Hash for Graph {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.adj.hash(state);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComposeMode {
    Union,
    Join,
}

impl Graph {
    pub fn empty(n: usize) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices {
                n,
                max: MAX_VERTICES,
            });
        }
        Ok(Graph {
            n,
            adj: vec![0; n],
            labels: None,
        })
    }

    /// Builds a graph from an edge list, rejecting self-loops, out-of-range
    /// endpoints and repeated pairs.
    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in edges {
            if !g.add_edge(u, v)? {
                let (a, b) = if u < v { (u, v) } else { (v, u) };
                return Err(Error::DuplicateEdge(a, b));
            }
        }
        Ok(g)
    }

    /// Inserts `{u,v}`; returns whether the edge is new.
    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<bool> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        let fresh = self.adj[u] & bit(v) == 0;
        self.adj[u] |= bit(v);
        self.adj[v] |= bit(u);
        Ok(fresh)
    }

    pub fn remove_edge(&mut self, u: Vertex, v: Vertex) -> bool {
        if u >= self.n || v >= self.n {
            return false;
        }
        let present = self.adj[u] & bit(v) != 0;
        self.adj[u] &= !bit(v);
        self.adj[v] &= !bit(u);
        present
    }

    /// Flips the presence of `{u,v}`; both endpoints must be valid and distinct.
    pub fn toggle_edge(&mut self, u: Vertex, v: Vertex) {
        debug_assert!(u != v && u < self.n && v < self.n);
        self.adj[u] ^= bit(v);
        self.adj[v] ^= bit(u);
    }

    fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v >= self.n {
            Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.n,
            })
        } else {
            Ok(())
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        debug_assert_eq!(labels.len(), self.n);
        self.labels = Some(labels);
        self
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> VertexSet {
        full_set(self.n)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n && v < self.n && self.adj[u] & bit(v) != 0
    }

    /// Open neighborhood `N(u)`.
    #[inline]
    pub fn neighbors(&self, u: Vertex) -> VertexSet {
        self.adj[u]
    }

    /// Closed neighborhood `N[u]`; always contains `u`.
    #[inline]
    pub fn closed(&self, u: Vertex) -> VertexSet {
        self.adj[u] | bit(u)
    }

    /// Union of closed neighborhoods over a vertex set.
    pub fn closed_of_set(&self, set: VertexSet) -> VertexSet {
        members(set).fold(0, |acc, v| acc | self.closed(v))
    }

    pub fn degree(&self, u: Vertex) -> usize {
        self.adj[u].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges as sorted pairs `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for v in members(self.adj[u] & !full_set(u + 1)) {
                out.push((u, v));
            }
        }
        out
    }

    pub fn adjacency(&self) -> &[VertexSet] {
        &self.adj
    }

    /// Edge-set union of two graphs on the same vertex count.
    pub fn union_with(&mut self, other: &Graph) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.adj.iter_mut().zip(&other.adj) {
            *a |= *b;
        }
    }

    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.n == other.n && self.adj.iter().zip(&other.adj).all(|(a, b)| a & !b == 0)
    }

    /// Subgraph induced by `vs`, relabeled `0..|vs|` in the order given.
    pub fn induced(&self, vs: &[Vertex]) -> Result<Graph> {
        let mut g = Graph::empty(vs.len())?;
        for (i, &u) in vs.iter().enumerate() {
            self.check_vertex(u)?;
            for (j, &v) in vs.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(i, j)?;
                }
            }
        }
        if let Some(labels) = &self.labels {
            g.labels = Some(vs.iter().map(|&v| labels[v].clone()).collect());
        }
        Ok(g)
    }

    /// BFS distances from `src`; `None` for unreachable vertices.
    pub fn distances_from(&self, src: Vertex) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        let mut queue = VecDeque::new();
        dist[src] = Some(0);
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap();
            for v in members(self.adj[u]) {
                if dist[v].is_none() {
                    dist[v] = Some(d + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Vertices reachable from `src` inside `within` (which must contain `src`).
    pub fn reach_within(&self, src: Vertex, within: VertexSet) -> VertexSet {
        let mut seen = bit(src);
        let mut frontier = bit(src);
        while frontier != 0 {
            let mut next = 0;
            for u in members(frontier) {
                next |= self.adj[u];
            }
            next &= within & !seen;
            seen |= next;
            frontier = next;
        }
        seen
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.reach_within(0, self.vertices()) == self.vertices()
    }

    /// Connected components as vertex sets, ordered by smallest member.
    pub fn components(&self) -> Vec<VertexSet> {
        let mut left = self.vertices();
        let mut out = Vec::new();
        while left != 0 {
            let v = left.trailing_zeros() as Vertex;
            let comp = self.reach_within(v, self.vertices());
            out.push(comp);
            left &= !comp;
        }
        out
    }

    pub fn eccentricity(&self, v: Vertex) -> Option<usize> {
        self.distances_from(v)
            .into_iter()
            .try_fold(0, |acc, d| d.map(|d| acc.max(d)))
    }

    /// `r(H) = min_x max_y d(x, y)`.
    pub fn radius(&self) -> Result<usize> {
        if self.n == 0 || !self.is_connected() {
            return Err(Error::RadiusUndefined);
        }
        Ok((0..self.n)
            .filter_map(|v| self.eccentricity(v))
            .min()
            .expect("nonempty connected graph"))
    }

    pub fn diameter(&self) -> Result<usize> {
        if self.n == 0 || !self.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok((0..self.n)
            .filter_map(|v| self.eccentricity(v))
            .max()
            .expect("nonempty connected graph"))
    }

    /// Smallest-index vertex of minimum eccentricity.
    pub fn center(&self) -> Result<Vertex> {
        let r = self.radius()?;
        Ok((0..self.n)
            .find(|&v| self.eccentricity(v) == Some(r))
            .expect("radius is attained"))
    }

    pub fn is_acyclic(&self) -> bool {
        self.edge_count() + self.components().len() == self.n
    }

    pub fn is_tree(&self) -> bool {
        self.n > 0 && self.is_connected() && self.edge_count() + 1 == self.n
    }

    /// Length of a shortest cycle; `None` for forests.
    pub fn girth(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for root in 0..self.n {
            let mut dist = vec![usize::MAX; self.n];
            let mut parent = vec![usize::MAX; self.n];
            let mut queue = VecDeque::new();
            dist[root] = 0;
            queue.push_back(root);
            while let Some(u) = queue.pop_front() {
                if let Some(b) = best {
                    if 2 * dist[u] + 1 >= b {
                        break;
                    }
                }
                for w in members(self.adj[u]) {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        queue.push_back(w);
                    } else if parent[u] != w {
                        let len = dist[u] + dist[w] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }

    /// Composes `self` with `other` shifted by `offset`.
    ///
    /// `Union` keeps both edge sets; `Join` additionally links every vertex
    /// of `self` to every vertex of the shifted `other`.
    pub fn compose(&self, other: &Graph, offset: usize, mode: ComposeMode) -> Result<Graph> {
        if offset < self.n {
            return Err(Error::VertexCollision { offset, n: self.n });
        }
        let n = offset + other.n;
        let mut g = Graph::empty(n)?;
        for (u, v) in self.edges() {
            g.add_edge(u, v)?;
        }
        for (u, v) in other.edges() {
            g.add_edge(u + offset, v + offset)?;
        }
        if mode == ComposeMode::Join {
            for u in 0..self.n {
                for v in 0..other.n {
                    g.add_edge(u, v + offset)?;
                }
            }
        }
        if self.labels.is_some() || other.labels.is_some() {
            let mut labels: Vec<String> = (0..n).map(|v| v.to_string()).collect();
            if let Some(l) = &self.labels {
                labels[..self.n].clone_from_slice(l);
            }
            if let Some(l) = &other.labels {
                labels[offset..].clone_from_slice(l);
            }
            g.labels = Some(labels);
        }
        Ok(g)
    }

    /// Minimum dominating set by branch and bound (exact, `n ≤ 20`).
    pub fn minimum_dominating_set(&self) -> Result<Vec<Vertex>> {
        if self.n > DOMINATION_LIMIT {
            return Err(Error::DominationLimit {
                n: self.n,
                limit: DOMINATION_LIMIT,
            });
        }
        if self.n == 0 {
            return Ok(Vec::new());
        }
        let closed: Vec<VertexSet> = (0..self.n).map(|v| self.closed(v)).collect();
        let max_cover = closed.iter().map(|c| c.count_ones()).max().unwrap_or(1);
        let mut best: Vec<Vertex> = self.greedy_dominating_set();
        let mut current = Vec::new();
        dominate(
            &closed,
            self.vertices(),
            max_cover,
            &mut current,
            &mut best,
        );
        best.sort_unstable();
        Ok(best)
    }

    pub fn domination_number(&self) -> Result<usize> {
        self.minimum_dominating_set().map(|d| d.len())
    }

    /// Greedy dominating set (an upper bound for any order).
    pub fn greedy_dominating_set(&self) -> Vec<Vertex> {
        let mut undominated = self.vertices();
        let mut out = Vec::new();
        while undominated != 0 {
            let v = (0..self.n)
                .max_by_key(|&v| ((self.closed(v) & undominated).count_ones(), std::cmp::Reverse(v)))
                .expect("nonempty");
            out.push(v);
            undominated &= !self.closed(v);
        }
        out.sort_unstable();
        out
    }

    /// Vertices `u` whose closed neighborhood (inside `alive`) is contained in
    /// that of some other alive vertex.
    fn find_corner(&self, alive: VertexSet) -> Option<Vertex> {
        for u in members(alive) {
            let nu = self.closed(u) & alive;
            for v in members(nu & !bit(u)) {
                if nu & !(self.closed(v) & alive) == 0 {
                    return Some(u);
                }
            }
        }
        None
    }

    /// Dismantling order if one exists: repeatedly removes a dominated vertex
    /// until one vertex remains. `None` when the graph is not dismantlable.
    pub fn dismantling_order(&self) -> Option<Vec<Vertex>> {
        if self.n == 0 {
            return None;
        }
        let mut alive = self.vertices();
        let mut order = Vec::with_capacity(self.n);
        while alive.count_ones() > 1 {
            let u = self.find_corner(alive)?;
            alive &= !bit(u);
            order.push(u);
        }
        order.push(alive.trailing_zeros() as Vertex);
        Some(order)
    }

    /// Whether the graph dismantles to a single vertex (copwin for static
    /// graphs). The empty graph is not dismantlable.
    pub fn dismantle(&self) -> bool {
        self.dismantling_order().is_some()
    }

    /// BFS spanning tree rooted at `root`, as a graph on the same vertices.
    pub fn bfs_tree(&self, root: Vertex) -> Result<Graph> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        let mut t = Graph::empty(self.n)?;
        let mut seen = bit(root);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for v in members(self.adj[u] & !seen) {
                seen |= bit(v);
                t.add_edge(u, v)?;
                queue.push_back(v);
            }
        }
        t.labels = self.labels.clone();
        Ok(t)
    }

    /// Spanning trees whose edge union is `E(g)`.
    ///
    /// The first tree is a BFS tree from a minimum-eccentricity vertex; each
    /// following tree takes as many uncovered edges as it can before being
    /// completed with covered ones.
    pub fn spanning_tree_cover(&self) -> Result<Vec<Graph>> {
        if self.n == 0 || !self.is_connected() {
            return Err(Error::Disconnected);
        }
        let first = self.bfs_tree(self.center()?)?;
        let mut covered = first.clone();
        let mut trees = vec![first];
        let all = self.edges();
        while covered.edge_count() < self.edge_count() {
            let mut uf = UnionFind::new(self.n);
            let mut t = Graph::empty(self.n)?;
            let (fresh, old): (Vec<_>, Vec<_>) =
                all.iter().partition(|&&(u, v)| !covered.has_edge(u, v));
            for &(u, v) in fresh.iter().chain(old.iter()) {
                if uf.union(u, v) {
                    t.add_edge(u, v)?;
                }
            }
            covered.union_with(&t);
            t.labels = self.labels.clone();
            trees.push(t);
        }
        Ok(trees)
    }

    // Named graphs.

    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges).expect("path")
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "cycles need at least 3 vertices");
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges).expect("cycle")
    }

    pub fn complete(n: usize) -> Graph {
        let mut g = Graph::empty(n).expect("complete graph size");
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    }

    /// Hypercube `Q_d`; vertex `i` is the bit string of `i`.
    pub fn hypercube(d: usize) -> Graph {
        let n = 1usize << d;
        let mut g = Graph::empty(n).expect("hypercube size");
        for u in 0..n {
            for b in 0..d {
                let v = u ^ (1 << b);
                if u < v {
                    g.add_edge(u, v).unwrap();
                }
            }
        }
        g
    }

    /// Petersen graph labeled `a..j`: outer cycle `a b c d e`, spokes
    /// `a-f b-g c-h d-i e-j`, inner cycle `f h j g i`.
    pub fn petersen() -> Graph {
        let (a, b, c, d, e, f, g, h, i, j) = (0, 1, 2, 3, 4, 5, 6, 7, 8, 9);
        let edges = [
            (a, b),
            (b, c),
            (c, d),
            (d, e),
            (e, a),
            (a, f),
            (b, g),
            (c, h),
            (d, i),
            (e, j),
            (f, h),
            (h, j),
            (j, g),
            (g, i),
            (i, f),
        ];
        Graph::from_edges(10, &edges)
            .unwrap()
            .with_labels(letters(10))
    }

    /// Two 4-cycles `(0,1,2,3)` and `(0,4,5,6)` sharing the hub `0`.
    pub fn bowtie() -> Graph {
        Graph::from_edges(
            7,
            &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (4, 5), (5, 6), (6, 0)],
        )
        .unwrap()
    }
}

/// Labels `a`, `b`, … for the first `n` vertices.
pub fn letters(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| ((b'a' + i as u8) as char).to_string())
        .collect()
}

fn dominate(
    closed: &[VertexSet],
    undominated: VertexSet,
    max_cover: u32,
    current: &mut Vec<Vertex>,
    best: &mut Vec<Vertex>,
) {
    if undominated == 0 {
        if current.len() < best.len() {
            *best = current.clone();
        }
        return;
    }
    // Each added vertex covers at most `max_cover` vertices.
    let lower = undominated.count_ones().div_ceil(max_cover) as usize;
    if current.len() + lower >= best.len() {
        return;
    }
    let u = undominated.trailing_zeros() as Vertex;
    let mut options: Vec<Vertex> = members(closed[u]).collect();
    options.sort_by_key(|&v| std::cmp::Reverse((closed[v] & undominated).count_ones()));
    for v in options {
        current.push(v);
        dominate(
            closed,
            undominated & !closed[v],
            max_cover,
            current,
            best,
        );
        current.pop();
    }
}

/// A homomorphism from `source` onto the subgraph induced by
/// `target_vertices` that fixes every target vertex.
#[derive(Clone, Debug)]
pub struct Retraction {
    pub source: Graph,
    pub target_vertices: Vec<Vertex>,
    pub map: Vec<Vertex>,
}

impl Retraction {
    pub fn check(&self) -> Result<bool> {
        is_retraction(&self.source, &self.target_vertices, &self.map)
    }
}

pub fn check_retraction(r: &Retraction) -> Result<bool> {
    r.check()
}

/// Whether `map` retracts `source` onto `source[target]`.
///
/// Errors when the map is not total or sends a vertex outside `V`.
pub fn is_retraction(source: &Graph, target: &[Vertex], map: &[Vertex]) -> Result<bool> {
    if map.len() != source.n() {
        return Err(Error::InvalidRetraction(format!(
            "map has {} entries for {} vertices",
            map.len(),
            source.n()
        )));
    }
    if let Some(&v) = map.iter().chain(target).find(|&&v| v >= source.n()) {
        return Err(Error::InvalidRetraction(format!("vertex {v} outside V")));
    }
    let h: VertexSet = target.iter().fold(0, |acc, &v| acc | bit(v));
    if target.iter().any(|&v| map[v] != v) {
        return Ok(false);
    }
    if map.iter().any(|&v| h & bit(v) == 0) {
        return Ok(false);
    }
    Ok(source.edges().into_iter().all(|(u, v)| {
        let (a, b) = (map[u], map[v]);
        a == b || source.has_edge(a, b)
    }))
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = x;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}
