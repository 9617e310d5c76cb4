#![allow(dead_code)]

use percop::{Graph, PeriodicGraph};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

/// Graph whose edges are the set bits of `mask` over `pairs(n)`.
pub fn from_mask(n: usize, mask: u64) -> Graph {
    let edges: Vec<_> = pairs(n)
        .into_iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, e)| e)
        .collect();
    Graph::from_edges(n, &edges).unwrap()
}

pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, prob: f64) -> Graph {
    let edges: Vec<_> = pairs(n).into_iter().filter(|_| rng.gen_bool(prob)).collect();
    Graph::from_edges(n, &edges).unwrap()
}

/// Random spanning tree plus each remaining pair with probability `extra`.
pub fn random_connected(rng: &mut ChaCha8Rng, n: usize, extra: f64) -> Graph {
    let mut g = Graph::empty(n).unwrap();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        g.add_edge(u, v).unwrap();
    }
    for (u, v) in pairs(n) {
        if !g.has_edge(u, v) && rng.gen_bool(extra) {
            g.add_edge(u, v).unwrap();
        }
    }
    g
}

pub fn random_periodic(rng: &mut ChaCha8Rng, n: usize, p: usize, prob: f64) -> PeriodicGraph {
    PeriodicGraph::new((0..p).map(|_| random_graph(rng, n, prob)).collect()).unwrap()
}

/// Splits the edges of `footprint` over `p` snapshots; every edge lands in
/// at least one of them.
pub fn random_schedule(rng: &mut ChaCha8Rng, footprint: &Graph, p: usize, keep: f64) -> PeriodicGraph {
    let n = footprint.n();
    let mut snaps = vec![Graph::empty(n).unwrap(); p];
    for (u, v) in footprint.edges() {
        let home = rng.gen_range(0..p);
        for (t, g) in snaps.iter_mut().enumerate() {
            if t == home || rng.gen_bool(keep) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    PeriodicGraph::new(snaps).unwrap()
}

/// Every permutation of `0..n`.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Edge mask of `g` with vertices renamed by `perm`.
pub fn permuted_mask(g: &Graph, perm: &[usize]) -> u64 {
    let n = g.n();
    let index = |u: usize, v: usize| {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        pairs(n).iter().position(|&e| e == (a, b)).unwrap()
    };
    g.edges()
        .into_iter()
        .fold(0, |m, (u, v)| m | 1 << index(perm[u], perm[v]))
}

/// One mask per isomorphism class of graphs on `n` vertices.
pub fn class_representatives(n: usize) -> Vec<u64> {
    let perms = permutations(n);
    let m = pairs(n).len();
    (0..1u64 << m)
        .filter(|&mask| {
            let g = from_mask(n, mask);
            perms.iter().all(|p| permuted_mask(&g, p) >= mask)
        })
        .collect()
}
