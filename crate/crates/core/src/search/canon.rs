//! Canonical forms of snapshot sequences under vertex relabeling.

use super::{edge_list, FootprintConstraint, SearchSpec, Shape};
use crate::error::Result;
use crate::graph::{Graph, Vertex};

/// Relabeling groups are only built for graphs this small.
const GROUP_LIMIT: usize = 9;

/// Adjacency of each snapshot packed into `u128` bits `u·n + v` (`u < v`).
pub fn canonical_code(graphs: &[Graph]) -> Vec<u128> {
    graphs.iter().map(|g| code_under(g, None)).collect()
}

fn code_under(g: &Graph, perm: Option<&[Vertex]>) -> u128 {
    let n = g.n();
    let mut code = 0u128;
    for (u, v) in g.edges() {
        let (a, b) = match perm {
            Some(p) => (p[u], p[v]),
            None => (u, v),
        };
        let (a, b) = (a.min(b), a.max(b));
        code |= 1u128 << (a * n + b);
    }
    code
}

/// Whether no relabeling in `group` gives a lexicographically smaller code.
pub(super) fn is_canonical(graphs: &[Graph], group: &[Vec<Vertex>]) -> bool {
    let own = canonical_code(graphs);
    group.iter().all(|perm| {
        for (g, &mine) in graphs.iter().zip(&own) {
            let theirs = code_under(g, Some(perm));
            if theirs != mine {
                return theirs > mine;
            }
        }
        true
    })
}

fn maps_edges_onto_themselves(edges: &[(Vertex, Vertex)], perm: &[Vertex]) -> bool {
    let mut mapped: Vec<_> = edges
        .iter()
        .map(|&(u, v)| (perm[u].min(perm[v]), perm[u].max(perm[v])))
        .collect();
    mapped.sort_unstable();
    mapped == edges
}

fn maps_set_onto_itself(set: &[Vertex], perm: &[Vertex]) -> bool {
    let mut a = set.to_vec();
    a.sort_unstable();
    let mut b: Vec<Vertex> = set.iter().map(|&v| perm[v]).collect();
    b.sort_unstable();
    a == b
}

/// Vertex permutations preserving every labeled ingredient of `spec`
/// (allowed edges, footprint, required edges, target vertex sets). Empty when
/// `n` is too large to enumerate.
pub fn relabeling_group(spec: &SearchSpec) -> Result<Vec<Vec<Vertex>>> {
    let n = spec.n;
    if n > GROUP_LIMIT {
        return Ok(Vec::new());
    }
    let mut edge_sets: Vec<Vec<(Vertex, Vertex)>> = Vec::new();
    if let Shape::SubgraphOf { edges } = &spec.snapshot.shape {
        edge_sets.push(edge_list(edges));
    }
    let mut fixed_sets: Vec<Vec<Vertex>> = Vec::new();
    for f in &spec.footprint {
        match f {
            FootprintConstraint::Equals { edges } => edge_sets.push(edge_list(edges)),
            FootprintConstraint::UniversalVertex { vertex } => fixed_sets.push(vec![*vertex]),
            _ => {}
        }
    }
    let pattern = spec.pattern.clone().unwrap_or_else(|| (0..spec.period).collect());
    let slots = pattern.iter().max().map_or(0, |m| m + 1);
    for s in 0..slots {
        let req: Vec<[Vertex; 2]> = spec
            .required_edges
            .iter()
            .filter(|e| pattern[e[0]] == s)
            .map(|e| [e[1], e[2]])
            .collect();
        if !req.is_empty() {
            edge_sets.push(edge_list(&req));
        }
    }
    let t = &spec.targets;
    if let Some(i) = &t.induced {
        fixed_sets.push(i.keep.clone());
    }
    if let Some(h) = &t.no_common_retraction {
        fixed_sets.push(h.clone());
    }
    if let Some(p) = &t.placement {
        fixed_sets.push(p.cops.clone());
    }
    let mut group = Vec::new();
    let mut perm: Vec<Vertex> = (0..n).collect();
    permutations(&mut perm, 0, &mut |p| {
        if edge_sets.iter().all(|e| maps_edges_onto_themselves(e, p))
            && fixed_sets.iter().all(|s| maps_set_onto_itself(s, p))
        {
            group.push(p.to_vec());
        }
    });
    Ok(group)
}

fn permutations(p: &mut Vec<Vertex>, i: usize, f: &mut impl FnMut(&[Vertex])) {
    if i == p.len() {
        f(p);
        return;
    }
    for j in i..p.len() {
        p.swap(i, j);
        permutations(p, i + 1, f);
        p.swap(i, j);
    }
}

/// All permutations of `0..n`.
pub(super) fn all_permutations(n: usize) -> Vec<Vec<Vertex>> {
    let mut out = Vec::new();
    permutations(&mut (0..n).collect(), 0, &mut |p| out.push(p.to_vec()));
    out
}
