mod common;

use std::collections::VecDeque;

use proptest::prelude::*;

use percop::corners::{count_k_temporal_corners, find_k_temporal_corners, find_temporal_corners};
use percop::io::{self, InstanceFile};
use percop::solver::trace::{extract_trace, RobberPlay};
use percop::solver::{cop_number, cop_number_cap, is_k_copwin, triple, SolverConfig};
use percop::treewidth::{exact_treewidth, smooth};
use percop::{Graph, PeriodicGraph};

use common::{from_mask, pairs, permutations};

fn cfg() -> SolverConfig {
    SolverConfig::default()
}

prop_compose! {
    fn periodic(max_n: usize, max_p: usize)
        (n in 1..=max_n, p in 1..=max_p)
        (masks in prop::collection::vec(0u64..(1u64 << pairs(n).len()), p), n in Just(n))
        -> PeriodicGraph
    {
        PeriodicGraph::new(masks.iter().map(|&m| from_mask(n, m)).collect()).unwrap()
    }
}

prop_compose! {
    fn graph(max_n: usize)(n in 1..=max_n)(mask in 0u64..(1u64 << pairs(n).len()), n in Just(n)) -> Graph {
        from_mask(n, mask)
    }
}

fn relabel(pg: &PeriodicGraph, perm: &[usize]) -> PeriodicGraph {
    let snaps = pg
        .snapshots()
        .iter()
        .map(|g| {
            let edges: Vec<_> = g.edges().iter().map(|&(u, v)| (perm[u], perm[v])).collect();
            Graph::from_edges(g.n(), &edges).unwrap()
        })
        .collect();
    PeriodicGraph::new(snaps).unwrap()
}

/// Earliest arrival by BFS over (time, vertex) pairs, time unrolled.
fn arrival_oracle(pg: &PeriodicGraph, t0: usize, u: usize, v: usize) -> Option<usize> {
    let n = pg.n();
    let horizon = n * pg.period() + 1;
    let mut seen = vec![vec![false; n]; horizon + 1];
    let mut queue = VecDeque::from([(t0, u)]);
    seen[0][u] = true;
    while let Some((t, x)) = queue.pop_front() {
        if x == v {
            return Some(t);
        }
        if t - t0 >= horizon {
            continue;
        }
        for y in 0..n {
            if (y == x || pg.snapshot(t).has_edge(x, y)) && !seen[t + 1 - t0][y] {
                seen[t + 1 - t0][y] = true;
                queue.push_back((t + 1, y));
            }
        }
    }
    None
}

/// Minimum over elimination orders of the largest eliminated degree.
fn treewidth_oracle(g: &Graph) -> usize {
    let n = g.n();
    permutations(n)
        .iter()
        .map(|order| {
            let mut adj: Vec<u64> = (0..n).map(|v| g.neighbors(v)).collect();
            let mut width = 0;
            for &v in order {
                let nb = adj[v];
                width = width.max(nb.count_ones() as usize);
                for w in 0..n {
                    if nb >> w & 1 == 1 {
                        adj[w] |= nb & !(1 << w);
                        adj[w] &= !(1 << v);
                    }
                }
                adj[v] = 0;
            }
            width
        })
        .min()
        .unwrap_or(0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn more_cops_never_hurt(pg in periodic(6, 3)) {
        for k in 1..=2 {
            if is_k_copwin(&pg, k, &cfg()).unwrap().copwin {
                prop_assert!(is_k_copwin(&pg, k + 1, &cfg()).unwrap().copwin);
            }
        }
        let c = cop_number(&pg, &cfg()).unwrap();
        prop_assert!(c >= 1 && c <= cop_number_cap(&pg));
    }

    #[test]
    fn forbidding_stacking_never_helps(pg in periodic(6, 2)) {
        let strict = SolverConfig { allow_stacking: false, ..cfg() };
        if pg.n() >= 2 && is_k_copwin(&pg, 2, &strict).unwrap().copwin {
            prop_assert!(is_k_copwin(&pg, 2, &cfg()).unwrap().copwin);
        }
    }

    #[test]
    fn triple_is_invariant_under_relabeling(pg in periodic(5, 3), seed in 0usize..120) {
        let perms = permutations(pg.n());
        let perm = &perms[seed % perms.len()];
        prop_assert_eq!(
            triple(&pg, &cfg()).unwrap(),
            triple(&relabel(&pg, perm), &cfg()).unwrap()
        );
    }

    #[test]
    fn constant_sequences_match_the_snapshot(g in graph(6), p in 1usize..4) {
        let periodic = PeriodicGraph::constant(&g, p).unwrap();
        let single = PeriodicGraph::constant(&g, 1).unwrap();
        prop_assert_eq!(cop_number(&periodic, &cfg()).unwrap(), cop_number(&single, &cfg()).unwrap());
    }

    #[test]
    fn canonical_text_round_trips(pg in periodic(8, 4)) {
        let file = InstanceFile::new(pg);
        let text = io::to_canonical_string(&file);
        let back = io::parse(&text).unwrap();
        prop_assert_eq!(io::to_canonical_string(&back), text);
        prop_assert_eq!(back, file);
    }

    #[test]
    fn corner_witnesses_are_valid(pg in periodic(6, 3), k in 1usize..=3) {
        let found = find_k_temporal_corners(&pg, k).unwrap();
        prop_assert!(found.iter().all(|w| w.is_valid(&pg)));
        prop_assert_eq!(count_k_temporal_corners(&pg, k, None).unwrap(), found.len());
        if k == 1 {
            prop_assert_eq!(found, find_temporal_corners(&pg));
        }
    }

    #[test]
    fn foremost_journeys_match_bfs(pg in periodic(6, 3), t0 in 0usize..3, u in 0usize..6, v in 0usize..6) {
        let (u, v) = (u % pg.n(), v % pg.n());
        let t0 = t0 % pg.period();
        let got = pg.foremost_journey(t0, u, v);
        prop_assert_eq!(got.as_ref().map(|j| j.arrival_time()), arrival_oracle(&pg, t0, u, v));
        if let Some(j) = got {
            for (i, w) in j.vertices.windows(2).enumerate() {
                let g = pg.snapshot(t0 + i);
                prop_assert!(w[0] == w[1] || g.has_edge(w[0], w[1]));
            }
        }
    }

    #[test]
    fn induced_keeps_exactly_the_inner_edges(pg in periodic(7, 3), keep_mask in 1u64..128) {
        let keep: Vec<usize> = (0..pg.n()).filter(|&v| keep_mask >> v & 1 == 1).collect();
        prop_assume!(!keep.is_empty());
        let (sub, _) = pg.induced(&keep).unwrap();
        for (t, g) in pg.snapshots().iter().enumerate() {
            let inner = g.edges().iter().filter(|(u, v)| keep.contains(u) && keep.contains(v)).count();
            prop_assert_eq!(sub.snapshot(t).edge_count(), inner);
        }
    }

    #[test]
    fn exact_treewidth_matches_elimination_oracle(g in graph(7)) {
        let (tw, td) = exact_treewidth(&g).unwrap();
        prop_assert_eq!(tw, treewidth_oracle(&g));
        prop_assert!(td.validate(&g).is_ok());
        prop_assert_eq!(td.width(), tw);
        let s = smooth(&td, &g).unwrap();
        prop_assert!(s.validate(&g).is_ok());
        prop_assert!(s.is_smooth());
        prop_assert_eq!(s.width(), tw);
    }

    #[test]
    fn traces_follow_the_snapshots(pg in periodic(6, 3)) {
        let c = cop_number(&pg, &cfg()).unwrap();
        let result = is_k_copwin(&pg, c, &cfg()).unwrap();
        let tr = extract_trace(&result, None, &RobberPlay::Optimal).unwrap();
        let bound = tr.bound as usize;
        prop_assert!(tr.capture_round <= bound);
        let mut cops = tr.placement.clone();
        let mut robber = tr.robber_start;
        for step in &tr.steps {
            let g = pg.snapshot(step.t);
            // Some matching of old to new cop positions respects the snapshot.
            let moved = percop::solver::policy::assign_moves(&pg, step.t, &cops, &step.cops);
            prop_assert!(moved.is_some());
            prop_assert!(step.robber == robber || g.has_edge(robber, step.robber));
            cops = step.cops.clone();
            robber = step.robber;
        }
    }
}
