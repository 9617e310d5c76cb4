//! Built-in search specifications.

use super::{
    FootprintConstraint, InducedTarget, PlacementTarget, SearchOutcome, SearchSpec, Shape,
    SnapshotConstraint, Targets,
};
use crate::error::{Error, Result};
use crate::graph::{letters, Graph};

pub const NAMES: &[&str] = &[
    "thm112",
    "lem122",
    "circulant_123",
    "prop3_retract",
    "search_321",
    "undetermined_113",
    "undetermined_213",
    "undetermined_313",
];

fn pairs(g: &Graph) -> Vec<[usize; 2]> {
    g.edges().into_iter().map(|(u, v)| [u, v]).collect()
}

fn snapshot(shape: Shape) -> SnapshotConstraint {
    SnapshotConstraint {
        shape,
        connected: false,
        min_girth: None,
        exact_girth: None,
        copnum: None,
    }
}

fn base(name: &str, n: usize, period: usize, snapshot: SnapshotConstraint) -> SearchSpec {
    SearchSpec {
        name: name.into(),
        n,
        period,
        snapshot,
        pattern: None,
        required_edges: Vec::new(),
        footprint: Vec::new(),
        targets: Targets::default(),
        labels: None,
        budget_secs: 1800,
        seed: 1,
        max_iterations: 2_000_000,
        restart_after: 20_000,
    }
}

pub fn named(name: &str) -> Result<SearchSpec> {
    Ok(match name {
        // Nine Hamiltonian paths on 0..8 with 8 universal in the footprint.
        // G_0 and part of G_1 are pinned so that cops on {2, 4} win within
        // two moves.
        "thm112" => {
            let mut s = base(name, 9, 9, snapshot(Shape::HamiltonianPath));
            let g0 = [7, 0, 2, 6, 5, 3, 1, 4, 8];
            s.required_edges = g0.windows(2).map(|w| [0, w[0], w[1]]).collect();
            s.required_edges
                .extend([[1, 1, 5], [1, 0, 3], [1, 6, 3], [1, 8, 7]]);
            s.footprint = vec![FootprintConstraint::UniversalVertex { vertex: 8 }];
            s.targets = Targets {
                footprint_copnum: Some(1),
                max_snapshot_copnum: Some(1),
                copnum: Some(2),
                no_corner: Some(1),
                placement: Some(PlacementTarget {
                    cops: vec![2, 4],
                    within: 2,
                }),
                ..Targets::default()
            };
            s
        }
        // Three triangle-free connected snapshots with 4-cycles over a
        // dismantlable footprint, no temporal corner, γ(G_0) = 2.
        "lem122" => {
            let mut c = snapshot(Shape::AnySubgraph);
            c.connected = true;
            c.exact_girth = Some(4);
            let mut s = base(name, 7, 3, c);
            s.footprint = vec![FootprintConstraint::Dismantlable];
            s.targets = Targets {
                footprint_copnum: Some(1),
                max_snapshot_copnum: Some(2),
                copnum: Some(2),
                no_corner: Some(1),
                g0_domination: Some(2),
                ..Targets::default()
            };
            s
        }
        // 11-cycles with steps 1..5 in some order, no 2-temporal corner,
        // cops on {0, 3, 8} winning within five moves.
        "circulant_123" => {
            let mut s = base(
                name,
                11,
                5,
                snapshot(Shape::CirculantSteps {
                    steps: vec![1, 2, 3, 4, 5],
                }),
            );
            s.footprint = vec![FootprintConstraint::Equals {
                edges: pairs(&Graph::complete(11)),
            }];
            s.targets = Targets {
                footprint_copnum: Some(1),
                max_snapshot_copnum: Some(2),
                copnum: Some(3),
                no_corner: Some(2),
                placement: Some(PlacementTarget {
                    cops: vec![0, 3, 8],
                    within: 5,
                }),
                ..Targets::default()
            };
            s
        }
        // C4 (a,b,c,d) plus a triangle b-u-c: copwin as a periodic graph while
        // the induced 4-cycle needs two cops, and no map is a retraction of
        // every snapshot onto the cycle.
        "prop3_retract" => {
            let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (0, 3), (1, 4), (2, 4)])?;
            let mut s = base(name, 5, 2, snapshot(Shape::SubgraphOf { edges: pairs(&g) }));
            s.footprint = vec![FootprintConstraint::Equals { edges: pairs(&g) }];
            s.labels = Some(["a", "b", "c", "d", "u"].map(String::from).to_vec());
            s.targets = Targets {
                copnum: Some(1),
                induced: Some(InducedTarget {
                    keep: vec![0, 1, 2, 3],
                    copnum: 2,
                }),
                no_common_retraction: Some(vec![0, 1, 2, 3]),
                ..Targets::default()
            };
            s
        }
        // Five connected spanning subgraphs of the Petersen graph, each held
        // for four steps, each containing a 5-cycle and needing two cops.
        "search_321" => {
            let p = Graph::petersen();
            let mut c = snapshot(Shape::SubgraphOf { edges: pairs(&p) });
            c.connected = true;
            c.exact_girth = Some(5);
            c.copnum = Some(2);
            let mut s = base(name, 10, 20, c);
            s.pattern = Some((0..20).map(|t| t / 4).collect());
            s.footprint = vec![FootprintConstraint::Equals { edges: pairs(&p) }];
            s.labels = Some(letters(10));
            s.targets = Targets {
                footprint_copnum: Some(3),
                max_snapshot_copnum: Some(2),
                copnum: Some(1),
                ..Targets::default()
            };
            s
        }
        "undetermined_113" | "undetermined_213" | "undetermined_313" => {
            let a = match name {
                "undetermined_113" => 1,
                "undetermined_213" => 2,
                _ => 3,
            };
            let mut c = snapshot(Shape::AnySubgraph);
            c.connected = true;
            let mut s = base(name, 9, 4, c);
            s.footprint = vec![FootprintConstraint::Connected];
            s.targets = Targets {
                footprint_copnum: Some(a),
                max_snapshot_copnum: Some(1),
                copnum: Some(3),
                no_corner: Some(2),
                ..Targets::default()
            };
            s
        }
        _ => {
            return Err(Error::SearchSpec(format!(
                "unknown search spec `{name}` (known: {})",
                NAMES.join(", ")
            )))
        }
    })
}

/// Search for five Petersen subgraphs giving a (3,2,1)-copwin instance.
pub fn search_321(budget_secs: u64, seed: u64) -> Result<SearchOutcome> {
    let mut spec = named("search_321")?;
    spec.budget_secs = budget_secs;
    spec.seed = seed;
    super::search(&spec)
}
