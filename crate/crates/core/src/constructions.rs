//! Generators for the explicit periodic graph constructions.

use serde::{Deserialize, Serialize};

use crate::corners::has_k_temporal_corner;
use crate::error::{Error, Result};
use crate::graph::{letters, Graph, Vertex};
use crate::periodic::PeriodicGraph;

/// Expected `(c(G), c(G_max), c(𝒢))`; unknown entries are `None`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedTriple {
    pub footprint_copnum: Option<usize>,
    pub max_snapshot_copnum: Option<usize>,
    pub copnum: Option<usize>,
}

impl ExpectedTriple {
    pub fn full(a: usize, b: usize, c: usize) -> Self {
        ExpectedTriple {
            footprint_copnum: Some(a),
            max_snapshot_copnum: Some(b),
            copnum: Some(c),
        }
    }

    pub fn matches(&self, (a, b, c): (usize, usize, usize)) -> bool {
        self.footprint_copnum.is_none_or(|x| x == a)
            && self.max_snapshot_copnum.is_none_or(|x| x == b)
            && self.copnum.is_none_or(|x| x == c)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// Every edge is determined by the written construction.
    FullySpecified,
    /// Some choices had to be made or searched for.
    ReconstructionRequired,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionSpecimen {
    pub name: String,
    pub instance: PeriodicGraph,
    pub expected: ExpectedTriple,
    pub provenance: Provenance,
}

/// Names accepted by [`by_name`].
pub const NAMES: &[&str] = &[
    "q3_rotation",
    "bowtie_221",
    "petersen_132",
    "petersen_231",
    "petersen_311",
    "circulant_123",
    "constant_111",
    "constant_222",
    "constant_333",
];

/// Step sequence used when `circulant_123` is requested without parameters.
pub const DEFAULT_CIRCULANT_STEPS: [usize; 5] = [5, 2, 3, 1, 4];

pub fn by_name(name: &str) -> Result<ConstructionSpecimen> {
    match name {
        "q3_rotation" => Ok(q3_rotation()),
        "bowtie_221" => Ok(bowtie_221()),
        "petersen_132" => Ok(petersen_132()),
        "petersen_231" => petersen_231(),
        "petersen_311" => petersen_311(),
        "circulant_123" => circulant_123(&DEFAULT_CIRCULANT_STEPS),
        "constant_111" => constant("constant_111", &Graph::path(3), 2, 1),
        "constant_222" => constant("constant_222", &Graph::cycle(4), 2, 2),
        "constant_333" => constant("constant_333", &Graph::petersen(), 2, 3),
        _ => Err(Error::Construction(format!(
            "unknown construction `{name}` (known: {})",
            NAMES.join(", ")
        ))),
    }
}

fn edges_graph(n: usize, edges: &[(Vertex, Vertex)], labels: &[String]) -> Graph {
    Graph::from_edges(n, edges)
        .expect("construction edges are valid")
        .with_labels(labels.to_vec())
}

/// `Q_3` where snapshot `t` keeps only the edges flipping the `t`-th bit
/// (counted from the left of the label).
pub fn q3_rotation() -> ConstructionSpecimen {
    let labels: Vec<String> = (0..8).map(|i| format!("{i:03b}")).collect();
    let snapshots = (0..3)
        .map(|t| {
            let b = 2 - t;
            let edges: Vec<_> = (0..8usize)
                .filter(|u| u >> b & 1 == 0)
                .map(|u| (u, u | 1 << b))
                .collect();
            edges_graph(8, &edges, &labels)
        })
        .collect();
    ConstructionSpecimen {
        name: "q3_rotation".into(),
        instance: PeriodicGraph::new(snapshots).expect("three snapshots"),
        expected: ExpectedTriple::full(2, 4, 3),
        provenance: Provenance::FullySpecified,
    }
}

/// Bow tie with hub `v`, cycles `(v,a1,a2,a3)` and `(v,b1,b2,b3)`; three
/// snapshots without `a1a2`, then three without `b1b2`.
pub fn bowtie_221() -> ConstructionSpecimen {
    let labels: Vec<String> = ["v", "a1", "a2", "a3", "b1", "b2", "b3"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let g = Graph::bowtie().with_labels(labels);
    let mut without_a = g.clone();
    without_a.remove_edge(1, 2);
    let mut without_b = g;
    without_b.remove_edge(4, 5);
    let mut snapshots = vec![without_a; 3];
    snapshots.extend(vec![without_b; 3]);
    ConstructionSpecimen {
        name: "bowtie_221".into(),
        instance: PeriodicGraph::new(snapshots).expect("six snapshots"),
        expected: ExpectedTriple::full(2, 2, 1),
        provenance: Provenance::FullySpecified,
    }
}

fn petersen_plus(extra: usize) -> Graph {
    let p = Graph::petersen();
    let mut g = Graph::empty(10 + extra).expect("small");
    for (u, v) in p.edges() {
        g.add_edge(u, v).unwrap();
    }
    g
}

/// Petersen plus an apex `x`. Every fifth snapshot is the Petersen graph
/// with one edge `x w_j` (cycling through all ten `w_j`); all others are the
/// outer 5-cycle, the spokes and `ax`.
pub fn petersen_132() -> ConstructionSpecimen {
    let mut labels = letters(10);
    labels.push("x".into());
    let x = 10;
    let mut h = Graph::empty(11).expect("small");
    for i in 0..5 {
        h.add_edge(i, (i + 1) % 5).unwrap();
        h.add_edge(i, i + 5).unwrap();
    }
    h.add_edge(0, x).unwrap();
    let h = h.with_labels(labels.clone());
    let mut snapshots = Vec::with_capacity(50);
    for w in 0..10 {
        let mut rare = petersen_plus(1);
        rare.add_edge(x, w).unwrap();
        snapshots.push(rare.with_labels(labels.clone()));
        snapshots.extend(std::iter::repeat_n(h.clone(), 4));
    }
    ConstructionSpecimen {
        name: "petersen_132".into(),
        instance: PeriodicGraph::new(snapshots).expect("fifty snapshots"),
        expected: ExpectedTriple::full(1, 3, 2),
        provenance: Provenance::FullySpecified,
    }
}

/// Petersen plus `x` (joined to the outer cycle) and `y` (joined to the
/// inner cycle). Every eleventh snapshot is the Petersen graph with one edge
/// from each of `x`, `y`; the ten snapshots in between are one spanning tree.
pub fn petersen_231() -> Result<ConstructionSpecimen> {
    let mut labels = letters(10);
    labels.push("x".into());
    labels.push("y".into());
    let (x, y) = (10, 11);
    let mut tree = Graph::empty(12)?;
    for (u, v) in Graph::petersen().bfs_tree(0)?.edges() {
        tree.add_edge(u, v)?;
    }
    tree.add_edge(x, 0)?;
    tree.add_edge(y, 5)?;
    if !tree.is_tree() || tree.radius()? > 4 {
        return Err(Error::Construction(
            "spanning tree has no vertex within distance 4 of all others".into(),
        ));
    }
    let tree = tree.with_labels(labels.clone());
    let mut snapshots = Vec::with_capacity(55);
    for j in 0..5 {
        let mut rare = petersen_plus(2);
        rare.add_edge(x, j)?;
        rare.add_edge(y, j + 5)?;
        snapshots.push(rare.with_labels(labels.clone()));
        snapshots.extend(std::iter::repeat_n(tree.clone(), 10));
    }
    Ok(ConstructionSpecimen {
        name: "petersen_231".into(),
        instance: PeriodicGraph::new(snapshots)?,
        expected: ExpectedTriple::full(2, 3, 1),
        provenance: Provenance::FullySpecified,
    })
}

/// Spanning trees of the Petersen graph covering all its edges; the first
/// tree is held for `r(T)+1` steps, the rest appear once each.
pub fn petersen_311() -> Result<ConstructionSpecimen> {
    let cover = Graph::petersen().spanning_tree_cover()?;
    let first = cover[0].clone();
    let hold = first.radius()? + 1;
    let mut snapshots = vec![first; hold];
    snapshots.extend(cover.into_iter().skip(1));
    Ok(ConstructionSpecimen {
        name: "petersen_311".into(),
        instance: PeriodicGraph::new(snapshots)?,
        expected: ExpectedTriple::full(3, 1, 1),
        provenance: Provenance::ReconstructionRequired,
    })
}

fn circulant_cycle(n: usize, step: usize) -> Graph {
    let mut g = Graph::empty(n).expect("small");
    for u in 0..n {
        g.add_edge(u, (u + step) % n).expect("step coprime to n");
    }
    g
}

/// Snapshot `t` is the 11-cycle `u ~ u ± s_t` on `Z_11`.
pub fn circulant_123(steps: &[usize]) -> Result<ConstructionSpecimen> {
    let p = steps.len();
    if p < 5 || p.is_multiple_of(2) {
        return Err(Error::Construction(format!(
            "circulant period must be odd and at least 5, got {p}"
        )));
    }
    if let Some(&s) = steps.iter().find(|&&s| !(1..=5).contains(&s)) {
        return Err(Error::Construction(format!("step {s} is outside 1..=5")));
    }
    if let Some(t) = (0..p).find(|&t| steps[t] == steps[(t + 1) % p]) {
        return Err(Error::Construction(format!(
            "consecutive steps at layers {t} and {} are equal",
            (t + 1) % p
        )));
    }
    if let Some(s) = (1..=5).find(|s| !steps.contains(s)) {
        return Err(Error::Construction(format!(
            "step {s} never appears, footprint is not complete"
        )));
    }
    let snapshots = steps.iter().map(|&s| circulant_cycle(11, s)).collect();
    Ok(ConstructionSpecimen {
        name: "circulant_123".into(),
        instance: PeriodicGraph::new(snapshots)?,
        expected: ExpectedTriple::full(1, 2, 3),
        provenance: Provenance::ReconstructionRequired,
    })
}

/// Appends `extra_pairs` copies of the last two snapshots of a circulant
/// specimen, keeping the period odd.
pub fn extend_odd(base: &ConstructionSpecimen, extra_pairs: usize) -> Result<ConstructionSpecimen> {
    if base.name != "circulant_123" {
        return Err(Error::Construction(format!(
            "extend_odd expects a circulant_123 specimen, got {}",
            base.name
        )));
    }
    let snaps = base.instance.snapshots();
    let tail = &snaps[snaps.len() - 2..];
    let mut snapshots = snaps.to_vec();
    for _ in 0..extra_pairs {
        snapshots.extend_from_slice(tail);
    }
    let instance = PeriodicGraph::new(snapshots)?;
    if has_k_temporal_corner(&instance, 2)? {
        return Err(Error::Construction(
            "extension introduced a 2-temporal corner".into(),
        ));
    }
    Ok(ConstructionSpecimen {
        name: base.name.clone(),
        instance,
        expected: base.expected,
        provenance: base.provenance,
    })
}

/// `G` repeated `p` times; all three cop numbers equal `c(G)`.
pub fn constant(name: &str, g: &Graph, p: usize, copnum: usize) -> Result<ConstructionSpecimen> {
    Ok(ConstructionSpecimen {
        name: name.into(),
        instance: PeriodicGraph::constant(g, p)?,
        expected: ExpectedTriple::full(copnum, copnum, copnum),
        provenance: Provenance::FullySpecified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q3_snapshots_partition_the_cube() {
        let s = q3_rotation();
        let mut seen = std::collections::BTreeSet::new();
        for g in s.instance.snapshots() {
            assert_eq!(g.edge_count(), 4);
            assert!((0..8).all(|u| g.degree(u) == 1));
            for e in g.edges() {
                assert!(seen.insert(e));
            }
        }
        assert_eq!(s.instance.footprint(), Graph::hypercube(3));
    }

    #[test]
    fn bowtie_snapshots() {
        let s = bowtie_221();
        assert_eq!(s.instance.period(), 6);
        for g in s.instance.snapshots() {
            assert!(g.is_connected());
            assert_eq!(g.edge_count(), 7);
            assert!(!g.dismantle());
        }
        assert_eq!(s.instance.footprint(), Graph::bowtie());
    }

    #[test]
    fn petersen_apex_family() {
        let s = petersen_132();
        assert_eq!(s.instance.period(), 50);
        let fp = s.instance.footprint();
        assert_eq!(fp.degree(10), 10);
        assert_eq!(fp.edge_count(), 25);
        assert!(s.instance.snapshots().iter().all(|g| g.is_connected()));
        for t in (0..50).step_by(5) {
            assert!(Graph::petersen().is_subgraph_of(&s.instance.snapshot(t).induced(&(0..10).collect::<Vec<_>>()).unwrap()));
        }
    }

    #[test]
    fn petersen_two_apex_family() {
        let s = petersen_231().unwrap();
        assert_eq!(s.instance.period(), 55);
        let fp = s.instance.footprint();
        assert_eq!(fp.domination_number(), Ok(2));
        assert_eq!(fp.edge_count(), 25);
        let tree = s.instance.snapshot(1);
        assert!(tree.is_tree());
        assert!((1..11).all(|t| s.instance.snapshot(t) == tree));
    }

    #[test]
    fn petersen_tree_family() {
        let s = petersen_311().unwrap();
        assert_eq!(s.instance.footprint(), Graph::petersen());
        assert!(s.instance.snapshots().iter().all(|g| g.is_tree()));
        assert_eq!(s.instance.snapshot(0), s.instance.snapshot(2));
    }

    #[test]
    fn circulant_preconditions() {
        assert!(circulant_123(&[1, 2, 3, 4]).is_err());
        assert!(circulant_123(&[1, 2, 3, 4, 4]).is_err());
        assert!(circulant_123(&[1, 2, 3, 4, 1]).is_err());
        assert!(circulant_123(&[1, 2, 3, 4, 6]).is_err());
        assert!(circulant_123(&[1, 2, 1, 2, 3]).is_err());
        let s = circulant_123(&[1, 2, 3, 4, 5]).unwrap();
        assert_eq!(s.instance.footprint(), Graph::complete(11));
        assert!(s.instance.snapshots().iter().all(|g| g.is_connected() && g.edge_count() == 11));
    }

    #[test]
    fn extension_grows_period() {
        let s = circulant_123(&DEFAULT_CIRCULANT_STEPS).unwrap();
        assert_eq!(extend_odd(&s, 0).unwrap(), s);
        let e = extend_odd(&s, 2).unwrap();
        assert_eq!(e.instance.period(), 9);
        assert!(extend_odd(&q3_rotation(), 1).is_err());
    }

    #[test]
    fn names_resolve() {
        for name in NAMES {
            let s = by_name(name).unwrap();
            assert_eq!(&s.name, name);
            assert!(s.instance.is_temporally_connected());
        }
        assert!(by_name("nope").is_err());
    }
}
