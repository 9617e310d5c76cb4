//! Property-directed search for periodic graphs.
//!
//! A [`SearchSpec`] fixes the vertex count, the period, what each snapshot
//! may look like and which properties the instance must have. Small spaces
//! are enumerated exhaustively (one representative per relabeling class);
//! larger ones are explored by seeded local search over a staged score.
//! Every reported witness is re-checked from scratch by [`certify`].

mod canon;
pub mod named;
mod scan;

use std::collections::HashMap;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corners::count_k_temporal_corners;
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::io::{self, InstanceFile};
use crate::periodic::PeriodicGraph;
use crate::solver::{is_k_copwin, static_cop_number, triple, SolverConfig};

pub use canon::{canonical_code, relabeling_group};
pub use scan::{smallest_3copwin_scan, ScanHit, ScanReport};

/// Candidate spaces up to this size are enumerated exhaustively.
pub const EXHAUSTIVE_LIMIT: u128 = 10_000_000;

/// Corner counts stop at this value when scoring.
const CORNER_CAP: usize = 200;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Shape {
    /// Any graph on the `n` vertices.
    AnySubgraph,
    /// Any spanning subgraph of the given graph.
    SubgraphOf { edges: Vec<[Vertex; 2]> },
    /// A Hamiltonian path on all `n` vertices.
    HamiltonianPath,
    /// The circulant `u ~ u ± s` for one step `s` from the list.
    CirculantSteps { steps: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SnapshotConstraint {
    pub shape: Shape,
    #[serde(default)]
    pub connected: bool,
    /// Acyclic snapshots satisfy any lower girth bound.
    #[serde(default)]
    pub min_girth: Option<usize>,
    #[serde(default)]
    pub exact_girth: Option<usize>,
    /// Static cop number of every snapshot.
    #[serde(default)]
    pub copnum: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FootprintConstraint {
    Equals { edges: Vec<[Vertex; 2]> },
    UniversalVertex { vertex: Vertex },
    Connected,
    Dismantlable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InducedTarget {
    pub keep: Vec<Vertex>,
    pub copnum: usize,
}

/// `cops` placed at layer 0 capture every robber within `within` cop moves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlacementTarget {
    pub cops: Vec<Vertex>,
    pub within: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Targets {
    #[serde(default)]
    pub footprint_copnum: Option<usize>,
    #[serde(default)]
    pub max_snapshot_copnum: Option<usize>,
    #[serde(default)]
    pub copnum: Option<usize>,
    /// No k-temporal corner for this k.
    #[serde(default)]
    pub no_corner: Option<usize>,
    #[serde(default)]
    pub g0_domination: Option<usize>,
    #[serde(default)]
    pub induced: Option<InducedTarget>,
    /// No single map is a retraction onto these vertices in every snapshot.
    #[serde(default)]
    pub no_common_retraction: Option<Vec<Vertex>>,
    #[serde(default)]
    pub placement: Option<PlacementTarget>,
}

fn default_budget() -> u64 {
    1800
}

fn default_iterations() -> u64 {
    2_000_000
}

fn default_restart() -> u64 {
    20_000
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchSpec {
    pub name: String,
    pub n: usize,
    pub period: usize,
    pub snapshot: SnapshotConstraint,
    /// `pattern[t] = pattern[t']` forces `G_t = G_t'`. Defaults to all distinct.
    #[serde(default)]
    pub pattern: Option<Vec<usize>>,
    /// `[t, u, v]`: edge `uv` must be present in `G_t`.
    #[serde(default)]
    pub required_edges: Vec<[usize; 3]>,
    #[serde(default)]
    pub footprint: Vec<FootprintConstraint>,
    #[serde(default)]
    pub targets: Targets,
    #[serde(default)]
    pub labels: Option<Vec<String>>,
    #[serde(default = "default_budget")]
    pub budget_secs: u64,
    #[serde(default)]
    pub seed: u64,
    /// Local search stops after this many proposals.
    #[serde(default = "default_iterations")]
    pub max_iterations: u64,
    /// Restart after this many proposals without improvement.
    #[serde(default = "default_restart")]
    pub restart_after: u64,
}

impl SearchSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::SearchSpec(e.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchStatus {
    Found,
    Exhausted,
    Budget,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    Exhaustive,
    Local,
}

/// Properties recomputed from scratch on a candidate witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub footprint_copnum: usize,
    pub max_snapshot_copnum: usize,
    pub min_snapshot_copnum: usize,
    pub copnum: usize,
    pub snapshot_copnums: Vec<usize>,
    pub g0_domination: usize,
    pub temporally_connected: bool,
    /// `(k, number of k-temporal corners)` for `k` up to the corner target.
    pub corner_counts: Vec<(usize, usize)>,
    pub placement_value: Option<u32>,
    pub induced_copnum: Option<usize>,
    pub common_retractions: Option<usize>,
    pub failures: Vec<String>,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub spec: String,
    pub seed: u64,
    pub instance: PeriodicGraph,
    pub certificate: Certificate,
}

impl Witness {
    pub fn to_json(&self) -> serde_json::Value {
        let c = &self.certificate;
        let file = InstanceFile::with_expected(
            self.instance.clone(),
            crate::constructions::ExpectedTriple::full(
                c.footprint_copnum,
                c.max_snapshot_copnum,
                c.copnum,
            ),
        );
        serde_json::json!({
            "spec": self.spec,
            "seed": self.seed,
            "instance": io::to_value(&file),
            "certificate": c,
        })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let field = |k: &str| {
            value
                .get(k)
                .ok_or_else(|| Error::SearchSpec(format!("witness file lacks `{k}`")))
        };
        let instance = io::from_value(field("instance")?)?.instance;
        let certificate: Certificate = serde_json::from_value(field("certificate")?.clone())
            .map_err(|e| Error::SearchSpec(e.to_string()))?;
        Ok(Witness {
            spec: field("spec")?.as_str().unwrap_or_default().to_string(),
            seed: field("seed")?.as_u64().unwrap_or_default(),
            instance,
            certificate,
        })
    }
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub spec: String,
    pub seed: u64,
    pub status: SearchStatus,
    pub mode: SearchMode,
    /// Candidates scored (after relabeling deduplication).
    pub candidates: u64,
    pub witness: Option<Witness>,
}

impl SearchOutcome {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "spec": self.spec,
            "seed": self.seed,
            "status": self.status,
            "mode": self.mode,
            "candidates": self.candidates,
            "witness": self.witness.as_ref().map(Witness::to_json),
        })
    }
}

/// One snapshot choice.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Slot {
    /// Bitmask over the base edge list.
    Edges(u64),
    Path(Vec<Vertex>),
    Step(usize),
}

const STAGES: usize = 11;

type Score = [i64; STAGES];

fn satisfied(score: &Score) -> bool {
    score.iter().all(|&s| s == 0)
}

struct Problem<'a> {
    spec: &'a SearchSpec,
    config: SolverConfig,
    pattern: Vec<usize>,
    slots: usize,
    /// Edge universe for edge-mask slots.
    base: Vec<(Vertex, Vertex)>,
    required: Vec<Vec<(Vertex, Vertex)>>,
    footprint_equals: Option<Graph>,
    copnum_cache: HashMap<Graph, usize>,
}

fn edge_list(edges: &[[Vertex; 2]]) -> Vec<(Vertex, Vertex)> {
    let mut out: Vec<_> = edges.iter().map(|&[u, v]| (u.min(v), u.max(v))).collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn circulant_edges(n: usize, step: usize) -> Vec<(Vertex, Vertex)> {
    let mut out: Vec<_> = (0..n)
        .map(|u| {
            let v = (u + step) % n;
            (u.min(v), u.max(v))
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

impl<'a> Problem<'a> {
    fn new(spec: &'a SearchSpec) -> Result<Self> {
        let n = spec.n;
        let bad = |m: String| Err(Error::SearchSpec(m));
        if n == 0 || n > 11 {
            return bad(format!("n must be in 1..=11, got {n}"));
        }
        if spec.period == 0 {
            return bad("period must be at least 1".into());
        }
        let pattern = spec
            .pattern
            .clone()
            .unwrap_or_else(|| (0..spec.period).collect());
        if pattern.len() != spec.period {
            return bad(format!(
                "pattern has {} entries for period {}",
                pattern.len(),
                spec.period
            ));
        }
        let slots = pattern.iter().max().map_or(0, |m| m + 1);
        if (0..slots).any(|s| !pattern.contains(&s)) {
            return bad("pattern must use every slot index below its maximum".into());
        }
        let check = |v: Vertex| {
            if v >= n {
                Err(Error::SearchSpec(format!("vertex {v} out of range (n = {n})")))
            } else {
                Ok(())
            }
        };
        let base: Vec<(Vertex, Vertex)> = match &spec.snapshot.shape {
            Shape::AnySubgraph | Shape::HamiltonianPath => {
                let mut all = Vec::new();
                for u in 0..n {
                    for v in u + 1..n {
                        all.push((u, v));
                    }
                }
                all
            }
            Shape::SubgraphOf { edges } => {
                for &[u, v] in edges {
                    check(u)?;
                    check(v)?;
                    if u == v {
                        return bad(format!("self-loop {u} in allowed edges"));
                    }
                }
                edge_list(edges)
            }
            Shape::CirculantSteps { steps } => {
                if steps.is_empty() {
                    return bad("no circulant steps".into());
                }
                if let Some(s) = steps.iter().find(|&&s| s == 0 || 2 * s >= n) {
                    return bad(format!("circulant step {s} must be in 1..{}", n.div_ceil(2)));
                }
                let mut all: Vec<_> = steps.iter().flat_map(|&s| circulant_edges(n, s)).collect();
                all.sort_unstable();
                all.dedup();
                all
            }
        };
        if base.len() > 64 {
            return bad("more than 64 candidate edges".into());
        }
        let mut required = vec![Vec::new(); slots];
        for &[t, u, v] in &spec.required_edges {
            check(u)?;
            check(v)?;
            if t >= spec.period {
                return bad(format!("required edge at layer {t} beyond the period"));
            }
            let e = (u.min(v), u.max(v));
            if !base.contains(&e) {
                return bad(format!("required edge {u}-{v} is not allowed in any snapshot"));
            }
            required[pattern[t]].push(e);
        }
        for r in &mut required {
            r.sort_unstable();
            r.dedup();
        }
        let mut footprint_equals = None;
        for c in &spec.footprint {
            match c {
                FootprintConstraint::Equals { edges } => {
                    let list = edge_list(edges);
                    for &(u, v) in &list {
                        check(u)?;
                        check(v)?;
                        if !base.contains(&(u, v)) {
                            return bad(format!(
                                "footprint edge {u}-{v} is absent from all allowed snapshots"
                            ));
                        }
                    }
                    footprint_equals = Some(Graph::from_edges(n, &list)?);
                }
                FootprintConstraint::UniversalVertex { vertex } => check(*vertex)?,
                FootprintConstraint::Connected | FootprintConstraint::Dismantlable => {}
            }
        }
        let t = &spec.targets;
        if let Some(i) = &t.induced {
            i.keep.iter().try_for_each(|&v| check(v))?;
            if i.keep.is_empty() {
                return bad("induced target keeps no vertex".into());
            }
        }
        if let Some(h) = &t.no_common_retraction {
            h.iter().try_for_each(|&v| check(v))?;
            if h.is_empty() {
                return bad("retraction target keeps no vertex".into());
            }
        }
        if let Some(p) = &t.placement {
            p.cops.iter().try_for_each(|&v| check(v))?;
            if p.cops.is_empty() {
                return bad("placement target has no cops".into());
            }
        }
        if [t.footprint_copnum, t.max_snapshot_copnum, t.copnum, t.no_corner]
            .contains(&Some(0))
        {
            return bad("cop-number targets start at 1".into());
        }
        if let Some(labels) = &spec.labels {
            if labels.len() != n {
                return bad(format!("{} labels for {n} vertices", labels.len()));
            }
        }
        Ok(Problem {
            spec,
            config: SolverConfig::from_env(),
            pattern,
            slots,
            base,
            required,
            footprint_equals,
            copnum_cache: HashMap::new(),
        })
    }

    fn n(&self) -> usize {
        self.spec.n
    }

    fn slot_graph(&self, slot: &Slot) -> Graph {
        let n = self.n();
        let mut g = Graph::empty(n).expect("n ≤ 11");
        match slot {
            Slot::Edges(mask) => {
                for (i, &(u, v)) in self.base.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        g.add_edge(u, v).expect("valid edge");
                    }
                }
            }
            Slot::Path(order) => {
                for w in order.windows(2) {
                    g.add_edge(w[0], w[1]).expect("valid edge");
                }
            }
            Slot::Step(s) => {
                for (u, v) in circulant_edges(n, *s) {
                    g.add_edge(u, v).expect("valid edge");
                }
            }
        }
        g
    }

    fn instance(&self, graphs: &[Graph]) -> PeriodicGraph {
        let snaps = self
            .pattern
            .iter()
            .map(|&s| {
                let g = graphs[s].clone();
                match &self.spec.labels {
                    Some(l) => g.with_labels(l.clone()),
                    None => g,
                }
            })
            .collect();
        PeriodicGraph::new(snaps).expect("period ≥ 1")
    }

    fn static_copnum(&mut self, g: &Graph) -> Result<usize> {
        if let Some(&c) = self.copnum_cache.get(g) {
            return Ok(c);
        }
        let c = static_cop_number(g, &self.config)?;
        if self.copnum_cache.len() > 200_000 {
            self.copnum_cache.clear();
        }
        self.copnum_cache.insert(g.clone(), c);
        Ok(c)
    }

    /// Violations of the per-snapshot structural constraints of one slot.
    fn slot_violations(&self, slot: usize, g: &Graph) -> i64 {
        let c = &self.spec.snapshot;
        let mut bad = 0i64;
        if c.connected {
            bad += g.components().len() as i64 - 1;
        }
        let girth = g.girth();
        if let Some(m) = c.min_girth {
            if girth.is_some_and(|x| x < m) {
                bad += 1;
            }
        }
        if let Some(m) = c.exact_girth {
            if girth != Some(m) {
                bad += 1;
            }
        }
        bad += self.required[slot]
            .iter()
            .filter(|&&(u, v)| !g.has_edge(u, v))
            .count() as i64;
        bad
    }

    fn footprint_violations(&self, fp: &Graph) -> i64 {
        let mut bad = 0i64;
        for c in &self.spec.footprint {
            bad += match c {
                FootprintConstraint::Equals { .. } => {
                    let f = self.footprint_equals.as_ref().expect("set in new");
                    (0..self.n())
                        .map(|u| (fp.neighbors(u) ^ f.neighbors(u)).count_ones() as i64)
                        .sum::<i64>()
                        / 2
                }
                FootprintConstraint::UniversalVertex { vertex } => {
                    (self.n() - 1 - fp.degree(*vertex)) as i64
                }
                FootprintConstraint::Connected => fp.components().len() as i64 - 1,
                FootprintConstraint::Dismantlable => i64::from(!fp.dismantle()),
            };
        }
        bad
    }

    /// Staged score; zero everywhere means every target holds. Stages after
    /// the first unsatisfied one are not evaluated.
    fn score(&mut self, cand: &[Slot]) -> Result<Score> {
        let mut s = [i64::MIN; STAGES];
        let graphs: Vec<Graph> = cand.iter().map(|c| self.slot_graph(c)).collect();
        let t = self.spec.targets.clone();
        let n = self.n();

        s[0] = -(0..self.slots)
            .map(|i| self.slot_violations(i, &graphs[i]))
            .sum::<i64>();
        if s[0] != 0 {
            return Ok(s);
        }
        let pg = self.instance(&graphs);
        let fp = pg.footprint();
        s[1] = -self.footprint_violations(&fp);
        if s[1] != 0 {
            return Ok(s);
        }
        let mut snap_cops = Vec::with_capacity(self.slots);
        if self.spec.snapshot.copnum.is_some() || t.max_snapshot_copnum.is_some() {
            for g in &graphs {
                snap_cops.push(self.static_copnum(g)?);
            }
        }
        s[2] = match self.spec.snapshot.copnum {
            Some(want) => -snap_cops.iter().map(|&c| c.abs_diff(want) as i64).sum::<i64>(),
            None => 0,
        };
        if s[2] != 0 {
            return Ok(s);
        }
        s[3] = match t.g0_domination {
            Some(want) => -(pg.snapshot(0).domination_number()?.abs_diff(want) as i64),
            None => 0,
        };
        if s[3] != 0 {
            return Ok(s);
        }
        s[4] = match t.no_corner {
            Some(k) => -(count_k_temporal_corners(&pg, k, Some(CORNER_CAP))? as i64),
            None => 0,
        };
        if s[4] != 0 {
            return Ok(s);
        }
        let mut d = 0i64;
        if let Some(want) = t.footprint_copnum {
            d += self.static_copnum(&fp)?.abs_diff(want) as i64;
        }
        if let Some(want) = t.max_snapshot_copnum {
            d += snap_cops.iter().max().copied().unwrap_or(0).abs_diff(want) as i64;
        }
        s[5] = -d;
        if s[5] != 0 {
            return Ok(s);
        }
        s[6] = match &t.placement {
            Some(p) => {
                let r = is_k_copwin(&pg, p.cops.len(), &self.config)?;
                let mut sorted = p.cops.clone();
                sorted.sort_unstable();
                -((0..n)
                    .filter(|r0| !sorted.contains(r0))
                    .filter(|&r0| {
                        r.rank(&crate::solver::GameState {
                            t: 0,
                            cops: sorted.clone(),
                            robber: r0,
                            side: crate::solver::Side::CopsToMove,
                        })
                        .is_none_or(|v| v > p.within)
                    })
                    .count() as i64)
            }
            None => 0,
        };
        if s[6] != 0 {
            return Ok(s);
        }
        s[7] = match t.copnum {
            Some(c) if c > 1 => {
                let r = is_k_copwin(&pg, c - 1, &self.config)?;
                if r.copwin {
                    -(1 + r.winning_placement_count() as i64)
                } else {
                    0
                }
            }
            _ => 0,
        };
        if s[7] != 0 {
            return Ok(s);
        }
        s[8] = match t.copnum {
            Some(c) => {
                let r = is_k_copwin(&pg, c, &self.config)?;
                -((n - r.best_coverage()) as i64)
            }
            None => 0,
        };
        if s[8] != 0 {
            return Ok(s);
        }
        s[9] = match &t.induced {
            Some(i) => {
                let (sub, _) = pg.induced(&i.keep)?;
                -(crate::solver::cop_number(&sub, &self.config)?.abs_diff(i.copnum) as i64)
            }
            None => 0,
        };
        if s[9] != 0 {
            return Ok(s);
        }
        s[10] = match &t.no_common_retraction {
            Some(h) => -(common_retractions(&pg, h)?.len() as i64),
            None => 0,
        };
        Ok(s)
    }

    fn allowed_steps(&self) -> &[usize] {
        match &self.spec.snapshot.shape {
            Shape::CirculantSteps { steps } => steps,
            _ => &[],
        }
    }

    fn random_slot(&self, slot: usize, rng: &mut ChaCha8Rng) -> Slot {
        match &self.spec.snapshot.shape {
            Shape::AnySubgraph | Shape::SubgraphOf { .. } => {
                let mut mask = 0u64;
                for (i, e) in self.base.iter().enumerate() {
                    if self.required[slot].contains(e) || rng.gen_bool(0.5) {
                        mask |= 1 << i;
                    }
                }
                Slot::Edges(mask)
            }
            Shape::HamiltonianPath => {
                let mut order: Vec<Vertex> = (0..self.n()).collect();
                order.shuffle(rng);
                Slot::Path(order)
            }
            Shape::CirculantSteps { steps } => Slot::Step(steps[rng.gen_range(0..steps.len())]),
        }
    }

    fn mutate(&self, cand: &mut [Slot], rng: &mut ChaCha8Rng) {
        let i = rng.gen_range(0..cand.len());
        match &mut cand[i] {
            Slot::Edges(mask) => {
                let e = rng.gen_range(0..self.base.len());
                *mask ^= 1 << e;
            }
            Slot::Path(order) => {
                let n = order.len();
                if n >= 2 {
                    let a = rng.gen_range(0..n);
                    let b = rng.gen_range(0..n);
                    let (a, b) = (a.min(b), a.max(b));
                    order[a..=b].reverse();
                }
            }
            Slot::Step(s) => {
                let steps = self.allowed_steps();
                *s = steps[rng.gen_range(0..steps.len())];
            }
        }
    }

    /// All slot values satisfying the slot-local constraints, or `None` if
    /// there are too many to list.
    fn pool(&mut self, slot: usize) -> Result<Option<Vec<Slot>>> {
        let raw: Vec<Slot> = match &self.spec.snapshot.shape {
            Shape::AnySubgraph | Shape::SubgraphOf { .. } => {
                if self.base.len() > 20 {
                    return Ok(None);
                }
                (0..1u64 << self.base.len()).map(Slot::Edges).collect()
            }
            Shape::HamiltonianPath => {
                if self.n() > 8 {
                    return Ok(None);
                }
                hamiltonian_paths(self.n()).into_iter().map(Slot::Path).collect()
            }
            Shape::CirculantSteps { steps } => steps.iter().map(|&s| Slot::Step(s)).collect(),
        };
        let mut out = Vec::new();
        for s in raw {
            let g = self.slot_graph(&s);
            if self.slot_violations(slot, &g) != 0 {
                continue;
            }
            if let Some(want) = self.spec.snapshot.copnum {
                if self.static_copnum(&g)? != want {
                    continue;
                }
            }
            out.push(s);
        }
        Ok(Some(out))
    }
}

/// Orderings of `0..n` with first vertex below last: one per Hamiltonian path.
fn hamiltonian_paths(n: usize) -> Vec<Vec<Vertex>> {
    fn rec(cur: &mut Vec<Vertex>, used: &mut [bool], out: &mut Vec<Vec<Vertex>>) {
        if cur.len() == used.len() {
            if cur.len() < 2 || cur[0] < cur[cur.len() - 1] {
                out.push(cur.clone());
            }
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

/// Maps `V → h` that fix `h` and are a retraction in every snapshot.
pub fn common_retractions(pg: &PeriodicGraph, h: &[Vertex]) -> Result<Vec<Vec<Vertex>>> {
    let n = pg.n();
    let mut target = h.to_vec();
    target.sort_unstable();
    target.dedup();
    let free: Vec<Vertex> = (0..n).filter(|v| !target.contains(v)).collect();
    let choices = (target.len() as u128).pow(free.len() as u32);
    if choices > 10_000_000 {
        return Err(Error::Limit(format!(
            "{choices} candidate retractions exceed the enumeration limit"
        )));
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; free.len()];
    loop {
        let mut map: Vec<Vertex> = (0..n).collect();
        for (i, &v) in free.iter().enumerate() {
            map[v] = target[idx[i]];
        }
        let mut ok = true;
        for g in pg.snapshots() {
            if !crate::graph::is_retraction(g, &target, &map)? {
                ok = false;
                break;
            }
        }
        if ok {
            out.push(map);
        }
        let mut i = 0;
        while i < idx.len() {
            idx[i] += 1;
            if idx[i] < target.len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
        if i == idx.len() {
            break;
        }
    }
    Ok(out)
}

/// Recomputes every property named in `spec` on `pg` with fresh solver runs.
pub fn certify(spec: &SearchSpec, pg: &PeriodicGraph) -> Result<Certificate> {
    let config = SolverConfig::from_env();
    let mut failures = Vec::new();
    if pg.n() != spec.n || pg.period() != spec.period {
        failures.push(format!(
            "instance has n = {}, period {}; spec asks for n = {}, period {}",
            pg.n(),
            pg.period(),
            spec.n,
            spec.period
        ));
    }
    let tr = triple(pg, &config)?;
    let t = &spec.targets;
    let mut want = |name: &str, got: usize, target: Option<usize>| {
        if let Some(w) = target {
            if got != w {
                failures.push(format!("{name} is {got}, expected {w}"));
            }
        }
    };
    want("footprint cop number", tr.footprint, t.footprint_copnum);
    want("max snapshot cop number", tr.max_snapshot, t.max_snapshot_copnum);
    want("cop number", tr.periodic, t.copnum);
    let g0_domination = pg.snapshot(0).domination_number()?;
    want("domination number of G_0", g0_domination, t.g0_domination);
    if let Some(c) = spec.snapshot.copnum {
        for (i, &x) in tr.snapshot_copnums.iter().enumerate() {
            if x != c {
                failures.push(format!("snapshot {i} has cop number {x}, expected {c}"));
            }
        }
    }
    let c = &spec.snapshot;
    let pattern = spec.pattern.clone().unwrap_or_else(|| (0..spec.period).collect());
    for (i, g) in pg.snapshots().iter().enumerate() {
        if c.connected && !g.is_connected() {
            failures.push(format!("snapshot {i} is disconnected"));
        }
        let girth = g.girth();
        if c.min_girth.is_some_and(|m| girth.is_some_and(|x| x < m)) {
            failures.push(format!("snapshot {i} has girth {girth:?}"));
        }
        if c.exact_girth.is_some_and(|m| girth != Some(m)) {
            failures.push(format!("snapshot {i} has girth {girth:?}"));
        }
        let shape_ok = match &c.shape {
            Shape::AnySubgraph => true,
            Shape::SubgraphOf { edges } => {
                let base = Graph::from_edges(spec.n, &edge_list(edges))?;
                g.is_subgraph_of(&base)
            }
            Shape::HamiltonianPath => {
                g.is_tree() && (0..g.n()).all(|u| g.degree(u) <= 2)
            }
            Shape::CirculantSteps { steps } => steps.iter().any(|&s| {
                Graph::from_edges(spec.n, &circulant_edges(spec.n, s)).is_ok_and(|h| h == *g)
            }),
        };
        if !shape_ok {
            failures.push(format!("snapshot {i} does not have the required shape"));
        }
        if let Some(&j) = pattern.get(i) {
            if let Some(k) = pattern.iter().position(|&x| x == j) {
                if pg.snapshot(k) != g {
                    failures.push(format!("snapshots {k} and {i} should be equal"));
                }
            }
        }
    }
    for &[t, u, v] in &spec.required_edges {
        if !pg.snapshot(t).has_edge(u, v) {
            failures.push(format!("snapshot {t} lacks required edge {u}-{v}"));
        }
    }
    let fp = pg.footprint();
    for f in &spec.footprint {
        match f {
            FootprintConstraint::Equals { edges } => {
                if fp != Graph::from_edges(spec.n, &edge_list(edges))? {
                    failures.push("footprint differs from the required graph".into());
                }
            }
            FootprintConstraint::UniversalVertex { vertex } => {
                if fp.closed(*vertex) != fp.vertices() {
                    failures.push(format!("vertex {vertex} is not universal in the footprint"));
                }
            }
            FootprintConstraint::Connected => {
                if !fp.is_connected() {
                    failures.push("footprint is disconnected".into());
                }
            }
            FootprintConstraint::Dismantlable => {
                if !fp.dismantle() {
                    failures.push("footprint is not dismantlable".into());
                }
            }
        }
    }
    let mut corner_counts = Vec::new();
    if let Some(k) = t.no_corner {
        for j in 1..=k {
            corner_counts.push((j, count_k_temporal_corners(pg, j, None)?));
        }
        if corner_counts.last().is_some_and(|&(_, c)| c > 0) {
            failures.push(format!("instance has a {k}-temporal corner"));
        }
    }
    let placement_value = match &t.placement {
        Some(p) => {
            let r = is_k_copwin(pg, p.cops.len(), &config)?;
            let v = r.placement_value(&p.cops);
            if v.is_none_or(|v| v > p.within) {
                failures.push(format!(
                    "placement {:?} does not capture within {} moves",
                    p.cops, p.within
                ));
            }
            v
        }
        None => None,
    };
    let induced_copnum = match &t.induced {
        Some(i) => {
            let (sub, _) = pg.induced(&i.keep)?;
            let c = crate::solver::cop_number(&sub, &config)?;
            if c != i.copnum {
                failures.push(format!("induced cop number is {c}, expected {}", i.copnum));
            }
            Some(c)
        }
        None => None,
    };
    let common = match &t.no_common_retraction {
        Some(h) => {
            let c = common_retractions(pg, h)?.len();
            if c > 0 {
                failures.push(format!("{c} maps retract every snapshot onto {h:?}"));
            }
            Some(c)
        }
        None => None,
    };
    Ok(Certificate {
        footprint_copnum: tr.footprint,
        max_snapshot_copnum: tr.max_snapshot,
        min_snapshot_copnum: tr.min_snapshot,
        copnum: tr.periodic,
        snapshot_copnums: tr.snapshot_copnums,
        g0_domination,
        temporally_connected: pg.is_temporally_connected(),
        corner_counts,
        placement_value,
        induced_copnum,
        common_retractions: common,
        failures,
    })
}

/// Runs the search described by `spec`.
pub fn search(spec: &SearchSpec) -> Result<SearchOutcome> {
    let mut problem = Problem::new(spec)?;
    let deadline = Instant::now() + Duration::from_secs(spec.budget_secs);
    let mut pools = Vec::with_capacity(problem.slots);
    let mut space: Option<u128> = Some(1);
    for slot in 0..problem.slots {
        match problem.pool(slot)? {
            Some(p) if space.is_some() => {
                space = space.map(|s| s.saturating_mul(p.len() as u128));
                pools.push(p);
            }
            _ => space = None,
        }
        if space.is_none_or(|s| s > EXHAUSTIVE_LIMIT) {
            space = None;
            break;
        }
    }
    match space {
        Some(_) => exhaustive(&mut problem, &pools, deadline),
        None => local(&mut problem, deadline),
    }
}

fn outcome(
    problem: &Problem,
    status: SearchStatus,
    mode: SearchMode,
    candidates: u64,
    witness: Option<Witness>,
) -> SearchOutcome {
    SearchOutcome {
        spec: problem.spec.name.clone(),
        seed: problem.spec.seed,
        status,
        mode,
        candidates,
        witness,
    }
}

/// Builds the instance for `cand` and certifies it; `None` if the fresh
/// check disagrees with the score.
fn confirm(problem: &Problem, cand: &[Slot]) -> Result<Option<Witness>> {
    let graphs: Vec<Graph> = cand.iter().map(|c| problem.slot_graph(c)).collect();
    let pg = problem.instance(&graphs);
    let certificate = certify(problem.spec, &pg)?;
    Ok(certificate.passed().then(|| Witness {
        spec: problem.spec.name.clone(),
        seed: problem.spec.seed,
        instance: pg,
        certificate,
    }))
}

fn exhaustive(problem: &mut Problem, pools: &[Vec<Slot>], deadline: Instant) -> Result<SearchOutcome> {
    let space: u128 = pools.iter().map(|p| p.len() as u128).product();
    let group = if problem.allows_relabeling() {
        let g = relabeling_group(problem.spec)?;
        // Skip deduplication when checking it would cost more than scoring.
        if (g.len() as u128).saturating_mul(space) > 5_000_000_000 {
            Vec::new()
        } else {
            g
        }
    } else {
        Vec::new()
    };
    let mut candidates = 0u64;
    if pools.iter().any(|p| p.is_empty()) {
        return Ok(outcome(problem, SearchStatus::Exhausted, SearchMode::Exhaustive, 0, None));
    }
    let mut idx = vec![0usize; pools.len()];
    let mut counter = 0u64;
    loop {
        counter += 1;
        if counter.is_multiple_of(1024) && Instant::now() > deadline {
            return Ok(outcome(problem, SearchStatus::Budget, SearchMode::Exhaustive, candidates, None));
        }
        let cand: Vec<Slot> = idx.iter().enumerate().map(|(s, &i)| pools[s][i].clone()).collect();
        let graphs: Vec<Graph> = cand.iter().map(|c| problem.slot_graph(c)).collect();
        if group.is_empty() || canon::is_canonical(&graphs, &group) {
            candidates += 1;
            if satisfied(&problem.score(&cand)?) {
                if let Some(w) = confirm(problem, &cand)? {
                    return Ok(outcome(
                        problem,
                        SearchStatus::Found,
                        SearchMode::Exhaustive,
                        candidates,
                        Some(w),
                    ));
                }
            }
        }
        // Odometer, last slot fastest.
        let mut s = pools.len();
        loop {
            if s == 0 {
                return Ok(outcome(
                    problem,
                    SearchStatus::Exhausted,
                    SearchMode::Exhaustive,
                    candidates,
                    None,
                ));
            }
            s -= 1;
            idx[s] += 1;
            if idx[s] < pools[s].len() {
                break;
            }
            idx[s] = 0;
        }
    }
}

fn local(problem: &mut Problem, deadline: Instant) -> Result<SearchOutcome> {
    let spec = problem.spec;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let fresh = |problem: &Problem, rng: &mut ChaCha8Rng| -> Vec<Slot> {
        (0..problem.slots).map(|s| problem.random_slot(s, rng)).collect()
    };
    let mut cur = fresh(problem, &mut rng);
    let mut cur_score = problem.score(&cur)?;
    let mut stale = 0u64;
    let mut candidates = 1u64;
    for it in 0..spec.max_iterations {
        if it % 256 == 0 && Instant::now() > deadline {
            return Ok(outcome(problem, SearchStatus::Budget, SearchMode::Local, candidates, None));
        }
        if satisfied(&cur_score) {
            if let Some(w) = confirm(problem, &cur)? {
                return Ok(outcome(problem, SearchStatus::Found, SearchMode::Local, candidates, Some(w)));
            }
            // The fresh check disagreed; treat as a dead end.
            cur_score = [i64::MIN; STAGES];
        }
        if stale >= spec.restart_after {
            cur = fresh(problem, &mut rng);
            cur_score = problem.score(&cur)?;
            candidates += 1;
            stale = 0;
            continue;
        }
        let mut next = cur.clone();
        problem.mutate(&mut next, &mut rng);
        if rng.gen_bool(0.3) {
            problem.mutate(&mut next, &mut rng);
        }
        let s = problem.score(&next)?;
        candidates += 1;
        if s > cur_score {
            stale = 0;
        } else {
            stale += 1;
        }
        if s >= cur_score {
            cur = next;
            cur_score = s;
        }
    }
    Ok(outcome(problem, SearchStatus::Budget, SearchMode::Local, candidates, None))
}

impl Problem<'_> {
    /// Relabeling deduplication is sound unless snapshots are tied to
    /// specific step sequences.
    fn allows_relabeling(&self) -> bool {
        !matches!(self.spec.snapshot.shape, Shape::CirculantSteps { .. })
    }
}
