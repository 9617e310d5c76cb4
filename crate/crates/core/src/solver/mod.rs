//! Exact k-copwin decision by backward induction on the configuration game.
//!
//! A round at layer `t` is: cops move in `G_t`, then the robber moves in
//! `G_t`, then the layer advances to `[t+1]_p`. Positions are
//! `(t, cops, robber, side)` with the cops kept as a sorted multiset.
//!
//! The cop attractor is built retrograde: cop-to-move states are won as soon
//! as one successor is won, robber-to-move states once every robber reply is
//! won. Processing in FIFO order yields exact steps-to-capture ranks.

mod copsets;
pub mod policy;
pub mod trace;

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bit, members, Graph, Vertex};
use crate::periodic::PeriodicGraph;

pub use copsets::{multiset_count, CopSets};
pub use policy::{
    verify_policy, CopPolicy, FnPolicy, OptimalPolicy, PolicyOrigin, PolicyVerdict,
    StationaryPolicy,
};
pub use trace::{extract_trace, CaptureTrace, RobberPlay, TraceStep};

/// Default cap on `p · C(n+k-1, k) · n · 2`.
pub const DEFAULT_STATE_BUDGET: u128 = 100_000_000;

/// Environment variable overriding the state budget.
pub const STATE_BUDGET_ENV: &str = "PERCOP_STATE_BUDGET";

const UNWON: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaptureRule {
    /// Any co-location ends the game, including the robber stepping onto a cop.
    Relaxed,
    /// Only a cop moving onto the robber ends the game.
    Strict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    pub state_budget: u128,
    pub capture: CaptureRule,
    /// Whether several cops may share a vertex.
    pub allow_stacking: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            state_budget: DEFAULT_STATE_BUDGET,
            capture: CaptureRule::Relaxed,
            allow_stacking: true,
        }
    }
}

impl SolverConfig {
    /// Defaults, with the budget taken from `PERCOP_STATE_BUDGET` when set.
    pub fn from_env() -> Self {
        let mut cfg = SolverConfig::default();
        if let Some(b) = std::env::var(STATE_BUDGET_ENV)
            .ok()
            .and_then(|s| s.trim().parse::<u128>().ok())
        {
            cfg.state_budget = b;
        }
        cfg
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    CopsToMove,
    RobberToMove,
}

/// One configuration of the game.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GameState {
    pub t: usize,
    pub cops: Vec<Vertex>,
    pub robber: Vertex,
    pub side: Side,
}

/// Number of positions the solver would allocate for `k` cops.
pub fn state_count(pg: &PeriodicGraph, k: usize) -> u128 {
    pg.period() as u128 * multiset_count(pg.n(), k) * pg.n() as u128 * 2
}

/// Game graph plus solved attractor for `k` cops.
#[derive(Clone, Debug)]
pub struct SolveResult {
    pg: PeriodicGraph,
    k: usize,
    config: SolverConfig,
    sets: CopSets,
    moves: Vec<copsets::Csr>,
    cop_rank: Vec<u32>,
    robber_rank: Vec<u32>,
    pub copwin: bool,
    pub initial_placement: Option<Vec<Vertex>>,
}

impl SolveResult {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn instance(&self) -> &PeriodicGraph {
        &self.pg
    }

    pub fn config(&self) -> SolverConfig {
        self.config
    }

    pub fn state_count(&self) -> usize {
        self.cop_rank.len() + self.robber_rank.len()
    }

    #[inline]
    fn index(&self, t: usize, set: usize, r: Vertex) -> usize {
        ((t % self.pg.period()) * self.sets.len() + set) * self.pg.n() + r
    }

    fn set_index(&self, cops: &[Vertex]) -> Option<usize> {
        if cops.len() != self.k || cops.iter().any(|&c| c >= self.pg.n()) {
            return None;
        }
        let idx = self.sets.rank_unsorted(cops);
        (self.config.allow_stacking || self.sets.is_distinct(idx)).then_some(idx)
    }

    fn captured(&self, set: usize, r: Vertex) -> bool {
        self.sets.mask(set) & bit(r) != 0
    }

    /// Steps to capture from `state` (number of cop moves), `None` when the
    /// robber escapes forever. Co-located states have rank 0.
    pub fn rank(&self, state: &GameState) -> Option<u32> {
        let set = self.set_index(&state.cops)?;
        if state.robber >= self.pg.n() {
            return None;
        }
        let relaxed_capture =
            self.config.capture == CaptureRule::Relaxed || state.side == Side::RobberToMove;
        if relaxed_capture && self.captured(set, state.robber) {
            return Some(0);
        }
        let i = self.index(state.t, set, state.robber);
        let r = match state.side {
            Side::CopsToMove => self.cop_rank[i],
            Side::RobberToMove => self.robber_rank[i],
        };
        (r != UNWON).then_some(r)
    }

    pub fn is_cop_win(&self, state: &GameState) -> bool {
        self.rank(state).is_some()
    }

    /// Worst-case capture time over robber starts for a placement at layer 0,
    /// or `None` if some start escapes.
    pub fn placement_value(&self, cops: &[Vertex]) -> Option<u32> {
        let set = self.set_index(cops)?;
        self.placement_value_idx(set)
    }

    fn placement_value_idx(&self, set: usize) -> Option<u32> {
        let mut worst = 0;
        for r in 0..self.pg.n() {
            if self.captured(set, r) {
                continue;
            }
            let v = self.cop_rank[self.index(0, set, r)];
            if v == UNWON {
                return None;
            }
            worst = worst.max(v);
        }
        Some(worst)
    }

    /// Number of placements at layer 0 that win against every robber start.
    pub fn winning_placement_count(&self) -> usize {
        (0..self.sets.len())
            .filter(|&s| self.config.allow_stacking || self.sets.is_distinct(s))
            .filter(|&s| self.placement_value_idx(s).is_some())
            .count()
    }

    /// Robber starts handled by the best placement: the largest number of
    /// vertices `r` such that the robber starting at `r` loses.
    pub fn best_coverage(&self) -> usize {
        (0..self.sets.len())
            .filter(|&s| self.config.allow_stacking || self.sets.is_distinct(s))
            .map(|s| {
                (0..self.pg.n())
                    .filter(|&r| self.captured(s, r) || self.cop_rank[self.index(0, s, r)] != UNWON)
                    .count()
            })
            .max()
            .unwrap_or(0)
    }

    /// Winning cop replies from a cops-to-move state, as
    /// `(resulting rank, sorted multiset)`; a capturing move has rank 0.
    pub fn winning_moves(&self, t: usize, cops: &[Vertex], robber: Vertex) -> Vec<(u32, Vec<Vertex>)> {
        let Some(set) = self.set_index(cops) else {
            return Vec::new();
        };
        let tl = t % self.pg.period();
        let mut out = Vec::new();
        for &m in self.moves[tl].row(set) {
            let m = m as usize;
            let r = if self.captured(m, robber) {
                0
            } else {
                self.robber_rank[self.index(tl, m, robber)]
            };
            if r != UNWON {
                out.push((r, self.sets.to_vec(m)));
            }
        }
        out.sort();
        out
    }

    /// Rank-minimizing winning move, lexicographically smallest on ties.
    pub fn best_move(&self, t: usize, cops: &[Vertex], robber: Vertex) -> Option<Vec<Vertex>> {
        self.winning_moves(t, cops, robber)
            .into_iter()
            .next()
            .map(|(_, m)| m)
    }
}

/// Decides whether `k` cops win on `pg`.
pub fn is_k_copwin(pg: &PeriodicGraph, k: usize, config: &SolverConfig) -> Result<SolveResult> {
    if k == 0 {
        return Err(Error::ZeroCops);
    }
    let states = state_count(pg, k);
    if states > config.state_budget || pg.n() > u8::MAX as usize {
        return Err(Error::StateBudget {
            states,
            limit: config.state_budget,
        });
    }
    let n = pg.n();
    let p = pg.period();
    let sets = CopSets::new(n, k);
    let m_count = sets.len();
    let moves: Vec<copsets::Csr> = (0..p)
        .map(|t| copsets::move_table(pg, t, &sets, config.allow_stacking))
        .collect();
    let total = p * m_count * n;
    let mut cop_rank = vec![UNWON; total];
    let mut robber_rank = vec![UNWON; total];
    let mut pending = vec![0u8; total];
    let relaxed = config.capture == CaptureRule::Relaxed;

    // (is_cop_side, index)
    let mut queue: VecDeque<(bool, usize)> = VecDeque::new();
    let mut cop_seeds = Vec::new();
    for t in 0..p {
        let g = pg.snapshot(t);
        for s in 0..m_count {
            if !(config.allow_stacking || sets.is_distinct(s)) {
                continue;
            }
            let occupied = sets.mask(s);
            let reach = g.closed_of_set(occupied);
            let base = (t * m_count + s) * n;
            for r in 0..n {
                let on_cop = occupied & bit(r) != 0;
                if on_cop && relaxed {
                    continue;
                }
                if reach & bit(r) != 0 {
                    cop_rank[base + r] = 1;
                    cop_seeds.push(base + r);
                }
                if !on_cop {
                    let replies = if relaxed {
                        g.closed(r) & !occupied
                    } else {
                        g.closed(r)
                    };
                    let c = replies.count_ones() as u8;
                    pending[base + r] = c;
                    if c == 0 {
                        robber_rank[base + r] = 0;
                        queue.push_back((false, base + r));
                    }
                }
            }
        }
    }
    queue.extend(cop_seeds.into_iter().map(|i| (true, i)));

    while let Some((cop_side, i)) = queue.pop_front() {
        let r_pos = i % n;
        let s = (i / n) % m_count;
        let t = i / (n * m_count);
        if cop_side {
            // Robber at layer t-1 moved into r_pos while cops sat on s.
            let rank = cop_rank[i];
            let tp = (t + p - 1) % p;
            let occupied = sets.mask(s);
            let base = (tp * m_count + s) * n;
            for r in members(pg.closed(tp, r_pos) & !occupied) {
                let j = base + r;
                if robber_rank[j] != UNWON {
                    continue;
                }
                pending[j] -= 1;
                if pending[j] == 0 {
                    robber_rank[j] = rank;
                    queue.push_back((false, j));
                }
            }
        } else {
            let rank = robber_rank[i] + 1;
            for &m in moves[t].row(s) {
                let m = m as usize;
                if relaxed && sets.mask(m) & bit(r_pos) != 0 {
                    continue;
                }
                let j = (t * m_count + m) * n + r_pos;
                if cop_rank[j] == UNWON {
                    cop_rank[j] = rank;
                    queue.push_back((true, j));
                }
            }
        }
    }

    let mut result = SolveResult {
        pg: pg.clone(),
        k,
        config: *config,
        sets,
        moves,
        cop_rank,
        robber_rank,
        copwin: false,
        initial_placement: None,
    };
    let mut best: Option<(u32, Vec<Vertex>)> = None;
    for s in 0..m_count {
        if !(config.allow_stacking || result.sets.is_distinct(s)) {
            continue;
        }
        if let Some(v) = result.placement_value_idx(s) {
            let cand = (v, result.sets.to_vec(s));
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    result.copwin = best.is_some();
    result.initial_placement = best.map(|(_, c)| c);
    Ok(result)
}

/// Upper bound used to stop the ascent: `γ(G_0)`, exact up to 20 vertices
/// and greedy beyond.
pub fn cop_number_cap(pg: &PeriodicGraph) -> usize {
    let g0 = pg.snapshot(0);
    g0.domination_number()
        .unwrap_or_else(|_| g0.greedy_dominating_set().len())
        .max(1)
}

/// Least `k` such that `k` cops win; ascends from 1 and stops at `γ(G_0)`,
/// since cops on a dominating set of `G_0` capture in the first move.
pub fn cop_number(pg: &PeriodicGraph, config: &SolverConfig) -> Result<usize> {
    if pg.n() == 0 {
        return Err(Error::EmptyVertexSet);
    }
    let cap = cop_number_cap(pg);
    for k in 1..cap {
        if is_k_copwin(pg, k, config)?.copwin {
            return Ok(k);
        }
    }
    Ok(cap)
}

/// Cop number of a static graph.
pub fn static_cop_number(g: &Graph, config: &SolverConfig) -> Result<usize> {
    cop_number(&PeriodicGraph::constant(g, 1)?, config)
}

/// Footprint, snapshot and periodic cop numbers of an instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triple {
    /// `c(G)` of the footprint.
    pub footprint: usize,
    /// `c(G_max)`.
    pub max_snapshot: usize,
    /// `c(𝒢)`.
    pub periodic: usize,
    /// `c(G_min)`.
    pub min_snapshot: usize,
    pub snapshot_copnums: Vec<usize>,
}

impl Triple {
    pub fn as_tuple(&self) -> (usize, usize, usize) {
        (self.footprint, self.max_snapshot, self.periodic)
    }
}

/// Static cop numbers of every snapshot, solving each distinct graph once.
pub fn snapshot_cop_numbers(pg: &PeriodicGraph, config: &SolverConfig) -> Result<Vec<usize>> {
    let mut cache: HashMap<&Graph, usize> = HashMap::new();
    let mut out = Vec::with_capacity(pg.period());
    for g in pg.snapshots() {
        let c = match cache.get(g) {
            Some(&c) => c,
            None => {
                let c = static_cop_number(g, config)?;
                cache.insert(g, c);
                c
            }
        };
        out.push(c);
    }
    Ok(out)
}

pub fn triple(pg: &PeriodicGraph, config: &SolverConfig) -> Result<Triple> {
    let footprint = static_cop_number(&pg.footprint(), config)?;
    let snapshot_copnums = snapshot_cop_numbers(pg, config)?;
    let periodic = cop_number(pg, config)?;
    Ok(Triple {
        footprint,
        max_snapshot: *snapshot_copnums.iter().max().expect("period ≥ 1"),
        min_snapshot: *snapshot_copnums.iter().min().expect("period ≥ 1"),
        periodic,
        snapshot_copnums,
    })
}

/// Result of the bounded maximum over periodic graphs with a fixed footprint.
#[derive(Clone, Debug)]
pub struct CtmaxReport {
    pub value: usize,
    pub witness: PeriodicGraph,
    pub instances_examined: u64,
}

/// Maximum cop number over all periodic graphs with footprint exactly `g`
/// and period at most `max_period`. This under-approximates the maximum over
/// all periods.
pub fn ctmax_bounded(g: &Graph, max_period: usize, config: &SolverConfig) -> Result<CtmaxReport> {
    if !g.is_connected() || g.n() == 0 {
        return Err(Error::Disconnected);
    }
    if g.n() > 6 || max_period > 3 || max_period == 0 {
        return Err(Error::Limit(format!(
            "ctmax enumeration needs n ≤ 6 and 1 ≤ period ≤ 3 (got n = {}, period {})",
            g.n(),
            max_period
        )));
    }
    let edges = g.edges();
    let m = edges.len();
    let total: u128 = (1..=max_period).map(|p| 1u128 << (m * p)).sum();
    if total > 1 << 24 {
        return Err(Error::Limit(format!(
            "ctmax enumeration would visit {total} edge-subset sequences"
        )));
    }
    let full = (1u64 << m) - 1;
    let mut best: Option<(usize, PeriodicGraph)> = None;
    let mut examined = 0u64;
    for p in 1..=max_period {
        let mut codes = vec![0u64; p];
        loop {
            if codes.iter().fold(0, |a, c| a | c) == full {
                let snaps = codes
                    .iter()
                    .map(|&c| {
                        let mut s = Graph::empty(g.n())?;
                        for (i, &(u, v)) in edges.iter().enumerate() {
                            if c >> i & 1 == 1 {
                                s.add_edge(u, v)?;
                            }
                        }
                        Ok(s)
                    })
                    .collect::<Result<Vec<_>>>()?;
                let pg = PeriodicGraph::new(snaps)?;
                let c = cop_number(&pg, config)?;
                examined += 1;
                if best.as_ref().is_none_or(|(b, _)| c > *b) {
                    best = Some((c, pg));
                }
            }
            // Odometer over the p snapshot codes.
            let mut i = 0;
            while i < p {
                codes[i] += 1;
                if codes[i] <= full {
                    break;
                }
                codes[i] = 0;
                i += 1;
            }
            if i == p {
                break;
            }
        }
    }
    let (value, witness) = best.expect("the constant footprint sequence is always examined");
    Ok(CtmaxReport {
        value,
        witness,
        instances_examined: examined,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SolverConfig {
        SolverConfig::default()
    }

    fn static_pg(g: &Graph) -> PeriodicGraph {
        PeriodicGraph::constant(g, 1).unwrap()
    }

    #[test]
    fn singleton_is_copwin() {
        let r = is_k_copwin(&static_pg(&Graph::empty(1).unwrap()), 1, &cfg()).unwrap();
        assert!(r.copwin);
        assert_eq!(r.initial_placement, Some(vec![0]));
    }

    #[test]
    fn static_cop_numbers() {
        assert_eq!(static_cop_number(&Graph::petersen(), &cfg()), Ok(3));
        assert_eq!(static_cop_number(&Graph::hypercube(3), &cfg()), Ok(2));
        assert_eq!(static_cop_number(&Graph::cycle(4), &cfg()), Ok(2));
        assert_eq!(static_cop_number(&Graph::cycle(3), &cfg()), Ok(1));
        assert_eq!(static_cop_number(&Graph::path(6), &cfg()), Ok(1));
        assert_eq!(static_cop_number(&Graph::bowtie(), &cfg()), Ok(2));
        let matching = Graph::from_edges(8, &[(0, 1), (2, 3), (4, 5), (6, 7)]).unwrap();
        assert_eq!(static_cop_number(&matching, &cfg()), Ok(4));
    }

    #[test]
    fn zero_cops_and_budget() {
        let pg = static_pg(&Graph::petersen());
        assert!(matches!(is_k_copwin(&pg, 0, &cfg()), Err(Error::ZeroCops)));
        let tiny = SolverConfig {
            state_budget: 10,
            ..cfg()
        };
        assert!(matches!(
            is_k_copwin(&pg, 2, &tiny),
            Err(Error::StateBudget { .. })
        ));
    }

    #[test]
    fn ranks_on_a_path() {
        // Cop in the middle of P5 catches anything within two moves.
        let r = is_k_copwin(&static_pg(&Graph::path(5)), 1, &cfg()).unwrap();
        assert!(r.copwin);
        assert_eq!(r.initial_placement, Some(vec![2]));
        assert_eq!(r.placement_value(&[2]), Some(2));
        assert_eq!(r.placement_value(&[0]), Some(4));
    }

    #[test]
    fn capture_rules_agree_on_small_cases() {
        let strict = SolverConfig {
            capture: CaptureRule::Strict,
            ..cfg()
        };
        for g in [Graph::cycle(4), Graph::path(4), Graph::bowtie(), Graph::cycle(5)] {
            for k in 1..=2 {
                let pg = static_pg(&g);
                assert_eq!(
                    is_k_copwin(&pg, k, &cfg()).unwrap().copwin,
                    is_k_copwin(&pg, k, &strict).unwrap().copwin
                );
            }
        }
    }

    #[test]
    fn ctmax_small() {
        assert_eq!(ctmax_bounded(&Graph::complete(2), 3, &cfg()).unwrap().value, 1);
        let c4 = ctmax_bounded(&Graph::cycle(4), 2, &cfg()).unwrap();
        assert!(c4.value >= 2);
        assert_eq!(c4.witness.footprint(), Graph::cycle(4));
        assert!(ctmax_bounded(&Graph::petersen(), 1, &cfg()).is_err());
        assert!(ctmax_bounded(&Graph::empty(3).unwrap(), 1, &cfg()).is_err());
    }

    #[test]
    fn budget_env_override() {
        // Parsing only; the variable itself is read by the CLI.
        let cfg = SolverConfig::default();
        assert_eq!(cfg.state_budget, DEFAULT_STATE_BUDGET);
    }
}
