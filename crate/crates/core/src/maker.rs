//! Maker's scripted strategy and its certificate.
//!
//! The scripted Maker keeps one *active* vertex per component of his graph and
//! grows a forest: each step he picks the active vertex of maximal danger
//! (Breaker degree if the component is small enough to be killable, -1
//! otherwise), claims a free edge leaving that component, and deactivates the
//! chosen vertex. The surviving component inherits the other side's active
//! vertex, so the one-active-per-component invariant is maintained.

use thiserror::Error;

use crate::edge::{edge_endpoints, edge_index, EdgeId, Vertex};
use crate::game::{GameConfig, GameState, Ownership, Player};
use crate::interval::Interval;
use crate::policy::{Forfeit, StrategyPolicy};
use crate::unionfind::UnionFind;

/// Incremental view of Maker's graph: components, Breaker degrees, active
/// flags.
#[derive(Clone, Debug)]
pub struct ComponentView {
    n: u32,
    uf: UnionFind,
    active: Vec<bool>,
    breaker_degree: Vec<u32>,
    active_count: u32,
}

impl ComponentView {
    pub fn new(n: u32) -> Self {
        ComponentView {
            n,
            uf: UnionFind::new(n),
            active: vec![true; n as usize],
            breaker_degree: vec![0; n as usize],
            active_count: n,
        }
    }

    pub fn observe_breaker_claim(&mut self, u: Vertex, v: Vertex) {
        self.breaker_degree[u as usize] += 1;
        self.breaker_degree[v as usize] += 1;
    }

    pub fn breaker_degree(&self, v: Vertex) -> u32 {
        self.breaker_degree[v as usize]
    }

    pub fn component_size(&mut self, v: Vertex) -> u32 {
        self.uf.component_size(v)
    }

    pub fn component_count(&self) -> u32 {
        self.uf.component_count()
    }

    pub fn is_active(&self, v: Vertex) -> bool {
        self.active[v as usize]
    }

    pub fn active_vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.n).filter(|&v| self.active[v as usize])
    }

    pub fn same_component(&mut self, u: Vertex, v: Vertex) -> bool {
        self.uf.same(u, v)
    }

    /// Records a Maker step that merged the component of `chosen` into the
    /// component of `other`: `chosen` is deactivated, the other side's active
    /// vertex survives.
    pub fn merge_step(&mut self, chosen: Vertex, other: Vertex) {
        debug_assert!(self.active[chosen as usize]);
        debug_assert!(!self.uf.same(chosen, other));
        self.active[chosen as usize] = false;
        self.active_count -= 1;
        self.uf.union(chosen, other);
        debug_assert!(self.invariants_hold());
    }

    /// Exactly one active vertex per component, and the counts agree.
    pub fn invariants_hold(&mut self) -> bool {
        if self.active_count != self.uf.component_count() {
            return false;
        }
        let mut seen = std::collections::HashSet::new();
        for v in 0..self.n {
            if self.active[v as usize] && !seen.insert(self.uf.find(v)) {
                return false;
            }
        }
        seen.len() as u32 == self.uf.component_count()
    }
}

/// Danger of a vertex: its Breaker degree if `a * |C(v)| <= 2b` (the
/// component is still cheap for Breaker to cut off), else -1.
pub fn danger(v: Vertex, view: &mut ComponentView, cfg: &GameConfig) -> i64 {
    let size = view.component_size(v) as u64;
    if cfg.maker_bias as u64 * size <= 2 * cfg.breaker_bias as u64 {
        view.breaker_degree(v) as i64
    } else {
        -1
    }
}

/// One scripted Maker step: selects the max-danger active vertex (lowest
/// index on ties), returns the lowest free edge leaving its component, and
/// updates `view` as if the edge were claimed. Forfeits when the chosen
/// component has no free outgoing edge.
pub fn maker_step(
    state: &GameState,
    view: &mut ComponentView,
    cfg: &GameConfig,
) -> Result<EdgeId, Forfeit> {
    debug_assert!(view.component_count() > 1, "graph already spans");
    let mut dangers: Vec<(i64, Vertex)> = Vec::new();
    for v in 0..cfg.n {
        if view.is_active(v) {
            dangers.push((danger(v, view, cfg), v));
        }
    }
    let &(chosen_danger, chosen_vertex) = dangers
        .iter()
        .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)))
        .expect("active vertices exist while components remain");
    debug_assert!(dangers.iter().all(|&(d, _)| d <= chosen_danger));

    let root = view.uf.find(chosen_vertex);
    let in_component: Vec<bool> = (0..cfg.n).map(|v| view.uf.find(v) == root).collect();
    for u in 0..cfg.n {
        for v in u + 1..cfg.n {
            if in_component[u as usize] == in_component[v as usize] {
                continue;
            }
            let e = edge_index(u, v, cfg.n).expect("valid pair");
            if state.is_free(e) {
                let other = if in_component[u as usize] { v } else { u };
                view.merge_step(chosen_vertex, other);
                return Ok(e);
            }
        }
    }
    Err(Forfeit::because(format!(
        "no free edge leaves the component of vertex {chosen_vertex}"
    )))
}

/// A full scripted Maker move: up to `a` steps, stopping early once the graph
/// spans; leftover picks are filled with the lowest-index free edges.
pub fn maker_move(
    state: &GameState,
    view: &mut ComponentView,
    cfg: &GameConfig,
) -> Result<Vec<EdgeId>, Forfeit> {
    let mut scratch = state.clone();
    let mut claims = Vec::new();
    for _ in 0..cfg.maker_bias.min(scratch.free_count) {
        let e = if view.component_count() > 1 {
            maker_step(&scratch, view, cfg)?
        } else {
            match scratch.lowest_free_edge() {
                Some(e) => e,
                None => break,
            }
        };
        scratch.ownership[e.index()] = Ownership::Maker;
        scratch.free_count -= 1;
        claims.push(e);
    }
    Ok(claims)
}

/// Scripted Maker policy (`maker.thm4`).
#[derive(Clone, Debug)]
pub struct ActiveTreeMaker {
    view: Option<ComponentView>,
    side: Player,
}

impl ActiveTreeMaker {
    pub fn new() -> Self {
        ActiveTreeMaker { view: None, side: Player::Maker }
    }
}

impl Default for ActiveTreeMaker {
    fn default() -> Self {
        Self::new()
    }
}

impl StrategyPolicy for ActiveTreeMaker {
    fn id(&self) -> &str {
        "maker.thm4"
    }

    fn reset(&mut self, cfg: &GameConfig, side: Player, _seed: u64) {
        self.view = Some(ComponentView::new(cfg.n));
        self.side = side;
    }

    fn on_claim(&mut self, cfg: &GameConfig, by: Player, edge: EdgeId) {
        let view = self.view.as_mut().expect("reset before claims");
        if by == Player::Breaker {
            let (u, v) = edge_endpoints(edge, cfg.n).expect("in range");
            view.observe_breaker_claim(u, v);
        }
        // own claims were applied to the view when planned
    }

    fn next_claim(&mut self, state: &GameState, cfg: &GameConfig) -> Result<EdgeId, Forfeit> {
        let view = self.view.as_mut().expect("reset before claims");
        if view.component_count() > 1 {
            maker_step(state, view, cfg)
        } else {
            state
                .lowest_free_edge()
                .ok_or_else(|| Forfeit::because("no free edges left"))
        }
    }

    fn clone_policy(&self) -> Box<dyn StrategyPolicy> {
        Box::new(self.clone())
    }
}

/// Baseline Maker (`maker.greedy-connect`): always tries to join the two
/// largest components.
#[derive(Clone, Debug)]
pub struct GreedyConnectMaker {
    uf: Option<UnionFind>,
}

impl GreedyConnectMaker {
    pub fn new() -> Self {
        GreedyConnectMaker { uf: None }
    }
}

impl Default for GreedyConnectMaker {
    fn default() -> Self {
        Self::new()
    }
}

impl StrategyPolicy for GreedyConnectMaker {
    fn id(&self) -> &str {
        "maker.greedy-connect"
    }

    fn reset(&mut self, cfg: &GameConfig, _side: Player, _seed: u64) {
        self.uf = Some(UnionFind::new(cfg.n));
    }

    fn on_claim(&mut self, cfg: &GameConfig, by: Player, edge: EdgeId) {
        if by == Player::Maker {
            let (u, v) = edge_endpoints(edge, cfg.n).expect("in range");
            self.uf.as_mut().expect("reset first").union(u, v);
        }
    }

    fn next_claim(&mut self, state: &GameState, cfg: &GameConfig) -> Result<EdgeId, Forfeit> {
        let uf = self.uf.as_mut().expect("reset first");
        // components sorted by size descending, root ascending
        let mut roots: Vec<(u32, u32)> = Vec::new();
        for v in 0..cfg.n {
            if uf.find(v) == v {
                roots.push((uf.component_size(v), v));
            }
        }
        roots.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let members: Vec<u32> = (0..cfg.n).map(|v| uf.find(v)).collect();
        for i in 0..roots.len() {
            for j in i + 1..roots.len() {
                let (ra, rb) = (roots[i].1, roots[j].1);
                let mut best: Option<EdgeId> = None;
                for u in 0..cfg.n {
                    for v in u + 1..cfg.n {
                        let pair = (members[u as usize], members[v as usize]);
                        if (pair == (ra, rb) || pair == (rb, ra))
                            && state.is_free(edge_index(u, v, cfg.n).expect("valid"))
                        {
                            best = Some(edge_index(u, v, cfg.n).expect("valid"));
                            break;
                        }
                    }
                    if best.is_some() {
                        break;
                    }
                }
                if let Some(e) = best {
                    return Ok(e);
                }
            }
        }
        state
            .lowest_free_edge()
            .ok_or_else(|| Forfeit::because("no free edges left"))
    }

    fn clone_policy(&self) -> Box<dyn StrategyPolicy> {
        Box::new(self.clone())
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("comparison too close to the boundary to decide at this precision")]
    BoundaryAmbiguous,
    #[error("inputs outside the evaluator's domain: {0}")]
    Domain(String),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Thm4Branch {
    /// Small `a`: the danger-potential bound.
    SmallBias,
    /// Large `a` (at least sqrt(n / ln n)): the short-game bound.
    LargeBias,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Thm4Verdict {
    pub holds: bool,
    pub branch: Option<Thm4Branch>,
}

/// Closed-form sufficient condition for the scripted Maker to win at
/// concrete `(n, a, b)`.
///
/// Below the split `a ~ sqrt(n / ln n)` the bound is
/// `b < a(n - n/(a ln n) + ((a-1)/2) ln(n/(a^2 ln n))) / (ln n + a + ln ln n + 4)`;
/// at or above the split (and `a <= (n-1)/2`) it is
/// `b < an / (a + 2 ln n - 2 ln a + 4)`. Evaluated in interval arithmetic so
/// a returned verdict is certain.
pub fn thm4_condition(n: u64, a: u64, b: u64) -> Result<Thm4Verdict, EvalError> {
    if n < 3 || a < 1 || b < 1 {
        return Err(EvalError::Domain(format!("n={n}, a={a}, b={b}")));
    }
    let ni = Interval::from_u64(n);
    let ai = Interval::from_u64(a);
    let bi = Interval::from_u64(b);
    let ln_n = ni.ln();

    // split: a^2 * ln n vs n
    let a_sq = Interval::from_i128(a as i128 * a as i128);
    let below_split = (a_sq * ln_n).lt(ni).ok_or(EvalError::BoundaryAmbiguous)?;

    if below_split {
        let ln_ln_n = ln_n.ln();
        let inside = ni / (a_sq * ln_n); // > 1 below the split
        let half_shift =
            (ai - Interval::exact(1.0)) / Interval::exact(2.0) * inside.ln();
        let numerator = ai * (ni - ni / (ai * ln_n) + half_shift);
        let denominator = ln_n + ai + ln_ln_n + Interval::exact(4.0);
        let rhs = numerator / denominator;
        let holds = bi.lt(rhs).ok_or(EvalError::BoundaryAmbiguous)?;
        Ok(Thm4Verdict { holds, branch: Some(Thm4Branch::SmallBias) })
    } else if 2 * a < n {
        let denominator = ai + Interval::exact(2.0) * ln_n
            - Interval::exact(2.0) * ai.ln()
            + Interval::exact(4.0);
        let rhs = ai * ni / denominator;
        let holds = bi.lt(rhs).ok_or(EvalError::BoundaryAmbiguous)?;
        Ok(Thm4Verdict { holds, branch: Some(Thm4Branch::LargeBias) })
    } else {
        Ok(Thm4Verdict { holds: false, branch: None })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::WinCondition;

    fn cfg(n: u32, a: u32, b: u32) -> GameConfig {
        GameConfig::new(n, a, b, WinCondition::Connectivity).unwrap()
    }

    #[test]
    fn fresh_danger_is_zero() {
        let cfg = cfg(6, 1, 2);
        let mut view = ComponentView::new(cfg.n);
        for v in 0..cfg.n {
            assert_eq!(danger(v, &mut view, &cfg), 0);
        }
    }

    #[test]
    fn danger_sentinel_and_value() {
        let cfg = cfg(8, 2, 1); // dangerous iff 2|C| <= 2, i.e. singletons only
        let mut view = ComponentView::new(cfg.n);
        view.merge_step(0, 1);
        assert_eq!(danger(0, &mut view, &cfg), -1);
        for _ in 0..5 {
            view.observe_breaker_claim(3, 4);
        }
        assert_eq!(danger(3, &mut view, &cfg), 5);
    }

    #[test]
    fn step_follows_max_danger_and_lowest_cut_edge() {
        // fresh K_4 (1:1) after Breaker claims (0,1): dangers 1,1,0,0,
        // so vertex 0 is chosen and (0,2) is the lowest free crossing edge
        let cfg = cfg(4, 1, 1);
        let mut state = GameState::new(&cfg);
        state
            .apply_claim(&cfg, Player::Breaker, edge_index(0, 1, 4).unwrap())
            .unwrap();
        let mut view = ComponentView::new(cfg.n);
        view.observe_breaker_claim(0, 1);
        let e = maker_step(&state, &mut view, &cfg).unwrap();
        assert_eq!(e, edge_index(0, 2, 4).unwrap());
        assert!(!view.is_active(0));
        assert!(view.is_active(2));
        assert!(view.invariants_hold());
    }

    #[test]
    fn step_forfeits_on_sealed_component() {
        let cfg = cfg(3, 1, 5);
        let mut state = GameState::new(&cfg);
        // Breaker seals vertex 0
        state.ownership[edge_index(0, 1, 3).unwrap().index()] = Ownership::Breaker;
        state.ownership[edge_index(0, 2, 3).unwrap().index()] = Ownership::Breaker;
        state.free_count = 1;
        let mut view = ComponentView::new(cfg.n);
        view.observe_breaker_claim(0, 1);
        view.observe_breaker_claim(0, 2);
        // vertex 0 has max danger 2 and its cut is sealed
        let err = maker_step(&state, &mut view, &cfg).unwrap_err();
        assert!(err.reason.contains("vertex 0"));
    }

    #[test]
    fn move_merges_and_fills() {
        let cfg4 = cfg(4, 3, 1);
        let state = GameState::new(&cfg4);
        let mut view = ComponentView::new(cfg4.n);
        let claims = maker_move(&state, &mut view, &cfg4).unwrap();
        assert_eq!(claims.len(), 3);
        assert_eq!(view.component_count(), 1); // spanning after 3 merges
        // forest growth: each strategic claim reduced components by one
        let cfg5 = cfg(5, 5, 1);
        let state5 = GameState::new(&cfg5);
        let mut view5 = ComponentView::new(cfg5.n);
        let claims5 = maker_move(&state5, &mut view5, &cfg5).unwrap();
        assert_eq!(claims5.len(), 5); // 4 merges + 1 fill
        assert_eq!(view5.component_count(), 1);
    }

    #[test]
    fn active_set_shrinks_by_one_per_step() {
        let cfg = cfg(6, 1, 1);
        let state = GameState::new(&cfg);
        let mut view = ComponentView::new(cfg.n);
        for expect in (2..=6).rev() {
            assert_eq!(view.component_count(), expect);
            assert_eq!(view.active_vertices().count() as u32, expect);
            let mut scratch = state.clone();
            scratch.ownership = view_snapshot_board(&cfg, &view);
            maker_step(&scratch, &mut view, &cfg).unwrap();
        }
        assert_eq!(view.component_count(), 1);
    }

    // rebuilds a board whose maker edges realize the view's components
    fn view_snapshot_board(cfg: &GameConfig, view: &ComponentView) -> Vec<Ownership> {
        let mut v = view.clone();
        let mut own = vec![Ownership::Free; cfg.edge_count() as usize];
        for a in 0..cfg.n {
            for b in a + 1..cfg.n {
                if v.same_component(a, b) {
                    own[edge_index(a, b, cfg.n).unwrap().index()] = Ownership::Maker;
                }
            }
        }
        own
    }

    #[test]
    fn thm4_examples() {
        // n=10^6, a=1, b around half the asymptotic threshold: inside
        let v = thm4_condition(1_000_000, 1, 36_190).unwrap();
        assert!(v.holds);
        assert_eq!(v.branch, Some(Thm4Branch::SmallBias));
        // large-bias branch
        let v = thm4_condition(100, 49, 1).unwrap();
        assert!(v.holds);
        assert_eq!(v.branch, Some(Thm4Branch::LargeBias));
        // hopeless b
        let v = thm4_condition(100, 1, 1_000_000).unwrap();
        assert!(!v.holds);
        // bias beyond (n-1)/2: no branch applies
        let v = thm4_condition(100, 60, 1).unwrap();
        assert!(!v.holds);
        assert_eq!(v.branch, None);
    }

    #[test]
    fn thm4_monotone_in_b() {
        for b in 1..40u64 {
            let lo = thm4_condition(200, 1, b).unwrap().holds;
            let hi = thm4_condition(200, 1, b + 1).unwrap().holds;
            if hi {
                assert!(lo, "condition must be downward closed in b (b={b})");
            }
        }
    }
}
