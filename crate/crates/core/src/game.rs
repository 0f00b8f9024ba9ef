//! Board state and rules for the biased `(a:b)` game on `E(K_n)`.
//!
//! Breaker moves first and claims `b` free edges per move, then Maker claims
//! `a`. Under the `Connectivity` win condition Maker wins by owning a spanning
//! connected subgraph; under `PositiveMinDegree` Maker wins by touching every
//! vertex. Breaker wins by making Maker's goal unreachable.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::edge::{edge_count, edge_endpoints, EdgeId, Vertex};
use crate::unionfind::UnionFind;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Player {
    Breaker,
    Maker,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Breaker => Player::Maker,
            Player::Maker => Player::Breaker,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WinCondition {
    Connectivity,
    PositiveMinDegree,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GameConfig {
    /// Vertex count, at least 2.
    pub n: u32,
    /// Maker's bias `a`.
    pub maker_bias: u32,
    /// Breaker's bias `b`.
    pub breaker_bias: u32,
    pub win_condition: WinCondition,
}

impl GameConfig {
    pub fn new(n: u32, maker_bias: u32, breaker_bias: u32, win_condition: WinCondition) -> Result<Self, GameError> {
        let cfg = GameConfig { n, maker_bias, breaker_bias, win_condition };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), GameError> {
        if self.n < 2 || self.maker_bias < 1 || self.breaker_bias < 1 {
            return Err(GameError::InvalidConfig {
                n: self.n,
                a: self.maker_bias,
                b: self.breaker_bias,
            });
        }
        Ok(())
    }

    pub fn edge_count(&self) -> u32 {
        edge_count(self.n)
    }

    pub fn bias_of(&self, player: Player) -> u32 {
        match player {
            Player::Breaker => self.breaker_bias,
            Player::Maker => self.maker_bias,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Ownership {
    Free,
    Maker,
    Breaker,
}

impl Ownership {
    pub fn of(player: Player) -> Ownership {
        match player {
            Player::Maker => Ownership::Maker,
            Player::Breaker => Ownership::Breaker,
        }
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error("invalid config: n={n}, a={a}, b={b} (need n >= 2, a >= 1, b >= 1)")]
    InvalidConfig { n: u32, a: u32, b: u32 },
    #[error("vertex pair ({u},{v}) out of range for n={n}")]
    VertexOutOfRange { u: Vertex, v: Vertex, n: u32 },
    #[error("edge id {edge} out of range for n={n}")]
    EdgeOutOfRange { edge: u32, n: u32 },
    #[error("edge {0:?} is not free")]
    IllegalMove(EdgeId),
    #[error("it is not {0:?}'s turn")]
    WrongTurn(Player),
    #[error("no picks left in the current move")]
    NoPicksLeft,
}

/// Full position of a match: ownership of every edge plus whose claim is next.
///
/// A "round" is one Breaker move (`b` claims) followed by one Maker move
/// (`a` claims); `round` is 1-based and advances when the turn passes back to
/// Breaker. When fewer free edges remain than the mover's bias, the move is
/// truncated to what is available.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameState {
    pub n: u32,
    pub ownership: Vec<Ownership>,
    pub turn: Player,
    pub picks_left: u32,
    pub round: u32,
    pub free_count: u32,
    pub history: Vec<(Player, EdgeId)>,
}

impl GameState {
    pub fn new(cfg: &GameConfig) -> Self {
        let edges = cfg.edge_count();
        GameState {
            n: cfg.n,
            ownership: vec![Ownership::Free; edges as usize],
            turn: Player::Breaker,
            picks_left: cfg.breaker_bias.min(edges),
            round: 1,
            free_count: edges,
            history: Vec::new(),
        }
    }

    pub fn owner(&self, e: EdgeId) -> Ownership {
        self.ownership[e.index()]
    }

    pub fn is_free(&self, e: EdgeId) -> bool {
        self.owner(e) == Ownership::Free
    }

    pub fn count_owned_by(&self, player: Player) -> u32 {
        let want = Ownership::of(player);
        self.ownership.iter().filter(|&&o| o == want).count() as u32
    }

    /// Claims `e` for `player`. On the last pick of a move the turn flips and
    /// `picks_left` is reset to the opponent's bias (truncated to the free
    /// edges remaining); a Maker-to-Breaker flip starts the next round.
    pub fn apply_claim(&mut self, cfg: &GameConfig, player: Player, e: EdgeId) -> Result<(), GameError> {
        if e.0 >= cfg.edge_count() {
            return Err(GameError::EdgeOutOfRange { edge: e.0, n: self.n });
        }
        if player != self.turn {
            return Err(GameError::WrongTurn(player));
        }
        if self.picks_left == 0 {
            return Err(GameError::NoPicksLeft);
        }
        if !self.is_free(e) {
            return Err(GameError::IllegalMove(e));
        }
        self.ownership[e.index()] = Ownership::of(player);
        self.free_count -= 1;
        self.history.push((player, e));
        self.picks_left -= 1;
        if self.picks_left == 0 {
            let next = player.opponent();
            if player == Player::Maker {
                self.round += 1;
            }
            self.turn = next;
            self.picks_left = cfg.bias_of(next).min(self.free_count);
        }
        Ok(())
    }

    /// Lowest-index free edge, if any.
    pub fn lowest_free_edge(&self) -> Option<EdgeId> {
        self.ownership
            .iter()
            .position(|&o| o == Ownership::Free)
            .map(|i| EdgeId(i as u32))
    }

    /// Replays `history` from a fresh board and checks it reproduces this
    /// exact ownership array.
    pub fn replays_consistently(&self, cfg: &GameConfig) -> bool {
        let mut fresh = GameState::new(cfg);
        for &(player, e) in &self.history {
            if fresh.apply_claim(cfg, player, e).is_err() {
                return false;
            }
        }
        fresh.ownership == self.ownership
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OutcomeCause {
    SpanningConnected,
    AllVerticesTouched,
    IsolatedVertexForBreaker,
    CutSealed,
    BoardExhausted,
    Forfeit,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outcome {
    pub winner: Player,
    pub cause: OutcomeCause,
    pub forfeiting_player: Option<Player>,
}

impl Outcome {
    pub fn decided(winner: Player, cause: OutcomeCause) -> Self {
        Outcome { winner, cause, forfeiting_player: None }
    }

    pub fn forfeit(forfeiting: Player) -> Self {
        Outcome {
            winner: forfeiting.opponent(),
            cause: OutcomeCause::Forfeit,
            forfeiting_player: Some(forfeiting),
        }
    }
}

/// Decides the position, if it is decided.
///
/// Connectivity: Maker wins as soon as his graph is spanning connected;
/// Breaker wins as soon as `M ∪ Free` is disconnected (Maker can no longer
/// span, which covers isolating a vertex in Maker's graph). Positive minimum
/// degree: Maker wins once every vertex has a Maker edge; Breaker wins once
/// some vertex has all incident edges claimed by Breaker.
pub fn detect_outcome(state: &GameState, cfg: &GameConfig) -> Option<Outcome> {
    match cfg.win_condition {
        WinCondition::Connectivity => {
            if maker_spanning_connected(state) {
                return Some(Outcome::decided(Player::Maker, OutcomeCause::SpanningConnected));
            }
            if !maker_union_free_connected(state) {
                return Some(Outcome::decided(Player::Breaker, OutcomeCause::CutSealed));
            }
            None
        }
        WinCondition::PositiveMinDegree => {
            let deg = degrees(state);
            if deg.iter().all(|d| d.maker > 0) {
                return Some(Outcome::decided(Player::Maker, OutcomeCause::AllVerticesTouched));
            }
            if deg.iter().any(|d| d.breaker == state.n - 1) {
                return Some(Outcome::decided(
                    Player::Breaker,
                    OutcomeCause::IsolatedVertexForBreaker,
                ));
            }
            None
        }
    }
}

struct VertexDegrees {
    maker: u32,
    breaker: u32,
}

fn degrees(state: &GameState) -> Vec<VertexDegrees> {
    let mut deg: Vec<VertexDegrees> = (0..state.n)
        .map(|_| VertexDegrees { maker: 0, breaker: 0 })
        .collect();
    for (i, &o) in state.ownership.iter().enumerate() {
        if o == Ownership::Free {
            continue;
        }
        let (u, v) = edge_endpoints(EdgeId(i as u32), state.n).expect("in range");
        match o {
            Ownership::Maker => {
                deg[u as usize].maker += 1;
                deg[v as usize].maker += 1;
            }
            Ownership::Breaker => {
                deg[u as usize].breaker += 1;
                deg[v as usize].breaker += 1;
            }
            Ownership::Free => unreachable!(),
        }
    }
    deg
}

pub fn maker_spanning_connected(state: &GameState) -> bool {
    connected_under(state, |o| o == Ownership::Maker)
}

pub fn maker_union_free_connected(state: &GameState) -> bool {
    connected_under(state, |o| o != Ownership::Breaker)
}

fn connected_under(state: &GameState, keep: impl Fn(Ownership) -> bool) -> bool {
    let mut uf = UnionFind::new(state.n);
    for (i, &o) in state.ownership.iter().enumerate() {
        if keep(o) {
            let (u, v) = edge_endpoints(EdgeId(i as u32), state.n).expect("in range");
            uf.union(u, v);
        }
    }
    uf.component_count() == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::edge::edge_index;

    fn cfg(n: u32, a: u32, b: u32) -> GameConfig {
        GameConfig::new(n, a, b, WinCondition::Connectivity).unwrap()
    }

    fn claim(state: &mut GameState, cfg: &GameConfig, player: Player, u: u32, v: u32) {
        let e = edge_index(u, v, cfg.n).unwrap();
        state.apply_claim(cfg, player, e).unwrap();
    }

    #[test]
    fn fresh_claim_and_errors() {
        let cfg = cfg(3, 1, 1);
        let mut state = GameState::new(&cfg);
        claim(&mut state, &cfg, Player::Breaker, 0, 1);
        assert_eq!(state.owner(EdgeId(0)), Ownership::Breaker);
        assert_eq!(state.turn, Player::Maker);
        // same edge twice
        assert_eq!(
            state.apply_claim(&cfg, Player::Maker, EdgeId(0)),
            Err(GameError::IllegalMove(EdgeId(0)))
        );
        // wrong player
        assert_eq!(
            state.apply_claim(&cfg, Player::Breaker, EdgeId(1)),
            Err(GameError::WrongTurn(Player::Breaker))
        );
    }

    #[test]
    fn round_and_turn_accounting() {
        let cfg = cfg(4, 2, 3);
        let mut state = GameState::new(&cfg);
        assert_eq!(state.picks_left, 3);
        for (u, v) in [(0, 1), (0, 2), (0, 3)] {
            claim(&mut state, &cfg, Player::Breaker, u, v);
        }
        assert_eq!(state.turn, Player::Maker);
        assert_eq!(state.picks_left, 2);
        assert_eq!(state.round, 1);
        claim(&mut state, &cfg, Player::Maker, 1, 2);
        claim(&mut state, &cfg, Player::Maker, 1, 3);
        assert_eq!(state.turn, Player::Breaker);
        assert_eq!(state.round, 2);
        // one free edge left: breaker's move is truncated
        assert_eq!(state.picks_left, 1);
    }

    #[test]
    fn detect_triangle_positions() {
        let cfg = cfg(3, 1, 1);
        let mut state = GameState::new(&cfg);
        assert!(detect_outcome(&state, &cfg).is_none());
        // Maker owns {01, 12}: spans the triangle.
        state.ownership[0] = Ownership::Maker;
        state.ownership[2] = Ownership::Maker;
        let out = detect_outcome(&state, &cfg).unwrap();
        assert_eq!(out.winner, Player::Maker);
        assert_eq!(out.cause, OutcomeCause::SpanningConnected);

        // Breaker owns {01, 02}: vertex 0 is cut off in M ∪ Free.
        let mut state = GameState::new(&cfg);
        state.ownership[0] = Ownership::Breaker;
        state.ownership[1] = Ownership::Breaker;
        let out = detect_outcome(&state, &cfg).unwrap();
        assert_eq!(out.winner, Player::Breaker);
        assert_eq!(out.cause, OutcomeCause::CutSealed);
    }

    #[test]
    fn detect_fresh_k4_undecided() {
        let cfg = cfg(4, 1, 1);
        let state = GameState::new(&cfg);
        assert!(detect_outcome(&state, &cfg).is_none());
    }

    #[test]
    fn detect_positive_min_degree() {
        let cfg = GameConfig::new(3, 1, 1, WinCondition::PositiveMinDegree).unwrap();
        let mut state = GameState::new(&cfg);
        // Maker touches all three vertices with {01, 12}.
        state.ownership[0] = Ownership::Maker;
        state.ownership[2] = Ownership::Maker;
        let out = detect_outcome(&state, &cfg).unwrap();
        assert_eq!(out.winner, Player::Maker);
        assert_eq!(out.cause, OutcomeCause::AllVerticesTouched);

        let mut state = GameState::new(&cfg);
        state.ownership[0] = Ownership::Breaker;
        state.ownership[1] = Ownership::Breaker;
        let out = detect_outcome(&state, &cfg).unwrap();
        assert_eq!(out.winner, Player::Breaker);
        assert_eq!(out.cause, OutcomeCause::IsolatedVertexForBreaker);
    }

    #[test]
    fn connectivity_win_implies_pmd_win() {
        // spot check of the dominance on a handful of K_4 positions
        let conn = cfg(4, 1, 1);
        let pmd = GameConfig::new(4, 1, 1, WinCondition::PositiveMinDegree).unwrap();
        let mut state = GameState::new(&conn);
        for e in [0usize, 3, 5] {
            state.ownership[e] = Ownership::Maker; // 01, 12, 23: a path spanning K_4
        }
        let c = detect_outcome(&state, &conn).unwrap();
        assert_eq!(c.winner, Player::Maker);
        let p = detect_outcome(&state, &pmd).unwrap();
        assert_eq!(p.winner, Player::Maker);
    }

    #[test]
    fn outcome_never_flips_after_decision() {
        // once decided, any further legal claims keep the same winner
        for wc in [WinCondition::Connectivity, WinCondition::PositiveMinDegree] {
            let cfg = GameConfig::new(4, 1, 2, wc).unwrap();
            let mut state = GameState::new(&cfg);
            let mut decided: Option<Player> = None;
            while state.free_count > 0 {
                let e = state.lowest_free_edge().unwrap();
                let p = state.turn;
                state.apply_claim(&cfg, p, e).unwrap();
                if let Some(out) = detect_outcome(&state, &cfg) {
                    if let Some(w) = decided {
                        assert_eq!(out.winner, w, "winner flipped under {wc:?}");
                    } else {
                        decided = Some(out.winner);
                    }
                }
            }
            assert!(decided.is_some());
        }
    }

    #[test]
    fn ownership_conservation_and_replay() {
        let cfg = cfg(4, 1, 2);
        let mut state = GameState::new(&cfg);
        let edges = cfg.edge_count();
        let mut player_order = Vec::new();
        while state.free_count > 0 {
            let e = state.lowest_free_edge().unwrap();
            let p = state.turn;
            state.apply_claim(&cfg, p, e).unwrap();
            player_order.push(p);
            let m = state.count_owned_by(Player::Maker);
            let b = state.count_owned_by(Player::Breaker);
            assert_eq!(m + b + state.free_count, edges);
        }
        assert!(state.replays_consistently(&cfg));
        // schedule: b=2 breaker picks then a=1 maker pick, repeating
        assert_eq!(player_order[0], Player::Breaker);
        assert_eq!(player_order[1], Player::Breaker);
        assert_eq!(player_order[2], Player::Maker);
    }
}
