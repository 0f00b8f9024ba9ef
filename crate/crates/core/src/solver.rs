//! Exhaustive ground truth for tiny boards.
//!
//! `solve_exact` runs a memoized win/loss minimax with whole moves as edges of
//! the recursion (a move is an ascending set of claims, which canonicalizes
//! the unordered multi-claim). `best_response` fixes one side to a scripted
//! policy and minimaxes only the free side, which verifies "this strategy
//! beats every opponent" claims exactly.

use std::collections::HashMap;

use thiserror::Error;

use crate::edge::EdgeId;
use crate::game::{detect_outcome, GameConfig, GameState, Outcome, Ownership, Player};
use crate::policy::StrategyPolicy;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum SolverError {
    #[error("n={0} is beyond the exact solver (n <= 5, or n = 6 with the opt-in flag)")]
    BoardTooLarge(u32),
    #[error("state budget of {0} transposition entries exceeded")]
    BudgetExceeded(usize),
    #[error("unknown policy id {0:?}")]
    UnknownPolicy(String),
}

#[derive(Clone, Debug)]
pub struct SolverLimits {
    /// Cap on transposition entries (~48 bytes each).
    pub max_states: usize,
    /// Permit n = 6 (about 28.7M reachable ownership keys).
    pub allow_n6: bool,
}

impl Default for SolverLimits {
    fn default() -> Self {
        SolverLimits { max_states: 40_000_000, allow_n6: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveResult {
    pub winner: Player,
    pub principal_variation: Vec<EdgeId>,
    pub states_visited: u64,
}

fn guard_size(cfg: &GameConfig, limits: &SolverLimits) -> Result<(), SolverError> {
    let ok = cfg.n <= 5 || (cfg.n == 6 && limits.allow_n6);
    if ok {
        Ok(())
    } else {
        Err(SolverError::BoardTooLarge(cfg.n))
    }
}

/// Packs ownership plus side-to-move into a transposition key. With at most
/// 15 edges this fits easily: 2 bits per edge plus a turn bit.
fn pack_key(state: &GameState) -> u64 {
    let mut key = 0u64;
    for (i, &o) in state.ownership.iter().enumerate() {
        let code = match o {
            Ownership::Free => 0u64,
            Ownership::Maker => 1,
            Ownership::Breaker => 2,
        };
        key |= code << (2 * i);
    }
    key | ((state.turn == Player::Maker) as u64) << 62
}

/// All moves for the side to play: ascending claim sets of size
/// `min(bias, free)`.
fn move_sets(state: &GameState, picks: u32) -> Vec<Vec<EdgeId>> {
    let free: Vec<EdgeId> = state
        .ownership
        .iter()
        .enumerate()
        .filter(|(_, &o)| o == Ownership::Free)
        .map(|(i, _)| EdgeId(i as u32))
        .collect();
    let m = (picks as usize).min(free.len());
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(m);
    fn rec(free: &[EdgeId], m: usize, start: usize, current: &mut Vec<EdgeId>, out: &mut Vec<Vec<EdgeId>>) {
        if current.len() == m {
            out.push(current.clone());
            return;
        }
        let need = m - current.len();
        for i in start..=free.len().saturating_sub(need) {
            current.push(free[i]);
            rec(free, m, i + 1, current, out);
            current.pop();
        }
    }
    rec(&free, m, 0, &mut current, &mut out);
    out
}

fn apply_move(state: &GameState, cfg: &GameConfig, player: Player, claims: &[EdgeId]) -> GameState {
    let mut next = state.clone();
    for &e in claims {
        next.apply_claim(cfg, player, e).expect("legal by construction");
    }
    next
}

struct Search {
    memo: Option<HashMap<u64, Player>>,
    visited: u64,
    max_states: usize,
}

impl Search {
    fn winner(&mut self, state: &GameState, cfg: &GameConfig) -> Result<Player, SolverError> {
        self.visited += 1;
        if let Some(out) = detect_outcome(state, cfg) {
            return Ok(out.winner);
        }
        let key = pack_key(state);
        if let Some(memo) = &self.memo {
            if let Some(&w) = memo.get(&key) {
                return Ok(w);
            }
            if memo.len() >= self.max_states {
                return Err(SolverError::BudgetExceeded(self.max_states));
            }
        }
        let mover = state.turn;
        let mut result = mover.opponent();
        for claims in move_sets(state, state.picks_left) {
            let child = apply_move(state, cfg, mover, &claims);
            if self.winner(&child, cfg)? == mover {
                result = mover;
                break;
            }
        }
        if let Some(memo) = &mut self.memo {
            memo.insert(key, result);
        }
        Ok(result)
    }
}

/// Exact winner under optimal play, Breaker moving first.
pub fn solve_exact(cfg: &GameConfig, limits: &SolverLimits) -> Result<SolveResult, SolverError> {
    solve_with_memo(cfg, limits, true)
}

/// Memoization can be disabled to cross-check transposition soundness on the
/// smallest boards.
pub fn solve_with_memo(
    cfg: &GameConfig,
    limits: &SolverLimits,
    memoize: bool,
) -> Result<SolveResult, SolverError> {
    cfg.validate().expect("valid config");
    guard_size(cfg, limits)?;
    let mut search = Search {
        memo: memoize.then(HashMap::new),
        visited: 0,
        max_states: limits.max_states,
    };
    let root = GameState::new(cfg);
    let winner = search.winner(&root, cfg)?;
    let pv = if memoize {
        principal_variation(&root, cfg, &mut search, winner)?
    } else {
        Vec::new()
    };
    Ok(SolveResult { winner, principal_variation: pv, states_visited: search.visited })
}

fn principal_variation(
    root: &GameState,
    cfg: &GameConfig,
    search: &mut Search,
    winner: Player,
) -> Result<Vec<EdgeId>, SolverError> {
    let mut pv = Vec::new();
    let mut state = root.clone();
    while detect_outcome(&state, cfg).is_none() {
        let mover = state.turn;
        let mut chosen = None;
        for claims in move_sets(&state, state.picks_left) {
            let child = apply_move(&state, cfg, mover, &claims);
            let value = search.winner(&child, cfg)?;
            // the mover holds the line when winning, any move when losing
            if value == winner || mover != winner {
                chosen = Some((claims, child));
                break;
            }
        }
        let (claims, child) = chosen.expect("some move exists in an undecided state");
        pv.extend(claims);
        state = child;
    }
    Ok(pv)
}

/// Minimax over the free side only; `fixed` plays its scripted moves.
///
/// `winner == fixed_side` means the script beats every opposing line. A
/// forfeit by the script loses that line. No transposition table is used:
/// scripted moves may depend on history, not just position.
pub fn best_response(
    cfg: &GameConfig,
    fixed: &dyn StrategyPolicy,
    fixed_side: Player,
    seed: u64,
    limits: &SolverLimits,
) -> Result<SolveResult, SolverError> {
    cfg.validate().expect("valid config");
    guard_size(cfg, limits)?;
    let mut policy = fixed.clone_policy();
    policy.reset(cfg, fixed_side, seed);
    let mut visited = 0u64;
    let root = GameState::new(cfg);
    let winner = response_walk(&root, cfg, policy.as_mut(), fixed_side, &mut visited)?;
    Ok(SolveResult { winner, principal_variation: Vec::new(), states_visited: visited })
}

fn response_walk(
    state: &GameState,
    cfg: &GameConfig,
    policy: &mut dyn StrategyPolicy,
    fixed_side: Player,
    visited: &mut u64,
) -> Result<Player, SolverError> {
    *visited += 1;
    if let Some(Outcome { winner, .. }) = detect_outcome(state, cfg) {
        return Ok(winner);
    }
    let mover = state.turn;
    if mover == fixed_side {
        // play the scripted move claim by claim
        let mut cur = state.clone();
        let picks = cur.picks_left;
        for _ in 0..picks {
            if detect_outcome(&cur, cfg).is_some() {
                break;
            }
            let e = match policy.next_claim(&cur, cfg) {
                Ok(e) => e,
                Err(_) => return Ok(fixed_side.opponent()), // forfeit loses the line
            };
            if cur.apply_claim(cfg, mover, e).is_err() {
                return Ok(fixed_side.opponent());
            }
            policy.on_claim(cfg, mover, e);
        }
        response_walk(&cur, cfg, policy, fixed_side, visited)
    } else {
        // free side: wins if any reply wins
        let free_side = mover;
        for claims in move_sets(state, state.picks_left) {
            let mut child = state.clone();
            let mut fork = policy.clone_policy();
            for &e in &claims {
                child.apply_claim(cfg, mover, e).expect("legal");
                fork.on_claim(cfg, mover, e);
            }
            if response_walk(&child, cfg, fork.as_mut(), fixed_side, visited)? == free_side {
                return Ok(free_side);
            }
        }
        Ok(fixed_side)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdResult {
    /// Largest `b` at which Maker still wins; 0 when Breaker wins already at
    /// `b = 1`.
    pub b0: u32,
    pub degenerate: bool,
    /// `(b, winner)` pairs visited by the ascending scan.
    pub scanned: Vec<(u32, Player)>,
}

/// Ascending scan for the threshold bias at fixed `a`, asserting
/// bias monotonicity along the way.
pub fn enumerate_threshold(
    n: u32,
    maker_bias: u32,
    win_condition: crate::game::WinCondition,
    limits: &SolverLimits,
) -> Result<ThresholdResult, SolverError> {
    let edges = crate::edge::edge_count(n);
    let mut scanned = Vec::new();
    let mut b0 = 0u32;
    for b in 1..=edges {
        let cfg = GameConfig::new(n, maker_bias, b, win_condition).expect("valid");
        let winner = solve_exact(&cfg, limits)?.winner;
        scanned.push((b, winner));
        match winner {
            Player::Maker => b0 = b,
            Player::Breaker => {
                // confirm the flip is stable for a couple more steps
                for extra in b + 1..=(b + 2).min(edges) {
                    let cfg = GameConfig::new(n, maker_bias, extra, win_condition).unwrap();
                    let w = solve_exact(&cfg, limits)?.winner;
                    scanned.push((extra, w));
                    assert_eq!(w, Player::Breaker, "bias monotonicity violated at b={extra}");
                }
                break;
            }
        }
    }
    Ok(ThresholdResult { b0, degenerate: b0 == 0, scanned })
}
