//! Running one match between two policies.
//!
//! The runner asks the side to move for one claim at a time, applies it,
//! notifies both policies, and evaluates the position. Maker wins are checked
//! after every Maker claim (they are cheap and monotone within a move);
//! Breaker wins are checked once per completed Breaker move, which is sound
//! because Breaker claims are permanent and Maker claims never shrink
//! `M ∪ Free`.

use serde::{Deserialize, Serialize};

use crate::edge::{edge_endpoints, EdgeId};
use crate::game::{
    detect_outcome, GameConfig, GameState, Outcome, OutcomeCause, Player, WinCondition,
};
use crate::policy::StrategyPolicy;
use crate::seeding::{derive_seed, salt_of};
use crate::unionfind::UnionFind;

/// Everything needed to reproduce and audit one match.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatchRecord {
    pub config: GameConfig,
    pub maker_policy_id: String,
    pub breaker_policy_id: String,
    pub seed: u64,
    pub outcome: Outcome,
    pub rounds_played: u32,
    pub history: Vec<(Player, EdgeId)>,
}

/// Line-oriented JSON form of a record. Field order is fixed; history is the
/// claimed edge ids in order (players are implied by the bias schedule).
#[derive(Serialize)]
struct MatchRecordLine<'a> {
    n: u32,
    a: u32,
    b: u32,
    win_condition: WinCondition,
    maker: &'a str,
    breaker: &'a str,
    seed: u64,
    winner: Player,
    cause: OutcomeCause,
    rounds: u32,
    history: Vec<u32>,
}

impl MatchRecord {
    pub fn to_json_line(&self) -> String {
        let line = MatchRecordLine {
            n: self.config.n,
            a: self.config.maker_bias,
            b: self.config.breaker_bias,
            win_condition: self.config.win_condition,
            maker: &self.maker_policy_id,
            breaker: &self.breaker_policy_id,
            seed: self.seed,
            winner: self.outcome.winner,
            cause: self.outcome.cause,
            rounds: self.rounds_played,
            history: self.history.iter().map(|&(_, e)| e.0).collect(),
        };
        serde_json::to_string(&line).expect("serializable")
    }

    /// Replays the history from scratch and checks it is legal and reaches a
    /// position consistent with the recorded outcome.
    pub fn replays_cleanly(&self) -> bool {
        let mut state = GameState::new(&self.config);
        for &(player, e) in &self.history {
            if state.apply_claim(&self.config, player, e).is_err() {
                return false;
            }
        }
        if self.outcome.cause == OutcomeCause::Forfeit {
            return true;
        }
        detect_outcome(&state, &self.config)
            .map(|o| o.winner == self.outcome.winner)
            .unwrap_or(false)
    }
}

struct Tracker {
    maker_components: UnionFind,
    touched: Vec<bool>,
    touched_count: u32,
    breaker_degree: Vec<u32>,
}

impl Tracker {
    fn new(n: u32) -> Self {
        Tracker {
            maker_components: UnionFind::new(n),
            touched: vec![false; n as usize],
            touched_count: 0,
            breaker_degree: vec![0; n as usize],
        }
    }

    fn note(&mut self, cfg: &GameConfig, by: Player, e: EdgeId) {
        let (u, v) = edge_endpoints(e, cfg.n).expect("in range");
        match by {
            Player::Maker => {
                self.maker_components.union(u, v);
                for w in [u, v] {
                    if !self.touched[w as usize] {
                        self.touched[w as usize] = true;
                        self.touched_count += 1;
                    }
                }
            }
            Player::Breaker => {
                self.breaker_degree[u as usize] += 1;
                self.breaker_degree[v as usize] += 1;
            }
        }
    }

    fn maker_won(&self, cfg: &GameConfig) -> Option<Outcome> {
        match cfg.win_condition {
            WinCondition::Connectivity => (self.maker_components.component_count() == 1)
                .then(|| Outcome::decided(Player::Maker, OutcomeCause::SpanningConnected)),
            WinCondition::PositiveMinDegree => (self.touched_count == cfg.n)
                .then(|| Outcome::decided(Player::Maker, OutcomeCause::AllVerticesTouched)),
        }
    }

    fn breaker_won(&self, state: &GameState, cfg: &GameConfig) -> Option<Outcome> {
        match cfg.win_condition {
            WinCondition::Connectivity => {
                (!crate::game::maker_union_free_connected(state))
                    .then(|| Outcome::decided(Player::Breaker, OutcomeCause::CutSealed))
            }
            WinCondition::PositiveMinDegree => self
                .breaker_degree
                .iter()
                .any(|&d| d == cfg.n - 1)
                .then(|| Outcome::decided(Player::Breaker, OutcomeCause::IsolatedVertexForBreaker)),
        }
    }
}

/// Plays one match to completion. Policies are reset with seeds derived from
/// `seed`, so identical inputs reproduce the identical record.
pub fn play_match(
    cfg: &GameConfig,
    breaker: &mut dyn StrategyPolicy,
    maker: &mut dyn StrategyPolicy,
    seed: u64,
) -> MatchRecord {
    cfg.validate().expect("valid config");
    let mut state = GameState::new(cfg);
    breaker.reset(cfg, Player::Breaker, derive_seed(seed, &[salt_of("breaker")]));
    maker.reset(cfg, Player::Maker, derive_seed(seed, &[salt_of("maker")]));
    let mut tracker = Tracker::new(cfg.n);

    let outcome = loop {
        if state.free_count == 0 {
            // fully claimed boards are always decided
            break detect_outcome(&state, cfg)
                .unwrap_or(Outcome::decided(Player::Breaker, OutcomeCause::BoardExhausted));
        }
        let mover = state.turn;
        let policy: &mut dyn StrategyPolicy = match mover {
            Player::Breaker => breaker,
            Player::Maker => maker,
        };
        let asked = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| {
            policy.next_claim(&state, cfg)
        }));
        let claim = match asked {
            Ok(Ok(e)) => e,
            // a refusal or a policy crash both count as a forfeit
            Ok(Err(_)) | Err(_) => break Outcome::forfeit(mover),
        };
        if state.apply_claim(cfg, mover, claim).is_err() {
            // an illegal or unavailable claim counts as a forfeit
            break Outcome::forfeit(mover);
        }
        tracker.note(cfg, mover, claim);
        breaker.on_claim(cfg, mover, claim);
        maker.on_claim(cfg, mover, claim);

        match mover {
            Player::Maker => {
                if let Some(out) = tracker.maker_won(cfg) {
                    break out;
                }
            }
            Player::Breaker => {
                // lazily, at the end of breaker's move
                if state.turn != Player::Breaker || state.free_count == 0 {
                    if let Some(out) = tracker.breaker_won(&state, cfg) {
                        break out;
                    }
                }
            }
        }
    };
    debug_assert!(
        outcome.cause == OutcomeCause::Forfeit
            || detect_outcome(&state, cfg).map(|o| o.winner) == Some(outcome.winner),
        "incremental and positional evaluation disagree"
    );

    MatchRecord {
        config: *cfg,
        maker_policy_id: maker.id().to_string(),
        breaker_policy_id: breaker.id().to_string(),
        seed,
        outcome,
        rounds_played: effective_rounds(&state),
        history: state.history,
    }
}

fn effective_rounds(state: &GameState) -> u32 {
    // `round` advances when Maker finishes a move; a game decided right at
    // that boundary still belongs to the round just completed
    if state.turn == Player::Breaker
        && state.history.last().map(|&(p, _)| p) == Some(Player::Maker)
    {
        return state.round - 1;
    }
    state.round
}

/// Convenience wrapper resolving policies by id.
pub fn play_match_by_ids(
    cfg: &GameConfig,
    breaker_id: &str,
    maker_id: &str,
    seed: u64,
) -> Option<MatchRecord> {
    let mut breaker = crate::policy::make_policy(breaker_id)?;
    let mut maker = crate::policy::make_policy(maker_id)?;
    Some(play_match(cfg, breaker.as_mut(), maker.as_mut(), seed))
}


#[cfg(test)]
mod tests {
    use super::testing::LowestFreePolicy;
    use super::*;
    use crate::policy::make_policy;

    fn cfg(n: u32, a: u32, b: u32) -> GameConfig {
        GameConfig::new(n, a, b, WinCondition::Connectivity).unwrap()
    }

    #[test]
    fn lowest_free_duel_on_triangle_goes_to_breaker() {
        let cfg = cfg(3, 1, 1);
        let mut b = LowestFreePolicy { id: "breaker.first".into() };
        let mut m = LowestFreePolicy { id: "maker.first".into() };
        let rec = play_match(&cfg, &mut b, &mut m, 0);
        assert_eq!(rec.outcome.winner, Player::Breaker);
        assert_eq!(rec.outcome.cause, OutcomeCause::CutSealed);
        assert!(rec.replays_cleanly());
    }

    #[test]
    fn determinism_identical_records() {
        let cfg = cfg(8, 2, 3);
        for seed in [0u64, 1, 42] {
            let r1 = play_match_by_ids(&cfg, "breaker.random", "maker.random", seed).unwrap();
            let r2 = play_match_by_ids(&cfg, "breaker.random", "maker.random", seed).unwrap();
            assert_eq!(r1, r2);
            assert_eq!(r1.to_json_line(), r2.to_json_line());
        }
    }

    #[test]
    fn different_seeds_usually_differ() {
        let cfg = cfg(8, 2, 3);
        let r1 = play_match_by_ids(&cfg, "breaker.random", "maker.random", 1).unwrap();
        let r2 = play_match_by_ids(&cfg, "breaker.random", "maker.random", 2).unwrap();
        assert_ne!(r1.history, r2.history);
    }

    #[test]
    fn round_accounting_matches_schedule() {
        let cfg = cfg(6, 2, 3);
        let rec = play_match_by_ids(&cfg, "breaker.random", "maker.random", 9).unwrap();
        // after r full rounds, breaker owns r*b and maker r*a, up to the
        // final (possibly partial) move
        let mut state = GameState::new(&cfg);
        let mut completed_rounds = 0;
        for &(p, e) in &rec.history {
            state.apply_claim(&cfg, p, e).unwrap();
            if state.turn == Player::Breaker
                && state.picks_left == cfg.breaker_bias.min(state.free_count)
                && state.history.last().map(|&(q, _)| q) == Some(Player::Maker)
            {
                completed_rounds += 1;
                assert_eq!(
                    state.count_owned_by(Player::Breaker),
                    completed_rounds * cfg.breaker_bias
                );
                assert_eq!(
                    state.count_owned_by(Player::Maker),
                    completed_rounds * cfg.maker_bias
                );
            }
        }
    }

    #[test]
    fn huge_maker_bias_spans_in_one_move() {
        // breaker takes one edge, maker takes everything else
        let cfg = cfg(4, 100, 1);
        let rec = play_match_by_ids(&cfg, "breaker.random", "maker.greedy-connect", 3).unwrap();
        assert_eq!(rec.outcome.winner, Player::Maker);
        assert_eq!(rec.rounds_played, 1);
    }

    #[test]
    fn breaker_star_grab_wins_immediately() {
        // b >= n-1: a full star is a cut
        let cfg = cfg(4, 6, 3);
        let mut b = make_policy("breaker.greedy-isolate").unwrap();
        let mut m = make_policy("maker.random").unwrap();
        let rec = play_match(&cfg, b.as_mut(), m.as_mut(), 0);
        assert_eq!(rec.outcome.winner, Player::Breaker);
        assert_eq!(rec.rounds_played, 1);
        assert_eq!(rec.history.len(), 3);
    }

    #[test]
    fn forfeit_recorded_with_side() {
        // breaker.thm1 cannot even start when b is below the cost of the
        // smallest clique extension
        let cfg = cfg(6, 2, 1);
        let mut b = make_policy("breaker.thm1").unwrap();
        let mut m = make_policy("maker.random").unwrap();
        let rec = play_match(&cfg, b.as_mut(), m.as_mut(), 1);
        assert_eq!(rec.outcome.cause, OutcomeCause::Forfeit);
        assert_eq!(rec.outcome.forfeiting_player, Some(Player::Breaker));
        assert_eq!(rec.outcome.winner, Player::Maker);
        assert!(rec.history.is_empty());
        assert!(rec.replays_cleanly());
    }

    #[test]
    fn json_line_shape() {
        let cfg = cfg(3, 1, 1);
        let mut b = LowestFreePolicy { id: "breaker.first".into() };
        let mut m = LowestFreePolicy { id: "maker.first".into() };
        let rec = play_match(&cfg, &mut b, &mut m, 7);
        let line = rec.to_json_line();
        assert!(line.starts_with("{\"n\":3,\"a\":1,\"b\":1,"));
        assert!(line.contains("\"history\":[0,1,2]"));
    }
}
