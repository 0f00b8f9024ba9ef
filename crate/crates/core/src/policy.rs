//! Move-generation policies.
//!
//! A policy produces one claim at a time for its side. The match runner calls
//! [`StrategyPolicy::next_claim`] once per claim and notifies every policy of
//! every applied claim (its own included) through
//! [`StrategyPolicy::on_claim`], so policies can maintain incremental views of
//! the board. A policy may assume the claim it returns is applied before any
//! further callback.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::edge::{edge_count, EdgeId};
use crate::game::{GameConfig, GameState, Player};
use crate::seeding::{rng_from, salt_of};

/// Raised when a scripted strategy cannot follow its prescription.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Forfeit {
    pub reason: String,
}

impl Forfeit {
    pub fn because(reason: impl Into<String>) -> Self {
        Forfeit { reason: reason.into() }
    }
}

pub trait StrategyPolicy: Send {
    /// Stable identifier, e.g. `"maker.thm4"`.
    fn id(&self) -> &str;

    /// Prepares the policy for a fresh match on `side`.
    fn reset(&mut self, cfg: &GameConfig, side: Player, seed: u64);

    /// Observes an applied claim by either player.
    fn on_claim(&mut self, cfg: &GameConfig, by: Player, edge: EdgeId);

    /// Produces the next claim for this policy's side.
    fn next_claim(&mut self, state: &GameState, cfg: &GameConfig) -> Result<EdgeId, Forfeit>;

    /// Deep copy, used by search that branches over opponent replies.
    fn clone_policy(&self) -> Box<dyn StrategyPolicy>;
}

/// Uniformly random claims over the free edges.
#[derive(Clone, Debug)]
pub struct RandomPolicy {
    id: String,
    rng: ChaCha8Rng,
    /// free edge ids, order irrelevant; `slot[e]` locates `e` inside it
    free: Vec<u32>,
    slot: Vec<u32>,
}

impl RandomPolicy {
    pub fn new(id: impl Into<String>) -> Self {
        RandomPolicy {
            id: id.into(),
            rng: rng_from(0, &[]),
            free: Vec::new(),
            slot: Vec::new(),
        }
    }

    fn remove(&mut self, e: EdgeId) {
        let pos = self.slot[e.index()];
        if pos == u32::MAX {
            return;
        }
        let last = *self.free.last().expect("non-empty when removing");
        self.free.swap_remove(pos as usize);
        self.slot[e.index()] = u32::MAX;
        if last != e.0 {
            self.slot[last as usize] = pos;
        }
    }
}

impl StrategyPolicy for RandomPolicy {
    fn id(&self) -> &str {
        &self.id
    }

    fn reset(&mut self, cfg: &GameConfig, side: Player, seed: u64) {
        let edges = edge_count(cfg.n);
        self.free = (0..edges).collect();
        self.slot = (0..edges).collect();
        self.rng = rng_from(seed, &[salt_of(&self.id), side as u64]);
    }

    fn on_claim(&mut self, _cfg: &GameConfig, _by: Player, edge: EdgeId) {
        self.remove(edge);
    }

    fn next_claim(&mut self, _state: &GameState, _cfg: &GameConfig) -> Result<EdgeId, Forfeit> {
        if self.free.is_empty() {
            return Err(Forfeit::because("no free edges left"));
        }
        let i = self.rng.gen_range(0..self.free.len());
        Ok(EdgeId(self.free[i]))
    }

    fn clone_policy(&self) -> Box<dyn StrategyPolicy> {
        Box::new(self.clone())
    }
}

/// All built-in policy identifiers, maker side first.
pub const POLICY_IDS: &[&str] = &[
    "maker.thm4",
    "maker.random",
    "maker.greedy-connect",
    "breaker.thm1",
    "breaker.thm2",
    "breaker.thm3",
    "breaker.random",
    "breaker.greedy-isolate",
];

/// Side a policy id is valid for, by its prefix.
pub fn policy_side(id: &str) -> Option<Player> {
    if id.starts_with("maker.") {
        Some(Player::Maker)
    } else if id.starts_with("breaker.") {
        Some(Player::Breaker)
    } else {
        None
    }
}

/// Instantiates a built-in policy by id.
pub fn make_policy(id: &str) -> Option<Box<dyn StrategyPolicy>> {
    match id {
        "maker.thm4" => Some(Box::new(crate::maker::ActiveTreeMaker::new())),
        "maker.random" | "breaker.random" => Some(Box::new(RandomPolicy::new(id))),
        "maker.greedy-connect" => Some(Box::new(crate::maker::GreedyConnectMaker::new())),
        "breaker.thm1" => Some(Box::new(crate::breaker::CliqueIsolateBreaker::new())),
        "breaker.thm2" => Some(Box::new(crate::breaker::StarBoxBreaker::new())),
        "breaker.thm3" => Some(Box::new(crate::breaker::MatchingIsolateBreaker::new())),
        "breaker.greedy-isolate" => Some(Box::new(crate::breaker::GreedyIsolateBreaker::new())),
        _ => None,
    }
}
