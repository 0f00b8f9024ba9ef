//! Biased `(a:b)` Maker-Breaker games on the edge set of `K_n`.
//!
//! Breaker claims `b` free edges per move (moving first), Maker claims `a`.
//! Maker wins the Connectivity game by owning a spanning connected subgraph,
//! and the Positive Minimum Degree game by touching every vertex.
//!
//! The crate provides:
//!
//! * a replayable game engine with deterministic policies ([`matchplay`],
//!   [`policy`]);
//! * the Box Game with its potential function, winning certificate, and
//!   scripted BoxMaker ([`boxgame`]);
//! * scripted Breaker strategies (clique-then-starve, star boxes, matching
//!   then isolate) and scripted Maker (danger-guided tree growth), each with
//!   an exact concrete-parameter certificate ([`breaker`], [`maker`]);
//! * exhaustive minimax oracles for desk-scale boards ([`solver`]);
//! * threshold-bias bound bands, random-play Monte Carlo, and sweep
//!   orchestration ([`analysis`]).

pub mod analysis;
pub mod boxgame;
pub mod breaker;
pub mod edge;
pub mod game;
pub mod harmonic;
pub mod interval;
pub mod maker;
pub mod matchplay;
pub mod policy;
pub mod seeding;
pub mod solver;
pub mod unionfind;

pub use edge::{edge_count, edge_endpoints, edge_index, EdgeId, Vertex};
pub use game::{
    detect_outcome, GameConfig, GameError, GameState, Outcome, OutcomeCause, Ownership, Player,
    WinCondition,
};
pub use matchplay::{play_match, play_match_by_ids, MatchRecord};
pub use policy::{make_policy, policy_side, StrategyPolicy, POLICY_IDS};
