//! The Box Game `B(k, t, a, b)`.
//!
//! The board is a canonical hypergraph: `k` pairwise disjoint boxes holding
//! `t` elements in total, with pairwise size difference at most 1. BoxMaker
//! moves first and claims `a` elements per move; BoxBreaker claims `b`.
//! BoxMaker wins by claiming every element of some box; BoxBreaker wins
//! otherwise. A single BoxBreaker element makes a box impossible to complete,
//! so a box is dead as soon as BoxBreaker touches it.
//!
//! The potential `f(k; a, b)` certifies BoxMaker wins whenever
//! `t <= f(k; a, b) + a`, and the scripted BoxMaker policy here realizes that
//! certificate: complete a box that fits in the current move, otherwise keep
//! the alive boxes canonical by always shrinking a largest one.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::harmonic::range_sum_raw;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum BoxPlayer {
    BoxMaker,
    BoxBreaker,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum BoxGameError {
    #[error("box game needs k >= 1 and t >= k, got k={k}, t={t}")]
    InvalidShape { k: u32, t: u64 },
    #[error("bound requires k > b and a >= b + 1, got k={k}, a={a}, b={b}")]
    BoundPrecondition { k: u32, a: u32, b: u32 },
    #[error("no alive box remains; BoxMaker has lost")]
    NoAliveBoxes,
    #[error("exact solve refused: total size {total} exceeds budget {budget}")]
    BudgetExceeded { total: u64, budget: u64 },
}

/// Parameters of a Box Game instance.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct BoxConfig {
    pub box_count: u32,
    pub total: u64,
    pub maker_bias: u32,
    pub breaker_bias: u32,
}

impl BoxConfig {
    pub fn initial_state(&self) -> Result<BoxState, BoxGameError> {
        let sizes = canonical_sizes(self.box_count, self.total)?;
        Ok(BoxState::from_sizes(&sizes))
    }
}

/// One box: how many of its elements are still unclaimed, and whether
/// BoxBreaker has touched it.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct BoxSlot {
    pub free: u64,
    pub alive: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxState {
    pub boxes: Vec<BoxSlot>,
    pub turn: BoxPlayer,
    pub picks_left: u32,
}

impl BoxState {
    pub fn from_sizes(sizes: &[u64]) -> Self {
        BoxState {
            boxes: sizes.iter().map(|&s| BoxSlot { free: s, alive: true }).collect(),
            turn: BoxPlayer::BoxMaker,
            picks_left: 0,
        }
    }

    pub fn alive_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.boxes
            .iter()
            .enumerate()
            .filter(|(_, b)| b.alive)
            .map(|(i, _)| i)
    }

    pub fn alive_count(&self) -> usize {
        self.boxes.iter().filter(|b| b.alive).count()
    }

    /// BoxMaker has won iff some untouched box is fully claimed by him.
    pub fn boxmaker_won(&self) -> bool {
        self.boxes.iter().any(|b| b.alive && b.free == 0)
    }

    /// Max - min over alive free counts is at most 1.
    pub fn alive_canonical(&self) -> bool {
        let mut lo = u64::MAX;
        let mut hi = 0u64;
        for b in self.boxes.iter().filter(|b| b.alive) {
            lo = lo.min(b.free);
            hi = hi.max(b.free);
        }
        lo == u64::MAX || hi - lo <= 1
    }
}

/// Sorted canonical box sizes for a type-(k, t) hypergraph: `t mod k` boxes of
/// size `ceil(t/k)` and the rest of size `floor(t/k)`.
pub fn canonical_sizes(k: u32, t: u64) -> Result<Vec<u64>, BoxGameError> {
    if k < 1 || t < k as u64 {
        return Err(BoxGameError::InvalidShape { k, t });
    }
    let base = t / k as u64;
    let bigger = (t % k as u64) as u32;
    let mut sizes = vec![base; k as usize];
    for s in sizes.iter_mut().skip((k - bigger) as usize) {
        *s += 1;
    }
    Ok(sizes)
}

/// The potential `f(k; a, b)`:
///
/// ```text
/// f(k; a, b) = (k-1)(a+1)                              if 1 <= k <= b
///            = k a                                     if b < k <= 2b
///            = floor(k (f(k-b; a, b) + a - b) / (k-b)) otherwise
/// ```
///
/// Exact integer arithmetic throughout; values are memoized. With `u32`
/// arguments the result fits comfortably in `i128`.
pub fn potential_f(k: u32, maker_bias: u32, breaker_bias: u32) -> i128 {
    assert!(k >= 1 && maker_bias >= 1 && breaker_bias >= 1);
    type Memo = Mutex<HashMap<(u32, u32, u32), i128>>;
    static MEMO: OnceLock<Memo> = OnceLock::new();
    let memo = MEMO.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(&v) = memo.lock().unwrap().get(&(k, maker_bias, breaker_bias)) {
        return v;
    }
    let a = maker_bias as i128;
    let b = breaker_bias;
    let value = if k <= b {
        (k as i128 - 1) * (a + 1)
    } else {
        // walk the recursion chain bottom-up; it always lands in (b, 2b]
        let steps = (k - b - 1) / b; // number of subtractions of b until k' <= 2b
        let base_k = k - steps * b;
        debug_assert!(base_k > b && base_k <= 2 * b);
        let mut f = base_k as i128 * a;
        let mut cur_k = base_k;
        while cur_k < k {
            let next_k = cur_k + b;
            f = (next_k as i128 * (f + a - b as i128)).div_euclid(cur_k as i128);
            cur_k = next_k;
        }
        f
    };
    memo.lock().unwrap().insert((k, maker_bias, breaker_bias), value);
    value
}

/// Exact value of `ka - 1 + (k(a-b-1)/b) * Σ_{j=2}^{ceil(k/b)-1} 1/j`, a lower
/// bound on [`potential_f`] valid for `k > b` and `a >= b + 1`.
pub fn lemma1_lower_bound(k: u32, a: u32, b: u32) -> Result<BigRational, BoxGameError> {
    if k <= b || a < b + 1 {
        return Err(BoxGameError::BoundPrecondition { k, a, b });
    }
    let upper = (k as u64).div_ceil(b as u64) - 1;
    let (num, den) = range_sum_raw(2, upper); // empty when upper < 2
    let sum = BigRational::new(num, den);
    let factor = BigRational::new(
        BigInt::from(k as u64) * BigInt::from((a - b - 1) as u64),
        BigInt::from(b as u64),
    );
    let head = BigRational::from_integer(BigInt::from(k as i64 * a as i64 - 1));
    Ok(head + factor * sum)
}

/// Sufficient condition for a BoxMaker win: `t <= f(k; a, b) + a`.
pub fn boxmaker_wins_sufficient(cfg: &BoxConfig) -> bool {
    let f = potential_f(cfg.box_count, cfg.maker_bias, cfg.breaker_bias);
    (cfg.total as i128) <= f + cfg.maker_bias as i128
}

/// Scripted BoxMaker move: the list of box indices to decrement, one entry
/// per claimed element.
///
/// If some alive box fits inside this move's budget it is claimed entirely
/// (smallest first, lowest index on ties) and the remaining picks balance.
/// Otherwise every pick goes to a currently largest alive box (lowest index
/// on ties), which keeps alive free counts canonical when they were.
pub fn boxmaker_move(state: &BoxState, maker_bias: u32) -> Result<Vec<usize>, BoxGameError> {
    if state.alive_count() == 0 {
        return Err(BoxGameError::NoAliveBoxes);
    }
    let mut free: Vec<(usize, u64)> = state
        .alive_indices()
        .map(|i| (i, state.boxes[i].free))
        .collect();
    let mut claims = Vec::with_capacity(maker_bias as usize);
    let mut picks = maker_bias as u64;

    // complete the cheapest box that fits in this move
    if let Some(pos) = free
        .iter()
        .enumerate()
        .filter(|(_, &(_, f))| f <= picks)
        .min_by_key(|(_, &(i, f))| (f, i))
        .map(|(pos, _)| pos)
    {
        let (idx, f) = free[pos];
        claims.extend(std::iter::repeat_n(idx, f as usize));
        picks -= f;
        free[pos].1 = 0;
    }

    while picks > 0 {
        let Some(pos) = free
            .iter()
            .enumerate()
            .filter(|(_, &(_, f))| f > 0)
            .max_by(|(_, &(i1, f1)), (_, &(i2, f2))| f1.cmp(&f2).then(i2.cmp(&i1)))
            .map(|(pos, _)| pos)
        else {
            break; // alive boxes exhausted mid-move
        };
        claims.push(free[pos].0);
        free[pos].1 -= 1;
        picks -= 1;
    }
    Ok(claims)
}

/// Applies a BoxMaker claim list to `state`.
pub fn apply_boxmaker_claims(state: &mut BoxState, claims: &[usize]) {
    for &i in claims {
        debug_assert!(state.boxes[i].alive && state.boxes[i].free > 0);
        state.boxes[i].free -= 1;
    }
}

/// Marks every box BoxBreaker touched as dead. All untouched boxes survive;
/// dropping down to a smaller family is never necessary.
pub fn prune_after_boxbreaker(state: &mut BoxState, touched: &[usize]) {
    for &i in touched {
        state.boxes[i].alive = false;
    }
}

/// Applies a BoxBreaker move: one claimed element in each touched box.
pub fn apply_boxbreaker_touch(state: &mut BoxState, touched: &[usize]) {
    for &i in touched {
        state.boxes[i].free = state.boxes[i].free.saturating_sub(1);
    }
    prune_after_boxbreaker(state, touched);
}

/// Result of a played-out box game.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct BoxOutcome {
    pub winner: BoxPlayer,
    /// Moves made by both players together.
    pub moves: u32,
}

/// Plays the scripted BoxMaker against a greedy BoxBreaker who always kills
/// the smallest alive boxes (the most completion-threatening ones).
/// BoxBreaker wins exactly when every box ends up dead.
pub fn play_scripted_box_game(sizes: &[u64], maker_bias: u32, breaker_bias: u32) -> BoxOutcome {
    let mut state = BoxState::from_sizes(sizes);
    let mut moves = 0u32;
    loop {
        match boxmaker_move(&state, maker_bias) {
            Ok(claims) => {
                apply_boxmaker_claims(&mut state, &claims);
                moves += 1;
                if state.boxmaker_won() {
                    return BoxOutcome { winner: BoxPlayer::BoxMaker, moves };
                }
            }
            Err(_) => return BoxOutcome { winner: BoxPlayer::BoxBreaker, moves },
        }
        let mut targets: Vec<usize> = state.alive_indices().collect();
        targets.sort_by_key(|&i| (state.boxes[i].free, i));
        targets.truncate(breaker_bias as usize);
        apply_boxbreaker_touch(&mut state, &targets);
        moves += 1;
        if state.alive_count() == 0 {
            return BoxOutcome { winner: BoxPlayer::BoxBreaker, moves };
        }
    }
}

const DEFAULT_SOLVE_BUDGET: u64 = 24;

/// Exact minimax winner with BoxMaker moving first.
///
/// State is the multiset of alive free counts: dead boxes are strategically
/// inert and dropped, and BoxBreaker replies are the subsets of alive boxes he
/// touches. Letting him touch fewer than `b` boxes (dumping spare picks into
/// dead boxes) is allowed; touching more is never worse for him, so the value
/// is unchanged. Refuses boards with more than `budget` total elements.
pub fn solve_boxgame_exact(
    sizes: &[u64],
    maker_bias: u32,
    breaker_bias: u32,
    budget: Option<u64>,
) -> Result<BoxPlayer, BoxGameError> {
    let budget = budget.unwrap_or(DEFAULT_SOLVE_BUDGET);
    let total: u64 = sizes.iter().sum();
    if total > budget {
        return Err(BoxGameError::BudgetExceeded { total, budget });
    }
    if sizes.is_empty() {
        return Ok(BoxPlayer::BoxBreaker);
    }
    let mut alive: Vec<u64> = sizes.to_vec();
    alive.sort_unstable();
    let mut memo = HashMap::new();
    Ok(minimax(&alive, BoxPlayer::BoxMaker, maker_bias, breaker_bias, &mut memo))
}

fn minimax(
    alive: &[u64],
    turn: BoxPlayer,
    a: u32,
    b: u32,
    memo: &mut HashMap<(Vec<u64>, BoxPlayer), BoxPlayer>,
) -> BoxPlayer {
    if alive.is_empty() {
        return BoxPlayer::BoxBreaker;
    }
    let key = (alive.to_vec(), turn);
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let result = match turn {
        BoxPlayer::BoxMaker => {
            let total: u64 = alive.iter().sum();
            let picks = (a as u64).min(total);
            if alive[0] <= picks {
                BoxPlayer::BoxMaker // complete the smallest box outright
            } else {
                let mut won = false;
                for child in decrement_multisets(alive, picks) {
                    if minimax(&child, BoxPlayer::BoxBreaker, a, b, memo) == BoxPlayer::BoxMaker {
                        won = true;
                        break;
                    }
                }
                if won { BoxPlayer::BoxMaker } else { BoxPlayer::BoxBreaker }
            }
        }
        BoxPlayer::BoxBreaker => {
            let max_kills = (b as usize).min(alive.len());
            if max_kills == alive.len() {
                BoxPlayer::BoxBreaker // kill everything
            } else {
                let mut breaker_wins = false;
                for child in kill_subsets(alive, max_kills) {
                    if minimax(&child, BoxPlayer::BoxMaker, a, b, memo) == BoxPlayer::BoxBreaker {
                        breaker_wins = true;
                        break;
                    }
                }
                if breaker_wins { BoxPlayer::BoxBreaker } else { BoxPlayer::BoxMaker }
            }
        }
    };
    memo.insert(key, result);
    result
}

/// All distinct sorted states after removing `picks` elements from `alive`
/// (each pick decrements one box; boxes never go below zero here because the
/// caller only recurses when no box can be emptied).
fn decrement_multisets(alive: &[u64], picks: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut scratch = alive.to_vec();
    fn rec(scratch: &mut Vec<u64>, from: usize, picks: u64, out: &mut Vec<Vec<u64>>) {
        if picks == 0 {
            let mut s = scratch.clone();
            s.sort_unstable();
            out.push(s);
            return;
        }
        for i in from..scratch.len() {
            if scratch[i] > 1 {
                // keep at least 1: emptying a box is handled as an instant win
                let take = scratch[i] - 1;
                let take = take.min(picks);
                for d in 1..=take {
                    scratch[i] -= d;
                    rec(scratch, i + 1, picks - d, out);
                    scratch[i] += d;
                }
            }
        }
    }
    rec(&mut scratch, 0, picks, &mut out);
    out.sort_unstable();
    out.dedup();
    out
}

/// All sorted states after BoxBreaker kills a subset of up to `max_kills`
/// alive boxes (including killing none, which models dumped picks).
fn kill_subsets(alive: &[u64], max_kills: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let n = alive.len();
    for mask in 0u32..(1 << n) {
        if (mask.count_ones() as usize) <= max_kills {
            let child: Vec<u64> = (0..n)
                .filter(|&i| mask & (1 << i) == 0)
                .map(|i| alive[i])
                .collect();
            out.push(child);
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Plays the scripted BoxMaker against every BoxBreaker reply and reports
/// whether the script wins in all lines. Memoized on the multiset of alive
/// free counts.
pub fn scripted_boxmaker_beats_all(sizes: &[u64], maker_bias: u32, breaker_bias: u32) -> bool {
    let mut alive: Vec<u64> = sizes.to_vec();
    alive.sort_unstable();
    let mut memo = HashMap::new();
    scripted_walk(&alive, maker_bias, breaker_bias, &mut memo)
}

fn scripted_walk(
    alive: &[u64],
    a: u32,
    b: u32,
    memo: &mut HashMap<Vec<u64>, bool>,
) -> bool {
    if alive.is_empty() {
        return false;
    }
    if let Some(&v) = memo.get(&(alive.to_vec())) {
        return v;
    }
    // scripted BoxMaker move on a synthetic state with these alive counts
    let state = BoxState {
        boxes: alive.iter().map(|&f| BoxSlot { free: f, alive: true }).collect(),
        turn: BoxPlayer::BoxMaker,
        picks_left: a,
    };
    let claims = boxmaker_move(&state, a).expect("alive boxes exist");
    let mut counts = alive.to_vec();
    for &i in &claims {
        counts[i] -= 1;
    }
    let result = if counts.contains(&0) {
        true // a box was completed
    } else {
        counts.sort_unstable();
        let max_kills = (b as usize).min(counts.len());
        kill_subsets(&counts, max_kills)
            .into_iter()
            .all(|child| scripted_walk(&child, a, b, memo))
    };
    memo.insert(alive.to_vec(), result);
    result
}
