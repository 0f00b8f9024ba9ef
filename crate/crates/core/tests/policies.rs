//! Cross-policy integration: every pairing runs, records replay cleanly, and
//! scripted strategies hold up at certified desk-scale parameters.

use conngame::breaker::thm1_condition_exact;
use conngame::matchplay::play_match_by_ids;
use conngame::policy::{make_policy, policy_side, POLICY_IDS};
use conngame::solver::{best_response, enumerate_threshold, solve_exact, SolverLimits};
use conngame::{GameConfig, OutcomeCause, Player, WinCondition};

#[test]
fn every_pairing_completes_and_replays() {
    let makers: Vec<&str> = POLICY_IDS
        .iter()
        .copied()
        .filter(|id| policy_side(id) == Some(Player::Maker))
        .collect();
    let breakers: Vec<&str> = POLICY_IDS
        .iter()
        .copied()
        .filter(|id| policy_side(id) == Some(Player::Breaker))
        .collect();
    for wc in [WinCondition::Connectivity, WinCondition::PositiveMinDegree] {
        let cfg = GameConfig::new(8, 2, 3, wc).unwrap();
        for maker in &makers {
            for breaker in &breakers {
                let rec = play_match_by_ids(&cfg, breaker, maker, 11).unwrap();
                assert!(rec.replays_cleanly(), "{breaker} vs {maker} ({wc:?})");
                let again = play_match_by_ids(&cfg, breaker, maker, 11).unwrap();
                assert_eq!(rec, again, "{breaker} vs {maker} nondeterministic");
            }
        }
    }
}

#[test]
fn clique_breaker_wins_at_certified_cell() {
    // frozen from the exact certificate: (n=50, a=1) certifies from b=18
    assert!(thm1_condition_exact(50, 1, 18).unwrap());
    let cfg = GameConfig::new(50, 1, 18, WinCondition::Connectivity).unwrap();
    for maker in ["maker.thm4", "maker.random", "maker.greedy-connect"] {
        for seed in 0..10 {
            let rec = play_match_by_ids(&cfg, "breaker.thm1", maker, seed).unwrap();
            assert_eq!(rec.outcome.winner, Player::Breaker, "vs {maker} seed {seed}");
            assert_ne!(rec.outcome.cause, OutcomeCause::Forfeit);
        }
    }
}

#[test]
fn fixed_scripted_maker_beats_optimal_breaker_on_k4() {
    // regression fixture: the scripted maker wins every line of K_4 (1:1)
    let cfg = GameConfig::new(4, 1, 1, WinCondition::Connectivity).unwrap();
    let policy = make_policy("maker.thm4").unwrap();
    let res = best_response(&cfg, policy.as_ref(), Player::Maker, 0, &SolverLimits::default())
        .unwrap();
    assert_eq!(res.winner, Player::Maker);
}

#[test]
fn fixed_thm3_survives_board_grab_variant() {
    // b large enough to take the whole board in one move
    let cfg = GameConfig::new(4, 1, 6, WinCondition::Connectivity).unwrap();
    let policy = make_policy("breaker.thm3").unwrap();
    let res = best_response(&cfg, policy.as_ref(), Player::Breaker, 0, &SolverLimits::default())
        .unwrap();
    assert_eq!(res.winner, Player::Breaker);
}

#[test]
fn connectivity_win_dominates_positive_min_degree() {
    let limits = SolverLimits::default();
    for n in [4u32, 5] {
        for a in 1..=3 {
            for b in 1..=3 {
                let conn = GameConfig::new(n, a, b, WinCondition::Connectivity).unwrap();
                let pmd = GameConfig::new(n, a, b, WinCondition::PositiveMinDegree).unwrap();
                let cw = solve_exact(&conn, &limits).unwrap().winner;
                let pw = solve_exact(&pmd, &limits).unwrap().winner;
                if cw == Player::Maker {
                    assert_eq!(pw, Player::Maker, "dominance fails at n={n} ({a}:{b})");
                }
            }
        }
    }
}

#[test]
fn matching_isolate_beats_all_lines_up_to_k6() {
    // exhaustive over maker replies: b >= n-2 and 2a < n
    let limits = SolverLimits { allow_n6: true, ..SolverLimits::default() };
    for n in 3..=6u32 {
        for a in 1..=(n - 1) / 2 {
            if 2 * a >= n {
                continue;
            }
            for b in [n - 2, n - 1] {
                if b < 1 {
                    continue;
                }
                let cfg = GameConfig::new(n, a, b, WinCondition::Connectivity).unwrap();
                let policy = make_policy("breaker.thm3").unwrap();
                let res =
                    best_response(&cfg, policy.as_ref(), Player::Breaker, 0, &limits).unwrap();
                assert_eq!(res.winner, Player::Breaker, "lost a line at ({n},{a},{b})");
            }
        }
    }
}

#[test]
fn thm3_certified_cells_sweep_clean_on_k5() {
    // everywhere the matching-isolate hypothesis holds on K_5, the scripted
    // breaker wins every seeded match against every maker policy
    for a in 1..=2u32 {
        for b in 3..=6u32 {
            assert!(conngame::breaker::thm3_condition(5, a as u64, b as u64));
            let cfg = GameConfig::new(5, a, b, WinCondition::Connectivity).unwrap();
            for maker in ["maker.thm4", "maker.random", "maker.greedy-connect"] {
                for seed in 0..15 {
                    let rec = play_match_by_ids(&cfg, "breaker.thm3", maker, seed).unwrap();
                    assert_eq!(
                        rec.outcome.winner,
                        Player::Breaker,
                        "({a}:{b}) vs {maker} seed {seed}"
                    );
                    assert!(rec.rounds_played <= 2, "win took {} rounds", rec.rounds_played);
                }
            }
        }
    }
}

#[test]
fn scripted_maker_finishes_within_the_step_budget() {
    // a spanning tree takes n-1 steps, so at most ceil((n-1)/a) rounds
    for (n, a, b) in [(30u32, 3u32, 2u32), (24, 1, 1), (40, 5, 4)] {
        let cfg = GameConfig::new(n, a, b, WinCondition::Connectivity).unwrap();
        for seed in 0..5 {
            let rec = play_match_by_ids(&cfg, "breaker.random", "maker.thm4", seed).unwrap();
            if rec.outcome.winner == Player::Maker {
                assert!(
                    rec.rounds_played <= (n - 1).div_ceil(a),
                    "({n},{a},{b}) seed {seed}: {} rounds",
                    rec.rounds_played
                );
            }
        }
    }
}

#[test]
fn scripted_maker_winrate_declines_with_bias() {
    // fixed seeds, coarse grid: win rate against the isolating heuristic is
    // nonincreasing in b up to noise
    let mut rates = Vec::new();
    for b in [10u32, 30, 60] {
        let cfg = GameConfig::new(200, 1, b, WinCondition::Connectivity).unwrap();
        let wins = (0..20u64)
            .filter(|&seed| {
                play_match_by_ids(&cfg, "breaker.greedy-isolate", "maker.thm4", seed)
                    .unwrap()
                    .outcome
                    .winner
                    == Player::Maker
            })
            .count();
        rates.push(wins as f64 / 20.0);
    }
    assert!(rates[0] + 0.15 >= rates[1], "{rates:?}");
    assert!(rates[1] + 0.15 >= rates[2], "{rates:?}");
}

#[test]
fn threshold_scan_k5() {
    let limits = SolverLimits::default();
    let t = enumerate_threshold(5, 1, WinCondition::Connectivity, &limits).unwrap();
    assert_eq!(t.b0, 1);
    let t = enumerate_threshold(5, 2, WinCondition::Connectivity, &limits).unwrap();
    assert_eq!(t.b0, 2);
    let t = enumerate_threshold(5, 4, WinCondition::Connectivity, &limits).unwrap();
    assert_eq!(t.b0, 3);
}
