//! Threshold-bias bound bands, random-play estimation, and grid sweeps.
//!
//! The bound bands evaluate asymptotic formulas at concrete `n` with every
//! `o(1)` term dropped; each band records which sides were approximated that
//! way. The regime classifier needs concrete cutoffs for the asymptotic
//! regime descriptions; the defaults are documented on [`RegimeCutoffs`] and
//! configurable.

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::Serialize;

use crate::breaker::{thm1_condition_exact, thm2_exact_f_test, thm3_condition};
use crate::edge::{edge_count, edge_endpoints, EdgeId};
use crate::game::{GameConfig, Player, WinCondition};
use crate::maker::thm4_condition;
use crate::matchplay::play_match;
use crate::policy::make_policy;
use crate::seeding::{derive_seed, rng_from, salt_of};
use crate::solver::{solve_exact, SolverLimits};
use crate::unionfind::UnionFind;

// ---------------------------------------------------------------------------
// threshold-bias bands

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Regime {
    I,
    II,
    III,
    IV,
    V,
    VI,
    VII,
}

impl Regime {
    pub fn label(self) -> &'static str {
        match self {
            Regime::I => "i",
            Regime::II => "ii",
            Regime::III => "iii",
            Regime::IV => "iv",
            Regime::V => "v",
            Regime::VI => "vi",
            Regime::VII => "vii",
        }
    }
}

/// Concrete cutoffs rendering the asymptotic regime descriptions at finite
/// `n`:
///
/// * regime i while `a <= ln n / ln ln n`;
/// * regimes ii/iii (via `c = a / ln n`) while `a <= ln^2 n`;
/// * regime iv up to `sqrt(n / ln n)`;
/// * regime v up to `n / ln n`;
/// * regimes vi/vii (via `c = a / n`) beyond, split at `c = 1/(2e)`.
#[derive(Copy, Clone, Debug)]
pub struct RegimeCutoffs {
    pub small_over_loglog: bool,
    pub clog_band_limit_is_ln_squared: bool,
}

impl Default for RegimeCutoffs {
    fn default() -> Self {
        RegimeCutoffs { small_over_loglog: true, clog_band_limit_is_ln_squared: true }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundBand {
    pub regime: Regime,
    pub n: u64,
    pub a: u64,
    pub lower: f64,
    pub upper: f64,
    /// Which sides of the band had `o(1)` factors dropped.
    pub dropped_o1: &'static [&'static str],
    /// Set when the evaluated band is degenerate at this `n` (asymptotics,
    /// not a bug).
    pub warning: Option<String>,
}

fn classify(n: u64, a: u64, cutoffs: &RegimeCutoffs) -> Regime {
    let nf = n as f64;
    let af = a as f64;
    let ln_n = nf.ln();
    let ln_ln_n = ln_n.ln();
    let _ = cutoffs;
    if af <= ln_n / ln_ln_n {
        Regime::I
    } else if af <= ln_n * ln_n {
        if af <= ln_n {
            Regime::II
        } else {
            Regime::III
        }
    } else if af <= (nf / ln_n).sqrt() {
        Regime::IV
    } else if af <= nf / ln_n {
        Regime::V
    } else if af < nf / (2.0 * std::f64::consts::E) {
        Regime::VI
    } else {
        Regime::VII
    }
}

/// Bound band for the threshold bias at `(n, a)`, with `o(1)` terms dropped.
/// For `a >= n/2` the lower bound of regime vii applies by monotonicity and
/// the upper bound is the trivial `n - 1`.
pub fn corollary_bounds(n: u64, a: u64, cutoffs: &RegimeCutoffs) -> BoundBand {
    assert!(n >= 3 && a >= 1);
    let nf = n as f64;
    let af = a as f64;
    let ln_n = nf.ln();
    let ln_ln_n = ln_n.ln();

    if 2 * a >= n {
        let c = 0.5_f64;
        let lower = nf - (2.0 * (1.0 / c).ln() + 4.0) / c;
        return finish(BoundBand {
            regime: Regime::VII,
            n,
            a,
            lower,
            upper: nf - 1.0,
            dropped_o1: &[],
            warning: Some("a >= n/2: lower bound by monotonicity, trivial upper".into()),
        });
    }

    let regime = classify(n, a, cutoffs);
    let (lower, upper, dropped): (f64, f64, &'static [&'static str]) = match regime {
        Regime::I => (
            af * nf / ln_n - af * nf * (ln_ln_n + af) / (ln_n * ln_n),
            af * nf / ln_n - af * nf * af.ln() / (ln_n * ln_n),
            &["lower", "upper"],
        ),
        Regime::II => {
            let c = af / ln_n;
            (
                c * nf / (c + 1.0),
                (c * nf).min(2.0 * nf / 3.0),
                &["lower", "upper"],
            )
        }
        Regime::III => {
            let c = af / ln_n;
            (c * nf / (c + 1.0), 2.0 * c * nf / (2.0 * c + 1.0), &["lower", "upper"])
        }
        Regime::IV => (
            nf - nf * ln_n / af,
            nf - nf * (nf / af).ln() / (2.0 * af),
            &["upper"],
        ),
        Regime::V => (
            nf - 2.0 * nf * (nf / af).ln() / af,
            nf - nf * (nf / af).ln() / (2.0 * af),
            &["lower", "upper"],
        ),
        Regime::VI => {
            let c = af / nf;
            (
                nf - (2.0 * (1.0 / c).ln() + 4.0) / c,
                nf - 2.0 - (1.0 - 2.0 * c) / (2.0 * c) * ((1.0 / (2.0 * c)).ln() - 1.0),
                &["upper"],
            )
        }
        Regime::VII => {
            let c = af / nf;
            (nf - (2.0 * (1.0 / c).ln() + 4.0) / c, nf - 2.0, &[])
        }
    };
    finish(BoundBand { regime, n, a, lower, upper, dropped_o1: dropped, warning: None })
}

fn finish(mut band: BoundBand) -> BoundBand {
    if band.lower >= band.upper && band.warning.is_none() {
        band.warning = Some(format!(
            "band degenerate at n={}: lower {} >= upper {}",
            band.n, band.lower, band.upper
        ));
    }
    band
}

// ---------------------------------------------------------------------------
// random connectivity game

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RandomGameEstimate {
    pub n: u32,
    pub maker_bias: u32,
    pub breaker_bias: u32,
    pub trials: u32,
    pub maker_wins: u32,
    pub frequency: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
    /// Edges Maker ends up with under the claim schedule.
    pub maker_edges: u32,
}

/// 95% Wilson score interval for `wins` out of `trials`.
pub fn wilson_interval(wins: u32, trials: u32) -> (f64, f64) {
    assert!(trials > 0);
    let z = 1.959_963_984_540_054_f64;
    let n = trials as f64;
    let p = wins as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = p + z2 / (2.0 * n);
    let spread = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    (
        ((center - spread) / denom).max(0.0),
        ((center + spread) / denom).min(1.0),
    )
}

/// Number of edges Maker owns when both sides claim blindly to exhaustion
/// under the `(a:b)` schedule with Breaker first.
pub fn random_maker_edge_count(n: u32, a: u32, b: u32) -> u32 {
    let edges = edge_count(n);
    let per_round = (a + b) as u64;
    let full_rounds = edges as u64 / per_round;
    let mut maker = full_rounds * a as u64;
    let leftover = edges as u64 - full_rounds * per_round;
    maker += leftover.saturating_sub(b as u64); // breaker claims first
    maker as u32
}

/// Monte Carlo estimate of RandomMaker's win frequency.
///
/// Uniformly random play by both sides to exhaustion makes the claim sequence
/// a uniform permutation of the edges, so each trial shuffles the edge list,
/// assigns edges to players by the bias schedule, and scores connectivity of
/// Maker's subgraph.
pub fn random_game(n: u32, a: u32, b: u32, trials: u32, seed: u64) -> RandomGameEstimate {
    assert!(trials >= 1);
    let edges = edge_count(n);
    let mut wins = 0u32;
    let mut order: Vec<u32> = (0..edges).collect();
    for trial in 0..trials {
        let mut rng = rng_from(
            seed,
            &[salt_of("random-game"), n as u64, a as u64, b as u64, trial as u64],
        );
        order.shuffle(&mut rng);
        let mut uf = UnionFind::new(n);
        let mut pos = 0usize;
        while pos < edges as usize {
            // breaker's block, then maker's
            pos += (b as usize).min(edges as usize - pos);
            let take = (a as usize).min(edges as usize - pos);
            for &e in &order[pos..pos + take] {
                let (u, v) = edge_endpoints(EdgeId(e), n).expect("in range");
                uf.union(u, v);
            }
            pos += take;
        }
        if uf.component_count() == 1 {
            wins += 1;
        }
    }
    let (lo, hi) = wilson_interval(wins, trials);
    RandomGameEstimate {
        n,
        maker_bias: a,
        breaker_bias: b,
        trials,
        maker_wins: wins,
        frequency: wins as f64 / trials as f64,
        wilson_low: lo,
        wilson_high: hi,
        maker_edges: random_maker_edge_count(n, a, b),
    }
}

// ---------------------------------------------------------------------------
// sweeps

#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub n: u32,
    pub a_values: Vec<u32>,
    pub b_values: Vec<u32>,
    pub maker_policies: Vec<String>,
    pub breaker_policies: Vec<String>,
    pub trials: u32,
    pub seed: u64,
    pub win_condition: WinCondition,
    /// Worker cap for cell evaluation; `None` uses all cores.
    pub jobs: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub n: u32,
    pub a: u32,
    pub b: u32,
    pub regime: &'static str,
    pub lower: f64,
    pub upper: f64,
    pub cert_thm1: bool,
    pub cert_thm2: bool,
    pub cert_thm3: bool,
    pub cert_thm4: bool,
    pub oracle_winner: Option<Player>,
    /// Maker win rates per pairing, ordered as in [`SweepTable::pairings`].
    pub winrates: Vec<f64>,
    pub flags: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct SweepTable {
    pub pairings: Vec<(String, String)>,
    pub rows: Vec<SweepRow>,
}

pub const SWEEP_SCHEMA: &str = "conngame-sweep-1";

impl SweepTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("#schema={SWEEP_SCHEMA}\n"));
        out.push_str("n,a,b,regime,lower,upper,cert_thm1,cert_thm2,cert_thm3,cert_thm4,oracle_winner");
        for (m, b) in &self.pairings {
            out.push_str(&format!(",sim_{m}_vs_{b}_maker_winrate"));
        }
        out.push_str(",flags\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{}",
                row.n,
                row.a,
                row.b,
                row.regime,
                row.lower,
                row.upper,
                row.cert_thm1,
                row.cert_thm2,
                row.cert_thm3,
                row.cert_thm4,
                row.oracle_winner
                    .map(|w| format!("{w:?}"))
                    .unwrap_or_default(),
            ));
            for w in &row.winrates {
                out.push_str(&format!(",{w:.4}"));
            }
            out.push(',');
            out.push_str(&row.flags.join(";"));
            out.push('\n');
        }
        out
    }
}

fn sweep_cell(spec: &SweepSpec, a: u32, b: u32) -> SweepRow {
    let mut flags = Vec::new();
    let band = corollary_bounds(spec.n as u64, a as u64, &RegimeCutoffs::default());
    if let Some(w) = &band.warning {
        flags.push(format!("band:{w}"));
    }

    let cert_thm1 = match thm1_condition_exact(spec.n as u64, a as u64, b as u64) {
        Ok(v) => v,
        Err(e) => {
            flags.push(format!("thm1:{e}"));
            false
        }
    };
    let cert_thm2 = thm2_exact_f_test(spec.n as u64, a as u64, b as u64);
    let cert_thm3 = thm3_condition(spec.n as u64, a as u64, b as u64);
    let cert_thm4 = match thm4_condition(spec.n as u64, a as u64, b as u64) {
        Ok(v) => v.holds,
        Err(e) => {
            flags.push(format!("thm4:{e}"));
            false
        }
    };
    if (cert_thm1 || cert_thm2 || cert_thm3) && cert_thm4 {
        flags.push("cert-conflict:breaker-and-maker-certificates-both-true".into());
    }

    let oracle_winner = if spec.n <= 5 {
        let cfg = GameConfig::new(spec.n, a, b, spec.win_condition).expect("valid");
        match solve_exact(&cfg, &SolverLimits::default()) {
            Ok(r) => Some(r.winner),
            Err(e) => {
                flags.push(format!("oracle:{e}"));
                None
            }
        }
    } else {
        None
    };

    let cfg = GameConfig::new(spec.n, a, b, spec.win_condition).expect("valid");
    let mut winrates = Vec::new();
    for maker_id in &spec.maker_policies {
        for breaker_id in &spec.breaker_policies {
            let mut maker_wins = 0u32;
            let mut errors = 0u32;
            for trial in 0..spec.trials {
                let seed = derive_seed(
                    spec.seed,
                    &[
                        spec.n as u64,
                        a as u64,
                        b as u64,
                        salt_of(maker_id),
                        salt_of(breaker_id),
                        trial as u64,
                    ],
                );
                match (make_policy(breaker_id), make_policy(maker_id)) {
                    (Some(mut bp), Some(mut mp)) => {
                        let rec = play_match(&cfg, bp.as_mut(), mp.as_mut(), seed);
                        if rec.outcome.winner == Player::Maker {
                            maker_wins += 1;
                        }
                    }
                    _ => errors += 1,
                }
            }
            if errors > 0 {
                flags.push(format!("sim:{maker_id}_vs_{breaker_id}:unknown-policy"));
            }
            winrates.push(if spec.trials > 0 {
                maker_wins as f64 / spec.trials as f64
            } else {
                f64::NAN
            });
        }
    }

    SweepRow {
        n: spec.n,
        a,
        b,
        regime: band.regime.label(),
        lower: band.lower,
        upper: band.upper,
        cert_thm1,
        cert_thm2,
        cert_thm3,
        cert_thm4,
        oracle_winner,
        winrates,
        flags,
    }
}

/// Evaluates every `(a, b)` cell: certificates, bound band, oracle winner at
/// `n <= 5`, and seeded match win rates for every policy pairing. Cells run
/// in parallel; output order and RNG streams are schedule-independent.
pub fn sweep(spec: &SweepSpec) -> SweepTable {
    let pairings: Vec<(String, String)> = spec
        .maker_policies
        .iter()
        .flat_map(|m| spec.breaker_policies.iter().map(move |b| (m.clone(), b.clone())))
        .collect();
    let mut cells: Vec<(u32, u32)> = Vec::new();
    for &a in &spec.a_values {
        for &b in &spec.b_values {
            cells.push((a, b));
        }
    }
    let run = |cells: &[(u32, u32)]| -> Vec<SweepRow> {
        cells.par_iter().map(|&(a, b)| sweep_cell(spec, a, b)).collect()
    };
    let mut rows = match spec.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .expect("thread pool")
            .install(|| run(&cells)),
        None => run(&cells),
    };
    rows.sort_by_key(|r| (r.a, r.b));
    SweepTable { pairings, rows }
}
