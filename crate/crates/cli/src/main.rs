//! Command-line front end: match play, box games, exact solving, sweeps,
//! random-play estimation, and threshold-bias bounds.
//!
//! Data goes to stdout (or `--out`), diagnostics to stderr. Exit codes:
//! 0 success, 2 usage error, 3 refused computation (budget), 1 internal
//! error. Every run with a fixed `--seed` is byte-identical.

use std::fmt::Display;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use conngame::analysis::{
    corollary_bounds, random_game, sweep, RegimeCutoffs, SweepSpec,
};
use conngame::boxgame::{
    boxmaker_wins_sufficient, canonical_sizes, potential_f, solve_boxgame_exact, BoxConfig,
    BoxGameError,
};
use conngame::policy::{make_policy, policy_side, POLICY_IDS};
use conngame::solver::{
    best_response, enumerate_threshold, solve_exact, SolverError, SolverLimits,
};
use conngame::{GameConfig, Player, WinCondition};

#[derive(Parser)]
#[command(name = "conngame", version, about = "Biased Maker-Breaker connectivity games on K_n")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
    Human,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format; defaults to json (csv for sweep).
    #[arg(long, value_enum)]
    output: Option<OutputFormat>,
    /// Write output to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Play one match between two policies.
    Play {
        #[arg(long)]
        n: u32,
        /// Maker bias.
        #[arg(long)]
        a: u32,
        /// Breaker bias.
        #[arg(long)]
        b: u32,
        #[arg(long)]
        maker: String,
        #[arg(long)]
        breaker: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Play the Positive Minimum Degree game instead of Connectivity.
        #[arg(long)]
        pmd: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Evaluate a Box Game: potential, certificate, exact winner.
    Boxgame {
        /// Box count (with --t); canonical sizes are derived.
        #[arg(long, conflicts_with = "sizes")]
        k: Option<u32>,
        /// Total element count (with --k).
        #[arg(long, conflicts_with = "sizes", requires = "k")]
        t: Option<u64>,
        /// Explicit comma-separated box sizes, e.g. 2,2,3.
        #[arg(long)]
        sizes: Option<String>,
        #[arg(long)]
        maker_bias: u32,
        #[arg(long)]
        breaker_bias: u32,
        /// Fail (exit 3) if the exact solve is over budget instead of
        /// skipping it.
        #[arg(long)]
        exact: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Solve a game exactly, or verify a scripted policy against all replies.
    Solve {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        a: u32,
        #[arg(long, default_value_t = 1)]
        b: u32,
        #[arg(long)]
        pmd: bool,
        /// Fix this policy and minimax only the other side.
        #[arg(long)]
        fixed: Option<String>,
        /// Scan for the threshold bias b0 at this (n, a) instead of solving
        /// one cell.
        #[arg(long)]
        threshold: bool,
        /// Allow n = 6 (large transposition table).
        #[arg(long)]
        allow_n6: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Certificates, bounds, oracle, and seeded matches over an (a, b) grid.
    Sweep {
        #[arg(long)]
        n: u32,
        /// Comma list or start:stop:step range (stop exclusive) of maker
        /// biases.
        #[arg(long)]
        a: String,
        /// Comma list or start:stop:step range (stop exclusive) of breaker
        /// biases.
        #[arg(long)]
        b: String,
        /// Maker policy ids, comma-separated.
        #[arg(long, default_value = "maker.thm4,maker.random")]
        makers: String,
        /// Breaker policy ids, comma-separated.
        #[arg(long, default_value = "breaker.random,breaker.greedy-isolate")]
        breakers: String,
        #[arg(long, default_value_t = 20)]
        trials: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        pmd: bool,
        /// Worker cap for sweep cells (default: CONNGAME_JOBS or all cores).
        #[arg(long)]
        jobs: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Estimate RandomMaker's win frequency in the random game.
    Random {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        a: u32,
        #[arg(long)]
        b: u32,
        #[arg(long, default_value_t = 100)]
        trials: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Threshold-bias bound band at (n, a).
    Bounds {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        a: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

enum CliError {
    Usage(String),
    Refused(String),
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Refused(_) => 3,
            CliError::Internal(_) => 1,
        }
    }
    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Refused(m) | CliError::Internal(m) => m,
        }
    }
}

fn usage(msg: impl Display) -> CliError {
    CliError::Usage(msg.to_string())
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::UnknownPolicy(_) => CliError::Usage(e.to_string()),
            _ => CliError::Refused(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn emit(output: &OutputArgs, default: OutputFormat, text: String) -> Result<(), CliError> {
    let _ = default;
    match &output.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Internal(format!("writing {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Internal(e.to_string()))
        }
    }
}

fn format_of(output: &OutputArgs, default: OutputFormat) -> OutputFormat {
    output.output.unwrap_or(default)
}

/// Comma list (`1,2,4`) or `start:stop:step` range with exclusive stop.
fn parse_grid(text: &str) -> Result<Vec<u32>, CliError> {
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 2 && parts.len() != 3 {
            return Err(usage(format!("malformed range {text:?}: want start:stop[:step]")));
        }
        let parse = |tok: &str| {
            tok.parse::<u32>()
                .map_err(|_| usage(format!("malformed range token {tok:?} in {text:?}")))
        };
        let start = parse(parts[0])?;
        let stop = parse(parts[1])?;
        let step = if parts.len() == 3 { parse(parts[2])? } else { 1 };
        if step == 0 {
            return Err(usage(format!("range step must be positive in {text:?}")));
        }
        Ok((start..stop).step_by(step as usize).collect())
    } else {
        text.split(',')
            .filter(|t| !t.is_empty())
            .map(|tok| {
                tok.parse::<u32>()
                    .map_err(|_| usage(format!("malformed list token {tok:?} in {text:?}")))
            })
            .collect()
    }
}

fn parse_policies(text: &str, side: Player) -> Result<Vec<String>, CliError> {
    let mut out = Vec::new();
    for tok in text.split(',').filter(|t| !t.is_empty()) {
        if make_policy(tok).is_none() {
            return Err(usage(format!(
                "unknown policy id {tok:?}; known ids: {}",
                POLICY_IDS.join(", ")
            )));
        }
        if policy_side(tok) != Some(side) {
            return Err(usage(format!("policy {tok:?} does not play {side:?}")));
        }
        out.push(tok.to_string());
    }
    if out.is_empty() {
        return Err(usage(format!("empty policy list {text:?}")));
    }
    Ok(out)
}

fn win_condition(pmd: bool) -> WinCondition {
    if pmd {
        WinCondition::PositiveMinDegree
    } else {
        WinCondition::Connectivity
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Play { n, a, b, maker, breaker, seed, pmd, output } => {
            let cfg = GameConfig::new(n, a, b, win_condition(pmd)).map_err(usage)?;
            for (id, side) in [(&maker, Player::Maker), (&breaker, Player::Breaker)] {
                if make_policy(id).is_none() {
                    return Err(usage(format!(
                        "unknown policy id {id:?}; known ids: {}",
                        POLICY_IDS.join(", ")
                    )));
                }
                if policy_side(id) != Some(side) {
                    return Err(usage(format!("policy {id:?} does not play {side:?}")));
                }
            }
            let mut bp = make_policy(&breaker).expect("validated");
            let mut mp = make_policy(&maker).expect("validated");
            let record = conngame::play_match(&cfg, bp.as_mut(), mp.as_mut(), seed);
            let text = match format_of(&output, OutputFormat::Json) {
                OutputFormat::Json => format!("{}\n", record.to_json_line()),
                OutputFormat::Human => format!(
                    "{} beats {} on K_{} ({}:{}) after {} rounds ({:?}; {} claims)\n",
                    match record.outcome.winner {
                        Player::Maker => &maker,
                        Player::Breaker => &breaker,
                    },
                    match record.outcome.winner {
                        Player::Maker => &breaker,
                        Player::Breaker => &maker,
                    },
                    n,
                    a,
                    b,
                    record.rounds_played,
                    record.outcome.cause,
                    record.history.len(),
                ),
                OutputFormat::Csv => return Err(usage("play does not produce csv")),
            };
            emit(&output, OutputFormat::Json, text)
        }

        Command::Boxgame { k, t, sizes, maker_bias, breaker_bias, exact, output } => {
            if maker_bias < 1 || breaker_bias < 1 {
                return Err(usage("biases must be at least 1"));
            }
            let sizes: Vec<u64> = match (k, t, sizes) {
                (Some(k), Some(t), None) => canonical_sizes(k, t).map_err(usage)?,
                (None, None, Some(list)) => {
                    let mut v = Vec::new();
                    for tok in list.split(',').filter(|t| !t.is_empty()) {
                        v.push(tok.parse::<u64>().map_err(|_| {
                            usage(format!("malformed size token {tok:?} in {list:?}"))
                        })?);
                    }
                    if v.is_empty() {
                        return Err(usage("empty size list"));
                    }
                    v
                }
                _ => return Err(usage("give either --k with --t, or --sizes")),
            };
            let k = sizes.len() as u32;
            let t: u64 = sizes.iter().sum();
            let canonical = sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1;
            let f = potential_f(k, maker_bias, breaker_bias);
            let cfg = BoxConfig { box_count: k, total: t, maker_bias, breaker_bias };
            let sufficient = boxmaker_wins_sufficient(&cfg);
            let exact_winner = match solve_boxgame_exact(&sizes, maker_bias, breaker_bias, None) {
                Ok(w) => Some(w),
                Err(BoxGameError::BudgetExceeded { total, budget }) if !exact => {
                    eprintln!("note: exact solve skipped ({total} elements > budget {budget})");
                    None
                }
                Err(e) => return Err(CliError::Refused(e.to_string())),
            };
            let text = match format_of(&output, OutputFormat::Json) {
                OutputFormat::Json => format!(
                    "{}\n",
                    json!({
                        "k": k,
                        "t": t,
                        "sizes": sizes,
                        "maker_bias": maker_bias,
                        "breaker_bias": breaker_bias,
                        "canonical": canonical,
                        "f": f.to_string(),
                        "sufficient": sufficient,
                        "exact_winner": exact_winner,
                    })
                ),
                OutputFormat::Csv => format!(
                    "k,t,maker_bias,breaker_bias,canonical,f,sufficient,exact_winner\n{},{},{},{},{},{},{},{}\n",
                    k,
                    t,
                    maker_bias,
                    breaker_bias,
                    canonical,
                    f,
                    sufficient,
                    exact_winner.map(|w| format!("{w:?}")).unwrap_or_default(),
                ),
                OutputFormat::Human => format!(
                    "B({k},{t},{maker_bias},{breaker_bias}): f={f}, certificate {}, exact winner {}\n",
                    if sufficient { "holds" } else { "does not hold" },
                    exact_winner.map(|w| format!("{w:?}")).unwrap_or_else(|| "skipped".into()),
                ),
            };
            emit(&output, OutputFormat::Json, text)
        }

        Command::Solve { n, a, b, pmd, fixed, threshold, allow_n6, seed, output } => {
            let wc = win_condition(pmd);
            let limits = SolverLimits { allow_n6, ..SolverLimits::default() };
            let value = if threshold {
                let t = enumerate_threshold(n, a, wc, &limits)?;
                json!({
                    "n": n, "a": a, "win_condition": wc,
                    "b0": t.b0,
                    "degenerate": t.degenerate,
                    "scanned": t.scanned.iter().map(|(b, w)| json!({"b": b, "winner": w})).collect::<Vec<_>>(),
                })
            } else if let Some(policy_id) = fixed {
                let cfg = GameConfig::new(n, a, b, wc).map_err(usage)?;
                let side = policy_side(&policy_id)
                    .ok_or_else(|| usage(format!("policy id {policy_id:?} names no side")))?;
                let policy = make_policy(&policy_id)
                    .ok_or_else(|| SolverError::UnknownPolicy(policy_id.clone()))?;
                let res = best_response(&cfg, policy.as_ref(), side, seed, &limits)?;
                json!({
                    "n": n, "a": a, "b": b, "win_condition": wc,
                    "fixed": policy_id,
                    "fixed_side": side,
                    "winner": res.winner,
                    "fixed_policy_beats_all": res.winner == side,
                    "states_visited": res.states_visited,
                })
            } else {
                let cfg = GameConfig::new(n, a, b, wc).map_err(usage)?;
                let res = solve_exact(&cfg, &limits)?;
                json!({
                    "n": n, "a": a, "b": b, "win_condition": wc,
                    "winner": res.winner,
                    "states_visited": res.states_visited,
                    "principal_variation": res.principal_variation.iter().map(|e| e.0).collect::<Vec<_>>(),
                })
            };
            let text = match format_of(&output, OutputFormat::Json) {
                OutputFormat::Json => format!("{value}\n"),
                OutputFormat::Human => format!("{value:#}\n"),
                OutputFormat::Csv => return Err(usage("solve does not produce csv")),
            };
            emit(&output, OutputFormat::Json, text)
        }

        Command::Sweep { n, a, b, makers, breakers, trials, seed, pmd, jobs, output } => {
            let spec = SweepSpec {
                n,
                a_values: parse_grid(&a)?,
                b_values: parse_grid(&b)?,
                maker_policies: parse_policies(&makers, Player::Maker)?,
                breaker_policies: parse_policies(&breakers, Player::Breaker)?,
                trials,
                seed,
                win_condition: win_condition(pmd),
                jobs: jobs.or_else(|| {
                    std::env::var("CONNGAME_JOBS").ok().and_then(|v| v.parse().ok())
                }),
            };
            for &a in &spec.a_values {
                GameConfig::new(n, a, 1, spec.win_condition).map_err(usage)?;
            }
            for &b in &spec.b_values {
                GameConfig::new(n, 1, b, spec.win_condition).map_err(usage)?;
            }
            let table = sweep(&spec);
            let text = match format_of(&output, OutputFormat::Csv) {
                OutputFormat::Csv => table.to_csv(),
                OutputFormat::Json => {
                    let rows: Vec<_> = table
                        .rows
                        .iter()
                        .map(|r| serde_json::to_value(r).expect("serializable"))
                        .collect();
                    format!("{}\n", json!({"pairings": table.pairings, "rows": rows}))
                }
                OutputFormat::Human => table.to_csv(),
            };
            emit(&output, OutputFormat::Csv, text)
        }

        Command::Random { n, a, b, trials, seed, output } => {
            if trials < 1 {
                return Err(usage("trials must be at least 1"));
            }
            GameConfig::new(n, a, b, WinCondition::Connectivity).map_err(usage)?;
            let est = random_game(n, a, b, trials, seed);
            let text = match format_of(&output, OutputFormat::Json) {
                OutputFormat::Json => format!(
                    "{}\n",
                    serde_json::to_value(&est).expect("serializable")
                ),
                OutputFormat::Human => format!(
                    "K_{n} ({a}:{b}): maker wins {}/{} = {:.3} (95% CI {:.3}..{:.3}), {} maker edges\n",
                    est.maker_wins,
                    est.trials,
                    est.frequency,
                    est.wilson_low,
                    est.wilson_high,
                    est.maker_edges,
                ),
                OutputFormat::Csv => return Err(usage("random does not produce csv")),
            };
            emit(&output, OutputFormat::Json, text)
        }

        Command::Bounds { n, a, output } => {
            if n < 3 || a < 1 {
                return Err(usage("bounds need n >= 3 and a >= 1"));
            }
            let band = corollary_bounds(n, a, &RegimeCutoffs::default());
            let text = match format_of(&output, OutputFormat::Json) {
                OutputFormat::Json => format!(
                    "{}\n",
                    json!({
                        "n": band.n,
                        "a": band.a,
                        "regime": band.regime.label(),
                        "lower": band.lower,
                        "upper": band.upper,
                        "dropped_o1": band.dropped_o1,
                        "warning": band.warning,
                    })
                ),
                OutputFormat::Human => format!(
                    "b0({}) at n={}: regime {}, {:.1} < b0 < {:.1}{}\n",
                    band.a,
                    band.n,
                    band.regime.label(),
                    band.lower,
                    band.upper,
                    band.warning.as_deref().map(|w| format!(" [{w}]")).unwrap_or_default(),
                ),
                OutputFormat::Csv => return Err(usage("bounds does not produce csv")),
            };
            emit(&output, OutputFormat::Json, text)
        }
    }
}
