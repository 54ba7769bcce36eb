//! Command-line front end.
//!
//! Exit codes: 0 success, 1 input error, 2 verification failure (or a lift
//! disagreement), 3 undetermined form or unsound oracle.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Rational64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::format::{
    describe_order_error, format_label_set, parse_arena, parse_game, parse_label_set,
    parse_relation, write_arena, write_game, write_relation, FormatError, GameDocument, PrefSource,
    RelationDocument,
};
use crate::games::{
    enforce_set, generate_tree_game, is_nash, is_nash_with, split_report, MatrixGame, PayoffTable,
    Player, Profile, TreeGameConfig,
};
use crate::poset::{transitive_closure, validate_order};
use crate::priority::{
    generate_priority_game, realized_priority, secure_equilibrium_priority, verify_priority_secure,
    ArenaConfig, PriorityGame,
};
use crate::secure::{is_secure, secure_equilibrium};
use crate::transfer::{matrix_oracle, solve_matrix_game, Mode, OracleCalls, TransferError};

/// Above this many outcomes, exhaustive labeling enumeration needs `--force`.
pub const EXHAUSTIVE_LIMIT: usize = 20;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;
pub const EXIT_UNSOUND: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "eqtransfer",
    version,
    about = "Equilibria from determinacy oracles"
)]
pub struct Cli {
    /// Output style.
    #[arg(long, value_enum, global = true, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Structured,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum ModeArg {
    Naive,
    #[default]
    Greedy,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Naive => Mode::Naive,
            ModeArg::Greedy => Mode::Greedy,
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveOpts {
    #[arg(long, value_enum, default_value_t = ModeArg::Greedy)]
    pub mode: ModeArg,
    /// Check the result with brute-force verifiers.
    #[arg(long)]
    pub verify: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compare two outcome sets under the lifted order, with all three procedures.
    Lift {
        /// Relation file holding a strict order.
        order: PathBuf,
        /// First set, e.g. `{1,2}`.
        a: String,
        /// Second set.
        b: String,
        /// Allow the exponential witness search on large differences.
        #[arg(long)]
        force: bool,
    },
    /// Decide whether a game form is determined.
    CheckForm {
        game: PathBuf,
        /// Enumerate labelings even above the outcome limit.
        #[arg(long)]
        force: bool,
        #[arg(long)]
        verify: bool,
    },
    /// Compute a Nash equilibrium of a game with ordered preferences.
    Solve {
        game: PathBuf,
        #[command(flatten)]
        opts: SolveOpts,
        #[arg(long)]
        force: bool,
    },
    /// Compute a secure equilibrium of a game with payoffs.
    Secure {
        game: PathBuf,
        #[command(flatten)]
        opts: SolveOpts,
        #[arg(long)]
        force: bool,
    },
    /// Compute a positional secure equilibrium of a priority game.
    Priority {
        arena: PathBuf,
        #[command(flatten)]
        opts: SolveOpts,
        /// Start from this vertex instead of the file's initial vertex.
        #[arg(long, conflicts_with = "all_vertices")]
        initial: Option<usize>,
        /// Solve once per vertex.
        #[arg(long)]
        all_vertices: bool,
    },
    /// Transitively close an acyclic relation.
    Closure {
        relation: PathBuf,
        /// Also solve this game (with `acyclic` preferences) under the
        /// closures and check the equilibrium against the original relations.
        #[arg(long)]
        game: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ModeArg::Greedy)]
        mode: ModeArg,
        #[arg(long)]
        verify: bool,
    },
    /// Write a random game or arena file to stdout.
    Generate {
        #[command(subcommand)]
        kind: GenerateKind,
    },
}

#[derive(Debug, Subcommand)]
pub enum GenerateKind {
    /// Normal form of a random perfect-information tree game.
    Tree {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = 2)]
        branching: usize,
        #[arg(long, default_value_t = 4)]
        outcomes: usize,
        #[arg(long, default_value_t = 8)]
        max_strategies: usize,
        /// Payoff components are drawn from `-range..=range`.
        #[arg(long, default_value_t = 3)]
        payoff_range: i64,
        /// Emit the bare game form without payoffs.
        #[arg(long)]
        no_payoffs: bool,
    },
    /// Random priority game.
    Arena {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        vertices: usize,
        #[arg(long, default_value_t = 4)]
        priorities: u32,
        #[arg(long, default_value_t = 3)]
        max_out_degree: usize,
        #[arg(long, default_value_t = 3)]
        payoff_range: i64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub check: String,
    pub passed: bool,
}

/// Equilibrium found by `solve` or `secure`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileReport {
    pub s1: usize,
    pub s2: usize,
    pub outcome: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub payoff: Option<[String; 2]>,
    pub enforced: String,
    pub replaced: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PriorityRun {
    pub initial: usize,
    /// Successor chosen at each vertex of the owner, `null` elsewhere.
    pub s1: Vec<Option<usize>>,
    pub s2: Vec<Option<usize>>,
    pub realized_priority: u32,
    pub payoff: [String; 2],
    pub calls: OracleCalls,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BridgeReport {
    pub s1: usize,
    pub s2: usize,
    pub outcome: String,
    pub nash_under_closure: bool,
    pub nash_under_original: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReportResult {
    Lift {
        a: String,
        b: String,
        /// `None` when the witness search was skipped.
        witness: Option<bool>,
        minima: bool,
        poly: bool,
        agree: bool,
    },
    CheckForm {
        outcomes: usize,
        determined: bool,
        undetermined_labeling: Option<String>,
        split_agrees: bool,
        unsplit_subset: Option<String>,
    },
    Solve(ProfileReport),
    Secure(ProfileReport),
    Priority {
        runs: Vec<PriorityRun>,
    },
    Closure {
        /// The closed relation as a relation file.
        relation: String,
        added_pairs: usize,
        bridge: Option<BridgeReport>,
    },
    Generate {
        /// The generated game or arena file.
        text: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportError {
    pub message: String,
    /// Set for undetermined forms: the set on which Player 1 wins.
    pub labeling: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: Vec<String>,
    /// SHA-256 of the main input file.
    pub input_digest: Option<String>,
    pub result: Option<ReportResult>,
    pub calls: Option<OracleCalls>,
    /// Present exactly when `--verify` was given (and the command got that far).
    pub verification: Option<Vec<Verdict>>,
    pub error: Option<ReportError>,
    pub warnings: Vec<String>,
    pub exit_code: i32,
    pub duration_ms: f64,
}

impl RunReport {
    fn new(command: Vec<String>) -> Self {
        RunReport {
            command,
            input_digest: None,
            result: None,
            calls: None,
            verification: None,
            error: None,
            warnings: Vec::new(),
            exit_code: EXIT_OK,
            duration_ms: 0.0,
        }
    }

    pub fn first_failed_check(&self) -> Option<&str> {
        self.verification
            .as_ref()?
            .iter()
            .find(|v| !v.passed)
            .map(|v| v.check.as_str())
    }
}

struct Failure {
    code: i32,
    message: String,
    labeling: Option<String>,
}

impl Failure {
    fn input(e: impl ToString) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: e.to_string(),
            labeling: None,
        }
    }

    fn transfer(e: TransferError, labels: &[String]) -> Self {
        match e {
            TransferError::OracleUnsound { .. } => {
                let labeling = e
                    .undetermined_labeling()
                    .map(|w| format_label_set(w, labels));
                let message = match &labeling {
                    Some(w) => format!("the game form is not determined: no winning strategy when Player 1 wins on {w}"),
                    None => e.to_string(),
                };
                Failure {
                    code: EXIT_UNSOUND,
                    message,
                    labeling,
                }
            }
            other => Failure::input(other),
        }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure::input(e)
    }
}

fn read_input(path: &Path, report: &mut RunReport) -> Result<String, Failure> {
    let bytes =
        std::fs::read(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    report.input_digest = Some(hex::encode(Sha256::digest(&bytes)));
    String::from_utf8(bytes).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn verdict(check: &str, passed: bool) -> Verdict {
    Verdict {
        check: check.to_string(),
        passed,
    }
}

fn payoff_strings(p: (Rational64, Rational64)) -> [String; 2] {
    [p.0.to_string(), p.1.to_string()]
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> (RunReport, Option<OutputFormat>)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let echo: Vec<String> = args
        .iter()
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    match Cli::try_parse_from(&args) {
        Ok(cli) => {
            let format = cli.format;
            (execute(&cli, echo), Some(format))
        }
        Err(e) => {
            let mut report = RunReport::new(echo);
            let informational = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            report.exit_code = if informational { EXIT_OK } else { EXIT_INPUT };
            report.error = Some(ReportError {
                message: e.render().to_string(),
                labeling: None,
            });
            (report, None)
        }
    }
}

pub fn execute(cli: &Cli, echo: Vec<String>) -> RunReport {
    let start = Instant::now();
    let mut report = RunReport::new(echo);
    let outcome = match &cli.command {
        Command::Lift { order, a, b, force } => cmd_lift(&mut report, order, a, b, *force),
        Command::CheckForm {
            game,
            force,
            verify,
        } => cmd_check_form(&mut report, game, *force, *verify),
        Command::Solve { game, opts, force } => cmd_solve(&mut report, game, opts, *force),
        Command::Secure { game, opts, force } => cmd_secure(&mut report, game, opts, *force),
        Command::Priority {
            arena,
            opts,
            initial,
            all_vertices,
        } => cmd_priority(&mut report, arena, opts, *initial, *all_vertices),
        Command::Closure {
            relation,
            game,
            mode,
            verify,
        } => cmd_closure(
            &mut report,
            relation,
            game.as_deref(),
            (*mode).into(),
            *verify,
        ),
        Command::Generate { kind } => cmd_generate(&mut report, kind),
    };
    match outcome {
        Ok(()) => {
            if report.exit_code == EXIT_OK && report.first_failed_check().is_some() {
                report.exit_code = EXIT_VERIFY;
            }
        }
        Err(f) => {
            report.exit_code = f.code;
            report.error = Some(ReportError {
                message: f.message,
                labeling: f.labeling,
            });
        }
    }
    report.duration_ms = start.elapsed().as_secs_f64() * 1e3;
    report
}

fn cmd_lift(
    report: &mut RunReport,
    path: &Path,
    a: &str,
    b: &str,
    force: bool,
) -> Result<(), Failure> {
    let doc = parse_relation(&read_input(path, report)?)?;
    let order = validate_order(&doc.relation)
        .map_err(|e| Failure::input(describe_order_error(&e, &doc.labels)))?;
    let (sa, sb) = (
        parse_label_set(a, &doc.labels)?,
        parse_label_set(b, &doc.labels)?,
    );
    let candidates = sa.difference(&sb).len();
    let witness = if candidates <= EXHAUSTIVE_LIMIT || (force && candidates < 64) {
        Some(order.lift_less_witness(&sa, &sb))
    } else {
        report
            .warnings
            .push(format!("witness search over 2^{candidates} sets skipped"));
        None
    };
    let minima = order.lift_less(&sa, &sb);
    let poly = order.lift_less_poly(&sa, &sb);
    let agree = minima == poly && witness.is_none_or(|w| w == minima);
    report.result = Some(ReportResult::Lift {
        a: format_label_set(&sa, &doc.labels),
        b: format_label_set(&sb, &doc.labels),
        witness,
        minima,
        poly,
        agree,
    });
    if !agree {
        report.exit_code = EXIT_VERIFY;
    }
    Ok(())
}

fn too_many_outcomes(n: usize) -> Failure {
    Failure::input(format!(
        "{n} outcomes means 2^{n} labelings; pass --force to enumerate them anyway"
    ))
}

fn cmd_check_form(
    report: &mut RunReport,
    path: &Path,
    force: bool,
    verify: bool,
) -> Result<(), Failure> {
    let doc = parse_game(&read_input(path, report)?)?;
    let n = doc.form.outcome_count();
    if n > EXHAUSTIVE_LIMIT && !force {
        return Err(too_many_outcomes(n));
    }
    let labels = doc.form.labels();
    let split = split_report(&doc.form);
    report.result = Some(ReportResult::CheckForm {
        outcomes: n,
        determined: split.determined,
        undetermined_labeling: split
            .undetermined_labeling
            .as_ref()
            .map(|w| format_label_set(w, labels)),
        split_agrees: split.agrees(),
        unsplit_subset: split
            .unsplit_subset
            .as_ref()
            .map(|p| format_label_set(p, labels)),
    });
    if verify {
        report.verification = Some(vec![verdict("split_agrees", split.agrees())]);
    }
    Ok(())
}

fn warn_naive(report: &mut RunReport, mode: Mode, n: usize, force: bool) -> Result<(), Failure> {
    if mode == Mode::Naive && n > EXHAUSTIVE_LIMIT {
        if !force {
            return Err(too_many_outcomes(n));
        }
        report
            .warnings
            .push(format!("naive search over 2^{n} labelings"));
    }
    Ok(())
}

fn profile_report(doc: &GameDocument, r: &crate::transfer::TransferResult<usize>) -> ProfileReport {
    let labels = doc.form.labels();
    ProfileReport {
        s1: r.s1,
        s2: r.s2,
        outcome: labels[r.outcome].clone(),
        payoff: doc
            .payoffs
            .as_ref()
            .map(|t| payoff_strings(t.pair(r.outcome))),
        enforced: format_label_set(&r.enforced, labels),
        replaced: format_label_set(&r.replaced, labels),
    }
}

fn structural_verdicts(
    doc: &GameDocument,
    r: &crate::transfer::TransferResult<usize>,
) -> Vec<Verdict> {
    let form = &doc.form;
    let by_s1 = enforce_set(form, Player::One, r.s1).map(|s| s.is_subset_of(&r.enforced));
    let by_s2 = enforce_set(form, Player::Two, r.s2).map(|s| !s.intersects(&r.replaced));
    vec![
        verdict("outcome_matches_play", form.at(r.s1, r.s2) == r.outcome),
        verdict("s1_enforces_enforced_set", by_s1.unwrap_or(false)),
        verdict("s2_avoids_replaced_set", by_s2.unwrap_or(false)),
    ]
}

fn cmd_solve(
    report: &mut RunReport,
    path: &Path,
    opts: &SolveOpts,
    force: bool,
) -> Result<(), Failure> {
    let doc = parse_game(&read_input(path, report)?)?;
    let game = doc.game()?;
    let mode = opts.mode.into();
    warn_naive(report, mode, doc.form.outcome_count(), force)?;
    let r = solve_matrix_game(&game, mode).map_err(|e| Failure::transfer(e, doc.form.labels()))?;
    report.calls = Some(r.calls);
    report.result = Some(ReportResult::Solve(profile_report(&doc, &r)));
    if opts.verify {
        let mut v = vec![verdict("is_nash", is_nash(&game, Profile::new(r.s1, r.s2)))];
        v.extend(structural_verdicts(&doc, &r));
        report.verification = Some(v);
    }
    Ok(())
}

fn cmd_secure(
    report: &mut RunReport,
    path: &Path,
    opts: &SolveOpts,
    force: bool,
) -> Result<(), Failure> {
    let doc = parse_game(&read_input(path, report)?)?;
    let payoffs = doc.require_payoffs()?.clone();
    let mode = opts.mode.into();
    warn_naive(report, mode, doc.form.outcome_count(), force)?;
    if doc.pref1.is_some() || doc.pref2.is_some() {
        report
            .warnings
            .push("preferences in the file are ignored; secure equilibria use payoffs".into());
    }
    let r = secure_equilibrium(&payoffs, &matrix_oracle(&doc.form), mode)
        .map_err(|e| Failure::transfer(e, doc.form.labels()))?;
    report.calls = Some(r.calls);
    report.result = Some(ReportResult::Secure(profile_report(&doc, &r)));
    if opts.verify {
        let mut v = vec![verdict(
            "is_secure",
            is_secure(&doc.form, &payoffs, Profile::new(r.s1, r.s2)),
        )];
        v.extend(structural_verdicts(&doc, &r));
        report.verification = Some(v);
    }
    Ok(())
}

fn cmd_priority(
    report: &mut RunReport,
    path: &Path,
    opts: &SolveOpts,
    initial: Option<usize>,
    all_vertices: bool,
) -> Result<(), Failure> {
    let base = parse_arena(&read_input(path, report)?)?;
    let starts: Vec<usize> = if all_vertices {
        (0..base.arena().len()).collect()
    } else {
        vec![initial.unwrap_or(base.arena().initial())]
    };
    let mode: Mode = opts.mode.into();
    let m = base.outcome_priorities().len();
    let mut runs = Vec::new();
    let mut verdicts = Vec::new();
    let mut total = OracleCalls::default();
    for v in starts {
        let game: PriorityGame = base.with_initial(v).map_err(Failure::input)?;
        let labels: Vec<String> = game
            .outcome_priorities()
            .iter()
            .map(u32::to_string)
            .collect();
        let r =
            secure_equilibrium_priority(&game, mode).map_err(|e| Failure::transfer(e, &labels))?;
        let realized = realized_priority(game.arena(), &r.s1, &r.s2);
        let pair = game.payoff()[&realized];
        if opts.verify {
            let tag = |check: &str| format!("{check}@{v}");
            verdicts.push(verdict(
                &tag("verify_priority_secure"),
                verify_priority_secure(&game, &r.s1, &r.s2),
            ));
            verdicts.push(verdict(
                &tag("realized_priority_matches"),
                game.outcome_index(realized) == Some(r.outcome),
            ));
            verdicts.push(verdict(&tag("extractions_eq_2"), r.calls.extractions == 2));
            if mode == Mode::Greedy {
                verdicts.push(verdict(
                    &tag("decisions_within_m_plus_2"),
                    r.calls.decisions <= m + 2,
                ));
            }
        }
        total.decisions += r.calls.decisions;
        total.extractions += r.calls.extractions;
        runs.push(PriorityRun {
            initial: v,
            s1: r.s1.choices().to_vec(),
            s2: r.s2.choices().to_vec(),
            realized_priority: realized,
            payoff: payoff_strings(pair),
            calls: r.calls,
        });
    }
    report.calls = Some(total);
    report.result = Some(ReportResult::Priority { runs });
    if opts.verify {
        report.verification = Some(verdicts);
    }
    Ok(())
}

fn cmd_closure(
    report: &mut RunReport,
    path: &Path,
    game_path: Option<&Path>,
    mode: Mode,
    verify: bool,
) -> Result<(), Failure> {
    let doc = parse_relation(&read_input(path, report)?)?;
    let closed = transitive_closure(&doc.relation)
        .map_err(|e| Failure::input(describe_order_error(&e, &doc.labels)))?;
    let closed_rel = closed.relation();
    let added = closed_rel.pairs().count() - doc.relation.pairs().count();
    let mut verdicts = vec![
        verdict(
            "contains_original",
            doc.relation.pairs().all(|(x, y)| closed.less(x, y)),
        ),
        verdict("is_strict_order", validate_order(&closed_rel).is_ok()),
    ];
    let bridge = match game_path {
        None => None,
        Some(gp) => {
            let text = std::fs::read_to_string(gp)
                .map_err(|e| Failure::input(format!("{}: {e}", gp.display())))?;
            let gdoc = parse_game(&text)?;
            let p1 = gdoc.resolve_pref(Player::One)?;
            let p2 = gdoc.resolve_pref(Player::Two)?;
            let game =
                MatrixGame::new(gdoc.form.clone(), p1.order, p2.order).map_err(Failure::input)?;
            let r = solve_matrix_game(&game, mode)
                .map_err(|e| Failure::transfer(e, gdoc.form.labels()))?;
            report.calls = Some(r.calls);
            let profile = Profile::new(r.s1, r.s2);
            let under_original = is_nash_with(&gdoc.form, &p1.original, &p2.original, profile);
            let under_closure = is_nash(&game, profile);
            verdicts.push(verdict("nash_under_closure", under_closure));
            verdicts.push(verdict("nash_under_original", under_original));
            Some(BridgeReport {
                s1: r.s1,
                s2: r.s2,
                outcome: gdoc.form.labels()[r.outcome].clone(),
                nash_under_closure: under_closure,
                nash_under_original: under_original,
            })
        }
    };
    let relation = write_relation(&RelationDocument {
        labels: doc.labels.clone(),
        relation: closed_rel,
    });
    report.result = Some(ReportResult::Closure {
        relation,
        added_pairs: added,
        bridge,
    });
    if verify {
        report.verification = Some(verdicts);
    }
    Ok(())
}

/// Random game file: a tree-generated form with payoff preferences.
pub fn generate_tree_document(
    seed: u64,
    cfg: &TreeGameConfig,
    payoff_range: Option<i64>,
) -> GameDocument {
    let form = generate_tree_game(seed, cfg);
    let payoffs = payoff_range.map(|r| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x05ee_d0f9_a7e5);
        PayoffTable::new(
            (0..form.outcome_count())
                .map(|_| {
                    let a = rng.random_range(-r..=r);
                    let b = rng.random_range(-r..=r);
                    (Rational64::from_integer(a), Rational64::from_integer(b))
                })
                .collect(),
        )
    });
    let prefs = payoffs.as_ref().map(|_| PrefSource::Payoff);
    GameDocument {
        form,
        payoffs,
        pref1: prefs.clone(),
        pref2: prefs,
    }
}

fn cmd_generate(report: &mut RunReport, kind: &GenerateKind) -> Result<(), Failure> {
    let text = match *kind {
        GenerateKind::Tree {
            seed,
            depth,
            branching,
            outcomes,
            max_strategies,
            payoff_range,
            no_payoffs,
        } => {
            if depth == 0
                || branching == 0
                || outcomes == 0
                || max_strategies == 0
                || payoff_range < 0
            {
                return Err(Failure::input("tree bounds must be positive"));
            }
            let cfg = TreeGameConfig {
                depth,
                branching,
                outcomes,
                max_strategies,
            };
            write_game(&generate_tree_document(
                seed,
                &cfg,
                (!no_payoffs).then_some(payoff_range),
            ))
        }
        GenerateKind::Arena {
            seed,
            vertices,
            priorities,
            max_out_degree,
            payoff_range,
        } => {
            if vertices == 0 || priorities == 0 || max_out_degree == 0 || payoff_range < 0 {
                return Err(Failure::input("arena bounds must be positive"));
            }
            let cfg = ArenaConfig {
                vertices,
                priorities,
                max_out_degree,
                payoff_range,
            };
            write_arena(&generate_priority_game(seed, &cfg))
        }
    };
    report.result = Some(ReportResult::Generate { text });
    Ok(())
}

fn fmt_calls(c: &OracleCalls) -> String {
    format!("{} decisions, {} extractions", c.decisions, c.extractions)
}

fn fmt_choices(choices: &[Option<usize>]) -> String {
    let parts: Vec<String> = choices
        .iter()
        .enumerate()
        .filter_map(|(v, c)| c.map(|w| format!("{v}->{w}")))
        .collect();
    if parts.is_empty() {
        "-".into()
    } else {
        parts.join(" ")
    }
}

/// Human-readable rendering: a two-column table.
pub fn render_text(report: &RunReport) -> String {
    let mut rows: Vec<(String, String)> = Vec::new();
    let mut push = |k: &str, v: String| rows.push((k.to_string(), v));
    if let Some(result) = &report.result {
        match result {
            ReportResult::Lift {
                a,
                b,
                witness,
                minima,
                poly,
                agree,
            } => {
                push("A", a.clone());
                push("B", b.clone());
                push(
                    "witness",
                    witness.map_or("skipped".into(), |w| w.to_string()),
                );
                push("minima", minima.to_string());
                push("poly", poly.to_string());
                push("agree", agree.to_string());
            }
            ReportResult::CheckForm {
                outcomes,
                determined,
                undetermined_labeling,
                split_agrees,
                unsplit_subset,
            } => {
                push("outcomes", outcomes.to_string());
                push("determined", determined.to_string());
                if let Some(w) = undetermined_labeling {
                    push("undetermined labeling", format!("Player 1 wins on {w}"));
                }
                if let Some(p) = unsplit_subset {
                    push("unsplit subset", p.clone());
                }
                push("split agrees", split_agrees.to_string());
            }
            ReportResult::Solve(p) | ReportResult::Secure(p) => {
                push("s1", format!("row {}", p.s1));
                push("s2", format!("column {}", p.s2));
                push("outcome", p.outcome.clone());
                if let Some([x, y]) = &p.payoff {
                    push("payoff", format!("({x}, {y})"));
                }
                push("enforced M", p.enforced.clone());
                push("replaced M'", p.replaced.clone());
            }
            ReportResult::Priority { runs } => {
                for r in runs {
                    let tag = |k: &str| format!("[{}] {k}", r.initial);
                    push(&tag("s1"), fmt_choices(&r.s1));
                    push(&tag("s2"), fmt_choices(&r.s2));
                    push(&tag("priority"), r.realized_priority.to_string());
                    push(
                        &tag("payoff"),
                        format!("({}, {})", r.payoff[0], r.payoff[1]),
                    );
                }
            }
            ReportResult::Closure {
                relation,
                added_pairs,
                bridge,
            } => {
                push("added pairs", added_pairs.to_string());
                push("closure", relation.trim_end().replace('\n', "; "));
                if let Some(b) = bridge {
                    push(
                        "equilibrium",
                        format!("row {}, column {} -> {}", b.s1, b.s2, b.outcome),
                    );
                    push("nash under closure", b.nash_under_closure.to_string());
                    push("nash under original", b.nash_under_original.to_string());
                }
            }
            ReportResult::Generate { text } => return text.clone(),
        }
    }
    if let Some(c) = &report.calls {
        push("oracle calls", fmt_calls(c));
    }
    if let Some(vs) = &report.verification {
        for v in vs {
            push(
                &format!("check {}", v.check),
                if v.passed {
                    "pass".into()
                } else {
                    "FAIL".into()
                },
            );
        }
    }
    for w in &report.warnings {
        push("warning", w.clone());
    }
    if let Some(e) = &report.error {
        push("error", e.message.trim_end().to_string());
        if let Some(l) = &e.labeling {
            push("witness", format!("Player 1 wins on {l}"));
        }
    }
    push("time", format!("{:.1} ms", report.duration_ms));
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, v) in rows {
        writeln!(out, "{k:<width$}  {v}").unwrap();
    }
    out
}

/// Runs the binary: prints the report and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let (report, format) = run(args);
    match format {
        None => {
            let msg = report
                .error
                .as_ref()
                .map(|e| e.message.as_str())
                .unwrap_or("");
            if report.exit_code == EXIT_OK {
                print!("{msg}");
            } else {
                eprint!("{msg}");
            }
        }
        Some(OutputFormat::Structured) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&report).expect("reports serialize")
            );
        }
        Some(OutputFormat::Text) => {
            let text = render_text(&report);
            if report.exit_code == EXIT_OK {
                print!("{text}");
            } else {
                eprint!("{text}");
                if let Some(check) = report.first_failed_check() {
                    eprintln!("first failed check: {check}");
                }
            }
        }
    }
    report.exit_code
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_flags() {
        let cli = Cli::try_parse_from([
            "eqtransfer",
            "--format",
            "structured",
            "solve",
            "g.toml",
            "--mode",
            "naive",
            "--verify",
        ])
        .unwrap();
        assert_eq!(cli.format, OutputFormat::Structured);
        match cli.command {
            Command::Solve { opts, .. } => {
                assert_eq!(opts.mode, ModeArg::Naive);
                assert!(opts.verify);
            }
            c => panic!("{c:?}"),
        }
        assert!(Cli::try_parse_from(["eqtransfer", "solve", "g.toml", "--mode", "fast"]).is_err());
    }

    #[test]
    fn usage_errors_exit_1() {
        let (r, fmt) = run(["eqtransfer", "nonsense"]);
        assert_eq!((r.exit_code, fmt), (EXIT_INPUT, None));
        let (r, _) = run(["eqtransfer", "--help"]);
        assert_eq!(r.exit_code, EXIT_OK);
    }

    #[test]
    fn missing_file_is_input_error() {
        let (r, _) = run(["eqtransfer", "solve", "/nonexistent/game.toml"]);
        assert_eq!(r.exit_code, EXIT_INPUT);
        assert!(r.error.unwrap().message.contains("/nonexistent/game.toml"));
    }

    #[test]
    fn generated_tree_round_trips() {
        let doc = generate_tree_document(3, &TreeGameConfig::default(), Some(2));
        assert_eq!(parse_game(&write_game(&doc)).unwrap(), doc);
        let bare = generate_tree_document(3, &TreeGameConfig::default(), None);
        assert!(bare.payoffs.is_none() && bare.pref1.is_none());
    }

    #[test]
    fn generate_command_is_deterministic() {
        let a = run(["eqtransfer", "generate", "arena", "--seed", "5"]).0;
        let b = run(["eqtransfer", "generate", "arena", "--seed", "5"]).0;
        assert_eq!(a.result, b.result);
        assert_eq!(a.exit_code, EXIT_OK);
        let bad = run(["eqtransfer", "generate", "tree", "--depth", "0"]).0;
        assert_eq!(bad.exit_code, EXIT_INPUT);
    }

    #[test]
    fn text_table_aligns_keys() {
        let mut r = RunReport::new(vec!["x".into()]);
        r.verification = Some(vec![verdict("a", true), verdict("longer", false)]);
        let text = render_text(&r);
        assert!(text.contains("check a       pass"), "{text}");
        assert!(text.contains("check longer  FAIL"), "{text}");
        assert_eq!(r.first_failed_check(), Some("longer"));
    }
}
