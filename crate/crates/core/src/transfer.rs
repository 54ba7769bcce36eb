//! Equilibrium transfer: from a determinacy oracle for the derived win/lose
//! games to a Nash equilibrium of the game with arbitrary strict-order
//! preferences.
//!
//! The construction follows four steps:
//!
//! 1. find a set `M` of outcomes that Player 1 can enforce and that is
//!    maximal for the lift of her preference, and a strategy `s1` enforcing it;
//! 2. pick `m`, maximal in `M` for Player 2, and form
//!    `M' = (M \ {m}) ∪ u₁(m)`;
//! 3. Player 1 cannot enforce `M'`, so Player 2 enforces its complement with
//!    some `s2`;
//! 4. the play `(s1, s2)` ends in `M ∩ (O \ M') = {m}` and is stable for both.
//!
//! Steps 3 and 4 are asserted at run time; a failure means the oracle is not
//! sound for the game form (or the form is not determined).

use std::cell::Cell;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::games::{winning_strategy, MatrixGame, MatrixGameForm, Player, WinLoseLabeling};
use crate::poset::{Poset, Subset};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("the win/lose game where Player 1 wins on {0} is not determined")]
    NotDetermined(Subset),
}

/// Decides derived win/lose games of a fixed game form and produces winning
/// strategies from the distinguished strategy sets.
///
/// `decide(wl)` must be Player 1 exactly when the strategy returned by
/// `strategy(wl)` enforces `wl.w`, and Player 2 exactly when it enforces the
/// complement.
pub trait DeterminacyOracle {
    type Strategy: Clone + fmt::Debug;

    fn outcome_count(&self) -> usize;

    fn decide(&self, wl: &WinLoseLabeling) -> Result<Player, OracleError>;

    fn strategy(&self, wl: &WinLoseLabeling) -> Result<(Player, Self::Strategy), OracleError>;

    /// The outcome of the profile `(s1, s2)`.
    fn play(&self, s1: &Self::Strategy, s2: &Self::Strategy) -> usize;
}

/// Number of oracle calls made so far.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleCalls {
    pub decisions: usize,
    pub extractions: usize,
}

/// Wraps an oracle and counts `decide` and `strategy` calls.
pub struct CountingOracle<'a, O> {
    inner: &'a O,
    decisions: Cell<usize>,
    extractions: Cell<usize>,
}

impl<'a, O: DeterminacyOracle> CountingOracle<'a, O> {
    pub fn new(inner: &'a O) -> Self {
        CountingOracle {
            inner,
            decisions: Cell::new(0),
            extractions: Cell::new(0),
        }
    }

    pub fn calls(&self) -> OracleCalls {
        OracleCalls {
            decisions: self.decisions.get(),
            extractions: self.extractions.get(),
        }
    }
}

impl<O: DeterminacyOracle> DeterminacyOracle for CountingOracle<'_, O> {
    type Strategy = O::Strategy;

    fn outcome_count(&self) -> usize {
        self.inner.outcome_count()
    }

    fn decide(&self, wl: &WinLoseLabeling) -> Result<Player, OracleError> {
        self.decisions.set(self.decisions.get() + 1);
        self.inner.decide(wl)
    }

    fn strategy(&self, wl: &WinLoseLabeling) -> Result<(Player, Self::Strategy), OracleError> {
        self.extractions.set(self.extractions.get() + 1);
        self.inner.strategy(wl)
    }

    fn play(&self, s1: &Self::Strategy, s2: &Self::Strategy) -> usize {
        self.inner.play(s1, s2)
    }
}

/// Brute-force oracle over a matrix form: looks for a constant row or column.
#[derive(Debug, Clone)]
pub struct MatrixOracle {
    form: MatrixGameForm,
}

/// An oracle for `form`. Determinacy is only checked lazily, per labeling
/// actually queried.
pub fn matrix_oracle(form: &MatrixGameForm) -> MatrixOracle {
    MatrixOracle { form: form.clone() }
}

impl DeterminacyOracle for MatrixOracle {
    type Strategy = usize;

    fn outcome_count(&self) -> usize {
        self.form.outcome_count()
    }

    fn decide(&self, wl: &WinLoseLabeling) -> Result<Player, OracleError> {
        self.strategy(wl).map(|(p, _)| p)
    }

    fn strategy(&self, wl: &WinLoseLabeling) -> Result<(Player, usize), OracleError> {
        winning_strategy(&self.form, wl).ok_or_else(|| OracleError::NotDetermined(wl.w.clone()))
    }

    fn play(&self, s1: &usize, s2: &usize) -> usize {
        self.form.at(*s1, *s2)
    }
}

/// How the maximal enforceable set is searched for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Query all `2^|O|` labelings.
    Naive,
    /// Drop outcomes worst-first along a linear extension: `|O|` queries.
    #[default]
    Greedy,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "naive" => Ok(Mode::Naive),
            "greedy" => Ok(Mode::Greedy),
            other => Err(format!("unknown mode `{other}` (expected naive or greedy)")),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Naive => "naive",
            Mode::Greedy => "greedy",
        })
    }
}

/// The step of the construction at which an oracle answer was inconsistent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Stage {
    /// Searching for the maximal enforceable set.
    Search,
    /// Extracting Player 1's strategy for `M`.
    Enforce,
    /// Player 2 must enforce the complement of `M'`.
    Counter,
    /// The play must end in `m`.
    Meet,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Search => "maximal-set search",
            Stage::Enforce => "Player 1 strategy extraction",
            Stage::Counter => "Player 2 counter-strategy",
            Stage::Meet => "equilibrium outcome check",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Unsoundness {
    #[error("{0}")]
    NotDetermined(OracleError),
    #[error("labeling {labeling}: expected {expected} to win, oracle says {found}")]
    WrongWinner {
        labeling: Subset,
        expected: Player,
        found: Player,
    },
    #[error("Player 1 was reported to enforce the empty set")]
    EmptyEnforcedSet,
    #[error("the play ends in outcome {found}, expected {expected}")]
    OutcomeMismatch { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransferError {
    #[error("oracle unsound during {stage}: {cause}")]
    OracleUnsound { stage: Stage, cause: Unsoundness },
    #[error("exhaustive search over {0} outcomes is infeasible")]
    TooManyOutcomes(usize),
    #[error("preference of {player} ranges over {found} outcomes, the oracle over {expected}")]
    PreferenceSize {
        player: Player,
        expected: usize,
        found: usize,
    },
}

impl TransferError {
    /// The labeling that turned out undetermined, if that was the failure.
    pub fn undetermined_labeling(&self) -> Option<&Subset> {
        match self {
            TransferError::OracleUnsound {
                cause: Unsoundness::NotDetermined(OracleError::NotDetermined(w)),
                ..
            } => Some(w),
            _ => None,
        }
    }
}

fn unsound(stage: Stage) -> impl Fn(OracleError) -> TransferError {
    move |e| TransferError::OracleUnsound {
        stage,
        cause: Unsoundness::NotDetermined(e),
    }
}

/// An equilibrium in the oracle's distinguished strategy sets, together with
/// the intermediate sets of the construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferResult<S> {
    pub s1: S,
    pub s2: S,
    /// The equilibrium outcome `m`.
    pub outcome: usize,
    /// `M`, the maximal set enforced by `s1`.
    pub enforced: Subset,
    /// `M'`, whose complement `s2` enforces.
    pub replaced: Subset,
    pub calls: OracleCalls,
}

/// Queries every labeling and returns a lift-maximal set Player 1 can
/// enforce; ties go to the smallest characteristic vector.
pub fn maximal_enforceable_naive<O: DeterminacyOracle>(
    pref1: &Poset,
    oracle: &O,
) -> Result<Subset, TransferError> {
    let n = oracle.outcome_count();
    if n >= 64 {
        return Err(TransferError::TooManyOutcomes(n));
    }
    let mut enforceable = Vec::new();
    for bits in 0u64..1 << n {
        let w = Subset::from_bits(n, bits);
        let wl = WinLoseLabeling::new(w);
        if oracle.decide(&wl).map_err(unsound(Stage::Search))? == Player::One {
            enforceable.push(wl.w);
        }
    }
    enforceable
        .iter()
        .find(|&c| !enforceable.iter().any(|d| pref1.lift_less(c, d)))
        .cloned()
        .ok_or(TransferError::OracleUnsound {
            stage: Stage::Search,
            cause: Unsoundness::EmptyEnforcedSet,
        })
}

/// Starts from all outcomes and, from Player 1's least preferred to most
/// preferred along a linear extension, drops each outcome whose removal
/// leaves a set she still wins. Exactly `|O|` decisions.
pub fn maximal_enforceable_greedy<O: DeterminacyOracle>(
    pref1: &Poset,
    oracle: &O,
) -> Result<Subset, TransferError> {
    let mut kept = Subset::full(oracle.outcome_count());
    for o in pref1.linear_extension() {
        let mut candidate = kept.clone();
        candidate.remove(o);
        let wl = WinLoseLabeling::new(candidate);
        if oracle.decide(&wl).map_err(unsound(Stage::Search))? == Player::One {
            kept = wl.w;
        }
    }
    Ok(kept)
}

/// Builds a Nash equilibrium for the preferences `pref1`, `pref2` from
/// `oracle`'s winning strategies.
pub fn equilibrium_transfer<O: DeterminacyOracle>(
    pref1: &Poset,
    pref2: &Poset,
    oracle: &O,
    mode: Mode,
) -> Result<TransferResult<O::Strategy>, TransferError> {
    let n = oracle.outcome_count();
    for (player, pref) in [(Player::One, pref1), (Player::Two, pref2)] {
        if pref.size() != n {
            return Err(TransferError::PreferenceSize {
                player,
                expected: n,
                found: pref.size(),
            });
        }
    }
    let oracle = CountingOracle::new(oracle);

    let enforced = match mode {
        Mode::Naive => maximal_enforceable_naive(pref1, &oracle)?,
        Mode::Greedy => maximal_enforceable_greedy(pref1, &oracle)?,
    };
    let wl = WinLoseLabeling::new(enforced);
    let (winner, s1) = oracle.strategy(&wl).map_err(unsound(Stage::Enforce))?;
    expect_winner(Stage::Enforce, &wl, Player::One, winner)?;
    let enforced = wl.w;

    let top = pref2
        .maximal_elements(&enforced)
        .map_err(|_| TransferError::OracleUnsound {
            stage: Stage::Enforce,
            cause: Unsoundness::EmptyEnforcedSet,
        })?;
    let m = top
        .iter()
        .next()
        .expect("maximal elements of a nonempty set");
    let replaced = pref1
        .replace_with_preferred(m, &enforced)
        .expect("m is a member of M");

    let wl = WinLoseLabeling::new(replaced);
    let winner = oracle.decide(&wl).map_err(unsound(Stage::Counter))?;
    expect_winner(Stage::Counter, &wl, Player::Two, winner)?;
    let (winner, s2) = oracle.strategy(&wl).map_err(unsound(Stage::Counter))?;
    expect_winner(Stage::Counter, &wl, Player::Two, winner)?;
    let replaced = wl.w;

    let found = oracle.play(&s1, &s2);
    if found != m {
        return Err(TransferError::OracleUnsound {
            stage: Stage::Meet,
            cause: Unsoundness::OutcomeMismatch { expected: m, found },
        });
    }

    Ok(TransferResult {
        s1,
        s2,
        outcome: m,
        enforced,
        replaced,
        calls: oracle.calls(),
    })
}

fn expect_winner(
    stage: Stage,
    wl: &WinLoseLabeling,
    expected: Player,
    found: Player,
) -> Result<(), TransferError> {
    if expected == found {
        Ok(())
    } else {
        Err(TransferError::OracleUnsound {
            stage,
            cause: Unsoundness::WrongWinner {
                labeling: wl.w.clone(),
                expected,
                found,
            },
        })
    }
}

/// Equilibrium of a matrix game via the brute-force matrix oracle.
pub fn solve_matrix_game(
    g: &MatrixGame,
    mode: Mode,
) -> Result<TransferResult<usize>, TransferError> {
    equilibrium_transfer(&g.pref1, &g.pref2, &matrix_oracle(&g.form), mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::{enumerate_enforceable, is_nash, Profile};

    fn sample_form(which: usize) -> MatrixGameForm {
        let m = match which {
            1 => vec![vec![0, 1], vec![1, 0]],
            3 => vec![vec![0, 2], vec![1, 1]],
            4 => vec![vec![0, 2, 1], vec![1, 1, 1]],
            _ => unreachable!(),
        };
        MatrixGameForm::with_indices(if which == 1 { 2 } else { 3 }, m).unwrap()
    }

    #[test]
    fn naive_with_empty_order_is_subset_minimal() {
        let f = sample_form(3);
        let m = maximal_enforceable_naive(&Poset::antichain(3), &matrix_oracle(&f)).unwrap();
        assert_eq!(m, Subset::from_indices(3, [1]));
        // the other subset-minimal enforceable set is {X,Z}; both are maximal for ⊋
        let fam = enumerate_enforceable(&f, Player::One);
        let anti = Poset::antichain(3);
        let xz = Subset::from_indices(3, [0, 2]);
        assert!(!fam.iter().any(|d| anti.lift_less(&xz, d)));
    }

    #[test]
    fn single_outcome() {
        let f = MatrixGameForm::with_indices(1, vec![vec![0, 0]]).unwrap();
        let base = matrix_oracle(&f);
        let o = CountingOracle::new(&base);
        let m = maximal_enforceable_greedy(&Poset::antichain(1), &o).unwrap();
        assert_eq!(m, Subset::full(1));
        assert_eq!(o.calls().decisions, 1);
        assert_eq!(
            maximal_enforceable_naive(&Poset::antichain(1), &matrix_oracle(&f)).unwrap(),
            Subset::full(1)
        );
    }

    #[test]
    fn greedy_matches_naive_on_form_d() {
        let f = sample_form(4);
        let oracle = matrix_oracle(&f);
        for pref in [
            Poset::antichain(3),
            Poset::chain(3),
            Poset::chain(3).inverse(),
        ] {
            let g = maximal_enforceable_greedy(&pref, &oracle).unwrap();
            let n = maximal_enforceable_naive(&pref, &oracle).unwrap();
            assert!(!pref.lift_less(&g, &n) && !pref.lift_less(&n, &g));
            assert_eq!(oracle.decide(&WinLoseLabeling::new(g)), Ok(Player::One));
        }
    }

    #[test]
    fn constant_row_gives_equilibrium() {
        // row 1 is constant; any preferences
        let f = MatrixGameForm::with_indices(3, vec![vec![0, 1, 2], vec![2, 2, 2]]).unwrap();
        for (p1, p2) in [
            (Poset::chain(3), Poset::chain(3)),
            (Poset::chain(3).inverse(), Poset::antichain(3)),
        ] {
            let g = MatrixGame::new(f.clone(), p1, p2).unwrap();
            for mode in [Mode::Naive, Mode::Greedy] {
                let r = solve_matrix_game(&g, mode).unwrap();
                assert!(is_nash(&g, Profile::new(r.s1, r.s2)));
                assert!(r.enforced.contains(r.outcome) && !r.replaced.contains(r.outcome));
                assert_eq!(r.calls.extractions, 2);
            }
        }
    }

    #[test]
    fn undetermined_form_is_rejected() {
        // payoffs (2,1) (0,0) / (0,0) (1,2), with (0,0) as a single outcome
        let f = MatrixGameForm::with_indices(3, vec![vec![0, 1], vec![1, 2]]).unwrap();
        let p1 = validate(&[(1, 2), (2, 0), (1, 0)]);
        let p2 = validate(&[(1, 0), (0, 2), (1, 2)]);
        let g = MatrixGame::new(f, p1, p2).unwrap();
        for mode in [Mode::Naive, Mode::Greedy] {
            match solve_matrix_game(&g, mode) {
                Err(TransferError::OracleUnsound { .. }) => {}
                other => panic!("expected an unsound oracle, got {other:?}"),
            }
        }
    }

    fn validate(pairs: &[(usize, usize)]) -> Poset {
        let r = crate::poset::BinaryRelation::from_pairs(3, pairs.iter().copied()).unwrap();
        crate::poset::validate_order(&r).unwrap()
    }

    #[test]
    fn matrix_oracle_reports_undetermined_labeling() {
        let o = matrix_oracle(&sample_form(1));
        let y = Subset::from_indices(2, [1]);
        assert_eq!(
            o.decide(&WinLoseLabeling::new(y.clone())),
            Err(OracleError::NotDetermined(y))
        );
        let single = matrix_oracle(&MatrixGameForm::with_indices(1, vec![vec![0]]).unwrap());
        assert_eq!(
            single.decide(&WinLoseLabeling::new(Subset::full(1))),
            Ok(Player::One)
        );
        assert_eq!(
            single.decide(&WinLoseLabeling::new(Subset::empty(1))),
            Ok(Player::Two)
        );
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("naive".parse::<Mode>(), Ok(Mode::Naive));
        assert_eq!("greedy".parse::<Mode>(), Ok(Mode::Greedy));
        assert!("fast".parse::<Mode>().is_err());
    }
}
