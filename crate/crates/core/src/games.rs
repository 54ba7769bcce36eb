//! Two-player game forms in normal form, Nash equilibria and the derived
//! win/lose games.

use std::fmt;

use num_rational::Rational64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poset::{validate_order, BinaryRelation, Poset, Preference, Subset};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Player {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::One => Player::Two,
            Player::Two => Player::One,
        }
    }

    pub fn number(self) -> u8 {
        match self {
            Player::One => 1,
            Player::Two => 2,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Player {}", self.number())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("a game form needs at least one row, one column and one outcome")]
    Empty,
    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedMatrix {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("outcome index {index} out of range ({count} outcomes)")]
    OutcomeOutOfRange { index: usize, count: usize },
    #[error("{player} has no strategy {index} (only {count})")]
    StrategyOutOfRange {
        player: Player,
        index: usize,
        count: usize,
    },
    #[error("preference of {player} ranges over {found} outcomes, the form has {expected}")]
    PreferenceSize {
        player: Player,
        expected: usize,
        found: usize,
    },
    #[error("expected {expected} entries, found {found}")]
    SizeMismatch { expected: usize, found: usize },
}

/// Strategy sets `0..rows` and `0..cols` with an outcome table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixGameForm {
    rows: usize,
    cols: usize,
    labels: Vec<String>,
    table: Vec<usize>,
}

impl MatrixGameForm {
    pub fn new(labels: Vec<String>, matrix: Vec<Vec<usize>>) -> Result<Self, GameError> {
        let rows = matrix.len();
        let cols = matrix.first().map_or(0, Vec::len);
        if rows == 0 || cols == 0 || labels.is_empty() {
            return Err(GameError::Empty);
        }
        let mut table = Vec::with_capacity(rows * cols);
        for (row, entries) in matrix.into_iter().enumerate() {
            if entries.len() != cols {
                return Err(GameError::RaggedMatrix {
                    row,
                    expected: cols,
                    found: entries.len(),
                });
            }
            for o in entries {
                if o >= labels.len() {
                    return Err(GameError::OutcomeOutOfRange {
                        index: o,
                        count: labels.len(),
                    });
                }
                table.push(o);
            }
        }
        Ok(MatrixGameForm {
            rows,
            cols,
            labels,
            table,
        })
    }

    /// Outcomes labelled `0..outcomes`.
    pub fn with_indices(outcomes: usize, matrix: Vec<Vec<usize>>) -> Result<Self, GameError> {
        MatrixGameForm::new((0..outcomes).map(|i| i.to_string()).collect(), matrix)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn outcome_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, o: usize) -> &str {
        &self.labels[o]
    }

    pub fn strategy_count(&self, player: Player) -> usize {
        match player {
            Player::One => self.rows,
            Player::Two => self.cols,
        }
    }

    /// Unchecked lookup; panics outside the table.
    pub fn at(&self, s1: usize, s2: usize) -> usize {
        assert!(
            s1 < self.rows && s2 < self.cols,
            "profile ({s1},{s2}) outside the table"
        );
        self.table[s1 * self.cols + s2]
    }

    pub fn outcome(&self, p: Profile) -> Result<usize, GameError> {
        self.check_strategy(Player::One, p.s1)?;
        self.check_strategy(Player::Two, p.s2)?;
        Ok(self.at(p.s1, p.s2))
    }

    pub fn matrix(&self) -> Vec<Vec<usize>> {
        self.table
            .chunks(self.cols)
            .map(<[usize]>::to_vec)
            .collect()
    }

    fn check_strategy(&self, player: Player, index: usize) -> Result<(), GameError> {
        let count = self.strategy_count(player);
        if index < count {
            Ok(())
        } else {
            Err(GameError::StrategyOutOfRange {
                player,
                index,
                count,
            })
        }
    }

    pub fn profiles(&self) -> impl Iterator<Item = Profile> + '_ {
        (0..self.rows).flat_map(move |s1| (0..self.cols).map(move |s2| Profile { s1, s2 }))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Profile {
    pub s1: usize,
    pub s2: usize,
}

impl Profile {
    pub fn new(s1: usize, s2: usize) -> Self {
        Profile { s1, s2 }
    }
}

/// A game form with a strict partial order preference for each player.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixGame {
    pub form: MatrixGameForm,
    pub pref1: Poset,
    pub pref2: Poset,
}

impl MatrixGame {
    pub fn new(form: MatrixGameForm, pref1: Poset, pref2: Poset) -> Result<Self, GameError> {
        for (player, pref) in [(Player::One, &pref1), (Player::Two, &pref2)] {
            if pref.size() != form.outcome_count() {
                return Err(GameError::PreferenceSize {
                    player,
                    expected: form.outcome_count(),
                    found: pref.size(),
                });
            }
        }
        Ok(MatrixGame { form, pref1, pref2 })
    }

    pub fn pref(&self, player: Player) -> &Poset {
        match player {
            Player::One => &self.pref1,
            Player::Two => &self.pref2,
        }
    }
}

/// The outcomes mapped to "Player 1 wins"; every other outcome is a win for
/// Player 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WinLoseLabeling {
    pub w: Subset,
}

impl WinLoseLabeling {
    pub fn new(w: Subset) -> Self {
        WinLoseLabeling { w }
    }

    pub fn winner_of(&self, outcome: usize) -> Player {
        if self.w.contains(outcome) {
            Player::One
        } else {
            Player::Two
        }
    }
}

/// One exact payoff pair per outcome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PayoffTable {
    pay: Vec<(Rational64, Rational64)>,
}

impl PayoffTable {
    pub fn new(pay: Vec<(Rational64, Rational64)>) -> Self {
        PayoffTable { pay }
    }

    pub fn from_integers(pairs: &[(i64, i64)]) -> Self {
        PayoffTable {
            pay: pairs
                .iter()
                .map(|&(a, b)| (Rational64::from_integer(a), Rational64::from_integer(b)))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.pay.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pay.is_empty()
    }

    pub fn pair(&self, o: usize) -> (Rational64, Rational64) {
        self.pay[o]
    }

    pub fn of(&self, player: Player, o: usize) -> Rational64 {
        match player {
            Player::One => self.pay[o].0,
            Player::Two => self.pay[o].1,
        }
    }

    pub fn pairs(&self) -> &[(Rational64, Rational64)] {
        &self.pay
    }
}

/// Each player prefers a strictly greater own payoff component.
pub fn payoff_prefs(payoffs: &PayoffTable) -> (Poset, Poset) {
    let n = payoffs.len();
    let order = |player| {
        let mut r = BinaryRelation::new(n);
        for x in 0..n {
            for y in 0..n {
                if payoffs.of(player, x) < payoffs.of(player, y) {
                    r.add(x, y).expect("indices in range");
                }
            }
        }
        validate_order(&r).expect("comparison of numbers is a strict order")
    };
    (order(Player::One), order(Player::Two))
}

/// Nash stability against arbitrary preference relations. Panics if the
/// profile is outside the table.
pub fn is_nash_with<P1: Preference, P2: Preference>(
    form: &MatrixGameForm,
    pref1: &P1,
    pref2: &P2,
    p: Profile,
) -> bool {
    let here = form.at(p.s1, p.s2);
    (0..form.rows()).all(|r| !pref1.less(here, form.at(r, p.s2)))
        && (0..form.cols()).all(|c| !pref2.less(here, form.at(p.s1, c)))
}

pub fn is_nash(g: &MatrixGame, p: Profile) -> bool {
    is_nash_with(&g.form, &g.pref1, &g.pref2, p)
}

/// All Nash equilibria in row-major order.
pub fn enumerate_nash(g: &MatrixGame) -> Vec<Profile> {
    g.form.profiles().filter(|&p| is_nash(g, p)).collect()
}

/// Index of the outcome "(1,0)" in a derived win/lose game.
pub const PLAYER1_WINS: usize = 0;
/// Index of the outcome "(0,1)" in a derived win/lose game.
pub const PLAYER2_WINS: usize = 1;

/// The two win/lose preferences: `(0,1) < (1,0)` for Player 1 and the
/// reverse for Player 2.
pub fn winlose_prefs() -> (Poset, Poset) {
    let labels = vec!["(1,0)".to_string(), "(0,1)".to_string()];
    let p1 =
        validate_order(&BinaryRelation::from_pairs(2, [(PLAYER2_WINS, PLAYER1_WINS)]).unwrap())
            .unwrap()
            .with_labels(labels)
            .unwrap();
    let p2 = p1.inverse();
    (p1, p2)
}

/// The outcome each player ranks highest in a win/lose game.
pub fn preferred_outcome(player: Player) -> usize {
    match player {
        Player::One => PLAYER1_WINS,
        Player::Two => PLAYER2_WINS,
    }
}

/// The win/lose game `wl ∘ v` over the outcomes `{(1,0), (0,1)}`.
pub fn derive_winlose(form: &MatrixGameForm, wl: &WinLoseLabeling) -> MatrixGame {
    let matrix = (0..form.rows())
        .map(|r| {
            (0..form.cols())
                .map(|c| preferred_outcome(wl.winner_of(form.at(r, c))))
                .collect()
        })
        .collect();
    let (p1, p2) = winlose_prefs();
    let form = MatrixGameForm::new(p1.labels().to_vec(), matrix).expect("nonempty form");
    MatrixGame::new(form, p1, p2).expect("two-outcome preferences")
}

/// The exact set of outcomes reachable once `player` fixes `strategy`.
pub fn enforce_set(
    form: &MatrixGameForm,
    player: Player,
    strategy: usize,
) -> Result<Subset, GameError> {
    form.check_strategy(player, strategy)?;
    let n = form.outcome_count();
    Ok(match player {
        Player::One => Subset::from_indices(n, (0..form.cols()).map(|c| form.at(strategy, c))),
        Player::Two => Subset::from_indices(n, (0..form.rows()).map(|r| form.at(r, strategy))),
    })
}

/// The smallest strategy of `player` whose enforced set lies inside `target`.
pub fn can_enforce(form: &MatrixGameForm, player: Player, target: &Subset) -> Option<usize> {
    (0..form.strategy_count(player)).find(|&s| {
        enforce_set(form, player, s)
            .expect("strategy in range")
            .is_subset_of(target)
    })
}

/// A winning strategy of the derived win/lose game, if any. Player 1 is
/// tried first, then the smallest index.
pub fn winning_strategy(form: &MatrixGameForm, wl: &WinLoseLabeling) -> Option<(Player, usize)> {
    if let Some(r) =
        (0..form.rows()).find(|&r| (0..form.cols()).all(|c| wl.w.contains(form.at(r, c))))
    {
        return Some((Player::One, r));
    }
    (0..form.cols())
        .find(|&c| (0..form.rows()).all(|r| !wl.w.contains(form.at(r, c))))
        .map(|c| (Player::Two, c))
}

fn all_subsets(n: usize) -> impl Iterator<Item = Subset> {
    assert!(n < 64, "enumerating 2^{n} subsets is infeasible");
    (0u64..1 << n).map(move |bits| Subset::from_bits(n, bits))
}

/// The first labeling (in increasing bit-vector order) whose win/lose game
/// has no winning strategy.
pub fn find_undetermined_labeling(form: &MatrixGameForm) -> Option<WinLoseLabeling> {
    all_subsets(form.outcome_count())
        .map(WinLoseLabeling::new)
        .find(|wl| winning_strategy(form, wl).is_none())
}

/// Whether every derived win/lose game is determined. Exponential in the
/// number of outcomes.
pub fn is_determined_form(form: &MatrixGameForm) -> bool {
    find_undetermined_labeling(form).is_none()
}

/// Both sides of the enforceability characterization of determinacy,
/// evaluated independently.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitReport {
    pub determined: bool,
    pub every_subset_split: bool,
    /// First labeling without a winning strategy.
    pub undetermined_labeling: Option<Subset>,
    /// First `P` such that neither Player 1 enforces `P` nor Player 2 its complement.
    pub unsplit_subset: Option<Subset>,
}

impl SplitReport {
    pub fn agrees(&self) -> bool {
        self.determined == self.every_subset_split
    }
}

pub fn split_report(form: &MatrixGameForm) -> SplitReport {
    let undetermined = find_undetermined_labeling(form).map(|wl| wl.w);
    let unsplit = all_subsets(form.outcome_count()).find(|p| {
        can_enforce(form, Player::One, p).is_none()
            && can_enforce(form, Player::Two, &p.complement()).is_none()
    });
    SplitReport {
        determined: undetermined.is_none(),
        every_subset_split: unsplit.is_none(),
        undetermined_labeling: undetermined,
        unsplit_subset: unsplit,
    }
}

/// Checks that determinacy of the form coincides with "each subset is
/// enforceable by Player 1 or its complement by Player 2".
pub fn check_split_characterization(form: &MatrixGameForm) -> bool {
    split_report(form).agrees()
}

/// Every outcome set `player` can enforce (an upward-closed family), in
/// increasing bit-vector order.
pub fn enumerate_enforceable(form: &MatrixGameForm, player: Player) -> Vec<Subset> {
    all_subsets(form.outcome_count())
        .filter(|p| can_enforce(form, player, p).is_some())
        .collect()
}

/// Bounds for [`generate_tree_game`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeGameConfig {
    pub depth: usize,
    pub branching: usize,
    pub outcomes: usize,
    /// Trees whose reduced normal form exceeds this many strategies for
    /// either player are resampled.
    pub max_strategies: usize,
}

impl Default for TreeGameConfig {
    fn default() -> Self {
        TreeGameConfig {
            depth: 3,
            branching: 2,
            outcomes: 4,
            max_strategies: 8,
        }
    }
}

enum TreeNode {
    Leaf(usize),
    Choice { owner: Player, children: Vec<usize> },
}

struct Tree {
    nodes: Vec<TreeNode>,
}

impl Tree {
    fn random(rng: &mut ChaCha8Rng, cfg: &TreeGameConfig) -> Tree {
        let mut tree = Tree { nodes: Vec::new() };
        tree.grow(rng, cfg, 0);
        tree
    }

    fn grow(&mut self, rng: &mut ChaCha8Rng, cfg: &TreeGameConfig, depth: usize) -> usize {
        let id = self.nodes.len();
        let internal = depth == 0 || (depth < cfg.depth && rng.random_bool(0.7));
        if !internal {
            self.nodes
                .push(TreeNode::Leaf(rng.random_range(0..cfg.outcomes)));
            return id;
        }
        let owner = if depth.is_multiple_of(2) {
            Player::One
        } else {
            Player::Two
        };
        self.nodes.push(TreeNode::Choice {
            owner,
            children: Vec::new(),
        });
        let arity = rng.random_range(1..=cfg.branching);
        let children = (0..arity).map(|_| self.grow(rng, cfg, depth + 1)).collect();
        if let TreeNode::Choice { children: slot, .. } = &mut self.nodes[id] {
            *slot = children;
        }
        id
    }

    fn plan_count(&self, node: usize, player: Player) -> usize {
        match &self.nodes[node] {
            TreeNode::Leaf(_) => 1,
            TreeNode::Choice { owner, children } if *owner == player => {
                children.iter().fold(0usize, |acc, &c| {
                    acc.saturating_add(self.plan_count(c, player))
                })
            }
            TreeNode::Choice { children, .. } => children.iter().fold(1usize, |acc, &c| {
                acc.saturating_mul(self.plan_count(c, player))
            }),
        }
    }

    // A reduced strategy: choices at the player's nodes that remain
    // reachable under the strategy itself.
    fn plans(&self, node: usize, player: Player) -> Vec<Vec<(usize, usize)>> {
        match &self.nodes[node] {
            TreeNode::Leaf(_) => vec![Vec::new()],
            TreeNode::Choice { owner, children } if *owner == player => children
                .iter()
                .enumerate()
                .flat_map(|(i, &c)| {
                    self.plans(c, player).into_iter().map(move |mut plan| {
                        plan.push((node, i));
                        plan
                    })
                })
                .collect(),
            TreeNode::Choice { children, .. } => {
                children.iter().fold(vec![Vec::new()], |acc, &c| {
                    let sub = self.plans(c, player);
                    acc.iter()
                        .flat_map(|prefix| {
                            sub.iter().map(move |tail| {
                                let mut plan = prefix.clone();
                                plan.extend_from_slice(tail);
                                plan
                            })
                        })
                        .collect()
                })
            }
        }
    }

    fn play(&self, plan1: &[(usize, usize)], plan2: &[(usize, usize)]) -> usize {
        let mut node = 0;
        loop {
            match &self.nodes[node] {
                TreeNode::Leaf(o) => return *o,
                TreeNode::Choice { owner, children } => {
                    let plan = if *owner == Player::One { plan1 } else { plan2 };
                    let choice = plan
                        .iter()
                        .find(|(n, _)| *n == node)
                        .map(|&(_, i)| i)
                        .expect("reduced plans cover every node they reach");
                    node = children[choice];
                }
            }
        }
    }
}

/// The reduced normal form of a random finite perfect-information game
/// tree. Player 1 moves at even depths, Player 2 at odd depths, and leaves
/// carry uniformly drawn outcomes. Such forms are always determined.
///
/// Deterministic in `seed`.
pub fn generate_tree_game(seed: u64, cfg: &TreeGameConfig) -> MatrixGameForm {
    assert!(
        cfg.depth >= 1 && cfg.branching >= 1 && cfg.outcomes >= 1 && cfg.max_strategies >= 1,
        "tree bounds must be positive"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let tree = Tree::random(&mut rng, cfg);
        if tree.plan_count(0, Player::One) > cfg.max_strategies
            || tree.plan_count(0, Player::Two) > cfg.max_strategies
        {
            continue;
        }
        let rows = tree.plans(0, Player::One);
        let cols = tree.plans(0, Player::Two);
        let matrix = rows
            .iter()
            .map(|p1| cols.iter().map(|p2| tree.play(p1, p2)).collect())
            .collect();
        return MatrixGameForm::with_indices(cfg.outcomes, matrix).expect("nonempty tree form");
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    // X=0, Y=1, Z=2
    fn sample_form(which: usize) -> MatrixGameForm {
        let m = match which {
            1 => vec![vec![0, 1], vec![1, 0]],
            2 => vec![vec![0, 1, 2], vec![1, 2, 0]],
            3 => vec![vec![0, 2], vec![1, 1]],
            4 => vec![vec![0, 2, 1], vec![1, 1, 1]],
            _ => unreachable!(),
        };
        let names = if which == 1 {
            labels(&["X", "Y"])
        } else {
            labels(&["X", "Y", "Z"])
        };
        MatrixGameForm::new(names, m).unwrap()
    }

    #[test]
    fn form_validation() {
        assert_eq!(
            MatrixGameForm::with_indices(1, vec![]),
            Err(GameError::Empty)
        );
        assert!(matches!(
            MatrixGameForm::with_indices(2, vec![vec![0, 1], vec![0]]),
            Err(GameError::RaggedMatrix { row: 1, .. })
        ));
        assert!(matches!(
            MatrixGameForm::with_indices(2, vec![vec![0, 2]]),
            Err(GameError::OutcomeOutOfRange { index: 2, .. })
        ));
    }

    #[test]
    fn outcome_lookup() {
        let f = sample_form(3);
        assert_eq!(f.label(f.outcome(Profile::new(0, 1)).unwrap()), "Z");
        let single = MatrixGameForm::with_indices(1, vec![vec![0]]).unwrap();
        assert_eq!(single.outcome(Profile::new(0, 0)), Ok(0));
        assert!(matches!(
            f.outcome(Profile::new(2, 0)),
            Err(GameError::StrategyOutOfRange {
                player: Player::One,
                ..
            })
        ));
    }

    #[test]
    fn winlose_preferences_are_strict_and_tops_undominated() {
        let (p1, p2) = winlose_prefs();
        assert!(p1.less(PLAYER2_WINS, PLAYER1_WINS));
        assert!(!p1.less(PLAYER1_WINS, PLAYER2_WINS));
        assert!(p2.less(PLAYER1_WINS, PLAYER2_WINS));
        for (player, pref) in [(Player::One, &p1), (Player::Two, &p2)] {
            assert!(validate_order(&pref.relation()).is_ok());
            for o in 0..2 {
                assert!(!pref.less(preferred_outcome(player), o));
            }
        }
    }

    #[test]
    fn derive_winlose_examples() {
        let f1 = sample_form(1);
        let wl = WinLoseLabeling::new(Subset::from_indices(2, [1])); // Y -> (1,0)
        let g = derive_winlose(&f1, &wl);
        assert_eq!(g.form.matrix(), vec![vec![1, 0], vec![0, 1]]);
        assert!(enumerate_nash(&g).is_empty());

        let all = derive_winlose(&f1, &WinLoseLabeling::new(Subset::full(2)));
        assert!(all
            .form
            .matrix()
            .iter()
            .flatten()
            .all(|&o| o == PLAYER1_WINS));

        let f4 = sample_form(4);
        let g4 = derive_winlose(&f4, &WinLoseLabeling::new(Subset::from_indices(3, [1])));
        assert_eq!(g4.form.matrix()[1], vec![PLAYER1_WINS; 3]);
    }

    #[test]
    fn winning_strategy_examples() {
        // bottom row always yields (1,0)
        let f =
            MatrixGameForm::new(labels(&["(1,0)", "(0,1)"]), vec![vec![1, 1], vec![0, 0]]).unwrap();
        let wl = WinLoseLabeling::new(Subset::from_indices(2, [0]));
        assert_eq!(winning_strategy(&f, &wl), Some((Player::One, 1)));
        let f1 = sample_form(1);
        assert_eq!(
            winning_strategy(&f1, &WinLoseLabeling::new(Subset::from_indices(2, [1]))),
            None
        );
        let single = MatrixGameForm::with_indices(1, vec![vec![0]]).unwrap();
        assert_eq!(
            winning_strategy(&single, &WinLoseLabeling::new(Subset::full(1))),
            Some((Player::One, 0))
        );
        assert_eq!(
            winning_strategy(&single, &WinLoseLabeling::new(Subset::empty(1))),
            Some((Player::Two, 0))
        );
    }

    #[test]
    fn enforce_examples() {
        let f3 = sample_form(3);
        assert_eq!(
            enforce_set(&f3, Player::One, 1).unwrap(),
            Subset::from_indices(3, [1])
        );
        assert!(enforce_set(&f3, Player::Two, 2).is_err());
        let f2 = sample_form(2);
        assert_eq!(
            can_enforce(&f2, Player::One, &Subset::from_indices(3, [0, 1])),
            None
        );
        assert_eq!(can_enforce(&f2, Player::One, &Subset::full(3)), Some(0));
        assert_eq!(can_enforce(&f2, Player::Two, &Subset::empty(3)), None);
    }

    #[test]
    fn small_form_determinacy() {
        let verdicts: Vec<bool> = (1..=4)
            .map(|i| is_determined_form(&sample_form(i)))
            .collect();
        assert_eq!(verdicts, vec![false, false, true, true]);
        for i in 1..=4 {
            assert!(check_split_characterization(&sample_form(i)));
        }
        let report = split_report(&sample_form(2));
        assert_eq!(report.unsplit_subset, Some(Subset::from_indices(3, [0, 1])));
        let r3 = split_report(&sample_form(3));
        assert!(r3.determined && r3.every_subset_split);
    }

    #[test]
    fn winner_depends_on_labeling() {
        let f3 = sample_form(3);
        let winners: Vec<Player> = (0..8)
            .map(|b| {
                winning_strategy(&f3, &WinLoseLabeling::new(Subset::from_bits(3, b)))
                    .unwrap()
                    .0
            })
            .collect();
        assert!(winners.contains(&Player::One) && winners.contains(&Player::Two));
    }

    #[test]
    fn enforceable_family_of_form_c() {
        let fam = enumerate_enforceable(&sample_form(3), Player::One);
        let y = Subset::from_indices(3, [1]);
        let xz = Subset::from_indices(3, [0, 2]);
        let expected: Vec<Subset> = (0..8)
            .map(|b| Subset::from_bits(3, b))
            .filter(|p| y.is_subset_of(p) || xz.is_subset_of(p))
            .collect();
        assert_eq!(fam, expected);
        assert!(fam.contains(&Subset::full(3)));
        assert!(!fam.contains(&Subset::empty(3)));
    }

    #[test]
    fn tree_games() {
        let cfg = TreeGameConfig {
            depth: 1,
            branching: 3,
            outcomes: 3,
            max_strategies: 8,
        };
        for seed in 0..20 {
            let f = generate_tree_game(seed, &cfg);
            assert_eq!(f.cols(), 1);
        }
        let cfg = TreeGameConfig::default();
        assert_eq!(generate_tree_game(42, &cfg), generate_tree_game(42, &cfg));
        for seed in 0..50 {
            let f = generate_tree_game(seed, &cfg);
            assert!(f.rows() <= 8 && f.cols() <= 8);
            assert!(is_determined_form(&f), "seed {seed}");
        }
    }
}
