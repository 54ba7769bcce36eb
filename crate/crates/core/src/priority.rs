//! Priority games: a parity-game arena whose plays pay off according to the
//! least priority seen infinitely often.
//!
//! Win/lose games derived from a priority game are parity games after a
//! monotone re-encoding of the priorities, so a parity solver with
//! positional strategies acts as the determinacy oracle, and the transfer
//! yields positional secure equilibria.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_rational::Rational64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::games::{PayoffTable, Player, WinLoseLabeling};
use crate::poset::Subset;
use crate::secure::{malevolent_prefs, secure_equilibrium};
use crate::transfer::{DeterminacyOracle, Mode, OracleError, TransferError, TransferResult};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArenaError {
    #[error("an arena needs at least one vertex")]
    Empty,
    #[error("vertex {0} has no successor")]
    DeadEnd(usize),
    #[error("vertex {vertex} has successor {successor}, outside the arena")]
    SuccessorOutOfRange { vertex: usize, successor: usize },
    #[error("initial vertex {0} is outside the arena")]
    InitialOutOfRange(usize),
    #[error("per-vertex tables disagree in length")]
    LengthMismatch,
    #[error("priority {0} occurs in the arena but has no payoff")]
    MissingPayoff(u32),
    #[error("payoff given for priority {0}, which no vertex carries")]
    UnusedPayoff(u32),
    #[error("strategy of {player} is invalid at vertex {vertex}")]
    InvalidStrategy { player: Player, vertex: usize },
}

/// Vertices `0..n`, each owned by a player, carrying a priority and at least
/// one successor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arena {
    owner: Vec<Player>,
    succ: Vec<Vec<usize>>,
    priority: Vec<u32>,
    initial: usize,
    pred: Vec<Vec<usize>>,
}

impl Arena {
    pub fn new(
        owner: Vec<Player>,
        succ: Vec<Vec<usize>>,
        priority: Vec<u32>,
        initial: usize,
    ) -> Result<Self, ArenaError> {
        let n = owner.len();
        if n == 0 {
            return Err(ArenaError::Empty);
        }
        if succ.len() != n || priority.len() != n {
            return Err(ArenaError::LengthMismatch);
        }
        if initial >= n {
            return Err(ArenaError::InitialOutOfRange(initial));
        }
        let mut pred = vec![Vec::new(); n];
        for (v, out) in succ.iter().enumerate() {
            if out.is_empty() {
                return Err(ArenaError::DeadEnd(v));
            }
            for &w in out {
                if w >= n {
                    return Err(ArenaError::SuccessorOutOfRange {
                        vertex: v,
                        successor: w,
                    });
                }
                pred[w].push(v);
            }
        }
        Ok(Arena {
            owner,
            succ,
            priority,
            initial,
            pred,
        })
    }

    pub fn len(&self) -> usize {
        self.owner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.owner.is_empty()
    }

    pub fn owner(&self, v: usize) -> Player {
        self.owner[v]
    }

    pub fn successors(&self, v: usize) -> &[usize] {
        &self.succ[v]
    }

    pub fn predecessors(&self, v: usize) -> &[usize] {
        &self.pred[v]
    }

    pub fn priority(&self, v: usize) -> u32 {
        self.priority[v]
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn with_initial(&self, initial: usize) -> Result<Arena, ArenaError> {
        if initial >= self.len() {
            return Err(ArenaError::InitialOutOfRange(initial));
        }
        Ok(Arena {
            initial,
            ..self.clone()
        })
    }

    /// Occurring priorities, ascending.
    pub fn priorities(&self) -> Vec<u32> {
        self.priority
            .iter()
            .copied()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    pub fn vertices_of(&self, player: Player) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&v| self.owner[v] == player)
    }
}

/// An arena with a payoff pair for every occurring priority.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PriorityGame {
    arena: Arena,
    payoff: BTreeMap<u32, (Rational64, Rational64)>,
}

impl PriorityGame {
    pub fn new(
        arena: Arena,
        payoff: BTreeMap<u32, (Rational64, Rational64)>,
    ) -> Result<Self, ArenaError> {
        let occurring = arena.priorities();
        if let Some(&p) = occurring.iter().find(|p| !payoff.contains_key(p)) {
            return Err(ArenaError::MissingPayoff(p));
        }
        if let Some(&p) = payoff.keys().find(|p| occurring.binary_search(p).is_err()) {
            return Err(ArenaError::UnusedPayoff(p));
        }
        Ok(PriorityGame { arena, payoff })
    }

    pub fn arena(&self) -> &Arena {
        &self.arena
    }

    pub fn payoff(&self) -> &BTreeMap<u32, (Rational64, Rational64)> {
        &self.payoff
    }

    /// Outcome `i` of the game is the `i`-th smallest occurring priority.
    pub fn outcome_priorities(&self) -> Vec<u32> {
        self.payoff.keys().copied().collect()
    }

    pub fn outcome_index(&self, priority: u32) -> Option<usize> {
        self.payoff.keys().position(|&p| p == priority)
    }

    pub fn payoff_table(&self) -> PayoffTable {
        PayoffTable::new(self.payoff.values().copied().collect())
    }

    pub fn with_initial(&self, initial: usize) -> Result<PriorityGame, ArenaError> {
        Ok(PriorityGame {
            arena: self.arena.with_initial(initial)?,
            payoff: self.payoff.clone(),
        })
    }
}

/// A history-free strategy: one successor per vertex of its player.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PositionalStrategy {
    player: Player,
    choice: Vec<Option<usize>>,
}

impl PositionalStrategy {
    /// `choice[v]` must be `Some(successor)` exactly at the player's vertices.
    pub fn new(
        arena: &Arena,
        player: Player,
        choice: Vec<Option<usize>>,
    ) -> Result<Self, ArenaError> {
        if choice.len() != arena.len() {
            return Err(ArenaError::LengthMismatch);
        }
        for (v, c) in choice.iter().enumerate() {
            let ok = match (arena.owner(v) == player, c) {
                (true, Some(w)) => arena.successors(v).contains(w),
                (false, None) => true,
                _ => false,
            };
            if !ok {
                return Err(ArenaError::InvalidStrategy { player, vertex: v });
            }
        }
        Ok(PositionalStrategy { player, choice })
    }

    pub fn player(&self) -> Player {
        self.player
    }

    pub fn choice(&self, v: usize) -> Option<usize> {
        self.choice.get(v).copied().flatten()
    }

    pub fn choices(&self) -> &[Option<usize>] {
        &self.choice
    }
}

/// Follows the play from `start` in which each vertex moves to `next(v)`
/// and returns the least priority on the cycle it ends in.
pub fn lasso_min_priority(arena: &Arena, start: usize, next: impl Fn(usize) -> usize) -> u32 {
    let mut seen_at = vec![usize::MAX; arena.len()];
    let mut path = Vec::new();
    let mut v = start;
    while seen_at[v] == usize::MAX {
        seen_at[v] = path.len();
        path.push(v);
        v = next(v);
    }
    path[seen_at[v]..]
        .iter()
        .map(|&u| arena.priority(u))
        .min()
        .expect("a cycle is nonempty")
}

/// The least priority seen infinitely often when both positional strategies
/// are followed from the initial vertex.
pub fn realized_priority(arena: &Arena, s1: &PositionalStrategy, s2: &PositionalStrategy) -> u32 {
    lasso_min_priority(arena, arena.initial(), |v| {
        let s = if arena.owner(v) == s1.player() {
            s1
        } else {
            s2
        };
        s.choice(v)
            .expect("strategies cover their owner's vertices")
    })
}

/// An arena whose priorities encode a win/lose labeling: Player 1 wins a
/// play iff the least priority seen infinitely often is even.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityInstance {
    pub arena: Arena,
}

/// Re-encodes "the least recurring priority lies in `w`" as a min-parity
/// condition, with a weakly monotone map on the occurring priorities.
pub fn reparity_encode(arena: &Arena, w: &BTreeSet<u32>) -> ParityInstance {
    let mut remap = BTreeMap::new();
    let mut prev: Option<u32> = None;
    for p in arena.priorities() {
        let even_wanted = w.contains(&p);
        let q = match prev {
            None => u32::from(!even_wanted),
            Some(q) if (q % 2 == 0) == even_wanted => q,
            Some(q) => q + 1,
        };
        remap.insert(p, q);
        prev = Some(q);
    }
    let priority = arena.priority.iter().map(|p| remap[p]).collect();
    ParityInstance {
        arena: Arena {
            priority,
            ..arena.clone()
        },
    }
}

/// Winning regions and positional winning strategies of a parity game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParitySolution {
    pub winner: Vec<Player>,
    pub strategy1: PositionalStrategy,
    pub strategy2: PositionalStrategy,
}

impl ParitySolution {
    pub fn strategy(&self, player: Player) -> &PositionalStrategy {
        match player {
            Player::One => &self.strategy1,
            Player::Two => &self.strategy2,
        }
    }

    pub fn region(&self, player: Player) -> Vec<usize> {
        (0..self.winner.len())
            .filter(|&v| self.winner[v] == player)
            .collect()
    }
}

fn parity_owner(priority: u32) -> Player {
    if priority.is_multiple_of(2) {
        Player::One
    } else {
        Player::Two
    }
}

fn index(p: Player) -> usize {
    match p {
        Player::One => 0,
        Player::Two => 1,
    }
}

const UNSET: usize = usize::MAX;

struct Zielonka<'a> {
    arena: &'a Arena,
}

impl Zielonka<'_> {
    /// Adds to `target` every alive vertex from which `player` can force a
    /// visit to it, recording attracting moves in `choice`.
    fn attractor(
        &self,
        alive: &[bool],
        player: Player,
        target: &[bool],
        choice: &mut [usize],
    ) -> Vec<bool> {
        let a = self.arena;
        let mut attr = target.to_vec();
        let mut escapes: Vec<usize> = (0..a.len())
            .map(|v| {
                if alive[v] {
                    a.succ[v].iter().filter(|&&w| alive[w]).count()
                } else {
                    0
                }
            })
            .collect();
        let mut queue: VecDeque<usize> = (0..a.len()).filter(|&v| attr[v]).collect();
        while let Some(u) = queue.pop_front() {
            for &v in &a.pred[u] {
                if !alive[v] || attr[v] {
                    continue;
                }
                if a.owner[v] == player {
                    attr[v] = true;
                    choice[v] = u;
                    queue.push_back(v);
                } else {
                    escapes[v] -= 1;
                    if escapes[v] == 0 {
                        attr[v] = true;
                        queue.push_back(v);
                    }
                }
            }
        }
        attr
    }

    /// Winning regions of the subgame on `alive`, indexed by player.
    fn solve(&self, alive: &[bool], choice: &mut [usize]) -> [Vec<bool>; 2] {
        let a = self.arena;
        let n = a.len();
        let Some(p) = (0..n).filter(|&v| alive[v]).map(|v| a.priority[v]).min() else {
            return [vec![false; n], vec![false; n]];
        };
        let alpha = parity_owner(p);
        let beta = alpha.other();
        let top: Vec<bool> = (0..n).map(|v| alive[v] && a.priority[v] == p).collect();
        for v in (0..n).filter(|&v| top[v] && a.owner[v] == alpha) {
            choice[v] = *a.succ[v]
                .iter()
                .find(|&&w| alive[w])
                .expect("subgames are total");
        }
        let attracted = self.attractor(alive, alpha, &top, choice);
        let rest: Vec<bool> = (0..n).map(|v| alive[v] && !attracted[v]).collect();
        let sub = self.solve(&rest, choice);
        if !sub[index(beta)].iter().any(|&b| b) {
            let mut won = [vec![false; n], vec![false; n]];
            won[index(alpha)] = alive.to_vec();
            return won;
        }
        let lost = self.attractor(alive, beta, &sub[index(beta)], choice);
        let rest: Vec<bool> = (0..n).map(|v| alive[v] && !lost[v]).collect();
        let mut won = self.solve(&rest, choice);
        for v in (0..n).filter(|&v| lost[v]) {
            won[index(beta)][v] = true;
        }
        won
    }
}

/// Solves a min-parity game with Zielonka's recursive algorithm: Player 1
/// wins a play iff its least recurring priority is even.
pub fn solve_parity(inst: &ParityInstance) -> ParitySolution {
    let a = &inst.arena;
    let n = a.len();
    let mut choice = vec![UNSET; n];
    let won = Zielonka { arena: a }.solve(&vec![true; n], &mut choice);
    let winner: Vec<Player> = (0..n)
        .map(|v| if won[0][v] { Player::One } else { Player::Two })
        .collect();
    let strategy = |player: Player| {
        let choice = (0..n)
            .map(|v| {
                (a.owner[v] == player).then(|| {
                    if choice[v] == UNSET {
                        a.succ[v][0]
                    } else {
                        choice[v]
                    }
                })
            })
            .collect();
        PositionalStrategy { player, choice }
    };
    ParitySolution {
        winner,
        strategy1: strategy(Player::One),
        strategy2: strategy(Player::Two),
    }
}

/// Every least-recurring priority that some play from the initial vertex,
/// consistent with `sigma`, can produce.
pub fn enforce_priorities(arena: &Arena, sigma: &PositionalStrategy) -> BTreeSet<u32> {
    let n = arena.len();
    let moves = |v: usize| -> Vec<usize> {
        match sigma.choice(v) {
            Some(w) if arena.owner(v) == sigma.player() => vec![w],
            _ => arena.successors(v).to_vec(),
        }
    };
    let graph: Vec<Vec<usize>> = (0..n).map(moves).collect();

    let mut reach = vec![false; n];
    let mut stack = vec![arena.initial()];
    while let Some(v) = stack.pop() {
        if std::mem::replace(&mut reach[v], true) {
            continue;
        }
        stack.extend(graph[v].iter().copied().filter(|&w| !reach[w]));
    }

    let mut out = BTreeSet::new();
    for p in arena.priorities() {
        let allowed: Vec<bool> = (0..n).map(|v| reach[v] && arena.priority(v) >= p).collect();
        let on_cycle = (0..n)
            .filter(|&v| allowed[v] && arena.priority(v) == p)
            .any(|v| {
                let mut seen = vec![false; n];
                let mut stack: Vec<usize> =
                    graph[v].iter().copied().filter(|&w| allowed[w]).collect();
                while let Some(u) = stack.pop() {
                    if u == v {
                        return true;
                    }
                    if std::mem::replace(&mut seen[u], true) {
                        continue;
                    }
                    stack.extend(graph[u].iter().copied().filter(|&w| allowed[w] && !seen[w]));
                }
                false
            });
        if on_cycle {
            out.insert(p);
        }
    }
    out
}

/// What `deviator` can achieve against the opponent's fixed positional
/// strategy: the residual game is one-player, so this is the opponent's
/// enforced set.
pub fn best_deviation(
    arena: &Arena,
    opponent: &PositionalStrategy,
    deviator: Player,
) -> BTreeSet<u32> {
    assert_eq!(
        opponent.player(),
        deviator.other(),
        "the fixed strategy must be the opponent's"
    );
    enforce_priorities(arena, opponent)
}

/// Determinacy oracle for the win/lose games of a priority game, with
/// positional strategies as the distinguished sets.
#[derive(Debug, Clone)]
pub struct PriorityOracle {
    game: PriorityGame,
    outcomes: Vec<u32>,
}

pub fn priority_oracle(game: &PriorityGame) -> PriorityOracle {
    PriorityOracle {
        outcomes: game.outcome_priorities(),
        game: game.clone(),
    }
}

impl PriorityOracle {
    fn solve(&self, wl: &WinLoseLabeling) -> ParitySolution {
        let w: BTreeSet<u32> = wl.w.iter().map(|i| self.outcomes[i]).collect();
        solve_parity(&reparity_encode(self.game.arena(), &w))
    }
}

impl DeterminacyOracle for PriorityOracle {
    type Strategy = PositionalStrategy;

    fn outcome_count(&self) -> usize {
        self.outcomes.len()
    }

    fn decide(&self, wl: &WinLoseLabeling) -> Result<Player, OracleError> {
        Ok(self.solve(wl).winner[self.game.arena().initial()])
    }

    fn strategy(&self, wl: &WinLoseLabeling) -> Result<(Player, PositionalStrategy), OracleError> {
        let sol = self.solve(wl);
        let winner = sol.winner[self.game.arena().initial()];
        Ok((winner, sol.strategy(winner).clone()))
    }

    fn play(&self, s1: &PositionalStrategy, s2: &PositionalStrategy) -> usize {
        let p = realized_priority(self.game.arena(), s1, s2);
        self.outcomes
            .binary_search(&p)
            .expect("recurring priorities occur in the arena")
    }
}

/// A positional secure equilibrium from the game's initial vertex.
pub fn secure_equilibrium_priority(
    game: &PriorityGame,
    mode: Mode,
) -> Result<TransferResult<PositionalStrategy>, TransferError> {
    secure_equilibrium(&game.payoff_table(), &priority_oracle(game), mode)
}

/// Whether `(s1, s2)` is stable under malevolent preferences against every
/// deviation, positional or not.
pub fn verify_priority_secure(
    game: &PriorityGame,
    s1: &PositionalStrategy,
    s2: &PositionalStrategy,
) -> bool {
    if s1.player() != Player::One || s2.player() != Player::Two {
        return false;
    }
    let arena = game.arena();
    let (mpref1, mpref2) = malevolent_prefs(&game.payoff_table());
    let here = game
        .outcome_index(realized_priority(arena, s1, s2))
        .expect("realized priority occurs");
    let improves = |pref: &crate::poset::Poset, devs: BTreeSet<u32>| {
        devs.into_iter()
            .any(|p| pref.less(here, game.outcome_index(p).expect("occurs")))
    };
    !improves(&mpref1, best_deviation(arena, s2, Player::One))
        && !improves(&mpref2, best_deviation(arena, s1, Player::Two))
}

/// Outcome set of a priority game as a subset, for reporting.
pub fn priorities_to_subset(game: &PriorityGame, ps: &BTreeSet<u32>) -> Subset {
    let outs = game.outcome_priorities();
    Subset::from_indices(
        outs.len(),
        ps.iter().filter_map(|p| outs.binary_search(p).ok()),
    )
}

/// Bounds for [`generate_priority_game`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArenaConfig {
    pub vertices: usize,
    /// Priorities are drawn from `0..priorities`.
    pub priorities: u32,
    pub max_out_degree: usize,
    /// Payoff components are integers in `-payoff_range..=payoff_range`.
    pub payoff_range: i64,
}

impl Default for ArenaConfig {
    fn default() -> Self {
        ArenaConfig {
            vertices: 8,
            priorities: 4,
            max_out_degree: 3,
            payoff_range: 3,
        }
    }
}

/// A random priority game; deterministic in `seed`. The initial vertex is 0.
pub fn generate_priority_game(seed: u64, cfg: &ArenaConfig) -> PriorityGame {
    assert!(cfg.vertices >= 1 && cfg.priorities >= 1 && cfg.max_out_degree >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = cfg.vertices;
    let owner = (0..n)
        .map(|_| {
            if rng.random_bool(0.5) {
                Player::One
            } else {
                Player::Two
            }
        })
        .collect();
    let priority = (0..n)
        .map(|_| rng.random_range(0..cfg.priorities))
        .collect();
    let succ = (0..n)
        .map(|_| {
            let k = rng.random_range(1..=cfg.max_out_degree.min(n));
            let mut out: Vec<usize> = Vec::with_capacity(k);
            while out.len() < k {
                let w = rng.random_range(0..n);
                if !out.contains(&w) {
                    out.push(w);
                }
            }
            out
        })
        .collect();
    let arena = Arena::new(owner, succ, priority, 0).expect("generated arenas are total");
    let payoff = arena
        .priorities()
        .into_iter()
        .map(|p| {
            let mut draw =
                || Rational64::from_integer(rng.random_range(-cfg.payoff_range..=cfg.payoff_range));
            (p, (draw(), draw()))
        })
        .collect();
    PriorityGame::new(arena, payoff).expect("payoffs cover the occurring priorities")
}
