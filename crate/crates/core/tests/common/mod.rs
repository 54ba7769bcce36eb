//! Brute-force reference implementations shared by the integration tests.
//! None of these call the library's algorithms; they only read its data.
#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::BTreeSet;

use eqtransfer::games::{MatrixGameForm, Player};
use eqtransfer::poset::{validate_order, BinaryRelation, Poset};
use eqtransfer::priority::Arena;
use num_rational::Rational64;
use rand::{Rng, RngExt};

/// Strict order as a boolean matrix: `m[x][y]` iff `x < y`.
pub type Matrix = Vec<Vec<bool>>;

/// Random strict partial order: a random DAG along a random permutation,
/// closed with Warshall's algorithm.
pub fn random_order<R: Rng>(rng: &mut R, n: usize, density: f64) -> Matrix {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.random_range(0..=i));
    }
    let mut m = vec![vec![false; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(density) {
                m[perm[i]][perm[j]] = true;
            }
        }
    }
    warshall(&m)
}

pub fn warshall(m: &Matrix) -> Matrix {
    let n = m.len();
    let mut c = m.clone();
    for k in 0..n {
        for i in 0..n {
            if c[i][k] {
                for j in 0..n {
                    if c[k][j] {
                        c[i][j] = true;
                    }
                }
            }
        }
    }
    c
}

/// Transitive closure as the least fixpoint of `R := R ∪ R∘R`.
pub fn fixpoint_closure(m: &Matrix) -> Matrix {
    let n = m.len();
    let mut r = m.clone();
    loop {
        let mut next = r.clone();
        for i in 0..n {
            for j in 0..n {
                if !next[i][j] && (0..n).any(|k| r[i][k] && r[k][j]) {
                    next[i][j] = true;
                }
            }
        }
        if next == r {
            return r;
        }
        r = next;
    }
}

pub fn relation_of(m: &Matrix) -> BinaryRelation {
    let n = m.len();
    let pairs = (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .filter(|&(x, y)| m[x][y]);
    BinaryRelation::from_pairs(n, pairs).unwrap()
}

pub fn poset_of(m: &Matrix) -> Poset {
    validate_order(&relation_of(m)).unwrap()
}

pub fn matrix_of(r: &BinaryRelation) -> Matrix {
    let n = r.size();
    (0..n)
        .map(|x| (0..n).map(|y| r.contains(x, y)).collect())
        .collect()
}

/// The lift read literally: some nonempty `A' ⊆ A \ B` makes `A` and `B`
/// agree outside `A' ∪ u(A')`. Sets are bit masks.
pub fn lift_by_definition(m: &Matrix, a: u32, b: u32) -> bool {
    let n = m.len();
    let a_minus_b = a & !b;
    let mut sub = a_minus_b;
    while sub != 0 {
        let mut covered = sub;
        for x in (0..n).filter(|x| sub >> x & 1 == 1) {
            for z in 0..n {
                if m[x][z] {
                    covered |= 1 << z;
                }
            }
        }
        if a & !covered == b & !covered {
            return true;
        }
        sub = (sub - 1) & a_minus_b;
    }
    false
}

/// Pure Nash equilibria by numeric `>=` on payoff pairs.
pub fn nash_by_payoff(
    matrix: &[Vec<usize>],
    pay: &[(Rational64, Rational64)],
) -> Vec<(usize, usize)> {
    let (rows, cols) = (matrix.len(), matrix[0].len());
    let mut out = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let here = pay[matrix[r][c]];
            let row_ok = (0..rows).all(|r2| here.0 >= pay[matrix[r2][c]].0);
            let col_ok = (0..cols).all(|c2| here.1 >= pay[matrix[r][c2]].1);
            if row_ok && col_ok {
                out.push((r, c));
            }
        }
    }
    out
}

/// Secure profiles: no unilateral deviation gives the deviator more, or the
/// same with the opponent getting less.
pub fn secure_by_payoff(
    matrix: &[Vec<usize>],
    pay: &[(Rational64, Rational64)],
) -> Vec<(usize, usize)> {
    let (rows, cols) = (matrix.len(), matrix[0].len());
    let better = |mine: Rational64, theirs: Rational64, mine2: Rational64, theirs2: Rational64| {
        mine2 > mine || (mine2 == mine && theirs2 < theirs)
    };
    let mut out = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let (h1, h2) = pay[matrix[r][c]];
            let row_ok = (0..rows).all(|r2| {
                let (d1, d2) = pay[matrix[r2][c]];
                !better(h1, h2, d1, d2)
            });
            let col_ok = (0..cols).all(|c2| {
                let (d1, d2) = pay[matrix[r][c2]];
                !better(h2, h1, d2, d1)
            });
            if row_ok && col_ok {
                out.push((r, c));
            }
        }
    }
    out
}

/// Nash stability against arbitrary boolean preference matrices.
pub fn nash_by_matrix(matrix: &[Vec<usize>], p1: &Matrix, p2: &Matrix, r: usize, c: usize) -> bool {
    let here = matrix[r][c];
    (0..matrix.len()).all(|r2| !p1[here][matrix[r2][c]])
        && (0..matrix[0].len()).all(|c2| !p2[here][matrix[r][c2]])
}

pub fn random_form<R: Rng>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    outcomes: usize,
) -> MatrixGameForm {
    let matrix = (0..rows)
        .map(|_| (0..cols).map(|_| rng.random_range(0..outcomes)).collect())
        .collect();
    MatrixGameForm::with_indices(outcomes, matrix).unwrap()
}

pub fn random_payoffs<R: Rng>(rng: &mut R, n: usize, range: i64) -> Vec<(Rational64, Rational64)> {
    (0..n)
        .map(|_| {
            (
                Rational64::from_integer(rng.random_range(-range..=range)),
                Rational64::from_integer(rng.random_range(-range..=range)),
            )
        })
        .collect()
}

/// Every positional choice vector for `player`: entry `v` is a successor of
/// `v` when `player` owns it and `usize::MAX` otherwise.
pub fn positional_choices(arena: &Arena, player: Player) -> Vec<Vec<usize>> {
    let n = arena.len();
    let owned: Vec<usize> = (0..n).filter(|&v| arena.owner(v) == player).collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; owned.len()];
    loop {
        let mut choice = vec![usize::MAX; n];
        for (k, &v) in owned.iter().enumerate() {
            choice[v] = arena.successors(v)[idx[k]];
        }
        out.push(choice);
        let mut k = 0;
        loop {
            if k == owned.len() {
                return out;
            }
            idx[k] += 1;
            if idx[k] < arena.successors(owned[k]).len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Edges left once the vertices fixed by `choice` keep a single successor.
pub fn restricted_graph(arena: &Arena, choice: &[usize]) -> Vec<Vec<usize>> {
    (0..arena.len())
        .map(|v| {
            if choice[v] == usize::MAX {
                arena.successors(v).to_vec()
            } else {
                vec![choice[v]]
            }
        })
        .collect()
}

fn reachable(graph: &[Vec<usize>], from: usize, allowed: impl Fn(usize) -> bool) -> Vec<bool> {
    let mut seen = vec![false; graph.len()];
    let mut stack = vec![from];
    while let Some(v) = stack.pop() {
        for &w in &graph[v] {
            if allowed(w) && !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen
}

/// Least priorities of all cycles reachable from `from` in `graph`.
pub fn reachable_cycle_minima(graph: &[Vec<usize>], prio: &[u32], from: usize) -> BTreeSet<u32> {
    let mut reach = reachable(graph, from, |_| true);
    reach[from] = true;
    (0..graph.len())
        .filter(|&u| reach[u])
        .filter(|&u| reachable(graph, u, |w| prio[w] >= prio[u])[u])
        .map(|u| prio[u])
        .collect()
}

/// Parity winner at `v` (min-parity, even favours Player 1) by trying every
/// positional strategy of each player against all opponent plays.
pub fn parity_winner_brute(arena: &Arena, v: usize) -> Player {
    let prio: Vec<u32> = (0..arena.len()).map(|u| arena.priority(u)).collect();
    let wins = |player: Player| {
        let good = |p: u32| p.is_multiple_of(2) == (player == Player::One);
        positional_choices(arena, player).iter().any(|c| {
            reachable_cycle_minima(&restricted_graph(arena, c), &prio, v)
                .into_iter()
                .all(good)
        })
    };
    let (one, two) = (wins(Player::One), wins(Player::Two));
    assert!(one != two, "positional determinacy broken at vertex {v}");
    if one {
        Player::One
    } else {
        Player::Two
    }
}

/// Whether the positional `choice` of `player` wins the parity game from `v`.
pub fn strategy_wins_parity(arena: &Arena, player: Player, choice: &[usize], v: usize) -> bool {
    let prio: Vec<u32> = (0..arena.len()).map(|u| arena.priority(u)).collect();
    reachable_cycle_minima(&restricted_graph(arena, choice), &prio, v)
        .into_iter()
        .all(|p| (p % 2 == 0) == (player == Player::One))
}

/// All lassos from `start`: a simple path followed by an edge back into it.
/// Returns the vertices of each loop.
pub fn lasso_cycles(arena: &Arena, start: usize) -> Vec<Vec<usize>> {
    fn go(arena: &Arena, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let v = *path.last().unwrap();
        for &w in arena.successors(v) {
            if let Some(pos) = path.iter().position(|&u| u == w) {
                out.push(path[pos..].to_vec());
            } else {
                path.push(w);
                go(arena, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(arena, &mut vec![start], &mut out);
    out
}

/// Least recurring priorities reachable against a fixed positional choice,
/// by enumerating the opponent's positional strategies.
pub fn enforce_by_enumeration(arena: &Arena, owner: Player, choice: &[usize]) -> BTreeSet<u32> {
    let n = arena.len();
    positional_choices(arena, owner.other())
        .into_iter()
        .map(|theirs| {
            let next = |v: usize| {
                if arena.owner(v) == owner {
                    choice[v]
                } else {
                    theirs[v]
                }
            };
            let mut seen = vec![usize::MAX; n];
            let mut path = Vec::new();
            let mut v = arena.initial();
            while seen[v] == usize::MAX {
                seen[v] = path.len();
                path.push(v);
                v = next(v);
            }
            path[seen[v]..]
                .iter()
                .map(|&u| arena.priority(u))
                .min()
                .unwrap()
        })
        .collect()
}
