mod common;

use common::*;
use eqtransfer::games::{generate_tree_game, MatrixGameForm, PayoffTable, TreeGameConfig};
use eqtransfer::poset::Subset;
use eqtransfer::secure::{is_secure, malevolent_prefs, secure_equilibrium};
use eqtransfer::transfer::{
    equilibrium_transfer, matrix_oracle, Mode, OracleError, Stage, TransferError,
};
use proptest::prelude::*;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tree_form(seed: u64, outcomes: usize) -> MatrixGameForm {
    let cfg = TreeGameConfig {
        depth: 3,
        branching: 2,
        outcomes,
        max_strategies: 8,
    };
    generate_tree_game(seed, &cfg)
}

/// Sets Player 1 can enforce: supersets of some row's outcome set.
fn enforceable_by_1(matrix: &[Vec<usize>], n: usize) -> Vec<u32> {
    (0u32..1 << n)
        .filter(|&p| matrix.iter().any(|r| r.iter().all(|&o| p >> o & 1 == 1)))
        .collect()
}

fn bits(s: &Subset) -> u32 {
    s.to_bits().unwrap() as u32
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn transfer_yields_nash(seed in any::<u64>(), n in 1usize..6, d1 in 0.0..1.0f64, d2 in 0.0..1.0f64) {
        let form = tree_form(seed, n);
        let matrix = form.matrix();
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
        let (m1, m2) = (random_order(&mut rng, n, d1), random_order(&mut rng, n, d2));
        let (p1, p2) = (poset_of(&m1), poset_of(&m2));
        let oracle = matrix_oracle(&form);
        let naive = equilibrium_transfer(&p1, &p2, &oracle, Mode::Naive).unwrap();
        let greedy = equilibrium_transfer(&p1, &p2, &oracle, Mode::Greedy).unwrap();
        let enforceable = enforceable_by_1(&matrix, n);
        for r in [&naive, &greedy] {
            prop_assert!(nash_by_matrix(&matrix, &m1, &m2, r.s1, r.s2));
            prop_assert_eq!(matrix[r.s1][r.s2], r.outcome);
            let m = bits(&r.enforced);
            // s1 enforces M, M is maximal, m is a maximal element of M
            prop_assert!(matrix[r.s1].iter().all(|&o| m >> o & 1 == 1));
            prop_assert!(enforceable.iter().all(|&c| !lift_by_definition(&m1, m, c)));
            prop_assert!(m >> r.outcome & 1 == 1);
            prop_assert!((0..n).all(|y| !(m >> y & 1 == 1 && m2[r.outcome][y])));
            // s2 keeps the play out of M'
            let mp = bits(&r.replaced);
            prop_assert!(matrix.iter().all(|row| mp >> row[r.s2] & 1 == 0));
            prop_assert_eq!(r.calls.extractions, 2);
        }
        prop_assert_eq!(greedy.calls.decisions, n + 1);
        prop_assert_eq!(naive.calls.decisions, (1 << n) + 1);
        let (gm, nm) = (bits(&greedy.enforced), bits(&naive.enforced));
        prop_assert!(!lift_by_definition(&m1, gm, nm) && !lift_by_definition(&m1, nm, gm));
    }

    #[test]
    fn secure_matches_lexicographic_brute_force(seed in any::<u64>(), n in 1usize..6, range in 0i64..4) {
        let form = tree_form(seed, n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 7);
        let pay = random_payoffs(&mut rng, n, range);
        let table = PayoffTable::new(pay.clone());
        let secure = secure_by_payoff(&form.matrix(), &pay);
        for p in form.profiles() {
            prop_assert_eq!(is_secure(&form, &table, p), secure.contains(&(p.s1, p.s2)));
        }
        for mode in [Mode::Naive, Mode::Greedy] {
            let r = secure_equilibrium(&table, &matrix_oracle(&form), mode).unwrap();
            prop_assert!(secure.contains(&(r.s1, r.s2)));
        }
    }

    #[test]
    fn distinct_payoffs_give_total_malevolent_orders(n in 1usize..7, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pairs = Vec::new();
        while pairs.len() < n {
            let p = (rng.random_range(-3i64..=3), rng.random_range(-3i64..=3));
            if !pairs.contains(&p) {
                pairs.push(p);
            }
        }
        let (p1, p2) = malevolent_prefs(&PayoffTable::from_integers(&pairs));
        prop_assert!(p1.is_total() && p2.is_total());
    }

    #[test]
    fn undetermined_forms_are_reported(seed in any::<u64>(), n in 2usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let form = random_form(&mut rng, 3, 3, n);
        let matrix = form.matrix();
        let (p1, p2) = (poset_of(&random_order(&mut rng, n, 0.5)), poset_of(&random_order(&mut rng, n, 0.5)));
        match equilibrium_transfer(&p1, &p2, &matrix_oracle(&form), Mode::Greedy) {
            Ok(r) => prop_assert!(nash_by_matrix(&matrix, &matrix_of(&p1.relation()), &matrix_of(&p2.relation()), r.s1, r.s2)),
            Err(e) => {
                let w = bits(e.undetermined_labeling().expect("only undeterminacy can fail here"));
                let row = matrix.iter().any(|r| r.iter().all(|&o| w >> o & 1 == 1));
                let col = (0..3).any(|c| matrix.iter().all(|r| w >> r[c] & 1 == 0));
                prop_assert!(!row && !col);
            }
        }
    }
}

#[test]
fn matching_pennies_fails_in_search() {
    let form = MatrixGameForm::with_indices(2, vec![vec![0, 1], vec![1, 0]]).unwrap();
    let (p1, p2) = malevolent_prefs(&PayoffTable::from_integers(&[(1, 0), (0, 1)]));
    let err = equilibrium_transfer(&p1, &p2, &matrix_oracle(&form), Mode::Naive).unwrap_err();
    match err {
        TransferError::OracleUnsound {
            stage: Stage::Search,
            cause,
        } => {
            assert!(matches!(
                cause,
                eqtransfer::transfer::Unsoundness::NotDetermined(OracleError::NotDetermined(_))
            ))
        }
        e => panic!("{e:?}"),
    }
}
