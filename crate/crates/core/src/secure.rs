//! Secure equilibria as Nash equilibria under malevolent preferences: each
//! player first maximizes her own payoff and, on ties, minimizes the
//! opponent's.

use crate::games::{is_nash, MatrixGame, MatrixGameForm, PayoffTable, Player, Profile};
use crate::poset::{validate_order, BinaryRelation, Poset};
use crate::transfer::{
    equilibrium_transfer, DeterminacyOracle, Mode, TransferError, TransferResult,
};

/// A game form with payoffs and the derived malevolent preferences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MalevolentGame {
    pub payoffs: PayoffTable,
    pub game: MatrixGame,
}

impl MalevolentGame {
    pub fn new(
        form: MatrixGameForm,
        payoffs: PayoffTable,
    ) -> Result<Self, crate::games::GameError> {
        let (mpref1, mpref2) = malevolent_prefs(&payoffs);
        let mpref1 = mpref1
            .with_labels(form.labels().to_vec())
            .map_err(|_| size_error(&form, &payoffs))?;
        let mpref2 = mpref2
            .with_labels(form.labels().to_vec())
            .map_err(|_| size_error(&form, &payoffs))?;
        Ok(MalevolentGame {
            payoffs,
            game: MatrixGame::new(form, mpref1, mpref2)?,
        })
    }
}

fn size_error(form: &MatrixGameForm, payoffs: &PayoffTable) -> crate::games::GameError {
    crate::games::GameError::SizeMismatch {
        expected: form.outcome_count(),
        found: payoffs.len(),
    }
}

/// Player `i` ranks `o` below `o'` iff her payoff at `o` is smaller, or equal
/// with the opponent getting strictly more at `o` than at `o'`. Outcomes with
/// identical payoff pairs stay incomparable.
pub fn malevolent_prefs(payoffs: &PayoffTable) -> (Poset, Poset) {
    let n = payoffs.len();
    let order = |me: Player| {
        let them = me.other();
        let mut r = BinaryRelation::new(n);
        for x in 0..n {
            for y in 0..n {
                let (mx, my) = (payoffs.of(me, x), payoffs.of(me, y));
                if mx < my || (mx == my && payoffs.of(them, y) < payoffs.of(them, x)) {
                    r.add(x, y).expect("indices in range");
                }
            }
        }
        validate_order(&r).expect("lexicographic comparison is a strict order")
    };
    (order(Player::One), order(Player::Two))
}

/// A secure equilibrium of the payoff game, in the oracle's strategy sets.
pub fn secure_equilibrium<O: DeterminacyOracle>(
    payoffs: &PayoffTable,
    oracle: &O,
    mode: Mode,
) -> Result<TransferResult<O::Strategy>, TransferError> {
    let (mpref1, mpref2) = malevolent_prefs(payoffs);
    equilibrium_transfer(&mpref1, &mpref2, oracle, mode)
}

/// Brute-force check: Nash stability under the malevolent preferences.
pub fn is_secure(form: &MatrixGameForm, payoffs: &PayoffTable, p: Profile) -> bool {
    let (mpref1, mpref2) = malevolent_prefs(payoffs);
    match MatrixGame::new(form.clone(), mpref1, mpref2) {
        Ok(g) => is_nash(&g, p),
        Err(_) => false,
    }
}
