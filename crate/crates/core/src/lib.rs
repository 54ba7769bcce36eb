//! Equilibrium transfer from determined game forms to two-player games with
//! partially ordered preferences, secure equilibria, and priority games.

pub mod cli;
pub mod format;
pub mod games;
pub mod poset;
pub mod priority;
pub mod secure;
pub mod transfer;

pub use games::{MatrixGame, MatrixGameForm, PayoffTable, Player, Profile};
pub use poset::{BinaryRelation, Poset, Subset};
pub use priority::{Arena, PriorityGame};
pub use transfer::{equilibrium_transfer, Mode, TransferError, TransferResult};
