//! C interface to `eqtransfer`.
//!
//! Every entry point returns an [`EtStatus`] and writes results through
//! out-pointers. When a call fails, a message is kept for the calling
//! thread and can be read with [`et_last_error`]. Handles are opaque and
//! released with the matching `_free` function; passing NULL to a `_free`
//! function is a no-op.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use eqtransfer::format::{
    describe_order_error, parse_arena, parse_game, parse_label_set, parse_relation, FormatError,
    GameDocument,
};
use eqtransfer::games::is_determined_form;
use eqtransfer::poset::{validate_order, Poset};
use eqtransfer::priority::{
    realized_priority, secure_equilibrium_priority, verify_priority_secure, PriorityGame,
};
use eqtransfer::secure::secure_equilibrium;
use eqtransfer::transfer::{matrix_oracle, solve_matrix_game, Mode, TransferError, TransferResult};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    /// The game form is not determined, so the oracle cannot answer.
    NotDetermined = 5,
    /// Any other oracle failure or infeasible request.
    Solver = 6,
    Panic = 7,
}

/// Search mode: query every labeling.
pub const ET_MODE_NAIVE: u32 = 0;
/// Search mode: drop outcomes worst-first, `|O| + 1` queries.
pub const ET_MODE_GREEDY: u32 = 1;
/// Strategy entry for a vertex the player does not own. The header spells
/// it `SIZE_MAX`.
/// cbindgen:ignore
pub const ET_NO_CHOICE: usize = usize::MAX;

/// A parsed matrix game file.
pub struct EtGame(GameDocument);

/// A parsed strict partial order with its labels.
pub struct EtOrder {
    order: Poset,
    labels: Vec<String>,
}

/// A parsed priority game.
pub struct EtPriorityGame(PriorityGame);

/// An equilibrium of a matrix game.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct EtProfile {
    pub row: usize,
    pub col: usize,
    /// Index of the outcome in the game's outcome list.
    pub outcome: usize,
    pub decisions: usize,
    pub extractions: usize,
}

/// Summary of a positional secure equilibrium of a priority game.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct EtPriorityResult {
    pub realized_priority: u32,
    pub decisions: usize,
    pub extractions: usize,
    /// Whether the independent verifier accepted the pair.
    pub verified: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(EtStatus, String);

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure(EtStatus::Parse, e.to_string())
    }
}

impl From<TransferError> for Failure {
    fn from(e: TransferError) -> Self {
        let status = if e.undetermined_labeling().is_some() {
            EtStatus::NotDetermined
        } else {
            EtStatus::Solver
        };
        Failure(status, e.to_string())
    }
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> EtStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => EtStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            EtStatus::Panic
        }
    }
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(EtStatus::NullPointer, format!("{what} is NULL")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(EtStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure(EtStatus::NullPointer, format!("{what} is NULL")))
}

unsafe fn out_ref<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut()
        .ok_or_else(|| Failure(EtStatus::NullPointer, format!("{what} is NULL")))
}

fn mode(m: u32) -> Result<Mode, Failure> {
    match m {
        ET_MODE_NAIVE => Ok(Mode::Naive),
        ET_MODE_GREEDY => Ok(Mode::Greedy),
        _ => Err(Failure(
            EtStatus::InvalidArgument,
            format!("unknown mode {m}"),
        )),
    }
}

fn profile(r: &TransferResult<usize>) -> EtProfile {
    EtProfile {
        row: r.s1,
        col: r.s2,
        outcome: r.outcome,
        decisions: r.calls.decisions,
        extractions: r.calls.extractions,
    }
}

/// Message of the last failed call on this thread, or NULL. The pointer is
/// valid until the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn et_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn et_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a game file. On success `*out` owns a new handle.
///
/// # Safety
/// `text` must be NULL or a NUL-terminated string; `out` must be NULL or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn et_game_parse(text: *const c_char, out: *mut *mut EtGame) -> EtStatus {
    guard(|| {
        let slot = out_ref(out, "out")?;
        let doc = parse_game(c_str(text, "text")?)?;
        *slot = Box::into_raw(Box::new(EtGame(doc)));
        Ok(())
    })
}

/// # Safety
/// `game` must be NULL or a handle from [`et_game_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn et_game_free(game: *mut EtGame) {
    if !game.is_null() {
        drop(Box::from_raw(game));
    }
}

/// Strategy counts and number of outcomes.
///
/// # Safety
/// `game` must be a live handle; the out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn et_game_shape(
    game: *const EtGame,
    rows: *mut usize,
    cols: *mut usize,
    outcomes: *mut usize,
) -> EtStatus {
    guard(|| {
        let g = &handle(game, "game")?.0;
        *out_ref(rows, "rows")? = g.form.rows();
        *out_ref(cols, "cols")? = g.form.cols();
        *out_ref(outcomes, "outcomes")? = g.form.outcome_count();
        Ok(())
    })
}

/// Whether every win/lose labeling of the game form has a winner.
///
/// # Safety
/// `game` must be a live handle; `determined` must be writable.
#[no_mangle]
pub unsafe extern "C" fn et_game_is_determined(
    game: *const EtGame,
    determined: *mut bool,
) -> EtStatus {
    guard(|| {
        let g = &handle(game, "game")?.0;
        *out_ref(determined, "determined")? = is_determined_form(&g.form);
        Ok(())
    })
}

/// A Nash equilibrium under the file's preferences (payoffs by default).
///
/// # Safety
/// `game` must be a live handle; `result` must be writable.
#[no_mangle]
pub unsafe extern "C" fn et_game_solve(
    game: *const EtGame,
    search: u32,
    result: *mut EtProfile,
) -> EtStatus {
    guard(|| {
        let g = &handle(game, "game")?.0;
        let slot = out_ref(result, "result")?;
        let search = mode(search)?;
        let r = solve_matrix_game(&g.game()?, search)?;
        *slot = profile(&r);
        Ok(())
    })
}

/// A secure equilibrium; the game needs payoffs.
///
/// # Safety
/// `game` must be a live handle; `result` must be writable.
#[no_mangle]
pub unsafe extern "C" fn et_game_secure(
    game: *const EtGame,
    search: u32,
    result: *mut EtProfile,
) -> EtStatus {
    guard(|| {
        let g = &handle(game, "game")?.0;
        let slot = out_ref(result, "result")?;
        let payoffs = g
            .require_payoffs()
            .map_err(|e| Failure(EtStatus::InvalidArgument, e.to_string()))?;
        let r = secure_equilibrium(payoffs, &matrix_oracle(&g.form), mode(search)?)?;
        *slot = profile(&r);
        Ok(())
    })
}

/// Parses a relation file and checks it is a strict partial order.
///
/// # Safety
/// `text` must be NULL or a NUL-terminated string; `out` must be NULL or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn et_order_parse(text: *const c_char, out: *mut *mut EtOrder) -> EtStatus {
    guard(|| {
        let slot = out_ref(out, "out")?;
        let doc = parse_relation(c_str(text, "text")?)?;
        let order = validate_order(&doc.relation)
            .map_err(|e| Failure(EtStatus::Parse, describe_order_error(&e, &doc.labels)))?;
        *slot = Box::into_raw(Box::new(EtOrder {
            order,
            labels: doc.labels,
        }));
        Ok(())
    })
}

/// # Safety
/// `order` must be NULL or a handle from [`et_order_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn et_order_free(order: *mut EtOrder) {
    if !order.is_null() {
        drop(Box::from_raw(order));
    }
}

/// Whether `a` is below `b` in the lifted order. Sets are written as
/// label lists such as `{1,3}` or `{}`.
///
/// # Safety
/// `order` must be a live handle, `a` and `b` NUL-terminated strings and
/// `less` writable.
#[no_mangle]
pub unsafe extern "C" fn et_order_lift_less(
    order: *const EtOrder,
    a: *const c_char,
    b: *const c_char,
    less: *mut bool,
) -> EtStatus {
    guard(|| {
        let o = handle(order, "order")?;
        let sa = parse_label_set(c_str(a, "a")?, &o.labels)?;
        let sb = parse_label_set(c_str(b, "b")?, &o.labels)?;
        *out_ref(less, "less")? = o.order.lift_less(&sa, &sb);
        Ok(())
    })
}

/// Parses an arena file with payoffs.
///
/// # Safety
/// `text` must be NULL or a NUL-terminated string; `out` must be NULL or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn et_priority_parse(
    text: *const c_char,
    out: *mut *mut EtPriorityGame,
) -> EtStatus {
    guard(|| {
        let slot = out_ref(out, "out")?;
        let game = parse_arena(c_str(text, "text")?)?;
        *slot = Box::into_raw(Box::new(EtPriorityGame(game)));
        Ok(())
    })
}

/// # Safety
/// `game` must be NULL or a handle from [`et_priority_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn et_priority_free(game: *mut EtPriorityGame) {
    if !game.is_null() {
        drop(Box::from_raw(game));
    }
}

/// Number of vertices in the arena.
///
/// # Safety
/// `game` must be a live handle; `count` must be writable.
#[no_mangle]
pub unsafe extern "C" fn et_priority_vertex_count(
    game: *const EtPriorityGame,
    count: *mut usize,
) -> EtStatus {
    guard(|| {
        *out_ref(count, "count")? = handle(game, "game")?.0.arena().len();
        Ok(())
    })
}

/// A positional secure equilibrium from the initial vertex. `s1` and `s2`
/// receive one successor per vertex, or [`ET_NO_CHOICE`] where the other
/// player moves; both must hold `len` entries, at least the vertex count.
///
/// # Safety
/// `game` must be a live handle, `s1` and `s2` writable arrays of `len`
/// elements and `result` writable.
#[no_mangle]
pub unsafe extern "C" fn et_priority_secure(
    game: *const EtPriorityGame,
    search: u32,
    s1: *mut usize,
    s2: *mut usize,
    len: usize,
    result: *mut EtPriorityResult,
) -> EtStatus {
    guard(|| {
        let g = &handle(game, "game")?.0;
        let slot = out_ref(result, "result")?;
        if s1.is_null() || s2.is_null() {
            return Err(Failure(
                EtStatus::NullPointer,
                "strategy buffer is NULL".into(),
            ));
        }
        let n = g.arena().len();
        if len < n {
            return Err(Failure(
                EtStatus::InvalidArgument,
                format!("strategy buffers hold {len} entries, the arena has {n} vertices"),
            ));
        }
        let r = secure_equilibrium_priority(g, mode(search)?)?;
        let (b1, b2) = (
            std::slice::from_raw_parts_mut(s1, n),
            std::slice::from_raw_parts_mut(s2, n),
        );
        for v in 0..n {
            b1[v] = r.s1.choice(v).unwrap_or(ET_NO_CHOICE);
            b2[v] = r.s2.choice(v).unwrap_or(ET_NO_CHOICE);
        }
        *slot = EtPriorityResult {
            realized_priority: realized_priority(g.arena(), &r.s1, &r.s2),
            decisions: r.calls.decisions,
            extractions: r.calls.extractions,
            verified: verify_priority_secure(g, &r.s1, &r.s2),
        };
        Ok(())
    })
}
