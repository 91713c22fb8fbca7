//! C ABI for the hexatope core: opaque handles, status codes and a
//! per-thread last-error message. The header is `include/hexatope.h`.

use std::cell::RefCell;
use std::ffi::{c_char, c_void, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hexatope::brouwer::{approx_fixed_point, CubeMap};
use hexatope::dinterval::{nu, nu_star_tau_star, tau, DIntervalError, DIntervalFamily};
use hexatope::hexboard::{winner_2d, Cell, Coloring2D, HexBoard2D, HexError, Player};
use hexatope::hexsolve::{solve, Position, SolveError};
use hexatope::setfam::{argument_complexity, parse_family, SetFamily, SetFamilyError};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HxStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    IllegalMove = 4,
    CapExceeded = 5,
    BudgetExceeded = 6,
    BufferTooSmall = 7,
    Internal = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HxPlayer {
    White = 0,
    Black = 1,
}

impl From<Player> for HxPlayer {
    fn from(p: Player) -> Self {
        match p {
            Player::White => HxPlayer::White,
            Player::Black => HxPlayer::Black,
        }
    }
}

/// A HEX position: coloring plus the player to move.
pub struct HxPosition {
    inner: Position,
}

/// A set family over `[m]`, `m ≤ 24`.
pub struct HxSetFamily {
    inner: SetFamily,
}

/// A family of d-intervals.
pub struct HxDIntervalFamily {
    inner: DIntervalFamily,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).ok());
}

fn fail(status: HxStatus, msg: impl Into<String>) -> HxStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> HxStatus) -> HxStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(HxStatus::Internal, "panic inside hexatope"),
    }
}

fn hex_status(e: &HexError) -> HxStatus {
    match e {
        HexError::Parse { .. } => HxStatus::ParseError,
        _ => HxStatus::InvalidArgument,
    }
}

fn solve_status(e: &SolveError) -> HxStatus {
    match e {
        SolveError::Illegal(_) => HxStatus::IllegalMove,
        SolveError::CapExceeded { .. } => HxStatus::CapExceeded,
        SolveError::Budget { .. } => HxStatus::BudgetExceeded,
        SolveError::Board(b) => hex_status(b),
        _ => HxStatus::InvalidArgument,
    }
}

fn setfam_status(e: &SetFamilyError) -> HxStatus {
    match e {
        SetFamilyError::Parse { .. } => HxStatus::ParseError,
        SetFamilyError::GroundSetTooLarge(_) | SetFamilyError::BudgetExceeded { .. } => HxStatus::CapExceeded,
        _ => HxStatus::InvalidArgument,
    }
}

fn dint_status(e: &DIntervalError) -> HxStatus {
    match e {
        DIntervalError::Parse { .. } => HxStatus::ParseError,
        DIntervalError::CapExceeded { .. } => HxStatus::CapExceeded,
        _ => HxStatus::InvalidArgument,
    }
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, HxStatus> {
    if s.is_null() {
        return Err(fail(HxStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(HxStatus::InvalidArgument, "string is not UTF-8"))
}

/// Copies `s` with a terminating NUL; `*needed` receives the full size.
unsafe fn write_str(s: &str, buf: *mut c_char, len: usize, needed: *mut usize) -> HxStatus {
    let bytes = s.as_bytes();
    if !needed.is_null() {
        *needed = bytes.len() + 1;
    }
    if buf.is_null() || len < bytes.len() + 1 {
        return fail(HxStatus::BufferTooSmall, format!("need {} bytes", bytes.len() + 1));
    }
    ptr::copy_nonoverlapping(bytes.as_ptr(), buf as *mut u8, bytes.len());
    *buf.add(bytes.len()) = 0;
    HxStatus::Ok
}

/// Message for the last failure on this thread, or NULL. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn hx_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn hx_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Empty `rows × cols` board with White to move.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hx_position_new(rows: usize, cols: usize, out: *mut *mut HxPosition) -> HxStatus {
    guard(|| {
        if out.is_null() {
            return fail(HxStatus::NullPointer, "out is null");
        }
        match HexBoard2D::new(rows, cols) {
            Ok(b) => {
                *out = Box::into_raw(Box::new(HxPosition {
                    inner: Position::empty(b),
                }));
                HxStatus::Ok
            }
            Err(e) => fail(hex_status(&e), e.to_string()),
        }
    })
}

/// Parses the text form (`hex r c` then rows of `W`, `B`, `.`); the mover
/// is inferred from the tile counts.
///
/// # Safety
/// `text` must be NUL-terminated; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn hx_position_parse(s: *const c_char, out: *mut *mut HxPosition) -> HxStatus {
    guard(|| {
        if out.is_null() {
            return fail(HxStatus::NullPointer, "out is null");
        }
        let t = match text(s) {
            Ok(t) => t,
            Err(st) => return st,
        };
        let c = match Coloring2D::parse(t) {
            Ok(c) => c,
            Err(e) => return fail(hex_status(&e), e.to_string()),
        };
        match Position::infer(c) {
            Ok(p) => {
                *out = Box::into_raw(Box::new(HxPosition { inner: p }));
                HxStatus::Ok
            }
            Err(e) => fail(solve_status(&e), e.to_string()),
        }
    })
}

/// Plays a tile for the player to move.
///
/// # Safety
/// `p` must come from this library and not be freed.
#[no_mangle]
pub unsafe extern "C" fn hx_position_play(p: *mut HxPosition, row: usize, col: usize) -> HxStatus {
    guard(|| {
        let Some(p) = p.as_mut() else {
            return fail(HxStatus::NullPointer, "position is null");
        };
        match p.inner.play((row, col)) {
            Ok(next) => {
                p.inner = next;
                HxStatus::Ok
            }
            Err(e) => fail(solve_status(&e), e.to_string()),
        }
    })
}

/// # Safety
/// `p` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn hx_position_to_move(p: *const HxPosition, out: *mut HxPlayer) -> HxStatus {
    guard(|| match (p.as_ref(), out.is_null()) {
        (Some(p), false) => {
            *out = p.inner.to_move.into();
            HxStatus::Ok
        }
        _ => fail(HxStatus::NullPointer, "null argument"),
    })
}

/// Exact value of the position (at most 16 tiles). `best_row`/`best_col`
/// receive a move for the mover, or `SIZE_MAX` on a full board.
///
/// # Safety
/// `p` must be a live handle; out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hx_position_solve(
    p: *const HxPosition,
    winner: *mut HxPlayer,
    best_row: *mut usize,
    best_col: *mut usize,
) -> HxStatus {
    guard(|| {
        let Some(p) = p.as_ref() else {
            return fail(HxStatus::NullPointer, "position is null");
        };
        if winner.is_null() || best_row.is_null() || best_col.is_null() {
            return fail(HxStatus::NullPointer, "null out-pointer");
        }
        match solve(&p.inner) {
            Ok(r) => {
                *winner = r.winner.into();
                let (i, j) = r.best_move.unwrap_or((usize::MAX, usize::MAX));
                *best_row = i;
                *best_col = j;
                HxStatus::Ok
            }
            Err(e) => fail(solve_status(&e), e.to_string()),
        }
    })
}

/// Text form of the position.
///
/// # Safety
/// `p` must be a live handle; `buf` must hold `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn hx_position_to_text(
    p: *const HxPosition,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> HxStatus {
    guard(|| match p.as_ref() {
        Some(p) => write_str(&p.inner.coloring.to_text(), buf, len, needed),
        None => fail(HxStatus::NullPointer, "position is null"),
    })
}

/// # Safety
/// `p` must come from this library or be NULL; it must not be used after.
#[no_mangle]
pub unsafe extern "C" fn hx_position_free(p: *mut HxPosition) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Winner of a full coloring given row by row: 1 = White, 2 = Black.
///
/// # Safety
/// `cells` must hold `rows·cols` bytes.
#[no_mangle]
pub unsafe extern "C" fn hx_winner_2d(rows: usize, cols: usize, cells: *const u8, winner: *mut HxPlayer) -> HxStatus {
    guard(|| {
        if cells.is_null() || winner.is_null() {
            return fail(HxStatus::NullPointer, "null argument");
        }
        let b = match HexBoard2D::new(rows, cols) {
            Ok(b) => b,
            Err(e) => return fail(hex_status(&e), e.to_string()),
        };
        let raw = std::slice::from_raw_parts(cells, b.tiles());
        let mut c = Coloring2D::empty(b);
        for (t, &v) in raw.iter().enumerate() {
            let (i, j) = b.coords(t);
            let cell = match v {
                1 => Cell::White,
                2 => Cell::Black,
                _ => return fail(HxStatus::InvalidArgument, format!("tile {t} is not colored")),
            };
            c.set(i, j, cell);
        }
        match winner_2d(&c) {
            Ok(w) => {
                *winner = w.winner.into();
                HxStatus::Ok
            }
            Err(e) => fail(hex_status(&e), e.to_string()),
        }
    })
}

/// Parses the set-family text format.
///
/// # Safety
/// `text` must be NUL-terminated; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn hx_setfam_parse(s: *const c_char, out: *mut *mut HxSetFamily) -> HxStatus {
    guard(|| {
        if out.is_null() {
            return fail(HxStatus::NullPointer, "out is null");
        }
        let t = match text(s) {
            Ok(t) => t,
            Err(st) => return st,
        };
        match parse_family(t) {
            Ok((f, _)) => {
                *out = Box::into_raw(Box::new(HxSetFamily { inner: f }));
                HxStatus::Ok
            }
            Err(e) => fail(setfam_status(&e), e.to_string()),
        }
    })
}

/// Exact argument complexity and ground-set size.
///
/// # Safety
/// `f` must be a live handle; out-pointers valid.
#[no_mangle]
pub unsafe extern "C" fn hx_setfam_complexity(f: *const HxSetFamily, c: *mut usize, m: *mut usize) -> HxStatus {
    guard(|| {
        let Some(f) = f.as_ref() else {
            return fail(HxStatus::NullPointer, "family is null");
        };
        if c.is_null() || m.is_null() {
            return fail(HxStatus::NullPointer, "null out-pointer");
        }
        match argument_complexity(&f.inner) {
            Ok(v) => {
                *c = v;
                *m = f.inner.m();
                HxStatus::Ok
            }
            Err(e) => fail(setfam_status(&e), e.to_string()),
        }
    })
}

/// # Safety
/// `f` must come from this library or be NULL.
#[no_mangle]
pub unsafe extern "C" fn hx_setfam_free(f: *mut HxSetFamily) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Parses the d-interval text format (`dint d partite|homogeneous`).
///
/// # Safety
/// `text` must be NUL-terminated; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn hx_dint_parse(s: *const c_char, out: *mut *mut HxDIntervalFamily) -> HxStatus {
    guard(|| {
        if out.is_null() {
            return fail(HxStatus::NullPointer, "out is null");
        }
        let t = match text(s) {
            Ok(t) => t,
            Err(st) => return st,
        };
        match DIntervalFamily::parse(t) {
            Ok(f) => {
                *out = Box::into_raw(Box::new(HxDIntervalFamily { inner: f }));
                HxStatus::Ok
            }
            Err(e) => fail(dint_status(&e), e.to_string()),
        }
    })
}

/// Packing and transversal numbers; the common fractional value
/// `ν* = τ*` is written as `p/q` into `buf`.
///
/// # Safety
/// `f` must be a live handle; `buf` must hold `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn hx_dint_numbers(
    f: *const HxDIntervalFamily,
    nu_out: *mut usize,
    tau_out: *mut usize,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> HxStatus {
    guard(|| {
        let Some(f) = f.as_ref() else {
            return fail(HxStatus::NullPointer, "family is null");
        };
        if nu_out.is_null() || tau_out.is_null() {
            return fail(HxStatus::NullPointer, "null out-pointer");
        }
        let res = (|| Ok::<_, DIntervalError>((nu(&f.inner)?.size, tau(&f.inner)?.size, nu_star_tau_star(&f.inner)?)))();
        match res {
            Ok((n, t, frac)) => {
                *nu_out = n;
                *tau_out = t;
                write_str(&frac.value.to_string(), buf, len, needed)
            }
            Err(e) => fail(dint_status(&e), e.to_string()),
        }
    })
}

/// # Safety
/// `f` must come from this library or be NULL.
#[no_mangle]
pub unsafe extern "C" fn hx_dint_free(f: *mut HxDIntervalFamily) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Self-map of `[0,1]^dim`: reads `dim` values from `x`, writes `dim`
/// values to `out`.
pub type HxCubeMapFn = Option<extern "C" fn(x: *const f64, out: *mut f64, dim: usize, user: *mut c_void)>;

struct Callback {
    f: extern "C" fn(*const f64, *mut f64, usize, *mut c_void),
    user: *mut c_void,
}

impl Callback {
    fn call(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; x.len()];
        (self.f)(x.as_ptr(), out.as_mut_ptr(), x.len(), self.user);
        out
    }
}

// The callback only runs on the calling thread, inside hx_brouwer_fixed_point.
unsafe impl Send for Callback {}
unsafe impl Sync for Callback {}

/// Point with `|f(x) − x|_∞ < eps` for a caller-supplied map. `point`
/// must hold `dim` doubles.
///
/// # Safety
/// `f` must be callable with the given `user` pointer; `point` and
/// `residual` must be valid.
#[no_mangle]
pub unsafe extern "C" fn hx_brouwer_fixed_point(
    dim: usize,
    f: HxCubeMapFn,
    user: *mut c_void,
    eps: f64,
    point: *mut f64,
    residual: *mut f64,
) -> HxStatus {
    guard(|| {
        let Some(f) = f else {
            return fail(HxStatus::NullPointer, "map is null");
        };
        if point.is_null() || residual.is_null() {
            return fail(HxStatus::NullPointer, "null out-pointer");
        }
        if dim == 0 {
            return fail(HxStatus::InvalidArgument, "dim must be positive");
        }
        let cb = Callback { f, user };
        let map = CubeMap::new(dim, move |x: &[f64]| cb.call(x));
        match approx_fixed_point(&map, eps) {
            Ok(fp) => {
                ptr::copy_nonoverlapping(fp.point.as_ptr(), point, dim);
                *residual = fp.residual;
                HxStatus::Ok
            }
            Err(e) => fail(HxStatus::InvalidArgument, e.to_string()),
        }
    })
}
