//! C ABI over `bouncer-core`.
//!
//! Handles are opaque and owned by the caller: every `*_new` has a matching
//! `*_free`. Functions return a [`BouncerStatus`]; results go through out
//! pointers. After a non-OK status, [`bouncer_last_error`] describes it.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bouncer::free::{free_moments, psi_free};
use bouncer::special::{psi0_bouncer, psi0_moments};
use bouncer::{BouncerParams, Error, PacketParams, SpecialParams};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BouncerStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParams = 2,
    WrongSide = 3,
    Degenerate = 4,
    NoCollision = 5,
    InvalidGrid = 6,
    TailNotCaptured = 7,
    NotConverged = 8,
    GridMismatch = 9,
    NonFinite = 10,
    Panic = 99,
}

impl From<&Error> for BouncerStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidParams(_) => BouncerStatus::InvalidParams,
            Error::WrongSide(_) => BouncerStatus::WrongSide,
            Error::Degenerate => BouncerStatus::Degenerate,
            Error::NoCollision => BouncerStatus::NoCollision,
            Error::InvalidGrid(_) => BouncerStatus::InvalidGrid,
            Error::TailNotCaptured { .. } => BouncerStatus::TailNotCaptured,
            Error::NotConverged { .. } => BouncerStatus::NotConverged,
            Error::GridMismatch => BouncerStatus::GridMismatch,
            Error::NonFinite(_) => BouncerStatus::NonFinite,
        }
    }
}

/// ⟨x⟩, ⟨x²⟩, Δx, ⟨p⟩, ⟨p²⟩, Δp at `time`.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct BouncerMoments {
    pub time: f64,
    pub x_mean: f64,
    pub x2_mean: f64,
    pub x_sd: f64,
    pub p_mean: f64,
    pub p2_mean: f64,
    pub p_sd: f64,
}

impl From<bouncer::Moments> for BouncerMoments {
    fn from(m: bouncer::Moments) -> Self {
        BouncerMoments {
            time: m.time,
            x_mean: m.x_mean,
            x2_mean: m.x2_mean,
            x_sd: m.x_sd,
            p_mean: m.p_mean,
            p2_mean: m.p2_mean,
            p_sd: m.p_sd,
        }
    }
}

/// Free Gaussian packet.
pub struct BouncerPacket(PacketParams);

/// Mirror solution on x < 0.
pub struct BouncerMirror(BouncerParams);

/// Wall solution at rest at the origin.
pub struct BouncerPsi0(SpecialParams);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

/// Runs `body`, recording errors and panics for [`bouncer_last_error`].
fn guard(body: impl FnOnce() -> Result<(), BouncerStatus>) -> BouncerStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => BouncerStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => {
            set_error("internal panic".into());
            BouncerStatus::Panic
        }
    }
}

fn check<T>(r: bouncer::Result<T>) -> Result<T, BouncerStatus> {
    r.map_err(|e| {
        set_error(e.to_string());
        BouncerStatus::from(&e)
    })
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), BouncerStatus> {
    if out.is_null() {
        set_error("null output pointer".into());
        return Err(BouncerStatus::NullPointer);
    }
    out.write(value);
    Ok(())
}

unsafe fn deref<'a, T>(h: *const T) -> Result<&'a T, BouncerStatus> {
    h.as_ref().ok_or_else(|| {
        set_error("null handle".into());
        BouncerStatus::NullPointer
    })
}

/// Message for the last non-OK status on this thread, or NULL. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn bouncer_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bouncer_packet_new(
    x0: f64,
    p0: f64,
    alpha: f64,
    hbar: f64,
    mass: f64,
    out: *mut *mut BouncerPacket,
) -> BouncerStatus {
    guard(|| {
        let p = check(PacketParams::new(x0, p0, alpha, hbar, mass))?;
        write(out, Box::into_raw(Box::new(BouncerPacket(p))))
    })
}

/// # Safety
/// `h` must be NULL or come from [`bouncer_packet_new`], freed once.
#[no_mangle]
pub unsafe extern "C" fn bouncer_packet_free(h: *mut BouncerPacket) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// ψ_G(x, t).
///
/// # Safety
/// `h` must be a live handle; `re`, `im` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bouncer_packet_psi(
    h: *const BouncerPacket,
    x: f64,
    t: f64,
    re: *mut f64,
    im: *mut f64,
) -> BouncerStatus {
    guard(|| {
        let v = psi_free(&deref(h)?.0, x, t);
        write(re, v.re)?;
        write(im, v.im)
    })
}

/// # Safety
/// `h` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bouncer_packet_moments(
    h: *const BouncerPacket,
    t: f64,
    out: *mut BouncerMoments,
) -> BouncerStatus {
    guard(|| write(out, free_moments(&deref(h)?.0, t).into()))
}

/// Requires x0 ≤ 0 and (x0, p0) ≠ (0, 0).
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bouncer_mirror_new(
    x0: f64,
    p0: f64,
    alpha: f64,
    hbar: f64,
    mass: f64,
    out: *mut *mut BouncerMirror,
) -> BouncerStatus {
    guard(|| {
        let p = check(PacketParams::new(x0, p0, alpha, hbar, mass))?;
        let bp = check(BouncerParams::new(p))?;
        write(out, Box::into_raw(Box::new(BouncerMirror(bp))))
    })
}

/// # Safety
/// `h` must be NULL or come from [`bouncer_mirror_new`], freed once.
#[no_mangle]
pub unsafe extern "C" fn bouncer_mirror_free(h: *mut BouncerMirror) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// ψ̃(x, t); zero for x ≥ 0.
///
/// # Safety
/// `h` must be a live handle; `re`, `im` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bouncer_mirror_psi(
    h: *const BouncerMirror,
    x: f64,
    t: f64,
    re: *mut f64,
    im: *mut f64,
) -> BouncerStatus {
    guard(|| {
        let v = deref(h)?.0.psi(x, t);
        write(re, v.re)?;
        write(im, v.im)
    })
}

/// |ψ̃(xs[i], t)|² into `out[i]` for i < n.
///
/// # Safety
/// `xs` readable and `out` writable for `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn bouncer_mirror_density(
    h: *const BouncerMirror,
    t: f64,
    xs: *const f64,
    n: usize,
    out: *mut f64,
) -> BouncerStatus {
    guard(|| {
        let bp = &deref(h)?.0;
        if n == 0 {
            return Ok(());
        }
        if xs.is_null() || out.is_null() {
            set_error("null array".into());
            return Err(BouncerStatus::NullPointer);
        }
        let xs = std::slice::from_raw_parts(xs, n);
        let out = std::slice::from_raw_parts_mut(out, n);
        for (o, &x) in out.iter_mut().zip(xs) {
            *o = bp.psi(x, t).norm_sqr();
        }
        Ok(())
    })
}

/// # Safety
/// `h` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bouncer_mirror_z0(h: *const BouncerMirror, out: *mut f64) -> BouncerStatus {
    guard(|| write(out, deref(h)?.0.z0()))
}

/// Normalization constant N.
///
/// # Safety
/// `h` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bouncer_mirror_norm(h: *const BouncerMirror, out: *mut f64) -> BouncerStatus {
    guard(|| write(out, deref(h)?.0.norm_n()))
}

/// BOUNCER_STATUS_NO_COLLISION when the packet starts at or moves away from
/// the wall.
///
/// # Safety
/// `h` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bouncer_mirror_collision_time(h: *const BouncerMirror, out: *mut f64) -> BouncerStatus {
    guard(|| {
        let tc = deref(h)?.0.collision_time().ok_or(Error::NoCollision);
        write(out, check(tc)?)
    })
}

/// # Safety
/// `h` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bouncer_mirror_x2(h: *const BouncerMirror, t: f64, out: *mut f64) -> BouncerStatus {
    guard(|| write(out, deref(h)?.0.x2_expect(t)))
}

/// # Safety
/// `h` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bouncer_mirror_p2(h: *const BouncerMirror, out: *mut f64) -> BouncerStatus {
    guard(|| write(out, deref(h)?.0.p2_expect()))
}

/// Relative energy shift against the free packet.
///
/// # Safety
/// `h` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bouncer_mirror_energy_shift(h: *const BouncerMirror, out: *mut f64) -> BouncerStatus {
    guard(|| write(out, deref(h)?.0.energy_shift()))
}

/// Two-term ⟨x⟩ near the collision; `in_window` is 0 once |X(t)| > β_t.
///
/// # Safety
/// `h` must be a live handle; `value`, `in_window` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bouncer_mirror_x_mean_near_collision(
    h: *const BouncerMirror,
    t: f64,
    value: *mut f64,
    in_window: *mut bool,
) -> BouncerStatus {
    guard(|| {
        let near = deref(h)?.0.x_mean_near_collision(t);
        write(value, near.value)?;
        write(in_window, near.in_window)
    })
}

/// # Safety
/// `h` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bouncer_mirror_p_mean_at_collision(h: *const BouncerMirror, out: *mut f64) -> BouncerStatus {
    guard(|| write(out, check(deref(h)?.0.p_mean_at_collision())?))
}

/// Average force during the collision and its dimensional estimate.
///
/// # Safety
/// `h` must be a live handle; `force`, `estimate` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bouncer_mirror_effective_force(
    h: *const BouncerMirror,
    force: *mut f64,
    estimate: *mut f64,
) -> BouncerStatus {
    guard(|| {
        let f = check(deref(h)?.0.effective_force())?;
        write(force, f.force)?;
        write(estimate, f.dimensional_estimate)
    })
}

/// Ã(t) = ∫ψ̃*(x,0)ψ̃(x,t)dx.
///
/// # Safety
/// `h` must be a live handle; `re`, `im` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bouncer_mirror_autocorrelation(
    h: *const BouncerMirror,
    t: f64,
    re: *mut f64,
    im: *mut f64,
) -> BouncerStatus {
    guard(|| {
        let a = deref(h)?.0.autocorrelation(t);
        write(re, a.re)?;
        write(im, a.im)
    })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bouncer_psi0_new(
    alpha: f64,
    hbar: f64,
    mass: f64,
    out: *mut *mut BouncerPsi0,
) -> BouncerStatus {
    guard(|| {
        let sp = check(SpecialParams::at_origin(alpha, hbar, mass))?;
        write(out, Box::into_raw(Box::new(BouncerPsi0(sp))))
    })
}

/// # Safety
/// `h` must be NULL or come from [`bouncer_psi0_new`], freed once.
#[no_mangle]
pub unsafe extern "C" fn bouncer_psi0_free(h: *mut BouncerPsi0) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// # Safety
/// `h` must be a live handle; `re`, `im` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bouncer_psi0_psi(
    h: *const BouncerPsi0,
    x: f64,
    t: f64,
    re: *mut f64,
    im: *mut f64,
) -> BouncerStatus {
    guard(|| {
        let v = psi0_bouncer(&deref(h)?.0, x, t);
        write(re, v.re)?;
        write(im, v.im)
    })
}

/// # Safety
/// `h` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bouncer_psi0_moments(
    h: *const BouncerPsi0,
    t: f64,
    out: *mut BouncerMoments,
) -> BouncerStatus {
    guard(|| write(out, psi0_moments(&deref(h)?.0, t).into()))
}
