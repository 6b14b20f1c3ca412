//! C interface: opaque scenario and star world handles, status codes and a
//! per-thread last error message.
//!
//! Every function returning `SwStatus` writes its result through an out
//! pointer and leaves it untouched on failure. Handles are released with the
//! matching `*_free` function; passing NULL to a free function is a no-op.

use starworlds::geom::Point2;
use starworlds::planner::{gamma, simulate, Termination};
use starworlds::run::starify;
use starworlds::scenario::{from_text, generate_random_scene, load_scenario, Scenario};
use starworlds::starworld::StarWorld;
use starworlds::Error;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Io = 4,
    /// Robot or goal inside an obstacle, or another geometric precondition.
    Geometry = 5,
    IterationLimit = 6,
    /// The formed world failed validation.
    Validation = 7,
    OutOfRange = 8,
    /// The output buffer was too small; the required size was reported.
    BufferTooSmall = 9,
    /// A panic was caught at the boundary.
    Internal = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwTermination {
    GoalReached = 0,
    MaxSteps = 1,
    Stalled = 2,
}

pub struct SwScenario(Scenario);

pub struct SwStarWorld(StarWorld);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> SwStatus {
    match e {
        Error::Parse { .. } | Error::SchemaVersion(_) => SwStatus::Parse,
        Error::MalformedInput(_) | Error::PlacementFailure(_) => SwStatus::InvalidArgument,
        Error::Io(_) => SwStatus::Io,
        Error::IterationLimit(_) => SwStatus::IterationLimit,
        Error::ValidationFailed(_) => SwStatus::Validation,
        _ => SwStatus::Geometry,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (SwStatus, String)>) -> SwStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            SwStatus::Ok
        }
        Ok(Err((s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            SwStatus::Internal
        }
    }
}

fn lib<T>(r: starworlds::Result<T>) -> Result<T, (SwStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (SwStatus, String) {
    (SwStatus::NullPointer, format!("`{what}` is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, (SwStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (SwStatus::InvalidArgument, format!("`{what}` is not UTF-8")))
}

unsafe fn world<'a>(w: *const SwStarWorld) -> Result<&'a StarWorld, (SwStatus, String)> {
    w.as_ref().map(|w| &w.0).ok_or_else(|| null("world"))
}

fn index(w: &StarWorld, i: usize) -> Result<(), (SwStatus, String)> {
    if i < w.len() {
        Ok(())
    } else {
        Err((SwStatus::OutOfRange, format!("obstacle index {i} out of range (world has {})", w.len())))
    }
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn sw_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Loads a scenario file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sw_scenario_load(path: *const c_char, out: *mut *mut SwScenario) -> SwStatus {
    guard(|| {
        let path = str_arg(path, "path")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let s = lib(load_scenario(Path::new(path)))?;
        *out = Box::into_raw(Box::new(SwScenario(s)));
        Ok(())
    })
}

/// Parses a scenario from text.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sw_scenario_parse(text: *const c_char, out: *mut *mut SwScenario) -> SwStatus {
    guard(|| {
        let text = str_arg(text, "text")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let s = lib(from_text(text))?;
        *out = Box::into_raw(Box::new(SwScenario(s)));
        Ok(())
    })
}

/// Generates a random scene with `n` obstacles.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sw_scenario_generate(n: usize, seed: u64, out: *mut *mut SwScenario) -> SwStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let s = lib(generate_random_scene(n, seed))?;
        *out = Box::into_raw(Box::new(SwScenario(s)));
        Ok(())
    })
}

/// Number of obstacles in the scenario before inflation; 0 for NULL.
///
/// # Safety
/// `s` must be NULL or a live scenario handle.
#[no_mangle]
pub unsafe extern "C" fn sw_scenario_obstacle_count(s: *const SwScenario) -> usize {
    s.as_ref().map_or(0, |s| s.0.obstacles.len())
}

/// # Safety
/// `s` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sw_scenario_free(s: *mut SwScenario) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Inflates, forms and validates the star world of a scenario.
///
/// # Safety
/// `s` must be a live scenario handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sw_starify(s: *const SwScenario, exclude_obstacle_points: bool, out: *mut *mut SwStarWorld) -> SwStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(|| null("scenario"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let mut sc = s.0.clone();
        sc.form.exclude_obstacle_points |= exclude_obstacle_points;
        let r = lib(starify(&sc))?;
        if !r.report.all_pass() {
            return Err((SwStatus::Validation, r.report.to_kv()));
        }
        *out = Box::into_raw(Box::new(SwStarWorld(r.world)));
        Ok(())
    })
}

/// Number of star obstacles; 0 for NULL.
///
/// # Safety
/// `w` must be NULL or a live world handle.
#[no_mangle]
pub unsafe extern "C" fn sw_world_len(w: *const SwStarWorld) -> usize {
    w.as_ref().map_or(0, |w| w.0.len())
}

/// Whether the world is disjoint (false for the fallback world and NULL).
///
/// # Safety
/// `w` must be NULL or a live world handle.
#[no_mangle]
pub unsafe extern "C" fn sw_world_is_disjoint(w: *const SwStarWorld) -> bool {
    w.as_ref().is_some_and(|w| w.0.is_disjoint())
}

/// Clustering passes used to form the world; 0 for NULL.
///
/// # Safety
/// `w` must be NULL or a live world handle.
#[no_mangle]
pub unsafe extern "C" fn sw_world_iterations(w: *const SwStarWorld) -> usize {
    w.as_ref().map_or(0, |w| w.0.iterations)
}

/// Centroid of the kernel points of star `i`.
///
/// # Safety
/// `w` must be a live world handle; `x` and `y` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn sw_world_kernel_centroid(w: *const SwStarWorld, i: usize, x: *mut f64, y: *mut f64) -> SwStatus {
    guard(|| {
        let w = world(w)?;
        index(w, i)?;
        if x.is_null() || y.is_null() {
            return Err(null("x/y"));
        }
        let c = w.obstacles[i].kernel_centroid();
        *x = c.x;
        *y = c.y;
        Ok(())
    })
}

/// `Γ` of point `(px, py)` against star `i`, centred at its kernel centroid.
///
/// # Safety
/// `w` must be a live world handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sw_world_gamma(w: *const SwStarWorld, i: usize, px: f64, py: f64, out: *mut f64) -> SwStatus {
    guard(|| {
        let w = world(w)?;
        index(w, i)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let q = Point2::new(px, py);
        if !q.is_finite() {
            return Err((SwStatus::InvalidArgument, "point is not finite".into()));
        }
        let s = &w.obstacles[i];
        *out = lib(gamma(s, s.kernel_centroid(), q))?;
        Ok(())
    })
}

/// Whether star `i` contains `(px, py)`.
///
/// # Safety
/// `w` must be a live world handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sw_world_contains(w: *const SwStarWorld, i: usize, px: f64, py: f64, out: *mut bool) -> SwStatus {
    guard(|| {
        let w = world(w)?;
        index(w, i)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = w.obstacles[i].contains(Point2::new(px, py));
        Ok(())
    })
}

/// # Safety
/// `w` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sw_world_free(w: *mut SwStarWorld) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

/// Runs the planner on the scenario and copies the trajectory as
/// interleaved `x, y` pairs into `xy`, which holds `capacity` points.
///
/// `n_points` receives the trajectory length. When it exceeds `capacity`
/// the first `capacity` points are written and `BufferTooSmall` returned.
///
/// # Safety
/// `s` must be a live scenario handle, `xy` valid for `2 * capacity`
/// doubles (or NULL with `capacity == 0`), `n_points` and `termination`
/// valid pointers.
#[no_mangle]
pub unsafe extern "C" fn sw_simulate(
    s: *const SwScenario,
    max_steps: usize,
    xy: *mut f64,
    capacity: usize,
    n_points: *mut usize,
    termination: *mut SwTermination,
) -> SwStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(|| null("scenario"))?;
        if n_points.is_null() || termination.is_null() || (xy.is_null() && capacity > 0) {
            return Err(null("output"));
        }
        let mut params = s.0.planner.clone();
        if max_steps > 0 {
            params.max_steps = max_steps;
        }
        let obs = lib(s.0.inflated_obstacles())?;
        let trace = lib(simulate(&obs, s.0.robot, s.0.goal, &s.0.form, &params))?;
        let n = trace.positions.len();
        for (k, q) in trace.positions.iter().take(capacity).enumerate() {
            *xy.add(2 * k) = q.x;
            *xy.add(2 * k + 1) = q.y;
        }
        *n_points = n;
        *termination = match trace.termination {
            Termination::GoalReached => SwTermination::GoalReached,
            Termination::MaxSteps => SwTermination::MaxSteps,
            Termination::Stalled => SwTermination::Stalled,
        };
        if n > capacity {
            return Err((SwStatus::BufferTooSmall, format!("trajectory has {n} points, buffer holds {capacity}")));
        }
        Ok(())
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sw_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    #[test]
    fn null_handles_are_reported() {
        let mut out = ptr::null_mut();
        assert_eq!(unsafe { sw_starify(ptr::null(), false, &mut out) }, SwStatus::NullPointer);
        assert!(out.is_null());
        let msg = unsafe { CStr::from_ptr(sw_last_error()) }.to_str().unwrap();
        assert!(msg.contains("scenario"));
        assert_eq!(unsafe { sw_world_len(ptr::null()) }, 0);
        unsafe { sw_world_free(ptr::null_mut()) };
    }
}
