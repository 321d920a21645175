//! Flat C interface over [`crate::env::Env`].
//!
//! Every function returns a status code (`TERRA_OK` or a negative error)
//! unless documented otherwise; arrays travel as pointer plus length into
//! caller-owned buffers. Handles are not thread-safe, distinct handles are
//! independent.

use std::ffi::{c_char, c_int, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::atomic::{AtomicUsize, Ordering};

use crate::env::{self, Env, EnvError};

pub const TERRA_OK: c_int = 0;
pub const TERRA_ERR_NULL: c_int = -1;
pub const TERRA_ERR_UNKNOWN_ENV: c_int = -2;
pub const TERRA_ERR_DIMENSION: c_int = -3;
pub const TERRA_ERR_NOT_RESET: c_int = -4;
pub const TERRA_ERR_EPISODE_DONE: c_int = -5;
pub const TERRA_ERR_INVALID: c_int = -6;
pub const TERRA_ERR_INTERNAL: c_int = -7;

static VERSION_C: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
static LIVE: AtomicUsize = AtomicUsize::new(0);

/// Opaque environment handle.
pub struct TerraEnv {
    env: Env,
    info: Vec<(Vec<u8>, f64)>,
}

fn code(e: &EnvError) -> c_int {
    match e {
        EnvError::UnknownEnv { .. } => TERRA_ERR_UNKNOWN_ENV,
        EnvError::DimensionMismatch { .. } => TERRA_ERR_DIMENSION,
        EnvError::NotReset => TERRA_ERR_NOT_RESET,
        EnvError::EpisodeDone => TERRA_ERR_EPISODE_DONE,
        EnvError::NonFiniteAction => TERRA_ERR_INVALID,
        _ => TERRA_ERR_INTERNAL,
    }
}

fn guard(f: impl FnOnce() -> c_int) -> c_int {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(TERRA_ERR_INTERNAL)
}

/// Copies `name` NUL-terminated into `buf` if it fits; returns the length
/// without the terminator.
unsafe fn write_str(name: &[u8], buf: *mut c_char, len: usize) -> usize {
    if !buf.is_null() && len > name.len() {
        std::ptr::copy_nonoverlapping(name.as_ptr(), buf.cast::<u8>(), name.len());
        *buf.add(name.len()) = 0;
    }
    name.len()
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn terra_version() -> *const c_char {
    VERSION_C.as_ptr().cast()
}

/// Number of handles created and not yet destroyed.
#[no_mangle]
pub extern "C" fn terra_live_handles() -> usize {
    LIVE.load(Ordering::SeqCst)
}

#[no_mangle]
pub extern "C" fn terra_env_count() -> usize {
    env::list_envs().len()
}

/// Writes catalog name `index` into `buf`; returns its length, or -1 when
/// `index` is out of range. Call with a null `buf` to query the length.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn terra_env_name(index: usize, buf: *mut c_char, len: usize) -> isize {
    match env::env_names().get(index) {
        Some(n) => write_str(n.as_bytes(), buf, len) as isize,
        None => -1,
    }
}

/// Creates an environment by catalog name; null on failure with the reason in `*status`.
///
/// # Safety
/// `name` must be a valid NUL-terminated string; `status` null or writable.
#[no_mangle]
pub unsafe extern "C" fn terra_env_create(name: *const c_char, status: *mut c_int) -> *mut TerraEnv {
    let set = |c: c_int| {
        if !status.is_null() {
            *status = c;
        }
    };
    if name.is_null() {
        set(TERRA_ERR_NULL);
        return std::ptr::null_mut();
    }
    let Ok(name) = CStr::from_ptr(name).to_str() else {
        set(TERRA_ERR_INVALID);
        return std::ptr::null_mut();
    };
    match catch_unwind(|| env::make_env(name)) {
        Ok(Ok(env)) => {
            LIVE.fetch_add(1, Ordering::SeqCst);
            set(TERRA_OK);
            Box::into_raw(Box::new(TerraEnv { env, info: Vec::new() }))
        }
        Ok(Err(e)) => {
            set(code(&e));
            std::ptr::null_mut()
        }
        Err(_) => {
            set(TERRA_ERR_INTERNAL);
            std::ptr::null_mut()
        }
    }
}

/// # Safety
/// `handle` must come from [`terra_env_create`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn terra_env_destroy(handle: *mut TerraEnv) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
        LIVE.fetch_sub(1, Ordering::SeqCst);
    }
}

/// # Safety
/// `handle` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn terra_env_seed(handle: *mut TerraEnv, seed: u64) -> c_int {
    let Some(h) = handle.as_mut() else {
        return TERRA_ERR_NULL;
    };
    h.env.set_random_seed(seed);
    TERRA_OK
}

/// # Safety
/// `handle` must be a live handle; the out pointers null or writable.
#[no_mangle]
pub unsafe extern "C" fn terra_env_spaces(
    handle: *const TerraEnv,
    obs_dim: *mut usize,
    act_dim: *mut usize,
    terrain_len: *mut usize,
) -> c_int {
    let Some(h) = handle.as_ref() else {
        return TERRA_ERR_NULL;
    };
    for (p, v) in [(obs_dim, h.env.obs_dim()), (act_dim, h.env.act_dim()), (terrain_len, h.env.terrain_len())] {
        if !p.is_null() {
            *p = v;
        }
    }
    TERRA_OK
}

unsafe fn fill(lo: *mut f64, hi: *mut f64, len: usize, a: &[f64], b: &[f64]) -> c_int {
    if lo.is_null() || hi.is_null() {
        return TERRA_ERR_NULL;
    }
    if len != a.len() {
        return TERRA_ERR_DIMENSION;
    }
    std::ptr::copy_nonoverlapping(a.as_ptr(), lo, len);
    std::ptr::copy_nonoverlapping(b.as_ptr(), hi, len);
    TERRA_OK
}

/// # Safety
/// `lo` and `hi` must be valid for `len` doubles, `len` = act_dim.
#[no_mangle]
pub unsafe extern "C" fn terra_env_action_bounds(handle: *const TerraEnv, lo: *mut f64, hi: *mut f64, len: usize) -> c_int {
    let Some(h) = handle.as_ref() else {
        return TERRA_ERR_NULL;
    };
    let s = h.env.action_space();
    fill(lo, hi, len, &s.minimum, &s.maximum)
}

/// # Safety
/// `lo` and `hi` must be valid for `len` doubles, `len` = obs_dim.
#[no_mangle]
pub unsafe extern "C" fn terra_env_observation_bounds(
    handle: *const TerraEnv,
    lo: *mut f64,
    hi: *mut f64,
    len: usize,
) -> c_int {
    let Some(h) = handle.as_ref() else {
        return TERRA_ERR_NULL;
    };
    let (a, b) = h.env.observation_space();
    fill(lo, hi, len, &a, &b)
}

/// # Safety
/// `obs` must be valid for `obs_len` doubles, `obs_len` = obs_dim.
#[no_mangle]
pub unsafe extern "C" fn terra_env_reset(handle: *mut TerraEnv, obs: *mut f64, obs_len: usize) -> c_int {
    let Some(h) = handle.as_mut() else {
        return TERRA_ERR_NULL;
    };
    if obs.is_null() {
        return TERRA_ERR_NULL;
    }
    if obs_len != h.env.obs_dim() {
        return TERRA_ERR_DIMENSION;
    }
    guard(|| {
        h.env.reset();
        h.info.clear();
        h.env.observe_into(std::slice::from_raw_parts_mut(obs, obs_len));
        TERRA_OK
    })
}

/// Steps with `action`; writes the new observation, reward and done flag.
///
/// # Safety
/// Buffers must be valid for their stated lengths; `reward`/`done` writable.
#[no_mangle]
pub unsafe extern "C" fn terra_env_step(
    handle: *mut TerraEnv,
    action: *const f64,
    act_len: usize,
    obs: *mut f64,
    obs_len: usize,
    reward: *mut f64,
    done: *mut c_int,
) -> c_int {
    let Some(h) = handle.as_mut() else {
        return TERRA_ERR_NULL;
    };
    if action.is_null() || obs.is_null() || reward.is_null() || done.is_null() {
        return TERRA_ERR_NULL;
    }
    if obs_len != h.env.obs_dim() {
        return TERRA_ERR_DIMENSION;
    }
    let action = std::slice::from_raw_parts(action, act_len);
    guard(|| match h.env.step(action) {
        Ok(r) => {
            std::slice::from_raw_parts_mut(obs, obs_len).copy_from_slice(&r.observation.data);
            *reward = r.reward;
            *done = r.done as c_int;
            h.info = r.info.into_iter().map(|(k, v)| (k.into_bytes(), v)).collect();
            TERRA_OK
        }
        Err(e) => code(&e),
    })
}

/// Number of info entries from the last step.
///
/// # Safety
/// `handle` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn terra_env_info_len(handle: *const TerraEnv) -> usize {
    handle.as_ref().map_or(0, |h| h.info.len())
}

/// Info entry `index` of the last step (keys sorted): key into `key`, value into `*value`.
/// Returns the key length, or -1 when out of range.
///
/// # Safety
/// `key` null or valid for `key_len` bytes; `value` null or writable.
#[no_mangle]
pub unsafe extern "C" fn terra_env_info_entry(
    handle: *const TerraEnv,
    index: usize,
    key: *mut c_char,
    key_len: usize,
    value: *mut f64,
) -> isize {
    let Some((k, v)) = handle.as_ref().and_then(|h| h.info.get(index)) else {
        return -1;
    };
    if !value.is_null() {
        *value = *v;
    }
    write_str(k, key, key_len) as isize
}
