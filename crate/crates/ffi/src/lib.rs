//! C ABI over `liouville-core`.
//!
//! Handles are opaque and owned by the caller once returned; free them with
//! the matching `*_free` function. Every fallible call returns an
//! [`LvStatus`]; on failure `lv_last_error` describes the problem on the
//! calling thread. Strings returned through out-parameters are freed with
//! `lv_string_free`.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use libc::{c_char, c_int};
use liouville_core::cli::config::Number;
use liouville_core::cli::{classify_loaded, Loaded, MetricConfig};
use liouville_core::expr::{evaluate, GaussRational};
use liouville_core::invariants::{order_of, DerivedInvariants, InvariantFrame};
use liouville_core::mobility::killing_dimension;
use liouville_core::oracle::{integral_space_dimension, AnsatzSpec};

/// Result codes. The first three match the command-line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LvStatus {
    Ok = 0,
    /// A zero test on the decision path was undecided.
    Inconclusive = 1,
    InputError = 2,
    NullPointer = 3,
    Internal = 4,
}

/// A metric description: entries, parameters, sampling box and policy.
pub struct LvMetric {
    cfg: MetricConfig,
}

/// Result of a classification.
pub struct LvReport {
    dims: (Option<u8>, Option<u8>),
    text: CString,
    json: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

type Failure = (LvStatus, String);

fn input(msg: impl ToString) -> Failure {
    (LvStatus::InputError, msg.to_string())
}

fn guard(f: impl FnOnce() -> Result<LvStatus, Failure>) -> LvStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err((s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            LvStatus::Internal
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err((LvStatus::NullPointer, format!("{what} is NULL")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| input(format!("{what} is not UTF-8")))
}

unsafe fn metric_ref<'a>(m: *const LvMetric) -> Result<&'a LvMetric, Failure> {
    m.as_ref()
        .ok_or((LvStatus::NullPointer, "metric handle is NULL".into()))
}

fn loaded(m: &LvMetric) -> Result<Loaded, Failure> {
    m.cfg.clone().load().map_err(input)
}

fn out_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " "))
        .unwrap_or_default()
        .into_raw()
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn lv_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message for the last failure on this thread. Valid until the next call
/// that fails on the same thread.
#[no_mangle]
pub extern "C" fn lv_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Metric `g11 dx^2 + 2 g12 dx dy + g22 dy^2` in coordinates `x, y`.
/// `g12` may be NULL for a diagonal metric. Entries are parsed when the
/// metric is used, so parameters may be declared afterwards.
///
/// # Safety
/// String arguments must be NULL or NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lv_metric_new(
    g11: *const c_char,
    g12: *const c_char,
    g22: *const c_char,
    out: *mut *mut LvMetric,
) -> LvStatus {
    guard(|| {
        if out.is_null() {
            return Err((LvStatus::NullPointer, "out is NULL".into()));
        }
        let cfg = MetricConfig {
            g11: text(g11, "g11")?.to_string(),
            g12: if g12.is_null() {
                None
            } else {
                Some(text(g12, "g12")?.to_string())
            },
            g22: text(g22, "g22")?.to_string(),
            ..Default::default()
        };
        *out = Box::into_raw(Box::new(LvMetric { cfg }));
        Ok(LvStatus::Ok)
    })
}

/// Metric from the text of a config file.
///
/// # Safety
/// `config` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lv_metric_from_config(
    config: *const c_char,
    out: *mut *mut LvMetric,
) -> LvStatus {
    guard(|| {
        if out.is_null() {
            return Err((LvStatus::NullPointer, "out is NULL".into()));
        }
        let cfg = MetricConfig::from_toml(text(config, "config")?).map_err(input)?;
        cfg.clone().load().map_err(input)?;
        *out = Box::into_raw(Box::new(LvMetric { cfg }));
        Ok(LvStatus::Ok)
    })
}

/// Declares or overwrites a parameter with a rational value such as `"3/2"`.
///
/// # Safety
/// `m` must come from `lv_metric_new` or `lv_metric_from_config`.
#[no_mangle]
pub unsafe extern "C" fn lv_metric_set_param(
    m: *mut LvMetric,
    name: *const c_char,
    value: *const c_char,
) -> LvStatus {
    guard(|| {
        let m = m
            .as_mut()
            .ok_or((LvStatus::NullPointer, "metric handle is NULL".to_string()))?;
        let (name, value) = (text(name, "name")?, text(value, "value")?);
        let mut cfg = m.cfg.clone();
        cfg.params
            .insert(name.to_string(), Number::Text(value.to_string()));
        cfg.params().map_err(input)?;
        m.cfg = cfg;
        Ok(LvStatus::Ok)
    })
}

/// Sampling box `[x0, x1] x [y0, y1]` with rational bounds.
///
/// # Safety
/// `m` must be a live handle; strings must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn lv_metric_set_box(
    m: *mut LvMetric,
    x0: *const c_char,
    x1: *const c_char,
    y0: *const c_char,
    y1: *const c_char,
) -> LvStatus {
    guard(|| {
        let m = m
            .as_mut()
            .ok_or((LvStatus::NullPointer, "metric handle is NULL".to_string()))?;
        let b = [
            text(x0, "x0")?,
            text(x1, "x1")?,
            text(y0, "y0")?,
            text(y1, "y1")?,
        ]
        .map(|s| Number::Text(s.into()));
        let mut cfg = m.cfg.clone();
        cfg.bx = Some(b);
        cfg.sample_box().map_err(input)?;
        m.cfg = cfg;
        Ok(LvStatus::Ok)
    })
}

/// Orientation `+1` or `-1`.
///
/// # Safety
/// `m` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn lv_metric_set_orientation(
    m: *mut LvMetric,
    orientation: c_int,
) -> LvStatus {
    guard(|| {
        let m = m
            .as_mut()
            .ok_or((LvStatus::NullPointer, "metric handle is NULL".to_string()))?;
        if orientation != 1 && orientation != -1 {
            return Err(input(format!(
                "orientation must be 1 or -1, got {orientation}"
            )));
        }
        m.cfg.orientation = Some(orientation as i64);
        Ok(LvStatus::Ok)
    })
}

/// Seed of the sample-point generator.
///
/// # Safety
/// `m` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn lv_metric_set_seed(m: *mut LvMetric, seed: u64) -> LvStatus {
    guard(|| {
        let m = m
            .as_mut()
            .ok_or((LvStatus::NullPointer, "metric handle is NULL".to_string()))?;
        m.cfg.seed = Some(seed);
        Ok(LvStatus::Ok)
    })
}

/// # Safety
/// `m` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lv_metric_free(m: *mut LvMetric) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Classifies the metric. On `LV_STATUS_INCONCLUSIVE` the report is still
/// written and its dimensions read as -1.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lv_classify(m: *const LvMetric, out: *mut *mut LvReport) -> LvStatus {
    guard(|| {
        if out.is_null() {
            return Err((LvStatus::NullPointer, "out is NULL".into()));
        }
        let l = loaded(metric_ref(m)?)?;
        let (r, m) = classify_loaded(&l).map_err(input)?;
        let rep = LvReport {
            dims: m.verdict(),
            text: CString::new(r.render()).unwrap_or_default(),
            json: CString::new(r.to_json().to_string()).unwrap_or_default(),
        };
        *out = Box::into_raw(Box::new(rep));
        Ok(if m.is_conclusive() {
            LvStatus::Ok
        } else {
            LvStatus::Inconclusive
        })
    })
}

/// Number of Killing fields (0, 1 or 3).
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lv_killing_dimension(m: *const LvMetric, out: *mut c_int) -> LvStatus {
    guard(|| {
        if out.is_null() {
            return Err((LvStatus::NullPointer, "out is NULL".into()));
        }
        let l = loaded(metric_ref(m)?)?;
        let r = killing_dimension(&l.metric, &l.domain).map_err(input)?;
        match r.dim_j1 {
            Some(d) => {
                *out = d as c_int;
                Ok(LvStatus::Ok)
            }
            None => {
                *out = -1;
                Ok(LvStatus::Inconclusive)
            }
        }
    })
}

/// Number of linear integrals, or -1 if inconclusive or `r` is NULL.
///
/// # Safety
/// `r` must be NULL or a live report.
#[no_mangle]
pub unsafe extern "C" fn lv_report_dim_j1(r: *const LvReport) -> c_int {
    r.as_ref().and_then(|r| r.dims.0).map_or(-1, |d| d as c_int)
}

/// Number of quadratic integrals, or -1 if inconclusive or `r` is NULL.
///
/// # Safety
/// `r` must be NULL or a live report.
#[no_mangle]
pub unsafe extern "C" fn lv_report_dim_j2(r: *const LvReport) -> c_int {
    r.as_ref().and_then(|r| r.dims.1).map_or(-1, |d| d as c_int)
}

/// Text report, owned by `r`.
///
/// # Safety
/// `r` must be NULL or a live report.
#[no_mangle]
pub unsafe extern "C" fn lv_report_text(r: *const LvReport) -> *const c_char {
    r.as_ref().map_or(ptr::null(), |r| r.text.as_ptr())
}

/// JSON form of the report, owned by `r`.
///
/// # Safety
/// `r` must be NULL or a live report.
#[no_mangle]
pub unsafe extern "C" fn lv_report_json(r: *const LvReport) -> *const c_char {
    r.as_ref().map_or(ptr::null(), |r| r.json.as_ptr())
}

/// # Safety
/// `r` must be NULL or a report not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lv_report_free(r: *mut LvReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Value of an invariant (`I2` .. `I7f`, `J4`, `J5`) at the rational point
/// `(x, y)`, written as text to `*out`.
///
/// # Safety
/// `m` must be a live handle; strings must be NUL-terminated; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn lv_invariant_at(
    m: *const LvMetric,
    name: *const c_char,
    x: *const c_char,
    y: *const c_char,
    out: *mut *mut c_char,
) -> LvStatus {
    guard(|| {
        if out.is_null() {
            return Err((LvStatus::NullPointer, "out is NULL".into()));
        }
        let l = loaded(metric_ref(m)?)?;
        let name = text(name, "name")?;
        let parse = |s: &str| {
            liouville_core::expr::number::parse_rational(s)
                .map(GaussRational::real)
                .ok_or_else(|| input(format!("`{s}` is not a rational number")))
        };
        let (px, py) = (parse(text(x, "x")?)?, parse(text(y, "y")?)?);
        let order = match name {
            "J4" | "J5" => 7,
            _ => order_of(name)
                .filter(|o| (2..=7).contains(o))
                .ok_or_else(|| input(format!("unknown invariant `{name}`")))?,
        };
        let frame = InvariantFrame::new(&l.metric, order).map_err(input)?;
        let e = match name {
            "J4" => DerivedInvariants::new(&frame).map_err(input)?.j4,
            "J5" => DerivedInvariants::new(&frame).map_err(input)?.j5,
            _ => frame
                .get(name)
                .cloned()
                .ok_or_else(|| input(format!("unknown invariant `{name}`")))?,
        };
        let coords = l.metric.coord_names();
        let mut assign = vec![(coords[0], px), (coords[1], py)];
        assign.extend(l.metric.params.iter().map(|(n, v)| (n.as_str(), v.clone())));
        let v = evaluate(&e, coords, &assign, l.domain.policy.mode).map_err(input)?;
        *out = out_string(v.to_string());
        Ok(LvStatus::Ok)
    })
}

/// Oracle lower bound on the number of degree-`degree` integrals over the
/// monomials `x^a y^b`, `a` in `[x0, x1]`, `b` in `[y0, y1]`.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lv_oracle_dimension(
    m: *const LvMetric,
    degree: c_int,
    x0: c_int,
    x1: c_int,
    y0: c_int,
    y1: c_int,
    out: *mut c_int,
) -> LvStatus {
    guard(|| {
        if out.is_null() {
            return Err((LvStatus::NullPointer, "out is NULL".into()));
        }
        let l = loaded(metric_ref(m)?)?;
        if degree < 1 {
            return Err(input(format!("degree {degree} must be positive")));
        }
        let spec = AnsatzSpec::box_range((x0, x1), (y0, y1));
        let d = integral_space_dimension(&l.metric, degree as usize, &spec).map_err(input)?;
        *out = d.dimension as c_int;
        Ok(LvStatus::Ok)
    })
}

/// Frees a string returned through an out-parameter.
///
/// # Safety
/// `s` must be NULL or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
