//! `sin t / t`, `sinh t / t` and `atanh t / t` with the removable singularity
//! at `t = 0` filled in.
//!
//! Below the switchover `|t| < SERIES_SWITCH` the functions are evaluated by
//! their Taylor series through `t⁴`. The truncation error there is below
//! `|t|⁶ < 1e-24`, far under one ulp of the result (which is close to 1).

/// Magnitude of `t` below which the truncated series is used.
pub const SERIES_SWITCH: f64 = 1e-4;

/// `sin(t)/t`, with value 1 at the origin.
pub fn stable_sinc(t: f64) -> f64 {
    if t.abs() < SERIES_SWITCH {
        let t2 = t * t;
        1.0 - t2 / 6.0 * (1.0 - t2 / 20.0)
    } else {
        t.sin() / t
    }
}

/// `sinh(t)/t`, with value 1 at the origin.
pub fn stable_sinhc(t: f64) -> f64 {
    if t.abs() < SERIES_SWITCH {
        let t2 = t * t;
        1.0 + t2 / 6.0 * (1.0 + t2 / 20.0)
    } else {
        t.sinh() / t
    }
}

/// `atanh(t)/t` for `|t| < 1`, with value 1 at the origin.
pub fn stable_atanhc(t: f64) -> f64 {
    if t.abs() < SERIES_SWITCH {
        let t2 = t * t;
        1.0 + t2 * (1.0 / 3.0 + t2 / 5.0)
    } else {
        // std's atanh is not exactly odd; work with |t| to keep the result even.
        let a = t.abs();
        a.atanh() / a
    }
}
