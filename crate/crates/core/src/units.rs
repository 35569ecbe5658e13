//! Unit conversions for the I/O boundary.
//!
//! Everything inside the library is SI: meters, radians, seconds.
//! Front ends that speak millimeters, degrees or hertz convert on the
//! way in and out with these helpers.

use std::f64::consts::{PI, TAU};

pub fn mm_to_m(mm: f64) -> f64 {
    mm * 1e-3
}

pub fn m_to_mm(m: f64) -> f64 {
    m * 1e3
}

pub fn deg_to_rad(deg: f64) -> f64 {
    deg * PI / 180.0
}

pub fn rad_to_deg(rad: f64) -> f64 {
    rad * 180.0 / PI
}

pub fn hz_to_rad_s(hz: f64) -> f64 {
    hz * TAU
}

pub fn rad_s_to_hz(omega: f64) -> f64 {
    omega / TAU
}

/// Wraps an angle into (-pi, pi].
pub fn wrap_angle(a: f64) -> f64 {
    let w = a.rem_euclid(TAU);
    if w > PI {
        w - TAU
    } else {
        w
    }
}
