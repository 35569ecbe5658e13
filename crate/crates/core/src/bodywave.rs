//! Carangiform body-wave model.
//!
//! The midline of a cruising carangiform swimmer is a traveling wave
//! `y(x, t) = A(x) * sin(k*x + omega*t)` whose amplitude envelope grows
//! toward the tail as the quadratic `A(x) = c1 + c2*x + c3*x^2`. The tail
//! itself can be summarized by two sinusoidal targets: the lateral
//! translation of the caudal peduncle and the swing angle of the caudal
//! fin, a quarter-ish period apart.

use std::f64::consts::TAU;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::units::wrap_angle;

/// Coefficients of the midline undulation, all SI.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BodyWaveParams {
    c1: f64,
    c2: f64,
    c3: f64,
    wavelength: f64,
    angular_frequency: f64,
    body_length: f64,
}

impl BodyWaveParams {
    /// Validates and builds body-wave parameters.
    ///
    /// `c1` is in meters, `c2` dimensionless, `c3` in 1/m. The envelope
    /// must be nonnegative over the whole body, `[0, body_length]`.
    pub fn new(
        c1: f64,
        c2: f64,
        c3: f64,
        wavelength: f64,
        angular_frequency: f64,
        body_length: f64,
    ) -> Result<Self> {
        for (name, v) in [
            ("wavelength", wavelength),
            ("angular_frequency", angular_frequency),
            ("body_length", body_length),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidParams {
                    name: "BodyWaveParams",
                    reason: format!("{name} must be positive and finite, got {v}"),
                });
            }
        }
        let p = Self {
            c1,
            c2,
            c3,
            wavelength,
            angular_frequency,
            body_length,
        };
        let min = p.envelope_min();
        if min < 0.0 {
            return Err(Error::InvalidParams {
                name: "BodyWaveParams",
                reason: format!("amplitude envelope dips to {min} m inside [0, {body_length}] m"),
            });
        }
        Ok(p)
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn c2(&self) -> f64 {
        self.c2
    }

    pub fn c3(&self) -> f64 {
        self.c3
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    pub fn angular_frequency(&self) -> f64 {
        self.angular_frequency
    }

    pub fn body_length(&self) -> f64 {
        self.body_length
    }

    /// Body wave number k = 2*pi / wavelength.
    pub fn wave_number(&self) -> f64 {
        TAU / self.wavelength
    }

    /// Wave period T = 2*pi / omega.
    pub fn period(&self) -> f64 {
        TAU / self.angular_frequency
    }

    fn envelope_at(&self, x: f64) -> f64 {
        self.c1 + self.c2 * x + self.c3 * x * x
    }

    /// Minimum of the quadratic envelope over `[0, body_length]`.
    fn envelope_min(&self) -> f64 {
        let mut min = self.envelope_at(0.0).min(self.envelope_at(self.body_length));
        if self.c3 != 0.0 {
            let vertex = -self.c2 / (2.0 * self.c3);
            if vertex > 0.0 && vertex < self.body_length {
                min = min.min(self.envelope_at(vertex));
            }
        }
        min
    }

    fn check_x(&self, x: f64, name: &'static str) -> Result<()> {
        if x < 0.0 || x > self.body_length || !x.is_finite() {
            return Err(Error::OutOfRange {
                name,
                value: x,
                min: 0.0,
                max: self.body_length,
            });
        }
        Ok(())
    }
}

/// Ideal sinusoidal tail-motion limits, SI.
///
/// Peduncle translation follows `H(t) = h_max * sin(omega*t)` and fin
/// rotation `theta(t) = theta_max * sin(omega*t + phase_phi)`, so
/// `phase_phi` is the phase lead of rotation over translation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailTargets {
    h_max: f64,
    theta_max: f64,
    omega: f64,
    phase_phi: f64,
}

impl TailTargets {
    pub fn new(h_max: f64, theta_max: f64, omega: f64, phase_phi: f64) -> Result<Self> {
        if !h_max.is_finite() || h_max <= 0.0 {
            return Err(Error::InvalidParams {
                name: "TailTargets",
                reason: format!("h_max must be positive, got {h_max}"),
            });
        }
        if theta_max.is_nan() || theta_max <= 0.0 || theta_max >= std::f64::consts::FRAC_PI_2 {
            return Err(Error::InvalidParams {
                name: "TailTargets",
                reason: format!("theta_max must lie in (0, pi/2), got {theta_max} rad"),
            });
        }
        if !omega.is_finite() || omega <= 0.0 {
            return Err(Error::InvalidParams {
                name: "TailTargets",
                reason: format!("omega must be positive, got {omega}"),
            });
        }
        if !phase_phi.is_finite() {
            return Err(Error::InvalidParams {
                name: "TailTargets",
                reason: format!("phase_phi must be finite, got {phase_phi}"),
            });
        }
        Ok(Self {
            h_max,
            theta_max,
            omega,
            phase_phi,
        })
    }

    pub fn h_max(&self) -> f64 {
        self.h_max
    }

    pub fn theta_max(&self) -> f64 {
        self.theta_max
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn phase_phi(&self) -> f64 {
        self.phase_phi
    }
}

/// One point of a sampled midline grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MidlineSample {
    pub x: f64,
    pub t: f64,
    pub y: f64,
}

/// Amplitude envelope `A(x) = c1 + c2*x + c3*x^2`.
pub fn amplitude_envelope(p: &BodyWaveParams, x: f64) -> Result<f64> {
    p.check_x(x, "x")?;
    Ok(p.envelope_at(x))
}

/// Midline displacement `y(x, t) = A(x) * sin(k*x + omega*t)`.
pub fn midline(p: &BodyWaveParams, x: f64, t: f64) -> Result<f64> {
    p.check_x(x, "x")?;
    Ok(p.envelope_at(x) * (p.wave_number() * x + p.angular_frequency * t).sin())
}

/// Samples the midline on a uniform grid: `n_x` stations over
/// `[0, body_length]` (endpoints included) by `n_t` instants over `[0, T)`.
///
/// Rows are emitted time-major: all stations at t0, then all at t1, ...
pub fn sample_midline(p: &BodyWaveParams, n_x: usize, n_t: usize) -> Result<Vec<MidlineSample>> {
    if n_x < 2 {
        return Err(Error::BadCount {
            name: "n_x",
            value: n_x,
            min: 2,
        });
    }
    if n_t < 1 {
        return Err(Error::BadCount {
            name: "n_t",
            value: n_t,
            min: 1,
        });
    }
    let period = p.period();
    let mut out = Vec::with_capacity(n_x * n_t);
    for j in 0..n_t {
        let t = j as f64 * period / n_t as f64;
        for i in 0..n_x {
            let x = i as f64 * p.body_length / (n_x - 1) as f64;
            let y = midline(p, x, t)?;
            out.push(MidlineSample { x, t, y });
        }
    }
    Ok(out)
}

/// Evaluates the ideal tail targets at time `t`, returning
/// `(H, theta)` = (peduncle translation, fin swing angle).
pub fn tail_targets_of(targets: &TailTargets, t: f64) -> (f64, f64) {
    let h = targets.h_max * (targets.omega * t).sin();
    let theta = targets.theta_max * (targets.omega * t + targets.phase_phi).sin();
    (h, theta)
}

/// Derives tail-motion limits from a body wave.
///
/// `h_max` is the envelope value at the caudal-peduncle station
/// `x_peduncle`. `theta_max` is the largest fin angle over one period,
/// read as the midline slope at the body end:
/// `dy/dx = A'(x)*sin(kx + wt) + A(x)*k*cos(kx + wt)`, whose amplitude is
/// `hypot(A'(L), A(L)*k)`, so `theta_max = atan` of that amplitude.
/// `phase_phi` is the phase lead of the fin-angle sinusoid over the
/// peduncle-translation sinusoid, wrapped into (-pi, pi].
pub fn derive_tail_targets(p: &BodyWaveParams, x_peduncle: f64) -> Result<TailTargets> {
    p.check_x(x_peduncle, "x_peduncle")?;
    let k = p.wave_number();
    let body_end = p.body_length;
    let h_max = p.envelope_at(x_peduncle);

    let env_slope = p.c2 + 2.0 * p.c3 * body_end;
    let slope_amplitude = f64::hypot(env_slope, p.envelope_at(body_end) * k);
    let theta_max = slope_amplitude.atan();

    // sin-phase of theta(t) is k*L + atan2(A*k, A'); of H(t) it is k*x_p.
    let theta_phase = k * body_end + f64::atan2(p.envelope_at(body_end) * k, env_slope);
    let h_phase = k * x_peduncle;
    let phase_phi = wrap_angle(theta_phase - h_phase);

    TailTargets::new(h_max, theta_max, p.angular_frequency, phase_phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    /// Wave parameters measured on live fish: c1=0.02, c2=0.08, c3=0.16,
    /// lambda=0.95 m, omega=2*pi rad/s. Body length is not part of that
    /// data set and is chosen per test.
    fn table1(body_length: f64) -> BodyWaveParams {
        BodyWaveParams::new(0.02, 0.08, 0.16, 0.95, TAU, body_length).unwrap()
    }

    #[test]
    fn envelope_at_head_is_c1() {
        let p = table1(1.0);
        assert_eq!(amplitude_envelope(&p, 0.0).unwrap(), 0.02);
    }

    #[test]
    fn envelope_at_one_meter() {
        let p = table1(1.0);
        // 0.02 + 0.08 + 0.16
        assert!((amplitude_envelope(&p, 1.0).unwrap() - 0.26).abs() < 1e-15);
    }

    #[test]
    fn zero_coefficients_give_zero_envelope() {
        let p = BodyWaveParams::new(0.0, 0.0, 0.0, 0.95, TAU, 1.0).unwrap();
        assert_eq!(amplitude_envelope(&p, 0.3).unwrap(), 0.0);
        assert_eq!(midline(&p, 0.7, 0.123).unwrap(), 0.0);
    }

    #[test]
    fn envelope_rejects_out_of_domain() {
        let p = table1(1.0);
        assert!(matches!(
            amplitude_envelope(&p, -0.1),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            amplitude_envelope(&p, 1.2),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn negative_envelope_rejected_at_construction() {
        // c3 < 0 strong enough to pull A(x) below zero inside the body.
        let err = BodyWaveParams::new(0.02, 0.0, -1.0, 0.95, TAU, 1.0).unwrap_err();
        assert!(matches!(err, Error::InvalidParams { .. }));
    }

    #[test]
    fn midline_zero_at_origin_time_zero() {
        let p = table1(1.0);
        assert_eq!(midline(&p, 0.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn midline_peaks_at_quarter_period() {
        let p = table1(1.0);
        // omega*t = pi/2 at t = 0.25 s for omega = 2*pi.
        assert!((midline(&p, 0.0, 0.25).unwrap() - 0.02).abs() < 1e-15);
    }

    #[test]
    fn midline_near_zero_after_full_wavelength() {
        let p = table1(1.0);
        // k*x = 2*pi at x = lambda.
        assert!(midline(&p, 0.95, 0.0).unwrap().abs() < 1e-12);
    }

    #[test]
    fn sample_grid_endpoints() {
        let p = table1(1.0);
        let g = sample_midline(&p, 2, 1).unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g[0].x, 0.0);
        assert_eq!(g[1].x, 1.0);
        assert_eq!(g[0].t, 0.0);
    }

    #[test]
    fn sample_counts_validated() {
        let p = table1(1.0);
        assert!(matches!(
            sample_midline(&p, 1, 4),
            Err(Error::BadCount { name: "n_x", .. })
        ));
        assert!(matches!(
            sample_midline(&p, 4, 0),
            Err(Error::BadCount { name: "n_t", .. })
        ));
    }

    #[test]
    fn samples_stay_within_envelope() {
        let p = table1(1.0);
        let grid = sample_midline(&p, 100, 8).unwrap();
        assert_eq!(grid.len(), 800);
        for s in grid {
            let a = amplitude_envelope(&p, s.x).unwrap();
            assert!(s.y.abs() <= a + 1e-15, "x={} t={} y={} a={}", s.x, s.t, s.y, a);
        }
    }

    #[test]
    fn envelope_tangency_with_dense_time_grid() {
        let p = table1(1.0);
        let grid = sample_midline(&p, 100, 32).unwrap();
        for i in 0..100 {
            let x = grid[i].x;
            let a = amplitude_envelope(&p, x).unwrap();
            let max_y = (0..32)
                .map(|j| grid[j * 100 + i].y.abs())
                .fold(0.0f64, f64::max);
            assert!(
                max_y >= 0.995 * a,
                "x={x}: max |y| = {max_y} < 0.995 * {a}"
            );
        }
    }

    #[test]
    fn tail_targets_at_reference_instants() {
        // h_max = 15.81 mm, theta_max = 43.88 deg, phi = 90 deg.
        let tt = TailTargets::new(0.01581, 43.88_f64.to_radians(), TAU, PI / 2.0).unwrap();
        let (h, th) = tail_targets_of(&tt, 0.0);
        assert_eq!(h, 0.0);
        assert!((th - 43.88_f64.to_radians()).abs() < 1e-12);

        // omega*t = pi/2 with 90 deg lead: translation at max, rotation at zero.
        let (h, th) = tail_targets_of(&tt, 0.25);
        assert!((h - 0.01581).abs() < 1e-12);
        assert!(th.abs() < 1e-12);
    }

    #[test]
    fn tail_targets_zero_phase_at_half_period() {
        let tt = TailTargets::new(0.01, 0.5, TAU, 0.0).unwrap();
        let (h, th) = tail_targets_of(&tt, 0.5); // omega*t = pi
        assert!(h.abs() < 1e-12);
        assert!(th.abs() < 1e-12);
    }

    #[test]
    fn derive_rejects_degenerate_wave() {
        let p = BodyWaveParams::new(0.0, 0.0, 0.0, 0.95, TAU, 1.0).unwrap();
        assert!(derive_tail_targets(&p, 0.5).is_err());
    }

    #[test]
    fn derived_h_max_is_envelope_at_peduncle() {
        let p = table1(0.95);
        let tt = derive_tail_targets(&p, 2.0 / 3.0 * 0.95).unwrap();
        // 0.02 + 0.08*(19/30) + 0.16*(19/30)^2, by hand.
        assert!((tt.h_max() - 0.13484444444444443).abs() < 1e-12);
        assert_eq!(tt.omega(), TAU);
    }

    /// Brute-force oracle for the largest fin angle: scan one period at
    /// 1e4 samples, then refine with golden-section search around the
    /// best sample.
    fn theta_max_scan_oracle(p: &BodyWaveParams) -> f64 {
        let slope = |t: f64| {
            let k = p.wave_number();
            let l = p.body_length();
            let u = k * l + p.angular_frequency() * t;
            let a = p.c1() + p.c2() * l + p.c3() * l * l;
            let ap = p.c2() + 2.0 * p.c3() * l;
            (ap * u.sin() + a * k * u.cos()).atan()
        };
        let period = p.period();
        let n = 10_000;
        let mut best_i = 0;
        let mut best = f64::MIN;
        for i in 0..n {
            let v = slope(i as f64 * period / n as f64);
            if v > best {
                best = v;
                best_i = i;
            }
        }
        // Golden-section refine on the bracketing interval.
        let golden = (5f64.sqrt() - 1.0) / 2.0;
        let mut lo = (best_i as f64 - 1.0) * period / n as f64;
        let mut hi = (best_i as f64 + 1.0) * period / n as f64;
        for _ in 0..200 {
            let c = hi - golden * (hi - lo);
            let d = lo + golden * (hi - lo);
            if slope(c) > slope(d) {
                hi = d;
            } else {
                lo = c;
            }
        }
        slope(0.5 * (lo + hi))
    }

    #[test]
    fn derived_theta_max_matches_scan_oracle() {
        let p = table1(0.95);
        let tt = derive_tail_targets(&p, 2.0 / 3.0 * 0.95).unwrap();
        let oracle = theta_max_scan_oracle(&p);
        assert!(
            (tt.theta_max() - oracle).abs() < 1e-9,
            "analytic {} vs scan {}",
            tt.theta_max(),
            oracle
        );
        // Regression: hypot(A'(L), A(L)*k).atan() for these coefficients.
        assert!((tt.theta_max() - 1.0220636791237223).abs() < 1e-12);
    }

    #[test]
    fn derived_phase_is_stable() {
        let p = table1(0.95);
        let tt = derive_tail_targets(&p, 2.0 / 3.0 * 0.95).unwrap();
        assert!((tt.phase_phi() - -2.8549689565951217).abs() < 1e-12);
    }

    #[test]
    fn derive_rejects_peduncle_outside_body() {
        let p = table1(0.95);
        assert!(matches!(
            derive_tail_targets(&p, 1.0),
            Err(Error::OutOfRange { .. })
        ));
    }
}
