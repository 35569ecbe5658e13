//! Forward kinematics of the composite linkage.
//!
//! One motor shaft carries two cranks a fixed angle `phi` apart. Each
//! crank drives a chuted linkage through a pin, so the linkages translate
//! purely along Y like scotch yokes: `S_A = L1*cos(wt)`,
//! `S_B = L2*cos(wt + phi)`. The linkages articulate with two swing arms
//! `a` (driving, carries the caudal fin) and `b` (driven) that share the
//! pivot C. Solving the two-arm geometry yields the fin swing angle
//! `theta` and the pivot displacements `S_CY`, `S_CX`.
//!
//! Three solver routes are provided and must agree on symmetric
//! mechanisms:
//! * [`solve_general`] — arbitrary chute lengths `m`, `n` (offset
//!   `delta = m - n` between the articulation rails),
//! * [`solve_symmetric`] — the `m = n` (hence `a = b`) specialization,
//! * [`closed_form`] — the time-domain formula for fully symmetric
//!   mechanisms (`L1 = L2`, `a = b`, `m = n`):
//!   `theta = arcsin((L1/a) * sin(wt + phi/2) * sin(phi/2))`,
//!   `S_CY = (L1/2) * (cos(wt + phi) + cos(wt))`.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::units::wrap_angle;

/// Relative tolerance for the closure condition and symmetry checks.
const REL_TOL: f64 = 1e-9;

/// Below this slider offset (meters) the pose is resolved by its
/// continuous limit instead of the raw formulas.
const DS_EPS: f64 = 1e-12;

/// All linkage dimensions (meters) and the crank phase angle (radians).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MechanismParams {
    l1: f64,
    l2: f64,
    m_link: f64,
    n_link: f64,
    a_arm: f64,
    b_arm: f64,
    phase_phi: f64,
}

/// Closure condition `m + b = n + a`, to 1e-9 relative.
///
/// This is what lets the linkages and swing arms coincide at the motion
/// boundaries; [`MechanismParams::new`] enforces it, this predicate is
/// exposed for checking raw dimension sets.
pub fn closure_holds(m_link: f64, n_link: f64, a_arm: f64, b_arm: f64) -> bool {
    let lhs = m_link + b_arm;
    let rhs = n_link + a_arm;
    (lhs - rhs).abs() <= REL_TOL * lhs.max(1.0)
}

impl MechanismParams {
    pub fn new(
        l1: f64,
        l2: f64,
        m_link: f64,
        n_link: f64,
        a_arm: f64,
        b_arm: f64,
        phase_phi: f64,
    ) -> Result<Self> {
        for (name, v) in [
            ("l1", l1),
            ("l2", l2),
            ("m_link", m_link),
            ("n_link", n_link),
            ("a_arm", a_arm),
            ("b_arm", b_arm),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidParams {
                    name: "MechanismParams",
                    reason: format!("{name} must be a positive length, got {v}"),
                });
            }
        }
        if phase_phi.is_nan() || phase_phi <= 0.0 || phase_phi >= PI {
            return Err(Error::InvalidParams {
                name: "MechanismParams",
                reason: format!("phase_phi must lie in (0, pi), got {phase_phi} rad"),
            });
        }
        if !closure_holds(m_link, n_link, a_arm, b_arm) {
            return Err(Error::ClosureViolation {
                lhs: m_link + b_arm,
                rhs: n_link + a_arm,
            });
        }
        if l1 * (phase_phi / 2.0).sin() > a_arm {
            return Err(Error::InvalidParams {
                name: "MechanismParams",
                reason: format!(
                    "unreachable swing: l1*sin(phi/2) = {} exceeds a_arm = {a_arm}",
                    l1 * (phase_phi / 2.0).sin()
                ),
            });
        }
        Ok(Self {
            l1,
            l2,
            m_link,
            n_link,
            a_arm,
            b_arm,
            phase_phi,
        })
    }

    /// Builds a fully symmetric mechanism: equal cranks, equal arms,
    /// equal chute linkages.
    pub fn symmetric(l1: f64, arm: f64, phase_phi: f64, chute: f64) -> Result<Self> {
        Self::new(l1, l1, chute, chute, arm, arm, phase_phi)
    }

    pub fn l1(&self) -> f64 {
        self.l1
    }

    pub fn l2(&self) -> f64 {
        self.l2
    }

    pub fn m_link(&self) -> f64 {
        self.m_link
    }

    pub fn n_link(&self) -> f64 {
        self.n_link
    }

    pub fn a_arm(&self) -> f64 {
        self.a_arm
    }

    pub fn b_arm(&self) -> f64 {
        self.b_arm
    }

    pub fn phase_phi(&self) -> f64 {
        self.phase_phi
    }

    /// Rail offset `delta = m - n` between the two articulation points.
    pub fn delta(&self) -> f64 {
        self.m_link - self.n_link
    }

    fn length_scale(&self) -> f64 {
        self.m_link.abs().max(self.n_link.abs()).max(1.0)
    }

    /// Equal chutes and arms, to 1e-9 relative.
    pub fn is_symmetric(&self) -> bool {
        let s = self.length_scale();
        (self.m_link - self.n_link).abs() <= REL_TOL * s
            && (self.a_arm - self.b_arm).abs() <= REL_TOL * s
    }

    pub(crate) fn require_symmetric(&self) -> Result<()> {
        if !self.is_symmetric() {
            return Err(Error::Asymmetric {
                detail: format!(
                    "m = {}, n = {}, a = {}, b = {}",
                    self.m_link, self.n_link, self.a_arm, self.b_arm
                ),
            });
        }
        Ok(())
    }

    pub(crate) fn require_equal_cranks(&self) -> Result<()> {
        if (self.l1 - self.l2).abs() > REL_TOL * self.l1.abs().max(1.0) {
            return Err(Error::Asymmetric {
                detail: format!("l1 = {} differs from l2 = {}", self.l1, self.l2),
            });
        }
        Ok(())
    }
}

/// Closure predicate on a built mechanism (always true after
/// construction, kept as the public contract surface).
pub fn check_closure(p: &MechanismParams) -> bool {
    closure_holds(p.m_link, p.n_link, p.a_arm, p.b_arm)
}

/// Slider translations for one crank angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SliderState {
    /// Translation of articulation A along Y, `L1*cos(crank_angle)`.
    pub s_a: f64,
    /// Translation of articulation B along Y, `L2*cos(crank_angle + phi)`.
    pub s_b: f64,
    /// Crank angle the state was sampled at, radians.
    pub crank_angle: f64,
}

impl SliderState {
    pub fn delta_s(&self) -> f64 {
        self.s_a - self.s_b
    }
}

/// Instantaneous mechanism output.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailState {
    /// Caudal-fin swing angle, radians. Positive deflects toward +Y.
    pub theta: f64,
    /// Displacement of pivot C along Y, meters.
    pub s_cy: f64,
    /// Displacement of pivot C along X, meters (`b*cos(theta)`).
    pub s_cx: f64,
    /// Sample time, seconds. Zero for slider-state solves, which carry
    /// no time base; meaningful for [`closed_form`] and trajectories.
    pub t: f64,
}

/// Slider kinematics `S_A = L1*cos(g)`, `S_B = L2*cos(g + phi)`.
pub fn slider_positions(p: &MechanismParams, crank_angle: f64) -> Result<SliderState> {
    if !check_closure(p) {
        return Err(Error::ClosureViolation {
            lhs: p.m_link + p.b_arm,
            rhs: p.n_link + p.a_arm,
        });
    }
    Ok(SliderState {
        s_a: p.l1 * crank_angle.cos(),
        s_b: p.l2 * (crank_angle + p.phase_phi).cos(),
        crank_angle,
    })
}

/// General two-arm solve for arbitrary chute lengths.
///
/// With `dS = S_A - S_B`, `delta = m - n` and `d = hypot(dS, delta)`,
/// the arm angle is
///
/// ```text
/// q = (dS^2 + delta^2 + b^2 - a^2) / (2*b*d)          (= cos of the A-B-C angle)
/// theta = atan2(delta, dS) + arcsin(q)        for dS >= 0
/// theta = atan2(delta, dS) + pi - arcsin(q)   for dS <  0
/// ```
///
/// wrapped into (-pi, pi]. The two branches keep the solution continuous
/// in crank angle through the dS = 0 arm-coincidence pose (where closure
/// makes q hit -1 or +1 exactly) and select the configuration that is
/// continuous with theta = 0 there; on the dS >= 0 half-cycle this is the
/// plain principal-branch expression, and at delta = 0 both branches
/// collapse to `theta = arcsin(dS / (2b))` for equal arms.
pub fn solve_general(p: &MechanismParams, s: &SliderState) -> Result<TailState> {
    let ds = s.delta_s();
    let delta = p.delta();
    let d = f64::hypot(ds, delta);
    if d < DS_EPS {
        // A and B coincide (symmetric mechanism crossing center).
        return Ok(TailState {
            theta: 0.0,
            s_cy: s.s_a,
            s_cx: p.b_arm,
            t: 0.0,
        });
    }
    let q = (d * d + p.b_arm * p.b_arm - p.a_arm * p.a_arm) / (2.0 * p.b_arm * d);
    if q.abs() > 1.0 + 1e-9 {
        return Err(Error::Unreachable { value: q });
    }
    let base = q.clamp(-1.0, 1.0).asin();
    let raw = if ds >= 0.0 {
        f64::atan2(delta, ds) + base
    } else {
        f64::atan2(delta, ds) + PI - base
    };
    let theta = wrap_angle(raw);
    Ok(TailState {
        theta,
        s_cy: s.s_a - p.b_arm * theta.sin(),
        s_cx: p.b_arm * theta.cos(),
        t: 0.0,
    })
}

/// Symmetric solve, `m = n` (hence `a = b` by closure):
/// `theta = arcsin((dS^2 + b^2 - a^2) / (2*b*dS))`,
/// `S_CY = S_A - (dS^2 + b^2 - a^2) / (2*dS)`.
///
/// The dS = 0 singularity is resolved by the continuous limit
/// (`theta = 0`, `S_CY = S_A`) when the arms are equal; unequal arms at
/// dS = 0 cannot close and raise [`Error::Unreachable`].
pub fn solve_symmetric(p: &MechanismParams, s: &SliderState) -> Result<TailState> {
    let scale = p.length_scale();
    if (p.m_link - p.n_link).abs() > REL_TOL * scale {
        return Err(Error::Asymmetric {
            detail: format!("m = {} differs from n = {}", p.m_link, p.n_link),
        });
    }
    let ds = s.delta_s();
    let num = ds * ds + p.b_arm * p.b_arm - p.a_arm * p.a_arm;
    if ds.abs() < DS_EPS {
        if (p.a_arm - p.b_arm).abs() <= REL_TOL * scale {
            return Ok(TailState {
                theta: 0.0,
                s_cy: s.s_a,
                s_cx: p.b_arm,
                t: 0.0,
            });
        }
        return Err(Error::Unreachable {
            value: f64::INFINITY,
        });
    }
    let q = num / (2.0 * p.b_arm * ds);
    if q.abs() > 1.0 + 1e-9 {
        return Err(Error::Unreachable { value: q });
    }
    let theta = q.clamp(-1.0, 1.0).asin();
    Ok(TailState {
        theta,
        s_cy: s.s_a - num / (2.0 * ds),
        s_cx: p.b_arm * theta.cos(),
        t: 0.0,
    })
}

/// Closed-form time solution for fully symmetric mechanisms.
pub fn closed_form(p: &MechanismParams, t: f64, omega: f64) -> Result<TailState> {
    p.require_symmetric()?;
    p.require_equal_cranks()?;
    let wt = omega * t;
    let half_phi = p.phase_phi / 2.0;
    let u = (p.l1 / p.a_arm) * (wt + half_phi).sin() * half_phi.sin();
    // Reachability at construction bounds |u| by 1, up to rounding.
    let theta = u.clamp(-1.0, 1.0).asin();
    Ok(TailState {
        theta,
        s_cy: (p.l1 / 2.0) * ((wt + p.phase_phi).cos() + wt.cos()),
        s_cx: p.b_arm * theta.cos(),
        t,
    })
}

/// Analytic time derivatives of [`closed_form`]:
/// `dtheta/dt = U*omega*cos(wt + phi/2) / sqrt(1 - u^2)` with
/// `U = (L1/a)*sin(phi/2)`, `u = U*sin(wt + phi/2)`, and
/// `dS_CY/dt = -(L1/2)*omega*(sin(wt + phi) + sin(wt))`.
pub fn tail_velocity(p: &MechanismParams, t: f64, omega: f64) -> Result<(f64, f64)> {
    p.require_symmetric()?;
    p.require_equal_cranks()?;
    let wt = omega * t;
    let half_phi = p.phase_phi / 2.0;
    let swing_ratio = (p.l1 / p.a_arm) * half_phi.sin();
    let u = swing_ratio * (wt + half_phi).sin();
    let one_minus = 1.0 - u * u;
    if one_minus <= 0.0 {
        return Err(Error::SingularDerivative { value: u.abs() });
    }
    let dtheta = swing_ratio * omega * (wt + half_phi).cos() / one_minus.sqrt();
    let ds_cy = -(p.l1 / 2.0) * omega * ((wt + p.phase_phi).sin() + wt.sin());
    Ok((dtheta, ds_cy))
}

/// Samples the pivot-C trajectory `(S_CX, S_CY)` at `n_samples` uniform
/// times spanning one full period `[0, T]`, endpoints included, so the
/// first and last points coincide up to rounding.
pub fn trace_path(p: &MechanismParams, omega: f64, n_samples: usize) -> Result<Vec<(f64, f64)>> {
    if n_samples < 8 {
        return Err(Error::BadCount {
            name: "n_samples",
            value: n_samples,
            min: 8,
        });
    }
    if !omega.is_finite() || omega <= 0.0 {
        return Err(Error::OutOfRange {
            name: "omega",
            value: omega,
            min: f64::MIN_POSITIVE,
            max: f64::INFINITY,
        });
    }
    let period = TAU / omega;
    let mut out = Vec::with_capacity(n_samples);
    for i in 0..n_samples {
        let t = i as f64 * period / (n_samples - 1) as f64;
        let state = closed_form(p, t, omega)?;
        out.push((state.s_cx, state.s_cy));
    }
    Ok(out)
}

/// Residuals of the single-angle geometric relations for a solved pose,
/// in the symmetric sign convention:
///
/// `[a*cos(theta) - b*cos(theta) - (m - n),
///   (S_A - S_B) - (a + b)*sin(theta),
///   S_CY - (S_A - b*sin(theta))]`
///
/// All three vanish (to 1e-9) for symmetric mechanisms; they are the
/// consistency surface the validation suite checks.
pub fn pose_residuals(p: &MechanismParams, s: &SliderState, pose: &TailState) -> [f64; 3] {
    [
        (p.a_arm - p.b_arm) * pose.theta.cos() - p.delta(),
        s.delta_s() - (p.a_arm + p.b_arm) * pose.theta.sin(),
        pose.s_cy - (s.s_a - p.b_arm * pose.theta.sin()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Design-point mechanism: L1 = L2 = 22.36 mm, phi = 90 deg,
    /// a = b = 22.81 mm, chutes 30 mm.
    fn table2() -> MechanismParams {
        MechanismParams::symmetric(0.02236, 0.02281, PI / 2.0, 0.030).unwrap()
    }

    /// Asymmetric variant satisfying closure: m - n = a - b = 2 mm.
    fn asymmetric() -> MechanismParams {
        MechanismParams::new(0.02236, 0.02236, 0.024, 0.022, 0.02481, 0.02281, PI / 2.0).unwrap()
    }

    #[test]
    fn closure_predicate() {
        assert!(closure_holds(0.030, 0.030, 0.02281, 0.02281));
        assert!(closure_holds(0.010, 0.012, 0.024, 0.026)); // 10+26 = 12+24
        assert!(!closure_holds(0.010, 0.012, 0.024, 0.025)); // 35 != 36
        assert!(check_closure(&table2()));
    }

    #[test]
    fn construction_rejects_closure_violation() {
        let err =
            MechanismParams::new(0.02236, 0.02236, 0.010, 0.012, 0.024, 0.025, PI / 2.0)
                .unwrap_err();
        assert!(matches!(err, Error::ClosureViolation { .. }));
    }

    #[test]
    fn construction_rejects_unreachable_swing() {
        // l1*sin(phi/2) > a
        let err = MechanismParams::new(0.040, 0.040, 0.03, 0.03, 0.020, 0.020, PI / 2.0)
            .unwrap_err();
        assert!(matches!(err, Error::InvalidParams { .. }));
    }

    #[test]
    fn construction_rejects_bad_phase() {
        assert!(MechanismParams::symmetric(0.02, 0.03, 0.0, 0.03).is_err());
        assert!(MechanismParams::symmetric(0.02, 0.03, PI, 0.03).is_err());
    }

    #[test]
    fn sliders_at_reference_angles() {
        let p = table2();
        let s = slider_positions(&p, 0.0).unwrap();
        assert!((s.s_a - 0.02236).abs() < 1e-15);
        assert!(s.s_b.abs() < 1e-15);

        let s = slider_positions(&p, PI / 2.0).unwrap();
        assert!(s.s_a.abs() < 1e-15);
        assert!((s.s_b - -0.02236).abs() < 1e-15);
    }

    #[test]
    fn sliders_periodic() {
        let p = table2();
        let a = slider_positions(&p, 1.234).unwrap();
        let b = slider_positions(&p, 1.234 + TAU).unwrap();
        assert!((a.s_a - b.s_a).abs() < 1e-12);
        assert!((a.s_b - b.s_b).abs() < 1e-12);
    }

    #[test]
    fn symmetric_solve_at_crank_zero() {
        let p = table2();
        let s = slider_positions(&p, 0.0).unwrap();
        let pose = solve_symmetric(&p, &s).unwrap();
        // arcsin(22.36 / 45.62) and S_CY = (S_A + S_B)/2 = S_A/2.
        assert!((pose.theta - 0.5122456640999563).abs() < 1e-12);
        assert!((pose.theta.to_degrees() - 29.35).abs() < 1e-2);
        assert!((pose.s_cy - 0.01118).abs() < 1e-12);
        assert!((pose.s_cx - p.b_arm() * pose.theta.cos()).abs() < 1e-15);
    }

    #[test]
    fn symmetric_solve_center_limit() {
        let p = table2();
        // dS = 0 at crank = pi - phi/2.
        let s = slider_positions(&p, PI - PI / 4.0).unwrap();
        assert!(s.delta_s().abs() < DS_EPS);
        let pose = solve_symmetric(&p, &s).unwrap();
        assert_eq!(pose.theta, 0.0);
        assert_eq!(pose.s_cy, s.s_a);
    }

    #[test]
    fn symmetric_solve_rejects_unequal_chutes() {
        let p = asymmetric();
        let s = slider_positions(&p, 0.3).unwrap();
        assert!(matches!(
            solve_symmetric(&p, &s),
            Err(Error::Asymmetric { .. })
        ));
    }

    #[test]
    fn general_matches_symmetric_without_offset() {
        use rand::{Rng, SeedableRng};
        let p = table2();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..1000 {
            let crank = rng.gen_range(0.0..TAU);
            let s = slider_positions(&p, crank).unwrap();
            let gen = solve_general(&p, &s).unwrap();
            let sym = solve_symmetric(&p, &s).unwrap();
            assert!(
                (gen.theta - sym.theta).abs() < 1e-12,
                "crank {crank}: {} vs {}",
                gen.theta,
                sym.theta
            );
            assert!((gen.s_cy - sym.s_cy).abs() < 1e-12);
        }
    }

    #[test]
    fn general_solve_at_ds_zero_matches_closed_form() {
        let p = table2();
        let crank = PI - PI / 4.0; // dS = 0
        let s = slider_positions(&p, crank).unwrap();
        let pose = solve_general(&p, &s).unwrap();
        let oracle = closed_form(&p, crank / TAU, TAU).unwrap();
        assert!((pose.theta - oracle.theta).abs() < 1e-12);
    }

    #[test]
    fn general_solve_asymmetric_frozen_value() {
        let p = asymmetric();
        let s = slider_positions(&p, 0.0).unwrap();
        let pose = solve_general(&p, &s).unwrap();
        // Two-circle intersection for these dimensions (28.632994 deg).
        assert!(
            (pose.theta - 0.4997400214446517).abs() < 1e-12,
            "theta = {}",
            pose.theta
        );
    }

    /// Two-circle intersection oracle: place A = (0, S_A) and
    /// B = (delta, S_B), intersect circles of radii a about A and b about
    /// B, and return both candidate angles of arm BC.
    fn circle_roots(p: &MechanismParams, s: &SliderState) -> [f64; 2] {
        let delta = p.delta();
        let to_a = [0.0 - delta, s.s_a - s.s_b]; // B -> A
        let d = f64::hypot(to_a[0], to_a[1]);
        let alpha = f64::atan2(to_a[1], to_a[0]);
        let cos_gamma =
            ((p.b_arm() * p.b_arm() + d * d - p.a_arm() * p.a_arm()) / (2.0 * p.b_arm() * d))
                .clamp(-1.0, 1.0);
        let gamma = cos_gamma.acos();
        [wrap_angle(alpha - gamma), wrap_angle(alpha + gamma)]
    }

    #[test]
    fn general_solve_tracks_continuous_circle_root() {
        let p = asymmetric();
        let n = 4096;
        // Start at the arm-coincidence pose (crank = -phi/2, theta = 0)
        // and require the solver to follow the branch an incremental
        // two-circle tracker predicts.
        let start = -p.phase_phi() / 2.0;
        let mut prev = 0.0f64;
        let mut prev_prev = 0.0f64;
        for i in 0..=n {
            let crank = start + i as f64 * TAU / n as f64;
            let s = slider_positions(&p, crank).unwrap();
            let pose = solve_general(&p, &s).unwrap();
            let predicted = 2.0 * prev - prev_prev;
            let roots = circle_roots(&p, &s);
            let oracle = if (roots[0] - predicted).abs() <= (roots[1] - predicted).abs() {
                roots[0]
            } else {
                roots[1]
            };
            assert!(
                (pose.theta - oracle).abs() < 1e-9,
                "crank {crank}: solver {} vs oracle {}",
                pose.theta,
                oracle
            );
            // Geometric consistency: C really lies on circle A.
            let c = [
                p.delta() + p.b_arm() * pose.theta.cos(),
                s.s_b + p.b_arm() * pose.theta.sin(),
            ];
            let to_a = f64::hypot(c[0], c[1] - s.s_a);
            assert!((to_a - p.a_arm()).abs() < 1e-12);
            prev_prev = prev;
            prev = pose.theta;
        }
    }

    #[test]
    fn general_solve_reports_unreachable() {
        // Symmetric mechanisms always reach (dS_max = 2*l1*sin(phi/2) <= 2a
        // by construction), but a lopsided pair of arms can be outrun by
        // the sliders: closure holds, yet hypot(dS, delta) > a + b at the
        // crank angle of largest slider split.
        let p = MechanismParams::new(0.02, 0.02, 0.030, 0.010, 0.025, 0.005, 2.5).unwrap();
        let s = slider_positions(&p, PI / 2.0 - 1.25).unwrap();
        assert!(f64::hypot(s.delta_s(), p.delta()) > p.a_arm() + p.b_arm());
        assert!(matches!(
            solve_general(&p, &s),
            Err(Error::Unreachable { .. })
        ));
    }

    #[test]
    fn closed_form_swing_limit() {
        let p = table2();
        // wt + phi/2 = pi/2 at t = 1/8 for omega = 2*pi.
        let pose = closed_form(&p, 0.125, TAU).unwrap();
        assert!((pose.theta.to_degrees() - 43.88).abs() < 0.01);
        assert!((pose.theta - 0.7658596024811923).abs() < 1e-12);
    }

    #[test]
    fn closed_form_translation_limit() {
        let p = table2();
        // wt = -phi/2 makes the two cosines symmetric: S_CY = L1*cos(phi/2).
        let pose = closed_form(&p, -0.125, TAU).unwrap();
        assert!((pose.s_cy * 1e3 - 15.81).abs() < 0.01);
        assert!((pose.s_cy - p.l1() * (p.phase_phi() / 2.0).cos()).abs() < 1e-15);
    }

    #[test]
    fn closed_form_vanishing_phase_freezes_swing() {
        // phi = 0 is excluded by the invariant; a vanishing phase is the
        // same limit: the cranks run in step and no swing develops.
        let p = MechanismParams::symmetric(0.02236, 0.02281, 1e-9, 0.03).unwrap();
        for i in 0..64 {
            let pose = closed_form(&p, i as f64 / 64.0, TAU).unwrap();
            assert!(pose.theta.abs() < 1e-9);
        }
    }

    #[test]
    fn closed_form_rejects_asymmetric() {
        let p = asymmetric();
        assert!(matches!(
            closed_form(&p, 0.1, TAU),
            Err(Error::Asymmetric { .. })
        ));
        let unequal_cranks =
            MechanismParams::new(0.02236, 0.020, 0.03, 0.03, 0.02281, 0.02281, PI / 2.0).unwrap();
        assert!(matches!(
            closed_form(&unequal_cranks, 0.1, TAU),
            Err(Error::Asymmetric { .. })
        ));
    }

    #[test]
    fn velocity_vanishes_at_extrema() {
        let p = table2();
        let (dtheta, _) = tail_velocity(&p, 0.125, TAU).unwrap(); // swing extremum
        assert!(dtheta.abs() < 1e-12);
        let (_, ds_cy) = tail_velocity(&p, -0.125, TAU).unwrap(); // translation extremum
        assert!(ds_cy.abs() < 1e-12);
    }

    #[test]
    fn velocity_singular_at_reachability_boundary() {
        // l1*sin(phi/2) = a exactly: u reaches 1 at the extremum.
        let arm = 0.02236 * (PI / 4.0).sin();
        let p = MechanismParams::symmetric(0.02236, arm, PI / 2.0, 0.03).unwrap();
        assert!(matches!(
            tail_velocity(&p, 0.125, TAU),
            Err(Error::SingularDerivative { .. })
        ));
    }

    #[test]
    fn velocity_matches_central_differences() {
        use rand::{Rng, SeedableRng};
        let p = table2();
        let omega = TAU;
        let h = 1e-6;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xfd);
        for _ in 0..100 {
            let t = rng.gen_range(0.0..1.0); // one period at 1 Hz
            let (dtheta, ds_cy) = tail_velocity(&p, t, omega).unwrap();
            let plus = closed_form(&p, t + h, omega).unwrap();
            let minus = closed_form(&p, t - h, omega).unwrap();
            let fd_theta = (plus.theta - minus.theta) / (2.0 * h);
            let fd_scy = (plus.s_cy - minus.s_cy) / (2.0 * h);
            for (analytic, fd) in [(dtheta, fd_theta), (ds_cy, fd_scy)] {
                if analytic.abs() < 1e-3 {
                    assert!(
                        (analytic - fd).abs() < 1e-8,
                        "t={t}: {analytic} vs fd {fd}"
                    );
                } else {
                    assert!(
                        ((analytic - fd) / analytic).abs() < 1e-6,
                        "t={t}: {analytic} vs fd {fd}"
                    );
                }
            }
        }
    }

    #[test]
    fn path_is_closed() {
        let p = table2();
        let path = trace_path(&p, TAU, 512).unwrap();
        assert_eq!(path.len(), 512);
        let (x0, y0) = path[0];
        let (x1, y1) = *path.last().unwrap();
        assert!(f64::hypot(x1 - x0, y1 - y0) < 1e-9);
    }

    #[test]
    fn path_rejects_tiny_sample_counts() {
        let p = table2();
        assert!(matches!(
            trace_path(&p, TAU, 7),
            Err(Error::BadCount { .. })
        ));
    }

    #[test]
    fn path_degenerates_to_segment_for_small_phase() {
        let p = MechanismParams::symmetric(0.02236, 0.02281, 1e-6, 0.03).unwrap();
        let path = trace_path(&p, TAU, 256).unwrap();
        let xs: Vec<f64> = path.iter().map(|&(x, _)| x).collect();
        let ys: Vec<f64> = path.iter().map(|&(_, y)| y).collect();
        let x_spread = xs.iter().cloned().fold(f64::MIN, f64::max)
            - xs.iter().cloned().fold(f64::MAX, f64::min);
        let y_spread = ys.iter().cloned().fold(f64::MIN, f64::max)
            - ys.iter().cloned().fold(f64::MAX, f64::min);
        assert!(x_spread < 1e-9 * p.b_arm());
        assert!(y_spread > 0.9 * 2.0 * p.l1());
    }

    /// The pivot path at the design point folds onto a single arc: the
    /// crank angles g and 3*pi/2 - g (for phi = 90 deg) land on the same
    /// (S_CX, S_CY) point with mirrored swing angles, so every interior
    /// point is visited twice per revolution.
    #[test]
    fn path_retraces_single_arc_at_design_point() {
        let p = table2();
        let n = 257; // 256 intervals; the fold partner lands on-grid
        let path = trace_path(&p, TAU, n).unwrap();
        for i in 0..n - 1 {
            // crank 3*pi/2 - g is index 192 - i on a 256-interval grid
            let j = (448 - i) % (n - 1);
            let (xi, yi) = path[i];
            let (xj, yj) = path[j];
            assert!(
                f64::hypot(xi - xj, yi - yj) < 1e-12,
                "i={i} j={j}: ({xi},{yi}) vs ({xj},{yj})"
            );
        }
    }

    #[test]
    fn residuals_vanish_for_symmetric_poses() {
        let p = table2();
        for i in 0..360 {
            let crank = i as f64 * TAU / 360.0;
            let s = slider_positions(&p, crank).unwrap();
            let pose = solve_symmetric(&p, &s).unwrap();
            for r in pose_residuals(&p, &s, &pose) {
                assert!(r.abs() < 1e-9, "crank {crank}: residual {r}");
            }
        }
    }
}
