//! Inverse design and sinusoid-fidelity fitting.
//!
//! Given target tail-motion limits, the symmetric mechanism dimensions
//! follow in closed form by inverting the swing-limit relation
//! `theta_max = arcsin((L1/a)*sin(phi/2))` and the translation amplitude
//! `H_max = L1*cos(phi/2)`:
//!
//! ```text
//! L1 = L2 = H_max / cos(phi/2)
//! a  = b  = L1 * sin(phi/2) / sin(theta_max)
//! m  = n  = chute_link_length          (no kinematic effect)
//! ```
//!
//! [`fit_sinusoid`] quantifies how close the mechanism output is to pure
//! sinusoids: `S_CY(t)` is one exactly (sum-to-product identity), while
//! `theta(t)` is the arcsin of a sinusoid and carries odd-harmonic
//! distortion that the RMS residual measures.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::bodywave::TailTargets;
use crate::error::{Error, Result};
use crate::linkage::{closed_form, MechanismParams};
use crate::units::wrap_angle;

/// Default chute-linkage length, meters (a packaging choice; the
/// symmetric kinematics are independent of it).
pub const DEFAULT_CHUTE_LINK_LENGTH: f64 = 0.030;

/// Target motion limits plus the free chute-linkage length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DesignSpec {
    targets: TailTargets,
    chute_link_length: f64,
}

impl DesignSpec {
    pub fn new(targets: TailTargets) -> Self {
        Self {
            targets,
            chute_link_length: DEFAULT_CHUTE_LINK_LENGTH,
        }
    }

    pub fn with_chute_link_length(targets: TailTargets, chute_link_length: f64) -> Result<Self> {
        if !chute_link_length.is_finite() || chute_link_length <= 0.0 {
            return Err(Error::InvalidParams {
                name: "DesignSpec",
                reason: format!("chute_link_length must be positive, got {chute_link_length}"),
            });
        }
        Ok(Self {
            targets,
            chute_link_length,
        })
    }

    pub fn targets(&self) -> &TailTargets {
        &self.targets
    }

    pub fn chute_link_length(&self) -> f64 {
        self.chute_link_length
    }
}

/// Least-squares comparison of mechanism output against pure sinusoids.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitReport {
    /// RMS deviation of theta(t) from its best-fit sinusoid, radians.
    pub rms_theta: f64,
    /// RMS deviation of S_CY(t) from its best-fit sinusoid, meters.
    pub rms_scy: f64,
    /// Fitted swing-angle amplitude, radians.
    pub theta_amplitude_fit: f64,
    /// Fitted translation amplitude, meters.
    pub scy_amplitude_fit: f64,
    /// Signed phase of theta minus phase of S_CY (sine convention),
    /// wrapped into (-pi, pi]. The mechanism holds the two in quadrature:
    /// |phase_lead_fit| = pi/2 when phi = 90 deg.
    pub phase_lead_fit: f64,
}

/// Computes symmetric mechanism dimensions realizing the target limits.
pub fn design_mechanism(spec: &DesignSpec) -> Result<MechanismParams> {
    let targets = spec.targets();
    let theta_max = targets.theta_max();
    let phi = targets.phase_phi();
    if theta_max.is_nan() || theta_max <= 0.0 || theta_max >= PI / 2.0 {
        return Err(Error::Infeasible(format!(
            "theta_max must lie in (0, pi/2), got {theta_max} rad"
        )));
    }
    if phi.is_nan() || phi <= 0.0 || phi >= PI {
        return Err(Error::Infeasible(format!(
            "crank phase must lie in (0, pi), got {phi} rad"
        )));
    }
    let half_phi = phi / 2.0;
    let l1 = targets.h_max() / half_phi.cos();
    let arm = l1 * half_phi.sin() / theta_max.sin();
    // sin(theta_max) < 1 guarantees l1*sin(phi/2) <= arm; construction
    // re-checks as the internal consistency gate.
    MechanismParams::symmetric(l1, arm, phi, spec.chute_link_length())
        .map_err(|e| Error::Infeasible(e.to_string()))
}

/// Largest swing angle of a symmetric mechanism,
/// `arcsin((L1/a)*sin(phi/2))`.
pub fn theta_max_of(p: &MechanismParams) -> Result<f64> {
    p.require_symmetric()?;
    p.require_equal_cranks()?;
    let arg = (p.l1() / p.a_arm()) * (p.phase_phi() / 2.0).sin();
    Ok(arg.clamp(-1.0, 1.0).asin())
}

/// One fitted channel: y ~ amp*sin(omega*t + phase) + offset.
struct ChannelFit {
    amp: f64,
    phase: f64,
    rms: f64,
}

/// Linear least squares on the basis [sin(wt), cos(wt), 1] at fixed,
/// known omega (the drive frequency is an input, not an unknown).
fn fit_channel(ts: &[f64], ys: &[f64], omega: f64) -> ChannelFit {
    let n = ts.len() as f64;
    let (mut ss, mut sc, mut cc, mut s1, mut c1) = (0.0, 0.0, 0.0, 0.0, 0.0);
    let (mut sy, mut cy, mut y1) = (0.0, 0.0, 0.0);
    for (&t, &y) in ts.iter().zip(ys) {
        let s = (omega * t).sin();
        let c = (omega * t).cos();
        ss += s * s;
        sc += s * c;
        cc += c * c;
        s1 += s;
        c1 += c;
        sy += s * y;
        cy += c * y;
        y1 += y;
    }
    // Solve the 3x3 normal equations by Cramer's rule.
    let m = [[ss, sc, s1], [sc, cc, c1], [s1, c1, n]];
    let rhs = [sy, cy, y1];
    let det3 = |a: &[[f64; 3]; 3]| {
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    };
    let det = det3(&m);
    let mut coef = [0.0f64; 3];
    for k in 0..3 {
        let mut mk = m;
        for row in 0..3 {
            mk[row][k] = rhs[row];
        }
        coef[k] = det3(&mk) / det;
    }
    let (p, q, offset) = (coef[0], coef[1], coef[2]);
    let mut sq = 0.0;
    for (&t, &y) in ts.iter().zip(ys) {
        let model = p * (omega * t).sin() + q * (omega * t).cos() + offset;
        sq += (y - model) * (y - model);
    }
    ChannelFit {
        amp: f64::hypot(p, q),
        phase: f64::atan2(q, p),
        rms: (sq / n).sqrt(),
    }
}

/// Samples one period of the closed-form motion and fits sinusoids to
/// theta(t) and S_CY(t).
pub fn fit_sinusoid(p: &MechanismParams, omega: f64, n_samples: usize) -> Result<FitReport> {
    if n_samples < 32 {
        return Err(Error::BadCount {
            name: "n_samples",
            value: n_samples,
            min: 32,
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
    let mut ts = Vec::with_capacity(n_samples);
    let mut thetas = Vec::with_capacity(n_samples);
    let mut scys = Vec::with_capacity(n_samples);
    for i in 0..n_samples {
        let t = i as f64 * period / n_samples as f64; // [0, T), exact grid
        let state = closed_form(p, t, omega)?;
        ts.push(t);
        thetas.push(state.theta);
        scys.push(state.s_cy);
    }
    let theta_fit = fit_channel(&ts, &thetas, omega);
    let scy_fit = fit_channel(&ts, &scys, omega);
    Ok(FitReport {
        rms_theta: theta_fit.rms,
        rms_scy: scy_fit.rms,
        theta_amplitude_fit: theta_fit.amp,
        scy_amplitude_fit: scy_fit.amp,
        phase_lead_fit: wrap_angle(theta_fit.phase - scy_fit.phase),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::deg_to_rad;

    fn table2() -> MechanismParams {
        MechanismParams::symmetric(0.02236, 0.02281, PI / 2.0, 0.030).unwrap()
    }

    fn design_point_targets() -> TailTargets {
        TailTargets::new(0.01581, deg_to_rad(43.88), TAU, PI / 2.0).unwrap()
    }

    #[test]
    fn design_reproduces_reference_dimensions() {
        let mech = design_mechanism(&DesignSpec::new(design_point_targets())).unwrap();
        // 22.358716... mm and 22.808907... mm; both within 0.01 mm of the
        // 22.36 / 22.81 reference values.
        assert!((mech.l1() * 1e3 - 22.36).abs() < 0.01, "l1 = {}", mech.l1());
        assert!((mech.l2() * 1e3 - 22.36).abs() < 0.01);
        assert!((mech.a_arm() * 1e3 - 22.81).abs() < 0.01, "a = {}", mech.a_arm());
        assert!((mech.b_arm() * 1e3 - 22.81).abs() < 0.01);
        assert_eq!(mech.m_link(), DEFAULT_CHUTE_LINK_LENGTH);
        assert!(crate::linkage::check_closure(&mech));
    }

    #[test]
    fn design_round_trips_through_swing_limit() {
        let targets = TailTargets::new(
            0.010 * (PI / 4.0).cos(),
            deg_to_rad(30.0),
            TAU,
            PI / 2.0,
        )
        .unwrap();
        let mech = design_mechanism(&DesignSpec::new(targets)).unwrap();
        assert!((mech.l1() - 0.010).abs() < 1e-12);
        let recovered = theta_max_of(&mech).unwrap();
        assert!((recovered - deg_to_rad(30.0)).abs() < 1e-9);
        // Translation amplitude comes back as well.
        let amp = mech.l1() * (mech.phase_phi() / 2.0).cos();
        assert!(((amp - targets.h_max()) / targets.h_max()).abs() < 1e-12);
    }

    #[test]
    fn design_rejects_degenerate_phase() {
        // TailTargets admits any finite phase; the design step does not.
        let targets = TailTargets::new(0.01581, deg_to_rad(43.88), TAU, 0.0).unwrap();
        assert!(matches!(
            design_mechanism(&DesignSpec::new(targets)),
            Err(Error::Infeasible(_))
        ));
        let targets = TailTargets::new(0.01581, deg_to_rad(43.88), TAU, PI).unwrap();
        assert!(matches!(
            design_mechanism(&DesignSpec::new(targets)),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn design_handles_extreme_but_feasible_targets() {
        let targets = TailTargets::new(1.0, deg_to_rad(89.9), TAU, deg_to_rad(179.0)).unwrap();
        let mech = design_mechanism(&DesignSpec::new(targets)).unwrap();
        let recovered = theta_max_of(&mech).unwrap();
        assert!((recovered - deg_to_rad(89.9)).abs() < 1e-9);
    }

    #[test]
    fn chute_length_must_be_positive() {
        assert!(DesignSpec::with_chute_link_length(design_point_targets(), 0.0).is_err());
        assert!(DesignSpec::with_chute_link_length(design_point_targets(), 0.05).is_ok());
    }

    #[test]
    fn theta_max_of_reference_mechanism() {
        let theta = theta_max_of(&table2()).unwrap();
        assert!((theta.to_degrees() - 43.88).abs() < 0.01, "{}", theta.to_degrees());
    }

    #[test]
    fn theta_max_of_half_ratio() {
        // l1/a = 0.5, phi = 60 deg: arcsin(0.25).
        let p = MechanismParams::symmetric(0.010, 0.020, deg_to_rad(60.0), 0.03).unwrap();
        let theta = theta_max_of(&p).unwrap();
        assert!((theta - 0.25268025514207865).abs() < 1e-15);
        assert!((theta.to_degrees() - 14.4775).abs() < 1e-3);
    }

    #[test]
    fn theta_max_vanishes_with_crank_throw() {
        let p = MechanismParams::symmetric(1e-9, 0.020, PI / 2.0, 0.03).unwrap();
        assert!(theta_max_of(&p).unwrap() < 1e-6);
    }

    #[test]
    fn theta_max_of_rejects_asymmetric() {
        let p =
            MechanismParams::new(0.02236, 0.02236, 0.024, 0.022, 0.02481, 0.02281, PI / 2.0)
                .unwrap();
        assert!(matches!(theta_max_of(&p), Err(Error::Asymmetric { .. })));
    }

    #[test]
    fn fit_translation_is_exactly_sinusoidal() {
        let p = table2();
        let report = fit_sinusoid(&p, TAU, 4096).unwrap();
        assert!(report.rms_scy < 1e-12 * p.l1(), "rms_scy = {}", report.rms_scy);
        let expected_amp = p.l1() * (p.phase_phi() / 2.0).cos();
        assert!(((report.scy_amplitude_fit - expected_amp) / expected_amp).abs() < 1e-12);
    }

    #[test]
    fn fit_swing_residual_matches_quadrature_oracle() {
        // Dense-quadrature value for the Table-2 ratio, frozen ahead of
        // the implementation (converged to 1e-15 across sample counts).
        const ORACLE_RMS_THETA: f64 = 0.013700180646395556;
        const ORACLE_AMP_THETA: f64 = 0.7449941206235734;
        let report = fit_sinusoid(&table2(), TAU, 4096).unwrap();
        assert!(
            (report.rms_theta - ORACLE_RMS_THETA).abs() < 1e-13,
            "rms_theta = {}",
            report.rms_theta
        );
        assert!((report.theta_amplitude_fit - ORACLE_AMP_THETA).abs() < 1e-12);
    }

    #[test]
    fn fit_reports_quadrature_phase_split() {
        let report = fit_sinusoid(&table2(), TAU, 2048).unwrap();
        assert!(
            (report.phase_lead_fit.abs() - PI / 2.0).abs() < 1e-6,
            "lead = {}",
            report.phase_lead_fit
        );
    }

    #[test]
    fn fit_small_swing_is_nearly_sinusoidal() {
        // l1/a = 0.01: arcsin distortion collapses quadratically.
        let p = MechanismParams::symmetric(0.0002281, 0.02281, PI / 2.0, 0.03).unwrap();
        let report = fit_sinusoid(&p, TAU, 2048).unwrap();
        assert!(report.rms_theta / report.theta_amplitude_fit < 1e-4);
    }

    #[test]
    fn fit_rejects_sparse_sampling() {
        assert!(matches!(
            fit_sinusoid(&table2(), TAU, 31),
            Err(Error::BadCount { .. })
        ));
    }
}
