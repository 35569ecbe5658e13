//! Embedded cross-equation consistency suite.
//!
//! Runs the solver-agreement, pose-relation and design round-trip checks
//! on the reference mechanism (L1 = L2 = 22.36 mm, phi = 90 deg,
//! a = b = 22.81 mm) and reports one pass/fail row per check. The
//! `--inject-asymmetry` flag stretches L2 by 1% to demonstrate that the
//! suite actually fails on a broken fixture.

use std::f64::consts::{PI, TAU};

use finkin_core::linkage::{
    check_closure, closed_form, pose_residuals, slider_positions, solve_general, solve_symmetric,
    tail_velocity, MechanismParams,
};
use finkin_core::synthesis::{design_mechanism, theta_max_of, DesignSpec};
use finkin_core::units::deg_to_rad;

pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

const L1: f64 = 0.02236;
const ARM: f64 = 0.02281;
const CHUTE: f64 = 0.030;
const GRID: usize = 10_000;

fn fixture(inject_asymmetry: bool) -> MechanismParams {
    let l2 = if inject_asymmetry { L1 * 1.01 } else { L1 };
    MechanismParams::new(L1, l2, CHUTE, CHUTE, ARM, ARM, PI / 2.0)
        .expect("reference dimensions are valid")
}

pub fn run_checks(inject_asymmetry: bool) -> Vec<Check> {
    let p = fixture(inject_asymmetry);
    vec![
        closure_condition(&p),
        crank_symmetry(&p),
        solver_equivalence(&p),
        pose_relations(&p),
        design_round_trip(),
        swing_angle_limit(&p),
        translation_limit(&p),
        chute_invariance(),
        velocity_consistency(&p),
    ]
}

fn closure_condition(p: &MechanismParams) -> Check {
    let passed = check_closure(p);
    Check {
        name: "closure-condition",
        passed,
        detail: format!(
            "m + b = {:.6} m, n + a = {:.6} m",
            p.m_link() + p.b_arm(),
            p.n_link() + p.a_arm()
        ),
    }
}

fn crank_symmetry(p: &MechanismParams) -> Check {
    let passed = (p.l1() - p.l2()).abs() <= 1e-9 * p.l1() && p.is_symmetric();
    Check {
        name: "crank-symmetry",
        passed,
        detail: format!("l1 = {:.6} m, l2 = {:.6} m", p.l1(), p.l2()),
    }
}

fn solver_equivalence(p: &MechanismParams) -> Check {
    let mut worst: f64 = 0.0;
    for i in 0..GRID {
        let crank = i as f64 * TAU / GRID as f64;
        let s = match slider_positions(p, crank) {
            Ok(s) => s,
            Err(e) => return fail("solver-equivalence", e.to_string()),
        };
        let general = match solve_general(p, &s) {
            Ok(v) => v,
            Err(e) => return fail("solver-equivalence", e.to_string()),
        };
        let symmetric = match solve_symmetric(p, &s) {
            Ok(v) => v,
            Err(e) => return fail("solver-equivalence", e.to_string()),
        };
        let closed = match closed_form(p, crank / TAU, TAU) {
            Ok(v) => v,
            Err(e) => return fail("solver-equivalence", e.to_string()),
        };
        worst = worst
            .max((general.theta - symmetric.theta).abs())
            .max((symmetric.theta - closed.theta).abs())
            .max((general.s_cy - symmetric.s_cy).abs())
            .max((symmetric.s_cy - closed.s_cy).abs());
    }
    Check {
        name: "solver-equivalence",
        passed: worst < 1e-12,
        detail: format!("max route disagreement {worst:.3e} over {GRID} crank angles"),
    }
}

fn pose_relations(p: &MechanismParams) -> Check {
    let mut worst: f64 = 0.0;
    for i in 0..GRID {
        let crank = i as f64 * TAU / GRID as f64;
        let s = match slider_positions(p, crank) {
            Ok(s) => s,
            Err(e) => return fail("pose-relations", e.to_string()),
        };
        let pose = match solve_symmetric(p, &s) {
            Ok(v) => v,
            Err(e) => return fail("pose-relations", e.to_string()),
        };
        for r in pose_residuals(p, &s, &pose) {
            worst = worst.max(r.abs());
        }
    }
    Check {
        name: "pose-relations",
        passed: worst < 1e-9,
        detail: format!("max residual {worst:.3e} over {GRID} crank angles"),
    }
}

fn design_round_trip() -> Check {
    let targets = match finkin_core::bodywave::TailTargets::new(
        0.01581,
        deg_to_rad(43.88),
        TAU,
        PI / 2.0,
    ) {
        Ok(t) => t,
        Err(e) => return fail("design-round-trip", e.to_string()),
    };
    let mech = match design_mechanism(&DesignSpec::new(targets)) {
        Ok(m) => m,
        Err(e) => return fail("design-round-trip", e.to_string()),
    };
    let l1_mm = mech.l1() * 1e3;
    let a_mm = mech.a_arm() * 1e3;
    let theta_err = match theta_max_of(&mech) {
        Ok(v) => (v - deg_to_rad(43.88)).abs(),
        Err(e) => return fail("design-round-trip", e.to_string()),
    };
    let amp = mech.l1() * (mech.phase_phi() / 2.0).cos();
    let amp_err = ((amp - 0.01581) / 0.01581).abs();
    let passed = (l1_mm - 22.36).abs() < 0.01
        && (a_mm - 22.81).abs() < 0.01
        && theta_err < 1e-9
        && amp_err < 1e-12;
    Check {
        name: "design-round-trip",
        passed,
        detail: format!(
            "l1 = {l1_mm:.4} mm, a = {a_mm:.4} mm, swing error {theta_err:.2e} rad, \
             translation error {amp_err:.2e} rel"
        ),
    }
}

fn swing_angle_limit(p: &MechanismParams) -> Check {
    match theta_max_of(p) {
        Ok(theta) => {
            let deg = theta.to_degrees();
            Check {
                name: "swing-angle-limit",
                passed: (deg - 43.88).abs() < 0.01,
                detail: format!("theta_max = {deg:.4} deg"),
            }
        }
        Err(e) => fail("swing-angle-limit", e.to_string()),
    }
}

fn translation_limit(p: &MechanismParams) -> Check {
    // Amplitude of S_CY both analytically and over a dense scan.
    let analytic = p.l1() * (p.phase_phi() / 2.0).cos();
    let mut scanned: f64 = 0.0;
    for i in 0..GRID {
        let t = i as f64 / GRID as f64;
        match closed_form(p, t, TAU) {
            Ok(state) => scanned = scanned.max(state.s_cy.abs()),
            Err(e) => return fail("translation-limit", e.to_string()),
        }
    }
    let analytic_mm = analytic * 1e3;
    let passed = (analytic_mm - 15.81).abs() < 0.01 && scanned <= analytic + 1e-12;
    Check {
        name: "translation-limit",
        passed,
        detail: format!("amplitude {analytic_mm:.4} mm, scanned peak {:.4} mm", scanned * 1e3),
    }
}

fn chute_invariance() -> Check {
    let mut reference: Option<Vec<(u64, u64, u64)>> = None;
    for chute in [0.010, 0.030, 0.100] {
        let p = match MechanismParams::symmetric(L1, ARM, PI / 2.0, chute) {
            Ok(p) => p,
            Err(e) => return fail("chute-invariance", e.to_string()),
        };
        let mut bits = Vec::with_capacity(128);
        for i in 0..128 {
            let t = i as f64 / 128.0;
            match closed_form(&p, t, TAU) {
                Ok(s) => bits.push((s.theta.to_bits(), s.s_cy.to_bits(), s.s_cx.to_bits())),
                Err(e) => return fail("chute-invariance", e.to_string()),
            }
        }
        match &reference {
            None => reference = Some(bits),
            Some(r) => {
                if r != &bits {
                    return fail(
                        "chute-invariance",
                        format!("output differs for chute = {chute} m"),
                    );
                }
            }
        }
    }
    Check {
        name: "chute-invariance",
        passed: true,
        detail: "closed-form output bit-identical for chutes {10, 30, 100} mm".into(),
    }
}

fn velocity_consistency(p: &MechanismParams) -> Check {
    // Golden-ratio sequence: deterministic, well spread over the period.
    let golden = 0.618_033_988_749_894_9_f64;
    let h = 1e-6;
    let mut worst = 0.0f64;
    for i in 0..100 {
        let t = ((i + 1) as f64 * golden).fract();
        let (dtheta, ds_cy) = match tail_velocity(p, t, TAU) {
            Ok(v) => v,
            Err(e) => return fail("velocity-consistency", e.to_string()),
        };
        let plus = match closed_form(p, t + h, TAU) {
            Ok(v) => v,
            Err(e) => return fail("velocity-consistency", e.to_string()),
        };
        let minus = match closed_form(p, t - h, TAU) {
            Ok(v) => v,
            Err(e) => return fail("velocity-consistency", e.to_string()),
        };
        let fd_theta = (plus.theta - minus.theta) / (2.0 * h);
        let fd_scy = (plus.s_cy - minus.s_cy) / (2.0 * h);
        for (analytic, fd) in [(dtheta, fd_theta), (ds_cy, fd_scy)] {
            let err = if analytic.abs() < 1e-3 {
                (analytic - fd).abs() / 1e-8
            } else {
                ((analytic - fd) / analytic).abs() / 1e-6
            };
            worst = worst.max(err);
        }
    }
    Check {
        name: "velocity-consistency",
        passed: worst < 1.0,
        detail: format!(
            "worst finite-difference error {:.3} of tolerance over 100 instants",
            worst
        ),
    }
}

fn fail(name: &'static str, detail: String) -> Check {
    Check {
        name,
        passed: false,
        detail,
    }
}
