//! Command implementations: argument/unit resolution, computation via
//! the core library, and emission in the selected format.

use std::f64::consts::TAU;

use serde_json::{json, Value};

use finkin_core::bodywave::{amplitude_envelope, sample_midline, BodyWaveParams, TailTargets};
use finkin_core::gait::{reference_data, run_sweep, SweepCellOutcome, SweepGrid};
use finkin_core::linkage::{
    closed_form, slider_positions, solve_general, tail_velocity, trace_path, MechanismParams,
    TailState,
};
use finkin_core::synthesis::{design_mechanism, theta_max_of, DesignSpec};
use finkin_core::units::{deg_to_rad, hz_to_rad_s, m_to_mm, mm_to_m, rad_to_deg};

use crate::output::{csv_table, json_envelope, write_output, OutputFormat};
use crate::svg::{render, Panel, Series};
use crate::{
    CliError, DesignArgs, MechanismArgs, PathArgs, SimulateArgs, SweepArgs, ValidateArgs,
    WaveArgs,
};

// ---------------------------------------------------------------------
// Unit resolution. Flags come in two families: the default set uses
// millimeters/degrees, the --si set meters/radians. Mixing them is an
// input error so a value is never silently reinterpreted.

fn resolve_opt(
    si: bool,
    flag_mm: &str,
    flag_si: &str,
    value_mm: Option<f64>,
    value_si: Option<f64>,
    convert: impl Fn(f64) -> f64,
) -> Result<Option<f64>, CliError> {
    match (si, value_mm, value_si) {
        (true, Some(_), _) => Err(CliError::Input(format!(
            "{flag_mm} cannot be combined with --si; use {flag_si}"
        ))),
        (true, None, v) => Ok(v),
        (false, _, Some(_)) => Err(CliError::Input(format!("{flag_si} requires --si"))),
        (false, v, None) => Ok(v.map(convert)),
    }
}

fn resolve_req(
    si: bool,
    flag_mm: &str,
    flag_si: &str,
    value_mm: Option<f64>,
    value_si: Option<f64>,
    convert: impl Fn(f64) -> f64,
) -> Result<f64, CliError> {
    resolve_opt(si, flag_mm, flag_si, value_mm, value_si, convert)?.ok_or_else(|| {
        CliError::Input(format!(
            "missing {}",
            if si { flag_si } else { flag_mm }
        ))
    })
}

fn mechanism_from_args(args: &MechanismArgs) -> Result<MechanismParams, CliError> {
    let si = args.si;
    let l1 = resolve_req(si, "--l1-mm", "--l1-m", args.l1_mm, args.l1_m, mm_to_m)?;
    let l2 = resolve_opt(si, "--l2-mm", "--l2-m", args.l2_mm, args.l2_m, mm_to_m)?.unwrap_or(l1);
    let a = resolve_req(si, "--a-mm", "--a-m", args.a_mm, args.a_m, mm_to_m)?;
    let b = resolve_opt(si, "--b-mm", "--b-m", args.b_mm, args.b_m, mm_to_m)?.unwrap_or(a);
    let m = resolve_opt(si, "--m-mm", "--m-m", args.m_mm, args.m_m, mm_to_m)?.unwrap_or(0.030);
    let n = resolve_opt(si, "--n-mm", "--n-m", args.n_mm, args.n_m, mm_to_m)?.unwrap_or(m);
    let phi = resolve_req(
        si,
        "--phi-deg",
        "--phi-rad",
        args.phi_deg,
        args.phi_rad,
        deg_to_rad,
    )?;
    Ok(MechanismParams::new(l1, l2, m, n, a, b, phi)?)
}

fn mechanism_json(p: &MechanismParams) -> Value {
    json!({
        "l1_m": p.l1(),
        "l2_m": p.l2(),
        "m_link_m": p.m_link(),
        "n_link_m": p.n_link(),
        "a_arm_m": p.a_arm(),
        "b_arm_m": p.b_arm(),
        "phase_phi_rad": p.phase_phi(),
    })
}

// ---------------------------------------------------------------------
// wave

pub fn wave(args: &WaveArgs) -> Result<u8, CliError> {
    let si = args.si;
    let c1 = resolve_opt(si, "--c1-mm", "--c1", args.c1_mm, args.c1, mm_to_m)?.unwrap_or(0.02);
    let c3 = resolve_opt(
        si,
        "--c3-per-mm",
        "--c3-per-m",
        args.c3_per_mm,
        args.c3_per_m,
        |v| v * 1e3,
    )?
    .unwrap_or(0.16);
    let wavelength = resolve_opt(
        si,
        "--wavelength-mm",
        "--wavelength-m",
        args.wavelength_mm,
        args.wavelength_m,
        mm_to_m,
    )?
    .unwrap_or(0.95);
    let body_length = resolve_req(
        si,
        "--body-length-mm",
        "--body-length-m",
        args.body_length_mm,
        args.body_length_m,
        mm_to_m,
    )?;
    if args.freq_hz.is_nan() || args.freq_hz <= 0.0 {
        return Err(CliError::Input(format!(
            "--freq-hz must be positive, got {}",
            args.freq_hz
        )));
    }
    let omega = hz_to_rad_s(args.freq_hz);
    let params = BodyWaveParams::new(c1, args.c2, c3, wavelength, omega, body_length)?;
    let grid = sample_midline(&params, args.n_x, args.n_t)?;

    let params_json = json!({
        "c1_m": c1,
        "c2": args.c2,
        "c3_per_m": c3,
        "wavelength_m": wavelength,
        "angular_frequency_rad_s": omega,
        "body_length_m": body_length,
        "n_x": args.n_x,
        "n_t": args.n_t,
    });

    let bytes = match args.output.format {
        OutputFormat::Csv => csv_table(
            "x_m,t_s,y_m",
            grid.iter().map(|s| format!("{},{},{}", s.x, s.t, s.y)),
        ),
        OutputFormat::Json => {
            let series: Vec<Value> = grid
                .iter()
                .map(|s| json!({"x_m": s.x, "t_s": s.t, "y_m": s.y}))
                .collect();
            json_envelope(params_json, Value::Array(series), &[])
        }
        OutputFormat::Svg => {
            let mut series = Vec::new();
            for j in 0..args.n_t {
                let points = grid[j * args.n_x..(j + 1) * args.n_x]
                    .iter()
                    .map(|s| (s.x, s.y))
                    .collect();
                series.push(Series {
                    points,
                    color: j,
                    dashed: false,
                });
            }
            for sign in [1.0, -1.0] {
                let points = (0..args.n_x)
                    .map(|i| {
                        let x = grid[i].x;
                        (x, sign * amplitude_envelope(&params, x).unwrap_or(0.0))
                    })
                    .collect();
                series.push(Series {
                    points,
                    color: 0,
                    dashed: true,
                });
            }
            render(&[Panel {
                title: format!("body wave, {} time slices with envelope", args.n_t),
                x_label: "x [m]".into(),
                y_label: "y [m]".into(),
                series,
            }])
            .into_bytes()
        }
    };
    write_output(&args.output.out, &bytes)?;
    Ok(0)
}

// ---------------------------------------------------------------------
// simulate

fn simulate_row_count(duration: f64, dt: f64) -> usize {
    ((duration / dt) * (1.0 + 1e-12) + 1e-9).floor() as usize + 1
}

pub fn simulate(args: &SimulateArgs) -> Result<u8, CliError> {
    let mech = mechanism_from_args(&args.mechanism)?;
    if args.dt_s.is_nan() || args.dt_s <= 0.0 {
        return Err(CliError::Input(format!(
            "--dt-s must be positive, got {}",
            args.dt_s
        )));
    }
    if args.duration_s < 0.0 {
        return Err(CliError::Input(format!(
            "--duration-s must be nonnegative, got {}",
            args.duration_s
        )));
    }
    if args.freq_hz.is_nan() || args.freq_hz <= 0.0 {
        return Err(CliError::Input(format!(
            "--freq-hz must be positive, got {}",
            args.freq_hz
        )));
    }
    let omega = hz_to_rad_s(args.freq_hz);
    let rows = simulate_row_count(args.duration_s, args.dt_s);

    struct Record {
        state: TailState,
        dtheta: f64,
        ds_cy: f64,
    }

    let general_state = |t: f64| -> Result<TailState, CliError> {
        let sliders = slider_positions(&mech, omega * t)?;
        let mut state = solve_general(&mech, &sliders)?;
        state.t = t;
        Ok(state)
    };

    let mut records = Vec::with_capacity(rows);
    for i in 0..rows {
        let t = i as f64 * args.dt_s;
        if args.general {
            let state = general_state(t)?;
            // No closed-form rate for the general route; differentiate
            // numerically.
            let h = 1e-6;
            let plus = general_state(t + h)?;
            let minus = general_state(t - h)?;
            records.push(Record {
                state,
                dtheta: (plus.theta - minus.theta) / (2.0 * h),
                ds_cy: (plus.s_cy - minus.s_cy) / (2.0 * h),
            });
        } else {
            let state = closed_form(&mech, t, omega)?;
            let (dtheta, ds_cy) = tail_velocity(&mech, t, omega)?;
            records.push(Record {
                state,
                dtheta,
                ds_cy,
            });
        }
    }

    let params_json = json!({
        "mechanism": mechanism_json(&mech),
        "freq_hz": args.freq_hz,
        "duration_s": args.duration_s,
        "dt_s": args.dt_s,
        "general": args.general,
    });

    let bytes = match args.output.format {
        OutputFormat::Csv => csv_table(
            "t_s,theta_rad,s_cy_m,s_cx_m,dtheta_dt,ds_cy_dt",
            records.iter().map(|r| {
                format!(
                    "{},{},{},{},{},{}",
                    r.state.t, r.state.theta, r.state.s_cy, r.state.s_cx, r.dtheta, r.ds_cy
                )
            }),
        ),
        OutputFormat::Json => {
            let series: Vec<Value> = records
                .iter()
                .map(|r| {
                    json!({
                        "t_s": r.state.t,
                        "theta_rad": r.state.theta,
                        "s_cy_m": r.state.s_cy,
                        "s_cx_m": r.state.s_cx,
                        "dtheta_dt": r.dtheta,
                        "ds_cy_dt": r.ds_cy,
                    })
                })
                .collect();
            json_envelope(params_json, Value::Array(series), &[])
        }
        OutputFormat::Svg => {
            let theta_pts = records.iter().map(|r| (r.state.t, r.state.theta)).collect();
            let scy_pts = records.iter().map(|r| (r.state.t, r.state.s_cy)).collect();
            render(&[
                Panel {
                    title: "swing angle".into(),
                    x_label: "t [s]".into(),
                    y_label: "theta [rad]".into(),
                    series: vec![Series {
                        points: theta_pts,
                        color: 0,
                        dashed: false,
                    }],
                },
                Panel {
                    title: "peduncle translation".into(),
                    x_label: "t [s]".into(),
                    y_label: "S_CY [m]".into(),
                    series: vec![Series {
                        points: scy_pts,
                        color: 1,
                        dashed: false,
                    }],
                },
            ])
            .into_bytes()
        }
    };
    write_output(&args.output.out, &bytes)?;
    Ok(0)
}

// ---------------------------------------------------------------------
// design

pub fn design(args: &DesignArgs) -> Result<u8, CliError> {
    let si = args.si;
    let theta_max = resolve_req(
        si,
        "--theta-max-deg",
        "--theta-max-rad",
        args.theta_max_deg,
        args.theta_max_rad,
        deg_to_rad,
    )?;
    let h_max = resolve_req(si, "--h-max-mm", "--h-max-m", args.h_max_mm, args.h_max_m, mm_to_m)?;
    let phi = resolve_req(
        si,
        "--phi-deg",
        "--phi-rad",
        args.phi_deg,
        args.phi_rad,
        deg_to_rad,
    )?;
    let chute = resolve_opt(si, "--chute-mm", "--chute-m", args.chute_mm, args.chute_m, mm_to_m)?
        .unwrap_or(finkin_core::synthesis::DEFAULT_CHUTE_LINK_LENGTH);

    // Any targets the design step cannot realize count as infeasible,
    // including limits rejected by the target type itself.
    let targets = TailTargets::new(h_max, theta_max, TAU, phi)
        .map_err(|e| CliError::Infeasible(e.to_string()))?;
    let spec = DesignSpec::with_chute_link_length(targets, chute)
        .map_err(|e| CliError::Infeasible(e.to_string()))?;
    let mech = design_mechanism(&spec)?;

    // Re-derive the motion limits from the result as a verification block.
    let theta_check = theta_max_of(&mech).map_err(CliError::from)?;
    let h_check = mech.l1() * (mech.phase_phi() / 2.0).cos();

    let root = json!({
        "params": {
            "l1_mm": m_to_mm(mech.l1()),
            "l2_mm": m_to_mm(mech.l2()),
            "m_mm": m_to_mm(mech.m_link()),
            "n_mm": m_to_mm(mech.n_link()),
            "a_mm": m_to_mm(mech.a_arm()),
            "b_mm": m_to_mm(mech.b_arm()),
            "phi_deg": rad_to_deg(mech.phase_phi()),
            "si": mechanism_json(&mech),
        },
        "verification": {
            "theta_max_deg": rad_to_deg(theta_check),
            "h_max_mm": m_to_mm(h_check),
            "closure_ok": finkin_core::linkage::check_closure(&mech),
        },
        "meta": {
            "tool_version": env!("CARGO_PKG_VERSION"),
            "command_line": crate::output::command_line(),
        },
    });
    let mut bytes = serde_json::to_vec_pretty(&root).expect("serializable");
    bytes.push(b'\n');
    write_output(&args.out, &bytes)?;
    Ok(0)
}

// ---------------------------------------------------------------------
// path

pub fn path(args: &PathArgs) -> Result<u8, CliError> {
    let mech = mechanism_from_args(&args.mechanism)?;
    if args.freq_hz.is_nan() || args.freq_hz <= 0.0 {
        return Err(CliError::Input(format!(
            "--freq-hz must be positive, got {}",
            args.freq_hz
        )));
    }
    let omega = hz_to_rad_s(args.freq_hz);
    let points = trace_path(&mech, omega, args.samples)?;

    let params_json = json!({
        "mechanism": mechanism_json(&mech),
        "freq_hz": args.freq_hz,
        "samples": args.samples,
    });

    let bytes = match args.output.format {
        OutputFormat::Csv => csv_table(
            "s_cx_m,s_cy_m",
            points.iter().map(|(x, y)| format!("{x},{y}")),
        ),
        OutputFormat::Json => {
            let series: Vec<Value> = points
                .iter()
                .map(|(x, y)| json!({"s_cx_m": x, "s_cy_m": y}))
                .collect();
            json_envelope(params_json, Value::Array(series), &[])
        }
        OutputFormat::Svg => render(&[Panel {
            title: "pivot-C path over one period".into(),
            x_label: "S_CX [m]".into(),
            y_label: "S_CY [m]".into(),
            series: vec![Series {
                points,
                color: 0,
                dashed: false,
            }],
        }])
        .into_bytes(),
    };
    write_output(&args.output.out, &bytes)?;
    Ok(0)
}

// ---------------------------------------------------------------------
// sweep

pub fn sweep(args: &SweepArgs) -> Result<u8, CliError> {
    let si = args.si;
    if si && args.amps_deg.is_some() {
        return Err(CliError::Input(
            "--amps-deg cannot be combined with --si; use --amps-rad".into(),
        ));
    }
    if !si && args.amps_rad.is_some() {
        return Err(CliError::Input("--amps-rad requires --si".into()));
    }
    let amplitudes: Vec<f64> = if si {
        args.amps_rad
            .clone()
            .ok_or_else(|| CliError::Input("missing --amps-rad".into()))?
    } else {
        args.amps_deg
            .clone()
            .unwrap_or_else(|| vec![15.0, 30.0, 45.0, 60.0, 75.0])
            .into_iter()
            .map(deg_to_rad)
            .collect()
    };
    let phase = resolve_opt(
        si,
        "--phi-deg",
        "--phi-rad",
        args.phi_deg,
        args.phi_rad,
        deg_to_rad,
    )?
    .unwrap_or(std::f64::consts::FRAC_PI_2);
    let lateral = resolve_opt(
        si,
        "--lateral-mm",
        "--lateral-m",
        args.lateral_mm,
        args.lateral_m,
        mm_to_m,
    )?
    .unwrap_or(0.020);

    let grid = SweepGrid {
        frequencies: args.freqs_hz.clone(),
        amplitudes,
        fixed_phase: phase,
        fixed_lateral_amplitude: lateral,
        samples_per_period: args.samples_per_period,
        n_periods: args.periods,
    };
    let cells = run_sweep(&grid)?;

    for cell in &cells {
        if let SweepCellOutcome::Infeasible { reason } = &cell.outcome {
            eprintln!(
                "warning: cell (f = {} Hz, amplitude = {} rad) infeasible: {reason}",
                cell.frequency, cell.amplitude
            );
        }
    }

    let params_json = serde_json::to_value(&grid).expect("serializable");
    let flat_rows = || {
        cells.iter().flat_map(|cell| {
            let samples: &[TailState] = match &cell.outcome {
                SweepCellOutcome::Series { samples, .. } => samples,
                SweepCellOutcome::Infeasible { .. } => &[],
            };
            samples
                .iter()
                .map(move |s| (cell.frequency, cell.amplitude, *s))
        })
    };

    let bytes = match args.output.format {
        OutputFormat::Csv => csv_table(
            "freq_hz,amplitude_rad,t_s,theta_rad,s_cy_m,s_cx_m",
            flat_rows().map(|(f, amp, s)| {
                format!("{f},{amp},{},{},{},{}", s.t, s.theta, s.s_cy, s.s_cx)
            }),
        ),
        OutputFormat::Json => {
            let series: Vec<Value> = flat_rows()
                .map(|(f, amp, s)| {
                    json!({
                        "freq_hz": f,
                        "amplitude_rad": amp,
                        "t_s": s.t,
                        "theta_rad": s.theta,
                        "s_cy_m": s.s_cy,
                        "s_cx_m": s.s_cx,
                    })
                })
                .collect();
            json_envelope(
                params_json,
                Value::Array(series),
                &[
                    ("cells", serde_json::to_value(&cells).expect("serializable")),
                    (
                        "reference_points",
                        serde_json::to_value(reference_data()).expect("serializable"),
                    ),
                ],
            )
        }
        OutputFormat::Svg => {
            let mut theta_series = Vec::new();
            let mut scy_series = Vec::new();
            for (i, cell) in cells.iter().enumerate() {
                if let SweepCellOutcome::Series { samples, .. } = &cell.outcome {
                    theta_series.push(Series {
                        points: samples.iter().map(|s| (s.t, s.theta)).collect(),
                        color: i,
                        dashed: false,
                    });
                    scy_series.push(Series {
                        points: samples.iter().map(|s| (s.t, s.s_cy)).collect(),
                        color: i,
                        dashed: false,
                    });
                }
            }
            render(&[
                Panel {
                    title: "sweep: swing angle per cell".into(),
                    x_label: "t [s]".into(),
                    y_label: "theta [rad]".into(),
                    series: theta_series,
                },
                Panel {
                    title: "sweep: peduncle translation per cell".into(),
                    x_label: "t [s]".into(),
                    y_label: "S_CY [m]".into(),
                    series: scy_series,
                },
            ])
            .into_bytes()
        }
    };
    write_output(&args.output.out, &bytes)?;
    Ok(0)
}

// ---------------------------------------------------------------------
// validate

pub fn run_validate(args: &ValidateArgs) -> Result<u8, CliError> {
    let checks = crate::validate::run_checks(args.inject_asymmetry);
    let all_passed = checks.iter().all(|c| c.passed);

    if args.json {
        let root = json!({
            "all_passed": all_passed,
            "checks": checks
                .iter()
                .map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail}))
                .collect::<Vec<_>>(),
            "meta": {
                "tool_version": env!("CARGO_PKG_VERSION"),
                "command_line": crate::output::command_line(),
            },
        });
        let mut bytes = serde_json::to_vec_pretty(&root).expect("serializable");
        bytes.push(b'\n');
        write_output("-", &bytes)?;
    } else {
        let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        let mut out = String::new();
        for c in &checks {
            out.push_str(&format!(
                "{} {:width$}  {}\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.detail,
            ));
        }
        let n_failed = checks.iter().filter(|c| !c.passed).count();
        out.push_str(&format!(
            "{} checks, {} passed, {} failed\n",
            checks.len(),
            checks.len() - n_failed,
            n_failed
        ));
        write_output("-", out.as_bytes())?;
    }
    Ok(if all_passed { 0 } else { 1 })
}
