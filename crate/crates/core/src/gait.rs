//! Gait-parameter sweeps and experimental reference points.
//!
//! A sweep grid mirrors the prototype experiments: hold the lateral
//! displacement amplitude and crank phase fixed, vary swing-angle
//! amplitude and drive frequency, and generate one tail trajectory per
//! cell. Each cell synthesizes its own mechanism through
//! [`design_mechanism`] so the commanded swing amplitude is realized
//! exactly, then evaluates the closed-form motion.
//!
//! The lateral setting is the peak-to-peak displacement
//! `L_max = 2*L1`; the design step therefore receives the translation
//! amplitude `H_max = (L_max/2) * cos(phi/2)`.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::bodywave::TailTargets;
use crate::error::{Error, Result};
use crate::linkage::{closed_form, MechanismParams, TailState};
use crate::synthesis::{design_mechanism, DesignSpec};

/// A rectangular gait-parameter grid, SI units.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepGrid {
    /// Drive frequencies, Hz.
    pub frequencies: Vec<f64>,
    /// Target swing-angle amplitudes per run, radians.
    pub amplitudes: Vec<f64>,
    /// Crank phase angle shared by every cell, radians.
    pub fixed_phase: f64,
    /// Peak-to-peak lateral displacement `L_max = 2*L1`, meters.
    pub fixed_lateral_amplitude: f64,
    /// Samples per drive period.
    pub samples_per_period: usize,
    /// Number of periods per series.
    pub n_periods: usize,
}

impl SweepGrid {
    fn validate(&self) -> Result<()> {
        if self.frequencies.is_empty() {
            return Err(Error::InvalidParams {
                name: "SweepGrid",
                reason: "frequencies must be non-empty".into(),
            });
        }
        if self.amplitudes.is_empty() {
            return Err(Error::InvalidParams {
                name: "SweepGrid",
                reason: "amplitudes must be non-empty".into(),
            });
        }
        for &f in &self.frequencies {
            if !f.is_finite() || f <= 0.0 {
                return Err(Error::InvalidParams {
                    name: "SweepGrid",
                    reason: format!("frequencies must be positive, got {f} Hz"),
                });
            }
        }
        for &a in &self.amplitudes {
            if a.is_nan() || a <= 0.0 || a >= PI / 2.0 {
                return Err(Error::InvalidParams {
                    name: "SweepGrid",
                    reason: format!("amplitudes must lie in (0, pi/2), got {a} rad"),
                });
            }
        }
        if !self.fixed_lateral_amplitude.is_finite() || self.fixed_lateral_amplitude <= 0.0 {
            return Err(Error::InvalidParams {
                name: "SweepGrid",
                reason: format!(
                    "fixed_lateral_amplitude must be positive, got {}",
                    self.fixed_lateral_amplitude
                ),
            });
        }
        if self.samples_per_period < 16 {
            return Err(Error::BadCount {
                name: "samples_per_period",
                value: self.samples_per_period,
                min: 16,
            });
        }
        if self.n_periods < 1 {
            return Err(Error::BadCount {
                name: "n_periods",
                value: self.n_periods,
                min: 1,
            });
        }
        Ok(())
    }
}

/// Outcome of one grid cell. Infeasible cells carry the reason and the
/// sweep continues.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SweepCellOutcome {
    Series {
        mechanism: MechanismParams,
        samples: Vec<TailState>,
    },
    Infeasible {
        reason: String,
    },
}

/// One labeled cell of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepCell {
    /// Drive frequency, Hz.
    pub frequency: f64,
    /// Commanded swing amplitude, radians.
    pub amplitude: f64,
    pub outcome: SweepCellOutcome,
}

/// Runs the sweep. Cells are ordered frequency-major, amplitude-minor,
/// matching grid index order regardless of how they are evaluated.
/// Sampling is deterministic: `t_j = j * T / samples_per_period` for
/// `j = 0 ..= n_periods * samples_per_period` (end instant included).
pub fn run_sweep(grid: &SweepGrid) -> Result<Vec<SweepCell>> {
    grid.validate()?;
    let h_max = (grid.fixed_lateral_amplitude / 2.0) * (grid.fixed_phase / 2.0).cos();
    let mut cells = Vec::with_capacity(grid.frequencies.len() * grid.amplitudes.len());
    for &frequency in &grid.frequencies {
        for &amplitude in &grid.amplitudes {
            let omega = TAU * frequency;
            let outcome = match synthesize_cell(h_max, amplitude, omega, grid.fixed_phase) {
                Ok(mechanism) => {
                    let period = TAU / omega;
                    let n = grid.n_periods * grid.samples_per_period;
                    let mut samples = Vec::with_capacity(n + 1);
                    for j in 0..=n {
                        let t = j as f64 * period / grid.samples_per_period as f64;
                        samples.push(closed_form(&mechanism, t, omega)?);
                    }
                    SweepCellOutcome::Series { mechanism, samples }
                }
                Err(e) => SweepCellOutcome::Infeasible {
                    reason: e.to_string(),
                },
            };
            cells.push(SweepCell {
                frequency,
                amplitude,
                outcome,
            });
        }
    }
    Ok(cells)
}

fn synthesize_cell(h_max: f64, amplitude: f64, omega: f64, phase: f64) -> Result<MechanismParams> {
    let targets = TailTargets::new(h_max, amplitude, omega, phase)?;
    design_mechanism(&DesignSpec::new(targets))
}

/// Which experimental sweep a reference point belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ParameterKind {
    /// `parameter_value` is a swing amplitude in radians.
    AmplitudeSweep,
    /// `parameter_value` is a drive frequency in Hz.
    FrequencySweep,
}

/// A measured steady-state swimming speed at one gait setting.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReferencePoint {
    pub parameter_kind: ParameterKind,
    pub parameter_value: f64,
    /// Steady-state speed, m/s.
    pub speed: f64,
    pub source_note: &'static str,
}

/// The two measured speed points from the prototype tank tests. These
/// are reported side by side with generated kinematics; nothing here
/// predicts speed.
pub fn reference_data() -> Vec<ReferencePoint> {
    vec![
        ReferencePoint {
            parameter_kind: ParameterKind::AmplitudeSweep,
            parameter_value: 75f64.to_radians(),
            speed: 0.09,
            source_note: "prototype tank test: peak steady-state speed over the amplitude sweep \
                          (0.02 m lateral amplitude, 90 deg phase, 1 Hz)",
        },
        ReferencePoint {
            parameter_kind: ParameterKind::FrequencySweep,
            parameter_value: 1.5,
            speed: 0.065,
            source_note: "prototype tank test: peak steady-state speed over the frequency sweep \
                          (0.02 m lateral amplitude, 45 deg amplitude, 90 deg phase)",
        },
    ]
}

/// Strouhal number `St = f * A / U` for an oscillation frequency `f`
/// (Hz), peak-to-peak excursion `A` (m) and forward speed `U` (m/s).
pub fn strouhal_estimate(frequency: f64, peak_to_peak_excursion: f64, speed: f64) -> Result<f64> {
    if speed.is_nan() || speed <= 0.0 {
        return Err(Error::OutOfRange {
            name: "speed",
            value: speed,
            min: f64::MIN_POSITIVE,
            max: f64::INFINITY,
        });
    }
    Ok(frequency * peak_to_peak_excursion / speed)
}
