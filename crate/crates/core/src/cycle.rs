//! Average energetics of the four-stroke quasi-static Otto cycle.
//!
//! Stage 1 thermalizes at `(B1, T1)`, stage 2 lowers the field to `B2` with
//! frozen populations, stage 3 thermalizes at `(B2, T2)` and stage 4 restores
//! `B1`. The coupling `J` is held fixed throughout.

use std::fmt;

use crate::ensemble::occupation_probabilities;
use crate::oracle;
use crate::{Error, Result, SpinPair, Spectrum, ThermalState};

/// Control parameters of one cycle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleParams {
    pub b1: f64,
    pub b2: f64,
    pub t1: f64,
    pub t2: f64,
    pub j: f64,
}

impl CycleParams {
    /// Requires `B1 > B2 > 0`, `T1 >= T2 > 0` and `J >= 0`.
    ///
    /// Equal bath temperatures are accepted so that the no-gradient case can
    /// be evaluated; such a cycle never runs as an engine.
    pub fn new(b1: f64, b2: f64, t1: f64, t2: f64, j: f64) -> Result<Self> {
        let all_finite = [b1, b2, t1, t2, j].iter().all(|v| v.is_finite());
        if !all_finite {
            return Err(Error::InvalidCycle("parameters must be finite".into()));
        }
        if !(b1 > b2 && b2 > 0.0) {
            return Err(Error::InvalidCycle(format!("need B1 > B2 > 0, got B1 = {b1}, B2 = {b2}")));
        }
        if !(t1 >= t2 && t2 > 0.0) {
            return Err(Error::InvalidCycle(format!("need T1 >= T2 > 0, got T1 = {t1}, T2 = {t2}")));
        }
        if j < 0.0 {
            return Err(Error::InvalidCycle(format!("need J >= 0, got J = {j}")));
        }
        Ok(Self { b1, b2, t1, t2, j })
    }

    /// `θ = T2/T1`.
    pub fn theta(&self) -> f64 {
        self.t2 / self.t1
    }

    pub fn with_coupling(&self, j: f64) -> Result<Self> {
        Self::new(self.b1, self.b2, self.t1, self.t2, j)
    }

    /// Uncoupled efficiency `1 − B2/B1`.
    pub fn eta0(&self) -> f64 {
        1.0 - self.b2 / self.b1
    }

    pub fn eta_carnot(&self) -> f64 {
        1.0 - self.theta()
    }
}

/// Operating mode from the signs of `Q1`, `Q2` and `W = Q1 − Q2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    Engine,
    Refrigerator,
    Heater,
    Accelerator,
    Idle,
    /// Work out with heat drawn from both baths.
    Anomalous,
}

impl Regime {
    pub fn classify(q1: f64, q2: f64, w: f64) -> Self {
        if w > 0.0 {
            if q1 > 0.0 && q2 > 0.0 {
                Regime::Engine
            } else {
                Regime::Anomalous
            }
        } else if w < 0.0 {
            if q1 < 0.0 && q2 < 0.0 {
                Regime::Refrigerator
            } else if q1 > 0.0 && q2 > 0.0 {
                Regime::Accelerator
            } else {
                Regime::Heater
            }
        } else {
            Regime::Idle
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Engine => "engine",
            Regime::Refrigerator => "refrigerator",
            Regime::Heater => "heater",
            Regime::Accelerator => "accelerator",
            Regime::Idle => "idle",
            Regime::Anomalous => "anomalous",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Quantities of the uncoupled (`J = 0`) cycle at the same fields and baths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Baseline {
    pub v: f64,
    pub q1: f64,
    pub q2: f64,
    pub w: f64,
    pub eta0: f64,
    pub ds0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleReport {
    pub x: f64,
    pub y: f64,
    pub q1: f64,
    pub q2: f64,
    pub w: f64,
    /// `1 − Q2/Q1`, defined when `Q1 > 0`; not clamped outside the engine regime.
    pub eta: Option<f64>,
    pub ds: f64,
    pub regime: Regime,
    pub baseline: Baseline,
}

/// Stage-1 and stage-3 equilibrium states of a cycle.
pub fn stage_states<'a>(
    spectrum: &'a Spectrum,
    params: &CycleParams,
) -> Result<(ThermalState<'a>, ThermalState<'a>)> {
    let hot = occupation_probabilities(spectrum, params.b1, params.t1, params.j)?;
    let cold = occupation_probabilities(spectrum, params.b2, params.t2, params.j)?;
    Ok((hot, cold))
}

/// `X = ½ Σ m1 (P_k − P'_k)` and `Y = Σ m2 (P'_k − P_k)`.
///
/// `X` is accumulated as `Σ (m1/2 + s)(P_k − P'_k)`, which is the same sum
/// because both distributions are normalized; the ground level drops out and
/// the result keeps full relative precision when the ground population
/// saturates. Levels with `m2 = 0` do not enter `Y`.
pub fn xy_factors(stage1: &ThermalState<'_>, stage3: &ThermalState<'_>) -> Result<(f64, f64)> {
    if !stage1.same_spectrum(stage3) {
        return Err(Error::SpectrumMismatch);
    }
    let spectrum = stage1.spectrum();
    let two_s = spectrum.pair().two_s() as i32;
    let mut x = 0.0;
    let mut y = 0.0;
    for (level, (p, pp)) in spectrum
        .levels()
        .iter()
        .zip(stage1.probabilities().iter().zip(stage3.probabilities()))
    {
        let lift = level.two_m + two_s;
        if lift != 0 {
            x += f64::from(lift) / 2.0 * (p - pp);
        }
        if level.two_m2 != 0 {
            y += level.m2() * (pp - p);
        }
    }
    Ok((x, y))
}

/// Full report for a pair; builds the spectrum internally.
pub fn average_cycle_report(pair: SpinPair, params: &CycleParams) -> Result<CycleReport> {
    cycle_report(&Spectrum::build(pair), params)
}

pub fn cycle_report(spectrum: &Spectrum, params: &CycleParams) -> Result<CycleReport> {
    let (hot, cold) = stage_states(spectrum, params)?;
    let (x, y) = xy_factors(&hot, &cold)?;

    let baseline = if params.j == 0.0 {
        baseline_from(x, params)
    } else {
        let (hot0, cold0) = stage_states(spectrum, &params.with_coupling(0.0)?)?;
        let (v, _) = xy_factors(&hot0, &cold0)?;
        baseline_from(v, params)
    };

    Ok(report_from_factors(x, y, params, baseline))
}

fn baseline_from(v: f64, params: &CycleParams) -> Baseline {
    let q1 = 2.0 * params.b1 * v;
    let q2 = 2.0 * params.b2 * v;
    Baseline {
        v,
        q1,
        q2,
        w: q1 - q2,
        eta0: params.eta0(),
        ds0: -q1 / params.t1 + q2 / params.t2,
    }
}

fn report_from_factors(x: f64, y: f64, params: &CycleParams, baseline: Baseline) -> CycleReport {
    let exchange = 8.0 * params.j * y;
    let q1 = 2.0 * params.b1 * x + exchange;
    let q2 = 2.0 * params.b2 * x + exchange;
    let w = q1 - q2;
    let eta = (q1 > 0.0).then(|| 1.0 - q2 / q1);
    let ds = 2.0 * x * (params.b2 / params.t2 - params.b1 / params.t1)
        + exchange * (1.0 / params.t2 - 1.0 / params.t1);
    CycleReport {
        x,
        y,
        q1,
        q2,
        w,
        eta,
        ds,
        regime: Regime::classify(q1, q2, w),
        baseline,
    }
}

/// Absolute difference between the work from the `m1`-weighted sum and
/// `2(B1−B2)·Tr[h0 Δρ]` evaluated on the dense Hamiltonian.
pub fn trace_work_deviation(pair: SpinPair, params: &CycleParams) -> Result<f64> {
    let report = average_cycle_report(pair, params)?;
    let hot = oracle::zeeman_expectation(pair, params.b1, params.t1, params.j)?;
    let cold = oracle::zeeman_expectation(pair, params.b2, params.t2, params.j)?;
    let trace_work = 2.0 * (params.b1 - params.b2) * (hot - cold);
    Ok((report.w - trace_work).abs())
}

/// True when the two work evaluations agree within `1e-9`.
pub fn trace_consistency_check(pair: SpinPair, params: &CycleParams) -> Result<bool> {
    Ok(trace_work_deviation(pair, params)? < 1e-9)
}
