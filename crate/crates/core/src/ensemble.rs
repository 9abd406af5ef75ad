//! Canonical (Gibbs) states of the spin pair.

use crate::spectrum::check_non_negative;
use crate::{Error, Result, Spectrum};

/// Equilibrium state at field `B`, temperature `T` and coupling `J`.
///
/// Probabilities are indexed by canonical level order and carried in both
/// linear and log form; the log form keeps tiny populations exact.
#[derive(Debug, Clone)]
pub struct ThermalState<'a> {
    spectrum: &'a Spectrum,
    field: f64,
    temperature: f64,
    coupling: f64,
    log_z: f64,
    log_probabilities: Vec<f64>,
    probabilities: Vec<f64>,
}

impl<'a> ThermalState<'a> {
    pub fn spectrum(&self) -> &'a Spectrum {
        self.spectrum
    }

    pub fn field(&self) -> f64 {
        self.field
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    /// `ln Z` with energies measured without the `8 s1 s2 J` shift.
    pub fn log_z(&self) -> f64 {
        self.log_z
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn log_probabilities(&self) -> &[f64] {
        &self.log_probabilities
    }

    /// Population of the level with 1-based index `k`.
    pub fn p(&self, k: usize) -> f64 {
        self.probabilities[k - 1]
    }

    pub fn entropy(&self) -> f64 {
        shannon_entropy(self)
    }

    /// True when both states live on the same spectrum.
    pub fn same_spectrum(&self, other: &ThermalState<'_>) -> bool {
        std::ptr::eq(self.spectrum, other.spectrum) || self.spectrum == other.spectrum
    }
}

fn validate(field: f64, temperature: f64, coupling: f64) -> Result<()> {
    check_non_negative("B", field)?;
    check_non_negative("J", coupling)?;
    if !(temperature.is_finite() && temperature > 0.0) {
        return Err(Error::InvalidTemperature(temperature));
    }
    Ok(())
}

/// Returns `(ln Z, ln p_k)` using a single shift by the largest `−E_k/T`.
fn log_weights(spectrum: &Spectrum, field: f64, temperature: f64, coupling: f64) -> (f64, Vec<f64>) {
    let mut exponents: Vec<f64> = spectrum
        .levels()
        .iter()
        .map(|l| -l.energy(field, coupling) / temperature)
        .collect();
    let log_z = log_sum_exp(&exponents);
    for e in &mut exponents {
        *e -= log_z;
    }
    (log_z, exponents)
}

pub(crate) fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    max + values.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

/// `ln Σ_k exp(−E_k/T)`.
pub fn partition_function(spectrum: &Spectrum, field: f64, temperature: f64, coupling: f64) -> Result<f64> {
    validate(field, temperature, coupling)?;
    Ok(log_weights(spectrum, field, temperature, coupling).0)
}

/// Canonical populations `p_k = exp(−E_k/T)/Z`.
pub fn occupation_probabilities(
    spectrum: &Spectrum,
    field: f64,
    temperature: f64,
    coupling: f64,
) -> Result<ThermalState<'_>> {
    validate(field, temperature, coupling)?;
    let (log_z, log_probabilities) = log_weights(spectrum, field, temperature, coupling);
    let probabilities = log_probabilities.iter().map(|lp| lp.exp()).collect();
    Ok(ThermalState {
        spectrum,
        field,
        temperature,
        coupling,
        log_z,
        log_probabilities,
        probabilities,
    })
}

/// `−Σ p_k ln p_k` of a thermal state.
pub fn shannon_entropy(state: &ThermalState<'_>) -> f64 {
    -state
        .probabilities
        .iter()
        .zip(&state.log_probabilities)
        .map(|(p, lp)| p * lp)
        .sum::<f64>()
}

/// `−Σ p ln p` for an arbitrary distribution, with `0 ln 0 = 0`.
pub fn entropy_of(distribution: &[f64]) -> f64 {
    -distribution
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|p| p * p.ln())
        .sum::<f64>()
}
