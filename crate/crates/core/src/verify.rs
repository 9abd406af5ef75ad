//! End-to-end verification: analytic results against the dense oracle,
//! followed by the lemma suite.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cycle::{trace_work_deviation, CycleParams};
use crate::ensemble::partition_function;
use crate::lemmas::{lemma_suite, LemmaReport, SuiteConfig};
use crate::oracle::{build_hamiltonian, constant_shift, eigen_decomposition, oracle_log_z};
use crate::{Error, Result, SpinPair, Spectrum};

pub const SPECTRUM_TOLERANCE: f64 = 1e-9;
pub const PARTITION_TOLERANCE: f64 = 1e-9;
pub const RESIDUAL_TOLERANCE: f64 = 1e-9;
pub const TRACE_WORK_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    pub seed: u64,
    /// Random `(B, J)` points per pair.
    pub points_per_pair: usize,
    /// Pairs with at most this many levels are included.
    pub max_levels: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            seed: crate::lemmas::DEFAULT_SEED,
            points_per_pair: 100,
            max_levels: 54,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct OracleSummary {
    pub pairs: usize,
    pub points: usize,
    pub max_spectrum_deviation: f64,
    /// Largest `|Z_oracle / Z − 1|`.
    pub max_partition_deviation: f64,
    pub max_residual: f64,
    pub max_trace_work_deviation: f64,
    pub failures: usize,
}

impl OracleSummary {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Every pair `2s1 <= 2s2` whose product space has at most `max_levels` states.
pub fn pairs_up_to(max_levels: usize) -> Vec<SpinPair> {
    let mut out = Vec::new();
    for a in 1u32.. {
        if ((a + 1) * (a + 1)) as usize > max_levels {
            break;
        }
        for b in a.. {
            if ((a + 1) * (b + 1)) as usize > max_levels {
                break;
            }
            out.extend(SpinPair::new(a, b));
        }
    }
    out
}

#[derive(Debug, Clone, Copy, Default)]
struct PointCheck {
    spectrum: f64,
    partition: f64,
    residual: f64,
    trace_work: f64,
}

impl PointCheck {
    fn failed(&self) -> bool {
        !(self.spectrum < SPECTRUM_TOLERANCE
            && self.partition < PARTITION_TOLERANCE
            && self.residual < RESIDUAL_TOLERANCE
            && self.trace_work < TRACE_WORK_TOLERANCE)
    }
}

fn check_point(pair: SpinPair, spectrum: &Spectrum, rng: &mut ChaCha8Rng) -> Result<PointCheck> {
    let field = rng.gen_range(0.0..5.0);
    let coupling = rng.gen_range(0.0..2.0);
    let temperature = rng.gen_range(0.5..10.0);

    let h = build_hamiltonian(pair, field, coupling)?;
    let eig = eigen_decomposition(&h)?;
    let shift = constant_shift(pair, coupling);
    let mut analytic = spectrum.energies(field, coupling);
    analytic.sort_by(f64::total_cmp);
    let spectrum_dev = analytic
        .iter()
        .zip(&eig.values)
        .map(|(a, o)| (a - (o - shift)).abs())
        .fold(0.0, f64::max);

    let ln_z = partition_function(spectrum, field, temperature, coupling)?;
    let ln_z_oracle = oracle_log_z(pair, field, temperature, coupling)?;
    let partition = (ln_z_oracle - ln_z).exp_m1().abs();

    // Trace-form work on a small cycle anchored at this point.
    let b2 = field.max(0.1);
    let params = CycleParams::new(b2 * 1.5, b2, temperature * 2.0, temperature, coupling)?;
    let trace_work = trace_work_deviation(pair, &params)?;

    Ok(PointCheck {
        spectrum: spectrum_dev,
        partition,
        residual: eig.residual(&h),
        trace_work,
    })
}

pub fn oracle_sweep(config: &OracleConfig) -> Result<OracleSummary> {
    if config.points_per_pair == 0 {
        return Err(Error::EmptySweep);
    }
    let pairs = pairs_up_to(config.max_levels);
    let checks: Vec<PointCheck> = pairs
        .par_iter()
        .enumerate()
        .map(|(pi, &pair)| {
            let spectrum = Spectrum::build(pair);
            let mut rng = ChaCha8Rng::seed_from_u64(
                config.seed ^ (pi as u64 + 1).wrapping_mul(0xD1B5_4A32_D192_ED03),
            );
            (0..config.points_per_pair)
                .map(|_| check_point(pair, &spectrum, &mut rng))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    let mut summary = OracleSummary {
        pairs: pairs.len(),
        points: checks.len(),
        ..OracleSummary::default()
    };
    for c in &checks {
        summary.max_spectrum_deviation = summary.max_spectrum_deviation.max(c.spectrum);
        summary.max_partition_deviation = summary.max_partition_deviation.max(c.partition);
        summary.max_residual = summary.max_residual.max(c.residual);
        summary.max_trace_work_deviation = summary.max_trace_work_deviation.max(c.trace_work);
        summary.failures += usize::from(c.failed());
    }
    Ok(summary)
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub oracle: OracleSummary,
    pub lemmas: LemmaReport,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.oracle.passed() && self.lemmas.passed()
    }
}

pub fn run_verification(oracle: &OracleConfig, suite: &SuiteConfig) -> Result<VerifyReport> {
    Ok(VerifyReport {
        oracle: oracle_sweep(oracle)?,
        lemmas: lemma_suite(suite)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_enumeration() {
        let pairs = pairs_up_to(54);
        assert!(pairs.iter().all(|p| p.level_count() <= 54));
        assert!(pairs.contains(&SpinPair::new(5, 8).unwrap()));
        assert!(pairs.contains(&SpinPair::new(1, 26).unwrap()));
        assert!(!pairs.contains(&SpinPair::new(1, 27).unwrap()));
        assert_eq!(pairs_up_to(4), vec![SpinPair::new(1, 1).unwrap()]);
    }

    #[test]
    fn small_oracle_sweep() {
        let config = OracleConfig {
            points_per_pair: 3,
            max_levels: 20,
            ..OracleConfig::default()
        };
        let summary = oracle_sweep(&config).unwrap();
        assert!(summary.passed(), "{summary:?}");
        assert_eq!(summary.points, 3 * summary.pairs);
    }
}
