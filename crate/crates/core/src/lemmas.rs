//! Seeded random falsification of the sign lemmas behind the engine bounds.
//!
//! Each sample draws a pair, bath temperatures and fields, and a coupling
//! chosen relative to `Jc`. Samples are evaluated in parallel and tallied in
//! index order, so a report depends only on the configuration.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cycle::{cycle_report, stage_states, CycleParams};
use crate::regime::{
    coupling_bounds, efficiency_bounds, extreme_level_term, majorization_check, pwc_holds,
    wcs_predicate,
};
use crate::{Error, Regime, Result, SpinPair, Spectrum};

pub const DEFAULT_SEED: u64 = 20_251_019;
pub const DEFAULT_POINTS: usize = 10_000;
/// Slack on `η <= η_ub`.
pub const EFFICIENCY_SLACK: f64 = 1e-9;
/// Slack on `S(p) >= S(p')` when majorization holds.
pub const ENTROPY_SLACK: f64 = 1e-12;
/// At most this many counterexamples are stored per report.
pub const COUNTEREXAMPLE_CAP: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub points: usize,
    /// Pairs are drawn with `2s1 + 2s2 <= max_two_s`.
    pub max_two_s: u32,
    /// Multiplies the coupling bound `Jc` wherever the suite uses it.
    pub jc_scale: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            points: DEFAULT_POINTS,
            max_two_s: 9,
            jc_scale: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Assertion {
    /// `sign L = sign(B2/T2 − B1/T1)` for the uncoupled populations.
    ExtremeLevelSign,
    /// Positive-work condition implies `v > 0`.
    UncoupledWork,
    /// `B2 < B1θ` implies `X < 0` and no engine.
    NoEngineBelowRatio,
    /// Worst case with `0 < J < Jc` implies `X + Y/s > 0` and `ΔS > 0`.
    WorstCaseEntropy,
    /// Every upper-half level has fewer than `s` exchange terms.
    ExchangeTerms,
    /// Engine regime: `W > 0`, `ΔS > 0`, `η <= η_ub < η_C`.
    EngineChain,
    /// Majorization implies `S(p) >= S(p')`.
    MajorizationEntropy,
    /// Worst case implies the index-order tail inequalities.
    WorstCaseMajorization,
}

impl Assertion {
    pub const ALL: [Assertion; 8] = [
        Assertion::ExtremeLevelSign,
        Assertion::UncoupledWork,
        Assertion::NoEngineBelowRatio,
        Assertion::WorstCaseEntropy,
        Assertion::ExchangeTerms,
        Assertion::EngineChain,
        Assertion::MajorizationEntropy,
        Assertion::WorstCaseMajorization,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            Assertion::ExtremeLevelSign => "i_extreme_level_sign",
            Assertion::UncoupledWork => "ii_uncoupled_work",
            Assertion::NoEngineBelowRatio => "iii_no_engine_below_ratio",
            Assertion::WorstCaseEntropy => "iv_worst_case_entropy",
            Assertion::ExchangeTerms => "v_exchange_terms",
            Assertion::EngineChain => "vi_engine_chain",
            Assertion::MajorizationEntropy => "vii_majorization_entropy",
            Assertion::WorstCaseMajorization => "viii_worst_case_majorization",
        }
    }

    fn slot(&self) -> usize {
        Assertion::ALL.iter().position(|a| a == self).unwrap_or(0)
    }
}

impl fmt::Display for Assertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Tally {
    pub checked: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub assertion: Assertion,
    pub index: usize,
    pub pair: SpinPair,
    pub params: CycleParams,
    pub detail: String,
}

/// Engine statistics where `J >= Jc` under the positive-work condition;
/// nothing is asserted there.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BeyondCritical {
    pub points: usize,
    pub engines: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaReport {
    pub config: SuiteConfig,
    pub tallies: [Tally; 8],
    pub counterexamples: Vec<Counterexample>,
    pub beyond_critical: BeyondCritical,
}

impl LemmaReport {
    pub fn tally(&self, assertion: Assertion) -> Tally {
        self.tallies[assertion.slot()]
    }

    pub fn total_failures(&self) -> usize {
        self.tallies.iter().map(|t| t.failed).sum()
    }

    pub fn passed(&self) -> bool {
        self.total_failures() == 0
    }
}

/// All pairs `2s1 <= 2s2` with `2s1 + 2s2 <= max_two_s`, sorted.
pub fn sample_pairs(max_two_s: u32) -> Vec<SpinPair> {
    let mut out = Vec::new();
    for a in 1..=max_two_s / 2 {
        for b in a..=max_two_s - a {
            out.extend(SpinPair::new(a, b));
        }
    }
    out
}

#[derive(Default)]
struct Outcome {
    checks: Vec<(Assertion, Option<String>)>,
    beyond_critical: Option<bool>,
}

impl Outcome {
    fn check(&mut self, assertion: Assertion, ok: bool, detail: impl FnOnce() -> String) {
        self.checks.push((assertion, (!ok).then(detail)));
    }
}

fn sample_params(pair: SpinPair, mode: usize, rng: &mut ChaCha8Rng, jc_scale: f64) -> Result<CycleParams> {
    let t2 = rng.gen_range(0.5..10.0);
    let theta = rng.gen_range(0.1..0.9);
    let t1 = t2 / theta;
    let b1 = rng.gen_range(0.5..5.0);
    let two_s = f64::from(pair.two_s());
    let (b2, coupling) = match mode {
        // Positive-work side, J below the (possibly scaled) bound.
        0 | 1 => (b1 * (theta + (1.0 - theta) * rng.gen_range(0.05..0.95)), None),
        // Ratio below θ.
        2 => (b1 * theta * rng.gen_range(0.1..0.95), Some(rng.gen_range(0.0..1.0) * b1 / two_s)),
        // Positive-work side beyond the bound.
        _ => (b1 * (theta + (1.0 - theta) * rng.gen_range(0.05..0.95)), None),
    };
    let base = CycleParams::new(b1, b2, t1, t2, 0.0)?;
    let jc = coupling_bounds(pair, &base).jc * jc_scale;
    let j = match (mode, coupling) {
        (_, Some(j)) => j,
        (3, None) => jc * rng.gen_range(1.0..3.0),
        _ => jc * rng.gen_range(0.02..0.98),
    };
    base.with_coupling(j)
}

fn evaluate(pair: SpinPair, params: &CycleParams, jc_scale: f64) -> Result<Outcome> {
    let mut out = Outcome::default();
    let spectrum = Spectrum::build(pair);
    let s = pair.s();
    let pwc = pwc_holds(params);
    let jc = coupling_bounds(pair, params).jc * jc_scale;
    let below_jc = params.j > 0.0 && params.j < jc;

    let report = cycle_report(&spectrum, params)?;
    let (hot, cold) = stage_states(&spectrum, params)?;
    let (hot0, cold0) = stage_states(&spectrum, &params.with_coupling(0.0)?)?;

    let drive = params.b2 * params.t1 - params.b1 * params.t2;
    let l = extreme_level_term(&hot0, &cold0);
    if drive != 0.0 {
        out.check(Assertion::ExtremeLevelSign, l.signum() == drive.signum(), || {
            format!("L = {l:e}, B2*T1 - B1*T2 = {drive:e}")
        });
    }

    let v = report.baseline.v;
    if pwc {
        out.check(Assertion::UncoupledWork, v > 0.0, || format!("v = {v:e}"));
    } else {
        let ok = report.x < 0.0 && report.regime != Regime::Engine;
        out.check(Assertion::NoEngineBelowRatio, ok, || {
            format!("X = {:e}, regime = {}", report.x, report.regime)
        });
    }

    let scenario = wcs_predicate(&hot, &cold)?;
    if scenario.wcs && below_jc {
        let lhs = report.x + report.y / s;
        out.check(Assertion::WorstCaseEntropy, lhs > 0.0 && report.ds > 0.0, || {
            format!("X + Y/s = {lhs:e}, dS = {:e}", report.ds)
        });
    }

    if pwc && below_jc {
        let eff = efficiency_bounds(pair, params);
        let eta = report.eta;
        let ok = report.w > 0.0
            && report.ds > 0.0
            && matches!((eta, eff.eta_ub), (Some(e), Some(ub)) if e <= ub + EFFICIENCY_SLACK)
            && eff.ub_below_carnot;
        out.check(Assertion::EngineChain, ok, || {
            format!(
                "W = {:e}, dS = {:e}, eta = {:?}, eta_ub = {:?}, eta_C = {}",
                report.w, report.ds, eta, eff.eta_ub, eff.eta_carnot
            )
        });
    }

    let maj = majorization_check(&hot, &cold)?;
    if maj.sorted {
        let (sp, sq) = (hot.entropy(), cold.entropy());
        out.check(Assertion::MajorizationEntropy, sp >= sq - ENTROPY_SLACK, || {
            format!("S(p) = {sp}, S(p') = {sq}")
        });
    }
    if scenario.wcs {
        out.check(Assertion::WorstCaseMajorization, maj.index_order, || {
            format!("p = {:?}, p' = {:?}", hot.probabilities(), cold.probabilities())
        });
    }

    if pwc && !below_jc && params.j > 0.0 {
        out.beyond_critical = Some(report.regime == Regime::Engine);
    }
    Ok(out)
}

/// Exchange-term structure of the upper half of the spectrum.
fn exchange_term_failures(pair: SpinPair) -> Vec<String> {
    let spectrum = Spectrum::build(pair);
    let two_s = pair.two_s();
    spectrum
        .levels()
        .iter()
        .filter(|l| l.two_m > 0)
        .filter_map(|l| {
            let j = l.exchange_terms(&pair);
            let ok = 2 * j < two_s && l.two_m2 == j * (two_s - j + 1);
            (!ok).then(|| format!("level {}: {j} terms, 2m2 = {}", l.index, l.two_m2))
        })
        .collect()
}

/// Runs the suite. Every sample is a fresh `ChaCha8` stream seeded from
/// `seed` and the sample index.
pub fn lemma_suite(config: &SuiteConfig) -> Result<LemmaReport> {
    if config.points == 0 {
        return Err(Error::EmptySweep);
    }
    let pairs = sample_pairs(config.max_two_s);
    if pairs.is_empty() {
        return Err(Error::EmptySweep);
    }
    let outcomes: Vec<(SpinPair, CycleParams, Outcome)> = (0..config.points)
        .into_par_iter()
        .map(|i| {
            let pair = pairs[(i / 4) % pairs.len()];
            let mut rng =
                ChaCha8Rng::seed_from_u64(config.seed ^ (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let params = sample_params(pair, i % 4, &mut rng, config.jc_scale)?;
            Ok((pair, params, evaluate(pair, &params, config.jc_scale)?))
        })
        .collect::<Result<_>>()?;

    let mut tallies = [Tally::default(); 8];
    let mut counterexamples = Vec::new();
    let mut beyond_critical = BeyondCritical::default();
    let mut record = |assertion: Assertion, index, pair, params, failure: Option<String>| {
        let t = &mut tallies[assertion.slot()];
        t.checked += 1;
        if let Some(detail) = failure {
            t.failed += 1;
            if counterexamples.len() < COUNTEREXAMPLE_CAP {
                counterexamples.push(Counterexample {
                    assertion,
                    index,
                    pair,
                    params,
                    detail,
                });
            }
        }
    };

    for pair in &pairs {
        let dummy = CycleParams::new(2.0, 1.0, 2.0, 1.0, 0.0)?;
        let failures = exchange_term_failures(*pair);
        if failures.is_empty() {
            record(Assertion::ExchangeTerms, 0, *pair, dummy, None);
        }
        for f in failures {
            record(Assertion::ExchangeTerms, 0, *pair, dummy, Some(f));
        }
    }
    for (index, (pair, params, outcome)) in outcomes.into_iter().enumerate() {
        for (assertion, failure) in outcome.checks {
            record(assertion, index, pair, params, failure);
        }
        if let Some(engine) = outcome.beyond_critical {
            beyond_critical.points += 1;
            beyond_critical.engines += usize::from(engine);
        }
    }
    Ok(LemmaReport {
        config: *config,
        tallies,
        counterexamples,
        beyond_critical,
    })
}
