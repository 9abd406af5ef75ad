//! Operating-regime predicates and performance bounds.

use crate::cycle::{stage_states, xy_factors, CycleParams};
use crate::ensemble::{entropy_of, occupation_probabilities};
use crate::{Error, Result, SpinPair, Spectrum, ThermalState};

/// Absolute tolerance for comparing two populations.
pub const PROBABILITY_TOLERANCE: f64 = 1e-15;

/// Positive-work condition `B2/T2 > B1/T1`, i.e. `B2 > B1·θ`.
pub fn pwc_holds(params: &CycleParams) -> bool {
    // Cross-multiplied so that B2 = B1·θ is exactly the boundary.
    params.b2 * params.t1 > params.b1 * params.t2
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingBounds {
    /// `(B2 − B1θ) / (4s(1−θ))`: average engine operation for `0 < J < Jc`.
    pub jc: f64,
    /// `(B2 − B1θ) / (4 s1(2s2+1)(1−θ))`: every engine COC obeys the second law.
    pub jx: f64,
    /// False when the positive-work condition fails; the bounds are then not positive.
    pub engine_regime: bool,
}

pub fn coupling_bounds(pair: SpinPair, params: &CycleParams) -> CouplingBounds {
    let theta = params.theta();
    let gap = params.b2 - params.b1 * theta;
    let denom = 1.0 - theta;
    CouplingBounds {
        jc: gap / (2.0 * f64::from(pair.two_s()) * denom),
        jx: gap / (2.0 * f64::from(pair.two_m2_max()) * denom),
        engine_regime: pwc_holds(params),
    }
}

/// Second-law threshold `J_a = x(B2 − B1θ) / (8|y|(1−θ))` for a complete
/// cycle with `x > 0`, `y < 0`. `two_y` is `2y`.
pub fn j_a_bound(x: i32, two_y: i32, params: &CycleParams) -> Result<f64> {
    if x <= 0 || two_y >= 0 {
        return Err(Error::NoCouplingBound { x, two_y });
    }
    let theta = params.theta();
    let abs_y = f64::from(two_y.unsigned_abs()) / 2.0;
    Ok(f64::from(x) * (params.b2 - params.b1 * theta) / (8.0 * abs_y * (1.0 - theta)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EfficiencyBounds {
    /// `η0 / (1 − 4sJ/B1)`; `None` unless `4sJ < B1`.
    pub eta_ub: Option<f64>,
    /// `η0 / (1 − 4 s1(2s2+1) J/B1)`; `None` unless `4 s1(2s2+1) J < B1`.
    pub eta_max: Option<f64>,
    pub eta_carnot: f64,
    /// `η_ub < η_C`, which holds exactly when `J < Jc`.
    pub ub_below_carnot: bool,
}

pub fn efficiency_bounds(pair: SpinPair, params: &CycleParams) -> EfficiencyBounds {
    let eta0 = params.eta0();
    let bound = |two_m2: u32| {
        // 4·m2·J/B1 with m2 = two_m2/2
        let shrink = 1.0 - 2.0 * f64::from(two_m2) * params.j / params.b1;
        (shrink > 0.0).then(|| eta0 / shrink)
    };
    let eta_ub = bound(pair.two_s());
    let eta_max = bound(pair.two_m2_max());
    let eta_carnot = params.eta_carnot();
    EfficiencyBounds {
        eta_ub,
        eta_max,
        eta_carnot,
        ub_below_carnot: eta_ub.is_some_and(|ub| ub < eta_carnot),
    }
}

/// Worst-case and best-case population orderings between the two baths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Scenario {
    /// `P'_k <= P_k` for every `k >= 2` and `P'_1 >= P_1`.
    pub wcs: bool,
    /// `P'_k > P_k` for `k = 2..n/2`.
    pub bcs: bool,
}

pub fn wcs_predicate(stage1: &ThermalState<'_>, stage3: &ThermalState<'_>) -> Result<Scenario> {
    if !stage1.same_spectrum(stage3) {
        return Err(Error::SpectrumMismatch);
    }
    let p = stage1.probabilities();
    let q = stage3.probabilities();
    let eps = PROBABILITY_TOLERANCE;
    let wcs = q[0] >= p[0] - eps && p.iter().zip(q).skip(1).all(|(a, b)| *b <= a + eps);
    let half = p.len() / 2;
    let bcs = (1..half).all(|i| q[i] - p[i] > eps);
    Ok(Scenario { wcs, bcs })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Majorization {
    /// Standard majorization of the non-increasingly sorted vectors.
    pub sorted: bool,
    /// Tail sums in canonical order: `Σ_{k>=j} P'_k <= Σ_{k>=j} P_k`.
    pub index_order: bool,
    /// `S(P) >= S(P')`.
    pub entropy_ordered: bool,
}

impl Majorization {
    /// The two variants agree.
    pub fn consistent(&self) -> bool {
        self.sorted == self.index_order
    }
}

/// Checks `{P} ≺ {P'}` (stage-3 populations majorize stage-1 populations).
pub fn majorization_check(stage1: &ThermalState<'_>, stage3: &ThermalState<'_>) -> Result<Majorization> {
    if !stage1.same_spectrum(stage3) {
        return Err(Error::SpectrumMismatch);
    }
    let p = stage1.probabilities();
    let q = stage3.probabilities();
    Ok(Majorization {
        sorted: majorizes(q, p),
        index_order: tail_dominated(q, p),
        entropy_ordered: stage1.entropy() >= stage3.entropy(),
    })
}

/// True when `upper` majorizes `lower`: every partial sum of the sorted
/// `upper` is at least the matching partial sum of the sorted `lower`.
///
/// The comparison tolerance grows with the number of summed terms.
pub fn majorizes(upper: &[f64], lower: &[f64]) -> bool {
    assert_eq!(upper.len(), lower.len());
    let sorted = |v: &[f64]| {
        let mut v = v.to_vec();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    };
    partial_sums_dominate(&sorted(upper), &sorted(lower))
}

/// Index-order variant: `Σ_{k>=j} upper_k <= Σ_{k>=j} lower_k` for every `j >= 2`.
pub fn tail_dominated(upper: &[f64], lower: &[f64]) -> bool {
    assert_eq!(upper.len(), lower.len());
    let mut tail_upper = 0.0;
    let mut tail_lower = 0.0;
    let n = upper.len();
    for (m, i) in (1..n).rev().enumerate() {
        tail_upper += upper[i];
        tail_lower += lower[i];
        if tail_upper > tail_lower + PROBABILITY_TOLERANCE * (m + 1) as f64 {
            return false;
        }
    }
    true
}

fn partial_sums_dominate(upper: &[f64], lower: &[f64]) -> bool {
    let mut su = 0.0;
    let mut sl = 0.0;
    for (m, (u, l)) in upper.iter().zip(lower).enumerate().take(upper.len().saturating_sub(1)) {
        su += u;
        sl += l;
        if su < sl - PROBABILITY_TOLERANCE * (m + 1) as f64 {
            return false;
        }
    }
    true
}

/// `f = p1 − pn` of a state, as used in the `L` term.
fn ground_minus_top(state: &ThermalState<'_>) -> f64 {
    let p = state.probabilities();
    p[0] - p[p.len() - 1]
}

/// `(P'_1 − P_1) + (P_n − P'_n)`, evaluated so that saturated ground
/// populations do not cancel: `P'_1 − P_1 = Σ_{k>=2} P_k − Σ_{k>=2} P'_k`.
pub fn extreme_level_term(stage1: &ThermalState<'_>, stage3: &ThermalState<'_>) -> f64 {
    let p = stage1.probabilities();
    let q = stage3.probabilities();
    let excited = |v: &[f64]| v[1..].iter().sum::<f64>();
    let n = p.len();
    if p[0] < 0.5 && q[0] < 0.5 {
        (q[0] - p[0]) + (p[n - 1] - q[n - 1])
    } else {
        (excited(p) - excited(q)) + (p[n - 1] - q[n - 1])
    }
}

/// Summary of every regime indicator at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeVerdict {
    pub pwc: bool,
    pub wcs: bool,
    pub bcs: bool,
    pub majorizes: bool,
    pub jc: f64,
    pub jx: f64,
    pub eta_ub: Option<f64>,
    pub eta_max: Option<f64>,
    pub eta_carnot: f64,
    /// `L` of the uncoupled populations.
    pub l: f64,
    /// `L_X` of the coupled populations.
    pub l_x: f64,
    pub second_law_ok: bool,
}

pub fn regime_verdict(spectrum: &Spectrum, params: &CycleParams) -> Result<RegimeVerdict> {
    let pair = spectrum.pair();
    let (hot, cold) = stage_states(spectrum, params)?;
    let (hot0, cold0) = stage_states(spectrum, &params.with_coupling(0.0)?)?;
    let scenario = wcs_predicate(&hot, &cold)?;
    let maj = majorization_check(&hot, &cold)?;
    let bounds = coupling_bounds(pair, params);
    let eff = efficiency_bounds(pair, params);
    let (x, y) = xy_factors(&hot, &cold)?;
    let ds = 2.0 * x * (params.b2 / params.t2 - params.b1 / params.t1)
        + 8.0 * params.j * y * (1.0 / params.t2 - 1.0 / params.t1);
    Ok(RegimeVerdict {
        pwc: pwc_holds(params),
        wcs: scenario.wcs,
        bcs: scenario.bcs,
        majorizes: maj.sorted,
        jc: bounds.jc,
        jx: bounds.jx,
        eta_ub: eff.eta_ub,
        eta_max: eff.eta_max,
        eta_carnot: eff.eta_carnot,
        l: extreme_level_term(&hot0, &cold0),
        l_x: extreme_level_term(&hot, &cold),
        second_law_ok: ds >= 0.0,
    })
}

/// `p1 − pn` of the canonical state at `(B, T, J)`.
pub fn population_contrast(spectrum: &Spectrum, field: f64, temperature: f64, coupling: f64) -> Result<f64> {
    Ok(ground_minus_top(&occupation_probabilities(spectrum, field, temperature, coupling)?))
}

/// Shannon entropies `(S(P), S(P'))` of two raw distributions.
pub fn entropy_pair(p: &[f64], q: &[f64]) -> (f64, f64) {
    (entropy_of(p), entropy_of(q))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(a: u32, b: u32) -> SpinPair {
        SpinPair::new(a, b).unwrap()
    }

    fn params(b1: f64, b2: f64, t1: f64, t2: f64, j: f64) -> CycleParams {
        CycleParams::new(b1, b2, t1, t2, j).unwrap()
    }

    #[test]
    fn positive_work_condition() {
        assert!(pwc_holds(&params(4.0, 3.0, 4.0, 2.0, 0.0)));
        assert!(!pwc_holds(&params(4.0, 2.0, 4.0, 2.0, 0.0)));
        assert!(!pwc_holds(&params(4.0, 1.0, 4.0, 2.0, 0.0)));
    }

    #[test]
    fn critical_couplings() {
        let p = params(4.0, 3.0, 4.0, 2.0, 0.0);
        let b = coupling_bounds(pair(1, 2), &p);
        assert!((b.jc - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(b.jc, b.jx);
        assert!(b.engine_regime);
        for (a, c) in [(1, 6), (2, 5), (3, 4)] {
            let b = coupling_bounds(pair(a, c), &p);
            assert!((b.jc - 1.0 / 7.0).abs() < 1e-12);
            assert_eq!((b.jc * 1000.0).floor() / 1000.0, 0.142);
        }
        for c in 1..9 {
            let b = coupling_bounds(pair(1, c), &p);
            assert_eq!(b.jx, b.jc);
        }
        let b = coupling_bounds(pair(2, 5), &p);
        assert!(b.jx < b.jc);
        let off = coupling_bounds(pair(1, 2), &params(4.0, 1.0, 4.0, 2.0, 0.0));
        assert!(!off.engine_regime && off.jc < 0.0);
    }

    #[test]
    fn second_law_threshold() {
        let p = params(4.0, 3.0, 4.0, 2.0, 0.0);
        for (a, c) in [(1, 2), (2, 5), (3, 4), (4, 4)] {
            let pr = pair(a, c);
            let b = coupling_bounds(pr, &p);
            let two_s = pr.two_s() as i32;
            assert!((j_a_bound(2, -two_s, &p).unwrap() - b.jc).abs() < 1e-14);
            let jx = j_a_bound(2, -(pr.two_m2_max() as i32), &p).unwrap();
            assert!((jx - b.jx).abs() < 1e-14);
            assert!((j_a_bound(4, -two_s, &p).unwrap() - 2.0 * b.jc).abs() < 1e-14);
        }
        assert!(j_a_bound(2, 0, &p).is_err());
        assert!(j_a_bound(2, 3, &p).is_err());
        assert!(j_a_bound(-2, -3, &p).is_err());
    }

    #[test]
    fn efficiency_bound_values() {
        let e = efficiency_bounds(pair(1, 2), &params(4.0, 3.0, 4.0, 2.0, 0.2));
        assert!((e.eta_ub.unwrap() - 0.25 / 0.7).abs() < 1e-12);
        assert_eq!(e.eta_ub, e.eta_max);
        assert!(e.ub_below_carnot);
        let e0 = efficiency_bounds(pair(3, 4), &params(4.0, 3.0, 4.0, 2.0, 0.0));
        assert_eq!(e0.eta_ub, Some(0.25));
        assert_eq!(e0.eta_max, Some(0.25));
        let big = efficiency_bounds(pair(1, 2), &params(4.0, 3.0, 4.0, 2.0, 1.0));
        assert_eq!(big.eta_ub, None);
        assert!(!big.ub_below_carnot);
        // Shared bound for all pairs with s = 7/2.
        let p = params(4.0, 3.0, 4.0, 2.0, 0.1);
        let ubs: Vec<f64> = [(1, 6), (2, 5), (3, 4)]
            .iter()
            .map(|&(a, c)| efficiency_bounds(pair(a, c), &p).eta_ub.unwrap())
            .collect();
        assert!(ubs.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn identical_states_scenarios() {
        let sp = Spectrum::build(pair(1, 2));
        let a = occupation_probabilities(&sp, 3.0, 2.0, 0.1).unwrap();
        let b = occupation_probabilities(&sp, 3.0, 2.0, 0.1).unwrap();
        assert!(wcs_predicate(&a, &b).unwrap().wcs);
        let m = majorization_check(&a, &b).unwrap();
        assert!(m.sorted && m.index_order && m.entropy_ordered);
    }

    #[test]
    fn wcs_at_small_coupling_breaks_near_jc() {
        let sp = Spectrum::build(pair(1, 2));
        let small = params(4.0, 3.0, 4.0, 2.0, 0.05);
        let (h, c) = stage_states(&sp, &small).unwrap();
        assert!(wcs_predicate(&h, &c).unwrap().wcs);
        let hot = params(4.0, 3.0, 6.0, 3.0, 0.32);
        let (h, c) = stage_states(&sp, &hot).unwrap();
        assert!(c.p(2) > h.p(2));
        assert!(!wcs_predicate(&h, &c).unwrap().wcs);
        // Majorization survives.
        assert!(majorization_check(&h, &c).unwrap().sorted);
    }

    #[test]
    fn best_case_is_reachable() {
        // Search a coarse grid for a point with P'_k > P_k on k = 2..n/2.
        let sp = Spectrum::build(pair(1, 2));
        let mut found = None;
        'outer: for b2 in [0.2, 0.5, 1.0] {
            for t1 in [1.0, 2.0, 4.0] {
                for theta in [0.05, 0.1, 0.2] {
                    let p = params(4.0, b2, t1, t1 * theta, 0.0);
                    if b2 >= 4.0 * theta {
                        continue;
                    }
                    let (h, c) = stage_states(&sp, &p).unwrap();
                    if wcs_predicate(&h, &c).unwrap().bcs {
                        found = Some(p);
                        break 'outer;
                    }
                }
            }
        }
        assert!(found.is_some());
    }

    #[test]
    fn uniform_is_majorized_by_everything() {
        let uniform = vec![0.25; 4];
        let peaked = [0.7, 0.1, 0.1, 0.1];
        assert!(majorizes(&peaked, &uniform));
        assert!(!majorizes(&uniform, &peaked));
        let sp = Spectrum::build(pair(1, 1));
        let stage1 = occupation_probabilities(&sp, 2.0, 1.0, 0.0).unwrap();
        let stage3 = occupation_probabilities(&sp, 0.0, 1.0, 0.0).unwrap();
        assert!(!majorization_check(&stage1, &stage3).unwrap().sorted);
    }

    #[test]
    fn extreme_term_precise_when_saturated() {
        let sp = Spectrum::build(pair(1, 2));
        let p = params(4.0, 3.0, 0.2, 0.1, 0.0);
        let (h, c) = stage_states(&sp, &p).unwrap();
        let l = extreme_level_term(&h, &c);
        assert!(l > 0.0, "L = {l}");
    }

    #[test]
    fn contrast_increases_with_field() {
        for (a, c) in [(1, 2), (2, 3), (3, 6)] {
            let sp = Spectrum::build(pair(a, c));
            let mut last = -1.0;
            for i in 1..200 {
                let ratio = 0.02 * f64::from(i);
                let f = population_contrast(&sp, ratio, 1.0, 0.0).unwrap();
                assert!(f > last || (f == 1.0 && last == 1.0), "{ratio}: {f} <= {last}");
                last = f;
            }
        }
    }
}
