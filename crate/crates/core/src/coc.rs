//! Complete Otto cycles: the working medium leaves level `i`, is found in
//! level `f` after the hot stroke and back in `i` after the cold stroke.

use std::fmt;

use crate::cycle::CycleParams;
use crate::regime::{coupling_bounds, pwc_holds};
use crate::{Error, Result, Spectrum};

/// Entropy changes more negative than this count as violations.
pub const ENTROPY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CocClass {
    FieldOnly,
    CouplingOnly,
    Aligned,
    Opposed,
    Null,
}

impl CocClass {
    pub const ALL: [CocClass; 5] = [
        CocClass::FieldOnly,
        CocClass::CouplingOnly,
        CocClass::Aligned,
        CocClass::Opposed,
        CocClass::Null,
    ];

    pub fn of(x: i32, two_y: i32) -> Self {
        match (x.signum(), two_y.signum()) {
            (0, 0) => CocClass::Null,
            (_, 0) => CocClass::FieldOnly,
            (0, _) => CocClass::CouplingOnly,
            (a, b) if a == b => CocClass::Aligned,
            _ => CocClass::Opposed,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            CocClass::FieldOnly => "FIELD_ONLY",
            CocClass::CouplingOnly => "COUPLING_ONLY",
            CocClass::Aligned => "ALIGNED",
            CocClass::Opposed => "OPPOSED",
            CocClass::Null => "NULL",
        }
    }
}

impl fmt::Display for CocClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One two-level cycle. Heats follow `Q1 = xB1 + 8Jy`, `Q2 = xB2 + 8Jy`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CocRecord {
    /// 1-based canonical indices.
    pub initial_k: usize,
    pub final_k: usize,
    /// `m1,f − m1,i`.
    pub x: i32,
    /// `2(m2,f − m2,i)`.
    pub two_y: i32,
    pub q1: f64,
    pub q2: f64,
    pub w: f64,
    pub ds: f64,
    pub class: CocClass,
    pub efficiency: Option<f64>,
}

impl CocRecord {
    pub fn y(&self) -> f64 {
        f64::from(self.two_y) / 2.0
    }

    pub fn is_engine(&self) -> bool {
        self.x > 0
    }
}

/// Efficiency `W/Q1` of a cycle with the given `x` and `2y`.
///
/// `None` for `x < 0`, for `x = 0` unless heat is absorbed (`y > 0`, where
/// the efficiency is zero), and for opposed cycles whose denominator
/// `1 − 8|y|J/(xB1)` is not positive.
pub fn coc_efficiency(x: i32, two_y: i32, params: &CycleParams) -> Option<f64> {
    let eta0 = params.eta0();
    // 8yJ/(xB1) with y = two_y/2
    let ratio = |x: i32| 4.0 * f64::from(two_y) * params.j / (f64::from(x) * params.b1);
    match CocClass::of(x, two_y) {
        _ if x < 0 => None,
        CocClass::Null => None,
        CocClass::CouplingOnly => (two_y > 0).then_some(0.0),
        CocClass::FieldOnly => Some(eta0),
        CocClass::Aligned => Some(eta0 / (1.0 + ratio(x))),
        CocClass::Opposed => {
            let denom = 1.0 + ratio(x);
            (denom > 0.0).then(|| eta0 / denom)
        }
    }
}

fn record(spectrum: &Spectrum, initial_k: usize, final_k: usize, params: &CycleParams) -> CocRecord {
    let i = spectrum.level(initial_k);
    let f = spectrum.level(final_k);
    let x = f.two_m - i.two_m;
    let two_y = f.two_m2 as i32 - i.two_m2 as i32;
    let exchange = 4.0 * params.j * f64::from(two_y);
    let xf = f64::from(x);
    let q1 = xf * params.b1 + exchange;
    let q2 = xf * params.b2 + exchange;
    // Without coupling, y carries no energy and cannot distinguish classes.
    let class_y = if params.j == 0.0 { 0 } else { two_y };
    CocRecord {
        initial_k,
        final_k,
        x,
        two_y,
        q1,
        q2,
        w: q1 - q2,
        ds: xf * (params.b2 / params.t2 - params.b1 / params.t1)
            + exchange * (1.0 / params.t2 - 1.0 / params.t1),
        class: CocClass::of(x, class_y),
        efficiency: coc_efficiency(x, class_y, params),
    }
}

/// All `n(n−1)` ordered pairs, initial index outermost.
pub fn enumerate_cocs(spectrum: &Spectrum, params: &CycleParams) -> Vec<CocRecord> {
    let n = spectrum.len();
    let mut out = Vec::with_capacity(n * n.saturating_sub(1));
    for i in 1..=n {
        for f in (1..=n).filter(|&f| f != i) {
            out.push(record(spectrum, i, f, params));
        }
    }
    out
}

/// Largest engine efficiency over all cycles, with a witness.
///
/// Equal efficiencies are resolved by smaller `|y|`, then smaller `x`, then
/// enumeration order.
pub fn max_engine_coc_efficiency(spectrum: &Spectrum, params: &CycleParams) -> Result<(f64, CocRecord)> {
    let mut best: Option<(f64, CocRecord)> = None;
    for r in enumerate_cocs(spectrum, params) {
        let Some(eta) = r.efficiency.filter(|_| r.is_engine()) else {
            continue;
        };
        let better = match &best {
            None => true,
            Some((e, w)) => {
                eta > *e
                    || (eta == *e
                        && (r.two_y.abs(), r.x) < (w.two_y.abs(), w.x))
            }
        };
        if better {
            best = Some((eta, r));
        }
    }
    best.ok_or(Error::NoEngineCycle)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SecondLawAudit {
    /// True when `B2 > B1θ` and `0 < J < Jx`, so engine cycles must obey `ΔS >= 0`.
    pub asserted: bool,
    pub jx: f64,
    pub jc: f64,
    pub engine_records: usize,
    /// Engine cycles with `ΔS < 0`.
    pub engine_violations: Vec<CocRecord>,
    /// Every cycle with `ΔS < 0`, counted by class in [`CocClass::ALL`] order.
    pub negative_by_class: [usize; 5],
}

impl SecondLawAudit {
    pub fn passed(&self) -> bool {
        !self.asserted || self.engine_violations.is_empty()
    }

    pub fn negative_total(&self) -> usize {
        self.negative_by_class.iter().sum()
    }
}

pub fn second_law_audit(spectrum: &Spectrum, params: &CycleParams) -> SecondLawAudit {
    let bounds = coupling_bounds(spectrum.pair(), params);
    let records = enumerate_cocs(spectrum, params);
    let mut negative_by_class = [0; 5];
    let mut engine_violations = Vec::new();
    let mut engine_records = 0;
    for r in &records {
        let negative = r.ds < -ENTROPY_TOLERANCE;
        if negative {
            let slot = CocClass::ALL.iter().position(|c| *c == r.class).unwrap_or(0);
            negative_by_class[slot] += 1;
        }
        if r.is_engine() {
            engine_records += 1;
            if negative {
                engine_violations.push(*r);
            }
        }
    }
    SecondLawAudit {
        asserted: pwc_holds(params) && params.j > 0.0 && params.j < bounds.jx,
        jx: bounds.jx,
        jc: bounds.jc,
        engine_records,
        engine_violations,
        negative_by_class,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regime::{efficiency_bounds, j_a_bound};
    use crate::SpinPair;

    fn spectrum(a: u32, b: u32) -> Spectrum {
        Spectrum::build(SpinPair::new(a, b).unwrap())
    }

    fn params(j: f64) -> CycleParams {
        CycleParams::new(4.0, 3.0, 4.0, 2.0, j).unwrap()
    }

    fn find(records: &[CocRecord], i: usize, f: usize) -> CocRecord {
        *records.iter().find(|r| r.initial_k == i && r.final_k == f).unwrap()
    }

    #[test]
    fn counts_and_named_records() {
        let sp = spectrum(1, 2);
        let recs = enumerate_cocs(&sp, &params(0.2));
        assert_eq!(recs.len(), 30);
        let full = find(&recs, 1, 6);
        assert_eq!((full.x, full.two_y, full.class), (6, 0, CocClass::FieldOnly));
        assert_eq!(full.efficiency, Some(0.25));
        let r = find(&recs, 2, 5);
        assert_eq!((r.x, r.two_y, r.class), (2, -3, CocClass::Opposed));
    }

    #[test]
    fn efficiencies_by_class() {
        let p = params(0.2);
        assert_eq!(coc_efficiency(6, 0, &p), Some(0.25));
        let aligned = coc_efficiency(2, 3, &p).unwrap();
        assert!((aligned - 0.25 / 1.3).abs() < 1e-15);
        let opposed = coc_efficiency(2, -3, &p).unwrap();
        assert!((opposed - 0.25 / 0.7).abs() < 1e-15);
        assert_eq!(coc_efficiency(-2, 3, &p), None);
        assert_eq!(coc_efficiency(0, 3, &p), Some(0.0));
        assert_eq!(coc_efficiency(0, -3, &p), None);
        assert_eq!(coc_efficiency(0, 0, &p), None);
        // 1 − 8·(3/2)·J/(2·4) <= 0 once J >= 2/3.
        assert_eq!(coc_efficiency(2, -3, &params(0.7)), None);
    }

    #[test]
    fn efficiency_is_work_over_heat() {
        let sp = spectrum(2, 3);
        let p = params(0.11);
        for r in enumerate_cocs(&sp, &p) {
            if let (true, Some(eta)) = (r.is_engine(), r.efficiency) {
                assert!((eta - r.w / r.q1).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn antisymmetry() {
        let sp = spectrum(3, 4);
        let recs = enumerate_cocs(&sp, &params(0.1));
        for r in &recs {
            let back = find(&recs, r.final_k, r.initial_k);
            assert_eq!((back.x, back.two_y), (-r.x, -r.two_y));
            assert_eq!(back.q1, -r.q1);
            assert_eq!(back.w, -r.w);
            assert_eq!(back.ds, -r.ds);
        }
    }

    #[test]
    fn maximum_matches_closed_form() {
        let p = params(0.2);
        let sp = spectrum(1, 2);
        let (eta, witness) = max_engine_coc_efficiency(&sp, &p).unwrap();
        assert!((eta - 0.25 / 0.7).abs() < 1e-12);
        assert_eq!((witness.x, witness.two_y), (2, -3));
        let (eta, witness) = max_engine_coc_efficiency(&sp, &params(0.0)).unwrap();
        assert_eq!(eta, 0.25);
        assert_eq!(witness.class, CocClass::FieldOnly);

        let sp = spectrum(3, 4);
        let p = params(0.01);
        let (eta, witness) = max_engine_coc_efficiency(&sp, &p).unwrap();
        assert_eq!((witness.x, witness.two_y), (2, -15));
        let closed = efficiency_bounds(sp.pair(), &p).eta_max.unwrap();
        assert!((eta - closed).abs() < 1e-12);
    }

    #[test]
    fn audit_fig2_point() {
        let sp = spectrum(1, 2);
        let audit = second_law_audit(&sp, &params(0.3));
        assert!(audit.asserted);
        assert!(audit.passed());
        assert!((audit.jx - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(audit.engine_records, 13);
        // Refrigerating cycles reverse the sign of ΔS, so some are negative.
        assert!(audit.negative_total() > 0);
    }

    #[test]
    fn opposed_violation_between_jx_and_jc() {
        let sp = spectrum(2, 3);
        let b = coupling_bounds(sp.pair(), &params(0.0));
        assert!(b.jx < b.jc);
        let audit = second_law_audit(&sp, &params(0.5 * (b.jx + b.jc)));
        assert!(!audit.asserted);
        assert!(!audit.engine_violations.is_empty());
        assert!(audit.engine_violations.iter().all(|r| r.class == CocClass::Opposed));
    }

    #[test]
    fn uncoupled_classes() {
        let sp = spectrum(1, 2);
        let recs = enumerate_cocs(&sp, &params(0.0));
        assert!(recs.iter().all(|r| matches!(r.class, CocClass::FieldOnly | CocClass::Null)));
        assert_eq!(find(&recs, 2, 5).two_y, -3);
    }

    #[test]
    fn field_only_entropy() {
        let sp = spectrum(1, 2);
        let r = find(&enumerate_cocs(&sp, &params(0.0)), 1, 6);
        assert!((r.ds - 3.0).abs() < 1e-15);
    }

    #[test]
    fn ja_is_the_entropy_threshold() {
        let p0 = params(0.0);
        for (x, two_y) in [(2, -3), (4, -1), (6, -9)] {
            let ja = j_a_bound(x, two_y, &p0).unwrap();
            let at = |j: f64| {
                let p = params(j);
                let e = 4.0 * j * f64::from(two_y);
                f64::from(x) * (p.b2 / p.t2 - p.b1 / p.t1) + e * (1.0 / p.t2 - 1.0 / p.t1)
            };
            assert!(at(ja * 0.999) > 0.0);
            assert!(at(ja).abs() < 1e-12);
            assert!(at(ja * 1.001) < 0.0);
        }
    }
}
