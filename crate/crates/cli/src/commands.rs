use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use rayon::prelude::*;
use spin_otto::coc::{enumerate_cocs, max_engine_coc_efficiency, second_law_audit, CocClass};
use spin_otto::cycle::{cycle_report, stage_states};
use spin_otto::lemmas::SuiteConfig;
use spin_otto::regime::{coupling_bounds, efficiency_bounds, regime_verdict};
use spin_otto::spectrum::{energy_of_level, format_half};
use spin_otto::verify::{run_verification, OracleConfig};
use spin_otto::{CycleParams, SpinPair, Spectrum};

use crate::format::{format_float as f, format_opt};
use crate::{
    CliError, CycleArgs, SpectrumArgs, SweepArgs, VerifyArgs, EXIT_DOMAIN_WARNING, EXIT_OK,
    EXIT_VERIFY_FAILED,
};

pub const SWEEP_COLUMNS: [&str; 20] = [
    "s1", "s2", "B1", "B2", "T1", "T2", "J", "X", "Y", "Q1", "Q2", "W", "eta", "eta0", "etaUb",
    "etaCarnot", "dS", "regime", "wcs", "majorizes",
];

/// Runs `body` against the file at `path`, or against `out` when no path is given.
pub(crate) fn with_sink<F>(path: &Option<PathBuf>, out: &mut dyn Write, body: F) -> Result<i32, CliError>
where
    F: FnOnce(&mut dyn Write) -> Result<i32, CliError>,
{
    match path {
        Some(p) => {
            let mut file = BufWriter::new(File::create(p)?);
            let code = body(&mut file)?;
            file.flush()?;
            Ok(code)
        }
        None => body(out),
    }
}

pub(crate) fn write_metadata(w: &mut dyn Write, command: &str, params: &[(&str, String)]) -> std::io::Result<()> {
    writeln!(w, "# spin-otto {}", env!("CARGO_PKG_VERSION"))?;
    writeln!(w, "# command={command}")?;
    for (k, v) in params {
        writeln!(w, "# {k}={v}")?;
    }
    Ok(())
}

pub(crate) fn write_row<S: AsRef<str>>(w: &mut dyn Write, cells: &[S]) -> std::io::Result<()> {
    let line: Vec<&str> = cells.iter().map(AsRef::as_ref).collect();
    writeln!(w, "{}", line.join(","))
}

fn pair_of(s1: u32, s2: u32) -> Result<SpinPair, CliError> {
    Ok(SpinPair::new(s1, s2)?)
}

fn pair_params(pair: SpinPair) -> [(&'static str, String); 2] {
    [
        ("s1", format_half(pair.two_s1().into())),
        ("s2", format_half(pair.two_s2().into())),
    ]
}

fn cycle_params_echo(p: &CycleParams) -> [(&'static str, String); 5] {
    [
        ("B1", f(p.b1)),
        ("B2", f(p.b2)),
        ("T1", f(p.t1)),
        ("T2", f(p.t2)),
        ("J", f(p.j)),
    ]
}

pub fn spectrum(a: &SpectrumArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let pair = pair_of(a.s1, a.s2)?;
    let sp = Spectrum::build(pair);
    let crossing_field = a
        .check_crossing
        .as_deref()
        .map(|text| {
            let value = text.strip_prefix("B2=").unwrap_or(text);
            value
                .trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("--check-crossing expects B2=<number>, got '{text}'")))
        })
        .transpose()?;

    let order: Vec<usize> = if a.sorted {
        sp.energy_order(a.b, a.j)
    } else {
        (1..=sp.len()).collect()
    };
    let mut rows = Vec::with_capacity(order.len());
    for k in order {
        let level = sp.level(k);
        let e = energy_of_level(level, a.b, a.j)?;
        rows.push([
            k.to_string(),
            level.two_total_spin.to_string(),
            level.two_m.to_string(),
            level.m1().to_string(),
            level.two_m2.to_string(),
            f(e),
        ]);
    }
    let crossing = match crossing_field {
        Some(b2) => {
            if !(b2.is_finite() && b2 >= 0.0) {
                return Err(CliError::Usage(format!("B2 must be finite and non-negative, got {b2}")));
            }
            Some((b2, !sp.check_no_level_crossing(a.b, b2, a.j)))
        }
        None => None,
    };

    let code = with_sink(&a.out, out, |w| {
        let [s1, s2] = pair_params(pair);
        let mut meta = vec![s1, s2, ("B", f(a.b)), ("J", f(a.j)), ("sorted", a.sorted.to_string())];
        if let Some((b2, _)) = crossing {
            meta.push(("B2", f(b2)));
        }
        write_metadata(w, "spectrum", &meta)?;
        write_row(w, &["k", "twoS", "twoM", "m1", "twoM2", "E"])?;
        for r in &rows {
            write_row(w, r)?;
        }
        Ok(match crossing {
            Some((_, true)) => {
                writeln!(w, "# crossing=CROSSING")?;
                EXIT_DOMAIN_WARNING
            }
            Some((_, false)) => {
                writeln!(w, "# crossing=none")?;
                EXIT_OK
            }
            None => EXIT_OK,
        })
    })?;
    if code == EXIT_DOMAIN_WARNING {
        writeln!(err, "warning: CROSSING: level order changes between the two fields")?;
    }
    Ok(code)
}

fn bool_cell(b: bool) -> String {
    b.to_string()
}

/// One row in [`SWEEP_COLUMNS`] order, optionally followed by `P_k − P'_k`.
pub(crate) fn sweep_row(sp: &Spectrum, p: &CycleParams, populations: bool) -> Result<Vec<String>, CliError> {
    let pair = sp.pair();
    let r = cycle_report(sp, p)?;
    let v = regime_verdict(sp, p)?;
    let mut row = vec![
        format_half(pair.two_s1().into()),
        format_half(pair.two_s2().into()),
        f(p.b1),
        f(p.b2),
        f(p.t1),
        f(p.t2),
        f(p.j),
        f(r.x),
        f(r.y),
        f(r.q1),
        f(r.q2),
        f(r.w),
        format_opt(r.eta),
        f(r.baseline.eta0),
        format_opt(v.eta_ub),
        f(v.eta_carnot),
        f(r.ds),
        r.regime.to_string(),
        bool_cell(v.wcs),
        bool_cell(v.majorizes),
    ];
    if populations {
        let (hot, cold) = stage_states(sp, p)?;
        for k in 2..=sp.len() {
            row.push(f(hot.p(k) - cold.p(k)));
        }
    }
    Ok(row)
}

pub fn cycle(a: &CycleArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let pair = pair_of(a.s1, a.s2)?;
    let p = CycleParams::new(a.b1, a.b2, a.t1, a.t2, a.j)?;
    let sp = Spectrum::build(pair);
    let row = sweep_row(&sp, &p, false)?;
    let v = regime_verdict(&sp, &p)?;
    with_sink(&a.out, out, |w| {
        let mut meta: Vec<(&str, String)> = pair_params(pair).into();
        meta.extend(cycle_params_echo(&p));
        write_metadata(w, "cycle", &meta)?;
        write_row(w, &SWEEP_COLUMNS)?;
        write_row(w, &row)?;
        for (k, val) in [
            ("Jc", f(v.jc)),
            ("Jx", f(v.jx)),
            ("pwc", bool_cell(v.pwc)),
            ("bcs", bool_cell(v.bcs)),
            ("etaMax", format_opt(v.eta_max)),
            ("L", f(v.l)),
            ("LX", f(v.l_x)),
            ("secondLaw", bool_cell(v.second_law_ok)),
        ] {
            writeln!(w, "# {k}={val}")?;
        }
        Ok(EXIT_OK)
    })
}

/// `steps` evenly spaced values from `start` to `stop`, both included.
pub(crate) fn j_grid(start: f64, stop: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..steps)
            .map(|i| {
                if i + 1 == steps {
                    stop
                } else {
                    start + (stop - start) * i as f64 / (steps - 1) as f64
                }
            })
            .collect(),
    }
}

fn resolve_stop(text: &str, pair: SpinPair, base: &CycleParams) -> Result<f64, CliError> {
    let bounds = coupling_bounds(pair, base);
    let (name, value) = match text.trim() {
        "jc" | "Jc" => ("Jc", bounds.jc),
        "jx" | "Jx" => ("Jx", bounds.jx),
        other => {
            return other
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("--j-stop expects a number, jc or jx, got '{other}'")))
        }
    };
    if value <= 0.0 {
        return Err(CliError::Usage(format!(
            "{name} = {} is not positive at B1={}, B2={}, T1={}, T2={} (no positive-work regime)",
            f(value),
            f(base.b1),
            f(base.b2),
            f(base.t1),
            f(base.t2)
        )));
    }
    Ok(value)
}

pub fn sweep(a: &SweepArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    if a.j_steps == 0 {
        return Err(CliError::Usage("the J grid is empty (--j-steps 0)".into()));
    }
    let levels = a.pair[0].level_count();
    if a.populations && a.pair.iter().any(|p| p.level_count() != levels) {
        return Err(CliError::Usage("--populations needs pairs with the same number of levels".into()));
    }

    let mut tasks: Vec<(Spectrum, CycleParams)> = Vec::new();
    for &pair in &a.pair {
        for &b1 in &a.b1 {
            for &b2 in &a.b2 {
                for &t1 in &a.t1 {
                    for &t2 in &a.t2 {
                        let base = CycleParams::new(b1, b2, t1, t2, 0.0)?;
                        let stop = resolve_stop(&a.j_stop, pair, &base)?;
                        for j in j_grid(a.j_start, stop, a.j_steps) {
                            tasks.push((Spectrum::build(pair), base.with_coupling(j)?));
                        }
                    }
                }
            }
        }
    }
    let rows: Vec<Vec<String>> = tasks
        .par_iter()
        .map(|(sp, p)| sweep_row(sp, p, a.populations))
        .collect::<Result<_, _>>()?;

    with_sink(&a.out, out, |w| {
        let list = |v: &[f64]| v.iter().map(|x| f(*x)).collect::<Vec<_>>().join(";");
        let pairs = a.pair.iter().map(ToString::to_string).collect::<Vec<_>>().join(";");
        write_metadata(
            w,
            "sweep",
            &[
                ("pairs", pairs),
                ("B1", list(&a.b1)),
                ("B2", list(&a.b2)),
                ("T1", list(&a.t1)),
                ("T2", list(&a.t2)),
                ("j_start", f(a.j_start)),
                ("j_stop", a.j_stop.clone()),
                ("j_steps", a.j_steps.to_string()),
            ],
        )?;
        let mut header: Vec<String> = SWEEP_COLUMNS.iter().map(|s| s.to_string()).collect();
        if a.populations {
            header.extend((2..=levels).map(|k| format!("dP{k}")));
        }
        write_row(w, &header)?;
        for r in &rows {
            write_row(w, r)?;
        }
        Ok(EXIT_OK)
    })
}

pub fn coc(a: &CycleArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let pair = pair_of(a.s1, a.s2)?;
    let p = CycleParams::new(a.b1, a.b2, a.t1, a.t2, a.j)?;
    let sp = Spectrum::build(pair);
    let records = enumerate_cocs(&sp, &p);
    let audit = second_law_audit(&sp, &p);
    let (eta_max_observed, witness) = max_engine_coc_efficiency(&sp, &p)?;
    let closed = efficiency_bounds(pair, &p).eta_max;

    with_sink(&a.out, out, |w| {
        let mut meta: Vec<(&str, String)> = pair_params(pair).into();
        meta.extend(cycle_params_echo(&p));
        write_metadata(w, "coc", &meta)?;
        write_row(w, &["initialK", "finalK", "x", "y", "Q1", "Q2", "W", "dS", "class", "eta"])?;
        for r in &records {
            write_row(
                w,
                &[
                    r.initial_k.to_string(),
                    r.final_k.to_string(),
                    r.x.to_string(),
                    format_half(r.two_y.into()),
                    f(r.q1),
                    f(r.q2),
                    f(r.w),
                    f(r.ds),
                    r.class.to_string(),
                    format_opt(r.efficiency),
                ],
            )?;
        }
        let mut summary: Vec<(String, String)> = [
            ("Jx", f(audit.jx)),
            ("Jc", f(audit.jc)),
            ("etaMaxObserved", f(eta_max_observed)),
            ("etaMax", format_opt(closed)),
            ("witness", format!("{}->{}", witness.initial_k, witness.final_k)),
            ("witnessX", witness.x.to_string()),
            ("witnessY", format_half(witness.two_y.into())),
            ("engineRecords", audit.engine_records.to_string()),
            ("secondLawAsserted", audit.asserted.to_string()),
            ("violations", audit.engine_violations.len().to_string()),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
        for (class, n) in CocClass::ALL.iter().zip(audit.negative_by_class) {
            summary.push((format!("negative_{class}"), n.to_string()));
        }
        for (k, v) in summary {
            writeln!(w, "# {k}={v}")?;
        }
        Ok(EXIT_OK)
    })
}

pub fn verify(a: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    if a.points == 0 || a.oracle_points == 0 {
        return Err(CliError::Usage("verification needs at least one point".into()));
    }
    if !(a.mutate_jc_scale.is_finite() && a.mutate_jc_scale > 0.0) {
        return Err(CliError::Usage("--mutate-jc-scale must be positive".into()));
    }
    let oracle = OracleConfig {
        seed: a.seed,
        points_per_pair: a.oracle_points,
        max_levels: a.max_levels,
    };
    let suite = SuiteConfig {
        seed: a.seed,
        points: a.points,
        jc_scale: a.mutate_jc_scale,
        ..SuiteConfig::default()
    };
    let report = run_verification(&oracle, &suite)?;
    let passed = report.passed();

    let code = with_sink(&a.out, out, |w| {
        let mut meta = vec![
            ("seed", a.seed.to_string()),
            ("points", a.points.to_string()),
            ("oracle_points", a.oracle_points.to_string()),
            ("max_levels", a.max_levels.to_string()),
        ];
        if a.mutate_jc_scale != 1.0 {
            meta.push(("mutate_jc_scale", f(a.mutate_jc_scale)));
        }
        write_metadata(w, "verify", &meta)?;
        write_row(w, &["check", "checked", "failed"])?;
        let o = &report.oracle;
        write_row(w, &["oracle".to_string(), o.points.to_string(), o.failures.to_string()])?;
        for assertion in spin_otto::lemmas::Assertion::ALL {
            let t = report.lemmas.tally(assertion);
            write_row(w, &[assertion.label().to_string(), t.checked.to_string(), t.failed.to_string()])?;
        }
        let bc = report.lemmas.beyond_critical;
        for (k, v) in [
            ("oracle_pairs", o.pairs.to_string()),
            ("max_spectrum_deviation", f(o.max_spectrum_deviation)),
            ("max_partition_deviation", f(o.max_partition_deviation)),
            ("max_residual", f(o.max_residual)),
            ("max_trace_work_deviation", f(o.max_trace_work_deviation)),
            ("beyond_critical_points", bc.points.to_string()),
            ("beyond_critical_engines", bc.engines.to_string()),
        ] {
            writeln!(w, "# {k}={v}")?;
        }
        for c in &report.lemmas.counterexamples {
            writeln!(
                w,
                "# counterexample assertion={} index={} pair={} B1={} B2={} T1={} T2={} J={} detail={}",
                c.assertion,
                c.index,
                c.pair,
                f(c.params.b1),
                f(c.params.b2),
                f(c.params.t1),
                f(c.params.t2),
                f(c.params.j),
                c.detail
            )?;
        }
        writeln!(w, "# status={}", if passed { "PASS" } else { "FAIL" })?;
        Ok(if passed { EXIT_OK } else { EXIT_VERIFY_FAILED })
    })?;
    if !passed {
        writeln!(
            err,
            "verification failed: {} lemma counterexamples, {} oracle failures",
            report.lemmas.total_failures(),
            report.oracle.failures
        )?;
    }
    Ok(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert!(j_grid(0.0, 1.0, 0).is_empty());
        assert_eq!(j_grid(0.2, 1.0, 1), vec![0.2]);
        assert_eq!(j_grid(0.0, 1.0 / 3.0, 4), vec![0.0, 1.0 / 9.0, 2.0 / 9.0, 1.0 / 3.0]);
    }

    #[test]
    fn stop_keywords() {
        let pair = SpinPair::new(1, 2).unwrap();
        let base = CycleParams::new(4.0, 3.0, 4.0, 2.0, 0.0).unwrap();
        assert!((resolve_stop("jc", pair, &base).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(resolve_stop("0.25", pair, &base).unwrap(), 0.25);
        assert!(resolve_stop("half", pair, &base).is_err());
        let off = CycleParams::new(4.0, 1.0, 4.0, 2.0, 0.0).unwrap();
        assert!(resolve_stop("jc", pair, &off).is_err());
    }
}
