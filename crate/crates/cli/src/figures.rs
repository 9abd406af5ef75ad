//! Built-in parameter presets for the reference plots (population gaps, tail sums, efficiency, work).

use std::fs::{self, File};
use std::io::{BufWriter, Write};

use rayon::prelude::*;
use spin_otto::cycle::stage_states;
use spin_otto::regime::coupling_bounds;
use spin_otto::{CycleParams, SpinPair, Spectrum};

use crate::commands::{j_grid, sweep_row, write_metadata, write_row, SWEEP_COLUMNS};
use crate::format::format_float as f;
use crate::{CliError, FiguresArgs, EXIT_OK};

pub const FIGURE_NAMES: [&str; 9] = [
    "fig2a", "fig2b", "fig3a", "fig3b", "fig5", "fig6a", "fig6b", "fig7a", "fig7b",
];

#[derive(Debug, Clone, Copy)]
enum Layout {
    /// `P_k − P'_k` for `k = 2..n`.
    Differences,
    /// `Σ_{j>=k} (P_j − P'_j)` for `k = n..2`.
    TailSums,
    /// Standard sweep columns.
    Sweep,
}

#[derive(Debug, Clone, Copy)]
enum JRange {
    /// From 0 to the pair's `Jc`.
    UpToJc,
    Fixed(f64),
}

struct Preset {
    name: &'static str,
    layout: Layout,
    pairs: &'static [(u32, u32)],
    temperatures: (f64, f64),
    j_range: JRange,
}

const B1: f64 = 4.0;
const B2: f64 = 3.0;

const PRESETS: [Preset; 9] = [
    Preset { name: "fig2a", layout: Layout::Differences, pairs: &[(1, 2)], temperatures: (4.0, 2.0), j_range: JRange::UpToJc },
    Preset { name: "fig2b", layout: Layout::Differences, pairs: &[(1, 2)], temperatures: (6.0, 3.0), j_range: JRange::UpToJc },
    Preset { name: "fig3a", layout: Layout::TailSums, pairs: &[(1, 2)], temperatures: (4.0, 2.0), j_range: JRange::UpToJc },
    Preset { name: "fig3b", layout: Layout::TailSums, pairs: &[(1, 2)], temperatures: (6.0, 3.0), j_range: JRange::UpToJc },
    Preset { name: "fig5", layout: Layout::Sweep, pairs: &[(1, 2), (1, 3), (1, 4)], temperatures: (1.0, 0.5), j_range: JRange::UpToJc },
    Preset { name: "fig6a", layout: Layout::Sweep, pairs: FIG6_PAIRS, temperatures: (1.0, 0.5), j_range: JRange::Fixed(1.0) },
    Preset { name: "fig6b", layout: Layout::Sweep, pairs: FIG6_PAIRS, temperatures: (6.0, 3.0), j_range: JRange::Fixed(1.0) },
    Preset { name: "fig7a", layout: Layout::Sweep, pairs: FIG7_PAIRS, temperatures: (4.0, 2.0), j_range: JRange::UpToJc },
    Preset { name: "fig7b", layout: Layout::Sweep, pairs: FIG7_PAIRS, temperatures: (4.0, 2.0), j_range: JRange::Fixed(0.2) },
];

/// Pairs ordered by increasing total spin.
const FIG6_PAIRS: &[(u32, u32)] = &[(1, 1), (1, 2), (2, 2), (2, 3), (3, 3), (3, 4)];
/// Pairs with `s = 7/2`.
const FIG7_PAIRS: &[(u32, u32)] = &[(1, 6), (2, 5), (3, 4)];

fn rows_for(preset: &Preset, points: usize) -> Result<(Vec<String>, Vec<Vec<String>>), CliError> {
    let (t1, t2) = preset.temperatures;
    let base = CycleParams::new(B1, B2, t1, t2, 0.0)?;
    let mut tasks = Vec::new();
    for &(a, b) in preset.pairs {
        let pair = SpinPair::new(a, b)?;
        let stop = match preset.j_range {
            JRange::UpToJc => coupling_bounds(pair, &base).jc,
            JRange::Fixed(v) => v,
        };
        for j in j_grid(0.0, stop, points) {
            tasks.push((pair, base.with_coupling(j)?));
        }
    }
    let n = Spectrum::build(SpinPair::new(preset.pairs[0].0, preset.pairs[0].1)?).len();
    let header: Vec<String> = match preset.layout {
        Layout::Sweep => SWEEP_COLUMNS.iter().map(|s| s.to_string()).collect(),
        Layout::Differences => std::iter::once("J".to_string())
            .chain((2..=n).map(|k| format!("dP{k}")))
            .collect(),
        Layout::TailSums => std::iter::once("J".to_string())
            .chain((2..=n).rev().map(|k| format!("tail{k}")))
            .collect(),
    };
    let layout = preset.layout;
    let rows = tasks
        .par_iter()
        .map(|(pair, p)| -> Result<Vec<String>, CliError> {
            let sp = Spectrum::build(*pair);
            if let Layout::Sweep = layout {
                return sweep_row(&sp, p, false);
            }
            let (hot, cold) = stage_states(&sp, p)?;
            let diff: Vec<f64> = (1..=sp.len()).map(|k| hot.p(k) - cold.p(k)).collect();
            let mut row = vec![f(p.j)];
            match layout {
                Layout::Differences => row.extend(diff[1..].iter().map(|d| f(*d))),
                _ => {
                    let mut tail = 0.0;
                    for d in diff[1..].iter().rev() {
                        tail += d;
                        row.push(f(tail));
                    }
                }
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((header, rows))
}

pub fn figures(a: &FiguresArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    if a.points < 2 {
        return Err(CliError::Usage("--points must be at least 2".into()));
    }
    for name in &a.only {
        if !FIGURE_NAMES.contains(&name.as_str()) {
            return Err(CliError::Usage(format!(
                "unknown figure '{name}'; expected one of {}",
                FIGURE_NAMES.join(", ")
            )));
        }
    }
    fs::create_dir_all(&a.out_dir)?;
    for preset in PRESETS.iter().filter(|p| a.only.is_empty() || a.only.iter().any(|o| o == p.name)) {
        let (header, rows) = rows_for(preset, a.points)?;
        let path = a.out_dir.join(format!("{}.csv", preset.name));
        let mut w = BufWriter::new(File::create(&path)?);
        let pairs = preset
            .pairs
            .iter()
            .map(|&(x, y)| SpinPair::new(x, y).map(|p| p.to_string()))
            .collect::<Result<Vec<_>, _>>()?
            .join(";");
        let j_range = match preset.j_range {
            JRange::UpToJc => "0..Jc".to_string(),
            JRange::Fixed(v) => format!("0..{}", f(v)),
        };
        write_metadata(
            &mut w,
            &format!("figures {}", preset.name),
            &[
                ("pairs", pairs),
                ("B1", f(B1)),
                ("B2", f(B2)),
                ("T1", f(preset.temperatures.0)),
                ("T2", f(preset.temperatures.1)),
                ("J", j_range),
                ("points", a.points.to_string()),
            ],
        )?;
        write_row(&mut w, &header)?;
        for r in &rows {
            write_row(&mut w, r)?;
        }
        w.flush()?;
        writeln!(out, "{}", path.display())?;
    }
    Ok(EXIT_OK)
}
