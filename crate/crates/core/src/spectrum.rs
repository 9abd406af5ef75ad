//! Exact spectrum of two exchange-coupled spins in a longitudinal field.
//!
//! Every eigenvalue is written as `E = m1·B − 8·m2·J`, where `m1 = 2m` is
//! twice the total magnetic number and `m2 = (s(s+1) − S(S+1))/2` depends
//! only on the total spin `S` of the multiplet. Half-integers are carried as
//! doubled integers so the combinatorial layer never rounds.

use std::cmp::Ordering;
use std::fmt;

use crate::{Error, Result};

/// Two spin magnitudes, stored as `2s1 <= 2s2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpinPair {
    two_s1: u32,
    two_s2: u32,
}

impl SpinPair {
    /// Builds a pair from doubled magnitudes; the smaller spin is stored first.
    pub fn new(two_s1: u32, two_s2: u32) -> Result<Self> {
        for two in [two_s1, two_s2] {
            if two == 0 {
                return Err(Error::InvalidSpin(two));
            }
        }
        let (two_s1, two_s2) = if two_s1 <= two_s2 {
            (two_s1, two_s2)
        } else {
            (two_s2, two_s1)
        };
        Ok(Self { two_s1, two_s2 })
    }

    pub fn two_s1(&self) -> u32 {
        self.two_s1
    }

    pub fn two_s2(&self) -> u32 {
        self.two_s2
    }

    /// `2s` with `s = s1 + s2`.
    pub fn two_s(&self) -> u32 {
        self.two_s1 + self.two_s2
    }

    pub fn s1(&self) -> f64 {
        f64::from(self.two_s1) / 2.0
    }

    pub fn s2(&self) -> f64 {
        f64::from(self.two_s2) / 2.0
    }

    pub fn s(&self) -> f64 {
        f64::from(self.two_s()) / 2.0
    }

    /// `n = (2s1+1)(2s2+1)`.
    pub fn level_count(&self) -> usize {
        ((self.two_s1 + 1) * (self.two_s2 + 1)) as usize
    }

    /// Doubled total spins `2S` of the multiplets, from `|2s1−2s2|` to `2s`.
    pub fn multiplets(&self) -> impl Iterator<Item = u32> {
        (self.two_s2 - self.two_s1..=self.two_s()).step_by(2)
    }

    /// `2·m2` of the multiplet with doubled total spin `two_total`.
    pub fn two_m2_of(&self, two_total: u32) -> u32 {
        let a = self.two_s();
        // (a(a+2) − b(b+2))/4 = (a−b)(a+b+2)/4; both factors are even.
        (a - two_total) * (a + two_total + 2) / 4
    }

    /// `2·m2` of the lowest multiplet `S = s2 − s1`, which equals `2·s1(2s2+1)`.
    pub fn two_m2_max(&self) -> u32 {
        self.two_s1 * (self.two_s2 + 1)
    }

    /// `s1(2s2+1)`, the largest `m2` in the spectrum.
    pub fn m2_max(&self) -> f64 {
        f64::from(self.two_m2_max()) / 2.0
    }

    /// True when one spin is integer and the other half-integer.
    pub fn is_mixed_parity(&self) -> bool {
        self.two_s() % 2 == 1
    }
}

impl fmt::Display for SpinPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {})",
            format_half(i64::from(self.two_s1)),
            format_half(i64::from(self.two_s2))
        )
    }
}

/// Renders a doubled integer as `"3/2"`, `"2"` or `"-1/2"`.
pub fn format_half(two: i64) -> String {
    if two % 2 == 0 {
        format!("{}", two / 2)
    } else {
        format!("{two}/2")
    }
}

/// One eigenstate `|S, m>` of the coupled pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnergyLevel {
    pub two_total_spin: u32,
    pub two_m: i32,
    pub two_m2: u32,
    /// 1-based canonical index.
    pub index: usize,
}

impl EnergyLevel {
    /// Coefficient of `B`, equal to `2m`.
    pub fn m1(&self) -> i32 {
        self.two_m
    }

    pub fn m2(&self) -> f64 {
        f64::from(self.two_m2) / 2.0
    }

    /// `m1·B − 8·m2·J` without argument checks.
    #[inline]
    pub fn energy(&self, field: f64, coupling: f64) -> f64 {
        f64::from(self.two_m) * field - 4.0 * f64::from(self.two_m2) * coupling
    }

    /// Number of exchange terms `s + (s−1) + …` summed into `m2`,
    /// i.e. `s − S`.
    pub fn exchange_terms(&self, pair: &SpinPair) -> u32 {
        (pair.two_s() - self.two_total_spin) / 2
    }
}

/// Energy of one level, `E = m1·B − 8·m2·J`.
pub fn energy_of_level(level: &EnergyLevel, field: f64, coupling: f64) -> Result<f64> {
    check_non_negative("B", field)?;
    check_non_negative("J", coupling)?;
    Ok(level.energy(field, coupling))
}

pub(crate) fn check_non_negative(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::NegativeParameter { name, value })
    }
}

/// All `n` levels of a pair in canonical order: ascending `m1`, and within
/// a band of equal `m1`, descending `m2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pair: SpinPair,
    levels: Vec<EnergyLevel>,
}

impl Spectrum {
    pub fn build(pair: SpinPair) -> Self {
        let mut levels: Vec<EnergyLevel> = pair
            .multiplets()
            .flat_map(|two_total| {
                let two_m2 = pair.two_m2_of(two_total);
                let top = two_total as i32;
                (-top..=top).step_by(2).map(move |two_m| EnergyLevel {
                    two_total_spin: two_total,
                    two_m,
                    two_m2,
                    index: 0,
                })
            })
            .collect();
        levels.sort_by(|a, b| a.two_m.cmp(&b.two_m).then(b.two_m2.cmp(&a.two_m2)));
        for (k, level) in levels.iter_mut().enumerate() {
            level.index = k + 1;
        }
        Self { pair, levels }
    }

    pub fn pair(&self) -> SpinPair {
        self.pair
    }

    pub fn levels(&self) -> &[EnergyLevel] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Level with 1-based canonical index `k`.
    pub fn level(&self, k: usize) -> &EnergyLevel {
        &self.levels[k - 1]
    }

    /// Energies in canonical order.
    pub fn energies(&self, field: f64, coupling: f64) -> Vec<f64> {
        self.levels.iter().map(|l| l.energy(field, coupling)).collect()
    }

    /// Canonical indices sorted by energy; ties keep canonical order.
    pub fn energy_order(&self, field: f64, coupling: f64) -> Vec<usize> {
        let energies = self.energies(field, coupling);
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| energies[a].total_cmp(&energies[b]).then(a.cmp(&b)));
        order.into_iter().map(|i| i + 1).collect()
    }

    /// True when the energy ordering of the levels is the same at both
    /// fields. Energies within `1e-12·max(1, |E|)` count as tied and are
    /// ordered by canonical index.
    pub fn check_no_level_crossing(&self, field_1: f64, field_2: f64, coupling: f64) -> bool {
        let e1 = self.energies(field_1, coupling);
        let e2 = self.energies(field_2, coupling);
        let n = self.len();
        (0..n).all(|a| (a + 1..n).all(|b| relation(&e1, a, b) == relation(&e2, a, b)))
    }
}

fn relation(energies: &[f64], a: usize, b: usize) -> Ordering {
    let (ea, eb) = (energies[a], energies[b]);
    let tol = 1e-12 * ea.abs().max(eb.abs()).max(1.0);
    if (ea - eb).abs() <= tol {
        a.cmp(&b)
    } else {
        ea.total_cmp(&eb)
    }
}

/// Degeneracies of the uncoupled (`J = 0`) levels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegeneracyProfile {
    /// `g` for `|m| = s, s−1, …` down to the smallest positive `|m|`.
    pub degeneracies: Vec<u32>,
    /// Multiplicity of the zero-energy level; present only when `2s` is even.
    pub zero_energy_multiplicity: Option<u32>,
}

impl DegeneracyProfile {
    /// `2·Σg + g₀`, which must equal `n`.
    pub fn total(&self) -> u32 {
        2 * self.degeneracies.iter().sum::<u32>() + self.zero_energy_multiplicity.unwrap_or(0)
    }
}

/// `g_{|s−l|} = min(l+1, 2s1+1)` for every positive `|m| = s − l`.
pub fn degeneracy_profile(pair: SpinPair) -> DegeneracyProfile {
    let cap = pair.two_s1() + 1;
    let half_levels = pair.two_s().div_ceil(2);
    let degeneracies = (0..half_levels).map(|l| (l + 1).min(cap)).collect();
    let zero_energy_multiplicity = (!pair.is_mixed_parity()).then_some(cap);
    DegeneracyProfile {
        degeneracies,
        zero_energy_multiplicity,
    }
}
