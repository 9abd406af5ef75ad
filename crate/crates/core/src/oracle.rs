//! Brute-force reference: the two-spin Hamiltonian as a dense matrix in the
//! product basis, diagonalized with cyclic Jacobi rotations.

use crate::ensemble::log_sum_exp;
use crate::spectrum::check_non_negative;
use crate::{Error, Result, SpinPair, Spectrum};

/// Sweep cap for the Jacobi iteration.
pub const MAX_SWEEPS: usize = 100;
/// Convergence threshold on the off-diagonal norm, relative to `‖H‖_F`.
pub const RELATIVE_OFF_NORM: f64 = 1e-12;

/// `2B(s1z + s2z) + 8J s1·s2` on the basis `|m_1⟩ ⊗ |m_2⟩`, index `i1·d2 + i2`
/// with `m_a = −s_a + i_a`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseHamiltonian {
    pair: SpinPair,
    field: f64,
    coupling: f64,
    dim: usize,
    matrix: Vec<f64>,
}

impl DenseHamiltonian {
    pub fn pair(&self) -> SpinPair {
        self.pair
    }

    pub fn field(&self) -> f64 {
        self.field
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    /// Row-major entries.
    pub fn matrix(&self) -> &[f64] {
        &self.matrix
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.matrix[row * self.dim + col]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.matrix.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Largest `|H_ij − H_ji|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in 0..i {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    /// Largest element of `[H, S^z_total]`. Since `S^z` is diagonal this is
    /// `max |H_ij (M_j − M_i)|`.
    pub fn total_sz_commutator(&self) -> f64 {
        let m = total_sz_diagonal(self.pair);
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in 0..self.dim {
                worst = worst.max((self.get(i, j) * (m[j] - m[i])).abs());
            }
        }
        worst
    }
}

/// `2m` values of one spin with doubled magnitude `two_s`, ascending.
fn doubled_projections(two_s: u32) -> impl Iterator<Item = i32> {
    let two_s = two_s as i32;
    (0..=two_s).map(move |i| -two_s + 2 * i)
}

/// `⟨m+1| s⁺ |m⟩ = sqrt(s(s+1) − m(m+1))` in doubled form.
fn raising_element(two_s: u32, two_m: i32) -> f64 {
    let ts = f64::from(two_s);
    let tm = f64::from(two_m);
    ((ts * (ts + 2.0) - tm * (tm + 2.0)) / 4.0).sqrt()
}

/// Diagonal of `s1z + s2z` on the product basis.
fn total_sz_diagonal(pair: SpinPair) -> Vec<f64> {
    let mut out = Vec::with_capacity(pair.level_count());
    for a in doubled_projections(pair.two_s1()) {
        for b in doubled_projections(pair.two_s2()) {
            out.push(f64::from(a + b) / 2.0);
        }
    }
    out
}

#[allow(clippy::needless_range_loop)]
pub fn build_hamiltonian(pair: SpinPair, field: f64, coupling: f64) -> Result<DenseHamiltonian> {
    check_non_negative("B", field)?;
    check_non_negative("J", coupling)?;
    let d1 = pair.two_s1() as usize + 1;
    let d2 = pair.two_s2() as usize + 1;
    let dim = d1 * d2;
    let mut matrix = vec![0.0; dim * dim];
    let m1: Vec<i32> = doubled_projections(pair.two_s1()).collect();
    let m2: Vec<i32> = doubled_projections(pair.two_s2()).collect();
    let idx = |i1: usize, i2: usize| i1 * d2 + i2;

    for i1 in 0..d1 {
        for i2 in 0..d2 {
            let row = idx(i1, i2);
            let (a, b) = (f64::from(m1[i1]) / 2.0, f64::from(m2[i2]) / 2.0);
            matrix[row * dim + row] = 2.0 * field * (a + b) + 8.0 * coupling * a * b;
            // ½(s1⁺ s2⁻): raises spin 1, lowers spin 2.
            if i1 + 1 < d1 && i2 > 0 {
                let col = idx(i1 + 1, i2 - 1);
                let v = 4.0
                    * coupling
                    * raising_element(pair.two_s1(), m1[i1])
                    * raising_element(pair.two_s2(), m2[i2 - 1]);
                matrix[col * dim + row] = v;
                matrix[row * dim + col] = v;
            }
        }
    }
    Ok(DenseHamiltonian {
        pair,
        field,
        coupling,
        dim,
        matrix,
    })
}

/// Eigenvalues in ascending order with matching unit eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    /// `vectors[k]` belongs to `values[k]`, expressed in the product basis.
    pub vectors: Vec<Vec<f64>>,
}

impl EigenDecomposition {
    /// Largest `‖Hv − λv‖` over all eigenpairs.
    pub fn residual(&self, h: &DenseHamiltonian) -> f64 {
        let n = h.dimension();
        self.values
            .iter()
            .zip(&self.vectors)
            .map(|(lambda, v)| {
                (0..n)
                    .map(|i| {
                        let hv: f64 = (0..n).map(|j| h.get(i, j) * v[j]).sum();
                        (hv - lambda * v[i]).powi(2)
                    })
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }
}

/// Groups basis states into connected blocks of the nonzero pattern.
#[allow(clippy::needless_range_loop)]
fn blocks(h: &DenseHamiltonian) -> Vec<Vec<usize>> {
    let n = h.dimension();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut block = vec![start];
        let mut cursor = 0;
        while cursor < block.len() {
            let i = block[cursor];
            cursor += 1;
            for j in 0..n {
                if !seen[j] && h.get(i, j) != 0.0 {
                    seen[j] = true;
                    block.push(j);
                }
            }
        }
        block.sort_unstable();
        out.push(block);
    }
    out
}

/// Cyclic Jacobi on a dense symmetric `n×n` row-major matrix.
/// Returns the diagonal and the rotation matrix (columns are eigenvectors).
fn jacobi(mut a: Vec<f64>, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let norm = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let off_norm = |a: &[f64]| {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j] * a[i * n + j];
                }
            }
        }
        s.sqrt()
    };
    let threshold = RELATIVE_OFF_NORM * norm;
    let mut sweeps = 0;
    while off_norm(&a) > threshold {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off_norm(&a),
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k * n + p], a[k * n + q]);
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p * n + k], a[q * n + k]);
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[k * n + p], v[k * n + q]);
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    Ok(((0..n).map(|i| a[i * n + i]).collect(), v))
}

pub fn eigen_decomposition(h: &DenseHamiltonian) -> Result<EigenDecomposition> {
    let n = h.dimension();
    let mut pairs: Vec<(f64, Vec<f64>)> = Vec::with_capacity(n);
    for block in blocks(h) {
        let m = block.len();
        let mut sub = vec![0.0; m * m];
        for (r, &i) in block.iter().enumerate() {
            for (c, &j) in block.iter().enumerate() {
                sub[r * m + c] = h.get(i, j);
            }
        }
        let (values, rot) = jacobi(sub, m)?;
        for (col, value) in values.into_iter().enumerate() {
            let mut vector = vec![0.0; n];
            for (r, &i) in block.iter().enumerate() {
                vector[i] = rot[r * m + col];
            }
            pairs.push((value, vector));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (values, vectors) = pairs.into_iter().unzip();
    Ok(EigenDecomposition { values, vectors })
}

/// Ascending eigenvalues.
pub fn eigen_spectrum(h: &DenseHamiltonian) -> Result<Vec<f64>> {
    Ok(eigen_decomposition(h)?.values)
}

/// The constant `8 s1 s2 J` carried by the full Hamiltonian.
pub fn constant_shift(pair: SpinPair, coupling: f64) -> f64 {
    2.0 * f64::from(pair.two_s1()) * f64::from(pair.two_s2()) * coupling
}

/// Oracle eigenvalues with the constant shift removed, ascending.
pub fn shifted_eigenvalues(pair: SpinPair, field: f64, coupling: f64) -> Result<Vec<f64>> {
    let h = build_hamiltonian(pair, field, coupling)?;
    let shift = constant_shift(pair, coupling);
    Ok(eigen_spectrum(&h)?.into_iter().map(|e| e - shift).collect())
}

/// Largest deviation between the sorted analytic and shift-corrected oracle spectra.
pub fn compare_with_analytic(pair: SpinPair, field: f64, coupling: f64) -> Result<f64> {
    let oracle = shifted_eigenvalues(pair, field, coupling)?;
    let mut analytic = Spectrum::build(pair).energies(field, coupling);
    analytic.sort_by(f64::total_cmp);
    Ok(analytic
        .iter()
        .zip(&oracle)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

/// `ln Z` from the shift-corrected oracle eigenvalues.
pub fn oracle_log_z(pair: SpinPair, field: f64, temperature: f64, coupling: f64) -> Result<f64> {
    if !(temperature.is_finite() && temperature > 0.0) {
        return Err(Error::InvalidTemperature(temperature));
    }
    let exps: Vec<f64> = shifted_eigenvalues(pair, field, coupling)?
        .into_iter()
        .map(|e| -e / temperature)
        .collect();
    Ok(log_sum_exp(&exps))
}

/// `Tr[(s1z + s2z) ρ]` for the Gibbs state `ρ = e^{−H/T}/Z`.
pub fn zeeman_expectation(pair: SpinPair, field: f64, temperature: f64, coupling: f64) -> Result<f64> {
    if !(temperature.is_finite() && temperature > 0.0) {
        return Err(Error::InvalidTemperature(temperature));
    }
    let h = build_hamiltonian(pair, field, coupling)?;
    let eig = eigen_decomposition(&h)?;
    let sz = total_sz_diagonal(pair);
    let exps: Vec<f64> = eig.values.iter().map(|e| -e / temperature).collect();
    let log_z = log_sum_exp(&exps);
    Ok(eig
        .vectors
        .iter()
        .zip(&exps)
        .map(|(v, x)| {
            let diag: f64 = v.iter().zip(&sz).map(|(c, m)| c * c * m).sum();
            (x - log_z).exp() * diag
        })
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::partition_function;

    fn pair(a: u32, b: u32) -> SpinPair {
        SpinPair::new(a, b).unwrap()
    }

    #[test]
    fn zeeman_only_is_diagonal() {
        let h = build_hamiltonian(pair(1, 1), 1.5, 0.0).unwrap();
        let diag: Vec<f64> = (0..4).map(|i| h.get(i, i)).collect();
        assert_eq!(diag, vec![-3.0, 0.0, 0.0, 3.0]);
        assert_eq!(h.frobenius_norm(), (18.0f64).sqrt());
    }

    #[test]
    fn singlet_triplet_split() {
        let h = build_hamiltonian(pair(1, 1), 0.0, 1.0).unwrap();
        let ev = eigen_spectrum(&h).unwrap();
        let expected = [-6.0, 2.0, 2.0, 2.0];
        for (a, b) in ev.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12, "{ev:?}");
        }
    }

    #[test]
    fn symmetric_and_commutes_with_total_sz() {
        for (a, b) in [(1, 1), (1, 2), (2, 3), (3, 5), (4, 5)] {
            let h = build_hamiltonian(pair(a, b), 2.3, 0.7).unwrap();
            assert!(h.asymmetry() < 1e-14);
            assert!(h.total_sz_commutator() < 1e-13);
        }
    }

    #[test]
    fn diagonal_input() {
        let (values, _) = jacobi(vec![3.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 2.0], 3).unwrap();
        assert_eq!(values, vec![3.0, -1.0, 2.0]);
    }

    #[test]
    fn dense_jacobi_on_full_matrix() {
        // Hilbert-like symmetric matrix with known trace and determinant.
        let n = 4;
        let a: Vec<f64> = (0..n * n)
            .map(|k| 1.0 / ((k / n + k % n + 1) as f64))
            .collect();
        let (values, v) = jacobi(a.clone(), n).unwrap();
        let trace: f64 = (0..n).map(|i| a[i * n + i]).sum();
        assert!((values.iter().sum::<f64>() - trace).abs() < 1e-13);
        for (col, lambda) in values.iter().enumerate() {
            for i in 0..n {
                let av: f64 = (0..n).map(|j| a[i * n + j] * v[j * n + col]).sum();
                assert!((av - lambda * v[i * n + col]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn matches_analytic_small_pairs() {
        let sp = pair(1, 1);
        let ev = shifted_eigenvalues(sp, 1.0, 0.1).unwrap();
        let mut analytic = Spectrum::build(sp).energies(1.0, 0.1);
        analytic.sort_by(f64::total_cmp);
        for (a, b) in analytic.iter().zip(&ev) {
            assert!((a - b).abs() < 1e-12);
        }
        // Hand forms for (1/2, 1) at B=4, J=0.2: ±12 − ..., listed with shift.
        let h = build_hamiltonian(pair(1, 2), 4.0, 0.2).unwrap();
        let ev = eigen_spectrum(&h).unwrap();
        let shift = 8.0 * 0.5 * 1.0 * 0.2;
        let mut hand = vec![-12.0, -4.0 - 12.0 * 0.2, -4.0, 4.0 - 12.0 * 0.2, 4.0, 12.0];
        hand.sort_by(f64::total_cmp);
        for (a, b) in ev.iter().zip(&hand) {
            assert!((a - shift - b).abs() < 1e-12, "{ev:?} vs {hand:?}");
        }
    }

    #[test]
    fn zero_coupling_is_exact() {
        for (a, b) in [(1, 4), (3, 3), (2, 7)] {
            assert!(compare_with_analytic(pair(a, b), 1.7, 0.0).unwrap() < 1e-12);
        }
    }

    #[test]
    fn zero_field_degeneracies() {
        let sp = pair(2, 3);
        let ev = shifted_eigenvalues(sp, 0.0, 0.5).unwrap();
        // Antiferromagnetic exchange puts S = 1/2 lowest, then 3/2, 5/2.
        let mut counts = Vec::new();
        let mut i = 0;
        while i < ev.len() {
            let j = ev[i..].iter().take_while(|e| (*e - ev[i]).abs() < 1e-9).count();
            counts.push(j);
            i += j;
        }
        assert_eq!(counts, vec![2, 4, 6]);
    }

    #[test]
    fn residual_and_trace() {
        let h = build_hamiltonian(pair(3, 4), 1.3, 0.4).unwrap();
        let eig = eigen_decomposition(&h).unwrap();
        assert!(eig.residual(&h) < 1e-9);
        let n = h.dimension() as f64;
        assert!((eig.values.iter().sum::<f64>() - h.trace()).abs() < 1e-9 * n * h.frobenius_norm());
    }

    #[test]
    fn partition_functions_agree() {
        for (a, b) in [(1, 2), (3, 4), (5, 8)] {
            let sp = pair(a, b);
            let oracle = oracle_log_z(sp, 2.0, 1.1, 0.3).unwrap();
            let analytic = partition_function(&Spectrum::build(sp), 2.0, 1.1, 0.3).unwrap();
            assert!(((oracle - analytic).exp() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn zeeman_expectation_limits() {
        let sp = pair(1, 2);
        // Infinite temperature: zero polarization.
        assert!(zeeman_expectation(sp, 1.0, 1e12, 0.2).unwrap().abs() < 1e-9);
        // Cold and strong field: fully polarized down.
        assert!((zeeman_expectation(sp, 10.0, 0.05, 0.1).unwrap() + 1.5).abs() < 1e-12);
        assert!(zeeman_expectation(sp, 1.0, 0.0, 0.2).is_err());
    }
}
