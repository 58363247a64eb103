//! Complex pure states on N-qudit tensor bases: inner products, density
//! matrices and partial traces. Everything downstream builds on this.
//!
//! Basis convention: site 1 is the most significant digit; within a site the
//! magnetic number m runs *descending* from +s (digit 0) to -s (digit d-1).
//! For two qubits the order is |11>, |10>, |01>, |00>.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Hard cap on the total Hilbert-space dimension. Everything this crate
/// verifies fits well below it.
pub const MAX_DIMENSION: usize = 4096;

/// Normalization tolerance for state construction.
pub const NORM_TOLERANCE: f64 = 1e-12;
/// Deviations below this are silently renormalized; larger ones are bugs.
pub const RENORM_LIMIT: f64 = 1e-8;

/// A half-integer stored as twice its value, so arithmetic stays exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInt {
    twice: i32,
}

impl HalfInt {
    pub const fn from_twice(twice: i32) -> Self {
        Self { twice }
    }

    /// Build from an integer value.
    pub const fn from_int(n: i32) -> Self {
        Self { twice: 2 * n }
    }

    pub const fn twice(self) -> i32 {
        self.twice
    }

    pub fn value(self) -> f64 {
        f64::from(self.twice) / 2.0
    }

    pub const fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }
}

impl std::fmt::Display for HalfInt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

/// Tensor basis of `n_sites` identical spins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisDescriptor {
    n_sites: usize,
    spin: HalfInt,
}

impl BasisDescriptor {
    /// A basis for `n_sites` spins of magnitude `spin` (s >= 1/2).
    pub fn new(n_sites: usize, spin: HalfInt) -> Result<Self> {
        if n_sites == 0 {
            return Err(Error::Domain("basis needs at least one site".into()));
        }
        if spin.twice() < 1 {
            return Err(Error::Domain(format!("spin must be >= 1/2, got {spin}")));
        }
        let d = spin.twice() as usize + 1;
        let mut dim: usize = 1;
        for _ in 0..n_sites {
            dim = dim
                .checked_mul(d)
                .filter(|&v| v <= MAX_DIMENSION)
                .ok_or_else(|| {
                    Error::Resource(format!(
                        "dimension {d}^{n_sites} exceeds cap {MAX_DIMENSION}"
                    ))
                })?;
        }
        if dim < 2 {
            return Err(Error::Domain("total dimension must be >= 2".into()));
        }
        Ok(Self { n_sites, spin })
    }

    /// Convenience constructor for N spin-1/2 sites.
    pub fn qubits(n_sites: usize) -> Result<Self> {
        Self::new(n_sites, HalfInt::from_twice(1))
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn spin(&self) -> HalfInt {
        self.spin
    }

    /// Local dimension d = 2s + 1.
    pub fn local_dim(&self) -> usize {
        self.spin.twice() as usize + 1
    }

    /// Total dimension D = d^N.
    pub fn dimension(&self) -> usize {
        self.local_dim().pow(self.n_sites as u32)
    }

    /// Magnetic numbers of one site, in digit order (m = +s first).
    pub fn site_levels(&self) -> Vec<HalfInt> {
        let ts = self.spin.twice();
        (0..self.local_dim())
            .map(|k| HalfInt::from_twice(ts - 2 * k as i32))
            .collect()
    }

    fn digit_of(&self, m: HalfInt) -> Result<usize> {
        let diff = self.spin.twice() - m.twice();
        if diff < 0 || diff % 2 != 0 || m.twice() < -self.spin.twice() {
            return Err(Error::Domain(format!(
                "magnetic number {m} out of range for spin {}",
                self.spin
            )));
        }
        Ok((diff / 2) as usize)
    }
}

/// Row-major flat index of a product basis state given per-site magnetic
/// numbers. Site 1 is the most significant digit and m = +s maps to digit 0.
pub fn flat_index(ms: &[HalfInt], basis: &BasisDescriptor) -> Result<usize> {
    if ms.len() != basis.n_sites() {
        return Err(Error::Domain(format!(
            "expected {} magnetic numbers, got {}",
            basis.n_sites(),
            ms.len()
        )));
    }
    let d = basis.local_dim();
    let mut idx = 0usize;
    for &m in ms {
        idx = idx * d + basis.digit_of(m)?;
    }
    Ok(idx)
}

/// Inverse of [`flat_index`]: per-site magnetic numbers of a flat index.
pub fn index_to_ms(index: usize, basis: &BasisDescriptor) -> Result<Vec<HalfInt>> {
    if index >= basis.dimension() {
        return Err(Error::Domain(format!(
            "index {index} out of range for dimension {}",
            basis.dimension()
        )));
    }
    let d = basis.local_dim();
    let ts = basis.spin().twice();
    let mut digits = vec![0usize; basis.n_sites()];
    let mut rest = index;
    for slot in digits.iter_mut().rev() {
        *slot = rest % d;
        rest /= d;
    }
    Ok(digits
        .into_iter()
        .map(|k| HalfInt::from_twice(ts - 2 * k as i32))
        .collect())
}

/// A normalized pure state over a tensor basis.
#[derive(Debug, Clone)]
pub struct PureState {
    basis: BasisDescriptor,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Build a state, renormalizing away float noise and rejecting vectors
    /// whose norm deviates from 1 by more than [`RENORM_LIMIT`].
    pub fn new(basis: BasisDescriptor, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != basis.dimension() {
            return Err(Error::Domain(format!(
                "amplitude vector length {} does not match dimension {}",
                amplitudes.len(),
                basis.dimension()
            )));
        }
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        let dev = (norm_sq - 1.0).abs();
        if dev <= NORM_TOLERANCE {
            return Ok(Self { basis, amplitudes });
        }
        if dev < RENORM_LIMIT {
            let inv = 1.0 / norm_sq.sqrt();
            let amplitudes = amplitudes.into_iter().map(|a| a * inv).collect();
            return Ok(Self { basis, amplitudes });
        }
        Err(Error::Numerics(format!(
            "state norm deviates from 1 by {dev:.3e}"
        )))
    }

    /// The basis product state with the given per-site magnetic numbers.
    pub fn basis_state(basis: BasisDescriptor, ms: &[HalfInt]) -> Result<Self> {
        let idx = flat_index(ms, &basis)?;
        let mut amplitudes = vec![Complex64::ZERO; basis.dimension()];
        amplitudes[idx] = Complex64::ONE;
        Ok(Self { basis, amplitudes })
    }

    pub fn basis(&self) -> &BasisDescriptor {
        &self.basis
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn dimension(&self) -> usize {
        self.amplitudes.len()
    }

    /// Multiply every amplitude by a unit phase factor.
    pub fn with_phase(&self, phase: Complex64) -> Self {
        Self {
            basis: self.basis,
            amplitudes: self.amplitudes.iter().map(|a| a * phase).collect(),
        }
    }

    /// L2 distance to another state vector (not a ray distance).
    pub fn vector_distance(&self, other: &Self) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// Conjugate-linear-in-first-argument inner product <a|b>.
pub fn overlap(a: &PureState, b: &PureState) -> Result<Complex64> {
    if a.basis() != b.basis() {
        return Err(Error::BasisMismatch(
            "overlap between states on different bases".into(),
        ));
    }
    Ok(a.amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// A density matrix with validated hermiticity, trace and spectrum.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    dim: usize,
    entries: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        let (r, c) = entries.shape();
        if r != c || r == 0 {
            return Err(Error::Domain("density matrix must be square".into()));
        }
        let mut herm_dev: f64 = 0.0;
        for i in 0..r {
            for j in i..r {
                herm_dev = herm_dev.max((entries[(i, j)] - entries[(j, i)].conj()).norm());
            }
        }
        if herm_dev > 1e-12 {
            return Err(Error::Numerics(format!(
                "density matrix not Hermitian (deviation {herm_dev:.3e})"
            )));
        }
        let trace = entries.trace();
        if (trace.re - 1.0).abs() > 1e-12 || trace.im.abs() > 1e-12 {
            return Err(Error::Numerics(format!(
                "density matrix trace {trace} differs from 1"
            )));
        }
        let eigs = entries.clone().symmetric_eigenvalues();
        if eigs.iter().any(|&l| l < -1e-10) {
            return Err(Error::Numerics(format!(
                "density matrix has negative eigenvalue {:.3e}",
                eigs.iter().cloned().fold(f64::INFINITY, f64::min)
            )));
        }
        Ok(Self { dim: r, entries })
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.entries.clone().symmetric_eigenvalues().iter().copied().collect()
    }
}

/// Reduced density matrix of one site of a pure state.
pub fn partial_trace(psi: &PureState, keep_site: usize) -> Result<DensityMatrix> {
    let basis = psi.basis();
    let n = basis.n_sites();
    if n < 2 {
        return Err(Error::Domain("partial trace needs at least two sites".into()));
    }
    if keep_site == 0 || keep_site > n {
        return Err(Error::Domain(format!(
            "site index {keep_site} out of range 1..={n}"
        )));
    }
    let d = basis.local_dim();
    // Strides of the kept site in the row-major flat index.
    let stride = d.pow((n - keep_site) as u32);
    let dim = basis.dimension();
    let mut rho = DMatrix::<Complex64>::zeros(d, d);
    let amps = psi.amplitudes();
    for idx in 0..dim {
        let a = (idx / stride) % d;
        let base = idx - a * stride;
        for b in 0..d {
            let jdx = base + b * stride;
            rho[(a, b)] += amps[idx] * amps[jdx].conj();
        }
    }
    DensityMatrix::new(rho)
}

/// Purity Tr rho^2 of a density matrix; lies in [1/d, 1].
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.entries().iter().map(|e| e.norm_sqr()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C;

    fn half(n: i32) -> HalfInt {
        HalfInt::from_twice(n)
    }

    #[test]
    fn two_qubit_index_order_matches_standard_basis() {
        // |11>, |10>, |01>, |00>
        let basis = BasisDescriptor::qubits(2).unwrap();
        let up = half(1);
        let dn = half(-1);
        assert_eq!(flat_index(&[up, up], &basis).unwrap(), 0);
        assert_eq!(flat_index(&[up, dn], &basis).unwrap(), 1);
        assert_eq!(flat_index(&[dn, up], &basis).unwrap(), 2);
        assert_eq!(flat_index(&[dn, dn], &basis).unwrap(), 3);
    }

    #[test]
    fn qutrit_middle_level() {
        let basis = BasisDescriptor::new(1, HalfInt::from_int(1)).unwrap();
        assert_eq!(flat_index(&[half(0)], &basis).unwrap(), 1);
    }

    #[test]
    fn flat_index_rejects_out_of_range() {
        let basis = BasisDescriptor::qubits(2).unwrap();
        assert!(flat_index(&[half(3), half(1)], &basis).is_err());
        assert!(flat_index(&[half(1)], &basis).is_err());
    }

    #[test]
    fn index_round_trip_exhaustive() {
        for (n, ts) in [(2usize, 1i32), (3, 1), (2, 3), (1, 5), (4, 1), (2, 2)] {
            let basis = BasisDescriptor::new(n, half(ts)).unwrap();
            for idx in 0..basis.dimension() {
                let ms = index_to_ms(idx, &basis).unwrap();
                assert_eq!(flat_index(&ms, &basis).unwrap(), idx);
            }
        }
    }

    #[test]
    fn dimension_cap_enforced() {
        assert!(BasisDescriptor::qubits(12).is_ok());
        assert!(BasisDescriptor::qubits(13).is_err());
    }

    #[test]
    fn norm_policy() {
        let basis = BasisDescriptor::qubits(1).unwrap();
        // Slight noise: renormalized.
        let s = PureState::new(
            basis,
            vec![C::new(1.0 + 3e-10, 0.0), C::ZERO],
        )
        .unwrap();
        let n: f64 = s.amplitudes().iter().map(|a| a.norm_sqr()).sum();
        assert!((n - 1.0).abs() < 1e-14);
        // Gross violation: rejected.
        assert!(PureState::new(basis, vec![C::new(2.0, 0.0), C::ZERO]).is_err());
    }

    #[test]
    fn overlap_examples() {
        let basis = BasisDescriptor::qubits(2).unwrap();
        let b11 = PureState::basis_state(basis, &[half(1), half(1)]).unwrap();
        let b00 = PureState::basis_state(basis, &[half(-1), half(-1)]).unwrap();
        assert_eq!(overlap(&b11, &b00).unwrap(), C::ZERO);
        assert!((overlap(&b11, &b11).unwrap() - C::ONE).norm() < 1e-15);
        // <1|+> = cos(eta/2) on one site.
        let one = BasisDescriptor::qubits(1).unwrap();
        let eta = 0.83_f64;
        let plus = PureState::new(
            one,
            vec![C::new((eta / 2.0).cos(), 0.0), C::new((eta / 2.0).sin(), 0.0)],
        )
        .unwrap();
        let up = PureState::basis_state(one, &[half(1)]).unwrap();
        assert!((overlap(&up, &plus).unwrap().re - (eta / 2.0).cos()).abs() < 1e-15);
    }

    #[test]
    fn overlap_conjugate_linearity() {
        let basis = BasisDescriptor::qubits(1).unwrap();
        let a = PureState::new(basis, vec![C::new(0.6, 0.0), C::new(0.0, 0.8)]).unwrap();
        let b = PureState::new(basis, vec![C::new(0.8, 0.0), C::new(0.6, 0.0)]).unwrap();
        let ab = overlap(&a, &b).unwrap();
        let ba = overlap(&b, &a).unwrap();
        assert!((ab - ba.conj()).norm() < 1e-15);
        assert!(ab.norm() <= 1.0 + 1e-12);
    }

    #[test]
    fn overlap_basis_mismatch() {
        let a = PureState::basis_state(BasisDescriptor::qubits(1).unwrap(), &[half(1)]).unwrap();
        let b = PureState::basis_state(BasisDescriptor::qubits(2).unwrap(), &[half(1), half(1)])
            .unwrap();
        assert!(overlap(&a, &b).is_err());
    }

    #[test]
    fn bell_state_partial_trace() {
        let basis = BasisDescriptor::qubits(2).unwrap();
        let r = 0.5_f64.sqrt();
        let bell = PureState::new(
            basis,
            vec![C::new(r, 0.0), C::ZERO, C::ZERO, C::new(r, 0.0)],
        )
        .unwrap();
        for site in [1, 2] {
            let rho = partial_trace(&bell, site).unwrap();
            assert!((rho.entries()[(0, 0)].re - 0.5).abs() < 1e-14);
            assert!((rho.entries()[(1, 1)].re - 0.5).abs() < 1e-14);
            assert!(rho.entries()[(0, 1)].norm() < 1e-14);
            assert!((purity(&rho) - 0.5).abs() < 1e-14);
        }
    }

    #[test]
    fn product_state_purity_is_one() {
        let basis = BasisDescriptor::qubits(2).unwrap();
        let r = 0.5_f64.sqrt();
        let plus2 = PureState::new(
            basis,
            vec![C::new(0.5, 0.0); 4].into_iter().collect(),
        )
        .unwrap();
        let rho = partial_trace(&plus2, 1).unwrap();
        assert!((purity(&rho) - 1.0).abs() < 1e-12);
        let _ = r;
    }

    #[test]
    fn partial_trace_site_bounds() {
        let basis = BasisDescriptor::qubits(2).unwrap();
        let b11 = PureState::basis_state(basis, &[half(1), half(1)]).unwrap();
        assert!(partial_trace(&b11, 0).is_err());
        assert!(partial_trace(&b11, 3).is_err());
    }

    #[test]
    fn maximally_mixed_qutrit_purity() {
        let rho = DensityMatrix::new(DMatrix::from_diagonal_element(
            3,
            3,
            C::new(1.0 / 3.0, 0.0),
        ))
        .unwrap();
        assert!((purity(&rho) - 1.0 / 3.0).abs() < 1e-15);
    }
}
