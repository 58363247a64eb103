//! The three Hamiltonian families and their exact spectral data, plus SU(2)
//! coherent initial states.
//!
//! Units: hbar = 1 throughout; couplings are energies.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::statespace::{index_to_ms, BasisDescriptor, HalfInt, PureState};

/// Which Hamiltonian family a model belongs to, with its couplings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelVariant {
    /// H = J (sx sx + sy sy) + nu J sz sz + mu Bz (sz 1 + 1 sz) on two qubits.
    /// `b` is the field term mu*Bz.
    Xxz { j: f64, nu: f64, b: f64 },
    /// H = J (sum_k S_k^z)^2 on N qubits.
    CollectiveIsing { j: f64 },
    /// H = 2J sum_{k<l} S_k^z S_l^z on N spin-s sites.
    PairwiseIsingSpinS { j: f64 },
}

/// A Hamiltonian family bound to a concrete tensor basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelSpec {
    variant: ModelVariant,
    basis: BasisDescriptor,
}

impl ModelSpec {
    pub fn xxz(j: f64, nu: f64, b: f64) -> Result<Self> {
        check_coupling(j)?;
        Ok(Self {
            variant: ModelVariant::Xxz { j, nu, b },
            basis: BasisDescriptor::qubits(2)?,
        })
    }

    pub fn collective_ising(j: f64, n_sites: usize) -> Result<Self> {
        check_coupling(j)?;
        Ok(Self {
            variant: ModelVariant::CollectiveIsing { j },
            basis: BasisDescriptor::qubits(n_sites)?,
        })
    }

    pub fn pairwise_ising(j: f64, n_sites: usize, spin: HalfInt) -> Result<Self> {
        check_coupling(j)?;
        Ok(Self {
            variant: ModelVariant::PairwiseIsingSpinS { j },
            basis: BasisDescriptor::new(n_sites, spin)?,
        })
    }

    pub fn variant(&self) -> ModelVariant {
        self.variant
    }

    pub fn basis(&self) -> &BasisDescriptor {
        &self.basis
    }

    pub fn coupling(&self) -> f64 {
        match self.variant {
            ModelVariant::Xxz { j, .. }
            | ModelVariant::CollectiveIsing { j }
            | ModelVariant::PairwiseIsingSpinS { j } => j,
        }
    }

    /// Dense Hamiltonian matrix in the tensor basis.
    pub fn hamiltonian_dense(&self) -> DMatrix<Complex64> {
        let dim = self.basis.dimension();
        match self.variant {
            ModelVariant::Xxz { j, nu, b } => xxz_matrix(j, nu, b),
            ModelVariant::CollectiveIsing { .. } | ModelVariant::PairwiseIsingSpinS { .. } => {
                let mut h = DMatrix::<Complex64>::zeros(dim, dim);
                for idx in 0..dim {
                    let ms = index_to_ms(idx, &self.basis).expect("index in range");
                    let e = self.diagonal_energy(&ms).expect("diagonal variant");
                    h[(idx, idx)] = Complex64::new(e, 0.0);
                }
                h
            }
        }
    }

    /// Energy of a tensor-basis state for the diagonal (Ising) variants.
    pub fn diagonal_energy(&self, ms: &[HalfInt]) -> Result<f64> {
        if ms.len() != self.basis.n_sites() {
            return Err(Error::Domain(format!(
                "expected {} magnetic numbers, got {}",
                self.basis.n_sites(),
                ms.len()
            )));
        }
        let total: f64 = ms.iter().map(|m| m.value()).sum();
        match self.variant {
            ModelVariant::CollectiveIsing { j } => Ok(j * total * total),
            ModelVariant::PairwiseIsingSpinS { j } => {
                let sq_sum: f64 = ms.iter().map(|m| m.value() * m.value()).sum();
                Ok(j * (total * total - sq_sum))
            }
            ModelVariant::Xxz { .. } => Err(Error::Domain(
                "XXZ is not diagonal in the tensor basis".into(),
            )),
        }
    }

    /// Diagonal energies for every flat index (Ising variants only).
    pub fn diagonal_energies(&self) -> Result<Vec<f64>> {
        (0..self.basis.dimension())
            .map(|idx| self.diagonal_energy(&index_to_ms(idx, &self.basis)?))
            .collect()
    }

    /// Energy expectation <psi|H|psi>.
    pub fn energy_expectation(&self, psi: &PureState) -> Result<f64> {
        self.moments(psi).map(|(e, _)| e)
    }

    /// First two moments (<H>, <H^2>).
    pub fn moments(&self, psi: &PureState) -> Result<(f64, f64)> {
        if psi.basis() != &self.basis {
            return Err(Error::BasisMismatch(
                "state basis does not match model".into(),
            ));
        }
        match self.variant {
            ModelVariant::Xxz { .. } => {
                let spectral = self.spectral_data()?;
                let coeffs = spectral.to_eigenbasis(psi.amplitudes());
                let mut e1 = 0.0;
                let mut e2 = 0.0;
                for (c, &en) in coeffs.iter().zip(&spectral.energies) {
                    let p = c.norm_sqr();
                    e1 += p * en;
                    e2 += p * en * en;
                }
                Ok((e1, e2))
            }
            _ => {
                let energies = self.diagonal_energies()?;
                let mut e1 = 0.0;
                let mut e2 = 0.0;
                for (a, &en) in psi.amplitudes().iter().zip(&energies) {
                    let p = a.norm_sqr();
                    e1 += p * en;
                    e2 += p * en * en;
                }
                Ok((e1, e2))
            }
        }
    }

    /// Exact eigensystem. For XXZ this is the hard-coded closed form,
    /// residual-checked against the assembled matrix.
    pub fn spectral_data(&self) -> Result<SpectralData> {
        match self.variant {
            ModelVariant::Xxz { j, nu, b } => build_xxz(j, nu, b).map(|(_, s)| s),
            _ => {
                let energies = self.diagonal_energies()?;
                let dim = self.basis.dimension();
                Ok(SpectralData {
                    energies,
                    eigenvectors: DMatrix::identity(dim, dim),
                })
            }
        }
    }
}

fn check_coupling(j: f64) -> Result<()> {
    if j == 0.0 || !j.is_finite() {
        return Err(Error::Domain("coupling J must be finite and nonzero".into()));
    }
    Ok(())
}

/// Exact eigensystem of a model: unitary eigenvector columns plus energies.
#[derive(Debug, Clone)]
pub struct SpectralData {
    pub energies: Vec<f64>,
    /// Columns are eigenvectors in the tensor basis.
    pub eigenvectors: DMatrix<Complex64>,
}

impl SpectralData {
    /// Coefficients of `amps` in the eigenbasis.
    pub fn to_eigenbasis(&self, amps: &[Complex64]) -> Vec<Complex64> {
        let dim = self.energies.len();
        (0..dim)
            .map(|k| {
                (0..dim)
                    .map(|i| self.eigenvectors[(i, k)].conj() * amps[i])
                    .sum()
            })
            .collect()
    }

    /// Reassemble tensor-basis amplitudes from eigenbasis coefficients.
    pub fn from_eigenbasis(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        let dim = self.energies.len();
        (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|k| self.eigenvectors[(i, k)] * coeffs[k])
                    .sum()
            })
            .collect()
    }
}

fn xxz_matrix(j: f64, nu: f64, b: f64) -> DMatrix<Complex64> {
    // Basis |11>, |10>, |01>, |00>; sx sx + sy sy swaps the middle pair.
    let z = Complex64::ZERO;
    let c = Complex64::new;
    DMatrix::from_row_slice(
        4,
        4,
        &[
            c(nu * j + 2.0 * b, 0.0), z, z, z,
            z, c(-nu * j, 0.0), c(2.0 * j, 0.0), z,
            z, c(2.0 * j, 0.0), c(-nu * j, 0.0), z,
            z, z, z, c(nu * j - 2.0 * b, 0.0),
        ],
    )
}

/// Assemble the XXZ Hamiltonian and its exact eigensystem.
///
/// Eigenvectors are |11>, (|10>+|01>)/sqrt2, (|10>-|01>)/sqrt2, |00>; the
/// energies come from applying the assembled matrix, which is the ground
/// truth this crate evolves with.
pub fn build_xxz(j: f64, nu: f64, b: f64) -> Result<(DMatrix<Complex64>, SpectralData)> {
    check_coupling(j)?;
    let h = xxz_matrix(j, nu, b);
    let r = 0.5_f64.sqrt();
    let c = Complex64::new;
    let z = Complex64::ZERO;
    let eigenvectors = DMatrix::from_row_slice(
        4,
        4,
        &[
            Complex64::ONE, z, z, z,
            z, c(r, 0.0), c(r, 0.0), z,
            z, c(r, 0.0), c(-r, 0.0), z,
            z, z, z, Complex64::ONE,
        ],
    );
    let energies = vec![
        nu * j + 2.0 * b,
        2.0 * j - nu * j,
        -2.0 * j - nu * j,
        nu * j - 2.0 * b,
    ];
    let spectral = SpectralData {
        energies,
        eigenvectors,
    };
    // Residual check H v = E v.
    for k in 0..4 {
        let v = spectral.eigenvectors.column(k);
        let hv = &h * v;
        let res: f64 = (0..4)
            .map(|i| (hv[i] - Complex64::new(spectral.energies[k], 0.0) * v[i]).norm())
            .fold(0.0, f64::max);
        if res > 1e-10 * (1.0 + spectral.energies[k].abs()) {
            return Err(Error::Numerics(format!(
                "XXZ spectral residual {res:.3e} for eigenpair {k}"
            )));
        }
    }
    Ok((h, spectral))
}

/// Binomial coefficient as f64 (exact for the desk-scale arguments used here).
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0_f64;
    for i in 0..k {
        acc = acc * f64::from(n - i) / f64::from(i + 1);
    }
    acc
}

/// Amplitudes of one site's SU(2) coherent state at polar angle `theta` and
/// azimuthal angle `phi`, in digit order (m = +s first):
/// a_k = sqrt(C(2s,k)) cos^(2s-k)(theta/2) sin^k(theta/2) e^{i k phi}.
pub fn coherent_site_amplitudes(spin: HalfInt, theta: f64, phi: f64) -> Vec<Complex64> {
    let ts = spin.twice() as u32;
    let (half_cos, half_sin) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    (0..=ts)
        .map(|k| {
            let mag = binomial(ts, k).sqrt()
                * half_cos.powi((ts - k) as i32)
                * half_sin.powi(k as i32);
            Complex64::from_polar(mag, phi * f64::from(k))
        })
        .collect()
}

/// Product of per-site coherent states over the whole basis.
pub fn coherent_state(basis: BasisDescriptor, polar: f64, azimuthal: f64) -> Result<PureState> {
    if !(0.0..=std::f64::consts::PI).contains(&polar) {
        return Err(Error::Domain(format!("polar angle {polar} outside [0, pi]")));
    }
    let site = coherent_site_amplitudes(basis.spin(), polar, azimuthal);
    let d = basis.local_dim();
    let dim = basis.dimension();
    let mut amps = vec![Complex64::ONE; 1];
    for _ in 0..basis.n_sites() {
        let mut next = Vec::with_capacity(amps.len() * d);
        for a in &amps {
            for s in &site {
                next.push(a * s);
            }
        }
        amps = next;
    }
    debug_assert_eq!(amps.len(), dim);
    PureState::new(basis, amps)
}

/// A named point on one of the model charts.
///
/// XXZ uses (eta = 2Jt, kappa = 2 mu Bz t). The collective Ising chart is
/// (eta, phi) for the initial direction and kappa = Jt for the evolution.
/// The pairwise spin-s chart is (kappa, phi) initial and eta = Jt evolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChartPoint {
    Xxz { eta: f64, kappa: f64 },
    IsingQubit { eta: f64, phi: f64, kappa: f64 },
    IsingSpinS { kappa: f64, phi: f64, eta: f64 },
}

impl ChartPoint {
    /// The two coordinates of the reduced two-dimensional chart
    /// (initial polar angle, evolution parameter).
    pub fn reduced(&self) -> (f64, f64) {
        match *self {
            ChartPoint::Xxz { eta, kappa } => (eta, kappa),
            ChartPoint::IsingQubit { eta, kappa, .. } => (eta, kappa),
            ChartPoint::IsingSpinS { kappa, eta, .. } => (kappa, eta),
        }
    }
}
