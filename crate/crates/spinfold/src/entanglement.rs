//! Concurrence and I-concurrence: oracle computations from state vectors and
//! the registered closed forms.

use crate::error::{Error, Result};
use crate::statespace::{partial_trace, purity, PureState};

/// Which entanglement measure a value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConcurrenceKind {
    WoottersQubit,
    IConcurrence,
}

/// An entanglement value with its bipartition bookkeeping.
#[derive(Debug, Clone, Copy)]
pub struct ConcurrenceValue {
    pub value: f64,
    pub kind: ConcurrenceKind,
    /// Site kept by the partial trace underlying the measure.
    pub bipartition: usize,
}

/// Pure-state two-qubit concurrence C = 2 |c11 c00 - c10 c01| in the
/// |11>, |10>, |01>, |00> basis order.
pub fn concurrence_pure_2qubit(psi: &PureState) -> Result<ConcurrenceValue> {
    let basis = psi.basis();
    if basis.n_sites() != 2 || basis.spin().twice() != 1 {
        return Err(Error::BasisMismatch(
            "pure-state concurrence needs two qubits".into(),
        ));
    }
    let a = psi.amplitudes();
    let value = 2.0 * (a[0] * a[3] - a[1] * a[2]).norm();
    Ok(ConcurrenceValue {
        value: value.min(1.0),
        kind: ConcurrenceKind::WoottersQubit,
        bipartition: 1,
    })
}

/// I-concurrence C = sqrt(2 (1 - Tr rho_k^2)) of a two-qudit pure state.
pub fn i_concurrence(psi: &PureState, keep_site: usize) -> Result<ConcurrenceValue> {
    if psi.basis().n_sites() != 2 {
        return Err(Error::Domain(
            "I-concurrence is defined here for two qudits".into(),
        ));
    }
    let rho = partial_trace(psi, keep_site)?;
    let p = purity(&rho).min(1.0);
    Ok(ConcurrenceValue {
        value: (2.0 * (1.0 - p)).max(0.0).sqrt(),
        kind: ConcurrenceKind::IConcurrence,
        bipartition: keep_site,
    })
}

/// Short-time I-concurrence of the two-spin-s family: C = 2 eta s sin^2 kappa.
/// Documented validity: eta <= 1e-2 for percent-level accuracy.
pub fn i_concurrence_short_time(s: f64, eta: f64, kappa: f64) -> f64 {
    2.0 * eta * s * kappa.sin().powi(2)
}

// ---------------------------------------------------------------------------
// Closed forms
// ---------------------------------------------------------------------------

use num_complex::Complex64;

/// General XXZ evolved-state concurrence in terms of the initial amplitudes:
/// C = |2 c11 c00 e^{-2 i eta (nu+1)} + i e^{-2 i eta} (c10+c01)^2 sin 2eta
///      - 2 c10 c01|.
pub fn concurrence_337(c: &[Complex64; 4], eta: f64, nu: f64) -> f64 {
    let e1 = Complex64::from_polar(1.0, -2.0 * eta * (nu + 1.0));
    let e2 = Complex64::from_polar(1.0, -2.0 * eta);
    let sum = c[1] + c[2];
    let v = 2.0 * c[0] * c[3] * e1 + Complex64::I * e2 * sum * sum * (2.0 * eta).sin()
        - 2.0 * c[1] * c[2];
    v.norm()
}

/// Printed concurrence of the evolved tilted product state; exceeds the
/// oracle away from its anchor slices chi = 0 and (chi = pi/2, nu = 1).
pub fn concurrence_342_printed(eta: f64, nu: f64, chi: f64) -> f64 {
    let cplus = (2.0 * nu * eta).cos() - (2.0 * eta).cos();
    let s2 = chi.sin().powi(2);
    0.5 * (cplus * cplus * s2 * s2
        + (2.0 * (2.0 * eta).sin() + cplus * s2) * (2.0 * (2.0 * eta).sin() + cplus * s2))
        .sqrt()
}

/// Oscillatory slice chi in {0, pi}: C = |sin 2 eta|.
pub fn concurrence_343(eta: f64) -> f64 {
    (2.0 * eta).sin().abs()
}

/// Anisotropy-sensitive slice chi = pi/2: C = |sin((nu+1) eta)|.
pub fn concurrence_344(eta: f64, nu: f64) -> f64 {
    ((nu + 1.0) * eta).sin().abs()
}

/// Time to first maximal entanglement on the chi = pi/2 slice.
pub fn time_to_max_345(j: f64, nu: f64) -> Result<f64> {
    if nu <= -1.0 {
        return Err(Error::Domain("needs nu > -1".into()));
    }
    Ok(std::f64::consts::PI / (4.0 * j * (nu + 1.0)))
}

/// Short-time expansion C ~ eta (2 + (nu-1) sin^2 chi).
pub fn concurrence_346(eta: f64, nu: f64, chi: f64) -> f64 {
    (eta * (2.0 + (nu - 1.0) * chi.sin().powi(2))).abs()
}

/// Two-qubit collective-Ising concurrence C = sin^2(eta) |sin kappa|.
pub fn concurrence_371(eta: f64, kappa: f64) -> f64 {
    eta.sin().powi(2) * kappa.sin().abs()
}

/// Dispatch a registered concurrence formula by id.
pub fn concurrence_closed(formula_id: &str, params: &[(&str, f64)]) -> Result<f64> {
    let get = |key: &str| -> Result<f64> {
        params
            .iter()
            .find(|(k, _)| *k == key)
            .map(|(_, v)| *v)
            .ok_or_else(|| Error::Domain(format!("missing parameter `{key}`")))
    };
    match formula_id {
        "3.42-printed" => Ok(concurrence_342_printed(get("eta")?, get("nu")?, get("chi")?)),
        "3.43" => Ok(concurrence_343(get("eta")?)),
        "3.44" => Ok(concurrence_344(get("eta")?, get("nu")?)),
        "3.46" => Ok(concurrence_346(get("eta")?, get("nu")?, get("chi")?)),
        "3.71" => Ok(concurrence_371(get("eta")?, get("kappa")?)),
        "3.103" => Ok(i_concurrence_short_time(get("s")?, get("eta")?, get("kappa")?)),
        other => Err(Error::UnknownFormula(other.into())),
    }
}

/// Initial coefficients of the tilted product state |+-> with polar angle chi
/// and azimuth gamma, in the |11>, |10>, |01>, |00> order.
pub fn plus_minus_coefficients(chi: f64, gamma: f64) -> [Complex64; 4] {
    let eg = Complex64::from_polar(1.0, gamma);
    let half = chi / 2.0;
    [
        Complex64::new(-(chi.sin()) / 2.0, 0.0),
        eg * half.cos() * half.cos(),
        eg * (-(half.sin()) * half.sin()),
        eg * eg * chi.sin() / 2.0,
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::{ising_qubit_closed, ising_spin_s_closed, xxz_closed};
    use crate::models::coherent_state;
    use crate::statespace::{BasisDescriptor, HalfInt};
    use nalgebra::DMatrix;
    use std::f64::consts::PI;

    fn c64(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Mixed-state Wootters concurrence (spin-flip recipe), used only as a
    /// test oracle: C = max(0, l1 - l2 - l3 - l4) with l_i the decreasing
    /// square roots of the eigenvalues of sqrt(rho) rho~ sqrt(rho).
    fn wootters_mixed(rho: &DMatrix<Complex64>) -> f64 {
        let n = 4;
        let sy_sy = {
            let mut m = DMatrix::<Complex64>::zeros(n, n);
            // (sigma_y x sigma_y) in the |11>,|10>,|01>,|00> order.
            m[(0, 3)] = c64(-1.0, 0.0);
            m[(1, 2)] = c64(1.0, 0.0);
            m[(2, 1)] = c64(1.0, 0.0);
            m[(3, 0)] = c64(-1.0, 0.0);
            m
        };
        let rho_conj = rho.map(|z| z.conj());
        let rho_tilde = &sy_sy * rho_conj * &sy_sy;
        // Hermitian square root of rho.
        let eig = rho.clone().symmetric_eigen();
        let mut sqrt_rho = DMatrix::<Complex64>::zeros(n, n);
        for k in 0..n {
            let lam = eig.eigenvalues[k].max(0.0).sqrt();
            let v = eig.eigenvectors.column(k);
            for i in 0..n {
                for j in 0..n {
                    sqrt_rho[(i, j)] += Complex64::new(lam, 0.0) * v[i] * v[j].conj();
                }
            }
        }
        let m = &sqrt_rho * rho_tilde * &sqrt_rho;
        let mut ls: Vec<f64> = m
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .map(|l| l.max(0.0).sqrt())
            .collect();
        ls.sort_by(|a, b| b.partial_cmp(a).unwrap());
        (ls[0] - ls[1] - ls[2] - ls[3]).max(0.0)
    }

    fn bell() -> PureState {
        let basis = BasisDescriptor::qubits(2).unwrap();
        let r = 0.5_f64.sqrt();
        PureState::new(basis, vec![c64(r, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(r, 0.0)])
            .unwrap()
    }

    #[test]
    fn bell_state_concurrence_is_one() {
        let c = concurrence_pure_2qubit(&bell()).unwrap();
        assert!((c.value - 1.0).abs() < 1e-14);
        let ic = i_concurrence(&bell(), 1).unwrap();
        assert!((ic.value - 1.0).abs() < 1e-14);
    }

    #[test]
    fn product_state_concurrence_is_zero() {
        let basis = BasisDescriptor::qubits(2).unwrap();
        let s = coherent_state(basis, 0.8, 1.3).unwrap();
        assert!(concurrence_pure_2qubit(&s).unwrap().value < 1e-14);
        assert!(i_concurrence(&s, 2).unwrap().value < 1e-14);
    }

    #[test]
    fn evolved_two_qubit_ising_concurrence_matches_371() {
        // C = sin^2(eta) |sin kappa| against the state-vector oracle on a
        // 20x20 interior grid, at 1e-10.
        for i in 1..=20 {
            for j in 1..=20 {
                let eta = PI * f64::from(i) / 21.0;
                let kappa = 2.0 * PI * f64::from(j) / 21.0;
                let s = ising_qubit_closed(2, eta, 0.7, kappa).unwrap();
                let oracle = concurrence_pure_2qubit(&s).unwrap().value;
                assert!(
                    (oracle - concurrence_371(eta, kappa)).abs() < 1e-10,
                    "eta={eta} kappa={kappa}"
                );
            }
        }
    }

    #[test]
    fn xxz_337_matches_oracle_for_random_states() {
        let mut seed = 5u64;
        for _ in 0..200 {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let mut r = {
                let mut state = seed;
                move || {
                    state ^= state << 13;
                    state ^= state >> 7;
                    state ^= state << 17;
                    (state >> 11) as f64 / (1u64 << 53) as f64
                }
            };
            let mut c = [c64(0.0, 0.0); 4];
            let mut norm = 0.0;
            for a in &mut c {
                *a = c64(r() * 2.0 - 1.0, r() * 2.0 - 1.0);
                norm += a.norm_sqr();
            }
            for a in &mut c {
                *a /= norm.sqrt();
            }
            let (eta, nu, kappa) = (3.0 * r(), 4.0 * r() - 2.0, 6.0 * r());
            let evolved = xxz_closed(&c, eta, kappa, nu).unwrap();
            let oracle = concurrence_pure_2qubit(&evolved).unwrap().value;
            let closed = concurrence_337(&c, eta, nu);
            assert!((oracle - closed).abs() < 1e-12);
        }
    }

    #[test]
    fn concurrence_invariant_under_field_parameter() {
        // The evolved concurrence does not depend on kappa at fixed eta.
        let c = plus_minus_coefficients(0.9, 0.4);
        let nu = 1.3;
        let eta = 0.8;
        let base = concurrence_pure_2qubit(&xxz_closed(&c, eta, 0.0, nu).unwrap())
            .unwrap()
            .value;
        for k in 1..12 {
            let kappa = 0.5 * f64::from(k);
            let v = concurrence_pure_2qubit(&xxz_closed(&c, eta, kappa, nu).unwrap())
                .unwrap()
                .value;
            assert!((v - base).abs() < 1e-10);
        }
    }

    #[test]
    fn anchor_slices_of_342() {
        // chi = 0 reduces to |sin 2 eta|; chi = pi/2, nu = 1 does too. The
        // printed general form overshoots elsewhere (e.g. sqrt(2) at
        // chi = pi/2, nu = 0, eta = pi/2 where the oracle gives 1).
        for eta in [0.3_f64, 0.7, 1.2] {
            assert!((concurrence_342_printed(eta, 0.8, 0.0) - concurrence_343(eta)).abs() < 1e-14);
            assert!(
                (concurrence_342_printed(eta, 1.0, PI / 2.0) - concurrence_343(eta)).abs() < 1e-12
            );
        }
        let overshoot = concurrence_342_printed(PI / 2.0, 0.0, PI / 2.0);
        assert!((overshoot - 2.0_f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn chi_half_pi_slice_follows_344() {
        // Oracle check of C = |sin((nu+1) eta)| on the chi = pi/2 slice.
        for nu in [0.0, 0.5, 1.0, 2.0] {
            for eta in [0.2, 0.6, 1.1] {
                let c = plus_minus_coefficients(PI / 2.0, 0.7);
                let evolved = xxz_closed(&c, eta, 0.9, nu).unwrap();
                let oracle = concurrence_pure_2qubit(&evolved).unwrap().value;
                assert!(
                    (oracle - concurrence_344(eta, nu)).abs() < 1e-12,
                    "nu={nu} eta={eta}"
                );
            }
            // Maximal entanglement at eta = pi / (2 (nu + 1)).
            let eta_max = PI / (2.0 * (nu + 1.0));
            assert!((concurrence_344(eta_max, nu) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn short_time_expansion_346() {
        // Relative error of the linearization vanishes as eta -> 0.
        for chi in [0.0, 0.8, PI / 2.0] {
            for nu in [0.3, 1.7] {
                let c = plus_minus_coefficients(chi, 0.0);
                let eta = 1e-4;
                let oracle = concurrence_pure_2qubit(&xxz_closed(&c, eta, 0.0, nu).unwrap())
                    .unwrap()
                    .value;
                let approx = concurrence_346(eta, nu, chi);
                assert!((oracle / approx - 1.0).abs() < 1e-6, "chi={chi} nu={nu}");
            }
        }
        // At chi = 0 the slope is 2 eta, the expansion of |sin 2 eta|.
        assert!((concurrence_346(0.01, 0.77, 0.0) - 0.02).abs() < 1e-15);
    }

    #[test]
    fn i_concurrence_symmetric_between_sites() {
        for ts in [1i32, 2, 3] {
            let half = HalfInt::from_twice(ts);
            let s = ising_spin_s_closed(2, half, 1.1, 0.4, 0.6).unwrap();
            let a = i_concurrence(&s, 1).unwrap().value;
            let b = i_concurrence(&s, 2).unwrap().value;
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn i_concurrence_bound_and_bell_value() {
        // Bound sqrt(2(d-1)/d); Bell pair saturates the qubit value 1.
        let b = bell();
        let v = i_concurrence(&b, 1).unwrap().value;
        assert!((v - 1.0).abs() < 1e-14);
        let s = ising_spin_s_closed(2, HalfInt::from_twice(2), PI / 2.0, 0.0, 2.0).unwrap();
        let d = 3.0_f64;
        let bound = (2.0 * (d - 1.0) / d).sqrt();
        assert!(i_concurrence(&s, 1).unwrap().value <= bound + 1e-12);
    }

    #[test]
    fn separable_spin_s_points() {
        // kappa in {0, pi} leaves the two-qudit system non-entangled.
        for kappa in [0.0, PI] {
            let s = ising_spin_s_closed(2, HalfInt::from_twice(2), kappa, 0.3, 0.9).unwrap();
            assert!(i_concurrence(&s, 1).unwrap().value < 1e-10);
        }
        assert_eq!(i_concurrence_short_time(1.0, 0.5, 0.0), 0.0);
        // kappa = pi/2 maximum: C_max = 2 s eta.
        let v = i_concurrence_short_time(1.5, 1e-3, PI / 2.0);
        assert!((v - 2.0 * 1.5 * 1e-3).abs() < 1e-18);
    }

    #[test]
    fn short_time_i_concurrence_limit() {
        // Exact / short-time ratio -> 1 as eta -> 0 (s = 1, kappa = 1).
        let half = HalfInt::from_twice(2);
        let mut prev_err = f64::INFINITY;
        for eta in [1e-2, 1e-3, 1e-4] {
            let s = ising_spin_s_closed(2, half, 1.0, 0.0, eta).unwrap();
            let exact = i_concurrence(&s, 1).unwrap().value;
            let approx = i_concurrence_short_time(1.0, eta, 1.0);
            let err = (exact / approx - 1.0).abs();
            assert!(err < prev_err);
            prev_err = err;
        }
        assert!(prev_err < 2e-4);
    }

    #[test]
    fn concurrence_invariant_under_local_unitaries() {
        // Random SU(2) x SU(2) rotations leave the pure-state concurrence
        // unchanged.
        let mut state = 99u64;
        let mut r = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        fn su2(a: f64, b: f64, g: f64) -> [[Complex64; 2]; 2] {
            [
                [
                    Complex64::from_polar((b / 2.0).cos(), (a + g) / 2.0),
                    Complex64::from_polar((b / 2.0).sin(), (a - g) / 2.0),
                ],
                [
                    Complex64::from_polar(-(b / 2.0).sin(), -(a - g) / 2.0),
                    Complex64::from_polar((b / 2.0).cos(), -(a + g) / 2.0),
                ],
            ]
        }
        let basis = BasisDescriptor::qubits(2).unwrap();
        for _ in 0..40 {
            let mut c = [c64(0.0, 0.0); 4];
            let mut norm = 0.0;
            for a in &mut c {
                *a = c64(r() * 2.0 - 1.0, r() * 2.0 - 1.0);
                norm += a.norm_sqr();
            }
            for a in &mut c {
                *a /= norm.sqrt();
            }
            let psi = PureState::new(basis, c.to_vec()).unwrap();
            let before = concurrence_pure_2qubit(&psi).unwrap().value;
            let angles: Vec<f64> = (0..6).map(|_| r() * 6.28).collect();
            let u = su2(angles[0], angles[1] / 2.0, angles[2]);
            let v = su2(angles[3], angles[4] / 2.0, angles[5]);
            // Apply U x V: index = 2*i + j over (site1 digit i, site2 digit j).
            let mut out = vec![c64(0.0, 0.0); 4];
            for i in 0..2 {
                for jj in 0..2 {
                    let mut acc = c64(0.0, 0.0);
                    for k in 0..2 {
                        for l in 0..2 {
                            acc += u[i][k] * v[jj][l] * c[2 * k + l];
                        }
                    }
                    out[2 * i + jj] = acc;
                }
            }
            let rotated = PureState::new(basis, out).unwrap();
            let after = concurrence_pure_2qubit(&rotated).unwrap().value;
            assert!((before - after).abs() < 1e-10);
        }
    }

    #[test]
    fn mixed_wootters_recipe_agrees_on_pure_states() {
        let samples = [
            bell(),
            ising_qubit_closed(2, 0.9, 0.3, 1.2).unwrap(),
            ising_qubit_closed(2, 1.7, 0.0, 2.6).unwrap(),
        ];
        for psi in &samples {
            let pure = concurrence_pure_2qubit(psi).unwrap().value;
            let n = 4;
            let mut rho = DMatrix::<Complex64>::zeros(n, n);
            let a = psi.amplitudes();
            for i in 0..n {
                for j in 0..n {
                    rho[(i, j)] = a[i] * a[j].conj();
                }
            }
            let mixed = wootters_mixed(&rho);
            assert!((pure - mixed).abs() < 1e-7, "{pure} vs {mixed}");
        }
    }

    #[test]
    fn purity_from_concurrence_inversion() {
        // Tr rho^2 = 1 - C^2/2 for two-qubit pure states; at the maximally
        // entangled point of the evolved family the purity is 1/2.
        let s = ising_qubit_closed(2, PI / 2.0, 0.0, PI / 2.0).unwrap();
        let rho = partial_trace(&s, 1).unwrap();
        assert!((purity(&rho) - 0.5).abs() < 1e-12);
        let c = concurrence_pure_2qubit(&s).unwrap().value;
        assert!((c - 1.0).abs() < 1e-12);
    }

    #[test]
    fn closed_dispatch() {
        assert!((concurrence_closed("3.43", &[("eta", PI / 4.0)]).unwrap() - 1.0).abs() < 1e-15);
        assert!(concurrence_closed("3.43", &[]).is_err());
        assert!(concurrence_closed("bogus", &[("eta", 1.0)]).is_err());
    }
}
