//! Exact time evolution: a spectral/diagonal propagator (the oracle) and the
//! closed-form evolved states of the three families, plus periodicity checks.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::models::{
    coherent_state, ChartPoint, ModelSpec, ModelVariant,
};
use crate::statespace::{index_to_ms, overlap, BasisDescriptor, HalfInt, PureState};

/// Propagate a state by `t` under the model's Hamiltonian (hbar = 1).
pub fn evolve_exact(psi0: &PureState, spec: &ModelSpec, t: f64) -> Result<PureState> {
    if psi0.basis() != spec.basis() {
        return Err(Error::BasisMismatch(
            "state basis does not match model".into(),
        ));
    }
    match spec.variant() {
        ModelVariant::Xxz { .. } => {
            let spectral = spec.spectral_data()?;
            let mut coeffs = spectral.to_eigenbasis(psi0.amplitudes());
            for (c, &e) in coeffs.iter_mut().zip(&spectral.energies) {
                *c *= Complex64::from_polar(1.0, -e * t);
            }
            PureState::new(*spec.basis(), spectral.from_eigenbasis(&coeffs))
        }
        _ => {
            let energies = spec.diagonal_energies()?;
            let amps = psi0
                .amplitudes()
                .iter()
                .zip(&energies)
                .map(|(a, &e)| a * Complex64::from_polar(1.0, -e * t))
                .collect();
            PureState::new(*spec.basis(), amps)
        }
    }
}

/// A Schroedinger-evolved family: an initial state moved along physical time.
#[derive(Debug, Clone)]
pub struct EvolvedFamily {
    spec: ModelSpec,
    initial: PureState,
}

impl EvolvedFamily {
    pub fn new(spec: ModelSpec, initial: PureState) -> Result<Self> {
        if initial.basis() != spec.basis() {
            return Err(Error::BasisMismatch(
                "initial state basis does not match model".into(),
            ));
        }
        Ok(Self { spec, initial })
    }

    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    pub fn initial(&self) -> &PureState {
        &self.initial
    }

    pub fn state_at(&self, t: f64) -> PureState {
        evolve_exact(&self.initial, &self.spec, t).expect("validated on construction")
    }
}

/// The closed-form evolved XXZ state on the (eta, kappa) chart,
/// eta = 2Jt, kappa = 2 mu Bz t. Includes the global factor e^{i nu eta / 2}.
pub fn xxz_closed(c: &[Complex64; 4], eta: f64, kappa: f64, nu: f64) -> Result<PureState> {
    let basis = BasisDescriptor::qubits(2)?;
    let global = Complex64::from_polar(1.0, nu * eta / 2.0);
    let (ce, se) = (eta.cos(), eta.sin());
    let i = Complex64::I;
    let amps = vec![
        global * c[0] * Complex64::from_polar(1.0, -(kappa + nu * eta)),
        global * (c[1] * ce - i * c[2] * se),
        global * (-i * c[1] * se + c[2] * ce),
        global * c[3] * Complex64::from_polar(1.0, kappa - nu * eta),
    ];
    PureState::new(basis, amps)
}

/// Evolve an arbitrary two-qubit state on the XXZ chart, recovering t from
/// eta = 2Jt and checking kappa against 2 mu Bz t.
pub fn xxz_family_state(
    spec: &ModelSpec,
    c: &[Complex64; 4],
    point: &ChartPoint,
) -> Result<PureState> {
    let ModelVariant::Xxz { j, nu, b } = spec.variant() else {
        return Err(Error::Domain("xxz_family_state needs an XXZ model".into()));
    };
    let ChartPoint::Xxz { eta, kappa } = *point else {
        return Err(Error::Domain("chart point is not an XXZ point".into()));
    };
    let t = eta / (2.0 * j);
    let expected_kappa = 2.0 * b * t;
    if (kappa - expected_kappa).abs() > 1e-9 * (1.0 + kappa.abs()) {
        return Err(Error::Domain(format!(
            "chart point (eta={eta}, kappa={kappa}) inconsistent with couplings \
             (kappa should be {expected_kappa})"
        )));
    }
    xxz_closed(c, eta, kappa, nu)
}

/// Number of down spins (digit sum) of a flat index on a qubit basis.
fn down_count(index: usize, n_sites: usize) -> u32 {
    let mut idx = index;
    let mut p = 0;
    for _ in 0..n_sites {
        p += (idx & 1) as u32;
        idx >>= 1;
    }
    p
}

/// Closed-form evolved state of N qubits under the collective Ising model:
/// the coherent state with each amplitude multiplied by
/// e^{-i kappa (N - 2p)^2 / 4}, p = number of down spins.
pub fn ising_qubit_closed(n: usize, eta: f64, phi: f64, kappa: f64) -> Result<PureState> {
    let basis = BasisDescriptor::qubits(n)?;
    let init = coherent_state(basis, eta, phi)?;
    let nf = n as f64;
    let amps = init
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(idx, a)| {
            let p = f64::from(down_count(idx, n));
            let w = nf - 2.0 * p;
            a * Complex64::from_polar(1.0, -kappa * w * w / 4.0)
        })
        .collect();
    PureState::new(basis, amps)
}

/// Closed-form evolved state of N spin-s sites under the pairwise Ising
/// model: coherent-state amplitudes times e^{-i 2 eta sum_{k<l} m_k m_l}.
pub fn ising_spin_s_closed(
    n: usize,
    spin: HalfInt,
    kappa: f64,
    phi: f64,
    eta: f64,
) -> Result<PureState> {
    let basis = BasisDescriptor::new(n, spin)?;
    let init = coherent_state(basis, kappa, phi)?;
    let amps = init
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(idx, a)| {
            let ms = index_to_ms(idx, &basis).expect("index in range");
            let total: f64 = ms.iter().map(|m| m.value()).sum();
            let sq: f64 = ms.iter().map(|m| m.value() * m.value()).sum();
            let pair_sum = (total * total - sq) / 2.0;
            a * Complex64::from_polar(1.0, -2.0 * eta * pair_sum)
        })
        .collect();
    PureState::new(basis, amps)
}

/// Outcome of a periodicity check.
#[derive(Debug, Clone, Copy)]
pub struct PeriodicityCheck {
    /// True iff the shifted state equals the base state up to one phase.
    pub periodic: bool,
    /// Best-fit phase alpha with shifted = e^{i alpha} base.
    pub measured_phase: f64,
    /// Residual after phase alignment.
    pub residual: f64,
}

/// Compare a state with its shifted companion: is shifted = e^{i a} base?
///
/// The best-fit phase is arg<base|shifted>; if the overlap is too small to
/// define one the check reports failure instead of aligning noise. When a
/// claimed phase is supplied the measured one must match it mod 2 pi.
pub fn check_periodicity(
    base: &PureState,
    shifted: &PureState,
    claimed_phase: Option<f64>,
) -> Result<PeriodicityCheck> {
    let ov = overlap(base, shifted)?;
    if ov.norm() < 1e-6 {
        return Ok(PeriodicityCheck {
            periodic: false,
            measured_phase: f64::NAN,
            residual: f64::INFINITY,
        });
    }
    let alpha = ov.arg();
    let aligned = base.with_phase(Complex64::from_polar(1.0, alpha));
    let residual = aligned.vector_distance(shifted);
    let mut periodic = residual < 1e-9;
    if let Some(claimed) = claimed_phase {
        let diff = wrap_angle(alpha - claimed).abs();
        periodic = periodic && diff < 1e-9;
    }
    Ok(PeriodicityCheck {
        periodic,
        measured_phase: alpha,
        residual,
    })
}

/// Wrap an angle into (-pi, pi].
pub fn wrap_angle(a: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut x = a % two_pi;
    if x <= -std::f64::consts::PI {
        x += two_pi;
    } else if x > std::f64::consts::PI {
        x -= two_pi;
    }
    x
}

/// Align `candidate` to `reference` by a global phase and return the residual
/// after alignment. Errors if the overlap is too small to define the phase.
pub fn phase_aligned_residual(reference: &PureState, candidate: &PureState) -> Result<f64> {
    let ov = overlap(candidate, reference)?;
    if ov.norm() < 1e-6 {
        return Err(Error::Numerics(
            "phase alignment undefined: overlap below 1e-6".into(),
        ));
    }
    let aligned = candidate.with_phase(Complex64::from_polar(1.0, ov.arg()));
    Ok(aligned.vector_distance(reference))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statespace::flat_index;
    use std::f64::consts::PI;

    fn half(n: i32) -> HalfInt {
        HalfInt::from_twice(n)
    }

    fn c64(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_unit4(seed: u64) -> [Complex64; 4] {
        let mut state = seed.max(1);
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        let mut v = [Complex64::ZERO; 4];
        let mut norm = 0.0;
        for a in &mut v {
            *a = c64(next(), next());
            norm += a.norm_sqr();
        }
        let inv = 1.0 / norm.sqrt();
        for a in &mut v {
            *a *= inv;
        }
        v
    }

    #[test]
    fn evolve_identity_at_t_zero() {
        let spec = ModelSpec::collective_ising(1.0, 2).unwrap();
        let psi = coherent_state(*spec.basis(), 0.7, 0.3).unwrap();
        let out = evolve_exact(&psi, &spec, 0.0).unwrap();
        assert!(psi.vector_distance(&out) < 1e-15);
    }

    #[test]
    fn eigenstate_picks_up_global_phase() {
        let spec = ModelSpec::collective_ising(1.3, 2).unwrap();
        let basis = *spec.basis();
        let e11 = PureState::basis_state(basis, &[half(1), half(1)]).unwrap();
        let t = 0.9;
        let out = evolve_exact(&e11, &spec, t).unwrap();
        let expect = e11.with_phase(Complex64::from_polar(1.0, -1.3 * t));
        assert!(out.vector_distance(&expect) < 1e-14);
    }

    #[test]
    fn collective_plus_plus_amplitudes() {
        // |++> under H = J (sum Sz)^2: amplitudes (e^{-ik},1,1,e^{-ik})/2.
        let j = 0.8;
        let t = 1.1;
        let kappa = j * t;
        let spec = ModelSpec::collective_ising(j, 2).unwrap();
        let psi = coherent_state(*spec.basis(), PI / 2.0, 0.0).unwrap();
        let out = evolve_exact(&psi, &spec, t).unwrap();
        let ph = Complex64::from_polar(0.5, -kappa);
        for (i, expect) in [ph, c64(0.5, 0.0), c64(0.5, 0.0), ph].iter().enumerate() {
            assert!((out.amplitudes()[i] - expect).norm() < 1e-14);
        }
    }

    #[test]
    fn evolution_composes() {
        let spec = ModelSpec::xxz(0.9, 0.4, 0.2).unwrap();
        let c = random_unit4(7);
        let psi = PureState::new(*spec.basis(), c.to_vec()).unwrap();
        let (t1, t2) = (0.37, 1.21);
        let once = evolve_exact(&psi, &spec, t1 + t2).unwrap();
        let twice = evolve_exact(&evolve_exact(&psi, &spec, t1).unwrap(), &spec, t2).unwrap();
        assert!(once.vector_distance(&twice) < 1e-11);
    }

    #[test]
    fn xxz_closed_origin_is_identity() {
        let c = random_unit4(11);
        let s = xxz_closed(&c, 0.0, 0.0, 0.7).unwrap();
        for (a, b) in s.amplitudes().iter().zip(&c) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn xxz_closed_middle_block_rotation() {
        // c10 = 1, eta = pi/2: amplitudes (0,0,-i,0) times e^{i nu eta / 2}.
        let nu = 0.63;
        let c = [Complex64::ZERO, Complex64::ONE, Complex64::ZERO, Complex64::ZERO];
        let s = xxz_closed(&c, PI / 2.0, 0.0, nu).unwrap();
        let global = Complex64::from_polar(1.0, nu * PI / 4.0);
        let expect = [
            Complex64::ZERO,
            Complex64::ZERO,
            -Complex64::I * global,
            Complex64::ZERO,
        ];
        for (a, b) in s.amplitudes().iter().zip(&expect) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn closed_forms_match_exact_evolution() {
        // 1000 random draws across the three families; the closed forms
        // reproduce the propagator to machine precision after phase alignment.
        let mut seed = 1u64;
        for _ in 0..334 {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
            let r = |k: u64| {
                let mut x = seed ^ k.wrapping_mul(0x9e3779b97f4a7c15);
                x ^= x << 13;
                x ^= x >> 7;
                x ^= x << 17;
                (x >> 11) as f64 / (1u64 << 53) as f64
            };
            // XXZ
            let j = 0.2 + 1.8 * r(1);
            let nu = -2.0 + 4.0 * r(2);
            let b = -1.5 + 3.0 * r(3);
            let t = 3.0 * r(4);
            let spec = ModelSpec::xxz(j, nu, b).unwrap();
            let c = random_unit4(seed | 1);
            let psi0 = PureState::new(*spec.basis(), c.to_vec()).unwrap();
            let exact = evolve_exact(&psi0, &spec, t).unwrap();
            let closed = xxz_closed(&c, 2.0 * j * t, 2.0 * b * t, nu).unwrap();
            assert!(phase_aligned_residual(&exact, &closed).unwrap() < 1e-10);

            // Collective Ising on 1..=8 qubits.
            let n = 1 + (r(5) * 8.0) as usize;
            let jq = 0.2 + 1.8 * r(6);
            let (eta, phi, tq) = (PI * r(7), 2.0 * PI * r(8), 3.0 * r(9));
            let specq = ModelSpec::collective_ising(jq, n).unwrap();
            let init = coherent_state(*specq.basis(), eta, phi).unwrap();
            let exact = evolve_exact(&init, &specq, tq).unwrap();
            let closed = ising_qubit_closed(n, eta, phi, jq * tq).unwrap();
            assert!(phase_aligned_residual(&exact, &closed).unwrap() < 1e-10);

            // Pairwise spin-s on a desk-scale basis.
            let (n, ts) = [(2usize, 1i32), (2, 2), (2, 3), (3, 1), (3, 2), (4, 1), (2, 5)]
                [(r(10) * 7.0) as usize];
            let js = 0.2 + 1.8 * r(11);
            let (kap, phs, tsed) = (PI * r(12), 2.0 * PI * r(13), 3.0 * r(14));
            let specs = ModelSpec::pairwise_ising(js, n, half(ts)).unwrap();
            let init = coherent_state(*specs.basis(), kap, phs).unwrap();
            let exact = evolve_exact(&init, &specs, tsed).unwrap();
            let closed = ising_spin_s_closed(n, half(ts), kap, phs, js * tsed).unwrap();
            assert!(phase_aligned_residual(&exact, &closed).unwrap() < 1e-10);
        }
    }

    #[test]
    fn single_qubit_collective_global_phase() {
        // N=1: (N-2p)^2 = 1 for both levels, so only a global phase accrues.
        let kappa = 1.37;
        let s = ising_qubit_closed(1, 1.0, 0.4, kappa).unwrap();
        let init = coherent_state(BasisDescriptor::qubits(1).unwrap(), 1.0, 0.4).unwrap();
        let expect = init.with_phase(Complex64::from_polar(1.0, -kappa / 4.0));
        assert!(s.vector_distance(&expect) < 1e-14);
    }

    #[test]
    fn ising_qubit_even_n_kappa_period() {
        let (n, eta, phi) = (4, 1.2, 0.7);
        let a = ising_qubit_closed(n, eta, phi, 0.9).unwrap();
        let b = ising_qubit_closed(n, eta, phi, 0.9 + 2.0 * PI).unwrap();
        assert!(a.vector_distance(&b) < 1e-12);
    }

    #[test]
    fn spin_s_periods() {
        // Half-integer s: eta + 2 pi closes the ray with a global sign
        // (-1)^(N choose 2). Integer s: eta + pi closes it exactly.
        for (n, ts, sign) in [(2usize, 3i32, -1.0), (3, 1, -1.0), (4, 1, 1.0), (2, 1, -1.0)] {
            let a = ising_spin_s_closed(n, half(ts), 1.0, 0.3, 0.8).unwrap();
            let b = ising_spin_s_closed(n, half(ts), 1.0, 0.3, 0.8 + 2.0 * PI).unwrap();
            let claimed = if sign < 0.0 { PI } else { 0.0 };
            let chk = check_periodicity(&a, &b, Some(claimed)).unwrap();
            assert!(chk.periodic, "N={n}, 2s={ts}");
        }

        let c = ising_spin_s_closed(2, half(2), 1.0, 0.3, 0.8).unwrap();
        let d = ising_spin_s_closed(2, half(2), 1.0, 0.3, 0.8 + PI).unwrap();
        let chk = check_periodicity(&c, &d, Some(0.0)).unwrap();
        assert!(chk.periodic);
    }

    #[test]
    fn spin_s_eta_zero_is_coherent() {
        let s = ising_spin_s_closed(2, half(2), 1.1, 0.5, 0.0).unwrap();
        let init = coherent_state(BasisDescriptor::new(2, half(2)).unwrap(), 1.1, 0.5).unwrap();
        assert!(s.vector_distance(&init) < 1e-15);
    }

    /// The six XXZ recurrence cases. Measured phases are asserted; they agree
    /// with the printed ones except case (6), where the printed factor is off
    /// by pi/2 (the calibration table records that deviation).
    #[test]
    fn xxz_periodicity_cases() {
        let generic = random_unit4(23);

        // Case (1): nu = p/q, p and q odd. kappa + 2pi trivial; eta + q pi
        // carries e^{-i p pi / 2}.
        for (p, q) in [(1i32, 1i32), (1, 3), (3, 5)] {
            let nu = f64::from(p) / f64::from(q);
            let (eta, kappa) = (0.37, 1.1);
            let base = xxz_closed(&generic, eta, kappa, nu).unwrap();
            let s1 = xxz_closed(&generic, eta, kappa + 2.0 * PI, nu).unwrap();
            assert!(check_periodicity(&base, &s1, Some(0.0)).unwrap().periodic);
            let s2 = xxz_closed(&generic, eta + f64::from(q) * PI, kappa, nu).unwrap();
            let claimed = -f64::from(p) * PI / 2.0;
            assert!(check_periodicity(&base, &s2, Some(claimed)).unwrap().periodic);
        }

        // Case (1b): one of p, q even: joint shift (eta + q pi, kappa + pi)
        // with phase -(p/2 + 1) pi.
        for (p, q) in [(1i32, 2i32), (2, 3)] {
            let nu = f64::from(p) / f64::from(q);
            let (eta, kappa) = (0.61, 0.45);
            let base = xxz_closed(&generic, eta, kappa, nu).unwrap();
            let s = xxz_closed(&generic, eta + f64::from(q) * PI, kappa + PI, nu).unwrap();
            let claimed = -(f64::from(p) / 2.0 + 1.0) * PI;
            assert!(check_periodicity(&base, &s, Some(claimed)).unwrap().periodic);
        }

        // Case (2): irrational nu, kappa period 2 pi.
        {
            let nu = 2.0_f64.sqrt();
            let base = xxz_closed(&generic, 0.8, 0.3, nu).unwrap();
            let s = xxz_closed(&generic, 0.8, 0.3 + 2.0 * PI, nu).unwrap();
            assert!(check_periodicity(&base, &s, Some(0.0)).unwrap().periodic);
        }

        // Case (3): c11 = c00 = 0, eta + pi carries phase pi + nu pi / 2.
        {
            let nu = 0.77;
            let c = [Complex64::ZERO, c64(0.8, 0.0), c64(0.0, -0.6), Complex64::ZERO];
            let base = xxz_closed(&c, 0.9, 0.0, nu).unwrap();
            let s = xxz_closed(&c, 0.9 + PI, 0.0, nu).unwrap();
            assert!(check_periodicity(&base, &s, Some(PI + nu * PI / 2.0))
                .unwrap()
                .periodic);
        }

        // Case (4): c10 = c01 = 0, kappa + pi flips the sign.
        {
            let c = [c64(0.6, 0.0), Complex64::ZERO, Complex64::ZERO, c64(0.0, 0.8)];
            let base = xxz_closed(&c, 0.0, 0.7, 0.9).unwrap();
            let s = xxz_closed(&c, 0.0, 0.7 + PI, 0.9).unwrap();
            assert!(check_periodicity(&base, &s, Some(PI)).unwrap().periodic);
        }

        // Case (5): nu = 1 with c01 = c10: kappa period 2 pi.
        {
            let c = [c64(0.5, 0.0), c64(0.5, 0.0), c64(0.5, 0.0), c64(0.5, 0.0)];
            let base = xxz_closed(&c, 0.6, 0.2, 1.0).unwrap();
            let s = xxz_closed(&c, 0.6, 0.2 + 2.0 * PI, 1.0).unwrap();
            assert!(check_periodicity(&base, &s, Some(0.0)).unwrap().periodic);
        }

        // Case (6): nu generic, c10 = c01: shift (eta + pi/(nu-1), kappa + pi).
        // Measured phase is (nu-2) pi / (2(nu-1)), a quarter turn away from
        // the commonly printed factor.
        {
            let nu = 0.4;
            let c = [c64(0.5, 0.0), c64(0.5, 0.0), c64(0.5, 0.0), c64(0.5, 0.0)];
            let base = xxz_closed(&c, 0.6, 0.2, nu).unwrap();
            let s = xxz_closed(&c, 0.6 + PI / (nu - 1.0), 0.2 + PI, nu).unwrap();
            let measured = (nu - 2.0) * PI / (2.0 * (nu - 1.0));
            let chk = check_periodicity(&base, &s, Some(measured)).unwrap();
            assert!(chk.periodic);
            let printed = -PI / (2.0 * (nu - 1.0));
            assert!((wrap_angle(chk.measured_phase - printed).abs() - PI / 2.0).abs() < 1e-9);
        }

        // A random, non-periodic shift must fail.
        {
            let base = xxz_closed(&generic, 0.8, 0.3, 0.21).unwrap();
            let s = xxz_closed(&generic, 1.1, 0.9, 0.21).unwrap();
            assert!(!check_periodicity(&base, &s, None).unwrap().periodic);
        }
    }

    #[test]
    fn xxz_family_state_checks_chart_consistency() {
        let spec = ModelSpec::xxz(1.0, 0.5, 0.3).unwrap();
        let c = random_unit4(3);
        let good = ChartPoint::Xxz {
            eta: 1.0,
            kappa: 2.0 * 0.3 * (1.0 / 2.0),
        };
        assert!(xxz_family_state(&spec, &c, &good).is_ok());
        let bad = ChartPoint::Xxz { eta: 1.0, kappa: 0.7 };
        assert!(xxz_family_state(&spec, &c, &bad).is_err());
    }

    #[test]
    fn concurrence_of_evolved_plus_minus_is_sin_2eta() {
        // chi = 0 initial |+-> = |10>: evolved concurrence |sin 2 eta|.
        let nu = 1.7;
        let c = [Complex64::ZERO, Complex64::ONE, Complex64::ZERO, Complex64::ZERO];
        for k in 1..8 {
            let eta = 0.2 * f64::from(k);
            let s = xxz_closed(&c, eta, 0.0, nu).unwrap();
            let a = s.amplitudes();
            let conc = 2.0
                * (a[flat_index(&[half(1), half(1)], s.basis()).unwrap()]
                    * a[flat_index(&[half(-1), half(-1)], s.basis()).unwrap()]
                    - a[flat_index(&[half(1), half(-1)], s.basis()).unwrap()]
                        * a[flat_index(&[half(-1), half(1)], s.basis()).unwrap()])
                .norm();
            assert!((conc - (2.0 * eta).sin().abs()).abs() < 1e-12);
        }
    }
}
