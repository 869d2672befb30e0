//! Squeeze-rotate-unsqueeze protocol states and their closed-form
//! decompositions.
//!
//! All angles are generator angles: the rotation step is e^{iγ S(Φ)} with
//! S(Φ) = cos Φ · S_x + sin Φ · S_y, so Φ = 0 rotates about X and Φ = π/2
//! about Y. Closed-form material quoted from the two-spin expansion uses a
//! mirrored axis label; see [`crate::metrology::closed`] for the fitted map.

use crate::linalg::{ci, cr, exp_i_hermitian, log_factorials, CVector, C64};
use crate::spin::{
    apply_diagonal, coherent_state, ladder_operators, oat_squeeze, rotate, tensor,
    two_spin_squeeze, Basis, SpinLabel, SpinState, Target,
};
use std::f64::consts::{FRAC_PI_2, PI};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ProtocolError {
    #[error("closed-form decomposition is only available for the X and Y axes")]
    InvalidAxis,
    #[error("operation requires an integer spin")]
    InvalidSpin,
}

/// Protocol parameters (γ rotation angle, Φ equatorial-axis angle, μ
/// squeezing strength), radians. Canonical ranges γ ∈ [0,2π), Φ ∈ [0,π),
/// μ ∈ [0,4π) are documented but not enforced; periodicity is tested
/// instead.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolParams {
    pub gamma: f64,
    pub phi: f64,
    pub mu: f64,
    pub second: Option<SecondRotation>,
}

/// Additional rotation applied to the probe spin between squeeze and
/// unsqueeze.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondRotation {
    pub gamma: f64,
    pub phi: f64,
}

impl ProtocolParams {
    pub fn new(gamma: f64, phi: f64, mu: f64) -> Self {
        Self { gamma, phi, mu, second: None }
    }

    pub fn with_second(mut self, gamma: f64, phi: f64) -> Self {
        self.second = Some(SecondRotation { gamma, phi });
        self
    }
}

/// |SRU₁(γ,Φ;μ)⟩ = e^{−iμS_z²} e^{iγS(Φ)} e^{iμS_z²} |S,S⟩_{π/2,0}.
pub fn sru1_state(s: SpinLabel, p: &ProtocolParams) -> SpinState {
    let x = coherent_state(s, FRAC_PI_2, 0.0);
    let squeezed = apply_diagonal(&oat_squeeze(s, p.mu), &x);
    let rotated = rotate(&squeezed, p.gamma, p.phi, Target::Whole).expect("single-spin basis");
    apply_diagonal(&oat_squeeze(s, -p.mu), &rotated)
}

/// |SRU₂(γ,Φ;μ)⟩ = e^{−iμS_z⊗S_z} (e^{iγS(Φ)}⊗1) e^{iμS_z⊗S_z} |X⟩⊗|X⟩.
pub fn sru2_state(s_main: SpinLabel, s_probe: SpinLabel, p: &ProtocolParams) -> SpinState {
    let x2 = tensor(
        &coherent_state(s_main, FRAC_PI_2, 0.0),
        &coherent_state(s_probe, FRAC_PI_2, 0.0),
    )
    .expect("single-spin inputs");
    let mut psi = apply_diagonal(&two_spin_squeeze(s_main, s_probe, p.mu), &x2);
    psi = rotate(&psi, p.gamma, p.phi, Target::Main).expect("pair basis");
    if let Some(sec) = p.second {
        psi = rotate(&psi, sec.gamma, sec.phi, Target::Probe).expect("pair basis");
    }
    apply_diagonal(&two_spin_squeeze(s_main, s_probe, -p.mu), &psi)
}

/// Two-rotation variant: main gets (γ₁,Φ₁), probe gets (γ₂,Φ₂), both between
/// squeeze and unsqueeze.
pub fn sru2_two_rotations(
    s_main: SpinLabel,
    s_probe: SpinLabel,
    gamma1: f64,
    phi1: f64,
    gamma2: f64,
    phi2: f64,
    mu: f64,
) -> SpinState {
    sru2_state(
        s_main,
        s_probe,
        &ProtocolParams::new(gamma1, phi1, mu).with_second(gamma2, phi2),
    )
}

/// Closed-form amplitude table for |SRU₂(γ,Φ;μ)⟩, evaluated per (j,k) from
/// the binomial product expansion. Reproduces `sru2_state` amplitude by
/// amplitude (not just up to phase).
///
/// The product formula's axis label is mirrored with respect to the
/// generator angle; this function takes the generator angle Φ and evaluates
/// the expansion at π/2 − Φ so the two constructions agree pointwise.
pub fn sru2_closed_amplitudes(
    s_main: SpinLabel,
    s_probe: SpinLabel,
    p: &ProtocolParams,
) -> SpinState {
    let (sm, sp) = (s_main.spin(), s_probe.spin());
    let (nm, np) = (s_main.twice_spin() as usize, s_probe.twice_spin() as usize);
    let lf = log_factorials(nm.max(np));
    let phi_label = FRAC_PI_2 - p.phi;
    let c = cr((p.gamma / 2.0).cos());
    let s = cr((p.gamma / 2.0).sin());
    let norm = cr(0.5f64.powf(sm + sp));
    let mut v = CVector::zeros(s_main.dim() * s_probe.dim());
    for ji in 0..s_main.dim() {
        let j = sm - ji as f64;
        let ln_bm = lf[nm] - lf[ji] - lf[nm - ji];
        for ki in 0..s_probe.dim() {
            let k = sp - ki as f64;
            let ln_bp = lf[np] - lf[ki] - lf[np - ki];
            let delta = phi_label - k * p.mu;
            let f_plus = c + ci(delta).exp() * s;
            let f_minus = c - ci(-delta).exp() * s;
            let binom = cr((0.5 * (ln_bm + ln_bp)).exp());
            v[ji * s_probe.dim() + ki] = norm
                * binom
                * f_plus.powf(sm + j)
                * f_minus.powf(sm - j);
        }
    }
    SpinState::from_amplitudes(Basis::Pair { main: s_main, probe: s_probe }, v)
        .expect("dimensions agree")
}

/// Two-axis variant: e^{−μ(S₋²−S₊²)} e^{iγS(Φ)} e^{μ(S₋²−S₊²)} |S,S⟩, with
/// the initial spin coherent state pointing along Z (unlike the X-axis
/// start of [`sru1_state`]).
pub fn sru1_two_axis(s: SpinLabel, p: &ProtocolParams) -> SpinState {
    let (plus, minus) = ladder_operators(s);
    // S-^2 - S+^2 is anti-Hermitian; exp(mu *.) = exp(-i mu H) with
    // H = i (S-^2 - S+^2) Hermitian.
    let h = (minus.matrix() * minus.matrix() - plus.matrix() * plus.matrix()) * ci(1.0);
    let squeeze = exp_i_hermitian(&h, -p.mu);
    let unsqueeze = exp_i_hermitian(&h, p.mu);
    let z_pole = SpinState::basis_state(s, 0);
    let squeezed =
        SpinState::from_amplitudes(Basis::Single(s), &squeeze * z_pole.amplitudes()).unwrap();
    let rotated = rotate(&squeezed, p.gamma, p.phi, Target::Whole).unwrap();
    SpinState::from_amplitudes(Basis::Single(s), &unsqueeze * rotated.amplitudes()).unwrap()
}

/// One branch of a closed-form decomposition: coefficient times the spin
/// coherent state |S,S⟩_{θ,φ}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScsBranch {
    pub coefficient: C64,
    pub theta: f64,
    pub phi: f64,
}

/// Rebuild the state vector of a branch list.
pub fn branches_to_state(s: SpinLabel, branches: &[ScsBranch]) -> SpinState {
    let mut acc = CVector::zeros(s.dim());
    for b in branches {
        acc += coherent_state(s, b.theta, b.phi).amplitudes() * b.coefficient;
    }
    SpinState::from_amplitudes(Basis::Single(s), acc).expect("dimension fixed by label")
}

/// Closed-form decomposition of |SRU₁(γ,Φ;π/2)⟩ for Φ ∈ {0, π/2}.
///
/// Depending on spin parity one axis yields a two-branch rotation-amplified
/// superposition of |±X⟩ (the Heisenberg-scaling case) and the other a
/// four-branch sum of polar-angle-shifted coherent states. Integer spin
/// carries the two-branch form on X; half-integer spin carries it on Y.
pub fn sru1_max_closed(
    s: SpinLabel,
    gamma: f64,
    phi: f64,
) -> Result<Vec<ScsBranch>, ProtocolError> {
    let axis_x = (phi - 0.0).abs() < 1e-12;
    let axis_y = (phi - FRAC_PI_2).abs() < 1e-12;
    if !axis_x && !axis_y {
        return Err(ProtocolError::InvalidAxis);
    }
    let sv = s.spin();
    Ok(if s.is_integer_spin() {
        // (-1)^S
        let sign = if s.twice_spin() % 4 == 0 { 1.0 } else { -1.0 };
        if axis_x {
            vec![
                ScsBranch { coefficient: cr((sv * gamma).cos()), theta: FRAC_PI_2, phi: 0.0 },
                ScsBranch { coefficient: cr(-sign * (sv * gamma).sin()), theta: FRAC_PI_2, phi: PI },
            ]
        } else {
            let ip = ci(sign);
            vec![
                ScsBranch { coefficient: cr(0.5), theta: FRAC_PI_2 - gamma, phi: 0.0 },
                ScsBranch { coefficient: -ip * cr(0.5), theta: FRAC_PI_2 + gamma, phi: PI },
                ScsBranch { coefficient: cr(0.5), theta: FRAC_PI_2 + gamma, phi: 0.0 },
                ScsBranch { coefficient: ip * cr(0.5), theta: FRAC_PI_2 - gamma, phi: PI },
            ]
        }
    } else {
        // (-1)^{S - 1/2}
        let sign = if (s.twice_spin() - 1) % 4 == 0 { 1.0 } else { -1.0 };
        if axis_y {
            vec![
                ScsBranch { coefficient: cr((gamma * sv).cos()), theta: FRAC_PI_2, phi: 0.0 },
                ScsBranch { coefficient: cr(sign * (gamma * sv).sin()), theta: FRAC_PI_2, phi: PI },
            ]
        } else {
            let e_minus = ci(-PI * sv).exp();
            let e_plus = ci(PI * sv).exp();
            vec![
                ScsBranch { coefficient: cr(0.5), theta: FRAC_PI_2 + gamma, phi: 0.0 },
                ScsBranch { coefficient: -e_minus * cr(0.5), theta: FRAC_PI_2 - gamma, phi: PI },
                ScsBranch { coefficient: cr(0.5), theta: FRAC_PI_2 - gamma, phi: 0.0 },
                ScsBranch { coefficient: -e_plus * cr(0.5), theta: FRAC_PI_2 + gamma, phi: PI },
            ]
        }
    })
}

/// Rotation-independent measurement basis saturating the single-parameter
/// bound for |SRU₁(γ,0;π/2)⟩ at integer spin: the SLD eigenvectors
/// (|X⟩ ± |−X⟩)/√2.
///
/// The γ argument is accepted for interface symmetry and ignored: the basis
/// does not depend on the rotation angle, which is what makes a non-adaptive
/// scheme possible.
pub fn optimal_measurement_basis(
    s: SpinLabel,
    _gamma: f64,
) -> Result<(SpinState, SpinState), ProtocolError> {
    if !s.is_integer_spin() {
        return Err(ProtocolError::InvalidSpin);
    }
    let x = coherent_state(s, FRAC_PI_2, 0.0);
    let minus_x = coherent_state(s, FRAC_PI_2, PI);
    let inv_sqrt2 = cr(1.0 / 2f64.sqrt());
    let plus = x.add(&minus_x).unwrap().scale(inv_sqrt2);
    let minus = x.add(&minus_x.scale(cr(-1.0))).unwrap().scale(inv_sqrt2);
    Ok((plus, minus))
}
