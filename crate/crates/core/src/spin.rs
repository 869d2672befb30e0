//! Exact construction of spin-j operators, spin coherent states, and the
//! one-axis / two-spin squeezing unitaries.
//!
//! Spin is stored as the integer 2S so half-integer spins stay exact and all
//! parity decisions are integer arithmetic. Basis convention: |S,M⟩ with M
//! descending from S to −S; bipartite states are row-major with the main
//! index slow and the probe index fast.

use crate::linalg::{
    apply_inner, apply_outer, ci, cr, exp_i_hermitian, kron_vec, log_factorials, CMatrix, CVector,
    C64,
};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SpinError {
    #[error("twice_spin must be in 1..={max}, got {got}", max = SpinLabel::MAX_TWICE_SPIN)]
    InvalidSpin { got: u32 },
    #[error("spin value {0} is not a half-integer")]
    NotHalfInteger(f64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("rotation target not consistent with the state's basis")]
    BadTarget,
}

/// Half-integer spin quantum number, stored as 2S.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpinLabel {
    twice_spin: u32,
}

impl SpinLabel {
    /// Dimension guard: spins above S = 64 are out of scope.
    pub const MAX_TWICE_SPIN: u32 = 128;

    pub fn new(twice_spin: u32) -> Result<Self, SpinError> {
        if twice_spin == 0 || twice_spin > Self::MAX_TWICE_SPIN {
            return Err(SpinError::InvalidSpin { got: twice_spin });
        }
        Ok(Self { twice_spin })
    }

    pub fn from_spin(s: f64) -> Result<Self, SpinError> {
        let ts = 2.0 * s;
        if (ts - ts.round()).abs() > 1e-9 {
            return Err(SpinError::NotHalfInteger(s));
        }
        Self::new(ts.round() as u32)
    }

    pub fn twice_spin(&self) -> u32 {
        self.twice_spin
    }

    pub fn spin(&self) -> f64 {
        self.twice_spin as f64 / 2.0
    }

    /// Hilbert dimension 2S + 1.
    pub fn dim(&self) -> usize {
        self.twice_spin as usize + 1
    }

    pub fn is_integer_spin(&self) -> bool {
        self.twice_spin % 2 == 0
    }

    /// M values in basis order, S down to −S.
    pub fn weights(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.spin() - i as f64).collect()
    }
}

/// Dense complex matrix over the |S,M⟩ basis (or a bipartite tensor basis).
#[derive(Debug, Clone)]
pub struct SpinOperator {
    matrix: CMatrix,
}

impl SpinOperator {
    pub fn from_matrix(matrix: CMatrix) -> Self {
        assert_eq!(matrix.nrows(), matrix.ncols());
        Self { matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dagger(&self) -> Self {
        Self { matrix: self.matrix.adjoint() }
    }

    pub fn hermiticity_error(&self) -> f64 {
        crate::linalg::hermiticity_error(&self.matrix)
    }

    pub fn unitarity_error(&self) -> f64 {
        crate::linalg::unitarity_error(&self.matrix)
    }
}

/// Which basis a state vector lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    Single(SpinLabel),
    /// Row-major |j,k⟩ ordering: main index slow, probe index fast.
    Pair { main: SpinLabel, probe: SpinLabel },
}

impl Basis {
    pub fn dim(&self) -> usize {
        match self {
            Basis::Single(s) => s.dim(),
            Basis::Pair { main, probe } => main.dim() * probe.dim(),
        }
    }
}

/// Subsystem a rotation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    /// The whole state (single-spin basis only).
    Whole,
    Main,
    Probe,
}

/// Complex amplitude vector with its basis bookkeeping; unit norm after
/// every constructor and unitary application.
#[derive(Debug, Clone)]
pub struct SpinState {
    amplitudes: CVector,
    basis: Basis,
}

impl SpinState {
    pub fn from_amplitudes(basis: Basis, amplitudes: CVector) -> Result<Self, SpinError> {
        if amplitudes.len() != basis.dim() {
            return Err(SpinError::DimensionMismatch {
                expected: basis.dim(),
                got: amplitudes.len(),
            });
        }
        Ok(Self { amplitudes, basis })
    }

    /// Basis state |S,M⟩.
    pub fn basis_state(s: SpinLabel, m_index: usize) -> Self {
        let mut v = CVector::zeros(s.dim());
        v[m_index] = cr(1.0);
        Self { amplitudes: v, basis: Basis::Single(s) }
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> CVector {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn scale(&self, z: C64) -> Self {
        Self { amplitudes: &self.amplitudes * z, basis: self.basis }
    }

    pub fn add(&self, other: &Self) -> Result<Self, SpinError> {
        if self.dim() != other.dim() {
            return Err(SpinError::DimensionMismatch { expected: self.dim(), got: other.dim() });
        }
        Ok(Self { amplitudes: &self.amplitudes + &other.amplitudes, basis: self.basis })
    }

    pub fn normalized(&self) -> Self {
        self.scale(cr(1.0 / self.norm()))
    }

    /// Global-phase-insensitive comparison: |⟨a|b⟩|².
    pub fn fidelity(&self, other: &Self) -> f64 {
        overlap(self, other).norm_sqr()
    }
}

/// ⟨a|b⟩.
pub fn overlap(a: &SpinState, b: &SpinState) -> C64 {
    a.amplitudes.dotc(&b.amplitudes)
}

/// ⟨ψ|A|ψ⟩.
pub fn expectation(a: &SpinOperator, psi: &SpinState) -> C64 {
    let av = a.matrix() * psi.amplitudes();
    psi.amplitudes().dotc(&av)
}

/// Kronecker product of two single-spin states, main ⊗ probe.
pub fn tensor(main: &SpinState, probe: &SpinState) -> Result<SpinState, SpinError> {
    match (main.basis(), probe.basis()) {
        (Basis::Single(m), Basis::Single(p)) => Ok(SpinState {
            amplitudes: kron_vec(main.amplitudes(), probe.amplitudes()),
            basis: Basis::Pair { main: m, probe: p },
        }),
        _ => Err(SpinError::BadTarget),
    }
}

/// S_z: diagonal with entries M = S, S−1, …, −S.
pub fn sz_operator(s: SpinLabel) -> SpinOperator {
    let d = CVector::from_iterator(s.dim(), s.weights().into_iter().map(cr));
    SpinOperator::from_matrix(CMatrix::from_diagonal(&d))
}

/// (S₊, S₋) with S₊|S,M⟩ = √(S(S+1) − M(M+1)) |S,M+1⟩.
pub fn ladder_operators(s: SpinLabel) -> (SpinOperator, SpinOperator) {
    let dim = s.dim();
    let sv = s.spin();
    let mut plus = CMatrix::zeros(dim, dim);
    for i in 1..dim {
        // index i holds M = S − i; S₊ raises it to index i − 1
        let m = sv - i as f64;
        plus[(i - 1, i)] = cr((sv * (sv + 1.0) - m * (m + 1.0)).sqrt());
    }
    let minus = plus.adjoint();
    (SpinOperator::from_matrix(plus), SpinOperator::from_matrix(minus))
}

pub fn sx_operator(s: SpinLabel) -> SpinOperator {
    let (p, _) = ladder_operators(s);
    let m = (p.matrix() + p.matrix().adjoint()) * cr(0.5);
    SpinOperator::from_matrix(m)
}

pub fn sy_operator(s: SpinLabel) -> SpinOperator {
    let (p, _) = ladder_operators(s);
    let m = (p.matrix() - p.matrix().adjoint()) * ci(-0.5);
    SpinOperator::from_matrix(m)
}

/// Equatorial axis operator S(Φ) = cos Φ · S_x + sin Φ · S_y.
pub fn spin_axis_operator(s: SpinLabel, phi: f64) -> SpinOperator {
    let m = sx_operator(s).matrix() * cr(phi.cos()) + sy_operator(s).matrix() * cr(phi.sin());
    SpinOperator::from_matrix(m)
}

/// Spin coherent state |S,S⟩_{θ,φ}: amplitude at M is
/// √C(2S, S+M) · cos^{S+M}(θ/2) · e^{i(S−M)φ} · sin^{S−M}(θ/2).
///
/// Binomial amplitudes go through exp(½·Σ lnΓ) so the construction stays
/// stable out to S = 64.
pub fn coherent_state(s: SpinLabel, theta: f64, phi: f64) -> SpinState {
    let n = s.twice_spin() as usize;
    let lf = log_factorials(n);
    let sv = s.spin();
    let c = (theta / 2.0).cos();
    let sn = (theta / 2.0).sin();
    let amplitudes = CVector::from_iterator(
        s.dim(),
        (0..s.dim()).map(|i| {
            // index i holds M = S − i, so S+M = n − i and S−M = i
            let k_up = n - i;
            let k_dn = i;
            let ln_binom = lf[n] - lf[k_up] - lf[k_dn];
            let mag = (0.5 * ln_binom).exp()
                * pow_signed(c, k_up as i32)
                * pow_signed(sn, k_dn as i32);
            ci(k_dn as f64 * phi).exp() * cr(mag)
        }),
    );
    SpinState { amplitudes, basis: Basis::Single(s) }
}

// integer power that tolerates negative bases (θ outside [0, π] is allowed
// formally by the branch decompositions)
fn pow_signed(base: f64, k: i32) -> f64 {
    base.powi(k)
}

/// One-axis squeezing e^{iμS_z²}: diagonal unitary with entries e^{iμM²}.
pub fn oat_squeeze(s: SpinLabel, mu: f64) -> SpinOperator {
    let d = CVector::from_iterator(s.dim(), s.weights().into_iter().map(|m| ci(mu * m * m).exp()));
    SpinOperator::from_matrix(CMatrix::from_diagonal(&d))
}

/// Two-spin squeezing e^{iμ S_z ⊗ S_z}: diagonal with entries e^{iμ·j·k}.
pub fn two_spin_squeeze(s_main: SpinLabel, s_probe: SpinLabel, mu: f64) -> SpinOperator {
    let (wm, wp) = (s_main.weights(), s_probe.weights());
    let dim = s_main.dim() * s_probe.dim();
    let mut d = CVector::zeros(dim);
    for (i, &j) in wm.iter().enumerate() {
        for (l, &k) in wp.iter().enumerate() {
            d[i * s_probe.dim() + l] = ci(mu * j * k).exp();
        }
    }
    SpinOperator::from_matrix(CMatrix::from_diagonal(&d))
}

/// Rotation unitary e^{iγ S(Φ)} on one spin, via eigendecomposition of the
/// Hermitian generator.
pub fn rotation_unitary(s: SpinLabel, gamma: f64, phi: f64) -> SpinOperator {
    SpinOperator::from_matrix(exp_i_hermitian(spin_axis_operator(s, phi).matrix(), gamma))
}

/// Apply e^{iγ S(Φ)} to `target`, tensored with identity on the untouched
/// subsystem; norm is preserved.
pub fn rotate(psi: &SpinState, gamma: f64, phi: f64, target: Target) -> Result<SpinState, SpinError> {
    match (psi.basis(), target) {
        (Basis::Single(s), Target::Whole) => {
            let u = rotation_unitary(s, gamma, phi);
            Ok(SpinState {
                amplitudes: u.matrix() * psi.amplitudes(),
                basis: psi.basis(),
            })
        }
        (Basis::Pair { main, probe }, Target::Main) => {
            let u = rotation_unitary(main, gamma, phi);
            Ok(SpinState {
                amplitudes: apply_outer(u.matrix(), psi.amplitudes(), probe.dim()),
                basis: psi.basis(),
            })
        }
        (Basis::Pair { probe, .. }, Target::Probe) => {
            let u = rotation_unitary(probe, gamma, phi);
            Ok(SpinState {
                amplitudes: apply_inner(u.matrix(), psi.amplitudes(), probe.dim()),
                basis: psi.basis(),
            })
        }
        _ => Err(SpinError::BadTarget),
    }
}

/// Apply a diagonal operator in place of a full matrix product.
pub(crate) fn apply_diagonal(diag: &SpinOperator, psi: &SpinState) -> SpinState {
    let d = diag.matrix();
    let amplitudes = CVector::from_iterator(
        psi.dim(),
        psi.amplitudes().iter().enumerate().map(|(i, z)| d[(i, i)] * z),
    );
    SpinState { amplitudes, basis: psi.basis() }
}
