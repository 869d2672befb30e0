//! Truncated-Fock-space bosonic oracle: mode operators, the single- and
//! two-mode squeeze-displace-unsqueeze (SDU) protocol states, and the
//! tail-norm gate that rejects any construction whose occupation leaks into
//! the top of the retained ladder.
//!
//! Two-mode unitaries are never materialised as full (n+1)²-dimensional
//! matrices: the beamsplitter conserves n_a + n_b and the two-mode squeezer
//! conserves n_a − n_b, so both are exponentiated sector by sector.

use crate::linalg::{ci, cr, exp_i_hermitian, CMatrix, CVector, C64};
use thiserror::Error;

/// Occupation allowed above index n_max − 2 before a state is rejected.
pub const TAIL_GATE: f64 = 1e-10;

#[derive(Debug, Error, PartialEq)]
pub enum FockError {
    #[error("photon cutoff must be at least 8, got {0}")]
    CutoffTooSmall(usize),
    #[error("tail norm {tail:.3e} above the {gate:.0e} gate at cutoff {n_max}; raise the cutoff")]
    TailNormExceeded { tail: f64, n_max: usize, gate: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Photon-number cutoff; each mode keeps |0⟩ … |n_max⟩.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockCutoff {
    n_max: usize,
}

impl FockCutoff {
    pub fn new(n_max: usize) -> Result<Self, FockError> {
        if n_max < 8 {
            return Err(FockError::CutoffTooSmall(n_max));
        }
        Ok(Self { n_max })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        self.n_max + 1
    }
}

/// Dense single-mode operator over the Fock basis |0⟩ … |n_max⟩.
#[derive(Debug, Clone)]
pub struct ModeOperator {
    matrix: CMatrix,
}

impl ModeOperator {
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

    pub fn unitarity_error(&self) -> f64 {
        crate::linalg::unitarity_error(&self.matrix)
    }
}

/// One- or two-mode state vector; two-mode indexing is row-major with the
/// first mode slow.
#[derive(Debug, Clone)]
pub struct ModeState {
    amplitudes: CVector,
    dim_per_mode: usize,
    modes: u8,
}

impl ModeState {
    pub fn vacuum(cutoff: FockCutoff) -> Self {
        let mut v = CVector::zeros(cutoff.dim());
        v[0] = cr(1.0);
        Self { amplitudes: v, dim_per_mode: cutoff.dim(), modes: 1 }
    }

    pub fn vacuum_two_mode(cutoff: FockCutoff) -> Self {
        let d = cutoff.dim();
        let mut v = CVector::zeros(d * d);
        v[0] = cr(1.0);
        Self { amplitudes: v, dim_per_mode: d, modes: 2 }
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn modes(&self) -> u8 {
        self.modes
    }

    pub fn dim_per_mode(&self) -> usize {
        self.dim_per_mode
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn fidelity(&self, other: &Self) -> f64 {
        self.amplitudes.dotc(&other.amplitudes).norm_sqr()
    }

    /// Occupation above index n_max − 2 in any mode.
    pub fn tail_norm(&self) -> f64 {
        let d = self.dim_per_mode;
        match self.modes {
            1 => self
                .amplitudes
                .iter()
                .enumerate()
                .filter(|(n, _)| n + 2 >= d)
                .map(|(_, z)| z.norm_sqr())
                .sum(),
            _ => {
                let mut tail = 0.0;
                for (idx, z) in self.amplitudes.iter().enumerate() {
                    let (na, nb) = (idx / d, idx % d);
                    if na + 2 >= d || nb + 2 >= d {
                        tail += z.norm_sqr();
                    }
                }
                tail
            }
        }
    }

    fn gate(self) -> Result<Self, FockError> {
        let tail = self.tail_norm();
        if tail > TAIL_GATE {
            return Err(FockError::TailNormExceeded {
                tail,
                n_max: self.dim_per_mode - 1,
                gate: TAIL_GATE,
            });
        }
        Ok(self)
    }

    /// Apply a single-mode operator to a single-mode state, then run the
    /// tail gate.
    pub fn apply(&self, op: &ModeOperator) -> Result<Self, FockError> {
        if self.modes != 1 || op.dim() != self.dim_per_mode {
            return Err(FockError::DimensionMismatch {
                expected: self.amplitudes.len(),
                got: op.dim(),
            });
        }
        Self {
            amplitudes: op.matrix() * &self.amplitudes,
            dim_per_mode: self.dim_per_mode,
            modes: 1,
        }
        .gate()
    }

    /// Apply a single-mode operator to the first mode of a two-mode state.
    pub fn apply_mode_a(&self, op: &ModeOperator) -> Result<Self, FockError> {
        self.check_two_mode(op)?;
        Self {
            amplitudes: crate::linalg::apply_outer(op.matrix(), &self.amplitudes, self.dim_per_mode),
            dim_per_mode: self.dim_per_mode,
            modes: 2,
        }
        .gate()
    }

    /// Apply a single-mode operator to the second mode of a two-mode state.
    pub fn apply_mode_b(&self, op: &ModeOperator) -> Result<Self, FockError> {
        self.check_two_mode(op)?;
        Self {
            amplitudes: crate::linalg::apply_inner(op.matrix(), &self.amplitudes, self.dim_per_mode),
            dim_per_mode: self.dim_per_mode,
            modes: 2,
        }
        .gate()
    }

    fn check_two_mode(&self, op: &ModeOperator) -> Result<(), FockError> {
        if self.modes != 2 || op.dim() != self.dim_per_mode {
            return Err(FockError::DimensionMismatch {
                expected: self.dim_per_mode,
                got: op.dim(),
            });
        }
        Ok(())
    }

    /// Apply a sector-diagonal two-mode unitary.
    pub fn apply_graded(&self, op: &GradedOperator) -> Result<Self, FockError> {
        if self.modes != 2 || op.dim_per_mode != self.dim_per_mode {
            return Err(FockError::DimensionMismatch {
                expected: self.dim_per_mode,
                got: op.dim_per_mode,
            });
        }
        let d = self.dim_per_mode;
        let mut out = CVector::zeros(d * d);
        for sector in &op.sectors {
            for (row, &(na, nb)) in sector.basis.iter().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for (col, &(ma, mb)) in sector.basis.iter().enumerate() {
                    acc += sector.unitary[(row, col)] * self.amplitudes[ma * d + mb];
                }
                out[na * d + nb] = acc;
            }
        }
        Self { amplitudes: out, dim_per_mode: d, modes: 2 }.gate()
    }

    /// ⟨n̂⟩ of a single-mode state.
    pub fn mean_photon_number(&self) -> f64 {
        assert_eq!(self.modes, 1);
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(n, z)| n as f64 * z.norm_sqr())
            .sum()
    }
}

/// Two-mode unitary stored sector by sector along a conserved grading.
#[derive(Debug, Clone)]
pub struct GradedOperator {
    dim_per_mode: usize,
    sectors: Vec<Sector>,
}

#[derive(Debug, Clone)]
struct Sector {
    basis: Vec<(usize, usize)>,
    unitary: CMatrix,
}

impl GradedOperator {
    pub fn dim_per_mode(&self) -> usize {
        self.dim_per_mode
    }

    /// Largest ‖U†U − 1‖∞ over sectors; the full operator is unitary iff
    /// every sector block is.
    pub fn unitarity_error(&self) -> f64 {
        self.sectors
            .iter()
            .map(|s| crate::linalg::unitarity_error(&s.unitary))
            .fold(0.0, f64::max)
    }

    /// Densify for small-dimension checks.
    pub fn to_dense(&self) -> CMatrix {
        let d = self.dim_per_mode;
        let mut m = CMatrix::zeros(d * d, d * d);
        for sector in &self.sectors {
            for (row, &(na, nb)) in sector.basis.iter().enumerate() {
                for (col, &(ma, mb)) in sector.basis.iter().enumerate() {
                    m[(na * d + nb, ma * d + mb)] = sector.unitary[(row, col)];
                }
            }
        }
        m
    }
}

/// Exponentiate exp(i·t·H) for a two-mode Hermitian generator given entry
/// by entry, restricted to sectors of the conserved grading.
fn exp_graded<G, H>(cutoff: FockCutoff, grade: G, entry: H, t: f64) -> GradedOperator
where
    G: Fn(usize, usize) -> i64,
    H: Fn(usize, usize, usize, usize) -> C64,
{
    let d = cutoff.dim();
    let mut by_grade: std::collections::BTreeMap<i64, Vec<(usize, usize)>> = Default::default();
    for na in 0..d {
        for nb in 0..d {
            by_grade.entry(grade(na, nb)).or_default().push((na, nb));
        }
    }
    let sectors = by_grade
        .into_values()
        .map(|basis| {
            let n = basis.len();
            let mut h = CMatrix::zeros(n, n);
            for (row, &(na, nb)) in basis.iter().enumerate() {
                for (col, &(ma, mb)) in basis.iter().enumerate() {
                    h[(row, col)] = entry(na, nb, ma, mb);
                }
            }
            let unitary = exp_i_hermitian(&h, t);
            Sector { basis, unitary }
        })
        .collect();
    GradedOperator { dim_per_mode: d, sectors }
}

/// Annihilation operator: ⟨n−1|a|n⟩ = √n.
pub fn annihilation(cutoff: FockCutoff) -> ModeOperator {
    let d = cutoff.dim();
    let mut m = CMatrix::zeros(d, d);
    for n in 1..d {
        m[(n - 1, n)] = cr((n as f64).sqrt());
    }
    ModeOperator::from_matrix(m)
}

pub fn number_operator(cutoff: FockCutoff) -> ModeOperator {
    let d = cutoff.dim();
    ModeOperator::from_matrix(CMatrix::from_diagonal(&CVector::from_iterator(
        d,
        (0..d).map(|n| cr(n as f64)),
    )))
}

/// Displacement D(γ) = exp(γa† − γ*a), by eigendecomposition of the
/// Hermitian −i(γa† − γ*a).
pub fn displacement(gamma: C64, cutoff: FockCutoff) -> ModeOperator {
    let a = annihilation(cutoff);
    let h = (a.matrix().adjoint() * gamma - a.matrix() * gamma.conj()) * ci(-1.0);
    ModeOperator::from_matrix(exp_i_hermitian(&h, 1.0))
}

/// Single-mode squeezer S₁(r) = exp(r(a² − a†²)/2).
pub fn single_mode_squeeze(r: f64, cutoff: FockCutoff) -> ModeOperator {
    let a = annihilation(cutoff);
    let gen = (a.matrix() * a.matrix() - a.matrix().adjoint() * a.matrix().adjoint()) * cr(r / 2.0);
    let h = gen * ci(-1.0); // gen is anti-Hermitian
    ModeOperator::from_matrix(exp_i_hermitian(&h, 1.0))
}

/// Two-mode squeezer S₂(r) = exp(−2irK̂₂) with K̂₂ = −(i/2)(a†b† − ba);
/// conserves n_a − n_b, so it is built sector by sector.
pub fn two_mode_squeeze(r: f64, cutoff: FockCutoff) -> GradedOperator {
    let d = cutoff.dim();
    // H = -2 K2 = i (a† b† - b a); entry <na nb| H |ma mb>
    let entry = move |na: usize, nb: usize, ma: usize, mb: usize| -> C64 {
        if na == ma + 1 && nb == mb + 1 {
            ci(1.0) * cr((na as f64 * nb as f64).sqrt())
        } else if na + 1 == ma && nb + 1 == mb && ma < d && mb < d {
            ci(-1.0) * cr((ma as f64 * mb as f64).sqrt())
        } else {
            cr(0.0)
        }
    };
    exp_graded(cutoff, |na, nb| na as i64 - nb as i64, entry, r)
}

/// Beamsplitter B = exp(iĴ₂π/2) with Ĵ₂ = −(i/2)(a†b − b†a); conserves
/// n_a + n_b.
pub fn beamsplitter(cutoff: FockCutoff) -> GradedOperator {
    let entry = move |na: usize, nb: usize, ma: usize, mb: usize| -> C64 {
        // J2 entries: -(i/2) <.| a† b |.> + (i/2) <.| b† a |.>
        if na == ma + 1 && nb + 1 == mb {
            ci(-0.5) * cr((na as f64 * mb as f64).sqrt())
        } else if na + 1 == ma && nb == mb + 1 {
            ci(0.5) * cr((ma as f64 * nb as f64).sqrt())
        } else {
            cr(0.0)
        }
    };
    exp_graded(cutoff, |na, nb| (na + nb) as i64, entry, std::f64::consts::FRAC_PI_2)
}

/// Coherent state |z⟩ built directly from its Fock expansion (test oracle
/// for the displaced constructions).
pub fn coherent_mode_state(z: C64, cutoff: FockCutoff) -> ModeState {
    let d = cutoff.dim();
    let mut v = CVector::zeros(d);
    let mut amp = cr((-z.norm_sqr() / 2.0).exp());
    v[0] = amp;
    for n in 1..d {
        amp = amp * z / cr((n as f64).sqrt());
        v[n] = amp;
    }
    ModeState { amplitudes: v, dim_per_mode: d, modes: 1 }
}

/// Label of the coherent state produced by the single-mode SDU protocol:
/// αe^r + iβe^{−r} for γ = α + iβ.
pub fn sdu1_coherent_label(alpha: f64, beta: f64, r: f64) -> C64 {
    C64::new(alpha * r.exp(), beta * (-r).exp())
}

/// |ψ₁(γ,r)⟩ = S₁†(r) D(γ) S₁(r)|0⟩ with γ = α + iβ. Every
/// non-number-conserving step runs the tail gate.
pub fn sdu1_state(alpha: f64, beta: f64, r: f64, cutoff: FockCutoff) -> Result<ModeState, FockError> {
    let s1 = single_mode_squeeze(r, cutoff);
    let d = displacement(C64::new(alpha, beta), cutoff);
    ModeState::vacuum(cutoff)
        .apply(&s1)?
        .apply(&d)?
        .apply(&s1.dagger())
}

/// Two-mode SDU preparation B(|αe^r + iβe^{−r}⟩ ⊗ |αe^{−r} + iβe^r⟩):
/// displaced vacua on both modes followed by the beamsplitter.
pub fn sdu2_state(alpha: f64, beta: f64, r: f64, cutoff: FockCutoff) -> Result<ModeState, FockError> {
    let z = C64::new(alpha * r.exp(), beta * (-r).exp());
    let w = C64::new(alpha * (-r).exp(), beta * r.exp());
    let b = beamsplitter(cutoff);
    ModeState::vacuum_two_mode(cutoff)
        .apply_mode_a(&displacement(z, cutoff))?
        .apply_mode_b(&displacement(w, cutoff))?
        .apply_graded(&b)
}

/// Smallest cutoff from an escalating ladder that passes the tail gate for
/// the single-mode protocol at these parameters.
pub fn sdu1_auto_cutoff(alpha: f64, beta: f64, r: f64) -> Result<(ModeState, FockCutoff), FockError> {
    let mut last = FockError::CutoffTooSmall(0);
    for n_max in [60usize, 90, 120, 160] {
        let cutoff = FockCutoff::new(n_max)?;
        match sdu1_state(alpha, beta, r, cutoff) {
            Ok(state) => return Ok((state, cutoff)),
            Err(e @ FockError::TailNormExceeded { .. }) => last = e,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn cut(n: usize) -> FockCutoff {
        FockCutoff::new(n).unwrap()
    }

    #[test]
    fn cutoff_guard() {
        assert!(FockCutoff::new(7).is_err());
        assert_eq!(cut(40).dim(), 41);
    }

    #[test]
    fn annihilation_entries_and_commutator() {
        let a = annihilation(cut(8));
        assert_abs_diff_eq!(a.matrix()[(0, 1)].re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(a.matrix()[(1, 2)].re, 2f64.sqrt(), epsilon = 1e-15);
        // [a, a†] = I except the last diagonal entry (truncation artifact)
        let comm = a.matrix() * a.matrix().adjoint() - a.matrix().adjoint() * a.matrix();
        for n in 0..8 {
            assert_abs_diff_eq!(comm[(n, n)].re, 1.0, epsilon = 1e-13);
        }
        assert_abs_diff_eq!(comm[(8, 8)].re, -8.0, epsilon = 1e-12);
        // a|0> = 0
        let v0 = ModeState::vacuum(cut(8));
        assert!((a.matrix() * v0.amplitudes()).norm() < 1e-15);
    }

    #[test]
    fn displaced_vacuum_is_coherent() {
        let cutoff = cut(40);
        let g = C64::new(0.5, 0.0);
        let psi = ModeState::vacuum(cutoff).apply(&displacement(g, cutoff)).unwrap();
        assert_abs_diff_eq!(psi.mean_photon_number(), 0.25, epsilon = 1e-12);
        let oracle = coherent_mode_state(g, cutoff);
        assert!(psi.fidelity(&oracle) > 1.0 - 1e-12);
    }

    #[test]
    fn squeezed_vacuum_photon_number() {
        let cutoff = cut(60);
        let r = 0.8;
        let psi = ModeState::vacuum(cutoff).apply(&single_mode_squeeze(r, cutoff)).unwrap();
        assert_abs_diff_eq!(psi.mean_photon_number(), r.sinh().powi(2), epsilon = 1e-10);
    }

    #[test]
    fn beamsplitter_is_unitary() {
        let b = beamsplitter(cut(30));
        assert!(b.unitarity_error() < 1e-10);
    }

    #[test]
    fn two_mode_squeeze_is_unitary_and_entangles_pairwise() {
        let s2 = two_mode_squeeze(0.4, cut(20));
        assert!(s2.unitarity_error() < 1e-10);
        let psi = ModeState::vacuum_two_mode(cut(20)).apply_graded(&s2).unwrap();
        // two-mode squeezed vacuum populates only na == nb
        for (idx, z) in psi.amplitudes().iter().enumerate() {
            let (na, nb) = (idx / 21, idx % 21);
            if na != nb {
                assert!(z.norm() < 1e-14);
            }
        }
    }

    #[test]
    fn sdu1_matches_displaced_coherent_label() {
        let cutoff = cut(60);
        // r = 0: plain coherent state
        let psi = sdu1_state(0.3, 0.0, 0.0, cutoff).unwrap();
        let oracle = coherent_mode_state(cr(0.3), cutoff);
        assert!(psi.fidelity(&oracle) >= 1.0 - 1e-8);

        let psi = sdu1_state(0.2, 0.0, 0.5, cutoff).unwrap();
        let oracle = coherent_mode_state(sdu1_coherent_label(0.2, 0.0, 0.5), cutoff);
        assert!(psi.fidelity(&oracle) >= 1.0 - 1e-8);
    }

    #[test]
    fn tail_gate_rejects_undersized_cutoff() {
        // r = 1 squeezed vacuum leaks past n = 58 at cutoff 60
        let err = sdu1_state(0.1, 0.1, 1.0, cut(60)).unwrap_err();
        assert!(matches!(err, FockError::TailNormExceeded { .. }));
        let (psi, chosen) = sdu1_auto_cutoff(0.1, 0.1, 1.0).unwrap();
        assert_eq!(chosen.n_max(), 90);
        let oracle = coherent_mode_state(sdu1_coherent_label(0.1, 0.1, 1.0), chosen);
        assert!(psi.fidelity(&oracle) >= 1.0 - 1e-8);
    }

    #[test]
    fn sdu2_builds_and_passes_gate() {
        let psi = sdu2_state(0.1, 0.1, 1.0, cut(40)).unwrap();
        assert_abs_diff_eq!(psi.norm(), 1.0, epsilon = 1e-10);
    }
}
