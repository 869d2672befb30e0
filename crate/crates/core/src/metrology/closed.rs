//! Closed-form QFI expressions for the SRU protocols, the axis/angle sum
//! rule, and the squeezing-strength maxima of the covariance factor.
//!
//! # Axis-angle conventions
//!
//! The protocol builders rotate with the generator S(φ) = cos φ·S_x +
//! sin φ·S_y. The two-spin closed forms quoted below carry their own axis
//! label Φ which is *mirrored* with respect to that generator angle:
//! a closed form evaluated at Φ reproduces the finite-difference QFI of the
//! protocol rotated about φ = π/2 − Φ. The single-spin expression and the
//! two-rotation covariance use the generator angle directly. The map was
//! fitted numerically against the finite-difference ground truth over
//! (Φ, μ) grids and is pinned by regression tests; [`formula_axis_map`]
//! exposes it per closed form.
//!
//! The single-spin expression implemented here carries a plus sign on its
//! cos(2Φ) term. The commonly quoted variant with a minus sign there turns
//! negative at μ = 0 and cannot equal any QFI; the sign used here follows
//! from the squeezed-state moments ⟨S(Φ)⟩ and ⟨S(Φ)²⟩ and matches the
//! finite-difference values on randomized grids.

use crate::spin::SpinLabel;
use std::f64::consts::FRAC_PI_2;

/// Which closed forms carry the mirrored axis label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedForm {
    Sru2Gamma,
    Sru2Axis,
    Sru2Amplitudes,
    Sru1Gamma,
    OffDiagonal,
}

/// Map a closed form's own axis label to the generator angle of the
/// protocol it describes.
pub fn formula_axis_map(form: ClosedForm, phi: f64) -> f64 {
    match form {
        ClosedForm::Sru2Gamma | ClosedForm::Sru2Axis | ClosedForm::Sru2Amplitudes => {
            FRAC_PI_2 - phi
        }
        ClosedForm::Sru1Gamma | ClosedForm::OffDiagonal => phi,
    }
}

/// I_γ for |SRU₂(γ,Φ;μ)⟩ around the equatorial axis labelled Φ:
/// S_M(2S_M+1 − (2S_M−1)cos2Φ·cos^{2S_P}μ − 4S_M sin²Φ·cos^{4S_P}(μ/2)).
pub fn qfi_sru2_gamma(s_main: SpinLabel, s_probe: SpinLabel, phi: f64, mu: f64) -> f64 {
    let sm = s_main.spin();
    let tp = s_probe.twice_spin() as i32;
    sm * (2.0 * sm + 1.0
        - (2.0 * sm - 1.0) * (2.0 * phi).cos() * mu.cos().powi(tp)
        - 4.0 * sm * phi.sin().powi(2) * (mu / 2.0).cos().powi(2 * tp))
}

/// I_γ for the single-spin protocol |SRU₁(γ,Φ;μ)⟩ in the generator angle:
/// S(2S+1 + (2S−1)cos2Φ·cos^{2S−2}(2μ) − 4S cos²Φ·cos^{4S−2}μ).
pub fn qfi_sru1_gamma(s: SpinLabel, phi: f64, mu: f64) -> f64 {
    let sv = s.spin();
    let ts = s.twice_spin() as i32;
    // the (2S−1) coefficient kills the middle term at S = 1/2, where the
    // 2S−2 power would otherwise be negative
    let middle = if ts > 1 {
        (2.0 * sv - 1.0) * (2.0 * phi).cos() * (2.0 * mu).cos().powi(ts - 2)
    } else {
        0.0
    };
    sv * (2.0 * sv + 1.0 + middle - 4.0 * sv * phi.cos().powi(2) * mu.cos().powi(2 * ts - 2))
}

/// I_Φ for axis estimation at quarter turn, |SRU₂(π/2,Φ;μ)⟩:
/// S_M(2S_M+3 + (2S_M−1)cos2Φ·cos^{2S_P}μ − 4S_M cos²Φ·cos^{4S_P}(μ/2)).
pub fn qfi_axis(s_main: SpinLabel, s_probe: SpinLabel, phi: f64, mu: f64) -> f64 {
    let sm = s_main.spin();
    let tp = s_probe.twice_spin() as i32;
    sm * (2.0 * sm + 3.0
        + (2.0 * sm - 1.0) * (2.0 * phi).cos() * mu.cos().powi(tp)
        - 4.0 * sm * phi.cos().powi(2) * (mu / 2.0).cos().powi(2 * tp))
}

/// Axis/angle sum rule: I_Φ(γ=π/2) + I_γ = 4S_M(S_M+1 − S_M cos^{4S_P}(μ/2)),
/// independent of Φ.
pub fn sum_rule(s_main: SpinLabel, s_probe: SpinLabel, mu: f64) -> f64 {
    let sm = s_main.spin();
    let tp = s_probe.twice_spin() as i32;
    4.0 * sm * (sm + 1.0 - sm * (mu / 2.0).cos().powi(2 * tp))
}

/// Covariance entry of the two-rotation QFI matrix,
/// 4S_P S_M cosΦ₁cosΦ₂·cos^{2(S_P+S_M−1)}(μ/2)·sin²(μ/2), in generator
/// angles.
pub fn offdiag(s_main: SpinLabel, s_probe: SpinLabel, phi1: f64, phi2: f64, mu: f64) -> f64 {
    let sm = s_main.spin();
    let sp = s_probe.spin();
    let pow = (s_main.twice_spin() + s_probe.twice_spin()) as i32 - 2;
    4.0 * sp * sm * phi1.cos() * phi2.cos() * (mu / 2.0).cos().powi(pow) * (mu / 2.0).sin().powi(2)
}

/// Stationary maxima of sin²(μ/2)·cos^{4S−2}(μ/2) in (0, 2π) for equal
/// spins, and the attained value. The value is (2S−1)^{2S−1}/(2S)^{2S};
/// at S = 1/2 the factor degenerates to sin²(μ/2) with its maximum at π.
pub fn mu_max(s: SpinLabel) -> (Vec<f64>, f64) {
    let sv = s.spin();
    if s.twice_spin() == 1 {
        return (vec![std::f64::consts::PI], 1.0);
    }
    // tan²(μ/2) = 1/(2S−1)
    let mu1 = 2.0 * (1.0 / (2.0 * sv - 1.0).sqrt()).atan();
    let value = (2.0 * sv - 1.0).powi(s.twice_spin() as i32 - 1)
        / (2.0 * sv).powi(s.twice_spin() as i32);
    (vec![mu1, 2.0 * std::f64::consts::PI - mu1], value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn label(ts: u32) -> SpinLabel {
        SpinLabel::new(ts).unwrap()
    }

    #[test]
    fn sru2_gamma_paper_anchors() {
        let s5 = label(10);
        // mu = pi, integer probe: optimal axis value 4 S_M^2 = 100
        let vals: Vec<f64> = (0..50)
            .map(|i| qfi_sru2_gamma(s5, label(4), i as f64 * PI / 49.0, PI))
            .collect();
        let max = vals.iter().cloned().fold(f64::MIN, f64::max);
        let min = vals.iter().cloned().fold(f64::MAX, f64::min);
        assert_abs_diff_eq!(max, 100.0, epsilon = 1e-10);
        assert_abs_diff_eq!(min, 10.0, epsilon = 1e-10);
        // plateau at mu = pi/2, Phi = pi/4: (4S^2+2S)/2 = 55 up to 100*4^{-S_P}
        let plateau = qfi_sru2_gamma(s5, label(12), PI / 4.0, FRAC_PI_2);
        assert!((plateau - 55.0).abs() < 100.0 * 0.25f64.powi(6));
    }

    #[test]
    fn sru1_gamma_table_and_edge_spin() {
        // integer S at mu = pi/2: 4S^2 on X, 2S on Y
        let s2 = label(4);
        assert_abs_diff_eq!(qfi_sru1_gamma(s2, 0.0, FRAC_PI_2), 16.0, epsilon = 1e-12);
        assert_abs_diff_eq!(qfi_sru1_gamma(s2, FRAC_PI_2, FRAC_PI_2), 4.0, epsilon = 1e-12);
        // half-integer: axes interchange
        let s52 = label(5);
        assert_abs_diff_eq!(qfi_sru1_gamma(s52, FRAC_PI_2, FRAC_PI_2), 25.0, epsilon = 1e-12);
        assert_abs_diff_eq!(qfi_sru1_gamma(s52, 0.0, FRAC_PI_2), 5.0, epsilon = 1e-12);
        // S = 1/2: squeezing is a global phase, QFI = 2S sin^2 phi
        let shalf = label(1);
        for mu in [0.0, 0.3, FRAC_PI_2, 2.0] {
            assert_abs_diff_eq!(qfi_sru1_gamma(shalf, 0.7, mu), 0.7f64.sin().powi(2), epsilon = 1e-12);
        }
        // the single-spin mu = pi/4 plateau mirrors the two-spin mu = pi/2 one
        let s8 = label(16);
        let plateau = qfi_sru1_gamma(s8, 1.1, PI / 4.0);
        assert!((plateau - (4.0 * 64.0 + 2.0 * 8.0) / 2.0).abs() < 272.0 * 0.25f64.powi(8) + 1e-9);
    }

    #[test]
    fn axis_qfi_anchors() {
        let s5 = label(10);
        // max over Phi at mu = pi: 4 S_M^2 + 2 S_M = 110
        let max = (0..200)
            .map(|i| qfi_axis(s5, label(4), i as f64 * PI / 199.0, PI))
            .fold(f64::MIN, f64::max);
        assert_abs_diff_eq!(max, 110.0, epsilon = 1e-9);
    }

    #[test]
    fn sum_rule_is_phi_independent_identity() {
        let (sm, sp) = (label(6), label(4));
        let mu = 1.1;
        let want = sum_rule(sm, sp, mu);
        let mut spread: f64 = 0.0;
        for i in 0..50 {
            let phi = i as f64 * PI / 50.0;
            let total = qfi_axis(sm, sp, phi, mu) + qfi_sru2_gamma(sm, sp, phi, mu);
            spread = spread.max((total - want).abs());
        }
        assert!(spread < 1e-10);
        // anchors: mu = pi gives 4 S_M (S_M + 1); mu = 0 gives 4 S_M
        assert_abs_diff_eq!(sum_rule(label(10), sp, PI), 120.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sum_rule(label(10), sp, 0.0), 20.0, epsilon = 1e-12);
    }

    #[test]
    fn offdiag_zeros_and_value() {
        let s1 = label(2);
        // Phi1 = pi/2 kills the covariance
        assert_abs_diff_eq!(offdiag(s1, s1, FRAC_PI_2, 0.3, 1.0), 0.0, epsilon = 1e-15);
        // mu = 0 and mu = 2 pi both kill it
        assert_abs_diff_eq!(offdiag(s1, s1, 0.0, 0.0, 0.0), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(offdiag(s1, s1, 0.0, 0.0, 2.0 * PI), 0.0, epsilon = 1e-20);
        // S_M = S_P = 1, mu = pi/2, Phi1 = Phi2 = 0 -> 1
        assert_abs_diff_eq!(offdiag(s1, s1, 0.0, 0.0, FRAC_PI_2), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn mu_max_locations_and_values() {
        // S = 1/2: maximand sin^2(mu/2), max at pi with value 1
        let (locs, val) = mu_max(label(1));
        assert_eq!(locs, vec![PI]);
        assert_abs_diff_eq!(val, 1.0, epsilon = 1e-15);
        // S = 1: maxima at pi/2 and 3 pi/2, value 1/4
        let (locs, val) = mu_max(label(2));
        assert_abs_diff_eq!(locs[0], FRAC_PI_2, epsilon = 1e-12);
        assert_abs_diff_eq!(locs[1], 3.0 * FRAC_PI_2, epsilon = 1e-12);
        assert_abs_diff_eq!(val, 0.25, epsilon = 1e-15);
        // dense-grid cross-check of location and value for S in {1, 3/2, 2}
        for ts in [2u32, 3, 4] {
            let s = label(ts);
            let sv = s.spin();
            let f = |mu: f64| (mu / 2.0).sin().powi(2) * (mu / 2.0).cos().powi(2 * ts as i32 - 2);
            let n = 4_000_000;
            let (mut best, mut arg) = (f64::MIN, 0.0);
            for i in 1..n {
                let mu = i as f64 * 2.0 * PI / n as f64;
                let v = f(mu);
                if v > best {
                    best = v;
                    arg = mu;
                }
            }
            let (locs, val) = mu_max(s);
            assert!((arg - locs[0]).abs() < 1e-6 || (arg - locs[1]).abs() < 1e-6);
            assert_abs_diff_eq!(best, val, epsilon = 1e-9);
            let _ = sv;
        }
    }
}
