use serde::{Deserialize, Serialize};

use super::ChoiOperator;
use crate::error::{Error, Result};
use crate::qcore::linalg::*;
use crate::qcore::{balanced_state, binomial, expectation, sym_one_body, CMat, CVec, C64};

/// The three 1 → 2 qubit phase-covariant maps.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Pc12Variant {
    /// Symmetric cloner with a one-qubit ancilla; output `A ⊗ B ⊗ C`.
    Ancilla,
    /// Ancilla-free symmetric cloner; output `A ⊗ B`.
    Economical,
    /// Ancilla-free asymmetric cloner `|10⟩ ↦ cos ϑ|01⟩ + sin ϑ|10⟩`, `ϑ ∈ [0, π/2]`.
    Asymmetric(f64),
}

/// Matrix of the map and its output subsystem dimensions (clones first).
pub fn pc_qubit_12_isometry(variant: Pc12Variant) -> Result<(CMat, Vec<usize>)> {
    let h = 0.5;
    let s = 0.5f64.sqrt();
    match variant {
        Pc12Variant::Ancilla => {
            let mut v = CMat::zeros(8, 2);
            v[(0b000, 0)] = cr(s);
            v[(0b011, 0)] = cr(h);
            v[(0b101, 0)] = cr(h);
            v[(0b111, 1)] = cr(s);
            v[(0b010, 1)] = cr(h);
            v[(0b100, 1)] = cr(h);
            Ok((v, vec![2, 2, 2]))
        }
        Pc12Variant::Economical => pc_qubit_12_isometry(Pc12Variant::Asymmetric(std::f64::consts::FRAC_PI_4)),
        Pc12Variant::Asymmetric(theta) => {
            if !(-1e-12..=std::f64::consts::FRAC_PI_2 + 1e-12).contains(&theta) {
                return Err(Error::Domain(format!("ϑ = {theta} outside [0, π/2]")));
            }
            let mut v = CMat::zeros(4, 2);
            v[(0b00, 0)] = cr(1.0);
            v[(0b01, 1)] = cr(theta.cos());
            v[(0b10, 1)] = cr(theta.sin());
            Ok((v, vec![2, 2]))
        }
    }
}

/// Fidelities of clones A and B for input `psi`.
pub fn pc_qubit_12_fidelities(variant: Pc12Variant, psi: &CVec) -> Result<(f64, f64)> {
    let (v, dims) = pc_qubit_12_isometry(variant)?;
    let out = projector(&(&v * psi));
    let ra = partial_trace(&out, &dims, &[0])?;
    let rb = partial_trace(&out, &dims, &[1])?;
    Ok((expectation(&ra, psi), expectation(&rb, psi)))
}

/// Shifts `L` available for `N → M`: one when `M − N` is even, two otherwise.
pub fn pc_nm_shifts(n: usize, m: usize) -> Result<Vec<usize>> {
    if n == 0 || m <= n {
        return Err(Error::Domain(format!("need M > N >= 1 (got N={n}, M={m})")));
    }
    let k = m - n;
    Ok(if k % 2 == 0 { vec![k / 2] } else { vec![(k - 1) / 2, (k + 1) / 2] })
}

/// Economical phase-covariant map `|N,j⟩ ↦ |M,j+L⟩` on qubit symmetric spaces.
pub fn pc_qubit_nm_map(n: usize, m: usize, shift: usize) -> Result<CMat> {
    if n == 0 || m <= n {
        return Err(Error::Domain(format!("need M > N >= 1 (got N={n}, M={m})")));
    }
    if shift + n > m {
        return Err(Error::Domain(format!("shift {shift} too large for N={n}, M={m}")));
    }
    let mut v = CMat::zeros(m + 1, n + 1);
    for j in 0..=n {
        v[(j + shift, j)] = cr(1.0);
    }
    Ok(v)
}

/// Components of an equatorial product state `((|0⟩ + e^{iφ}|1⟩)/√2)^{⊗N}` on `sym(N)`.
pub fn equatorial_sym_state(n: usize, phi: f64) -> CVec {
    let s = 2f64.powi(n as i32).sqrt();
    CVec::from_fn(n + 1, |j, _| C64::from_polar((binomial(n as u64, j as u64) as f64).sqrt() / s, phi * j as f64))
}

/// Single-clone fidelity of `pc_qubit_nm_map` for the equatorial input with phase `phi`.
pub fn pc_qubit_nm_fidelity(n: usize, m: usize, shift: usize, phi: f64) -> Result<f64> {
    let v = pc_qubit_nm_map(n, m, shift)?;
    let out = v * equatorial_sym_state(n, phi);
    let rho = sym_one_body(2, m, &out)?;
    Ok(expectation(&rho, &balanced_state(&[phi])))
}

/// Choi operator of the mixture `w·S_L + (1−w)·S_{L+1}` of the two maps available when
/// `M − N` is odd (for even `M − N` both weights refer to the single map).
pub fn pc_qubit_nm_mixture(n: usize, m: usize, w: f64) -> Result<ChoiOperator> {
    if !(0.0..=1.0).contains(&w) {
        return Err(Error::Domain(format!("mixing weight {w} outside [0,1]")));
    }
    let shifts = pc_nm_shifts(n, m)?;
    let first = ChoiOperator::from_isometry(&pc_qubit_nm_map(n, m, shifts[0])?, vec![m + 1], 1)?;
    let last = ChoiOperator::from_isometry(&pc_qubit_nm_map(n, m, *shifts.last().unwrap())?, vec![m + 1], 1)?;
    ChoiOperator::new(n + 1, vec![m + 1], first.s * cr(w) + last.s * cr(1.0 - w))
}

/// Closed-form single-clone fidelity of the phase-covariant `N → M` qubit cloner.
pub fn pc_nm_fidelity_formula(n: usize, m: usize) -> Result<f64> {
    if n == 0 || m <= n {
        return Err(Error::Domain(format!("need M > N >= 1 (got N={n}, M={m})")));
    }
    let (nf, mf) = (n as f64, m as f64);
    let pair = |j: usize| ((binomial(n as u64, j as u64) * binomial(n as u64, j as u64 + 1)) as f64).sqrt();
    if (m - n) % 2 == 0 {
        let l = ((m - n) / 2) as f64;
        let s: f64 = (0..n)
            .map(|j| {
                let jf = j as f64;
                pair(j) * ((nf + l - jf) * (l + jf + 1.0)).sqrt()
            })
            .sum();
        Ok(0.5 + s / (mf * 2f64.powi(n as i32)))
    } else {
        let l = ((m - n - 1) / 2) as f64;
        let s: f64 = (0..n)
            .map(|j| {
                let jf = j as f64;
                pair(j)
                    * (((nf + l - jf + 1.0) * (l + jf + 1.0)).sqrt() + ((l + jf + 2.0) * (nf + l - jf)).sqrt())
            })
            .sum();
        Ok(0.5 + s / (mf * 2f64.powi(n as i32 + 1)))
    }
}

/// Closed-form `1 → M` qubit phase-covariant fidelity.
pub fn pc_1m_fidelity_formula(m: usize) -> Result<f64> {
    if m < 2 {
        return Err(Error::Domain(format!("need M >= 2 (got {m})")));
    }
    let mf = m as f64;
    Ok(if m % 2 == 0 { 0.5 + (mf * (mf + 2.0)).sqrt() / (4.0 * mf) } else { 0.5 + (mf + 1.0) / (4.0 * mf) })
}

/// `(α, β)` of the qudit phase-covariant cloner.
pub fn pc_qudit_alpha_beta(d: usize) -> (f64, f64) {
    let df = d as f64;
    let r = (df * df + 4.0 * df - 4.0).sqrt();
    let t = (df - 2.0) / (2.0 * r);
    ((0.5 - t).sqrt(), (0.5 + t).sqrt())
}

/// `|j⟩ ↦ α|jj⟩|j⟩ + β/√(2(d−1)) Σ_{l≠j} (|jl⟩ + |lj⟩)|l⟩` on `A ⊗ B ⊗ C`.
pub fn pc_qudit_12_isometry(d: usize) -> Result<CMat> {
    if d < 2 {
        return Err(Error::Domain(format!("dimension {d} < 2")));
    }
    total_dim(&[d, d, d])?;
    let (alpha, beta) = pc_qudit_alpha_beta(d);
    let g = beta / (2.0 * (d as f64 - 1.0)).sqrt();
    let idx = |a: usize, b: usize, cc: usize| (a * d + b) * d + cc;
    let mut v = CMat::zeros(d * d * d, d);
    for j in 0..d {
        v[(idx(j, j, j), j)] = cr(alpha);
        for l in (0..d).filter(|&l| l != j) {
            v[(idx(j, l, l), j)] += cr(g);
            v[(idx(l, j, l), j)] += cr(g);
        }
    }
    Ok(v)
}

/// Closed-form equatorial fidelity `1/4 + 1/(2d) + √(d²+4d−4)/(4d)`.
pub fn pc_qudit_fidelity_formula(d: usize) -> f64 {
    let df = d as f64;
    0.25 + 1.0 / (2.0 * df) + (df * df + 4.0 * df - 4.0).sqrt() / (4.0 * df)
}

/// Clone fidelities of the qudit cloner for a balanced input with the given relative phases.
pub fn pc_qudit_12_fidelities(d: usize, phases: &[f64]) -> Result<(f64, f64)> {
    if phases.len() + 1 != d {
        return Err(Error::Dimension(format!("{} phases for d={d}", phases.len())));
    }
    let v = pc_qudit_12_isometry(d)?;
    let psi = balanced_state(phases);
    let out = projector(&(&v * &psi));
    let ra = partial_trace(&out, &[d, d, d], &[0])?;
    let rb = partial_trace(&out, &[d, d, d], &[1])?;
    Ok((expectation(&ra, &psi), expectation(&rb, &psi)))
}
