use crate::error::{Error, Result};
use crate::qcore::linalg::*;
use crate::qcore::{expectation, lowering_on_sym, raising_on_sym, sym_one_body_mixed, CMat, CVec};

/// `α_{j,M} = (−1)^j [1/√(2(M+1)) + √3 (M−2j)/√(2M(M+1)(M+2))]`, `j = 0..=M`.
pub fn orthopair_alphas(m: usize) -> Vec<f64> {
    let mf = m as f64;
    (0..=m)
        .map(|j| {
            let s = if j % 2 == 0 { 1.0 } else { -1.0 };
            let jf = j as f64;
            s * (1.0 / (2.0 * (mf + 1.0)).sqrt()
                + 3f64.sqrt() * (mf - 2.0 * jf) / (2.0 * mf * (mf + 1.0) * (mf + 2.0)).sqrt())
        })
        .collect()
}

/// Cloner of orthogonal qubit pairs, `C² ⊗ C² → sym(M) ⊗ sym(M)` (clones ⊗ anti-clones):
/// `|ψψ⊥⟩ ↦ Σ_j α_{j,M} |(M−j)ψ, jψ⊥⟩ |(M−j)ψ⊥, jψ⟩`.
///
/// Built from the image of `|01⟩`; `|10⟩` follows from the SU(2) element mapping
/// `|0⟩ → |1⟩ → −|0⟩`, and `|00⟩`, `|11⟩` from the collective raising and lowering operators.
pub fn orthopair_cloner(m: usize) -> Result<CMat> {
    if m < 2 {
        return Err(Error::Domain(format!("orthopair cloner needs M >= 2 (got {m})")));
    }
    let dm = m + 1;
    let alphas = orthopair_alphas(m);
    let mut v01 = CVec::zeros(dm * dm);
    for (j, &a) in alphas.iter().enumerate() {
        v01[j * dm + (m - j)] = cr(a);
    }
    // (U ⊗ U)|01⟩ = −|10⟩ with U|0⟩ = |1⟩, U|1⟩ = −|0⟩; on sym(M): |M,k⟩ ↦ (−1)^k |M,M−k⟩.
    let um = CMat::from_fn(dm, dm, |r, k| if r == m - k { cr(if k % 2 == 0 { 1.0 } else { -1.0 }) } else { cr(0.0) });
    let v10 = -(kron(&um, &um) * &v01);
    let plus = (&v01 + &v10) / cr(2f64.sqrt());
    let lower = kron(&lowering_on_sym(m), &identity(dm)) + kron(&identity(dm), &lowering_on_sym(m));
    let raise = kron(&raising_on_sym(m), &identity(dm)) + kron(&identity(dm), &raising_on_sym(m));
    let v00 = &raise * &plus / cr(2f64.sqrt());
    let v11 = &lower * &plus / cr(2f64.sqrt());
    let mut v = CMat::zeros(dm * dm, 4);
    v.set_column(0, &v00);
    v.set_column(1, &v01);
    v.set_column(2, &v10);
    v.set_column(3, &v11);
    Ok(v)
}

/// Clone and anti-clone fidelities for the input pair `|ψ, ψ⊥⟩`.
pub fn orthopair_fidelities(m: usize, psi: &CVec) -> Result<(f64, f64)> {
    let v = orthopair_cloner(m)?;
    let perp = CVec::from_vec(vec![-psi[1].conj(), psi[0].conj()]);
    let out = projector(&(&v * kron_vec(psi, &perp)));
    let dims = [m + 1, m + 1];
    let clones = sym_one_body_mixed(2, m, &partial_trace(&out, &dims, &[0])?)?;
    let anti = sym_one_body_mixed(2, m, &partial_trace(&out, &dims, &[1])?)?;
    Ok((expectation(&clones, psi), expectation(&anti, &perp)))
}

/// `F_⊥(M) = (1 + √((M+2)/(3M)))/2`.
pub fn orthopair_fidelity_formula(m: usize) -> f64 {
    let mf = m as f64;
    0.5 * (1.0 + ((mf + 2.0) / (3.0 * mf)).sqrt())
}

/// Single-clone fidelity of the best cloner fed with two parallel copies, `(3M+2)/(4M)`.
pub fn parallel_pair_fidelity(m: usize) -> f64 {
    let mf = m as f64;
    (3.0 * mf + 2.0) / (4.0 * mf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cloners::isometry_error;
    use crate::qcore::{qubit, sym_rep};
    use rand::SeedableRng;

    #[test]
    fn alphas_normalized() {
        for m in 2..15 {
            let s: f64 = orthopair_alphas(m).iter().map(|a| a * a).sum();
            assert!((s - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn isometry_and_covariance() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for m in 2..8 {
            let v = orthopair_cloner(m).unwrap();
            assert!(isometry_error(&v) < 1e-12, "M={m}");
            let mut u = random_unitary(2, &mut rng);
            let det = u[(0, 0)] * u[(1, 1)] - u[(0, 1)] * u[(1, 0)];
            u /= det.sqrt();
            let um = sym_rep(&u, m).unwrap();
            let lhs = &v * kron(&u, &u);
            let rhs = kron(&um, &um) * &v;
            assert!(max_abs(&(lhs - rhs)) < 1e-12, "M={m}");
        }
    }

    #[test]
    fn fidelities_match_formula() {
        for m in 2..10 {
            let psi = qubit(1.1, 0.3);
            let (f, fa) = orthopair_fidelities(m, &psi).unwrap();
            let want = orthopair_fidelity_formula(m);
            assert!((f - want).abs() < 1e-12 && (fa - want).abs() < 1e-12, "M={m}: {f} {fa} {want}");
        }
        assert!((orthopair_fidelity_formula(2) - 0.5 * (1.0 + (2.0f64 / 3.0).sqrt())).abs() < 1e-15);
    }
}
