use super::{isometry_error, ChoiOperator};
use crate::error::{Error, Result};
use crate::qcore::linalg::*;
use crate::qcore::{
    binomial, lowering_on_sym, phi_plus, sym_dim, sym_isometry, sym_rep, symmetric_projector, CMat, CVec,
};

/// Optimal universal `N → M` cloner `ρ ↦ D(N,d)/D(M,d) Π⁺(ρ ⊗ I^{⊗(M−N)})Π⁺`.
///
/// The input space is `sym(N)` in the order of [`crate::qcore::sym_labels`]; the output is the
/// full `(C^d)^{⊗M}` so single clones can be read off by partial trace.
pub fn universal_nm_choi(d: usize, n: usize, m: usize) -> Result<ChoiOperator> {
    if n == 0 || m <= n || d < 2 {
        return Err(Error::Domain(format!("need M > N >= 1 and d >= 2 (got d={d}, N={n}, M={m})")));
    }
    total_dim(&vec![d; n + m])?;
    let pn = sym_isometry(d, n)?;
    let pm = symmetric_projector(d, m)?;
    let rest = d.pow((m - n) as u32);
    let d_in = pn.ncols();
    let d_out = d.pow(m as u32);
    let scale = (sym_dim(d, n) as f64 / sym_dim(d, m) as f64).sqrt();
    // K_i = c Π⁺ (P_N e_i ⊗ I): each output block is K_i K_j†.
    let ks: Vec<CMat> = (0..d_in)
        .map(|i| {
            let col = CMat::from_column_slice(pn.nrows(), 1, pn.column(i).as_slice());
            &pm * kron(&col, &identity(rest)) * cr(scale)
        })
        .collect();
    let mut s = CMat::zeros(d_in * d_out, d_in * d_out);
    for i in 0..d_in {
        for j in 0..d_in {
            s.view_mut((i * d_out, j * d_out), (d_out, d_out)).copy_from(&(&ks[i] * ks[j].adjoint()));
        }
    }
    ChoiOperator::new(d_in, vec![d; m], s)
}

/// Components of `ψ^{⊗N}` in the symmetric basis.
pub fn sym_power(psi: &CVec, n: usize) -> Result<CVec> {
    let p = sym_isometry(psi.len(), n)?;
    Ok(p.adjoint() * crate::qcore::tensor_power(psi, n))
}

/// Single-clone fidelity of the optimal universal `N → M` cloner.
pub fn universal_nm_fidelity(d: usize, n: usize, m: usize) -> f64 {
    let (d, n, m) = (d as f64, n as f64, m as f64);
    (m * n + m + n * (d - 1.0)) / (m * (n + d))
}

/// Global fidelity `D(N,d)/D(M,d)`.
pub fn universal_nm_global_fidelity(d: usize, n: usize, m: usize) -> f64 {
    sym_dim(d, n) as f64 / sym_dim(d, m) as f64
}

/// Shrinking factor `η = N(M+d) / (M(N+d))` of the single-clone Bloch vector.
pub fn universal_shrinking(d: usize, n: usize, m: usize) -> f64 {
    let (d, n, m) = (d as f64, n as f64, m as f64);
    n * (m + d) / (m * (n + d))
}

/// Coefficients `α_j = (−1)^j √(C(M−j,N) / C(M+1,M−N))`, `j = 0..=M−N`.
pub fn universal_qubit_alphas(n: usize, m: usize) -> Vec<f64> {
    let den = binomial((m + 1) as u64, (m - n) as u64) as f64;
    (0..=m - n)
        .map(|j| {
            let s = if j % 2 == 0 { 1.0 } else { -1.0 };
            s * (binomial((m - j) as u64, n as u64) as f64 / den).sqrt()
        })
        .collect()
}

/// Covariant qubit cloner `sym(N) → sym(M) ⊗ sym(M−N)` (clones ⊗ anti-clone ancilla):
/// `|Nψ⟩ ↦ Σ_j α_j |(M−j)ψ, jψ⊥⟩ |(M−N−j)ψ⊥, jψ⟩`.
///
/// Defined on `|N,0⟩` and extended to the rest of `sym(N)` with the collective lowering
/// operator, which commutes with the map by covariance.
pub fn universal_nm_qubit_isometry(n: usize, m: usize) -> Result<CMat> {
    if n == 0 || m <= n {
        return Err(Error::Domain(format!("need M > N >= 1 (got N={n}, M={m})")));
    }
    let k = m - n;
    let (dm, dk) = (m + 1, k + 1);
    let alphas = universal_qubit_alphas(n, m);
    let mut top = CVec::zeros(dm * dk);
    for (j, &a) in alphas.iter().enumerate() {
        top[j * dk + (k - j)] = cr(a);
    }
    let lower = kron(&lowering_on_sym(m), &identity(dk)) + kron(&identity(dm), &lowering_on_sym(k));
    let mut v = CMat::zeros(dm * dk, n + 1);
    let mut cur = top;
    for col in 0..=n {
        // J₋^col |N,0⟩ = √(col! N!/(N−col)!) |N,col⟩.
        let norm: f64 = (0..col).map(|i| ((i + 1) * (n - i)) as f64).product::<f64>().sqrt();
        v.set_column(col, &(&cur / cr(norm)));
        cur = &lower * cur;
    }
    Ok(v)
}

/// Reduced state of the `M` clones (as a density operator on `sym(M)`) and of the
/// `M−N` anti-clones, for input `ψ^{⊗N}`.
pub fn universal_nm_qubit_outputs(n: usize, m: usize, psi: &CVec) -> Result<(CMat, CMat)> {
    let v = universal_nm_qubit_isometry(n, m)?;
    let out = &v * sym_power(psi, n)?;
    let rho = projector(&out);
    let dims = [m + 1, m - n + 1];
    Ok((partial_trace(&rho, &dims, &[0])?, partial_trace(&rho, &dims, &[1])?))
}

/// `|ψ⟩ ↦ α|ψ⟩_A|Φ⁺⟩_{BC} + β|ψ⟩_B|Φ⁺⟩_{AC}` as a `d³ × d` matrix on `A ⊗ B ⊗ C`.
pub fn asym_universal_isometry(d: usize, alpha: f64, beta: f64) -> Result<CMat> {
    check_asym(d, alpha, beta)?;
    let phi = phi_plus(d).amps;
    let mut v = CMat::zeros(d * d * d, d);
    for j in 0..d {
        for a in 0..d {
            for b in 0..d {
                for cc in 0..d {
                    let mut amp = cr(0.0);
                    if a == j {
                        amp += phi[b * d + cc] * alpha;
                    }
                    if b == j {
                        amp += phi[a * d + cc] * beta;
                    }
                    v[((a * d + b) * d + cc, j)] = amp;
                }
            }
        }
    }
    Ok(v)
}

fn check_asym(d: usize, alpha: f64, beta: f64) -> Result<()> {
    if d < 2 || alpha < 0.0 || beta < 0.0 {
        return Err(Error::Domain(format!("need d >= 2 and α, β >= 0 (got d={d}, α={alpha}, β={beta})")));
    }
    let norm = alpha * alpha + beta * beta + 2.0 * alpha * beta / d as f64;
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::Domain(format!("α² + β² + 2αβ/d = {norm}, expected 1")));
    }
    Ok(())
}

/// Closed-form clone fidelities `F_A = 1 − (d−1)β²/d`, `F_B = 1 − (d−1)α²/d`.
pub fn asym_universal_fidelities(d: usize, alpha: f64, beta: f64) -> Result<(f64, f64)> {
    check_asym(d, alpha, beta)?;
    let k = (d as f64 - 1.0) / d as f64;
    Ok((1.0 - k * beta * beta, 1.0 - k * alpha * alpha))
}

/// `β` completing the normalization for a given `α ∈ [0, 1]`.
pub fn asym_universal_beta(d: usize, alpha: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) || d < 2 {
        return Err(Error::Domain(format!("α = {alpha} outside [0,1]")));
    }
    let df = d as f64;
    // β² + (2α/d) β + α² − 1 = 0, positive root.
    let b = alpha / df;
    Ok(-b + (b * b + 1.0 - alpha * alpha).sqrt())
}

/// Fidelities read off the isometry by partial trace for input `psi`.
pub fn asym_universal_machine_fidelities(d: usize, alpha: f64, beta: f64, psi: &CVec) -> Result<(f64, f64)> {
    let v = asym_universal_isometry(d, alpha, beta)?;
    debug_assert!(isometry_error(&v) < 1e-10);
    let out = projector(&(&v * psi));
    let ra = partial_trace(&out, &[d, d, d], &[0])?;
    let rb = partial_trace(&out, &[d, d, d], &[1])?;
    Ok((crate::qcore::expectation(&ra, psi), crate::qcore::expectation(&rb, psi)))
}

/// Optimal universal-NOT fidelity `(N+1)/(N+2)`.
pub fn unot_fidelity(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("U-NOT needs N >= 1".into()));
    }
    Ok((n as f64 + 1.0) / (n as f64 + 2.0))
}

/// Representation of a qubit unitary on `sym(m)`.
pub fn qubit_sym_rep(u: &CMat, m: usize) -> Result<CMat> {
    sym_rep(u, m)
}
