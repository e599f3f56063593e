//! Objective operators `R` with `F = Tr[S R]` for a Choi operator `S`, plus the
//! registry of closed-form fidelities.
//!
//! For an input ensemble `{w_k, ψ_k}` and output test operators `O_k`,
//! `R = Σ_k w_k ψ_k* ψ_kᵀ ⊗ O_k`, since `Tr[S (ρᵀ ⊗ O)] = Tr[𝒮(ρ) O]`.
//! Haar averages use `∫ ψ ψ† ⊗ ψ ψ† dψ = (I + SWAP)/(d(d+1))`; its partial transpose
//! on the first factor is `(I + d Φ⁺)/(d(d+1))` with `Φ⁺` the normalized Bell projector.
//! Phase averages over balanced states use a uniform grid per phase, which is exact
//! because every entry is a trigonometric polynomial of degree at most two per phase.

mod registry;

pub use registry::*;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::linalg::*;
use crate::qcore::{
    balanced_state, basis_ket, phi_plus, sym_dim, sym_hopping, sym_isometry, symmetric_projector, CMat, CVec,
};

/// What an objective operator measures.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "p")]
pub enum ObjectiveKind {
    SingleCloneA,
    SingleCloneB,
    SingleCloneSym,
    Global,
    Unot,
    Convex(f64),
}

/// Which clone of a 1→2 machine an objective rewards.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Which {
    A,
    B,
    Sym,
    Convex(f64),
}

impl Which {
    /// Weight `p` of clone A in `p F_A + (1−p) F_B`.
    pub fn weight(self) -> Result<f64> {
        let p = match self {
            Which::A => 1.0,
            Which::B => 0.0,
            Which::Sym => 0.5,
            Which::Convex(p) => p,
        };
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("clone weight p = {p} outside [0,1]")));
        }
        Ok(p)
    }

    fn kind(self) -> ObjectiveKind {
        match self {
            Which::A => ObjectiveKind::SingleCloneA,
            Which::B => ObjectiveKind::SingleCloneB,
            Which::Sym => ObjectiveKind::SingleCloneSym,
            Which::Convex(p) => ObjectiveKind::Convex(p),
        }
    }
}

/// Objective operator on `in ⊗ out`.
#[derive(Clone, Debug)]
pub struct RObjective {
    pub d_in: usize,
    pub out_dims: Vec<usize>,
    pub r: CMat,
    pub kind: ObjectiveKind,
}

impl RObjective {
    pub fn d_out(&self) -> usize {
        self.out_dims.iter().product()
    }

    pub fn max_eigenvalue(&self) -> f64 {
        max_eig(&self.r)
    }

    pub fn spectrum(&self) -> Vec<f64> {
        eigvals_h(&self.r)
    }

    /// `p R_self + (1−p) R_other` for objectives on the same space.
    pub fn mix(&self, other: &RObjective, p: f64) -> Result<RObjective> {
        if self.d_in != other.d_in || self.out_dims != other.out_dims {
            return Err(Error::Dimension("mixing objectives on different spaces".into()));
        }
        Ok(RObjective {
            d_in: self.d_in,
            out_dims: self.out_dims.clone(),
            r: &self.r * cr(p) + &other.r * cr(1.0 - p),
            kind: ObjectiveKind::Convex(p),
        })
    }
}

/// `Σ_k w_k ψ_k* ψ_kᵀ ⊗ O_k`.
pub fn ensemble_objective(items: &[(f64, CVec, CMat)]) -> CMat {
    let (_, psi0, o0) = &items[0];
    let n = psi0.len() * o0.nrows();
    let mut r = CMat::zeros(n, n);
    for (w, psi, o) in items {
        let rho_t = psi.conjugate() * psi.transpose();
        r += kron(&rho_t, o) * cr(*w);
    }
    hermitian_part(&r)
}

/// Clone-weighted test operator `p ψψ† ⊗ I + (1−p) I ⊗ ψψ†` on two clones.
fn two_clone_test(psi: &CVec, p: f64) -> CMat {
    let d = psi.len();
    let pr = projector(psi);
    kron(&pr, &identity(d)) * cr(p) + kron(&identity(d), &pr) * cr(1.0 - p)
}

/// Haar-averaged 1→2 objective in closed form:
/// `R(p) = [I + d p Φ⁺_{in,A} ⊗ I_B + d (1−p) Φ⁺_{in,B} ⊗ I_A] / (d(d+1))`.
pub fn r_universal(d: usize, which: Which) -> Result<RObjective> {
    let p = which.weight()?;
    total_dim(&[d, d, d])?;
    let df = d as f64;
    let phi = projector(&phi_plus(d).amps);
    let on_a = kron(&phi, &identity(d));
    // Φ⁺ on (in, B): conjugate by the swap of A and B.
    let swap_ab = permutation_matrix(&[d, d, d], &[0, 2, 1])?;
    let on_b = &swap_ab * &on_a * swap_ab.adjoint();
    let r = (identity(d * d * d) + on_a * cr(df * p) + on_b * cr(df * (1.0 - p))) * cr(1.0 / (df * (df + 1.0)));
    Ok(RObjective { d_in: d, out_dims: vec![d, d], r, kind: which.kind() })
}

/// Monte Carlo estimate of [`r_universal`] from Haar-random states.
pub fn r_universal_monte_carlo(d: usize, which: Which, samples: usize, seed: u64) -> Result<RObjective> {
    let p = which.weight()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = 1.0 / samples as f64;
    let items: Vec<_> = (0..samples)
        .map(|_| {
            let psi = random_ket(d, &mut rng);
            let o = two_clone_test(&psi, p);
            (w, psi, o)
        })
        .collect();
    Ok(RObjective { d_in: d, out_dims: vec![d, d], r: ensemble_objective(&items), kind: which.kind() })
}

fn phase_grid(d: usize, points: usize) -> Vec<CVec> {
    let count = points.pow((d - 1) as u32);
    (0..count)
        .map(|mut k| {
            let mut phases = vec![0.0; d - 1];
            for ph in phases.iter_mut() {
                *ph = 2.0 * std::f64::consts::PI * (k % points) as f64 / points as f64;
                k /= points;
            }
            balanced_state(&phases)
        })
        .collect()
}

/// Objective averaged over balanced states `(1/√d) Σ e^{iφ_j}|j⟩` using `points` phases per
/// free phase. Any `points >= 3` gives the exact continuous average.
pub fn r_phase_grid(d: usize, which: Which, points: usize) -> Result<RObjective> {
    let p = which.weight()?;
    if d < 2 || points < 3 {
        return Err(Error::Domain(format!("phase objective needs d >= 2 and >= 3 grid points (d={d}, points={points})")));
    }
    total_dim(&[d, d, d])?;
    let states = phase_grid(d, points);
    let w = 1.0 / states.len() as f64;
    let items: Vec<_> = states.into_iter().map(|psi| (w, psi.clone(), two_clone_test(&psi, p))).collect();
    Ok(RObjective { d_in: d, out_dims: vec![d, d], r: ensemble_objective(&items), kind: which.kind() })
}

/// Phase-covariant objective (4 grid points per phase).
pub fn r_phase(d: usize, which: Which) -> Result<RObjective> {
    r_phase_grid(d, which, 4)
}

/// Objective averaged over the computational basis and its Fourier transform, each with weight 1/2.
pub fn r_fourier(d: usize, which: Which) -> Result<RObjective> {
    let p = which.weight()?;
    if d < 2 {
        return Err(Error::Domain(format!("dimension {d} < 2")));
    }
    total_dim(&[d, d, d])?;
    let w = 1.0 / (2.0 * d as f64);
    let mut items = Vec::with_capacity(2 * d);
    for k in 0..d {
        let e = basis_ket(d, k);
        items.push((w, e.clone(), two_clone_test(&e, p)));
        let phases: Vec<f64> = (1..d).map(|j| 2.0 * std::f64::consts::PI * (j * k) as f64 / d as f64).collect();
        let f = balanced_state(&phases);
        items.push((w, f.clone(), two_clone_test(&f, p)));
    }
    Ok(RObjective { d_in: d, out_dims: vec![d, d], r: ensemble_objective(&items), kind: which.kind() })
}

/// Single-clone objective for universal 1→M cloning into `sym(M)`, from the Haar
/// fourth moment in second quantization:
/// `R = [M I + Σ_{c,e} |c⟩⟨e| ⊗ a_c† a_e] / (M d (d+1))`.
pub fn r_sc(d: usize, m: usize) -> Result<RObjective> {
    if d < 2 || m < 1 {
        return Err(Error::Domain(format!("needs d >= 2 and M >= 1 (d={d}, M={m})")));
    }
    let ds = sym_dim(d, m);
    check_dim(d * ds)?;
    let mf = m as f64;
    let mut r = identity(d * ds) * cr(mf);
    for c in 0..d {
        for e in 0..d {
            let mut unit = CMat::zeros(d, d);
            unit[(c, e)] = cr(1.0);
            r += kron(&unit, &sym_hopping(d, m, c, e));
        }
    }
    let r = r * cr(1.0 / (mf * (d * (d + 1)) as f64));
    Ok(RObjective { d_in: d, out_dims: vec![ds], r, kind: ObjectiveKind::SingleCloneSym })
}

/// [`r_sc`] for qubits.
pub fn r_sc_qubit_1m(m: usize) -> Result<RObjective> {
    if m < 2 {
        return Err(Error::Domain(format!("needs M >= 2 (got {m})")));
    }
    r_sc(2, m)
}

/// Global objective `R_G = Π⁺_{M+1}^{T₁} / D(M+1, d)` restricted to `C^d ⊗ sym(M)`.
pub fn r_global(d: usize, m: usize) -> Result<RObjective> {
    if d < 2 || m < 1 {
        return Err(Error::Domain(format!("needs d >= 2 and M >= 1 (d={d}, M={m})")));
    }
    let dims = vec![d; m + 1];
    let pi = symmetric_projector(d, m + 1)?;
    let pt = partial_transpose(&pi, &dims, &[0])?;
    let iso = kron(&identity(d), &sym_isometry(d, m)?);
    let r = iso.adjoint() * pt * &iso * cr(1.0 / sym_dim(d, m + 1) as f64);
    Ok(RObjective { d_in: d, out_dims: vec![sym_dim(d, m)], r: hermitian_part(&r), kind: ObjectiveKind::Global })
}

/// [`r_global`] for qubits.
pub fn r_global_qubit_1m(m: usize) -> Result<RObjective> {
    if m < 2 {
        return Err(Error::Domain(format!("needs M >= 2 (got {m})")));
    }
    r_global(2, m)
}

/// Universal-NOT objective on `sym(N) ⊗ C²`:
/// `R = (I^{⊗N} ⊗ ε) Π⁺_{N+1} (I^{⊗N} ⊗ ε†) / (N+2)` with `ε|ψ*⟩ = |ψ⊥⟩`.
pub fn r_unot(n: usize) -> Result<RObjective> {
    if n < 1 {
        return Err(Error::Domain("U-NOT needs N >= 1".into()));
    }
    let eps = CMat::from_row_slice(2, 2, &[cr(0.0), cr(-1.0), cr(1.0), cr(0.0)]);
    let pi = symmetric_projector(2, n + 1)?;
    let rot = kron(&identity(1 << n), &eps);
    let iso = kron(&sym_isometry(2, n)?, &identity(2));
    let r = iso.adjoint() * &rot * pi * rot.adjoint() * &iso * cr(1.0 / (n as f64 + 2.0));
    Ok(RObjective { d_in: n + 1, out_dims: vec![2], r: hermitian_part(&r), kind: ObjectiveKind::Unot })
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// Product rule on the Bloch sphere: `n` Gauss-Legendre nodes in `cos θ` times `2n`
/// equally spaced azimuths. Weights sum to one; exact for polynomials of degree `< 2n`
/// in the state amplitudes and their conjugates.
pub fn qubit_sphere_rule(n: usize) -> Vec<(f64, CVec)> {
    let gl = gauss_legendre(n);
    let na = 2 * n;
    let mut out = Vec::with_capacity(n * na);
    for &(x, w) in &gl {
        let theta = x.acos();
        for k in 0..na {
            let phi = 2.0 * std::f64::consts::PI * k as f64 / na as f64;
            out.push((w / (2.0 * na as f64), crate::qcore::qubit(theta, phi)));
        }
    }
    out
}

/// One-clone test operator `(1/M) Σ_{a,b} ψ_a ψ_b* a_a† a_b` on `sym(M)`.
pub fn sym_clone_test(psi: &CVec, m: usize) -> CMat {
    let d = psi.len();
    let ds = sym_dim(d, m);
    let mut o = CMat::zeros(ds, ds);
    for a in 0..d {
        for b in 0..d {
            o += sym_hopping(d, m, a, b) * (psi[a] * psi[b].conj());
        }
    }
    o * cr(1.0 / m as f64)
}

/// Objective for cloning an orthogonal qubit pair `|ψ⟩|ψ⊥⟩` into `M` clones and `M`
/// anti-clones (output `sym(M) ⊗ sym(M)`), averaging clone and anti-clone fidelity.
pub fn r_orthopair(m: usize) -> Result<RObjective> {
    if m < 2 {
        return Err(Error::Domain(format!("needs M >= 2 (got {m})")));
    }
    let dm = m + 1;
    check_dim(4 * dm * dm)?;
    let items: Vec<_> = qubit_sphere_rule(8)
        .into_iter()
        .map(|(w, psi)| {
            let perp = CVec::from_vec(vec![-psi[1].conj(), psi[0].conj()]);
            let o = (kron(&sym_clone_test(&psi, m), &identity(dm)) + kron(&identity(dm), &sym_clone_test(&perp, m)))
                * cr(0.5);
            (w, kron_vec(&psi, &perp), o)
        })
        .collect();
    Ok(RObjective { d_in: 4, out_dims: vec![dm, dm], r: ensemble_objective(&items), kind: ObjectiveKind::SingleCloneSym })
}
