use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::ChoiOperator;
use crate::error::{Error, Result};
use crate::qcore::linalg::*;
use crate::qcore::{bell_state, gamma_pow, BellIndex, CMat, CVec, KetVector};

/// Coefficient matrix `a_{m,n}` of a double-Bell (Heisenberg) cloner.
#[derive(Clone, Debug, PartialEq)]
pub struct AnsatzMatrix {
    pub d: usize,
    pub a: CMat,
}

impl AnsatzMatrix {
    pub fn new(d: usize, a: CMat) -> Result<Self> {
        if a.nrows() != d || a.ncols() != d || d < 2 {
            return Err(Error::Dimension(format!("ansatz must be {d}x{d}")));
        }
        let norm: f64 = a.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::Invalid(format!("ansatz norm² is {norm}, expected 1")));
        }
        Ok(Self { d, a })
    }

    pub fn from_real(d: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        Self::new(d, CMat::from_fn(d, d, |m, n| cr(f(m, n))))
    }

    /// Error probabilities `|a_{m,n}|²` of the channel feeding clone A.
    pub fn error_probs(&self) -> DMatrix<f64> {
        self.a.map(|z| z.norm_sqr())
    }
}

/// Families of Heisenberg cloners distinguished by the set of input states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HeisenbergFamily {
    Universal,
    Fourier,
    Phase,
}

impl HeisenbergFamily {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "universal" => Ok(Self::Universal),
            "fourier" => Ok(Self::Fourier),
            "phase" => Ok(Self::Phase),
            _ => Err(Error::Unknown(format!("Heisenberg family '{s}'"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Universal => "universal",
            Self::Fourier => "fourier",
            Self::Phase => "phase",
        }
    }
}

/// `|𝒜⟩ = Σ a_{m,n} B_{m,n}(in,A) ⊗ B_{m,-n}(B,C)` on four qudits ordered `in, A, B, C`.
pub fn heisenberg_ansatz_state(a: &AnsatzMatrix) -> KetVector {
    let d = a.d;
    let mut amps = CVec::zeros(d.pow(4));
    for idx in BellIndex::all(d) {
        let coef = a.a[(idx.m, idx.n)];
        if coef == cr(0.0) {
            continue;
        }
        let left = bell_state(idx).amps;
        let right = bell_state(BellIndex::wrapped(idx.m as i64, -(idx.n as i64), d)).amps;
        amps += kron_vec(&left, &right) * coef;
    }
    KetVector { dims: vec![d; 4], amps }
}

/// Choi operator `S = d·Tr_C |𝒜⟩⟨𝒜|` on `in ⊗ A ⊗ B`.
pub fn heisenberg_choi(a: &AnsatzMatrix) -> Result<ChoiOperator> {
    let d = a.d;
    total_dim(&[d, d, d, d])?;
    let state = heisenberg_ansatz_state(a);
    let s = partial_trace(&projector(&state.amps), &state.dims, &[0, 1, 2])? * cr(d as f64);
    ChoiOperator::new(d, vec![d, d], s)
}

/// `b_{m,n} = (1/d) Σ_{x,y} γ^{nx − my} a_{x,y}`: the coefficients governing clone B.
pub fn fourier_dual(a: &AnsatzMatrix) -> AnsatzMatrix {
    let d = a.d;
    let mut b = CMat::zeros(d, d);
    for m in 0..d {
        for n in 0..d {
            let mut s = cr(0.0);
            for x in 0..d {
                for y in 0..d {
                    s += gamma_pow(d, (n * x) as i64 - (m * y) as i64) * a.a[(x, y)];
                }
            }
            b[(m, n)] = s / cr(d as f64);
        }
    }
    AnsatzMatrix { d, a: b }
}

/// Family average of `|⟨ψ|E_{m,n}|ψ⟩|²`, so that the mean fidelity of clone A is
/// `Σ w_{m,n} |a_{m,n}|²`.
pub fn family_weights(family: HeisenbergFamily, d: usize) -> DMatrix<f64> {
    DMatrix::from_fn(d, d, |m, n| {
        if m == 0 && n == 0 {
            return 1.0;
        }
        match family {
            // Haar average of |⟨ψ|E|ψ⟩|² for traceless unitary E.
            HeisenbergFamily::Universal => 1.0 / (d as f64 + 1.0),
            // Balanced states: shifts average to 1/d, pure phase errors never pass.
            HeisenbergFamily::Phase => {
                if m == 0 {
                    0.0
                } else {
                    1.0 / d as f64
                }
            }
            // Computational basis passes E_{0,n}; the dual basis passes E_{m,0}.
            HeisenbergFamily::Fourier => {
                0.5 * (f64::from(u8::from(m == 0)) + f64::from(u8::from(n == 0)))
            }
        }
    })
}

/// Mean fidelities `(F_A, F_B)` of a Heisenberg cloner over a family's input set.
pub fn family_fidelities(family: HeisenbergFamily, a: &AnsatzMatrix) -> (f64, f64) {
    let w = family_weights(family, a.d);
    let b = fourier_dual(a);
    let fa = a.error_probs().component_mul(&w).sum();
    let fb = b.error_probs().component_mul(&w).sum();
    (fa, fb)
}

fn check_fa(d: usize, fa: f64) -> Result<()> {
    if d < 2 {
        return Err(Error::Domain(format!("dimension {d} < 2")));
    }
    let lo = 1.0 / d as f64;
    if !(fa >= lo - 1e-12 && fa <= 1.0 + 1e-12) {
        return Err(Error::Domain(format!("F_A = {fa} outside [1/d, 1] = [{lo}, 1]")));
    }
    Ok(())
}

/// Universal cloner with clone-A fidelity `fa`: `a_{m,n} = (v − x)δ_{m0}δ_{n0} + x`.
pub fn universal_ansatz(d: usize, fa: f64) -> Result<AnsatzMatrix> {
    check_fa(d, fa)?;
    let df = d as f64;
    let x = ((1.0 - fa) / (df * (df - 1.0))).max(0.0).sqrt();
    let v = (((df + 1.0) * fa - 1.0) / df).max(0.0).sqrt();
    AnsatzMatrix::from_real(d, |m, n| if m == 0 && n == 0 { v } else { x })
}

/// Fourier-covariant cloner: `a_{00} = v`, `a_{0n} = a_{m0} = x`, all other entries `y`.
pub fn fourier_ansatz(d: usize, fa: f64) -> Result<AnsatzMatrix> {
    check_fa(d, fa)?;
    let df = d as f64;
    let fa = fa.min(1.0);
    let v = fa;
    let x = (fa * (1.0 - fa) / (df - 1.0)).max(0.0).sqrt();
    let y = (1.0 - fa) / (df - 1.0);
    AnsatzMatrix::from_real(d, |m, n| match (m, n) {
        (0, 0) => v,
        (0, _) | (_, 0) => x,
        _ => y,
    })
}

/// `(v, x, y)` of a phase-covariant ansatz: row 0 is `(v, y, …, y)`, every other entry `x`.
pub fn phase_matrix(d: usize, v: f64, x: f64, y: f64) -> CMat {
    CMat::from_fn(d, d, |m, n| match (m, n) {
        (0, 0) => cr(v),
        (0, _) => cr(y),
        _ => cr(x),
    })
}

/// Clone-B parameters `(v', x', y')` of a phase-covariant ansatz.
pub fn phase_dual_params(d: usize, v: f64, x: f64, y: f64) -> (f64, f64, f64) {
    let df = d as f64;
    let vp = (v + df * (df - 1.0) * x + (df - 1.0) * y) / df;
    let xp = (v - y) / df;
    let yp = (v - df * x + (df - 1.0) * y) / df;
    (vp, xp, yp)
}

fn golden_max(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..200 {
        if hi - lo < 1e-15 * (1.0 + lo.abs()) {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

/// Maximize a scalar function on `[lo, hi]`: coarse grid, then golden-section refinement.
pub fn maximize_1d(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, grid: usize) -> (f64, f64) {
    if hi <= lo {
        return (lo, f(lo));
    }
    let step = (hi - lo) / grid as f64;
    let mut best = (lo, f(lo));
    for k in 1..=grid {
        let t = lo + step * k as f64;
        let v = f(t);
        if v > best.1 {
            best = (t, v);
        }
    }
    let a = (best.0 - step).max(lo);
    let b = (best.0 + step).min(hi);
    let refined = golden_max(f, a, b);
    if refined.1 >= best.1 {
        refined
    } else {
        best
    }
}

/// Phase-covariant parameters `(v, x, y)` with clone-A fidelity `fa` that maximize clone B.
///
/// With `u = (v, √(d(d−1)) x, √(d−1) y)` on the unit sphere, fixing `F_A = u₀² + u₁²/d`
/// leaves a one-parameter curve `u₀ = √F_A cos t`, `u₁ = √(d F_A) sin t`; the clone-B
/// fidelity is maximized along it for both signs of `u₂`.
pub fn phase_params(d: usize, fa: f64) -> Result<(f64, f64, f64)> {
    check_fa(d, fa)?;
    let df = d as f64;
    let fa = fa.min(1.0);
    let bound = (1.0 / fa - 1.0) / (df - 1.0);
    let lim = if bound >= 1.0 { std::f64::consts::FRAC_PI_2 } else { bound.max(0.0).sqrt().asin() };
    let params = |t: f64, sign: f64| {
        let u0 = fa.sqrt() * t.cos();
        let u1 = (df * fa).sqrt() * t.sin();
        let u2 = sign * (1.0 - u0 * u0 - u1 * u1).max(0.0).sqrt();
        (u0, u1 / (df * (df - 1.0)).sqrt(), u2 / (df - 1.0).sqrt())
    };
    let fb = |t: f64, sign: f64| {
        let (v, x, y) = params(t, sign);
        let (vp, xp, _) = phase_dual_params(d, v, x, y);
        vp * vp + (df - 1.0) * xp * xp
    };
    let mut best: Option<(f64, f64, f64)> = None;
    for sign in [1.0, -1.0] {
        let (t, val) = maximize_1d(&|t| fb(t, sign), -lim, lim, 2000);
        if best.map_or(true, |b| val > b.2) {
            best = Some((t, sign, val));
        }
    }
    let (t, sign, _) = best.expect("two branches evaluated");
    Ok(params(t, sign))
}

/// Phase-covariant cloner maximizing clone-B fidelity at clone-A fidelity `fa`.
pub fn phase_ansatz(d: usize, fa: f64) -> Result<AnsatzMatrix> {
    let (v, x, y) = phase_params(d, fa)?;
    AnsatzMatrix::new(d, phase_matrix(d, v, x, y))
}

/// Closed-form clone-B fidelity along each family's optimal parametrization.
pub fn family_fb(family: HeisenbergFamily, d: usize, fa: f64) -> Result<f64> {
    let df = d as f64;
    match family {
        HeisenbergFamily::Universal => {
            let a = universal_ansatz(d, fa)?;
            let (v, x) = (a.a[(0, 0)].re, a.a[(0, 1)].re);
            let vp = (v + (df * df - 1.0) * x) / df;
            let xp = (v - x) / df;
            Ok(vp * vp + (df * df - 1.0) * xp * xp / (df + 1.0))
        }
        HeisenbergFamily::Fourier => {
            let a = fourier_ansatz(d, fa)?;
            let (v, x) = (a.a[(0, 0)].re, a.a[(0, 1)].re);
            let y = if d > 1 { a.a[(1, 1)].re } else { 0.0 };
            let vp = (v + 2.0 * (df - 1.0) * x + (df - 1.0).powi(2) * y) / df;
            let xp = (v + (df - 2.0) * x + (1.0 - df) * y) / df;
            Ok(vp * vp + (df - 1.0) * xp * xp)
        }
        HeisenbergFamily::Phase => {
            let (v, x, y) = phase_params(d, fa)?;
            let (vp, xp, _) = phase_dual_params(d, v, x, y);
            Ok(vp * vp + (df - 1.0) * xp * xp)
        }
    }
}

/// Matrix of the map `vec(a) ↦ vec(b)` (row-major `m·d + n` indexing).
pub fn dual_map(d: usize) -> CMat {
    let n = d * d;
    CMat::from_fn(n, n, |r, c| {
        let (m, nn) = (r / d, r % d);
        let (x, y) = (c / d, c % d);
        gamma_pow(d, (nn * x) as i64 - (m * y) as i64) / cr(d as f64)
    })
}

/// Best Heisenberg cloner for `p F_A + (1−p) F_B`, with no restriction on the ansatz shape:
/// the top eigenvector of `p W + (1−p) T† W T`, where `W` holds the family weights and
/// `T` is the clone-B coefficient map.
pub fn optimal_heisenberg(family: HeisenbergFamily, d: usize, p: f64) -> Result<AnsatzMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("weight p = {p} outside [0,1]")));
    }
    let w = family_weights(family, d);
    let wd = CMat::from_diagonal(&CVec::from_iterator(d * d, (0..d * d).map(|k| cr(w[(k / d, k % d)]))));
    let t = dual_map(d);
    let q = &wd * cr(p) + t.adjoint() * &wd * &t * cr(1.0 - p);
    let (_, vecs) = herm_eig(&q);
    let top = vecs.column(d * d - 1);
    AnsatzMatrix::new(d, CMat::from_fn(d, d, |m, n| top[m * d + n]))
}

/// Weyl-Heisenberg unitaries `E*_{μν} ⊗ E_{μν} ⊗ E_{μν}` on `in ⊗ A ⊗ B`.
pub fn weyl_twirl_group(d: usize) -> Vec<CMat> {
    BellIndex::all(d)
        .map(|idx| {
            let e = crate::qcore::error_operator(idx);
            kron_all(&[e.conjugate(), e.clone(), e])
        })
        .collect()
}
