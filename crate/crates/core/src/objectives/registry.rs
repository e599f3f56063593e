//! Closed-form fidelities as pure scalar functions with domain guards.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::cloners::{pc_1m_fidelity_formula, pc_nm_fidelity_formula};
use crate::error::{Error, Result};
use crate::qcore::binomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FormulaKind {
    Fidelity,
    Probability,
    Constraint,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ParamKind {
    Int,
    Real,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ParamSpec {
    pub name: &'static str,
    pub kind: ParamKind,
    pub domain: &'static str,
}

const fn int(name: &'static str, domain: &'static str) -> ParamSpec {
    ParamSpec { name, kind: ParamKind::Int, domain }
}

const fn real(name: &'static str, domain: &'static str) -> ParamSpec {
    ParamSpec { name, kind: ParamKind::Real, domain }
}

/// Named parameter values handed to a formula.
#[derive(Clone, Debug, Default)]
pub struct Params(pub BTreeMap<String, f64>);

impl Params {
    pub fn new(pairs: &[(&str, f64)]) -> Self {
        Params(pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect())
    }

    pub fn real(&self, name: &str) -> Result<f64> {
        let v = *self.0.get(name).ok_or_else(|| Error::Invalid(format!("missing parameter `{name}`")))?;
        if !v.is_finite() {
            return Err(Error::Domain(format!("parameter `{name}` = {v} is not finite")));
        }
        Ok(v)
    }

    /// Integer parameter with lower bound `min`.
    pub fn int(&self, name: &str, min: u64) -> Result<u64> {
        let v = self.real(name)?;
        if v.fract() != 0.0 || v < min as f64 || v > 1e6 {
            return Err(Error::Domain(format!("parameter `{name}` = {v} must be an integer >= {min}")));
        }
        Ok(v as u64)
    }

    fn unit_open(&self, name: &str) -> Result<f64> {
        let v = self.real(name)?;
        if !(v > 0.0 && v < 1.0) {
            return Err(Error::Domain(format!("parameter `{name}` = {v} outside (0,1)")));
        }
        Ok(v)
    }

    fn positive(&self, name: &str) -> Result<f64> {
        let v = self.real(name)?;
        if v <= 0.0 {
            return Err(Error::Domain(format!("parameter `{name}` = {v} must be positive")));
        }
        Ok(v)
    }
}

/// One closed-form entry.
#[derive(Clone, Serialize)]
pub struct FidelityFormula {
    pub id: &'static str,
    pub params: &'static [ParamSpec],
    pub source: &'static str,
    pub kind: FormulaKind,
    pub conjectured: bool,
    #[serde(skip)]
    pub eval: fn(&Params) -> Result<f64>,
}

impl FidelityFormula {
    pub fn evaluate(&self, p: &Params) -> Result<f64> {
        for spec in self.params {
            p.real(spec.name)?;
        }
        (self.eval)(p)
    }
}

impl std::fmt::Debug for FidelityFormula {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FidelityFormula").field("id", &self.id).field("kind", &self.kind).finish()
    }
}

fn nm(p: &Params) -> Result<(f64, f64)> {
    let n = p.int("n", 1)?;
    let m = p.int("m", 1)?;
    if m <= n {
        return Err(Error::Domain(format!("need m > n (got n={n}, m={m})")));
    }
    Ok((n as f64, m as f64))
}

fn dim(p: &Params) -> Result<f64> {
    Ok(p.int("d", 2)? as f64)
}

fn univ_nm_qubit(p: &Params) -> Result<f64> {
    let (n, m) = nm(p)?;
    Ok((m * (n + 1.0) + n) / (m * (n + 2.0)))
}

fn univ_n_inf_qubit(p: &Params) -> Result<f64> {
    let n = p.int("n", 1)? as f64;
    Ok((n + 1.0) / (n + 2.0))
}

fn univ_12_qudit(p: &Params) -> Result<f64> {
    let d = dim(p)?;
    Ok((d + 3.0) / (2.0 * (d + 1.0)))
}

fn univ_nm_qudit(p: &Params) -> Result<f64> {
    let d = dim(p)?;
    let (n, m) = nm(p)?;
    Ok((m * n + m + n * (d - 1.0)) / (m * (n + d)))
}

fn univ_n_inf_qudit(p: &Params) -> Result<f64> {
    let d = dim(p)?;
    let n = p.int("n", 1)? as f64;
    Ok((n + 1.0) / (n + d))
}

fn univ_global_nm(p: &Params) -> Result<f64> {
    let d = p.int("d", 2)?;
    let n = p.int("n", 1)?;
    let m = p.int("m", 1)?;
    if m <= n {
        return Err(Error::Domain(format!("need m > n (got n={n}, m={m})")));
    }
    let dd = |k: u64| binomial(d + k - 1, k) as f64;
    Ok(dd(n) / dd(m))
}

fn bloch_shrinking(p: &Params) -> Result<f64> {
    let eta = p.real("eta")?;
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::Domain(format!("eta = {eta} outside [0,1]")));
    }
    Ok((1.0 + eta) / 2.0)
}

/// `β` from `α² + 2αβ/d + β² = 1`, `β ≥ 0`.
fn asym_partner(d: f64, alpha: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::Domain(format!("alpha = {alpha} outside [0,1]")));
    }
    let b = alpha / d;
    Ok(-b + (b * b + 1.0 - alpha * alpha).sqrt())
}

fn univ_asym_a(p: &Params) -> Result<f64> {
    let d = dim(p)?;
    let alpha = p.real("alpha")?;
    asym_partner(d, alpha)?;
    let eta = 1.0 - alpha * alpha;
    Ok(eta + (1.0 - eta) / d)
}

fn univ_asym_b(p: &Params) -> Result<f64> {
    let d = dim(p)?;
    let beta = asym_partner(d, p.real("alpha")?)?;
    let eta = 1.0 - beta * beta;
    Ok(eta + (1.0 - eta) / d)
}

fn pauli_ellipsoid(p: &Params) -> Result<f64> {
    let (x, y, z) = (p.real("x")?, p.real("y")?, p.real("z")?);
    let lhs = x * x + y * y + z * z + x * y + x * z + y * z;
    Ok(if (lhs - 0.5).abs() < 1e-9 { 1.0 } else { 0.0 })
}

fn pc_12_qubit(_: &Params) -> Result<f64> {
    Ok(0.5 + 1.0 / 8f64.sqrt())
}

fn pc_1m_qubit(p: &Params) -> Result<f64> {
    pc_1m_fidelity_formula(p.int("m", 2)? as usize)
}

fn pc_nm_qubit(p: &Params) -> Result<f64> {
    nm(p)?;
    pc_nm_fidelity_formula(p.int("n", 1)? as usize, p.int("m", 2)? as usize)
}

fn pc_12_qutrit(_: &Params) -> Result<f64> {
    Ok((5.0 + 17f64.sqrt()) / 12.0)
}

fn pc_12_qudit(p: &Params) -> Result<f64> {
    let d = dim(p)?;
    Ok(1.0 / d + (d - 2.0 + (d * d + 4.0 * d - 4.0).sqrt()) / (4.0 * d))
}

fn fourier_12_qutrit(_: &Params) -> Result<f64> {
    Ok(0.5 + 1.0 / 12f64.sqrt())
}

fn fourier_12_qudit(p: &Params) -> Result<f64> {
    let d = dim(p)?;
    Ok(0.5 + 1.0 / (4.0 * d).sqrt())
}

fn orthopair_nm(p: &Params) -> Result<f64> {
    let m = p.int("m", 2)? as f64;
    Ok(0.5 * (1.0 + ((m + 2.0) / (3.0 * m)).sqrt()))
}

fn orthopair_inf(_: &Params) -> Result<f64> {
    Ok(0.5 * (1.0 + 1.0 / 3f64.sqrt()))
}

fn parallel_pair_nm(p: &Params) -> Result<f64> {
    let m = p.int("m", 2)? as f64;
    Ok((3.0 * m + 2.0) / (4.0 * m))
}

fn entang_2x2(_: &Params) -> Result<f64> {
    Ok((5.0 + 13f64.sqrt()) / 12.0)
}

fn entang_dxd(p: &Params) -> Result<f64> {
    let d = dim(p)?;
    let d2 = d * d;
    let q = (d2 - 2.0) / (d2 - 1.0);
    Ok(0.25 * ((d2 + 1.0) / (d2 - 1.0) + (1.0 + 4.0 / d2 * q * q).sqrt()))
}

fn real_12(p: &Params) -> Result<f64> {
    let d = dim(p)?;
    Ok(0.5 + (2.0 - d + (d * d + 4.0 * d + 20.0).sqrt()) / (4.0 * (d + 2.0)))
}

fn n_gt_one(p: &Params) -> Result<f64> {
    let n = p.int("n", 2)?;
    Ok(n as f64)
}

fn asym_1_to_n1_a(p: &Params) -> Result<f64> {
    n_gt_one(p)?;
    let x = p.unit_open("x")?;
    Ok(1.0 - 2.0 * x * x / 3.0)
}

fn asym_1_to_n1_b(p: &Params) -> Result<f64> {
    let n = n_gt_one(p)?;
    let x = p.unit_open("x")?;
    Ok(0.5 + (x * x + x * ((1.0 - x * x) * n * (n + 2.0)).sqrt()) / (3.0 * n))
}

fn asym_n_to_n1_a(p: &Params) -> Result<f64> {
    let n = p.int("n", 1)? as f64;
    let x = p.unit_open("x")?;
    Ok(1.0 - 2.0 * x * x / (n * (n + 2.0)))
}

fn asym_n_to_n1_b(p: &Params) -> Result<f64> {
    let n = p.int("n", 1)? as f64;
    let x = p.unit_open("x")?;
    let t = (n / (n + 2.0)).sqrt() * x - (1.0 - x * x).sqrt();
    Ok(1.0 - 0.5 * t * t)
}

fn triplicator_params(p: &Params) -> Result<(f64, f64, f64, f64)> {
    let d = dim(p)?;
    let (a, b, c) = (p.real("alpha")?, p.real("beta")?, p.real("gamma")?);
    if a < 0.0 || b < 0.0 || c < 0.0 {
        return Err(Error::Domain("alpha, beta, gamma must be non-negative".into()));
    }
    let norm = triplicator_norm_value(d, a, b, c);
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::Domain(format!("normalization α²+β²+γ²+(2/d)(αβ+αγ+βγ) = {norm} ≠ 1")));
    }
    Ok((d, a, b, c))
}

fn triplicator_norm_value(d: f64, a: f64, b: f64, c: f64) -> f64 {
    a * a + b * b + c * c + 2.0 / d * (a * b + a * c + b * c)
}

fn triplicator_clone(d: f64, u: f64, v: f64) -> f64 {
    1.0 - (d - 1.0) / d * (u * u + v * v + 2.0 * u * v / (d + 1.0))
}

fn triplicator_a(p: &Params) -> Result<f64> {
    let (d, _, b, c) = triplicator_params(p)?;
    Ok(triplicator_clone(d, b, c))
}

fn triplicator_b(p: &Params) -> Result<f64> {
    let (d, a, _, c) = triplicator_params(p)?;
    Ok(triplicator_clone(d, a, c))
}

fn triplicator_c(p: &Params) -> Result<f64> {
    let (d, a, b, _) = triplicator_params(p)?;
    Ok(triplicator_clone(d, a, b))
}

fn triplicator_norm(p: &Params) -> Result<f64> {
    let d = dim(p)?;
    let norm = triplicator_norm_value(d, p.real("alpha")?, p.real("beta")?, p.real("gamma")?);
    Ok(if (norm - 1.0).abs() < 1e-9 { 1.0 } else { 0.0 })
}

fn prob_exact_pair(p: &Params) -> Result<f64> {
    let s = p.real("overlap")?;
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::Domain(format!("overlap = {s} outside [0,1]")));
    }
    Ok(1.0 / (1.0 + s))
}

fn pc_prob_nm(p: &Params) -> Result<f64> {
    let n = p.int("n", 1)?;
    let m = p.int("m", 2)?;
    if m <= n {
        return Err(Error::Domain(format!("need m > n (got n={n}, m={m})")));
    }
    let shift = (m - n) / 2;
    let s: f64 = (0..=n).map(|k| binomial(m, k + shift) as f64).sum();
    Ok(s / 2f64.powi(m as i32))
}

fn pc_econ_qudit(p: &Params) -> Result<f64> {
    let d = dim(p)?;
    let t = d - 1.0 + 2f64.sqrt();
    Ok((d - 1.0 + t * t) / (2.0 * d * d))
}

fn cv_12(_: &Params) -> Result<f64> {
    Ok(2.0 / 3.0)
}

fn cv_nm(p: &Params) -> Result<f64> {
    let (n, m) = nm(p)?;
    Ok(m * n / (m * n + m - n))
}

fn cv_n_inf(p: &Params) -> Result<f64> {
    let n = p.int("n", 1)? as f64;
    Ok(n / (n + 1.0))
}

fn cv_asym_a(p: &Params) -> Result<f64> {
    let s = p.positive("sigma_a")?;
    Ok(1.0 / (1.0 + s * s))
}

fn cv_asym_b(p: &Params) -> Result<f64> {
    let s = 0.5 / p.positive("sigma_a")?;
    Ok(1.0 / (1.0 + s * s))
}

fn cv_conj_balanced(p: &Params) -> Result<f64> {
    let n = p.int("n", 1)? as f64;
    let m = p.int("m", 1)? as f64;
    if m < n {
        return Err(Error::Domain(format!("need m >= n (got n={n}, m={m})")));
    }
    Ok(4.0 * m * m * n / (4.0 * m * m * n + (m - n) * (m - n)))
}

fn cv_conj_inf(p: &Params) -> Result<f64> {
    let n = p.int("n", 1)? as f64;
    Ok(4.0 * n / (4.0 * n + 1.0))
}

fn cv_nongaussian(_: &Params) -> Result<f64> {
    Ok(0.6826)
}

fn cv_finite_width(p: &Params) -> Result<f64> {
    Ok(crate::cvclone::finite_width_fidelity(p.positive("sigma2")?)?.0)
}

fn amplifier(p: &Params) -> Result<f64> {
    let n_in = p.positive("n_in")?;
    let n_out = p.positive("n_out")?;
    let q = p.positive("q")?;
    if n_out < n_in {
        return Err(Error::Domain(format!("need n_out >= n_in (got {n_out} < {n_in})")));
    }
    Ok((q * n_out * n_in + n_out + n_in) / (q * n_out * n_in + 2.0 * n_out))
}

fn symmetrization_popt(p: &Params) -> Result<f64> {
    let m = p.int("m", 2)?;
    let ps = p.real("p_s")?;
    if !(0.0..=1.0).contains(&ps) {
        return Err(Error::Domain(format!("p_s = {ps} outside [0,1]")));
    }
    let mf = m as f64;
    let fact: f64 = (1..=m).map(|k| k as f64).product();
    Ok(ps * fact / mf.powi(m as i32))
}

fn pc_bs_fr(p: &Params) -> Result<f64> {
    let r = p.real("r")?;
    if !(r > std::f64::consts::FRAC_1_SQRT_2 && r < 1.0) {
        return Err(Error::Domain(format!("r = {r} outside (1/√2, 1)")));
    }
    let r2 = r * r;
    Ok(0.5 * (1.0 + 2.0 * r * (2.0 * r2 - 1.0) * (1.0 - r2).sqrt() / (2.0 * r2 * r2 - 2.0 * r2 + 1.0)))
}

fn orthopair_dc(p: &Params) -> Result<f64> {
    let m = p.int("m", 2)? as f64;
    let y = p.real("y")?;
    if y < 0.0 {
        return Err(Error::Domain(format!("y = {y} must be non-negative")));
    }
    Ok(orthopair_dc_value(m, y))
}

/// Orthogonal-pair down-conversion fidelity as a function of `y = λ²/(1−λ²)`.
pub fn orthopair_dc_value(m: f64, y: f64) -> f64 {
    (3.0 * y * y - 2.0 * y * (2.0 * m + 1.0) + 1.5 * m * (m + 1.0)) / (6.0 * y * y - 6.0 * m * y + m * (2.0 * m + 1.0))
}

/// Optimal `y = M/2 − √(M(M+2)/3)/2`.
pub fn orthopair_y_opt(m: f64) -> f64 {
    m / 2.0 - 0.5 * (m * (m + 2.0) / 3.0).sqrt()
}

fn orthopair_dc_opt(p: &Params) -> Result<f64> {
    let m = p.int("m", 2)? as f64;
    Ok(orthopair_dc_value(m, orthopair_y_opt(m)))
}

fn unot(p: &Params) -> Result<f64> {
    let n = p.int("n", 1)? as f64;
    Ok((n + 1.0) / (n + 2.0))
}

use FormulaKind::{Constraint, Fidelity, Probability};

macro_rules! entry {
    ($id:expr, $params:expr, $source:expr, $kind:expr, $eval:expr) => {
        entry!($id, $params, $source, $kind, $eval, false)
    };
    ($id:expr, $params:expr, $source:expr, $kind:expr, $eval:expr, $conj:expr) => {
        FidelityFormula {
            id: $id,
            params: {
                const P: &[ParamSpec] = $params;
                P
            },
            source: $source, kind: $kind, conjectured: $conj, eval: $eval }
    };
}

const D: ParamSpec = int("d", ">= 2");
const N: ParamSpec = int("n", ">= 1");
const M: ParamSpec = int("m", "> n");
const M2: ParamSpec = int("m", ">= 2");

/// Every closed-form fidelity, probability and constraint known to the toolkit.
pub fn registry() -> Vec<FidelityFormula> {
    vec![
        entry!("univ_nm_qubit", &[N, M], "universal N→M qubit cloning, single-clone fidelity", Fidelity, univ_nm_qubit),
        entry!("univ_n_inf_qubit", &[N], "optimal state estimation from N qubit copies", Fidelity, univ_n_inf_qubit),
        entry!("univ_12_qudit", &[D], "symmetric universal 1→2 qudit cloning", Fidelity, univ_12_qudit),
        entry!("univ_nm_qudit", &[D, N, M], "universal N→M qudit cloning, single-clone fidelity", Fidelity, univ_nm_qudit),
        entry!("univ_n_inf_qudit", &[D, N], "optimal state estimation from N qudit copies", Fidelity, univ_n_inf_qudit),
        entry!("univ_global_nm", &[D, N, M], "universal N→M cloning, global fidelity D(N,d)/D(M,d)", Fidelity, univ_global_nm),
        entry!("bloch_shrinking", &[real("eta", "[0,1]")], "qubit fidelity from the Bloch shrinking factor", Fidelity, bloch_shrinking),
        entry!("univ_asym_a", &[D, real("alpha", "[0,1]")], "asymmetric universal 1→2 qudit cloning, clone A; α²+2αβ/d+β²=1", Fidelity, univ_asym_a),
        entry!("univ_asym_b", &[D, real("alpha", "[0,1]")], "asymmetric universal 1→2 qudit cloning, clone B; α²+2αβ/d+β²=1", Fidelity, univ_asym_b),
        entry!("pauli_ellipsoid", &[real("x", "real"), real("y", "real"), real("z", "real")], "symmetric Pauli cloners: x²+y²+z²+xy+xz+yz=1/2 (1 if satisfied)", Constraint, pauli_ellipsoid),
        entry!("pc_12_qubit", &[], "phase-covariant 1→2 qubit cloning of equatorial states", Fidelity, pc_12_qubit),
        entry!("pc_1m_qubit", &[M2], "phase-covariant 1→M qubit cloning, even and odd M", Fidelity, pc_1m_qubit),
        entry!("pc_nm_qubit", &[N, M], "economical phase-covariant N→M qubit cloning (binomial sums)", Fidelity, pc_nm_qubit),
        entry!("pc_12_qutrit", &[], "double-phase-covariant 1→2 qutrit cloning", Fidelity, pc_12_qutrit),
        entry!("pc_12_qudit", &[D], "multi-phase-covariant 1→2 qudit cloning of balanced states", Fidelity, pc_12_qudit),
        entry!("fourier_12_qutrit", &[], "Fourier-covariant 1→2 qutrit cloning of two conjugate bases", Fidelity, fourier_12_qutrit),
        entry!("fourier_12_qudit", &[D], "Fourier-covariant 1→2 qudit cloning of two conjugate bases", Fidelity, fourier_12_qudit),
        entry!("orthopair_nm", &[M2], "cloning an orthogonal qubit pair into M clones", Fidelity, orthopair_nm),
        entry!("orthopair_inf", &[], "state estimation from an orthogonal qubit pair", Fidelity, orthopair_inf),
        entry!("parallel_pair_nm", &[M2], "universal 2→M qubit cloning from a parallel pair", Fidelity, parallel_pair_nm),
        entry!("entang_2x2", &[], "1→2 cloning of maximally entangled two-qubit states", Fidelity, entang_2x2),
        entry!("entang_dxd", &[D], "1→2 cloning of maximally entangled d×d states", Fidelity, entang_dxd),
        entry!("real_12", &[D], "1→2 cloning of real qudit states", Fidelity, real_12),
        entry!("asym_1_to_n1_a", &[int("n", ">= 2"), real("x", "(0,1)")], "asymmetric 1→N+1 qubit cloning, single distinguished clone", Fidelity, asym_1_to_n1_a),
        entry!("asym_1_to_n1_b", &[int("n", ">= 2"), real("x", "(0,1)")], "asymmetric 1→N+1 qubit cloning, each of the N other clones", Fidelity, asym_1_to_n1_b),
        entry!("asym_n_to_n1_a", &[N, real("x", "(0,1)")], "asymmetric N→N+1 qubit cloning, each of the N clones", Fidelity, asym_n_to_n1_a, true),
        entry!("asym_n_to_n1_b", &[N, real("x", "(0,1)")], "asymmetric N→N+1 qubit cloning, the extra clone", Fidelity, asym_n_to_n1_b, true),
        entry!("triplicator_a", &[D, real("alpha", ">= 0"), real("beta", ">= 0"), real("gamma", ">= 0")], "asymmetric universal qudit triplicator, clone A", Fidelity, triplicator_a),
        entry!("triplicator_b", &[D, real("alpha", ">= 0"), real("beta", ">= 0"), real("gamma", ">= 0")], "asymmetric universal qudit triplicator, clone B", Fidelity, triplicator_b),
        entry!("triplicator_c", &[D, real("alpha", ">= 0"), real("beta", ">= 0"), real("gamma", ">= 0")], "asymmetric universal qudit triplicator, clone C", Fidelity, triplicator_c),
        entry!("triplicator_norm", &[D, real("alpha", ">= 0"), real("beta", ">= 0"), real("gamma", ">= 0")], "triplicator normalization α²+β²+γ²+(2/d)(αβ+αγ+βγ)=1 (1 if satisfied)", Constraint, triplicator_norm),
        entry!("prob_exact_pair", &[real("overlap", "[0,1]")], "probabilistic exact 1→2 cloning of two pure states, success probability", Probability, prob_exact_pair),
        entry!("pc_prob_nm", &[N, M], "probabilistic phase-covariant N→M qubit cloning", Fidelity, pc_prob_nm),
        entry!("pc_econ_qudit", &[D], "suboptimal economical phase-covariant 1→2 qudit cloning", Fidelity, pc_econ_qudit),
        entry!("cv_12", &[], "Gaussian 1→2 coherent-state cloning", Fidelity, cv_12),
        entry!("cv_nm", &[N, M], "Gaussian N→M coherent-state cloning", Fidelity, cv_nm),
        entry!("cv_n_inf", &[N], "coherent-state estimation from N copies", Fidelity, cv_n_inf),
        entry!("cv_asym_a", &[real("sigma_a", "> 0")], "asymmetric Gaussian 1→2 cloning, clone A; σ_Aσ_B=1/2", Fidelity, cv_asym_a),
        entry!("cv_asym_b", &[real("sigma_a", "> 0")], "asymmetric Gaussian 1→2 cloning, clone B; σ_Aσ_B=1/2", Fidelity, cv_asym_b),
        entry!("cv_conj_balanced", &[N, int("m", ">= n")], "balanced Gaussian cloning with phase-conjugate inputs, N,N→M,M", Fidelity, cv_conj_balanced),
        entry!("cv_conj_inf", &[N], "estimation from N copies and N phase-conjugate copies", Fidelity, cv_conj_inf),
        entry!("cv_nongaussian", &[], "optimal non-Gaussian 1→2 coherent-state cloning", Fidelity, cv_nongaussian),
        entry!("cv_finite_width", &[real("sigma2", "> 0")], "Gaussian 1→2 cloning with a Gaussian prior of variance σ²", Fidelity, cv_finite_width),
        entry!("amplifier", &[real("n_in", "> 0"), real("n_out", ">= n_in"), real("q", "> 0")], "stimulated-emission amplifier with quality factor Q", Fidelity, amplifier),
        entry!("symmetrization_popt", &[M2, real("p_s", "[0,1]")], "beam-splitter symmetrization at optimal transmittances, success probability", Probability, symmetrization_popt),
        entry!("pc_bs_fr", &[real("r", "(1/√2, 1)")], "phase-covariant beam-splitter cloner with equal polarization reflectances", Fidelity, pc_bs_fr),
        entry!("orthopair_dc", &[M2, real("y", ">= 0")], "orthogonal-pair down-conversion cloner, y = λ²/(1−λ²)", Fidelity, orthopair_dc),
        entry!("orthopair_dc_opt", &[M2], "orthogonal-pair down-conversion cloner at the optimal gain", Fidelity, orthopair_dc_opt),
        entry!("unot", &[N], "universal NOT from N qubit copies", Fidelity, unot),
    ]
}

/// Look up an entry by exact id.
pub fn lookup(id: &str) -> Result<FidelityFormula> {
    registry().into_iter().find(|f| f.id == id).ok_or_else(|| Error::Unknown(format!("no registry entry `{id}`")))
}

/// Evaluate the entry `id` at the given parameters.
pub fn evaluate(id: &str, params: &[(&str, f64)]) -> Result<f64> {
    lookup(id)?.evaluate(&Params::new(params))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(id: &str, p: &[(&str, f64)]) -> f64 {
        evaluate(id, p).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn size_and_citations() {
        let reg = registry();
        assert!(reg.len() >= 25);
        let mut ids: Vec<_> = reg.iter().map(|f| f.id).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), reg.len());
        assert!(reg.iter().all(|f| !f.source.is_empty()));
        assert_eq!(reg.iter().filter(|f| f.id.contains("entang")).count(), 2);
    }

    #[test]
    fn known_values() {
        assert!(close(ev("univ_nm_qubit", &[("n", 1.0), ("m", 2.0)]), 5.0 / 6.0));
        assert!(close(ev("univ_nm_qubit", &[("n", 2.0), ("m", 3.0)]), 11.0 / 12.0));
        assert!(close(ev("univ_12_qudit", &[("d", 3.0)]), 0.75));
        assert!(close(ev("univ_nm_qudit", &[("d", 2.0), ("n", 1.0), ("m", 3.0)]), 7.0 / 9.0));
        assert!(close(ev("univ_global_nm", &[("d", 2.0), ("n", 1.0), ("m", 2.0)]), 2.0 / 3.0));
        assert!(close(ev("pc_1m_qubit", &[("m", 3.0)]), 5.0 / 6.0));
        assert!(close(ev("pc_12_qudit", &[("d", 3.0)]), ev("pc_12_qutrit", &[])));
        assert!(close(ev("fourier_12_qudit", &[("d", 3.0)]), ev("fourier_12_qutrit", &[])));
        assert!(close(ev("entang_dxd", &[("d", 2.0)]), ev("entang_2x2", &[])));
        assert!(close(ev("amplifier", &[("n_in", 1.0), ("n_out", 2.0), ("q", 1.0)]), 5.0 / 6.0));
        assert!((ev("amplifier", &[("n_in", 1.0), ("n_out", 2.0), ("q", 0.8)]) - 0.821).abs() < 5e-4);
        assert!(close(ev("cv_conj_balanced", &[("n", 1.0), ("m", 2.0)]), 16.0 / 17.0));
        assert!(close(ev("symmetrization_popt", &[("m", 3.0), ("p_s", 1.0)]), 2.0 / 9.0));
        assert!(close(ev("orthopair_dc_opt", &[("m", 2.0)]), ev("orthopair_nm", &[("m", 2.0)])));
    }

    #[test]
    fn amplifier_reproduces_universal_qubit_cloning() {
        for n in 1..5 {
            for m in n + 1..10 {
                let (nf, mf) = (n as f64, m as f64);
                let a = ev("amplifier", &[("n_in", nf), ("n_out", mf), ("q", 1.0)]);
                assert!(close(a, ev("univ_nm_qubit", &[("n", nf), ("m", mf)])));
                assert!(close(ev("univ_nm_qudit", &[("d", 2.0), ("n", nf), ("m", mf)]), a));
            }
        }
        assert!(close(ev("amplifier", &[("n_in", 2.0), ("n_out", 2.0), ("q", 0.3)]), 1.0));
    }

    #[test]
    fn ordering_chain() {
        for d in 3..=6 {
            let d = d as f64;
            let u = ev("univ_12_qudit", &[("d", d)]);
            let p = ev("pc_12_qudit", &[("d", d)]);
            let r = ev("real_12", &[("d", d)]);
            let f = ev("fourier_12_qudit", &[("d", d)]);
            assert!(u < p && p < r && r < f, "d={d}: {u} {p} {r} {f}");
        }
        assert!(close(ev("real_12", &[("d", 2.0)]), ev("pc_12_qubit", &[])));
        assert!(close(ev("real_12", &[("d", 4.0)]), ev("entang_2x2", &[])));
    }

    #[test]
    fn asymmetric_symmetric_points() {
        for d in 2..=6 {
            let df = d as f64;
            // α = β solves 2α²(1 + 1/d) = 1.
            let alpha = (df / (2.0 * (df + 1.0))).sqrt();
            let a = ev("univ_asym_a", &[("d", df), ("alpha", alpha)]);
            let b = ev("univ_asym_b", &[("d", df), ("alpha", alpha)]);
            assert!(close(a, b) && close(a, ev("univ_12_qudit", &[("d", df)])));
        }
        assert!(close(ev("univ_asym_b", &[("d", 3.0), ("alpha", 0.0)]), 1.0 / 3.0));
    }

    #[test]
    fn triplicator_symmetric_point() {
        // α = β = γ: 3α² + 6α²/d = 1; every clone then matches universal 1→3.
        for d in 2..=5 {
            let df = d as f64;
            let a = (1.0 / (3.0 + 6.0 / df)).sqrt();
            let p = [("d", df), ("alpha", a), ("beta", a), ("gamma", a)];
            let fa = ev("triplicator_a", &p);
            assert!(close(fa, ev("triplicator_c", &p)));
            assert!(close(fa, ev("univ_nm_qudit", &[("d", df), ("n", 1.0), ("m", 3.0)])), "d={d}");
            assert_eq!(ev("triplicator_norm", &p), 1.0);
        }
        assert!(evaluate("triplicator_a", &[("d", 2.0), ("alpha", 1.0), ("beta", 1.0), ("gamma", 0.0)]).is_err());
    }

    #[test]
    fn asymmetric_highly() {
        // 1 → N+1 at the symmetric point equals universal 1 → N+1.
        for n in 2..6 {
            let nf = n as f64;
            let target = ev("univ_nm_qubit", &[("n", 1.0), ("m", nf + 1.0)]);
            let x = (1.5 * (1.0 - target)).sqrt();
            let b = ev("asym_1_to_n1_b", &[("n", nf), ("x", x)]);
            assert!(close(b, target), "n={n}: {b} vs {target}");
        }
        assert!(lookup("asym_n_to_n1_a").unwrap().conjectured);
        assert!(evaluate("asym_1_to_n1_a", &[("n", 1.0), ("x", 0.5)]).is_err());
    }

    #[test]
    fn pauli_ellipsoid_predicate() {
        // universal symmetric Pauli cloner: x = y = z, 6x² = 1/2.
        let x = (1.0 / 12.0f64).sqrt();
        assert_eq!(ev("pauli_ellipsoid", &[("x", x), ("y", x), ("z", x)]), 1.0);
        assert_eq!(ev("pauli_ellipsoid", &[("x", 0.1), ("y", 0.1), ("z", 0.1)]), 0.0);
    }

    #[test]
    fn domain_guards() {
        assert!(matches!(evaluate("univ_nm_qubit", &[("n", 2.0), ("m", 2.0)]), Err(Error::Domain(_))));
        assert!(matches!(evaluate("univ_nm_qubit", &[("n", 1.5), ("m", 2.0)]), Err(Error::Domain(_))));
        assert!(matches!(evaluate("cv_12", &[]), Ok(_)));
        assert!(matches!(evaluate("nope", &[]), Err(Error::Unknown(_))));
        assert!(matches!(evaluate("pc_bs_fr", &[("r", 0.5)]), Err(Error::Domain(_))));
        assert!(matches!(evaluate("univ_12_qudit", &[]), Err(Error::Invalid(_))));
    }

    #[test]
    fn fr_curve_peak() {
        let r = ((1.0 + 1.0 / 3f64.sqrt()) / 2.0).sqrt();
        assert!((ev("pc_bs_fr", &[("r", r)]) - (0.5 + 1.0 / 8f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn outputs_in_unit_interval() {
        let samples: &[(&str, &[(&str, f64)])] = &[
            ("pc_prob_nm", &[("n", 2.0), ("m", 5.0)]),
            ("pc_econ_qudit", &[("d", 4.0)]),
            ("cv_finite_width", &[("sigma2", 0.3)]),
            ("asym_n_to_n1_b", &[("n", 3.0), ("x", 0.4)]),
            ("orthopair_dc", &[("m", 4.0), ("y", 0.2)]),
            ("prob_exact_pair", &[("overlap", 0.3)]),
        ];
        for (id, p) in samples {
            let v = ev(id, p);
            assert!((0.0..=1.0).contains(&v), "{id}: {v}");
        }
    }
}
