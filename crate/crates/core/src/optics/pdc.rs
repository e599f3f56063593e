//! Stimulated parametric down-conversion.
//!
//! The evolution `exp[λ... ]` is applied through its disentangled form
//! `exp(λA†) (1−λ²)^{(n_tot + p)/2} exp(−λA)`, where `A† = Σ s_k a_k† b_k†` runs over the
//! `p` signal/idler mode pairs. Each factor is applied exactly on the sparse state; only
//! the creation series is truncated, and the lost weight is reported as the deficit.

use num_rational::Ratio;
use serde::Serialize;

use super::FockState;
use crate::error::{Error, Result};
use crate::objectives::evaluate;
use crate::qcore::linalg::*;
use crate::qcore::{binomial, basis_ket, expectation, CVec};

/// Pair structure of the down-converter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PdcGeometry {
    /// Polarization qubits, `A† = a_V† b_H† − a_H† b_V†`.
    QubitSinglet,
    /// Time-bin qudits, `A† = Σ_j a_j† b_j†`.
    QuditTimeBin(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PdcParams {
    /// `λ = tanh(κt)`.
    pub lambda: f64,
    pub geometry: PdcGeometry,
}

impl PdcParams {
    pub fn new(lambda: f64, geometry: PdcGeometry) -> Result<Self> {
        if !(0.0..1.0).contains(&lambda) {
            return Err(Error::Domain(format!("λ = {lambda} outside [0, 1)")));
        }
        if let PdcGeometry::QuditTimeBin(d) = geometry {
            if d < 2 {
                return Err(Error::Domain(format!("qudit dimension {d} < 2")));
            }
        }
        Ok(Self { lambda, geometry })
    }

    /// Qudit dimension of the signal photons.
    pub fn d(&self) -> usize {
        match self.geometry {
            PdcGeometry::QubitSinglet => 2,
            PdcGeometry::QuditTimeBin(d) => d,
        }
    }

    /// Signal modes `0..d`, idler modes `d..2d`.
    pub fn mode_names(&self) -> Vec<String> {
        match self.geometry {
            PdcGeometry::QubitSinglet => ["aV", "aH", "bV", "bH"].iter().map(|s| s.to_string()).collect(),
            PdcGeometry::QuditTimeBin(d) => {
                (1..=d).map(|j| format!("a{j}")).chain((1..=d).map(|j| format!("b{j}"))).collect()
            }
        }
    }

    pub fn signal_modes(&self) -> Vec<usize> {
        (0..self.d()).collect()
    }

    pub fn idler_modes(&self) -> Vec<usize> {
        (self.d()..2 * self.d()).collect()
    }

    /// `(signal, idler, sign)` terms of `A†`.
    pub fn pairs(&self) -> Vec<(usize, usize, f64)> {
        match self.geometry {
            PdcGeometry::QubitSinglet => vec![(0, 3, 1.0), (1, 2, -1.0)],
            PdcGeometry::QuditTimeBin(d) => (0..d).map(|j| (j, d + j, 1.0)).collect(),
        }
    }

    /// State with `n` photons in the first signal mode.
    pub fn input(&self, n: usize, cutoff: usize) -> Result<FockState> {
        let names = self.mode_names();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let mut occ = vec![0; names.len()];
        occ[0] = n;
        FockState::basis(&refs, cutoff.max(n), occ)
    }
}

fn pair_create(params: &PdcParams, s: &FockState) -> FockState {
    let mut acc = s.scale(cr(0.0));
    acc.amps.clear();
    for (a, b, sign) in params.pairs() {
        acc = acc.add(&s.create(b).create(a).scale(cr(sign)));
    }
    acc
}

fn pair_annihilate(params: &PdcParams, s: &FockState) -> FockState {
    let mut acc = s.scale(cr(0.0));
    acc.amps.clear();
    for (a, b, sign) in params.pairs() {
        acc = acc.add(&s.annihilate(a).annihilate(b).scale(cr(sign)));
    }
    acc
}

/// Full output state and truncation deficit for at most `signal_cutoff` signal photons.
pub fn pdc_evolve(params: &PdcParams, input: &FockState, signal_cutoff: usize) -> Result<(FockState, f64)> {
    if input.n_modes() != 2 * params.d() {
        return Err(Error::Dimension(format!("input has {} modes, down-converter needs {}", input.n_modes(), 2 * params.d())));
    }
    let sig = params.signal_modes();
    let idl = params.idler_modes();
    // n_signal − n_idler is conserved; it fixes the total photon cap.
    let imbalance = input
        .amps
        .keys()
        .map(|o| sig.iter().map(|&m| o[m] as i64).sum::<i64>() - idl.iter().map(|&m| o[m] as i64).sum::<i64>())
        .min()
        .unwrap_or(0);
    let cap = 2 * signal_cutoff as i64 - imbalance;
    if cap < 0 || input.amps.keys().any(|o| sig.iter().map(|&m| o[m]).sum::<usize>() > signal_cutoff) {
        return Err(Error::Domain(format!("signal cutoff {signal_cutoff} below the input photon number")));
    }
    let mut state = input.clone();
    state.cutoff = cap as usize;
    let lam = params.lambda;

    // exp(−λA): terminates because A lowers the photon number.
    let mut term = state.clone();
    let mut acc = state.clone();
    for k in 1.. {
        term = pair_annihilate(params, &term).scale(cr(-lam / k as f64));
        if term.amps.is_empty() {
            break;
        }
        acc = acc.add(&term);
    }

    // (1 − λ²)^{(n_tot + p)/2}.
    let p = params.pairs().len() as f64;
    let damp = 1.0 - lam * lam;
    for (occ, a) in acc.amps.iter_mut() {
        let n: usize = occ.iter().sum();
        *a *= damp.powf((n as f64 + p) / 2.0);
    }

    // exp(λA†), truncated at the cap.
    let mut term = acc.clone();
    let mut out = acc;
    for k in 1.. {
        term = pair_create(params, &term).scale(cr(lam / k as f64));
        if term.amps.is_empty() || lam == 0.0 {
            break;
        }
        out = out.add(&term);
    }
    let deficit = (input.norm_sqr() - out.norm_sqr()).max(0.0);
    Ok((out, deficit))
}

/// The branch with exactly `m` photons in the signal beam.
#[derive(Clone, Debug)]
pub struct PdcBranch {
    /// Normalized branch state.
    pub state: FockState,
    /// Weight of the branch in the output.
    pub probability: f64,
    /// Weight lost to the photon cutoff.
    pub deficit: f64,
}

pub fn pdc_output(params: &PdcParams, input: &FockState, select_m: usize, signal_cutoff: Option<usize>) -> Result<PdcBranch> {
    let cutoff = signal_cutoff.unwrap_or(select_m + 4);
    if select_m > cutoff {
        return Err(Error::Domain(format!("M = {select_m} exceeds the signal cutoff {cutoff}")));
    }
    let (out, deficit) = pdc_evolve(params, input, cutoff)?;
    let sig = params.signal_modes();
    let (branch, probability) = out.select(|o| sig.iter().map(|&m| o[m]).sum::<usize>() == select_m);
    if probability == 0.0 {
        return Err(Error::Domain(format!("no amplitude with {select_m} signal photons")));
    }
    Ok(PdcBranch { state: branch.normalized()?, probability, deficit })
}

#[derive(Clone, Debug)]
pub struct PdcCloneReport {
    pub branch: PdcBranch,
    /// Single-clone fidelity read off the signal beam.
    pub fidelity: f64,
    /// Closed-form universal `N → M` value.
    pub registry: f64,
}

/// `N → M` cloning of the state in the first signal mode.
pub fn pdc_clone(params: &PdcParams, n: usize, m: usize) -> Result<PdcCloneReport> {
    if n == 0 || m < n {
        return Err(Error::Domain(format!("need M >= N >= 1 (got N={n}, M={m})")));
    }
    let d = params.d();
    let input = params.input(n, 2 * (m + 4))?;
    let branch = pdc_output(params, &input, m, None)?;
    let rho = branch.state.one_particle_state(&params.signal_modes())?;
    let fidelity = expectation(&rho, &basis_ket(d, 0));
    let registry = if m == n { 1.0 } else { evaluate("univ_nm_qudit", &[("d", d as f64), ("n", n as f64), ("m", m as f64)])? };
    Ok(PdcCloneReport { branch, fidelity, registry })
}

/// Counting formula for the time-bin cloner in exact arithmetic:
/// `F = Σ_m C(N+m,N) C(M−N+d−2−m,d−2) (N+m)/M  /  Σ_m C(N+m,N) C(M−N+d−2−m,d−2)`.
pub fn dc_qudit_fidelity(n: usize, m: usize, d: usize) -> Result<Ratio<i128>> {
    if n == 0 || m <= n || d < 2 {
        return Err(Error::Domain(format!("need M > N >= 1 and d >= 2 (got N={n}, M={m}, d={d})")));
    }
    let mut num = Ratio::from_integer(0i128);
    let mut den = Ratio::from_integer(0i128);
    for k in 0..=(m - n) {
        let w = binomial((n + k) as u64, n as u64) as i128 * binomial((m - n + d - 2 - k) as u64, (d - 2) as u64) as i128;
        den += Ratio::from_integer(w);
        num += Ratio::new(w * (n + k) as i128, m as i128);
    }
    Ok(num / den)
}

/// `(N(M+d) + M − N) / (M(N+d))` exactly.
pub fn universal_fidelity_exact(n: usize, m: usize, d: usize) -> Ratio<i128> {
    let (n, m, d) = (n as i128, m as i128, d as i128);
    Ratio::new(n * (m + d) + m - n, m * (n + d))
}

pub fn ratio_to_f64(r: &Ratio<i128>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Amplifier fidelity with quality factor `Q`.
pub fn amplifier_fidelity(n_in: f64, n_out: f64, q: f64) -> Result<f64> {
    evaluate("amplifier", &[("n_in", n_in), ("n_out", n_out), ("q", q)])
}

#[derive(Clone, Debug)]
pub struct OrthopairPdcReport {
    pub branch: PdcBranch,
    pub y: f64,
    /// Fidelity of the signal photons with `|ψ⟩`.
    pub clone_fidelity: f64,
    /// Fidelity of the idler photons with `|ψ⊥⟩`.
    pub anti_clone_fidelity: f64,
    /// Closed-form value at this gain.
    pub registry: f64,
}

/// Down-conversion fed with `|ψ⟩ = |V⟩` in the signal and `|ψ⊥⟩ = |H⟩` in the idler,
/// post-selected on `M` signal photons.
pub fn orthopair_pdc(lambda: f64, m: usize) -> Result<OrthopairPdcReport> {
    if m < 1 {
        return Err(Error::Domain("orthopair branch needs M >= 1".into()));
    }
    let params = PdcParams::new(lambda, PdcGeometry::QubitSinglet)?;
    let input = FockState::basis(&["aV", "aH", "bV", "bH"], 2, vec![1, 0, 0, 1])?;
    let branch = pdc_output(&params, &input, m, None)?;
    let v = basis_ket(2, 0);
    let h = basis_ket(2, 1);
    let clone_fidelity = expectation(&branch.state.one_particle_state(&[0, 1])?, &v);
    let anti_clone_fidelity = expectation(&branch.state.one_particle_state(&[2, 3])?, &h);
    let y = lambda * lambda / (1.0 - lambda * lambda);
    let registry = if m >= 2 { evaluate("orthopair_dc", &[("m", m as f64), ("y", y)])? } else { f64::NAN };
    Ok(OrthopairPdcReport { branch, y, clone_fidelity, anti_clone_fidelity, registry })
}

/// `λ` for a gain `y = λ²/(1−λ²)`.
pub fn lambda_from_y(y: f64) -> Result<f64> {
    if !(y >= 0.0 && y.is_finite()) {
        return Err(Error::Domain(format!("gain y = {y} must be finite and >= 0")));
    }
    Ok((y / (1.0 + y)).sqrt())
}

/// Closed-form branch `Σ_j (−1)^j [(M−j)(1−λ²) − λ²] |M−j, j; j, M−j⟩`, normalized.
pub fn orthopair_branch_formula(lambda: f64, m: usize) -> Result<FockState> {
    let mut s = FockState::vacuum(&["aV", "aH", "bV", "bH"], 2 * m);
    s.amps.clear();
    let l2 = lambda * lambda;
    for j in 0..=m {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let c = sign * ((m - j) as f64 * (1.0 - l2) - l2);
        if c != 0.0 {
            s.amps.insert(vec![m - j, j, j, m - j], cr(c));
        }
    }
    s.normalized()
}

/// Signal-beam state in `sym(M)` for the `N → M` branch with `N` photons in the first mode.
pub fn pdc_clone_state(params: &PdcParams, n: usize, m: usize) -> Result<(CVec, crate::qcore::CMat)> {
    let report = pdc_clone(params, n, m)?;
    let rho = report.branch.state.reduced_symmetric(&params.signal_modes())?;
    Ok((basis_ket(params.d(), 0), rho))
}
