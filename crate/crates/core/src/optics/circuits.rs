//! Beam-splitter circuits acting on single photons carrying polarization qubits.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{mode_permutation, BeamSplitter, FockState};
use crate::error::{Error, Result};
use crate::objectives::evaluate;
use crate::qcore::linalg::*;
use crate::qcore::{expectation, sym_one_body_mixed, CMat, CVec};

fn spatial_names(prefix: &str, k: usize) -> Vec<String> {
    (0..k).map(|j| format!("{prefix}{j}")).collect()
}

fn refs(names: &[String]) -> Vec<&str> {
    names.iter().map(String::as_str).collect()
}

/// Append vacuum spatial modes (V and H each) after the existing ones.
fn with_vacuum_spatial(state: &FockState, spatial: &[&str]) -> FockState {
    let extra = FockState::polarization_modes(spatial);
    let mut modes = state.modes.clone();
    modes.extend(extra.iter().cloned());
    let amps = state
        .amps
        .iter()
        .map(|(o, &a)| {
            let mut occ = o.clone();
            occ.extend(std::iter::repeat(0).take(extra.len()));
            (occ, a)
        })
        .collect();
    FockState { modes, cutoff: state.cutoff, amps }
}

fn photons_at(occ: &[usize], spatial: usize) -> usize {
    occ[2 * spatial] + occ[2 * spatial + 1]
}

/// `|ψ⊥⟩ = (−ψ₁*, ψ₀*)`, the partner with `(|ψψ⊥⟩ − |ψ⊥ψ⟩)/√2 = |Ψ⁻⟩`.
pub fn qubit_perp(psi: &CVec) -> CVec {
    CVec::from_vec(vec![-psi[1].conj(), psi[0].conj()])
}

fn kron3(a: &CVec, b: &CVec, c: &CVec) -> CVec {
    kron_vec(&kron_vec(a, b), c)
}

/// Fidelity of qubit `k` of a pure multi-qubit vector with `psi`.
pub fn qubit_fidelity(state: &CVec, k: usize, psi: &CVec) -> Result<f64> {
    let n = state.len().trailing_zeros() as usize;
    if state.len() != 1 << n || k >= n {
        return Err(Error::Dimension(format!("qubit {k} of a vector of length {}", state.len())));
    }
    let rho = projector(state) * cr(1.0 / state.norm_squared());
    Ok(expectation(&partial_trace(&rho, &vec![2; n], &[k])?, psi))
}

/// Result of a post-selected circuit.
#[derive(Clone, Debug)]
pub struct HomOutput {
    /// Normalized output; all photons in the last spatial mode.
    pub state: FockState,
    /// Overall success probability.
    pub probability: f64,
    /// Conditional success probability of each bunching stage.
    pub stage_probabilities: Vec<f64>,
}

impl HomOutput {
    /// Output as a vector on `sym(M)`, index `k` = number of H photons.
    pub fn sym_vector(&self) -> CVec {
        let last = self.state.modes.len() / 2 - 1;
        let m: usize = self.state.amps.keys().next().map(|o| photons_at(o, last)).unwrap_or(0);
        let mut v = CVec::zeros(m + 1);
        for (o, &a) in &self.state.amps {
            v[o[2 * last + 1]] += a;
        }
        v
    }
}

/// Bunch `M` single photons into one spatial mode with a cascade of splitters.
///
/// Stage `j` mixes photon `j` (port a) with the `j` photons already bunched (port b) at
/// transmittance `T_j` and keeps the events where all `j+1` photons leave through port a.
pub fn hom_symmetrize(input: &FockState, transmittances: &[f64]) -> Result<HomOutput> {
    let m = input.modes.len() / 2;
    if input.modes.len() != 2 * m || m < 1 {
        return Err(Error::Dimension("hom_symmetrize needs polarization mode pairs".into()));
    }
    if transmittances.len() + 1 != m {
        return Err(Error::Dimension(format!("{} transmittances for {m} photons", transmittances.len())));
    }
    for s in 0..m {
        if input.amps.keys().any(|o| photons_at(o, s) != 1) {
            return Err(Error::Domain(format!("spatial mode {s} does not carry exactly one photon")));
        }
    }
    let mut state = input.normalized()?;
    let mut stages = Vec::with_capacity(m - 1);
    for (j, &t) in (1..m).zip(transmittances) {
        state = BeamSplitter::polarization(j, j - 1, t)?.apply(&state)?;
        let (kept, w) = state.select(|o| photons_at(o, j) == j + 1);
        stages.push(w);
        if w < 1e-300 {
            return Ok(HomOutput { state: kept, probability: 0.0, stage_probabilities: stages });
        }
        state = kept.normalized()?;
    }
    Ok(HomOutput { probability: stages.iter().product(), state, stage_probabilities: stages })
}

/// [`hom_symmetrize`] on an `M`-qubit polarization vector at `T_j = j/(j+1)`.
pub fn hom_symmetrize_qubits(phi: &CVec, transmittances: Option<&[f64]>) -> Result<HomOutput> {
    let m = phi.len().trailing_zeros() as usize;
    if phi.len() != 1 << m {
        return Err(Error::Dimension(format!("vector of length {} is not an M-qubit state", phi.len())));
    }
    let names = spatial_names("s", m);
    let input = FockState::from_polarization_qubits(&refs(&names), phi, m)?;
    let opt: Vec<f64> = (1..m).map(|j| j as f64 / (j + 1) as f64).collect();
    hom_symmetrize(&input, transmittances.unwrap_or(&opt))
}

/// Blank photon fed to the symmetrization cloner.
#[derive(Clone, Debug)]
pub enum Blank {
    /// Ensemble `{(p_k, |b_k⟩)}`.
    Ensemble(Vec<(f64, CVec)>),
    /// Half of a singlet whose partner is kept as a reference photon.
    Singlet,
}

impl Blank {
    /// `|V⟩` or `|H⟩` with probability 1/2 each.
    pub fn maximally_mixed() -> Self {
        Blank::Ensemble(vec![(0.5, basis2(0)), (0.5, basis2(1))])
    }
}

fn basis2(j: usize) -> CVec {
    crate::qcore::basis_ket(2, j)
}

#[derive(Clone, Debug)]
pub struct SymmetrizationReport {
    /// Conditional probabilities of the bunching and splitting stages.
    pub stage_probabilities: [f64; 2],
    pub probability: f64,
    pub clone_fidelities: [f64; 2],
    /// Fidelity of the reference photon with `|ψ⊥⟩` (singlet blank only).
    pub anti_clone_fidelity: Option<f64>,
    /// Output density on (clone, clone[, reference]).
    pub rho: CMat,
}

/// 1 → 2 cloning: bunch the input with a blank on a balanced splitter, then split the
/// pair against vacuum on a second balanced splitter and keep coincidences.
pub fn clone_via_symmetrization(psi: &CVec, blank: &Blank) -> Result<SymmetrizationReport> {
    let psi = normalize_qubit(psi)?;
    // Spatial modes: 0 input, 1 blank, 2 reference or vacuum, 3 vacuum.
    let runs: Vec<(f64, CVec, bool)> = match blank {
        Blank::Ensemble(list) => {
            let total: f64 = list.iter().map(|e| e.0).sum();
            if list.is_empty() || list.iter().any(|e| e.0 < 0.0) || (total - 1.0).abs() > 1e-9 {
                return Err(Error::Domain("blank ensemble weights must be non-negative and sum to 1".into()));
            }
            list.iter()
                .map(|(p, b)| Ok((*p, kron_vec(&kron_vec(&psi, &normalize_qubit(b)?), &basis2(0)), false)))
                .collect::<Result<_>>()?
        }
        Blank::Singlet => {
            let s = 0.5f64.sqrt();
            let singlet = CVec::from_vec(vec![cr(0.0), cr(s), cr(-s), cr(0.0)]);
            vec![(1.0, kron_vec(&psi, &singlet), true)]
        }
    };
    let mut stage = [0.0; 2];
    let mut rho: Option<CMat> = None;
    let mut total = 0.0;
    for (weight, vec3, with_ref) in &runs {
        let names = spatial_names("m", 3);
        let mut st = FockState::from_polarization_qubits(&refs(&names), vec3, 3)?;
        if !with_ref {
            // The third qubit was only a placeholder; drop its photon.
            st = st.annihilate(4);
        }
        let st = with_vacuum_spatial(&st, &["out"]);
        let s1 = BeamSplitter::polarization(1, 0, 0.5)?.apply(&st)?;
        let (b1, p1) = s1.select(|o| photons_at(o, 1) == 2);
        let s2 = BeamSplitter::polarization(1, 3, 0.5)?.apply(&b1.normalized()?)?;
        let (b2, p2) = s2.select(|o| photons_at(o, 1) == 1 && photons_at(o, 3) == 1);
        stage[0] += weight * p1;
        stage[1] += weight * p1 * p2;
        let p = p1 * p2;
        total += weight * p;
        let out = if *with_ref { b2.to_polarization_qubits(&[1, 3, 2]) } else { b2.to_polarization_qubits(&[1, 3]) };
        let term = projector(&out) * cr(weight * p / out.norm_squared());
        rho = Some(match rho {
            Some(r) => r + term,
            None => term,
        });
    }
    let rho = rho.expect("at least one run") * cr(1.0 / total);
    let nq = if matches!(blank, Blank::Singlet) { 3 } else { 2 };
    let dims = vec![2; nq];
    let fa = expectation(&partial_trace(&rho, &dims, &[0])?, &psi);
    let fb = expectation(&partial_trace(&rho, &dims, &[1])?, &psi);
    let anti = if nq == 3 { Some(expectation(&partial_trace(&rho, &dims, &[2])?, &qubit_perp(&psi))) } else { None };
    let stage_probabilities = [stage[0], if stage[0] > 0.0 { stage[1] / stage[0] } else { 0.0 }];
    Ok(SymmetrizationReport { stage_probabilities, probability: total, clone_fidelities: [fa, fb], anti_clone_fidelity: anti, rho })
}

fn normalize_qubit(psi: &CVec) -> Result<CVec> {
    if psi.len() != 2 {
        return Err(Error::Dimension(format!("qubit state of length {}", psi.len())));
    }
    let n = psi.norm();
    if n < 1e-14 {
        return Err(Error::Invalid("zero qubit state".into()));
    }
    Ok(psi / cr(n))
}

#[derive(Clone, Debug)]
pub struct SymmetrizationClonerReport {
    /// Output on `sym(M)`.
    pub rho_sym: CMat,
    pub probability: f64,
    pub fidelity: f64,
}

/// `N → M` cloning by symmetrizing `|ψ⟩^{⊗N}` with `M − N` blanks drawn from `{|V⟩, |H⟩}`.
pub fn symmetrization_cloner(psi: &CVec, n: usize, m: usize) -> Result<SymmetrizationClonerReport> {
    if n == 0 || m <= n {
        return Err(Error::Domain(format!("need M > N >= 1 (got N={n}, M={m})")));
    }
    if m > 10 {
        return Err(Error::SizeCap { dim: m, cap: 10 });
    }
    let psi = normalize_qubit(psi)?;
    let mut copies = CVec::from_vec(vec![cr(1.0)]);
    for _ in 0..n {
        copies = kron_vec(&copies, &psi);
    }
    let blanks = m - n;
    let w = 1.0 / (1usize << blanks) as f64;
    let mut rho = CMat::zeros(m + 1, m + 1);
    let mut prob = 0.0;
    for cfg in 0..(1usize << blanks) {
        let mut phi = copies.clone();
        for b in 0..blanks {
            phi = kron_vec(&phi, &basis2((cfg >> (blanks - 1 - b)) & 1));
        }
        let out = hom_symmetrize_qubits(&phi, None)?;
        if out.probability == 0.0 {
            continue;
        }
        prob += w * out.probability;
        rho += projector(&out.sym_vector()) * cr(w * out.probability);
    }
    let rho = rho * cr(1.0 / prob);
    let fidelity = expectation(&sym_one_body_mixed(2, m, &rho)?, &psi);
    Ok(SymmetrizationClonerReport { rho_sym: rho, probability: prob, fidelity })
}

/// `(1/√6)[2|ψψψ⊥⟩ − |ψψ⊥ψ⟩ − |ψ⊥ψψ⟩]` on clones A, B and anti-clone C.
pub fn symmetric_cloner_output(psi: &CVec) -> Result<CVec> {
    let p = normalize_qubit(psi)?;
    let q = qubit_perp(&p);
    let v = kron3(&p, &p, &q) * cr(2.0) - kron3(&p, &q, &p) - kron3(&q, &p, &p);
    Ok(v * cr(1.0 / 6f64.sqrt()))
}

/// `α|ψ⟩_A|Ψ⁻⟩_{BC} + β|ψ⟩_B|Ψ⁻⟩_{AC}` with the filter parametrization
/// `α² = p²/(1−p+p²)`, `β² = (1−p)²/(1−p+p²)`.
pub fn asymmetric_cloner_output(psi: &CVec, p: f64) -> Result<CVec> {
    let (alpha, beta) = filter_amplitudes(p)?;
    let psi = normalize_qubit(psi)?;
    let s = 0.5f64.sqrt();
    let singlet = CVec::from_vec(vec![cr(0.0), cr(s), cr(-s), cr(0.0)]);
    let a_term = kron_vec(&psi, &singlet);
    // ψ_B Ψ⁻_AC: permute (B, A, C) → (A, B, C).
    let b_term = permute_qubits(&kron_vec(&psi, &singlet), &[1, 0, 2]);
    Ok(a_term * cr(alpha) + b_term * cr(beta))
}

/// Reorder qubits: qubit `q` of the input becomes qubit `perm[q]` of the output.
pub fn permute_qubits(v: &CVec, perm: &[usize]) -> CVec {
    let n = perm.len();
    let mut out = CVec::zeros(v.len());
    for (idx, &a) in v.iter().enumerate() {
        let mut j = 0;
        for q in 0..n {
            let bit = (idx >> (n - 1 - q)) & 1;
            j |= bit << (n - 1 - perm[q]);
        }
        out[j] = a;
    }
    out
}

/// `(α, β)` of the asymmetric qubit cloner for the filter parameter `p ∈ [0, 1]`.
pub fn filter_amplitudes(p: f64) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("p = {p} outside [0,1]")));
    }
    let n = 1.0 - p + p * p;
    Ok((p / n.sqrt(), (1.0 - p) / n.sqrt()))
}

/// `(F_A, F_B) = (1 − (1−p)²/(2(1−p+p²)), 1 − p²/(2(1−p+p²)))`.
pub fn filter_fidelities(p: f64) -> Result<(f64, f64)> {
    let (a, b) = filter_amplitudes(p)?;
    Ok((1.0 - b * b / 2.0, 1.0 - a * a / 2.0))
}

#[derive(Clone, Debug, Serialize)]
pub struct FilterOutput {
    /// Normalized three-qubit state on (A, B, C).
    #[serde(skip)]
    pub state: CVec,
    pub probability: f64,
}

/// Unbalanced splitter with reflectance `R = (1+a)/2` between photons B and C of a
/// three-photon state, post-selected on one photon per output port. On the polarization
/// qubits this applies `R·I − T·SWAP = Π⁻ + aΠ⁺`.
pub fn asym_filter(state: &CVec, a: f64) -> Result<FilterOutput> {
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::Domain(format!("a = {a} outside [0,1]")));
    }
    if state.len() != 8 {
        return Err(Error::Dimension(format!("asym_filter acts on three qubits, got length {}", state.len())));
    }
    let names = spatial_names("q", 3);
    let st = FockState::from_polarization_qubits(&refs(&names), state, 3)?.normalized()?;
    let out = BeamSplitter::polarization(1, 2, (1.0 - a) / 2.0)?.apply(&st)?;
    let (kept, probability) = out.select(|o| photons_at(o, 1) == 1 && photons_at(o, 2) == 1);
    let v = kept.to_polarization_qubits(&[0, 1, 2]);
    if probability < 1e-300 {
        return Err(Error::Invalid("filter has zero success probability on this state".into()));
    }
    Ok(FilterOutput { state: v / cr(probability.sqrt()), probability })
}

/// Filter parameter of the symmetric-cloner route, `p = (3−a)/(3+a)`.
pub fn filter_p(a: f64) -> f64 {
    (3.0 - a) / (3.0 + a)
}

/// Filter parameter of the partial-teleportation route, `p = (1−a)/(1+a)`.
pub fn teleport_p(a: f64) -> f64 {
    (1.0 - a) / (1.0 + a)
}

/// The filter applied to `|ψ⟩_B ⊗ |Ψ⁻⟩_{AC}`.
pub fn partial_teleportation(psi: &CVec, a: f64) -> Result<FilterOutput> {
    let psi = normalize_qubit(psi)?;
    let s = 0.5f64.sqrt();
    let singlet = CVec::from_vec(vec![cr(0.0), cr(s), cr(-s), cr(0.0)]);
    // (B, A, C) → (A, B, C).
    let input = permute_qubits(&kron_vec(&psi, &singlet), &[1, 0, 2]);
    asym_filter(&input, a)
}

/// Phase-covariant beam-splitter cloner variants.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum PcBsScheme {
    /// Polarization-dependent splitter with `r_H = t_V`, `t_H = −r_V`.
    PolarizationDependent { r_v: f64 },
    /// Polarizing splitter routing signal H towards the blank, then an equal-reflectance splitter.
    EqualReflectance { r: f64 },
}

#[derive(Clone, Debug)]
pub struct PcBsReport {
    /// Conditional map, columns for input V and H, rows over (port a, port b) qubits.
    pub map: CMat,
    /// Success probability averaged over equatorial inputs.
    pub probability: f64,
    /// Probability of the `|VV⟩` branch for input `|V⟩`.
    pub vv_probability: f64,
    /// Clone fidelity for equatorial inputs, from the simulated output.
    pub fidelity: f64,
    /// The closed-form curve, where defined.
    pub formula: Option<f64>,
}

fn pc_bs_run(scheme: PcBsScheme, signal: &CVec) -> Result<(CVec, f64)> {
    let input = kron_vec(signal, &basis2(0));
    let st = FockState::from_polarization_qubits(&["a", "b"], &input, 2)?;
    let out = match scheme {
        PcBsScheme::PolarizationDependent { r_v } => {
            let t_v = (1.0 - r_v * r_v).sqrt();
            BeamSplitter::polarization_dependent(0, 1, (r_v, t_v), (t_v, -r_v))?.apply(&st)?
        }
        PcBsScheme::EqualReflectance { r } => {
            let routed = st.linear_optics(&mode_permutation(&[0, 3, 2, 1])?)?;
            BeamSplitter::polarization(0, 1, 1.0 - r * r)?.apply(&routed)?
        }
    };
    let (kept, p) = out.select(|o| photons_at(o, 0) == 1 && photons_at(o, 1) == 1);
    Ok((kept.to_polarization_qubits(&[0, 1]), p))
}

/// Simulate the cloner on `|V⟩`, `|H⟩` and an equatorial input.
pub fn pc_beamsplitter_cloner(scheme: PcBsScheme) -> Result<PcBsReport> {
    let r = match scheme {
        PcBsScheme::PolarizationDependent { r_v } => r_v,
        PcBsScheme::EqualReflectance { r } => r,
    };
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Domain(format!("reflectance amplitude {r} outside (0, 1)")));
    }
    let (v_out, vv) = pc_bs_run(scheme, &basis2(0))?;
    let (h_out, _) = pc_bs_run(scheme, &basis2(1))?;
    let mut map = CMat::zeros(4, 2);
    map.set_column(0, &v_out);
    map.set_column(1, &h_out);
    let phi = 0.37f64;
    let s = 0.5f64.sqrt();
    let eq = CVec::from_vec(vec![cr(s), c(s * phi.cos(), s * phi.sin())]);
    let (out, probability) = pc_bs_run(scheme, &eq)?;
    if probability < 1e-300 {
        return Err(Error::Invalid("no coincidences".into()));
    }
    let fidelity = qubit_fidelity(&out, 0, &eq)?;
    let formula = if r * r > 0.5 { evaluate("pc_bs_fr", &[("r", r)]).ok() } else { None };
    Ok(PcBsReport { map, probability, vv_probability: vv, fidelity, formula })
}

/// `r_V² = (1 + 1/√3)/2`, where the conditional map is the economical cloner.
pub fn pc_bs_optimal_r() -> f64 {
    ((1.0 + 1.0 / 3f64.sqrt()) / 2.0).sqrt()
}

/// Photon-number record of the last circuit stage, for illustration only.
pub fn coincidence_counts(state: &FockState, shots: usize, seed: u64) -> BTreeMap<Vec<usize>, usize> {
    state.sample_counts(shots, seed)
}
