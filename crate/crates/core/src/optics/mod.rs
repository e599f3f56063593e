//! Truncated Fock-space simulation of the optical cloners: stimulated down-conversion,
//! beam-splitter symmetrization, asymmetric filtering and the phase-covariant
//! beam-splitter cloner.
//!
//! Beam splitters act on creation operators as `a† ↦ r a† − t b†`, `b† ↦ t a† + r b†`,
//! so a photon entering port `b` leaves through port `a` with amplitude `t`. Polarization
//! systems order modes spatial-major with V before H: spatial mode `s` owns modes `2s`
//! (V) and `2s + 1` (H). Post-selection is exact amplitude filtering.

mod circuits;
mod pdc;

pub use circuits::*;
pub use pdc::*;

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::qcore::linalg::*;
use crate::qcore::{sym_labels, CMat, CVec, C64};

/// Occupation numbers, one per mode.
pub type Occupation = Vec<usize>;

/// Sparse state on a set of bosonic modes with at most `cutoff` photons in total.
#[derive(Clone, Debug, PartialEq)]
pub struct FockState {
    pub modes: Vec<String>,
    pub cutoff: usize,
    pub amps: BTreeMap<Occupation, C64>,
}

const PRUNE: f64 = 1e-300;

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

impl FockState {
    pub fn vacuum(modes: &[&str], cutoff: usize) -> Self {
        let mut amps = BTreeMap::new();
        amps.insert(vec![0; modes.len()], cr(1.0));
        Self { modes: modes.iter().map(|s| s.to_string()).collect(), cutoff, amps }
    }

    /// A single occupation-number basis state.
    pub fn basis(modes: &[&str], cutoff: usize, occ: Occupation) -> Result<Self> {
        if occ.len() != modes.len() {
            return Err(Error::Dimension(format!("{} occupations for {} modes", occ.len(), modes.len())));
        }
        if occ.iter().sum::<usize>() > cutoff {
            return Err(Error::Domain(format!("{occ:?} exceeds the cutoff {cutoff}")));
        }
        let mut s = Self::vacuum(modes, cutoff);
        s.amps.clear();
        s.amps.insert(occ, cr(1.0));
        Ok(s)
    }

    /// Mode names `"{s}V"`, `"{s}H"` for each spatial label.
    pub fn polarization_modes(spatial: &[&str]) -> Vec<String> {
        spatial.iter().flat_map(|s| [format!("{s}V"), format!("{s}H")]).collect()
    }

    /// Polarization qubits, one photon per spatial mode: `Σ c_p Π_i a_{i,p_i}† |vac⟩`.
    /// Basis index of `state` follows the qubit order of `spatial` (V = 0, H = 1).
    pub fn from_polarization_qubits(spatial: &[&str], state: &CVec, cutoff: usize) -> Result<Self> {
        let k = spatial.len();
        if state.len() != 1 << k {
            return Err(Error::Dimension(format!("{} amplitudes for {k} polarization qubits", state.len())));
        }
        let names = Self::polarization_modes(spatial);
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let mut s = Self::vacuum(&refs, cutoff.max(k));
        s.amps.clear();
        for (idx, &amp) in state.iter().enumerate() {
            if amp.norm_sqr() == 0.0 {
                continue;
            }
            let mut occ = vec![0; 2 * k];
            for (q, slot) in (0..k).zip(occ.chunks_mut(2)) {
                slot[(idx >> (k - 1 - q)) & 1] = 1;
            }
            s.amps.insert(occ, amp);
        }
        Ok(s)
    }

    /// Inverse of [`Self::from_polarization_qubits`] on the listed spatial modes, keeping
    /// only terms with exactly one photon in each of them and none elsewhere.
    pub fn to_polarization_qubits(&self, spatial: &[usize]) -> CVec {
        let k = spatial.len();
        let mut out = CVec::zeros(1 << k);
        'terms: for (occ, &amp) in &self.amps {
            let mut idx = 0;
            for &s in spatial {
                match (occ[2 * s], occ[2 * s + 1]) {
                    (1, 0) => idx <<= 1,
                    (0, 1) => idx = (idx << 1) | 1,
                    _ => continue 'terms,
                }
            }
            if occ.iter().sum::<usize>() != k {
                continue;
            }
            out[idx] += amp;
        }
        out
    }

    pub fn mode(&self, name: &str) -> Result<usize> {
        self.modes.iter().position(|m| m == name).ok_or_else(|| Error::Unknown(format!("mode '{name}'")))
    }

    pub fn n_modes(&self) -> usize {
        self.modes.len()
    }

    fn with_amps(&self, amps: BTreeMap<Occupation, C64>) -> Self {
        Self { modes: self.modes.clone(), cutoff: self.cutoff, amps }
    }

    /// `a_m† |ψ⟩`; terms pushed above the cutoff are dropped.
    pub fn create(&self, m: usize) -> Self {
        let mut out = BTreeMap::new();
        for (occ, &amp) in &self.amps {
            if occ.iter().sum::<usize>() >= self.cutoff {
                continue;
            }
            let mut o = occ.clone();
            o[m] += 1;
            *out.entry(o).or_insert(cr(0.0)) += amp * ((occ[m] + 1) as f64).sqrt();
        }
        self.with_amps(out)
    }

    /// `a_m |ψ⟩`.
    pub fn annihilate(&self, m: usize) -> Self {
        let mut out = BTreeMap::new();
        for (occ, &amp) in &self.amps {
            if occ[m] == 0 {
                continue;
            }
            let mut o = occ.clone();
            o[m] -= 1;
            *out.entry(o).or_insert(cr(0.0)) += amp * (occ[m] as f64).sqrt();
        }
        self.with_amps(out)
    }

    pub fn scale(&self, k: C64) -> Self {
        self.with_amps(self.amps.iter().map(|(o, &a)| (o.clone(), a * k)).collect())
    }

    pub fn add(&self, other: &FockState) -> Self {
        let mut amps = self.amps.clone();
        for (o, &a) in &other.amps {
            *amps.entry(o.clone()).or_insert(cr(0.0)) += a;
        }
        amps.retain(|_, a| a.norm_sqr() > PRUNE);
        self.with_amps(amps)
    }

    /// `(Σ_k c_k a_k†) |ψ⟩`.
    pub fn apply_linear_form(&self, coeffs: &[(usize, C64)]) -> Self {
        let mut acc = self.with_amps(BTreeMap::new());
        for &(k, c) in coeffs {
            if c.norm_sqr() > 0.0 {
                acc = acc.add(&self.create(k).scale(c));
            }
        }
        acc
    }

    /// Passive linear optics `a_m† ↦ Σ_k u_{km} a_k†`.
    pub fn linear_optics(&self, u: &CMat) -> Result<Self> {
        let n = self.n_modes();
        if u.nrows() != n || u.ncols() != n {
            return Err(Error::Dimension(format!("mode transformation is {}x{}, expected {n}", u.nrows(), u.ncols())));
        }
        let forms: Vec<Vec<(usize, C64)>> = (0..n).map(|m| (0..n).map(|k| (k, u[(k, m)])).collect()).collect();
        let mut out = self.with_amps(BTreeMap::new());
        for (occ, &amp) in &self.amps {
            let norm = occ.iter().map(|&k| factorial(k)).product::<f64>().sqrt();
            let mut term = self.with_amps(BTreeMap::from([(vec![0; n], amp / norm)]));
            for (m, &k) in occ.iter().enumerate() {
                for _ in 0..k {
                    term = term.apply_linear_form(&forms[m]);
                }
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sqr().sqrt();
        if n < 1e-14 {
            return Err(Error::Invalid("cannot normalize a zero state".into()));
        }
        Ok(self.scale(cr(1.0 / n)))
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &FockState) -> C64 {
        self.amps.iter().filter_map(|(o, a)| other.amps.get(o).map(|b| a.conj() * b)).sum()
    }

    /// Post-select the terms satisfying `keep`; returns the unnormalized branch and its weight.
    pub fn select(&self, keep: impl Fn(&[usize]) -> bool) -> (Self, f64) {
        let amps: BTreeMap<_, _> = self.amps.iter().filter(|(o, _)| keep(o)).map(|(o, &a)| (o.clone(), a)).collect();
        let branch = self.with_amps(amps);
        let w = branch.norm_sqr();
        (branch, w)
    }

    /// Photons in a group of modes, or `None` if the number varies across terms.
    pub fn photons_in(&self, modes: &[usize]) -> Option<usize> {
        let mut counts = self.amps.keys().map(|o| modes.iter().map(|&m| o[m]).sum::<usize>());
        let first = counts.next()?;
        counts.all(|c| c == first).then_some(first)
    }

    /// Correlation matrix `G_{pq} = ⟨a_p† a_q⟩` over the listed modes.
    pub fn correlations(&self, modes: &[usize]) -> CMat {
        let lowered: Vec<FockState> = modes.iter().map(|&m| self.annihilate(m)).collect();
        CMat::from_fn(modes.len(), modes.len(), |p, q| lowered[p].inner(&lowered[q]))
    }

    /// Single-particle state of the photons in `modes` (fixed photon number):
    /// `ρ = Gᵀ / n`, so that `⟨ψ|ρ|ψ⟩ = ⟨n_ψ⟩ / n`.
    pub fn one_particle_state(&self, modes: &[usize]) -> Result<CMat> {
        let n = self.photons_in(modes).ok_or_else(|| Error::Invalid("photon number in the group is not fixed".into()))?;
        if n == 0 {
            return Err(Error::Invalid("no photons in the mode group".into()));
        }
        let norm = self.norm_sqr();
        Ok(self.correlations(modes).transpose() * cr(1.0 / (n as f64 * norm)))
    }

    /// Reduced state of `modes` written in the symmetric basis `sym(n)` of `C^{modes.len()}`,
    /// for a fixed number `n` of photons in those modes.
    pub fn reduced_symmetric(&self, modes: &[usize]) -> Result<CMat> {
        let n = self.photons_in(modes).ok_or_else(|| Error::Invalid("photon number in the group is not fixed".into()))?;
        let labels = sym_labels(modes.len(), n);
        let index: BTreeMap<Vec<usize>, usize> = labels.iter().enumerate().map(|(i, l)| (l.occ.clone(), i)).collect();
        // Group amplitudes by the occupation of the complementary modes.
        let mut by_rest: BTreeMap<Vec<usize>, Vec<(usize, C64)>> = BTreeMap::new();
        for (occ, &amp) in &self.amps {
            let sub: Vec<usize> = modes.iter().map(|&m| occ[m]).collect();
            let rest: Vec<usize> = (0..occ.len()).map(|m| if modes.contains(&m) { usize::MAX } else { occ[m] }).collect();
            by_rest.entry(rest).or_default().push((index[&sub], amp));
        }
        let dim = labels.len();
        let mut rho = CMat::zeros(dim, dim);
        for terms in by_rest.values() {
            for &(i, a) in terms {
                for &(j, b) in terms {
                    rho[(i, j)] += a * b.conj();
                }
            }
        }
        Ok(rho * cr(1.0 / self.norm_sqr()))
    }

    /// Monte Carlo photon-counting record in the Fock basis (narrative use only).
    pub fn sample_counts(&self, shots: usize, seed: u64) -> BTreeMap<Occupation, usize> {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let entries: Vec<(&Occupation, f64)> = self.amps.iter().map(|(o, a)| (o, a.norm_sqr())).collect();
        let total: f64 = entries.iter().map(|e| e.1).sum();
        let mut counts = BTreeMap::new();
        for _ in 0..shots {
            let mut x = rng.gen::<f64>() * total;
            let mut pick = entries.last().map(|e| e.0);
            for (o, w) in &entries {
                if x < *w {
                    pick = Some(o);
                    break;
                }
                x -= w;
            }
            if let Some(o) = pick {
                *counts.entry(o.clone()).or_insert(0) += 1;
            }
        }
        counts
    }
}

/// Beam splitter acting on pairs of modes `(a, b)` with amplitudes `(r, t)`, `r² + t² = 1`.
/// Signs are allowed so that polarization-dependent devices with `t_H = −r_V` fit.
#[derive(Clone, Debug, PartialEq)]
pub struct BeamSplitter {
    pub pairs: Vec<(usize, usize, f64, f64)>,
}

impl BeamSplitter {
    /// Polarization-independent splitter with transmittance `T` between spatial modes.
    pub fn polarization(sa: usize, sb: usize, transmittance: f64) -> Result<Self> {
        let (r, t) = Self::amplitudes(transmittance)?;
        Ok(Self { pairs: vec![(2 * sa, 2 * sb, r, t), (2 * sa + 1, 2 * sb + 1, r, t)] })
    }

    /// Polarization-dependent splitter with amplitudes `(r_V, t_V)` and `(r_H, t_H)`.
    pub fn polarization_dependent(sa: usize, sb: usize, v: (f64, f64), h: (f64, f64)) -> Result<Self> {
        for (r, t) in [v, h] {
            if (r * r + t * t - 1.0).abs() > 1e-12 {
                return Err(Error::Domain(format!("r² + t² = {} ≠ 1", r * r + t * t)));
            }
        }
        Ok(Self { pairs: vec![(2 * sa, 2 * sb, v.0, v.1), (2 * sa + 1, 2 * sb + 1, h.0, h.1)] })
    }

    /// Splitter between two single modes (e.g. time bins).
    pub fn modes(a: usize, b: usize, transmittance: f64) -> Result<Self> {
        let (r, t) = Self::amplitudes(transmittance)?;
        Ok(Self { pairs: vec![(a, b, r, t)] })
    }

    fn amplitudes(transmittance: f64) -> Result<(f64, f64)> {
        if !(0.0..=1.0).contains(&transmittance) {
            return Err(Error::Domain(format!("transmittance {transmittance} outside [0,1]")));
        }
        Ok(((1.0 - transmittance).sqrt(), transmittance.sqrt()))
    }

    /// Mode transformation on `n` modes.
    pub fn matrix(&self, n: usize) -> CMat {
        let mut u = identity(n);
        for &(a, b, r, t) in &self.pairs {
            u[(a, a)] = cr(r);
            u[(b, a)] = cr(-t);
            u[(a, b)] = cr(t);
            u[(b, b)] = cr(r);
        }
        u
    }

    pub fn apply(&self, state: &FockState) -> Result<FockState> {
        state.linear_optics(&self.matrix(state.n_modes()))
    }
}

/// Mode permutation `a_m† ↦ a_{perm[m]}†` (a polarizing beam splitter is one).
pub fn mode_permutation(perm: &[usize]) -> Result<CMat> {
    let n = perm.len();
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(Error::Invalid(format!("{perm:?} is not a permutation")));
        }
    }
    Ok(CMat::from_fn(n, n, |k, m| if perm[m] == k { cr(1.0) } else { cr(0.0) }))
}

/// `|⟨a|b⟩|` for normalized states, a phase-insensitive equality test.
pub fn overlap_abs(a: &FockState, b: &FockState) -> f64 {
    a.inner(b).norm() / (a.norm_sqr() * b.norm_sqr()).sqrt()
}
