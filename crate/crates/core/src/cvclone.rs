//! Gaussian cloning of coherent states with first and second moments only.
//!
//! Every network here is linear in the mode operators, so each output is
//! `O = Σ_k u_k a_k + v_k a_k†` with real coefficients. For coherent or vacuum inputs
//! the output is a displaced thermal state with excess photon number `n̄ = Σ_k v_k²`,
//! i.e. added quadrature noise `n̄` on top of the shot noise `1/2`, and its overlap
//! with the target coherent state is `πQ(α) = 1/(1+n̄)` at unity gain.

use serde::Serialize;

use crate::error::{Error, Result};

/// Real linear combination of annihilation (`u`) and creation (`v`) operators.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeOp {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

impl ModeOp {
    /// The bare annihilation operator of mode `k` out of `modes`.
    pub fn mode(k: usize, modes: usize) -> Self {
        let mut u = vec![0.0; modes];
        u[k] = 1.0;
        ModeOp { u, v: vec![0.0; modes] }
    }

    /// Hermitian conjugate.
    pub fn dagger(&self) -> Self {
        ModeOp { u: self.v.clone(), v: self.u.clone() }
    }

    pub fn scale(&self, s: f64) -> Self {
        ModeOp { u: self.u.iter().map(|x| x * s).collect(), v: self.v.iter().map(|x| x * s).collect() }
    }

    pub fn add(&self, other: &ModeOp) -> Self {
        ModeOp {
            u: self.u.iter().zip(&other.u).map(|(a, b)| a + b).collect(),
            v: self.v.iter().zip(&other.v).map(|(a, b)| a + b).collect(),
        }
    }

    /// `[O, O†]`, which must be 1 for a physical output mode.
    pub fn commutator(&self) -> f64 {
        self.u.iter().map(|x| x * x).sum::<f64>() - self.v.iter().map(|x| x * x).sum::<f64>()
    }

    /// Excess photon number when every input is coherent or vacuum.
    pub fn added_photons(&self) -> f64 {
        self.v.iter().map(|x| x * x).sum()
    }

    /// Mean `⟨O⟩` when input mode `k` carries amplitude `amps[k]` (real amplitudes suffice
    /// for the gain bookkeeping).
    pub fn mean(&self, amps: &[f64]) -> f64 {
        self.u.iter().zip(&self.v).zip(amps).map(|((u, v), a)| (u + v) * a).sum()
    }
}

/// Beam splitter `(x, y) ↦ (r x + t y, r y − t x)` with `r = √(1−t²)`.
pub fn beam_splitter(x: &ModeOp, y: &ModeOp, t: f64) -> (ModeOp, ModeOp) {
    let r = (1.0 - t * t).sqrt();
    (x.scale(r).add(&y.scale(t)), y.scale(r).add(&x.scale(-t)))
}

/// Phase-insensitive amplifier `√G a + √(G−1) c†`.
pub fn amplifier(a: &ModeOp, idler: &ModeOp, gain: f64) -> ModeOp {
    a.scale(gain.sqrt()).add(&idler.dagger().scale((gain - 1.0).sqrt()))
}

/// Fidelity of a clone with added photon number `nbar` at unity gain.
pub fn fidelity_from_noise(nbar: f64) -> f64 {
    1.0 / (1.0 + nbar)
}

/// Parameters of a Gaussian cloner.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GaussianCloneParams {
    pub n: usize,
    pub m: usize,
    pub gamma: f64,
    pub gain: f64,
    pub t1: f64,
    pub t2: f64,
    pub nbar_a: f64,
    pub nbar_b: f64,
}

impl GaussianCloneParams {
    /// `n̄_A n̄_B − 1/4`, non-negative for every physical cloner.
    pub fn uncertainty_slack(&self) -> f64 {
        self.nbar_a * self.nbar_b - 0.25
    }
}

/// Prior distribution of the coherent amplitude.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum CoherentPrior {
    Uniform,
    /// `P(α) = exp(−|α|²/2σ²)/(2πσ²)`.
    Gaussian { sigma2: f64 },
}

impl CoherentPrior {
    /// Mean fidelity of a clone with amplitude gain `g` and added photons `nbar`:
    /// `⟨exp(−(1−g)²|α|²/(1+n̄))⟩/(1+n̄)`, using `⟨exp(−k|α|²)⟩ = 1/(1+2σ²k)`.
    pub fn mean_fidelity(&self, g: f64, nbar: f64) -> f64 {
        match *self {
            CoherentPrior::Uniform => {
                if (g - 1.0).abs() < 1e-15 {
                    fidelity_from_noise(nbar)
                } else {
                    0.0
                }
            }
            CoherentPrior::Gaussian { sigma2 } => 1.0 / (1.0 + nbar + 2.0 * sigma2 * (1.0 - g) * (1.0 - g)),
        }
    }
}

/// `(F_A, F_B) = (2/(2+e^{2γ}), 2/(2+e^{−2γ}))`.
pub fn cv_asym_fidelities(gamma: f64) -> (f64, f64) {
    (2.0 / (2.0 + (2.0 * gamma).exp()), 2.0 / (2.0 + (-2.0 * gamma).exp()))
}

/// Outputs `(A, B)` of the asymmetric 1→2 network on modes `[input, vacuum, idler]`.
pub fn asym_network(gamma: f64) -> (ModeOp, ModeOp, GaussianCloneParams) {
    let sh = gamma.sinh();
    let t1 = -(2f64.sqrt()) * sh / (1.0 + 2.0 * sh * sh).sqrt();
    let gain = 1.0 + (2.0 * gamma).cosh();
    let t2 = (2.0 * gamma).exp() / (1.0 + (4.0 * gamma).exp()).sqrt();
    let a = ModeOp::mode(0, 3);
    let vac = ModeOp::mode(1, 3);
    let idler = ModeOp::mode(2, 3);
    let (other, amp) = beam_splitter(&vac, &a, t1);
    let amp = amplifier(&amp, &idler, gain);
    let (clone_a, clone_b) = beam_splitter(&other, &amp, t2);
    let params = GaussianCloneParams {
        n: 1,
        m: 2,
        gamma,
        gain,
        t1,
        t2,
        nbar_a: clone_a.added_photons(),
        nbar_b: clone_b.added_photons(),
    };
    (clone_a, clone_b, params)
}

/// `F = MN/(MN+M−N)`.
pub fn cv_nm_fidelity(n: usize, m: usize) -> Result<f64> {
    if n == 0 || m < n {
        return Err(Error::Domain(format!("need M >= N >= 1 (got N={n}, M={m})")));
    }
    let (nf, mf) = (n as f64, m as f64);
    Ok(mf * nf / (mf * nf + mf - nf))
}

/// `F = N/(N+1)`, the `M → ∞` limit.
pub fn cv_n_inf_fidelity(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("need N >= 1".into()));
    }
    Ok(n as f64 / (n as f64 + 1.0))
}

/// Real unitary whose first column is uniform: a Householder reflection taking `e_0` to `(1,…,1)/√k`.
fn uniform_splitter(k: usize) -> Vec<Vec<f64>> {
    let s = 1.0 / (k as f64).sqrt();
    let mut w: Vec<f64> = vec![s; k];
    w[0] -= 1.0;
    let nw: f64 = w.iter().map(|x| x * x).sum();
    (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    let id = if i == j { 1.0 } else { 0.0 };
                    if nw < 1e-30 {
                        id
                    } else {
                        id - 2.0 * w[i] * w[j] / nw
                    }
                })
                .collect()
        })
        .collect()
}

/// Clone modes of the symmetric `N → M` network: merge `N` inputs, amplify by `G = M/N`,
/// split into `M` with `M−1` vacua. Modes: `N` inputs, one idler, `M−1` vacua.
pub fn nm_network(n: usize, m: usize) -> Result<(Vec<ModeOp>, GaussianCloneParams)> {
    if n == 0 || m < n {
        return Err(Error::Domain(format!("need M >= N >= 1 (got N={n}, M={m})")));
    }
    let modes = n + 1 + (m - 1);
    let merge = uniform_splitter(n);
    // Merged mode = Σ_i U_{i0} a_i (uniform combination).
    let mut merged = ModeOp { u: vec![0.0; modes], v: vec![0.0; modes] };
    for (i, row) in merge.iter().enumerate() {
        merged = merged.add(&ModeOp::mode(i, modes).scale(row[0]));
    }
    let gain = m as f64 / n as f64;
    let amp = amplifier(&merged, &ModeOp::mode(n, modes), gain);
    let split = uniform_splitter(m);
    let mut ins = vec![amp];
    ins.extend((0..m - 1).map(|k| ModeOp::mode(n + 1 + k, modes)));
    let clones: Vec<ModeOp> = (0..m)
        .map(|j| {
            let mut o = ModeOp { u: vec![0.0; modes], v: vec![0.0; modes] };
            for (k, x) in ins.iter().enumerate() {
                // Output j = Σ_k U_{kj} in_k keeps the uniform weight on the amplified mode.
                o = o.add(&x.scale(split[k][j]));
            }
            o
        })
        .collect();
    let nbar = clones[0].added_photons();
    let params = GaussianCloneParams { n, m, gamma: 0.0, gain, t1: 0.0, t2: 0.0, nbar_a: nbar, nbar_b: nbar };
    Ok((clones, params))
}

/// Gaussian cloner parameters for symmetric `N → M` cloning.
pub fn cv_params_for(n: usize, m: usize) -> Result<GaussianCloneParams> {
    Ok(nm_network(n, m)?.1)
}

/// Report of the measure-and-displace 1→2 scheme.
#[derive(Clone, Debug, Serialize)]
pub struct FeedforwardReport {
    pub gains: [f64; 2],
    pub added_noise: [f64; 2],
    pub commutators: [f64; 2],
    pub fidelities: [f64; 2],
}

/// Split the input on a balanced beam splitter, measure one half with an eight-port
/// homodyne detector (outcome operator `a₂ + ν₂†`), displace the other half by the
/// outcome, then split the result on a balanced beam splitter.
/// Modes: `[input, vacuum at BS1, heterodyne vacuum ν₂, vacuum at BS2]`.
pub fn feedforward_clone_moments() -> FeedforwardReport {
    let inv = std::f64::consts::FRAC_1_SQRT_2;
    let a = ModeOp::mode(0, 4);
    let (kept, measured) = beam_splitter(&a, &ModeOp::mode(1, 4), inv);
    let outcome = measured.add(&ModeOp::mode(2, 4).dagger());
    // measured = (v₁ − a)/√2 here, so displacing by minus the outcome gives √2 a − ν₂†.
    let displaced = kept.add(&outcome.scale(-1.0));
    let (c1, c2) = beam_splitter(&ModeOp::mode(3, 4), &displaced, inv);
    let amps = [1.0, 0.0, 0.0, 0.0];
    let report = |o: &ModeOp| (o.mean(&amps), o.added_photons(), o.commutator());
    let (g1, n1, k1) = report(&c1);
    let (g2, n2, k2) = report(&c2);
    FeedforwardReport {
        gains: [g1, g2],
        added_noise: [n1, n2],
        commutators: [k1, k2],
        fidelities: [fidelity_from_noise(n1), fidelity_from_noise(n2)],
    }
}

/// Threshold variance `σ²_th = (1+√2)/2` below which the optimal gain is clamped at `G = 1`.
pub fn finite_width_threshold() -> f64 {
    (1.0 + 2f64.sqrt()) / 2.0
}

/// Mean 1→2 fidelity with amplifier gain `g` under a Gaussian prior of variance `sigma2`:
/// `F = 2 / (G + 1 + 2σ²(2 + G − 2√(2G)))`.
pub fn finite_width_fidelity_at_gain(sigma2: f64, g: f64) -> f64 {
    2.0 / (g + 1.0 + 2.0 * sigma2 * (2.0 + g - 2.0 * (2.0 * g).sqrt()))
}

/// `(F_mean, G_opt)` for a Gaussian prior; `G_opt = 8σ⁴/(1+2σ²)²` clamped to `G ≥ 1`.
pub fn finite_width_fidelity(sigma2: f64) -> Result<(f64, f64)> {
    if !(sigma2 > 0.0) || !sigma2.is_finite() {
        return Err(Error::Domain(format!("sigma² = {sigma2} must be positive")));
    }
    let g = if sigma2 >= finite_width_threshold() {
        8.0 * sigma2 * sigma2 / ((1.0 + 2.0 * sigma2) * (1.0 + 2.0 * sigma2))
    } else {
        1.0
    };
    Ok((finite_width_fidelity_at_gain(sigma2, g), g))
}

/// Branch values of the piecewise closed form: `(4σ²+2)/(6σ²+1)` above the threshold,
/// `1/(1 + (3−2√2)σ²)` below it.
pub fn finite_width_branches(sigma2: f64) -> (f64, f64) {
    (
        (4.0 * sigma2 + 2.0) / (6.0 * sigma2 + 1.0),
        1.0 / (1.0 + (3.0 - 2.0 * 2f64.sqrt()) * sigma2),
    )
}

/// Gain solving `√M = √G √N + √(G−1) √N′`, `G ≥ 1`.
pub fn conjugate_input_gain(n: usize, n_conj: usize, m: usize) -> Result<f64> {
    if n == 0 || m < n {
        return Err(Error::Domain(format!("need M >= N >= 1 (got N={n}, M={m})")));
    }
    let (nf, ncf, mf) = (n as f64, n_conj as f64, m as f64);
    let f = |g: f64| g.sqrt() * nf.sqrt() + (g - 1.0).sqrt() * ncf.sqrt() - mf.sqrt();
    if f(1.0) > 0.0 {
        return Err(Error::Domain("no gain G >= 1 solves the amplitude equation".into()));
    }
    let (mut lo, mut hi) = (1.0, 2.0);
    while f(hi) < 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Network with `N` copies of `α` and `N′` of `α*`: merge each group, amplify with the
/// conjugate group as idler, split into `M` clones. Returns one clone and its gain.
pub fn conjugate_network(n: usize, n_conj: usize, m: usize) -> Result<(ModeOp, f64)> {
    let g = conjugate_input_gain(n, n_conj, m)?;
    // Modes: merged α-group, merged α*-group, M−1 vacua.
    let modes = 2 + (m - 1);
    let amp = amplifier(&ModeOp::mode(0, modes), &ModeOp::mode(1, modes), g);
    let split = uniform_splitter(m);
    let mut clone = amp.scale(split[0][0]);
    for k in 1..m {
        clone = clone.add(&ModeOp::mode(1 + k, modes).scale(split[k][0]));
    }
    Ok((clone, g))
}

/// Balanced conjugate-input fidelity from the network: `N = N′` copies, `M` clones.
pub fn balanced_conjugate_fidelity(n: usize, m: usize) -> Result<f64> {
    let (clone, _) = conjugate_network(n, n, m)?;
    // Merged groups carry √N α and √N α* (as α for the conjugated operator).
    let mean = clone.mean(&[(n as f64).sqrt(), (n as f64).sqrt()]);
    if (mean - 1.0).abs() > 1e-9 {
        return Err(Error::Invalid(format!("clone gain {mean} differs from 1")));
    }
    Ok(fidelity_from_noise(clone.added_photons()))
}

/// `4M²N / (4M²N + (M−N)²)`.
pub fn balanced_conjugate_formula(n: usize, m: usize) -> f64 {
    let (nf, mf) = (n as f64, m as f64);
    4.0 * mf * mf * nf / (4.0 * mf * mf * nf + (mf - nf) * (mf - nf))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn asym_network_matches_closed_form() {
        for &g in &[-1.0, -0.3, 0.0, 0.2, 1.0] {
            let (a, b, p) = asym_network(g);
            let amps = [1.0, 0.0, 0.0];
            assert!((a.mean(&amps) - 1.0).abs() < 1e-12 && (b.mean(&amps) - 1.0).abs() < 1e-12, "γ={g}");
            assert!((a.commutator() - 1.0).abs() < 1e-12 && (b.commutator() - 1.0).abs() < 1e-12);
            let (fa, fb) = cv_asym_fidelities(g);
            assert!((fidelity_from_noise(p.nbar_a) - fa).abs() < 1e-12, "γ={g}");
            assert!((fidelity_from_noise(p.nbar_b) - fb).abs() < 1e-12);
            assert!(p.uncertainty_slack().abs() < 1e-12);
        }
        let (fa, fb) = cv_asym_fidelities(0.0);
        assert!((fa - 2.0 / 3.0).abs() < 1e-15 && (fb - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn nm_network_noise() {
        for n in 1..=4 {
            for m in n..=8 {
                let (clones, p) = nm_network(n, m).unwrap();
                let mut amps = vec![1.0; n];
                amps.extend(vec![0.0; m]);
                for c in &clones {
                    assert!((c.mean(&amps) - 1.0).abs() < 1e-12);
                    assert!((c.commutator() - 1.0).abs() < 1e-12);
                    assert!((c.added_photons() - (1.0 / n as f64 - 1.0 / m as f64)).abs() < 1e-12);
                }
                assert!((fidelity_from_noise(p.nbar_a) - cv_nm_fidelity(n, m).unwrap()).abs() < 1e-12);
            }
        }
        assert!((cv_nm_fidelity(2, 3).unwrap() - 6.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn feedforward() {
        let r = feedforward_clone_moments();
        for k in 0..2 {
            assert!((r.gains[k] - 1.0).abs() < 1e-12);
            assert!((r.added_noise[k] - 0.5).abs() < 1e-12);
            assert!((r.commutators[k] - 1.0).abs() < 1e-12);
            assert!((r.fidelities[k] - 2.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn finite_width_from_prior_average() {
        // Independent route: amplifier network gain and noise, averaged over the prior,
        // maximized over G numerically.
        for &s2 in &[0.2, 0.8, 1.0, 2.0, 10.0, 100.0] {
            let prior = CoherentPrior::Gaussian { sigma2: s2 };
            let at = |gain: f64| {
                let a = ModeOp::mode(0, 3);
                let amp = amplifier(&a, &ModeOp::mode(1, 3), gain);
                let (c1, _) = beam_splitter(&amp, &ModeOp::mode(2, 3), std::f64::consts::FRAC_1_SQRT_2);
                prior.mean_fidelity(c1.mean(&[1.0, 0.0, 0.0]), c1.added_photons())
            };
            let (g_num, f_num) = crate::cloners::maximize_1d(&at, 1.0, 2.0, 400);
            let (f, g) = finite_width_fidelity(s2).unwrap();
            assert!((f - f_num).abs() < 1e-10, "σ²={s2}");
            assert!((g - g_num).abs() < 1e-4, "σ²={s2}: {g} vs {g_num}");
            assert!((at(g) - f).abs() < 1e-12);
        }
    }

    #[test]
    fn finite_width_shape() {
        let th = finite_width_threshold();
        let (b1, b2) = finite_width_branches(th);
        assert!((b1 - b2).abs() < 1e-12);
        assert!((finite_width_fidelity(10.0).unwrap().0 - 42.0 / 61.0).abs() < 1e-14);
        assert!((finite_width_fidelity(1e6).unwrap().0 - 2.0 / 3.0).abs() < 1e-5);
        assert!(finite_width_fidelity(1e-9).unwrap().0 > 1.0 - 1e-8);
        let mut last = 1.0;
        for k in 1..200 {
            let f = finite_width_fidelity(0.05 * k as f64).unwrap().0;
            assert!(f < last);
            last = f;
        }
        for &s2 in &[0.3, 1.0, 1.5, 5.0] {
            let (f, _) = finite_width_fidelity(s2).unwrap();
            let (b1, b2) = finite_width_branches(s2);
            assert!((f - if s2 >= th { b1 } else { b2 }).abs() < 1e-12);
        }
    }

    #[test]
    fn conjugate_inputs() {
        assert!((conjugate_input_gain(1, 0, 2).unwrap() - 2.0).abs() < 1e-12);
        assert!((conjugate_input_gain(1, 1, 2).unwrap() - 9.0 / 8.0).abs() < 1e-12);
        assert!((balanced_conjugate_fidelity(1, 2).unwrap() - 16.0 / 17.0).abs() < 1e-12);
        for n in 1..4 {
            for m in n..12 {
                let f = balanced_conjugate_fidelity(n, m).unwrap();
                assert!((f - balanced_conjugate_formula(n, m)).abs() < 1e-10, "N={n} M={m}");
            }
            let big = balanced_conjugate_formula(n, 1_000_000);
            assert!((big - 4.0 * n as f64 / (4.0 * n as f64 + 1.0)).abs() < 1e-5);
        }
        assert!(conjugate_input_gain(3, 0, 2).is_err());
    }

    #[test]
    fn q_function_identity() {
        // πQ(β) of a thermal state summed in the Fock basis equals exp(−|β|²/(1+n̄))/(1+n̄);
        // at β = 0 it is the clone fidelity 1/(1+n̄).
        for k in 0..20 {
            let nbar = 0.15 * k as f64;
            for &x in &[0.0, 0.3, 1.2] {
                let mut term = (-x as f64).exp() / (1.0 + nbar);
                let mut sum = 0.0;
                for j in 0..400 {
                    sum += term;
                    term *= nbar / (1.0 + nbar) * x / (j as f64 + 1.0);
                }
                let expected = (-x / (1.0 + nbar)).exp() / (1.0 + nbar);
                assert!((sum - expected).abs() < 1e-14);
            }
            let prior = CoherentPrior::Uniform;
            assert_eq!(prior.mean_fidelity(1.0, nbar), fidelity_from_noise(nbar));
        }
    }

    #[test]
    fn spreading_monotone() {
        for n in 1..=5 {
            for m in n..20 {
                assert!(cv_nm_fidelity(n, m).unwrap() > cv_nm_fidelity(n, m + 1).unwrap());
            }
        }
    }
}
