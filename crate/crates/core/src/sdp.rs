//! Maximize `Tr[S R]` over Choi operators `S ≥ 0` with `Tr_out S = I`, and certify the
//! optimum through the extremal conditions `(R − λ⊗I) S = 0`, `λ⊗I − R ≥ 0`.
//!
//! The solver is a scaled ADMM splitting: an affine projection onto the trace-preserving
//! set alternates with a projection onto the PSD cone, with residual balancing of the
//! penalty. The converged iterate is made exactly trace preserving by a congruence with
//! `(Tr_out Z)^{-1/2} ⊗ I` and then averaged over a symmetry group of `R`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cloners::{family_fb, maximize_1d, weyl_twirl_group, ChoiOperator, HeisenbergFamily};
use crate::error::{Error, Result};
use crate::objectives::{r_fourier, r_phase, r_universal, RObjective, Which};
use crate::qcore::linalg::*;
use crate::qcore::{pauli, sym_rep, CMat};

/// A symmetry used to project a solution onto the commutant of `R`'s covariance group.
#[derive(Clone, Debug)]
pub enum Twirl {
    /// Finite group of unitaries `W = A ⊗ B` on `in ⊗ out`, `A` acting on the input.
    Group(Vec<CMat>),
    /// Exact average over a torus of diagonal phases: entry `(i, j)` survives iff the
    /// two basis labels carry the same charge vector.
    Charges(Vec<Vec<i64>>),
}

impl Twirl {
    fn apply(&self, s: &CMat) -> CMat {
        match self {
            Twirl::Group(g) => {
                let mut acc = CMat::zeros(s.nrows(), s.ncols());
                for w in g {
                    acc += w * s * w.adjoint();
                }
                acc * cr(1.0 / g.len() as f64)
            }
            Twirl::Charges(q) => CMat::from_fn(s.nrows(), s.ncols(), |i, j| if q[i] == q[j] { s[(i, j)] } else { cr(0.0) }),
        }
    }
}

/// Charges of `in ⊗ out_1 ⊗ … ⊗ out_k` (each factor `C^d`) under `U* ⊗ U ⊗ … ⊗ U` with `U` diagonal.
pub fn phase_charges(d: usize, n_out: usize) -> Vec<Vec<i64>> {
    let dims = vec![d; n_out + 1];
    let n = d.pow((n_out + 1) as u32);
    (0..n)
        .map(|idx| {
            let dg = digits(idx, &dims);
            let mut q = vec![0i64; d];
            q[dg[0]] -= 1;
            for &o in &dg[1..] {
                q[o] += 1;
            }
            q
        })
        .collect()
}

/// Symmetries of the 1→2 objectives of a Heisenberg family.
pub fn family_symmetry(family: HeisenbergFamily, d: usize) -> Vec<Twirl> {
    let mut out = vec![Twirl::Group(weyl_twirl_group(d))];
    if family != HeisenbergFamily::Fourier {
        out.push(Twirl::Charges(phase_charges(d, 2)));
    }
    out
}

/// Pauli symmetry of the universal-NOT objective: `conj(σ_k^{sym N}) ⊗ σ_k`.
pub fn unot_symmetry(n: usize) -> Result<Vec<Twirl>> {
    let mut g = vec![identity((n + 1) * 2)];
    for s in pauli() {
        g.push(kron(&sym_rep(&s, n)?.conjugate(), &s));
    }
    Ok(vec![Twirl::Group(g)])
}

/// An instance of the cloning SDP.
#[derive(Clone, Debug)]
pub struct SdpProblem {
    pub objective: RObjective,
    pub symmetry: Vec<Twirl>,
}

impl SdpProblem {
    pub fn new(objective: RObjective) -> Result<Self> {
        Self::with_symmetry(objective, Vec::new())
    }

    /// Attach symmetries; each must leave `R` invariant.
    pub fn with_symmetry(objective: RObjective, symmetry: Vec<Twirl>) -> Result<Self> {
        let n = objective.d_in * objective.d_out();
        check_dim(n)?;
        if objective.r.nrows() != n || objective.r.ncols() != n {
            return Err(Error::Dimension(format!("R is {}x{}, expected {n}", objective.r.nrows(), objective.r.ncols())));
        }
        if hermiticity_error(&objective.r) > 1e-10 {
            return Err(Error::Invalid("objective operator is not Hermitian".into()));
        }
        for t in &symmetry {
            let dev = max_abs(&(t.apply(&objective.r) - &objective.r));
            if dev > 1e-10 {
                return Err(Error::Invalid(format!("symmetry does not leave R invariant (deviation {dev:.3e})")));
            }
        }
        Ok(Self { objective, symmetry })
    }

    pub fn d_in(&self) -> usize {
        self.objective.d_in
    }

    pub fn d_out(&self) -> usize {
        self.objective.d_out()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SdpOptions {
    /// Target accuracy of the returned value and certificate.
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for SdpOptions {
    fn default() -> Self {
        Self { tol: 1e-7, max_iter: 50_000, seed: 7 }
    }
}

/// Violations of the optimality conditions for a candidate `(S, λ)`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Residuals {
    /// `max(0, −λ_min(S))`.
    pub psd: f64,
    /// `max |Tr_out S − I|`.
    pub trace: f64,
    /// Spectral norm of `(R − λ⊗I) S`.
    pub complementarity: f64,
    /// `max(0, −λ_min(λ⊗I − R))`.
    pub dual_feasibility: f64,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Certificate {
    pub residuals: Residuals,
    pub value: f64,
    /// `Tr λ − Tr[S R]`.
    pub trace_gap: f64,
    /// Valid upper bound on the optimum: `Tr λ + d_in · dual_feasibility`.
    pub upper_bound: f64,
    pub certified: bool,
}

#[derive(Clone, Debug)]
pub struct SdpSolution {
    pub s: ChoiOperator,
    pub value: f64,
    pub lambda: CMat,
    pub residuals: Residuals,
    pub certified: bool,
    pub converged: bool,
    pub iterations: usize,
    /// ADMM primal and dual residuals at exit.
    pub admm_primal: f64,
    pub admm_dual: f64,
}

/// `Tr_out M` for `M` on `in ⊗ out`.
fn trace_out(m: &CMat, d_in: usize, d_out: usize) -> CMat {
    CMat::from_fn(d_in, d_in, |i, j| (0..d_out).map(|a| m[(i * d_out + a, j * d_out + a)]).sum())
}

fn spectral_norm(m: &CMat) -> f64 {
    m.clone().singular_values().iter().copied().fold(0.0, f64::max)
}

/// `λ = Herm(Tr_out[R S])`.
pub fn lagrange_multiplier(s: &ChoiOperator, r: &CMat) -> CMat {
    hermitian_part(&trace_out(&(r * &s.s), s.d_in, s.d_out()))
}

/// `d_in · λ_max(R)`, an upper bound on `Tr[S R]` over trace-preserving `S`.
pub fn eig_bound(r: &RObjective) -> f64 {
    r.d_in as f64 * r.max_eigenvalue()
}

/// Evaluate the optimality conditions for `S` with `λ = Herm(Tr_out[R S])`.
pub fn check_certificate(s: &ChoiOperator, r: &RObjective, tol: f64) -> Certificate {
    let lambda = lagrange_multiplier(s, &r.r);
    certificate_with(s, r, &lambda, tol)
}

fn certificate_with(s: &ChoiOperator, r: &RObjective, lambda: &CMat, tol: f64) -> Certificate {
    let d_out = s.d_out();
    let lam_full = kron(lambda, &identity(d_out));
    let slack = &lam_full - &r.r;
    let residuals = Residuals {
        psd: (-s.min_eigenvalue()).max(0.0),
        trace: s.trace_preservation_error(),
        complementarity: spectral_norm(&((&r.r - &lam_full) * &s.s)).max(0.0),
        dual_feasibility: (-min_eig(&slack)).max(0.0),
    };
    let value = s.objective(&r.r);
    let tr_lambda = trace(lambda).re;
    let trace_gap = tr_lambda - value;
    let certified = residuals.psd < tol
        && residuals.trace < tol
        && residuals.complementarity < tol
        && residuals.dual_feasibility < tol
        && trace_gap.abs() < tol;
    Certificate {
        residuals,
        value,
        trace_gap,
        upper_bound: tr_lambda + s.d_in as f64 * residuals.dual_feasibility,
        certified,
    }
}

fn seeded_start(n: usize, d_in: usize, d_out: usize, seed: u64) -> CMat {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = CMat::from_fn(n, n, |_, _| c(gauss(&mut rng), gauss(&mut rng)));
    let z = &g * g.adjoint() + identity(n) * cr(n as f64);
    make_trace_preserving(&z, d_in, d_out)
}

/// `(L^{-1/2} ⊗ I) Z (L^{-1/2} ⊗ I)` with `L = Tr_out Z`; preserves positivity.
fn make_trace_preserving(z: &CMat, d_in: usize, d_out: usize) -> CMat {
    let l = trace_out(z, d_in, d_out);
    let inv_sqrt = herm_apply(&l, |x| if x > 1e-300 { 1.0 / x.sqrt() } else { 0.0 });
    let k = kron(&inv_sqrt, &identity(d_out));
    hermitian_part(&(&k * z * &k))
}

/// Run the solver. Never fails on non-convergence: the returned solution carries
/// `converged` and its residuals. See [`solve`] for the checked variant.
pub fn solve_with(problem: &SdpProblem, opts: &SdpOptions) -> SdpSolution {
    solve_from(problem, opts, None).0
}

/// ADMM state `(Z, U, ρ)` that can seed a neighbouring problem.
type WarmStart = (CMat, CMat, f64);

fn solve_from(problem: &SdpProblem, opts: &SdpOptions, warm: Option<WarmStart>) -> (SdpSolution, WarmStart) {
    let (d_in, d_out) = (problem.d_in(), problem.d_out());
    let n = d_in * d_out;
    let r = &problem.objective.r;
    let id_out = identity(d_out);
    let id_in = identity(d_in);
    let proj_affine = |y: &CMat| -> CMat {
        let excess = trace_out(y, d_in, d_out) - &id_in;
        y - kron(&excess, &id_out) * cr(1.0 / d_out as f64)
    };

    // Inner stopping threshold: the certificate is computed after the TP correction and
    // twirl, which inherit the iterate error, so iterate well below `tol`.
    let inner = (opts.tol * 1e-3).max(1e-13);
    let scale = max_abs(r).max(1e-300);
    // Both projections commute with the symmetries of R, so a symmetric start keeps every
    // iterate in the commutant.
    let (mut z, mut u, mut rho) = warm.unwrap_or_else(|| {
        let mut z0 = seeded_start(n, d_in, d_out, opts.seed);
        for t in &problem.symmetry {
            z0 = t.apply(&z0);
        }
        (z0, CMat::zeros(n, n), scale)
    });
    let (mut primal, mut dual) = (f64::INFINITY, f64::INFINITY);
    let mut iterations = 0;
    let mut converged = false;
    let sqrt_n = (n as f64).sqrt();
    while iterations < opts.max_iter {
        iterations += 1;
        let x = proj_affine(&(&z - &u + r * cr(1.0 / rho)));
        let z_old = std::mem::replace(&mut z, project_psd(&(&x + &u)));
        u += &x - &z;
        primal = (&x - &z).norm() / sqrt_n;
        dual = rho * (&z - &z_old).norm() / sqrt_n / scale;
        if primal < inner && dual < inner {
            converged = true;
            break;
        }
        if iterations % 20 == 0 {
            if primal > 10.0 * dual {
                rho *= 2.0;
                u *= cr(0.5);
            } else if dual > 10.0 * primal {
                rho *= 0.5;
                u *= cr(2.0);
            }
        }
    }

    let state = (z.clone(), u, rho);
    let mut s_mat = make_trace_preserving(&z, d_in, d_out);
    for t in &problem.symmetry {
        s_mat = t.apply(&s_mat);
    }
    let s = ChoiOperator { d_in, out_dims: problem.objective.out_dims.clone(), s: hermitian_part(&s_mat) };
    let cert = check_certificate(&s, &problem.objective, opts.tol);
    let lambda = lagrange_multiplier(&s, r);
    let sol = SdpSolution {
        value: cert.value,
        s,
        lambda,
        residuals: cert.residuals,
        certified: cert.certified,
        converged,
        iterations,
        admm_primal: primal,
        admm_dual: dual,
    };
    (sol, state)
}

/// Solve to tolerance `tol` with default options; non-convergence is an error.
pub fn solve(problem: &SdpProblem, tol: f64) -> Result<SdpSolution> {
    let sol = solve_with(problem, &SdpOptions { tol, ..SdpOptions::default() });
    if !sol.converged {
        return Err(Error::NotConverged { iterations: sol.iterations, primal: sol.admm_primal, dual: sol.admm_dual });
    }
    Ok(sol)
}

/// One point of an SDP trade-off curve together with its closed-form comparison.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct TradeoffPoint {
    pub p: f64,
    pub fa: f64,
    pub fb: f64,
    pub value: f64,
    /// Closed-form clone-B fidelity at the solver's `F_A`.
    pub fb_closed_form: f64,
    /// `max_{F_A} p F_A + (1−p) F_B(F_A)` along the closed-form curve.
    pub value_closed_form: f64,
    pub certified: bool,
    pub converged: bool,
}

/// Weighted objective `p R_A + (1−p) R_B` of a Heisenberg family.
pub fn family_objective(family: HeisenbergFamily, d: usize, which: Which) -> Result<RObjective> {
    match family {
        HeisenbergFamily::Universal => r_universal(d, which),
        HeisenbergFamily::Fourier => r_fourier(d, which),
        HeisenbergFamily::Phase => r_phase(d, which),
    }
}

/// Best value of `p F_A + (1−p) F_B` along a family's closed-form curve.
pub fn closed_form_tradeoff_value(family: HeisenbergFamily, d: usize, p: f64) -> Result<f64> {
    let lo = 1.0 / d as f64;
    family_fb(family, d, lo)?;
    let f = |fa: f64| p * fa + (1.0 - p) * family_fb(family, d, fa).unwrap_or(f64::NEG_INFINITY);
    Ok(maximize_1d(&f, lo, 1.0, 400).1)
}

/// SDP trade-off curve `(F_A, F_B)` over a grid of weights `p ∈ (0, 1)`. Each point is
/// warm-started from the previous one.
pub fn asym_tradeoff(family: HeisenbergFamily, d: usize, grid: &[f64], opts: &SdpOptions) -> Result<Vec<TradeoffPoint>> {
    if let Some(&p) = grid.iter().find(|&&p| !(p > 0.0 && p < 1.0)) {
        return Err(Error::Domain(format!("trade-off weight p = {p} outside (0,1)")));
    }
    let ra = family_objective(family, d, Which::A)?;
    let rb = family_objective(family, d, Which::B)?;
    let mut warm = None;
    grid.iter()
        .map(|&p| {
            let problem = SdpProblem::with_symmetry(family_objective(family, d, Which::Convex(p))?, family_symmetry(family, d))?;
            let (sol, state) = solve_from(&problem, opts, warm.take());
            warm = Some(state);
            let fa = sol.s.objective(&ra.r);
            let fb = sol.s.objective(&rb.r);
            Ok(TradeoffPoint {
                p,
                fa,
                fb,
                value: sol.value,
                fb_closed_form: family_fb(family, d, fa.clamp(1.0 / d as f64, 1.0))?,
                value_closed_form: closed_form_tradeoff_value(family, d, p)?,
                certified: sol.certified,
                converged: sol.converged,
            })
        })
        .collect()
}
