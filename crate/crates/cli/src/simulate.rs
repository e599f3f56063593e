use clap::{Args, Subcommand};
use serde_json::{json, Value};

use clonekit::cvclone::feedforward_clone_moments;
use clonekit::objectives::evaluate;
use clonekit::optics::*;
use clonekit::qcore::qubit;
use clonekit::{Error, Result};

use crate::output::num;

#[derive(Subcommand, Debug)]
pub enum Scenario {
    /// Stimulated down-conversion cloner, post-selected on M signal photons.
    Pdc(PdcArgs),
    /// Beam-splitter symmetrization of the input with blank photons.
    Symmetrize(SymArgs),
    /// Asymmetric filter on a symmetric-cloner output, or partial teleportation.
    Filter(FilterArgs),
    /// Phase-covariant beam-splitter cloner.
    PcBs(PcBsArgs),
    /// Down-conversion fed with an orthogonal pair.
    Orthopair(OrthopairArgs),
    /// Measure-and-displace Gaussian 1 → 2 cloner.
    CvFeedforward,
}

#[derive(Args, Debug)]
pub struct PdcArgs {
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    /// Mode dimension: 2 for polarization, d > 2 for time bins.
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    /// Gain parameter λ = tanh(g), in [0, 1).
    #[arg(long, default_value_t = 0.1)]
    pub lambda: f64,
}

#[derive(Args, Debug)]
pub struct SymArgs {
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    /// Input Bloch angles.
    #[arg(long, default_value_t = 0.7)]
    pub theta: f64,
    #[arg(long, default_value_t = 0.2)]
    pub phi: f64,
    /// Use a singlet blank and report the anti-clone (1 → 2 only).
    #[arg(long)]
    pub singlet: bool,
}

#[derive(Args, Debug)]
pub struct FilterArgs {
    /// Filter parameter a ∈ [0, 1]; the reflectance is (1+a)/2.
    #[arg(long, default_value_t = 0.5)]
    pub a: f64,
    #[arg(long, default_value_t = 0.7)]
    pub theta: f64,
    #[arg(long, default_value_t = 0.2)]
    pub phi: f64,
    /// Feed |ψ⟩ and a singlet instead of a symmetric-cloner output.
    #[arg(long)]
    pub teleport: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum PcBsKind {
    PolarizationDependent,
    EqualReflectance,
}

#[derive(Args, Debug)]
pub struct PcBsArgs {
    /// Reflectance r² (of V for the polarization-dependent splitter).
    #[arg(long)]
    pub r2: Option<f64>,
    #[arg(long, value_enum, default_value_t = PcBsKind::PolarizationDependent)]
    pub scheme: PcBsKind,
}

#[derive(Args, Debug)]
pub struct OrthopairArgs {
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    /// Gain λ; defaults to the optimal gain for M.
    #[arg(long)]
    pub lambda: Option<f64>,
}

fn deviation(a: f64, b: f64) -> Value {
    num((a - b).abs())
}

pub fn run(s: &Scenario) -> Result<Value> {
    match s {
        Scenario::Pdc(a) => pdc(a),
        Scenario::Symmetrize(a) => symmetrize(a),
        Scenario::Filter(a) => filter(a),
        Scenario::PcBs(a) => pc_bs(a),
        Scenario::Orthopair(a) => orthopair(a),
        Scenario::CvFeedforward => Ok(cv_feedforward()),
    }
}

fn pdc(a: &PdcArgs) -> Result<Value> {
    let geometry = match a.d {
        2 => PdcGeometry::QubitSinglet,
        d if d > 2 => PdcGeometry::QuditTimeBin(d),
        d => return Err(Error::Domain(format!("mode dimension {d} < 2"))),
    };
    let params = PdcParams::new(a.lambda, geometry)?;
    let r = pdc_clone(&params, a.n, a.m)?;
    let exact = if a.m > a.n { Some(dc_qudit_fidelity(a.n, a.m, a.d)?) } else { None };
    Ok(json!({
        "scenario": "pdc",
        "d": a.d,
        "n": a.n,
        "m": a.m,
        "lambda": num(a.lambda),
        "probability": num(r.branch.probability),
        "truncation_deficit": num(r.branch.deficit),
        "fidelity": num(r.fidelity),
        "fidelity_exact": exact.map(|q| format!("{}/{}", q.numer(), q.denom())),
        "registry": num(r.registry),
        "abs_delta": deviation(r.fidelity, r.registry),
    }))
}

fn symmetrize(a: &SymArgs) -> Result<Value> {
    let psi = qubit(a.theta, a.phi);
    if a.n == 1 && a.m == 2 {
        let blank = if a.singlet { Blank::Singlet } else { Blank::maximally_mixed() };
        let r = clone_via_symmetrization(&psi, &blank)?;
        let registry = evaluate("univ_nm_qubit", &[("n", 1.0), ("m", 2.0)])?;
        return Ok(json!({
            "scenario": "symmetrize",
            "n": 1,
            "m": 2,
            "blank": if a.singlet { "singlet" } else { "mixed" },
            "probability": num(r.probability),
            "stage_probabilities": [num(r.stage_probabilities[0]), num(r.stage_probabilities[1])],
            "fidelities": [num(r.clone_fidelities[0]), num(r.clone_fidelities[1])],
            "anti_clone_fidelity": r.anti_clone_fidelity.map(num),
            "truncation_deficit": num(0.0),
            "registry": num(registry),
            "abs_delta": deviation(r.clone_fidelities[0], registry),
        }));
    }
    if a.singlet {
        return Err(Error::Domain("the singlet blank is defined for 1 → 2 only".into()));
    }
    let r = symmetrization_cloner(&psi, a.n, a.m)?;
    let registry = evaluate("univ_nm_qubit", &[("n", a.n as f64), ("m", a.m as f64)])?;
    Ok(json!({
        "scenario": "symmetrize",
        "n": a.n,
        "m": a.m,
        "blank": "mixed",
        "probability": num(r.probability),
        "fidelity": num(r.fidelity),
        "truncation_deficit": num(0.0),
        "registry": num(registry),
        "abs_delta": deviation(r.fidelity, registry),
    }))
}

fn filter(a: &FilterArgs) -> Result<Value> {
    let psi = qubit(a.theta, a.phi);
    let (out, p) = if a.teleport {
        (partial_teleportation(&psi, a.a)?, teleport_p(a.a))
    } else {
        (asym_filter(&symmetric_cloner_output(&psi)?, a.a)?, filter_p(a.a))
    };
    let fa = qubit_fidelity(&out.state, 0, &psi)?;
    let fb = qubit_fidelity(&out.state, 1, &psi)?;
    let (ca, cb) = filter_fidelities(p)?;
    Ok(json!({
        "scenario": "filter",
        "route": if a.teleport { "teleportation" } else { "symmetric-cloner" },
        "a": num(a.a),
        "p": num(p),
        "probability": num(out.probability),
        "fidelities": [num(fa), num(fb)],
        "truncation_deficit": num(0.0),
        "registry": [num(ca), num(cb)],
        "abs_delta": num((fa - ca).abs().max((fb - cb).abs())),
    }))
}

fn pc_bs(a: &PcBsArgs) -> Result<Value> {
    let r = match a.r2 {
        Some(r2) if (0.0..=1.0).contains(&r2) => r2.sqrt(),
        Some(r2) => return Err(Error::Domain(format!("r² = {r2} outside [0, 1]"))),
        None => pc_bs_optimal_r(),
    };
    let (scheme, name) = match a.scheme {
        PcBsKind::PolarizationDependent => (PcBsScheme::PolarizationDependent { r_v: r }, "polarization-dependent"),
        PcBsKind::EqualReflectance => (PcBsScheme::EqualReflectance { r }, "equal-reflectance"),
    };
    let rep = pc_beamsplitter_cloner(scheme)?;
    let registry = match a.scheme {
        PcBsKind::EqualReflectance => rep.formula,
        PcBsKind::PolarizationDependent => None,
    };
    Ok(json!({
        "scenario": "pc-bs",
        "scheme": name,
        "r2": num(r * r),
        "probability": num(rep.probability),
        "vv_probability": num(rep.vv_probability),
        "fidelity": num(rep.fidelity),
        "truncation_deficit": num(0.0),
        "registry": registry.map(num),
        "optimal_registry": num(evaluate("pc_12_qubit", &[])?),
        "abs_delta": registry.map(|f| deviation(rep.fidelity, f)),
    }))
}

fn orthopair(a: &OrthopairArgs) -> Result<Value> {
    use clonekit::objectives::orthopair_y_opt;
    let lambda = match a.lambda {
        Some(l) => l,
        None => lambda_from_y(orthopair_y_opt(a.m as f64))?,
    };
    let r = orthopair_pdc(lambda, a.m)?;
    let registry = if r.registry.is_nan() { None } else { Some(r.registry) };
    Ok(json!({
        "scenario": "orthopair",
        "m": a.m,
        "lambda": num(lambda),
        "y": num(r.y),
        "probability": num(r.branch.probability),
        "truncation_deficit": num(r.branch.deficit),
        "fidelity": num(r.clone_fidelity),
        "anti_clone_fidelity": num(r.anti_clone_fidelity),
        "registry": registry.map(num),
        "abs_delta": registry.map(|f| deviation(r.clone_fidelity, f)),
    }))
}

fn cv_feedforward() -> Value {
    let r = feedforward_clone_moments();
    let registry = evaluate("cv_12", &[]).unwrap_or(f64::NAN);
    json!({
        "scenario": "cv-feedforward",
        "probability": num(1.0),
        "gains": [num(r.gains[0]), num(r.gains[1])],
        "added_noise": [num(r.added_noise[0]), num(r.added_noise[1])],
        "commutators": [num(r.commutators[0]), num(r.commutators[1])],
        "fidelities": [num(r.fidelities[0]), num(r.fidelities[1])],
        "truncation_deficit": num(0.0),
        "registry": num(registry),
        "abs_delta": num((r.fidelities[0] - registry).abs().max((r.fidelities[1] - registry).abs())),
    })
}
