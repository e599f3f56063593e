use clonekit::cloners::*;
use clonekit::cvclone::{cv_params_for, fidelity_from_noise};
use clonekit::objectives::evaluate;
use clonekit::{Error, Result};

/// Closed-form and machine values for one clone.
pub struct Row {
    pub clone: &'static str,
    pub closed_form: f64,
    pub machine: f64,
}

fn pair(closed: (f64, f64), machine: &[f64]) -> Vec<Row> {
    vec![
        Row { clone: "A", closed_form: closed.0, machine: machine[0] },
        Row { clone: "B", closed_form: closed.1, machine: machine[1] },
    ]
}

fn heisenberg(family: HeisenbergFamily, spec: &ClonerSpec) -> Result<Vec<Row>> {
    let machine = spec.machine_fidelities()?;
    let d = spec.d as f64;
    let closed = match spec.asymmetry.first() {
        Some(&fa) => (fa, family_fb(family, spec.d, fa)?),
        None => {
            let f = match family {
                HeisenbergFamily::Universal => evaluate("univ_12_qudit", &[("d", d)])?,
                HeisenbergFamily::Phase if spec.d == 2 => evaluate("pc_12_qubit", &[])?,
                HeisenbergFamily::Phase => evaluate("pc_12_qudit", &[("d", d)])?,
                HeisenbergFamily::Fourier if spec.d == 2 => evaluate("pc_12_qubit", &[])?,
                HeisenbergFamily::Fourier => evaluate("fourier_12_qudit", &[("d", d)])?,
            };
            (f, f)
        }
    };
    Ok(pair(closed, &machine))
}

/// Evaluate a family at the requested parameters. `cv` is handled here as well since it
/// has no Choi operator.
pub fn rows(family: &str, d: usize, n: usize, m: usize, asymmetry: Vec<f64>) -> Result<Vec<Row>> {
    if family == "cv" {
        let closed = evaluate("cv_nm", &[("n", n as f64), ("m", m as f64)])?;
        let machine = fidelity_from_noise(cv_params_for(n, m)?.nbar_a);
        return Ok(vec![Row { clone: "each", closed_form: closed, machine }]);
    }
    let fam = ClonerFamily::parse(family)?;
    let spec = ClonerSpec::new(fam, d, n, m, asymmetry);
    let (df, nf, mf) = (d as f64, n as f64, m as f64);
    match fam {
        ClonerFamily::Universal if n == 1 && m == 2 && !spec.asymmetry.is_empty() => heisenberg(HeisenbergFamily::Universal, &spec),
        ClonerFamily::Universal => {
            let closed = evaluate("univ_nm_qudit", &[("d", df), ("n", nf), ("m", mf)])?;
            let machine = spec.machine_fidelities()?;
            Ok(vec![Row { clone: "each", closed_form: closed, machine: machine[0] }])
        }
        ClonerFamily::Fourier => heisenberg(HeisenbergFamily::Fourier, &spec),
        ClonerFamily::Phase => heisenberg(HeisenbergFamily::Phase, &spec),
        ClonerFamily::PauliCustom => {
            let machine = spec.machine_fidelities()?;
            let [x, y, z] = <[f64; 3]>::try_from(spec.asymmetry.as_slice()).map_err(|_| Error::Invalid("pauli needs --asymmetry x,y,z".into()))?;
            let closed = family_fidelities(HeisenbergFamily::Universal, &pauli_ansatz(x, y, z)?);
            Ok(pair(closed, &machine))
        }
        ClonerFamily::AsymUniversal => {
            let machine = spec.machine_fidelities()?;
            let alpha = spec.asymmetry[0];
            // The registry labels the clones the other way round from the isometry.
            let closed = (
                evaluate("univ_asym_b", &[("d", df), ("alpha", alpha)])?,
                evaluate("univ_asym_a", &[("d", df), ("alpha", alpha)])?,
            );
            Ok(pair(closed, &machine))
        }
        ClonerFamily::PcQubitNm => {
            let closed = if n == 1 {
                evaluate("pc_1m_qubit", &[("m", mf)])?
            } else {
                evaluate("pc_nm_qubit", &[("n", nf), ("m", mf)])?
            };
            let machine = spec.machine_fidelities()?;
            Ok(vec![Row { clone: "each", closed_form: closed, machine: machine[0] }])
        }
        ClonerFamily::Orthopair => {
            let closed = evaluate("orthopair_nm", &[("m", mf)])?;
            let machine = spec.machine_fidelities()?;
            Ok(vec![Row { clone: "each", closed_form: closed, machine: machine[0] }])
        }
        ClonerFamily::Unot => {
            let closed = evaluate("unot", &[("n", nf)])?;
            let machine = spec.machine_fidelities()?;
            Ok(vec![Row { clone: "anti", closed_form: closed, machine: machine[0] }])
        }
    }
}
