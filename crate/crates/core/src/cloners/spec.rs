use serde::{Deserialize, Serialize};

use super::*;
use crate::error::{Error, Result};
use crate::objectives::{r_fourier, r_phase, r_universal, r_unot, Which};
use crate::qcore::linalg::*;
use crate::qcore::{basis_ket, qubit, CMat};

/// Machine families reachable from the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClonerFamily {
    Universal,
    Fourier,
    Phase,
    PauliCustom,
    AsymUniversal,
    PcQubitNm,
    Orthopair,
    Unot,
}

impl ClonerFamily {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "universal" => Self::Universal,
            "fourier" => Self::Fourier,
            "phase" => Self::Phase,
            "pauli-custom" | "pauli" => Self::PauliCustom,
            "asym-universal" => Self::AsymUniversal,
            "pc-qubit-nm" | "pc" => Self::PcQubitNm,
            "orthopair" => Self::Orthopair,
            "unot" => Self::Unot,
            _ => return Err(Error::Unknown(format!("cloner family '{s}'"))),
        })
    }
}

/// A cloning machine request: family, dimension, copy counts and family-specific
/// asymmetry parameters (`F_A` for fourier/phase, `α` for asym-universal, `(x,y,z)` for
/// pauli-custom, an equatorial phase for pc-qubit-nm).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClonerSpec {
    pub family: ClonerFamily,
    pub d: usize,
    pub n: usize,
    pub m: usize,
    pub asymmetry: Vec<f64>,
}

/// Pauli cloner with error amplitudes `(x, y, z)` on σx, σy, σz and identity
/// amplitude `v = x + y + z`, which makes the two clones symmetric.
pub fn pauli_ansatz(x: f64, y: f64, z: f64) -> Result<AnsatzMatrix> {
    let lhs = x * x + y * y + z * z + x * y + x * z + y * z;
    if (lhs - 0.5).abs() > 1e-9 {
        return Err(Error::Domain(format!("(x,y,z) off the ellipsoid: x²+y²+z²+xy+xz+yz = {lhs}")));
    }
    let v = x + y + z;
    // E_{1,0} = σx, E_{0,1} = σz, E_{1,1} ∝ σy.
    AnsatzMatrix::from_real(2, |m, n| match (m, n) {
        (0, 0) => v,
        (1, 0) => x,
        (0, 1) => z,
        _ => y,
    })
}

impl ClonerSpec {
    pub fn new(family: ClonerFamily, d: usize, n: usize, m: usize, asymmetry: Vec<f64>) -> Self {
        Self { family, d, n, m, asymmetry }
    }

    fn one_to_two(&self) -> Result<()> {
        if self.n != 1 || self.m != 2 {
            return Err(Error::Domain(format!("{:?} cloners are 1→2 (got {}→{})", self.family, self.n, self.m)));
        }
        if self.d < 2 {
            return Err(Error::Domain(format!("dimension {} < 2", self.d)));
        }
        Ok(())
    }

    fn qubit_only(&self) -> Result<()> {
        if self.d != 2 {
            return Err(Error::Domain(format!("{:?} is defined for qubits only (got d={})", self.family, self.d)));
        }
        Ok(())
    }

    fn heisenberg_pair(&self, family: HeisenbergFamily) -> Result<Vec<f64>> {
        self.one_to_two()?;
        let a = match self.asymmetry.first() {
            Some(&fa) => match family {
                HeisenbergFamily::Universal => universal_ansatz(self.d, fa)?,
                HeisenbergFamily::Fourier => fourier_ansatz(self.d, fa)?,
                HeisenbergFamily::Phase => phase_ansatz(self.d, fa)?,
            },
            None => optimal_heisenberg(family, self.d, 0.5)?,
        };
        let s = heisenberg_choi(&a)?;
        let obj = |w| match family {
            HeisenbergFamily::Universal => r_universal(self.d, w),
            HeisenbergFamily::Fourier => r_fourier(self.d, w),
            HeisenbergFamily::Phase => r_phase(self.d, w),
        };
        Ok(vec![s.objective(&obj(Which::A)?.r), s.objective(&obj(Which::B)?.r)])
    }

    /// Fidelities read off the explicitly constructed machine.
    pub fn machine_fidelities(&self) -> Result<Vec<f64>> {
        match self.family {
            ClonerFamily::Universal => {
                if self.n == 1 && self.m == 2 && !self.asymmetry.is_empty() {
                    return self.heisenberg_pair(HeisenbergFamily::Universal);
                }
                if self.n == 0 || self.m <= self.n {
                    return Err(Error::Domain(format!("need M > N >= 1 (got N={}, M={})", self.n, self.m)));
                }
                let s = universal_nm_choi(self.d, self.n, self.m)?;
                let psi = basis_ket(self.d, 0);
                let rho = s.apply_pure(&sym_power(&psi, self.n)?)?;
                let red = partial_trace(&rho, &s.out_dims, &[0])?;
                Ok(vec![crate::qcore::expectation(&red, &psi)])
            }
            ClonerFamily::Fourier => self.heisenberg_pair(HeisenbergFamily::Fourier),
            ClonerFamily::Phase => self.heisenberg_pair(HeisenbergFamily::Phase),
            ClonerFamily::PauliCustom => {
                self.one_to_two()?;
                self.qubit_only()?;
                let [x, y, z] = <[f64; 3]>::try_from(self.asymmetry.as_slice())
                    .map_err(|_| Error::Invalid("pauli-custom needs asymmetry x,y,z".into()))?;
                let s = heisenberg_choi(&pauli_ansatz(x, y, z)?)?;
                Ok(vec![s.objective(&r_universal(2, Which::A)?.r), s.objective(&r_universal(2, Which::B)?.r)])
            }
            ClonerFamily::AsymUniversal => {
                self.one_to_two()?;
                let alpha = *self.asymmetry.first().ok_or_else(|| Error::Invalid("asym-universal needs α".into()))?;
                let beta = asym_universal_beta(self.d, alpha)?;
                let (fa, fb) = asym_universal_machine_fidelities(self.d, alpha, beta, &basis_ket(self.d, 0))?;
                Ok(vec![fa, fb])
            }
            ClonerFamily::PcQubitNm => {
                self.qubit_only()?;
                let phi = self.asymmetry.first().copied().unwrap_or(0.37);
                let shifts = pc_nm_shifts(self.n, self.m)?;
                Ok(vec![pc_qubit_nm_fidelity(self.n, self.m, shifts[0], phi)?])
            }
            ClonerFamily::Orthopair => {
                self.qubit_only()?;
                let (f, anti) = orthopair_fidelities(self.m, &qubit(1.1, 0.4))?;
                Ok(vec![f, anti])
            }
            ClonerFamily::Unot => {
                self.qubit_only()?;
                let s = unot_measure_prepare(self.n)?;
                let psi = qubit(0.9, 2.1);
                let perp = crate::qcore::CVec::from_vec(vec![-psi[1].conj(), psi[0].conj()]);
                Ok(vec![s.clone_fidelity(&sym_power(&psi, self.n)?, 0, &perp)?])
            }
        }
    }
}

/// Measure-and-prepare universal NOT on `sym(N)`: estimate with the covariant POVM
/// `(N+1)∫ψ^{⊗N}ψ^{⊗N†}dψ`, then prepare the orthogonal state. Its Choi operator is
/// `(N+1) R_UNOT`.
pub fn unot_measure_prepare(n: usize) -> Result<ChoiOperator> {
    let r = r_unot(n)?;
    let s: CMat = r.r * cr((n + 1) as f64);
    ChoiOperator::new(n + 1, vec![2], s)
}
