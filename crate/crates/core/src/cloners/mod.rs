//! Explicit constructors for cloning machines: double-Bell ansatz matrices, Choi
//! operators, isometries on symmetric subspaces and the phase-covariant maps.

mod heisenberg;
mod orthopair;
mod phasecov;
mod spec;
mod universal;

pub use heisenberg::*;
pub use orthopair::*;
pub use phasecov::*;
pub use spec::*;
pub use universal::*;

use crate::error::{Error, Result};
use crate::qcore::linalg::*;
use crate::qcore::{expectation, CMat, CVec};

/// Choi operator `S = Σ_ij |i⟩⟨j| ⊗ 𝒮(|i⟩⟨j|)` of a map from a `d_in`-dimensional input
/// to an output with subsystem dimensions `out_dims`.
#[derive(Clone, Debug)]
pub struct ChoiOperator {
    pub d_in: usize,
    pub out_dims: Vec<usize>,
    pub s: CMat,
}

impl ChoiOperator {
    pub fn new(d_in: usize, out_dims: Vec<usize>, s: CMat) -> Result<Self> {
        let n = d_in * out_dims.iter().product::<usize>();
        if s.nrows() != n || s.ncols() != n {
            return Err(Error::Dimension(format!("Choi matrix is {}x{}, expected {n}", s.nrows(), s.ncols())));
        }
        Ok(Self { d_in, out_dims, s })
    }

    pub fn d_out(&self) -> usize {
        self.out_dims.iter().product()
    }

    /// Choi operator of `ρ ↦ Tr_anc[V ρ V†]`, where `V` maps into `out ⊗ anc`.
    pub fn from_isometry(v: &CMat, out_dims: Vec<usize>, anc_dim: usize) -> Result<Self> {
        let d_in = v.ncols();
        let d_out: usize = out_dims.iter().product();
        if v.nrows() != d_out * anc_dim {
            return Err(Error::Dimension(format!("isometry has {} rows, expected {}", v.nrows(), d_out * anc_dim)));
        }
        // Reshape each column into a d_out × anc matrix K_i; then 𝒮(|i⟩⟨j|) = K_i K_j†.
        let ks: Vec<CMat> = (0..d_in)
            .map(|i| CMat::from_fn(d_out, anc_dim, |a, b| v[(a * anc_dim + b, i)]))
            .collect();
        let mut s = CMat::zeros(d_in * d_out, d_in * d_out);
        for i in 0..d_in {
            for j in 0..d_in {
                let block = &ks[i] * ks[j].adjoint();
                s.view_mut((i * d_out, j * d_out), (d_out, d_out)).copy_from(&block);
            }
        }
        Self::new(d_in, out_dims, s)
    }

    fn dims(&self) -> Vec<usize> {
        let mut dims = vec![self.d_in];
        dims.extend_from_slice(&self.out_dims);
        dims
    }

    /// `Tr_out S`.
    pub fn input_marginal(&self) -> CMat {
        let d_out = self.d_out();
        CMat::from_fn(self.d_in, self.d_in, |i, j| {
            (0..d_out).map(|a| self.s[(i * d_out + a, j * d_out + a)]).sum()
        })
    }

    /// Largest entry of `Tr_out S − I`.
    pub fn trace_preservation_error(&self) -> f64 {
        max_abs(&(self.input_marginal() - identity(self.d_in)))
    }

    pub fn min_eigenvalue(&self) -> f64 {
        min_eig(&self.s)
    }

    /// `𝒮(ρ) = Tr_in[(ρᵀ ⊗ I) S]`.
    pub fn apply(&self, rho: &CMat) -> Result<CMat> {
        if rho.nrows() != self.d_in || rho.ncols() != self.d_in {
            return Err(Error::Dimension(format!("input is {}x{}, map expects {}", rho.nrows(), rho.ncols(), self.d_in)));
        }
        let d_out = self.d_out();
        let mut out = CMat::zeros(d_out, d_out);
        for i in 0..self.d_in {
            for j in 0..self.d_in {
                let w = rho[(i, j)];
                if w == cr(0.0) {
                    continue;
                }
                out += self.s.view((i * d_out, j * d_out), (d_out, d_out)) * w;
            }
        }
        Ok(out)
    }

    pub fn apply_pure(&self, psi: &CVec) -> Result<CMat> {
        self.apply(&projector(psi))
    }

    /// Fidelity of output factor `clone` with `target` when the input is `psi_in`.
    pub fn clone_fidelity(&self, psi_in: &CVec, clone: usize, target: &CVec) -> Result<f64> {
        let out = self.apply_pure(psi_in)?;
        let red = partial_trace(&out, &self.out_dims, &[clone])?;
        Ok(expectation(&red, target))
    }

    /// `Tr[S R]`.
    pub fn objective(&self, r: &CMat) -> f64 {
        trace_product(&self.s, r).re
    }

    /// Group average `S ↦ (1/|G|) Σ_g W_g S W_g†` over a list of unitaries on `in ⊗ out`.
    pub fn twirl(&self, group: &[CMat]) -> ChoiOperator {
        if group.is_empty() {
            return self.clone();
        }
        let mut acc = CMat::zeros(self.s.nrows(), self.s.ncols());
        for w in group {
            acc += w * &self.s * w.adjoint();
        }
        ChoiOperator { d_in: self.d_in, out_dims: self.out_dims.clone(), s: acc * cr(1.0 / group.len() as f64) }
    }

    pub fn full_dims(&self) -> Vec<usize> {
        self.dims()
    }
}

/// Check that a matrix is an isometry, returning `max |V†V − I|`.
pub fn isometry_error(v: &CMat) -> f64 {
    max_abs(&(v.adjoint() * v - identity(v.ncols())))
}
