//! Finite-dimensional Hilbert-space algebra: states, Bell bases, Weyl-Heisenberg
//! error operators and the symmetric subspace.
//!
//! Basis order is mixed radix with the leftmost subsystem most significant, and
//! the phase root is `γ = exp(2πi/d)`.

pub mod linalg;
mod sym;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use linalg::{c, cr, CMat, CVec, C64, HERM_TOL};
use linalg::*;
pub use sym::{
    binomial, lowering_on_sym, raising_on_sym, sym_basis_vector, sym_dim, sym_isometry, sym_labels,
    sym_hopping, sym_one_body, sym_one_body_mixed, sym_rep, symmetric_projector, SymBasisLabel,
};

/// Pure state over a tensor-product basis.
#[derive(Clone, Debug, PartialEq)]
pub struct KetVector {
    pub dims: Vec<usize>,
    pub amps: CVec,
}

impl KetVector {
    pub fn new(dims: Vec<usize>, amps: CVec) -> Result<Self> {
        let n: usize = dims.iter().product();
        if n != amps.len() || dims.is_empty() {
            return Err(Error::Dimension(format!("{} amplitudes for dims {dims:?}", amps.len())));
        }
        Ok(Self { dims, amps })
    }

    /// Computational basis state `|digits⟩`.
    pub fn basis(dims: &[usize], digits: &[usize]) -> Result<Self> {
        if digits.len() != dims.len() || digits.iter().zip(dims).any(|(x, d)| x >= d) {
            return Err(Error::Dimension(format!("digits {digits:?} do not fit dims {dims:?}")));
        }
        let n = total_dim(dims)?;
        let mut amps = CVec::zeros(n);
        amps[index_of(digits, dims)] = cr(1.0);
        Ok(Self { dims: dims.to_vec(), amps })
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() < 1e-12
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::Invalid("cannot normalize the zero vector".into()));
        }
        Ok(Self { dims: self.dims.clone(), amps: &self.amps / cr(n) })
    }

    pub fn tensor(&self, other: &KetVector) -> KetVector {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        KetVector { dims, amps: kron_vec(&self.amps, &other.amps) }
    }

    pub fn inner(&self, other: &KetVector) -> C64 {
        self.amps.dotc(&other.amps)
    }

    pub fn density(&self) -> DensityOperator {
        DensityOperator { dims: self.dims.clone(), mat: projector(&self.amps) }
    }
}

/// Hermitian operator over a tensor-product basis, usually a density matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    pub dims: Vec<usize>,
    pub mat: CMat,
}

impl DensityOperator {
    /// Wraps `mat`, requiring matching shape and Hermiticity within `HERM_TOL`.
    pub fn new(dims: Vec<usize>, mat: CMat) -> Result<Self> {
        let n: usize = dims.iter().product();
        if mat.nrows() != n || mat.ncols() != n || dims.is_empty() {
            return Err(Error::Dimension(format!("{}x{} matrix for dims {dims:?}", mat.nrows(), mat.ncols())));
        }
        if !is_hermitian(&mat, HERM_TOL) {
            return Err(Error::Invalid("operator is not Hermitian".into()));
        }
        Ok(Self { dims, mat })
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self { dims: vec![d], mat: identity(d) * cr(1.0 / d as f64) }
    }

    /// Unit-trace positive semidefinite check.
    pub fn is_state(&self) -> bool {
        (self.mat.trace().re - 1.0).abs() < HERM_TOL
            && self.mat.trace().im.abs() < HERM_TOL
            && min_eig(&self.mat) >= -HERM_TOL
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }

    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityOperator> {
        let mat = linalg::partial_trace(&self.mat, &self.dims, keep)?;
        let mut k = keep.to_vec();
        k.sort_unstable();
        Ok(DensityOperator { dims: k.iter().map(|&s| self.dims[s]).collect(), mat })
    }
}

pub fn partial_trace(rho: &DensityOperator, keep: &[usize]) -> Result<DensityOperator> {
    rho.partial_trace(keep)
}

pub fn partial_transpose(op: &CMat, dims: &[usize], subsystem: usize) -> Result<CMat> {
    linalg::partial_transpose(op, dims, &[subsystem])
}

/// Label of a generalized Bell state `B_{m,n}` or error operator `E_{m,n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BellIndex {
    pub m: usize,
    pub n: usize,
    pub d: usize,
}

impl BellIndex {
    pub fn new(m: usize, n: usize, d: usize) -> Result<Self> {
        if d < 2 || m >= d || n >= d {
            return Err(Error::Domain(format!("Bell index ({m},{n}) invalid for d={d}")));
        }
        Ok(Self { m, n, d })
    }

    /// Index with integer arguments reduced modulo `d`.
    pub fn wrapped(m: i64, n: i64, d: usize) -> Self {
        let di = d as i64;
        Self { m: m.rem_euclid(di) as usize, n: n.rem_euclid(di) as usize, d }
    }

    pub fn all(d: usize) -> impl Iterator<Item = BellIndex> {
        (0..d).flat_map(move |m| (0..d).map(move |n| BellIndex { m, n, d }))
    }
}

/// `γ^k` with `γ = exp(2πi/d)`.
pub fn gamma_pow(d: usize, k: i64) -> C64 {
    let r = k.rem_euclid(d as i64) as f64;
    C64::from_polar(1.0, 2.0 * PI * r / d as f64)
}

/// `B_{m,n} = d^{-1/2} Σ_j γ^{nj} |j⟩|j+m⟩`.
pub fn bell_state(idx: BellIndex) -> KetVector {
    let d = idx.d;
    let mut amps = CVec::zeros(d * d);
    let s = 1.0 / (d as f64).sqrt();
    for j in 0..d {
        amps[j * d + (j + idx.m) % d] = gamma_pow(d, (idx.n * j) as i64) * s;
    }
    KetVector { dims: vec![d, d], amps }
}

/// `E_{m,n} = Σ_j γ^{jn} |j+m⟩⟨j|`.
pub fn error_operator(idx: BellIndex) -> CMat {
    let d = idx.d;
    let mut e = CMat::zeros(d, d);
    for j in 0..d {
        e[((j + idx.m) % d, j)] = gamma_pow(d, (j * idx.n) as i64);
    }
    e
}

/// Normalized maximally entangled state `Σ_j |jj⟩/√d`.
pub fn phi_plus(d: usize) -> KetVector {
    bell_state(BellIndex { m: 0, n: 0, d })
}

/// `⟨ψ|ρ|ψ⟩`.
pub fn fidelity(rho: &DensityOperator, psi: &KetVector) -> Result<f64> {
    if rho.mat.nrows() != psi.amps.len() {
        return Err(Error::Dimension(format!(
            "state of length {} against operator of size {}",
            psi.amps.len(),
            rho.mat.nrows()
        )));
    }
    Ok(expectation(&rho.mat, &psi.amps))
}

/// Real part of `⟨v|A|v⟩`.
pub fn expectation(a: &CMat, v: &CVec) -> f64 {
    v.dotc(&(a * v)).re
}

/// Uhlmann fidelity `(Tr √(√ρ σ √ρ))²` between two density operators.
pub fn mixed_fidelity(rho: &CMat, sigma: &CMat) -> f64 {
    // Round-off eigenvalues near zero would otherwise survive the square root at ~1e-8.
    let cut = |l: f64| if l > 1e-13 { l.sqrt() } else { 0.0 };
    let sr = herm_apply(rho, cut);
    let inner = &sr * sigma * &sr;
    let t: f64 = eigvals_h(&inner).into_iter().map(cut).sum();
    t * t
}

/// Bloch vector `(x, y, z)` of a qubit operator `(I + m·σ)/2`.
pub fn bloch_vector(rho: &DensityOperator) -> Result<[f64; 3]> {
    if rho.mat.nrows() != 2 {
        return Err(Error::Dimension("Bloch vector needs a qubit".into()));
    }
    let r01 = rho.mat[(0, 1)];
    Ok([2.0 * r01.re, -2.0 * r01.im, (rho.mat[(0, 0)] - rho.mat[(1, 1)]).re])
}

pub fn bloch_state(m: [f64; 3]) -> Result<DensityOperator> {
    let len = (m[0] * m[0] + m[1] * m[1] + m[2] * m[2]).sqrt();
    if len > 1.0 + 1e-12 {
        return Err(Error::Domain(format!("Bloch vector length {len} exceeds 1")));
    }
    let mat = CMat::from_row_slice(
        2,
        2,
        &[
            cr((1.0 + m[2]) / 2.0),
            c(m[0] / 2.0, -m[1] / 2.0),
            c(m[0] / 2.0, m[1] / 2.0),
            cr((1.0 - m[2]) / 2.0),
        ],
    );
    Ok(DensityOperator { dims: vec![2], mat })
}

/// Pauli matrices `σx, σy, σz`.
pub fn pauli() -> [CMat; 3] {
    let z = cr(0.0);
    let o = cr(1.0);
    let i = c(0.0, 1.0);
    [
        CMat::from_row_slice(2, 2, &[z, o, o, z]),
        CMat::from_row_slice(2, 2, &[z, -i, i, z]),
        CMat::from_row_slice(2, 2, &[o, z, z, -o]),
    ]
}

/// Qubit state `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
pub fn qubit(theta: f64, phi: f64) -> CVec {
    CVec::from_vec(vec![cr((theta / 2.0).cos()), C64::from_polar((theta / 2.0).sin(), phi)])
}

/// Balanced state `d^{-1/2} Σ_j e^{iφ_j} |j⟩` with `φ_0 = 0`.
pub fn balanced_state(phases: &[f64]) -> CVec {
    let d = phases.len() + 1;
    let s = 1.0 / (d as f64).sqrt();
    let mut v = CVec::zeros(d);
    v[0] = cr(s);
    for (k, &p) in phases.iter().enumerate() {
        v[k + 1] = C64::from_polar(s, p);
    }
    v
}

/// Computational basis column vector `|j⟩` in dimension `d`.
pub fn basis_ket(d: usize, j: usize) -> CVec {
    let mut v = CVec::zeros(d);
    v[j] = cr(1.0);
    v
}

/// `v^{⊗k}`.
pub fn tensor_power(v: &CVec, k: usize) -> CVec {
    let mut out = CVec::from_element(1, cr(1.0));
    for _ in 0..k {
        out = kron_vec(&out, v);
    }
    out
}

/// `A^{⊗k}`.
pub fn tensor_power_op(a: &CMat, k: usize) -> CMat {
    let mut out = identity(1);
    for _ in 0..k {
        out = kron(&out, a);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn close(a: &CMat, b: &CMat, tol: f64) -> bool {
        max_abs(&(a - b)) <= tol
    }

    #[test]
    fn bell_examples() {
        let s = 1.0 / 2f64.sqrt();
        let b00 = bell_state(BellIndex::new(0, 0, 2).unwrap());
        let want = CVec::from_vec(vec![cr(s), cr(0.0), cr(0.0), cr(s)]);
        assert!((b00.amps - want).norm() < 1e-15);
        let b11 = bell_state(BellIndex::new(1, 1, 2).unwrap());
        let want = CVec::from_vec(vec![cr(0.0), cr(s), cr(-s), cr(0.0)]);
        assert!((b11.amps - want).norm() < 1e-15);
    }

    #[test]
    fn error_operator_examples() {
        let [sx, sy, sz] = pauli();
        assert!(close(&error_operator(BellIndex::new(1, 0, 2).unwrap()), &sx, 1e-15));
        assert!(close(&error_operator(BellIndex::new(0, 1, 2).unwrap()), &sz, 1e-15));
        assert!(close(&error_operator(BellIndex::new(1, 1, 2).unwrap()), &(sy * c(0.0, -1.0)), 1e-15));
        for d in 2..6 {
            assert!(close(&error_operator(BellIndex::new(0, 0, d).unwrap()), &identity(d), 0.0));
        }
    }

    #[test]
    fn bell_index_validation() {
        assert!(BellIndex::new(2, 0, 2).is_err());
        assert!(BellIndex::new(0, 0, 1).is_err());
        assert_eq!(BellIndex::wrapped(-1, 5, 3), BellIndex { m: 2, n: 2, d: 3 });
    }

    #[test]
    fn buzek_hillery_clone_density() {
        // |0⟩ → √(2/3)|00⟩|0⟩ + √(1/3)|Ψ+⟩|1⟩ on clones A, B and ancilla C.
        let mut amps = CVec::zeros(8);
        amps[0] = cr((2.0f64 / 3.0).sqrt());
        let h = (1.0f64 / 6.0).sqrt();
        amps[0b011] = cr(h);
        amps[0b101] = cr(h);
        let sigma = KetVector::new(vec![2, 2, 2], amps).unwrap().density();
        let ab = sigma.partial_trace(&[0, 1]).unwrap();
        let psi_plus = CVec::from_vec(vec![cr(0.0), cr(0.5f64.sqrt()), cr(0.5f64.sqrt()), cr(0.0)]);
        let mut want = projector(&psi_plus) * cr(1.0 / 3.0);
        want[(0, 0)] += cr(2.0 / 3.0);
        assert!(close(&ab.mat, &want, 1e-14));
        let a = sigma.partial_trace(&[0]).unwrap();
        let f = fidelity(&a, &KetVector::basis(&[2], &[0]).unwrap()).unwrap();
        assert!((f - 5.0 / 6.0).abs() < 1e-14);
    }

    #[test]
    fn bloch_round_trip_and_shrinking() {
        let rho = bloch_state([0.0, 0.0, 0.0]).unwrap();
        assert_eq!(bloch_vector(&rho).unwrap(), [0.0, 0.0, 0.0]);
        let zero = KetVector::basis(&[2], &[0]).unwrap().density();
        let m = bloch_vector(&zero).unwrap();
        assert!((m[2] - 1.0).abs() < 1e-15 && m[0].abs() < 1e-15);
        let m = [0.3, -0.4, 0.5];
        let back = bloch_vector(&bloch_state(m).unwrap()).unwrap();
        for k in 0..3 {
            assert!((back[k] - m[k]).abs() < 1e-15);
        }
        let eta = 2.0 / 3.0;
        let shrunk = bloch_state([0.0, 0.0, eta]).unwrap();
        let f = fidelity(&shrunk, &KetVector::basis(&[2], &[0]).unwrap()).unwrap();
        assert!((f - 5.0 / 6.0).abs() < 1e-15);
        assert!(bloch_state([1.0, 1.0, 0.0]).is_err());
    }

    #[test]
    fn fidelity_basic_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for d in 2..5 {
            let v = random_ket(d, &mut rng);
            let psi = KetVector::new(vec![d], v).unwrap();
            assert!((fidelity(&psi.density(), &psi).unwrap() - 1.0).abs() < 1e-12);
            let mix = DensityOperator::maximally_mixed(d);
            assert!((fidelity(&mix, &psi).unwrap() - 1.0 / d as f64).abs() < 1e-12);
        }
        let psi = KetVector::basis(&[3], &[0]).unwrap();
        assert!(fidelity(&DensityOperator::maximally_mixed(2), &psi).is_err());
    }

    #[test]
    fn mixed_fidelity_matches_pure_overlap() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let v = random_ket(3, &mut rng);
        let w = random_ket(3, &mut rng);
        let f = mixed_fidelity(&projector(&v), &projector(&w));
        let want = v.dotc(&w).norm_sqr();
        assert!((f - want).abs() < 1e-10, "{f} vs {want}");
    }

    #[test]
    fn partial_transpose_is_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let u = random_unitary(6, &mut rng);
        let once = partial_transpose(&u, &[2, 3], 1).unwrap();
        let twice = partial_transpose(&once, &[2, 3], 1).unwrap();
        assert!(close(&twice, &u, 0.0));
        assert!(partial_transpose(&u, &[2, 3], 2).is_err());
    }

    #[test]
    fn density_operator_validation() {
        let bad = CMat::from_row_slice(2, 2, &[cr(1.0), cr(1.0), cr(0.0), cr(0.0)]);
        assert!(DensityOperator::new(vec![2], bad).is_err());
        assert!(DensityOperator::new(vec![3], identity(2)).is_err());
        assert!(DensityOperator::maximally_mixed(4).is_state());
    }
}
